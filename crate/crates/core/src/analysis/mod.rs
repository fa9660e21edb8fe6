//! Distances, side-information gains, gain bounds and fading metrics of
//! index codes. Squared distances are exact rationals `numerator / den`
//! with `den` the field's energy denominator.

mod oklattice;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{IndexCode, SideInfo};
use crate::error::{Error, Result};
use crate::lattice::{gram_of_basis, min_pair_distance, sublattice_minimum};
use crate::numberfield::{AlgebraicInt, FieldFamily, Ideal, NumberField};

pub use oklattice::{build_oklattice_code, OkGain, OkLatticeCode, OkPoint};

/// `20·log10 2`, the gain of every side-information set over an
/// imaginary quadratic PID.
pub const UNIFORM_GAIN_DB: f64 = 6.020_599_913_279_624;

/// Imaginary quadratic fields with class number one.
pub const PID_IMAGINARY_QUADRATIC: [i64; 9] = [-1, -2, -3, -7, -11, -19, -43, -67, -163];

pub const DEFAULT_MAX_SCAN_K: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquaredDistance {
    pub numerator: i128,
    pub denominator: i64,
}

impl SquaredDistance {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceSource {
    /// Minimum over pairs of the sub-constellation.
    Subcode,
    /// Single remaining point: minimum of the side-information ideal lattice.
    IdealLattice,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainReport {
    pub side_info: SideInfo,
    pub d0_sq: f64,
    pub ds_sq: f64,
    pub d0_sq_exact: SquaredDistance,
    pub ds_sq_exact: SquaredDistance,
    pub ds_source: DistanceSource,
    pub rate: f64,
    pub gamma_db: f64,
    /// Gain with `d_S²` replaced by the minimum of `Ψ(Π_{k∈S} p_k)`; differs
    /// from `gamma_db` when the sub-constellation misses the shortest vectors.
    pub lattice_gamma_db: f64,
    pub lower_bound_db: Option<f64>,
    pub upper_bound_db: Option<f64>,
    pub exact_uniform: bool,
    pub minkowski_upper: f64,
}

impl GainReport {
    /// True when the gain lies within its bounds (or none apply).
    pub fn within_bounds(&self, tol: f64) -> bool {
        let lo = self.lower_bound_db.is_none_or(|l| self.gamma_db >= l - tol);
        let hi = self.upper_bound_db.is_none_or(|u| self.gamma_db <= u + tol);
        lo && hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainBounds {
    pub lower_db: f64,
    pub upper_db: f64,
    /// Every set has gain exactly `20·log10 2` (imaginary quadratic PID).
    pub exact_uniform: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FadingReport {
    pub side_info: SideInfo,
    pub diversity: usize,
    pub product_distance: f64,
    /// `|N(x_a - x_b)|` for a pair attaining the minimum product distance.
    pub min_abs_norm: i128,
    /// `Π_{k∈S} N(p_k)`, the product-distance floor for totally real fields.
    pub theoretical_floor: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverallGain {
    pub gamma_db: f64,
    pub argmin: SideInfo,
    pub reports: Vec<GainReport>,
}

/// Column basis of an ideal together with its Gram matrix under the trace form.
pub(crate) fn ideal_lattice(field: &NumberField, ideal: &Ideal) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let basis = ideal.hnf().to_vec();
    let gram = gram_of_basis(field.trace_form(), &basis);
    (basis, gram)
}

/// Shortest nonzero element of an ideal, with its energy numerator.
pub fn lattice_minimum(field: &NumberField, ideal: &Ideal) -> Result<(SquaredDistance, AlgebraicInt)> {
    if ideal.family() != field.family() {
        return Err(Error::FieldMismatch);
    }
    let (basis, gram) = ideal_lattice(field, ideal);
    let upper = (0..gram.len()).map(|i| gram[i][i] as i128).min().unwrap_or(0);
    let (v, z) = sublattice_minimum(&gram, upper, |_| true).expect("nonzero lattice");
    let x = AlgebraicInt::new(crate::lattice::apply_basis(&basis, &z));
    Ok((
        SquaredDistance {
            numerator: v,
            denominator: field.energy_denominator(),
        },
        x,
    ))
}

/// Minimum squared distance of the (un-normalized) sub-constellation left
/// after `S` is revealed with value zero.
pub fn min_distance(code: &IndexCode, s: SideInfo) -> Result<SquaredDistance> {
    min_distance_at(code, s, &vec![0; code.num_messages()])
}

/// As [`min_distance`] with an arbitrary revealed value.
pub fn min_distance_at(code: &IndexCode, s: SideInfo, fixed: &[u64]) -> Result<SquaredDistance> {
    let field = code.field();
    let ideal = code.side_info_ideal(s)?;
    let idx = code.subcode(s, fixed)?;
    if idx.len() < 2 {
        return Err(Error::UndefinedDistance);
    }
    let pts: Vec<Vec<i64>> = idx.iter().map(|&i| code.points()[i].coords.coords().to_vec()).collect();
    let (basis, gram) = ideal_lattice(field, &ideal);
    let (start, _) = lattice_minimum(field, &ideal)?;
    let v = min_pair_distance(&pts, &basis, &gram, start.numerator).expect("at least two points");
    Ok(SquaredDistance {
        numerator: v,
        denominator: field.energy_denominator(),
    })
}

/// `d_S²`, falling back to the minimum of `Ψ(Π_{k∈S} p_k)` when the
/// sub-constellation is a single point.
pub fn side_info_distance(code: &IndexCode, s: SideInfo) -> Result<(SquaredDistance, DistanceSource)> {
    match min_distance(code, s) {
        Ok(d) => Ok((d, DistanceSource::Subcode)),
        Err(Error::UndefinedDistance) => {
            let ideal = code.side_info_ideal(s)?;
            Ok((lattice_minimum(code.field(), &ideal)?.0, DistanceSource::IdealLattice))
        }
        Err(e) => Err(e),
    }
}

/// `10·log10(d_S²/d_0²) / R_S`.
pub fn gain_db(d0: SquaredDistance, ds: SquaredDistance, rate: f64) -> f64 {
    let ratio = (ds.numerator as f64 * d0.denominator as f64) / (d0.numerator as f64 * ds.denominator as f64);
    10.0 * ratio.log10() / rate
}

pub fn side_info_gain(code: &IndexCode, s: SideInfo) -> Result<GainReport> {
    if s.is_empty() {
        return Err(Error::EmptySideInfo);
    }
    let d0 = min_distance(code, SideInfo::EMPTY)?;
    gain_report(code, s, d0)
}

fn gain_report(code: &IndexCode, s: SideInfo, d0: SquaredDistance) -> Result<GainReport> {
    let (ds, source) = side_info_distance(code, s)?;
    let rate = code.rate(s)?;
    let bounds = match gain_bounds(code, s) {
        Ok(b) => Some(b),
        Err(Error::BoundsUnavailable { .. }) => None,
        Err(e) => return Err(e),
    };
    let ideal = code.side_info_ideal(s)?;
    let (lmin, _) = lattice_minimum(code.field(), &ideal)?;
    Ok(GainReport {
        side_info: s,
        d0_sq: d0.value(),
        ds_sq: ds.value(),
        d0_sq_exact: d0,
        ds_sq_exact: ds,
        ds_source: source,
        rate,
        gamma_db: gain_db(d0, ds, rate),
        lattice_gamma_db: gain_db(d0, lmin, rate),
        lower_bound_db: bounds.map(|b| b.lower_db),
        upper_bound_db: bounds.map(|b| b.upper_db),
        exact_uniform: bounds.is_some_and(|b| b.exact_uniform),
        minkowski_upper: minkowski_upper_bound(code.field(), &ideal),
    })
}

/// `Γ(C) = min_S Γ(C,S)` over all nonempty `S`, refusing more than
/// `max_k` messages.
pub fn overall_gain(code: &IndexCode, max_k: usize) -> Result<OverallGain> {
    let k = code.num_messages();
    if k > max_k {
        return Err(Error::InvalidArgument(format!(
            "{k} messages exceed the subset-scan cap of {max_k}"
        )));
    }
    let d0 = min_distance(code, SideInfo::EMPTY)?;
    let reports = SideInfo::nonempty_subsets(k)
        .map(|s| gain_report(code, s, d0))
        .collect::<Result<Vec<_>>>()?;
    let best = reports
        .iter()
        .min_by(|a, b| a.gamma_db.total_cmp(&b.gamma_db))
        .expect("K >= 1");
    Ok(OverallGain {
        gamma_db: best.gamma_db,
        argmin: best.side_info,
        reports: reports.clone(),
    })
}

/// Gain bounds for totally real and totally complex fields.
pub fn gain_bounds(code: &IndexCode, s: SideInfo) -> Result<GainBounds> {
    if s.is_empty() {
        return Err(Error::EmptySideInfo);
    }
    code.side_info_ideal(s)?;
    let norms: Vec<u64> = s.indices().iter().map(|&k| code.primes()[k].norm()).collect();
    bounds_for_norms(code.field(), &norms)
}

pub(crate) fn bounds_for_norms(field: &NumberField, norms: &[u64]) -> Result<GainBounds> {
    if let FieldFamily::Quadratic { d } = field.family() {
        if PID_IMAGINARY_QUADRATIC.contains(&d) {
            return Ok(GainBounds {
                lower_db: UNIFORM_GAIN_DB,
                upper_db: UNIFORM_GAIN_DB,
                exact_uniform: true,
            });
        }
    }
    let n = field.degree() as f64;
    let disc = field.discriminant().unsigned_abs() as f64;
    let bits: f64 = norms.iter().map(|&q| (q as f64).log2()).sum();
    let upper = if field.is_totally_real() {
        6.0 + 10.0 * disc.log10() / bits
    } else if field.is_totally_complex() {
        6.0 + 10.0 * (disc * (2.0 / std::f64::consts::PI).powf(n)).log10() / bits
    } else {
        let (r1, r2) = field.signature();
        return Err(Error::BoundsUnavailable { r1, r2 });
    };
    Ok(GainBounds {
        lower_db: 6.0,
        upper_db: upper,
        exact_uniform: false,
    })
}

/// Minkowski upper bound on the shortest nonzero vector of `Ψ(I)`.
pub fn minkowski_upper_bound(field: &NumberField, ideal: &Ideal) -> f64 {
    let (r1, r2) = field.signature();
    let n = field.degree() as f64;
    let disc = field.discriminant().unsigned_abs() as f64;
    ((r1 + r2) as f64).sqrt()
        * (disc.sqrt() * ideal.norm() as f64).powf(1.0 / n)
        * (2.0 / std::f64::consts::PI).powf(r2 as f64 / n)
}

/// Number of differing coordinates and the product of their gaps, with
/// complex embeddings counted once.
fn pair_gaps(r1: usize, a: &[f64], b: &[f64], tol: f64) -> (usize, f64) {
    let (mut count, mut product) = (0usize, 1.0f64);
    let mut take = |g: f64| {
        if g > tol {
            count += 1;
            product *= g;
        }
    };
    for i in 0..r1 {
        take((a[i] - b[i]).abs());
    }
    for j in (r1..a.len()).step_by(2) {
        let (re, im) = (a[j] - b[j], a[j + 1] - b[j + 1]);
        take((re * re + im * im).sqrt());
    }
    (count, product)
}

/// Diversity order and minimum product distance of the sub-constellation
/// left after `S` is revealed (value zero), over un-normalized points.
pub fn diversity_and_product_distance(code: &IndexCode, s: SideInfo) -> Result<FadingReport> {
    const TOL: f64 = 1e-9;
    let field = code.field();
    let idx = code.subcode(s, &vec![0; code.num_messages()])?;
    if idx.len() < 2 {
        return Err(Error::UndefinedDistance);
    }
    let (r1, _) = field.signature();
    let pts: Vec<&[f64]> = idx.iter().map(|&i| code.points()[i].embedded.as_slice()).collect();
    // (fewest differing coordinates, smallest product, pair attaining it)
    type Acc = (usize, f64, (usize, usize));
    let merge = |x: Acc, y: Acc| -> Acc {
        let product = if y.1 < x.1 || (y.1 == x.1 && y.2 < x.2) {
            (y.1, y.2)
        } else {
            (x.1, x.2)
        };
        (x.0.min(y.0), product.0, product.1)
    };
    let (diversity, product_distance, (a, b)) = (0..pts.len())
        .into_par_iter()
        .map(|a| {
            let mut acc: Acc = (usize::MAX, f64::INFINITY, (a, a));
            for b in a + 1..pts.len() {
                let (differing, product) = pair_gaps(r1, pts[a], pts[b], TOL);
                acc = merge(acc, (differing, product, (a, b)));
            }
            acc
        })
        .reduce(|| (usize::MAX, f64::INFINITY, (usize::MAX, usize::MAX)), merge);
    let diff = &code.points()[idx[a]].coords - &code.points()[idx[b]].coords;
    let min_abs_norm = field.norm(&diff).abs();
    let floor = field
        .is_totally_real()
        .then(|| code.side_info_ideal(s).map(|i| i.norm() as f64))
        .transpose()?;
    Ok(FadingReport {
        side_info: s,
        diversity,
        product_distance,
        min_abs_norm,
        theoretical_floor: floor,
    })
}

/// `½·log2(1 + snr)`, bits per real dimension.
pub fn capacity_rhs(snr: f64) -> Result<f64> {
    if !(snr >= 0.0) {
        return Err(Error::InvalidArgument(format!("snr must be nonnegative, got {snr}")));
    }
    Ok(0.5 * (1.0 + snr).log2())
}
