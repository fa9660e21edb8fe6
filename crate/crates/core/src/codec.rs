//! Lattice index codes from the CRT isomorphism
//! `O_K / (p_1 ⋯ p_K) ≅ O_K/p_1 × ⋯ × O_K/p_K`.
//!
//! Each coset of `I = Π p_k` is represented by its minimum-energy element
//! (ties broken by lexicographic coordinates); a message tuple maps to the
//! representative of `Σ e_k·w_k mod I`, scaled to unit average power.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ball_volume, enumerate_short};
use crate::numberfield::{AlgebraicInt, FieldFamily, Ideal, NumberField};

pub const DEFAULT_MAX_POINTS: u64 = 1_000_000;

/// A subset of message indices `{0, …, K-1}` (displayed 1-based).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideInfo(u64);

impl SideInfo {
    pub const EMPTY: SideInfo = SideInfo(0);

    /// From 0-based indices.
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &i in indices {
            if i >= 64 {
                return Err(Error::IndexOutOfRange(i));
            }
            bits |= 1 << i;
        }
        Ok(Self(bits))
    }

    /// From 1-based indices, as written in configs and reports.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        let zero_based = indices
            .iter()
            .map(|&i| i.checked_sub(1).ok_or(Error::IndexOutOfRange(0)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(&zero_based)
    }

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn all(k: usize) -> Self {
        Self(if k >= 64 { u64::MAX } else { (1u64 << k) - 1 })
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: SideInfo) -> bool {
        self.0 & !other.0 == 0
    }

    /// 0-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    /// Every nonempty subset of `{0, …, k-1}`, ordered by bitmask.
    pub fn nonempty_subsets(k: usize) -> impl Iterator<Item = SideInfo> {
        (1..=Self::all(k).0).map(SideInfo)
    }

    /// Compact tag for file names: `S0` for the empty set, else `S1-2`.
    pub fn tag(self) -> String {
        if self.is_empty() {
            return "S0".into();
        }
        let parts: Vec<String> = self.indices().iter().map(|i| (i + 1).to_string()).collect();
        format!("S{}", parts.join("-"))
    }

    fn check(self, k: usize) -> Result<()> {
        match self.indices().into_iter().find(|&i| i >= k) {
            Some(i) => Err(Error::IndexOutOfRange(i + 1)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for SideInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for SideInfo {
    type Err = Error;

    /// Parses `{}`, `{1,2}`, `1,2` or `1 2` (1-based).
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}');
        let idx = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad side-information set {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_based(&idx)
    }
}

impl Serialize for SideInfo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let one_based: Vec<usize> = self.indices().iter().map(|i| i + 1).collect();
        one_based.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SideInfo {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        SideInfo::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

/// A message tuple: one canonical residue of `O_K / p_k` per prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Message {
    residues: Vec<AlgebraicInt>,
}

impl Message {
    pub fn residues(&self) -> &[AlgebraicInt] {
        &self.residues
    }
}

/// One constellation point (un-normalized).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodePoint {
    /// Residue index of the point modulo each `p_k`.
    pub labels: Vec<u64>,
    pub coords: AlgebraicInt,
    /// `‖Ψ(x)‖² · energy_denominator`, exact.
    pub energy_numerator: i64,
    /// `Ψ(x)` before scaling by `gamma`.
    pub embedded: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Multiplier on the initial enumeration radius.
    pub energy_radius_factor: f64,
    /// Largest allowed `N(I)`.
    pub max_points: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            energy_radius_factor: 1.0,
            max_points: DEFAULT_MAX_POINTS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct IndexCode {
    field: NumberField,
    primes: Vec<Ideal>,
    modulus: Ideal,
    idempotents: Vec<AlgebraicInt>,
    points: Vec<CodePoint>,
    coset_to_point: Vec<u32>,
    gamma: f64,
}

fn ideal_in_field(field: &NumberField, ideal: &Ideal) -> Result<()> {
    if ideal.family() != field.family() {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// Attach prime data to `ideal`, or fail if it is not prime.
pub(crate) fn as_prime(field: &NumberField, ideal: &Ideal) -> Result<Ideal> {
    ideal_in_field(field, ideal)?;
    if ideal.prime_info().is_some() {
        return Ok(ideal.clone());
    }
    let norm = ideal.norm();
    let p = crate::arith::factorize(norm);
    if p.len() != 1 {
        return Err(Error::InvalidDesign(format!("ideal of norm {norm} is not prime")));
    }
    field
        .factor_prime(p[0].0)
        .into_iter()
        .find(|q| q == ideal)
        .ok_or_else(|| Error::InvalidDesign(format!("ideal of norm {norm} is not prime")))
}

/// CRT idempotents: `e_k ≡ 1 mod p_k`, `e_k ≡ 0 mod p_j` for `j ≠ k`,
/// each reduced modulo `Π p_j`.
pub fn crt_idempotents(field: &NumberField, primes: &[Ideal]) -> Result<Vec<AlgebraicInt>> {
    for p in primes {
        ideal_in_field(field, p)?;
    }
    for (i, a) in primes.iter().enumerate() {
        for b in &primes[i + 1..] {
            if !field.is_coprime(a, b)? {
                return Err(Error::InvalidDesign(format!(
                    "{} and {} are not coprime",
                    field.format_ideal(a),
                    field.format_ideal(b)
                )));
            }
        }
    }
    let modulus = field.multiply_all(primes)?;
    (0..primes.len())
        .map(|k| {
            let others: Vec<Ideal> = primes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, p)| p.clone())
                .collect();
            let rest = field.multiply_all(&others)?;
            let u = field.bezout_split(&primes[k], &rest)?;
            Ok(modulus.reduce(&(&field.one() - &u)))
        })
        .collect()
}

pub fn build_index_code(field: &NumberField, primes: &[Ideal]) -> Result<IndexCode> {
    build_index_code_with(field, primes, &BuildOptions::default())
}

pub fn build_index_code_with(field: &NumberField, primes: &[Ideal], opts: &BuildOptions) -> Result<IndexCode> {
    if primes.is_empty() {
        return Err(Error::InvalidDesign("at least one prime ideal is required".into()));
    }
    if !(opts.energy_radius_factor > 0.0) {
        return Err(Error::InvalidArgument("energy_radius_factor must be positive".into()));
    }
    let primes = primes.iter().map(|p| as_prime(field, p)).collect::<Result<Vec<_>>>()?;
    if let FieldFamily::Cyclotomic { m } | FieldFamily::MaximalReal { m } = field.family() {
        if let Some(info) = primes.iter().filter_map(|p| p.prime_info()).find(|i| m % i.p == 0) {
            return Err(Error::RamifiedUnsupported { p: info.p, m });
        }
    }
    let size: u128 = primes.iter().map(|p| p.norm() as u128).product();
    if size > opts.max_points as u128 {
        return Err(Error::TooLarge {
            size,
            cap: opts.max_points,
        });
    }
    let idempotents = crt_idempotents(field, &primes)?;
    let modulus = field.multiply_all(&primes)?;
    let total = modulus.norm() as usize;

    // coset index -> (energy numerator, coords) of the best representative
    let n = field.degree();
    let (_, r2) = field.signature();
    let covol = (field.discriminant().abs() as f64).sqrt() / 2f64.powi(r2 as i32);
    let ball = ball_volume(n);
    let radius = opts.energy_radius_factor * (2.0 * total as f64 * covol / ball).powf(1.0 / n as f64);
    let den = field.energy_denominator() as f64;
    let mut bound = (radius * radius * den).ceil().max(1.0) as i128;
    let best = loop {
        let mut best: Vec<Option<(i128, Vec<i64>)>> = vec![None; total];
        let mut filled = 0usize;
        enumerate_short(field.trace_form(), bound, |z, v| {
            let idx = modulus.residue_index(&AlgebraicInt::new(z.to_vec())) as usize;
            match &mut best[idx] {
                slot @ None => {
                    *slot = Some((v, z.to_vec()));
                    filled += 1;
                }
                Some((bv, bz)) => {
                    if v < *bv || (v == *bv && z < bz.as_slice()) {
                        *bv = v;
                        *bz = z.to_vec();
                    }
                }
            }
        });
        if filled == total {
            break best;
        }
        bound = bound * 3 / 2 + 1;
    };

    let radices: Vec<u64> = primes.iter().map(|p| p.norm()).collect();
    let mut points: Vec<Option<CodePoint>> = vec![None; total];
    let mut coset_to_point = vec![0u32; total];
    for (coset, slot) in best.into_iter().enumerate() {
        let (v, z) = slot.expect("every coset covered");
        let x = AlgebraicInt::new(z);
        let labels: Vec<u64> = primes.iter().map(|p| p.residue_index(&x)).collect();
        let idx = mixed_radix(&labels, &radices) as usize;
        coset_to_point[coset] = idx as u32;
        points[idx] = Some(CodePoint {
            labels,
            embedded: field.canonical_embed(&x),
            coords: x,
            energy_numerator: i64::try_from(v).expect("energy fits i64"),
        });
    }
    let points: Vec<CodePoint> = points.into_iter().map(|p| p.expect("CRT bijection")).collect();
    let gamma = normalization(&points, field.energy_denominator());
    Ok(IndexCode {
        field: field.clone(),
        primes,
        modulus,
        idempotents,
        points,
        coset_to_point,
        gamma,
    })
}

fn normalization(points: &[CodePoint], den: i64) -> f64 {
    let sum: i128 = points.iter().map(|p| p.energy_numerator as i128).sum();
    let mean = sum as f64 / (points.len() as f64 * den as f64);
    1.0 / mean.sqrt()
}

fn mixed_radix(digits: &[u64], radices: &[u64]) -> u64 {
    let mut idx = 0u64;
    let mut scale = 1u64;
    for (&d, &r) in digits.iter().zip(radices) {
        idx += d * scale;
        scale *= r;
    }
    idx
}

impl IndexCode {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn primes(&self) -> &[Ideal] {
        &self.primes
    }

    pub fn num_messages(&self) -> usize {
        self.primes.len()
    }

    /// `I = Π p_k`.
    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn idempotents(&self) -> &[AlgebraicInt] {
        &self.idempotents
    }

    /// Alphabet size `N(p_k) = p_k^{f_k}` of each message.
    pub fn alphabet(&self) -> Vec<u64> {
        self.primes.iter().map(|p| p.norm()).collect()
    }

    /// Points ordered by message index (mixed radix over the labels, first
    /// message least significant).
    pub fn points(&self) -> &[CodePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Scale giving unit average power.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `γ·Ψ(x)` for point `i`.
    pub fn normalized_point(&self, i: usize) -> Vec<f64> {
        self.points[i].embedded.iter().map(|v| v * self.gamma).collect()
    }

    /// Index of the point carrying the given labels.
    pub fn index_of_labels(&self, labels: &[u64]) -> Result<usize> {
        self.check_labels(labels)?;
        Ok(mixed_radix(labels, &self.alphabet()) as usize)
    }

    fn check_labels(&self, labels: &[u64]) -> Result<()> {
        if labels.len() != self.primes.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} message components, got {}",
                self.primes.len(),
                labels.len()
            )));
        }
        for (k, (&l, p)) in labels.iter().zip(&self.primes).enumerate() {
            if l >= p.norm() {
                return Err(Error::InvalidArgument(format!(
                    "message component {} out of range: {l} >= {}",
                    k + 1,
                    p.norm()
                )));
            }
        }
        Ok(())
    }

    pub fn message_from_labels(&self, labels: &[u64]) -> Result<Message> {
        self.check_labels(labels)?;
        Ok(Message {
            residues: labels
                .iter()
                .zip(&self.primes)
                .map(|(&l, p)| p.residue_from_index(l))
                .collect(),
        })
    }

    pub fn message_from_index(&self, idx: usize) -> Result<Message> {
        let p = self.points.get(idx).ok_or(Error::IndexOutOfRange(idx))?;
        self.message_from_labels(&p.labels)
    }

    pub fn zero_message(&self) -> Message {
        Message {
            residues: vec![self.field.zero(); self.primes.len()],
        }
    }

    /// Build a message from residues, rejecting non-canonical components.
    pub fn message(&self, residues: Vec<AlgebraicInt>) -> Result<Message> {
        let msg = Message { residues };
        self.check_message(&msg)?;
        Ok(msg)
    }

    fn check_message(&self, msg: &Message) -> Result<()> {
        if msg.residues.len() != self.primes.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} message components, got {}",
                self.primes.len(),
                msg.residues.len()
            )));
        }
        for (k, (w, p)) in msg.residues.iter().zip(&self.primes).enumerate() {
            if w.degree() != self.field.degree() || p.reduce(w) != *w {
                return Err(Error::InvalidArgument(format!(
                    "message component {} is not a canonical residue",
                    k + 1
                )));
            }
        }
        Ok(())
    }

    pub fn labels(&self, msg: &Message) -> Result<Vec<u64>> {
        self.check_message(msg)?;
        Ok(msg
            .residues
            .iter()
            .zip(&self.primes)
            .map(|(w, p)| p.residue_index(w))
            .collect())
    }

    /// Componentwise addition in `Π O_K/p_k`.
    pub fn add_messages(&self, a: &Message, b: &Message) -> Result<Message> {
        self.check_message(a)?;
        self.check_message(b)?;
        Ok(self.componentwise(a, b, |x, y| x + y))
    }

    /// Componentwise multiplication in `Π O_K/p_k`.
    pub fn mul_messages(&self, a: &Message, b: &Message) -> Result<Message> {
        self.check_message(a)?;
        self.check_message(b)?;
        Ok(self.componentwise(a, b, |x, y| self.field.mul(x, y)))
    }

    fn componentwise(
        &self,
        a: &Message,
        b: &Message,
        op: impl Fn(&AlgebraicInt, &AlgebraicInt) -> AlgebraicInt,
    ) -> Message {
        Message {
            residues: a
                .residues
                .iter()
                .zip(&b.residues)
                .zip(&self.primes)
                .map(|((x, y), p)| p.reduce(&op(x, y)))
                .collect(),
        }
    }

    /// `Σ e_k·w_k mod I` (canonical residue, not yet the min-energy representative).
    pub fn crt_combine(&self, msg: &Message) -> Result<AlgebraicInt> {
        self.check_message(msg)?;
        let sum = msg
            .residues
            .iter()
            .zip(&self.idempotents)
            .fold(self.field.zero(), |acc, (w, e)| &acc + &self.field.mul(e, w));
        Ok(self.modulus.reduce(&sum))
    }

    /// Index of the min-energy representative encoding `msg`.
    pub fn point_index(&self, msg: &Message) -> Result<usize> {
        let x = self.crt_combine(msg)?;
        let idx = self.coset_to_point[self.modulus.residue_index(&x) as usize] as usize;
        Ok(idx)
    }

    pub fn representative(&self, msg: &Message) -> Result<&CodePoint> {
        Ok(&self.points[self.point_index(msg)?])
    }

    /// Transmitted vector `γ·Ψ(x̃)`.
    pub fn encode(&self, msg: &Message) -> Result<Vec<f64>> {
        Ok(self.normalized_point(self.point_index(msg)?))
    }

    /// `w_k = x mod p_k`.
    pub fn decode_point(&self, x: &AlgebraicInt) -> Message {
        Message {
            residues: self.primes.iter().map(|p| p.reduce(x)).collect(),
        }
    }

    /// `Π_{k∈S} p_k`.
    pub fn side_info_ideal(&self, s: SideInfo) -> Result<Ideal> {
        s.check(self.primes.len())?;
        let chosen: Vec<Ideal> = s.indices().iter().map(|&k| self.primes[k].clone()).collect();
        self.field.multiply_all(&chosen)
    }

    /// Indices of the points consistent with side information: those whose
    /// label `k` equals `fixed[k]` for every `k ∈ S`. Entries of `fixed`
    /// outside `S` are ignored.
    pub fn subcode(&self, s: SideInfo, fixed: &[u64]) -> Result<Vec<usize>> {
        s.check(self.primes.len())?;
        let idx = s.indices();
        if let Some(&k) = idx
            .iter()
            .find(|&&k| k >= fixed.len() || fixed[k] >= self.primes[k].norm())
        {
            return Err(Error::InvalidArgument(format!(
                "side-information value for message {} missing or out of range",
                k + 1
            )));
        }
        Ok(self
            .points
            .iter()
            .enumerate()
            .filter(|(_, p)| idx.iter().all(|&k| p.labels[k] == fixed[k]))
            .map(|(i, _)| i)
            .collect())
    }

    /// The sub-constellation (normalized) left after `S` is revealed.
    pub fn subcode_points(&self, s: SideInfo, fixed: &Message) -> Result<Vec<Vec<f64>>> {
        let labels = self.labels(fixed)?;
        Ok(self
            .subcode(s, &labels)?
            .into_iter()
            .map(|i| self.normalized_point(i))
            .collect())
    }

    /// `R_S = (1/n) Σ_{k∈S} log2 N(p_k)` in bits per real dimension.
    pub fn rate(&self, s: SideInfo) -> Result<f64> {
        s.check(self.primes.len())?;
        let bits: f64 = s.indices().iter().map(|&k| (self.primes[k].norm() as f64).log2()).sum();
        Ok(bits / self.field.degree() as f64)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = CodeFile {
            format: CODE_FORMAT.into(),
            version: VERSION,
            field: self.field.family(),
            primes: self.primes.clone(),
            modulus: self.modulus.clone(),
            idempotents: self.idempotents.clone(),
            gamma: self.gamma,
            points: self.points.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    /// Parse and fully validate a serialized code.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: CodeFile = serde_json::from_str(text).map_err(|e| Error::CorruptFile(e.to_string()))?;
        validate(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// `format` tag of saved code files.
pub const CODE_FORMAT: &str = "latticedex-index-code";
const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CodeFile {
    format: String,
    version: u32,
    field: FieldFamily,
    primes: Vec<Ideal>,
    modulus: Ideal,
    idempotents: Vec<AlgebraicInt>,
    gamma: f64,
    points: Vec<CodePoint>,
}

fn validate(file: CodeFile) -> Result<IndexCode> {
    let bad = |msg: &str| Error::CorruptFile(msg.to_string());
    if file.format != CODE_FORMAT || file.version != VERSION {
        return Err(bad("unrecognized format or version"));
    }
    let field = NumberField::new(file.field).map_err(|e| Error::CorruptFile(e.to_string()))?;
    let n = field.degree();
    let well_formed = |i: &Ideal| {
        let h = i.hnf();
        i.family() == field.family()
            && h.len() == n
            && h.iter().all(|r| r.len() == n)
            && (0..n).all(|r| {
                h[r][r] > 0
                    && (0..n).all(|c| {
                        if c < r {
                            h[r][c] == 0
                        } else {
                            c == r || (0..h[r][r]).contains(&h[r][c])
                        }
                    })
            })
    };
    if file.primes.is_empty() || !file.primes.iter().chain([&file.modulus]).all(well_formed) {
        return Err(bad("malformed ideal"));
    }
    for p in &file.primes {
        let q = as_prime(&field, p).map_err(|e| Error::CorruptFile(e.to_string()))?;
        if q.prime_info() != p.prime_info() && p.prime_info().is_some() {
            return Err(bad("prime annotation mismatch"));
        }
    }
    let modulus = field
        .multiply_all(&file.primes)
        .map_err(|e| Error::CorruptFile(e.to_string()))?;
    if modulus != file.modulus {
        return Err(bad("modulus is not the product of the primes"));
    }
    let total = modulus.norm() as usize;
    if file.idempotents.len() != file.primes.len() || file.points.len() != total {
        return Err(bad("wrong number of idempotents or points"));
    }
    for (k, e) in file.idempotents.iter().enumerate() {
        if e.degree() != n {
            return Err(bad("idempotent has wrong degree"));
        }
        for (j, p) in file.primes.iter().enumerate() {
            let want = if j == k { field.one() } else { field.zero() };
            if p.reduce(&(e - &want)) != field.zero() {
                return Err(bad("idempotent congruences fail"));
            }
        }
    }
    let radices: Vec<u64> = file.primes.iter().map(|p| p.norm()).collect();
    let mut coset_to_point = vec![u32::MAX; total];
    let mut seen = HashSet::new();
    for (i, pt) in file.points.iter().enumerate() {
        if pt.coords.degree() != n || pt.embedded.len() != n {
            return Err(bad("point has wrong dimension"));
        }
        let labels: Vec<u64> = file.primes.iter().map(|p| p.residue_index(&pt.coords)).collect();
        if labels != pt.labels || mixed_radix(&labels, &radices) as usize != i {
            return Err(bad("point labels inconsistent"));
        }
        if field.energy_numerator(&pt.coords) != pt.energy_numerator as i128 {
            return Err(bad("point energy inconsistent"));
        }
        let coset = modulus.residue_index(&pt.coords) as usize;
        if !seen.insert(coset) {
            return Err(bad("two points share a coset"));
        }
        coset_to_point[coset] = i as u32;
    }
    let gamma = normalization(&file.points, field.energy_denominator());
    if (gamma - file.gamma).abs() > 1e-9 * gamma {
        return Err(bad("normalization inconsistent"));
    }
    Ok(IndexCode {
        field,
        primes: file.primes,
        modulus,
        idempotents: file.idempotents,
        points: file.points,
        coset_to_point,
        gamma,
    })
}
