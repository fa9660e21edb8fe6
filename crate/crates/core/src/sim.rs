//! Monte-Carlo symbol error rates over AWGN and Rayleigh broadcast channels
//! with ML detection restricted by side information.
//!
//! Received signal: `y = √SNR·(h∘x) + z`, `z ~ N(0, I/n)`, `x` a unit-power
//! constellation point. Trials run in chunks of [`CHUNK_TRIALS`], each with
//! its own ChaCha8 stream keyed by `(seed, snr, S, chunk)`, and stop rules
//! are checked only between rounds of a fixed schedule, so results do not
//! depend on the number of workers.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::codec::{IndexCode, Message, SideInfo};
use crate::error::{Error, Result};

pub const CHUNK_TRIALS: u64 = 4096;
const ROUND_CHUNKS: u64 = 32;
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Awgn,
    Rayleigh,
}

impl Channel {
    pub fn name(self) -> &'static str {
        match self {
            Channel::Awgn => "awgn",
            Channel::Rayleigh => "rayleigh",
        }
    }
}

impl std::str::FromStr for Channel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "awgn" => Ok(Channel::Awgn),
            "rayleigh" => Ok(Channel::Rayleigh),
            _ => Err(Error::InvalidConfig(format!("unknown channel {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_trials: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_errors: 10_000,
            max_trials: 100_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub channel: Channel,
    /// One Rayleigh fade per complex coordinate instead of one per real coordinate.
    #[serde(default)]
    pub fade_per_complex: bool,
    pub snr_db: Vec<f64>,
    pub side_info: Vec<SideInfo>,
    pub stop: StopRule,
    pub seed: u64,
    /// Worker threads; 0 uses the ambient rayon pool.
    #[serde(default)]
    pub workers: usize,
    /// Once a curve reaches an SER below this value, skip its higher SNRs.
    #[serde(default)]
    pub ser_floor: Option<f64>,
}

impl SimConfig {
    pub fn new(channel: Channel, snr_db: Vec<f64>, side_info: Vec<SideInfo>, seed: u64) -> Self {
        Self {
            channel,
            fade_per_complex: false,
            snr_db,
            side_info,
            stop: StopRule::default(),
            seed,
            workers: 0,
            ser_floor: None,
        }
    }

    pub fn validate(&self, code: &IndexCode) -> Result<()> {
        if self.snr_db.is_empty() || self.snr_db.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("SNR grid must be nonempty and finite".into()));
        }
        if self.snr_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig("SNR grid must be strictly increasing".into()));
        }
        if self.stop.max_trials == 0 || self.stop.min_errors == 0 {
            return Err(Error::InvalidConfig(
                "trials and error targets must be at least 1".into(),
            ));
        }
        if self.side_info.is_empty() {
            return Err(Error::InvalidConfig("no side-information sets given".into()));
        }
        let all = SideInfo::all(code.num_messages());
        if let Some(s) = self.side_info.iter().find(|s| !s.is_subset(all)) {
            return Err(Error::InvalidConfig(format!("side-information set {s} out of range")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimPoint {
    pub snr_db: f64,
    pub side_info: SideInfo,
    pub errors: u64,
    pub trials: u64,
    pub ser: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub channel: Channel,
    pub seed: u64,
    pub code_digest: String,
    pub config_digest: String,
    pub points: Vec<SimPoint>,
}

/// Outer-code hook: maps information symbols to channel symbols before
/// modulation and back after detection.
pub trait SymbolTransform: Sync {
    fn forward(&self, labels: &mut [u64]);
    fn inverse(&self, labels: &mut [u64]);
}

/// The identity transform.
#[derive(Clone, Copy, Debug, Default)]
pub struct PassThrough;

impl SymbolTransform for PassThrough {
    fn forward(&self, _: &mut [u64]) {}
    fn inverse(&self, _: &mut [u64]) {}
}

/// 95% interval: normal approximation, Wilson score below 30 errors.
pub fn confidence_interval(errors: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = errors as f64 / n;
    if errors < 30 {
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        let low = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
        (low, (center + half).min(1.0))
    } else {
        let half = Z95 * (p * (1.0 - p) / n).sqrt();
        ((p - half).max(0.0), (p + half).min(1.0))
    }
}

/// Draws noise and fades for one channel use.
#[derive(Clone, Debug)]
pub struct ChannelSampler {
    channel: Channel,
    fade_per_complex: bool,
    r1: usize,
    noise_std: f64,
}

impl ChannelSampler {
    pub fn new(code: &IndexCode, channel: Channel, fade_per_complex: bool) -> Self {
        let n = code.field().degree();
        Self {
            channel,
            fade_per_complex,
            r1: code.field().signature().0,
            noise_std: (1.0 / n as f64).sqrt(),
        }
    }

    /// `z ~ N(0, 1/n)` per real dimension.
    pub fn noise(&self, rng: &mut ChaCha8Rng, out: &mut [f64]) {
        for z in out.iter_mut() {
            let g: f64 = rng.sample(StandardNormal);
            *z = g * self.noise_std;
        }
    }

    /// Unit-second-moment Rayleigh amplitudes; all ones for AWGN.
    pub fn fades(&self, rng: &mut ChaCha8Rng, out: &mut [f64]) {
        match self.channel {
            Channel::Awgn => out.fill(1.0),
            Channel::Rayleigh => {
                let mut draw = || {
                    let a: f64 = rng.sample(StandardNormal);
                    let b: f64 = rng.sample(StandardNormal);
                    std::f64::consts::FRAC_1_SQRT_2 * a.hypot(b)
                };
                if self.fade_per_complex {
                    for h in out[..self.r1].iter_mut() {
                        *h = draw();
                    }
                    for pair in out[self.r1..].chunks_mut(2) {
                        pair.fill(draw());
                    }
                } else {
                    out.iter_mut().for_each(|h| *h = draw());
                }
            }
        }
    }
}

/// Candidate sets of one side-information pattern, grouped by revealed labels.
struct Detector {
    groups: Vec<Vec<u32>>,
    group_of_point: Vec<u32>,
}

impl Detector {
    fn new(code: &IndexCode, s: SideInfo) -> Self {
        let idx = s.indices();
        let mut groups: Vec<Vec<u32>> = Vec::new();
        let mut group_of: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut group_of_point = Vec::with_capacity(code.len());
        for (i, p) in code.points().iter().enumerate() {
            let key: Vec<u64> = idx.iter().map(|&k| p.labels[k]).collect();
            let g = *group_of.entry(key).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(i as u32);
            group_of_point.push(g as u32);
        }
        Self { groups, group_of_point }
    }
}

fn argmin_candidate(pts: &[f64], n: usize, cands: &[u32], y: &[f64], gain: &[f64]) -> u32 {
    let mut best = cands[0];
    let mut best_d = f64::INFINITY;
    for &c in cands {
        let x = &pts[c as usize * n..(c as usize + 1) * n];
        let mut d = 0.0;
        for i in 0..n {
            let e = y[i] - gain[i] * x[i];
            d += e * e;
        }
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

/// ML decision among the points consistent with the side information
/// `fixed` on `S` (entries outside `S` ignored). `snr` is linear; `h` is
/// the per-coordinate fade, absent for AWGN.
pub fn ml_detect(
    code: &IndexCode,
    y: &[f64],
    snr: f64,
    s: SideInfo,
    fixed: &[u64],
    h: Option<&[f64]>,
) -> Result<Message> {
    let n = code.field().degree();
    if y.len() != n || h.is_some_and(|h| h.len() != n) {
        return Err(Error::InvalidArgument(format!("received vector must have length {n}")));
    }
    let cands: Vec<u32> = code.subcode(s, fixed)?.into_iter().map(|i| i as u32).collect();
    let pts: Vec<f64> = (0..code.len()).flat_map(|i| code.normalized_point(i)).collect();
    let amp = snr.sqrt();
    let gain: Vec<f64> = match h {
        Some(h) => h.iter().map(|v| v * amp).collect(),
        None => vec![amp; n],
    };
    let best = argmin_candidate(&pts, n, &cands, y, &gain);
    code.message_from_index(best as usize)
}

fn mix(mut x: u64) -> u64 {
    // splitmix64 finalizer
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn stream_key(seed: u64, snr_db: f64, s: SideInfo) -> u64 {
    mix(mix(mix(seed) ^ snr_db.to_bits()) ^ s.bits())
}

struct PointJob<'a> {
    code: &'a IndexCode,
    sampler: &'a ChannelSampler,
    detector: &'a Detector,
    pts: &'a [f64],
    s: SideInfo,
    amp: f64,
    key: u64,
    transform: &'a dyn SymbolTransform,
}

impl PointJob<'_> {
    /// Errors among the trials of one chunk.
    fn run_chunk(&self, chunk: u64, trials: u64) -> u64 {
        let n = self.code.field().degree();
        let k = self.code.num_messages();
        let alphabet = self.code.alphabet();
        let mut rng = ChaCha8Rng::seed_from_u64(self.key);
        rng.set_stream(chunk);
        let (mut z, mut h, mut gain, mut y) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let mut info = vec![0u64; k];
        let mut sent = vec![0u64; k];
        let mut errors = 0;
        for _ in 0..trials {
            for (w, &q) in info.iter_mut().zip(&alphabet) {
                *w = rng.random_range(0..q);
            }
            sent.copy_from_slice(&info);
            self.transform.forward(&mut sent);
            let tx = self
                .code
                .index_of_labels(&sent)
                .expect("transform keeps labels in range");
            self.sampler.fades(&mut rng, &mut h);
            self.sampler.noise(&mut rng, &mut z);
            let x = &self.pts[tx * n..(tx + 1) * n];
            for i in 0..n {
                gain[i] = self.amp * h[i];
                y[i] = gain[i] * x[i] + z[i];
            }
            let group = &self.detector.groups[self.detector.group_of_point[tx] as usize];
            let best = argmin_candidate(self.pts, n, group, &y, &gain) as usize;
            let mut detected = self.code.points()[best].labels.clone();
            self.transform.inverse(&mut detected);
            if (0..k).any(|j| !self.s.contains(j) && detected[j] != info[j]) {
                errors += 1;
            }
        }
        errors
    }

    fn run(&self, stop: StopRule) -> (u64, u64) {
        let total_chunks = stop.max_trials.div_ceil(CHUNK_TRIALS);
        let (mut errors, mut trials, mut next) = (0u64, 0u64, 0u64);
        let mut round = 0u32;
        while next < total_chunks && errors < stop.min_errors {
            // rounds of 1, 2, 4, … chunks up to ROUND_CHUNKS
            let size = (1u64 << round.min(16)).min(ROUND_CHUNKS);
            round += 1;
            let end = (next + size).min(total_chunks);
            let (e, t) = (next..end)
                .into_par_iter()
                .map(|c| {
                    let t = CHUNK_TRIALS.min(stop.max_trials - c * CHUNK_TRIALS);
                    (self.run_chunk(c, t), t)
                })
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
            errors += e;
            trials += t;
            next = end;
        }
        (errors, trials)
    }
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

pub fn run_sim(code: &IndexCode, config: &SimConfig) -> Result<SimResult> {
    run_sim_with_transform(code, config, &PassThrough)
}

pub fn run_sim_with_transform(
    code: &IndexCode,
    config: &SimConfig,
    transform: &dyn SymbolTransform,
) -> Result<SimResult> {
    config.validate(code)?;
    let run = || -> Result<Vec<SimPoint>> {
        let sampler = ChannelSampler::new(code, config.channel, config.fade_per_complex);
        let pts: Vec<f64> = (0..code.len()).flat_map(|i| code.normalized_point(i)).collect();
        let mut out = Vec::new();
        for &s in &config.side_info {
            let detector = Detector::new(code, s);
            for &snr_db in &config.snr_db {
                let job = PointJob {
                    code,
                    sampler: &sampler,
                    detector: &detector,
                    pts: &pts,
                    s,
                    amp: 10f64.powf(snr_db / 10.0).sqrt(),
                    key: stream_key(config.seed, snr_db, s),
                    transform,
                };
                let (errors, trials) = job.run(config.stop);
                let ser = errors as f64 / trials as f64;
                let (ci_low, ci_high) = confidence_interval(errors, trials);
                out.push(SimPoint {
                    snr_db,
                    side_info: s,
                    errors,
                    trials,
                    ser,
                    ci_low,
                    ci_high,
                });
                if config.ser_floor.is_some_and(|f| ser < f) {
                    break;
                }
            }
        }
        Ok(out)
    };
    let points = if config.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(run)?
    } else {
        run()?
    };
    let mut cfg = config.clone();
    cfg.workers = 0;
    Ok(SimResult {
        channel: config.channel,
        seed: config.seed,
        code_digest: digest(code.to_json()?.as_bytes()),
        config_digest: digest(serde_json::to_string(&cfg)?.as_bytes()),
        points,
    })
}

impl SimResult {
    /// Points of one side-information set, in SNR order.
    pub fn curve(&self, s: SideInfo) -> Vec<&SimPoint> {
        self.points.iter().filter(|p| p.side_info == s).collect()
    }

    /// `(snr_db, ser)` pairs of one curve.
    pub fn curve_pairs(&self, s: SideInfo) -> Vec<(f64, f64)> {
        self.curve(s).iter().map(|p| (p.snr_db, p.ser)).collect()
    }

    pub fn side_info_sets(&self) -> Vec<SideInfo> {
        let mut out: Vec<SideInfo> = Vec::new();
        for p in &self.points {
            if !out.contains(&p.side_info) {
                out.push(p.side_info);
            }
        }
        out
    }

    /// CSV with columns `snr_db, side_info_set, errors, trials, ser, ci_low, ci_high, seed`.
    pub fn to_csv(&self, s: SideInfo) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "snr_db",
            "side_info_set",
            "errors",
            "trials",
            "ser",
            "ci_low",
            "ci_high",
            "seed",
        ])?;
        for p in self.curve(s) {
            w.write_record([
                p.snr_db.to_string(),
                p.side_info.to_string(),
                p.errors.to_string(),
                p.trials.to_string(),
                p.ser.to_string(),
                p.ci_low.to_string(),
                p.ci_high.to_string(),
                self.seed.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
    }

    /// Write one CSV per side-information set as `{prefix}_{channel}_{tag}.csv`.
    pub fn write_csvs(&self, dir: impl AsRef<Path>, prefix: &str) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(&dir)?;
        self.side_info_sets()
            .into_iter()
            .map(|s| {
                let path = dir
                    .as_ref()
                    .join(format!("{prefix}_{}_{}.csv", self.channel.name(), s.tag()));
                std::fs::write(&path, self.to_csv(s)?)?;
                Ok(path)
            })
            .collect()
    }
}

/// SNR (dB) at which a curve crosses `target`, by linear interpolation of
/// `log10(SER)` between the first bracketing pair of points.
pub fn snr_at_ser(curve: &[(f64, f64)], target: f64) -> Result<f64> {
    if !(target > 0.0) {
        return Err(Error::NotBracketed(target));
    }
    for w in curve.windows(2) {
        let ((s0, p0), (s1, p1)) = (w[0], w[1]);
        if p0 >= target && p1 <= target && p1 > 0.0 {
            if p0 == p1 {
                return Ok(s0);
            }
            let t = (p0.log10() - target.log10()) / (p0.log10() - p1.log10());
            return Ok(s0 + t * (s1 - s0));
        }
    }
    Err(Error::NotBracketed(target))
}

/// Horizontal gap (dB) between a base curve and a side-information curve at `target` SER.
pub fn si_gain_from_curves(base: &[(f64, f64)], with_side_info: &[(f64, f64)], target: f64) -> Result<f64> {
    Ok(snr_at_ser(base, target)? - snr_at_ser(with_side_info, target)?)
}

/// Window from the first SNR whose SER is below `ser` to the end of the curve.
pub fn tail_window(curve: &[SimPoint], ser: f64) -> Option<(f64, f64)> {
    curve.iter().find(|p| p.ser < ser).map(|p| (p.snr_db, f64::INFINITY))
}

/// Diversity estimate: minus the least-squares slope of `log10(SER)` against
/// `SNR_dB/10`, over points in `[lo, hi]` dB with at least 100 errors.
pub fn diversity_slope(curve: &[SimPoint], window: (f64, f64)) -> Result<f64> {
    let pts: Vec<(f64, f64)> = curve
        .iter()
        .filter(|p| p.snr_db >= window.0 && p.snr_db <= window.1 && p.errors >= 100)
        .map(|p| (p.snr_db / 10.0, p.ser.log10()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} usable points in [{}, {}] dB, need 3",
            pts.len(),
            window.0,
            window.1
        )));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(-sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_and_normal_intervals() {
        let (lo, hi) = confidence_interval(0, 1000);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.01);
        let (lo, hi) = confidence_interval(500, 1000);
        assert!((lo - (0.5 - Z95 * 0.5 / 1000f64.sqrt())).abs() < 1e-12);
        assert!(hi > 0.5);
    }

    #[test]
    fn interpolation() {
        let c = vec![(0.0, 1e-1), (10.0, 1e-3), (20.0, 1e-5)];
        assert!((snr_at_ser(&c, 1e-2).unwrap() - 5.0).abs() < 1e-12);
        assert!((snr_at_ser(&c, 1e-4).unwrap() - 15.0).abs() < 1e-12);
        assert_eq!(si_gain_from_curves(&c, &c, 1e-4).unwrap(), 0.0);
        assert!(matches!(snr_at_ser(&c, 1e-6), Err(Error::NotBracketed(_))));
    }

    #[test]
    fn slope_fit() {
        let curve: Vec<SimPoint> = (0..5)
            .map(|i| {
                let snr = 20.0 + 5.0 * i as f64;
                SimPoint {
                    snr_db: snr,
                    side_info: SideInfo::EMPTY,
                    errors: 1000,
                    trials: 1,
                    ser: 10f64.powf(-2.0 * snr / 10.0),
                    ci_low: 0.0,
                    ci_high: 1.0,
                }
            })
            .collect();
        assert!((diversity_slope(&curve, (0.0, 100.0)).unwrap() - 2.0).abs() < 1e-9);
        assert!(diversity_slope(&curve[..2], (0.0, 100.0)).is_err());
    }
}
