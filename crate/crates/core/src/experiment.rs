//! JSON experiment descriptions and the named presets.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::codec::{build_index_code_with, BuildOptions, IndexCode, SideInfo, DEFAULT_MAX_POINTS};
use crate::error::{Error, Result};
use crate::numberfield::{FieldFamily, Ideal, NumberField, SplittingKind};
use crate::sim::{Channel, SimConfig, StopRule};

/// How the prime ideals of a design are chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PrimeSelection {
    /// The first `count` (default: all) of the ideals above a completely split `p`.
    SplitCompletely {
        p: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        count: Option<usize>,
    },
    /// Explicit primes: ideal `index` (1-based, in listing order) above each `p`.
    Explicit { primes: Vec<PrimeRef> },
    /// Each ideal given by generators, as coordinates over the power basis.
    Generators { ideals: Vec<Vec<Vec<i64>>> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRef {
    pub p: u64,
    #[serde(default = "one")]
    pub index: usize,
}

fn one() -> usize {
    1
}

/// SNR grid as an explicit list or an inclusive range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SnrGrid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl SnrGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            SnrGrid::List(v) => Ok(v.clone()),
            SnrGrid::Range { start, stop, step } => {
                if !(*step > 0.0) || stop < start {
                    return Err(Error::InvalidConfig(
                        "SNR range needs step > 0 and stop >= start".into(),
                    ));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                Ok((0..count).map(|i| start + i as f64 * step).collect())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub channel: Channel,
    pub snr_db: SnrGrid,
    /// Curves to simulate; defaults to the empty set plus every singleton.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub side_info_sets: Vec<SideInfo>,
    #[serde(default = "default_min_errors")]
    pub min_errors: u64,
    #[serde(default = "default_max_trials")]
    pub max_trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub fade_per_complex: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ser_floor: Option<f64>,
    /// Report side-information gains at this SER.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_at: Option<f64>,
}

fn default_min_errors() -> u64 {
    StopRule::default().min_errors
}

fn default_max_trials() -> u64 {
    StopRule::default().max_trials
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub field: FieldFamily,
    pub primes: PrimeSelection,
    /// Sets to analyze; empty means every nonempty subset.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub side_info_sets: Vec<SideInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_points: Option<u64>,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn field(&self) -> Result<NumberField> {
        NumberField::new(self.field)
    }

    /// Resolve the prime selection to ideals.
    pub fn prime_ideals(&self, field: &NumberField) -> Result<Vec<Ideal>> {
        match &self.primes {
            PrimeSelection::SplitCompletely { p, count } => {
                let split = field.classify_prime(*p)?;
                if split.kind != SplittingKind::Split {
                    return Err(Error::InvalidDesign(format!(
                        "{p} does not split completely in {}: {split}",
                        field.family()
                    )));
                }
                let ideals = field.prime_ideals_above(*p)?;
                let k = count.unwrap_or(ideals.len());
                if k == 0 || k > ideals.len() {
                    return Err(Error::InvalidDesign(format!(
                        "requested {k} ideals above {p}, but {} has {}",
                        field.family(),
                        ideals.len()
                    )));
                }
                Ok(ideals.into_iter().take(k).collect())
            }
            PrimeSelection::Explicit { primes } => primes
                .iter()
                .map(|r| {
                    let ideals = field.prime_ideals_above(r.p)?;
                    let split = field.classify_prime(r.p)?;
                    ideals.get(r.index.wrapping_sub(1)).cloned().ok_or_else(|| {
                        Error::InvalidDesign(format!(
                            "no prime ideal #{} above {} ({split}, {} ideals)",
                            r.index,
                            r.p,
                            ideals.len()
                        ))
                    })
                })
                .collect(),
            PrimeSelection::Generators { ideals } => ideals
                .iter()
                .map(|gens| {
                    let gens = gens
                        .iter()
                        .map(|c| field.element(c.clone()))
                        .collect::<Result<Vec<_>>>()?;
                    field.ideal_from_generators(&gens)
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<IndexCode> {
        let field = self.field()?;
        let primes = self.prime_ideals(&field)?;
        let opts = BuildOptions {
            max_points: self.max_points.unwrap_or(DEFAULT_MAX_POINTS),
            ..Default::default()
        };
        build_index_code_with(&field, &primes, &opts)
    }

    /// Side-information sets to analyze for a code with `k` messages.
    pub fn analysis_sets(&self, k: usize) -> Vec<SideInfo> {
        if self.side_info_sets.is_empty() {
            SideInfo::nonempty_subsets(k).collect()
        } else {
            self.side_info_sets.clone()
        }
    }

    /// Simulation config for a code with `k` messages.
    pub fn sim_config(&self, k: usize) -> Result<SimConfig> {
        let sim = self
            .simulation
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("experiment has no simulation section".into()))?;
        let sets = if sim.side_info_sets.is_empty() {
            std::iter::once(SideInfo::EMPTY)
                .chain((0..k).map(|i| SideInfo::from_bits(1 << i)))
                .collect()
        } else {
            sim.side_info_sets.clone()
        };
        Ok(SimConfig {
            channel: sim.channel,
            fade_per_complex: sim.fade_per_complex,
            snr_db: sim.snr_db.values()?,
            side_info: sets,
            stop: StopRule {
                min_errors: sim.min_errors,
                max_trials: sim.max_trials,
            },
            seed: sim.seed,
            workers: sim.workers,
            ser_floor: sim.ser_floor,
        })
    }
}

pub const PRESET_NAMES: [&str; 5] = ["example1", "example2", "example3", "cyclo-K4", "maxreal-K3"];

fn awgn(start: f64, stop: f64) -> SimulationSpec {
    SimulationSpec {
        channel: Channel::Awgn,
        snr_db: SnrGrid::Range { start, stop, step: 1.0 },
        side_info_sets: Vec::new(),
        min_errors: 1000,
        max_trials: 10_000_000,
        seed: 1,
        workers: 0,
        fade_per_complex: false,
        ser_floor: Some(1e-5),
        gap_at: Some(1e-4),
    }
}

/// A named design.
pub fn preset(name: &str) -> Result<ExperimentSpec> {
    let (field, primes, sim) = match name {
        "example1" => (
            FieldFamily::Quadratic { d: 5 },
            // √5 and 4 + √5 over the basis {1, (1+√5)/2}
            PrimeSelection::Generators {
                ideals: vec![vec![vec![-1, 2]], vec![vec![3, 2]]],
            },
            awgn(0.0, 40.0),
        ),
        "example2" => (
            FieldFamily::Quadratic { d: -5 },
            PrimeSelection::SplitCompletely { p: 7, count: None },
            awgn(0.0, 40.0),
        ),
        "example3" => (
            FieldFamily::Quadratic { d: -7 },
            // √-7 and 2 + √-7 over the basis {1, (1+√-7)/2}
            PrimeSelection::Generators {
                ideals: vec![vec![vec![-1, 2]], vec![vec![1, 2]]],
            },
            awgn(0.0, 40.0),
        ),
        "cyclo-K4" => (
            FieldFamily::Cyclotomic { m: 5 },
            PrimeSelection::SplitCompletely { p: 11, count: None },
            awgn(0.0, 40.0),
        ),
        "maxreal-K3" => (
            FieldFamily::MaximalReal { m: 7 },
            PrimeSelection::SplitCompletely { p: 13, count: None },
            awgn(0.0, 40.0),
        ),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown preset {name:?}; available: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(ExperimentSpec {
        name: name.to_string(),
        field,
        primes,
        side_info_sets: Vec::new(),
        simulation: Some(sim),
        output_dir: None,
        max_points: None,
    })
}

/// One-line description of each preset.
pub fn preset_descriptions() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "example1",
            "Q(sqrt 5), primes sqrt5 and 4+sqrt5, 55 points over F5 x F11",
        ),
        ("example2", "Q(sqrt -5), the two primes above 7, 49 points over F7 x F7"),
        (
            "example3",
            "Q(sqrt -7), primes sqrt-7 and 2+sqrt-7, 77 points over F7 x F11",
        ),
        ("cyclo-K4", "Q(zeta_5), the four primes above 11, 14641 points"),
        (
            "maxreal-K3",
            "Q(zeta_7 + 1/zeta_7), the three primes above 13, 2197 points",
        ),
    ]
}

pub fn build_preset(name: &str) -> Result<IndexCode> {
    preset(name)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip() {
        for name in PRESET_NAMES {
            let spec = preset(name).unwrap();
            let back = ExperimentSpec::from_json(&spec.to_json().unwrap()).unwrap();
            assert_eq!(back, spec);
        }
        assert!(preset("nope").is_err());
    }

    #[test]
    fn snr_range() {
        let g = SnrGrid::Range {
            start: 0.0,
            stop: 2.0,
            step: 0.5,
        };
        assert_eq!(g.values().unwrap(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn infeasible_split() {
        let mut spec = preset("example2").unwrap();
        spec.primes = PrimeSelection::SplitCompletely { p: 11, count: None };
        assert!(matches!(spec.build(), Err(Error::InvalidDesign(_))));
        spec.primes = PrimeSelection::SplitCompletely { p: 7, count: Some(3) };
        assert!(matches!(spec.build(), Err(Error::InvalidDesign(_))));
    }
}
