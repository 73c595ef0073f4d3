//! Experiment identifiers and their run configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::report::ReportFormat;

/// Every check the verification harness can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "UPPERCASE")]
pub enum ExperimentId {
    /// Odd-size one-dimensional sets never beat centered intervals (arity 3).
    Hl,
    /// Single-axis compression never decreases the energy and grows sets by
    /// at most the per-axis allowance.
    Compress,
    /// The full compression sweep yields a down-set within the boundary
    /// allowance.
    Downset,
    /// Shifted representation counts of down-set families stay near the
    /// energy; the measured ratio is recorded.
    Shift,
    /// Exact lattice energies against ball energies of equal volumes; the
    /// hidden constant is measured against a sentinel, not asserted.
    Propzd,
    /// The squared energy bound through the pair energy `E_4`.
    Smalle,
    /// `e_d` against `(4 sqrt 3 / 9)^d`, including the loose d=6 root check.
    Hy,
    /// Ball energies are superadditive in the volumes.
    Superadd,
    /// Normalized lattice-ball energies converge to the continuum constant.
    Converge,
    /// Carry-density searches: exhaustive vs centered box, local vs
    /// exhaustive, and the product law.
    Carries,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 10] = [
        ExperimentId::Hl,
        ExperimentId::Compress,
        ExperimentId::Downset,
        ExperimentId::Shift,
        ExperimentId::Propzd,
        ExperimentId::Smalle,
        ExperimentId::Hy,
        ExperimentId::Superadd,
        ExperimentId::Converge,
        ExperimentId::Carries,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentId::Hl => "HL",
            ExperimentId::Compress => "COMPRESS",
            ExperimentId::Downset => "DOWNSET",
            ExperimentId::Shift => "SHIFT",
            ExperimentId::Propzd => "PROPZD",
            ExperimentId::Smalle => "SMALLE",
            ExperimentId::Hy => "HY",
            ExperimentId::Superadd => "SUPERADD",
            ExperimentId::Converge => "CONVERGE",
            ExperimentId::Carries => "CARRIES",
        }
    }

    pub fn parse(s: &str) -> Option<ExperimentId> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s))
    }

    /// Trial count used when the config does not override it.
    pub fn default_trials(&self) -> u32 {
        match self {
            ExperimentId::Compress | ExperimentId::Downset => 500,
            ExperimentId::Shift | ExperimentId::Smalle => 200,
            ExperimentId::Propzd => 100,
            ExperimentId::Superadd => 8,
            // the remaining experiments run fixed scans
            _ => 0,
        }
    }
}

impl std::fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Full configuration of one experiment run. Every optional field has a
/// per-experiment default, so the empty overrides are valid; the struct
/// round-trips losslessly through its JSON file form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u32>,
    /// Largest box half-width used for random instances, and the universe
    /// half-width for the exhaustive one-dimensional scan.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_half_width: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_set_size: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_samples: Option<u64>,
    /// Experiment-specific tolerance override (quadrature tolerance, or the
    /// convergence threshold).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Non-explosion sentinel for measured hidden-constant ratios.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentinel: Option<f64>,
    /// Report destination; standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: ReportFormat,
}

fn default_seed() -> u64 {
    1
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentId) -> Self {
        ExperimentConfig {
            experiment,
            seed: default_seed(),
            trials: None,
            box_half_width: None,
            max_set_size: None,
            mc_samples: None,
            tolerance: None,
            sentinel: None,
            out: None,
            format: ReportFormat::default(),
        }
    }

    pub fn trials(&self) -> u32 {
        self.trials.unwrap_or_else(|| self.experiment.default_trials())
    }

    pub fn box_half_width(&self) -> u32 {
        self.box_half_width.unwrap_or(match self.experiment {
            ExperimentId::Hl => 3,
            _ => 4,
        })
    }

    pub fn max_set_size(&self) -> u32 {
        self.max_set_size.unwrap_or(40)
    }

    pub fn mc_samples(&self) -> u64 {
        self.mc_samples.unwrap_or(10_000_000)
    }

    pub fn sentinel(&self) -> f64 {
        self.sentinel.unwrap_or(100.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete_and_unique() {
        // the full inequality catalogue the harness must cover
        const EXPECTED: [&str; 10] = [
            "HL", "COMPRESS", "DOWNSET", "SHIFT", "PROPZD", "SMALLE", "HY", "SUPERADD",
            "CONVERGE", "CARRIES",
        ];
        let names: Vec<&str> = ExperimentId::ALL.iter().map(|id| id.name()).collect();
        assert_eq!(names, EXPECTED);
        for (i, a) in ExperimentId::ALL.iter().enumerate() {
            for b in &ExperimentId::ALL[i + 1..] {
                assert_ne!(a.name(), b.name());
            }
            assert_eq!(ExperimentId::parse(a.name()), Some(*a));
            assert_eq!(
                ExperimentId::parse(&a.name().to_lowercase()),
                Some(*a)
            );
        }
    }

    #[test]
    fn config_round_trips_through_json() {
        let mut cfg = ExperimentConfig::new(ExperimentId::Compress);
        cfg.seed = 99;
        cfg.trials = Some(12);
        cfg.tolerance = Some(0.5);
        cfg.out = Some(PathBuf::from("/tmp/report.json"));
        cfg.format = ReportFormat::Csv;
        let json = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);

        // defaults fill in on a minimal document
        let minimal: ExperimentConfig =
            serde_json::from_str(r#"{"experiment": "HL"}"#).unwrap();
        assert_eq!(minimal.seed, 1);
        assert_eq!(minimal.box_half_width(), 3);
    }
}
