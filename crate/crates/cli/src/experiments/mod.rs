//! The verification experiments. Each runner checks one family of
//! inequalities end to end and returns a [`VerifyReport`] whose content is
//! a pure function of the configuration.

mod carries;
mod continuum;
mod lattice;

use std::time::Instant;

use adnrg_core::error::Result;
use adnrg_core::lattice::{BoxShape, LatticeSet};
use adnrg_core::sample::{random_set_in_box, trial_rng};
use rand::Rng;

use crate::config::{ExperimentConfig, ExperimentId};
use crate::report::VerifyReport;

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    let mut report = match cfg.experiment {
        ExperimentId::Hl => lattice::run_hl(cfg),
        ExperimentId::Compress => lattice::run_compress(cfg),
        ExperimentId::Downset => lattice::run_downset(cfg),
        ExperimentId::Shift => lattice::run_shift(cfg),
        ExperimentId::Propzd => lattice::run_propzd(cfg),
        ExperimentId::Smalle => lattice::run_smalle(cfg),
        ExperimentId::Hy => continuum::run_hy(cfg),
        ExperimentId::Superadd => continuum::run_superadd(cfg),
        ExperimentId::Converge => continuum::run_converge(cfg),
        ExperimentId::Carries => carries::run_carries(cfg),
    }?;
    report.wall_ms = start.elapsed().as_millis();
    Ok(report)
}

/// A random instance of the compression corpus: `k` sets inside one box.
pub(crate) struct TrialFamily {
    pub sets: Vec<LatticeSet>,
    pub enclosing: BoxShape,
    pub axis: usize,
}

/// Instance generator shared by the randomized experiments: dimension from
/// `dims`, arity from `arities`, box half-width up to the configured cap,
/// sets uniform without replacement, all derived from `(seed, trial)`.
pub(crate) fn random_family(
    cfg: &ExperimentConfig,
    trial: u64,
    dims: &[usize],
    arities: &[usize],
) -> TrialFamily {
    let mut rng = trial_rng(cfg.seed, trial);
    let dim = dims[rng.random_range(0..dims.len())];
    let k = arities[rng.random_range(0..arities.len())];
    let hw = rng.random_range(1..=cfg.box_half_width());
    let enclosing = BoxShape::new(vec![hw; dim]).expect("positive dimension");
    let cells: usize = (2 * hw as usize + 1).pow(dim as u32);
    let max_size = (cfg.max_set_size() as usize).min(cells);
    let sets = (0..k)
        .map(|_| {
            let size = rng.random_range(1..=max_size);
            random_set_in_box(&mut rng, &enclosing, size).expect("size fits the box")
        })
        .collect();
    let axis = rng.random_range(0..dim);
    TrialFamily {
        sets,
        enclosing,
        axis,
    }
}
