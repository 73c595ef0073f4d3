//! Seeded random lattice sets for trials: uniform without replacement from
//! a declared box, with per-trial generators derived from a master seed so
//! every counterexample is reproducible from `(seed, trial index)` alone.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{BoxShape, LatticeSet, Point};

/// Generator for trial `index` under `master_seed`; streams never collide
/// across trials.
pub fn trial_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

/// `size` distinct points uniform in the box. Rejection sampling while the
/// box is sparse, a partial shuffle of the full enumeration once the
/// request covers most of it.
pub fn random_set_in_box(
    rng: &mut ChaCha8Rng,
    enclosing: &BoxShape,
    size: usize,
) -> Result<LatticeSet> {
    let cells = enclosing.cell_count();
    if BigUint::from(size) > cells {
        return Err(Error::invalid(format!(
            "cannot draw {size} distinct points from a box of {cells} cells"
        )));
    }
    if size == 0 {
        return Err(Error::EmptySet);
    }
    let dim = enclosing.dim();
    let dense_threshold = BigUint::from(2 * size);
    if dense_threshold >= cells {
        let mut all = enumerate_box(enclosing);
        // partial Fisher-Yates: fix the first `size` slots
        for i in 0..size {
            let j = rng.random_range(i..all.len());
            all.swap(i, j);
        }
        all.truncate(size);
        return LatticeSet::new(dim, all);
    }
    let mut chosen: Vec<Point> = Vec::with_capacity(size);
    while chosen.len() < size {
        let coords: Vec<i64> = enclosing
            .half_widths()
            .iter()
            .map(|&n| rng.random_range(-(n as i64)..=n as i64))
            .collect();
        let p = Point::new(coords);
        if !chosen.contains(&p) {
            chosen.push(p);
        }
    }
    LatticeSet::new(dim, chosen)
}

fn enumerate_box(enclosing: &BoxShape) -> Vec<Point> {
    let dim = enclosing.dim();
    let mut out = Vec::new();
    let mut coords: Vec<i64> = enclosing.half_widths().iter().map(|&n| -(n as i64)).collect();
    loop {
        out.push(Point::new(coords.clone()));
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] <= enclosing.half_widths()[i] as i64 {
                break;
            }
            coords[i] = -(enclosing.half_widths()[i] as i64);
        }
    }
}
