//! The discrete symmetrization calculus: single-axis compressions, the
//! down-set transform, and the reports that expose their proved inequalities
//! (energy never decreases, sizes grow by at most the per-axis boundary
//! allowance, shifted representation counts stay close to the energy).

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::energy::{EnergyEngine, EnergyResult};
use crate::error::{Error, Result};
use crate::lattice::{BoxShape, LatticeSet, Point};

/// The centered integer interval holding `l` points: `[-m, m]` with
/// `2m + 1 = l` for odd `l`, and `2m + 1 = l + 1` for even `l` (even
/// columns round up to the next odd length).
pub fn centered_interval(len: u32) -> Result<LatticeSet> {
    if len == 0 {
        return Err(Error::invalid("centered interval requires positive length"));
    }
    let m = (len / 2) as i64; // (l-1)/2 for odd l, l/2 for even l
    Ok(LatticeSet::one_dim(-m..=m))
}

/// Replaces every column of `a` along `axis` (0-based) by the centered
/// interval of its (parity-rounded) length; empty columns stay empty.
pub fn compress(a: &LatticeSet, axis: usize) -> Result<LatticeSet> {
    if axis >= a.dim() {
        return Err(Error::AxisOutOfRange { axis, dim: a.dim() });
    }
    let mut columns: BTreeMap<Vec<i64>, u32> = BTreeMap::new();
    for p in a.iter() {
        let mut fiber: Vec<i64> = p.coords().to_vec();
        fiber.remove(axis);
        *columns.entry(fiber).or_insert(0) += 1;
    }
    let mut points = Vec::with_capacity(a.len());
    for (fiber, len) in columns {
        let m = (len / 2) as i64; // parity rounding: even lengths gain a point
        for c in -m..=m {
            let mut coords = fiber.clone();
            coords.insert(axis, c);
            points.push(Point::new(coords));
        }
    }
    LatticeSet::new(a.dim(), points)
}

/// True iff `a` is fixed by the compression along `axis`.
pub fn is_compressed(a: &LatticeSet, axis: usize) -> Result<bool> {
    Ok(compress(a, axis)? == *a)
}

/// True iff `a` is fixed by every single-axis compression.
pub fn is_downset(a: &LatticeSet) -> bool {
    (0..a.dim()).all(|axis| is_compressed(a, axis).expect("axis in range"))
}

/// Applies the compressions along all axes, last axis first, producing a
/// down-set. Once an axis is compressed it stays compressed under the
/// later passes, so a single sweep suffices.
pub fn downset_transform(a: &LatticeSet) -> LatticeSet {
    let mut cur = a.clone();
    for axis in (0..a.dim()).rev() {
        cur = compress(&cur, axis).expect("axis in range");
    }
    cur
}

/// Outcome of compressing a family of sets along one axis inside a declared
/// box: energies before and after, per-set sizes, and the exact growth
/// allowance `|P| / (2 N_i + 1)`.
#[derive(Clone, Debug)]
pub struct CompressionReport {
    pub axis: usize,
    pub before: EnergyResult,
    pub after: EnergyResult,
    pub sizes_before: Vec<usize>,
    pub sizes_after: Vec<usize>,
    pub growth_bound: BigUint,
    pub energy_monotone: bool,
    pub sizes_within_bound: bool,
}

/// Compresses every set along `axis` and checks both conclusions: the
/// energy never decreases and each size grows by at most the allowance.
pub fn compression_report(
    engine: &EnergyEngine,
    sets: &[&LatticeSet],
    enclosing: &BoxShape,
    axis: usize,
) -> Result<CompressionReport> {
    for s in sets {
        if let Some(p) = enclosing.first_outside(s) {
            return Err(Error::PointOutsideBox {
                point: p.coords().to_vec(),
            });
        }
    }
    let before = engine.fast(sets)?;
    let compressed: Vec<LatticeSet> = sets
        .iter()
        .map(|s| compress(s, axis))
        .collect::<Result<_>>()?;
    let compressed_refs: Vec<&LatticeSet> = compressed.iter().collect();
    let after = engine.fast(&compressed_refs)?;
    let growth_bound = enclosing.axis_bound(axis)?;
    let sizes_before: Vec<usize> = sets.iter().map(|s| s.len()).collect();
    let sizes_after: Vec<usize> = compressed.iter().map(|s| s.len()).collect();
    let sizes_within_bound = sizes_before
        .iter()
        .zip(&sizes_after)
        .all(|(&b, &a)| BigUint::from(a) <= BigUint::from(b) + &growth_bound);
    Ok(CompressionReport {
        axis,
        energy_monotone: after.value >= before.value,
        before,
        after,
        sizes_before,
        sizes_after,
        growth_bound,
        sizes_within_bound,
    })
}

/// How far the shifted representation count `S_k(A_1,...,A_k; s)` falls
/// below the energy `E_k`, next to the scale `|A_1|...|A_{k-2}| * l(dP)`
/// the deficit is controlled by. The controlling constant is shift-dependent
/// and unspecified, so only the measured ratio is reported.
#[derive(Clone, Debug)]
pub struct ShiftStabilityReport {
    pub energy: BigUint,
    pub shifted_count: BigUint,
    /// `E_k - S_k(s)`; negative when the shift has more representations.
    pub deficit: BigInt,
    /// `|A_1|...|A_{k-2}| * l(dP)`, an exact non-negative integer scale.
    pub scale: BigUint,
    /// `deficit / scale` as a float, `0` when the deficit is non-positive.
    pub ratio: f64,
}

/// Requires the last set to be a down-set and all sets to lie in the box.
pub fn downset_shift_stability(
    engine: &EnergyEngine,
    sets: &[&LatticeSet],
    enclosing: &BoxShape,
    shift: &Point,
) -> Result<ShiftStabilityReport> {
    if sets.len() < 3 {
        return Err(Error::invalid("shift stability needs at least 3 sets"));
    }
    let last = sets[sets.len() - 1];
    if !is_downset(last) {
        return Err(Error::invalid("the last set must be a down-set"));
    }
    for s in sets {
        if let Some(p) = enclosing.first_outside(s) {
            return Err(Error::PointOutsideBox {
                point: p.coords().to_vec(),
            });
        }
    }
    if shift.dim() != last.dim() {
        return Err(Error::DimensionMismatch {
            expected: last.dim(),
            got: shift.dim(),
        });
    }
    let table = engine.rep_table(sets)?;
    let energy = table.get(&Point::origin(last.dim()));
    let shifted_count = table.get(shift);
    let deficit = BigInt::from(energy.clone()) - BigInt::from(shifted_count.clone());
    let boundary = enclosing.boundary_measure();
    debug_assert!(boundary.is_integer());
    let head: BigUint = sets[..sets.len() - 2]
        .iter()
        .map(|s| BigUint::from(s.len()))
        .product();
    let scale = head * boundary.to_integer().magnitude();
    let ratio = if deficit.is_positive() && !scale.is_zero() {
        let d = BigRational::new(deficit.clone(), BigInt::from(scale.clone()));
        d.to_f64().unwrap_or(f64::INFINITY)
    } else {
        0.0
    };
    Ok(ShiftStabilityReport {
        energy,
        shifted_count,
        deficit,
        scale,
        ratio,
    })
}


#[cfg(test)]
mod column_tests {
    use super::*;
    use crate::sample::{random_set_in_box, trial_rng};

    #[test]
    fn growth_equals_number_of_even_columns() {
        // |C_i(A)| - |A| counts exactly the nonempty columns of even length
        for trial in 0..40u64 {
            let mut rng = trial_rng(61, trial);
            let enclosing = BoxShape::new(vec![3, 3]).unwrap();
            let size = 1 + (trial as usize % 30);
            let a = random_set_in_box(&mut rng, &enclosing, size).unwrap();
            for axis in 0..2 {
                let compressed = compress(&a, axis).unwrap();
                let mut columns: std::collections::BTreeMap<i64, u32> = Default::default();
                for p in a.iter() {
                    *columns.entry(p.coords()[1 - axis]).or_insert(0) += 1;
                }
                let even_columns = columns.values().filter(|&&l| l % 2 == 0).count();
                assert_eq!(compressed.len() - a.len(), even_columns, "trial {trial}");
            }
        }
    }
}
