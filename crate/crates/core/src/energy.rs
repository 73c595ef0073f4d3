//! Exact counting of additive energies.
//!
//! `E_k(A_1,...,A_k)` is the number of tuples `(a_1,...,a_k)` in
//! `A_1 x ... x A_k` with `a_1 + ... + a_k = 0`. Two engines compute it: a
//! literal enumeration oracle and a dense-grid convolution engine. They must
//! agree exactly on every input where both run; everything downstream tests
//! against that contract.
//!
//! All counts are exact. The convolution engine works in `u128` whenever the
//! total mass `prod |A_i|` provably fits, and escalates to arbitrary
//! precision otherwise, so no input can silently overflow.

use std::collections::BTreeMap;
use std::ops::AddAssign;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{negate, LatticeSet, Point};

/// Caps protecting the two engines.
#[derive(Clone, Debug)]
pub struct EnergyConfig {
    /// Maximum number of enumerated tuples for the brute-force oracle.
    pub oracle_cap: u128,
    /// Maximum number of dense grid cells for the convolution engine.
    pub grid_budget: u128,
}

impl Default for EnergyConfig {
    fn default() -> Self {
        EnergyConfig {
            oracle_cap: 100_000_000,
            grid_budget: 1 << 24,
        }
    }
}

/// An exact energy value together with its normalization by
/// `|A_1| ... |A_{k-1}|`, which keeps it in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergyResult {
    pub value: BigUint,
    pub normalized: BigRational,
}

impl EnergyResult {
    fn new(value: BigUint, sets: &[&LatticeSet]) -> Self {
        let denom: BigUint = sets[..sets.len() - 1]
            .iter()
            .map(|s| BigUint::from(s.len()))
            .product();
        let normalized = BigRational::new(BigInt::from(value.clone()), BigInt::from(denom));
        EnergyResult { value, normalized }
    }
}

/// Exact representation counts `s -> S_m(A_1,...,A_m; s)`, the number of
/// ways to write `s` as `a_1 + ... + a_m`. Zero entries are omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepTable {
    dim: usize,
    arity: usize,
    entries: BTreeMap<Point, BigUint>,
}

impl RepTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of convolved sets.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, s: &Point) -> BigUint {
        self.entries.get(s).cloned().unwrap_or_default()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, &BigUint)> {
        self.entries.iter()
    }

    /// Sum of all counts; equals `prod |A_i|` by mass conservation.
    pub fn total_mass(&self) -> BigUint {
        self.entries.values().sum()
    }
}

/// Count type the convolution engine is generic over.
trait Count: Clone + Zero + One + for<'a> AddAssign<&'a Self> + Into<BigUint> {}
impl Count for u128 {}
impl Count for BigUint {}

struct GridMeta {
    mins: Vec<i64>,
    strides: Vec<usize>,
    len: usize,
}

impl GridMeta {
    fn new(mins: Vec<i64>, maxs: &[i64], budget: u128) -> Result<Self> {
        let mut cells: u128 = 1;
        let mut widths = Vec::with_capacity(mins.len());
        for (&lo, &hi) in mins.iter().zip(maxs) {
            let w = (hi as i128 - lo as i128) as u128 + 1;
            cells = cells
                .checked_mul(w)
                .ok_or(Error::GridBudgetExceeded { cells: u128::MAX, budget })?;
            widths.push(w as usize);
        }
        if cells > budget.min(usize::MAX as u128) {
            return Err(Error::GridBudgetExceeded { cells, budget });
        }
        // row-major, last axis fastest
        let mut strides = vec![1usize; mins.len()];
        for i in (0..mins.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * widths[i + 1];
        }
        Ok(GridMeta {
            mins,
            strides,
            len: cells as usize,
        })
    }

    #[inline]
    fn index_of_sum(&self, base: &[i64], offset: &[i64]) -> usize {
        let mut idx = 0usize;
        for i in 0..base.len() {
            idx += ((base[i] + offset[i]) - self.mins[i]) as usize * self.strides[i];
        }
        idx
    }
}

fn checked_sum(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b)
        .ok_or_else(|| Error::invalid("coordinate overflow while accumulating sums"))
}

/// Sparse convolution state: (coordinates, count) pairs in grid order.
type Sparse<T> = Vec<(Vec<i64>, T)>;

fn convolve_sparse<T: Count>(sets: &[&LatticeSet], budget: u128) -> Result<Sparse<T>> {
    let dim = sets[0].dim();
    let (first_lo, first_hi) = sets[0].bounds().expect("checked nonempty");
    let mut lo = first_lo;
    let mut hi = first_hi;
    let mut cur: Sparse<T> = sets[0]
        .iter()
        .map(|p| (p.coords().to_vec(), T::one()))
        .collect();

    for set in &sets[1..] {
        let (set_lo, set_hi) = set.bounds().expect("checked nonempty");
        for i in 0..dim {
            lo[i] = checked_sum(lo[i], set_lo[i])?;
            hi[i] = checked_sum(hi[i], set_hi[i])?;
        }
        let meta = GridMeta::new(lo.clone(), &hi, budget)?;
        let mut dense: Vec<T> = vec![T::zero(); meta.len];
        for (coords, v) in &cur {
            for p in set.iter() {
                dense[meta.index_of_sum(coords, p.coords())] += v;
            }
        }
        cur = extract_sparse(&meta, dense, dim);
    }
    Ok(cur)
}

fn extract_sparse<T: Count>(meta: &GridMeta, dense: Vec<T>, dim: usize) -> Sparse<T> {
    let mut out = Vec::new();
    let mut coords = meta.mins.clone();
    // widths recovered from strides: stride[i-1] / stride[i]
    let width_of = |i: usize| -> i64 {
        if i == 0 {
            i64::MAX // never wraps; loop ends by exhaustion
        } else {
            (meta.strides[i - 1] / meta.strides[i]) as i64
        }
    };
    for (cell, v) in dense.into_iter().enumerate() {
        if !v.is_zero() {
            out.push((coords.clone(), v));
        }
        if cell + 1 == meta.len {
            break;
        }
        // odometer increment, last axis fastest
        let mut i = dim - 1;
        loop {
            coords[i] += 1;
            if i == 0 || coords[i] - meta.mins[i] < width_of(i) {
                break;
            }
            coords[i] = meta.mins[i];
            i -= 1;
        }
    }
    out
}

fn product_of_sizes(sets: &[&LatticeSet]) -> BigUint {
    sets.iter().map(|s| BigUint::from(s.len())).product()
}

fn validate_sets(sets: &[&LatticeSet], min_arity: usize) -> Result<usize> {
    if sets.len() < min_arity {
        return Err(Error::invalid(format!(
            "expected at least {min_arity} sets, got {}",
            sets.len()
        )));
    }
    let dim = sets[0].dim();
    for s in sets {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: s.dim(),
            });
        }
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
    }
    Ok(dim)
}

/// The two-engine energy computer. Construction is free; the configuration
/// only sets the safety caps.
#[derive(Clone, Debug, Default)]
pub struct EnergyEngine {
    pub config: EnergyConfig,
}

impl EnergyEngine {
    pub fn new(config: EnergyConfig) -> Self {
        EnergyEngine { config }
    }

    /// Literal enumeration of `A_1 x ... x A_{k-1}` with a membership test
    /// of `-(a_1 + ... + a_{k-1})` in `A_k`. The oracle the fast engine is
    /// held to.
    pub fn bruteforce(&self, sets: &[&LatticeSet]) -> Result<EnergyResult> {
        let dim = validate_sets(sets, 3)?;
        let required = product_of_sizes(&sets[..sets.len() - 1]);
        if required > BigUint::from(self.config.oracle_cap) {
            return Err(Error::OracleCapExceeded {
                required: u128::try_from(&required).unwrap_or(u128::MAX),
                cap: self.config.oracle_cap,
            });
        }
        let target = sets[sets.len() - 1];
        let mut sum = vec![0i64; dim];
        let mut neg = vec![0i64; dim];
        let count = enumerate_tuples(&sets[..sets.len() - 1], 0, &mut sum, &mut neg, target)?;
        Ok(EnergyResult::new(BigUint::from(count), sets))
    }

    /// Exact representation counts of `a_1 + ... + a_m` over the given sets,
    /// via iterated convolution on a dense grid spanning the running
    /// Minkowski-sum bounding box.
    pub fn rep_table(&self, sets: &[&LatticeSet]) -> Result<RepTable> {
        let dim = validate_sets(sets, 1)?;
        let entries = self.convolve_to_map(sets)?;
        Ok(RepTable {
            dim,
            arity: sets.len(),
            entries,
        })
    }

    fn convolve_to_map(&self, sets: &[&LatticeSet]) -> Result<BTreeMap<Point, BigUint>> {
        let mass = product_of_sizes(sets);
        let budget = self.config.grid_budget;
        let sparse: Sparse<BigUint> = if mass <= BigUint::from(u128::MAX) {
            convolve_sparse::<u128>(sets, budget)?
                .into_iter()
                .map(|(c, v)| (c, BigUint::from(v)))
                .collect()
        } else {
            convolve_sparse::<BigUint>(sets, budget)?
        };
        Ok(sparse
            .into_iter()
            .map(|(c, v)| (Point::new(c), v))
            .collect())
    }

    /// Convolution-backed energy: convolves the k-1 smallest sets and
    /// membership-tests against the largest. Must equal [`Self::bruteforce`]
    /// on every input where both run.
    pub fn fast(&self, sets: &[&LatticeSet]) -> Result<EnergyResult> {
        validate_sets(sets, 3)?;
        // stable sort keeps ties in input order, so results are reproducible
        let mut order: Vec<usize> = (0..sets.len()).collect();
        order.sort_by_key(|&i| sets[i].len());
        let target = sets[order[sets.len() - 1]];
        let rest: Vec<&LatticeSet> = order[..sets.len() - 1]
            .iter()
            .map(|&i| sets[i])
            .collect();

        let mass = product_of_sizes(&rest);
        let budget = self.config.grid_budget;
        let value: BigUint = if mass <= BigUint::from(u128::MAX) {
            let sparse = convolve_sparse::<u128>(&rest, budget)?;
            let mut acc: u128 = 0;
            let mut neg = vec![0i64; target.dim()];
            for (coords, v) in &sparse {
                for (n, c) in neg.iter_mut().zip(coords) {
                    *n = -c;
                }
                if target.contains_coords(&neg) {
                    acc += v;
                }
            }
            BigUint::from(acc)
        } else {
            let sparse = convolve_sparse::<BigUint>(&rest, budget)?;
            let mut acc = BigUint::zero();
            let mut neg = vec![0i64; target.dim()];
            for (coords, v) in &sparse {
                for (n, c) in neg.iter_mut().zip(coords) {
                    *n = -c;
                }
                if target.contains_coords(&neg) {
                    acc += v;
                }
            }
            acc
        };
        Ok(EnergyResult::new(value, sets))
    }

    /// The normalized additive energy `e(A) = E_4(A,A,-A,-A) / |A|^3`.
    pub fn additive_energy(&self, a: &LatticeSet) -> Result<EnergyResult> {
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
        let neg = negate(a);
        self.fast(&[a, a, &neg, &neg])
    }

    /// The carry density `c(A) = E_3(A,A,-A) / |A|^2`, the normalized count
    /// of solutions to `a_1 + a_2 = a_3`.
    pub fn carry_density(&self, a: &LatticeSet) -> Result<EnergyResult> {
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
        let neg = negate(a);
        self.fast(&[a, a, &neg])
    }

    /// Checks `E_k(Y_1,...,Y_k)^2 <= (|Y_4|...|Y_k|)^2 |Y_3| E_4(Y_1,Y_2,-Y_1,-Y_2)`,
    /// entirely in integers so the square root never has to be taken.
    pub fn small_energy_bound(&self, sets: &[&LatticeSet]) -> Result<SmallEnergyReport> {
        validate_sets(sets, 3)?;
        let lhs = self.fast(sets)?.value;
        let neg1 = negate(sets[0]);
        let neg2 = negate(sets[1]);
        let e4 = self.fast(&[sets[0], sets[1], &neg1, &neg2])?.value;
        let tail: BigUint = sets[3..].iter().map(|s| BigUint::from(s.len())).product();
        let rhs_squared = &tail * &tail * BigUint::from(sets[2].len()) * &e4;
        let lhs_squared = &lhs * &lhs;
        Ok(SmallEnergyReport {
            holds: lhs_squared <= rhs_squared,
            lhs,
            lhs_squared,
            rhs_squared,
            e4,
        })
    }
}

/// Both sides of the little-additive-communication bound, squared to stay
/// in exact integers.
#[derive(Clone, Debug)]
pub struct SmallEnergyReport {
    pub holds: bool,
    pub lhs: BigUint,
    pub lhs_squared: BigUint,
    pub rhs_squared: BigUint,
    pub e4: BigUint,
}

fn enumerate_tuples(
    sets: &[&LatticeSet],
    level: usize,
    sum: &mut Vec<i64>,
    neg: &mut Vec<i64>,
    target: &LatticeSet,
) -> Result<u128> {
    if level == sets.len() {
        for (n, s) in neg.iter_mut().zip(sum.iter()) {
            *n = -s;
        }
        return Ok(target.contains_coords(neg) as u128);
    }
    let mut count = 0u128;
    for p in sets[level].iter() {
        for (s, c) in sum.iter_mut().zip(p.coords()) {
            *s = checked_sum(*s, *c)?;
        }
        count += enumerate_tuples(sets, level + 1, sum, neg, target)?;
        for (s, c) in sum.iter_mut().zip(p.coords()) {
            *s -= c;
        }
    }
    Ok(count)
}
