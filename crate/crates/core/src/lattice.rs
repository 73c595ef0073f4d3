//! Finite subsets of the integer lattice and the elementary operations on
//! them: sumsets, doubling, boxes with their boundary measure, discretized
//! balls and the box-folding arity-preserving isomorphism.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice point with signed integer coordinates.
///
/// The coordinate count is the ambient dimension; every point inside one
/// [`LatticeSet`] shares it. Ordering is lexicographic, which fixes the
/// canonical iteration order of every set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<i64>);

impl Point {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Point(coords.into())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0; dim])
    }

    /// Coordinatewise sum, checked against overflow.
    pub fn checked_add(&self, other: &Point) -> Result<Point> {
        debug_assert_eq!(self.dim(), other.dim());
        let mut out = Vec::with_capacity(self.dim());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_add(*b).ok_or_else(|| {
                Error::invalid(format!("coordinate overflow adding {a} and {b}"))
            })?);
        }
        Ok(Point(out))
    }

    pub fn negated(&self) -> Point {
        Point(self.0.iter().map(|c| -c).collect())
    }

    pub fn squared_norm(&self) -> u128 {
        self.0.iter().map(|&c| (c as i128 * c as i128) as u128).sum()
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A finite, deduplicated set of lattice points in a fixed dimension.
///
/// Points are kept sorted lexicographically, so iteration is deterministic
/// and membership is a binary search. The empty set is a valid value; the
/// operations that are undefined on it reject it explicitly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeSet {
    dim: usize,
    points: Vec<Point>,
}

impl LatticeSet {
    /// Builds a set from arbitrary points, deduplicating and sorting.
    /// Fails if some point has the wrong dimension or `dim == 0`.
    pub fn new(dim: usize, mut points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        points.sort_unstable();
        points.dedup();
        Ok(LatticeSet { dim, points })
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    /// One-dimensional set from raw integers; the common case in tests.
    pub fn one_dim(values: impl IntoIterator<Item = i64>) -> Self {
        let points = values.into_iter().map(|v| Point(vec![v])).collect();
        Self::new(1, points).expect("one-dimensional points are always consistent")
    }

    /// Set from coordinate rows, all of dimension `dim`.
    pub fn from_rows(dim: usize, rows: &[&[i64]]) -> Result<Self> {
        let points = rows.iter().map(|r| Point(r.to_vec())).collect();
        Self::new(dim, points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// Membership by coordinate slice, avoiding a temporary allocation.
    pub fn contains_coords(&self, coords: &[i64]) -> bool {
        self.points
            .binary_search_by(|q| q.coords().cmp(coords))
            .is_ok()
    }

    /// Componentwise (min, max) over all points; `None` for the empty set.
    pub fn bounds(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let first = self.points.first()?;
        let mut lo = first.0.clone();
        let mut hi = first.0.clone();
        for p in &self.points[1..] {
            for (i, &c) in p.0.iter().enumerate() {
                lo[i] = lo[i].min(c);
                hi[i] = hi[i].max(c);
            }
        }
        Some((lo, hi))
    }
}

impl std::fmt::Display for LatticeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{dim={}, {} points}}", self.dim, self.points.len())
    }
}

/// A symmetric box `P = [-N_1,N_1] x ... x [-N_d,N_d]` in the lattice,
/// given by its half-widths.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BoxShape {
    half_widths: Vec<u32>,
}

impl BoxShape {
    pub fn new(half_widths: impl Into<Vec<u32>>) -> Result<Self> {
        let half_widths = half_widths.into();
        if half_widths.is_empty() {
            return Err(Error::invalid("box must have at least one axis"));
        }
        Ok(BoxShape { half_widths })
    }

    pub fn dim(&self) -> usize {
        self.half_widths.len()
    }

    pub fn half_widths(&self) -> &[u32] {
        &self.half_widths
    }

    /// Number of lattice points in the box, `prod (2 N_i + 1)`.
    pub fn cell_count(&self) -> BigUint {
        self.half_widths
            .iter()
            .map(|&n| BigUint::from(2 * n as u64 + 1))
            .product()
    }

    /// The boundary measure `|P| * sum_i (2 N_i + 1)^{-1}`, exactly.
    ///
    /// Every side length divides `|P|`, so the value is a non-negative
    /// integer, but it is exposed as a rational to keep the contract
    /// independent of that observation.
    pub fn boundary_measure(&self) -> BigRational {
        let cells = BigInt::from(self.cell_count());
        let mut total = BigRational::zero();
        for &n in &self.half_widths {
            let side = BigInt::from(2 * n as u64 + 1);
            total += BigRational::new(cells.clone(), side);
        }
        total
    }

    /// The growth allowance for a single-axis compression, `|P| / (2 N_i + 1)`.
    pub fn axis_bound(&self, axis: usize) -> Result<BigUint> {
        if axis >= self.dim() {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: self.dim(),
            });
        }
        let side = BigUint::from(2 * self.half_widths[axis] as u64 + 1);
        Ok(self.cell_count() / side)
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && p.0
                .iter()
                .zip(&self.half_widths)
                .all(|(&c, &n)| c.unsigned_abs() <= n as u64)
    }

    pub fn contains_set(&self, set: &LatticeSet) -> bool {
        set.dim() == self.dim() && set.iter().all(|p| self.contains(p))
    }

    /// First point of the set outside the box, if any.
    pub fn first_outside<'a>(&self, set: &'a LatticeSet) -> Option<&'a Point> {
        set.iter().find(|p| !self.contains(p))
    }
}

/// A rank-`r` progression `{x_0 + n_1 x_1 + ... + n_r x_r : 0 <= n_i < N_i}`.
#[derive(Clone, Debug)]
pub struct ProgressionSpec {
    pub base: Point,
    pub generators: Vec<Point>,
    pub lengths: Vec<u32>,
}

impl ProgressionSpec {
    pub fn new(base: Point, generators: Vec<Point>, lengths: Vec<u32>) -> Result<Self> {
        if generators.len() != lengths.len() {
            return Err(Error::invalid(
                "generator and length counts must agree".to_string(),
            ));
        }
        for g in &generators {
            if g.dim() != base.dim() {
                return Err(Error::DimensionMismatch {
                    expected: base.dim(),
                    got: g.dim(),
                });
            }
        }
        if lengths.contains(&0) {
            return Err(Error::invalid("progression lengths must be positive"));
        }
        Ok(ProgressionSpec {
            base,
            generators,
            lengths,
        })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// `N_1 * ... * N_r`, the size when the progression is proper.
    pub fn declared_size(&self) -> BigUint {
        self.lengths.iter().map(|&n| BigUint::from(n)).product()
    }

    /// All points of the progression, as a set (collisions collapse).
    pub fn enumerate(&self) -> Result<LatticeSet> {
        let dim = self.base.dim();
        let mut points = Vec::new();
        let mut counters = vec![0u32; self.rank()];
        loop {
            let mut p = self.base.clone();
            for (g, &n) in self.generators.iter().zip(&counters) {
                for (c, &gc) in p.0.iter_mut().zip(&g.0) {
                    *c = c
                        .checked_add(gc.checked_mul(n as i64).ok_or_else(|| {
                            Error::invalid("progression coordinate overflow")
                        })?)
                        .ok_or_else(|| Error::invalid("progression coordinate overflow"))?;
                }
            }
            points.push(p);
            // odometer over the length tuple
            let mut i = 0;
            loop {
                if i == self.rank() {
                    return LatticeSet::new(dim, points);
                }
                counters[i] += 1;
                if counters[i] < self.lengths[i] {
                    break;
                }
                counters[i] = 0;
                i += 1;
            }
        }
    }

    /// Properness check by full enumeration: true iff no collisions occur.
    pub fn is_proper(&self) -> Result<bool> {
        let enumerated = self.enumerate()?;
        Ok(BigUint::from(enumerated.len()) == self.declared_size())
    }
}

fn check_same_dim(a: &LatticeSet, b: &LatticeSet) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

/// The sumset `A + B = {a + b : a in A, b in B}`.
pub fn sumset(a: &LatticeSet, b: &LatticeSet) -> Result<LatticeSet> {
    check_same_dim(a, b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut points = Vec::with_capacity(a.len() * b.len());
    for p in a.iter() {
        for q in b.iter() {
            points.push(p.checked_add(q)?);
        }
    }
    LatticeSet::new(a.dim(), points)
}

/// The doubling constant `|A + A| / |A|` as an exact rational.
pub fn doubling(a: &LatticeSet) -> Result<BigRational> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let double = sumset(a, a)?;
    Ok(BigRational::new(
        BigInt::from(double.len()),
        BigInt::from(a.len()),
    ))
}

/// Pointwise negation `-A`.
pub fn negate(a: &LatticeSet) -> LatticeSet {
    let points = a.iter().map(Point::negated).collect();
    LatticeSet::new(a.dim(), points).expect("negation preserves dimensions")
}

/// Pointwise translation `A + t`.
pub fn translate(a: &LatticeSet, t: &Point) -> Result<LatticeSet> {
    if t.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: t.dim(),
        });
    }
    let mut points = Vec::with_capacity(a.len());
    for p in a.iter() {
        points.push(p.checked_add(t)?);
    }
    LatticeSet::new(a.dim(), points)
}

/// All lattice points with `|x|^2 <= R^2`, for an exact rational radius.
///
/// Membership is decided in integer arithmetic: with `R = p/q` the test is
/// `q^2 * |x|^2 <= p^2`, so boundary points are never misclassified.
pub fn lattice_ball(dim: usize, radius: &BigRational) -> Result<LatticeSet> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if radius.is_negative() {
        return Err(Error::invalid("radius must be non-negative"));
    }
    let p = radius.numer().magnitude().clone();
    let q = radius.denom().magnitude().clone();
    let p2 = &p * &p;
    let q2 = &q * &q;
    // floor(R) bounds each coordinate
    let floor_r_big = &p / &q;
    let floor_r: i64 = i64::try_from(&floor_r_big)
        .map_err(|_| Error::invalid("radius too large to enumerate"))?;

    // depth-first over coordinates with remaining-budget pruning
    struct BallWalk {
        dim: usize,
        floor_r: i64,
        numer_sq: BigUint,
        denom_sq: BigUint,
    }
    impl BallWalk {
        fn descend(&self, axis: usize, coords: &mut [i64], partial: u128, out: &mut Vec<Point>) {
            if axis == self.dim {
                out.push(Point(coords.to_vec()));
                return;
            }
            for c in -self.floor_r..=self.floor_r {
                let total = partial + (c as i128 * c as i128) as u128;
                // exact test: q^2 * |x|^2 <= p^2
                if &self.denom_sq * BigUint::from(total) <= self.numer_sq {
                    coords[axis] = c;
                    self.descend(axis + 1, coords, total, out);
                }
            }
            coords[axis] = 0;
        }
    }

    let walk = BallWalk {
        dim,
        floor_r,
        numer_sq: p2,
        denom_sq: q2,
    };
    let mut points = Vec::new();
    let mut coords = vec![0i64; dim];
    walk.descend(0, &mut coords, 0, &mut points);
    LatticeSet::new(dim, points)
}

/// Convenience wrapper for an integer radius.
pub fn lattice_ball_int(dim: usize, radius: u32) -> Result<LatticeSet> {
    lattice_ball(dim, &BigRational::from(BigInt::from(radius)))
}

/// Packs the trailing axes of a set inside a declared box into a single
/// coordinate, preserving k-fold sum relations exactly.
///
/// Coordinates `1..=keep` pass through unchanged; the remaining axes are
/// mixed-radix packed with radix `2*k*N_j + 1` per folded axis `j`. A sum of
/// `k` digits from `[-N_j, N_j]` stays within `[-k N_j, k N_j]`, so k-fold
/// sums never interact across digits and `q_1 + ... + q_k = 0` holds before
/// the fold iff it holds after.
pub fn fold_isomorphism(
    a: &LatticeSet,
    enclosing: &BoxShape,
    keep: usize,
    arity: u32,
) -> Result<LatticeSet> {
    let rank = a.dim();
    if enclosing.dim() != rank {
        return Err(Error::DimensionMismatch {
            expected: rank,
            got: enclosing.dim(),
        });
    }
    if arity < 3 {
        return Err(Error::invalid("fold arity must be at least 3"));
    }
    if rank < keep + 1 {
        return Err(Error::invalid(format!(
            "rank {rank} must be at least {} to fold down to dimension {}",
            keep + 1,
            keep + 1
        )));
    }
    if let Some(p) = enclosing.first_outside(a) {
        return Err(Error::PointOutsideBox {
            point: p.coords().to_vec(),
        });
    }

    // weights: w_{keep} = 1, w_{j+1} = w_j * (2 k N_j + 1)
    let mut weights = Vec::with_capacity(rank - keep);
    let mut w: i128 = 1;
    for j in keep..rank {
        weights.push(w);
        let radix = 2 * arity as i128 * enclosing.half_widths()[j] as i128 + 1;
        w = w.checked_mul(radix).ok_or_else(|| {
            Error::invalid("fold radices overflow the packed coordinate range")
        })?;
    }

    let mut points = Vec::with_capacity(a.len());
    for p in a.iter() {
        let mut coords: Vec<i64> = p.coords()[..keep].to_vec();
        let mut packed: i128 = 0;
        for (j, &weight) in weights.iter().enumerate() {
            packed = packed
                .checked_add(weight * p.coords()[keep + j] as i128)
                .ok_or_else(|| Error::invalid("fold packing overflow"))?;
        }
        let packed = i64::try_from(packed)
            .map_err(|_| Error::invalid("folded coordinate exceeds i64"))?;
        coords.push(packed);
        points.push(Point(coords));
    }
    LatticeSet::new(keep + 1, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sumset_identity_element() {
        let a = LatticeSet::one_dim([0]);
        let b = LatticeSet::one_dim([0, 5]);
        assert_eq!(sumset(&a, &b).unwrap(), LatticeSet::one_dim([0, 5]));
    }

    #[test]
    fn sumset_interval() {
        let a = LatticeSet::one_dim([0, 1, 2]);
        assert_eq!(
            sumset(&a, &a).unwrap(),
            LatticeSet::one_dim([0, 1, 2, 3, 4])
        );
    }

    #[test]
    fn sumset_two_dim() {
        let a = LatticeSet::from_rows(2, &[&[0, 0], &[1, 0]]).unwrap();
        let b = LatticeSet::from_rows(2, &[&[0, 0], &[0, 1]]).unwrap();
        let expected =
            LatticeSet::from_rows(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap();
        assert_eq!(sumset(&a, &b).unwrap(), expected);
    }

    #[test]
    fn sumset_rejects_dim_mismatch_and_empty() {
        let a = LatticeSet::one_dim([0]);
        let b = LatticeSet::from_rows(2, &[&[0, 0]]).unwrap();
        assert!(matches!(
            sumset(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
        let empty = LatticeSet::empty(1).unwrap();
        assert!(matches!(sumset(&a, &empty), Err(Error::EmptySet)));
    }

    #[test]
    fn doubling_interval() {
        let a = LatticeSet::one_dim(0..10);
        assert_eq!(doubling(&a).unwrap(), rational(19, 10));
    }

    #[test]
    fn doubling_singleton() {
        let a = LatticeSet::one_dim([0]);
        assert_eq!(doubling(&a).unwrap(), rational(1, 1));
    }

    #[test]
    fn doubling_lacunary_blocks() {
        // Three length-100 blocks at widely separated offsets. All pairwise
        // block sums are disjoint, so |A+A| = 6 * 199 exactly; the value is
        // frozen from this enumeration and bracketed by the block count.
        let mut values = Vec::new();
        for i in 1..=3u32 {
            let x = 10i64.pow(3 * i);
            values.extend((1..=100).map(|j| x + j));
        }
        let a = LatticeSet::one_dim(values);
        assert_eq!(a.len(), 300);
        let sigma = doubling(&a).unwrap();
        assert_eq!(sigma, rational(6 * 199, 300));
        let sigma_f = sigma.to_f64().unwrap();
        assert!(sigma_f > 3.0 && sigma_f < 6.0);
    }

    #[test]
    fn negate_and_translate() {
        assert_eq!(
            negate(&LatticeSet::one_dim([1, 2])),
            LatticeSet::one_dim([-2, -1])
        );
        assert_eq!(
            translate(&LatticeSet::one_dim([0, 1]), &Point::new([5])).unwrap(),
            LatticeSet::one_dim([5, 6])
        );
        let a = LatticeSet::from_rows(2, &[&[3, -1], &[0, 2]]).unwrap();
        assert_eq!(negate(&negate(&a)), a);
    }

    #[test]
    fn boundary_measure_examples() {
        let p = BoxShape::new(vec![1]).unwrap();
        assert_eq!(p.boundary_measure(), rational(1, 1));
        let p = BoxShape::new(vec![1, 2]).unwrap();
        assert_eq!(p.boundary_measure(), rational(8, 1));
        let p = BoxShape::new(vec![0, 0]).unwrap();
        assert_eq!(p.boundary_measure(), rational(2, 1));
    }

    #[test]
    fn boundary_measure_ratio_is_exact() {
        let p = BoxShape::new(vec![2, 3, 5]).unwrap();
        let cells = BigRational::from(BigInt::from(p.cell_count()));
        let expected: BigRational =
            rational(1, 5) + rational(1, 7) + rational(1, 11);
        assert_eq!(p.boundary_measure() / cells, expected);
    }

    #[test]
    fn lattice_ball_small_cases() {
        let b = lattice_ball_int(2, 1).unwrap();
        assert_eq!(b.len(), 5);
        assert!(b.contains(&Point::new([0, 0])));
        assert!(b.contains(&Point::new([-1, 0])));
        assert!(!b.contains(&Point::new([1, 1])));

        let b = lattice_ball_int(1, 3).unwrap();
        assert_eq!(b, LatticeSet::one_dim(-3..=3));

        let b = lattice_ball_int(2, 2).unwrap();
        assert_eq!(b.len(), 13);
    }

    #[test]
    fn lattice_ball_exact_boundary() {
        // R = 5/2: the point (2,1) has |x|^2 = 5 < 25/4, (2,2) has 8 > 25/4.
        let b = lattice_ball(2, &rational(5, 2)).unwrap();
        assert!(b.contains(&Point::new([2, 1])));
        assert!(!b.contains(&Point::new([2, 2])));
        // integer boundary must be inclusive
        let b = lattice_ball_int(2, 5).unwrap();
        assert!(b.contains(&Point::new([3, 4])));
    }

    #[test]
    fn lattice_ball_gauss_density() {
        for r in [20u32, 31, 40] {
            let b = lattice_ball_int(2, r).unwrap();
            let ratio = b.len() as f64 / (std::f64::consts::PI * (r as f64).powi(2));
            assert!(ratio > 0.9 && ratio < 1.1, "R={r}: ratio {ratio}");
        }
    }

    #[test]
    fn fold_packing_formula() {
        // rank 2 folded to a single coordinate, arity 3, box (1,1):
        // (1,1) -> 1 + 1 * (2*3*1 + 1) = 8
        let a = LatticeSet::from_rows(2, &[&[1, 1]]).unwrap();
        let enclosing = BoxShape::new(vec![1, 1]).unwrap();
        let image = fold_isomorphism(&a, &enclosing, 0, 3).unwrap();
        assert_eq!(image, LatticeSet::one_dim([8]));
    }

    #[test]
    fn fold_with_nothing_to_pack_is_identity() {
        let a = LatticeSet::from_rows(2, &[&[1, -2], &[0, 3]]).unwrap();
        let enclosing = BoxShape::new(vec![2, 3]).unwrap();
        let image = fold_isomorphism(&a, &enclosing, 1, 4).unwrap();
        assert_eq!(image, a);
    }

    #[test]
    fn fold_rejects_small_arity_and_short_rank() {
        let a = LatticeSet::from_rows(2, &[&[0, 0]]).unwrap();
        let enclosing = BoxShape::new(vec![1, 1]).unwrap();
        assert!(fold_isomorphism(&a, &enclosing, 0, 2).is_err());
        assert!(fold_isomorphism(&a, &enclosing, 2, 3).is_err());
    }

    #[test]
    fn fold_rejects_point_outside_box() {
        let a = LatticeSet::from_rows(2, &[&[2, 0]]).unwrap();
        let enclosing = BoxShape::new(vec![1, 1]).unwrap();
        assert!(matches!(
            fold_isomorphism(&a, &enclosing, 0, 3),
            Err(Error::PointOutsideBox { .. })
        ));
    }

    #[test]
    fn progression_properness() {
        // {0 + 3n1 + 7n2}, lengths (3, 2): all 6 values distinct
        let spec = ProgressionSpec::new(
            Point::new([0]),
            vec![Point::new([3]), Point::new([7])],
            vec![3, 2],
        )
        .unwrap();
        assert!(spec.is_proper().unwrap());
        assert_eq!(spec.enumerate().unwrap().len(), 6);

        // {0 + 1n1 + 2n2}, lengths (3, 2): 1*2 = 2*1 collides
        let spec = ProgressionSpec::new(
            Point::new([0]),
            vec![Point::new([1]), Point::new([2])],
            vec![3, 2],
        )
        .unwrap();
        assert!(!spec.is_proper().unwrap());
    }

    #[test]
    fn rank_zero_progression_is_base_point() {
        let spec = ProgressionSpec::new(Point::new([4, -1]), vec![], vec![]).unwrap();
        let set = spec.enumerate().unwrap();
        assert_eq!(set.len(), 1);
        assert!(spec.is_proper().unwrap());
    }
}
