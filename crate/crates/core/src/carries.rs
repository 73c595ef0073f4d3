//! Coset-representative systems for `(bZ)^d` inside `Z^d` and the search
//! for systems extremizing the carry density `c(A) = E_3(A,A,-A) / |A|^2`.
//!
//! A system assigns one representative to each of the `b^d` residue
//! classes. Searches range over a declared finite window of candidate
//! lifts per class, so "optimum" is well-defined; the default window
//! offers the canonical lift in `[0, b)^d` and its shift by `-b` along any
//! subset of coordinates.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::energy::EnergyEngine;
use crate::error::{Error, Result};
use crate::lattice::{LatticeSet, Point};

/// A complete system of coset representatives, indexed by class rank
/// (mixed-radix over the class coordinates, first axis most significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSystem {
    base: u32,
    dim: usize,
    reps: Vec<Point>,
}

fn class_count(base: u32, dim: usize) -> Result<usize> {
    let mut n: usize = 1;
    for _ in 0..dim {
        n = n
            .checked_mul(base as usize)
            .ok_or_else(|| Error::invalid("class count overflows"))?;
    }
    Ok(n)
}

/// Coordinates of the class with the given rank, each in `[0, b)`.
pub fn class_coords(base: u32, dim: usize, mut rank: usize) -> Vec<i64> {
    let mut coords = vec![0i64; dim];
    for i in (0..dim).rev() {
        coords[i] = (rank % base as usize) as i64;
        rank /= base as usize;
    }
    coords
}

impl RepSystem {
    /// Validates that `reps` lists one representative per class in rank
    /// order, each congruent to its class coordinatewise.
    pub fn new(base: u32, dim: usize, reps: Vec<Point>) -> Result<Self> {
        if base < 2 {
            return Err(Error::invalid("base must be at least 2"));
        }
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        let n = class_count(base, dim)?;
        if reps.len() != n {
            return Err(Error::invalid(format!(
                "expected {n} representatives, got {}",
                reps.len()
            )));
        }
        for (rank, rep) in reps.iter().enumerate() {
            if rep.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: rep.dim(),
                });
            }
            let class = class_coords(base, dim, rank);
            for (&r, &c) in rep.coords().iter().zip(&class) {
                if r.rem_euclid(base as i64) != c {
                    return Err(Error::invalid(format!(
                        "representative {rep} is not congruent to its class {class:?} mod {base}"
                    )));
                }
            }
        }
        Ok(RepSystem { base, dim, reps })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn reps(&self) -> &[Point] {
        &self.reps
    }

    /// The representatives as a lattice set; distinct classes have distinct
    /// representatives, so `|A| = b^d`.
    pub fn as_lattice_set(&self) -> LatticeSet {
        LatticeSet::new(self.dim, self.reps.clone()).expect("validated points")
    }
}

/// The system whose representative of each class is its unique lift into
/// the centered box `[-(b-1)/2, (b-1)/2]^d`; requires odd `b`.
pub fn centered_box_system(base: u32, dim: usize) -> Result<RepSystem> {
    if base.is_multiple_of(2) {
        return Err(Error::invalid("the centered box system needs an odd base"));
    }
    let n = class_count(base, dim)?;
    let half = ((base - 1) / 2) as i64;
    let reps = (0..n)
        .map(|rank| {
            let coords = class_coords(base, dim, rank)
                .into_iter()
                .map(|c| if c <= half { c } else { c - base as i64 })
                .collect::<Vec<_>>();
            Point::new(coords)
        })
        .collect();
    RepSystem::new(base, dim, reps)
}

/// `c(A) = E_3(A,A,-A) / |A|^2` for the representative set, exactly.
pub fn carry_probability(engine: &EnergyEngine, system: &RepSystem) -> Result<BigRational> {
    Ok(engine.carry_density(&system.as_lattice_set())?.normalized)
}

/// Per-class candidate representatives a search may choose from.
#[derive(Clone, Debug)]
pub struct SearchWindow {
    base: u32,
    dim: usize,
    candidates: Vec<Vec<Point>>,
}

impl SearchWindow {
    /// The default window: the canonical lift in `[0, b)^d`, shifted by
    /// `-b` along every subset of coordinates -- `2^d` candidates per class.
    pub fn default_window(base: u32, dim: usize) -> Result<Self> {
        let n = class_count(base, dim)?;
        let mut candidates = Vec::with_capacity(n);
        for rank in 0..n {
            let lift = class_coords(base, dim, rank);
            let mut class_cands = Vec::with_capacity(1 << dim);
            for mask in 0u32..(1 << dim) {
                let coords: Vec<i64> = lift
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| if mask >> i & 1 == 1 { c - base as i64 } else { c })
                    .collect();
                class_cands.push(Point::new(coords));
            }
            candidates.push(class_cands);
        }
        Ok(SearchWindow {
            base,
            dim,
            candidates,
        })
    }

    /// A window from explicit per-class candidate lists, validated against
    /// the class congruences.
    pub fn from_candidates(base: u32, dim: usize, candidates: Vec<Vec<Point>>) -> Result<Self> {
        let n = class_count(base, dim)?;
        if candidates.len() != n {
            return Err(Error::invalid(format!(
                "expected candidate lists for {n} classes, got {}",
                candidates.len()
            )));
        }
        for (rank, cands) in candidates.iter().enumerate() {
            if cands.is_empty() {
                return Err(Error::invalid(format!("class {rank} has no candidates")));
            }
            let mut sorted = cands.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != cands.len() {
                return Err(Error::invalid(format!(
                    "class {rank} lists a candidate twice"
                )));
            }
            let class = class_coords(base, dim, rank);
            for cand in cands {
                for (&r, &c) in cand.coords().iter().zip(&class) {
                    if r.rem_euclid(base as i64) != c {
                        return Err(Error::invalid(format!(
                            "candidate {cand} is not congruent to class {class:?} mod {base}"
                        )));
                    }
                }
            }
        }
        Ok(SearchWindow {
            base,
            dim,
            candidates,
        })
    }

    pub fn candidates(&self) -> &[Vec<Point>] {
        &self.candidates
    }

    /// Total number of systems the window spans.
    pub fn system_count(&self) -> BigUint {
        self.candidates
            .iter()
            .map(|c| BigUint::from(c.len()))
            .product()
    }

    fn system_from_assignment(&self, assignment: &[usize]) -> RepSystem {
        let reps = assignment
            .iter()
            .enumerate()
            .map(|(class, &j)| self.candidates[class][j].clone())
            .collect();
        RepSystem::new(self.base, self.dim, reps).expect("window candidates are congruent")
    }

    /// Assignment indices selecting the given system, if every representative
    /// is offered by the window.
    fn assignment_of(&self, system: &RepSystem) -> Option<Vec<usize>> {
        system
            .reps()
            .iter()
            .enumerate()
            .map(|(class, rep)| self.candidates[class].iter().position(|c| c == rep))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Max,
    Min,
}

impl Objective {
    /// True when `a` is strictly better than `b` for this objective.
    fn better(&self, a: &BigRational, b: &BigRational) -> bool {
        match self {
            Objective::Max => a > b,
            Objective::Min => a < b,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Local,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best_system: RepSystem,
    pub best_c: BigRational,
    /// `(step, c)` every time the incumbent improved.
    pub trajectory: Vec<(u64, BigRational)>,
    pub mode: SearchMode,
    pub steps: u64,
}

/// Number of ordered pairs `(x, y)` in `A^2` with `x + y` in `A`.
fn count_pair_sums(points: &[Point]) -> u128 {
    let mut count = 0u128;
    let dim = points[0].dim();
    let mut sum = vec![0i64; dim];
    for x in points {
        for y in points {
            for ((s, &a), &b) in sum.iter_mut().zip(x.coords()).zip(y.coords()) {
                *s = a + b;
            }
            if points.binary_search_by(|q| q.coords().cmp(&sum)).is_ok() {
                count += 1;
            }
        }
    }
    count
}

fn carry_ratio(count: u128, size: usize) -> BigRational {
    BigRational::new(
        BigInt::from(count),
        BigInt::from(size) * BigInt::from(size),
    )
}

/// True optimum of `c` over every assignment the window allows.
/// Fails when the window spans more systems than `budget`.
pub fn exhaustive_search(
    window: &SearchWindow,
    objective: Objective,
    budget: u128,
) -> Result<SearchResult> {
    let total = window.system_count();
    if total > BigUint::from(budget) {
        return Err(Error::SearchBudgetExceeded {
            systems: total.to_string(),
            budget,
        });
    }
    let classes = window.candidates.len();
    let mut assignment = vec![0usize; classes];
    let mut best: Option<(BigRational, Vec<usize>)> = None;
    let mut trajectory = Vec::new();
    let mut steps: u64 = 0;
    loop {
        let system = window.system_from_assignment(&assignment);
        let set = system.as_lattice_set();
        let c = carry_ratio(count_pair_sums(set.points()), set.len());
        steps += 1;
        let improved = match &best {
            None => true,
            Some((incumbent, _)) => objective.better(&c, incumbent),
        };
        if improved {
            trajectory.push((steps, c.clone()));
            best = Some((c, assignment.clone()));
        }
        // odometer over assignments
        let mut i = 0;
        loop {
            if i == classes {
                let (best_c, best_assignment) = best.expect("at least one system");
                return Ok(SearchResult {
                    best_system: window.system_from_assignment(&best_assignment),
                    best_c,
                    trajectory,
                    mode: SearchMode::Exhaustive,
                    steps,
                });
            }
            assignment[i] += 1;
            if assignment[i] < window.candidates[i].len() {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

/// Exact change of the pair-sum count when the representative `p_old` is
/// replaced by `p_new`: only the terms touched by the moved point are
/// recounted, so a move costs `O(|A| log |A|)` instead of a full recount.
fn swap_delta(points: &[Point], p_old: &Point, p_new: &Point) -> i128 {
    let dim = p_old.dim();
    let mut sum = vec![0i64; dim];
    let contains = |coords: &[i64]| points.binary_search_by(|q| q.coords().cmp(coords)).is_ok();
    let in_b = |coords: &[i64]| contains(coords) && coords != p_old.coords();
    let in_a_new = |coords: &[i64]| in_b(coords) || coords == p_new.coords();

    let mut delta: i128 = 0;
    // pairs within B = A \ {old}: sums equal to new gained, equal to old lost
    for y in points.iter().filter(|y| y.coords() != p_old.coords()) {
        for (s, (&a, &b)) in sum.iter_mut().zip(p_new.coords().iter().zip(y.coords())) {
            *s = a - b;
        }
        if in_b(&sum) {
            delta += 1;
        }
        for (s, (&a, &b)) in sum.iter_mut().zip(p_old.coords().iter().zip(y.coords())) {
            *s = a - b;
        }
        if in_b(&sum) {
            delta -= 1;
        }
        // pairs pairing the moved point with y, in both directions
        for (s, (&a, &b)) in sum.iter_mut().zip(p_old.coords().iter().zip(y.coords())) {
            *s = a + b;
        }
        if contains(&sum) {
            delta -= 2;
        }
        for (s, (&a, &b)) in sum.iter_mut().zip(p_new.coords().iter().zip(y.coords())) {
            *s = a + b;
        }
        if in_a_new(&sum) {
            delta += 2;
        }
    }
    // the diagonal pairs (old, old) and (new, new)
    for (s, &a) in sum.iter_mut().zip(p_old.coords()) {
        *s = 2 * a;
    }
    if contains(&sum) {
        delta -= 1;
    }
    for (s, &a) in sum.iter_mut().zip(p_new.coords()) {
        *s = 2 * a;
    }
    if in_a_new(&sum) {
        delta += 1;
    }
    delta
}

/// Configuration for the hill-climbing search.
#[derive(Clone, Debug)]
pub struct LocalSearchConfig {
    pub seed: u64,
    pub restarts: u32,
    /// Cap on accepted moves per restart.
    pub max_steps: u64,
}

impl Default for LocalSearchConfig {
    fn default() -> Self {
        LocalSearchConfig {
            seed: 1,
            restarts: 8,
            max_steps: 100_000,
        }
    }
}

type ClimbOutcome = (BigRational, Vec<usize>, Vec<(u64, BigRational)>, u64);

/// Steepest-ascent hill climbing over single-class representative swaps
/// with seeded random restarts.
///
/// When the base is odd and the centered box system lies inside the window,
/// restart 0 starts from it, so the returned value never falls short of the
/// centered-box value on a max objective. Restart seeds derive from
/// `(seed, restart index)`; the merged result is deterministic for any
/// worker count.
pub fn local_search(
    window: &SearchWindow,
    objective: Objective,
    config: &LocalSearchConfig,
) -> Result<SearchResult> {
    if config.restarts == 0 {
        return Err(Error::invalid("local search needs at least one restart"));
    }
    let centered_assignment = if window.base % 2 == 1 {
        centered_box_system(window.base, window.dim)
            .ok()
            .and_then(|sys| window.assignment_of(&sys))
    } else {
        None
    };

    let runs: Vec<ClimbOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|restart| {
            let assignment = match (&centered_assignment, restart) {
                (Some(centered), 0) => centered.clone(),
                _ => {
                    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                    rng.set_stream(restart as u64 + 1);
                    window
                        .candidates
                        .iter()
                        .map(|cands| rng.random_range(0..cands.len()))
                        .collect()
                }
            };
            climb(window, objective, assignment, config.max_steps)
        })
        .collect();

    let mut best: Option<ClimbOutcome> = None;
    for run in runs {
        let take = match &best {
            None => true,
            Some((incumbent, ..)) => objective.better(&run.0, incumbent),
        };
        if take {
            best = Some(run);
        }
    }
    let (best_c, assignment, trajectory, steps) = best.expect("restarts >= 1");
    Ok(SearchResult {
        best_system: window.system_from_assignment(&assignment),
        best_c,
        trajectory,
        mode: SearchMode::Local,
        steps,
    })
}

fn climb(
    window: &SearchWindow,
    objective: Objective,
    mut assignment: Vec<usize>,
    max_steps: u64,
) -> ClimbOutcome {
    let size = window.candidates.len();
    let mut points: Vec<Point> = window
        .system_from_assignment(&assignment)
        .as_lattice_set()
        .points()
        .to_vec();
    let mut count = count_pair_sums(&points) as i128;
    let mut steps = 0u64;
    let mut trajectory = vec![(0, carry_ratio(count as u128, size))];

    while steps < max_steps {
        let mut best_move: Option<(i128, usize, usize)> = None;
        for (class, cands) in window.candidates.iter().enumerate() {
            let cur = &cands[assignment[class]];
            for (j, cand) in cands.iter().enumerate() {
                if j == assignment[class] {
                    continue;
                }
                let delta = swap_delta(&points, cur, cand);
                let gain = match objective {
                    Objective::Max => delta,
                    Objective::Min => -delta,
                };
                if gain > 0 && best_move.as_ref().is_none_or(|(g, ..)| gain > *g) {
                    best_move = Some((gain, class, j));
                }
            }
        }
        let Some((_, class, j)) = best_move else {
            break;
        };
        let old = window.candidates[class][assignment[class]].clone();
        let new = window.candidates[class][j].clone();
        count += swap_delta(&points, &old, &new);
        let pos = points
            .binary_search(&old)
            .expect("current representative is in the set");
        points.remove(pos);
        let pos = points.binary_search(&new).unwrap_err();
        points.insert(pos, new);
        assignment[class] = j;
        steps += 1;
        trajectory.push((steps, carry_ratio(count as u128, size)));
    }
    (
        carry_ratio(count as u128, size),
        assignment,
        trajectory,
        steps,
    )
}

/// One base of the trend scan.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub base: u32,
    /// Exact centered-box value; present only for odd bases.
    pub centered_c: Option<BigRational>,
    pub best_c: BigRational,
    pub mode: SearchMode,
}

/// Search results across bases next to the continuum constant `c_d` and
/// the conjectured box value `(3/4)^d`. The comparison is reported, never
/// asserted: the searches give lower bounds on the true maximum.
#[derive(Clone, Debug)]
pub struct ScanReport {
    pub dim: usize,
    pub c_d: f64,
    /// `(3/4)^d`, exactly; labeled a conjecture in every rendering.
    pub conjectured_box_limit: BigRational,
    pub rows: Vec<ScanRow>,
    pub centered_values_decreasing: bool,
    pub all_within_trivial_bound: bool,
}

pub fn corollary_scan(
    dim: usize,
    bases: &[u32],
    engine: &EnergyEngine,
    ball_cfg: &crate::ball::BallConfig,
    exhaustive_budget: u128,
) -> Result<ScanReport> {
    let c_d = crate::ball::ball_c_constant(dim, ball_cfg)?.value;
    let mut rows = Vec::with_capacity(bases.len());
    for &b in bases {
        let window = SearchWindow::default_window(b, dim)?;
        let result = match exhaustive_search(&window, Objective::Max, exhaustive_budget) {
            Ok(r) => r,
            Err(Error::SearchBudgetExceeded { .. }) => {
                local_search(&window, Objective::Max, &LocalSearchConfig::default())?
            }
            Err(e) => return Err(e),
        };
        let centered_c = if b % 2 == 1 {
            Some(carry_probability(engine, &centered_box_system(b, dim)?)?)
        } else {
            None
        };
        rows.push(ScanRow {
            base: b,
            centered_c,
            best_c: result.best_c,
            mode: result.mode,
        });
    }
    let one = BigRational::from(BigInt::from(1));
    let all_within_trivial_bound = rows.iter().all(|r| r.best_c <= one);
    let centered: Vec<&BigRational> = rows.iter().filter_map(|r| r.centered_c.as_ref()).collect();
    let centered_values_decreasing = centered.windows(2).all(|w| w[1] < w[0]);
    Ok(ScanReport {
        dim,
        c_d,
        conjectured_box_limit: BigRational::new(
            BigInt::from(3u32).pow(dim as u32),
            BigInt::from(4u32).pow(dim as u32),
        ),
        rows,
        centered_values_decreasing,
        all_within_trivial_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn engine() -> EnergyEngine {
        EnergyEngine::default()
    }

    #[test]
    fn centered_box_examples() {
        let sys = centered_box_system(3, 1).unwrap();
        assert_eq!(sys.as_lattice_set(), LatticeSet::one_dim([-1, 0, 1]));
        assert!(centered_box_system(4, 1).is_err());

        let sys = centered_box_system(5, 1).unwrap();
        assert_eq!(carry_probability(&engine(), &sys).unwrap(), rational(19, 25));
    }

    #[test]
    fn centered_box_product_law() {
        // the 2-dimensional centered box factors into the square of the
        // 1-dimensional value
        let one = carry_probability(&engine(), &centered_box_system(5, 1).unwrap()).unwrap();
        let two = carry_probability(&engine(), &centered_box_system(5, 2).unwrap()).unwrap();
        assert_eq!(two, &one * &one);
        assert_eq!(two, rational(361, 625));
    }

    #[test]
    fn base_two_systems() {
        let sys = RepSystem::new(2, 1, vec![Point::new([0]), Point::new([1])]).unwrap();
        assert_eq!(carry_probability(&engine(), &sys).unwrap(), rational(3, 4));
        let sys = RepSystem::new(2, 1, vec![Point::new([0]), Point::new([-1])]).unwrap();
        assert_eq!(carry_probability(&engine(), &sys).unwrap(), rational(3, 4));
    }

    #[test]
    fn rejects_incongruent_reps() {
        assert!(RepSystem::new(2, 1, vec![Point::new([0]), Point::new([2])]).is_err());
        assert!(RepSystem::new(2, 1, vec![Point::new([0])]).is_err());
    }

    #[test]
    fn window_from_candidates_validates() {
        // congruent, distinct candidates are accepted
        let good = SearchWindow::from_candidates(
            2,
            1,
            vec![
                vec![Point::new([0]), Point::new([2])],
                vec![Point::new([1])],
            ],
        );
        assert!(good.is_ok());
        // duplicates within a class are rejected
        let dup = SearchWindow::from_candidates(
            2,
            1,
            vec![
                vec![Point::new([0]), Point::new([0])],
                vec![Point::new([1])],
            ],
        );
        assert!(dup.is_err());
        // incongruent candidates are rejected
        let bad = SearchWindow::from_candidates(
            2,
            1,
            vec![vec![Point::new([1])], vec![Point::new([1])]],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn centered_box_closed_form() {
        // c = (3b^2 + 1) / (4b^2) for the centered interval, checked against
        // the counting engine for every small odd base
        for b in (3u32..=15).step_by(2) {
            let sys = centered_box_system(b, 1).unwrap();
            let c = carry_probability(&engine(), &sys).unwrap();
            let expected = rational(3 * (b as i64).pow(2) + 1, 4 * (b as i64).pow(2));
            assert_eq!(c, expected, "b={b}");
        }
    }

    #[test]
    fn exhaustive_base_two_and_three() {
        let window = SearchWindow::default_window(2, 1).unwrap();
        assert_eq!(window.system_count(), BigUint::from(4u32));
        let result = exhaustive_search(&window, Objective::Max, 1 << 20).unwrap();
        assert_eq!(result.best_c, rational(3, 4));

        let window = SearchWindow::default_window(3, 1).unwrap();
        let result = exhaustive_search(&window, Objective::Max, 1 << 20).unwrap();
        assert_eq!(result.best_c, rational(7, 9));
        let min = exhaustive_search(&window, Objective::Min, 1 << 20).unwrap();
        assert!(min.best_c <= result.best_c);
    }

    #[test]
    fn budget_exceeded_suggests_local_search() {
        let window = SearchWindow::default_window(3, 1).unwrap();
        assert!(matches!(
            exhaustive_search(&window, Objective::Max, 4),
            Err(Error::SearchBudgetExceeded { .. })
        ));
    }

    #[test]
    fn swap_delta_matches_full_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let window = SearchWindow::default_window(5, 2).unwrap();
        let mut assignment: Vec<usize> = window
            .candidates()
            .iter()
            .map(|c| rng.random_range(0..c.len()))
            .collect();
        for _ in 0..50 {
            let set = window.system_from_assignment(&assignment).as_lattice_set();
            let points = set.points().to_vec();
            let before = count_pair_sums(&points) as i128;
            let class = rng.random_range(0..assignment.len());
            let j = rng.random_range(0..window.candidates()[class].len());
            if j == assignment[class] {
                continue;
            }
            let old = window.candidates()[class][assignment[class]].clone();
            let new = window.candidates()[class][j].clone();
            let delta = swap_delta(&points, &old, &new);
            assignment[class] = j;
            let after_set = window.system_from_assignment(&assignment).as_lattice_set();
            let after = count_pair_sums(after_set.points()) as i128;
            assert_eq!(before + delta, after);
        }
    }

    #[test]
    fn local_search_matches_exhaustive_on_small_bases() {
        for b in 2u32..=6 {
            let window = SearchWindow::default_window(b, 1).unwrap();
            let exhaustive = exhaustive_search(&window, Objective::Max, 1 << 20).unwrap();
            let local = local_search(
                &window,
                Objective::Max,
                &LocalSearchConfig {
                    seed: 3,
                    restarts: 8,
                    max_steps: 10_000,
                },
            )
            .unwrap();
            assert_eq!(local.best_c, exhaustive.best_c, "b={b}");
        }
    }

    #[test]
    fn local_search_is_deterministic() {
        let window = SearchWindow::default_window(7, 1).unwrap();
        let cfg = LocalSearchConfig {
            seed: 5,
            restarts: 4,
            max_steps: 1_000,
        };
        let a = local_search(&window, Objective::Max, &cfg).unwrap();
        let b = local_search(&window, Objective::Max, &cfg).unwrap();
        assert_eq!(a.best_c, b.best_c);
        assert_eq!(a.best_system, b.best_system);
        // hill climbing only accepts improving moves
        assert!(a.trajectory.windows(2).all(|w| w[1].1 >= w[0].1));
    }

    #[test]
    fn local_search_never_below_centered_box_for_max() {
        for b in [3u32, 5, 7, 9] {
            let window = SearchWindow::default_window(b, 1).unwrap();
            let centered =
                carry_probability(&engine(), &centered_box_system(b, 1).unwrap()).unwrap();
            let local = local_search(
                &window,
                Objective::Max,
                &LocalSearchConfig {
                    seed: 1,
                    restarts: 2,
                    max_steps: 10_000,
                },
            )
            .unwrap();
            assert!(local.best_c >= centered, "b={b}");
        }
    }

    #[test]
    fn negation_preserves_carry_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let eng = engine();
        for _ in 0..20 {
            let window = SearchWindow::default_window(4, 2).unwrap();
            let assignment: Vec<usize> = window
                .candidates()
                .iter()
                .map(|c| rng.random_range(0..c.len()))
                .collect();
            let set = window.system_from_assignment(&assignment).as_lattice_set();
            let c = eng.carry_density(&set).unwrap().normalized;
            let neg = crate::lattice::negate(&set);
            let c_neg = eng.carry_density(&neg).unwrap().normalized;
            assert_eq!(c, c_neg);
        }
    }
}

#[cfg(test)]
mod scan_tests {
    use super::*;
    use crate::ball::BallConfig;

    #[test]
    fn scan_reports_decreasing_centered_values() {
        let engine = EnergyEngine::default();
        let report = corollary_scan(
            1,
            &[3, 5, 7, 9],
            &engine,
            &BallConfig::default(),
            1 << 20,
        )
        .unwrap();
        assert!(report.centered_values_decreasing);
        assert!(report.all_within_trivial_bound);
        assert!((report.c_d - 0.75).abs() < 1e-9);
        assert_eq!(
            report.conjectured_box_limit,
            BigRational::new(BigInt::from(3), BigInt::from(4))
        );
        // the centered values head toward the conjectured limit from above
        let last = report.rows.last().unwrap().centered_c.clone().unwrap();
        assert!(last > report.conjectured_box_limit);
    }

    #[test]
    fn scan_handles_even_bases_without_centered_value() {
        let engine = EnergyEngine::default();
        let report =
            corollary_scan(1, &[2, 4], &engine, &BallConfig::default(), 1 << 20).unwrap();
        assert!(report.rows.iter().all(|r| r.centered_c.is_none()));
        assert!(report.all_within_trivial_bound);
    }
}
