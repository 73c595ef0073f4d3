//! Energies of origin-centered closed balls in d dimensions.
//!
//! Every energy here reduces to a one-dimensional radial integral of the
//! two-ball intersection volume, which is the single kernel the module is
//! built on: for balls, the measure of `{x : -s - x in B}` is again a
//! ball-ball overlap at center distance `|s|`. A seeded Monte Carlo
//! estimator covers the arities without a radial reduction and cross-checks
//! the quadrature path.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::energy::EnergyEngine;
use crate::error::{Error, Result};
use crate::lattice::lattice_ball_int;
use crate::quadrature;

/// `(4 sqrt(3) / 9)^d` is the sharp symmetric-set bound on `e_d`; the base
/// is also the limit of `e_d^(1/d)`.
pub const HY_BASE: f64 = 0.769800358919501; // 4*sqrt(3)/9

/// Volume of the d-dimensional unit ball.
pub fn unit_ball_volume(dim: usize) -> f64 {
    // w_0 = 1, w_1 = 2, w_d = w_{d-2} * 2 pi / d
    let even = dim.is_multiple_of(2);
    let mut w = if even { 1.0 } else { 2.0 };
    let mut d = if even { 2 } else { 3 };
    while d <= dim {
        w *= 2.0 * std::f64::consts::PI / d as f64;
        d += 2;
    }
    w
}

/// Surface measure of the unit sphere bounding the d-ball, `d * w_d`.
pub fn sphere_surface(dim: usize) -> f64 {
    dim as f64 * unit_ball_volume(dim)
}

/// An origin-centered closed ball given by dimension and volume.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallSpec {
    dim: usize,
    volume: f64,
}

impl BallSpec {
    pub fn new(dim: usize, volume: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("ball dimension must be at least 1"));
        }
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(Error::invalid("ball volume must be positive and finite"));
        }
        Ok(BallSpec { dim, volume })
    }

    pub fn from_radius(dim: usize, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("ball radius must be positive and finite"));
        }
        Self::new(dim, unit_ball_volume(dim) * radius.powi(dim as i32))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn radius(&self) -> f64 {
        (self.volume / unit_ball_volume(self.dim)).powf(1.0 / self.dim as f64)
    }
}

/// How a continuous energy value was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimateMethod {
    RadialQuadrature,
    MonteCarlo,
}

impl std::fmt::Display for EstimateMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EstimateMethod::RadialQuadrature => write!(f, "radial-quadrature"),
            EstimateMethod::MonteCarlo => write!(f, "monte-carlo"),
        }
    }
}

/// A numerical energy with its error bound. For quadrature the bound is the
/// accumulated panel estimate; for Monte Carlo it is three standard errors
/// of the mean (reported, not guaranteed).
#[derive(Clone, Copy, Debug)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub abs_error_bound: f64,
    pub method: EstimateMethod,
    pub evaluations: u64,
    pub seed: Option<u64>,
}

/// Tolerances and budgets for the continuous-energy computations.
#[derive(Clone, Debug)]
pub struct BallConfig {
    /// Absolute quadrature tolerance; `None` selects 1e-9 for d <= 3 and
    /// 1e-7 above (the integrands flatten but the kink handling costs more
    /// panels in high dimension).
    pub abs_tol: Option<f64>,
    pub max_evals: u64,
    pub mc_samples: u64,
    pub mc_seed: u64,
}

impl Default for BallConfig {
    fn default() -> Self {
        BallConfig {
            abs_tol: None,
            max_evals: 50_000_000,
            mc_samples: 10_000_000,
            mc_seed: 1,
        }
    }
}

impl BallConfig {
    pub fn tolerance_for_dim(&self, dim: usize) -> f64 {
        self.abs_tol.unwrap_or(if dim <= 3 { 1e-9 } else { 1e-7 })
    }
}

/// Volume of the spherical cap `{x in B(r) : x_1 >= a}` in d dimensions,
/// through the regularized incomplete beta function.
fn cap_volume(dim: usize, r: f64, a: f64) -> f64 {
    let full = unit_ball_volume(dim) * r.powi(dim as i32);
    if a >= r {
        return 0.0;
    }
    if a <= -r {
        return full;
    }
    if a >= 0.0 {
        let x = 1.0 - (a / r) * (a / r);
        0.5 * full * statrs::function::beta::beta_reg((dim as f64 + 1.0) / 2.0, 0.5, x)
    } else {
        full - cap_volume(dim, r, -a)
    }
}

/// Volume of the intersection of `B(0, r1)` and a ball of radius `r2`
/// centered at distance `t`: zero beyond `r1 + r2`, the smaller ball below
/// `|r1 - r2|`, and a two-cap lens in between.
pub fn lens_volume(dim: usize, r1: f64, r2: f64, t: f64) -> Result<f64> {
    if dim == 0 {
        return Err(Error::invalid("lens dimension must be at least 1"));
    }
    let arguments_valid = r1 > 0.0 && r2 > 0.0 && t >= 0.0;
    if !arguments_valid {
        return Err(Error::invalid(
            "lens radii must be positive and the distance non-negative",
        ));
    }
    Ok(lens_volume_unchecked(dim, r1, r2, t))
}

fn lens_volume_unchecked(dim: usize, r1: f64, r2: f64, t: f64) -> f64 {
    if t >= r1 + r2 {
        return 0.0;
    }
    if t <= (r1 - r2).abs() {
        let rmin = r1.min(r2);
        return unit_ball_volume(dim) * rmin.powi(dim as i32);
    }
    let a1 = (t * t + r1 * r1 - r2 * r2) / (2.0 * t);
    let a2 = t - a1;
    cap_volume(dim, r1, a1) + cap_volume(dim, r2, a2)
}

fn check_dims(specs: &[BallSpec]) -> Result<usize> {
    let dim = specs[0].dim();
    for s in specs {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: s.dim(),
            });
        }
    }
    Ok(dim)
}

/// Radial integral `surface * int rho^{d-1} g(rho) drho` over `[0, upper]`.
fn radial_energy(
    dim: usize,
    upper: f64,
    kinks: &[f64],
    kernel: impl Fn(f64) -> f64,
    cfg: &BallConfig,
) -> Result<QuadratureEstimate> {
    let surface = sphere_surface(dim);
    let requested = cfg.tolerance_for_dim(dim);
    let out = quadrature::integrate(
        |rho| rho.powi(dim as i32 - 1) * kernel(rho),
        0.0,
        upper,
        kinks,
        requested / surface,
        cfg.max_evals,
    )?;
    // the panel estimate can undershoot the true error; never report a
    // bound tighter than what was asked for
    Ok(QuadratureEstimate {
        value: surface * out.value,
        abs_error_bound: (surface * out.error_estimate).max(requested),
        method: EstimateMethod::RadialQuadrature,
        evaluations: out.evaluations,
        seed: None,
    })
}

/// `E_3(B_1, B_2, B_3)`: the measure of pairs `(x, y)` in `B_1 x B_2` with
/// `-x - y` in `B_3`. Reduces to the overlap of `B_2` with a ball of radius
/// `r_3` at distance `|x|`, integrated radially over `B_1`.
pub fn ball_e3(b1: BallSpec, b2: BallSpec, b3: BallSpec, cfg: &BallConfig) -> Result<QuadratureEstimate> {
    let dim = check_dims(&[b1, b2, b3])?;
    let (r1, r2, r3) = (b1.radius(), b2.radius(), b3.radius());
    let upper = r1.min(r2 + r3);
    let kinks = [(r2 - r3).abs(), r2 + r3];
    radial_energy(dim, upper, &kinks, |rho| lens_volume_unchecked(dim, r2, r3, rho), cfg)
}

/// General `E_4(B_1, B_2, B_3, B_4)` as a radial integral of the product of
/// two overlap kernels: the pair-sum density of `B_1 + B_2` at `s` is the
/// overlap of `B_1` and `B_2` at distance `|s|`, and the completion measure
/// is the overlap of `B_3` and `B_4` at the same distance.
pub fn ball_e4(
    b1: BallSpec,
    b2: BallSpec,
    b3: BallSpec,
    b4: BallSpec,
    cfg: &BallConfig,
) -> Result<QuadratureEstimate> {
    let dim = check_dims(&[b1, b2, b3, b4])?;
    let (r1, r2, r3, r4) = (b1.radius(), b2.radius(), b3.radius(), b4.radius());
    let upper = (r1 + r2).min(r3 + r4);
    let kinks = [(r1 - r2).abs(), (r3 - r4).abs(), r1 + r2, r3 + r4];
    radial_energy(
        dim,
        upper,
        &kinks,
        |rho| lens_volume_unchecked(dim, r1, r2, rho) * lens_volume_unchecked(dim, r3, r4, rho),
        cfg,
    )
}

/// `E_4(B, B, -B, -B)`, the squared-autocorrelation integral of one ball.
pub fn ball_e4_symmetric(b: BallSpec, cfg: &BallConfig) -> Result<QuadratureEstimate> {
    ball_e4(b, b, b, b, cfg)
}

/// The normalized constant `e_d`: `E_4` of the volume-1 ball.
pub fn ball_e_constant(dim: usize, cfg: &BallConfig) -> Result<QuadratureEstimate> {
    ball_e4_symmetric(BallSpec::new(dim, 1.0)?, cfg)
}

/// The normalized constant `c_d`: `E_3` of the volume-1 ball.
pub fn ball_c_constant(dim: usize, cfg: &BallConfig) -> Result<QuadratureEstimate> {
    let b = BallSpec::new(dim, 1.0)?;
    ball_e3(b, b, b, cfg)
}

const MC_CHUNK: u64 = 1 << 16;

/// Monte Carlo estimate of `E_k` for any `k >= 3`: sample the first `k-1`
/// points uniformly in their balls and score membership of the negated sum.
///
/// Samples are drawn in fixed-size chunks with one independent stream per
/// chunk, so the estimate is identical for any worker count.
pub fn ball_ek_montecarlo(
    specs: &[BallSpec],
    samples: u64,
    seed: u64,
) -> Result<QuadratureEstimate> {
    if specs.len() < 3 {
        return Err(Error::invalid("Monte Carlo energy needs at least 3 balls"));
    }
    if samples == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    let dim = check_dims(specs)?;
    let radii: Vec<f64> = specs.iter().map(BallSpec::radius).collect();
    let target_sq = radii[specs.len() - 1] * radii[specs.len() - 1];
    let product_volume: f64 = specs[..specs.len() - 1].iter().map(BallSpec::volume).product();

    let chunks = samples.div_ceil(MC_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk + 1);
            let count = MC_CHUNK.min(samples - chunk * MC_CHUNK);
            let mut sum = vec![0.0f64; dim];
            let mut local_hits = 0u64;
            for _ in 0..count {
                sum.fill(0.0);
                for r in &radii[..specs.len() - 1] {
                    sample_in_ball(&mut rng, *r, &mut sum);
                }
                let norm_sq: f64 = sum.iter().map(|c| c * c).sum();
                if norm_sq <= target_sq {
                    local_hits += 1;
                }
            }
            local_hits
        })
        .sum();

    let p = hits as f64 / samples as f64;
    let se = product_volume * (p * (1.0 - p) / samples as f64).sqrt();
    Ok(QuadratureEstimate {
        value: p * product_volume,
        abs_error_bound: 3.0 * se,
        method: EstimateMethod::MonteCarlo,
        evaluations: samples,
        seed: Some(seed),
    })
}

/// Adds one uniform sample from the radius-`r` ball into `sum`.
/// Direction from normalized Gaussians, radius by the inverse-CDF power law;
/// rejection would degrade exponentially with the dimension.
fn sample_in_ball(rng: &mut ChaCha8Rng, r: f64, sum: &mut [f64]) {
    let dim = sum.len();
    let mut direction = vec![0.0f64; dim];
    let mut norm_sq = 0.0;
    while norm_sq == 0.0 {
        for d in direction.iter_mut() {
            *d = rng.sample(StandardNormal);
        }
        norm_sq = direction.iter().map(|c| c * c).sum();
    }
    let u: f64 = rng.random();
    let scale = r * u.powf(1.0 / dim as f64) / norm_sq.sqrt();
    for (s, d) in sum.iter_mut().zip(&direction) {
        *s += d * scale;
    }
}

/// `e_d` against its sharp symmetric-set bound `(4 sqrt 3 / 9)^d`.
#[derive(Clone, Copy, Debug)]
pub struct SymmetricBoundReport {
    pub dim: usize,
    pub e_d: QuadratureEstimate,
    pub bound: f64,
    pub holds: bool,
}

/// Checks `e_d <= (4 sqrt 3 / 9)^d` up to the estimate's error bound,
/// by quadrature for d <= 2 and Monte Carlo above.
pub fn symmetric_bound_check(dim: usize, cfg: &BallConfig) -> Result<SymmetricBoundReport> {
    if dim > 6 {
        return Err(Error::invalid("bound check supported for dimensions 1..=6"));
    }
    let e_d = if dim <= 2 {
        ball_e_constant(dim, cfg)?
    } else {
        let b = BallSpec::new(dim, 1.0)?;
        ball_ek_montecarlo(&[b, b, b, b], cfg.mc_samples, cfg.mc_seed)?
    };
    let bound = HY_BASE.powi(dim as i32);
    Ok(SymmetricBoundReport {
        dim,
        e_d,
        bound,
        holds: e_d.value <= bound + e_d.abs_error_bound,
    })
}

/// Both sides of `E_k(B) >= E_k(C) + E_k(D)` where each `B_i` has the
/// combined volume of `C_i` and `D_i`.
#[derive(Clone, Debug)]
pub struct SuperadditivityReport {
    pub combined: QuadratureEstimate,
    pub first: QuadratureEstimate,
    pub second: QuadratureEstimate,
    pub margin: f64,
    pub holds: bool,
}

/// Verifies the volume-superadditivity of ball energies for arity 3 or 4 by
/// quadrature, higher arities by Monte Carlo, within combined error bounds.
pub fn superadditivity_check(
    c_specs: &[BallSpec],
    d_specs: &[BallSpec],
    cfg: &BallConfig,
) -> Result<SuperadditivityReport> {
    if c_specs.len() != d_specs.len() || c_specs.len() < 3 {
        return Err(Error::invalid(
            "superadditivity needs two families of equal arity k >= 3",
        ));
    }
    let dim = check_dims(c_specs)?;
    if check_dims(d_specs)? != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: d_specs[0].dim(),
        });
    }
    let combined_specs: Vec<BallSpec> = c_specs
        .iter()
        .zip(d_specs)
        .map(|(c, d)| BallSpec::new(dim, c.volume() + d.volume()))
        .collect::<Result<_>>()?;

    let energy = |specs: &[BallSpec]| -> Result<QuadratureEstimate> {
        match specs.len() {
            3 => ball_e3(specs[0], specs[1], specs[2], cfg),
            4 => ball_e4(specs[0], specs[1], specs[2], specs[3], cfg),
            _ => ball_ek_montecarlo(specs, cfg.mc_samples, cfg.mc_seed),
        }
    };
    let combined = energy(&combined_specs)?;
    let first = energy(c_specs)?;
    let second = energy(d_specs)?;
    let slack = combined.abs_error_bound + first.abs_error_bound + second.abs_error_bound;
    let margin = combined.value - first.value - second.value;
    Ok(SuperadditivityReport {
        combined,
        first,
        second,
        margin,
        holds: margin >= -slack,
    })
}

/// One radius of the lattice-to-continuum comparison.
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub radius: u32,
    pub set_size: usize,
    pub lattice_normalized: f64,
    pub diff: f64,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub arity: usize,
    pub continuum: f64,
    pub rows: Vec<ConvergenceRow>,
    pub monotone_decreasing: bool,
}

/// Exact normalized lattice-ball energies against the continuum constant:
/// `e(A_R)` vs `e_d` for arity 4, the carry density vs `c_d` for arity 3.
pub fn discretization_convergence(
    dim: usize,
    arity: usize,
    radii: &[u32],
    engine: &EnergyEngine,
    cfg: &BallConfig,
) -> Result<ConvergenceReport> {
    if !(arity == 3 || arity == 4) {
        return Err(Error::invalid("convergence comparison supports arity 3 and 4"));
    }
    let continuum = match arity {
        3 => ball_c_constant(dim, cfg)?.value,
        _ => ball_e_constant(dim, cfg)?.value,
    };
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let set = lattice_ball_int(dim, r)?;
        let normalized = match arity {
            3 => engine.carry_density(&set)?.normalized,
            _ => engine.additive_energy(&set)?.normalized,
        };
        let value = normalized.to_f64().ok_or_else(|| {
            Error::invalid("normalized energy does not fit in a float")
        })?;
        rows.push(ConvergenceRow {
            radius: r,
            set_size: set.len(),
            lattice_normalized: value,
            diff: (value - continuum).abs(),
        });
    }
    let monotone_decreasing = rows.windows(2).all(|w| w[1].diff < w[0].diff);
    Ok(ConvergenceReport {
        arity,
        continuum,
        rows,
        monotone_decreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> BallConfig {
        BallConfig::default()
    }

    #[test]
    fn unit_ball_volumes() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-14);
        assert!((unit_ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
        // w_4 = pi^2 / 2
        assert!((unit_ball_volume(4) - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn ball_spec_round_trip() {
        for dim in 1..=6 {
            let b = BallSpec::new(dim, 3.7).unwrap();
            let back = BallSpec::from_radius(dim, b.radius()).unwrap();
            assert!(
                (back.volume() - 3.7).abs() / 3.7 < 1e-12,
                "dim {dim}: {}",
                back.volume()
            );
        }
    }

    #[test]
    fn lens_interval_overlap() {
        // [-1,1] vs [0,2]: overlap length 1
        assert!((lens_volume(1, 1.0, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lens_rejects_bad_arguments() {
        assert!(lens_volume(2, -1.0, 1.0, 0.5).is_err());
        assert!(lens_volume(2, 1.0, 0.0, 0.5).is_err());
        assert!(lens_volume(2, 1.0, 1.0, -0.1).is_err());
        assert!(lens_volume(2, f64::NAN, 1.0, 0.5).is_err());
    }

    #[test]
    fn energy_rejects_dim_mismatch_and_zero_samples() {
        let b1 = BallSpec::new(1, 1.0).unwrap();
        let b2 = BallSpec::new(2, 1.0).unwrap();
        assert!(ball_e3(b1, b2, b1, &cfg()).is_err());
        assert!(ball_ek_montecarlo(&[b2, b2, b2], 0, 1).is_err());
    }

    #[test]
    fn lens_containment_and_disjoint() {
        let v = lens_volume(3, 0.5, 2.0, 0.3).unwrap();
        assert!((v - unit_ball_volume(3) * 0.5f64.powi(3)).abs() < 1e-14);
        assert_eq!(lens_volume(2, 1.0, 1.0, 2.5).unwrap(), 0.0);
    }

    #[test]
    fn lens_two_disk_closed_form() {
        let expected = 2.0 * std::f64::consts::PI / 3.0 - 3.0f64.sqrt() / 2.0;
        let got = lens_volume(2, 1.0, 1.0, 1.0).unwrap();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn lens_monte_carlo_oracle_two_dim() {
        // independent check of the beta-function route: rejection-sample the
        // unit disk and count points also inside the shifted disk
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 2_000_000u64;
        let mut inside = 0u64;
        let mut total = 0u64;
        while total < n {
            let x: f64 = rng.random_range(-1.0..1.0);
            let y: f64 = rng.random_range(-1.0..1.0);
            if x * x + y * y > 1.0 {
                continue;
            }
            total += 1;
            if (x - 1.0) * (x - 1.0) + y * y <= 1.0 {
                inside += 1;
            }
        }
        let p = inside as f64 / n as f64;
        let mc = p * std::f64::consts::PI;
        let se = std::f64::consts::PI * (p * (1.0 - p) / n as f64).sqrt();
        let exact = lens_volume(2, 1.0, 1.0, 1.0).unwrap();
        assert!((mc - exact).abs() < 4.0 * se, "mc {mc} vs exact {exact}");
    }

    #[test]
    fn lens_is_monotone_in_distance() {
        for dim in 1..=4 {
            let mut last = f64::INFINITY;
            for i in 0..=40 {
                let t = i as f64 * 0.1;
                let v = lens_volume(dim, 1.2, 0.7, t).unwrap();
                assert!(v <= last + 1e-12, "dim {dim} t {t}");
                last = v;
            }
            assert_eq!(lens_volume(dim, 1.2, 0.7, 1.91).unwrap(), 0.0);
        }
    }

    #[test]
    fn lens_is_continuous_at_the_kinks() {
        for dim in 1..=3 {
            for kink in [0.5f64, 1.9] {
                // regime boundaries for radii 1.2 and 0.7
                let h = 1e-7;
                let below = lens_volume(dim, 1.2, 0.7, (kink - h).max(0.0)).unwrap();
                let above = lens_volume(dim, 1.2, 0.7, kink + h).unwrap();
                assert!((below - above).abs() < 1e-5, "dim {dim} kink {kink}");
            }
        }
    }

    #[test]
    fn one_dim_constants_are_exact() {
        let c1 = ball_c_constant(1, &cfg()).unwrap();
        assert!((c1.value - 0.75).abs() < 1e-9, "c_1 = {}", c1.value);
        let e1 = ball_e_constant(1, &cfg()).unwrap();
        assert!((e1.value - 2.0 / 3.0).abs() < 1e-9, "e_1 = {}", e1.value);
    }

    #[test]
    fn two_dim_constants_match_closed_forms() {
        let c2 = ball_c_constant(2, &cfg()).unwrap();
        let expected_c2 = 1.0 - 3.0 * 3.0f64.sqrt() / (4.0 * std::f64::consts::PI);
        assert!((c2.value - expected_c2).abs() < 1e-6, "c_2 = {}", c2.value);

        let e2 = ball_e_constant(2, &cfg()).unwrap();
        let expected_e2 = 1.0 - 16.0 / (3.0 * std::f64::consts::PI.powi(2));
        assert!((e2.value - expected_e2).abs() < 1e-6, "e_2 = {}", e2.value);
    }

    #[test]
    fn energies_are_scale_invariant_after_normalization() {
        let c = cfg();
        let unit = ball_e4_symmetric(BallSpec::new(2, 1.0).unwrap(), &c).unwrap();
        let scaled = ball_e4_symmetric(BallSpec::new(2, 7.0).unwrap(), &c).unwrap();
        let e_unit = unit.value;
        let e_scaled = scaled.value / 7.0f64.powi(3);
        assert!((e_unit - e_scaled).abs() < 1e-7);
    }

    #[test]
    fn energy_scaling_law() {
        // volumes scaled by s multiply E_k by s^{k-1}
        let c = cfg();
        let b1 = BallSpec::new(2, 1.0).unwrap();
        let b2 = BallSpec::new(2, 2.0).unwrap();
        let b3 = BallSpec::new(2, 0.5).unwrap();
        let base = ball_e3(b1, b2, b3, &c).unwrap().value;
        let s = 3.0;
        let scaled = ball_e3(
            BallSpec::new(2, s).unwrap(),
            BallSpec::new(2, 2.0 * s).unwrap(),
            BallSpec::new(2, 0.5 * s).unwrap(),
            &c,
        )
        .unwrap()
        .value;
        assert!((scaled - s * s * base).abs() < 1e-6 * s * s);
    }

    #[test]
    fn monte_carlo_agrees_with_quadrature() {
        let c = cfg();
        for dim in 1..=3usize {
            let b = BallSpec::new(dim, 1.0).unwrap();
            let quad = ball_e3(b, b, b, &c).unwrap();
            let mc = ball_ek_montecarlo(&[b, b, b], 400_000, 11).unwrap();
            assert!(
                (mc.value - quad.value).abs() <= mc.abs_error_bound + quad.abs_error_bound,
                "dim {dim}: mc {} vs quad {}",
                mc.value,
                quad.value
            );
        }
        let b = BallSpec::new(2, 1.0).unwrap();
        let quad = ball_e4_symmetric(b, &cfg()).unwrap();
        let mc = ball_ek_montecarlo(&[b, b, b, b], 400_000, 5).unwrap();
        assert!((mc.value - quad.value).abs() <= mc.abs_error_bound + quad.abs_error_bound);
    }

    #[test]
    fn monte_carlo_is_deterministic_and_chunk_stable() {
        let b = BallSpec::new(2, 1.0).unwrap();
        let a = ball_ek_montecarlo(&[b, b, b], 100_000, 42).unwrap();
        let b2 = ball_ek_montecarlo(&[b, b, b], 100_000, 42).unwrap();
        assert_eq!(a.value, b2.value);
        let c = ball_ek_montecarlo(&[b, b, b], 100_000, 43).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn energy_is_monotone_in_volume() {
        let c = cfg();
        let small = BallSpec::new(2, 1.0).unwrap();
        let big = BallSpec::new(2, 1.5).unwrap();
        let base = ball_e3(small, small, small, &c).unwrap().value;
        let grown = ball_e3(small, big, small, &c).unwrap().value;
        assert!(grown >= base);
    }

    #[test]
    fn vanishing_volume_kills_the_energy() {
        let c = cfg();
        let b = BallSpec::new(2, 1.0).unwrap();
        let tiny = BallSpec::new(2, 1e-9).unwrap();
        let e = ball_e3(b, b, tiny, &c).unwrap();
        assert!(e.value < 1e-8);
    }

    #[test]
    fn superadditivity_scaling_case() {
        // d=1, k=3, C = D = volume-1 balls: E_3 scales as vol^2, so the
        // combined family has 4x the energy of each half
        let c1 = BallSpec::new(1, 1.0).unwrap();
        let report = superadditivity_check(&[c1, c1, c1], &[c1, c1, c1], &cfg()).unwrap();
        assert!(report.holds);
        assert!((report.combined.value - 4.0 * report.first.value).abs() < 1e-7);
    }

    #[test]
    fn superadditivity_mixed_volumes() {
        let c: Vec<BallSpec> = [1.0, 2.0, 1.0, 2.0]
            .iter()
            .map(|&v| BallSpec::new(2, v).unwrap())
            .collect();
        let d: Vec<BallSpec> = [2.0, 1.0, 2.0, 1.0]
            .iter()
            .map(|&v| BallSpec::new(2, v).unwrap())
            .collect();
        let report = superadditivity_check(&c, &d, &cfg()).unwrap();
        assert!(report.holds, "margin {}", report.margin);
    }

    #[test]
    fn symmetric_bound_low_dims() {
        let report = symmetric_bound_check(1, &cfg()).unwrap();
        assert!(report.holds);
        assert!((report.bound - HY_BASE).abs() < 1e-15);
        let report = symmetric_bound_check(2, &cfg()).unwrap();
        assert!(report.holds);
    }
}


#[cfg(test)]
mod convergence_tests {
    use super::*;
    use crate::EnergyEngine;

    fn cfg() -> BallConfig {
        BallConfig::default()
    }

    #[test]
    fn one_dim_interval_follows_the_closed_form() {
        // e of the centered interval with n = 2R+1 points is (2n^2+1)/(3n^2),
        // which decreases to 2/3
        let engine = EnergyEngine::default();
        let report =
            discretization_convergence(1, 4, &[5, 10, 20], &engine, &cfg()).unwrap();
        assert!(report.monotone_decreasing);
        assert!((report.continuum - 2.0 / 3.0).abs() < 1e-9);
        for row in &report.rows {
            let n = (2 * row.radius + 1) as f64;
            let expected = (2.0 * n * n + 1.0) / (3.0 * n * n);
            assert!(
                (row.lattice_normalized - expected).abs() < 1e-12,
                "R={}",
                row.radius
            );
        }
    }

    #[test]
    fn one_dim_carry_density_converges_to_three_quarters() {
        // the arity-3 normalization of the interval is (3n^2+1)/(4n^2)
        let engine = EnergyEngine::default();
        let report = discretization_convergence(1, 3, &[3, 6, 12], &engine, &cfg()).unwrap();
        assert!(report.monotone_decreasing);
        assert!((report.continuum - 0.75).abs() < 1e-9);
        for row in &report.rows {
            let n = (2 * row.radius + 1) as f64;
            let expected = (3.0 * n * n + 1.0) / (4.0 * n * n);
            assert!((row.lattice_normalized - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_unsupported_arities() {
        let engine = EnergyEngine::default();
        assert!(discretization_convergence(1, 5, &[3], &engine, &cfg()).is_err());
    }
}
