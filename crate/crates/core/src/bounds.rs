//! Upper bounds on the double commutator, small-k scaling of the
//! denominator, and the dimension-dependent divergence of `∫ dᵈk / k²`.

use std::f64::consts::PI;

use faer::c64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Vec2, WaveVector};
use crate::montecarlo::{Configuration, SampleSet, MIN_SAMPLES};
use crate::potentials::{PairPotential, Periodization};
use crate::quantum::{
    c_operator, commutator, commutator_with_diagonal, kinetic, potential_diagonal, thermal_average,
    thermal_average_real_diagonal, ManyBodySpace, ThermalState, Wave, HBAR, MASS,
};
use crate::stats::blocking_estimate;

pub const BOUND_TOL: f64 = 1e-9;
pub const QUADRATIC_THRESHOLD: f64 = 1.5;

/// Which upper bound a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `ħ²k²N(4t + ħ²k²/4m)` on the kinetic double commutator.
    Kinetic,
    /// Potential double commutator for `Φ(r_i − r_j)`.
    LocalPotential,
    /// Potential double commutator for a two-point `Φ(r_i, r_j)`.
    NonlocalPotential,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Kinetic => "kinetic",
            BoundKind::LocalPotential => "local_potential",
            BoundKind::NonlocalPotential => "nonlocal_potential",
        }
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound: BoundKind,
    /// `quantum` (exact thermal state) or `classical` (Monte Carlo samples).
    pub path: &'static str,
    pub potential: &'static str,
    pub k: [f64; 2],
    pub beta: Option<f64>,
    pub left: f64,
    pub right: f64,
    pub slack: f64,
    /// Standard error of the slack on the classical path.
    pub stderr: Option<f64>,
    pub passed: bool,
}

impl BoundReport {
    fn new(
        bound: BoundKind,
        path: &'static str,
        potential: &'static str,
        k: Vec2,
        beta: Option<f64>,
        left: f64,
        right: f64,
        stderr: Option<f64>,
    ) -> Self {
        let slack = right - left;
        Self {
            bound,
            path,
            potential,
            k: [k.x, k.y],
            beta,
            left,
            right,
            slack,
            stderr,
            passed: slack >= -BOUND_TOL * right.abs(),
        }
    }
}

fn guard(space: &ManyBodySpace, k: &Wave) -> Result<()> {
    if k.is_zero() {
        return Err(Error::InvalidRange("k must be nonzero".into()));
    }
    let n = k.norm() * space.length / (2.0 * PI);
    if n > space.grid as f64 / 4.0 + 1e-12 {
        return Err(Error::BandLimitViolated(format!(
            "|k|L/2π = {n} exceeds M/4 = {}",
            space.grid / 4
        )));
    }
    Ok(())
}

/// Kinetic bound: `⟨[[Ĉ, Σp̂²/2m], Ĉ†]⟩ ≤ ħ²k²N(4t + ħ²k²/4m)` with `t` the
/// mean kinetic energy per particle of the same state.
pub fn kinetic_bound_check(
    space: &ManyBodySpace,
    pot: &PairPotential,
    beta: f64,
    k: &Wave,
) -> Result<BoundReport> {
    guard(space, k)?;
    let kin = kinetic(space);
    let mut h = kin.clone();
    for (i, u) in potential_diagonal(space, pot)?.iter().enumerate() {
        h[(i, i)] += c64::new(*u, 0.0);
    }
    let state = ThermalState::new(&h, beta)?;
    let c = c_operator(space, k);
    let x = commutator(&commutator(&c, &kin), &c);
    let left = thermal_average(&state, &x)?.re;
    let n = space.particles as f64;
    let t = thermal_average(&state, &kin)?.re / n;
    let k2 = k.norm().powi(2);
    let right = HBAR * HBAR * k2 * n * (4.0 * t + HBAR * HBAR * k2 / (4.0 * MASS));
    Ok(BoundReport::new(
        BoundKind::Kinetic,
        "quantum",
        pot.family(),
        k.components,
        Some(beta),
        left,
        right,
        None,
    ))
}

fn check_kind(pot: &PairPotential, bound: BoundKind) -> Result<()> {
    match (bound, pot.is_local()) {
        (BoundKind::LocalPotential, true) | (BoundKind::NonlocalPotential, false) => Ok(()),
        (BoundKind::LocalPotential, false) => Err(Error::KindMismatch {
            bound: Some(bound),
            reason: format!(
                "{} is nonlocal; the local bound assumes Φ(r_i − r_j)",
                pot.family()
            ),
        }),
        (BoundKind::NonlocalPotential, true) => Err(Error::KindMismatch {
            bound: Some(bound),
            reason: format!("{} is local; use the local bound", pot.family()),
        }),
        (BoundKind::Kinetic, _) => Err(Error::KindMismatch {
            bound: Some(bound),
            reason: "the kinetic bound has its own check".into(),
        }),
    }
}

/// Per-configuration right side of the chosen potential bound, as printed.
fn bound_integrand(
    r: &[Vec2],
    pot: &PairPotential,
    space_box: &crate::geometry::SimulationBox,
    form: Periodization,
    k: &Vec2,
    bound: BoundKind,
) -> f64 {
    let k2 = k.norm_squared();
    let kn = k.norm();
    let mut total = 0.0;
    for i in 0..r.len() {
        for j in 0..r.len() {
            if i == j {
                continue;
            }
            let b = pot.derivatives_with(&r[i], &r[j], space_box, form);
            total += if bound == BoundKind::LocalPotential {
                let sep = space_box.min_image(&(r[i] - r[j]));
                HBAR * HBAR
                    * k2
                    * (0.25 * sep.norm() * b.grad1.norm() + 2.0 * sep.norm_squared() * b.lap1.abs())
            } else {
                0.5 * HBAR
                    * HBAR
                    * (b.lap1.abs()
                        + b.lap2.abs()
                        + 2.0 * b.cross.abs()
                        + kn * (b.grad1.norm() + b.grad2.norm()))
            };
        }
    }
    total
}

/// Per-configuration potential double commutator as printed: the local
/// reduction for the local bound, the general form for the nonlocal one.
fn commutator_integrand(
    r: &[Vec2],
    pot: &PairPotential,
    space_box: &crate::geometry::SimulationBox,
    form: Periodization,
    k: &Vec2,
    bound: BoundKind,
) -> f64 {
    let mut total = 0.0;
    let ph: Vec<f64> = r.iter().map(|x| k.dot(x)).collect();
    for i in 0..r.len() {
        for j in 0..r.len() {
            if i == j {
                continue;
            }
            let b = pot.derivatives_with(&r[i], &r[j], space_box, form);
            let (si, ci, sj, cj) = (ph[i].sin(), ph[i].cos(), ph[j].sin(), ph[j].cos());
            total += if bound == BoundKind::LocalPotential {
                0.5 * ((2.0 * ph[i]).sin() - (2.0 * ph[j]).sin()) * k.dot(&b.grad1)
                    + (si - sj).powi(2) * b.lap1
            } else {
                si * ci * k.dot(&b.grad1)
                    + sj * cj * k.dot(&b.grad2)
                    + si * si * b.lap1
                    + sj * sj * b.lap2
                    + 2.0 * si * sj * b.cross
            };
        }
    }
    0.5 * HBAR * HBAR * total
}

/// Quantum path: left side by direct matrices in the exact thermal state.
pub fn potential_bound_check_quantum(
    space: &ManyBodySpace,
    pot: &PairPotential,
    beta: f64,
    k: &Wave,
    bound: BoundKind,
) -> Result<BoundReport> {
    check_kind(pot, bound)?;
    guard(space, k)?;
    let u = potential_diagonal(space, pot)?;
    let mut h = kinetic(space);
    for (i, v) in u.iter().enumerate() {
        h[(i, i)] += c64::new(*v, 0.0);
    }
    let state = ThermalState::new(&h, beta)?;
    let c = c_operator(space, k);
    let uc: Vec<c64> = u.iter().map(|&v| c64::new(v, 0.0)).collect();
    let x = commutator(&commutator_with_diagonal(&c, &uc), &c);
    let left = thermal_average(&state, &x)?.re;
    let rhs: Vec<f64> = (0..space.total)
        .map(|a| {
            bound_integrand(
                &space.positions(a),
                pot,
                &space.bx,
                space.periodization,
                &k.components,
                bound,
            )
        })
        .collect();
    let right = thermal_average_real_diagonal(&state, &rhs)?;
    Ok(BoundReport::new(
        bound,
        "quantum",
        pot.family(),
        k.components,
        Some(beta),
        left,
        right,
        None,
    ))
}

/// Classical path: both sides averaged over Monte Carlo samples with
/// minimal-image separations.
pub fn potential_bound_check_classical(
    samples: &SampleSet,
    pot: &PairPotential,
    k: &WaveVector,
    bound: BoundKind,
) -> Result<BoundReport> {
    check_kind(pot, bound)?;
    samples.require(MIN_SAMPLES)?;
    let eval = |c: &Configuration| {
        let r = c.cartesian_all();
        let left = commutator_integrand(
            &r,
            pot,
            &c.bx,
            Periodization::MinimumImage,
            &k.components,
            bound,
        );
        let right = bound_integrand(
            &r,
            pot,
            &c.bx,
            Periodization::MinimumImage,
            &k.components,
            bound,
        );
        (left, right)
    };
    let pairs: Vec<(f64, f64)> = samples.configs.iter().map(eval).collect();
    let lefts: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let rights: Vec<f64> = pairs.iter().map(|p| p.0 - p.1).collect();
    let l = blocking_estimate(&lefts);
    let gap = blocking_estimate(&rights);
    let right = l.mean - gap.mean;
    Ok(BoundReport::new(
        bound,
        "classical",
        pot.family(),
        k.components,
        samples.runs.first().map(|r| r.beta),
        l.mean,
        right,
        Some(gap.stderr),
    ))
}

/// Seeded sweep of the three bounds on two particles on a ring of `grid`
/// points: `count` draws each of the kinetic and local bounds (Gaussian core)
/// and the nonlocal bound (substrate-coupled).
pub fn bound_sweep(count: usize, seed: u64, grid: usize) -> Result<Vec<BoundReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(3 * count);
    for _ in 0..count {
        let length: f64 = rng.random_range(3.0..12.0);
        let beta: f64 = 10f64.powf(rng.random_range(-1.0..1.0));
        let epsilon = rng.random_range(0.2..3.0);
        let sigma = rng.random_range(0.5..2.0);
        let space = crate::quantum::build_space(crate::geometry::Dimension::One, grid, length, 2)?;
        let local = PairPotential::GaussianCore { epsilon, sigma };
        let substrate = PairPotential::SubstrateCoupled {
            epsilon,
            sigma,
            coupling: rng.random_range(-1.0..1.0),
            wavevector: [2.0 * PI / length * rng.random_range(1..3) as f64, 0.0],
            coupling_sigma: rng.random_range(0.5..2.0),
        };
        let k = space.wave([rng.random_range(1..=(grid / 4) as i64), 0]);
        out.push(kinetic_bound_check(&space, &local, beta, &k)?);
        out.push(potential_bound_check_quantum(
            &space,
            &local,
            beta,
            &k,
            BoundKind::LocalPotential,
        )?);
        out.push(potential_bound_check_quantum(
            &space,
            &substrate,
            beta,
            &k,
            BoundKind::NonlocalPotential,
        )?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SinInequalityReport {
    pub samples: usize,
    pub violations: usize,
    /// Largest `|sin x ± sin y| − |x ± y|` seen.
    pub worst: f64,
}

/// Samples `|sin x ± sin y| ≤ |x ± y|` on pairs drawn from `[−range, range]`.
pub fn sin_inequality(samples: usize, range: f64, seed: u64) -> SinInequalityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..samples {
        // alternate wide draws with near-coincident ones where the bound is tight
        let x: f64 = rng.random_range(-range..range);
        let y: f64 = if i % 2 == 0 {
            rng.random_range(-range..range)
        } else {
            x + rng.random_range(-1e-3..1e-3)
        };
        for sign in [1.0, -1.0] {
            let lhs = (x.sin() + sign * y.sin()).abs();
            let rhs = (x + sign * y).abs();
            let excess = lhs - rhs;
            worst = worst.max(excess);
            if excess > 4.0 * f64::EPSILON * (x.abs() + y.abs()).max(1.0) {
                violations += 1;
            }
        }
    }
    SinInequalityReport {
        samples,
        violations,
        worst,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub ks: Vec<f64>,
    pub values: Vec<f64>,
    /// Points dropped because the value is within `10·ε` of zero.
    pub excluded: usize,
    pub alpha: f64,
    pub alpha_stderr: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub threshold: f64,
    /// `k-squared` when `α ≥ threshold`, `sub-quadratic` otherwise.
    pub class: &'static str,
}

/// Least-squares slope of `ln value` against `ln k`.
pub fn k_scaling_exponent(curve: &[(f64, f64)]) -> Result<ScalingReport> {
    let floor = 10.0 * f64::EPSILON;
    let mut ks = Vec::new();
    let mut values = Vec::new();
    let mut excluded = 0;
    for &(k, v) in curve {
        if !(k > 0.0) || v < -floor || !v.is_finite() {
            return Err(Error::NonPositiveValue { k, value: v });
        }
        if v.abs() <= floor {
            excluded += 1;
            continue;
        }
        ks.push(k);
        values.push(v);
    }
    let kmin = ks.iter().cloned().fold(f64::INFINITY, f64::min);
    let kmax = ks.iter().cloned().fold(0.0, f64::max);
    if ks.len() < 8 || kmax < 10.0 * kmin * (1.0 - 1e-12) {
        return Err(Error::InsufficientPoints {
            needed: 8,
            got: ks.len(),
        });
    }
    let x: Vec<f64> = ks.iter().map(|k| k.ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let alpha = sxy / sxx;
    let intercept = my - alpha * mx;
    let ssr: f64 = x
        .iter()
        .zip(&y)
        .map(|(a, b)| (b - intercept - alpha * a).powi(2))
        .sum();
    let alpha_stderr = (ssr / (n - 2.0) / sxx).sqrt();
    let r_squared = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    Ok(ScalingReport {
        ks,
        values,
        excluded,
        alpha,
        alpha_stderr,
        prefactor: intercept.exp(),
        r_squared,
        threshold: QUADRATIC_THRESHOLD,
        class: if alpha >= QUADRATIC_THRESHOLD {
            "k-squared"
        } else {
            "sub-quadratic"
        },
    })
}

/// `(k, ⟨[[Ĉ,Ĥ],Ĉ†]⟩)` for two particles with a local potential at
/// `k = 2πq/L`, from the total-momentum sectors.
pub fn local_denominator_curve(
    grid: usize,
    length: f64,
    pot: &PairPotential,
    beta: f64,
    qs: &[i64],
) -> Result<Vec<(f64, f64)>> {
    let solver = crate::quantum::PairSectorSolver::new(grid, length, pot, beta)?;
    qs.iter()
        .map(|&q| Ok((solver.wavevector(q), solver.denominator(q)?)))
        .collect()
}

/// Same curve for any potential by dense diagonalization (two particles, 1D).
pub fn dense_denominator_curve(
    grid: usize,
    length: f64,
    pot: &PairPotential,
    beta: f64,
    qs: &[i64],
) -> Result<Vec<(f64, f64)>> {
    let space = crate::quantum::build_space(crate::geometry::Dimension::One, grid, length, 2)?;
    let h = crate::quantum::hamiltonian(&space, pot)?;
    let state = ThermalState::new(&h, beta)?;
    qs.iter()
        .map(|&q| {
            let k = space.wave([q, 0]);
            Ok((
                k.norm(),
                state.double_commutator_spectral(&c_operator(&space, &k))?,
            ))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub k0: f64,
    pub numeric: f64,
    pub analytic: f64,
    /// Change from the previous row (`k0` twice as large).
    pub increment: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub dimension: u8,
    pub k0: f64,
    pub epsilon: f64,
    pub numeric: f64,
    pub analytic: f64,
    pub relative_error: f64,
    pub law: &'static str,
    pub growth: Vec<GrowthRow>,
}

impl DivergenceReport {
    /// Every tabulated value within `rel_tol` of its closed form, and the
    /// growth under halving `k0` follows the dimension's law: `+2/k0` in
    /// d=1, `+2π·ln 2` in d=2, less than `4π·k0` in d=3.
    pub fn law_holds(&self, rel_tol: f64) -> bool {
        let values = self
            .growth
            .iter()
            .all(|r| ((r.numeric - r.analytic) / r.analytic).abs() < rel_tol);
        let steps = self.growth.windows(2).all(|w| {
            let (prev, row) = (&w[0], &w[1]);
            let inc = row.numeric - prev.numeric;
            match self.dimension {
                1 => ((inc - 2.0 / prev.k0) / (2.0 / prev.k0)).abs() < rel_tol,
                2 => ((inc - 2.0 * PI * 2f64.ln()) / (2.0 * PI * 2f64.ln())).abs() < rel_tol,
                _ => inc.abs() < 4.0 * PI * prev.k0,
            }
        });
        values && steps
    }
}

fn solid_angle(d: u8) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// `∫_{k0}^{ε} S_d k^{d−1} k^{−2} dk` by composite Gauss–Legendre in `ln k`.
pub fn shell_integral(d: u8, k0: f64, epsilon: f64) -> f64 {
    let rule = gauss_legendre(16);
    let (a, b) = (k0.ln(), epsilon.ln());
    let panels = 64;
    let width = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        for (x, w) in &rule {
            let u = lo + 0.5 * width * (x + 1.0);
            // k^{d−2} · dk/du = k^{d−1}·k^{−2}·k
            acc += w * 0.5 * width * ((d as f64 - 2.0) * u).exp();
        }
    }
    solid_angle(d) * acc
}

pub fn shell_integral_exact(d: u8, k0: f64, epsilon: f64) -> f64 {
    match d {
        1 => 2.0 * (1.0 / k0 - 1.0 / epsilon),
        2 => 2.0 * PI * (epsilon / k0).ln(),
        _ => 4.0 * PI * (epsilon - k0),
    }
}

pub fn divergence_probe(d: u8, k0: f64, epsilon: f64) -> Result<DivergenceReport> {
    divergence_probe_with(d, k0, epsilon, 8)
}

pub fn divergence_probe_with(
    d: u8,
    k0: f64,
    epsilon: f64,
    halvings: usize,
) -> Result<DivergenceReport> {
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidRange(format!(
            "dimension must be 1, 2 or 3, got {d}"
        )));
    }
    if !(k0 > 0.0 && k0 < epsilon && epsilon.is_finite()) {
        return Err(Error::InvalidRange(format!(
            "need 0 < k0 < ε, got k0 = {k0}, ε = {epsilon}"
        )));
    }
    let numeric = shell_integral(d, k0, epsilon);
    let analytic = shell_integral_exact(d, k0, epsilon);
    let mut growth: Vec<GrowthRow> = Vec::with_capacity(halvings + 1);
    let mut kk = k0;
    for _ in 0..=halvings {
        let v = shell_integral(d, kk, epsilon);
        let increment = growth.last().map(|r| v - r.numeric);
        growth.push(GrowthRow {
            k0: kk,
            numeric: v,
            analytic: shell_integral_exact(d, kk, epsilon),
            increment,
        });
        kk *= 0.5;
    }
    Ok(DivergenceReport {
        dimension: d,
        k0,
        epsilon,
        numeric,
        analytic,
        relative_error: ((numeric - analytic) / analytic).abs(),
        law: match d {
            1 => "power (1/k0)",
            2 => "logarithmic",
            _ => "convergent",
        },
        growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_exponents() {
        for alpha in [0.0, 1.0, 2.0] {
            let curve: Vec<(f64, f64)> = (0..10)
                .map(|i| {
                    let k = 0.01 * 1.5f64.powi(i);
                    (k, 3.0 * k.powf(alpha))
                })
                .collect();
            let r = k_scaling_exponent(&curve).unwrap();
            assert!((r.alpha - alpha).abs() < 1e-12, "{alpha}: {}", r.alpha);
        }
    }

    #[test]
    fn scaling_preconditions() {
        let short: Vec<(f64, f64)> = (1..=5).map(|i| (i as f64, 1.0)).collect();
        assert!(matches!(
            k_scaling_exponent(&short),
            Err(Error::InsufficientPoints { .. })
        ));
        let narrow: Vec<(f64, f64)> = (1..=9).map(|i| (1.0 + 0.1 * i as f64, 1.0)).collect();
        assert!(matches!(
            k_scaling_exponent(&narrow),
            Err(Error::InsufficientPoints { .. })
        ));
        let mut neg: Vec<(f64, f64)> = (1..=10).map(|i| (i as f64, 1.0)).collect();
        neg[3].1 = -1.0;
        assert!(matches!(
            k_scaling_exponent(&neg),
            Err(Error::NonPositiveValue { .. })
        ));
    }

    #[test]
    fn divergence_closed_forms() {
        let r = divergence_probe(2, 1e-3, 1.0).unwrap();
        assert!((r.analytic - 2.0 * PI * 1000f64.ln()).abs() < 1e-12);
        assert!(r.relative_error < 1e-6);
        let r = divergence_probe(1, 1e-3, 1.0).unwrap();
        assert!((r.analytic - 1998.0).abs() < 1e-9);
        assert!(r.relative_error < 1e-6);
        assert!(divergence_probe(2, 1.0, 0.5).is_err());
        assert!(divergence_probe(4, 0.1, 0.5).is_err());
    }

    #[test]
    fn gauss_legendre_weights_sum_to_two() {
        let s: f64 = gauss_legendre(16).iter().map(|(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
    }
}
