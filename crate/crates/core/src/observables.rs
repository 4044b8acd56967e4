//! Fourier density, order parameter, structure factor and the classical
//! assembly of the Bogoliubov lower bound on `S(k + K)`.
//!
//! Sign convention: `ρ̂_k = Σ_i e^{−i k·r_i}` everywhere.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Dimension, WaveClass, WaveVector};
use crate::montecarlo::{Configuration, SampleSet, MIN_SAMPLES};
use crate::potentials::{PairPotential, Periodization};
use crate::stats::{block_jackknife, blocking_estimate, mean, Estimate};

pub const ORDER_THRESHOLD: f64 = 0.1;
const JACKKNIFE_BLOCKS: usize = 32;

/// `Σ_i e^{−i k·r_i}`.
pub fn fourier_density(config: &Configuration, k: &WaveVector) -> Complex64 {
    if k.is_zero() {
        return Complex64::new(config.len() as f64, 0.0);
    }
    config
        .frac
        .iter()
        .map(|f| Complex64::from_polar(1.0, -k.phase(&config.bx, f)))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderParameterReport {
    pub k: [f64; 2],
    pub class: &'static str,
    /// `⟨ρ̂_k⟩ / N`.
    pub rho: [f64; 2],
    pub stderr: f64,
}

impl OrderParameterReport {
    pub fn modulus(&self) -> f64 {
        self.rho[0].hypot(self.rho[1])
    }
}

fn complex_estimate(values: &[Complex64]) -> (Complex64, f64) {
    let re: Vec<f64> = values.iter().map(|z| z.re).collect();
    let im: Vec<f64> = values.iter().map(|z| z.im).collect();
    let er = blocking_estimate(&re);
    let ei = blocking_estimate(&im);
    (Complex64::new(er.mean, ei.mean), er.stderr.hypot(ei.stderr))
}

fn normalized_density(samples: &SampleSet, k: &WaveVector) -> Vec<Complex64> {
    samples
        .configs
        .iter()
        .map(|c| fourier_density(c, k) / c.len() as f64)
        .collect()
}

/// `ρ_k = ⟨ρ̂_k⟩ / N` with a blocking error bar.
pub fn order_parameter(samples: &SampleSet, k: &WaveVector) -> Result<OrderParameterReport> {
    samples.require(MIN_SAMPLES)?;
    let (rho, stderr) = if k.is_zero() {
        (Complex64::new(1.0, 0.0), 0.0)
    } else {
        complex_estimate(&normalized_density(samples, k))
    };
    Ok(OrderParameterReport {
        k: [k.components.x, k.components.y],
        class: k.class.label(),
        rho: [rho.re, rho.im],
        stderr,
    })
}

/// `S(k) = ⟨|ρ̂_k|²⟩ / N`.
pub fn structure_factor(samples: &SampleSet, k: &WaveVector) -> Result<Estimate> {
    samples.require(MIN_SAMPLES)?;
    let xs: Vec<f64> = samples
        .configs
        .iter()
        .map(|c| fourier_density(c, k).norm_sqr() / c.len() as f64)
        .collect();
    Ok(blocking_estimate(&xs))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrystallinityReport {
    pub rows: Vec<OrderParameterReport>,
    pub threshold: f64,
    /// Finite-size diagnostic only: some nonzero reciprocal `K` has
    /// `|ρ_K| > threshold` and every sampled non-reciprocal `k` stays below.
    pub ordered: bool,
}

pub fn crystallinity_report(
    samples: &SampleSet,
    kset: &[WaveVector],
) -> Result<CrystallinityReport> {
    crystallinity_report_with(samples, kset, ORDER_THRESHOLD)
}

pub fn crystallinity_report_with(
    samples: &SampleSet,
    kset: &[WaveVector],
    threshold: f64,
) -> Result<CrystallinityReport> {
    samples.require(MIN_SAMPLES)?;
    let mut rows = Vec::with_capacity(kset.len());
    let mut reciprocal_hit = false;
    let mut other_quiet = true;
    for k in kset {
        let row = order_parameter(samples, k)?;
        if !k.is_zero() {
            match k.class {
                WaveClass::Reciprocal => reciprocal_hit |= row.modulus() > threshold,
                _ => other_quiet &= row.modulus() <= threshold,
            }
        }
        rows.push(row);
    }
    Ok(CrystallinityReport {
        rows,
        threshold,
        ordered: reciprocal_hit && other_quiet,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BogoliubovClassicalReport {
    pub k: [f64; 2],
    pub reciprocal: [f64; 2],
    pub class: &'static str,
    /// `S(k + K)`.
    pub lhs: Estimate,
    pub rhs: Estimate,
    pub slack: f64,
    pub slack_stderr: f64,
    /// Bracketed denominator `4t + k²/4 + pair term`.
    pub denominator: f64,
}

impl BogoliubovClassicalReport {
    /// Slack is not significantly negative.
    pub fn holds(&self, sigmas: f64) -> bool {
        self.slack >= -sigmas * self.slack_stderr
    }
}

/// Per-sample pair term `(1/N) Σ_{i≠j} [¼|r_ij||∇_iΦ| + 2|r_ij|²|∇_i²Φ|]`
/// on minimal-image separations.
pub fn pair_bound_term(config: &Configuration, pot: &PairPotential) -> f64 {
    let r = config.cartesian_all();
    let n = r.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let sep = config.bx.min_image(&(r[i] - r[j]));
            let b = pot.derivatives_with(&r[i], &r[j], &config.bx, Periodization::MinimumImage);
            total += 0.25 * sep.norm() * b.grad1.norm() + 2.0 * sep.norm_squared() * b.lap1.abs();
        }
    }
    total / n as f64
}

/// Per-sample features reused across a scan over `k`.
pub struct ClassicalInputs<'a> {
    samples: &'a SampleSet,
    pair: Vec<f64>,
    temperature: f64,
    dimension: Dimension,
}

impl<'a> ClassicalInputs<'a> {
    pub fn new(samples: &'a SampleSet, pot: &PairPotential, temperature: f64) -> Result<Self> {
        samples.require(MIN_SAMPLES)?;
        let pair = samples
            .configs
            .iter()
            .map(|c| pair_bound_term(c, pot))
            .collect();
        let dimension = samples.configs[0].bx.dimension();
        Ok(Self {
            samples,
            pair,
            temperature,
            dimension,
        })
    }

    /// Kinetic energy per particle from equipartition.
    pub fn kinetic_per_particle(&self) -> f64 {
        0.5 * self.dimension.get() as f64 * self.temperature
    }

    pub fn check(&self, k: &WaveVector, big_k: &WaveVector) -> Result<BogoliubovClassicalReport> {
        if k.class != WaveClass::AllowedNonReciprocal || k.is_zero() {
            return Err(Error::WaveClassMismatch {
                expected: WaveClass::AllowedNonReciprocal.label(),
                got: k.class.label(),
            });
        }
        if big_k.class != WaveClass::Reciprocal {
            return Err(Error::WaveClassMismatch {
                expected: WaveClass::Reciprocal.label(),
                got: big_k.class.label(),
            });
        }
        let bx = &self.samples.configs[0].bx;
        let kk = k.combine(1, big_k, 1, bx);
        let k2k = k.combine(2, big_k, 1, bx);
        let lhs = structure_factor(self.samples, &kk)?;
        let rho_2k = normalized_density(self.samples, &k2k);
        let rho_k = normalized_density(self.samples, big_k);

        let ksq = k.components.norm_squared();
        let kk_sq = kk.components.norm_squared();
        let t = self.kinetic_per_particle();
        let temp = self.temperature;
        let pair = &self.pair;
        let stat = |idx: &[usize]| {
            let m = idx.len() as f64;
            let d2: Complex64 = idx.iter().map(|&i| rho_2k[i]).sum::<Complex64>() / m;
            let dk: Complex64 = idx.iter().map(|&i| rho_k[i]).sum::<Complex64>() / m;
            let p = idx.iter().map(|&i| pair[i]).sum::<f64>() / m;
            let denom = 4.0 * t + 0.25 * ksq + p;
            temp * kk_sq * (d2 - dk).norm_sqr() / (4.0 * ksq * denom)
        };
        let n = self.samples.len();
        let rhs = block_jackknife(n, JACKKNIFE_BLOCKS.min(n / 2), stat);
        let denominator = 4.0 * t + 0.25 * ksq + mean(pair);
        assert!(denominator > 0.0, "denominator must be positive for k ≠ 0");
        let slack = lhs.mean - rhs.mean;
        Ok(BogoliubovClassicalReport {
            k: [k.components.x, k.components.y],
            reciprocal: [big_k.components.x, big_k.components.y],
            class: k.class.label(),
            lhs,
            rhs,
            slack,
            slack_stderr: lhs.stderr.hypot(rhs.stderr),
            denominator,
        })
    }
}

/// Classical right side assembled term by term with `t = d·k_BT/2` and the
/// pair sum averaged over the samples.
pub fn bogoliubov_check_classical(
    samples: &SampleSet,
    pot: &PairPotential,
    k: &WaveVector,
    big_k: &WaveVector,
    temperature: f64,
) -> Result<BogoliubovClassicalReport> {
    ClassicalInputs::new(samples, pot, temperature)?.check(k, big_k)
}

/// Random-phase envelope for `|ρ_k|` of an uncorrelated gas.
pub fn random_phase_envelope(particles: usize, samples: usize) -> f64 {
    3.0 / ((particles * samples) as f64).sqrt()
}
