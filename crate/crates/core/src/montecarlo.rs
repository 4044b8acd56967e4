//! Canonical-ensemble Metropolis sampling of `e^{−βU}` with
//! `U = ½ Σ_{i≠j} Φ(r_i, r_j)`.
//!
//! Moves are single-particle Gaussian displacements. The step size is tuned
//! towards the target acceptance during equilibration only and is frozen for
//! production, so the production chain is a fixed reversible kernel.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{lattice_sites, Dimension, SimulationBox, Vec2};
use crate::potentials::PairPotential;
use crate::stats::{blocking_estimate, Estimate};

pub const MIN_SAMPLES: usize = 64;

/// Particle positions in fractional box coordinates, all in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub bx: Arc<SimulationBox>,
    pub frac: Vec<Vec2>,
}

impl Configuration {
    pub fn new(bx: Arc<SimulationBox>, frac: Vec<Vec2>) -> Result<Self> {
        for f in &frac {
            if !(0.0..1.0).contains(&f.x) || !(0.0..1.0).contains(&f.y) {
                return Err(Error::InvalidLattice(format!(
                    "fractional position {f:?} outside [0, 1)"
                )));
            }
            if bx.dimension() == Dimension::One && f.y != 0.0 {
                return Err(Error::InvalidLattice(
                    "one-dimensional particles must sit on the a1 axis".into(),
                ));
            }
        }
        Ok(Self { bx, frac })
    }

    /// Build from Cartesian positions, wrapping into the box.
    pub fn from_cartesian(bx: Arc<SimulationBox>, cart: &[Vec2]) -> Result<Self> {
        let frac = cart
            .iter()
            .map(|r| bx.wrap_fractional(&bx.to_fractional(r)))
            .collect();
        Self::new(bx, frac)
    }

    /// Ideal Bravais sites, optionally jittered by a Gaussian of width
    /// `jitter` (Cartesian length units).
    pub fn lattice(bx: Arc<SimulationBox>, per_cell: usize, jitter: f64, seed: u64) -> Self {
        let mut frac = lattice_sites(&bx, per_cell);
        if jitter > 0.0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
            let normal = Normal::new(0.0, jitter).expect("finite jitter");
            for f in frac.iter_mut() {
                let mut r = bx.to_cartesian(f);
                r.x += normal.sample(&mut rng);
                if bx.dimension() == Dimension::Two {
                    r.y += normal.sample(&mut rng);
                }
                *f = bx.wrap_fractional(&bx.to_fractional(&r));
                if bx.dimension() == Dimension::One {
                    f.y = 0.0;
                }
            }
        }
        Self { bx, frac }
    }

    pub fn len(&self) -> usize {
        self.frac.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frac.is_empty()
    }

    pub fn cartesian(&self, i: usize) -> Vec2 {
        self.bx.to_cartesian(&self.frac[i])
    }

    pub fn cartesian_all(&self) -> Vec<Vec2> {
        (0..self.len()).map(|i| self.cartesian(i)).collect()
    }

    /// Rigidly translate every particle by a Cartesian vector.
    pub fn translated(&self, shift: &Vec2) -> Self {
        let df = self.bx.to_fractional(shift);
        let frac = self
            .frac
            .iter()
            .map(|f| self.bx.wrap_fractional(&(f + df)))
            .collect();
        Self {
            bx: self.bx.clone(),
            frac,
        }
    }
}

/// `U = ½ Σ_{i≠j} Φ(r_i, r_j)` over ordered pairs.
pub fn total_energy(config: &Configuration, pot: &PairPotential) -> Result<f64> {
    let r = config.cartesian_all();
    let mut u = 0.0;
    for i in 0..r.len() {
        for j in 0..r.len() {
            if i != j {
                u += pot.evaluate(&r[i], &r[j], &config.bx)?;
            }
        }
    }
    Ok(0.5 * u)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub beta: f64,
    pub total_sweeps: usize,
    pub equilibration_sweeps: usize,
    pub thinning: usize,
    pub initial_step: f64,
    pub seed: u64,
    pub target_acceptance: f64,
    /// Store configurations in the center-of-mass frame of the initial
    /// configuration. Only applied to translation-invariant potentials.
    pub com_frame: bool,
}

impl Default for ChainParams {
    fn default() -> Self {
        Self {
            beta: 1.0,
            total_sweeps: 2000,
            equilibration_sweeps: 500,
            thinning: 10,
            initial_step: 0.1,
            seed: 1,
            target_acceptance: 0.4,
            com_frame: true,
        }
    }
}

impl ChainParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidChain(format!(
                "beta must be ≥ 0, got {}",
                self.beta
            )));
        }
        if self.total_sweeps == 0 || self.equilibration_sweeps >= self.total_sweeps {
            return Err(Error::InvalidChain(format!(
                "need equilibration_sweeps < total_sweeps, got {} and {}",
                self.equilibration_sweeps, self.total_sweeps
            )));
        }
        if self.thinning == 0 {
            return Err(Error::InvalidChain("thinning must be positive".into()));
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::InvalidChain("initial_step must be positive".into()));
        }
        if !(self.target_acceptance > 0.0 && self.target_acceptance < 1.0) {
            return Err(Error::InvalidChain(
                "target_acceptance must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }

    pub fn expected_samples(&self) -> usize {
        (self.total_sweeps - self.equilibration_sweeps) / self.thinning
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainMeta {
    pub seed: u64,
    pub beta: f64,
    /// Production acceptance rate.
    pub acceptance_rate: f64,
    /// Frozen production step.
    pub step: f64,
    pub samples: usize,
}

/// Post-equilibration, thinned samples of one or more chains.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub configs: Vec<Configuration>,
    pub energies: Vec<f64>,
    pub sweeps: Vec<usize>,
    /// Running production acceptance rate at each stored sample.
    pub acceptance: Vec<f64>,
    pub runs: Vec<ChainMeta>,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn particles(&self) -> usize {
        self.configs.first().map_or(0, |c| c.len())
    }

    pub fn require(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            Err(Error::TooFewSamples {
                needed,
                have: self.len(),
            })
        } else {
            Ok(())
        }
    }

    /// A frozen set repeating one configuration, the `T → 0` limit of a
    /// perfectly ordered run.
    pub fn frozen(config: Configuration, copies: usize) -> Self {
        Self {
            configs: vec![config; copies],
            energies: vec![0.0; copies],
            sweeps: (0..copies).collect(),
            acceptance: vec![0.0; copies],
            runs: Vec::new(),
        }
    }

    /// Order-stable concatenation keyed by seed.
    pub fn merge(mut sets: Vec<SampleSet>) -> SampleSet {
        sets.sort_by_key(|s| s.runs.first().map_or(0, |r| r.seed));
        let mut out = SampleSet {
            configs: Vec::new(),
            energies: Vec::new(),
            sweeps: Vec::new(),
            acceptance: Vec::new(),
            runs: Vec::new(),
        };
        for s in sets {
            out.configs.extend(s.configs);
            out.energies.extend(s.energies);
            out.sweeps.extend(s.sweeps);
            out.acceptance.extend(s.acceptance);
            out.runs.extend(s.runs);
        }
        out
    }

    /// Split into the first and second half of the stored samples.
    pub fn halves(&self) -> (SampleSet, SampleSet) {
        let mid = self.len() / 2;
        let part = |lo: usize, hi: usize| SampleSet {
            configs: self.configs[lo..hi].to_vec(),
            energies: self.energies[lo..hi].to_vec(),
            sweeps: self.sweeps[lo..hi].to_vec(),
            acceptance: self.acceptance[lo..hi].to_vec(),
            runs: self.runs.clone(),
        };
        (part(0, mid), part(mid, self.len()))
    }
}

/// Metropolis acceptance: `ΔU ≤ 0`, infinite temperature, or
/// `u < e^{−βΔU}` for a uniform draw `u ∈ [0, 1)`.
pub fn metropolis_accept(delta_u: f64, beta: f64, uniform: f64) -> bool {
    if beta == 0.0 || delta_u <= 0.0 {
        return true;
    }
    uniform < (-beta * delta_u).exp()
}

/// A running Metropolis chain.
pub struct Chain {
    config: Configuration,
    pot: PairPotential,
    beta: f64,
    step: f64,
    energy: f64,
    rng: ChaCha8Rng,
    attempts: u64,
    accepted: u64,
    /// Sum of accepted Cartesian displacements, unwrapped.
    drift: Vec2,
}

impl Chain {
    pub fn new(
        init: Configuration,
        pot: PairPotential,
        beta: f64,
        step: f64,
        seed: u64,
    ) -> Result<Self> {
        pot.check_commensurate(&init.bx)?;
        let energy = total_energy(&init, &pot)?;
        Ok(Self {
            config: init,
            pot,
            beta,
            step,
            energy,
            rng: ChaCha8Rng::seed_from_u64(seed),
            attempts: 0,
            accepted: 0,
            drift: Vec2::zeros(),
        })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.accepted as f64 / self.attempts as f64
        }
    }

    pub fn reset_counters(&mut self) {
        self.attempts = 0;
        self.accepted = 0;
    }

    pub fn recompute_energy(&self) -> Result<f64> {
        total_energy(&self.config, &self.pot)
    }

    /// Center-of-mass displacement accumulated since the start.
    pub fn com_drift(&self) -> Vec2 {
        self.drift / self.config.len() as f64
    }

    fn propose(&mut self, i: usize) -> Vec2 {
        let bx = &self.config.bx;
        let normal = Normal::new(0.0, self.step).expect("positive step");
        match bx.dimension() {
            Dimension::One => {
                let axis = bx.edge1 / bx.edge1.norm();
                axis * normal.sample(&mut self.rng)
            }
            Dimension::Two => {
                let _ = i;
                Vec2::new(normal.sample(&mut self.rng), normal.sample(&mut self.rng))
            }
        }
    }

    /// One single-particle move attempt. Returns whether it was accepted.
    pub fn attempt(&mut self) -> Result<bool> {
        let n = self.config.len();
        let i = self.rng.random_range(0..n);
        let delta = self.propose(i);
        let bx = self.config.bx.clone();
        let old = self.config.cartesian(i);
        let new_frac = bx.wrap_fractional(&bx.to_fractional(&(old + delta)));
        let new = bx.to_cartesian(&new_frac);
        let mut du = 0.0;
        for j in 0..n {
            if j != i {
                let rj = self.config.cartesian(j);
                du += self.pot.evaluate(&new, &rj, &bx)? - self.pot.evaluate(&old, &rj, &bx)?;
            }
        }
        let u: f64 = self.rng.random();
        self.attempts += 1;
        if metropolis_accept(du, self.beta, u) {
            self.config.frac[i] = new_frac;
            if bx.dimension() == Dimension::One {
                self.config.frac[i].y = 0.0;
            }
            self.energy += du;
            self.accepted += 1;
            self.drift += delta;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    pub fn sweep(&mut self) -> Result<()> {
        for _ in 0..self.config.len() {
            self.attempt()?;
        }
        Ok(())
    }

    fn max_step(&self) -> f64 {
        let bx = &self.config.bx;
        let h1 = bx.area / bx.edge2.norm();
        let h2 = bx.area / bx.edge1.norm();
        match bx.dimension() {
            Dimension::One => 0.5 * bx.edge1.norm(),
            Dimension::Two => 0.5 * h1.min(h2),
        }
    }

    fn adapt(&mut self, rate: f64, target: f64) {
        let factor = (2.0 * (rate - target)).exp().clamp(0.5, 2.0);
        self.step = (self.step * factor).clamp(1e-6, self.max_step());
    }
}

const ADAPT_WINDOW: usize = 10;

pub fn metropolis_chain(
    init: &Configuration,
    pot: &PairPotential,
    params: &ChainParams,
) -> Result<SampleSet> {
    params.validate()?;
    let mut chain = Chain::new(
        init.clone(),
        pot.clone(),
        params.beta,
        params.initial_step,
        params.seed,
    )?;

    for sweep in 0..params.equilibration_sweeps {
        chain.sweep()?;
        if (sweep + 1) % ADAPT_WINDOW == 0 {
            let rate = chain.acceptance_rate();
            chain.adapt(rate, params.target_acceptance);
            chain.reset_counters();
        }
    }
    chain.reset_counters();
    let use_com = params.com_frame && pot.is_local();

    let n = init.len() as f64;
    let mut out = SampleSet {
        configs: Vec::with_capacity(params.expected_samples()),
        energies: Vec::with_capacity(params.expected_samples()),
        sweeps: Vec::with_capacity(params.expected_samples()),
        acceptance: Vec::with_capacity(params.expected_samples()),
        runs: Vec::new(),
    };
    for s in 0..params.total_sweeps - params.equilibration_sweeps {
        chain.sweep()?;
        if (s + 1) % params.thinning == 0 {
            let config = if use_com {
                chain.config.translated(&(-(chain.drift) / n))
            } else {
                chain.config.clone()
            };
            out.configs.push(config);
            out.energies.push(chain.energy);
            out.sweeps.push(params.equilibration_sweeps + s + 1);
            out.acceptance.push(chain.acceptance_rate());
        }
    }
    out.runs.push(ChainMeta {
        seed: params.seed,
        beta: params.beta,
        acceptance_rate: chain.acceptance_rate(),
        step: chain.step,
        samples: out.len(),
    });
    Ok(out)
}

/// Independent chains with distinct seeds, merged in seed order.
pub fn parallel_chains(
    init: &Configuration,
    pot: &PairPotential,
    params: &ChainParams,
    seeds: &[u64],
) -> Result<SampleSet> {
    let sets: Result<Vec<SampleSet>> = seeds
        .par_iter()
        .map(|&seed| {
            let p = ChainParams {
                seed,
                ..params.clone()
            };
            metropolis_chain(init, pot, &p)
        })
        .collect();
    Ok(SampleSet::merge(sets?))
}

/// Sample mean of `f` with a blocking error bar.
pub fn ensemble_average<F>(samples: &SampleSet, f: F) -> Result<Estimate>
where
    F: Fn(&Configuration) -> f64,
{
    samples.require(MIN_SAMPLES)?;
    let xs: Vec<f64> = samples.configs.iter().map(f).collect();
    Ok(blocking_estimate(&xs))
}

/// Blocking estimate of the stored energies.
pub fn energy_average(samples: &SampleSet) -> Result<Estimate> {
    samples.require(MIN_SAMPLES)?;
    Ok(blocking_estimate(&samples.energies))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_box, LatticeSpec};

    fn square_box(n: usize) -> Arc<SimulationBox> {
        Arc::new(build_box(&LatticeSpec::square(1.0, n)).unwrap())
    }

    #[test]
    fn two_particle_energy_is_single_pair() {
        let bx = square_box(4);
        let pot = PairPotential::GaussianCore {
            epsilon: 1.0,
            sigma: 1.0,
        };
        let c =
            Configuration::from_cartesian(bx, &[Vec2::new(0.5, 0.5), Vec2::new(1.2, 0.5)]).unwrap();
        let u = total_energy(&c, &pot).unwrap();
        assert!((u - (-0.49f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn equilateral_triangle_energy() {
        let bx = square_box(6);
        let pot = PairPotential::GaussianCore {
            epsilon: 1.0,
            sigma: 0.8,
        };
        let d = 1.1;
        let pts = [
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0 + d, 1.0),
            Vec2::new(1.0 + 0.5 * d, 1.0 + 0.5 * 3f64.sqrt() * d),
        ];
        let c = Configuration::from_cartesian(bx, &pts).unwrap();
        let u = total_energy(&c, &pot).unwrap();
        let phi = (-(d * d) / 0.64f64).exp();
        assert!((u - 3.0 * phi).abs() < 1e-14);
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = ChainParams::default();
        p.equilibration_sweeps = p.total_sweeps;
        assert!(p.validate().is_err());
        let p = ChainParams {
            beta: -1.0,
            ..ChainParams::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn infinite_temperature_accepts_everything() {
        let bx = square_box(4);
        let init = Configuration::lattice(bx, 1, 0.0, 3);
        let pot = PairPotential::GaussianCore {
            epsilon: 5.0,
            sigma: 1.0,
        };
        let params = ChainParams {
            beta: 0.0,
            total_sweeps: 200,
            equilibration_sweeps: 100,
            thinning: 1,
            ..ChainParams::default()
        };
        let s = metropolis_chain(&init, &pot, &params).unwrap();
        assert_eq!(s.runs[0].acceptance_rate, 1.0);
        assert_eq!(s.len(), 100);
    }

    #[test]
    fn sample_count_matches_thinning() {
        let bx = square_box(3);
        let init = Configuration::lattice(bx, 1, 0.05, 1);
        let params = ChainParams {
            beta: 1.0,
            total_sweeps: 1000,
            equilibration_sweeps: 300,
            thinning: 7,
            ..ChainParams::default()
        };
        let s = metropolis_chain(&init, &PairPotential::zero(), &params).unwrap();
        assert_eq!(s.len(), 700 / 7);
    }

    #[test]
    fn acceptance_rule_cases() {
        assert!(metropolis_accept(-1.0, 1.0, 0.99));
        assert!(metropolis_accept(10.0, 0.0, 0.99));
        assert!(!metropolis_accept(1.0, 1.0, 0.5));
        assert!(metropolis_accept(1.0, 1.0, 0.3));
    }

    #[test]
    fn too_few_samples() {
        let bx = square_box(2);
        let c = Configuration::lattice(bx, 1, 0.0, 0);
        let s = SampleSet::frozen(c, 10);
        assert!(matches!(
            ensemble_average(&s, |_| 1.0),
            Err(Error::TooFewSamples { .. })
        ));
    }
}
