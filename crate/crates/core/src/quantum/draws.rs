//! Seeded random parameter draws for sweeping the inequality.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::Dimension;
use crate::potentials::PairPotential;

use super::identities::{bogoliubov_slack, BogoliubovReport};
use super::space::build_space;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovDraw {
    pub dimension: Dimension,
    pub grid: usize,
    pub length: f64,
    pub particles: usize,
    pub potential: PairPotential,
    pub k: [i64; 2],
    pub reciprocal: [i64; 2],
    pub beta: f64,
}

impl BogoliubovDraw {
    pub fn states(&self) -> usize {
        self.grid
            .pow((self.dimension.get() * self.particles) as u32)
    }

    pub fn run(&self) -> Result<BogoliubovReport> {
        let space = build_space(self.dimension, self.grid, self.length, self.particles)?;
        bogoliubov_slack(
            &space,
            &self.potential,
            &space.wave(self.k),
            &space.wave(self.reciprocal),
            self.beta,
        )
    }
}

/// Shapes `(dimension, grid, particles)` with at most `max_states` states.
fn shapes(max_states: usize) -> Vec<(Dimension, usize, usize)> {
    let mut out = Vec::new();
    for (d, m, n) in [
        (Dimension::One, 32usize, 1usize),
        (Dimension::One, 64, 1),
        (Dimension::One, 8, 2),
        (Dimension::One, 16, 2),
        (Dimension::One, 32, 2),
        (Dimension::One, 8, 3),
        (Dimension::One, 16, 3),
        (Dimension::Two, 8, 1),
        (Dimension::Two, 16, 1),
        (Dimension::Two, 32, 1),
        (Dimension::Two, 4, 2),
        (Dimension::Two, 8, 2),
    ] {
        if m.pow((d.get() * n) as u32) <= max_states {
            out.push((d, m, n));
        }
    }
    out
}

fn random_index(rng: &mut ChaCha8Rng, d: Dimension, limit: i64, nonzero: bool) -> [i64; 2] {
    let half = limit;
    loop {
        let x = rng.random_range(-half + 1..half);
        let y = if d == Dimension::Two {
            rng.random_range(-half + 1..half)
        } else {
            0
        };
        if !nonzero || x != 0 || y != 0 {
            return [x, y];
        }
    }
}

pub fn random_potential(rng: &mut ChaCha8Rng, length: f64) -> PairPotential {
    match rng.random_range(0..3) {
        0 => PairPotential::GaussianCore {
            epsilon: rng.random_range(-2.0..4.0),
            sigma: rng.random_range(0.3..0.3 * length),
        },
        1 => PairPotential::HarmonicPair {
            kappa: rng.random_range(0.05..2.0),
        },
        _ => PairPotential::SubstrateCoupled {
            epsilon: rng.random_range(0.0..3.0),
            sigma: rng.random_range(0.3..0.3 * length),
            coupling: rng.random_range(-2.0..2.0),
            wavevector: [2.0 * PI / length * rng.random_range(1..3) as f64, 0.0],
            coupling_sigma: rng.random_range(0.3..0.3 * length),
        },
    }
}

/// `count` draws, half of them at `K = 0`, with `β` log-uniform on `[0.1, 10]` and at most
/// `max_states` states each.
pub fn random_draws(count: usize, seed: u64, max_states: usize) -> Vec<BogoliubovDraw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes = shapes(max_states);
    (0..count)
        .map(|_| {
            let (dimension, grid, particles) = shapes[rng.random_range(0..shapes.len())];
            let length = rng.random_range(3.0..12.0);
            BogoliubovDraw {
                dimension,
                grid,
                length,
                particles,
                potential: random_potential(&mut rng, length),
                // small k, where the bound is tight
                k: random_index(&mut rng, dimension, 3, true),
                // K = 0 keeps ⟨[Ĉ,Â]⟩ finite in translation-invariant states
                reciprocal: if rng.random_bool(0.5) {
                    [0, 0]
                } else {
                    random_index(&mut rng, dimension, (grid / 2) as i64, false)
                },
                beta: 10f64.powf(rng.random_range(-1.0..1.0)),
            }
        })
        .collect()
}
