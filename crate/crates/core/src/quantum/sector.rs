//! Two distinguishable particles on a ring with a local pair potential.
//!
//! Total momentum is conserved, so `Ĥ` splits into `M` blocks of size `M`
//! spanned by plane waves `|n, P − n⟩`. `Ĉ` shifts the total momentum by
//! `±q`, which is all that the double commutator needs. This reaches grids
//! far beyond the dense budget (`M = 256` is `65536` states).

use std::f64::consts::PI;

use faer::{c64, Mat};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{build_box, LatticeSpec, Vec2};
use crate::potentials::{PairPotential, Periodization};

use super::space::{HBAR, MASS};
use super::thermal::eigh;

pub struct PairSectorSolver {
    pub grid: usize,
    pub length: f64,
    pub beta: f64,
    energies: Vec<Vec<f64>>,
    vectors: Vec<Mat<c64>>,
    weights: Vec<Vec<f64>>,
}

impl PairSectorSolver {
    pub fn new(grid: usize, length: f64, pot: &PairPotential, beta: f64) -> Result<Self> {
        if grid < 4 || grid % 2 != 0 {
            return Err(Error::InvalidSpace(format!(
                "grid must be even and ≥ 4, got {grid}"
            )));
        }
        if !pot.is_local() {
            return Err(Error::KindMismatch {
                bound: None,
                reason: "the sector solver needs a translation-invariant potential".into(),
            });
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidRange(format!(
                "beta must be positive, got {beta}"
            )));
        }
        let bx = build_box(&LatticeSpec::chain(length, 1))?;
        let h = length / grid as f64;
        let origin = Vec2::zeros();
        let v: Vec<f64> = (0..grid)
            .map(|d| {
                pot.evaluate_with(
                    &Vec2::new(d as f64 * h, 0.0),
                    &origin,
                    &bx,
                    Periodization::ImageSum,
                )
            })
            .collect();
        let m = grid as i64;
        let vt: Vec<c64> = (0..grid)
            .map(|q| {
                let mut acc = c64::new(0.0, 0.0);
                for (d, val) in v.iter().enumerate() {
                    let ph = -2.0 * PI * ((q * d) as i64).rem_euclid(m) as f64 / m as f64;
                    acc += c64::from_polar(*val, ph);
                }
                acc / grid as f64
            })
            .collect();
        let p = |slot: usize| momentum(grid, length, slot);
        let blocks: Result<Vec<(Vec<f64>, Mat<c64>)>> = (0..grid)
            .into_par_iter()
            .map(|total| {
                let hp = Mat::<c64>::from_fn(grid, grid, |row, col| {
                    let mut val = vt[(row + grid - col) % grid];
                    if row == col {
                        let n2 = (total + grid - col) % grid;
                        val += c64::new((p(col).powi(2) + p(n2).powi(2)) / (2.0 * MASS), 0.0);
                    }
                    val
                });
                eigh(&hp)
            })
            .collect();
        let blocks = blocks?;
        let e0 = blocks
            .iter()
            .map(|(e, _)| e[0])
            .fold(f64::INFINITY, f64::min);
        let mut z = 0.0;
        let raw: Vec<Vec<f64>> = blocks
            .iter()
            .map(|(e, _)| {
                e.iter()
                    .map(|x| {
                        let w = (-beta * (x - e0)).exp();
                        z += w;
                        w
                    })
                    .collect()
            })
            .collect();
        let weights = raw
            .into_iter()
            .map(|ws| ws.into_iter().map(|w| w / z).collect())
            .collect();
        let (energies, vectors) = blocks.into_iter().unzip();
        Ok(Self {
            grid,
            length,
            beta,
            energies,
            vectors,
            weights,
        })
    }

    pub fn dimension(&self) -> usize {
        self.grid * self.grid
    }

    pub fn wavevector(&self, q: i64) -> f64 {
        2.0 * PI * q as f64 / self.length
    }

    /// `⟨[[Ĉ, Ĥ], Ĉ†]⟩` at `k = 2πq/L`.
    pub fn denominator(&self, q: i64) -> Result<f64> {
        let m = self.grid;
        let qs = q.rem_euclid(m as i64) as usize;
        if qs == 0 || 2 * qs == m {
            return Err(Error::InvalidRange(format!(
                "shift {q} must be nonzero and different from M/2"
            )));
        }
        let p = |slot: usize| momentum(m, self.length, slot);
        let parts: Vec<f64> = (0..m)
            .into_par_iter()
            .map(|from| {
                let to = (from + qs) % m;
                // Ĉ₊ = B₊/(2i), B₊ = Σ_i ½{p̂_i, e^{iqx̂_i}}
                let mut cp = Mat::<c64>::zeros(m, m);
                let factor = c64::new(0.0, -0.5 * HBAR);
                for n1 in 0..m {
                    let n2 = (from + m - n1) % m;
                    let r1 = (n1 + qs) % m;
                    cp[(r1, n1)] += factor * (0.5 * (p(r1) + p(n1)));
                    let r2 = (n2 + qs) % m;
                    cp[(n1, n1)] += factor * (0.5 * (p(r2) + p(n2)));
                }
                let ct = self.vectors[to].adjoint() * &cp * &self.vectors[from];
                let (ef, wf) = (&self.energies[from], &self.weights[from]);
                let (et, wt) = (&self.energies[to], &self.weights[to]);
                let mut acc = 0.0;
                for n in 0..m {
                    for k in 0..m {
                        acc += (wf[n] - wt[k]) * (et[k] - ef[n]) * ct[(k, n)].norm_sqr();
                    }
                }
                acc
            })
            .collect();
        Ok(2.0 * parts.iter().sum::<f64>())
    }

    /// Mean kinetic energy per particle.
    pub fn kinetic_per_particle(&self) -> f64 {
        let m = self.grid;
        let p = |slot: usize| momentum(m, self.length, slot);
        let mut acc = 0.0;
        for total in 0..m {
            let v = &self.vectors[total];
            for (n, w) in self.weights[total].iter().enumerate() {
                for n1 in 0..m {
                    let n2 = (total + m - n1) % m;
                    acc +=
                        w * v[(n1, n)].norm_sqr() * (p(n1).powi(2) + p(n2).powi(2)) / (2.0 * MASS);
                }
            }
        }
        acc / 2.0
    }
}

fn momentum(grid: usize, length: f64, slot: usize) -> f64 {
    let m = grid as i64;
    let s = slot as i64;
    let n = if s < m / 2 { s } else { s - m };
    HBAR * 2.0 * PI * n as f64 / length
}
