//! Two-particle Schrödinger problem in the relative coordinate.
//!
//! The kernel `⟨u|V|u′⟩` conserves the centre of mass, so the spectrum
//! follows from the relative problem with reduced mass `m/2`. Both particle
//! orderings contribute a kernel term: a local kernel carrying `½φ`
//! therefore yields the full pair potential `φ`.

use std::f64::consts::PI;

use faer::{c64, Mat};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potentials::PairPotential;
use crate::quantum::{eigh, hermiticity_defect, OperatorMatrix, HBAR, HERMITIAN_TOL, MASS};

/// Relative tolerance for grouping degenerate eigenvalues.
const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelativeGrid {
    pub points: usize,
    pub length: f64,
}

impl RelativeGrid {
    pub fn new(points: usize, length: f64) -> Result<Self> {
        if points < 4 || points % 2 != 0 {
            return Err(Error::InvalidSpace(format!(
                "relative grid needs an even number of points ≥ 4, got {points}"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidRange(format!(
                "ring length must be positive, got {length}"
            )));
        }
        Ok(Self { points, length })
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    /// Coordinate of point `j`, wrapped into `[−L/2, L/2)`.
    pub fn coordinate(&self, j: usize) -> f64 {
        let m = self.points as i64;
        let s = (j as i64).rem_euclid(m);
        let n = if s < m / 2 { s } else { s - m };
        n as f64 * self.spacing()
    }

    /// Index of `−u_j`.
    pub fn reflect(&self, j: usize) -> usize {
        (self.points - j % self.points) % self.points
    }

    pub fn momentum(&self, slot: usize) -> f64 {
        let m = self.points as i64;
        let s = slot as i64;
        let n = if s < m / 2 { s } else { s - m };
        HBAR * 2.0 * PI * n as f64 / self.length
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelFamily {
    /// `λ·g(u)·g(u′)` with `g(u) = exp(−u²/2σ_g²)`.
    Separable { lambda: f64, sigma: f64 },
    /// `½φ(|u|)·δ(u − u′)`.
    DeltaLocal { potential: PairPotential },
    /// Tabulated kernel values.
    Table,
}

/// Kernel `⟨u|V|u′⟩` sampled on a relative grid.
#[derive(Debug, Clone)]
pub struct KernelOperator {
    pub family: KernelFamily,
    pub grid: RelativeGrid,
    /// Kernel values; a delta contributes `1/h` on the diagonal.
    pub values: Mat<c64>,
}

fn pair_value(pot: &PairPotential, u: f64) -> f64 {
    use crate::geometry::Vec2;
    pot.value(&Vec2::new(u.abs(), 0.0), &Vec2::zeros())
}

impl KernelOperator {
    pub fn separable(grid: RelativeGrid, lambda: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidRange(format!(
                "separable kernel needs σ_g > 0 and finite λ, got σ_g = {sigma}, λ = {lambda}"
            )));
        }
        let g: Vec<f64> = (0..grid.points)
            .map(|j| separable_profile(grid.coordinate(j), sigma))
            .collect();
        let values = Mat::from_fn(grid.points, grid.points, |a, b| {
            c64::new(lambda * g[a] * g[b], 0.0)
        });
        Ok(Self {
            family: KernelFamily::Separable { lambda, sigma },
            grid,
            values,
        })
    }

    /// Local kernel for a translation-invariant pair potential.
    pub fn delta_local(grid: RelativeGrid, pot: &PairPotential) -> Result<Self> {
        if !pot.is_local() {
            return Err(Error::KindMismatch {
                bound: None,
                reason: format!("{} is not a function of the separation alone", pot.family()),
            });
        }
        let h = grid.spacing();
        let values = Mat::from_fn(grid.points, grid.points, |a, b| {
            if a == b {
                c64::new(0.5 * pair_value(pot, grid.coordinate(a)) / h, 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        Ok(Self {
            family: KernelFamily::DeltaLocal {
                potential: pot.clone(),
            },
            grid,
            values,
        })
    }

    pub fn from_table(grid: RelativeGrid, values: Mat<c64>) -> Result<Self> {
        if values.nrows() != grid.points || values.ncols() != grid.points {
            return Err(Error::GridMismatch(format!(
                "table is {}×{}, grid has {} points",
                values.nrows(),
                values.ncols(),
                grid.points
            )));
        }
        Ok(Self {
            family: KernelFamily::Table,
            grid,
            values,
        })
    }

    /// Quadrature matrix `h·⟨u|V|u′⟩`.
    pub fn matrix(&self) -> Mat<c64> {
        let h = self.grid.spacing();
        Mat::from_fn(self.grid.points, self.grid.points, |a, b| {
            self.values[(a, b)] * h
        })
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.values)
    }

    /// Largest `|W[−u,−u′] − W[u,u′]|`.
    pub fn parity_defect(&self) -> f64 {
        let m = self.grid.points;
        let mut worst = 0.0f64;
        for a in 0..m {
            for b in 0..m {
                let d =
                    self.values[(self.grid.reflect(a), self.grid.reflect(b))] - self.values[(a, b)];
                worst = worst.max(d.norm());
            }
        }
        worst
    }
}

pub fn separable_profile(u: f64, sigma: f64) -> f64 {
    (-u * u / (2.0 * sigma * sigma)).exp()
}

/// Reduced mass of the relative motion.
pub fn reduced_mass() -> f64 {
    MASS / 2.0
}

/// Spectral `−(ħ²/2μ)∂²_u` on the ring.
pub fn relative_kinetic(grid: &RelativeGrid) -> Mat<c64> {
    let m = grid.points;
    let mu = reduced_mass();
    let eps: Vec<f64> = (0..m)
        .map(|s| grid.momentum(s).powi(2) / (2.0 * mu))
        .collect();
    Mat::from_fn(m, m, |a, b| {
        let d = (a as i64 - b as i64).rem_euclid(m as i64);
        let mut acc = 0.0;
        for (s, e) in eps.iter().enumerate() {
            acc += e * (2.0 * PI * (s as i64 * d).rem_euclid(m as i64) as f64 / m as f64).cos();
        }
        c64::new(acc / m as f64, 0.0)
    })
}

/// `H_rel = −(ħ²/2μ)∂²_u + W + ΠWΠ`, with `Π: u → −u` exchanging the particles.
pub fn build_relative_hamiltonian(kernel: &KernelOperator) -> Result<OperatorMatrix> {
    let scale = crate::quantum::max_entry(&kernel.values).max(1.0);
    let defect = kernel.hermiticity_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NonHermitianKernel(defect));
    }
    let grid = &kernel.grid;
    let w = kernel.matrix();
    let mut h = relative_kinetic(grid);
    for a in 0..grid.points {
        for b in 0..grid.points {
            h[(a, b)] += w[(a, b)] + w[(grid.reflect(a), grid.reflect(b))];
        }
    }
    OperatorMatrix::new(h, true)
}

/// Potential added directly on the diagonal, for comparison with the kernel path.
pub fn build_local_hamiltonian(grid: &RelativeGrid, pot: &PairPotential) -> Result<OperatorMatrix> {
    let mut h = relative_kinetic(grid);
    for a in 0..grid.points {
        h[(a, a)] += c64::new(pair_value(pot, grid.coordinate(a)), 0.0);
    }
    OperatorMatrix::new(h, true)
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    /// Eigenvectors as columns.
    pub vectors: Mat<c64>,
    /// `+1` even, `−1` odd under `u → −u`.
    pub parity: Vec<i8>,
    /// Largest `|⟨v|Π|v⟩| − 1` deviation over returned states.
    pub parity_defect: f64,
}

fn reflection(grid: &RelativeGrid) -> Mat<c64> {
    Mat::from_fn(grid.points, grid.points, |a, b| {
        if grid.reflect(b) == a {
            c64::new(1.0, 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    })
}

/// Lowest `n_states` eigenpairs, with degenerate multiplets rotated to
/// definite parity.
pub fn solve_spectrum(
    h: &OperatorMatrix,
    grid: &RelativeGrid,
    n_states: usize,
) -> Result<Spectrum> {
    if h.dim() != grid.points {
        return Err(Error::GridMismatch(format!(
            "operator has dimension {}, grid has {} points",
            h.dim(),
            grid.points
        )));
    }
    let (energies, mut vectors) = eigh(&h.mat)?;
    let pi = reflection(grid);
    let scale = energies.iter().fold(1.0f64, |a, e| a.max(e.abs()));
    let mut start = 0;
    while start < energies.len() {
        let mut end = start + 1;
        while end < energies.len()
            && (energies[end] - energies[start]).abs() <= DEGENERACY_TOL * scale
        {
            end += 1;
        }
        if end - start > 1 {
            let block = vectors.subcols(start, end - start).to_owned();
            let pb = block.adjoint() * &pi * &block;
            let (_, rot) = eigh(&pb)?;
            let rotated = &block * &rot;
            for c in 0..end - start {
                for r in 0..grid.points {
                    vectors[(r, start + c)] = rotated[(r, c)];
                }
            }
        }
        start = end;
    }
    let n = n_states.min(energies.len());
    let mut parity = Vec::with_capacity(n);
    let mut parity_defect = 0.0f64;
    for s in 0..n {
        let mut p = c64::new(0.0, 0.0);
        for r in 0..grid.points {
            p += vectors[(r, s)].conj() * vectors[(grid.reflect(r), s)];
        }
        parity_defect = parity_defect.max((1.0 - p.re.abs()).abs() + p.im.abs());
        parity.push(if p.re >= 0.0 { 1 } else { -1 });
    }
    Ok(Spectrum {
        energies: energies[..n].to_vec(),
        vectors: vectors.subcols(0, n).to_owned(),
        parity,
        parity_defect,
    })
}

/// Two-particle amplitude `Ψ(r₁, r₂)` on the product grid, `r = j·h` in `[0, L)`.
#[derive(Debug, Clone)]
pub struct PairWavefunction {
    pub grid: RelativeGrid,
    pub values: Mat<c64>,
}

impl PairWavefunction {
    pub fn from_fn<F: Fn(f64, f64) -> c64>(grid: RelativeGrid, f: F) -> Self {
        let h = grid.spacing();
        let values = Mat::from_fn(grid.points, grid.points, |i, j| {
            f(i as f64 * h, j as f64 * h)
        });
        Self { grid, values }
    }
}

/// `Φ(r₁, r₂)Ψ(r₁, r₂)` from the kernel by trapezoidal quadrature over `r₃`,
/// with the kernel read at `u = r₁ − r₂` and `u′ = 2r₃ − r₁ − r₂`.
///
/// A local kernel carries its delta in `r₃ − r₁`, so the integral collapses
/// to `½φ(|r₁ − r₂|)Ψ(r₁, r₂)`.
pub fn apply_nonlocal_phi(kernel: &KernelOperator, psi: &PairWavefunction) -> Result<Mat<c64>> {
    if kernel.grid != psi.grid || psi.values.nrows() != psi.values.ncols() {
        return Err(Error::GridMismatch(format!(
            "kernel grid {:?} vs wavefunction grid {:?} ({}×{})",
            kernel.grid,
            psi.grid,
            psi.values.nrows(),
            psi.values.ncols()
        )));
    }
    let m = kernel.grid.points;
    let h = kernel.grid.spacing();
    let wrap = |x: i64| x.rem_euclid(m as i64) as usize;
    Ok(match &kernel.family {
        KernelFamily::DeltaLocal { .. } => Mat::from_fn(m, m, |i, j| {
            let u = wrap(i as i64 - j as i64);
            h * kernel.values[(u, u)] * psi.values[(i, j)]
        }),
        _ => Mat::from_fn(m, m, |i, j| {
            let (i, j) = (i as i64, j as i64);
            let u = wrap(i - j);
            let mut acc = c64::new(0.0, 0.0);
            for l in 0..m as i64 {
                acc += kernel.values[(u, wrap(2 * l - i - j))]
                    * psi.values[(wrap(l), wrap(i + j - l))];
            }
            acc * h
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionReport {
    pub states: usize,
    pub kernel_path: Vec<f64>,
    pub direct_path: Vec<f64>,
    /// Largest `|E_kernel − E_direct| / max(|E_direct|, 1)`.
    pub max_deviation: f64,
}

/// Spectrum through the local kernel against the spectrum with `φ` added on
/// the diagonal, over the lowest ten states.
pub fn local_reduction_check(pot: &PairPotential, grid: RelativeGrid) -> Result<ReductionReport> {
    let states = 10.min(grid.points);
    let kernel = KernelOperator::delta_local(grid, pot)?;
    let a = solve_spectrum(&build_relative_hamiltonian(&kernel)?, &grid, states)?;
    let b = solve_spectrum(&build_local_hamiltonian(&grid, pot)?, &grid, states)?;
    let max_deviation = a
        .energies
        .iter()
        .zip(&b.energies)
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max);
    Ok(ReductionReport {
        states,
        kernel_path: a.energies,
        direct_path: b.energies,
        max_deviation,
    })
}

/// States strictly below the bottom of the free spectrum (zero).
pub fn bound_state_count(spectrum: &Spectrum) -> usize {
    let scale = spectrum.energies.iter().fold(1.0f64, |a, e| a.max(e.abs()));
    spectrum
        .energies
        .iter()
        .filter(|e| **e < -DEGENERACY_TOL * scale)
        .count()
}
