use faer::{c64, Mat, Side};

use crate::error::{Error, Result};

/// Ascending eigenvalues and orthonormal eigenvectors of a hermitian matrix.
pub fn eigh(h: &Mat<c64>) -> Result<(Vec<f64>, Mat<c64>)> {
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let vals: Vec<f64> = (0..h.nrows()).map(|i| s[i].re).collect();
    Ok((vals, evd.U().to_owned()))
}

/// Canonical state `e^{−βH}/Z` from a dense eigendecomposition.
#[derive(Debug, Clone)]
pub struct ThermalState {
    pub beta: f64,
    pub energies: Vec<f64>,
    /// Eigenvectors as columns, in the full space.
    pub vectors: Mat<c64>,
    /// `e^{−βE_n}/Z`.
    pub weights: Vec<f64>,
    pub log_partition: f64,
    pub density: Mat<c64>,
}

impl ThermalState {
    pub fn new(h: &Mat<c64>, beta: f64) -> Result<Self> {
        let (energies, vectors) = eigh(h)?;
        Self::from_eigen(energies, vectors, beta)
    }

    /// Thermal state of `Q†HQ`, embedded back through the isometry `Q`.
    pub fn restricted(h: &Mat<c64>, q: &Mat<c64>, beta: f64) -> Result<Self> {
        let hq = q.adjoint() * h * q;
        let (energies, v) = eigh(&hq)?;
        Self::from_eigen(energies, q * &v, beta)
    }

    fn from_eigen(energies: Vec<f64>, vectors: Mat<c64>, beta: f64) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidRange(format!(
                "beta must be finite and ≥ 0, got {beta}"
            )));
        }
        let e0 = energies[0];
        let raw: Vec<f64> = energies.iter().map(|e| (-beta * (e - e0)).exp()).collect();
        let z: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / z).collect();
        let log_partition = z.ln() - beta * e0;
        let mut scaled = vectors.clone();
        for (j, w) in weights.iter().enumerate() {
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= *w;
            }
        }
        let density = &scaled * vectors.adjoint();
        Ok(Self {
            beta,
            energies,
            vectors,
            weights,
            log_partition,
            density,
        })
    }

    pub fn dim(&self) -> usize {
        self.density.nrows()
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: n,
            });
        }
        Ok(())
    }

    /// `⟨[[C,H],C]⟩ = Σ_{nm} (w_n − w_m)(E_m − E_n)|C_nm|²` for hermitian
    /// `C` in the eigenbasis. Valid only for states built by [`ThermalState::new`].
    pub fn double_commutator_spectral(&self, c: &Mat<c64>) -> Result<f64> {
        self.check(c.nrows())?;
        if self.vectors.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: self.vectors.ncols(),
            });
        }
        let ct = self.vectors.adjoint() * c * &self.vectors;
        let n = self.energies.len();
        let mut acc = 0.0;
        for m in 0..n {
            for k in 0..n {
                let w = (self.weights[k] - self.weights[m]) * (self.energies[m] - self.energies[k]);
                acc += w * ct[(k, m)].norm_sqr();
            }
        }
        Ok(acc)
    }
}

/// `Σ_n e^{−βE_n}⟨n|Op|n⟩/Z`.
pub fn thermal_average(state: &ThermalState, op: &Mat<c64>) -> Result<c64> {
    state.check(op.nrows())?;
    if op.ncols() != op.nrows() {
        return Err(Error::DimensionMismatch {
            expected: op.nrows(),
            got: op.ncols(),
        });
    }
    Ok(super::operators::trace_product(&state.density, op))
}

/// Average of a position-diagonal operator.
pub fn thermal_average_diagonal(state: &ThermalState, d: &[c64]) -> Result<c64> {
    state.check(d.len())?;
    Ok(d.iter()
        .enumerate()
        .map(|(i, v)| state.density[(i, i)] * v)
        .sum())
}

pub fn thermal_average_real_diagonal(state: &ThermalState, d: &[f64]) -> Result<f64> {
    state.check(d.len())?;
    Ok(d.iter()
        .enumerate()
        .map(|(i, v)| state.density[(i, i)].re * v)
        .sum())
}
