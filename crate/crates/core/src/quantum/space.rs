use std::f64::consts::PI;

use faer::{c64, Mat};

use crate::error::{Error, Result};
use crate::geometry::{build_box, Dimension, LatticeSpec, SimulationBox, Vec2, WaveVector};
use crate::potentials::Periodization;

pub const DENSE_BUDGET: usize = 4096;
pub const HBAR: f64 = 1.0;
pub const MASS: f64 = 1.0;

/// Distinguishable particles on a periodic grid of `M` points per axis
/// and box length `L`. Basis states are tensor products of grid points;
/// mode `particle·d + axis` is the most significant digit first.
#[derive(Debug, Clone)]
pub struct ManyBodySpace {
    pub dimension: Dimension,
    pub grid: usize,
    pub length: f64,
    pub particles: usize,
    pub total: usize,
    pub bx: SimulationBox,
    /// Image sum by default: the minimal image puts kinks into smooth
    /// potentials and spoils spectral accuracy.
    pub periodization: Periodization,
}

pub fn build_space(
    dimension: Dimension,
    grid: usize,
    length: f64,
    particles: usize,
) -> Result<ManyBodySpace> {
    if grid < 2 || grid % 2 != 0 {
        return Err(Error::InvalidSpace(format!(
            "grid size must be even and ≥ 2, got {grid}"
        )));
    }
    if particles == 0 {
        return Err(Error::InvalidSpace("need at least one particle".into()));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::InvalidSpace(format!(
            "box length must be positive, got {length}"
        )));
    }
    let modes = particles * dimension.get();
    let total = (grid as u128)
        .checked_pow(modes as u32)
        .unwrap_or(u128::MAX);
    if total > DENSE_BUDGET as u128 {
        return Err(Error::DimensionBudgetExceeded {
            dimension: total.min(usize::MAX as u128) as usize,
            budget: DENSE_BUDGET,
        });
    }
    let spec = match dimension {
        Dimension::One => LatticeSpec::chain(length, 1),
        Dimension::Two => LatticeSpec::square(length, 1),
    };
    Ok(ManyBodySpace {
        dimension,
        grid,
        length,
        particles,
        total: total as usize,
        bx: build_box(&spec)?,
        periodization: Periodization::ImageSum,
    })
}

impl ManyBodySpace {
    pub fn modes(&self) -> usize {
        self.particles * self.dimension.get()
    }

    pub fn mode(&self, particle: usize, axis: usize) -> usize {
        particle * self.dimension.get() + axis
    }

    pub fn stride(&self, mode: usize) -> usize {
        self.grid.pow((self.modes() - 1 - mode) as u32)
    }

    pub fn digit(&self, index: usize, mode: usize) -> usize {
        (index / self.stride(mode)) % self.grid
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.grid as f64
    }

    /// Signed Fourier index of DFT slot `s`, in `[−M/2, M/2)`.
    pub fn fourier_index(&self, slot: usize) -> i64 {
        let m = self.grid as i64;
        let s = slot as i64;
        if s < m / 2 {
            s
        } else {
            s - m
        }
    }

    /// Single-axis momentum eigenvalue of DFT slot `s`.
    pub fn momentum(&self, slot: usize) -> f64 {
        HBAR * 2.0 * PI * self.fourier_index(slot) as f64 / self.length
    }

    /// Momentum eigenvalues `ħ·2πn/L` in slot order.
    pub fn momentum_spectrum(&self) -> Vec<f64> {
        (0..self.grid).map(|s| self.momentum(s)).collect()
    }

    /// Cartesian position of `particle` in basis state `index`.
    pub fn position(&self, index: usize, particle: usize) -> Vec2 {
        let h = self.spacing();
        let x = self.digit(index, self.mode(particle, 0)) as f64 * h;
        let y = match self.dimension {
            Dimension::One => 0.0,
            Dimension::Two => self.digit(index, self.mode(particle, 1)) as f64 * h,
        };
        Vec2::new(x, y)
    }

    pub fn positions(&self, index: usize) -> Vec<Vec2> {
        (0..self.particles)
            .map(|p| self.position(index, p))
            .collect()
    }

    /// Integer index `kL/2π` of a commensurate wavevector.
    pub fn wave_index(&self, k: &Vec2) -> Result<[i64; 2]> {
        let scale = self.length / (2.0 * PI);
        let raw = [k.x * scale, k.y * scale];
        let mut out = [0i64; 2];
        for a in 0..2 {
            let r = raw[a].round();
            if (raw[a] - r).abs() > 1e-9 * raw[a].abs().max(1.0) {
                return Err(Error::IncommensurateWavevector([k.x, k.y]));
            }
            out[a] = r as i64;
        }
        if self.dimension == Dimension::One && out[1] != 0 {
            return Err(Error::IncommensurateWavevector([k.x, k.y]));
        }
        Ok(out)
    }

    pub fn wave(&self, index: [i64; 2]) -> Wave {
        Wave {
            index,
            components: Vec2::new(index[0] as f64, index[1] as f64) * (2.0 * PI / self.length),
        }
    }

    pub fn wave_from(&self, k: &WaveVector) -> Result<Wave> {
        Ok(self.wave(self.wave_index(&k.components)?))
    }

    /// Exact phase `k·r_particle` reduced with integer arithmetic.
    pub fn phase(&self, index: usize, particle: usize, k: &Wave) -> f64 {
        let m = self.grid as i64;
        let mut acc = 0i64;
        for axis in 0..self.dimension.get() {
            let j = self.digit(index, self.mode(particle, axis)) as i64;
            acc += k.index[axis] * j;
        }
        2.0 * PI * acc.rem_euclid(m) as f64 / m as f64
    }
}

/// Commensurate wavevector on the grid, `k = 2π·index/L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wave {
    pub index: [i64; 2],
    pub components: Vec2,
}

impl Wave {
    pub fn norm(&self) -> f64 {
        self.components.norm()
    }

    pub fn is_zero(&self) -> bool {
        self.index == [0, 0]
    }

    pub fn unit(&self) -> Vec2 {
        if self.is_zero() {
            Vec2::new(1.0, 0.0)
        } else {
            self.components / self.norm()
        }
    }

    pub fn scaled_sum(&self, a: i64, other: &Wave, b: i64, space: &ManyBodySpace) -> Wave {
        space.wave([
            a * self.index[0] + b * other.index[0],
            a * self.index[1] + b * other.index[1],
        ])
    }

    /// Fourier shift per axis, in grid units.
    pub fn shift(&self) -> [usize; 2] {
        [
            self.index[0].unsigned_abs() as usize,
            self.index[1].unsigned_abs() as usize,
        ]
    }
}

/// Unitary DFT `F[s, j] = e^{−2πi n_s j/M}/√M`.
pub fn dft_matrix(grid: usize) -> Mat<c64> {
    let norm = 1.0 / (grid as f64).sqrt();
    Mat::from_fn(grid, grid, |s, j| {
        let m = grid as i64;
        let n = if (s as i64) < m / 2 {
            s as i64
        } else {
            s as i64 - m
        };
        let ph = -2.0 * PI * (n * j as i64).rem_euclid(m) as f64 / m as f64;
        c64::new(norm * ph.cos(), norm * ph.sin())
    })
}

/// Single-axis operator `F† diag(f(p_s)) F` in the position basis.
pub fn spectral_operator<F: Fn(f64) -> f64>(space: &ManyBodySpace, f: F) -> Mat<c64> {
    let m = space.grid;
    let dft = dft_matrix(m);
    let vals: Vec<f64> = (0..m).map(|s| f(space.momentum(s))).collect();
    Mat::from_fn(m, m, |a, b| {
        let mut acc = c64::new(0.0, 0.0);
        for s in 0..m {
            acc += dft[(s, a)].conj() * dft[(s, b)] * vals[s];
        }
        acc
    })
}

/// Embed a single-mode `M×M` operator into the full space.
pub fn embed_mode(space: &ManyBodySpace, op: &Mat<c64>, mode: usize) -> Mat<c64> {
    let d = space.total;
    let stride = space.stride(mode);
    let mut out = Mat::<c64>::zeros(d, d);
    for a in 0..d {
        let da = space.digit(a, mode);
        let base = a - da * stride;
        for db in 0..space.grid {
            let v = op[(da, db)];
            if v != c64::new(0.0, 0.0) {
                out[(a, base + db * stride)] = v;
            }
        }
    }
    out
}

/// Isometry onto the plane-wave states with every mode's Fourier index in
/// `[−n_max, n_max]` (per axis).
pub fn band_limited_basis(space: &ManyBodySpace, n_max: [usize; 2]) -> Mat<c64> {
    let modes = space.modes();
    let dim = space.dimension.get();
    let widths: Vec<usize> = (0..modes).map(|md| 2 * n_max[md % dim] + 1).collect();
    let cols: usize = widths.iter().product();
    let m = space.grid as i64;
    let norm = 1.0 / (space.total as f64).sqrt();
    let mut q = Mat::<c64>::zeros(space.total, cols);
    for c in 0..cols {
        let mut rem = c;
        let mut idx = vec![0i64; modes];
        for md in (0..modes).rev() {
            idx[md] = (rem % widths[md]) as i64 - n_max[md % dim] as i64;
            rem /= widths[md];
        }
        for a in 0..space.total {
            let mut acc = 0i64;
            for (md, n) in idx.iter().enumerate() {
                acc += n * space.digit(a, md) as i64;
            }
            let ph = 2.0 * PI * acc.rem_euclid(m) as f64 / m as f64;
            q[(a, c)] = c64::new(norm * ph.cos(), norm * ph.sin());
        }
    }
    q
}

/// Largest Fourier index (per axis, over all modes) carrying weight above
/// `rel_tol` times the largest coefficient of a position-diagonal function.
pub fn diagonal_bandwidth(space: &ManyBodySpace, values: &[f64], rel_tol: f64) -> [usize; 2] {
    let m = space.grid;
    let mut coeffs: Vec<c64> = values.iter().map(|&v| c64::new(v, 0.0)).collect();
    let dft = dft_matrix(m);
    for mode in 0..space.modes() {
        let stride = space.stride(mode);
        let mut next = vec![c64::new(0.0, 0.0); coeffs.len()];
        for a in 0..space.total {
            let da = space.digit(a, mode);
            if da != 0 {
                continue;
            }
            for s in 0..m {
                let mut acc = c64::new(0.0, 0.0);
                for j in 0..m {
                    acc += dft[(s, j)] * coeffs[a + j * stride];
                }
                next[a + s * stride] = acc;
            }
        }
        coeffs = next;
    }
    let peak = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut band = [0usize; 2];
    if peak == 0.0 {
        return band;
    }
    let dim = space.dimension.get();
    for (a, z) in coeffs.iter().enumerate() {
        if z.norm() > rel_tol * peak {
            for mode in 0..space.modes() {
                let n = space.fourier_index(space.digit(a, mode)).unsigned_abs() as usize;
                let axis = mode % dim;
                band[axis] = band[axis].max(n);
            }
        }
    }
    band
}
