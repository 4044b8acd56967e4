use faer::{c64, Mat};

use crate::error::{Error, Result};
use crate::geometry::{Dimension, Vec2, WaveVector};
use crate::potentials::PairPotential;

use super::space::{embed_mode, spectral_operator, ManyBodySpace, Wave, HBAR, MASS};

pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub mat: Mat<c64>,
    pub hermitian: bool,
}

impl OperatorMatrix {
    /// Wrap a matrix; a `hermitian` flag is verified against
    /// [`HERMITIAN_TOL`].
    pub fn new(mat: Mat<c64>, hermitian: bool) -> Result<Self> {
        if hermitian {
            let defect = hermiticity_defect(&mat);
            if defect >= HERMITIAN_TOL {
                return Err(Error::InvalidSpace(format!(
                    "operator flagged hermitian has defect {defect:e}"
                )));
            }
        }
        Ok(Self { mat, hermitian })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }
}

pub fn hermiticity_defect(m: &Mat<c64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_entry(m: &Mat<c64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

pub fn diagonal(values: &[c64]) -> Mat<c64> {
    let n = values.len();
    let mut m = Mat::<c64>::zeros(n, n);
    for (i, v) in values.iter().enumerate() {
        m[(i, i)] = *v;
    }
    m
}

pub fn real_diagonal(values: &[f64]) -> Mat<c64> {
    diagonal(&values.iter().map(|&v| c64::new(v, 0.0)).collect::<Vec<_>>())
}

pub fn scaled(m: &Mat<c64>, f: f64) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * f)
}

pub fn commutator(a: &Mat<c64>, b: &Mat<c64>) -> Mat<c64> {
    a * b - b * a
}

/// `[A, D]` for a position-diagonal `D`.
pub fn commutator_with_diagonal(a: &Mat<c64>, d: &[c64]) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * (d[j] - d[i]))
}

/// `Tr(A·B)`.
pub fn trace_product(a: &Mat<c64>, b: &Mat<c64>) -> c64 {
    let n = a.nrows();
    let mut acc = c64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// `e^{i k·r_particle}` on the position diagonal.
pub fn phase_diagonal(space: &ManyBodySpace, particle: usize, k: &Wave) -> Vec<c64> {
    (0..space.total)
        .map(|a| c64::from_polar(1.0, space.phase(a, particle, k)))
        .collect()
}

/// `Σ_i e^{i k·r_i}`.
pub fn collective_phase(space: &ManyBodySpace, k: &Wave) -> Vec<c64> {
    (0..space.total)
        .map(|a| {
            (0..space.particles)
                .map(|p| c64::from_polar(1.0, space.phase(a, p, k)))
                .sum()
        })
        .collect()
}

/// Density operator `ρ̂_q = Σ_i e^{−i q·r_i}`.
pub fn density_diagonal(space: &ManyBodySpace, q: &Wave) -> Vec<c64> {
    collective_phase(space, q)
        .into_iter()
        .map(|z| z.conj())
        .collect()
}

fn trig_diagonal(space: &ManyBodySpace, particle: usize, k: &Wave, f: fn(f64) -> f64) -> Vec<f64> {
    (0..space.total)
        .map(|a| f(space.phase(a, particle, k)))
        .collect()
}

pub fn sin_diagonal(space: &ManyBodySpace, particle: usize, k: &Wave) -> Vec<f64> {
    trig_diagonal(space, particle, k, f64::sin)
}

pub fn cos_diagonal(space: &ManyBodySpace, particle: usize, k: &Wave) -> Vec<f64> {
    trig_diagonal(space, particle, k, f64::cos)
}

/// `U = ½ Σ_{i≠j} Φ(r_i, r_j)` on the position diagonal.
pub fn potential_diagonal(space: &ManyBodySpace, pot: &PairPotential) -> Result<Vec<f64>> {
    let form = space.periodization;
    let mut out = Vec::with_capacity(space.total);
    for a in 0..space.total {
        let r = space.positions(a);
        let mut u = 0.0;
        for i in 0..r.len() {
            for j in 0..r.len() {
                if i != j {
                    u += pot.evaluate_with(&r[i], &r[j], &space.bx, form);
                }
            }
        }
        if !u.is_finite() {
            return Err(Error::NonFiniteValue {
                context: format!("potential at basis state {a}"),
            });
        }
        out.push(0.5 * u);
    }
    Ok(out)
}

/// Single-axis spectral momentum `F† diag(ħ 2πn/L) F`.
pub fn momentum_1d(space: &ManyBodySpace) -> Mat<c64> {
    spectral_operator(space, |p| p)
}

pub fn momentum(space: &ManyBodySpace, particle: usize, axis: usize) -> Mat<c64> {
    embed_mode(space, &momentum_1d(space), space.mode(particle, axis))
}

/// `n·p̂_particle`.
pub fn projected_momentum(space: &ManyBodySpace, particle: usize, n: &Vec2) -> Mat<c64> {
    let p1 = momentum_1d(space);
    let mut out = Mat::<c64>::zeros(space.total, space.total);
    for axis in 0..space.dimension.get() {
        let w = n[axis];
        if w != 0.0 {
            out += scaled(&embed_mode(space, &p1, space.mode(particle, axis)), w);
        }
    }
    out
}

/// `Σ p̂²/2m` with the spectral square on each axis.
pub fn kinetic(space: &ManyBodySpace) -> Mat<c64> {
    let t1 = spectral_operator(space, |p| p * p / (2.0 * MASS));
    let mut out = Mat::<c64>::zeros(space.total, space.total);
    for mode in 0..space.modes() {
        out += embed_mode(space, &t1, mode);
    }
    out
}

pub fn hamiltonian(space: &ManyBodySpace, pot: &PairPotential) -> Result<Mat<c64>> {
    let mut h = kinetic(space);
    for (a, u) in potential_diagonal(space, pot)?.into_iter().enumerate() {
        h[(a, a)] += c64::new(u, 0.0);
    }
    Ok(h)
}

/// `½ Σ_i {A_i, sin(k·r_i)}` for per-particle operators `A_i`.
fn symmetrized_with_sin(space: &ManyBodySpace, k: &Wave, ops: &[Mat<c64>]) -> Mat<c64> {
    let mut out = Mat::<c64>::zeros(space.total, space.total);
    for (i, a) in ops.iter().enumerate() {
        let s = sin_diagonal(space, i, k);
        for col in 0..space.total {
            for row in 0..space.total {
                let v = a[(row, col)];
                if v != c64::new(0.0, 0.0) {
                    out[(row, col)] += v * (0.5 * (s[row] + s[col]));
                }
            }
        }
    }
    out
}

/// `Ĉ = ½ Σ_i [(k̂·p̂_i) sin(k·r̂_i) + sin(k·r̂_i)(k̂·p̂_i)]`.
pub fn c_operator(space: &ManyBodySpace, k: &Wave) -> Mat<c64> {
    let n = k.unit();
    let ops: Vec<Mat<c64>> = (0..space.particles)
        .map(|i| projected_momentum(space, i, &n))
        .collect();
    symmetrized_with_sin(space, k, &ops)
}

/// Cartesian component `axis` of the vector operator `Ĉ`.
pub fn c_component(space: &ManyBodySpace, k: &Wave, axis: usize) -> Mat<c64> {
    let ops: Vec<Mat<c64>> = (0..space.particles)
        .map(|i| momentum(space, i, axis))
        .collect();
    symmetrized_with_sin(space, k, &ops)
}

/// Operators shared by the identities.
pub struct FundamentalOperators {
    /// Coordinates per mode, on the diagonal.
    pub positions: Vec<Vec<f64>>,
    /// Momentum per mode.
    pub momenta: Vec<Mat<c64>>,
    /// `e^{i k·r_i}` per requested `k`, per particle.
    pub phases: Vec<(Wave, Vec<Vec<c64>>)>,
}

pub fn fundamental_operators(
    space: &ManyBodySpace,
    ks: &[WaveVector],
) -> Result<FundamentalOperators> {
    let h = space.spacing();
    let positions = (0..space.modes())
        .map(|mode| {
            (0..space.total)
                .map(|a| space.digit(a, mode) as f64 * h)
                .collect()
        })
        .collect();
    let p1 = momentum_1d(space);
    let momenta = (0..space.modes())
        .map(|mode| embed_mode(space, &p1, mode))
        .collect();
    let mut phases = Vec::with_capacity(ks.len());
    for k in ks {
        let w = space.wave_from(k)?;
        let per = (0..space.particles)
            .map(|p| phase_diagonal(space, p, &w))
            .collect();
        phases.push((w, per));
    }
    Ok(FundamentalOperators {
        positions,
        momenta,
        phases,
    })
}

pub struct TheoremOperators {
    pub k: Wave,
    pub reciprocal: Wave,
    /// `Â = Σ_i e^{i(k+K)·r_i}` (diagonal).
    pub a: Vec<c64>,
    /// `Ĉ` contracted along `k̂`.
    pub c: OperatorMatrix,
    /// Cartesian components of `Ĉ`.
    pub c_components: Vec<OperatorMatrix>,
    pub h: OperatorMatrix,
    pub potential: Vec<f64>,
}

pub fn theorem_operators(
    space: &ManyBodySpace,
    pot: &PairPotential,
    k: &Wave,
    big_k: &Wave,
) -> Result<TheoremOperators> {
    if k.is_zero() {
        return Err(Error::InvalidRange("k must be nonzero".into()));
    }
    let kk = k.scaled_sum(1, big_k, 1, space);
    let a = collective_phase(space, &kk);
    let c = OperatorMatrix::new(c_operator(space, k), true)?;
    let c_components = (0..space.dimension.get())
        .map(|axis| OperatorMatrix::new(c_component(space, k, axis), true))
        .collect::<Result<Vec<_>>>()?;
    let potential = potential_diagonal(space, pot)?;
    let mut h = kinetic(space);
    for (i, u) in potential.iter().enumerate() {
        h[(i, i)] += c64::new(*u, 0.0);
    }
    Ok(TheoremOperators {
        k: *k,
        reciprocal: *big_k,
        a,
        c,
        c_components,
        h: OperatorMatrix::new(h, true)?,
        potential,
    })
}

/// Diagonal right sides of the potential double commutator, assembled from
/// derivative bundles at the grid points.
#[derive(Debug, Clone)]
pub struct PotentialForms {
    /// Full Laplacians and `∇_i·∇_j`, as printed.
    pub potential_double_printed: Vec<f64>,
    /// Second derivatives along `k̂` only.
    pub general: Vec<f64>,
    /// Local reduction, as printed.
    pub local_printed: Vec<f64>,
    pub local: Vec<f64>,
}

pub fn potential_forms(space: &ManyBodySpace, pot: &PairPotential, k: &Wave) -> PotentialForms {
    let n = k.unit();
    let kv = k.components;
    let pref = 0.5 * HBAR * HBAR;
    let mut out = PotentialForms {
        potential_double_printed: Vec::with_capacity(space.total),
        general: Vec::with_capacity(space.total),
        local_printed: Vec::with_capacity(space.total),
        local: Vec::with_capacity(space.total),
    };
    for a in 0..space.total {
        let r = space.positions(a);
        let ph: Vec<f64> = (0..space.particles).map(|p| space.phase(a, p, k)).collect();
        let (mut p22, mut d22, mut p23, mut d23) = (0.0, 0.0, 0.0, 0.0);
        for i in 0..r.len() {
            for j in 0..r.len() {
                if i == j {
                    continue;
                }
                let b = pot.derivatives_with(&r[i], &r[j], &space.bx, space.periodization);
                let (si, ci, sj, cj) = (ph[i].sin(), ph[i].cos(), ph[j].sin(), ph[j].cos());
                let first = si * ci * kv.dot(&b.grad1) + sj * cj * kv.dot(&b.grad2);
                let (h11, h22, h12) = b.directional(&n);
                p22 += first + si * si * b.lap1 + sj * sj * b.lap2 + 2.0 * si * sj * b.cross;
                d22 += first + si * si * h11 + sj * sj * h22 + 2.0 * si * sj * h12;
                let half_sin2 = 0.5 * ((2.0 * ph[i]).sin() - (2.0 * ph[j]).sin());
                let diff2 = (si - sj) * (si - sj);
                p23 += half_sin2 * kv.dot(&b.grad1) + diff2 * b.lap1;
                d23 += half_sin2 * kv.dot(&b.grad1) + diff2 * h11;
            }
        }
        out.potential_double_printed.push(pref * p22);
        out.general.push(pref * d22);
        out.local_printed.push(pref * p23);
        out.local.push(pref * d23);
    }
    out
}

/// Terms of the kinetic double commutator, for the coefficient audit.
/// Order: `(k·p)²`, `k² p·cos²·p`, `k² p∥cos²p∥` (two dimensions only),
/// `k⁴ sin²`, `k⁴·1`, each summed over particles and divided by `m`.
pub fn kinetic_basis(space: &ManyBodySpace, k: &Wave) -> Vec<(&'static str, Mat<c64>)> {
    let n = k.unit();
    let k2 = k.norm().powi(2);
    let hb2 = HBAR * HBAR;
    let d = space.total;
    let mut kp2 = Mat::<c64>::zeros(d, d);
    let mut pcp = Mat::<c64>::zeros(d, d);
    let mut par = Mat::<c64>::zeros(d, d);
    let mut sin2 = vec![0.0; d];
    for i in 0..space.particles {
        let cos2: Vec<c64> = cos_diagonal(space, i, k)
            .into_iter()
            .map(|c| c64::new(c * c, 0.0))
            .collect();
        let pk = projected_momentum(space, i, &n);
        kp2 += &pk * &pk;
        let with_cos = |p: &Mat<c64>| {
            let mut pc = p.clone();
            for col in 0..d {
                for row in 0..d {
                    pc[(row, col)] *= cos2[col];
                }
            }
            &pc * p
        };
        par += with_cos(&pk);
        for axis in 0..space.dimension.get() {
            pcp += with_cos(&momentum(space, i, axis));
        }
        for (a, s) in sin_diagonal(space, i, k).into_iter().enumerate() {
            sin2[a] += s * s;
        }
    }
    let scale = |m: Mat<c64>, f: f64| scaled(&m, f / MASS);
    let mut basis = vec![
        ("(k.p)^2", scale(kp2, hb2 * k2)),
        ("k^2 p.cos^2.p", scale(pcp, hb2 * k2)),
    ];
    if space.dimension == Dimension::Two {
        basis.push(("k^2 p_par cos^2 p_par", scale(par, hb2 * k2)));
    }
    basis.push((
        "k^4 sin^2",
        scale(real_diagonal(&sin2), hb2 * hb2 * k2 * k2),
    ));
    let ones = vec![space.particles as f64; d];
    basis.push(("k^4", scale(real_diagonal(&ones), hb2 * hb2 * k2 * k2)));
    basis
}

/// Coefficients of [`kinetic_basis`] in the printed reading.
pub fn printed_kinetic_coefficients(dimension: Dimension) -> Vec<f64> {
    match dimension {
        Dimension::One => vec![1.0, 1.0, 0.25, 0.0],
        Dimension::Two => vec![1.0, 1.0, 0.0, 0.25, 0.0],
    }
}

/// Coefficients of the exact operator identity for `Ĉ` contracted along `k̂`.
pub fn derived_kinetic_coefficients(dimension: Dimension) -> Vec<f64> {
    match dimension {
        Dimension::One => vec![1.0, 1.0, -0.75, 0.5],
        Dimension::Two => vec![1.0, 0.0, 1.0, -0.75, 0.5],
    }
}

pub fn combine(basis: &[(&'static str, Mat<c64>)], coeffs: &[f64]) -> Mat<c64> {
    let d = basis[0].1.nrows();
    let mut out = Mat::<c64>::zeros(d, d);
    for ((_, m), c) in basis.iter().zip(coeffs) {
        if *c != 0.0 {
            out += scaled(m, *c);
        }
    }
    out
}
