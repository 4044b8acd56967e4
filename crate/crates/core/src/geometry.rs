//! Bravais cell, periodic simulation box and the wavevectors it admits.
//!
//! A box spanned by `N1·a1` and `N2·a2` admits the wavevectors
//! `k = (m1/N1)·b1 + (m2/N2)·b2`. Those with `N1 | m1` and `N2 | m2` are
//! reciprocal-lattice vectors: `e^{iK·t} = 1` for every lattice translation.
//! Grid wavevectors carry their integer indices so that phases against
//! fractional positions are evaluated as `2π(m1·f1 + m2·f2)` without
//! round-off from the Cartesian product.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec2 = Vector2<f64>;

/// Spatial dimension of a system. One-dimensional systems live on the `a1`
/// axis of a box with `N2 = 1` and `a2 ⟂ a1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Dimension {
    One,
    Two,
}

impl Dimension {
    pub fn get(self) -> usize {
        match self {
            Dimension::One => 1,
            Dimension::Two => 2,
        }
    }
}

impl TryFrom<u8> for Dimension {
    type Error = String;

    fn try_from(value: u8) -> std::result::Result<Self, Self::Error> {
        match value {
            1 => Ok(Dimension::One),
            2 => Ok(Dimension::Two),
            other => Err(format!("dimension must be 1 or 2, got {other}")),
        }
    }
}

impl From<Dimension> for u8 {
    fn from(d: Dimension) -> u8 {
        d.get() as u8
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub a1: [f64; 2],
    pub a2: [f64; 2],
    pub n1: usize,
    pub n2: usize,
    #[serde(default = "default_dimension")]
    pub dimension: Dimension,
}

fn default_dimension() -> Dimension {
    Dimension::Two
}

impl LatticeSpec {
    pub fn new(a1: [f64; 2], a2: [f64; 2], n1: usize, n2: usize) -> Self {
        Self {
            a1,
            a2,
            n1,
            n2,
            dimension: Dimension::Two,
        }
    }

    pub fn square(spacing: f64, n: usize) -> Self {
        Self::new([spacing, 0.0], [0.0, spacing], n, n)
    }

    pub fn triangular(spacing: f64, n: usize) -> Self {
        Self::new(
            [spacing, 0.0],
            [0.5 * spacing, 0.5 * 3f64.sqrt() * spacing],
            n,
            n,
        )
    }

    /// A ring of `n` cells of length `spacing` along x.
    pub fn chain(spacing: f64, n: usize) -> Self {
        Self {
            a1: [spacing, 0.0],
            a2: [0.0, spacing],
            n1: n,
            n2: 1,
            dimension: Dimension::One,
        }
    }

    pub fn a1(&self) -> Vec2 {
        Vec2::new(self.a1[0], self.a1[1])
    }

    pub fn a2(&self) -> Vec2 {
        Vec2::new(self.a2[0], self.a2[1])
    }

    fn cross(&self) -> f64 {
        cross(&self.a1(), &self.a2())
    }
}

pub fn cross(u: &Vec2, v: &Vec2) -> f64 {
    u.x * v.y - u.y * v.x
}

/// Periodic box spanned by `edge1 = N1·a1` and `edge2 = N2·a2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationBox {
    pub lattice: LatticeSpec,
    pub edge1: Vec2,
    pub edge2: Vec2,
    pub area: f64,
    to_frac: Matrix2<f64>,
}

pub fn build_box(spec: &LatticeSpec) -> Result<SimulationBox> {
    if spec.n1 == 0 || spec.n2 == 0 {
        return Err(Error::InvalidLattice(format!(
            "repetition counts must be positive, got ({}, {})",
            spec.n1, spec.n2
        )));
    }
    let a_cross = spec.cross();
    let scale = spec.a1().norm() * spec.a2().norm();
    if !a_cross.is_finite() || a_cross.abs() <= 1e-12 * scale || scale == 0.0 {
        return Err(Error::DegenerateCell { cross: a_cross });
    }
    if spec.dimension == Dimension::One {
        if spec.n2 != 1 {
            return Err(Error::InvalidLattice(format!(
                "a one-dimensional lattice needs n2 = 1, got {}",
                spec.n2
            )));
        }
        if spec.a1().dot(&spec.a2()).abs() > 1e-12 * scale {
            return Err(Error::InvalidLattice(
                "a one-dimensional lattice needs a2 orthogonal to a1".into(),
            ));
        }
    }
    let edge1 = spec.a1() * spec.n1 as f64;
    let edge2 = spec.a2() * spec.n2 as f64;
    let cell = Matrix2::from_columns(&[edge1, edge2]);
    let to_frac = cell
        .try_inverse()
        .ok_or(Error::DegenerateCell { cross: a_cross })?;
    Ok(SimulationBox {
        lattice: spec.clone(),
        edge1,
        edge2,
        area: cross(&edge1, &edge2).abs(),
        to_frac,
    })
}

impl SimulationBox {
    pub fn dimension(&self) -> Dimension {
        self.lattice.dimension
    }

    pub fn n1(&self) -> usize {
        self.lattice.n1
    }

    pub fn n2(&self) -> usize {
        self.lattice.n2
    }

    pub fn to_cartesian(&self, frac: &Vec2) -> Vec2 {
        self.edge1 * frac.x + self.edge2 * frac.y
    }

    pub fn to_fractional(&self, cart: &Vec2) -> Vec2 {
        self.to_frac * cart
    }

    /// Wrap fractional coordinates into `[0, 1)`.
    pub fn wrap_fractional(&self, frac: &Vec2) -> Vec2 {
        Vec2::new(wrap_unit(frac.x), wrap_unit(frac.y))
    }

    /// Minimal-image displacement: fractional coordinates in `[−1/2, 1/2)`.
    pub fn min_image(&self, delta: &Vec2) -> Vec2 {
        let f = self.to_fractional(delta);
        let wrapped = Vec2::new(half_wrap(f.x), half_wrap(f.y));
        self.to_cartesian(&wrapped)
    }

    pub fn reciprocal_basis(&self) -> (WaveVector, WaveVector) {
        let (b1, b2) = reciprocal_vectors(&self.lattice);
        (
            WaveVector {
                components: b1,
                class: WaveClass::Reciprocal,
                index: Some([self.n1() as i64, 0]),
            },
            WaveVector {
                components: b2,
                class: WaveClass::Reciprocal,
                index: Some([0, self.n2() as i64]),
            },
        )
    }

    /// The allowed wavevector with box indices `(m1, m2)`.
    pub fn grid_wavevector(&self, m1: i64, m2: i64) -> WaveVector {
        let (b1, b2) = reciprocal_vectors(&self.lattice);
        let components = b1 * (m1 as f64 / self.n1() as f64) + b2 * (m2 as f64 / self.n2() as f64);
        let class = if m1.rem_euclid(self.n1() as i64) == 0 && m2.rem_euclid(self.n2() as i64) == 0
        {
            WaveClass::Reciprocal
        } else {
            WaveClass::AllowedNonReciprocal
        };
        WaveVector {
            components,
            class,
            index: Some([m1, m2]),
        }
    }

    /// Classify an arbitrary Cartesian wavevector against this box.
    pub fn classify(&self, k: Vec2) -> WaveVector {
        let m1 = k.dot(&self.edge1) / (2.0 * PI);
        let m2 = k.dot(&self.edge2) / (2.0 * PI);
        let near = |x: f64| (x - x.round()).abs() <= 1e-9 * x.abs().max(1.0);
        if near(m1) && near(m2) {
            let mut w = self.grid_wavevector(m1.round() as i64, m2.round() as i64);
            w.components = k;
            w
        } else {
            WaveVector {
                components: k,
                class: WaveClass::Generic,
                index: None,
            }
        }
    }

    /// Every lattice translation `n1·a1 + n2·a2` with `0 ≤ n_i < N_i`.
    pub fn cell_translations(&self) -> Vec<Vec2> {
        let mut out = Vec::with_capacity(self.n1() * self.n2());
        for i in 0..self.n1() {
            for j in 0..self.n2() {
                out.push(self.lattice.a1() * i as f64 + self.lattice.a2() * j as f64);
            }
        }
        out
    }
}

fn wrap_unit(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

fn half_wrap(x: f64) -> f64 {
    x - (x + 0.5).floor()
}

fn reciprocal_vectors(spec: &LatticeSpec) -> (Vec2, Vec2) {
    let (a1, a2) = (spec.a1(), spec.a2());
    let c = cross(&a1, &a2);
    let b1 = Vec2::new(a2.y, -a2.x) * (2.0 * PI / c);
    let b2 = Vec2::new(-a1.y, a1.x) * (2.0 * PI / c);
    (b1, b2)
}

/// `a_i · b_j = 2π δ_ij`.
pub fn reciprocal_basis(spec: &LatticeSpec) -> Result<(WaveVector, WaveVector)> {
    let bx = build_box(spec)?;
    Ok(bx.reciprocal_basis())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveClass {
    Reciprocal,
    AllowedNonReciprocal,
    Generic,
}

impl WaveClass {
    pub fn label(self) -> &'static str {
        match self {
            WaveClass::Reciprocal => "reciprocal",
            WaveClass::AllowedNonReciprocal => "allowed",
            WaveClass::Generic => "generic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveVector {
    pub components: Vec2,
    pub class: WaveClass,
    /// Box indices `(m1, m2)` for grid wavevectors.
    pub index: Option<[i64; 2]>,
}

impl WaveVector {
    pub fn norm(&self) -> f64 {
        self.components.norm()
    }

    pub fn is_zero(&self) -> bool {
        match self.index {
            Some([0, 0]) => true,
            Some(_) => false,
            None => self.components.norm() == 0.0,
        }
    }

    /// Phase `k·r` for a particle at fractional position `frac`.
    pub fn phase(&self, bx: &SimulationBox, frac: &Vec2) -> f64 {
        match self.index {
            Some([m1, m2]) => 2.0 * PI * (m1 as f64 * frac.x + m2 as f64 * frac.y),
            None => self.components.dot(&bx.to_cartesian(frac)),
        }
    }

    /// Integer combination `a·self + b·other` of two grid wavevectors.
    pub fn combine(&self, a: i64, other: &WaveVector, b: i64, bx: &SimulationBox) -> WaveVector {
        match (self.index, other.index) {
            (Some([p1, p2]), Some([q1, q2])) => {
                bx.grid_wavevector(a * p1 + b * q1, a * p2 + b * q2)
            }
            _ => bx.classify(self.components * a as f64 + other.components * b as f64),
        }
    }

    pub fn neg(&self) -> WaveVector {
        WaveVector {
            components: -self.components,
            class: self.class,
            index: self.index.map(|[a, b]| [-a, -b]),
        }
    }
}

/// All allowed wavevectors with `|m1|, |m2| ≤ max_order·max(N1, N2)`.
/// One-dimensional boxes only enumerate `m2 = 0`.
pub fn wavevector_grid(bx: &SimulationBox, max_order: usize) -> Vec<WaveVector> {
    let max_order = max_order.max(1);
    let reach = (max_order * bx.n1().max(bx.n2())) as i64;
    let m2_reach = match bx.dimension() {
        Dimension::One => 0,
        Dimension::Two => reach,
    };
    let mut out = Vec::new();
    for m1 in -reach..=reach {
        for m2 in -m2_reach..=m2_reach {
            out.push(bx.grid_wavevector(m1, m2));
        }
    }
    out
}

/// Allowed wavevectors of the first zone of the box grid, `m_i ∈ (−N_i/2, N_i/2]`.
pub fn first_zone(bx: &SimulationBox) -> Vec<WaveVector> {
    let range = |n: usize| {
        let n = n as i64;
        (-(n - 1) / 2)..=(n / 2)
    };
    let m2s: Vec<i64> = match bx.dimension() {
        Dimension::One => vec![0],
        Dimension::Two => range(bx.n2()).collect(),
    };
    let mut out = Vec::new();
    for m1 in range(bx.n1()) {
        for &m2 in &m2s {
            out.push(bx.grid_wavevector(m1, m2));
        }
    }
    out
}

/// Ideal Bravais sites, `per_cell` particles per cell spread along the
/// cell diagonal, as fractional box coordinates.
pub fn lattice_sites(bx: &SimulationBox, per_cell: usize) -> Vec<Vec2> {
    let (n1, n2) = (bx.n1() as f64, bx.n2() as f64);
    let mut out = Vec::with_capacity(bx.n1() * bx.n2() * per_cell);
    for i in 0..bx.n1() {
        for j in 0..bx.n2() {
            for b in 0..per_cell {
                let shift = b as f64 / per_cell as f64;
                let f = match bx.dimension() {
                    Dimension::One => Vec2::new((i as f64 + shift) / n1, 0.0),
                    Dimension::Two => Vec2::new((i as f64 + shift) / n1, (j as f64 + shift) / n2),
                };
                out.push(f);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_box_area() {
        let bx = build_box(&LatticeSpec::square(1.0, 4)).unwrap();
        assert_eq!(bx.area, 16.0);
        assert_eq!(bx.edge1, Vec2::new(4.0, 0.0));
    }

    #[test]
    fn triangular_box_area() {
        let bx = build_box(&LatticeSpec::triangular(1.0, 2)).unwrap();
        let expected = 4.0 * 3f64.sqrt() / 2.0;
        assert!((bx.area - expected).abs() < 1e-14);
    }

    #[test]
    fn collinear_cell_is_degenerate() {
        let spec = LatticeSpec::new([1.0, 0.0], [2.0, 0.0], 2, 2);
        assert!(matches!(
            build_box(&spec),
            Err(Error::DegenerateCell { .. })
        ));
        assert!(matches!(
            reciprocal_basis(&spec),
            Err(Error::DegenerateCell { .. })
        ));
    }

    #[test]
    fn zero_repetitions_rejected() {
        let spec = LatticeSpec::new([1.0, 0.0], [0.0, 1.0], 0, 2);
        assert!(matches!(build_box(&spec), Err(Error::InvalidLattice(_))));
    }

    #[test]
    fn one_dimensional_constraints() {
        let mut spec = LatticeSpec::chain(1.0, 4);
        assert!(build_box(&spec).is_ok());
        spec.n2 = 2;
        assert!(build_box(&spec).is_err());
        let skew = LatticeSpec {
            a2: [0.5, 1.0],
            ..LatticeSpec::chain(1.0, 4)
        };
        assert!(build_box(&skew).is_err());
    }

    #[test]
    fn square_reciprocal_basis() {
        let (b1, b2) = reciprocal_basis(&LatticeSpec::square(1.0, 3)).unwrap();
        assert!((b1.components - Vec2::new(2.0 * PI, 0.0)).norm() < 1e-12);
        assert!((b2.components - Vec2::new(0.0, 2.0 * PI)).norm() < 1e-12);
    }

    #[test]
    fn triangular_reciprocal_basis() {
        let spec = LatticeSpec::triangular(1.0, 2);
        let (b1, b2) = reciprocal_basis(&spec).unwrap();
        let s3 = 3f64.sqrt();
        let e1 = Vec2::new(1.0, -1.0 / s3) * (2.0 * PI);
        let e2 = Vec2::new(0.0, 2.0 / s3) * (2.0 * PI);
        assert!((b1.components - e1).norm() < 1e-12 * e1.norm());
        assert!((b2.components - e2).norm() < 1e-12 * e2.norm());
        for (a, b, d) in [
            (spec.a1(), &b1, 1.0),
            (spec.a1(), &b2, 0.0),
            (spec.a2(), &b1, 0.0),
            (spec.a2(), &b2, 1.0),
        ] {
            assert!((a.dot(&b.components) - 2.0 * PI * d).abs() < 1e-12 * 2.0 * PI);
        }
    }

    #[test]
    fn grid_classification_examples() {
        let bx = build_box(&LatticeSpec::square(1.0, 2)).unwrap();
        let grid = wavevector_grid(&bx, 1);
        let find = |m1, m2| grid.iter().find(|w| w.index == Some([m1, m2])).unwrap();
        let k = find(2, 0);
        assert_eq!(k.class, WaveClass::Reciprocal);
        assert!((k.components - Vec2::new(2.0 * PI, 0.0)).norm() < 1e-12);
        let k = find(1, 0);
        assert_eq!(k.class, WaveClass::AllowedNonReciprocal);
        assert!((k.components - Vec2::new(PI, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn basis_vectors_reappear_in_grid() {
        let bx = build_box(&LatticeSpec::triangular(1.3, 3)).unwrap();
        let (b1, b2) = bx.reciprocal_basis();
        let grid = wavevector_grid(&bx, 1);
        for b in [b1, b2] {
            let hit = grid
                .iter()
                .find(|w| (w.components - b.components).norm() < 1e-12)
                .expect("basis vector missing from grid");
            assert_eq!(hit.class, WaveClass::Reciprocal);
        }
    }

    #[test]
    fn min_image_examples() {
        let bx = build_box(&LatticeSpec::square(1.0, 4)).unwrap();
        let d = bx.min_image(&Vec2::new(3.5, 0.0));
        assert!((d - Vec2::new(-0.5, 0.0)).norm() < 1e-15);
        assert_eq!(bx.min_image(&Vec2::zeros()), Vec2::zeros());
    }

    #[test]
    fn phase_of_reciprocal_vector_on_translations() {
        let bx = build_box(&LatticeSpec::triangular(1.0, 3)).unwrap();
        for w in wavevector_grid(&bx, 1)
            .into_iter()
            .filter(|w| w.class == WaveClass::Reciprocal)
        {
            for t in bx.cell_translations() {
                let theta = w.components.dot(&t);
                let (c, s) = (theta.cos(), theta.sin());
                assert!(((c - 1.0).powi(2) + s * s).sqrt() < 1e-10);
            }
        }
    }

    #[test]
    fn first_zone_counts() {
        let bx = build_box(&LatticeSpec::triangular(1.0, 8)).unwrap();
        let zone = first_zone(&bx);
        assert_eq!(zone.len(), 64);
        assert_eq!(zone.iter().filter(|w| w.is_zero()).count(), 1);
        let chain = build_box(&LatticeSpec::chain(1.0, 5)).unwrap();
        assert_eq!(first_zone(&chain).len(), 5);
    }

    #[test]
    fn wrap_handles_negative_roundoff() {
        let bx = build_box(&LatticeSpec::square(1.0, 2)).unwrap();
        let w = bx.wrap_fractional(&Vec2::new(-1e-18, 1.0));
        assert!(w.x >= 0.0 && w.x < 1.0);
        assert_eq!(w.y, 0.0);
    }
}
