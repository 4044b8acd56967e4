//! Pair potentials `Φ(r1, r2)` and their first and second derivatives.
//!
//! Local potentials depend on `r1 − r2` only. The nonlocal family is a
//! genuine two-argument function: a Gaussian core plus a pair term whose
//! strength is modulated by the pair's center of mass through a
//! reciprocal-lattice wave, `g·cos(G·(r1 + r2))·exp(−|r1 − r2|²/σ_c²)`.
//! With a commensurate `G` the potential is single-valued on the periodic box.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Dimension, SimulationBox, Vec2, WaveClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    Local,
    NonlocalTwoPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairPotential {
    /// `φ(r) = ε·exp(−r²/σ²)`.
    GaussianCore { epsilon: f64, sigma: f64 },
    /// Gaussian core plus `g·cos(G·(r1 + r2))·exp(−|r1 − r2|²/σ_c²)`.
    SubstrateCoupled {
        epsilon: f64,
        sigma: f64,
        coupling: f64,
        wavevector: [f64; 2],
        coupling_sigma: f64,
    },
    /// `φ(r) = κr²/2`.
    HarmonicPair { kappa: f64 },
}

/// How a pair separation is reduced on a periodic box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Periodization {
    MinimumImage,
    /// Sum over all periodic images; smooth on the torus. Harmonic pairs do
    /// not decay and fall back to the minimum image.
    ImageSum,
}

/// First and second derivatives of `Φ(r1, r2)` with respect to both arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeBundle {
    pub grad1: Vec2,
    pub grad2: Vec2,
    pub hess11: Matrix2<f64>,
    pub hess22: Matrix2<f64>,
    /// `∂²Φ/∂r1_a∂r2_b`.
    pub hess12: Matrix2<f64>,
    pub dimension: Dimension,
    pub lap1: f64,
    pub lap2: f64,
    /// `∇1·∇2 Φ`.
    pub cross: f64,
}

impl DerivativeBundle {
    fn assemble(
        grad1: Vec2,
        grad2: Vec2,
        hess11: Matrix2<f64>,
        hess22: Matrix2<f64>,
        hess12: Matrix2<f64>,
        dimension: Dimension,
    ) -> Self {
        let tr = |h: &Matrix2<f64>| match dimension {
            Dimension::One => h[(0, 0)],
            Dimension::Two => h[(0, 0)] + h[(1, 1)],
        };
        let (grad1, grad2) = match dimension {
            Dimension::One => (Vec2::new(grad1.x, 0.0), Vec2::new(grad2.x, 0.0)),
            Dimension::Two => (grad1, grad2),
        };
        Self {
            grad1,
            grad2,
            hess11,
            hess22,
            hess12,
            dimension,
            lap1: tr(&hess11),
            lap2: tr(&hess22),
            cross: tr(&hess12),
        }
    }

    fn zero(dimension: Dimension) -> Self {
        let z = Matrix2::zeros();
        Self::assemble(Vec2::zeros(), Vec2::zeros(), z, z, z, dimension)
    }

    fn add(&self, other: &Self) -> Self {
        Self::assemble(
            self.grad1 + other.grad1,
            self.grad2 + other.grad2,
            self.hess11 + other.hess11,
            self.hess22 + other.hess22,
            self.hess12 + other.hess12,
            self.dimension,
        )
    }

    /// Second derivatives projected on a unit direction `n`:
    /// `(n·∇1)²Φ`, `(n·∇2)²Φ`, `(n·∇1)(n·∇2)Φ`.
    pub fn directional(&self, n: &Vec2) -> (f64, f64, f64) {
        (
            n.dot(&(self.hess11 * n)),
            n.dot(&(self.hess22 * n)),
            n.dot(&(self.hess12 * n)),
        )
    }
}

/// Value, gradient and Hessian (in `d = r1 − r2`) of `A·exp(−|d|²/w²)`.
fn gaussian_radial(amplitude: f64, width: f64, d: &Vec2) -> (f64, Vec2, Matrix2<f64>) {
    let w2 = width * width;
    let f = amplitude * (-d.norm_squared() / w2).exp();
    let grad = d * (-2.0 * f / w2);
    let hess = (d * d.transpose()) * (4.0 * f / (w2 * w2)) - Matrix2::identity() * (2.0 * f / w2);
    (f, grad, hess)
}

impl PairPotential {
    pub fn zero() -> Self {
        PairPotential::GaussianCore {
            epsilon: 0.0,
            sigma: 1.0,
        }
    }

    pub fn kind(&self) -> PotentialKind {
        match self {
            PairPotential::GaussianCore { .. } | PairPotential::HarmonicPair { .. } => {
                PotentialKind::Local
            }
            PairPotential::SubstrateCoupled { .. } => PotentialKind::NonlocalTwoPoint,
        }
    }

    pub fn is_local(&self) -> bool {
        self.kind() == PotentialKind::Local
    }

    pub fn family(&self) -> &'static str {
        match self {
            PairPotential::GaussianCore { .. } => "gaussian_core",
            PairPotential::SubstrateCoupled { .. } => "substrate_coupled",
            PairPotential::HarmonicPair { .. } => "harmonic_pair",
        }
    }

    /// True when `Φ ≡ 0`.
    pub fn is_zero(&self) -> bool {
        match *self {
            PairPotential::GaussianCore { epsilon, .. } => epsilon == 0.0,
            PairPotential::SubstrateCoupled {
                epsilon, coupling, ..
            } => epsilon == 0.0 && coupling == 0.0,
            PairPotential::HarmonicPair { kappa } => kappa == 0.0,
        }
    }

    /// Separation beyond which the potential is below `1e-17` of its scale.
    /// `None` for potentials that do not decay.
    pub fn decay_range(&self) -> Option<f64> {
        let reach = 40f64.sqrt();
        match *self {
            PairPotential::GaussianCore { sigma, .. } => Some(reach * sigma),
            PairPotential::SubstrateCoupled {
                sigma,
                coupling_sigma,
                ..
            } => Some(reach * sigma.max(coupling_sigma)),
            PairPotential::HarmonicPair { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| {
            Err(Error::ConfigInvalid {
                field: format!("potential.{what}"),
                reason: "must be finite and positive".into(),
            })
        };
        match *self {
            PairPotential::GaussianCore { epsilon, sigma } => {
                if !epsilon.is_finite() {
                    return bad("epsilon");
                }
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return bad("sigma");
                }
            }
            PairPotential::SubstrateCoupled {
                epsilon,
                sigma,
                coupling,
                wavevector,
                coupling_sigma,
            } => {
                if !epsilon.is_finite() || !coupling.is_finite() {
                    return Err(Error::ConfigInvalid {
                        field: "potential.epsilon/coupling".into(),
                        reason: "must be finite".into(),
                    });
                }
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return bad("sigma");
                }
                if !(coupling_sigma > 0.0 && coupling_sigma.is_finite()) {
                    return bad("coupling_sigma");
                }
                if !wavevector.iter().all(|c| c.is_finite()) {
                    return bad("wavevector");
                }
            }
            PairPotential::HarmonicPair { kappa } => {
                if !kappa.is_finite() {
                    return bad("kappa");
                }
            }
        }
        Ok(())
    }

    /// Checks that a center-of-mass wavevector is reciprocal for `bx`.
    pub fn check_commensurate(&self, bx: &SimulationBox) -> Result<()> {
        if let PairPotential::SubstrateCoupled { wavevector, .. } = self {
            let g = Vec2::new(wavevector[0], wavevector[1]);
            if bx.classify(g).class != WaveClass::Reciprocal {
                return Err(Error::IncommensurateWavevector(*wavevector));
            }
        }
        Ok(())
    }

    /// `Φ(r1, r2)` in open space.
    pub fn value(&self, r1: &Vec2, r2: &Vec2) -> f64 {
        let d = r1 - r2;
        match *self {
            PairPotential::GaussianCore { epsilon, sigma } => {
                epsilon * (-d.norm_squared() / (sigma * sigma)).exp()
            }
            PairPotential::SubstrateCoupled {
                epsilon,
                sigma,
                coupling,
                wavevector,
                coupling_sigma,
            } => {
                let g = Vec2::new(wavevector[0], wavevector[1]);
                let core = epsilon * (-d.norm_squared() / (sigma * sigma)).exp();
                let env = (-d.norm_squared() / (coupling_sigma * coupling_sigma)).exp();
                core + coupling * g.dot(&(r1 + r2)).cos() * env
            }
            PairPotential::HarmonicPair { kappa } => 0.5 * kappa * d.norm_squared(),
        }
    }

    /// Analytic derivative bundle in open space.
    pub fn derivatives(&self, r1: &Vec2, r2: &Vec2, dimension: Dimension) -> DerivativeBundle {
        let d = r1 - r2;
        match *self {
            PairPotential::GaussianCore { epsilon, sigma } => {
                let (_, g, h) = gaussian_radial(epsilon, sigma, &d);
                DerivativeBundle::assemble(g, -g, h, h, -h, dimension)
            }
            PairPotential::HarmonicPair { kappa } => {
                let h = Matrix2::identity() * kappa;
                DerivativeBundle::assemble(d * kappa, -d * kappa, h, h, -h, dimension)
            }
            PairPotential::SubstrateCoupled {
                epsilon,
                sigma,
                coupling,
                wavevector,
                coupling_sigma,
            } => {
                let (_, gc, hc) = gaussian_radial(epsilon, sigma, &d);
                let core = DerivativeBundle::assemble(gc, -gc, hc, hc, -hc, dimension);
                let gv = Vec2::new(wavevector[0], wavevector[1]);
                let (e, ge, he) = gaussian_radial(coupling, coupling_sigma, &d);
                let phase = gv.dot(&(r1 + r2));
                let (s, c) = phase.sin_cos();
                let ggt = gv * gv.transpose();
                let g_ge = gv * ge.transpose();
                let ge_g = ge * gv.transpose();
                let grad1 = gv * (-s * e) + ge * c;
                let grad2 = gv * (-s * e) - ge * c;
                let hess11 = ggt * (-c * e) - (g_ge + ge_g) * s + he * c;
                let hess22 = ggt * (-c * e) + (g_ge + ge_g) * s + he * c;
                let hess12 = ggt * (-c * e) + (g_ge - ge_g) * s - he * c;
                let modulated =
                    DerivativeBundle::assemble(grad1, grad2, hess11, hess22, hess12, dimension);
                core.add(&modulated)
            }
        }
    }

    /// `Φ(r1, r2)` on the periodic box. Local potentials use the minimal-image
    /// separation; the modulated term is evaluated at the same image, which
    /// changes `r1 + r2` by a box translation and so leaves `cos(G·(r1 + r2))`
    /// unchanged for commensurate `G`.
    pub fn evaluate(&self, r1: &Vec2, r2: &Vec2, bx: &SimulationBox) -> Result<f64> {
        let v = self.evaluate_with(r1, r2, bx, Periodization::MinimumImage);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteValue {
                context: format!("{} at ({r1:?}, {r2:?})", self.family()),
            })
        }
    }

    pub fn evaluate_with(
        &self,
        r1: &Vec2,
        r2: &Vec2,
        bx: &SimulationBox,
        form: Periodization,
    ) -> f64 {
        let nearest = r1 - bx.min_image(&(r1 - r2));
        match (form, self.image_reach(bx)) {
            (Periodization::ImageSum, Some((n1, n2))) => {
                let mut total = 0.0;
                for i in -n1..=n1 {
                    for j in -n2..=n2 {
                        let shift = bx.edge1 * i as f64 + bx.edge2 * j as f64;
                        total += self.value(r1, &(nearest + shift));
                    }
                }
                total
            }
            _ => self.value(r1, &nearest),
        }
    }

    pub fn derivatives_with(
        &self,
        r1: &Vec2,
        r2: &Vec2,
        bx: &SimulationBox,
        form: Periodization,
    ) -> DerivativeBundle {
        let dim = bx.dimension();
        let nearest = r1 - bx.min_image(&(r1 - r2));
        match (form, self.image_reach(bx)) {
            (Periodization::ImageSum, Some((n1, n2))) => {
                let mut total = DerivativeBundle::zero(dim);
                for i in -n1..=n1 {
                    for j in -n2..=n2 {
                        let shift = bx.edge1 * i as f64 + bx.edge2 * j as f64;
                        total = total.add(&self.derivatives(r1, &(nearest + shift), dim));
                    }
                }
                total
            }
            _ => self.derivatives(r1, &nearest, dim),
        }
    }

    /// Number of periodic images per edge needed to cover the decay range.
    fn image_reach(&self, bx: &SimulationBox) -> Option<(i64, i64)> {
        let range = self.decay_range()?;
        // distance between opposite faces of the box
        let h1 = bx.area / bx.edge2.norm();
        let h2 = bx.area / bx.edge1.norm();
        let n1 = (range / h1).ceil() as i64 + 1;
        let n2 = match bx.dimension() {
            Dimension::One => 0,
            Dimension::Two => (range / h2).ceil() as i64 + 1,
        };
        Some((n1, n2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_box, LatticeSpec};
    use std::f64::consts::PI;

    fn substrate(g: f64) -> PairPotential {
        PairPotential::SubstrateCoupled {
            epsilon: 1.0,
            sigma: 1.0,
            coupling: g,
            wavevector: [2.0 * PI, 0.0],
            coupling_sigma: 0.8,
        }
    }

    #[test]
    fn gaussian_core_values() {
        let p = PairPotential::GaussianCore {
            epsilon: 1.0,
            sigma: 1.0,
        };
        let o = Vec2::zeros();
        assert_eq!(p.value(&o, &o), 1.0);
        let v = p.value(&Vec2::new(1.0, 0.0), &o);
        assert!((v - (-1f64).exp()).abs() < 1e-15);
        assert!((v - 0.367879).abs() < 1e-6);
    }

    #[test]
    fn harmonic_bundle() {
        let p = PairPotential::HarmonicPair { kappa: 3.0 };
        let r1 = Vec2::new(0.4, -0.2);
        let r2 = Vec2::new(-0.1, 0.5);
        let b = p.derivatives(&r1, &r2, Dimension::Two);
        assert!((b.grad1 - (r1 - r2) * 3.0).norm() < 1e-15);
        assert_eq!(b.lap1, 6.0);
        assert_eq!(b.lap2, 6.0);
        assert_eq!(b.cross, -6.0);
    }

    #[test]
    fn gaussian_gradient_vanishes_at_coincidence() {
        let p = PairPotential::GaussianCore {
            epsilon: 2.0,
            sigma: 0.7,
        };
        let r = Vec2::new(0.3, 0.1);
        let b = p.derivatives(&r, &r, Dimension::Two);
        assert_eq!(b.grad1.norm(), 0.0);
    }

    #[test]
    fn substrate_breaks_translation_unless_uncoupled() {
        let r1 = Vec2::new(0.13, 0.0);
        let r2 = Vec2::new(0.41, 0.0);
        let g = 0.5;
        let p = substrate(g);
        let worst = (0..50)
            .map(|i| Vec2::new(i as f64 * 0.02, 0.0))
            .map(|s| (p.value(&(r1 + s), &(r2 + s)) - p.value(&r1, &r2)).abs())
            .fold(0.0, f64::max);
        assert!(worst > 0.1 * g);
        let p0 = substrate(0.0);
        let s = Vec2::new(0.37, 0.0);
        assert!((p0.value(&(r1 + s), &(r2 + s)) - p0.value(&r1, &r2)).abs() < 1e-12);
    }

    #[test]
    fn substrate_periodic_under_box_edges() {
        let bx = build_box(&LatticeSpec::square(1.0, 3)).unwrap();
        let p = PairPotential::SubstrateCoupled {
            epsilon: 1.0,
            sigma: 0.5,
            coupling: 0.3,
            wavevector: [2.0 * PI, 2.0 * PI],
            coupling_sigma: 0.5,
        };
        p.check_commensurate(&bx).unwrap();
        let r1 = Vec2::new(0.2, 1.1);
        let r2 = Vec2::new(2.7, 0.4);
        let base = p.evaluate(&r1, &r2, &bx).unwrap();
        for e in [bx.edge1, bx.edge2] {
            let v = p.evaluate(&(r1 + e), &(r2 + e), &bx).unwrap();
            assert!((v - base).abs() < 1e-12);
        }
    }

    #[test]
    fn incommensurate_substrate_rejected() {
        let bx = build_box(&LatticeSpec::square(1.0, 3)).unwrap();
        let p = PairPotential::SubstrateCoupled {
            epsilon: 1.0,
            sigma: 0.5,
            coupling: 0.3,
            wavevector: [1.0, 0.0],
            coupling_sigma: 0.5,
        };
        assert!(p.check_commensurate(&bx).is_err());
    }

    #[test]
    fn image_sum_matches_minimum_image_for_short_range() {
        let bx = build_box(&LatticeSpec::square(1.0, 10)).unwrap();
        let p = PairPotential::GaussianCore {
            epsilon: 1.0,
            sigma: 0.5,
        };
        let r1 = Vec2::new(0.1, 0.2);
        let r2 = Vec2::new(9.8, 0.4);
        let a = p.evaluate_with(&r1, &r2, &bx, Periodization::MinimumImage);
        let b = p.evaluate_with(&r1, &r2, &bx, Periodization::ImageSum);
        assert!((a - b).abs() < 1e-15);
        assert!(a > 0.1);
    }

    #[test]
    fn one_dimensional_laplacian_uses_axis_only() {
        let p = PairPotential::HarmonicPair { kappa: 1.5 };
        let b = p.derivatives(&Vec2::new(0.3, 0.0), &Vec2::zeros(), Dimension::One);
        assert_eq!(b.lap1, 1.5);
        assert_eq!(b.cross, -1.5);
    }

    #[test]
    fn serde_family_tags() {
        let p: PairPotential =
            serde_json::from_str(r#"{"family":"gaussian_core","epsilon":1.0,"sigma":2.0}"#)
                .unwrap();
        assert_eq!(
            p,
            PairPotential::GaussianCore {
                epsilon: 1.0,
                sigma: 2.0
            }
        );
        let bad = serde_json::from_str::<PairPotential>(
            r#"{"family":"gaussian_core","epsilon":1.0,"sigma":2.0,"extra":1}"#,
        );
        assert!(bad.is_err());
    }
}
