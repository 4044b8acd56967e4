//! Kinetic, local and nonlocal upper bounds on the double commutator.

use std::f64::consts::PI;

use ordlab::bounds::{
    kinetic_bound_check, potential_bound_check_quantum, sin_inequality, BoundKind,
};
use ordlab::geometry::Dimension;
use ordlab::potentials::PairPotential;
use ordlab::quantum::build_space;

fn main() -> ordlab::Result<()> {
    let length = 8.0;
    let space = build_space(Dimension::One, 16, length, 2)?;
    let local = PairPotential::GaussianCore {
        epsilon: 1.0,
        sigma: 1.0,
    };
    let nonlocal = PairPotential::SubstrateCoupled {
        epsilon: 1.0,
        sigma: 1.0,
        coupling: 0.7,
        wavevector: [2.0 * PI / length, 0.0],
        coupling_sigma: 1.0,
    };
    for q in 1..=4 {
        let k = space.wave([q, 0]);
        for r in [
            kinetic_bound_check(&space, &local, 2.0, &k)?,
            potential_bound_check_quantum(&space, &local, 2.0, &k, BoundKind::LocalPotential)?,
            potential_bound_check_quantum(
                &space,
                &nonlocal,
                2.0,
                &k,
                BoundKind::NonlocalPotential,
            )?,
        ] {
            println!(
                "q={q} bound {}: {:>10.4} <= {:>10.4}  {}",
                r.bound, r.left, r.right, r.passed
            );
        }
    }
    let s = sin_inequality(100_000, 10.0, 1);
    println!(
        "|sin x ± sin y| <= |x ± y|: {} violations in {} pairs",
        s.violations, s.samples
    );
    Ok(())
}
