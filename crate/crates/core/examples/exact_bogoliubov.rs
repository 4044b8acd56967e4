//! The inequality in an exact thermal state, for a local and a nonlocal potential.

use std::f64::consts::PI;

use ordlab::geometry::Dimension;
use ordlab::potentials::PairPotential;
use ordlab::quantum::{bogoliubov_slack, build_space};

fn main() -> ordlab::Result<()> {
    let space = build_space(Dimension::One, 16, 2.0 * PI, 2)?;
    let pots = [
        PairPotential::GaussianCore {
            epsilon: 1.0,
            sigma: 1.0,
        },
        PairPotential::SubstrateCoupled {
            epsilon: 1.0,
            sigma: 1.0,
            coupling: 1.0,
            wavevector: [1.0, 0.0],
            coupling_sigma: 1.0,
        },
    ];
    for pot in &pots {
        for beta in [0.5, 2.0, 8.0] {
            let r = bogoliubov_slack(&space, pot, &space.wave([1, 0]), &space.wave([0, 0]), beta)?;
            println!(
                "{:<18} beta={beta:<4} lhs={:.6} rhs={:.6} slack={:+.3e}",
                pot.family(),
                r.lhs,
                r.rhs,
                r.slack
            );
        }
    }
    Ok(())
}
