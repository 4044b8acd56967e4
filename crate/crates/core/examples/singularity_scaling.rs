//! Small-k exponent of the denominator: k² for a local pair potential,
//! weakened by a substrate-coupled (nonlocal) one.

use std::f64::consts::PI;

use ordlab::bounds::{dense_denominator_curve, k_scaling_exponent, local_denominator_curve};
use ordlab::potentials::PairPotential;

fn main() -> ordlab::Result<()> {
    let qs: Vec<i64> = (1..=10).collect();
    let local = PairPotential::GaussianCore {
        epsilon: 1.0,
        sigma: 1.0,
    };
    let curve = local_denominator_curve(128, 20.0 * PI, &local, 0.25, &qs)?;
    let r = k_scaling_exponent(&curve)?;
    println!(
        "gaussian core:     alpha = {:.3} ± {:.3} ({})",
        r.alpha, r.alpha_stderr, r.class
    );

    for coupling in [0.0, 2.0, 5.0] {
        let pot = PairPotential::SubstrateCoupled {
            epsilon: 1.0,
            sigma: 2.0,
            coupling,
            wavevector: [1.0, 0.0],
            coupling_sigma: 2.0,
        };
        let curve = dense_denominator_curve(32, 10.0 * PI, &pot, 10.0, &qs)?;
        let r = k_scaling_exponent(&curve)?;
        println!(
            "substrate g = {coupling}: alpha = {:.3} ± {:.3} ({})",
            r.alpha, r.alpha_stderr, r.class
        );
    }
    Ok(())
}
