//! Commutator identities on band-limited subspaces, and the kinetic double
//! commutator fitted against its printed and derived forms.

use std::f64::consts::PI;

use ordlab::geometry::Dimension;
use ordlab::potentials::PairPotential;
use ordlab::quantum::{build_space, commutator_residuals};

fn main() -> ordlab::Result<()> {
    let space = build_space(Dimension::One, 16, 2.0 * PI, 2)?;
    let pot = PairPotential::GaussianCore {
        epsilon: 1.0,
        sigma: 3.0,
    };
    let r = commutator_residuals(&space, &pot, &space.wave([1, 0]), &space.wave([1, 0]), 1.0)?;
    println!(
        "anticommutator {:.1e}  commutator {:.1e}  potential {:.1e}  local-vs-general {:.1e}",
        r.anticommutator, r.commutator_modulus, r.potential_double, r.local_reduction
    );
    let a = &r.kinetic;
    println!(
        "\n{:<24} {:>8} {:>8} {:>8}",
        "term", "printed", "derived", "fitted"
    );
    for i in 0..a.terms.len() {
        println!(
            "{:<24} {:>8.3} {:>8.3} {:>8.3}",
            a.terms[i], a.printed[i], a.derived[i], a.fitted[i]
        );
    }
    println!(
        "\nresidual: printed {:.2e}, derived {:.2e}",
        a.printed_residual, a.derived_residual
    );
    Ok(())
}
