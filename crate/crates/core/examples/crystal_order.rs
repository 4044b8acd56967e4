//! Order parameter of a 64-particle Gaussian-core crystal, cold and warm.
//!
//! ```bash
//! cargo run --release --example crystal_order
//! ```

use std::sync::Arc;

use ordlab::geometry::{build_box, LatticeSpec};
use ordlab::montecarlo::{metropolis_chain, ChainParams, Configuration};
use ordlab::observables::order_parameter;
use ordlab::potentials::PairPotential;

fn main() -> ordlab::Result<()> {
    let bx = Arc::new(build_box(&LatticeSpec::triangular(1.6, 8))?);
    let pot = PairPotential::GaussianCore {
        epsilon: 1.0,
        sigma: 1.0,
    };
    let init = Configuration::lattice(bx.clone(), 1, 0.0, 1);
    let (b1, _) = bx.reciprocal_basis();
    for beta in [200.0, 20.0] {
        let params = ChainParams {
            beta,
            total_sweeps: 6000,
            equilibration_sweeps: 1000,
            seed: 7,
            ..ChainParams::default()
        };
        let samples = metropolis_chain(&init, &pot, &params)?;
        let rho = order_parameter(&samples, &b1)?;
        println!(
            "beta = {beta:>5}: |rho_K| = {:.3} ± {:.3}  (acceptance {:.2})",
            rho.modulus(),
            rho.stderr,
            samples.runs[0].acceptance_rate
        );
    }
    Ok(())
}
