//! Classical form of the inequality across the first zone of an ordered run.

use std::sync::Arc;

use ordlab::geometry::{build_box, first_zone, LatticeSpec, WaveClass};
use ordlab::montecarlo::{metropolis_chain, ChainParams, Configuration};
use ordlab::observables::ClassicalInputs;
use ordlab::potentials::PairPotential;

fn main() -> ordlab::Result<()> {
    let bx = Arc::new(build_box(&LatticeSpec::triangular(1.6, 8))?);
    let pot = PairPotential::GaussianCore {
        epsilon: 1.0,
        sigma: 1.0,
    };
    let params = ChainParams {
        beta: 200.0,
        total_sweeps: 6000,
        equilibration_sweeps: 1000,
        seed: 7,
        ..ChainParams::default()
    };
    let samples = metropolis_chain(
        &Configuration::lattice(bx.clone(), 1, 0.0, 1),
        &pot,
        &params,
    )?;
    let inputs = ClassicalInputs::new(&samples, &pot, 1.0 / params.beta)?;
    let (b1, _) = bx.reciprocal_basis();
    println!(
        "{:>8} {:>8} {:>10} {:>10} {:>8}",
        "kx", "ky", "S(k+K)", "bound", "sigmas"
    );
    for k in first_zone(&bx)
        .iter()
        .filter(|k| k.class == WaveClass::AllowedNonReciprocal)
        .take(12)
    {
        let r = inputs.check(k, &b1)?;
        println!(
            "{:>8.3} {:>8.3} {:>10.4} {:>10.4} {:>8.1}",
            r.k[0],
            r.k[1],
            r.lhs.mean,
            r.rhs.mean,
            r.slack / r.slack_stderr
        );
    }
    Ok(())
}
