//! Relative-motion spectra for a separable nonlocal kernel and a local
//! harmonic pair, and the check that a local kernel reduces to `φ`.

use ordlab::potentials::PairPotential;
use ordlab::schrodinger::{
    bound_state_count, build_relative_hamiltonian, local_reduction_check, solve_spectrum,
    KernelOperator, RelativeGrid,
};

fn main() -> ordlab::Result<()> {
    let grid = RelativeGrid::new(128, 30.0)?;
    for lambda in [-0.5, 0.5] {
        let kernel = KernelOperator::separable(grid, lambda, 1.0)?;
        let spec = solve_spectrum(&build_relative_hamiltonian(&kernel)?, &grid, 4)?;
        println!(
            "separable lambda={lambda:+}: {} bound state(s), lowest {:?}",
            bound_state_count(&spec),
            spec.energies
                .iter()
                .map(|e| format!("{e:.5}"))
                .collect::<Vec<_>>()
        );
    }
    let r = local_reduction_check(&PairPotential::HarmonicPair { kappa: 1.0 }, grid)?;
    let omega = 2f64.sqrt();
    for (n, e) in r.kernel_path.iter().take(5).enumerate() {
        println!(
            "harmonic n={n}: {e:.8}  (ħω(n+½) = {:.8})",
            omega * (n as f64 + 0.5)
        );
    }
    println!("kernel vs direct deviation: {:e}", r.max_deviation);
    Ok(())
}
