mod common;

use std::sync::Arc;

use ordlab::geometry::{build_box, LatticeSpec, Vec2};
use ordlab::montecarlo::{
    energy_average, ensemble_average, metropolis_accept, metropolis_chain, total_energy, Chain,
    ChainParams, Configuration,
};
use ordlab::potentials::PairPotential;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{ring, ring_harmonic_second_moment, square_box};

fn gaussian() -> PairPotential {
    PairPotential::GaussianCore {
        epsilon: 1.0,
        sigma: 1.0,
    }
}

#[test]
fn infinite_temperature_marginals_are_uniform() {
    let bx = square_box(1.0, 4);
    let init = Configuration::lattice(bx, 1, 0.0, 0);
    let params = ChainParams {
        beta: 0.0,
        total_sweeps: 6000,
        equilibration_sweeps: 100,
        thinning: 10,
        seed: 5,
        ..ChainParams::default()
    };
    let samples = metropolis_chain(&init, &PairPotential::zero(), &params).unwrap();
    assert_eq!(samples.runs[0].acceptance_rate, 1.0);
    // particle 0 only, so that samples are independent draws of one marginal
    let mut bins = [0usize; 16];
    for c in &samples.configs {
        bins[(c.frac[0].x * 16.0) as usize] += 1;
    }
    let n = samples.len() as f64;
    let chi2: f64 = bins
        .iter()
        .map(|&o| (o as f64 - n / 16.0).powi(2) / (n / 16.0))
        .sum();
    // 99th percentile of χ² with 15 degrees of freedom
    assert!(chi2 < 30.578, "χ² = {chi2}");
}

#[test]
fn harmonic_pair_on_ring_matches_boltzmann_quadrature() {
    let (beta, kappa, length) = (1.0, 1.0, 10.0);
    let init = Configuration::lattice(ring(length / 2.0, 2), 1, 0.0, 0);
    let params = ChainParams {
        beta,
        total_sweeps: 200_000,
        equilibration_sweeps: 2000,
        thinning: 5,
        seed: 3,
        ..ChainParams::default()
    };
    let pot = PairPotential::HarmonicPair { kappa };
    let samples = metropolis_chain(&init, &pot, &params).unwrap();
    let est = ensemble_average(&samples, |c| {
        c.bx.min_image(&(c.cartesian(0) - c.cartesian(1)))
            .norm_squared()
    })
    .unwrap();
    let exact = ring_harmonic_second_moment(beta, kappa, length);
    assert!(
        (est.mean - exact).abs() < 4.0 * est.stderr,
        "{} ± {} vs {exact}",
        est.mean,
        est.stderr
    );
    assert!(est.stderr < 0.05 * exact);
}

/// Three states on a ring with symmetric proposals ±1 and the same
/// acceptance rule as the continuous chain.
#[test]
fn three_state_chain_satisfies_detailed_balance() {
    let energy = [0.0, 0.7, 1.6];
    let beta = 1.3;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut counts = [[0f64; 3]; 3];
    let mut state = 0usize;
    let steps = 2_000_000;
    for _ in 0..steps {
        let next = if rng.random_bool(0.5) {
            (state + 1) % 3
        } else {
            (state + 2) % 3
        };
        let u: f64 = rng.random();
        let to = if metropolis_accept(energy[next] - energy[state], beta, u) {
            next
        } else {
            state
        };
        counts[state][to] += 1.0;
        state = to;
    }
    let z: f64 = energy.iter().map(|e| (-beta * e).exp()).sum();
    let pi: Vec<f64> = energy.iter().map(|e| (-beta * e).exp() / z).collect();
    for i in 0..3 {
        let visits: f64 = counts[i].iter().sum();
        assert!(
            (visits / steps as f64 - pi[i]).abs() < 0.01,
            "occupation of {i}"
        );
        for j in 0..3 {
            if i == j {
                continue;
            }
            // exact kernel for comparison
            let p_exact = 0.5 * (-beta * (energy[j] - energy[i])).exp().min(1.0);
            let flow_ij = pi[i] * counts[i][j] / visits;
            let visits_j: f64 = counts[j].iter().sum();
            let flow_ji = pi[j] * counts[j][i] / visits_j;
            assert!((counts[i][j] / visits - p_exact).abs() < 0.01);
            assert!((flow_ij - flow_ji).abs() < 0.005, "flow {i}->{j}");
        }
    }
}

#[test]
fn identical_seeds_reproduce_bit_for_bit() {
    let init = Configuration::lattice(square_box(1.2, 3), 1, 0.05, 9);
    let params = ChainParams {
        beta: 2.0,
        total_sweeps: 800,
        equilibration_sweeps: 100,
        seed: 21,
        ..ChainParams::default()
    };
    let a = metropolis_chain(&init, &gaussian(), &params).unwrap();
    let b = metropolis_chain(&init, &gaussian(), &params).unwrap();
    assert_eq!(a.energies, b.energies);
    assert_eq!(a.runs, b.runs);
    assert_eq!(a.configs, b.configs);
    assert_eq!(a.len(), params.expected_samples());
}

#[test]
fn incremental_energy_matches_recomputation() {
    let init = Configuration::lattice(square_box(1.0, 4), 1, 0.2, 1);
    let mut chain = Chain::new(init, gaussian(), 1.0, 0.3, 4).unwrap();
    while chain.accepted() < 10_000 {
        chain.sweep().unwrap();
    }
    let fresh = chain.recompute_energy().unwrap();
    assert!((chain.energy() - fresh).abs() <= 1e-9 * fresh.abs());
}

#[test]
fn production_halves_agree() {
    let init = Configuration::lattice(square_box(1.2, 4), 1, 0.0, 0);
    let params = ChainParams {
        beta: 1.0,
        total_sweeps: 20_000,
        equilibration_sweeps: 1000,
        seed: 8,
        ..ChainParams::default()
    };
    let samples = metropolis_chain(&init, &gaussian(), &params).unwrap();
    let (a, b) = samples.halves();
    let (ea, eb) = (energy_average(&a).unwrap(), energy_average(&b).unwrap());
    assert!(
        (ea.mean - eb.mean).abs() < 3.0 * ea.stderr.hypot(eb.stderr),
        "{ea:?} vs {eb:?}"
    );
}

#[test]
fn independent_seeds_agree_on_mean_energy() {
    let init = Configuration::lattice(square_box(1.2, 4), 1, 0.0, 0);
    let base = ChainParams {
        beta: 1.0,
        total_sweeps: 20_000,
        equilibration_sweeps: 1000,
        ..ChainParams::default()
    };
    let e: Vec<_> = [101, 202]
        .iter()
        .map(|&seed| {
            energy_average(
                &metropolis_chain(
                    &init,
                    &gaussian(),
                    &ChainParams {
                        seed,
                        ..base.clone()
                    },
                )
                .unwrap(),
            )
            .unwrap()
        })
        .collect();
    assert!(
        (e[0].mean - e[1].mean).abs() < 3.0 * e[0].stderr.hypot(e[1].stderr),
        "{e:?}"
    );
}

#[test]
fn constant_observable_has_no_spread_and_free_gas_no_energy() {
    let init = Configuration::lattice(square_box(1.0, 3), 1, 0.0, 0);
    let params = ChainParams {
        beta: 0.0,
        total_sweeps: 1000,
        equilibration_sweeps: 100,
        ..ChainParams::default()
    };
    let samples = metropolis_chain(&init, &PairPotential::zero(), &params).unwrap();
    let one = ensemble_average(&samples, |_| 1.0).unwrap();
    assert_eq!((one.mean, one.stderr), (1.0, 0.0));
    assert_eq!(energy_average(&samples).unwrap().mean, 0.0);
}

#[test]
fn sixteen_particle_energy_matches_brute_force() {
    let bx = Arc::new(build_box(&LatticeSpec::square(1.5, 4)).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let frac: Vec<Vec2> = (0..16)
        .map(|_| Vec2::new(rng.random(), rng.random()))
        .collect();
    let config = Configuration::new(bx.clone(), frac).unwrap();
    let pot = gaussian();
    // every image within reach of the short-range core, ordered pairs halved
    let r = config.cartesian_all();
    let mut direct = 0.0;
    for i in 0..16 {
        for j in 0..16 {
            if i == j {
                continue;
            }
            let d = bx.min_image(&(r[i] - r[j]));
            direct += 0.5 * (-d.norm_squared()).exp();
        }
    }
    let u = total_energy(&config, &pot).unwrap();
    assert!((u - direct).abs() < 1e-12 * direct.abs().max(1.0));
}
