use std::f64::consts::PI;

use faer::{c64, Mat};
use ordlab::geometry::Dimension;
use ordlab::potentials::PairPotential;
use ordlab::quantum::*;
use ordlab::Error;

fn gaussian() -> PairPotential {
    PairPotential::GaussianCore {
        epsilon: 1.0,
        sigma: 1.0,
    }
}

#[test]
fn space_sizes_and_budget() {
    assert_eq!(
        build_space(Dimension::One, 16, 2.0 * PI, 2).unwrap().total,
        256
    );
    assert_eq!(
        build_space(Dimension::Two, 8, 2.0 * PI, 1).unwrap().total,
        64
    );
    assert!(matches!(
        build_space(Dimension::One, 64, 2.0 * PI, 3),
        Err(Error::DimensionBudgetExceeded {
            dimension: 262_144,
            ..
        })
    ));
}

#[test]
fn momentum_spectrum_is_the_grid() {
    let space = build_space(Dimension::One, 8, 3.0, 1).unwrap();
    let mut p = space.momentum_spectrum();
    p.sort_by(f64::total_cmp);
    let expected: Vec<f64> = (-4..4).map(|n| 2.0 * PI * n as f64 / 3.0).collect();
    for (a, b) in p.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-12);
    }
    let (e, _) = eigh(&momentum_1d(&space)).unwrap();
    for (a, b) in e.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn uniform_state_averages_phases_to_zero() {
    let space = build_space(Dimension::One, 16, 5.0, 1).unwrap();
    let k = space.wave([3, 0]);
    let phase = phase_diagonal(&space, 0, &k);
    let avg: c64 = phase.iter().sum::<c64>() / 16.0;
    assert!(avg.norm() < 1e-14);
}

#[test]
fn momentum_shifts_phase_exactly_on_band_limited_states() {
    let space = build_space(Dimension::One, 16, 2.0 * PI, 1).unwrap();
    let kv = space.bx.grid_wavevector(2, 0);
    let ops = fundamental_operators(&space, &[kv]).unwrap();
    let (w, per) = &ops.phases[0];
    let e = diagonal(&per[0]);
    let lhs = commutator(&ops.momenta[0], &e);
    let rhs = scaled(&e, HBAR * w.components.x);
    let q = band_limited_basis(&space, [16 / 2 - 1 - 2, 0]);
    let defect = max_entry(&((&lhs - &rhs) * &q));
    assert!(defect < 1e-12, "{defect}");
    // outside the band the Nyquist slot aliases
    assert!(max_entry(&(&lhs - &rhs)) > 1e-3);
}

#[test]
fn incommensurate_wavevector_rejected() {
    let space = build_space(Dimension::One, 8, 2.0 * PI, 1).unwrap();
    let generic = space.bx.classify(ordlab::geometry::Vec2::new(0.37, 0.0));
    assert!(matches!(
        fundamental_operators(&space, &[generic]),
        Err(Error::IncommensurateWavevector(_))
    ));
}

#[test]
fn theorem_operators_are_hermitian() {
    let space = build_space(Dimension::Two, 8, 4.0, 1).unwrap();
    let sub = PairPotential::SubstrateCoupled {
        epsilon: 1.0,
        sigma: 1.0,
        coupling: 0.7,
        wavevector: [PI / 2.0, 0.0],
        coupling_sigma: 1.0,
    };
    for (k, big) in [([1, 0], [0, 0]), ([1, 1], [8, 0]), ([0, 2], [-8, 8])] {
        let ops = theorem_operators(&space, &sub, &space.wave(k), &space.wave(big)).unwrap();
        assert!(hermiticity_defect(&ops.c.mat) < 1e-12);
        assert!(hermiticity_defect(&ops.h.mat) < 1e-12);
        for c in &ops.c_components {
            assert!(hermiticity_defect(&c.mat) < 1e-12);
        }
        let kk = space.wave(k).scaled_sum(1, &space.wave(big), 1, &space);
        let adag = density_diagonal(&space, &kk);
        for (a, b) in ops.a.iter().zip(&adag) {
            assert!((a.conj() - b).norm() < 1e-13);
        }
    }
}

#[test]
fn free_spectrum_is_sums_of_single_particle_levels() {
    let space = build_space(Dimension::One, 8, 3.0, 2).unwrap();
    let h = hamiltonian(&space, &PairPotential::zero()).unwrap();
    let (e, _) = eigh(&h).unwrap();
    let levels: Vec<f64> = space
        .momentum_spectrum()
        .iter()
        .map(|p| p * p / 2.0)
        .collect();
    let mut sums: Vec<f64> = levels
        .iter()
        .flat_map(|a| levels.iter().map(move |b| a + b))
        .collect();
    sums.sort_by(f64::total_cmp);
    for (a, b) in e.iter().zip(&sums) {
        assert!((a - b).abs() < 1e-10 * b.max(1.0));
    }
}

#[test]
fn thermal_limits() {
    let space = build_space(Dimension::One, 8, 2.0 * PI, 2).unwrap();
    let h = hamiltonian(&space, &gaussian()).unwrap();
    let state = ThermalState::new(&h, 0.7).unwrap();
    assert!((state.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let id = Mat::<c64>::identity(space.total, space.total);
    assert!((thermal_average(&state, &id).unwrap() - c64::new(1.0, 0.0)).norm() < 1e-12);

    // Reflection-symmetric Hamiltonian: no net momentum. The unpaired Nyquist
    // slot −M/2 is odd only up to its thermal occupation, so use a grid on
    // which that shell sits at βε ≈ 64.
    let fine = build_space(Dimension::One, 16, 2.0 * PI, 2).unwrap();
    let warm = ThermalState::new(&hamiltonian(&fine, &gaussian()).unwrap(), 2.0).unwrap();
    let p_total = &momentum(&fine, 0, 0) + &momentum(&fine, 1, 0);
    let pm = thermal_average(&warm, &p_total).unwrap().norm();
    assert!(pm < 1e-10, "{pm:e}");

    let e = &state.energies;
    let gap = e.iter().find(|x| **x > e[0] + 1e-8).unwrap() - e[0];
    let cold = ThermalState::new(&h, 1e3 / gap).unwrap();
    assert!((thermal_average(&cold, &h).unwrap().re - e[0]).abs() < 1e-9);

    let wrong = Mat::<c64>::identity(3, 3);
    assert!(matches!(
        thermal_average(&state, &wrong),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn free_particle_inequality_holds() {
    let space = build_space(Dimension::One, 16, 2.0 * PI, 1).unwrap();
    for (k, big) in [([1, 0], [0, 0]), ([2, 0], [0, 0]), ([1, 0], [16, 0])] {
        let r = bogoliubov_slack(
            &space,
            &PairPotential::zero(),
            &space.wave(k),
            &space.wave(big),
            1.0,
        )
        .unwrap();
        assert!(r.slack >= 0.0, "{r:?}");
        assert!(r.passed);
    }
}

#[test]
fn vanishing_numerator_gives_zero_right_side() {
    let space = build_space(Dimension::One, 16, 2.0 * PI, 1).unwrap();
    // k + K = 4k: no overlap with the sin(k·r) harmonics in a translation-invariant state
    let r = bogoliubov_slack(
        &space,
        &PairPotential::zero(),
        &space.wave([1, 0]),
        &space.wave([3, 0]),
        1.0,
    )
    .unwrap();
    assert!(r.rhs < 1e-20 && r.slack >= 0.0, "{r:?}");
}

#[test]
fn identities_hold_in_two_dimensions() {
    let space = build_space(Dimension::Two, 8, 2.0 * PI, 1).unwrap();
    let r = commutator_residuals(
        &space,
        &gaussian(),
        &space.wave([1, 0]),
        &space.wave([0, 1]),
        1.0,
    )
    .unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(r.anticommutator < 1e-10);
}

#[test]
fn band_limit_guard() {
    let space = build_space(Dimension::One, 16, 2.0 * PI, 1).unwrap();
    let e = commutator_residuals(
        &space,
        &gaussian(),
        &space.wave([5, 0]),
        &space.wave([0, 0]),
        1.0,
    );
    assert!(matches!(e, Err(Error::BandLimitViolated(_))));
}

#[test]
fn spectral_gaps_shrink_with_the_grid() {
    let pot = PairPotential::GaussianCore {
        epsilon: 1.0,
        sigma: 1.2,
    };
    let mut prev: Option<(f64, f64)> = None;
    for m in [8, 16, 32] {
        let space = build_space(Dimension::One, m, 2.0 * PI, 2).unwrap();
        let gaps = thermal_identity_gaps(&space, &pot, &space.wave([1, 0]), 1.0).unwrap();
        if let Some((k0, u0)) = prev {
            // spectral convergence, until round-off takes over
            assert!(gaps.0 < k0 || gaps.0 < 1e-10, "kinetic {gaps:?} after {k0}");
            assert!(
                gaps.1 < u0 || gaps.1 < 1e-10,
                "potential {gaps:?} after {u0}"
            );
        }
        prev = Some(gaps);
    }
    let (k, u) = prev.unwrap();
    assert!(k < 1e-9 && u < 1e-9, "{k} {u}");
}

#[test]
fn sector_solver_matches_dense_diagonalization() {
    let pot = PairPotential::GaussianCore {
        epsilon: 1.5,
        sigma: 0.9,
    };
    let qs = [1, 2, 3];
    let sector = ordlab::bounds::local_denominator_curve(16, 6.0, &pot, 0.8, &qs).unwrap();
    let dense = ordlab::bounds::dense_denominator_curve(16, 6.0, &pot, 0.8, &qs).unwrap();
    for ((ka, a), (kb, b)) in sector.iter().zip(&dense) {
        assert!((ka - kb).abs() < 1e-14);
        assert!((a - b).abs() < 1e-9 * b.abs(), "{a} vs {b}");
    }
}

#[test]
fn random_draws_are_reproducible_and_within_budget() {
    let a = random_draws(30, 5, 512);
    assert_eq!(a, random_draws(30, 5, 512));
    assert!(a.iter().all(|d| d.states() <= 512 && d.k != [0, 0]));
    assert!(a.iter().any(|d| d.reciprocal == [0, 0]));
    for d in a.iter().take(5) {
        assert!(d.run().unwrap().passed);
    }
}
