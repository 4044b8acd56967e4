mod common;

use std::f64::consts::PI;

use ordlab::geometry::{
    build_box, reciprocal_basis, wavevector_grid, LatticeSpec, Vec2, WaveClass,
};
use proptest::prelude::*;

#[test]
fn triangular_reciprocal_basis_solves_dual_relation() {
    let spec = LatticeSpec::new([1.0, 0.0], [0.5, 3f64.sqrt() / 2.0], 3, 3);
    let (b1, b2) = reciprocal_basis(&spec).unwrap();
    let s3 = 3f64.sqrt();
    assert!((b1.components - Vec2::new(2.0 * PI, -2.0 * PI / s3)).norm() < 1e-12);
    assert!((b2.components - Vec2::new(0.0, 4.0 * PI / s3)).norm() < 1e-12);
    let (a1, a2) = (spec.a1(), spec.a2());
    assert!((a1.dot(&b1.components) - 2.0 * PI).abs() < 1e-12);
    assert!(a1.dot(&b2.components).abs() < 1e-12);
    assert!(a2.dot(&b1.components).abs() < 1e-12);
}

#[test]
fn half_indices_are_not_reciprocal() {
    let bx = build_box(&LatticeSpec::square(1.0, 2)).unwrap();
    let grid = wavevector_grid(&bx, 1);
    let find = |m: [i64; 2]| grid.iter().find(|k| k.index == Some(m)).unwrap().clone();
    assert_eq!(find([2, 0]).class, WaveClass::Reciprocal);
    assert!((find([2, 0]).components - Vec2::new(2.0 * PI, 0.0)).norm() < 1e-12);
    assert_eq!(find([1, 0]).class, WaveClass::AllowedNonReciprocal);
    assert!((find([1, 0]).components - Vec2::new(PI, 0.0)).norm() < 1e-12);
}

#[test]
fn classification_agrees_with_phase_test() {
    use rand::{Rng, SeedableRng};
    let bx = build_box(&LatticeSpec::new([1.0, 0.0], [0.3, 0.9], 4, 3)).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let translations = bx.cell_translations();
    for _ in 0..100 {
        let k = bx.grid_wavevector(rng.random_range(-12..=12), rng.random_range(-9..=9));
        let all_one = translations.iter().all(|t| {
            (k.components.dot(t).cos() - 1.0).abs() < 1e-9 && k.components.dot(t).sin().abs() < 1e-9
        });
        assert_eq!(all_one, k.class == WaveClass::Reciprocal, "{:?}", k.index);
    }
}

#[test]
fn basis_vectors_are_reciprocal_members_of_the_grid() {
    let bx = build_box(&LatticeSpec::triangular(1.3, 4)).unwrap();
    let (b1, b2) = bx.reciprocal_basis();
    let grid = wavevector_grid(&bx, 1);
    for b in [b1, b2] {
        let hit = grid
            .iter()
            .find(|k| (k.components - b.components).norm() < 1e-10)
            .expect("basis vector on grid");
        assert_eq!(hit.class, WaveClass::Reciprocal);
    }
}

fn oblique() -> ordlab::geometry::SimulationBox {
    build_box(&LatticeSpec::new([1.0, 0.0], [0.4, 1.1], 5, 4)).unwrap()
}

proptest! {
    #[test]
    fn reciprocal_phase_is_one_on_translations(m1 in -3i64..=3, m2 in -3i64..=3) {
        let bx = oblique();
        let k = bx.grid_wavevector(5 * m1, 4 * m2);
        prop_assert_eq!(k.class, WaveClass::Reciprocal);
        for t in bx.cell_translations() {
            let phase = k.components.dot(&t);
            prop_assert!((phase.cos() - 1.0).abs() < 1e-10 && phase.sin().abs() < 1e-10);
        }
    }

    #[test]
    fn min_image_is_periodic_and_idempotent(x in -30.0f64..30.0, y in -30.0f64..30.0, a in -3i32..3, b in -3i32..3) {
        let bx = oblique();
        let r = Vec2::new(x, y);
        let once = bx.min_image(&r);
        prop_assert!((bx.min_image(&once) - once).norm() < 1e-10);
        let shifted = r + bx.edge1 * a as f64 + bx.edge2 * b as f64;
        prop_assert!((bx.min_image(&shifted) - once).norm() < 1e-9);
        let f = bx.to_fractional(&once);
        prop_assert!((-0.5 - 1e-12..0.5 + 1e-12).contains(&f.x));
        prop_assert!((-0.5 - 1e-12..0.5 + 1e-12).contains(&f.y));
    }

    #[test]
    fn wrapped_fractions_stay_in_unit_cell(x in -1e3f64..1e3, y in -1e3f64..1e3) {
        let bx = oblique();
        let f = bx.wrap_fractional(&Vec2::new(x, y));
        prop_assert!((0.0..1.0).contains(&f.x) && (0.0..1.0).contains(&f.y));
    }
}
