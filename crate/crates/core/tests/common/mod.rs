//! Independent oracles shared by the integration tests. Nothing here calls
//! into the solver paths it is used to check.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use ordlab::geometry::{build_box, LatticeSpec, SimulationBox};

pub fn square_box(spacing: f64, n: usize) -> Arc<SimulationBox> {
    Arc::new(build_box(&LatticeSpec::square(spacing, n)).unwrap())
}

pub fn ring(spacing: f64, n: usize) -> Arc<SimulationBox> {
    Arc::new(build_box(&LatticeSpec::chain(spacing, n)).unwrap())
}

/// Wrapped grid coordinate in `[−L/2, L/2)`, written out again on purpose.
fn wrapped(j: usize, points: usize, length: f64) -> f64 {
    let n = if j < points / 2 {
        j as f64
    } else {
        j as f64 - points as f64
    };
    n * length / points as f64
}

/// Lowest bound-state energy of `−∂²/(2μ) + λ_eff·h·|g⟩⟨g|` on a ring of
/// `points` sites, from `1 = −λ_eff·h·Σ_p |ĝ_p|²/(ε_p − E)` by bisection.
/// `ĝ` is the unitary DFT of the profile on the grid. `None` when no root lies
/// below zero.
pub fn separable_bound_energy(
    points: usize,
    length: f64,
    lambda_eff: f64,
    sigma: f64,
) -> Option<f64> {
    let mu = 0.5;
    let h = length / points as f64;
    let g: Vec<f64> = (0..points)
        .map(|j| {
            let u = wrapped(j, points, length);
            (-u * u / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let mut weight = Vec::with_capacity(points);
    let mut eps = Vec::with_capacity(points);
    for p in 0..points {
        let (mut re, mut im) = (0.0, 0.0);
        for (j, gj) in g.iter().enumerate() {
            let t = -2.0 * PI * (p * j) as f64 / points as f64;
            re += gj * t.cos();
            im += gj * t.sin();
        }
        weight.push((re * re + im * im) / points as f64);
        let n = if p < points / 2 {
            p as f64
        } else {
            p as f64 - points as f64
        };
        let q = 2.0 * PI * n / length;
        eps.push(q * q / (2.0 * mu));
    }
    let f = |e: f64| {
        1.0 + lambda_eff
            * h
            * weight
                .iter()
                .zip(&eps)
                .map(|(w, x)| w / (x - e))
                .sum::<f64>()
    };
    if lambda_eff >= 0.0 {
        return None;
    }
    // f → 1 as E → −∞ and f → −∞ as E → 0⁻
    let mut lo = -(lambda_eff.abs() * h * weight.iter().sum::<f64>() + 1.0);
    let mut hi = -1e-300;
    if f(lo) <= 0.0 || f(hi) >= 0.0 {
        return None;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * lo.abs() {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// `ħω(n + ½)` for relative motion with `μ = ½` in `κu²/2`.
pub fn oscillator_levels(kappa: f64, n: usize) -> Vec<f64> {
    let omega = (kappa / 0.5).sqrt();
    (0..n).map(|i| omega * (i as f64 + 0.5)).collect()
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// `⟨d²⟩` for the Boltzmann weight `exp(−βκd²/2)` over the minimal-image
/// separation `d ∈ [−L/2, L/2)` of two particles on a ring.
pub fn ring_harmonic_second_moment(beta: f64, kappa: f64, length: f64) -> f64 {
    let w = |d: f64| (-0.5 * beta * kappa * d * d).exp();
    let half = 0.5 * length;
    simpson(|d| d * d * w(d), -half, half, 20_000) / simpson(w, -half, half, 20_000)
}

/// Central difference with one Richardson step: returns the extrapolated
/// value and the gap between the two step sizes.
pub fn richardson<F: Fn(f64) -> f64>(f: F, step: f64) -> (f64, f64) {
    let d1 = (f(step) - f(-step)) / (2.0 * step);
    let d2 = (f(0.5 * step) - f(-0.5 * step)) / step;
    ((4.0 * d2 - d1) / 3.0, (d2 - d1).abs())
}

/// Drop every line that mentions the timestamp field.
pub fn strip_timestamps(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes)
        .lines()
        .filter(|l| !l.contains("timestamp"))
        .collect::<Vec<_>>()
        .join("\n")
}
