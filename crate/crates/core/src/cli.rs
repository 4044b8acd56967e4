//! Batch front end. `run_command` parses argv, runs one subcommand and
//! returns the process exit status: 0 ok, 1 invalid input or failed run,
//! 2 a verification did not hold.

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::bounds::{
    bound_sweep, dense_denominator_curve, divergence_probe_with, k_scaling_exponent,
    local_denominator_curve, potential_bound_check_classical, sin_inequality, BoundKind,
    BoundReport, DivergenceReport, ScalingReport, SinInequalityReport,
};
use crate::config::{KernelConfig, RunConfig};
use crate::error::{Error, Result};
use crate::geometry::{build_box, first_zone, WaveClass, WaveVector};
use crate::montecarlo::{energy_average, parallel_chains, ChainMeta, ChainParams, Configuration};
use crate::observables::{order_parameter, structure_factor, ClassicalInputs, ORDER_THRESHOLD};
use crate::quantum::{
    bogoliubov_slack, build_space, commutator_residuals, random_draws, BogoliubovDraw,
    BogoliubovReport, IdentityReport,
};
use crate::report::{config_hash, ArtifactWriter, Metadata, Table};
use crate::schrodinger::{
    bound_state_count, build_relative_hamiltonian, local_reduction_check, solve_spectrum,
    KernelOperator, ReductionReport, RelativeGrid,
};
use crate::stats::Estimate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

/// Classical slack may dip this many standard errors below zero.
const CLASSICAL_SIGMAS: f64 = 3.0;
const REDUCTION_TOL: f64 = 1e-10;
const PARITY_TOL: f64 = 1e-8;
const DIVERGENCE_TOL: f64 = 1e-6;
const PLANTED_TOL: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(
    name = "ordlab",
    version,
    about = "Crystalline-order checks: Monte Carlo, exact diagonalization, bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; built-in defaults when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Metropolis run with order parameters and the classical inequality.
    Simulate,
    /// Exact inequality and commutator identities on a small grid.
    VerifyQuantum,
    /// Upper bounds on the double commutator.
    VerifyBounds,
    /// Small-k exponent of the inequality's denominator.
    Scaling,
    /// Two-particle spectra with local and nonlocal kernels.
    Schrodinger,
    /// Dimension dependence of the integrated 1/k² singularity.
    ProbeDivergence,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::VerifyQuantum => "verify-quantum",
            Command::VerifyBounds => "verify-bounds",
            Command::Scaling => "scaling",
            Command::Schrodinger => "schrodinger",
            Command::ProbeDivergence => "probe-divergence",
        }
    }
}

struct Outcome {
    passed: bool,
    summary: String,
}

pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match run(&cli) {
        Ok(o) => {
            if !cli.quiet {
                print!("{}", o.summary);
            }
            if o.passed {
                EXIT_OK
            } else {
                eprintln!("{}: verification failed", cli.command.name());
                EXIT_VERIFICATION
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("ORDLAB_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Error::ConfigInvalid {
                field: "ORDLAB_THREADS".into(),
                reason: format!("expected a positive integer, got `{v}`"),
            })?;
        // a pool configured earlier in the process stays in place
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome> {
    configure_threads()?;
    let name = cli.command.name();
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default_for(name)?,
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.require_block(name)?;
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.out.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("ordlab-out"));
    // the output location does not change results, so it stays out of the hash
    cfg.out = None;
    let mut w = ArtifactWriter::new(out, Metadata::new(name, &cfg));
    w.json("config.json", &cfg)?;
    match cli.command {
        Command::Simulate => simulate(&cfg, &mut w),
        Command::VerifyQuantum => verify_quantum(&cfg, &mut w),
        Command::VerifyBounds => verify_bounds(&cfg, &mut w),
        Command::Scaling => scaling(&cfg, &mut w),
        Command::Schrodinger => schrodinger(&cfg, &mut w),
        Command::ProbeDivergence => probe_divergence(&cfg, &mut w),
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.6e}")
}

#[derive(Serialize)]
struct ObservableRow {
    kx: f64,
    ky: f64,
    class: &'static str,
    re_rho: f64,
    im_rho: f64,
    stderr: f64,
    #[serde(rename = "S")]
    s: f64,
    lhs: Option<f64>,
    rhs: Option<f64>,
    slack: Option<f64>,
    slack_stderr: Option<f64>,
}

#[derive(Serialize)]
struct EnergyRow {
    sweep: usize,
    #[serde(rename = "U")]
    u: f64,
    acceptance: f64,
}

#[derive(Serialize)]
struct SampleLine<'a> {
    sweep: usize,
    energy: f64,
    positions: &'a [[f64; 2]],
}

#[derive(Serialize)]
struct ShellRow {
    index: [i64; 2],
    k: [f64; 2],
    modulus: f64,
    stderr: f64,
}

#[derive(Serialize)]
struct SimulateReport {
    particles: usize,
    samples: usize,
    runs: Vec<ChainMeta>,
    energy: Estimate,
    reciprocal_shell: Vec<ShellRow>,
    order_threshold: f64,
    ordered: bool,
    inequality_checked: usize,
    inequality_violations: usize,
    worst_slack_sigmas: f64,
    potential_bound: Option<BoundReport>,
    passed: bool,
}

fn simulate(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<Outcome> {
    let sc = cfg.simulate.as_ref().expect("block checked");
    sc.potential.validate()?;
    let bx = Arc::new(build_box(&sc.lattice)?);
    sc.potential.check_commensurate(&bx)?;
    let init = Configuration::lattice(bx.clone(), sc.per_cell, sc.jitter, cfg.seed);
    let ch = &sc.chain;
    let params = ChainParams {
        beta: ch.beta,
        total_sweeps: ch.total_sweeps,
        equilibration_sweeps: ch.equilibration_sweeps,
        thinning: ch.thinning,
        initial_step: ch.initial_step,
        seed: cfg.seed,
        target_acceptance: ch.target_acceptance,
        com_frame: ch.com_frame,
    };
    params.validate()?;
    if ch.chains == 0 {
        return Err(Error::ConfigInvalid {
            field: "simulate.chain.chains".into(),
            reason: "need at least one chain".into(),
        });
    }
    let seeds: Vec<u64> = (0..ch.chains as u64)
        .map(|i| cfg.seed.wrapping_add(i))
        .collect();
    let samples = parallel_chains(&init, &sc.potential, &params, &seeds)?;
    samples.require(crate::montecarlo::MIN_SAMPLES)?;

    let (b1, b2) = bx.reciprocal_basis();
    let big_k = b1.combine(sc.reciprocal[0], &b2, sc.reciprocal[1], &bx);
    let thermal = ch.beta > 0.0 && !big_k.is_zero();
    let inputs = if thermal {
        Some(ClassicalInputs::new(
            &samples,
            &sc.potential,
            1.0 / ch.beta,
        )?)
    } else {
        None
    };

    let mut rows = Vec::new();
    let mut checked = 0;
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    let mut smallest: Option<WaveVector> = None;
    for k in first_zone(&bx) {
        let op = order_parameter(&samples, &k)?;
        let s = structure_factor(&samples, &k)?;
        let mut row = ObservableRow {
            kx: op.k[0],
            ky: op.k[1],
            class: op.class,
            re_rho: op.rho[0],
            im_rho: op.rho[1],
            stderr: op.stderr,
            s: s.mean,
            lhs: None,
            rhs: None,
            slack: None,
            slack_stderr: None,
        };
        if let (Some(inp), WaveClass::AllowedNonReciprocal) = (&inputs, k.class) {
            let r = inp.check(&k, &big_k)?;
            checked += 1;
            if !r.holds(CLASSICAL_SIGMAS) {
                violations += 1;
            }
            if r.slack_stderr > 0.0 {
                worst = worst.min(r.slack / r.slack_stderr);
            }
            row.lhs = Some(r.lhs.mean);
            row.rhs = Some(r.rhs.mean);
            row.slack = Some(r.slack);
            row.slack_stderr = Some(r.slack_stderr);
            if smallest.as_ref().is_none_or(|m| k.norm() < m.norm()) {
                smallest = Some(k.clone());
            }
        }
        rows.push(row);
    }

    let mut shell_idx: Vec<[i64; 2]> = Vec::new();
    for m in [sc.reciprocal, [1, 0], [0, 1], [1, -1], [1, 1]] {
        let one_d = sc.lattice.dimension == crate::geometry::Dimension::One;
        if !shell_idx.contains(&m) && !(one_d && m[1] != 0) {
            shell_idx.push(m);
        }
    }
    let mut shell = Vec::new();
    let mut ordered = false;
    for m in shell_idx {
        let kv = b1.combine(m[0], &b2, m[1], &bx);
        if kv.is_zero() {
            continue;
        }
        let op = order_parameter(&samples, &kv)?;
        ordered |= op.modulus() > ORDER_THRESHOLD;
        shell.push(ShellRow {
            index: m,
            k: op.k,
            modulus: op.modulus(),
            stderr: op.stderr,
        });
    }
    let bound_id = if sc.potential.is_local() {
        BoundKind::LocalPotential
    } else {
        BoundKind::NonlocalPotential
    };
    let potential_bound = match &smallest {
        Some(k) => Some(potential_bound_check_classical(
            &samples,
            &sc.potential,
            k,
            bound_id,
        )?),
        None => None,
    };

    let report = SimulateReport {
        particles: samples.particles(),
        samples: samples.len(),
        runs: samples.runs.clone(),
        energy: energy_average(&samples)?,
        reciprocal_shell: shell,
        order_threshold: ORDER_THRESHOLD,
        ordered,
        inequality_checked: checked,
        inequality_violations: violations,
        worst_slack_sigmas: if checked > 0 { worst } else { 0.0 },
        potential_bound,
        passed: violations == 0,
    };

    w.csv("observables.csv", &rows)?;
    let energies: Vec<EnergyRow> = samples
        .sweeps
        .iter()
        .zip(&samples.energies)
        .zip(&samples.acceptance)
        .map(|((&sweep, &u), &acceptance)| EnergyRow {
            sweep,
            u,
            acceptance,
        })
        .collect();
    w.csv("energies.csv", &energies)?;
    if sc.write_samples {
        let lines: Vec<(usize, f64, Vec<[f64; 2]>)> = samples
            .configs
            .iter()
            .zip(&samples.sweeps)
            .zip(&samples.energies)
            .map(|((c, &s), &e)| (s, e, c.cartesian_all().iter().map(|r| [r.x, r.y]).collect()))
            .collect();
        w.jsonl(
            "samples.jsonl",
            lines.iter().map(|(sweep, energy, p)| SampleLine {
                sweep: *sweep,
                energy: *energy,
                positions: p,
            }),
        )?;
    }
    w.json("report.json", &report)?;

    let mut t = Table::new(["m1", "m2", "|rho_K|", "stderr"]);
    for r in &report.reciprocal_shell {
        t.push(vec![
            r.index[0].to_string(),
            r.index[1].to_string(),
            fmt(r.modulus),
            fmt(r.stderr),
        ]);
    }
    w.text("summary.txt", &t)?;

    let summary = format!(
        "simulate: N={} samples={} U={:.6}±{:.6} ordered={} inequality {}/{} held (worst {:.2}σ)\n{}",
        report.particles,
        report.samples,
        report.energy.mean,
        report.energy.stderr,
        report.ordered,
        checked - violations,
        checked,
        report.worst_slack_sigmas,
        t.render()
    );
    Ok(Outcome {
        passed: report.passed,
        summary,
    })
}

#[derive(Serialize)]
struct IdentityEntry {
    potential: &'static str,
    report: IdentityReport,
    passed: bool,
}

#[derive(Serialize)]
struct DrawEntry {
    draw: BogoliubovDraw,
    report: BogoliubovReport,
}

#[derive(Serialize)]
struct QuantumReport {
    identities: Vec<IdentityEntry>,
    inequality: Vec<BogoliubovReport>,
    draws: Vec<DrawEntry>,
    passed: bool,
}

#[derive(Serialize)]
struct IdentityRow {
    potential: &'static str,
    k: i64,
    reciprocal: i64,
    anticommutator: f64,
    commutator_modulus: f64,
    commutator_modulus_printed: f64,
    potential_double: f64,
    potential_double_printed: f64,
    local_reduction: f64,
    kinetic_printed: f64,
    kinetic_derived: f64,
    passed: bool,
}

#[derive(Serialize)]
struct InequalityRow {
    source: &'static str,
    potential: &'static str,
    states: usize,
    kx: i64,
    ky: i64,
    big_kx: i64,
    big_ky: i64,
    beta: f64,
    lhs: f64,
    rhs: f64,
    slack: f64,
    passed: bool,
}

fn verify_quantum(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<Outcome> {
    let qc = cfg.verify_quantum.as_ref().expect("block checked");
    let space = build_space(qc.dimension, qc.grid, qc.length, qc.particles)?;
    let mut identities = Vec::new();
    let mut inequality = Vec::new();
    let mut rows = Vec::new();
    let mut irows = Vec::new();
    for pot in &qc.potentials {
        pot.validate()?;
        for pair in &qc.pairs {
            let k = space.wave(pair.k);
            let big_k = space.wave(pair.reciprocal);
            let r = commutator_residuals(&space, pot, &k, &big_k, qc.beta)?;
            let b = bogoliubov_slack(&space, pot, &k, &big_k, qc.beta)?;
            rows.push(IdentityRow {
                potential: pot.family(),
                k: pair.k[0],
                reciprocal: pair.reciprocal[0],
                anticommutator: r.anticommutator,
                commutator_modulus: r.commutator_modulus,
                commutator_modulus_printed: r.commutator_modulus_printed,
                potential_double: r.potential_double,
                potential_double_printed: r.potential_double_printed,
                local_reduction: r.local_reduction,
                kinetic_printed: r.kinetic.printed_residual,
                kinetic_derived: r.kinetic.derived_residual,
                passed: r.passed(),
            });
            irows.push(InequalityRow {
                source: "config",
                potential: pot.family(),
                states: space.total,
                kx: pair.k[0],
                ky: pair.k[1],
                big_kx: pair.reciprocal[0],
                big_ky: pair.reciprocal[1],
                beta: qc.beta,
                lhs: b.lhs,
                rhs: b.rhs,
                slack: b.slack,
                passed: b.passed,
            });
            identities.push(IdentityEntry {
                potential: pot.family(),
                passed: r.passed(),
                report: r,
            });
            inequality.push(b);
        }
    }
    let mut draws = Vec::new();
    for d in random_draws(qc.draws, cfg.seed, qc.max_states) {
        let r = d.run()?;
        irows.push(InequalityRow {
            source: "draw",
            potential: d.potential.family(),
            states: d.states(),
            kx: d.k[0],
            ky: d.k[1],
            big_kx: d.reciprocal[0],
            big_ky: d.reciprocal[1],
            beta: d.beta,
            lhs: r.lhs,
            rhs: r.rhs,
            slack: r.slack,
            passed: r.passed,
        });
        draws.push(DrawEntry { draw: d, report: r });
    }
    let passed = identities.iter().all(|e| e.passed)
        && inequality.iter().all(|b| b.passed)
        && draws.iter().all(|d| d.report.passed);
    let report = QuantumReport {
        identities,
        inequality,
        draws,
        passed,
    };
    w.csv("identities.csv", &rows)?;
    w.csv("inequality.csv", &irows)?;
    w.json("report.json", &report)?;
    let mut t = Table::new([
        "potential",
        "k",
        "K",
        "anticomm",
        "comm",
        "pot",
        "local-gen",
        "kin(printed)",
        "kin(derived)",
    ]);
    for r in &rows {
        t.push(vec![
            r.potential.to_string(),
            r.k.to_string(),
            r.reciprocal.to_string(),
            fmt(r.anticommutator),
            fmt(r.commutator_modulus),
            fmt(r.potential_double),
            fmt(r.local_reduction),
            fmt(r.kinetic_printed),
            fmt(r.kinetic_derived),
        ]);
    }
    w.text("summary.txt", &t)?;
    let held = irows.iter().filter(|r| r.passed).count();
    Ok(Outcome {
        passed,
        summary: format!(
            "verify-quantum: inequality held in {held}/{} cases\n{}",
            irows.len(),
            t.render()
        ),
    })
}

#[derive(Serialize)]
struct BoundsSummary {
    bounds: Vec<BoundReport>,
    sin_inequality: SinInequalityReport,
    passed: bool,
}

#[derive(Serialize)]
struct BoundRow {
    bound: BoundKind,
    path: &'static str,
    potential: &'static str,
    kx: f64,
    beta: Option<f64>,
    left: f64,
    right: f64,
    slack: f64,
    passed: bool,
}

fn verify_bounds(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<Outcome> {
    let bc = cfg.verify_bounds.as_ref().expect("block checked");
    let bounds = bound_sweep(bc.draws, cfg.seed, bc.grid)?;
    let sin = sin_inequality(bc.sin_samples, 10.0, cfg.seed);
    let passed = bounds.iter().all(|b| b.passed) && sin.violations == 0;
    let rows: Vec<BoundRow> = bounds
        .iter()
        .map(|b| BoundRow {
            bound: b.bound,
            path: b.path,
            potential: b.potential,
            kx: b.k[0],
            beta: b.beta,
            left: b.left,
            right: b.right,
            slack: b.slack,
            passed: b.passed,
        })
        .collect();
    w.csv("bounds.csv", &rows)?;
    let mut t = Table::new(["bound", "draws", "held", "min slack/right"]);
    for id in [
        BoundKind::Kinetic,
        BoundKind::LocalPotential,
        BoundKind::NonlocalPotential,
    ] {
        let sel: Vec<&BoundReport> = bounds.iter().filter(|b| b.bound == id).collect();
        let worst = sel
            .iter()
            .map(|b| b.slack / b.right.abs().max(f64::MIN_POSITIVE))
            .fold(f64::INFINITY, f64::min);
        t.push(vec![
            id.to_string(),
            sel.len().to_string(),
            sel.iter().filter(|b| b.passed).count().to_string(),
            fmt(worst),
        ]);
    }
    w.text("summary.txt", &t)?;
    let report = BoundsSummary {
        bounds,
        sin_inequality: sin,
        passed,
    };
    w.json("report.json", &report)?;
    Ok(Outcome {
        passed,
        summary: format!(
            "verify-bounds: |sin x ± sin y| ≤ |x ± y| violated {} times in {} pairs\n{}",
            sin.violations,
            sin.samples,
            t.render()
        ),
    })
}

#[derive(Serialize)]
struct CurveRow {
    model: &'static str,
    q: i64,
    k: f64,
    value: f64,
}

#[derive(Serialize)]
struct PlantedRow {
    planted: f64,
    fitted: f64,
}

#[derive(Serialize)]
struct ScalingSummary {
    local: ScalingReport,
    nonlocal: ScalingReport,
    local_alpha_window: [f64; 2],
    local_in_window: bool,
    planted: Vec<PlantedRow>,
    passed: bool,
}

fn scaling(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<Outcome> {
    let sc = cfg.scaling.as_ref().expect("block checked");
    let l = &sc.local;
    let n = &sc.nonlocal;
    l.potential.validate()?;
    n.potential.validate()?;
    let local_curve = local_denominator_curve(l.grid, l.length, &l.potential, l.beta, &l.q)?;
    let nonlocal_curve = dense_denominator_curve(n.grid, n.length, &n.potential, n.beta, &n.q)?;
    let local = k_scaling_exponent(&local_curve)?;
    let nonlocal = k_scaling_exponent(&nonlocal_curve)?;
    let mut planted = Vec::new();
    for alpha in [0.0, 1.0, 2.0] {
        let synthetic: Vec<(f64, f64)> = local_curve
            .iter()
            .map(|(k, _)| (*k, 3.0 * k.powf(alpha)))
            .collect();
        planted.push(PlantedRow {
            planted: alpha,
            fitted: k_scaling_exponent(&synthetic)?.alpha,
        });
    }
    let window = sc.local_alpha_window;
    let local_in_window = local.alpha >= window[0] && local.alpha <= window[1];
    let passed = local_in_window
        && planted
            .iter()
            .all(|p| (p.fitted - p.planted).abs() < PLANTED_TOL);
    let mut rows = Vec::new();
    for (model, qs, curve) in [
        ("local", &l.q, &local_curve),
        ("nonlocal", &n.q, &nonlocal_curve),
    ] {
        for (q, (k, v)) in qs.iter().zip(curve.iter()) {
            rows.push(CurveRow {
                model,
                q: *q,
                k: *k,
                value: *v,
            });
        }
    }
    w.csv("curve.csv", &rows)?;
    let mut t = Table::new(["model", "potential", "alpha", "stderr", "R2", "class"]);
    for (model, pot, r) in [
        ("local", &l.potential, &local),
        ("nonlocal", &n.potential, &nonlocal),
    ] {
        t.push(vec![
            model.to_string(),
            pot.family().to_string(),
            format!("{:.4}", r.alpha),
            fmt(r.alpha_stderr),
            format!("{:.6}", r.r_squared),
            r.class.to_string(),
        ]);
    }
    w.text("summary.txt", &t)?;
    let report = ScalingSummary {
        local,
        nonlocal,
        local_alpha_window: window,
        local_in_window,
        planted,
        passed,
    };
    w.json("report.json", &report)?;
    Ok(Outcome {
        passed,
        summary: format!("scaling:\n{}", t.render()),
    })
}

#[derive(Serialize)]
struct SpectrumRow {
    index: usize,
    energy: f64,
    parity: i8,
}

#[derive(Serialize)]
struct SchrodingerSummary {
    kernel: KernelConfig,
    hermiticity_defect: f64,
    kernel_parity_defect: f64,
    eigenvector_parity_defect: f64,
    bound_states: usize,
    reduction: ReductionReport,
    passed: bool,
}

fn schrodinger(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<Outcome> {
    let sc = cfg.schrodinger.as_ref().expect("block checked");
    let grid = RelativeGrid::new(sc.points, sc.length)?;
    let kernel = match &sc.kernel {
        KernelConfig::Separable { lambda, sigma } => {
            KernelOperator::separable(grid, *lambda, *sigma)?
        }
        KernelConfig::DeltaLocal { potential } => {
            potential.validate()?;
            KernelOperator::delta_local(grid, potential)?
        }
    };
    sc.reduction.validate()?;
    let h = build_relative_hamiltonian(&kernel)?;
    let spec = solve_spectrum(&h, &grid, sc.states)?;
    let reduction = local_reduction_check(&sc.reduction, grid)?;
    let passed = reduction.max_deviation < REDUCTION_TOL && spec.parity_defect < PARITY_TOL;
    let rows: Vec<SpectrumRow> = spec
        .energies
        .iter()
        .zip(&spec.parity)
        .enumerate()
        .map(|(index, (&energy, &parity))| SpectrumRow {
            index,
            energy,
            parity,
        })
        .collect();
    w.csv("spectrum.csv", &rows)?;
    let report = SchrodingerSummary {
        kernel: sc.kernel.clone(),
        hermiticity_defect: kernel.hermiticity_defect(),
        kernel_parity_defect: kernel.parity_defect(),
        eigenvector_parity_defect: spec.parity_defect,
        bound_states: bound_state_count(&spec),
        reduction,
        passed,
    };
    w.json("reduction.json", &report)?;
    let mut t = Table::new(["index", "energy", "parity"]);
    for r in &rows {
        t.push(vec![
            r.index.to_string(),
            format!("{:.10}", r.energy),
            r.parity.to_string(),
        ]);
    }
    w.text("summary.txt", &t)?;
    Ok(Outcome {
        passed,
        summary: format!(
            "schrodinger: {} bound state(s), local reduction deviation {:e}\n{}",
            report.bound_states,
            report.reduction.max_deviation,
            t.render()
        ),
    })
}

#[derive(Serialize)]
struct DivergenceRow {
    dimension: u8,
    start_k0: f64,
    k0: f64,
    integral: f64,
    analytic: f64,
    increment: Option<f64>,
}

#[derive(Serialize)]
struct DivergenceSummary {
    probes: Vec<DivergenceReport>,
    law_holds: bool,
    passed: bool,
}

fn probe_divergence(cfg: &RunConfig, w: &mut ArtifactWriter) -> Result<Outcome> {
    let dc = cfg.probe_divergence.as_ref().expect("block checked");
    let probes: Vec<DivergenceReport> = dc
        .k0
        .iter()
        .map(|&k0| divergence_probe_with(dc.dimension, k0, dc.epsilon, dc.halvings))
        .collect::<Result<_>>()?;
    let law_holds = probes.iter().all(|p| p.law_holds(DIVERGENCE_TOL));
    let passed = law_holds && probes.iter().all(|p| p.relative_error < DIVERGENCE_TOL);
    let mut rows = Vec::new();
    let mut t = Table::new(["k0", "integral", "analytic", "rel. error", "law"]);
    for p in &probes {
        for g in &p.growth {
            rows.push(DivergenceRow {
                dimension: p.dimension,
                start_k0: p.k0,
                k0: g.k0,
                integral: g.numeric,
                analytic: g.analytic,
                increment: g.increment,
            });
        }
        t.push(vec![
            fmt(p.k0),
            fmt(p.numeric),
            fmt(p.analytic),
            fmt(p.relative_error),
            p.law.to_string(),
        ]);
    }
    w.csv("divergence.csv", &rows)?;
    w.text("summary.txt", &t)?;
    let report = DivergenceSummary {
        probes,
        law_holds,
        passed,
    };
    w.json("report.json", &report)?;
    Ok(Outcome {
        passed,
        summary: format!("probe-divergence d={}:\n{}", dc.dimension, t.render()),
    })
}

/// Hash of a configuration as the artifacts record it.
pub fn artifact_hash(cfg: &RunConfig) -> String {
    let mut c = cfg.clone();
    c.out = None;
    config_hash(&c)
}
