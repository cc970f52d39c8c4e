//! `arcm`: batch front end for the arc-measure pipeline.
//!
//! Exit codes: 0 all checks passed, 1 a numeric threshold failed,
//! 2 usage or input validation errors.

mod svg;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

use arcmeasure::hardy0::{verify_kernel_recurrence, HalfPlaneModel, OneArcSpace};
use arcmeasure::moebius::cayley_caratheodory_to_schur;
use arcmeasure::{
    build_m, cross_validate, fit_m, quadrature, schur_sequence, verblunsky_from_measure, ArcSet,
    Divisor,
};

#[derive(Parser)]
#[command(
    name = "arcm",
    version,
    about = "Measures on arc sets: divisors, densities, reflection coefficients"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run all one-arc model verifiers and report residuals
    VerifyOnearc {
        /// radius parameter(s) of the model, repeatable
        #[arg(long = "r", num_args = 1.., default_values_t = vec![0.5])]
        r: Vec<f64>,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        /// threshold for the kernel recurrence residuals
        #[arg(long, default_value_t = 1e-10)]
        tol_recurrence: f64,
        /// threshold for the kernel identity and resolvent residuals
        #[arg(long, default_value_t = 1e-9)]
        tol_identity: f64,
    },
    /// Build the divisor function and sample it on a grid
    Mfunc {
        #[arg(long)]
        arcs: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        /// CSV of samples (re_z, im_z, re_m, im_m)
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        grid_radial: usize,
        #[arg(long, default_value_t = 24)]
        grid_angular: usize,
    },
    /// Recover the measure: arc density quadrature plus gap atoms
    Measure {
        #[arg(long)]
        arcs: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long, default_value_t = 8)]
        level: u32,
        /// nodes CSV; atoms are written next to it as <stem>.atoms.csv
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Reflection coefficients of the recovered measure
    Verblunsky {
        #[arg(long)]
        arcs: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(short = 'N', long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        level: u32,
        #[arg(long)]
        emit: Option<PathBuf>,
        /// SVG plot of (n, |alpha_n|, arg alpha_n)
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Full pipeline: function, measure, both parameter paths, closure
    Pipeline {
        #[arg(long)]
        arcs: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(short = 'N', long, default_value_t = 15)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        level: u32,
        #[arg(long, default_value_t = 0.75)]
        radius: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// prefix for emitted CSV artifacts
        #[arg(long)]
        emit_prefix: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-5)]
        tol_cross: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol_closure: f64,
        #[arg(long, default_value_t = 1e-7)]
        tol_mass: f64,
    },
    /// Iterate a divisor grid and emit per-divisor coefficient tables
    Sweep {
        #[arg(long)]
        arcs: PathBuf,
        /// angles per gap (each also taken on both sheets)
        #[arg(long, default_value_t = 3)]
        grid: usize,
        #[arg(short = 'N', long, default_value_t = 12)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        level: u32,
        #[arg(long)]
        emit_prefix: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 512)]
        max_divisors: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn load_arcs(path: &Path) -> arcmeasure::Result<ArcSet> {
    ArcSet::from_json(&fs::read_to_string(path)?)
}

fn load_divisor(path: &Path, arcs: &ArcSet) -> arcmeasure::Result<Divisor> {
    Divisor::from_json(&fs::read_to_string(path)?, arcs)
}

fn write_report(report: &Value, path: Option<&Path>) -> arcmeasure::Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    match path {
        Some(p) => fs::write(p, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn divisor_json(d: &Divisor) -> Value {
    Value::Array(
        d.points()
            .iter()
            .map(|p| json!({"angle": p.angle, "sheet": p.sheet}))
            .collect(),
    )
}

fn splitmix(state: &mut u64) -> f64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z = z ^ (z >> 31);
    (z >> 11) as f64 / (1u64 << 53) as f64
}

fn run(cmd: Cmd) -> arcmeasure::Result<bool> {
    match cmd {
        Cmd::VerifyOnearc {
            r,
            samples,
            seed,
            report,
            tol_recurrence,
            tol_identity,
        } => {
            let mut runs = Vec::new();
            let mut all_pass = true;
            for (i, &rv) in r.iter().enumerate() {
                let space = OneArcSpace::new(rv)?;
                let th = verify_kernel_recurrence(&space, samples, seed + 10 * i as u64);
                let model = HalfPlaneModel::new(&space, Complex64::new(1.0, 0.0))?;
                let (identity, reproducing) = model.verify_kernel_identity(samples, seed + 1);
                let zfac = model.verify_z_factorization(samples, seed + 2);
                let resolvent = model.verify_schur_resolvent_form(samples, seed + 3);
                let member = model.verify_gap_normalized_member(samples, seed + 4);
                let rnorm = model.verify_r_normalization(&[1e2, 1e4, 1e6])?;
                let mut violations = Vec::new();
                if th.max_residual() > tol_recurrence {
                    violations.push(format!(
                        "kernel recurrence residual {:.3e} > {tol_recurrence:.1e}",
                        th.max_residual()
                    ));
                }
                for (name, v) in [
                    ("kernel identity", identity),
                    ("reproducing value", reproducing),
                    ("z factorization", zfac),
                    ("resolvent form", resolvent),
                    ("gap member", member),
                ] {
                    if v > tol_identity {
                        violations.push(format!("{name} residual {v:.3e} > {tol_identity:.1e}"));
                    }
                }
                if rnorm > 1e-6 {
                    violations.push(format!("r normalization variation {rnorm:.3e} > 1e-6"));
                }
                let pass = violations.is_empty();
                all_pass &= pass;
                runs.push(json!({
                    "r": rv,
                    "a": th.a.re,
                    "rho": th.rho,
                    "recurrence_residual": th.recurrence_residual,
                    "matrix_residual": th.matrix_residual,
                    "rho_byproduct_residual": th.rho_byproduct_residual,
                    "diagonal_symmetry_residual": th.diagonal_symmetry_residual,
                    "kernel_identity_residual": identity,
                    "reproducing_residual": reproducing,
                    "z_factorization_residual": zfac,
                    "resolvent_residual": resolvent,
                    "gap_member_residual": member,
                    "r_normalization_variation": rnorm,
                    "violations": violations,
                    "pass": pass,
                }));
            }
            let rep = json!({
                "command": "verify-onearc",
                "samples": samples,
                "seed": seed,
                "tolerances": {"recurrence": tol_recurrence, "identity": tol_identity, "r_normalization": 1e-6},
                "runs": runs,
                "pass": all_pass,
            });
            write_report(&rep, report.as_deref())?;
            Ok(all_pass)
        }

        Cmd::Mfunc {
            arcs,
            divisor,
            emit,
            report,
            grid_radial,
            grid_angular,
        } => {
            let e = load_arcs(&arcs)?;
            let curve = arcmeasure::HyperellipticCurve::new(&e);
            let d = load_divisor(&divisor, &e)?;
            let m = build_m(&curve, &d)?;
            if let Some(path) = emit {
                let mut out = String::from("re_z,im_z,re_m,im_m\n");
                for ir in 0..grid_radial {
                    let rad = 0.9 * (ir as f64 + 1.0) / grid_radial as f64;
                    for ia in 0..grid_angular {
                        let z = Complex64::from_polar(rad, TAU * ia as f64 / grid_angular as f64);
                        let v = m.eval(z);
                        out.push_str(&format!(
                            "{:.17e},{:.17e},{:.17e},{:.17e}\n",
                            z.re, z.im, v.re, v.im
                        ));
                    }
                }
                for ia in 0..grid_angular {
                    let z = Complex64::from_polar(2.0, TAU * ia as f64 / grid_angular as f64);
                    let v = m.eval(z);
                    out.push_str(&format!(
                        "{:.17e},{:.17e},{:.17e},{:.17e}\n",
                        z.re, z.im, v.re, v.im
                    ));
                }
                fs::write(path, out)?;
            }
            let rep = json!({
                "command": "mfunc",
                "genus": curve.genus(),
                "divisor": divisor_json(&d),
                "p": m.p().iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>(),
                "q": [m.q().re, m.q().im],
                "condition_estimate": m.cond_estimate(),
                "value_at_zero_residual": (m.eval(Complex64::new(0.0, 0.0)) - 1.0).norm(),
                "value_at_infinity_residual": (m.value_at_infinity() + 1.0).norm(),
                "pass": true,
            });
            write_report(&rep, report.as_deref())?;
            Ok(true)
        }

        Cmd::Measure {
            arcs,
            divisor,
            level,
            emit,
            report,
        } => {
            let e = load_arcs(&arcs)?;
            let curve = arcmeasure::HyperellipticCurve::new(&e);
            let d = load_divisor(&divisor, &e)?;
            let m = build_m(&curve, &d)?;
            let mu = quadrature(&m, &d, level)?;
            if let Some(path) = emit {
                let mut nodes = Vec::new();
                mu.write_nodes_csv(&mut nodes)?;
                fs::write(&path, nodes)?;
                let atoms_path = path.with_extension("atoms.csv");
                let mut atoms = Vec::new();
                mu.write_atoms_csv(&mut atoms)?;
                fs::write(atoms_path, atoms)?;
            }
            let mass_dev = (mu.total_mass - 1.0).abs();
            let pass = mass_dev <= 1e-7;
            let rep = json!({
                "command": "measure",
                "level": level,
                "nodes": mu.nodes.len(),
                "atoms": mu.atoms.iter().map(|(x, m)| json!({"angle": x.arg().rem_euclid(TAU), "mass": m})).collect::<Vec<_>>(),
                "total_mass": mu.total_mass,
                "mass_deviation": mass_dev,
                "pass": pass,
            });
            write_report(&rep, report.as_deref())?;
            Ok(pass)
        }

        Cmd::Verblunsky {
            arcs,
            divisor,
            n,
            level,
            emit,
            plot,
            report,
        } => {
            let e = load_arcs(&arcs)?;
            let curve = arcmeasure::HyperellipticCurve::new(&e);
            let d = load_divisor(&divisor, &e)?;
            let m = build_m(&curve, &d)?;
            let mu = quadrature(&m, &d, level)?;
            let opuc = verblunsky_from_measure(&mu, n)?;
            if let Some(path) = emit {
                let mut buf = Vec::new();
                opuc.verblunsky.write_csv(&mut buf)?;
                fs::write(path, buf)?;
            }
            if let Some(path) = plot {
                fs::write(path, svg::sequence_plot(&opuc.verblunsky.params))?;
            }
            let rep = json!({
                "command": "verblunsky",
                "n": n,
                "level": level,
                "terminated": opuc.verblunsky.terminated,
                "alpha": opuc.verblunsky.params.iter().map(|a| json!([a.re, a.im])).collect::<Vec<_>>(),
                "norms_sq": opuc.norms_sq,
                "pass": true,
            });
            write_report(&rep, report.as_deref())?;
            Ok(true)
        }

        Cmd::Pipeline {
            arcs,
            divisor,
            n,
            level,
            radius,
            seed,
            emit_prefix,
            report,
            tol_cross,
            tol_closure,
            tol_mass,
        } => {
            let e = load_arcs(&arcs)?;
            let curve = arcmeasure::HyperellipticCurve::new(&e);
            let d = load_divisor(&divisor, &e)?;
            let m = build_m(&curve, &d)?;

            let emit = |name: &str, content: &[u8]| -> arcmeasure::Result<()> {
                if let Some(prefix) = &emit_prefix {
                    fs::write(format!("{prefix}{name}"), content)?;
                }
                Ok(())
            };

            // sampled function table
            let mut mtab = String::from("re_z,im_z,re_m,im_m\n");
            for ir in 0..8 {
                let rad = 0.9 * (ir as f64 + 1.0) / 8.0;
                for ia in 0..16 {
                    let z = Complex64::from_polar(rad, TAU * ia as f64 / 16.0);
                    let v = m.eval(z);
                    mtab.push_str(&format!(
                        "{:.17e},{:.17e},{:.17e},{:.17e}\n",
                        z.re, z.im, v.re, v.im
                    ));
                }
            }
            emit("m.csv", mtab.as_bytes())?;

            let mu = quadrature(&m, &d, level)?;
            let mut buf = Vec::new();
            mu.write_nodes_csv(&mut buf)?;
            emit("nodes.csv", &buf)?;
            buf.clear();
            mu.write_atoms_csv(&mut buf)?;
            emit("atoms.csv", &buf)?;
            let mass_dev = (mu.total_mass - 1.0).abs();

            let opuc = verblunsky_from_measure(&mu, n)?;
            buf.clear();
            opuc.verblunsky.write_csv(&mut buf)?;
            emit("alpha.csv", &buf)?;

            let schur = schur_sequence(&m.analytic_fn(), n, radius)?;
            buf.clear();
            schur.seq.write_csv(&mut buf)?;
            emit("schur.csv", &buf)?;

            let cross_dev = cross_validate(&m, &mu, n, radius)?;

            // one Schur step followed by a refit into the divisor class
            let f = cayley_caratheodory_to_schur(&m.analytic_fn())?;
            let a0 = f.eval(Complex64::new(0.0, 0.0))?;
            let mut state = seed;
            let mut samples = Vec::new();
            for &rad in &[0.4, 0.65, 1.6, 2.4] {
                let off = splitmix(&mut state);
                for k in 0..8 {
                    let z = Complex64::from_polar(rad, TAU * (k as f64 + off) / 8.0);
                    let fv = match f.eval(z) {
                        Ok(v) => v,
                        Err(_) => continue,
                    };
                    let den = 1.0 - a0.conj() * fv;
                    if den.norm() < 5e-2 {
                        continue;
                    }
                    let f1 = (fv - a0) / (z * den);
                    let cden = 1.0 - z * f1;
                    if cden.norm() < 5e-2 {
                        continue;
                    }
                    samples.push((z, (1.0 + z * f1) / cden));
                }
            }
            let fit = fit_m(&curve, &samples)?;

            let checks = json!({
                "mass": {"value": mass_dev, "tol": tol_mass, "pass": mass_dev <= tol_mass},
                "cross_deviation": {"value": cross_dev, "tol": tol_cross, "pass": cross_dev <= tol_cross},
                "closure_residual": {"value": fit.residual, "tol": tol_closure, "pass": fit.residual <= tol_closure},
            });
            let pass =
                mass_dev <= tol_mass && cross_dev <= tol_cross && fit.residual <= tol_closure;
            let rep = json!({
                "command": "pipeline",
                "genus": curve.genus(),
                "n": n,
                "level": level,
                "radius": radius,
                "seed": seed,
                "divisor": divisor_json(&d),
                "total_mass": mu.total_mass,
                "alpha_first": opuc.verblunsky.params.first().map(|a| json!([a.re, a.im])),
                "stripped_parameter": [a0.re, a0.im],
                "recovered_divisor": divisor_json(&fit.divisor),
                "checks": checks,
                "pass": pass,
            });
            write_report(&rep, report.as_deref())?;
            Ok(pass)
        }

        Cmd::Sweep {
            arcs,
            grid,
            n,
            level,
            emit_prefix,
            report,
            max_divisors,
        } => {
            let e = load_arcs(&arcs)?;
            let curve = arcmeasure::HyperellipticCurve::new(&e);
            let gaps = e.gaps().len();
            let per_gap = 2 * grid;
            let total = per_gap.pow(gaps as u32);
            if total > max_divisors {
                return Err(arcmeasure::Error::InvalidParameter(format!(
                    "sweep would enumerate {total} divisors (cap {max_divisors})"
                )));
            }
            let mut divisors_csv = String::from("divisor,gap,angle,sheet\n");
            let mut alpha_csv = String::from("divisor,n,re,im\n");
            let mut failures = Vec::new();
            for idx in 0..total {
                let mut rem = idx;
                let mut pts = Vec::with_capacity(gaps);
                for g in e.gaps() {
                    let choice = rem % per_gap;
                    rem /= per_gap;
                    let angle =
                        g.at_fraction((choice / 2) as f64 / grid as f64 + 0.5 / grid as f64);
                    let sheet = if choice % 2 == 0 { 1 } else { -1 };
                    pts.push(arcmeasure::DivisorPoint { angle, sheet });
                }
                let d = match curve.validate_divisor(pts.clone()) {
                    Ok(d) => d,
                    Err(err) => {
                        failures.push(json!({"divisor": idx, "error": err.to_string()}));
                        continue;
                    }
                };
                for (gi, p) in d.points().iter().enumerate() {
                    divisors_csv.push_str(&format!("{idx},{gi},{:.17e},{}\n", p.angle, p.sheet));
                }
                let result = build_m(&curve, &d)
                    .and_then(|m| quadrature(&m, &d, level))
                    .and_then(|mu| verblunsky_from_measure(&mu, n));
                match result {
                    Ok(opuc) => {
                        for (k, a) in opuc.verblunsky.params.iter().enumerate() {
                            alpha_csv.push_str(&format!("{idx},{k},{:.17e},{:.17e}\n", a.re, a.im));
                        }
                    }
                    Err(err) => failures.push(json!({"divisor": idx, "error": err.to_string()})),
                }
            }
            if let Some(prefix) = &emit_prefix {
                fs::write(format!("{prefix}divisors.csv"), &divisors_csv)?;
                fs::write(format!("{prefix}alpha.csv"), &alpha_csv)?;
            }
            let pass = failures.is_empty();
            let rep = json!({
                "command": "sweep",
                "grid": grid,
                "n": n,
                "level": level,
                "divisors": total,
                "failed": failures,
                "pass": pass,
            });
            write_report(&rep, report.as_deref())?;
            Ok(pass)
        }
    }
}
