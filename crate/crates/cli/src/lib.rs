//! Command-line driver for the Clifford Riemann boundary value solver.

pub mod config;
pub mod field;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};
use num_complex::Complex64;

use cliff_rbvp::contour::winding_number;
use cliff_rbvp::fixtures::{case_a_phi, closed_form_phi, example, example3_phi, ExampleId};
use cliff_rbvp::rbvp::conformal_transport;
use cliff_rbvp::verify::{verify, Thresholds, VerificationReport};
use cliff_rbvp::{CliffordElement, CliffordSolution, Error, Regime, Side, SolveOptions, Status};

use config::{Prepared, ProblemConfig, DEFAULT_NODES};
use field::Grid;
use report::{SolveReport, Timing};

#[derive(Debug, Parser)]
#[command(
    name = "cliff-rbvp",
    version,
    about = "Riemann boundary value problems for R(0,2)-valued monogenic functions"
)]
pub struct Cli {
    /// Quadrature nodes on the curve [default: 512, or the config's `nodes`].
    #[arg(long, global = true)]
    pub nodes: Option<usize>,

    /// Solvability-condition tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem and write a JSON report.
    Solve {
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a built-in example and compare with its closed form.
    Example {
        /// One of 1a, 1b, 1c, 1d, 2, 3.
        name: String,
        #[arg(long)]
        family_count: Option<usize>,
    },
    /// Sample Φ on a grid and write CSV.
    SampleField {
        config: PathBuf,
        /// x0,x1,y0,y1,nx,ny
        #[arg(long, allow_hyphen_values = true)]
        grid: Grid,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print the index of the coefficient.
    Index { config: PathBuf },
}

/// How a command ended, short of an operational error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Solved,
    Unsolvable,
}

impl Outcome {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Outcome::Solved => ExitCode::SUCCESS,
            Outcome::Unsolvable => ExitCode::from(2),
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Solve { config, output } => {
            cmd_solve(&config, output.as_deref(), cli.nodes, cli.tol, out)
        }
        Command::Example { name, family_count } => {
            cmd_example(&name, cli.nodes, cli.tol, family_count, out)
        }
        Command::SampleField {
            config,
            grid,
            output,
        } => cmd_sample_field(&config, &grid, &output, cli.nodes, cli.tol),
        Command::Index { config } => cmd_index(&config, cli.nodes, out),
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(
    path: &Path,
    write: impl FnOnce(&mut dyn Write) -> anyhow::Result<()>,
) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a file in {}", dir.display()))?;
    {
        let mut buf = std::io::BufWriter::new(tmp.as_file_mut());
        write(&mut buf)?;
        buf.flush()?;
    }
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn solve_prepared(p: &Prepared) -> anyhow::Result<CliffordSolution> {
    Ok(match &p.maps {
        Some(maps) => conformal_transport(&p.problem, maps)?.solve(&p.options)?,
        None => p.problem.solve(&p.options)?,
    })
}

/// Solves and, when a solution exists, verifies it with zero constants.
pub fn solve_and_verify(
    p: &Prepared,
) -> anyhow::Result<(CliffordSolution, Option<VerificationReport>, Timing)> {
    let start = Instant::now();
    let solution = solve_prepared(p)?;
    let solve_seconds = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let verification = if solution.status == Status::Unsolvable {
        None
    } else {
        let zeros = vec![Complex64::new(0.0, 0.0); solution.free_constant_count()];
        let v = verify(&p.problem, &solution, &zeros, Thresholds::default())?;
        if !v.passed() {
            log::warn!("verification failed: {v:?}");
        }
        Some(v)
    };
    let timing = Timing {
        solve_seconds,
        verify_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((solution, verification, timing))
}

pub fn cmd_solve(
    config: &Path,
    output: Option<&Path>,
    nodes: Option<usize>,
    tol: Option<f64>,
    out: &mut dyn Write,
) -> anyhow::Result<Outcome> {
    let prepared = ProblemConfig::load(config)?.prepare(nodes, tol)?;
    let (solution, verification, timing) = solve_and_verify(&prepared)?;
    let report = SolveReport::new(
        prepared.problem.contour.len(),
        prepared.maps.is_some(),
        &solution,
        verification.as_ref(),
        timing,
    );
    let json = report.to_json();
    match output {
        Some(path) => write_atomic(path, |w| Ok(w.write_all(json.as_bytes())?))?,
        None => out.write_all(json.as_bytes())?,
    }
    Ok(if report.solved() {
        Outcome::Solved
    } else {
        Outcome::Unsolvable
    })
}

fn side_of(solution_contour: &cliff_rbvp::Contour, z: Complex64) -> Side {
    if solution_contour.is_inside(z) {
        Side::Plus
    } else {
        Side::Minus
    }
}

struct Row {
    label: String,
    z: Complex64,
    computed: CliffordElement,
    reference: CliffordElement,
}

fn print_table(out: &mut dyn Write, rows: &[Row]) -> anyhow::Result<f64> {
    writeln!(
        out,
        "{:<6} {:>18}  {:<52}  {:<52}  {:>9}",
        "probe", "x", "computed Φ", "closed form Φ", "abs error"
    )?;
    let mut worst = 0.0f64;
    for r in rows {
        let err = r.computed.max_abs_diff(r.reference);
        worst = worst.max(err);
        writeln!(
            out,
            "{:<6} {:>18}  {:<52}  {:<52}  {:>9.2e}",
            r.label,
            format!("({:.4}, {:.4})", r.z.re, r.z.im),
            format!("{:.8}", r.computed),
            format!("{:.8}", r.reference),
            err
        )?;
    }
    writeln!(out, "max abs error {worst:.3e}")?;
    Ok(worst)
}

pub fn cmd_example(
    name: &str,
    nodes: Option<usize>,
    tol: Option<f64>,
    family_count: Option<usize>,
    out: &mut dyn Write,
) -> anyhow::Result<Outcome> {
    let id: ExampleId = name.parse()?;
    let ex = example(id, nodes.unwrap_or(DEFAULT_NODES))?;
    let mut opts = SolveOptions::default();
    if let Some(t) = tol {
        opts.condition_tol = t;
    }
    if let Some(k) = family_count {
        opts.family_count = k;
    }
    let contour = ex.problem.contour.clone();
    let solution = ex.problem.solve(&opts)?;
    writeln!(
        out,
        "example {id}: regime {}, index {}, status {}, {} free constant(s)",
        solution.regime.as_str(),
        solution
            .index
            .map_or("undefined".to_string(), |i| i.to_string()),
        solution.status.as_str(),
        solution.free_constant_count()
    )?;
    for s in &solution.subproblems {
        let worst = s.residuals.iter().map(|r| r.norm()).fold(0.0, f64::max);
        writeln!(
            out,
            "  {}: {} (max residual {worst:.3e}, tolerance {:.1e})",
            s.label,
            if s.solvable { "solvable" } else { "unsolvable" },
            s.tolerance
        )?;
        for r in s.residuals.iter().filter(|r| r.norm() > s.tolerance) {
            writeln!(
                out,
                "    residual {:.10} {:+.10}i (|·| = {:.10})",
                r.re,
                r.im,
                r.norm()
            )?;
        }
    }
    if solution.status == Status::Unsolvable {
        return Ok(Outcome::Unsolvable);
    }
    let probes: Vec<(String, Complex64)> = ex
        .interior_probes
        .iter()
        .enumerate()
        .map(|(i, &z)| (format!("in{i}"), z))
        .chain(
            ex.exterior_probes
                .iter()
                .enumerate()
                .map(|(i, &z)| (format!("out{i}"), z)),
        )
        .collect();
    let zero = |n: usize| vec![Complex64::new(0.0, 0.0); n];
    match id {
        ExampleId::Ex3 => {
            for m in 0..solution.free_constant_count() {
                let mut cs = zero(solution.free_constant_count());
                cs[m] = Complex64::new(1.0, 0.0);
                let member = m as u32 + 1;
                let rows = probes
                    .iter()
                    .map(|(label, z)| {
                        Ok(Row {
                            label: label.clone(),
                            z: *z,
                            computed: solution.evaluate_at(*z, &cs)?,
                            reference: example3_phi(*z, side_of(&contour, *z), member)?,
                        })
                    })
                    .collect::<anyhow::Result<Vec<_>>>()?;
                let residual = ex.problem.boundary_residual(&solution, &cs)?;
                writeln!(
                    out,
                    "\nmember m = {member} (boundary residual {residual:.3e})"
                )?;
                print_table(out, &rows)?;
            }
        }
        ExampleId::Ex1a => {
            // the closed form is a family too: fit our constants to its c = 0 member
            let points: Vec<Complex64> = probes.iter().map(|p| p.1).collect();
            let targets = points
                .iter()
                .map(|&z| case_a_phi(z, side_of(&contour, z), [0.0; 4]))
                .collect::<cliff_rbvp::Result<Vec<_>>>()?;
            let (cs, _) = solution.fit_constants(&points, &targets)?;
            writeln!(out, "fitted constants {cs:?}")?;
            let rows = probes
                .iter()
                .zip(&targets)
                .map(|((label, z), &reference)| {
                    Ok(Row {
                        label: label.clone(),
                        z: *z,
                        computed: solution.evaluate_at(*z, &cs)?,
                        reference,
                    })
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            print_table(out, &rows)?;
        }
        _ => {
            let cs = zero(solution.free_constant_count());
            let rows = probes
                .iter()
                .map(|(label, z)| {
                    let reference = closed_form_phi(id, *z, side_of(&contour, *z))?
                        .ok_or_else(|| anyhow::anyhow!("example {id} has no closed form"))?;
                    Ok(Row {
                        label: label.clone(),
                        z: *z,
                        computed: solution.evaluate_at(*z, &cs)?,
                        reference,
                    })
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            print_table(out, &rows)?;
        }
    }
    Ok(Outcome::Solved)
}

pub fn cmd_sample_field(
    config: &Path,
    grid: &Grid,
    output: &Path,
    nodes: Option<usize>,
    tol: Option<f64>,
) -> anyhow::Result<Outcome> {
    let prepared = ProblemConfig::load(config)?.prepare(nodes, tol)?;
    let solution = solve_prepared(&prepared)?;
    if solution.status == Status::Unsolvable {
        log::error!("problem is unsolvable; no field written");
        return Ok(Outcome::Unsolvable);
    }
    let zeros = vec![Complex64::new(0.0, 0.0); solution.free_constant_count()];
    let rows = field::sample_field(
        &prepared.problem.contour,
        &solution,
        &zeros,
        grid,
        field::thread_cap()?,
    )?;
    if rows.is_empty() {
        log::warn!("every grid point lies in the boundary refusal band; writing an empty table");
    }
    write_atomic(output, |w| field::write_csv(&rows, w))?;
    Ok(Outcome::Solved)
}

pub fn cmd_index(
    config: &Path,
    nodes: Option<usize>,
    out: &mut dyn Write,
) -> anyhow::Result<Outcome> {
    let prepared = ProblemConfig::load(config)?.prepare(nodes, None)?;
    let problem = &prepared.problem;
    let regime = problem.reduce().regime;
    if let Regime::Constant { a, .. } = regime {
        if a.norm() == 0.0 {
            anyhow::bail!("index undefined: the even part of G vanishes identically");
        }
    }
    // ℵ is minus the winding of the effective coefficient conj(Ĝ0)
    let effective: Vec<Complex64> = problem
        .coefficient
        .even
        .values()
        .iter()
        .map(|z| z.conj())
        .collect();
    let w = winding_number(&effective).map_err(|e| match e {
        Error::UnresolvedPhase { .. } | Error::WindingResidual { .. } => {
            anyhow::anyhow!("{e}; rerun with a larger --nodes")
        }
        other => other.into(),
    })?;
    writeln!(out, "regime {}", regime.as_str())?;
    writeln!(out, "index {}", -w.value)?;
    writeln!(out, "winding residual {:.3e}", w.residual)?;
    Ok(Outcome::Solved)
}
