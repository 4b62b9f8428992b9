//! `hypvortex`: residual suites, Chern numbers and holonomy sweeps.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 quadrature
//! did not converge.

mod commands;
mod report;
mod shorthand;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::{Grid, Usage, Which};
use hypvortex::instanton::Duality;
use hypvortex::tolerances::{self as tol, Tolerances};
use hypvortex::{Kind, Model, PotentialSpec, QuadConfig, SuperPotential};
use report::{write_csv, RunReport};
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hypvortex", version, about = "Instantons and hyperbolic vortices from harmonic potentials")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the field-equation residuals of a potential on a random grid.
    Verify(VerifyArgs),
    /// Compute c₁ or c₂ by quadrature.
    Chern(ChernArgs),
    /// Tabulate c₁, loop integrals and holonomies of the disc family.
    Sweep(SweepArgs),
    /// Re-read a JSON report or CSV output and recompute its verdict.
    CheckReport { path: PathBuf },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PotentialArgs {
    /// Descriptor such as `thooft:0:1`, `disc-family:2.5`, `fhp2`.
    #[arg(long)]
    potential: Option<String>,
    /// JSON file `{"family": ..., "params": {...}}`.
    #[arg(long)]
    spec_file: Option<PathBuf>,
}

impl PotentialArgs {
    fn load(&self) -> Result<(String, SuperPotential), Usage> {
        if let Some(d) = &self.potential {
            return shorthand::parse(d).map(|p| (d.clone(), p)).map_err(Usage);
        }
        let path = self.spec_file.as_ref().expect("clap enforces one source");
        let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
        let spec: PotentialSpec =
            serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
        let p = SuperPotential::from_spec(&spec)?;
        Ok((spec.family.clone(), p))
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Print the JSON report instead of the table.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct TolArgs {
    #[arg(long, default_value_t = tol::DUALITY_RESIDUAL)]
    tol_duality_residual: f64,
    #[arg(long, default_value_t = tol::CONTROL_RELATIVE)]
    tol_control_relative: f64,
    #[arg(long, default_value_t = tol::DENSITY_IDENTITY_RELATIVE)]
    tol_density_identity: f64,
    #[arg(long, default_value_t = tol::C2_ABSOLUTE)]
    tol_c2: f64,
    #[arg(long, default_value_t = tol::VORTEX_RESIDUAL)]
    tol_vortex_residual: f64,
    #[arg(long, default_value_t = tol::C1_ABSOLUTE)]
    tol_c1: f64,
    #[arg(long, default_value_t = tol::REDUCTION_CHERN)]
    tol_reduction_chern: f64,
    #[arg(long, default_value_t = tol::HIGGS_ZERO)]
    tol_higgs_zero: f64,
    #[arg(long, default_value_t = tol::PAIR_GAUGE)]
    tol_pair_gauge: f64,
    #[arg(long, default_value_t = tol::FHP_FORMS)]
    tol_fhp_forms: f64,
    #[arg(long, default_value_t = tol::MONODROMY)]
    tol_monodromy: f64,
    #[arg(long, default_value_t = tol::HOLONOMY)]
    tol_holonomy: f64,
    #[arg(long, default_value_t = tol::ADHM_RELATIVE)]
    tol_adhm_relative: f64,
    #[arg(long, default_value_t = tol::ACTION_RELATIVE)]
    tol_action_relative: f64,
}

impl TolArgs {
    fn get(&self) -> Tolerances {
        Tolerances {
            duality_residual: self.tol_duality_residual,
            control_relative: self.tol_control_relative,
            density_identity_relative: self.tol_density_identity,
            c2_absolute: self.tol_c2,
            vortex_residual: self.tol_vortex_residual,
            c1_absolute: self.tol_c1,
            reduction_chern: self.tol_reduction_chern,
            higgs_zero: self.tol_higgs_zero,
            pair_gauge: self.tol_pair_gauge,
            fhp_forms: self.tol_fhp_forms,
            monodromy: self.tol_monodromy,
            holonomy: self.tol_holonomy,
            adhm_relative: self.tol_adhm_relative,
            action_relative: self.tol_action_relative,
        }
    }
}

#[derive(Args)]
struct QuadArgs {
    /// Target error of a converged quadrature.
    #[arg(long)]
    quad_tol: Option<f64>,
    /// Boundary cutoffs 1 − r, strictly decreasing.
    #[arg(long, value_delimiter = ',')]
    deltas: Option<Vec<f64>>,
    #[arg(long)]
    radial_panels: Option<usize>,
    #[arg(long)]
    graded_panels: Option<usize>,
    #[arg(long)]
    angular_panels: Option<usize>,
    /// Outer radius of the 4-ball before the tail model.
    #[arg(long)]
    quad_ball_radius: Option<f64>,
    #[arg(long)]
    psi_nodes: Option<usize>,
    #[arg(long)]
    theta_nodes: Option<usize>,
    #[arg(long)]
    phi_nodes: Option<usize>,
    /// Drop the R⁻⁴ tail model of 4-ball integrals.
    #[arg(long)]
    no_tail: bool,
}

impl QuadArgs {
    fn get(&self) -> QuadConfig {
        let mut c = QuadConfig::default();
        if let Some(v) = self.quad_tol {
            c.tol = v;
        }
        if let Some(v) = &self.deltas {
            c.deltas = v.clone();
        }
        if let Some(v) = self.radial_panels {
            c.radial_panels = v;
        }
        if let Some(v) = self.graded_panels {
            c.graded_panels = v;
        }
        if let Some(v) = self.angular_panels {
            c.angular_panels = v;
        }
        if let Some(v) = self.quad_ball_radius {
            c.ball_radius = v;
        }
        if let Some(v) = self.psi_nodes {
            c.psi_nodes = v;
        }
        if let Some(v) = self.theta_nodes {
            c.theta_nodes = v;
        }
        if let Some(v) = self.phi_nodes {
            c.phi_nodes = v;
        }
        c.tail = !self.no_tail;
        c
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DualityArg {
    Sd,
    Asd,
}

impl From<DualityArg> for Duality {
    fn from(d: DualityArg) -> Self {
        match d {
            DualityArg::Sd => Duality::SD,
            DualityArg::Asd => Duality::ASD,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Vortex,
    AntiVortex,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Disc,
    HalfPlane,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    /// Duality of the ansatz connection on R⁴.
    #[arg(long, value_enum, default_value = "sd")]
    duality: DualityArg,
    /// Vortex or anti-vortex for hyperbolic potentials.
    #[arg(long, value_enum, default_value = "vortex")]
    kind: KindArg,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Sampled 4-ball radius.
    #[arg(long, default_value_t = 5.0)]
    radius: f64,
    /// Exclusion radius around singular points on R⁴.
    #[arg(long, default_value_t = 0.1)]
    exclusion: f64,
    /// Sampled disc radius for hyperbolic potentials.
    #[arg(long, default_value_t = 0.97)]
    disc_radius: f64,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ChernArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long, value_enum)]
    which: Which,
    /// Sign convention of c₂.
    #[arg(long, value_enum, default_value = "sd")]
    duality: DualityArg,
    /// Coordinates used for the c₁ integrand.
    #[arg(long, value_enum, default_value = "disc")]
    model: ModelArg,
    /// Expected value; the run fails if the result is further than the tolerance.
    #[arg(long)]
    expect: Option<f64>,
    /// Write the result row as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated values of c.
    #[arg(long = "c", value_delimiter = ',', conflicts_with = "c_range")]
    c: Option<Vec<f64>>,
    /// `START:STOP:STEP`, inclusive of STOP.
    #[arg(long)]
    c_range: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.01,0.001")]
    radii: Vec<f64>,
    /// Midpoint nodes of the coarsest loop rule.
    #[arg(long, default_value_t = 512)]
    loop_points: usize,
    /// CSV output; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: OutputArgs,
}

fn c_values(a: &SweepArgs) -> Result<Vec<f64>, Usage> {
    if let Some(c) = &a.c {
        return Ok(c.clone());
    }
    let Some(r) = &a.c_range else {
        return Err(Usage("give --c or --c-range".into()));
    };
    let v: Vec<f64> = r
        .split(':')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Usage(format!("bad --c-range {r:?}")))?;
    let [start, stop, step] = v[..] else {
        return Err(Usage(format!("--c-range needs START:STOP:STEP, got {r:?}")));
    };
    if !(step > 0.0) || stop < start {
        return Err(Usage(format!("empty --c-range {r:?}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

fn emit(report: &RunReport, out: &OutputArgs) -> Result<(), Usage> {
    let io = |e: std::io::Error| Usage(e.to_string());
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    if let Some(p) = &out.report {
        std::fs::write(p, &json).map_err(|e| Usage(format!("{}: {e}", p.display())))?;
    }
    let mut stdout = std::io::stdout().lock();
    if out.json {
        writeln!(stdout, "{json}").map_err(io)?;
    } else {
        report.print_table(&mut stdout).map_err(io)?;
    }
    Ok(())
}

fn status(report: &RunReport) -> ExitCode {
    if !report.converged() {
        ExitCode::from(3)
    } else if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn spec_of(p: &SuperPotential) -> Option<PotentialSpec> {
    p.to_spec().ok()
}

fn run(cli: Cli, argv: Vec<String>) -> Result<ExitCode, Usage> {
    match cli.cmd {
        Cmd::Verify(a) => {
            let (_, pot) = a.potential.load()?;
            let tol = a.tol.get();
            let grid = Grid {
                points: a.points,
                seed: a.seed,
                ball_radius: a.radius,
                exclusion: a.exclusion,
                disc_radius: a.disc_radius,
            };
            if !(grid.disc_radius > 0.0 && grid.disc_radius < 1.0) || !(grid.ball_radius > 0.0) {
                return Err(Usage("sampling radii out of range".into()));
            }
            let kind = match a.kind {
                KindArg::Vortex => Kind::Vortex,
                KindArg::AntiVortex => Kind::AntiVortex,
            };
            let mut report = RunReport::new(argv, spec_of(&pot), tol);
            commands::verify(&pot, a.duality.into(), kind, &grid, &tol, &mut report)?;
            let report = report.finish();
            emit(&report, &a.out)?;
            Ok(status(&report))
        }
        Cmd::Chern(a) => {
            let (label, pot) = a.potential.load()?;
            let tol = a.tol.get();
            let cfg = a.quad.get();
            let model = match a.model {
                ModelArg::Disc => Model::Disc,
                ModelArg::HalfPlane => Model::HalfPlane,
            };
            let mut report = RunReport::new(argv, spec_of(&pot), tol);
            report.quadrature_config = Some(cfg.clone());
            let row = commands::chern(&label, &pot, a.which, a.duality.into(), model, a.expect, &cfg, &tol, &mut report)?;
            let report = report.finish();
            if let Some(p) = &a.csv {
                let f = File::create(p).map_err(|e| Usage(format!("{}: {e}", p.display())))?;
                write_csv(f, &[row]).map_err(|e| Usage(e.to_string()))?;
            }
            emit(&report, &a.out)?;
            Ok(status(&report))
        }
        Cmd::Sweep(a) => {
            let cs = c_values(&a)?;
            let tol = a.tol.get();
            let cfg = a.quad.get();
            let mut report = RunReport::new(argv, None, tol);
            report.quadrature_config = Some(cfg.clone());
            let rows = commands::sweep(&cs, &a.radii, a.loop_points, &cfg, &tol, &mut report)?;
            let report = report.finish();
            match &a.out {
                Some(p) => {
                    let f = File::create(p).map_err(|e| Usage(format!("{}: {e}", p.display())))?;
                    write_csv(f, &rows).map_err(|e| Usage(e.to_string()))?;
                    emit(&report, &a.output)?;
                }
                None => {
                    write_csv(std::io::stdout().lock(), &rows).map_err(|e| Usage(e.to_string()))?;
                    if let Some(p) = &a.output.report {
                        let json = serde_json::to_string_pretty(&report).expect("report serializes");
                        std::fs::write(p, json).map_err(|e| Usage(format!("{}: {e}", p.display())))?;
                    }
                }
            }
            Ok(status(&report))
        }
        Cmd::CheckReport { path } => {
            let ing = report::ingest(&path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
            let ok = ing.verdict();
            if let report::Ingested::Report(r) = &ing {
                if r.pass != ok {
                    println!("stored verdict {} disagrees with the recomputed one", r.pass);
                }
            }
            println!("{}", if ok { "PASS" } else { "FAIL" });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    if let Ok(n) = std::env::var("HYPVORTEX_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: HYPVORTEX_THREADS must be a positive integer, got {n:?}");
                return ExitCode::from(2);
            }
        }
    }
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match run(cli, argv) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
