mod config;
mod presets;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use erfbp::equilibria::{find_labeled, Label, NewtonSettings, SearchGrid};
use erfbp::integrator::{integrate_with, IntegratorOptions, SampleTimes};
use erfbp::io::{self, Format};
use erfbp::model::{build_configuration_with, MassTriple, ModelOptions, PhaseState, PrimaryConfiguration};
use erfbp::scan::{self, FamilyField, GridSpec, PlanarCurve, Region, ScanOptions};
use erfbp::stability::analyze;
use erfbp::ErfbpError;

#[derive(Parser, Debug)]
#[command(name = "erfbp", version, about = "Equilibria, stability and mass-space maps of the equilateral restricted four-body problem")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "csv", value_parser = parse_format)]
    pub format: Format,
    /// Output file (stdout when omitted).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Config file of `key = value` lines; explicit flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Allow zero masses (limit problems with a vanishing primary).
    #[arg(long, global = true)]
    pub degenerate_limit: bool,
    /// Run a named preset and write its files to --output-dir.
    #[arg(long, value_parser = presets::parse_preset)]
    pub reproduce: Option<presets::Preset>,
    /// Directory for --reproduce outputs.
    #[arg(long, default_value = ".")]
    pub output_dir: PathBuf,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// All equilibria for one mass pair, labelled, with stability reports.
    Equilibria(MassArgs),
    /// Stability report of one labelled equilibrium.
    Stability {
        #[command(flatten)]
        masses: MassArgs,
        #[arg(long, value_parser = parse_label)]
        label: Label,
    },
    /// Equilibrium-count and stability map over a region of the mass simplex.
    Scan {
        #[arg(long, default_value = "simplex", value_parser = parse_region)]
        region: Region,
        /// Cells per axis (default 300 for the simplex, 400 for regions).
        #[arg(long)]
        resolution: Option<usize>,
        /// Skip the per-family stability verdicts.
        #[arg(long)]
        counts_only: bool,
    },
    /// p:q resonance curve of one family.
    Resonance {
        #[arg(long, value_parser = parse_label)]
        label: Label,
        #[arg(long, default_value = "1:1", value_parser = parse_ratio)]
        ratio: (u32, u32),
        #[arg(long, default_value = "I", value_parser = parse_region)]
        region: Region,
        #[arg(long, default_value_t = 400)]
        resolution: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Keep open ends where the grid stops instead of extrapolating to zero-mass edges.
        #[arg(long)]
        no_edge_extension: bool,
    },
    /// Zero set of the Routh quantity.
    Routh {
        #[arg(long, default_value_t = 400)]
        resolution: usize,
    },
    /// Boundary between the 8- and 10-equilibrium regimes.
    Bifurcation {
        #[arg(long, default_value_t = 300)]
        resolution: usize,
    },
    /// Integrate one orbit in the rotating frame.
    Integrate {
        #[command(flatten)]
        masses: MassArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        vx: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        vy: f64,
        #[arg(long, allow_hyphen_values = true)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Number of uniform output intervals; both endpoints are written.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct MassArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub m1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub m2: f64,
    /// Newton tolerance on |grad Omega|.
    #[arg(long, default_value_t = 1e-11)]
    pub newton_tol: f64,
    /// Search grid points per axis.
    #[arg(long, default_value_t = 400)]
    pub search_resolution: usize,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: ErfbpError| e.to_string())
}

fn parse_label(s: &str) -> Result<Label, String> {
    match s.parse::<Label>() {
        Ok(Label::Unlabeled) | Err(_) => Err(format!("unknown label '{s}' (L1..L10)")),
        Ok(l) => Ok(l),
    }
}

fn parse_region(s: &str) -> Result<Region, String> {
    s.parse().map_err(|e: ErfbpError| e.to_string())
}

fn parse_ratio(s: &str) -> Result<(u32, u32), String> {
    let (p, q) = s.split_once(':').ok_or_else(|| format!("ratio '{s}' must look like p:q"))?;
    let p = p.trim().parse().map_err(|_| format!("bad ratio numerator in '{s}'"))?;
    let q = q.trim().parse().map_err(|_| format!("bad ratio denominator in '{s}'"))?;
    Ok((p, q))
}

pub fn model_options(degenerate: bool) -> ModelOptions {
    if degenerate {
        ModelOptions::degenerate()
    } else {
        ModelOptions::default()
    }
}

pub fn configuration(m: &MassArgs, degenerate: bool) -> erfbp::Result<PrimaryConfiguration> {
    let opts = model_options(degenerate);
    let masses = MassTriple::from_pair_with(m.m1, m.m2, &opts)?;
    build_configuration_with(masses, &opts)
}

pub fn equilibrium_doc(m: &MassArgs, degenerate: bool) -> erfbp::Result<io::EquilibriumDocument> {
    if !(m.newton_tol > 0.0) || m.search_resolution < 4 {
        return Err(ErfbpError::InvalidInput("newton-tol must be positive and search-resolution >= 4".into()));
    }
    let cfg = configuration(m, degenerate)?;
    let grid = SearchGrid { resolution: m.search_resolution, ..SearchGrid::default() };
    let set = find_labeled(&cfg, &grid, &NewtonSettings::with_tol(m.newton_tol))?;
    io::equilibrium_document(&set, &cfg)
}

pub fn region_grid(region: Region, resolution: Option<usize>) -> erfbp::Result<GridSpec> {
    let n = resolution.unwrap_or(if region == Region::Simplex { 300 } else { 400 });
    let g = GridSpec::new(region, n);
    g.validate()?;
    if region == Region::Rect {
        return Err(ErfbpError::InvalidInput("region must be simplex, I, II or III".into()));
    }
    Ok(g)
}

pub fn resonance_curves(
    label: Label,
    (p, q): (u32, u32),
    grid: &GridSpec,
    tol: f64,
    extend: bool,
) -> erfbp::Result<Vec<PlanarCurve>> {
    if !(tol > 0.0) {
        return Err(ErfbpError::InvalidInput("tol must be positive".into()));
    }
    let field = FamilyField::walk(grid, &[label]);
    let curves = scan::trace_resonance_in(&field, label, p, q, tol)?;
    if !extend {
        return Ok(curves);
    }
    let probe = field.probe(label);
    let f = move |m: [f64; 2]| probe.resonance(m, p, q);
    let reach = 2.0 * grid.margin + 2.0 * grid.diagonal();
    Ok(curves.iter().map(|c| scan::extend_to_edges(c, &f, reach, grid.diagonal())).collect())
}

fn run(cli: &Cli) -> erfbp::Result<Option<Vec<u8>>> {
    if let Some(preset) = cli.reproduce {
        presets::run(preset, &cli.output_dir)?;
        return Ok(None);
    }
    let Some(command) = &cli.command else {
        return Err(ErfbpError::InvalidInput("no command given (see --help)".into()));
    };
    let fmt = cli.format;
    let degenerate = cli.degenerate_limit;
    let mut buf = Vec::new();
    match command {
        Command::Equilibria(m) => io::write_equilibria(&equilibrium_doc(m, degenerate)?, fmt, &mut buf)?,
        Command::Stability { masses, label } => {
            let cfg = configuration(masses, degenerate)?;
            let grid = SearchGrid { resolution: masses.search_resolution, ..SearchGrid::default() };
            let set = find_labeled(&cfg, &grid, &NewtonSettings::with_tol(masses.newton_tol))?;
            let point = set.get(*label).ok_or_else(|| ErfbpError::FamilyLost {
                label: label.to_string(),
                m1: masses.m1,
                m2: masses.m2,
            })?;
            let doc = io::EquilibriumDocument {
                masses: set.masses,
                count: 1,
                points: vec![io::EquilibriumRecord {
                    grad_norm: point.grad_norm,
                    det: point.degeneracy,
                    fold: point.fold,
                    stability: analyze(point, &cfg)?,
                }],
            };
            io::write_equilibria(&doc, fmt, &mut buf)?;
        }
        Command::Scan { region, resolution, counts_only } => {
            let grid = region_grid(*region, *resolution)?;
            let opts = if *counts_only {
                ScanOptions::counts_only()
            } else if *region == Region::Simplex {
                ScanOptions::simplex()
            } else {
                ScanOptions::region()
            };
            let map = scan::scan_with(&grid, &opts)?;
            match fmt {
                Format::Csv => io::write_region_map_csv(&map, &mut buf)?,
                Format::Json => io::write_json(&io::region_summary(&map), &mut buf)?,
            }
        }
        Command::Resonance { label, ratio, region, resolution, tol, no_edge_extension } => {
            let grid = region_grid(*region, Some(*resolution))?;
            let curves = resonance_curves(*label, *ratio, &grid, *tol, !no_edge_extension)?;
            io::write_curves(&curves, fmt, &mut buf)?;
        }
        Command::Routh { resolution } => {
            if *resolution < 8 {
                return Err(ErfbpError::InvalidInput("resolution must be at least 8".into()));
            }
            io::write_curves(&scan::routh_curve(*resolution), fmt, &mut buf)?;
        }
        Command::Bifurcation { resolution } => {
            let grid = region_grid(Region::Simplex, Some(*resolution))?;
            let map = scan::scan_with(&grid, &ScanOptions::counts_only())?;
            let ex = scan::extract_bifurcation(&map);
            if !ex.all_closed() || ex.curves.is_empty() {
                report(&ErfbpError::OpenCurveWarning, "warning");
            }
            io::write_curves(&ex.curves, fmt, &mut buf)?;
        }
        Command::Integrate { masses, x, y, vx, vy, t_end, tol, samples } => {
            let cfg = configuration(masses, degenerate)?;
            if *samples < 2 {
                return Err(ErfbpError::InvalidInput("samples must be at least 2".into()));
            }
            let opts = IntegratorOptions { samples: SampleTimes::Uniform(*samples), ..IntegratorOptions::new(*tol) };
            let traj = integrate_with(PhaseState::new(*x, *y, *vx, *vy), &cfg, *t_end, &opts)?;
            io::write_trajectory(&traj, &cfg, fmt, &mut buf)?;
        }
    }
    Ok(Some(buf))
}

fn error_kind(e: &ErfbpError) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn report(e: &ErfbpError, class: &str) {
    let msg = serde_json::json!({ "status": class, "kind": error_kind(e), "message": e.to_string() });
    eprintln!("{msg}");
}

fn exit_code(e: &ErfbpError) -> (u8, &'static str) {
    if e.is_validation() {
        (2, "validation")
    } else {
        (3, "numerical")
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let args = match config::merge_args(args) {
        Ok(a) => a,
        Err(e) => {
            report(&e, "validation");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(n) = std::env::var("ERFBP_THREADS") {
        match n.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                report(&ErfbpError::InvalidInput(format!("ERFBP_THREADS='{n}' is not a positive integer")), "validation");
                return ExitCode::from(2);
            }
        }
    }
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(buf)) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &buf),
                None => std::io::stdout().lock().write_all(&buf),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    report(&ErfbpError::from(e), "numerical");
                    ExitCode::from(3)
                }
            }
        }
        Err(e) => {
            let (code, class) = exit_code(&e);
            report(&e, class);
            ExitCode::from(code)
        }
    }
}
