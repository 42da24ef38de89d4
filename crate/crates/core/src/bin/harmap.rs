use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::PossibleValuesParser;
use clap::{ArgGroup, Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use harmap::growth::{growth_profile, DEFAULT_SAMPLES, MIN_SAMPLES};
use harmap::report::{encode_ppm, orbit_csv, run_suite, Experiment, ExperimentConfig, OutputKind, Suite};
use harmap::{
    analyze_components, classify_grid_with_threads, classify_orbit, fatou_membership, orbit, ComponentDynamics, Error,
    FatouMode, HolomorphicExpr, Membership, MembershipTag, OrbitTag, PointVerdict,
};

#[derive(Parser)]
#[command(
    name = "harmap",
    version,
    about = "Fatou and Julia sets of harmonic maps h + conj(g) under direct composition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every pixel of the window and write a P6 image.
    Render {
        #[command(flatten)]
        source: Source,
        /// Image path; overrides the config's image outputs.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads. Changes speed only, never output bytes.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Classify one seed and optionally write its orbit as CSV.
    ClassifyPoint {
        #[command(flatten)]
        source: Source,
        /// Seed as `re,im`; defaults to the config's seeds.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        seed_point: Option<Complex64>,
        /// Orbit CSV path; overrides the config's orbit_csv outputs.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and emit a JSON report. Exits 1 if any
    /// check fails.
    Verify {
        #[arg(value_parser = PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
        /// Report path; the report goes to stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Growth profile of an entire function as JSON.
    Growth {
        /// Expression for h; defaults to the analytic part of the configured map.
        #[arg(long = "h", allow_hyphen_values = true)]
        h: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Geometric radii `start,factor,count`.
        #[arg(long, value_parser = parse_radii)]
        radii: Radii,
        /// Circle samples per radius.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["config", "preset"])))]
struct Source {
    /// Experiment config (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Preset name.
    #[arg(long, value_parser = PossibleValuesParser::new(harmap::preset_names()))]
    preset: Option<String>,
}

#[derive(Clone, Debug)]
struct Radii(Vec<f64>);

fn parse_point(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or("expected re,im")?;
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let z = Complex64::new(parse(re)?, parse(im)?);
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err("seed must be finite".into())
    }
}

fn parse_radii(s: &str) -> Result<Radii, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [start, factor, count] = parts[..] else {
        return Err("expected start,factor,count".into());
    };
    let start: f64 = start.parse().map_err(|e| format!("start: {e}"))?;
    let factor: f64 = factor.parse().map_err(|e| format!("factor: {e}"))?;
    let count: usize = count.parse().map_err(|e| format!("count: {e}"))?;
    if !(start.is_finite() && start > 0.0) {
        return Err(format!("start must be positive, got {start}"));
    }
    if !(factor.is_finite() && factor > 1.0) {
        return Err(format!("factor must exceed 1, got {factor}"));
    }
    if count < 5 {
        return Err(format!("count must be at least 5, got {count}"));
    }
    let radii: Vec<f64> = (0..count).map(|k| start * factor.powi(k as i32)).collect();
    if radii.iter().any(|r| !r.is_finite()) {
        return Err("radii overflow".into());
    }
    Ok(Radii(radii))
}

enum Failure {
    Usage(String),
    Runtime(String),
    ChecksFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Syntax { .. } | Error::ExprDomain { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Runtime(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| io_err(path, e))
}

fn load(source: &Source) -> Result<Experiment, Failure> {
    let cfg = match (&source.config, &source.preset) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Some(name)) => ExperimentConfig::for_preset(name),
        (None, None) => unreachable!("clap enforces the group"),
    };
    Ok(cfg.resolve()?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ComponentSummary {
    label: u32,
    size: usize,
    mode: FatouMode,
    touches_boundary: bool,
    dynamics: Option<ComponentDynamics>,
}

#[derive(Serialize)]
struct RenderReport<'a> {
    config: &'a ExperimentConfig,
    fatou_pixels: usize,
    julia_pixels: usize,
    undetermined_pixels: usize,
    components: Vec<ComponentSummary>,
}

fn render(source: &Source, out: Option<PathBuf>, threads: Option<usize>) -> Result<(), Failure> {
    let exp = load(source)?;
    let images: Vec<PathBuf> = match out {
        Some(p) => vec![p],
        None => exp.outputs(OutputKind::Image).map(Path::to_path_buf).collect(),
    };
    if images.is_empty() {
        return Err(Failure::Usage(
            "render needs --out or an image output in the config".into(),
        ));
    }
    let grid = classify_grid_with_threads(&exp.map, &exp.window, &exp.budget, threads)?;
    let bytes = encode_ppm(&grid);
    for path in &images {
        write_file(path, &bytes)?;
    }
    let reports: Vec<&Path> = exp.outputs(OutputKind::Report).collect();
    if !reports.is_empty() {
        let cmap = analyze_components(&exp.map, &grid, &exp.dynamics_budget)?;
        let components = (0..cmap.component_count as usize)
            .map(|k| ComponentSummary {
                label: k as u32 + 1,
                size: cmap.sizes[k],
                mode: cmap.modes[k],
                touches_boundary: cmap.touches_boundary[k],
                dynamics: cmap.dynamics[k],
            })
            .collect();
        let report = RenderReport {
            config: &exp.config,
            fatou_pixels: grid.count(MembershipTag::FatouLike),
            julia_pixels: grid.count(MembershipTag::JuliaLike),
            undetermined_pixels: grid.count(MembershipTag::Undetermined),
            components,
        };
        let text = to_json(&report);
        for path in reports {
            write_file(path, text.as_bytes())?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PointReport {
    seed: Complex64,
    verdict: PointVerdict,
    membership: Membership,
    orbit_class: OrbitTag,
    exit_index: Option<u32>,
    evidence: String,
}

/// `path` for the first seed, `stem-k.ext` for seed `k > 0`.
fn nth_path(path: &Path, k: usize) -> PathBuf {
    if k == 0 {
        return path.to_path_buf();
    }
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{k}"),
    };
    path.with_file_name(name)
}

fn fmt_opt<T: std::fmt::Debug>(v: Option<T>) -> String {
    v.map_or_else(|| "none".into(), |x| format!("{x:?}"))
}

fn classify_point(source: &Source, seed: Option<Complex64>, out: Option<PathBuf>) -> Result<(), Failure> {
    let exp = load(source)?;
    let seeds = match seed {
        Some(z) => vec![z],
        None => exp.config.seeds.clone().unwrap_or_default(),
    };
    if seeds.is_empty() {
        return Err(Failure::Usage(
            "classify-point needs --seed-point or seeds in the config".into(),
        ));
    }
    let csvs: Vec<PathBuf> = match out {
        Some(p) => vec![p],
        None => exp.outputs(OutputKind::OrbitCsv).map(Path::to_path_buf).collect(),
    };
    let mut stdout = std::io::stdout().lock();
    let mut reports = Vec::new();
    for (k, &z) in seeds.iter().enumerate() {
        let membership = fatou_membership(&exp.map, z, &exp.budget);
        let verdict = harmap::classify_point(&exp.map, z, &exp.budget);
        let o = orbit(&exp.map, z, &exp.dynamics_budget);
        let class = classify_orbit(&o, &exp.dynamics_budget);
        let _ = writeln!(
            stdout,
            "seed: {}{:+}i\nmembership: {:?}\nmode: {}\norbit_class: {:?}\nexit_index: {}",
            z.re,
            z.im,
            verdict.membership,
            fmt_opt(verdict.mode),
            class.tag,
            fmt_opt(class.exit_index),
        );
        let text = orbit_csv(&o);
        for path in &csvs {
            write_file(&nth_path(path, k), text.as_bytes())?;
        }
        reports.push(PointReport {
            seed: z,
            verdict,
            membership,
            orbit_class: class.tag,
            exit_index: class.exit_index,
            evidence: class.evidence,
        });
    }
    let text = to_json(&reports);
    for path in exp.outputs(OutputKind::Report) {
        write_file(path, text.as_bytes())?;
    }
    Ok(())
}

fn verify(suite: &str, out: Option<PathBuf>, threads: Option<usize>) -> Result<(), Failure> {
    let suite: Suite = suite.parse()?;
    let report = run_suite(suite, threads)?;
    let text = to_json(&report);
    match out {
        Some(path) => write_file(&path, text.as_bytes())?,
        None => print!("{text}"),
    }
    for c in &report.checks {
        eprintln!(
            "{} {} measured {} (threshold {})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            c.threshold
        );
    }
    for d in &report.discrepancies {
        eprintln!("DISCREPANCY {}: {}", d.name, d.observed);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}

fn growth(
    h: Option<String>,
    config: Option<PathBuf>,
    radii: Radii,
    samples: usize,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    if samples < MIN_SAMPLES {
        return Err(Failure::Usage(format!("--samples must be at least {MIN_SAMPLES}")));
    }
    let expr: HolomorphicExpr = match (h, config) {
        (Some(text), _) => text.parse()?,
        (None, Some(path)) => ExperimentConfig::load(&path)?.resolve()?.map.analytic,
        (None, None) => return Err(Failure::Usage("growth needs --h or --config".into())),
    };
    let profile = growth_profile(&expr, &radii.0, samples)?;
    let text = to_json(&profile);
    match out {
        Some(path) => write_file(&path, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Render { source, out, threads } => render(&source, out, threads),
        Command::ClassifyPoint {
            source,
            seed_point,
            out,
        } => classify_point(&source, seed_point, out),
        Command::Verify { suite, out, threads } => verify(&suite, out, threads),
        Command::Growth {
            h,
            config,
            radii,
            samples,
            out,
        } => growth(h, config, radii, samples, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
