//! The `threatfuse` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use threatfuse_core::fusion::{baseline_classify, map_classify};
use threatfuse_core::region::Point;
use threatfuse_core::sim::{evaluate, Emission, SweepKind, TrialConfig, DEFAULT_RUNS, DEFAULT_SEED};
use threatfuse_core::{Classifier, RegionError, RegionType};

use crate::detections::load_detections;
use crate::error::{Error, Result};
use crate::output::{format_number, write_experiment, write_sweep, ExperimentRow};
use crate::region_file::load_region_file;
use crate::runner::Runner;
use crate::scenario_file::{ScenarioDocument, DEFAULT_CONFIDENCE};

#[derive(Debug, Parser)]
#[command(name = "threatfuse", version, about = "Context-aware Bayesian threat-type classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Posterior, MAP type and baseline vote for one detection set.
    Classify(ClassifyArgs),
    /// Accuracy, macro F1 and per-class F1 per classifier and scenario.
    Experiment(ExperimentArgs),
    /// Accuracy of four variants over a parameter grid.
    Sweep(SweepArgs),
    /// Region type of a position.
    Label(LabelArgs),
    /// Print a scenario as a scenario file.
    Scenario {
        /// Built-in name or scenario file path.
        scenario: String,
    },
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Built-in name or scenario file path.
    #[arg(long, default_value = "basic")]
    scenario: String,
    /// Detection CSV (sensor,confidence,predicted_type).
    #[arg(long)]
    detections: PathBuf,
    /// Region type label.
    #[arg(long, conflicts_with = "position", required_unless_present = "position")]
    region: Option<String>,
    /// Object position as `x,y`; needs --regions.
    #[arg(long, value_parser = parse_point, requires = "regions", allow_hyphen_values = true)]
    position: Option<Point>,
    /// GeoJSON region file.
    #[arg(long)]
    regions: Option<PathBuf>,
    /// Region type for positions outside every polygon.
    #[arg(long = "default")]
    default_region: Option<String>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, default_value_t = DEFAULT_RUNS)]
    runs: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "one-per-sensor", value_parser = parse_emission)]
    emission: Emission,
    /// Worker threads; one per core when absent.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Comma-separated built-in names or scenario file paths.
    #[arg(long, value_delimiter = ',', default_value = "basic,cbrne")]
    scenario: Vec<String>,
    /// Comma-separated classifiers.
    #[arg(long, value_delimiter = ',', default_value = "proposed,baseline", value_parser = parse_classifier)]
    classifier: Vec<Classifier>,
    #[arg(long, default_value_t = 0.0)]
    clutter_rate: f64,
    /// Confidence set of the scenario.
    #[arg(long, default_value = DEFAULT_CONFIDENCE)]
    confidence: String,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// sensors, clutter or prior.
    #[arg(value_parser = parse_sweep)]
    kind: SweepKind,
    #[arg(long, default_value = "basic")]
    scenario: String,
    /// Comma-separated grid values; a default grid when absent.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct LabelArgs {
    /// GeoJSON region file.
    #[arg(long)]
    regions: PathBuf,
    #[arg(long, default_value = "cbrne")]
    scenario: String,
    #[arg(long = "default")]
    default_region: Option<String>,
    #[arg(allow_negative_numbers = true)]
    x: f64,
    #[arg(allow_negative_numbers = true)]
    y: f64,
}

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let coord = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok(Point::new(coord(x)?, coord(y)?))
}

fn parse_emission(s: &str) -> std::result::Result<Emission, String> {
    s.parse().map_err(|e: threatfuse_core::SimError| e.to_string())
}

fn parse_sweep(s: &str) -> std::result::Result<SweepKind, String> {
    s.parse().map_err(|e: threatfuse_core::SimError| e.to_string())
}

fn parse_classifier(s: &str) -> std::result::Result<Classifier, String> {
    match s {
        "proposed" => Ok(Classifier::Proposed),
        "baseline" => Ok(Classifier::Baseline),
        other => Err(format!("unknown classifier {other:?}, expected proposed or baseline")),
    }
}

/// Parses `args` (program name first) and executes the command, printing to
/// `out`. Help and version requests print and succeed.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            write!(out, "{}", e.render()).map_err(stdout_error)?;
            return Ok(());
        }
        Err(e) => return Err(Error::Usage(e.render().to_string().trim_end().to_string())),
    };
    match cli.command {
        Command::Classify(a) => classify(a, out),
        Command::Experiment(a) => experiment(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::Label(a) => label(a, out),
        Command::Scenario { scenario } => {
            let doc = ScenarioDocument::resolve(&scenario)?;
            write!(out, "{}", doc.to_toml()).map_err(stdout_error)
        }
    }
}

fn stdout_error(source: std::io::Error) -> Error {
    Error::Write {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

fn region_by_label(doc: &ScenarioDocument, label: &str) -> Result<RegionType> {
    let scenario = &doc.scenario;
    doc.aliases
        .resolve(label)
        .ok()
        .and_then(|canonical| scenario.region(canonical))
        .ok_or_else(|| {
            Error::Region(RegionError::UnknownRegion {
                label: label.to_string(),
                valid: scenario.region_labels().to_vec(),
            })
        })
}

fn locate(doc: &ScenarioDocument, regions: &Path, default_region: Option<&str>, p: Point) -> Result<RegionType> {
    let index = load_region_file(regions, doc.scenario.region_labels(), &doc.aliases, default_region)?;
    Ok(index.lookup(p)?)
}

fn classify(a: ClassifyArgs, out: &mut dyn Write) -> Result<()> {
    let doc = ScenarioDocument::resolve(&a.scenario)?;
    let region = match (&a.region, a.position) {
        (Some(label), _) => region_by_label(&doc, label)?,
        (None, Some(p)) => {
            let regions = a.regions.as_deref().expect("clap requires --regions");
            locate(&doc, regions, a.default_region.as_deref(), p)?
        }
        (None, None) => unreachable!("clap requires --region or --position"),
    };
    let s = &doc.scenario;
    let z = load_detections(&a.detections, s)?;
    let (map, posterior) = map_classify(&z, region, s)?;
    let baseline = baseline_classify(&z, region, s)?;

    let mut text = format!("region {}\n", s.region_label(region));
    for t in s.threat_types() {
        text += &format!("{} {}\n", s.type_label(t), format_number(posterior.prob(t)));
    }
    text += &format!("map {}\nbaseline {}\n", s.type_label(map), s.type_label(baseline));
    out.write_all(text.as_bytes()).map_err(stdout_error)
}

fn base_config(doc: &ScenarioDocument, confidence: &str, run: &RunArgs) -> Result<TrialConfig> {
    let mut cfg = TrialConfig::new(doc.scenario.clone());
    cfg.confidence = doc.confidence_model(confidence)?;
    cfg.emission = run.emission;
    cfg.runs = run.runs;
    cfg.seed = run.seed;
    Ok(cfg)
}

/// Sends a rendered CSV to `--out` or to `out`.
fn emit(buf: &[u8], path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, buf).map_err(|source| Error::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => out.write_all(buf).map_err(stdout_error),
    }
}

fn experiment(a: ExperimentArgs, out: &mut dyn Write) -> Result<()> {
    let runner = Runner::new(a.run.threads)?;
    let docs = a
        .scenario
        .iter()
        .map(|name| ScenarioDocument::resolve(name))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for doc in &docs {
        let mut cfg = base_config(doc, &a.confidence, &a.run)?;
        cfg.clutter_rate = a.clutter_rate;
        for &classifier in &a.classifier {
            cfg.classifier = classifier;
            let records = runner.run(&cfg)?;
            let s = &doc.scenario;
            let report = evaluate(&records, s.num_types())?;
            rows.push(ExperimentRow::new(classifier.name(), s.name(), s.type_labels(), &report));
        }
    }
    let mut buf = Vec::new();
    write_experiment(&mut buf, &rows)?;
    emit(&buf, a.run.out.as_deref(), out)
}

fn sweep(a: SweepArgs, out: &mut dyn Write) -> Result<()> {
    let runner = Runner::new(a.run.threads)?;
    let doc = ScenarioDocument::resolve(&a.scenario)?;
    let base = base_config(&doc, DEFAULT_CONFIDENCE, &a.run)?;
    let grid = a
        .grid
        .unwrap_or_else(|| a.kind.default_grid(doc.scenario.sensors().len()));
    let table = runner.sweep(a.kind, &base, &grid)?;
    let mut buf = Vec::new();
    write_sweep(&mut buf, &table)?;
    emit(&buf, a.run.out.as_deref(), out)
}

fn label(a: LabelArgs, out: &mut dyn Write) -> Result<()> {
    let doc = ScenarioDocument::resolve(&a.scenario)?;
    let r = locate(&doc, &a.regions, a.default_region.as_deref(), Point::new(a.x, a.y))?;
    writeln!(out, "{}", doc.scenario.region_label(r)).map_err(stdout_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> String {
        let mut buf = Vec::new();
        run(std::iter::once("threatfuse").chain(args.iter().copied()), &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    fn run_err(args: &[&str]) -> Error {
        run(std::iter::once("threatfuse").chain(args.iter().copied()), &mut Vec::new()).unwrap_err()
    }

    #[test]
    fn help_succeeds() {
        assert!(run_ok(&["--help"]).contains("experiment"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_err(&["frobnicate"]).exit_code(), 1);
        assert_eq!(run_err(&["sweep", "altitude"]).exit_code(), 1);
        assert_eq!(run_err(&["experiment", "--emission", "poisson"]).exit_code(), 1);
        assert_eq!(run_err(&["experiment", "--scenario", "nowhere.toml"]).exit_code(), 1);
        assert_eq!(run_err(&["classify", "--detections", "x.csv"]).exit_code(), 1);
    }

    #[test]
    fn experiment_to_stdout() {
        let text = run_ok(&["experiment", "--scenario", "basic", "--runs", "200", "--threads", "2"]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "method,scenario,accuracy,f1,A,B,C");
        assert!(lines[1].starts_with("Proposed,basic,"));
        assert!(lines[2].starts_with("Baseline,basic,"));
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn sweep_validation() {
        let e = run_err(&["sweep", "clutter", "--grid", "20", "--runs", "10"]);
        assert_eq!(e.exit_code(), 2);
        let e = run_err(&["sweep", "sensors", "--grid", "8", "--runs", "10"]);
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn scenario_dump_round_trips() {
        let text = run_ok(&["scenario", "cbrne"]);
        let doc = ScenarioDocument::parse(&text, Path::new("dump.toml")).unwrap();
        assert_eq!(doc, ScenarioDocument::builtin("cbrne").unwrap());
    }

    #[test]
    fn point_parsing() {
        assert_eq!(parse_point("1.5, -2").unwrap(), Point::new(1.5, -2.0));
        assert!(parse_point("1.5").is_err());
        assert!(parse_point("a,b").is_err());
    }
}
