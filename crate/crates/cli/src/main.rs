//! `cusped`: build truncated cusped Cayley graphs and horoballs, run the
//! coarse-geometry analyses from a run spec, export graphs and reports.
//!
//! Exit codes: 0 success, 1 spec error, 2 analysis error, 3 i/o error.

use clap::{Parser, Subcommand};
use cusped_core::caps::ResourceCaps;
use cusped_core::cusped::{CuspedParams, CuspedTruncation};
use cusped_core::export::{export_graph, ExportFormat};
use cusped_core::groups::GroupPair;
use cusped_core::horoball::{HoroballParams, HoroballTruncation};
use cusped_core::report::{report_json, RunReport};
use cusped_core::runner::{filter_spec, Runner};
use cusped_core::runspec::{parse_spec, RunSpec};
use cusped_core::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cusped", version, about)]
struct Cli {
    /// Worker threads for parallel analyses (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the cusped truncation and print its summary.
    Build {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run only the delta analyses from the spec.
    Delta(RunArgs),
    /// Run only the distortion analyses from the spec.
    Distortion(RunArgs),
    /// Run only the perfection analyses from the spec.
    Perfection(RunArgs),
    /// Run only the extend analyses from the spec.
    Extend(RunArgs),
    /// Run every analysis in the spec.
    Run(RunArgs),
    /// Export the spec's cusped truncation (or one horoball) as DOT/CSV.
    Export {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "dot")]
        format: String,
        /// Export a standalone horoball over this peripheral instead.
        #[arg(long)]
        horoball_peripheral: Option<usize>,
        #[arg(long)]
        width_radius: Option<u32>,
        #[arg(long)]
        max_depth: Option<u32>,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Output directory for report.json (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// `json`, or `csv` to also dump per-analysis row tables (needs --out).
    #[arg(long, default_value = "json")]
    format: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // Sample lists are fixed before dispatch and reductions are
        // order-independent, so thread count cannot change results.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<i32, Error> {
    let caps = ResourceCaps::default().with_env_override();
    match command {
        Command::Build { spec, out } => {
            let spec = parse_spec(&spec)?;
            let pair = pair_of(&spec)?;
            let x = build_cusped_of(&spec, &pair, &caps)?;
            let json = serde_json::to_string_pretty(x.summary()).expect("summary serializes");
            emit(out.as_deref(), "summary.json", &json)?;
            Ok(0)
        }
        Command::Delta(args) => run_filtered(args, Some("delta"), &caps),
        Command::Distortion(args) => run_filtered(args, Some("distortion"), &caps),
        Command::Perfection(args) => run_filtered(args, Some("perfection"), &caps),
        Command::Extend(args) => run_filtered(args, Some("extend"), &caps),
        Command::Run(args) => run_filtered(args, None, &caps),
        Command::Export {
            spec,
            out,
            format,
            horoball_peripheral,
            width_radius,
            max_depth,
        } => {
            let spec = parse_spec(&spec)?;
            let pair = pair_of(&spec)?;
            let format: ExportFormat = format.parse()?;
            std::fs::create_dir_all(&out).map_err(|e| Error::Io {
                path: out.display().to_string(),
                source: e,
            })?;
            let (graph, stem) = match horoball_peripheral {
                Some(p) => {
                    let (w, d) = match (width_radius, max_depth) {
                        (Some(w), Some(d)) => (w, d),
                        _ => {
                            return Err(Error::Input(
                                "horoball export needs --width-radius and --max-depth".into(),
                            ))
                        }
                    };
                    let per = pair
                        .peripherals()
                        .get(p)
                        .ok_or_else(|| Error::Input(format!("peripheral {p} out of range")))?;
                    let base = per.model().clone().with_radius_cap(
                        per.model().radius_cap().max(w),
                    );
                    let h = HoroballTruncation::over_ball(
                        &base,
                        HoroballParams { width_radius: w, max_depth: d },
                        &caps,
                    )?;
                    (h.to_space_graph(), out.join(format!("horoball{p}")))
                }
                None => {
                    let x = build_cusped_of(&spec, &pair, &caps)?;
                    (x.graph().clone(), out.join("cusped"))
                }
            };
            for path in export_graph(&graph, format, &stem)? {
                println!("{path}");
            }
            Ok(0)
        }
    }
}

fn run_filtered(args: RunArgs, only: Option<&str>, caps: &ResourceCaps) -> Result<i32, Error> {
    let spec = parse_spec(&args.spec)?;
    let filtered = filter_spec(&spec, only);
    let runner = Runner::new(*caps);
    let (report, exit) = runner.run(&filtered)?;
    write_report(args.out.as_deref(), &report)?;
    match args.format.as_str() {
        "json" => {}
        "csv" => {
            let dir = args.out.as_deref().ok_or_else(|| {
                Error::Input("--format csv needs an --out directory".into())
            })?;
            write_row_csvs(dir, &report)?;
        }
        other => return Err(Error::Input(format!("unknown report format '{other}'"))),
    }
    Ok(exit)
}

/// Per-analysis CSV row dumps next to the report.
fn write_row_csvs(dir: &Path, report: &RunReport) -> Result<(), Error> {
    use cusped_core::report::{distortion_rows_csv, perfection_rows_csv, AnalysisOutcome};
    for (i, outcome) in report.analyses.iter().enumerate() {
        let (name, content) = match outcome {
            AnalysisOutcome::Distortion(d) => {
                (format!("distortion_{i}.csv"), distortion_rows_csv(&d.distortion))
            }
            AnalysisOutcome::Perfection { scan, .. } => {
                (format!("perfection_{i}.csv"), perfection_rows_csv(scan))
            }
            _ => continue,
        };
        let path = dir.join(name);
        std::fs::write(&path, content).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
    }
    Ok(())
}

fn write_report(out: Option<&Path>, report: &RunReport) -> Result<(), Error> {
    let json = report_json(report);
    emit(out, "report.json", json.trim_end())
}

fn emit(out: Option<&Path>, name: &str, content: &str) -> Result<(), Error> {
    match out {
        None => {
            println!("{content}");
            Ok(())
        }
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::Io {
                path: dir.display().to_string(),
                source: e,
            })?;
            let path = dir.join(name);
            std::fs::write(&path, format!("{content}\n")).map_err(|e| Error::Io {
                path: path.display().to_string(),
                source: e,
            })
        }
    }
}

fn pair_of(spec: &RunSpec) -> Result<GroupPair, Error> {
    let mut pair = GroupPair::from_descriptor(&spec.pair)?;
    if let Some(cap) = spec.truncation.as_ref().and_then(|t| t.radius_cap) {
        let ambient = pair.ambient().clone().with_radius_cap(cap);
        let gens: Vec<Vec<u16>> = pair
            .peripherals()
            .iter()
            .map(|p| p.gens().to_vec())
            .collect();
        pair = GroupPair::new(ambient, gens)?;
    }
    Ok(pair)
}

fn build_cusped_of(
    spec: &RunSpec,
    pair: &GroupPair,
    caps: &ResourceCaps,
) -> Result<CuspedTruncation, Error> {
    let t = spec
        .truncation
        .as_ref()
        .ok_or_else(|| Error::Input("spec has no [truncation] section".into()))?;
    CuspedTruncation::build(
        pair.clone(),
        CuspedParams {
            cayley_radius: t.cayley_radius,
            horoball_depth: t.horoball_depth,
            margin: t.margin,
        },
        caps,
    )
}
