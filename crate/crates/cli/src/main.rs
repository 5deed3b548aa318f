//! `dram3d`: evaluate bitline routing configurations for stacked DRAM
//! arrays, sweep layer counts, check bonding feasibility, run the
//! bundled calibration and regenerate the reference comparison.

mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dram3d_core::projection::calibrate::Calibration;
use dram3d_core::report::{fmt_sig6, reports_to_csv, EvaluationReport};
use dram3d_core::topology::{feasibility, hcb_pitch};
use dram3d_core::{CalibratedModel, Document, Scheme};

#[derive(Parser)]
#[command(
    name = "dram3d",
    version,
    about = "Design-space exploration for monolithic 3D DRAM with CMOS-bonded periphery"
)]
struct Cli {
    /// JSON configuration file (defaults to the bundled reference setup).
    #[arg(long, global = true, env = "DRAM3D_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one configuration and print its full report.
    Evaluate {
        /// Technology profile name (e.g. d1b, si3d, aos3d).
        #[arg(long)]
        profile: String,
        /// Routing scheme: direct_blsa | bl_strap | core_mux | selector_strap.
        #[arg(long, value_parser = parse_scheme, default_value = "selector_strap")]
        scheme: Scheme,
        /// Layer count (stacked profiles only).
        #[arg(long)]
        layers: Option<u32>,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
        /// Also write the report to a file.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Sweep layer counts and write one report row per count.
    Sweep {
        #[arg(long)]
        profile: String,
        #[arg(long, value_parser = parse_scheme, default_value = "selector_strap")]
        scheme: Scheme,
        /// Inclusive layer range, `FROM..TO` or `FROM..TO:STEP`.
        #[arg(long, value_name = "RANGE", default_value = "10..200")]
        layers: String,
        /// Output CSV path (default `sweep_<profile>.csv`).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Also write SVG plots next to the CSV.
        #[arg(long)]
        svg: bool,
    },
    /// Side-by-side comparison of the bundled configurations.
    Compare {
        /// Emit CSV instead of the aligned text table.
        #[arg(long)]
        csv: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run the calibration stages and write the fitted parameters.
    Calibrate {
        /// Output path for the calibration result (default `calibration.json`).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Bond-pitch feasibility matrix over stacked profiles and schemes.
    Feasibility {
        /// Manufacturable minimum pad pitch in μm (overrides the config).
        #[arg(long, value_name = "UM")]
        min_pitch: Option<f64>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Calibrate, compare and sweep, then diff against golden outputs.
    #[command(name = "reproduce-paper")]
    ReproducePaper {
        /// Output directory (default `reproduction`).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Also write SVG plots.
        #[arg(long)]
        svg: bool,
    },
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug)]
enum CliError {
    /// Bad input: missing/invalid config, flags or model preconditions.
    Input(String),
    /// Calibration failed to converge.
    Unconverged(String),
    /// Golden-output mismatch in reproduce-paper.
    Mismatch(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Unconverged(_) => ExitCode::from(3),
            CliError::Mismatch(_) => ExitCode::from(1),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Unconverged(m) | CliError::Mismatch(m) => {
                f.write_str(m)
            }
        }
    }
}

impl From<dram3d_core::Error> for CliError {
    fn from(e: dram3d_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("io error: {e}"))
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Load the document plus the directory golden outputs live next to.
fn load_document(config: &Option<PathBuf>) -> CliResult<(Document, Option<PathBuf>)> {
    match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            let doc = Document::from_json(&text)?;
            Ok((doc, path.parent().map(Path::to_path_buf)))
        }
        None => Ok((Document::paper_defaults(), None)),
    }
}

fn calibrated(doc: &Document) -> CliResult<CalibratedModel> {
    let model = CalibratedModel::from_document(doc)?;
    if !model.calibration.converged {
        return Err(CliError::Unconverged(format!(
            "calibration did not converge; residuals:\n{}",
            residual_table(&model.calibration)
        )));
    }
    Ok(model)
}

fn residual_table(cal: &Calibration) -> String {
    let mut out = String::new();
    let width = cal
        .residuals
        .keys()
        .map(|k| k.len())
        .max()
        .unwrap_or(0)
        .max(6);
    for (name, r) in &cal.residuals {
        out.push_str(&format!("{name:width$}  {:>13}\n", fmt_sig6(*r)));
    }
    out
}

fn parameter_table(cal: &Calibration) -> String {
    let mut out = String::new();
    let width = cal
        .parameters
        .keys()
        .map(|k| k.len())
        .max()
        .unwrap_or(0)
        .max(6);
    for (name, p) in &cal.parameters {
        out.push_str(&format!(
            "{name:width$}  {:>13}  [{}, {}]\n",
            fmt_sig6(p.value),
            fmt_sig6(p.lower),
            fmt_sig6(p.upper)
        ));
    }
    out
}

fn parse_layer_range(text: &str) -> CliResult<(u32, u32, u32)> {
    let bad = || CliError::Input(format!("invalid layer range `{text}` (expected FROM..TO[:STEP])"));
    let (range, step) = match text.split_once(':') {
        Some((r, s)) => (r, s.parse::<u32>().map_err(|_| bad())?),
        None => (text, 1),
    };
    let (from, to) = range.split_once("..").ok_or_else(bad)?;
    let from = from.trim().parse::<u32>().map_err(|_| bad())?;
    let to = to.trim().parse::<u32>().map_err(|_| bad())?;
    if from == 0 || to < from || step == 0 {
        return Err(CliError::Input(format!(
            "empty or non-increasing layer range `{text}`"
        )));
    }
    Ok((from, to, step))
}

fn write_file(path: &Path, content: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, content)?;
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let (doc, config_dir) = load_document(&cli.config)?;
    match cli.command {
        Command::Evaluate {
            profile,
            scheme,
            layers,
            csv,
            out,
        } => {
            let model = calibrated(&doc)?;
            let report = model.report(&profile, scheme, layers)?;
            let text = if csv {
                format!("{}\n{}\n", EvaluationReport::CSV_HEADER, report.csv_row())
            } else {
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report.to_json())
                        .expect("report serialization cannot fail")
                )
            };
            print!("{text}");
            if let Some(path) = out {
                write_file(&path, &text)?;
            }
            Ok(())
        }
        Command::Sweep {
            profile,
            scheme,
            layers,
            out,
            svg,
        } => {
            let (from, to, step) = parse_layer_range(&layers)?;
            let model = calibrated(&doc)?;
            let reports = model.sweep(&profile, scheme, from, to, step)?;
            let csv = reports_to_csv(&reports);
            let path = out.unwrap_or_else(|| PathBuf::from(format!("sweep_{profile}.csv")));
            write_file(&path, &csv)?;
            println!(
                "wrote {} rows ({} layers {from}..{to} step {step}) to {}",
                reports.len(),
                profile,
                path.display()
            );
            if svg {
                for (name, plot) in sweep_plots(&profile, &reports) {
                    let svg_path = path.with_file_name(name);
                    write_file(&svg_path, &plot)?;
                    println!("wrote {}", svg_path.display());
                }
            }
            Ok(())
        }
        Command::Compare { csv, out } => {
            let model = calibrated(&doc)?;
            let table = model.comparison()?;
            let text = if csv { table.to_csv() } else { table.to_text() };
            print!("{text}");
            if let Some(path) = out {
                write_file(&path, &table.to_csv())?;
            }
            Ok(())
        }
        Command::Calibrate { out } => {
            let model = calibrated(&doc)?;
            println!("converged: {}", model.calibration.converged);
            println!("\nfitted parameters:");
            print!("{}", parameter_table(&model.calibration));
            println!("\nrelative residuals:");
            print!("{}", residual_table(&model.calibration));
            let path = out.unwrap_or_else(|| PathBuf::from("calibration.json"));
            write_file(&path, &calibration_json(&model))?;
            println!("\nwrote {}", path.display());
            Ok(())
        }
        Command::Feasibility { min_pitch, out } => {
            let model = calibrated(&doc)?;
            let min_pitch = min_pitch.unwrap_or(model.state.min_pitch_um);
            if min_pitch <= 0.0 {
                return Err(CliError::Input("minimum pitch must be positive".into()));
            }
            let csv = feasibility_matrix(&model, min_pitch)?;
            print!("{}", csv.replace(',', "  "));
            if let Some(path) = out {
                write_file(&path, &csv)?;
            }
            Ok(())
        }
        Command::ReproducePaper { out, svg } => {
            let outdir = out.unwrap_or_else(|| PathBuf::from("reproduction"));
            let golden = config_dir
                .map(|d| d.join("expected"))
                .or_else(|| {
                    let local = PathBuf::from("configs/expected");
                    local.is_dir().then_some(local)
                });
            reproduce(&doc, &outdir, svg, golden.as_deref())
        }
    }
}

fn calibration_json(model: &CalibratedModel) -> String {
    let value = serde_json::json!({
        "calibration": model.calibration,
        "provenance": model.provenance,
    });
    let mut text = serde_json::to_string_pretty(&value).expect("serialization cannot fail");
    text.push('\n');
    text
}

fn sweep_plots(profile: &str, reports: &[EvaluationReport]) -> Vec<(String, String)> {
    let margin = svg::line_plot(
        &format!("{profile}: sense margin vs bit density"),
        "bit density (Gb/mm2)",
        "margin (mV)",
        &[
            svg::Series {
                label: "clean".to_string(),
                points: reports
                    .iter()
                    .map(|r| (r.bit_density, r.sense_margin))
                    .collect(),
            },
            svg::Series {
                label: "after disturb".to_string(),
                points: reports
                    .iter()
                    .map(|r| (r.bit_density, r.margin_after_disturb))
                    .collect(),
            },
        ],
    );
    let height = svg::line_plot(
        &format!("{profile}: stack height vs layers"),
        "layers",
        "stack height (um)",
        &[svg::Series {
            label: "height".to_string(),
            points: reports
                .iter()
                .filter_map(|r| {
                    r.stack_height
                        .map(|h| (r.n_layers.unwrap_or(0) as f64, h))
                })
                .collect(),
        }],
    );
    vec![
        (format!("sweep_{profile}_margin.svg"), margin),
        (format!("sweep_{profile}_height.svg"), height),
    ]
}

fn feasibility_matrix(model: &CalibratedModel, min_pitch: f64) -> CliResult<String> {
    let mut out = String::from("profile,scheme,hcb_pitch_um,feasible,pitch_margin_um\n");
    for (name, profile) in &model.state.profiles {
        if !profile.is_stacked() {
            continue;
        }
        for scheme in Scheme::ALL {
            let cfg = model.state.array_config(name, scheme, Some(1))?;
            let pitch = hcb_pitch(&cfg)?;
            let verdict = feasibility(&cfg, min_pitch)?;
            out.push_str(&format!(
                "{name},{scheme},{},{},{}\n",
                fmt_sig6(pitch),
                verdict.feasible,
                fmt_sig6(verdict.pitch_margin)
            ));
        }
    }
    Ok(out)
}

/// Calibrate, emit the comparison, per-profile sweeps and the
/// feasibility matrix, then diff everything against the golden files.
fn reproduce(doc: &Document, outdir: &Path, svg: bool, golden: Option<&Path>) -> CliResult<()> {
    let model = calibrated(doc)?;
    std::fs::create_dir_all(outdir)?;

    let mut files: Vec<(String, String)> = Vec::new();
    files.push(("calibration.json".to_string(), calibration_json(&model)));

    let table = model.comparison()?;
    files.push(("compare.csv".to_string(), table.to_csv()));
    files.push(("compare.txt".to_string(), table.to_text()));

    let mut summary = String::new();
    summary.push_str(&format!(
        "calibration converged: {}\n",
        model.calibration.converged
    ));
    for (profile, scheme, layers) in model.comparison_points()? {
        let r = model.report(&profile, scheme, layers)?;
        let layers_txt = layers.map(|n| format!("{n}L")).unwrap_or_else(|| "-".into());
        summary.push_str(&format!(
            "{profile} ({scheme}, {layers_txt}): density {} Gb/mm2, t_rc {} ns, e_read {} fJ, e_write {} fJ, margin {} mV, after disturb {} mV\n",
            fmt_sig6(r.bit_density),
            fmt_sig6(r.t_rc),
            fmt_sig6(r.e_read.total),
            fmt_sig6(r.e_write.total),
            fmt_sig6(r.sense_margin),
            fmt_sig6(r.margin_after_disturb),
        ));
    }
    files.push(("summary.txt".to_string(), summary));

    let stacked: Vec<String> = model
        .state
        .profiles
        .iter()
        .filter(|(_, p)| p.is_stacked())
        .map(|(n, _)| n.clone())
        .collect();
    for name in &stacked {
        let reports = model.sweep(name, Scheme::SelectorStrap, 10, 200, 1)?;
        files.push((format!("sweep_{name}.csv"), reports_to_csv(&reports)));
        if svg {
            for (fname, plot) in sweep_plots(name, &reports) {
                files.push((fname, plot));
            }
        }
    }

    files.push((
        "feasibility.csv".to_string(),
        feasibility_matrix(&model, model.state.min_pitch_um)?,
    ));

    for (name, content) in &files {
        write_file(&outdir.join(name), content)?;
    }
    println!("wrote {} files to {}", files.len(), outdir.display());

    match golden {
        Some(dir) if dir.is_dir() => {
            let mut mismatches = Vec::new();
            for (name, content) in &files {
                if name.ends_with(".svg") {
                    continue;
                }
                let expected_path = dir.join(name);
                match std::fs::read_to_string(&expected_path) {
                    Ok(expected) if expected == *content => println!("PASS {name}"),
                    Ok(_) => {
                        println!("FAIL {name} (differs from {})", expected_path.display());
                        mismatches.push(name.clone());
                    }
                    Err(_) => {
                        println!("FAIL {name} (missing {})", expected_path.display());
                        mismatches.push(name.clone());
                    }
                }
            }
            if mismatches.is_empty() {
                println!("reproduction matches golden outputs");
                Ok(())
            } else {
                Err(CliError::Mismatch(format!(
                    "{} file(s) differ from golden outputs: {}",
                    mismatches.len(),
                    mismatches.join(", ")
                )))
            }
        }
        _ => {
            println!("no golden outputs found; skipping diff");
            Ok(())
        }
    }
}
