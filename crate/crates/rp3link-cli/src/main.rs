//! Command-line front end: parse curve files, run the linking engines with
//! configured tolerances and seeds, and emit text, JSON, or CSV reports.
//!
//! Exit codes: 0 success, 1 check disagreement, 2 input or validation
//! error, 3 genericity exhaustion.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rp3link::{
    self_linking, linking_number_sides, oracle_lk_rp3, oracle_selflink, parse_curves,
    random_curve, samples, write_curves, Crossing, DegreeReport, Error, LiftedCurve,
    OracleParams, OracleReport, RunConfig, SelfLinkReport, Tolerances,
};

#[derive(Parser)]
#[command(
    name = "rp3link",
    version,
    about = "Linking numbers of piecewise-linear curves in real projective 3-space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ComputeOpts {
    /// RNG seed for viewpoints and projections
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent generic viewpoints that must agree
    #[arg(long, default_value_t = 5)]
    trials: u32,
    /// Collinearity residual accepted as a crossing
    #[arg(long = "tol-residual", default_value_t = 1e-9)]
    tol_residual: f64,
    /// Margin around edge endpoints for crossing parameters
    #[arg(long = "tol-param", default_value_t = 1e-7)]
    tol_param: f64,
    /// Tangency band for the crossing quadratic discriminant
    #[arg(long = "tol-disc", default_value_t = 1e-10)]
    tol_disc: f64,
    /// Minimum orientation determinant for a crossing sign
    #[arg(long = "tol-sign", default_value_t = 1e-9)]
    tol_sign: f64,
    /// Emit one JSON object instead of text
    #[arg(long)]
    json: bool,
    /// Write the crossing table to this CSV file
    #[arg(long = "crossings", value_name = "PATH")]
    crossings: Option<PathBuf>,
    /// Vertex lines carry affine (x, y, z) coordinates, homogenized with w = 1
    #[arg(long)]
    affine: bool,
}

impl ComputeOpts {
    fn run_config(&self) -> RunConfig {
        RunConfig {
            seed: self.seed,
            trials: self.trials,
            tol: Tolerances {
                residual: self.tol_residual,
                param: self.tol_param,
                disc: self.tol_disc,
                sign_margin: self.tol_sign,
                ..Tolerances::default()
            },
            ..RunConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Linking number of two curves or comma-separated curve lists
    Lk {
        file: PathBuf,
        /// First side: a curve name, or names joined with commas
        a: String,
        /// Second side
        b: String,
        #[command(flatten)]
        opts: ComputeOpts,
    },
    /// Self-linking number of a null-homologous knot
    Selflink {
        file: PathBuf,
        k: String,
        #[command(flatten)]
        opts: ComputeOpts,
    },
    /// Double-cover oracle values
    Oracle {
        file: PathBuf,
        /// Two curve names, or one with --selflink
        names: Vec<String>,
        /// Compute the oracle self-linking number of one knot
        #[arg(long)]
        selflink: bool,
        #[command(flatten)]
        opts: ComputeOpts,
    },
    /// Run the main method and the oracle, print both and AGREE/DISAGREE
    Check {
        file: PathBuf,
        /// Two curve names, or one with --selflink
        names: Vec<String>,
        /// Compare self-linking numbers of one knot
        #[arg(long)]
        selflink: bool,
        /// Flip the main method's sign convention (harness sanity check)
        #[arg(long, hide = true)]
        corrupt_sign: bool,
        #[command(flatten)]
        opts: ComputeOpts,
    },
    /// Generate example curve files
    Gen {
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Edges per generated curve
        #[arg(long, default_value_t = 16)]
        edges: usize,
        /// Homology class for random curves (0 or 1)
        #[arg(long, default_value_t = 0)]
        class: u8,
        /// Higher-harmonic energy for random curves
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GenKind {
    /// Two disjoint polygonal projective lines (closure -1 each)
    Lines,
    /// The Hopf link in the affine chart w = 1
    HopfAffine,
    /// Two far-apart affine circles (lk = 0)
    Split,
    /// One seeded random curve named K
    Random,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::TooManyDegenerateViewpoints { .. }
        | Error::DegenerateProjection { .. }
        | Error::TrialsDisagree { .. } => 3,
        _ => 2,
    }
}

fn fmt_half(d: i64) -> String {
    if d % 2 == 0 {
        format!("{}", d / 2)
    } else {
        format!("{d}/2")
    }
}

fn load_curves(file: &Path, affine: bool, tol: &Tolerances) -> Result<Vec<LiftedCurve>, Error> {
    let text = fs::read_to_string(file).map_err(|e| Error::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", file.display()),
    })?;
    parse_curves(&text, affine, tol)
}

fn pick_side(curves: &[LiftedCurve], names: &str) -> Result<Vec<LiftedCurve>, Error> {
    names
        .split(',')
        .map(|n| rp3link::find_curve(curves, n.trim()).cloned())
        .collect()
}

fn write_linking_csv(path: &Path, crossings: &[Crossing]) -> Result<(), Error> {
    let mut w = csv::Writer::from_path(path).map_err(io_err)?;
    w.write_record([
        "component_a",
        "edge_i",
        "s",
        "component_b",
        "edge_j",
        "u",
        "sign",
        "residual",
    ])
    .map_err(io_err)?;
    for c in crossings {
        w.write_record([
            c.component_a.clone(),
            c.edge_a.to_string(),
            c.s.to_string(),
            c.component_b.clone(),
            c.edge_b.to_string(),
            c.u.to_string(),
            c.sign.to_string(),
            c.residual.to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| io_err(csv::Error::from(e)))
}

fn write_selflink_csv(path: &Path, report: &SelfLinkReport) -> Result<(), Error> {
    let mut w = csv::Writer::from_path(path).map_err(io_err)?;
    w.write_record([
        "component_a",
        "edge_i",
        "s",
        "component_b",
        "edge_j",
        "u",
        "sign",
        "loop_class",
        "residual",
    ])
    .map_err(io_err)?;
    for (class, list) in [(1u8, &report.included), (0u8, &report.excluded)] {
        for c in list {
            w.write_record([
                c.component_a.clone(),
                c.edge_a.to_string(),
                c.s.to_string(),
                c.component_b.clone(),
                c.edge_b.to_string(),
                c.u.to_string(),
                c.sign.to_string(),
                class.to_string(),
                c.residual.to_string(),
            ])
            .map_err(io_err)?;
        }
    }
    w.flush().map_err(|e| io_err(csv::Error::from(e)))
}

fn io_err(e: csv::Error) -> Error {
    Error::Parse {
        line: 0,
        message: format!("csv output failed: {e}"),
    }
}

fn print_degree_report(report: &DegreeReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).unwrap());
        return;
    }
    println!("d={} lk={}", report.d, fmt_half(report.d));
    println!("crossings: {}", report.crossings.len());
    let v = &report.viewpoint;
    println!(
        "viewpoint: trial {} attempt {} at ({:.6}, {:.6}, {:.6}, {:.6})",
        v.trial, v.attempt, v.lift[0], v.lift[1], v.lift[2], v.lift[3]
    );
    println!(
        "viewpoints tried: {} for {} trials",
        report.viewpoints_tried,
        report.per_viewpoint_d.len()
    );
}

fn print_selflink_report(report: &SelfLinkReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).unwrap());
        return;
    }
    println!("sl={} d={}", report.sl, report.d);
    println!(
        "crossings: {} included, {} excluded",
        report.included.len(),
        report.excluded.len()
    );
    let v = &report.viewpoint;
    println!(
        "viewpoint: trial {} attempt {} at ({:.6}, {:.6}, {:.6}, {:.6})",
        v.trial, v.attempt, v.lift[0], v.lift[1], v.lift[2], v.lift[3]
    );
    println!(
        "viewpoints tried: {} for {} trials",
        report.viewpoints_tried,
        report.per_viewpoint_sl.len()
    );
}

fn print_oracle_report(report: &OracleReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).unwrap());
        return;
    }
    println!("oracle: d={} lk={}", report.d, fmt_half(report.d));
    for p in &report.pairs {
        println!(
            "  lk_s3({}[{}], {}[{}]) = {}",
            p.component_a, p.sheet_a, p.component_b, p.sheet_b, p.lk_s3
        );
    }
}

fn expect_names(names: &[String], selflink: bool) -> Result<(), Error> {
    let want = if selflink { 1 } else { 2 };
    if names.len() != want {
        return Err(Error::BadConfig {
            message: format!(
                "expected {want} curve name{} ({} given)",
                if want == 1 { "" } else { "s" },
                names.len()
            ),
        });
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Lk { file, a, b, opts } => {
            let cfg = opts.run_config();
            cfg.validate()?;
            let curves = load_curves(&file, opts.affine, &cfg.tol)?;
            let side_a = pick_side(&curves, &a)?;
            let side_b = pick_side(&curves, &b)?;
            let report = linking_number_sides(&side_a, &side_b, &cfg)?;
            if let Some(path) = &opts.crossings {
                write_linking_csv(path, &report.crossings)?;
            }
            print_degree_report(&report, opts.json);
            Ok(0)
        }
        Command::Selflink { file, k, opts } => {
            let cfg = opts.run_config();
            cfg.validate()?;
            let curves = load_curves(&file, opts.affine, &cfg.tol)?;
            let knot = rp3link::find_curve(&curves, &k)?;
            let report = self_linking(knot, &cfg)?;
            if let Some(path) = &opts.crossings {
                write_selflink_csv(path, &report)?;
            }
            print_selflink_report(&report, opts.json);
            Ok(0)
        }
        Command::Oracle {
            file,
            names,
            selflink,
            opts,
        } => {
            expect_names(&names, selflink)?;
            let cfg = opts.run_config();
            cfg.validate()?;
            let curves = load_curves(&file, opts.affine, &cfg.tol)?;
            let params = OracleParams::default();
            if selflink {
                let knot = rp3link::find_curve(&curves, &names[0])?;
                let sl = oracle_selflink(knot, cfg.seed, &params, &cfg.tol)?;
                if opts.json {
                    println!("{}", serde_json::json!({ "sl": sl }));
                } else {
                    println!("oracle: sl={sl}");
                }
            } else {
                let side_a = pick_side(&curves, &names[0])?;
                let side_b = pick_side(&curves, &names[1])?;
                let report = oracle_lk_rp3(&side_a, &side_b, cfg.seed, &params, &cfg.tol)?;
                print_oracle_report(&report, opts.json);
            }
            Ok(0)
        }
        Command::Check {
            file,
            names,
            selflink,
            corrupt_sign,
            opts,
        } => {
            expect_names(&names, selflink)?;
            let cfg = opts.run_config();
            cfg.validate()?;
            let curves = load_curves(&file, opts.affine, &cfg.tol)?;
            let params = OracleParams::default();
            let flip = if corrupt_sign { -1 } else { 1 };
            if selflink {
                let knot = rp3link::find_curve(&curves, &names[0])?;
                let report = self_linking(knot, &cfg)?;
                let sl_method = flip * report.sl;
                let sl_oracle = oracle_selflink(knot, cfg.seed, &params, &cfg.tol)?;
                let agree = sl_method == sl_oracle;
                if opts.json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "method": { "sl": sl_method, "d": 2 * sl_method },
                            "oracle": { "sl": sl_oracle },
                            "agree": agree,
                        })
                    );
                } else {
                    println!("method: sl={sl_method}");
                    println!("oracle: sl={sl_oracle}");
                    println!("{}", if agree { "AGREE" } else { "DISAGREE" });
                }
                Ok(if agree { 0 } else { 1 })
            } else {
                let side_a = pick_side(&curves, &names[0])?;
                let side_b = pick_side(&curves, &names[1])?;
                let report = linking_number_sides(&side_a, &side_b, &cfg)?;
                let d_method = flip * report.d;
                let oracle = oracle_lk_rp3(&side_a, &side_b, cfg.seed, &params, &cfg.tol)?;
                let agree = d_method == oracle.d;
                if opts.json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "method": { "d": d_method, "lk": d_method as f64 / 2.0 },
                            "oracle": { "d": oracle.d, "lk": oracle.lk, "pairs": oracle.pairs },
                            "agree": agree,
                        })
                    );
                } else {
                    println!("method: d={} lk={}", d_method, fmt_half(d_method));
                    println!("oracle: d={} lk={}", oracle.d, fmt_half(oracle.d));
                    println!("{}", if agree { "AGREE" } else { "DISAGREE" });
                }
                Ok(if agree { 0 } else { 1 })
            }
        }
        Command::Gen {
            kind,
            seed,
            out,
            edges,
            class,
            scale,
        } => {
            let tol = Tolerances::default();
            let curves = match kind {
                GenKind::Lines => {
                    let (a, b) = samples::projective_line_pair(edges, &tol)?;
                    vec![a, b]
                }
                GenKind::HopfAffine => {
                    let (a, b) = samples::affine_hopf_pair(edges.max(12), &tol)?;
                    vec![a, b]
                }
                GenKind::Split => {
                    let (a, b) = samples::split_pair(edges, &tol)?;
                    vec![a, b]
                }
                GenKind::Random => {
                    vec![random_curve("K", seed, edges.max(8), class, scale, &tol)?]
                }
            };
            let text = write_curves(&curves);
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| Error::Parse {
                    line: 0,
                    message: format!("cannot write {}: {e}", path.display()),
                })?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
