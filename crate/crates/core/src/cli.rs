//! Command-line front end.
//!
//! Exit codes: 0 on success (and when every `verify` check holds), 1 when a
//! check or computation fails on valid input, 2 for usage errors such as an
//! unknown system or tile.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::golden::GoldenNumber;
use crate::inflation::{build_matrix, char_poly, frequencies, matrix_power_counts, total_volume};
use crate::reconstruct::{reconstruct, ReconstructError};
use crate::system::{resolve_system, SystemError, TileSystem};
use crate::verify::{all_hold, verify_system, Check};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "stone-inflation",
    version,
    about = "Exact inflation matrices, invariants and frequencies for stone-inflation tilings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// Built-in system (ms4, ms5) or path to a JSON system file.
    #[arg(long, default_value = "ms4")]
    pub system: String,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Add a floating-point approximation next to exact values.
    #[arg(long)]
    pub approx: bool,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Tile counts after repeated inflation of a seed.
    Inflate {
        #[command(flatten)]
        common: CommonArgs,
        /// Seed tile, or comma-separated tiles (e.g. r,m).
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 1)]
        steps: u64,
    },
    /// The inflation matrix.
    Matrix {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exact asymptotic tile frequencies.
    Freq {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run every eigen and stone-inflation check.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Rebuild the inflation matrix from volume and Dehn data.
    Reconstruct {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Characteristic polynomial of the inflation matrix.
    Charpoly {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Inflate,
    Matrix,
    Freq,
    Verify,
    Reconstruct,
    Charpoly,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Inflate => "inflate",
            Command::Matrix => "matrix",
            Command::Freq => "freq",
            Command::Verify => "verify",
            Command::Reconstruct => "reconstruct",
            Command::Charpoly => "charpoly",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub system: String,
    pub command: Command,
    pub seed: Vec<String>,
    pub steps: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub approx: bool,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let (command, common, seed, steps) = match cli.command {
            CliCommand::Inflate {
                common,
                seed,
                steps,
            } => (
                Command::Inflate,
                common,
                seed.split(',').map(|s| s.trim().to_string()).collect(),
                steps,
            ),
            CliCommand::Matrix { common } => (Command::Matrix, common, Vec::new(), 0),
            CliCommand::Freq { common } => (Command::Freq, common, Vec::new(), 0),
            CliCommand::Verify { common } => (Command::Verify, common, Vec::new(), 0),
            CliCommand::Reconstruct { common } => (Command::Reconstruct, common, Vec::new(), 0),
            CliCommand::Charpoly { common } => (Command::Charpoly, common, Vec::new(), 0),
        };
        RunConfig {
            system: common.system,
            command,
            seed,
            steps,
            format: common.format,
            output: common.output,
            approx: common.approx,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            // Data that loads but violates the volume identity is a failed check.
            CliError::System(SystemError::VolumeIdentity { .. }) => EXIT_CHECK_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

/// Rendered report and the exit status it should produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub report: String,
    pub exit_code: i32,
}

struct Report {
    result: Value,
    checks: Vec<Check>,
    human: String,
    csv: String,
    exit_code: i32,
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let system = resolve_system(&config.system)?;
    let report = match config.command {
        Command::Inflate => inflate(&system, config)?,
        Command::Matrix => matrix(&system),
        Command::Freq => freq(&system, config.approx),
        Command::Verify => verify(&system),
        Command::Reconstruct => reconstruct_cmd(&system)?,
        Command::Charpoly => charpoly(&system, config.approx),
    };
    let text = match config.format {
        Format::Human => report.human,
        Format::Csv => report.csv,
        Format::Json => {
            let doc = json!({
                "system": system.name(),
                "command": config.command.name(),
                "result": report.result,
                "checks": report.checks,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
            s.push('\n');
            s
        }
    };
    Ok(Outcome {
        report: text,
        exit_code: report.exit_code,
    })
}

fn golden_json(x: &GoldenNumber, approx: bool) -> Value {
    if approx {
        json!({ "exact": x.to_string(), "approx": x.to_f64() })
    } else {
        json!(x.to_string())
    }
}

fn inflate(system: &TileSystem, config: &RunConfig) -> Result<Report, CliError> {
    if config.seed.is_empty() || config.seed.iter().any(String::is_empty) {
        return Err(CliError::Usage("inflate needs --seed".into()));
    }
    if let Some(bad) = config.seed.iter().find(|t| system.index_of(t).is_none()) {
        return Err(CliError::Usage(format!(
            "unknown tile {bad:?} in system {} (tiles: {})",
            system.name(),
            system.order().join(", ")
        )));
    }
    let seed: Vec<&str> = config.seed.iter().map(String::as_str).collect();
    let start = system.counts_of(&seed)?;
    let m = build_matrix(system);
    let counts = matrix_power_counts(&m, &start, config.steps);
    let order = system.order();
    let volume = total_volume(system, &counts).ok();

    let mut human = format!(
        "system {}, seed {}, {} step(s)\n",
        system.name(),
        config.seed.join(","),
        config.steps
    );
    let mut csv = String::from("tile,count\n");
    for (t, c) in order.iter().zip(counts.counts()) {
        let _ = writeln!(human, "{t} {c}");
        let _ = writeln!(csv, "{t},{c}");
    }
    let _ = writeln!(human, "total {}", counts.total());
    if let Some(v) = &volume {
        let _ = write!(human, "total volume {v}");
        if config.approx {
            let _ = write!(human, " (approx {:.12})", v.to_f64());
        }
        human.push('\n');
    }
    let result = json!({
        "seed": config.seed,
        "steps": config.steps,
        "counts": order.iter().zip(counts.counts())
            .map(|(t, c)| json!({ "tile": t, "count": c.to_string() }))
            .collect::<Vec<_>>(),
        "total": counts.total().to_string(),
        "total_volume": volume.as_ref().map(|v| golden_json(v, config.approx)),
    });
    Ok(Report {
        result,
        checks: Vec::new(),
        human,
        csv,
        exit_code: EXIT_OK,
    })
}

fn matrix(system: &TileSystem) -> Report {
    let m = build_matrix(system);
    let order = system.order();
    let mut csv = format!("tile,{}\n", order.join(","));
    for (t, row) in order.iter().zip(m.entries()) {
        let cells: Vec<String> = row.iter().map(u64::to_string).collect();
        let _ = writeln!(csv, "{t},{}", cells.join(","));
    }
    Report {
        result: json!({ "order": order, "rows": m.entries() }),
        checks: Vec::new(),
        human: format!("{m}\n"),
        csv,
        exit_code: EXIT_OK,
    }
}

fn freq(system: &TileSystem, approx: bool) -> Report {
    let m = build_matrix(system);
    let lambda = system.volume_eigenvalue();
    match frequencies(&m, &lambda) {
        Ok(f) => {
            let order = system.order();
            let mut human = format!("Perron eigenvalue {lambda}\n");
            let mut csv = String::from(if approx {
                "tile,frequency,approx_float\n"
            } else {
                "tile,frequency\n"
            });
            for (t, x) in order.iter().zip(f.entries()) {
                let _ = write!(human, "{t} {x}");
                let _ = write!(csv, "{t},{x}");
                if approx {
                    let _ = write!(human, " (approx {:.12})", x.to_f64());
                    let _ = write!(csv, ",{:e}", x.to_f64());
                }
                human.push('\n');
                csv.push('\n');
            }
            Report {
                result: json!({
                    "perron_eigenvalue": lambda.to_string(),
                    "frequencies": order.iter().zip(f.entries())
                        .map(|(t, x)| json!({ "tile": t, "frequency": golden_json(x, approx) }))
                        .collect::<Vec<_>>(),
                }),
                checks: Vec::new(),
                human,
                csv,
                exit_code: EXIT_OK,
            }
        }
        Err(e) => Report {
            result: json!({ "perron_eigenvalue": lambda.to_string(), "error": e.to_string() }),
            checks: Vec::new(),
            human: format!("error: {e}\n"),
            csv: String::new(),
            exit_code: EXIT_CHECK_FAILED,
        },
    }
}

fn verify(system: &TileSystem) -> Report {
    let checks = verify_system(system);
    let ok = all_hold(&checks);
    let mut human = String::new();
    let mut csv = String::from("check,holds,residual\n");
    for c in &checks {
        let status = if c.holds { "PASS" } else { "FAIL" };
        let _ = write!(human, "{status} {}", c.name);
        if !c.residual.is_empty() {
            let _ = write!(human, "  residual: {}", c.residual.join("; "));
        }
        human.push('\n');
        let _ = writeln!(csv, "{},{},{}", c.name, c.holds, c.residual.join(";"));
    }
    let passed = checks.iter().filter(|c| c.holds).count();
    let _ = writeln!(human, "{passed}/{} checks hold", checks.len());
    Report {
        result: json!({ "all_hold": ok, "passed": passed, "total": checks.len() }),
        checks,
        human,
        csv,
        exit_code: if ok { EXIT_OK } else { EXIT_CHECK_FAILED },
    }
}

fn reconstruct_cmd(system: &TileSystem) -> Result<Report, CliError> {
    match reconstruct(system) {
        Ok(r) => {
            let m = &r.solution.matrix;
            let rows: Vec<Vec<String>> = (0..m.rows())
                .map(|i| m.row(i).iter().map(ToString::to_string).collect())
                .collect();
            let mut csv = format!("tile,{}\n", r.order.join(","));
            for (t, row) in r.order.iter().zip(&rows) {
                let _ = writeln!(csv, "{t},{}", row.join(","));
            }
            let human = format!(
                "{m}\nunique: true\nintegral: {}\nmatches rules: {}\n",
                r.solution.integral, r.matches_rules
            );
            Ok(Report {
                result: json!({
                    "order": r.order,
                    "matrix": rows,
                    "unique": true,
                    "integral": r.solution.integral,
                    "matches_rules": r.matches_rules,
                }),
                checks: Vec::new(),
                human,
                csv,
                exit_code: if r.matches_rules && r.solution.integral {
                    EXIT_OK
                } else {
                    EXIT_CHECK_FAILED
                },
            })
        }
        Err(e @ (ReconstructError::RankDeficient { .. } | ReconstructError::Inconsistent)) => {
            Ok(Report {
                result: json!({
                    "order": system.order(),
                    "matrix": Value::Null,
                    "unique": false,
                    "error": e.to_string(),
                }),
                checks: Vec::new(),
                human: format!("no unique reconstruction: {e}\n"),
                csv: String::new(),
                exit_code: EXIT_CHECK_FAILED,
            })
        }
        Err(e) => Err(CliError::Usage(format!(
            "cannot reconstruct {}: {e}",
            system.name()
        ))),
    }
}

fn charpoly(system: &TileSystem, approx: bool) -> Report {
    let p = char_poly(&build_matrix(system));
    let coeffs: Vec<String> = p.descending().iter().map(ToString::to_string).collect();
    let mut csv = String::from("degree,coefficient\n");
    for (k, c) in p.ascending().iter().enumerate().rev() {
        let _ = writeln!(csv, "{k},{c}");
    }
    let mut human = format!("{p}\n");
    let mut result = json!({ "polynomial": p.to_string(), "coefficients": coeffs });
    // Which of the field's natural candidates are roots.
    let lambda = system.volume_eigenvalue();
    let candidates = [
        lambda.clone(),
        lambda.conj(),
        system.factor().clone(),
        system.factor().conj(),
    ];
    let mut roots: Vec<GoldenNumber> = Vec::new();
    for c in candidates {
        if p.eval(&c).is_zero() && !roots.contains(&c) {
            roots.push(c);
        }
    }
    if !roots.is_empty() {
        let shown: Vec<String> = roots
            .iter()
            .map(|r| {
                if approx {
                    format!("{r} (approx {:.12})", r.to_f64())
                } else {
                    r.to_string()
                }
            })
            .collect();
        let _ = writeln!(human, "roots in Q(tau): {}", shown.join(", "));
    }
    result["roots"] = json!(roots
        .iter()
        .map(|r| golden_json(r, approx))
        .collect::<Vec<_>>());
    Report {
        result,
        checks: Vec::new(),
        human,
        csv,
        exit_code: EXIT_OK,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(command: Command) -> RunConfig {
        RunConfig {
            system: "ms4".into(),
            command,
            seed: vec!["z".into()],
            steps: 0,
            format: Format::Human,
            output: None,
            approx: false,
        }
    }

    #[test]
    fn parses_command_line() {
        let cli = Cli::try_parse_from([
            "stone-inflation",
            "inflate",
            "--system",
            "ms5",
            "--seed",
            "r,m",
            "--steps",
            "3",
            "--format",
            "csv",
        ])
        .unwrap();
        let c = RunConfig::from(cli);
        assert_eq!(c.command, Command::Inflate);
        assert_eq!(c.seed, vec!["r", "m"]);
        assert_eq!(c.steps, 3);
        assert_eq!(c.format, Format::Csv);
        assert!(Cli::try_parse_from(["stone-inflation", "explode"]).is_err());
    }

    #[test]
    fn inflate_zero_steps_is_the_seed() {
        let out = run(&config(Command::Inflate)).unwrap();
        assert!(out.report.contains("z 1\nh 0\ns 0\na 0\n"));
        assert_eq!(out.exit_code, EXIT_OK);
    }

    #[test]
    fn inflate_csv() {
        let mut c = config(Command::Inflate);
        c.steps = 2;
        c.format = Format::Csv;
        assert_eq!(run(&c).unwrap().report, "tile,count\nz,4\nh,3\ns,5\na,7\n");
    }

    #[test]
    fn usage_errors() {
        let mut c = config(Command::Inflate);
        c.seed = vec!["q".into()];
        assert_eq!(run(&c).unwrap_err().exit_code(), EXIT_USAGE);
        let mut c = config(Command::Matrix);
        c.system = "nope".into();
        assert_eq!(run(&c).unwrap_err().exit_code(), EXIT_USAGE);
    }

    #[test]
    fn verify_passes_on_builtins() {
        for sys in ["ms4", "ms5"] {
            let mut c = config(Command::Verify);
            c.system = sys.into();
            let out = run(&c).unwrap();
            assert_eq!(out.exit_code, EXIT_OK, "{}", out.report);
            assert!(!out.report.contains("FAIL"));
        }
    }

    #[test]
    fn reconstruct_ms5_reports_non_uniqueness() {
        let mut c = config(Command::Reconstruct);
        c.system = "ms5".into();
        c.format = Format::Json;
        let out = run(&c).unwrap();
        assert_eq!(out.exit_code, EXIT_CHECK_FAILED);
        let v: Value = serde_json::from_str(&out.report).unwrap();
        assert_eq!(v["result"]["unique"], json!(false));
    }

    #[test]
    fn charpoly_human() {
        let out = run(&config(Command::Charpoly)).unwrap();
        assert!(out.report.starts_with("x^4 - 5*x^3 + 2*x^2 + 5*x + 1\n"));
        assert!(out
            .report
            .contains("roots in Q(tau): 1 + 2*tau, 3 - 2*tau, tau, 1 - tau"));
    }
}
