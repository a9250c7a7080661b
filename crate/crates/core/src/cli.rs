//! Command-line front end. Every command produces a [`RunReport`]; the
//! process exits with status 0 exactly when all of its checks pass.

use std::f64::consts::{PI, SQRT_2};
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{self, BoundsError};
use crate::enumeration::{self, FaceType, SymmetryGroup};
use crate::fatgraph::FatGraph;
use crate::hypgeom;
use crate::numeric::acosh;
use crate::precision;
use crate::quadopt::{self, QuadError};

#[derive(Debug, Parser)]
#[command(name = "minfill", version, about = "Minimal filling pairs on the genus-two surface")]
pub struct Cli {
    /// Output format for the run report.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Boundary cycles, Euler characteristic and genus of a fat graph file.
    Boundary {
        /// Rotation-system file; reads stdin when omitted.
        file: Option<PathBuf>,
    },
    /// Enumerate minimal filling pairs and classify them up to relabeling.
    Enumerate {
        #[arg(long)]
        no_shift_alpha: bool,
        #[arg(long)]
        no_shift_beta: bool,
        /// Drop orientation reversal of the curves.
        #[arg(long)]
        no_reverse: bool,
        #[arg(long)]
        no_swap_curves: bool,
        /// Also identify mirror images.
        #[arg(long)]
        mirror: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Length bounds for the two filling-pair types and the global bound.
    Bounds {
        #[arg(long, value_enum, default_value_t = Which::Global)]
        which: Which,
        /// Also write a CSV sweep (f8, the quadrilateral objective, or the
        /// certificate table) to this path.
        #[arg(long)]
        sweep: Option<PathBuf>,
        /// Largest face count in the global enumeration.
        #[arg(long, default_value_t = 10)]
        f_max: usize,
    },
    /// Check the Lagrange conditions at the exact minimizer.
    VerifyLagrange {
        /// Multipliers to test instead of the exact ones.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Option<Vec<f64>>,
    },
    /// Write plotting data as CSV.
    Sweep {
        #[arg(long, value_enum)]
        which: SweepKind,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "88")]
    EightEight,
    #[value(name = "412")]
    FourTwelve,
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    F8,
    Quad,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(serialize_with = "precision::ser")]
    pub measured: f64,
    #[serde(serialize_with = "precision::ser")]
    pub expected: f64,
    #[serde(serialize_with = "precision::ser")]
    pub tolerance: f64,
}

impl Check {
    pub fn near(name: &str, measured: f64, expected: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            pass: (measured - expected).abs() <= tolerance,
            measured,
            expected,
            tolerance,
        }
    }

    pub fn at_most(name: &str, measured: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            pass: measured <= limit,
            measured,
            expected: limit,
            tolerance: 0.0,
        }
    }

    pub fn count(name: &str, measured: usize, expected: usize) -> Self {
        Check {
            name: name.into(),
            pass: measured == expected,
            measured: measured as f64,
            expected: expected as f64,
            tolerance: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(Some(report)) => {
            let out = io::stdout();
            let mut out = out.lock();
            let written = match cli.format {
                Format::Json => serde_json::to_writer_pretty(&mut out, &report)
                    .map_err(io::Error::from)
                    .and_then(|_| writeln!(out)),
                Format::Table => write_table(&mut out, &report),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            if report.passed() {
                0
            } else {
                for c in report.checks.iter().filter(|c| !c.pass) {
                    eprintln!("check failed: {} (measured {}, expected {})", c.name, c.measured, c.expected);
                }
                1
            }
        }
        Ok(None) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

/// Runs a command. Returns `None` for commands that stream raw data.
pub fn execute(command: &Command) -> Result<Option<RunReport>> {
    match command {
        Command::Boundary { file } => cmd_boundary(file.as_ref()).map(Some),
        Command::Enumerate {
            no_shift_alpha,
            no_shift_beta,
            no_reverse,
            no_swap_curves,
            mirror,
            jobs,
        } => {
            let group = SymmetryGroup {
                shift_alpha: !no_shift_alpha,
                shift_beta: !no_shift_beta,
                reverse_curves: !no_reverse,
                swap_curves: !no_swap_curves,
                mirror: *mirror,
            };
            Ok(Some(cmd_enumerate(&group, *jobs)))
        }
        Command::Bounds { which, sweep, f_max } => cmd_bounds(*which, sweep.as_ref(), *f_max).map(Some),
        Command::VerifyLagrange { lambda } => {
            let multipliers = match lambda.as_deref() {
                Some(&[a, b, c, d]) => [a, b, c, d],
                Some(v) => anyhow::bail!("--lambda needs 4 values, got {}", v.len()),
                None => quadopt::lambda0(),
            };
            cmd_verify_lagrange(multipliers).map(Some)
        }
        Command::Sweep { which, out, points } => {
            cmd_sweep(*which, out.as_ref(), *points)?;
            Ok(None)
        }
    }
}

pub fn cmd_boundary(file: Option<&PathBuf>) -> Result<RunReport> {
    let (source, text) = match file {
        Some(p) => (
            p.display().to_string(),
            std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        ),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            ("<stdin>".to_string(), s)
        }
    };
    let graph: FatGraph = text.parse().with_context(|| format!("parsing {source}"))?;
    graph
        .validate()
        .map_err(|v| anyhow::anyhow!("invalid fat graph in {source}: {v}"))?;
    let boundary = graph.boundary_cycles()?;
    let chi = graph.euler_characteristic()?;
    let genus = graph.genus()?;
    Ok(RunReport {
        command: "boundary".into(),
        inputs: json!({ "file": source }),
        outputs: json!({
            "darts": graph.n_darts(),
            "vertices": graph.vertex_count(),
            "edges": graph.edge_count(),
            "faces": boundary.len(),
            "cycles": boundary.word_strings(),
            "face_sizes": boundary.face_sizes,
            "euler_characteristic": chi,
            "genus": genus,
        }),
        checks: Vec::new(),
    })
}

pub fn cmd_enumerate(group: &SymmetryGroup, jobs: usize) -> RunReport {
    let run = enumeration::enumerate_with(group, jobs.max(1));
    let report = enumeration::classify_orbits(&run.configurations);
    let six_ten = run
        .configurations
        .iter()
        .filter(|c| c.type_tag == FaceType::SixTen)
        .count();
    let other_types = run
        .configurations
        .iter()
        .filter(|c| !matches!(c.type_tag, FaceType::FourTwelve | FaceType::EightEight))
        .count();
    let survivors: Vec<_> = run.configurations.iter().map(|c| c.graph.sigma0().clone()).collect();
    let cases_found = (1..=8)
        .filter(|&k| survivors.contains(enumeration::reference_case(k).sigma0()))
        .count();

    let mut checks = vec![
        Check::count("no {6,10} configurations", six_ten, 0),
        Check::count("survivors outside {4,12} and {8,8}", other_types, 0),
        Check::count("reference cases among survivors", cases_found, 8),
    ];
    if *group == SymmetryGroup::default() {
        checks.push(Check::count("orbits == 2", report.classes.len(), 2));
    }

    let classes: Vec<Value> = report
        .classes
        .iter()
        .map(|c| {
            json!({
                "type": c.type_tag,
                "members": c.members,
                "canonical_key": c.canonical_key,
                "representative": c.representative.graph.to_string(),
                "boundary": c.representative.boundary.word_strings(),
            })
        })
        .collect();
    RunReport {
        command: "enumerate".into(),
        inputs: json!({
            "shift_alpha": group.shift_alpha,
            "shift_beta": group.shift_beta,
            "reverse_curves": group.reverse_curves,
            "swap_curves": group.swap_curves,
            "mirror": group.mirror,
            "jobs": jobs,
        }),
        outputs: json!({
            "group_order": group.order(),
            "candidates": run.candidates,
            "rejected": run.rejected,
            "raw_count": report.raw_count,
            "class_count": report.classes.len(),
            "classes": classes,
        }),
        checks,
    }
}

fn solver_failure_check(e: &QuadError) -> Check {
    Check {
        name: format!("quadrilateral solver: {e}"),
        pass: false,
        measured: f64::NAN,
        expected: 0.0,
        tolerance: 0.0,
    }
}

/// `8 acosh(1 + √2)`.
fn octagon_bound() -> f64 {
    8.0 * acosh(1.0 + SQRT_2)
}

pub fn cmd_bounds(which: Which, sweep: Option<&PathBuf>, f_max: usize) -> Result<RunReport> {
    let l0 = quadopt::length_412_closed_form();
    let mut checks = Vec::new();
    let outputs = match which {
        Which::EightEight => {
            let m = hypgeom::minimize_f8();
            let bound = 0.5 * m.value;
            checks.push(Check::near("theta* == 0", m.theta, 0.0, 1e-8));
            checks.push(Check::near("length_bound_88", bound, 12.228567, 1e-6));
            if let Some(p) = sweep {
                let thetas = interior_grid(-2.0 * PI, 2.0 * PI, 201);
                hypgeom::write_f8_sweep(create(p)?, &thetas)?;
            }
            json!({ "theta": precision::round_sig(m.theta, 12), "f8_min": precision::round_sig(m.value, 12), "length_bound": precision::round_sig(bound, 12) })
        }
        Which::FourTwelve => {
            if let Some(p) = sweep {
                let thetas = interior_grid(0.0, PI / 2.0, 158);
                quadopt::write_objective_sweep(create(p)?, &thetas)?;
            }
            match quadopt::minimize_objective() {
                Ok(s) => {
                    checks.push(Check::near("theta* == acos(1/5)", s.theta, 0.2f64.acos(), 1e-6));
                    checks.push(Check::near("length_bound_412", s.length(), 11.5490838, 1e-5));
                    json!({ "solution": s, "length_bound": precision::round_sig(s.length(), 12) })
                }
                Err(e) => {
                    checks.push(solver_failure_check(&e));
                    json!({ "error": e.to_string() })
                }
            }
        }
        Which::Global => match bounds::global_bound(f_max) {
            Ok(g) => {
                let min_cert = g.certificates.iter().map(|c| c.bound).fold(f64::INFINITY, f64::min);
                checks.push(Check::near("global bound == 6 acosh(7/2)", g.length, l0, 1e-9));
                checks.push(Check {
                    name: "every certificate >= L0 - 1e-9".into(),
                    pass: min_cert >= l0 - 1e-9,
                    measured: min_cert,
                    expected: l0,
                    tolerance: 1e-9,
                });
                checks.push(Check {
                    name: "L0 < 8 acosh(1 + sqrt 2)".into(),
                    pass: g.length < octagon_bound(),
                    measured: g.length,
                    expected: octagon_bound(),
                    tolerance: 0.0,
                });
                if let Some(p) = sweep {
                    write_certificates(create(p)?, &g.certificates)?;
                }
                serde_json::to_value(&g)?
            }
            Err(BoundsError::Quad(e)) => {
                checks.push(solver_failure_check(&e));
                json!({ "error": e.to_string() })
            }
            Err(e) => return Err(e.into()),
        },
    };
    Ok(RunReport {
        command: "bounds".into(),
        inputs: json!({
            "which": match which { Which::EightEight => "88", Which::FourTwelve => "412", Which::Global => "global" },
            "f_max": f_max,
            "sweep": sweep.map(|p| p.display().to_string()),
        }),
        outputs,
        checks,
    })
}

pub fn cmd_verify_lagrange(multipliers: [f64; 4]) -> Result<RunReport> {
    let cert = quadopt::verify_lagrange(&quadopt::p0(), multipliers)?;
    Ok(RunReport {
        command: "verify-lagrange".into(),
        inputs: json!({ "multipliers": multipliers.map(|x| precision::round_sig(x, 12)) }),
        checks: vec![
            Check::at_most("constraint_residual <= 1e-10", cert.constraint_residual, 1e-10),
            Check::at_most("gradient_residual <= 1e-6", cert.gradient_residual, 1e-6),
        ],
        outputs: serde_json::to_value(&cert)?,
    })
}

pub fn cmd_sweep(which: SweepKind, out: Option<&PathBuf>, points: usize) -> Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    match which {
        SweepKind::F8 => hypgeom::write_f8_sweep(sink, &interior_grid(-2.0 * PI, 2.0 * PI, points))?,
        SweepKind::Quad => quadopt::write_objective_sweep(sink, &interior_grid(0.0, PI / 2.0, points))?,
    }
    Ok(())
}

/// `n` evenly spaced points strictly inside `(lo, hi)`.
fn interior_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|k| lo + (hi - lo) * k as f64 / (n + 1) as f64).collect()
}

fn create(p: &PathBuf) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(p).with_context(|| format!("creating {}", p.display()))?,
    ))
}

fn write_certificates<W: Write>(out: W, certs: &[bounds::BoundCertificate]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["f", "sizes", "case_tag", "merged_pair", "bound", "rule"])?;
    for c in certs {
        w.write_record([
            c.config.f.to_string(),
            c.config.to_string(),
            c.case_tag.to_string(),
            format!("({},{})", c.merged_pair.0, c.merged_pair.1),
            precision::sig12(c.bound),
            c.rule_applied.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_table<W: Write>(out: &mut W, report: &RunReport) -> io::Result<()> {
    writeln!(out, "== {} ==", report.command)?;
    if let Value::Object(map) = &report.outputs {
        for (k, v) in map {
            match (k.as_str(), v) {
                ("certificates", Value::Array(rows)) => {
                    writeln!(out, "certificates:")?;
                    writeln!(out, "  {:>3}  {:<24} {:<22} {:<8} {:>14}  rule", "f", "sizes", "case", "merged", "bound")?;
                    for r in rows {
                        let sizes: Vec<String> = r["config"]["sizes"]
                            .as_array()
                            .map(|a| a.iter().map(|s| s.to_string()).collect())
                            .unwrap_or_default();
                        writeln!(
                            out,
                            "  {:>3}  {:<24} {:<22} {:<8} {:>14}  {}",
                            r["config"]["f"],
                            format!("{{{}}}", sizes.join(",")),
                            r["case_tag"].as_str().unwrap_or(""),
                            format!("({},{})", r["merged_pair"][0], r["merged_pair"][1]),
                            r["bound"],
                            r["rule_applied"].as_str().unwrap_or(""),
                        )?;
                    }
                }
                ("classes", Value::Array(rows)) => {
                    writeln!(out, "classes:")?;
                    for (i, r) in rows.iter().enumerate() {
                        writeln!(out, "  [{i}] type {} members {}", r["type"].as_str().unwrap_or(""), r["members"])?;
                        if let Some(words) = r["boundary"].as_array() {
                            let w: Vec<&str> = words.iter().filter_map(Value::as_str).collect();
                            writeln!(out, "      boundary {}", w.join(""))?;
                        }
                    }
                }
                (_, Value::Array(items)) if items.iter().all(Value::is_string) => {
                    let w: Vec<&str> = items.iter().filter_map(Value::as_str).collect();
                    writeln!(out, "{k}: {}", w.join(" "))?;
                }
                _ => writeln!(out, "{k}: {v}")?,
            }
        }
    }
    if !report.checks.is_empty() {
        writeln!(out, "checks:")?;
        for c in &report.checks {
            writeln!(
                out,
                "  [{}] {}: measured {} expected {} tol {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                precision::sig12(c.measured),
                precision::sig12(c.expected),
                precision::sig12(c.tolerance)
            )?;
        }
    }
    Ok(())
}
