//! Batch operator surface: enumeration, normalisation, classification,
//! certificate verification, the dimension-4 base-case search, the
//! nonexistence checks, and the constructive path builder.
//!
//! Standard output stays machine-parseable; progress and audit traces go
//! to standard error. Exit codes: 0 success, 1 verification or coverage
//! failure, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cubepath_cli::files;
use cubepath_cli::orchestrate::{run_base_case_parallel, BaseCaseOptions};
use cubepath_core::builder::{cover_traced, lhc_path_traced, FrameNote};
use cubepath_core::config::{classify, Configuration};
use cubepath_core::cube::{enumerate_edges, enumerate_vertices, TritVector};
use cubepath_core::paths::{encode_certificate, verify};
use cubepath_core::search::{
    check_lhp_nonexistence_with, ledger_from_certificates, NonexistenceOutcome,
};
use cubepath_core::store::WitnessStore;
use cubepath_core::symmetry::normalize;

#[derive(Parser)]
#[command(name = "cubepath", version, about = "Loose Hamilton paths in the cube hypergraph Q(d)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the vertices of Q(d) in lexicographic order.
    Vertices {
        #[arg(long)]
        d: usize,
    },
    /// List the edges of Q(d), one triple per line.
    Edges {
        #[arg(long)]
        d: usize,
    },
    /// Print the normalised form of a configuration.
    Normalize {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
    },
    /// Report every type assignment of a 4-configuration.
    Classify {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Re-verify certificates from a file or standard input.
    Verify {
        #[arg(long, conflicts_with = "stdin")]
        file: Option<PathBuf>,
        #[arg(long)]
        stdin: bool,
    },
    /// Run the exhaustive dimension-4 base case and persist the witnesses.
    SearchBase {
        #[arg(long)]
        d: usize,
        /// Witness-store output (defaults to the --witnesses path).
        #[arg(long)]
        out: Option<PathBuf>,
        /// File receiving the uncovered configurations, one per line.
        #[arg(long)]
        uncovered: Option<PathBuf>,
        #[arg(long, default_value = "witnesses-d4.txt")]
        witnesses: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Node limit per budgeted attempt.
        #[arg(long, default_value_t = 400_000)]
        budget_nodes: u64,
        /// Wall-clock limit per configuration in seconds (0 = none).
        #[arg(long, default_value_t = 0)]
        budget_secs: u64,
    },
    /// Prove that Q(d) has no loose Hamilton path (d = 2 or 3).
    CheckNonexistence {
        #[arg(long)]
        d: usize,
        /// Wall-clock limit in seconds (0 = none).
        #[arg(long, default_value_t = 0)]
        budget_secs: u64,
    },
    /// Emit a verified loose path covering a 4-configuration.
    Cover {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "witnesses-d4.txt")]
        witnesses: PathBuf,
        /// Audit: one line per recursion frame on standard error.
        #[arg(long)]
        trace: bool,
    },
    /// Emit a verified loose Hamilton path between two vertices.
    Lhc {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "witnesses-d4.txt")]
        witnesses: PathBuf,
        #[arg(long)]
        trace: bool,
    },
    /// Rebuild the coverage ledger from a witness or certificate file.
    VerifyWitnesses {
        #[arg(long)]
        file: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

struct CmdError {
    message: String,
    code: u8,
}

impl CmdError {
    fn usage(message: impl Into<String>) -> CmdError {
        CmdError { message: message.into(), code: 2 }
    }

    fn failure(message: impl Into<String>) -> CmdError {
        CmdError { message: message.into(), code: 1 }
    }

    fn exit_code(&self) -> u8 {
        self.code
    }
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

fn parse_vertex(s: &str, d: usize) -> Result<TritVector, CmdError> {
    let v: TritVector =
        s.parse().map_err(|e| CmdError::usage(format!("bad vertex {s:?}: {e}")))?;
    if v.dim() != d {
        return Err(CmdError::usage(format!(
            "vertex {s:?} has dimension {}, expected {d}",
            v.dim()
        )));
    }
    Ok(v)
}

fn load_store_or_fail(path: &PathBuf) -> Result<WitnessStore, CmdError> {
    let (store, diags) =
        files::load_store(path).map_err(|e| CmdError::failure(e.to_string()))?;
    for d in &diags {
        eprintln!("witness store: rejected {d}");
    }
    Ok(store)
}

fn trace_sink(enabled: bool) -> impl FnMut(FrameNote) {
    move |note: FrameNote| {
        if enabled {
            eprintln!(
                "trace d={} type={} row={} v={} w={}",
                note.dim, note.base, note.row, note.aux_v, note.aux_w
            );
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, CmdError> {
    match cmd {
        Cmd::Vertices { d } => {
            let verts =
                enumerate_vertices(d).map_err(|e| CmdError::usage(e.to_string()))?;
            for v in verts {
                println!("{v}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Edges { d } => {
            let edges = enumerate_edges(d).map_err(|e| CmdError::usage(e.to_string()))?;
            for e in edges {
                let [u, v, w] = e.vertices();
                println!("{u} {v} {w}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Normalize { a, b, x, y } => {
            let a: TritVector =
                a.parse().map_err(|e| CmdError::usage(format!("bad vertex: {e}")))?;
            let d = a.dim();
            let b = parse_vertex(&b, d)?;
            let config = match (x, y) {
                (Some(x), Some(y)) => {
                    Configuration::quad(a, b, parse_vertex(&x, d)?, parse_vertex(&y, d)?)
                }
                (None, None) => Configuration::pair(a, b),
                _ => return Err(CmdError::usage("give both --x and --y, or neither")),
            }
            .map_err(|e| CmdError::usage(e.to_string()))?;
            let n = normalize(&config).map_err(|e| CmdError::failure(e.to_string()))?;
            println!("{}", n.config);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Classify { a, b, x, y } => {
            let a: TritVector =
                a.parse().map_err(|e| CmdError::usage(format!("bad vertex: {e}")))?;
            let d = a.dim();
            let config = Configuration::quad(
                a,
                parse_vertex(&b, d)?,
                parse_vertex(&x, d)?,
                parse_vertex(&y, d)?,
            )
            .map_err(|e| CmdError::usage(e.to_string()))?;
            for t in classify(&config).map_err(|e| CmdError::failure(e.to_string()))? {
                println!("{t}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { file, stdin } => {
            let text = if stdin {
                files::read_stdin().map_err(|e| CmdError::usage(e.to_string()))?
            } else {
                let path = file.ok_or_else(|| CmdError::usage("need --file or --stdin"))?;
                std::fs::read_to_string(&path)
                    .map_err(|e| CmdError::usage(format!("{}: {e}", path.display())))?
            };
            let (certs, issues) = files::certificates_from_text(&text);
            let mut failures = issues.len();
            for issue in &issues {
                println!("record {}: malformed: {}", issue.record, issue.error);
            }
            if certs.is_empty() && issues.is_empty() {
                return Err(CmdError::usage("no certificate records found"));
            }
            for (i, cert) in certs.iter().enumerate() {
                match verify(cert) {
                    Ok(()) => println!(
                        "record {}: ok d={} vertices={} edges={}",
                        i + 1,
                        cert.dim,
                        cert.path.len(),
                        cert.path.len() / 2
                    ),
                    Err(e) => {
                        failures += 1;
                        println!("record {}: invalid: {e}", i + 1);
                    }
                }
            }
            Ok(if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Cmd::SearchBase { d, out, uncovered, witnesses, seed, jobs, budget_nodes, budget_secs } => {
            if d != 4 {
                return Err(CmdError::usage(format!(
                    "the base-case search is defined for --d 4, got {d}"
                )));
            }
            let opts = BaseCaseOptions { seed, jobs, budget_nodes, budget_secs };
            let mut progress = |covered: usize, remaining: usize| {
                eprintln!("progress covered={covered} remaining={remaining}");
            };
            let ledger = run_base_case_parallel(&opts, &mut progress)
                .map_err(|e| CmdError::failure(e.to_string()))?;
            eprintln!(
                "progress covered={} remaining=0",
                ledger.covered.len()
            );
            let mut store = WitnessStore::new(seed);
            for (config, cert) in &ledger.covered {
                store
                    .insert(config.clone(), cert.clone())
                    .map_err(|e| CmdError::failure(e.to_string()))?;
            }
            let out_path = out.unwrap_or(witnesses);
            files::save_store(&out_path, &store)
                .map_err(|e| CmdError::failure(e.to_string()))?;
            if let Some(upath) = uncovered {
                let mut text = String::new();
                for c in &ledger.uncovered {
                    text.push_str(&format!("{c}\n"));
                }
                std::fs::write(&upath, text).map_err(|e| CmdError::failure(e.to_string()))?;
            }
            println!(
                "covered={} uncovered={} inconclusive={}",
                ledger.covered.len(),
                ledger.uncovered.len(),
                ledger.inconclusive.len()
            );
            for c in &ledger.uncovered {
                println!("uncovered {c}");
            }
            if !ledger.is_complete() {
                return Err(CmdError::failure(format!(
                    "{} configurations inconclusive under the given budget",
                    ledger.inconclusive.len()
                )));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::CheckNonexistence { d, budget_secs } => {
            let start = std::time::Instant::now();
            let mut stop = move || {
                budget_secs > 0 && start.elapsed() >= std::time::Duration::from_secs(budget_secs)
            };
            let outcome = check_lhp_nonexistence_with(d, &mut stop)
                .map_err(|e| CmdError::usage(e.to_string()))?;
            match outcome {
                NonexistenceOutcome::Absence { nodes } => {
                    println!("absence d={d} nodes={nodes}");
                    Ok(ExitCode::SUCCESS)
                }
                NonexistenceOutcome::Counterexample(cert) => {
                    println!("counterexample d={d}");
                    print!("{}", encode_certificate(&cert));
                    Ok(ExitCode::FAILURE)
                }
                NonexistenceOutcome::Aborted { nodes } => Err(CmdError::failure(format!(
                    "inconclusive: stopped after {nodes} nodes"
                ))),
            }
        }
        Cmd::Cover { d, a, b, x, y, witnesses, trace } => {
            let a = parse_vertex(&a, d)?;
            let config = Configuration::quad(
                a,
                parse_vertex(&b, d)?,
                parse_vertex(&x, d)?,
                parse_vertex(&y, d)?,
            )
            .map_err(|e| CmdError::usage(e.to_string()))?;
            let store = load_store_or_fail(&witnesses)?;
            let mut sink = trace_sink(trace);
            let cert = cover_traced(&config, &store, &mut sink)
                .map_err(|e| CmdError::failure(e.to_string()))?;
            print!("{}", encode_certificate(&cert));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Lhc { d, a, b, witnesses, trace } => {
            let a = parse_vertex(&a, d)?;
            let b = parse_vertex(&b, d)?;
            let store = load_store_or_fail(&witnesses)?;
            let mut sink = trace_sink(trace);
            let cert = lhc_path_traced(&a, &b, &store, &mut sink)
                .map_err(|e| CmdError::failure(e.to_string()))?;
            print!("{}", encode_certificate(&cert));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::VerifyWitnesses { file } => {
            let (certs, issues) = files::certificates_from_file(&file)
                .map_err(|e| CmdError::usage(format!("{}: {e}", file.display())))?;
            for issue in &issues {
                println!("malformed {issue}");
            }
            let (ledger, rejected) = ledger_from_certificates(certs.iter())
                .map_err(|e| CmdError::failure(e.to_string()))?;
            for (record, err) in &rejected {
                println!("rejected record {record}: {err}");
            }
            println!(
                "covered={} uncovered={}",
                ledger.covered.len(),
                ledger.uncovered.len()
            );
            if issues.is_empty() && rejected.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
    }
}
