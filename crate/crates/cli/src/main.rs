//! `stpsweep`: simulation, SAT sweeping and equivalence checking for k-LUT
//! networks in BLIF or ASCII AIGER.
//!
//! Exit codes: 0 success, 1 inequivalent or refuted, 2 usage, 3 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use stp_sweep::cec::{cec, CecResult};
use stp_sweep::netlist::{levels, parse_aiger_ascii, parse_blif, write_blif, Network, NodeId};
use stp_sweep::sim::{
    format_signatures, gen_random_patterns, parse_patterns, simulate_all, simulate_specified,
    support_signature,
};
use stp_sweep::stp::{canonical_form, BoolExpr};
use stp_sweep::sweep::{sweep, SweepConfig, SweepStats};

#[derive(Parser)]
#[command(name = "stpsweep", version, about = "STP simulation and SAT sweeping for k-LUT networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    All,
    Targets,
}

#[derive(Subcommand)]
enum Command {
    /// Print node signatures.
    Sim {
        input: PathBuf,
        /// Number of random patterns.
        #[arg(long, default_value_t = 64, conflicts_with = "pattern_file")]
        patterns: usize,
        /// One line of 0/1 per PI.
        #[arg(long)]
        pattern_file: Option<PathBuf>,
        /// Comma-separated node names or `n<id>`.
        #[arg(long, value_delimiter = ',')]
        targets: Vec<String>,
        /// Defaults to `targets` when targets are given.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Simulate each target over all assignments of its PI support.
        #[arg(long, requires = "targets")]
        exhaustive: bool,
    },
    /// Merge equivalent nodes and write the result as BLIF.
    Sweep {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, default_value_t = 1000)]
        tfi_limit: usize,
        /// Conflicts per SAT call; 0 means no limit.
        #[arg(long, default_value_t = 0)]
        conflict_limit: u64,
        #[arg(long, default_value_t = 2048)]
        base_patterns: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check two networks for equivalence.
    Cec { a: PathBuf, b: PathBuf },
    /// Check two Boolean expressions for equivalence.
    Prove { a: String, b: String },
    /// Print size statistics.
    Stats { input: PathBuf },
}

enum Failure {
    Usage(String),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

/// Reads a network, choosing the format by extension and then by content.
fn load(path: &Path) -> Result<Network> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let aiger = match path.extension().and_then(|e| e.to_str()) {
        Some("aag") => true,
        Some("blif") => false,
        _ => text.trim_start().starts_with("aag "),
    };
    let net = if aiger {
        parse_aiger_ascii(&text)
    } else {
        parse_blif(&text)
    };
    net.with_context(|| format!("parsing {}", path.display()))
}

fn resolve_targets(net: &Network, names: &[String]) -> Result<Vec<NodeId>, Failure> {
    names
        .iter()
        .map(|n| {
            net.find(n.trim())
                .ok_or_else(|| Failure::Usage(format!("unknown target `{n}`")))
        })
        .collect()
}

fn run(cmd: Command) -> Result<u8, Failure> {
    match cmd {
        Command::Sim {
            input,
            patterns,
            pattern_file,
            targets,
            mode,
            seed,
            exhaustive,
        } => {
            let net = load(&input)?;
            let targets = resolve_targets(&net, &targets)?;
            let mode = mode.unwrap_or(if targets.is_empty() { Mode::All } else { Mode::Targets });
            if mode == Mode::Targets && targets.is_empty() {
                return Err(Failure::Usage("--mode targets needs --targets".into()));
            }
            if exhaustive {
                let mut out = Vec::new();
                for &t in &targets {
                    out.push(support_signature(&net, t, 20).context("exhaustive simulation")?);
                }
                print!("{}", format_signatures(&net, &out));
                return Ok(0);
            }
            let p = match pattern_file {
                Some(f) => {
                    let text = fs::read_to_string(&f)
                        .with_context(|| format!("reading {}", f.display()))?;
                    parse_patterns(&text, net.pis().len())
                        .with_context(|| format!("parsing {}", f.display()))?
                }
                None => gen_random_patterns(net.pis().len(), patterns, seed),
            };
            let sigs = match mode {
                Mode::Targets => simulate_specified(&net, &p, &targets),
                Mode::All => simulate_all(&net, &p).map(|s| {
                    s.into_iter().filter(|s| !net.node(s.node).is_dead()).collect()
                }),
            }
            .context("simulation")?;
            print!("{}", format_signatures(&net, &sigs));
            Ok(0)
        }
        Command::Sweep {
            input,
            output,
            tfi_limit,
            conflict_limit,
            base_patterns,
            seed,
        } => {
            let mut net = load(&input)?;
            let cfg = SweepConfig {
                tfi_bound: tfi_limit,
                conflict_limit,
                n_base_patterns: base_patterns,
                seed,
                ..SweepConfig::default()
            };
            let stats = sweep(&mut net, &cfg).context("sweeping")?;
            fs::write(&output, write_blif(&net))
                .with_context(|| format!("writing {}", output.display()))?;
            println!("{}", SweepStats::CSV_HEADER);
            println!("{}", stats.csv_row());
            eprintln!("{stats}");
            Ok(0)
        }
        Command::Cec { a, b } => {
            let (na, nb) = (load(&a)?, load(&b)?);
            match cec(&na, &nb).context("equivalence check")? {
                CecResult::Equivalent => {
                    println!("equivalent");
                    Ok(0)
                }
                CecResult::Inequivalent { po, ce } => {
                    let ce: Vec<String> =
                        ce.iter().map(|(n, v)| format!("{n}={}", *v as u8)).collect();
                    println!("inequivalent at {po}: {}", ce.join(" "));
                    Ok(1)
                }
                CecResult::Undecided { po } => {
                    println!("undecided at {po}");
                    Ok(1)
                }
            }
        }
        Command::Prove { a, b } => {
            let (exprs, names) = BoolExpr::parse_many(&[a.as_str(), b.as_str()])
                .context("parsing expressions")?;
            let n = names.len();
            let ma = canonical_form(&exprs[0], n).context("canonical form")?;
            let mb = canonical_form(&exprs[1], n).context("canonical form")?;
            // Columns in truth-row order, all-true first.
            let diff = (0..1usize << n).rev().find(|&x| ma.value(x) != mb.value(x));
            match diff {
                None => {
                    println!("proved");
                    Ok(0)
                }
                Some(x) => {
                    let assignment: Vec<String> = names
                        .iter()
                        .enumerate()
                        .map(|(i, v)| format!("{v}={}", (x >> (n - 1 - i)) & 1))
                        .collect();
                    println!("refuted at {}", assignment.join(","));
                    Ok(1)
                }
            }
        }
        Command::Stats { input } => {
            let net = load(&input)?;
            let lv = levels(&net);
            let live = || net.node_ids().filter(|&i| !net.node(i).is_dead());
            let depth = net.pos().iter().map(|p| lv[p.driver.index()]).max().unwrap_or(0);
            let max_fanin = live().map(|i| net.node(i).fanins().len()).max().unwrap_or(0);
            let edges: usize = live().map(|i| net.node(i).fanins().len()).sum();
            println!("name={}", net.name());
            println!("pis={}", net.pis().len());
            println!("pos={}", net.pos().len());
            println!("luts={}", net.lut_count());
            println!("edges={edges}");
            println!("max_fanin={max_fanin}");
            println!("depth={depth}");
            Ok(0)
        }
    }
}
