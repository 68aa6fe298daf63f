//! SAT sweeping: merge functionally equivalent nodes.
//!
//! Simulation groups nodes into candidate classes; SAT proves or refutes
//! each merge. Refuted pairs yield counterexamples that refine the classes,
//! optionally backed by exhaustive simulation of small windows so that
//! later queries are only spent on true equivalences.

mod classes;
mod patterns;

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::netlist::{
    is_in_tfo, remove_dead, reverse_topo_order, substitute_node, transitive_fanin, Network,
    NodeId,
};
use crate::sat::{prove_equiv, Counterexample, SatOutcome};
use crate::sim::{simulate_all, simulate_specified, PatternSet, SimError};

pub use classes::{init_equiv_classes, ClassManager};
pub use patterns::{constant_prop, sat_guided_patterns, GuidedPatterns};

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// Nodes visited per transitive-fanin query when collecting drivers.
    pub tfi_bound: usize,
    /// Conflicts per SAT call; 0 disables the limit.
    pub conflict_limit: u64,
    pub n_base_patterns: usize,
    /// Toggle rates below this (or above one minus this) ask for more
    /// patterns.
    pub toggle_threshold: f64,
    pub seed: u64,
    /// Largest PI support simulated exhaustively during refinement.
    pub window_cap: usize,
    /// Patterns built around each counterexample.
    pub ce_patterns: usize,
    /// Split classes by exhaustive window simulation after a counterexample.
    pub exhaustive_refinement: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            tfi_bound: 1000,
            conflict_limit: 0,
            n_base_patterns: 2048,
            toggle_threshold: 1.0 / 64.0,
            seed: 0,
            window_cap: 16,
            ce_patterns: 64,
            exhaustive_refinement: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepStats {
    /// LUTs before sweeping.
    pub gate: usize,
    /// LUTs after sweeping.
    pub result: usize,
    pub sat_calls_total: usize,
    pub sat_calls_sat: usize,
    pub sat_calls_unsat: usize,
    pub sat_calls_undet: usize,
    /// SAT calls made while generating patterns (not in the total).
    pub pattern_sat_calls: usize,
    pub merges: usize,
    pub constants: usize,
    pub ce_refinements: usize,
    pub sim_time: Duration,
    pub total_time: Duration,
}

impl SweepStats {
    pub const CSV_HEADER: &'static str =
        "gate,result,sat_calls,total_sat_calls,sim_time_s,total_time_s";

    /// `sat_calls` counts the satisfiable calls; `total_sat_calls` all of
    /// them.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6}",
            self.gate,
            self.result,
            self.sat_calls_sat,
            self.sat_calls_total,
            self.sim_time.as_secs_f64(),
            self.total_time.as_secs_f64()
        )
    }
}

impl fmt::Display for SweepStats {
    /// One `key=value` pair per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gate={}", self.gate)?;
        writeln!(f, "result={}", self.result)?;
        writeln!(f, "sat_calls_total={}", self.sat_calls_total)?;
        writeln!(f, "sat_calls_sat={}", self.sat_calls_sat)?;
        writeln!(f, "sat_calls_unsat={}", self.sat_calls_unsat)?;
        writeln!(f, "sat_calls_undet={}", self.sat_calls_undet)?;
        writeln!(f, "pattern_sat_calls={}", self.pattern_sat_calls)?;
        writeln!(f, "merges={}", self.merges)?;
        writeln!(f, "constants={}", self.constants)?;
        writeln!(f, "ce_refinements={}", self.ce_refinements)?;
        writeln!(f, "sim_time_s={:.6}", self.sim_time.as_secs_f64())?;
        write!(f, "total_time_s={:.6}", self.total_time.as_secs_f64())
    }
}

/// Splits classes with patterns built around `ce`, then (if enabled) by
/// exhaustive simulation of every class window not checked yet. Returns the
/// number of classes split.
pub fn refine_classes(
    mgr: &mut ClassManager,
    net: &Network,
    ce: &Counterexample,
    cfg: &SweepConfig,
    rng: &mut ChaCha8Rng,
) -> Result<usize, SimError> {
    mgr.prune_dead(net);
    let patterns: Vec<Vec<bool>> = (0..cfg.ce_patterns.max(1))
        .map(|_| ce.to_pattern(net, || rng.random()))
        .collect();
    let p = PatternSet::from_patterns(net.pis().len(), &patterns);
    let targets = mgr.all_members();
    let mut splits = 0;
    if !targets.is_empty() {
        let sigs = simulate_specified(net, &p, &targets)?;
        splits += mgr.refine_with_signatures(&sigs);
    }
    if cfg.exhaustive_refinement {
        splits += mgr.refine_exhaustive(net, cfg.window_cap);
    }
    Ok(splits)
}

/// Drivers for `cand`: class members in the bounded fanin of each member,
/// in topological order of the members.
fn drivers(net: &Network, mgr: &ClassManager, cand: NodeId, bound: usize) -> Vec<NodeId> {
    let Some(c) = mgr.class_of(cand) else {
        return Vec::new();
    };
    let mut out: Vec<NodeId> = Vec::new();
    for &g in mgr.members(c) {
        let mut found: Vec<NodeId> = transitive_fanin(net, g, bound)
            .into_iter()
            .filter(|&d| mgr.class_of(d) == Some(c))
            .collect();
        if net.is_pi(g) && bound > 0 {
            found.push(g);
        }
        found.sort_by_key(|&d| mgr.rank(d));
        for d in found {
            if !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

/// Sweeps `net` in place and returns the statistics.
pub fn sweep(net: &mut Network, cfg: &SweepConfig) -> Result<SweepStats, SimError> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut stats = SweepStats {
        gate: net.lut_count(),
        ..SweepStats::default()
    };

    let t = Instant::now();
    let guided = sat_guided_patterns(net, cfg, &mut rng)?;
    stats.sim_time += t.elapsed();
    stats.pattern_sat_calls = guided.sat_calls;
    stats.constants = constant_prop(net, &guided.constants);

    let t = Instant::now();
    let sigs = simulate_all(net, &guided.patterns)?;
    let mut mgr = init_equiv_classes(net, &sigs);
    stats.sim_time += t.elapsed();

    for cand in reverse_topo_order(net)? {
        let node = net.node(cand);
        if node.is_dead() || node.is_pi() || node.is_constant() || node.is_dont_touch() {
            continue;
        }
        let mut tried: Vec<NodeId> = Vec::new();
        'candidate: loop {
            if mgr.class_of(cand).is_none() {
                break;
            }
            let list = drivers(net, &mgr, cand, cfg.tfi_bound);
            let mut progressed = false;
            for d in list {
                if tried.contains(&d) {
                    continue;
                }
                tried.push(d);
                if d == cand || net.node(d).is_dead() || is_in_tfo(net, cand, d) {
                    continue;
                }
                let inverted = mgr.phase(cand) ^ mgr.phase(d);
                stats.sat_calls_total += 1;
                match prove_equiv(net, cand, d, inverted, cfg.conflict_limit) {
                    SatOutcome::Undet => {
                        stats.sat_calls_undet += 1;
                        net.set_dont_touch(cand);
                        break 'candidate;
                    }
                    SatOutcome::Unsat => {
                        stats.sat_calls_unsat += 1;
                        substitute_node(net, cand, d, inverted)?;
                        stats.merges += 1;
                        mgr.remove(cand);
                        break 'candidate;
                    }
                    SatOutcome::Sat(ce) => {
                        stats.sat_calls_sat += 1;
                        stats.ce_refinements += 1;
                        let t = Instant::now();
                        refine_classes(&mut mgr, net, &ce, cfg, &mut rng)?;
                        stats.sim_time += t.elapsed();
                        // The class changed; collect drivers again.
                        progressed = true;
                        break;
                    }
                }
            }
            if !progressed {
                break;
            }
        }
    }

    remove_dead(net);
    stats.result = net.lut_count();
    stats.total_time = start.elapsed();
    Ok(stats)
}
