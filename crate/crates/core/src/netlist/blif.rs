//! The combinational BLIF subset: `.model .inputs .outputs .names .end`.
//!
//! Cover rows are `[01-]+ [01]`. Don't-cares expand to minterms at parse
//! time and a node's rows must all carry the same output value (an all-`0`
//! cover describes the off-set). The writer emits one on-set row per
//! minterm.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use super::{topo_order, NetlistError, Network, NodeId, NodeKind};
use crate::stp::LogicMatrix;

pub const DEFAULT_MAX_FANIN: usize = 16;

#[derive(Clone, Debug)]
pub struct BlifOptions {
    /// Largest accepted `.names` fanin count.
    pub max_fanin: usize,
}

impl Default for BlifOptions {
    fn default() -> Self {
        BlifOptions {
            max_fanin: DEFAULT_MAX_FANIN,
        }
    }
}

struct Names {
    line: usize,
    inputs: Vec<String>,
    output: String,
    rows: Vec<(String, bool)>,
}

fn err(line: usize, msg: impl Into<String>) -> NetlistError {
    NetlistError::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_blif(text: &str) -> Result<Network, NetlistError> {
    parse_blif_with(text, &BlifOptions::default())
}

pub fn parse_blif_with(text: &str, opts: &BlifOptions) -> Result<Network, NetlistError> {
    // Logical lines: comments stripped, `\` continuations joined, tagged with
    // the number of their first physical line.
    let mut lines: Vec<(usize, String)> = Vec::new();
    let mut carry: Option<(usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim_end();
        let (body, cont) = match body.strip_suffix('\\') {
            Some(b) => (b, true),
            None => (body, false),
        };
        let entry = carry.get_or_insert_with(|| (i + 1, String::new()));
        entry.1.push(' ');
        entry.1.push_str(body);
        if !cont {
            let (line, s) = carry.take().unwrap();
            if !s.trim().is_empty() {
                lines.push((line, s.trim().to_string()));
            }
        }
    }
    if let Some((line, s)) = carry {
        if !s.trim().is_empty() {
            lines.push((line, s.trim().to_string()));
        }
    }

    let mut model = String::from("top");
    let mut inputs: Vec<(usize, String)> = Vec::new();
    let mut outputs: Vec<String> = Vec::new();
    let mut defs: Vec<Names> = Vec::new();
    let mut current: Option<Names> = None;
    let mut ended = false;

    for (line, s) in lines {
        if ended {
            return Err(err(line, "content after `.end`"));
        }
        let mut words = s.split_whitespace();
        let first = words.next().unwrap();
        if first.starts_with('.') {
            if let Some(done) = current.take() {
                defs.push(done);
            }
            match first {
                ".model" => {
                    if let Some(name) = words.next() {
                        model = name.to_string();
                    }
                }
                ".inputs" => inputs.extend(words.map(|w| (line, w.to_string()))),
                ".outputs" => outputs.extend(words.map(str::to_string)),
                ".names" => {
                    let mut signals: Vec<String> = words.map(str::to_string).collect();
                    let Some(output) = signals.pop() else {
                        return Err(err(line, "`.names` needs an output signal"));
                    };
                    if signals.len() > opts.max_fanin {
                        return Err(NetlistError::FaninLimit {
                            line,
                            signal: output,
                            arity: signals.len(),
                            max: opts.max_fanin,
                        });
                    }
                    current = Some(Names {
                        line,
                        inputs: signals,
                        output,
                        rows: Vec::new(),
                    });
                }
                ".end" => ended = true,
                other => return Err(err(line, format!("unsupported directive `{other}`"))),
            }
            continue;
        }
        let Some(names) = current.as_mut() else {
            return Err(err(line, "cover row outside of `.names`"));
        };
        let fields: Vec<&str> = s.split_whitespace().collect();
        let (pattern, value) = match (names.inputs.len(), fields.as_slice()) {
            (0, [v]) => ("", *v),
            (_, [p, v]) => (*p, *v),
            _ => return Err(err(line, "malformed cover row")),
        };
        if pattern.len() != names.inputs.len() || pattern.chars().any(|c| !"01-".contains(c)) {
            return Err(err(
                line,
                format!(
                    "cover row `{pattern}` does not match {} inputs",
                    names.inputs.len()
                ),
            ));
        }
        let value = match value {
            "1" => true,
            "0" => false,
            _ => return Err(err(line, format!("output value `{value}` is not 0 or 1"))),
        };
        names.rows.push((pattern.to_string(), value));
    }
    if let Some(done) = current.take() {
        defs.push(done);
    }

    build(model, inputs, outputs, defs)
}

fn cover_table(def: &Names) -> Result<LogicMatrix, NetlistError> {
    let k = def.inputs.len();
    let polarity = match def.rows.first() {
        None => return Ok(LogicMatrix::from_fn(k, |_| false).unwrap()),
        Some((_, v)) => *v,
    };
    if def.rows.iter().any(|(_, v)| *v != polarity) {
        return Err(err(def.line, "mixed on-set and off-set rows"));
    }
    let patterns: Vec<&[u8]> = def.rows.iter().map(|(p, _)| p.as_bytes()).collect();
    LogicMatrix::from_fn(k, |a| {
        let covered = patterns.iter().any(|p| {
            p.iter().enumerate().all(|(j, &c)| {
                let bit = (a >> (k - 1 - j)) & 1 == 1;
                match c {
                    b'1' => bit,
                    b'0' => !bit,
                    _ => true,
                }
            })
        });
        covered == polarity
    })
    .map_err(|e| err(def.line, e.to_string()))
}

fn build(
    model: String,
    inputs: Vec<(usize, String)>,
    outputs: Vec<String>,
    defs: Vec<Names>,
) -> Result<Network, NetlistError> {
    let mut net = Network::new(model);
    let mut signal: HashMap<String, NodeId> = HashMap::new();
    for (line, name) in inputs {
        if signal.contains_key(&name) {
            return Err(err(line, format!("input `{name}` declared twice")));
        }
        let id = net.add_pi(name.clone());
        signal.insert(name, id);
    }
    let mut by_output: HashMap<&str, usize> = HashMap::new();
    for (i, d) in defs.iter().enumerate() {
        if signal.contains_key(&d.output) || by_output.insert(&d.output, i).is_some() {
            return Err(err(d.line, format!("signal `{}` defined twice", d.output)));
        }
    }

    // Depth-first creation so fanins exist before their consumers.
    let mut on_stack: HashSet<usize> = HashSet::new();
    for start in 0..defs.len() {
        if signal.contains_key(&defs[start].output) {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        on_stack.insert(start);
        while let Some(&mut (d, ref mut next)) = stack.last_mut() {
            let def = &defs[d];
            if *next < def.inputs.len() {
                let name = &def.inputs[*next];
                *next += 1;
                if signal.contains_key(name) {
                    continue;
                }
                let Some(&dep) = by_output.get(name.as_str()) else {
                    return Err(err(def.line, format!("undefined signal `{name}`")));
                };
                if !on_stack.insert(dep) {
                    return Err(NetlistError::Cycle(name.clone()));
                }
                stack.push((dep, 0));
            } else {
                let fanins: Vec<NodeId> = def.inputs.iter().map(|n| signal[n]).collect();
                let tt = cover_table(def)?;
                let id = net.add_named_lut(def.output.clone(), &fanins, tt)?;
                signal.insert(def.output.clone(), id);
                on_stack.remove(&d);
                stack.pop();
            }
        }
    }

    for name in outputs {
        let Some(&driver) = signal.get(&name) else {
            return Err(err(0, format!("output `{name}` is never defined")));
        };
        net.add_po(driver, false, name);
    }
    Ok(net)
}

/// Serializes the live part of `net`.
pub fn write_blif(net: &Network) -> String {
    let mut names: Vec<Option<String>> = vec![None; net.len()];
    let mut taken: HashSet<String> = HashSet::new();
    for &p in net.pis() {
        let n = net.display_name(p);
        taken.insert(n.clone());
        names[p.index()] = Some(n);
    }
    // A LUT driving a PO directly takes the PO's name, so the round trip adds
    // no buffers.
    let mut po_needs_buffer = vec![true; net.pos().len()];
    for (i, po) in net.pos().iter().enumerate() {
        if !po.inverted && !net.is_pi(po.driver) && names[po.driver.index()].is_none() {
            if taken.insert(po.name.clone()) {
                names[po.driver.index()] = Some(po.name.clone());
                po_needs_buffer[i] = false;
            }
        } else if !po.inverted && names[po.driver.index()].as_deref() == Some(&po.name) {
            po_needs_buffer[i] = false;
        }
    }
    for po in net.pos() {
        taken.insert(po.name.clone());
    }
    let order = topo_order(net).expect("network is acyclic");
    for &id in &order {
        if names[id.index()].is_some() || net.node(id).is_dead() {
            continue;
        }
        let mut n = net.display_name(id);
        if taken.contains(&n) {
            n = format!("{n}_{}", id.0);
            while taken.contains(&n) {
                n.push('_');
            }
        }
        taken.insert(n.clone());
        names[id.index()] = Some(n);
    }

    let mut out = String::new();
    let _ = writeln!(out, ".model {}", net.name());
    let _ = write!(out, ".inputs");
    for &p in net.pis() {
        let _ = write!(out, " {}", names[p.index()].as_ref().unwrap());
    }
    let _ = write!(out, "\n.outputs");
    for po in net.pos() {
        let _ = write!(out, " {}", po.name);
    }
    out.push('\n');
    for &id in &order {
        let node = net.node(id);
        let NodeKind::Lut(tt) = &node.kind else {
            continue;
        };
        if node.dead {
            continue;
        }
        let _ = write!(out, ".names");
        for f in &node.fanins {
            let _ = write!(out, " {}", names[f.index()].as_ref().unwrap());
        }
        let _ = writeln!(out, " {}", names[id.index()].as_ref().unwrap());
        let k = tt.arity();
        for a in 0..tt.columns() {
            if !tt.value(a) {
                continue;
            }
            let row: String = (0..k)
                .map(|j| if (a >> (k - 1 - j)) & 1 == 1 { '1' } else { '0' })
                .collect();
            if k == 0 {
                out.push_str("1\n");
            } else {
                let _ = writeln!(out, "{row} 1");
            }
        }
    }
    for (po, needs) in net.pos().iter().zip(po_needs_buffer) {
        if needs {
            let driver = names[po.driver.index()].as_ref().unwrap();
            let row = if po.inverted { "0 1" } else { "1 1" };
            let _ = writeln!(out, ".names {driver} {}\n{row}", po.name);
        }
    }
    out.push_str(".end\n");
    out
}
