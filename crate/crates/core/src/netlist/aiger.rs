//! ASCII AIGER (`aag`) reader for combinational AIGs.
//!
//! Each AND becomes a two-input LUT with edge inversions folded into its
//! table. Inverted outputs become inverted POs.

use super::{NetlistError, Network, NodeId};
use crate::stp::LogicMatrix;

fn err(line: usize, msg: impl Into<String>) -> NetlistError {
    NetlistError::Parse {
        line,
        msg: msg.into(),
    }
}

fn numbers(line: usize, s: &str, want: usize) -> Result<Vec<u64>, NetlistError> {
    let v: Vec<u64> = s
        .split_whitespace()
        .map(|w| w.parse().map_err(|_| err(line, format!("`{w}` is not a literal"))))
        .collect::<Result<_, _>>()?;
    if v.len() != want {
        return Err(err(line, format!("expected {want} numbers, got {}", v.len())));
    }
    Ok(v)
}

pub fn parse_aiger_ascii(text: &str) -> Result<Network, NetlistError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hline, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("aag") {
        return Err(err(hline, "expected an `aag` header"));
    }
    let rest: Vec<&str> = words.collect();
    let h = numbers(hline, &rest.join(" "), 5)?;
    let (max_var, ni, nl, no, na) = (h[0], h[1] as usize, h[2] as usize, h[3] as usize, h[4] as usize);
    if nl != 0 {
        return Err(NetlistError::Latches(nl));
    }
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| err(0, format!("missing {what} line")))
    };

    let mut inputs = Vec::with_capacity(ni);
    for _ in 0..ni {
        let (l, s) = next("input")?;
        let lit = numbers(l, s, 1)?[0];
        if lit < 2 || lit & 1 == 1 || lit / 2 > max_var {
            return Err(err(l, format!("bad input literal {lit}")));
        }
        inputs.push(lit);
    }
    let mut outputs = Vec::with_capacity(no);
    for _ in 0..no {
        let (l, s) = next("output")?;
        let lit = numbers(l, s, 1)?[0];
        if lit / 2 > max_var {
            return Err(err(l, format!("output literal {lit} exceeds the maximum variable")));
        }
        outputs.push(lit);
    }
    let mut ands: Vec<Option<(usize, u64, u64)>> = vec![None; max_var as usize + 1];
    for _ in 0..na {
        let (l, s) = next("and")?;
        let v = numbers(l, s, 3)?;
        let (lhs, a, b) = (v[0], v[1], v[2]);
        if lhs < 2 || lhs & 1 == 1 || lhs / 2 > max_var || a / 2 > max_var || b / 2 > max_var {
            return Err(err(l, "bad and-gate literals"));
        }
        let slot = &mut ands[(lhs / 2) as usize];
        if slot.is_some() || inputs.contains(&lhs) {
            return Err(err(l, format!("variable {} defined twice", lhs / 2)));
        }
        *slot = Some((l, a, b));
    }

    let mut in_names: Vec<Option<String>> = vec![None; ni];
    let mut out_names: Vec<Option<String>> = vec![None; no];
    for (l, s) in lines {
        if s == "c" {
            break;
        }
        if s.is_empty() {
            continue;
        }
        let (tag, name) = s.split_once(' ').ok_or_else(|| err(l, "malformed symbol"))?;
        let (kind, pos) = tag.split_at(1);
        let pos: usize = pos.parse().map_err(|_| err(l, "malformed symbol"))?;
        let table = match kind {
            "i" => &mut in_names,
            "o" => &mut out_names,
            "l" => return Err(err(l, "latch symbol in a combinational file")),
            _ => return Err(err(l, format!("unknown symbol kind `{kind}`"))),
        };
        *table
            .get_mut(pos)
            .ok_or_else(|| err(l, format!("symbol index {pos} out of range")))? = Some(name.to_string());
    }

    let mut net = Network::new("aig");
    let mut node: Vec<Option<NodeId>> = vec![None; max_var as usize + 1];
    for (i, &lit) in inputs.iter().enumerate() {
        let name = in_names[i].clone().unwrap_or_else(|| format!("i{i}"));
        node[(lit / 2) as usize] = Some(net.add_pi(name));
    }

    let mut resolve = |net: &mut Network, var: usize| -> Result<NodeId, NetlistError> {
        if var == 0 {
            return Ok(net.constant_node());
        }
        if let Some(id) = node[var] {
            return Ok(id);
        }
        let mut stack = vec![var];
        let mut on_stack = vec![false; node.len()];
        on_stack[var] = true;
        while let Some(&v) = stack.last() {
            let Some((l, a, b)) = ands[v] else {
                return Err(err(0, format!("variable {v} is used but never defined")));
            };
            let mut pending = None;
            for x in [a, b] {
                let u = (x / 2) as usize;
                if u != 0 && node[u].is_none() {
                    if on_stack[u] {
                        return Err(NetlistError::Cycle(format!("v{u}")));
                    }
                    pending = Some(u);
                    break;
                }
            }
            if let Some(u) = pending {
                on_stack[u] = true;
                stack.push(u);
                continue;
            }
            let mut fanins = [NodeId(0); 2];
            for (j, x) in [a, b].into_iter().enumerate() {
                let u = (x / 2) as usize;
                fanins[j] = if u == 0 { net.constant_node() } else { node[u].unwrap() };
            }
            let mut tt = LogicMatrix::from_fn(2, |a| a == 3).unwrap();
            for (j, x) in [a, b].into_iter().enumerate() {
                if x & 1 == 1 {
                    tt = tt.negate_input(j);
                }
            }
            let id = net
                .add_lut(&fanins, tt)
                .map_err(|e| err(l, e.to_string()))?;
            net.set_name(id, format!("v{v}"));
            node[v] = Some(id);
            on_stack[v] = false;
            stack.pop();
        }
        Ok(node[var].unwrap())
    };

    for (i, &lit) in outputs.iter().enumerate() {
        let driver = resolve(&mut net, (lit / 2) as usize)?;
        let name = out_names[i].clone().unwrap_or_else(|| format!("o{i}"));
        net.add_po(driver, lit & 1 == 1, name);
    }
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_and() {
        let net = parse_aiger_ascii("aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n").unwrap();
        let y = net.pos()[0].driver;
        assert_eq!(net.node(y).tt().unwrap().truth_row(), "1000");
        assert_eq!(net.pis().len(), 2);
    }

    #[test]
    fn inverted_edges_fold_into_the_table() {
        // y = !(!a & b)
        let net = parse_aiger_ascii("aag 3 2 0 1 1\n2\n4\n7\n6 3 4\ni0 a\ni1 b\no0 y\n").unwrap();
        let po = &net.pos()[0];
        assert!(po.inverted);
        assert_eq!(po.name, "y");
        assert_eq!(net.node(po.driver).tt().unwrap().truth_row(), "0010");
        for a in [false, true] {
            for b in [false, true] {
                assert_eq!(net.eval_outputs(&[a, b]), [!(!a && b)]);
            }
        }
    }

    #[test]
    fn constants_and_comments() {
        let net = parse_aiger_ascii("aag 1 1 0 2 0\n2\n0\n1\nc\nanything goes\n").unwrap();
        assert_eq!(net.eval_outputs(&[true]), [false, true]);
        assert_eq!(net.eval_outputs(&[false]), [false, true]);
    }

    #[test]
    fn chain_matches_brute_force() {
        // g1 = a & b, g2 = !g1 & c, g3 = g2 & !a, outputs g3 and !g2.
        let text = "aag 6 3 0 2 3\n2\n4\n6\n12\n11\n12 10 3\n8 2 4\n10 9 6\n";
        let net = parse_aiger_ascii(text).unwrap();
        for m in 0..8usize {
            let (a, b, c) = (m & 1 == 1, m & 2 != 0, m & 4 != 0);
            let g1 = a && b;
            let g2 = !g1 && c;
            let g3 = g2 && !a;
            assert_eq!(net.eval_outputs(&[a, b, c]), [g3, !g2]);
        }
    }

    #[test]
    fn rejects_latches_and_garbage() {
        assert_eq!(
            parse_aiger_ascii("aag 2 1 1 0 0\n2\n4 2\n").unwrap_err(),
            NetlistError::Latches(1)
        );
        assert!(matches!(
            parse_aiger_ascii("aig 0 0 0 0 0\n"),
            Err(NetlistError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_aiger_ascii("aag 3 1 0 1 1\n2\n6\n6 2 x\n"),
            Err(NetlistError::Parse { line: 4, .. })
        ));
        assert!(parse_aiger_ascii("aag 3 1 0 1 0\n2\n6\n").is_err());
    }
}
