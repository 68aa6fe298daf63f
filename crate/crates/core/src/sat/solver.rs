//! Conflict-driven clause learning with two watched literals, first-UIP
//! learning, VSIDS branching, phase saving and Luby restarts.

use super::{Cnf, Lit, SatOutcome};

const NO_REASON: u32 = u32::MAX;
const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;
const RESTART_UNIT: u64 = 100;

#[derive(Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
}

/// Max-heap of variables keyed by activity.
#[derive(Default)]
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn grow(&mut self, n: usize) {
        self.pos.resize(n, None);
    }

    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize].is_some()
    }

    fn less(act: &[f64], a: u32, b: u32) -> bool {
        // Higher activity first; lower index breaks ties.
        act[a as usize] > act[b as usize] || (act[a as usize] == act[b as usize] && a < b)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::less(act, v, self.heap[parent]) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i] as usize] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = Some(i);
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let c = if r < self.heap.len() && Self::less(act, self.heap[r], self.heap[l]) {
                r
            } else {
                l
            };
            if !Self::less(act, self.heap[c], v) {
                break;
            }
            self.heap[i] = self.heap[c];
            self.pos[self.heap[i] as usize] = Some(i);
            i = c;
        }
        self.heap[i] = v;
        self.pos[v as usize] = Some(i);
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.pos[v as usize] = Some(i);
        self.up(i, act);
    }

    fn bumped(&mut self, v: u32, act: &[f64]) {
        if let Some(i) = self.pos[v as usize] {
            self.up(i, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = Some(0);
            self.down(0, act);
        }
        Some(top)
    }
}

fn luby(mut i: u64) -> u64 {
    // Finds the subsequence containing index i, then the position inside it.
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

/// An incremental CDCL solver. Clauses may be added between calls to
/// [`Solver::solve`]; learnt clauses are kept.
pub struct Solver {
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watcher>>,
    /// Per variable: 1 true, -1 false, 0 unassigned.
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    polarity: Vec<bool>,
    heap: VarHeap,
    seen: Vec<bool>,
    ok: bool,
    learnts: usize,
    max_learnts: f64,
    stats: SolverStats,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

impl Solver {
    pub fn new() -> Self {
        Solver {
            clauses: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            polarity: Vec::new(),
            heap: VarHeap::default(),
            seen: Vec::new(),
            ok: true,
            learnts: 0,
            max_learnts: 0.0,
            stats: SolverStats::default(),
        }
    }

    pub fn from_cnf(cnf: &Cnf) -> Self {
        let mut s = Solver::new();
        s.reserve_vars(cnf.num_vars());
        for c in cnf.clauses() {
            s.add_clause(c);
        }
        s
    }

    pub fn num_vars(&self) -> u32 {
        self.assigns.len() as u32
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    /// Makes sure variables `0..n` exist.
    pub fn reserve_vars(&mut self, n: u32) {
        let n = n as usize;
        if n <= self.assigns.len() {
            return;
        }
        let old = self.assigns.len();
        self.assigns.resize(n, 0);
        self.level.resize(n, 0);
        self.reason.resize(n, NO_REASON);
        self.activity.resize(n, 0.0);
        self.polarity.resize(n, false);
        self.seen.resize(n, false);
        self.watches.resize(2 * n, Vec::new());
        self.heap.grow(n);
        for v in old..n {
            self.heap.insert(v as u32, &self.activity);
        }
    }

    fn value(&self, l: Lit) -> i8 {
        let v = self.assigns[l.var() as usize];
        if l.is_negated() {
            -v
        } else {
            v
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = l.var() as usize;
        debug_assert_eq!(self.assigns[v], 0);
        self.assigns[v] = if l.is_negated() { -1 } else { 1 };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds a clause at the top level. Returns `false` once the formula is
    /// known to be unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        if let Some(max) = lits.iter().map(|l| l.var()).max() {
            self.reserve_vars(max + 1);
        }
        self.cancel_until(0);
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0].var() == w[1].var()) {
            return true;
        }
        if c.iter().any(|&l| self.value(l) == 1) {
            return true;
        }
        c.retain(|&l| self.value(l) == 0);
        match c.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(c[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(c, false);
            }
        }
        self.ok
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        let cref = self.clauses.len() as u32;
        self.watches[lits[0].index()].push(Watcher {
            cref,
            blocker: lits[1],
        });
        self.watches[lits[1].index()].push(Watcher {
            cref,
            blocker: lits[0],
        });
        self.clauses.push(Clause {
            lits,
            learnt,
            deleted: false,
            activity: 0.0,
        });
        if learnt {
            self.learnts += 1;
        }
        cref
    }

    /// Unit propagation; returns a conflicting clause.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.index()]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                if first != w.blocker && self.value(first) == 1 {
                    ws[j] = Watcher {
                        cref: w.cref,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cref].lits[k];
                    if self.value(l) != -1 {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[l.index()].push(Watcher {
                            cref: w.cref,
                            blocker: first,
                        });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = w;
                j += 1;
                if self.value(first) == -1 {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                    self.qhead = self.trail.len();
                } else {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[false_lit.index()] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: u32) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backtrack level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, usize) {
        let mut learnt = vec![Lit(0)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level() as u32;
        loop {
            if self.clauses[confl as usize].learnt {
                self.bump_clause(confl);
            }
            let skip = usize::from(p.is_some());
            let lits = self.clauses[confl as usize].lits.clone();
            for &q in &lits[skip..] {
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(q.var());
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var() as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            confl = self.reason[lit.var() as usize];
            self.seen[lit.var() as usize] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = !p.unwrap();

        // Drop literals implied by the rest of the clause.
        let all = learnt.clone();
        let mut kept = vec![learnt[0]];
        for &l in &learnt[1..] {
            let r = self.reason[l.var() as usize];
            let redundant = r != NO_REASON
                && self.clauses[r as usize].lits[1..].iter().all(|q| {
                    let v = q.var() as usize;
                    self.seen[v] || self.level[v] == 0
                });
            if !redundant {
                kept.push(l);
            }
        }
        for l in all {
            self.seen[l.var() as usize] = false;
        }
        let mut learnt = kept;

        let bt = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var() as usize] > self.level[learnt[max_i].var() as usize] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var() as usize] as usize
        };
        (learnt, bt)
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var() as usize;
            self.assigns[v] = 0;
            self.reason[v] = NO_REASON;
            self.polarity[v] = !l.is_negated();
            self.heap.insert(l.var(), &self.activity);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level);
        self.qhead = start;
    }

    fn locked(&self, cref: u32) -> bool {
        let first = self.clauses[cref as usize].lits[0];
        self.reason[first.var() as usize] == cref && self.value(first) == 1
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<u32> = (0..self.clauses.len() as u32)
            .filter(|&c| {
                let cl = &self.clauses[c as usize];
                cl.learnt && !cl.deleted && cl.lits.len() > 2
            })
            .collect();
        cands.sort_by(|&a, &b| {
            self.clauses[a as usize]
                .activity
                .total_cmp(&self.clauses[b as usize].activity)
                .then(a.cmp(&b))
        });
        let mut removed = 0;
        for &c in &cands[..cands.len() / 2] {
            if !self.locked(c) {
                let cl = &mut self.clauses[c as usize];
                cl.deleted = true;
                cl.lits = Vec::new();
                removed += 1;
            }
        }
        if removed > 0 {
            self.learnts -= removed;
            let clauses = &self.clauses;
            for ws in &mut self.watches {
                ws.retain(|w| !clauses[w.cref as usize].deleted);
            }
        }
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v as usize] == 0 {
                return Some(Lit::new(v, !self.polarity[v as usize]));
            }
        }
        None
    }

    /// Solves under `assumptions`. `conflict_limit` 0 means no limit;
    /// otherwise `Undet` is returned once that many conflicts occurred in
    /// this call. A `Sat` model holds one value per variable.
    pub fn solve(&mut self, assumptions: &[Lit], conflict_limit: u64) -> SatOutcome {
        if let Some(max) = assumptions.iter().map(|l| l.var()).max() {
            self.reserve_vars(max + 1);
        }
        if !self.ok {
            return SatOutcome::Unsat;
        }
        self.cancel_until(0);
        if self.propagate().is_some() {
            self.ok = false;
            return SatOutcome::Unsat;
        }
        self.max_learnts = (self.clauses.len() as f64 / 3.0).max(100.0);
        let start = self.stats.conflicts;
        let mut restart = 0u64;
        loop {
            let budget = luby(restart) * RESTART_UNIT;
            match self.search(assumptions, budget, start, conflict_limit) {
                Some(out) => {
                    self.cancel_until(0);
                    return out;
                }
                None => {
                    restart += 1;
                    self.stats.restarts += 1;
                }
            }
        }
    }

    fn search(
        &mut self,
        assumptions: &[Lit],
        budget: u64,
        start: u64,
        conflict_limit: u64,
    ) -> Option<SatOutcome> {
        let mut local = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                local += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Some(SatOutcome::Unsat);
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let first = learnt[0];
                    let cref = self.attach(learnt, true);
                    self.bump_clause(cref);
                    self.enqueue(first, cref);
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLAUSE_DECAY;
                if conflict_limit > 0 && self.stats.conflicts - start >= conflict_limit {
                    return Some(SatOutcome::Undet);
                }
                continue;
            }
            if local >= budget {
                self.cancel_until(0);
                return None;
            }
            if self.learnts as f64 >= self.max_learnts + self.trail.len() as f64 {
                self.reduce_db();
                self.max_learnts *= 1.1;
            }
            let mut next = None;
            while self.decision_level() < assumptions.len() {
                let a = assumptions[self.decision_level()];
                match self.value(a) {
                    1 => self.trail_lim.push(self.trail.len()),
                    -1 => return Some(SatOutcome::Unsat),
                    _ => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let next = match next {
                Some(a) => a,
                None => match self.pick_branch() {
                    Some(l) => {
                        self.stats.decisions += 1;
                        l
                    }
                    None => {
                        let model = self.assigns.iter().map(|&v| v == 1).collect();
                        return Some(SatOutcome::Sat(model));
                    }
                },
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(next, NO_REASON);
        }
    }
}

/// One-shot solve of `cnf`.
pub fn solve(cnf: &Cnf, assumptions: &[Lit], conflict_limit: u64) -> SatOutcome {
    let mut s = Solver::from_cnf(cnf);
    s.reserve_vars(cnf.num_vars());
    s.solve(assumptions, conflict_limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cnf(n: u32, clauses: &[&[i64]]) -> Cnf {
        let mut c = Cnf::new();
        for _ in 0..n {
            c.new_var();
        }
        for cl in clauses {
            let lits: Vec<Lit> = cl.iter().map(|&x| Lit::from_dimacs(x)).collect();
            c.add_clause(&lits);
        }
        c
    }

    fn satisfies(cnf: &Cnf, model: &[bool]) -> bool {
        cnf.clauses()
            .iter()
            .all(|c| c.iter().any(|l| model[l.var() as usize] != l.is_negated()))
    }

    fn brute_force(cnf: &Cnf) -> bool {
        let n = cnf.num_vars();
        (0..1u64 << n).any(|a| {
            let m: Vec<bool> = (0..n).map(|i| (a >> i) & 1 == 1).collect();
            satisfies(cnf, &m)
        })
    }

    #[test]
    fn luby_sequence() {
        let got: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(got, [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(solve(&cnf(1, &[&[1], &[-1]]), &[], 0), SatOutcome::Unsat);
        match solve(&cnf(2, &[&[1, 2]]), &[], 0) {
            SatOutcome::Sat(m) => assert!(m[0] || m[1]),
            other => panic!("{other:?}"),
        }
        assert!(solve(&cnf(0, &[]), &[], 0).is_sat());
    }

    #[test]
    fn assumptions() {
        let f = cnf(2, &[&[1, 2]]);
        assert_eq!(solve(&f, &[Lit::neg(0), Lit::neg(1)], 0), SatOutcome::Unsat);
        match solve(&f, &[Lit::neg(0)], 0) {
            SatOutcome::Sat(m) => assert!(!m[0] && m[1]),
            other => panic!("{other:?}"),
        }
        let mut s = Solver::from_cnf(&f);
        assert!(s.solve(&[Lit::neg(0), Lit::neg(1)], 0).is_unsat());
        assert!(s.solve(&[], 0).is_sat());
    }

    fn pigeonhole(holes: u32) -> Cnf {
        let pigeons = holes + 1;
        let var = |p: u32, h: u32| (p * holes + h) as i64 + 1;
        let mut clauses: Vec<Vec<i64>> = Vec::new();
        for p in 0..pigeons {
            clauses.push((0..holes).map(|h| var(p, h)).collect());
        }
        for h in 0..holes {
            for a in 0..pigeons {
                for b in a + 1..pigeons {
                    clauses.push(vec![-var(a, h), -var(b, h)]);
                }
            }
        }
        let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
        cnf(pigeons * holes, &refs)
    }

    #[test]
    fn pigeonhole_is_unsat() {
        assert_eq!(solve(&pigeonhole(5), &[], 0), SatOutcome::Unsat);
    }

    #[test]
    fn conflict_limit_gives_undet() {
        assert_eq!(solve(&pigeonhole(7), &[], 5), SatOutcome::Undet);
    }

    #[test]
    fn random_3cnf_against_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for round in 0..300 {
            let n = rng.random_range(3..=14u32);
            let m = rng.random_range(1..=(5 * n) as usize);
            let clauses: Vec<Vec<i64>> = (0..m)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = rng.random_range(1..=n) as i64;
                            if rng.random() {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
            let f = cnf(n, &refs);
            let expect = brute_force(&f);
            match solve(&f, &[], 0) {
                SatOutcome::Sat(model) => {
                    assert!(expect, "round {round}: spurious model");
                    assert!(satisfies(&f, &model), "round {round}: bad model");
                }
                SatOutcome::Unsat => assert!(!expect, "round {round}: missed model"),
                SatOutcome::Undet => panic!("no limit was set"),
            }
        }
    }

    #[test]
    fn larger_random_instances_give_valid_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let n = 50u32;
            let clauses: Vec<Vec<i64>> = (0..200)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = rng.random_range(1..=n) as i64;
                            if rng.random() {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
            let f = cnf(n, &refs);
            if let SatOutcome::Sat(m) = solve(&f, &[], 0) {
                assert!(satisfies(&f, &m));
            }
        }
    }
}
