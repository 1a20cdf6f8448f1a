//! Bounded model finder. For each domain size it grounds the axioms into
//! propositional clauses over membership and edge variables and searches
//! for a satisfying assignment, so a `None` answer means no model of that
//! size exists at all.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Interpretation, Ontology, ReasonerError};
use crate::translator::{Axiom, ClassExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_domain: usize,
    pub max_vars: usize,
    pub max_decisions: u64,
}

impl Default for OracleLimits {
    fn default() -> OracleLimits {
        OracleLimits {
            max_domain: 8,
            max_vars: 400_000,
            max_decisions: 20_000_000,
        }
    }
}

/// First model with at most `max_domain` elements, trying sizes in
/// increasing order. Distinct names denote distinct elements.
pub fn oracle_find_model(
    o: &Ontology,
    max_domain: usize,
) -> Result<Option<Interpretation>, ReasonerError> {
    oracle_find_model_with(o, max_domain, &OracleLimits::default())
}

pub fn oracle_find_model_with(
    o: &Ontology,
    max_domain: usize,
    limits: &OracleLimits,
) -> Result<Option<Interpretation>, ReasonerError> {
    if max_domain > limits.max_domain {
        return Err(ReasonerError::SearchSpaceExceeded(format!(
            "domain size {max_domain} above {}",
            limits.max_domain
        )));
    }
    let sig = o.signature();
    let smallest = sig.individuals.len().max(1);
    for size in smallest..=max_domain {
        if let Some(model) = find_of_size(o, size, limits)? {
            return Ok(Some(model));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Lit(u32);

impl Lit {
    fn positive(var: u32) -> Lit {
        Lit(var << 1)
    }

    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    fn is_negative(self) -> bool {
        self.0 & 1 == 1
    }

    fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

struct Grounder<'a> {
    size: usize,
    limits: &'a OracleLimits,
    vars: u32,
    clauses: Vec<Vec<Lit>>,
    truth: Lit,
    class: BTreeMap<String, Vec<Lit>>,
    role: BTreeMap<String, Vec<Lit>>,
    individuals: BTreeMap<String, usize>,
    memo: HashMap<(ClassExpr, usize), Lit>,
}

impl<'a> Grounder<'a> {
    fn fresh(&mut self) -> Result<Lit, ReasonerError> {
        if self.vars as usize >= self.limits.max_vars {
            return Err(ReasonerError::SearchSpaceExceeded(format!(
                "more than {} propositional variables",
                self.limits.max_vars
            )));
        }
        self.vars += 1;
        Ok(Lit::positive(self.vars - 1))
    }

    fn clause(&mut self, lits: Vec<Lit>) {
        self.clauses.push(lits);
    }

    fn edge(&self, role: &str, x: usize, y: usize) -> Lit {
        self.role[role][x * self.size + y]
    }

    fn and2(&mut self, a: Lit, b: Lit) -> Result<Lit, ReasonerError> {
        let v = self.fresh()?;
        self.clause(vec![v.negate(), a]);
        self.clause(vec![v.negate(), b]);
        self.clause(vec![v, a.negate(), b.negate()]);
        Ok(v)
    }

    /// A variable equivalent to "at least `n` of `lits` hold".
    fn at_least(&mut self, n: usize, lits: &[Lit]) -> Result<Lit, ReasonerError> {
        if n == 0 {
            return Ok(self.truth);
        }
        if n > lits.len() {
            return Ok(self.truth.negate());
        }
        let v = self.fresh()?;
        for subset in subsets(lits.len(), lits.len() - n + 1) {
            let mut c = vec![v.negate()];
            c.extend(subset.iter().map(|&k| lits[k]));
            self.clause(c);
        }
        for subset in subsets(lits.len(), n) {
            let mut c = vec![v];
            c.extend(subset.iter().map(|&k| lits[k].negate()));
            self.clause(c);
        }
        Ok(v)
    }

    /// For each element `y`, a variable for "`x` r `y` and `y` in `filler`".
    fn qualified(&mut self, role: &str, filler: &ClassExpr, x: usize) -> Result<Vec<Lit>, ReasonerError> {
        let mut out = Vec::with_capacity(self.size);
        for y in 0..self.size {
            let f = self.lit(filler, y)?;
            let e = self.edge(role, x, y);
            out.push(self.and2(e, f)?);
        }
        Ok(out)
    }

    fn lit(&mut self, c: &ClassExpr, x: usize) -> Result<Lit, ReasonerError> {
        if let Some(&l) = self.memo.get(&(c.clone(), x)) {
            return Ok(l);
        }
        let l = match c {
            ClassExpr::Atomic { class } => self.class[class][x],
            ClassExpr::Top => self.truth,
            ClassExpr::Not { expr } => self.lit(expr, x)?.negate(),
            ClassExpr::And { left, right } => {
                let a = self.lit(left, x)?;
                let b = self.lit(right, x)?;
                self.and2(a, b)?
            }
            ClassExpr::Exists { role, filler } => {
                let q = self.qualified(role, filler, x)?;
                self.at_least(1, &q)?
            }
            ClassExpr::Forall { role, filler } => {
                let q = self.qualified(role, &ClassExpr::not((**filler).clone()), x)?;
                self.at_least(1, &q)?.negate()
            }
            ClassExpr::AtLeast { n, role, filler } => {
                let q = self.qualified(role, filler, x)?;
                self.at_least(*n as usize, &q)?
            }
            ClassExpr::AtMost { n, role, filler } => {
                let q = self.qualified(role, filler, x)?;
                self.at_least(*n as usize + 1, &q)?.negate()
            }
            ClassExpr::HasValue { role, individual } => {
                let y = self.individuals[individual];
                self.edge(role, x, y)
            }
        };
        self.memo.insert((c.clone(), x), l);
        Ok(l)
    }
}

/// All `k`-element index subsets of `0..n`.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn find_of_size(
    o: &Ontology,
    size: usize,
    limits: &OracleLimits,
) -> Result<Option<Interpretation>, ReasonerError> {
    let sig = o.signature();
    let mut g = Grounder {
        size,
        limits,
        vars: 0,
        clauses: Vec::new(),
        truth: Lit(0),
        class: BTreeMap::new(),
        role: BTreeMap::new(),
        individuals: sig
            .individuals
            .iter()
            .enumerate()
            .map(|(k, name)| (name.clone(), k))
            .collect(),
        memo: HashMap::new(),
    };
    for c in &sig.classes {
        let lits = (0..size).map(|_| g.fresh()).collect::<Result<_, _>>()?;
        g.class.insert(c.clone(), lits);
    }
    for r in &sig.roles {
        let lits = (0..size * size).map(|_| g.fresh()).collect::<Result<_, _>>()?;
        g.role.insert(r.clone(), lits);
    }
    g.truth = g.fresh()?;
    g.clause(vec![g.truth]);
    for axiom in o.axioms() {
        match axiom {
            Axiom::SubClassOf { sub, sup } => {
                for x in 0..size {
                    let a = g.lit(sub, x)?;
                    let b = g.lit(sup, x)?;
                    g.clause(vec![a.negate(), b]);
                }
            }
            Axiom::ClassAssertion { class, individual } => {
                let x = g.individuals[individual];
                let a = g.lit(class, x)?;
                g.clause(vec![a]);
            }
            Axiom::RoleAssertion {
                role,
                subject,
                object,
            } => {
                let e = g.edge(role, g.individuals[subject], g.individuals[object]);
                g.clause(vec![e]);
            }
        }
    }
    let mut solver = Solver::new(g.vars as usize);
    for c in std::mem::take(&mut g.clauses) {
        solver.add_clause(c);
    }
    let Some(value) = solver.solve(limits.max_decisions)? else {
        return Ok(None);
    };
    let holds = |l: Lit| value[l.var()] != l.is_negative();
    let classes = g
        .class
        .iter()
        .map(|(name, lits)| {
            let ext: BTreeSet<usize> = (0..size).filter(|&x| holds(lits[x])).collect();
            (name.clone(), ext)
        })
        .collect();
    let roles = g
        .role
        .iter()
        .map(|(name, lits)| {
            let mut ext = BTreeSet::new();
            for x in 0..size {
                for y in 0..size {
                    if holds(lits[x * size + y]) {
                        ext.insert((x, y));
                    }
                }
            }
            (name.clone(), ext)
        })
        .collect();
    Ok(Some(Interpretation {
        domain_size: size,
        classes,
        roles,
        individuals: g.individuals,
    }))
}

/// Conflict-driven clause learning over two watched literals. Variables
/// are decided false first in index order, so membership and edge
/// variables come before the gate variables they determine.
struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    /// Trail length at the start of each decision level.
    levels: Vec<usize>,
    head: usize,
    units: Vec<Lit>,
    empty: bool,
}

fn value_of(value: &[i8], l: Lit) -> i8 {
    let v = value[l.var()];
    if l.is_negative() {
        -v
    } else {
        v
    }
}

impl Solver {
    fn new(vars: usize) -> Solver {
        Solver {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * vars],
            value: vec![0; vars],
            level: vec![0; vars],
            reason: vec![None; vars],
            trail: Vec::new(),
            levels: Vec::new(),
            head: 0,
            units: Vec::new(),
            empty: false,
        }
    }

    fn add_clause(&mut self, mut lits: Vec<Lit>) {
        lits.sort_by_key(|l| l.0);
        lits.dedup();
        if lits.windows(2).any(|w| w[0].var() == w[1].var()) {
            return;
        }
        match lits.len() {
            0 => self.empty = true,
            1 => self.units.push(lits[0]),
            _ => {
                self.attach(lits);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>) -> usize {
        let id = self.clauses.len();
        self.watches[lits[0].index()].push(id);
        self.watches[lits[1].index()].push(id);
        self.clauses.push(lits);
        id
    }

    fn assign(&mut self, l: Lit, reason: Option<usize>) {
        let v = l.var();
        self.value[v] = if l.is_negative() { -1 } else { 1 };
        self.level[v] = self.levels.len() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// The falsified clause on conflict.
    fn propagate(&mut self) -> Option<usize> {
        while self.head < self.trail.len() {
            let falsified = self.trail[self.head].negate();
            self.head += 1;
            let watching = std::mem::take(&mut self.watches[falsified.index()]);
            let mut keep = Vec::with_capacity(watching.len());
            let mut conflict = None;
            for (k, &id) in watching.iter().enumerate() {
                if conflict.is_some() {
                    keep.extend_from_slice(&watching[k..]);
                    break;
                }
                let clause = &mut self.clauses[id];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                if value_of(&self.value, clause[0]) == 1 {
                    keep.push(id);
                    continue;
                }
                let replacement =
                    (2..clause.len()).find(|&j| value_of(&self.value, clause[j]) != -1);
                if let Some(j) = replacement {
                    clause.swap(1, j);
                    let w = clause[1].index();
                    self.watches[w].push(id);
                    continue;
                }
                keep.push(id);
                let first = clause[0];
                match value_of(&self.value, first) {
                    0 => self.assign(first, Some(id)),
                    -1 => conflict = Some(id),
                    _ => {}
                }
            }
            self.watches[falsified.index()] = keep;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn backtrack(&mut self, level: usize) {
        if self.levels.len() <= level {
            return;
        }
        let len = self.levels[level];
        for l in self.trail.drain(len..) {
            self.value[l.var()] = 0;
            self.reason[l.var()] = None;
        }
        self.levels.truncate(level);
        self.head = len;
    }

    /// First-UIP learned clause, asserting literal first, and the level to
    /// return to.
    fn analyze(&self, conflict: usize) -> (Vec<Lit>, usize) {
        let current = self.levels.len() as u32;
        let mut seen = vec![false; self.value.len()];
        let mut learnt = vec![Lit(0)];
        let mut pending = 0;
        let mut clause = conflict;
        let mut implied: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            for &q in &self.clauses[clause] {
                if Some(q) == implied {
                    continue;
                }
                let v = q.var();
                if seen[v] || self.level[v] == 0 {
                    continue;
                }
                seen[v] = true;
                if self.level[v] == current {
                    pending += 1;
                } else {
                    learnt.push(q);
                }
            }
            loop {
                idx -= 1;
                if seen[self.trail[idx].var()] {
                    break;
                }
            }
            let p = self.trail[idx];
            pending -= 1;
            if pending == 0 {
                learnt[0] = p.negate();
                break;
            }
            implied = Some(p);
            clause = self.reason[p.var()].expect("implied literal has a reason");
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let (k, _) = learnt
                .iter()
                .enumerate()
                .skip(1)
                .max_by_key(|(_, l)| self.level[l.var()])
                .expect("non-empty");
            learnt.swap(1, k);
            back = self.level[learnt[1].var()] as usize;
        }
        (learnt, back)
    }

    /// A satisfying assignment as one bool per variable, or `None`.
    fn solve(&mut self, max_decisions: u64) -> Result<Option<Vec<bool>>, ReasonerError> {
        if self.empty {
            return Ok(None);
        }
        for l in std::mem::take(&mut self.units) {
            match value_of(&self.value, l) {
                0 => self.assign(l, None),
                -1 => return Ok(None),
                _ => {}
            }
        }
        let mut next = 0;
        let mut count = 0u64;
        loop {
            if let Some(conflict) = self.propagate() {
                if self.levels.is_empty() {
                    return Ok(None);
                }
                let (learnt, back) = self.analyze(conflict);
                self.backtrack(back);
                next = 0;
                let asserting = learnt[0];
                if learnt.len() == 1 {
                    self.assign(asserting, None);
                } else {
                    let id = self.attach(learnt);
                    self.assign(asserting, Some(id));
                }
                continue;
            }
            while next < self.value.len() && self.value[next] != 0 {
                next += 1;
            }
            if next == self.value.len() {
                return Ok(Some(self.value.iter().map(|&v| v == 1).collect()));
            }
            count += 1;
            if count > max_decisions {
                return Err(ReasonerError::SearchSpaceExceeded(format!(
                    "more than {max_decisions} decisions"
                )));
            }
            self.levels.push(self.trail.len());
            self.assign(Lit::positive(next as u32).negate(), None);
        }
    }
}
