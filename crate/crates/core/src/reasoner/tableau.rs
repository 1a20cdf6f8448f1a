//! Completion-graph tableau with equality blocking.
//!
//! Concepts are hash-consed into a table that is closed under negation
//! before the search starts, so clash detection is a set lookup. Each
//! nondeterministic choice clones the graph onto an explicit stack.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::{Interpretation, Ontology, ReasonerError};
use crate::translator::{Axiom, ClassExpr};

type Cid = usize;
type Sym = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableauLimits {
    /// Total rule sweeps across all branches.
    pub max_steps: u64,
    pub max_nodes: usize,
}

impl Default for TableauLimits {
    fn default() -> TableauLimits {
        TableauLimits {
            max_steps: 2_000_000,
            max_nodes: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Concept {
    Top,
    Bottom,
    Atom(Sym),
    NegAtom(Sym),
    Nominal(Sym),
    NotNominal(Sym),
    And(Vec<Cid>),
    Or(Vec<Cid>),
    Exists(Sym, Cid),
    Forall(Sym, Cid),
    AtLeast(u32, Sym, Cid),
    AtMost(u32, Sym, Cid),
    HasValue(Sym, Sym),
}

#[derive(Default)]
struct Names {
    ids: HashMap<String, Sym>,
    names: Vec<String>,
}

impl Names {
    fn id(&mut self, name: &str) -> Sym {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        self.ids.insert(name.to_string(), self.names.len());
        self.names.push(name.to_string());
        self.names.len() - 1
    }
}

#[derive(Default)]
struct Concepts {
    list: Vec<Concept>,
    index: HashMap<Concept, Cid>,
    neg: Vec<Option<Cid>>,
}

impl Concepts {
    fn intern(&mut self, c: Concept) -> Cid {
        let c = match c {
            Concept::Exists(r, f) => match self.list[f] {
                Concept::Nominal(i) => Concept::HasValue(r, i),
                Concept::Bottom => Concept::Bottom,
                _ => Concept::Exists(r, f),
            },
            Concept::AtLeast(0, _, _) => Concept::Top,
            Concept::AtLeast(_, _, f) if self.list[f] == Concept::Bottom => Concept::Bottom,
            Concept::And(cs) if cs.is_empty() => Concept::Top,
            Concept::Or(cs) if cs.is_empty() => Concept::Bottom,
            Concept::And(cs) | Concept::Or(cs) if cs.len() == 1 => return cs[0],
            other => other,
        };
        if let Some(&id) = self.index.get(&c) {
            return id;
        }
        self.list.push(c.clone());
        self.neg.push(None);
        self.index.insert(c, self.list.len() - 1);
        self.list.len() - 1
    }

    fn negate(&mut self, c: Cid) -> Cid {
        if let Some(n) = self.neg[c] {
            return n;
        }
        let n = match self.list[c].clone() {
            Concept::Top => Concept::Bottom,
            Concept::Bottom => Concept::Top,
            Concept::Atom(a) => Concept::NegAtom(a),
            Concept::NegAtom(a) => Concept::Atom(a),
            Concept::Nominal(i) => Concept::NotNominal(i),
            Concept::NotNominal(i) => Concept::Nominal(i),
            Concept::And(cs) => Concept::Or(cs.into_iter().map(|d| self.negate(d)).collect()),
            Concept::Or(cs) => Concept::And(cs.into_iter().map(|d| self.negate(d)).collect()),
            Concept::Exists(r, f) => Concept::Forall(r, self.negate(f)),
            Concept::Forall(r, f) => Concept::Exists(r, self.negate(f)),
            Concept::AtLeast(n, r, f) => Concept::AtMost(n - 1, r, f),
            Concept::AtMost(n, r, f) => Concept::AtLeast(n + 1, r, f),
            Concept::HasValue(r, i) => {
                let not_i = self.intern(Concept::NotNominal(i));
                Concept::Forall(r, not_i)
            }
        };
        let id = self.intern(n);
        self.neg[c] = Some(id);
        self.neg[id].get_or_insert(c);
        id
    }

    fn close_under_negation(&mut self) {
        let mut i = 0;
        while i < self.list.len() {
            self.negate(i);
            i += 1;
        }
    }
}

/// Branch points a fact depends on, as sorted levels.
type Deps = Vec<u32>;

fn union(a: &[u32], b: &[u32]) -> Deps {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

#[derive(Debug, Clone)]
struct Edge {
    role: Sym,
    to: usize,
    deps: Deps,
}

#[derive(Debug, Clone)]
struct Node {
    label: BTreeMap<Cid, Deps>,
    name: Option<Sym>,
    parent: Option<usize>,
    alive: bool,
    edges: Vec<Edge>,
}

#[derive(Debug, Clone)]
struct Graph {
    nodes: Vec<Node>,
    distinct: HashMap<(usize, usize), Deps>,
    at_least_done: HashSet<(usize, Cid)>,
    clash: Option<Deps>,
}

impl Graph {
    fn successors(&self, x: usize, role: Sym) -> Vec<(usize, Deps)> {
        self.nodes[x]
            .edges
            .iter()
            .filter(|e| e.role == role)
            .map(|e| (e.to, e.deps.clone()))
            .collect()
    }

    fn has(&self, x: usize, c: Cid) -> bool {
        self.nodes[x].label.contains_key(&c)
    }

    fn add_edge(&mut self, x: usize, role: Sym, to: usize, deps: Deps) -> bool {
        if self.nodes[x].edges.iter().any(|e| e.role == role && e.to == to) {
            return false;
        }
        self.nodes[x].edges.push(Edge { role, to, deps });
        true
    }

    /// Dependencies of `a ≠ b`, if known.
    fn distinct_deps(&self, a: usize, b: usize) -> Option<Deps> {
        if self.nodes[a].name.is_some() && self.nodes[b].name.is_some() {
            return Some(Vec::new());
        }
        self.distinct.get(&(a.min(b), a.max(b))).cloned()
    }

    /// Blocking status of every node. An anonymous node is directly
    /// blocked by the earliest unblocked anonymous node with an identical
    /// label, and indirectly blocked when its parent is blocked. Without
    /// inverse roles a node's obligations depend only on its own label, so
    /// the blocker need not be an ancestor.
    fn blocking(&self) -> Vec<Block> {
        let mut status = vec![Block::Free; self.nodes.len()];
        let mut first: HashMap<Vec<Cid>, usize> = HashMap::new();
        for (x, node) in self.nodes.iter().enumerate() {
            if !node.alive || node.name.is_some() {
                continue;
            }
            let key: Vec<Cid> = node.label.keys().copied().collect();
            if node.parent.is_some_and(|p| status[p] != Block::Free) {
                status[x] = Block::Indirect;
            } else if let Some(&b) = first.get(&key) {
                status[x] = Block::By(b);
            } else {
                first.insert(key, x);
            }
        }
        status
    }

    fn prune(&mut self, x: usize) {
        self.nodes[x].alive = false;
        let edges = std::mem::take(&mut self.nodes[x].edges);
        for e in edges {
            let y = e.to;
            if self.nodes[y].alive && self.nodes[y].name.is_none() && self.nodes[y].parent == Some(x)
            {
                self.prune(y);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Block {
    Free,
    By(usize),
    Indirect,
}

#[derive(Debug, Clone, Copy)]
enum Alt {
    Add(usize, Cid),
    Merge(usize, usize),
}

enum Outcome {
    Complete,
    Clash(Deps),
    /// Alternatives, and the dependencies of the fact that forced the choice.
    Branch(Vec<Alt>, Deps),
}

struct BranchPoint {
    graph: Graph,
    alts: Vec<Alt>,
    next: usize,
    base: Deps,
    /// Union of the clash dependencies of the alternatives tried so far,
    /// without this branch point's own level.
    failed: Deps,
}

struct Tableau {
    concepts: Concepts,
    classes: Names,
    roles: Names,
    individuals: Names,
    /// Concepts every node carries.
    universal: Vec<Cid>,
    /// Lazily unfolded inclusions `A ⊑ C`, keyed by `A`.
    unfold: HashMap<Sym, Vec<Cid>>,
    top: Cid,
    limits: TableauLimits,
    steps: u64,
}

impl Tableau {
    fn concept(&mut self, e: &ClassExpr) -> Cid {
        let c = match e {
            ClassExpr::Atomic { class } => Concept::Atom(self.classes.id(class)),
            ClassExpr::Top => Concept::Top,
            ClassExpr::Not { expr } => {
                let inner = self.concept(expr);
                return self.concepts.negate(inner);
            }
            ClassExpr::And { left, right } => {
                Concept::And(vec![self.concept(left), self.concept(right)])
            }
            ClassExpr::Exists { role, filler } => {
                Concept::Exists(self.roles.id(role), self.concept(filler))
            }
            ClassExpr::Forall { role, filler } => {
                Concept::Forall(self.roles.id(role), self.concept(filler))
            }
            ClassExpr::AtLeast { n, role, filler } => {
                Concept::AtLeast(*n, self.roles.id(role), self.concept(filler))
            }
            ClassExpr::AtMost { n, role, filler } => {
                Concept::AtMost(*n, self.roles.id(role), self.concept(filler))
            }
            ClassExpr::HasValue { role, individual } => {
                Concept::HasValue(self.roles.id(role), self.individuals.id(individual))
            }
        };
        self.concepts.intern(c)
    }

    fn conjuncts(e: &ClassExpr, out: &mut Vec<ClassExpr>) {
        match e {
            ClassExpr::And { left, right } => {
                Self::conjuncts(left, out);
                Self::conjuncts(right, out);
            }
            other => out.push(other.clone()),
        }
    }

    /// Turns `A and R ⊑ D` into the lazy rule `A ⇒ not R or D`; anything
    /// without an atomic conjunct becomes a universal disjunction.
    fn add_inclusion(&mut self, sub: &ClassExpr, sup: &ClassExpr) {
        let mut parts = Vec::new();
        Self::conjuncts(sub, &mut parts);
        let sup_id = self.concept(sup);
        if let Some(pos) = parts.iter().position(|p| p.as_atomic().is_some()) {
            let key = parts.remove(pos);
            let key = self.classes.id(key.as_atomic().unwrap_or_default());
            let mut disjuncts = Vec::new();
            for p in &parts {
                let c = self.concept(p);
                disjuncts.push(self.concepts.negate(c));
            }
            disjuncts.push(sup_id);
            let rule = self.concepts.intern(Concept::Or(disjuncts));
            self.unfold.entry(key).or_default().push(rule);
        } else {
            let sub_id = self.concept(sub);
            let not_sub = self.concepts.negate(sub_id);
            let c = self.concepts.intern(Concept::Or(vec![not_sub, sup_id]));
            self.universal.push(c);
        }
    }

    /// Dependencies of the clash that adding `c` to `x` would cause.
    fn clash_with(&self, g: &Graph, x: usize, c: Cid) -> Option<Deps> {
        let node = &g.nodes[x];
        match self.concepts.list[c] {
            Concept::Bottom => return Some(Vec::new()),
            Concept::NotNominal(i) if node.name == Some(i) => return Some(Vec::new()),
            Concept::Nominal(i) if node.name.is_some() && node.name != Some(i) => {
                return Some(Vec::new())
            }
            _ => {}
        }
        let n = self.concepts.neg[c]?;
        node.label.get(&n).cloned()
    }

    fn add(&self, g: &mut Graph, x: usize, c: Cid, deps: Deps) -> bool {
        if g.has(x, c) {
            return false;
        }
        if g.clash.is_none() {
            if let Some(other) = self.clash_with(g, x, c) {
                g.clash = Some(union(&deps, &other));
            }
        }
        g.nodes[x].label.insert(c, deps);
        true
    }

    fn new_node(&self, g: &mut Graph, parent: Option<usize>, name: Option<Sym>, deps: &Deps) -> usize {
        g.nodes.push(Node {
            label: BTreeMap::new(),
            name,
            parent,
            alive: true,
            edges: Vec::new(),
        });
        let x = g.nodes.len() - 1;
        g.nodes[x].label.insert(self.top, Vec::new());
        for &c in &self.universal {
            self.add(g, x, c, deps.clone());
        }
        x
    }

    fn label_of(g: &Graph, x: usize) -> Vec<(Cid, Deps)> {
        g.nodes[x]
            .label
            .iter()
            .map(|(&c, d)| (c, d.clone()))
            .collect()
    }

    fn alive(g: &Graph) -> impl Iterator<Item = usize> + '_ {
        (0..g.nodes.len()).filter(|&x| g.nodes[x].alive)
    }

    /// And, only, and lazy unfolding.
    fn propagate(&self, g: &mut Graph) -> bool {
        let mut changed = false;
        for x in Self::alive(g).collect::<Vec<_>>() {
            for (c, dc) in Self::label_of(g, x) {
                match &self.concepts.list[c] {
                    Concept::And(cs) => {
                        for &d in cs {
                            changed |= self.add(g, x, d, dc.clone());
                        }
                    }
                    Concept::Forall(r, d) => {
                        for (y, de) in g.successors(x, *r) {
                            changed |= self.add(g, y, *d, union(&dc, &de));
                        }
                    }
                    Concept::Atom(a) => {
                        if let Some(rules) = self.unfold.get(a) {
                            for &d in rules {
                                changed |= self.add(g, x, d, dc.clone());
                            }
                        }
                    }
                    _ => {}
                }
                if g.clash.is_some() {
                    return true;
                }
            }
        }
        changed
    }

    /// Has-value edges and nominal merges.
    fn nominals(&self, g: &mut Graph) -> bool {
        let mut changed = false;
        for x in Self::alive(g).collect::<Vec<_>>() {
            for (c, dc) in Self::label_of(g, x) {
                match self.concepts.list[c] {
                    Concept::HasValue(r, i) => changed |= g.add_edge(x, r, i, dc),
                    Concept::Nominal(i) if g.nodes[x].name.is_none() => {
                        self.merge(g, x, i, &dc);
                        return true;
                    }
                    _ => {}
                }
            }
        }
        changed
    }

    /// Some and at-least on unblocked nodes.
    fn generate(&self, g: &mut Graph) -> Result<bool, ReasonerError> {
        let mut changed = false;
        let existing = g.nodes.len();
        let status = g.blocking();
        for x in 0..existing {
            if !g.nodes[x].alive || status[x] != Block::Free {
                continue;
            }
            for (c, dc) in Self::label_of(g, x) {
                match self.concepts.list[c] {
                    Concept::Exists(r, d) => {
                        if g.successors(x, r).iter().any(|&(y, _)| g.has(y, d)) {
                            continue;
                        }
                        let y = self.new_node(g, Some(x), None, &dc);
                        self.add(g, y, d, dc.clone());
                        g.add_edge(x, r, y, dc);
                        changed = true;
                    }
                    Concept::AtLeast(n, r, d) => {
                        if !g.at_least_done.insert((x, c)) {
                            continue;
                        }
                        let mut fresh = Vec::new();
                        for _ in 0..n {
                            let y = self.new_node(g, Some(x), None, &dc);
                            self.add(g, y, d, dc.clone());
                            g.add_edge(x, r, y, dc.clone());
                            for &z in &fresh {
                                g.distinct.insert((z, y), dc.clone());
                            }
                            fresh.push(y);
                        }
                        changed = true;
                    }
                    _ => {}
                }
            }
            if g.nodes.len() > self.limits.max_nodes {
                return Err(ReasonerError::SearchSpaceExceeded(format!(
                    "more than {} tableau nodes",
                    self.limits.max_nodes
                )));
            }
        }
        Ok(changed)
    }

    fn choose(&self, g: &Graph) -> Option<Outcome> {
        for x in Self::alive(g) {
            for &c in g.nodes[x].label.keys() {
                let Concept::AtMost(_, r, d) = self.concepts.list[c] else {
                    continue;
                };
                if d == self.top {
                    continue;
                }
                let nd = self.concepts.neg[d].expect("closed under negation");
                for (y, _) in g.successors(x, r) {
                    if !g.has(y, d) && !g.has(y, nd) {
                        return Some(Outcome::Branch(
                            vec![Alt::Add(y, nd), Alt::Add(y, d)],
                            Vec::new(),
                        ));
                    }
                }
            }
        }
        None
    }

    fn at_most(&self, g: &Graph) -> Option<Outcome> {
        for x in Self::alive(g) {
            for (&c, dc) in &g.nodes[x].label {
                let Concept::AtMost(n, r, d) = self.concepts.list[c] else {
                    continue;
                };
                let mut base = dc.clone();
                let mut ys = Vec::new();
                for (y, de) in g.successors(x, r) {
                    if let Some(dd) = g.nodes[y].label.get(&d) {
                        base = union(&union(&base, &de), dd);
                        ys.push(y);
                    }
                }
                if ys.len() <= n as usize {
                    continue;
                }
                let mut alts = Vec::new();
                for (k, &a) in ys.iter().enumerate() {
                    for &b in &ys[k + 1..] {
                        match g.distinct_deps(a, b) {
                            Some(dd) => base = union(&base, &dd),
                            None => alts.push(Alt::Merge(a, b)),
                        }
                    }
                }
                return Some(if alts.is_empty() {
                    Outcome::Clash(base)
                } else {
                    Outcome::Branch(alts, base)
                });
            }
        }
        None
    }

    /// Or. Disjuncts that would clash at once are skipped, and a
    /// disjunction with one viable disjunct is applied in place.
    fn disjunction(&self, g: &mut Graph) -> Option<Outcome> {
        for x in Self::alive(g).collect::<Vec<_>>() {
            for (c, dc) in Self::label_of(g, x) {
                let Concept::Or(ds) = &self.concepts.list[c] else {
                    continue;
                };
                if ds.iter().any(|&d| g.has(x, d)) {
                    continue;
                }
                let mut base = dc;
                let mut viable = Vec::new();
                for &d in ds {
                    match self.clash_with(g, x, d) {
                        Some(dd) => base = union(&base, &dd),
                        None => viable.push(d),
                    }
                }
                return Some(match viable.len() {
                    0 => Outcome::Clash(base),
                    1 => {
                        self.add(g, x, viable[0], base);
                        Outcome::Branch(Vec::new(), Vec::new())
                    }
                    _ => Outcome::Branch(viable.into_iter().map(|d| Alt::Add(x, d)).collect(), base),
                });
            }
        }
        None
    }

    /// Merges `a` and `b`, keeping the named one if there is one.
    fn merge(&self, g: &mut Graph, a: usize, b: usize, deps: &Deps) {
        let (from, into) = if g.nodes[a].name.is_some() { (b, a) } else { (a, b) };
        for (c, dc) in Self::label_of(g, from) {
            self.add(g, into, c, union(&dc, deps));
        }
        for w in 0..g.nodes.len() {
            if !g.nodes[w].alive || w == from {
                continue;
            }
            let mut edges: Vec<Edge> = Vec::new();
            for e in &g.nodes[w].edges {
                let e = if e.to == from {
                    Edge {
                        role: e.role,
                        to: into,
                        deps: union(&e.deps, deps),
                    }
                } else {
                    e.clone()
                };
                if !edges.iter().any(|f| f.role == e.role && f.to == e.to) {
                    edges.push(e);
                }
            }
            g.nodes[w].edges = edges;
        }
        let pairs: Vec<((usize, usize), Deps)> = g
            .distinct
            .iter()
            .filter(|(&(p, q), _)| p == from || q == from)
            .map(|(&k, d)| (k, d.clone()))
            .collect();
        for ((p, q), dd) in pairs {
            g.distinct.remove(&(p, q));
            let other = if p == from { q } else { p };
            let dd = union(&dd, deps);
            if other == into {
                if g.clash.is_none() {
                    g.clash = Some(dd);
                }
            } else {
                g.distinct.entry((other.min(into), other.max(into))).or_insert(dd);
            }
        }
        g.prune(from);
    }

    fn apply(&self, g: &mut Graph, alt: Alt, deps: &Deps) {
        match alt {
            Alt::Add(x, c) => {
                self.add(g, x, c, deps.clone());
            }
            Alt::Merge(a, b) => self.merge(g, a, b, deps),
        }
    }

    fn expand(&mut self, g: &mut Graph) -> Result<Outcome, ReasonerError> {
        loop {
            self.steps += 1;
            if self.steps > self.limits.max_steps {
                return Err(ReasonerError::SearchSpaceExceeded(format!(
                    "more than {} tableau steps",
                    self.limits.max_steps
                )));
            }
            if let Some(deps) = &g.clash {
                return Ok(Outcome::Clash(deps.clone()));
            }
            if self.propagate(g) || self.nominals(g) {
                continue;
            }
            match self.disjunction(g) {
                Some(Outcome::Branch(alts, _)) if alts.is_empty() => continue,
                Some(outcome) => return Ok(outcome),
                None => {}
            }
            if let Some(outcome) = self.choose(g) {
                return Ok(outcome);
            }
            if let Some(outcome) = self.at_most(g) {
                return Ok(outcome);
            }
            if !self.generate(g)? {
                return Ok(Outcome::Complete);
            }
        }
    }

    fn initial(&self, o: &Ontology, assertions: &[(usize, Cid)]) -> Graph {
        let mut g = Graph {
            nodes: Vec::new(),
            distinct: HashMap::new(),
            at_least_done: HashSet::new(),
            clash: None,
        };
        for i in 0..self.individuals.names.len() {
            self.new_node(&mut g, None, Some(i), &Vec::new());
        }
        if g.nodes.is_empty() {
            self.new_node(&mut g, None, None, &Vec::new());
        }
        for &(x, c) in assertions {
            self.add(&mut g, x, c, Vec::new());
        }
        for a in o.axioms() {
            if let Axiom::RoleAssertion {
                role,
                subject,
                object,
            } = a
            {
                let (r, s, t) = (
                    self.roles.ids[role],
                    self.individuals.ids[subject],
                    self.individuals.ids[object],
                );
                g.add_edge(s, r, t, Vec::new());
            }
        }
        g
    }

    /// Maps each distinct successor of an unblocked node `x` to a target
    /// `(node, copy)`. A blocked successor is replaced by its blocker, and
    /// successors that would land on the same element get distinct copies.
    fn targets(g: &Graph, status: &[Block], x: usize, copy: usize) -> Vec<(usize, usize, usize)> {
        let mut seen: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut taken: HashSet<(usize, usize)> = HashSet::new();
        for e in &g.nodes[x].edges {
            if status[e.to] == Block::Free {
                let k = if g.nodes[e.to].name.is_some() { 0 } else { copy };
                seen.insert(e.to, (e.to, k));
                taken.insert((e.to, k));
            }
        }
        let mut out = Vec::new();
        for e in &g.nodes[x].edges {
            let (node, k) = *seen.entry(e.to).or_insert_with(|| {
                let Block::By(b) = status[e.to] else {
                    unreachable!("children of unblocked nodes are never indirectly blocked")
                };
                let k = (0..).find(|&k| !taken.contains(&(b, k))).unwrap_or(0);
                taken.insert((b, k));
                (b, k)
            });
            out.push((e.role, node, k));
        }
        out
    }

    /// Reads a finite model off a complete, clash-free graph. Every unblocked
    /// anonymous node contributes enough copies that no two successors of
    /// one node share an element, so number restrictions keep their counts.
    fn extract(&self, g: &Graph) -> Interpretation {
        let status = g.blocking();
        let kept: Vec<usize> = Self::alive(g).filter(|&x| status[x] == Block::Free).collect();
        let mut copies = 1;
        for &x in &kept {
            let mut per_blocker: HashMap<usize, usize> = HashMap::new();
            let mut distinct: BTreeSet<usize> = BTreeSet::new();
            for e in &g.nodes[x].edges {
                let y = e.to;
                if !distinct.insert(y) {
                    continue;
                }
                match status[y] {
                    Block::By(b) => *per_blocker.entry(b).or_insert(0) += 1,
                    Block::Free if g.nodes[y].name.is_none() => {
                        *per_blocker.entry(y).or_insert(0) += 1
                    }
                    _ => {}
                }
            }
            copies = per_blocker.values().copied().fold(copies, usize::max);
        }
        let mut base = vec![usize::MAX; g.nodes.len()];
        let mut size = 0;
        for &x in &kept {
            base[x] = size;
            size += if g.nodes[x].name.is_some() { 1 } else { copies };
        }
        let mut classes: BTreeMap<String, BTreeSet<usize>> = self
            .classes
            .names
            .iter()
            .map(|c| (c.clone(), BTreeSet::new()))
            .collect();
        let mut roles: BTreeMap<String, BTreeSet<(usize, usize)>> = self
            .roles
            .names
            .iter()
            .map(|r| (r.clone(), BTreeSet::new()))
            .collect();
        for &x in &kept {
            let n = if g.nodes[x].name.is_some() { 1 } else { copies };
            for copy in 0..n {
                let ex = base[x] + copy;
                for &c in g.nodes[x].label.keys() {
                    if let Concept::Atom(a) = self.concepts.list[c] {
                        classes.get_mut(&self.classes.names[a]).map(|e| e.insert(ex));
                    }
                }
                for (r, node, k) in Self::targets(g, &status, x, copy) {
                    roles
                        .get_mut(&self.roles.names[r])
                        .map(|e| e.insert((ex, base[node] + k)));
                }
            }
        }
        let individuals = self
            .individuals
            .names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), base[i]))
            .collect();
        Interpretation {
            domain_size: size,
            classes,
            roles,
            individuals,
        }
    }
}

/// `Some(model)` if `o` is consistent, `None` otherwise.
pub(super) fn run(
    o: &Ontology,
    limits: &TableauLimits,
) -> Result<Option<Interpretation>, ReasonerError> {
    let mut t = Tableau {
        concepts: Concepts::default(),
        classes: Names::default(),
        roles: Names::default(),
        individuals: Names::default(),
        universal: Vec::new(),
        unfold: HashMap::new(),
        top: 0,
        limits: *limits,
        steps: 0,
    };
    t.top = t.concepts.intern(Concept::Top);
    let sig = o.signature();
    for c in &sig.classes {
        t.classes.id(c);
    }
    for r in &sig.roles {
        t.roles.id(r);
    }
    for i in &sig.individuals {
        t.individuals.id(i);
    }
    let mut assertions = Vec::new();
    for a in o.axioms() {
        match a {
            Axiom::SubClassOf { sub, sup } => t.add_inclusion(sub, sup),
            Axiom::ClassAssertion { class, individual } => {
                let c = t.concept(class);
                assertions.push((t.individuals.ids[individual], c));
            }
            Axiom::RoleAssertion { .. } => {}
        }
    }
    t.concepts.close_under_negation();

    // Branch point `k` on the stack has level `k + 1`; a fact depending on
    // it carries that level. A clash returns to the deepest level it
    // depends on, skipping choices that played no part.
    let mut stack: Vec<BranchPoint> = Vec::new();
    let mut g = t.initial(o, &assertions);
    loop {
        let mut clash = match t.expand(&mut g)? {
            Outcome::Complete => return Ok(Some(t.extract(&g))),
            Outcome::Clash(deps) => deps,
            Outcome::Branch(alts, base) => {
                stack.push(BranchPoint {
                    graph: g,
                    alts,
                    next: 0,
                    base,
                    failed: Vec::new(),
                });
                g = next_alternative(&t, &mut stack);
                continue;
            }
        };
        loop {
            let Some(&deepest) = clash.last() else {
                return Ok(None);
            };
            stack.truncate(deepest as usize);
            let top = stack.last_mut().expect("clash levels refer to live branch points");
            let without: Deps = clash.iter().copied().filter(|&l| l != deepest).collect();
            top.failed = union(&top.failed, &without);
            if top.next < top.alts.len() {
                g = next_alternative(&t, &mut stack);
                break;
            }
            clash = union(&top.failed, &top.base);
            stack.pop();
        }
    }
}

fn next_alternative(t: &Tableau, stack: &mut [BranchPoint]) -> Graph {
    let level = stack.len() as u32;
    let top = stack.last_mut().expect("non-empty");
    let alt = top.alts[top.next];
    top.next += 1;
    let mut g = top.graph.clone();
    let deps = union(&top.base, &[level]);
    t.apply(&mut g, alt, &deps);
    g
}
