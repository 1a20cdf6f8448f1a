//! Consistency, subsumption and instance checking for ALCQ with has-value
//! restrictions under the unique name assumption.
//!
//! Every query reduces to a consistency check of the ontology extended by
//! one assertion about a fresh individual. [`oracle_find_model`] is an
//! independent, bounded model finder used to cross-check the tableau.

mod model;
mod oracle;
mod tableau;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::translator::{Axiom, ClassExpr, NameKind};

pub use model::{check_model, Interpretation};
pub use oracle::{oracle_find_model, oracle_find_model_with, OracleLimits};
pub use tableau::TableauLimits;

/// Largest cardinality accepted in a number restriction.
pub const MAX_CARDINALITY: u32 = 100;

/// Name of the individual introduced by subsumption checks. It cannot clash
/// with a lexicon lemma.
const PROBE: &str = "_probe";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("unsupported construct: {0}")]
    UnsupportedConstruct(String),
    #[error("the ontology is inconsistent")]
    InconsistentOntology,
    #[error("search space exceeded: {0}")]
    SearchSpaceExceeded(String),
    #[error("interpretation does not cover {0}")]
    SignatureMismatch(String),
}

impl ReasonerError {
    pub fn code(&self) -> &'static str {
        match self {
            ReasonerError::UnsupportedConstruct(_) => "unsupported-construct",
            ReasonerError::InconsistentOntology => "inconsistent-ontology",
            ReasonerError::SearchSpaceExceeded(_) => "search-space-exceeded",
            ReasonerError::SignatureMismatch(_) => "signature-mismatch",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub classes: BTreeSet<String>,
    pub roles: BTreeSet<String>,
    pub individuals: BTreeSet<String>,
}

impl Signature {
    fn add(&mut self, kind: NameKind, name: &str) {
        let set = match kind {
            NameKind::Class => &mut self.classes,
            NameKind::Role => &mut self.roles,
            NameKind::Individual => &mut self.individuals,
        };
        if !set.contains(name) {
            set.insert(name.to_string());
        }
    }
}

/// A set of axioms. Duplicates coalesce.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Ontology {
    axioms: BTreeSet<Axiom>,
}

impl Ontology {
    pub fn new() -> Ontology {
        Ontology::default()
    }

    pub fn from_axioms(axioms: impl IntoIterator<Item = Axiom>) -> Ontology {
        Ontology {
            axioms: axioms.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, axiom: Axiom) -> bool {
        self.axioms.insert(axiom)
    }

    pub fn remove(&mut self, axiom: &Axiom) -> bool {
        self.axioms.remove(axiom)
    }

    pub fn contains(&self, axiom: &Axiom) -> bool {
        self.axioms.contains(axiom)
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter()
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// A copy with `extra` added.
    pub fn with(&self, extra: impl IntoIterator<Item = Axiom>) -> Ontology {
        let mut o = self.clone();
        o.axioms.extend(extra);
        o
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for a in &self.axioms {
            a.for_each_name(&mut |kind, name| sig.add(kind, name));
        }
        sig
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Consistency {
    /// Carries a finite model when one could be read off the completed tableau.
    Consistent(Option<Interpretation>),
    Inconsistent,
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent(_))
    }
}

pub fn is_consistent(o: &Ontology) -> Result<Consistency, ReasonerError> {
    is_consistent_with(o, &TableauLimits::default())
}

pub fn is_consistent_with(
    o: &Ontology,
    limits: &TableauLimits,
) -> Result<Consistency, ReasonerError> {
    check_fragment(o)?;
    Ok(match tableau::run(o, limits)? {
        Some(model) => Consistency::Consistent(Some(model)),
        None => Consistency::Inconsistent,
    })
}

fn check_fragment(o: &Ontology) -> Result<(), ReasonerError> {
    fn walk(c: &ClassExpr) -> Result<(), ReasonerError> {
        match c {
            ClassExpr::Atomic { .. } | ClassExpr::Top | ClassExpr::HasValue { .. } => Ok(()),
            ClassExpr::Not { expr } => walk(expr),
            ClassExpr::And { left, right } => walk(left).and(walk(right)),
            ClassExpr::Exists { filler, .. } | ClassExpr::Forall { filler, .. } => walk(filler),
            ClassExpr::AtLeast { n, filler, .. } | ClassExpr::AtMost { n, filler, .. } => {
                if *n > MAX_CARDINALITY {
                    return Err(ReasonerError::UnsupportedConstruct(format!(
                        "cardinality {n} above {MAX_CARDINALITY}"
                    )));
                }
                walk(filler)
            }
        }
    }
    for a in o.axioms() {
        match a {
            Axiom::SubClassOf { sub, sup } => {
                walk(sub)?;
                walk(sup)?;
            }
            Axiom::ClassAssertion { class, .. } => walk(class)?,
            Axiom::RoleAssertion { .. } => {}
        }
    }
    Ok(())
}

fn consistent(o: &Ontology) -> Result<bool, ReasonerError> {
    Ok(is_consistent(o)?.is_consistent())
}

fn require_consistent(o: &Ontology) -> Result<(), ReasonerError> {
    if consistent(o)? {
        Ok(())
    } else {
        Err(ReasonerError::InconsistentOntology)
    }
}

/// Whether every model of `o` satisfies `axiom`.
pub fn entails(o: &Ontology, axiom: &Axiom) -> Result<bool, ReasonerError> {
    let counter = match axiom {
        Axiom::SubClassOf { sub, sup } => Axiom::class_assertion(
            ClassExpr::and(sub.clone(), ClassExpr::not(sup.clone())),
            PROBE,
        ),
        Axiom::ClassAssertion { class, individual } => {
            Axiom::class_assertion(ClassExpr::not(class.clone()), individual)
        }
        Axiom::RoleAssertion {
            role,
            subject,
            object,
        } => Axiom::class_assertion(
            ClassExpr::not(ClassExpr::has_value(role, object)),
            subject,
        ),
    };
    Ok(!consistent(&o.with([counter]))?)
}

pub fn entails_subsumption(o: &Ontology, sub: &str, sup: &str) -> Result<bool, ReasonerError> {
    if sub == sup {
        return Ok(true);
    }
    entails(
        o,
        &Axiom::sub_class_of(ClassExpr::atomic(sub), ClassExpr::atomic(sup)),
    )
}

/// Named classes grouped by equivalence, with direct subsumption edges
/// between groups.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Hierarchy {
    pub groups: Vec<BTreeSet<String>>,
    /// `(sub, sup)` indices into `groups`.
    pub edges: BTreeSet<(usize, usize)>,
}

impl Hierarchy {
    pub fn group_of(&self, class: &str) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(class))
    }
}

pub fn classify(o: &Ontology) -> Result<Hierarchy, ReasonerError> {
    require_consistent(o)?;
    let classes: Vec<String> = o.signature().classes.into_iter().collect();
    let n = classes.len();
    let mut sub = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            sub[a][b] = a == b || entails_subsumption(o, &classes[a], &classes[b])?;
        }
    }
    let mut group_of: Vec<Option<usize>> = vec![None; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if group_of[a].is_some() {
            continue;
        }
        let members: Vec<usize> = (a..n).filter(|&b| sub[a][b] && sub[b][a]).collect();
        for &m in &members {
            group_of[m] = Some(groups.len());
        }
        groups.push(members);
    }
    let rep: Vec<usize> = groups.iter().map(|g| g[0]).collect();
    let above = |g: usize, h: usize| g != h && sub[rep[g]][rep[h]];
    let mut edges = BTreeSet::new();
    for g in 0..groups.len() {
        for h in 0..groups.len() {
            if above(g, h) && !(0..groups.len()).any(|k| above(g, k) && above(k, h)) {
                edges.insert((g, h));
            }
        }
    }
    Ok(Hierarchy {
        groups: groups
            .into_iter()
            .map(|g| g.into_iter().map(|i| classes[i].clone()).collect())
            .collect(),
        edges,
    })
}

/// Named individuals certainly belonging to `c`.
pub fn retrieve(o: &Ontology, c: &ClassExpr) -> Result<BTreeSet<String>, ReasonerError> {
    require_consistent(o)?;
    let mut candidates = o.signature().individuals;
    c.for_each_name(&mut |kind, name| {
        if kind == NameKind::Individual {
            candidates.insert(name.to_string());
        }
    });
    let mut out = BTreeSet::new();
    for i in candidates {
        if entails(o, &Axiom::class_assertion(c.clone(), &i))? {
            out.insert(i);
        }
    }
    Ok(out)
}

/// Named classes `individual` certainly belongs to.
pub fn memberships(o: &Ontology, individual: &str) -> Result<BTreeSet<String>, ReasonerError> {
    require_consistent(o)?;
    let mut out = BTreeSet::new();
    for class in o.signature().classes {
        if entails(
            o,
            &Axiom::class_assertion(ClassExpr::atomic(&class), individual),
        )? {
            out.insert(class);
        }
    }
    Ok(out)
}

/// Memberships of every named individual of `o`.
pub fn all_memberships(o: &Ontology) -> Result<BTreeMap<String, BTreeSet<String>>, ReasonerError> {
    require_consistent(o)?;
    let mut out = BTreeMap::new();
    for i in o.signature().individuals {
        let classes = memberships(o, &i)?;
        out.insert(i, classes);
    }
    Ok(out)
}
