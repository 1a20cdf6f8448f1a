use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{Ontology, ReasonerError};
use crate::translator::{Axiom, ClassExpr};

/// A finite interpretation. Elements are `0..domain_size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interpretation {
    pub domain_size: usize,
    pub classes: BTreeMap<String, BTreeSet<usize>>,
    pub roles: BTreeMap<String, BTreeSet<(usize, usize)>>,
    pub individuals: BTreeMap<String, usize>,
}

impl Interpretation {
    fn class(&self, name: &str) -> Result<&BTreeSet<usize>, ReasonerError> {
        self.classes
            .get(name)
            .ok_or_else(|| ReasonerError::SignatureMismatch(format!("class `{name}`")))
    }

    fn role(&self, name: &str) -> Result<&BTreeSet<(usize, usize)>, ReasonerError> {
        self.roles
            .get(name)
            .ok_or_else(|| ReasonerError::SignatureMismatch(format!("role `{name}`")))
    }

    fn individual(&self, name: &str) -> Result<usize, ReasonerError> {
        self.individuals
            .get(name)
            .copied()
            .ok_or_else(|| ReasonerError::SignatureMismatch(format!("individual `{name}`")))
    }

    fn successors(&self, role: &str, x: usize) -> Result<Vec<usize>, ReasonerError> {
        Ok(self
            .role(role)?
            .range((x, 0)..=(x, usize::MAX))
            .map(|&(_, y)| y)
            .collect())
    }

    /// Whether element `x` belongs to `c`.
    pub fn satisfies(&self, x: usize, c: &ClassExpr) -> Result<bool, ReasonerError> {
        Ok(match c {
            ClassExpr::Atomic { class } => self.class(class)?.contains(&x),
            ClassExpr::Top => true,
            ClassExpr::Not { expr } => !self.satisfies(x, expr)?,
            ClassExpr::And { left, right } => self.satisfies(x, left)? && self.satisfies(x, right)?,
            ClassExpr::Exists { role, filler } => {
                let mut found = false;
                for y in self.successors(role, x)? {
                    if self.satisfies(y, filler)? {
                        found = true;
                        break;
                    }
                }
                found
            }
            ClassExpr::Forall { role, filler } => {
                let mut all = true;
                for y in self.successors(role, x)? {
                    if !self.satisfies(y, filler)? {
                        all = false;
                        break;
                    }
                }
                all
            }
            ClassExpr::AtLeast { n, role, filler } => self.count(x, role, filler)? >= *n as usize,
            ClassExpr::AtMost { n, role, filler } => self.count(x, role, filler)? <= *n as usize,
            ClassExpr::HasValue { role, individual } => {
                let target = self.individual(individual)?;
                self.role(role)?.contains(&(x, target))
            }
        })
    }

    fn count(&self, x: usize, role: &str, filler: &ClassExpr) -> Result<usize, ReasonerError> {
        let mut n = 0;
        for y in self.successors(role, x)? {
            if self.satisfies(y, filler)? {
                n += 1;
            }
        }
        Ok(n)
    }

    pub fn satisfies_axiom(&self, axiom: &Axiom) -> Result<bool, ReasonerError> {
        match axiom {
            Axiom::SubClassOf { sub, sup } => {
                for x in 0..self.domain_size {
                    if self.satisfies(x, sub)? && !self.satisfies(x, sup)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Axiom::ClassAssertion { class, individual } => {
                self.satisfies(self.individual(individual)?, class)
            }
            Axiom::RoleAssertion {
                role,
                subject,
                object,
            } => {
                let pair = (self.individual(subject)?, self.individual(object)?);
                Ok(self.role(role)?.contains(&pair))
            }
        }
    }

    fn well_formed(&self) -> bool {
        let names: BTreeSet<usize> = self.individuals.values().copied().collect();
        self.domain_size > 0
            && names.len() == self.individuals.len()
            && names.iter().all(|&e| e < self.domain_size)
            && self
                .classes
                .values()
                .all(|ext| ext.iter().all(|&e| e < self.domain_size))
            && self
                .roles
                .values()
                .all(|ext| ext.iter().all(|&(a, b)| a < self.domain_size && b < self.domain_size))
    }
}

/// Evaluates every axiom of `ontology` directly in `interpretation`.
/// Distinct names must denote distinct elements.
pub fn check_model(
    interpretation: &Interpretation,
    ontology: &Ontology,
) -> Result<bool, ReasonerError> {
    let sig = ontology.signature();
    for c in &sig.classes {
        interpretation.class(c)?;
    }
    for r in &sig.roles {
        interpretation.role(r)?;
    }
    for i in &sig.individuals {
        interpretation.individual(i)?;
    }
    if !interpretation.well_formed() {
        return Ok(false);
    }
    for axiom in ontology.axioms() {
        if !interpretation.satisfies_axiom(axiom)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_point(ontology: &Ontology) -> Interpretation {
        let sig = ontology.signature();
        Interpretation {
            domain_size: 1,
            classes: sig.classes.iter().map(|c| (c.clone(), BTreeSet::new())).collect(),
            roles: sig.roles.iter().map(|r| (r.clone(), BTreeSet::new())).collect(),
            individuals: sig.individuals.iter().map(|i| (i.clone(), 0)).collect(),
        }
    }

    #[test]
    fn one_point_model_fails_at_least_two() {
        let o = Ontology::from_axioms([Axiom::class_assertion(
            ClassExpr::at_least(2, "borders", ClassExpr::atomic("country")),
            "a",
        )]);
        let mut i = one_point(&o);
        assert!(!check_model(&i, &o).unwrap());
        i.classes.get_mut("country").unwrap().insert(0);
        i.roles.get_mut("borders").unwrap().insert((0, 0));
        assert!(!check_model(&i, &o).unwrap());
    }

    #[test]
    fn empty_extensions_satisfy_inclusions() {
        let o = Ontology::from_axioms([Axiom::sub_class_of(
            ClassExpr::atomic("a"),
            ClassExpr::atomic("b"),
        )]);
        assert!(check_model(&one_point(&o), &o).unwrap());
    }

    #[test]
    fn missing_symbol_is_a_mismatch() {
        let o = Ontology::from_axioms([Axiom::sub_class_of(
            ClassExpr::atomic("a"),
            ClassExpr::atomic("b"),
        )]);
        let mut i = one_point(&o);
        i.classes.remove("b");
        assert!(matches!(
            check_model(&i, &o),
            Err(ReasonerError::SignatureMismatch(_))
        ));
    }

    #[test]
    fn names_must_be_distinct() {
        let o = Ontology::from_axioms([Axiom::role_assertion("borders", "a", "b")]);
        let mut i = one_point(&o);
        i.roles.get_mut("borders").unwrap().insert((0, 0));
        assert!(!check_model(&i, &o).unwrap());
        i.domain_size = 2;
        i.individuals.insert("b".into(), 1);
        i.roles.get_mut("borders").unwrap().insert((0, 1));
        assert!(check_model(&i, &o).unwrap());
    }
}
