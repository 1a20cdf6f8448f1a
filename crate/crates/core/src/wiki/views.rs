//! Export, inferred hierarchy and memberships, and questions.

use serde::Serialize;

use super::{Status, WikiError, WikiState};
use crate::grammar::{self, SentenceAst, Subject, Vp};
use crate::lexicon::detokenize;
use crate::reasoner;
use crate::translator::{
    self, is_anonymous_individual, Axiom, ClassExpr, Query, QueryTranslation, RedReason,
};

/// First line of every export.
pub const UNA_NOTICE: &str =
    "# Unique name assumption: different names always denote different individuals.";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierarchyView {
    /// Classes grouped by equivalence.
    pub groups: Vec<Vec<String>>,
    /// `[a, b]`: every member of group `a` is a member of group `b`, directly.
    pub edges: Vec<[usize; 2]>,
    pub sentences: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipView {
    pub individual: String,
    pub classes: Vec<String>,
    pub sentences: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Views {
    pub hierarchy: HierarchyView,
    pub memberships: Vec<MembershipView>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", rename_all = "kebab-case")]
pub enum Answer {
    Individuals {
        individuals: Vec<String>,
        sentences: Vec<String>,
    },
    Yes,
    No,
    Unknown,
    /// The question is outside what the reasoner handles.
    Outside { reason: RedReason },
}

impl WikiState {
    /// The committed axioms, one per line, followed by red sentences as
    /// comments.
    pub fn export_ontology(&self) -> String {
        let mut out = String::new();
        out.push_str(UNA_NOTICE);
        out.push('\n');
        for axiom in self.ontology.axioms() {
            out.push_str(&axiom.to_string());
            out.push('\n');
        }
        for s in self.statements.values() {
            let tag = match s.status {
                Status::NonOwl(reason) => reason.as_str(),
                Status::Conflict => "conflict",
                _ => continue,
            };
            out.push_str(&format!("# red({tag}): {}\n", s.text));
        }
        out
    }

    fn say(&self, axiom: &Axiom) -> Result<String, WikiError> {
        Ok(detokenize(&translator::verbalize_atomic(axiom, &self.lexicon)?))
    }

    pub fn hierarchy_view(&self) -> Result<HierarchyView, WikiError> {
        let h = reasoner::classify(&self.ontology)?;
        let groups: Vec<Vec<String>> = h
            .groups
            .iter()
            .map(|g| g.iter().cloned().collect())
            .collect();
        let mut sentences = Vec::new();
        let is_a = |a: &str, b: &str| {
            Axiom::sub_class_of(ClassExpr::atomic(a), ClassExpr::atomic(b))
        };
        for group in &groups {
            for pair in group.windows(2) {
                sentences.push(self.say(&is_a(&pair[0], &pair[1]))?);
                sentences.push(self.say(&is_a(&pair[1], &pair[0]))?);
            }
        }
        for &(a, b) in &h.edges {
            sentences.push(self.say(&is_a(&groups[a][0], &groups[b][0]))?);
        }
        Ok(HierarchyView {
            groups,
            edges: h.edges.iter().map(|&(a, b)| [a, b]).collect(),
            sentences,
        })
    }

    /// Entailed named classes of a proper name.
    pub fn membership_view(&self, individual: &str) -> Result<MembershipView, WikiError> {
        self.proper_name(individual)?;
        let classes = reasoner::memberships(&self.ontology, individual)?;
        let sentences = classes
            .iter()
            .map(|c| self.say(&Axiom::class_assertion(ClassExpr::atomic(c), individual)))
            .collect::<Result<_, _>>()?;
        Ok(MembershipView {
            individual: individual.to_string(),
            classes: classes.into_iter().collect(),
            sentences,
        })
    }

    /// The hierarchy plus memberships of every named individual in the
    /// ontology.
    pub fn snapshot_views(&self) -> Result<Views, WikiError> {
        let memberships = self
            .ontology
            .signature()
            .individuals
            .iter()
            .filter(|i| !is_anonymous_individual(i))
            .map(|i| self.membership_view(i))
            .collect::<Result<_, _>>()?;
        Ok(Views {
            hierarchy: self.hierarchy_view()?,
            memberships,
        })
    }

    /// Answers a `which ...?` or `is ...?` question.
    pub fn ask(&self, text: &str) -> Result<Answer, WikiError> {
        let tokens = self.lexicon.tokenize(text)?;
        let ast = grammar::parse(&tokens)?;
        let query = match translator::translate_question(&ast)? {
            QueryTranslation::Red(reason) => return Ok(Answer::Outside { reason }),
            QueryTranslation::Query(q) => q,
        };
        match query {
            Query::Retrieve(c) => {
                let individuals = self.certain_answers(&c)?;
                let SentenceAst::WhQuestion { class, vp } = &ast else {
                    unreachable!("retrieval comes from a which-question")
                };
                let mut sentences = Vec::new();
                for i in &individuals {
                    sentences.push(self.render_about(i, Vp::IsA {
                        negated: false,
                        class: class.clone(),
                    })?);
                    sentences.push(self.render_about(i, vp.clone())?);
                }
                Ok(Answer::Individuals {
                    individuals,
                    sentences,
                })
            }
            Query::Entails(axiom) => {
                let Axiom::ClassAssertion { class, individual } = &axiom else {
                    unreachable!("yes/no questions ask for class membership")
                };
                if reasoner::entails(&self.ontology, &axiom)? {
                    Ok(Answer::Yes)
                } else if reasoner::entails(
                    &self.ontology,
                    &Axiom::class_assertion(ClassExpr::not(class.clone()), individual),
                )? {
                    Ok(Answer::No)
                } else {
                    Ok(Answer::Unknown)
                }
            }
        }
    }

    fn render_about(&self, individual: &str, vp: Vp) -> Result<String, WikiError> {
        let ast = SentenceAst::Declarative {
            subject: Subject::Individual(individual.to_string()),
            vp,
        };
        Ok(detokenize(&grammar::render(&ast, &self.lexicon)?))
    }

    /// Named individuals that certainly belong to `c`.
    fn certain_answers(&self, c: &ClassExpr) -> Result<Vec<String>, WikiError> {
        Ok(reasoner::retrieve(&self.ontology, c)?
            .into_iter()
            .filter(|i| !is_anonymous_individual(i))
            .collect())
    }
}
