//! Sentence trees to description-logic axioms, and back for atomic axioms.
//!
//! Sentences whose meaning falls outside what the reasoner handles come back
//! as `Red` with a machine-readable reason rather than as an error.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::grammar::{
    self, ClassTerm, CountKind, GrammarError, Object, Quantifier, SentenceAst, Subject, Vp,
};
use crate::lexicon::{Lexicon, Token};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ClassExpr {
    Atomic { class: String },
    Top,
    Not { expr: Box<ClassExpr> },
    And { left: Box<ClassExpr>, right: Box<ClassExpr> },
    Exists { role: String, filler: Box<ClassExpr> },
    Forall { role: String, filler: Box<ClassExpr> },
    AtLeast { n: u32, role: String, filler: Box<ClassExpr> },
    AtMost { n: u32, role: String, filler: Box<ClassExpr> },
    HasValue { role: String, individual: String },
}

impl ClassExpr {
    pub fn atomic(class: &str) -> ClassExpr {
        ClassExpr::Atomic {
            class: class.to_string(),
        }
    }

    pub fn not(expr: ClassExpr) -> ClassExpr {
        ClassExpr::Not {
            expr: Box::new(expr),
        }
    }

    pub fn and(left: ClassExpr, right: ClassExpr) -> ClassExpr {
        ClassExpr::And {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn exists(role: &str, filler: ClassExpr) -> ClassExpr {
        ClassExpr::Exists {
            role: role.to_string(),
            filler: Box::new(filler),
        }
    }

    pub fn forall(role: &str, filler: ClassExpr) -> ClassExpr {
        ClassExpr::Forall {
            role: role.to_string(),
            filler: Box::new(filler),
        }
    }

    pub fn at_least(n: u32, role: &str, filler: ClassExpr) -> ClassExpr {
        ClassExpr::AtLeast {
            n,
            role: role.to_string(),
            filler: Box::new(filler),
        }
    }

    pub fn at_most(n: u32, role: &str, filler: ClassExpr) -> ClassExpr {
        ClassExpr::AtMost {
            n,
            role: role.to_string(),
            filler: Box::new(filler),
        }
    }

    pub fn has_value(role: &str, individual: &str) -> ClassExpr {
        ClassExpr::HasValue {
            role: role.to_string(),
            individual: individual.to_string(),
        }
    }

    pub fn as_atomic(&self) -> Option<&str> {
        match self {
            ClassExpr::Atomic { class } => Some(class),
            _ => None,
        }
    }

    /// Visits every class, role and individual name in the expression.
    pub fn for_each_name(&self, f: &mut impl FnMut(NameKind, &str)) {
        match self {
            ClassExpr::Atomic { class } => f(NameKind::Class, class),
            ClassExpr::Top => {}
            ClassExpr::Not { expr } => expr.for_each_name(f),
            ClassExpr::And { left, right } => {
                left.for_each_name(f);
                right.for_each_name(f);
            }
            ClassExpr::Exists { role, filler }
            | ClassExpr::Forall { role, filler }
            | ClassExpr::AtLeast { role, filler, .. }
            | ClassExpr::AtMost { role, filler, .. } => {
                f(NameKind::Role, role);
                filler.for_each_name(f);
            }
            ClassExpr::HasValue { role, individual } => {
                f(NameKind::Role, role);
                f(NameKind::Individual, individual);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameKind {
    Class,
    Role,
    Individual,
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpr::Atomic { class } => f.write_str(class),
            ClassExpr::Top => f.write_str("owl:Thing"),
            ClassExpr::Not { expr } => write!(f, "ObjectComplementOf({expr})"),
            ClassExpr::And { left, right } => write!(f, "ObjectIntersectionOf({left} {right})"),
            ClassExpr::Exists { role, filler } => write!(f, "ObjectSomeValuesFrom({role} {filler})"),
            ClassExpr::Forall { role, filler } => write!(f, "ObjectAllValuesFrom({role} {filler})"),
            ClassExpr::AtLeast { n, role, filler } => {
                write!(f, "ObjectMinCardinality({n} {role} {filler})")
            }
            ClassExpr::AtMost { n, role, filler } => {
                write!(f, "ObjectMaxCardinality({n} {role} {filler})")
            }
            ClassExpr::HasValue { role, individual } => {
                write!(f, "ObjectHasValue({role} {individual})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Axiom {
    SubClassOf {
        sub: ClassExpr,
        sup: ClassExpr,
    },
    ClassAssertion {
        class: ClassExpr,
        individual: String,
    },
    RoleAssertion {
        role: String,
        subject: String,
        object: String,
    },
}

impl Axiom {
    pub fn sub_class_of(sub: ClassExpr, sup: ClassExpr) -> Axiom {
        Axiom::SubClassOf { sub, sup }
    }

    pub fn class_assertion(class: ClassExpr, individual: &str) -> Axiom {
        Axiom::ClassAssertion {
            class,
            individual: individual.to_string(),
        }
    }

    pub fn role_assertion(role: &str, subject: &str, object: &str) -> Axiom {
        Axiom::RoleAssertion {
            role: role.to_string(),
            subject: subject.to_string(),
            object: object.to_string(),
        }
    }

    pub fn for_each_name(&self, f: &mut impl FnMut(NameKind, &str)) {
        match self {
            Axiom::SubClassOf { sub, sup } => {
                sub.for_each_name(f);
                sup.for_each_name(f);
            }
            Axiom::ClassAssertion { class, individual } => {
                class.for_each_name(f);
                f(NameKind::Individual, individual);
            }
            Axiom::RoleAssertion {
                role,
                subject,
                object,
            } => {
                f(NameKind::Role, role);
                f(NameKind::Individual, subject);
                f(NameKind::Individual, object);
            }
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::SubClassOf { sub, sup } => write!(f, "SubClassOf({sub} {sup})"),
            Axiom::ClassAssertion { class, individual } => {
                write!(f, "ClassAssertion({class} {individual})")
            }
            Axiom::RoleAssertion {
                role,
                subject,
                object,
            } => write!(f, "ObjectPropertyAssertion({role} {subject} {object})"),
        }
    }
}

/// Why a sentence stays outside the ontology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RedReason {
    Modality,
    PassiveClassAgentUnsupported,
}

impl RedReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RedReason::Modality => "modality",
            RedReason::PassiveClassAgentUnsupported => "passive-class-agent-unsupported",
        }
    }

    pub fn parse(s: &str) -> Option<RedReason> {
        match s {
            "modality" => Some(RedReason::Modality),
            "passive-class-agent-unsupported" => Some(RedReason::PassiveClassAgentUnsupported),
            _ => None,
        }
    }
}

impl fmt::Display for RedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranslationResult {
    Blue(Vec<Axiom>),
    Red(RedReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    /// Certain answers of a class expression.
    Retrieve(ClassExpr),
    /// Whether the ontology entails a class assertion.
    Entails(Axiom),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryTranslation {
    Query(Query),
    Red(RedReason),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("expected a declarative sentence")]
    NotDeclarative,
    #[error("expected a question")]
    NotQuestion,
    #[error("axiom cannot be put into words: {0}")]
    NotAtomic(String),
    #[error(transparent)]
    Render(#[from] GrammarError),
}

impl TranslateError {
    pub fn code(&self) -> &'static str {
        match self {
            TranslateError::NotDeclarative => "not-a-statement",
            TranslateError::NotQuestion => "not-a-question",
            TranslateError::NotAtomic(_) => "not-atomic",
            TranslateError::Render(e) => e.code(),
        }
    }
}

/// Name of the individual introduced by an existential sentence.
pub fn anonymous_individual(statement_id: u64) -> String {
    format!("_a{statement_id}")
}

pub fn is_anonymous_individual(name: &str) -> bool {
    name.starts_with('_')
}

fn has_modal_vp(vp: &Vp) -> bool {
    match vp {
        Vp::Modal { .. } => true,
        Vp::IsA { class, .. } => has_modal_term(class),
        Vp::Verb { object, .. } => match object {
            Object::Exists(c) | Object::NoneOf(c) | Object::Count { class: c, .. } => {
                has_modal_term(c)
            }
            Object::Individual(_) => false,
        },
        Vp::Passive { .. } => false,
    }
}

fn has_modal_term(c: &ClassTerm) -> bool {
    c.relative.as_deref().is_some_and(has_modal_vp)
}

fn has_modal(ast: &SentenceAst) -> bool {
    match ast {
        SentenceAst::Declarative { subject, vp } => {
            has_modal_vp(vp)
                || matches!(subject, Subject::Quantified(_, c) if has_modal_term(c))
        }
        SentenceAst::WhQuestion { class, vp } => has_modal_term(class) || has_modal_vp(vp),
        SentenceAst::YnQuestion { class, .. } => has_modal_term(class),
    }
}

fn class_term(c: &ClassTerm) -> Result<ClassExpr, RedReason> {
    let base = ClassExpr::atomic(&c.noun);
    match &c.relative {
        None => Ok(base),
        Some(vp) => Ok(ClassExpr::and(base, vp_expr(vp)?)),
    }
}

fn vp_expr(vp: &Vp) -> Result<ClassExpr, RedReason> {
    match vp {
        Vp::IsA { negated, class } => {
            let c = class_term(class)?;
            Ok(if *negated { ClassExpr::not(c) } else { c })
        }
        Vp::Verb {
            negated,
            verb,
            object,
        } => {
            let c = object_expr(verb, object)?;
            Ok(if *negated { ClassExpr::not(c) } else { c })
        }
        Vp::Passive { .. } => Err(RedReason::PassiveClassAgentUnsupported),
        Vp::Modal { .. } => Err(RedReason::Modality),
    }
}

fn object_expr(role: &str, object: &Object) -> Result<ClassExpr, RedReason> {
    Ok(match object {
        Object::Exists(c) => ClassExpr::exists(role, class_term(c)?),
        Object::NoneOf(c) => ClassExpr::not(ClassExpr::exists(role, class_term(c)?)),
        Object::Individual(i) => ClassExpr::has_value(role, i),
        Object::Count { kind, n, class } => {
            let filler = class_term(class)?;
            let n = u32::from(*n);
            match kind {
                CountKind::AtMost => ClassExpr::at_most(n, role, filler),
                CountKind::AtLeast => ClassExpr::at_least(n, role, filler),
                CountKind::Exactly => ClassExpr::and(
                    ClassExpr::at_least(n, role, filler.clone()),
                    ClassExpr::at_most(n, role, filler),
                ),
                CountKind::MoreThan => ClassExpr::at_least(n + 1, role, filler),
                // the grammar guarantees n >= 1 here
                CountKind::LessThan => ClassExpr::at_most(n - 1, role, filler),
            }
        }
    })
}

/// Maps a declarative sentence to axioms. `statement_id` names the
/// individual an existential sentence introduces.
pub fn translate(ast: &SentenceAst, statement_id: u64) -> Result<TranslationResult, TranslateError> {
    let SentenceAst::Declarative { subject, vp } = ast else {
        return Err(TranslateError::NotDeclarative);
    };
    if has_modal(ast) {
        return Ok(TranslationResult::Red(RedReason::Modality));
    }
    let axiom = match subject {
        Subject::Quantified(q, term) => {
            let sub = class_term(term);
            let pred = vp_expr(vp);
            let (sub, pred) = match (sub, pred) {
                (Ok(s), Ok(p)) => (s, p),
                (Err(r), _) | (_, Err(r)) => return Ok(TranslationResult::Red(r)),
            };
            match q {
                Quantifier::Every => Axiom::sub_class_of(sub, pred),
                Quantifier::No => Axiom::sub_class_of(sub, ClassExpr::not(pred)),
                Quantifier::Indefinite => Axiom::class_assertion(
                    ClassExpr::and(sub, pred),
                    &anonymous_individual(statement_id),
                ),
            }
        }
        Subject::Individual(p) => match vp {
            Vp::Verb {
                negated: false,
                verb,
                object: Object::Individual(q),
            } => Axiom::role_assertion(verb, p, q),
            Vp::Passive { verb, agent } => Axiom::role_assertion(verb, agent, p),
            _ => match vp_expr(vp) {
                Ok(c) => Axiom::class_assertion(c, p),
                Err(r) => return Ok(TranslationResult::Red(r)),
            },
        },
    };
    Ok(TranslationResult::Blue(vec![axiom]))
}

pub fn translate_question(ast: &SentenceAst) -> Result<QueryTranslation, TranslateError> {
    if !ast.is_question() {
        return Err(TranslateError::NotQuestion);
    }
    if has_modal(ast) {
        return Ok(QueryTranslation::Red(RedReason::Modality));
    }
    let query = match ast {
        SentenceAst::WhQuestion { class, vp } => {
            match class_term(class).and_then(|c| Ok(ClassExpr::and(c, vp_expr(vp)?))) {
                Ok(c) => Query::Retrieve(c),
                Err(r) => return Ok(QueryTranslation::Red(r)),
            }
        }
        SentenceAst::YnQuestion { individual, class } => match class_term(class) {
            Ok(c) => Query::Entails(Axiom::class_assertion(c, individual)),
            Err(r) => return Ok(QueryTranslation::Red(r)),
        },
        SentenceAst::Declarative { .. } => unreachable!(),
    };
    Ok(QueryTranslation::Query(query))
}

/// Puts an atomic axiom into words: a subclass edge between named classes,
/// a named class membership, or a role edge between named individuals.
pub fn verbalize_atomic(axiom: &Axiom, lexicon: &Lexicon) -> Result<Vec<Token>, TranslateError> {
    let not_atomic = || TranslateError::NotAtomic(axiom.to_string());
    let ast = match axiom {
        Axiom::SubClassOf { sub, sup } => {
            let (a, b) = (
                sub.as_atomic().ok_or_else(not_atomic)?,
                sup.as_atomic().ok_or_else(not_atomic)?,
            );
            SentenceAst::Declarative {
                subject: Subject::Quantified(Quantifier::Every, ClassTerm::noun(a)),
                vp: Vp::IsA {
                    negated: false,
                    class: ClassTerm::noun(b),
                },
            }
        }
        Axiom::ClassAssertion { class, individual } => {
            let b = class.as_atomic().ok_or_else(not_atomic)?;
            if is_anonymous_individual(individual) {
                return Err(not_atomic());
            }
            SentenceAst::Declarative {
                subject: Subject::Individual(individual.clone()),
                vp: Vp::IsA {
                    negated: false,
                    class: ClassTerm::noun(b),
                },
            }
        }
        Axiom::RoleAssertion {
            role,
            subject,
            object,
        } => {
            if is_anonymous_individual(subject) || is_anonymous_individual(object) {
                return Err(not_atomic());
            }
            SentenceAst::Declarative {
                subject: Subject::Individual(subject.clone()),
                vp: Vp::Verb {
                    negated: false,
                    verb: role.clone(),
                    object: Object::Individual(object.clone()),
                },
            }
        }
    };
    Ok(grammar::render(&ast, lexicon)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse;
    use crate::lexicon::{detokenize, WordEntry};

    fn lexicon() -> Lexicon {
        let mut lx = Lexicon::new();
        for e in [
            WordEntry::noun("country", "country", "countries"),
            WordEntry::noun("landlocked-country", "landlocked-country", "landlocked-countries"),
            WordEntry::noun("sea", "sea", "seas"),
            WordEntry::noun("ocean", "ocean", "oceans"),
            WordEntry::transitive_verb("borders", "borders", "border", "bordered"),
            WordEntry::proper_name("switzerland"),
            WordEntry::proper_name("austria"),
        ] {
            lx.add_word(e).unwrap();
        }
        lx
    }

    fn tr(s: &str) -> TranslationResult {
        let lx = lexicon();
        translate(&parse(&lx.tokenize(s).unwrap()).unwrap(), 7).unwrap()
    }

    fn blue(axiom: Axiom) -> TranslationResult {
        TranslationResult::Blue(vec![axiom])
    }

    #[test]
    fn landlocked_countries_border_no_sea() {
        let expected = Axiom::sub_class_of(
            ClassExpr::atomic("landlocked-country"),
            ClassExpr::not(ClassExpr::exists("borders", ClassExpr::atomic("sea"))),
        );
        assert_eq!(tr("every landlocked-country borders no sea ."), blue(expected.clone()));
        assert_eq!(
            expected.to_string(),
            "SubClassOf(landlocked-country ObjectComplementOf(ObjectSomeValuesFrom(borders sea)))"
        );
    }

    #[test]
    fn cardinalities() {
        assert_eq!(
            tr("every country borders at most 3 countries ."),
            blue(Axiom::sub_class_of(
                ClassExpr::atomic("country"),
                ClassExpr::at_most(3, "borders", ClassExpr::atomic("country"))
            ))
        );
        let c = ClassExpr::atomic("country");
        assert_eq!(
            tr("every country borders exactly 5 countries ."),
            blue(Axiom::sub_class_of(
                c.clone(),
                ClassExpr::and(
                    ClassExpr::at_least(5, "borders", c.clone()),
                    ClassExpr::at_most(5, "borders", c.clone())
                )
            ))
        );
        assert_eq!(
            tr("every country borders more than 2 countries ."),
            blue(Axiom::sub_class_of(
                c.clone(),
                ClassExpr::at_least(3, "borders", c.clone())
            ))
        );
        assert_eq!(
            tr("every country borders less than 1 country ."),
            blue(Axiom::sub_class_of(
                c.clone(),
                ClassExpr::at_most(0, "borders", c.clone())
            ))
        );
    }

    #[test]
    fn red_sentences() {
        assert_eq!(
            tr("a country can border a sea ."),
            TranslationResult::Red(RedReason::Modality)
        );
        assert_eq!(
            tr("every country that must border a sea is a country ."),
            TranslationResult::Red(RedReason::Modality)
        );
        assert_eq!(
            tr("every country is bordered by switzerland ."),
            TranslationResult::Red(RedReason::PassiveClassAgentUnsupported)
        );
        assert_eq!(
            tr("switzerland can border austria ."),
            TranslationResult::Red(RedReason::Modality)
        );
    }

    #[test]
    fn individuals() {
        assert_eq!(
            tr("switzerland borders austria ."),
            blue(Axiom::role_assertion("borders", "switzerland", "austria"))
        );
        assert_eq!(
            tr("switzerland is bordered by austria ."),
            blue(Axiom::role_assertion("borders", "austria", "switzerland"))
        );
        assert_eq!(
            tr("switzerland does not border austria ."),
            blue(Axiom::class_assertion(
                ClassExpr::not(ClassExpr::has_value("borders", "austria")),
                "switzerland"
            ))
        );
        assert_eq!(
            tr("a country borders switzerland ."),
            blue(Axiom::class_assertion(
                ClassExpr::and(
                    ClassExpr::atomic("country"),
                    ClassExpr::has_value("borders", "switzerland")
                ),
                "_a7"
            ))
        );
        assert_eq!(
            tr("no sea is a country ."),
            blue(Axiom::sub_class_of(
                ClassExpr::atomic("sea"),
                ClassExpr::not(ClassExpr::atomic("country"))
            ))
        );
    }

    #[test]
    fn questions() {
        let lx = lexicon();
        let q = |s: &str| translate_question(&parse(&lx.tokenize(s).unwrap()).unwrap()).unwrap();
        assert_eq!(
            q("which countries border switzerland ?"),
            QueryTranslation::Query(Query::Retrieve(ClassExpr::and(
                ClassExpr::atomic("country"),
                ClassExpr::has_value("borders", "switzerland")
            )))
        );
        assert_eq!(
            q("is switzerland a country ?"),
            QueryTranslation::Query(Query::Entails(Axiom::class_assertion(
                ClassExpr::atomic("country"),
                "switzerland"
            )))
        );
        assert_eq!(
            q("which countries can border a sea ?"),
            QueryTranslation::Red(RedReason::Modality)
        );
        assert_eq!(
            translate(&parse(&lx.tokenize("is switzerland a country ?").unwrap()).unwrap(), 1),
            Err(TranslateError::NotDeclarative)
        );
    }

    #[test]
    fn verbalization() {
        let lx = lexicon();
        let v = |a: &Axiom| detokenize(&verbalize_atomic(a, &lx).unwrap());
        assert_eq!(
            v(&Axiom::sub_class_of(
                ClassExpr::atomic("landlocked-country"),
                ClassExpr::atomic("country")
            )),
            "every landlocked-country is a country ."
        );
        assert_eq!(
            v(&Axiom::class_assertion(ClassExpr::atomic("country"), "switzerland")),
            "switzerland is a country ."
        );
        assert_eq!(
            v(&Axiom::class_assertion(ClassExpr::atomic("ocean"), "switzerland")),
            "switzerland is an ocean ."
        );
        let err = verbalize_atomic(
            &Axiom::sub_class_of(
                ClassExpr::atomic("country"),
                ClassExpr::exists("borders", ClassExpr::atomic("sea")),
            ),
            &lx,
        )
        .unwrap_err();
        assert_eq!(err.code(), "not-atomic");
    }

    #[test]
    fn verbalization_round_trips() {
        let lx = lexicon();
        let classes = ["country", "landlocked-country", "sea", "ocean"];
        let names = ["switzerland", "austria"];
        let mut axioms = Vec::new();
        for a in classes {
            for b in classes {
                axioms.push(Axiom::sub_class_of(ClassExpr::atomic(a), ClassExpr::atomic(b)));
            }
            for p in names {
                axioms.push(Axiom::class_assertion(ClassExpr::atomic(a), p));
            }
        }
        for p in names {
            for q in names {
                axioms.push(Axiom::role_assertion("borders", p, q));
            }
        }
        for a in axioms {
            let tokens = verbalize_atomic(&a, &lx).unwrap();
            let ast = parse(&tokens).unwrap();
            assert_eq!(translate(&ast, 0).unwrap(), TranslationResult::Blue(vec![a]));
        }
    }
}
