//! Articles, statements and the consistency gate.
//!
//! Every sentence goes through [`WikiState::add_statement`], which parses,
//! translates and admits its axioms only if the ontology stays consistent.
//! Sentences that are rejected are still kept in their article with a red
//! status. [`SharedWiki`] wraps a state for concurrent use: readers take
//! immutable snapshots while writes are serialized.

mod shared;
mod store;
mod views;

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

use crate::grammar::{self, GrammarError, Prediction, SentenceAst};
use crate::lexicon::{detokenize, LexiconError, Lexicon, Token, WordClass, WordEntry};
use crate::reasoner::{self, Ontology, ReasonerError};
use crate::translator::{self, Axiom, RedReason, TranslateError, TranslationResult};

pub use shared::SharedWiki;
pub use store::DataFiles;
pub use views::{Answer, HierarchyView, MembershipView, Views, UNA_NOTICE};

#[derive(Debug, Error)]
pub enum WikiError {
    #[error("there is no article `{0}`")]
    UnknownArticle(String),
    #[error("`{0}` is not a proper name")]
    NotAnIndividual(String),
    #[error("there is no statement {0}")]
    UnknownStatement(u64),
    #[error("statement {0} is not in conflict with the ontology")]
    NotReassertable(u64),
    #[error("the word `{0}` is still used")]
    WordInUse(String),
    #[error("a comment must be a single non-empty line")]
    InvalidComment,
    #[error("{file}, line {line}: {reason}")]
    Load {
        file: String,
        line: usize,
        reason: String,
    },
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl WikiError {
    pub fn code(&self) -> &'static str {
        match self {
            WikiError::UnknownArticle(_) => "unknown-article",
            WikiError::NotAnIndividual(_) => "not-an-individual",
            WikiError::UnknownStatement(_) => "unknown-statement",
            WikiError::NotReassertable(_) => "not-reassertable",
            WikiError::WordInUse(_) => "word-in-use",
            WikiError::InvalidComment => "invalid-comment",
            WikiError::Load { .. } => "load-failure",
            WikiError::Lexicon(e) => e.code(),
            WikiError::Grammar(e) => e.code(),
            WikiError::Translate(e) => e.code(),
            WikiError::Reasoner(e) => e.code(),
            WikiError::Io(_) => "io-error",
        }
    }

    /// Token position of a syntax error or unknown word.
    pub fn position(&self) -> Option<usize> {
        match self {
            WikiError::Grammar(GrammarError::Syntax { position, .. }) => Some(*position),
            WikiError::Lexicon(LexiconError::UnknownWord { position, .. }) => Some(*position),
            _ => None,
        }
    }

    /// What could have come at the failing position of a syntax error.
    pub fn prediction(&self) -> Option<&Prediction> {
        match self {
            WikiError::Grammar(GrammarError::Syntax { prediction, .. }) => Some(prediction),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Translated and part of the ontology.
    Committed,
    /// Outside what the reasoner handles.
    NonOwl(RedReason),
    /// Rejected because it contradicts the ontology.
    Conflict,
    Comment,
}

impl Status {
    /// Short name used in API payloads.
    pub fn label(self) -> &'static str {
        match self {
            Status::Committed => "ok",
            Status::NonOwl(_) => "nonowl",
            Status::Conflict => "conflict",
            Status::Comment => "comment",
        }
    }

    pub fn reason(self) -> Option<RedReason> {
        match self {
            Status::NonOwl(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_red(self) -> bool {
        matches!(self, Status::NonOwl(_) | Status::Conflict)
    }

    pub fn parse(s: &str) -> Option<Status> {
        match s {
            "ok" => Some(Status::Committed),
            "conflict" => Some(Status::Conflict),
            "comment" => Some(Status::Comment),
            _ => s
                .strip_prefix("nonowl:")
                .and_then(RedReason::parse)
                .map(Status::NonOwl),
        }
    }
}

/// The form stored in article files: `ok`, `nonowl:<reason>`, `conflict`, `comment`.
impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::NonOwl(r) => write!(f, "nonowl:{r}"),
            other => f.write_str(other.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub id: u64,
    pub article: String,
    /// Space-joined tokens, or the raw text of a comment.
    pub text: String,
    pub tokens: Vec<Token>,
    pub ast: Option<SentenceAst>,
    pub status: Status,
    /// Non-empty exactly when the statement is committed.
    pub axioms: Vec<Axiom>,
}

impl Serialize for Statement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let axioms: Vec<String> = self.axioms.iter().map(Axiom::to_string).collect();
        let kind = if self.status == Status::Comment {
            "comment"
        } else {
            "sentence"
        };
        let mut s = serializer.serialize_struct("Statement", 7)?;
        s.serialize_field("id", &self.id)?;
        s.serialize_field("article", &self.article)?;
        s.serialize_field("kind", kind)?;
        s.serialize_field("text", &self.text)?;
        s.serialize_field("status", self.status.label())?;
        s.serialize_field("reason", &self.status.reason())?;
        s.serialize_field("axioms", &axioms)?;
        s.end()
    }
}

/// Lexicon, articles and the committed ontology.
///
/// The ontology is always the union of the axioms of committed statements,
/// and it is always consistent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WikiState {
    lexicon: Lexicon,
    articles: BTreeMap<String, Vec<u64>>,
    statements: BTreeMap<u64, Statement>,
    ontology: Ontology,
    next_id: u64,
}

impl Default for WikiState {
    fn default() -> WikiState {
        WikiState::new()
    }
}

impl WikiState {
    pub fn new() -> WikiState {
        WikiState {
            lexicon: Lexicon::new(),
            articles: BTreeMap::new(),
            statements: BTreeMap::new(),
            ontology: Ontology::new(),
            next_id: 1,
        }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn ontology(&self) -> &Ontology {
        &self.ontology
    }

    pub fn next_id(&self) -> u64 {
        self.next_id
    }

    pub fn statement(&self, id: u64) -> Option<&Statement> {
        self.statements.get(&id)
    }

    pub fn statements(&self) -> impl Iterator<Item = &Statement> {
        self.statements.values()
    }

    /// Lemmas of all articles, sorted.
    pub fn article_names(&self) -> impl Iterator<Item = &str> {
        self.articles.keys().map(String::as_str)
    }

    /// The statements of an article in author order.
    pub fn article(&self, lemma: &str) -> Result<Vec<&Statement>, WikiError> {
        let ids = self
            .articles
            .get(lemma)
            .ok_or_else(|| WikiError::UnknownArticle(lemma.to_string()))?;
        Ok(ids.iter().map(|id| &self.statements[id]).collect())
    }

    /// Adds a word together with its empty article.
    pub fn add_word(&mut self, entry: WordEntry) -> Result<(), WikiError> {
        let lemma = entry.lemma.clone();
        self.lexicon.add_word(entry)?;
        self.articles.insert(lemma, Vec::new());
        Ok(())
    }

    /// Removes a word. Refused while its article has statements or any
    /// statement uses it.
    pub fn remove_word(&mut self, lemma: &str) -> Result<WordEntry, WikiError> {
        if self.lexicon.get(lemma).is_none() {
            return Err(LexiconError::NoSuchWord(lemma.to_string()).into());
        }
        let article_empty = self.articles.get(lemma).is_none_or(Vec::is_empty);
        let used = self
            .statements
            .values()
            .any(|s| s.tokens.iter().any(|t| t.lemma() == Some(lemma)));
        if !article_empty || used {
            return Err(WikiError::WordInUse(lemma.to_string()));
        }
        self.articles.remove(lemma);
        Ok(self.lexicon.remove_word(lemma)?)
    }

    /// Tokenizes and parses `text`, then runs the gate. Gate rejections are
    /// not errors: the statement is stored with a red status.
    pub fn add_statement(&mut self, article: &str, text: &str) -> Result<Statement, WikiError> {
        self.require_article(article)?;
        let tokens = self.lexicon.tokenize(text)?;
        let ast = grammar::parse(&tokens)?;
        if ast.is_question() {
            return Err(TranslateError::NotDeclarative.into());
        }
        let id = self.next_id;
        let (status, axioms) = self.gate(&ast, id)?;
        let statement = Statement {
            id,
            article: article.to_string(),
            text: detokenize(&tokens),
            tokens,
            ast: Some(ast),
            status,
            axioms,
        };
        self.insert(statement.clone());
        Ok(statement)
    }

    pub fn add_comment(&mut self, article: &str, text: &str) -> Result<Statement, WikiError> {
        self.require_article(article)?;
        check_comment(text)?;
        let statement = Statement {
            id: self.next_id,
            article: article.to_string(),
            text: text.to_string(),
            tokens: Vec::new(),
            ast: None,
            status: Status::Comment,
            axioms: Vec::new(),
        };
        self.insert(statement.clone());
        Ok(statement)
    }

    pub fn remove_statement(&mut self, id: u64) -> Result<Statement, WikiError> {
        let statement = self
            .statements
            .remove(&id)
            .ok_or(WikiError::UnknownStatement(id))?;
        if let Some(ids) = self.articles.get_mut(&statement.article) {
            ids.retain(|&other| other != id);
        }
        if statement.status == Status::Committed {
            self.rebuild_ontology();
        }
        Ok(statement)
    }

    /// Runs the gate again for a statement in conflict.
    pub fn reassert_statement(&mut self, id: u64) -> Result<Statement, WikiError> {
        let statement = self
            .statements
            .get(&id)
            .ok_or(WikiError::UnknownStatement(id))?;
        if statement.status != Status::Conflict {
            return Err(WikiError::NotReassertable(id));
        }
        let ast = statement.ast.clone().expect("sentences carry a tree");
        let (status, axioms) = self.gate(&ast, id)?;
        let statement = self.statements.get_mut(&id).expect("checked above");
        statement.status = status;
        statement.axioms = axioms;
        let statement = statement.clone();
        for axiom in &statement.axioms {
            self.ontology.insert(axiom.clone());
        }
        Ok(statement)
    }

    /// The tokens that may follow `prefix`.
    pub fn predict(&self, prefix: &str) -> Result<Prediction, WikiError> {
        let tokens = self.lexicon.tokenize(prefix)?;
        Ok(grammar::predict_next(&tokens))
    }

    /// Checks that statuses match their translations, that the ontology is
    /// the union of committed axioms, and that it is consistent.
    pub fn verify(&self) -> Result<(), WikiError> {
        let fail = |article: &str, line: usize, reason: String| WikiError::Load {
            file: format!("articles/{article}.article"),
            line,
            reason,
        };
        for (article, ids) in &self.articles {
            for (line, id) in ids.iter().enumerate() {
                let s = &self.statements[id];
                if s.id >= self.next_id {
                    return Err(fail(article, line + 1, format!("id {} is not below next-id", s.id)));
                }
                let Some(ast) = &s.ast else { continue };
                let expected = match translator::translate(ast, s.id)? {
                    TranslationResult::Red(r) => (Status::NonOwl(r), Vec::new()),
                    TranslationResult::Blue(axioms) => match s.status {
                        Status::Conflict => (Status::Conflict, Vec::new()),
                        _ => (Status::Committed, axioms),
                    },
                };
                if (s.status, &s.axioms) != (expected.0, &expected.1) {
                    return Err(fail(
                        article,
                        line + 1,
                        format!("status `{}` does not match the sentence", s.status),
                    ));
                }
            }
        }
        let union = Ontology::from_axioms(self.committed_axioms());
        if union != self.ontology {
            return Err(WikiError::Load {
                file: "articles".into(),
                line: 0,
                reason: "ontology differs from the committed statements".into(),
            });
        }
        if !reasoner::is_consistent(&self.ontology)?.is_consistent() {
            return Err(ReasonerError::InconsistentOntology.into());
        }
        Ok(())
    }

    fn require_article(&self, lemma: &str) -> Result<(), WikiError> {
        if self.articles.contains_key(lemma) {
            Ok(())
        } else {
            Err(WikiError::UnknownArticle(lemma.to_string()))
        }
    }

    fn gate(&self, ast: &SentenceAst, id: u64) -> Result<(Status, Vec<Axiom>), WikiError> {
        Ok(match translator::translate(ast, id)? {
            TranslationResult::Red(reason) => (Status::NonOwl(reason), Vec::new()),
            TranslationResult::Blue(axioms) => {
                let candidate = self.ontology.with(axioms.iter().cloned());
                if reasoner::is_consistent(&candidate)?.is_consistent() {
                    (Status::Committed, axioms)
                } else {
                    (Status::Conflict, Vec::new())
                }
            }
        })
    }

    fn insert(&mut self, statement: Statement) {
        self.next_id = statement.id + 1;
        for axiom in &statement.axioms {
            self.ontology.insert(axiom.clone());
        }
        self.articles
            .get_mut(&statement.article)
            .expect("article exists")
            .push(statement.id);
        self.statements.insert(statement.id, statement);
    }

    fn committed_axioms(&self) -> impl Iterator<Item = Axiom> + '_ {
        self.statements
            .values()
            .filter(|s| s.status == Status::Committed)
            .flat_map(|s| s.axioms.iter().cloned())
    }

    fn rebuild_ontology(&mut self) {
        self.ontology = Ontology::from_axioms(self.committed_axioms());
    }

    fn proper_name(&self, lemma: &str) -> Result<(), WikiError> {
        match self.lexicon.get(lemma) {
            Some(e) if e.word_class == WordClass::ProperName => Ok(()),
            Some(_) => Err(WikiError::NotAnIndividual(lemma.to_string())),
            None => Err(WikiError::UnknownArticle(lemma.to_string())),
        }
    }
}

fn check_comment(text: &str) -> Result<(), WikiError> {
    if text.trim().is_empty() || text.contains(['\n', '\r']) {
        Err(WikiError::InvalidComment)
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn geography() -> WikiState {
        let mut w = WikiState::new();
        for entry in [
            WordEntry::noun("country", "country", "countries"),
            WordEntry::noun("landlocked-country", "landlocked-country", "landlocked-countries"),
            WordEntry::noun("sea", "sea", "seas"),
            WordEntry::transitive_verb("borders", "borders", "border", "bordered"),
            WordEntry::proper_name("switzerland"),
            WordEntry::proper_name("austria"),
            WordEntry::proper_name("baltic-sea"),
        ] {
            w.add_word(entry).unwrap();
        }
        w
    }

    #[test]
    fn first_sentence_commits() {
        let mut w = geography();
        let s = w.add_statement("switzerland", "switzerland is a country .").unwrap();
        assert_eq!(s.status, Status::Committed);
        assert_eq!(s.id, 1);
        assert_eq!(w.ontology().len(), 1);
        assert_eq!(w.next_id(), 2);
    }

    #[test]
    fn modal_sentence_is_red() {
        let mut w = geography();
        let s = w.add_statement("country", "a country can border a sea .").unwrap();
        assert_eq!(s.status, Status::NonOwl(RedReason::Modality));
        assert!(s.axioms.is_empty());
        assert!(w.ontology().is_empty());
    }

    #[test]
    fn contradiction_is_kept_in_conflict_and_reassertable() {
        let mut w = geography();
        w.add_statement("switzerland", "switzerland is a landlocked-country .").unwrap();
        w.add_statement("baltic-sea", "baltic-sea is a sea .").unwrap();
        let border = w.add_statement("switzerland", "switzerland borders baltic-sea .").unwrap();
        let rule = w
            .add_statement("landlocked-country", "every landlocked-country borders no sea .")
            .unwrap();
        assert_eq!(rule.status, Status::Conflict);
        assert_eq!(w.ontology().len(), 3);
        assert_eq!(w.reassert_statement(rule.id).unwrap().status, Status::Conflict);
        w.remove_statement(border.id).unwrap();
        let again = w.reassert_statement(rule.id).unwrap();
        assert_eq!(again.status, Status::Committed);
        assert_eq!(again.id, rule.id);
        assert_eq!(w.ontology().len(), 3);
        assert!(matches!(
            w.reassert_statement(rule.id),
            Err(WikiError::NotReassertable(_))
        ));
        w.verify().unwrap();
    }

    #[test]
    fn errors_carry_codes() {
        let mut w = geography();
        let e = w.add_statement("atlantis", "switzerland is a country .").unwrap_err();
        assert_eq!(e.code(), "unknown-article");
        let e = w.add_statement("country", "every country borders .").unwrap_err();
        assert_eq!(e.code(), "syntax-error");
        assert_eq!(e.position(), Some(3));
        assert!(!e.prediction().unwrap().is_empty());
        let e = w.add_statement("country", "every blorf .").unwrap_err();
        assert_eq!((e.code(), e.position()), ("unknown-word", Some(1)));
        let e = w.add_statement("country", "is switzerland a country ?").unwrap_err();
        assert_eq!(e.code(), "not-a-statement");
        assert_eq!(w.remove_statement(99).unwrap_err().code(), "unknown-statement");
        assert_eq!(w.next_id(), 1);
    }

    #[test]
    fn ids_are_never_reused() {
        let mut w = geography();
        let a = w.add_statement("switzerland", "switzerland is a country .").unwrap();
        w.remove_statement(a.id).unwrap();
        let b = w.add_statement("switzerland", "switzerland is a country .").unwrap();
        assert_eq!(b.id, a.id + 1);
    }

    #[test]
    fn shared_axioms_survive_removal_of_one_copy() {
        let mut w = geography();
        let a = w.add_statement("switzerland", "switzerland is a country .").unwrap();
        w.add_statement("country", "switzerland is a country .").unwrap();
        w.remove_statement(a.id).unwrap();
        assert_eq!(w.ontology().len(), 1);
        w.verify().unwrap();
    }

    #[test]
    fn words_in_use_cannot_be_removed() {
        let mut w = geography();
        w.add_statement("country", "every sea is a country .").unwrap();
        assert_eq!(w.remove_word("sea").unwrap_err().code(), "word-in-use");
        assert_eq!(w.remove_word("country").unwrap_err().code(), "word-in-use");
        w.remove_word("austria").unwrap();
        assert!(w.lexicon().get("austria").is_none());
        assert!(w.article("austria").is_err());
    }

    #[test]
    fn comments_are_single_lines() {
        let mut w = geography();
        let c = w.add_comment("country", "Countries are\tstates.").unwrap();
        assert_eq!(c.status, Status::Comment);
        assert_eq!(w.add_comment("country", "a\nb").unwrap_err().code(), "invalid-comment");
        assert_eq!(w.add_comment("country", " ").unwrap_err().code(), "invalid-comment");
    }

    #[test]
    fn article_order_follows_insertion() {
        let mut w = geography();
        w.add_statement("switzerland", "switzerland is a country .").unwrap();
        w.add_comment("switzerland", "Alpine.").unwrap();
        w.add_statement("switzerland", "switzerland borders austria .").unwrap();
        let ids: Vec<u64> = w.article("switzerland").unwrap().iter().map(|s| s.id).collect();
        assert_eq!(ids, [1, 2, 3]);
    }

    #[test]
    fn status_strings_round_trip() {
        for s in [
            Status::Committed,
            Status::Conflict,
            Status::Comment,
            Status::NonOwl(RedReason::Modality),
            Status::NonOwl(RedReason::PassiveClassAgentUnsupported),
        ] {
            assert_eq!(Status::parse(&s.to_string()), Some(s));
        }
        assert_eq!(Status::parse("nonowl:other"), None);
    }

    #[test]
    fn statement_json_shape() {
        let mut w = geography();
        let s = w.add_statement("switzerland", "switzerland borders austria .").unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["status"], "ok");
        assert_eq!(v["kind"], "sentence");
        assert_eq!(v["axioms"][0], "ObjectPropertyAssertion(borders switzerland austria)");
        assert!(v["reason"].is_null());
    }
}
