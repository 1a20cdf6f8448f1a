//! The controlled-English grammar and its predictive chart parser.
//!
//! The grammar is a fixed context-free rule table with agreement compiled
//! into the nonterminals (`VpSg` / `VpPl`, `Count` picking singular nouns
//! only after the number 1). Parsing and next-token prediction share one
//! Earley chart: the prediction for a prefix is read off the scanner-ready
//! items of the last chart set, which is exact because every nonterminal
//! is reachable and productive.

mod ast;
mod earley;
mod enumerate;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::LazyLock;

use serde::Serialize;
use thiserror::Error;

use crate::lexicon::{FormKey, FunctionWord, Lexicon, Token, TokenKind, WordClass, MAX_NUMBER};

pub use ast::{render, ClassTerm, CountKind, Modality, Object, Quantifier, SentenceAst, Subject, Vp};
pub use earley::{parse, parse_count, predict_next};
pub use enumerate::{
    count_derivations, enumerate_sentences, is_viable_prefix, MAX_ENUMERATION_LENGTH,
};

/// What a token can be matched as by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Terminal {
    Word(FunctionWord),
    NounSg,
    NounPl,
    ProperName,
    Tv3sg,
    TvPl,
    TvPp,
    NumZero,
    NumOne,
    NumMany,
}

impl Terminal {
    pub(crate) fn of(token: &Token) -> Terminal {
        match &token.kind {
            TokenKind::FunctionWord { word } => Terminal::Word(*word),
            TokenKind::Number { value: 0 } => Terminal::NumZero,
            TokenKind::Number { value: 1 } => Terminal::NumOne,
            TokenKind::Number { .. } => Terminal::NumMany,
            TokenKind::Lexical {
                word_class, form, ..
            } => match (word_class, form) {
                (WordClass::ProperName, _) => Terminal::ProperName,
                (WordClass::Noun, FormKey::Plural) => Terminal::NounPl,
                (WordClass::Noun, _) => Terminal::NounSg,
                (WordClass::TransitiveVerb, FormKey::ThirdSingular) => Terminal::Tv3sg,
                (WordClass::TransitiveVerb, FormKey::Plural) => Terminal::TvPl,
                (WordClass::TransitiveVerb, _) => Terminal::TvPp,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Nt {
    Sentence,
    Subject,
    Article,
    CnSg,
    CnPl,
    VpSg,
    VpPl,
    Modal,
    Object,
    Quant,
    Count,
    PosCount,
    Question,
}

impl Nt {
    const ALL: [Nt; 13] = [
        Nt::Sentence,
        Nt::Subject,
        Nt::Article,
        Nt::CnSg,
        Nt::CnPl,
        Nt::VpSg,
        Nt::VpPl,
        Nt::Modal,
        Nt::Object,
        Nt::Quant,
        Nt::Count,
        Nt::PosCount,
        Nt::Question,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Sym {
    T(Terminal),
    N(Nt),
}

/// Identifies a production for tree-to-AST conversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Tag {
    Declarative,
    Question,
    SubjectEvery,
    SubjectNo,
    SubjectIndefinite,
    SubjectName,
    Article,
    Noun,
    NounWithRelative,
    IsA,
    IsNotA,
    Verb,
    NotVerb,
    Passive,
    Modal,
    ModalWord,
    ObjectIndefinite,
    ObjectNone,
    ObjectName,
    ObjectCount,
    ObjectLessThan,
    Quant(CountKind),
    Count,
    WhQuestion,
    YnQuestion,
}

#[derive(Debug)]
pub(crate) struct Rule {
    pub lhs: Nt,
    pub rhs: Vec<Sym>,
    pub tag: Tag,
}

pub(crate) struct Grammar {
    pub rules: Vec<Rule>,
    pub by_lhs: Vec<Vec<usize>>,
    pub min_len: Vec<usize>,
}

impl Grammar {
    pub(crate) fn rules_for(&self, nt: Nt) -> &[usize] {
        &self.by_lhs[nt as usize]
    }

    pub(crate) fn min_len_of(&self, sym: Sym) -> usize {
        match sym {
            Sym::T(_) => 1,
            Sym::N(nt) => self.min_len[nt as usize],
        }
    }
}

pub(crate) static GRAMMAR: LazyLock<Grammar> = LazyLock::new(build_grammar);

fn build_grammar() -> Grammar {
    use FunctionWord as F;
    use Nt::*;
    use Sym::{N, T};

    let w = |f: FunctionWord| T(Terminal::Word(f));
    let mut rules: Vec<Rule> = Vec::new();
    let mut add = |lhs: Nt, tag: Tag, rhs: Vec<Sym>| rules.push(Rule { lhs, rhs, tag });

    add(Sentence, Tag::Declarative, vec![N(Subject), N(VpSg), w(F::Period)]);
    add(Sentence, Tag::Question, vec![N(Question)]);

    add(Subject, Tag::SubjectEvery, vec![w(F::Every), N(CnSg)]);
    add(Subject, Tag::SubjectNo, vec![w(F::No), N(CnSg)]);
    add(Subject, Tag::SubjectIndefinite, vec![N(Article), N(CnSg)]);
    add(Subject, Tag::SubjectName, vec![T(Terminal::ProperName)]);

    add(Article, Tag::Article, vec![w(F::A)]);
    add(Article, Tag::Article, vec![w(F::An)]);

    add(CnSg, Tag::Noun, vec![T(Terminal::NounSg)]);
    add(CnSg, Tag::NounWithRelative, vec![T(Terminal::NounSg), w(F::That), N(VpSg)]);
    add(CnPl, Tag::Noun, vec![T(Terminal::NounPl)]);
    add(CnPl, Tag::NounWithRelative, vec![T(Terminal::NounPl), w(F::That), N(VpPl)]);

    add(VpSg, Tag::IsA, vec![w(F::Is), N(Article), N(CnSg)]);
    add(VpSg, Tag::IsNotA, vec![w(F::Is), w(F::Not), N(Article), N(CnSg)]);
    add(VpSg, Tag::Verb, vec![T(Terminal::Tv3sg), N(Object)]);
    add(VpSg, Tag::NotVerb, vec![w(F::Does), w(F::Not), T(Terminal::TvPl), N(Object)]);
    add(VpSg, Tag::Passive, vec![w(F::Is), T(Terminal::TvPp), w(F::By), T(Terminal::ProperName)]);
    add(VpSg, Tag::Modal, vec![N(Modal), T(Terminal::TvPl), N(Object)]);

    add(VpPl, Tag::IsA, vec![w(F::Are), N(CnPl)]);
    add(VpPl, Tag::IsNotA, vec![w(F::Are), w(F::Not), N(CnPl)]);
    add(VpPl, Tag::Verb, vec![T(Terminal::TvPl), N(Object)]);
    add(VpPl, Tag::NotVerb, vec![w(F::Do), w(F::Not), T(Terminal::TvPl), N(Object)]);
    add(VpPl, Tag::Passive, vec![w(F::Are), T(Terminal::TvPp), w(F::By), T(Terminal::ProperName)]);
    add(VpPl, Tag::Modal, vec![N(Modal), T(Terminal::TvPl), N(Object)]);

    add(Modal, Tag::ModalWord, vec![w(F::Can)]);
    add(Modal, Tag::ModalWord, vec![w(F::Must)]);

    add(Object, Tag::ObjectIndefinite, vec![N(Article), N(CnSg)]);
    add(Object, Tag::ObjectNone, vec![w(F::No), N(CnSg)]);
    add(Object, Tag::ObjectName, vec![T(Terminal::ProperName)]);
    add(Object, Tag::ObjectCount, vec![N(Quant), N(Count)]);
    add(Object, Tag::ObjectLessThan, vec![w(F::Less), w(F::Than), N(PosCount)]);

    add(Quant, Tag::Quant(CountKind::AtMost), vec![w(F::At), w(F::Most)]);
    add(Quant, Tag::Quant(CountKind::AtLeast), vec![w(F::At), w(F::Least)]);
    add(Quant, Tag::Quant(CountKind::Exactly), vec![w(F::Exactly)]);
    add(Quant, Tag::Quant(CountKind::MoreThan), vec![w(F::More), w(F::Than)]);

    add(Count, Tag::Count, vec![T(Terminal::NumZero), N(CnPl)]);
    add(Count, Tag::Count, vec![T(Terminal::NumOne), N(CnSg)]);
    add(Count, Tag::Count, vec![T(Terminal::NumMany), N(CnPl)]);
    add(PosCount, Tag::Count, vec![T(Terminal::NumOne), N(CnSg)]);
    add(PosCount, Tag::Count, vec![T(Terminal::NumMany), N(CnPl)]);

    add(Question, Tag::WhQuestion, vec![w(F::Which), N(CnPl), N(VpPl), w(F::QuestionMark)]);
    add(
        Question,
        Tag::YnQuestion,
        vec![w(F::Is), T(Terminal::ProperName), N(Article), N(CnSg), w(F::QuestionMark)],
    );

    let mut by_lhs = vec![Vec::new(); Nt::ALL.len()];
    for (i, r) in rules.iter().enumerate() {
        by_lhs[r.lhs as usize].push(i);
    }

    // Shortest yield of each nonterminal, by fixpoint.
    let mut min_len = vec![usize::MAX; Nt::ALL.len()];
    loop {
        let mut changed = false;
        for r in &rules {
            let total = r.rhs.iter().try_fold(0usize, |acc, s| match s {
                Sym::T(_) => Some(acc + 1),
                Sym::N(nt) => match min_len[*nt as usize] {
                    usize::MAX => None,
                    n => Some(acc + n),
                },
            });
            if let Some(total) = total {
                if total < min_len[r.lhs as usize] {
                    min_len[r.lhs as usize] = total;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    Grammar {
        rules,
        by_lhs,
        min_len,
    }
}

/// Word categories a prediction may ask the editor to expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    NounSingular,
    NounPlural,
    ProperName,
    TvThirdSingular,
    TvPlural,
    TvPastParticiple,
    Number,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::NounSingular => "noun-singular",
            Category::NounPlural => "noun-plural",
            Category::ProperName => "proper-name",
            Category::TvThirdSingular => "tv-third-singular",
            Category::TvPlural => "tv-plural",
            Category::TvPastParticiple => "tv-past-participle",
            Category::Number => "number",
        }
    }

    fn lexical(self) -> Option<(WordClass, FormKey)> {
        Some(match self {
            Category::NounSingular => (WordClass::Noun, FormKey::Singular),
            Category::NounPlural => (WordClass::Noun, FormKey::Plural),
            Category::ProperName => (WordClass::ProperName, FormKey::Name),
            Category::TvThirdSingular => (WordClass::TransitiveVerb, FormKey::ThirdSingular),
            Category::TvPlural => (WordClass::TransitiveVerb, FormKey::Plural),
            Category::TvPastParticiple => (WordClass::TransitiveVerb, FormKey::PastParticiple),
            Category::Number => return None,
        })
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Inclusive bounds on the numbers admitted at a position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NumberRange {
    pub min: u8,
    pub max: u8,
}

/// The tokens that may come next.
///
/// `numbers` is present exactly when `categories` contains `Number`; it
/// narrows the range where the grammar forbids 0 ("less than 0").
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub function_words: BTreeSet<FunctionWord>,
    pub categories: BTreeSet<Category>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numbers: Option<NumberRange>,
}

impl Prediction {
    pub(crate) fn from_terminals(terminals: impl IntoIterator<Item = Terminal>) -> Prediction {
        let mut p = Prediction::default();
        let (mut zero, mut one, mut many) = (false, false, false);
        for t in terminals {
            let category = match t {
                Terminal::Word(w) => {
                    p.function_words.insert(w);
                    continue;
                }
                Terminal::NounSg => Category::NounSingular,
                Terminal::NounPl => Category::NounPlural,
                Terminal::ProperName => Category::ProperName,
                Terminal::Tv3sg => Category::TvThirdSingular,
                Terminal::TvPl => Category::TvPlural,
                Terminal::TvPp => Category::TvPastParticiple,
                Terminal::NumZero => {
                    zero = true;
                    Category::Number
                }
                Terminal::NumOne => {
                    one = true;
                    Category::Number
                }
                Terminal::NumMany => {
                    many = true;
                    Category::Number
                }
            };
            p.categories.insert(category);
        }
        if zero || one || many {
            debug_assert!(!(zero && many && !one), "number classes must be contiguous");
            let min = if zero { 0 } else if one { 1 } else { 2 };
            let max = if many { MAX_NUMBER } else if one { 1 } else { 0 };
            p.numbers = Some(NumberRange { min, max });
        }
        p
    }

    pub fn is_empty(&self) -> bool {
        self.function_words.is_empty() && self.categories.is_empty()
    }

    /// Whether a concrete token would be accepted at this position.
    pub fn admits(&self, token: &Token) -> bool {
        match &token.kind {
            TokenKind::FunctionWord { word } => self.function_words.contains(word),
            TokenKind::Number { value } => self
                .numbers
                .is_some_and(|r| (r.min..=r.max).contains(value)),
            TokenKind::Lexical {
                word_class, form, ..
            } => self
                .categories
                .iter()
                .any(|c| c.lexical() == Some((*word_class, *form))),
        }
    }

    /// Concrete surface words for display, function words first, then
    /// lexicon words by category. Numbers are left as a category.
    pub fn expand(&self, lexicon: &Lexicon) -> Vec<String> {
        let mut out: Vec<String> = self
            .function_words
            .iter()
            .map(|w| w.as_str().to_string())
            .collect();
        for category in &self.categories {
            if let Some((class, form)) = category.lexical() {
                out.extend(
                    lexicon
                        .words_of_class(class)
                        .filter_map(|e| e.form(form).map(str::to_string)),
                );
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("syntax error at position {position}")]
    Syntax {
        position: usize,
        prediction: Prediction,
    },
    #[error("sentence has {0} parses")]
    Ambiguous(u64),
    #[error("enumeration limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("cannot render: {0}")]
    Unrenderable(String),
}

impl GrammarError {
    pub fn code(&self) -> &'static str {
        match self {
            GrammarError::Syntax { .. } => "syntax-error",
            GrammarError::Ambiguous(_) => "ambiguous",
            GrammarError::LimitExceeded(_) => "limit-exceeded",
            GrammarError::Unrenderable(_) => "unrenderable",
        }
    }
}
