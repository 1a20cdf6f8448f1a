use serde::Serialize;

use super::{GrammarError, Tag, GRAMMAR};
use crate::lexicon::{FormKey, FunctionWord, Lexicon, Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SentenceAst {
    Declarative { subject: Subject, vp: Vp },
    WhQuestion { class: ClassTerm, vp: Vp },
    YnQuestion { individual: String, class: ClassTerm },
}

impl SentenceAst {
    pub fn is_question(&self) -> bool {
        !matches!(self, SentenceAst::Declarative { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantifier {
    Every,
    No,
    /// "a" / "an"
    Indefinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subject {
    Quantified(Quantifier, ClassTerm),
    Individual(String),
}

/// A noun with an optional relative phrase attached to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassTerm {
    pub noun: String,
    pub relative: Option<Box<Vp>>,
}

impl ClassTerm {
    pub fn noun(noun: &str) -> ClassTerm {
        ClassTerm {
            noun: noun.to_string(),
            relative: None,
        }
    }

    pub fn with_relative(noun: &str, vp: Vp) -> ClassTerm {
        ClassTerm {
            noun: noun.to_string(),
            relative: Some(Box::new(vp)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Modality {
    Can,
    Must,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Vp {
    IsA {
        negated: bool,
        class: ClassTerm,
    },
    Verb {
        negated: bool,
        verb: String,
        object: Object,
    },
    Passive {
        verb: String,
        agent: String,
    },
    Modal {
        modality: Modality,
        verb: String,
        object: Object,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountKind {
    AtMost,
    AtLeast,
    Exactly,
    MoreThan,
    LessThan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Object {
    Exists(ClassTerm),
    NoneOf(ClassTerm),
    Individual(String),
    Count {
        kind: CountKind,
        n: u8,
        class: ClassTerm,
    },
}

/// Generic derivation tree; leaves index into the token slice.
pub(crate) enum Tree {
    Leaf(usize),
    Node { rule: usize, children: Vec<Tree> },
}

impl Tree {
    fn tag(&self) -> Tag {
        match self {
            Tree::Node { rule, .. } => GRAMMAR.rules[*rule].tag,
            Tree::Leaf(_) => unreachable!("leaf has no production"),
        }
    }

    fn child(&self, i: usize) -> &Tree {
        match self {
            Tree::Node { children, .. } => &children[i],
            Tree::Leaf(_) => unreachable!("leaf has no children"),
        }
    }

    fn len(&self) -> usize {
        match self {
            Tree::Node { children, .. } => children.len(),
            Tree::Leaf(_) => 0,
        }
    }
}

struct Reader<'a> {
    tokens: &'a [Token],
}

impl Reader<'_> {
    fn token(&self, t: &Tree) -> &Token {
        match t {
            Tree::Leaf(i) => &self.tokens[*i],
            Tree::Node { .. } => unreachable!("expected a token"),
        }
    }

    fn lemma(&self, t: &Tree) -> String {
        self.token(t)
            .lemma()
            .expect("grammar only places lexical tokens here")
            .to_string()
    }

    fn number(&self, t: &Tree) -> u8 {
        match self.token(t).kind {
            TokenKind::Number { value } => value,
            _ => unreachable!("expected a number"),
        }
    }

    fn sentence(&self, t: &Tree) -> SentenceAst {
        match t.tag() {
            Tag::Declarative => SentenceAst::Declarative {
                subject: self.subject(t.child(0)),
                vp: self.vp(t.child(1)),
            },
            Tag::Question => {
                let q = t.child(0);
                match q.tag() {
                    Tag::WhQuestion => SentenceAst::WhQuestion {
                        class: self.class_term(q.child(1)),
                        vp: self.vp(q.child(2)),
                    },
                    Tag::YnQuestion => SentenceAst::YnQuestion {
                        individual: self.lemma(q.child(1)),
                        class: self.class_term(q.child(3)),
                    },
                    other => unreachable!("{other:?}"),
                }
            }
            other => unreachable!("{other:?}"),
        }
    }

    fn subject(&self, t: &Tree) -> Subject {
        match t.tag() {
            Tag::SubjectEvery => Subject::Quantified(Quantifier::Every, self.class_term(t.child(1))),
            Tag::SubjectNo => Subject::Quantified(Quantifier::No, self.class_term(t.child(1))),
            Tag::SubjectIndefinite => {
                Subject::Quantified(Quantifier::Indefinite, self.class_term(t.child(1)))
            }
            Tag::SubjectName => Subject::Individual(self.lemma(t.child(0))),
            other => unreachable!("{other:?}"),
        }
    }

    fn class_term(&self, t: &Tree) -> ClassTerm {
        let noun = self.lemma(t.child(0));
        match t.tag() {
            Tag::Noun => ClassTerm {
                noun,
                relative: None,
            },
            Tag::NounWithRelative => ClassTerm {
                noun,
                relative: Some(Box::new(self.vp(t.child(2)))),
            },
            other => unreachable!("{other:?}"),
        }
    }

    fn vp(&self, t: &Tree) -> Vp {
        let last = t.len() - 1;
        match t.tag() {
            // "is a C" / "are C"
            Tag::IsA => Vp::IsA {
                negated: false,
                class: self.class_term(t.child(last)),
            },
            Tag::IsNotA => Vp::IsA {
                negated: true,
                class: self.class_term(t.child(last)),
            },
            Tag::Verb => Vp::Verb {
                negated: false,
                verb: self.lemma(t.child(0)),
                object: self.object(t.child(1)),
            },
            Tag::NotVerb => Vp::Verb {
                negated: true,
                verb: self.lemma(t.child(2)),
                object: self.object(t.child(3)),
            },
            Tag::Passive => Vp::Passive {
                verb: self.lemma(t.child(1)),
                agent: self.lemma(t.child(3)),
            },
            Tag::Modal => {
                let modality = match self.token(t.child(0).child(0)).function_word() {
                    Some(FunctionWord::Can) => Modality::Can,
                    _ => Modality::Must,
                };
                Vp::Modal {
                    modality,
                    verb: self.lemma(t.child(1)),
                    object: self.object(t.child(2)),
                }
            }
            other => unreachable!("{other:?}"),
        }
    }

    fn object(&self, t: &Tree) -> Object {
        match t.tag() {
            Tag::ObjectIndefinite => Object::Exists(self.class_term(t.child(1))),
            Tag::ObjectNone => Object::NoneOf(self.class_term(t.child(1))),
            Tag::ObjectName => Object::Individual(self.lemma(t.child(0))),
            Tag::ObjectCount => {
                let Tag::Quant(kind) = t.child(0).tag() else {
                    unreachable!()
                };
                let count = t.child(1);
                Object::Count {
                    kind,
                    n: self.number(count.child(0)),
                    class: self.class_term(count.child(1)),
                }
            }
            Tag::ObjectLessThan => {
                let count = t.child(2);
                Object::Count {
                    kind: CountKind::LessThan,
                    n: self.number(count.child(0)),
                    class: self.class_term(count.child(1)),
                }
            }
            other => unreachable!("{other:?}"),
        }
    }
}

pub(crate) fn from_tree(tree: &Tree, tokens: &[Token]) -> SentenceAst {
    Reader { tokens }.sentence(tree)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Agr {
    Sg,
    Pl,
}

struct Writer<'a> {
    lexicon: &'a Lexicon,
    out: Vec<Token>,
}

impl Writer<'_> {
    fn word(&mut self, w: FunctionWord) {
        self.out.push(Token::function(w));
    }

    fn lexical(&mut self, lemma: &str, form: FormKey) -> Result<(), GrammarError> {
        let token = self
            .lexicon
            .token(lemma, form)
            .ok_or_else(|| GrammarError::Unrenderable(format!("no {} of `{lemma}`", form.as_str())))?;
        self.out.push(token);
        Ok(())
    }

    fn article_for(&self, noun: &str) -> FunctionWord {
        let starts_with_vowel = self
            .lexicon
            .get(noun)
            .and_then(|e| e.form(FormKey::Singular))
            .and_then(|s| s.chars().next())
            .is_some_and(|c| "aeiou".contains(c));
        if starts_with_vowel {
            FunctionWord::An
        } else {
            FunctionWord::A
        }
    }

    fn sentence(&mut self, ast: &SentenceAst) -> Result<(), GrammarError> {
        match ast {
            SentenceAst::Declarative { subject, vp } => {
                match subject {
                    Subject::Quantified(q, class) => {
                        let det = match q {
                            Quantifier::Every => FunctionWord::Every,
                            Quantifier::No => FunctionWord::No,
                            Quantifier::Indefinite => self.article_for(&class.noun),
                        };
                        self.word(det);
                        self.class_term(class, Agr::Sg)?;
                    }
                    Subject::Individual(p) => self.lexical(p, FormKey::Name)?,
                }
                self.vp(vp, Agr::Sg)?;
                self.word(FunctionWord::Period);
            }
            SentenceAst::WhQuestion { class, vp } => {
                self.word(FunctionWord::Which);
                self.class_term(class, Agr::Pl)?;
                self.vp(vp, Agr::Pl)?;
                self.word(FunctionWord::QuestionMark);
            }
            SentenceAst::YnQuestion { individual, class } => {
                self.word(FunctionWord::Is);
                self.lexical(individual, FormKey::Name)?;
                self.word(self.article_for(&class.noun));
                self.class_term(class, Agr::Sg)?;
                self.word(FunctionWord::QuestionMark);
            }
        }
        Ok(())
    }

    fn class_term(&mut self, c: &ClassTerm, agr: Agr) -> Result<(), GrammarError> {
        let form = match agr {
            Agr::Sg => FormKey::Singular,
            Agr::Pl => FormKey::Plural,
        };
        self.lexical(&c.noun, form)?;
        if let Some(rel) = &c.relative {
            self.word(FunctionWord::That);
            self.vp(rel, agr)?;
        }
        Ok(())
    }

    fn vp(&mut self, vp: &Vp, agr: Agr) -> Result<(), GrammarError> {
        let copula = match agr {
            Agr::Sg => FunctionWord::Is,
            Agr::Pl => FunctionWord::Are,
        };
        match vp {
            Vp::IsA { negated, class } => {
                self.word(copula);
                if *negated {
                    self.word(FunctionWord::Not);
                }
                if agr == Agr::Sg {
                    self.word(self.article_for(&class.noun));
                }
                self.class_term(class, agr)?;
            }
            Vp::Verb {
                negated,
                verb,
                object,
            } => {
                if *negated {
                    self.word(match agr {
                        Agr::Sg => FunctionWord::Does,
                        Agr::Pl => FunctionWord::Do,
                    });
                    self.word(FunctionWord::Not);
                    self.lexical(verb, FormKey::Plural)?;
                } else {
                    let form = match agr {
                        Agr::Sg => FormKey::ThirdSingular,
                        Agr::Pl => FormKey::Plural,
                    };
                    self.lexical(verb, form)?;
                }
                self.object(object)?;
            }
            Vp::Passive { verb, agent } => {
                self.word(copula);
                self.lexical(verb, FormKey::PastParticiple)?;
                self.word(FunctionWord::By);
                self.lexical(agent, FormKey::Name)?;
            }
            Vp::Modal {
                modality,
                verb,
                object,
            } => {
                self.word(match modality {
                    Modality::Can => FunctionWord::Can,
                    Modality::Must => FunctionWord::Must,
                });
                self.lexical(verb, FormKey::Plural)?;
                self.object(object)?;
            }
        }
        Ok(())
    }

    fn object(&mut self, o: &Object) -> Result<(), GrammarError> {
        match o {
            Object::Exists(c) => {
                self.word(self.article_for(&c.noun));
                self.class_term(c, Agr::Sg)?;
            }
            Object::NoneOf(c) => {
                self.word(FunctionWord::No);
                self.class_term(c, Agr::Sg)?;
            }
            Object::Individual(p) => self.lexical(p, FormKey::Name)?,
            Object::Count { kind, n, class } => {
                use FunctionWord as F;
                let words: &[FunctionWord] = match kind {
                    CountKind::AtMost => &[F::At, F::Most],
                    CountKind::AtLeast => &[F::At, F::Least],
                    CountKind::Exactly => &[F::Exactly],
                    CountKind::MoreThan => &[F::More, F::Than],
                    CountKind::LessThan => &[F::Less, F::Than],
                };
                if *kind == CountKind::LessThan && *n == 0 {
                    return Err(GrammarError::Unrenderable("less than 0".into()));
                }
                if *n > crate::lexicon::MAX_NUMBER {
                    return Err(GrammarError::Unrenderable(format!("number {n}")));
                }
                for w in words {
                    self.word(*w);
                }
                self.out.push(Token::number(*n));
                self.class_term(class, if *n == 1 { Agr::Sg } else { Agr::Pl })?;
            }
        }
        Ok(())
    }
}

/// Linearizes a tree back into tokens, choosing "a"/"an" by the first
/// letter of the noun and inflecting for agreement.
pub fn render(ast: &SentenceAst, lexicon: &Lexicon) -> Result<Vec<Token>, GrammarError> {
    let mut w = Writer {
        lexicon,
        out: Vec::new(),
    };
    w.sentence(ast)?;
    Ok(w.out)
}
