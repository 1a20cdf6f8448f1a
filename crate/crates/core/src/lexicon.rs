//! The user-extensible vocabulary of the wiki.
//!
//! Every word carries its surface forms explicitly; nothing is inflected
//! automatically. A surface form maps back to exactly one `(lemma, form)`
//! pair, and no form may shadow a function word or a number.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest number token the grammar accepts.
pub const MAX_NUMBER: u8 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WordClass {
    ProperName,
    Noun,
    TransitiveVerb,
}

impl WordClass {
    pub fn as_str(self) -> &'static str {
        match self {
            WordClass::ProperName => "proper-name",
            WordClass::Noun => "noun",
            WordClass::TransitiveVerb => "transitive-verb",
        }
    }

    pub fn parse(s: &str) -> Option<WordClass> {
        match s {
            "proper-name" => Some(WordClass::ProperName),
            "noun" => Some(WordClass::Noun),
            "transitive-verb" => Some(WordClass::TransitiveVerb),
            _ => None,
        }
    }

    /// The form keys a word of this class must provide, in file order.
    pub fn form_keys(self) -> &'static [FormKey] {
        match self {
            WordClass::ProperName => &[FormKey::Name],
            WordClass::Noun => &[FormKey::Singular, FormKey::Plural],
            WordClass::TransitiveVerb => {
                &[FormKey::ThirdSingular, FormKey::Plural, FormKey::PastParticiple]
            }
        }
    }
}

impl fmt::Display for WordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which inflected form a surface string is. `Plural` is shared by nouns and
/// verbs; the word class disambiguates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKey {
    Name,
    Singular,
    Plural,
    ThirdSingular,
    PastParticiple,
}

impl FormKey {
    pub fn as_str(self) -> &'static str {
        match self {
            FormKey::Name => "name",
            FormKey::Singular => "singular",
            FormKey::Plural => "plural",
            FormKey::ThirdSingular => "third-singular",
            FormKey::PastParticiple => "past-participle",
        }
    }
}

/// The closed set of grammatical words. Declaration order is the order
/// predictions are listed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FunctionWord {
    Every,
    No,
    A,
    An,
    Is,
    Are,
    Not,
    Does,
    Do,
    That,
    By,
    At,
    Most,
    Least,
    Exactly,
    More,
    Less,
    Than,
    Which,
    Can,
    Must,
    Period,
    QuestionMark,
}

impl FunctionWord {
    pub const ALL: [FunctionWord; 23] = [
        FunctionWord::Every,
        FunctionWord::No,
        FunctionWord::A,
        FunctionWord::An,
        FunctionWord::Is,
        FunctionWord::Are,
        FunctionWord::Not,
        FunctionWord::Does,
        FunctionWord::Do,
        FunctionWord::That,
        FunctionWord::By,
        FunctionWord::At,
        FunctionWord::Most,
        FunctionWord::Least,
        FunctionWord::Exactly,
        FunctionWord::More,
        FunctionWord::Less,
        FunctionWord::Than,
        FunctionWord::Which,
        FunctionWord::Can,
        FunctionWord::Must,
        FunctionWord::Period,
        FunctionWord::QuestionMark,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FunctionWord::Every => "every",
            FunctionWord::No => "no",
            FunctionWord::A => "a",
            FunctionWord::An => "an",
            FunctionWord::Is => "is",
            FunctionWord::Are => "are",
            FunctionWord::Not => "not",
            FunctionWord::Does => "does",
            FunctionWord::Do => "do",
            FunctionWord::That => "that",
            FunctionWord::By => "by",
            FunctionWord::At => "at",
            FunctionWord::Most => "most",
            FunctionWord::Least => "least",
            FunctionWord::Exactly => "exactly",
            FunctionWord::More => "more",
            FunctionWord::Less => "less",
            FunctionWord::Than => "than",
            FunctionWord::Which => "which",
            FunctionWord::Can => "can",
            FunctionWord::Must => "must",
            FunctionWord::Period => ".",
            FunctionWord::QuestionMark => "?",
        }
    }

    pub fn parse(s: &str) -> Option<FunctionWord> {
        FunctionWord::ALL.iter().copied().find(|w| w.as_str() == s)
    }
}

impl fmt::Display for FunctionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for FunctionWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Parses a canonical decimal number in `0..=MAX_NUMBER` ("7", not "07").
pub fn parse_number(s: &str) -> Option<u8> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if s.len() > 1 && s.starts_with('0') {
        return None;
    }
    let n: u32 = s.parse().ok()?;
    (n <= MAX_NUMBER as u32).then_some(n as u8)
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-')
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordEntry {
    pub lemma: String,
    pub word_class: WordClass,
    pub forms: BTreeMap<FormKey, String>,
}

impl WordEntry {
    pub fn proper_name(lemma: &str) -> WordEntry {
        WordEntry::new(lemma, WordClass::ProperName, &[lemma])
    }

    pub fn noun(lemma: &str, singular: &str, plural: &str) -> WordEntry {
        WordEntry::new(lemma, WordClass::Noun, &[singular, plural])
    }

    pub fn transitive_verb(
        lemma: &str,
        third_singular: &str,
        plural: &str,
        past_participle: &str,
    ) -> WordEntry {
        WordEntry::new(
            lemma,
            WordClass::TransitiveVerb,
            &[third_singular, plural, past_participle],
        )
    }

    /// Builds an entry from forms listed in `WordClass::form_keys` order.
    /// Missing trailing forms are left out; `validate` reports them.
    pub fn new(lemma: &str, word_class: WordClass, forms: &[&str]) -> WordEntry {
        let forms = word_class
            .form_keys()
            .iter()
            .zip(forms)
            .map(|(k, f)| (*k, f.to_string()))
            .collect();
        WordEntry {
            lemma: lemma.to_string(),
            word_class,
            forms,
        }
    }

    pub fn form(&self, key: FormKey) -> Option<&str> {
        self.forms.get(&key).map(String::as_str)
    }

    fn validate(&self) -> Result<(), LexiconError> {
        let malformed = |why: &str| LexiconError::MalformedForms {
            lemma: self.lemma.clone(),
            reason: why.to_string(),
        };
        if !is_identifier(&self.lemma) {
            return Err(malformed("lemma must be lowercase letters, digits and hyphens"));
        }
        let required = self.word_class.form_keys();
        if self.forms.len() != required.len() || !required.iter().all(|k| self.forms.contains_key(k))
        {
            return Err(malformed("forms do not match the word class"));
        }
        for form in self.forms.values() {
            if form.is_empty() {
                return Err(malformed("empty form"));
            }
            if !is_identifier(form) {
                return Err(malformed("forms must be lowercase letters, digits and hyphens"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum TokenKind {
    FunctionWord {
        word: FunctionWord,
    },
    Number {
        value: u8,
    },
    Lexical {
        word_class: WordClass,
        lemma: String,
        form: FormKey,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
}

impl Token {
    pub fn function(word: FunctionWord) -> Token {
        Token {
            surface: word.as_str().to_string(),
            kind: TokenKind::FunctionWord { word },
        }
    }

    pub fn number(value: u8) -> Token {
        Token {
            surface: value.to_string(),
            kind: TokenKind::Number { value },
        }
    }

    pub fn function_word(&self) -> Option<FunctionWord> {
        match self.kind {
            TokenKind::FunctionWord { word } => Some(word),
            _ => None,
        }
    }

    pub fn lemma(&self) -> Option<&str> {
        match &self.kind {
            TokenKind::Lexical { lemma, .. } => Some(lemma),
            _ => None,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surface)
    }
}

/// Joins tokens with single spaces.
pub fn detokenize(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| t.surface.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("the word `{0}` already exists")]
    DuplicateLemma(String),
    #[error("the form `{form}` is already used by `{owner}`")]
    FormCollision { form: String, owner: String },
    #[error("malformed word `{lemma}`: {reason}")]
    MalformedForms { lemma: String, reason: String },
    #[error("unknown word `{word}` at position {position}")]
    UnknownWord { word: String, position: usize },
    #[error("no word `{0}` in the vocabulary")]
    NoSuchWord(String),
    #[error("vocabulary line {line}: {reason}")]
    BadVocabularyLine { line: usize, reason: String },
}

impl LexiconError {
    pub fn code(&self) -> &'static str {
        match self {
            LexiconError::DuplicateLemma(_) => "duplicate-lemma",
            LexiconError::FormCollision { .. } => "form-collision",
            LexiconError::MalformedForms { .. } => "malformed-forms",
            LexiconError::UnknownWord { .. } => "unknown-word",
            LexiconError::NoSuchWord(_) => "unknown-word",
            LexiconError::BadVocabularyLine { .. } => "load-failure",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, WordEntry>,
    surfaces: HashMap<String, (String, FormKey)>,
}

impl Lexicon {
    pub fn new() -> Lexicon {
        Lexicon::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_word(&mut self, entry: WordEntry) -> Result<(), LexiconError> {
        entry.validate()?;
        if self.entries.contains_key(&entry.lemma) {
            return Err(LexiconError::DuplicateLemma(entry.lemma));
        }
        let mut seen: Vec<&str> = Vec::new();
        for form in entry.forms.values() {
            if FunctionWord::parse(form).is_some() || parse_number(form).is_some() {
                return Err(LexiconError::FormCollision {
                    form: form.clone(),
                    owner: "reserved".to_string(),
                });
            }
            if let Some((owner, _)) = self.surfaces.get(form) {
                return Err(LexiconError::FormCollision {
                    form: form.clone(),
                    owner: owner.clone(),
                });
            }
            // Two forms of one word must differ, otherwise the token is ambiguous.
            if seen.contains(&form.as_str()) {
                return Err(LexiconError::FormCollision {
                    form: form.clone(),
                    owner: entry.lemma.clone(),
                });
            }
            seen.push(form);
        }
        for (key, form) in &entry.forms {
            self.surfaces
                .insert(form.clone(), (entry.lemma.clone(), *key));
        }
        self.entries.insert(entry.lemma.clone(), entry);
        Ok(())
    }

    pub fn remove_word(&mut self, lemma: &str) -> Result<WordEntry, LexiconError> {
        let entry = self
            .entries
            .remove(lemma)
            .ok_or_else(|| LexiconError::NoSuchWord(lemma.to_string()))?;
        for form in entry.forms.values() {
            self.surfaces.remove(form);
        }
        Ok(entry)
    }

    pub fn get(&self, lemma: &str) -> Option<&WordEntry> {
        self.entries.get(lemma)
    }

    pub fn entries(&self) -> impl Iterator<Item = &WordEntry> {
        self.entries.values()
    }

    pub fn words_of_class(&self, class: WordClass) -> impl Iterator<Item = &WordEntry> {
        self.entries.values().filter(move |e| e.word_class == class)
    }

    /// Resolves one surface unit. Function words and numbers win over
    /// lexical forms, although `add_word` keeps them from colliding.
    pub fn lookup(&self, surface: &str) -> Option<TokenKind> {
        if let Some(word) = FunctionWord::parse(surface) {
            return Some(TokenKind::FunctionWord { word });
        }
        if let Some(value) = parse_number(surface) {
            return Some(TokenKind::Number { value });
        }
        let (lemma, form) = self.surfaces.get(surface)?;
        let word_class = self.entries[lemma].word_class;
        Some(TokenKind::Lexical {
            word_class,
            lemma: lemma.clone(),
            form: *form,
        })
    }

    /// Builds the lexical token for a known word form.
    pub fn token(&self, lemma: &str, form: FormKey) -> Option<Token> {
        let entry = self.entries.get(lemma)?;
        let surface = entry.form(form)?.to_string();
        Some(Token {
            surface,
            kind: TokenKind::Lexical {
                word_class: entry.word_class,
                lemma: lemma.to_string(),
                form,
            },
        })
    }

    /// Splits on whitespace. A trailing `.` or `?` glued to the last word is
    /// split off into its own token.
    pub fn tokenize(&self, text: &str) -> Result<Vec<Token>, LexiconError> {
        let mut units: Vec<&str> = text.split_whitespace().collect();
        if let Some(last) = units.last().copied() {
            if last.len() > 1 && (last.ends_with('.') || last.ends_with('?')) {
                let (word, mark) = last.split_at(last.len() - 1);
                units.pop();
                units.push(word);
                units.push(mark);
            }
        }
        units
            .into_iter()
            .enumerate()
            .map(|(position, unit)| {
                self.lookup(unit)
                    .map(|kind| Token {
                        surface: unit.to_string(),
                        kind,
                    })
                    .ok_or_else(|| LexiconError::UnknownWord {
                        word: unit.to_string(),
                        position,
                    })
            })
            .collect()
    }

    /// Reads the tab-separated vocabulary format.
    pub fn from_tsv(text: &str) -> Result<Lexicon, LexiconError> {
        let mut lexicon = Lexicon::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let bad = |reason: &str| LexiconError::BadVocabularyLine {
                line: i + 1,
                reason: reason.to_string(),
            };
            let class = WordClass::parse(fields[0]).ok_or_else(|| bad("unknown word class"))?;
            if fields.len() != 2 + class.form_keys().len() {
                return Err(bad("wrong number of fields"));
            }
            let forms: Vec<&str> = fields[2..].to_vec();
            lexicon.add_word(WordEntry::new(fields[1], class, &forms))?;
        }
        Ok(lexicon)
    }

    /// Writes the vocabulary, one entry per line, sorted by lemma.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for entry in self.entries.values() {
            out.push_str(entry.word_class.as_str());
            out.push('\t');
            out.push_str(&entry.lemma);
            for key in entry.word_class.form_keys() {
                out.push('\t');
                out.push_str(&entry.forms[key]);
            }
            out.push('\n');
        }
        out
    }
}
