#![allow(dead_code)]

use cnlwiki_core::reasoner::Ontology;
use cnlwiki_core::translator::{Axiom, ClassExpr};
use rand::rngs::StdRng;
use rand::Rng;

pub struct Vocabulary {
    pub classes: &'static [&'static str],
    pub roles: &'static [&'static str],
    pub individuals: &'static [&'static str],
    pub max_axioms: usize,
}

/// At most 3 classes, 2 roles, 3 individuals, 6 axioms.
pub const SMALL: Vocabulary = Vocabulary {
    classes: &["a", "b", "c"],
    roles: &["r", "s"],
    individuals: &["i", "j", "k"],
    max_axioms: 6,
};

pub const TINY: Vocabulary = Vocabulary {
    classes: &["a", "b"],
    roles: &["r"],
    individuals: &["i", "j"],
    max_axioms: 4,
};

fn pick<'a>(rng: &mut StdRng, items: &[&'a str]) -> &'a str {
    items[rng.gen_range(0..items.len())]
}

/// Cardinalities stay at or below 2.
pub fn random_class(rng: &mut StdRng, v: &Vocabulary, depth: u32) -> ClassExpr {
    let choice = if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..10) };
    let role = pick(rng, v.roles);
    match choice {
        0 | 1 => ClassExpr::atomic(pick(rng, v.classes)),
        2 => ClassExpr::has_value(role, pick(rng, v.individuals)),
        3 => ClassExpr::not(random_class(rng, v, depth - 1)),
        4 => ClassExpr::and(random_class(rng, v, depth - 1), random_class(rng, v, depth - 1)),
        5 => ClassExpr::exists(role, random_class(rng, v, depth - 1)),
        6 => ClassExpr::forall(role, random_class(rng, v, depth - 1)),
        7 => ClassExpr::at_least(rng.gen_range(0..=2), role, random_class(rng, v, depth - 1)),
        8 => ClassExpr::at_most(rng.gen_range(0..=2), role, random_class(rng, v, depth - 1)),
        _ => ClassExpr::Top,
    }
}

pub fn random_axiom(rng: &mut StdRng, v: &Vocabulary) -> Axiom {
    match rng.gen_range(0..3) {
        0 => Axiom::sub_class_of(random_class(rng, v, 2), random_class(rng, v, 2)),
        1 => Axiom::class_assertion(random_class(rng, v, 2), pick(rng, v.individuals)),
        _ => Axiom::role_assertion(
            pick(rng, v.roles),
            pick(rng, v.individuals),
            pick(rng, v.individuals),
        ),
    }
}

pub fn random_ontology(rng: &mut StdRng, v: &Vocabulary) -> Ontology {
    let n = rng.gen_range(1..=v.max_axioms);
    Ontology::from_axioms((0..n).map(|_| random_axiom(rng, v)))
}

pub fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/geography")
}

pub fn geography() -> cnlwiki_core::wiki::WikiState {
    cnlwiki_core::wiki::WikiState::load(&fixture_dir()).unwrap()
}

/// Every function word, every lexicon form and the given numbers.
pub fn candidate_tokens(
    lexicon: &cnlwiki_core::lexicon::Lexicon,
    numbers: &[u8],
) -> Vec<cnlwiki_core::lexicon::Token> {
    use cnlwiki_core::lexicon::{FunctionWord, Token};
    let mut out: Vec<Token> = FunctionWord::ALL.iter().map(|&w| Token::function(w)).collect();
    for entry in lexicon.entries() {
        for key in entry.word_class.form_keys() {
            out.push(lexicon.token(&entry.lemma, *key).unwrap());
        }
    }
    out.extend(numbers.iter().map(|&n| Token::number(n)));
    out
}

/// A random accepted sentence, built by following the predictor. Walks
/// longer than `max_len` are restarted.
pub fn random_sentence(
    rng: &mut StdRng,
    candidates: &[cnlwiki_core::lexicon::Token],
    declarative: bool,
    max_len: usize,
) -> Vec<cnlwiki_core::lexicon::Token> {
    use cnlwiki_core::grammar::predict_next;
    use cnlwiki_core::lexicon::FunctionWord;
    loop {
        let mut tokens = Vec::new();
        loop {
            let p = predict_next(&tokens);
            if p.is_empty() || tokens.len() > max_len {
                break;
            }
            let options: Vec<_> = candidates
                .iter()
                .filter(|t| p.admits(t))
                .filter(|t| {
                    !(declarative
                        && tokens.is_empty()
                        && matches!(t.function_word(), Some(FunctionWord::Which | FunctionWord::Is)))
                })
                .collect();
            tokens.push(options[rng.gen_range(0..options.len())].clone());
        }
        if tokens.len() <= max_len {
            return tokens;
        }
    }
}

/// The fixture's words with no statements.
pub fn vocabulary_only() -> cnlwiki_core::wiki::WikiState {
    let mut w = cnlwiki_core::wiki::WikiState::new();
    for entry in geography().lexicon().entries() {
        w.add_word(entry.clone()).unwrap();
    }
    w
}

/// Applies one random add, comment, remove or reassert. Returns a short
/// description of what was attempted.
pub fn random_op(
    rng: &mut StdRng,
    wiki: &mut cnlwiki_core::wiki::WikiState,
    candidates: &[cnlwiki_core::lexicon::Token],
) -> String {
    use cnlwiki_core::lexicon::detokenize;
    use cnlwiki_core::wiki::Status;
    let articles: Vec<String> = wiki.article_names().map(str::to_string).collect();
    let article = articles[rng.gen_range(0..articles.len())].clone();
    let ids: Vec<u64> = wiki.statements().map(|s| s.id).collect();
    let conflicts: Vec<u64> = wiki
        .statements()
        .filter(|s| s.status == Status::Conflict)
        .map(|s| s.id)
        .collect();
    match rng.gen_range(0..100) {
        0..=54 => {
            let text = detokenize(&random_sentence(rng, candidates, true, 10));
            let s = wiki.add_statement(&article, &text).unwrap();
            format!("add {} -> {}", s.text, s.status)
        }
        55..=59 => {
            wiki.add_comment(&article, "a remark").unwrap();
            "comment".into()
        }
        60..=84 if !ids.is_empty() => {
            let id = ids[rng.gen_range(0..ids.len())];
            wiki.remove_statement(id).unwrap();
            format!("remove {id}")
        }
        _ if !conflicts.is_empty() => {
            let id = conflicts[rng.gen_range(0..conflicts.len())];
            let s = wiki.reassert_statement(id).unwrap();
            format!("reassert {id} -> {}", s.status)
        }
        _ => {
            let missing = wiki.next_id() + 7;
            assert_eq!(wiki.reassert_statement(missing).unwrap_err().code(), "unknown-statement");
            "reassert missing".into()
        }
    }
}
