mod common;

use cnlwiki_core::grammar::parse;
use cnlwiki_core::lexicon::{detokenize, FunctionWord, Lexicon, TokenKind, WordClass};
use cnlwiki_core::translator::{
    anonymous_individual, translate, verbalize_atomic, Axiom, ClassExpr, NameKind,
    TranslationResult,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn lemmas(lexicon: &Lexicon, class: WordClass) -> Vec<String> {
    lexicon.words_of_class(class).map(|e| e.lemma.clone()).collect()
}

fn atomic_axiom(lexicon: &Lexicon, kind: u8, a: usize, b: usize, c: usize) -> Axiom {
    let nouns = lemmas(lexicon, WordClass::Noun);
    let names = lemmas(lexicon, WordClass::ProperName);
    let verbs = lemmas(lexicon, WordClass::TransitiveVerb);
    match kind % 3 {
        0 => Axiom::sub_class_of(
            ClassExpr::atomic(&nouns[a % nouns.len()]),
            ClassExpr::atomic(&nouns[b % nouns.len()]),
        ),
        1 => Axiom::class_assertion(
            ClassExpr::atomic(&nouns[a % nouns.len()]),
            &names[b % names.len()],
        ),
        _ => Axiom::role_assertion(
            &verbs[c % verbs.len()],
            &names[a % names.len()],
            &names[b % names.len()],
        ),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn verbalization_round_trips(kind in 0u8..3, a in 0usize..50, b in 0usize..50, c in 0usize..50) {
        let lexicon = common::geography().lexicon().clone();
        let axiom = atomic_axiom(&lexicon, kind, a, b, c);
        let tokens = verbalize_atomic(&axiom, &lexicon).unwrap();
        let ast = parse(&tokens).unwrap();
        prop_assert_eq!(translate(&ast, 1).unwrap(), TranslationResult::Blue(vec![axiom]));
    }

    #[test]
    fn translation_is_deterministic_and_in_the_fragment(seed in any::<u64>(), id in 1u64..1000) {
        let lexicon = common::geography().lexicon().clone();
        let candidates = common::candidate_tokens(&lexicon, &[0, 1, 2, 3]);
        let s = common::random_sentence(&mut StdRng::seed_from_u64(seed), &candidates, true, 14);
        let ast = parse(&s).unwrap();
        let first = translate(&ast, id).unwrap();
        prop_assert_eq!(&first, &translate(&ast, id).unwrap());
        let TranslationResult::Blue(axioms) = first else { return Ok(()) };
        prop_assert!(!axioms.is_empty());
        for axiom in &axioms {
            let mut ok = true;
            axiom.for_each_name(&mut |kind, name| {
                let class = lexicon.get(name).map(|e| e.word_class);
                ok &= match kind {
                    NameKind::Class => class == Some(WordClass::Noun),
                    NameKind::Role => class == Some(WordClass::TransitiveVerb),
                    NameKind::Individual => {
                        class == Some(WordClass::ProperName) || name == anonymous_individual(id)
                    }
                };
            });
            prop_assert!(ok, "{}", axiom);
        }
    }

    #[test]
    fn counts_are_normalized(seed in any::<u64>()) {
        let lexicon = common::geography().lexicon().clone();
        let candidates = common::candidate_tokens(&lexicon, &[1, 2, 3]);
        let s = common::random_sentence(&mut StdRng::seed_from_u64(seed), &candidates, true, 14);
        let TranslationResult::Blue(axioms) = translate(&parse(&s).unwrap(), 1).unwrap() else {
            return Ok(());
        };
        let text: String = axioms.iter().map(|a| a.to_string()).collect();
        for (i, t) in s.iter().enumerate() {
            let number = |k: usize| match &s[k].kind {
                TokenKind::Number { value } => u32::from(*value),
                _ => unreachable!("a number follows"),
            };
            match t.function_word() {
                Some(FunctionWord::Exactly) => {
                    let n = number(i + 1);
                    prop_assert!(text.contains(&format!("ObjectMinCardinality({n} ")), "{}", detokenize(&s));
                    prop_assert!(text.contains(&format!("ObjectMaxCardinality({n} ")), "{}", detokenize(&s));
                }
                Some(FunctionWord::More) => {
                    let expected = format!("ObjectMinCardinality({} ", number(i + 2) + 1);
                    prop_assert!(text.contains(&expected));
                }
                Some(FunctionWord::Less) => {
                    let expected = format!("ObjectMaxCardinality({} ", number(i + 2) - 1);
                    prop_assert!(text.contains(&expected));
                }
                _ => {}
            }
        }
    }
}
