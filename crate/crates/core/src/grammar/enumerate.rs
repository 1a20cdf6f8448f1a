//! Exhaustive generation of accepted sentences by leftmost derivation.
//!
//! This walks the rule table top-down and never touches the chart, so it
//! can serve as an independent oracle for the parser and the predictor.

use std::collections::{HashMap, HashSet};

use super::{GrammarError, Sym, Terminal, GRAMMAR};
use crate::lexicon::{detokenize, FormKey, FunctionWord, Lexicon, Token, WordClass};

/// Longest sentence `enumerate_sentences` will generate.
pub const MAX_ENUMERATION_LENGTH: usize = 14;

struct Generator {
    max_len: usize,
    fills: HashMap<Terminal, Vec<Token>>,
}

impl Generator {
    fn new(max_len: usize, lexicon: &Lexicon, numbers: &[u8]) -> Generator {
        let mut fills: HashMap<Terminal, Vec<Token>> = HashMap::new();
        for w in FunctionWord::ALL {
            fills.insert(Terminal::Word(w), vec![Token::function(w)]);
        }
        let lexical = [
            (Terminal::NounSg, WordClass::Noun, FormKey::Singular),
            (Terminal::NounPl, WordClass::Noun, FormKey::Plural),
            (Terminal::ProperName, WordClass::ProperName, FormKey::Name),
            (Terminal::Tv3sg, WordClass::TransitiveVerb, FormKey::ThirdSingular),
            (Terminal::TvPl, WordClass::TransitiveVerb, FormKey::Plural),
            (Terminal::TvPp, WordClass::TransitiveVerb, FormKey::PastParticiple),
        ];
        for (t, class, form) in lexical {
            let tokens = lexicon
                .words_of_class(class)
                .filter_map(|e| lexicon.token(&e.lemma, form))
                .collect();
            fills.insert(t, tokens);
        }
        let mut nums: Vec<u8> = numbers.to_vec();
        nums.sort_unstable();
        nums.dedup();
        for n in nums {
            let t = Terminal::of(&Token::number(n));
            fills.entry(t).or_default().push(Token::number(n));
        }
        Generator { max_len, fills }
    }

    /// Calls `emit` once per leftmost derivation. `pending` is a stack whose
    /// top is the next symbol to expand; `pending_min` is the shortest
    /// yield of everything on it.
    fn walk(
        &self,
        out: &mut Vec<Token>,
        pending: &mut Vec<Sym>,
        pending_min: usize,
        emit: &mut dyn FnMut(&[Token]) -> bool,
    ) -> bool {
        let Some(sym) = pending.pop() else {
            return emit(out);
        };
        let rest_min = pending_min - GRAMMAR.min_len_of(sym);
        let keep_going = match sym {
            Sym::T(t) => {
                let mut ok = true;
                if out.len() + 1 + rest_min <= self.max_len {
                    for token in self.fills.get(&t).map(Vec::as_slice).unwrap_or(&[]) {
                        out.push(token.clone());
                        ok = self.walk(out, pending, rest_min, emit);
                        out.pop();
                        if !ok {
                            break;
                        }
                    }
                }
                ok
            }
            Sym::N(nt) => {
                let mut ok = true;
                for &r in GRAMMAR.rules_for(nt) {
                    let rhs = &GRAMMAR.rules[r].rhs;
                    let rhs_min: usize = rhs.iter().map(|s| GRAMMAR.min_len_of(*s)).sum();
                    if out.len() + rest_min + rhs_min > self.max_len {
                        continue;
                    }
                    pending.extend(rhs.iter().rev());
                    ok = self.walk(out, pending, rest_min + rhs_min, emit);
                    pending.truncate(pending.len() - rhs.len());
                    if !ok {
                        break;
                    }
                }
                ok
            }
        };
        pending.push(sym);
        keep_going
    }

    fn run(&self, emit: &mut dyn FnMut(&[Token]) -> bool) {
        let start = Sym::N(super::Nt::Sentence);
        let mut pending = vec![start];
        let min = GRAMMAR.min_len_of(start);
        if min <= self.max_len {
            self.walk(&mut Vec::new(), &mut pending, min, emit);
        }
    }
}

/// Whether some accepted sentence starts with `prefix`, decided by a
/// top-down search over leftmost derivations.
pub fn is_viable_prefix(prefix: &[Token]) -> bool {
    let input: Vec<Terminal> = prefix.iter().map(Terminal::of).collect();
    let bound = input.len() + MAX_ENUMERATION_LENGTH;
    let start = Sym::N(super::Nt::Sentence);
    viable(&input, 0, &mut vec![start], GRAMMAR.min_len_of(start), bound)
}

fn viable(input: &[Terminal], matched: usize, pending: &mut Vec<Sym>, pending_min: usize, bound: usize) -> bool {
    if matched == input.len() {
        return true;
    }
    if matched + pending_min > bound {
        return false;
    }
    let Some(sym) = pending.pop() else {
        return false;
    };
    let rest_min = pending_min - GRAMMAR.min_len_of(sym);
    let found = match sym {
        Sym::T(t) => t == input[matched] && viable(input, matched + 1, pending, rest_min, bound),
        Sym::N(nt) => GRAMMAR.rules_for(nt).iter().any(|&r| {
            let rhs = &GRAMMAR.rules[r].rhs;
            let rhs_min: usize = rhs.iter().map(|s| GRAMMAR.min_len_of(*s)).sum();
            pending.extend(rhs.iter().rev());
            let ok = viable(input, matched, pending, rest_min + rhs_min, bound);
            pending.truncate(pending.len() - rhs.len());
            ok
        }),
    };
    pending.push(sym);
    found
}

fn check_length(max_len: usize) -> Result<(), GrammarError> {
    if max_len > MAX_ENUMERATION_LENGTH {
        return Err(GrammarError::LimitExceeded(format!(
            "length {max_len} exceeds {MAX_ENUMERATION_LENGTH}"
        )));
    }
    Ok(())
}

/// Every accepted token sequence of at most `max_len` tokens whose lexical
/// slots are filled from `lexicon` and number slots from `numbers`.
/// Fails with `LimitExceeded` once more than `limit` sentences are found.
pub fn enumerate_sentences(
    max_len: usize,
    lexicon: &Lexicon,
    numbers: &[u8],
    limit: usize,
) -> Result<Vec<Vec<Token>>, GrammarError> {
    check_length(max_len)?;
    let generator = Generator::new(max_len, lexicon, numbers);
    let mut seen: HashSet<String> = HashSet::new();
    let mut sentences = Vec::new();
    let mut overflow = false;
    generator.run(&mut |tokens| {
        if seen.insert(detokenize(tokens)) {
            if sentences.len() == limit {
                overflow = true;
                return false;
            }
            sentences.push(tokens.to_vec());
        }
        true
    });
    if overflow {
        return Err(GrammarError::LimitExceeded(format!(
            "more than {limit} sentences"
        )));
    }
    Ok(sentences)
}

/// Number of leftmost derivations per generated sentence. An unambiguous
/// grammar yields 1 for every key.
pub fn count_derivations(
    max_len: usize,
    lexicon: &Lexicon,
    numbers: &[u8],
) -> Result<HashMap<String, usize>, GrammarError> {
    check_length(max_len)?;
    let mut counts: HashMap<String, usize> = HashMap::new();
    Generator::new(max_len, lexicon, numbers).run(&mut |tokens| {
        *counts.entry(detokenize(tokens)).or_default() += 1;
        true
    });
    Ok(counts)
}
