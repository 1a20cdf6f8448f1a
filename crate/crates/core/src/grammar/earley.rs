//! Earley chart over the fixed rule table.
//!
//! The grammar has no empty productions, so the chart needs only the three
//! classic operations. Derivations are recovered from the set of completed
//! `(nonterminal, start, end)` spans by memoized counting, which doubles as
//! the ambiguity check.

use std::collections::{HashMap, HashSet};

use super::ast::{self, Tree};
use super::{GrammarError, Nt, Prediction, SentenceAst, Sym, Terminal, GRAMMAR};
use crate::lexicon::Token;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Item {
    rule: usize,
    dot: usize,
    origin: usize,
}

impl Item {
    fn next(&self) -> Option<Sym> {
        GRAMMAR.rules[self.rule].rhs.get(self.dot).copied()
    }
}

#[derive(Default)]
struct ChartSet {
    items: Vec<Item>,
    seen: HashSet<Item>,
}

impl ChartSet {
    fn push(&mut self, item: Item) {
        if self.seen.insert(item) {
            self.items.push(item);
        }
    }
}

struct Chart {
    sets: Vec<ChartSet>,
}

impl Chart {
    /// Runs the chart over `input`, stopping at the first position where
    /// nothing can be scanned. Returns the number of tokens consumed.
    fn run(input: &[Terminal]) -> (Chart, usize) {
        let mut sets: Vec<ChartSet> = Vec::with_capacity(input.len() + 1);
        let mut first = ChartSet::default();
        for &r in GRAMMAR.rules_for(Nt::Sentence) {
            first.push(Item {
                rule: r,
                dot: 0,
                origin: 0,
            });
        }
        sets.push(first);

        for i in 0..=input.len() {
            close(&mut sets, i);
            if i == input.len() {
                break;
            }
            let mut next = ChartSet::default();
            for item in &sets[i].items {
                if item.next() == Some(Sym::T(input[i])) {
                    next.push(Item {
                        dot: item.dot + 1,
                        ..*item
                    });
                }
            }
            if next.items.is_empty() {
                return (Chart { sets }, i);
            }
            sets.push(next);
        }
        (Chart { sets }, input.len())
    }

    fn prediction_at(&self, i: usize) -> Prediction {
        Prediction::from_terminals(self.sets[i].items.iter().filter_map(|it| match it.next() {
            Some(Sym::T(t)) => Some(t),
            _ => None,
        }))
    }

    fn accepts(&self, n: usize) -> bool {
        self.sets.len() == n + 1
            && self.sets[n].items.iter().any(|it| {
                it.origin == 0 && it.next().is_none() && GRAMMAR.rules[it.rule].lhs == Nt::Sentence
            })
    }

    fn completed_spans(&self) -> HashSet<(Nt, usize, usize)> {
        let mut spans = HashSet::new();
        for (end, set) in self.sets.iter().enumerate() {
            for it in &set.items {
                if it.next().is_none() {
                    spans.insert((GRAMMAR.rules[it.rule].lhs, it.origin, end));
                }
            }
        }
        spans
    }
}

/// Predictor and completer to fixpoint on set `i`.
fn close(sets: &mut [ChartSet], i: usize) {
    let mut k = 0;
    while k < sets[i].items.len() {
        let item = sets[i].items[k];
        k += 1;
        match item.next() {
            Some(Sym::N(nt)) => {
                for &r in GRAMMAR.rules_for(nt) {
                    sets[i].push(Item {
                        rule: r,
                        dot: 0,
                        origin: i,
                    });
                }
            }
            Some(Sym::T(_)) => {}
            None => {
                let lhs = GRAMMAR.rules[item.rule].lhs;
                // origin < i always holds without empty productions
                let advanced: Vec<Item> = sets[item.origin]
                    .items
                    .iter()
                    .filter(|p| p.next() == Some(Sym::N(lhs)))
                    .map(|p| Item {
                        dot: p.dot + 1,
                        ..*p
                    })
                    .collect();
                for a in advanced {
                    sets[i].push(a);
                }
            }
        }
    }
}

/// The exact set of tokens that can follow `prefix` in some accepted
/// sentence. Dead prefixes and complete sentences give an empty prediction.
pub fn predict_next(prefix: &[Token]) -> Prediction {
    let input: Vec<Terminal> = prefix.iter().map(Terminal::of).collect();
    let (chart, consumed) = Chart::run(&input);
    if consumed < input.len() {
        return Prediction::default();
    }
    chart.prediction_at(input.len())
}

/// Parses a complete sentence or question into its unique tree.
pub fn parse(tokens: &[Token]) -> Result<SentenceAst, GrammarError> {
    let input: Vec<Terminal> = tokens.iter().map(Terminal::of).collect();
    let (chart, consumed) = Chart::run(&input);
    if consumed < input.len() || !chart.accepts(input.len()) {
        return Err(GrammarError::Syntax {
            position: consumed,
            prediction: chart.prediction_at(consumed),
        });
    }
    let mut forest = Forest::new(&input, chart.completed_spans());
    let count = forest.count_nt(Nt::Sentence, 0, input.len());
    if count != 1 {
        return Err(GrammarError::Ambiguous(count));
    }
    let tree = forest.build_nt(Nt::Sentence, 0, input.len());
    Ok(ast::from_tree(&tree, tokens))
}

/// Number of distinct derivations of `tokens` as a sentence (saturating).
pub fn parse_count(tokens: &[Token]) -> u64 {
    let input: Vec<Terminal> = tokens.iter().map(Terminal::of).collect();
    let (chart, consumed) = Chart::run(&input);
    if consumed < input.len() || !chart.accepts(input.len()) {
        return 0;
    }
    Forest::new(&input, chart.completed_spans()).count_nt(Nt::Sentence, 0, input.len())
}

struct Forest<'a> {
    input: &'a [Terminal],
    spans: HashSet<(Nt, usize, usize)>,
    nt_memo: HashMap<(Nt, usize, usize), u64>,
    seq_memo: HashMap<(usize, usize, usize, usize), u64>,
}

impl<'a> Forest<'a> {
    fn new(input: &'a [Terminal], spans: HashSet<(Nt, usize, usize)>) -> Forest<'a> {
        Forest {
            input,
            spans,
            nt_memo: HashMap::new(),
            seq_memo: HashMap::new(),
        }
    }

    fn count_nt(&mut self, nt: Nt, i: usize, j: usize) -> u64 {
        if !self.spans.contains(&(nt, i, j)) {
            return 0;
        }
        if let Some(&c) = self.nt_memo.get(&(nt, i, j)) {
            return c;
        }
        let mut total = 0u64;
        for &r in GRAMMAR.rules_for(nt) {
            total = total.saturating_add(self.count_seq(r, 0, i, j));
        }
        self.nt_memo.insert((nt, i, j), total);
        total
    }

    /// Derivations of `rhs[k..]` of rule `r` over `input[i..j]`.
    fn count_seq(&mut self, r: usize, k: usize, i: usize, j: usize) -> u64 {
        let rhs_len = GRAMMAR.rules[r].rhs.len();
        if k == rhs_len {
            return u64::from(i == j);
        }
        if j - i < rhs_len - k {
            return 0;
        }
        if let Some(&c) = self.seq_memo.get(&(r, k, i, j)) {
            return c;
        }
        let c = match GRAMMAR.rules[r].rhs[k] {
            Sym::T(t) => {
                if self.input[i] == t {
                    self.count_seq(r, k + 1, i + 1, j)
                } else {
                    0
                }
            }
            Sym::N(nt) => {
                let rest = rhs_len - k - 1;
                let mut total = 0u64;
                for m in i + 1..=j - rest {
                    let head = self.count_nt(nt, i, m);
                    if head > 0 {
                        total =
                            total.saturating_add(head.saturating_mul(self.count_seq(r, k + 1, m, j)));
                    }
                }
                total
            }
        };
        self.seq_memo.insert((r, k, i, j), c);
        c
    }

    fn build_nt(&mut self, nt: Nt, i: usize, j: usize) -> Tree {
        let rule = GRAMMAR
            .rules_for(nt)
            .iter()
            .copied()
            .find(|&r| self.count_seq(r, 0, i, j) > 0)
            .expect("span was counted");
        let mut children = Vec::new();
        self.build_seq(rule, 0, i, j, &mut children);
        Tree::Node { rule, children }
    }

    fn build_seq(&mut self, r: usize, k: usize, i: usize, j: usize, out: &mut Vec<Tree>) {
        let rhs_len = GRAMMAR.rules[r].rhs.len();
        if k == rhs_len {
            return;
        }
        match GRAMMAR.rules[r].rhs[k] {
            Sym::T(_) => {
                out.push(Tree::Leaf(i));
                self.build_seq(r, k + 1, i + 1, j, out);
            }
            Sym::N(nt) => {
                let rest = rhs_len - k - 1;
                let m = (i + 1..=j - rest)
                    .find(|&m| self.count_nt(nt, i, m) > 0 && self.count_seq(r, k + 1, m, j) > 0)
                    .expect("split exists");
                out.push(self.build_nt(nt, i, m));
                self.build_seq(r, k + 1, m, j, out);
            }
        }
    }
}
