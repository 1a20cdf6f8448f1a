//! Core of a controlled-English ontology wiki.
//!
//! Sentences are tokenized against a user-built [`lexicon`], parsed and
//! predicted by the [`grammar`] chart parser, mapped to description-logic
//! axioms by the [`translator`], and admitted into the ontology only when the
//! [`reasoner`] finds the result consistent ([`wiki`]).

pub mod grammar;
pub mod lexicon;
pub mod reasoner;
pub mod translator;
pub mod wiki;
