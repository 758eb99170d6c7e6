//! Nonce treebank generation and language-model evaluation.
//!
//! * [`conllu`]: CoNLL-U parsing, serialization and tree utilities.
//! * [`lexicon`]: inflected-form lookup and phonological hints.
//! * [`context`]: syntactic contexts and replacement candidate pools.
//! * [`generator`]: nonce treebank generation with language rules.
//! * [`scoring`]: sentence scores, orig/nonce ratios and significance tests.
//! * [`probe`]: the two-map dependency probe, its training and decoding.

pub mod conllu;
pub mod context;
pub mod generator;
pub mod lexicon;
pub mod probe;
pub mod scoring;
