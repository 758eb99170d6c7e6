//! Two-map dependency probe.
//!
//! A relation map `L` scores dependency labels for each word vector and a
//! projection `B` places words in a subspace whose Euclidean distances mimic
//! tree path distances. Decoding picks the most root-like word and grows a
//! tree by nearest-neighbour attachment in that subspace.

mod decode;
mod io;
mod model;
mod train;

use std::collections::{BTreeSet, HashMap};

use ndarray::{Array1, Array2};
use rand::Rng;

use crate::conllu::{Sentence, Treebank};

pub use decode::{decode, evaluate, evaluate_trees, predict, DirectionStats, EvalReport};
pub use io::{load_params, read_params, read_reprs, save_params, write_params, write_reprs};
pub use model::{
    distance_loss, gradients, relation_logits, relation_loss, relation_probs, softmax_rows,
    subspace_distance, Gradients,
};
pub use train::{build_examples, train, EpochLog, ProbeExample, TrainConfig, TrainLog};

pub const ROOT_LABEL: &str = "root";

#[derive(Debug, thiserror::Error)]
pub enum ProbeError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unknown relation label `{0}`")]
    UnknownLabel(String),
    #[error("label inventory: {0}")]
    Inventory(String),
    #[error("sentence `{0}`: {1}")]
    Alignment(String, String),
    #[error("no training sentences")]
    EmptyDataset,
    #[error("cannot decode an empty sentence")]
    EmptySentence,
    #[error("{path}: {msg}")]
    Format { path: String, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Dependency relation labels, one of which is the root label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelInventory {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    root: usize,
}

impl LabelInventory {
    pub fn new(labels: Vec<String>) -> Result<Self, ProbeError> {
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(ProbeError::Inventory(format!("duplicate label `{l}`")));
            }
        }
        let root = *index
            .get(ROOT_LABEL)
            .ok_or_else(|| ProbeError::Inventory(format!("missing `{ROOT_LABEL}` label")))?;
        Ok(LabelInventory {
            labels,
            index,
            root,
        })
    }

    /// Sorted union of all DEPREL values plus the root label.
    pub fn from_treebanks<'a>(tbs: impl IntoIterator<Item = &'a Treebank>) -> Self {
        let mut set = BTreeSet::from([ROOT_LABEL.to_owned()]);
        for tb in tbs {
            for s in &tb.sentences {
                set.extend(s.tokens.iter().map(|t| t.deprel.clone()));
            }
        }
        LabelInventory::new(set.into_iter().collect()).expect("root label is present")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.labels[idx]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn root(&self) -> usize {
        self.root
    }
}

/// Word vectors of one sentence, one row per syntactic word.
#[derive(Clone, Debug, PartialEq)]
pub struct SentenceRepr {
    pub sent_id: String,
    pub vectors: Array2<f64>,
}

/// Representations for a set of sentences, all of dimension `d_h`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReprSet {
    d_h: usize,
    sentences: Vec<SentenceRepr>,
    index: HashMap<String, usize>,
}

impl ReprSet {
    pub fn new(d_h: usize) -> Self {
        ReprSet {
            d_h,
            sentences: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn d_h(&self) -> usize {
        self.d_h
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn sentences(&self) -> &[SentenceRepr] {
        &self.sentences
    }

    pub fn push(
        &mut self,
        sent_id: impl Into<String>,
        vectors: Array2<f64>,
    ) -> Result<(), ProbeError> {
        let sent_id = sent_id.into();
        if vectors.ncols() != self.d_h {
            return Err(ProbeError::Dimension(format!(
                "sentence `{sent_id}` has {} columns, expected {}",
                vectors.ncols(),
                self.d_h
            )));
        }
        if vectors.iter().any(|v| !v.is_finite()) {
            return Err(ProbeError::Alignment(
                sent_id,
                "non-finite representation".into(),
            ));
        }
        if self.index.contains_key(&sent_id) {
            return Err(ProbeError::Alignment(sent_id, "duplicate sentence".into()));
        }
        self.index.insert(sent_id.clone(), self.sentences.len());
        self.sentences.push(SentenceRepr { sent_id, vectors });
        Ok(())
    }

    pub fn get(&self, sent_id: &str) -> Option<&Array2<f64>> {
        self.index.get(sent_id).map(|&i| &self.sentences[i].vectors)
    }

    /// Vectors for `s`, checking that there is one row per word.
    pub fn for_sentence(&self, s: &Sentence) -> Result<&Array2<f64>, ProbeError> {
        let v = self
            .get(&s.sent_id)
            .ok_or_else(|| ProbeError::Alignment(s.sent_id.clone(), "no representations".into()))?;
        if v.nrows() != s.tokens.len() {
            return Err(ProbeError::Alignment(
                s.sent_id.clone(),
                format!("{} vectors for {} words", v.nrows(), s.tokens.len()),
            ));
        }
        Ok(v)
    }
}

/// Probe parameters: `L` (labels x d_h) with bias, and `B` (b x d_h).
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeParams {
    pub labels: LabelInventory,
    pub l: Array2<f64>,
    pub l_bias: Array1<f64>,
    pub b: Array2<f64>,
}

impl ProbeParams {
    pub fn zeros(labels: LabelInventory, d_h: usize, b_dim: usize) -> Self {
        let n = labels.len();
        ProbeParams {
            labels,
            l: Array2::zeros((n, d_h)),
            l_bias: Array1::zeros(n),
            b: Array2::zeros((b_dim, d_h)),
        }
    }

    /// Weights uniform in ±1/sqrt(d_h), zero bias.
    pub fn init(labels: LabelInventory, d_h: usize, b_dim: usize, rng: &mut impl Rng) -> Self {
        let mut p = ProbeParams::zeros(labels, d_h, b_dim);
        let a = 1.0 / (d_h as f64).sqrt();
        p.l.mapv_inplace(|_| rng.random_range(-a..=a));
        p.b.mapv_inplace(|_| rng.random_range(-a..=a));
        p
    }

    pub fn d_h(&self) -> usize {
        self.l.ncols()
    }

    pub fn b_dim(&self) -> usize {
        self.b.nrows()
    }
}

/// A labeled tree: `heads[i]` is the 1-based head of word `i + 1`, 0 for
/// the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedTree {
    pub heads: Vec<usize>,
    pub labels: Vec<String>,
}

impl DecodedTree {
    pub fn from_sentence(s: &Sentence) -> Self {
        DecodedTree {
            heads: s.tokens.iter().map(|t| t.head).collect(),
            labels: s.tokens.iter().map(|t| t.deprel.clone()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.heads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heads.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::parse_conllu;

    #[test]
    fn inventory_requires_unique_root() {
        assert!(LabelInventory::new(vec!["nsubj".into()]).is_err());
        assert!(LabelInventory::new(vec!["root".into(), "root".into()]).is_err());
        let inv = LabelInventory::new(vec!["amod".into(), "root".into()]).unwrap();
        assert_eq!(inv.root(), 1);
        assert_eq!(inv.index_of("amod"), Some(0));
    }

    #[test]
    fn inventory_from_treebank() {
        let tb = parse_conllu(
            "1\tHi\thi\tINTJ\t_\t_\t0\troot\t_\t_\n2\tyou\tyou\tPRON\t_\t_\t1\tvocative\t_\t_\n\n",
        )
        .unwrap();
        let inv = LabelInventory::from_treebanks([&tb]);
        assert_eq!(inv.labels(), ["root", "vocative"]);
    }

    #[test]
    fn repr_set_checks() {
        let mut set = ReprSet::new(2);
        set.push("a", Array2::zeros((3, 2))).unwrap();
        assert!(set.push("a", Array2::zeros((3, 2))).is_err());
        assert!(set.push("b", Array2::zeros((3, 4))).is_err());
        assert!(set.push("c", Array2::from_elem((1, 2), f64::NAN)).is_err());
        assert_eq!(set.get("a").unwrap().nrows(), 3);
    }
}
