use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    relation_probs, subspace_distance, DecodedTree, LabelInventory, ProbeError, ProbeParams,
    ReprSet,
};
use crate::conllu::Treebank;

/// Greedy labeled tree decoding.
///
/// The root is the word with the highest root-label probability. Remaining
/// words are added one at a time, always the uncovered word closest to the
/// covered set, attached to its nearest covered word. Ties go to the lowest
/// word index. Non-root words take their most probable non-root label.
pub fn decode(
    rel_probs: &Array2<f64>,
    dist: &Array2<f64>,
    labels: &LabelInventory,
) -> Result<DecodedTree, ProbeError> {
    let n = rel_probs.nrows();
    if n == 0 {
        return Err(ProbeError::EmptySentence);
    }
    if dist.dim() != (n, n) || rel_probs.ncols() != labels.len() {
        return Err(ProbeError::Dimension(format!(
            "probabilities {:?} and distances {:?} for {} labels",
            rel_probs.dim(),
            dist.dim(),
            labels.len()
        )));
    }
    if rel_probs.iter().chain(dist).any(|v| !v.is_finite()) {
        return Err(ProbeError::Dimension("non-finite decoder input".into()));
    }
    let root_label = labels.root();

    let mut root = 0;
    for i in 1..n {
        if rel_probs[(i, root_label)] > rel_probs[(root, root_label)] {
            root = i;
        }
    }

    let mut heads = vec![0usize; n];
    let mut covered = vec![false; n];
    covered[root] = true;
    let mut best: Vec<(f64, usize)> = (0..n).map(|u| (dist[(root, u)], root)).collect();
    for _ in 1..n {
        let mut pick: Option<usize> = None;
        for u in (0..n).filter(|&u| !covered[u]) {
            if pick.is_none_or(|p| best[u].0 < best[p].0) {
                pick = Some(u);
            }
        }
        let u = pick.expect("an uncovered word remains");
        covered[u] = true;
        heads[u] = best[u].1 + 1;
        for v in (0..n).filter(|&v| !covered[v]) {
            let d = dist[(u, v)];
            if d < best[v].0 || (d == best[v].0 && u < best[v].1) {
                best[v] = (d, u);
            }
        }
    }

    let labels_out = (0..n)
        .map(|i| {
            if i == root {
                return labels.name(root_label).to_owned();
            }
            let mut arg: Option<usize> = None;
            for k in (0..labels.len()).filter(|&k| k != root_label) {
                if arg.is_none_or(|a| rel_probs[(i, k)] > rel_probs[(i, a)]) {
                    arg = Some(k);
                }
            }
            labels.name(arg.unwrap_or(root_label)).to_owned()
        })
        .collect();
    Ok(DecodedTree {
        heads,
        labels: labels_out,
    })
}

/// Decode every sentence of `tb` from its two representation sets.
pub fn predict(
    params: &ProbeParams,
    rel: &ReprSet,
    dist: &ReprSet,
    tb: &Treebank,
) -> Result<Vec<DecodedTree>, ProbeError> {
    tb.sentences
        .par_iter()
        .map(|s| {
            let probs = relation_probs(params, rel.for_sentence(s)?)?;
            let d = subspace_distance(params, dist.for_sentence(s)?)?;
            decode(&probs, &d, &params.labels)
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DirectionStats {
    pub tokens: usize,
    pub rel_correct: usize,
    pub head_correct: usize,
    pub both_correct: usize,
    pub rel_acc: f64,
    pub uas: f64,
    pub las: f64,
}

impl DirectionStats {
    fn add(&mut self, rel: bool, head: bool) {
        self.tokens += 1;
        self.rel_correct += usize::from(rel);
        self.head_correct += usize::from(head);
        self.both_correct += usize::from(rel && head);
    }

    fn finish(&mut self) {
        let pct = |k: usize| {
            if self.tokens == 0 {
                0.0
            } else {
                100.0 * k as f64 / self.tokens as f64
            }
        };
        self.rel_acc = pct(self.rel_correct);
        self.uas = pct(self.head_correct);
        self.las = pct(self.both_correct);
    }
}

/// Percentages over all words, and split by the direction of the gold
/// edge. Left edges have the dependent before its head; gold roots belong
/// to neither side.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub sentences: usize,
    pub overall: DirectionStats,
    pub left: DirectionStats,
    pub right: DirectionStats,
    pub roots: usize,
}

impl EvalReport {
    pub fn rel_acc(&self) -> f64 {
        self.overall.rel_acc
    }

    pub fn uas(&self) -> f64 {
        self.overall.uas
    }

    pub fn las(&self) -> f64 {
        self.overall.las
    }
}

pub fn evaluate_trees(
    pred: &[DecodedTree],
    gold: &[DecodedTree],
) -> Result<EvalReport, ProbeError> {
    if pred.len() != gold.len() {
        return Err(ProbeError::Alignment(
            "*".into(),
            format!(
                "{} predicted trees for {} gold trees",
                pred.len(),
                gold.len()
            ),
        ));
    }
    let mut rep = EvalReport {
        sentences: gold.len(),
        ..Default::default()
    };
    for (k, (p, g)) in pred.iter().zip(gold).enumerate() {
        if p.len() != g.len() || p.labels.len() != p.len() || g.labels.len() != g.len() {
            return Err(ProbeError::Alignment(
                format!("#{}", k + 1),
                format!("{} predicted words for {} gold words", p.len(), g.len()),
            ));
        }
        for i in 0..g.len() {
            let rel = p.labels[i] == g.labels[i];
            let head = p.heads[i] == g.heads[i];
            rep.overall.add(rel, head);
            let gh = g.heads[i];
            if gh == 0 {
                rep.roots += 1;
            } else if i + 1 < gh {
                rep.left.add(rel, head);
            } else {
                rep.right.add(rel, head);
            }
        }
    }
    rep.overall.finish();
    rep.left.finish();
    rep.right.finish();
    Ok(rep)
}

pub fn evaluate(pred: &[DecodedTree], gold: &Treebank) -> Result<EvalReport, ProbeError> {
    let gold: Vec<DecodedTree> = gold
        .sentences
        .iter()
        .map(DecodedTree::from_sentence)
        .collect();
    evaluate_trees(pred, &gold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn inv() -> LabelInventory {
        LabelInventory::new(vec!["dep".into(), "root".into()]).unwrap()
    }

    #[test]
    fn single_word() {
        let t = decode(&array![[0.9, 0.1]], &array![[0.0]], &inv()).unwrap();
        assert_eq!(t.heads, [0]);
        assert_eq!(t.labels, ["root"]);
    }

    #[test]
    fn empty_input() {
        assert!(matches!(
            decode(&Array2::zeros((0, 2)), &Array2::zeros((0, 0)), &inv()),
            Err(ProbeError::EmptySentence)
        ));
    }

    #[test]
    fn ties_prefer_low_indices() {
        let probs = array![[0.5, 0.5], [0.5, 0.5], [0.5, 0.5]];
        let dist = Array2::from_elem((3, 3), 1.0);
        let t = decode(&probs, &dist, &inv()).unwrap();
        assert_eq!(t.heads, [0, 1, 1]);
        assert_eq!(t.labels, ["root", "dep", "dep"]);
    }

    #[test]
    fn one_wrong_label_of_eight() {
        let gold = DecodedTree {
            heads: vec![5, 5, 4, 5, 0, 7, 5, 5],
            labels: [
                "advmod", "aux", "nmod", "nsubj", "root", "mark", "xcomp", "punct",
            ]
            .map(String::from)
            .to_vec(),
        };
        let mut pred = gold.clone();
        pred.labels[2] = "det".into();
        let rep = evaluate_trees(&[pred], std::slice::from_ref(&gold)).unwrap();
        assert_eq!((rep.rel_acc(), rep.uas(), rep.las()), (87.5, 100.0, 87.5));
        assert_eq!(rep.roots, 1);
        assert_eq!(rep.left.tokens + rep.right.tokens, 7);
        let perfect =
            evaluate_trees(std::slice::from_ref(&gold), std::slice::from_ref(&gold)).unwrap();
        assert_eq!(
            (perfect.rel_acc(), perfect.uas(), perfect.las()),
            (100.0, 100.0, 100.0)
        );
    }

    #[test]
    fn misaligned() {
        let t = DecodedTree {
            heads: vec![0],
            labels: vec!["root".into()],
        };
        assert!(evaluate_trees(std::slice::from_ref(&t), &[]).is_err());
        let two = DecodedTree {
            heads: vec![0, 1],
            labels: vec!["root".into(), "dep".into()],
        };
        assert!(evaluate_trees(&[t], &[two]).is_err());
    }
}
