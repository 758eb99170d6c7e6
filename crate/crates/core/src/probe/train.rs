use ndarray::{Array1, Array2, Zip};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    decode, evaluate_trees, gradients, relation_probs, subspace_distance, DecodedTree, EvalReport,
    LabelInventory, ProbeError, ProbeParams, ReprSet,
};
use crate::conllu::{path_distance_matrix, Treebank};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub b_dim: usize,
    pub lr: f64,
    /// Learning rate multiplier applied after an epoch without dev improvement.
    pub lr_decay: f64,
    /// Sentences per update.
    pub batch_size: usize,
    pub epochs: usize,
    /// Epochs without dev LAS improvement before stopping.
    pub patience: usize,
    pub seed: u64,
    pub relation_bias: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            b_dim: 128,
            lr: 1e-3,
            lr_decay: 0.5,
            batch_size: 32,
            epochs: 30,
            patience: 5,
            seed: 0,
            relation_bias: true,
        }
    }
}

/// One aligned training sentence.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeExample {
    pub sent_id: String,
    pub h_rel: Array2<f64>,
    pub h_dist: Array2<f64>,
    pub labels: Vec<usize>,
    pub gold: DecodedTree,
    pub dist: Array2<f64>,
}

impl ProbeExample {
    /// Build an example from gold heads and label indices.
    pub fn new(
        sent_id: impl Into<String>,
        h_rel: Array2<f64>,
        h_dist: Array2<f64>,
        heads: Vec<usize>,
        labels: Vec<usize>,
        inventory: &LabelInventory,
    ) -> Self {
        let dist = crate::conllu::distances_from_heads(&heads).mapv(|d| d as f64);
        ProbeExample {
            sent_id: sent_id.into(),
            h_rel,
            h_dist,
            gold: DecodedTree {
                heads,
                labels: labels
                    .iter()
                    .map(|&l| inventory.name(l).to_owned())
                    .collect(),
            },
            labels,
            dist,
        }
    }
}

/// Pair every treebank sentence with its two representation matrices.
pub fn build_examples(
    tb: &Treebank,
    rel: &ReprSet,
    dist: &ReprSet,
    inventory: &LabelInventory,
) -> Result<Vec<ProbeExample>, ProbeError> {
    tb.sentences
        .iter()
        .map(|s| {
            let labels = s
                .tokens
                .iter()
                .map(|t| {
                    inventory
                        .index_of(&t.deprel)
                        .ok_or_else(|| ProbeError::UnknownLabel(t.deprel.clone()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ProbeExample {
                sent_id: s.sent_id.clone(),
                h_rel: rel.for_sentence(s)?.clone(),
                h_dist: dist.for_sentence(s)?.clone(),
                labels,
                gold: DecodedTree::from_sentence(s),
                dist: path_distance_matrix(s).mapv(|d| d as f64),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochLog {
    pub epoch: usize,
    pub lr: f64,
    pub relation_loss: f64,
    pub distance_loss: f64,
    pub dev: EvalReport,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainLog {
    pub epochs: Vec<EpochLog>,
    /// 0 when no epoch beat the initialization.
    pub best_epoch: usize,
    pub best_dev_las: f64,
    pub stopped_early: bool,
}

struct Adam {
    t: i32,
    m: Vec<Array2<f64>>,
    v: Vec<Array2<f64>>,
}

impl Adam {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(shapes: &[(usize, usize)]) -> Self {
        Adam {
            t: 0,
            m: shapes.iter().map(|&s| Array2::zeros(s)).collect(),
            v: shapes.iter().map(|&s| Array2::zeros(s)).collect(),
        }
    }

    fn step(&mut self, lr: f64, params: [&mut Array2<f64>; 3], grads: [&Array2<f64>; 3]) {
        self.t += 1;
        let c1 = 1.0 - Self::BETA1.powi(self.t);
        let c2 = 1.0 - Self::BETA2.powi(self.t);
        for (k, (p, g)) in params.into_iter().zip(grads).enumerate() {
            Zip::from(p)
                .and(&mut self.m[k])
                .and(&mut self.v[k])
                .and(g)
                .for_each(|p, m, v, &g| {
                    *m = Self::BETA1 * *m + (1.0 - Self::BETA1) * g;
                    *v = Self::BETA2 * *v + (1.0 - Self::BETA2) * g * g;
                    *p -= lr * (*m / c1) / ((*v / c2).sqrt() + Self::EPS);
                });
        }
    }
}

fn evaluate_examples(p: &ProbeParams, examples: &[ProbeExample]) -> Result<EvalReport, ProbeError> {
    let pred = examples
        .par_iter()
        .map(|e| {
            decode(
                &relation_probs(p, &e.h_rel)?,
                &subspace_distance(p, &e.h_dist)?,
                &p.labels,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let gold: Vec<DecodedTree> = examples.iter().map(|e| e.gold.clone()).collect();
    evaluate_trees(&pred, &gold)
}

/// Minibatch training of both maps on the unweighted sum of the two losses
/// (Adam updates). Returns the parameters of the epoch with the best dev
/// LAS; when `dev` is empty the training set is used for selection.
pub fn train(
    train: &[ProbeExample],
    dev: &[ProbeExample],
    labels: LabelInventory,
    cfg: &TrainConfig,
) -> Result<(ProbeParams, TrainLog), ProbeError> {
    let first = train.first().ok_or(ProbeError::EmptyDataset)?;
    let d_h = first.h_rel.ncols();
    if cfg.b_dim == 0 || cfg.b_dim >= d_h {
        return Err(ProbeError::Dimension(format!(
            "subspace dimension {} must be in 1..{d_h}",
            cfg.b_dim
        )));
    }
    let dev = if dev.is_empty() { train } else { dev };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut params = ProbeParams::init(labels, d_h, cfg.b_dim, &mut rng);

    let mut log = TrainLog {
        best_dev_las: evaluate_examples(&params, dev)?.las(),
        ..Default::default()
    };
    let mut best = params.clone();
    let n_labels = params.labels.len();
    let mut adam = Adam::new(&[(n_labels, d_h), (n_labels, 1), (cfg.b_dim, d_h)]);
    let mut lr = cfg.lr;
    let mut since_best = 0;
    let mut order: Vec<usize> = (0..train.len()).collect();
    let batch_size = cfg.batch_size.max(1);

    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        let mut rel_total = 0.0;
        let mut dist_total = 0.0;
        for batch in order.chunks(batch_size) {
            let grads = batch
                .par_iter()
                .map(|&i| {
                    let e = &train[i];
                    gradients(&params, &e.h_rel, &e.h_dist, &e.labels, &e.dist)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let scale = 1.0 / batch.len() as f64;
            let mut gl = Array2::zeros((n_labels, d_h));
            let mut gbias = Array1::zeros(n_labels);
            let mut gb = Array2::zeros((cfg.b_dim, d_h));
            for g in &grads {
                gl += &g.l;
                gbias += &g.l_bias;
                gb += &g.b;
                rel_total += g.relation_loss;
                dist_total += g.distance_loss;
            }
            gl *= scale;
            gb *= scale;
            if cfg.relation_bias {
                gbias *= scale;
            } else {
                gbias.fill(0.0);
            }
            let mut bias = params
                .l_bias
                .clone()
                .into_shape_with_order((n_labels, 1))
                .expect("column");
            let gbias = gbias.into_shape_with_order((n_labels, 1)).expect("column");
            adam.step(
                lr,
                [&mut params.l, &mut bias, &mut params.b],
                [&gl, &gbias, &gb],
            );
            params.l_bias = bias.into_shape_with_order(n_labels).expect("vector");
        }

        let report = evaluate_examples(&params, dev)?;
        let las = report.las();
        let n = train.len() as f64;
        log::info!(
            "epoch {epoch}: relation loss {:.4}, distance loss {:.4}, dev LAS {las:.2}",
            rel_total / n,
            dist_total / n
        );
        log.epochs.push(EpochLog {
            epoch,
            lr,
            relation_loss: rel_total / n,
            distance_loss: dist_total / n,
            dev: report,
        });
        if las > log.best_dev_las {
            log.best_dev_las = las;
            log.best_epoch = epoch;
            best = params.clone();
            since_best = 0;
        } else {
            since_best += 1;
            lr *= cfg.lr_decay;
            if since_best >= cfg.patience {
                log.stopped_early = true;
                break;
            }
        }
    }
    Ok((best, log))
}
