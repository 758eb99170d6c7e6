use ndarray::{Array1, Array2, Axis};

use super::{ProbeError, ProbeParams};

fn check_cols(what: &str, h: &Array2<f64>, d_h: usize) -> Result<(), ProbeError> {
    if h.ncols() != d_h {
        return Err(ProbeError::Dimension(format!(
            "{what}: vectors have {} columns, probe expects {d_h}",
            h.ncols()
        )));
    }
    Ok(())
}

/// `L h_i + c` for every row.
pub fn relation_logits(p: &ProbeParams, h: &Array2<f64>) -> Result<Array2<f64>, ProbeError> {
    check_cols("relation", h, p.d_h())?;
    Ok(h.dot(&p.l.t()) + &p.l_bias)
}

/// Row-wise softmax with the row maximum subtracted first.
pub fn softmax_rows(logits: &Array2<f64>) -> Array2<f64> {
    let mut out = logits.clone();
    for mut row in out.rows_mut() {
        let max = row.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        row /= sum;
    }
    out
}

/// n x l matrix of label probabilities.
pub fn relation_probs(p: &ProbeParams, h: &Array2<f64>) -> Result<Array2<f64>, ProbeError> {
    Ok(softmax_rows(&relation_logits(p, h)?))
}

fn pairwise_distances(proj: &Array2<f64>) -> Array2<f64> {
    let n = proj.nrows();
    let mut d = Array2::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            let v = proj
                .row(i)
                .iter()
                .zip(proj.row(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    d
}

/// n x n matrix of ‖B h_i − B h_j‖.
pub fn subspace_distance(p: &ProbeParams, h: &Array2<f64>) -> Result<Array2<f64>, ProbeError> {
    check_cols("distance", h, p.d_h())?;
    Ok(pairwise_distances(&h.dot(&p.b.t())))
}

/// Mean negative log-probability of the gold labels.
pub fn relation_loss(p: &ProbeParams, h: &Array2<f64>, gold: &[usize]) -> Result<f64, ProbeError> {
    let probs = relation_probs(p, h)?;
    check_gold(gold, probs.nrows(), p.labels.len())?;
    if gold.is_empty() {
        return Ok(0.0);
    }
    let total: f64 = gold
        .iter()
        .enumerate()
        .map(|(i, &g)| -probs[(i, g)].ln())
        .sum();
    Ok(total / gold.len() as f64)
}

fn check_gold(gold: &[usize], n: usize, n_labels: usize) -> Result<(), ProbeError> {
    if gold.len() != n {
        return Err(ProbeError::Dimension(format!(
            "{} labels for {n} words",
            gold.len()
        )));
    }
    if let Some(&g) = gold.iter().find(|&&g| g >= n_labels) {
        return Err(ProbeError::UnknownLabel(format!("#{g}")));
    }
    Ok(())
}

fn check_square(gold_dp: &Array2<f64>, n: usize) -> Result<(), ProbeError> {
    if gold_dp.dim() != (n, n) {
        return Err(ProbeError::Dimension(format!(
            "distance matrix is {:?}, sentence has {n} words",
            gold_dp.dim()
        )));
    }
    Ok(())
}

/// (1/N²) Σ_ij |d_P(i,j) − d_B(i,j)| over all ordered pairs, N = n − 1.
/// A single-word sentence has loss 0.
pub fn distance_loss(
    p: &ProbeParams,
    h: &Array2<f64>,
    gold_dp: &Array2<f64>,
) -> Result<f64, ProbeError> {
    let db = subspace_distance(p, h)?;
    check_square(gold_dp, h.nrows())?;
    Ok(distance_loss_from(&db, gold_dp))
}

pub(crate) fn distance_loss_from(db: &Array2<f64>, gold_dp: &Array2<f64>) -> f64 {
    let n = db.nrows();
    if n < 2 {
        return 0.0;
    }
    let big_n = (n - 1) as f64;
    let total: f64 = db.iter().zip(gold_dp).map(|(b, p)| (p - b).abs()).sum();
    total / (big_n * big_n)
}

/// Loss values and their gradients with respect to every parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradients {
    pub relation_loss: f64,
    pub distance_loss: f64,
    pub l: Array2<f64>,
    pub l_bias: Array1<f64>,
    pub b: Array2<f64>,
}

/// Analytic gradients of both losses. `h_rel` feeds `L`, `h_dist` feeds `B`.
///
/// Where a projected pair coincides (`d_B = 0`) or the absolute deviation
/// is exactly zero, the subgradient 0 is used.
pub fn gradients(
    p: &ProbeParams,
    h_rel: &Array2<f64>,
    h_dist: &Array2<f64>,
    gold_labels: &[usize],
    gold_dp: &Array2<f64>,
) -> Result<Gradients, ProbeError> {
    let n = h_rel.nrows();
    if h_dist.nrows() != n {
        return Err(ProbeError::Dimension(format!(
            "{n} relation vectors but {} distance vectors",
            h_dist.nrows()
        )));
    }
    check_cols("distance", h_dist, p.d_h())?;
    check_square(gold_dp, n)?;

    let mut probs = relation_probs(p, h_rel)?;
    check_gold(gold_labels, n, p.labels.len())?;
    let mut relation_loss = 0.0;
    for (i, &g) in gold_labels.iter().enumerate() {
        relation_loss -= probs[(i, g)].ln();
        probs[(i, g)] -= 1.0;
    }
    let scale = if n == 0 { 0.0 } else { 1.0 / n as f64 };
    relation_loss *= scale;
    probs *= scale;
    let grad_l = probs.t().dot(h_rel);
    let grad_bias = probs.sum_axis(Axis(0));

    let proj = h_dist.dot(&p.b.t());
    let db = pairwise_distances(&proj);
    let distance_loss = distance_loss_from(&db, gold_dp);
    let mut grad_b = Array2::zeros(p.b.dim());
    if n >= 2 {
        let norm = ((n - 1) * (n - 1)) as f64;
        // c_ij = sign(d_B − d_P) / (N² d_B); the gradient is then
        // 2 Pᵀ (D − C) H with D the diagonal of row sums of C.
        let mut lap = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let d = db[(i, j)];
                if i == j || d == 0.0 {
                    continue;
                }
                let diff = d - gold_dp[(i, j)];
                if diff == 0.0 {
                    continue;
                }
                let c = diff.signum() / (norm * d);
                lap[(i, j)] -= c;
                lap[(i, i)] += c;
            }
        }
        grad_b = proj.t().dot(&lap).dot(h_dist) * 2.0;
    }

    Ok(Gradients {
        relation_loss,
        distance_loss,
        l: grad_l,
        l_bias: grad_bias,
        b: grad_b,
    })
}
