use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::ScoringError;

/// Largest number of non-zero differences for which `Auto` uses the exact
/// null distribution.
pub const EXACT_MAX_N: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WilcoxonMethod {
    Auto,
    Exact,
    Normal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Sum of ranks of the positive differences `a - b`.
    pub w: f64,
    /// Number of non-zero differences.
    pub n: usize,
    pub p_two_sided: f64,
    /// Alternative: `a` tends to exceed `b`.
    pub p_one_sided: f64,
    pub method: WilcoxonMethod,
}

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Average ranks (1-based) of `values`, plus the sizes of tie groups.
fn average_ranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        if j > i {
            ties.push(j - i + 1);
        }
        i = j + 1;
    }
    (ranks, ties)
}

/// Wilcoxon signed-rank test on paired samples, choosing the exact null
/// distribution for up to [`EXACT_MAX_N`] non-zero differences.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult, ScoringError> {
    wilcoxon_signed_rank_with(a, b, WilcoxonMethod::Auto)
}

/// Zero differences are dropped and tied magnitudes get average ranks. The
/// exact mode counts sign assignments over the (possibly tied) ranks; the
/// normal mode uses tie-corrected variance and a 0.5 continuity correction.
pub fn wilcoxon_signed_rank_with(
    a: &[f64],
    b: &[f64],
    method: WilcoxonMethod,
) -> Result<WilcoxonResult, ScoringError> {
    if a.len() != b.len() {
        return Err(ScoringError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(ScoringError::EmptySample);
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(ScoringError::NonFinite);
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    if diffs.is_empty() {
        return Err(ScoringError::AllZeroDifferences);
    }
    let n = diffs.len();
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let (ranks, ties) = average_ranks(&magnitudes);
    let w: f64 = ranks
        .iter()
        .zip(&diffs)
        .filter(|(_, d)| **d > 0.0)
        .map(|(r, _)| r)
        .sum();

    let method = match method {
        WilcoxonMethod::Auto if n <= EXACT_MAX_N => WilcoxonMethod::Exact,
        WilcoxonMethod::Auto => WilcoxonMethod::Normal,
        m => m,
    };
    let (p_two_sided, p_one_sided) = match method {
        WilcoxonMethod::Exact => exact_p(&ranks, w),
        _ => normal_p(n, &ties, w),
    };
    Ok(WilcoxonResult {
        w,
        n,
        p_two_sided,
        p_one_sided,
        method,
    })
}

/// Null distribution of the positive-rank sum by dynamic programming over
/// doubled (hence integral) ranks.
fn exact_p(ranks: &[f64], w: f64) -> (f64, f64) {
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let max: usize = doubled.iter().sum();
    let mut counts = vec![0.0f64; max + 1];
    counts[0] = 1.0;
    let mut reach = 0;
    for &r in &doubled {
        for s in (0..=reach).rev() {
            if counts[s] != 0.0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let total = 2f64.powi(ranks.len() as i32);
    let w2 = (w * 2.0).round() as usize;
    let upper: f64 = counts[w2..].iter().sum::<f64>() / total;
    let lower: f64 = counts[..=w2].iter().sum::<f64>() / total;
    ((2.0 * upper.min(lower)).min(1.0), upper)
}

fn normal_p(n: usize, ties: &[usize], w: f64) -> (f64, f64) {
    let n = n as f64;
    let mean = n * (n + 1.0) / 4.0;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / 48.0;
    let sd = (n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term).sqrt();
    let d = w - mean;
    let z_two = ((d.abs() - 0.5).max(0.0)) / sd;
    let z_one = (d - 0.5) / sd;
    (
        (2.0 * (1.0 - std_normal_cdf(z_two))).min(1.0),
        1.0 - std_normal_cdf(z_one),
    )
}
