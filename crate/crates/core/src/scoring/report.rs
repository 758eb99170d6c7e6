use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{
    aggregate, extremes_report, summarize, wilcoxon_signed_rank, Aggregation, ExtremeCandidate,
    ExtremesReport, RatioSummary, Regime, ScoringError, TokenScore, Variant, WilcoxonResult,
    DEFAULT_OUTLIER_THRESHOLD,
};

#[derive(Clone, Debug, PartialEq)]
pub struct ReportOptions {
    pub outlier_threshold: f64,
    pub raw_nll: bool,
    /// Pairs listed at each end of the extremes report.
    pub extremes_k: usize,
    /// Optional (orig text, nonce text) per sent_id.
    pub texts: HashMap<String, (Option<String>, Option<String>)>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            outlier_threshold: DEFAULT_OUTLIER_THRESHOLD,
            raw_nll: false,
            extremes_k: 10,
            texts: HashMap::new(),
        }
    }
}

/// Mean NLL per token (log score) without exponentiation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NllSummary {
    pub count: usize,
    pub mean_orig_nll: f64,
    pub mean_nonce_nll: f64,
    /// Mean over pairs of nonce NLL minus orig NLL (equal to mean log r).
    pub mean_difference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub summary: RatioSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_nll: Option<NllSummary>,
}

/// Paired test of `r_a` against `r_b` over sentences scored under both.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub a: Regime,
    pub b: Regime,
    pub n_pairs: usize,
    pub all: Option<WilcoxonResult>,
    /// Pairs where both ratios are at or below the outlier threshold.
    pub n_filtered: usize,
    pub filtered: Option<WilcoxonResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub n_records: usize,
    pub n_sentence_scores: usize,
    /// Sentences scored for only one variant, dropped from ratios.
    pub unpaired: usize,
    pub regimes: Vec<RegimeReport>,
    pub comparisons: Vec<Comparison>,
    pub extremes: Vec<ExtremesReport>,
}

fn nll_summary(agg: &Aggregation, regime: Regime) -> Option<NllSummary> {
    let pairs: Vec<(f64, f64)> = agg
        .pairs
        .iter()
        .filter(|p| p.regime == regime)
        .filter_map(|p| {
            let o = agg.score(regime, &p.sent_id, Variant::Orig)?;
            let n = agg.score(regime, &p.sent_id, Variant::Nonce)?;
            Some((o.mean_nll, n.mean_nll))
        })
        .collect();
    if pairs.is_empty() {
        return None;
    }
    let count = pairs.len() as f64;
    Some(NllSummary {
        count: pairs.len(),
        mean_orig_nll: pairs.iter().map(|p| p.0).sum::<f64>() / count,
        mean_nonce_nll: pairs.iter().map(|p| p.1).sum::<f64>() / count,
        mean_difference: pairs.iter().map(|p| p.1 - p.0).sum::<f64>() / count,
    })
}

fn compare(
    a: Regime,
    b: Regime,
    ratios: &BTreeMap<String, BTreeMap<Regime, f64>>,
    threshold: f64,
) -> Comparison {
    let paired: Vec<(f64, f64)> = ratios
        .values()
        .filter_map(|m| Some((*m.get(&a)?, *m.get(&b)?)))
        .collect();
    let filtered: Vec<(f64, f64)> = paired
        .iter()
        .copied()
        .filter(|(x, y)| *x <= threshold && *y <= threshold)
        .collect();
    let mut notes = Vec::new();
    let mut run = |sample: &[(f64, f64)], label: &str| {
        let (xs, ys): (Vec<f64>, Vec<f64>) = sample.iter().copied().unzip();
        match wilcoxon_signed_rank(&xs, &ys) {
            Ok(r) => Some(r),
            Err(e) => {
                notes.push(format!("{label}: {e}"));
                None
            }
        }
    };
    let all = run(&paired, "all");
    let filt = run(&filtered, "filtered");
    Comparison {
        a,
        b,
        n_pairs: paired.len(),
        all,
        n_filtered: filtered.len(),
        filtered: filt,
        notes,
    }
}

/// Full report: per-regime summaries, pairwise regime comparisons and
/// extremes for every regime present in `records`.
pub fn build_report(
    records: &[TokenScore],
    opts: &ReportOptions,
) -> Result<ScoreReport, ScoringError> {
    let agg = aggregate(records)?;
    let mut by_regime: BTreeMap<Regime, Vec<_>> = BTreeMap::new();
    let mut by_sentence: BTreeMap<String, BTreeMap<Regime, f64>> = BTreeMap::new();
    for p in &agg.pairs {
        by_regime.entry(p.regime).or_default().push(p.clone());
        by_sentence
            .entry(p.sent_id.clone())
            .or_default()
            .insert(p.regime, p.r);
    }

    let mut regimes = Vec::new();
    for (&regime, pairs) in &by_regime {
        regimes.push(RegimeReport {
            regime,
            summary: summarize(pairs, opts.outlier_threshold)?,
            raw_nll: if opts.raw_nll {
                nll_summary(&agg, regime)
            } else {
                None
            },
        });
    }

    let present: Vec<Regime> = by_regime.keys().copied().collect();
    let mut comparisons = Vec::new();
    for (i, &a) in present.iter().enumerate() {
        for &b in &present[i + 1..] {
            comparisons.push(compare(a, b, &by_sentence, opts.outlier_threshold));
        }
    }

    let candidates: Vec<ExtremeCandidate> = by_sentence
        .iter()
        .map(|(id, ratios)| {
            let (orig_text, nonce_text) = opts.texts.get(id).cloned().unwrap_or_default();
            ExtremeCandidate {
                sent_id: id.clone(),
                orig_text,
                nonce_text,
                ratios: ratios.clone(),
            }
        })
        .collect();
    let extremes = present
        .iter()
        .map(|&r| extremes_report(&candidates, r, opts.extremes_k))
        .collect();

    Ok(ScoreReport {
        n_records: records.len(),
        n_sentence_scores: agg.scores.len(),
        unpaired: agg.unpaired,
        regimes,
        comparisons,
        extremes,
    })
}
