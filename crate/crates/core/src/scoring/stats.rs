use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{PairRatio, Regime, ScoringError};

pub const DEFAULT_OUTLIER_THRESHOLD: f64 = 250.0;

/// Quantile by linear interpolation between closest ranks
/// (`h = (n - 1) p`), on an ascending sample.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSummary {
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub outlier_threshold: f64,
    /// Ratios strictly above the threshold.
    pub outlier_count: usize,
    pub mean_log_r: f64,
}

pub fn summarize(
    ratios: &[PairRatio],
    outlier_threshold: f64,
) -> Result<RatioSummary, ScoringError> {
    let mut values: Vec<f64> = ratios.iter().map(|r| r.r).collect();
    if values.is_empty() {
        return Err(ScoringError::EmptySample);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ScoringError::NonFinite);
    }
    values.sort_by(f64::total_cmp);
    Ok(RatioSummary {
        count: values.len(),
        min: values[0],
        q1: quantile(&values, 0.25),
        median: quantile(&values, 0.5),
        q3: quantile(&values, 0.75),
        max: values[values.len() - 1],
        outlier_threshold,
        outlier_count: values.iter().filter(|&&v| v > outlier_threshold).count(),
        mean_log_r: values.iter().map(|v| v.ln()).sum::<f64>() / values.len() as f64,
    })
}

/// Type-token ratio: distinct tokens / total tokens.
pub fn ttr<S: AsRef<str>>(tokens: &[S]) -> Result<f64, ScoringError> {
    if tokens.is_empty() {
        return Err(ScoringError::EmptySample);
    }
    let types: HashSet<&str> = tokens.iter().map(AsRef::as_ref).collect();
    Ok(types.len() as f64 / tokens.len() as f64)
}

/// A sentence pair eligible for the extremes report.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExtremeCandidate {
    pub sent_id: String,
    pub orig_text: Option<String>,
    pub nonce_text: Option<String>,
    pub ratios: BTreeMap<Regime, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremeEntry {
    pub sent_id: String,
    pub orig_text: Option<String>,
    pub nonce_text: Option<String>,
    pub r: f64,
    pub ratios: BTreeMap<Regime, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremesReport {
    pub regime: Regime,
    /// Largest ratios first.
    pub top: Vec<ExtremeEntry>,
    /// Smallest ratios first.
    pub bottom: Vec<ExtremeEntry>,
}

/// The `k` pairs with the largest and smallest ratio under `regime`.
/// Equal ratios are ordered by sent_id.
pub fn extremes_report(pairs: &[ExtremeCandidate], regime: Regime, k: usize) -> ExtremesReport {
    let mut ranked: Vec<ExtremeEntry> = pairs
        .iter()
        .filter_map(|p| {
            p.ratios.get(&regime).map(|&r| ExtremeEntry {
                sent_id: p.sent_id.clone(),
                orig_text: p.orig_text.clone(),
                nonce_text: p.nonce_text.clone(),
                r,
                ratios: p.ratios.clone(),
            })
        })
        .collect();
    ranked.sort_by(|a, b| a.r.total_cmp(&b.r).then_with(|| a.sent_id.cmp(&b.sent_id)));
    let bottom: Vec<ExtremeEntry> = ranked.iter().take(k).cloned().collect();
    ranked.sort_by(|a, b| b.r.total_cmp(&a.r).then_with(|| a.sent_id.cmp(&b.sent_id)));
    let top: Vec<ExtremeEntry> = ranked.into_iter().take(k).collect();
    ExtremesReport {
        regime,
        top,
        bottom,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(r: f64) -> PairRatio {
        PairRatio {
            sent_id: "s".into(),
            regime: Regime::Alm,
            r,
        }
    }

    #[test]
    fn quartiles_one_to_five() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0, 5.0].map(pr), 250.0).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (2.0, 3.0, 4.0));
        assert_eq!(s.count, 5);
    }

    #[test]
    fn interpolated_quartiles() {
        // h = 3 * 0.25 = 0.75 -> 1 + 0.75 * (2 - 1)
        let s = summarize(&[4.0, 1.0, 3.0, 2.0].map(pr), 250.0).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (1.75, 2.5, 3.25));
    }

    #[test]
    fn constant_sample() {
        let s = summarize(&[7.5; 6].map(pr), 250.0).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (7.5, 7.5, 7.5));
    }

    #[test]
    fn outliers() {
        let s = summarize(&[1.0, 300.0, 250.0].map(pr), 250.0).unwrap();
        assert_eq!(s.outlier_count, 1);
        assert!(summarize(&[], 250.0).is_err());
    }

    #[test]
    fn type_token_ratio() {
        assert_eq!(ttr(&["a", "a", "a", "a"]).unwrap(), 0.25);
        assert_eq!(ttr(&["a", "b", "c"]).unwrap(), 1.0);
        assert!(ttr::<&str>(&[]).is_err());
    }

    fn cand(id: &str, r: f64) -> ExtremeCandidate {
        ExtremeCandidate {
            sent_id: id.into(),
            ratios: [(Regime::Alm, r)].into(),
            ..Default::default()
        }
    }

    #[test]
    fn extremes() {
        let pairs = [
            cand("a", 3.0),
            cand("b", 10.0),
            cand("c", 0.5),
            cand("d", 1.0),
            cand("e", 7.0),
        ];
        let rep = extremes_report(&pairs, Regime::Alm, 2);
        let top: Vec<_> = rep.top.iter().map(|e| e.sent_id.as_str()).collect();
        let bottom: Vec<_> = rep.bottom.iter().map(|e| e.sent_id.as_str()).collect();
        assert_eq!(top, ["b", "e"]);
        assert_eq!(bottom, ["c", "d"]);
        let empty = extremes_report(&pairs, Regime::Alm, 0);
        assert!(empty.top.is_empty() && empty.bottom.is_empty());
    }

    #[test]
    fn extremes_ties_by_sent_id() {
        let pairs = [cand("z", 2.0), cand("a", 2.0), cand("m", 2.0)];
        let rep = extremes_report(&pairs, Regime::Alm, 2);
        let top: Vec<_> = rep.top.iter().map(|e| e.sent_id.as_str()).collect();
        let bottom: Vec<_> = rep.bottom.iter().map(|e| e.sent_id.as_str()).collect();
        assert_eq!(top, ["a", "m"]);
        assert_eq!(bottom, ["a", "m"]);
    }
}
