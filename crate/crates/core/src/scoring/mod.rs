//! Aggregation of externally produced token log-probabilities.
//!
//! A producer (an LM adapter) writes one JSON record per scored token. This
//! module turns them into sentence scores (PPL, PPPL or PPPL_l2r depending on
//! how the producer conditioned each prediction), pairs original and nonce
//! sentences into score ratios, and summarizes and compares ratio samples.

mod report;
mod stats;
mod wilcoxon;

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use report::{build_report, Comparison, NllSummary, RegimeReport, ReportOptions, ScoreReport};
pub use stats::{
    extremes_report, quantile, summarize, ttr, ExtremeCandidate, ExtremeEntry, ExtremesReport,
    RatioSummary, DEFAULT_OUTLIER_THRESHOLD,
};
pub use wilcoxon::{
    wilcoxon_signed_rank, wilcoxon_signed_rank_with, WilcoxonMethod, WilcoxonResult, EXACT_MAX_N,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Orig,
    Nonce,
}

/// Conditioning used by the producer for each scored token.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Autoregressive: left context only (PPL).
    Alm,
    /// Masked: every other token visible (PPPL).
    MlmPppl,
    /// Masked, with the rest of the current word masked too (PPPL_l2r).
    MlmPpplL2r,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Alm, Regime::MlmPppl, Regime::MlmPpplL2r];

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Alm => "alm",
            Regime::MlmPppl => "mlm_pppl",
            Regime::MlmPpplL2r => "mlm_pppl_l2r",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One scored token as emitted by a producer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TokenScore {
    pub sent_id: String,
    pub variant: Variant,
    pub regime: Regime,
    pub token_index: usize,
    /// Index of the word the (sub)word token belongs to.
    pub word_index: usize,
    /// Natural log of the model probability.
    pub logprob: f64,
    /// Optional token string, used for tokenizer-level type-token ratios.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub token: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SentenceScore {
    pub sent_id: String,
    pub variant: Variant,
    pub regime: Regime,
    pub n_tokens: usize,
    /// exp of the mean negative log-probability.
    pub score: f64,
    /// The mean negative log-probability itself.
    pub mean_nll: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRatio {
    pub sent_id: String,
    pub regime: Regime,
    /// nonce score / orig score
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScoringError {
    #[error("no token scores given")]
    Empty,
    #[error("token scores mix sentences, variants or regimes")]
    MixedKeys,
    #[error("sentence `{sent_id}`: token index {index} is missing")]
    MissingTokenIndex { sent_id: String, index: usize },
    #[error("sentence `{sent_id}`: token index {index} occurs twice")]
    DuplicateTokenIndex { sent_id: String, index: usize },
    #[error("sentence `{sent_id}`: log-probability {value} is not a finite value <= 0")]
    InvalidLogprob { sent_id: String, value: f64 },
    #[error("cannot pair `{0}` with `{1}`")]
    MismatchedPair(String, String),
    #[error("sample is empty")]
    EmptySample,
    #[error("samples have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("all paired differences are zero")]
    AllZeroDifferences,
    #[error("non-finite value in sample")]
    NonFinite,
    #[error("score file line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

/// Score one sentence: exp(-(1/n) * sum of logprobs).
///
/// All records must share sent_id, variant and regime, and their token
/// indices must be exactly 0..n. The sum runs in token order, so the
/// result does not depend on record order.
pub fn score_sentence(scores: &[TokenScore]) -> Result<SentenceScore, ScoringError> {
    let first = scores.first().ok_or(ScoringError::Empty)?;
    if scores.iter().any(|s| {
        s.sent_id != first.sent_id || s.variant != first.variant || s.regime != first.regime
    }) {
        return Err(ScoringError::MixedKeys);
    }
    let mut ordered: Vec<&TokenScore> = scores.iter().collect();
    ordered.sort_by_key(|s| s.token_index);
    for (expected, s) in ordered.iter().enumerate() {
        if s.token_index != expected {
            let err = if s.token_index < expected {
                ScoringError::DuplicateTokenIndex {
                    sent_id: first.sent_id.clone(),
                    index: s.token_index,
                }
            } else {
                ScoringError::MissingTokenIndex {
                    sent_id: first.sent_id.clone(),
                    index: expected,
                }
            };
            return Err(err);
        }
        if !s.logprob.is_finite() || s.logprob > 0.0 {
            return Err(ScoringError::InvalidLogprob {
                sent_id: first.sent_id.clone(),
                value: s.logprob,
            });
        }
    }
    let n = ordered.len();
    let total: f64 = ordered.iter().map(|s| s.logprob).sum();
    let mean_nll = -total / n as f64;
    Ok(SentenceScore {
        sent_id: first.sent_id.clone(),
        variant: first.variant,
        regime: first.regime,
        n_tokens: n,
        score: mean_nll.exp(),
        mean_nll,
    })
}

/// r = nonce.score / orig.score
pub fn ratio(orig: &SentenceScore, nonce: &SentenceScore) -> Result<PairRatio, ScoringError> {
    if orig.sent_id != nonce.sent_id
        || orig.regime != nonce.regime
        || orig.variant != Variant::Orig
        || nonce.variant != Variant::Nonce
    {
        return Err(ScoringError::MismatchedPair(
            format!("{}/{:?}/{}", orig.sent_id, orig.variant, orig.regime),
            format!("{}/{:?}/{}", nonce.sent_id, nonce.variant, nonce.regime),
        ));
    }
    if orig.score <= 0.0 {
        return Err(ScoringError::NonFinite);
    }
    Ok(PairRatio {
        sent_id: orig.sent_id.clone(),
        regime: orig.regime,
        r: nonce.score / orig.score,
    })
}

/// Sentence scores and ratios for a whole score file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Aggregation {
    pub scores: Vec<SentenceScore>,
    pub pairs: Vec<PairRatio>,
    /// (regime, sent_id) keys with only one of the two variants.
    pub unpaired: usize,
}

impl Aggregation {
    pub fn score(&self, regime: Regime, sent_id: &str, variant: Variant) -> Option<&SentenceScore> {
        self.scores
            .iter()
            .find(|s| s.regime == regime && s.sent_id == sent_id && s.variant == variant)
    }
}

/// Group records by (regime, sent_id, variant), score every group and pair
/// original with nonce scores. Unpaired sentences are counted, not imputed.
pub fn aggregate(records: &[TokenScore]) -> Result<Aggregation, ScoringError> {
    let mut groups: BTreeMap<(Regime, &str, Variant), Vec<TokenScore>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.regime, r.sent_id.as_str(), r.variant))
            .or_default()
            .push(r.clone());
    }
    let mut agg = Aggregation::default();
    let mut by_pair: BTreeMap<(Regime, String), [Option<SentenceScore>; 2]> = BTreeMap::new();
    for ((regime, sent_id, variant), group) in groups {
        let score = score_sentence(&group)?;
        agg.scores.push(score.clone());
        let slot = by_pair.entry((regime, sent_id.to_owned())).or_default();
        slot[usize::from(variant == Variant::Nonce)] = Some(score);
    }
    for (_, sides) in by_pair {
        match sides {
            [Some(orig), Some(nonce)] => agg.pairs.push(ratio(&orig, &nonce)?),
            _ => agg.unpaired += 1,
        }
    }
    Ok(agg)
}

/// Parse line-delimited JSON token scores.
pub fn parse_token_scores(reader: impl BufRead) -> Result<Vec<TokenScore>, ScoringError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| ScoringError::Format {
            line: idx + 1,
            msg: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: TokenScore = serde_json::from_str(&line).map_err(|e| ScoringError::Format {
            line: idx + 1,
            msg: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn read_token_scores(path: impl AsRef<Path>) -> Result<Vec<TokenScore>, ScoringError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| ScoringError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_token_scores(std::io::BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tok(index: usize, logprob: f64) -> TokenScore {
        TokenScore {
            sent_id: "s1".into(),
            variant: Variant::Orig,
            regime: Regime::Alm,
            token_index: index,
            word_index: index,
            logprob,
            token: None,
        }
    }

    #[test]
    fn uniform_half() {
        let scores: Vec<_> = (0..4).map(|i| tok(i, 0.5f64.ln())).collect();
        let s = score_sentence(&scores).unwrap();
        assert_eq!(s.n_tokens, 4);
        assert!((s.score - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_certain_token() {
        assert_eq!(score_sentence(&[tok(0, 0.0)]).unwrap().score, 1.0);
    }

    #[test]
    fn closed_form_two_tokens() {
        let s = score_sentence(&[tok(0, 0.5f64.ln()), tok(1, 0.125f64.ln())]).unwrap();
        assert!((s.score - 4.0).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert_eq!(score_sentence(&[]), Err(ScoringError::Empty));
        assert!(matches!(
            score_sentence(&[tok(0, -1.0), tok(2, -1.0)]),
            Err(ScoringError::MissingTokenIndex { index: 1, .. })
        ));
        assert!(matches!(
            score_sentence(&[tok(0, -1.0), tok(0, -1.0)]),
            Err(ScoringError::DuplicateTokenIndex { index: 0, .. })
        ));
        let mut other = tok(1, -1.0);
        other.regime = Regime::MlmPppl;
        assert_eq!(
            score_sentence(&[tok(0, -1.0), other]),
            Err(ScoringError::MixedKeys)
        );
        assert!(matches!(
            score_sentence(&[tok(0, 0.1)]),
            Err(ScoringError::InvalidLogprob { .. })
        ));
    }

    fn sscore(variant: Variant, score: f64) -> SentenceScore {
        SentenceScore {
            sent_id: "s1".into(),
            variant,
            regime: Regime::Alm,
            n_tokens: 3,
            score,
            mean_nll: score.ln(),
        }
    }

    #[test]
    fn ratios() {
        let r = ratio(&sscore(Variant::Orig, 2.0), &sscore(Variant::Nonce, 8.0)).unwrap();
        assert_eq!(r.r, 4.0);
        let r = ratio(&sscore(Variant::Orig, 3.0), &sscore(Variant::Nonce, 3.0)).unwrap();
        assert_eq!(r.r, 1.0);
        let r = ratio(&sscore(Variant::Orig, 4.0), &sscore(Variant::Nonce, 2.0)).unwrap();
        assert_eq!(r.r, 0.5);
        let mut other = sscore(Variant::Nonce, 2.0);
        other.sent_id = "s2".into();
        assert!(ratio(&sscore(Variant::Orig, 4.0), &other).is_err());
    }

    #[test]
    fn aggregate_pairs_and_counts_unpaired() {
        let mut recs = vec![tok(0, 0.5f64.ln())];
        let mut n = tok(0, 0.125f64.ln());
        n.variant = Variant::Nonce;
        recs.push(n);
        let mut lonely = tok(0, -1.0);
        lonely.sent_id = "s2".into();
        recs.push(lonely);
        let agg = aggregate(&recs).unwrap();
        assert_eq!(agg.pairs.len(), 1);
        assert!((agg.pairs[0].r - 4.0).abs() < 1e-12);
        assert_eq!(agg.unpaired, 1);
        assert_eq!(agg.scores.len(), 3);
    }

    #[test]
    fn parse_jsonl() {
        let text = r#"{"sent_id":"a","variant":"orig","regime":"mlm_pppl_l2r","token_index":0,"word_index":0,"logprob":-1.5}

{"sent_id":"a","variant":"nonce","regime":"alm","token_index":0,"word_index":0,"logprob":-2.0,"token":"accord"}
"#;
        let recs = parse_token_scores(text.as_bytes()).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].regime, Regime::MlmPpplL2r);
        assert_eq!(recs[1].token.as_deref(), Some("accord"));
        let bad = parse_token_scores("{\"sent_id\": 1}\n".as_bytes()).unwrap_err();
        assert!(matches!(bad, ScoringError::Format { line: 1, .. }));
    }
}
