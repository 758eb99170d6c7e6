//! Nonce treebank generation.
//!
//! Every content word is replaced by a lemma attested elsewhere in the same
//! syntactic context, realized with the token's morphological features.
//! Heads, relations, tags and features are never touched, so the output
//! shares its trees with the input.

pub mod rules;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::conllu::{Sentence, Token, Treebank};
use crate::context::{default_content_upos, extract_context_with, CandidatePool, ContextScheme};
use crate::lexicon::{Lexicon, PhonologyHints};

pub use rules::{apply_language_rules, prepare_lexicon, preprocess, strip_arabic_diacritics};

/// Maximum number of candidate draws per token.
pub const RETRY_BUDGET: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Ar,
    De,
    En,
    Fr,
    Ru,
}

impl Language {
    pub fn code(self) -> &'static str {
        match self {
            Language::Ar => "ar",
            Language::De => "de",
            Language::En => "en",
            Language::Fr => "fr",
            Language::Ru => "ru",
        }
    }

    pub fn is_latin_script(self) -> bool {
        matches!(self, Language::De | Language::En | Language::Fr)
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Language {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ar" => Language::Ar,
            "de" => Language::De,
            "en" => Language::En,
            "fr" => Language::Fr,
            "ru" => Language::Ru,
            other => return Err(GenerateError::UnsupportedLanguage(other.to_owned())),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenOptions {
    pub seed: u64,
    pub language: Language,
    /// Match candidates on UPOS alone.
    pub ignore_deprels: bool,
    pub n_variants: usize,
    pub drop_punct_deps: bool,
    pub content_upos: BTreeSet<String>,
}

impl GenOptions {
    pub fn new(language: Language, seed: u64) -> Self {
        GenOptions {
            seed,
            language,
            ignore_deprels: false,
            n_variants: 1,
            drop_punct_deps: false,
            content_upos: default_content_upos(),
        }
    }

    /// The context scheme the candidate pool must be built with.
    pub fn scheme(&self) -> ContextScheme {
        if self.ignore_deprels {
            ContextScheme::PosOnly
        } else if self.drop_punct_deps {
            ContextScheme::DropPunct
        } else {
            ContextScheme::Full
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    NoCandidate,
    NoInflection,
    RuleFiltered,
    InMwt,
    /// Not a content word and untouched by article rules.
    FunctionWord,
}

impl FailureReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureReason::NoCandidate => "no_candidate",
            FailureReason::NoInflection => "no_inflection",
            FailureReason::RuleFiltered => "rule_filtered",
            FailureReason::InMwt => "in_mwt",
            FailureReason::FunctionWord => "function_word",
        }
    }
}

impl FromStr for FailureReason {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "no_candidate" => FailureReason::NoCandidate,
            "no_inflection" => FailureReason::NoInflection,
            "rule_filtered" => FailureReason::RuleFiltered,
            "in_mwt" => FailureReason::InMwt,
            "function_word" => FailureReason::FunctionWord,
            other => return Err(format!("unknown failure reason `{}`", other)),
        })
    }
}

/// Outcome for one token. `replaced` is false exactly when a failure
/// reason is present, which is exactly when the form is unchanged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplacementRecord {
    pub variant: usize,
    pub sent_id: String,
    pub token_id: usize,
    pub original_lemma: String,
    pub original_form: String,
    pub new_lemma: String,
    pub new_form: String,
    pub upos: String,
    pub replaced: bool,
    pub failure_reason: Option<FailureReason>,
}

impl ReplacementRecord {
    fn unchanged(variant: usize, sent_id: &str, tok: &Token, reason: FailureReason) -> Self {
        ReplacementRecord {
            variant,
            sent_id: sent_id.to_owned(),
            token_id: tok.id,
            original_lemma: tok.lemma.clone(),
            original_form: tok.form.clone(),
            new_lemma: tok.lemma.clone(),
            new_form: tok.form.clone(),
            upos: tok.upos.clone(),
            replaced: false,
            failure_reason: Some(reason),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct UposStats {
    pub tokens: usize,
    pub replaced: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub per_upos: BTreeMap<String, UposStats>,
    pub total_tokens: usize,
    pub total_replaced: usize,
    /// Replaced share of all tokens, function words and punctuation included.
    pub total_ratio: f64,
    pub failures: BTreeMap<FailureReason, usize>,
}

impl GenerationReport {
    pub fn ratio(&self, upos: &str) -> Option<f64> {
        self.per_upos.get(upos).map(|s| s.ratio)
    }
}

fn ratio(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        part as f64 / whole as f64
    }
}

/// Replacement ratios per UPOS and over all tokens.
pub fn replacement_stats(records: &[ReplacementRecord]) -> GenerationReport {
    let mut report = GenerationReport::default();
    for rec in records {
        let entry = report.per_upos.entry(rec.upos.clone()).or_default();
        entry.tokens += 1;
        report.total_tokens += 1;
        if rec.replaced {
            entry.replaced += 1;
            report.total_replaced += 1;
        }
        if let Some(reason) = rec.failure_reason {
            *report.failures.entry(reason).or_default() += 1;
        }
    }
    for stats in report.per_upos.values_mut() {
        stats.ratio = ratio(stats.replaced, stats.tokens);
    }
    report.total_ratio = ratio(report.total_replaced, report.total_tokens);
    report
}

#[derive(Debug, thiserror::Error)]
pub enum GenerateError {
    #[error("no rule set for language `{0}`")]
    UnsupportedLanguage(String),
    #[error("the number of variants must be at least 1")]
    NoVariants,
    #[error("candidate pool was built with scheme `{pool}`, options require `{wanted}`")]
    SchemeMismatch {
        pool: ContextScheme,
        wanted: ContextScheme,
    },
}

/// One generated variant of a treebank.
#[derive(Clone, Debug)]
pub struct Generated {
    pub variant: usize,
    pub treebank: Treebank,
    pub records: Vec<ReplacementRecord>,
    pub report: GenerationReport,
}

/// Everything needed to generate nonce sentences.
pub struct Generator<'a> {
    pub pool: &'a CandidatePool,
    pub lexicon: &'a Lexicon,
    pub hints: &'a PhonologyHints,
    pub opts: &'a GenOptions,
}

/// Seed of the random stream for one token; independent of iteration order.
pub fn token_seed(seed: u64, variant: usize, sent_id: &str, token_id: usize) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((variant as u64).to_le_bytes());
    h.update((sent_id.len() as u64).to_le_bytes());
    h.update(sent_id.as_bytes());
    h.update((token_id as u64).to_le_bytes());
    let digest = h.finalize();
    let mut out = [0u8; 32];
    out.copy_from_slice(&digest);
    out
}

enum Draw {
    NoInflection,
    RuleFiltered,
    Unchanged,
    Accepted { lemma: String, form: String },
}

impl<'a> Generator<'a> {
    pub fn new(
        pool: &'a CandidatePool,
        lexicon: &'a Lexicon,
        hints: &'a PhonologyHints,
        opts: &'a GenOptions,
    ) -> Result<Self, GenerateError> {
        if opts.n_variants == 0 {
            return Err(GenerateError::NoVariants);
        }
        if pool.scheme != opts.scheme() && !pool.is_empty() {
            return Err(GenerateError::SchemeMismatch {
                pool: pool.scheme,
                wanted: opts.scheme(),
            });
        }
        Ok(Generator {
            pool,
            lexicon,
            hints,
            opts,
        })
    }

    fn try_candidate(&self, tok: &Token, lemma: &str) -> Draw {
        let lang = self.opts.language;
        if !rules::lemma_allowed(lang, tok, self.pool, lemma) {
            return Draw::RuleFiltered;
        }
        let mut forms = self
            .lexicon
            .inflections(lemma, &tok.upos, &tok.feats)
            .map(|f| {
                if lang == Language::Ar {
                    strip_arabic_diacritics(f)
                } else {
                    f.to_owned()
                }
            })
            .peekable();
        if forms.peek().is_none() {
            return Draw::NoInflection;
        }
        let Some(form) = forms.find(|f| rules::form_allowed(lang, tok, f)) else {
            return Draw::RuleFiltered;
        };
        let form = if lang.is_latin_script() {
            rules::match_case(&tok.form, &form)
        } else {
            form
        };
        if form == tok.form {
            return Draw::Unchanged;
        }
        Draw::Accepted {
            lemma: lemma.to_owned(),
            form,
        }
    }

    fn replace_token(&self, s: &Sentence, tok: &Token, variant: usize) -> ReplacementRecord {
        if !self.opts.content_upos.contains(&tok.upos) {
            return ReplacementRecord::unchanged(
                variant,
                &s.sent_id,
                tok,
                FailureReason::FunctionWord,
            );
        }
        if s.mwt_covering(tok.id).is_some() {
            return ReplacementRecord::unchanged(variant, &s.sent_id, tok, FailureReason::InMwt);
        }
        let ctx = extract_context_with(s, tok.id, self.opts.scheme())
            .expect("token belongs to the sentence");
        let mut remaining = self.pool.candidates(&ctx, &tok.lemma);
        if remaining.is_empty() {
            return ReplacementRecord::unchanged(
                variant,
                &s.sent_id,
                tok,
                FailureReason::NoCandidate,
            );
        }

        let mut rng =
            ChaCha8Rng::from_seed(token_seed(self.opts.seed, variant, &s.sent_id, tok.id));
        let mut saw_filtered = false;
        let mut saw_uninflectable = false;
        for _ in 0..RETRY_BUDGET {
            if remaining.is_empty() {
                break;
            }
            let lemma = remaining.remove(rng.random_range(0..remaining.len()));
            match self.try_candidate(tok, lemma) {
                Draw::Accepted { lemma, form } => {
                    return ReplacementRecord {
                        variant,
                        sent_id: s.sent_id.clone(),
                        token_id: tok.id,
                        original_lemma: tok.lemma.clone(),
                        original_form: tok.form.clone(),
                        new_lemma: lemma,
                        new_form: form,
                        upos: tok.upos.clone(),
                        replaced: true,
                        failure_reason: None,
                    }
                }
                Draw::RuleFiltered => saw_filtered = true,
                Draw::NoInflection => saw_uninflectable = true,
                Draw::Unchanged => {}
            }
        }
        let reason = if saw_filtered {
            FailureReason::RuleFiltered
        } else if saw_uninflectable {
            FailureReason::NoInflection
        } else {
            FailureReason::NoCandidate
        };
        ReplacementRecord::unchanged(variant, &s.sent_id, tok, reason)
    }

    /// Generate one variant of one sentence. The input must already be
    /// preprocessed for the language (see [`preprocess`]).
    pub fn generate_sentence(
        &self,
        s: &Sentence,
        variant: usize,
    ) -> (Sentence, Vec<ReplacementRecord>) {
        let mut records: Vec<ReplacementRecord> = s
            .tokens
            .iter()
            .map(|tok| self.replace_token(s, tok, variant))
            .collect();
        let mut out = s.clone();
        for (tok, rec) in out.tokens.iter_mut().zip(&records) {
            if rec.replaced {
                tok.form = rec.new_form.clone();
                tok.lemma = rec.new_lemma.clone();
            }
        }
        let mut out = apply_language_rules(&out, &mut records, self.opts.language, self.hints);
        let changed = out
            .tokens
            .iter()
            .zip(&s.tokens)
            .any(|(a, b)| a.form != b.form);
        if changed && out.text.is_some() {
            let text = out.detokenize();
            out.set_text(text);
        }
        (out, records)
    }

    pub fn generate_variant(&self, tb: &Treebank, variant: usize) -> Generated {
        let tb = preprocess(tb, self.opts.language);
        let results: Vec<(Sentence, Vec<ReplacementRecord>)> = tb
            .sentences
            .par_iter()
            .map(|s| self.generate_sentence(s, variant))
            .collect();
        let mut sentences = Vec::with_capacity(results.len());
        let mut records = Vec::new();
        for (s, recs) in results {
            sentences.push(s);
            records.extend(recs);
        }
        let report = replacement_stats(&records);
        Generated {
            variant,
            treebank: Treebank {
                sentences,
                source_path: tb.source_path.clone(),
            },
            records,
            report,
        }
    }
}

/// Generate `opts.n_variants` nonce versions of `tb`.
pub fn generate(
    tb: &Treebank,
    pool: &CandidatePool,
    lex: &Lexicon,
    hints: &PhonologyHints,
    opts: &GenOptions,
) -> Result<Vec<Generated>, GenerateError> {
    let generator = Generator::new(pool, lex, hints, opts)?;
    Ok((0..opts.n_variants)
        .map(|v| generator.generate_variant(tb, v))
        .collect())
}

const RECORD_HEADER: &str =
    "variant\tsent_id\ttoken_id\tupos\toriginal_lemma\toriginal_form\tnew_lemma\tnew_form\treplaced\tfailure_reason";

/// Records as a tab-separated table with a header line.
pub fn records_to_tsv(records: &[ReplacementRecord]) -> String {
    let mut out = String::from(RECORD_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.variant,
            r.sent_id,
            r.token_id,
            r.upos,
            r.original_lemma,
            r.original_form,
            r.new_lemma,
            r.new_form,
            r.replaced,
            r.failure_reason.map_or("_", FailureReason::as_str),
        ));
    }
    out
}

pub fn records_from_tsv(text: &str) -> Result<Vec<ReplacementRecord>, String> {
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 && line.starts_with("variant\t") || line.is_empty() {
            continue;
        }
        let err = |msg: &str| format!("records line {}: {}", idx + 1, msg);
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(err("expected 10 columns"));
        }
        records.push(ReplacementRecord {
            variant: cols[0].parse().map_err(|_| err("bad variant"))?,
            sent_id: cols[1].to_owned(),
            token_id: cols[2].parse().map_err(|_| err("bad token id"))?,
            upos: cols[3].to_owned(),
            original_lemma: cols[4].to_owned(),
            original_form: cols[5].to_owned(),
            new_lemma: cols[6].to_owned(),
            new_form: cols[7].to_owned(),
            replaced: cols[8].parse().map_err(|_| err("bad replaced flag"))?,
            failure_reason: match cols[9] {
                "_" => None,
                r => Some(r.parse().map_err(|e: String| err(&e))?),
            },
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(upos: &str, replaced: bool) -> ReplacementRecord {
        ReplacementRecord {
            variant: 0,
            sent_id: "s".into(),
            token_id: 1,
            original_lemma: "x".into(),
            original_form: "x".into(),
            new_lemma: "y".into(),
            new_form: if replaced { "y".into() } else { "x".into() },
            upos: upos.into(),
            replaced,
            failure_reason: (!replaced).then_some(FailureReason::NoCandidate),
        }
    }

    #[test]
    fn noun_ratio_half() {
        let report = replacement_stats(&[rec("NOUN", true), rec("NOUN", false), rec("DET", false)]);
        assert_eq!(report.ratio("NOUN"), Some(0.5));
        assert_eq!(report.ratio("DET"), Some(0.0));
        assert!((report.total_ratio - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(report.failures[&FailureReason::NoCandidate], 2);
    }

    #[test]
    fn all_replaced() {
        let report = replacement_stats(&[rec("NOUN", true), rec("ADJ", true), rec("VERB", true)]);
        for upos in ["NOUN", "ADJ", "VERB"] {
            assert_eq!(report.ratio(upos), Some(1.0));
        }
        assert_eq!(report.total_ratio, 1.0);
    }

    #[test]
    fn empty_records() {
        let report = replacement_stats(&[]);
        assert_eq!(report.total_tokens, 0);
        assert_eq!(report.total_ratio, 0.0);
    }

    #[test]
    fn language_codes() {
        for code in ["ar", "de", "en", "fr", "ru"] {
            assert_eq!(code.parse::<Language>().unwrap().code(), code);
        }
        assert!(matches!(
            "xx".parse::<Language>(),
            Err(GenerateError::UnsupportedLanguage(_))
        ));
    }

    #[test]
    fn tsv_roundtrip() {
        let records = vec![rec("NOUN", true), rec("DET", false)];
        let text = records_to_tsv(&records);
        assert_eq!(records_from_tsv(&text).unwrap(), records);
    }

    #[test]
    fn token_seeds_differ() {
        let a = token_seed(42, 0, "s1", 3);
        assert_eq!(a, token_seed(42, 0, "s1", 3));
        assert_ne!(a, token_seed(42, 1, "s1", 3));
        assert_ne!(a, token_seed(43, 0, "s1", 3));
        assert_ne!(a, token_seed(42, 0, "s1", 4));
        assert_ne!(token_seed(42, 0, "s1", 13), token_seed(42, 0, "s11", 3));
    }
}
