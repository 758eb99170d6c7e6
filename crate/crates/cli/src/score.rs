use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use spud_core::conllu::{read_treebank, Treebank};
use spud_core::generator::{
    records_from_tsv, replacement_stats, GenerationReport, ReplacementRecord,
};
use spud_core::scoring::{
    build_report, read_token_scores, ttr as type_token_ratio, Regime, ReportOptions, Variant,
    DEFAULT_OUTLIER_THRESHOLD,
};

use crate::args::{ScoreArgs, StatsArgs, TtrArgs};
use crate::error::{data, required, usage, CliError};
use crate::manifest::{parent_dir, write_json, Manifest};
use crate::RunContext;

/// Write `value` to `out`, or to standard output.
fn emit(value: &impl Serialize, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => write_json(path, value),
        None => {
            let text = serde_json::to_string_pretty(value).map_err(data)?;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(data(e)),
                _ => Ok(()),
            }
        }
    }
}

#[derive(Serialize)]
struct StatsVariant {
    variant: usize,
    #[serde(flatten)]
    report: GenerationReport,
}

#[derive(Serialize)]
struct StatsReport {
    records: usize,
    variants: Vec<StatsVariant>,
    overall: GenerationReport,
}

pub fn stats(a: StatsArgs, ctx: &RunContext) -> Result<(), CliError> {
    let path = required(a.records.as_ref(), "records")?;
    let mut manifest = Manifest::new("stats", &a);
    manifest.add_input("records", path)?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| data(format!("cannot read {}: {e}", path.display())))?;
    let records = records_from_tsv(&text).map_err(|e| data(format!("{}: {e}", path.display())))?;
    let mut by_variant: BTreeMap<usize, Vec<ReplacementRecord>> = BTreeMap::new();
    for r in &records {
        by_variant.entry(r.variant).or_default().push(r.clone());
    }
    let report = StatsReport {
        records: records.len(),
        variants: by_variant
            .into_iter()
            .map(|(variant, recs)| StatsVariant {
                variant,
                report: replacement_stats(&recs),
            })
            .collect(),
        overall: replacement_stats(&records),
    };
    emit(&report, a.out.as_deref())?;
    manifest.write(ctx, a.out.as_deref().map(parent_dir))
}

fn sentence_texts(tb: &Treebank) -> impl Iterator<Item = (String, String)> + '_ {
    tb.sentences.iter().map(|s| {
        let text = s.text.clone().unwrap_or_else(|| s.detokenize());
        (s.sent_id.clone(), text)
    })
}

pub fn score(mut a: ScoreArgs, ctx: &RunContext) -> Result<(), CliError> {
    let path = required(a.records.clone(), "records")?;
    let out = required(a.out.clone(), "out")?;
    let threshold = *a.threshold.get_or_insert(DEFAULT_OUTLIER_THRESHOLD);
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(usage("--threshold must be a positive number"));
    }
    let extremes_k = *a
        .extremes
        .get_or_insert(ReportOptions::default().extremes_k);

    let mut manifest = Manifest::new("score", &a);
    manifest.add_input("records", &path)?;
    let records = read_token_scores(&path).map_err(|e| data(format!("{}: {e}", path.display())))?;

    let mut texts: HashMap<String, (Option<String>, Option<String>)> = HashMap::new();
    if let Some(p) = &a.orig_treebank {
        manifest.add_input("orig_treebank", p)?;
        for (id, text) in sentence_texts(&read_treebank(p).map_err(data)?) {
            texts.entry(id).or_default().0 = Some(text);
        }
    }
    if let Some(p) = &a.nonce_treebank {
        manifest.add_input("nonce_treebank", p)?;
        for (id, text) in sentence_texts(&read_treebank(p).map_err(data)?) {
            texts.entry(id).or_default().1 = Some(text);
        }
    }

    let opts = ReportOptions {
        outlier_threshold: threshold,
        raw_nll: a.raw_nll,
        extremes_k,
        texts,
    };
    let report =
        build_report(&records, &opts).map_err(|e| data(format!("{}: {e}", path.display())))?;
    write_json(&out, &report)?;
    manifest.write(ctx, Some(parent_dir(&out)))
}

#[derive(Serialize)]
struct TtrEntry {
    source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    variant: Option<Variant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    regime: Option<Regime>,
    tokens: usize,
    ttr: f64,
}

pub fn ttr(a: TtrArgs, ctx: &RunContext) -> Result<(), CliError> {
    if a.treebank.is_empty() == a.records.is_none() {
        return Err(usage("give either --treebank (one or more) or --records"));
    }
    let mut manifest = Manifest::new("ttr", &a);
    let mut entries = Vec::new();
    for p in &a.treebank {
        manifest.add_input("treebank", p)?;
        let tb = read_treebank(p).map_err(data)?;
        let forms: Vec<String> = tb
            .sentences
            .iter()
            .flat_map(|s| &s.tokens)
            .map(|t| {
                if a.keep_case {
                    t.form.clone()
                } else {
                    t.form.to_lowercase()
                }
            })
            .collect();
        entries.push(TtrEntry {
            source: p.display().to_string(),
            variant: None,
            regime: None,
            tokens: forms.len(),
            ttr: type_token_ratio(&forms).map_err(|e| data(format!("{}: {e}", p.display())))?,
        });
    }
    if let Some(p) = &a.records {
        manifest.add_input("records", p)?;
        let records = read_token_scores(p).map_err(|e| data(format!("{}: {e}", p.display())))?;
        let mut groups: BTreeMap<(Variant, Regime), Vec<&str>> = BTreeMap::new();
        for r in &records {
            if let Some(tok) = &r.token {
                groups.entry((r.variant, r.regime)).or_default().push(tok);
            }
        }
        if groups.is_empty() {
            return Err(data(format!(
                "{}: no record carries a `token` field",
                p.display()
            )));
        }
        for ((variant, regime), tokens) in groups {
            entries.push(TtrEntry {
                source: p.display().to_string(),
                variant: Some(variant),
                regime: Some(regime),
                tokens: tokens.len(),
                ttr: type_token_ratio(&tokens).map_err(data)?,
            });
        }
    }
    emit(&entries, a.out.as_deref())?;
    manifest.write(ctx, a.out.as_deref().map(parent_dir))
}
