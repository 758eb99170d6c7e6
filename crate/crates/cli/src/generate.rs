use std::path::Path;

use serde::Serialize;
use spud_core::conllu::{filter_short, read_treebank, serialize, Treebank};
use spud_core::context::{build_pools, default_content_upos, CandidatePool};
use spud_core::generator::{
    generate, prepare_lexicon, preprocess, records_to_tsv, replacement_stats, GenOptions,
    GenerateError, GenerationReport, Language,
};
use spud_core::lexicon::{load_udlexicon, load_wiktextract, Lexicon, PhonologyHints};

use crate::args::GenerateArgs;
use crate::error::{data, required, usage, CliError};
use crate::manifest::{write_json, write_text, Manifest};
use crate::RunContext;

#[derive(Serialize)]
struct PoolInfo {
    source: String,
    scheme: String,
    contexts: usize,
    attestations: u64,
}

#[derive(Serialize)]
struct VariantReport {
    variant: usize,
    file: String,
    #[serde(flatten)]
    report: GenerationReport,
}

#[derive(Serialize)]
struct Report {
    treebank: String,
    lang: Language,
    seed: u64,
    sentences: usize,
    tokens: usize,
    pool: PoolInfo,
    lexicon_entries: usize,
    phonology_hints: usize,
    variants: Vec<VariantReport>,
    /// All variants together.
    overall: GenerationReport,
}

fn read(path: &Path) -> Result<Treebank, CliError> {
    read_treebank(path).map_err(data)
}

pub fn run(mut a: GenerateArgs, ctx: &RunContext) -> Result<(), CliError> {
    let tb_path = required(a.treebank.clone(), "treebank")?;
    let out = required(a.out.clone(), "out")?;
    let lang: Language = required(a.lang.as_deref(), "lang")?
        .parse()
        .map_err(usage)?;
    if a.pool_from.is_some() && a.pool_cache.is_some() {
        return Err(usage("--pool-from and --pool-cache cannot be combined"));
    }
    let seed = *a.seed.get_or_insert(0);
    let n_variants = *a.variants.get_or_insert(1);
    let min_words = *a.min_words.get_or_insert(1);
    if n_variants == 0 {
        return Err(usage("--variants must be at least 1"));
    }
    if min_words == 0 {
        return Err(usage("--min-words must be at least 1"));
    }
    if a.content_upos.is_empty() {
        a.content_upos = default_content_upos().into_iter().collect();
    }

    let mut opts = GenOptions::new(lang, seed);
    opts.n_variants = n_variants;
    opts.ignore_deprels = a.ignore_deprels;
    opts.drop_punct_deps = a.drop_punct_deps;
    opts.content_upos = a.content_upos.iter().cloned().collect();

    let mut manifest = Manifest::new("generate", &a);
    manifest.add_input("treebank", &tb_path)?;
    let full = preprocess(&read(&tb_path)?, lang);
    let tb = filter_short(&full, min_words);
    log::info!(
        "{}: {} sentences, {} kept with at least {min_words} words",
        tb_path.display(),
        full.len(),
        tb.len()
    );

    let (pool, source) = if let Some(p) = &a.pool_cache {
        manifest.add_input("pool_cache", p)?;
        (
            CandidatePool::load(p).map_err(data)?,
            p.display().to_string(),
        )
    } else if let Some(p) = &a.pool_from {
        manifest.add_input("pool_from", p)?;
        let other = preprocess(&read(p)?, lang);
        (
            build_pools(&other, &opts.content_upos, opts.scheme()),
            p.display().to_string(),
        )
    } else {
        (
            build_pools(&full, &opts.content_upos, opts.scheme()),
            tb_path.display().to_string(),
        )
    };
    log::info!(
        "candidate pool: {} contexts, {} attestations",
        pool.context_count(),
        pool.attestations()
    );
    if let Some(p) = &a.save_pool {
        pool.save(p).map_err(data)?;
    }

    let mut lexicon = Lexicon::new();
    let mut hints = PhonologyHints::new();
    for p in &a.lexicon {
        manifest.add_input("lexicon", p)?;
        let (lex, stats) = load_udlexicon(p, None).map_err(data)?;
        log::info!(
            "{}: {} rows, {} skipped",
            p.display(),
            stats.rows,
            stats.skipped
        );
        lexicon.merge(lex);
    }
    for p in &a.wiktextract {
        manifest.add_input("wiktextract", p)?;
        let (lex, h, stats) = load_wiktextract(p, lang.code()).map_err(data)?;
        log::info!(
            "{}: {} rows, {} skipped",
            p.display(),
            stats.rows,
            stats.skipped
        );
        lexicon.merge(lex);
        hints.merge(h);
    }
    if lexicon.is_empty() {
        log::warn!("no lexicon entries loaded; content words cannot be inflected and will be kept");
    }
    let lexicon = prepare_lexicon(lexicon, lang);

    let generated = generate(&tb, &pool, &lexicon, &hints, &opts).map_err(|e| match e {
        GenerateError::SchemeMismatch { .. } => usage(e.to_string()),
        other => data(other),
    })?;

    let stem = tb_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "treebank".into());
    let mut variants = Vec::new();
    let mut all_records = Vec::new();
    for g in generated {
        let file = format!("{stem}.nonce-{}.conllu", g.variant);
        write_text(&out.join(&file), &serialize(&g.treebank))?;
        log::info!("{file}: {:.3} of all tokens replaced", g.report.total_ratio);
        variants.push(VariantReport {
            variant: g.variant,
            file,
            report: g.report,
        });
        all_records.extend(g.records);
    }
    write_text(&out.join("records.tsv"), &records_to_tsv(&all_records))?;
    let report = Report {
        treebank: tb_path.display().to_string(),
        lang,
        seed,
        sentences: tb.len(),
        tokens: tb.token_count(),
        pool: PoolInfo {
            source,
            scheme: pool.scheme.to_string(),
            contexts: pool.context_count(),
            attestations: pool.attestations(),
        },
        lexicon_entries: lexicon.len(),
        phonology_hints: hints.len(),
        variants,
        overall: replacement_stats(&all_records),
    };
    write_json(&out.join("report.json"), &report)?;
    manifest.write(ctx, Some(&out))
}
