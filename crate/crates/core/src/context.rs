//! Syntactic contexts of tokens and the lemma pools indexed by them.
//!
//! A context is the token's UPOS, the relation to its head and the multiset
//! of relations to its dependents. Lemmas attested in a context form the
//! replacement candidates for every token sharing that context.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::conllu::{Sentence, Treebank};

/// UPOS tags treated as content words.
pub const CONTENT_UPOS: [&str; 5] = ["ADJ", "ADV", "NOUN", "PROPN", "VERB"];

pub fn default_content_upos() -> BTreeSet<String> {
    CONTENT_UPOS.iter().map(|s| s.to_string()).collect()
}

/// Which parts of the syntactic neighbourhood enter the context key.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ContextScheme {
    /// UPOS, head relation and all dependent relations.
    #[default]
    Full,
    /// As `Full`, but `punct` dependents are ignored.
    DropPunct,
    /// UPOS only; relations are replaced by `*`.
    PosOnly,
}

impl fmt::Display for ContextScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContextScheme::Full => "full",
            ContextScheme::DropPunct => "drop-punct",
            ContextScheme::PosOnly => "pos-only",
        })
    }
}

impl FromStr for ContextScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(ContextScheme::Full),
            "drop-punct" => Ok(ContextScheme::DropPunct),
            "pos-only" => Ok(ContextScheme::PosOnly),
            other => Err(format!("unknown context scheme `{}`", other)),
        }
    }
}

/// The syntactic context of a token. `dep_deprels` is kept sorted, so
/// equality and hashing ignore dependent order but respect multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SyntacticContext {
    pub upos: String,
    pub head_deprel: String,
    pub dep_deprels: Vec<String>,
}

impl SyntacticContext {
    pub fn new<I, S>(upos: &str, head_deprel: &str, deps: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut dep_deprels: Vec<String> = deps.into_iter().map(Into::into).collect();
        dep_deprels.sort();
        SyntacticContext {
            upos: upos.to_owned(),
            head_deprel: head_deprel.to_owned(),
            dep_deprels,
        }
    }

    /// Line-oriented key: `UPOS|head_deprel|dep1,dep2,...`.
    pub fn key(&self) -> String {
        format!(
            "{}|{}|{}",
            self.upos,
            self.head_deprel,
            self.dep_deprels.join(",")
        )
    }

    pub fn parse_key(key: &str) -> Option<Self> {
        let mut parts = key.splitn(3, '|');
        let upos = parts.next().filter(|s| !s.is_empty())?;
        let head = parts.next().filter(|s| !s.is_empty())?;
        let deps = parts.next()?;
        Some(SyntacticContext::new(
            upos,
            head,
            deps.split(',').filter(|d| !d.is_empty()),
        ))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ContextError {
    #[error("sentence `{sent_id}` has no token {id}")]
    UnknownToken { sent_id: String, id: usize },
    #[error("pool file line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("cannot access pool file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Context of token `token_id` under the full scheme.
pub fn extract_context(s: &Sentence, token_id: usize) -> Result<SyntacticContext, ContextError> {
    extract_context_with(s, token_id, ContextScheme::Full)
}

pub fn extract_context_with(
    s: &Sentence,
    token_id: usize,
    scheme: ContextScheme,
) -> Result<SyntacticContext, ContextError> {
    let tok = s
        .token(token_id)
        .ok_or_else(|| ContextError::UnknownToken {
            sent_id: s.sent_id.clone(),
            id: token_id,
        })?;
    Ok(match scheme {
        ContextScheme::PosOnly => SyntacticContext::new(&tok.upos, "*", Vec::<String>::new()),
        ContextScheme::Full | ContextScheme::DropPunct => SyntacticContext::new(
            &tok.upos,
            &tok.deprel,
            s.dependents(token_id)
                .filter(|d| scheme == ContextScheme::Full || d.deprel != "punct")
                .map(|d| d.deprel.clone()),
        ),
    })
}

/// How often an adjective lemma was seen before or after its head.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Placement {
    pub before: u32,
    pub after: u32,
}

/// Lemmas indexed by syntactic context, with attestation counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CandidatePool {
    pub scheme: ContextScheme,
    pub provenance: String,
    contexts: BTreeMap<SyntacticContext, BTreeMap<String, u32>>,
    placements: BTreeMap<String, Placement>,
}

/// Collect (context, lemma) attestations for every content token.
pub fn build_pools(
    tb: &Treebank,
    content_upos: &BTreeSet<String>,
    scheme: ContextScheme,
) -> CandidatePool {
    let mut pool = CandidatePool {
        scheme,
        provenance: tb.source_path.clone(),
        ..CandidatePool::default()
    };
    for s in &tb.sentences {
        for tok in s.tokens.iter().filter(|t| content_upos.contains(&t.upos)) {
            let ctx =
                extract_context_with(s, tok.id, scheme).expect("token ids come from the sentence");
            let lemma = tok.lemma.to_lowercase();
            *pool
                .contexts
                .entry(ctx)
                .or_default()
                .entry(lemma.clone())
                .or_default() += 1;
            if tok.upos == "ADJ" && tok.head != 0 {
                let p = pool.placements.entry(lemma).or_default();
                if tok.id < tok.head {
                    p.before += 1;
                } else {
                    p.after += 1;
                }
            }
        }
    }
    pool
}

impl CandidatePool {
    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }

    pub fn context_count(&self) -> usize {
        self.contexts.len()
    }

    /// Total number of attestations.
    pub fn attestations(&self) -> u64 {
        self.contexts
            .values()
            .flat_map(|m| m.values())
            .map(|&c| u64::from(c))
            .sum()
    }

    pub fn lemmas(&self, ctx: &SyntacticContext) -> Option<&BTreeMap<String, u32>> {
        self.contexts.get(ctx)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SyntacticContext, &BTreeMap<String, u32>)> {
        self.contexts.iter()
    }

    pub fn placement(&self, lemma: &str) -> Placement {
        self.placements
            .get(&lemma.to_lowercase())
            .copied()
            .unwrap_or_default()
    }

    /// Lemmas attested under exactly `ctx`, in lexicographic order, without
    /// `exclude` unless it is the only one.
    pub fn candidates(&self, ctx: &SyntacticContext, exclude: &str) -> Vec<&str> {
        let Some(lemmas) = self.contexts.get(ctx) else {
            return Vec::new();
        };
        let exclude = exclude.to_lowercase();
        let others: Vec<&str> = lemmas
            .keys()
            .map(String::as_str)
            .filter(|l| *l != exclude)
            .collect();
        if others.is_empty() {
            lemmas.keys().map(String::as_str).collect()
        } else {
            others
        }
    }

    /// Serialize to the sorted line format used for caching.
    pub fn dump(&self) -> String {
        let mut out = String::from("# spud-pool v1\n");
        out.push_str(&format!("# provenance = {}\n", self.provenance));
        out.push_str(&format!("# scheme = {}\n", self.scheme));
        for (ctx, lemmas) in &self.contexts {
            for (lemma, count) in lemmas {
                out.push_str(&format!("C\t{}\t{}\t{}\n", ctx.key(), lemma, count));
            }
        }
        for (lemma, p) in &self.placements {
            out.push_str(&format!("P\t{}\t{}\t{}\n", lemma, p.before, p.after));
        }
        out
    }

    pub fn parse_dump(text: &str) -> Result<Self, ContextError> {
        let mut pool = CandidatePool::default();
        for (idx, line) in text.lines().enumerate() {
            let err = |msg: &str| ContextError::Format {
                line: idx + 1,
                msg: msg.to_owned(),
            };
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((k, v)) = comment.split_once('=') {
                    match k.trim() {
                        "provenance" => pool.provenance = v.trim().to_owned(),
                        "scheme" => pool.scheme = v.trim().parse().map_err(|e: String| err(&e))?,
                        _ => {}
                    }
                }
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            match cols.as_slice() {
                ["C", key, lemma, count] => {
                    let ctx =
                        SyntacticContext::parse_key(key).ok_or_else(|| err("bad context key"))?;
                    let count: u32 = count.parse().map_err(|_| err("bad count"))?;
                    if count == 0 {
                        return Err(err("count must be positive"));
                    }
                    pool.contexts
                        .entry(ctx)
                        .or_default()
                        .insert(lemma.to_string(), count);
                }
                ["P", lemma, before, after] => {
                    let before = before.parse().map_err(|_| err("bad count"))?;
                    let after = after.parse().map_err(|_| err("bad count"))?;
                    pool.placements
                        .insert(lemma.to_string(), Placement { before, after });
                }
                _ => return Err(err("unrecognized record")),
            }
        }
        Ok(pool)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ContextError> {
        let path = path.as_ref();
        std::fs::write(path, self.dump()).map_err(|source| ContextError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ContextError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ContextError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_dump(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::parse_conllu;

    const FIG1: &str = "# sent_id = a
1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_
2\tservice\tservice\tNOUN\t_\tNumber=Sing\t4\tnsubj\t_\t_
3\twas\tbe\tAUX\t_\t_\t4\tcop\t_\t_
4\tfriendly\tfriendly\tADJ\t_\tDegree=Pos\t0\troot\t_\t_
5\tand\tand\tCCONJ\t_\t_\t6\tcc\t_\t_
6\tfast\tfast\tADJ\t_\tDegree=Pos\t4\tcconj\t_\t_
7\t.\t.\tPUNCT\t_\t_\t4\tpunct\t_\t_

# sent_id = b
1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_
2\tinterior\tinterior\tNOUN\t_\tNumber=Sing\t3\tnsubj\t_\t_
3\tshines\tshine\tVERB\t_\t_\t0\troot\t_\t_

";

    #[test]
    fn figure_contexts() {
        let tb = parse_conllu(FIG1).unwrap();
        let s = &tb.sentences[0];
        assert_eq!(
            extract_context(s, 4).unwrap(),
            SyntacticContext::new("ADJ", "root", ["nsubj", "cop", "cconj", "punct"])
        );
        assert_eq!(
            extract_context(s, 2).unwrap(),
            SyntacticContext::new("NOUN", "nsubj", ["det"])
        );
        assert!(extract_context(s, 7).unwrap().dep_deprels.is_empty());
        assert!(extract_context(s, 9).is_err());
    }

    #[test]
    fn dependent_order_is_irrelevant_but_counts_matter() {
        let a = SyntacticContext::new("VERB", "root", ["obl", "nsubj", "obl"]);
        let b = SyntacticContext::new("VERB", "root", ["obl", "obl", "nsubj"]);
        let c = SyntacticContext::new("VERB", "root", ["obl", "nsubj"]);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn schemes() {
        let tb = parse_conllu(FIG1).unwrap();
        let s = &tb.sentences[0];
        let dp = extract_context_with(s, 4, ContextScheme::DropPunct).unwrap();
        assert_eq!(
            dp,
            SyntacticContext::new("ADJ", "root", ["nsubj", "cop", "cconj"])
        );
        let pos = extract_context_with(s, 4, ContextScheme::PosOnly).unwrap();
        assert_eq!(pos.key(), "ADJ|*|");
    }

    #[test]
    fn two_sentence_pool() {
        let tb = parse_conllu(FIG1).unwrap();
        let pool = build_pools(&tb, &default_content_upos(), ContextScheme::Full);
        let ctx = SyntacticContext::new("NOUN", "nsubj", ["det"]);
        let lemmas = pool.lemmas(&ctx).unwrap();
        assert_eq!(lemmas.get("service"), Some(&1));
        assert_eq!(lemmas.get("interior"), Some(&1));
        assert_eq!(pool.candidates(&ctx, "service"), vec!["interior"]);
        // DET never enters the pool
        assert!(pool.iter().all(|(c, _)| c.upos != "DET"));
        assert_eq!(pool.attestations(), 5);
    }

    #[test]
    fn candidates_edge_cases() {
        let tb = parse_conllu(FIG1).unwrap();
        let pool = build_pools(&tb, &default_content_upos(), ContextScheme::Full);
        let unseen = SyntacticContext::new("NOUN", "obj", Vec::<String>::new());
        assert!(pool.candidates(&unseen, "x").is_empty());
        let single = SyntacticContext::new("ADJ", "cconj", ["cc"]);
        assert_eq!(pool.candidates(&single, "fast"), vec!["fast"]);
    }

    #[test]
    fn empty_treebank() {
        let pool = build_pools(
            &Treebank::default(),
            &default_content_upos(),
            ContextScheme::Full,
        );
        assert!(pool.is_empty());
    }

    #[test]
    fn dump_roundtrip() {
        let tb = parse_conllu(FIG1).unwrap();
        let pool = build_pools(&tb, &default_content_upos(), ContextScheme::DropPunct);
        let text = pool.dump();
        let back = CandidatePool::parse_dump(&text).unwrap();
        assert_eq!(back, pool);
        assert_eq!(back.dump(), text);
    }

    #[test]
    fn placements() {
        let tb = parse_conllu(FIG1).unwrap();
        let pool = build_pools(&tb, &default_content_upos(), ContextScheme::Full);
        assert_eq!(
            pool.placement("fast"),
            Placement {
                before: 0,
                after: 1
            }
        );
        assert_eq!(pool.placement("friendly"), Placement::default());
    }
}
