use std::collections::HashSet;
use std::path::Path;

use log::warn;

use super::{LexEntry, Lexicon, LexiconError, LoadStats};
use crate::conllu::Features;

/// Parse the tab-separated `form lemma upos feats` lexicon format.
///
/// Blank lines and `#` comments are ignored. Rows with fewer than four
/// columns or unreadable features are skipped and counted.
pub fn parse_udlexicon(text: &str, upos_filter: Option<&HashSet<String>>) -> (Lexicon, LoadStats) {
    let mut stats = LoadStats::default();
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        stats.rows += 1;
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 4 || cols[0].is_empty() || cols[1].is_empty() {
            warn!("lexicon line {}: expected 4 columns, skipping", idx + 1);
            stats.skipped += 1;
            continue;
        }
        if upos_filter.is_some_and(|f| !f.contains(cols[2])) {
            continue;
        }
        let feats = match Features::parse(cols[3]) {
            Ok(f) => f,
            Err(e) => {
                warn!("lexicon line {}: {}, skipping", idx + 1, e);
                stats.skipped += 1;
                continue;
            }
        };
        entries.push(LexEntry {
            form: cols[0].to_owned(),
            lemma: cols[1].to_owned(),
            upos: cols[2].to_owned(),
            feats,
        });
    }
    (Lexicon::from_entries(entries), stats)
}

pub fn load_udlexicon(
    path: impl AsRef<Path>,
    upos_filter: Option<&HashSet<String>>,
) -> Result<(Lexicon, LoadStats), LexiconError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_udlexicon(&text, upos_filter))
}
