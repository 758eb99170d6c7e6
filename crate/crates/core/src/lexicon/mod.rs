//! Morphological lexicons: inflected-form lookup by lemma, UPOS and
//! features, plus per-form phonological hints used by article rules.

mod udlexicon;
mod wiktextract;

use std::collections::{BTreeSet, HashMap};

use crate::conllu::Features;

pub use udlexicon::{load_udlexicon, parse_udlexicon};
pub use wiktextract::{ipa_vowel_initial, load_wiktextract, parse_wiktextract};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexEntry {
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub feats: Features,
}

/// Counters reported by the loaders for rows they had to skip.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub rows: usize,
    pub skipped: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("cannot read lexicon {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Entries grouped under (lowercased lemma, UPOS).
///
/// Within a key entries are kept sorted by (canonical feature string, form)
/// and deduplicated, which makes lookups independent of file order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: HashMap<(String, String), Vec<LexEntry>>,
}

impl Lexicon {
    pub fn new() -> Self {
        Lexicon::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = LexEntry>) -> Self {
        let mut lex = Lexicon::new();
        lex.extend(entries);
        lex
    }

    pub fn extend(&mut self, entries: impl IntoIterator<Item = LexEntry>) {
        let mut touched = BTreeSet::new();
        for entry in entries {
            if entry.form.is_empty() || entry.lemma.is_empty() {
                continue;
            }
            let key = (entry.lemma.to_lowercase(), entry.upos.clone());
            touched.insert(key.clone());
            self.entries.entry(key).or_default().push(entry);
        }
        for key in touched {
            if let Some(list) = self.entries.get_mut(&key) {
                list.sort_by_cached_key(|e| (e.feats.to_string(), e.form.clone()));
                list.dedup_by(|a, b| a.form == b.form && a.feats == b.feats);
            }
        }
    }

    /// Merge another lexicon into this one.
    pub fn merge(&mut self, other: Lexicon) {
        self.extend(other.entries.into_values().flatten());
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All entries for a lemma and UPOS, in stable order.
    pub fn entries(&self, lemma: &str, upos: &str) -> &[LexEntry] {
        self.entries
            .get(&(lemma.to_lowercase(), upos.to_owned()))
            .map_or(&[], Vec::as_slice)
    }

    /// Every form whose features are a superset of `feats`: exact matches
    /// first, then strict supersets, each group in stable order.
    pub fn inflections<'a>(
        &'a self,
        lemma: &str,
        upos: &str,
        feats: &'a Features,
    ) -> impl Iterator<Item = &'a str> + 'a {
        let entries = self.entries(lemma, upos);
        let exact = entries.iter().filter(move |e| e.feats == *feats);
        let wider = entries
            .iter()
            .filter(move |e| e.feats != *feats && e.feats.is_superset_of(feats));
        exact.chain(wider).map(|e| e.form.as_str())
    }

    /// First form (in stable order) realizing `feats` for the lemma.
    pub fn inflect<'a>(&'a self, lemma: &str, upos: &str, feats: &'a Features) -> Option<&'a str> {
        self.inflections(lemma, upos, feats).next()
    }

    /// Apply a string normalization to every form and lemma.
    pub fn map_strings(self, f: impl Fn(&str) -> String) -> Lexicon {
        Lexicon::from_entries(self.entries.into_values().flatten().map(|e| LexEntry {
            form: f(&e.form),
            lemma: f(&e.lemma),
            ..e
        }))
    }
}

/// Phonological facts about one word form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Hint {
    pub vowel_initial: bool,
    /// French: triggers the elided articles `l'` / `d'`.
    pub fr_elidable: bool,
    pub fr_aspirated_h: bool,
}

/// Hints keyed by lowercased word form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhonologyHints {
    hints: HashMap<String, Hint>,
}

impl PhonologyHints {
    pub fn new() -> Self {
        PhonologyHints::default()
    }

    /// Record a hint. The first hint recorded for a form wins; an aspirated
    /// h always clears elidability.
    pub fn insert(&mut self, form: &str, mut hint: Hint) {
        if hint.fr_aspirated_h {
            hint.fr_elidable = false;
        }
        self.hints.entry(form.to_lowercase()).or_insert(hint);
    }

    pub fn get(&self, form: &str) -> Option<Hint> {
        self.hints.get(&form.to_lowercase()).copied()
    }

    pub fn len(&self) -> usize {
        self.hints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hints.is_empty()
    }

    pub fn merge(&mut self, other: PhonologyHints) {
        for (form, hint) in other.hints {
            self.hints.entry(form).or_insert(hint);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(form: &str, lemma: &str, upos: &str, feats: &str) -> LexEntry {
        LexEntry {
            form: form.into(),
            lemma: lemma.into(),
            upos: upos.into(),
            feats: Features::parse(feats).unwrap(),
        }
    }

    fn go() -> Lexicon {
        Lexicon::from_entries([
            entry(
                "goes",
                "go",
                "VERB",
                "Number=Sing|Person=3|Tense=Pres|VerbForm=Fin",
            ),
            entry("went", "go", "VERB", "Tense=Past"),
            entry("go", "go", "VERB", "VerbForm=Inf"),
        ])
    }

    #[test]
    fn unique_match() {
        let lex = go();
        let req = Features::parse("Tense=Past").unwrap();
        assert_eq!(lex.inflect("go", "VERB", &req), Some("went"));
    }

    #[test]
    fn empty_request_gives_first_in_stable_order() {
        let lex = go();
        // "Number=Sing|..." < "Tense=Past" < "VerbForm=Inf"
        assert_eq!(lex.inflect("go", "VERB", &Features::new()), Some("goes"));
    }

    #[test]
    fn exact_match_preferred() {
        let lex = Lexicon::from_entries([
            entry(
                "alten",
                "alt",
                "ADJ",
                "Case=Acc|Degree=Pos|Gender=Masc|Number=Sing",
            ),
            entry("alt", "alt", "ADJ", "Degree=Pos"),
        ]);
        let req = Features::parse("Degree=Pos").unwrap();
        let all: Vec<_> = lex.inflections("alt", "ADJ", &req).collect();
        assert_eq!(all, ["alt", "alten"]);
    }

    #[test]
    fn absent_lemma() {
        assert_eq!(go().inflect("run", "VERB", &Features::new()), None);
        assert_eq!(go().inflect("go", "NOUN", &Features::new()), None);
    }

    #[test]
    fn lemma_key_is_lowercased() {
        let lex = Lexicon::from_entries([entry("Paris", "Paris", "PROPN", "Number=Sing")]);
        assert_eq!(
            lex.inflect("paris", "PROPN", &Features::new()),
            Some("Paris")
        );
    }

    #[test]
    fn order_independent_of_insertion() {
        let a = go();
        let mut entries: Vec<_> = a.entries("go", "VERB").to_vec();
        entries.reverse();
        entries.push(entries[0].clone());
        let b = Lexicon::from_entries(entries);
        assert_eq!(a, b);
    }

    #[test]
    fn aspirated_clears_elidable() {
        let mut hints = PhonologyHints::new();
        hints.insert(
            "Héros",
            Hint {
                vowel_initial: true,
                fr_elidable: true,
                fr_aspirated_h: true,
            },
        );
        let h = hints.get("héros").unwrap();
        assert!(h.fr_aspirated_h && !h.fr_elidable);
    }
}
