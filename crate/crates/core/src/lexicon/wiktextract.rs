use std::path::Path;

use log::warn;
use serde::Deserialize;

use super::{Hint, LexEntry, Lexicon, LexiconError, LoadStats, PhonologyHints};
use crate::conllu::Features;

#[derive(Deserialize)]
struct Record {
    word: Option<String>,
    lang_code: Option<String>,
    pos: Option<String>,
    #[serde(default)]
    forms: Vec<Form>,
    #[serde(default)]
    sounds: Vec<Sound>,
    #[serde(default)]
    tags: Vec<String>,
    #[serde(default)]
    categories: Vec<serde_json::Value>,
}

#[derive(Deserialize)]
struct Form {
    form: String,
    #[serde(default)]
    tags: Vec<String>,
}

#[derive(Deserialize)]
struct Sound {
    ipa: Option<String>,
    #[serde(default)]
    tags: Vec<String>,
}

const IPA_VOWELS: &str = "aeiouyæɑɒɐɔəɘɛɜɞɤɨɪʉʊʌʏøœɶɵɯɚɝ";

/// Whether an IPA transcription starts with a vowel sound.
pub fn ipa_vowel_initial(ipa: &str) -> Option<bool> {
    ipa.chars()
        .find(|c| {
            !matches!(
                c,
                '/' | '[' | ']' | '\\' | '(' | ')' | 'ˈ' | 'ˌ' | '.' | ' ' | '-'
            )
        })
        .map(|c| IPA_VOWELS.contains(c))
}

fn map_pos(pos: &str) -> Option<&'static str> {
    Some(match pos {
        "noun" => "NOUN",
        "name" => "PROPN",
        "verb" => "VERB",
        "adj" => "ADJ",
        "adv" => "ADV",
        _ => return None,
    })
}

fn base_features(upos: &str) -> Features {
    match upos {
        "NOUN" | "PROPN" => [("Number", "Sing")].into_iter().collect(),
        "VERB" => [("VerbForm", "Inf")].into_iter().collect(),
        "ADJ" => [("Degree", "Pos")].into_iter().collect(),
        _ => Features::new(),
    }
}

const SKIP_FORM_TAGS: &[&str] = &[
    "table-tags",
    "inflection-template",
    "romanization",
    "canonical",
    "class",
];

fn form_features(upos: &str, tags: &[String]) -> Features {
    let mut feats = Features::new();
    for tag in tags {
        let (name, value) = match tag.as_str() {
            "singular" => ("Number", "Sing"),
            "plural" => ("Number", "Plur"),
            "masculine" => ("Gender", "Masc"),
            "feminine" => ("Gender", "Fem"),
            "neuter" => ("Gender", "Neut"),
            "past" => ("Tense", "Past"),
            "present" => ("Tense", "Pres"),
            "future" => ("Tense", "Fut"),
            "participle" => ("VerbForm", "Part"),
            "infinitive" => ("VerbForm", "Inf"),
            "gerund" => ("VerbForm", "Ger"),
            "first-person" => ("Person", "1"),
            "second-person" => ("Person", "2"),
            "third-person" => ("Person", "3"),
            "comparative" => ("Degree", "Cmp"),
            "superlative" => ("Degree", "Sup"),
            "nominative" => ("Case", "Nom"),
            "accusative" => ("Case", "Acc"),
            "genitive" => ("Case", "Gen"),
            "dative" => ("Case", "Dat"),
            "instrumental" => ("Case", "Ins"),
            "prepositional" | "locative" => ("Case", "Loc"),
            _ => continue,
        };
        feats.insert(name, value);
    }
    if upos == "VERB" && feats.get("Tense").is_some() && feats.get("VerbForm").is_none() {
        feats.insert("VerbForm", "Fin");
        feats.insert("Mood", "Ind");
    }
    feats
}

fn is_aspirated_marker(s: &str) -> bool {
    let s = s.to_lowercase();
    s.contains("aspirated h") || s.contains("h aspiré") || s == "aspirated-h" || s == "h-aspirated"
}

fn aspirated(record: &Record, lang: &str) -> bool {
    if lang != "fr" {
        return false;
    }
    let category = record.categories.iter().any(|c| match c {
        serde_json::Value::String(s) => is_aspirated_marker(s),
        serde_json::Value::Object(o) => o
            .get("name")
            .and_then(|n| n.as_str())
            .is_some_and(is_aspirated_marker),
        _ => false,
    });
    let tag = record
        .tags
        .iter()
        .chain(record.sounds.iter().flat_map(|s| s.tags.iter()))
        .any(|t| is_aspirated_marker(t));
    let ipa = record
        .sounds
        .iter()
        .filter_map(|s| s.ipa.as_deref())
        .any(|ipa| {
            ipa.trim_start_matches(['/', '[', '\\'])
                .starts_with(['ʔ', '\''])
        });
    category || tag || ipa
}

/// Parse a line-delimited wiktextract dump, keeping records for `lang`.
///
/// Content-word records (noun, name, verb, adj, adv) contribute the head
/// word and its inflected forms to the lexicon. Every record with an IPA
/// transcription contributes phonology hints for the word and its forms.
pub fn parse_wiktextract(text: &str, lang: &str) -> (Lexicon, PhonologyHints, LoadStats) {
    let mut stats = LoadStats::default();
    let mut entries = Vec::new();
    let mut hints = PhonologyHints::new();

    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        stats.rows += 1;
        let record: Record = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => {
                warn!("wiktextract line {}: {}, skipping", idx + 1, e);
                stats.skipped += 1;
                continue;
            }
        };
        let Some(word) = record.word.as_deref().filter(|w| !w.is_empty()) else {
            warn!(
                "wiktextract line {}: record without word, skipping",
                idx + 1
            );
            stats.skipped += 1;
            continue;
        };
        if record.lang_code.as_deref().is_some_and(|l| l != lang) {
            continue;
        }

        let forms: Vec<&Form> = record
            .forms
            .iter()
            .filter(|f| !f.form.is_empty() && f.form != "-")
            .filter(|f| !f.tags.iter().any(|t| SKIP_FORM_TAGS.contains(&t.as_str())))
            .collect();

        if let Some(upos) = record.pos.as_deref().and_then(map_pos) {
            entries.push(LexEntry {
                form: word.to_owned(),
                lemma: word.to_owned(),
                upos: upos.to_owned(),
                feats: base_features(upos),
            });
            for f in &forms {
                entries.push(LexEntry {
                    form: f.form.clone(),
                    lemma: word.to_owned(),
                    upos: upos.to_owned(),
                    feats: form_features(upos, &f.tags),
                });
            }
        }

        let vowel = record
            .sounds
            .iter()
            .filter_map(|s| s.ipa.as_deref())
            .find_map(ipa_vowel_initial);
        if let Some(vowel_initial) = vowel {
            let aspirated_h = aspirated(&record, lang);
            let hint = Hint {
                vowel_initial,
                fr_elidable: lang == "fr" && vowel_initial && !aspirated_h,
                fr_aspirated_h: aspirated_h,
            };
            hints.insert(word, hint);
            for f in &forms {
                hints.insert(&f.form, hint);
            }
        }
    }
    (Lexicon::from_entries(entries), hints, stats)
}

pub fn load_wiktextract(
    path: impl AsRef<Path>,
    lang: &str,
) -> Result<(Lexicon, PhonologyHints, LoadStats), LexiconError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_wiktextract(&text, lang))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vowel_initial_english_noun() {
        let line = r#"{"word": "apple", "lang_code": "en", "pos": "noun", "forms": [{"form": "apples", "tags": ["plural"]}], "sounds": [{"ipa": "/ˈæp.əl/"}]}"#;
        let (lex, hints, stats) = parse_wiktextract(line, "en");
        assert_eq!(stats.skipped, 0);
        assert!(hints.get("apple").unwrap().vowel_initial);
        assert!(hints.get("apples").unwrap().vowel_initial);
        let plur = Features::parse("Number=Plur").unwrap();
        assert_eq!(lex.inflect("apple", "NOUN", &plur), Some("apples"));
    }

    #[test]
    fn consonant_initial() {
        let line = r#"{"word": "university", "lang_code": "en", "pos": "noun", "sounds": [{"ipa": "/ˌjuː.nɪˈvɜː.sɪ.ti/"}]}"#;
        let (_, hints, _) = parse_wiktextract(line, "en");
        assert!(!hints.get("university").unwrap().vowel_initial);
    }

    #[test]
    fn french_aspirated_h() {
        let line = r#"{"word": "héros", "lang_code": "fr", "pos": "noun", "categories": ["French words with aspirated h"], "sounds": [{"ipa": "/e.ʁo/"}]}"#;
        let (_, hints, _) = parse_wiktextract(line, "fr");
        let h = hints.get("héros").unwrap();
        assert!(h.fr_aspirated_h);
        assert!(!h.fr_elidable);
    }

    #[test]
    fn french_mute_h_is_elidable() {
        let line =
            r#"{"word": "homme", "lang_code": "fr", "pos": "noun", "sounds": [{"ipa": "/ɔm/"}]}"#;
        let (_, hints, _) = parse_wiktextract(line, "fr");
        let h = hints.get("homme").unwrap();
        assert!(h.fr_elidable && !h.fr_aspirated_h);
    }

    #[test]
    fn no_pronunciation_means_no_hint() {
        let line = r#"{"word": "zorp", "lang_code": "en", "pos": "noun"}"#;
        let (lex, hints, _) = parse_wiktextract(line, "en");
        assert_eq!(lex.entries("zorp", "NOUN").len(), 1);
        assert!(hints.get("zorp").is_none());
    }

    #[test]
    fn malformed_lines_are_counted() {
        let text = "{not json}\n{\"word\": \"x\", \"lang_code\": \"de\", \"pos\": \"noun\"}\n";
        let (lex, _, stats) = parse_wiktextract(text, "en");
        assert_eq!(stats.rows, 2);
        assert_eq!(stats.skipped, 1);
        assert!(lex.is_empty());
    }

    #[test]
    fn finite_verb_forms() {
        let line = r#"{"word": "go", "lang_code": "en", "pos": "verb", "forms": [{"form": "went", "tags": ["past"]}, {"form": "goes", "tags": ["present", "singular", "third-person"]}]}"#;
        let (lex, _, _) = parse_wiktextract(line, "en");
        let req = Features::parse("Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin").unwrap();
        assert_eq!(lex.inflect("go", "VERB", &req), Some("goes"));
        let inf = Features::parse("VerbForm=Inf").unwrap();
        assert_eq!(lex.inflect("go", "VERB", &inf), Some("go"));
    }
}
