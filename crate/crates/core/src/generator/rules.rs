//! Language-specific pre- and post-processing for nonce generation.

use super::{FailureReason, Language, ReplacementRecord};
use crate::conllu::{Sentence, Token, Treebank};
use crate::context::CandidatePool;
use crate::lexicon::{Lexicon, PhonologyHints};

/// Arabic harakat (U+064B..=U+0652) and the superscript alef (U+0670).
pub fn is_arabic_diacritic(c: char) -> bool {
    matches!(c, '\u{064B}'..='\u{0652}' | '\u{0670}')
}

pub fn strip_arabic_diacritics(s: &str) -> String {
    s.chars().filter(|&c| !is_arabic_diacritic(c)).collect()
}

/// Normalization applied to input treebanks before pooling and generation.
pub fn preprocess(tb: &Treebank, lang: Language) -> Treebank {
    let mut tb = tb.clone();
    if lang == Language::Ar {
        for s in &mut tb.sentences {
            strip_sentence(s);
        }
    }
    tb
}

/// Normalization applied to lexicons so that their forms and lemmas match
/// preprocessed treebanks.
pub fn prepare_lexicon(lex: Lexicon, lang: Language) -> Lexicon {
    if lang == Language::Ar {
        lex.map_strings(strip_arabic_diacritics)
    } else {
        lex
    }
}

fn strip_sentence(s: &mut Sentence) {
    for t in &mut s.tokens {
        t.form = strip_arabic_diacritics(&t.form);
        t.lemma = strip_arabic_diacritics(&t.lemma);
    }
    for r in &mut s.mwt {
        r.form = strip_arabic_diacritics(&r.form);
    }
    if let Some(text) = s.text.as_deref() {
        let stripped = strip_arabic_diacritics(text);
        if stripped != text {
            s.set_text(stripped);
        }
    }
}

fn is_capitalized(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}

/// Give `replacement` an initial capital iff `original` has one.
pub fn match_case(original: &str, replacement: &str) -> String {
    let mut chars = replacement.chars();
    let Some(first) = chars.next() else {
        return String::new();
    };
    let rest = chars.as_str();
    if is_capitalized(original) {
        first.to_uppercase().chain(rest.chars()).collect()
    } else {
        first.to_lowercase().chain(rest.chars()).collect()
    }
}

const GERMAN_ADJ_ENDINGS: [&str; 5] = ["em", "en", "er", "es", "e"];

/// The inflectional ending of a German adjective form, if it has one of
/// -e, -em, -en, -er, -es.
pub fn german_adjective_ending(form: &str) -> Option<&'static str> {
    let lower = form.to_lowercase();
    GERMAN_ADJ_ENDINGS
        .iter()
        .find(|e| lower.ends_with(*e))
        .copied()
}

/// Form-level filter: may `candidate` replace `original`?
pub fn form_allowed(lang: Language, original: &Token, candidate: &str) -> bool {
    match lang {
        Language::De if original.upos == "ADJ" => match german_adjective_ending(&original.form) {
            Some(ending) => german_adjective_ending(candidate) == Some(ending),
            None => true,
        },
        _ => true,
    }
}

/// Lemma-level filter: French adjectives keep their side of the head.
pub fn lemma_allowed(lang: Language, original: &Token, pool: &CandidatePool, lemma: &str) -> bool {
    match lang {
        Language::Fr if original.upos == "ADJ" && original.head != 0 => {
            let p = pool.placement(lemma);
            if original.id < original.head {
                p.before > 0
            } else {
                p.after > 0
            }
        }
        _ => true,
    }
}

const LATIN_VOWELS: &str = "aeiouàâäéèêëîïôöùûüœæ";

fn starts_with_vowel_letter(form: &str) -> bool {
    form.chars()
        .next()
        .and_then(|c| c.to_lowercase().next())
        .is_some_and(|c| LATIN_VOWELS.contains(c))
}

fn en_vowel_initial(form: &str, hints: &PhonologyHints) -> bool {
    match hints.get(form) {
        Some(h) => h.vowel_initial,
        None => starts_with_vowel_letter(form),
    }
}

fn fr_elidable(form: &str, hints: &PhonologyHints) -> bool {
    match hints.get(form) {
        Some(h) => h.fr_elidable,
        None => {
            starts_with_vowel_letter(form)
                || form.chars().next().is_some_and(|c| c == 'h' || c == 'H')
        }
    }
}

/// Post-process a sentence whose content words have been replaced.
///
/// Capitalization is enforced for replaced tokens in Latin-script languages,
/// English indefinite articles and French elidable articles are adjusted
/// in front of replaced words, and Arabic forms lose their diacritics.
/// Records of adjusted function words are marked as replaced.
pub fn apply_language_rules(
    s: &Sentence,
    records: &mut [ReplacementRecord],
    lang: Language,
    hints: &PhonologyHints,
) -> Sentence {
    let mut out = s.clone();
    debug_assert_eq!(records.len(), out.tokens.len());

    if lang.is_latin_script() {
        for (tok, rec) in out.tokens.iter_mut().zip(records.iter_mut()) {
            if rec.replaced {
                tok.form = match_case(&rec.original_form, &tok.form);
                rec.new_form = tok.form.clone();
            }
        }
    }

    match lang {
        Language::En => {
            for i in 0..out.tokens.len().saturating_sub(1) {
                if !records[i + 1].replaced || out.mwt_covering(i + 1).is_some() {
                    continue;
                }
                let article = out.tokens[i].form.to_lowercase();
                if article != "a" && article != "an" {
                    continue;
                }
                let wanted = if en_vowel_initial(&out.tokens[i + 1].form, hints) {
                    "an"
                } else {
                    "a"
                };
                adjust_function_word(&mut out.tokens[i], &mut records[i], wanted, None);
            }
        }
        Language::Fr => {
            for i in 0..out.tokens.len().saturating_sub(1) {
                if !records[i + 1].replaced || out.mwt_covering(i + 1).is_some() {
                    continue;
                }
                let word = out.tokens[i].form.to_lowercase().replace('’', "'");
                let elide = fr_elidable(&out.tokens[i + 1].form, hints);
                let wanted = match (word.as_str(), elide) {
                    ("le" | "la", true) => "l'",
                    ("de", true) => "d'",
                    ("l'", false) => {
                        let gender = out.tokens[i]
                            .feats
                            .get("Gender")
                            .or_else(|| out.tokens[i + 1].feats.get("Gender"));
                        if gender == Some("Fem") {
                            "la"
                        } else {
                            "le"
                        }
                    }
                    ("d'", false) => "de",
                    _ => continue,
                };
                let typographic = out.tokens[i].form.contains('’');
                let wanted = if typographic {
                    wanted.replace('\'', "’")
                } else {
                    wanted.to_owned()
                };
                adjust_function_word(&mut out.tokens[i], &mut records[i], &wanted, Some(!elide));
            }
        }
        Language::Ar => {
            for (tok, rec) in out.tokens.iter_mut().zip(records.iter_mut()) {
                tok.form = strip_arabic_diacritics(&tok.form);
                rec.new_form = tok.form.clone();
            }
        }
        Language::De | Language::Ru => {}
    }
    out
}

fn adjust_function_word(
    tok: &mut Token,
    rec: &mut ReplacementRecord,
    wanted: &str,
    space_after: Option<bool>,
) {
    let form = match_case(&tok.form, wanted);
    if form == tok.form {
        return;
    }
    tok.form = form;
    if let Some(space) = space_after {
        tok.set_space_after(space);
    }
    rec.new_form = tok.form.clone();
    rec.replaced = rec.new_form != rec.original_form;
    rec.failure_reason = if rec.replaced {
        None
    } else {
        Some(FailureReason::FunctionWord)
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arabic_marks_removed() {
        // kataba with fatha on each consonant, kitab with kasra
        assert_eq!(strip_arabic_diacritics("كَتَبَ"), "كتب");
        assert_eq!(strip_arabic_diacritics("كِتَاب"), "كتاب");
        assert_eq!(strip_arabic_diacritics("هٰذا"), "هذا");
        assert_eq!(strip_arabic_diacritics("plain"), "plain");
    }

    #[test]
    fn capitalization() {
        assert_eq!(match_case("Service", "interior"), "Interior");
        assert_eq!(match_case("service", "Interior"), "interior");
        assert_eq!(match_case("BEST", "truest"), "Truest");
        assert_eq!(match_case("élan", "Été"), "été");
    }

    #[test]
    fn german_endings() {
        assert_eq!(german_adjective_ending("kleinen"), Some("en"));
        assert_eq!(german_adjective_ending("große"), Some("e"));
        assert_eq!(german_adjective_ending("kleinem"), Some("em"));
        assert_eq!(german_adjective_ending("klein"), None);
        let tok = Token {
            id: 2,
            form: "kleinen".into(),
            lemma: "klein".into(),
            upos: "ADJ".into(),
            xpos: None,
            feats: Default::default(),
            head: 3,
            deprel: "amod".into(),
            deps: None,
            misc: None,
        };
        assert!(!form_allowed(Language::De, &tok, "große"));
        assert!(form_allowed(Language::De, &tok, "großen"));
        assert!(form_allowed(Language::En, &tok, "große"));
    }
}
