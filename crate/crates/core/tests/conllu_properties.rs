use std::collections::VecDeque;
use std::path::PathBuf;

use proptest::prelude::*;
use spud_core::conllu::{
    distances_from_heads, parse_conllu, path_distance_matrix, serialize, validate_heads,
};

/// Heads (1-based, 0 = root) of a random tree: nodes join in a random order,
/// each attaching to a node that joined earlier.
fn tree(max_n: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..=max_n).prop_flat_map(|n| {
        (
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(any::<usize>(), n),
        )
            .prop_map(move |(order, picks)| {
                let mut heads = vec![0; n];
                for k in 1..n {
                    heads[order[k]] = order[picks[k] % k] + 1;
                }
                heads
            })
    })
}

fn bfs_distances(heads: &[usize]) -> Vec<Vec<usize>> {
    let n = heads.len();
    let mut adj = vec![Vec::new(); n];
    for (i, &h) in heads.iter().enumerate() {
        if h > 0 {
            adj[i].push(h - 1);
            adj[h - 1].push(i);
        }
    }
    (0..n)
        .map(|src| {
            let mut dist = vec![usize::MAX; n];
            dist[src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            dist
        })
        .collect()
}

/// Independent well-formedness check: one root, and every word reaches it.
fn is_tree(heads: &[usize]) -> bool {
    let n = heads.len();
    if n == 0 || heads.iter().filter(|&&h| h == 0).count() != 1 || heads.iter().any(|&h| h > n) {
        return false;
    }
    (0..n).all(|start| {
        let mut cur = start;
        for _ in 0..=n {
            match heads[cur] {
                0 => return true,
                h => cur = h - 1,
            }
        }
        false
    })
}

const FEATURES: [(&str, &[&str]); 7] = [
    ("Case", &["Nom", "Acc", "Dat"]),
    ("Definite", &["Def", "Ind"]),
    ("Gender", &["Fem", "Masc", "Masc,Neut"]),
    ("Number", &["Sing", "Plur"]),
    ("NumType", &["Card"]),
    ("Person", &["1", "3"]),
    ("PronType", &["Art", "Int,Rel"]),
];

fn feats() -> impl Strategy<Value = String> {
    prop::collection::vec((any::<bool>(), any::<usize>()), FEATURES.len()).prop_map(|picks| {
        let mut parts: Vec<(&str, &str)> = FEATURES
            .iter()
            .zip(picks)
            .filter(|(_, (keep, _))| *keep)
            .map(|((name, values), (_, v))| (*name, values[v % values.len()]))
            .collect();
        parts.sort_by_key(|(n, _)| n.to_lowercase());
        if parts.is_empty() {
            "_".into()
        } else {
            parts
                .iter()
                .map(|(n, v)| format!("{n}={v}"))
                .collect::<Vec<_>>()
                .join("|")
        }
    })
}

fn word() -> impl Strategy<Value = String> {
    "[a-zA-Zéüßل'’.,!?-]{1,6}"
}

fn column(inner: BoxedStrategy<String>) -> impl Strategy<Value = String> {
    prop_oneof![Just("_".to_owned()), inner]
}

#[derive(Debug, Clone)]
struct Row {
    form: String,
    lemma: String,
    upos: &'static str,
    xpos: String,
    feats: String,
    deprel: &'static str,
    deps: String,
    misc: String,
}

fn row() -> impl Strategy<Value = Row> {
    (
        word(),
        word(),
        prop::sample::select(vec!["NOUN", "VERB", "ADJ", "DET", "PUNCT", "ADP"]),
        column("[A-Z]{2,4}".boxed()),
        feats(),
        prop::sample::select(vec!["nsubj", "obj", "amod", "det", "punct", "nmod:poss"]),
        column("[1-4]:(nsubj|obj)".boxed()),
        column(prop_oneof![Just("SpaceAfter=No".to_owned()), "Gloss=[a-z]{1,4}"].boxed()),
    )
        .prop_map(|(form, lemma, upos, xpos, feats, deprel, deps, misc)| Row {
            form,
            lemma,
            upos,
            xpos,
            feats,
            deprel,
            deps,
            misc,
        })
}

/// A well-formed CoNLL-U sentence block, with comments, an optional
/// multiword range and an optional empty node.
fn sentence(idx: usize) -> impl Strategy<Value = String> {
    tree(8).prop_flat_map(move |heads| {
        let n = heads.len();
        (
            Just(heads),
            prop::collection::vec(row(), n),
            prop::option::of(1..=n),
            prop::option::of(0..=n),
            any::<bool>(),
        )
            .prop_map(move |(heads, rows, mwt, empty, extra_comment)| {
                let mut out = format!("# sent_id = s-{idx}\n");
                if extra_comment {
                    out.push_str("# newpar\n");
                }
                let text: Vec<&str> = rows.iter().map(|r| r.form.as_str()).collect();
                out.push_str(&format!("# text = {}\n", text.join(" ")));
                if empty == Some(0) {
                    out.push_str("0.1\tnull\t_\t_\t_\t_\t_\t_\t1:dep\t_\n");
                }
                for (i, (r, h)) in rows.iter().zip(&heads).enumerate() {
                    let id = i + 1;
                    if mwt == Some(id) && id < n {
                        out.push_str(&format!(
                            "{id}-{}\t{}{}\t_\t_\t_\t_\t_\t_\t_\t_\n",
                            id + 1,
                            r.form,
                            rows[i + 1].form
                        ));
                    }
                    let deprel = if *h == 0 { "root" } else { r.deprel };
                    out.push_str(&format!(
                        "{id}\t{}\t{}\t{}\t{}\t{}\t{h}\t{deprel}\t{}\t{}\n",
                        r.form, r.lemma, r.upos, r.xpos, r.feats, r.deps, r.misc
                    ));
                    if empty == Some(id) {
                        out.push_str(&format!("{id}.1\tnull\t_\t_\t_\t_\t_\t_\t{id}:dep\t_\n"));
                    }
                }
                out.push('\n');
                out
            })
    })
}

fn treebank_text() -> impl Strategy<Value = String> {
    (1..5usize).prop_flat_map(|k| {
        (0..k)
            .map(sentence)
            .collect::<Vec<_>>()
            .prop_map(|blocks| blocks.concat())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn serialization_round_trips_byte_for_byte(text in treebank_text()) {
        let tb = parse_conllu(&text).unwrap();
        prop_assert_eq!(serialize(&tb), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn distances_match_breadth_first_search(heads in tree(20)) {
        prop_assert!(validate_heads(&heads).is_ok());
        let d = distances_from_heads(&heads);
        let oracle = bfs_distances(&heads);
        for (i, row) in oracle.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                prop_assert_eq!(d[(i, j)], v);
            }
        }
    }

    #[test]
    fn validation_agrees_with_reachability(
        heads in tree(12),
        edits in prop::collection::vec((any::<usize>(), 0usize..14), 0..3),
    ) {
        let mut heads = heads;
        let n = heads.len();
        for (pos, head) in edits {
            heads[pos % n] = head;
        }
        prop_assert_eq!(validate_heads(&heads).is_ok(), is_tree(&heads), "{:?}", heads);
    }
}

#[test]
fn sentence_distances_use_token_heads() {
    let text = "1\tA\ta\tDET\t_\t_\t2\tdet\t_\t_\n2\tcat\tcat\tNOUN\t_\t_\t3\tnsubj\t_\t_\n3\tsat\tsit\tVERB\t_\t_\t0\troot\t_\t_\n\n";
    let tb = parse_conllu(text).unwrap();
    let d = path_distance_matrix(&tb.sentences[0]);
    assert_eq!(d[(0, 2)], 2);
    assert_eq!(d[(2, 0)], 2);
    assert_eq!(d[(1, 1)], 0);
}

#[test]
fn bundled_treebanks_round_trip() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/mini");
    for lang in ["ar", "de", "en", "fr", "ru"] {
        let text = std::fs::read_to_string(dir.join(format!("{lang}.conllu"))).unwrap();
        let tb = parse_conllu(&text).unwrap();
        assert_eq!(serialize(&tb), text, "{lang}");
    }
}
