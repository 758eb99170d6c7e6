use ndarray::Array2;
use proptest::prelude::*;
use spud_core::conllu::validate_heads;
use spud_core::probe::{
    decode, read_params, read_reprs, softmax_rows, write_params, write_reprs, LabelInventory,
    ProbeParams, ReprSet,
};

fn inventory(k: usize) -> LabelInventory {
    let mut labels: Vec<String> = (0..k).map(|i| format!("rel{i}")).collect();
    labels.push("root".into());
    LabelInventory::new(labels).unwrap()
}

fn matrix(rows: usize, cols: usize, lo: f64, hi: f64) -> impl Strategy<Value = Array2<f64>> {
    prop::collection::vec(lo..hi, rows * cols)
        .prop_map(move |v| Array2::from_shape_vec((rows, cols), v).unwrap())
}

/// Distance matrices with many ties: small integers, not necessarily
/// symmetric or metric.
fn tie_heavy(n: usize) -> impl Strategy<Value = Array2<f64>> {
    prop::collection::vec(0u8..3, n * n).prop_map(move |v| {
        Array2::from_shape_vec((n, n), v.into_iter().map(f64::from).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn decode_always_returns_a_tree(
        (probs, dist) in (1usize..14).prop_flat_map(|n| (
            matrix(n, 4, 0.0, 1.0),
            prop_oneof![matrix(n, n, 0.0, 50.0), tie_heavy(n)],
        )),
    ) {
        let labels = inventory(3);
        let tree = decode(&probs, &dist, &labels).unwrap();
        prop_assert_eq!(tree.len(), probs.nrows());
        prop_assert!(validate_heads(&tree.heads).is_ok(), "{:?}", tree.heads);
        let root = tree.heads.iter().position(|&h| h == 0).unwrap();
        for (i, label) in tree.labels.iter().enumerate() {
            prop_assert_eq!(label == "root", i == root);
        }
    }

    #[test]
    fn softmax_rows_are_distributions(
        (logits, shifts) in (1usize..8, 1usize..10).prop_flat_map(|(n, k)| (
            matrix(n, k, -50.0, 50.0),
            prop::collection::vec(-1e3f64..1e3, n),
        )),
    ) {
        let p = softmax_rows(&logits);
        let mut shifted = logits.clone();
        for (mut row, s) in shifted.rows_mut().into_iter().zip(&shifts) {
            row += *s;
        }
        let q = softmax_rows(&shifted);
        for (row, qrow) in p.rows().into_iter().zip(q.rows()) {
            prop_assert!((row.sum() - 1.0).abs() <= 1e-9);
            prop_assert!(row.iter().all(|&v| (0.0..=1.0).contains(&v)));
            let argmax = |r: ndarray::ArrayView1<f64>| {
                r.iter().enumerate().fold(0, |best, (i, &v)| if v > r[best] { i } else { best })
            };
            prop_assert_eq!(argmax(row), argmax(qrow));
        }
    }

    #[test]
    fn representation_files_round_trip(
        sents in prop::collection::vec((1usize..6, prop::collection::vec(-1e3f32..1e3, 30)), 0..5),
    ) {
        let d_h = 5;
        let mut set = ReprSet::new(d_h);
        for (k, (n, vals)) in sents.iter().enumerate() {
            let m = Array2::from_shape_fn((*n, d_h), |(i, j)| f64::from(vals[(i * d_h + j) % vals.len()]));
            set.push(format!("sent-{k}-ü"), m).unwrap();
        }
        let mut buf = Vec::new();
        write_reprs(&mut buf, &set).unwrap();
        let back = read_reprs(buf.as_slice(), "mem").unwrap();
        prop_assert_eq!(back, set);
    }

    #[test]
    fn parameter_files_round_trip(
        (l, bias, b) in (1usize..6, 1usize..4).prop_flat_map(|(d, k)| (
            prop::collection::vec(-10f32..10.0, (k + 1) * (d + 1)),
            prop::collection::vec(-10f32..10.0, k + 1),
            prop::collection::vec(-10f32..10.0, d),
        )),
    ) {
        let k = bias.len() - 1;
        let d_h = l.len() / (k + 1) - 1;
        let mut params = ProbeParams::zeros(inventory(k), d_h, 1);
        params.l = Array2::from_shape_fn((k + 1, d_h), |(i, j)| f64::from(l[i * (d_h + 1) + j]));
        params.l_bias = bias.iter().map(|&v| f64::from(v)).collect();
        params.b = Array2::from_shape_fn((1, d_h), |(_, j)| f64::from(b[j]));
        let mut buf = Vec::new();
        write_params(&mut buf, &params).unwrap();
        let back = read_params(buf.as_slice(), "mem").unwrap();
        prop_assert_eq!(back, params);
    }
}

#[test]
fn truncated_files_are_rejected() {
    let mut set = ReprSet::new(2);
    set.push("a", Array2::from_elem((2, 2), 1.0)).unwrap();
    let mut buf = Vec::new();
    write_reprs(&mut buf, &set).unwrap();
    for cut in [4, 12, buf.len() - 1] {
        assert!(read_reprs(&buf[..cut], "mem").is_err(), "cut at {cut}");
    }
    let params = ProbeParams::zeros(inventory(1), 2, 1);
    let mut buf = Vec::new();
    write_params(&mut buf, &params).unwrap();
    assert!(read_params(&buf[..buf.len() - 2], "mem").is_err());
    buf.push(0);
    assert!(read_params(buf.as_slice(), "mem").is_err());
}
