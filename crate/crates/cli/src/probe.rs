use std::path::Path;

use spud_core::conllu::{read_treebank, serialize, Treebank};
use spud_core::probe::{
    build_examples, evaluate, load_params, predict, save_params, train as train_probe,
    LabelInventory, ReprSet, TrainConfig,
};

use crate::args::{EvalArgs, TrainArgs};
use crate::error::{data, required, usage, CliError};
use crate::manifest::{parent_dir, write_json, write_text, Manifest};
use crate::RunContext;

fn load_reprs(path: &Path, role: &str, manifest: &mut Manifest) -> Result<ReprSet, CliError> {
    manifest.add_input(role, path)?;
    ReprSet::load(path).map_err(data)
}

fn load_treebank(path: &Path, role: &str, manifest: &mut Manifest) -> Result<Treebank, CliError> {
    manifest.add_input(role, path)?;
    read_treebank(path).map_err(data)
}

fn same_width(rel: &ReprSet, dist: &ReprSet) -> Result<(), CliError> {
    if rel.d_h() != dist.d_h() {
        return Err(data(format!(
            "relation and distance representations differ in width ({} vs {})",
            rel.d_h(),
            dist.d_h()
        )));
    }
    Ok(())
}

pub fn train(mut a: TrainArgs, ctx: &RunContext) -> Result<(), CliError> {
    let dist_path = required(a.reprs_dist.clone(), "reprs-dist")?;
    let rel_path = required(a.reprs_rel.clone(), "reprs-rel")?;
    let tb_path = required(a.treebank.clone(), "treebank")?;
    let out = required(a.out.clone(), "out")?;
    let dev_given = [&a.dev_treebank, &a.dev_reprs_dist, &a.dev_reprs_rel].map(Option::is_some);
    if dev_given.iter().any(|&g| g) && !dev_given.iter().all(|&g| g) {
        return Err(usage(
            "--dev-treebank, --dev-reprs-dist and --dev-reprs-rel go together",
        ));
    }

    let d = TrainConfig::default();
    let cfg = TrainConfig {
        b_dim: *a.b_dim.get_or_insert(d.b_dim),
        lr: *a.lr.get_or_insert(d.lr),
        lr_decay: *a.lr_decay.get_or_insert(d.lr_decay),
        batch_size: *a.batch_size.get_or_insert(d.batch_size),
        epochs: *a.epochs.get_or_insert(d.epochs),
        patience: *a.patience.get_or_insert(d.patience),
        seed: *a.seed.get_or_insert(d.seed),
        relation_bias: !a.no_relation_bias,
    };
    if !(cfg.lr.is_finite() && cfg.lr > 0.0) || !(cfg.lr_decay > 0.0 && cfg.lr_decay <= 1.0) {
        return Err(usage("--lr must be positive and --lr-decay in (0, 1]"));
    }
    if cfg.batch_size == 0 || cfg.epochs == 0 {
        return Err(usage("--batch-size and --epochs must be at least 1"));
    }

    let mut manifest = Manifest::new("probe train", &a);
    let tb = load_treebank(&tb_path, "treebank", &mut manifest)?;
    let dist = load_reprs(&dist_path, "reprs_dist", &mut manifest)?;
    let rel = load_reprs(&rel_path, "reprs_rel", &mut manifest)?;
    same_width(&rel, &dist)?;
    let dev = match (&a.dev_treebank, &a.dev_reprs_dist, &a.dev_reprs_rel) {
        (Some(t), Some(d), Some(r)) => {
            let tb = load_treebank(t, "dev_treebank", &mut manifest)?;
            let dist = load_reprs(d, "dev_reprs_dist", &mut manifest)?;
            let rel = load_reprs(r, "dev_reprs_rel", &mut manifest)?;
            same_width(&rel, &dist)?;
            Some((tb, rel, dist))
        }
        _ => None,
    };

    let labels =
        LabelInventory::from_treebanks(std::iter::once(&tb).chain(dev.as_ref().map(|(t, _, _)| t)));
    let train_set = build_examples(&tb, &rel, &dist, &labels).map_err(data)?;
    let dev_set = match &dev {
        Some((t, r, d)) => build_examples(t, r, d, &labels).map_err(data)?,
        None => {
            log::warn!("no dev set given; selecting the model on the training set");
            Vec::new()
        }
    };
    log::info!(
        "training on {} sentences ({} labels, d_h = {}, b = {})",
        train_set.len(),
        labels.len(),
        rel.d_h(),
        cfg.b_dim
    );
    let (params, train_log) =
        train_probe(&train_set, &dev_set, labels, &cfg).map_err(|e| match e {
            spud_core::probe::ProbeError::Dimension(msg) => usage(msg),
            other => data(other),
        })?;
    log::info!(
        "best dev LAS {:.2} at epoch {}",
        train_log.best_dev_las,
        train_log.best_epoch
    );
    save_params(&out, &params).map_err(data)?;
    if let Some(p) = &a.log {
        write_json(p, &train_log)?;
    }
    manifest.write(ctx, Some(parent_dir(&out)))
}

pub fn eval(a: EvalArgs, ctx: &RunContext) -> Result<(), CliError> {
    let model = required(a.model.clone(), "model")?;
    let dist_path = required(a.reprs_dist.clone(), "reprs-dist")?;
    let rel_path = required(a.reprs_rel.clone(), "reprs-rel")?;
    let tb_path = required(a.treebank.clone(), "treebank")?;
    let out = required(a.out.clone(), "out")?;

    let mut manifest = Manifest::new("probe eval", &a);
    manifest.add_input("model", &model)?;
    let params = load_params(&model).map_err(data)?;
    let tb = load_treebank(&tb_path, "treebank", &mut manifest)?;
    let dist = load_reprs(&dist_path, "reprs_dist", &mut manifest)?;
    let rel = load_reprs(&rel_path, "reprs_rel", &mut manifest)?;

    let pred = predict(&params, &rel, &dist, &tb).map_err(data)?;
    let report = evaluate(&pred, &tb).map_err(data)?;
    log::info!(
        "RelAcc {:.2}  UAS {:.2}  LAS {:.2}",
        report.rel_acc(),
        report.uas(),
        report.las()
    );
    let mut value = serde_json::to_value(&report).map_err(data)?;
    if !a.by_direction {
        let obj = value.as_object_mut().expect("report is an object");
        obj.remove("left");
        obj.remove("right");
    }
    write_json(&out, &value)?;

    if let Some(p) = &a.predictions {
        let mut decoded = tb.clone();
        for (s, t) in decoded.sentences.iter_mut().zip(&pred) {
            for (tok, (&head, label)) in s.tokens.iter_mut().zip(t.heads.iter().zip(&t.labels)) {
                tok.head = head;
                tok.deprel = label.clone();
            }
        }
        write_text(p, &serialize(&decoded))?;
    }
    manifest.write(ctx, Some(parent_dir(&out)))
}
