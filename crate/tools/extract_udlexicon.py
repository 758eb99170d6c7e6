#!/usr/bin/env python3
"""Project a UDLexicons .conllul file onto the `form lemma upos feats` TSV
read by `spud generate --lexicon`.

Each non-comment line of the input is split on tabs and the four columns are
picked by 0-based position. The defaults (1, 2, 3, 5) follow the CoNLL-U
column order. Rows with a missing form, lemma or UPOS are dropped, FEATS is
normalised to name-sorted order and duplicate rows are written once.

Usage:
  python3 tools/extract_udlexicon.py UDLex_English.conllul -o en.lexicon.tsv
  python3 tools/extract_udlexicon.py in.conllul --upos NOUN,VERB,ADJ,ADV,PROPN
"""

import argparse
import gzip
import sys


def canonical_feats(raw):
    if not raw or raw == "_":
        return "_"
    pairs = []
    for part in raw.split("|"):
        if "=" not in part:
            return None
        name, value = part.split("=", 1)
        pairs.append((name, ",".join(sorted(value.split(",")))))
    pairs.sort(key=lambda kv: (kv[0].lower(), kv[0]))
    return "|".join(f"{k}={v}" for k, v in pairs)


def open_text(path):
    if path == "-":
        return sys.stdin
    if path.endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def extract(lines, cols, upos_filter):
    form_c, lemma_c, upos_c, feats_c = cols
    need = max(cols) + 1
    seen = set()
    kept = skipped = 0
    for line in lines:
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < need:
            skipped += 1
            continue
        form, lemma, upos = parts[form_c], parts[lemma_c], parts[upos_c]
        feats = canonical_feats(parts[feats_c])
        if feats is None or not form or lemma in ("", "_") or upos in ("", "_"):
            skipped += 1
            continue
        if upos_filter and upos not in upos_filter:
            continue
        row = (form, lemma, upos, feats)
        if row in seen:
            continue
        seen.add(row)
        kept += 1
        yield row
    print(f"extract_udlexicon: {kept} rows written, {skipped} skipped", file=sys.stderr)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("input", help=".conllul file (optionally gzipped), or - for stdin")
    ap.add_argument("-o", "--out", default="-", help="output TSV (default: stdout)")
    ap.add_argument("--form-col", type=int, default=1)
    ap.add_argument("--lemma-col", type=int, default=2)
    ap.add_argument("--upos-col", type=int, default=3)
    ap.add_argument("--feats-col", type=int, default=5)
    ap.add_argument("--upos", help="comma-separated UPOS tags to keep")
    args = ap.parse_args(argv)

    cols = (args.form_col, args.lemma_col, args.upos_col, args.feats_col)
    upos_filter = set(args.upos.split(",")) if args.upos else None
    out = sys.stdout if args.out == "-" else open(args.out, "w", encoding="utf-8")
    with open_text(args.input) as src:
        for row in extract(src, cols, upos_filter):
            out.write("\t".join(row) + "\n")
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
