//! Reading, writing and inspecting CoNLL-U treebanks.
//!
//! The parser keeps everything it does not interpret (unknown comments,
//! DEPS, MISC, empty nodes) verbatim so that well-formed files round-trip
//! byte for byte through [`parse_conllu`] and [`serialize`].

mod features;
mod tree;

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

pub use features::{FeatureError, Features};
pub use tree::{
    distances_from_heads, filter_short, path_distance_matrix, validate_heads, TreeError,
};

/// A syntactic word (an integer-id line).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: Option<String>,
    pub feats: Features,
    pub head: usize,
    pub deprel: String,
    pub deps: Option<String>,
    pub misc: Option<String>,
}

impl Token {
    /// Whether MISC carries `SpaceAfter=No`.
    pub fn no_space_after(&self) -> bool {
        misc_has_no_space(self.misc.as_deref())
    }

    /// Add or remove `SpaceAfter=No` in MISC, leaving other entries alone.
    pub fn set_space_after(&mut self, space: bool) {
        self.misc = set_space_after(self.misc.take(), space);
    }
}

fn misc_has_no_space(misc: Option<&str>) -> bool {
    misc.is_some_and(|m| m.split('|').any(|p| p == "SpaceAfter=No"))
}

fn set_space_after(misc: Option<String>, space: bool) -> Option<String> {
    let mut parts: Vec<String> = misc
        .iter()
        .flat_map(|m| m.split('|'))
        .filter(|p| *p != "SpaceAfter=No" && !p.is_empty())
        .map(str::to_owned)
        .collect();
    if !space {
        parts.push("SpaceAfter=No".to_owned());
        parts.sort_by_key(|p| p.to_lowercase());
    }
    if parts.is_empty() {
        None
    } else {
        Some(parts.join("|"))
    }
}

/// A multiword-token range line such as `1-2  du`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MwtRange {
    pub first: usize,
    pub last: usize,
    pub form: String,
    pub misc: Option<String>,
}

impl MwtRange {
    pub fn covers(&self, id: usize) -> bool {
        self.first <= id && id <= self.last
    }
}

/// An enhanced-dependency empty node (`5.1`), carried as an opaque line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmptyNode {
    /// Integer part of the id: the node is written after this token.
    pub after: usize,
    pub line: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Sentence {
    pub sent_id: String,
    pub text: Option<String>,
    /// Raw comment lines (including the leading `#`), in file order.
    pub comments: Vec<String>,
    pub tokens: Vec<Token>,
    pub mwt: Vec<MwtRange>,
    pub empty_nodes: Vec<EmptyNode>,
}

impl Sentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token with the given 1-based id.
    pub fn token(&self, id: usize) -> Option<&Token> {
        id.checked_sub(1).and_then(|idx| self.tokens.get(idx))
    }

    /// Ids of the dependents of `id`, in ascending order.
    pub fn dependents(&self, id: usize) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.head == id)
    }

    pub fn mwt_covering(&self, id: usize) -> Option<&MwtRange> {
        self.mwt.iter().find(|r| r.covers(id))
    }

    /// Replace (or add) the `# text = ...` comment.
    pub fn set_text(&mut self, text: String) {
        let line = format!("# text = {}", text);
        match self
            .comments
            .iter()
            .position(|c| comment_value(c, "text").is_some())
        {
            Some(idx) => self.comments[idx] = line,
            None => self.comments.push(line),
        }
        self.text = Some(text);
    }

    /// Surface text reconstructed from forms and `SpaceAfter=No`, using the
    /// multiword surface form where a range covers several words.
    pub fn detokenize(&self) -> String {
        let mut out = String::new();
        let mut id = 1;
        while id <= self.tokens.len() {
            let (form, glue, next) = match self.mwt.iter().find(|r| r.first == id) {
                Some(range) => (
                    range.form.as_str(),
                    misc_has_no_space(range.misc.as_deref()),
                    range.last + 1,
                ),
                None => {
                    let tok = &self.tokens[id - 1];
                    (tok.form.as_str(), tok.no_space_after(), id + 1)
                }
            };
            out.push_str(form);
            if !glue && next <= self.tokens.len() {
                out.push(' ');
            }
            id = next;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Treebank {
    pub sentences: Vec<Sentence>,
    pub source_path: String,
}

impl Treebank {
    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConlluErrorKind {
    #[error("expected 10 tab-separated columns, found {0}")]
    ColumnCount(usize),
    #[error("invalid token id `{0}`")]
    InvalidId(String),
    #[error("duplicate token id {0}")]
    DuplicateId(usize),
    #[error("token ids must be 1..n without gaps: expected {expected}, found {found}")]
    IdGap { expected: usize, found: usize },
    #[error("invalid multiword range `{0}`")]
    InvalidRange(String),
    #[error("invalid head `{0}`")]
    InvalidHead(String),
    #[error(transparent)]
    Features(#[from] FeatureError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("sentence has no tokens")]
    EmptySentence,
    #[error("duplicate sentence id `{0}`")]
    DuplicateSentId(String),
}

/// A parse failure, located by sentence id and 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}line {line}: {kind}", sent_id.as_ref().map(|s| format!("sentence `{}`, ", s)).unwrap_or_default())]
pub struct ConlluError {
    pub line: usize,
    pub sent_id: Option<String>,
    pub kind: ConlluErrorKind,
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: ConlluError },
}

/// Read and parse a CoNLL-U file.
pub fn read_treebank(path: impl AsRef<Path>) -> Result<Treebank, ReadError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ReadError::Io {
        path: display.clone(),
        source,
    })?;
    let mut tb = parse_conllu(&text).map_err(|source| ReadError::Parse {
        path: display.clone(),
        source,
    })?;
    tb.source_path = display;
    Ok(tb)
}

/// Value of a `# key = value` comment line.
fn comment_value<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.strip_prefix('#')?.trim_start().strip_prefix(key)?;
    let rest = rest.trim_start().strip_prefix('=')?;
    Some(rest.strip_prefix(' ').unwrap_or(rest))
}

fn opt_column(s: &str) -> Option<String> {
    if s == "_" {
        None
    } else {
        Some(s.to_owned())
    }
}

#[derive(Default)]
struct SentenceBuilder {
    start_line: usize,
    sentence: Sentence,
    has_sent_id: bool,
    token_lines: Vec<usize>,
}

impl SentenceBuilder {
    fn err(&self, line: usize, kind: impl Into<ConlluErrorKind>) -> ConlluError {
        ConlluError {
            line,
            sent_id: self.has_sent_id.then(|| self.sentence.sent_id.clone()),
            kind: kind.into(),
        }
    }

    fn push_line(&mut self, line_no: usize, line: &str) -> Result<(), ConlluError> {
        if self.start_line == 0 {
            self.start_line = line_no;
        }
        if line.starts_with('#') {
            if let Some(id) = comment_value(line, "sent_id") {
                self.sentence.sent_id = id.trim().to_owned();
                self.has_sent_id = true;
            } else if let Some(text) = comment_value(line, "text") {
                self.sentence.text = Some(text.to_owned());
            }
            self.sentence.comments.push(line.to_owned());
            return Ok(());
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(self.err(line_no, ConlluErrorKind::ColumnCount(cols.len())));
        }
        let id = cols[0];
        if let Some((first, last)) = id.split_once('-') {
            let parse = |s: &str| s.parse::<usize>().ok().filter(|&v| v > 0);
            let (first, last) = match (parse(first), parse(last)) {
                (Some(f), Some(l)) if f <= l => (f, l),
                _ => return Err(self.err(line_no, ConlluErrorKind::InvalidRange(id.into()))),
            };
            if self.sentence.mwt.iter().any(|r| r.last >= first) {
                return Err(self.err(line_no, ConlluErrorKind::InvalidRange(id.into())));
            }
            self.sentence.mwt.push(MwtRange {
                first,
                last,
                form: cols[1].to_owned(),
                misc: opt_column(cols[9]),
            });
            return Ok(());
        }
        if let Some((major, minor)) = id.split_once('.') {
            let after = major
                .parse::<usize>()
                .ok()
                .filter(|_| minor.parse::<usize>().is_ok())
                .ok_or_else(|| self.err(line_no, ConlluErrorKind::InvalidId(id.into())))?;
            self.sentence.empty_nodes.push(EmptyNode {
                after,
                line: line.to_owned(),
            });
            return Ok(());
        }

        let id: usize = id
            .parse()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| self.err(line_no, ConlluErrorKind::InvalidId(id.into())))?;
        let expected = self.sentence.tokens.len() + 1;
        if id != expected {
            let kind = if id < expected {
                ConlluErrorKind::DuplicateId(id)
            } else {
                ConlluErrorKind::IdGap {
                    expected,
                    found: id,
                }
            };
            return Err(self.err(line_no, kind));
        }
        let head = cols[6]
            .parse::<usize>()
            .map_err(|_| self.err(line_no, ConlluErrorKind::InvalidHead(cols[6].into())))?;
        let feats = Features::parse(cols[5]).map_err(|e| self.err(line_no, e))?;
        self.sentence.tokens.push(Token {
            id,
            form: cols[1].to_owned(),
            lemma: cols[2].to_owned(),
            upos: cols[3].to_owned(),
            xpos: opt_column(cols[4]),
            feats,
            head,
            deprel: cols[7].to_owned(),
            deps: opt_column(cols[8]),
            misc: opt_column(cols[9]),
        });
        self.token_lines.push(line_no);
        Ok(())
    }

    fn finish(mut self, index: usize) -> Result<Sentence, ConlluError> {
        if self.sentence.tokens.is_empty() {
            return Err(self.err(self.start_line, ConlluErrorKind::EmptySentence));
        }
        let n = self.sentence.tokens.len();
        if let Some(range) = self.sentence.mwt.iter().find(|r| r.last > n) {
            let kind = ConlluErrorKind::InvalidRange(format!("{}-{}", range.first, range.last));
            return Err(self.err(self.start_line, kind));
        }
        let heads: Vec<usize> = self.sentence.tokens.iter().map(|t| t.head).collect();
        if let Err(e) = validate_heads(&heads) {
            let line = e
                .token()
                .and_then(|id| self.token_lines.get(id - 1).copied())
                .unwrap_or(self.start_line);
            return Err(self.err(line, e));
        }
        if !self.has_sent_id {
            self.sentence.sent_id = format!("s{}", index + 1);
        }
        Ok(self.sentence)
    }
}

/// Parse CoNLL-U text into a treebank.
///
/// Sentences without a `sent_id` comment get a positional id `s<k>`
/// (1-based) that is not written back on serialization.
pub fn parse_conllu(text: &str) -> Result<Treebank, ConlluError> {
    let mut sentences = Vec::new();
    let mut seen = HashSet::new();
    let mut current: Option<SentenceBuilder> = None;

    let mut finish = |builder: SentenceBuilder, sentences: &mut Vec<Sentence>| {
        let start = builder.start_line;
        let sentence = builder.finish(sentences.len())?;
        if !seen.insert(sentence.sent_id.clone()) {
            return Err(ConlluError {
                line: start,
                sent_id: Some(sentence.sent_id.clone()),
                kind: ConlluErrorKind::DuplicateSentId(sentence.sent_id),
            });
        }
        sentences.push(sentence);
        Ok(())
    };

    for (idx, line) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            if let Some(builder) = current.take() {
                finish(builder, &mut sentences)?;
            }
            continue;
        }
        current
            .get_or_insert_with(SentenceBuilder::default)
            .push_line(line_no, line)?;
    }
    if let Some(builder) = current.take() {
        finish(builder, &mut sentences)?;
    }

    Ok(Treebank {
        sentences,
        source_path: String::new(),
    })
}

fn write_token(out: &mut String, t: &Token) {
    let _ = writeln!(
        out,
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
        t.id,
        t.form,
        t.lemma,
        t.upos,
        t.xpos.as_deref().unwrap_or("_"),
        t.feats,
        t.head,
        t.deprel,
        t.deps.as_deref().unwrap_or("_"),
        t.misc.as_deref().unwrap_or("_"),
    );
}

pub fn serialize_sentence(out: &mut String, s: &Sentence) {
    for c in &s.comments {
        out.push_str(c);
        out.push('\n');
    }
    let empty_after = |out: &mut String, id: usize| {
        for node in s.empty_nodes.iter().filter(|e| e.after == id) {
            out.push_str(&node.line);
            out.push('\n');
        }
    };
    empty_after(out, 0);
    for t in &s.tokens {
        for r in s.mwt.iter().filter(|r| r.first == t.id) {
            let _ = writeln!(
                out,
                "{}-{}\t{}\t_\t_\t_\t_\t_\t_\t_\t{}",
                r.first,
                r.last,
                r.form,
                r.misc.as_deref().unwrap_or("_")
            );
        }
        write_token(out, t);
        empty_after(out, t.id);
    }
    out.push('\n');
}

/// Serialize a treebank to CoNLL-U text.
pub fn serialize(tb: &Treebank) -> String {
    let mut out = String::new();
    for s in &tb.sentences {
        serialize_sentence(&mut out, s);
    }
    out
}
