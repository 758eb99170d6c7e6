use std::cmp::Ordering;
use std::fmt;

/// Morphological features of a token (the CoNLL-U FEATS column).
///
/// Features are kept in the canonical UD order: sorted by feature name,
/// case-insensitively. Values are stored verbatim, so multi-valued features
/// such as `PronType=Int,Rel` survive unchanged.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Features(Vec<(String, String)>);

fn name_order(a: &str, b: &str) -> Ordering {
    a.to_lowercase()
        .cmp(&b.to_lowercase())
        .then_with(|| a.cmp(b))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed feature `{0}`")]
pub struct FeatureError(pub String);

impl Features {
    pub fn new() -> Self {
        Features(Vec::new())
    }

    /// Parse a FEATS column. `_` and the empty string are the empty set.
    pub fn parse(s: &str) -> Result<Self, FeatureError> {
        let mut feats = Features::new();
        if s.is_empty() || s == "_" {
            return Ok(feats);
        }
        for part in s.split('|') {
            let (name, value) = part
                .split_once('=')
                .filter(|(n, v)| !n.is_empty() && !v.is_empty())
                .ok_or_else(|| FeatureError(part.to_owned()))?;
            feats.insert(name, value);
        }
        Ok(feats)
    }

    /// Insert or overwrite a feature.
    pub fn insert(&mut self, name: impl Into<String>, value: impl Into<String>) {
        let name = name.into();
        let value = value.into();
        match self.0.binary_search_by(|(n, _)| name_order(n, &name)) {
            Ok(idx) => self.0[idx].1 = value,
            Err(idx) => self.0.insert(idx, (name, value)),
        }
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.0
            .binary_search_by(|(n, _)| name_order(n, name))
            .ok()
            .map(|idx| self.0[idx].1.as_str())
    }

    pub fn remove(&mut self, name: &str) -> Option<String> {
        self.0
            .binary_search_by(|(n, _)| name_order(n, name))
            .ok()
            .map(|idx| self.0.remove(idx).1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(n, v)| (n.as_str(), v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when every feature-value pair of `other` occurs verbatim here.
    pub fn is_superset_of(&self, other: &Features) -> bool {
        other.iter().all(|(n, v)| self.get(n) == Some(v))
    }
}

impl fmt::Display for Features {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("_");
        }
        for (idx, (name, value)) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str("|")?;
            }
            write!(f, "{}={}", name, value)?;
        }
        Ok(())
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for Features {
    fn from_iter<T: IntoIterator<Item = (K, V)>>(iter: T) -> Self {
        let mut feats = Features::new();
        for (k, v) in iter {
            feats.insert(k, v);
        }
        feats
    }
}
