use std::collections::VecDeque;

use ndarray::Array2;

use super::{Sentence, Treebank};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("no token attaches to the root")]
    NoRoot,
    #[error("tokens {0} and {1} both attach to the root")]
    MultipleRoots(usize, usize),
    #[error("token {0} is its own head")]
    SelfLoop(usize),
    #[error("head {head} of token {id} is out of range")]
    HeadOutOfRange { id: usize, head: usize },
    #[error("token {0} is on a cycle")]
    Cycle(usize),
}

impl TreeError {
    /// Token the error is attributed to, if any.
    pub fn token(&self) -> Option<usize> {
        match *self {
            TreeError::NoRoot => None,
            TreeError::MultipleRoots(_, id)
            | TreeError::SelfLoop(id)
            | TreeError::HeadOutOfRange { id, .. }
            | TreeError::Cycle(id) => Some(id),
        }
    }
}

/// Check that `heads` (head of token `i + 1` at index `i`, 0 = root) forms a
/// single tree: one root, no self loops, no cycles.
pub fn validate_heads(heads: &[usize]) -> Result<(), TreeError> {
    let n = heads.len();
    let mut root = None;
    for (idx, &head) in heads.iter().enumerate() {
        let id = idx + 1;
        if head == id {
            return Err(TreeError::SelfLoop(id));
        }
        if head > n {
            return Err(TreeError::HeadOutOfRange { id, head });
        }
        if head == 0 {
            if let Some(first) = root {
                return Err(TreeError::MultipleRoots(first, id));
            }
            root = Some(id);
        }
    }
    if root.is_none() {
        return Err(TreeError::NoRoot);
    }

    // 0 = unvisited, 1 = on current walk, 2 = known to reach the root.
    let mut state = vec![0u8; n + 1];
    state[0] = 2;
    for start in 1..=n {
        let mut walk = Vec::new();
        let mut cur = start;
        while state[cur] == 0 {
            state[cur] = 1;
            walk.push(cur);
            cur = heads[cur - 1];
        }
        if state[cur] == 1 {
            return Err(TreeError::Cycle(cur));
        }
        for id in walk {
            state[id] = 2;
        }
    }
    Ok(())
}

/// Undirected path length between every pair of tokens, indexed by
/// 0-based token position.
pub fn path_distance_matrix(s: &Sentence) -> Array2<usize> {
    let heads: Vec<usize> = s.tokens.iter().map(|t| t.head).collect();
    distances_from_heads(&heads)
}

/// Path distances for a head vector (head of token `i + 1` at index `i`).
pub fn distances_from_heads(heads: &[usize]) -> Array2<usize> {
    let n = heads.len();
    let mut adj = vec![Vec::new(); n];
    for (idx, &head) in heads.iter().enumerate() {
        if head > 0 {
            adj[idx].push(head - 1);
            adj[head - 1].push(idx);
        }
    }
    let mut dist = Array2::from_elem((n, n), usize::MAX);
    let mut queue = VecDeque::new();
    for src in 0..n {
        dist[(src, src)] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[(src, u)];
            for &v in &adj[u] {
                if dist[(src, v)] == usize::MAX {
                    dist[(src, v)] = du + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    dist
}

/// Keep sentences with at least `min_words` syntactic words.
pub fn filter_short(tb: &Treebank, min_words: usize) -> Treebank {
    Treebank {
        sentences: tb
            .sentences
            .iter()
            .filter(|s| s.len() >= min_words)
            .cloned()
            .collect(),
        source_path: tb.source_path.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::parse_conllu;

    const SNAKE: &str = "# sent_id = snake
1\twhy\twhy\tADV\t_\t_\t5\tadvmod\t_\t_
2\tdoes\tdo\tAUX\t_\t_\t5\taux\t_\t_
3\tmy\tmy\tPRON\t_\t_\t4\tnmod\t_\t_
4\tsnake\tsnake\tNOUN\t_\t_\t5\tnsubj\t_\t_
5\trefuse\trefuse\tVERB\t_\t_\t0\troot\t_\t_
6\tto\tto\tPART\t_\t_\t7\tmark\t_\t_
7\teat\teat\tVERB\t_\t_\t5\txcomp\t_\t_
8\t?\t?\tPUNCT\t_\t_\t5\tpunct\t_\t_

";

    #[test]
    fn snake_distances() {
        let tb = parse_conllu(SNAKE).unwrap();
        let d = path_distance_matrix(&tb.sentences[0]);
        // my -> to, refuse -> eat
        assert_eq!(d[(2, 5)], 4);
        assert_eq!(d[(4, 6)], 1);
        let expected = [
            [0, 2, 3, 2, 1, 3, 2, 2],
            [2, 0, 3, 2, 1, 3, 2, 2],
            [3, 3, 0, 1, 2, 4, 3, 3],
            [2, 2, 1, 0, 1, 3, 2, 2],
            [1, 1, 2, 1, 0, 2, 1, 1],
            [3, 3, 4, 3, 2, 0, 1, 3],
            [2, 2, 3, 2, 1, 1, 0, 2],
            [2, 2, 3, 2, 1, 3, 2, 0],
        ];
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(d[(i, j)], expected[i][j], "({i},{j})");
            }
        }
    }

    #[test]
    fn single_token() {
        let d = distances_from_heads(&[0]);
        assert_eq!(d.shape(), &[1, 1]);
        assert_eq!(d[(0, 0)], 0);
    }

    #[test]
    fn rejects_bad_trees() {
        assert_eq!(validate_heads(&[2, 1]), Err(TreeError::NoRoot));
        assert_eq!(validate_heads(&[0, 0]), Err(TreeError::MultipleRoots(1, 2)));
        assert_eq!(validate_heads(&[1]), Err(TreeError::SelfLoop(1)));
        assert_eq!(
            validate_heads(&[0, 5]),
            Err(TreeError::HeadOutOfRange { id: 2, head: 5 })
        );
        assert_eq!(validate_heads(&[0, 3, 4, 2]), Err(TreeError::Cycle(2)));
        assert!(validate_heads(&[2, 0, 2]).is_ok());
    }

    #[test]
    fn filters_short_sentences() {
        let mk = |n: usize| {
            let mut text = String::new();
            for i in 1..=n {
                let head = if i == 1 { 0 } else { 1 };
                text.push_str(&format!("{i}\tw\tw\tX\t_\t_\t{head}\tdep\t_\t_\n"));
            }
            text.push('\n');
            text
        };
        let tb = parse_conllu(&format!("{}{}{}", mk(3), mk(4), mk(5))).unwrap();
        let lens: Vec<usize> = filter_short(&tb, 4)
            .sentences
            .iter()
            .map(|s| s.len())
            .collect();
        assert_eq!(lens, vec![4, 5]);
        assert_eq!(filter_short(&tb, 1), tb);
    }
}
