//! Compact encoding of ornamentations of a chain.
//!
//! On the chain `v1 > v2 > ... > vn` every ornament is an interval
//! `δ(vi) = {vi, ..., v_g(i)}`, so an ornamentation is determined by the
//! 1-based sequence `g`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ornamentation::Ornamentation;
use crate::tree::{NodeSet, RootedPlaneTree};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GSequence {
    g: Vec<usize>,
}

impl GSequence {
    /// Validates `i ≤ g(i) ≤ n` and the nested-or-disjoint condition
    /// (`g(i) < j` or `g(i) ≥ g(j)` for `i < j`).
    pub fn new(g: Vec<usize>) -> Result<Self> {
        let n = g.len();
        if n == 0 {
            return Err(Error::domain("empty g-sequence"));
        }
        for (idx, &gi) in g.iter().enumerate() {
            let i = idx + 1;
            if gi < i || gi > n {
                return Err(Error::domain(format!("g({i}) = {gi} outside {i}..={n}")));
            }
        }
        for i in 1..=n {
            for j in i + 1..=n {
                let (gi, gj) = (g[i - 1], g[j - 1]);
                if !(gi < j || gi >= gj) {
                    return Err(Error::domain(format!(
                        "ornaments at v{i} and v{j} overlap without nesting"
                    )));
                }
            }
        }
        Ok(GSequence { g })
    }

    pub fn from_ornamentation(delta: &Ornamentation) -> Result<Self> {
        if !delta.tree().is_chain() {
            return Err(Error::domain(format!(
                "g-sequences need a chain, got {}",
                delta.tree()
            )));
        }
        let g = delta
            .sets()
            .iter()
            .map(|s| s.last().expect("ornaments are non-empty").index() + 1)
            .collect();
        Ok(GSequence { g })
    }

    pub fn to_ornamentation(&self, tree: Arc<RootedPlaneTree>) -> Result<Ornamentation> {
        if !tree.is_chain() || tree.len() != self.len() {
            return Err(Error::domain(format!(
                "g-sequence of length {} does not fit tree {}",
                self.len(),
                tree
            )));
        }
        let sets = self.g.iter().enumerate().map(|(idx, &gi)| NodeSet::range(idx, gi)).collect();
        Ok(Ornamentation::from_valid(tree, sets))
    }

    /// Builds the matching chain and the ornamentation on it.
    pub fn to_chain_ornamentation(&self) -> Ornamentation {
        let tree = Arc::new(RootedPlaneTree::chain(self.len()).expect("validated length"));
        self.to_ornamentation(tree).expect("chain of matching length")
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    /// `g(i)` for 1-based `i`.
    pub fn get(&self, i: usize) -> usize {
        self.g[i - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.g
    }

    pub fn is_singleton(&self, i: usize) -> bool {
        self.get(i) == i
    }
}

impl fmt::Display for GSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.g.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_sequences() {
        assert!(GSequence::new(vec![]).is_err());
        assert!(GSequence::new(vec![2, 3, 3]).is_err());
        assert!(GSequence::new(vec![4, 2, 3]).is_err());
        assert!(GSequence::new(vec![1, 1, 3]).is_err());
        assert!(GSequence::new(vec![3, 2, 3]).is_ok());
    }

    #[test]
    fn refuses_non_chains() {
        let cherry = Arc::new(RootedPlaneTree::parse("(()())").unwrap());
        let d = Ornamentation::min(cherry.clone());
        assert!(GSequence::from_ornamentation(&d).is_err());
        assert!(GSequence::new(vec![1, 2, 3]).unwrap().to_ornamentation(cherry).is_err());
    }

    proptest! {
        #[test]
        fn valid_sequences_round_trip(raw in proptest::collection::vec(0usize..8, 1..8)) {
            let n = raw.len();
            let g: Vec<usize> = raw.iter().enumerate().map(|(i, r)| i + 1 + r % (n - i)).collect();
            if let Ok(seq) = GSequence::new(g) {
                let d = seq.to_chain_ornamentation();
                prop_assert_eq!(GSequence::from_ornamentation(&d).unwrap(), seq);
            }
        }
    }
}
