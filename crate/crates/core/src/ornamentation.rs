//! Ornamentations and the cover structure of the ornamentation lattice.
//!
//! An ornamentation assigns to every node `v` a connected node set topped at
//! `v` (its ornament) such that any two ornaments are nested or disjoint.
//! Ornamentations are ordered by pointwise inclusion.
//!
//! Most structure below hangs off the *wrapper* of a node: the node whose
//! ornament is the smallest one strictly containing `δ(u)`. Because the
//! ornaments containing `u` form a nested family topped at ancestors of `u`,
//! the wrapper is simply the deepest proper ancestor `w` with `u ∈ δ(w)`, or
//! the imaginary node above the root when there is none.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tree::{NodeId, NodeSet, RootedPlaneTree};

/// A connected node set together with its top node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ornament {
    top: NodeId,
    nodes: NodeSet,
}

impl Ornament {
    pub fn top(&self) -> NodeId {
        self.top
    }

    pub fn nodes(&self) -> NodeSet {
        self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.nodes.len() == 1
    }
}

/// Why a family of node sets fails to be an ornamentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// `δ(at)` does not contain `at`.
    MissingTop { at: NodeId },
    /// `node ∈ δ(at)` is not a descendant of `at`.
    NotBelowTop { at: NodeId, node: NodeId },
    /// `node ∈ δ(at)` but its parent is not, so `δ(at)` is disconnected.
    Disconnected { at: NodeId, node: NodeId },
    /// `δ(first)` and `δ(second)` overlap without being nested.
    Overlap { first: NodeId, second: NodeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingTop { at } => write!(f, "ornament at node {at} does not contain it"),
            Violation::NotBelowTop { at, node } => {
                write!(f, "ornament at node {at} contains non-descendant {node}")
            }
            Violation::Disconnected { at, node } => {
                write!(f, "ornament at node {at} is not connected (node {node} is cut off)")
            }
            Violation::Overlap { first, second } => write!(
                f,
                "ornaments at nodes {first} and {second} overlap without nesting"
            ),
        }
    }
}

/// Checks both ornamentation axioms. Single-node violations are reported
/// first (smallest node, then smallest offending member), then the
/// lexicographically smallest overlapping pair.
pub fn validate(tree: &RootedPlaneTree, sets: &[NodeSet]) -> std::result::Result<(), Violation> {
    assert_eq!(sets.len(), tree.len(), "one node set per tree node");
    for v in tree.nodes() {
        let set = sets[v.0];
        if !set.contains(v) {
            return Err(Violation::MissingTop { at: v });
        }
        if let Some(node) = set.difference(tree.descendants(v)).first() {
            return Err(Violation::NotBelowTop { at: v, node });
        }
        for u in set.iter().filter(|&u| u != v) {
            if !set.contains(tree.parent(u).expect("only the root lacks a parent")) {
                return Err(Violation::Disconnected { at: v, node: u });
            }
        }
    }
    for i in tree.nodes() {
        for j in tree.nodes().skip(i.0 + 1) {
            if !sets[i.0].is_laminar_with(sets[j.0]) {
                return Err(Violation::Overlap { first: i, second: j });
            }
        }
    }
    Ok(())
}

/// Outcome of [`Ornamentation::compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// Decomposition of one ornament: the nodes it wraps, the corresponding
/// maximal subornaments, and its sections keyed by the top's children
/// inside the ornament.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anatomy {
    pub wrapped: Vec<NodeId>,
    pub subornaments: Vec<NodeSet>,
    pub sections: Vec<(NodeId, NodeSet)>,
}

/// An element of the ornamentation lattice of a tree.
#[derive(Clone)]
pub struct Ornamentation {
    tree: Arc<RootedPlaneTree>,
    sets: Box<[NodeSet]>,
}

impl PartialEq for Ornamentation {
    fn eq(&self, other: &Self) -> bool {
        self.sets == other.sets && same_tree(&self.tree, &other.tree)
    }
}

impl Eq for Ornamentation {}

impl Hash for Ornamentation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.sets.hash(state);
    }
}

/// Canonical order: lexicographic on the per-node bitmasks. Only meaningful
/// between ornamentations of the same tree. On chains this coincides with
/// lexicographic order of g-sequences.
impl Ord for Ornamentation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sets.cmp(&other.sets)
    }
}

impl PartialOrd for Ornamentation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Ornamentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ornamentation({} {})", self.tree.render(), self.label())
    }
}

impl fmt::Display for Ornamentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn same_tree(a: &Arc<RootedPlaneTree>, b: &Arc<RootedPlaneTree>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Ornamentation {
    /// Builds an ornamentation, rejecting families that violate the axioms.
    pub fn new(tree: Arc<RootedPlaneTree>, sets: Vec<NodeSet>) -> Result<Self> {
        if sets.len() != tree.len() {
            return Err(Error::domain(format!(
                "expected {} ornaments, got {}",
                tree.len(),
                sets.len()
            )));
        }
        let all = tree.all_nodes();
        for (v, s) in sets.iter().enumerate() {
            if let Some(bad) = s.difference(all).first() {
                return Err(Error::domain(format!("ornament at node {v} names unknown node {bad}")));
            }
        }
        validate(&tree, &sets).map_err(|v| Error::domain(v.to_string()))?;
        Ok(Self::from_valid(tree, sets))
    }

    /// Builds from per-node lists of node indices.
    pub fn from_node_lists(tree: Arc<RootedPlaneTree>, lists: &[Vec<usize>]) -> Result<Self> {
        let mut sets = Vec::with_capacity(lists.len());
        for (v, list) in lists.iter().enumerate() {
            let mut s = NodeSet::EMPTY;
            for &u in list {
                if u >= tree.len() {
                    return Err(Error::domain(format!(
                        "ornament at node {v} names unknown node {u}"
                    )));
                }
                s.insert(NodeId(u));
            }
            sets.push(s);
        }
        Self::new(tree, sets)
    }

    pub(crate) fn from_valid(tree: Arc<RootedPlaneTree>, sets: Vec<NodeSet>) -> Self {
        debug_assert_eq!(validate(&tree, &sets), Ok(()));
        Ornamentation { tree, sets: sets.into_boxed_slice() }
    }

    /// δ_min: every ornament a singleton.
    pub fn min(tree: Arc<RootedPlaneTree>) -> Self {
        let sets = tree.nodes().map(NodeSet::singleton).collect();
        Self::from_valid(tree, sets)
    }

    /// δ_max: every ornament the full subtree.
    pub fn max(tree: Arc<RootedPlaneTree>) -> Self {
        let sets = tree.nodes().map(|v| tree.descendants(v)).collect();
        Self::from_valid(tree, sets)
    }

    pub fn tree(&self) -> &RootedPlaneTree {
        &self.tree
    }

    pub fn tree_arc(&self) -> &Arc<RootedPlaneTree> {
        &self.tree
    }

    /// The ornaments as bitmasks indexed by node.
    pub fn sets(&self) -> &[NodeSet] {
        &self.sets
    }

    /// δ(v) as a node set.
    pub fn at(&self, v: NodeId) -> NodeSet {
        self.sets[v.0]
    }

    pub fn ornament(&self, v: NodeId) -> Ornament {
        Ornament { top: v, nodes: self.sets[v.0] }
    }

    pub fn is_singleton(&self, v: NodeId) -> bool {
        self.sets[v.0].len() == 1
    }

    pub fn is_min(&self) -> bool {
        self.sets.iter().all(|s| s.len() == 1)
    }

    fn check_same_tree(&self, other: &Self) -> Result<()> {
        if same_tree(&self.tree, &other.tree) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "ornamentations of different trees {} and {}",
                self.tree, other.tree
            )))
        }
    }

    /// `self ≤ other` pointwise. Assumes a shared tree.
    pub fn leq(&self, other: &Self) -> bool {
        self.sets.iter().zip(other.sets.iter()).all(|(a, b)| a.is_subset(*b))
    }

    pub fn compare(&self, other: &Self) -> Result<Comparison> {
        self.check_same_tree(other)?;
        Ok(match (self.leq(other), other.leq(self)) {
            (true, true) => Comparison::Equal,
            (true, false) => Comparison::Less,
            (false, true) => Comparison::Greater,
            (false, false) => Comparison::Incomparable,
        })
    }

    /// Pointwise intersection.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_same_tree(other)?;
        let sets = self.sets.iter().zip(other.sets.iter()).map(|(a, b)| a.intersection(*b)).collect();
        Ok(Self::from_valid(self.tree.clone(), sets))
    }

    /// Sum of ornament sizes.
    pub fn weight(&self) -> usize {
        self.sets.iter().map(|s| s.len()).sum()
    }

    /// The node wrapping `u`, or `None` for the imaginary node above the root.
    pub fn wrapper(&self, u: NodeId) -> Option<NodeId> {
        let mut w = self.tree.parent(u);
        while let Some(x) = w {
            if self.sets[x.0].contains(u) {
                return Some(x);
            }
            w = self.tree.parent(x);
        }
        None
    }

    pub fn wrappers(&self) -> Vec<Option<NodeId>> {
        self.tree.nodes().map(|u| self.wrapper(u)).collect()
    }

    /// Nodes wrapped by `v`.
    pub fn wrapped_by(&self, v: NodeId) -> NodeSet {
        let own = self.sets[v.0];
        let mut out = NodeSet::EMPTY;
        for u in own.iter().filter(|&u| u != v) {
            if self.wrapper(u) == Some(v) {
                out.insert(u);
            }
        }
        out
    }

    /// Nodes wrapped by the imaginary node: tops of ornaments not contained
    /// in any other ornament.
    pub fn wrapped_by_imaginary(&self) -> NodeSet {
        self.tree.nodes().filter(|&u| self.wrapper(u).is_none()).collect()
    }

    /// Children of `v` lying in `δ(v)`.
    pub fn section_tops(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let own = self.sets[v.0];
        self.tree.children(v).iter().copied().filter(move |c| own.contains(*c))
    }

    /// `Δ_{δ(v)}(u)` for `u ∈ δ(v)`.
    pub fn below_within(&self, v: NodeId, u: NodeId) -> NodeSet {
        self.sets[v.0].intersection(self.tree.descendants(u))
    }

    pub fn anatomy(&self, v: NodeId) -> Anatomy {
        let wrapped = self.wrapped_by(v).to_vec();
        let subornaments = wrapped.iter().map(|u| self.sets[u.0]).collect();
        let sections = self.section_tops(v).map(|c| (c, self.below_within(v, c))).collect();
        Anatomy { wrapped, subornaments, sections }
    }

    /// `M_δ(v)`: wrapped nodes whose removal is a minimal reduction, i.e.
    /// those with no other wrapped node beneath them.
    pub fn minimal_reduction_nodes(&self, v: NodeId) -> NodeSet {
        self.wrapped_by(v)
            .iter()
            .filter(|&u| self.below_within(v, u) == self.sets[u.0])
            .collect()
    }

    /// `δ_u^v`: replace `δ(v)` by `δ(v) ∖ Δ_{δ(v)}(u)`. Any wrapped `u` is
    /// allowed, minimal or not.
    pub fn reduce(&self, v: NodeId, u: NodeId) -> Result<Self> {
        self.tree.check(v)?;
        self.tree.check(u)?;
        if u == v || self.wrapper(u) != Some(v) {
            return Err(Error::domain(format!(
                "node {} does not wrap node {}",
                self.tree.label(v),
                self.tree.label(u)
            )));
        }
        let mut sets = self.sets.to_vec();
        sets[v.0] = sets[v.0].difference(self.below_within(v, u));
        Ok(Self::from_valid(self.tree.clone(), sets))
    }

    /// All lower covers, ordered by `(v, u)`.
    pub fn covers_below(&self) -> Vec<Self> {
        let mut out = Vec::new();
        for v in self.tree.nodes() {
            for u in self.minimal_reduction_nodes(v) {
                let mut sets = self.sets.to_vec();
                sets[v.0] = sets[v.0].difference(self.sets[u.0]);
                out.push(Self::from_valid(self.tree.clone(), sets));
            }
        }
        out
    }

    /// The pop-stack operator: each ornament loses every maximal subornament
    /// that is a minimal reduction.
    pub fn pop(&self) -> Self {
        let sets = self
            .tree
            .nodes()
            .map(|v| {
                let removed = self
                    .minimal_reduction_nodes(v)
                    .iter()
                    .fold(NodeSet::EMPTY, |acc, u| acc.union(self.sets[u.0]));
                self.sets[v.0].difference(removed)
            })
            .collect();
        Self::from_valid(self.tree.clone(), sets)
    }

    /// Pop computed literally as the meet of `self` with all its lower
    /// covers. Slower; kept as an independent route for cross-checking.
    pub fn pop_by_meet_of_covers(&self) -> Self {
        let mut sets = self.sets.to_vec();
        for cover in self.covers_below() {
            for (s, c) in sets.iter_mut().zip(cover.sets.iter()) {
                *s = s.intersection(*c);
            }
        }
        Self::from_valid(self.tree.clone(), sets)
    }

    /// `Pop^k(self)`.
    pub fn pop_times(&self, k: usize) -> Self {
        let mut cur = self.clone();
        for _ in 0..k {
            if cur.is_min() {
                break;
            }
            cur = cur.pop();
        }
        cur
    }

    /// Compact label: g-sequence on chains, ornament list otherwise.
    pub fn label(&self) -> String {
        if self.tree.is_chain() {
            let g: Vec<String> = self
                .sets
                .iter()
                .map(|s| (s.last().expect("ornaments are non-empty").0 + 1).to_string())
                .collect();
            format!("[{}]", g.join(","))
        } else {
            let parts: Vec<String> = self
                .sets
                .iter()
                .map(|s| {
                    let ids: Vec<String> = s.iter().map(|v| v.0.to_string()).collect();
                    format!("{{{}}}", ids.join(","))
                })
                .collect();
            parts.join(" ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gseq::GSequence;

    fn chain(n: usize) -> Arc<RootedPlaneTree> {
        Arc::new(RootedPlaneTree::chain(n).unwrap())
    }

    fn g(tree: &Arc<RootedPlaneTree>, seq: &[usize]) -> Ornamentation {
        GSequence::new(seq.to_vec()).unwrap().to_ornamentation(tree.clone()).unwrap()
    }

    fn set(ids: &[usize]) -> NodeSet {
        ids.iter().map(|&i| NodeId(i)).collect()
    }

    #[test]
    fn validate_examples() {
        let c3 = chain(3);
        let max = Ornamentation::max(c3.clone());
        assert_eq!(validate(&c3, max.sets()), Ok(()));

        // [2,3,3]: {v1,v2} against {v2,v3}
        let bad = [set(&[0, 1]), set(&[1, 2]), set(&[2])];
        assert_eq!(
            validate(&c3, &bad),
            Err(Violation::Overlap { first: NodeId(0), second: NodeId(1) })
        );

        let gap = [set(&[0, 2]), set(&[1]), set(&[2])];
        assert_eq!(
            validate(&c3, &gap),
            Err(Violation::Disconnected { at: NodeId(0), node: NodeId(2) })
        );

        let no_top = [set(&[1]), set(&[1]), set(&[2])];
        assert_eq!(validate(&c3, &no_top), Err(Violation::MissingTop { at: NodeId(0) }));

        let above = [set(&[0]), set(&[0, 1]), set(&[2])];
        assert_eq!(
            validate(&c3, &above),
            Err(Violation::NotBelowTop { at: NodeId(1), node: NodeId(0) })
        );
    }

    #[test]
    fn unknown_nodes_are_domain_errors() {
        let c3 = chain(3);
        let err = Ornamentation::from_node_lists(c3.clone(), &[vec![0, 7], vec![1], vec![2]]);
        assert!(matches!(err, Err(Error::Domain(_))));
        let err = Ornamentation::from_node_lists(c3, &[vec![0], vec![1]]);
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn compare_examples() {
        let c3 = chain(3);
        let a = g(&c3, &[2, 2, 3]);
        assert_eq!(a.compare(&g(&c3, &[3, 3, 3])).unwrap(), Comparison::Less);
        assert_eq!(a.compare(&g(&c3, &[1, 3, 3])).unwrap(), Comparison::Incomparable);
        assert_eq!(a.compare(&a).unwrap(), Comparison::Equal);
        assert_eq!(g(&c3, &[3, 3, 3]).compare(&a).unwrap(), Comparison::Greater);

        let other = Ornamentation::min(Arc::new(RootedPlaneTree::parse("(()())").unwrap()));
        assert!(matches!(a.compare(&other), Err(Error::Domain(_))));
        assert!(matches!(a.meet(&other), Err(Error::Domain(_))));
    }

    #[test]
    fn meet_examples() {
        let c3 = chain(3);
        let a = g(&c3, &[3, 2, 3]);
        assert_eq!(a.meet(&g(&c3, &[3, 3, 3])).unwrap(), a);
        assert_eq!(
            g(&c3, &[2, 2, 3]).meet(&g(&c3, &[1, 3, 3])).unwrap(),
            Ornamentation::min(c3.clone())
        );
        assert_eq!(a.meet(&a).unwrap(), a);
    }

    #[test]
    fn anatomy_examples() {
        let c3 = chain(3);
        let max = Ornamentation::max(c3.clone());
        let an = max.anatomy(NodeId(0));
        assert_eq!(an.wrapped, vec![NodeId(1)]);
        assert_eq!(an.subornaments, vec![set(&[1, 2])]);
        assert_eq!(an.sections, vec![(NodeId(1), set(&[1, 2]))]);

        let d = g(&c3, &[3, 2, 3]);
        let an = d.anatomy(NodeId(0));
        assert_eq!(an.wrapped, vec![NodeId(1), NodeId(2)]);
        assert_eq!(an.sections, vec![(NodeId(1), set(&[1, 2]))]);

        let an = d.anatomy(NodeId(1));
        assert!(an.wrapped.is_empty());
        assert!(an.sections.is_empty());
    }

    #[test]
    fn anatomy_partitions_the_ornament() {
        let tree = Arc::new(RootedPlaneTree::parse("((()())(()))").unwrap());
        let d = Ornamentation::max(tree.clone());
        for v in tree.nodes() {
            let an = d.anatomy(v);
            let mut acc = NodeSet::singleton(v);
            for s in &an.subornaments {
                assert!(acc.is_disjoint(*s));
                acc = acc.union(*s);
            }
            assert_eq!(acc, d.at(v));
            let mut acc = NodeSet::singleton(v);
            for (_, s) in &an.sections {
                assert!(acc.is_disjoint(*s));
                acc = acc.union(*s);
            }
            assert_eq!(acc, d.at(v));
        }
    }

    #[test]
    fn minimal_reduction_examples() {
        let c3 = chain(3);
        assert_eq!(g(&c3, &[3, 2, 3]).minimal_reduction_nodes(NodeId(0)), set(&[2]));
        assert_eq!(Ornamentation::max(c3.clone()).minimal_reduction_nodes(NodeId(0)), set(&[1]));
        assert!(g(&c3, &[1, 3, 3]).minimal_reduction_nodes(NodeId(0)).is_empty());
    }

    #[test]
    fn reduce_examples() {
        let c3 = chain(3);
        let max = Ornamentation::max(c3.clone());
        assert_eq!(max.reduce(NodeId(0), NodeId(1)).unwrap(), g(&c3, &[1, 3, 3]));
        assert_eq!(max.reduce(NodeId(1), NodeId(2)).unwrap(), g(&c3, &[3, 2, 3]));
        // non-minimal reduction
        assert_eq!(
            g(&c3, &[3, 2, 3]).reduce(NodeId(0), NodeId(1)).unwrap(),
            Ornamentation::min(c3.clone())
        );
        // v1 does not wrap v3 in δ_max
        assert!(matches!(max.reduce(NodeId(0), NodeId(2)), Err(Error::Domain(_))));
        assert!(matches!(max.reduce(NodeId(0), NodeId(0)), Err(Error::Domain(_))));
        assert!(matches!(max.reduce(NodeId(0), NodeId(9)), Err(Error::Domain(_))));
    }

    #[test]
    fn covers_below_examples() {
        let c3 = chain(3);
        let covers = Ornamentation::max(c3.clone()).covers_below();
        assert_eq!(covers, vec![g(&c3, &[1, 3, 3]), g(&c3, &[3, 2, 3])]);
        assert_eq!(g(&c3, &[3, 2, 3]).covers_below(), vec![g(&c3, &[2, 2, 3])]);
        assert!(Ornamentation::min(c3).covers_below().is_empty());
    }

    #[test]
    fn pop_examples() {
        let c3 = chain(3);
        assert_eq!(g(&c3, &[3, 2, 3]).pop(), g(&c3, &[2, 2, 3]));
        assert_eq!(Ornamentation::max(c3.clone()).pop(), Ornamentation::min(c3.clone()));
        let min = Ornamentation::min(c3);
        assert_eq!(min.pop(), min);
    }

    #[test]
    fn weight_examples() {
        let c3 = chain(3);
        assert_eq!(Ornamentation::min(c3.clone()).weight(), 3);
        assert_eq!(Ornamentation::max(c3.clone()).weight(), 6);
        assert_eq!(g(&c3, &[3, 2, 3]).weight(), 5);
    }

    #[test]
    fn single_node_tree() {
        let t = chain(1);
        let only = Ornamentation::min(t.clone());
        assert_eq!(only, Ornamentation::max(t));
        assert_eq!(only.pop(), only);
        assert!(only.covers_below().is_empty());
        assert_eq!(only.weight(), 1);
    }

    #[test]
    fn labels() {
        let c3 = chain(3);
        assert_eq!(g(&c3, &[3, 2, 3]).label(), "[3,2,3]");
        let cherry = Arc::new(RootedPlaneTree::parse("(()())").unwrap());
        assert_eq!(Ornamentation::max(cherry).label(), "{0,1,2} {1} {2}");
    }
}
