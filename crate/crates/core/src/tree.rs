//! Rooted plane trees.
//!
//! Nodes are identified by their preorder position, so the root is always
//! node 0 and every subtree occupies a contiguous block of indices. Node sets
//! are stored as 64-bit masks, which caps trees at [`MAX_NODES`] nodes.

use std::fmt;

use crate::error::{Error, ParseErrorKind, Result};

/// Largest supported tree. Node sets are `u64` bitmasks.
pub const MAX_NODES: usize = 64;

/// Default upper bound for [`enumerate_plane_trees`].
pub const DEFAULT_GENERATION_CAP: usize = 8;

/// Preorder index of a node. The root is `NodeId(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of nodes of one tree, as a bitmask over preorder indices.
///
/// Iteration yields ascending indices. The derived ordering compares raw
/// masks and is only used for canonical sorting.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn singleton(v: NodeId) -> Self {
        NodeSet(1u64 << v.0)
    }

    /// Nodes with indices in `start..end`.
    pub fn range(start: usize, end: usize) -> Self {
        debug_assert!(start <= end && end <= MAX_NODES);
        if start == end {
            return NodeSet::EMPTY;
        }
        let width = end - start;
        let ones = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        NodeSet(ones << start)
    }

    pub fn from_bits(bits: u64) -> Self {
        NodeSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: NodeId) -> bool {
        v.0 < MAX_NODES && self.0 >> v.0 & 1 == 1
    }

    pub fn insert(&mut self, v: NodeId) {
        self.0 |= 1u64 << v.0;
    }

    pub fn remove(&mut self, v: NodeId) {
        self.0 &= !(1u64 << v.0);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: NodeSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Nested (one contains the other) or disjoint.
    pub fn is_laminar_with(self, other: NodeSet) -> bool {
        self.is_disjoint(other) || self.is_subset(other) || other.is_subset(self)
    }

    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    /// Smallest index in the set.
    pub fn first(self) -> Option<NodeId> {
        (self.0 != 0).then(|| NodeId(self.0.trailing_zeros() as usize))
    }

    /// Largest index in the set.
    pub fn last(self) -> Option<NodeId> {
        (self.0 != 0).then(|| NodeId(63 - self.0.leading_zeros() as usize))
    }

    pub fn iter(self) -> NodeSetIter {
        NodeSetIter(self.0)
    }

    pub fn to_vec(self) -> Vec<NodeId> {
        self.iter().collect()
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        let mut set = NodeSet::EMPTY;
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl IntoIterator for NodeSet {
    type Item = NodeId;
    type IntoIter = NodeSetIter;

    fn into_iter(self) -> NodeSetIter {
        self.iter()
    }
}

pub struct NodeSetIter(u64);

impl Iterator for NodeSetIter {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(NodeId(i))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for NodeSetIter {}

/// A root-to-leaf path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    nodes: Vec<NodeId>,
}

impl Chain {
    pub fn new(nodes: Vec<NodeId>) -> Self {
        Chain { nodes }
    }

    /// Nodes from the root down to the leaf.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaf(&self) -> NodeId {
        *self.nodes.last().expect("chains are non-empty")
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.position(v).is_some()
    }

    /// Index of `v` counted from the root.
    pub fn position(&self, v: NodeId) -> Option<usize> {
        self.nodes.iter().position(|&w| w == v)
    }

    /// Height of `v` within the chain, i.e. its distance from the leaf.
    pub fn height_of(&self, v: NodeId) -> Option<usize> {
        self.position(v).map(|p| self.nodes.len() - 1 - p)
    }

    pub fn node_set(&self) -> NodeSet {
        self.nodes.iter().copied().collect()
    }
}

/// Per-node statistics returned by [`RootedPlaneTree::node_stats`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeStats {
    pub depth: usize,
    pub height: usize,
    pub subtree_size: usize,
    pub descendants: Vec<NodeId>,
    pub ancestors: Vec<NodeId>,
}

/// An immutable rooted tree with ordered children, numbered in preorder.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RootedPlaneTree {
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    // Δ_T(v), including v
    down: Vec<NodeSet>,
    // ∇_T(v), including v
    up: Vec<NodeSet>,
    depth: Vec<usize>,
    height: Vec<usize>,
}

impl fmt::Debug for RootedPlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootedPlaneTree({})", self.render())
    }
}

impl fmt::Display for RootedPlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::str::FromStr for RootedPlaneTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RootedPlaneTree::parse(s)
    }
}

impl RootedPlaneTree {
    /// Parses a balanced-parenthesis string. Each matched pair is a node;
    /// the outermost pair is the root and nested pairs are children in
    /// textual order.
    pub fn parse(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        if bytes.is_empty() {
            return Err(Error::Parse { offset: 0, kind: ParseErrorKind::Empty });
        }
        let mut parent = Vec::new();
        let mut stack: Vec<NodeId> = Vec::new();
        for (offset, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => {
                    if offset > 0 && stack.is_empty() {
                        return Err(Error::Parse {
                            offset,
                            kind: ParseErrorKind::TrailingCharacters,
                        });
                    }
                    if parent.len() == MAX_NODES {
                        return Err(Error::Parse { offset, kind: ParseErrorKind::TooManyNodes });
                    }
                    let id = NodeId(parent.len());
                    parent.push(stack.last().copied());
                    stack.push(id);
                }
                b')' => {
                    if stack.pop().is_none() {
                        let kind = if offset > 0 {
                            ParseErrorKind::TrailingCharacters
                        } else {
                            ParseErrorKind::UnexpectedClose
                        };
                        return Err(Error::Parse { offset, kind });
                    }
                }
                other => {
                    return Err(Error::Parse {
                        offset,
                        kind: ParseErrorKind::InvalidCharacter(other),
                    })
                }
            }
        }
        if !stack.is_empty() {
            return Err(Error::Parse { offset: bytes.len(), kind: ParseErrorKind::Unbalanced });
        }
        Ok(Self::from_preorder_parents(parent))
    }

    /// Builds a tree from a preorder parent array. The caller guarantees the
    /// array really is in preorder (every parent precedes its children and
    /// sibling subtrees are consecutive).
    fn from_preorder_parents(parent: Vec<Option<NodeId>>) -> Self {
        let n = parent.len();
        let mut children = vec![Vec::new(); n];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[p.0].push(NodeId(i));
            }
        }
        let mut size = vec![1usize; n];
        let mut height = vec![0usize; n];
        for i in (1..n).rev() {
            let p = parent[i].expect("non-root has a parent").0;
            size[p] += size[i];
            height[p] = height[p].max(height[i] + 1);
        }
        let mut depth = vec![0usize; n];
        let mut up = vec![NodeSet::EMPTY; n];
        for i in 0..n {
            let mut anc = NodeSet::singleton(NodeId(i));
            if let Some(p) = parent[i] {
                depth[i] = depth[p.0] + 1;
                anc = anc.union(up[p.0]);
            }
            up[i] = anc;
        }
        let down = (0..n).map(|i| NodeSet::range(i, i + size[i])).collect();
        RootedPlaneTree { parent, children, down, up, depth, height }
    }

    /// The chain with `n` nodes, `(((...)))`.
    pub fn chain(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_NODES {
            return Err(Error::domain(format!("chain length {n} outside 1..={MAX_NODES}")));
        }
        Ok(Self::from_preorder_parents(
            (0..n).map(|i| i.checked_sub(1).map(NodeId)).collect(),
        ))
    }

    /// A root with `leaves` leaf children.
    pub fn star(leaves: usize) -> Result<Self> {
        if leaves + 1 > MAX_NODES {
            return Err(Error::domain(format!("star with {leaves} leaves is too large")));
        }
        Ok(Self::from_preorder_parents(
            (0..=leaves).map(|i| (i > 0).then_some(NodeId::ROOT)).collect(),
        ))
    }

    /// Canonical parenthesis rendering, no whitespace.
    pub fn render(&self) -> String {
        let mut out = String::with_capacity(2 * self.len());
        let mut stack = vec![(NodeId::ROOT, false)];
        while let Some((v, closing)) = stack.pop() {
            if closing {
                out.push(')');
                continue;
            }
            out.push('(');
            stack.push((v, true));
            for &c in self.children[v.0].iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn nodes(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator {
        (0..self.len()).map(NodeId)
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::range(0, self.len())
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.0 < self.len()
    }

    pub fn check(&self, v: NodeId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::domain(format!("node {v} not in a tree with {} nodes", self.len())))
        }
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v.0]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v.0]
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.children[v.0].is_empty()
    }

    /// True when every node has at most one child.
    pub fn is_chain(&self) -> bool {
        self.children.iter().all(|c| c.len() <= 1)
    }

    /// Δ_T(v): `v` and all its descendants.
    pub fn descendants(&self, v: NodeId) -> NodeSet {
        self.down[v.0]
    }

    /// ∇_T(v): `v` and all its ancestors.
    pub fn ancestors(&self, v: NodeId) -> NodeSet {
        self.up[v.0]
    }

    /// `u ≤_T v`, i.e. `u` lies in the subtree of `v`.
    pub fn is_below(&self, u: NodeId, v: NodeId) -> bool {
        self.down[v.0].contains(u)
    }

    pub fn depth(&self, v: NodeId) -> usize {
        self.depth[v.0]
    }

    pub fn height(&self, v: NodeId) -> usize {
        self.height[v.0]
    }

    pub fn subtree_size(&self, v: NodeId) -> usize {
        self.down[v.0].len()
    }

    /// The closed path `[u, v]` for `u ≤_T v`.
    pub fn path(&self, u: NodeId, v: NodeId) -> NodeSet {
        self.up[u.0].intersection(self.down[v.0])
    }

    /// Human-readable node name. Chains use 1-based names `v1..vn` matching
    /// g-sequence positions; other trees use preorder indices `v0..`.
    pub fn label(&self, v: NodeId) -> String {
        if self.is_chain() {
            format!("v{}", v.0 + 1)
        } else {
            format!("v{}", v.0)
        }
    }

    pub fn node_stats(&self, v: NodeId) -> Result<NodeStats> {
        self.check(v)?;
        Ok(NodeStats {
            depth: self.depth(v),
            height: self.height(v),
            subtree_size: self.subtree_size(v),
            descendants: self.descendants(v).to_vec(),
            ancestors: self.ancestors(v).to_vec(),
        })
    }

    /// One chain per leaf, ordered by leaf index.
    pub fn maximal_chains(&self) -> Vec<Chain> {
        self.nodes()
            .filter(|&v| self.is_leaf(v))
            .map(|leaf| Chain::new(self.ancestors(leaf).to_vec()))
            .collect()
    }

    /// Whether `chain` is one of this tree's maximal chains.
    pub fn is_maximal_chain(&self, chain: &Chain) -> bool {
        let nodes = chain.nodes();
        !nodes.is_empty()
            && nodes.iter().all(|&v| self.contains(v))
            && nodes[0] == NodeId::ROOT
            && self.is_leaf(chain.leaf())
            && nodes.windows(2).all(|w| self.parent(w[1]) == Some(w[0]))
    }

    /// The tree with every children list reversed, together with the map
    /// sending each old node id to its new id.
    pub fn mirrored(&self) -> (RootedPlaneTree, Vec<NodeId>) {
        let n = self.len();
        let mut relabel = vec![NodeId::ROOT; n];
        let mut parent = Vec::with_capacity(n);
        let mut stack = vec![(NodeId::ROOT, None)];
        while let Some((v, p)) = stack.pop() {
            relabel[v.0] = NodeId(parent.len());
            parent.push(p);
            let new_id = relabel[v.0];
            // preorder over reversed children: push them in original order
            for &c in self.children(v) {
                stack.push((c, Some(new_id)));
            }
        }
        (Self::from_preorder_parents(parent), relabel)
    }
}

/// All plane trees with `n` nodes in lexicographic order of their
/// parenthesis strings, limited to [`DEFAULT_GENERATION_CAP`] nodes.
pub fn enumerate_plane_trees(n: usize) -> Result<Vec<RootedPlaneTree>> {
    enumerate_plane_trees_capped(n, DEFAULT_GENERATION_CAP)
}

pub fn enumerate_plane_trees_capped(n: usize, cap: usize) -> Result<Vec<RootedPlaneTree>> {
    if n == 0 {
        return Err(Error::domain("plane trees need at least one node"));
    }
    if n > cap || n > MAX_NODES {
        return Err(Error::Resource(format!(
            "refusing to enumerate plane trees with {n} nodes (cap {})",
            cap.min(MAX_NODES)
        )));
    }
    let mut out = Vec::new();
    let mut buf = String::with_capacity(2 * n);
    buf.push('(');
    dyck_words(n - 1, 0, 0, &mut buf, &mut |word| {
        let mut s = word.to_owned();
        s.push(')');
        out.push(RootedPlaneTree::parse(&s).expect("generated words are balanced"));
    });
    Ok(out)
}

/// Emits balanced words with `pairs` pairs, `(` before `)`.
fn dyck_words(pairs: usize, open: usize, close: usize, buf: &mut String, emit: &mut dyn FnMut(&str)) {
    if close == pairs {
        emit(buf);
        return;
    }
    if open < pairs {
        buf.push('(');
        dyck_words(pairs, open + 1, close, buf, emit);
        buf.pop();
    }
    if close < open {
        buf.push(')');
        dyck_words(pairs, open, close + 1, buf, emit);
        buf.pop();
    }
}

/// All plane trees with at most `max_nodes` nodes, smallest first.
pub fn enumerate_plane_trees_up_to(max_nodes: usize) -> Result<Vec<RootedPlaneTree>> {
    let mut all = Vec::new();
    for n in 1..=max_nodes {
        all.extend(enumerate_plane_trees_capped(n, max_nodes)?);
    }
    Ok(all)
}
