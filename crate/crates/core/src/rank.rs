//! Chain profiles, v-ranks, and maximum forward orbits of Pop.
//!
//! For a maximal chain `C`, `b_C(v)` counts the descendants of `v` off the
//! chain, and `f_C` walks up from the leaf, increasing by one whenever the
//! child's `b_C` leaves room. Appending `f_C(v)` extra nodes below every
//! chain through `v` gives the extended tree whose heights define
//! `rk_v`. The maximum orbit size of Pop is the largest extended height
//! at the root, plus two.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ornamentation::Ornamentation;
use crate::tree::{Chain, NodeId, NodeSet, RootedPlaneTree};

/// Slack added to the `n²` iteration cap in [`forward_orbit`].
pub const ORBIT_SLACK: usize = 16;

/// `b_C` and `f_C` along one maximal chain, stored root-first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainProfile {
    chain: Chain,
    b: Vec<usize>,
    f: Vec<usize>,
}

impl ChainProfile {
    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn b(&self, v: NodeId) -> Option<usize> {
        self.chain.position(v).map(|p| self.b[p])
    }

    pub fn f(&self, v: NodeId) -> Option<usize> {
        self.chain.position(v).map(|p| self.f[p])
    }

    /// `f_C` values root-first.
    pub fn f_values(&self) -> &[usize] {
        &self.f
    }

    /// `b_C` values root-first.
    pub fn b_values(&self) -> &[usize] {
        &self.b
    }

    pub fn f_root(&self) -> usize {
        self.f[0]
    }
}

/// Computes `b_C` and `f_C` by the leaf-up recursion and checks the result
/// against the closed form
/// `f_C(v) = min_{u ∈ C, u < v} (|Δ(u)| + 2·depth(u)) − |C| − depth(v) − 1`.
pub fn chain_profile(tree: &RootedPlaneTree, chain: &Chain) -> Result<ChainProfile> {
    if !tree.is_maximal_chain(chain) {
        return Err(Error::domain(format!("not a maximal chain of {tree}: {:?}", chain.nodes())));
    }
    let profile = profile_by_recursion(tree, chain);
    let closed = f_closed_form(tree, chain);
    if closed.iter().zip(&profile.f).any(|(&c, &r)| c != r as i64) {
        return Err(Error::integrity(format!(
            "f_C recursion {:?} disagrees with closed form {:?} on {tree}",
            profile.f, closed
        )));
    }
    Ok(profile)
}

fn profile_by_recursion(tree: &RootedPlaneTree, chain: &Chain) -> ChainProfile {
    let nodes = chain.nodes();
    let len = nodes.len();
    let b: Vec<usize> = nodes
        .iter()
        .enumerate()
        .map(|(p, &v)| tree.subtree_size(v) - (len - 1 - p) - 1)
        .collect();
    let mut f = vec![0usize; len];
    for p in (0..len - 1).rev() {
        let below = f[p + 1];
        f[p] = if below < b[p + 1] { below + 1 } else { below };
    }
    ChainProfile { chain: chain.clone(), b, f }
}

/// Closed-form `f_C`, root-first. Signed so that a misapplied formula shows
/// up as a mismatch rather than an underflow.
pub fn f_closed_form(tree: &RootedPlaneTree, chain: &Chain) -> Vec<i64> {
    let nodes = chain.nodes();
    let len = nodes.len();
    (0..len)
        .map(|p| {
            if p == len - 1 {
                return 0;
            }
            let best = nodes[p + 1..]
                .iter()
                .map(|&u| (tree.subtree_size(u) + 2 * tree.depth(u)) as i64)
                .min()
                .expect("non-leaf has chain nodes below");
            best - len as i64 - tree.depth(nodes[p]) as i64 - 1
        })
        .collect()
}

/// Profiles of all maximal chains of a tree, in leaf order.
pub fn chain_profiles(tree: &RootedPlaneTree) -> Result<Vec<ChainProfile>> {
    tree.maximal_chains().iter().map(|c| chain_profile(tree, c)).collect()
}

/// A v-rank: `−1` off the subtree, `∞` at the anchor, a height otherwise.
/// Variant order gives `NotBelow < Finite(_) < Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    NotBelow,
    Finite(usize),
    Infinite,
}

impl Rank {
    /// Whether this rank is at least `k`.
    pub fn at_least(self, k: usize) -> bool {
        match self {
            Rank::NotBelow => false,
            Rank::Finite(r) => r >= k,
            Rank::Infinite => true,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::NotBelow => write!(f, "-1"),
            Rank::Finite(r) => write!(f, "{r}"),
            Rank::Infinite => write!(f, "inf"),
        }
    }
}

/// All v-ranks of a tree, `rk_v(u)` stored at `[v][u]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    n: usize,
    ranks: Vec<Rank>,
}

impl RankTable {
    pub fn new(tree: &RootedPlaneTree) -> Result<Self> {
        let profiles = chain_profiles(tree)?;
        Ok(Self::from_profiles(tree, &profiles))
    }

    pub fn from_profiles(tree: &RootedPlaneTree, profiles: &[ChainProfile]) -> Self {
        let n = tree.len();
        let mut ranks = vec![Rank::NotBelow; n * n];
        for v in tree.nodes() {
            for u in tree.descendants(v) {
                ranks[v.0 * n + u.0] = if u == v {
                    Rank::Infinite
                } else {
                    Rank::Finite(extended_height(tree, profiles, v, u))
                };
            }
        }
        RankTable { n, ranks }
    }

    pub fn get(&self, v: NodeId, u: NodeId) -> Rank {
        self.ranks[v.0 * self.n + u.0]
    }
}

/// Height of `u` in the extended tree of `v`: the best `height_C(u) + f_C(v)`
/// over maximal chains through `u`.
fn extended_height(tree: &RootedPlaneTree, profiles: &[ChainProfile], v: NodeId, u: NodeId) -> usize {
    profiles
        .iter()
        .filter(|p| p.chain().contains(u))
        .map(|p| {
            let h = p.chain().height_of(u).expect("chain contains u");
            let f = p.f(v).expect("chains through u pass through its ancestor v");
            h + f
        })
        .max()
        .unwrap_or_else(|| unreachable!("every node of {tree} lies on a maximal chain"))
}

/// `rk_v(u)`.
pub fn v_rank(tree: &RootedPlaneTree, v: NodeId, u: NodeId) -> Result<Rank> {
    tree.check(v)?;
    tree.check(u)?;
    if !tree.is_below(u, v) {
        return Ok(Rank::NotBelow);
    }
    if u == v {
        return Ok(Rank::Infinite);
    }
    let profiles = chain_profiles(tree)?;
    Ok(Rank::Finite(extended_height(tree, &profiles, v, u)))
}

/// The three expressions for the maximum orbit size, evaluated separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxOrbitExpressions {
    /// `max_{u child of root} rk_root(u) + 2`.
    pub by_rank: usize,
    /// `max_C (|C| + f_C(root))`.
    pub by_chain_potential: usize,
    /// `max_C min_{v ∈ C, v ≠ root} (|Δ(v)| + 2·depth(v) − 1)`.
    pub by_depth_formula: usize,
}

impl MaxOrbitExpressions {
    pub fn evaluate(tree: &RootedPlaneTree) -> Result<Self> {
        if tree.len() == 1 {
            // Only one element in the lattice; every expression degenerates.
            return Ok(MaxOrbitExpressions { by_rank: 1, by_chain_potential: 1, by_depth_formula: 1 });
        }
        let profiles = chain_profiles(tree)?;
        let by_rank = tree
            .children(NodeId::ROOT)
            .iter()
            .map(|&u| extended_height(tree, &profiles, NodeId::ROOT, u))
            .max()
            .expect("n ≥ 2 means the root has a child")
            + 2;
        let by_chain_potential =
            profiles.iter().map(|p| p.chain().len() + p.f_root()).max().expect("at least one chain");
        let by_depth_formula = tree
            .maximal_chains()
            .iter()
            .map(|c| {
                c.nodes()[1..]
                    .iter()
                    .map(|&v| tree.subtree_size(v) + 2 * tree.depth(v) - 1)
                    .min()
                    .expect("chain has a non-root node")
            })
            .max()
            .expect("at least one chain");
        Ok(MaxOrbitExpressions { by_rank, by_chain_potential, by_depth_formula })
    }

    pub fn agree(&self) -> bool {
        self.by_rank == self.by_chain_potential && self.by_chain_potential == self.by_depth_formula
    }
}

/// Maximum size of a forward orbit of Pop on the ornamentation lattice.
/// All three equivalent expressions are evaluated; disagreement is an
/// integrity error.
pub fn max_orbit_size(tree: &RootedPlaneTree) -> Result<usize> {
    let e = MaxOrbitExpressions::evaluate(tree)?;
    if !e.agree() {
        return Err(Error::integrity(format!("max-orbit expressions disagree on {tree}: {e:?}")));
    }
    Ok(e.by_depth_formula)
}

/// The extremal ornamentation with the longest Pop orbit, together with the
/// node numbering used to build it.
#[derive(Debug, Clone)]
pub struct DaggerConstruction {
    /// `v_0, v_1, ...`: the chosen chain top to bottom, then the off-chain
    /// nodes in the fixed linear extension (deeper boughs first, ancestors
    /// before descendants within a bough).
    pub numbering: Vec<NodeId>,
    /// Number of nodes on the chosen chain.
    pub chain_len: usize,
    /// `f_C(root)` for the chosen chain.
    pub k: usize,
    pub delta: Ornamentation,
}

impl DaggerConstruction {
    /// Predicted orbit size `|C*| + k`.
    pub fn orbit_size(&self) -> usize {
        self.chain_len + self.k
    }

    /// The closed-form ornaments of `Pop^p(δ†)`: for `i ≤ k`,
    /// `{v_i} ∪ {v_j : i+1 ≤ j ≤ |C*| + k − 1 − i − p}`, singletons elsewhere.
    pub fn predicted_after(&self, p: usize) -> Vec<NodeSet> {
        let n = self.numbering.len();
        let mut sets: Vec<NodeSet> = (0..n).map(|i| NodeSet::singleton(NodeId(i))).collect();
        for i in 0..=self.k.min(n - 1) {
            let top = self.numbering[i];
            let mut s = NodeSet::singleton(top);
            let limit = (self.chain_len + self.k).checked_sub(1 + i + p);
            if let Some(limit) = limit {
                for j in i + 1..=limit {
                    s.insert(self.numbering[j]);
                }
            }
            sets[top.0] = s;
        }
        sets
    }

    /// Index of `v` in `numbering`.
    pub fn position_of(&self, v: NodeId) -> usize {
        self.numbering.iter().position(|&w| w == v).expect("numbering covers the tree")
    }
}

/// Builds δ†. The chain maximizing `|C| + f_C(root)` is chosen with ties
/// going to the smallest leaf index.
pub fn build_delta_dagger(tree: &Arc<RootedPlaneTree>) -> Result<DaggerConstruction> {
    let profiles = chain_profiles(tree)?;
    let best = profiles
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| {
            (a.chain().len() + a.f_root())
                .cmp(&(b.chain().len() + b.f_root()))
                .then(ib.cmp(ia))
        })
        .map(|(_, p)| p)
        .expect("at least one chain");
    let chain = best.chain().nodes();
    let chain_len = chain.len();
    let k = best.f_root();
    let on_chain = best.chain().node_set();

    // bough index: position of the deepest chain ancestor
    let bough = |x: NodeId| -> usize {
        chain.iter().rposition(|&c| tree.is_below(x, c)).expect("root is an ancestor")
    };
    let mut off: Vec<NodeId> = tree.nodes().filter(|v| !on_chain.contains(*v)).collect();
    off.sort_by_key(|&x| (std::cmp::Reverse(bough(x)), tree.depth(x), x));
    let mut numbering = chain.to_vec();
    numbering.extend(off);

    let mut sets: Vec<NodeSet> = tree.nodes().map(NodeSet::singleton).collect();
    for i in 0..=k {
        let last = chain_len + k - 1 - i;
        sets[numbering[i].0] = numbering[i..=last].iter().copied().collect();
    }
    let delta = Ornamentation::new(tree.clone(), sets)
        .map_err(|e| Error::integrity(format!("δ† is not an ornamentation on {tree}: {e}")))?;
    Ok(DaggerConstruction { numbering, chain_len, k, delta })
}

/// `δ, Pop(δ), Pop²(δ), ...` ending with the first occurrence of δ_min.
pub fn forward_orbit(delta: &Ornamentation) -> Result<Vec<Ornamentation>> {
    let n = delta.tree().len();
    let cap = n * n + ORBIT_SLACK;
    let mut orbit = vec![delta.clone()];
    while !orbit.last().expect("non-empty").is_min() {
        if orbit.len() > cap {
            return Err(Error::integrity(format!(
                "Pop orbit of {delta:?} exceeded {cap} steps"
            )));
        }
        let next = orbit.last().expect("non-empty").pop();
        orbit.push(next);
    }
    Ok(orbit)
}
