//! Images of Pop and its iterates.
//!
//! An ornamentation is in the image of Pop exactly when no node is *hugged*:
//! `v` hugs `u` when `v` wraps `u` and some section of `δ(u)` fills the
//! corresponding part of `δ(v)` all the way down. The imaginary node `ω`
//! sits above the root with ornament the whole tree, so top-level ornaments
//! can be hugged too.
//!
//! For `Pop^k` this module provides the general necessary conditions (ranks,
//! hugs, beads) and the exact criterion on chains.

use std::fmt;

use crate::error::{Error, Result};
use crate::gseq::GSequence;
use crate::ornamentation::Ornamentation;
use crate::rank::RankTable;
use crate::tree::{NodeId, NodeSet};

/// A tree node or the imaginary node above the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedNode {
    Node(NodeId),
    Imaginary,
}

impl ExtendedNode {
    fn from_wrapper(w: Option<NodeId>) -> Self {
        w.map_or(ExtendedNode::Imaginary, ExtendedNode::Node)
    }

    pub fn label(self, delta: &Ornamentation) -> String {
        match self {
            ExtendedNode::Node(v) => delta.tree().label(v),
            ExtendedNode::Imaginary => "ω".to_owned(),
        }
    }
}

impl From<NodeId> for ExtendedNode {
    fn from(v: NodeId) -> Self {
        ExtendedNode::Node(v)
    }
}

/// `δ(v)` with `δ(ω)` taken to be the whole tree.
fn extended_set(delta: &Ornamentation, v: ExtendedNode) -> NodeSet {
    match v {
        ExtendedNode::Node(x) => delta.at(x),
        ExtendedNode::Imaginary => delta.tree().all_nodes(),
    }
}

/// Whether `v` hugs `u` in `δ`.
pub fn hugs(delta: &Ornamentation, v: ExtendedNode, u: NodeId) -> bool {
    if delta.is_singleton(u) || ExtendedNode::from_wrapper(delta.wrapper(u)) != v {
        return false;
    }
    let outer = extended_set(delta, v);
    let tree = delta.tree();
    delta
        .section_tops(u)
        .any(|c| delta.below_within(u, c) == outer.intersection(tree.descendants(c)))
}

/// A hugging pair found in an ornamentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hug {
    pub hugger: ExtendedNode,
    pub hugged: NodeId,
}

impl Hug {
    pub fn describe(&self, delta: &Ornamentation) -> String {
        format!("{} hugs {}", self.hugger.label(delta), delta.tree().label(self.hugged))
    }
}

/// All hugs, ordered by the hugged node.
pub fn find_hugs(delta: &Ornamentation) -> Vec<Hug> {
    delta
        .tree()
        .nodes()
        .filter_map(|u| {
            let hugger = ExtendedNode::from_wrapper(delta.wrapper(u));
            hugs(delta, hugger, u).then_some(Hug { hugger, hugged: u })
        })
        .collect()
}

/// Membership in `Pop(O(T))`: no node is hugged.
pub fn in_pop_image(delta: &Ornamentation) -> bool {
    find_hugs(delta).is_empty()
}

/// The same predicate phrased through `o_u`, the smallest ornament of `δ`
/// properly containing `δ(u)` (or the whole tree if none): `δ` is in the
/// image iff for every `u` and every child `u'` of `u` inside `δ(u)`,
/// `Δ_{δ(u)}(u') ≠ Δ_{o_u}(u')`. Computed by a direct search over all
/// ornaments rather than through wrappers.
pub fn in_pop_image_by_containing_ornaments(delta: &Ornamentation) -> bool {
    let tree = delta.tree();
    tree.nodes().all(|u| {
        let own = delta.at(u);
        let o_u = delta
            .sets()
            .iter()
            .filter(|s| own.is_subset(**s) && **s != own)
            .min_by_key(|s| s.len())
            .copied()
            .unwrap_or_else(|| tree.all_nodes());
        delta.section_tops(u).all(|c| {
            let d = tree.descendants(c);
            own.intersection(d) != o_u.intersection(d)
        })
    })
}

/// For `δ` in the image of Pop, the ornamentation `δ*` with
/// `δ*(u) = Δ_{δ(v)}(u)` where `v` wraps `u`; `Pop(δ*) = δ`.
pub fn pop_preimage(delta: &Ornamentation) -> Result<Ornamentation> {
    if let Some(hug) = find_hugs(delta).first() {
        return Err(Error::domain(format!(
            "{} is not in the image of Pop: {}",
            delta.label(),
            hug.describe(delta)
        )));
    }
    let tree = delta.tree();
    let sets = tree
        .nodes()
        .map(|u| {
            let outer = extended_set(delta, ExtendedNode::from_wrapper(delta.wrapper(u)));
            outer.intersection(tree.descendants(u))
        })
        .collect();
    let pre = Ornamentation::new(delta.tree_arc().clone(), sets)
        .map_err(|e| Error::integrity(format!("preimage of {} invalid: {e}", delta.label())))?;
    if pre.pop() != *delta {
        return Err(Error::integrity(format!(
            "Pop({}) = {}, expected {}",
            pre.label(),
            pre.pop().label(),
            delta.label()
        )));
    }
    Ok(pre)
}

/// Beads of the `child`-section of `δ(v)`: nodes `u ≤ child` outside
/// `δ(v)` with singleton ornament, reachable from `child` through nodes that
/// are in `δ(v)` or carry singleton ornaments.
pub fn beads(delta: &Ornamentation, v: NodeId, child: NodeId) -> Result<Vec<NodeId>> {
    let tree = delta.tree();
    tree.check(v)?;
    tree.check(child)?;
    if tree.parent(child) != Some(v) || !delta.at(v).contains(child) {
        return Err(Error::domain(format!(
            "{} is not a child of {} inside its ornament",
            tree.label(child),
            tree.label(v)
        )));
    }
    let own = delta.at(v);
    let mut out = NodeSet::EMPTY;
    let mut stack = vec![child];
    while let Some(w) = stack.pop() {
        let inside = own.contains(w);
        if !inside && !delta.is_singleton(w) {
            continue;
        }
        if !inside {
            out.insert(w);
        }
        stack.extend_from_slice(tree.children(w));
    }
    Ok(out.to_vec())
}

/// Which necessary condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// A node of `δ(v)` has `v`-rank below `k`.
    Rank,
    /// Some node is hugged (`k ≥ 1`).
    Hug,
    /// A section has fewer than `k − 1` beads.
    Beads,
    /// Chain criterion (i): a non-singleton ornament is hugged.
    TamariHug,
    /// Chain criterion (ii): too few ornaments below, or the top `k − 1` of
    /// them are not singletons.
    TamariBelow,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Rank => "rank",
            Condition::Hug => "hug",
            Condition::Beads => "beads",
            Condition::TamariHug => "tamari-i",
            Condition::TamariBelow => "tamari-ii",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopkFailure {
    pub condition: Condition,
    pub witness: Vec<ExtendedNode>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopkReport {
    pub k: usize,
    pub failures: Vec<PopkFailure>,
}

impl PopkReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed(&self, condition: Condition) -> bool {
        self.failures.iter().any(|f| f.condition == condition)
    }
}

/// Checks the rank, hug and bead conditions for membership in the image of
/// `Pop^k`. Passing is necessary but not sufficient on general trees.
pub fn popk_necessary(delta: &Ornamentation, k: usize) -> Result<PopkReport> {
    let ranks = RankTable::new(delta.tree())?;
    Ok(popk_necessary_with(delta, k, &ranks))
}

/// [`popk_necessary`] with a precomputed rank table for `δ`'s tree.
pub fn popk_necessary_with(delta: &Ornamentation, k: usize, ranks: &RankTable) -> PopkReport {
    let tree = delta.tree();
    let mut failures = Vec::new();
    for v in tree.nodes() {
        for u in delta.at(v) {
            let r = ranks.get(v, u);
            if !r.at_least(k) {
                failures.push(PopkFailure {
                    condition: Condition::Rank,
                    witness: vec![v.into(), u.into()],
                    detail: format!(
                        "rk_{}({}) = {r} < {k}",
                        tree.label(v),
                        tree.label(u)
                    ),
                });
            }
        }
    }
    if k >= 1 {
        for hug in find_hugs(delta) {
            failures.push(PopkFailure {
                condition: Condition::Hug,
                witness: vec![hug.hugger, hug.hugged.into()],
                detail: hug.describe(delta),
            });
        }
    }
    if k >= 2 {
        for v in tree.nodes() {
            for c in delta.section_tops(v) {
                let count = beads(delta, v, c).expect("section top is a child inside δ(v)").len();
                if count < k - 1 {
                    failures.push(PopkFailure {
                        condition: Condition::Beads,
                        witness: vec![v.into(), c.into()],
                        detail: format!(
                            "{}-section of δ({}) has {count} beads, needs {}",
                            tree.label(c),
                            tree.label(v),
                            k - 1
                        ),
                    });
                }
            }
        }
    }
    PopkReport { k, failures }
}

/// Nearest `j < i` whose ornament contains `v_i` (1-based).
fn chain_wrapper(g: &GSequence, i: usize) -> Option<usize> {
    (1..i).rev().find(|&j| g.get(j) >= i)
}

/// Who hugs `v_i` on a chain, read off the g-sequence: the wrapper `v_j`
/// when `g(j) = g(i)`, or `ω` when `v_i` is unwrapped and `g(i) = n`.
pub fn chain_hugger(g: &GSequence, i: usize) -> Option<ExtendedNode> {
    if g.is_singleton(i) {
        return None;
    }
    match chain_wrapper(g, i) {
        Some(j) => (g.get(j) == g.get(i)).then_some(ExtendedNode::Node(NodeId(j - 1))),
        None => (g.get(i) == g.len()).then_some(ExtendedNode::Imaginary),
    }
}

/// The chain criterion for `Pop^k`, with failures per node.
pub fn tamari_popk_report(g: &GSequence, k: usize) -> PopkReport {
    let mut failures = Vec::new();
    if k == 0 {
        return PopkReport { k, failures };
    }
    let n = g.len();
    let name = |i: usize| format!("v{i}");
    for i in 1..=n {
        if g.is_singleton(i) {
            continue;
        }
        if let Some(h) = chain_hugger(g, i) {
            let hugger = match h {
                ExtendedNode::Node(v) => name(v.0 + 1),
                ExtendedNode::Imaginary => "ω".to_owned(),
            };
            failures.push(PopkFailure {
                condition: Condition::TamariHug,
                witness: vec![h, NodeId(i - 1).into()],
                detail: format!("{hugger} hugs {}", name(i)),
            });
        }
        let gi = g.get(i);
        let below = n - gi;
        let blocker = (gi + 1..gi + k).find(|&m| m <= n && !g.is_singleton(m));
        if below < k || blocker.is_some() {
            let detail = match blocker {
                Some(m) if below >= k => {
                    format!("ornament at {} below δ({}) is not a singleton", name(m), name(i))
                }
                _ => format!("{below} ornaments below δ({}), need {k}", name(i)),
            };
            failures.push(PopkFailure {
                condition: Condition::TamariBelow,
                witness: vec![NodeId(i - 1).into()],
                detail,
            });
        }
    }
    PopkReport { k, failures }
}

/// Exact membership in `Pop^k(O(C_n))`.
pub fn in_popk_image_tamari(g: &GSequence, k: usize) -> bool {
    tamari_popk_report(g, k).passed()
}

/// [`in_popk_image_tamari`] for an ornamentation; non-chains are a domain
/// error.
pub fn in_popk_image_chain(delta: &Ornamentation, k: usize) -> Result<bool> {
    Ok(in_popk_image_tamari(&GSequence::from_ornamentation(delta)?, k))
}

/// Extends every non-singleton ornament down by `k − 1` nodes. The result
/// lies in the image of Pop and reaches `g` after `k − 1` more applications.
pub fn tamari_popk_preimage(g: &GSequence, k: usize) -> Result<GSequence> {
    if k == 0 {
        return Err(Error::domain("preimage under Pop^k needs k ≥ 1"));
    }
    let report = tamari_popk_report(g, k);
    if let Some(f) = report.failures.first() {
        return Err(Error::domain(format!(
            "{g} is not in the image of Pop^{k}: {} ({})",
            f.detail, f.condition
        )));
    }
    let extended: Vec<usize> = (1..=g.len())
        .map(|i| if g.is_singleton(i) { i } else { g.get(i) + k - 1 })
        .collect();
    let ext = GSequence::new(extended)
        .map_err(|e| Error::integrity(format!("extension of {g} by {} invalid: {e}", k - 1)))?;
    let delta = ext.to_chain_ornamentation();
    if !in_pop_image(&delta) {
        return Err(Error::integrity(format!("extension {ext} of {g} is hugged")));
    }
    let back = GSequence::from_ornamentation(&delta.pop_times(k - 1))?;
    if back != *g {
        return Err(Error::integrity(format!(
            "Pop^{}({ext}) = {back}, expected {g}",
            k - 1
        )));
    }
    Ok(ext)
}

/// An ornamentation `σ` of the chain with `Pop^k(σ) = g`.
pub fn popk_preimage_chain(g: &GSequence, k: usize) -> Result<Ornamentation> {
    let ext = tamari_popk_preimage(g, k)?;
    let sigma = pop_preimage(&ext.to_chain_ornamentation())?;
    if GSequence::from_ornamentation(&sigma.pop_times(k))? != *g {
        return Err(Error::integrity(format!("Pop^{k}({}) != {g}", sigma.label())));
    }
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::RootedPlaneTree;
    use std::sync::Arc;

    fn g(seq: &[usize]) -> GSequence {
        GSequence::new(seq.to_vec()).unwrap()
    }

    fn d(seq: &[usize]) -> Ornamentation {
        g(seq).to_chain_ornamentation()
    }

    fn set(ids: &[usize]) -> NodeSet {
        ids.iter().map(|&i| NodeId(i)).collect()
    }

    #[test]
    fn hug_examples() {
        let x = d(&[1, 3, 3]);
        assert!(hugs(&x, ExtendedNode::Imaginary, NodeId(1)));
        let x = d(&[3, 3, 3]);
        assert!(hugs(&x, NodeId(0).into(), NodeId(1)));
        let x = d(&[2, 2, 3]);
        for u in x.tree().nodes() {
            assert!(!hugs(&x, ExtendedNode::Imaginary, u));
            for v in x.tree().nodes() {
                assert!(!hugs(&x, v.into(), u));
            }
        }
    }

    #[test]
    fn image_examples() {
        assert!(in_pop_image(&d(&[2, 2, 3])));
        assert!(!in_pop_image(&d(&[3, 2, 3])));
        assert_eq!(
            find_hugs(&d(&[3, 2, 3])),
            vec![Hug { hugger: ExtendedNode::Imaginary, hugged: NodeId(0) }]
        );
        assert_eq!(find_hugs(&d(&[3, 2, 3]))[0].describe(&d(&[3, 2, 3])), "ω hugs v1");
        assert!(in_pop_image(&d(&[1, 2, 3])));
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(pop_preimage(&d(&[2, 2, 3])).unwrap(), d(&[3, 2, 3]));
        assert_eq!(pop_preimage(&d(&[1, 2, 3])).unwrap(), d(&[3, 3, 3]));
        let star = Arc::new(RootedPlaneTree::star(3).unwrap());
        let min = Ornamentation::min(star.clone());
        let pre = pop_preimage(&min).unwrap();
        assert_eq!(pre, Ornamentation::max(star));
        assert_eq!(pre.pop(), min);
        assert!(matches!(pop_preimage(&d(&[3, 2, 3])), Err(Error::Domain(_))));
    }

    #[test]
    fn bead_examples() {
        let c5 = Arc::new(RootedPlaneTree::chain(5).unwrap());
        let x = Ornamentation::new(
            c5.clone(),
            vec![set(&[0, 1, 2]), set(&[1]), set(&[2]), set(&[3]), set(&[4])],
        )
        .unwrap();
        assert_eq!(beads(&x, NodeId(0), NodeId(1)).unwrap(), vec![NodeId(3), NodeId(4)]);
        let y = Ornamentation::new(
            c5,
            vec![set(&[0, 1, 2]), set(&[1]), set(&[2]), set(&[3, 4]), set(&[4])],
        )
        .unwrap();
        assert!(beads(&y, NodeId(0), NodeId(1)).unwrap().is_empty());
        assert!(beads(&d(&[3, 3, 3]), NodeId(0), NodeId(1)).unwrap().is_empty());
        assert!(matches!(beads(&d(&[1, 2, 3]), NodeId(0), NodeId(1)), Err(Error::Domain(_))));
    }

    #[test]
    fn popk_necessary_examples() {
        assert!(popk_necessary(&d(&[2, 2, 3]), 1).unwrap().passed());
        let report = popk_necessary(&d(&[2, 2, 3]), 2).unwrap();
        assert!(!report.passed());
        let rank = report.failures.iter().find(|f| f.condition == Condition::Rank).unwrap();
        assert_eq!(rank.witness, vec![NodeId(0).into(), NodeId(1).into()]);
        assert_eq!(rank.detail, "rk_v1(v2) = 1 < 2");
        for k in 0..6 {
            assert!(popk_necessary(&d(&[1, 2, 3, 4]), k).unwrap().passed());
        }
    }

    #[test]
    fn tamari_examples() {
        assert!(in_popk_image_tamari(&g(&[2, 2, 3]), 1));
        let report = tamari_popk_report(&g(&[2, 2, 3]), 2);
        assert!(report.failed(Condition::TamariBelow));
        assert!(!report.failed(Condition::TamariHug));
        assert!(in_popk_image_tamari(&g(&[2, 2, 3, 4, 5]), 3));
        assert!(!in_popk_image_tamari(&g(&[3, 2, 3]), 1));
        // k = 0 admits everything
        assert!(in_popk_image_tamari(&g(&[3, 3, 3]), 0));

        let cherry = Ornamentation::min(Arc::new(RootedPlaneTree::parse("(()())").unwrap()));
        assert!(matches!(in_popk_image_chain(&cherry, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn tamari_preimage_examples() {
        assert_eq!(tamari_popk_preimage(&g(&[2, 2, 3]), 1).unwrap(), g(&[2, 2, 3]));
        assert_eq!(pop_preimage(&d(&[2, 2, 3])).unwrap(), d(&[3, 2, 3]));
        assert_eq!(tamari_popk_preimage(&g(&[2, 2, 3, 4]), 2).unwrap(), g(&[3, 2, 3, 4]));
        assert_eq!(d(&[3, 2, 3, 4]).pop(), d(&[2, 2, 3, 4]));
        assert_eq!(tamari_popk_preimage(&g(&[1, 2, 3, 4, 5]), 3).unwrap(), g(&[1, 2, 3, 4, 5]));
        assert!(matches!(tamari_popk_preimage(&g(&[2, 2, 3]), 2), Err(Error::Domain(_))));
        assert!(matches!(tamari_popk_preimage(&g(&[2, 2, 3]), 0), Err(Error::Domain(_))));

        let sigma = popk_preimage_chain(&g(&[2, 2, 3, 4]), 2).unwrap();
        assert_eq!(sigma.pop_times(2), d(&[2, 2, 3, 4]));
    }
}
