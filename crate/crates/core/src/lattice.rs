//! Exhaustive enumeration of ornamentation lattices of small trees, and the
//! brute-force oracles built on it.
//!
//! Elements are found by a downward breadth-first closure from `δ_max`
//! along lower covers; every element of a finite lattice below the top is
//! reached this way. Each BFS layer is expanded in parallel, merged
//! sequentially, and the final element list is sorted canonically, so
//! results never depend on scheduling.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::image::popk_necessary_with;
use crate::ornamentation::Ornamentation;
use crate::rank::RankTable;
use crate::tree::{enumerate_plane_trees_capped, NodeId, NodeSet, RootedPlaneTree, DEFAULT_GENERATION_CAP};

/// Default element cap for [`enumerate_lattice`].
pub const DEFAULT_LATTICE_CAP: usize = 1_000_000;

/// A fully enumerated ornamentation lattice.
#[derive(Debug, Clone)]
pub struct LatticeGraph {
    tree: Arc<RootedPlaneTree>,
    elements: Vec<Ornamentation>,
    /// Cover relations as `(lower, upper)` index pairs, sorted.
    hasse: Vec<(usize, usize)>,
    index: HashMap<Ornamentation, usize>,
}

pub fn enumerate_lattice(tree: &Arc<RootedPlaneTree>) -> Result<LatticeGraph> {
    enumerate_lattice_with(tree, DEFAULT_LATTICE_CAP, Execution::default())
}

pub fn enumerate_lattice_with(
    tree: &Arc<RootedPlaneTree>,
    cap: usize,
    exec: Execution,
) -> Result<LatticeGraph> {
    let top = Ornamentation::max(tree.clone());
    let mut seen: HashSet<Ornamentation> = HashSet::new();
    seen.insert(top.clone());
    let mut frontier = vec![top];
    while !frontier.is_empty() {
        let candidates = exec.flat_map(&frontier, |d| d.covers_below());
        let mut next = Vec::new();
        for c in candidates {
            if !seen.contains(&c) {
                seen.insert(c.clone());
                next.push(c);
            }
        }
        if seen.len() > cap {
            return Err(Error::Resource(format!(
                "ornamentation lattice of {tree} has more than {cap} elements"
            )));
        }
        frontier = next;
    }

    let mut elements: Vec<Ornamentation> = seen.into_iter().collect();
    elements.sort();
    let index: HashMap<Ornamentation, usize> =
        elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let pairs: Vec<(usize, &Ornamentation)> = elements.iter().enumerate().collect();
    let mut hasse = exec.flat_map(&pairs, |&(i, e)| {
        e.covers_below().iter().map(|c| (index[c], i)).collect()
    });
    hasse.sort_unstable();
    Ok(LatticeGraph { tree: tree.clone(), elements, hasse, index })
}

impl LatticeGraph {
    pub fn tree(&self) -> &Arc<RootedPlaneTree> {
        &self.tree
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> &[Ornamentation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Ornamentation {
        &self.elements[i]
    }

    /// Cover relations as `(lower, upper)` index pairs, sorted.
    pub fn hasse(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    pub fn index_of(&self, delta: &Ornamentation) -> Option<usize> {
        self.index.get(delta).copied()
    }

    fn require(&self, delta: &Ornamentation) -> Result<usize> {
        self.index_of(delta).ok_or_else(|| {
            Error::domain(format!("{} is not an element of the lattice of {}", delta.label(), self.tree))
        })
    }

    /// Least upper bound, computed by scanning all upper bounds.
    pub fn join(&self, a: &Ornamentation, b: &Ornamentation) -> Result<Ornamentation> {
        self.require(a)?;
        self.require(b)?;
        let ub: Vec<&Ornamentation> =
            self.elements.iter().filter(|z| a.leq(z) && b.leq(z)).collect();
        unique_extreme(&ub, |x, y| x.leq(y)).cloned().ok_or_else(|| {
            Error::integrity(format!("{} and {} have no unique least upper bound", a.label(), b.label()))
        })
    }

    /// Greatest lower bound, computed by scanning all lower bounds.
    pub fn meet_by_search(&self, a: &Ornamentation, b: &Ornamentation) -> Result<Ornamentation> {
        self.require(a)?;
        self.require(b)?;
        let lb: Vec<&Ornamentation> =
            self.elements.iter().filter(|z| z.leq(a) && z.leq(b)).collect();
        unique_extreme(&lb, |x, y| y.leq(x)).cloned().ok_or_else(|| {
            Error::integrity(format!("{} and {} have no unique greatest lower bound", a.label(), b.label()))
        })
    }

    /// `pop_table()[i]` is the index of `Pop(elements[i])`.
    pub fn pop_table(&self) -> Vec<usize> {
        self.elements.iter().map(|e| self.index[&e.pop()]).collect()
    }

    /// Membership mask of `Pop^k(O(T))`, indexed like `elements`.
    pub fn popk_image_mask(&self, k: usize) -> Vec<bool> {
        let pop = self.pop_table();
        let mut mask = vec![false; self.len()];
        for start in 0..self.len() {
            let mut i = start;
            for _ in 0..k {
                i = pop[i];
            }
            mask[i] = true;
        }
        mask
    }

    /// `{Pop^k(δ) : δ ∈ O(T)}` in canonical order.
    pub fn brute_popk_image(&self, k: usize) -> Vec<Ornamentation> {
        self.popk_image_mask(k)
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| self.elements[i].clone())
            .collect()
    }

    /// Largest forward orbit of Pop, found by following the pop table.
    pub fn brute_max_orbit(&self) -> usize {
        let pop = self.pop_table();
        let mut orbit_len = vec![0usize; self.len()];
        // Pop strictly decreases weight except at δ_min, and the element
        // order is not weight order, so resolve lengths by memoized walks.
        fn resolve(i: usize, pop: &[usize], memo: &mut [usize]) -> usize {
            if memo[i] != 0 {
                return memo[i];
            }
            let len = if pop[i] == i { 1 } else { 1 + resolve(pop[i], pop, memo) };
            memo[i] = len;
            len
        }
        (0..self.len()).map(|i| resolve(i, &pop, &mut orbit_len)).max().unwrap_or(0)
    }

    /// Checks the cover-local semidistributivity criterion on every cover,
    /// and that the explicit `δ↓`/`δ↑` witnesses are the extremal elements.
    pub fn check_semidistributive(&self, exec: Execution) -> SemidistributivityReport {
        let counterexample = exec.find_first(&self.hasse, |&(lo, hi)| self.check_cover(lo, hi).err());
        SemidistributivityReport { covers_checked: self.hasse.len(), counterexample }
    }

    fn check_cover(&self, lo: usize, hi: usize) -> std::result::Result<(), SemidistributivityFailure> {
        let (x, x_low) = (&self.elements[hi], &self.elements[lo]);
        let fail = |kind| SemidistributivityFailure { lower: x_low.clone(), upper: x.clone(), kind };

        let below: Vec<&Ornamentation> =
            self.elements.iter().filter(|z| z.leq(x) && !z.leq(x_low)).collect();
        let min = unique_extreme(&below, |a, b| a.leq(b)).ok_or_else(|| fail(FailureKind::NoMinimum))?;
        let above: Vec<&Ornamentation> =
            self.elements.iter().filter(|z| x_low.leq(z) && !x.leq(z)).collect();
        let max = unique_extreme(&above, |a, b| b.leq(a)).ok_or_else(|| fail(FailureKind::NoMaximum))?;

        let (down, up) = cover_witnesses(x, x_low).ok_or_else(|| fail(FailureKind::NotACover))?;
        if *min != down {
            return Err(fail(FailureKind::DownWitnessMismatch));
        }
        if *max != up {
            return Err(fail(FailureKind::UpWitnessMismatch));
        }
        Ok(())
    }

    /// DOT rendering of the Hasse diagram. Edges run from each element to
    /// the elements it covers; `dir=back` draws arrowheads upward.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph lattice {{");
        let _ = writeln!(out, "  label=\"{}\";", self.tree.render());
        let _ = writeln!(out, "  node [shape=box];");
        let _ = writeln!(out, "  edge [dir=back];");
        for (i, e) in self.elements.iter().enumerate() {
            let _ = writeln!(out, "  e{i} [label=\"{}\"];", e.label());
        }
        let mut edges = self.hasse.clone();
        edges.sort_by_key(|&(lo, hi)| (hi, lo));
        for (lo, hi) in edges {
            let _ = writeln!(out, "  e{hi} -> e{lo};");
        }
        out.push_str("}\n");
        out
    }
}

/// The element of `items` that is `≤` every other (under `le`), if any.
fn unique_extreme<'a>(
    items: &[&'a Ornamentation],
    le: impl Fn(&Ornamentation, &Ornamentation) -> bool,
) -> Option<&'a Ornamentation> {
    items.iter().copied().find(|m| items.iter().all(|z| le(m, z)))
}

/// The explicit extremal elements for the cover `lower ⋖ upper`:
/// `δ↓` has singletons everywhere except the path `[u, v]` at `v`, and
/// `δ↑(w) = Δ(w) ∖ Δ(u)` for `u < w ≤ v`, `Δ(w)` elsewhere. Here `v` is the
/// node whose ornament shrinks and `u` tops the removed subornament.
pub fn cover_witnesses(
    upper: &Ornamentation,
    lower: &Ornamentation,
) -> Option<(Ornamentation, Ornamentation)> {
    let tree = upper.tree_arc();
    let mut changed = tree.nodes().filter(|&w| upper.at(w) != lower.at(w));
    let v = changed.next()?;
    if changed.next().is_some() {
        return None;
    }
    let removed = upper.at(v).difference(lower.at(v));
    let u = removed.first()?;
    let path = tree.path(u, v);

    let mut down: Vec<NodeSet> = tree.nodes().map(NodeSet::singleton).collect();
    down[v.0] = path;
    let up: Vec<NodeSet> = tree
        .nodes()
        .map(|w| {
            if w != u && path.contains(w) {
                tree.descendants(w).difference(tree.descendants(u))
            } else {
                tree.descendants(w)
            }
        })
        .collect();
    Some((
        Ornamentation::new(tree.clone(), down).ok()?,
        Ornamentation::new(tree.clone(), up).ok()?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    NoMinimum,
    NoMaximum,
    NotACover,
    DownWitnessMismatch,
    UpWitnessMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemidistributivityFailure {
    pub lower: Ornamentation,
    pub upper: Ornamentation,
    pub kind: FailureKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemidistributivityReport {
    pub covers_checked: usize,
    pub counterexample: Option<SemidistributivityFailure>,
}

impl SemidistributivityReport {
    pub fn is_ok(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Which trees [`search_popk_counterexample`] ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeFilter {
    All,
    ChainsOnly,
}

/// An ornamentation passing every necessary condition for `Pop^k` while
/// lying outside the image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopkCounterexample {
    pub k: usize,
    pub delta: Ornamentation,
}

/// First ornamentation, over trees with at most `max_nodes` nodes in
/// canonical order, that passes the rank, hug and bead conditions for
/// `Pop^k` but is not in the brute-force image.
pub fn search_popk_counterexample(
    max_nodes: usize,
    k: usize,
    filter: TreeFilter,
    exec: Execution,
) -> Result<Option<PopkCounterexample>> {
    if k < 2 {
        return Err(Error::domain("counterexample search needs k ≥ 2"));
    }
    if max_nodes > DEFAULT_GENERATION_CAP {
        return Err(Error::Resource(format!(
            "counterexample search over trees with {max_nodes} nodes exceeds cap {DEFAULT_GENERATION_CAP}"
        )));
    }
    let mut trees = Vec::new();
    for n in 1..=max_nodes {
        trees.extend(
            enumerate_plane_trees_capped(n, DEFAULT_GENERATION_CAP)?
                .into_iter()
                .filter(|t| filter == TreeFilter::All || t.is_chain())
                .map(Arc::new),
        );
    }
    let found = exec.map(&trees, |tree| -> Result<Option<PopkCounterexample>> {
        let lattice = enumerate_lattice_with(tree, DEFAULT_LATTICE_CAP, Execution::Sequential)?;
        let ranks = RankTable::new(tree)?;
        let mask = lattice.popk_image_mask(k);
        Ok(lattice
            .elements()
            .iter()
            .zip(&mask)
            .find(|(d, &member)| !member && popk_necessary_with(d, k, &ranks).passed())
            .map(|(d, _)| PopkCounterexample { k, delta: d.clone() }))
    });
    for r in found {
        if let Some(c) = r? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// The node relabeling `old → new` applied to an ornamentation of `old`'s
/// tree, producing one of `target`.
pub fn relabel(
    delta: &Ornamentation,
    map: &[NodeId],
    target: &Arc<RootedPlaneTree>,
) -> Result<Ornamentation> {
    let mut sets = vec![NodeSet::EMPTY; target.len()];
    for v in delta.tree().nodes() {
        sets[map[v.0].0] = delta.at(v).iter().map(|u| map[u.0]).collect();
    }
    Ornamentation::new(target.clone(), sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gseq::GSequence;

    fn lattice(s: &str) -> LatticeGraph {
        enumerate_lattice(&Arc::new(RootedPlaneTree::parse(s).unwrap())).unwrap()
    }

    fn g(seq: &[usize]) -> Ornamentation {
        GSequence::new(seq.to_vec()).unwrap().to_chain_ornamentation()
    }

    #[test]
    fn sizes() {
        assert_eq!(lattice("(((())))").len(), 14);
        assert_eq!(lattice("(()()())").len(), 8);
        assert_eq!(lattice("(()())").len(), 4);
        assert_eq!(lattice("()").len(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let t = Arc::new(RootedPlaneTree::chain(5).unwrap());
        let err = enumerate_lattice_with(&t, 10, Execution::Sequential).unwrap_err();
        assert!(matches!(err, Error::Resource(ref m) if m.contains("(((((")), "{err}");
    }

    #[test]
    fn join_examples() {
        let l = lattice("((()))");
        assert_eq!(l.join(&g(&[2, 2, 3]), &g(&[1, 3, 3])).unwrap(), g(&[3, 3, 3]));
        let x = g(&[3, 2, 3]);
        assert_eq!(l.join(&x, &x).unwrap(), x);
        assert_eq!(l.join(&g(&[1, 2, 3]), &x).unwrap(), x);
        let foreign = Ornamentation::min(Arc::new(RootedPlaneTree::chain(4).unwrap()));
        assert!(matches!(l.join(&foreign, &x), Err(Error::Domain(_))));
    }

    #[test]
    fn semidistributive_worked_cover() {
        let (down, up) = cover_witnesses(&g(&[3, 3, 3]), &g(&[1, 3, 3])).unwrap();
        assert_eq!(down, g(&[2, 2, 3]));
        assert_eq!(up, g(&[1, 3, 3]));
        for s in ["()", "(())", "((()))", "(()())", "(((())))", "((()()))", "((())())", "(()(()))", "(()()())"] {
            assert!(lattice(s).check_semidistributive(Execution::Sequential).is_ok(), "{s}");
        }
    }

    #[test]
    fn brute_image_examples() {
        let l = lattice("((()))");
        assert_eq!(l.brute_popk_image(1), vec![g(&[1, 2, 3]), g(&[2, 2, 3])]);
        assert_eq!(l.brute_popk_image(0).len(), 5);
        assert_eq!(l.brute_popk_image(2), vec![g(&[1, 2, 3])]);
    }

    #[test]
    fn brute_orbit_examples() {
        assert_eq!(lattice("((()))").brute_max_orbit(), 3);
        assert_eq!(lattice("(()()())").brute_max_orbit(), 2);
        assert_eq!(lattice("((()()))").brute_max_orbit(), 4);
    }

    #[test]
    fn search_edge_cases() {
        assert_eq!(
            search_popk_counterexample(2, 2, TreeFilter::All, Execution::Sequential).unwrap(),
            None
        );
        assert!(matches!(
            search_popk_counterexample(4, 1, TreeFilter::All, Execution::Sequential),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            search_popk_counterexample(9, 2, TreeFilter::All, Execution::Sequential),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn dot_output_shape() {
        let dot = lattice("((()))").to_dot();
        assert!(dot.starts_with("digraph lattice {"));
        assert!(dot.contains("[label=\"[3,3,3]\"]"));
        assert_eq!(dot.matches("->").count(), 5);
    }
}
