//! Named self-verification suites. Each compares a closed-form or
//! criterion-based computation against the brute-force lattice oracles on
//! every small instance. Instances run in parallel; reports list instances
//! in enumeration order.

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use crate::count::{count_popk_images, gf_coefficients};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gseq::GSequence;
use crate::image::{
    in_pop_image, in_pop_image_by_containing_ornaments, in_popk_image_tamari, pop_preimage,
    popk_necessary, popk_necessary_with, popk_preimage_chain,
};
use crate::lattice::{
    cover_witnesses, enumerate_lattice_with, search_popk_counterexample, LatticeGraph, TreeFilter,
    DEFAULT_LATTICE_CAP,
};
use crate::rank::{
    build_delta_dagger, chain_profiles, f_closed_form, forward_orbit, max_orbit_size,
    MaxOrbitExpressions, RankTable,
};
use crate::tree::{enumerate_plane_trees_up_to, RootedPlaneTree};

/// Suite names in criterion order.
pub const SUITES: [&str; 10] = [
    "tamari-sizes",
    "max-orbit",
    "dagger",
    "pop-image",
    "popk-necessary",
    "tamari-popk",
    "counting",
    "semidistributive",
    "counterexample",
    "cross-checks",
];

const CATALAN: [u64; 13] = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786, 208012];
const MOTZKIN_SHIFTED: [u64; 13] = [1, 1, 1, 2, 4, 9, 21, 51, 127, 323, 835, 2188, 5798];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Replaces every suite's default size bound when set.
    pub max_nodes: Option<usize>,
    pub exec: Execution,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub instance: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub mismatches: Vec<Mismatch>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({} checks)", self.name, self.checks)?;
        for m in &self.mismatches {
            write!(f, "\n  {} {}: expected {}, actual {}", self.name, m.instance, m.expected, m.actual)?;
        }
        Ok(())
    }
}

/// Accumulates checks for one instance.
#[derive(Default)]
struct Tally {
    checks: usize,
    mismatches: Vec<Mismatch>,
}

impl Tally {
    fn eq<T: PartialEq + fmt::Debug>(&mut self, instance: impl FnOnce() -> String, expected: T, actual: T) {
        self.checks += 1;
        if expected != actual {
            self.mismatches.push(Mismatch {
                instance: instance(),
                expected: format!("{expected:?}"),
                actual: format!("{actual:?}"),
            });
        }
    }

    fn ok<T>(&mut self, instance: impl FnOnce() -> String, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.mismatches.push(Mismatch {
                    instance: instance(),
                    expected: "no error".to_owned(),
                    actual: e.to_string(),
                });
                None
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.mismatches.extend(other.mismatches);
    }
}

type SuiteFn = fn(usize, Execution) -> Result<Tally>;

pub fn run_all(opts: VerifyOptions) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|name| run_suite(name, opts)).collect()
}

pub fn run_suite(name: &str, opts: VerifyOptions) -> Result<SuiteReport> {
    let (name, run): (&'static str, SuiteFn) = match name {
        "tamari-sizes" => ("tamari-sizes", tamari_sizes),
        "max-orbit" => ("max-orbit", max_orbit),
        "dagger" => ("dagger", dagger),
        "pop-image" => ("pop-image", pop_image),
        "popk-necessary" => ("popk-necessary", popk_necessary_suite),
        "tamari-popk" => ("tamari-popk", tamari_popk),
        "counting" => ("counting", counting),
        "semidistributive" => ("semidistributive", semidistributive),
        "counterexample" => ("counterexample", counterexample),
        "cross-checks" => ("cross-checks", cross_checks),
        other => {
            return Err(Error::domain(format!(
                "unknown suite `{other}`; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    let bound = opts.max_nodes.unwrap_or_else(|| default_bound(name));
    if bound == 0 {
        return Err(Error::domain("--max-nodes must be at least 1"));
    }
    let start = Instant::now();
    let tally = run(bound, opts.exec)?;
    Ok(SuiteReport { name, checks: tally.checks, mismatches: tally.mismatches, elapsed: start.elapsed() })
}

fn default_bound(name: &str) -> usize {
    match name {
        "tamari-sizes" | "tamari-popk" | "counting" => 7,
        "popk-necessary" => 5,
        "cross-checks" => 8,
        _ => 6,
    }
}

fn trees(max_nodes: usize) -> Result<Vec<Arc<RootedPlaneTree>>> {
    Ok(enumerate_plane_trees_up_to(max_nodes)?.into_iter().map(Arc::new).collect())
}

fn chains(max_nodes: usize) -> Result<Vec<Arc<RootedPlaneTree>>> {
    (1..=max_nodes).map(|n| RootedPlaneTree::chain(n).map(Arc::new)).collect()
}

fn lattice(tree: &Arc<RootedPlaneTree>) -> Result<LatticeGraph> {
    enumerate_lattice_with(tree, DEFAULT_LATTICE_CAP, Execution::Sequential)
}

/// Runs `f` on every instance and merges the tallies in input order.
fn per_instance<T: Sync>(
    items: &[T],
    exec: Execution,
    f: impl Fn(&T) -> Result<Tally> + Sync + Send,
) -> Result<Tally> {
    let mut total = Tally::default();
    for t in exec.map(items, f) {
        total.merge(t?);
    }
    Ok(total)
}

fn tamari_sizes(bound: usize, exec: Execution) -> Result<Tally> {
    per_instance(&chains(bound)?, exec, |tree| {
        let mut t = Tally::default();
        let n = tree.len();
        let expected = CATALAN.get(n).map_or_else(|| count_popk_images(n, 0), |&c| BigUint::from(c));
        if let Some(l) = t.ok(|| tree.render(), lattice(tree)) {
            t.eq(|| format!("C_{n}"), expected, BigUint::from(l.len()));
        }
        Ok(t)
    })
}

fn max_orbit(bound: usize, exec: Execution) -> Result<Tally> {
    let mut total = per_instance(&trees(bound)?, exec, |tree| {
        let mut t = Tally::default();
        let name = || tree.render();
        let Some(e) = t.ok(name, MaxOrbitExpressions::evaluate(tree)) else { return Ok(t) };
        let Some(l) = t.ok(name, lattice(tree)) else { return Ok(t) };
        let brute = l.brute_max_orbit();
        t.eq(|| format!("{tree} by_rank"), brute, e.by_rank);
        t.eq(|| format!("{tree} by_chain_potential"), brute, e.by_chain_potential);
        t.eq(|| format!("{tree} by_depth_formula"), brute, e.by_depth_formula);
        Ok(t)
    })?;
    let chain_bound = bound.clamp(7, crate::tree::DEFAULT_GENERATION_CAP);
    total.merge(per_instance(&chains(chain_bound)?, exec, |tree| {
        let mut t = Tally::default();
        let n = tree.len();
        if let Some(v) = t.ok(|| format!("C_{n}"), max_orbit_size(tree)) {
            t.eq(|| format!("C_{n}"), n, v);
        }
        Ok(t)
    })?);
    Ok(total)
}

fn dagger(bound: usize, exec: Execution) -> Result<Tally> {
    per_instance(&trees(bound)?, exec, |tree| {
        let mut t = Tally::default();
        let name = || tree.render();
        let Some(d) = t.ok(name, build_delta_dagger(tree)) else { return Ok(t) };
        let Some(best) = t.ok(name, max_orbit_size(tree)) else { return Ok(t) };
        let Some(orbit) = t.ok(name, forward_orbit(&d.delta)) else { return Ok(t) };
        t.eq(|| format!("{tree} orbit size"), best, orbit.len());
        t.eq(|| format!("{tree} predicted size"), best, d.orbit_size());
        for (p, x) in orbit.iter().enumerate() {
            t.eq(|| format!("{tree} Pop^{p}"), d.predicted_after(p).as_slice(), x.sets());
        }
        Ok(t)
    })
}

fn pop_image(bound: usize, exec: Execution) -> Result<Tally> {
    per_instance(&trees(bound)?, exec, |tree| {
        let mut t = Tally::default();
        let Some(l) = t.ok(|| tree.render(), lattice(tree)) else { return Ok(t) };
        let mask = l.popk_image_mask(1);
        for (d, &member) in l.elements().iter().zip(&mask) {
            t.eq(|| format!("{tree} {}", d.label()), member, in_pop_image(d));
            t.eq(|| format!("{tree} {} (containing ornaments)", d.label()), member, in_pop_image_by_containing_ornaments(d));
            if member {
                if let Some(pre) = t.ok(|| format!("{tree} {}", d.label()), pop_preimage(d)) {
                    t.eq(|| format!("{tree} Pop(preimage of {})", d.label()), d, &pre.pop());
                }
            }
        }
        Ok(t)
    })
}

fn popk_necessary_suite(bound: usize, exec: Execution) -> Result<Tally> {
    per_instance(&trees(bound)?, exec, |tree| {
        let mut t = Tally::default();
        let Some(l) = t.ok(|| tree.render(), lattice(tree)) else { return Ok(t) };
        let Some(ranks) = t.ok(|| tree.render(), RankTable::new(tree)) else { return Ok(t) };
        for k in 0..=3 {
            for d in l.brute_popk_image(k) {
                let report = popk_necessary_with(&d, k, &ranks);
                let failed: Vec<String> = report.failures.iter().map(|f| f.detail.clone()).collect();
                t.eq(|| format!("{tree} k={k} {}", d.label()), Vec::<String>::new(), failed);
            }
        }
        Ok(t)
    })
}

fn tamari_popk(bound: usize, exec: Execution) -> Result<Tally> {
    per_instance(&chains(bound)?, exec, |tree| {
        let mut t = Tally::default();
        let Some(l) = t.ok(|| tree.render(), lattice(tree)) else { return Ok(t) };
        for k in 0..=4 {
            let mask = l.popk_image_mask(k);
            for (d, &member) in l.elements().iter().zip(&mask) {
                let g = GSequence::from_ornamentation(d)?;
                t.eq(|| format!("C_{} k={k} {g}", tree.len()), member, in_popk_image_tamari(&g, k));
                if member && k >= 1 {
                    if let Some(pre) = t.ok(|| format!("C_{} k={k} {g}", tree.len()), popk_preimage_chain(&g, k)) {
                        t.eq(|| format!("C_{} Pop^{k}(preimage of {g})", tree.len()), d, &pre.pop_times(k));
                    }
                }
            }
        }
        Ok(t)
    })
}

/// `M_0, M_1, ...` from `M_n = M_{n−1} + Σ_{i+j=n−2} M_i M_j`.
fn motzkin(len: usize) -> Vec<BigUint> {
    let mut m: Vec<BigUint> = Vec::with_capacity(len);
    for n in 0..len {
        let v = if n < 2 {
            BigUint::from(1u32)
        } else {
            let mut s = m[n - 1].clone();
            for i in 0..=n - 2 {
                s += &m[i] * &m[n - 2 - i];
            }
            s
        };
        m.push(v);
    }
    m
}

fn counting(bound: usize, exec: Execution) -> Result<Tally> {
    let mut t = Tally::default();
    for k in 0..=3 {
        let recurrence: Vec<BigUint> = (0..=12).map(|n| count_popk_images(n, k)).collect();
        if let Some(gf) = t.ok(|| format!("gf k={k}"), gf_coefficients(k, 12)) {
            t.eq(|| format!("gf k={k}"), recurrence, gf);
        }
    }
    let big = |xs: &[u64]| xs.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>();
    t.eq(|| "row k=0".to_owned(), big(&CATALAN), (0..=12).map(|n| count_popk_images(n, 0)).collect());
    t.eq(|| "row k=1".to_owned(), big(&MOTZKIN_SHIFTED), (0..=12).map(|n| count_popk_images(n, 1)).collect());

    let m = motzkin(bound + 1);
    t.merge(per_instance(&chains(bound)?, exec, |tree| {
        let mut t = Tally::default();
        let n = tree.len();
        let Some(l) = t.ok(|| tree.render(), lattice(tree)) else { return Ok(t) };
        for k in 0..=3 {
            let brute = BigUint::from(l.brute_popk_image(k).len());
            if k == 1 {
                t.eq(|| format!("C_{n} Motzkin shift"), m[n - 1].clone(), brute.clone());
            }
            t.eq(|| format!("C_{n} k={k}"), count_popk_images(n, k), brute);
        }
        Ok(t)
    })?);
    Ok(t)
}

fn semidistributive(bound: usize, exec: Execution) -> Result<Tally> {
    per_instance(&trees(bound)?, exec, |tree| {
        let mut t = Tally::default();
        let Some(l) = t.ok(|| tree.render(), lattice(tree)) else { return Ok(t) };
        let report = l.check_semidistributive(Execution::Sequential);
        t.checks += report.covers_checked.saturating_sub(1);
        let found = report.counterexample.map(|c| {
            let (down, up) = cover_witnesses(&c.upper, &c.lower)
                .map(|(d, u)| (d.label(), u.label()))
                .unwrap_or_default();
            format!("{:?} at {} ⋖ {} (δ↓ {down}, δ↑ {up})", c.kind, c.lower.label(), c.upper.label())
        });
        t.eq(|| tree.render(), None, found);
        Ok(t)
    })
}

fn counterexample(bound: usize, exec: Execution) -> Result<Tally> {
    let mut t = Tally::default();
    let any = search_popk_counterexample(bound, 2, TreeFilter::All, exec)?;
    t.eq(|| format!("all trees ≤ {bound} nodes, k=2"), true, any.is_some());
    if let Some(c) = &any {
        // Re-derive both halves of the claim from scratch.
        let l = lattice(c.delta.tree_arc())?;
        let outside = !l.brute_popk_image(2).contains(&c.delta);
        t.eq(|| format!("{} outside Pop^2 image", c.delta.label()), true, outside);
        let passes = popk_necessary(&c.delta, 2)?.passed();
        t.eq(|| format!("{} passes necessary conditions", c.delta.label()), true, passes);
    }
    let chains_only = search_popk_counterexample(bound, 2, TreeFilter::ChainsOnly, exec)?;
    t.eq(
        || format!("chains ≤ {bound} nodes, k=2"),
        None,
        chains_only.map(|c| c.delta.label()),
    );
    Ok(t)
}

fn cross_checks(bound: usize, exec: Execution) -> Result<Tally> {
    let mut total = per_instance(&trees(bound)?, exec, |tree| {
        let mut t = Tally::default();
        let Some(profiles) = t.ok(|| tree.render(), chain_profiles(tree)) else { return Ok(t) };
        for p in &profiles {
            let closed: Vec<i64> = f_closed_form(tree, p.chain());
            let recursive: Vec<i64> = p.f_values().iter().map(|&x| x as i64).collect();
            t.eq(|| format!("{tree} chain to {}", tree.label(p.chain().leaf())), closed, recursive);
        }
        Ok(t)
    })?;
    total.merge(per_instance(&trees(bound.min(5))?, exec, |tree| {
        let mut t = Tally::default();
        let Some(l) = t.ok(|| tree.render(), lattice(tree)) else { return Ok(t) };
        for d in l.elements() {
            t.eq(|| format!("{tree} {}", d.label()), d.pop_by_meet_of_covers(), d.pop());
        }
        Ok(t)
    })?);
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_domain_error() {
        assert!(matches!(run_suite("nope", VerifyOptions::default()), Err(Error::Domain(_))));
    }

    #[test]
    fn small_runs_pass() {
        let opts = VerifyOptions { max_nodes: Some(4), exec: Execution::Sequential };
        // the counterexample search needs six nodes
        for name in SUITES.iter().filter(|&&s| s != "counterexample") {
            let r = run_suite(name, opts).unwrap();
            assert!(r.passed(), "{r}");
            assert!(r.checks > 0, "{name}");
        }
    }

    #[test]
    fn motzkin_prefix() {
        let m: Vec<u64> = motzkin(8).iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(m, [1, 1, 2, 4, 9, 21, 51, 127]);
    }
}
