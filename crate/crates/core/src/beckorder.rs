//! Beck's convex total order on the affine root system.
//!
//! A map pi: Z -> I is found by validated backtracking search such that the
//! doubly-infinite reflection recursion
//!
//! ```text
//! beta_k = r_{pi(0)} r_{pi(-1)} ... r_{pi(k+1)} (alpha_{pi(k)})   k <= 0
//! beta_k = r_{pi(1)} r_{pi(2)} ... r_{pi(k-1)} (alpha_{pi(k)})    k >= 1
//! ```
//!
//! enumerates the positive real roots bijectively, with the k <= 0 side
//! filling {alpha + n*delta : alpha > 0, n >= 0} (the A1 block) and the
//! k >= 1 side filling {-alpha + n*delta : alpha > 0, n > 0} (the A3 block).
//! The resulting order, descending from the A1 side,
//!
//! ```text
//! beta_0 > beta_{-1} > ... > delta > 2*delta > ... > beta_2 > beta_1
//! ```
//!
//! together with the mirror rule -x < -y iff x > y on negative roots, totally
//! orders the blocks as B1 < B2 < B3 < A3 < A2 < A1. The map pi is not unique;
//! whichever validated pi produced a run is serialized with its results.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Block;
use crate::rootsys::{CartanData, Root, RootClass};

/// A validated window of the Beck data: pi on [-window, window] and the
/// corresponding roots beta_k.
#[derive(Clone, Debug)]
pub struct BeckOrdering {
    pub cd: CartanData,
    window: i64,
    pi: HashMap<i64, usize>,
    betas: HashMap<i64, Root>,
    index_of: HashMap<Root, i64>,
}

/// Serializable snapshot of pi, embedded in reports for reproducibility.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PiTable {
    pub window: i64,
    /// Pairs (k, pi(k)) for k in [-window, window], ascending in k.
    pub pi: Vec<(i64, usize)>,
}

/// Outcome of [`BeckOrdering::validate_blocks`].
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BlockReport {
    pub ok: bool,
    pub failures: Vec<String>,
    /// Delta-coefficient bound up to which the window provably covers each
    /// block family.
    pub coverage_bound: i64,
}

fn fin_positive(cd: &CartanData, r: &Root) -> bool {
    cd.is_finite_positive_root(&r.fin)
}

fn side_root_ok(cd: &CartanData, beta: &Root, want_a1: bool) -> bool {
    if !cd.is_positive_root(beta) || cd.classify(beta) != RootClass::RealRoot {
        return false;
    }
    let in_a1 = fin_positive(cd, beta) && beta.n >= 0;
    let in_a3 = !fin_positive(cd, beta) && beta.n > 0;
    (want_a1 && in_a1) || (!want_a1 && in_a3)
}

/// Evaluate the reflection recursion for the index sequence `idx` (outermost
/// reflection first): beta_m = r_{idx[0]} ... r_{idx[m-1]} (alpha_{idx[m]}).
fn betas_of(cd: &CartanData, idx: &[usize]) -> Vec<Root> {
    let mut out = Vec::with_capacity(idx.len());
    for (m, &i) in idx.iter().enumerate() {
        let mut beta = cd.simple_root(i);
        for &j in idx[..m].iter().rev() {
            beta = cd.simple_reflection(j, &beta);
        }
        out.push(beta);
    }
    out
}

/// Per-family delta levels hit by a window side, keyed by the positive
/// finite part. Valid windows hit each family in a gapless initial segment
/// (n >= 0 for the A1 side, n >= 1 for the A3 side); the families need not
/// advance at the same speed.
fn family_levels(
    cd: &CartanData,
    betas: &[Root],
    want_a1: bool,
) -> std::collections::HashMap<Vec<i64>, std::collections::BTreeSet<i64>> {
    let mut map: std::collections::HashMap<Vec<i64>, std::collections::BTreeSet<i64>> = cd
        .finite_positive_roots
        .iter()
        .map(|f| (f.clone(), Default::default()))
        .collect();
    for beta in betas {
        let key = if want_a1 {
            beta.fin.clone()
        } else {
            beta.fin.iter().map(|c| -c).collect()
        };
        if let Some(set) = map.get_mut(&key) {
            set.insert(beta.n);
        }
    }
    map
}

fn initial_segment_top(levels: &std::collections::BTreeSet<i64>, base: i64) -> Option<i64> {
    let mut expect = base;
    for &l in levels {
        if l != expect {
            return None;
        }
        expect += 1;
    }
    Some(expect - 1)
}

/// Check that a full window side is valid: every root in the target block,
/// all distinct, and every family hit in a gapless initial segment of levels
/// that reaches at least level 1.
fn side_valid(cd: &CartanData, betas: &[Root], want_a1: bool) -> bool {
    let mut seen = std::collections::HashSet::new();
    for beta in betas {
        if !side_root_ok(cd, beta, want_a1) || !seen.insert(beta.clone()) {
            return false;
        }
    }
    let base = if want_a1 { 0 } else { 1 };
    for levels in family_levels(cd, betas, want_a1).values() {
        if levels.is_empty() || initial_segment_top(levels, base).is_none() {
            return false;
        }
    }
    true
}

/// Search one side of the sequence: depth-first over locally valid prefixes
/// of period length p, extended p-periodically across the window and then
/// validated globally (blocks, injectivity, level coverage). Local validity
/// alone does not force the sequence to exhaust every root family, so the
/// global check is what certifies a candidate.
fn search_side(cd: &CartanData, steps: usize, want_a1: bool) -> Option<(Vec<usize>, Vec<Root>)> {
    fn dfs(
        cd: &CartanData,
        want_a1: bool,
        period: usize,
        steps: usize,
        prefix: &mut Vec<usize>,
        betas: &mut Vec<Root>,
        budget: &mut usize,
    ) -> Option<(Vec<usize>, Vec<Root>)> {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        if prefix.len() == period {
            let idx: Vec<usize> = (0..steps).map(|m| prefix[m % period]).collect();
            let all = betas_of(cd, &idx);
            if side_valid(cd, &all, want_a1) {
                return Some((idx, all));
            }
            return None;
        }
        for i in 0..=cd.n {
            let mut beta = cd.simple_root(i);
            for &j in prefix.iter().rev() {
                beta = cd.simple_reflection(j, &beta);
            }
            if side_root_ok(cd, &beta, want_a1) && !betas.contains(&beta) {
                prefix.push(i);
                betas.push(beta);
                if let Some(found) = dfs(cd, want_a1, period, steps, prefix, betas, budget) {
                    return Some(found);
                }
                prefix.pop();
                betas.pop();
            }
        }
        None
    }

    let nn = cd.n + 1;
    let per_level = cd.finite_positive_roots.len();
    let max_period = (4 * per_level * nn).max(4);
    for period in 1..=max_period {
        let mut prefix = Vec::new();
        let mut betas = Vec::new();
        let mut budget = 500_000usize;
        if let Some(found) = dfs(cd, want_a1, period, steps, &mut prefix, &mut betas, &mut budget) {
            return Some(found);
        }
    }
    None
}

/// Find a valid pi on the window [-window, window] by backtracking search.
pub fn find_pi(cd: &CartanData, window: u32) -> Result<BeckOrdering> {
    let w = window as usize;
    // Negative side: pi(0), pi(-1), ..., pi(-w); reflection prefix applied
    // left-to-right is r_{pi(0)} r_{pi(-1)} ...
    let (neg_idx, neg_betas) =
        search_side(cd, w + 1, true).ok_or(Error::SearchExhausted)?;
    let (pos_idx, pos_betas) =
        search_side(cd, w, false).ok_or(Error::SearchExhausted)?;

    let mut pi = HashMap::new();
    let mut betas = HashMap::new();
    let mut index_of = HashMap::new();
    for (m, (idx, beta)) in neg_idx.iter().zip(&neg_betas).enumerate() {
        let k = -(m as i64);
        pi.insert(k, *idx);
        betas.insert(k, beta.clone());
        index_of.insert(beta.clone(), k);
    }
    for (m, (idx, beta)) in pos_idx.iter().zip(&pos_betas).enumerate() {
        let k = m as i64 + 1;
        pi.insert(k, *idx);
        betas.insert(k, beta.clone());
        if index_of.insert(beta.clone(), k).is_some() {
            return Err(Error::SearchExhausted);
        }
    }
    Ok(BeckOrdering {
        cd: cd.clone(),
        window: window as i64,
        pi,
        betas,
        index_of,
    })
}

impl BeckOrdering {
    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn pi(&self, k: i64) -> Result<usize> {
        self.pi.get(&k).copied().ok_or(Error::OutOfWindow {
            index: k,
            window: self.window,
        })
    }

    /// The k-th root of the sequence.
    pub fn beta(&self, k: i64) -> Result<&Root> {
        self.betas.get(&k).ok_or(Error::OutOfWindow {
            index: k,
            window: self.window,
        })
    }

    /// Beck index of a positive real root, if it lies in the window.
    pub fn index_of(&self, r: &Root) -> Result<i64> {
        self.index_of.get(r).copied().ok_or(Error::OutOfWindow {
            index: i64::MAX,
            window: self.window,
        })
    }

    pub fn pi_table(&self) -> PiTable {
        let mut pi: Vec<(i64, usize)> = self.pi.iter().map(|(k, v)| (*k, *v)).collect();
        pi.sort();
        PiTable {
            window: self.window,
            pi,
        }
    }

    fn block_rank(&self, r: &Root) -> Result<Block> {
        // The block does not depend on J.
        match self.cd.classify(r) {
            RootClass::NotRoot => Err(Error::NotARoot(r.to_string())),
            RootClass::ImaginaryRoot => Ok(if r.n > 0 { Block::A2 } else { Block::B2 }),
            RootClass::RealRoot => {
                let fin_pos = self.cd.is_finite_positive_root(&r.fin);
                Ok(match (fin_pos, r.n) {
                    (true, n) if n >= 0 => Block::A1,
                    (false, n) if n > 0 => Block::A3,
                    (false, _) => Block::B1,
                    (true, _) => Block::B3,
                })
            }
        }
    }

    /// Compare two roots in the total order. Imaginary roots with the same
    /// delta coefficient compare Equal (color resolves ties elsewhere).
    pub fn compare(&self, a: &Root, b: &Root) -> Result<Ordering> {
        if a == b {
            return Ok(Ordering::Equal);
        }
        let ba = self.block_rank(a)?;
        let bb = self.block_rank(b)?;
        if ba != bb {
            return Ok(ba.cmp(&bb));
        }
        match ba {
            Block::A2 => Ok(b.n.cmp(&a.n)), // delta > 2 delta > ...
            Block::B2 => Ok(b.n.cmp(&a.n)), // mirror image of the A2 chain
            Block::A1 | Block::A3 => {
                let ka = self.index_of(a)?;
                let kb = self.index_of(b)?;
                // Descending chain beta_0 > beta_{-1} > ... on the A1 side and
                // ... > beta_2 > beta_1 on the A3 side: larger index wins in
                // both cases.
                Ok(ka.cmp(&kb))
            }
            Block::B1 | Block::B3 => {
                // -x < -y iff x > y.
                self.compare(&b.neg(), &a.neg())
            }
        }
    }

    /// Verify bijectivity and the block split of the window, and report the
    /// delta-coefficient bound up to which the window covers both families.
    pub fn validate_blocks(&self) -> BlockReport {
        let mut failures = Vec::new();
        let mut seen: HashMap<&Root, i64> = HashMap::new();
        for (k, beta) in &self.betas {
            if let Some(prev) = seen.insert(beta, *k) {
                failures.push(format!("duplicate root {} at indices {} and {}", beta, prev, k));
            }
            let fin_pos = self.cd.is_finite_positive_root(&beta.fin);
            if *k <= 0 {
                if !(fin_pos && beta.n >= 0) {
                    failures.push(format!("beta_{} = {} is not in the A1 block", k, beta));
                }
            } else if !(!fin_pos && beta.n > 0) {
                failures.push(format!("beta_{} = {} is not in the A3 block", k, beta));
            }
            if !self.cd.is_positive_root(beta)
                || self.cd.classify(beta) != RootClass::RealRoot
            {
                failures.push(format!("beta_{} = {} is not a positive real root", k, beta));
            }
        }
        // Coverage: within the window each family {alpha + n*delta} must be
        // hit in a gapless initial segment of delta levels; the bound is the
        // highest level reached by every family on both sides.
        let mut bound = i64::MAX;
        for (side, base) in [(true, 0i64), (false, 1i64)] {
            let betas: Vec<Root> = self
                .betas
                .iter()
                .filter(|(k, _)| if side { **k <= 0 } else { **k >= 1 })
                .map(|(_, b)| b.clone())
                .collect();
            for (fin, levels) in family_levels(&self.cd, &betas, side) {
                match initial_segment_top(&levels, base) {
                    Some(top) if !levels.is_empty() => bound = bound.min(top),
                    _ => {
                        failures.push(format!(
                            "family of {:?} on the {} side has a gap or is empty",
                            fin,
                            if side { "A1" } else { "A3" }
                        ));
                        bound = 0;
                    }
                }
            }
        }
        BlockReport {
            ok: failures.is_empty(),
            failures,
            coverage_bound: if bound == i64::MAX { 0 } else { bound },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::PartitionSpec;
    use crate::rootsys::{build_cartan, CartanSpec};

    fn a1() -> CartanData {
        build_cartan(&CartanSpec::Tag("A1~".into())).unwrap()
    }

    fn a2() -> CartanData {
        build_cartan(&CartanSpec::Tag("A2~".into())).unwrap()
    }

    #[test]
    fn a1_sequence_matches_reflection_recursion() {
        let cd = a1();
        let ord = find_pi(&cd, 4).unwrap();
        // Negative side alternates 1, 0, 1, 0 ... giving beta_{-k} = alpha_1 + k*delta.
        assert_eq!(ord.pi(0).unwrap(), 1);
        assert_eq!(ord.pi(-1).unwrap(), 0);
        assert_eq!(ord.pi(-2).unwrap(), 1);
        let alpha1 = cd.simple_root(1);
        for k in 0..=3i64 {
            assert_eq!(
                *ord.beta(-k).unwrap(),
                alpha1.add(&Root::delta(1, k)),
                "beta_{}",
                -k
            );
        }
        // Positive side: beta_k = -alpha_1 + k*delta.
        for k in 1..=3i64 {
            assert_eq!(
                *ord.beta(k).unwrap(),
                alpha1.neg().add(&Root::delta(1, k)),
                "beta_{}",
                k
            );
        }
        assert_eq!(*ord.beta(1).unwrap(), cd.simple_root(0));
    }

    #[test]
    fn beta_zero_is_simple() {
        let cd = a2();
        let ord = find_pi(&cd, 6).unwrap();
        assert_eq!(*ord.beta(0).unwrap(), cd.simple_root(ord.pi(0).unwrap()));
        assert_eq!(*ord.beta(1).unwrap(), cd.simple_root(ord.pi(1).unwrap()));
    }

    #[test]
    fn out_of_window() {
        let cd = a1();
        let ord = find_pi(&cd, 3).unwrap();
        assert!(matches!(ord.beta(7), Err(Error::OutOfWindow { .. })));
    }

    #[test]
    fn validate_blocks_passes_window_20() {
        for cd in [a1(), a2()] {
            let ord = find_pi(&cd, 20).unwrap();
            let report = ord.validate_blocks();
            assert!(report.ok, "failures: {:?}", report.failures);
            assert!(report.coverage_bound >= 3);
        }
    }

    #[test]
    fn validate_catches_duplicates() {
        let cd = a1();
        let mut ord = find_pi(&cd, 3).unwrap();
        // Corrupt: repeat beta_0 at index -2.
        let b0 = ord.beta(0).unwrap().clone();
        ord.betas.insert(-2, b0);
        let report = ord.validate_blocks();
        assert!(!report.ok);
        assert!(report.failures.iter().any(|f| f.contains("duplicate")));
    }

    #[test]
    fn compare_examples() {
        let cd = a1();
        let ord = find_pi(&cd, 6).unwrap();
        let alpha1 = cd.simple_root(1);
        // beta_0 > beta_{-1}
        assert_eq!(
            ord.compare(&alpha1, &alpha1.add(&Root::delta(1, 1))).unwrap(),
            Ordering::Greater
        );
        // delta > 2 delta
        assert_eq!(
            ord.compare(&Root::delta(1, 1), &Root::delta(1, 2)).unwrap(),
            Ordering::Greater
        );
        // -alpha_1 in B1, alpha_1 - delta in B3, and B1 < B3.
        assert_eq!(
            ord.compare(&alpha1.neg(), &alpha1.add(&Root::delta(1, -1)))
                .unwrap(),
            Ordering::Less
        );
        // A3 interior: beta_2 > beta_1.
        assert_eq!(
            ord.compare(ord.beta(2).unwrap(), ord.beta(1).unwrap()).unwrap(),
            Ordering::Greater
        );
        // Imaginary ties are Equal.
        assert_eq!(
            ord.compare(&Root::delta(1, 2), &Root::delta(1, 2)).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn compare_is_a_strict_total_order() {
        for cd in [a1(), a2()] {
            let ord = find_pi(&cd, 40).unwrap();
            let roots: Vec<Root> = cd
                .roots_within(4)
                .into_iter()
                .filter(|r| ord.compare(r, r).is_ok())
                .collect();
            // Antisymmetry.
            for x in &roots {
                for y in &roots {
                    let xy = ord.compare(x, y).unwrap();
                    let yx = ord.compare(y, x).unwrap();
                    assert_eq!(xy, yx.reverse(), "{} vs {}", x, y);
                    if x != y && !(x.fin_is_zero() && y.fin_is_zero() && x.n == y.n) {
                        assert_ne!(xy, Ordering::Equal, "{} vs {}", x, y);
                    }
                }
            }
            // Transitivity.
            for x in &roots {
                for y in &roots {
                    for z in &roots {
                        let xy = ord.compare(x, y).unwrap();
                        let yz = ord.compare(y, z).unwrap();
                        if xy == Ordering::Less && yz == Ordering::Less {
                            assert_eq!(ord.compare(x, z).unwrap(), Ordering::Less);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn block_chain_respected() {
        let cd = a1();
        let ord = find_pi(&cd, 40).unwrap();
        let p = PartitionSpec::new(&cd, &Default::default()).unwrap();
        let roots = cd.roots_within(3);
        for x in &roots {
            for y in &roots {
                let bx = p.block_of(x).unwrap().block;
                let by = p.block_of(y).unwrap().block;
                if bx < by {
                    assert_eq!(ord.compare(x, y).unwrap(), Ordering::Less);
                }
            }
        }
    }
}
