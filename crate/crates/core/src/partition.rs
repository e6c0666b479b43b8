//! Closed partitions S_J of the affine root system, the six root blocks
//! A1..A3 / B1..B3 with their finite/infinite refinements, and a brute-force
//! closedness check on truncated root sets.
//!
//! For J a subset of the finite node set, S_J is the union of the positive
//! part of the subsystem Delta^J (all roots with finite part inside the
//! subsystem generated by {alpha_j : j in J}, plus all imaginary roots) with
//! the "infinite" family {alpha + n*delta : alpha positive outside the
//! subsystem, n any integer}. J = I-dot gives the standard positive system;
//! J = empty gives the imaginary Verma partition.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{CartanData, Root, RootClass};

/// One of the six blocks of the root system under the Beck-style ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Block {
    B1,
    B2,
    B3,
    A3,
    A2,
    A1,
}

/// Finite (inside Delta^J) vs infinite (outside) refinement of a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Refinement {
    Fin,
    Inf,
}

/// Block tag with refinement; (A2, Inf) and (B2, Inf) never occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockTag {
    pub block: Block,
    pub refinement: Refinement,
}

impl fmt::Display for BlockTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = match self.block {
            Block::A1 => "A1",
            Block::A2 => "A2",
            Block::A3 => "A3",
            Block::B1 => "B1",
            Block::B2 => "B2",
            Block::B3 => "B3",
        };
        let r = match self.refinement {
            Refinement::Fin => "fin",
            Refinement::Inf => "inf",
        };
        write!(f, "{}^{}", b, r)
    }
}

/// The partition data attached to a subset J of the finite nodes.
#[derive(Clone, Debug)]
pub struct PartitionSpec {
    pub cd: CartanData,
    pub j: BTreeSet<usize>,
    /// Positive roots of the finite subsystem generated by {alpha_j, j in J}.
    fin_sub_positive: Vec<Vec<i64>>,
}

impl PartitionSpec {
    pub fn new(cd: &CartanData, j: &BTreeSet<usize>) -> Result<Self> {
        for &i in j {
            if i == 0 || i > cd.n {
                return Err(Error::InvalidInput(format!(
                    "J must be a subset of 1..={}, got {}",
                    cd.n, i
                )));
            }
        }
        let fin_sub_positive = cd
            .finite_positive_roots
            .iter()
            .filter(|fin| {
                fin.iter()
                    .enumerate()
                    .all(|(idx, &c)| c == 0 || j.contains(&(idx + 1)))
            })
            .cloned()
            .collect();
        Ok(PartitionSpec {
            cd: cd.clone(),
            j: j.clone(),
            fin_sub_positive,
        })
    }

    /// Finite part lies in the subsystem Delta-dot^J (either sign); the zero
    /// finite part counts as inside.
    pub fn fin_in_subsystem(&self, fin: &[i64]) -> bool {
        if fin.iter().all(|&c| c == 0) {
            return true;
        }
        let pos = fin.to_vec();
        let neg: Vec<i64> = fin.iter().map(|c| -c).collect();
        self.fin_sub_positive.contains(&pos) || self.fin_sub_positive.contains(&neg)
    }

    /// Membership in Delta^J: real roots with finite part in the subsystem,
    /// plus all imaginary roots.
    pub fn in_delta_j(&self, r: &Root) -> bool {
        self.cd.is_root(r) && self.fin_in_subsystem(&r.fin)
    }

    /// Membership in S_J.
    pub fn in_sj(&self, r: &Root) -> Result<bool> {
        match self.cd.classify(r) {
            RootClass::NotRoot => Err(Error::NotARoot(r.to_string())),
            RootClass::ImaginaryRoot => Ok(r.n > 0),
            RootClass::RealRoot => {
                if self.fin_in_subsystem(&r.fin) {
                    Ok(self.cd.is_positive_root(r))
                } else {
                    // alpha + n*delta with alpha positive outside the
                    // subsystem, any n.
                    Ok(self.cd.is_finite_positive_root(&r.fin))
                }
            }
        }
    }

    /// The unique block containing a real or imaginary root, refined by
    /// membership in Delta^J.
    pub fn block_of(&self, r: &Root) -> Result<BlockTag> {
        let class = self.cd.classify(r);
        if class == RootClass::NotRoot {
            return Err(Error::NotARoot(r.to_string()));
        }
        let block = match class {
            RootClass::ImaginaryRoot => {
                if r.n > 0 {
                    Block::A2
                } else {
                    Block::B2
                }
            }
            RootClass::RealRoot => {
                let fin_pos = self.cd.is_finite_positive_root(&r.fin);
                if fin_pos && r.n >= 0 {
                    Block::A1
                } else if !fin_pos && r.n > 0 {
                    Block::A3
                } else if !fin_pos && r.n <= 0 {
                    Block::B1
                } else {
                    Block::B3
                }
            }
            RootClass::NotRoot => unreachable!(),
        };
        let refinement = if self.in_delta_j(r) {
            Refinement::Fin
        } else {
            Refinement::Inf
        };
        Ok(BlockTag { block, refinement })
    }
}

/// Check closedness of a set S given by a membership predicate, over the
/// truncated root set {roots with |delta coefficient| <= cutoff}: whenever
/// alpha, beta in S and alpha + beta is a root inside the truncation, then
/// alpha + beta must be in S. Errors when S fails to be a partition on the
/// truncation (some pair r, -r both in or both out).
pub fn is_closed<F>(membership: F, cd: &CartanData, cutoff: i64) -> Result<bool>
where
    F: Fn(&Root) -> bool,
{
    let roots = cd.roots_within(cutoff);
    let mut in_s: Vec<&Root> = Vec::new();
    for r in &roots {
        let a = membership(r);
        let b = membership(&r.neg());
        if a && b {
            return Err(Error::NotAPartition(format!(
                "both {} and its negative are in S",
                r
            )));
        }
        if !a && !b {
            return Err(Error::NotAPartition(format!(
                "neither {} nor its negative is in S",
                r
            )));
        }
        if a {
            in_s.push(r);
        }
    }
    for (i, x) in in_s.iter().enumerate() {
        for y in &in_s[i..] {
            let s = x.add(y);
            if s.n.abs() > cutoff || !cd.is_root(&s) {
                continue;
            }
            if !membership(&s) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_cartan, CartanSpec};

    fn a1() -> CartanData {
        build_cartan(&CartanSpec::Tag("A1~".into())).unwrap()
    }

    fn a2() -> CartanData {
        build_cartan(&CartanSpec::Tag("A2~".into())).unwrap()
    }

    fn subsets(n: usize) -> Vec<BTreeSet<usize>> {
        let mut out = Vec::new();
        for mask in 0..(1u32 << n) {
            let mut s = BTreeSet::new();
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    s.insert(i + 1);
                }
            }
            out.push(s);
        }
        out
    }

    #[test]
    fn positive_imaginary_always_in_sj() {
        for cd in [a1(), a2()] {
            for j in subsets(cd.n) {
                let p = PartitionSpec::new(&cd, &j).unwrap();
                for k in 1..=4 {
                    assert!(p.in_sj(&Root::delta(cd.n, k)).unwrap());
                    assert!(!p.in_sj(&Root::delta(cd.n, -k)).unwrap());
                }
            }
        }
    }

    #[test]
    fn simple_roots_always_in_sj() {
        // alpha_i lands in the finite or the infinite part according to i in J,
        // but is in S_J either way.
        for cd in [a1(), a2()] {
            for j in subsets(cd.n) {
                let p = PartitionSpec::new(&cd, &j).unwrap();
                for i in 1..=cd.n {
                    let ai = cd.simple_root(i);
                    assert!(p.in_sj(&ai).unwrap());
                    let tag = p.block_of(&ai).unwrap();
                    let expected = if j.contains(&i) {
                        Refinement::Fin
                    } else {
                        Refinement::Inf
                    };
                    assert_eq!(tag.refinement, expected);
                }
            }
        }
    }

    #[test]
    fn infinite_family_membership() {
        let cd = a1();
        let p = PartitionSpec::new(&cd, &BTreeSet::new()).unwrap();
        let a1r = cd.simple_root(1);
        // alpha_1 - 5*delta in S_empty via the infinite part.
        assert!(p.in_sj(&a1r.add(&Root::delta(1, -5))).unwrap());
        assert!(!p.in_sj(&a1r.neg().add(&Root::delta(1, 5))).unwrap());
    }

    #[test]
    fn not_a_root_rejected() {
        let cd = a1();
        let p = PartitionSpec::new(&cd, &BTreeSet::new()).unwrap();
        let bad = cd.simple_root(1).scaled(2);
        assert!(matches!(p.in_sj(&bad), Err(Error::NotARoot(_))));
        assert!(matches!(p.block_of(&bad), Err(Error::NotARoot(_))));
    }

    #[test]
    fn block_tags() {
        let cd = a1();
        let all = PartitionSpec::new(&cd, &[1].into_iter().collect()).unwrap();
        let none = PartitionSpec::new(&cd, &BTreeSet::new()).unwrap();
        let a1r = cd.simple_root(1);

        let t = all.block_of(&a1r.add(&Root::delta(1, 2))).unwrap();
        assert_eq!((t.block, t.refinement), (Block::A1, Refinement::Fin));
        let t = none.block_of(&a1r.add(&Root::delta(1, 2))).unwrap();
        assert_eq!((t.block, t.refinement), (Block::A1, Refinement::Inf));

        // Imaginary roots lie in Delta^J for every J.
        let t = none.block_of(&Root::delta(1, -3)).unwrap();
        assert_eq!((t.block, t.refinement), (Block::B2, Refinement::Fin));

        // alpha_1 - delta is in B3, infinite for J = empty.
        let t = none.block_of(&a1r.add(&Root::delta(1, -1))).unwrap();
        assert_eq!((t.block, t.refinement), (Block::B3, Refinement::Inf));

        // -alpha_1 + delta (= alpha_0) is in A3.
        let t = none.block_of(&cd.simple_root(0)).unwrap();
        assert_eq!((t.block, t.refinement), (Block::A3, Refinement::Inf));
    }

    #[test]
    fn block_cover_is_a_partition_of_truncation() {
        for cd in [a1(), a2()] {
            let p = PartitionSpec::new(&cd, &BTreeSet::new()).unwrap();
            for r in cd.roots_within(4) {
                let tag = p.block_of(&r).unwrap();
                let pos = cd.is_positive_root(&r);
                let is_a = matches!(tag.block, Block::A1 | Block::A2 | Block::A3);
                assert_eq!(pos, is_a, "root {} tagged {}", r, tag);
            }
        }
    }

    #[test]
    fn exactly_one_of_r_and_neg_r_in_sj() {
        for cd in [a1(), a2()] {
            for j in subsets(cd.n) {
                let p = PartitionSpec::new(&cd, &j).unwrap();
                for r in cd.roots_within(4) {
                    let a = p.in_sj(&r).unwrap();
                    let b = p.in_sj(&r.neg()).unwrap();
                    assert!(a ^ b, "partition property fails at {} (J={:?})", r, j);
                }
            }
        }
    }

    #[test]
    fn sj_is_closed_for_all_j() {
        for cd in [a1(), a2()] {
            for j in subsets(cd.n) {
                let p = PartitionSpec::new(&cd, &j).unwrap();
                let ok = is_closed(|r| p.in_sj(r).unwrap_or(false), &cd, 6).unwrap();
                assert!(ok, "S_J not closed for J={:?}", j);
            }
        }
    }

    #[test]
    fn standard_positive_system_closed() {
        for cd in [a1(), a2()] {
            let ok = is_closed(|r| cd.is_positive_root(r), &cd, 6).unwrap();
            assert!(ok);
        }
    }

    #[test]
    fn ad_hoc_set_fails_closure() {
        // Standard positive system with delta and -delta swapped: still a
        // partition, but alpha_1 + (delta - alpha_1) = delta escapes the set.
        let cd = a1();
        let member = |r: &Root| -> bool {
            if *r == Root::delta(1, 1) {
                false
            } else if *r == Root::delta(1, -1) {
                true
            } else {
                cd.is_positive_root(r)
            }
        };
        let ok = is_closed(member, &cd, 4).unwrap();
        assert!(!ok, "expected a closure violation");
    }

    #[test]
    fn non_partition_rejected() {
        let cd = a1();
        // Everything in S: r and -r both members.
        let res = is_closed(|_| true, &cd, 3);
        assert!(matches!(res, Err(Error::NotAPartition(_))));
    }
}
