//! Affine Cartan data, the root and weight lattices, the normalized invariant
//! bilinear form, heights, classification and simple reflections.
//!
//! Conventions: a_{ij} = <alpha_j, h_i>, the symmetrizers d_i satisfy
//! d_i a_{ij} = d_j a_{ji} with (alpha_i | alpha_j) = d_i a_{ij}, and the form
//! is normalized so short finite roots have squared length 2. Roots are stored
//! as (finite part over alpha_1..alpha_N, delta coefficient).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vector in the affine root lattice Q = Q_fin + Z*delta, stored as the
/// finite part over alpha_1..alpha_N plus the delta coefficient.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Root {
    /// Coefficients over the finite simple roots alpha_1..alpha_N.
    pub fin: Vec<i64>,
    /// The delta coefficient.
    pub n: i64,
}

impl Root {
    pub fn zero(rank: usize) -> Self {
        Root {
            fin: vec![0; rank],
            n: 0,
        }
    }

    pub fn delta(rank: usize, k: i64) -> Self {
        Root {
            fin: vec![0; rank],
            n: k,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.n == 0 && self.fin.iter().all(|&c| c == 0)
    }

    pub fn fin_is_zero(&self) -> bool {
        self.fin.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        Root {
            fin: self.fin.iter().map(|c| -c).collect(),
            n: -self.n,
        }
    }

    pub fn add(&self, other: &Root) -> Self {
        Root {
            fin: self
                .fin
                .iter()
                .zip(&other.fin)
                .map(|(a, b)| a + b)
                .collect(),
            n: self.n + other.n,
        }
    }

    pub fn sub(&self, other: &Root) -> Self {
        self.add(&other.neg())
    }

    pub fn scaled(&self, k: i64) -> Self {
        Root {
            fin: self.fin.iter().map(|c| c * k).collect(),
            n: self.n * k,
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.fin.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "a{}", i + 1)?;
            first = false;
        }
        if self.n != 0 {
            if first {
                if self.n < 0 {
                    write!(f, "-")?;
                }
            } else if self.n < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if self.n.abs() != 1 {
                write!(f, "{}*", self.n.abs())?;
            }
            write!(f, "d")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// An integral weight: the values on h_0..h_N and on the degree derivation d.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub h: Vec<i64>,
    pub dval: i64,
}

impl Weight {
    pub fn new(h: Vec<i64>, dval: i64) -> Self {
        Weight { h, dval }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.h.iter().enumerate() {
            write!(f, "h{}={},", i, v)?;
        }
        write!(f, "d={}", self.dval)
    }
}

/// Classification of a lattice vector against the affine root system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootClass {
    RealRoot,
    ImaginaryRoot,
    NotRoot,
}

/// Specification accepted by [`build_cartan`].
#[derive(Clone, Debug)]
pub enum CartanSpec {
    /// A type tag: "A1~", "A2~", "A3~" or "C2~".
    Tag(String),
    /// An explicit (N+1)x(N+1) integer matrix, validated as untwisted affine.
    Matrix(Vec<Vec<i64>>),
}

/// Cartan datum of an untwisted affine algebra plus cached finite-root data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    /// Rank of the finite part.
    pub n: usize,
    /// The (N+1)x(N+1) affine Cartan matrix, indices 0..N.
    pub a: Vec<Vec<i64>>,
    /// Symmetrizers d_0..d_N (minimal positive integers with DA symmetric).
    pub d: Vec<i64>,
    /// Dual labels a^vee_0..a^vee_N; the level is sum a^vee_i lambda(h_i).
    pub dual_labels: Vec<i64>,
    /// Positive roots of the finite part, as coefficient vectors.
    pub finite_positive_roots: Vec<Vec<i64>>,
    /// Highest root of the finite part.
    pub theta: Vec<i64>,
    /// Human-readable tag when built from one.
    pub tag: Option<String>,
}

fn rational_rank(m: &[Vec<i64>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| !a[r][col].is_zero());
        let Some(p) = pivot else { continue };
        a.swap(rank, p);
        let lead = a[rank][col].clone();
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let factor = &a[r][col] / &lead;
                for c in col..cols {
                    let delta = &factor * &a[rank][c];
                    a[r][c] -= delta;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Minimal positive integer null vector of the given integer matrix
/// (treating rows as equations), when the kernel is one-dimensional.
fn positive_null_vector(m: &[Vec<i64>]) -> Option<Vec<i64>> {
    let nn = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    // Reduce to row echelon form.
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..nn {
        let pivot = (rank..nn).find(|&r| !a[r][col].is_zero());
        let Some(p) = pivot else { continue };
        a.swap(rank, p);
        let lead = a[rank][col].clone();
        for r in 0..nn {
            if r != rank && !a[r][col].is_zero() {
                let factor = &a[r][col] / &lead;
                for c in 0..nn {
                    let delta = &factor * &a[rank][c];
                    a[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rank != nn - 1 {
        return None;
    }
    let free = (0..nn).find(|c| !pivots.contains(c))?;
    let mut x = vec![BigRational::zero(); nn];
    x[free] = BigRational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        // a[r][pc] * x[pc] + a[r][free] * 1 = 0
        x[pc] = -&a[r][free] / &a[r][pc];
    }
    // Scale to minimal positive integers.
    let mut denom_lcm = BigInt::one();
    for v in &x {
        denom_lcm = num_integer_lcm(&denom_lcm, v.denom());
    }
    let ints: Vec<BigInt> = x
        .iter()
        .map(|v| (v * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = num_integer_gcd(&g, v);
    }
    if g.is_zero() {
        return None;
    }
    let ints: Vec<BigInt> = ints.iter().map(|v| v / &g).collect();
    let all_pos = ints.iter().all(|v| v.is_positive());
    let all_neg = ints.iter().all(|v| v.is_negative());
    let signed: Vec<BigInt> = if all_pos {
        ints
    } else if all_neg {
        ints.iter().map(|v| -v).collect()
    } else {
        return None;
    };
    signed
        .iter()
        .map(|v| i64::try_from(v.clone()).ok())
        .collect()
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn num_integer_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a * b).abs() / num_integer_gcd(a, b)
}

fn known_matrix(tag: &str) -> Option<Vec<Vec<i64>>> {
    match tag {
        "A1~" => Some(vec![vec![2, -2], vec![-2, 2]]),
        "A2~" => Some(vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]),
        "A3~" => Some(vec![
            vec![2, -1, 0, -1],
            vec![-1, 2, -1, 0],
            vec![0, -1, 2, -1],
            vec![-1, 0, -1, 2],
        ]),
        "C2~" => Some(vec![vec![2, -1, 0], vec![-2, 2, -2], vec![0, -1, 2]]),
        _ => None,
    }
}

/// Build and validate the Cartan datum for an untwisted affine algebra.
///
/// Accepts a type tag (`A1~`, `A2~`, `A3~`, `C2~`) or an explicit matrix; raw
/// matrices are validated for corank 1 and symmetrizability. For
/// non-simply-laced types the minimal integral symmetrizers force d_0 > 1.
pub fn build_cartan(spec: &CartanSpec) -> Result<CartanData> {
    let (a, tag) = match spec {
        CartanSpec::Tag(t) => {
            let m = known_matrix(t)
                .ok_or_else(|| Error::InvalidInput(format!("unknown type tag {t:?}")))?;
            (m, Some(t.clone()))
        }
        CartanSpec::Matrix(m) => (m.clone(), None),
    };
    let size = a.len();
    if size < 2 || a.iter().any(|r| r.len() != size) {
        return Err(Error::NotAffine("matrix must be square of size >= 2".into()));
    }
    let n = size - 1;
    for i in 0..size {
        if a[i][i] != 2 {
            return Err(Error::NotAffine(format!("diagonal entry a[{i}][{i}] != 2")));
        }
        for j in 0..size {
            if i != j {
                if a[i][j] > 0 {
                    return Err(Error::NotAffine(format!("positive off-diagonal a[{i}][{j}]")));
                }
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    return Err(Error::NotAffine(format!(
                        "zero pattern not symmetric at ({i},{j})"
                    )));
                }
            }
        }
    }
    if rational_rank(&a) != n {
        return Err(Error::NotAffine("corank is not 1".into()));
    }
    // Symmetrizers: minimal positive integers with d_i a_ij = d_j a_ji,
    // equivalently a null vector of the antisymmetrized pairing system; for a
    // connected diagram these are fixed up to scale, so propagate ratios.
    let mut d_rat = vec![None::<BigRational>; size];
    d_rat[0] = Some(BigRational::one());
    let mut queue = vec![0usize];
    while let Some(i) = queue.pop() {
        for j in 0..size {
            if i != j && a[i][j] != 0 && d_rat[j].is_none() {
                // d_j = d_i * a_ij / a_ji
                let di = d_rat[i].clone().unwrap();
                let ratio = BigRational::new(BigInt::from(a[i][j]), BigInt::from(a[j][i]));
                d_rat[j] = Some(di * ratio);
                queue.push(j);
            }
        }
    }
    if d_rat.iter().any(|x| x.is_none()) {
        return Err(Error::NotAffine("diagram is not connected".into()));
    }
    let d_rat: Vec<BigRational> = d_rat.into_iter().map(|x| x.unwrap()).collect();
    let mut denom_lcm = BigInt::one();
    for v in &d_rat {
        denom_lcm = num_integer_lcm(&denom_lcm, v.denom());
    }
    let mut d: Vec<i64> = d_rat
        .iter()
        .map(|v| {
            i64::try_from((v * BigRational::from_integer(denom_lcm.clone())).to_integer()).unwrap()
        })
        .collect();
    let mut g = 0i64;
    for &v in &d {
        g = gcd_i64(g, v);
    }
    for v in d.iter_mut() {
        *v /= g;
    }
    if d.iter().any(|&v| v <= 0) {
        return Err(Error::NotAffine("no positive symmetrizer".into()));
    }
    for i in 0..size {
        for j in 0..size {
            if d[i] * a[i][j] != d[j] * a[j][i] {
                return Err(Error::NotAffine("DA is not symmetric".into()));
            }
        }
    }
    // Dual labels: positive integral null vector of A^T.
    let at: Vec<Vec<i64>> = (0..size)
        .map(|i| (0..size).map(|j| a[j][i]).collect())
        .collect();
    let dual_labels = positive_null_vector(&at)
        .ok_or_else(|| Error::NotAffine("no positive dual label vector".into()))?;
    // Marks (for theta): positive integral null vector of A itself.
    let marks =
        positive_null_vector(&a).ok_or_else(|| Error::NotAffine("no positive mark vector".into()))?;
    if marks[0] != 1 {
        return Err(Error::NotAffine(
            "zeroth mark is not 1 (matrix is not untwisted affine in the standard labeling)".into(),
        ));
    }
    let theta: Vec<i64> = marks[1..].to_vec();

    let mut cd = CartanData {
        n,
        a,
        d,
        dual_labels,
        finite_positive_roots: Vec::new(),
        theta,
        tag,
    };
    cd.finite_positive_roots = cd.generate_finite_positive_roots()?;
    // theta must be the unique highest root.
    if !cd.finite_positive_roots.contains(&cd.theta) {
        return Err(Error::NotAffine("theta is not a finite root".into()));
    }
    Ok(cd)
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl CartanData {
    /// q_i exponent: d_i.
    pub fn d_i(&self, i: usize) -> i64 {
        self.d[i]
    }

    /// The i-th affine simple root as a lattice vector (alpha_0 = delta - theta).
    pub fn simple_root(&self, i: usize) -> Root {
        if i == 0 {
            Root {
                fin: self.theta.iter().map(|c| -c).collect(),
                n: 1,
            }
        } else {
            let mut fin = vec![0i64; self.n];
            fin[i - 1] = 1;
            Root { fin, n: 0 }
        }
    }

    pub fn delta(&self) -> Root {
        Root::delta(self.n, 1)
    }

    pub fn theta_root(&self) -> Root {
        Root {
            fin: self.theta.clone(),
            n: 0,
        }
    }

    /// (alpha_i | alpha_j) on the finite part (1-based indices).
    fn fin_form_entry(&self, i: usize, j: usize) -> i64 {
        self.d[i] * self.a[i][j]
    }

    /// The invariant form on lattice vectors; delta parts contribute zero.
    pub fn bilinear_form(&self, x: &Root, y: &Root) -> i64 {
        let mut s = 0i64;
        for i in 1..=self.n {
            if x.fin[i - 1] == 0 {
                continue;
            }
            for j in 1..=self.n {
                if y.fin[j - 1] == 0 {
                    continue;
                }
                s += x.fin[i - 1] * y.fin[j - 1] * self.fin_form_entry(i, j);
            }
        }
        s
    }

    /// <x, h_i> = (alpha_i | x) / d_i, an integer for lattice vectors.
    pub fn pairing(&self, x: &Root, i: usize) -> i64 {
        let ai = self.simple_root(i);
        let v = self.bilinear_form(&ai, x);
        debug_assert_eq!(v % self.d[i], 0);
        v / self.d[i]
    }

    /// <x, d> = alpha_0-coordinate of x.
    pub fn d_pairing(&self, x: &Root) -> i64 {
        x.n
    }

    fn generate_finite_positive_roots(&self) -> Result<Vec<Vec<i64>>> {
        use std::collections::BTreeSet;
        let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue: Vec<Vec<i64>> = Vec::new();
        for i in 1..=self.n {
            let mut v = vec![0i64; self.n];
            v[i - 1] = 1;
            set.insert(v.clone());
            queue.push(v);
        }
        while let Some(r) = queue.pop() {
            for i in 1..=self.n {
                let root = Root { fin: r.clone(), n: 0 };
                let refl = self.simple_reflection(i, &root);
                let positive = refl.fin.iter().all(|&c| c >= 0) && !refl.fin_is_zero();
                if positive && set.insert(refl.fin.clone()) {
                    queue.push(refl.fin);
                }
            }
            if set.len() > 4096 {
                return Err(Error::NotAffine(
                    "finite part did not close (not finite type)".into(),
                ));
            }
        }
        let mut roots: Vec<Vec<i64>> = set.into_iter().collect();
        roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        Ok(roots)
    }

    pub fn is_finite_root(&self, fin: &[i64]) -> bool {
        let pos: Vec<i64> = fin.to_vec();
        let neg: Vec<i64> = fin.iter().map(|c| -c).collect();
        self.finite_positive_roots.contains(&pos) || self.finite_positive_roots.contains(&neg)
    }

    pub fn is_finite_positive_root(&self, fin: &[i64]) -> bool {
        self.finite_positive_roots.contains(&fin.to_vec())
    }

    /// Real / imaginary / not-a-root classification.
    pub fn classify(&self, r: &Root) -> RootClass {
        if r.fin_is_zero() {
            if r.n != 0 {
                RootClass::ImaginaryRoot
            } else {
                RootClass::NotRoot
            }
        } else if self.is_finite_root(&r.fin) {
            RootClass::RealRoot
        } else {
            RootClass::NotRoot
        }
    }

    pub fn is_root(&self, r: &Root) -> bool {
        !matches!(self.classify(r), RootClass::NotRoot)
    }

    /// Positive as an affine root: n > 0, or n = 0 with positive finite part.
    pub fn is_positive_root(&self, r: &Root) -> bool {
        match self.classify(r) {
            RootClass::NotRoot => false,
            _ => r.n > 0 || (r.n == 0 && self.is_finite_positive_root(&r.fin)),
        }
    }

    pub fn ht_fin(&self, fin: &[i64]) -> i64 {
        fin.iter().sum()
    }

    /// Total height: the sum of coefficients over alpha_0..alpha_N, computed
    /// from alpha + n*delta = n*alpha_0 + (fin + n*theta).
    pub fn height(&self, r: &Root) -> i64 {
        r.n + self.ht_fin(&r.fin) + r.n * self.ht_fin(&self.theta)
    }

    /// r_i(x) = x - <x, h_i> alpha_i; fixes delta.
    pub fn simple_reflection(&self, i: usize, x: &Root) -> Root {
        let k = self.pairing(x, i);
        x.sub(&self.simple_root(i).scaled(k))
    }

    /// The level lambda(c) = sum a^vee_i lambda(h_i).
    pub fn level(&self, w: &Weight) -> i64 {
        self.dual_labels
            .iter()
            .zip(&w.h)
            .map(|(a, h)| a * h)
            .sum()
    }

    /// Pairings of a lattice vector against h_0..h_N and d, as a weight-shaped
    /// functional (used for mu = lambda - gamma bookkeeping).
    pub fn root_as_weight(&self, r: &Root) -> Weight {
        let h = (0..=self.n).map(|i| self.pairing(r, i)).collect();
        Weight {
            h,
            dval: self.d_pairing(r),
        }
    }

    pub fn weight_sub_root(&self, w: &Weight, r: &Root) -> Weight {
        let rw = self.root_as_weight(r);
        Weight {
            h: w.h.iter().zip(&rw.h).map(|(a, b)| a - b).collect(),
            dval: w.dval - rw.dval,
        }
    }

    /// Recover gamma = lambda - mu as a lattice vector, when it lies in Q.
    pub fn root_from_weight_diff(&self, lambda: &Weight, mu: &Weight) -> Option<Root> {
        let c0 = lambda.dval - mu.dval;
        let t: Vec<i64> = lambda.h.iter().zip(&mu.h).map(|(a, b)| a - b).collect();
        // Solve sum_{j>=1} a[i][j] c_j = t_i - a[i][0] c_0 over the finite block.
        let size = self.n;
        let mut m: Vec<Vec<BigRational>> = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| BigRational::from_integer(BigInt::from(self.a[i + 1][j + 1])))
                    .collect()
            })
            .collect();
        let mut rhs: Vec<BigRational> = (0..size)
            .map(|i| {
                BigRational::from_integer(BigInt::from(t[i + 1] - self.a[i + 1][0] * c0))
            })
            .collect();
        // Gaussian elimination.
        for col in 0..size {
            let pivot = (col..size).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, pivot);
            rhs.swap(col, pivot);
            let lead = m[col][col].clone();
            for r in 0..size {
                if r != col && !m[r][col].is_zero() {
                    let factor = &m[r][col] / &lead;
                    for c in 0..size {
                        let delta = &factor * &m[col][c];
                        m[r][c] -= delta;
                    }
                    let delta = &factor * &rhs[col];
                    rhs[r] -= delta;
                }
            }
        }
        let mut c = vec![0i64; size];
        for i in 0..size {
            let v = &rhs[i] / &m[i][i];
            if !v.is_integer() {
                return None;
            }
            c[i] = i64::try_from(v.to_integer()).ok()?;
        }
        // Consistency with the zeroth equation.
        let lhs0: i64 = self.a[0][0] * c0 + (0..size).map(|j| self.a[0][j + 1] * c[j]).sum::<i64>();
        if lhs0 != t[0] {
            return None;
        }
        // gamma = c0 * alpha_0 + sum c_j alpha_j = (c - c0*theta, c0).
        let fin: Vec<i64> = (0..size).map(|j| c[j] - c0 * self.theta[j]).collect();
        Some(Root { fin, n: c0 })
    }

    /// All roots with |delta coefficient| <= cutoff.
    pub fn roots_within(&self, cutoff: i64) -> Vec<Root> {
        let mut out = Vec::new();
        for k in -cutoff..=cutoff {
            if k != 0 {
                out.push(Root::delta(self.n, k));
            }
            for fin in &self.finite_positive_roots {
                out.push(Root { fin: fin.clone(), n: k });
                out.push(Root {
                    fin: fin.iter().map(|c| -c).collect(),
                    n: k,
                });
            }
        }
        out
    }
}
