//! Free associative word algebra over the Chevalley alphabet with exact
//! rational-function coefficients, and a degree-truncated rewriting engine
//! with overlap completion.
//!
//! Words are ordered by (total height, length, position-lexicographic with
//! letter precedence F < K^- < K^+ < D^- < D^+ < E and ascending generator
//! index within a kind). Rules always rewrite a word to strictly smaller
//! terms, so reduction terminates; completing overlap ambiguities up to a
//! height ceiling makes normal forms unique on the truncated set, which is
//! what certifies Zero / NonZero verdicts for ideal membership.
//!
//! A terminal vacuum letter `V` supports module computations: module vectors
//! are words ending in `V`, and boundary rules of the form w.V -> ... encode
//! the highest-weight conditions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::qcoeff::QRat;
use crate::rootsys::{CartanData, Root};

/// Letter kinds in precedence order (low to high). V is the terminal vacuum
/// symbol used by module models; it only ever appears as a final letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LetterKind {
    F,
    KMinus,
    KPlus,
    DMinus,
    DPlus,
    E,
    V,
}

/// One letter of the alphabet. The index is a node index for E/F/K kinds and
/// zero for D kinds and V.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub kind: LetterKind,
    pub idx: u8,
}

impl Letter {
    pub fn e(i: usize) -> Self {
        Letter { kind: LetterKind::E, idx: i as u8 }
    }
    pub fn f(i: usize) -> Self {
        Letter { kind: LetterKind::F, idx: i as u8 }
    }
    pub fn k(i: usize) -> Self {
        Letter { kind: LetterKind::KPlus, idx: i as u8 }
    }
    pub fn k_inv(i: usize) -> Self {
        Letter { kind: LetterKind::KMinus, idx: i as u8 }
    }
    pub fn d() -> Self {
        Letter { kind: LetterKind::DPlus, idx: 0 }
    }
    pub fn d_inv() -> Self {
        Letter { kind: LetterKind::DMinus, idx: 0 }
    }
    pub fn vac() -> Self {
        Letter { kind: LetterKind::V, idx: 0 }
    }

    /// Height contribution: 1 for E/F letters, 0 for Cartan letters and V.
    pub fn height(&self) -> u32 {
        matches!(self.kind, LetterKind::E | LetterKind::F) as u32
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LetterKind::E => write!(f, "E{}", self.idx),
            LetterKind::F => write!(f, "F{}", self.idx),
            LetterKind::KPlus => write!(f, "K{}+", self.idx),
            LetterKind::KMinus => write!(f, "K{}-", self.idx),
            LetterKind::DPlus => write!(f, "D+"),
            LetterKind::DMinus => write!(f, "D-"),
            LetterKind::V => write!(f, "v"),
        }
    }
}

/// A word in the free algebra. `Ord` is the term order used throughout:
/// total height first, then length, then position-lexicographic on letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn height(&self) -> u32 {
        self.0.iter().map(Letter::height).sum()
    }

    /// Q-weight of the word: sum of +alpha_i over E letters and -alpha_i over
    /// F letters (Cartan letters and V contribute zero).
    pub fn weight(&self, cd: &CartanData) -> Root {
        let mut w = Root::zero(cd.n);
        for l in &self.0 {
            match l.kind {
                LetterKind::E => w = w.add(&cd.simple_root(l.idx as usize)),
                LetterKind::F => w = w.sub(&cd.simple_root(l.idx as usize)),
                _ => {}
            }
        }
        w
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.height()
            .cmp(&other.height())
            .then_with(|| self.0.len().cmp(&other.0.len()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", l)?;
        }
        Ok(())
    }
}

/// A finite linear combination of words with QRat coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, QRat>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, QRat::one());
        AlgebraElement { terms }
    }

    pub fn from_term(w: Word, c: QRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        AlgebraElement { terms }
    }

    pub fn from_letter(l: Letter) -> Self {
        Self::from_word(Word::single(l))
    }

    pub fn scalar(c: QRat) -> Self {
        Self::from_term(Word::empty(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> QRat {
        self.terms.get(w).cloned().unwrap_or_else(QRat::zero)
    }

    pub fn add_term(&mut self, w: Word, c: QRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = &*e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &QRat) -> AlgebraElement {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    /// Bilinear concatenation product.
    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> AlgebraElement {
        let mut acc = AlgebraElement::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Largest term in the term order.
    pub fn leading(&self) -> Option<(&Word, &QRat)> {
        self.terms.iter().next_back()
    }

    pub fn max_height(&self) -> u32 {
        self.terms.keys().map(Word::height).max().unwrap_or(0)
    }

    /// Common Q-weight of all words, when homogeneous; None for the zero
    /// element or an inhomogeneous combination.
    pub fn weight(&self, cd: &CartanData) -> Option<Root> {
        let mut it = self.terms.keys();
        let first = it.next()?.weight(cd);
        for w in it {
            if w.weight(cd) != first {
                return None;
            }
        }
        Some(first)
    }
}

impl fmt::Display for AlgebraElement {
    /// Textual element format: sum of coefficient-prefixed letter strings,
    /// e.g. `(q + q^-1)*F1.K0-.E1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() && !w.is_empty() {
                write!(f, "{}", w)?;
            } else if w.is_empty() {
                write!(f, "({})", c)?;
            } else {
                write!(f, "({})*{}", c, w)?;
            }
        }
        Ok(())
    }
}

/// Parse the textual element format produced by `Display`: sums of
/// `(coeff)*W1.W2...` terms and bare words.
pub fn parse_element(s: &str) -> Result<AlgebraElement> {
    let mut out = AlgebraElement::zero();
    let s = s.trim();
    if s == "0" {
        return Ok(out);
    }
    // Split on " + " at parenthesis depth zero only.
    let bytes = s.as_bytes();
    let mut chunks = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut i = 0usize;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            b' ' if depth == 0 && bytes[i..].starts_with(b" + ") => {
                chunks.push(&s[start..i]);
                i += 3;
                start = i;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    chunks.push(&s[start..]);
    for chunk in chunks {
        let chunk = chunk.trim();
        let (coeff, word_str) = if let Some(rest) = chunk.strip_prefix('(') {
            let close = rest
                .rfind(')')
                .ok_or_else(|| Error::InvalidInput(format!("unbalanced parens in {chunk:?}")))?;
            let coeff = crate::qcoeff::parse_qrat(&rest[..close])?;
            let tail = rest[close + 1..].trim_start_matches('*');
            (coeff, tail.trim())
        } else {
            (QRat::one(), chunk)
        };
        let mut word = Vec::new();
        if !word_str.is_empty() && word_str != "1" {
            for tok in word_str.split('.') {
                word.push(parse_letter(tok)?);
            }
        }
        out.add_term(Word(word), coeff);
    }
    Ok(out)
}

fn parse_letter(tok: &str) -> Result<Letter> {
    let bad = || Error::InvalidInput(format!("bad letter token {tok:?}"));
    let tok = tok.trim();
    if tok == "D+" {
        return Ok(Letter::d());
    }
    if tok == "D-" {
        return Ok(Letter::d_inv());
    }
    if tok == "v" {
        return Ok(Letter::vac());
    }
    if tok.len() < 2 {
        return Err(bad());
    }
    let (kind_ch, rest) = tok.split_at(1);
    match kind_ch {
        "E" => Ok(Letter::e(rest.parse().map_err(|_| bad())?)),
        "F" => Ok(Letter::f(rest.parse().map_err(|_| bad())?)),
        "K" => {
            if let Some(i) = rest.strip_suffix('+') {
                Ok(Letter::k(i.parse().map_err(|_| bad())?))
            } else if let Some(i) = rest.strip_suffix('-') {
                Ok(Letter::k_inv(i.parse().map_err(|_| bad())?))
            } else {
                Err(bad())
            }
        }
        _ => Err(bad()),
    }
}

/// An oriented rewrite rule lhs -> rhs with every rhs term strictly smaller.
#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: AlgebraElement,
}

/// A list of oriented rules with a first-letter index. Rules are checked at
/// insertion to decrease the term order strictly and to preserve Q-weight.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    pub cd: CartanData,
    rules: Vec<Rule>,
    first_index: HashMap<Letter, Vec<usize>>,
    /// Height ceiling the system was completed to, if any.
    pub completed_to: Option<u32>,
    /// True when completion stopped at the rule cap before a fixpoint.
    pub capped: bool,
}

impl RewriteSystem {
    pub fn new(cd: CartanData) -> Self {
        RewriteSystem {
            cd,
            rules: Vec::new(),
            first_index: HashMap::new(),
            completed_to: None,
            capped: false,
        }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn add_rule(&mut self, lhs: Word, rhs: AlgebraElement) -> Result<()> {
        if lhs.is_empty() {
            return Err(Error::InvalidInput("empty rule lhs".into()));
        }
        let lw = lhs.weight(&self.cd);
        for (w, _) in rhs.terms() {
            if *w >= lhs {
                return Err(Error::InvalidInput(format!(
                    "rule does not decrease the term order: {} -> {}",
                    lhs, w
                )));
            }
            if w.weight(&self.cd) != lw {
                return Err(Error::InvalidInput(format!(
                    "rule is not weight-homogeneous: {} -> {}",
                    lhs, w
                )));
            }
        }
        let first = lhs.0[0];
        let id = self.rules.len();
        self.rules.push(Rule { lhs, rhs });
        self.first_index.entry(first).or_default().push(id);
        Ok(())
    }

    /// First (position, rule) redex under the deterministic leftmost strategy.
    fn find_redex(&self, w: &Word) -> Option<(usize, usize)> {
        for pos in 0..w.len() {
            if let Some(ids) = self.first_index.get(&w.0[pos]) {
                for &id in ids {
                    let lhs = &self.rules[id].lhs;
                    if pos + lhs.len() <= w.len() && w.0[pos..pos + lhs.len()] == lhs.0[..] {
                        return Some((pos, id));
                    }
                }
            }
        }
        None
    }

    /// All (position, rule) redexes in a word.
    fn all_redexes(&self, w: &Word) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for pos in 0..w.len() {
            if let Some(ids) = self.first_index.get(&w.0[pos]) {
                for &id in ids {
                    let lhs = &self.rules[id].lhs;
                    if pos + lhs.len() <= w.len() && w.0[pos..pos + lhs.len()] == lhs.0[..] {
                        out.push((pos, id));
                    }
                }
            }
        }
        out
    }

    fn apply_at(&self, w: &Word, pos: usize, rule: usize) -> AlgebraElement {
        let lhs_len = self.rules[rule].lhs.len();
        let prefix = &w.0[..pos];
        let suffix = &w.0[pos + lhs_len..];
        let mut out = AlgebraElement::zero();
        for (rw, rc) in self.rules[rule].rhs.terms() {
            let mut v = Vec::with_capacity(prefix.len() + rw.len() + suffix.len());
            v.extend_from_slice(prefix);
            v.extend_from_slice(&rw.0);
            v.extend_from_slice(suffix);
            out.add_term(Word(v), rc.clone());
        }
        out
    }
}

enum Strategy {
    Deterministic,
    Randomized(StdRng),
}

/// Normal-form computer over a frozen rewrite system. The deterministic
/// strategy memoizes per-word normal forms; the randomized strategy picks a
/// random redex each step and is the confluence oracle's tool.
pub struct Reducer<'a> {
    pub sys: &'a RewriteSystem,
    memo: HashMap<Word, AlgebraElement>,
    strategy: Strategy,
}

impl<'a> Reducer<'a> {
    pub fn new(sys: &'a RewriteSystem) -> Self {
        Reducer {
            sys,
            memo: HashMap::new(),
            strategy: Strategy::Deterministic,
        }
    }

    pub fn with_seed(sys: &'a RewriteSystem, seed: u64) -> Self {
        Reducer {
            sys,
            memo: HashMap::new(),
            strategy: Strategy::Randomized(StdRng::seed_from_u64(seed)),
        }
    }

    /// Normal form of a single word. Errors with `HeightOverflow` when any
    /// term exceeds `cap` (rewrites never raise height, so this only
    /// triggers on malformed rule sets or an undersized cap).
    ///
    /// The deterministic strategy memoizes the normal form of every word it
    /// ever touches (iterative post-order over the one-step expansion DAG);
    /// the randomized strategy re-derives everything, which is the point.
    pub fn normal_form_word(&mut self, w: &Word, cap: u32) -> Result<AlgebraElement> {
        if w.height() > cap {
            return Err(Error::HeightOverflow { height: w.height(), cap });
        }
        match &mut self.strategy {
            Strategy::Randomized(_) => self.normal_form_word_random(w, cap),
            Strategy::Deterministic => {
                if self.memo.contains_key(w) {
                    return Ok(self.memo[w].clone());
                }
                let mut stack: Vec<Word> = vec![w.clone()];
                while let Some(word) = stack.last().cloned() {
                    if self.memo.contains_key(&word) {
                        stack.pop();
                        continue;
                    }
                    if word.height() > cap {
                        return Err(Error::HeightOverflow { height: word.height(), cap });
                    }
                    match self.sys.find_redex(&word) {
                        None => {
                            self.memo.insert(word.clone(), AlgebraElement::from_word(word));
                            stack.pop();
                        }
                        Some((pos, rule)) => {
                            let expansion = self.sys.apply_at(&word, pos, rule);
                            let missing: Vec<&Word> = expansion
                                .terms()
                                .map(|(nw, _)| nw)
                                .filter(|nw| !self.memo.contains_key(*nw))
                                .collect();
                            if missing.is_empty() {
                                let mut out = AlgebraElement::zero();
                                for (nw, nc) in expansion.terms() {
                                    for (mw, mc) in self.memo[nw].terms() {
                                        out.add_term(mw.clone(), mc * nc);
                                    }
                                }
                                self.memo.insert(word, out);
                                stack.pop();
                            } else {
                                let missing: Vec<Word> = missing.into_iter().cloned().collect();
                                stack.extend(missing);
                            }
                        }
                    }
                }
                Ok(self.memo[w].clone())
            }
        }
    }

    fn normal_form_word_random(&mut self, w: &Word, cap: u32) -> Result<AlgebraElement> {
        let mut pending: Vec<(Word, QRat)> = vec![(w.clone(), QRat::one())];
        let mut done = AlgebraElement::zero();
        while let Some((word, coeff)) = pending.pop() {
            if coeff.is_zero() {
                continue;
            }
            if word.height() > cap {
                return Err(Error::HeightOverflow { height: word.height(), cap });
            }
            let redex = match &mut self.strategy {
                Strategy::Randomized(rng) => {
                    let all = self.sys.all_redexes(&word);
                    if all.is_empty() {
                        None
                    } else {
                        Some(all[rng.gen_range(0..all.len())])
                    }
                }
                Strategy::Deterministic => unreachable!(),
            };
            match redex {
                None => done.add_term(word, coeff),
                Some((pos, rule)) => {
                    let replaced = self.sys.apply_at(&word, pos, rule);
                    for (nw, nc) in replaced.terms() {
                        pending.push((nw.clone(), nc * &coeff));
                    }
                }
            }
        }
        Ok(done)
    }

    /// Normal form of an element.
    pub fn normal_form(&mut self, x: &AlgebraElement, cap: u32) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (w, c) in x.terms() {
            let nf = self.normal_form_word(w, cap)?;
            for (nw, nc) in nf.terms() {
                out.add_term(nw.clone(), nc * c);
            }
        }
        Ok(out)
    }
}

/// Outcome of an ideal-membership zero test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroVerdict {
    Zero,
    NonZero,
    Inconclusive,
}

/// Resolve overlap ambiguities between rule leading words, adding oriented
/// rules until a fixpoint, skipping superpositions whose height exceeds
/// `maxheight`, and stopping (with `capped = true`) at `max_rules`.
///
/// Works in sweeps: all unprocessed pairs are resolved against the current
/// frozen system (sharing one memoized reducer), then the batch of new rules
/// is installed and the new pairs are queued. A pair that once resolved to
/// zero stays resolved under any larger system, so each pair is processed at
/// most once.
pub fn complete(mut sys: RewriteSystem, maxheight: u32, max_rules: usize) -> RewriteSystem {
    let mut processed = 0usize; // rules with all mutual pairs processed
    loop {
        let n = sys.rules.len();
        if processed == n {
            break;
        }
        // Batch-resolve all pairs involving at least one rule index >= processed.
        let mut batch: Vec<(Word, AlgebraElement)> = Vec::new();
        {
            let mut red = Reducer::new(&sys);
            for i in 0..n {
                for j in 0..n {
                    if i < processed && j < processed {
                        continue;
                    }
                    for (w, pos_i, pos_j) in superpose(&sys.rules[i].lhs, &sys.rules[j].lhs) {
                        if w.height() > maxheight {
                            continue;
                        }
                        let via_i = sys.apply_at(&w, pos_i, i);
                        let via_j = sys.apply_at(&w, pos_j, j);
                        let a = match red.normal_form(&via_i, maxheight) {
                            Ok(v) => v,
                            Err(_) => continue,
                        };
                        let b = match red.normal_form(&via_j, maxheight) {
                            Ok(v) => v,
                            Err(_) => continue,
                        };
                        let diff = a.sub(&b);
                        if diff.is_zero() {
                            continue;
                        }
                        let (lead_w, lead_c) =
                            diff.leading().map(|(w, c)| (w.clone(), c.clone())).unwrap();
                        let rest =
                            diff.sub(&AlgebraElement::from_term(lead_w.clone(), lead_c.clone()));
                        let rhs = rest.scale(&-&lead_c.inv());
                        batch.push((lead_w, rhs));
                    }
                }
            }
        }
        processed = n;
        // Install with interreduction: each candidate is re-reduced against
        // the system as built so far, so colliding leading words fold into
        // genuinely new relations instead of being dropped.
        for (lhs, rhs) in batch {
            let x = AlgebraElement::from_word(lhs).sub(&rhs);
            let nf = {
                let mut red = Reducer::new(&sys);
                match red.normal_form(&x, maxheight) {
                    Ok(v) => v,
                    Err(_) => continue,
                }
            };
            if nf.is_zero() {
                continue;
            }
            let (lead_w, lead_c) = nf.leading().map(|(w, c)| (w.clone(), c.clone())).unwrap();
            let rest = nf.sub(&AlgebraElement::from_term(lead_w.clone(), lead_c.clone()));
            let rhs = rest.scale(&-&lead_c.inv());
            if sys.rules.len() >= max_rules {
                sys.capped = true;
                sys.completed_to = Some(maxheight);
                return sys;
            }
            let _ = sys.add_rule(lead_w, rhs);
        }
    }
    sys.completed_to = Some(maxheight);
    sys.capped = false;
    sys
}

/// Superposition words of two rule left-hand sides: proper overlaps (a suffix
/// of `a` equals a prefix of `b`) and containments (`b` inside `a`). Returns
/// (word, position where `a` matches, position where `b` matches).
fn superpose(a: &Word, b: &Word) -> Vec<(Word, usize, usize)> {
    let mut out = Vec::new();
    for k in 1..a.len().min(b.len()) {
        if a.0[a.len() - k..] == b.0[..k] {
            let mut w = a.0.clone();
            w.extend_from_slice(&b.0[k..]);
            out.push((Word(w), 0, a.len() - k));
        }
    }
    if b.len() <= a.len() {
        for pos in 0..=a.len() - b.len() {
            if a.0[pos..pos + b.len()] == b.0[..] {
                out.push((a.clone(), 0, pos));
            }
        }
    }
    out
}

/// Ideal-membership zero test against a completed system. `Zero` reduces to
/// zero; `NonZero` has a nonzero normal form under an uncapped completion at
/// a ceiling at least `maxheight`; anything weaker is `Inconclusive`.
pub fn is_zero_mod_ideal(
    x: &AlgebraElement,
    completed: &RewriteSystem,
    maxheight: u32,
) -> ZeroVerdict {
    let mut red = Reducer::new(completed);
    match red.normal_form(x, maxheight) {
        Err(_) => ZeroVerdict::Inconclusive,
        Ok(nf) => {
            if nf.is_zero() {
                ZeroVerdict::Zero
            } else if completed.capped || completed.completed_to.map_or(true, |h| h < maxheight) {
                ZeroVerdict::Inconclusive
            } else {
                ZeroVerdict::NonZero
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Graded quasi-commutation model
// ---------------------------------------------------------------------------

/// The associated graded model of the PBW-filtered algebra: root-vector
/// symbols quasi-commute, with E_a E_b = q^{(a|b)} E_b E_a for b < a of the
/// same sign and opposite-sign symbols commuting exactly. Carries the total
/// degree (d0, exponent sequences) used by the grading lemmas.
#[derive(Clone, Debug)]
pub struct GradedModel {
    pub cd: CartanData,
    /// Symbols (root, color), negatives first then positives, each half
    /// ascending in the Beck order with color breaking imaginary ties.
    pub symbols: Vec<(Root, Option<usize>)>,
    heights: Vec<i64>,
}

/// A monomial in the graded model: exponents over the ordered symbol list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMonomial {
    pub exps: Vec<u32>,
}

/// Total degree (d0, negative exponents, positive exponents), compared
/// lexicographically with d0 first and exponent sequences from the top
/// symbol downward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalDegree {
    pub d0: i64,
    pub neg: Vec<u32>,
    pub pos: Vec<u32>,
}

impl PartialOrd for TotalDegree {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TotalDegree {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.d0
            .cmp(&other.d0)
            .then_with(|| cmp_from_top(&self.neg, &other.neg))
            .then_with(|| cmp_from_top(&self.pos, &other.pos))
    }
}

fn cmp_from_top(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

impl TotalDegree {
    pub fn add(&self, other: &TotalDegree) -> TotalDegree {
        TotalDegree {
            d0: self.d0 + other.d0,
            neg: self.neg.iter().zip(&other.neg).map(|(a, b)| a + b).collect(),
            pos: self.pos.iter().zip(&other.pos).map(|(a, b)| a + b).collect(),
        }
    }
}

impl GradedModel {
    /// Build the model over the window roots of a Beck ordering plus
    /// imaginary symbols up to `imag_levels`, with N colors per level.
    pub fn new(ord: &crate::beckorder::BeckOrdering, imag_levels: u32) -> Self {
        let cd = ord.cd.clone();
        let mut positives: Vec<(Root, Option<usize>)> = Vec::new();
        for k in -ord.window()..=ord.window() {
            positives.push((ord.beta(k).unwrap().clone(), None));
        }
        for k in 1..=imag_levels as i64 {
            for color in 1..=cd.n {
                positives.push((Root::delta(cd.n, k), Some(color)));
            }
        }
        positives.sort_by(|(a, ca), (b, cb)| {
            ord.compare(a, b)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| ca.cmp(cb))
        });
        let mut symbols: Vec<(Root, Option<usize>)> =
            positives.iter().map(|(r, c)| (r.neg(), *c)).collect();
        symbols.reverse();
        symbols.extend(positives);
        let heights = symbols.iter().map(|(r, _)| cd.height(r).abs()).collect();
        GradedModel { cd, symbols, heights }
    }

    pub fn monomial_one(&self) -> GradedMonomial {
        GradedMonomial { exps: vec![0; self.symbols.len()] }
    }

    fn neg_count(&self) -> usize {
        self.symbols.len() / 2
    }

    pub fn degree(&self, m: &GradedMonomial) -> TotalDegree {
        let d0 = m
            .exps
            .iter()
            .zip(&self.heights)
            .map(|(&e, &h)| e as i64 * h)
            .sum();
        let nc = self.neg_count();
        TotalDegree {
            d0,
            neg: m.exps[..nc].to_vec(),
            pos: m.exps[nc..].to_vec(),
        }
    }

    /// Product of two ordered monomials: exponents add and the scalar
    /// collects q^{(a|b)} over each same-sign out-of-order symbol pair.
    pub fn multiply(&self, x: &GradedMonomial, y: &GradedMonomial) -> (QRat, GradedMonomial) {
        let nc = self.neg_count();
        let mut qexp = 0i64;
        for (j, &ej) in y.exps.iter().enumerate() {
            if ej == 0 {
                continue;
            }
            for (i, &ei) in x.exps.iter().enumerate() {
                if ei == 0 || i <= j {
                    continue;
                }
                if (i < nc) != (j < nc) {
                    continue;
                }
                let (ra, _) = &self.symbols[i];
                let (rb, _) = &self.symbols[j];
                qexp += self.cd.bilinear_form(ra, rb) * ei as i64 * ej as i64;
            }
        }
        let exps = x.exps.iter().zip(&y.exps).map(|(a, b)| a + b).collect();
        (QRat::q_pow(qexp), GradedMonomial { exps })
    }

    /// Lexicographically largest degree among (coefficient, monomial) pairs.
    pub fn leading_degree(&self, terms: &[(QRat, GradedMonomial)]) -> Option<TotalDegree> {
        terms
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, m)| self.degree(m))
            .max()
    }

    pub fn random_monomial(
        &self,
        rng: &mut StdRng,
        max_exp: u32,
        max_support: usize,
    ) -> GradedMonomial {
        let mut m = self.monomial_one();
        let support = rng.gen_range(1..=max_support);
        for _ in 0..support {
            let i = rng.gen_range(0..self.symbols.len());
            m.exps[i] += rng.gen_range(1..=max_exp);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_cartan, CartanSpec};

    fn a1() -> CartanData {
        build_cartan(&CartanSpec::Tag("A1~".into())).unwrap()
    }

    #[test]
    fn word_order_height_then_length_then_lex() {
        let ef = Word(vec![Letter::e(1), Letter::f(1)]);
        let fe = Word(vec![Letter::f(1), Letter::e(1)]);
        let k = Word(vec![Letter::k(1)]);
        assert!(ef > fe); // E > F at the first position
        assert!(k < fe); // smaller height
        let e0 = Word(vec![Letter::e(0)]);
        let e1 = Word(vec![Letter::e(1)]);
        assert!(e0 < e1); // ascending index within a kind
        let kke = Word(vec![Letter::k(0), Letter::k(0), Letter::e(1)]);
        assert!(kke > e1); // same height, longer word
    }

    #[test]
    fn multiply_and_weight() {
        let cd = a1();
        let e1 = AlgebraElement::from_letter(Letter::e(1));
        let f1 = AlgebraElement::from_letter(Letter::f(1));
        let p = e1.mul(&f1);
        assert_eq!(p.num_terms(), 1);
        let (w, c) = p.leading().unwrap();
        assert_eq!(w.0, vec![Letter::e(1), Letter::f(1)]);
        assert!(c.is_one());
        assert_eq!(p.weight(&cd).unwrap(), Root::zero(1));

        assert!(e1.mul(&AlgebraElement::zero()).is_zero());

        let x = AlgebraElement::from_word(Word(vec![Letter::e(0), Letter::e(1)]));
        let wx = x.weight(&cd).unwrap();
        let wy = f1.weight(&cd).unwrap();
        assert_eq!(x.mul(&f1).weight(&cd).unwrap(), wx.add(&wy));
    }

    #[test]
    fn display_and_parse_roundtrip() {
        let mut x = AlgebraElement::zero();
        x.add_term(
            Word(vec![Letter::f(1), Letter::k_inv(0), Letter::e(1)]),
            QRat::from(crate::qcoeff::qint(2, 1)),
        );
        x.add_term(Word(vec![Letter::d()]), -&QRat::one());
        let s = x.to_string();
        let back = parse_element(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn rule_validation() {
        let cd = a1();
        let mut sys = RewriteSystem::new(cd);
        sys.add_rule(
            Word(vec![Letter::k(1), Letter::k_inv(1)]),
            AlgebraElement::one(),
        )
        .unwrap();
        assert!(sys.add_rule(Word::empty(), AlgebraElement::one()).is_err());
        // Weight-inhomogeneous rule rejected.
        let err = sys.add_rule(
            Word(vec![Letter::e(1), Letter::f(1)]),
            AlgebraElement::from_word(Word(vec![Letter::f(0), Letter::e(1)])),
        );
        assert!(err.is_err());
    }

    #[test]
    fn reduction_terminates_and_is_idempotent() {
        let cd = a1();
        let mut sys = RewriteSystem::new(cd);
        sys.add_rule(
            Word(vec![Letter::k(1), Letter::k_inv(1)]),
            AlgebraElement::one(),
        )
        .unwrap();
        let w = Word(vec![
            Letter::k(1),
            Letter::k(1),
            Letter::k_inv(1),
            Letter::k_inv(1),
        ]);
        let mut red = Reducer::new(&sys);
        let nf = red.normal_form_word(&w, 4).unwrap();
        assert_eq!(nf, AlgebraElement::one());
        let nf2 = red.normal_form(&nf, 4).unwrap();
        assert_eq!(nf2, nf);
    }

    #[test]
    fn completion_of_commuting_rules_is_stationary() {
        let cd = a1();
        let mut sys = RewriteSystem::new(cd);
        sys.add_rule(
            Word(vec![Letter::k(1), Letter::k_inv(1)]),
            AlgebraElement::one(),
        )
        .unwrap();
        sys.add_rule(
            Word(vec![Letter::k_inv(1), Letter::k(1)]),
            AlgebraElement::one(),
        )
        .unwrap();
        let n_before = sys.rules().len();
        let done = complete(sys, 4, 100);
        assert!(!done.capped);
        assert_eq!(done.rules().len(), n_before);
    }

    #[test]
    fn graded_degree_additivity_and_monotonicity() {
        let cd = a1();
        let ord = crate::beckorder::find_pi(&cd, 6).unwrap();
        let model = GradedModel::new(&ord, 3);
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let x = model.random_monomial(&mut rng, 2, 3);
            let y = model.random_monomial(&mut rng, 2, 3);
            let (c, xy) = model.multiply(&x, &y);
            assert!(!c.is_zero());
            assert_eq!(model.degree(&xy), model.degree(&x).add(&model.degree(&y)));
        }
        for _ in 0..500 {
            let u = model.random_monomial(&mut rng, 2, 3);
            let a = model.random_monomial(&mut rng, 2, 3);
            let b = model.random_monomial(&mut rng, 2, 3);
            let (da, db) = (model.degree(&a), model.degree(&b));
            if da < db {
                let (_, ua) = model.multiply(&u, &a);
                let (_, ub) = model.multiply(&u, &b);
                assert!(model.degree(&ua) < model.degree(&ub));
                let (_, au) = model.multiply(&a, &u);
                let (_, bu) = model.multiply(&b, &u);
                assert!(model.degree(&au) < model.degree(&bu));
            }
        }
    }
}
