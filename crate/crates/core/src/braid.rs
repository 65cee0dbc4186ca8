//! Braid words: handle reduction for the word problem in `B_n`, plus a
//! bounded rewrite search and a Burau check used to cross-validate it.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, GeneratorKind, Orientation, Slice};
use crate::oracle::LaurentPoly;

pub const DEFAULT_FUSE: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("not a pure braid: {0}")]
    NotPureBraid(String),
    #[error("strand mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("generator s{index} out of range for {n} strands")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("bad braid word token `{0}`")]
    Parse(String),
    #[error("handle reduction exceeded {0} steps")]
    FuseExceeded(u64),
}

/// `sigma_index^sign`, with `1 <= index <= n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub index: usize,
    pub sign: i8,
}

impl Letter {
    pub fn new(index: usize, sign: i8) -> Self {
        Letter {
            index,
            sign: if sign < 0 { -1 } else { 1 },
        }
    }

    pub fn inverse(self) -> Self {
        Letter {
            sign: -self.sign,
            ..self
        }
    }

    fn signed(self) -> i32 {
        self.index as i32 * i32::from(self.sign)
    }

    fn from_signed(x: i32) -> Self {
        Letter::new(x.unsigned_abs() as usize, x.signum() as i8)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    n: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self, BraidError> {
        if n == 0 {
            return Err(BraidError::NotPureBraid("a braid needs at least one strand".into()));
        }
        if let Some(l) = letters.iter().find(|l| l.index == 0 || l.index >= n) {
            return Err(BraidError::IndexOutOfRange { index: l.index, n });
        }
        Ok(BraidWord { n, letters })
    }

    pub fn identity(n: usize) -> Result<Self, BraidError> {
        BraidWord::new(n, Vec::new())
    }

    /// Parses `s1 s2^-1 s1`; `e`, `1` or an empty string is the identity.
    pub fn parse(n: usize, text: &str) -> Result<Self, BraidError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "e" || tok == "1" {
                continue;
            }
            let bad = || BraidError::Parse(tok.to_owned());
            let body = tok.strip_prefix('s').ok_or_else(bad)?;
            let (idx, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e.trim_start_matches('+').parse::<i64>().map_err(|_| bad())?),
                None => (body, 1),
            };
            let index: usize = idx.parse().map_err(|_| bad())?;
            if exp == 0 {
                return Err(bad());
            }
            let sign = if exp < 0 { -1 } else { 1 };
            letters.extend(std::iter::repeat_n(
                Letter::new(index, sign),
                exp.unsigned_abs() as usize,
            ));
        }
        BraidWord::new(n, letters)
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| i64::from(l.sign)).sum()
    }

    pub fn inverse(&self) -> Self {
        BraidWord {
            n: self.n,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &BraidWord) -> Result<Self, BraidError> {
        self.same_strands(other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { n: self.n, letters })
    }

    fn same_strands(&self, other: &BraidWord) -> Result<(), BraidError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(BraidError::StrandMismatch(self.n, other.n))
        }
    }

    /// Reads a diagram made only of braidings on `n` wires of one object.
    pub fn from_diagram(d: &Diagram) -> Result<Self, BraidError> {
        let dom = d.domain().wires();
        let Some(first) = dom.first() else {
            return Err(BraidError::NotPureBraid("empty domain".into()));
        };
        if dom.iter().any(|o| o != first) {
            return Err(BraidError::NotPureBraid("wires carry different objects".into()));
        }
        let letters = d
            .slices()
            .iter()
            .map(|s| match s.kind.braid_sign() {
                Some(sign) => Ok(Letter::new(s.offset + 1, sign as i8)),
                None => Err(BraidError::NotPureBraid(format!("{} slice", s.kind.keyword()))),
            })
            .collect::<Result<_, _>>()?;
        BraidWord::new(dom.len(), letters)
    }

    /// The word as a diagram on `n` wires of the given orientation.
    pub fn to_diagram(&self, wire: Orientation) -> Result<Diagram, DiagramError> {
        let slices = self
            .letters
            .iter()
            .map(|l| Slice::new(GeneratorKind::braid_of_sign(i64::from(l.sign)), l.index - 1))
            .collect();
        Diagram::cc(&vec![wire; self.n], slices)
    }

    /// Handle-reduces the word; the result is empty exactly when the braid
    /// is trivial.
    pub fn handle_reduced(&self, fuse: u64) -> Result<BraidWord, BraidError> {
        let mut w: Vec<i32> = self.letters.iter().map(|l| l.signed()).collect();
        handle_reduce(&mut w, fuse)?;
        Ok(BraidWord {
            n: self.n,
            letters: w.into_iter().map(Letter::from_signed).collect(),
        })
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "s{}", l.index)?;
            if l.sign < 0 {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

// Always reduces the handle whose right end comes first; such a handle
// contains no nested handle, so the reduction is permitted.
fn handle_reduce(w: &mut Vec<i32>, fuse: u64) -> Result<u64, BraidError> {
    let mut steps = 0u64;
    let mut q = 0;
    while q < w.len() {
        let x = w[q];
        let i = x.abs();
        let mut start = None;
        for p in (0..q).rev() {
            let j = w[p].abs();
            if j == i {
                if w[p] == -x {
                    start = Some(p);
                }
                break;
            }
            if j == i - 1 {
                break;
            }
        }
        let Some(p) = start else {
            q += 1;
            continue;
        };
        steps += 1;
        if steps > fuse {
            return Err(BraidError::FuseExceeded(fuse));
        }
        let e = w[p].signum();
        let mut inner = Vec::with_capacity(q - p);
        for &y in &w[p + 1..q] {
            if y.abs() == i + 1 {
                inner.extend([-e * (i + 1), y.signum() * i, e * (i + 1)]);
            } else {
                inner.push(y);
            }
        }
        w.splice(p..=q, inner);
        q = p;
    }
    Ok(steps)
}

pub fn is_trivial(w: &BraidWord) -> Result<bool, BraidError> {
    is_trivial_with_fuse(w, DEFAULT_FUSE)
}

pub fn is_trivial_with_fuse(w: &BraidWord, fuse: u64) -> Result<bool, BraidError> {
    Ok(w.handle_reduced(fuse)?.is_empty())
}

pub fn braid_equal(u: &BraidWord, v: &BraidWord) -> Result<bool, BraidError> {
    braid_equal_with_fuse(u, v, DEFAULT_FUSE)
}

pub fn braid_equal_with_fuse(u: &BraidWord, v: &BraidWord, fuse: u64) -> Result<bool, BraidError> {
    is_trivial_with_fuse(&u.concat(&v.inverse())?, fuse)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleVerdict {
    Equal,
    NotEqual,
    Unknown,
}

/// Neighbours of a word under the group presentation: free cancellation
/// and insertion, the braid relation, and far commutation. Every move is
/// reversible, so the resulting graph is undirected.
fn relator_moves(w: &[i32], n: usize, max_len: usize, mut visit: impl FnMut(Vec<i32>)) {
    let len = w.len();
    for k in 0..len.saturating_sub(1) {
        let (a, b) = (w[k], w[k + 1]);
        if a == -b {
            let mut v = w.to_vec();
            v.drain(k..k + 2);
            visit(v);
        } else if (a.abs() - b.abs()).abs() >= 2 {
            let mut v = w.to_vec();
            v.swap(k, k + 1);
            visit(v);
        }
        if k + 2 < len && w[k + 2] == a && (a.abs() - b.abs()).abs() == 1 && a.signum() == b.signum() {
            let mut v = w.to_vec();
            v[k..k + 3].copy_from_slice(&[b, a, b]);
            visit(v);
        }
    }
    if len + 2 <= max_len {
        for k in 0..=len {
            for i in 1..n as i32 {
                for x in [i, -i] {
                    let mut v = w.to_vec();
                    v.splice(k..k, [x, -x]);
                    visit(v);
                }
            }
        }
    }
}

/// Unreduced Burau matrix over `Z[t, t^-1]`, row-major `n x n`.
pub fn burau_matrix(w: &BraidWord) -> Vec<LaurentPoly> {
    let n = w.n;
    let one = LaurentPoly::one();
    let t = LaurentPoly::monomial(1, 1);
    let ti = LaurentPoly::monomial(1, -1);
    let mut m = vec![LaurentPoly::zero(); n * n];
    for r in 0..n {
        m[r * n + r] = one.clone();
    }
    for l in &w.letters {
        let (a, b) = (l.index - 1, l.index);
        // right multiplication only touches columns a and b
        let block = if l.sign > 0 {
            [&one - &t, t.clone(), one.clone(), LaurentPoly::zero()]
        } else {
            [LaurentPoly::zero(), one.clone(), ti.clone(), &one - &ti]
        };
        for r in 0..n {
            let (x, y) = (m[r * n + a].clone(), m[r * n + b].clone());
            m[r * n + a] = &(&x * &block[0]) + &(&y * &block[2]);
            m[r * n + b] = &(&x * &block[1]) + &(&y * &block[3]);
        }
    }
    m
}

/// Breadth-first search from `u` for `v` through words of length at most
/// `max_len`. A path gives `Equal`; differing Burau matrices give
/// `NotEqual`; anything else is `Unknown`.
pub fn bfs_oracle_equal(u: &BraidWord, v: &BraidWord, max_len: usize) -> Result<OracleVerdict, BraidError> {
    u.same_strands(v)?;
    let start: Vec<i32> = u.letters.iter().map(|l| l.signed()).collect();
    let goal: Vec<i32> = v.letters.iter().map(|l| l.signed()).collect();
    if start == goal {
        return Ok(OracleVerdict::Equal);
    }
    if start.len() <= max_len && goal.len() <= max_len {
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(w) = queue.pop_front() {
            let mut found = false;
            relator_moves(&w, u.n, max_len, |x| {
                if x == goal {
                    found = true;
                }
                if !found && seen.insert(x.clone()) {
                    queue.push_back(x);
                }
            });
            if found {
                return Ok(OracleVerdict::Equal);
            }
        }
    }
    Ok(if burau_matrix(u) != burau_matrix(v) {
        OracleVerdict::NotEqual
    } else {
        OracleVerdict::Unknown
    })
}

/// The connected components of `bfs_oracle_equal`'s search graph over every
/// word up to `max_len`, for checking many pairs at once.
pub struct RelatorClosure {
    n: usize,
    max_len: usize,
    offsets: Vec<usize>,
    parent: Vec<u32>,
    burau: Vec<Vec<LaurentPoly>>,
}

impl RelatorClosure {
    pub fn new(n: usize, max_len: usize) -> Self {
        assert!(n >= 2, "closure needs at least one generator");
        let k = 2 * (n - 1);
        let mut offsets = vec![0usize];
        for len in 0..=max_len {
            offsets.push(offsets[len] + k.pow(len as u32));
        }
        let total = offsets[max_len + 1];
        let mut closure = RelatorClosure {
            n,
            max_len,
            offsets,
            parent: (0..total as u32).collect(),
            burau: Vec::new(),
        };
        for idx in 0..total {
            let w = closure.word(idx);
            let mut links = Vec::new();
            // insertions are the reverse of cancellations found from the longer word
            relator_moves(&w, n, w.len(), |x| links.push(closure.index(&x)));
            for j in links {
                closure.union(idx as u32, j as u32);
            }
        }
        closure
    }

    fn letter_code(x: i32) -> usize {
        2 * (x.unsigned_abs() as usize - 1) + usize::from(x < 0)
    }

    fn index(&self, w: &[i32]) -> usize {
        let k = 2 * (self.n - 1);
        let mut v = 0;
        for &x in w.iter().rev() {
            v = v * k + Self::letter_code(x);
        }
        self.offsets[w.len()] + v
    }

    fn word(&self, idx: usize) -> Vec<i32> {
        let k = 2 * (self.n - 1);
        let len = self.offsets.partition_point(|&o| o <= idx) - 1;
        let mut v = idx - self.offsets[len];
        (0..len)
            .map(|_| {
                let c = v % k;
                v /= k;
                let i = (c / 2 + 1) as i32;
                if c % 2 == 1 {
                    -i
                } else {
                    i
                }
            })
            .collect()
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b) as usize] = a.min(b);
        }
    }

    pub fn word_count(&self) -> usize {
        self.parent.len()
    }

    /// Same verdict as `bfs_oracle_equal(u, v, max_len)`.
    pub fn verdict(&mut self, u: &BraidWord, v: &BraidWord) -> OracleVerdict {
        assert!(u.n == self.n && v.n == self.n && u.len() <= self.max_len && v.len() <= self.max_len);
        let iu = self.index(&u.letters.iter().map(|l| l.signed()).collect::<Vec<_>>());
        let iv = self.index(&v.letters.iter().map(|l| l.signed()).collect::<Vec<_>>());
        if self.find(iu as u32) == self.find(iv as u32) {
            OracleVerdict::Equal
        } else if self.burau_of(iu).to_vec() != self.burau_of(iv) {
            OracleVerdict::NotEqual
        } else {
            OracleVerdict::Unknown
        }
    }

    fn burau_of(&mut self, idx: usize) -> &[LaurentPoly] {
        if self.burau.is_empty() {
            self.burau = vec![Vec::new(); self.parent.len()];
        }
        if self.burau[idx].is_empty() {
            let letters = self.word(idx).into_iter().map(Letter::from_signed).collect();
            self.burau[idx] = burau_matrix(&BraidWord { n: self.n, letters });
        }
        &self.burau[idx]
    }
}
