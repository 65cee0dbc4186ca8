//! Exact Laurent polynomials and the Kauffman bracket state sum.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, GeneratorKind};
use crate::invariants::{writhe, InvariantError};

/// An integer Laurent polynomial in one variable. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<(i64, i64)>", from = "Vec<(i64, i64)>")]
pub struct LaurentPoly {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry(exp).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == LaurentPoly::one()
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = LaurentPoly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Substitutes `x -> x^k`.
    pub fn scale_exponents(&self, k: i64) -> Self {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (e * k, c)))
    }

    /// Renders with the given variable name, highest power first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().map(|(&e, &c)| (e, c)).enumerate() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let mono = match e {
                0 => String::new(),
                1 => var.to_owned(),
                e => format!("{var}^{e}"),
            };
            match (mag, mono.is_empty()) {
                (m, true) => out.push_str(&m.to_string()),
                (1, false) => out.push_str(&mono),
                (m, false) => out.push_str(&format!("{m}{mono}")),
            }
        }
        out
    }
}

impl From<LaurentPoly> for Vec<(i64, i64)> {
    fn from(p: LaurentPoly) -> Self {
        p.terms.into_iter().collect()
    }
}

impl From<Vec<(i64, i64)>> for LaurentPoly {
    fn from(v: Vec<(i64, i64)>) -> Self {
        LaurentPoly::from_terms(v)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("A"))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (e, -c)))
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

pub const DEFAULT_CROSSING_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the bracket needs a closed diagram")]
    NotClosed,
    #[error("the bracket is only defined over the cap/cup signature")]
    NamedGenerator,
    #[error("{count} crossings exceed the limit of {limit}")]
    TooManyCrossings { count: usize, limit: usize },
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

struct Dsu(Vec<u32>);

impl Dsu {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.0[a.max(b) as usize] = a.min(b);
        true
    }
}

/// Segment graph of a closed diagram with its crossings left open.
struct StateModel {
    nodes: usize,
    fixed: Vec<(u32, u32)>,
    /// Per crossing: sign and the (top-left, top-right, bottom-left,
    /// bottom-right) segments.
    crossings: Vec<(i64, [u32; 4])>,
}

impl StateModel {
    fn new(d: &Diagram) -> Self {
        let widths = d.widths();
        let mut base = Vec::with_capacity(widths.len());
        let mut total = 0u32;
        for &w in &widths {
            base.push(total);
            total += w as u32;
        }
        let id = |level: usize, pos: usize| base[level] + pos as u32;
        let mut fixed = Vec::new();
        let mut crossings = Vec::new();
        for (l, s) in d.slices().iter().enumerate() {
            let (m, n) = d.arity(s.kind);
            let q = s.offset;
            for pos in 0..widths[l] {
                if pos < q {
                    fixed.push((id(l, pos), id(l + 1, pos)));
                } else if pos >= q + m {
                    fixed.push((id(l, pos), id(l + 1, pos + n - m)));
                }
            }
            match s.kind {
                GeneratorKind::CapR | GeneratorKind::CapL => fixed.push((id(l + 1, q), id(l + 1, q + 1))),
                GeneratorKind::CupR | GeneratorKind::CupL => fixed.push((id(l, q), id(l, q + 1))),
                k => crossings.push((
                    k.braid_sign().expect("only braids remain"),
                    [id(l, q), id(l, q + 1), id(l + 1, q), id(l + 1, q + 1)],
                )),
            }
        }
        StateModel {
            nodes: total as usize,
            fixed,
            crossings,
        }
    }

    /// Components after removing each crossing: `vertical[i]` joins the
    /// strands straight down, otherwise they turn back.
    fn loops(&self, state: u64) -> u32 {
        let mut dsu = Dsu((0..self.nodes as u32).collect());
        let mut comps = self.nodes as u32;
        for &(a, b) in &self.fixed {
            comps -= u32::from(dsu.union(a, b));
        }
        for (i, &(_, [tl, tr, bl, br])) in self.crossings.iter().enumerate() {
            let (x, y) = if state >> i & 1 == 1 {
                ((tl, bl), (tr, br))
            } else {
                ((tl, tr), (bl, br))
            };
            comps -= u32::from(dsu.union(x.0, x.1));
            comps -= u32::from(dsu.union(y.0, y.1));
        }
        comps
    }
}

/// `<D>` by summing over all `2^c` smoothings.
pub fn kauffman_bracket(d: &Diagram) -> Result<LaurentPoly, OracleError> {
    kauffman_bracket_with_limit(d, DEFAULT_CROSSING_LIMIT)
}

pub fn kauffman_bracket_with_limit(d: &Diagram, limit: usize) -> Result<LaurentPoly, OracleError> {
    use rayon::prelude::*;
    if !d.is_closed() {
        return Err(OracleError::NotClosed);
    }
    if !d.signature().is_cc() {
        return Err(OracleError::NamedGenerator);
    }
    let count = d.crossing_count();
    if count > limit || count >= 63 {
        return Err(OracleError::TooManyCrossings { count, limit });
    }
    let model = StateModel::new(d);
    // Each state contributes A^(a - b) d^(loops - 1); tally (a - b, loops).
    let tally = |state: u64| -> (i64, u32) {
        let mut exp = 0;
        for (i, &(sign, _)) in model.crossings.iter().enumerate() {
            // a vertical smoothing of a positive crossing has weight A
            let vertical = state >> i & 1 == 1;
            exp += if vertical == (sign > 0) { 1 } else { -1 };
        }
        (exp, model.loops(state))
    };
    let states = 1u64 << count;
    let counts: HashMap<(i64, u32), i64> = (0..states)
        .into_par_iter()
        .fold(HashMap::new, |mut acc, s| {
            *acc.entry(tally(s)).or_insert(0) += 1;
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let loop_value = LaurentPoly::from_terms([(2, -1), (-2, -1)]);
    let max_loops = counts.keys().map(|&(_, l)| l).max().unwrap_or(1);
    let powers: Vec<LaurentPoly> = (0..max_loops).map(|k| loop_value.pow(k)).collect();
    let mut total = LaurentPoly::zero();
    for ((exp, loops), n) in counts {
        total = &total + &(&LaurentPoly::monomial(n, exp) * &powers[loops as usize - 1]);
    }
    Ok(total)
}

/// `(-A^3)^(-W) <D>`, invariant under all three Reidemeister moves.
pub fn normalized_invariant(d: &Diagram) -> Result<LaurentPoly, OracleError> {
    normalized_invariant_with_limit(d, DEFAULT_CROSSING_LIMIT)
}

pub fn normalized_invariant_with_limit(d: &Diagram, limit: usize) -> Result<LaurentPoly, OracleError> {
    let bracket = kauffman_bracket_with_limit(d, limit)?;
    let w = writhe(d)?;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    Ok(&LaurentPoly::monomial(sign, -3 * w) * &bracket)
}

/// `consistent-with-unknot` when the invariant is 1, `knotted` otherwise.
pub fn verdict(invariant: &LaurentPoly) -> &'static str {
    if invariant.is_one() {
        "consistent-with-unknot"
    } else {
        "knotted"
    }
}
