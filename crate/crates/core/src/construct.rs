//! Constructions: the straightening gadgets, crossing-free realizations of
//! cap-cup cycles, twisted realizations and the knot-to-word-problem
//! reduction.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{serialize_diagram, trace_strands, Diagram, GeneratorKind, Orientation, Slice};
use crate::invariants::{
    bridge_number, cap_cup_cycle, turning_number, writhe, CapCupCycle, CapCupSymbol, InvariantError, TwistedCapCup,
    TwistedCapCupCycle,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("precondition violated: {0}")]
    PrecondViolation(String),
    #[error("diagram is not a knot (closed, single component)")]
    NotAKnot,
    #[error(transparent)]
    Invariant(InvariantError),
}

impl From<InvariantError> for ConstructError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::NotAKnot => ConstructError::NotAKnot,
            other => ConstructError::Invariant(other),
        }
    }
}

fn precond(msg: impl Into<String>) -> ConstructError {
    ConstructError::PrecondViolation(msg.into())
}

use GeneratorKind::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetName {
    A,
    B,
    C,
    D,
}

impl GadgetName {
    pub const ALL: [GadgetName; 4] = [GadgetName::A, GadgetName::B, GadgetName::C, GadgetName::D];

    /// The (writhe, turning number) pair the gadget realizes.
    pub fn invariants(self) -> (i64, i64) {
        match self {
            GadgetName::A => (1, 2),
            GadgetName::B => (-1, -2),
            GadgetName::C => (1, -2),
            GadgetName::D => (-1, 2),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "a" | "A" => Some(GadgetName::A),
            "b" | "B" => Some(GadgetName::B),
            "c" | "C" => Some(GadgetName::C),
            "d" | "D" => Some(GadgetName::D),
            _ => None,
        }
    }
}

impl fmt::Display for GadgetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GadgetName::A => "a",
            GadgetName::B => "b",
            GadgetName::C => "c",
            GadgetName::D => "d",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub name: GadgetName,
    pub diagram: Diagram,
}

fn gadget_slices_up(name: GadgetName) -> [Slice; 3] {
    match name {
        GadgetName::A => [Slice::new(CapR, 0), Slice::new(BraidNeg, 1), Slice::new(CupL, 1)],
        GadgetName::B => [Slice::new(CapL, 1), Slice::new(BraidPos, 0), Slice::new(CupR, 0)],
        GadgetName::C => [Slice::new(CapL, 1), Slice::new(BraidNeg, 0), Slice::new(CupR, 0)],
        GadgetName::D => [Slice::new(CapR, 0), Slice::new(BraidPos, 1), Slice::new(CupL, 1)],
    }
}

/// Single-wire kinks on a downward wire, found by enumerating all
/// cap-braid-cup composites and reading off their invariants.
fn gadget_slices_down(name: GadgetName) -> [Slice; 3] {
    static TABLE: OnceLock<Vec<(GadgetName, [Slice; 3])>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut found = Vec::new();
        for target in GadgetName::ALL {
            'search: for cap in [CapR, CapL] {
                for cap_at in 0..2 {
                    for braid in [BraidPos, BraidNeg] {
                        for braid_at in 0..2 {
                            for cup in [CupR, CupL] {
                                for cup_at in 0..2 {
                                    let slices = [
                                        Slice::new(cap, cap_at),
                                        Slice::new(braid, braid_at),
                                        Slice::new(cup, cup_at),
                                    ];
                                    let Ok(d) = Diagram::cc(&[Orientation::Down], slices.to_vec()) else {
                                        continue;
                                    };
                                    if d.codomain().len() != 1 || trace_strands(&d).components() != 1 {
                                        continue;
                                    }
                                    if (writhe(&d), turning_number(&d))
                                        == (Ok(target.invariants().0), Ok(target.invariants().1))
                                    {
                                        found.push((target, slices));
                                        break 'search;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        found
    });
    table
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .expect("every gadget has a downward version")
}

fn gadget_slices(name: GadgetName, wire: Orientation) -> [Slice; 3] {
    match wire {
        Orientation::Up => gadget_slices_up(name),
        Orientation::Down => gadget_slices_down(name),
    }
}

/// The gadget as a diagram on a single upward wire.
pub fn gadget(name: GadgetName) -> Diagram {
    gadget_on(name, Orientation::Up)
}

/// The gadget on a single wire of the given orientation.
pub fn gadget_on(name: GadgetName, wire: Orientation) -> Diagram {
    Diagram::cc(&[wire], gadget_slices(name, wire).to_vec()).expect("gadgets typecheck")
}

/// Slices of a single-wire diagram with writhe `w` and turning number `t`.
fn straight_slices(w: i64, t: i64, wire: Orientation) -> Result<Vec<Slice>, ConstructError> {
    if (2 * w + t).rem_euclid(4) != 0 {
        return Err(precond(format!("2w + t = {} is not a multiple of 4", 2 * w + t)));
    }
    let p = (2 * w + t) / 4;
    let q = (2 * w - t) / 4;
    let mut out = Vec::with_capacity(3 * (p.unsigned_abs() + q.unsigned_abs()) as usize);
    let pg = if p > 0 { GadgetName::A } else { GadgetName::B };
    let qg = if q > 0 { GadgetName::C } else { GadgetName::D };
    for _ in 0..p.unsigned_abs() {
        out.extend(gadget_slices(pg, wire));
    }
    for _ in 0..q.unsigned_abs() {
        out.extend(gadget_slices(qg, wire));
    }
    Ok(out)
}

/// A diagram `^ -> ^` with writhe `w` and turning number `t`, built from
/// copies of the four gadgets. Requires `2w + t` to be divisible by 4.
pub fn writhe_turning_straight(w: i64, t: i64) -> Result<Diagram, ConstructError> {
    writhe_turning_straight_on(w, t, Orientation::Up)
}

pub fn writhe_turning_straight_on(w: i64, t: i64, wire: Orientation) -> Result<Diagram, ConstructError> {
    Ok(Diagram::cc(&[wire], straight_slices(w, t, wire)?).expect("gadget chains typecheck"))
}

fn shifted(slices: impl IntoIterator<Item = Slice>, by: usize) -> impl Iterator<Item = Slice> {
    slices.into_iter().map(move |s| Slice::new(s.kind, s.offset + by))
}

fn require_knot(d: &Diagram) -> Result<(), ConstructError> {
    if !d.signature().is_cc() || !crate::diagram::is_knot(d) {
        return Err(ConstructError::NotAKnot);
    }
    Ok(())
}

/// Inserts a straightening chain into `g` so that its writhe and turning
/// number match those of `f`. The chain goes on the wire entering the
/// earliest cup of `g`.
pub fn pad_to_match(f: &Diagram, g: &Diagram) -> Result<Diagram, ConstructError> {
    require_knot(f)?;
    require_knot(g)?;
    let dw = writhe(f)? - writhe(g)?;
    let dt = turning_number(f)? - turning_number(g)?;
    if (2 * dw + dt).rem_euclid(4) != 0 {
        return Err(precond(format!("2dW + dT = {} is not a multiple of 4", 2 * dw + dt)));
    }
    if dw == 0 && dt == 0 {
        return Ok(g.clone());
    }
    let (at, cup) = g
        .slices()
        .iter()
        .enumerate()
        .find(|(_, s)| s.kind.is_cup())
        .map(|(i, s)| (i, *s))
        .expect("knots have a cup");
    let leg = match cup.kind {
        CupR => cup.offset,
        _ => cup.offset + 1,
    };
    let h = straight_slices(dw, dt, Orientation::Down)?;
    let mut slices = g.slices()[..at].to_vec();
    slices.extend(shifted(h, leg));
    slices.extend_from_slice(&g.slices()[at..]);
    Ok(g.with_slices_trusted(slices))
}

fn check_realizable(seq: &[CapCupSymbol]) -> Result<(), ConstructError> {
    let n = seq.len();
    if n == 0 || !n.is_multiple_of(2) || (0..n).any(|i| seq[i].is_cap() == seq[(i + 1) % n].is_cap()) {
        return Err(precond("caps and cups must alternate"));
    }
    let t: i64 = seq.iter().map(|s| s.turning()).sum();
    if t.abs() != 2 {
        return Err(precond(format!("turning number {t} is not +2 or -2")));
    }
    Ok(())
}

/// Crossing-free realization of a cyclic sequence in the given order.
/// Returns the slices and the slice index of every element.
fn realize_sequence(seq: &[CapCupSymbol]) -> (Vec<Slice>, Vec<usize>) {
    use CapCupSymbol as S;
    let n = seq.len();
    if n == 2 {
        let (cap_first, cap, cup) = if seq[0].is_cap() {
            (true, seq[0], seq[1])
        } else {
            (false, seq[1], seq[0])
        };
        let slices = vec![Slice::new(cap.kind(), 0), Slice::new(cup.kind(), 0)];
        return (slices, if cap_first { vec![0, 1] } else { vec![1, 0] });
    }
    let j = (0..n)
        .find(|&j| seq[j].turning() + seq[(j + 1) % n].turning() == 0)
        .expect("an opposite pair exists when |T| = 2 and n >= 4");
    let j1 = (j + 1) % n;
    let (x, y) = (seq[j], seq[j1]);
    let p_orig = (j + n - 1) % n;
    let rest_positions: Vec<usize> = (0..n).filter(|&i| i != j && i != j1).collect();
    let rest: Vec<CapCupSymbol> = rest_positions.iter().map(|&i| seq[i]).collect();
    let (mut slices, rest_idx) = realize_sequence(&rest);
    let p_pos = rest_positions
        .iter()
        .position(|&i| i == p_orig)
        .expect("predecessor survives");
    let s = rest_idx[p_pos];
    let p = slices[s];
    let (insert_at, pair, x_idx, y_idx) = if p.kind.is_cap() {
        let k = crate::diagram::strands::cap_exit_leg(p.kind, p.offset);
        let pair = match (x, y) {
            (S::CupR, S::CapR) => [Slice::new(CapR, k + 1), Slice::new(CupR, k)],
            (S::CupL, S::CapL) => [Slice::new(CapL, k), Slice::new(CupL, k + 1)],
            _ => unreachable!("after a cap comes a cup of opposite turning"),
        };
        (s + 1, pair, s + 2, s + 1)
    } else {
        let k = match p.kind {
            CupR => p.offset + 1,
            _ => p.offset,
        };
        let pair = match (x, y) {
            (S::CapL, S::CupL) => [Slice::new(CapL, k + 1), Slice::new(CupL, k)],
            (S::CapR, S::CupR) => [Slice::new(CapR, k), Slice::new(CupR, k + 1)],
            _ => unreachable!("after a cup comes a cap of opposite turning"),
        };
        (s, pair, s, s + 1)
    };
    slices.splice(insert_at..insert_at, pair);
    let mut idx = vec![0usize; n];
    for (r, &orig) in rest_positions.iter().enumerate() {
        let i = rest_idx[r];
        idx[orig] = if i >= insert_at { i + 2 } else { i };
    }
    idx[j] = x_idx;
    idx[j1] = y_idx;
    (slices, idx)
}

/// A crossing-free knot diagram whose cap-cup cycle is `c`. Requires the
/// turning number of `c` to be +2 or -2.
pub fn realize_cycle(c: &CapCupCycle) -> Result<Diagram, ConstructError> {
    check_realizable(c.elements())?;
    let (slices, _) = realize_sequence(c.elements());
    Ok(Diagram::cc(&[], slices).expect("realizations typecheck"))
}

/// Writhe contributed by one braid of the given kind on the two legs of a cap.
fn leg_braid_writhe(kind: GeneratorKind) -> i64 {
    let d = Diagram::cc(&[], vec![Slice::new(CapR, 0), Slice::new(kind, 0)]).expect("typechecks");
    writhe(&d).expect("oriented")
}

/// Realization of a twisted cycle: realize its signature without crossings,
/// then replace every cap and cup by its twisted version.
pub fn realize_twisted(c: &TwistedCapCupCycle) -> Result<Diagram, ConstructError> {
    let sig: Vec<CapCupSymbol> = c.elements().iter().map(|e| e.signature()).collect();
    check_realizable(&sig)?;
    let (mut slices, idx) = realize_sequence(&sig);
    let positive = if leg_braid_writhe(BraidPos) > 0 {
        BraidPos
    } else {
        BraidNeg
    };
    let negative = positive.inverse_braid().expect("braid");
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by_key(|&j| std::cmp::Reverse(idx[j]));
    for j in order {
        let TwistedCapCup { symbol, writhe: w } = c.elements()[j];
        let at = idx[j];
        let offset = slices[at].offset;
        slices[at] = Slice::new(symbol.kind(), offset);
        if w == 0 {
            continue;
        }
        let braid = Slice::new(if w > 0 { positive } else { negative }, offset);
        let twists = std::iter::repeat_n(braid, w.unsigned_abs() as usize);
        let pos = if symbol.is_cap() { at + 1 } else { at };
        slices.splice(pos..pos, twists);
    }
    Ok(Diagram::cc(&[], slices).expect("twisted realizations typecheck"))
}

/// Distributes writhe `w` over the cycle `c` so that the twisted cycle has
/// turning number +-2, following the three cases of the construction.
pub fn twist_for(c: &CapCupCycle, w: i64) -> Result<TwistedCapCupCycle, ConstructError> {
    let t = c.turning();
    if c.is_empty() {
        return Err(precond("empty cycle"));
    }
    if (w + t / 2).rem_euclid(2) != 1 {
        return Err(precond(format!("w + T/2 = {} is not odd", w + t / 2)));
    }
    let mut elems: Vec<TwistedCapCup> = c.elements().iter().map(|&s| TwistedCapCup::new(s, 0)).collect();
    let total = |e: &[TwistedCapCup]| e.iter().map(|x| x.turning()).sum::<i64>();
    loop {
        let t = total(&elems);
        if t.abs() <= 2 {
            break;
        }
        let sign = t.signum();
        let mut picks = elems
            .iter()
            .enumerate()
            .filter(|(_, e)| e.turning() == sign)
            .map(|(i, _)| i);
        let (i1, i2) = (picks.next().expect("|T| > 2"), picks.next().expect("|T| > 2"));
        elems[i1].writhe += 1;
        elems[i2].writhe -= 1;
    }
    elems[0].writhe += w;
    Ok(TwistedCapCupCycle::from_sequence(elems)?)
}

/// The canonical unknot diagram with cap-cup cycle `c` and writhe `w`.
/// Requires `w + T(c)/2` to be odd.
pub fn realize_cycle_with_writhe(c: &CapCupCycle, w: i64) -> Result<Diagram, ConstructError> {
    realize_twisted(&twist_for(c, w)?)
}

/// Moves one unit of writhe from element `i` to the next element.
pub fn diamond_step(c: &TwistedCapCupCycle, i: usize) -> TwistedCapCupCycle {
    let mut elems = c.elements().to_vec();
    let n = elems.len();
    assert!(i < n, "index {i} out of range for a cycle of length {n}");
    elems[i].writhe -= 1;
    elems[(i + 1) % n].writhe += 1;
    TwistedCapCupCycle::from_sequence(elems).expect("alternation unchanged")
}

/// A knot paired with the canonical unknot sharing its writhe and cap-cup
/// cycle. The knot is trivial iff the two are equal in CC.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordProblemInstance {
    pub lhs: Diagram,
    pub rhs: Diagram,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceManifest {
    pub writhe: i64,
    pub turning: i64,
    pub cycle: CapCupCycle,
    pub bridge_lhs: usize,
    pub bridge_rhs: usize,
}

impl WordProblemInstance {
    pub fn manifest(&self) -> InstanceManifest {
        InstanceManifest {
            writhe: writhe(&self.lhs).expect("oriented"),
            turning: turning_number(&self.lhs).expect("cc"),
            cycle: cap_cup_cycle(&self.lhs).expect("knot"),
            bridge_lhs: bridge_number(&self.lhs).expect("closed"),
            bridge_rhs: bridge_number(&self.rhs).expect("closed"),
        }
    }

    pub fn lhs_text(&self) -> String {
        serialize_diagram(&self.lhs)
    }

    pub fn rhs_text(&self) -> String {
        serialize_diagram(&self.rhs)
    }

    pub fn size(&self) -> usize {
        self.lhs.len() + self.rhs.len()
    }
}

pub fn build_instance(k: &Diagram) -> Result<WordProblemInstance, ConstructError> {
    require_knot(k)?;
    let rhs = realize_cycle_with_writhe(&cap_cup_cycle(k)?, writhe(k)?)?;
    Ok(WordProblemInstance { lhs: k.clone(), rhs })
}

/// Every alternating cycle of the given even length (up to rotation).
pub fn all_cycles(len: usize) -> Vec<CapCupCycle> {
    let mut out = std::collections::BTreeSet::new();
    if len == 0 || !len.is_multiple_of(2) {
        return Vec::new();
    }
    for bits in 0u32..(1 << len) {
        let seq: Vec<CapCupSymbol> = (0..len)
            .map(|i| {
                let right = bits >> i & 1 == 0;
                match (i % 2 == 0, right) {
                    (true, true) => CapCupSymbol::CapR,
                    (true, false) => CapCupSymbol::CapL,
                    (false, true) => CapCupSymbol::CupR,
                    (false, false) => CapCupSymbol::CupL,
                }
            })
            .collect();
        out.insert(CapCupCycle::new(seq).expect("alternating"));
    }
    out.into_iter().collect()
}
