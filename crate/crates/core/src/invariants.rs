//! Writhe, turning number, cap-cup cycles and bridge statistics.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{is_knot, trace_strands, Diagram, GeneratorKind, Object};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("diagram is not a knot (closed, single component)")]
    NotAKnot,
    #[error("crossing at slice {0} involves a wire without orientation")]
    UnorientedCrossing(usize),
    #[error("turning number is undefined for diagrams with named generators")]
    NamedGenerator,
    #[error("caps and cups do not alternate")]
    NotAlternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CapCupSymbol {
    #[serde(rename = "capR")]
    CapR,
    #[serde(rename = "capL")]
    CapL,
    #[serde(rename = "cupR")]
    CupR,
    #[serde(rename = "cupL")]
    CupL,
}

impl CapCupSymbol {
    pub const ALL: [CapCupSymbol; 4] = [
        CapCupSymbol::CapR,
        CapCupSymbol::CapL,
        CapCupSymbol::CupR,
        CapCupSymbol::CupL,
    ];

    pub fn from_kind(kind: GeneratorKind) -> Option<Self> {
        match kind {
            GeneratorKind::CapR => Some(CapCupSymbol::CapR),
            GeneratorKind::CapL => Some(CapCupSymbol::CapL),
            GeneratorKind::CupR => Some(CapCupSymbol::CupR),
            GeneratorKind::CupL => Some(CapCupSymbol::CupL),
            _ => None,
        }
    }

    pub fn kind(self) -> GeneratorKind {
        match self {
            CapCupSymbol::CapR => GeneratorKind::CapR,
            CapCupSymbol::CapL => GeneratorKind::CapL,
            CapCupSymbol::CupR => GeneratorKind::CupR,
            CapCupSymbol::CupL => GeneratorKind::CupL,
        }
    }

    pub fn is_cap(self) -> bool {
        matches!(self, CapCupSymbol::CapR | CapCupSymbol::CapL)
    }

    /// Local turning number: capR and cupL turn +1, capL and cupR turn -1.
    pub fn turning(self) -> i64 {
        match self {
            CapCupSymbol::CapR | CapCupSymbol::CupL => 1,
            CapCupSymbol::CapL | CapCupSymbol::CupR => -1,
        }
    }

    /// Same cap or cup with the wire orientation reversed.
    pub fn flipped(self) -> Self {
        match self {
            CapCupSymbol::CapR => CapCupSymbol::CapL,
            CapCupSymbol::CapL => CapCupSymbol::CapR,
            CapCupSymbol::CupR => CapCupSymbol::CupL,
            CapCupSymbol::CupL => CapCupSymbol::CupR,
        }
    }

    pub fn name(self) -> &'static str {
        self.kind().keyword()
    }
}

impl fmt::Display for CapCupSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn alternates<T>(items: &[T], is_cap: impl Fn(&T) -> bool) -> bool {
    let n = items.len();
    n.is_multiple_of(2) && (0..n).all(|i| is_cap(&items[i]) != is_cap(&items[(i + 1) % n]))
}

fn min_rotation<T: Ord + Clone>(items: &[T]) -> Vec<T> {
    let n = items.len();
    (0..n.max(1))
        .map(|r| {
            items[r.min(n)..]
                .iter()
                .chain(&items[..r.min(n)])
                .cloned()
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}

/// A cyclic alternating sequence of caps and cups, stored in its
/// lexicographically least rotation (capR < capL < cupR < cupL).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<CapCupSymbol>", into = "Vec<CapCupSymbol>")]
pub struct CapCupCycle {
    elements: Vec<CapCupSymbol>,
}

impl CapCupCycle {
    pub fn new(elements: Vec<CapCupSymbol>) -> Result<Self, InvariantError> {
        if !alternates(&elements, |s| s.is_cap()) {
            return Err(InvariantError::NotAlternating);
        }
        Ok(CapCupCycle {
            elements: min_rotation(&elements),
        })
    }

    pub fn elements(&self) -> &[CapCupSymbol] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn turning(&self) -> i64 {
        self.elements.iter().map(|s| s.turning()).sum()
    }

    /// The same cycle with every writhe set to zero.
    pub fn untwisted(&self) -> TwistedCapCupCycle {
        TwistedCapCupCycle {
            elements: self
                .elements
                .iter()
                .map(|&symbol| TwistedCapCup { symbol, writhe: 0 })
                .collect(),
        }
    }
}

impl TryFrom<Vec<CapCupSymbol>> for CapCupCycle {
    type Error = InvariantError;
    fn try_from(v: Vec<CapCupSymbol>) -> Result<Self, Self::Error> {
        CapCupCycle::new(v)
    }
}

impl From<CapCupCycle> for Vec<CapCupSymbol> {
    fn from(c: CapCupCycle) -> Self {
        c.elements
    }
}

impl fmt::Display for CapCupCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

/// A cap or cup bundled with an integer writhe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwistedCapCup {
    pub symbol: CapCupSymbol,
    pub writhe: i64,
}

impl TwistedCapCup {
    pub fn new(symbol: CapCupSymbol, writhe: i64) -> Self {
        TwistedCapCup { symbol, writhe }
    }

    /// `(-1)^|w| * t(c)`
    pub fn turning(self) -> i64 {
        if self.writhe % 2 == 0 {
            self.symbol.turning()
        } else {
            -self.symbol.turning()
        }
    }

    /// The bare cap or cup left after absorbing the twists: the symbol itself
    /// for even writhe, its orientation flip for odd writhe.
    pub fn signature(self) -> CapCupSymbol {
        twisted_signature(self)
    }
}

pub fn twisted_signature(e: TwistedCapCup) -> CapCupSymbol {
    if e.writhe % 2 == 0 {
        e.symbol
    } else {
        e.symbol.flipped()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistedCapCupCycle {
    elements: Vec<TwistedCapCup>,
}

impl TwistedCapCupCycle {
    /// Validates alternation and stores the least rotation (by symbol, then writhe).
    pub fn new(elements: Vec<TwistedCapCup>) -> Result<Self, InvariantError> {
        if !alternates(&elements, |e| e.symbol.is_cap()) {
            return Err(InvariantError::NotAlternating);
        }
        Ok(TwistedCapCupCycle {
            elements: min_rotation(&elements),
        })
    }

    /// Keeps the given rotation. Used where element positions matter.
    pub fn from_sequence(elements: Vec<TwistedCapCup>) -> Result<Self, InvariantError> {
        if !alternates(&elements, |e| e.symbol.is_cap()) {
            return Err(InvariantError::NotAlternating);
        }
        Ok(TwistedCapCupCycle { elements })
    }

    pub fn elements(&self) -> &[TwistedCapCup] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn turning(&self) -> i64 {
        self.elements.iter().map(|e| e.turning()).sum()
    }

    pub fn writhe(&self) -> i64 {
        self.elements.iter().map(|e| e.writhe).sum()
    }

    /// Forgets the writhes.
    pub fn underlying(&self) -> CapCupCycle {
        CapCupCycle::new(self.elements.iter().map(|e| e.symbol).collect()).expect("alternation is preserved")
    }

    /// Element-wise signature.
    pub fn signature(&self) -> CapCupCycle {
        CapCupCycle::new(self.elements.iter().map(|e| e.signature()).collect())
            .expect("signatures preserve cap/cup type")
    }

    /// Cyclic equality (rotation-insensitive).
    pub fn cyclically_equal(&self, other: &TwistedCapCupCycle) -> bool {
        self.elements.len() == other.elements.len() && min_rotation(&self.elements) == min_rotation(&other.elements)
    }
}

/// Turning number of a plain or twisted cap-cup cycle.
pub trait CycleTurning {
    fn cycle_turning(&self) -> i64;
}

impl CycleTurning for CapCupCycle {
    fn cycle_turning(&self) -> i64 {
        self.turning()
    }
}

impl CycleTurning for TwistedCapCupCycle {
    fn cycle_turning(&self) -> i64 {
        self.turning()
    }
}

pub fn cycle_turning<C: CycleTurning + ?Sized>(c: &C) -> i64 {
    c.cycle_turning()
}

/// `(U(c), S(c), W(c))`
pub fn cycle_maps(c: &TwistedCapCupCycle) -> (CapCupCycle, CapCupCycle, i64) {
    (c.underlying(), c.signature(), c.writhe())
}

/// Writhe contribution of the braiding at slice `index`, given the wire word
/// feeding it.
pub(crate) fn crossing_sign(
    d: &Diagram,
    level: &crate::diagram::ObjectWord,
    index: usize,
) -> Result<i64, InvariantError> {
    let s = d.slices()[index];
    let sign = s.kind.braid_sign().unwrap_or(0);
    if sign == 0 {
        return Ok(0);
    }
    let (a, b) = (&level.wires()[s.offset], &level.wires()[s.offset + 1]);
    match (a, b) {
        (Object::Oriented(x), Object::Oriented(y)) => Ok(sign * x.sign() * y.sign()),
        _ => Err(InvariantError::UnorientedCrossing(index)),
    }
}

/// Sum over braidings of `sign * o(left) * o(right)` with Up = +1, Down = -1.
pub fn writhe(d: &Diagram) -> Result<i64, InvariantError> {
    let levels = d.levels();
    let mut total = 0;
    for (i, s) in d.slices().iter().enumerate() {
        if s.kind.is_braid() {
            total += crossing_sign(d, &levels[i], i)?;
        }
    }
    Ok(total)
}

/// Sum of the local turning numbers of the caps and cups.
pub fn turning_number(d: &Diagram) -> Result<i64, InvariantError> {
    let mut total = 0;
    for s in d.slices() {
        match CapCupSymbol::from_kind(s.kind) {
            Some(sym) => total += sym.turning(),
            None if matches!(s.kind, GeneratorKind::Named(_)) => return Err(InvariantError::NamedGenerator),
            None => {}
        }
    }
    Ok(total)
}

/// Caps and cups of a knot in traversal order, starting at the earliest cap,
/// each paired with its slice index.
pub fn cap_cup_sequence(d: &Diagram) -> Result<Vec<(usize, CapCupSymbol)>, InvariantError> {
    if !is_knot(d) {
        return Err(InvariantError::NotAKnot);
    }
    if d.slices().iter().any(|s| matches!(s.kind, GeneratorKind::Named(_))) {
        return Err(InvariantError::NamedGenerator);
    }
    let map = trace_strands(d);
    Ok(map.strands[0]
        .slices
        .iter()
        .filter_map(|&i| CapCupSymbol::from_kind(d.slices()[i].kind).map(|s| (i, s)))
        .collect())
}

pub fn cap_cup_cycle(d: &Diagram) -> Result<CapCupCycle, InvariantError> {
    let seq = cap_cup_sequence(d)?;
    CapCupCycle::new(seq.into_iter().map(|(_, s)| s).collect())
}

/// True iff every cap slice comes before every cup slice.
pub fn is_bridge_position(d: &Diagram) -> bool {
    let last_cap = d.slices().iter().rposition(|s| s.kind.is_cap());
    let first_cup = d.slices().iter().position(|s| s.kind.is_cup());
    match (last_cap, first_cup) {
        (Some(c), Some(u)) => c < u,
        _ => true,
    }
}

/// Number of caps of a closed diagram; `None` for open diagrams.
pub fn bridge_number(d: &Diagram) -> Option<usize> {
    d.is_closed().then(|| d.count_where(GeneratorKind::is_cap))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub writhe: i64,
    pub turning: i64,
    pub cycle: Option<CapCupCycle>,
    pub components: usize,
    pub bridge_number: Option<usize>,
    pub bridge_position: Option<bool>,
}

pub fn report(d: &Diagram) -> Result<InvariantReport, InvariantError> {
    let components = trace_strands(d).components();
    let closed = d.is_closed();
    let cycle = if closed && components == 1 {
        Some(cap_cup_cycle(d)?)
    } else {
        None
    };
    Ok(InvariantReport {
        writhe: writhe(d)?,
        turning: turning_number(d)?,
        cycle,
        components,
        bridge_number: bridge_number(d),
        bridge_position: closed.then(|| is_bridge_position(d)),
    })
}

#[cfg(test)]
mod tests {
    use super::CapCupSymbol::*;
    use super::*;
    use crate::diagram::parse_diagram;
    use crate::testing::fixtures;

    fn cyc(v: &[CapCupSymbol]) -> CapCupCycle {
        CapCupCycle::new(v.to_vec()).unwrap()
    }

    #[test]
    fn gadget_a_invariants() {
        let a = parse_diagram("dom: ^\ncapR @ 0\nsigma- @ 1\ncupL @ 1").unwrap();
        assert_eq!(writhe(&a), Ok(1));
        assert_eq!(turning_number(&a), Ok(2));
    }

    #[test]
    fn identity_has_zero_writhe() {
        let d = parse_diagram("dom: ^ v").unwrap();
        assert_eq!(writhe(&d), Ok(0));
    }

    #[test]
    fn fixture_invariants() {
        let knot = fixtures::example_knot();
        assert_eq!(turning_number(&knot), Ok(0));
        assert_eq!(cap_cup_cycle(&knot).unwrap(), cyc(&[CapL, CupR, CapR, CupL]));
        let whole = fixtures::whole_process_oriented();
        assert_eq!(writhe(&whole), Ok(2));
        assert_eq!(
            cap_cup_cycle(&whole).unwrap(),
            cyc(&[CapL, CupL, CapR, CupL, CapR, CupR])
        );
        let unknot = parse_diagram("capR @ 0\ncupL @ 0").unwrap();
        assert_eq!(turning_number(&unknot), Ok(2));
        assert_eq!(cap_cup_cycle(&unknot).unwrap(), cyc(&[CapR, CupL]));
    }

    #[test]
    fn twisted_cap_cup_fixture_examples() {
        // (capL,2), (cupL,-1), (cupR,0), (capR,-2) drawn as cap/cup plus braids
        let cases = [
            ("capL @ 0\nsigma- @ 0\nsigma- @ 0", 2),
            ("dom: v ^\nsigma+ @ 0\ncupL @ 0", -1),
            ("dom: v ^\ncupR @ 0", 0),
            ("capR @ 0\nsigma+ @ 0\nsigma+ @ 0", -2),
        ];
        for (text, w) in cases {
            assert_eq!(writhe(&parse_diagram(text).unwrap()), Ok(w), "{text}");
        }
    }

    #[test]
    fn not_a_knot() {
        let d = parse_diagram("capR @ 0\ncapR @ 2\ncupL @ 2\ncupL @ 0").unwrap();
        assert_eq!(cap_cup_cycle(&d), Err(InvariantError::NotAKnot));
        assert_eq!(
            cap_cup_cycle(&parse_diagram("dom: ^").unwrap()),
            Err(InvariantError::NotAKnot)
        );
    }

    #[test]
    fn cycle_turning_values() {
        assert_eq!(cycle_turning(&cyc(&[CapL, CupR, CapR, CupL])), 0);
        assert_eq!(TwistedCapCup::new(CapR, 1).turning(), -1);
        let e = fixtures::whole_process_twisted_cycle();
        assert_eq!(cycle_turning(&e), -2);
        // element-wise signature keeps the turning number
        assert_eq!(cycle_turning(&e.signature()), cycle_turning(&e));
    }

    #[test]
    fn signature_flips_on_odd_writhe() {
        assert_eq!(twisted_signature(TwistedCapCup::new(CapR, 0)), CapR);
        assert_eq!(twisted_signature(TwistedCapCup::new(CapR, 1)), CapL);
        assert_eq!(twisted_signature(TwistedCapCup::new(CupL, -2)), CupL);
        assert_eq!(twisted_signature(TwistedCapCup::new(CupR, -3)), CupL);
    }

    #[test]
    fn cycle_maps_examples() {
        let zero = cyc(&[CapR, CupL, CapL, CupR]).untwisted();
        let (u, s, w) = cycle_maps(&zero);
        assert_eq!((u.clone(), w), (s, 0));
        assert_eq!(u, cyc(&[CapR, CupL, CapL, CupR]));

        let (_, _, w) = cycle_maps(&fixtures::whole_process_twisted_cycle());
        assert_eq!(w, 2);

        let c = TwistedCapCupCycle::new(vec![TwistedCapCup::new(CapR, 1), TwistedCapCup::new(CupL, 0)]).unwrap();
        let (u, s, w) = cycle_maps(&c);
        assert_eq!(u, cyc(&[CapR, CupL]));
        assert_eq!(s, cyc(&[CapL, CupL]));
        assert_eq!(w, 1);
    }

    #[test]
    fn alternation_is_enforced() {
        assert_eq!(CapCupCycle::new(vec![CapR, CapL]), Err(InvariantError::NotAlternating));
        assert_eq!(
            CapCupCycle::new(vec![CapR, CupL, CapL]),
            Err(InvariantError::NotAlternating)
        );
        assert!(CapCupCycle::new(vec![]).is_ok());
    }

    #[test]
    fn canonical_rotation_is_least() {
        let c = cyc(&[CupL, CapL, CupR, CapR]);
        assert_eq!(c.elements(), &[CapR, CupL, CapL, CupR]);
    }

    #[test]
    fn bridge_statistics() {
        let a = fixtures::bridge_position_a();
        let b = fixtures::bridge_position_b();
        assert!(!is_bridge_position(&a));
        assert!(is_bridge_position(&b));
        assert_eq!(bridge_number(&b), Some(3));
        let u = parse_diagram("capR @ 0\ncupL @ 0").unwrap();
        assert!(is_bridge_position(&u));
        assert_eq!(bridge_number(&u), Some(1));
        assert_eq!(bridge_number(&parse_diagram("dom: ^").unwrap()), None);
    }

    #[test]
    fn report_serializes_with_stable_keys() {
        let r = report(&parse_diagram("capR @ 0\ncupL @ 0").unwrap()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "writhe": 0, "turning": 2, "cycle": ["capR", "cupL"],
                "components": 1, "bridge_number": 1, "bridge_position": true
            })
        );
        let back: InvariantReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }
}
