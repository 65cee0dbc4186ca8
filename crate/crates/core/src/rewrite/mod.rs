//! The braided monoidal axioms as local rewrites on slice-form diagrams,
//! bridge normalization, and a bounded equivalence search.

mod bridge;
mod canon;
mod gather;
mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, GeneratorKind, Slice};

pub use bridge::{bridge_normalize, bridge_normalize_with_path};
pub use canon::{canonical_form, canonicalize};
pub use gather::{macro_successors, MacroMove};
pub use search::{equiv_search, Budget, SearchResult, SearchStats, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("move {0:?} does not apply")]
    InvalidMove(Move),
    #[error("diagrams are over different signatures")]
    SignatureMismatch,
    #[error("diagrams have different boundaries: {0}")]
    BoundaryMismatch(String),
}

/// Which side of a generator the crossing wire starts on, read at the
/// generator's input level in the output-side form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A single rewrite step. `at` is always a slice index in the diagram the
/// move is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// Swap slices `at` and `at + 1`, which act on disjoint wires.
    /// `lower_left` says the lower slice sits left of the upper one; it only
    /// matters for a cup directly followed by a cap in the same gap.
    Exchange { at: usize, lower_left: bool },
    /// Remove a braiding at `at` followed by its inverse on the same wires.
    R2Cancel { at: usize },
    /// Insert `sigma^sign @ offset` and its inverse before slice `at`.
    R2Insert { at: usize, offset: usize, sign: i8 },
    /// Slide the generator at slice `at` through a wire crossing all of its
    /// legs with braidings of sign `sign`. `upward` moves the crossings from
    /// the generator's inputs to its outputs; otherwise the reverse.
    PullThrough {
        at: usize,
        neighbor: Side,
        sign: i8,
        upward: bool,
    },
}

pub(crate) fn arities(d: &Diagram, slices: &[Slice]) -> Vec<(usize, usize)> {
    slices.iter().map(|s| d.arity(s.kind)).collect()
}

pub(crate) fn widths_of(domain: usize, slices: &[Slice], ar: &[(usize, usize)]) -> Vec<usize> {
    let mut out = Vec::with_capacity(slices.len() + 1);
    let mut w = domain;
    out.push(w);
    for &(m, n) in ar {
        w = w + n - m;
        out.push(w);
    }
    out
}

/// Result of swapping two adjacent slices, if they commute in the given way.
pub(crate) fn exchanged(
    upper: Slice,
    (m1, n1): (usize, usize),
    lower: Slice,
    (m2, n2): (usize, usize),
    lower_left: bool,
) -> Option<[Slice; 2]> {
    let (p1, p2) = (upper.offset, lower.offset);
    if lower_left {
        (p2 + m2 <= p1).then(|| [Slice::new(lower.kind, p2), Slice::new(upper.kind, p1 + n2 - m2)])
    } else {
        (p2 >= p1 + n1).then(|| [Slice::new(lower.kind, p2 + m1 - n1), Slice::new(upper.kind, p1)])
    }
}

fn braid(sign: i8, offset: usize) -> Slice {
    Slice::new(GeneratorKind::braid_of_sign(sign as i64), offset)
}

fn is_braid_of(s: Slice, sign: i8, offset: usize) -> bool {
    s == braid(sign, offset)
}

/// Computes the slices replacing `range` of the diagram, or `None` if the
/// move does not apply. Shared by [`apply_move`] and enumeration.
fn rewrite(
    slices: &[Slice],
    ar: &[(usize, usize)],
    widths: &[usize],
    m: Move,
) -> Option<(std::ops::Range<usize>, Vec<Slice>)> {
    let len = slices.len();
    match m {
        Move::Exchange { at, lower_left } => {
            if at + 1 >= len {
                return None;
            }
            let pair = exchanged(slices[at], ar[at], slices[at + 1], ar[at + 1], lower_left)?;
            Some((at..at + 2, pair.to_vec()))
        }
        Move::R2Cancel { at } => {
            if at + 1 >= len {
                return None;
            }
            let (a, b) = (slices[at], slices[at + 1]);
            let ok = a.kind.is_braid() && b.kind.inverse_braid() == Some(a.kind) && a.offset == b.offset;
            ok.then(|| (at..at + 2, Vec::new()))
        }
        Move::R2Insert { at, offset, sign } => {
            if at > len || offset + 2 > widths[at] || sign.abs() != 1 {
                return None;
            }
            Some((at..at, vec![braid(sign, offset), braid(-sign, offset)]))
        }
        Move::PullThrough {
            at,
            neighbor,
            sign,
            upward,
        } => {
            if at >= len || sign.abs() != 1 {
                return None;
            }
            let g = slices[at];
            let (mi, no) = ar[at];
            if upward {
                if at < mi {
                    return None;
                }
                let p = match neighbor {
                    Side::Right => g.offset.checked_sub(1)?,
                    Side::Left => g.offset + 1,
                };
                if mi == 0 {
                    // the crossing wire must exist beside the generator
                    let present = match neighbor {
                        Side::Right => true,
                        Side::Left => g.offset < widths[at],
                    };
                    if !present {
                        return None;
                    }
                }
                for t in 0..mi {
                    let want = match neighbor {
                        Side::Right => p + mi - 1 - t,
                        Side::Left => p - 1 + t,
                    };
                    if !is_braid_of(slices[at - mi + t], sign, want) {
                        return None;
                    }
                }
                let mut out = vec![Slice::new(g.kind, p)];
                for t in 0..no {
                    out.push(braid(
                        sign,
                        match neighbor {
                            Side::Right => p + no - 1 - t,
                            Side::Left => p - 1 + t,
                        },
                    ));
                }
                Some((at - mi..at + 1, out))
            } else {
                if at + no >= len {
                    return None;
                }
                let p = g.offset;
                if neighbor == Side::Left && p == 0 {
                    return None;
                }
                if no == 0 && neighbor == Side::Right && p + mi >= widths[at] {
                    return None;
                }
                for t in 0..no {
                    let want = match neighbor {
                        Side::Right => p + no - 1 - t,
                        Side::Left => p - 1 + t,
                    };
                    if !is_braid_of(slices[at + 1 + t], sign, want) {
                        return None;
                    }
                }
                let mut out = Vec::with_capacity(mi + 1);
                for t in 0..mi {
                    out.push(braid(
                        sign,
                        match neighbor {
                            Side::Right => p + mi - 1 - t,
                            Side::Left => p - 1 + t,
                        },
                    ));
                }
                out.push(Slice::new(
                    g.kind,
                    match neighbor {
                        Side::Right => p + 1,
                        Side::Left => p - 1,
                    },
                ));
                Some((at..at + no + 1, out))
            }
        }
    }
}

pub(crate) fn apply_to_slices(d: &Diagram, slices: &[Slice], m: Move) -> Option<Vec<Slice>> {
    let ar = arities(d, slices);
    let widths = widths_of(d.domain().len(), slices, &ar);
    let (range, with) = rewrite(slices, &ar, &widths, m)?;
    let mut out = Vec::with_capacity(slices.len() + with.len());
    out.extend_from_slice(&slices[..range.start]);
    out.extend(with);
    out.extend_from_slice(&slices[range.end..]);
    Some(out)
}

/// Applies one move, checking that it matches the diagram.
pub fn apply_move(d: &Diagram, m: Move) -> Result<Diagram, RewriteError> {
    let slices = apply_to_slices(d, d.slices(), m).ok_or(RewriteError::InvalidMove(m))?;
    Ok(d.with_slices_trusted(slices))
}

/// Applies a sequence of moves.
pub fn replay(d: &Diagram, path: &[Move]) -> Result<Diagram, RewriteError> {
    path.iter().try_fold(d.clone(), |acc, &m| apply_move(&acc, m))
}

/// The move undoing `m`, given the diagram `m` is applied to.
pub fn inverse_move(d: &Diagram, m: Move) -> Result<Move, RewriteError> {
    if apply_to_slices(d, d.slices(), m).is_none() {
        return Err(RewriteError::InvalidMove(m));
    }
    Ok(match m {
        Move::Exchange { at, lower_left } => Move::Exchange {
            at,
            lower_left: !lower_left,
        },
        Move::R2Cancel { at } => {
            let s = d.slices()[at];
            Move::R2Insert {
                at,
                offset: s.offset,
                sign: s.kind.braid_sign().expect("braid") as i8,
            }
        }
        Move::R2Insert { at, .. } => Move::R2Cancel { at },
        Move::PullThrough {
            at,
            neighbor,
            sign,
            upward,
        } => {
            let (mi, _) = d.arity(d.slices()[at].kind);
            Move::PullThrough {
                at: if upward { at - mi } else { at + mi },
                neighbor,
                sign,
                upward: !upward,
            }
        }
    })
}

/// The moves undoing `path` applied to `d`, in application order.
pub fn inverse_path(d: &Diagram, path: &[Move]) -> Result<Vec<Move>, RewriteError> {
    let mut cur = d.clone();
    let mut inv = Vec::with_capacity(path.len());
    for &m in path {
        inv.push(inverse_move(&cur, m)?);
        cur = apply_move(&cur, m)?;
    }
    inv.reverse();
    Ok(inv)
}

/// Every single-move application, in a fixed order: exchanges, R2
/// cancellations, pull-throughs, then R2 insertions. Moves that would grow
/// the diagram beyond `max_slices` are left out.
pub fn applicable_moves(d: &Diagram, max_slices: usize) -> Vec<Move> {
    let slices = d.slices();
    let ar = arities(d, slices);
    let widths = widths_of(d.domain().len(), slices, &ar);
    let len = slices.len();
    let fits = |m: Move| -> bool {
        match rewrite(slices, &ar, &widths, m) {
            Some((range, with)) => len - range.len() + with.len() <= max_slices.max(len),
            None => false,
        }
    };
    let mut out = Vec::new();
    for at in 0..len.saturating_sub(1) {
        for lower_left in [true, false] {
            let m = Move::Exchange { at, lower_left };
            if fits(m) {
                out.push(m);
            }
        }
    }
    for at in 0..len.saturating_sub(1) {
        let m = Move::R2Cancel { at };
        if fits(m) {
            out.push(m);
        }
    }
    for at in 0..len {
        for neighbor in [Side::Left, Side::Right] {
            for sign in [1, -1] {
                for upward in [true, false] {
                    let m = Move::PullThrough {
                        at,
                        neighbor,
                        sign,
                        upward,
                    };
                    if fits(m) {
                        out.push(m);
                    }
                }
            }
        }
    }
    if len + 2 <= max_slices {
        for (at, &w) in widths.iter().enumerate() {
            for offset in 0..w.saturating_sub(1) {
                for sign in [1, -1] {
                    out.push(Move::R2Insert { at, offset, sign });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;
    use crate::invariants::{cap_cup_cycle, turning_number, writhe};
    use crate::testing::fixtures;

    fn d(text: &str) -> Diagram {
        parse_diagram(text).unwrap()
    }

    #[test]
    fn identity_only_inserts() {
        let id = d("dom: ^ v");
        let moves = applicable_moves(&id, 10);
        assert!(!moves.is_empty());
        assert!(moves.iter().all(|m| matches!(m, Move::R2Insert { .. })));
        assert!(applicable_moves(&id, 1).is_empty());
    }

    #[test]
    fn r2_cancel_found_and_applied() {
        let x = d("dom: ^ ^\nsigma+ @ 0\nsigma- @ 0");
        assert!(applicable_moves(&x, 4).contains(&Move::R2Cancel { at: 0 }));
        assert!(apply_move(&x, Move::R2Cancel { at: 0 }).unwrap().is_empty());
    }

    #[test]
    fn exchange_on_disjoint_wires() {
        let x = d("dom: ^ ^ ^ ^\nsigma+ @ 0\nsigma+ @ 2");
        let moves = applicable_moves(&x, 4);
        assert!(moves.contains(&Move::Exchange {
            at: 0,
            lower_left: false
        }));
        let once = apply_move(
            &x,
            Move::Exchange {
                at: 0,
                lower_left: false,
            },
        )
        .unwrap();
        assert_eq!(once.slices(), d("dom: ^ ^ ^ ^\nsigma+ @ 2\nsigma+ @ 0").slices());
        let twice = apply_move(
            &once,
            Move::Exchange {
                at: 0,
                lower_left: true,
            },
        )
        .unwrap();
        assert_eq!(twice, x);
    }

    #[test]
    fn cup_cap_same_gap_is_ambiguous() {
        let x = d("dom: v ^\ncupR @ 0\ncapR @ 0");
        let l = apply_move(
            &x,
            Move::Exchange {
                at: 0,
                lower_left: true,
            },
        )
        .unwrap();
        let r = apply_move(
            &x,
            Move::Exchange {
                at: 0,
                lower_left: false,
            },
        )
        .unwrap();
        assert_eq!(l.slices(), d("dom: v ^\ncapR @ 0\ncupR @ 2").slices());
        assert_eq!(r.slices(), d("dom: v ^\ncapR @ 2\ncupR @ 0").slices());
    }

    #[test]
    fn pull_cap_through_keeps_writhe() {
        let x = d("dom: ^\ncapR @ 1");
        let m = Move::PullThrough {
            at: 0,
            neighbor: Side::Right,
            sign: 1,
            upward: true,
        };
        let y = apply_move(&x, m).unwrap();
        assert_eq!(y.slices(), d("dom: ^\ncapR @ 0\nsigma+ @ 1\nsigma+ @ 0").slices());
        assert_eq!(writhe(&y), writhe(&x));
        let back = apply_move(&y, inverse_move(&x, m).unwrap()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn braid_relation_is_a_pull_through() {
        let (l, r) = fixtures::braid_relation_pair();
        let m = Move::PullThrough {
            at: 0,
            neighbor: Side::Right,
            sign: 1,
            upward: false,
        };
        assert_eq!(apply_move(&l, m).unwrap(), r);
    }

    #[test]
    fn every_move_preserves_invariants_on_fixtures() {
        for k in [fixtures::example_knot(), fixtures::whole_process_oriented()] {
            let moves = applicable_moves(&k, k.len() + 4);
            assert!(moves.len() > 10);
            for m in moves {
                let y = apply_move(&k, m).unwrap();
                y.typecheck().unwrap();
                assert_eq!(writhe(&y), writhe(&k), "{m:?}");
                assert_eq!(turning_number(&y), turning_number(&k));
                assert_eq!(cap_cup_cycle(&y), cap_cup_cycle(&k), "{m:?}");
                let inv = inverse_move(&k, m).unwrap();
                assert_eq!(apply_move(&y, inv).unwrap(), k, "{m:?}");
            }
        }
    }

    #[test]
    fn invalid_move_rejected() {
        let x = d("dom: ^ ^\nsigma+ @ 0\nsigma+ @ 0");
        assert!(matches!(
            apply_move(&x, Move::R2Cancel { at: 0 }),
            Err(RewriteError::InvalidMove(_))
        ));
    }

    #[test]
    fn moves_serialize() {
        let m = Move::PullThrough {
            at: 2,
            neighbor: Side::Left,
            sign: -1,
            upward: true,
        };
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"move":"pull_through","at":2,"neighbor":"left","sign":-1,"upward":true}"#
        );
        assert_eq!(serde_json::from_str::<Move>(&s).unwrap(), m);
    }
}
