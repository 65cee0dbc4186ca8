//! Bridge normalization: lift every cap above every other kind of slice.

use super::{apply_to_slices, arities, exchanged, Move, Side};
use crate::diagram::Diagram;

/// Lifts all caps to the top using exchanges and pull-throughs, returning
/// the result and the moves taken.
///
/// A cap blocked by the slice above it sits strictly between two of that
/// slice's outputs; pulling it through the wire on its left moves it one gap
/// left (leaving two crossings underneath) until it can be exchanged.
pub fn bridge_normalize_with_path(d: &Diagram) -> (Diagram, Vec<Move>) {
    let mut slices = d.slices().to_vec();
    let mut moves = Vec::new();
    while let Some(mut x) = (1..slices.len()).find(|&i| slices[i].kind.is_cap() && !slices[i - 1].kind.is_cap()) {
        while x > 0 && !slices[x - 1].kind.is_cap() {
            let ar = arities(d, &slices[x - 1..=x]);
            let swap = [true, false]
                .into_iter()
                .find(|&ll| exchanged(slices[x - 1], ar[0], slices[x], ar[1], ll).is_some());
            let m = match swap {
                Some(lower_left) => Move::Exchange { at: x - 1, lower_left },
                None => Move::PullThrough {
                    at: x,
                    neighbor: Side::Right,
                    sign: 1,
                    upward: true,
                },
            };
            slices = apply_to_slices(d, &slices, m).expect("bridge moves apply");
            moves.push(m);
            if swap.is_some() {
                x -= 1;
            }
        }
    }
    (d.with_slices_trusted(slices), moves)
}

pub fn bridge_normalize(d: &Diagram) -> Diagram {
    bridge_normalize_with_path(d).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{bridge_number, cap_cup_cycle, is_bridge_position, turning_number, writhe};
    use crate::rewrite::replay;
    use crate::testing::fixtures;

    #[test]
    fn bridge_a_normalizes_to_three_bridges() {
        let a = fixtures::bridge_position_a();
        let (b, path) = bridge_normalize_with_path(&a);
        assert!(is_bridge_position(&b));
        assert_eq!(bridge_number(&b), Some(3));
        assert_eq!(replay(&a, &path).unwrap(), b);
        assert!(path
            .iter()
            .all(|m| matches!(m, Move::Exchange { .. } | Move::PullThrough { .. })));
        assert_eq!(writhe(&b), writhe(&a));
        assert_eq!(turning_number(&b), turning_number(&a));
        assert_eq!(cap_cup_cycle(&b), cap_cup_cycle(&a));
    }

    #[test]
    fn bridge_diagrams_unchanged() {
        let b = fixtures::bridge_position_b();
        assert_eq!(bridge_normalize(&b), b);
    }

    #[test]
    fn nested_cap_is_pulled_out() {
        let d = crate::diagram::parse_diagram("capR @ 0\nsigma+ @ 0\ncapL @ 1\ncupR @ 1\ncupR @ 0").unwrap();
        let n = bridge_normalize(&d);
        assert!(is_bridge_position(&n));
    }

    #[test]
    fn whole_process_normalizes() {
        for k in [fixtures::whole_process_oriented(), fixtures::example_knot()] {
            let n = bridge_normalize(&k);
            assert!(is_bridge_position(&n));
            assert_eq!(writhe(&n), writhe(&k));
            assert_eq!(cap_cup_cycle(&n), cap_cup_cycle(&k));
        }
    }
}
