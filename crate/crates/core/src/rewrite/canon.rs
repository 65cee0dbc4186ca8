//! Exchange normal form: every slice is lifted as far up as exchanges that
//! move it left-over-right allow. A cap directly under a cup in the same gap
//! stays put; otherwise the two would swap back and forth.

use super::{arities, exchanged, Move};
use crate::diagram::{Diagram, Slice};

/// Sorts in place, appending the exchanges performed to `moves`.
pub(crate) fn canon_slices(slices: &mut [Slice], ar: &mut [(usize, usize)], mut moves: Option<&mut Vec<Move>>) {
    for i in 1..slices.len() {
        let mut k = i;
        while k > 0 {
            let tie = ar[k - 1].1 == 0 && ar[k].0 == 0 && slices[k - 1].offset == slices[k].offset;
            if tie {
                break;
            }
            match exchanged(slices[k - 1], ar[k - 1], slices[k], ar[k], true) {
                Some([a, b]) => {
                    slices[k - 1] = a;
                    slices[k] = b;
                    ar.swap(k - 1, k);
                    if let Some(m) = moves.as_deref_mut() {
                        m.push(Move::Exchange {
                            at: k - 1,
                            lower_left: true,
                        });
                    }
                    k -= 1;
                }
                None => break,
            }
        }
    }
}

/// The normal form of `d` together with the exchanges leading to it.
pub fn canonicalize(d: &Diagram) -> (Diagram, Vec<Move>) {
    let mut slices = d.slices().to_vec();
    let mut ar = arities(d, &slices);
    let mut moves = Vec::new();
    canon_slices(&mut slices, &mut ar, Some(&mut moves));
    (d.with_slices_trusted(slices), moves)
}

pub fn canonical_form(d: &Diagram) -> Diagram {
    canonicalize(d).0
}
