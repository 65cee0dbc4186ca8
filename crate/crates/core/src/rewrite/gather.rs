//! Macro moves: bring the slices of a rewrite pattern next to each other
//! with exchanges, apply the rewrite, and return to normal form.

use super::canon::canon_slices;
use super::{apply_to_slices, arities, exchanged, widths_of, Move, Side};
use crate::diagram::{Diagram, Slice};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Core {
    R2Cancel,
    Pull { neighbor: Side, sign: i8, upward: bool },
}

/// A move on normal forms: either a pattern whose slices (listed top to
/// bottom) are first made adjacent, or a primitive move applied directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MacroMove {
    Gathered { block: Vec<usize>, core: CoreMove },
    Direct(Move),
}

/// The rewrite applied once a block is contiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoreMove(Core);

struct Links<'a> {
    slices: &'a [Slice],
    ar: &'a [(usize, usize)],
}

impl Links<'_> {
    /// The slice consuming output `r` of slice `i`, with the input index.
    fn below(&self, i: usize, r: usize) -> Option<(usize, usize)> {
        let mut pos = self.slices[i].offset + r;
        for k in i + 1..self.slices.len() {
            let s = self.slices[k];
            let (m, n) = self.ar[k];
            if pos < s.offset {
                continue;
            }
            if pos >= s.offset + m {
                pos = pos + n - m;
                continue;
            }
            return Some((k, pos - s.offset));
        }
        None
    }

    /// The slice producing input `r` of slice `i`, with the output index.
    fn above(&self, i: usize, r: usize) -> Option<(usize, usize)> {
        let mut pos = self.slices[i].offset + r;
        for k in (0..i).rev() {
            let s = self.slices[k];
            let (m, n) = self.ar[k];
            if pos < s.offset {
                continue;
            }
            if pos >= s.offset + n {
                pos = pos + m - n;
                continue;
            }
            return Some((k, pos - s.offset));
        }
        None
    }

    fn braid_sign(&self, k: usize) -> Option<i8> {
        self.slices[k].kind.braid_sign().map(|s| s as i8)
    }

    /// Braids feeding every input of `g` from the given side, top to bottom.
    fn chain_above(&self, g: usize, side: Side) -> Option<(Vec<usize>, i8)> {
        let m = self.ar[g].0;
        let mut chain = Vec::with_capacity(m);
        for k in 0..m {
            let (input, out_idx) = match side {
                Side::Right => (m - 1 - k, 1),
                Side::Left => (k, 0),
            };
            let (b, idx) = self.above(g, input)?;
            if idx != out_idx {
                return None;
            }
            chain.push(b);
        }
        let sign = self.braid_sign(chain[0])?;
        for w in chain.windows(2) {
            if self.braid_sign(w[1]) != Some(sign) {
                return None;
            }
            let link = match side {
                Side::Right => self.below(w[0], 0) == Some((w[1], 1)),
                Side::Left => self.below(w[0], 1) == Some((w[1], 0)),
            };
            if !link {
                return None;
            }
        }
        Some((chain, sign))
    }

    /// Braids consuming every output of `g` from the given side, top to bottom.
    fn chain_below(&self, g: usize, side: Side) -> Option<(Vec<usize>, i8)> {
        let n = self.ar[g].1;
        let mut chain = Vec::with_capacity(n);
        for k in 0..n {
            let (output, in_idx) = match side {
                Side::Right => (n - 1 - k, 0),
                Side::Left => (k, 1),
            };
            let (c, idx) = self.below(g, output)?;
            if idx != in_idx {
                return None;
            }
            chain.push(c);
        }
        let sign = self.braid_sign(chain[0])?;
        for w in chain.windows(2) {
            if self.braid_sign(w[1]) != Some(sign) {
                return None;
            }
            let link = match side {
                Side::Right => self.below(w[0], 0) == Some((w[1], 1)),
                Side::Left => self.below(w[0], 1) == Some((w[1], 0)),
            };
            if !link {
                return None;
            }
        }
        Some((chain, sign))
    }
}

/// Candidate macro moves of a diagram, in a fixed order.
pub fn macro_moves(d: &Diagram, max_slices: usize) -> Vec<MacroMove> {
    let slices = d.slices();
    let ar = arities(d, slices);
    let links = Links { slices, ar: &ar };
    let len = slices.len();
    let mut out = Vec::new();
    for i in 0..len {
        let Some(sign) = links.braid_sign(i) else { continue };
        if let (Some((j, 0)), Some((j2, 1))) = (links.below(i, 0), links.below(i, 1)) {
            if j == j2 && links.braid_sign(j) == Some(-sign) {
                out.push(MacroMove::Gathered {
                    block: vec![i, j],
                    core: CoreMove(Core::R2Cancel),
                });
            }
        }
    }
    for (g, &(m, n)) in ar.iter().enumerate() {
        for side in [Side::Left, Side::Right] {
            if m > 0 && len + n <= max_slices + m {
                if let Some((mut chain, sign)) = links.chain_above(g, side) {
                    chain.push(g);
                    out.push(MacroMove::Gathered {
                        block: chain,
                        core: CoreMove(Core::Pull {
                            neighbor: side,
                            sign,
                            upward: true,
                        }),
                    });
                }
            }
            if n > 0 && len + m <= max_slices + n {
                if let Some((chain, sign)) = links.chain_below(g, side) {
                    let mut block = vec![g];
                    block.extend(chain);
                    out.push(MacroMove::Gathered {
                        block,
                        core: CoreMove(Core::Pull {
                            neighbor: side,
                            sign,
                            upward: false,
                        }),
                    });
                }
            }
        }
    }
    let widths = widths_of(d.domain().len(), slices, &ar);
    for (g, &(m, n)) in ar.iter().enumerate() {
        let creates = if m == 0 {
            n
        } else if n == 0 {
            m
        } else {
            continue;
        };
        if len + creates > max_slices {
            continue;
        }
        for neighbor in [Side::Left, Side::Right] {
            for sign in [1, -1] {
                let mv = Move::PullThrough {
                    at: g,
                    neighbor,
                    sign,
                    upward: m == 0,
                };
                if apply_to_slices(d, slices, mv).is_some() {
                    out.push(MacroMove::Direct(mv));
                }
            }
        }
    }
    if len + 2 <= max_slices {
        for (at, &w) in widths.iter().enumerate() {
            for offset in 0..w.saturating_sub(1) {
                for sign in [1, -1] {
                    out.push(MacroMove::Direct(Move::R2Insert { at, offset, sign }));
                }
            }
        }
    }
    out
}

struct Work {
    slices: Vec<Slice>,
    ar: Vec<(usize, usize)>,
    tags: Vec<usize>,
    moves: Vec<Move>,
}

impl Work {
    /// Swaps positions `x` and `x + 1` if they commute.
    fn swap_down(&mut self, x: usize) -> bool {
        for lower_left in [true, false] {
            if let Some([a, b]) = exchanged(
                self.slices[x],
                self.ar[x],
                self.slices[x + 1],
                self.ar[x + 1],
                lower_left,
            ) {
                self.slices[x] = a;
                self.slices[x + 1] = b;
                self.ar.swap(x, x + 1);
                self.tags.swap(x, x + 1);
                self.moves.push(Move::Exchange { at: x, lower_left });
                return true;
            }
        }
        false
    }

    fn pos(&self, tag: usize) -> usize {
        self.tags.iter().position(|&t| t == tag).expect("tag present")
    }

    /// Moves the slice at `from` up to position `to`, all or nothing.
    fn lift(&mut self, from: usize, to: usize) -> bool {
        let saved = (
            self.slices.clone(),
            self.ar.clone(),
            self.tags.clone(),
            self.moves.len(),
        );
        for x in (to..from).rev() {
            if !self.swap_down(x) {
                self.slices = saved.0;
                self.ar = saved.1;
                self.tags = saved.2;
                self.moves.truncate(saved.3);
                return false;
            }
        }
        true
    }

    /// Makes the tagged slices contiguous, in the given order.
    fn gather(&mut self, block: &[usize]) -> Option<usize> {
        let mut start = self.pos(block[0]);
        for (count, &t) in block.iter().enumerate().skip(1) {
            let mut k = start + count;
            while k < self.pos(t) {
                if self.lift(k, start) {
                    start += 1;
                }
                k += 1;
            }
            let end = start + count;
            while self.pos(t) > end {
                let target = self.pos(t);
                if !self.swap_down(target - 1) {
                    return None;
                }
            }
        }
        Some(start)
    }
}

/// Runs a macro move: the resulting normal form and the primitive moves
/// that produce it from `d`.
pub fn run_macro(d: &Diagram, mv: &MacroMove) -> Option<(Vec<Slice>, Vec<Move>)> {
    let mut work = Work {
        slices: d.slices().to_vec(),
        ar: arities(d, d.slices()),
        tags: (0..d.len()).collect(),
        moves: Vec::new(),
    };
    let core = match mv {
        MacroMove::Direct(m) => *m,
        MacroMove::Gathered { block, core } => {
            let start = work.gather(block)?;
            match core.0 {
                Core::R2Cancel => Move::R2Cancel { at: start },
                Core::Pull { neighbor, sign, upward } => Move::PullThrough {
                    at: if upward { start + block.len() - 1 } else { start },
                    neighbor,
                    sign,
                    upward,
                },
            }
        }
    };
    let mut slices = apply_to_slices(d, &work.slices, core)?;
    work.moves.push(core);
    let mut ar = arities(d, &slices);
    canon_slices(&mut slices, &mut ar, Some(&mut work.moves));
    Some((slices, work.moves))
}

/// Every normal form one macro move away, tagged with the index of the
/// macro in [`macro_moves`] order.
pub fn macro_successors(d: &Diagram, max_slices: usize) -> Vec<(usize, Vec<Slice>)> {
    use rayon::prelude::*;
    let moves = macro_moves(d, max_slices);
    let run = |(i, m): (usize, &MacroMove)| {
        run_macro(d, m)
            .filter(|(s, _)| s.len() <= max_slices)
            .map(|(s, _)| (i, s))
    };
    if moves.len() >= 64 {
        moves.par_iter().enumerate().filter_map(run).collect()
    } else {
        moves.iter().enumerate().filter_map(run).collect()
    }
}
