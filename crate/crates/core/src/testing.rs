//! Fixed diagrams and random generators shared by the tests.

pub mod fixtures {
    use crate::diagram::{parse_diagram, Diagram};
    use crate::invariants::{CapCupSymbol::*, TwistedCapCup, TwistedCapCupCycle};

    fn load(text: &str) -> Diagram {
        parse_diagram(text).expect("fixture typechecks")
    }

    pub const EXAMPLE_KNOT: &str = "\
capR @ 0
capL @ 2
sigma+ @ 1
sigma- @ 0
sigma- @ 2
cupR @ 0
cupL @ 0
";

    pub const WHOLE_PROCESS_ORIENTED: &str = "\
capR @ 0
capR @ 2
capL @ 4
sigma- @ 1
sigma- @ 3
sigma+ @ 0
sigma+ @ 2
sigma- @ 1
sigma- @ 3
cupL @ 0
cupL @ 0
cupR @ 0
";

    pub const WHOLE_PROCESS_UNORIENTED: &str = "\
cap @ 0
cap @ 2
cap @ 4
sigma- @ 1
sigma- @ 3
sigma+ @ 0
sigma+ @ 2
sigma- @ 1
sigma- @ 3
cup @ 0
cup @ 0
cup @ 0
";

    pub const WHOLE_PROCESS_REALIZATION: &str = "\
capR @ 0
capL @ 2
sigma- @ 0
cupL @ 1
capR @ 1
sigma- @ 0
cupL @ 0
cupR @ 0
";

    pub const BRIDGE_A_UNORIENTED: &str = "\
cap @ 0
cap @ 2
cup @ 1
cap @ 1
sigma- @ 0
sigma- @ 2
sigma+ @ 1
cup @ 0
cup @ 0
";

    pub const BRIDGE_B_UNORIENTED: &str = "\
cap @ 0
cap @ 2
cap @ 3
cup @ 1
sigma- @ 0
sigma- @ 2
sigma+ @ 1
cup @ 0
cup @ 0
";

    pub const ISOTOPIC_LEFT: &str = "\
sig:
  m : A A -> A
dom: A A A A
sigma+ @ 1
gen m @ 0
sigma- @ 0
sigma+ @ 1
";

    pub const ISOTOPIC_RIGHT: &str = "\
sig:
  m : A A -> A
dom: A A A A
sigma- @ 0
gen m @ 1
sigma+ @ 1
";

    /// A small oriented knot with W = 3 and T = 0.
    pub fn example_knot() -> Diagram {
        load(EXAMPLE_KNOT)
    }

    /// A six-crossing knot in three-bridge position (W = 2, T = 2).
    pub fn whole_process_oriented() -> Diagram {
        load(WHOLE_PROCESS_ORIENTED)
    }

    /// Realization of the twisted cycle `whole_process_twisted_cycle`.
    pub fn whole_process_realization() -> Diagram {
        load(WHOLE_PROCESS_REALIZATION)
    }

    pub fn whole_process_twisted_cycle() -> TwistedCapCupCycle {
        TwistedCapCupCycle::new(vec![
            TwistedCapCup::new(CapL, 0),
            TwistedCapCup::new(CupL, 0),
            TwistedCapCup::new(CapR, 1),
            TwistedCapCup::new(CupL, 1),
            TwistedCapCup::new(CapR, 0),
            TwistedCapCup::new(CupR, 0),
        ])
        .expect("alternating")
    }

    pub fn bridge_position_a() -> Diagram {
        crate::orient::orient_text(BRIDGE_A_UNORIENTED, false).expect("orientable")
    }

    pub fn bridge_position_b() -> Diagram {
        crate::orient::orient_text(BRIDGE_B_UNORIENTED, false).expect("orientable")
    }

    pub fn isotopic_pair() -> (Diagram, Diagram) {
        (load(ISOTOPIC_LEFT), load(ISOTOPIC_RIGHT))
    }

    /// sigma1 sigma2 sigma1 and sigma2 sigma1 sigma2 on three upward wires.
    pub fn braid_relation_pair() -> (Diagram, Diagram) {
        (
            load("dom: ^ ^ ^\nsigma+ @ 0\nsigma+ @ 1\nsigma+ @ 0\n"),
            load("dom: ^ ^ ^\nsigma+ @ 1\nsigma+ @ 0\nsigma+ @ 1\n"),
        )
    }
}

pub mod random {
    use rand::Rng;

    use crate::diagram::{is_knot, Diagram};
    use crate::orient::{orient_unoriented, UnorientedKind, UnorientedSlice};

    /// A random oriented closed diagram with at most `max_slices` slices. It
    /// may have several components.
    pub fn random_closed<R: Rng>(rng: &mut R, max_slices: usize) -> Diagram {
        let caps = rng.gen_range(1..=(max_slices / 2).max(1));
        let mut braids = rng.gen_range(0..=max_slices.saturating_sub(2 * caps));
        let (mut caps_left, mut cups_left, mut width) = (caps, caps, 0usize);
        let mut out = Vec::new();
        while cups_left > 0 {
            let mut options = Vec::with_capacity(3);
            if caps_left > 0 {
                options.push(UnorientedKind::Cap);
            }
            // closing the last loop early would strand the remaining caps
            if width >= 2 && !(width == 2 && caps_left > 0) {
                options.push(UnorientedKind::Cup);
            }
            if width >= 2 && braids > 0 {
                options.push(UnorientedKind::Braid(if rng.gen_bool(0.5) { 1 } else { -1 }));
            }
            let kind = options[rng.gen_range(0..options.len())];
            let offset = match kind {
                UnorientedKind::Cap => rng.gen_range(0..=width),
                _ => rng.gen_range(0..width - 1),
            };
            match kind {
                UnorientedKind::Cap => {
                    caps_left -= 1;
                    width += 2;
                }
                UnorientedKind::Cup => {
                    cups_left -= 1;
                    width -= 2;
                }
                UnorientedKind::Braid(_) => braids -= 1,
            }
            out.push(UnorientedSlice { kind, offset });
        }
        orient_unoriented(&out, false).expect("generated diagrams are closed")
    }

    /// A random oriented knot diagram with at most `max_slices` slices.
    pub fn random_knot<R: Rng>(rng: &mut R, max_slices: usize) -> Diagram {
        loop {
            let d = random_closed(rng, max_slices);
            if is_knot(&d) {
                return d;
            }
        }
    }

    /// A random applicable move, choosing the move family first so that
    /// the many possible insertions do not drown out the rest.
    pub fn random_move<R: Rng>(rng: &mut R, d: &Diagram, max_slices: usize) -> Option<crate::rewrite::Move> {
        use crate::rewrite::{applicable_moves, Move};
        let moves = applicable_moves(d, max_slices);
        let family = |m: &Move| match m {
            Move::Exchange { .. } => 0,
            Move::R2Cancel { .. } => 1,
            Move::PullThrough { .. } => 2,
            Move::R2Insert { .. } => 3,
        };
        let mut families: Vec<usize> = moves.iter().map(family).collect();
        families.sort_unstable();
        families.dedup();
        if families.is_empty() {
            return None;
        }
        let f = families[rng.gen_range(0..families.len())];
        let pool: Vec<Move> = moves.into_iter().filter(|m| family(m) == f).collect();
        Some(pool[rng.gen_range(0..pool.len())])
    }

    /// Applies up to `steps` random moves.
    pub fn scramble<R: Rng>(rng: &mut R, d: &Diagram, steps: usize, max_slices: usize) -> Diagram {
        let mut cur = d.clone();
        for _ in 0..steps {
            match random_move(rng, &cur, max_slices) {
                Some(m) => cur = crate::rewrite::apply_move(&cur, m).expect("applicable"),
                None => break,
            }
        }
        cur
    }
}
