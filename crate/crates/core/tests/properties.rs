use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use braidword::braid::{braid_equal, BraidWord, Letter};
use braidword::construct::{build_instance, diamond_step, realize_cycle_with_writhe, realize_twisted};
use braidword::diagram::{is_knot, parse_diagram, serialize_diagram, trace_strands, Diagram, Object, Orientation};
use braidword::invariants::{
    cap_cup_cycle, cycle_turning, is_bridge_position, turning_number, writhe, CapCupCycle, CapCupSymbol, TwistedCapCup,
    TwistedCapCupCycle,
};
use braidword::oracle::{kauffman_bracket, normalized_invariant};
use braidword::rewrite::{
    applicable_moves, apply_move, bridge_normalize, equiv_search, inverse_move, replay, Budget, Verdict,
};
use braidword::testing::random;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn invariants(d: &Diagram) -> (i64, i64, Option<CapCupCycle>, usize) {
    (
        writhe(d).unwrap(),
        turning_number(d).unwrap(),
        cap_cup_cycle(d).ok(),
        trace_strands(d).components(),
    )
}

fn random_twisted(rng: &mut ChaCha8Rng, max_len: usize, max_twist: i64) -> TwistedCapCupCycle {
    let len = 2 * rng.gen_range(1..=max_len / 2);
    let elems = (0..len)
        .map(|i| {
            let sym = match (i % 2 == 0, rng.gen_bool(0.5)) {
                (true, true) => CapCupSymbol::CapR,
                (true, false) => CapCupSymbol::CapL,
                (false, true) => CapCupSymbol::CupR,
                (false, false) => CapCupSymbol::CupL,
            };
            TwistedCapCup::new(sym, rng.gen_range(-max_twist..=max_twist))
        })
        .collect();
    TwistedCapCupCycle::from_sequence(elems).unwrap()
}

fn orientation_count(level: &[Object]) -> (usize, usize) {
    let up = level
        .iter()
        .filter(|o| o.orientation() == Some(Orientation::Up))
        .count();
    (up, level.len() - up)
}

/// Applies random presentation moves to a braid word, keeping it short.
fn rewrite_word(rng: &mut ChaCha8Rng, w: &BraidWord, steps: usize, max_len: usize) -> BraidWord {
    let n = w.strands();
    let mut l: Vec<Letter> = w.letters().to_vec();
    for _ in 0..steps {
        let k = if l.is_empty() { 0 } else { rng.gen_range(0..l.len()) };
        match rng.gen_range(0..4) {
            0 if l.len() + 2 <= max_len => {
                let x = Letter::new(rng.gen_range(1..n), if rng.gen_bool(0.5) { 1 } else { -1 });
                l.splice(k..k, [x, x.inverse()]);
            }
            1 if k + 1 < l.len() && l[k + 1] == l[k].inverse() => {
                l.drain(k..k + 2);
            }
            2 if k + 1 < l.len() && l[k].index.abs_diff(l[k + 1].index) >= 2 => l.swap(k, k + 1),
            3 if k + 2 < l.len()
                && l[k] == l[k + 2]
                && l[k].sign == l[k + 1].sign
                && l[k].index.abs_diff(l[k + 1].index) == 1 =>
            {
                let (a, b) = (l[k], l[k + 1]);
                l[k..k + 3].copy_from_slice(&[b, a, b]);
            }
            _ => {}
        }
    }
    BraidWord::new(n, l).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> BraidWord {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| Letter::new(rng.gen_range(1..n), if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    BraidWord::new(n, letters).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn typecheck_and_round_trip(seed in any::<u64>()) {
        let d = random::random_closed(&mut rng(seed), 16);
        let levels = d.typecheck().unwrap();
        prop_assert_eq!(levels.last().unwrap(), &d.codomain());
        prop_assert_eq!(parse_diagram(&serialize_diagram(&d)).unwrap(), d.clone());
        let strands = trace_strands(&d);
        let segments: usize = strands.strands.iter().map(|s| s.segments).sum();
        prop_assert_eq!(segments, d.widths().iter().sum::<usize>());
        for (i, s) in d.slices().iter().enumerate() {
            let (before, after) = (orientation_count(levels[i].wires()), orientation_count(levels[i + 1].wires()));
            let expected = if s.kind.is_cap() {
                (before.0 + 1, before.1 + 1)
            } else if s.kind.is_cup() {
                (before.0 - 1, before.1 - 1)
            } else {
                before
            };
            prop_assert_eq!(after, expected);
        }
    }

    #[test]
    fn knot_cycle_laws(seed in any::<u64>()) {
        let d = random::random_knot(&mut rng(seed), 14);
        let c = cap_cup_cycle(&d).unwrap();
        let (w, t) = (writhe(&d).unwrap(), turning_number(&d).unwrap());
        prop_assert_eq!(c.len() % 2, 0);
        prop_assert_eq!(cycle_turning(&c), t);
        prop_assert_eq!((2 * w + t).rem_euclid(4), 2);
        for k in 0..c.len() {
            let mut rotated = c.elements().to_vec();
            rotated.rotate_left(k);
            prop_assert_eq!(&CapCupCycle::new(rotated).unwrap(), &c);
        }
    }

    #[test]
    fn signature_keeps_turning(seed in any::<u64>()) {
        let c = random_twisted(&mut rng(seed), 8, 3);
        prop_assert_eq!(cycle_turning(&c.signature()), cycle_turning(&c));
    }

    #[test]
    fn moves_preserve_invariants_and_invert(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random::random_closed(&mut r, 12);
        for m in applicable_moves(&d, 14) {
            let e = apply_move(&d, m).unwrap();
            prop_assert_eq!(invariants(&d), invariants(&e));
            prop_assert_eq!(d.domain(), e.domain());
            prop_assert_eq!(d.codomain(), e.codomain());
            let back = inverse_move(&d, m).unwrap();
            prop_assert_eq!(apply_move(&e, back).unwrap(), d.clone());
        }
    }

    #[test]
    fn bridge_normal_form(seed in any::<u64>()) {
        let d = random::random_closed(&mut rng(seed), 14);
        let b = bridge_normalize(&d);
        prop_assert!(is_bridge_position(&b));
        prop_assert_eq!(invariants(&d), invariants(&b));
    }

    #[test]
    fn build_instance_contract(seed in any::<u64>()) {
        let k = random::random_knot(&mut rng(seed), 14);
        let inst = build_instance(&k).unwrap();
        prop_assert!(is_knot(&inst.rhs));
        prop_assert_eq!(writhe(&inst.rhs).unwrap(), writhe(&k).unwrap());
        prop_assert_eq!(cap_cup_cycle(&inst.rhs).unwrap(), cap_cup_cycle(&k).unwrap());
        prop_assert!(normalized_invariant(&inst.rhs).unwrap().is_one());
    }

    #[test]
    fn bracket_is_a_regular_isotopy_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random::random_closed(&mut r, 10);
        let before = kauffman_bracket(&d).unwrap();
        for _ in 0..5 {
            if let Some(m) = random::random_move(&mut r, &d, 12) {
                prop_assert_eq!(&kauffman_bracket(&apply_move(&d, m).unwrap()).unwrap(), &before);
            }
        }
    }

    #[test]
    fn braid_equality_is_an_equivalence(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_word(&mut r, 3, 4);
        let b = rewrite_word(&mut r, &a, 6, 8);
        let c = if r.gen_bool(0.5) { rewrite_word(&mut r, &b, 6, 8) } else { random_word(&mut r, 3, 4) };
        prop_assert!(braid_equal(&a, &a).unwrap());
        prop_assert!(braid_equal(&a, &b).unwrap());
        prop_assert_eq!(braid_equal(&b, &c).unwrap(), braid_equal(&c, &b).unwrap());
        prop_assert_eq!(braid_equal(&b, &c).unwrap(), braid_equal(&a, &c).unwrap());
        if braid_equal(&a, &c).unwrap() {
            prop_assert_eq!(a.exponent_sum(), c.exponent_sum());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn twisted_realization_contract(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = loop {
            let c = random_twisted(&mut r, 6, 2);
            if c.turning().abs() == 2 {
                break c;
            }
        };
        let d = realize_twisted(&c).unwrap();
        prop_assert!(is_knot(&d));
        prop_assert_eq!(writhe(&d).unwrap(), c.writhe());
        prop_assert_eq!(cap_cup_cycle(&d).unwrap(), c.underlying());
        prop_assert!(normalized_invariant(&d).unwrap().is_one());
    }

    #[test]
    fn diamond_steps_give_isotopic_realizations(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = loop {
            let c = random_twisted(&mut r, 4, 1);
            if c.turning().abs() == 2 {
                break c;
            }
        };
        let i = r.gen_range(0..c.len());
        let c2 = diamond_step(&c, i);
        prop_assert_eq!(c2.underlying(), c.underlying());
        prop_assert_eq!(c2.writhe(), c.writhe());
        let (d1, d2) = (realize_twisted(&c).unwrap(), realize_twisted(&c2).unwrap());
        prop_assert!(normalized_invariant(&d2).unwrap().is_one());
        let found = equiv_search(&d1, &d2, Budget::default()).unwrap();
        match &found.verdict {
            Verdict::Equal { path } => prop_assert_eq!(replay(&d1, path).unwrap(), d2.clone()),
            Verdict::Unknown => prop_assert!(false, "{:?} vs {:?}: unknown", c, c2),
        }
    }

    #[test]
    fn equal_braids_have_equal_diagrams(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=4);
        let u = random_word(&mut r, n, 4);
        let v = rewrite_word(&mut r, &u, 8, 6);
        prop_assert!(braid_equal(&u, &v).unwrap());
        prop_assert_eq!(u.exponent_sum(), v.exponent_sum());
        let (du, dv) = (u.to_diagram(Orientation::Up).unwrap(), v.to_diagram(Orientation::Up).unwrap());
        prop_assert_eq!(writhe(&du).unwrap(), u.exponent_sum());
        let found = equiv_search(&du, &dv, Budget::default()).unwrap();
        prop_assert!(found.is_equal(), "{} vs {}", u, v);
    }

    #[test]
    fn search_is_symmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_twisted(&mut r, 4, 0).underlying();
        let w = if (c.turning() / 2).rem_euclid(2) == 1 { 0 } else { 1 };
        let d = realize_cycle_with_writhe(&c, w).unwrap();
        let s = random::scramble(&mut r, &d, 8, d.len() + 6);
        let budget = Budget::new(20_000, None);
        let (ab, ba) = (equiv_search(&d, &s, budget).unwrap(), equiv_search(&s, &d, budget).unwrap());
        prop_assert_eq!(ab.is_equal(), ba.is_equal());
        for (from, res, to) in [(&d, &ab, &s), (&s, &ba, &d)] {
            if let Some(path) = res.path() {
                prop_assert_eq!(&replay(from, path).unwrap(), to);
            }
        }
    }
}
