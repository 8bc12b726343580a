//! Worked examples and cross-module checks on the shipped corpus.

use std::path::PathBuf;

use machine_monoids::algebra::{computation_square, execution_letter, word_square, CnCodec, FixedEnd};
use machine_monoids::machines::library;
use machine_monoids::random::{random_btm, random_two_way};
use machine_monoids::relalg::Rel;
use machine_monoids::semantics::{btm_oracle, parse_word, twoway_oracle};
use machine_monoids::{Btm, Machine, Rule, Square, TwoWayAutomaton};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn corpus(name: &str) -> Machine {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name]
        .iter()
        .collect();
    Machine::from_json_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn corpus_files_are_the_library_machines() {
    assert_eq!(corpus("three-state.machine"), Machine::Nfa(library::three_state()));
    assert_eq!(corpus("two-state.machine"), Machine::Nfa(library::two_state()));
    assert_eq!(
        corpus("two-state-reversed.machine"),
        Machine::Nfa(library::two_state_reversed())
    );
    assert_eq!(corpus("carry.machine"), Machine::Mealy(library::carry()));
    assert_eq!(
        corpus("carry-underlying.machine"),
        Machine::Nfa(library::carry().underlying_nfa())
    );
    assert_eq!(corpus("E.machine"), Machine::TwoWay(library::machine_e()));
    assert_eq!(corpus("flip.machine"), Machine::Btm(library::flip()));
}

#[test]
fn canonical_serialization_round_trips() {
    for name in [
        "three-state.machine",
        "carry.machine",
        "E.machine",
        "flip.machine",
        "identity-only.machine",
    ] {
        let m = corpus(name);
        assert_eq!(Machine::from_json_str(&m.to_json_string()).unwrap(), m, "{name}");
    }
}

#[test]
fn two_letter_word_on_machine_e() {
    let e = library::machine_e();
    let xx = parse_word(e.alphabet(), "xx").unwrap();
    let x = word_square(&e, &xx[..1]).unwrap();
    let composed = Square::vcompose(&x, &x).unwrap();
    assert_eq!(twoway_oracle(&e, &xx).unwrap(), composed);
    assert_eq!(word_square(&e, &xx).unwrap(), composed);
}

#[test]
fn dual_of_machine_e_is_swapped_machine() {
    let e = library::machine_e();
    let sq = twoway_oracle(&e, &[0]).unwrap();
    assert_eq!(sq.dual(), twoway_oracle(&e.swap_directions(), &[0]).unwrap());
}

#[test]
fn flip_lifts_by_hand() {
    let f = library::flip();
    let c1 = CnCodec::new(f.states().clone(), f.alphabet().clone(), 1);
    let c2 = c1.extend(1);
    let one = |c: &CnCodec, w: &str| c.encode(0, &parse_word(f.alphabet(), w).unwrap()).unwrap();
    let s = Rel::from_pairs(
        c1.carrier().clone(),
        c1.carrier().clone(),
        [(one(&c1, "1"), one(&c1, "0"))],
    )
    .unwrap();
    let expect = |pairs: [(&str, &str); 2]| {
        Rel::from_pairs(
            c2.carrier().clone(),
            c2.carrier().clone(),
            pairs.map(|(b, a)| (one(&c2, b), one(&c2, a))),
        )
        .unwrap()
    };
    assert_eq!(c1.lift_r(&s, 1).unwrap(), expect([("01", "00"), ("11", "10")]));
    assert_eq!(c1.lift_l(&s, 1).unwrap(), expect([("10", "00"), ("11", "01")]));
}

#[test]
fn flip_two_cells() {
    let f = library::flip();
    let t2 = computation_square(&f, 2);
    assert_eq!(t2.square, btm_oracle(&f, 2));
    let c2 = CnCodec::new(f.states().clone(), f.alphabet().clone(), 2);
    let w = |s: &str| parse_word(f.alphabet(), s).unwrap();
    let found = c2
        .extract(t2.square.pass_right(), FixedEnd::Source, 0, &w("01"))
        .unwrap();
    assert_eq!(found.into_iter().collect::<Vec<_>>(), vec![(0, w("10"))]);
    let found = c2
        .extract(t2.square.pass_right(), FixedEnd::Target, 0, &w("10"))
        .unwrap();
    assert_eq!(found.into_iter().collect::<Vec<_>>(), vec![(0, w("01"))]);
}

/// The letter automaton's two-way square keeps only computations of at least
/// one step between moving states, while `⟨1⟩` keeps every computation.
/// Restricting `⟨1⟩` to moving states and adding back the zero-step turns
/// recovers one from the other.
#[test]
fn letter_automaton_square_is_restricted_execution_letter() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let m = random_btm(&mut rng, 3, 2);
        let a = m.to_letter_automaton();
        let c = CnCodec::new(m.states().clone(), m.alphabet().clone(), 1)
            .carrier()
            .clone();
        let relabel = |r: &Rel| r.relabel(c.clone(), c.clone()).unwrap();
        let two_way = twoway_oracle(&a, &[0]).unwrap();
        let one = btm_oracle(&m, 1);
        assert_eq!(one, execution_letter(&m));
        let ql = Rel::restriction(c.clone(), &a.left_moving()).unwrap();
        let qr = Rel::restriction(c.clone(), &a.right_moving()).unwrap();
        let within = |out: &Rel, r: &Rel, inp: &Rel| out.compose(&r.compose(inp).unwrap()).unwrap();
        let both = ql.intersection(&qr).unwrap();
        assert_eq!(relabel(two_way.pass_left()), within(&ql, one.pass_left(), &ql));
        assert_eq!(relabel(two_way.pass_right()), within(&qr, one.pass_right(), &qr));
        assert_eq!(
            relabel(two_way.left_turn()).union(&both).unwrap(),
            within(&ql, one.left_turn(), &qr)
        );
        assert_eq!(
            relabel(two_way.right_turn()).union(&both).unwrap(),
            within(&qr, one.right_turn(), &ql)
        );
    }
}

fn union_two_way(a: &TwoWayAutomaton, b: &TwoWayAutomaton) -> TwoWayAutomaton {
    let cat = |x: Vec<Rule>, y: Vec<Rule>| x.into_iter().chain(y).collect();
    TwoWayAutomaton::new(
        a.states().clone(),
        a.alphabet().clone(),
        cat(a.left_rules(), b.left_rules()),
        cat(a.right_rules(), b.right_rules()),
    )
    .unwrap()
}

fn union_btm(a: &Btm, b: &Btm) -> Btm {
    let cat = |x: Vec<Rule>, y: Vec<Rule>| x.into_iter().chain(y).collect();
    Btm::new(
        a.states().clone(),
        a.alphabet().clone(),
        cat(a.left_rules(), b.left_rules()),
        cat(a.right_rules(), b.right_rules()),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adding_rules_never_removes_pairs(seed in any::<u64>(), extra in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let small = random_two_way(&mut rng, 3, 2);
        let mut rng2 = ChaCha8Rng::seed_from_u64(extra);
        let more = random_two_way(&mut rng2, 3, 2);
        let union = union_two_way(&small, &more);
        for w in [vec![0], vec![1, 0], vec![0, 1, 1]] {
            let a = twoway_oracle(&small, &w).unwrap();
            let b = twoway_oracle(&union, &w).unwrap();
            prop_assert!(a.is_subset(&b));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let small = random_btm(&mut rng, 2, 2);
        let more = random_btm(&mut rng2, 2, 2);
        let union = union_btm(&small, &more);
        for n in 0..=2 {
            prop_assert!(btm_oracle(&small, n).is_subset(&btm_oracle(&union, n)));
        }
    }
}
