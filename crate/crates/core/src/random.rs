//! Seeded random machines and relations for property tests.
//!
//! Every `(symbol, state)` rule is present with probability 1/2; a present
//! rule gets a uniformly random non-empty target set (and, for bounded
//! machines, an independent non-empty output set).

use rand::Rng;

use crate::intrel::Square;
use crate::machines::{Btm, Mealy, Nfa, Rule, TwoWayAutomaton};
use crate::relalg::{Carrier, Rel};

pub fn state_carrier(n: usize) -> Carrier {
    Carrier::labeled((0..n).map(|i| format!("q{i}"))).expect("distinct labels")
}

/// Symbols `a, b, c, …`, continuing with `s26, s27, …` past the alphabet.
pub fn symbol_carrier(n: usize) -> Carrier {
    Carrier::labeled((0..n).map(|i| match u8::try_from(i) {
        Ok(i) if i < 26 => char::from(b'a' + i).to_string(),
        _ => format!("s{i}"),
    }))
    .expect("distinct labels")
}

/// A uniformly random non-empty subset of `0..n`, sorted. `n` must be positive.
pub fn nonempty_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    assert!(n > 0, "no non-empty subset of the empty set");
    loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

fn random_rules<R: Rng>(rng: &mut R, states: usize, symbols: usize, outputs: usize) -> Vec<Rule> {
    let mut rules = Vec::new();
    for x in 0..symbols {
        for q in 0..states {
            if rng.gen_bool(0.5) {
                let mut rule = Rule::new(x, q, nonempty_subset(rng, states));
                if outputs > 0 {
                    rule = rule.with_outputs(nonempty_subset(rng, outputs));
                }
                rules.push(rule);
            }
        }
    }
    rules
}

pub fn random_nfa<R: Rng>(rng: &mut R, states: usize, symbols: usize) -> Nfa {
    let rules = random_rules(rng, states, symbols, 0);
    Nfa::new(state_carrier(states), symbol_carrier(symbols), rules).expect("indices in range")
}

/// Outputs range over the input alphabet.
pub fn random_mealy<R: Rng>(rng: &mut R, states: usize, symbols: usize) -> Mealy {
    let rules = random_rules(rng, states, symbols, symbols);
    Mealy::new(state_carrier(states), symbol_carrier(symbols), rules).expect("indices in range")
}

pub fn random_two_way<R: Rng>(rng: &mut R, states: usize, symbols: usize) -> TwoWayAutomaton {
    let left = random_rules(rng, states, symbols, 0);
    let right = random_rules(rng, states, symbols, 0);
    TwoWayAutomaton::new(state_carrier(states), symbol_carrier(symbols), left, right).expect("indices in range")
}

pub fn random_btm<R: Rng>(rng: &mut R, states: usize, symbols: usize) -> Btm {
    let left = random_rules(rng, states, symbols, symbols);
    let right = random_rules(rng, states, symbols, symbols);
    Btm::new(state_carrier(states), symbol_carrier(symbols), left, right).expect("indices in range")
}

pub fn random_word<R: Rng>(rng: &mut R, symbols: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..symbols)).collect()
}

/// Each pair present independently with probability `density`.
pub fn random_rel<R: Rng>(rng: &mut R, dom: &Carrier, cod: &Carrier, density: f64) -> Rel {
    Rel::from_fn(dom.clone(), cod.clone(), |_, _| rng.gen_bool(density))
}

pub fn random_square<R: Rng>(rng: &mut R, carrier: &Carrier, density: f64) -> Square {
    let mut r = || random_rel(rng, carrier, carrier, density);
    let (pl, lt, rt, pr) = (r(), r(), r(), r());
    Square::new(pl, lt, rt, pr).expect("same carrier")
}
