//! The randomized differential suite behind `machmon verify`.
//!
//! Trial `i` draws everything from a ChaCha8 stream seeded with `seed + i`,
//! so any trial replays on its own as trial 0 of `--seed seed+i`.

use machine_monoids::algebra::CnCodec;
use machine_monoids::intrel::HCOMPOSE_EDGES;
use machine_monoids::machines::library::carry;
use machine_monoids::random::*;
use machine_monoids::semantics::{mealy_run, parse_word};
use machine_monoids::verify::{self, Check, Failure, FixedPointForm, Ops};
use machine_monoids::Machine;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{rel_value, Counterexample, PropertyCount, Verification};

pub const PROPERTIES: [&str; 16] = [
    "mealy carry trace",
    "transition homomorphism",
    "reversal symmetry",
    "resolution letter = oracle",
    "word square = oracle",
    "dual reverses words",
    "state splitting",
    "fixed-point identities",
    "execution letter = oracle",
    "lift laws",
    "computation square = oracle",
    "length homomorphism",
    "both orders",
    "monoid laws",
    "horizontal idempotence",
    "extraction = search",
];

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_states: usize,
    pub max_symbols: usize,
    pub max_length: usize,
    pub mutate: bool,
}

struct Outcome {
    property: &'static str,
    check: Check,
    subject: Value,
}

fn machine_value(m: Machine) -> Value {
    serde_json::to_value(m.to_file()).expect("machine serializes")
}

fn run_trial(cfg: &SuiteConfig, trial_seed: u64) -> Vec<Outcome> {
    let ops = if cfg.mutate { Ops::corrupted() } else { Ops::standard() };
    let mut r = ChaCha8Rng::seed_from_u64(trial_seed);
    let mut out = Vec::new();
    let mut push = |property: &'static str, check: Check, subject: &dyn Fn() -> Value| {
        let subject = if check.is_err() { subject() } else { Value::Null };
        out.push(Outcome {
            property,
            check,
            subject,
        });
    };
    let len = cfg.max_length;
    let sizes = |r: &mut ChaCha8Rng| (r.gen_range(1..=cfg.max_states), r.gen_range(1..=cfg.max_symbols));

    let c = carry();
    let w = parse_word(c.alphabet(), "101101").expect("carry alphabet");
    let runs = mealy_run(&c, &w, 0).expect("valid start");
    let expected = [(parse_word(c.alphabet(), "011010").expect("carry alphabet"), 1)]
        .into_iter()
        .collect();
    let trace = if runs == expected {
        Ok(())
    } else {
        Err(Failure {
            property: "mealy carry trace",
            detail: format!("{runs:?}"),
        })
    };
    push(PROPERTIES[0], trace, &|| machine_value(Machine::Mealy(carry())));

    let (q, s) = sizes(&mut r);
    let nfa = random_nfa(&mut r, q, s);
    let (lu, lv) = (r.gen_range(0..=len), r.gen_range(0..=len));
    let (u, v) = (random_word(&mut r, s, lu), random_word(&mut r, s, lv));
    let uv: Vec<usize> = u.iter().chain(&v).copied().collect();
    let nfa_subject = || machine_value(Machine::Nfa(nfa.clone()));
    push(PROPERTIES[1], verify::transition_hom(&nfa, &u, &v), &nfa_subject);
    push(PROPERTIES[2], verify::reversal(&nfa, &uv), &nfa_subject);

    let (q, s) = sizes(&mut r);
    let tw = random_two_way(&mut r, q, s);
    let tw_subject = || machine_value(Machine::TwoWay(tw.clone()));
    push(PROPERTIES[3], verify::resolution_letters(&tw), &tw_subject);
    push(PROPERTIES[4], verify::word_squares(&ops, &tw, len), &tw_subject);
    push(PROPERTIES[5], verify::dual_swap(&ops, &tw, len, true), &tw_subject);
    push(PROPERTIES[6], verify::split_preserves(&tw, len.min(3)), &tw_subject);

    let (q, s) = sizes(&mut r);
    let btm = random_btm(&mut r, q, s);
    let btm_subject = || machine_value(Machine::Btm(btm.clone()));
    let n = r.gen_range(1..=len);
    push(
        PROPERTIES[7],
        verify::fixed_point_identities(&btm, n, FixedPointForm::Mirrored),
        &btm_subject,
    );
    push(PROPERTIES[8], verify::execution_letter_matches(&btm), &btm_subject);

    let states = state_carrier(r.gen_range(1..=cfg.max_states));
    let sigma = symbol_carrier(r.gen_range(1..=cfg.max_symbols));
    let (m, n, pad) = (r.gen_range(0..=2), r.gen_range(0..=2), r.gen_range(0..=2));
    let cm = CnCodec::new(states.clone(), sigma.clone(), m);
    let cn = CnCodec::new(states, sigma, n);
    let x = random_rel(&mut r, cn.carrier(), cn.carrier(), 0.3);
    let x2 = random_rel(&mut r, cn.carrier(), cn.carrier(), 0.3);
    let y = random_rel(&mut r, cm.carrier(), cm.carrier(), 0.3);
    let lifts = verify::lift_hom(&cn, &x, &x2, pad).and_then(|()| verify::lift_stitch(&cm, &y, &cn, &x));
    push(
        PROPERTIES[9],
        lifts,
        &|| json!({ "x": rel_value(&x), "x2": rel_value(&x2), "y": rel_value(&y), "pad": pad }),
    );

    push(
        PROPERTIES[10],
        verify::computation_squares(&ops, &btm, len),
        &btm_subject,
    );
    push(PROPERTIES[11], verify::length_hom(&ops, &btm, len), &btm_subject);
    let orders = if len >= 2 {
        let a = r.gen_range(1..len);
        let b = r.gen_range(1..=len - a);
        verify::both_orders(&ops, &btm, a, b)
    } else {
        Ok(())
    };
    push(PROPERTIES[12], orders, &btm_subject);
    push(PROPERTIES[13], verify::tinfty_laws(&ops, &btm, len), &btm_subject);
    let n = r.gen_range(0..=len.min(2));
    push(
        PROPERTIES[14],
        verify::horizontal_idempotent(&btm, n, HCOMPOSE_EDGES),
        &btm_subject,
    );

    let n = r.gen_range(1..=len);
    let q = r.gen_range(0..btm.states().size());
    let u = random_word(&mut r, btm.alphabet().size(), n);
    push(PROPERTIES[15], verify::extraction(&btm, n, q, &u), &btm_subject);
    out
}

pub fn run(cfg: &SuiteConfig) -> Verification {
    let results: Vec<Vec<Outcome>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, cfg.seed.wrapping_add(i as u64)))
        .collect();
    let mut properties: Vec<PropertyCount> = PROPERTIES
        .iter()
        .map(|p| PropertyCount {
            property: p.to_string(),
            passed: 0,
            failed: 0,
        })
        .collect();
    let mut first = None;
    for (trial, outcomes) in results.into_iter().enumerate() {
        for (k, o) in outcomes.into_iter().enumerate() {
            match o.check {
                Ok(()) => properties[k].passed += 1,
                Err(failure) => {
                    properties[k].failed += 1;
                    first.get_or_insert_with(|| Counterexample {
                        trial,
                        trial_seed: cfg.seed.wrapping_add(trial as u64),
                        property: o.property.to_string(),
                        detail: failure.to_string(),
                        subject: o.subject,
                    });
                }
            }
        }
    }
    Verification {
        seed: cfg.seed,
        trials: cfg.trials,
        passed: properties.iter().map(|p| p.passed).sum(),
        failed: properties.iter().map(|p| p.failed).sum(),
        properties,
        first_counterexample: first,
    }
}
