//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits non-zero when a criterion fails that is not in `KNOWN_FALSE`. Those
//! three are statements that do not hold as written; their lines still read
//! FAIL, followed by the form that does hold.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use machine_monoids::algebra::CnCodec;
use machine_monoids::intrel::{HEdgeMap, Square, HCOMPOSE_EDGES};
use machine_monoids::machines::library::carry;
use machine_monoids::random::*;
use machine_monoids::relalg::{Carrier, Rel};
use machine_monoids::semantics::{mealy_run, parse_word};
use machine_monoids::verify::{self, Check, FixedPointForm, Ops};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type WordPairs = Vec<(Vec<usize>, Vec<usize>)>;
type Criterion = (u8, &'static str, fn() -> Report);

const KNOWN_FALSE: [u8; 3] = [5, 7, 12];

struct Report {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

impl Report {
    fn from_checks(count: usize, results: Vec<Check>, what: &str) -> Report {
        let failures: Vec<_> = results.into_iter().filter_map(Result::err).collect();
        match failures.first() {
            None => Report {
                pass: true,
                detail: format!("{count} {what}"),
                notes: vec![],
            },
            Some(first) => Report {
                pass: false,
                detail: format!("{} of {count} {what} fail; first: {first}", failures.len()),
                notes: vec![],
            },
        }
    }

    fn and(mut self, other: Report) -> Report {
        self.pass &= other.pass;
        self.detail = format!("{}; {}", self.detail, other.detail);
        self.notes.extend(other.notes);
        self
    }

    fn note(mut self, label: &str, other: Report) -> Report {
        let status = if other.pass { "holds" } else { "FAILS" };
        self.notes.push(format!("{label}: {status} ({})", other.detail));
        self
    }
}

fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + criterion)
}

fn c1_mealy_trace() -> Report {
    let m = carry();
    let w = parse_word(m.alphabet(), "101101").unwrap();
    let runs = mealy_run(&m, &w, 0).unwrap();
    let expected = [(parse_word(m.alphabet(), "011010").unwrap(), 1)].into_iter().collect();
    Report {
        pass: runs == expected,
        detail: format!("carry on 101101 from n gives {} run(s)", runs.len()),
        notes: vec![],
    }
}

fn random_nfas(r: &mut ChaCha8Rng, count: usize) -> Vec<(machine_monoids::Nfa, WordPairs)> {
    (0..count)
        .map(|_| {
            let (q, s) = (r.gen_range(1..=5), r.gen_range(1..=3));
            let m = random_nfa(r, q, s);
            let words = (0..8)
                .map(|_| {
                    let (lu, lv) = (r.gen_range(0..=4), r.gen_range(0..=4));
                    (random_word(r, s, lu), random_word(r, s, lv))
                })
                .collect();
            (m, words)
        })
        .collect()
}

fn c2_transition_hom() -> Report {
    let samples = random_nfas(&mut rng(2), 500);
    let results = samples
        .par_iter()
        .flat_map_iter(|(m, ws)| ws.iter().map(move |(u, v)| verify::transition_hom(m, u, v)))
        .collect();
    Report::from_checks(500 * 8, results, "(machine, u, v) samples")
}

fn c3_reversal() -> Report {
    let samples = random_nfas(&mut rng(3), 500);
    let results = samples
        .par_iter()
        .flat_map_iter(|(m, ws)| {
            ws.iter().map(move |(u, v)| {
                let w: Vec<usize> = u.iter().chain(v).copied().collect();
                verify::reversal(m, &w)
            })
        })
        .collect();
    Report::from_checks(500 * 8, results, "(machine, w) samples")
}

fn random_two_ways(r: &mut ChaCha8Rng, count: usize) -> Vec<machine_monoids::TwoWayAutomaton> {
    (0..count)
        .map(|_| {
            let (q, s) = (r.gen_range(1..=4), r.gen_range(1..=3));
            random_two_way(r, q, s)
        })
        .collect()
}

fn c4_resolution_letter() -> Report {
    let ms = random_two_ways(&mut rng(4), 200);
    let results = ms.par_iter().map(verify::resolution_letters).collect();
    Report::from_checks(200, results, "machines, every letter")
}

fn c5_word_squares() -> Report {
    let ms = random_two_ways(&mut rng(5), 200);
    let ops = Ops::standard();
    let oracle = Report::from_checks(
        200,
        ms.par_iter().map(|m| verify::word_squares(&ops, m, 5)).collect(),
        "machines, all words |w| ≤ 5, algebra = oracle",
    );
    let dual = Report::from_checks(
        200,
        ms.par_iter().map(|m| verify::dual_swap(&ops, m, 5, false)).collect(),
        "machines, dual(word_square(m,w)) = word_square(swap m, w)",
    );
    let mirrored = Report::from_checks(
        200,
        ms.par_iter().map(|m| verify::dual_swap(&ops, m, 5, true)).collect(),
        "machines",
    );
    oracle
        .and(dual)
        .note("dual(word_square(m,w)) = word_square(swap m, reverse w)", mirrored)
}

fn c6_split() -> Report {
    let ms = random_two_ways(&mut rng(6), 100);
    let results = ms.par_iter().map(|m| verify::split_preserves(m, 3)).collect();
    Report::from_checks(100, results, "machines, all words |w| ≤ 3")
}

fn random_btms(r: &mut ChaCha8Rng, count: usize) -> Vec<machine_monoids::Btm> {
    (0..count)
        .map(|_| {
            let (q, s) = (r.gen_range(1..=3), r.gen_range(1..=2));
            random_btm(r, q, s)
        })
        .collect()
}

fn c7_fixed_points() -> Report {
    // lengths 1..=3: ⟨0⟩ is the formal unit, not a relation computed on a tape
    let ms = random_btms(&mut rng(7), 200);
    let run = |form| {
        ms.par_iter()
            .flat_map_iter(|m| (1..=3).map(move |n| verify::fixed_point_identities(m, n, form)))
            .collect()
    };
    let printed = Report::from_checks(
        600,
        run(FixedPointForm::Printed),
        "(machine, n) samples, identities as printed",
    );
    let mirrored = Report::from_checks(600, run(FixedPointForm::Mirrored), "(machine, n) samples");
    printed.note(
        "identity 2 as the mirror of identity 1, −→ = n⇌ −→ (←− −→)* ⇌n",
        mirrored,
    )
}

fn c8_execution_letter() -> Report {
    let ms = random_btms(&mut rng(8), 200);
    let results = ms.par_iter().map(verify::execution_letter_matches).collect();
    Report::from_checks(200, results, "machines")
}

fn c9_lifts() -> Report {
    let mut r = rng(9);
    let mut samples = Vec::new();
    for _ in 0..200 {
        let states = state_carrier(r.gen_range(1..=3));
        let sigma = symbol_carrier(r.gen_range(1..=2));
        let (m, n, pad) = (r.gen_range(0..=2), r.gen_range(0..=2), r.gen_range(0..=2));
        let cm = CnCodec::new(states.clone(), sigma.clone(), m);
        let cn = CnCodec::new(states, sigma, n);
        let rel = |r: &mut ChaCha8Rng, c: &Carrier| random_rel(r, c, c, 0.3);
        let (x, x2) = (rel(&mut r, cn.carrier()), rel(&mut r, cn.carrier()));
        let y = rel(&mut r, cm.carrier());
        samples.push((cm, cn, x, x2, y, pad));
    }
    let results = samples
        .par_iter()
        .flat_map_iter(|(cm, cn, x, x2, y, pad)| [verify::lift_hom(cn, x, x2, *pad), verify::lift_stitch(cm, y, cn, x)])
        .collect();
    Report::from_checks(200, results, "samples of both laws and the stitched-pair formula")
}

fn c10_computation_squares() -> Report {
    let ms = random_btms(&mut rng(10), 100);
    let ops = Ops::standard();
    let squares = Report::from_checks(
        100,
        ms.par_iter().map(|m| verify::computation_squares(&ops, m, 3)).collect(),
        "machines, n ≤ 3",
    );
    let hom = Report::from_checks(
        100,
        ms.par_iter().map(|m| verify::length_hom(&ops, m, 4)).collect(),
        "machines, a + b ≤ 4",
    );
    let orders = Report::from_checks(
        400,
        ms.par_iter()
            .flat_map_iter(|m| [(1, 1), (1, 2), (2, 1), (2, 2)].map(|(a, b)| verify::both_orders(&ops, m, a, b)))
            .collect(),
        "(machine, m, n) both-order samples",
    );
    squares.and(hom).and(orders)
}

fn c11_tinfty_laws() -> Report {
    let ms = random_btms(&mut rng(11), 100);
    let ops = Ops::standard();
    let results = ms.par_iter().map(|m| verify::tinfty_laws(&ops, m, 4)).collect();
    Report::from_checks(100, results, "machines, lengths summing to ≤ 4")
}

fn c12_interchange() -> Report {
    let ops = Ops::standard();
    let point = Carrier::unlabeled(1);
    let squares: Vec<Square> = (0u8..16)
        .map(|bits| {
            let r = |k: u8| {
                if bits >> k & 1 == 1 {
                    Rel::identity(point.clone())
                } else {
                    Rel::empty(point.clone(), point.clone())
                }
            };
            Square::new(r(0), r(1), r(2), r(3)).unwrap()
        })
        .collect();
    let exhaustive = |edges| {
        let results: Vec<Check> = (0u32..1 << 16)
            .into_par_iter()
            .map(|bits| {
                let pick = |k: u32| &squares[(bits >> (4 * k) & 15) as usize];
                verify::interchange(&ops, pick(0), pick(1), pick(2), pick(3), edges)
            })
            .collect();
        Report::from_checks(1 << 16, results, "one-point quadruples")
    };
    let mut r = rng(12);
    let quads: Vec<[Square; 4]> = (0..1000)
        .map(|_| {
            let c = Carrier::unlabeled(r.gen_range(1..=3));
            [(); 4].map(|_| random_square(&mut r, &c, 0.4))
        })
        .collect();
    let random = Report::from_checks(
        1000,
        quads
            .par_iter()
            .map(|[a, b, c, d]| verify::interchange(&ops, a, b, c, d, HCOMPOSE_EDGES))
            .collect(),
        "random quadruples on carriers ≤ 3",
    );
    exhaustive(HCOMPOSE_EDGES).and(random).note(
        "alternative edge mapping (left_turn on top), exhaustive",
        exhaustive(HEdgeMap::LeftTurnOnTop),
    )
}

fn c13_horizontal_idempotent() -> Report {
    let ms = random_btms(&mut rng(13), 100);
    let run = |edges| {
        let results = ms
            .par_iter()
            .flat_map_iter(|m| (0..=2).map(move |n| verify::horizontal_idempotent(m, n, edges)))
            .collect();
        Report::from_checks(300, results, "(machine, n ≤ 2) samples")
    };
    run(HCOMPOSE_EDGES).note(
        "alternative edge mapping (left_turn on top)",
        run(HEdgeMap::LeftTurnOnTop),
    )
}

fn c14_extraction() -> Report {
    let mut r = rng(14);
    let samples: Vec<_> = (0..100)
        .map(|_| {
            let (q, s) = (r.gen_range(1..=3), r.gen_range(1..=2));
            let m = random_btm(&mut r, q, s);
            let n = r.gen_range(1..=3);
            let state = r.gen_range(0..q);
            let u = random_word(&mut r, s, n);
            (m, n, state, u)
        })
        .collect();
    let results = samples
        .par_iter()
        .map(|(m, n, q, u)| verify::extraction(m, *n, *q, u))
        .collect();
    Report::from_checks(100, results, "(machine, n, q, u) samples, all fields, both ends")
}

fn c15_kernel_speed() -> Report {
    let mut r = rng(15);
    let c = Carrier::unlabeled(1024);
    let a = random_rel(&mut r, &c, &c, 0.5);
    let b = random_rel(&mut r, &c, &c, 0.5);
    let sparse = random_rel(&mut r, &c, &c, 2.0 / 1024.0);
    let time = |f: &dyn Fn() -> Rel| {
        let start = Instant::now();
        let out = f();
        (start.elapsed(), out)
    };
    let (t_compose, _) = time(&|| a.compose(&b).unwrap());
    let (t_star_dense, _) = time(&|| a.star().unwrap());
    let (t_star_sparse, closure) = time(&|| sparse.star().unwrap());
    let limit = Duration::from_secs(1);
    Report {
        pass: t_compose < limit
            && t_star_dense < limit
            && t_star_sparse < limit
            && closure.is_subset(&closure.compose(&closure).unwrap()),
        detail: format!(
            "1024×1024 compose {:.1} ms, star (dense) {:.1} ms, star (sparse) {:.1} ms",
            t_compose.as_secs_f64() * 1e3,
            t_star_dense.as_secs_f64() * 1e3,
            t_star_sparse.as_secs_f64() * 1e3
        ),
        notes: vec![],
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 15] = [
        (1, "Mealy carry trace", c1_mealy_trace),
        (2, "transition homomorphism", c2_transition_hom),
        (3, "reversal symmetry", c3_reversal),
        (4, "resolution letter = oracle", c4_resolution_letter),
        (5, "word squares = oracle, dual check", c5_word_squares),
        (6, "state splitting", c6_split),
        (7, "fixed-point identities of computation relations", c7_fixed_points),
        (8, "execution letter = oracle", c8_execution_letter),
        (9, "lift homomorphisms and stitching", c9_lifts),
        (
            10,
            "computation squares, length homomorphism, both orders",
            c10_computation_squares,
        ),
        (11, "T∞ monoid laws", c11_tinfty_laws),
        (12, "interchange law", c12_interchange),
        (13, "horizontal idempotence", c13_horizontal_idempotent),
        (14, "extraction = search", c14_extraction),
        (15, "kernel speed", c15_kernel_speed),
    ];
    let start = Instant::now();
    let mut unexpected = Vec::new();
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        let t = Instant::now();
        let report = run();
        let status = if report.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {id:>2} {name}: {} [{:.2}s]",
            report.detail,
            t.elapsed().as_secs_f64()
        );
        for note in &report.notes {
            println!("        {note}");
        }
        if !report.pass {
            failed.push(id);
            if !KNOWN_FALSE.contains(&id) {
                unexpected.push(id);
            }
        }
    }
    println!(
        "{} of 15 criteria pass; failing {:?} ({} expected); total {:.1}s",
        15 - failed.len(),
        failed,
        failed.len() - unexpected.len(),
        start.elapsed().as_secs_f64()
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
