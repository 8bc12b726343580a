//! Differential checks of the algebra against the brute-force semantics.
//!
//! Each check returns `Err(Failure)` with a readable counterexample. The
//! vertical composition used by the algebraic side is injectable through
//! [`Ops`], so the harness itself can be mutation-tested.

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::{execution_letter, resolution_letter, CnCodec, FixedEnd, TInfty, TInftyElem};
use crate::intrel::{hcompose_with, HEdgeMap, Square};
use crate::machines::{Btm, Nfa, TwoWayAutomaton};
use crate::relalg::Rel;
use crate::semantics::{btm_oracle, btm_reachable_from, format_word, nfa_hom, twoway_oracle, BtmConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub property: &'static str,
    pub detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, self.detail)
    }
}

impl std::error::Error for Failure {}

pub type Check = Result<(), Failure>;

fn fail(property: &'static str, detail: impl Into<String>) -> Check {
    Err(Failure {
        property,
        detail: detail.into(),
    })
}

/// The compositions the algebraic side is evaluated with.
#[derive(Clone, Copy)]
pub struct Ops {
    pub vcompose: fn(&Square, &Square) -> Square,
}

impl Ops {
    pub fn standard() -> Ops {
        Ops {
            vcompose: |second, first| Square::vcompose(second, first).expect("same carrier"),
        }
    }

    /// A deliberately wrong vertical composition that multiplies the
    /// factors in the opposite order.
    pub fn corrupted() -> Ops {
        Ops {
            vcompose: |second, first| Square::vcompose(first, second).expect("same carrier"),
        }
    }

    pub fn word_square(&self, m: &TwoWayAutomaton, w: &[usize]) -> Square {
        let mut letters = w.iter().map(|&x| resolution_letter(m, x).expect("symbol in range"));
        let first = letters.next().expect("non-empty word");
        letters.fold(first, |acc, next| (self.vcompose)(&acc, &next))
    }

    pub fn compose_lengths(&self, t: &TInfty, left: &TInftyElem, right: &TInftyElem) -> TInftyElem {
        let l = t
            .codec(left.length)
            .lift_square_l(&left.square, right.length)
            .expect("codec carrier");
        let r = t
            .codec(right.length)
            .lift_square_r(&right.square, left.length)
            .expect("codec carrier");
        TInftyElem {
            square: (self.vcompose)(&l, &r),
            length: left.length + right.length,
        }
    }

    pub fn computation_square(&self, m: &Btm, n: usize) -> TInftyElem {
        let t = TInfty::for_machine(m);
        let letter = TInftyElem {
            square: execution_letter(m),
            length: 1,
        };
        (0..n).fold(t.identity(), |acc, _| self.compose_lengths(&t, &acc, &letter))
    }
}

/// All words over `symbols` letters with length in `min..=max`, shortest first.
pub fn words_up_to(symbols: usize, min: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for len in 0..=max {
        if len >= min {
            out.extend(layer.iter().cloned());
        }
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..symbols).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

fn show(m_alphabet: &crate::relalg::Carrier, w: &[usize]) -> String {
    if w.is_empty() {
        "λ".to_string()
    } else {
        format!("{:?}", format_word(m_alphabet, w))
    }
}

/// `t(uv) = t(u) ∘ t(v)`.
pub fn transition_hom(m: &Nfa, u: &[usize], v: &[usize]) -> Check {
    let uv: Vec<usize> = u.iter().chain(v).copied().collect();
    let lhs = nfa_hom(m, &uv).expect("symbols in range");
    let rhs = nfa_hom(m, u)
        .expect("symbols in range")
        .compose(&nfa_hom(m, v).expect("symbols in range"))
        .expect("same carrier");
    if lhs != rhs {
        return fail(
            "transition homomorphism",
            format!(
                "u={} v={}: t(uv)={lhs:?}, t(u)t(v)={rhs:?}",
                show(m.alphabet(), u),
                show(m.alphabet(), v)
            ),
        );
    }
    Ok(())
}

/// `t_{reverse m}(w) = converse(t_m(reversed w))`.
pub fn reversal(m: &Nfa, w: &[usize]) -> Check {
    let rev: Vec<usize> = w.iter().rev().copied().collect();
    let lhs = nfa_hom(&m.reverse(), w).expect("symbols in range");
    let rhs = nfa_hom(m, &rev).expect("symbols in range").converse();
    if lhs != rhs {
        return fail(
            "reversal symmetry",
            format!("w={}: {lhs:?} vs {rhs:?}", show(m.alphabet(), w)),
        );
    }
    Ok(())
}

/// Every letter's resolution square equals the oracle on that letter.
pub fn resolution_letters(m: &TwoWayAutomaton) -> Check {
    for x in 0..m.alphabet().size() {
        let alg = resolution_letter(m, x).expect("symbol in range");
        let ora = twoway_oracle(m, &[x]).expect("non-empty word");
        if alg != ora {
            return fail(
                "resolution letter",
                format!("letter {}: formula {alg:?}, oracle {ora:?}", m.alphabet().label(x)),
            );
        }
    }
    Ok(())
}

/// `word_square(w) = twoway_oracle(w)` for every word of length `1..=max_len`.
pub fn word_squares(ops: &Ops, m: &TwoWayAutomaton, max_len: usize) -> Check {
    for w in words_up_to(m.alphabet().size(), 1, max_len) {
        let alg = ops.word_square(m, &w);
        let ora = twoway_oracle(m, &w).expect("non-empty word");
        if alg != ora {
            return fail(
                "word square",
                format!("w={}: algebra {alg:?}, oracle {ora:?}", show(m.alphabet(), &w)),
            );
        }
    }
    Ok(())
}

/// `dual(word_square(m, w)) = word_square(swap m, w')` where `w'` is `w`
/// itself or, with `reverse`, its mirror image.
pub fn dual_swap(ops: &Ops, m: &TwoWayAutomaton, max_len: usize, reverse: bool) -> Check {
    let swapped = m.swap_directions();
    for w in words_up_to(m.alphabet().size(), 1, max_len) {
        let w2: Vec<usize> = if reverse {
            w.iter().rev().copied().collect()
        } else {
            w.clone()
        };
        let lhs = ops.word_square(m, &w).dual();
        let rhs = ops.word_square(&swapped, &w2);
        if lhs != rhs {
            return fail(
                if reverse {
                    "dual symmetry (mirrored word)"
                } else {
                    "dual symmetry"
                },
                format!("w={}: dual {lhs:?}, swapped {rhs:?}", show(m.alphabet(), &w)),
            );
        }
    }
    Ok(())
}

/// Splitting states preserves every global relation once the new states are
/// mapped back to the originals.
pub fn split_preserves(m: &TwoWayAutomaton, max_len: usize) -> Check {
    let (split, mapping) = m.split_to_birget();
    let q = m.states().clone();
    for w in words_up_to(m.alphabet().size(), 1, max_len) {
        let orig = twoway_oracle(m, &w).expect("non-empty word");
        let new = twoway_oracle(&split, &w).expect("non-empty word");
        let pushed = new
            .try_map(|r| r.map_pairs(q.clone(), q.clone(), |a| mapping[a], |b| mapping[b]))
            .expect("mapping in range");
        if pushed != orig {
            return fail(
                "state splitting",
                format!("w={}: original {orig:?}, split {pushed:?}", show(m.alphabet(), &w)),
            );
        }
    }
    Ok(())
}

/// Which identity-2 form to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointForm {
    /// `−→ = ⇌n −→ (←− −→)* n⇌`, turns as printed.
    Printed,
    /// `−→ = n⇌ −→ (←− −→)* ⇌n`, the left/right mirror of identity 1.
    Mirrored,
}

/// The four fixed-point identities of computation relations; returns the
/// 1-based numbers of the identities that fail.
pub fn fixed_point_failures(sq: &Square, form: FixedPointForm) -> Vec<usize> {
    let (pl, lt, rt, pr) = (sq.pass_left(), sq.left_turn(), sq.right_turn(), sq.pass_right());
    let c = |rs: &[&Rel]| -> Rel {
        rs.iter()
            .skip(1)
            .fold(rs[0].clone(), |acc, r| acc.compose(r).expect("same carrier"))
    };
    let rp_star = c(&[pr, pl]).star().expect("endo");
    let pr_star = c(&[pl, pr]).star().expect("endo");
    let id2 = match form {
        FixedPointForm::Printed => c(&[lt, pr, &pr_star, rt]),
        FixedPointForm::Mirrored => c(&[rt, pr, &pr_star, lt]),
    };
    let holds = [
        *pl == c(&[lt, pl, &rp_star, rt]),
        *pr == id2,
        *lt == c(&[lt, &pr_star, lt]),
        *rt == c(&[rt, &rp_star, rt]),
    ];
    (1..=4).filter(|i| !holds[i - 1]).collect()
}

pub fn fixed_point_identities(m: &Btm, n: usize, form: FixedPointForm) -> Check {
    let failed = fixed_point_failures(&btm_oracle(m, n), form);
    if !failed.is_empty() {
        return fail(
            if form == FixedPointForm::Printed {
                "fixed-point identities (printed)"
            } else {
                "fixed-point identities"
            },
            format!("n={n}: identities {failed:?} fail"),
        );
    }
    Ok(())
}

pub fn execution_letter_matches(m: &Btm) -> Check {
    let alg = execution_letter(m);
    let ora = btm_oracle(m, 1);
    if alg != ora {
        return fail("execution letter", format!("formula {alg:?}, oracle {ora:?}"));
    }
    Ok(())
}

/// Homomorphism laws of both lifts for `x, y` on `C_n`, padding by `pad`.
pub fn lift_hom(codec: &CnCodec, x: &Rel, y: &Rel, pad: usize) -> Check {
    let id = Rel::identity(codec.carrier().clone());
    let xy = x.compose(y).expect("same carrier");
    type Lift = fn(&CnCodec, &Rel, usize) -> Result<Rel, crate::algebra::AlgebraError>;
    let lifts: [(&str, Lift); 2] = [("r", CnCodec::lift_r), ("l", CnCodec::lift_l)];
    for (name, lift) in lifts {
        let l = |r: &Rel| lift(codec, r, pad).expect("codec carrier");
        if l(&xy) != l(x).compose(&l(y)).expect("same carrier") {
            return fail(
                "lift homomorphism",
                format!("{name}-lift by {pad} does not preserve x∘y = {xy:?}"),
            );
        }
        if l(&id) != Rel::identity(codec.extend(pad).carrier().clone()) {
            return fail("lift homomorphism", format!("{name}-lift by {pad} does not preserve I"));
        }
    }
    Ok(())
}

/// `lift_l(Y, n) ∘ lift_r(X, m)` against the stitched-pair set, for `Y` on
/// `C_m` and `X` on `C_n`.
pub fn lift_stitch(cm: &CnCodec, y: &Rel, cn: &CnCodec, x: &Rel) -> Check {
    let (m, n) = (cm.len(), cn.len());
    let lhs = cm
        .lift_l(y, n)
        .expect("codec carrier")
        .compose(&cn.lift_r(x, m).expect("codec carrier"))
        .expect("same carrier");
    let big = cm.extend(n);
    let mut pairs = Vec::new();
    for (yb, ya) in y.pairs() {
        let (q2, z) = cm.decode(yb);
        let (q1, yw) = cm.decode(ya);
        for (xb, xa) in x.pairs() {
            let (q1b, v) = cn.decode(xb);
            let (q, u) = cn.decode(xa);
            if q1b == q1 {
                let zv: Vec<usize> = z.iter().chain(&v).copied().collect();
                let yu: Vec<usize> = yw.iter().chain(&u).copied().collect();
                pairs.push((
                    big.encode(q2, &zv).expect("in range"),
                    big.encode(q, &yu).expect("in range"),
                ));
            }
        }
    }
    let rhs = Rel::from_pairs(big.carrier().clone(), big.carrier().clone(), pairs).expect("in range");
    if lhs != rhs {
        return fail(
            "lift stitching",
            format!("m={m} n={n}: composite {lhs:?}, stitched {rhs:?}"),
        );
    }
    Ok(())
}

/// `computation_square(m, n) = btm_oracle(m, n)` for `n ≤ max_n`.
pub fn computation_squares(ops: &Ops, m: &Btm, max_n: usize) -> Check {
    for n in 0..=max_n {
        let alg = ops.computation_square(m, n).square;
        let ora = btm_oracle(m, n);
        if alg != ora {
            return fail("computation square", format!("n={n}: algebra {alg:?}, oracle {ora:?}"));
        }
    }
    Ok(())
}

/// `t(a + b) = t(a) ⊙ t(b)` for `a + b ≤ max_total`.
pub fn length_hom(ops: &Ops, m: &Btm, max_total: usize) -> Check {
    let t = TInfty::for_machine(m);
    let sq: Vec<TInftyElem> = (0..=max_total).map(|n| ops.computation_square(m, n)).collect();
    for a in 0..=max_total {
        for b in 0..=max_total - a {
            let prod = ops.compose_lengths(&t, &sq[a], &sq[b]);
            if prod != sq[a + b] {
                return fail("length homomorphism", format!("a={a} b={b}: t(a)⊙t(b) ≠ t(a+b)"));
            }
        }
    }
    Ok(())
}

/// Oracle squares of lengths `m` and `n` compose to the oracle square of
/// length `m + n` in both orders.
pub fn both_orders(ops: &Ops, machine: &Btm, m: usize, n: usize) -> Check {
    let t = TInfty::for_machine(machine);
    let el = |k| TInftyElem {
        square: btm_oracle(machine, k),
        length: k,
    };
    let target = btm_oracle(machine, m + n);
    for (a, b) in [(m, n), (n, m)] {
        if ops.compose_lengths(&t, &el(a), &el(b)).square != target {
            return fail(
                "both orders",
                format!("⟨{a}⟩ on the left, ⟨{b}⟩ on the right ≠ ⟨{}⟩", m + n),
            );
        }
    }
    Ok(())
}

/// Identity and associativity of `⊙` on computation relations with total
/// length at most `max_total`.
pub fn tinfty_laws(ops: &Ops, m: &Btm, max_total: usize) -> Check {
    let t = TInfty::for_machine(m);
    let sq: Vec<TInftyElem> = (0..=max_total)
        .map(|n| TInftyElem {
            square: btm_oracle(m, n),
            length: n,
        })
        .collect();
    let one = t.identity();
    for a in &sq {
        if ops.compose_lengths(&t, &one, a) != *a || ops.compose_lengths(&t, a, &one) != *a {
            return fail("monoid identity", format!("length {}", a.length));
        }
    }
    for a in 0..=max_total {
        for b in 0..=max_total - a {
            for c in 0..=max_total - a - b {
                let lhs = ops.compose_lengths(&t, &ops.compose_lengths(&t, &sq[a], &sq[b]), &sq[c]);
                let rhs = ops.compose_lengths(&t, &sq[a], &ops.compose_lengths(&t, &sq[b], &sq[c]));
                if lhs != rhs {
                    return fail("associativity", format!("lengths {a}, {b}, {c}"));
                }
            }
        }
    }
    Ok(())
}

/// `hcompose(vcompose(a, c), vcompose(b, d)) = vcompose(hcompose(a, b), hcompose(c, d))`.
pub fn interchange(ops: &Ops, a: &Square, b: &Square, c: &Square, d: &Square, edges: HEdgeMap) -> Check {
    let lhs = hcompose_with(&(ops.vcompose)(a, c), &(ops.vcompose)(b, d), edges);
    let rhs = (ops.vcompose)(&hcompose_with(a, b, edges), &hcompose_with(c, d, edges));
    if lhs != rhs {
        return fail(
            "interchange law",
            format!("a={a:?} b={b:?} c={c:?} d={d:?}: {lhs:?} vs {rhs:?}"),
        );
    }
    Ok(())
}

/// Oracle computation relations are idempotent under horizontal composition.
pub fn horizontal_idempotent(m: &Btm, n: usize, edges: HEdgeMap) -> Check {
    let sq = btm_oracle(m, n);
    let h = hcompose_with(&sq, &sq, edges);
    if h != sq {
        return fail("horizontal idempotence", format!("n={n}: {sq:?} ⋅ itself = {h:?}"));
    }
    Ok(())
}

/// Head positions `(start, end)` of the boundary computations each field of
/// a computation square records, in `entries()` order.
fn field_heads(n: usize) -> [(usize, usize); 4] {
    [(n, 0), (0, 0), (n, n), (0, n)]
}

const FIELD_NAMES: [&str; 4] = ["pass_left", "left_turn", "right_turn", "pass_right"];

/// `extract` on every field of the oracle square agrees with a breadth-first
/// search from (source mode) or towards (target mode) configuration `(q, u)`.
pub fn extraction(m: &Btm, n: usize, q: usize, u: &[usize]) -> Check {
    let codec = CnCodec::new(m.states().clone(), m.alphabet().clone(), n);
    let sq = btm_oracle(m, n);
    for (k, ((start, end), rel)) in field_heads(n).into_iter().zip(sq.entries()).enumerate() {
        let got = codec.extract(rel, FixedEnd::Source, q, u).expect("valid configuration");
        let from = BtmConfig {
            word: u.to_vec(),
            head: start,
            state: q,
        };
        let expected: BTreeSet<(usize, Vec<usize>)> = btm_reachable_from(m, &from)
            .into_iter()
            .filter(|c| c.head == end)
            .map(|c| (c.state, c.word))
            .collect();
        if got != expected {
            return fail(
                "extraction",
                format!(
                    "{} from {:?}: extract {got:?}, search {expected:?}",
                    FIELD_NAMES[k], from
                ),
            );
        }

        let got = codec.extract(rel, FixedEnd::Target, q, u).expect("valid configuration");
        let to = BtmConfig {
            word: u.to_vec(),
            head: end,
            state: q,
        };
        let mut expected = BTreeSet::new();
        for value in 0..codec.word_count() {
            for p in 0..m.states().size() {
                let c = BtmConfig {
                    word: codec.word_of(value),
                    head: start,
                    state: p,
                };
                if btm_reachable_from(m, &c).contains(&to) {
                    expected.insert((p, c.word));
                }
            }
        }
        if got != expected {
            return fail(
                "extraction",
                format!("{} into {:?}: extract {got:?}, search {expected:?}", FIELD_NAMES[k], to),
            );
        }
    }
    Ok(())
}
