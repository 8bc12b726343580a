//! The algebraic side: square-valued homomorphisms for two-way automata and
//! the length-graded monoid `T∞` for bounded Turing machines.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::intrel::{vcompose_unchecked, Square};
use crate::machines::{Btm, TwoWayAutomaton};
use crate::relalg::{Carrier, Rel, RelError};
use crate::semantics::format_word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("symbol index {index} out of range (alphabet size {size})")]
    UnknownSymbol { index: usize, size: usize },
    #[error("state index {index} out of range ({size} states)")]
    UnknownState { index: usize, size: usize },
    #[error("word has length {found}, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("relation is not over the configuration carrier for length {0}")]
    CarrierMismatch(usize),
    #[error("{0}")]
    Rel(#[from] RelError),
}

/// Encoding of `C_n = Q × Σ^n`: `(q, u) ↦ q + |Q|·value(u)`, where `value`
/// reads `u` in base `|Σ|` with the leftmost symbol most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnCodec {
    states: Carrier,
    alphabet: Carrier,
    n: usize,
    words: usize,
    carrier: Carrier,
}

impl CnCodec {
    pub fn new(states: Carrier, alphabet: Carrier, n: usize) -> CnCodec {
        let words = alphabet.size().pow(n as u32);
        let nq = states.size();
        let ns = alphabet.size();
        let mut labels = Vec::with_capacity(nq * words);
        for value in 0..words {
            let word = word_of(ns, n, value);
            let w = format_word(&alphabet, &word);
            for q in 0..nq {
                labels.push(format!("{}:{}", states.label(q), w));
            }
        }
        let carrier = Carrier::labeled(labels).unwrap_or_else(|_| Carrier::unlabeled(nq * words));
        CnCodec {
            states,
            alphabet,
            n,
            words,
            carrier,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn states(&self) -> &Carrier {
        &self.states
    }

    pub fn alphabet(&self) -> &Carrier {
        &self.alphabet
    }

    /// `|Σ|^n`.
    pub fn word_count(&self) -> usize {
        self.words
    }

    pub fn value_of(&self, u: &[usize]) -> Result<usize, AlgebraError> {
        if u.len() != self.n {
            return Err(AlgebraError::WrongLength {
                expected: self.n,
                found: u.len(),
            });
        }
        let ns = self.alphabet.size();
        u.iter().try_fold(0, |acc, &x| {
            if x >= ns {
                Err(AlgebraError::UnknownSymbol { index: x, size: ns })
            } else {
                Ok(acc * ns + x)
            }
        })
    }

    pub fn word_of(&self, value: usize) -> Vec<usize> {
        word_of(self.alphabet.size(), self.n, value)
    }

    pub fn encode(&self, q: usize, u: &[usize]) -> Result<usize, AlgebraError> {
        if q >= self.states.size() {
            return Err(AlgebraError::UnknownState {
                index: q,
                size: self.states.size(),
            });
        }
        Ok(q + self.states.size() * self.value_of(u)?)
    }

    pub fn decode(&self, index: usize) -> (usize, Vec<usize>) {
        let nq = self.states.size();
        (index % nq, self.word_of(index / nq))
    }

    /// The codec for length `n + extra` over the same states and alphabet.
    pub fn extend(&self, extra: usize) -> CnCodec {
        CnCodec::new(self.states.clone(), self.alphabet.clone(), self.n + extra)
    }

    fn check(&self, r: &Rel) -> Result<(), AlgebraError> {
        if r.dom() == &self.carrier && r.cod() == &self.carrier {
            Ok(())
        } else {
            Err(AlgebraError::CarrierMismatch(self.n))
        }
    }

    /// Extends a relation on `C_n` to `C_{m+n}` by prefixing every word on
    /// both sides with the same untouched `w ∈ Σ^m`.
    pub fn lift_r(&self, s: &Rel, m: usize) -> Result<Rel, AlgebraError> {
        self.check(s)?;
        let big = self.extend(m);
        let stride = self.states.size() * self.words;
        let pads = self.alphabet.size().pow(m as u32);
        let mut pairs = Vec::with_capacity(s.len() * pads);
        for (b, a) in s.pairs() {
            for w in 0..pads {
                pairs.push((b + stride * w, a + stride * w));
            }
        }
        Ok(Rel::from_pairs(big.carrier.clone(), big.carrier, pairs)?)
    }

    /// Extends a relation on `C_m` to `C_{m+n}` by suffixing every word with
    /// the same untouched `w ∈ Σ^n`.
    pub fn lift_l(&self, t: &Rel, n: usize) -> Result<Rel, AlgebraError> {
        self.check(t)?;
        let big = self.extend(n);
        let nq = self.states.size();
        let pads = self.alphabet.size().pow(n as u32);
        let shift = |i: usize, w: usize| i % nq + nq * ((i / nq) * pads + w);
        let mut pairs = Vec::with_capacity(t.len() * pads);
        for (b, a) in t.pairs() {
            for w in 0..pads {
                pairs.push((shift(b, w), shift(a, w)));
            }
        }
        Ok(Rel::from_pairs(big.carrier.clone(), big.carrier, pairs)?)
    }

    pub fn lift_square_r(&self, s: &Square, m: usize) -> Result<Square, AlgebraError> {
        let [pl, lt, rt, pr] = s.entries().map(|r| self.lift_r(r, m));
        Ok(Square::new(pl?, lt?, rt?, pr?)?)
    }

    pub fn lift_square_l(&self, s: &Square, n: usize) -> Result<Square, AlgebraError> {
        let [pl, lt, rt, pr] = s.entries().map(|r| self.lift_l(r, n));
        Ok(Square::new(pl?, lt?, rt?, pr?)?)
    }

    /// Configurations linked to `(q, u)` by `s`: with `FixedEnd::Source` the
    /// targets reachable from it, with `FixedEnd::Target` the sources that
    /// reach it. Obtained by composing with the singleton idempotent.
    pub fn extract(
        &self,
        s: &Rel,
        fixed: FixedEnd,
        q: usize,
        u: &[usize],
    ) -> Result<BTreeSet<(usize, Vec<usize>)>, AlgebraError> {
        self.check(s)?;
        let i = self.encode(q, u)?;
        let idem = Rel::restriction(self.carrier.clone(), &[i])?;
        let ends: Vec<usize> = match fixed {
            FixedEnd::Source => s.compose(&idem)?.image(i).collect(),
            FixedEnd::Target => idem.compose(s)?.preimage(i).collect(),
        };
        Ok(ends.into_iter().map(|e| self.decode(e)).collect())
    }
}

fn word_of(ns: usize, n: usize, mut value: usize) -> Vec<usize> {
    let mut w = vec![0; n];
    for k in (0..n).rev() {
        w[k] = value % ns;
        value /= ns;
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedEnd {
    Source,
    Target,
}

/// The resolution square of a single letter:
///
/// ```text
/// ←−  = 1_Ql · k(jk)*   · 1_Ql      ⇌  = 1_Ql · (kj)(kj)* · 1_Qr
/// ⇌   = 1_Qr · (jk)(jk)* · 1_Ql     −→ = 1_Qr · j(kj)*    · 1_Qr
/// ```
///
/// where `j` and `k` are the right- and left-step relations of `x`.
pub fn resolution_letter(m: &TwoWayAutomaton, x: usize) -> Result<Square, AlgebraError> {
    let size = m.alphabet().size();
    if x >= size {
        return Err(AlgebraError::UnknownSymbol { index: x, size });
    }
    let c = m.states().clone();
    let j = m.right_step(x);
    let k = m.left_step(x);
    let ql = Rel::restriction(c.clone(), &m.left_moving())?;
    let qr = Rel::restriction(c.clone(), &m.right_moving())?;
    let kj = k.compose(&j)?;
    let jk = j.compose(&k)?;
    let kj_star = kj.star()?;
    let jk_star = jk.star()?;
    let within = |lhs: &Rel, r: Rel, rhs: &Rel| -> Result<Rel, RelError> { lhs.compose(&r)?.compose(rhs) };
    Ok(Square::new(
        within(&ql, k.compose(&jk_star)?, &ql)?,
        within(&ql, kj.compose(&kj_star)?, &qr)?,
        within(&qr, jk.compose(&jk_star)?, &ql)?,
        within(&qr, j.compose(&kj_star)?, &qr)?,
    )?)
}

/// `[w]`, folding letters so that `[uv] = [u] ⋅ [v]` in `vcompose` order.
/// The empty word gives [`empty_word_square`].
pub fn word_square(m: &TwoWayAutomaton, w: &[usize]) -> Result<Square, AlgebraError> {
    let mut letters = w.iter().map(|&x| resolution_letter(m, x));
    let Some(first) = letters.next() else {
        return empty_word_square(m);
    };
    letters.try_fold(first?, |acc, next| Ok(vcompose_unchecked(&acc, &next?)))
}

/// `[λ]`: the passes are the identities on the moving sets and both turns
/// are empty. This is the two-sided identity for every `[w]`.
pub fn empty_word_square(m: &TwoWayAutomaton) -> Result<Square, AlgebraError> {
    let c = m.states().clone();
    Ok(Square::new(
        Rel::restriction(c.clone(), &m.left_moving())?,
        Rel::empty(c.clone(), c.clone()),
        Rel::empty(c.clone(), c.clone()),
        Rel::restriction(c, &m.right_moving())?,
    )?)
}

/// An element of `T∞`: a square on `C_length`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TInftyElem {
    pub square: Square,
    pub length: usize,
}

/// The graded monoid of computation squares over fixed states and alphabet.
#[derive(Debug, Clone)]
pub struct TInfty {
    states: Carrier,
    alphabet: Carrier,
}

impl TInfty {
    pub fn new(states: Carrier, alphabet: Carrier) -> TInfty {
        TInfty { states, alphabet }
    }

    pub fn for_machine(m: &Btm) -> TInfty {
        TInfty::new(m.states().clone(), m.alphabet().clone())
    }

    pub fn codec(&self, n: usize) -> CnCodec {
        CnCodec::new(self.states.clone(), self.alphabet.clone(), n)
    }

    /// The unit: the identity square on `C_0`.
    pub fn identity(&self) -> TInftyElem {
        TInftyElem {
            square: Square::identity(self.codec(0).carrier().clone()),
            length: 0,
        }
    }

    pub fn element(&self, square: Square, length: usize) -> Result<TInftyElem, AlgebraError> {
        if square.carrier() != self.codec(length).carrier() {
            return Err(AlgebraError::CarrierMismatch(length));
        }
        Ok(TInftyElem { square, length })
    }

    /// `left ⊙ right`: the square for the tape `left·right`. The left part is
    /// padded with the right part's cells and vice versa, then the two are
    /// composed vertically.
    pub fn compose_lengths(&self, left: &TInftyElem, right: &TInftyElem) -> Result<TInftyElem, AlgebraError> {
        let cl = self.codec(left.length);
        let cr = self.codec(right.length);
        let l = cl.lift_square_l(&left.square, right.length)?;
        let r = cr.lift_square_r(&right.square, left.length)?;
        Ok(TInftyElem {
            square: Square::vcompose(&l, &r)?,
            length: left.length + right.length,
        })
    }
}

/// `⟨1⟩`: the single-cell square, from the machine's letter automaton `A₁`
/// with step relations `j` (right) and `k` (left):
///
/// ```text
/// ←− = k(jk)*    ⇌ = (kj)*
/// ⇌  = (jk)*     −→ = j(kj)*
/// ```
///
/// No moving-set restriction applies and the turns include the identity, so
/// zero-step computations count.
pub fn execution_letter(m: &Btm) -> Square {
    let a = m.to_letter_automaton();
    let j = a.right_step(0);
    let k = a.left_step(0);
    let kj_star = k.compose_unchecked(&j).star_unchecked();
    let jk_star = j.compose_unchecked(&k).star_unchecked();
    let pass_left = k.compose_unchecked(&jk_star);
    let pass_right = j.compose_unchecked(&kj_star);
    // letter index q + |Q|·x is the codec index for n = 1
    let c = CnCodec::new(m.states().clone(), m.alphabet().clone(), 1)
        .carrier()
        .clone();
    let on_c = |r: Rel| r.relabel(c.clone(), c.clone()).expect("same size");
    Square::new(on_c(pass_left), on_c(kj_star), on_c(jk_star), on_c(pass_right)).expect("same carrier")
}

/// `⟨n⟩ = ⟨n-1⟩ ⊙ ⟨1⟩`, with `⟨0⟩` the unit.
pub fn computation_square(m: &Btm, n: usize) -> TInftyElem {
    let t = TInfty::for_machine(m);
    let letter = TInftyElem {
        square: execution_letter(m),
        length: 1,
    };
    (0..n).fold(t.identity(), |acc, _| {
        t.compose_lengths(&acc, &letter).expect("codec carriers")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::library::*;
    use crate::semantics::{btm_oracle, twoway_oracle};

    #[test]
    fn codec_examples() {
        let c = CnCodec::new(
            Carrier::labeled(["p", "q"]).unwrap(),
            Carrier::labeled(["a", "b"]).unwrap(),
            2,
        );
        assert_eq!(c.encode(1, &[1, 0]).unwrap(), 5);
        assert_eq!(c.decode(5), (1, vec![1, 0]));
        assert_eq!(c.carrier().label(5), "q:ba");
        assert_eq!(c.carrier().size(), 8);
        assert!(c.encode(0, &[0]).is_err());
        assert!(c.encode(2, &[0, 0]).is_err());
        for i in 0..8 {
            let (q, u) = c.decode(i);
            assert_eq!(c.encode(q, &u).unwrap(), i);
        }
    }

    #[test]
    fn letter_states_match_codec_labels() {
        let m = flip();
        let letter = m.to_letter_automaton();
        let c = CnCodec::new(m.states().clone(), m.alphabet().clone(), 1);
        assert_eq!(letter.states(), c.carrier());
    }

    #[test]
    fn lifts_pad_the_other_side() {
        let states = Carrier::labeled(["s"]).unwrap();
        let sigma = Carrier::labeled(["0", "1"]).unwrap();
        let c1 = CnCodec::new(states, sigma, 1);
        let c = c1.carrier().clone();
        let swap = Rel::from_pairs(c.clone(), c.clone(), [(1, 0)]).unwrap();
        let c2 = c1.extend(1);
        let big = c2.carrier();
        let at = |l: &str| big.index_of(l).unwrap();
        let r = c1.lift_r(&swap, 1).unwrap();
        assert_eq!(r.pairs(), vec![(at("s:01"), at("s:00")), (at("s:11"), at("s:10"))]);
        let l = c1.lift_l(&swap, 1).unwrap();
        assert_eq!(l.pairs(), vec![(at("s:10"), at("s:00")), (at("s:11"), at("s:01"))]);
        assert!(c2.lift_r(&swap, 1).is_err());
    }

    #[test]
    fn lift_by_zero_is_identity() {
        let m = flip();
        let sq = execution_letter(&m);
        let c = CnCodec::new(m.states().clone(), m.alphabet().clone(), 1);
        assert_eq!(c.lift_square_r(&sq, 0).unwrap(), sq);
        assert_eq!(c.lift_square_l(&sq, 0).unwrap(), sq);
    }

    #[test]
    fn flip_letter_and_two_cells_match_oracle() {
        let m = flip();
        assert_eq!(execution_letter(&m), btm_oracle(&m, 1));
        assert_eq!(computation_square(&m, 2).square, btm_oracle(&m, 2));
        let zero = computation_square(&m, 0);
        assert_eq!(zero.square, btm_oracle(&m, 0));
    }

    #[test]
    fn machine_e_resolution_matches_oracle() {
        let m = machine_e();
        assert_eq!(resolution_letter(&m, 0).unwrap(), twoway_oracle(&m, &[0]).unwrap());
        for n in 1..5 {
            let w = vec![0; n];
            assert_eq!(word_square(&m, &w).unwrap(), twoway_oracle(&m, &w).unwrap());
        }
    }

    #[test]
    fn empty_word_is_identity_on_word_squares() {
        let m = machine_e();
        let e = empty_word_square(&m).unwrap();
        let w = word_square(&m, &[0, 0]).unwrap();
        assert_eq!(Square::vcompose(&e, &w).unwrap(), w);
        assert_eq!(Square::vcompose(&w, &e).unwrap(), w);
        assert_eq!(word_square(&m, &[]).unwrap(), e);
    }

    #[test]
    fn anti_diagonal_unit_is_idempotent_but_not_an_identity() {
        let m = machine_e();
        let c = m.states().clone();
        let anti = Square::new(
            Rel::empty(c.clone(), c.clone()),
            Rel::restriction(c.clone(), &m.left_moving()).unwrap(),
            Rel::restriction(c.clone(), &m.right_moving()).unwrap(),
            Rel::empty(c.clone(), c),
        )
        .unwrap();
        assert_eq!(Square::vcompose(&anti, &anti).unwrap(), anti);
        let w = word_square(&m, &[0]).unwrap();
        let stuck = Square::vcompose(&w, &anti).unwrap();
        assert!(stuck.pass_left().is_empty() && stuck.pass_right().is_empty());
        assert_ne!(stuck, w);
    }

    #[test]
    fn extract_both_ends() {
        let m = flip();
        let sq = btm_oracle(&m, 2);
        let c = CnCodec::new(m.states().clone(), m.alphabet().clone(), 2);
        let got = c.extract(sq.pass_right(), FixedEnd::Source, 0, &[0, 1]).unwrap();
        assert_eq!(got, BTreeSet::from([(0, vec![1, 0])]));
        let back = c.extract(sq.pass_right(), FixedEnd::Target, 0, &[1, 0]).unwrap();
        assert_eq!(back, BTreeSet::from([(0, vec![0, 1])]));
        assert!(c
            .extract(sq.pass_left(), FixedEnd::Source, 0, &[0, 1])
            .unwrap()
            .is_empty());
        assert_eq!(
            c.extract(sq.pass_right(), FixedEnd::Source, 0, &[0]),
            Err(AlgebraError::WrongLength { expected: 2, found: 1 })
        );
    }

    #[test]
    fn element_checks_carrier() {
        let m = flip();
        let t = TInfty::for_machine(&m);
        assert!(t.element(execution_letter(&m), 2).is_err());
        assert!(t.element(execution_letter(&m), 1).is_ok());
    }

    mod props {
        use super::*;
        use crate::random::{random_btm, random_rel, random_word, state_carrier, symbol_carrier};
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        proptest! {
            #[test]
            fn codec_round_trips(q in 1usize..4, s in 1usize..4, n in 0usize..4, seed in any::<u64>()) {
                let mut r = ChaCha8Rng::seed_from_u64(seed);
                let c = CnCodec::new(state_carrier(q), symbol_carrier(s), n);
                let u = random_word(&mut r, s, n);
                let i = c.encode(q - 1, &u).unwrap();
                prop_assert_eq!(c.decode(i), (q - 1, u));
                prop_assert_eq!(c.carrier().size(), q * s.pow(n as u32));
            }

            #[test]
            fn lifts_preserve_composition_and_identity(seed in any::<u64>(), n in 0usize..3, m in 0usize..3) {
                let mut r = ChaCha8Rng::seed_from_u64(seed);
                let c = CnCodec::new(state_carrier(2), symbol_carrier(2), n);
                let x = random_rel(&mut r, c.carrier(), c.carrier(), 0.3);
                let y = random_rel(&mut r, c.carrier(), c.carrier(), 0.3);
                let xy = x.compose(&y).unwrap();
                let lr = |s: &Rel| c.lift_r(s, m).unwrap();
                let ll = |s: &Rel| c.lift_l(s, m).unwrap();
                prop_assert_eq!(lr(&xy), lr(&x).compose(&lr(&y)).unwrap());
                prop_assert_eq!(ll(&xy), ll(&x).compose(&ll(&y)).unwrap());
                let id = Rel::identity(c.carrier().clone());
                prop_assert_eq!(lr(&id), Rel::identity(c.extend(m).carrier().clone()));
                prop_assert_eq!(ll(&id), Rel::identity(c.extend(m).carrier().clone()));
            }

            #[test]
            fn compose_lengths_is_associative(seed in any::<u64>(), a in 0usize..3, b in 0usize..3, c in 0usize..2) {
                let m = random_btm(&mut ChaCha8Rng::seed_from_u64(seed), 2, 2);
                let t = TInfty::for_machine(&m);
                let (x, y, z) = (computation_square(&m, a), computation_square(&m, b), computation_square(&m, c));
                let left = t.compose_lengths(&t.compose_lengths(&x, &y).unwrap(), &z).unwrap();
                let right = t.compose_lengths(&x, &t.compose_lengths(&y, &z).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }
        }
    }
}
