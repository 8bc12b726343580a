//! Exact algebra of binary relations between finite indexed carriers.
//!
//! A [`Rel`] from `A` to `B` is stored as a dense bit matrix with one row per
//! source element; row `a` holds the set of targets `b` with `(b, a)` in the
//! relation. Pairs are always written target-first, so a function `f` is the
//! relation `{(f(q), q)}` and `s.compose(&r)` applies `r` first.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelError {
    #[error("carrier mismatch: expected {expected} elements, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("carrier labels differ between operands")]
    LabelMismatch,
    #[error("relation is not square ({cod} x {dom})")]
    NotSquare { dom: usize, cod: usize },
    #[error("index {index} out of range for carrier of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("duplicate carrier label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown carrier label {0:?}")]
    UnknownLabel(String),
}

/// A finite carrier set `{0, .., size-1}` with optional display labels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Carrier {
    size: usize,
    labels: Option<Arc<[String]>>,
}

impl Carrier {
    pub fn unlabeled(size: usize) -> Self {
        Carrier { size, labels: None }
    }

    pub fn labeled<I, S>(labels: I) -> Result<Self, RelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(RelError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Carrier {
            size: labels.len(),
            labels: Some(labels.into()),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display label of element `i`; unlabeled carriers use the decimal index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(ls) => ls[i].clone(),
            None => i.to_string(),
        }
    }

    /// All labels, synthesizing decimal indices for unlabeled carriers.
    pub fn label_list(&self) -> Vec<String> {
        (0..self.size).map(|i| self.label(i)).collect()
    }

    pub fn index_of(&self, label: &str) -> Result<usize, RelError> {
        match &self.labels {
            Some(ls) => ls
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| RelError::UnknownLabel(label.to_string())),
            None => label
                .parse::<usize>()
                .ok()
                .filter(|&i| i < self.size)
                .ok_or_else(|| RelError::UnknownLabel(label.to_string())),
        }
    }

    pub fn check_index(&self, index: usize) -> Result<(), RelError> {
        if index < self.size {
            Ok(())
        } else {
            Err(RelError::IndexOutOfRange { index, size: self.size })
        }
    }

    fn ensure_same(&self, other: &Carrier) -> Result<(), RelError> {
        if self.size != other.size {
            return Err(RelError::DimensionMismatch {
                expected: self.size,
                found: other.size,
            });
        }
        if self.labels != other.labels {
            return Err(RelError::LabelMismatch);
        }
        Ok(())
    }
}

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.labels {
            Some(ls) => f.debug_list().entries(ls.iter()).finish(),
            None => write!(f, "Carrier({})", self.size),
        }
    }
}

/// A binary relation `dom -> cod` as a row-per-source bit matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rel {
    dom: Carrier,
    cod: Carrier,
    row_words: usize,
    bits: Vec<u64>,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

impl Rel {
    pub fn empty(dom: Carrier, cod: Carrier) -> Self {
        let row_words = words_for(cod.size);
        Rel {
            bits: vec![0; row_words * dom.size],
            dom,
            cod,
            row_words,
        }
    }

    pub fn identity(carrier: Carrier) -> Self {
        let mut r = Rel::empty(carrier.clone(), carrier);
        for a in 0..r.dom.size {
            r.set(a, a);
        }
        r
    }

    /// The partial identity `1_A = {(a, a) : a in A}`.
    pub fn restriction(carrier: Carrier, subset: &[usize]) -> Result<Self, RelError> {
        let mut r = Rel::empty(carrier.clone(), carrier);
        for &a in subset {
            r.dom.check_index(a)?;
            r.set(a, a);
        }
        Ok(r)
    }

    /// Builds a relation from `(target, source)` pairs.
    pub fn from_pairs<I>(dom: Carrier, cod: Carrier, pairs: I) -> Result<Self, RelError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut r = Rel::empty(dom, cod);
        for (b, a) in pairs {
            r.cod.check_index(b)?;
            r.dom.check_index(a)?;
            r.set(b, a);
        }
        Ok(r)
    }

    /// Builds a relation from a predicate on `(target, source)`.
    pub fn from_fn(dom: Carrier, cod: Carrier, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut r = Rel::empty(dom, cod);
        for a in 0..r.dom.size {
            for b in 0..r.cod.size {
                if f(b, a) {
                    r.set(b, a);
                }
            }
        }
        r
    }

    pub fn dom(&self) -> &Carrier {
        &self.dom
    }

    pub fn cod(&self) -> &Carrier {
        &self.cod
    }

    pub fn is_square(&self) -> bool {
        self.dom == self.cod
    }

    #[inline]
    fn row(&self, a: usize) -> &[u64] {
        &self.bits[a * self.row_words..(a + 1) * self.row_words]
    }

    #[inline]
    pub(crate) fn set(&mut self, b: usize, a: usize) {
        let w = self.row_words;
        self.bits[a * w + b / WORD_BITS] |= 1u64 << (b % WORD_BITS);
    }

    /// Whether `(target, source)` is in the relation. Out-of-range is `false`.
    pub fn contains(&self, target: usize, source: usize) -> bool {
        if target >= self.cod.size || source >= self.dom.size {
            return false;
        }
        self.row(source)[target / WORD_BITS] >> (target % WORD_BITS) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Targets related to `source`, ascending.
    pub fn image(&self, source: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(source))
    }

    /// Sources related to `target`, ascending.
    pub fn preimage(&self, target: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.dom.size).filter(move |&a| self.contains(target, a))
    }

    /// All `(target, source)` pairs in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.dom.size)
            .flat_map(|a| self.image(a).map(move |b| (b, a)))
            .collect();
        out.sort_unstable();
        out
    }

    /// `self ∘ r`: `(c, a)` iff some `b` has `(c, b) ∈ self` and `(b, a) ∈ r`.
    pub fn compose(&self, r: &Rel) -> Result<Rel, RelError> {
        self.dom.ensure_same(&r.cod)?;
        Ok(self.compose_unchecked(r))
    }

    pub(crate) fn compose_unchecked(&self, r: &Rel) -> Rel {
        debug_assert_eq!(self.dom.size, r.cod.size);
        let mut out = Rel::empty(r.dom.clone(), self.cod.clone());
        let w = out.row_words;
        if w == 0 {
            return out;
        }
        for a in 0..r.dom.size {
            let dst = &mut out.bits[a * w..(a + 1) * w];
            for b in iter_bits(r.row(a)) {
                for (d, s) in dst.iter_mut().zip(self.row(b)) {
                    *d |= *s;
                }
            }
        }
        out
    }

    pub fn union(&self, other: &Rel) -> Result<Rel, RelError> {
        self.dom.ensure_same(&other.dom)?;
        self.cod.ensure_same(&other.cod)?;
        Ok(self.union_unchecked(other))
    }

    pub(crate) fn union_unchecked(&self, other: &Rel) -> Rel {
        let mut out = self.clone();
        for (d, s) in out.bits.iter_mut().zip(&other.bits) {
            *d |= *s;
        }
        out
    }

    pub fn intersection(&self, other: &Rel) -> Result<Rel, RelError> {
        self.dom.ensure_same(&other.dom)?;
        self.cod.ensure_same(&other.cod)?;
        let mut out = self.clone();
        for (d, s) in out.bits.iter_mut().zip(&other.bits) {
            *d &= *s;
        }
        Ok(out)
    }

    pub fn is_subset(&self, other: &Rel) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn converse(&self) -> Rel {
        let mut out = Rel::empty(self.cod.clone(), self.dom.clone());
        for a in 0..self.dom.size {
            for b in iter_bits(self.row(a)) {
                out.set(a, b);
            }
        }
        out
    }

    /// Reflexive-transitive closure `I ∪ R ∪ R² ∪ ...`.
    pub fn star(&self) -> Result<Rel, RelError> {
        if self.dom != self.cod {
            return Err(RelError::NotSquare {
                dom: self.dom.size,
                cod: self.cod.size,
            });
        }
        Ok(self.star_unchecked())
    }

    pub(crate) fn star_unchecked(&self) -> Rel {
        // Repeated squaring of I ∪ R; path lengths double each round.
        let mut acc = self.clone();
        for a in 0..acc.dom.size {
            acc.set(a, a);
        }
        loop {
            let next = acc.compose_unchecked(&acc);
            if next == acc {
                return acc;
            }
            acc = next;
        }
    }

    /// Transitive closure `R ∪ R² ∪ ...`.
    pub fn plus(&self) -> Result<Rel, RelError> {
        let s = self.star()?;
        Ok(self.compose_unchecked(&s))
    }

    /// Re-labels both carriers; sizes must agree.
    pub fn relabel(&self, dom: Carrier, cod: Carrier) -> Result<Rel, RelError> {
        if dom.size != self.dom.size {
            return Err(RelError::DimensionMismatch {
                expected: self.dom.size,
                found: dom.size,
            });
        }
        if cod.size != self.cod.size {
            return Err(RelError::DimensionMismatch {
                expected: self.cod.size,
                found: cod.size,
            });
        }
        Ok(Rel {
            dom,
            cod,
            row_words: self.row_words,
            bits: self.bits.clone(),
        })
    }

    /// Image of the pair set under element maps `dom -> new_dom`, `cod -> new_cod`.
    pub fn map_pairs(
        &self,
        new_dom: Carrier,
        new_cod: Carrier,
        mut map_source: impl FnMut(usize) -> usize,
        mut map_target: impl FnMut(usize) -> usize,
    ) -> Result<Rel, RelError> {
        let mut out = Rel::empty(new_dom, new_cod);
        for a in 0..self.dom.size {
            let a2 = map_source(a);
            out.dom.check_index(a2)?;
            for b in self.image(a) {
                let b2 = map_target(b);
                out.cod.check_index(b2)?;
                out.set(b2, a2);
            }
        }
        Ok(out)
    }
}

pub(crate) fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let tz = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * WORD_BITS + tz)
        })
    })
}

impl fmt::Debug for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (b, a)) in self.pairs().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({},{})", self.cod.label(b), self.dom.label(a))?;
        }
        f.write_str("}")
    }
}
