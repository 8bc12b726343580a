//! Brute-force semantics: the one-way transition homomorphism, transition
//! monoid enumeration, Mealy runs, and configuration-graph simulators for
//! two-way automata and bounded Turing machines.
//!
//! The simulators never touch the algebra module's formulas; they are the
//! reference the formulas are checked against.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::algebra::CnCodec;
use crate::intrel::Square;
use crate::machines::{Btm, Mealy, Nfa, TwoWayAutomaton};
use crate::relalg::{Carrier, Rel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("symbol index {index} out of range (alphabet size {size})")]
    UnknownSymbol { index: usize, size: usize },
    #[error("unknown symbol {0:?}")]
    UnknownSymbolLabel(String),
    #[error("state index {index} out of range ({size} states)")]
    UnknownState { index: usize, size: usize },
    #[error("global transition relations need a non-empty word")]
    EmptyWord,
    #[error("transition monoid exceeds the bound of {0} elements")]
    BoundExceeded(usize),
}

fn check_word(alphabet: &Carrier, w: &[usize]) -> Result<(), SemanticsError> {
    match w.iter().find(|&&x| x >= alphabet.size()) {
        Some(&index) => Err(SemanticsError::UnknownSymbol {
            index,
            size: alphabet.size(),
        }),
        None => Ok(()),
    }
}

/// Splits `text` into symbols. Single-character alphabets read one symbol
/// per character; otherwise symbols are separated by whitespace or commas.
pub fn parse_word(alphabet: &Carrier, text: &str) -> Result<Vec<usize>, SemanticsError> {
    let labels = alphabet.label_list();
    let lookup = |s: &str| {
        labels
            .iter()
            .position(|l| l == s)
            .ok_or_else(|| SemanticsError::UnknownSymbolLabel(s.to_string()))
    };
    if labels.iter().all(|l| l.chars().count() == 1) {
        text.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| lookup(c.encode_utf8(&mut [0; 4])))
            .collect()
    } else {
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(lookup)
            .collect()
    }
}

pub fn format_word(alphabet: &Carrier, w: &[usize]) -> String {
    let labels: Vec<String> = w.iter().map(|&x| alphabet.label(x)).collect();
    if (0..alphabet.size()).all(|x| alphabet.label(x).chars().count() == 1) {
        labels.concat()
    } else {
        labels.join(".")
    }
}

/// `t(w)`: the rightmost letter acts first, so `t(uv) = t(u) ∘ t(v)` and
/// `t(λ) = I`.
pub fn nfa_hom(m: &Nfa, w: &[usize]) -> Result<Rel, SemanticsError> {
    check_word(m.alphabet(), w)?;
    Ok(w.iter().fold(Rel::identity(m.states().clone()), |acc, &x| {
        acc.compose(m.step(x)).expect("same carrier")
    }))
}

/// The distinct relations `t(w)`, with shortlex-least representative words
/// and the multiplication table `table[i][j] = index(elements[i] ∘ elements[j])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMonoid {
    pub elements: Vec<Rel>,
    pub words: Vec<Vec<usize>>,
    pub table: Vec<Vec<usize>>,
}

impl TransitionMonoid {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, r: &Rel) -> Option<usize> {
        self.elements.iter().position(|e| e == r)
    }
}

/// Breadth-first closure of `{I} ∪ {t(x)}` under composition, extending each
/// element's word on the right in alphabet order so representatives come out
/// shortlex-minimal. Fails once more than `bound` elements are found.
pub fn transition_monoid(m: &Nfa, bound: usize) -> Result<TransitionMonoid, SemanticsError> {
    let mut elements = vec![Rel::identity(m.states().clone())];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut index: HashMap<Rel, usize> = HashMap::from([(elements[0].clone(), 0)]);
    if bound == 0 {
        return Err(SemanticsError::BoundExceeded(bound));
    }
    let mut next = 0;
    while next < elements.len() {
        for x in 0..m.alphabet().size() {
            let product = elements[next].compose(m.step(x)).expect("same carrier");
            if !index.contains_key(&product) {
                if elements.len() == bound {
                    return Err(SemanticsError::BoundExceeded(bound));
                }
                let mut w = words[next].clone();
                w.push(x);
                index.insert(product.clone(), elements.len());
                elements.push(product);
                words.push(w);
            }
        }
        next += 1;
    }
    let table = elements
        .iter()
        .map(|a| {
            elements
                .iter()
                .map(|b| index[&a.compose(b).expect("same carrier")])
                .collect()
        })
        .collect();
    Ok(TransitionMonoid { elements, words, table })
}

/// Runs a Mealy machine right to left from `start`, writing each output at
/// the position it reads. Returns every `(output word, final state)`.
pub fn mealy_run(m: &Mealy, input: &[usize], start: usize) -> Result<BTreeSet<(Vec<usize>, usize)>, SemanticsError> {
    check_word(m.alphabet(), input)?;
    if start >= m.states().size() {
        return Err(SemanticsError::UnknownState {
            index: start,
            size: m.states().size(),
        });
    }
    // outputs are accumulated reversed, then flipped at the end
    let mut current: BTreeSet<(Vec<usize>, usize)> = BTreeSet::from([(Vec::new(), start)]);
    for &x in input.iter().rev() {
        let mut next = BTreeSet::new();
        for (out, q) in &current {
            for &p in m.next(x, *q) {
                for &y in m.out(x, *q) {
                    let mut o = out.clone();
                    o.push(y);
                    next.insert((o, p));
                }
            }
        }
        current = next;
    }
    Ok(current
        .into_iter()
        .map(|(mut o, q)| {
            o.reverse();
            (o, q)
        })
        .collect())
}

/// Head position `0..=len` sits between cells; `0` is the left end.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoWayConfig {
    pub word: Vec<usize>,
    pub head: usize,
    pub state: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BtmConfig {
    pub word: Vec<usize>,
    pub head: usize,
    pub state: usize,
}

impl TwoWayConfig {
    pub fn successors(&self, m: &TwoWayAutomaton) -> Vec<TwoWayConfig> {
        let mut out = Vec::new();
        if self.head > 0 {
            for &b in m.left_next(self.word[self.head - 1], self.state) {
                out.push(TwoWayConfig {
                    word: self.word.clone(),
                    head: self.head - 1,
                    state: b,
                });
            }
        }
        if self.head < self.word.len() {
            for &c in m.right_next(self.state, self.word[self.head]) {
                out.push(TwoWayConfig {
                    word: self.word.clone(),
                    head: self.head + 1,
                    state: c,
                });
            }
        }
        out
    }
}

impl BtmConfig {
    pub fn successors(&self, m: &Btm) -> Vec<BtmConfig> {
        let mut out = Vec::new();
        if self.head > 0 {
            let x = self.word[self.head - 1];
            for &b in m.left_state(x, self.state) {
                for &y in m.left_out(x, self.state) {
                    let mut word = self.word.clone();
                    word[self.head - 1] = y;
                    out.push(BtmConfig {
                        word,
                        head: self.head - 1,
                        state: b,
                    });
                }
            }
        }
        if self.head < self.word.len() {
            let x = self.word[self.head];
            for &c in m.right_state(self.state, x) {
                for &z in m.right_out(self.state, x) {
                    let mut word = self.word.clone();
                    word[self.head] = z;
                    out.push(BtmConfig {
                        word,
                        head: self.head + 1,
                        state: c,
                    });
                }
            }
        }
        out
    }
}

/// Every configuration reachable from `start` in zero or more steps.
pub fn btm_reachable_from(m: &Btm, start: &BtmConfig) -> BTreeSet<BtmConfig> {
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(c) = queue.pop_front() {
        for next in c.successors(m) {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Adjacency lists over dense node ids, with BFS helpers.
struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Nodes reachable from `start`; with `include_start` the zero-step path
    /// counts, otherwise only paths of length at least one.
    fn reach(&self, start: usize, include_start: bool, seen: &mut [bool], out: &mut Vec<usize>) {
        seen.iter_mut().for_each(|s| *s = false);
        out.clear();
        let mut queue = VecDeque::new();
        if include_start {
            seen[start] = true;
            out.push(start);
            queue.push_back(start);
        } else {
            for &w in &self.adj[start] {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
    }
}

fn twoway_graph(m: &TwoWayAutomaton, w: &[usize]) -> Graph {
    let nq = m.states().size();
    let n = w.len();
    let node = |head: usize, q: usize| q + nq * head;
    let mut adj = vec![Vec::new(); nq * (n + 1)];
    for head in 0..=n {
        for a in 0..nq {
            let v = node(head, a);
            if head > 0 {
                adj[v].extend(m.left_next(w[head - 1], a).iter().map(|&b| node(head - 1, b)));
            }
            if head < n {
                adj[v].extend(m.right_next(a, w[head]).iter().map(|&c| node(head + 1, c)));
            }
        }
    }
    Graph { adj }
}

/// Global transition relations of `w` by exhaustive search of the
/// configuration graph.
///
/// A pair is recorded when some computation of at least one step connects
/// the two boundary configurations, with the entry state moving into the word
/// and the exit state moving out of it: entering from the left needs a
/// right-moving state, leaving on the left needs a left-moving one, and so on.
pub fn twoway_oracle(m: &TwoWayAutomaton, w: &[usize]) -> Result<Square, SemanticsError> {
    if w.is_empty() {
        return Err(SemanticsError::EmptyWord);
    }
    check_word(m.alphabet(), w)?;
    let nq = m.states().size();
    let n = w.len();
    let graph = twoway_graph(m, w);
    let mut in_left = vec![false; nq];
    let mut in_right = vec![false; nq];
    m.left_moving().into_iter().for_each(|q| in_left[q] = true);
    m.right_moving().into_iter().for_each(|q| in_right[q] = true);

    let c = m.states().clone();
    let mut pass_left = Vec::new();
    let mut left_turn = Vec::new();
    let mut right_turn = Vec::new();
    let mut pass_right = Vec::new();
    let mut seen = vec![false; graph.adj.len()];
    let mut reached = Vec::new();
    for q in 0..nq {
        if in_right[q] {
            graph.reach(q, false, &mut seen, &mut reached);
            for &v in &reached {
                let (head, p) = (v / nq, v % nq);
                if head == 0 && in_left[p] {
                    left_turn.push((p, q));
                }
                if head == n && in_right[p] {
                    pass_right.push((p, q));
                }
            }
        }
        if in_left[q] {
            graph.reach(q + nq * n, false, &mut seen, &mut reached);
            for &v in &reached {
                let (head, p) = (v / nq, v % nq);
                if head == 0 && in_left[p] {
                    pass_left.push((p, q));
                }
                if head == n && in_right[p] {
                    right_turn.push((p, q));
                }
            }
        }
    }
    let rel = |pairs: Vec<(usize, usize)>| Rel::from_pairs(c.clone(), c.clone(), pairs).expect("state indices");
    Ok(Square::new(rel(pass_left), rel(left_turn), rel(right_turn), rel(pass_right)).expect("same carrier"))
}

/// Dense configuration indexing for the bounded machine on tape length `n`:
/// `state + |Q|·(head + (n+1)·value(word))`.
struct BtmGraph {
    graph: Graph,
    nq: usize,
    n: usize,
}

impl BtmGraph {
    fn build(m: &Btm, n: usize) -> BtmGraph {
        let nq = m.states().size();
        let ns = m.alphabet().size();
        let words = ns.pow(n as u32);
        let node = |state: usize, head: usize, value: usize| state + nq * (head + (n + 1) * value);
        // weight of cell k, leftmost most significant
        let weight: Vec<usize> = (0..n).map(|k| ns.pow((n - 1 - k) as u32)).collect();
        let mut adj = vec![Vec::new(); nq * (n + 1) * words];
        for value in 0..words {
            let cell = |k: usize| value / weight[k] % ns;
            for head in 0..=n {
                for a in 0..nq {
                    let v = node(a, head, value);
                    if head > 0 {
                        let k = head - 1;
                        let x = cell(k);
                        for &b in m.left_state(x, a) {
                            for &y in m.left_out(x, a) {
                                let nv = value - x * weight[k] + y * weight[k];
                                adj[v].push(node(b, head - 1, nv));
                            }
                        }
                    }
                    if head < n {
                        let k = head;
                        let x = cell(k);
                        for &c in m.right_state(a, x) {
                            for &z in m.right_out(a, x) {
                                let nv = value - x * weight[k] + z * weight[k];
                                adj[v].push(node(c, head + 1, nv));
                            }
                        }
                    }
                }
            }
        }
        BtmGraph {
            graph: Graph { adj },
            nq,
            n,
        }
    }

    fn node(&self, state: usize, head: usize, value: usize) -> usize {
        state + self.nq * (head + (self.n + 1) * value)
    }

    /// `(state, head, value)` of a node id.
    fn decode(&self, v: usize) -> (usize, usize, usize) {
        let state = v % self.nq;
        let rest = v / self.nq;
        (state, rest % (self.n + 1), rest / (self.n + 1))
    }
}

/// Computation relations on tape length `n` by exhaustive search.
///
/// Zero-step computations count, so both turn relations contain the
/// identity. No left/right-moving restriction applies. For `n = 0` the
/// result is the identity square on `C_0`.
pub fn btm_oracle(m: &Btm, n: usize) -> Square {
    let codec = CnCodec::new(m.states().clone(), m.alphabet().clone(), n);
    let carrier = codec.carrier().clone();
    if n == 0 {
        return Square::identity(carrier);
    }
    let g = BtmGraph::build(m, n);
    let nq = g.nq;
    let words = codec.word_count();
    let mut pass_left = Vec::new();
    let mut left_turn = Vec::new();
    let mut right_turn = Vec::new();
    let mut pass_right = Vec::new();
    let mut seen = vec![false; g.graph.adj.len()];
    let mut reached = Vec::new();
    for value in 0..words {
        for q in 0..nq {
            let source = q + nq * value;
            for (head, turn, pass) in [
                (0, &mut left_turn, &mut pass_right),
                (n, &mut right_turn, &mut pass_left),
            ] {
                g.graph.reach(g.node(q, head, value), true, &mut seen, &mut reached);
                for &v in &reached {
                    let (p, h, val) = g.decode(v);
                    let target = p + nq * val;
                    if h == head {
                        turn.push((target, source));
                    } else if h == n - head {
                        pass.push((target, source));
                    }
                }
            }
        }
    }
    let rel =
        |pairs: Vec<(usize, usize)>| Rel::from_pairs(carrier.clone(), carrier.clone(), pairs).expect("codec indices");
    Square::new(rel(pass_left), rel(left_turn), rel(right_turn), rel(pass_right)).expect("same carrier")
}

/// One edge of a configuration graph, printed as
/// `state@head:word -> state@head:word`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEdge {
    pub from: String,
    pub to: String,
}

impl fmt::Display for TraceEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from, self.to)
    }
}

fn config_label(states: &Carrier, alphabet: &Carrier, state: usize, head: usize, word: &[usize]) -> String {
    format!("{}@{}:{}", states.label(state), head, format_word(alphabet, word))
}

/// Edge list of the two-way configuration graph on `w`.
pub fn twoway_trace(m: &TwoWayAutomaton, w: &[usize]) -> Result<Vec<TraceEdge>, SemanticsError> {
    check_word(m.alphabet(), w)?;
    let mut edges = Vec::new();
    for head in 0..=w.len() {
        for state in 0..m.states().size() {
            let c = TwoWayConfig {
                word: w.to_vec(),
                head,
                state,
            };
            for d in c.successors(m) {
                edges.push(TraceEdge {
                    from: config_label(m.states(), m.alphabet(), c.state, c.head, &c.word),
                    to: config_label(m.states(), m.alphabet(), d.state, d.head, &d.word),
                });
            }
        }
    }
    Ok(edges)
}

/// Edge list of the bounded machine's configuration graph on tape length `n`.
pub fn btm_trace(m: &Btm, n: usize) -> Vec<TraceEdge> {
    let codec = CnCodec::new(m.states().clone(), m.alphabet().clone(), n);
    let mut edges = Vec::new();
    for value in 0..codec.word_count() {
        let word = codec.word_of(value);
        for head in 0..=n {
            for state in 0..m.states().size() {
                let c = BtmConfig {
                    word: word.clone(),
                    head,
                    state,
                };
                for d in c.successors(m) {
                    edges.push(TraceEdge {
                        from: config_label(m.states(), m.alphabet(), c.state, c.head, &c.word),
                        to: config_label(m.states(), m.alphabet(), d.state, d.head, &d.word),
                    });
                }
            }
        }
    }
    edges
}

/// Node count of the bounded machine's configuration graph.
pub fn btm_config_count(m: &Btm, n: usize) -> usize {
    m.states().size() * m.alphabet().size().pow(n as u32) * (n + 1)
}
