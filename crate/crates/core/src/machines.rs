//! Machine descriptions: one-way NFAs, Mealy machines, two-way automata and
//! bounded Turing machines, plus their structural conversions.
//!
//! Partial maps are stored as sparse rule lists keyed by `(symbol, state)`.
//! For right-moving rules the key order is the same even though the
//! transition is written `state ∘_r symbol`. Duplicate keys are merged by
//! union. Left/right moving state sets are always derived.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::relalg::{Carrier, Rel, RelError};

#[derive(Debug, Error)]
pub enum MachineError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("rule {rule} ({context}): unknown {field} {label:?}")]
    UnknownLabel {
        rule: usize,
        context: String,
        field: &'static str,
        label: String,
    },
    #[error("rule {rule}: {field} index {index} out of range (size {size})")]
    IndexOutOfRange {
        rule: usize,
        field: &'static str,
        index: usize,
        size: usize,
    },
    #[error("rule {rule}: kind {kind:?} not allowed in a {machine} machine")]
    WrongRuleKind {
        rule: usize,
        kind: RuleKind,
        machine: &'static str,
    },
    #[error("rule {rule}: {machine} rules must not carry outputs")]
    UnexpectedOutputs { rule: usize, machine: &'static str },
    #[error(transparent)]
    Carrier(#[from] RelError),
}

/// One entry of a partial map: `(symbol, state) ↦ (next_states, outputs)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub symbol: usize,
    pub state: usize,
    pub next_states: Vec<usize>,
    pub outputs: Vec<usize>,
}

impl Rule {
    pub fn new(symbol: usize, state: usize, next_states: Vec<usize>) -> Self {
        Rule {
            symbol,
            state,
            next_states,
            outputs: Vec::new(),
        }
    }

    pub fn with_outputs(mut self, outputs: Vec<usize>) -> Self {
        self.outputs = outputs;
        self
    }
}

/// Merged, range-checked rule table.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RuleTable {
    entries: BTreeMap<(usize, usize), (Vec<usize>, Vec<usize>)>,
}

impl RuleTable {
    fn build(
        rules: Vec<Rule>,
        states: &Carrier,
        alphabet: &Carrier,
        outputs_in: &Carrier,
    ) -> Result<Self, MachineError> {
        let mut entries: BTreeMap<(usize, usize), (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (i, rule) in rules.into_iter().enumerate() {
            let check = |field, index, size: usize| {
                if index < size {
                    Ok(())
                } else {
                    Err(MachineError::IndexOutOfRange {
                        rule: i,
                        field,
                        index,
                        size,
                    })
                }
            };
            check("symbol", rule.symbol, alphabet.size())?;
            check("state", rule.state, states.size())?;
            for &q in &rule.next_states {
                check("next state", q, states.size())?;
            }
            for &y in &rule.outputs {
                check("output", y, outputs_in.size())?;
            }
            let e = entries.entry((rule.symbol, rule.state)).or_default();
            e.0.extend(rule.next_states);
            e.1.extend(rule.outputs);
        }
        for (next, out) in entries.values_mut() {
            next.sort_unstable();
            next.dedup();
            out.sort_unstable();
            out.dedup();
        }
        Ok(RuleTable { entries })
    }

    pub fn next_states(&self, symbol: usize, state: usize) -> &[usize] {
        self.entries
            .get(&(symbol, state))
            .map(|e| e.0.as_slice())
            .unwrap_or(&[])
    }

    pub fn outputs(&self, symbol: usize, state: usize) -> &[usize] {
        self.entries
            .get(&(symbol, state))
            .map(|e| e.1.as_slice())
            .unwrap_or(&[])
    }

    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.entries.iter().map(|(&(symbol, state), (n, o))| Rule {
            symbol,
            state,
            next_states: n.clone(),
            outputs: o.clone(),
        })
    }

    /// States with a non-empty next-state set for some symbol.
    fn domain(&self, n_states: usize) -> Vec<usize> {
        let mut mark = vec![false; n_states];
        for (&(_, q), (next, _)) in &self.entries {
            if !next.is_empty() {
                mark[q] = true;
            }
        }
        (0..n_states).filter(|&q| mark[q]).collect()
    }

    /// `{(b, a) : b ∈ next(symbol, a)}`.
    fn step_relation(&self, symbol: usize, states: &Carrier) -> Rel {
        let pairs = self
            .entries
            .range((symbol, 0)..(symbol + 1, 0))
            .flat_map(|(&(_, a), (next, _))| next.iter().map(move |&b| (b, a)));
        Rel::from_pairs(states.clone(), states.clone(), pairs).expect("indices checked at build")
    }
}

/// Non-deterministic one-way automaton: one relation on `Q` per symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    states: Carrier,
    alphabet: Carrier,
    steps: Vec<Rel>,
}

impl Nfa {
    pub fn new(states: Carrier, alphabet: Carrier, rules: Vec<Rule>) -> Result<Self, MachineError> {
        for (i, r) in rules.iter().enumerate() {
            if !r.outputs.is_empty() {
                return Err(MachineError::UnexpectedOutputs {
                    rule: i,
                    machine: "nfa",
                });
            }
        }
        let table = RuleTable::build(rules, &states, &alphabet, &alphabet)?;
        let steps = (0..alphabet.size()).map(|x| table.step_relation(x, &states)).collect();
        Ok(Nfa {
            states,
            alphabet,
            steps,
        })
    }

    /// Builds from per-symbol relations directly.
    pub fn from_relations(states: Carrier, alphabet: Carrier, steps: Vec<Rel>) -> Result<Self, MachineError> {
        if steps.len() != alphabet.size() {
            return Err(RelError::DimensionMismatch {
                expected: alphabet.size(),
                found: steps.len(),
            }
            .into());
        }
        for r in &steps {
            if r.dom() != &states || r.cod() != &states {
                return Err(RelError::LabelMismatch.into());
            }
        }
        Ok(Nfa {
            states,
            alphabet,
            steps,
        })
    }

    pub fn states(&self) -> &Carrier {
        &self.states
    }

    pub fn alphabet(&self) -> &Carrier {
        &self.alphabet
    }

    /// The relation `t(x)` of a single symbol.
    pub fn step(&self, symbol: usize) -> &Rel {
        &self.steps[symbol]
    }

    pub fn steps(&self) -> &[Rel] {
        &self.steps
    }

    /// Every step relation is a total function.
    pub fn is_deterministic(&self) -> bool {
        self.steps
            .iter()
            .all(|r| (0..self.states.size()).all(|a| r.image(a).count() == 1))
    }

    fn rules(&self) -> Vec<Rule> {
        let mut out = Vec::new();
        for (x, r) in self.steps.iter().enumerate() {
            for a in 0..self.states.size() {
                let next: Vec<usize> = r.image(a).collect();
                if !next.is_empty() {
                    out.push(Rule::new(x, a, next));
                }
            }
        }
        out
    }

    /// Reverses every arrow of the transition diagram.
    pub fn reverse(&self) -> Nfa {
        Nfa {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            steps: self.steps.iter().map(Rel::converse).collect(),
        }
    }
}

/// Automaton with output: `next(symbol, state) ⊆ Q`, `out(symbol, state) ⊆ Σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mealy {
    states: Carrier,
    alphabet: Carrier,
    table: RuleTable,
}

impl Mealy {
    pub fn new(states: Carrier, alphabet: Carrier, rules: Vec<Rule>) -> Result<Self, MachineError> {
        let table = RuleTable::build(rules, &states, &alphabet, &alphabet)?;
        Ok(Mealy {
            states,
            alphabet,
            table,
        })
    }

    pub fn states(&self) -> &Carrier {
        &self.states
    }

    pub fn alphabet(&self) -> &Carrier {
        &self.alphabet
    }

    pub fn next(&self, symbol: usize, state: usize) -> &[usize] {
        self.table.next_states(symbol, state)
    }

    pub fn out(&self, symbol: usize, state: usize) -> &[usize] {
        self.table.outputs(symbol, state)
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.table.rules().collect()
    }

    pub fn is_deterministic(&self) -> bool {
        (0..self.alphabet.size())
            .all(|x| (0..self.states.size()).all(|q| self.next(x, q).len() == 1 && self.out(x, q).len() == 1))
    }

    /// The next-state part as a one-way automaton.
    pub fn underlying_nfa(&self) -> Nfa {
        let rules = self
            .table
            .rules()
            .map(|r| Rule::new(r.symbol, r.state, r.next_states))
            .collect();
        Nfa::new(self.states.clone(), self.alphabet.clone(), rules).expect("same indices")
    }

    /// Exchanges the roles of states and symbols: the output diagram becomes
    /// the transition diagram and vice versa.
    pub fn dual(&self) -> Mealy {
        let rules = self
            .table
            .rules()
            .map(|r| Rule {
                symbol: r.state,
                state: r.symbol,
                next_states: r.outputs,
                outputs: r.next_states,
            })
            .collect();
        Mealy::new(self.alphabet.clone(), self.states.clone(), rules).expect("swapped indices")
    }

    /// Whether `state_map` (old states → other states) together with
    /// `symbol_map` (old symbols → other symbols) is an isomorphism onto
    /// `other`.
    pub fn is_isomorphic_via(&self, other: &Mealy, state_map: &[usize], symbol_map: &[usize]) -> bool {
        if self.states.size() != other.states.size() || self.alphabet.size() != other.alphabet.size() {
            return false;
        }
        let map_set = |xs: &[usize], m: &[usize]| {
            let mut v: Vec<usize> = xs.iter().map(|&x| m[x]).collect();
            v.sort_unstable();
            v
        };
        (0..self.alphabet.size()).all(|x| {
            (0..self.states.size()).all(|q| {
                let (x2, q2) = (symbol_map[x], state_map[q]);
                map_set(self.next(x, q), state_map) == other.next(x2, q2)
                    && map_set(self.out(x, q), symbol_map) == other.out(x2, q2)
            })
        })
    }
}

/// Two-way automaton with left-moving `∘_l` and right-moving `∘_r` maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoWayAutomaton {
    states: Carrier,
    alphabet: Carrier,
    left: RuleTable,
    right: RuleTable,
}

impl TwoWayAutomaton {
    /// `left` rules give `symbol ∘_l state`, `right` rules give `state ∘_r symbol`.
    pub fn new(states: Carrier, alphabet: Carrier, left: Vec<Rule>, right: Vec<Rule>) -> Result<Self, MachineError> {
        for (i, r) in left.iter().chain(&right).enumerate() {
            if !r.outputs.is_empty() {
                return Err(MachineError::UnexpectedOutputs {
                    rule: i,
                    machine: "two_way",
                });
            }
        }
        let left = RuleTable::build(left, &states, &alphabet, &alphabet)?;
        let right = RuleTable::build(right, &states, &alphabet, &alphabet)?;
        Ok(TwoWayAutomaton {
            states,
            alphabet,
            left,
            right,
        })
    }

    pub fn states(&self) -> &Carrier {
        &self.states
    }

    pub fn alphabet(&self) -> &Carrier {
        &self.alphabet
    }

    pub fn left_next(&self, symbol: usize, state: usize) -> &[usize] {
        self.left.next_states(symbol, state)
    }

    pub fn right_next(&self, state: usize, symbol: usize) -> &[usize] {
        self.right.next_states(symbol, state)
    }

    pub fn left_rules(&self) -> Vec<Rule> {
        self.left.rules().collect()
    }

    pub fn right_rules(&self) -> Vec<Rule> {
        self.right.rules().collect()
    }

    /// `Q_l`: states where `∘_l` is defined for some symbol.
    pub fn left_moving(&self) -> Vec<usize> {
        self.left.domain(self.states.size())
    }

    /// `Q_r`: states where `∘_r` is defined for some symbol.
    pub fn right_moving(&self) -> Vec<usize> {
        self.right.domain(self.states.size())
    }

    /// Single left moves over `symbol` as a relation on `Q`.
    pub fn left_step(&self, symbol: usize) -> Rel {
        self.left.step_relation(symbol, &self.states)
    }

    /// Single right moves over `symbol` as a relation on `Q`.
    pub fn right_step(&self, symbol: usize) -> Rel {
        self.right.step_relation(symbol, &self.states)
    }

    /// Exchanges the left- and right-moving maps.
    pub fn swap_directions(&self) -> TwoWayAutomaton {
        TwoWayAutomaton {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// Splits every state that moves both ways into a left-only and a
    /// right-only copy. Returns the new machine and the map from new states
    /// to original states.
    pub fn split_to_birget(&self) -> (TwoWayAutomaton, Vec<usize>) {
        let n = self.states.size();
        let ql = self.left_moving();
        let qr = self.right_moving();
        let both: Vec<bool> = (0..n).map(|q| ql.contains(&q) && qr.contains(&q)).collect();
        if !both.iter().any(|&b| b) {
            return (self.clone(), (0..n).collect());
        }

        let old_labels = self.states.label_list();
        let mut labels: Vec<String> = Vec::new();
        let mut mapping = Vec::new();
        // (left copy, right copy) for each original state
        let mut copies = vec![(0usize, 0usize); n];
        let fresh = |base: String, taken: &[String]| {
            let mut name = base;
            while taken.contains(&name) || old_labels.contains(&name) {
                name.push('\'');
            }
            name
        };
        for q in 0..n {
            if both[q] {
                let l = fresh(format!("{}_l", old_labels[q]), &labels);
                labels.push(l);
                let r = fresh(format!("{}_r", old_labels[q]), &labels);
                labels.push(r);
                copies[q] = (labels.len() - 2, labels.len() - 1);
                mapping.extend([q, q]);
            } else {
                labels.push(old_labels[q].clone());
                copies[q] = (labels.len() - 1, labels.len() - 1);
                mapping.push(q);
            }
        }
        let states = if self.states.labels().is_some() {
            Carrier::labeled(labels).expect("fresh labels are distinct")
        } else {
            Carrier::unlabeled(mapping.len())
        };
        let expand = |targets: Vec<usize>| -> Vec<usize> {
            targets
                .into_iter()
                .flat_map(|t| {
                    let (l, r) = copies[t];
                    if both[t] {
                        vec![l, r]
                    } else {
                        vec![l]
                    }
                })
                .collect()
        };
        let left = self
            .left
            .rules()
            .map(|r| Rule::new(r.symbol, copies[r.state].0, expand(r.next_states)))
            .collect();
        let right = self
            .right
            .rules()
            .map(|r| Rule::new(r.symbol, copies[r.state].1, expand(r.next_states)))
            .collect();
        let m = TwoWayAutomaton::new(states, self.alphabet.clone(), left, right).expect("split indices in range");
        (m, mapping)
    }
}

/// Bounded Turing machine: left/right next-state maps and left/right
/// rewrite maps. A move is enabled only when both its next-state set and its
/// rewrite set are non-empty; state change and rewrite are chosen
/// independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Btm {
    states: Carrier,
    alphabet: Carrier,
    left: RuleTable,
    right: RuleTable,
}

impl Btm {
    /// Left rules carry `symbol ∘_l state` and `symbol *_l state`; right
    /// rules carry `state ∘_r symbol` and `state *_r symbol`.
    pub fn new(states: Carrier, alphabet: Carrier, left: Vec<Rule>, right: Vec<Rule>) -> Result<Self, MachineError> {
        let left = RuleTable::build(left, &states, &alphabet, &alphabet)?;
        let right = RuleTable::build(right, &states, &alphabet, &alphabet)?;
        Ok(Btm {
            states,
            alphabet,
            left,
            right,
        })
    }

    pub fn states(&self) -> &Carrier {
        &self.states
    }

    pub fn alphabet(&self) -> &Carrier {
        &self.alphabet
    }

    pub fn left_state(&self, symbol: usize, state: usize) -> &[usize] {
        self.left.next_states(symbol, state)
    }

    pub fn left_out(&self, symbol: usize, state: usize) -> &[usize] {
        self.left.outputs(symbol, state)
    }

    pub fn right_state(&self, state: usize, symbol: usize) -> &[usize] {
        self.right.next_states(symbol, state)
    }

    pub fn right_out(&self, state: usize, symbol: usize) -> &[usize] {
        self.right.outputs(symbol, state)
    }

    pub fn left_rules(&self) -> Vec<Rule> {
        self.left.rules().collect()
    }

    pub fn right_rules(&self) -> Vec<Rule> {
        self.right.rules().collect()
    }

    pub fn left_enabled(&self, symbol: usize, state: usize) -> bool {
        !self.left_state(symbol, state).is_empty() && !self.left_out(symbol, state).is_empty()
    }

    pub fn right_enabled(&self, state: usize, symbol: usize) -> bool {
        !self.right_state(state, symbol).is_empty() && !self.right_out(state, symbol).is_empty()
    }

    /// States with an enabled left move on some symbol.
    pub fn left_moving(&self) -> Vec<usize> {
        (0..self.states.size())
            .filter(|&q| (0..self.alphabet.size()).any(|x| self.left_enabled(x, q)))
            .collect()
    }

    pub fn right_moving(&self) -> Vec<usize> {
        (0..self.states.size())
            .filter(|&q| (0..self.alphabet.size()).any(|x| self.right_enabled(q, x)))
            .collect()
    }

    pub fn swap_directions(&self) -> Btm {
        Btm {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// Single-letter two-way automaton on states `Σ × Q`. Pair `(x, q)`
    /// ("cell holds `x`, machine in `q`") has index `q + |Q|·x` and label
    /// `q:x`. Each move goes to every pair of a rewritten symbol and a next
    /// state.
    pub fn to_letter_automaton(&self) -> TwoWayAutomaton {
        let nq = self.states.size();
        let nx = self.alphabet.size();
        let idx = |x: usize, q: usize| q + nq * x;
        let labels: Vec<String> = (0..nx)
            .flat_map(|x| (0..nq).map(move |q| (x, q)))
            .map(|(x, q)| format!("{}:{}", self.states.label(q), self.alphabet.label(x)))
            .collect();
        let mut ordered = vec![String::new(); nq * nx];
        for (i, l) in labels.into_iter().enumerate() {
            let (x, q) = (i / nq, i % nq);
            ordered[idx(x, q)] = l;
        }
        let states = Carrier::labeled(ordered).unwrap_or_else(|_| Carrier::unlabeled(nq * nx));
        let alphabet = Carrier::labeled(["1"]).expect("single label");
        let moves = |next: &[usize], out: &[usize]| -> Vec<usize> {
            out.iter().flat_map(|&y| next.iter().map(move |&p| idx(y, p))).collect()
        };
        let mut left = Vec::new();
        let mut right = Vec::new();
        for x in 0..nx {
            for q in 0..nq {
                let l = moves(self.left_state(x, q), self.left_out(x, q));
                if !l.is_empty() {
                    left.push(Rule::new(0, idx(x, q), l));
                }
                let r = moves(self.right_state(q, x), self.right_out(q, x));
                if !r.is_empty() {
                    right.push(Rule::new(0, idx(x, q), r));
                }
            }
        }
        TwoWayAutomaton::new(states, alphabet, left, right).expect("pair indices in range")
    }
}

/// Any machine description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Machine {
    Nfa(Nfa),
    Mealy(Mealy),
    TwoWay(TwoWayAutomaton),
    Btm(Btm),
}

/// Derived facts attached by validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineSummary {
    pub kind: MachineKind,
    pub states: usize,
    pub symbols: usize,
    pub left_moving: Vec<usize>,
    pub right_moving: Vec<usize>,
    pub deterministic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MachineKind {
    Nfa,
    Mealy,
    TwoWay,
    Btm,
}

impl MachineKind {
    fn name(self) -> &'static str {
        match self {
            MachineKind::Nfa => "nfa",
            MachineKind::Mealy => "mealy",
            MachineKind::TwoWay => "two_way",
            MachineKind::Btm => "btm",
        }
    }
}

impl fmt::Display for MachineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    Left,
    Right,
    Step,
}

impl Machine {
    pub fn kind(&self) -> MachineKind {
        match self {
            Machine::Nfa(_) => MachineKind::Nfa,
            Machine::Mealy(_) => MachineKind::Mealy,
            Machine::TwoWay(_) => MachineKind::TwoWay,
            Machine::Btm(_) => MachineKind::Btm,
        }
    }

    pub fn summary(&self) -> MachineSummary {
        let kind = self.kind();
        match self {
            Machine::Nfa(m) => MachineSummary {
                kind,
                states: m.states.size(),
                symbols: m.alphabet.size(),
                left_moving: Vec::new(),
                right_moving: Vec::new(),
                deterministic: m.is_deterministic(),
            },
            Machine::Mealy(m) => MachineSummary {
                kind,
                states: m.states.size(),
                symbols: m.alphabet.size(),
                left_moving: Vec::new(),
                right_moving: Vec::new(),
                deterministic: m.is_deterministic(),
            },
            Machine::TwoWay(m) => {
                let deterministic = m.left.entries.values().all(|e| e.0.len() <= 1)
                    && m.right.entries.values().all(|e| e.0.len() <= 1)
                    && m.left_moving().iter().all(|q| !m.right_moving().contains(q));
                MachineSummary {
                    kind,
                    states: m.states.size(),
                    symbols: m.alphabet.size(),
                    left_moving: m.left_moving(),
                    right_moving: m.right_moving(),
                    deterministic,
                }
            }
            Machine::Btm(m) => {
                let single = |t: &RuleTable| t.entries.values().all(|e| e.0.len() <= 1 && e.1.len() <= 1);
                let deterministic = single(&m.left)
                    && single(&m.right)
                    && m.left_moving().iter().all(|q| !m.right_moving().contains(q));
                MachineSummary {
                    kind,
                    states: m.states.size(),
                    symbols: m.alphabet.size(),
                    left_moving: m.left_moving(),
                    right_moving: m.right_moving(),
                    deterministic,
                }
            }
        }
    }

    /// Parses and validates a machine file.
    pub fn from_json_str(text: &str) -> Result<Machine, MachineError> {
        let file: MachineFile = serde_json::from_str(text).map_err(|e| MachineError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Machine::try_from(&file)
    }

    /// Canonical serialization: rules merged and sorted by key.
    pub fn to_file(&self) -> MachineFile {
        let (kind, states, alphabet) = match self {
            Machine::Nfa(m) => (MachineKind::Nfa, &m.states, &m.alphabet),
            Machine::Mealy(m) => (MachineKind::Mealy, &m.states, &m.alphabet),
            Machine::TwoWay(m) => (MachineKind::TwoWay, &m.states, &m.alphabet),
            Machine::Btm(m) => (MachineKind::Btm, &m.states, &m.alphabet),
        };
        let entry = |kind: RuleKind, r: Rule| RuleEntry {
            kind,
            symbol: alphabet.label(r.symbol),
            state: states.label(r.state),
            next_states: r.next_states.iter().map(|&q| states.label(q)).collect(),
            outputs: r.outputs.iter().map(|&y| alphabet.label(y)).collect(),
        };
        let rules = match self {
            Machine::Nfa(m) => m.rules().into_iter().map(|r| entry(RuleKind::Step, r)).collect(),
            Machine::Mealy(m) => m.rules().into_iter().map(|r| entry(RuleKind::Step, r)).collect(),
            Machine::TwoWay(m) => m
                .left_rules()
                .into_iter()
                .map(|r| entry(RuleKind::Left, r))
                .chain(m.right_rules().into_iter().map(|r| entry(RuleKind::Right, r)))
                .collect(),
            Machine::Btm(m) => m
                .left_rules()
                .into_iter()
                .map(|r| entry(RuleKind::Left, r))
                .chain(m.right_rules().into_iter().map(|r| entry(RuleKind::Right, r)))
                .collect(),
        };
        MachineFile {
            kind,
            states: states.label_list(),
            alphabet: alphabet.label_list(),
            rules,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("machine serialization")
    }
}

/// On-disk machine description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineFile {
    #[serde(rename = "type")]
    pub kind: MachineKind,
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub rules: Vec<RuleEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleEntry {
    pub kind: RuleKind,
    pub symbol: String,
    pub state: String,
    #[serde(default)]
    pub next_states: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<String>,
}

impl TryFrom<&MachineFile> for Machine {
    type Error = MachineError;

    fn try_from(file: &MachineFile) -> Result<Machine, MachineError> {
        let states = Carrier::labeled(file.states.iter().cloned())?;
        let alphabet = Carrier::labeled(file.alphabet.iter().cloned())?;
        let machine = file.kind.name();
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut step = Vec::new();
        for (i, entry) in file.rules.iter().enumerate() {
            let context = format!("{:?} {} {}", entry.kind, entry.symbol, entry.state).to_lowercase();
            let lookup = |carrier: &Carrier, field: &'static str, label: &str| {
                carrier.index_of(label).map_err(|_| MachineError::UnknownLabel {
                    rule: i,
                    context: context.clone(),
                    field,
                    label: label.to_string(),
                })
            };
            let rule = Rule {
                symbol: lookup(&alphabet, "symbol", &entry.symbol)?,
                state: lookup(&states, "state", &entry.state)?,
                next_states: entry
                    .next_states
                    .iter()
                    .map(|l| lookup(&states, "next state", l))
                    .collect::<Result<_, _>>()?,
                outputs: entry
                    .outputs
                    .iter()
                    .map(|l| lookup(&alphabet, "output", l))
                    .collect::<Result<_, _>>()?,
            };
            let allowed = match file.kind {
                MachineKind::Nfa | MachineKind::Mealy => entry.kind == RuleKind::Step,
                MachineKind::TwoWay | MachineKind::Btm => entry.kind != RuleKind::Step,
            };
            if !allowed {
                return Err(MachineError::WrongRuleKind {
                    rule: i,
                    kind: entry.kind,
                    machine,
                });
            }
            if matches!(file.kind, MachineKind::Nfa | MachineKind::TwoWay) && !rule.outputs.is_empty() {
                return Err(MachineError::UnexpectedOutputs { rule: i, machine });
            }
            match entry.kind {
                RuleKind::Left => left.push(rule),
                RuleKind::Right => right.push(rule),
                RuleKind::Step => step.push(rule),
            }
        }
        Ok(match file.kind {
            MachineKind::Nfa => Machine::Nfa(Nfa::new(states, alphabet, step)?),
            MachineKind::Mealy => Machine::Mealy(Mealy::new(states, alphabet, step)?),
            MachineKind::TwoWay => Machine::TwoWay(TwoWayAutomaton::new(states, alphabet, left, right)?),
            MachineKind::Btm => Machine::Btm(Btm::new(states, alphabet, left, right)?),
        })
    }
}

/// Machines used throughout the tests and shipped as corpus files.
pub mod library {
    use super::*;

    fn carrier(labels: &[&str]) -> Carrier {
        Carrier::labeled(labels.iter().copied()).expect("distinct labels")
    }

    /// States `{a, b, c}`, symbols `{f, g}`:
    /// `f: a,b,c ↦ b`; `g: a ↦ c, b ↦ a, c ↦ b`.
    pub fn three_state() -> Nfa {
        let (a, b, c) = (0, 1, 2);
        let (f, g) = (0, 1);
        Nfa::new(
            carrier(&["a", "b", "c"]),
            carrier(&["f", "g"]),
            vec![
                Rule::new(f, a, vec![b]),
                Rule::new(f, b, vec![b]),
                Rule::new(f, c, vec![b]),
                Rule::new(g, a, vec![c]),
                Rule::new(g, b, vec![a]),
                Rule::new(g, c, vec![b]),
            ],
        )
        .expect("valid")
    }

    /// Two states where both symbols send everything to `a`.
    pub fn two_state() -> Nfa {
        Nfa::new(
            carrier(&["a", "b"]),
            carrier(&["f", "g"]),
            vec![
                Rule::new(0, 0, vec![0]),
                Rule::new(0, 1, vec![0]),
                Rule::new(1, 0, vec![0]),
                Rule::new(1, 1, vec![0]),
            ],
        )
        .expect("valid")
    }

    /// The arrow-reversed [`two_state`]: both symbols send `a` to `a` or `b`.
    pub fn two_state_reversed() -> Nfa {
        Nfa::new(
            carrier(&["a", "b"]),
            carrier(&["f", "g"]),
            vec![Rule::new(0, 0, vec![0, 1]), Rule::new(1, 0, vec![0, 1])],
        )
        .expect("valid")
    }

    /// Binary left shift with carry, states `{n, c}`: the next state records
    /// the bit read and the output is the carry held by the current state.
    pub fn carry() -> Mealy {
        let (n, c) = (0, 1);
        let rules = [(0, n, n, 0), (1, n, c, 0), (0, c, n, 1), (1, c, c, 1)]
            .into_iter()
            .map(|(x, q, next, out)| Rule::new(x, q, vec![next]).with_outputs(vec![out]))
            .collect();
        Mealy::new(carrier(&["n", "c"]), carrier(&["0", "1"]), rules).expect("valid")
    }

    /// `Q = {p, q}`, one symbol `x`: `p ∘_r x = q ∘_r x = {q}`, `x ∘_l q = {p}`.
    pub fn machine_e() -> TwoWayAutomaton {
        let (p, q) = (0, 1);
        TwoWayAutomaton::new(
            carrier(&["p", "q"]),
            carrier(&["x"]),
            vec![Rule::new(0, q, vec![p])],
            vec![Rule::new(0, p, vec![q]), Rule::new(0, q, vec![q])],
        )
        .expect("valid")
    }

    /// One state `s` over `{0, 1}` that only moves right, flipping each bit.
    pub fn flip() -> Btm {
        let right = (0..2)
            .map(|x| Rule::new(x, 0, vec![0]).with_outputs(vec![1 - x]))
            .collect();
        Btm::new(carrier(&["s"]), carrier(&["0", "1"]), vec![], right).expect("valid")
    }
}
