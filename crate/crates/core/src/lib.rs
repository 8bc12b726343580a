//! Relation algebra for machines: transition monoids of one-way automata,
//! Int-construction squares for two-way automata, and the length-graded
//! monoid of computation relations for bounded Turing machines.
//!
//! Relations are stored as `(target, source)` pairs and `s.compose(&r)` is
//! `s ∘ r`, so `r` acts first.

pub mod algebra;
pub mod intrel;
pub mod machines;
pub mod random;
pub mod relalg;
pub mod semantics;
pub mod serial;
pub mod verify;

pub use algebra::{CnCodec, FixedEnd, TInfty, TInftyElem};
pub use intrel::{Square, SquareJson};
pub use machines::{Btm, Machine, MachineError, Mealy, Nfa, Rule, TwoWayAutomaton};
pub use relalg::{Carrier, Rel, RelError};
