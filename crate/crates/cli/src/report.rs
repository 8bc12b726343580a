//! Run reports and their text rendering.

use machine_monoids::intrel::{Square, SquareJson};
use machine_monoids::relalg::Rel;
use machine_monoids::serial::RelJson;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub machine_digest: Option<String>,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub timing_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct Verification {
    pub seed: u64,
    pub trials: usize,
    pub properties: Vec<PropertyCount>,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_counterexample: Option<Counterexample>,
}

#[derive(Debug, Serialize)]
pub struct PropertyCount {
    pub property: String,
    pub passed: usize,
    pub failed: usize,
}

/// Replay with `verify --seed <trial_seed> --trials 1` and the same size flags.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub trial_seed: u64,
    pub property: String,
    pub detail: String,
    pub subject: Value,
}

pub fn rel_value(r: &Rel) -> Value {
    serde_json::to_value(RelJson::from(r)).expect("relation serializes")
}

pub fn square_value(s: &Square) -> Value {
    serde_json::to_value(SquareJson::from(s)).expect("square serializes")
}

/// `{source->target, ...}` in storage order.
pub fn rel_text(r: &Rel) -> String {
    let pairs: Vec<String> = r
        .pairs()
        .into_iter()
        .map(|(b, a)| format!("{}->{}", r.dom().label(a), r.cod().label(b)))
        .collect();
    format!("{{{}}}", pairs.join(", "))
}

pub fn square_text(s: &Square) -> String {
    [
        ("pass_left", s.pass_left()),
        ("left_turn", s.left_turn()),
        ("right_turn", s.right_turn()),
        ("pass_right", s.pass_right()),
    ]
    .iter()
    .map(|(name, r)| format!("{name:<11} {}\n", rel_text(r)))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use machine_monoids::relalg::Carrier;

    #[test]
    fn relation_text_is_source_first() {
        let c = Carrier::labeled(["p", "q"]).unwrap();
        let r = Rel::from_pairs(c.clone(), c, [(0, 1), (1, 1)]).unwrap();
        assert_eq!(rel_text(&r), "{q->p, q->q}");
    }
}
