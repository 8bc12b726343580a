//! Text serialization of relations. Pairs are written target-first and listed
//! in lexicographic `(target, source)` index order so output is byte-stable.

use serde::{Deserialize, Serialize};

use crate::relalg::{Carrier, Rel, RelError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelJson {
    pub dom: Vec<String>,
    pub cod: Vec<String>,
    /// `[target, source]` label pairs.
    pub pairs: Vec<[String; 2]>,
}

impl From<&Rel> for RelJson {
    fn from(r: &Rel) -> Self {
        RelJson {
            dom: r.dom().label_list(),
            cod: r.cod().label_list(),
            pairs: r
                .pairs()
                .into_iter()
                .map(|(b, a)| [r.cod().label(b), r.dom().label(a)])
                .collect(),
        }
    }
}

impl RelJson {
    pub fn to_rel(&self) -> Result<Rel, RelError> {
        let dom = Carrier::labeled(self.dom.iter().cloned())?;
        let cod = Carrier::labeled(self.cod.iter().cloned())?;
        self.to_rel_on(&dom, &cod)
    }

    /// Decodes against existing carriers, which must carry the same labels.
    pub fn to_rel_on(&self, dom: &Carrier, cod: &Carrier) -> Result<Rel, RelError> {
        if dom.label_list() != self.dom || cod.label_list() != self.cod {
            return Err(RelError::LabelMismatch);
        }
        let pairs = self
            .pairs
            .iter()
            .map(|[b, a]| Ok((cod.index_of(b)?, dom.index_of(a)?)))
            .collect::<Result<Vec<_>, RelError>>()?;
        Rel::from_pairs(dom.clone(), cod.clone(), pairs)
    }
}

pub fn rel_to_json(r: &Rel) -> String {
    serde_json::to_string(&RelJson::from(r)).expect("relation serialization")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pairs_are_target_first_and_sorted() {
        let c = Carrier::labeled(["a", "b", "c"]).unwrap();
        let r = Rel::from_pairs(c.clone(), c.clone(), [(2, 0), (1, 2), (1, 0)]).unwrap();
        assert_eq!(
            rel_to_json(&r),
            r#"{"dom":["a","b","c"],"cod":["a","b","c"],"pairs":[["b","a"],["b","c"],["c","a"]]}"#
        );
    }

    #[test]
    fn unknown_fields_and_labels_rejected() {
        let bad = r#"{"dom":["a"],"cod":["a"],"pairs":[],"extra":1}"#;
        assert!(serde_json::from_str::<RelJson>(bad).is_err());
        let unknown: RelJson = serde_json::from_str(r#"{"dom":["a"],"cod":["a"],"pairs":[["z","a"]]}"#).unwrap();
        assert_eq!(unknown.to_rel(), Err(RelError::UnknownLabel("z".into())));
    }

    proptest! {
        #[test]
        fn round_trip(n in 0usize..5, m in 0usize..5, seed in any::<u64>()) {
            let dom = Carrier::labeled((0..n).map(|i| format!("d{i}"))).unwrap();
            let cod = Carrier::labeled((0..m).map(|i| format!("c{i}"))).unwrap();
            let r = Rel::from_fn(dom, cod, |b, a| seed >> ((a * 5 + b) % 64) & 1 == 1);
            let json = rel_to_json(&r);
            let back: RelJson = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back.to_rel().unwrap(), r);
        }
    }
}
