//! The JSON result document written by `csg solve`.

use serde::{Deserialize, Serialize};

use csg::SolveResult;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    /// Graph file path or generator spec.
    pub graph: String,
    pub n: usize,
    pub edges: usize,
    pub values: String,
    pub value_model: String,
    pub roots: Vec<usize>,
    pub ordering: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterFields {
    pub subproblems_stored: u64,
    pub subspaces_evaluated: u64,
}

/// Field order is the serialization order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub instance: Instance,
    pub algorithm: String,
    pub optimal_value: f64,
    pub optimal_cs: Vec<Vec<usize>>,
    pub counters: CounterFields,
    pub elapsed_ms: f64,
}

impl ResultDocument {
    pub fn new(graph: String, edges: usize, values: String, value_model: String, r: &SolveResult) -> Self {
        ResultDocument {
            instance: Instance {
                graph,
                n: r.n,
                edges,
                values,
                value_model,
                roots: r.roots.clone(),
                ordering: r.ordering.clone(),
            },
            algorithm: r.algorithm.name().to_string(),
            optimal_value: r.optimal_value,
            optimal_cs: r.optimal_cs.parts().to_vec(),
            counters: CounterFields {
                subproblems_stored: r.subproblems_stored,
                subspaces_evaluated: r.subspaces_evaluated,
            },
            elapsed_ms: r.elapsed.as_secs_f64() * 1e3,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document is always serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn doc(value: f64, cs: Vec<Vec<usize>>, elapsed_ms: f64) -> ResultDocument {
        ResultDocument {
            instance: Instance {
                graph: "g.txt".into(),
                n: 3,
                edges: 2,
                values: "seed:1".into(),
                value_model: "seeded-uniform(seed=1, range=[0,|C|])".into(),
                roots: vec![1],
                ordering: vec![1, 0, 2],
            },
            algorithm: "dype".into(),
            optimal_value: value,
            optimal_cs: cs,
            counters: CounterFields {
                subproblems_stored: 3,
                subspaces_evaluated: 6,
            },
            elapsed_ms,
        }
    }

    #[test]
    fn field_order_is_fixed() {
        let text = doc(6.0, vec![vec![0], vec![1], vec![2]], 0.5).to_json();
        let keys = [
            "\"instance\"",
            "\"algorithm\"",
            "\"optimal_value\"",
            "\"optimal_cs\"",
            "\"counters\"",
            "\"elapsed_ms\"",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    proptest! {
        #[test]
        fn round_trip(value in any::<f64>().prop_filter("finite", |v| v.is_finite()),
                      elapsed in 0.0f64..1e7,
                      cs in prop::collection::vec(prop::collection::vec(0usize..100, 1..4), 0..4)) {
            let d = doc(value, cs, elapsed);
            prop_assert_eq!(ResultDocument::from_json(&d.to_json()).unwrap(), d);
        }
    }
}
