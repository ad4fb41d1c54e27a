use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Poset;
use crate::error::{Error, Result};

/// Wire form: `{"n": 3, "covers": [[0,1],[0,2]], "labels": {"0": "r"}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<usize, String>,
}

impl From<&Poset> for PosetJson {
    fn from(p: &Poset) -> Self {
        PosetJson {
            n: p.len(),
            covers: p.covers().into_iter().map(|(x, y)| [x, y]).collect(),
            labels: (0..p.len())
                .filter_map(|x| p.label(x).map(|l| (x, l.to_string())))
                .collect(),
        }
    }
}

impl TryFrom<PosetJson> for Poset {
    type Error = Error;

    fn try_from(j: PosetJson) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = j.covers.iter().map(|&[x, y]| (x, y)).collect();
        let p = Poset::from_covers(j.n, &pairs)?;
        let mut labels = vec![None; j.n];
        for (id, l) in j.labels {
            p.check_id(id)?;
            labels[id] = Some(l);
        }
        p.with_labels(labels)
    }
}

impl Poset {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PosetJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: PosetJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Poset::try_from(j)
    }

    /// Graphviz source with cover edges pointing upward.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=circle];\n");
        for x in 0..self.len() {
            let label = self.label(x).map_or_else(|| x.to_string(), str::to_string);
            let _ = writeln!(out, "  {x} [label=\"{}\"];", label.replace('"', "\\\""));
        }
        for (x, y) in self.covers() {
            let _ = writeln!(out, "  {x} -> {y};");
        }
        out.push_str("}\n");
        out
    }
}
