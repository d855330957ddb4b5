//! JSON serialization of ornamentations.
//!
//! A record carries `tree` (a parenthesis string) and `ornaments`, where
//! entry `i` lists the node ids of `δ(v_i)` in ascending order. On chains
//! the compact `g` form is accepted (with or without `tree`) and is the form
//! emitted.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gseq::GSequence;
use crate::ornamentation::Ornamentation;
use crate::tree::RootedPlaneTree;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrnamentationRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ornaments: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<usize>>,
}

impl OrnamentationRecord {
    pub fn from_ornamentation(delta: &Ornamentation) -> Self {
        let tree = Some(delta.tree().render());
        if delta.tree().is_chain() {
            let g = GSequence::from_ornamentation(delta).expect("chain ornamentation has a g-sequence");
            return Self { tree, ornaments: None, g: Some(g.as_slice().to_vec()) };
        }
        let ornaments = delta.sets().iter().map(|s| s.iter().map(|v| v.0).collect()).collect();
        Self { tree, ornaments: Some(ornaments), g: None }
    }

    pub fn to_ornamentation(&self) -> Result<Ornamentation> {
        let tree = match &self.tree {
            Some(s) => Some(Arc::new(RootedPlaneTree::parse(s)?)),
            None => None,
        };
        match (&self.ornaments, &self.g, tree) {
            (Some(_), Some(_), _) => Err(Error::domain("record has both `ornaments` and `g`")),
            (None, None, _) => Err(Error::domain("record has neither `ornaments` nor `g`")),
            (Some(_), None, None) => Err(Error::domain("`ornaments` requires `tree`")),
            (Some(lists), None, Some(tree)) => Ornamentation::from_node_lists(tree, lists),
            (None, Some(g), tree) => {
                let g = GSequence::new(g.clone())?;
                match tree {
                    Some(tree) => {
                        if !tree.is_chain() || tree.len() != g.len() {
                            return Err(Error::domain(format!(
                                "`g` of length {} needs a chain tree with {} nodes, got {tree}",
                                g.len(),
                                g.len()
                            )));
                        }
                        g.to_ornamentation(tree)
                    }
                    None => Ok(g.to_chain_ornamentation()),
                }
            }
        }
    }
}

pub fn to_json(delta: &Ornamentation) -> String {
    serde_json::to_string(&OrnamentationRecord::from_ornamentation(delta)).expect("record serializes")
}

pub fn from_json(text: &str) -> Result<Ornamentation> {
    let record: OrnamentationRecord = serde_json::from_str(text)
        .map_err(|e| Error::domain(format!("malformed ornamentation record: {e}")))?;
    record.to_ornamentation()
}
