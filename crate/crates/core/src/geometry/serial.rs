//! JSON documents for diagrams and complexes.

use serde::{Deserialize, Serialize};

use super::{Hyperplane, LaguerreDiagram, SignVector};

/// Diagram together with the arrangement that generated it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramDocument<T> {
    pub sites: Vec<Vec<T>>,
    pub weights: Vec<T>,
    pub hyperplanes: Vec<Hyperplane<T>>,
    pub cells: Vec<SignVector>,
    /// Per-cell mixed action (pure actions as indicator vectors).
    pub labels: Vec<Vec<T>>,
}

impl<T: Clone> DiagramDocument<T> {
    pub fn diagram(&self) -> LaguerreDiagram<T> {
        LaguerreDiagram {
            sites: self.sites.clone(),
            weights: self.weights.clone(),
        }
    }
}

impl<T: Serialize> DiagramDocument<T> {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

impl<T: for<'de> Deserialize<'de>> DiagramDocument<T> {
    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}
