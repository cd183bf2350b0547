//! JSON documents: labelings (with an optional generating pattern) and
//! verification reports.
//!
//! Writers emit keys in a fixed order; readers accept any order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{oriented_cycle, torus, Digraph, ProductKind};
use crate::labeling::{Color, ConstraintParams, Labeling};
use crate::patterns::Pattern;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocumentProduct {
    Cartesian,
    Strong,
    /// A single oriented cycle, stored as one row (`m = 1`).
    None,
}

impl From<Option<ProductKind>> for DocumentProduct {
    fn from(kind: Option<ProductKind>) -> Self {
        match kind {
            Some(ProductKind::Cartesian) => DocumentProduct::Cartesian,
            Some(ProductKind::Strong) => DocumentProduct::Strong,
            None => DocumentProduct::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingDocument {
    pub product: DocumentProduct,
    pub m: usize,
    pub n: usize,
    pub p: u32,
    pub q: u32,
    pub k: Color,
    pub labels: Vec<Vec<Color>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Pattern>,
}

impl LabelingDocument {
    /// Document for a labeling of `C_m ∘ C_n` (or of a cycle when `kind` is `None`).
    pub fn new(
        kind: Option<ProductKind>,
        f: &Labeling,
        params: ConstraintParams,
        pattern: Option<Pattern>,
    ) -> Self {
        Self {
            product: kind.into(),
            m: f.rows(),
            n: f.cols(),
            p: params.p,
            q: params.q,
            k: f.k_budget(),
            labels: f.row_vectors(),
            pattern,
        }
    }

    pub fn params(&self) -> ConstraintParams {
        ConstraintParams::new(self.p, self.q)
    }

    pub fn graph(&self) -> Result<Digraph> {
        match self.product {
            DocumentProduct::Cartesian => torus(ProductKind::Cartesian, self.m, self.n),
            DocumentProduct::Strong => torus(ProductKind::Strong, self.m, self.n),
            DocumentProduct::None if self.m == 1 => oriented_cycle(self.n),
            DocumentProduct::None => Err(Error::InvalidInput(format!(
                "a cycle document must have m = 1, got m = {}",
                self.m
            ))),
        }
    }

    pub fn labeling(&self) -> Result<Labeling> {
        if self.labels.len() != self.m {
            return Err(Error::InvalidInput(format!(
                "expected {} label rows, found {}",
                self.m,
                self.labels.len()
            )));
        }
        if let Some((i, row)) = self.labels.iter().enumerate().find(|(_, r)| r.len() != self.n) {
            return Err(Error::InvalidInput(format!(
                "row {i} has {} labels, expected {}",
                row.len(),
                self.n
            )));
        }
        Labeling::new(self.m, self.n, self.labels.concat(), self.k)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("labeling documents always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("bad labeling document: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportWitness {
    Labeling(LabelingDocument),
    Pattern(Pattern),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub check: String,
    pub holds: bool,
    pub count: u64,
    #[serde(default)]
    pub witness: Option<ReportWitness>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report documents always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("bad report document: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_order_is_fixed() {
        let f = Labeling::new(3, 3, vec![0, 2, 4, 2, 4, 0, 4, 0, 2], 4).unwrap();
        let doc = LabelingDocument::new(Some(ProductKind::Cartesian), &f, ConstraintParams::L21, None);
        assert_eq!(
            doc.to_json(),
            r#"{"product":"cartesian","m":3,"n":3,"p":2,"q":1,"k":4,"labels":[[0,2,4],[2,4,0],[4,0,2]]}"#
        );
        let with_pattern = LabelingDocument {
            pattern: Some(Pattern::new(vec![0, 2, 4]).unwrap()),
            ..doc
        };
        assert!(with_pattern.to_json().ends_with(r#""labels":[[0,2,4],[2,4,0],[4,0,2]],"pattern":[0,2,4]}"#));
    }

    #[test]
    fn reader_accepts_any_key_order() {
        let doc = LabelingDocument::from_json(
            r#"{"labels":[[0,2,4]],"k":4,"q":1,"p":2,"n":3,"m":1,"product":"none"}"#,
        )
        .unwrap();
        assert_eq!(doc.product, DocumentProduct::None);
        assert_eq!(doc.graph().unwrap().n_vertices(), 3);
        assert_eq!(doc.labeling().unwrap().colors(), &[0, 2, 4]);
    }

    #[test]
    fn malformed_documents() {
        assert!(LabelingDocument::from_json(r#"{"product":"weird"}"#).is_err());
        let doc = LabelingDocument::from_json(
            r#"{"product":"cartesian","m":3,"n":3,"p":2,"q":1,"k":4,"labels":[[0,2,4],[2,4]]}"#,
        )
        .unwrap();
        assert!(doc.labeling().is_err());
        let doc = LabelingDocument::from_json(
            r#"{"product":"none","m":2,"n":3,"p":2,"q":1,"k":4,"labels":[[0,2,4],[0,2,4]]}"#,
        )
        .unwrap();
        assert!(doc.graph().is_err());
    }

    #[test]
    fn report_shape() {
        let r = ReportDocument {
            check: "l2211-periodicity".into(),
            holds: true,
            count: 4,
            witness: Some(ReportWitness::Pattern(Pattern::new(vec![2, 0, 5, 3, 1, 6, 4]).unwrap())),
        };
        let json = r.to_json();
        assert_eq!(
            json,
            r#"{"check":"l2211-periodicity","holds":true,"count":4,"witness":[2,0,5,3,1,6,4]}"#
        );
        assert_eq!(ReportDocument::from_json(&json).unwrap(), r);
        let none = ReportDocument {
            witness: None,
            ..r
        };
        assert!(none.to_json().ends_with(r#""witness":null}"#));
    }
}
