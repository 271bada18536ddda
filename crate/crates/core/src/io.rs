//! Canonical text documents for instances and colourings.
//!
//! An instance document is JSON with a fixed key order, edges as sorted
//! `[u, v]` pairs with `u < v`, blocks sorted internally and among
//! themselves, and one list item per line, so re-serialising a parsed
//! document reproduces it byte for byte.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::driver::{BoundReport, Route};
use crate::graph::{build_host, glue_blocks, BlockSet, GluedInstance, GraphError, PartialColoring, VertexId};

pub const INSTANCE_VERSION: &str = "glued-k4/1";
pub const COLORING_VERSION: &str = "coloring/1";

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported version {0:?}")]
    Version(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub version: String,
    pub n: usize,
    pub red_edges: Vec<[VertexId; 2]>,
    pub blocks: Vec<[VertexId; 4]>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

impl InstanceDocument {
    pub fn from_instance(instance: &GluedInstance, metadata: BTreeMap<String, String>) -> Self {
        let mut red_edges: Vec<[VertexId; 2]> = instance
            .host()
            .edges()
            .iter()
            .map(|&(u, v)| [u.min(v), u.max(v)])
            .collect();
        red_edges.sort_unstable();
        let mut blocks: Vec<[VertexId; 4]> = instance.blocks().blocks().to_vec();
        blocks.sort_unstable();
        InstanceDocument {
            version: INSTANCE_VERSION.to_string(),
            n: instance.n(),
            red_edges,
            blocks,
            metadata,
        }
    }

    pub fn to_instance(&self) -> Result<GluedInstance, DocumentError> {
        if self.version != INSTANCE_VERSION {
            return Err(DocumentError::Version(self.version.clone()));
        }
        let edges: Vec<(VertexId, VertexId)> = self.red_edges.iter().map(|e| (e[0], e[1])).collect();
        let host = build_host(self.n, &edges)?;
        let blocks = BlockSet::new(self.blocks.iter().map(|b| b.to_vec()).collect())?;
        Ok(glue_blocks(host, blocks)?)
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: InstanceDocument = serde_json::from_str(text)?;
        if doc.version != INSTANCE_VERSION {
            return Err(DocumentError::Version(doc.version));
        }
        Ok(doc)
    }

    /// Canonical text: validated through a round trip so lists come out
    /// sorted whatever order they were read in.
    pub fn to_canonical_string(&self) -> Result<String, DocumentError> {
        let canon = InstanceDocument::from_instance(&self.to_instance()?, self.metadata.clone());
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"version\": {},\n", serde_json::to_string(&canon.version)?));
        out.push_str(&format!("  \"n\": {},\n", canon.n));
        out.push_str(&list("red_edges", canon.red_edges.iter().map(|e| compact(e)).collect()));
        out.push_str(",\n");
        out.push_str(&list("blocks", canon.blocks.iter().map(|b| compact(b)).collect()));
        out.push_str(",\n");
        let meta: Vec<String> = canon
            .metadata
            .iter()
            .map(|(k, v)| {
                format!(
                    "{}: {}",
                    serde_json::to_string(k).expect("string"),
                    serde_json::to_string(v).expect("string")
                )
            })
            .collect();
        if meta.is_empty() {
            out.push_str("  \"metadata\": {}\n");
        } else {
            out.push_str(&format!("  \"metadata\": {{\n    {}\n  }}\n", meta.join(",\n    ")));
        }
        out.push_str("}\n");
        Ok(out)
    }
}

fn list(key: &str, items: Vec<String>) -> String {
    if items.is_empty() {
        format!("  \"{key}\": []")
    } else {
        format!("  \"{key}\": [\n    {}\n  ]", items.join(",\n    "))
    }
}

fn compact(items: &[VertexId]) -> String {
    serde_json::to_string(items).expect("integers serialise")
}

/// A colouring with its provenance. `colors[v]` is `null` for `v ∈ Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDocument {
    pub version: String,
    pub n: usize,
    pub mode: String,
    pub route: Option<Route>,
    pub colors: Vec<Option<u8>>,
    pub z: Vec<VertexId>,
    pub report: Option<BoundReport>,
}

impl ColoringDocument {
    pub fn new(coloring: &PartialColoring, mode: &str, route: Option<Route>, report: Option<BoundReport>) -> Self {
        ColoringDocument {
            version: COLORING_VERSION.to_string(),
            n: coloring.n(),
            mode: mode.to_string(),
            route,
            colors: coloring.colors().to_vec(),
            z: coloring.z(),
            report,
        }
    }

    pub fn coloring(&self) -> PartialColoring {
        PartialColoring::from_colors(self.colors.clone())
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: ColoringDocument = serde_json::from_str(text)?;
        if doc.version != COLORING_VERSION {
            return Err(DocumentError::Version(doc.version));
        }
        Ok(doc)
    }

    pub fn to_string_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serialises");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip() {
        let text = r#"{"version":"glued-k4/1","n":8,"red_edges":[[4,0],[0,1],[1,2],[2,3],[3,4],[5,6],[6,7],[5,7]],
            "blocks":[[7,1,3,4],[0,2,5,6]],"metadata":{"seed":"7"}}"#;
        let doc = InstanceDocument::parse(text).unwrap();
        let canon = doc.to_canonical_string().unwrap();
        let again = InstanceDocument::parse(&canon).unwrap().to_canonical_string().unwrap();
        assert_eq!(canon, again);
        assert!(canon.contains("    [0,4],"));
        assert!(canon.contains("    [0,2,5,6],\n    [1,3,4,7]\n"));
    }

    #[test]
    fn empty_lists_and_bad_version() {
        let doc = InstanceDocument {
            version: INSTANCE_VERSION.into(),
            n: 0,
            red_edges: vec![],
            blocks: vec![],
            metadata: BTreeMap::new(),
        };
        let s = doc.to_canonical_string().unwrap();
        assert_eq!(InstanceDocument::parse(&s).unwrap(), doc);
        assert!(matches!(
            InstanceDocument::parse(r#"{"version":"x","n":0,"red_edges":[],"blocks":[]}"#),
            Err(DocumentError::Version(_))
        ));
    }

    #[test]
    fn invalid_graph_is_rejected() {
        let doc = InstanceDocument::parse(r#"{"version":"glued-k4/1","n":2,"red_edges":[[0,0]],"blocks":[]}"#).unwrap();
        assert!(doc.to_instance().is_err());
    }

    #[test]
    fn coloring_round_trip() {
        let c = PartialColoring::from_colors(vec![Some(1), None, Some(4)]);
        let doc = ColoringDocument::new(&c, "partial", Some(Route::Triangle), None);
        let back = ColoringDocument::parse(&doc.to_string_pretty()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.coloring(), c);
        assert_eq!(back.z, vec![1]);
    }
}
