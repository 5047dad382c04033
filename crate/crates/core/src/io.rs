//! JSON tour documents and plain-text grids.
//!
//! JSON is the canonical format. Cells are 1-based coordinate lists in visit
//! order. A loaded document is always verified before it becomes a [`Tour`].

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::board::{BoardSpec, Cell, MoveParams};
use crate::error::{Error, Result};
use crate::tour::Tour;

pub const SCHEMA_VERSION: u32 = 1;

/// How a stored block was derived.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub method: String,
    pub constraint: String,
    pub seed: u64,
    pub solver_version: String,
    pub attempts: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub generator: String,
    /// Construction steps, outermost last.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TourDocument {
    pub schema_version: u32,
    pub dims: Vec<usize>,
    pub alpha: usize,
    pub beta: usize,
    pub closed: bool,
    pub cycle: Vec<Vec<usize>>,
    #[serde(default)]
    pub metadata: Metadata,
}

impl TourDocument {
    pub fn from_tour(t: &Tour, metadata: Metadata) -> Self {
        TourDocument {
            schema_version: SCHEMA_VERSION,
            dims: t.board().dims().to_vec(),
            alpha: t.moves().alpha(),
            beta: t.moves().beta(),
            closed: t.is_closed(),
            cycle: t.cells().into_iter().map(|c| c.0).collect(),
            metadata,
        }
    }

    /// Rebuilds and verifies the tour.
    pub fn to_tour(&self) -> Result<Tour> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "schema version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let board = BoardSpec::new(self.dims.clone())?;
        let mp = MoveParams::new(self.alpha, self.beta)?;
        let cells: Vec<Cell> = self.cycle.iter().map(|c| Cell(c.clone())).collect();
        Tour::from_cells(board, mp, &cells, self.closed).map_err(Error::Verification)
    }
}

/// Serializes a verified tour.
pub fn export_json(t: &Tour, metadata: Metadata) -> Result<String> {
    t.verify().map_err(Error::Verification)?;
    Ok(serde_json::to_string_pretty(&TourDocument::from_tour(t, metadata))?)
}

/// Parses and verifies a tour document.
pub fn import_json(text: &str) -> Result<Tour> {
    Ok(import_document(text)?.0)
}

/// [`import_json`] keeping the metadata.
pub fn import_document(text: &str) -> Result<(Tour, Metadata)> {
    let doc: TourDocument = serde_json::from_str(text)?;
    let t = doc.to_tour()?;
    Ok((t, doc.metadata))
}

/// Visit numbers laid out per cell; 3D boards print one block per value of the last axis.
pub fn export_grid(t: &Tour) -> Result<String> {
    let b = t.board();
    let dims = b.dims();
    if !(2..=3).contains(&dims.len()) {
        return Err(Error::Unsupported(format!(
            "grid output covers 2D and 3D boards; use JSON for {b}"
        )));
    }
    t.verify().map_err(Error::Verification)?;
    let mut visit = vec![0usize; b.cell_count()];
    for (p, &c) in t.order().iter().enumerate() {
        visit[c as usize] = p + 1;
    }
    let width = t.len().to_string().len();
    let layers = dims.get(2).copied().unwrap_or(1);
    let mut out = String::new();
    for layer in 0..layers {
        if dims.len() == 3 {
            if layer > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "layer {}", layer + 1);
        }
        for r in 0..dims[0] {
            let row: Vec<String> = (0..dims[1])
                .map(|c| {
                    let coords: Vec<usize> = if dims.len() == 3 { vec![r, c, layer] } else { vec![r, c] };
                    format!("{:>width$}", visit[b.index_from_zero_based(&coords)])
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    Ok(out)
}
