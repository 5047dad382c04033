//! Closed knight's tours on n-dimensional rectangular boards.

pub mod board;
pub mod construct;
pub mod error;
pub mod feasibility;
pub mod io;
pub mod oracle;
pub mod sites;
pub mod tour;

pub use board::{canonicalize, color, is_connected, is_edge, move_set, neighbors, product_color};
pub use board::{BoardSpec, Cell, MoveParams, MoveVector, Permutation};
pub use error::{Error, Result};
pub use feasibility::{classify_2d, classify_3d, classify_nd, Reason, Theorem, Verdict};
pub use sites::{disjoint_site_pair, find_sites, flip_move, is_bisited, Orientation, Site, SiteKind};
pub use tour::{verify, Tour, Violation};
pub use construct::{construct_2d, construct_3d, construct_nd, glue, lift, lift_generalized, BlockLibrary, Constructor};
pub use io::{export_grid, export_json, import_json, TourDocument};
pub use oracle::{solve, Outcome, SearchBudget, SearchConstraints};
