//! Core library for PRIME: generation of logic-grid puzzle triplets
//! (Generic / Stereotypical / Anti-stereotypical), a backtracking CSP
//! solver with uniqueness checking, deterministic clue and prompt
//! rendering, and swap-based edit-distance scoring with paired
//! significance tests.
//!
//! The pipeline is: load a [`catalog::Catalog`], sample a
//! [`catalog::ColumnSpec`], build the three grids, enumerate clues,
//! find and prune a minimal uniquely-solvable clue set on the generic
//! grid, substitute labels to obtain the stereotypical and
//! anti-stereotypical variants, then score model predictions against
//! the stored grids.

pub mod catalog;
pub mod generator;
pub mod metrics;
pub mod puzzle;
pub mod records;
pub mod render;
pub mod report;
pub mod solver;

pub use catalog::{Catalog, Category, CatalogItem, ColumnSpec, Gender, Group};
pub use generator::{ClueSet, ClueStage, PuzzleTriplet, PuzzleVariant, VariantKind};
pub use puzzle::{Assignment, Atom, Clue, ClueExpr, ClueKind, SolutionGrid};
pub use records::RunRecord;
pub use solver::{PuzzleShape, SolveResult};
