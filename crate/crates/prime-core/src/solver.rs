//! Backtracking CSP engine over per-column bijections.
//!
//! Variables are the non-name columns; each takes a bijection from its
//! item pool to rows. Columns are assigned in spec order, items in pool
//! order, and a clue is checked as soon as every column it touches is
//! assigned. No further propagation: at these sizes (the worst
//! supported shape explores 6!² partial states) exhaustive search is
//! fast and its behavior easy to verify.

use itertools::Itertools;
use thiserror::Error;

use crate::catalog::{ColumnSpec, Group};
use crate::puzzle::{Clue, ClueExpr, ColumnMeta, SolutionGrid};

/// Solve-time view of a puzzle: row labels (the Names column in row
/// order) plus the non-name column pools.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuzzleShape {
    pub row_names: Vec<String>,
    pub names_category: String,
    /// Non-name columns: (category, group, pool in canonical order).
    pub columns: Vec<(String, Group, Vec<String>)>,
}

impl PuzzleShape {
    /// Shape of a column spec; rows are the names in pool order.
    pub fn from_spec(spec: &ColumnSpec) -> PuzzleShape {
        PuzzleShape {
            row_names: spec.columns[0].items.iter().map(|i| i.label.clone()).collect(),
            names_category: spec.columns[0].category.clone(),
            columns: spec.columns[1..]
                .iter()
                .map(|c| {
                    (
                        c.category.clone(),
                        c.group,
                        c.items.iter().map(|i| i.label.clone()).collect(),
                    )
                })
                .collect(),
        }
    }

    /// Shape of an existing grid; pools are taken in row order.
    pub fn from_grid(grid: &SolutionGrid) -> PuzzleShape {
        PuzzleShape {
            row_names: grid.row_names().iter().map(|s| s.to_string()).collect(),
            names_category: grid.columns[0].name.clone(),
            columns: grid
                .columns
                .iter()
                .enumerate()
                .skip(1)
                .map(|(c, meta)| {
                    (
                        meta.name.clone(),
                        meta.group,
                        grid.column_items(c).iter().map(|s| s.to_string()).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.row_names.len()
    }

    fn column_index(&self, category: &str) -> Option<usize> {
        self.columns
            .iter()
            .position(|(name, _, _)| name.eq_ignore_ascii_case(category))
    }

    fn item_index(&self, col: usize, item: &str) -> Option<usize> {
        self.columns[col].2.iter().position(|i| i == item)
    }

    /// Rebuild a full solution grid from per-column row assignments
    /// (`perms[c][item_idx] = row`).
    pub fn grid_from_perms(&self, perms: &[Vec<usize>]) -> SolutionGrid {
        let p = self.rows();
        let mut columns = vec![ColumnMeta {
            name: self.names_category.clone(),
            group: Group::Names,
        }];
        let mut cells: Vec<Vec<String>> = (0..p)
            .map(|r| vec![self.row_names[r].clone()])
            .collect();
        for (c, (name, group, pool)) in self.columns.iter().enumerate() {
            columns.push(ColumnMeta {
                name: name.clone(),
                group: *group,
            });
            let mut by_row = vec![String::new(); p];
            for (item_idx, &row) in perms[c].iter().enumerate() {
                by_row[row] = pool[item_idx].clone();
            }
            for (r, cell) in by_row.into_iter().enumerate() {
                cells[r].push(cell);
            }
        }
        SolutionGrid { columns, cells }
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("clue atom references unknown category {0:?}")]
    UnknownCategory(String),
    #[error("clue atom references item {item:?} outside the {category:?} pool")]
    UnknownItem { category: String, item: String },
}

/// Search counters, identical across runs on identical inputs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub clue_checks: u64,
    pub solutions: u64,
}

/// Outcome of [`count_solutions`].
#[derive(Debug, Clone)]
pub struct CountOutcome {
    /// Number of satisfying assignments, truncated at the limit.
    pub count: usize,
    /// Up to two witness grids in discovery order.
    pub witnesses: Vec<SolutionGrid>,
    pub stats: SearchStats,
}

/// Outcome of [`solve_unique`].
#[derive(Debug, Clone)]
pub enum SolveResult {
    Unique(SolutionGrid),
    /// Two distinct witnesses found at the count-2 probe.
    NotUnique(Box<(SolutionGrid, SolutionGrid)>),
    Unsat,
}

impl SolveResult {
    pub fn unique(&self) -> Option<&SolutionGrid> {
        match self {
            SolveResult::Unique(g) => Some(g),
            _ => None,
        }
    }
}

/// Atom compiled to pool indices. `col == usize::MAX` marks the Names
/// column, which resolves by row identity.
#[derive(Debug, Clone, Copy)]
struct CompiledAtom {
    col: usize,
    item: usize,
}

#[derive(Debug, Clone)]
enum CompiledExpr {
    Link(CompiledAtom, CompiledAtom),
    Not(Box<CompiledExpr>),
    And(Vec<CompiledExpr>),
    Or(Vec<CompiledExpr>),
}

const NAMES_COL: usize = usize::MAX;

fn compile_atom(shape: &PuzzleShape, atom: &crate::puzzle::Atom) -> Result<CompiledAtom, SolverError> {
    if atom.category.eq_ignore_ascii_case(&shape.names_category) {
        let row = shape
            .row_names
            .iter()
            .position(|n| *n == atom.item)
            .ok_or_else(|| SolverError::UnknownItem {
                category: atom.category.clone(),
                item: atom.item.clone(),
            })?;
        return Ok(CompiledAtom {
            col: NAMES_COL,
            item: row,
        });
    }
    let col = shape
        .column_index(&atom.category)
        .ok_or_else(|| SolverError::UnknownCategory(atom.category.clone()))?;
    let item = shape
        .item_index(col, &atom.item)
        .ok_or_else(|| SolverError::UnknownItem {
            category: atom.category.clone(),
            item: atom.item.clone(),
        })?;
    Ok(CompiledAtom { col, item })
}

fn compile_expr(shape: &PuzzleShape, expr: &ClueExpr) -> Result<CompiledExpr, SolverError> {
    Ok(match expr {
        ClueExpr::Link(a, b) => CompiledExpr::Link(compile_atom(shape, a)?, compile_atom(shape, b)?),
        ClueExpr::Not(inner) => CompiledExpr::Not(Box::new(compile_expr(shape, inner)?)),
        ClueExpr::And(parts) => CompiledExpr::And(
            parts
                .iter()
                .map(|p| compile_expr(shape, p))
                .collect::<Result<_, _>>()?,
        ),
        ClueExpr::Or(parts) => CompiledExpr::Or(
            parts
                .iter()
                .map(|p| compile_expr(shape, p))
                .collect::<Result<_, _>>()?,
        ),
    })
}

fn max_col(expr: &CompiledExpr) -> usize {
    match expr {
        CompiledExpr::Link(a, b) => {
            let ca = if a.col == NAMES_COL { 0 } else { a.col + 1 };
            let cb = if b.col == NAMES_COL { 0 } else { b.col + 1 };
            ca.max(cb)
        }
        CompiledExpr::Not(inner) => max_col(inner),
        CompiledExpr::And(parts) | CompiledExpr::Or(parts) => {
            parts.iter().map(max_col).max().unwrap_or(0)
        }
    }
}

fn eval_compiled(expr: &CompiledExpr, perms: &[Vec<usize>]) -> bool {
    fn row(atom: &CompiledAtom, perms: &[Vec<usize>]) -> usize {
        if atom.col == NAMES_COL {
            atom.item
        } else {
            perms[atom.col][atom.item]
        }
    }
    match expr {
        CompiledExpr::Link(a, b) => row(a, perms) == row(b, perms),
        CompiledExpr::Not(inner) => !eval_compiled(inner, perms),
        CompiledExpr::And(parts) => parts.iter().all(|p| eval_compiled(p, perms)),
        CompiledExpr::Or(parts) => parts.iter().any(|p| eval_compiled(p, perms)),
    }
}

/// Count satisfying assignments, stopping at `limit`. Deterministic:
/// columns in shape order, row permutations in lexicographic order.
pub fn count_solutions(
    shape: &PuzzleShape,
    clues: &[Clue],
    limit: usize,
) -> Result<CountOutcome, SolverError> {
    assert!(limit >= 1, "limit must be at least 1");
    let p = shape.rows();
    let ncols = shape.columns.len();

    // Clues grouped by the deepest (1-based) non-name column they
    // touch; checked as soon as that column is assigned. Depth 0 means
    // the clue only references names and is checked up front.
    let mut by_depth: Vec<Vec<CompiledExpr>> = vec![Vec::new(); ncols + 1];
    for clue in clues {
        let compiled = compile_expr(shape, &clue.expr)?;
        let depth = max_col(&compiled);
        by_depth[depth].push(compiled);
    }

    let mut stats = SearchStats::default();
    let empty: Vec<Vec<usize>> = Vec::new();
    for expr in &by_depth[0] {
        stats.clue_checks += 1;
        if !eval_compiled(expr, &empty) {
            return Ok(CountOutcome {
                count: 0,
                witnesses: Vec::new(),
                stats,
            });
        }
    }

    let all_perms: Vec<Vec<usize>> = (0..p).permutations(p).collect();
    let mut perms: Vec<Vec<usize>> = Vec::with_capacity(ncols);
    let mut witnesses = Vec::new();
    let mut count = 0usize;

    fn recurse(
        depth: usize,
        ncols: usize,
        all_perms: &[Vec<usize>],
        by_depth: &[Vec<CompiledExpr>],
        shape: &PuzzleShape,
        perms: &mut Vec<Vec<usize>>,
        count: &mut usize,
        witnesses: &mut Vec<SolutionGrid>,
        stats: &mut SearchStats,
        limit: usize,
    ) {
        if *count >= limit {
            return;
        }
        if depth == ncols {
            *count += 1;
            stats.solutions += 1;
            if witnesses.len() < 2 {
                witnesses.push(shape.grid_from_perms(perms));
            }
            return;
        }
        'perm: for perm in all_perms {
            if *count >= limit {
                return;
            }
            stats.nodes += 1;
            perms.push(perm.clone());
            for expr in &by_depth[depth + 1] {
                stats.clue_checks += 1;
                if !eval_compiled(expr, perms) {
                    perms.pop();
                    continue 'perm;
                }
            }
            recurse(
                depth + 1,
                ncols,
                all_perms,
                by_depth,
                shape,
                perms,
                count,
                witnesses,
                stats,
                limit,
            );
            perms.pop();
        }
    }

    recurse(
        0,
        ncols,
        &all_perms,
        &by_depth,
        shape,
        &mut perms,
        &mut count,
        &mut witnesses,
        &mut stats,
        limit,
    );

    Ok(CountOutcome {
        count,
        witnesses,
        stats,
    })
}

/// Probe at limit 2: unique solution, a witness pair, or unsat.
pub fn solve_unique(shape: &PuzzleShape, clues: &[Clue]) -> Result<SolveResult, SolverError> {
    let outcome = count_solutions(shape, clues, 2)?;
    Ok(match outcome.count {
        0 => SolveResult::Unsat,
        1 => SolveResult::Unique(outcome.witnesses.into_iter().next().expect("one witness")),
        _ => {
            let mut it = outcome.witnesses.into_iter();
            let a = it.next().expect("first witness");
            let b = it.next().expect("second witness");
            SolveResult::NotUnique(Box::new((a, b)))
        }
    })
}

/// True iff the clue set pins exactly the target grid.
pub fn is_unique_for(
    shape: &PuzzleShape,
    clues: &[Clue],
    target: &SolutionGrid,
) -> Result<bool, SolverError> {
    Ok(match solve_unique(shape, clues)? {
        SolveResult::Unique(found) => found == *target,
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puzzle::{Atom, Clue};
    use crate::catalog::{CatalogItem, ColumnPool, ColumnSpec};

    fn spec_2x3() -> ColumnSpec {
        let item = |label: &str| CatalogItem {
            label: label.into(),
            gender: None,
        };
        ColumnSpec {
            rows: 2,
            columns: vec![
                ColumnPool {
                    category: "Name".into(),
                    group: Group::Names,
                    items: vec![item("alice"), item("ben")],
                },
                ColumnPool {
                    category: "Occupation".into(),
                    group: Group::BiasProbing,
                    items: vec![item("doctor"), item("nurse")],
                },
                ColumnPool {
                    category: "Train".into(),
                    group: Group::General,
                    items: vec![item("steam locomotive"), item("diesel locomotive")],
                },
            ],
        }
    }

    #[test]
    fn empty_clue_set_counts_all_bijections() {
        let shape = PuzzleShape::from_spec(&spec_2x3());
        let out = count_solutions(&shape, &[], 10).unwrap();
        assert_eq!(out.count, 4); // (2!)^2
    }

    #[test]
    fn contradiction_is_unsat() {
        let shape = PuzzleShape::from_spec(&spec_2x3());
        let a = Atom::new("Occupation", "doctor");
        let b = Atom::new("Train", "steam locomotive");
        let clues = vec![
            Clue::true_false(a.clone(), b.clone(), true),
            Clue::true_false(a, b, false),
        ];
        let out = count_solutions(&shape, &clues, 10).unwrap();
        assert_eq!(out.count, 0);
        assert!(matches!(solve_unique(&shape, &clues).unwrap(), SolveResult::Unsat));
    }

    #[test]
    fn pinning_clues_give_unique_grid() {
        let shape = PuzzleShape::from_spec(&spec_2x3());
        let clues = vec![
            Clue::true_false(Atom::new("Name", "alice"), Atom::new("Occupation", "doctor"), true),
            Clue::true_false(
                Atom::new("Name", "alice"),
                Atom::new("Train", "steam locomotive"),
                true,
            ),
        ];
        match solve_unique(&shape, &clues).unwrap() {
            SolveResult::Unique(grid) => {
                assert_eq!(grid.cell(0, 1), "doctor");
                assert_eq!(grid.cell(1, 1), "nurse");
                assert_eq!(grid.cell(0, 2), "steam locomotive");
            }
            other => panic!("expected unique, got {other:?}"),
        }
    }

    #[test]
    fn ambiguous_set_returns_witness_pair() {
        let shape = PuzzleShape::from_spec(&spec_2x3());
        match solve_unique(&shape, &[]).unwrap() {
            SolveResult::NotUnique(pair) => {
                assert_ne!(pair.0, pair.1);
            }
            other => panic!("expected not-unique, got {other:?}"),
        }
    }

    #[test]
    fn determinism_includes_stats() {
        let shape = PuzzleShape::from_spec(&spec_2x3());
        let clues = vec![Clue::true_false(
            Atom::new("Occupation", "doctor"),
            Atom::new("Train", "steam locomotive"),
            false,
        )];
        let a = count_solutions(&shape, &clues, 10).unwrap();
        let b = count_solutions(&shape, &clues, 10).unwrap();
        assert_eq!(a.count, b.count);
        assert_eq!(a.stats, b.stats);
    }
}
