//! Grid and clue data model: the ground-truth solution grid, typed clue
//! expressions over `(category = item)` atoms, their evaluation
//! semantics, and the layman logic notation with its round-trip parser.
//!
//! Layman notation mini-grammar (full parenthesization, single spaces):
//!
//! ```text
//! expr := link | '¬' expr | '(' expr ' ∧ ' expr { ' ∧ ' expr } ')'
//!              | '(' expr ' ∨ ' expr { ' ∨ ' expr } ')'
//! link := '(' atom ' ⇔ ' atom ')'
//! atom := '(' category ' = ' item ')'
//! ```
//!
//! `Link(a, b)` is true iff both atoms belong to the same person (row).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{ColumnSpec, Gender, Group};

pub const NOT: char = '\u{ac}'; // ¬
pub const AND: char = '\u{2227}'; // ∧
pub const OR: char = '\u{2228}'; // ∨
pub const IFF: char = '\u{21d4}'; // ⇔

/// A `(category = item)` reference.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub category: String,
    pub item: String,
}

impl Atom {
    pub fn new(category: impl Into<String>, item: impl Into<String>) -> Atom {
        Atom {
            category: category.into(),
            item: item.into(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} = {})", self.category, self.item)
    }
}

/// Recursive clue expression over atom links.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClueExpr {
    /// True iff both atoms resolve to the same person.
    Link(Atom, Atom),
    Not(Box<ClueExpr>),
    And(Vec<ClueExpr>),
    Or(Vec<ClueExpr>),
}

impl ClueExpr {
    pub fn link(a: Atom, b: Atom) -> ClueExpr {
        ClueExpr::Link(a, b)
    }

    pub fn not(e: ClueExpr) -> ClueExpr {
        ClueExpr::Not(Box::new(e))
    }

    /// Layman-notation text for this expression.
    pub fn logic_text(&self) -> String {
        let mut out = String::new();
        self.write_logic(&mut out);
        out
    }

    fn write_logic(&self, out: &mut String) {
        match self {
            ClueExpr::Link(a, b) => {
                out.push('(');
                out.push_str(&a.to_string());
                out.push(' ');
                out.push(IFF);
                out.push(' ');
                out.push_str(&b.to_string());
                out.push(')');
            }
            ClueExpr::Not(inner) => {
                out.push(NOT);
                inner.write_logic(out);
            }
            ClueExpr::And(parts) | ClueExpr::Or(parts) => {
                let glyph = if matches!(self, ClueExpr::And(_)) { AND } else { OR };
                out.push('(');
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                        out.push(glyph);
                        out.push(' ');
                    }
                    part.write_logic(out);
                }
                out.push(')');
            }
        }
    }

    /// All atoms in first-appearance order, deduplicated.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            ClueExpr::Link(a, b) => {
                for atom in [a, b] {
                    if !out.contains(&atom) {
                        out.push(atom);
                    }
                }
            }
            ClueExpr::Not(inner) => inner.collect_atoms(out),
            ClueExpr::And(parts) | ClueExpr::Or(parts) => {
                for part in parts {
                    part.collect_atoms(out);
                }
            }
        }
    }

    /// Copy with every atom rewritten through `map`.
    pub fn map_atoms(&self, map: &impl Fn(&Atom) -> Atom) -> ClueExpr {
        match self {
            ClueExpr::Link(a, b) => ClueExpr::Link(map(a), map(b)),
            ClueExpr::Not(inner) => ClueExpr::not(inner.map_atoms(map)),
            ClueExpr::And(parts) => ClueExpr::And(parts.iter().map(|p| p.map_atoms(map)).collect()),
            ClueExpr::Or(parts) => ClueExpr::Or(parts.iter().map(|p| p.map_atoms(map)).collect()),
        }
    }
}

/// The five supported clue shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClueKind {
    TrueFalse,
    NeitherNor,
    EitherOr,
    UnalignedPair,
    MultiElimination,
}

impl fmt::Display for ClueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClueKind::TrueFalse => "true_false",
            ClueKind::NeitherNor => "neither_nor",
            ClueKind::EitherOr => "either_or",
            ClueKind::UnalignedPair => "unaligned_pair",
            ClueKind::MultiElimination => "multi_elimination",
        };
        write!(f, "{s}")
    }
}

/// A typed clue: kind tag, expression tree, and optional rendered
/// English sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clue {
    pub kind: ClueKind,
    pub expr: ClueExpr,
    pub english: Option<String>,
}

#[derive(Debug, Error)]
#[error("expression does not match the {kind} template: {text}")]
pub struct TemplateError {
    pub kind: ClueKind,
    pub text: String,
}

impl Clue {
    /// True/False: a single link, or its negation when `positive` is
    /// false. Atoms must come from different columns.
    pub fn true_false(a: Atom, b: Atom, positive: bool) -> Clue {
        let link = ClueExpr::link(a, b);
        let expr = if positive { link } else { ClueExpr::not(link) };
        Clue {
            kind: ClueKind::TrueFalse,
            expr,
            english: None,
        }
    }

    /// Neither/Nor: `(¬(a ⇔ c) ∧ ¬(b ⇔ c))` with `a`, `b` from the
    /// same category.
    pub fn neither_nor(a: Atom, b: Atom, c: Atom) -> Clue {
        let expr = ClueExpr::And(vec![
            ClueExpr::not(ClueExpr::link(a, c.clone())),
            ClueExpr::not(ClueExpr::link(b, c)),
        ]);
        Clue {
            kind: ClueKind::NeitherNor,
            expr,
            english: None,
        }
    }

    /// Either/Or: exactly one of `(a ⇔ c)`, `(b ⇔ c)` holds, with `a`,
    /// `b` from the same category.
    pub fn either_or(a: Atom, b: Atom, c: Atom) -> Clue {
        let la = ClueExpr::link(a, c.clone());
        let lb = ClueExpr::link(b, c);
        let expr = ClueExpr::And(vec![
            ClueExpr::Or(vec![la.clone(), lb.clone()]),
            ClueExpr::not(ClueExpr::And(vec![la, lb])),
        ]);
        Clue {
            kind: ClueKind::EitherOr,
            expr,
            english: None,
        }
    }

    /// Unaligned pair: attributes `x`, `y` belong to different persons,
    /// each of whom is one of the two anchors `d1`, `d2`.
    pub fn unaligned_pair(x: Atom, y: Atom, d1: Atom, d2: Atom) -> Clue {
        let expr = ClueExpr::And(vec![
            ClueExpr::not(ClueExpr::link(x.clone(), y.clone())),
            ClueExpr::Or(vec![
                ClueExpr::link(x.clone(), d1.clone()),
                ClueExpr::link(x, d2.clone()),
            ]),
            ClueExpr::Or(vec![
                ClueExpr::link(y.clone(), d1),
                ClueExpr::link(y, d2),
            ]),
        ]);
        Clue {
            kind: ClueKind::UnalignedPair,
            expr,
            english: None,
        }
    }

    /// Multi-elimination: three atoms from three distinct columns,
    /// pairwise belonging to different persons.
    pub fn multi_elimination(a: Atom, b: Atom, c: Atom) -> Clue {
        let expr = ClueExpr::And(vec![
            ClueExpr::not(ClueExpr::link(a.clone(), b.clone())),
            ClueExpr::not(ClueExpr::link(a, c.clone())),
            ClueExpr::not(ClueExpr::link(b, c)),
        ]);
        Clue {
            kind: ClueKind::MultiElimination,
            expr,
            english: None,
        }
    }

    pub fn logic_text(&self) -> String {
        self.expr.logic_text()
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        self.expr.atoms()
    }

    /// Dedup key: the logic text of the expression with commutative
    /// operand order sorted. The stored expression keeps its
    /// construction order; only the key is canonicalized.
    pub fn canonical_key(&self) -> String {
        fn canon(e: &ClueExpr) -> ClueExpr {
            match e {
                ClueExpr::Link(a, b) => {
                    let (x, y) = if (a.category.as_str(), a.item.as_str())
                        <= (b.category.as_str(), b.item.as_str())
                    {
                        (a.clone(), b.clone())
                    } else {
                        (b.clone(), a.clone())
                    };
                    ClueExpr::Link(x, y)
                }
                ClueExpr::Not(inner) => ClueExpr::not(canon(inner)),
                ClueExpr::And(parts) | ClueExpr::Or(parts) => {
                    let mut sorted: Vec<ClueExpr> = parts.iter().map(canon).collect();
                    sorted.sort_by_key(|p| p.logic_text());
                    if matches!(e, ClueExpr::And(_)) {
                        ClueExpr::And(sorted)
                    } else {
                        ClueExpr::Or(sorted)
                    }
                }
            }
        }
        format!("{}:{}", self.kind, canon(&self.expr).logic_text())
    }

    /// Copy with every atom rewritten through `map`. Kind and shape are
    /// preserved; any rendered English is dropped (it must be
    /// re-rendered against the new labels).
    pub fn map_atoms(&self, map: &impl Fn(&Atom) -> Atom) -> Clue {
        Clue {
            kind: self.kind,
            expr: self.expr.map_atoms(map),
            english: None,
        }
    }

    /// Destructure a True/False clue into `(a, b, positive)`.
    pub fn as_true_false(&self) -> Option<(&Atom, &Atom, bool)> {
        match &self.expr {
            ClueExpr::Link(a, b) => Some((a, b, true)),
            ClueExpr::Not(inner) => match inner.as_ref() {
                ClueExpr::Link(a, b) => Some((a, b, false)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Destructure a Neither/Nor clue into `((a, b), c)`.
    pub fn as_neither_nor(&self) -> Option<((&Atom, &Atom), &Atom)> {
        if let ClueExpr::And(parts) = &self.expr {
            if let [ClueExpr::Not(l1), ClueExpr::Not(l2)] = parts.as_slice() {
                if let (ClueExpr::Link(a, c1), ClueExpr::Link(b, c2)) = (l1.as_ref(), l2.as_ref()) {
                    if c1 == c2 {
                        return Some(((a, b), c1));
                    }
                }
            }
        }
        None
    }

    /// Destructure an Either/Or clue into `((a, b), c)`.
    pub fn as_either_or(&self) -> Option<((&Atom, &Atom), &Atom)> {
        if let ClueExpr::And(parts) = &self.expr {
            if let [ClueExpr::Or(alts), ClueExpr::Not(_)] = parts.as_slice() {
                if let [ClueExpr::Link(a, c1), ClueExpr::Link(b, c2)] = alts.as_slice() {
                    if c1 == c2 {
                        return Some(((a, b), c1));
                    }
                }
            }
        }
        None
    }

    /// Destructure an unaligned-pair clue into `((x, y), (d1, d2))`.
    pub fn as_unaligned_pair(&self) -> Option<((&Atom, &Atom), (&Atom, &Atom))> {
        if let ClueExpr::And(parts) = &self.expr {
            if let [ClueExpr::Not(first), ClueExpr::Or(ox), ClueExpr::Or(oy)] = parts.as_slice() {
                if let ClueExpr::Link(x, y) = first.as_ref() {
                    if let (
                        [ClueExpr::Link(x1, d1), ClueExpr::Link(x2, d2)],
                        [ClueExpr::Link(y1, e1), ClueExpr::Link(y2, e2)],
                    ) = (ox.as_slice(), oy.as_slice())
                    {
                        if x1 == x && x2 == x && y1 == y && y2 == y && d1 == e1 && d2 == e2 {
                            return Some(((x, y), (d1, d2)));
                        }
                    }
                }
            }
        }
        None
    }

    /// Destructure a multi-elimination clue into `(a, b, c)`.
    pub fn as_multi_elimination(&self) -> Option<(&Atom, &Atom, &Atom)> {
        if let ClueExpr::And(parts) = &self.expr {
            if let [ClueExpr::Not(l1), ClueExpr::Not(l2), ClueExpr::Not(l3)] = parts.as_slice() {
                if let (ClueExpr::Link(a1, b1), ClueExpr::Link(a2, c1), ClueExpr::Link(b2, c2)) =
                    (l1.as_ref(), l2.as_ref(), l3.as_ref())
                {
                    if a1 == a2 && b1 == b2 && c1 == c2 {
                        return Some((a1, b1, c1));
                    }
                }
            }
        }
        None
    }

    /// Verify that `expr` structurally matches the kind's template.
    pub fn check_template(&self) -> Result<(), TemplateError> {
        let ok = match self.kind {
            ClueKind::TrueFalse => self.as_true_false().is_some(),
            ClueKind::NeitherNor => self.as_neither_nor().is_some(),
            ClueKind::EitherOr => self.as_either_or().is_some(),
            ClueKind::UnalignedPair => self.as_unaligned_pair().is_some(),
            ClueKind::MultiElimination => self.as_multi_elimination().is_some(),
        };
        if ok {
            Ok(())
        } else {
            Err(TemplateError {
                kind: self.kind,
                text: self.logic_text(),
            })
        }
    }
}

/// Column header of a solution grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMeta {
    pub name: String,
    pub group: Group,
}

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid must have at least 2 rows and 3 columns, got {rows}x{cols}")]
    BadShape { rows: usize, cols: usize },
    #[error("row {row} has {got} cells, expected {expected}")]
    RaggedRow {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("column {column:?} repeats item {item:?} (Latin-square violation)")]
    RepeatedItem { column: String, item: String },
    #[error("first column must be the Names column")]
    MissingNamesColumn,
}

/// The P×Q ground-truth grid. Row `r`, column 0 is the person's name;
/// every column holds each of its items exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionGrid {
    pub columns: Vec<ColumnMeta>,
    /// `cells[r][c]` = item label of row `r` in column `c`.
    pub cells: Vec<Vec<String>>,
}

impl SolutionGrid {
    pub fn new(columns: Vec<ColumnMeta>, cells: Vec<Vec<String>>) -> Result<SolutionGrid, GridError> {
        let grid = SolutionGrid { columns, cells };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<(), GridError> {
        let rows = self.cells.len();
        let cols = self.columns.len();
        if rows < 2 || cols < 3 {
            return Err(GridError::BadShape { rows, cols });
        }
        if self.columns[0].group != Group::Names {
            return Err(GridError::MissingNamesColumn);
        }
        for (r, row) in self.cells.iter().enumerate() {
            if row.len() != cols {
                return Err(GridError::RaggedRow {
                    row: r,
                    got: row.len(),
                    expected: cols,
                });
            }
        }
        for c in 0..cols {
            let mut seen = std::collections::HashSet::new();
            for row in &self.cells {
                if !seen.insert(row[c].as_str()) {
                    return Err(GridError::RepeatedItem {
                        column: self.columns[c].name.clone(),
                        item: row[c].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn row_name(&self, r: usize) -> &str {
        &self.cells[r][0]
    }

    pub fn row_names(&self) -> Vec<&str> {
        self.cells.iter().map(|row| row[0].as_str()).collect()
    }

    pub fn cell(&self, r: usize, c: usize) -> &str {
        &self.cells[r][c]
    }

    /// Items of column `c` in row order.
    pub fn column_items(&self, c: usize) -> Vec<&str> {
        self.cells.iter().map(|row| row[c].as_str()).collect()
    }

    pub fn column_index(&self, category: &str) -> Option<usize> {
        self.columns
            .iter()
            .position(|m| m.name.eq_ignore_ascii_case(category))
    }

    /// Row holding `item` in the column named `category`.
    pub fn row_of(&self, category: &str, item: &str) -> Option<usize> {
        let c = self.column_index(category)?;
        self.cells.iter().position(|row| row[c] == item)
    }

    /// The grid's own cell assignment, for clue evaluation.
    pub fn assignment(&self) -> Assignment {
        let mut columns = HashMap::new();
        for (c, meta) in self.columns.iter().enumerate() {
            let mut items = HashMap::new();
            for (r, row) in self.cells.iter().enumerate() {
                items.insert(row[c].clone(), r);
            }
            columns.insert(meta.name.clone(), items);
        }
        Assignment { columns }
    }

    /// Atom for the grid cell at `(r, c)`.
    pub fn atom(&self, r: usize, c: usize) -> Atom {
        Atom::new(self.columns[c].name.clone(), self.cells[r][c].clone())
    }
}

/// A (possibly candidate) placement of every item into a row: per
/// column, a bijection item → row index. The Names column is included
/// with its fixed row identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    /// category name → (item label → row index)
    pub columns: HashMap<String, HashMap<String, usize>>,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("unknown category {0:?}")]
    UnknownCategory(String),
    #[error("unknown item {item:?} in category {category:?}")]
    UnknownItem { category: String, item: String },
}

/// Row index an atom resolves to under an assignment.
pub fn person_of(assignment: &Assignment, atom: &Atom) -> Result<usize, EvalError> {
    let col = assignment
        .columns
        .get(&atom.category)
        .or_else(|| {
            assignment
                .columns
                .iter()
                .find(|(k, _)| k.eq_ignore_ascii_case(&atom.category))
                .map(|(_, v)| v)
        })
        .ok_or_else(|| EvalError::UnknownCategory(atom.category.clone()))?;
    col.get(&atom.item)
        .copied()
        .ok_or_else(|| EvalError::UnknownItem {
            category: atom.category.clone(),
            item: atom.item.clone(),
        })
}

/// Truth value of a clue under an assignment. `Link(a, b)` is true iff
/// both atoms resolve to the same row; connectives are standard.
pub fn eval_clue(clue: &Clue, assignment: &Assignment) -> Result<bool, EvalError> {
    eval_expr(&clue.expr, assignment)
}

pub fn eval_expr(expr: &ClueExpr, assignment: &Assignment) -> Result<bool, EvalError> {
    match expr {
        ClueExpr::Link(a, b) => Ok(person_of(assignment, a)? == person_of(assignment, b)?),
        ClueExpr::Not(inner) => Ok(!eval_expr(inner, assignment)?),
        ClueExpr::And(parts) => {
            for part in parts {
                if !eval_expr(part, assignment)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ClueExpr::Or(parts) => {
            for part in parts {
                if eval_expr(part, assignment)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

#[derive(Debug, Error)]
#[error("logic parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

/// Parse layman logic notation back into an expression tree.
pub fn parse_logic(text: &str) -> Result<ClueExpr, ParseError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let expr = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.chars.len() {
        return Err(parser.err("trailing input"));
    }
    Ok(expr)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err(&self, message: &str) -> ParseError {
        ParseError {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.bump() {
            Some(c) if c == want => Ok(()),
            _ => Err(self.err(&format!("expected {want:?}"))),
        }
    }

    fn expr(&mut self) -> Result<ClueExpr, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(NOT) => {
                self.bump();
                Ok(ClueExpr::not(self.expr()?))
            }
            Some('(') => self.group(),
            _ => Err(self.err("expected '(' or negation")),
        }
    }

    /// A parenthesized group: either a link `(atom ⇔ atom)`, a
    /// connective chain `(expr ∧ expr ...)`, or a bare atom is
    /// rejected (atoms only occur inside links).
    fn group(&mut self) -> Result<ClueExpr, ParseError> {
        self.expect('(')?;
        self.skip_ws();
        // A link's operands are atoms, which also start with '('. Try
        // atom-link first, falling back to expression connectives.
        let start = self.pos;
        if let Ok(first_atom) = self.atom() {
            self.skip_ws();
            if self.peek() == Some(IFF) {
                self.bump();
                self.skip_ws();
                let second = self.atom()?;
                self.skip_ws();
                self.expect(')')?;
                return Ok(ClueExpr::Link(first_atom, second));
            }
        }
        self.pos = start;

        let first = self.expr()?;
        self.skip_ws();
        let glyph = match self.peek() {
            Some(c @ (AND | OR)) => c,
            _ => return Err(self.err("expected connective")),
        };
        let mut parts = vec![first];
        while self.peek() == Some(glyph) {
            self.bump();
            parts.push(self.expr()?);
            self.skip_ws();
        }
        self.expect(')')?;
        if glyph == AND {
            Ok(ClueExpr::And(parts))
        } else {
            Ok(ClueExpr::Or(parts))
        }
    }

    /// `'(' category ' = ' item ')'`; category and item may contain
    /// spaces but not parentheses, glyphs, or ' = '.
    fn atom(&mut self) -> Result<Atom, ParseError> {
        self.expect('(')?;
        let mut body = String::new();
        loop {
            match self.bump() {
                Some(')') => break,
                Some(c @ ('(' | NOT | AND | OR | IFF)) => {
                    return Err(self.err(&format!("unexpected {c:?} inside atom")))
                }
                Some(c) => body.push(c),
                None => return Err(self.err("unterminated atom")),
            }
        }
        let (category, item) = body
            .split_once(" = ")
            .ok_or_else(|| self.err("atom missing ' = '"))?;
        if category.is_empty() || item.is_empty() || item.contains(" = ") {
            return Err(self.err("malformed atom"));
        }
        Ok(Atom::new(category, item))
    }
}

/// Assignment builder used by tests and the naive enumerator: fixes
/// the Names column to row identity and takes one row-permutation per
/// non-name column (`perms[c-1][item_idx] = row`).
pub fn assignment_from_perms(spec: &ColumnSpec, perms: &[Vec<usize>]) -> Assignment {
    let mut columns = HashMap::new();
    let names = &spec.columns[0];
    let mut name_map = HashMap::new();
    for (r, item) in names.items.iter().enumerate() {
        name_map.insert(item.label.clone(), r);
    }
    columns.insert(names.category.clone(), name_map);
    for (i, col) in spec.columns.iter().enumerate().skip(1) {
        let mut map = HashMap::new();
        for (item_idx, item) in col.items.iter().enumerate() {
            map.insert(item.label.clone(), perms[i - 1][item_idx]);
        }
        columns.insert(col.category.clone(), map);
    }
    Assignment { columns }
}

/// Gender tag lookup over a grid's labels via an external tag map.
pub fn gender_of_label(tags: &HashMap<String, Gender>, label: &str) -> Option<Gender> {
    tags.get(label).copied()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta(name: &str, group: Group) -> ColumnMeta {
        ColumnMeta {
            name: name.to_string(),
            group,
        }
    }

    fn figure_grid() -> SolutionGrid {
        SolutionGrid::new(
            vec![
                meta("Name", Group::Names),
                meta("Occupation", Group::BiasProbing),
                meta("Train", Group::General),
            ],
            vec![
                vec!["alice".into(), "nurse".into(), "steam locomotive".into()],
                vec!["ben".into(), "doctor".into(), "diesel locomotive".into()],
            ],
        )
        .unwrap()
    }

    #[test]
    fn person_of_resolves_items_and_names() {
        let grid = figure_grid();
        let a = grid.assignment();
        assert_eq!(person_of(&a, &Atom::new("Occupation", "nurse")).unwrap(), 0);
        assert_eq!(person_of(&a, &Atom::new("Name", "ben")).unwrap(), 1);
        assert!(matches!(
            person_of(&a, &Atom::new("Occupation", "pilot")),
            Err(EvalError::UnknownItem { .. })
        ));
    }

    #[test]
    fn true_false_semantics() {
        let grid = figure_grid();
        let a = grid.assignment();
        let co_row = Clue::true_false(
            Atom::new("Occupation", "nurse"),
            Atom::new("Train", "steam locomotive"),
            false,
        );
        // nurse and steam locomotive share row 0, so the negation is false
        assert!(!eval_clue(&co_row, &a).unwrap());
        let cross = Clue::true_false(
            Atom::new("Occupation", "nurse"),
            Atom::new("Train", "diesel locomotive"),
            false,
        );
        assert!(eval_clue(&cross, &a).unwrap());
    }

    #[test]
    fn logic_text_matches_published_notation() {
        let clue = Clue::true_false(Atom::new("Sports", "golf"), Atom::new("Car", "kia forte"), false);
        assert_eq!(
            clue.logic_text(),
            "\u{ac}((Sports = golf) \u{21d4} (Car = kia forte))"
        );
    }

    #[test]
    fn round_trip_all_templates() {
        let a = Atom::new("Pet", "dog");
        let b = Atom::new("Pet", "parrot");
        let c = Atom::new("Occupation", "doctor");
        let d = Atom::new("Name", "sarah");
        let e = Atom::new("Name", "kenneth");
        let clues = vec![
            Clue::true_false(a.clone(), c.clone(), true),
            Clue::true_false(a.clone(), c.clone(), false),
            Clue::neither_nor(a.clone(), b.clone(), c.clone()),
            Clue::either_or(a.clone(), b.clone(), c.clone()),
            Clue::unaligned_pair(a.clone(), c.clone(), d.clone(), e.clone()),
            Clue::multi_elimination(a.clone(), c.clone(), Atom::new("Toy", "train")),
        ];
        for clue in clues {
            clue.check_template().unwrap();
            let parsed = parse_logic(&clue.logic_text()).unwrap();
            assert_eq!(parsed, clue.expr, "round trip failed for {}", clue.logic_text());
        }
    }

    #[test]
    fn template_check_rejects_mislabeled_expression() {
        let mut clue = Clue::neither_nor(
            Atom::new("Pet", "dog"),
            Atom::new("Pet", "parrot"),
            Atom::new("Occupation", "doctor"),
        );
        clue.kind = ClueKind::EitherOr;
        assert!(clue.check_template().is_err());
    }

    #[test]
    fn latin_violation_rejected() {
        let err = SolutionGrid::new(
            vec![
                meta("Name", Group::Names),
                meta("Occupation", Group::BiasProbing),
                meta("Train", Group::General),
            ],
            vec![
                vec!["alice".into(), "nurse".into(), "steam locomotive".into()],
                vec!["ben".into(), "nurse".into(), "diesel locomotive".into()],
            ],
        )
        .unwrap_err();
        assert!(matches!(err, GridError::RepeatedItem { .. }));
    }
}
