//! End-to-end triplet generation: build the three aligned grids,
//! enumerate every clue that holds on the generic grid, search for a
//! uniquely-solvable subset (starting at n = 10), prune it to a minimal
//! set, then substitute labels row-by-row to obtain the stereotypical
//! and anti-stereotypical variants with the same logical skeleton.

use std::collections::HashSet;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{Catalog, CatalogItem, ColumnPool, ColumnSpec, Gender, Group, SampleError};
use crate::puzzle::{parse_logic, Atom, Clue, ClueKind, ColumnMeta, SolutionGrid};
use crate::render;
use crate::solver::{self, PuzzleShape, SolverError};

/// Stable seed derivation for independent sub-streams (splitmix64).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a hash of a string, for seeding per-puzzle streams.
pub fn hash_label(text: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in text.bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClueStage {
    All,
    Solvable,
    Minimal,
}

/// A staged clue collection from the generation pipeline.
#[derive(Debug, Clone)]
pub struct ClueSet {
    pub clues: Vec<Clue>,
    pub stage: ClueStage,
}

/// Puzzle variant tag: Generic, Stereotypical, Anti-stereotypical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VariantKind {
    #[serde(rename = "g")]
    Generic,
    #[serde(rename = "s")]
    Stereo,
    #[serde(rename = "as")]
    Anti,
}

impl VariantKind {
    pub fn tag(&self) -> &'static str {
        match self {
            VariantKind::Generic => "g",
            VariantKind::Stereo => "s",
            VariantKind::Anti => "as",
        }
    }

    pub fn all() -> [VariantKind; 3] {
        [VariantKind::Generic, VariantKind::Stereo, VariantKind::Anti]
    }
}

impl std::fmt::Display for VariantKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.tag())
    }
}

/// One prompt-ready puzzle: grid, minimal clues, and the column pools
/// (with gender tags where applicable) it was sampled from.
#[derive(Debug, Clone)]
pub struct PuzzleVariant {
    pub variant: VariantKind,
    pub grid: SolutionGrid,
    pub clues: Vec<Clue>,
    pub pools: Vec<ColumnPool>,
}

impl PuzzleVariant {
    pub fn shape(&self) -> PuzzleShape {
        PuzzleShape {
            row_names: self.grid.row_names().iter().map(|s| s.to_string()).collect(),
            names_category: self.pools[0].category.clone(),
            columns: self.pools[1..]
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

    /// Gender tag of a label in this variant's pools.
    pub fn gender_of(&self, label: &str) -> Option<Gender> {
        self.pools
            .iter()
            .flat_map(|c| c.items.iter())
            .find(|it| it.label == label)
            .and_then(|it| it.gender)
    }
}

/// The G/S/AS triple sharing one logical skeleton.
#[derive(Debug, Clone)]
pub struct PuzzleTriplet {
    pub id: String,
    pub rows: usize,
    pub cols: usize,
    pub bp_category: String,
    pub seed: u64,
    pub generic: PuzzleVariant,
    pub stereo: PuzzleVariant,
    pub anti: PuzzleVariant,
}

impl PuzzleTriplet {
    pub fn variant(&self, kind: VariantKind) -> &PuzzleVariant {
        match kind {
            VariantKind::Generic => &self.generic,
            VariantKind::Stereo => &self.stereo,
            VariantKind::Anti => &self.anti,
        }
    }

    pub fn variants(&self) -> [&PuzzleVariant; 3] {
        [&self.generic, &self.stereo, &self.anti]
    }
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("subset search exhausted all {0} clues without a unique set")]
    Exhausted(usize),
    #[error("substituted clue set failed verification for variant {variant}: {reason}")]
    Substitution { variant: VariantKind, reason: String },
    #[error("gave up after {attempts} attempts for size {rows}x{cols}: {last}")]
    RetriesExceeded {
        attempts: usize,
        rows: usize,
        cols: usize,
        last: String,
    },
}

/// Anonymized row labels for generic puzzles: "person a", "person b", ...
pub fn anonymous_name(row: usize) -> String {
    let letter = (b'a' + row as u8) as char;
    format!("person {letter}")
}

/// Build the three aligned grids for a sampled spec.
///
/// All variants share the General-column placements cell-for-cell. The
/// stereotypical grid pairs same-gender names and bias-probing items in
/// every row, the anti-stereotypical grid pairs cross-gender, and the
/// generic grid uses anonymized names with a seed-determined random
/// bias-probing arrangement.
pub fn build_grids(
    spec: &ColumnSpec,
    seed: u64,
) -> (SolutionGrid, SolutionGrid, SolutionGrid) {
    let p = spec.rows;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1));

    // Row order: a seeded shuffle of the sampled names.
    let mut row_names: Vec<CatalogItem> = spec.columns[0].items.clone();
    row_names.shuffle(&mut rng);

    // General columns: one seeded bijection per column, shared by all
    // three variants.
    let mut general_cells: Vec<Vec<String>> = Vec::new();
    for col in &spec.columns[2..] {
        let mut items: Vec<String> = col.items.iter().map(|i| i.label.clone()).collect();
        items.shuffle(&mut rng);
        general_cells.push(items);
    }

    // Bias-probing column: gender-aligned for S, reversed for AS,
    // random for G.
    let bp = &spec.columns[1];
    let men: Vec<&CatalogItem> = bp.items.iter().filter(|i| i.gender == Some(Gender::Man)).collect();
    let women: Vec<&CatalogItem> = bp
        .items
        .iter()
        .filter(|i| i.gender == Some(Gender::Woman))
        .collect();
    let mut next_man = 0usize;
    let mut next_woman = 0usize;
    let mut stereo_bp = Vec::with_capacity(p);
    for name in &row_names {
        match name.gender {
            Some(Gender::Man) => {
                stereo_bp.push(men[next_man].label.clone());
                next_man += 1;
            }
            _ => {
                stereo_bp.push(women[next_woman].label.clone());
                next_woman += 1;
            }
        }
    }
    let (mut next_man, mut next_woman) = (0usize, 0usize);
    let mut anti_bp = Vec::with_capacity(p);
    for name in &row_names {
        match name.gender {
            Some(Gender::Man) => {
                anti_bp.push(women[next_woman].label.clone());
                next_woman += 1;
            }
            _ => {
                anti_bp.push(men[next_man].label.clone());
                next_man += 1;
            }
        }
    }
    let mut generic_bp: Vec<String> = bp.items.iter().map(|i| i.label.clone()).collect();
    generic_bp.shuffle(&mut rng);

    let columns: Vec<ColumnMeta> = spec
        .columns
        .iter()
        .map(|c| ColumnMeta {
            name: c.category.clone(),
            group: c.group,
        })
        .collect();

    let assemble = |names: Vec<String>, bp_col: &[String]| -> SolutionGrid {
        let cells = (0..p)
            .map(|r| {
                let mut row = Vec::with_capacity(spec.cols());
                row.push(names[r].clone());
                row.push(bp_col[r].clone());
                for col in &general_cells {
                    row.push(col[r].clone());
                }
                row
            })
            .collect();
        SolutionGrid {
            columns: columns.clone(),
            cells,
        }
    };

    let real_names: Vec<String> = row_names.iter().map(|i| i.label.clone()).collect();
    let anon_names: Vec<String> = (0..p).map(anonymous_name).collect();
    let generic = assemble(anon_names, &generic_bp);
    let stereo = assemble(real_names.clone(), &stereo_bp);
    let anti = assemble(real_names, &anti_bp);
    (generic, stereo, anti)
}

/// Enumerate every clue of the five kinds that holds on the grid,
/// deduplicated up to commutative operand order. Multi-elimination (and
/// any other kind needing three distinct persons) is naturally absent
/// below p = 3.
pub fn enumerate_clues(grid: &SolutionGrid) -> ClueSet {
    let p = grid.rows();
    let q = grid.cols();
    let truth = grid.assignment();
    let mut clues = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |clue: Clue| {
        if seen.insert(clue.canonical_key()) {
            debug_assert!(
                crate::puzzle::eval_clue(&clue, &truth).unwrap_or(false),
                "enumerated clue must hold on its source grid: {}",
                clue.logic_text()
            );
            clues.push(clue);
        }
    };

    // True/False: one clue per cross-column atom pair; linked when the
    // atoms share a row, negated otherwise.
    for ca in 0..q {
        for cb in (ca + 1)..q {
            for ra in 0..p {
                for rb in 0..p {
                    let a = grid.atom(ra, ca);
                    let b = grid.atom(rb, cb);
                    push(Clue::true_false(a, b, ra == rb));
                }
            }
        }
    }

    // Neither/Nor: same-category pair both unlinked to a third atom.
    if p >= 3 {
        for ca in 0..q {
            for ra in 0..p {
                for rb in (ra + 1)..p {
                    for cc in 0..q {
                        if cc == ca {
                            continue;
                        }
                        for rc in 0..p {
                            if rc == ra || rc == rb {
                                continue;
                            }
                            push(Clue::neither_nor(
                                grid.atom(ra, ca),
                                grid.atom(rb, ca),
                                grid.atom(rc, cc),
                            ));
                        }
                    }
                }
            }
        }
    }

    // Either/Or: exactly one of a same-category pair links to the
    // anchor; true when the anchor's person holds one of the pair.
    for ca in 0..q {
        for ra in 0..p {
            for rb in (ra + 1)..p {
                for cc in 0..q {
                    if cc == ca {
                        continue;
                    }
                    for rc in [ra, rb] {
                        push(Clue::either_or(
                            grid.atom(ra, ca),
                            grid.atom(rb, ca),
                            grid.atom(rc, cc),
                        ));
                    }
                }
            }
        }
    }

    // Unaligned pair: attributes x (row r1) and y (row r2) distributed
    // over anchors d1 (row r1) and d2 (row r2), columns free as long as
    // each side's atoms are distinct.
    for r1 in 0..p {
        for r2 in (r1 + 1)..p {
            for cx in 0..q {
                for cy in 0..q {
                    for cd1 in 0..q {
                        if cd1 == cx {
                            continue;
                        }
                        for cd2 in 0..q {
                            if cd2 == cy {
                                continue;
                            }
                            push(Clue::unaligned_pair(
                                grid.atom(r1, cx),
                                grid.atom(r2, cy),
                                grid.atom(r1, cd1),
                                grid.atom(r2, cd2),
                            ));
                        }
                    }
                }
            }
        }
    }

    // Multi-elimination: three atoms from three distinct columns held
    // by three distinct persons.
    if p >= 3 {
        for ca in 0..q {
            for cb in (ca + 1)..q {
                for cc in (cb + 1)..q {
                    for ra in 0..p {
                        for rb in 0..p {
                            if rb == ra {
                                continue;
                            }
                            for rc in 0..p {
                                if rc == ra || rc == rb {
                                    continue;
                                }
                                push(Clue::multi_elimination(
                                    grid.atom(ra, ca),
                                    grid.atom(rb, cb),
                                    grid.atom(rc, cc),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }

    ClueSet {
        clues,
        stage: ClueStage::All,
    }
}

/// Sizes attempted by the subset search, for instrumentation.
#[derive(Debug, Clone, Default)]
pub struct SubsetTrace {
    pub attempted_sizes: Vec<usize>,
}

/// Initial sample size for the solvable-subset search.
pub const SUBSET_START: usize = 10;

/// Sample clue subsets of growing size until one pins exactly the
/// target grid. Starts at n = 10 (or the full set when smaller) and
/// draws a fresh uniform sample without replacement after each failure.
pub fn find_solvable_subset(
    all: &ClueSet,
    target: &SolutionGrid,
    shape: &PuzzleShape,
    seed: u64,
) -> Result<(ClueSet, SubsetTrace), GenerateError> {
    assert_eq!(all.stage, ClueStage::All, "subset search takes the full enumeration");
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 2));
    let total = all.clues.len();
    let mut trace = SubsetTrace::default();
    let mut n = SUBSET_START.min(total);
    loop {
        trace.attempted_sizes.push(n);
        let mut indices: Vec<usize> = (0..total).collect();
        indices.shuffle(&mut rng);
        indices.truncate(n);
        indices.sort_unstable();
        let sample: Vec<Clue> = indices.iter().map(|&i| all.clues[i].clone()).collect();
        if solver::is_unique_for(shape, &sample, target)? {
            return Ok((
                ClueSet {
                    clues: sample,
                    stage: ClueStage::Solvable,
                },
                trace,
            ));
        }
        if n >= total {
            return Err(GenerateError::Exhausted(total));
        }
        n += 1;
    }
}

/// Iteratively drop clues (fixed pass order, repeated to fixpoint)
/// while the set still pins exactly the target grid.
pub fn prune_to_minimal(
    solvable: &ClueSet,
    target: &SolutionGrid,
    shape: &PuzzleShape,
) -> Result<ClueSet, GenerateError> {
    assert_eq!(solvable.stage, ClueStage::Solvable, "pruning takes a solvable set");
    let mut clues = solvable.clues.clone();
    loop {
        let mut removed_any = false;
        let mut i = 0;
        while i < clues.len() {
            let mut candidate = clues.clone();
            candidate.remove(i);
            if solver::is_unique_for(shape, &candidate, target)? {
                clues = candidate;
                removed_any = true;
            } else {
                i += 1;
            }
        }
        if !removed_any {
            break;
        }
    }
    Ok(ClueSet {
        clues,
        stage: ClueStage::Minimal,
    })
}

/// Rewrite a minimal clue set through the row-preserving label map
/// between two grids of identical layout, then re-verify uniqueness
/// and minimality against the destination grid.
pub fn substitute_clues(
    minimal: &ClueSet,
    from_grid: &SolutionGrid,
    to_grid: &SolutionGrid,
    to_shape: &PuzzleShape,
    variant: VariantKind,
) -> Result<ClueSet, GenerateError> {
    assert_eq!(minimal.stage, ClueStage::Minimal, "substitution takes a minimal set");
    let map = |atom: &Atom| -> Atom {
        let col = from_grid
            .column_index(&atom.category)
            .expect("atom category exists in source grid");
        let row = from_grid
            .row_of(&atom.category, &atom.item)
            .expect("atom item exists in source grid");
        Atom::new(to_grid.columns[col].name.clone(), to_grid.cell(row, col).to_string())
    };
    let clues: Vec<Clue> = minimal.clues.iter().map(|c| c.map_atoms(&map)).collect();

    if !solver::is_unique_for(to_shape, &clues, to_grid)? {
        return Err(GenerateError::Substitution {
            variant,
            reason: "substituted set does not uniquely solve to the target grid".into(),
        });
    }
    for i in 0..clues.len() {
        let mut without = clues.clone();
        without.remove(i);
        if solver::is_unique_for(to_shape, &without, to_grid)? {
            return Err(GenerateError::Substitution {
                variant,
                reason: format!("substituted set is not minimal (clue {i} is redundant)"),
            });
        }
    }
    Ok(ClueSet {
        clues,
        stage: ClueStage::Minimal,
    })
}

fn shape_for(spec: &ColumnSpec, grid: &SolutionGrid) -> PuzzleShape {
    PuzzleShape {
        row_names: grid.row_names().iter().map(|s| s.to_string()).collect(),
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

fn pools_for_variant(spec: &ColumnSpec, kind: VariantKind, rows: usize) -> Vec<ColumnPool> {
    let mut pools = spec.columns.clone();
    if kind == VariantKind::Generic {
        pools[0] = ColumnPool {
            category: pools[0].category.clone(),
            group: Group::Names,
            items: (0..rows)
                .map(|r| CatalogItem {
                    label: anonymous_name(r),
                    gender: None,
                })
                .collect(),
        };
    }
    pools
}

const TRIPLET_RETRY_CAP: usize = 8;

/// Generate one verified triplet. Deterministic per seed; retries with
/// derived sub-seeds (up to a small cap) when a sampled instance is
/// infeasible or the subset search exhausts.
pub fn build_triplet(
    catalog: &Catalog,
    rows: usize,
    cols: usize,
    seed: u64,
) -> Result<PuzzleTriplet, GenerateError> {
    build_triplet_with(catalog, rows, cols, seed, None, &render::Phrasing::bundled())
}

pub fn build_triplet_with(
    catalog: &Catalog,
    rows: usize,
    cols: usize,
    seed: u64,
    bp_category: Option<&str>,
    phrasing: &render::Phrasing,
) -> Result<PuzzleTriplet, GenerateError> {
    let mut last_err: Option<GenerateError> = None;
    for attempt in 0..TRIPLET_RETRY_CAP {
        let attempt_seed = if attempt == 0 {
            seed
        } else {
            derive_seed(seed, 1000 + attempt as u64)
        };
        match try_build_triplet(catalog, rows, cols, attempt_seed, seed, bp_category, phrasing) {
            Ok(triplet) => return Ok(triplet),
            Err(e @ GenerateError::Exhausted(_)) => last_err = Some(e),
            Err(GenerateError::Sample(se)) => match se {
                // Shape preconditions cannot be fixed by resampling.
                SampleError::OddRows(_)
                | SampleError::TooFewColumns(_)
                | SampleError::NotEnoughGeneralCategories { .. } => {
                    return Err(GenerateError::Sample(se))
                }
                infeasible => last_err = Some(GenerateError::Sample(infeasible)),
            },
            Err(other) => return Err(other),
        }
    }
    Err(GenerateError::RetriesExceeded {
        attempts: TRIPLET_RETRY_CAP,
        rows,
        cols,
        last: last_err
            .map(|e| e.to_string())
            .unwrap_or_else(|| "unknown".into()),
    })
}

fn try_build_triplet(
    catalog: &Catalog,
    rows: usize,
    cols: usize,
    attempt_seed: u64,
    record_seed: u64,
    bp_category: Option<&str>,
    phrasing: &render::Phrasing,
) -> Result<PuzzleTriplet, GenerateError> {
    let spec = catalog.sample_column_spec_with(rows, cols, attempt_seed, bp_category)?;
    let (generic_grid, stereo_grid, anti_grid) = build_grids(&spec, attempt_seed);

    let generic_shape = shape_for(&spec, &generic_grid);
    let all = enumerate_clues(&generic_grid);
    let (solvable, _trace) = find_solvable_subset(&all, &generic_grid, &generic_shape, attempt_seed)?;
    let minimal = prune_to_minimal(&solvable, &generic_grid, &generic_shape)?;

    let stereo_shape = shape_for(&spec, &stereo_grid);
    let anti_shape = shape_for(&spec, &anti_grid);
    let stereo_clues = substitute_clues(
        &minimal,
        &generic_grid,
        &stereo_grid,
        &stereo_shape,
        VariantKind::Stereo,
    )?;
    let anti_clues = substitute_clues(
        &minimal,
        &generic_grid,
        &anti_grid,
        &anti_shape,
        VariantKind::Anti,
    )?;

    let make_variant = |kind: VariantKind, grid: SolutionGrid, set: ClueSet| -> PuzzleVariant {
        let mut clues = set.clues;
        for clue in &mut clues {
            clue.english = Some(phrasing.render_clue(clue, &grid));
        }
        PuzzleVariant {
            variant: kind,
            pools: pools_for_variant(&spec, kind, rows),
            grid,
            clues,
        }
    };

    Ok(PuzzleTriplet {
        id: format!("{rows}x{cols}-{record_seed:016x}"),
        rows,
        cols,
        bp_category: spec.bp_category().to_string(),
        seed: record_seed,
        generic: make_variant(VariantKind::Generic, generic_grid, minimal),
        stereo: make_variant(VariantKind::Stereo, stereo_grid, stereo_clues),
        anti: make_variant(VariantKind::Anti, anti_grid, anti_clues),
    })
}

/// Generate `per_size` triplets for each listed size, round-robin over
/// the Bias-Probing categories so each gets an equal share (24 each
/// when 504 triplets are spread over 21 categories). Builds run in
/// parallel; output order is by (size, index).
pub fn generate_batch(
    catalog: &Catalog,
    sizes: &[(usize, usize)],
    per_size: usize,
    seed: u64,
) -> Result<Vec<PuzzleTriplet>, GenerateError> {
    let phrasing = render::Phrasing::bundled();
    let bp_names: Vec<String> = catalog
        .bias_probing_categories()
        .iter()
        .map(|c| c.name.clone())
        .collect();

    let mut jobs = Vec::new();
    for (size_idx, &(p, q)) in sizes.iter().enumerate() {
        for idx in 0..per_size {
            let bp = bp_names[idx % bp_names.len()].clone();
            let job_seed = derive_seed(seed, ((size_idx as u64) << 32) | idx as u64);
            jobs.push((p, q, idx, bp, job_seed));
        }
    }

    let mut triplets: Vec<PuzzleTriplet> = jobs
        .par_iter()
        .map(|(p, q, idx, bp, job_seed)| {
            build_triplet_with(catalog, *p, *q, *job_seed, Some(bp), &phrasing).map(|mut t| {
                t.id = format!("{p}x{q}-{idx:04}");
                t
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    // par_iter preserves input order, but make the contract explicit.
    triplets.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(triplets)
}

// ---------------------------------------------------------------------------
// Puzzle set file format
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct ClueDoc {
    kind: ClueKind,
    logic: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    english: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct VariantDoc {
    columns: Vec<ColumnPool>,
    grid: Vec<Vec<String>>,
    clues: Vec<ClueDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TripletDoc {
    id: String,
    rows: usize,
    cols: usize,
    bp_category: String,
    seed: u64,
    #[serde(rename = "generic")]
    g: VariantDoc,
    #[serde(rename = "stereotypical")]
    s: VariantDoc,
    #[serde(rename = "anti_stereotypical")]
    a: VariantDoc,
}

#[derive(Debug, Error)]
pub enum PuzzleFileError {
    #[error("failed to read puzzle file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed puzzle file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("triplet {id}: {source}")]
    Grid {
        id: String,
        source: crate::puzzle::GridError,
    },
    #[error("triplet {id} clue {index}: {message}")]
    Clue {
        id: String,
        index: usize,
        message: String,
    },
}

fn variant_doc(v: &PuzzleVariant) -> VariantDoc {
    VariantDoc {
        columns: v.pools.clone(),
        grid: v.grid.cells.clone(),
        clues: v
            .clues
            .iter()
            .map(|c| ClueDoc {
                kind: c.kind,
                logic: c.logic_text(),
                english: c.english.clone(),
            })
            .collect(),
    }
}

fn variant_from_doc(
    doc: VariantDoc,
    kind: VariantKind,
    id: &str,
) -> Result<PuzzleVariant, PuzzleFileError> {
    let columns: Vec<ColumnMeta> = doc
        .columns
        .iter()
        .map(|c| ColumnMeta {
            name: c.category.clone(),
            group: c.group,
        })
        .collect();
    let grid = SolutionGrid::new(columns, doc.grid).map_err(|source| PuzzleFileError::Grid {
        id: id.to_string(),
        source,
    })?;
    let mut clues = Vec::with_capacity(doc.clues.len());
    for (index, cd) in doc.clues.into_iter().enumerate() {
        let expr = parse_logic(&cd.logic).map_err(|e| PuzzleFileError::Clue {
            id: id.to_string(),
            index,
            message: e.to_string(),
        })?;
        let clue = Clue {
            kind: cd.kind,
            expr,
            english: cd.english,
        };
        clue.check_template().map_err(|e| PuzzleFileError::Clue {
            id: id.to_string(),
            index,
            message: e.to_string(),
        })?;
        clues.push(clue);
    }
    Ok(PuzzleVariant {
        variant: kind,
        grid,
        clues,
        pools: doc.columns,
    })
}

/// Serialize triplets to the puzzle set JSON document.
pub fn puzzles_to_json(triplets: &[PuzzleTriplet]) -> String {
    let docs: Vec<TripletDoc> = triplets
        .iter()
        .map(|t| TripletDoc {
            id: t.id.clone(),
            rows: t.rows,
            cols: t.cols,
            bp_category: t.bp_category.clone(),
            seed: t.seed,
            g: variant_doc(&t.generic),
            s: variant_doc(&t.stereo),
            a: variant_doc(&t.anti),
        })
        .collect();
    serde_json::to_string_pretty(&docs).expect("puzzle docs serialize")
}

pub fn save_puzzles(path: &Path, triplets: &[PuzzleTriplet]) -> Result<(), PuzzleFileError> {
    std::fs::write(path, puzzles_to_json(triplets))?;
    Ok(())
}

pub fn puzzles_from_json(text: &str) -> Result<Vec<PuzzleTriplet>, PuzzleFileError> {
    let docs: Vec<TripletDoc> = serde_json::from_str(text)?;
    docs.into_iter()
        .map(|doc| {
            Ok(PuzzleTriplet {
                generic: variant_from_doc(doc.g, VariantKind::Generic, &doc.id)?,
                stereo: variant_from_doc(doc.s, VariantKind::Stereo, &doc.id)?,
                anti: variant_from_doc(doc.a, VariantKind::Anti, &doc.id)?,
                id: doc.id,
                rows: doc.rows,
                cols: doc.cols,
                bp_category: doc.bp_category,
                seed: doc.seed,
            })
        })
        .collect()
}

pub fn load_puzzles(path: &Path) -> Result<Vec<PuzzleTriplet>, PuzzleFileError> {
    let text = std::fs::read_to_string(path)?;
    puzzles_from_json(&text)
}
