//! Category catalog: the three groups of categories (Names, Bias-Probing,
//! General) that anchor puzzle construction, plus deterministic sampling
//! of puzzle column specifications.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Binary gender tag carried by name and bias-probing items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gender {
    Man,
    Woman,
}

impl Gender {
    pub fn flipped(self) -> Gender {
        match self {
            Gender::Man => Gender::Woman,
            Gender::Woman => Gender::Man,
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gender::Man => write!(f, "man"),
            Gender::Woman => write!(f, "woman"),
        }
    }
}

/// Which of the three category groups a category belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    Names,
    BiasProbing,
    General,
}

/// A single catalog entry: a lowercased surface form plus an optional
/// gender tag (present exactly when the owning group is Names or
/// BiasProbing).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogItem {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gender: Option<Gender>,
}

/// A named category with its item pool.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Category {
    pub name: String,
    pub group: Group,
    pub items: Vec<CatalogItem>,
}

impl Category {
    /// Items carrying the given gender tag, in catalog order.
    pub fn gender_subset(&self, gender: Gender) -> Vec<&CatalogItem> {
        self.items
            .iter()
            .filter(|it| it.gender == Some(gender))
            .collect()
    }
}

/// The full catalog: exactly one Names category, at least one
/// Bias-Probing category, and at least one General category.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Catalog {
    #[serde(default)]
    pub provenance: String,
    pub categories: Vec<Category>,
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("failed to read catalog file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed catalog document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("category {category:?} has duplicate item label {label:?}")]
    DuplicateLabel { category: String, label: String },
    #[error("item label {label:?} appears in categories {first:?} and {second:?}")]
    CrossCategoryOverlap {
        label: String,
        first: String,
        second: String,
    },
    #[error("category {category:?} ({group:?}) has an empty {gender} subset")]
    EmptyGenderSubset {
        category: String,
        group: Group,
        gender: Gender,
    },
    #[error("item {label:?} in category {category:?} must {expected} carry a gender tag")]
    GenderTagMismatch {
        category: String,
        label: String,
        expected: &'static str,
    },
    #[error("catalog must have exactly one Names category, found {0}")]
    NamesCount(usize),
    #[error("catalog must have at least one {0:?} category")]
    MissingGroup(Group),
    #[error("empty label in category {category:?}")]
    EmptyLabel { category: String },
    #[error("label {label:?} in category {category:?} contains a reserved token ({token:?})")]
    ReservedToken {
        category: String,
        label: String,
        token: &'static str,
    },
    #[error("duplicate category name {0:?}")]
    DuplicateCategory(String),
}

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("row count must be even and >= 2, got {0}")]
    OddRows(usize),
    #[error("column count must be >= 3, got {0}")]
    TooFewColumns(usize),
    #[error("catalog has {have} General categories, need {need}")]
    NotEnoughGeneralCategories { have: usize, need: usize },
    #[error("category {category:?} has {have} usable items, need {need}")]
    Infeasible {
        category: String,
        have: usize,
        need: usize,
    },
}

/// Tokens that would make labels ambiguous in the layman logic notation.
const RESERVED_TOKENS: [&str; 7] = ["(", ")", " = ", "\u{ac}", "\u{2227}", "\u{2228}", "\u{21d4}"];

impl Catalog {
    /// Parse and validate a catalog from JSON text. All labels are
    /// normalized to lowercase before validation.
    pub fn from_json(text: &str) -> Result<Catalog, CatalogError> {
        let mut catalog: Catalog = serde_json::from_str(text)?;
        for cat in &mut catalog.categories {
            for item in &mut cat.items {
                item.label = item.label.trim().to_lowercase();
            }
        }
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn load(path: &Path) -> Result<Catalog, CatalogError> {
        let text = std::fs::read_to_string(path)?;
        Catalog::from_json(&text)
    }

    /// The seed catalog bundled with the crate.
    pub fn seed() -> Catalog {
        Catalog::from_json(include_str!("../resources/seed_catalog.json"))
            .expect("bundled seed catalog is valid")
    }

    fn validate(&self) -> Result<(), CatalogError> {
        let names_count = self
            .categories
            .iter()
            .filter(|c| c.group == Group::Names)
            .count();
        if names_count != 1 {
            return Err(CatalogError::NamesCount(names_count));
        }
        for group in [Group::BiasProbing, Group::General] {
            if !self.categories.iter().any(|c| c.group == group) {
                return Err(CatalogError::MissingGroup(group));
            }
        }

        let mut category_names = HashSet::new();
        let mut owner_of: BTreeMap<String, String> = BTreeMap::new();
        for cat in &self.categories {
            if !category_names.insert(cat.name.to_lowercase()) {
                return Err(CatalogError::DuplicateCategory(cat.name.clone()));
            }
            let gendered = matches!(cat.group, Group::Names | Group::BiasProbing);
            let mut seen = HashSet::new();
            for item in &cat.items {
                if item.label.is_empty() {
                    return Err(CatalogError::EmptyLabel {
                        category: cat.name.clone(),
                    });
                }
                for token in RESERVED_TOKENS {
                    if item.label.contains(token) {
                        return Err(CatalogError::ReservedToken {
                            category: cat.name.clone(),
                            label: item.label.clone(),
                            token,
                        });
                    }
                }
                if !seen.insert(item.label.clone()) {
                    return Err(CatalogError::DuplicateLabel {
                        category: cat.name.clone(),
                        label: item.label.clone(),
                    });
                }
                if let Some(owner) = owner_of.get(&item.label) {
                    return Err(CatalogError::CrossCategoryOverlap {
                        label: item.label.clone(),
                        first: owner.clone(),
                        second: cat.name.clone(),
                    });
                }
                owner_of.insert(item.label.clone(), cat.name.clone());
                match (gendered, item.gender) {
                    (true, None) => {
                        return Err(CatalogError::GenderTagMismatch {
                            category: cat.name.clone(),
                            label: item.label.clone(),
                            expected: "always",
                        })
                    }
                    (false, Some(_)) => {
                        return Err(CatalogError::GenderTagMismatch {
                            category: cat.name.clone(),
                            label: item.label.clone(),
                            expected: "never",
                        })
                    }
                    _ => {}
                }
            }
            if gendered {
                for gender in [Gender::Man, Gender::Woman] {
                    if cat.gender_subset(gender).is_empty() {
                        return Err(CatalogError::EmptyGenderSubset {
                            category: cat.name.clone(),
                            group: cat.group,
                            gender,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn names_category(&self) -> &Category {
        self.categories
            .iter()
            .find(|c| c.group == Group::Names)
            .expect("validated catalog has a Names category")
    }

    pub fn bias_probing_categories(&self) -> Vec<&Category> {
        self.categories
            .iter()
            .filter(|c| c.group == Group::BiasProbing)
            .collect()
    }

    pub fn general_categories(&self) -> Vec<&Category> {
        self.categories
            .iter()
            .filter(|c| c.group == Group::General)
            .collect()
    }

    pub fn category(&self, name: &str) -> Option<&Category> {
        self.categories
            .iter()
            .find(|c| c.name.eq_ignore_ascii_case(name))
    }

    /// Sample the column layout and item pools for one puzzle.
    ///
    /// Column 1 is the Names category, column 2 one Bias-Probing
    /// category, columns 3..q distinct General categories. Gendered
    /// pools take p/2 items per gender; General pools take p items.
    /// Deterministic given the seed.
    pub fn sample_column_spec(
        &self,
        rows: usize,
        cols: usize,
        seed: u64,
    ) -> Result<ColumnSpec, SampleError> {
        self.sample_column_spec_with(rows, cols, seed, None)
    }

    /// Like [`Catalog::sample_column_spec`] but with the Bias-Probing
    /// category pinned, used for category-balanced batch generation.
    pub fn sample_column_spec_with(
        &self,
        rows: usize,
        cols: usize,
        seed: u64,
        bp_category: Option<&str>,
    ) -> Result<ColumnSpec, SampleError> {
        if rows < 2 || rows % 2 != 0 {
            return Err(SampleError::OddRows(rows));
        }
        if cols < 3 {
            return Err(SampleError::TooFewColumns(cols));
        }
        let generals = self.general_categories();
        if generals.len() < cols - 2 {
            return Err(SampleError::NotEnoughGeneralCategories {
                have: generals.len(),
                need: cols - 2,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        let names = self.names_category();
        let name_pool = sample_gendered(names, rows / 2, &mut rng)?;

        let bps = self.bias_probing_categories();
        let bp = match bp_category {
            Some(name) => *bps
                .iter()
                .find(|c| c.name.eq_ignore_ascii_case(name))
                .ok_or(SampleError::Infeasible {
                    category: name.to_string(),
                    have: 0,
                    need: rows,
                })?,
            None => *bps.choose(&mut rng).expect("validated catalog has BP categories"),
        };
        let bp_pool = sample_gendered(bp, rows / 2, &mut rng)?;

        let mut general_columns = Vec::with_capacity(cols - 2);
        let chosen: Vec<&&Category> = generals.choose_multiple(&mut rng, cols - 2).collect();
        for cat in chosen {
            if cat.items.len() < rows {
                return Err(SampleError::Infeasible {
                    category: cat.name.clone(),
                    have: cat.items.len(),
                    need: rows,
                });
            }
            let picked: Vec<CatalogItem> = cat
                .items
                .choose_multiple(&mut rng, rows)
                .cloned()
                .collect();
            general_columns.push(ColumnPool {
                category: cat.name.clone(),
                group: Group::General,
                items: picked,
            });
        }

        let mut columns = vec![
            ColumnPool {
                category: names.name.clone(),
                group: Group::Names,
                items: name_pool,
            },
            ColumnPool {
                category: bp.name.clone(),
                group: Group::BiasProbing,
                items: bp_pool,
            },
        ];
        columns.extend(general_columns);
        Ok(ColumnSpec { rows, columns })
    }
}

/// Sample `per_gender` items from each gender subset of a gendered
/// category; the pool lists the men first, then the women.
fn sample_gendered(
    cat: &Category,
    per_gender: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<CatalogItem>, SampleError> {
    let mut pool = Vec::with_capacity(per_gender * 2);
    for gender in [Gender::Man, Gender::Woman] {
        let subset = cat.gender_subset(gender);
        if subset.len() < per_gender {
            return Err(SampleError::Infeasible {
                category: cat.name.clone(),
                have: subset.len(),
                need: per_gender,
            });
        }
        pool.extend(
            subset
                .choose_multiple(rng, per_gender)
                .map(|it| (*it).clone()),
        );
    }
    Ok(pool)
}

/// One puzzle's sampled column layout: category per column plus the
/// item pool drawn for it. Pool order is the sampling order and is the
/// canonical item order everywhere downstream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub rows: usize,
    pub columns: Vec<ColumnPool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnPool {
    pub category: String,
    pub group: Group,
    pub items: Vec<CatalogItem>,
}

impl ColumnSpec {
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn bp_category(&self) -> &str {
        &self.columns[1].category
    }

    /// Gender tag of a label, looked up across all pools.
    pub fn gender_of(&self, label: &str) -> Option<Gender> {
        self.columns
            .iter()
            .flat_map(|c| c.items.iter())
            .find(|it| it.label == label)
            .and_then(|it| it.gender)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_catalog_json() -> String {
        r#"{
            "provenance": "test",
            "categories": [
                {"name": "Name", "group": "names", "items": [
                    {"label": "Ben", "gender": "man"},
                    {"label": "alice", "gender": "woman"},
                    {"label": "carl", "gender": "man"},
                    {"label": "dana", "gender": "woman"}
                ]},
                {"name": "Food", "group": "bias_probing", "items": [
                    {"label": "steak", "gender": "man"},
                    {"label": "bbq", "gender": "man"},
                    {"label": "salad", "gender": "woman"},
                    {"label": "soup", "gender": "woman"}
                ]},
                {"name": "Train", "group": "general", "items": [
                    {"label": "steam locomotive"},
                    {"label": "diesel locomotive"},
                    {"label": "bullet train"},
                    {"label": "monorail"}
                ]},
                {"name": "Bird", "group": "general", "items": [
                    {"label": "sparrow"},
                    {"label": "heron"},
                    {"label": "puffin"},
                    {"label": "kestrel"}
                ]}
            ]
        }"#
        .to_string()
    }

    #[test]
    fn loads_and_lowercases() {
        let cat = Catalog::from_json(&toy_catalog_json()).unwrap();
        assert_eq!(cat.names_category().items[0].label, "ben");
    }

    #[test]
    fn rejects_empty_gender_subset() {
        let text = toy_catalog_json().replace(r#""salad", "gender": "woman""#, r#""salad", "gender": "man""#)
            .replace(r#""soup", "gender": "woman""#, r#""soup", "gender": "man""#);
        let err = Catalog::from_json(&text).unwrap_err();
        match err {
            CatalogError::EmptyGenderSubset { category, gender, .. } => {
                assert_eq!(category, "Food");
                assert_eq!(gender, Gender::Woman);
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn rejects_cross_category_overlap() {
        let text = toy_catalog_json().replace(r#"{"label": "sparrow"}"#, r#"{"label": "steam locomotive"}"#);
        let err = Catalog::from_json(&text).unwrap_err();
        match err {
            CatalogError::CrossCategoryOverlap { label, first, second } => {
                assert_eq!(label, "steam locomotive");
                assert_eq!(first, "Train");
                assert_eq!(second, "Bird");
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn rejects_duplicate_within_category() {
        let text = toy_catalog_json().replace(r#"{"label": "heron"}"#, r#"{"label": "sparrow"}"#);
        assert!(matches!(
            Catalog::from_json(&text).unwrap_err(),
            CatalogError::DuplicateLabel { .. }
        ));
    }

    #[test]
    fn sample_smallest_shape() {
        let cat = Catalog::from_json(&toy_catalog_json()).unwrap();
        let spec = cat.sample_column_spec(2, 3, 7).unwrap();
        assert_eq!(spec.rows, 2);
        assert_eq!(spec.cols(), 3);
        assert_eq!(spec.columns[0].group, Group::Names);
        assert_eq!(spec.columns[1].group, Group::BiasProbing);
        assert_eq!(spec.columns[2].group, Group::General);
        for col in &spec.columns[..2] {
            let men = col.items.iter().filter(|i| i.gender == Some(Gender::Man)).count();
            let women = col.items.iter().filter(|i| i.gender == Some(Gender::Woman)).count();
            assert_eq!((men, women), (1, 1));
        }
        assert_eq!(spec.columns[2].items.len(), 2);
    }

    #[test]
    fn sample_rejects_odd_rows() {
        let cat = Catalog::from_json(&toy_catalog_json()).unwrap();
        assert!(matches!(
            cat.sample_column_spec(3, 3, 1).unwrap_err(),
            SampleError::OddRows(3)
        ));
    }

    #[test]
    fn sample_is_deterministic_and_seed_sensitive() {
        let cat = Catalog::from_json(&toy_catalog_json()).unwrap();
        let a = cat.sample_column_spec(4, 4, 99).unwrap();
        let b = cat.sample_column_spec(4, 4, 99).unwrap();
        assert_eq!(a, b);

        let mut distinct = std::collections::HashSet::new();
        for seed in 0..1000u64 {
            let spec = cat.sample_column_spec(2, 3, seed).unwrap();
            distinct.insert(format!("{spec:?}"));
        }
        assert!(distinct.len() > 1, "seeds must influence sampling");
    }
}
