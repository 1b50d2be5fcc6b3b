//! Pipeline configuration: JSON file keys, built-in defaults, and the
//! resolved-config digest stamped into every report.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{Criterion, MaxFeatures};
use crate::tabular::ConsistencyRule;

/// Everything a run needs. Every key has a default, can be set in the JSON
/// config file, and can be overridden by the CLI flag of the same name
/// (flag beats file beats default).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub geocode: PathBuf,
    /// Rule file path; `None` uses the built-in default rule set.
    pub rules: Option<PathBuf>,
    pub missing_tokens: Vec<String>,
    pub max_missing_fraction: f64,
    /// Column rename map applied right after loading; `None` uses the
    /// built-in map for the bundled dataset's headers.
    pub rename: Option<BTreeMap<String, String>>,
    pub target: String,
    pub split_ratio: f64,
    pub seed: u64,
    pub k_min: usize,
    pub k_max: usize,
    pub histogram_bins: usize,
    /// Significance level for the reported significant-feature list.
    pub alpha: f64,
    /// `values:groups` column pairs for ANOVA runs during the explore stage.
    pub anova: Vec<String>,
    pub timing_repeats: usize,
    pub tree_grid: TreeGrid,
    pub forest_grid: ForestGrid,
    pub out_dir: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input: PathBuf::from("data/life_expectancy.csv"),
            geocode: PathBuf::from("data/country_geocode.csv"),
            rules: None,
            missing_tokens: vec![String::new(), "NA".to_string()],
            max_missing_fraction: 0.05,
            rename: None,
            target: "life_expectancy".to_string(),
            split_ratio: 0.7,
            seed: 42,
            k_min: 1,
            k_max: 50,
            histogram_bins: 20,
            alpha: 0.05,
            anova: vec!["life_expectancy:status_developing".to_string()],
            timing_repeats: 3,
            tree_grid: TreeGrid::default(),
            forest_grid: ForestGrid::default(),
            out_dir: PathBuf::from("out"),
        }
    }
}

impl PipelineConfig {
    /// Loads a JSON config file; absent keys fall back to defaults.
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.max_missing_fraction) {
            return Err(Error::Config("max_missing_fraction must lie in [0,1]".into()));
        }
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return Err(Error::Config("split_ratio must lie in (0,1)".into()));
        }
        if self.k_min == 0 || self.k_min > self.k_max {
            return Err(Error::Config("cluster k range must satisfy 1 <= k_min <= k_max".into()));
        }
        if self.histogram_bins == 0 {
            return Err(Error::Config("histogram_bins must be >= 1".into()));
        }
        if self.timing_repeats == 0 {
            return Err(Error::Config("timing_repeats must be >= 1".into()));
        }
        for pair in &self.anova {
            if pair.split(':').count() != 2 {
                return Err(Error::Config(format!(
                    "anova entry must be values:groups, got {pair}"
                )));
            }
        }
        Ok(())
    }

    /// FNV-1a hash of the canonical serialized config, as stamped into
    /// report metadata.
    pub fn digest(&self) -> Result<String> {
        let text = crate::report::to_json_17(self)?;
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.as_bytes() {
            hash ^= u64::from(*b);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        Ok(format!("{hash:016x}"))
    }

    /// The rename map in effect: explicit config value or the built-in map.
    pub fn rename_map(&self) -> BTreeMap<String, String> {
        self.rename.clone().unwrap_or_else(who_rename_map)
    }
}

/// Tree hyperparameter grid; candidates enumerate in declaration order
/// (max_depth outermost, criterion innermost).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TreeGrid {
    pub max_depth: Vec<Option<usize>>,
    pub min_samples_leaf: Vec<usize>,
    pub ccp_alpha: Vec<f64>,
    pub criterion: Vec<Criterion>,
}

impl Default for TreeGrid {
    fn default() -> Self {
        TreeGrid {
            max_depth: vec![Some(5), Some(10), Some(15), Some(20), None],
            min_samples_leaf: vec![1, 2, 5, 10],
            ccp_alpha: vec![0.0, 0.005, 0.01, 0.05],
            criterion: vec![Criterion::SquaredError, Criterion::AbsoluteError],
        }
    }
}

impl TreeGrid {
    pub fn candidates(&self) -> Vec<crate::models::TreeParams> {
        let mut out = Vec::new();
        for &max_depth in &self.max_depth {
            for &min_samples_leaf in &self.min_samples_leaf {
                for &ccp_alpha in &self.ccp_alpha {
                    for &criterion in &self.criterion {
                        out.push(crate::models::TreeParams {
                            max_depth,
                            min_samples_leaf,
                            min_samples_split: 2,
                            ccp_alpha,
                            criterion,
                        });
                    }
                }
            }
        }
        out
    }
}

/// Forest hyperparameter grid. Tree-shape parameters come from the tree
/// grid's winner; this grid tunes the ensemble knobs plus
/// min_samples_split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestGrid {
    pub n_trees: Vec<usize>,
    pub max_features: Vec<MaxFeatures>,
    pub bootstrap: Vec<bool>,
    pub min_samples_split: Vec<usize>,
}

impl Default for ForestGrid {
    fn default() -> Self {
        ForestGrid {
            n_trees: vec![50, 100, 200],
            max_features: vec![MaxFeatures::All, MaxFeatures::Sqrt, MaxFeatures::Log2],
            bootstrap: vec![true, false],
            min_samples_split: vec![2, 5],
        }
    }
}

impl ForestGrid {
    pub fn candidates(
        &self,
        base_tree: &crate::models::TreeParams,
        seed: u64,
    ) -> Vec<crate::models::ForestParams> {
        let mut out = Vec::new();
        for &n_trees in &self.n_trees {
            for &max_features in &self.max_features {
                for &bootstrap in &self.bootstrap {
                    for &min_samples_split in &self.min_samples_split {
                        let mut tree = base_tree.clone();
                        tree.min_samples_split = min_samples_split;
                        out.push(crate::models::ForestParams {
                            n_trees,
                            bootstrap,
                            max_features,
                            tree,
                            seed,
                        });
                    }
                }
            }
        }
        out
    }
}

/// Column renaming for the bundled dataset's raw headers (after trimming
/// surrounding whitespace).
pub fn who_rename_map() -> BTreeMap<String, String> {
    [
        ("Country", "country"),
        ("Year", "year"),
        ("Status", "status"),
        ("Life expectancy", "life_expectancy"),
        ("Adult Mortality", "adult_mortality"),
        ("infant deaths", "infant_deaths"),
        ("Alcohol", "alcohol"),
        ("percentage expenditure", "percent_expenditure"),
        ("Hepatitis B", "hepatitis_b"),
        ("Measles", "measles"),
        ("BMI", "bmi"),
        ("under-five deaths", "under_five_deaths"),
        ("Polio", "polio"),
        ("Total expenditure", "tot_expenditure"),
        ("Diphtheria", "diphtheria"),
        ("HIV/AIDS", "hiv_aids"),
        ("GDP", "gdp"),
        ("Population", "population"),
        ("thinness  1-19 years", "thinness_1to19years"),
        ("thinness 5-9 years", "thinness_5to9years"),
        ("Income composition of resources", "income_composition_of_resources"),
        ("Schooling", "school_years"),
    ]
    .into_iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect()
}

/// The default consistency-rule set: hard caps on bounded quantities,
/// non-negativity for percentages, the infant/under-five ordering, and
/// per-1,000 rates capped at 1,000.
pub fn default_rules() -> Vec<ConsistencyRule> {
    use ConsistencyRule::{ColumnLessOrEqual, LowerBound, UpperBound};
    let upper = |column: &str, limit: f64| UpperBound {
        column: column.to_string(),
        limit,
    };
    let lower = |column: &str, limit: f64| LowerBound {
        column: column.to_string(),
        limit,
    };
    vec![
        upper("life_expectancy", 100.0),
        upper("bmi", 100.0),
        ColumnLessOrEqual {
            lhs: "infant_deaths".to_string(),
            rhs: "under_five_deaths".to_string(),
        },
        upper("adult_mortality", 1000.0),
        upper("infant_deaths", 1000.0),
        upper("under_five_deaths", 1000.0),
        upper("measles", 1000.0),
        upper("hiv_aids", 1000.0),
        lower("polio", 0.0),
        upper("polio", 100.0),
        lower("diphtheria", 0.0),
        upper("diphtheria", 100.0),
        lower("percent_expenditure", 0.0),
    ]
}
