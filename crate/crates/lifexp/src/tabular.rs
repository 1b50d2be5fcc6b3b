//! Tabular data handling: CSV ingestion, schema normalization, the cleaning
//! pipeline (sparse-feature drop, incomplete-row drop, consistency rules,
//! geocoding, one-hot encoding), and conversion to a dense [`Dataset`].

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// One table cell: a finite number, a category string, or missing.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Category(String),
    Missing,
}

impl Cell {
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Cell::Number(v) => Some(*v),
            _ => None,
        }
    }
}

/// A named column of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub cells: Vec<Cell>,
}

impl Column {
    /// Non-missing numeric values, in row order.
    pub fn numeric_values(&self) -> Vec<f64> {
        self.cells.iter().filter_map(Cell::as_number).collect()
    }

    pub fn missing_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_missing()).count()
    }

    /// True when every cell is a number (no categories, no missing).
    pub fn is_fully_numeric(&self) -> bool {
        self.cells.iter().all(|c| matches!(c, Cell::Number(_)))
    }

    /// True when no cell is numeric (categories and/or missing only).
    pub fn is_categorical(&self) -> bool {
        !self.cells.iter().any(|c| matches!(c, Cell::Number(_)))
    }
}

/// Ordered, named columns with equal row counts.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<Column>,
    n_rows: usize,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Result<Self> {
        let n_rows = columns.first().map_or(0, |c| c.cells.len());
        let mut seen = BTreeSet::new();
        for col in &columns {
            if col.name.is_empty() {
                return Err(Error::Schema("empty column name".into()));
            }
            if !seen.insert(col.name.clone()) {
                return Err(Error::Schema(format!("duplicate column name: {}", col.name)));
            }
            if col.cells.len() != n_rows {
                return Err(Error::Schema(format!(
                    "column {} has {} rows, expected {n_rows}",
                    col.name,
                    col.cells.len()
                )));
            }
        }
        Ok(Table { columns, n_rows })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn cell(&self, row: usize, col: usize) -> &Cell {
        &self.columns[col].cells[row]
    }

    /// Keeps only the rows whose indices are listed, preserving order.
    fn retain_rows(&self, keep: &[usize]) -> Table {
        let columns = self
            .columns
            .iter()
            .map(|c| Column {
                name: c.name.clone(),
                cells: keep.iter().map(|&r| c.cells[r].clone()).collect(),
            })
            .collect();
        Table {
            columns,
            n_rows: keep.len(),
        }
    }
}

/// Parses CSV from a reader. Cells matching a missing token become
/// [`Cell::Missing`]; cells that parse as finite numbers become
/// [`Cell::Number`]; everything else is kept as a category string. Header
/// names and cell contents are trimmed of surrounding whitespace.
pub fn read_csv<R: Read>(source: R, missing_tokens: &BTreeSet<String>) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::None)
        .from_reader(source);

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Csv {
            row: 0,
            detail: e.to_string(),
        })?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();

    let mut seen = BTreeSet::new();
    for h in &headers {
        if h.is_empty() {
            return Err(Error::Schema("empty header name".into()));
        }
        if !seen.insert(h.clone()) {
            return Err(Error::Schema(format!("duplicate header name: {h}")));
        }
    }

    let mut cells: Vec<Vec<Cell>> = headers.iter().map(|_| Vec::new()).collect();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Csv {
            row: i + 1,
            detail: e.to_string(),
        })?;
        if record.len() != headers.len() {
            return Err(Error::Csv {
                row: i + 1,
                detail: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        for (j, field) in record.iter().enumerate() {
            cells[j].push(parse_cell(field, missing_tokens));
        }
    }

    let columns = headers
        .into_iter()
        .zip(cells)
        .map(|(name, cells)| Column { name, cells })
        .collect();
    Table::new(columns)
}

/// Default missing-value tokens: the empty string and literal "NA".
pub fn default_missing_tokens() -> BTreeSet<String> {
    ["".to_string(), "NA".to_string()].into_iter().collect()
}

fn parse_cell(raw: &str, missing_tokens: &BTreeSet<String>) -> Cell {
    let trimmed = raw.trim();
    if missing_tokens.contains(trimmed) {
        return Cell::Missing;
    }
    match trimmed.parse::<f64>() {
        Ok(v) if v.is_finite() => Cell::Number(v),
        _ => Cell::Category(trimmed.to_string()),
    }
}

/// Writes a table back out as CSV. Numbers use Rust's shortest round-trip
/// formatting; missing cells become empty fields.
pub fn write_csv<W: Write>(table: &Table, sink: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    writer
        .write_record(table.columns.iter().map(|c| c.name.as_str()))
        .map_err(|e| Error::Csv {
            row: 0,
            detail: e.to_string(),
        })?;
    for r in 0..table.n_rows {
        let record: Vec<String> = table
            .columns
            .iter()
            .map(|c| match &c.cells[r] {
                Cell::Number(v) => format!("{v}"),
                Cell::Category(s) => s.clone(),
                Cell::Missing => String::new(),
            })
            .collect();
        writer.write_record(&record).map_err(|e| Error::Csv {
            row: r + 1,
            detail: e.to_string(),
        })?;
    }
    writer.flush()?;
    Ok(())
}

/// Renames columns according to `mapping`, preserving order. Every mapping
/// source must exist.
pub fn rename_columns(table: &Table, mapping: &BTreeMap<String, String>) -> Result<Table> {
    let names: BTreeSet<&str> = table.columns.iter().map(|c| c.name.as_str()).collect();
    let missing: Vec<&str> = mapping
        .keys()
        .map(String::as_str)
        .filter(|k| !names.contains(k))
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingColumn(missing.join(", ")));
    }
    let columns = table
        .columns
        .iter()
        .map(|c| Column {
            name: mapping.get(&c.name).cloned().unwrap_or_else(|| c.name.clone()),
            cells: c.cells.clone(),
        })
        .collect();
    Table::new(columns)
}

/// Removes every column whose fraction of missing cells strictly exceeds
/// `max_missing_fraction`. Returns the surviving table and the dropped names
/// in original column order.
pub fn drop_sparse_features(
    table: &Table,
    max_missing_fraction: f64,
) -> Result<(Table, Vec<String>)> {
    if !(0.0..=1.0).contains(&max_missing_fraction) {
        return Err(Error::Contract(format!(
            "missing fraction threshold must lie in [0,1], got {max_missing_fraction}"
        )));
    }
    let n = table.n_rows.max(1);
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for col in &table.columns {
        let frac = col.missing_count() as f64 / n as f64;
        if frac > max_missing_fraction {
            dropped.push(col.name.clone());
        } else {
            kept.push(col.clone());
        }
    }
    Ok((Table::new(kept)?, dropped))
}

/// Removes every row that contains at least one missing cell.
pub fn drop_incomplete_rows(table: &Table) -> Table {
    let keep: Vec<usize> = (0..table.n_rows)
        .filter(|&r| !table.columns.iter().any(|c| c.cells[r].is_missing()))
        .collect();
    table.retain_rows(&keep)
}

/// A row-level validity rule. Rows violating any rule are removed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConsistencyRule {
    /// `column` must not exceed `limit`.
    UpperBound { column: String, limit: f64 },
    /// `column` must not fall below `limit`.
    LowerBound { column: String, limit: f64 },
    /// `lhs` must be less than or equal to `rhs`, row by row.
    ColumnLessOrEqual { lhs: String, rhs: String },
}

impl ConsistencyRule {
    pub fn describe(&self) -> String {
        match self {
            ConsistencyRule::UpperBound { column, limit } => format!("{column} <= {limit}"),
            ConsistencyRule::LowerBound { column, limit } => format!("{column} >= {limit}"),
            ConsistencyRule::ColumnLessOrEqual { lhs, rhs } => format!("{lhs} <= {rhs}"),
        }
    }

    fn referenced_columns(&self) -> Vec<&str> {
        match self {
            ConsistencyRule::UpperBound { column, .. }
            | ConsistencyRule::LowerBound { column, .. } => vec![column],
            ConsistencyRule::ColumnLessOrEqual { lhs, rhs } => vec![lhs, rhs],
        }
    }

    /// Whether row `r` violates this rule. Missing cells never violate;
    /// they are handled by the row-drop stage.
    fn violated(&self, table: &Table, r: usize, indices: &BTreeMap<&str, usize>) -> bool {
        let value = |name: &str| table.columns[indices[name]].cells[r].as_number();
        match self {
            ConsistencyRule::UpperBound { column, limit } => {
                value(column).is_some_and(|v| v > *limit)
            }
            ConsistencyRule::LowerBound { column, limit } => {
                value(column).is_some_and(|v| v < *limit)
            }
            ConsistencyRule::ColumnLessOrEqual { lhs, rhs } => match (value(lhs), value(rhs)) {
                (Some(a), Some(b)) => a > b,
                _ => false,
            },
        }
    }
}

/// Per-rule removal counts. A row violating several rules is counted under
/// each of them, but removed once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleReport {
    pub per_rule: Vec<RuleCount>,
    pub rows_removed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleCount {
    pub rule: String,
    pub violations: usize,
}

/// Loads a JSON rule file: an array of rule objects.
pub fn load_rules<R: Read>(source: R) -> Result<Vec<ConsistencyRule>> {
    serde_json::from_reader(source).map_err(|e| Error::Config(format!("rule file: {e}")))
}

/// Removes every row violating any rule. Rule columns must exist and hold
/// no category cells.
pub fn apply_consistency_rules(
    table: &Table,
    rules: &[ConsistencyRule],
) -> Result<(Table, RuleReport)> {
    let mut indices: BTreeMap<&str, usize> = BTreeMap::new();
    for rule in rules {
        for name in rule.referenced_columns() {
            let idx = table
                .column_index(name)
                .ok_or_else(|| Error::Config(format!("rule references absent column {name}")))?;
            if table.columns[idx]
                .cells
                .iter()
                .any(|c| matches!(c, Cell::Category(_)))
            {
                return Err(Error::Config(format!(
                    "rule references non-numeric column {name}"
                )));
            }
            indices.insert(name, idx);
        }
    }

    let mut counts = vec![0usize; rules.len()];
    let mut keep = Vec::with_capacity(table.n_rows);
    for r in 0..table.n_rows {
        let mut bad = false;
        for (k, rule) in rules.iter().enumerate() {
            if rule.violated(table, r, &indices) {
                counts[k] += 1;
                bad = true;
            }
        }
        if !bad {
            keep.push(r);
        }
    }

    let report = RuleReport {
        per_rule: rules
            .iter()
            .zip(&counts)
            .map(|(rule, &violations)| RuleCount {
                rule: rule.describe(),
                violations,
            })
            .collect(),
        rows_removed: table.n_rows - keep.len(),
    };
    Ok((table.retain_rows(&keep), report))
}

/// Country-name → (latitude, longitude) lookup.
#[derive(Debug, Clone)]
pub struct GeoLookup {
    entries: BTreeMap<String, (f64, f64)>,
}

impl GeoLookup {
    pub fn new(entries: BTreeMap<String, (f64, f64)>) -> Result<Self> {
        for (name, &(lat, lon)) in &entries {
            if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
                return Err(Error::Config(format!(
                    "coordinates out of range for {name}: ({lat}, {lon})"
                )));
            }
        }
        Ok(GeoLookup { entries })
    }

    /// Parses a lookup CSV with the exact header `country,latitude,longitude`.
    pub fn from_csv<R: Read>(source: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(source);
        let headers = reader.headers().map_err(|e| Error::Csv {
            row: 0,
            detail: e.to_string(),
        })?;
        let expected = ["country", "latitude", "longitude"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::Schema(format!(
                "geocode lookup must have header country,latitude,longitude, got {}",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut entries = BTreeMap::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Csv {
                row: i + 1,
                detail: e.to_string(),
            })?;
            let name = record.get(0).unwrap_or("").trim().to_string();
            let parse = |s: Option<&str>, what: &str| -> Result<f64> {
                s.unwrap_or("")
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Csv {
                        row: i + 1,
                        detail: format!("bad {what}"),
                    })
            };
            let lat = parse(record.get(1), "latitude")?;
            let lon = parse(record.get(2), "longitude")?;
            if entries.insert(name.clone(), (lat, lon)).is_some() {
                return Err(Error::Schema(format!("duplicate geocode entry: {name}")));
            }
        }
        GeoLookup::new(entries)
    }

    pub fn get(&self, country: &str) -> Option<(f64, f64)> {
        self.entries.get(country).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Replaces the categorical `country` column with numeric `latitude` and
/// `longitude` columns appended at the end. Any unmatched country aborts the
/// whole operation, listing every unmatched name.
pub fn geocode_countries(table: &Table, lookup: &GeoLookup) -> Result<Table> {
    let idx = table
        .column_index("country")
        .ok_or_else(|| Error::MissingColumn("country".into()))?;
    let col = &table.columns[idx];
    if !col.is_categorical() {
        return Err(Error::Contract("country column must be categorical".into()));
    }

    let mut unmatched = BTreeSet::new();
    let mut lat_cells = Vec::with_capacity(table.n_rows);
    let mut lon_cells = Vec::with_capacity(table.n_rows);
    for cell in &col.cells {
        match cell {
            Cell::Category(name) => match lookup.get(name) {
                Some((lat, lon)) => {
                    lat_cells.push(Cell::Number(lat));
                    lon_cells.push(Cell::Number(lon));
                }
                None => {
                    unmatched.insert(name.clone());
                }
            },
            _ => {
                unmatched.insert("<missing>".to_string());
            }
        }
    }
    if !unmatched.is_empty() {
        return Err(Error::Config(format!(
            "countries absent from geocode lookup: {}",
            unmatched.into_iter().collect::<Vec<_>>().join(", ")
        )));
    }

    let mut columns: Vec<Column> = table
        .columns
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != idx)
        .map(|(_, c)| c.clone())
        .collect();
    columns.push(Column {
        name: "latitude".into(),
        cells: lat_cells,
    });
    columns.push(Column {
        name: "longitude".into(),
        cells: lon_cells,
    });
    Table::new(columns)
}

/// Replaces a categorical column with one 0/1 indicator column per distinct
/// category, in order of first appearance, named `<column>_<category>` with
/// the category lowercased. Exactly one indicator is 1 per row.
pub fn one_hot(table: &Table, column: &str) -> Result<Table> {
    let idx = table
        .column_index(column)
        .ok_or_else(|| Error::MissingColumn(column.into()))?;
    let col = &table.columns[idx];

    let mut categories: Vec<String> = Vec::new();
    for cell in &col.cells {
        match cell {
            Cell::Category(s) => {
                if !categories.contains(s) {
                    categories.push(s.clone());
                }
            }
            Cell::Number(_) => {
                return Err(Error::Contract(format!(
                    "one-hot encoding needs a categorical column, {column} holds numbers"
                )));
            }
            Cell::Missing => {
                return Err(Error::Contract(format!(
                    "one-hot encoding cannot handle missing cells in {column}"
                )));
            }
        }
    }

    let mut new_cols = Vec::with_capacity(categories.len());
    for cat in &categories {
        let name = format!("{column}_{}", cat.to_lowercase());
        if table.column(&name).is_some() {
            return Err(Error::Schema(format!(
                "one-hot column name collides with existing column {name}"
            )));
        }
        let cells = col
            .cells
            .iter()
            .map(|c| match c {
                Cell::Category(s) if s == cat => Cell::Number(1.0),
                _ => Cell::Number(0.0),
            })
            .collect();
        new_cols.push(Column { name, cells });
    }

    let mut columns = Vec::with_capacity(table.columns.len() - 1 + new_cols.len());
    for (i, c) in table.columns.iter().enumerate() {
        if i == idx {
            columns.extend(new_cols.drain(..));
        } else {
            columns.push(c.clone());
        }
    }
    Table::new(columns)
}

/// A dense feature matrix with its target vector and feature names.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub features: Matrix,
    pub target: Vec<f64>,
    pub feature_names: Vec<String>,
}

impl Dataset {
    pub fn n_samples(&self) -> usize {
        self.features.n_rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.n_cols()
    }

    /// Subset by row indices, preserving the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select_rows(rows),
            target: rows.iter().map(|&r| self.target[r]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }
}

/// Extracts `target` and turns the remaining columns into a feature matrix,
/// in table order. Every column must be fully numeric.
pub fn build_dataset(table: &Table, target: &str) -> Result<Dataset> {
    let target_idx = table
        .column_index(target)
        .ok_or_else(|| Error::MissingColumn(target.into()))?;
    for col in &table.columns {
        if !col.is_fully_numeric() {
            return Err(Error::Contract(format!(
                "column {} holds non-numeric or missing cells",
                col.name
            )));
        }
    }

    let n = table.n_rows;
    let feature_cols: Vec<&Column> = table
        .columns
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != target_idx)
        .map(|(_, c)| c)
        .collect();
    let p = feature_cols.len();
    let mut data = Vec::with_capacity(n * p);
    for r in 0..n {
        for col in &feature_cols {
            data.push(col.cells[r].as_number().unwrap());
        }
    }
    Ok(Dataset {
        features: Matrix::from_vec_unchecked(n, p, data),
        target: table.columns[target_idx]
            .cells
            .iter()
            .map(|c| c.as_number().unwrap())
            .collect(),
        feature_names: feature_cols.iter().map(|c| c.name.clone()).collect(),
    })
}
