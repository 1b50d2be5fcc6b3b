//! Stage orchestration: preprocess → explore → cluster → train → report.
//!
//! Each stage has a pure computation function (returning report sections)
//! and a file-level command that chains through `out_dir`: `clean.csv`
//! carries the dataset between stages, `report.json` accumulates sections,
//! and `timings.json` holds the wall-clock measurements that must stay out
//! of the reproducible report.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::chart::standard_chart_suite;
use crate::config::{default_rules, PipelineConfig};
use crate::error::{Error, Result};
use crate::evaluation::{
    compute_metrics, grid_search, time_fit, time_predict, train_test_split, MetricSet,
};
use crate::explore::{anova_oneway, correlation_matrix, histogram, pearson};
use crate::models::{
    forest_fit, forest_importances, forest_predict, ols_fit, ols_predict,
    ols_significant_features, tree_fit, tree_importances, tree_predict, tree_render, Criterion,
    ForestParams, TreeParams,
};
use crate::report::{
    emit_report, parse_report, AnovaResult, ClusteringSection, CoefficientRow, ComparisonRow,
    CorrelationBlock, CurvePoint, ExploreSection, ForestBlock, ForestGridRow, ForestParamsJson,
    LrBlock, Meta, ModelTiming, ModelsSection, NamedHistogram, NamedValue, PcaSection,
    PreprocessSection, RunReport, StageCount, TimingsFile, TreeBlock, TreeGridRow, TreeParamsJson,
};
use crate::tabular::{
    apply_consistency_rules, build_dataset, drop_incomplete_rows, drop_sparse_features,
    geocode_countries, load_rules, one_hot, read_csv, rename_columns, write_csv, Cell, Dataset,
    GeoLookup, Table,
};
use crate::unsupervised::{fit_scaler, pca_fit, pca_transform, select_clustering, ScalerKind};

/// Cross-validation folds used by both hyperparameter searches.
pub const CV_FOLDS: usize = 5;
/// Rendered tree depth (matching the "first three levels" view).
pub const TREE_RENDER_DEPTH: usize = 3;

/// Which models a `train` invocation fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    Lr,
    Tree,
    Forest,
    All,
}

// ---------------------------------------------------------------------------
// Stage computations
// ---------------------------------------------------------------------------

/// Runs the full cleaning pipeline on the configured input file:
/// rename → sparse-feature drop → incomplete-row drop → consistency rules →
/// geocoding → one-hot. Returns the clean table and the stage-count record.
pub fn preprocess(cfg: &PipelineConfig) -> Result<(Table, PreprocessSection)> {
    let file = fs::File::open(&cfg.input)
        .map_err(|e| Error::Config(format!("cannot open input {}: {e}", cfg.input.display())))?;
    let tokens = cfg.missing_tokens.iter().cloned().collect();
    let raw = read_csv(file, &tokens)?;

    let mut stage_counts = vec![StageCount {
        stage: "loaded".into(),
        rows: raw.n_rows(),
        columns: raw.n_cols(),
    }];

    let renamed = rename_columns(&raw, &cfg.rename_map())?;
    let (sparse_dropped, dropped_features) =
        drop_sparse_features(&renamed, cfg.max_missing_fraction)?;
    stage_counts.push(StageCount {
        stage: "sparse_features_dropped".into(),
        rows: sparse_dropped.n_rows(),
        columns: sparse_dropped.n_cols(),
    });

    let complete = drop_incomplete_rows(&sparse_dropped);
    stage_counts.push(StageCount {
        stage: "incomplete_rows_dropped".into(),
        rows: complete.n_rows(),
        columns: complete.n_cols(),
    });

    let rules = match &cfg.rules {
        Some(path) => {
            let file = fs::File::open(path).map_err(|e| {
                Error::Config(format!("cannot open rules {}: {e}", path.display()))
            })?;
            load_rules(file)?
        }
        None => default_rules(),
    };
    let (consistent, rule_report) = apply_consistency_rules(&complete, &rules)?;
    stage_counts.push(StageCount {
        stage: "consistency_rules_applied".into(),
        rows: consistent.n_rows(),
        columns: consistent.n_cols(),
    });

    let geo_file = fs::File::open(&cfg.geocode).map_err(|e| {
        Error::Config(format!("cannot open geocode {}: {e}", cfg.geocode.display()))
    })?;
    let lookup = GeoLookup::from_csv(geo_file)?;
    let geocoded = geocode_countries(&consistent, &lookup)?;
    stage_counts.push(StageCount {
        stage: "geocoded".into(),
        rows: geocoded.n_rows(),
        columns: geocoded.n_cols(),
    });

    let encoded = one_hot(&geocoded, "status")?;
    stage_counts.push(StageCount {
        stage: "one_hot_encoded".into(),
        rows: encoded.n_rows(),
        columns: encoded.n_cols(),
    });

    Ok((
        encoded,
        PreprocessSection {
            stage_counts,
            dropped_features,
            rule_report,
        },
    ))
}

/// Histograms for every numeric column, the feature correlation matrix,
/// per-feature target correlations, and any configured ANOVA runs.
pub fn explore(cfg: &PipelineConfig, table: &Table) -> Result<ExploreSection> {
    let mut histograms = Vec::new();
    for col in table.columns() {
        let values = col.numeric_values();
        if values.is_empty() {
            continue;
        }
        let h = histogram(&values, cfg.histogram_bins)?;
        histograms.push(NamedHistogram {
            name: col.name.clone(),
            bin_edges: h.bin_edges,
            counts: h.counts,
        });
    }

    let dataset = build_dataset(table, &cfg.target)?;
    let corr = correlation_matrix(&dataset, false)?;
    let feature_correlations = CorrelationBlock {
        names: corr.names.clone(),
        rows: (0..corr.r.n_rows())
            .map(|i| corr.r.row(i).to_vec())
            .collect(),
        zero_variance: corr.zero_variance.clone(),
    };

    let mut target_correlations = Vec::new();
    for j in 0..dataset.n_features() {
        let col = dataset.features.column(j);
        let value = pearson(&col, &dataset.target).unwrap_or(0.0);
        target_correlations.push(NamedValue {
            name: dataset.feature_names[j].clone(),
            value,
        });
    }

    let mut anova = Vec::new();
    for pair in &cfg.anova {
        let (values_col, groups_col) = pair
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("anova entry must be values:groups, got {pair}")))?;
        let groups = anova_groups(table, values_col, groups_col)?;
        let (f, p) = anova_oneway(&groups)?;
        anova.push(AnovaResult {
            values_column: values_col.to_string(),
            groups_column: groups_col.to_string(),
            group_count: groups.len(),
            f: f.is_finite().then_some(f),
            f_infinite: f.is_infinite(),
            p,
        });
    }

    Ok(ExploreSection {
        histogram_bins: cfg.histogram_bins,
        histograms,
        feature_correlations,
        target_correlations,
        anova,
    })
}

/// Partitions `values_col` by the distinct cells of `groups_col`, in first
/// appearance order.
pub fn anova_groups(table: &Table, values_col: &str, groups_col: &str) -> Result<Vec<Vec<f64>>> {
    let values = table
        .column(values_col)
        .ok_or_else(|| Error::MissingColumn(values_col.into()))?;
    let groups = table
        .column(groups_col)
        .ok_or_else(|| Error::MissingColumn(groups_col.into()))?;
    let mut keys: Vec<&Cell> = Vec::new();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for (value_cell, group_cell) in values.cells.iter().zip(&groups.cells) {
        let v = value_cell.as_number().ok_or_else(|| {
            Error::Contract(format!("anova values column {values_col} must be numeric"))
        })?;
        if group_cell.is_missing() {
            return Err(Error::Contract(format!(
                "anova group column {groups_col} has missing cells"
            )));
        }
        match keys.iter().position(|k| *k == group_cell) {
            Some(i) => out[i].push(v),
            None => {
                keys.push(group_cell);
                out.push(vec![v]);
            }
        }
    }
    Ok(out)
}

/// The scaler × algorithm × k sweep plus a 2-D PCA projection of the
/// winner's scaling, colored by the winning labels.
pub fn cluster(cfg: &PipelineConfig, table: &Table) -> Result<ClusteringSection> {
    let dataset = build_dataset(table, &cfg.target)?;
    let sweep = select_clustering(&dataset.features, (cfg.k_min, cfg.k_max), cfg.seed)?;

    let scaler = fit_scaler(sweep.winner.scaler, &dataset.features)?;
    let scaled = scaler.transform(&dataset.features)?;
    let m = dataset.n_features().min(2);
    let pca = pca_fit(&scaled, m)?;
    let proj = pca_transform(&pca, &scaled)?;
    let points: Vec<[f64; 2]> = (0..proj.n_rows())
        .map(|r| {
            let row = proj.row(r);
            [row[0], if m > 1 { row[1] } else { 0.0 }]
        })
        .collect();

    Ok(ClusteringSection {
        grid: sweep.grid.clone(),
        winner: sweep.winner,
        silhouette_curve: sweep
            .silhouette_curve
            .iter()
            .map(|&(k, silhouette)| CurvePoint { k, silhouette })
            .collect(),
        pca: PcaSection {
            explained_variance: pca.explained_variance.clone(),
            points,
            labels: sweep.winner_labels.clone(),
        },
    })
}

/// Everything `train` produces for one invocation.
#[derive(Debug, Default)]
pub struct TrainOutcome {
    pub lr: Option<(LrBlock, ModelTiming)>,
    pub tree: Option<(TreeBlock, ModelTiming)>,
    pub forest: Option<(ForestBlock, ModelTiming)>,
}

fn tree_params_to_json(p: &TreeParams) -> TreeParamsJson {
    TreeParamsJson {
        max_depth: p.max_depth,
        min_samples_leaf: p.min_samples_leaf,
        min_samples_split: p.min_samples_split,
        ccp_alpha: p.ccp_alpha,
        criterion: p.criterion.name().to_string(),
    }
}

fn tree_params_from_json(p: &TreeParamsJson) -> Result<TreeParams> {
    let criterion = match p.criterion.as_str() {
        "squared_error" => Criterion::SquaredError,
        "absolute_error" => Criterion::AbsoluteError,
        other => {
            return Err(Error::Config(format!("unknown tree criterion {other}")));
        }
    };
    Ok(TreeParams {
        max_depth: p.max_depth,
        min_samples_leaf: p.min_samples_leaf,
        min_samples_split: p.min_samples_split,
        ccp_alpha: p.ccp_alpha,
        criterion,
    })
}

fn forest_params_to_json(p: &ForestParams) -> ForestParamsJson {
    ForestParamsJson {
        n_trees: p.n_trees,
        max_features: p.max_features.label(),
        bootstrap: p.bootstrap,
        min_samples_split: p.tree.min_samples_split,
    }
}

/// Fits the requested models on a seeded 70:30 split with MaxAbs-scaled
/// features (the scaling fixed for all predictive modeling; the target is
/// never scaled).
///
/// The forest inherits the tree winner's shape parameters, so it needs
/// either `ModelChoice::All` or a `prior_tree_best` from an earlier tree
/// run.
pub fn train(
    cfg: &PipelineConfig,
    table: &Table,
    choice: ModelChoice,
    prior_tree_best: Option<&TreeParamsJson>,
) -> Result<TrainOutcome> {
    let dataset = build_dataset(table, &cfg.target)?;
    let n = dataset.n_samples();
    let split = train_test_split(n, cfg.split_ratio, cfg.seed)?;

    let scaler = fit_scaler(ScalerKind::MaxAbs, &dataset.features)?;
    let scaled = Dataset {
        features: scaler.transform(&dataset.features)?,
        target: dataset.target.clone(),
        feature_names: dataset.feature_names.clone(),
    };
    let train_ds = scaled.select_rows(&split.train);
    let test_ds = scaled.select_rows(&split.test);

    let mut outcome = TrainOutcome::default();

    if matches!(choice, ModelChoice::Lr | ModelChoice::All) {
        outcome.lr = Some(train_lr(cfg, &train_ds, &test_ds)?);
    }
    if matches!(choice, ModelChoice::Tree | ModelChoice::All) {
        outcome.tree = Some(train_tree(cfg, &train_ds, &test_ds)?);
    }
    if matches!(choice, ModelChoice::Forest | ModelChoice::All) {
        let base = if let Some((block, _)) = &outcome.tree {
            tree_params_from_json(&block.best_params)?
        } else if let Some(json) = prior_tree_best {
            tree_params_from_json(json)?
        } else {
            return Err(Error::Config(
                "the forest inherits the tree winner's parameters; run `train --model tree` (or `--model all`) first".into(),
            ));
        };
        outcome.forest = Some(train_forest(cfg, &train_ds, &test_ds, &base)?);
    }
    Ok(outcome)
}

fn train_lr(
    cfg: &PipelineConfig,
    train_ds: &Dataset,
    test_ds: &Dataset,
) -> Result<(LrBlock, ModelTiming)> {
    let model = ols_fit(train_ds)?;
    let fit_timing = time_fit(
        || {
            let _ = ols_fit(train_ds);
        },
        cfg.timing_repeats,
    )?;

    let train_pred = ols_predict(&model, &train_ds.features)?;
    let test_pred = ols_predict(&model, &test_ds.features)?;
    let predict_timing = time_predict(
        || {
            let _ = ols_predict(&model, &test_ds.features);
        },
        test_ds.n_samples(),
        cfg.timing_repeats,
    )?;

    let coefficients = (0..model.coefficients.len())
        .map(|j| CoefficientRow {
            name: model.feature_names[j].clone(),
            coefficient: model.coefficients[j],
            std_error: model.standard_errors[j],
            t_stat: model.t_stats[j],
            p_value: model.p_values[j],
        })
        .collect();

    let block = LrBlock {
        dropped_collinear: model.dropped_collinear.clone(),
        coefficients,
        alpha: cfg.alpha,
        significant_features: ols_significant_features(&model, cfg.alpha),
        train_metrics: compute_metrics(&train_ds.target, &train_pred)?,
        test_metrics: compute_metrics(&test_ds.target, &test_pred)?,
        test_actual: test_ds.target.clone(),
        test_predicted: test_pred,
    };
    Ok((
        block,
        ModelTiming::from_reports("lr", fit_timing, predict_timing),
    ))
}

fn train_tree(
    cfg: &PipelineConfig,
    train_ds: &Dataset,
    test_ds: &Dataset,
) -> Result<(TreeBlock, ModelTiming)> {
    let candidates = cfg.tree_grid.candidates();
    let mut search = None;
    // Grid-search timing covers the whole search including every fold fit.
    let fit_timing = time_fit(
        || {
            search = Some(grid_search(
                train_ds,
                candidates.clone(),
                CV_FOLDS,
                cfg.seed,
                |ds, p| tree_fit(ds, p),
                |m, x| tree_predict(m, x),
            ));
        },
        1,
    )?;
    let search = search.unwrap()?;

    let model = &search.model;
    let train_pred = tree_predict(model, &train_ds.features)?;
    let test_pred = tree_predict(model, &test_ds.features)?;
    let predict_timing = time_predict(
        || {
            let _ = tree_predict(model, &test_ds.features);
        },
        test_ds.n_samples(),
        cfg.timing_repeats,
    )?;

    let importances = tree_importances(model, train_ds.n_features());
    let (text_render, dot) = tree_render(model, TREE_RENDER_DEPTH, &train_ds.feature_names);

    let block = TreeBlock {
        grid: search
            .candidates
            .iter()
            .map(|c| TreeGridRow {
                params: tree_params_to_json(&c.params),
                fold_r2: c.fold_r2.clone(),
                mean_r2: c.mean_r2,
            })
            .collect(),
        best_params: tree_params_to_json(&search.best().params),
        cv_r2: search.best().mean_r2,
        depth: model.depth(),
        n_leaves: model.n_leaves(),
        train_metrics: compute_metrics(&train_ds.target, &train_pred)?,
        test_metrics: compute_metrics(&test_ds.target, &test_pred)?,
        test_actual: test_ds.target.clone(),
        test_predicted: test_pred,
        importances: named_values(&train_ds.feature_names, &importances),
        text_render,
        dot,
    };
    Ok((
        block,
        ModelTiming::from_reports("tree", fit_timing, predict_timing),
    ))
}

fn train_forest(
    cfg: &PipelineConfig,
    train_ds: &Dataset,
    test_ds: &Dataset,
    base_tree: &TreeParams,
) -> Result<(ForestBlock, ModelTiming)> {
    let candidates = cfg.forest_grid.candidates(base_tree, cfg.seed);
    let mut search = None;
    let fit_timing = time_fit(
        || {
            search = Some(grid_search(
                train_ds,
                candidates.clone(),
                CV_FOLDS,
                cfg.seed,
                |ds, p| forest_fit(ds, p),
                |m, x| forest_predict(m, x),
            ));
        },
        1,
    )?;
    let search = search.unwrap()?;

    let model = &search.model;
    let train_pred = forest_predict(model, &train_ds.features)?;
    let test_pred = forest_predict(model, &test_ds.features)?;
    let predict_timing = time_predict(
        || {
            let _ = forest_predict(model, &test_ds.features);
        },
        test_ds.n_samples(),
        cfg.timing_repeats,
    )?;
    let importances = forest_importances(model);

    let block = ForestBlock {
        grid: search
            .candidates
            .iter()
            .map(|c| ForestGridRow {
                params: forest_params_to_json(&c.params),
                fold_r2: c.fold_r2.clone(),
                mean_r2: c.mean_r2,
            })
            .collect(),
        best_params: forest_params_to_json(&search.best().params),
        cv_r2: search.best().mean_r2,
        train_metrics: compute_metrics(&train_ds.target, &train_pred)?,
        test_metrics: compute_metrics(&test_ds.target, &test_pred)?,
        test_actual: test_ds.target.clone(),
        test_predicted: test_pred,
        importances: named_values(&train_ds.feature_names, &importances),
    };
    Ok((
        block,
        ModelTiming::from_reports("forest", fit_timing, predict_timing),
    ))
}

fn named_values(names: &[String], values: &[f64]) -> Vec<NamedValue> {
    names
        .iter()
        .zip(values)
        .map(|(name, &value)| NamedValue {
            name: name.clone(),
            value,
        })
        .collect()
}

fn comparison_rows(models: &ModelsSection) -> Vec<ComparisonRow> {
    let mut rows = Vec::new();
    let mut push = |model: &str, m: &MetricSet| {
        rows.push(ComparisonRow {
            model: model.to_string(),
            r2: m.r2,
            mae: m.mae,
            mse: m.mse,
            rmse: m.rmse,
        });
    };
    if let Some(lr) = &models.lr {
        push("lr", &lr.test_metrics);
    }
    if let Some(tree) = &models.tree {
        push("tree", &tree.test_metrics);
    }
    if let Some(forest) = &models.forest {
        push("forest", &forest.test_metrics);
    }
    rows
}

// ---------------------------------------------------------------------------
// File-level stage commands
// ---------------------------------------------------------------------------

fn clean_path(cfg: &PipelineConfig) -> PathBuf {
    cfg.out_dir.join("clean.csv")
}

fn report_path(cfg: &PipelineConfig) -> PathBuf {
    cfg.out_dir.join("report.json")
}

fn timings_path(cfg: &PipelineConfig) -> PathBuf {
    cfg.out_dir.join("timings.json")
}

fn meta_for(cfg: &PipelineConfig) -> Result<Meta> {
    Ok(Meta {
        tool: "lifexp".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        config_digest: cfg.digest()?,
    })
}

fn load_report_or_default(cfg: &PipelineConfig) -> Result<RunReport> {
    let path = report_path(cfg);
    if path.exists() {
        parse_report(&fs::read_to_string(&path)?)
    } else {
        Ok(RunReport::default())
    }
}

fn store_report(cfg: &PipelineConfig, report: &RunReport) -> Result<()> {
    fs::create_dir_all(&cfg.out_dir)?;
    fs::write(report_path(cfg), emit_report(report)?)?;
    Ok(())
}

fn load_timings(cfg: &PipelineConfig) -> TimingsFile {
    fs::read_to_string(timings_path(cfg))
        .ok()
        .and_then(|text| serde_json::from_str(&text).ok())
        .unwrap_or_default()
}

fn store_timings(cfg: &PipelineConfig, timings: &TimingsFile) -> Result<()> {
    fs::create_dir_all(&cfg.out_dir)?;
    let text = serde_json::to_string_pretty(timings)
        .map_err(|e| Error::Config(format!("timings serialization: {e}")))?;
    fs::write(timings_path(cfg), text + "\n")?;
    Ok(())
}

fn upsert_timing(timings: &mut TimingsFile, entry: ModelTiming) {
    match timings.models.iter_mut().find(|m| m.model == entry.model) {
        Some(slot) => *slot = entry,
        None => timings.models.push(entry),
    }
}

/// Loads the cleaned dataset produced by the preprocess stage.
pub fn load_clean_table(cfg: &PipelineConfig) -> Result<Table> {
    let path = clean_path(cfg);
    let file = fs::File::open(&path).map_err(|_| {
        Error::Config(format!(
            "cleaned dataset {} not found; run the preprocess stage first",
            path.display()
        ))
    })?;
    let tokens = cfg.missing_tokens.iter().cloned().collect();
    read_csv(file, &tokens)
}

/// `preprocess` subcommand: clean the input and write `clean.csv` plus the
/// preprocessing report fragment. Nothing is written if any stage fails.
pub fn cmd_preprocess(cfg: &PipelineConfig) -> Result<()> {
    let (table, section) = preprocess(cfg)?;
    fs::create_dir_all(&cfg.out_dir)?;
    let mut buf = Vec::new();
    write_csv(&table, &mut buf)?;
    fs::write(clean_path(cfg), buf)?;

    let mut report = load_report_or_default(cfg)?;
    report.meta = Some(meta_for(cfg)?);
    report.preprocess = Some(section);
    store_report(cfg, &report)
}

/// `explore` subcommand.
pub fn cmd_explore(cfg: &PipelineConfig) -> Result<()> {
    let table = load_clean_table(cfg)?;
    let section = explore(cfg, &table)?;
    let mut report = load_report_or_default(cfg)?;
    report.meta = Some(meta_for(cfg)?);
    report.explore = Some(section);
    store_report(cfg, &report)
}

/// `cluster` subcommand.
pub fn cmd_cluster(cfg: &PipelineConfig) -> Result<()> {
    let table = load_clean_table(cfg)?;
    let section = cluster(cfg, &table)?;
    let mut report = load_report_or_default(cfg)?;
    report.meta = Some(meta_for(cfg)?);
    report.clustering = Some(section);
    store_report(cfg, &report)
}

/// `train` subcommand.
pub fn cmd_train(cfg: &PipelineConfig, choice: ModelChoice) -> Result<()> {
    let table = load_clean_table(cfg)?;
    let mut report = load_report_or_default(cfg)?;
    let prior_best = report
        .models
        .as_ref()
        .and_then(|m| m.tree.as_ref())
        .map(|t| t.best_params.clone());

    let outcome = train(cfg, &table, choice, prior_best.as_ref())?;

    let mut models = report.models.take().unwrap_or(ModelsSection {
        lr: None,
        tree: None,
        forest: None,
        comparison: vec![],
    });
    let mut timings = load_timings(cfg);
    if let Some((block, timing)) = outcome.lr {
        models.lr = Some(block);
        upsert_timing(&mut timings, timing);
    }
    if let Some((block, timing)) = outcome.tree {
        models.tree = Some(block);
        upsert_timing(&mut timings, timing);
    }
    if let Some((block, timing)) = outcome.forest {
        models.forest = Some(block);
        upsert_timing(&mut timings, timing);
    }
    models.comparison = comparison_rows(&models);

    report.meta = Some(meta_for(cfg)?);
    report.models = Some(models);
    store_report(cfg, &report)?;
    store_timings(cfg, &timings)
}

/// `report` subcommand: render the chart suite from `report.json`.
pub fn cmd_report(cfg: &PipelineConfig) -> Result<()> {
    let path = report_path(cfg);
    if !path.exists() {
        return Err(Error::Config(format!(
            "{} not found; run earlier stages first",
            path.display()
        )));
    }
    let report = parse_report(&fs::read_to_string(&path)?)?;
    for (name, content) in standard_chart_suite(&report)? {
        fs::write(cfg.out_dir.join(name), content)?;
    }
    Ok(())
}

/// `pipeline` subcommand: every stage in order.
pub fn cmd_pipeline(cfg: &PipelineConfig) -> Result<()> {
    let start = Instant::now();
    cmd_preprocess(cfg)?;
    cmd_explore(cfg)?;
    cmd_cluster(cfg)?;
    cmd_train(cfg, ModelChoice::All)?;
    cmd_report(cfg)?;
    let mut timings = load_timings(cfg);
    timings.pipeline_seconds = start.elapsed().as_secs_f64();
    store_timings(cfg, &timings)
}

/// Resolves a path relative to the workspace root, for examples and tests
/// that run from the crate directory.
pub fn workspace_path(relative: &str) -> PathBuf {
    let here = Path::new(env!("CARGO_MANIFEST_DIR"));
    let root = here
        .ancestors()
        .find(|p| p.join("data").is_dir())
        .unwrap_or(here);
    root.join(relative)
}
