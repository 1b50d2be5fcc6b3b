//! The serializable run report and its deterministic JSON emission.
//!
//! `report.json` must be byte-identical across same-seed runs, so the
//! emitter uses struct-declaration key order, 17-significant-digit float
//! formatting (enough to round-trip any f64), and no wall-clock content.
//! Measured timings live in a separate sidecar file instead.

use std::io;

use serde::ser::{self, Impossible};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{MetricSet, TimingReport};
use crate::tabular::RuleReport;
use crate::unsupervised::GridCell;

/// Pipeline identification and configuration digest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub config_digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageCount {
    pub stage: String,
    pub rows: usize,
    pub columns: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessSection {
    pub stage_counts: Vec<StageCount>,
    pub dropped_features: Vec<String>,
    pub rule_report: RuleReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedHistogram {
    pub name: String,
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationBlock {
    pub names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub zero_variance: Vec<String>,
}

/// One ANOVA run. An infinite F statistic (zero within-group variance) is
/// flagged rather than stored, keeping every serialized number finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnovaResult {
    pub values_column: String,
    pub groups_column: String,
    pub group_count: usize,
    pub f: Option<f64>,
    pub f_infinite: bool,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExploreSection {
    pub histogram_bins: usize,
    pub histograms: Vec<NamedHistogram>,
    pub feature_correlations: CorrelationBlock,
    pub target_correlations: Vec<NamedValue>,
    pub anova: Vec<AnovaResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub k: usize,
    pub silhouette: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaSection {
    pub explained_variance: Vec<f64>,
    pub points: Vec<[f64; 2]>,
    pub labels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringSection {
    pub grid: Vec<GridCell>,
    pub winner: GridCell,
    pub silhouette_curve: Vec<CurvePoint>,
    pub pca: PcaSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub name: String,
    pub coefficient: f64,
    pub std_error: f64,
    pub t_stat: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrBlock {
    pub dropped_collinear: Vec<String>,
    pub coefficients: Vec<CoefficientRow>,
    pub alpha: f64,
    pub significant_features: Vec<String>,
    pub train_metrics: MetricSet,
    pub test_metrics: MetricSet,
    pub test_actual: Vec<f64>,
    pub test_predicted: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParamsJson {
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub min_samples_split: usize,
    pub ccp_alpha: f64,
    pub criterion: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeGridRow {
    pub params: TreeParamsJson,
    pub fold_r2: Vec<f64>,
    pub mean_r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeBlock {
    pub grid: Vec<TreeGridRow>,
    pub best_params: TreeParamsJson,
    pub cv_r2: f64,
    pub depth: usize,
    pub n_leaves: usize,
    pub train_metrics: MetricSet,
    pub test_metrics: MetricSet,
    pub test_actual: Vec<f64>,
    pub test_predicted: Vec<f64>,
    pub importances: Vec<NamedValue>,
    pub text_render: String,
    pub dot: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestParamsJson {
    pub n_trees: usize,
    pub max_features: String,
    pub bootstrap: bool,
    pub min_samples_split: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestGridRow {
    pub params: ForestParamsJson,
    pub fold_r2: Vec<f64>,
    pub mean_r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestBlock {
    pub grid: Vec<ForestGridRow>,
    pub best_params: ForestParamsJson,
    pub cv_r2: f64,
    pub train_metrics: MetricSet,
    pub test_metrics: MetricSet,
    pub test_actual: Vec<f64>,
    pub test_predicted: Vec<f64>,
    pub importances: Vec<NamedValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model: String,
    pub r2: f64,
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelsSection {
    pub lr: Option<LrBlock>,
    pub tree: Option<TreeBlock>,
    pub forest: Option<ForestBlock>,
    pub comparison: Vec<ComparisonRow>,
}

/// The full run record; sections fill in as pipeline stages execute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct RunReport {
    pub meta: Option<Meta>,
    pub preprocess: Option<PreprocessSection>,
    pub explore: Option<ExploreSection>,
    pub clustering: Option<ClusteringSection>,
    pub models: Option<ModelsSection>,
}

/// Wall-clock measurements, written beside the report (`timings.json`) so
/// `report.json` stays reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelTiming {
    pub model: String,
    /// For grid-searched models this covers the whole search plus refit.
    pub fit_seconds: f64,
    pub predict_seconds_total: f64,
    pub predict_seconds_per_sample: f64,
    pub repeats: usize,
}

impl ModelTiming {
    pub fn from_reports(model: &str, fit: TimingReport, predict: TimingReport) -> Self {
        ModelTiming {
            model: model.to_string(),
            fit_seconds: fit.fit_seconds,
            predict_seconds_total: predict.predict_seconds_total,
            predict_seconds_per_sample: predict.predict_seconds_per_sample,
            repeats: fit.repeats,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct TimingsFile {
    pub models: Vec<ModelTiming>,
    pub pipeline_seconds: f64,
}

/// Serializes the report: UTF-8 JSON, keys in declaration order, every f64
/// printed with 17 significant digits. Identical reports yield identical
/// bytes. Any non-finite number aborts with its field path.
pub fn emit_report(report: &RunReport) -> Result<String> {
    check_finite(report)?;
    to_json_17(report)
}

/// Parses a previously emitted report.
pub fn parse_report(text: &str) -> Result<RunReport> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("report.json: {e}")))
}

/// JSON with 17-significant-digit floats for any serializable value.
pub(crate) fn to_json_17<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut serializer)
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| Error::Config(format!("non-utf8 output: {e}")))
}

/// serde_json formatter printing every float as `{:.16e}` — one leading
/// digit plus sixteen fractional digits, i.e. 17 significant digits, which
/// uniquely identifies any finite f64.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if !value.is_finite() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                "non-finite number in report",
            ));
        }
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.write_f64(writer, value as f64)
    }
}

/// Validates that every float in a serializable tree is finite, reporting
/// the dotted field path of the first offender.
pub(crate) fn check_finite<T: Serialize>(value: &T) -> Result<()> {
    let mut path = Vec::new();
    match value.serialize(FiniteGuard { path: &mut path }) {
        Ok(()) => Ok(()),
        Err(PathError(path)) => Err(Error::NonFinite { path }),
    }
}

/// Error carrying the dotted path to a non-finite number.
#[derive(Debug)]
struct PathError(String);

impl std::fmt::Display for PathError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "non-finite number at {}", self.0)
    }
}

impl std::error::Error for PathError {}

impl ser::Error for PathError {
    fn custom<T: std::fmt::Display>(msg: T) -> Self {
        PathError(msg.to_string())
    }
}

/// A serializer that only walks the value tree looking for non-finite
/// floats, maintaining the path of the element under inspection.
struct FiniteGuard<'a> {
    path: &'a mut Vec<String>,
}

impl FiniteGuard<'_> {
    fn fail(&self) -> PathError {
        PathError(if self.path.is_empty() {
            "<root>".to_string()
        } else {
            self.path.join(".")
        })
    }
}

macro_rules! ok_scalar {
    ($($method:ident: $ty:ty),* $(,)?) => {
        $(fn $method(self, _v: $ty) -> std::result::Result<(), PathError> { Ok(()) })*
    };
}

impl<'a> ser::Serializer for FiniteGuard<'a> {
    type Ok = ();
    type Error = PathError;
    type SerializeSeq = FiniteCompound<'a>;
    type SerializeTuple = FiniteCompound<'a>;
    type SerializeTupleStruct = FiniteCompound<'a>;
    type SerializeTupleVariant = FiniteCompound<'a>;
    type SerializeMap = FiniteCompound<'a>;
    type SerializeStruct = FiniteCompound<'a>;
    type SerializeStructVariant = FiniteCompound<'a>;

    ok_scalar! {
        serialize_bool: bool,
        serialize_i8: i8, serialize_i16: i16, serialize_i32: i32, serialize_i64: i64,
        serialize_u8: u8, serialize_u16: u16, serialize_u32: u32, serialize_u64: u64,
        serialize_char: char,
        serialize_str: &str,
        serialize_bytes: &[u8],
    }

    fn serialize_f64(self, v: f64) -> std::result::Result<(), PathError> {
        if v.is_finite() {
            Ok(())
        } else {
            Err(self.fail())
        }
    }

    fn serialize_f32(self, v: f32) -> std::result::Result<(), PathError> {
        self.serialize_f64(v as f64)
    }

    fn serialize_none(self) -> std::result::Result<(), PathError> {
        Ok(())
    }

    fn serialize_some<T: Serialize + ?Sized>(
        self,
        value: &T,
    ) -> std::result::Result<(), PathError> {
        value.serialize(FiniteGuard { path: self.path })
    }

    fn serialize_unit(self) -> std::result::Result<(), PathError> {
        Ok(())
    }

    fn serialize_unit_struct(self, _name: &'static str) -> std::result::Result<(), PathError> {
        Ok(())
    }

    fn serialize_unit_variant(
        self,
        _name: &'static str,
        _index: u32,
        _variant: &'static str,
    ) -> std::result::Result<(), PathError> {
        Ok(())
    }

    fn serialize_newtype_struct<T: Serialize + ?Sized>(
        self,
        _name: &'static str,
        value: &T,
    ) -> std::result::Result<(), PathError> {
        value.serialize(FiniteGuard { path: self.path })
    }

    fn serialize_newtype_variant<T: Serialize + ?Sized>(
        self,
        _name: &'static str,
        _index: u32,
        variant: &'static str,
        value: &T,
    ) -> std::result::Result<(), PathError> {
        self.path.push(variant.to_string());
        let r = value.serialize(FiniteGuard { path: self.path });
        self.path.pop();
        r
    }

    fn serialize_seq(
        self,
        _len: Option<usize>,
    ) -> std::result::Result<Self::SerializeSeq, PathError> {
        Ok(FiniteCompound {
            path: self.path,
            index: 0,
            pop_variant: false,
        })
    }

    fn serialize_tuple(self, len: usize) -> std::result::Result<Self::SerializeTuple, PathError> {
        self.serialize_seq(Some(len))
    }

    fn serialize_tuple_struct(
        self,
        _name: &'static str,
        len: usize,
    ) -> std::result::Result<Self::SerializeTupleStruct, PathError> {
        self.serialize_seq(Some(len))
    }

    fn serialize_tuple_variant(
        self,
        _name: &'static str,
        _index: u32,
        variant: &'static str,
        _len: usize,
    ) -> std::result::Result<Self::SerializeTupleVariant, PathError> {
        self.path.push(variant.to_string());
        Ok(FiniteCompound {
            path: self.path,
            index: 0,
            pop_variant: true,
        })
    }

    fn serialize_map(
        self,
        _len: Option<usize>,
    ) -> std::result::Result<Self::SerializeMap, PathError> {
        Ok(FiniteCompound {
            path: self.path,
            index: 0,
            pop_variant: false,
        })
    }

    fn serialize_struct(
        self,
        _name: &'static str,
        _len: usize,
    ) -> std::result::Result<Self::SerializeStruct, PathError> {
        Ok(FiniteCompound {
            path: self.path,
            index: 0,
            pop_variant: false,
        })
    }

    fn serialize_struct_variant(
        self,
        _name: &'static str,
        _index: u32,
        variant: &'static str,
        _len: usize,
    ) -> std::result::Result<Self::SerializeStructVariant, PathError> {
        self.path.push(variant.to_string());
        Ok(FiniteCompound {
            path: self.path,
            index: 0,
            pop_variant: true,
        })
    }
}

struct FiniteCompound<'a> {
    path: &'a mut Vec<String>,
    index: usize,
    pop_variant: bool,
}

impl FiniteCompound<'_> {
    fn finish(self) -> std::result::Result<(), PathError> {
        if self.pop_variant {
            self.path.pop();
        }
        Ok(())
    }
}

impl ser::SerializeSeq for FiniteCompound<'_> {
    type Ok = ();
    type Error = PathError;

    fn serialize_element<T: Serialize + ?Sized>(
        &mut self,
        value: &T,
    ) -> std::result::Result<(), PathError> {
        self.path.push(self.index.to_string());
        self.index += 1;
        let r = value.serialize(FiniteGuard { path: self.path });
        self.path.pop();
        r
    }

    fn end(self) -> std::result::Result<(), PathError> {
        self.finish()
    }
}

impl ser::SerializeTuple for FiniteCompound<'_> {
    type Ok = ();
    type Error = PathError;

    fn serialize_element<T: Serialize + ?Sized>(
        &mut self,
        value: &T,
    ) -> std::result::Result<(), PathError> {
        ser::SerializeSeq::serialize_element(self, value)
    }

    fn end(self) -> std::result::Result<(), PathError> {
        self.finish()
    }
}

impl ser::SerializeTupleStruct for FiniteCompound<'_> {
    type Ok = ();
    type Error = PathError;

    fn serialize_field<T: Serialize + ?Sized>(
        &mut self,
        value: &T,
    ) -> std::result::Result<(), PathError> {
        ser::SerializeSeq::serialize_element(self, value)
    }

    fn end(self) -> std::result::Result<(), PathError> {
        self.finish()
    }
}

impl ser::SerializeTupleVariant for FiniteCompound<'_> {
    type Ok = ();
    type Error = PathError;

    fn serialize_field<T: Serialize + ?Sized>(
        &mut self,
        value: &T,
    ) -> std::result::Result<(), PathError> {
        ser::SerializeSeq::serialize_element(self, value)
    }

    fn end(self) -> std::result::Result<(), PathError> {
        self.finish()
    }
}

impl ser::SerializeMap for FiniteCompound<'_> {
    type Ok = ();
    type Error = PathError;

    fn serialize_key<T: Serialize + ?Sized>(
        &mut self,
        key: &T,
    ) -> std::result::Result<(), PathError> {
        // Track string keys so map entries get readable paths.
        self.path.push(render_key(key));
        Ok(())
    }

    fn serialize_value<T: Serialize + ?Sized>(
        &mut self,
        value: &T,
    ) -> std::result::Result<(), PathError> {
        let r = value.serialize(FiniteGuard { path: self.path });
        self.path.pop();
        r
    }

    fn end(self) -> std::result::Result<(), PathError> {
        self.finish()
    }
}

impl ser::SerializeStruct for FiniteCompound<'_> {
    type Ok = ();
    type Error = PathError;

    fn serialize_field<T: Serialize + ?Sized>(
        &mut self,
        key: &'static str,
        value: &T,
    ) -> std::result::Result<(), PathError> {
        self.path.push(key.to_string());
        let r = value.serialize(FiniteGuard { path: self.path });
        self.path.pop();
        r
    }

    fn end(self) -> std::result::Result<(), PathError> {
        self.finish()
    }
}

impl ser::SerializeStructVariant for FiniteCompound<'_> {
    type Ok = ();
    type Error = PathError;

    fn serialize_field<T: Serialize + ?Sized>(
        &mut self,
        key: &'static str,
        value: &T,
    ) -> std::result::Result<(), PathError> {
        ser::SerializeStruct::serialize_field(self, key, value)
    }

    fn end(self) -> std::result::Result<(), PathError> {
        self.finish()
    }
}

/// Renders a map key as a path segment; string and integer keys pass
/// through, anything exotic becomes a placeholder.
fn render_key<T: Serialize + ?Sized>(key: &T) -> String {
    struct Capture;
    macro_rules! to_string_scalar {
        ($($method:ident: $ty:ty),* $(,)?) => {
            $(fn $method(self, v: $ty) -> std::result::Result<String, PathError> { Ok(v.to_string()) })*
        };
    }
    impl ser::Serializer for Capture {
        type Ok = String;
        type Error = PathError;
        type SerializeSeq = Impossible<String, PathError>;
        type SerializeTuple = Impossible<String, PathError>;
        type SerializeTupleStruct = Impossible<String, PathError>;
        type SerializeTupleVariant = Impossible<String, PathError>;
        type SerializeMap = Impossible<String, PathError>;
        type SerializeStruct = Impossible<String, PathError>;
        type SerializeStructVariant = Impossible<String, PathError>;

        to_string_scalar! {
            serialize_bool: bool,
            serialize_i8: i8, serialize_i16: i16, serialize_i32: i32, serialize_i64: i64,
            serialize_u8: u8, serialize_u16: u16, serialize_u32: u32, serialize_u64: u64,
            serialize_f32: f32, serialize_f64: f64,
            serialize_char: char,
        }

        fn serialize_str(self, v: &str) -> std::result::Result<String, PathError> {
            Ok(v.to_string())
        }

        fn serialize_bytes(self, _v: &[u8]) -> std::result::Result<String, PathError> {
            Ok("<bytes>".into())
        }

        fn serialize_none(self) -> std::result::Result<String, PathError> {
            Ok("<none>".into())
        }

        fn serialize_some<T: Serialize + ?Sized>(
            self,
            value: &T,
        ) -> std::result::Result<String, PathError> {
            value.serialize(Capture)
        }

        fn serialize_unit(self) -> std::result::Result<String, PathError> {
            Ok("<unit>".into())
        }

        fn serialize_unit_struct(self, name: &'static str) -> std::result::Result<String, PathError> {
            Ok(name.into())
        }

        fn serialize_unit_variant(
            self,
            _name: &'static str,
            _index: u32,
            variant: &'static str,
        ) -> std::result::Result<String, PathError> {
            Ok(variant.into())
        }

        fn serialize_newtype_struct<T: Serialize + ?Sized>(
            self,
            _name: &'static str,
            value: &T,
        ) -> std::result::Result<String, PathError> {
            value.serialize(Capture)
        }

        fn serialize_newtype_variant<T: Serialize + ?Sized>(
            self,
            _name: &'static str,
            _index: u32,
            variant: &'static str,
            _value: &T,
        ) -> std::result::Result<String, PathError> {
            Ok(variant.into())
        }

        fn serialize_seq(
            self,
            _len: Option<usize>,
        ) -> std::result::Result<Self::SerializeSeq, PathError> {
            Err(ser::Error::custom("sequence key"))
        }

        fn serialize_tuple(
            self,
            _len: usize,
        ) -> std::result::Result<Self::SerializeTuple, PathError> {
            Err(ser::Error::custom("tuple key"))
        }

        fn serialize_tuple_struct(
            self,
            _name: &'static str,
            _len: usize,
        ) -> std::result::Result<Self::SerializeTupleStruct, PathError> {
            Err(ser::Error::custom("tuple key"))
        }

        fn serialize_tuple_variant(
            self,
            _name: &'static str,
            _index: u32,
            _variant: &'static str,
            _len: usize,
        ) -> std::result::Result<Self::SerializeTupleVariant, PathError> {
            Err(ser::Error::custom("tuple key"))
        }

        fn serialize_map(
            self,
            _len: Option<usize>,
        ) -> std::result::Result<Self::SerializeMap, PathError> {
            Err(ser::Error::custom("map key"))
        }

        fn serialize_struct(
            self,
            _name: &'static str,
            _len: usize,
        ) -> std::result::Result<Self::SerializeStruct, PathError> {
            Err(ser::Error::custom("struct key"))
        }

        fn serialize_struct_variant(
            self,
            _name: &'static str,
            _index: u32,
            _variant: &'static str,
            _len: usize,
        ) -> std::result::Result<Self::SerializeStructVariant, PathError> {
            Err(ser::Error::custom("struct key"))
        }
    }
    key.serialize(Capture).unwrap_or_else(|_| "<key>".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_report() -> RunReport {
        RunReport {
            meta: Some(Meta {
                tool: "lifexp".into(),
                version: "0.1.0".into(),
                seed: 42,
                config_digest: "abc123".into(),
            }),
            preprocess: None,
            explore: Some(ExploreSection {
                histogram_bins: 20,
                histograms: vec![NamedHistogram {
                    name: "x".into(),
                    bin_edges: vec![0.0, 0.5, 1.0],
                    counts: vec![3, 4],
                }],
                feature_correlations: CorrelationBlock {
                    names: vec!["a".into(), "b".into()],
                    rows: vec![vec![1.0, 0.25], vec![0.25, 1.0]],
                    zero_variance: vec![],
                },
                target_correlations: vec![NamedValue {
                    name: "a".into(),
                    value: -0.5,
                }],
                anova: vec![],
            }),
            clustering: None,
            models: None,
        }
    }

    #[test]
    fn emit_parse_emit_is_byte_identical() {
        let report = tiny_report();
        let first = emit_report(&report).unwrap();
        let parsed = parse_report(&first).unwrap();
        let second = emit_report(&parsed).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn identical_reports_identical_documents() {
        let a = emit_report(&tiny_report()).unwrap();
        let b = emit_report(&tiny_report()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_finite_rejected_with_field_path() {
        let mut report = tiny_report();
        report.explore.as_mut().unwrap().target_correlations[0].value = f64::NAN;
        match emit_report(&report) {
            Err(Error::NonFinite { path }) => {
                assert_eq!(path, "explore.target_correlations.0.value");
            }
            other => panic!("expected non-finite rejection, got {other:?}"),
        }
    }

    #[test]
    fn floats_use_17_significant_digits() {
        let text = emit_report(&tiny_report()).unwrap();
        assert!(text.contains("2.5000000000000000e-1"), "{text}");
        assert!(text.contains("-5.0000000000000000e-1"));
    }

    #[test]
    fn seventeen_digits_round_trip_every_float() {
        // Spot-check tricky values.
        for &v in &[
            std::f64::consts::PI,
            1.0 / 3.0,
            f64::MIN_POSITIVE,
            1e300,
            -2.2250738585072014e-308,
            0.1 + 0.2,
        ] {
            let s = format!("{v:.16e}");
            let back: f64 = s.parse().unwrap();
            assert_eq!(v, back, "{s}");
        }
    }
}
