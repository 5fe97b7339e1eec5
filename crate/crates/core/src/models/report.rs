use std::fmt::Write;

use num_bigint::BigInt;
use serde::Serialize;

use crate::certificates::{InvariantCombination, MonitoringReport, RigidityCertificate, ScalarMonitor};
use crate::complex::SimplicialSurface;
use crate::flex::FlexPath;
use crate::geometry::{edge_lengths, oriented_volume, weighted_sum};
use crate::lengths::{serialize_big_ints, IndependenceVerdict};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CombinationEntry {
    pub label: String,
    #[serde(serialize_with = "serialize_big_ints")]
    pub coeffs: Vec<BigInt>,
    pub constant: f64,
    /// Absent when no flex was traced.
    pub max_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Monitors {
    pub samples: usize,
    pub volume: ScalarMonitor,
    pub weighted_angle_sum: ScalarMonitor,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub format_version: u32,
    pub model: String,
    pub verdict: &'static str,
    pub mode: &'static str,
    pub evidence: IndependenceVerdict,
    #[serde(serialize_with = "serialize_relations")]
    pub relations: Vec<Vec<BigInt>>,
    /// Edge names "a_b".
    pub constant_angle_edges: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<&'static str>,
    pub combinations: Vec<CombinationEntry>,
    pub monitors: Option<Monitors>,
    /// Command-specific additions (trace outcome and the like).
    #[serde(flatten)]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

fn serialize_relations<S: serde::Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    struct Row<'a>(&'a [BigInt]);
    impl Serialize for Row<'_> {
        fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            serialize_big_ints(self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&Row(r))?;
    }
    seq.end()
}

impl Report {
    pub fn new(
        model: &str,
        surface: &SimplicialSurface,
        certificate: &RigidityCertificate,
        combinations: &[InvariantCombination],
        monitoring: Option<&MonitoringReport>,
    ) -> Self {
        let combinations = combinations
            .iter()
            .enumerate()
            .map(|(j, c)| CombinationEntry {
                label: c.label.clone(),
                coeffs: c.coeffs.clone(),
                constant: c.claimed_constant,
                max_deviation: monitoring.and_then(|m| m.combinations.get(j)).map(|d| d.max_deviation),
            })
            .collect();
        Self {
            format_version: FORMAT_VERSION,
            model: model.to_string(),
            verdict: certificate.verdict.name(),
            mode: certificate.mode,
            evidence: certificate.evidence.clone(),
            relations: certificate.relations(),
            constant_angle_edges: certificate
                .constant_angle_edges
                .iter()
                .map(|&e| surface.edges()[e].to_string())
                .collect(),
            caveat: certificate.caveat,
            combinations,
            monitors: monitoring.map(|m| Monitors {
                samples: m.samples,
                volume: m.volume.clone(),
                weighted_angle_sum: m.weighted_angle_sum.clone(),
            }),
            extra: serde_json::Map::new(),
        }
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn save_report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// One row per sample: t, lifted angle per edge, oriented volume and
/// Σ ℓ_σ·φ̃_σ, at 17 significant digits.
pub fn save_series_csv(path: &FlexPath) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# format_version: {FORMAT_VERSION}");
    let mut header = vec!["t".to_string()];
    header.extend(path.surface.edges().iter().map(|e| format!("phi_{e}")));
    header.push("volume".into());
    header.push("weighted_angle_sum".into());
    let _ = writeln!(out, "{}", header.join(","));
    for (k, s) in path.samples.iter().enumerate() {
        let p = path.polyhedron_at(k);
        let mut row = vec![s.t];
        row.extend(&s.lifted);
        row.push(oriented_volume(&p));
        row.push(weighted_sum(&edge_lengths(&p), &s.lifted));
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}
