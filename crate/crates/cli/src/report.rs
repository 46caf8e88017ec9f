//! Machine-readable reports.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sgs_core::sparseness::{CheegerCertificate, SparsenessCertificate, ThresholdCertificate};
use sgs_core::SubsetStats;
use sha2::{Digest, Sha256};

use crate::graph_file::LoadedGraph;

/// A JSON number, or the strings `"inf"`, `"-inf"`, `"nan"` for values JSON
/// cannot carry.
pub fn num(v: f64) -> Value {
    if v.is_nan() {
        json!("nan")
    } else if v == f64::INFINITY {
        json!("inf")
    } else if v == f64::NEG_INFINITY {
        json!("-inf")
    } else {
        json!(v)
    }
}

/// Inverse of [`num`].
pub fn read_num(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            "nan" => Some(f64::NAN),
            _ => None,
        },
        _ => None,
    }
}

pub fn nums(vs: &[f64]) -> Value {
    Value::Array(vs.iter().map(|&v| num(v)).collect())
}

pub fn hex_sha256(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDigest {
    pub path: String,
    pub vertices: usize,
    pub edges: usize,
    /// SHA-256 of the file bytes.
    pub sha256: String,
    /// SHA-256 of the vertex ids in file order, newline-separated.
    pub id_map_sha256: String,
}

impl GraphDigest {
    pub fn new(path: &str, bytes: &[u8], g: &LoadedGraph) -> Self {
        let ids: Vec<&str> = g.file.vertices.iter().map(|v| v.id.as_str()).collect();
        GraphDigest {
            path: path.to_string(),
            vertices: g.graph.vertex_count(),
            edges: g.graph.edge_count(),
            sha256: hex_sha256(bytes),
            id_map_sha256: hex_sha256(ids.join("\n").as_bytes()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub id: String,
    pub margin: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub suite: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub command: Vec<String>,
    pub graph: GraphDigest,
    pub results: Value,
    /// Every checked inequality, as a value that is `≥ 0` when it holds.
    pub margins: Vec<Margin>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<Skipped>,
    pub tolerances: Map<String, Value>,
    pub wall_clock_s: f64,
}

impl ReportFile {
    /// Margins below `-tol`; NaN margins count as failures.
    pub fn failures(&self, tol: f64) -> Vec<&Margin> {
        self.margins
            .iter()
            .filter(|m| !matches!(read_num(&m.margin), Some(v) if v >= -tol))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Collects margins and skipped suites while a command runs.
#[derive(Debug, Default)]
pub struct Ledger {
    pub margins: Vec<Margin>,
    pub skipped: Vec<Skipped>,
}

impl Ledger {
    pub fn record(&mut self, id: impl Into<String>, margin: f64) {
        self.margins.push(Margin {
            id: id.into(),
            margin: num(margin),
        });
    }

    pub fn skip(&mut self, suite: &str, reason: &str) {
        self.skipped.push(Skipped {
            suite: suite.into(),
            reason: reason.into(),
        });
    }
}

pub fn stats_json(s: &SubsetStats) -> Value {
    json!({
        "size": s.size,
        "induced_edges": s.induced_edges,
        "boundary": s.boundary,
        "degree_sum": s.degree_sum,
        "q_sum": num(s.q_sum),
        "q_plus_sum": num(s.q_plus_sum),
    })
}

pub fn sparseness_json(g: &LoadedGraph, c: &SparsenessCertificate) -> Value {
    json!({
        "a": num(c.a),
        "k": num(c.k),
        "ratio": num(c.ratio),
        "clamped": c.clamped,
        "witness": g.ids(&c.witness),
        "stats": stats_json(&c.stats),
    })
}

pub fn threshold_json(g: &LoadedGraph, c: &ThresholdCertificate) -> Value {
    json!({
        "value": num(c.value),
        "witness": g.ids(&c.witness),
        "stats": stats_json(&c.stats),
    })
}

pub fn cheeger_json(g: &LoadedGraph, c: &CheegerCertificate) -> Value {
    json!({
        "alpha": num(c.ratio),
        "witness": g.ids(&c.witness),
        "stats": stats_json(&c.stats),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_numbers_round_trip() {
        for v in [1.5, f64::INFINITY, f64::NEG_INFINITY] {
            assert_eq!(read_num(&num(v)), Some(v));
        }
        assert!(read_num(&num(f64::NAN)).unwrap().is_nan());
    }

    #[test]
    fn failures_respect_tolerance() {
        let mut ledger = Ledger::default();
        ledger.record("ok", -1e-12);
        ledger.record("bad", -1e-3);
        ledger.record("nan", f64::NAN);
        let r = ReportFile {
            command: Vec::new(),
            graph: GraphDigest {
                path: String::new(),
                vertices: 0,
                edges: 0,
                sha256: String::new(),
                id_map_sha256: String::new(),
            },
            results: Value::Null,
            margins: ledger.margins,
            skipped: Vec::new(),
            tolerances: Map::new(),
            wall_clock_s: 0.0,
        };
        let ids: Vec<&str> = r.failures(1e-9).iter().map(|m| m.id.as_str()).collect();
        assert_eq!(ids, ["bad", "nan"]);
    }

    #[test]
    fn digest_is_lowercase_hex() {
        assert_eq!(
            hex_sha256(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
