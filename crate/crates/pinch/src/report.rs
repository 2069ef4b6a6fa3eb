//! Machine-readable verification reports.
//!
//! Every certified property of a run appears exactly once, with its measured
//! residual and the fixed tolerance it was held to. Reports are fully
//! deterministic: entries are sorted by id, floats serialize shortest
//! round-trip, and no wall-clock data is included, so identical config and
//! seed produce a bit-identical report.json.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub id: String,
    pub property: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl PropertyResult {
    pub fn new(id: &str, property: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            id: id.to_string(),
            property: property.to_string(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: String,
    pub construction: String,
    pub config_hash: String,
    pub seed: u64,
    pub pass: bool,
    pub properties: Vec<PropertyResult>,
}

impl VerificationReport {
    pub fn new(construction: &str, config_hash: String, seed: u64) -> Self {
        Self {
            schema: "pinch-report/1".to_string(),
            construction: construction.to_string(),
            config_hash,
            seed,
            pass: true,
            properties: Vec::new(),
        }
    }

    /// Installs the results sorted by id and computes the verdict.
    pub fn finish(mut self, mut results: Vec<PropertyResult>) -> Self {
        results.sort_by(|a, b| a.id.cmp(&b.id));
        self.pass = results.iter().all(|r| r.pass);
        self.properties = results;
        self
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    /// One console line per property.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for p in &self.properties {
            out.push_str(&format!(
                "{} {:<34} residual {:>12.4e}  tol {:>9.2e}  ({})\n",
                if p.pass { "PASS" } else { "FAIL" },
                p.id,
                p.residual,
                p.tolerance,
                p.property,
            ));
        }
        out.push_str(&format!(
            "{}: {} properties, {}\n",
            self.construction,
            self.properties.len(),
            if self.pass { "all passed" } else { "FAILURES" }
        ));
        out
    }
}
