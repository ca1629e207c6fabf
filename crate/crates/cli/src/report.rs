//! Machine-readable run reports: JSON (default) and CSV.
//!
//! Every float is rounded to six significant digits before serialization so
//! repeated runs in exact post-selection mode produce byte-identical output.

use serde::{Deserialize, Serialize};

pub const CSV_HEADER: &str =
    "query_id,v,h,classical_decision,quantum_expectation_re,classical_label,quantum_label,agree";

#[derive(Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub config: ConfigEcho,
    pub kernel: KernelReport,
    pub training: TrainingReport,
    pub queries: Vec<QueryRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub gamma: f64,
    pub phase_qubits: usize,
    pub t0: f64,
    pub inversion_constant: f64,
    pub postselect: String,
    pub preset: String,
    pub format: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct KernelReport {
    /// Trace-normalized kernel from the simulated discard circuit.
    pub ideal: Vec<Vec<f64>>,
    /// Reference tomography measurement (reproduce mode only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_abs_deviation: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TrainingReport {
    pub offset: f64,
    pub alphas: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct QueryRecord {
    pub id: String,
    pub features: Features,
    pub classical_decision: f64,
    pub quantum_expectation_re: f64,
    pub quantum_expectation_im: f64,
    pub classical_label: String,
    pub quantum_label: String,
    pub agree: bool,
    pub postselect_probability: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Features {
    pub v: f64,
    pub h: f64,
}

/// Output of the `features` subcommand.
#[derive(Debug, Serialize, Deserialize)]
pub struct FeaturesReport {
    pub image: String,
    pub preset: String,
    pub raw: Features,
    pub converted: Features,
}

/// Round to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(digits - 1 - magnitude);
    (x * factor).round() / factor
}

pub fn round6(x: f64) -> f64 {
    round_sig(x, 6)
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for q in &self.queries {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                q.id,
                fmt_float(q.features.v),
                fmt_float(q.features.h),
                fmt_float(q.classical_decision),
                fmt_float(q.quantum_expectation_re),
                q.classical_label,
                q.quantum_label,
                q.agree
            ));
        }
        out
    }
}

/// Shortest round-trip representation, matching the JSON encoding.
fn fmt_float(x: f64) -> String {
    serde_json::to_string(&x).expect("finite float")
}
