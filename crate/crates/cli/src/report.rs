//! Machine- and human-readable renderings of solver output.
//!
//! Exact rationals are emitted as integer *strings* in JSON so that values
//! wider than 64 bits survive any JSON toolchain; floats carry full `f64`
//! precision in JSON and six significant digits in text.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use divpart_core::diversity::DiversityValue;
use divpart_core::pmd::{PartitionResult, TraceFrame};
use divpart_core::ExactRatio;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioJson {
    pub num: String,
    pub den: String,
    pub float: f64,
}

impl RatioJson {
    pub fn from_exact(r: &ExactRatio) -> Self {
        RatioJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            float: r.to_f64(),
        }
    }

    pub fn from_diversity(d: &DiversityValue) -> Self {
        RatioJson {
            num: d.exact.numer().to_string(),
            den: d.exact.denom().to_string(),
            float: d.approx,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceJson {
    pub kappa: u64,
    pub b1: u64,
    pub b2: u64,
    pub m: u64,
    pub ell: Option<u64>,
}

impl TraceJson {
    fn from_frame(f: &TraceFrame) -> Self {
        TraceJson {
            kappa: f.kappa,
            b1: f.b1p,
            b2: f.b2p,
            m: f.m,
            ell: f.ell,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub budget: Vec<u128>,
    pub k: u64,
    pub branch: String,
    pub parts: Vec<Vec<u128>>,
    pub diversity: Vec<RatioJson>,
    pub epsilon: RatioJson,
    pub trace: Vec<TraceJson>,
    pub duration_us: u128,
}

impl SolveReport {
    pub fn from_result(result: &PartitionResult, elapsed: Duration) -> Self {
        SolveReport {
            budget: result.budget.counts().to_vec(),
            k: result.k,
            branch: result.branch.as_str().to_string(),
            parts: result.parts.iter().map(|p| p.counts().to_vec()).collect(),
            diversity: result
                .diversities
                .iter()
                .map(RatioJson::from_diversity)
                .collect(),
            epsilon: RatioJson::from_exact(&result.epsilon),
            trace: result.trace.iter().map(TraceJson::from_frame).collect(),
            duration_us: elapsed.as_micros(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "budget: {}   parts: {}   branch: {}\n",
            fmt_counts(&self.budget),
            self.k,
            self.branch
        ));
        for (i, (part, div)) in self.parts.iter().zip(&self.diversity).enumerate() {
            out.push_str(&format!(
                "  part {}: {}   diversity {} (exact {}/{})\n",
                i + 1,
                fmt_counts(part),
                sig6(div.float),
                div.num,
                div.den
            ));
        }
        out.push_str(&format!(
            "epsilon: {} (exact {}/{})\n",
            sig6(self.epsilon.float),
            self.epsilon.num,
            self.epsilon.den
        ));
        if !self.trace.is_empty() {
            out.push_str("trace:\n");
            for (i, f) in self.trace.iter().enumerate() {
                let ell = match f.ell {
                    Some(e) => format!("ell={e}"),
                    None => "recurse".to_string(),
                };
                out.push_str(&format!(
                    "  level {}: kappa={} b'=({}, {}) m={} {}\n",
                    i + 1,
                    f.kappa,
                    f.b1,
                    f.b2,
                    f.m,
                    ell
                ));
            }
        }
        out.push_str(&format!("elapsed: {}us\n", self.duration_us));
        out
    }
}

pub fn fmt_counts(counts: &[u128]) -> String {
    let inner: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
    format!("({})", inner.join(", "))
}

/// Six significant digits, plain decimal notation.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}
