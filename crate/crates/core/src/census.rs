use serde::{Deserialize, Serialize};

/// Empirical ratio statistics for one inequality check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub check_name: String,
    pub n_trials: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub parameters: serde_json::Value,
}

impl Census {
    pub fn new(check_name: impl Into<String>, n: usize, parameters: serde_json::Value) -> Census {
        Census {
            check_name: check_name.into(),
            n_trials: 0,
            min_ratio: f64::INFINITY,
            max_ratio: f64::NEG_INFINITY,
            n,
            parameters,
        }
    }

    pub fn push(&mut self, ratio: f64) {
        self.n_trials += 1;
        self.min_ratio = self.min_ratio.min(ratio);
        self.max_ratio = self.max_ratio.max(ratio);
    }

    pub fn is_finite(&self) -> bool {
        self.n_trials > 0 && self.min_ratio.is_finite() && self.max_ratio.is_finite()
    }

    /// `|a - b| / max(|a|, |b|)` for the maxima of two censuses.
    pub fn max_drift(&self, other: &Census) -> f64 {
        rel_change(self.max_ratio, other.max_ratio)
    }

    pub fn min_drift(&self, other: &Census) -> f64 {
        rel_change(self.min_ratio, other.min_ratio)
    }
}

pub fn rel_change(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
