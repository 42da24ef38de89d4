use serde::{Deserialize, Serialize};

use crate::expr::MagnitudeGuard;
use crate::{Error, Result};

/// Numerical limits for orbit classification. Every field has a default, so a
/// partial JSON object deserializes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrbitBudget {
    pub max_iter: u32,
    pub escape_radius: f64,
    pub bounded_radius: f64,
    pub sample_count: u32,
    pub delta_ladder: Vec<f64>,
    pub separation_epsilon: f64,
    pub guard: MagnitudeGuard,
}

impl Default for OrbitBudget {
    fn default() -> Self {
        OrbitBudget {
            max_iter: 256,
            escape_radius: 1e8,
            bounded_radius: 1e4,
            sample_count: 16,
            delta_ladder: vec![1e-2, 1e-3, 1e-4],
            separation_epsilon: 1e-1,
            guard: MagnitudeGuard::default(),
        }
    }
}

impl OrbitBudget {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Precondition(m));
        if self.max_iter == 0 {
            return bad("max_iter must be positive".into());
        }
        if !(self.bounded_radius > 0.0 && self.escape_radius > self.bounded_radius) {
            return bad(format!(
                "need escape_radius > bounded_radius > 0, got {} and {}",
                self.escape_radius, self.bounded_radius
            ));
        }
        if !self.escape_radius.is_finite() || self.escape_radius >= self.guard.overflow_threshold {
            return bad("escape_radius must be finite and below the overflow threshold".into());
        }
        if self.sample_count == 0 {
            return bad("sample_count must be positive".into());
        }
        if self.delta_ladder.is_empty() {
            return bad("delta_ladder must not be empty".into());
        }
        if self.delta_ladder.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return bad("delta_ladder entries must be positive".into());
        }
        if self.delta_ladder.windows(2).any(|w| w[1] >= w[0]) {
            return bad("delta_ladder must be strictly decreasing".into());
        }
        if !(self.separation_epsilon > 0.0) {
            return bad("separation_epsilon must be positive".into());
        }
        self.guard.validate()
    }

    pub fn smallest_delta(&self) -> f64 {
        *self.delta_ladder.last().expect("validated ladder is non-empty")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        OrbitBudget::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_radii_and_ladders() {
        let b = OrbitBudget {
            bounded_radius: 1e9,
            ..Default::default()
        };
        assert!(b.validate().is_err());
        let b = OrbitBudget {
            delta_ladder: vec![1e-3, 1e-2],
            ..Default::default()
        };
        assert!(b.validate().is_err());
        let b = OrbitBudget {
            delta_ladder: vec![1e-2, 1e-2],
            ..Default::default()
        };
        assert!(b.validate().is_err());
    }

    #[test]
    fn partial_json_takes_defaults() {
        let b: OrbitBudget = serde_json::from_str(r#"{"max_iter": 64}"#).unwrap();
        assert_eq!(b.max_iter, 64);
        assert_eq!(b.escape_radius, 1e8);
        assert!(serde_json::from_str::<OrbitBudget>(r#"{"max_iters": 64}"#).is_err());
    }
}
