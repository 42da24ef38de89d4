//! Named maps with their default windows and budgets.
//!
//! The two exponential presets need a second-factor `g₁` that vanishes on
//! `2πiℤ` and has an attracting fixed point at 0. This crate instantiates it as
//! `g₁(z) = (e^z - 1)/2`: its zeros are exactly `2πik` and `g₁'(0) = 1/2`.

use serde::Serialize;

use crate::dynamics::OrbitBudget;
use crate::grid::GridSpec;
use crate::harmonic::HarmonicMap;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub h: &'static str,
    pub g: &'static str,
    pub summary: &'static str,
    pub window: GridSpec,
    /// Budget for component dynamics and single-orbit classification. `None`
    /// means the default budget.
    #[serde(skip)]
    drift: Option<DriftBudget>,
}

/// Radii for maps whose orbits drift to infinity linearly. The translation
/// by `2πi` per step never reaches the default escape radius within the
/// default iteration count.
#[derive(Clone, Copy, Debug, PartialEq)]
struct DriftBudget {
    max_iter: u32,
    escape_radius: f64,
    bounded_radius: f64,
}

const DRIFT: DriftBudget = DriftBudget {
    max_iter: 512,
    escape_radius: 1e3,
    bounded_radius: 5e2,
};

const WANDERING_WINDOW: GridSpec = GridSpec {
    re_min: -1.0,
    re_max: 1.0,
    im_min: -1.0,
    im_max: 13.0,
    width: 40,
    height: 280,
};

pub const PRESETS: [Preset; 4] = [
    Preset {
        name: "strict-containment",
        h: "z^2",
        g: "z^2/2",
        summary: "Julia set on the unit circle; the inclusion F(h) ∩ F(g) ⊆ F(f) is strict",
        window: GridSpec {
            re_min: -3.0,
            re_max: 3.0,
            im_min: -3.0,
            im_max: 3.0,
            width: 256,
            height: 256,
        },
        drift: None,
    },
    Preset {
        name: "empty-julia",
        h: "z^2",
        g: "2*z",
        summary: "every orbit except the fixed point 0 escapes",
        window: GridSpec {
            re_min: -2.0,
            re_max: 2.0,
            im_min: -2.0,
            im_max: 2.0,
            width: 256,
            height: 256,
        },
        drift: None,
    },
    Preset {
        name: "wandering",
        h: "z - 1 + exp(-z) + 2*pi*i",
        g: "(exp(z) - 1)/2",
        summary: "escaping wandering domain: f^n(0) = 2nπi",
        window: WANDERING_WINDOW,
        drift: Some(DRIFT),
    },
    Preset {
        name: "fatou-classic",
        h: "z - 1 + exp(-z)",
        g: "(exp(z) - 1)/2",
        summary: "untranslated map: 2πik are attracting fixed points",
        window: WANDERING_WINDOW,
        drift: None,
    },
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

pub fn preset(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        Error::Config(format!(
            "unknown preset {name:?}; expected one of {}",
            preset_names().join(", ")
        ))
    })
}

impl Preset {
    pub fn map(&self) -> HarmonicMap {
        HarmonicMap::parse(self.h, self.g).expect("preset expressions parse")
    }

    /// Budget for pixel classification.
    pub fn budget(&self) -> OrbitBudget {
        OrbitBudget::default()
    }

    /// Budget for orbit classes and component dynamics.
    pub fn dynamics_budget(&self) -> OrbitBudget {
        let mut b = OrbitBudget::default();
        if let Some(d) = self.drift {
            b.max_iter = d.max_iter;
            b.escape_radius = d.escape_radius;
            b.bounded_radius = d.bounded_radius;
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_validate() {
        for p in &PRESETS {
            p.map();
            p.window.validate().unwrap();
            p.budget().validate().unwrap();
            p.dynamics_budget().validate().unwrap();
        }
    }

    #[test]
    fn lookup() {
        assert_eq!(preset("empty-julia").unwrap().g, "2*z");
        assert!(matches!(preset("nope"), Err(Error::Config(_))));
    }
}
