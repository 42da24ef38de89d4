use serde::{Deserialize, Serialize};

use super::{classify_grid, ClassGrid, GridSpec};
use crate::dynamics::{MembershipTag, OrbitBudget};
use crate::harmonic::{iterate_map, HarmonicMap};
use crate::{Error, Result};

const MAX_LISTED: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PixelRef {
    pub i: u32,
    pub j: u32,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation_name: String,
    pub pixels_checked: usize,
    pub violations: usize,
    pub undetermined: usize,
    pub violation_fraction: f64,
    /// First violating pixels in row-major order.
    pub violation_pixels: Vec<PixelRef>,
    /// Pixels showing that an inclusion is strict (at most 32).
    pub witness_pixels: Vec<PixelRef>,
}

impl RelationReport {
    pub fn agreement(&self) -> f64 {
        1.0 - self.violation_fraction
    }
}

enum Verdict {
    Ok { witness: bool },
    Violation,
}

fn scan(name: &str, grids: &[&ClassGrid], judge: impl Fn(&[MembershipTag]) -> Verdict) -> Result<RelationReport> {
    let spec = grids[0].spec;
    if grids.iter().any(|g| g.spec != spec || g.cells.len() != spec.len()) {
        return Err(Error::GridMismatch);
    }
    let mut rep = RelationReport {
        relation_name: name.to_string(),
        pixels_checked: 0,
        violations: 0,
        undetermined: 0,
        violation_fraction: 0.0,
        violation_pixels: Vec::new(),
        witness_pixels: Vec::new(),
    };
    let mut tags = vec![MembershipTag::Undetermined; grids.len()];
    for idx in 0..spec.len() {
        for (t, g) in tags.iter_mut().zip(grids) {
            *t = g.cells[idx].membership;
        }
        if tags.contains(&MembershipTag::Undetermined) {
            rep.undetermined += 1;
            continue;
        }
        let at = || {
            let (i, j) = ((idx % spec.width as usize) as u32, (idx / spec.width as usize) as u32);
            let z = spec.center(i, j);
            PixelRef {
                i,
                j,
                re: z.re,
                im: z.im,
            }
        };
        match judge(&tags) {
            Verdict::Ok { witness } => {
                rep.pixels_checked += 1;
                if witness && rep.witness_pixels.len() < MAX_LISTED {
                    rep.witness_pixels.push(at());
                }
            }
            Verdict::Violation => {
                rep.pixels_checked += 1;
                rep.violations += 1;
                if rep.violation_pixels.len() < MAX_LISTED {
                    rep.violation_pixels.push(at());
                }
            }
        }
    }
    rep.violation_fraction = rep.violations as f64 / rep.pixels_checked.max(1) as f64;
    Ok(rep)
}

use MembershipTag::{FatouLike as F, JuliaLike as J};

/// `F(h) ∩ F(g) ⊆ F(f)`. A violation is a pixel Fatou for both parts but
/// Julia for `f`; witnesses of strictness are Fatou for `f` while Julia for
/// at least one part.
pub fn check_containment(grid_h: &ClassGrid, grid_g: &ClassGrid, grid_f: &ClassGrid) -> Result<RelationReport> {
    scan("F(h) ∩ F(g) ⊆ F(f)", &[grid_h, grid_g, grid_f], |t| {
        match (t[0], t[1], t[2]) {
            (F, F, J) => Verdict::Violation,
            (h, g, F) => Verdict::Ok {
                witness: h == J || g == J,
            },
            _ => Verdict::Ok { witness: false },
        }
    })
}

/// `J(f) ⊆ J(h) ∪ J(g)`. Witnesses of strictness lie in `J(h) ∪ J(g)` but
/// not in `J(f)`.
pub fn check_julia_union(grid_f: &ClassGrid, grid_h: &ClassGrid, grid_g: &ClassGrid) -> Result<RelationReport> {
    scan("J(f) ⊆ J(h) ∪ J(g)", &[grid_f, grid_h, grid_g], |t| {
        match (t[0], t[1], t[2]) {
            (J, F, F) => Verdict::Violation,
            (F, h, g) => Verdict::Ok {
                witness: h == J || g == J,
            },
            _ => Verdict::Ok { witness: false },
        }
    })
}

/// Compares the grid of `f` with the grid of its `p`-th iterate. Pixels
/// determined in both count; differing tags are violations.
pub fn check_iterate_invariance(
    f: &HarmonicMap,
    p: u32,
    spec: &GridSpec,
    budget: &OrbitBudget,
) -> Result<RelationReport> {
    let fp = iterate_map(f, p)?;
    let a = classify_grid(f, spec, budget)?;
    let b = classify_grid(&fp, spec, budget)?;
    compare_grids(&format!("F(f^{p}) = F(f)"), &a, &b)
}

pub(crate) fn compare_grids(name: &str, a: &ClassGrid, b: &ClassGrid) -> Result<RelationReport> {
    scan(name, &[a, b], |t| {
        if t[0] == t[1] {
            Verdict::Ok { witness: false }
        } else {
            Verdict::Violation
        }
    })
}
