//! Pixel grids of pointwise verdicts, relations between grids, and Fatou
//! components.

mod components;
mod relations;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{point_verdict, polynomial_escape_radius, MembershipTag, OrbitBudget, PointVerdict};
use crate::expr::{HolomorphicExpr, Polynomial};
use crate::harmonic::{CompiledMap, HarmonicMap};
use crate::{Error, Result};

pub use components::{
    analyze_components, classify_component_dynamics, label_components, representatives, ComponentDynamics,
    ComponentMap, MAX_PERIOD,
};
pub(crate) use relations::compare_grids;
pub use relations::{check_containment, check_iterate_invariance, check_julia_union, PixelRef, RelationReport};

/// Window and resolution. Pixel `(i, j)` is column `i`, row `j`; row 0 is the
/// top edge (`im_max`) and each pixel stands for the centre of its cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub width: u32,
    pub height: u32,
}

impl GridSpec {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64, width: u32, height: u32) -> Self {
        GridSpec {
            re_min,
            re_max,
            im_min,
            im_max,
            width,
            height,
        }
    }

    /// Square window `[-r, r]²` at `n × n` pixels.
    pub fn centered(r: f64, n: u32) -> Self {
        GridSpec::new(-r, r, -r, r, n, n)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|x| x.is_finite());
        if !finite || !(self.re_min < self.re_max) || !(self.im_min < self.im_max) {
            return Err(Error::Precondition(
                "window needs finite corners with re_min < re_max and im_min < im_max".into(),
            ));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::Precondition("width and height must be positive".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        (self.re_max - self.re_min) / self.width as f64
    }

    pub fn dy(&self) -> f64 {
        (self.im_max - self.im_min) / self.height as f64
    }

    pub fn pixel_diagonal(&self) -> f64 {
        self.dx().hypot(self.dy())
    }

    pub fn center(&self, i: u32, j: u32) -> Complex64 {
        Complex64::new(
            self.re_min + (i as f64 + 0.5) * self.dx(),
            self.im_max - (j as f64 + 0.5) * self.dy(),
        )
    }

    pub fn index(&self, i: u32, j: u32) -> usize {
        j as usize * self.width as usize + i as usize
    }

    /// Pixel containing `z`, or `None` outside the window.
    pub fn locate(&self, z: Complex64) -> Option<(u32, u32)> {
        let x = ((z.re - self.re_min) / self.dx()).floor();
        let y = ((self.im_max - z.im) / self.dy()).floor();
        let inside = x >= 0.0 && y >= 0.0 && x < self.width as f64 && y < self.height as f64;
        inside.then_some((x as u32, y as u32))
    }

    /// Nearest pixel to `z`, clamping points outside the window to the edge.
    pub fn clamp(&self, z: Complex64) -> (u32, u32) {
        let x = ((z.re - self.re_min) / self.dx()).floor();
        let y = ((self.im_max - z.im) / self.dy()).floor();
        let clamp = |v: f64, n: u32| {
            if v.is_nan() {
                0
            } else {
                v.clamp(0.0, (n - 1) as f64) as u32
            }
        };
        (clamp(x, self.width), clamp(y, self.height))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassGrid {
    pub spec: GridSpec,
    /// Row-major, `height` rows of `width` cells.
    pub cells: Vec<PointVerdict>,
}

impl ClassGrid {
    pub fn cell(&self, i: u32, j: u32) -> &PointVerdict {
        &self.cells[self.spec.index(i, j)]
    }

    pub fn count(&self, tag: MembershipTag) -> usize {
        self.cells.iter().filter(|c| c.membership == tag).count()
    }
}

/// Classifies every pixel centre. The result does not depend on `threads`;
/// `None` uses the global rayon pool.
pub fn classify_grid_with_threads(
    f: &HarmonicMap,
    spec: &GridSpec,
    budget: &OrbitBudget,
    threads: Option<usize>,
) -> Result<ClassGrid> {
    spec.validate()?;
    budget.validate()?;
    let map = CompiledMap::new(f);
    let w = spec.width;
    let run = || -> Vec<PointVerdict> {
        (0..spec.len())
            .into_par_iter()
            .with_min_len(16)
            .map(|idx| {
                let (i, j) = ((idx % w as usize) as u32, (idx / w as usize) as u32);
                point_verdict(&map, spec.center(i, j), budget)
            })
            .collect()
    };
    let cells = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    Ok(ClassGrid { spec: *spec, cells })
}

pub fn classify_grid(f: &HarmonicMap, spec: &GridSpec, budget: &OrbitBudget) -> Result<ClassGrid> {
    classify_grid_with_threads(f, spec, budget, None)
}

/// Grid for `h` alone, i.e. the harmonic map with a zero co-analytic part.
pub fn holomorphic_grid(h: &HolomorphicExpr, spec: &GridSpec, budget: &OrbitBudget) -> Result<ClassGrid> {
    classify_grid(&HarmonicMap::holomorphic(h.clone()), spec, budget)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactnessReport {
    pub radius: f64,
    pub all_inside: bool,
    pub julia_pixels: usize,
    pub julia_pixels_outside: usize,
}

/// For polynomial maps the numerical Julia set must lie inside the larger of
/// the two escape radii.
pub fn julia_compactness_check(f: &HarmonicMap, grid: &ClassGrid) -> Result<CompactnessReport> {
    for part in [&f.analytic, &f.coanalytic] {
        let d = Polynomial::from_expr(part)?.degree();
        if d < 2 {
            return Err(Error::Precondition(format!(
                "both parts must be polynomials of degree >= 2, found degree {d}"
            )));
        }
    }
    let radius = polynomial_escape_radius(&f.analytic)?.max(polynomial_escape_radius(&f.coanalytic)?);
    let spec = &grid.spec;
    let mut julia = 0;
    let mut outside = 0;
    for j in 0..spec.height {
        for i in 0..spec.width {
            if grid.cell(i, j).membership == MembershipTag::JuliaLike {
                julia += 1;
                if spec.center(i, j).norm() > radius {
                    outside += 1;
                }
            }
        }
    }
    Ok(CompactnessReport {
        radius,
        all_inside: outside == 0,
        julia_pixels: julia,
        julia_pixels_outside: outside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{classify_point, FatouMode};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pixel_geometry() {
        let s = GridSpec::new(-1.0, 1.0, -2.0, 2.0, 4, 8);
        assert_eq!(s.center(0, 0), c(-0.75, 1.75));
        assert_eq!(s.center(3, 7), c(0.75, -1.75));
        assert_eq!(s.locate(c(-0.75, 1.75)), Some((0, 0)));
        assert_eq!(s.locate(c(0.99, -1.99)), Some((3, 7)));
        assert_eq!(s.locate(c(1.5, 0.0)), None);
        assert_eq!(s.clamp(c(1.5, 9.0)), (3, 0));
        assert!(GridSpec::new(1.0, -1.0, 0.0, 1.0, 2, 2).validate().is_err());
    }

    #[test]
    fn identity_parts_are_all_convergent() {
        let f = HarmonicMap::parse("z", "z").unwrap();
        let g = classify_grid(&f, &GridSpec::centered(2.0, 16), &OrbitBudget::default()).unwrap();
        assert!(g
            .cells
            .iter()
            .all(|c| c.membership == MembershipTag::FatouLike && c.mode == Some(FatouMode::ConvergentFamily)));
    }

    #[test]
    fn constant_is_all_fatou() {
        let g = holomorphic_grid(
            &"3 - i".parse().unwrap(),
            &GridSpec::centered(2.0, 12),
            &OrbitBudget::default(),
        )
        .unwrap();
        assert_eq!(g.count(MembershipTag::FatouLike), 144);
    }

    #[test]
    fn grid_cells_match_pointwise_calls() {
        let f = HarmonicMap::parse("z^2", "z^2/2").unwrap();
        let spec = GridSpec::centered(3.0, 24);
        let b = OrbitBudget::default();
        let g = classify_grid(&f, &spec, &b).unwrap();
        for (i, j) in [(0, 0), (11, 12), (5, 17), (23, 23), (8, 8)] {
            assert_eq!(*g.cell(i, j), classify_point(&f, spec.center(i, j), &b));
        }
    }

    #[test]
    fn compactness_preconditions() {
        let g = ClassGrid {
            spec: GridSpec::centered(1.0, 1),
            cells: vec![],
        };
        let f = HarmonicMap::parse("z - 1 + exp(-z)", "z^2").unwrap();
        assert!(matches!(julia_compactness_check(&f, &g), Err(Error::NotPolynomial)));
        let f = HarmonicMap::parse("z^2", "2*z").unwrap();
        assert!(matches!(julia_compactness_check(&f, &g), Err(Error::Precondition(_))));
    }
}
