//! Fatou components as 4-connected pixel regions, and what `f` does to them.

use std::collections::{HashMap, VecDeque};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ClassGrid, GridSpec};
use crate::dynamics::{advance, PointVerdict};
use crate::dynamics::{classify_orbit, orbit, FatouMode, MembershipTag, OrbitBudget, OrbitTag};
use crate::expr::Value;
use crate::harmonic::{combine_parts, CompiledMap, HarmonicMap};
use crate::{Error, Result};

/// Largest return time tried when looking for a period.
pub const MAX_PERIOD: u32 = 16;
const REPRESENTATIVES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentDynamics {
    Periodic(u32),
    PrePeriodic,
    WanderingEscaping,
    WanderingOscillating,
    WanderingOrbitallyBounded,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentMap {
    pub spec: GridSpec,
    /// Row-major; 0 marks a pixel outside every component.
    pub labels: Vec<u32>,
    pub component_count: u32,
    /// Per label, index `label - 1`.
    pub modes: Vec<FatouMode>,
    pub sizes: Vec<usize>,
    pub touches_boundary: Vec<bool>,
    /// Filled by [`analyze_components`].
    pub dynamics: Vec<Option<ComponentDynamics>>,
}

impl ComponentMap {
    pub fn label_at(&self, i: u32, j: u32) -> u32 {
        self.labels[self.spec.index(i, j)]
    }

    pub fn label_of(&self, z: Complex64) -> Option<u32> {
        let (i, j) = self.spec.locate(z)?;
        Some(self.label_at(i, j))
    }

    fn check_label(&self, label: u32) -> Result<usize> {
        if label == 0 || label > self.component_count {
            return Err(Error::Precondition(format!(
                "label {label} is not in 1..={}",
                self.component_count
            )));
        }
        Ok(label as usize - 1)
    }
}

fn neighbours(spec: &GridSpec, idx: usize) -> impl Iterator<Item = Option<usize>> {
    let w = spec.width as usize;
    let h = spec.height as usize;
    let (i, j) = (idx % w, idx / w);
    [
        (i > 0).then(|| idx - 1),
        (i + 1 < w).then(|| idx + 1),
        (j > 0).then(|| idx - w),
        (j + 1 < h).then(|| idx + w),
    ]
    .into_iter()
}

fn mode_key(c: &PointVerdict) -> Option<FatouMode> {
    match c.membership {
        MembershipTag::FatouLike => Some(c.mode.unwrap_or(FatouMode::ConvergentFamily)),
        _ => None,
    }
}

/// Flood fill of Fatou pixels with 4-connectivity. Pixels of different
/// modes are never joined: a convergent family and a compactly divergent one
/// cannot share a component.
pub fn label_components(grid: &ClassGrid) -> ComponentMap {
    let spec = grid.spec;
    let n = spec.len();
    let mut labels = vec![0u32; n];
    let mut modes = Vec::new();
    let mut sizes = Vec::new();
    let mut touches = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        let Some(mode) = mode_key(&grid.cells[start]) else {
            continue;
        };
        if labels[start] != 0 {
            continue;
        }
        let label = modes.len() as u32 + 1;
        labels[start] = label;
        queue.push_back(start);
        let mut size = 0;
        let mut boundary = false;
        while let Some(idx) = queue.pop_front() {
            size += 1;
            for nb in neighbours(&spec, idx) {
                match nb {
                    None => boundary = true,
                    Some(k) => {
                        if labels[k] == 0 && mode_key(&grid.cells[k]) == Some(mode) {
                            labels[k] = label;
                            queue.push_back(k);
                        }
                    }
                }
            }
        }
        modes.push(mode);
        sizes.push(size);
        touches.push(boundary);
    }
    let count = modes.len();
    ComponentMap {
        spec,
        labels,
        component_count: count as u32,
        modes,
        sizes,
        touches_boundary: touches,
        dynamics: vec![None; count],
    }
}

/// Up to eight interior points of a component: pixels at least half the
/// maximal distance from the component's edge, evenly spaced in row-major
/// order.
pub fn representatives(cmap: &ComponentMap, label: u32) -> Result<Vec<Complex64>> {
    cmap.check_label(label)?;
    let spec = &cmap.spec;
    let n = spec.len();
    let mut dist = vec![0u32; n];
    let mut queue = VecDeque::new();
    for (idx, &l) in cmap.labels.iter().enumerate() {
        if l != label {
            continue;
        }
        let edge = neighbours(spec, idx).any(|nb| nb.map_or(true, |k| cmap.labels[k] != label));
        if edge {
            dist[idx] = 1;
            queue.push_back(idx);
        }
    }
    let mut max = 0;
    while let Some(idx) = queue.pop_front() {
        max = max.max(dist[idx]);
        for k in neighbours(spec, idx).flatten() {
            if cmap.labels[k] == label && dist[k] == 0 {
                dist[k] = dist[idx] + 1;
                queue.push_back(k);
            }
        }
    }
    let floor = max.div_ceil(2);
    let candidates: Vec<usize> = (0..n)
        .filter(|&idx| cmap.labels[idx] == label && dist[idx] >= floor)
        .collect();
    let picked: Vec<usize> = if candidates.len() <= REPRESENTATIVES {
        candidates
    } else {
        (0..REPRESENTATIVES)
            .map(|t| candidates[(2 * t + 1) * candidates.len() / (2 * REPRESENTATIVES)])
            .collect()
    };
    let w = spec.width as usize;
    Ok(picked
        .into_iter()
        .map(|idx| spec.center((idx % w) as u32, (idx / w) as u32))
        .collect())
}

/// Forward images of the representatives: `landing[k - 1][r]` is the label
/// hit by `f^k` of representative `r`, or `None` off the Fatou pixels.
struct Landing {
    reps: Vec<Complex64>,
    hits: Vec<Vec<Option<u32>>>,
}

fn landing(map: &CompiledMap, cmap: &ComponentMap, label: u32, budget: &OrbitBudget) -> Result<Landing> {
    let reps = representatives(cmap, label)?;
    let li = label as usize - 1;
    let spec = &cmap.spec;
    // An unbounded escaping component owns whatever leaves the window on its
    // side; everything else that leaves the window is lost.
    let owns_outside = cmap.modes[li] == FatouMode::CompactDivergence && cmap.touches_boundary[li];
    let far = 4.0 * (spec.re_max - spec.re_min).abs().max((spec.im_max - spec.im_min).abs()) + spec.center(0, 0).norm();
    let guard = &budget.guard;
    let mut hits = vec![Vec::with_capacity(reps.len()); MAX_PERIOD as usize];
    for &z in &reps {
        let mut h = Value::Finite(z);
        let mut g = Value::Finite(z);
        for row in hits.iter_mut() {
            h = advance(&map.h, h, guard);
            g = advance(&map.g, g, guard);
            let target = match combine_parts(h, g, guard) {
                Value::Finite(w) => Some(w),
                Value::Overflow(lp) => lp.arg.map(|t| Complex64::from_polar(far, t)),
            };
            let hit = match target.map(|w| (w, spec.locate(w))) {
                Some((_, Some((i, j)))) => Some(cmap.label_at(i, j)).filter(|&l| l != 0),
                Some((w, None)) if owns_outside => {
                    let (i, j) = spec.clamp(w);
                    Some(cmap.label_at(i, j)).filter(|&l| l == label)
                }
                None if owns_outside => Some(label),
                _ => None,
            };
            row.push(hit);
        }
    }
    Ok(Landing { reps, hits })
}

fn period_of(l: &Landing, label: u32) -> Option<u32> {
    if l.reps.is_empty() {
        return None;
    }
    l.hits
        .iter()
        .position(|row| row.iter().all(|h| *h == Some(label)))
        .map(|k| k as u32 + 1)
}

struct Analyzer<'a> {
    f: &'a HarmonicMap,
    map: CompiledMap,
    cmap: &'a ComponentMap,
    budget: &'a OrbitBudget,
    periods: HashMap<u32, Option<u32>>,
}

impl Analyzer<'_> {
    fn period(&mut self, label: u32) -> Result<Option<u32>> {
        if let Some(p) = self.periods.get(&label) {
            return Ok(*p);
        }
        let l = landing(&self.map, self.cmap, label, self.budget)?;
        let p = period_of(&l, label);
        self.periods.insert(label, p);
        Ok(p)
    }

    fn dynamics(&mut self, label: u32) -> Result<ComponentDynamics> {
        let l = landing(&self.map, self.cmap, label, self.budget)?;
        let p = period_of(&l, label);
        self.periods.insert(label, p);
        if let Some(k) = p {
            return Ok(ComponentDynamics::Periodic(k));
        }
        // The first return of all representatives to one other component
        // that is itself periodic.
        for row in &l.hits {
            if let Some(Some(v)) = row.first() {
                let v = *v;
                if v != label && row.iter().all(|h| *h == Some(v)) && self.period(v)?.is_some() {
                    return Ok(ComponentDynamics::PrePeriodic);
                }
            }
        }
        let mut tags = l
            .reps
            .iter()
            .map(|&z| classify_orbit(&orbit(self.f, z, self.budget), self.budget).tag);
        let first = tags.next();
        let unanimous = match first {
            Some(t) if tags.all(|u| u == t) => Some(t),
            _ => None,
        };
        Ok(match unanimous {
            Some(OrbitTag::Escaping) => ComponentDynamics::WanderingEscaping,
            Some(OrbitTag::Oscillating) => ComponentDynamics::WanderingOscillating,
            Some(OrbitTag::OrbitallyBounded) => ComponentDynamics::WanderingOrbitallyBounded,
            _ => ComponentDynamics::Undetermined,
        })
    }
}

/// Periodic, pre-periodic or wandering, judged from the forward images of
/// representative points for `k = 1..=MAX_PERIOD`. The wandering sub-type
/// comes from the representatives' orbit class under `budget`.
pub fn classify_component_dynamics(
    f: &HarmonicMap,
    cmap: &ComponentMap,
    grid: &ClassGrid,
    label: u32,
    budget: &OrbitBudget,
) -> Result<ComponentDynamics> {
    if grid.spec != cmap.spec {
        return Err(Error::GridMismatch);
    }
    cmap.check_label(label)?;
    let mut a = Analyzer {
        f,
        map: CompiledMap::new(f),
        cmap,
        budget,
        periods: HashMap::new(),
    };
    a.dynamics(label)
}

/// Labels the grid and classifies every component.
pub fn analyze_components(f: &HarmonicMap, grid: &ClassGrid, budget: &OrbitBudget) -> Result<ComponentMap> {
    let mut cmap = label_components(grid);
    let dynamics = {
        let mut a = Analyzer {
            f,
            map: CompiledMap::new(f),
            cmap: &cmap,
            budget,
            periods: HashMap::new(),
        };
        (1..=cmap.component_count)
            .map(|l| a.dynamics(l).map(Some))
            .collect::<Result<Vec<_>>>()?
    };
    cmap.dynamics = dynamics;
    Ok(cmap)
}
