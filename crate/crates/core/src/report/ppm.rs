//! Binary PPM (P6) rendering of a classified grid.

use std::fs;
use std::path::Path;

use crate::dynamics::{MembershipTag, OrbitTag, PointVerdict};
use crate::grid::ClassGrid;
use crate::Result;

pub const JULIA: [u8; 3] = [0, 0, 0];
pub const UNDETERMINED: [u8; 3] = [255, 0, 255];

/// Julia pixels are black, bounded Fatou pixels blue (darker the slower the
/// orbit settles), escaping Fatou pixels grey (darker the later the exit) and
/// undetermined pixels magenta.
pub fn color(cell: &PointVerdict) -> [u8; 3] {
    let shade = |n: Option<u32>, cap: u32| (8u64 * n.unwrap_or(u32::MAX) as u64).min(cap as u64) as u8;
    match (cell.membership, cell.orbit_class) {
        (MembershipTag::JuliaLike, _) => JULIA,
        (MembershipTag::FatouLike, OrbitTag::OrbitallyBounded) => [0, 0, 255 - shade(cell.settle_index, 254)],
        (MembershipTag::FatouLike, OrbitTag::Escaping) => {
            let v = 255 - shade(cell.exit_index, 255);
            [v, v, v]
        }
        _ => UNDETERMINED,
    }
}

/// Header `P6\n{width} {height}\n255\n` followed by RGB triples, row 0 first.
pub fn encode_ppm(grid: &ClassGrid) -> Vec<u8> {
    let header = format!("P6\n{} {}\n255\n", grid.spec.width, grid.spec.height);
    let mut out = Vec::with_capacity(header.len() + 3 * grid.cells.len());
    out.extend_from_slice(header.as_bytes());
    for cell in &grid.cells {
        out.extend_from_slice(&color(cell));
    }
    out
}

pub fn write_ppm(grid: &ClassGrid, path: &Path) -> Result<()> {
    fs::write(path, encode_ppm(grid))?;
    Ok(())
}
