//! Orbits, orbit classes, pointwise Fatou/Julia membership, and algebraic
//! checks on harmonic maps.

mod algebra;
mod budget;
mod membership;
mod orbit;

pub use algebra::{
    check_attracting_fixed_point, check_permutable, closed_form_affine_orbit, polynomial_escape_radius, FixedPointCheck,
};
pub use budget::OrbitBudget;
pub(crate) use membership::point_verdict;
pub use membership::{classify_point, fatou_membership, FatouMode, Membership, MembershipTag, PointVerdict};
pub(crate) use orbit::advance;
pub use orbit::{classify_orbit, in_filled_set, orbit, settle_index, Orbit, OrbitClass, OrbitTag};
