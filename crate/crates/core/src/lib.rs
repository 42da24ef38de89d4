//! Dynamics of complex harmonic maps `f = h + conj(g)` under direct
//! composition, where the n-th iterate is `h^n(z) + conj(g^n(z))`.

// `!(a < b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod expr;
pub mod grid;
pub mod growth;
pub mod harmonic;
pub mod presets;
pub mod report;

pub use dynamics::{
    check_attracting_fixed_point, check_permutable, classify_orbit, classify_point, closed_form_affine_orbit,
    fatou_membership, in_filled_set, orbit, polynomial_escape_radius, FatouMode, Membership, MembershipTag, Orbit,
    OrbitBudget, OrbitClass, OrbitTag, PointVerdict,
};
pub use error::{Error, Result};
pub use expr::{
    derivative, eval_holo, parse_expr, CompiledExpr, HolomorphicExpr, LogPolar, MagnitudeGuard, Polynomial, Value,
};
pub use grid::{
    analyze_components, check_containment, check_iterate_invariance, check_julia_union, classify_component_dynamics,
    classify_grid, classify_grid_with_threads, holomorphic_grid, julia_compactness_check, label_components, ClassGrid,
    CompactnessReport, ComponentDynamics, ComponentMap, GridSpec, RelationReport,
};
pub use growth::{
    bounded_component_check, growth_profile, max_modulus, min_modulus, minimal_type_check, order_estimate,
    BoundedComponentParams, BoundedComponentReport, GrowthProfile,
};
pub use harmonic::{affine_image, cross_compose_step, eval_harmonic, iterate_map, CompiledMap, HarmonicMap};
pub use presets::{preset, preset_names, Preset, PRESETS};
