//! Exact DoF regions.
//!
//! All arithmetic here is over `i64` rationals; nothing in this module
//! touches floating point except for display helpers.

pub mod polytope;
pub mod formulas;

pub use polytope::{
    enumerate_vertices, region_equal, region_strict_subset, region_subset, DofPoint, DofRegion,
    HalfPlane, Rational,
};
pub use formulas::{
    build_region, fic_csit_region, fic_no_csit_region, iid_region, limited_modes_corner,
    limited_modes_region, region_for_case, unknown_corner, zic_csit_region, zic_csit_zf_allocation,
    zic_no_csit_region,
};

/// `contains(region, p)` as a free function.
pub fn contains(region: &DofRegion, p: &DofPoint) -> bool {
    region.contains(p)
}
