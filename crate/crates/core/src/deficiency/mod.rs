//! Deficiency measurements: how far a function is from continuous or even,
//! and how far a planar set is from convex.

mod continuity;
mod planar;

pub use continuity::{
    cluster_set, defi_continuity_cluster, defi_continuity_dist, defi_continuity_osc, defi_even,
    oscillation, LineFunction, OscillationProfile,
};
pub use planar::{convex_hull, defi_convex, planar_hmeasure, Hull, PlanarAtom, PlanarSet, Point2};
