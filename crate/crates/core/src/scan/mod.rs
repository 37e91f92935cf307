//! Sweeps over the mass simplex: count and stability maps, and curve
//! extraction (Routh, resonance, bifurcation).

pub mod contour;
pub mod curves;
pub mod family_field;
pub mod grid;
pub mod region_map;

pub use contour::{bracket_root, hausdorff, march, CurveKind, Lattice, PlanarCurve};
pub use curves::{
    edge_endpoint, extend_to_edges, extract_bifurcation, extract_bifurcation_curve, locate_curve_intersection, refine_fold,
    refine_on_line, routh_curve, trace_resonance_curve, trace_resonance_in, BifurcationExtraction, Edge,
    EdgeEndpoint, LineSpec, Residual, Target,
};
pub use family_field::{config_at, stability_margin, walk_control, FamilyField, FamilyProbe};
pub use grid::{region_of, GridSpec, Region, DEFAULT_MARGIN, REGION_BOX};
pub use region_map::{
    scan_simplex, scan_with, stability_domain, stability_domain_from, CellPayload, RegionMap, ScanOptions,
};
