//! Exact planar geometry: rational points, polygonal terrains, the terrain
//! graph `G_T`, rational polylines and approximate rendezvous.

mod approx;
mod gt;
mod path;
mod point;
mod terrain;

pub use approx::{approx_rendezvous, own_frame_route, ApproxOutcome};
pub use gt::{
    geometric_rv, geometric_rv_in, gt_port, gt_target, gt_traverse, GtArrival, GtGraph, GtId, GtNode, PlanarRoute,
    SegmentKind, PLANAR_DUMP_HEADER,
};
pub use path::{polyline_ports, rational_path, terrain_quadruple};
pub use point::{pt, Polyline, QPoint};
pub use terrain::{BoundaryHit, GeometryError, Polygon, Region, Terrain, TerrainSpec, TERRAIN_SCHEMA};
