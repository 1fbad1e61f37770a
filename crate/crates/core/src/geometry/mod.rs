//! Poincaré disc geometry of `{p,q}`.

pub mod disc;
pub mod index;
pub mod isometry;
pub mod lines;
pub mod sector;
pub mod svg;
pub mod tessellation;
pub mod tile;

pub use disc::{distance, DiscPoint, Geodesic, Line};
pub use isometry::DiscIsometry;
pub use lines::{
    h_midpoint_line, h_midpoint_line_through, zigzag_line, zigzag_through, MidpointLine, Ray,
};
pub use sector::{
    assign_region, cover_around, cover_copies, sector, CoverReport, Placement, SectorBoundary,
};
pub use svg::{render_svg, Scene, Style};
pub use tessellation::{tessellate, Tessellation, DEFAULT_TILE_CAP};
pub use tile::{base_tile, reflect, tile_metrics, Tile, TileMetrics};
