//! h-midpoint line and zig-zag through an edge of the central {5,7} tile.

use hypq::geometry::{h_midpoint_line_through, tessellate, zigzag_through, DEFAULT_TILE_CAP};
use hypq::validate;

fn main() -> hypq::Result<()> {
    let pair = validate(5, 7)?;
    let tess = tessellate(pair, 5, DEFAULT_TILE_CAP)?;
    let ids = &tess.tile_vertices[0];
    let edge = (ids[1], ids[0]);

    let mid = h_midpoint_line_through(&tess, edge, 2, 2)?;
    println!(
        "h = {}: {} midpoints, residual {:.2e}",
        pair.h,
        mid.midpoints.len(),
        mid.residual
    );
    for m in &mid.midpoints {
        println!("  ({:+.6}, {:+.6})", m.x, m.y);
    }
    let zz = zigzag_through(&tess, edge, 2, 2)?;
    println!("zig-zag: {} edges", zz.len());
    Ok(())
}
