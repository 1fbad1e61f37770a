//! Writes the {7,3} tiling to an SVG file.

use hypq::geometry::{render_svg, tessellate, Scene, Style, DEFAULT_TILE_CAP};
use hypq::validate;

fn main() -> hypq::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "tessellation.svg".into());
    let tess = tessellate(validate(7, 3)?, 4, DEFAULT_TILE_CAP)?;
    let svg = render_svg(&Scene::from_tessellation(&tess), &Style::default());
    std::fs::write(&out, svg).expect("write svg");
    println!("{} tiles -> {out}", tess.tiles.len());
    Ok(())
}
