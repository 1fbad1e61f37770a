//! Sectors of the {5,7} splitting drawn over the tiling.

use hypq::cli::{figure_scene, Figure};
use hypq::geometry::{render_svg, Style, DEFAULT_TILE_CAP};

fn main() -> hypq::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "sectors.svg".into());
    let scene = figure_scene(5, 7, Figure::Sectors, 3, DEFAULT_TILE_CAP)?;
    for label in &scene.labels {
        println!("{}", label.text);
    }
    std::fs::write(&out, render_svg(&scene, &Style::default())).expect("write svg");
    println!("-> {out}");
    Ok(())
}
