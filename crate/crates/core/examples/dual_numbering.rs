//! Numbering the dual graph of {5,4} with the Fibonacci tree.

use hypq::dual::{check_bijection, layout};
use hypq::geometry::{render_svg, Style};

fn main() -> hypq::Result<()> {
    let l = layout(5, 4, hypq::geometry::DEFAULT_TILE_CAP)?;
    println!("levels: {:?}", l.tree.level_counts());
    let report = check_bijection(4)?;
    println!(
        "{} of {} sector vertices numbered, bijection: {}",
        report.covered,
        report.sector_vertices,
        report.ok()
    );
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "dual45.svg".into());
    let scene = hypq::dual::dual_scene(3)?;
    std::fs::write(&out, render_svg(&scene, &Style::default())).expect("write svg");
    println!("-> {out}");
    Ok(())
}
