//! Level counts of the spanning tree, checked against the recurrence.

use hypq::spectral::analyze;
use hypq::tree::{generate, level_counts, recurrence_check, DEFAULT_NODE_CAP};
use hypq::{build_system, validate, Scheme};

fn main() -> hypq::Result<()> {
    let pair = validate(5, 4)?;
    let system = build_system(pair, Scheme::EvenQ)?;
    let tree = generate(&system, 8, DEFAULT_NODE_CAP)?;
    let counts = level_counts(&tree);
    let poly = analyze(pair, Scheme::EvenQ)?.polynomial;
    println!("{pair} levels: {counts}");
    println!("follows {poly}: {}", recurrence_check(&counts, &poly)?);

    // small enough to read as DOT
    let small = generate(&system, 2, DEFAULT_NODE_CAP)?;
    print!("{}", small.to_dot());
    Ok(())
}
