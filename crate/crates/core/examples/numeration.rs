//! Greedy and maximal representations in the basis of the pentagrid.

use hypq::numeration::{basis, represent_greedy, represent_maximal};
use hypq::spectral::analyze;
use hypq::{validate, Scheme};
use num_traits::ToPrimitive;

fn main() -> hypq::Result<()> {
    let pair = validate(5, 4)?;
    let r = analyze(pair, Scheme::EvenQ)?;
    let b = r.digit_bound.to_u64().expect("small digit bound");
    let seq = basis(pair, Scheme::EvenQ, 12)?;
    println!("basis: {:?}", seq.terms);
    println!("digits 0..={b}");
    for v in [0, 1, 7, 20, 100, 1000] {
        let g = represent_greedy(v, &seq, b)?;
        let m = represent_maximal(v, &seq, b)?;
        println!("{v:>5}  greedy {g:<24} maximal {m}");
    }
    Ok(())
}
