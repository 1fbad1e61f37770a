//! Splitting polynomial and Pisot verdict for a few tilings.

use hypq::spectral::analyze;
use hypq::{validate, Scheme};

fn main() -> hypq::Result<()> {
    for (p, q) in [(5, 4), (6, 4), (4, 5), (5, 7), (8, 9)] {
        let pair = match validate(p, q) {
            Ok(pair) => pair,
            Err(e) => {
                println!("{{{p},{q}}}: {e}");
                continue;
            }
        };
        for scheme in Scheme::auto(&pair) {
            let r = analyze(pair, scheme)?;
            println!(
                "{pair} {scheme}: {}  beta = {:.6}  regular = {}",
                r.polynomial, r.beta, r.regular
            );
        }
    }
    Ok(())
}
