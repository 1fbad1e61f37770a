//! Self-checks run by `hypq verify`. Each check recomputes a known identity
//! or property with a formula written out here, not taken from the module
//! under test.

use std::f64::consts::TAU;
use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::dual::{check_bijection, fibonacci_tree, Color};
use crate::error::{Error, Result};
use crate::geometry::{
    base_tile, cover_around, h_midpoint_line_through, reflect, tessellate, zigzag_through,
    DiscIsometry, DiscPoint, DEFAULT_TILE_CAP,
};
use crate::numeration::{basis, brute_force_representations, decode, MaximalTable};
use crate::polynomial::SplittingPolynomial;
use crate::schlafli::{
    build_system, characteristic_polynomial, splitting_matrix, validate, Scheme, SchlafliPair,
};
use crate::spectral::analyze;
use crate::tree::{generate, level_counts, recurrence_check, DEFAULT_NODE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    All,
    Core,
    Geometry,
    Numeration,
    Dual,
}

impl std::str::FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Scope::All),
            "core" => Ok(Scope::Core),
            "geometry" => Ok(Scope::Geometry),
            "numeration" => Ok(Scope::Numeration),
            "dual" => Ok(Scope::Dual),
            _ => Err(Error::InvalidInput(format!("unknown scope `{s}`"))),
        }
    }
}

/// Deliberate corruption used to see a check fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Adds one to the linear coefficient of every even-q polynomial.
    WrongCoefficient,
}

impl std::str::FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wrong-coefficient" => Ok(Fault::WrongCoefficient),
            _ => Err(Error::InvalidInput(format!("unknown fault `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub results: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.name.as_str())
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.results {
            let _ = writeln!(
                s,
                "{} {}: {}",
                if r.passed { "PASS" } else { "FAIL" },
                r.name,
                r.detail
            );
        }
        let bad = self.failed().len();
        let _ = writeln!(s, "{} passed, {} failed", self.results.len() - bad, bad);
        s
    }
}

type Outcome = std::result::Result<String, String>;

fn i(v: i64) -> BigInt {
    BigInt::from(v)
}

fn poly(c: &[i64]) -> SplittingPolynomial {
    SplittingPolynomial::from_i64(c)
}

fn computed(
    pair: SchlafliPair,
    scheme: Scheme,
) -> std::result::Result<SplittingPolynomial, String> {
    let system = build_system(pair, scheme).map_err(|e| format!("{pair} {scheme}: {e}"))?;
    Ok(characteristic_polynomial(&splitting_matrix(&system)))
}

fn desk_pairs(odd: bool) -> impl Iterator<Item = SchlafliPair> {
    (4..=12i64).flat_map(move |p| {
        let qs: Vec<i64> = if odd {
            (5..=13).step_by(2).collect()
        } else {
            (4..=12).step_by(2).collect()
        };
        qs.into_iter().filter_map(move |q| validate(p, q).ok())
    })
}

fn even_closed_form(fault: Option<Fault>) -> Outcome {
    let mut n = 0;
    for pair in desk_pairs(false) {
        let (p, h) = (i64::from(pair.p), i64::from(pair.h));
        let want = poly(&[1, -((p - 3) * (h - 1) + 1), -h + 3]);
        let mut got = computed(pair, Scheme::EvenQ)?;
        if fault == Some(Fault::WrongCoefficient) {
            let mut c = got.coefficients().to_vec();
            c[1] += 1;
            got = SplittingPolynomial::new(c);
        }
        if got != want {
            return Err(format!("{pair}: got {got}, closed form {want}"));
        }
        n += 1;
    }
    Ok(format!("{n} pairs"))
}

fn odd_closed_forms() -> Outcome {
    let mut n = 0;
    for pair in desk_pairs(true) {
        let (p, q, h) = (i64::from(pair.p), i64::from(pair.q), i64::from(pair.h));
        let v1 = poly(&[
            1,
            -((p - 3) * (h - 1) + 1),
            -((p - 2) * (h - 1) - 2),
            -h + 3,
        ]);
        let v2 = poly(&[1, -((p - 3) * (q - 3) + 1), -q + 7]);
        for (scheme, want) in [(Scheme::OddV1, v1), (Scheme::OddV2, v2)] {
            let got = computed(pair, scheme)?;
            if got != want {
                return Err(format!("{pair} {scheme}: got {got}, closed form {want}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} polynomials"))
}

fn odd_v1_spot_values() -> Outcome {
    for pair in desk_pairs(true) {
        let (p, h) = (i64::from(pair.p), i64::from(pair.h));
        let got = computed(pair, Scheme::OddV1)?;
        if got.eval(&i(-1)) != i(-2) || got.eval(&i(0)) != i(3 - h) {
            return Err(format!(
                "{pair}: P(-1) = {}, P(0) = {}",
                got.eval(&i(-1)),
                got.eval(&i(0))
            ));
        }
        let special = match (pair.h, pair.p) {
            (2, _) => Some(poly(&[1, -(p - 2), -(p - 4), 1])),
            (_, 4) => Some(poly(&[1, -h, -2 * (h - 2), -h + 3])),
            _ => None,
        };
        if let Some(want) = special {
            if got != want {
                return Err(format!("{pair}: got {got}, expected {want}"));
            }
        }
        if pair.h == 3 {
            let want = poly(&[1, -(2 * p - 5), -(2 * p - 6), 0]);
            if got != want {
                return Err(format!("{pair}: got {got}, expected X({want}) reduction"));
            }
        }
    }
    Ok("P(-1) = -2, P(0) = 3 - h, h = 2, h = 3 and p = 4 forms".into())
}

fn regularity() -> Outcome {
    let mut n = 0;
    for pair in desk_pairs(false).chain(desk_pairs(true)) {
        for scheme in Scheme::applicable(&pair) {
            let r = analyze(pair, scheme).map_err(|e| format!("{pair} {scheme}: {e}"))?;
            let exceptional = (pair.p, pair.h) == (4, 2) && scheme != Scheme::EvenQ;
            if r.regular == exceptional {
                return Err(format!("{pair} {scheme}: regular = {}", r.regular));
            }
            n += 1;
        }
    }
    Ok(format!(
        "{n} cases, only p = 4, h = 2 odd schemes non-regular"
    ))
}

fn recurrences(depth: u32) -> Outcome {
    let cases = [
        (5, 4, Scheme::EvenQ),
        (6, 4, Scheme::EvenQ),
        (5, 7, Scheme::OddV1),
        (4, 7, Scheme::OddV1),
        (5, 7, Scheme::OddV2),
        (4, 5, Scheme::OddV1),
    ];
    for (p, q, s) in cases {
        let pair = validate(p, q).map_err(|e| e.to_string())?;
        let system = build_system(pair, s).map_err(|e| e.to_string())?;
        let tree = generate(&system, depth, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
        let poly = characteristic_polynomial(&splitting_matrix(&system));
        let counts = level_counts(&tree);
        if !recurrence_check(&counts, &poly).map_err(|e| e.to_string())? {
            return Err(format!("{pair} {s}: counts {counts} break {poly}"));
        }
    }
    Ok(format!("{} cases at depth {depth}", cases.len()))
}

fn pentagrid_fibonacci() -> Outcome {
    let system = build_system(validate(5, 4).map_err(|e| e.to_string())?, Scheme::EvenQ)
        .map_err(|e| e.to_string())?;
    let tree = generate(&system, 12, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
    let got = level_counts(&tree).to_u64().ok_or("counts overflow")?;
    let fib = fibonacci_tree(12, Color::White).level_counts();
    if got != fib {
        return Err(format!("{got:?} vs {fib:?}"));
    }
    // every other Fibonacci number: 1, 3, 8, 21, ... with a(n+1) = 3a(n) - a(n-1)
    let (mut prev, mut cur) = (0u64, 1u64);
    for (n, &c) in got.iter().enumerate() {
        if c != cur {
            return Err(format!("level {n}: {c} is not F_{}", 2 * n + 2));
        }
        (prev, cur) = (cur, 3 * cur - prev);
    }
    Ok("levels 0..12".into())
}

fn numeration_round_trip(bound: u64, brute: u64) -> Outcome {
    let mut n = 0;
    for pair in desk_pairs(false).chain(desk_pairs(true)) {
        for scheme in Scheme::applicable(&pair) {
            let r = analyze(pair, scheme).map_err(|e| e.to_string())?;
            if !r.regular {
                continue;
            }
            let b = r.digit_bound.to_u64().ok_or("digit bound overflow")?;
            let bs = basis(pair, scheme, r.polynomial.degree())
                .and_then(|x| x.extended_past(bound))
                .map_err(|e| e.to_string())?;
            let table = MaximalTable::new(&bs, b, bound).map_err(|e| e.to_string())?;
            let terms = bs.terms_up_to(bound);
            for v in 0..=bound {
                let rep = table
                    .maximal(v)
                    .map_err(|e| format!("{pair} {scheme} {v}: {e}"))?;
                if rep.digits.iter().any(|&d| d > b) {
                    return Err(format!("{pair} {scheme} {v}: digit above {b}"));
                }
                let back = decode(&rep, &bs, b).map_err(|e| e.to_string())?;
                if back != BigInt::from(v) {
                    return Err(format!("{pair} {scheme}: {v} decodes to {back}"));
                }
                if v <= brute && v > 0 {
                    let longer = brute_force_representations(v, &terms, b, rep.digits.len() + 1);
                    if !longer.is_empty() {
                        return Err(format!("{pair} {scheme}: {v} has longer {:?}", longer[0]));
                    }
                }
            }
            n += 1;
        }
    }
    Ok(format!(
        "{n} regular cases on 0..={bound}, brute force on 1..={brute}"
    ))
}

fn isometries() -> Outcome {
    // fixed probes, spread over the disc
    let pts: Vec<DiscPoint> = (0..20)
        .map(|k| DiscPoint::from_polar(0.9 * (k as f64 + 0.5) / 20.0, 2.4 * k as f64))
        .collect();
    for w in pts.windows(3) {
        let m = DiscIsometry::reflection(&w[0], &w[1]);
        let z = w[2];
        if m.apply(&m.apply(&z)).euclid(&z) > 1e-9 {
            return Err("reflection is not an involution".into());
        }
        let d0 = crate::geometry::distance(&w[0], &z);
        let d1 = crate::geometry::distance(&m.apply(&w[0]), &m.apply(&z));
        if (d0 - d1).abs() > 1e-9 {
            return Err(format!("distance {d0} became {d1}"));
        }
    }
    Ok(format!("{} probes", pts.len() - 2))
}

fn tiles_and_closure() -> Outcome {
    for (p, q) in [(5, 4), (4, 5), (5, 7)] {
        let pair = validate(p, q).map_err(|e| e.to_string())?;
        let t = base_tile(pair);
        for k in 0..t.sides() {
            let a = t.angle(k);
            if (a - TAU / q as f64).abs() > 1e-9 || (reflect(&t, k).angle(0) - a).abs() > 1e-9 {
                return Err(format!("{pair}: angle {a} at vertex {k}"));
            }
        }
        let tess = tessellate(pair, 3, DEFAULT_TILE_CAP).map_err(|e| e.to_string())?;
        let c = tess.closure();
        if !c.ok(pair.q) {
            return Err(format!("{pair}: {} closure defects", c.defects.len()));
        }
    }
    Ok("angles 2pi/q, q tiles at every interior vertex".into())
}

fn midlines_and_zigzags() -> Outcome {
    for (p, q) in [(4, 5), (5, 7)] {
        let pair = validate(p, q).map_err(|e| e.to_string())?;
        let tess = tessellate(pair, 5, DEFAULT_TILE_CAP).map_err(|e| e.to_string())?;
        let ids = &tess.tile_vertices[0];
        let edge = (ids[1], ids[0]);
        let line = h_midpoint_line_through(&tess, edge, 2, 2).map_err(|e| e.to_string())?;
        if line.midpoints.len() < 5 || line.residual > 1e-9 {
            return Err(format!(
                "{pair}: residual {} over {}",
                line.residual,
                line.midpoints.len()
            ));
        }
        let want = (pair.h as f64 * TAU / q as f64).min(TAU - pair.h as f64 * TAU / q as f64);
        let path = zigzag_through(&tess, edge, 2, 2).map_err(|e| e.to_string())?;
        for w in path.windows(2) {
            let got = crate::geometry::disc::angle(
                &tess.vertex(w[0].1),
                &tess.vertex(w[0].0),
                &tess.vertex(w[1].1),
            );
            if (got - want).abs() > 1e-9 {
                return Err(format!("{pair}: zig-zag angle {got}, want {want}"));
            }
        }
    }
    Ok("collinear midpoints and constant zig-zag angle".into())
}

fn covers() -> Outcome {
    let pair = validate(5, 7).map_err(|e| e.to_string())?;
    let tess = tessellate(pair, 3, DEFAULT_TILE_CAP).map_err(|e| e.to_string())?;
    let v = tess.tile_vertices[0][0];
    let mut out = Vec::new();
    for (scheme, copies) in [(Scheme::OddV1, 7), (Scheme::OddV2, 14)] {
        let c = cover_around(&tess, scheme, v).map_err(|e| e.to_string())?;
        if c.copies != copies || !c.closes(1e-9) {
            return Err(format!(
                "{scheme}: {} copies, residual {}, arcs {}",
                c.copies, c.residual, c.arc_sum
            ));
        }
        out.push(format!("{scheme} {copies} copies"));
    }
    Ok(out.join(", "))
}

fn dual_numbering() -> Outcome {
    let r = check_bijection(3).map_err(|e| e.to_string())?;
    if !r.ok() {
        return Err(format!(
            "missed {}, doubly {}, on ray {}, residual {}",
            r.missed.len(),
            r.doubly_assigned.len(),
            r.assigned_on_excluded_ray.len(),
            r.excluded_ray_residual
        ));
    }
    Ok(format!(
        "{} vertices numbered, {} on the excluded ray",
        r.covered,
        r.excluded.len()
    ))
}

pub fn run(scope: Scope, fault: Option<Fault>) -> VerifyReport {
    let want = |s: Scope| scope == Scope::All || scope == s;
    let mut checks: Vec<(&str, Box<dyn Fn() -> Outcome>)> = Vec::new();
    if want(Scope::Core) {
        checks.push((
            "core/even-q-closed-form",
            Box::new(move || even_closed_form(fault)),
        ));
        checks.push(("core/odd-closed-forms", Box::new(odd_closed_forms)));
        checks.push(("core/odd-v1-spot-values", Box::new(odd_v1_spot_values)));
        checks.push(("core/regularity", Box::new(regularity)));
        checks.push(("core/tree-recurrence", Box::new(|| recurrences(6))));
        checks.push(("core/pentagrid-fibonacci", Box::new(pentagrid_fibonacci)));
    }
    if want(Scope::Numeration) {
        checks.push((
            "numeration/round-trip",
            Box::new(|| numeration_round_trip(2000, 300)),
        ));
    }
    if want(Scope::Geometry) {
        checks.push(("geometry/isometries", Box::new(isometries)));
        checks.push(("geometry/tiles-and-closure", Box::new(tiles_and_closure)));
        checks.push((
            "geometry/midlines-and-zigzags",
            Box::new(midlines_and_zigzags),
        ));
        checks.push(("geometry/sector-covers", Box::new(covers)));
    }
    if want(Scope::Dual) {
        checks.push(("dual/bijection", Box::new(dual_numbering)));
    }
    let results = checks
        .into_iter()
        .map(|(name, f)| {
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                name: name.into(),
                passed,
                detail,
            }
        })
        .collect();
    VerifyReport { results }
}
