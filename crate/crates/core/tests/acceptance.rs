//! Acceptance suite. One line per criterion; exits non-zero if any fails.
//!
//! Reference values are recomputed here from first principles (closed
//! forms, Faddeev-LeVerrier, Durand-Kerner, Mobius maps, a reachability DP)
//! rather than read back from the library.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use hypq::dual::{assign_vertex, check_bijection, fibonacci_tree, layout, side_numbering, Color};
use hypq::geometry::{
    base_tile, cover_around, cover_copies, h_midpoint_line_through, reflect, tessellate,
    zigzag_through, DiscIsometry, DiscPoint, Tessellation, DEFAULT_TILE_CAP,
};
use hypq::numeration::{basis, MaximalTable};
use hypq::spectral::analyze;
use hypq::tree::{generate, level_counts, SpanningTree, DEFAULT_NODE_CAP};
use hypq::{build_system, splitting_matrix, validate, Scheme, SchlafliPair};

// Tolerances.
const GEOM_TOL: f64 = 1e-9;
const BETA_TOL: f64 = 1e-9;
const UNIT_MARGIN: f64 = 1e-9;
const SAME_POINT: f64 = 1e-6;

// Runtime budgets.
const EXACT_BUDGET: Duration = Duration::from_secs(1);
const TREE_BUDGET: Duration = Duration::from_secs(30);
const NUMERATION_CASE_BUDGET: Duration = Duration::from_secs(60);
const GEOMETRY_BUDGET: Duration = Duration::from_secs(60);
const DUAL_BUDGET: Duration = Duration::from_secs(30);

type Check = Result<String, String>;

// ---------------------------------------------------------------- integers

type Poly = Vec<i128>;

fn big(v: &BigInt) -> i128 {
    v.to_i128().expect("desk-scale integer")
}

fn lib_poly(pair: SchlafliPair, scheme: Scheme) -> Poly {
    analyze(pair, scheme)
        .unwrap()
        .polynomial
        .coefficients()
        .iter()
        .map(big)
        .collect()
}

/// Characteristic polynomial det(XI - A), descending, by Faddeev-LeVerrier.
fn charpoly(a: &[Vec<i128>]) -> Poly {
    let n = a.len();
    let mul = |x: &[Vec<i128>], y: &[Vec<i128>]| -> Vec<Vec<i128>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum())
                    .collect()
            })
            .collect()
    };
    let mut c = vec![0i128; n + 1];
    c[n] = 1;
    let mut m = vec![vec![0i128; n]; n];
    for k in 1..=n {
        let mut next = mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c[n - k + 1];
        }
        m = next;
        let am = mul(a, &m);
        let tr: i128 = (0..n).map(|i| am[i][i]).sum();
        assert_eq!(tr % k as i128, 0);
        c[n - k] = -tr / k as i128;
    }
    c.reverse();
    c
}

fn matrix_of(pair: SchlafliPair, scheme: Scheme) -> Vec<Vec<i128>> {
    let m = splitting_matrix(&build_system(pair, scheme).unwrap());
    m.entries
        .iter()
        .map(|r| r.iter().map(big).collect())
        .collect()
}

fn horner(p: &[i128], x: i128) -> i128 {
    p.iter().fold(0, |acc, &c| acc * x + c)
}

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p[0] == 0 {
        p.remove(0);
    }
    p
}

fn mul(a: &[i128], b: &[i128]) -> Poly {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact quotient by a monic divisor, if the remainder vanishes.
fn divide(p: &[i128], d: &[i128]) -> Option<Poly> {
    if p.len() < d.len() {
        return None;
    }
    let mut r = p.to_vec();
    let mut q = vec![0; p.len() - d.len() + 1];
    for i in 0..q.len() {
        let c = r[i];
        q[i] = c;
        for (j, dj) in d.iter().enumerate() {
            r[i + j] -= c * dj;
        }
    }
    r.iter().all(|&x| x == 0).then_some(q)
}

/// Removes powers of X and the factors X + 1, X^2 + X + 1.
fn strip(p: &[i128]) -> Poly {
    let mut p = trim(p.to_vec());
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    loop {
        if let Some(q) = divide(&p, &[1, 1]) {
            p = q;
        } else if let Some(q) = divide(&p, &[1, 1, 1]) {
            p = q;
        } else {
            return p;
        }
    }
}

// ---------------------------------------------------------------- roots

fn roots(p: &[i128]) -> Vec<Complex64> {
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let c: Vec<f64> = p.iter().map(|&x| x as f64 / p[0] as f64).collect();
    let eval = |z: Complex64| {
        c.iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &x| acc * z + x)
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32) * (1.0 + c.iter().map(|x| x.abs()).fold(0.0, f64::max)))
        .collect();
    for _ in 0..2000 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Pisot test on a stripped core: one real root above 1, all others inside.
fn pisot(core: &[i128]) -> bool {
    let mut r = roots(core);
    r.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let Some(top) = r.first() else { return false };
    top.im.abs() < 1e-9
        && top.re > 1.0 + UNIT_MARGIN
        && r[1..].iter().all(|z| z.norm() < 1.0 - UNIT_MARGIN)
}

fn dominant_real(p: &[i128]) -> f64 {
    roots(p)
        .into_iter()
        .filter(|z| z.im.abs() < 1e-7)
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

// ---------------------------------------------------------------- closed forms

fn even_form(p: i128, h: i128) -> Poly {
    vec![1, -((p - 3) * (h - 1) + 1), -h + 3]
}

fn v1_form(p: i128, h: i128) -> Poly {
    vec![
        1,
        -((p - 3) * (h - 1) + 1),
        -((p - 2) * (h - 1) - 2),
        -h + 3,
    ]
}

fn v2_form(p: i128, q: i128) -> Poly {
    vec![1, -((p - 3) * (q - 3) + 1), -q + 7]
}

fn closed_form(pair: SchlafliPair, scheme: Scheme) -> Option<Poly> {
    let (p, q, h) = (pair.p as i128, pair.q as i128, pair.h as i128);
    match scheme {
        Scheme::EvenQ => Some(even_form(p, h)),
        Scheme::OddV1 => Some(v1_form(p, h)),
        Scheme::OddV2 => Some(v2_form(p, q)),
        Scheme::OddLegacy => None,
    }
}

fn pairs(
    ps: std::ops::RangeInclusive<i64>,
    qs: impl Iterator<Item = i64> + Clone,
) -> Vec<SchlafliPair> {
    ps.flat_map(|p| qs.clone().filter_map(move |q| validate(p, q).ok()))
        .collect()
}

fn desk() -> Vec<SchlafliPair> {
    pairs(4..=12, 4..=13)
}

fn pretty(p: &[i128]) -> String {
    format!("{p:?}")
}

// ---------------------------------------------------------------- criteria

fn timed(budget: Duration, f: impl FnOnce() -> Check) -> Check {
    let t = Instant::now();
    let r = f();
    let e = t.elapsed();
    match r {
        Ok(s) if e <= budget => Ok(format!("{s}; {:.2}s", e.as_secs_f64())),
        Ok(s) => Err(format!(
            "{s}; took {:.2}s, budget {:.0}s",
            e.as_secs_f64(),
            budget.as_secs_f64()
        )),
        Err(s) => Err(s),
    }
}

fn c1_even_closed_form() -> Check {
    let mut n = 0;
    for pair in pairs(4..=12, (4..=12).step_by(2)) {
        let m = matrix_of(pair, Scheme::EvenQ);
        let want = even_form(pair.p as i128, pair.h as i128);
        let got = charpoly(&m);
        if got != want || lib_poly(pair, Scheme::EvenQ) != want {
            return Err(format!(
                "{pair}: det(XI - M) = {}, closed form {}",
                pretty(&got),
                pretty(&want)
            ));
        }
        n += 1;
    }
    Ok(format!("{n} pairs exact"))
}

fn c2_odd_closed_forms() -> Check {
    let mut n = 0;
    for pair in pairs(4..=12, (5..=13).step_by(2)) {
        for scheme in [Scheme::OddV1, Scheme::OddV2] {
            let want = closed_form(pair, scheme).unwrap();
            let got = charpoly(&matrix_of(pair, scheme));
            if got != want || lib_poly(pair, scheme) != want {
                return Err(format!(
                    "{pair} {scheme}: {} vs closed form {}",
                    pretty(&got),
                    pretty(&want)
                ));
            }
            n += 1;
        }
    }
    Ok(format!("{n} polynomials exact"))
}

fn c3_spot_values() -> Check {
    let mut checked = [0; 4];
    for pair in pairs(4..=12, (5..=13).step_by(2)) {
        let (p, h) = (pair.p as i128, pair.h as i128);
        let cubic = charpoly(&matrix_of(pair, Scheme::OddV1));
        if horner(&cubic, -1) != -2 || horner(&cubic, 0) != -h + 3 {
            return Err(format!(
                "{pair}: P(-1) = {}, P(0) = {}",
                horner(&cubic, -1),
                horner(&cubic, 0)
            ));
        }
        checked[0] += 1;
        if h == 3 {
            // constant term vanishes; the rest is X^2 - (2p-5)X - (2p-6)
            let reduced = divide(&cubic, &[1, 0]).ok_or("X does not divide the h = 3 cubic")?;
            if reduced != vec![1, -(2 * p - 5), -(2 * p - 6)] {
                return Err(format!("{pair}: h = 3 reduction {}", pretty(&reduced)));
            }
            checked[1] += 1;
        }
        if h == 2 && cubic != vec![1, -(p - 2), -(p - 4), 1] {
            return Err(format!("{pair}: h = 2 cubic {}", pretty(&cubic)));
        }
        if h == 2 {
            checked[2] += 1;
        }
        if p == 4 {
            if cubic != vec![1, -h, -2 * (h - 2), -h + 3] {
                return Err(format!("{pair}: p = 4 cubic {}", pretty(&cubic)));
            }
            checked[3] += 1;
        }
    }
    if checked.iter().any(|&c| c == 0) {
        return Err(format!("a family was never exercised: {checked:?}"));
    }
    Ok(format!(
        "P(-1), P(0) on {}, h=3 on {}, h=2 on {}, p=4 on {}",
        checked[0], checked[1], checked[2], checked[3]
    ))
}

fn c4_regularity() -> Check {
    let pair = validate(4, 5).unwrap();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;

    let v1 = analyze(pair, Scheme::OddV1).map_err(|e| e.to_string())?;
    let p1: Poly = v1.polynomial.coefficients().iter().map(big).collect();
    let golden_factor = divide(&p1, &[1, -1]).ok_or("X - 1 does not divide the {4,5} cubic")?;
    if golden_factor != vec![1, -1, -1] {
        return Err(format!(
            "{{4,5}} odd-v1: cofactor of X - 1 is {}",
            pretty(&golden_factor)
        ));
    }
    let exact_one = v1
        .all_roots
        .roots
        .iter()
        .any(|r| r.exact == Some(BigInt::from(1)));
    let irr: Poly = v1
        .roots
        .irrational_factor
        .coefficients()
        .iter()
        .map(big)
        .collect();
    if !exact_one || irr != vec![1, -1, -1] {
        return Err(format!(
            "{{4,5}} odd-v1: exact root 1 {exact_one}, remaining factor {}",
            pretty(&irr)
        ));
    }
    if (v1.beta - golden).abs() > BETA_TOL || (dominant_real(&p1) - golden).abs() > BETA_TOL {
        return Err(format!("{{4,5}} odd-v1: beta {} vs {golden}", v1.beta));
    }
    let v2 = analyze(pair, Scheme::OddV2).map_err(|e| e.to_string())?;
    let p2: Poly = v2.polynomial.coefficients().iter().map(big).collect();
    if p2 != mul(&[1, -1], &[1, -2]) {
        return Err(format!("{{4,5}} odd-v2: {}", pretty(&p2)));
    }
    if v1.regular || v2.regular || pisot(&strip(&p1)) || pisot(&strip(&p2)) {
        return Err("{4,5} reported regular".into());
    }

    let mut n = 0;
    for pair in desk() {
        for scheme in Scheme::applicable(&pair) {
            if (pair.p, pair.h) == (4, 2) {
                continue;
            }
            let r = analyze(pair, scheme).map_err(|e| format!("{pair} {scheme}: {e}"))?;
            let poly: Poly = r.polynomial.coefficients().iter().map(big).collect();
            if poly != charpoly(&matrix_of(pair, scheme)) {
                return Err(format!(
                    "{pair} {scheme}: polynomial {} is not det(XI - M)",
                    pretty(&poly)
                ));
            }
            let oracle = pisot(&strip(&poly));
            if !r.regular || !oracle {
                return Err(format!(
                    "{pair} {scheme}: library regular = {}, root oracle {oracle}",
                    r.regular
                ));
            }
            n += 1;
        }
    }
    Ok(format!("{{4,5}} odd-v1 (X-1)(X^2-X-1), odd-v2 (X-1)(X-2), both non-regular; {n} other cases regular"))
}

/// Level sizes from parent links: BFS ids put every parent before its children.
fn own_counts(tree: &SpanningTree) -> Vec<u64> {
    let n = tree.len();
    let mut level = vec![0u32; n + 1];
    let mut counts = vec![0u64; tree.depth() as usize + 1];
    for id in 1..=n as u64 {
        let l = tree.parent(id).map_or(0, |p| level[p as usize] + 1);
        level[id as usize] = l;
        counts[l as usize] += 1;
    }
    counts
}

fn satisfies(counts: &[u64], poly: &[i128]) -> bool {
    let d = poly.len() - 1;
    counts.windows(d + 1).all(|w| {
        let rhs: i128 = (0..d).map(|i| -poly[d - i] * w[i] as i128).sum();
        rhs == w[d] as i128
    })
}

fn c5_recurrences() -> Check {
    let cases = [
        (5, 4, Scheme::EvenQ, 8),
        (6, 4, Scheme::EvenQ, 8),
        (5, 7, Scheme::OddV1, 8),
        (4, 7, Scheme::OddV1, 8),
        (5, 7, Scheme::OddV2, 7),
        (4, 5, Scheme::OddV1, 8),
    ];
    let mut out = Vec::new();
    for (p, q, scheme, depth) in cases {
        let pair = validate(p, q).unwrap();
        let tree = generate(
            &build_system(pair, scheme).unwrap(),
            depth,
            DEFAULT_NODE_CAP,
        )
        .map_err(|e| format!("{pair} {scheme}: {e}"))?;
        let counts = own_counts(&tree);
        let poly = closed_form(pair, scheme).unwrap();
        if level_counts(&tree).to_u64().as_deref() != Some(&counts[..]) {
            return Err(format!(
                "{pair} {scheme}: level_counts disagrees with parent links"
            ));
        }
        if counts.len() <= poly.len() - 1 || !satisfies(&counts, &poly) {
            return Err(format!(
                "{pair} {scheme}: {counts:?} break {}",
                pretty(&poly)
            ));
        }
        out.push(format!("{pair} {scheme} d{depth}"));
    }
    Ok(out.join(", "))
}

fn c6_pentagrid_fibonacci() -> Check {
    let pair = validate(5, 4).unwrap();
    let tree = generate(
        &build_system(pair, Scheme::EvenQ).unwrap(),
        12,
        DEFAULT_NODE_CAP,
    )
    .map_err(|e| e.to_string())?;
    let counts = own_counts(&tree);
    // F_2, F_4, F_6, ... from F_{n+1} = F_n + F_{n-1}
    let mut fib = vec![0u64, 1];
    while fib.len() < 27 {
        let k = fib.len();
        fib.push(fib[k - 1] + fib[k - 2]);
    }
    let want: Vec<u64> = (0..=12).map(|n| fib[2 * n + 2]).collect();
    let tree_of_colours = fibonacci_tree(12, Color::White).level_counts();
    if counts != want || tree_of_colours != want {
        return Err(format!(
            "spanning tree {counts:?}, Fibonacci tree {tree_of_colours:?}, expected {want:?}"
        ));
    }
    Ok(format!("{:?}", &counts))
}

/// Basis from the tree's first levels and the closed-form recurrence.
fn own_basis(pair: SchlafliPair, scheme: Scheme, poly: &[i128], past: u64) -> Vec<u64> {
    let d = poly.len() - 1;
    let tree = generate(
        &build_system(pair, scheme).unwrap(),
        d as u32 - 1,
        DEFAULT_NODE_CAP,
    )
    .unwrap();
    let mut t = own_counts(&tree);
    while *t.last().unwrap() <= past {
        let k = t.len();
        let next: i128 = (0..d).map(|i| -poly[d - i] * t[k - d + i] as i128).sum();
        t.push(next as u64);
    }
    t
}

/// Longest digit string (digits 0..=b, leading digit nonzero) for each
/// value up to `bound`, by reachability over term prefixes.
fn longest_lengths(terms: &[u64], b: u64, bound: u64) -> Vec<Option<usize>> {
    let size = bound as usize + 1;
    let mut any = vec![vec![false; size]];
    any[0][0] = true;
    for &t in terms {
        let prev = any.last().unwrap();
        let mut next = vec![false; size];
        for v in 0..size {
            next[v] = (0..=b)
                .take_while(|d| d * t <= v as u64)
                .any(|d| prev[v - (d * t) as usize]);
        }
        any.push(next);
    }
    (0..size)
        .map(|v| {
            if v == 0 {
                return Some(1);
            }
            (1..=terms.len()).rev().find(|&len| {
                let t = terms[len - 1];
                (1..=b)
                    .take_while(|d| d * t <= v as u64)
                    .any(|d| any[len - 1][v - (d * t) as usize])
            })
        })
        .collect()
}

fn c7_numeration() -> Check {
    const ROUND_TRIP: u64 = 10_000;
    const BRUTE: u64 = 2_000;
    let mut n = 0;
    let mut slowest = Duration::ZERO;
    // values whose longest representation is not unique; reported, not asserted
    let mut ties = 0u64;
    let mut tied_cases = 0;
    for pair in desk() {
        for scheme in Scheme::applicable(&pair) {
            // the legacy scheme has no closed form; its matrix is expanded here
            let poly =
                closed_form(pair, scheme).unwrap_or_else(|| charpoly(&matrix_of(pair, scheme)));
            let r = analyze(pair, scheme).map_err(|e| e.to_string())?;
            if !r.regular {
                continue;
            }
            let start = Instant::now();
            let beta = dominant_real(&poly);
            let mut b = beta.floor() as i128;
            while horner(&poly, b + 1) <= 0 {
                b += 1;
            }
            if BigInt::from(b) != r.digit_bound {
                return Err(format!(
                    "{pair} {scheme}: digit bound {} vs floor(beta) = {b}",
                    r.digit_bound
                ));
            }
            let b = b as u64;
            let terms = own_basis(pair, scheme, &poly, ROUND_TRIP);
            let lib = basis(pair, scheme, terms.len()).map_err(|e| e.to_string())?;
            if lib
                .terms
                .iter()
                .map(|t| t.to_u64().unwrap())
                .collect::<Vec<_>>()
                != terms
            {
                return Err(format!(
                    "{pair} {scheme}: basis {:?} vs {terms:?}",
                    lib.terms
                ));
            }
            let table = MaximalTable::new(&lib, b, ROUND_TRIP).map_err(|e| e.to_string())?;
            let longest = longest_lengths(&terms, b, BRUTE);
            for v in 0..=ROUND_TRIP {
                let rep = table
                    .maximal(v)
                    .map_err(|e| format!("{pair} {scheme} {v}: {e}"))?;
                if let Some(&d) = rep.digits.iter().find(|&&d| d > b) {
                    return Err(format!("{pair} {scheme} {v}: digit {d} above {b}"));
                }
                let value: u64 = rep
                    .digits
                    .iter()
                    .rev()
                    .zip(&terms)
                    .map(|(d, t)| d * t)
                    .sum();
                if value != v {
                    return Err(format!("{pair} {scheme}: {v} -> {rep} -> {value}"));
                }
                if v <= BRUTE && longest[v as usize] != Some(rep.digits.len()) {
                    return Err(format!(
                        "{pair} {scheme}: {v} -> {rep} has {} digits, longest is {:?}",
                        rep.digits.len(),
                        longest[v as usize]
                    ));
                }
            }
            let case_ties = (0..=ROUND_TRIP)
                .filter(|&v| table.maximal_count(v) > 1)
                .count() as u64;
            ties += case_ties;
            tied_cases += usize::from(case_ties > 0);
            slowest = slowest.max(start.elapsed());
            if start.elapsed() > NUMERATION_CASE_BUDGET {
                return Err(format!(
                    "{pair} {scheme}: {:.1}s",
                    start.elapsed().as_secs_f64()
                ));
            }
            n += 1;
        }
    }
    Ok(format!(
        "{n} regular cases: round trip 0..={ROUND_TRIP}, maximal on 0..={BRUTE}; \
         longest not unique for {ties} values in {tied_cases} cases; slowest case {:.2}s",
        slowest.as_secs_f64()
    ))
}

// ---------------------------------------------------------------- disc oracles

fn c(p: &DiscPoint) -> Complex64 {
    Complex64::new(p.x, p.y)
}

/// z -> (z - a) / (1 - conj(a) z)
fn mobius(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

fn hdist(u: &DiscPoint, v: &DiscPoint) -> f64 {
    let (a, b) = (c(u), c(v));
    let num = 2.0 * (a - b).norm_sqr();
    let den = (1.0 - a.norm_sqr()) * (1.0 - b.norm_sqr());
    (1.0 + num / den).acosh()
}

/// Angle at `v` between the geodesics towards `a` and `b`, in [0, pi].
fn angle_at(v: &DiscPoint, a: &DiscPoint, b: &DiscPoint) -> f64 {
    let (wa, wb) = (mobius(c(v), c(a)), mobius(c(v), c(b)));
    let d = (wa.arg() - wb.arg()).rem_euclid(TAU);
    d.min(TAU - d)
}

fn hmid(u: &DiscPoint, v: &DiscPoint) -> DiscPoint {
    let w = mobius(c(u), c(v));
    let r = (w.norm().atanh() / 2.0).tanh();
    let m = w / w.norm() * r;
    // inverse of z -> (z - a)/(1 - conj(a) z)
    let a = c(u);
    let z = (m + a) / (Complex64::new(1.0, 0.0) + a.conj() * m);
    DiscPoint::new(z.re, z.im)
}

/// Hyperbolic distance from `z` to the geodesic through `a` and `b`.
fn dist_to_line(a: &DiscPoint, b: &DiscPoint, z: &DiscPoint) -> f64 {
    let wb = mobius(c(a), c(b));
    let rot = Complex64::from_polar(1.0, -wb.arg());
    let w = mobius(c(a), c(z)) * rot;
    (2.0 * w.im.abs() / (1.0 - w.norm_sqr())).asinh()
}

/// Groups nearby points; returns the cluster index of each point.
struct Clusters {
    cells: HashMap<(i64, i64), Vec<usize>>,
    reps: Vec<DiscPoint>,
}

impl Clusters {
    fn new() -> Self {
        Clusters {
            cells: HashMap::new(),
            reps: Vec::new(),
        }
    }

    fn id(&mut self, p: &DiscPoint) -> usize {
        let key = (
            (p.x / SAME_POINT).floor() as i64,
            (p.y / SAME_POINT).floor() as i64,
        );
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.cells.get(&(key.0 + dx, key.1 + dy)) {
                    if let Some(&i) = ids.iter().find(|&&i| self.reps[i].euclid(p) < SAME_POINT) {
                        return i;
                    }
                }
            }
        }
        self.reps.push(*p);
        self.cells.entry(key).or_default().push(self.reps.len() - 1);
        self.reps.len() - 1
    }
}

fn c8_geometry() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let point = |rng: &mut StdRng| {
        DiscPoint::from_polar(0.95 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
    };
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (u, v, z, w) = (
            point(&mut rng),
            point(&mut rng),
            point(&mut rng),
            point(&mut rng),
        );
        if u.euclid(&v) < 1e-3 {
            continue;
        }
        let m = DiscIsometry::reflection(&u, &v);
        worst = worst.max(m.apply(&m.apply(&z)).euclid(&z));
        worst = worst
            .max(m.apply(&u).euclid(&u))
            .max(m.apply(&v).euclid(&v));
        worst = worst.max((hdist(&z, &w) - hdist(&m.apply(&z), &m.apply(&w))).abs());
        let g = DiscIsometry::from_origin(&u)
            .compose(&DiscIsometry::rotation(rng.gen_range(0.0..TAU)))
            .compose(&m);
        worst = worst.max((hdist(&z, &w) - hdist(&g.apply(&z), &g.apply(&w))).abs());
        worst = worst.max(g.inverse().apply(&g.apply(&z)).euclid(&z));
    }
    if worst > GEOM_TOL {
        return Err(format!("isometry probes off by {worst:e}"));
    }

    let mut notes = vec![format!("isometries {worst:.1e}")];
    for (p, q) in [(5, 4), (4, 5), (5, 7)] {
        let pair = validate(p, q).unwrap();
        let depth = 4;
        let tess = tessellate(pair, depth, DEFAULT_TILE_CAP).map_err(|e| e.to_string())?;
        let want = TAU / q as f64;
        let mut clusters = Clusters::new();
        let mut around: HashMap<usize, Vec<f64>> = HashMap::new();
        for t in &tess.tiles {
            let n = t.vertices.len();
            for k in 0..n {
                let a = angle_at(
                    &t.vertices[k],
                    &t.vertices[(k + 1) % n],
                    &t.vertices[(k + n - 1) % n],
                );
                if (a - want).abs() > GEOM_TOL {
                    return Err(format!("{pair}: tile {} angle {a}", t.id));
                }
                around
                    .entry(clusters.id(&t.vertices[k]))
                    .or_default()
                    .push(a);
            }
        }
        let mut interior = 0;
        for t in tess.tiles.iter().filter(|t| t.generation + pair.h <= depth) {
            for v in &t.vertices {
                let angles = &around[&clusters.id(v)];
                let sum: f64 = angles.iter().sum();
                if angles.len() != q as usize || (sum - TAU).abs() > GEOM_TOL {
                    return Err(format!(
                        "{pair}: {} tiles, angle sum {sum} at an interior vertex",
                        angles.len()
                    ));
                }
                interior += 1;
            }
        }
        if interior == 0 || around.values().any(|a| a.len() > q as usize) {
            return Err(format!("{pair}: no interior vertex or overlapping tiles"));
        }
        let r = tess.closure();
        if !r.ok(pair.q) {
            return Err(format!("{pair}: library closure report {r:?}"));
        }
        notes.push(format!("{pair} closure"));
    }

    for (p, q) in [(4, 5), (5, 7)] {
        let pair = validate(p, q).unwrap();
        let tess = tessellate(pair, 5, DEFAULT_TILE_CAP).map_err(|e| e.to_string())?;
        let zig = pair.h as f64 * TAU / q as f64;
        let zig = zig.min(TAU - zig);
        let mut residual: f64 = 0.0;
        for e in base_edges(&tess) {
            let path = zigzag_through(&tess, e, 2, 2).map_err(|x| x.to_string())?;
            for w in path.windows(2) {
                let a = angle_at(
                    &tess.vertex(w[0].1),
                    &tess.vertex(w[0].0),
                    &tess.vertex(w[1].1),
                );
                if (a - zig).abs() > GEOM_TOL {
                    return Err(format!("{pair}: zig-zag angle {a}, want {zig}"));
                }
            }
            let mids: Vec<DiscPoint> = path
                .iter()
                .map(|&(a, b)| hmid(&tess.vertex(a), &tess.vertex(b)))
                .collect();
            if mids.len() < 5 {
                return Err(format!("{pair}: only {} midpoints", mids.len()));
            }
            let (first, last) = (mids[0], mids[mids.len() - 1]);
            residual = residual.max(
                mids.iter()
                    .map(|m| dist_to_line(&first, &last, m))
                    .fold(0.0, f64::max),
            );
            let lib = h_midpoint_line_through(&tess, e, 2, 2).map_err(|x| x.to_string())?;
            residual = residual.max(lib.residual);
        }
        if residual > GEOM_TOL {
            return Err(format!("{pair}: midpoint residual {residual:e}"));
        }
        notes.push(format!("{pair} midpoints {residual:.1e}"));
    }

    // reflection keeps the angle
    let t = base_tile(validate(5, 4).unwrap());
    if (angle_at(
        &reflect(&t, 0).vertices[0],
        &reflect(&t, 0).vertices[1],
        &reflect(&t, 0).vertices[4],
    ) - PI / 2.0)
        .abs()
        > GEOM_TOL
    {
        return Err("reflected tile angle".into());
    }
    Ok(notes.join(", "))
}

fn base_edges(tess: &Tessellation) -> Vec<(usize, usize)> {
    let ids = &tess.tile_vertices[0];
    (0..ids.len())
        .map(|i| (ids[(i + 1) % ids.len()], ids[i]))
        .collect()
}

fn c9_covers() -> Check {
    let pair = validate(5, 7).unwrap();
    let tess = tessellate(pair, 3, DEFAULT_TILE_CAP).map_err(|e| e.to_string())?;
    let v = tess.tile_vertices[0][0];
    let mut out = Vec::new();
    for (scheme, want) in [(Scheme::OddV1, 7), (Scheme::OddV2, 14)] {
        let copies = cover_copies(&tess, scheme, v).map_err(|e| e.to_string())?;
        if copies.len() != want {
            return Err(format!("{scheme}: {} copies", copies.len()));
        }
        let arg = |p: &DiscPoint| p.y.atan2(p.x);
        let mut next = vec![0; copies.len()];
        let mut residual: f64 = 0.0;
        for (i, a) in copies.iter().enumerate() {
            let (j, d) = copies
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, b)| {
                    let da = (arg(&a.rays[1].ideal) - arg(&b.rays[0].ideal)).rem_euclid(TAU);
                    (
                        j,
                        da.min(TAU - da) + a.rays[1].origin.euclid(&b.rays[0].origin),
                    )
                })
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            next[i] = j;
            residual = residual.max(d);
        }
        let mut seen = vec![false; copies.len()];
        let mut k = 0;
        for _ in 0..copies.len() {
            seen[k] = true;
            k = next[k];
        }
        let arcs: f64 = copies
            .iter()
            .map(|s| (arg(&s.rays[0].ideal) - arg(&s.rays[1].ideal)).rem_euclid(TAU))
            .sum();
        if residual > GEOM_TOL || k != 0 || seen.iter().any(|s| !s) || (arcs - TAU).abs() > GEOM_TOL
        {
            return Err(format!(
                "{scheme}: residual {residual:e}, arcs {arcs}, cycle {}",
                k == 0
            ));
        }
        if !cover_around(&tess, scheme, v)
            .map_err(|e| e.to_string())?
            .closes(GEOM_TOL)
        {
            return Err(format!("{scheme}: library cover report does not close"));
        }
        out.push(format!("{scheme} {want} copies, residual {residual:.1e}"));
    }
    Ok(out.join(", "))
}

fn c10_dual() -> Check {
    const DEPTH: u32 = 3;
    let lay = layout(5, DEPTH + 1, DEFAULT_TILE_CAP).map_err(|e| e.to_string())?;
    let ray = lay.excluded_ray;
    let ahead = {
        let w = mobius(c(&ray.origin), c(&ray.ideal));
        w / w.norm()
    };
    let on_ray = |z: &DiscPoint| {
        let w = mobius(c(&ray.origin), c(z)) / ahead;
        (2.0 * w.im.abs() / (1.0 - w.norm_sqr())).asinh() < GEOM_TOL && w.re > -GEOM_TOL
    };

    let mut clusters = Clusters::new();
    let mut sector_vertices = std::collections::BTreeSet::new();
    let mut assigned: HashMap<usize, Vec<u64>> = HashMap::new();
    for (node, tile) in lay.tree.nodes.iter().zip(&lay.tiles) {
        let labels = side_numbering(tile, tile.parent_edge).map_err(|e| e.to_string())?;
        let at = assign_vertex(node.color, tile, &labels);
        assigned.entry(clusters.id(&at)).or_default().push(node.id);
        if node.level <= DEPTH {
            for v in &tile.vertices {
                sector_vertices.insert(clusters.id(v));
            }
        }
    }
    let doubly: Vec<_> = assigned.values().filter(|n| n.len() > 1).collect();
    if !doubly.is_empty() {
        return Err(format!(
            "{} vertices numbered twice, e.g. {:?}",
            doubly.len(),
            doubly[0]
        ));
    }
    let mut covered = 0;
    let mut excluded = 0;
    for &v in &sector_vertices {
        let p = clusters.reps[v];
        match (assigned.contains_key(&v), on_ray(&p)) {
            (true, false) => covered += 1,
            (false, true) => excluded += 1,
            (true, true) => return Err(format!("{p:?} is on the excluded ray but numbered")),
            (false, false) => {
                return Err(format!("{p:?} is off the excluded ray and not numbered"))
            }
        }
    }
    if excluded == 0 {
        return Err("no vertex on the excluded ray".into());
    }
    let report = check_bijection(DEPTH).map_err(|e| e.to_string())?;
    if !report.ok() {
        return Err(format!(
            "library bijection report fails: missed {}",
            report.missed.len()
        ));
    }
    Ok(format!(
        "{covered} vertices numbered once, {excluded} on the excluded ray"
    ))
}

fn run_bin(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hypq"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "hypq {} exited with {:?}",
            args.join(" "),
            out.status.code()
        ));
    }
    Ok(out.stdout)
}

fn c11_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [&[&str]; 5] = [
        &["analyze", "-p", "5", "-q", "7", "--json"],
        &["analyze", "-p", "4", "-q", "5"],
        &[
            "tree", "-p", "5", "-q", "4", "--depth", "6", "--format", "dot",
        ],
        &[
            "tree", "-p", "5", "-q", "7", "--depth", "4", "--format", "json",
        ],
        &["tree", "-p", "6", "-q", "4", "--depth", "5"],
    ];
    for args in runs {
        if run_bin(args)? != run_bin(args)? {
            return Err(format!("hypq {} differs between runs", args.join(" ")));
        }
    }
    let mut n = runs.len();
    for what in ["tessellation", "sectors", "midlines", "zigzag"] {
        let files: Vec<_> = ["a.svg", "b.svg"]
            .iter()
            .map(|f| dir.path().join(format!("{what}-{f}")))
            .collect();
        for f in &files {
            run_bin(&[
                "render",
                "-p",
                "5",
                "-q",
                "7",
                "--what",
                what,
                "--depth",
                "3",
                "-o",
                f.to_str().unwrap(),
            ])?;
        }
        let (a, b) = (
            std::fs::read(&files[0]).unwrap(),
            std::fs::read(&files[1]).unwrap(),
        );
        if a != b || a.is_empty() {
            return Err(format!("render {what} differs between runs"));
        }
        roxmltree::Document::parse(std::str::from_utf8(&a).unwrap())
            .map_err(|e| format!("{what}: {e}"))?;
        n += 1;
    }
    let f = dir.path().join("dual.svg");
    let g = dir.path().join("dual2.svg");
    run_bin(&[
        "render",
        "-p",
        "4",
        "-q",
        "5",
        "--what",
        "dual45",
        "--depth",
        "3",
        "-o",
        f.to_str().unwrap(),
    ])?;
    run_bin(&[
        "render",
        "-p",
        "4",
        "-q",
        "5",
        "--what",
        "dual45",
        "--depth",
        "3",
        "-o",
        g.to_str().unwrap(),
    ])?;
    if std::fs::read(&f).unwrap() != std::fs::read(&g).unwrap() {
        return Err("render dual45 differs between runs".into());
    }
    Ok(format!("{} commands byte-identical", n + 1))
}

fn main() {
    let criteria: [(&str, Box<dyn Fn() -> Check>); 11] = [
        (
            "even-q closed form",
            Box::new(|| timed(EXACT_BUDGET, c1_even_closed_form)),
        ),
        (
            "odd-v1 and odd-v2 closed forms",
            Box::new(|| timed(EXACT_BUDGET, c2_odd_closed_forms)),
        ),
        (
            "odd-v1 spot values",
            Box::new(|| timed(EXACT_BUDGET, c3_spot_values)),
        ),
        (
            "{4,5} non-regular, all else regular",
            Box::new(c4_regularity),
        ),
        (
            "tree counts follow the recurrence",
            Box::new(|| timed(TREE_BUDGET, c5_recurrences)),
        ),
        (
            "pentagrid Fibonacci counts",
            Box::new(c6_pentagrid_fibonacci),
        ),
        (
            "numeration round trip and maximality",
            Box::new(c7_numeration),
        ),
        (
            "geometry properties",
            Box::new(|| timed(GEOMETRY_BUDGET, c8_geometry)),
        ),
        ("sector covers of {5,7}", Box::new(c9_covers)),
        (
            "{4,5} dual numbering",
            Box::new(|| timed(DUAL_BUDGET, c10_dual)),
        ),
        ("determinism", Box::new(c11_determinism)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
