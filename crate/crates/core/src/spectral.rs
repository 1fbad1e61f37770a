//! Roots of splitting polynomials and the Pisot verdict.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bigjson;
use crate::error::{Error, Result};
use crate::polynomial::SplittingPolynomial;
use crate::schlafli::{
    build_system, characteristic_polynomial, splitting_matrix, zero_multiplicity_warnings,
    IntegerMatrix, Scheme, SchlafliPair, SplittingSystem,
};

/// Moduli closer to 1 than this are not trusted numerically.
pub const UNIT_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    pub multiplicity: u32,
    /// Set when the root is an integer found by exact division.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_big")]
    pub exact: Option<BigInt>,
}

impl Root {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn modulus(&self) -> f64 {
        self.value().norm()
    }

    pub fn is_real(&self) -> bool {
        self.im == 0.0
    }
}

mod opt_big {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &Option<BigInt>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(b) => bigjson::serialize(b, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<BigInt>, D::Error> {
        Option::<bigjson::JsonInt>::deserialize(d).map(|o| o.map(|j| j.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// Greatest real root, if any.
    pub beta: Option<f64>,
    /// Largest estimated error over the numeric roots.
    pub precision: f64,
    /// What is left after exact integer roots are divided out.
    pub irrational_factor: SplittingPolynomial,
}

impl RootSet {
    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity as usize).sum()
    }

    pub fn beta_root(&self) -> Option<&Root> {
        self.roots
            .iter()
            .filter(|r| r.is_real())
            .max_by(|a, b| a.re.total_cmp(&b.re))
    }
}

fn quadratic_roots(b: f64, c: f64) -> [Complex64; 2] {
    // X^2 + bX + c
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let s = disc.sqrt();
        let q = -0.5 * (b + if b >= 0.0 { s } else { -s });
        if q == 0.0 {
            [Complex64::new(0.0, 0.0); 2]
        } else {
            [Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
        }
    } else {
        let s = (-disc).sqrt() / 2.0;
        [Complex64::new(-b / 2.0, s), Complex64::new(-b / 2.0, -s)]
    }
}

fn newton_real(poly: &SplittingPolynomial, mut x: f64) -> f64 {
    let deriv = derivative(poly);
    for _ in 0..3 {
        let d = deriv.eval_f64(x);
        if d == 0.0 {
            break;
        }
        let step = poly.eval_f64(x) / d;
        if !step.is_finite() {
            break;
        }
        x -= step;
    }
    x
}

fn newton_complex(poly: &SplittingPolynomial, mut z: Complex64) -> Complex64 {
    let deriv = derivative(poly);
    for _ in 0..3 {
        let d = deriv.eval_complex(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = poly.eval_complex(z) / d;
        if !step.is_finite() {
            break;
        }
        z -= step;
    }
    z
}

pub fn derivative(poly: &SplittingPolynomial) -> SplittingPolynomial {
    let d = poly.degree();
    if d == 0 {
        return SplittingPolynomial::from_i64(&[0]);
    }
    SplittingPolynomial::new(
        poly.coefficients()[..d]
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigInt::from(d - i))
            .collect(),
    )
}

/// Numeric roots of a monic polynomial of degree at most 3 with no integer
/// roots.
fn numeric_roots(poly: &SplittingPolynomial) -> Vec<Complex64> {
    let c = poly.coefficients_f64();
    match poly.degree() {
        0 => vec![],
        1 => vec![Complex64::new(-c[1], 0.0)],
        2 => quadratic_roots(c[1], c[2])
            .into_iter()
            .map(|z| {
                if z.im == 0.0 {
                    Complex64::new(newton_real(poly, z.re), 0.0)
                } else {
                    newton_complex(poly, z)
                }
            })
            .collect(),
        3 => {
            let (a, b, cc) = (c[1], c[2], c[3]);
            // X = t - a/3 gives t^3 + pt + q
            let p = b - a * a / 3.0;
            let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + cc;
            let shift = -a / 3.0;
            let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
            let real = if disc < 0.0 {
                // three distinct real roots
                let r = 2.0 * (-p / 3.0).sqrt();
                let phi = ((3.0 * q) / (p * r)).clamp(-1.0, 1.0).acos() / 3.0;
                (0..3)
                    .map(|k| r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift)
                    .collect::<Vec<_>>()
            } else {
                let s = disc.sqrt();
                let u = (-q / 2.0 + s).cbrt();
                let v = (-q / 2.0 - s).cbrt();
                vec![u + v + shift]
            };
            let mut roots: Vec<Complex64> = real
                .iter()
                .map(|&x| Complex64::new(newton_real(poly, x), 0.0))
                .collect();
            if roots.len() == 1 {
                // deflate by the real root: X^2 + (a + r)X + (b + r(a + r))
                let r = roots[0].re;
                let b1 = a + r;
                let c1 = b + r * b1;
                for z in quadratic_roots(b1, c1) {
                    if z.im == 0.0 {
                        roots.push(Complex64::new(newton_real(poly, z.re), 0.0));
                    } else {
                        roots.push(newton_complex(poly, z));
                    }
                }
            }
            roots
        }
        d => panic!("degree {d} is outside the supported range"),
    }
}

pub fn find_roots(poly: &SplittingPolynomial) -> RootSet {
    assert!(poly.is_monic(), "polynomial must be monic");
    assert!(poly.degree() <= 3, "degree must be at most 3");
    let mut rest = poly.clone();
    let mut exact: Vec<(BigInt, u32)> = Vec::new();

    let mut zeros = 0;
    while rest.degree() > 0 && rest.constant_term().is_zero() {
        rest = rest
            .exact_div(&SplittingPolynomial::linear(&BigInt::zero()))
            .unwrap();
        zeros += 1;
    }
    if zeros > 0 {
        exact.push((BigInt::zero(), zeros));
    }
    for d in poly_divisors(&rest) {
        let mut m = 0;
        while rest.degree() > 0 {
            match rest.exact_div(&SplittingPolynomial::linear(&d)) {
                Some(q) => {
                    rest = q;
                    m += 1;
                }
                None => break,
            }
        }
        if m > 0 {
            exact.push((d, m));
        }
    }

    let mut roots: Vec<Root> = exact
        .into_iter()
        .map(|(d, m)| Root {
            re: d.to_f64().unwrap_or(f64::NAN),
            im: 0.0,
            multiplicity: m,
            exact: Some(d),
        })
        .collect();
    let deriv = derivative(poly);
    let mut precision: f64 = 0.0;
    for z in numeric_roots(&rest) {
        let slope = deriv.eval_complex(z).norm();
        let err = if slope > 0.0 {
            poly.eval_complex(z).norm() / slope
        } else {
            f64::INFINITY
        };
        precision = precision.max(err);
        // conjugate pairs get exactly mirrored imaginary parts
        let z = if z.im.abs() < 1e-300 {
            Complex64::new(z.re, 0.0)
        } else {
            z
        };
        roots.push(Root {
            re: z.re,
            im: z.im,
            multiplicity: 1,
            exact: None,
        });
    }
    let pair_fix: Vec<usize> = (0..roots.len()).filter(|&i| roots[i].im > 0.0).collect();
    for i in pair_fix {
        if let Some(j) = (0..roots.len())
            .find(|&j| roots[j].im < 0.0 && (roots[j].re - roots[i].re).abs() < 1e-6)
        {
            let (re, im) = (roots[i].re, roots[i].im);
            roots[j].re = re;
            roots[j].im = -im;
        }
    }
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    let beta = roots
        .iter()
        .filter(|r| r.is_real())
        .map(|r| r.re)
        .fold(None, |acc: Option<f64>, x| {
            Some(acc.map_or(x, |a| a.max(x)))
        });
    RootSet {
        roots,
        beta,
        precision,
        irrational_factor: rest,
    }
}

fn poly_divisors(poly: &SplittingPolynomial) -> Vec<BigInt> {
    if poly.degree() == 0 {
        Vec::new()
    } else {
        poly.constant_divisors()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDecomposition {
    pub stripped_x_power: u32,
    pub unit_factors: Vec<SplittingPolynomial>,
    pub core: SplittingPolynomial,
}

impl FactorDecomposition {
    pub fn product(&self) -> SplittingPolynomial {
        let mut acc = self.core.clone();
        for f in &self.unit_factors {
            acc = acc.mul(f);
        }
        for _ in 0..self.stripped_x_power {
            acc = acc.mul(&SplittingPolynomial::linear(&BigInt::zero()));
        }
        acc
    }
}

pub fn strip_factors(poly: &SplittingPolynomial) -> FactorDecomposition {
    let x = SplittingPolynomial::linear(&BigInt::zero());
    let mut core = poly.clone();
    let mut stripped_x_power = 0;
    while core.degree() > 0 && core.constant_term().is_zero() {
        core = core.exact_div(&x).expect("constant term is zero");
        stripped_x_power += 1;
    }
    let mut unit_factors = Vec::new();
    for m in 1..=2 {
        let g = SplittingPolynomial::geometric(m);
        while core.degree() >= m {
            match core.exact_div(&g) {
                Some(q) => {
                    core = q;
                    unit_factors.push(g.clone());
                }
                None => break,
            }
        }
    }
    FactorDecomposition {
        stripped_x_power,
        unit_factors,
        core,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reason {
    /// The polynomial, up to powers of X, is Pisot.
    PisotCore,
    /// Pisot once the cyclotomic factors `1 + X + ... + X^m` are removed.
    PisotAfterStripping,
    RootOnUnitCircle,
    NonPisotCore,
    DominantRootNotAboveOne,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Reason::PisotCore => "PisotCore",
            Reason::PisotAfterStripping => "PisotAfterStripping",
            Reason::RootOnUnitCircle => "RootOnUnitCircle",
            Reason::NonPisotCore => "NonPisotCore",
            Reason::DominantRootNotAboveOne => "DominantRootNotAboveOne",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugateModulus {
    pub root: Root,
    pub modulus: f64,
    /// The modulus was decided by exact arithmetic.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PisotCertificate {
    pub pisot: bool,
    pub reason: Reason,
    pub beta: Option<f64>,
    pub others: Vec<ConjugateModulus>,
}

/// Pisot test. `reason` is `PisotCore` on success and names the first
/// obstruction otherwise.
pub fn is_pisot(core: &SplittingPolynomial) -> Result<PisotCertificate> {
    if core.constant_term().is_zero() {
        return Err(Error::InvalidInput(format!(
            "{core} has a zero constant term"
        )));
    }
    let set = find_roots(core);
    let Some(beta_root) = set.beta_root().cloned() else {
        return Ok(PisotCertificate {
            pisot: false,
            reason: Reason::DominantRootNotAboveOne,
            beta: None,
            others: describe_others(&set, None),
        });
    };
    let beta = beta_root.re;
    let others = describe_others(&set, Some(&beta_root));
    let beta_above_one = match &beta_root.exact {
        Some(b) => *b > BigInt::one(),
        None => beta > 1.0,
    };
    if !beta_above_one {
        return Ok(PisotCertificate {
            pisot: false,
            reason: Reason::DominantRootNotAboveOne,
            beta: Some(beta),
            others,
        });
    }
    let mut verdict = Reason::PisotCore;
    for o in &others {
        if o.exact {
            if o.modulus == 1.0 {
                verdict = worst(verdict, Reason::RootOnUnitCircle);
            } else if o.modulus > 1.0 {
                verdict = worst(verdict, Reason::NonPisotCore);
            }
        } else if (o.modulus - 1.0).abs() < UNIT_MARGIN {
            return Err(Error::IndeterminateModulus { modulus: o.modulus });
        } else if o.modulus > 1.0 {
            verdict = worst(verdict, Reason::NonPisotCore);
        }
    }
    Ok(PisotCertificate {
        pisot: verdict == Reason::PisotCore,
        reason: verdict,
        beta: Some(beta),
        others,
    })
}

fn worst(a: Reason, b: Reason) -> Reason {
    if a == Reason::PisotCore {
        b
    } else {
        a
    }
}

/// Moduli of all roots but one copy of `beta`. Integer roots and complex
/// pairs coming from an integer quadratic get exact moduli.
fn describe_others(set: &RootSet, beta: Option<&Root>) -> Vec<ConjugateModulus> {
    let quad_pair_modulus = if set.irrational_factor.degree() == 2 {
        let c = set
            .irrational_factor
            .constant_term()
            .to_f64()
            .unwrap_or(f64::NAN);
        let disc = set
            .irrational_factor
            .coefficient(1)
            .to_f64()
            .unwrap_or(f64::NAN)
            .powi(2)
            - 4.0 * c;
        (disc < 0.0).then(|| (set.irrational_factor.constant_term().clone(), c.sqrt()))
    } else {
        None
    };
    let mut out = Vec::new();
    let mut skipped = false;
    for r in &set.roots {
        let mut copies = r.multiplicity;
        if !skipped && beta.is_some_and(|b| b == r) {
            copies -= 1;
            skipped = true;
        }
        for _ in 0..copies {
            let (modulus, exact) = match (&r.exact, &quad_pair_modulus) {
                (Some(d), _) => (d.abs().to_f64().unwrap_or(f64::INFINITY), true),
                (None, Some((c, m))) if !r.is_real() => {
                    // |z|^2 is the integer constant term of its quadratic
                    (if c.is_one() { 1.0 } else { *m }, true)
                }
                _ => (r.modulus(), false),
            };
            out.push(ConjugateModulus {
                root: r.clone(),
                modulus,
                exact,
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub pair: SchlafliPair,
    pub scheme: Scheme,
    pub system: SplittingSystem,
    pub matrix: IntegerMatrix,
    pub polynomial: SplittingPolynomial,
    pub decomposition: FactorDecomposition,
    /// Roots of the core.
    pub roots: RootSet,
    /// Roots of the full polynomial.
    pub all_roots: RootSet,
    /// Dominant root of the full polynomial.
    pub beta: f64,
    pub pisot: bool,
    pub regular: bool,
    pub reason: Reason,
    pub certificate: PisotCertificate,
    #[serde(with = "bigjson")]
    pub digit_bound: BigInt,
    pub warnings: Vec<String>,
}

pub fn analyze(pair: SchlafliPair, scheme: Scheme) -> Result<SpectralReport> {
    analyze_system(build_system(pair, scheme)?)
}

pub fn analyze_system(system: SplittingSystem) -> Result<SpectralReport> {
    let matrix = splitting_matrix(&system);
    let polynomial = characteristic_polynomial(&matrix);
    analyze_polynomial(system, matrix, polynomial)
}

/// Runs the verdict chain on a given polynomial; `analyze_system` passes the
/// characteristic polynomial of the matrix.
pub fn analyze_polynomial(
    system: SplittingSystem,
    matrix: IntegerMatrix,
    polynomial: SplittingPolynomial,
) -> Result<SpectralReport> {
    let decomposition = strip_factors(&polynomial);
    let roots = find_roots(&decomposition.core);
    let all_roots = find_roots(&polynomial);
    let x_free = polynomial_without_x(&polynomial, decomposition.stripped_x_power);

    let whole = is_pisot(&x_free)?;
    let core = is_pisot(&decomposition.core)?;
    let pisot = whole.pisot;
    let regular = core.pisot;
    let reason = match (pisot, regular) {
        (true, _) => Reason::PisotCore,
        (false, true) => Reason::PisotAfterStripping,
        (false, false) => core.reason,
    };

    let beta_root = all_roots.beta_root().cloned();
    let beta = beta_root.as_ref().map_or(f64::NAN, |r| r.re);
    let digit_bound = match beta_root.as_ref().and_then(|r| r.exact.clone()) {
        Some(b) => b,
        None => floor_of_greatest_root(&polynomial, beta),
    };

    let mut warnings = zero_multiplicity_warnings(&system);
    for r in &roots.roots {
        if r.is_real() && r.re < 0.0 && r.exact.is_none() && (r.re.abs() - 1.0).abs() < 0.5 {
            warnings.push(format!(
                "conjugate root {:.10} is negative; its modulus is {:.10}",
                r.re,
                r.re.abs()
            ));
        }
    }
    if !regular {
        warnings.push(format!(
            "core {} is not Pisot ({})",
            decomposition.core, core.reason
        ));
    }
    Ok(SpectralReport {
        pair: system.pair,
        scheme: system.scheme,
        system,
        matrix,
        polynomial,
        decomposition,
        roots,
        all_roots,
        beta,
        pisot,
        regular,
        reason,
        certificate: core,
        digit_bound,
        warnings,
    })
}

fn polynomial_without_x(poly: &SplittingPolynomial, k: u32) -> SplittingPolynomial {
    let x = SplittingPolynomial::linear(&BigInt::zero());
    (0..k).fold(poly.clone(), |acc, _| {
        acc.exact_div(&x).expect("stripped power divides")
    })
}

/// `floor(beta)` for the greatest real root, corrected upwards with exact
/// signs: a monic polynomial is positive beyond its greatest real root.
fn floor_of_greatest_root(poly: &SplittingPolynomial, beta: f64) -> BigInt {
    let mut n = BigInt::from(beta.floor() as i64);
    while !poly.eval(&(&n + 1)).is_positive() {
        n += 1;
    }
    n
}
