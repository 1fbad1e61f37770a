//! Monic integer polynomials of small degree.
//!
//! Coefficients are stored most significant first, so `X^2 - 3X + 1` is
//! `[1, -3, 1]`. All arithmetic is exact.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bigjson;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SplittingPolynomial {
    #[serde(with = "bigjson::vec")]
    coefficients: Vec<BigInt>,
}

impl SplittingPolynomial {
    /// Builds a polynomial from descending coefficients. Leading zeros are
    /// trimmed; the zero polynomial is represented by `[0]`.
    pub fn new(coefficients: Vec<BigInt>) -> Self {
        let first = coefficients.iter().position(|c| !c.is_zero());
        let coefficients = match first {
            Some(i) => coefficients[i..].to_vec(),
            None => vec![BigInt::zero()],
        };
        Self { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `X - root`.
    pub fn linear(root: &BigInt) -> Self {
        Self::new(vec![BigInt::one(), -root.clone()])
    }

    /// `X^m + X^(m-1) + ... + 1`.
    pub fn geometric(m: usize) -> Self {
        Self::new(vec![BigInt::one(); m + 1])
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.coefficients[0].is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.len() == 1 && self.coefficients[0].is_zero()
    }

    pub fn constant_term(&self) -> &BigInt {
        self.coefficients
            .last()
            .expect("non-empty coefficient list")
    }

    /// Coefficient of `X^k`.
    pub fn coefficient(&self, k: usize) -> BigInt {
        let d = self.degree();
        if k > d {
            BigInt::zero()
        } else {
            self.coefficients[d - k].clone()
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Evaluates at `num/den` and returns `den^deg * P(num/den)`, whose sign
    /// is the sign of `P(num/den)` when `den > 0`.
    pub fn eval_scaled(&self, num: &BigInt, den: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        // Horner on the homogenized form sum c_i num^(d-i) den^i.
        for (i, c) in self.coefficients.iter().enumerate() {
            if i == 0 {
                acc = c.clone();
            } else {
                den_pow *= den;
                acc = acc * num + c * &den_pow;
            }
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, c| {
                acc * z + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
            })
    }

    pub fn coefficients_f64(&self) -> Vec<f64> {
        self.coefficients
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.degree().max(other.degree()) + 1;
        let out = (0..n)
            .rev()
            .map(|k| self.coefficient(k) + other.coefficient(k))
            .collect();
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coefficients.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Long division by a monic divisor; returns `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.degree();
        if self.degree() < dd {
            return (Self::from_i64(&[0]), self.clone());
        }
        let mut rem = self.coefficients.clone();
        let qlen = self.degree() - dd + 1;
        let mut quot = Vec::with_capacity(qlen);
        for i in 0..qlen {
            let lead = rem[i].clone();
            for (j, c) in divisor.coefficients.iter().enumerate() {
                rem[i + j] -= &lead * c;
            }
            quot.push(lead);
        }
        (Self::new(quot), Self::new(rem[qlen..].to_vec()))
    }

    /// Exact quotient when `divisor` divides `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_monic(divisor);
        r.is_zero().then_some(q)
    }

    /// Coefficients `c_0..c_{d-1}` of the linear recurrence
    /// `u_{n+d} = sum c_i u_{n+i}` read off `X^d - sum c_i X^i`.
    pub fn recurrence_coefficients(&self) -> Vec<BigInt> {
        (0..self.degree()).map(|i| -self.coefficient(i)).collect()
    }

    /// Integer divisors of the constant term, positive and negative, in
    /// increasing absolute value. Empty when the constant term is zero.
    pub fn constant_divisors(&self) -> Vec<BigInt> {
        let c = self.constant_term().abs();
        if c.is_zero() {
            return Vec::new();
        }
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut d = BigInt::one();
        while &d * &d <= c {
            if c.is_multiple_of(&d) {
                small.push(d.clone());
                let other = &c / &d;
                if other != d {
                    large.push(other);
                }
            }
            d += 1;
        }
        small
            .into_iter()
            .chain(large.into_iter().rev())
            .flat_map(|d| [d.clone(), -d])
            .collect()
    }
}

impl fmt::Display for SplittingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut wrote = false;
        for (i, c) in self.coefficients.iter().enumerate() {
            let k = d - i;
            if c.is_zero() && !(d == 0) {
                continue;
            }
            let abs = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if wrote {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let show_coeff = !abs.is_one() || k == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{k}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}
