//! Exact scalars: elements of the Laurent-polynomial ring Q[u, u^-1].
//!
//! The marker `u` stands for the transcendental constant 2πi, so every
//! coefficient that would otherwise be a complex number stays an exact
//! rational attached to a power of `u`. Series code never touches floating
//! point; `u` is only substituted numerically inside oracle tests.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

/// An exact element of Q[u, u^-1], stored as a sparse map u-exponent -> rational.
///
/// Invariant: no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct ExactScalar {
    terms: BTreeMap<i64, BigRational>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::default()
    }

    pub fn one() -> Self {
        ExactScalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(0, r);
        }
        ExactScalar { terms }
    }

    /// p/q as an ordinary rational (u-exponent 0).
    pub fn from_ratio(p: i64, q: i64) -> Self {
        ExactScalar::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// The monomial u^k.
    pub fn u_pow(k: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(k, BigRational::one());
        ExactScalar { terms }
    }

    /// (p/q) * u^k.
    pub fn ratio_u(p: i64, q: i64, k: i64) -> Self {
        let mut s = ExactScalar::from_ratio(p, q);
        s.mul_u_pow_assign(k);
        s
    }

    /// The constant 2πi, i.e. `u`.
    pub fn two_pi_i() -> Self {
        ExactScalar::u_pow(1)
    }

    /// The constant πi, i.e. `u/2`.
    pub fn pi_i() -> Self {
        ExactScalar::ratio_u(1, 2, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    /// Iterate over (u-exponent, coefficient) pairs, ascending in exponent.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    /// Coefficient of u^k (zero when absent).
    pub fn coeff(&self, k: i64) -> BigRational {
        self.terms.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The rational part if the scalar is a pure u^0 element (or zero).
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&0) {
                return Some(c.clone());
            }
        }
        None
    }

    fn insert_term(&mut self, k: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &ExactScalar) {
        for (&k, c) in &other.terms {
            self.insert_term(k, c.clone());
        }
    }

    pub fn scale_assign(&mut self, r: &BigRational) {
        if r.is_zero() {
            self.terms.clear();
            return;
        }
        for c in self.terms.values_mut() {
            *c *= r;
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut s = self.clone();
        s.scale_assign(r);
        s
    }

    pub fn mul_u_pow_assign(&mut self, k: i64) {
        if k == 0 {
            return;
        }
        let old = std::mem::take(&mut self.terms);
        for (j, c) in old {
            self.terms.insert(j + k, c);
        }
    }

    pub fn mul_u_pow(&self, k: i64) -> Self {
        let mut s = self.clone();
        s.mul_u_pow_assign(k);
        s
    }

    /// Substitute a numeric value for u (normally 2πi) and evaluate.
    pub fn eval_complex(&self, u: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&k, c) in &self.terms {
            let r = c.to_f64().expect("rational out of f64 range");
            acc += u.powi(k as i32) * r;
        }
        acc
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        out.add_assign(&-rhs);
        out
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = ExactScalar::zero();
        for (&j, a) in &self.terms {
            for (&k, b) in &rhs.terms {
                out.insert_term(j + k, a * b);
            }
        }
        out
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        &self + &rhs
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: ExactScalar) -> ExactScalar {
        &self - &rhs
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        &self * &rhs
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

/// Render a rational as "p" or "p/q".
pub fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", fmt_rational(c))?;
            } else if c.is_one() {
                write!(f, "u^{}", k)?;
            } else {
                write!(f, "{}*u^{}", fmt_rational(c), k)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Generalized binomial coefficient binom(n, k) for integer (possibly negative) n.
pub fn binom(n: i64, k: u32) -> BigRational {
    let mut num = BigRational::one();
    for j in 0..k as i64 {
        num *= BigRational::from_integer(BigInt::from(n - j));
    }
    let mut den = BigRational::one();
    for j in 1..=k as i64 {
        den *= BigRational::from_integer(BigInt::from(j));
    }
    num / den
}

/// Binomial coefficient for nonnegative arguments, as an exact integer.
pub fn binom_int(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// n! as an exact integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for j in 2..=n {
        acc *= BigInt::from(j);
    }
    acc
}

/// Check a rational is within `tol` of an integer and return that integer.
pub fn round_to_integer(x: f64, tol: f64) -> Option<i64> {
    let r = x.round();
    if (x - r).abs() <= tol {
        Some(r as i64)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_normalization() {
        let a = ExactScalar::ratio_u(1, 2, 2);
        let b = ExactScalar::ratio_u(-1, 2, 2);
        assert!((&a + &b).is_zero());
        let c = &a * &a;
        assert_eq!(c.coeff(4), BigRational::new(BigInt::from(1), BigInt::from(4)));
        assert!(c.coeff(2).is_zero());
    }

    #[test]
    fn u_powers_multiply() {
        let u = ExactScalar::two_pi_i();
        let u3 = &(&u * &u) * &u;
        assert_eq!(u3, ExactScalar::u_pow(3));
        assert_eq!(ExactScalar::pi_i().scale(&BigRational::from_integer(BigInt::from(2))), u);
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(binom(-1, 3), BigRational::from_integer(BigInt::from(-1)));
        assert_eq!(binom(-2, 2), BigRational::from_integer(BigInt::from(3)));
        assert_eq!(binom(4, 2), BigRational::from_integer(BigInt::from(6)));
        assert_eq!(binom(1, 5), BigRational::zero());
        assert_eq!(binom_int(5, 2), BigInt::from(10));
    }

    #[test]
    fn display_forms() {
        let s = &ExactScalar::ratio_u(-1, 12, 2) + &ExactScalar::from_int(3);
        assert_eq!(format!("{}", s), "3 + -1/12*u^2");
        assert_eq!(format!("{}", ExactScalar::zero()), "0");
    }

    #[test]
    fn complex_evaluation() {
        let u = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let s = ExactScalar::ratio_u(-1, 12, 2);
        let v = s.eval_complex(u);
        // -(2πi)^2/12 = 4π²/12 = π²/3
        assert!((v.re - std::f64::consts::PI.powi(2) / 3.0).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
    }
}
