//! Dense rational Laurent series in a single formal variable.
//!
//! Internal utility for expansions that live entirely in Q: the coordinate
//! change coefficients (ln(1+z))^m (1+z)^p and the Laurent division behind
//! the q^0 part of the exponential P-series. Coefficients are known on
//! [val, val + coeffs.len() - 1]; below `val` the series is genuinely zero,
//! above the window it is unknown.

use num::{BigInt, BigRational, One, Zero};

use crate::scalar::binom;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatLaurent {
    val: i64,
    coeffs: Vec<BigRational>,
}

impl RatLaurent {
    pub fn new(val: i64, coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty());
        RatLaurent { val, coeffs }
    }

    pub fn val(&self) -> i64 {
        self.val
    }

    /// Highest exponent with a known coefficient.
    pub fn known_hi(&self) -> i64 {
        self.val + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, e: i64) -> BigRational {
        assert!(
            e <= self.known_hi(),
            "coefficient z^{} requested beyond computed order z^{}",
            e,
            self.known_hi()
        );
        if e < self.val {
            BigRational::zero()
        } else {
            self.coeffs[(e - self.val) as usize].clone()
        }
    }

    pub fn mul(&self, other: &RatLaurent) -> RatLaurent {
        let val = self.val + other.val;
        let hi = i64::min(
            self.known_hi() + other.val,
            other.known_hi() + self.val,
        );
        let len = (hi - val + 1) as usize;
        let mut coeffs = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        RatLaurent { val, coeffs }
    }

    /// Multiplicative inverse; requires a nonzero leading coefficient.
    pub fn invert(&self) -> RatLaurent {
        let lead = &self.coeffs[0];
        assert!(!lead.is_zero(), "cannot invert: zero leading coefficient");
        let n = self.coeffs.len();
        let mut inv = vec![BigRational::zero(); n];
        inv[0] = BigRational::one() / lead;
        for k in 1..n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &inv[k - j];
            }
            inv[k] = -acc / lead;
        }
        RatLaurent {
            val: -self.val,
            coeffs: inv,
        }
    }

    /// Integer power, negative exponents via inversion.
    pub fn pow(&self, e: i64) -> RatLaurent {
        if e == 0 {
            return self.one_like(self.coeffs.len());
        }
        let base = if e < 0 { self.invert() } else { self.clone() };
        let mut acc = base.clone();
        for _ in 1..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    fn one_like(&self, len: usize) -> RatLaurent {
        let mut coeffs = vec![BigRational::zero(); len];
        coeffs[0] = BigRational::one();
        RatLaurent { val: 0, coeffs }
    }

    /// Termwise derivative d/dz.
    pub fn derivative(&self) -> RatLaurent {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.val + i as i64;
            coeffs.push(c * BigRational::from_integer(BigInt::from(e)));
        }
        // the z^0 coefficient maps to 0*z^-1; keep window aligned
        RatLaurent {
            val: self.val - 1,
            coeffs,
        }
    }
}

/// ln(1+z) with coefficients through z^(n_terms).
pub fn log1p(n_terms: usize) -> RatLaurent {
    let mut coeffs = Vec::with_capacity(n_terms);
    for k in 1..=n_terms as i64 {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        coeffs.push(BigRational::new(BigInt::from(sign), BigInt::from(k)));
    }
    RatLaurent::new(1, coeffs)
}

/// (1+z)^p for integer p (possibly negative), through z^(n_terms-1).
pub fn one_plus_z_pow(p: i64, n_terms: usize) -> RatLaurent {
    let coeffs = (0..n_terms as u32).map(|j| binom(p, j)).collect();
    RatLaurent::new(0, coeffs)
}

/// Coefficients of (ln(1+z))^m (1+z)^p, reliable through z^hi.
///
/// The valuation is exactly m for every integer m (negative m goes through
/// series inversion of ln(1+z)/z).
pub fn coordinate_change_series(p: i64, m: i64, hi: i64) -> RatLaurent {
    let n_terms = usize::try_from(hi - m + 1).expect("empty coordinate-change window") + 2;
    let log = log1p(n_terms + m.unsigned_abs() as usize + 2);
    let logpow = log.pow(m);
    logpow.mul(&one_plus_z_pow(p, n_terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn log_and_inverse() {
        let l = log1p(8);
        assert_eq!(l.coeff(1), rat(1, 1));
        assert_eq!(l.coeff(2), rat(-1, 2));
        let inv = l.invert();
        // 1/ln(1+z) = z^-1 + 1/2 - z/12 + z^2/24 - 19 z^3/720 + ...
        assert_eq!(inv.coeff(-1), rat(1, 1));
        assert_eq!(inv.coeff(0), rat(1, 2));
        assert_eq!(inv.coeff(1), rat(-1, 12));
        assert_eq!(inv.coeff(2), rat(1, 24));
        assert_eq!(inv.coeff(3), rat(-19, 720));
    }

    #[test]
    fn coordinate_change_known_values() {
        // m = 0: just (1+z)^p
        let c = coordinate_change_series(3, 0, 4);
        assert_eq!(c.coeff(0), rat(1, 1));
        assert_eq!(c.coeff(2), rat(3, 1));
        // m = 1, p = 0: ln(1+z) itself
        let c = coordinate_change_series(0, 1, 4);
        assert_eq!(c.coeff(1), rat(1, 1));
        assert_eq!(c.coeff(3), rat(1, 3));
        // m = -1, p = 1: (1+z)/ln(1+z) = z^-1 + 3/2 + 5z/12 + ...
        let c = coordinate_change_series(1, -1, 3);
        assert_eq!(c.val(), -1);
        assert_eq!(c.coeff(-1), rat(1, 1));
        assert_eq!(c.coeff(0), rat(3, 2));
        assert_eq!(c.coeff(1), rat(5, 12));
    }

    #[test]
    fn product_reliability_window() {
        let a = RatLaurent::new(0, vec![rat(1, 1), rat(1, 1)]); // 1 + z, known to z^1
        let b = RatLaurent::new(0, vec![rat(1, 1), rat(2, 1), rat(3, 1)]);
        let p = a.mul(&b);
        assert_eq!(p.known_hi(), 1);
        assert_eq!(p.coeff(1), rat(3, 1));
    }
}
