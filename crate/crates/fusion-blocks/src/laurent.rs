//! Laurent series in z with truncated q-series coefficients.
//!
//! A `ZLaurent` knows its coefficients exactly on the window [lo, hi] (each
//! modulo q^(q_order+1)). The `exact_below` / `exact_above` flags record
//! whether the coefficients outside the window are genuinely zero at this
//! q-truncation or merely unknown. Every operation tracks the largest window
//! on which its result is still reliable; reading a coefficient outside that
//! window is an error, never a silent zero.

use std::collections::BTreeMap;
use std::fmt;

use num::complex::Complex64;
use num::Zero;
use thiserror::Error;

use crate::qseries::QSeries;
use crate::scalar::ExactScalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WindowError {
    #[error("z^{0} lies outside the reliable window [{1}, {2}]")]
    OutsideWindow(i64, i64, i64),
    #[error("operation left an empty reliable window (lo {0} > hi {1}); widen the inputs")]
    EmptyWindow(i64, i64),
}

#[derive(Clone, Debug)]
pub struct ZLaurent {
    coeffs: BTreeMap<i64, QSeries>, // offset-0 q-series, each of order q_order
    lo: i64,
    hi: i64,
    exact_below: bool,
    exact_above: bool,
    q_order: usize,
}

/// A single nonzero coefficient of a residual, for failure reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonzeroTerm {
    pub z_exp: i64,
    pub q_exp: usize,
    pub value: ExactScalar,
}

impl fmt::Display for NonzeroTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^{} z^{} : {}", self.q_exp, self.z_exp, self.value)
    }
}

impl ZLaurent {
    /// Zero series, exact everywhere, on the given window.
    pub fn zero(lo: i64, hi: i64, q_order: usize) -> Self {
        assert!(lo <= hi, "window [{}, {}] is empty", lo, hi);
        ZLaurent {
            coeffs: BTreeMap::new(),
            lo,
            hi,
            exact_below: true,
            exact_above: true,
            q_order,
        }
    }

    pub fn with_exactness(mut self, below: bool, above: bool) -> Self {
        self.exact_below = below;
        self.exact_above = above;
        self
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn q_order(&self) -> usize {
        self.q_order
    }

    pub fn exact_below(&self) -> bool {
        self.exact_below
    }

    pub fn exact_above(&self) -> bool {
        self.exact_above
    }

    /// Set the coefficient of z^e. The exponent must lie inside the window and
    /// the series must have integer offset 0.
    pub fn set_coeff(&mut self, e: i64, c: QSeries) {
        assert!(self.lo <= e && e <= self.hi, "z^{} outside window", e);
        assert!(c.offset().is_zero(), "ZLaurent coefficients must have offset 0");
        let c = if c.order() > self.q_order {
            c.truncate(self.q_order)
        } else {
            assert!(
                c.order() >= self.q_order,
                "coefficient only reliable to q^{} but window demands q^{}",
                c.order(),
                self.q_order
            );
            c
        };
        if c.is_zero_reliable() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    pub fn set_scalar_coeff(&mut self, e: i64, c: ExactScalar) {
        self.set_coeff(e, QSeries::constant(c, self.q_order));
    }

    /// Coefficient of z^e; errors outside the reliable window.
    pub fn coeff(&self, e: i64) -> Result<QSeries, WindowError> {
        let known = (self.lo <= e && e <= self.hi)
            || (e < self.lo && self.exact_below)
            || (e > self.hi && self.exact_above);
        if !known {
            return Err(WindowError::OutsideWindow(e, self.lo, self.hi));
        }
        Ok(self
            .coeffs
            .get(&e)
            .cloned()
            .unwrap_or_else(|| QSeries::zero_int_offset(self.q_order)))
    }

    /// The constant (z^0) coefficient.
    pub fn constant_coeff(&self) -> Result<QSeries, WindowError> {
        self.coeff(0)
    }

    fn reliable_from(&self) -> i128 {
        if self.exact_below {
            i128::MIN / 4
        } else {
            self.lo as i128
        }
    }

    fn reliable_to(&self) -> i128 {
        if self.exact_above {
            i128::MAX / 4
        } else {
            self.hi as i128
        }
    }

    /// Lowest possibly-nonzero exponent (-inf when the low side is unknown).
    fn support_from(&self) -> i128 {
        if self.exact_below {
            self.lo as i128
        } else {
            i128::MIN / 4
        }
    }

    fn support_to(&self) -> i128 {
        if self.exact_above {
            self.hi as i128
        } else {
            i128::MAX / 4
        }
    }

    pub fn add(&self, other: &ZLaurent) -> ZLaurent {
        let q_order = usize::min(self.q_order, other.q_order);
        let rlo = i128::max(self.reliable_from(), other.reliable_from());
        let rhi = i128::min(self.reliable_to(), other.reliable_to());
        let exact_below = self.exact_below && other.exact_below;
        let exact_above = self.exact_above && other.exact_above;
        let lo = if exact_below {
            i64::min(self.lo, other.lo)
        } else {
            i64::try_from(rlo).unwrap_or(i64::MIN / 4)
        };
        let hi = if exact_above {
            i64::max(self.hi, other.hi)
        } else {
            i64::try_from(rhi).unwrap_or(i64::MAX / 4)
        };
        let mut out = ZLaurent {
            coeffs: BTreeMap::new(),
            lo,
            hi,
            exact_below,
            exact_above,
            q_order,
        };
        if lo > hi {
            out.lo = 1;
            out.hi = 0;
            return out;
        }
        for e in lo..=hi {
            let a = self.coeff_unchecked(e, q_order);
            let b = other.coeff_unchecked(e, q_order);
            let sum = a.add(&b);
            if !sum.is_zero_reliable() {
                out.coeffs.insert(e, sum.truncate(q_order));
            }
        }
        out
    }

    fn coeff_unchecked(&self, e: i64, q_order: usize) -> QSeries {
        match self.coeffs.get(&e) {
            Some(c) => c.truncate(usize::min(c.order(), q_order)),
            None => QSeries::zero_int_offset(q_order),
        }
    }

    pub fn neg(&self) -> ZLaurent {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|(&e, c)| (e, c.neg())).collect();
        out
    }

    pub fn sub(&self, other: &ZLaurent) -> ZLaurent {
        self.add(&other.neg())
    }

    pub fn scale_q(&self, c: &QSeries) -> ZLaurent {
        assert!(c.offset().is_zero());
        let q_order = usize::min(self.q_order, c.order());
        let mut out = ZLaurent {
            coeffs: BTreeMap::new(),
            lo: self.lo,
            hi: self.hi,
            exact_below: self.exact_below,
            exact_above: self.exact_above,
            q_order,
        };
        for (&e, a) in &self.coeffs {
            let p = a.mul(c);
            if !p.is_zero_reliable() {
                out.coeffs.insert(e, p);
            }
        }
        out
    }

    pub fn scale(&self, c: &ExactScalar) -> ZLaurent {
        self.scale_q(&QSeries::constant(c.clone(), self.q_order))
    }

    pub fn mul_z_pow(&self, k: i64) -> ZLaurent {
        ZLaurent {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
            lo: self.lo + k,
            hi: self.hi + k,
            exact_below: self.exact_below,
            exact_above: self.exact_above,
            q_order: self.q_order,
        }
    }

    /// Product with pessimistic window bookkeeping.
    ///
    /// An output exponent is reliable only when no unknown coefficient of
    /// either factor can reach it against a possibly-nonzero coefficient of
    /// the other factor.
    pub fn mul(&self, other: &ZLaurent) -> ZLaurent {
        let q_order = usize::min(self.q_order, other.q_order);
        // contamination from unknown regions
        let mut rlo: i128 = i128::MIN / 4;
        let mut rhi: i128 = i128::MAX / 4;
        if !self.exact_below {
            rlo = rlo.max(self.lo as i128 + other.support_to());
        }
        if !other.exact_below {
            rlo = rlo.max(other.lo as i128 + self.support_to());
        }
        if !self.exact_above {
            rhi = rhi.min(self.hi as i128 + other.support_from());
        }
        if !other.exact_above {
            rhi = rhi.min(other.hi as i128 + self.support_from());
        }
        let exact_below = self.exact_below && other.exact_below;
        let exact_above = self.exact_above && other.exact_above;
        let lo = if exact_below {
            (self.lo as i128 + other.lo as i128).max(rlo)
        } else {
            rlo
        };
        let hi = if exact_above {
            (self.hi as i128 + other.hi as i128).min(rhi)
        } else {
            rhi
        };
        // clamp to the sum window so the result stays finite
        let lo = lo.max(self.lo as i128 + other.lo as i128);
        let hi = hi.min(self.hi as i128 + other.hi as i128);
        let (lo, hi) = if lo > hi {
            (1, 0) // empty reliable window
        } else {
            (lo as i64, hi as i64)
        };
        let mut coeffs = BTreeMap::new();
        if lo <= hi {
            for (&e1, a) in &self.coeffs {
                for (&e2, b) in &other.coeffs {
                    let e = e1 + e2;
                    if e < lo || e > hi {
                        continue;
                    }
                    let p = a.mul(b).truncate(q_order);
                    coeffs
                        .entry(e)
                        .and_modify(|acc: &mut QSeries| *acc = acc.add(&p))
                        .or_insert(p);
                }
            }
            coeffs.retain(|_, c| !c.is_zero_reliable());
        }
        ZLaurent {
            coeffs,
            lo,
            hi,
            exact_below,
            exact_above,
            q_order,
        }
    }

    pub fn is_window_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn is_zero_reliable(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero_reliable())
    }

    /// All nonzero coefficients within the reliable window and q-order.
    pub fn nonzero_terms(&self) -> Vec<NonzeroTerm> {
        let mut out = Vec::new();
        for (&e, c) in &self.coeffs {
            for n in 0..=c.order() {
                let v = c.coeff(n);
                if !v.is_zero() {
                    out.push(NonzeroTerm {
                        z_exp: e,
                        q_exp: n,
                        value: v.clone(),
                    });
                }
            }
        }
        out
    }

    /// Iterate stored (z-exponent, coefficient) pairs.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &QSeries)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    /// Numeric evaluation at (z, q), substituting `u_val` for u.
    pub fn eval_complex(&self, z: Complex64, q: Complex64, u_val: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&e, c) in &self.coeffs {
            acc += z.powi(e as i32) * c.eval_complex(q, u_val);
        }
        acc
    }
}

impl fmt::Display for ZLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (&e, c) in &self.coeffs {
                if !first {
                    writeln!(f)?;
                }
                first = false;
                write!(f, "z^{} * [{}]", e, c)?;
            }
        }
        write!(
            f,
            "   (window [{}, {}], q-order {})",
            self.lo, self.hi, self.q_order
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zconst(e: i64, v: i64, lo: i64, hi: i64, n: usize) -> ZLaurent {
        let mut z = ZLaurent::zero(lo, hi, n);
        z.set_scalar_coeff(e, ExactScalar::from_int(v));
        z
    }

    #[test]
    fn polynomial_product_is_exact() {
        // (1 + z)(1 - z) = 1 - z^2, exact on all sides
        let mut a = ZLaurent::zero(-3, 3, 4);
        a.set_scalar_coeff(0, ExactScalar::from_int(1));
        a.set_scalar_coeff(1, ExactScalar::from_int(1));
        let mut b = ZLaurent::zero(-3, 3, 4);
        b.set_scalar_coeff(0, ExactScalar::from_int(1));
        b.set_scalar_coeff(1, ExactScalar::from_int(-1));
        let p = a.mul(&b);
        assert!(p.exact_below() && p.exact_above());
        assert_eq!(p.coeff(0).unwrap().coeff(0), &ExactScalar::from_int(1));
        assert_eq!(p.coeff(2).unwrap().coeff(0), &ExactScalar::from_int(-1));
        assert_eq!(p.coeff(6).unwrap().coeff(0), &ExactScalar::from_int(0));
    }

    #[test]
    fn unknown_tail_contaminates_products() {
        // f known on [0, 2] with an unknown high tail; g = z^-1 exactly.
        let f = zconst(0, 1, 0, 2, 3).with_exactness(true, false);
        let g = zconst(-1, 1, -1, -1, 3);
        let p = f.mul(&g);
        // f's tail starts at z^3, times z^-1 -> unknown from z^2 on
        assert_eq!(p.hi(), 1);
        assert!(p.coeff(2).is_err());
        assert_eq!(p.coeff(-1).unwrap().coeff(0), &ExactScalar::from_int(1));
    }

    #[test]
    fn two_sided_unknown_times_unknown_is_empty() {
        let f = zconst(0, 1, 0, 2, 3).with_exactness(false, false);
        let g = zconst(0, 1, -2, 0, 3).with_exactness(false, false);
        let p = f.mul(&g);
        assert!(p.is_window_empty());
        assert!(p.constant_coeff().is_err());
    }

    #[test]
    fn addition_intersects_windows() {
        let a = zconst(1, 2, -2, 4, 3).with_exactness(true, false);
        let b = zconst(1, 5, -1, 6, 3).with_exactness(false, true);
        let s = a.add(&b);
        assert_eq!((s.lo(), s.hi()), (-1, 4));
        assert_eq!(s.coeff(1).unwrap().coeff(0), &ExactScalar::from_int(7));
        assert!(s.coeff(5).is_err());
    }

    #[test]
    fn q_truncation_is_minimum() {
        let mut a = ZLaurent::zero(-1, 1, 5);
        a.set_coeff(0, QSeries::one(5));
        let mut b = ZLaurent::zero(-1, 1, 2);
        b.set_coeff(0, QSeries::one(2));
        assert_eq!(a.mul(&b).q_order(), 2);
        assert_eq!(a.add(&b).q_order(), 2);
    }
}
