//! Truncated q-expansions with a rational exponent offset.
//!
//! A `QSeries` stores the coefficients of q^(offset + n) for n = 0..=order;
//! everything beyond q^(offset + order) is unknown. Truncation bookkeeping is
//! pessimistic: sums and products are only trusted up to the order both
//! operands support, and equality is decided on the common reliable range
//! only. Asking for a coefficient beyond the reliable order is a bug, not a
//! zero, and panics.

use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use crate::scalar::{fmt_rational, ExactScalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    offset: BigRational,
    coeffs: Vec<ExactScalar>, // index n <-> q^(offset + n); len = order + 1
}

impl QSeries {
    pub fn zero(offset: BigRational, order: usize) -> Self {
        QSeries {
            offset,
            coeffs: vec![ExactScalar::zero(); order + 1],
        }
    }

    pub fn zero_int_offset(order: usize) -> Self {
        QSeries::zero(BigRational::zero(), order)
    }

    /// A constant scalar as a q-series with integer offset 0.
    pub fn constant(c: ExactScalar, order: usize) -> Self {
        let mut s = QSeries::zero_int_offset(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        QSeries::constant(ExactScalar::one(), order)
    }

    pub fn from_coeffs(offset: BigRational, coeffs: Vec<ExactScalar>) -> Self {
        assert!(!coeffs.is_empty(), "QSeries must carry at least one coefficient");
        QSeries { offset, coeffs }
    }

    pub fn offset(&self) -> &BigRational {
        &self.offset
    }

    /// Highest trusted index n (coefficients of q^(offset+n) for n <= order are known).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient at relative index n. Panics beyond the reliable order.
    pub fn coeff(&self, n: usize) -> &ExactScalar {
        assert!(
            n < self.coeffs.len(),
            "coefficient q^(offset+{}) requested beyond reliable order {}",
            n,
            self.order()
        );
        &self.coeffs[n]
    }

    pub fn set_coeff(&mut self, n: usize, c: ExactScalar) {
        assert!(n < self.coeffs.len());
        self.coeffs[n] = c;
    }

    /// Coefficient at an absolute rational q-exponent, if it lies on the
    /// series lattice and within the reliable order.
    pub fn coeff_at(&self, exponent: &BigRational) -> Option<&ExactScalar> {
        let rel = exponent - &self.offset;
        if !rel.denom().is_one() {
            return None;
        }
        let n: BigInt = rel.to_integer();
        if n < BigInt::zero() {
            return None;
        }
        let n = usize::try_from(n).ok()?;
        self.coeffs.get(n)
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        QSeries {
            offset: self.offset.clone(),
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Multiply by q^k for an integer k (shifts the offset).
    pub fn mul_q_pow(&self, k: i64) -> Self {
        QSeries {
            offset: &self.offset + BigRational::from_integer(BigInt::from(k)),
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        QSeries {
            offset: self.offset.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        QSeries {
            offset: self.offset.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    fn offset_gap(&self, other: &QSeries) -> i64 {
        let gap = &other.offset - &self.offset;
        assert!(
            gap.denom().is_one(),
            "q-series offsets differ by the non-integer {}; they live on different exponent lattices",
            gap
        );
        i64::try_from(gap.to_integer()).expect("offset gap out of range")
    }

    pub fn add(&self, other: &QSeries) -> Self {
        let gap = self.offset_gap(other);
        let (lo, hi, gap) = if gap >= 0 {
            (self, other, gap as usize)
        } else {
            (other, self, (-gap) as usize)
        };
        // reliable absolute top = min over both; relative to lo's offset
        let top = usize::min(lo.order(), gap + hi.order());
        let mut coeffs = lo.coeffs[..=top].to_vec();
        for (n, c) in hi.coeffs.iter().enumerate() {
            let k = n + gap;
            if k > top {
                break;
            }
            coeffs[k] = &coeffs[k] + c;
        }
        QSeries {
            offset: lo.offset.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &QSeries) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QSeries) -> Self {
        let order = usize::min(self.order(), other.order());
        let mut coeffs = vec![ExactScalar::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j].add_assign(&(a * b));
            }
        }
        QSeries {
            offset: &self.offset + &other.offset,
            coeffs,
        }
    }

    pub fn is_zero_reliable(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// First nonzero coefficient as (absolute q-exponent, value), if any.
    pub fn first_nonzero(&self) -> Option<(BigRational, ExactScalar)> {
        for (n, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let exp = &self.offset + BigRational::from_integer(BigInt::from(n));
                return Some((exp, c.clone()));
            }
        }
        None
    }

    /// Equality up to the common reliable order.
    pub fn eq_reliable(&self, other: &QSeries) -> bool {
        self.sub(other).is_zero_reliable()
    }

    /// Evaluate numerically at a given q, substituting `u_val` for u.
    pub fn eval_complex(
        &self,
        q: num::complex::Complex64,
        u_val: num::complex::Complex64,
    ) -> num::complex::Complex64 {
        use num::complex::Complex64;
        use num::ToPrimitive;
        let off = self.offset.to_f64().expect("offset out of f64 range");
        let base = q.powf(off);
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += base * q.powi(n as i32) * c.eval_complex(u_val);
            }
        }
        acc
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            let exp = &self.offset + BigRational::from_integer(BigInt::from(n));
            write!(f, "({})*q^{}", c, fmt_rational(&exp))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        let top = &self.offset + BigRational::from_integer(BigInt::from(self.coeffs.len()));
        write!(f, " + O(q^{})", fmt_rational(&top))
    }
}
