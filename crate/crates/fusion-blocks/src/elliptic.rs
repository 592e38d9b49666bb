//! The elliptic-function corpus: Eisenstein q-expansions, Weierstrass-type
//! Laurent expansions, the P-series in both expansion regions, and the
//! residue sums feeding the torus trace identities.
//!
//! Everything is exact. Powers of 2πi ride along as powers of the marker `u`,
//! so each identity closes inside Q[u, u^-1] coefficient by coefficient.

use std::sync::Mutex;

use num::{BigInt, BigRational, One, Zero};
use once_cell::sync::Lazy;
use thiserror::Error;

use crate::laurent::{NonzeroTerm, WindowError, ZLaurent};
use crate::qseries::QSeries;
use crate::ratseries::{coordinate_change_series, RatLaurent};
use crate::scalar::{binom, factorial, ExactScalar};

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("window [{0}, {1}] does not contain the pole exponent {2}")]
    WindowMissesPole(i64, i64, i64),
    #[error(transparent)]
    Window(#[from] WindowError),
}

static BERNOULLI: Lazy<Mutex<Vec<BigRational>>> =
    Lazy::new(|| Mutex::new(vec![BigRational::one()]));

/// Bernoulli number B_n via the recurrence sum_k binom(n+1, k) B_k = 0.
pub fn bernoulli(n: usize) -> BigRational {
    let mut cache = BERNOULLI.lock().unwrap();
    while cache.len() <= n {
        let m = cache.len(); // computing B_m
        let mut acc = BigRational::zero();
        for (k, b) in cache.iter().enumerate() {
            let c = BigRational::from_integer(crate::scalar::binom_int(m as u64 + 1, k as u64));
            acc += c * b;
        }
        let denom = BigRational::from_integer(BigInt::from(m as u64 + 1));
        cache.push(-acc / denom);
    }
    cache[n].clone()
}

/// Divisor power sum sigma_p(n) = sum over d | n of d^p.
pub fn divisor_sum(n: u64, p: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for d in 1..=n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(p);
        }
    }
    acc
}

/// Eisenstein q-expansion of weight 2k (lattice-sum normalization):
/// G_2k = u^2k * ( -B_2k/(2k)! + 2/(2k-1)! * sum_n sigma_(2k-1)(n) q^n ).
pub fn eisenstein(k: u32, order: usize) -> QSeries {
    assert!(k >= 1, "Eisenstein weight index must be >= 1");
    let two_k = 2 * k as u64;
    let mut coeffs = Vec::with_capacity(order + 1);
    let constant = -bernoulli(two_k as usize) / BigRational::from_integer(factorial(two_k));
    coeffs.push(ExactScalar::from_rational(constant).mul_u_pow(two_k as i64));
    let front = BigRational::from_integer(BigInt::from(2))
        / BigRational::from_integer(factorial(two_k - 1));
    for n in 1..=order as u64 {
        let c = &front * BigRational::from_integer(divisor_sum(n, two_k as u32 - 1));
        coeffs.push(ExactScalar::from_rational(c).mul_u_pow(two_k as i64));
    }
    QSeries::from_coeffs(BigRational::zero(), coeffs)
}

/// G-series of arbitrary index: even index 2k gives `eisenstein(k)`, odd
/// index gives the zero series (odd-weight lattice sums vanish).
pub fn eisenstein_any(index: u32, order: usize) -> QSeries {
    if index >= 2 && index % 2 == 0 {
        eisenstein(index / 2, order)
    } else {
        QSeries::zero_int_offset(order)
    }
}

/// Laurent expansion around z = 0 of the m-th Weierstrass-family function:
/// 1/z^m + (-1)^m sum_k binom(2k-1, m-1) G_2k z^(2k-m).
pub fn wp_expansion(
    m: u32,
    order: usize,
    lo: i64,
    hi: i64,
) -> Result<ZLaurent, SeriesError> {
    assert!(m >= 1);
    let pole = -(m as i64);
    if lo > pole || hi < pole {
        return Err(SeriesError::WindowMissesPole(lo, hi, pole));
    }
    let mut out = ZLaurent::zero(lo, hi, order).with_exactness(true, false);
    out.set_scalar_coeff(pole, ExactScalar::one());
    let sign = if m % 2 == 0 { 1 } else { -1 };
    let mut k = 1u32;
    loop {
        let e = 2 * k as i64 - m as i64;
        if e > hi {
            break;
        }
        if e >= lo {
            let b = binom(2 * k as i64 - 1, m - 1);
            if !b.is_zero() {
                let weight = eisenstein(k, order)
                    .scale(&ExactScalar::from_rational(b * BigInt::from(sign)));
                out.set_coeff(e, weight);
            }
        }
        k += 1;
    }
    Ok(out)
}

fn p_series_prefactor(mp1: u32) -> BigRational {
    BigRational::one() / BigRational::from_integer(factorial(mp1 as u64 - 1))
}

fn k_pow_m(k: u64, m: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(k).pow(m))
}

/// Geometric q-weight sum_{j >= j0} q^(jk), truncated.
fn geometric(k: u64, j0: u64, order: usize) -> QSeries {
    debug_assert!(k >= 1);
    let mut s = QSeries::zero_int_offset(order);
    let mut e = j0 * k;
    while e <= order as u64 {
        s.set_coeff(e as usize, ExactScalar::one());
        e += k;
    }
    s
}

/// Formal expansion of P_(m+1)(z, q) in the region |q| < |z| < 1:
/// (u^(m+1)/m!) sum_k k^m ( z^k sum_{j>=0} q^(jk) + (-1)^(m+1) z^-k sum_{j>=1} q^(jk) ).
pub fn p_series(mp1: u32, order: usize, lo: i64, hi: i64) -> ZLaurent {
    assert!(mp1 >= 1);
    let m = mp1 - 1;
    let pref = p_series_prefactor(mp1);
    let exact_below = lo <= -(order as i64);
    let mut out = ZLaurent::zero(lo, hi, order).with_exactness(exact_below, false);
    let sign = if mp1 % 2 == 0 { 1 } else { -1 };
    for k in 1..=hi.max(0) as u64 {
        let e = k as i64;
        if e < lo || e > hi {
            continue;
        }
        let c = &pref * k_pow_m(k, m);
        let q = geometric(k, 0, order).scale(&ExactScalar::from_rational(c).mul_u_pow(mp1 as i64));
        out.set_coeff(e, q);
    }
    for k in 1..=(-lo).max(0) as u64 {
        let e = -(k as i64);
        if e < lo || e > hi {
            continue;
        }
        let c = &pref * k_pow_m(k, m) * BigInt::from(sign);
        let q = geometric(k, 1, order).scale(&ExactScalar::from_rational(c).mul_u_pow(mp1 as i64));
        out.set_coeff(e, q);
    }
    out
}

/// The companion expansion of P_(m+1)(zq, q): the same series with the
/// geometric weights shifted one period, valid in the region |1| < |z| < |1/q|.
pub fn p_series_shifted(mp1: u32, order: usize, lo: i64, hi: i64) -> ZLaurent {
    assert!(mp1 >= 1);
    let m = mp1 - 1;
    let pref = p_series_prefactor(mp1);
    let exact_above = hi >= order as i64;
    let mut out = ZLaurent::zero(lo, hi, order).with_exactness(false, exact_above);
    let sign = if mp1 % 2 == 0 { 1 } else { -1 };
    for k in 1..=hi.max(0) as u64 {
        let e = k as i64;
        if e < lo || e > hi {
            continue;
        }
        let c = &pref * k_pow_m(k, m);
        let q = geometric(k, 1, order).scale(&ExactScalar::from_rational(c).mul_u_pow(mp1 as i64));
        out.set_coeff(e, q);
    }
    for k in 1..=(-lo).max(0) as u64 {
        let e = -(k as i64);
        if e < lo || e > hi {
            continue;
        }
        let c = &pref * k_pow_m(k, m) * BigInt::from(sign);
        let q = geometric(k, 0, order).scale(&ExactScalar::from_rational(c).mul_u_pow(mp1 as i64));
        out.set_coeff(e, q);
    }
    out
}

/// P_(m+1) after the exact substitution z -> e^(uz).
///
/// The q^0 part is the Laurent expansion of (d/dy)^m ( e^y/(1-e^y) ) at
/// y = uz (pole of order m+1), obtained by series division; each q^n part
/// (n >= 1) is the finite divisor sum over k | n of k^m (e^(ukz) + (-1)^(m+1) e^(-ukz)).
pub fn p_series_exp(mp1: u32, n_q: usize, n_z: i64) -> ZLaurent {
    assert!(mp1 >= 1);
    let m = mp1 - 1;
    let lo = -(mp1 as i64);
    let hi = n_z;
    assert!(hi >= lo);
    let pref = p_series_prefactor(mp1);

    // q^0 part: h(y) = (d/dy)^m of e^y/(1 - e^y), as a rational Laurent series.
    let terms = (n_z + mp1 as i64 + 4) as usize;
    let exp_y = RatLaurent::new(
        0,
        (0..terms as u64)
            .map(|n| BigRational::one() / BigRational::from_integer(factorial(n)))
            .collect(),
    );
    // (e^y - 1)/y, a unit
    let s = RatLaurent::new(
        0,
        (0..terms as u64)
            .map(|n| BigRational::one() / BigRational::from_integer(factorial(n + 1)))
            .collect(),
    );
    // e^y/(1-e^y) = -(1/y) e^y / s(y)
    let mut h = exp_y.mul(&s.invert());
    h = RatLaurent::new(h.val() - 1, (0..=(h.known_hi() - h.val()) as usize)
        .map(|i| -h.coeff(h.val() + i as i64))
        .collect());
    for _ in 0..m {
        h = h.derivative();
    }

    let mut out = ZLaurent::zero(lo, hi, n_q).with_exactness(true, false);
    for e in lo..=hi {
        let mut q = QSeries::zero_int_offset(n_q);
        // q^0 coefficient: (u^(m+1)/m!) u^e h_e
        let h_e = h.coeff(e);
        if !h_e.is_zero() {
            q.set_coeff(
                0,
                ExactScalar::from_rational(&pref * h_e).mul_u_pow(mp1 as i64 + e),
            );
        }
        // q^n coefficients, only nonnegative z-powers appear
        if e >= 0 {
            let j = e as u64;
            let jfact = BigRational::from_integer(factorial(j));
            for n in 1..=n_q as u64 {
                let mut acc = BigRational::zero();
                for k in 1..=n {
                    if n % k != 0 {
                        continue;
                    }
                    // k^m (k^j + (-1)^(m+1) (-k)^j)
                    let kj = BigRational::from_integer(BigInt::from(k).pow(m + j as u32));
                    let mut sgn = if (m + 1) % 2 == 0 { 1 } else { -1 };
                    if j % 2 == 1 {
                        sgn = -sgn;
                    }
                    acc += &kj + kj.clone() * BigInt::from(sgn);
                }
                if !acc.is_zero() {
                    q.set_coeff(
                        n as usize,
                        ExactScalar::from_rational(&pref * acc / &jfact)
                            .mul_u_pow(mp1 as i64 + e),
                    );
                }
            }
        }
        if !q.is_zero_reliable() {
            out.set_coeff(e, q);
        }
    }
    out
}

/// Compare the exponential P-series against its elliptic-function identity:
/// the m = 1 case carries an extra -u/2 constant, and the sign alternates as
/// (-1)^m. Returns the nonzero residual coefficients (required empty).
pub fn p_wp_lemma_check(mp1: u32, n_q: usize, n_z: i64) -> Result<Vec<NonzeroTerm>, SeriesError> {
    let lhs = p_series_exp(mp1, n_q, n_z);
    let mut rhs = wp_expansion(mp1, n_q, -(mp1 as i64), n_z)?;
    if mp1 % 2 == 1 {
        rhs = rhs.neg();
    }
    if mp1 == 1 {
        let mut half_u = ZLaurent::zero(-(mp1 as i64), n_z, n_q);
        half_u.set_scalar_coeff(0, -&ExactScalar::pi_i());
        rhs = rhs.add(&half_u);
    }
    Ok(lhs.sub(&rhs).nonzero_terms())
}

/// The expansion of (x - w)^i in the region |x| > |w|, written in t = w/x and
/// multiplied by w^(wt-i-1) x^(-wt+1): iota_+ piece = (1-t)^i t^(wt-i-1).
fn iota_plus_piece(i: i64, wt: i64, hi_cut: i64, q_order: usize) -> ZLaurent {
    if i >= 0 {
        let lo = wt - i - 1;
        let hi = wt - 1;
        let mut z = ZLaurent::zero(lo.min(0) - 1, hi.max(0) + 1, q_order);
        for j in 0..=i {
            let c = binom(i, j as u32) * BigInt::from(if j % 2 == 0 { 1 } else { -1 });
            z.set_scalar_coeff(lo + j, ExactScalar::from_rational(c));
        }
        z
    } else {
        // i = -1: (1-t)^(-1) t^wt = sum_{j>=0} t^(wt+j)
        debug_assert_eq!(i, -1);
        let mut z = ZLaurent::zero(wt.min(0) - 1, hi_cut, q_order).with_exactness(true, false);
        for e in wt..=hi_cut {
            z.set_scalar_coeff(e, ExactScalar::one());
        }
        z
    }
}

/// The expansion of (x - w)^i in the region |w| > |x|, same normalization:
/// iota_- piece = (-1)^i (1 - 1/t)^i t^(wt-1).
fn iota_minus_piece(i: i64, wt: i64, lo_cut: i64, q_order: usize) -> ZLaurent {
    if i >= 0 {
        let hi = wt - 1;
        let lo = wt - 1 - i;
        let outer_sign = if i % 2 == 0 { 1 } else { -1 };
        let mut z = ZLaurent::zero(lo.min(0) - 1, hi.max(0) + 1, q_order);
        for j in 0..=i {
            let c = binom(i, j as u32)
                * BigInt::from(if j % 2 == 0 { 1 } else { -1 })
                * BigInt::from(outer_sign);
            z.set_scalar_coeff(hi - j, ExactScalar::from_rational(c));
        }
        z
    } else {
        // i = -1: -(1 - 1/t)^(-1) t^(wt-1) = -sum_{j>=0} t^(wt-1-j)
        debug_assert_eq!(i, -1);
        let mut z = ZLaurent::zero(lo_cut, (wt - 1).max(0) + 1, q_order).with_exactness(false, true);
        let mut e = wt - 1;
        while e >= lo_cut {
            z.set_scalar_coeff(e, ExactScalar::from_int(-1));
            e -= 1;
        }
        z
    }
}

/// The three residue sums built from the coefficients c_i of
/// (1+z)^(wt_a - 1) (ln(1+z))^(-1).
///
/// Every integrand is homogeneous of degree -1 in (x, w), so the residue in x
/// is the constant coefficient in t = w/x; the two expansion regions pair the
/// P-series with its one-period-shifted companion. The returned triple must
/// equal (1, -u/2, G_(m+1)) exactly, with odd-index G meaning the zero series.
pub fn residue_identities(
    wt_a: u32,
    m: u32,
    n_q: usize,
) -> Result<(QSeries, QSeries, QSeries), SeriesError> {
    assert!(wt_a >= 1 && m >= 1);
    let wt = wt_a as i64;
    let window = (m as i64).max(wt) + 2;
    let i_max = wt + window + 1;
    let c = coordinate_change_series(wt - 1, -1, i_max);

    let hi_cut = (n_q as i64).max(wt) + 3;
    let lo_cut = -(n_q as i64 + wt + 3);

    // P-series factors, shared across the i-sum
    let p1 = p_series(1, n_q, -((n_q as i64).max(wt + 2)), i_max + 2);
    let p1_shift = p_series_shifted(1, n_q, lo_cut - 1, n_q as i64 + 1);
    let pm = p_series(m + 1, n_q, -((n_q as i64).max(wt + 2)), i_max + 2);
    let pm_shift = p_series_shifted(m + 1, n_q, lo_cut - 1, n_q as i64 + 1);
    let two_pi_i = QSeries::constant(ExactScalar::two_pi_i(), n_q);

    let mut s1 = QSeries::zero_int_offset(n_q);
    let mut s2 = QSeries::zero_int_offset(n_q);
    let mut s3 = QSeries::zero_int_offset(n_q);

    for i in -1..=i_max {
        let ci = c.coeff(i);
        if ci.is_zero() {
            continue;
        }
        let ci = ExactScalar::from_rational(ci);
        let plus = iota_plus_piece(i, wt, hi_cut, n_q);
        let minus = iota_minus_piece(i, wt, lo_cut, n_q);

        let t1 = plus.constant_coeff()?.sub(&minus.constant_coeff()?);
        s1 = s1.add(&t1.scale(&ci));

        let a2 = plus.mul(&p1).constant_coeff()?;
        let b2 = minus
            .mul(&p1_shift)
            .constant_coeff()?
            .sub(&minus.constant_coeff()?.mul(&two_pi_i));
        s2 = s2.add(&a2.sub(&b2).scale(&ci));

        let a3 = plus.mul(&pm).constant_coeff()?;
        let b3 = minus.mul(&pm_shift).constant_coeff()?;
        s3 = s3.add(&a3.sub(&b3).scale(&ci));
    }
    Ok((s1, s2, s3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::complex::Complex64;
    use num::ToPrimitive;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn bernoulli_table() {
        let want = [
            rat(1, 1),
            rat(-1, 2),
            rat(1, 6),
            rat(0, 1),
            rat(-1, 30),
            rat(0, 1),
            rat(1, 42),
            rat(0, 1),
            rat(-1, 30),
            rat(0, 1),
            rat(5, 66),
            rat(0, 1),
            rat(-691, 2730),
        ];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(&bernoulli(n), w, "B_{}", n);
        }
    }

    #[test]
    fn eisenstein_low_coefficients() {
        let g2 = eisenstein(1, 4);
        assert_eq!(g2.coeff(0), &ExactScalar::ratio_u(-1, 12, 2));
        assert_eq!(g2.coeff(1), &ExactScalar::ratio_u(2, 1, 2));
        assert_eq!(g2.coeff(2), &ExactScalar::ratio_u(6, 1, 2)); // 2*sigma_1(2) = 6
        let g4 = eisenstein(2, 2);
        assert_eq!(g4.coeff(0), &ExactScalar::ratio_u(1, 720, 4));
        assert_eq!(g4.coeff(1), &ExactScalar::ratio_u(1, 3, 4)); // 2/3! = 1/3
    }

    #[test]
    fn odd_index_g_vanishes() {
        assert!(eisenstein_any(3, 6).is_zero_reliable());
        assert!(eisenstein_any(1, 6).is_zero_reliable());
        assert!(!eisenstein_any(4, 6).is_zero_reliable());
    }

    #[test]
    fn wp_expansion_shape() {
        let wp2 = wp_expansion(2, 4, -4, 4).unwrap();
        assert_eq!(
            wp2.coeff(-2).unwrap().coeff(0),
            &ExactScalar::one(),
            "pole coefficient"
        );
        // z^0 coefficient is binom(1,1) G_2 = G_2
        assert!(wp2.coeff(0).unwrap().eq_reliable(&eisenstein(1, 4)));
        let wp1 = wp_expansion(1, 4, -3, 3).unwrap();
        // z^1 coefficient is -G_2
        assert!(wp1.coeff(1).unwrap().eq_reliable(&eisenstein(1, 4).neg()));
        let wp3 = wp_expansion(3, 4, -4, 4).unwrap();
        for e in [-4i64, -2, 0, 2, 4] {
            assert!(
                wp3.coeff(e).unwrap().is_zero_reliable(),
                "wrong-parity z^{} should vanish",
                e
            );
        }
        assert!(wp_expansion(2, 4, -1, 4).is_err());
    }

    #[test]
    fn p_series_pinned_coefficients() {
        let p2 = p_series(2, 4, -4, 4);
        // z^1 q^0 coefficient is u^2
        assert_eq!(p2.coeff(1).unwrap().coeff(0), &ExactScalar::u_pow(2));
        let p1 = p_series(1, 4, -4, 4);
        // z^-1 q^1 coefficient is -u (sign (-1)^(m+1) with m = 0)
        assert_eq!(p1.coeff(-1).unwrap().coeff(1), &-&ExactScalar::u_pow(1));
        assert_eq!(p1.coeff(-1).unwrap().coeff(0), &ExactScalar::zero());
        // z^k and z^-k related by sign (-1)^(m+1): for P_3 that sign is -1
        let p3 = p_series(3, 6, -6, 6);
        let plus = p3.coeff(2).unwrap();
        let minus = p3.coeff(-2).unwrap();
        assert_eq!(plus.coeff(2), &-minus.coeff(2));
    }

    #[test]
    fn p_series_region_matches_numeric_double_sum() {
        // Brute-force numeric evaluation of the defining double sum at
        // z = 0.5, q = 0.1 pins the sign conventions.
        let u = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        for mp1 in 1..=3u32 {
            let m = mp1 - 1;
            let z = Complex64::new(0.5, 0.0);
            let q = Complex64::new(0.1, 0.0);
            let mut direct = Complex64::new(0.0, 0.0);
            for k in 1..60 {
                let kf = k as f64;
                let km = kf.powi(m as i32);
                let fac = (1.0 - q.powi(k)).re;
                direct += km * z.powi(k) / fac;
                let sign = if (m + 1) % 2 == 0 { 1.0 } else { -1.0 };
                direct += sign * km * z.powi(-k) * q.powi(k) / fac;
            }
            let mfact: f64 = factorial(m as u64).to_f64().unwrap();
            let direct = direct * u.powi(mp1 as i32) / mfact;
            let series = p_series(mp1, 40, -40, 40).eval_complex(z, q, u);
            let rel = (direct - series).norm() / direct.norm();
            assert!(rel < 1e-6, "P_{} numeric mismatch: rel {}", mp1, rel);
        }
    }

    #[test]
    fn exp_substitution_has_unit_pole() {
        let p2 = p_series_exp(2, 4, 4);
        assert_eq!(p2.coeff(-2).unwrap().coeff(0), &ExactScalar::one());
        // constant z-term of P_1(e^(uz), q) includes -u/2
        let p1 = p_series_exp(1, 4, 4);
        let c0 = p1.coeff(0).unwrap();
        assert_eq!(c0.coeff(0).coeff(1), rat(-1, 2));
    }

    #[test]
    fn lemma_residuals_vanish() {
        for mp1 in 1..=6u32 {
            let bad = p_wp_lemma_check(mp1, 6, 6).unwrap();
            assert!(bad.is_empty(), "P_{} lemma residual: {:?}", mp1, bad);
        }
    }

    #[test]
    fn residue_sums_match_lemma_triple() {
        for wt_a in [2u32, 3, 5] {
            for m in [1u32, 2, 3, 4] {
                let (s1, s2, s3) = residue_identities(wt_a, m, 6).unwrap();
                assert!(s1.eq_reliable(&QSeries::one(6)), "first sum wt={} m={}", wt_a, m);
                assert!(
                    s2.eq_reliable(&QSeries::constant(-&ExactScalar::pi_i(), 6)),
                    "second sum wt={} m={}: got {}",
                    wt_a,
                    m,
                    s2
                );
                assert!(
                    s3.eq_reliable(&eisenstein_any(m + 1, 6)),
                    "third sum wt={} m={}: got {}",
                    wt_a,
                    m,
                    s3
                );
            }
        }
    }
}
