//! Genus-one trace functions over a graded backend and order-by-order
//! verification of the coordinate-change recursion identities.
//!
//! Every check returns a residual series rather than a boolean: a failing
//! identity reports the first nonzero coefficient (q-power and value). On a
//! valid backend all residuals vanish identically through the requested
//! truncation.

use std::collections::BTreeMap;
use std::fmt;

use dashmap::DashMap;
use num::{BigRational, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::elliptic::{eisenstein, p_series_shifted};
use crate::fock::{
    homogeneous_degree, mode, square_bracket, zero_mode_apply, Backend, ModeError, Vector,
};
use crate::laurent::{NonzeroTerm, WindowError, ZLaurent};
use crate::qseries::QSeries;
use crate::scalar::{binom, ExactScalar};

#[derive(Debug, Error)]
pub enum TorusError {
    #[error(transparent)]
    Mode(#[from] ModeError),
    #[error("the annihilation conditions use the constant function and pole orders >= 2; order 1 is not in the function ring")]
    PoleOrderOne,
    #[error("check_am needs m >= 2; got {0}")]
    BadPoleOrder(i64),
    #[error(transparent)]
    Window(#[from] WindowError),
}

/// Graded traces with a per-(state, degree) cache. The cache makes sweeping
/// whole degree ranges of (a, v) pairs cheap, because composite vectors share
/// their basis terms.
pub struct TraceEngine<'a, B: Backend> {
    backend: &'a B,
    cache: DashMap<(B::State, usize), ExactScalar>,
    brackets: DashMap<(B::State, i64, B::State), Vector<B::State>>,
}

impl<'a, B: Backend> TraceEngine<'a, B> {
    pub fn new(backend: &'a B) -> Self {
        TraceEngine {
            backend,
            cache: DashMap::new(),
            brackets: DashMap::new(),
        }
    }

    /// square_bracket with a per-engine cache on basis-state pairs; the
    /// m-sweeps of the identities keep re-asking the same bracket images.
    fn bracket(
        &self,
        a: &Vector<B::State>,
        m: i64,
        v: &Vector<B::State>,
    ) -> Result<Vector<B::State>, ModeError> {
        let (a_key, v_key) = match (single_state(a), single_state(v)) {
            (Some(x), Some(y)) => (x, y),
            _ => return square_bracket(self.backend, a, m, v),
        };
        let key = (a_key.clone(), m, v_key.clone());
        if let Some(hit) = self.brackets.get(&key) {
            return Ok(hit.clone());
        }
        let computed = square_bracket(self.backend, a, m, v)?;
        self.brackets.insert(key, computed.clone());
        Ok(computed)
    }

    pub fn backend(&self) -> &B {
        self.backend
    }

    fn grading_offset(&self) -> BigRational {
        self.backend.conformal_weight()
            - self.backend.central_charge() / BigRational::from_integer(24.into())
    }

    /// tr over M(n) of the zero mode of a single basis state.
    fn trace_basis_at(&self, s: &B::State, n: usize) -> ExactScalar {
        let key = (s.clone(), n);
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let deg_s = self.backend.degree(s) as i64;
        let mut acc = ExactScalar::zero();
        for b in self.backend.basis(n) {
            let target = Vector::basis(b.clone());
            let image = mode(
                self.backend,
                &Vector::basis(s.clone()),
                deg_s - 1,
                &target,
            );
            acc.add_assign(&image.coeff(&b));
        }
        self.cache.insert(key, acc.clone());
        acc
    }

    /// The trace function tr o(v) q^(L(0) - h - c/24) through q-order `order`
    /// (relative to the grading offset).
    pub fn trace(&self, v: &Vector<B::State>, order: usize) -> QSeries {
        let mut out = QSeries::zero(self.grading_offset(), order);
        let per_degree: Vec<ExactScalar> = (0..=order)
            .into_par_iter()
            .map(|n| {
                let mut acc = ExactScalar::zero();
                for (s, c) in v.iter() {
                    let t = self.trace_basis_at(s, n);
                    acc.add_assign(&(&t * c));
                }
                acc
            })
            .collect();
        for (n, c) in per_degree.into_iter().enumerate() {
            out.set_coeff(n, c);
        }
        out
    }

    /// tr o(a) o(v) q^(L(0) - h - c/24): the composition of the two
    /// degree-preserving zero modes, traced per graded piece.
    pub fn trace_composed(
        &self,
        a: &Vector<B::State>,
        v: &Vector<B::State>,
        order: usize,
    ) -> QSeries {
        let mut out = QSeries::zero(self.grading_offset(), order);
        let per_degree: Vec<ExactScalar> = (0..=order)
            .into_par_iter()
            .map(|n| {
                let mut acc = ExactScalar::zero();
                for b in self.backend.basis(n) {
                    let target = Vector::basis(b.clone());
                    let once = zero_mode_apply(self.backend, v, &target);
                    let twice = zero_mode_apply(self.backend, a, &once);
                    acc.add_assign(&twice.coeff(&b));
                }
                acc
            })
            .collect();
        for (n, c) in per_degree.into_iter().enumerate() {
            out.set_coeff(n, c);
        }
        out
    }

    fn bracket_bound(&self, a: &Vector<B::State>, v: &Vector<B::State>) -> i64 {
        let wt_a = a.iter().map(|(s, _)| self.backend.degree(s)).max().unwrap_or(0) as i64;
        let deg_v = v.iter().map(|(s, _)| self.backend.degree(s)).max().unwrap_or(0) as i64;
        wt_a + deg_v - 1
    }

    /// Residual of: `tr o(a[0] v) = 0`.
    pub fn check_a0(
        &self,
        a: &Vector<B::State>,
        v: &Vector<B::State>,
        order: usize,
    ) -> Result<QSeries, TorusError> {
        let image = self.bracket(a, 0, v)?;
        Ok(self.trace(&image, order))
    }

    /// Residual of: `tr o(a[-m] v) + (-1)^m sum_k binom(2k-1, m-1) G_2k tr o(a[2k-m] v) = 0`,
    /// for m >= 2. The k-sum is finite because `a[j] v` dies once j exceeds the
    /// truncation bound.
    pub fn check_am(
        &self,
        a: &Vector<B::State>,
        v: &Vector<B::State>,
        m: i64,
        order: usize,
    ) -> Result<QSeries, TorusError> {
        if m < 2 {
            return Err(TorusError::BadPoleOrder(m));
        }
        let head = self.bracket(a, -m, v)?;
        let mut residual = self.trace(&head, order);
        let sign = if m % 2 == 0 {
            ExactScalar::one()
        } else {
            ExactScalar::from_int(-1)
        };
        let bound = self.bracket_bound(a, v);
        let mut k: i64 = 1;
        while 2 * k - m <= bound {
            let b = binom(2 * k - 1, (m - 1) as u32);
            if !b.is_zero() {
                let image = self.bracket(a, 2 * k - m, v)?;
                if !image.is_zero() {
                    let weight = eisenstein(k as u32, order)
                        .scale(&sign.scale(&b));
                    residual = residual.add(&weight.mul(&self.trace(&image, order)));
                }
            }
            k += 1;
        }
        Ok(residual)
    }

    /// Residual of: `tr o(a[-1] v) = tr o(a) o(v) + sum_k G_2k tr o(a[2k-1] v)`.
    pub fn check_aminus1(
        &self,
        a: &Vector<B::State>,
        v: &Vector<B::State>,
        order: usize,
    ) -> Result<QSeries, TorusError> {
        let head = self.bracket(a, -1, v)?;
        let mut residual = self.trace(&head, order);
        residual = residual.sub(&self.trace_composed(a, v, order));
        let bound = self.bracket_bound(a, v);
        let mut k: i64 = 1;
        while 2 * k - 1 <= bound {
            let image = self.bracket(a, 2 * k - 1, v)?;
            if !image.is_zero() {
                let weight = eisenstein(k as u32, order);
                residual = residual.sub(&weight.mul(&self.trace(&image, order)));
            }
            k += 1;
        }
        Ok(residual)
    }

    /// Residual of the chiral-algebra annihilation condition on the torus:
    /// m = 0 is the residue of the plain bracket field (equal to check_a0),
    /// m >= 2 pairs the field with the order-m Weierstrass expansion
    /// (a thin repackaging of check_am); m = 1 is rejected.
    pub fn block_annihilation(
        &self,
        a: &Vector<B::State>,
        v: &Vector<B::State>,
        m: i64,
        order: usize,
    ) -> Result<QSeries, TorusError> {
        match m {
            0 => self.check_a0(a, v, order),
            1 => Err(TorusError::PoleOrderOne),
            _ if m >= 2 => self.check_am(a, v, m, order),
            _ => Err(TorusError::BadPoleOrder(m)),
        }
    }

    /// Residual of the two-variable mode identity
    ///   `sum_{i>=0} sum_{k>=1} ( binom(wt a - 1 + k, i) q^k/(1-q^k) t^k
    ///                         + binom(wt a - 1 - k, i) q^-k/(1-q^-k) t^-k ) a(i) v
    ///   = sum_{m>=0} P_(m+1)(t q, q) a[m] v`,
    /// compared within the window |t-exponent| <= window and through q-order.
    pub fn check_sum_formula(
        &self,
        a: &Vector<B::State>,
        v: &Vector<B::State>,
        order: usize,
        window: i64,
    ) -> Result<SumFormulaResidual<B::State>, TorusError> {
        assert!(window >= 1);
        let wt_a = homogeneous_degree(self.backend, a).ok_or(ModeError::NonHomogeneous)? as i64;
        let bound = self.bracket_bound(a, v);

        let mut lhs: BTreeMap<B::State, ZLaurent> = BTreeMap::new();
        for i in 0..=bound.max(0) {
            let image = mode(self.backend, a, i, v);
            if image.is_zero() {
                continue;
            }
            // the geometric weights for this i, exact within the window
            let mut weight = ZLaurent::zero(-window, window, order).with_exactness(false, false);
            for k in 1..=window {
                let plus = binom(wt_a - 1 + k, i as u32);
                if !plus.is_zero() {
                    let mut geo = QSeries::zero_int_offset(order);
                    let mut e = k as usize;
                    while e <= order {
                        geo.set_coeff(e, ExactScalar::from_rational(plus.clone()));
                        e += k as usize;
                    }
                    weight.set_coeff(k, geo);
                }
                let minus = binom(wt_a - 1 - k, i as u32);
                if !minus.is_zero() {
                    // q^-k/(1 - q^-k) = -sum_{j>=0} q^(jk)
                    let mut geo = QSeries::zero_int_offset(order);
                    let mut e = 0usize;
                    while e <= order {
                        geo.set_coeff(e, ExactScalar::from_rational(-minus.clone()));
                        e += k as usize;
                    }
                    weight.set_coeff(-k, geo);
                }
            }
            for (s, c) in image.iter() {
                let contrib = weight.scale(c);
                match lhs.get_mut(s) {
                    Some(acc) => *acc = acc.add(&contrib),
                    None => {
                        lhs.insert(s.clone(), contrib);
                    }
                }
            }
        }

        let mut rhs: BTreeMap<B::State, ZLaurent> = BTreeMap::new();
        for m in 0..=bound.max(0) {
            let image = self.bracket(a, m, v)?;
            if image.is_zero() {
                continue;
            }
            let p = p_series_shifted(m as u32 + 1, order, -window, window);
            for (s, c) in image.iter() {
                let contrib = p.scale(c);
                match rhs.get_mut(s) {
                    Some(acc) => *acc = acc.add(&contrib),
                    None => {
                        rhs.insert(s.clone(), contrib);
                    }
                }
            }
        }

        let mut per_state = BTreeMap::new();
        let keys: Vec<B::State> = lhs.keys().chain(rhs.keys()).cloned().collect();
        let empty = ZLaurent::zero(-window, window, order).with_exactness(false, false);
        for s in keys {
            if per_state.contains_key(&s) {
                continue;
            }
            let l = lhs.get(&s).unwrap_or(&empty);
            let r = rhs.get(&s).unwrap_or(&empty);
            per_state.insert(s, l.sub(r));
        }
        Ok(SumFormulaResidual { per_state })
    }
}

fn single_state<S: Ord + Clone>(v: &Vector<S>) -> Option<&S> {
    if v.len() != 1 {
        return None;
    }
    let (s, c) = v.iter().next().unwrap();
    c.is_one().then_some(s)
}

/// Residual of the sum formula: one windowed Laurent residual per basis state.
#[derive(Debug)]
pub struct SumFormulaResidual<S: Ord> {
    pub per_state: BTreeMap<S, ZLaurent>,
}

impl<S: Ord + fmt::Display> SumFormulaResidual<S> {
    pub fn is_zero(&self) -> bool {
        self.per_state.values().all(|z| z.is_zero_reliable())
    }

    pub fn first_nonzero(&self) -> Option<(String, NonzeroTerm)> {
        for (s, z) in &self.per_state {
            if let Some(t) = z.nonzero_terms().into_iter().next() {
                return Some((s.to_string(), t));
            }
        }
        None
    }
}

/// The first nonzero residual coefficient of a q-series as
/// "(q-power, value)" for failure reports.
pub fn describe_residual(residual: &QSeries) -> Option<String> {
    residual
        .first_nonzero()
        .map(|(exp, val)| format!("q^{} : {}", crate::scalar::fmt_rational(&exp), val))
}
