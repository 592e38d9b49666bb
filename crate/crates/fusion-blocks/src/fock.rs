//! Graded-module mode-algebra backend: the rank-1 Heisenberg Fock module.
//!
//! Basis vectors are partitions: the partition (l1 >= l2 >= ... >= lk)
//! stands for a(-l1)...a(-lk) applied to the vacuum, of degree sum(l_i).
//! Generator modes obey [a(m), a(n)] = m delta(m+n, 0) and kill the vacuum
//! for n >= 0; modes of composite states are expanded through the standard
//! iterate recursion, so every mode action reduces to generator actions with
//! exact coefficients.
//!
//! The trace machinery is generic over the [`Backend`] trait; the Fock
//! backend is one concrete instance (central charge 1, conformal weight 0).

use std::collections::BTreeMap;
use std::fmt;

use dashmap::DashMap;
use num::{BigRational, One, Zero};
use thiserror::Error;

use crate::qseries::QSeries;
use crate::ratseries::coordinate_change_series;
use crate::scalar::{binom, ExactScalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModeError {
    #[error("square-bracket modes need a weight-homogeneous input; split the vector by degree")]
    NonHomogeneous,
}

/// Partition in canonical descending order; the empty partition is the vacuum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&p| p >= 1), "partition parts are >= 1");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn vacuum() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    /// Add one part (creation).
    fn with_part(&self, p: u32) -> Partition {
        let mut parts = self.0.clone();
        let pos = parts.partition_point(|&q| q >= p);
        parts.insert(pos, p);
        Partition(parts)
    }

    /// Remove one part equal to p, returning the multiplicity it had.
    fn without_part(&self, p: u32) -> Option<(u32, Partition)> {
        let mult = self.0.iter().filter(|&&q| q == p).count() as u32;
        if mult == 0 {
            return None;
        }
        let mut parts = self.0.clone();
        let pos = parts.iter().position(|&q| q == p).unwrap();
        parts.remove(pos);
        Some((mult, Partition(parts)))
    }

    fn split_largest(&self) -> Option<(u32, Partition)> {
        let (&k, rest) = self.0.split_first()?;
        Some((k, Partition(rest.to_vec())))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, "]")
    }
}

/// Finite linear combination of basis states with exact scalar coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector<S: Ord>(BTreeMap<S, ExactScalar>);

impl<S: Ord + Clone> Vector<S> {
    pub fn zero() -> Self {
        Vector(BTreeMap::new())
    }

    pub fn basis(s: S) -> Self {
        let mut m = BTreeMap::new();
        m.insert(s, ExactScalar::one());
        Vector(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, &ExactScalar)> {
        self.0.iter()
    }

    pub fn coeff(&self, s: &S) -> ExactScalar {
        self.0.get(s).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn add_term(&mut self, s: S, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(s) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Vector<S>, c: &ExactScalar) {
        for (s, a) in other.iter() {
            self.add_term(s.clone(), &(a * c));
        }
    }

    pub fn add(&self, other: &Vector<S>) -> Vector<S> {
        let mut out = self.clone();
        out.add_scaled(other, &ExactScalar::one());
        out
    }

    pub fn sub(&self, other: &Vector<S>) -> Vector<S> {
        let mut out = self.clone();
        out.add_scaled(other, &ExactScalar::from_int(-1));
        out
    }

    pub fn scale(&self, c: &ExactScalar) -> Vector<S> {
        if c.is_zero() {
            return Vector::zero();
        }
        Vector(self.0.iter().map(|(s, a)| (s.clone(), a * c)).collect())
    }
}

impl<S: Ord + Clone + fmt::Display> fmt::Display for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (s, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})*{}", c, s)?;
        }
        Ok(())
    }
}

/// A graded module with mode actions, enough to build zero modes, coordinate
/// changed modes, and graded traces. One state type serves both the acting
/// algebra and the module; that is exact for backends whose intertwiner is
/// the module vertex operator itself.
pub trait Backend: Sync {
    type State: Clone + Ord + Eq + std::hash::Hash + fmt::Display + Send + Sync;

    fn central_charge(&self) -> BigRational;
    /// Conformal weight h of the module (grading offset of the traces).
    fn conformal_weight(&self) -> BigRational;
    fn basis(&self, degree: usize) -> Vec<Self::State>;
    fn dim(&self, degree: usize) -> usize {
        self.basis(degree).len()
    }
    fn degree(&self, s: &Self::State) -> usize;
    /// The action a(n) v for basis states a and v.
    fn mode_basis(&self, a: &Self::State, n: i64, v: &Self::State) -> Vector<Self::State>;
}

/// The rank-1 free-boson Fock vacuum module (c = 1, h = 0).
pub struct FockBackend {
    cache: DashMap<(Partition, i64, Partition), Vector<Partition>>,
}

impl Default for FockBackend {
    fn default() -> Self {
        FockBackend::new()
    }
}

impl FockBackend {
    pub fn new() -> Self {
        FockBackend { cache: DashMap::new() }
    }

    /// The vacuum state 1 as a vector.
    pub fn vacuum() -> Vector<Partition> {
        Vector::basis(Partition::vacuum())
    }

    /// The generator state a(-k) applied to the vacuum.
    pub fn alpha_state(k: u32) -> Vector<Partition> {
        Vector::basis(Partition::new(vec![k]))
    }

    /// The conformal vector: (1/2) a(-1)^2 applied to the vacuum.
    pub fn omega() -> Vector<Partition> {
        Vector::basis(Partition::new(vec![1, 1])).scale(&ExactScalar::from_ratio(1, 2))
    }

    /// Generator mode a(p) on a basis state.
    fn alpha_mode(p: i64, v: &Partition) -> Vector<Partition> {
        use std::cmp::Ordering;
        match p.cmp(&0) {
            Ordering::Less => Vector::basis(v.with_part((-p) as u32)),
            // zero momentum: a(0) kills the whole vacuum Fock module
            Ordering::Equal => Vector::zero(),
            Ordering::Greater => match v.without_part(p as u32) {
                None => Vector::zero(),
                Some((mult, rest)) => Vector::basis(rest)
                    .scale(&ExactScalar::from_int(p * mult as i64)),
            },
        }
    }

    fn mode_basis_uncached(&self, a: &Partition, n: i64, v: &Partition) -> Vector<Partition> {
        let Some((k, b)) = a.split_largest() else {
            // vacuum vertex operator is the identity: 1(n) = delta(n, -1)
            return if n == -1 {
                Vector::basis(v.clone())
            } else {
                Vector::zero()
            };
        };
        if b.parts().is_empty() && k == 1 {
            return Self::alpha_mode(n, v);
        }
        // iterate recursion for (a(-k) b)(n) with exact binomial weights:
        //   sum_{j>=0} binom(k+j-1, j) a(-k-j) (b(n+j) v)
        //   - (-1)^k sum_{j>=1} binom(k+j-1, j) b(-k+n-j) (a(j) v)
        // (with b empty this reproduces the derivative field of a(-k)1)
        let mut out = Vector::zero();
        let wt_b = b.degree() as i64;
        let deg_v = v.degree() as i64;
        let j_hi = wt_b + deg_v - 1 - n;
        for j in 0..=j_hi {
            let inner = self.mode_basis_cached(&b, n + j, v);
            if inner.is_zero() {
                continue;
            }
            let c = ExactScalar::from_rational(binom(k as i64 + j - 1, j as u32));
            if c.is_zero() {
                continue;
            }
            for (s, coeff) in inner.iter() {
                out.add_term(s.with_part(k + j as u32), &(coeff * &c));
            }
        }
        let sign = if k % 2 == 0 { -1 } else { 1 }; // -(-1)^k
        for j in 1..=deg_v {
            let av = Self::alpha_mode(j, v);
            if av.is_zero() {
                continue;
            }
            let c = ExactScalar::from_rational(binom(k as i64 + j - 1, j as u32))
                .scale(&BigRational::from_integer(sign.into()));
            for (s, coeff) in av.iter() {
                let moved = self.mode_basis_cached(&b, -(k as i64) + n - j, s);
                out.add_scaled(&moved, &(coeff * &c));
            }
        }
        out
    }

    fn mode_basis_cached(&self, a: &Partition, n: i64, v: &Partition) -> Vector<Partition> {
        let key = (a.clone(), n, v.clone());
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let computed = self.mode_basis_uncached(a, n, v);
        self.cache.insert(key, computed.clone());
        computed
    }
}

impl Backend for FockBackend {
    type State = Partition;

    fn central_charge(&self) -> BigRational {
        BigRational::one()
    }

    fn conformal_weight(&self) -> BigRational {
        BigRational::zero()
    }

    fn basis(&self, degree: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn descend(remaining: usize, max_part: usize, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if remaining == 0 {
                out.push(Partition(current.clone()));
                return;
            }
            for p in (1..=remaining.min(max_part)).rev() {
                current.push(p as u32);
                descend(remaining - p, p, current, out);
                current.pop();
            }
        }
        descend(degree, degree.max(1), &mut current, &mut out);
        out
    }

    fn degree(&self, s: &Partition) -> usize {
        s.degree()
    }

    fn mode_basis(&self, a: &Partition, n: i64, v: &Partition) -> Vector<Partition> {
        self.mode_basis_cached(a, n, v)
    }
}

/// Bilinear extension of the basis mode action: Y(a, z) coefficient n applied to v.
pub fn mode<B: Backend>(
    backend: &B,
    a: &Vector<B::State>,
    n: i64,
    v: &Vector<B::State>,
) -> Vector<B::State> {
    let mut out = Vector::zero();
    for (sa, ca) in a.iter() {
        for (sv, cv) in v.iter() {
            let w = backend.mode_basis(sa, n, sv);
            out.add_scaled(&w, &(ca * cv));
        }
    }
    out
}

/// Degree of a vector if homogeneous.
pub fn homogeneous_degree<B: Backend>(backend: &B, v: &Vector<B::State>) -> Option<usize> {
    let mut deg = None;
    for (s, _) in v.iter() {
        let d = backend.degree(s);
        match deg {
            None => deg = Some(d),
            Some(e) if e != d => return None,
            _ => {}
        }
    }
    deg
}

/// The coordinate-changed mode `a[m] v = u^(-m-1) sum_i c_i a(i) v`, where the
/// c_i expand (ln(1+z))^m (1+z)^(wt a - 1). Requires homogeneous a; finite by
/// the truncation property.
pub fn square_bracket<B: Backend>(
    backend: &B,
    a: &Vector<B::State>,
    m: i64,
    v: &Vector<B::State>,
) -> Result<Vector<B::State>, ModeError> {
    if a.is_zero() || v.is_zero() {
        return Ok(Vector::zero());
    }
    let wt_a = homogeneous_degree(backend, a).ok_or(ModeError::NonHomogeneous)? as i64;
    let deg_v_max = v.iter().map(|(s, _)| backend.degree(s)).max().unwrap() as i64;
    let i_hi = wt_a + deg_v_max - 1;
    if m > i_hi {
        return Ok(Vector::zero());
    }
    let cc = coordinate_change_series(wt_a - 1, m, i_hi);
    let mut out = Vector::zero();
    for i in m..=i_hi {
        let c = cc.coeff(i);
        if c.is_zero() {
            continue;
        }
        let w = mode(backend, a, i, v);
        out.add_scaled(&w, &ExactScalar::from_rational(c));
    }
    Ok(out.scale(&ExactScalar::u_pow(-m - 1)))
}

/// Zero mode o(v) applied to u: the degree-preserving Fourier mode
/// v(deg v - 1) of each homogeneous component of v.
pub fn zero_mode_apply<B: Backend>(
    backend: &B,
    v: &Vector<B::State>,
    target: &Vector<B::State>,
) -> Vector<B::State> {
    let mut out = Vector::zero();
    let mut by_degree: BTreeMap<usize, Vector<B::State>> = BTreeMap::new();
    for (s, c) in v.iter() {
        by_degree
            .entry(backend.degree(s))
            .or_insert_with(Vector::zero)
            .add_term(s.clone(), c);
    }
    for (deg, comp) in by_degree {
        let w = mode(backend, &comp, deg as i64 - 1, target);
        out.add_scaled(&w, &ExactScalar::one());
    }
    out
}

/// Graded character: sum_n dim(n) q^(n + h - c/24).
pub fn character<B: Backend>(backend: &B, order: usize) -> QSeries {
    let offset = backend.conformal_weight()
        - backend.central_charge() / BigRational::from_integer(24.into());
    let mut s = QSeries::zero(offset, order);
    for n in 0..=order {
        s.set_coeff(n, ExactScalar::from_int(backend.dim(n) as i64));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn virasoro(b: &FockBackend, n: i64, v: &Vector<Partition>) -> Vector<Partition> {
        mode(b, &FockBackend::omega(), n + 1, v)
    }

    #[test]
    fn basis_counts_are_partition_numbers() {
        let b = FockBackend::new();
        let p = [1usize, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77];
        for (n, &want) in p.iter().enumerate() {
            assert_eq!(b.dim(n), want, "p({})", n);
        }
    }

    #[test]
    fn alpha_zero_kills_everything() {
        let b = FockBackend::new();
        for n in 0..=5usize {
            for s in b.basis(n) {
                let v = Vector::basis(s);
                assert!(mode(&b, &FockBackend::alpha_state(1), 0, &v).is_zero());
            }
        }
    }

    #[test]
    fn l0_is_the_degree() {
        let b = FockBackend::new();
        for n in 0..=6usize {
            for s in b.basis(n) {
                let v = Vector::basis(s);
                let got = virasoro(&b, 0, &v);
                assert_eq!(got, v.scale(&ExactScalar::from_int(n as i64)));
            }
        }
    }

    #[test]
    fn vacuum_is_killed_by_nonneg_virasoro() {
        let b = FockBackend::new();
        for n in -1..=3i64 {
            assert!(
                virasoro(&b, n, &FockBackend::vacuum()).is_zero(),
                "L({}) on the vacuum",
                n
            );
        }
    }

    #[test]
    fn grading_shift_of_modes() {
        let b = FockBackend::new();
        // deg(a(n) v) = wt a - n - 1 + deg v on a spread of inputs
        let cases = [
            (part(&[2, 1]), -2, part(&[1, 1])),
            (part(&[3]), 1, part(&[2, 2])),
            (part(&[1, 1]), 0, part(&[3, 1])),
            (part(&[2, 2]), 3, part(&[4])),
            (part(&[1]), -1, part(&[])),
        ];
        for (a, n, v) in cases {
            let wt_a = a.degree() as i64;
            let deg_v = v.degree() as i64;
            let got = b.mode_basis(&a, n, &v);
            let want_deg = wt_a - n - 1 + deg_v;
            for (s, _) in got.iter() {
                assert_eq!(s.degree() as i64, want_deg, "a={} n={} v={}", a, n, v);
            }
        }
    }

    #[test]
    fn virasoro_bracket_holds() {
        let b = FockBackend::new();
        let c = BigRational::one();
        for m in -3..=3i64 {
            for n in -3..=3i64 {
                for deg in 0..=6usize {
                    for s in b.basis(deg) {
                        let v = Vector::basis(s);
                        let lhs = virasoro(&b, m, &virasoro(&b, n, &v))
                            .sub(&virasoro(&b, n, &virasoro(&b, m, &v)));
                        let mut rhs = virasoro(&b, m + n, &v)
                            .scale(&ExactScalar::from_int(m - n));
                        if m + n == 0 {
                            let central = BigRational::from_integer((m * m * m - m).into())
                                * &c
                                / BigRational::from_integer(12.into());
                            rhs = rhs.add(&v.scale(&ExactScalar::from_rational(central)));
                        }
                        assert_eq!(lhs, rhs, "[L({}), L({})] at degree {}", m, n, deg);
                    }
                }
            }
        }
    }

    #[test]
    fn mode_commutator_matches_lie_bracket() {
        // [a(m), b(n)] = sum_j binom(m, j) (a(j) b)(m+n-j)
        let b = FockBackend::new();
        let algebra_states = [part(&[1]), part(&[2]), part(&[1, 1])];
        for a_s in &algebra_states {
            for b_s in &algebra_states {
                let av = Vector::basis(a_s.clone());
                let bv = Vector::basis(b_s.clone());
                for m in -2..=2i64 {
                    for n in -2..=2i64 {
                        for deg in 0..=5usize {
                            for s in b.basis(deg) {
                                let v = Vector::basis(s);
                                let lhs = mode(&b, &av, m, &mode(&b, &bv, n, &v))
                                    .sub(&mode(&b, &bv, n, &mode(&b, &av, m, &v)));
                                let mut rhs = Vector::zero();
                                let j_hi = a_s.degree() as i64 + b_s.degree() as i64;
                                for j in 0..=j_hi {
                                    let ab = b.mode_basis(a_s, j, b_s);
                                    if ab.is_zero() {
                                        continue;
                                    }
                                    let w = mode(&b, &ab, m + n - j, &v);
                                    rhs.add_scaled(
                                        &w,
                                        &ExactScalar::from_rational(binom(m, j as u32)),
                                    );
                                }
                                assert_eq!(lhs, rhs, "[{}({}), {}({})]", a_s, m, b_s, n);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn omega_bracket_zero_is_translation_plus_scaling() {
        // omega[0] = u^-1 (L(-1) + L(0))
        let b = FockBackend::new();
        for deg in 0..=5usize {
            for s in b.basis(deg) {
                let v = Vector::basis(s);
                let got = square_bracket(&b, &FockBackend::omega(), 0, &v).unwrap();
                let want = virasoro(&b, -1, &v)
                    .add(&virasoro(&b, 0, &v))
                    .scale(&ExactScalar::u_pow(-1));
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn weight_one_bracket_zero_mode() {
        // a[0] = u^-1 a(0) for wt a = 1, which vanishes on the Fock module
        let b = FockBackend::new();
        for deg in 0..=5usize {
            for s in b.basis(deg) {
                let v = Vector::basis(s);
                let got = square_bracket(&b, &FockBackend::alpha_state(1), 0, &v).unwrap();
                assert!(got.is_zero());
            }
        }
    }

    #[test]
    fn square_bracket_rejects_mixed_weight() {
        let b = FockBackend::new();
        let mixed = FockBackend::vacuum().add(&FockBackend::alpha_state(1));
        assert_eq!(
            square_bracket(&b, &mixed, 0, &FockBackend::vacuum()),
            Err(ModeError::NonHomogeneous)
        );
    }

    #[test]
    fn zero_modes_small_cases() {
        let b = FockBackend::new();
        for deg in 0..=5usize {
            for s in b.basis(deg) {
                let v = Vector::basis(s);
                // o(1) is the identity
                assert_eq!(zero_mode_apply(&b, &FockBackend::vacuum(), &v), v);
                // o(omega) on degree n is multiplication by n
                assert_eq!(
                    zero_mode_apply(&b, &FockBackend::omega(), &v),
                    v.scale(&ExactScalar::from_int(deg as i64))
                );
                // o(alpha) vanishes (zero momentum)
                assert!(zero_mode_apply(&b, &FockBackend::alpha_state(1), &v).is_zero());
            }
        }
    }

    #[test]
    fn square_bracket_partition_states_are_bracket_weight_graded() {
        // [wt]-graded states alpha[-l1]...alpha[-lk] vacuum have L[0]
        // eigenvalue sum(l_i), and a[m] shifts [wt] by wt a - m - 1.
        let b = FockBackend::new();
        let alpha = FockBackend::alpha_state(1);
        let sq_l0 = |v: &Vector<Partition>| {
            square_bracket(&b, &FockBackend::omega(), 1, v)
                .unwrap()
                .scale(&ExactScalar::u_pow(2))
        };
        let bracket_state = |parts: &[i64]| {
            let mut v = FockBackend::vacuum();
            for &p in parts.iter().rev() {
                v = square_bracket(&b, &alpha, -p, &v).unwrap();
            }
            v
        };
        for parts in [&[1i64][..], &[2], &[1, 1], &[2, 1], &[3, 2]] {
            let v = bracket_state(parts);
            let wt: i64 = parts.iter().sum();
            assert_eq!(sq_l0(&v), v.scale(&ExactScalar::from_int(wt)), "{:?}", parts);
            // shift by a = alpha (wt 1), m = -2: new [wt] is wt + 2
            let shifted = square_bracket(&b, &alpha, -2, &v).unwrap();
            assert_eq!(
                sq_l0(&shifted),
                shifted.scale(&ExactScalar::from_int(wt + 2)),
                "{:?} shifted",
                parts
            );
        }
    }

    #[test]
    fn character_is_partition_generating_function() {
        let b = FockBackend::new();
        let ch = character(&b, 12);
        assert_eq!(
            ch.offset(),
            &BigRational::new((-1).into(), 24.into()),
            "offset h - c/24 = -1/24"
        );
        assert_eq!(ch.coeff(0), &ExactScalar::from_int(1));
        assert_eq!(ch.coeff(5), &ExactScalar::from_int(7));
        // independent oracle: expand prod 1/(1-q^n)
        let mut euler = vec![0i64; 13];
        euler[0] = 1;
        for n in 1..=12usize {
            for e in n..=12 {
                euler[e] += euler[e - n];
            }
        }
        for (n, &want) in euler.iter().enumerate() {
            assert_eq!(ch.coeff(n), &ExactScalar::from_int(want), "p({})", n);
        }
    }
}
