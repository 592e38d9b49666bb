//! Exact fusion-ring algebra: the integer tensor `N[i][j][k]`, its axioms, the
//! fusion matrices, and the average matrix that powers the rank formula.
//!
//! Labels are canonical indices 0..r with the vacuum fixed at index 0. Axiom
//! verification is brute force over index tuples; catalog rings are tiny, so
//! O((r+1)^4) is fine. Matrix arithmetic is arbitrary precision because
//! powers of the average matrix grow geometrically with the genus.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigUint, One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FusionError {
    #[error("tensor has {got} entries but {expect} labels require {cube}")]
    DimensionMismatch { got: usize, expect: usize, cube: usize },
    #[error("dual map has {got} entries for {expect} labels")]
    DualLength { got: usize, expect: usize },
    #[error("dual map is not a permutation: value {0} repeated or out of range")]
    DualNotPermutation(usize),
    #[error("label index {0} out of range (ring has {1} labels)")]
    IndexOutOfRange(usize, usize),
    #[error("ring violates fusion axioms: {0}")]
    AxiomViolations(AxiomReport),
    #[error("ring must have at least one label (the vacuum)")]
    Empty,
}

/// Which axiom a violation witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// dual is an involution fixing the vacuum
    Involution,
    /// `N[0][j][k] = delta(j, k)`
    Identity,
    /// `N[i][j][k] = N[j][i][k]`
    Commutativity,
    /// `sum_W N[i][j][W] N[W][k][l] = sum_W N[j][k][W] N[i][W][l]`
    Associativity,
    /// `N[i][k][j] = N[i][dual j][dual k]`
    Transpose,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::Involution => "involution",
            Axiom::Identity => "identity",
            Axiom::Commutativity => "commutativity",
            Axiom::Associativity => "associativity",
            Axiom::Transpose => "transpose",
        };
        write!(f, "{}", name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {:?}", self.axiom, self.witness)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct AxiomReport(pub Vec<AxiomViolation>);

impl AxiomReport {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", items.join(", "))
    }
}

/// Fusion data: labels, the dagger involution, and the tensor `N[i][j][k]`.
///
/// Construction checks structure only (dimensions, dual a permutation); the
/// axioms are checked separately by [`FusionData::verify_axioms`] so that
/// deliberately broken rings can exist in tests and error paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionData {
    labels: Vec<String>,
    dual: Vec<usize>,
    tensor: Vec<u64>, // flattened [i][j][k], dimension (r+1)^3
}

/// On-disk JSON form: `{"labels": [...], "dual": [...], "tensor": [[[...]]]}`.
#[derive(Serialize, Deserialize)]
pub struct RingFile {
    pub labels: Vec<String>,
    pub dual: Vec<usize>,
    pub tensor: Vec<Vec<Vec<u64>>>,
}

impl FusionData {
    pub fn new(labels: Vec<String>, dual: Vec<usize>, tensor: Vec<u64>) -> Result<Self, FusionError> {
        let n = labels.len();
        if n == 0 {
            return Err(FusionError::Empty);
        }
        if dual.len() != n {
            return Err(FusionError::DualLength { got: dual.len(), expect: n });
        }
        if tensor.len() != n * n * n {
            return Err(FusionError::DimensionMismatch {
                got: tensor.len(),
                expect: n,
                cube: n * n * n,
            });
        }
        let mut seen = vec![false; n];
        for &d in &dual {
            if d >= n || seen[d] {
                return Err(FusionError::DualNotPermutation(d));
            }
            seen[d] = true;
        }
        Ok(FusionData { labels, dual, tensor })
    }

    pub fn from_nested(
        labels: Vec<String>,
        dual: Vec<usize>,
        tensor: Vec<Vec<Vec<u64>>>,
    ) -> Result<Self, FusionError> {
        let n = labels.len();
        if tensor.len() != n || tensor.iter().any(|p| p.len() != n || p.iter().any(|r| r.len() != n)) {
            return Err(FusionError::DimensionMismatch {
                got: tensor.iter().flatten().flatten().count(),
                expect: n,
                cube: n * n * n,
            });
        }
        let mut flat = Vec::with_capacity(n * n * n);
        for plane in &tensor {
            for row in plane {
                flat.extend_from_slice(row);
            }
        }
        FusionData::new(labels, dual, flat)
    }

    pub fn from_file(file: RingFile) -> Result<Self, FusionError> {
        FusionData::from_nested(file.labels, file.dual, file.tensor)
    }

    pub fn to_file(&self) -> RingFile {
        let n = self.rank_plus_one();
        let tensor = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.n(i, j, k)).collect())
                    .collect()
            })
            .collect();
        RingFile {
            labels: self.labels.clone(),
            dual: self.dual.clone(),
            tensor,
        }
    }

    /// Number of simple labels, r + 1.
    pub fn rank_plus_one(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vacuum(&self) -> usize {
        0
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn dual_map(&self) -> &[usize] {
        &self.dual
    }

    /// The multiplicity `N[i][j][k]`.
    pub fn n(&self, i: usize, j: usize, k: usize) -> u64 {
        let r = self.rank_plus_one();
        self.tensor[(i * r + j) * r + k]
    }

    pub fn check_index(&self, i: usize) -> Result<(), FusionError> {
        if i < self.rank_plus_one() {
            Ok(())
        } else {
            Err(FusionError::IndexOutOfRange(i, self.rank_plus_one()))
        }
    }

    /// Resolve a label name to its index.
    pub fn resolve(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    /// Brute-force check of the five fusion-data invariants. Empty report
    /// means the ring is a valid fusion ring.
    pub fn verify_axioms(&self) -> AxiomReport {
        let n = self.rank_plus_one();
        let mut report = Vec::new();
        for i in 0..n {
            if self.dual[self.dual[i]] != i {
                report.push(AxiomViolation { axiom: Axiom::Involution, witness: vec![i] });
            }
        }
        if self.dual[0] != 0 {
            report.push(AxiomViolation { axiom: Axiom::Involution, witness: vec![0] });
        }
        'identity: for j in 0..n {
            for k in 0..n {
                let want = u64::from(j == k);
                if self.n(0, j, k) != want {
                    report.push(AxiomViolation { axiom: Axiom::Identity, witness: vec![0, j, k] });
                    break 'identity;
                }
            }
        }
        'comm: for i in 0..n {
            for j in 0..i {
                for k in 0..n {
                    if self.n(i, j, k) != self.n(j, i, k) {
                        report.push(AxiomViolation {
                            axiom: Axiom::Commutativity,
                            witness: vec![i, j, k],
                        });
                        break 'comm;
                    }
                }
            }
        }
        'transpose: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.n(i, k, j) != self.n(i, self.dual[j], self.dual[k]) {
                        report.push(AxiomViolation {
                            axiom: Axiom::Transpose,
                            witness: vec![i, j, k],
                        });
                        break 'transpose;
                    }
                }
            }
        }
        let comm_ok = !report.iter().any(|v| v.axiom == Axiom::Commutativity);
        let assoc = if n > 12 && comm_ok {
            // large product rings: with commutativity already verified the
            // associativity sums reduce to pairwise commuting fusion
            // matrices, checked with sparse rows instead of the raw
            // quintuple loop
            self.check_associativity_via_commutators()
        } else {
            self.check_associativity()
        };
        if let Err(w) = assoc {
            report.push(w);
        }
        AxiomReport(report)
    }

    /// Sparse check that N_i N_k = N_k N_i for all i, k; a mismatch at entry
    /// (j, l) witnesses the associativity tuple (i, j, k, l).
    fn check_associativity_via_commutators(&self) -> Result<(), AxiomViolation> {
        let n = self.rank_plus_one();
        let mut rows: Vec<Vec<(usize, u64)>> = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                rows.push(
                    (0..n)
                        .filter_map(|k| {
                            let v = self.n(i, j, k);
                            (v != 0).then_some((k, v))
                        })
                        .collect(),
                );
            }
        }
        let row = |i: usize, j: usize| -> &[(usize, u64)] { &rows[i * n + j] };
        let mut left = vec![0u128; n];
        let mut right = vec![0u128; n];
        for i in 0..n {
            for k in 0..i {
                for j in 0..n {
                    left.iter_mut().for_each(|x| *x = 0);
                    right.iter_mut().for_each(|x| *x = 0);
                    for &(w, a) in row(i, j) {
                        for &(l, b) in row(k, w) {
                            left[l] += a as u128 * b as u128;
                        }
                    }
                    for &(w, a) in row(k, j) {
                        for &(l, b) in row(i, w) {
                            right[l] += a as u128 * b as u128;
                        }
                    }
                    if left != right {
                        let l = (0..n).find(|&l| left[l] != right[l]).unwrap();
                        return Err(AxiomViolation {
                            axiom: Axiom::Associativity,
                            witness: vec![i, j, k, l],
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_associativity(&self) -> Result<(), AxiomViolation> {
        use rayon::prelude::*;
        let n = self.rank_plus_one();
        let bad = (0..n).into_par_iter().find_map_any(|i| {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut lhs: u128 = 0;
                        let mut rhs: u128 = 0;
                        for w in 0..n {
                            lhs = lhs
                                .checked_add(self.n(i, j, w) as u128 * self.n(w, k, l) as u128)
                                .expect("associativity sum overflow");
                            rhs = rhs
                                .checked_add(self.n(j, k, w) as u128 * self.n(i, w, l) as u128)
                                .expect("associativity sum overflow");
                        }
                        if lhs != rhs {
                            return Some(AxiomViolation {
                                axiom: Axiom::Associativity,
                                witness: vec![i, j, k, l],
                            });
                        }
                    }
                }
            }
            None
        });
        match bad {
            Some(v) => Err(v),
            None => Ok(()),
        }
    }

    /// The fusion product i * j as a multiset of labels with multiplicities.
    pub fn multiply(&self, i: usize, j: usize) -> Result<BTreeMap<usize, u64>, FusionError> {
        self.check_index(i)?;
        self.check_index(j)?;
        let mut out = BTreeMap::new();
        for k in 0..self.rank_plus_one() {
            let m = self.n(i, j, k);
            if m > 0 {
                out.insert(k, m);
            }
        }
        Ok(out)
    }

    /// The matrix `(N_i)_j^k = N[i][j][k]`.
    pub fn fusion_matrix(&self, i: usize) -> Result<IntMatrix, FusionError> {
        self.check_index(i)?;
        let n = self.rank_plus_one();
        let mut m = IntMatrix::zero(n);
        for j in 0..n {
            for k in 0..n {
                m.set(j, k, BigUint::from(self.n(i, j, k)));
            }
        }
        Ok(m)
    }

    /// The average matrix sum_i N_i N_(dual i), cross-checked against the
    /// trace form sum_l Tr(N_(dual l)) N_l; the two agree for every valid
    /// ring, so a mismatch is a hard internal failure.
    pub fn average_matrix(&self) -> Result<IntMatrix, FusionError> {
        let report = self.verify_axioms();
        if !report.is_empty() {
            return Err(FusionError::AxiomViolations(report));
        }
        let n = self.rank_plus_one();
        let mut avg = IntMatrix::zero(n);
        for i in 0..n {
            let ni = self.fusion_matrix(i)?;
            let nid = self.fusion_matrix(self.dual[i])?;
            avg = avg.add(&ni.mul(&nid));
        }
        let mut by_trace = IntMatrix::zero(n);
        for l in 0..n {
            let t = self.fusion_matrix(self.dual[l])?.trace();
            by_trace = by_trace.add(&self.fusion_matrix(l)?.scale(&t));
        }
        assert_eq!(
            avg, by_trace,
            "the two forms of the average matrix disagree; fusion arithmetic is broken"
        );
        Ok(avg)
    }
}

/// Dense square matrix of nonnegative big integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigUint>,
}

impl IntMatrix {
    pub fn zero(n: usize) -> Self {
        IntMatrix {
            n,
            entries: vec![BigUint::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, BigUint::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigUint) {
        self.entries[i * self.n + j] = v;
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        IntMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = IntMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = self.get(i, k) * b + out.get(i, j);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &BigUint) -> IntMatrix {
        IntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn trace(&self) -> BigUint {
        let mut t = BigUint::zero();
        for i in 0..self.n {
            t += self.get(i, i);
        }
        t
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn commutes_with(&self, other: &IntMatrix) -> bool {
        self.mul(other) == other.mul(self)
    }

    pub fn from_rows(rows: &[&[u64]]) -> IntMatrix {
        let n = rows.len();
        let mut m = IntMatrix::zero(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n);
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigUint::from(v));
            }
        }
        m
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn structural_errors_are_distinct_from_axioms() {
        let bad = FusionData::new(vec!["1".into(), "x".into()], vec![0], vec![0; 8]);
        assert!(matches!(bad, Err(FusionError::DualLength { .. })));
        let bad = FusionData::new(vec!["1".into()], vec![0], vec![1, 1]);
        assert!(matches!(bad, Err(FusionError::DimensionMismatch { .. })));
        let bad = FusionData::new(vec!["1".into(), "x".into()], vec![0, 0], vec![0; 8]);
        assert!(matches!(bad, Err(FusionError::DualNotPermutation(0))));
    }

    #[test]
    fn forced_identity_violation_is_witnessed() {
        let ising = catalog::ising();
        let mut file = ising.to_file();
        file.tensor[0][1][1] = 0;
        let broken = FusionData::from_file(file).unwrap();
        let report = broken.verify_axioms();
        assert!(report
            .0
            .iter()
            .any(|v| v.axiom == Axiom::Identity && v.witness == vec![0, 1, 1]));
    }

    #[test]
    fn ising_multiply_and_matrices() {
        let ising = catalog::ising();
        let (eps, sigma) = (1, 2);
        // vacuum * sigma = sigma
        assert_eq!(
            ising.multiply(0, sigma).unwrap(),
            BTreeMap::from([(sigma, 1)])
        );
        // sigma * sigma = 1 + eps
        assert_eq!(
            ising.multiply(sigma, sigma).unwrap(),
            BTreeMap::from([(0, 1), (eps, 1)])
        );
        assert_eq!(
            ising.fusion_matrix(sigma).unwrap(),
            IntMatrix::from_rows(&[&[0, 0, 1], &[0, 0, 1], &[1, 1, 0]])
        );
        assert_eq!(
            ising.fusion_matrix(eps).unwrap(),
            IntMatrix::from_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])
        );
        assert_eq!(ising.fusion_matrix(0).unwrap(), IntMatrix::identity(3));
        assert!(matches!(
            ising.fusion_matrix(7),
            Err(FusionError::IndexOutOfRange(7, 3))
        ));
    }

    #[test]
    fn average_matrix_values() {
        let trivial = catalog::trivial();
        assert_eq!(
            trivial.average_matrix().unwrap(),
            IntMatrix::from_rows(&[&[1]])
        );
        let ising = catalog::ising();
        assert_eq!(
            ising.average_matrix().unwrap(),
            IntMatrix::from_rows(&[&[3, 1, 0], &[1, 3, 0], &[0, 0, 4]])
        );
    }

    #[test]
    fn average_matrix_refuses_broken_ring() {
        let mut file = catalog::ising().to_file();
        file.tensor[0][1][1] = 0;
        let broken = FusionData::from_file(file).unwrap();
        assert!(matches!(
            broken.average_matrix(),
            Err(FusionError::AxiomViolations(_))
        ));
    }

    #[test]
    fn fusion_matrices_commute_and_transpose() {
        for ring in [catalog::ising(), catalog::lee_yang(), catalog::su2_level(4)] {
            let n = ring.rank_plus_one();
            let mats: Vec<IntMatrix> = (0..n).map(|i| ring.fusion_matrix(i).unwrap()).collect();
            for a in &mats {
                for b in &mats {
                    assert!(a.commutes_with(b));
                }
            }
            let avg = ring.average_matrix().unwrap();
            for m in &mats {
                assert!(avg.commutes_with(m));
            }
            // transpose of N_i is (j,k) -> N[i][dual j][dual k]
            for (i, mat) in mats.iter().enumerate() {
                let t = mat.transpose();
                for j in 0..n {
                    for k in 0..n {
                        assert_eq!(
                            t.get(j, k),
                            &BigUint::from(ring.n(i, ring.dual(j), ring.dual(k)))
                        );
                    }
                }
            }
        }
    }
}
