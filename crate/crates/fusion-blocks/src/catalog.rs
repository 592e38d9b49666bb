//! Concrete fusion rings and the numeric Verlinde S-matrix cross-check.
//!
//! This is the only module that touches floating point. S-matrices are
//! entered in closed form, the Verlinde sums are rounded with a 1e-6
//! integrality tolerance, and only the resulting integer tensors ever cross
//! into the exact modules.

use thiserror::Error;

use crate::fusion::{FusionData, FusionError};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("S-matrix is not square ({0} entries)")]
    NotSquare(usize),
    #[error("S-matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("S-matrix is not unitary: |(S S*)[{0}][{1}] - I| = {2:e}")]
    NotUnitary(usize, usize, f64),
    #[error("vacuum row of S must be strictly positive; S[0][{0}] = {1}")]
    VacuumRowNotPositive(usize, f64),
    #[error("Verlinde number N[{i}][{j}][{k}] = {value} is {distance:e} from an integer")]
    NonIntegral { i: usize, j: usize, k: usize, value: f64, distance: f64 },
    #[error("Verlinde number N[{0}][{1}][{2}] rounds to the negative value {3}")]
    Negative(usize, usize, usize, i64),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error("unknown catalog ring name {0:?}")]
    UnknownName(String),
}

/// Real symmetric modular S-matrix, unitary to within 1e-9.
#[derive(Debug, Clone)]
pub struct SMatrix {
    n: usize,
    entries: Vec<f64>,
}

const UNITARITY_TOL: f64 = 1e-9;
const INTEGRALITY_TOL: f64 = 1e-6;

impl SMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, CatalogError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(CatalogError::NotSquare(rows.iter().map(|r| r.len()).sum()));
            }
            entries.extend_from_slice(row);
        }
        let s = SMatrix { n, entries };
        for i in 0..n {
            for j in 0..i {
                if (s.get(i, j) - s.get(j, i)).abs() > UNITARITY_TOL {
                    return Err(CatalogError::NotSymmetric(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let mut dot = 0.0;
                for a in 0..n {
                    dot += s.get(i, a) * s.get(j, a);
                }
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot - want).abs() > UNITARITY_TOL {
                    return Err(CatalogError::NotUnitary(i, j, (dot - want).abs()));
                }
            }
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }
}

/// The one-label ring.
pub fn trivial() -> FusionData {
    FusionData::new(vec!["1".into()], vec![0], vec![1]).unwrap()
}

/// Ising-type ring: labels (1, eps, sigma), all self-dual,
/// eps*eps = 1, eps*sigma = sigma, sigma*sigma = 1 + eps.
pub fn ising() -> FusionData {
    let mut t = TensorBuilder::new(3);
    t.sym(1, 1, 0);
    t.sym(1, 2, 2);
    t.sym(2, 2, 0);
    t.sym(2, 2, 1);
    FusionData::new(
        vec!["1".into(), "eps".into(), "sigma".into()],
        vec![0, 1, 2],
        t.finish(),
    )
    .unwrap()
}

/// Lee-Yang-type ring: labels (1, tau) with tau*tau = 1 + tau.
pub fn lee_yang() -> FusionData {
    let mut t = TensorBuilder::new(2);
    t.sym(1, 1, 0);
    t.sym(1, 1, 1);
    FusionData::new(vec!["1".into(), "tau".into()], vec![0, 1], t.finish()).unwrap()
}

/// su(2) level-k ring via the truncated Clebsch-Gordan rule:
/// `N[i][j][l] = 1` iff `|i-j| <= l <= min(i+j, 2k-i-j)` and `i+j+l` is even.
pub fn su2_level(k: u32) -> FusionData {
    let n = k as usize + 1;
    let labels = (0..n).map(|i| i.to_string()).collect();
    let dual = (0..n).collect();
    let mut tensor = vec![0u64; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let lo = i.abs_diff(j);
                let hi = usize::min(i + j, 2 * k as usize - i - j);
                if lo <= l && l <= hi && (i + j + l) % 2 == 0 {
                    tensor[(i * n + j) * n + l] = 1;
                }
            }
        }
    }
    FusionData::new(labels, dual, tensor).unwrap()
}

/// Tensor product of two rings: labels are pairs, multiplicities multiply.
pub fn product(a: &FusionData, b: &FusionData) -> Result<FusionData, CatalogError> {
    let (na, nb) = (a.rank_plus_one(), b.rank_plus_one());
    let n = na * nb;
    let mut labels = Vec::with_capacity(n);
    let mut dual = Vec::with_capacity(n);
    for i in 0..na {
        for p in 0..nb {
            labels.push(format!("{}*{}", a.labels()[i], b.labels()[p]));
            dual.push(a.dual(i) * nb + b.dual(p));
        }
    }
    let mut tensor = vec![0u64; n * n * n];
    let idx = |i: usize, p: usize| i * nb + p;
    for i in 0..na {
        for j in 0..na {
            for k in 0..na {
                let m_a = a.n(i, j, k);
                if m_a == 0 {
                    continue;
                }
                for p in 0..nb {
                    for q in 0..nb {
                        for r in 0..nb {
                            let m = m_a
                                .checked_mul(b.n(p, q, r))
                                .expect("product multiplicity overflow");
                            tensor[(idx(i, p) * n + idx(j, q)) * n + idx(k, r)] = m;
                        }
                    }
                }
            }
        }
    }
    Ok(FusionData::new(labels, dual, tensor)?)
}

/// Classical Verlinde formula: `N[i][j][k] = sum_a S_ia S_ja conj(S_ka) / S_0a`,
/// rounded to the nearest integer with tolerance 1e-6.
///
/// The dagger involution is read off the charge conjugation C = S^2.
pub fn from_smatrix(s: &SMatrix) -> Result<FusionData, CatalogError> {
    from_smatrix_with_tolerance(s, INTEGRALITY_TOL)
}

/// Like [`from_smatrix`] with a caller-chosen integrality tolerance.
pub fn from_smatrix_with_tolerance(s: &SMatrix, tol: f64) -> Result<FusionData, CatalogError> {
    let n = s.dim();
    for a in 0..n {
        if s.get(0, a) <= 0.0 {
            return Err(CatalogError::VacuumRowNotPositive(a, s.get(0, a)));
        }
    }
    // charge conjugation: C = S^2 must be a permutation matrix
    let mut dual = vec![usize::MAX; n];
    for i in 0..n {
        for j in 0..n {
            let mut c = 0.0;
            for a in 0..n {
                c += s.get(i, a) * s.get(a, j);
            }
            if (c - 1.0).abs() < 1e-6 {
                dual[i] = j;
            }
        }
        if dual[i] == usize::MAX {
            return Err(CatalogError::NotUnitary(i, i, 1.0));
        }
    }
    let mut tensor = vec![0u64; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut v = 0.0;
                for a in 0..n {
                    v += s.get(i, a) * s.get(j, a) * s.get(k, a) / s.get(0, a);
                }
                let r = v.round();
                if (v - r).abs() > tol {
                    return Err(CatalogError::NonIntegral {
                        i,
                        j,
                        k,
                        value: v,
                        distance: (v - r).abs(),
                    });
                }
                if r < 0.0 {
                    return Err(CatalogError::Negative(i, j, k, r as i64));
                }
                tensor[(i * n + j) * n + k] = r as u64;
            }
        }
    }
    let labels = (0..n).map(|i| format!("w{}", i)).collect();
    Ok(FusionData::new(labels, dual, tensor)?)
}

/// The closed-form Ising S-matrix `(1/2)[[1,1,s2],[1,1,-s2],[s2,-s2,0]]`.
pub fn ising_smatrix() -> SMatrix {
    let s2 = std::f64::consts::SQRT_2;
    SMatrix::new(vec![
        vec![0.5, 0.5, s2 / 2.0],
        vec![0.5, 0.5, -s2 / 2.0],
        vec![s2 / 2.0, -s2 / 2.0, 0.0],
    ])
    .expect("Ising S-matrix is unitary")
}

/// su(2)_k S-matrix: S_ab = sqrt(2/(k+2)) sin((a+1)(b+1) pi / (k+2)).
pub fn su2_smatrix(k: u32) -> SMatrix {
    let n = k as usize + 1;
    let denom = (k + 2) as f64;
    let norm = (2.0 / denom).sqrt();
    let rows = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    norm * (((a + 1) * (b + 1)) as f64 * std::f64::consts::PI / denom).sin()
                })
                .collect()
        })
        .collect();
    SMatrix::new(rows).expect("su(2)_k S-matrix is unitary")
}

/// The Lee-Yang S-matrix `(2/sqrt 5)[[sin(pi/5), sin(2pi/5)], [sin(2pi/5), -sin(pi/5)]]`,
/// the golden-ratio quantum dimension in row 0.
pub fn lee_yang_smatrix() -> SMatrix {
    let norm = 2.0 / 5.0f64.sqrt();
    let s1 = (std::f64::consts::PI / 5.0).sin();
    let s2 = (2.0 * std::f64::consts::PI / 5.0).sin();
    SMatrix::new(vec![vec![norm * s1, norm * s2], vec![norm * s2, -norm * s1]])
        .expect("Lee-Yang S-matrix is unitary")
}

/// Look up a catalog ring by name: trivial | ising | lee_yang | su2_<k>,
/// or a `*`-joined product of names.
pub fn by_name(name: &str) -> Result<FusionData, CatalogError> {
    if let Some((left, right)) = name.split_once('*') {
        let a = by_name(left)?;
        let b = by_name(right)?;
        return product(&a, &b);
    }
    match name {
        "trivial" => Ok(trivial()),
        "ising" => Ok(ising()),
        "lee_yang" | "lee-yang" => Ok(lee_yang()),
        _ => {
            if let Some(k) = name.strip_prefix("su2_") {
                if let Ok(k) = k.parse::<u32>() {
                    return Ok(su2_level(k));
                }
            }
            Err(CatalogError::UnknownName(name.to_string()))
        }
    }
}

/// Names accepted by [`by_name`], for error messages and the CLI.
pub const CATALOG_NAMES: &str = "trivial, ising, lee_yang, su2_<k>, or products joined with '*'";

/// Helper to fill a 0/1 tensor from nonzero `N[i][j][k]` entries, symmetrizing
/// in (i, j) and installing the vacuum rows.
struct TensorBuilder {
    n: usize,
    tensor: Vec<u64>,
}

impl TensorBuilder {
    fn new(n: usize) -> Self {
        let mut tensor = vec![0u64; n * n * n];
        for j in 0..n {
            tensor[j * n + j] = 1; // N[0][j][j] = 1
            tensor[(j * n) * n + j] = 1; // N[j][0][j] = 1
        }
        TensorBuilder { n, tensor }
    }

    fn sym(&mut self, i: usize, j: usize, k: usize) {
        self.tensor[(i * self.n + j) * self.n + k] = 1;
        self.tensor[(j * self.n + i) * self.n + k] = 1;
    }

    fn finish(self) -> Vec<u64> {
        self.tensor
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_satisfy_axioms() {
        assert!(trivial().verify_axioms().is_empty());
        assert!(ising().verify_axioms().is_empty());
        assert!(lee_yang().verify_axioms().is_empty());
        for k in 0..=6 {
            assert!(su2_level(k).verify_axioms().is_empty(), "su2 level {}", k);
        }
    }

    #[test]
    fn ising_constructor_contract() {
        let ring = ising();
        assert_eq!(ring.labels(), &["1", "eps", "sigma"]);
        assert_eq!(ring.dual_map(), &[0, 1, 2]);
    }

    #[test]
    fn lee_yang_tensor() {
        let ring = lee_yang();
        assert_eq!(ring.n(1, 1, 1), 1);
        assert_eq!(ring.n(0, 1, 1), 1);
        assert_eq!(ring.n(1, 1, 0), 1);
    }

    #[test]
    fn su2_rule_values() {
        let l1 = su2_level(1);
        assert_eq!(l1.n(1, 1, 0), 1);
        assert_eq!(l1.n(1, 1, 1), 0);
        // su2 level 2 is the Ising ring after relabeling (0, 1, 2) -> (1, sigma, eps)
        let l2 = su2_level(2);
        let ising = ising();
        let perm = [0usize, 2, 1]; // su2 label -> ising label
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(l2.n(i, j, k), ising.n(perm[i], perm[j], perm[k]));
                }
            }
        }
        assert_eq!(su2_level(0).rank_plus_one(), 1);
    }

    #[test]
    fn smatrix_oracle_reproduces_ising() {
        let from_s = from_smatrix(&ising_smatrix()).unwrap();
        let direct = ising();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(from_s.n(i, j, k), direct.n(i, j, k));
                }
            }
        }
        // all Ising modules are self-dual by the S^2 charge conjugation
        assert_eq!(from_s.dual_map(), &[0, 1, 2]);
    }

    #[test]
    fn smatrix_oracle_reproduces_su2_and_lee_yang() {
        for k in 1..=6u32 {
            let from_s = from_smatrix(&su2_smatrix(k)).unwrap();
            let direct = su2_level(k);
            let n = direct.rank_plus_one();
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        assert_eq!(from_s.n(i, j, l), direct.n(i, j, l), "su2_{}", k);
                    }
                }
            }
        }
        let ly = from_smatrix(&lee_yang_smatrix()).unwrap();
        let direct = lee_yang();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert_eq!(ly.n(i, j, k), direct.n(i, j, k));
                }
            }
        }
    }

    #[test]
    fn identity_smatrix_gives_trivial_ring() {
        let s = SMatrix::new(vec![vec![1.0]]).unwrap();
        let ring = from_smatrix(&s).unwrap();
        assert_eq!(ring.rank_plus_one(), 1);
        assert_eq!(ring.n(0, 0, 0), 1);
    }

    #[test]
    fn products_pass_axioms() {
        let p = product(&ising(), &ising()).unwrap();
        assert!(p.verify_axioms().is_empty());
        let p = product(&su2_level(2), &lee_yang()).unwrap();
        assert_eq!(p.rank_plus_one(), 6);
        assert!(p.verify_axioms().is_empty());
        // product with the trivial ring is the same ring up to relabeling
        let ring = lee_yang();
        let p = product(&trivial(), &ring).unwrap();
        assert_eq!(p.rank_plus_one(), ring.rank_plus_one());
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert_eq!(p.n(i, j, k), ring.n(i, j, k));
                }
            }
        }
    }

    #[test]
    fn bad_smatrices_rejected() {
        assert!(SMatrix::new(vec![vec![1.0, 0.0], vec![0.0, 0.5]]).is_err());
        // unitary but vacuum row not positive
        let s = SMatrix::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            from_smatrix(&s),
            Err(CatalogError::VacuumRowNotPositive(0, _))
        ));
    }

    #[test]
    fn name_lookup() {
        assert!(by_name("ising").is_ok());
        assert!(by_name("su2_3").is_ok());
        assert!(by_name("ising*lee_yang").is_ok());
        assert!(matches!(by_name("e8"), Err(CatalogError::UnknownName(_))));
    }
}
