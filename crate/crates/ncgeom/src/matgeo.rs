//! The finite-dimensional layer: dense `M_n(C)` arithmetic and a fixed
//! generalized Gell-Mann basis of `sl(n,C)` with its structure constants.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{NcError, Result};

/// Dense n x n complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![c(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let n = rows.len();
        let mut m = Matrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n);
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check_size(&self, other: &Matrix) -> Result<()> {
        if self.n != other.n {
            return Err(NcError::SizeMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_size(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_size(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = -*a;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_size(other)?;
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik.norm() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// `[a, b] = ab - ba`
    pub fn comm(&self, other: &Matrix) -> Result<Matrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = c(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    a[i * n + col].norm().partial_cmp(&a[j * n + col].norm()).unwrap()
                })
                .unwrap();
            if a[pivot * n + col].norm() == 0.0 {
                return c(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for i in col + 1..n {
                let factor = a[i * n + col] / p;
                for j in col..n {
                    let v = a[col * n + j];
                    a[i * n + j] -= factor * v;
                }
            }
        }
        det
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.n == other.n && self.sub(other).unwrap().max_entry() <= tol
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        self.trace().norm() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.adjoint().approx_eq(self, tol)
    }

    pub fn is_antihermitian(&self, tol: f64) -> bool {
        self.adjoint().approx_eq(&self.neg(), tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().mul(self).unwrap().approx_eq(&Matrix::identity(self.n), tol)
    }

    /// Traceless projection `g - (Tr g / n) 1`.
    pub fn theta_project(&self) -> Matrix {
        let shift = self.trace() / c(self.n as f64, 0.0);
        let mut out = self.clone();
        for i in 0..self.n {
            out[(i, i)] -= shift;
        }
        out
    }

    /// Pauli matrices, n = 2 only; `a` in 1..=3.
    pub fn pauli(a: usize) -> Matrix {
        let i = c(0.0, 1.0);
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        match a {
            1 => Matrix::from_rows(&[&[o, l], &[l, o]]),
            2 => Matrix::from_rows(&[&[o, -i], &[i, o]]),
            3 => Matrix::from_rows(&[&[l, o], &[o, -l]]),
            _ => panic!("pauli index must be 1..=3"),
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

// Row-major [re, im] pairs.
impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let flat: Vec<[f64; 2]> = self.data.iter().map(|v| [v.re, v.im]).collect();
        flat.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let flat: Vec<[f64; 2]> = Vec::deserialize(deserializer)?;
        let n = (flat.len() as f64).sqrt().round() as usize;
        if n * n != flat.len() {
            return Err(D::Error::custom("matrix data length is not a perfect square"));
        }
        Ok(Matrix { n, data: flat.into_iter().map(|[re, im]| c(re, im)).collect() })
    }
}

/// The generalized Gell-Mann basis of `sl(n,C)`: hermitian, traceless,
/// `Tr(E_a E_b) = 2 delta_ab`, with precomputed structure constants
/// `[E_a, E_b] = sum_c C^c_ab E_c`.
#[derive(Clone, Debug)]
pub struct SlBasis {
    n: usize,
    elems: Vec<Matrix>,
    /// `structure[a][b][c] = C^c_ab`
    structure: Vec<Vec<Vec<Complex64>>>,
    gram: Vec<Vec<Complex64>>,
    gram_inv: Vec<Vec<Complex64>>,
}

fn invert_complex(m: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let n = m.len();
    let mut a: Vec<Vec<Complex64>> = m.to_vec();
    let mut inv: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap()
        })?;
        if a[pivot][col].norm() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[i][col];
            for j in 0..n {
                let (av, iv) = (a[col][j], inv[col][j]);
                a[i][j] -= f * av;
                inv[i][j] -= f * iv;
            }
        }
    }
    Some(inv)
}

impl SlBasis {
    /// Build the basis for `M_n(C)`, `n >= 2`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(NcError::SizeTooSmall(n));
        }
        let mut elems = Vec::with_capacity(n * n - 1);
        for l in 1..n {
            for j in 0..l {
                // symmetric pair
                let mut sym = Matrix::zeros(n);
                sym[(j, l)] = c(1.0, 0.0);
                sym[(l, j)] = c(1.0, 0.0);
                elems.push(sym);
                // antisymmetric pair
                let mut asym = Matrix::zeros(n);
                asym[(j, l)] = c(0.0, -1.0);
                asym[(l, j)] = c(0.0, 1.0);
                elems.push(asym);
            }
            // diagonal element with l leading ones and -l at position l
            let norm = (2.0 / (l as f64 * (l + 1) as f64)).sqrt();
            let mut diag = Matrix::zeros(n);
            for i in 0..l {
                diag[(i, i)] = c(norm, 0.0);
            }
            diag[(l, l)] = c(-(l as f64) * norm, 0.0);
            elems.push(diag);
        }
        debug_assert_eq!(elems.len(), n * n - 1);

        let m = elems.len();
        let mut gram = vec![vec![c(0.0, 0.0); m]; m];
        for a in 0..m {
            for b in 0..m {
                gram[a][b] = elems[a].adjoint().mul(&elems[b])?.trace();
            }
        }
        let gram_inv = invert_complex(&gram)
            .ok_or_else(|| NcError::InvalidInput("singular Gram matrix".into()))?;

        let mut basis = SlBasis { n, elems, structure: Vec::new(), gram, gram_inv };
        let mut structure = vec![vec![vec![c(0.0, 0.0); m]; m]; m];
        for a in 0..m {
            for b in 0..m {
                let comm = basis.elems[a].comm(&basis.elems[b])?;
                let coeffs = basis.decompose_traceless(&comm)?;
                structure[a][b] = coeffs;
            }
        }
        basis.structure = structure;
        Ok(basis)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of basis elements, `n^2 - 1`.
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elem(&self, a: usize) -> &Matrix {
        &self.elems[a]
    }

    pub fn elems(&self) -> &[Matrix] {
        &self.elems
    }

    /// `C^c_ab` with `[E_a, E_b] = sum_c C^c_ab E_c`.
    pub fn structure_const(&self, a: usize, b: usize, cc: usize) -> Complex64 {
        self.structure[a][b][cc]
    }

    pub fn gram(&self, a: usize, b: usize) -> Complex64 {
        self.gram[a][b]
    }

    pub fn gram_inv(&self, a: usize, b: usize) -> Complex64 {
        self.gram_inv[a][b]
    }

    /// Coefficients of a traceless matrix in the basis, via the Gram matrix.
    pub fn decompose_traceless(&self, g: &Matrix) -> Result<Vec<Complex64>> {
        if g.n() != self.n {
            return Err(NcError::SizeMismatch(g.n(), self.n));
        }
        let tr = g.trace().norm();
        if tr > 1e-12 {
            return Err(NcError::NotTraceless(tr));
        }
        let m = self.elems.len();
        let mut v = vec![c(0.0, 0.0); m];
        for a in 0..m {
            v[a] = self.elems[a].adjoint().mul(g)?.trace();
        }
        let mut coeffs = vec![c(0.0, 0.0); m];
        for a in 0..m {
            for b in 0..m {
                coeffs[a] += self.gram_inv[a][b] * v[b];
            }
        }
        Ok(coeffs)
    }

    /// `sum_a coeffs[a] E_a`
    pub fn reconstruct(&self, coeffs: &[Complex64]) -> Matrix {
        let mut out = Matrix::zeros(self.n);
        for (a, &ca) in coeffs.iter().enumerate() {
            out = out.add(&self.elems[a].scale(ca)).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n2_basis_is_pauli() {
        let basis = SlBasis::new(2).unwrap();
        assert_eq!(basis.len(), 3);
        for a in 0..3 {
            assert!(basis.elem(a).approx_eq(&Matrix::pauli(a + 1), 1e-15));
        }
        for a in 0..3 {
            for b in 0..3 {
                let tr = basis.elem(a).mul(basis.elem(b)).unwrap().trace();
                let expect = if a == b { c(2.0, 0.0) } else { c(0.0, 0.0) };
                assert!((tr - expect).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn pauli_structure_constant() {
        // [s1, s2] = 2i s3
        let basis = SlBasis::new(2).unwrap();
        let comm = Matrix::pauli(1).comm(&Matrix::pauli(2)).unwrap();
        assert!(comm.approx_eq(&Matrix::pauli(3).scale(c(0.0, 2.0)), 1e-13));
        assert!((basis.structure_const(0, 1, 2) - c(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn basis_counts_and_invariants() {
        for n in 2..=4 {
            let basis = SlBasis::new(n).unwrap();
            assert_eq!(basis.len(), n * n - 1);
            for a in 0..basis.len() {
                let e = basis.elem(a);
                assert!(e.is_traceless(1e-12));
                assert!(e.is_hermitian(1e-13));
                for b in 0..basis.len() {
                    let expect = if a == b { c(2.0, 0.0) } else { c(0.0, 0.0) };
                    assert!((basis.gram(a, b) - expect).norm() < 1e-12);
                }
            }
            // commutators reproduced by structure constants
            for a in 0..basis.len() {
                for b in 0..basis.len() {
                    let comm = basis.elem(a).comm(basis.elem(b)).unwrap();
                    let coeffs: Vec<Complex64> =
                        (0..basis.len()).map(|cc| basis.structure_const(a, b, cc)).collect();
                    assert!(comm.approx_eq(&basis.reconstruct(&coeffs), 1e-12));
                    // antisymmetry
                    for cc in 0..basis.len() {
                        assert!(
                            (basis.structure_const(a, b, cc) + basis.structure_const(b, a, cc))
                                .norm()
                                < 1e-12
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_identity() {
        for n in 2..=3 {
            let basis = SlBasis::new(n).unwrap();
            let m = basis.len();
            for a in 0..m {
                for b in 0..m {
                    for cc in 0..m {
                        for f in 0..m {
                            let mut acc = c(0.0, 0.0);
                            for e in 0..m {
                                acc += basis.structure_const(a, b, e) * basis.structure_const(e, cc, f);
                                acc += basis.structure_const(b, cc, e) * basis.structure_const(e, a, f);
                                acc += basis.structure_const(cc, a, e) * basis.structure_const(e, b, f);
                            }
                            assert!(acc.norm() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn theta_project_examples() {
        assert!(Matrix::identity(2).theta_project().approx_eq(&Matrix::zeros(2), 0.0));
        let s3 = Matrix::pauli(3);
        assert!(s3.theta_project().approx_eq(&s3, 0.0));
        let g = Matrix::from_rows(&[&[c(2.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!(g.theta_project().approx_eq(&s3, 1e-15));
        // idempotent, kills span of identity
        let r = Matrix::from_rows(&[&[c(1.0, 2.0), c(0.5, 0.0)], &[c(0.0, -1.0), c(3.0, 0.0)]]);
        assert!(r.theta_project().theta_project().approx_eq(&r.theta_project(), 1e-14));
    }

    #[test]
    fn decompose_examples() {
        let basis = SlBasis::new(2).unwrap();
        let coeffs = basis.decompose_traceless(basis.elem(0)).unwrap();
        assert!((coeffs[0] - c(1.0, 0.0)).norm() < 1e-13);
        assert!(coeffs[1].norm() < 1e-13 && coeffs[2].norm() < 1e-13);

        let zero = basis.decompose_traceless(&Matrix::zeros(2)).unwrap();
        assert!(zero.iter().all(|v| v.norm() < 1e-14));

        let g = Matrix::pauli(1).add(&Matrix::pauli(3).scale(c(2.0, 0.0))).unwrap();
        let coeffs = basis.decompose_traceless(&g).unwrap();
        assert!((coeffs[0] - c(1.0, 0.0)).norm() < 1e-13);
        assert!(coeffs[1].norm() < 1e-13);
        assert!((coeffs[2] - c(2.0, 0.0)).norm() < 1e-13);
        assert!(basis.reconstruct(&coeffs).approx_eq(&g, 1e-13));
    }

    #[test]
    fn decompose_rejects_trace() {
        let basis = SlBasis::new(2).unwrap();
        assert!(matches!(
            basis.decompose_traceless(&Matrix::identity(2)),
            Err(NcError::NotTraceless(_))
        ));
    }

    #[test]
    fn mat_ops_examples() {
        assert!((Matrix::identity(3).det() - c(1.0, 0.0)).norm() < 1e-14);
        assert!(Matrix::pauli(3).trace().norm() < 1e-15);
        let m = Matrix::from_rows(&[&[c(1.0, 0.0), c(2.0, 0.0)], &[c(3.0, 0.0), c(4.0, 0.0)]]);
        assert!((m.det() - c(-2.0, 0.0)).norm() < 1e-13);
        assert!(matches!(
            Matrix::identity(2).mul(&Matrix::identity(3)),
            Err(NcError::SizeMismatch(2, 3))
        ));
    }

    #[test]
    fn small_n_rejected() {
        assert!(matches!(SlBasis::new(1), Err(NcError::SizeTooSmall(1))));
    }
}
