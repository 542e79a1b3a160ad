//! Elements of the algebra `A = C^inf(T^d) (x) M_n(C)`: n x n matrices of
//! trigonometric polynomials.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{NcError, Result};
use crate::fourier::TrigPoly;
use crate::matgeo::{Matrix, SlBasis};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Element of `A`: an n x n matrix with `TrigPoly` entries, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgElement {
    n: usize,
    d: usize,
    entries: Vec<TrigPoly>,
}

impl AlgElement {
    pub fn zeros(n: usize, d: usize) -> Self {
        AlgElement { n, d, entries: vec![TrigPoly::zero(d); n * n] }
    }

    pub fn identity(n: usize, d: usize) -> Self {
        let mut s = AlgElement::zeros(n, d);
        for i in 0..n {
            s.entries[i * n + i] = TrigPoly::one(d);
        }
        s
    }

    /// Embed a constant matrix.
    pub fn from_matrix(d: usize, m: &Matrix) -> Self {
        let n = m.n();
        let mut s = AlgElement::zeros(n, d);
        for i in 0..n {
            for j in 0..n {
                s.entries[i * n + j] = TrigPoly::constant(d, m[(i, j)]);
            }
        }
        s
    }

    /// `f . 1`, the central embedding of the coefficient ring.
    pub fn central(n: usize, f: &TrigPoly) -> Self {
        let mut s = AlgElement::zeros(n, f.dim());
        for i in 0..n {
            s.entries[i * n + i] = f.clone();
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> &TrigPoly {
        &self.entries[i * self.n + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, f: TrigPoly) {
        assert_eq!(f.dim(), self.d);
        self.entries[i * self.n + j] = f;
    }

    fn check_shape(&self, other: &AlgElement) -> Result<()> {
        if self.n != other.n {
            return Err(NcError::SizeMismatch(self.n, other.n));
        }
        if self.d != other.d {
            return Err(NcError::DimMismatch(self.d, other.d));
        }
        Ok(())
    }

    pub fn add(&self, other: &AlgElement) -> Result<AlgElement> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = a.add(b)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &AlgElement) -> Result<AlgElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AlgElement {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.neg();
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> AlgElement {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.scale(s);
        }
        out
    }

    /// Multiply by a central coefficient.
    pub fn scale_fn(&self, f: &TrigPoly) -> Result<AlgElement> {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.mul(f)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &AlgElement) -> Result<AlgElement> {
        self.check_shape(other)?;
        let n = self.n;
        let mut out = AlgElement::zeros(n, self.d);
        for i in 0..n {
            for k in 0..n {
                let aik = self.entry(i, k);
                if aik.num_terms() == 0 {
                    continue;
                }
                for j in 0..n {
                    let prod = aik.mul(other.entry(k, j))?;
                    out.entries[i * n + j] = out.entries[i * n + j].add(&prod)?;
                }
            }
        }
        Ok(out)
    }

    pub fn comm(&self, other: &AlgElement) -> Result<AlgElement> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// The involution `S -> S*`: conjugate transpose with `TrigPoly` conjugation.
    pub fn star(&self) -> AlgElement {
        let n = self.n;
        let mut out = AlgElement::zeros(n, self.d);
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] = self.entry(j, i).conj();
            }
        }
        out
    }

    pub fn trace(&self) -> TrigPoly {
        let mut tr = TrigPoly::zero(self.d);
        for i in 0..self.n {
            tr = tr.add(self.entry(i, i)).unwrap();
        }
        tr
    }

    /// Determinant over the commutative coefficient ring, by cofactor
    /// expansion on index sets.
    pub fn det(&self) -> Result<TrigPoly> {
        let n = self.n;
        let rows: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (0..n).collect();
        self.minor_det(&rows, &cols)
    }

    fn minor_det(&self, rows: &[usize], cols: &[usize]) -> Result<TrigPoly> {
        debug_assert_eq!(rows.len(), cols.len());
        if rows.is_empty() {
            return Ok(TrigPoly::one(self.d));
        }
        let mut acc = TrigPoly::zero(self.d);
        let r = rows[0];
        let rest_rows = &rows[1..];
        for (pos, &cj) in cols.iter().enumerate() {
            let e = self.entry(r, cj);
            if e.num_terms() == 0 {
                continue;
            }
            let rest_cols: Vec<usize> =
                cols.iter().copied().filter(|&x| x != cj).collect();
            let sub = self.minor_det(rest_rows, &rest_cols)?;
            let mut term = e.mul(&sub)?;
            if pos % 2 == 1 {
                term = term.neg();
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Adjugate matrix; `self * adjugate = det . 1`.  Used to invert
    /// unimodular elements exactly.
    pub fn adjugate(&self) -> Result<AlgElement> {
        let n = self.n;
        let mut out = AlgElement::zeros(n, self.d);
        let all: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = all.iter().copied().filter(|&x| x != j).collect();
                let cols: Vec<usize> = all.iter().copied().filter(|&x| x != i).collect();
                let mut m = self.minor_det(&rows, &cols)?;
                if (i + j) % 2 == 1 {
                    m = m.neg();
                }
                out.entries[i * n + j] = m;
            }
        }
        Ok(out)
    }

    /// Exact inverse for elements with `det = 1`.
    pub fn unimodular_inverse(&self) -> Result<AlgElement> {
        let det = self.det()?;
        let dev = det.sub(&TrigPoly::one(self.d))?.max_coeff();
        if dev > 1e-10 {
            return Err(NcError::NotSpecial(dev));
        }
        self.adjugate()
    }

    pub fn partial(&self, mu: usize) -> Result<AlgElement> {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.partial(mu)?;
        }
        Ok(out)
    }

    pub fn eval(&self, x: &[f64]) -> Matrix {
        let n = self.n;
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.entry(i, j).eval(x);
            }
        }
        m
    }

    /// Largest Fourier coefficient modulus over all entries.
    pub fn max_coeff(&self) -> f64 {
        self.entries.iter().map(|f| f.max_coeff()).fold(0.0, f64::max)
    }

    /// Sup of entry moduli over a uniform grid with `m` points per axis.
    pub fn sup_norm_grid(&self, m: usize) -> f64 {
        let total = m.pow(self.d as u32);
        let mut sup: f64 = 0.0;
        for idx in 0..total {
            let mut x = vec![0.0; self.d];
            let mut rem = idx;
            for xi in x.iter_mut() {
                *xi = 2.0 * std::f64::consts::PI * (rem % m) as f64 / m as f64;
                rem /= m;
            }
            sup = sup.max(self.eval(&x).max_entry());
        }
        sup
    }

    pub fn approx_eq(&self, other: &AlgElement, tol: f64) -> bool {
        match self.sub(other) {
            Ok(diff) => diff.max_coeff() <= tol,
            Err(_) => false,
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_coeff() <= tol
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        self.trace().max_coeff() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.star().approx_eq(self, tol)
    }

    pub fn is_antihermitian(&self, tol: f64) -> bool {
        self.star().approx_eq(&self.neg(), tol)
    }

    /// Central iff a `TrigPoly` multiple of the identity.
    pub fn is_central(&self, tol: f64) -> bool {
        let f = self.entry(0, 0).clone();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    if !self.entry(i, j).approx_eq(&f, tol) {
                        return false;
                    }
                } else if !self.entry(i, j).is_zero(tol) {
                    return false;
                }
            }
        }
        true
    }

    /// `U* U = 1` within `tol`.
    pub fn is_unitary(&self, tol: f64) -> Result<f64> {
        let dev = self
            .star()
            .mul(self)?
            .sub(&AlgElement::identity(self.n, self.d))?
            .max_coeff();
        if dev > tol {
            return Err(NcError::NotUnitary(dev));
        }
        Ok(dev)
    }

    /// Traceless projection `S - (Tr S / n) 1`.
    pub fn theta_project(&self) -> AlgElement {
        let shift = self.trace().scale(c(1.0 / self.n as f64, 0.0));
        let mut out = self.clone();
        for i in 0..self.n {
            let e = out.entry(i, i).sub(&shift).unwrap();
            out.set_entry(i, i, e);
        }
        out
    }

    /// `[M, S]` for a constant matrix `M`.
    pub fn comm_matrix_left(&self, m: &Matrix) -> Result<AlgElement> {
        let me = AlgElement::from_matrix(self.d, m);
        me.comm(self)
    }

    /// Coefficients of a traceless element in an `sl(n)` basis, with
    /// `TrigPoly` values (the `C^inf(M)`-module decomposition).
    pub fn basis_coeffs(&self, basis: &SlBasis) -> Result<Vec<TrigPoly>> {
        if basis.n() != self.n {
            return Err(NcError::SizeMismatch(basis.n(), self.n));
        }
        let m = basis.len();
        let mut v = vec![TrigPoly::zero(self.d); m];
        for (a, va) in v.iter_mut().enumerate() {
            // Tr(E_a^dag S) with E_a hermitian constant
            let ea = basis.elem(a);
            for i in 0..self.n {
                for j in 0..self.n {
                    let w = ea[(i, j)].conj();
                    if w.norm() == 0.0 {
                        continue;
                    }
                    *va = va.add(&self.entry(i, j).scale(w))?;
                }
            }
        }
        let mut coeffs = vec![TrigPoly::zero(self.d); m];
        for a in 0..m {
            for b in 0..m {
                let g = basis.gram_inv(a, b);
                if g.norm() == 0.0 {
                    continue;
                }
                coeffs[a] = coeffs[a].add(&v[b].scale(g))?;
            }
        }
        Ok(coeffs)
    }

    /// `sum_a coeffs[a] E_a`
    pub fn from_basis_coeffs(d: usize, basis: &SlBasis, coeffs: &[TrigPoly]) -> Result<AlgElement> {
        let n = basis.n();
        let mut out = AlgElement::zeros(n, d);
        for (a, f) in coeffs.iter().enumerate() {
            let e = AlgElement::from_matrix(d, basis.elem(a)).scale_fn(f)?;
            out = out.add(&e)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e_ix(d: usize, axis: usize) -> TrigPoly {
        let mut k = vec![0i64; d];
        k[axis] = 1;
        TrigPoly::monomial(d, &k, c(1.0, 0.0))
    }

    #[test]
    fn trace_of_identity() {
        let s = AlgElement::identity(3, 1);
        assert!(s.trace().approx_eq(&TrigPoly::constant(1, c(3.0, 0.0)), 0.0));
    }

    #[test]
    fn star_involution() {
        let mut s = AlgElement::from_matrix(1, &Matrix::pauli(2));
        s.set_entry(0, 1, e_ix(1, 0));
        assert!(s.star().star().approx_eq(&s, 0.0));
    }

    #[test]
    fn det_of_unimodular_diagonal() {
        // det(diag(e^{ix}, e^{-ix})) = 1
        let mut s = AlgElement::zeros(2, 1);
        s.set_entry(0, 0, e_ix(1, 0));
        s.set_entry(1, 1, e_ix(1, 0).conj());
        let det = s.det().unwrap();
        assert!(det.approx_eq(&TrigPoly::one(1), 1e-14));
        // cofactor oracle: compare against pointwise numerical determinant
        for i in 0..8 {
            let x = [2.0 * std::f64::consts::PI * i as f64 / 8.0];
            assert!((det.eval(&x) - s.eval(&x).det()).norm() < 1e-12);
        }
    }

    #[test]
    fn adjugate_inverts_unimodular() {
        // g = cos(x) 1 + i sin(x) s3 has det 1
        let mut g = AlgElement::central(2, &TrigPoly::cos(1, &[1]));
        let im_sin = AlgElement::from_matrix(1, &Matrix::pauli(3))
            .scale_fn(&TrigPoly::sin(1, &[1]))
            .unwrap()
            .scale(c(0.0, 1.0));
        g = g.add(&im_sin).unwrap();
        let ginv = g.unimodular_inverse().unwrap();
        assert!(g.mul(&ginv).unwrap().approx_eq(&AlgElement::identity(2, 1), 1e-13));
        assert!(g.is_unitary(1e-12).is_ok());
    }

    #[test]
    fn predicates() {
        let s = AlgElement::central(2, &TrigPoly::cos(1, &[1]));
        assert!(s.is_central(0.0));
        assert!(s.is_hermitian(0.0));
        assert!(!s.is_traceless(1e-12));
        let t = AlgElement::from_matrix(1, &Matrix::pauli(3)).scale(c(0.0, 1.0));
        assert!(t.is_antihermitian(0.0));
        assert!(t.is_traceless(0.0));
    }

    #[test]
    fn basis_coeff_round_trip() {
        let basis = SlBasis::new(2).unwrap();
        let mut gamma = AlgElement::from_matrix(1, &Matrix::pauli(1))
            .scale_fn(&TrigPoly::cos(1, &[1]))
            .unwrap();
        gamma = gamma
            .add(&AlgElement::from_matrix(1, &Matrix::pauli(3)).scale_fn(&e_ix(1, 0)).unwrap())
            .unwrap();
        let coeffs = gamma.basis_coeffs(&basis).unwrap();
        assert!(coeffs[0].approx_eq(&TrigPoly::cos(1, &[1]), 1e-13));
        assert!(coeffs[1].is_zero(1e-13));
        assert!(coeffs[2].approx_eq(&e_ix(1, 0), 1e-13));
        let back = AlgElement::from_basis_coeffs(1, &basis, &coeffs).unwrap();
        assert!(back.approx_eq(&gamma, 1e-13));
    }

    #[test]
    fn json_round_trip() {
        let mut s = AlgElement::identity(2, 1);
        s.set_entry(0, 1, TrigPoly::sin(1, &[2]));
        let text = serde_json::to_string(&s).unwrap();
        let back: AlgElement = serde_json::from_str(&text).unwrap();
        assert!(back.approx_eq(&s, 0.0));
    }
}
