//! Derivations of `A`, in the canonical split: a vector-field part on the
//! torus plus an inner part `ad_gamma` with `gamma` traceless.

use crate::error::{NcError, Result};
use crate::fourier::TrigPoly;
use crate::matgeo::Matrix;

use super::algebra::AlgElement;

/// `X = sum_mu f^mu d_mu + ad_gamma`
#[derive(Clone, Debug)]
pub struct Derivation {
    vector: Vec<TrigPoly>,
    inner: AlgElement,
}

impl Derivation {
    /// `gamma` must be traceless; callers project first if needed.
    pub fn new(vector: Vec<TrigPoly>, inner: AlgElement) -> Result<Self> {
        let d = inner.d();
        if vector.len() != d {
            return Err(NcError::DimMismatch(vector.len(), d));
        }
        for f in &vector {
            if f.dim() != d {
                return Err(NcError::DimMismatch(f.dim(), d));
            }
        }
        let tr = inner.trace().max_coeff();
        if tr > 1e-12 {
            return Err(NcError::NotTraceless(tr));
        }
        Ok(Derivation { vector, inner })
    }

    pub fn zero(n: usize, d: usize) -> Self {
        Derivation { vector: vec![TrigPoly::zero(d); d], inner: AlgElement::zeros(n, d) }
    }

    /// The coordinate field `d_mu`.
    pub fn coordinate(n: usize, d: usize, mu: usize) -> Result<Self> {
        if mu >= d {
            return Err(NcError::AxisOutOfRange { axis: mu, dim: d });
        }
        let mut vector = vec![TrigPoly::zero(d); d];
        vector[mu] = TrigPoly::one(d);
        Ok(Derivation { vector, inner: AlgElement::zeros(n, d) })
    }

    /// `ad_gamma` for traceless `gamma`.
    pub fn inner(gamma: AlgElement) -> Result<Self> {
        let d = gamma.d();
        Derivation::new(vec![TrigPoly::zero(d); d], gamma)
    }

    /// `ad` of a constant traceless matrix.
    pub fn inner_const(d: usize, m: &Matrix) -> Result<Self> {
        Derivation::inner(AlgElement::from_matrix(d, m))
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn d(&self) -> usize {
        self.inner.d()
    }

    /// The anchor image: restriction to the center, an ordinary vector field.
    pub fn anchor(&self) -> &[TrigPoly] {
        &self.vector
    }

    pub fn vector_comp(&self, mu: usize) -> &TrigPoly {
        &self.vector[mu]
    }

    pub fn inner_part(&self) -> &AlgElement {
        &self.inner
    }

    fn check_shape(&self, other: &Derivation) -> Result<()> {
        if self.n() != other.n() {
            return Err(NcError::SizeMismatch(self.n(), other.n()));
        }
        if self.d() != other.d() {
            return Err(NcError::DimMismatch(self.d(), other.d()));
        }
        Ok(())
    }

    /// Apply to an algebra element: `sum f^mu d_mu S + [gamma, S]`.
    pub fn apply(&self, s: &AlgElement) -> Result<AlgElement> {
        if s.n() != self.n() || s.d() != self.d() {
            return Err(NcError::SizeMismatch(s.n(), self.n()));
        }
        let mut out = self.inner.comm(s)?;
        for (mu, f) in self.vector.iter().enumerate() {
            if f.num_terms() == 0 {
                continue;
            }
            out = out.add(&s.partial(mu)?.scale_fn(f)?)?;
        }
        Ok(out)
    }

    /// Apply the vector-field part to a scalar.
    pub fn apply_fn(&self, f: &TrigPoly) -> Result<TrigPoly> {
        let mut out = TrigPoly::zero(self.d());
        for (mu, comp) in self.vector.iter().enumerate() {
            if comp.num_terms() == 0 {
                continue;
            }
            out = out.add(&f.partial(mu)?.mul(comp)?)?;
        }
        Ok(out)
    }

    /// Apply the vector-field part entrywise to an algebra element.
    pub fn apply_vector(&self, s: &AlgElement) -> Result<AlgElement> {
        let mut out = AlgElement::zeros(s.n(), s.d());
        for (mu, comp) in self.vector.iter().enumerate() {
            if comp.num_terms() == 0 {
                continue;
            }
            out = out.add(&s.partial(mu)?.scale_fn(comp)?)?;
        }
        Ok(out)
    }

    /// Lie bracket: vector part `[X, Y]`, inner part `X(eta) - Y(gamma) + [gamma, eta]`.
    pub fn bracket(&self, other: &Derivation) -> Result<Derivation> {
        self.check_shape(other)?;
        let d = self.d();
        let mut vector = Vec::with_capacity(d);
        for mu in 0..d {
            let mut comp = TrigPoly::zero(d);
            for nu in 0..d {
                let a = self.vector[nu].mul(&other.vector[mu].partial(nu)?)?;
                let b = other.vector[nu].mul(&self.vector[mu].partial(nu)?)?;
                comp = comp.add(&a.sub(&b)?)?;
            }
            vector.push(comp);
        }
        let inner = self
            .apply_vector(&other.inner)?
            .sub(&other.apply_vector(&self.inner)?)?
            .add(&self.inner.comm(&other.inner)?)?;
        Derivation::new(vector, inner)
    }

    /// Module structure: multiply by a central coefficient.
    pub fn scale_fn(&self, f: &TrigPoly) -> Result<Derivation> {
        let vector = self
            .vector
            .iter()
            .map(|v| v.mul(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation { vector, inner: self.inner.scale_fn(f)? })
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation> {
        self.check_shape(other)?;
        let vector = self
            .vector
            .iter()
            .zip(&other.vector)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation { vector, inner: self.inner.add(&other.inner)? })
    }

    /// Real iff `(X S)* = X (S*)`: real vector components, antihermitian inner part.
    pub fn is_real(&self, tol: f64) -> bool {
        self.vector.iter().all(|f| f.is_real(tol)) && self.inner.is_antihermitian(tol)
    }
}
