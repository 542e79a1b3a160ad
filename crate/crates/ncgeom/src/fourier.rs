//! Exact arithmetic in the coefficient ring `C^inf(T^d)`, truncated to
//! trigonometric polynomials.
//!
//! Every element is a finite Fourier sum `f(x) = sum_k c_k e^{i k.x}` with
//! `k` an integer frequency vector.  Products convolve frequency maps,
//! derivatives multiply by `i k_mu`, so all differential identities hold to
//! machine precision.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{NcError, Result};

/// Coefficients with modulus below this are dropped after arithmetic.
pub const DROP_TOL: f64 = 1e-14;

/// Maximum supported torus dimension (frequency keys are bit-packed).
pub const MAX_DIM: usize = 8;

const FREQ_OFFSET: i64 = 1 << 15;
const FREQ_LIMIT: i64 = (1 << 15) - 1;

/// A frequency vector packed into 16 bits per axis, axis 0 most significant.
/// The packing is order-preserving per axis, so `BTreeMap` iteration is
/// deterministic lexicographic order.
type FreqKey = u128;

fn pack(k: &[i64]) -> FreqKey {
    debug_assert!(k.len() <= MAX_DIM);
    let mut key: u128 = 0;
    for &ki in k {
        debug_assert!(ki.abs() <= FREQ_LIMIT, "frequency {ki} out of range");
        key = (key << 16) | ((ki + FREQ_OFFSET) as u128 & 0xffff);
    }
    key
}

fn unpack(key: FreqKey, dim: usize) -> Vec<i64> {
    let mut k = vec![0i64; dim];
    let mut key = key;
    for i in (0..dim).rev() {
        k[i] = ((key & 0xffff) as i64) - FREQ_OFFSET;
        key >>= 16;
    }
    k
}

fn pack_neg(key: FreqKey, dim: usize) -> FreqKey {
    // negate every axis of a packed key
    let mut out: u128 = 0;
    let mut key = key;
    let mut limbs = [0u128; MAX_DIM];
    for limb in limbs.iter_mut().take(dim) {
        *limb = key & 0xffff;
        key >>= 16;
    }
    for i in (0..dim).rev() {
        let v = limbs[i] as i64 - FREQ_OFFSET;
        out = (out << 16) | ((-v + FREQ_OFFSET) as u128 & 0xffff);
    }
    out
}

fn pack_add(a: FreqKey, b: FreqKey, dim: usize) -> FreqKey {
    let mut out: u128 = 0;
    let mut a = a;
    let mut b = b;
    let mut limbs = [0u128; MAX_DIM];
    for limb in limbs.iter_mut().take(dim) {
        let va = (a & 0xffff) as i64 - FREQ_OFFSET;
        let vb = (b & 0xffff) as i64 - FREQ_OFFSET;
        *limb = ((va + vb + FREQ_OFFSET) as u128) & 0xffff;
        a >>= 16;
        b >>= 16;
    }
    for i in (0..dim).rev() {
        out = (out << 16) | limbs[i];
    }
    out
}

/// Element of the center: a finite trigonometric polynomial on `T^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    dim: usize,
    terms: BTreeMap<FreqKey, Complex64>,
}

impl TrigPoly {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1 && dim <= MAX_DIM, "torus dimension must be in 1..={MAX_DIM}");
        TrigPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        let mut f = TrigPoly::zero(dim);
        f.add_term(&vec![0; dim], c);
        f
    }

    pub fn one(dim: usize) -> Self {
        TrigPoly::constant(dim, Complex64::new(1.0, 0.0))
    }

    /// `c e^{i k.x}`
    pub fn monomial(dim: usize, k: &[i64], c: Complex64) -> Self {
        assert_eq!(k.len(), dim);
        let mut f = TrigPoly::zero(dim);
        f.add_term(k, c);
        f
    }

    /// `cos(k.x)`
    pub fn cos(dim: usize, k: &[i64]) -> Self {
        let half = Complex64::new(0.5, 0.0);
        let neg: Vec<i64> = k.iter().map(|ki| -ki).collect();
        let mut f = TrigPoly::zero(dim);
        f.add_term(k, half);
        f.add_term(&neg, half);
        f
    }

    /// `sin(k.x)`
    pub fn sin(dim: usize, k: &[i64]) -> Self {
        let c = Complex64::new(0.0, -0.5);
        let neg: Vec<i64> = k.iter().map(|ki| -ki).collect();
        let mut f = TrigPoly::zero(dim);
        f.add_term(k, c);
        f.add_term(&neg, -c);
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Accumulate a coefficient onto frequency `k`, dropping small results.
    pub fn add_term(&mut self, k: &[i64], c: Complex64) {
        assert_eq!(k.len(), self.dim);
        let key = pack(k);
        let entry = self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() < DROP_TOL {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        assert_eq!(k.len(), self.dim);
        self.terms.get(&pack(k)).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Iterate `(frequency, coefficient)` pairs in deterministic order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (Vec<i64>, Complex64)> + '_ {
        self.terms.iter().map(|(&key, &c)| (unpack(key, self.dim), c))
    }

    fn check_dim(&self, other: &TrigPoly) -> Result<()> {
        if self.dim != other.dim {
            return Err(NcError::DimMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= DROP_TOL);
    }

    pub fn add(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (&key, &c) in &other.terms {
            let entry = out.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
            *entry += c;
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TrigPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -*c;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> TrigPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out.prune();
        out
    }

    /// Pointwise product: convolution of the frequency maps.
    pub fn mul(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.check_dim(other)?;
        let mut out = TrigPoly::zero(self.dim);
        for (&ka, &ca) in &self.terms {
            for (&kb, &cb) in &other.terms {
                let key = pack_add(ka, kb, self.dim);
                let entry = out.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
                *entry += ca * cb;
            }
        }
        out.prune();
        Ok(out)
    }

    /// Complex conjugate of the function: `c_k -> conj(c_{-k})`.
    pub fn conj(&self) -> TrigPoly {
        let mut out = TrigPoly::zero(self.dim);
        for (&key, &c) in &self.terms {
            out.terms.insert(pack_neg(key, self.dim), c.conj());
        }
        out
    }

    /// Exact partial derivative along `mu`: `c_k -> i k_mu c_k`.
    pub fn partial(&self, mu: usize) -> Result<TrigPoly> {
        if mu >= self.dim {
            return Err(NcError::AxisOutOfRange { axis: mu, dim: self.dim });
        }
        let mut out = TrigPoly::zero(self.dim);
        for (&key, &c) in &self.terms {
            let k = unpack(key, self.dim);
            let factor = Complex64::new(0.0, k[mu] as f64);
            let v = c * factor;
            if v.norm() >= DROP_TOL {
                out.terms.insert(key, v);
            }
        }
        Ok(out)
    }

    /// Normalized Haar integral `(2 pi)^{-d} int f`: the zero-mode coefficient.
    pub fn integrate(&self) -> Complex64 {
        self.terms
            .get(&pack(&vec![0; self.dim]))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for (&key, &c) in &self.terms {
            let k = unpack(key, self.dim);
            let phase: f64 = k.iter().zip(x).map(|(&ki, &xi)| ki as f64 * xi).sum();
            acc += c * Complex64::new(0.0, phase).exp();
        }
        acc
    }

    /// Largest coefficient modulus (zero for the zero polynomial).
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_coeff() <= tol
    }

    /// Real-valued iff `c_{-k} = conj(c_k)` for all stored `k`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.terms.iter().all(|(&key, &c)| {
            let other = self
                .terms
                .get(&pack_neg(key, self.dim))
                .copied()
                .unwrap_or(Complex64::new(0.0, 0.0));
            (other - c.conj()).norm() <= tol
        })
    }

    pub fn approx_eq(&self, other: &TrigPoly, tol: f64) -> bool {
        match self.sub(other) {
            Ok(diff) => diff.is_zero(tol),
            Err(_) => false,
        }
    }

    /// Largest frequency magnitude over all axes and stored terms.
    pub fn max_freq(&self) -> i64 {
        self.terms
            .keys()
            .flat_map(|&key| unpack(key, self.dim))
            .map(|k| k.abs())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    k: Vec<i64>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct TrigPolyJson {
    dim: usize,
    terms: Vec<TermJson>,
}

impl Serialize for TrigPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .iter_terms()
            .map(|(k, c)| TermJson { k, re: c.re, im: c.im })
            .collect();
        TrigPolyJson { dim: self.dim, terms }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = TrigPolyJson::deserialize(deserializer)?;
        if raw.dim < 1 || raw.dim > MAX_DIM {
            return Err(D::Error::custom(format!("torus dimension {} out of range", raw.dim)));
        }
        let mut f = TrigPoly::zero(raw.dim);
        for t in &raw.terms {
            if t.k.len() != raw.dim {
                return Err(D::Error::custom("frequency vector length does not match dim"));
            }
            if t.k.iter().any(|ki| ki.abs() > FREQ_LIMIT) {
                return Err(D::Error::custom("frequency out of range"));
            }
            f.add_term(&t.k, Complex64::new(t.re, t.im));
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mul_inverse_frequencies() {
        let f = TrigPoly::monomial(1, &[1], c(1.0, 0.0));
        let g = TrigPoly::monomial(1, &[-1], c(1.0, 0.0));
        let prod = f.mul(&g).unwrap();
        assert!(prod.approx_eq(&TrigPoly::one(1), 0.0));
    }

    #[test]
    fn add_zero_identity() {
        let f = TrigPoly::cos(2, &[1, 0]);
        let sum = f.add(&TrigPoly::zero(2)).unwrap();
        assert!(sum.approx_eq(&f, 0.0));
    }

    #[test]
    fn cos_squared_matches_grid_oracle() {
        // mul(cos x1, cos x1) = 1/2 + 1/2 cos 2x1, checked pointwise
        let f = TrigPoly::cos(1, &[1]);
        let prod = f.mul(&f).unwrap();
        let mut expect = TrigPoly::constant(1, c(0.5, 0.0));
        expect = expect.add(&TrigPoly::cos(1, &[2]).scale(c(0.5, 0.0))).unwrap();
        assert!(prod.approx_eq(&expect, 1e-15));
        for i in 0..32 {
            let x = [2.0 * std::f64::consts::PI * i as f64 / 32.0];
            let lhs = prod.eval(&x);
            let rhs = f.eval(&x) * f.eval(&x);
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_single_mode() {
        let f = TrigPoly::monomial(1, &[1], c(1.0, 0.0));
        let df = f.partial(0).unwrap();
        assert!(df.approx_eq(&f.scale(c(0.0, 1.0)), 0.0));
    }

    #[test]
    fn partial_constant_is_zero() {
        let f = TrigPoly::constant(2, c(3.0, 0.0));
        assert!(f.partial(1).unwrap().is_zero(0.0));
    }

    #[test]
    fn partial_sin_matches_finite_differences() {
        let f = TrigPoly::sin(1, &[1]);
        let df = f.partial(0).unwrap();
        assert!(df.approx_eq(&TrigPoly::cos(1, &[1]), 1e-15));
        let h = 1e-6;
        for i in 0..16 {
            let x = 2.0 * std::f64::consts::PI * i as f64 / 16.0;
            let fd = (f.eval(&[x + h]) - f.eval(&[x - h])) / c(2.0 * h, 0.0);
            assert!((df.eval(&[x]) - fd).norm() < 1e-8);
        }
    }

    #[test]
    fn partial_axis_out_of_range() {
        let f = TrigPoly::one(1);
        assert!(matches!(f.partial(1), Err(NcError::AxisOutOfRange { .. })));
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(TrigPoly::one(1).integrate(), c(1.0, 0.0));
        assert_eq!(TrigPoly::monomial(1, &[1], c(1.0, 0.0)).integrate(), c(0.0, 0.0));
        let f = TrigPoly::constant(2, c(3.0, 0.0)).add(&TrigPoly::cos(2, &[0, 1])).unwrap();
        // quadrature oracle on a grid
        let m = 16;
        let mut acc = c(0.0, 0.0);
        for i in 0..m {
            for j in 0..m {
                let x = [
                    2.0 * std::f64::consts::PI * i as f64 / m as f64,
                    2.0 * std::f64::consts::PI * j as f64 / m as f64,
                ];
                acc += f.eval(&x);
            }
        }
        acc /= c((m * m) as f64, 0.0);
        assert!((f.integrate() - acc).norm() < 1e-12);
        assert!((f.integrate() - c(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_examples() {
        assert!((TrigPoly::one(2).eval(&[0.3, 1.1]) - c(1.0, 0.0)).norm() < 1e-15);
        let e1 = TrigPoly::monomial(2, &[1, 0], c(1.0, 0.0));
        assert!((e1.eval(&[std::f64::consts::PI, 0.0]) - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((TrigPoly::cos(1, &[1]).eval(&[0.0]) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn integration_by_parts() {
        let mut f = TrigPoly::cos(2, &[1, 1]);
        f = f.add(&TrigPoly::sin(2, &[2, -1])).unwrap();
        assert_eq!(f.partial(0).unwrap().integrate(), c(0.0, 0.0));
        assert_eq!(f.partial(1).unwrap().integrate(), c(0.0, 0.0));
    }

    #[test]
    fn dim_mismatch_rejected() {
        let f = TrigPoly::one(1);
        let g = TrigPoly::one(2);
        assert!(matches!(f.add(&g), Err(NcError::DimMismatch(1, 2))));
        assert!(matches!(f.mul(&g), Err(NcError::DimMismatch(1, 2))));
    }

    #[test]
    fn is_real_predicate() {
        assert!(TrigPoly::cos(1, &[1]).is_real(0.0));
        assert!(TrigPoly::sin(1, &[2]).is_real(1e-15));
        assert!(!TrigPoly::monomial(1, &[1], c(1.0, 0.0)).is_real(1e-12));
    }

    #[test]
    fn json_round_trip() {
        let f = TrigPoly::cos(2, &[1, -2]).add(&TrigPoly::constant(2, c(0.0, 2.5))).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let g: TrigPoly = serde_json::from_str(&s).unwrap();
        assert!(f.approx_eq(&g, 0.0));
    }

    fn arb_trigpoly(dim: usize) -> impl Strategy<Value = TrigPoly> {
        prop::collection::vec(
            (
                prop::collection::vec(-2i64..=2, dim),
                -1.0f64..1.0,
                -1.0f64..1.0,
            ),
            0..5,
        )
        .prop_map(move |terms| {
            let mut f = TrigPoly::zero(dim);
            for (k, re, im) in terms {
                f.add_term(&k, c(re, im));
            }
            f
        })
    }

    proptest! {
        #[test]
        fn partials_commute(f in arb_trigpoly(2)) {
            let a = f.partial(0).unwrap().partial(1).unwrap();
            let b = f.partial(1).unwrap().partial(0).unwrap();
            prop_assert!(a.approx_eq(&b, 0.0));
        }

        #[test]
        fn leibniz_rule(f in arb_trigpoly(2), g in arb_trigpoly(2)) {
            let lhs = f.mul(&g).unwrap().partial(0).unwrap();
            let rhs = f.partial(0).unwrap().mul(&g).unwrap()
                .add(&f.mul(&g.partial(0).unwrap()).unwrap()).unwrap();
            prop_assert!(lhs.approx_eq(&rhs, 1e-12));
        }

        #[test]
        fn conj_involution(f in arb_trigpoly(2)) {
            prop_assert!(f.conj().conj().approx_eq(&f, 0.0));
        }

        #[test]
        fn mul_commutative_associative(
            f in arb_trigpoly(1), g in arb_trigpoly(1), h in arb_trigpoly(1)
        ) {
            prop_assert!(f.mul(&g).unwrap().approx_eq(&g.mul(&f).unwrap(), 1e-13));
            let a = f.mul(&g).unwrap().mul(&h).unwrap();
            let b = f.mul(&g.mul(&h).unwrap()).unwrap();
            prop_assert!(a.approx_eq(&b, 1e-12));
        }

        #[test]
        fn derivative_kills_integral(f in arb_trigpoly(2)) {
            prop_assert_eq!(f.partial(0).unwrap().integrate(), c(0.0, 0.0));
        }
    }
}
