//! Seeded random generators for property suites: trigonometric polynomials,
//! algebra elements, derivations, forms, gauge elements.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{AlgElement, Calculus, Derivation, NCForm};
use crate::error::Result;
use crate::fourier::TrigPoly;
use crate::matgeo::Matrix;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Deterministic sampler over the truncated calculus.
pub struct Sampler {
    pub n: usize,
    pub d: usize,
    /// max |k_mu| for generated frequencies
    pub cutoff: i64,
    /// number of Fourier terms per generated scalar
    pub terms: usize,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(n: usize, d: usize, seed: u64) -> Self {
        Sampler { n, d, cutoff: 2, terms: 2, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    fn gaussian(&mut self) -> f64 {
        // Box-Muller
        let u1: f64 = self.rng.random_range(1e-12..1.0);
        let u2: f64 = self.rng.random_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    fn freq(&mut self) -> Vec<i64> {
        (0..self.d).map(|_| self.rng.random_range(-self.cutoff..=self.cutoff)).collect()
    }

    /// Random complex trigonometric polynomial.
    pub fn trigpoly(&mut self) -> TrigPoly {
        let mut f = TrigPoly::zero(self.d);
        for _ in 0..self.terms {
            let k = self.freq();
            f.add_term(&k, c(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0)));
        }
        f
    }

    /// Random real-valued trigonometric polynomial.
    pub fn real_trigpoly(&mut self) -> TrigPoly {
        let mut f = TrigPoly::zero(self.d);
        for _ in 0..self.terms {
            let k = self.freq();
            let a = self.uniform(-1.0, 1.0);
            let b = self.uniform(-1.0, 1.0);
            f = f
                .add(&TrigPoly::cos(self.d, &k).scale(c(a, 0.0)))
                .unwrap()
                .add(&TrigPoly::sin(self.d, &k).scale(c(b, 0.0)))
                .unwrap();
        }
        f
    }

    pub fn alg(&mut self) -> AlgElement {
        let mut s = AlgElement::zeros(self.n, self.d);
        for i in 0..self.n {
            for j in 0..self.n {
                s.set_entry(i, j, self.trigpoly());
            }
        }
        s
    }

    pub fn traceless_alg(&mut self) -> AlgElement {
        self.alg().theta_project()
    }

    /// Traceless antihermitian: `sum_a i f_a E_a` with real `f_a`.
    pub fn antiherm_traceless(&mut self, calc: &Calculus) -> AlgElement {
        let m = calc.basis().len();
        let mut s = AlgElement::zeros(self.n, self.d);
        for a in 0..m {
            let f = self.real_trigpoly().scale(c(0.0, 1.0));
            let e = AlgElement::from_matrix(self.d, calc.basis().elem(a)).scale_fn(&f).unwrap();
            s = s.add(&e).unwrap();
        }
        s
    }

    /// Random derivation; `real` restricts to real vector components and an
    /// antihermitian inner part.
    pub fn derivation(&mut self, calc: &Calculus, real: bool) -> Derivation {
        let vector: Vec<TrigPoly> = (0..self.d)
            .map(|_| if real { self.real_trigpoly() } else { self.trigpoly() })
            .collect();
        let inner = if real { self.antiherm_traceless(calc) } else { self.traceless_alg() };
        Derivation::new(vector, inner).unwrap()
    }

    /// Random homogeneous form of the given bidegree, with a few terms.
    pub fn form(&mut self, calc: &Calculus, dx_deg: usize, th_deg: usize) -> NCForm {
        let m = calc.basis().len();
        assert!(dx_deg <= self.d && th_deg <= m);
        let mut form = NCForm::zero(self.n, self.d, dx_deg + th_deg);
        for _ in 0..3 {
            let dx = self.multi_index(self.d, dx_deg);
            let th = self.multi_index(m, th_deg);
            form.add_term(&dx, &th, &self.alg()).unwrap();
        }
        form
    }

    fn multi_index(&mut self, bound: usize, len: usize) -> Vec<usize> {
        let mut all: Vec<usize> = (0..bound).collect();
        for i in (1..all.len()).rev() {
            let j = self.rng.random_range(0..=i);
            all.swap(i, j);
        }
        let mut idx: Vec<usize> = all.into_iter().take(len).collect();
        idx.sort_unstable();
        idx
    }

    /// SU connection data: `d` traceless antihermitian algebra elements.
    pub fn su_connection_data(&mut self, calc: &Calculus) -> Vec<AlgElement> {
        (0..self.d).map(|_| self.antiherm_traceless(calc)).collect()
    }

    /// Random constant special unitary matrix, by Gram-Schmidt and phase fix.
    pub fn const_special_unitary(&mut self) -> Matrix {
        let n = self.n;
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        for _ in 0..n {
            let mut v: Vec<Complex64> =
                (0..n).map(|_| c(self.gaussian(), self.gaussian())).collect();
            for prev in &cols {
                let dot: Complex64 =
                    prev.iter().zip(&v).map(|(p, x)| p.conj() * x).sum();
                for (xi, pi) in v.iter_mut().zip(prev) {
                    *xi -= dot * pi;
                }
            }
            let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            for xi in v.iter_mut() {
                *xi /= norm;
            }
            cols.push(v);
        }
        let mut u = Matrix::zeros(n);
        for (j, col) in cols.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                u[(i, j)] = x;
            }
        }
        // divide one column by the determinant phase to land in SU(n)
        let det = u.det();
        let phase = det / c(det.norm(), 0.0);
        for i in 0..n {
            u[(i, 0)] /= phase;
        }
        u
    }

    /// Random unitary algebra element with det = 1:
    /// `V diag(e^{i m_j k.x}) V*` times a constant SU(n) factor, where the
    /// integers `m_j` sum to zero.
    pub fn special_unitary(&mut self) -> Result<AlgElement> {
        let n = self.n;
        let v = self.const_special_unitary();
        let w = self.const_special_unitary();
        let k: Vec<i64> = (0..self.d).map(|_| self.rng.random_range(-1i64..=1)).collect();
        let mut m: Vec<i64> = (0..n).map(|_| self.rng.random_range(-1i64..=1)).collect();
        let total: i64 = m.iter().sum();
        m[n - 1] -= total;
        let mut diag = AlgElement::zeros(n, self.d);
        for (j, &mj) in m.iter().enumerate() {
            let kj: Vec<i64> = k.iter().map(|&ki| ki * mj).collect();
            diag.set_entry(j, j, TrigPoly::monomial(self.d, &kj, c(1.0, 0.0)));
        }
        let ve = AlgElement::from_matrix(self.d, &v);
        let we = AlgElement::from_matrix(self.d, &w);
        let u = ve.mul(&diag)?.mul(&ve.star())?.mul(&we)?;
        Ok(u)
    }
}
