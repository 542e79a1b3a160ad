//! Randomized invariant suite over all layers: ring identities, basis
//! identities, the differential calculus, connections and the action.
//! Deterministic for a fixed seed; reports one named residual per invariant.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus::{AlgElement, Calculus, Derivation, NCForm};
use crate::connect::{
    curvature, curvature_decomposition, decompose_omega, d_zero, gauge_transform,
    horizontal_lift, potential_of, transition_transport, ConnectionForm,
};
use crate::error::{NcError, Result};
use crate::sampling::Sampler;
use crate::ymh::{ActionConfig, YmhProblem};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantResult {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub trials: usize,
    pub all_pass: bool,
    pub results: Vec<InvariantResult>,
}

struct Suite {
    calc: Calculus,
    sampler: Sampler,
    trials: usize,
    results: Vec<InvariantResult>,
}

impl Suite {
    fn check<F>(&mut self, name: &str, tolerance: f64, mut f: F)
    where
        F: FnMut(&Calculus, &mut Sampler) -> Result<f64>,
    {
        let mut max_residual: f64 = 0.0;
        let mut failed_eval = false;
        for _ in 0..self.trials {
            match f(&self.calc, &mut self.sampler) {
                Ok(r) => max_residual = max_residual.max(r),
                Err(_) => {
                    failed_eval = true;
                    break;
                }
            }
        }
        self.results.push(InvariantResult {
            name: name.to_string(),
            max_residual,
            tolerance,
            pass: !failed_eval && max_residual <= tolerance,
        });
    }
}

fn random_su(calc: &Calculus, sampler: &mut Sampler) -> Result<ConnectionForm> {
    let a = sampler.su_connection_data(calc);
    crate::connect::alpha_from_potential(calc, &a)
}

fn random_omega(calc: &Calculus, sampler: &mut Sampler) -> Result<ConnectionForm> {
    ConnectionForm::new(sampler.form(calc, 1, 0).add(&sampler.form(calc, 0, 1))?)
}

pub fn run_suite(n: usize, d: usize, seed: u64, trials: usize) -> Result<SuiteReport> {
    if n < 2 {
        return Err(NcError::SizeTooSmall(n));
    }
    if d == 0 {
        return Err(NcError::InvalidInput("torus dimension must be positive".into()));
    }
    let calc = Calculus::new(n, d)?;
    let mut suite = Suite {
        calc,
        sampler: Sampler::new(n, d, seed),
        trials,
        results: Vec::new(),
    };

    // ---- function ring ----
    suite.check("ring_partials_commute", 1e-13, |_, s| {
        let f = s.trigpoly();
        if d < 2 {
            let g = f.partial(0)?.partial(0)?;
            return Ok(g.sub(&f.partial(0)?.partial(0)?)?.max_coeff());
        }
        let ab = f.partial(0)?.partial(1)?;
        let ba = f.partial(1)?.partial(0)?;
        Ok(ab.sub(&ba)?.max_coeff())
    });
    suite.check("ring_leibniz", 1e-12, |_, s| {
        let f = s.trigpoly();
        let g = s.trigpoly();
        let lhs = f.mul(&g)?.partial(0)?;
        let rhs = f.partial(0)?.mul(&g)?.add(&f.mul(&g.partial(0)?)?)?;
        Ok(lhs.sub(&rhs)?.max_coeff())
    });
    suite.check("ring_integral_of_derivative", 1e-13, |_, s| {
        Ok(s.trigpoly().partial(0)?.integrate().norm())
    });
    suite.check("ring_conj_involution", 1e-14, |_, s| {
        let f = s.trigpoly();
        Ok(f.conj().conj().sub(&f)?.max_coeff())
    });
    suite.check("ring_mul_commutative", 1e-12, |_, s| {
        let f = s.trigpoly();
        let g = s.trigpoly();
        Ok(f.mul(&g)?.sub(&g.mul(&f)?)?.max_coeff())
    });
    suite.check("ring_mul_associative", 1e-11, |_, s| {
        let f = s.trigpoly();
        let g = s.trigpoly();
        let h = s.trigpoly();
        let lhs = f.mul(&g)?.mul(&h)?;
        let rhs = f.mul(&g.mul(&h)?)?;
        Ok(lhs.sub(&rhs)?.max_coeff())
    });

    // ---- matrix basis ----
    suite.check("basis_gram_orthogonality", 1e-12, |c, s| {
        let basis = c.basis();
        let a = s.index(basis.len());
        let b = s.index(basis.len());
        let tr = basis.elem(a).mul(basis.elem(b))?.trace();
        let expect = if a == b { Complex64::new(2.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        Ok((tr - expect).norm())
    });
    suite.check("basis_jacobi_identity", 1e-12, |c, s| {
        let basis = c.basis();
        let m = basis.len();
        let (a, b, cc) = (s.index(m), s.index(m), s.index(m));
        let mut worst: f64 = 0.0;
        for f in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..m {
                acc += basis.structure_const(a, b, e) * basis.structure_const(e, cc, f);
                acc += basis.structure_const(b, cc, e) * basis.structure_const(e, a, f);
                acc += basis.structure_const(cc, a, e) * basis.structure_const(e, b, f);
            }
            worst = worst.max(acc.norm());
        }
        Ok(worst)
    });
    suite.check("basis_theta_project_idempotent", 1e-12, |_, s| {
        let x = s.alg();
        let p = x.theta_project();
        let r1 = p.theta_project().sub(&p)?.max_coeff();
        let id = AlgElement::identity(n, d).scale_fn(&s.trigpoly())?;
        let r2 = id.theta_project().max_coeff();
        Ok(r1.max(r2))
    });
    suite.check("basis_decompose_reconstruct", 1e-11, |c, s| {
        let gamma = s.traceless_alg();
        let coeffs = gamma.basis_coeffs(c.basis())?;
        let back = AlgElement::from_basis_coeffs(d, c.basis(), &coeffs)?;
        Ok(back.sub(&gamma)?.max_coeff())
    });

    // ---- differential calculus ----
    suite.check("calculus_structure_equation", 1e-12, |c, _| {
        let theta = c.theta();
        let lhs = c.dhat(&theta)?;
        let rhs = c.wedge(&theta, &theta)?;
        Ok(lhs.sub(&rhs)?.max_coeff())
    });
    suite.check("calculus_dhat_squared_zero", 1e-11, |c, s| {
        let (dxd, thd) = (s.index(d + 1).min(1), s.index(3));
        let omega = s.form(c, dxd, thd);
        Ok(c.dhat(&c.dhat(&omega)?)?.max_coeff())
    });
    suite.check("calculus_graded_leibniz", 1e-11, |c, s| {
        let (p1, q1, q2) = (s.index(2).min(d), s.index(2), s.index(2));
        let a = s.form(c, p1, q1);
        let b = s.form(c, 0, q2);
        let lhs = c.dhat(&c.wedge(&a, &b)?)?;
        let sign = if a.degree() % 2 == 0 { 1.0 } else { -1.0 };
        let rhs = c
            .wedge(&c.dhat(&a)?, &b)?
            .add(&c.wedge(&a, &c.dhat(&b)?)?.scale(Complex64::new(sign, 0.0)))?;
        Ok(lhs.sub(&rhs)?.max_coeff())
    });
    suite.check("calculus_koszul_oracle", 1e-10, |c, s| {
        let (p1, q1) = (s.index(2).min(d), s.index(2));
        let omega = s.form(c, p1, q1);
        let mut ders = Vec::new();
        for _ in 0..omega.degree() + 1 {
            ders.push(s.derivation(c, false));
        }
        let lhs = c.form_eval(&c.dhat(&omega)?, &ders)?;
        let rhs = c.koszul_eval(&omega, &ders)?;
        Ok(lhs.sub(&rhs)?.max_coeff())
    });
    suite.check("calculus_cartan_homotopy", 1e-10, |c, s| {
        let p1 = s.index(2).min(d);
        let mut q1 = s.index(2);
        if p1 + q1 == 0 {
            q1 = 1;
        }
        let omega = s.form(c, p1, q1);
        let x = s.derivation(c, false);
        let lhs = c.lie_derive(&x, &omega)?;
        let rhs = c
            .contract(&x, &c.dhat(&omega)?)?
            .add(&c.dhat(&c.contract(&x, &omega)?)?)?;
        Ok(lhs.sub(&rhs)?.max_coeff())
    });
    suite.check("calculus_cartan_bracket", 1e-9, |c, s| {
        let p1 = s.index(2).min(d);
        let omega = s.form(c, p1, 1);
        let x = s.derivation(c, false);
        let y = s.derivation(c, false);
        let lhs = c
            .contract(&y, &c.lie_derive(&x, &omega)?)?
            .sub(&c.lie_derive(&x, &c.contract(&y, &omega)?)?)?
            .neg();
        let rhs = c.contract(&x.bracket(&y)?, &omega)?;
        Ok(lhs.sub(&rhs)?.max_coeff())
    });
    suite.check("calculus_eval_antisymmetry", 1e-10, |c, s| {
        let p1 = s.index(2).min(d);
        let omega = s.form(c, p1, 2 - p1);
        let x = s.derivation(c, false);
        let y = s.derivation(c, false);
        let v1 = c.form_eval(&omega, &[x.clone(), y.clone()])?;
        let v2 = c.form_eval(&omega, &[y, x])?;
        Ok(v1.add(&v2)?.max_coeff())
    });
    suite.check("calculus_eval_central_linearity", 1e-10, |c, s| {
        let p1 = s.index(2).min(d);
        let omega = s.form(c, p1, 2 - p1);
        let x = s.derivation(c, false);
        let y = s.derivation(c, false);
        let f = s.trigpoly();
        let v1 = c.form_eval(&omega, &[x.scale_fn(&f)?, y.clone()])?;
        let v2 = c.form_eval(&omega, &[x, y])?.scale_fn(&f)?;
        Ok(v1.sub(&v2)?.max_coeff())
    });
    suite.check("calculus_zero_form_differential", 1e-11, |c, s| {
        let a = s.alg();
        let x = s.derivation(c, false);
        let lhs = c.form_eval(&c.dhat(&NCForm::from_alg(&a))?, std::slice::from_ref(&x))?;
        Ok(lhs.sub(&x.apply(&a)?)?.max_coeff())
    });
    suite.check("calculus_bracket_operator", 1e-10, |c, s| {
        let x = s.derivation(c, false);
        let y = s.derivation(c, false);
        let a = s.alg();
        let lhs = x.bracket(&y)?.apply(&a)?;
        let rhs = x.apply(&y.apply(&a)?)?.sub(&y.apply(&x.apply(&a)?)?)?;
        Ok(lhs.sub(&rhs)?.max_coeff())
    });
    suite.check("algebroid_anchor_homomorphism", 1e-10, |c, s| {
        let x = s.derivation(c, false);
        let y = s.derivation(c, false);
        let f = s.trigpoly();
        let lhs = x.bracket(&y)?.apply_fn(&f)?;
        let rhs = x.apply_fn(&y.apply_fn(&f)?)?.sub(&y.apply_fn(&x.apply_fn(&f)?)?)?;
        Ok(lhs.sub(&rhs)?.max_coeff())
    });
    suite.check("algebroid_module_bracket", 1e-10, |c, s| {
        let x = s.derivation(c, false);
        let y = s.derivation(c, false);
        let f = s.trigpoly();
        let lhs = x.bracket(&y.scale_fn(&f)?)?;
        let rhs = x
            .bracket(&y)?
            .scale_fn(&f)?
            .add(&y.scale_fn(&x.apply_fn(&f)?)?)?;
        let mut r = lhs.inner_part().sub(rhs.inner_part())?.max_coeff();
        for mu in 0..d {
            r = r.max(lhs.vector_comp(mu).sub(rhs.vector_comp(mu))?.max_coeff());
        }
        Ok(r)
    });

    // ---- connections ----
    suite.check("connection_su_difference_horizontal", 1e-11, |c, s| {
        let a1 = random_su(c, s)?;
        let a2 = random_su(c, s)?;
        let diff = a1.form().sub(a2.form())?;
        let mut r: f64 = 0.0;
        for m in 0..c.basis().len() {
            r = r.max(diff.coeff(&[], &[m]).max_coeff());
        }
        for mu in 0..d {
            let cmu = diff.coeff(&[mu], &[]);
            r = r.max(cmu.trace().max_coeff());
            r = r.max(cmu.add(&cmu.star())?.max_coeff());
        }
        Ok(r)
    });
    suite.check("connection_curvature_horizontal", 1e-10, |c, s| {
        let alpha = random_su(c, s)?;
        let r = curvature(c, &alpha)?;
        let gamma = s.traceless_alg();
        Ok(c.contract(&Derivation::inner(gamma)?, &r)?.max_coeff())
    });
    suite.check("connection_field_strength", 1e-10, |c, s| {
        if d < 2 {
            // single axis: the lifted component of the curvature must vanish
            let alpha = random_su(c, s)?;
            let r = curvature(c, &alpha)?;
            let l = horizontal_lift(c, &alpha, 0)?;
            return Ok(c.form_eval(&r, &[l.clone(), l])?.max_coeff());
        }
        let alpha = random_su(c, s)?;
        let pot = potential_of(c, &alpha);
        let r = curvature(c, &alpha)?;
        let l0 = horizontal_lift(c, &alpha, 0)?;
        let l1 = horizontal_lift(c, &alpha, 1)?;
        let val = c.form_eval(&r, &[l0, l1])?;
        let expect = pot[1]
            .partial(0)?
            .sub(&pot[0].partial(1)?)?
            .add(&pot[0].comm(&pot[1])?)?;
        Ok(val.sub(&expect)?.max_coeff())
    });
    suite.check("connection_gauge_covariance", 1e-9, |c, s| {
        let omega = random_omega(c, s)?;
        let u = s.special_unitary()?;
        let lhs = curvature(c, &gauge_transform(c, &omega, &u)?)?;
        let rhs = curvature(c, &omega)?.left_mul(&u.star())?.right_mul(&u)?;
        Ok(lhs.sub(&rhs)?.max_coeff())
    });
    suite.check("connection_b_reference_independent", 1e-12, |c, s| {
        let omega = random_omega(c, s)?;
        let r1 = random_su(c, s)?;
        let r2 = random_su(c, s)?;
        let (_, h1) = decompose_omega(c, &omega, &r1)?;
        let (_, h2) = decompose_omega(c, &omega, &r2)?;
        let mut r: f64 = 0.0;
        for (b1, b2) in h1.b.iter().zip(&h2.b) {
            r = r.max(b1.sub(b2)?.max_coeff());
        }
        Ok(r)
    });
    suite.check("connection_decomposition_sum", 1e-10, |c, s| {
        let omega = random_omega(c, s)?;
        let alpha_ref = random_su(c, s)?;
        let dec = curvature_decomposition(c, &omega, &alpha_ref)?;
        let r = curvature(c, &omega)?;
        let x = s.derivation(c, false);
        let y = s.derivation(c, false);
        let lhs = dec.total(c, &x, &y)?;
        let rhs = c.form_eval(&r, &[x, y])?;
        Ok(lhs.sub(&rhs)?.max_coeff())
    });
    suite.check("splitting_flat", 1e-10, |c, s| {
        let alpha_ref = random_su(c, s)?;
        let x = s.derivation(c, false);
        let y = s.derivation(c, false);
        let comm = d_zero(c, &x, &alpha_ref)?.commutator(&d_zero(c, &y, &alpha_ref)?)?;
        let direct = d_zero(c, &x.bracket(&y)?, &alpha_ref)?;
        let mut r = comm.matrix_part().sub(direct.matrix_part())?.max_coeff();
        for mu in 0..d {
            r = r.max(comm.symbol()[mu].sub(&direct.symbol()[mu])?.max_coeff());
        }
        Ok(r)
    });
    suite.check("splitting_reference_independent", 1e-10, |c, s| {
        let a1 = random_su(c, s)?;
        let a2 = random_su(c, s)?;
        let x = s.derivation(c, false);
        let t1 = d_zero(c, &x, &a1)?;
        let t2 = d_zero(c, &x, &a2)?;
        Ok(t1.matrix_part().sub(t2.matrix_part())?.max_coeff())
    });
    suite.check("transition_gluing", 1e-10, |c, s| {
        let gamma = s.antiherm_traceless(c);
        let a_x = s.antiherm_traceless(c);
        let g = s.special_unitary()?;
        let x = Derivation::coordinate(n, d, 0)?;
        let gamma_p = transition_transport(&gamma, &g, &x)?;
        let a_p = transition_transport(&a_x, &g, &x)?;
        let ginv = g.unimodular_inverse()?;
        let lhs = a_p.sub(&gamma_p)?;
        let rhs = ginv.mul(&a_x.sub(&gamma)?.mul(&g)?)?;
        Ok(lhs.sub(&rhs)?.max_coeff())
    });

    // ---- action ----
    suite.check("action_nonnegative", 0.0, |_, s| {
        let prob = YmhProblem::new(ActionConfig::new(n, d))?;
        let p: Vec<f64> = (0..prob.num_params()).map(|_| s.uniform(-0.3, 0.3)).collect();
        let v = prob.action(&p)?;
        Ok(if v >= 0.0 { 0.0 } else { -v })
    });
    suite.check("action_paths_agree", 1e-9, |_, s| {
        let prob = YmhProblem::new(ActionConfig::new(n, d))?;
        let p: Vec<f64> = (0..prob.num_params()).map(|_| s.uniform(-0.3, 0.3)).collect();
        let fast = prob.action(&p)?;
        let slow = prob.action_via_form(&prob.params_to_form(&p)?)?;
        Ok((fast - slow).abs() / 1.0_f64.max(fast.abs()))
    });
    suite.check("action_gauge_invariant", 1e-9, |c, s| {
        let prob = YmhProblem::new(ActionConfig::new(n, d))?;
        let p: Vec<f64> = (0..prob.num_params()).map(|_| s.uniform(-0.2, 0.2)).collect();
        let omega = prob.params_to_form(&p)?;
        let u = AlgElement::from_matrix(d, &s.const_special_unitary());
        let transformed = gauge_transform(c, &omega, &u)?;
        Ok((prob.action(&p)? - prob.action_via_form(&transformed)?).abs())
    });
    suite.check("action_flat_points", 1e-11, |c, s| {
        let prob = YmhProblem::new(ActionConfig::new(n, d))?;
        let p0 = vec![0.0; prob.num_params()];
        let mut r = prob.action(&p0)?;
        let grad = prob.gradient(&p0)?;
        for g in grad {
            r = r.max(g.abs());
        }
        let _ = (c, s);
        Ok(r)
    });

    let all_pass = suite.results.iter().all(|r| r.pass);
    Ok(SuiteReport {
        n,
        d,
        seed,
        trials,
        all_pass,
        results: suite.results,
    })
}

/// Orthonormal-direction curvature components of a connection, used by report
/// emitters: labels together with the evaluated matrices.
pub fn curvature_components_report(
    calc: &Calculus,
    omega: &ConnectionForm,
) -> Result<Vec<(String, AlgElement)>> {
    let r = curvature(calc, omega)?;
    let mut dirs: Vec<(String, Derivation)> = Vec::new();
    for mu in 0..calc.d() {
        dirs.push((format!("dx{mu}"), Derivation::coordinate(calc.n(), calc.d(), mu)?));
    }
    let s2 = std::f64::consts::SQRT_2;
    for a in 0..calc.basis().len() {
        let g = AlgElement::from_matrix(calc.d(), calc.basis().elem(a))
            .scale(Complex64::new(1.0 / s2, 0.0));
        dirs.push((format!("ad{a}"), Derivation::inner(g)?));
    }
    let mut out = Vec::new();
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            let v = calc.form_eval(&r, &[dirs[i].1.clone(), dirs[j].1.clone()])?;
            out.push((format!("{}_{}", dirs[i].0, dirs[j].0), v));
        }
    }
    Ok(out)
}
