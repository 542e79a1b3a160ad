//! Tests for the Yang-Mills-Higgs action, its gradient and the descent to
//! flat vacua.

use ncgeom::connect::{gauge_transform, ConnectionForm};
use ncgeom::sampling::Sampler;
use ncgeom::ymh::{ActionConfig, YmhProblem};
use ncgeom::{AlgElement, Calculus, NCForm, TrigPoly};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn problem(n: usize, d: usize) -> YmhProblem {
    YmhProblem::new(ActionConfig::new(n, d)).unwrap()
}

fn random_params(sampler: &mut Sampler, num: usize, scale: f64) -> Vec<f64> {
    (0..num).map(|_| sampler.uniform(-scale, scale)).collect()
}

#[test]
fn flat_points_have_zero_action() {
    let prob = problem(2, 1);
    // omega = -i theta is the parameter origin
    let p0 = vec![0.0; prob.num_params()];
    assert!(prob.action(&p0).unwrap().abs() < 1e-14);
    // omega = 0 lies in the parametrization and is flat too
    let zero = ConnectionForm::zero(2, 1);
    let pz = prob.params_from_form(&zero).unwrap();
    assert!(prob.action(&pz).unwrap().abs() < 1e-12);
    // the gradient vanishes at both
    assert!(prob.gradient(&p0).unwrap().iter().all(|g| g.abs() < 1e-12));
    assert!(prob.gradient(&pz).unwrap().iter().all(|g| g.abs() < 1e-10));
}

#[test]
fn breaking_flatness_costs_action() {
    // omega = -i theta + eps s3 theta^3 (constant hermitian perturbation)
    let prob = problem(2, 1);
    let calc = Calculus::new(2, 1).unwrap();
    for eps in [0.3, -0.2, 1.0] {
        let mut pert = NCForm::zero(2, 1, 1);
        let s3 = AlgElement::from_matrix(1, calc.basis().elem(2)).scale(c(eps, 0.0));
        pert.add_term(&[], &[2], &s3).unwrap();
        let omega = ConnectionForm::new(calc.theta().neg().add(&pert).unwrap()).unwrap();
        let p = prob.params_from_form(&omega).unwrap();
        let s = prob.action(&p).unwrap();
        assert!(s > 1e-3, "eps={eps} gave action {s}");
    }
}

#[test]
fn action_is_nonnegative_and_positive_off_vacua() {
    let prob = problem(2, 1);
    let mut sampler = Sampler::new(2, 1, 41);
    for _ in 0..10 {
        let p = random_params(&mut sampler, prob.num_params(), 0.5);
        assert!(prob.action(&p).unwrap() >= 0.0);
    }
}

#[test]
fn component_path_matches_form_path() {
    for (n, d) in [(2usize, 1usize), (2, 2), (3, 1)] {
        let prob = problem(n, d);
        let mut sampler = Sampler::new(n, d, 42);
        for _ in 0..3 {
            let p = random_params(&mut sampler, prob.num_params(), 0.4);
            let fast = prob.action(&p).unwrap();
            let omega = prob.params_to_form(&p).unwrap();
            let slow = prob.action_via_form(&omega).unwrap();
            let denom = 1.0_f64.max(fast.abs());
            assert!(
                (fast - slow).abs() / denom < 1e-10,
                "n={n} d={d}: {fast} vs {slow}"
            );
        }
    }
}

#[test]
fn gradient_matches_central_differences() {
    let prob = problem(2, 1);
    let mut sampler = Sampler::new(2, 1, 43);
    let h = 1e-5;
    for _ in 0..3 {
        let p = random_params(&mut sampler, prob.num_params(), 0.4);
        let grad = prob.gradient(&p).unwrap();
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        for i in (0..prob.num_params()).step_by(7) {
            let mut pp = p.clone();
            pp[i] += h;
            let mut pm = p.clone();
            pm[i] -= h;
            let fd = (prob.action(&pp).unwrap() - prob.action(&pm).unwrap()) / (2.0 * h);
            let denom = gnorm.max(1.0);
            assert!(
                (grad[i] - fd).abs() / denom < 1e-6,
                "param {i}: exact {} vs fd {fd}",
                grad[i]
            );
        }
    }
}

#[test]
fn action_is_gauge_invariant() {
    let prob = problem(2, 1);
    let calc = Calculus::new(2, 1).unwrap();
    let mut sampler = Sampler::new(2, 1, 44);
    for _ in 0..3 {
        let p = random_params(&mut sampler, prob.num_params(), 0.3);
        let omega = prob.params_to_form(&p).unwrap();
        let u = AlgElement::from_matrix(1, &sampler.const_special_unitary());
        let transformed = gauge_transform(&calc, &omega, &u).unwrap();
        let s1 = prob.action(&p).unwrap();
        let s2 = prob.action_via_form(&transformed).unwrap();
        assert!((s1 - s2).abs() < 1e-9, "{s1} vs {s2}");
    }
}

#[test]
fn truncation_violations_are_rejected() {
    let prob = problem(2, 1);
    let calc = Calculus::new(2, 1).unwrap();
    // frequency 3 exceeds the cutoff-1 parameter space
    let mut high = NCForm::zero(2, 1, 1);
    let coef = AlgElement::central(2, &TrigPoly::cos(1, &[3])).scale(c(0.0, 1.0));
    high.add_term(&[0], &[], &coef).unwrap();
    let omega = ConnectionForm::new(calc.theta().neg().add(&high).unwrap()).unwrap();
    assert!(prob.params_from_form(&omega).is_err());
}

#[test]
fn params_round_trip() {
    let prob = problem(2, 1);
    let mut sampler = Sampler::new(2, 1, 45);
    let p = random_params(&mut sampler, prob.num_params(), 0.7);
    let omega = prob.params_to_form(&p).unwrap();
    let back = prob.params_from_form(&omega).unwrap();
    for (a, b) in p.iter().zip(&back) {
        assert!((a - b).abs() < 1e-11);
    }
}

#[test]
fn minimize_from_flat_start_converges_immediately() {
    let prob = problem(2, 1);
    let zero = ConnectionForm::zero(2, 1);
    let p0 = prob.params_from_form(&zero).unwrap();
    let (_, report, traj) = prob.minimize(&p0).unwrap();
    assert_eq!(report.iterations, 0);
    assert!(report.action < 1e-12);
    assert!(report.r1 < 1e-12 && report.r2 < 1e-12);
    assert_eq!(traj.len(), 1);
}

#[test]
fn descent_from_perturbed_flat_point_reaches_vacuum() {
    let prob = problem(2, 1);
    let mut sampler = Sampler::new(2, 1, 46);
    // small perturbation of -i theta
    let mut p0 = random_params(&mut sampler, prob.num_params(), 0.02);
    let norm: f64 = p0.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.1 {
        for x in &mut p0 {
            *x *= 0.1 / norm;
        }
    }
    let (_, report, traj) = prob.minimize(&p0).unwrap();
    assert!(report.action < 1e-10, "action {}", report.action);
    assert!(report.grad_norm < 1e-8, "grad {}", report.grad_norm);
    assert!(report.r1 < 1e-5 && report.r2 < 1e-5, "r1={} r2={}", report.r1, report.r2);
    // monotone trajectory
    for w in traj.windows(2) {
        assert!(w[1].action <= w[0].action + 1e-15);
    }
}

#[test]
fn unconstrained_descent_reports_finite_monotone_trajectory() {
    let mut cfg = ActionConfig::new(2, 1);
    cfg.restrict_compatible = false;
    cfg.max_iters = 200;
    let prob = YmhProblem::new(cfg).unwrap();
    let mut sampler = Sampler::new(2, 1, 47);
    let p0 = random_params(&mut sampler, prob.num_params(), 0.8);
    let (_, report, traj) = prob.minimize(&p0).unwrap();
    assert!(report.action.is_finite());
    assert!(report.grad_norm.is_finite());
    assert!(report.r1.is_finite() && report.r2.is_finite());
    for w in traj.windows(2) {
        assert!(w[1].action <= w[0].action + 1e-15);
    }
}

#[test]
fn config_validation() {
    let mut cfg = ActionConfig::new(1, 1);
    assert!(YmhProblem::new(cfg.clone()).is_err());
    cfg.n = 2;
    cfg.d = 0;
    assert!(YmhProblem::new(cfg.clone()).is_err());
    cfg.d = 1;
    cfg.grad_tol = 0.0;
    assert!(YmhProblem::new(cfg.clone()).is_err());
    cfg.grad_tol = 1e-8;
    cfg.cutoff = -1;
    assert!(YmhProblem::new(cfg).is_err());
}
