//! Integration tests for the form algebra: dual pairings, wedge signs, the
//! differential, the Koszul oracle and the Cartan operations.

use ncgeom::sampling::Sampler;
use ncgeom::{AlgElement, Calculus, Derivation, Matrix, NCForm, TrigPoly};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli_alg(d: usize, a: usize) -> AlgElement {
    AlgElement::from_matrix(d, &Matrix::pauli(a))
}

fn e_ix(d: usize) -> TrigPoly {
    let mut k = vec![0i64; d];
    k[0] = 1;
    TrigPoly::monomial(d, &k, c(1.0, 0.0))
}

#[test]
fn dual_basis_pairings() {
    let calc = Calculus::new(2, 2).unwrap();
    // (dx^0)(d_0) = 1
    let mut dx0 = NCForm::zero(2, 2, 1);
    dx0.add_term(&[0], &[], &AlgElement::identity(2, 2)).unwrap();
    let d0 = Derivation::coordinate(2, 2, 0).unwrap();
    let val = calc.form_eval(&dx0, &[d0.clone()]).unwrap();
    assert!(val.approx_eq(&AlgElement::identity(2, 2), 1e-14));
    // (theta^a)(ad_{E_b}) = delta^a_b
    for a in 0..3 {
        let mut th = NCForm::zero(2, 2, 1);
        th.add_term(&[], &[a], &AlgElement::identity(2, 2)).unwrap();
        for b in 0..3 {
            let x = Derivation::inner_const(2, calc.basis().elem(b)).unwrap();
            let val = calc.form_eval(&th, &[x]).unwrap();
            let expect = if a == b {
                AlgElement::identity(2, 2)
            } else {
                AlgElement::zeros(2, 2)
            };
            assert!(val.approx_eq(&expect, 1e-13));
        }
    }
    // (dx^0 ^ theta^0)((d_0, 0), (0, s1)) = 1
    let mut mixed = NCForm::zero(2, 2, 2);
    mixed.add_term(&[0], &[0], &AlgElement::identity(2, 2)).unwrap();
    let x1 = Derivation::inner_const(2, &Matrix::pauli(1)).unwrap();
    let val = calc.form_eval(&mixed, &[d0, x1]).unwrap();
    assert!(val.approx_eq(&AlgElement::identity(2, 2), 1e-13));
}

#[test]
fn theta_reconstructs_inner_parts() {
    let calc = Calculus::new(2, 1).unwrap();
    let theta = calc.theta();
    let s2 = pauli_alg(1, 2);
    let x = Derivation::inner(s2.clone()).unwrap();
    assert!(calc.form_eval(&theta, &[x]).unwrap().approx_eq(&s2, 1e-13));
    let d0 = Derivation::coordinate(2, 1, 0).unwrap();
    assert!(calc.form_eval(&theta, &[d0]).unwrap().is_zero(1e-14));
    // with a TrigPoly-valued inner part as well
    let mut sampler = Sampler::new(2, 1, 11);
    let gamma = sampler.traceless_alg();
    let x = Derivation::inner(gamma.clone()).unwrap();
    assert!(calc.form_eval(&theta, &[x]).unwrap().approx_eq(&gamma, 1e-12));
}

#[test]
fn structure_equation() {
    // dhat(i theta) - i theta ^ i theta = 0 for n = 2, 3, 4
    for n in 2..=4 {
        for d in 1..=2 {
            let calc = Calculus::new(n, d).unwrap();
            let theta = calc.theta();
            let lhs = calc.dhat(&theta).unwrap();
            let rhs = calc.wedge(&theta, &theta).unwrap();
            assert!(
                lhs.sub(&rhs).unwrap().is_zero(1e-12),
                "structure equation failed for n={n} d={d}"
            );
        }
    }
}

#[test]
fn wedge_examples() {
    let calc = Calculus::new(2, 2).unwrap();
    // dx^0 ^ dx^0 = 0
    let mut dx0 = NCForm::zero(2, 2, 1);
    dx0.add_term(&[0], &[], &AlgElement::identity(2, 2)).unwrap();
    assert!(calc.wedge(&dx0, &dx0).unwrap().is_zero(0.0));
    // noncommutative coefficients: (s1 th^0)^(s2 th^1) = s1 s2 th^0^th^1
    let mut f1 = NCForm::zero(2, 2, 1);
    f1.add_term(&[], &[0], &pauli_alg(2, 1)).unwrap();
    let mut f2 = NCForm::zero(2, 2, 1);
    f2.add_term(&[], &[1], &pauli_alg(2, 2)).unwrap();
    let w12 = calc.wedge(&f1, &f2).unwrap();
    let w21 = calc.wedge(&f2, &f1).unwrap();
    let s1s2 = pauli_alg(2, 1).mul(&pauli_alg(2, 2)).unwrap();
    let s2s1 = pauli_alg(2, 2).mul(&pauli_alg(2, 1)).unwrap();
    assert!(w12.coeff(&[], &[0, 1]).approx_eq(&s1s2, 1e-14));
    assert!(w21.coeff(&[], &[0, 1]).approx_eq(&s2s1.neg(), 1e-14));
    // both against the evaluation oracle on (ad_E0, ad_E1)
    let x0 = Derivation::inner_const(2, calc.basis().elem(0)).unwrap();
    let x1 = Derivation::inner_const(2, calc.basis().elem(1)).unwrap();
    let ev = calc.form_eval(&w12, &[x0.clone(), x1.clone()]).unwrap();
    assert!(ev.approx_eq(&s1s2, 1e-13));
    let ev = calc.form_eval(&w21, &[x0, x1]).unwrap();
    assert!(ev.approx_eq(&s2s1.neg(), 1e-13));
    // unit
    let one = NCForm::from_alg(&AlgElement::identity(2, 2));
    let mut sampler = Sampler::new(2, 2, 3);
    let omega = sampler.form(&calc, 1, 1);
    assert!(calc.wedge(&one, &omega).unwrap().approx_eq(&omega, 1e-13));
    assert!(calc.wedge(&omega, &one).unwrap().approx_eq(&omega, 1e-13));
}

#[test]
fn dhat_on_central_zero_form() {
    let calc = Calculus::new(2, 2).unwrap();
    let s = AlgElement::central(2, &e_ix(2));
    let ds = calc.dhat(&NCForm::from_alg(&s)).unwrap();
    // i e^{ix1} dx^0, no theta component
    let expect_coef = s.scale(c(0.0, 1.0));
    assert!(ds.coeff(&[0], &[]).approx_eq(&expect_coef, 1e-14));
    assert!(ds.coeff(&[1], &[]).is_zero(1e-14));
    assert!(ds.is_horizontal(1e-14));
}

#[test]
fn dhat_on_matrix_zero_form_is_ad_theta() {
    // restricted to A, dhat = d + ad_{i theta}
    let calc = Calculus::new(2, 1).unwrap();
    let s = pauli_alg(1, 1);
    let ds = calc.dhat(&NCForm::from_alg(&s)).unwrap();
    let x = Derivation::inner_const(1, &Matrix::pauli(3)).unwrap();
    let val = calc.form_eval(&ds, &[x]).unwrap();
    let expect = pauli_alg(1, 2).scale(c(0.0, 2.0)); // [s3, s1] = 2i s2
    assert!(val.approx_eq(&expect, 1e-13));
}

#[test]
fn dhat_squares_to_zero_on_random_forms() {
    for (n, d) in [(2usize, 1usize), (2, 2), (3, 1)] {
        let calc = Calculus::new(n, d).unwrap();
        let mut sampler = Sampler::new(n, d, 42);
        let m = n * n - 1;
        for dx_deg in 0..=d.min(2) {
            for th_deg in 0..=m.min(2) {
                for _ in 0..3 {
                    let omega = sampler.form(&calc, dx_deg, th_deg);
                    let dd = calc.dhat(&calc.dhat(&omega).unwrap()).unwrap();
                    assert!(
                        dd.is_zero(1e-11),
                        "dhat^2 != 0 at n={n} d={d} bidegree=({dx_deg},{th_deg}): {}",
                        dd.max_coeff()
                    );
                }
            }
        }
    }
}

#[test]
fn graded_leibniz() {
    let calc = Calculus::new(2, 2).unwrap();
    let mut sampler = Sampler::new(2, 2, 7);
    for (p1, q1, p2, q2) in [(0, 0, 0, 1), (1, 0, 0, 1), (0, 1, 1, 1), (1, 1, 1, 0)] {
        let a = sampler.form(&calc, p1, q1);
        let b = sampler.form(&calc, p2, q2);
        let lhs = calc.dhat(&calc.wedge(&a, &b).unwrap()).unwrap();
        let mut rhs = calc.wedge(&calc.dhat(&a).unwrap(), &b).unwrap();
        let sign = if (p1 + q1) % 2 == 0 { 1.0 } else { -1.0 };
        rhs = rhs
            .add(&calc.wedge(&a, &calc.dhat(&b).unwrap()).unwrap().scale(c(sign, 0.0)))
            .unwrap();
        assert!(
            lhs.sub(&rhs).unwrap().is_zero(1e-11),
            "Leibniz failed at bidegrees ({p1},{q1})^({p2},{q2})"
        );
    }
}

#[test]
fn koszul_zero_form_is_application() {
    let calc = Calculus::new(2, 1).unwrap();
    let mut sampler = Sampler::new(2, 1, 5);
    let s = sampler.alg();
    let x = sampler.derivation(&calc, false);
    let val = calc.koszul_eval(&NCForm::from_alg(&s), &[x.clone()]).unwrap();
    assert!(val.approx_eq(&x.apply(&s).unwrap(), 1e-12));
}

#[test]
fn koszul_theta_on_inner_pair_is_commutator() {
    let calc = Calculus::new(2, 1).unwrap();
    let mut sampler = Sampler::new(2, 1, 6);
    let gamma = sampler.traceless_alg();
    let eta = sampler.traceless_alg();
    let x = Derivation::inner(gamma.clone()).unwrap();
    let y = Derivation::inner(eta.clone()).unwrap();
    let val = calc.koszul_eval(&calc.theta(), &[x, y]).unwrap();
    assert!(val.approx_eq(&gamma.comm(&eta).unwrap(), 1e-11));
}

#[test]
fn koszul_oracle_equals_basis_differential() {
    for (n, d) in [(2usize, 1usize), (2, 2), (3, 1)] {
        let calc = Calculus::new(n, d).unwrap();
        let mut sampler = Sampler::new(n, d, 99);
        for (dx_deg, th_deg) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            for _ in 0..3 {
                let omega = sampler.form(&calc, dx_deg, th_deg);
                let ders: Vec<Derivation> = (0..dx_deg + th_deg + 1)
                    .map(|_| sampler.derivation(&calc, false))
                    .collect();
                let lhs = calc.form_eval(&calc.dhat(&omega).unwrap(), &ders).unwrap();
                let rhs = calc.koszul_eval(&omega, &ders).unwrap();
                assert!(
                    lhs.sub(&rhs).unwrap().is_zero(1e-10),
                    "Koszul mismatch at n={n} d={d} bidegree ({dx_deg},{th_deg})"
                );
            }
        }
    }
}

#[test]
fn form_eval_multilinear_antisymmetric() {
    let calc = Calculus::new(2, 2).unwrap();
    let mut sampler = Sampler::new(2, 2, 13);
    let omega = sampler.form(&calc, 1, 1);
    let x = sampler.derivation(&calc, false);
    let y = sampler.derivation(&calc, false);
    // antisymmetry
    let v1 = calc.form_eval(&omega, &[x.clone(), y.clone()]).unwrap();
    let v2 = calc.form_eval(&omega, &[y.clone(), x.clone()]).unwrap();
    assert!(v1.add(&v2).unwrap().is_zero(1e-11));
    // Z(A)-linearity
    let f = sampler.trigpoly();
    let fx = x.scale_fn(&f).unwrap();
    let v3 = calc.form_eval(&omega, &[fx, y]).unwrap();
    assert!(v3.approx_eq(&v1.scale_fn(&f).unwrap(), 1e-11));
}

#[test]
fn contraction_and_cartan() {
    let calc = Calculus::new(2, 2).unwrap();
    // i_{d0} dx^0 = 1
    let mut dx0 = NCForm::zero(2, 2, 1);
    dx0.add_term(&[0], &[], &AlgElement::identity(2, 2)).unwrap();
    let d0 = Derivation::coordinate(2, 2, 0).unwrap();
    let contracted = calc.contract(&d0, &dx0).unwrap();
    assert!(contracted.coeff(&[], &[]).approx_eq(&AlgElement::identity(2, 2), 1e-14));
    // i_X i_X = 0 and the two Cartan identities on random data
    let mut sampler = Sampler::new(2, 2, 21);
    let omega = sampler.form(&calc, 1, 1);
    let x = sampler.derivation(&calc, false);
    let y = sampler.derivation(&calc, false);
    let ixix = calc.contract(&x, &calc.contract(&x, &omega).unwrap()).unwrap();
    assert!(ixix.is_zero(1e-11));
    // [L_X, i_Y] = i_[X,Y]
    let lhs = calc
        .contract(&y, &calc.lie_derive(&x, &omega).unwrap())
        .unwrap()
        .sub(&calc.lie_derive(&x, &calc.contract(&y, &omega).unwrap()).unwrap())
        .unwrap()
        .neg();
    let rhs = calc.contract(&x.bracket(&y).unwrap(), &omega).unwrap();
    assert!(lhs.sub(&rhs).unwrap().is_zero(1e-10));
}

#[test]
fn form_star_examples() {
    let calc = Calculus::new(2, 1).unwrap();
    let theta_i = calc.theta();
    // i theta is antihermitian
    assert!(calc.is_antihermitian_form(&theta_i, 1e-14).unwrap());
    // theta = -i (i theta) is hermitian ("real")
    let theta = theta_i.scale(c(0.0, -1.0));
    assert!(calc.is_hermitian_form(&theta, 1e-14).unwrap());
    // direct check of its defining property on real derivations
    let mut sampler = Sampler::new(2, 1, 31);
    for _ in 0..5 {
        let x = sampler.derivation(&calc, true);
        let val = calc.form_eval(&theta_i, &[x]).unwrap();
        assert!(val.star().add(&val).unwrap().is_zero(1e-11));
    }
    // zero form is both
    let zero = NCForm::zero(2, 1, 1);
    assert!(calc.is_hermitian_form(&zero, 0.0).unwrap());
    assert!(calc.is_antihermitian_form(&zero, 0.0).unwrap());
    // degree >= 2 rejected
    let two = NCForm::zero(2, 1, 2);
    assert!(calc.form_star(&two).is_err());
}

#[test]
fn star_consistency_on_real_derivations() {
    // omega*(X) = (omega(X))* for real X, for random 1-forms
    let calc = Calculus::new(2, 2).unwrap();
    let mut sampler = Sampler::new(2, 2, 17);
    for _ in 0..5 {
        let omega = sampler
            .form(&calc, 1, 0)
            .add(&sampler.form(&calc, 0, 1))
            .unwrap();
        let starred = calc.form_star(&omega).unwrap();
        let x = sampler.derivation(&calc, true);
        let lhs = calc.form_eval(&starred, &[x.clone()]).unwrap();
        let rhs = calc.form_eval(&omega, &[x]).unwrap().star();
        assert!(lhs.approx_eq(&rhs, 1e-10));
    }
}

#[test]
fn horizontal_and_basic_predicates() {
    let calc = Calculus::new(2, 2).unwrap();
    // central coefficient times dx^0 is basic
    let mut basic = NCForm::zero(2, 2, 1);
    basic
        .add_term(&[0], &[], &AlgElement::central(2, &TrigPoly::cos(2, &[1, 0])))
        .unwrap();
    assert!(basic.is_horizontal(0.0));
    assert!(calc.is_basic(&basic, 1e-12).unwrap());
    // matrix coefficient: horizontal but not basic
    let mut horiz = NCForm::zero(2, 2, 1);
    horiz.add_term(&[0], &[], &pauli_alg(2, 3)).unwrap();
    assert!(horiz.is_horizontal(0.0));
    assert!(!calc.is_basic(&horiz, 1e-12).unwrap());
    // theta term: not horizontal
    assert!(!calc.theta().is_horizontal(1e-12));
}

#[test]
fn bracket_matches_operator_commutator() {
    let calc = Calculus::new(2, 2).unwrap();
    let mut sampler = Sampler::new(2, 2, 55);
    for _ in 0..5 {
        let x = sampler.derivation(&calc, false);
        let y = sampler.derivation(&calc, false);
        let s = sampler.alg();
        let lhs = x.bracket(&y).unwrap().apply(&s).unwrap();
        let rhs = x
            .apply(&y.apply(&s).unwrap())
            .unwrap()
            .sub(&y.apply(&x.apply(&s).unwrap()).unwrap())
            .unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-10));
    }
}

#[test]
fn anchor_is_lie_homomorphism_and_algebroid_axioms() {
    let calc = Calculus::new(2, 2).unwrap();
    let mut sampler = Sampler::new(2, 2, 77);
    for _ in 0..5 {
        let x = sampler.derivation(&calc, false);
        let y = sampler.derivation(&calc, false);
        let b = x.bracket(&y).unwrap();
        // rho([X,Y]) = [rho X, rho Y] as vector fields: compare on a scalar
        let f = sampler.trigpoly();
        let lhs = b.apply_fn(&f).unwrap();
        let rhs = x
            .apply_fn(&y.apply_fn(&f).unwrap())
            .unwrap()
            .sub(&y.apply_fn(&x.apply_fn(&f).unwrap()).unwrap())
            .unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-10));
        // [X, fY] = f [X, Y] + (rho(X) f) Y
        let fy = y.scale_fn(&f).unwrap();
        let lhs = x.bracket(&fy).unwrap();
        let rhs = b
            .scale_fn(&f)
            .unwrap()
            .add(&y.scale_fn(&x.apply_fn(&f).unwrap()).unwrap())
            .unwrap();
        let diff_inner = lhs.inner_part().sub(rhs.inner_part()).unwrap();
        assert!(diff_inner.is_zero(1e-10));
        for mu in 0..2 {
            assert!(lhs.vector_comp(mu).sub(rhs.vector_comp(mu)).unwrap().is_zero(1e-10));
        }
    }
}

#[test]
fn form_json_round_trip() {
    let calc = Calculus::new(2, 1).unwrap();
    let mut sampler = Sampler::new(2, 1, 101);
    let omega = sampler.form(&calc, 1, 1);
    let text = serde_json::to_string(&omega).unwrap();
    let back: NCForm = serde_json::from_str(&text).unwrap();
    assert!(back.approx_eq(&omega, 0.0));
}

#[test]
fn wrong_arity_rejected() {
    let calc = Calculus::new(2, 1).unwrap();
    let theta = calc.theta();
    assert!(calc.form_eval(&theta, &[]).is_err());
    let x = Derivation::coordinate(2, 1, 0).unwrap();
    assert!(calc.koszul_eval(&theta, &[x]).is_err());
}
