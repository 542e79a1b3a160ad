//! Connections on the free module A^n: special-unitary connection 1-forms,
//! curvature, gauge transformations, the Higgs-field decomposition, first-order
//! operators on sections (Atiyah operators), and the canonical flat splitting.

use num_complex::Complex64;

use crate::calculus::{AlgElement, Calculus, Derivation, NCForm};
use crate::error::{NcError, Result};
use crate::fourier::TrigPoly;

/// Grid resolution per axis for residual sup-norms.
const GRID: usize = 16;

/// A noncommutative connection 1-form omega.  The general case is any degree-1
/// form; the special-unitary case is characterized by [`is_su_connection`].
#[derive(Clone, Debug)]
pub struct ConnectionForm {
    omega: NCForm,
}

impl ConnectionForm {
    pub fn new(omega: NCForm) -> Result<Self> {
        if omega.degree() != 1 {
            return Err(NcError::DegreeUnsupported(omega.degree()));
        }
        Ok(ConnectionForm { omega })
    }

    pub fn zero(n: usize, d: usize) -> Self {
        ConnectionForm { omega: NCForm::zero(n, d, 1) }
    }

    pub fn form(&self) -> &NCForm {
        &self.omega
    }

    pub fn n(&self) -> usize {
        self.omega.n()
    }

    pub fn d(&self) -> usize {
        self.omega.d()
    }

    /// omega(X) for a single derivation.
    pub fn eval(&self, calc: &Calculus, x: &Derivation) -> Result<AlgElement> {
        calc.form_eval(&self.omega, std::slice::from_ref(x))
    }

    /// The dx^mu coefficient.
    pub fn coeff_dx(&self, mu: usize) -> AlgElement {
        self.omega.coeff(&[mu], &[])
    }

    /// The theta^a coefficient.
    pub fn coeff_theta(&self, a: usize) -> AlgElement {
        self.omega.coeff(&[], &[a])
    }
}

/// Build the special-unitary connection form from its local gauge potential:
/// alpha = sum_mu A_mu dx^mu - i theta, so that alpha(X + ad_gamma) =
/// A(X) - gamma.
pub fn alpha_from_potential(calc: &Calculus, a: &[AlgElement]) -> Result<ConnectionForm> {
    let (n, d) = (calc.n(), calc.d());
    if a.len() != d {
        return Err(NcError::SizeMismatch(a.len(), d));
    }
    let mut omega = NCForm::zero(n, d, 1);
    for (mu, amu) in a.iter().enumerate() {
        if !amu.is_traceless(1e-12) {
            return Err(NcError::NotTraceless(amu.trace().max_coeff()));
        }
        if !amu.is_antihermitian(1e-12) {
            return Err(NcError::NotAntihermitian(amu.add(&amu.star())?.max_coeff()));
        }
        omega.add_term(&[mu], &[], amu)?;
    }
    Ok(ConnectionForm { omega: omega.sub(&calc.theta())? })
}

/// Residual of the special-unitary connection conditions: theta-block equal to
/// -i theta, traceless dx coefficients, antihermitian values on real
/// derivations.  Zero (below tol) iff omega is an SU connection form.
pub fn su_connection_residual(calc: &Calculus, omega: &ConnectionForm) -> Result<f64> {
    let theta = calc.theta();
    let mut r: f64 = 0.0;
    for a in 0..calc.basis().len() {
        let diff = omega.coeff_theta(a).add(&theta.coeff(&[], &[a]))?;
        r = r.max(diff.max_coeff());
    }
    for mu in 0..calc.d() {
        let c = omega.coeff_dx(mu);
        r = r.max(c.trace().max_coeff());
        r = r.max(c.add(&c.star())?.max_coeff());
    }
    Ok(r)
}

pub fn is_su_connection(calc: &Calculus, omega: &ConnectionForm, tol: f64) -> Result<bool> {
    Ok(su_connection_residual(calc, omega)? <= tol)
}

/// Extract the gauge potential A_mu of an SU connection form.
pub fn potential_of(calc: &Calculus, alpha: &ConnectionForm) -> Vec<AlgElement> {
    (0..calc.d()).map(|mu| alpha.coeff_dx(mu)).collect()
}

/// Curvature 2-form dhat(omega) + omega ^ omega.  Evaluated on a pair (X, Y)
/// it equals dhat(omega)(X,Y) + [omega(X), omega(Y)].
pub fn curvature(calc: &Calculus, omega: &ConnectionForm) -> Result<NCForm> {
    let dw = calc.dhat(&omega.omega)?;
    let ww = calc.wedge(&omega.omega, &omega.omega)?;
    dw.add(&ww)
}

/// The covariant derivative on the algebra viewed as a right module over
/// itself: X S + omega(X) S.
pub fn connection_apply(
    calc: &Calculus,
    omega: &ConnectionForm,
    x: &Derivation,
    s: &AlgElement,
) -> Result<AlgElement> {
    let xs = x.apply(s)?;
    xs.add(&omega.eval(calc, x)?.mul(s)?)
}

/// Residual of compatibility with the hermitian structure <S, S'> = S* S':
/// max over a spanning set of real derivations of |omega(X)* + omega(X)|.
pub fn hermitian_residual(calc: &Calculus, omega: &ConnectionForm) -> Result<f64> {
    let mut r: f64 = 0.0;
    for mu in 0..calc.d() {
        let x = Derivation::coordinate(calc.n(), calc.d(), mu)?;
        let v = omega.eval(calc, &x)?;
        r = r.max(v.add(&v.star())?.max_coeff());
    }
    for a in 0..calc.basis().len() {
        // ad_{i E_a} is real; omega is theta-linear so the factor i drops out
        // of the hermiticity defect up to rotation.
        let m = calc.basis().elem(a).scale(Complex64::new(0.0, 1.0));
        let x = Derivation::inner_const(calc.d(), &m)?;
        let v = omega.eval(calc, &x)?;
        r = r.max(v.add(&v.star())?.max_coeff());
    }
    Ok(r)
}

pub fn is_compatible_hermitian(calc: &Calculus, omega: &ConnectionForm, tol: f64) -> Result<bool> {
    Ok(hermitian_residual(calc, omega)? <= tol)
}

/// Gauge transformation omega -> U* omega U + U* dhat(U) for unitary U.
pub fn gauge_transform(
    calc: &Calculus,
    omega: &ConnectionForm,
    u: &AlgElement,
) -> Result<ConnectionForm> {
    u.is_unitary(1e-10)?;
    let ustar = u.star();
    let conj = omega.omega.left_mul(&ustar)?.right_mul(u)?;
    let du = calc.dhat(&NCForm::from_alg(u))?;
    let inhom = du.left_mul(&ustar)?;
    ConnectionForm::new(conj.add(&inhom)?)
}

/// Infinitesimal gauge action on an SU connection form: the Lie derivative
/// along ad_xi, which equals -dhat(xi) - [alpha, xi].
pub fn lie_gauge_action(
    calc: &Calculus,
    alpha: &ConnectionForm,
    xi: &AlgElement,
) -> Result<NCForm> {
    if !xi.is_traceless(1e-10) {
        return Err(NcError::NotTraceless(xi.trace().max_coeff()));
    }
    if !xi.is_antihermitian(1e-10) {
        return Err(NcError::NotAntihermitian(xi.add(&xi.star())?.max_coeff()));
    }
    let x = Derivation::inner(xi.clone())?;
    calc.lie_derive(&x, &alpha.omega)
}

/// Higgs-field data of a connection relative to an SU reference: the manifold
/// 1-form components a_mu and the linear map B on traceless matrices stored on
/// the orthogonal basis, B_a = B(E_a).
#[derive(Clone, Debug)]
pub struct HiggsData {
    pub a: Vec<AlgElement>,
    pub b: Vec<AlgElement>,
}

impl HiggsData {
    /// TrigPoly-linear extension of B to an arbitrary traceless argument.
    pub fn b_apply(&self, calc: &Calculus, gamma: &AlgElement) -> Result<AlgElement> {
        let coeffs = gamma.basis_coeffs(calc.basis())?;
        let mut out = AlgElement::zeros(gamma.n(), gamma.d());
        for (ba, c) in self.b.iter().zip(&coeffs) {
            out = out.add(&ba.scale_fn(c)?)?;
        }
        Ok(out)
    }

    /// a evaluated on a vector field given by its anchor components.
    pub fn a_apply(&self, f: &[TrigPoly]) -> Result<AlgElement> {
        let mut out = AlgElement::zeros(self.b.first().map_or(1, |b| b.n()), f.len());
        for (amu, fmu) in self.a.iter().zip(f) {
            out = out.add(&amu.scale_fn(fmu)?)?;
        }
        Ok(out)
    }
}

/// Horizontal lift of the coordinate field d_mu with respect to an SU
/// reference: the unique derivation over d_mu on which alpha_ref vanishes.
pub fn horizontal_lift(calc: &Calculus, alpha_ref: &ConnectionForm, mu: usize) -> Result<Derivation> {
    if mu >= calc.d() {
        return Err(NcError::AxisOutOfRange { axis: mu, dim: calc.d() });
    }
    let mut vector = vec![TrigPoly::zero(calc.d()); calc.d()];
    vector[mu] = TrigPoly::one(calc.d());
    Derivation::new(vector, alpha_ref.coeff_dx(mu))
}

/// Split omega = alpha_ref + (extra part), and decompose the extra part as
/// extra(X + ad_gamma) = a(X) - B(alpha_ref(X + ad_gamma)).  Returns the extra
/// 1-form together with the (a, B) data.
pub fn decompose_omega(
    calc: &Calculus,
    omega: &ConnectionForm,
    alpha_ref: &ConnectionForm,
) -> Result<(NCForm, HiggsData)> {
    let su_res = su_connection_residual(calc, alpha_ref)?;
    if su_res > 1e-10 {
        return Err(NcError::NotSuConnection(su_res));
    }
    let extra = omega.omega.sub(&alpha_ref.omega)?;
    let mut a = Vec::with_capacity(calc.d());
    for mu in 0..calc.d() {
        let lift = horizontal_lift(calc, alpha_ref, mu)?;
        a.push(calc.form_eval(&extra, &[lift])?);
    }
    let mut b = Vec::with_capacity(calc.basis().len());
    for ea in 0..calc.basis().len() {
        let x = Derivation::inner_const(calc.d(), calc.basis().elem(ea))?;
        b.push(calc.form_eval(&extra, &[x])?);
    }
    Ok((extra, HiggsData { a, b }))
}

/// Horizontality residuals of Higgs data: r1 measures failure of B to be a
/// Lie-algebra homomorphism, r2 the failure of B to be covariantly constant
/// between the reference connection and its a-shift.  Norms are sup over a
/// uniform grid.
pub fn higgs_conditions(
    calc: &Calculus,
    h: &HiggsData,
    alpha_ref: &ConnectionForm,
) -> Result<(f64, f64)> {
    let basis = calc.basis();
    let m = basis.len();
    let mut r1: f64 = 0.0;
    for a in 0..m {
        for bidx in a + 1..m {
            let lhs = h.b[a].comm(&h.b[bidx])?;
            let mut rhs = AlgElement::zeros(calc.n(), calc.d());
            for c in 0..m {
                let s = basis.structure_const(a, bidx, c);
                if s.norm() > 0.0 {
                    rhs = rhs.add(&h.b[c].scale(s))?;
                }
            }
            r1 = r1.max(lhs.sub(&rhs)?.sup_norm_grid(GRID));
        }
    }
    let pot = potential_of(calc, alpha_ref);
    let mut r2: f64 = 0.0;
    for mu in 0..calc.d() {
        let shifted = pot[mu].add(&h.a[mu])?;
        for a in 0..m {
            let ea = AlgElement::from_matrix(calc.d(), basis.elem(a));
            let lhs = h.b[a].partial(mu)?.add(&shifted.comm(&h.b[a])?)?;
            let nabla_ea = pot[mu].comm(&ea)?;
            let rhs = h.b_apply(calc, &nabla_ea)?;
            r2 = r2.max(lhs.sub(&rhs)?.sup_norm_grid(GRID));
        }
    }
    Ok((r1, r2))
}

/// The five labeled groups of the curvature of omega relative to an SU
/// reference.  Each group is an evaluator on a pair of derivations; the groups
/// sum to curvature(omega) evaluated on the same pair.
#[derive(Clone, Debug)]
pub struct CurvatureDecomposition {
    alpha_ref: ConnectionForm,
    pot: Vec<AlgElement>,
    higgs: HiggsData,
}

pub const CURVATURE_GROUP_LABELS: [&str; 5] = [
    "reference_curvature",
    "field_strength_a",
    "covariant_b_x",
    "covariant_b_y",
    "bracket_b",
];

impl CurvatureDecomposition {
    pub fn higgs(&self) -> &HiggsData {
        &self.higgs
    }

    /// nabla_X S = X S + [A(X), S] using only the vector part of x.
    fn nabla(&self, x: &Derivation, s: &AlgElement) -> Result<AlgElement> {
        let ax = self.pot_apply(x.anchor())?;
        x.apply_vector(s)?.add(&ax.comm(s)?)
    }

    fn pot_apply(&self, f: &[TrigPoly]) -> Result<AlgElement> {
        let mut out = AlgElement::zeros(self.alpha_ref.n(), self.alpha_ref.d());
        for (amu, fmu) in self.pot.iter().zip(f) {
            out = out.add(&amu.scale_fn(fmu)?)?;
        }
        Ok(out)
    }

    /// Evaluate the five groups on a pair of derivations.
    pub fn groups(&self, calc: &Calculus, x: &Derivation, y: &Derivation) -> Result<[AlgElement; 5]> {
        let xy = x.bracket(y)?;
        let ax = self.pot_apply(x.anchor())?;
        let ay = self.pot_apply(y.anchor())?;
        let axy = self.pot_apply(xy.anchor())?;
        // group 1: curvature of the reference potential on the anchors
        let g1 = x
            .apply_vector(&ay)?
            .sub(&y.apply_vector(&ax)?)?
            .sub(&axy)?
            .add(&ax.comm(&ay)?)?;
        // group 2: covariant exterior derivative of a plus its bracket
        let a_x = self.higgs.a_apply(x.anchor())?;
        let a_y = self.higgs.a_apply(y.anchor())?;
        let a_xy = self.higgs.a_apply(xy.anchor())?;
        let g2 = self
            .nabla(x, &a_y)?
            .sub(&self.nabla(y, &a_x)?)?
            .sub(&a_xy)?
            .add(&a_x.comm(&a_y)?)?;
        // groups 3/4: covariant derivatives of B along each slot, shifted by a
        let px = self.alpha_ref.eval(calc, x)?;
        let py = self.alpha_ref.eval(calc, y)?;
        let bx = self.higgs.b_apply(calc, &px)?;
        let by = self.higgs.b_apply(calc, &py)?;
        let g3 = self.nabla(x, &by)?.add(&a_x.comm(&by)?)?.neg();
        let g4 = self.nabla(y, &bx)?.add(&a_y.comm(&bx)?)?;
        // group 5: bracket of the B-images plus B of the reference form on the
        // derivation bracket
        let pxy = self.alpha_ref.eval(calc, &xy)?;
        let g5 = bx.comm(&by)?.add(&self.higgs.b_apply(calc, &pxy)?)?;
        Ok([g1, g2, g3, g4, g5])
    }

    /// Sum of the five groups.
    pub fn total(&self, calc: &Calculus, x: &Derivation, y: &Derivation) -> Result<AlgElement> {
        let gs = self.groups(calc, x, y)?;
        let mut out = AlgElement::zeros(self.alpha_ref.n(), self.alpha_ref.d());
        for g in &gs {
            out = out.add(g)?;
        }
        Ok(out)
    }
}

pub fn curvature_decomposition(
    calc: &Calculus,
    omega: &ConnectionForm,
    alpha_ref: &ConnectionForm,
) -> Result<CurvatureDecomposition> {
    let (_, higgs) = decompose_omega(calc, omega, alpha_ref)?;
    let pot = potential_of(calc, alpha_ref);
    Ok(CurvatureDecomposition { alpha_ref: alpha_ref.clone(), pot, higgs })
}

/// First-order differential operator on sections of the free module: a vector
/// field plus a zero-order matrix part, e -> X(e) + A e.
#[derive(Clone, Debug)]
pub struct AtiyahOp {
    x: Vec<TrigPoly>,
    a: AlgElement,
}

impl AtiyahOp {
    pub fn new(x: Vec<TrigPoly>, a: AlgElement) -> Result<Self> {
        if x.len() != a.d() {
            return Err(NcError::DimMismatch(x.len(), a.d()));
        }
        for f in &x {
            if f.dim() != a.d() {
                return Err(NcError::DimMismatch(f.dim(), a.d()));
            }
        }
        Ok(AtiyahOp { x, a })
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn d(&self) -> usize {
        self.a.d()
    }

    /// The symbol: the underlying vector field.
    pub fn symbol(&self) -> &[TrigPoly] {
        &self.x
    }

    pub fn matrix_part(&self) -> &AlgElement {
        &self.a
    }

    /// Apply to a section, an n-vector of functions.
    pub fn apply_section(&self, e: &[TrigPoly]) -> Result<Vec<TrigPoly>> {
        let n = self.n();
        if e.len() != n {
            return Err(NcError::SizeMismatch(e.len(), n));
        }
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut comp = TrigPoly::zero(self.d());
            for (mu, fmu) in self.x.iter().enumerate() {
                comp = comp.add(&fmu.mul(&e[i].partial(mu)?)?)?;
            }
            for j in 0..n {
                comp = comp.add(&self.a.entry(i, j).mul(&e[j])?)?;
            }
            out.push(comp);
        }
        Ok(out)
    }

    /// Operator commutator, again first order: ([X, X'], X(A') - X'(A) + [A, A']).
    pub fn commutator(&self, other: &AtiyahOp) -> Result<AtiyahOp> {
        if self.n() != other.n() || self.d() != other.d() {
            return Err(NcError::SizeMismatch(other.n(), self.n()));
        }
        let d = self.d();
        let mut x = Vec::with_capacity(d);
        for nu in 0..d {
            let mut comp = TrigPoly::zero(d);
            for mu in 0..d {
                comp = comp.add(&self.x[mu].mul(&other.x[nu].partial(mu)?)?)?;
                comp = comp.sub(&other.x[mu].mul(&self.x[nu].partial(mu)?)?)?;
            }
            x.push(comp);
        }
        let dx = Derivation::new(self.x.clone(), AlgElement::zeros(self.n(), d))?;
        let dy = Derivation::new(other.x.clone(), AlgElement::zeros(self.n(), d))?;
        let a = dx
            .apply_vector(&other.a)?
            .sub(&dy.apply_vector(&self.a)?)?
            .add(&self.a.comm(&other.a)?)?;
        AtiyahOp::new(x, a)
    }

    /// The derivation S -> [T, S]; the central part of the matrix component
    /// acts trivially and is projected away.
    pub fn to_derivation(&self) -> Result<Derivation> {
        Derivation::new(self.x.clone(), self.a.theta_project())
    }
}

/// The canonical splitting: D(X + ad_gamma) = nabla^ref_X - alpha_ref applied,
/// which reduces locally to the operator with symbol X and matrix part
/// A(X) - alpha_ref(X + ad_gamma).  Independent of the SU reference.
pub fn d_zero(calc: &Calculus, x: &Derivation, alpha_ref: &ConnectionForm) -> Result<AtiyahOp> {
    let su_res = su_connection_residual(calc, alpha_ref)?;
    if su_res > 1e-10 {
        return Err(NcError::NotSuConnection(su_res));
    }
    let pot = potential_of(calc, alpha_ref);
    let mut ax = AlgElement::zeros(calc.n(), calc.d());
    for (mu, amu) in pot.iter().enumerate() {
        ax = ax.add(&amu.scale_fn(x.vector_comp(mu))?)?;
    }
    let a = ax.sub(&alpha_ref.eval(calc, x)?)?;
    AtiyahOp::new(x.anchor().to_vec(), a)
}

/// A splitting of the Atiyah sequence: the canonical one shifted by a central
/// 1-form phi, D(X) = D0(X) + phi(X) Id.
#[derive(Clone, Debug)]
pub struct Splitting {
    alpha_ref: ConnectionForm,
    phi: Option<NCForm>,
}

impl Splitting {
    pub fn canonical(alpha_ref: ConnectionForm) -> Self {
        Splitting { alpha_ref, phi: None }
    }

    pub fn with_central_shift(alpha_ref: ConnectionForm, phi: NCForm) -> Result<Self> {
        if phi.degree() != 1 {
            return Err(NcError::DegreeUnsupported(phi.degree()));
        }
        for (_, _, coef) in phi.iter_terms() {
            if !coef.is_central(1e-12) {
                return Err(NcError::InvalidInput(
                    "central shift must have central coefficients".into(),
                ));
            }
        }
        Ok(Splitting { alpha_ref, phi: Some(phi) })
    }

    pub fn operator(&self, calc: &Calculus, x: &Derivation) -> Result<AtiyahOp> {
        let base = d_zero(calc, x, &self.alpha_ref)?;
        match &self.phi {
            None => Ok(base),
            Some(phi) => {
                let shift = calc.form_eval(phi, std::slice::from_ref(x))?;
                AtiyahOp::new(base.x, base.a.add(&shift)?)
            }
        }
    }

    /// Left-connection action on a section: D(X) e.
    pub fn apply(&self, calc: &Calculus, x: &Derivation, e: &[TrigPoly]) -> Result<Vec<TrigPoly>> {
        self.operator(calc, x)?.apply_section(e)
    }

    /// Curvature obstruction [D(X), D(Y)] - D([X, Y]) as a zero-order
    /// endomorphism of sections.
    pub fn curvature_op(&self, calc: &Calculus, x: &Derivation, y: &Derivation) -> Result<AlgElement> {
        let dx = self.operator(calc, x)?;
        let dy = self.operator(calc, y)?;
        let comm = dx.commutator(&dy)?;
        let dxy = self.operator(calc, &x.bracket(y)?)?;
        for mu in 0..calc.d() {
            let res = comm.x[mu].sub(&dxy.x[mu])?.max_coeff();
            if res > 1e-12 {
                return Err(NcError::NotAnchorPreserving(res));
            }
        }
        comm.a.sub(&dxy.a)
    }
}

/// Pointwise residuals of the chart-transition relations for local connection
/// data under an SU(n) transition function g:
/// gamma' = g^-1 gamma g + g^-1 (X g) and the same inhomogeneous law for A(X),
/// plus the gluing of the combined form A(X) - gamma.
#[derive(Clone, Debug)]
pub struct TransitionReport {
    pub gamma_residual: f64,
    pub potential_residual: f64,
    pub gluing_residual: f64,
    pub trace_residual: f64,
}

/// Transport local data across a chart change: g^-1 s g + g^-1 (X g), with the
/// derivative of g taken exactly.
pub fn transition_transport(
    s: &AlgElement,
    g: &AlgElement,
    x: &Derivation,
) -> Result<AlgElement> {
    let ginv = g.unimodular_inverse()?;
    let xg = x.apply_vector(g)?;
    ginv.mul(&s.mul(g)?)?.add(&ginv.mul(&xg)?)
}

pub fn transition_check(
    gamma: &AlgElement,
    gamma_p: &AlgElement,
    a_x: &AlgElement,
    a_p_x: &AlgElement,
    g: &AlgElement,
    x: &Derivation,
    grid: usize,
) -> Result<TransitionReport> {
    g.is_unitary(1e-10)?;
    let det = g.det()?;
    let det_res = det.sub(&TrigPoly::one(g.d()))?.max_coeff();
    if det_res > 1e-10 {
        return Err(NcError::NotSpecial(det_res));
    }
    let gamma_t = transition_transport(gamma, g, x)?;
    let a_t = transition_transport(a_x, g, x)?;
    let ginv = g.unimodular_inverse()?;
    // homogeneous law for the combined local form A(X) - gamma
    let combined = a_x.sub(gamma)?;
    let combined_p = a_p_x.sub(gamma_p)?;
    let glued = ginv.mul(&combined.mul(g)?)?;
    // the inhomogeneous term g^-1 (X g) is traceless
    let xg = x.apply_vector(g)?;
    let inhom = ginv.mul(&xg)?;
    Ok(TransitionReport {
        gamma_residual: gamma_p.sub(&gamma_t)?.sup_norm_grid(grid),
        potential_residual: a_p_x.sub(&a_t)?.sup_norm_grid(grid),
        gluing_residual: combined_p.sub(&glued)?.sup_norm_grid(grid),
        trace_residual: inhom.trace().max_coeff(),
    })
}
