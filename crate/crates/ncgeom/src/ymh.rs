//! Yang-Mills-Higgs action over connection 1-forms, its exact gradient on a
//! truncated Fourier parametrization, and gradient descent to vacua.
//!
//! Directions are orthonormalized: the coordinate fields d_mu (flat torus
//! metric) and the inner derivations ad_{E_a}/sqrt(2) (the basis satisfies
//! Tr(E_a E_b) = 2 delta_ab).  The action is the sum over direction pairs of
//! the integrated squared curvature component.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus::{AlgElement, Calculus, Derivation, NCForm};
use crate::connect::{
    curvature, decompose_omega, higgs_conditions, ConnectionForm,
};
use crate::error::{NcError, Result};
use crate::fourier::TrigPoly;

const SQRT2: f64 = std::f64::consts::SQRT_2;
const ARMIJO_C: f64 = 1e-4;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionConfig {
    pub n: usize,
    pub d: usize,
    /// Max |k_mu| per axis in the connection parametrization.
    pub cutoff: i64,
    /// Initial descent step.
    pub step: f64,
    pub max_iters: usize,
    /// Stopping threshold on the parameter-space gradient norm.
    pub grad_tol: f64,
    /// Constrain omega to be antihermitian on real derivations.
    pub restrict_compatible: bool,
}

impl ActionConfig {
    pub fn new(n: usize, d: usize) -> Self {
        ActionConfig {
            n,
            d,
            cutoff: 1,
            step: 0.1,
            max_iters: 2000,
            grad_tol: 1e-8,
            restrict_compatible: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(NcError::SizeTooSmall(self.n));
        }
        if self.d == 0 {
            return Err(NcError::InvalidInput("torus dimension must be positive".into()));
        }
        if self.cutoff < 0 {
            return Err(NcError::InvalidInput("cutoff must be nonnegative".into()));
        }
        if !(self.step > 0.0) || !(self.grad_tol > 0.0) {
            return Err(NcError::InvalidInput("step and grad_tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VacuumReport {
    pub action: f64,
    pub grad_norm: f64,
    pub curvature_norm: f64,
    pub r1: f64,
    pub r2: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub iter: usize,
    pub action: f64,
    pub grad_norm: f64,
    pub step: f64,
}

/// Where a parameter lives: a dx^mu coefficient or a theta^a coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Dx(usize),
    Th(usize),
}

/// One real parameter direction: slot x real scalar mode x constant matrix.
#[derive(Clone, Debug)]
struct ParamDir {
    slot: Slot,
    f: TrigPoly,
    m: AlgElement,
    /// <beta, beta> under Re integral Tr(M* M) f^2.
    norm2: f64,
}

/// The truncated optimization problem.
pub struct YmhProblem {
    calc: Calculus,
    cfg: ActionConfig,
    dirs: Vec<ParamDir>,
}

/// Real scalar modes up to the cutoff: the constant plus cos/sin of each
/// lexicographically positive frequency, with their L^2 norms.
fn scalar_modes(d: usize, cutoff: i64) -> Vec<(TrigPoly, f64)> {
    let mut out = vec![(TrigPoly::one(d), 1.0)];
    let mut k = vec![-cutoff; d];
    loop {
        if k.iter().any(|&x| x != 0) {
            // keep one representative of each +-k pair
            let lead = k.iter().find(|&&x| x != 0).copied().unwrap();
            if lead > 0 {
                out.push((TrigPoly::cos(d, &k), 0.5));
                out.push((TrigPoly::sin(d, &k), 0.5));
            }
        }
        // odometer over the cube [-cutoff, cutoff]^d
        let mut axis = 0;
        loop {
            if axis == d {
                return out;
            }
            k[axis] += 1;
            if k[axis] > cutoff {
                k[axis] = -cutoff;
                axis += 1;
            } else {
                break;
            }
        }
    }
}

impl YmhProblem {
    pub fn new(cfg: ActionConfig) -> Result<Self> {
        cfg.validate()?;
        let calc = Calculus::new(cfg.n, cfg.d)?;
        let (n, d) = (cfg.n, cfg.d);
        let m = calc.basis().len();
        // constant matrix directions per slot kind
        let mut herm: Vec<(AlgElement, f64)> = Vec::new();
        for a in 0..m {
            herm.push((AlgElement::from_matrix(d, calc.basis().elem(a)), 2.0));
        }
        herm.push((AlgElement::identity(n, d), n as f64));
        let antiherm: Vec<(AlgElement, f64)> = herm
            .iter()
            .map(|(h, t)| (h.scale(Complex64::new(0.0, 1.0)), *t))
            .collect();
        let modes = scalar_modes(d, cfg.cutoff);
        let mut dirs = Vec::new();
        let mut slots: Vec<Slot> = (0..d).map(Slot::Dx).collect();
        slots.extend((0..m).map(Slot::Th));
        for slot in slots {
            let mats: Vec<&(AlgElement, f64)> = if cfg.restrict_compatible {
                match slot {
                    Slot::Dx(_) => antiherm.iter().collect(),
                    Slot::Th(_) => herm.iter().collect(),
                }
            } else {
                herm.iter().chain(antiherm.iter()).collect()
            };
            for (mat, tr2) in mats {
                for (f, fn2) in &modes {
                    dirs.push(ParamDir {
                        slot,
                        f: f.clone(),
                        m: mat.clone(),
                        norm2: tr2 * fn2,
                    });
                }
            }
        }
        Ok(YmhProblem { calc, cfg, dirs })
    }

    pub fn calc(&self) -> &Calculus {
        &self.calc
    }

    pub fn config(&self) -> &ActionConfig {
        &self.cfg
    }

    pub fn num_params(&self) -> usize {
        self.dirs.len()
    }

    /// omega = -i theta + sum_i p_i beta_i.
    pub fn params_to_form(&self, p: &[f64]) -> Result<ConnectionForm> {
        if p.len() != self.dirs.len() {
            return Err(NcError::SizeMismatch(p.len(), self.dirs.len()));
        }
        let mut form = self.calc.theta().neg();
        for (pi, dir) in p.iter().zip(&self.dirs) {
            if *pi == 0.0 {
                continue;
            }
            let coef = dir.m.scale_fn(&dir.f)?.scale(Complex64::new(*pi, 0.0));
            let mut term = NCForm::zero(self.cfg.n, self.cfg.d, 1);
            match dir.slot {
                Slot::Dx(mu) => term.add_term(&[mu], &[], &coef)?,
                Slot::Th(a) => term.add_term(&[], &[a], &coef)?,
            }
            form = form.add(&term)?;
        }
        ConnectionForm::new(form)
    }

    /// Orthogonal projection of omega onto the parametrization; errors if the
    /// residual off the truncated space exceeds 1e-9.
    pub fn params_from_form(&self, omega: &ConnectionForm) -> Result<Vec<f64>> {
        let extra = omega.form().add(&self.calc.theta())?;
        let mut p = Vec::with_capacity(self.dirs.len());
        for dir in &self.dirs {
            let coef = match dir.slot {
                Slot::Dx(mu) => extra.coeff(&[mu], &[]),
                Slot::Th(a) => extra.coeff(&[], &[a]),
            };
            // Re integral of Tr((M f)* coef)
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..self.cfg.n {
                for j in 0..self.cfg.n {
                    let w = dir.m.entry(i, j).coeff(&vec![0; self.cfg.d]).conj();
                    if w.norm() == 0.0 {
                        continue;
                    }
                    acc += w * coef.entry(i, j).mul(&dir.f.conj())?.integrate();
                }
            }
            p.push(acc.re / dir.norm2);
        }
        let back = self.params_to_form(&p)?;
        let res = back.form().sub(omega.form())?.max_coeff();
        if res > 1e-9 {
            return Err(NcError::OutsideTruncation(res));
        }
        Ok(p)
    }

    /// The evaluated connection components on the direction family:
    /// w_dx[mu] = omega(d_mu), w_in[a] = omega(ad_{E_a}) (unnormalized).
    fn fields(&self, p: &[f64]) -> Result<(Vec<AlgElement>, Vec<AlgElement>)> {
        let (n, d) = (self.cfg.n, self.cfg.d);
        let m = self.calc.basis().len();
        let mut w_dx = vec![AlgElement::zeros(n, d); d];
        let mut w_in = Vec::with_capacity(m);
        for a in 0..m {
            // the -i theta block contributes -E_a
            w_in.push(AlgElement::from_matrix(d, self.calc.basis().elem(a)).neg());
        }
        for (pi, dir) in p.iter().zip(&self.dirs) {
            if *pi == 0.0 {
                continue;
            }
            let coef = dir.m.scale_fn(&dir.f)?.scale(Complex64::new(*pi, 0.0));
            match dir.slot {
                Slot::Dx(mu) => w_dx[mu] = w_dx[mu].add(&coef)?,
                Slot::Th(a) => w_in[a] = w_in[a].add(&coef)?,
            }
        }
        Ok((w_dx, w_in))
    }

    /// Sparse field perturbation of one parameter direction.
    fn field_delta(&self, i: usize) -> Result<(Slot, AlgElement)> {
        let dir = &self.dirs[i];
        Ok((dir.slot, dir.m.scale_fn(&dir.f)?))
    }

    /// All curvature components R_PQ on ordered direction pairs, from the
    /// component fields.  The orthonormal inner directions carry the 1/sqrt(2)
    /// normalization.
    fn curvature_components(
        &self,
        w_dx: &[AlgElement],
        w_in: &[AlgElement],
    ) -> Result<Vec<AlgElement>> {
        let d = self.cfg.d;
        let m = w_in.len();
        let basis = self.calc.basis();
        let mut out = Vec::with_capacity((d + m) * (d + m - 1) / 2);
        for mu in 0..d {
            for nu in mu + 1..d {
                let r = w_dx[nu]
                    .partial(mu)?
                    .sub(&w_dx[mu].partial(nu)?)?
                    .add(&w_dx[mu].comm(&w_dx[nu])?)?;
                out.push(r);
            }
        }
        for mu in 0..d {
            for a in 0..m {
                let ea = basis.elem(a);
                let r = w_in[a]
                    .partial(mu)?
                    .sub(&w_dx[mu].comm_matrix_left(ea)?)?
                    .add(&w_dx[mu].comm(&w_in[a])?)?;
                out.push(r.scale(Complex64::new(1.0 / SQRT2, 0.0)));
            }
        }
        for a in 0..m {
            for b in a + 1..m {
                let mut r = w_in[b]
                    .comm_matrix_left(basis.elem(a))?
                    .sub(&w_in[a].comm_matrix_left(basis.elem(b))?)?
                    .add(&w_in[a].comm(&w_in[b])?)?;
                for c in 0..m {
                    let s = basis.structure_const(a, b, c);
                    if s.norm() > 0.0 {
                        r = r.sub(&w_in[c].scale(s))?;
                    }
                }
                out.push(r.scale(Complex64::new(0.5, 0.0)));
            }
        }
        Ok(out)
    }

    /// Directional derivative of each R_PQ when slot `slot` is shifted by dw.
    fn curvature_delta(
        &self,
        slot: Slot,
        dw: &AlgElement,
        w_dx: &[AlgElement],
        w_in: &[AlgElement],
    ) -> Result<Vec<Option<AlgElement>>> {
        let d = self.cfg.d;
        let m = w_in.len();
        let basis = self.calc.basis();
        let mut out = Vec::with_capacity((d + m) * (d + m - 1) / 2);
        for mu in 0..d {
            for nu in mu + 1..d {
                let dr = match slot {
                    Slot::Dx(s) if s == mu => Some(
                        dw.partial(nu)?.neg().add(&dw.comm(&w_dx[nu])?)?,
                    ),
                    Slot::Dx(s) if s == nu => {
                        Some(dw.partial(mu)?.add(&w_dx[mu].comm(dw)?)?)
                    }
                    _ => None,
                };
                out.push(dr);
            }
        }
        for mu in 0..d {
            for a in 0..m {
                let ea = basis.elem(a);
                let dr = match slot {
                    Slot::Dx(s) if s == mu => {
                        Some(dw.comm_matrix_left(ea)?.neg().add(&dw.comm(&w_in[a])?)?)
                    }
                    Slot::Th(s) if s == a => {
                        Some(dw.partial(mu)?.add(&w_dx[mu].comm(dw)?)?)
                    }
                    _ => None,
                };
                out.push(dr.map(|x| x.scale(Complex64::new(1.0 / SQRT2, 0.0))));
            }
        }
        for a in 0..m {
            for b in a + 1..m {
                let mut dr: Option<AlgElement> = None;
                if let Slot::Th(s) = slot {
                    let mut acc = AlgElement::zeros(self.cfg.n, d);
                    let mut touched = false;
                    if s == a {
                        acc = acc
                            .sub(&dw.comm_matrix_left(basis.elem(b))?)?
                            .add(&dw.comm(&w_in[b])?)?;
                        touched = true;
                    }
                    if s == b {
                        acc = acc
                            .add(&dw.comm_matrix_left(basis.elem(a))?)?
                            .add(&w_in[a].comm(dw)?)?;
                        touched = true;
                    }
                    let str_c = basis.structure_const(a, b, s);
                    if str_c.norm() > 0.0 {
                        acc = acc.sub(&dw.scale(str_c))?;
                        touched = true;
                    }
                    if touched {
                        dr = Some(acc.scale(Complex64::new(0.5, 0.0)));
                    }
                }
                out.push(dr);
            }
        }
        Ok(out)
    }

    /// Integrated squared norm of one component: integral of Tr(R* R).
    fn component_energy(r: &AlgElement) -> Result<f64> {
        let mut acc = 0.0;
        for i in 0..r.n() {
            for j in 0..r.n() {
                let e = r.entry(i, j);
                acc += e.mul(&e.conj())?.integrate().re;
            }
        }
        Ok(acc)
    }

    /// Re integral of Tr(A* B).
    fn component_pairing(a: &AlgElement, b: &AlgElement) -> Result<f64> {
        let mut acc = 0.0;
        for i in 0..a.n() {
            for j in 0..a.n() {
                acc += a.entry(i, j).conj().mul(b.entry(i, j))?.integrate().re;
            }
        }
        Ok(acc)
    }

    /// The action at a parameter point.
    pub fn action(&self, p: &[f64]) -> Result<f64> {
        let (w_dx, w_in) = self.fields(p)?;
        let comps = self.curvature_components(&w_dx, &w_in)?;
        let mut s = 0.0;
        for r in &comps {
            s += Self::component_energy(r)?;
        }
        Ok(s)
    }

    /// Definitional action path: evaluate the curvature 2-form on the
    /// orthonormal direction derivations.  Slower; used as an oracle for the
    /// component path.
    pub fn action_via_form(&self, omega: &ConnectionForm) -> Result<f64> {
        let r = curvature(&self.calc, omega)?;
        let mut ders: Vec<Derivation> = (0..self.cfg.d)
            .map(|mu| Derivation::coordinate(self.cfg.n, self.cfg.d, mu))
            .collect::<Result<Vec<_>>>()?;
        for a in 0..self.calc.basis().len() {
            let g = AlgElement::from_matrix(self.cfg.d, self.calc.basis().elem(a))
                .scale(Complex64::new(1.0 / SQRT2, 0.0));
            ders.push(Derivation::inner(g)?);
        }
        let mut s = 0.0;
        for i in 0..ders.len() {
            for j in i + 1..ders.len() {
                let rij = calc_pair(&self.calc, &r, &ders[i], &ders[j])?;
                s += Self::component_energy(&rij)?;
            }
        }
        Ok(s)
    }

    /// Exact gradient of the action.
    pub fn gradient(&self, p: &[f64]) -> Result<Vec<f64>> {
        let (w_dx, w_in) = self.fields(p)?;
        let comps = self.curvature_components(&w_dx, &w_in)?;
        let mut grad = Vec::with_capacity(self.dirs.len());
        for i in 0..self.dirs.len() {
            let (slot, dw) = self.field_delta(i)?;
            let deltas = self.curvature_delta(slot, &dw, &w_dx, &w_in)?;
            let mut g = 0.0;
            for (r, dr) in comps.iter().zip(&deltas) {
                if let Some(dr) = dr {
                    g += 2.0 * Self::component_pairing(r, dr)?;
                }
            }
            grad.push(g);
        }
        Ok(grad)
    }

    /// Gradient descent with Armijo backtracking.  Returns the final
    /// parameters, the vacuum report and the trajectory.
    pub fn minimize(
        &self,
        p0: &[f64],
    ) -> Result<(Vec<f64>, VacuumReport, Vec<TrajectoryPoint>)> {
        let mut p = p0.to_vec();
        let mut action = self.action(&p)?;
        if !action.is_finite() {
            return Err(NcError::NonFiniteAction(0));
        }
        // Below this the action sits at the coefficient-pruning floor and the
        // Armijo decrease test cannot certify progress; fall back to plain
        // nonincrease there so the gradient can keep contracting.
        let floor = 1e-13 * (1.0 + action);
        let mut step = self.cfg.step;
        let mut trajectory = Vec::new();
        let mut iters = 0;
        let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
        loop {
            let grad = self.gradient(&p)?;
            let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
            let gnorm = gnorm2.sqrt();
            trajectory.push(TrajectoryPoint { iter: iters, action, grad_norm: gnorm, step });
            if gnorm <= self.cfg.grad_tol || iters >= self.cfg.max_iters {
                break;
            }
            // Barzilai-Borwein trial step from the last accepted pair, backed
            // off until Armijo decrease holds
            if let Some((pp, pg)) = &prev {
                let mut sy = 0.0;
                let mut ss = 0.0;
                for i in 0..p.len() {
                    let s = p[i] - pp[i];
                    let y = grad[i] - pg[i];
                    sy += s * y;
                    ss += s * s;
                }
                if sy > 0.0 && ss > 0.0 {
                    step = (ss / sy).clamp(1e-12, 1e6);
                }
            }
            let mut t = step;
            let mut accepted = false;
            while t > 1e-18 {
                let trial: Vec<f64> = p.iter().zip(&grad).map(|(x, g)| x - t * g).collect();
                let s_trial = self.action(&trial)?;
                if !s_trial.is_finite() {
                    return Err(NcError::NonFiniteAction(iters));
                }
                let ok = if action <= floor {
                    s_trial <= action
                } else {
                    s_trial <= action - ARMIJO_C * t * gnorm2
                };
                if ok {
                    prev = Some((std::mem::replace(&mut p, trial), grad));
                    action = s_trial;
                    step = t;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            iters += 1;
            if !accepted {
                break;
            }
        }
        let omega = self.params_to_form(&p)?;
        let grad = self.gradient(&p)?;
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        let r_form = curvature(&self.calc, &omega)?;
        let flat = ConnectionForm::new(self.calc.theta().neg())?;
        let (_, higgs) = decompose_omega(&self.calc, &omega, &flat)?;
        let (r1, r2) = higgs_conditions(&self.calc, &higgs, &flat)?;
        let report = VacuumReport {
            action,
            grad_norm: gnorm,
            curvature_norm: r_form.max_coeff(),
            r1,
            r2,
            iterations: iters,
        };
        Ok((p, report, trajectory))
    }
}

fn calc_pair(
    calc: &Calculus,
    r: &NCForm,
    x: &Derivation,
    y: &Derivation,
) -> Result<AlgElement> {
    calc.form_eval(r, &[x.clone(), y.clone()])
}
