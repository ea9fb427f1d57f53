//! Semidefinite relaxation with successive convex approximation.
//!
//! With `W_k = w_kw_kᴴ`, `Z = zzᴴ` and the rank constraints dropped, the sum
//! secrecy rate is `−f_obj` where
//!
//! ```text
//! f_obj = N₁ + N₂ − D₁ − D₂
//! N₁ = −Σ_k log₂(Σ_i Tr(H_kW_i) + Tr(H_kZ) + σ²_k)
//! N₂ = −K log₂(Tr(H_EZ) + σ²_E)
//! D₁ = −Σ_k log₂(Σ_{i≠k} Tr(H_kW_i) + Tr(H_kZ) + σ²_k)
//! D₂ = −Σ_k log₂(Tr(H_EW_k) + Tr(H_EZ) + σ²_E)
//! ```
//!
//! All four terms are convex, so replacing `D₁ + D₂` by its tangent plane at
//! the current iterate gives a convex majorant of `f_obj`, minimised here by a
//! log-barrier interior-point method with damped Newton steps.
//!
//! Every term sees a covariance only through `hᴴXh` for the K+1 channels, so
//! each PSD variable is written as `X = QYQᴴ` with `Q` an orthonormal basis of
//! the channels' span. Compressing any feasible `X` onto that span keeps every
//! quadratic form and does not increase its trace, so nothing is lost.
//! Channels are scaled by `sqrt(P)/σ` so the variables have trace at most one.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::psd::rank_one;
use super::{evaluate, mrt_beamformer, AnTag, BeamPlan, BeamTag, BeamformingSolution, SCAConfig, Scenario};
use crate::{CMatrix, CVector, Complex64, Error, Result};

const LN2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnMode {
    /// Full PSD AN covariance.
    Free,
    /// AN along `h_E`, only its power optimised.
    Aligned,
    /// AN held at its initial value.
    Fixed,
}

/// Which variables the SCA may change; the rest stay at their initial values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaRestriction {
    pub free_users: Vec<bool>,
    pub an: AnMode,
}

impl ScaRestriction {
    pub fn full(num_users: usize) -> Self {
        Self { free_users: vec![true; num_users], an: AnMode::Free }
    }
}

fn lg1p(x: f64) -> f64 {
    x.ln_1p() / LN2
}

/// Orthonormal basis of the span of `vs` (modified Gram–Schmidt).
fn span_basis(vs: &[&CVector]) -> CMatrix {
    let mut cols: Vec<CVector> = Vec::new();
    for v in vs {
        let scale = v.norm();
        let mut r = (*v).clone();
        for _ in 0..2 {
            for q in &cols {
                let c = q.dotc(&r);
                r -= q * c;
            }
        }
        let nr = r.norm();
        if nr > 1e-10 * scale {
            cols.push(r / Complex64::from(nr));
        }
    }
    CMatrix::from_columns(&cols)
}

/// Real coordinates of Hermitian `m×m` blocks (orthonormal under `Re Tr(AB)`)
/// followed by an optional scalar.
struct Layout {
    m: usize,
    blocks: usize,
    scalar: bool,
    basis: Vec<CMatrix>,
    /// Non-zero `(row, col, value)` entries of each basis matrix.
    entries: Vec<Vec<(usize, usize, Complex64)>>,
}

impl Layout {
    fn new(m: usize, blocks: usize, scalar: bool) -> Self {
        let mut basis = Vec::with_capacity(m * m);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..m {
            let mut e = CMatrix::zeros(m, m);
            e[(i, i)] = Complex64::from(1.0);
            basis.push(e);
            for j in i + 1..m {
                let mut re = CMatrix::zeros(m, m);
                re[(i, j)] = Complex64::from(s);
                re[(j, i)] = Complex64::from(s);
                basis.push(re);
                let mut im = CMatrix::zeros(m, m);
                im[(i, j)] = Complex64::new(0.0, s);
                im[(j, i)] = Complex64::new(0.0, -s);
                basis.push(im);
            }
        }
        let entries = basis
            .iter()
            .map(|e| {
                let mut nz = Vec::new();
                for c in 0..m {
                    for r in 0..m {
                        if e[(r, c)] != Complex64::from(0.0) {
                            nz.push((r, c, e[(r, c)]));
                        }
                    }
                }
                nz
            })
            .collect();
        Self { m, blocks, scalar, basis, entries }
    }

    fn block_len(&self) -> usize {
        self.m * self.m
    }

    fn dim(&self) -> usize {
        self.blocks * self.block_len() + usize::from(self.scalar)
    }

    fn scalar_index(&self) -> usize {
        self.blocks * self.block_len()
    }

    /// Barrier parameter `ν`: block orders, the scalar and the budget slack.
    fn nu(&self) -> f64 {
        (self.blocks * self.m + usize::from(self.scalar) + 1) as f64
    }

    /// `a ↦ vᴴE_av`.
    fn form(&self, v: &CVector) -> Vec<f64> {
        self.basis.iter().map(|e| v.dotc(&(e * v)).re).collect()
    }

    fn coords(&self, y: &CMatrix) -> Vec<f64> {
        self.basis.iter().map(|e| (e * y).trace().re).collect()
    }

    fn block(&self, y: &DVector<f64>, b: usize) -> CMatrix {
        let off = b * self.block_len();
        let mut out = CMatrix::zeros(self.m, self.m);
        for (a, e) in self.basis.iter().enumerate() {
            out += e * Complex64::from(y[off + a]);
        }
        out
    }

    fn trace_vector(&self) -> DVector<f64> {
        let mut t = DVector::zeros(self.dim());
        for b in 0..self.blocks {
            for (a, e) in self.basis.iter().enumerate() {
                t[b * self.block_len() + a] = e.trace().re;
            }
        }
        if self.scalar {
            t[self.scalar_index()] = 1.0;
        }
        t
    }
}

/// Position of the `i`-th diagonal coordinate in [`Layout::new`]'s ordering.
fn diag_index(m: usize, i: usize) -> usize {
    // row r contributes 1 + 2(m − 1 − r) coordinates
    (0..i).map(|r| 1 + 2 * (m - 1 - r)).sum()
}

/// `c + gᵀy`.
#[derive(Clone)]
struct Affine {
    c: f64,
    g: DVector<f64>,
}

impl Affine {
    fn constant(c: f64, dim: usize) -> Self {
        Self { c, g: DVector::zeros(dim) }
    }

    fn at(&self, y: &DVector<f64>) -> f64 {
        self.c + self.g.dot(y)
    }

    fn add_block(&mut self, layout: &Layout, b: usize, form: &[f64], sign: f64) {
        let off = b * layout.block_len();
        for (a, v) in form.iter().enumerate() {
            self.g[off + a] += sign * v;
        }
    }
}

struct Model {
    k: usize,
    layout: Layout,
    budget: f64,
    /// `Σ_i Tr(H_kW_i) + Tr(H_kZ)` per user (noise-normalised).
    total: Vec<Affine>,
    /// Same without the user's own beam.
    interf: Vec<Affine>,
    /// `Tr(H_EW_k)`.
    eve: Vec<Affine>,
    /// `Tr(H_EZ)`.
    ze: Affine,
}

impl Model {
    fn objective(&self, y: &DVector<f64>) -> f64 {
        let ze = self.ze.at(y);
        (0..self.k)
            .map(|k| -lg1p(self.total[k].at(y)) + lg1p(self.interf[k].at(y)) + lg1p(self.eve[k].at(y) + ze))
            .sum::<f64>()
            - self.k as f64 * lg1p(ze)
    }

    /// Gradient of `D₁ + D₂` at `y`, the slope of the tangent plane.
    fn tangent(&self, y: &DVector<f64>) -> DVector<f64> {
        let ze = self.ze.at(y);
        let mut l = DVector::zeros(self.layout.dim());
        for k in 0..self.k {
            let c1 = 1.0 / (LN2 * (1.0 + self.interf[k].at(y)));
            let c2 = 1.0 / (LN2 * (1.0 + self.eve[k].at(y) + ze));
            l += &self.interf[k].g * c1;
            l += (&self.eve[k].g + &self.ze.g) * c2;
        }
        l
    }

    /// Convex terms `−w·log₂(1 + a(y))` of the majorant.
    fn log_terms(&self) -> impl Iterator<Item = (f64, &Affine)> {
        self.total.iter().map(|a| (1.0, a)).chain(std::iter::once((self.k as f64, &self.ze)))
    }

    fn surrogate(&self, y: &DVector<f64>, l: &DVector<f64>) -> f64 {
        self.log_terms().map(|(w, a)| -w * lg1p(a.at(y))).sum::<f64>() + l.dot(y)
    }
}

struct Barrier<'a> {
    model: &'a Model,
    l: &'a DVector<f64>,
    trace: DVector<f64>,
}

impl Barrier<'_> {
    fn slack(&self, y: &DVector<f64>) -> f64 {
        self.model.budget - self.trace.dot(y)
    }

    /// `t·s(y) − Σ log det Y_b − log p − log(slack)`, or `None` outside the domain.
    fn value(&self, y: &DVector<f64>, t: f64) -> Option<f64> {
        let lay = &self.model.layout;
        let mut phi = t * self.model.surrogate(y, self.l);
        for b in 0..lay.blocks {
            phi -= hermitian_log_det(&lay.block(y, b))?;
        }
        if lay.scalar {
            let p = y[lay.scalar_index()];
            if p <= 0.0 {
                return None;
            }
            phi -= p.ln();
        }
        let sl = self.slack(y);
        if sl <= 0.0 {
            return None;
        }
        Some(phi - sl.ln())
    }

    fn newton_system(&self, y: &DVector<f64>, t: f64) -> (DVector<f64>, DMatrix<f64>) {
        let lay = &self.model.layout;
        let dim = lay.dim();
        let mut grad = self.l * t;
        let mut hess = DMatrix::zeros(dim, dim);
        for (w, a) in self.model.log_terms() {
            let arg = LN2 * (1.0 + a.at(y));
            grad -= &a.g * (t * w / arg);
            hess.ger(t * w * LN2 / (arg * arg), &a.g, &a.g, 1.0);
        }
        let bl = lay.block_len();
        for b in 0..lay.blocks {
            let yinv = lay.block(y, b).try_inverse().expect("interior block is invertible");
            // tr(Y⁻¹E_a) and tr(Y⁻¹E_aY⁻¹E_b) straight from the entries of Y⁻¹
            for (a, ea) in lay.entries.iter().enumerate() {
                grad[b * bl + a] -= ea.iter().map(|&(p, q, c)| c * yinv[(q, p)]).sum::<Complex64>().re;
                for (c_idx, eb) in lay.entries.iter().enumerate().skip(a) {
                    let mut v = Complex64::from(0.0);
                    for &(p, q, ca) in ea {
                        for &(r, s, cb) in eb {
                            v += ca * cb * yinv[(s, p)] * yinv[(q, r)];
                        }
                    }
                    hess[(b * bl + a, b * bl + c_idx)] += v.re;
                    if c_idx != a {
                        hess[(b * bl + c_idx, b * bl + a)] += v.re;
                    }
                }
            }
        }
        if lay.scalar {
            let i = lay.scalar_index();
            let p = y[i];
            grad[i] -= 1.0 / p;
            hess[(i, i)] += 1.0 / (p * p);
        }
        let sl = self.slack(y);
        grad += &self.trace / sl;
        hess.ger(1.0 / (sl * sl), &self.trace, &self.trace, 1.0);
        (grad, hess)
    }
}

/// `log det Y` of a Hermitian matrix, `None` unless positive definite.
///
/// Works on the real embedding `[[Re, −Im], [Im, Re]]`, whose determinant is
/// `det(Y)²`; a complex Cholesky accepts negative pivots.
fn hermitian_log_det(y: &CMatrix) -> Option<f64> {
    let m = y.nrows();
    let real = DMatrix::from_fn(2 * m, 2 * m, |i, j| {
        let v = y[(i % m, j % m)];
        match (i < m, j < m) {
            (true, true) | (false, false) => v.re,
            (true, false) => -v.im,
            (false, true) => v.im,
        }
    });
    let chol = Cholesky::new(real)?;
    Some(chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>())
}

fn solve_spd(h: &DMatrix<f64>, rhs: &DVector<f64>) -> DVector<f64> {
    // symmetric Jacobi scaling
    let d = h.diagonal().map(|v| if v > 0.0 { 1.0 / v.sqrt() } else { 1.0 });
    let scaled = DMatrix::from_fn(h.nrows(), h.ncols(), |i, j| h[(i, j)] * d[i] * d[j]);
    let b = rhs.component_mul(&d);
    let mut reg = 0.0;
    loop {
        let mut m = scaled.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += reg;
        }
        if let Some(ch) = Cholesky::new(m) {
            return ch.solve(&b).component_mul(&d);
        }
        reg = if reg == 0.0 { 1e-14 } else { reg * 10.0 };
    }
}

/// Newton steps per barrier stage before moving on to the next `t`.
const CENTERING_STEPS: usize = 50;

struct Subproblem {
    y: DVector<f64>,
    newton_steps: usize,
    gap: f64,
    converged: bool,
}

/// Minimises the majorant to a duality-gap bound `ν/t ≤ tol`.
fn solve_subproblem(model: &Model, l: &DVector<f64>, y_start: &DVector<f64>, tol: f64, max_steps: usize) -> Subproblem {
    let lay = &model.layout;
    let barrier = Barrier { model, l, trace: lay.trace_vector() };
    let nu = lay.nu();
    // pull the start slightly towards the analytic centre to make it interior
    let share = model.budget / nu;
    let mut centre = DVector::zeros(lay.dim());
    for b in 0..lay.blocks {
        for i in 0..lay.m {
            centre[b * lay.block_len() + diag_index(lay.m, i)] = share;
        }
    }
    if lay.scalar {
        centre[lay.scalar_index()] = share;
    }
    let eps = 1e-2;
    let mut y = y_start * (1.0 - eps) + centre * eps;
    let mut t = 1.0;
    let mut steps = 0;
    loop {
        for _ in 0..CENTERING_STEPS {
            if steps >= max_steps {
                return Subproblem { y, newton_steps: steps, gap: nu / t, converged: false };
            }
            steps += 1;
            let (grad, hess) = barrier.newton_system(&y, t);
            let dir = solve_spd(&hess, &(-&grad));
            let decrement = -grad.dot(&dir);
            let phi0 = barrier.value(&y, t).expect("iterate stays interior");
            // progress below the rounding level of φ counts as centred
            let floor = 1e-13 * phi0.abs().max(1.0);
            if decrement / 2.0 <= 1e-10 + floor {
                break;
            }
            let mut alpha = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                let cand = &y + &dir * alpha;
                if let Some(phi) = barrier.value(&cand, t) {
                    if phi0 - phi > floor && phi <= phi0 - 0.25 * alpha * decrement {
                        y = cand;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if nu / t <= tol {
            return Subproblem { y, newton_steps: steps, gap: nu / t, converged: true };
        }
        t *= 20.0;
    }
}

fn default_init(scenario: &Scenario) -> Result<(Vec<CVector>, CVector)> {
    let share = scenario.total_power / (scenario.num_users() + 1) as f64;
    let w = scenario.users.iter().map(|u| mrt_beamformer(&u.vector, share)).collect::<Result<_>>()?;
    Ok((w, mrt_beamformer(&scenario.eve.vector, share)?))
}

/// Full SDR+SCA over every `W_k` and `Z`.
pub fn sca_optimize(
    scenario: &Scenario,
    config: &SCAConfig,
    init: Option<&BeamformingSolution>,
) -> Result<BeamformingSolution> {
    let plan = BeamPlan { users: vec![BeamTag::Optimized; scenario.num_users()], an: AnTag::Optimized };
    Ok(sca_optimize_restricted(scenario, config, &ScaRestriction::full(scenario.num_users()), init)?.with_plan(plan))
}

/// SDR+SCA over the variables allowed by `restriction`; fixed beamformers keep
/// their initial values and their power is taken off the budget.
///
/// Starts from `init`, or MRT beams and eavesdropper-aligned AN at `P/(K+1)`
/// each. The extracted rank-one solution is compared with the starting point
/// and the better of the two is returned.
pub fn sca_optimize_restricted(
    scenario: &Scenario,
    config: &SCAConfig,
    restriction: &ScaRestriction,
    init: Option<&BeamformingSolution>,
) -> Result<BeamformingSolution> {
    config.validate()?;
    let k = scenario.num_users();
    if restriction.free_users.len() != k {
        return Err(Error::Dimension { expected: k, got: restriction.free_users.len() });
    }
    let (w0, z0) = match init {
        Some(s) => (s.w.clone(), s.z.clone()),
        None => default_init(scenario)?,
    };
    let start = evaluate(scenario, &w0, &z0)?;
    let p_tot = scenario.total_power;
    let sqrt_p = Complex64::from(p_tot.sqrt());
    let scale = |h: &CVector, noise: f64| h * Complex64::from((p_tot / noise).sqrt());
    let u: Vec<CVector> = scenario.users.iter().zip(&scenario.noise_b).map(|(c, &s)| scale(&c.vector, s)).collect();
    let ue = scale(&scenario.eve.vector, scenario.noise_e);
    let ue_norm = ue.norm();
    if ue_norm == 0.0 {
        return Err(Error::ZeroChannel);
    }
    let e_hat = &ue / Complex64::from(ue_norm);
    let unit_w: Vec<CVector> = w0.iter().map(|w| w / sqrt_p).collect();
    let unit_z = &z0 / sqrt_p;
    let free: Vec<usize> = (0..k).filter(|&i| restriction.free_users[i]).collect();

    let q = span_basis(&u.iter().chain(std::iter::once(&ue)).collect::<Vec<_>>());
    let an_block = restriction.an == AnMode::Free;
    let layout = Layout::new(q.ncols(), free.len() + usize::from(an_block), restriction.an == AnMode::Aligned);
    let dim = layout.dim();
    let reduce = |v: &CVector| q.adjoint() * v;
    let user_forms: Vec<Vec<f64>> = u.iter().map(|v| layout.form(&reduce(v))).collect();
    let eve_form = layout.form(&reduce(&ue));

    // per-user affine forms; fixed beams enter as constants
    let mut fixed_power = 0.0;
    let mut total = vec![Affine::constant(0.0, dim); k];
    let mut interf = vec![Affine::constant(0.0, dim); k];
    let mut eve = vec![Affine::constant(0.0, dim); k];
    for i in 0..k {
        match free.iter().position(|&f| f == i) {
            Some(b) => {
                for kk in 0..k {
                    total[kk].add_block(&layout, b, &user_forms[kk], 1.0);
                    if kk != i {
                        interf[kk].add_block(&layout, b, &user_forms[kk], 1.0);
                    }
                }
                eve[i].add_block(&layout, b, &eve_form, 1.0);
            }
            None => {
                for kk in 0..k {
                    let v = u[kk].dotc(&unit_w[i]).norm_sqr();
                    total[kk].c += v;
                    if kk != i {
                        interf[kk].c += v;
                    }
                }
                eve[i].c = ue.dotc(&unit_w[i]).norm_sqr();
                fixed_power += unit_w[i].norm_squared();
            }
        }
    }
    let mut ze = Affine::constant(0.0, dim);
    let targets = u.iter().chain(std::iter::once(&ue));
    let an_terms: Vec<Affine> = match restriction.an {
        AnMode::Free => user_forms
            .iter()
            .chain(std::iter::once(&eve_form))
            .map(|f| {
                let mut a = Affine::constant(0.0, dim);
                a.add_block(&layout, free.len(), f, 1.0);
                a
            })
            .collect(),
        AnMode::Aligned => targets
            .map(|v| {
                let mut a = Affine::constant(0.0, dim);
                a.g[layout.scalar_index()] = v.dotc(&e_hat).norm_sqr();
                a
            })
            .collect(),
        AnMode::Fixed => {
            fixed_power += unit_z.norm_squared();
            targets.map(|v| Affine::constant(v.dotc(&unit_z).norm_sqr(), dim)).collect()
        }
    };
    for kk in 0..k {
        for a in [&mut total[kk], &mut interf[kk]] {
            a.c += an_terms[kk].c;
            a.g += &an_terms[kk].g;
        }
    }
    ze.c += an_terms[k].c;
    ze.g += &an_terms[k].g;
    let budget = (1.0 - fixed_power).max(0.0);
    let model = Model { k, layout, budget, total, interf, eve, ze };
    let lay = &model.layout;

    let mut y = DVector::zeros(dim);
    let outer = |w: &CVector| {
        let r = reduce(w);
        &r * r.adjoint()
    };
    for (b, &i) in free.iter().enumerate() {
        let c = lay.coords(&outer(&unit_w[i]));
        y.rows_mut(b * lay.block_len(), lay.block_len()).copy_from_slice(&c);
    }
    if an_block {
        let c = lay.coords(&outer(&unit_z));
        y.rows_mut(free.len() * lay.block_len(), lay.block_len()).copy_from_slice(&c);
    }
    if lay.scalar {
        y[lay.scalar_index()] = e_hat.dotc(&unit_z).norm_sqr();
    }

    let mut f_cur = model.objective(&y);
    let mut history = vec![f_cur];
    let mut iterations = 0;
    if dim > 0 && budget > 0.0 {
        for outer_it in 1..=config.max_iters {
            let l = model.tangent(&y);
            let sub = solve_subproblem(&model, &l, &y, config.subproblem_tolerance, config.subproblem_max_iters);
            if !sub.converged {
                return Err(Error::SubproblemNotConverged {
                    outer_iteration: outer_it,
                    inner_iterations: sub.newton_steps,
                    stationarity: sub.gap,
                    objective: f_cur,
                });
            }
            iterations = outer_it;
            let f_new = model.objective(&sub.y);
            log::trace!("outer {outer_it}: f {f_cur:.9} -> {f_new:.9}, gap {:.2e}, {} steps", sub.gap, sub.newton_steps);
            if f_new > f_cur {
                // no descent beyond the subproblem's own accuracy: stationary
                break;
            }
            history.push(f_new);
            let change = f_cur - f_new;
            y = sub.y;
            f_cur = f_new;
            if change <= config.objective_tolerance * f_cur.abs().max(1.0) {
                break;
            }
        }
    }

    let mut max_ratio: f64 = 0.0;
    let mut w = w0.clone();
    for (b, &i) in free.iter().enumerate() {
        let (v, ratio) = rank_one(&lay.block(&y, b));
        log::debug!("user {i}: λ₂/λ₁ = {ratio:.3e}");
        max_ratio = max_ratio.max(ratio);
        w[i] = &q * v * sqrt_p;
    }
    let z = match restriction.an {
        AnMode::Free => {
            let (v, ratio) = rank_one(&lay.block(&y, free.len()));
            log::debug!("AN: λ₂/λ₁ = {ratio:.3e}");
            max_ratio = max_ratio.max(ratio);
            &q * v * sqrt_p
        }
        AnMode::Aligned => &e_hat * Complex64::from((y[lay.scalar_index()].max(0.0) * p_tot).sqrt()),
        AnMode::Fixed => z0.clone(),
    };
    if max_ratio > config.rank_tolerance {
        log::warn!("rank-one extraction discards energy: λ₂/λ₁ = {max_ratio:.3e}");
    }
    let mut best = evaluate(scenario, &w, &z)?;
    log::debug!(
        "relaxed sum secrecy {:.6}, extracted {:.6}, start {:.6}",
        -f_cur,
        best.sum_secrecy,
        start.sum_secrecy
    );
    if start.sum_secrecy > best.sum_secrecy {
        log::debug!("extracted beamformers fall below the starting point; keeping the start");
        best = start;
    }
    best.iterations = iterations;
    best.objective_history = history;
    best.max_rank_ratio = max_ratio;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_roundtrip_and_diagonal_positions() {
        let lay = Layout::new(3, 1, false);
        let y = CMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                Complex64::from(i as f64 + 1.0)
            } else if i < j {
                Complex64::new(0.3 * j as f64, -0.2 * i as f64 - 0.1)
            } else {
                Complex64::new(0.3 * i as f64, 0.2 * j as f64 + 0.1)
            }
        });
        let c = DVector::from_vec(lay.coords(&y));
        assert!((lay.block(&c, 0) - &y).norm() < 1e-12);
        for i in 0..3 {
            assert_eq!(c[diag_index(3, i)], i as f64 + 1.0);
        }
        let v = CVector::from_vec(vec![Complex64::new(1.0, 1.0), Complex64::new(0.0, 2.0), Complex64::new(-1.0, 0.5)]);
        let direct = v.dotc(&(&y * &v)).re;
        let via: f64 = lay.form(&v).iter().zip(c.iter()).map(|(a, b)| a * b).sum();
        assert!((direct - via).abs() < 1e-12);
    }

    #[test]
    fn log_det_rejects_indefinite() {
        let y = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Complex64::from(2.0),
            (1, 1) => Complex64::from(1.0),
            (0, 1) => Complex64::new(0.5, 0.5),
            _ => Complex64::new(0.5, -0.5),
        });
        assert!((hermitian_log_det(&y).unwrap() - 1.5f64.ln()).abs() < 1e-12);
        assert!(hermitian_log_det(&(-y)).is_none());
    }

    #[test]
    fn span_basis_is_orthonormal() {
        let a = CVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 1.0), Complex64::new(0.0, 0.0)]);
        let b = &a * Complex64::new(0.0, 2.0);
        let c = CVector::from_vec(vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(3.0, 0.0)]);
        let q = span_basis(&[&a, &b, &c]);
        assert_eq!(q.ncols(), 2);
        assert!((q.adjoint() * &q - CMatrix::identity(2, 2)).norm() < 1e-12);
    }
}
