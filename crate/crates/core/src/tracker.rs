//! Predictor–corrector path tracking from a start system to a target system.
//!
//! Paths satisfy H(z(t); t) = 0, so they solve the ODE
//! ∂H/∂t + (∂H/∂z) ż = 0. The tracker advances t with a fourth-order
//! Runge–Kutta predictor on that ODE and a Newton corrector on H(·; t) = 0,
//! halving the step on corrector failure and growing it after a streak of
//! clean steps. At t = 1 the endpoint is polished by Newton against the
//! target system itself.
//!
//! The engine accepts any homotopy that can evaluate H, ∂H/∂z and ∂H/∂t, so
//! the straight-line homotopy used by the solver and lifted powers-of-t
//! homotopies run through the same code.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::eval::{EvalScratch, SystemEval};
use crate::lagrange::{lagrange_linear_hypersurface, LinearObjectiveProblem, SquareSystem};
use crate::linalg::LinearSolver;
use crate::poly::{ExponentVector, SparsePolynomial};

const MAX_STEP: f64 = 0.1;
const STEP_GROWTH: f64 = 1.5;
const GROWTH_STREAK: u32 = 4;
const CONDITION_LIMIT: f64 = 1e12;
const START_RESIDUAL_TOL: f64 = 1e-8;
const REFINE_ITERATIONS: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrackError {
    #[error("start point is off the start system: residual {residual:.3e}")]
    StartResidual { residual: f64 },
    #[error("start point has {got} coordinates, homotopy has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("start and target systems have different shapes")]
    ShapeMismatch,
    #[error("invalid tracker configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("homotopy polynomials must share one variable ring with t last")]
    MixedArity,
}

/// Knobs of the adaptive tracker. Defaults are the production values; the
/// internal step-growth policy (×1.5 after 4 clean steps, capped at 0.1) is
/// fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub corrector_tol: f64,
    pub max_corrector_iters: usize,
    pub divergence_norm: f64,
    pub endpoint_tol: f64,
    pub max_steps: usize,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            initial_step: 0.05,
            min_step: 1e-14,
            corrector_tol: 1e-12,
            max_corrector_iters: 3,
            divergence_norm: 1e8,
            endpoint_tol: 1e-10,
            max_steps: 50_000,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<(), TrackError> {
        if !(self.min_step > 0.0 && self.min_step < self.initial_step && self.initial_step < 1.0) {
            return Err(TrackError::InvalidConfig(
                "need 0 < min_step < initial_step < 1",
            ));
        }
        if self.corrector_tol <= 0.0 || self.endpoint_tol <= 0.0 || self.divergence_norm <= 0.0 {
            return Err(TrackError::InvalidConfig("tolerances must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStatus {
    /// Reached t = 1 with endpoint residual below `endpoint_tol`.
    Converged,
    /// Iterate norm exceeded `divergence_norm`.
    Diverged,
    /// Step width underflowed, the corrector stalled, or the step budget ran
    /// out before t = 1.
    Failed,
}

/// Outcome of one tracked path.
#[derive(Debug, Clone)]
pub struct PathResult {
    pub status: PathStatus,
    pub endpoint: Vec<Complex64>,
    /// Max-norm residual of the *target* system at `endpoint`.
    pub residual: f64,
    /// Accepted predictor–corrector steps.
    pub steps_taken: usize,
    pub final_t: f64,
}

/// An evaluatable homotopy H(z; t) with Jacobian and t-derivative.
pub trait HomotopySystem: Sync {
    fn nvars(&self) -> usize;

    /// The system H(·; 1) up to a constant factor; endpoint refinement runs
    /// against this.
    fn target_system(&self) -> &SquareSystem;

    fn make_scratch(&self) -> EvalScratch {
        EvalScratch::default()
    }

    /// Fills `h` = H(z; t), `jac` = ∂H/∂z (row-major) and `ht` = ∂H/∂t.
    fn eval_all(
        &self,
        z: &[Complex64],
        t: f64,
        scratch: &mut EvalScratch,
        h: &mut [Complex64],
        jac: &mut [Complex64],
        ht: &mut [Complex64],
    );

    /// Fills values and Jacobian of the target system (γ-free).
    fn eval_target(
        &self,
        z: &[Complex64],
        scratch: &mut EvalScratch,
        vals: &mut [Complex64],
        jac: &mut [Complex64],
    );
}

/// Straight-line homotopy H(z; t) = (1-t)·B(z) + t·γ·F(z). γ sits on the
/// target; since the zeros of γF equal those of F, endpoint refinement uses
/// F itself.
pub struct Homotopy {
    start_system: SquareSystem,
    target_system: SquareSystem,
    gamma: Complex64,
    start_eval: SystemEval,
    target_eval: SystemEval,
}

impl Homotopy {
    pub fn new(
        start: SquareSystem,
        target: SquareSystem,
        gamma: Complex64,
    ) -> Result<Self, TrackError> {
        if start.nvars() != target.nvars() {
            return Err(TrackError::ShapeMismatch);
        }
        let start_eval = SystemEval::generic(&start);
        let target_eval = SystemEval::generic(&target);
        Ok(Homotopy {
            start_system: start,
            target_system: target,
            gamma,
            start_eval,
            target_eval,
        })
    }

    /// Straight-line homotopy to the Lagrange system of `problem`, using the
    /// gradient/Hessian evaluator for the target side.
    pub fn to_lagrange(
        start: SquareSystem,
        problem: &LinearObjectiveProblem,
        gamma: Complex64,
    ) -> Result<Self, TrackError> {
        let target = lagrange_linear_hypersurface(problem);
        if start.nvars() != target.nvars() {
            return Err(TrackError::ShapeMismatch);
        }
        let start_eval = SystemEval::generic(&start);
        let target_eval = SystemEval::lagrange(problem);
        Ok(Homotopy {
            start_system: start,
            target_system: target,
            gamma,
            start_eval,
            target_eval,
        })
    }

    pub fn start_system(&self) -> &SquareSystem {
        &self.start_system
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }
}

impl HomotopySystem for Homotopy {
    fn nvars(&self) -> usize {
        self.start_system.nvars()
    }

    fn target_system(&self) -> &SquareSystem {
        &self.target_system
    }

    fn eval_all(
        &self,
        z: &[Complex64],
        t: f64,
        scratch: &mut EvalScratch,
        h: &mut [Complex64],
        jac: &mut [Complex64],
        ht: &mut [Complex64],
    ) {
        let n = self.nvars();
        let EvalScratch {
            mono,
            aux,
            vals_a,
            vals_b,
            jac_a,
            jac_b,
        } = scratch;
        vals_a.resize(n, Complex64::ZERO);
        vals_b.resize(n, Complex64::ZERO);
        jac_a.resize(n * n, Complex64::ZERO);
        jac_b.resize(n * n, Complex64::ZERO);
        self.start_eval.eval(z, mono, aux, vals_a, jac_a);
        self.target_eval.eval(z, mono, aux, vals_b, jac_b);
        let s = Complex64::new(1.0 - t, 0.0);
        let tg = self.gamma * t;
        for i in 0..n {
            h[i] = s * vals_a[i] + tg * vals_b[i];
            ht[i] = self.gamma * vals_b[i] - vals_a[i];
        }
        for e in 0..n * n {
            jac[e] = s * jac_a[e] + tg * jac_b[e];
        }
    }

    fn eval_target(
        &self,
        z: &[Complex64],
        scratch: &mut EvalScratch,
        vals: &mut [Complex64],
        jac: &mut [Complex64],
    ) {
        let EvalScratch { mono, aux, .. } = scratch;
        self.target_eval.eval(z, mono, aux, vals, jac);
    }
}

/// A homotopy given directly as polynomials in (z_1, …, z_n, t), e.g. the
/// powers-of-t homotopies induced by a lifting. The target is the system at
/// t = 1.
pub struct PolynomialHomotopy {
    nvars: usize,
    target_system: SquareSystem,
    full_eval: crate::eval::CompiledSystem,
    target_eval: SystemEval,
}

impl PolynomialHomotopy {
    /// `polys` are n polynomials in n+1 variables; the last variable is t.
    pub fn new(polys: Vec<SparsePolynomial>) -> Result<Self, TrackError> {
        let ring = polys.first().map_or(0, |p| p.nvars());
        if ring == 0 || polys.iter().any(|p| p.nvars() != ring) {
            return Err(TrackError::MixedArity);
        }
        let nvars = ring - 1;
        if polys.len() != nvars {
            return Err(TrackError::ShapeMismatch);
        }
        // target = H(., 1): drop the t exponent
        let mut target_polys = Vec::with_capacity(nvars);
        for p in &polys {
            let terms = p.terms().map(|(exp, c)| {
                (
                    ExponentVector::from(&exp.entries()[..nvars]),
                    *c,
                )
            });
            target_polys.push(
                SparsePolynomial::from_terms(nvars, terms).expect("exponent arity matches"),
            );
        }
        let names = (1..=nvars).map(|i| format!("x{i}")).collect();
        let target_system =
            SquareSystem::new(target_polys, names).map_err(|_| TrackError::ShapeMismatch)?;
        let full_eval = crate::eval::CompiledSystem::new(&polys);
        let target_eval = SystemEval::generic(&target_system);
        Ok(PolynomialHomotopy {
            nvars,
            target_system,
            full_eval,
            target_eval,
        })
    }
}

impl HomotopySystem for PolynomialHomotopy {
    fn nvars(&self) -> usize {
        self.nvars
    }

    fn target_system(&self) -> &SquareSystem {
        &self.target_system
    }

    fn eval_all(
        &self,
        z: &[Complex64],
        t: f64,
        scratch: &mut EvalScratch,
        h: &mut [Complex64],
        jac: &mut [Complex64],
        ht: &mut [Complex64],
    ) {
        let n = self.nvars;
        let EvalScratch {
            mono,
            aux,
            vals_a,
            jac_a,
            ..
        } = scratch;
        aux.resize(n + 1, Complex64::ZERO);
        aux[..n].copy_from_slice(z);
        aux[n] = Complex64::new(t, 0.0);
        vals_a.resize(n, Complex64::ZERO);
        jac_a.resize(n * (n + 1), Complex64::ZERO);
        self.full_eval.eval(aux, mono, vals_a, jac_a);
        h.copy_from_slice(vals_a);
        for i in 0..n {
            jac[i * n..(i + 1) * n].copy_from_slice(&jac_a[i * (n + 1)..i * (n + 1) + n]);
            ht[i] = jac_a[i * (n + 1) + n];
        }
    }

    fn eval_target(
        &self,
        z: &[Complex64],
        scratch: &mut EvalScratch,
        vals: &mut [Complex64],
        jac: &mut [Complex64],
    ) {
        let EvalScratch { mono, aux, .. } = scratch;
        self.target_eval.eval(z, mono, aux, vals, jac);
    }
}

fn inf_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn all_finite(v: &[Complex64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

struct Workspace {
    scratch: EvalScratch,
    h: Vec<Complex64>,
    jac: Vec<Complex64>,
    ht: Vec<Complex64>,
    solver: LinearSolver,
    /// ws.jac/ws.ht hold a fresh evaluation at the current accepted (z, t).
    cache_valid: bool,
}

impl Workspace {
    fn new(n: usize, scratch: EvalScratch) -> Self {
        Workspace {
            scratch,
            h: vec![Complex64::ZERO; n],
            jac: vec![Complex64::ZERO; n * n],
            ht: vec![Complex64::ZERO; n],
            solver: LinearSolver::new(n),
            cache_valid: false,
        }
    }
}

/// Solves (∂H/∂z) k = -∂H/∂t from the data already in `ws.jac`/`ws.ht`.
fn flow_from_cache(ws: &mut Workspace, out: &mut [Complex64]) -> bool {
    if !ws.solver.factorize(&ws.jac, CONDITION_LIMIT) {
        return false;
    }
    for (slot, ht) in out.iter_mut().zip(&ws.ht) {
        *slot = -ht;
    }
    ws.solver.solve(out);
    all_finite(out)
}

fn flow<H: HomotopySystem + ?Sized>(
    h: &H,
    z: &[Complex64],
    t: f64,
    ws: &mut Workspace,
    out: &mut [Complex64],
) -> bool {
    h.eval_all(z, t, &mut ws.scratch, &mut ws.h, &mut ws.jac, &mut ws.ht);
    flow_from_cache(ws, out)
}

struct RkBuffers {
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    stage: Vec<Complex64>,
}

impl RkBuffers {
    fn new(n: usize) -> Self {
        RkBuffers {
            k1: vec![Complex64::ZERO; n],
            k2: vec![Complex64::ZERO; n],
            k3: vec![Complex64::ZERO; n],
            k4: vec![Complex64::ZERO; n],
            stage: vec![Complex64::ZERO; n],
        }
    }
}

/// Classical RK4 on the Davidenko ODE from (z, t0) to t1. Fails on singular
/// or ill-conditioned stage Jacobians.
#[allow(clippy::too_many_arguments)]
fn rk4_predict<H: HomotopySystem + ?Sized>(
    h: &H,
    z: &[Complex64],
    t0: f64,
    t1: f64,
    ws: &mut Workspace,
    rk: &mut RkBuffers,
    out: &mut [Complex64],
) -> bool {
    let n = z.len();
    let hstep = t1 - t0;
    let tmid = t0 + 0.5 * hstep;
    let half = Complex64::new(0.5 * hstep, 0.0);
    let full = Complex64::new(hstep, 0.0);

    let k1_ok = if ws.cache_valid {
        flow_from_cache(ws, &mut rk.k1)
    } else {
        flow(h, z, t0, ws, &mut rk.k1)
    };
    if !k1_ok {
        return false;
    }
    for i in 0..n {
        rk.stage[i] = z[i] + half * rk.k1[i];
    }
    if !flow(h, &rk.stage, tmid, ws, &mut rk.k2) {
        return false;
    }
    for i in 0..n {
        rk.stage[i] = z[i] + half * rk.k2[i];
    }
    if !flow(h, &rk.stage, tmid, ws, &mut rk.k3) {
        return false;
    }
    for i in 0..n {
        rk.stage[i] = z[i] + full * rk.k3[i];
    }
    if !flow(h, &rk.stage, t1, ws, &mut rk.k4) {
        return false;
    }
    let sixth = Complex64::new(hstep / 6.0, 0.0);
    for i in 0..n {
        out[i] = z[i]
            + sixth * (rk.k1[i] + (rk.k2[i] + rk.k3[i]).scale(2.0) + rk.k4[i]);
    }
    all_finite(out)
}

/// Newton corrector on H(·; t1) = 0 starting from the prediction in `z`.
/// On success `z` holds the corrected point and the workspace cache holds a
/// fresh evaluation there.
///
/// Acceptance is on the residual ‖H‖_∞ < tol·(1 + ‖z‖_∞), with a fallback
/// on the Newton update ‖Δz‖_∞ < tol·(1 + ‖z‖_∞). The fallback matters on
/// wide path excursions, where H is evaluated at points whose monomials
/// reach the f64 rounding floor before the residual target; the update size
/// is the scale-invariant measure of convergence there.
fn correct<H: HomotopySystem + ?Sized>(
    h: &H,
    t1: f64,
    cfg: &TrackerConfig,
    ws: &mut Workspace,
    z: &mut [Complex64],
) -> bool {
    for iteration in 0..=cfg.max_corrector_iters {
        h.eval_all(z, t1, &mut ws.scratch, &mut ws.h, &mut ws.jac, &mut ws.ht);
        let res = inf_norm(&ws.h);
        if res < cfg.corrector_tol * (1.0 + inf_norm(z)) {
            ws.cache_valid = true;
            return true;
        }
        if iteration == cfg.max_corrector_iters {
            return false;
        }
        if !ws.solver.factorize(&ws.jac, CONDITION_LIMIT) {
            return false;
        }
        // the value buffer doubles as the Newton right-hand side
        for slot in ws.h.iter_mut() {
            *slot = -*slot;
        }
        ws.solver.solve(&mut ws.h);
        let update = inf_norm(&ws.h);
        for (zi, delta) in z.iter_mut().zip(&ws.h) {
            *zi += delta;
        }
        if !all_finite(z) {
            return false;
        }
        if update < cfg.corrector_tol * (1.0 + inf_norm(z)) {
            // converged by update size; the cached evaluation predates the
            // final update
            ws.cache_valid = false;
            return true;
        }
    }
    false
}

fn target_residual<H: HomotopySystem + ?Sized>(
    h: &H,
    z: &[Complex64],
    ws: &mut Workspace,
) -> f64 {
    h.eval_target(z, &mut ws.scratch, &mut ws.h, &mut ws.jac);
    inf_norm(&ws.h)
}

/// Newton polish against the target system; keeps the best iterate seen.
fn refine_endpoint<H: HomotopySystem + ?Sized>(
    h: &H,
    cfg: &TrackerConfig,
    ws: &mut Workspace,
    z: &mut Vec<Complex64>,
) -> f64 {
    let mut best = z.clone();
    let mut best_res = f64::INFINITY;
    for iteration in 0..=REFINE_ITERATIONS {
        h.eval_target(z, &mut ws.scratch, &mut ws.h, &mut ws.jac);
        let res = inf_norm(&ws.h);
        if res < best_res {
            best_res = res;
            best.copy_from_slice(z);
        }
        if res < 1e-15 || iteration == REFINE_ITERATIONS {
            break;
        }
        if !ws.solver.factorize(&ws.jac, CONDITION_LIMIT) {
            break;
        }
        for slot in ws.h.iter_mut() {
            *slot = -*slot;
        }
        ws.solver.solve(&mut ws.h);
        for (zi, delta) in z.iter_mut().zip(&ws.h) {
            *zi += delta;
        }
        if !all_finite(z) || inf_norm(z) > cfg.divergence_norm {
            break;
        }
    }
    *z = best;
    best_res
}

/// Tracks a single path from a root of the start system to t = 1.
///
/// The start point must satisfy ‖H(z; 0)‖_∞ < 1e-8; anything else is a
/// caller error, not a path failure.
pub fn track_path<H: HomotopySystem + ?Sized>(
    h: &H,
    start_point: &[Complex64],
    cfg: &TrackerConfig,
) -> Result<PathResult, TrackError> {
    cfg.validate()?;
    let n = h.nvars();
    if start_point.len() != n {
        return Err(TrackError::DimensionMismatch {
            expected: n,
            got: start_point.len(),
        });
    }

    let mut ws = Workspace::new(n, h.make_scratch());
    let mut rk = RkBuffers::new(n);
    let mut z = start_point.to_vec();
    let mut z_next = vec![Complex64::ZERO; n];

    h.eval_all(&z, 0.0, &mut ws.scratch, &mut ws.h, &mut ws.jac, &mut ws.ht);
    let start_res = inf_norm(&ws.h);
    if !(start_res < START_RESIDUAL_TOL) {
        return Err(TrackError::StartResidual {
            residual: start_res,
        });
    }
    ws.cache_valid = true;

    let mut t = 0.0f64;
    let mut step = cfg.initial_step;
    let mut streak = 0u32;
    let mut accepted = 0usize;
    let mut attempts = 0usize;

    let early_status = loop {
        if t >= 1.0 {
            break None;
        }
        if attempts >= cfg.max_steps {
            break Some(PathStatus::Failed);
        }
        attempts += 1;
        let reaches_end = step >= 1.0 - t;
        let t1 = if reaches_end { 1.0 } else { t + step };

        let ok = rk4_predict(h, &z, t, t1, &mut ws, &mut rk, &mut z_next)
            && correct(h, t1, cfg, &mut ws, &mut z_next);
        if ok {
            z.copy_from_slice(&z_next);
            t = t1;
            accepted += 1;
            if inf_norm(&z) > cfg.divergence_norm {
                break Some(PathStatus::Diverged);
            }
            streak += 1;
            if streak >= GROWTH_STREAK {
                step = (step * STEP_GROWTH).min(MAX_STEP);
                streak = 0;
            }
        } else {
            ws.cache_valid = false;
            streak = 0;
            step *= 0.5;
            if step < cfg.min_step {
                break Some(PathStatus::Failed);
            }
        }
    };

    let result = match early_status {
        Some(status) => {
            let residual = target_residual(h, &z, &mut ws);
            PathResult {
                status,
                endpoint: z,
                residual,
                steps_taken: accepted,
                final_t: t,
            }
        }
        None => {
            let residual = refine_endpoint(h, cfg, &mut ws, &mut z);
            let status = if residual < cfg.endpoint_tol {
                PathStatus::Converged
            } else {
                PathStatus::Failed
            };
            PathResult {
                status,
                endpoint: z,
                residual,
                steps_taken: accepted,
                final_t: 1.0,
            }
        }
    };
    Ok(result)
}

/// Tracks every start point; paths are independent and run in parallel on
/// the current rayon pool. Per-path precondition violations are demoted to
/// `Failed` results so the batch never aborts. Results come back in input
/// order.
pub fn track_all<H: HomotopySystem>(
    h: &H,
    starts: &[Vec<Complex64>],
    cfg: &TrackerConfig,
) -> Vec<PathResult> {
    starts
        .par_iter()
        .map(|start| {
            track_path(h, start, cfg).unwrap_or_else(|err| {
                log::warn!("path rejected: {err}");
                PathResult {
                    status: PathStatus::Failed,
                    endpoint: start.clone(),
                    residual: f64::INFINITY,
                    steps_taken: 0,
                    final_t: 0.0,
                }
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{random_generic, CoefficientMode, SupportDescription};
    use crate::start::build_binomial_start;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// x^3 - x^2 + 2x - 1 as the tracking target.
    fn cubic_target() -> SparsePolynomial {
        SparsePolynomial::from_terms(
            1,
            vec![
                (ExponentVector::new(vec![3]), c(1.0, 0.0)),
                (ExponentVector::new(vec![2]), c(-1.0, 0.0)),
                (ExponentVector::new(vec![1]), c(2.0, 0.0)),
                (ExponentVector::new(vec![0]), c(-1.0, 0.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn lifted_homotopies_recover_all_cubic_roots() {
        // first cell: h1 = x^3 - x^2 + 2x t^3 - t, start 1
        let h1 = PolynomialHomotopy::new(vec![SparsePolynomial::from_terms(
            2,
            vec![
                (ExponentVector::new(vec![3, 0]), c(1.0, 0.0)),
                (ExponentVector::new(vec![2, 0]), c(-1.0, 0.0)),
                (ExponentVector::new(vec![1, 3]), c(2.0, 0.0)),
                (ExponentVector::new(vec![0, 1]), c(-1.0, 0.0)),
            ],
        )
        .unwrap()])
        .unwrap();
        // second cell, substituting s = sqrt(t):
        // h2 = x^3 s - x^2 + 2x s^5 - 1, starts ±i
        let h2 = PolynomialHomotopy::new(vec![SparsePolynomial::from_terms(
            2,
            vec![
                (ExponentVector::new(vec![3, 1]), c(1.0, 0.0)),
                (ExponentVector::new(vec![2, 0]), c(-1.0, 0.0)),
                (ExponentVector::new(vec![1, 5]), c(2.0, 0.0)),
                (ExponentVector::new(vec![0, 0]), c(-1.0, 0.0)),
            ],
        )
        .unwrap()])
        .unwrap();

        let cfg = TrackerConfig::default();
        let target = cubic_target();
        let mut endpoints = Vec::new();
        for (homotopy, starts) in [
            (&h1, vec![vec![c(1.0, 0.0)]]),
            (&h2, vec![vec![c(0.0, 1.0)], vec![c(0.0, -1.0)]]),
        ] {
            for start in starts {
                let path = track_path(homotopy, &start, &cfg).unwrap();
                assert_eq!(path.status, PathStatus::Converged);
                assert_eq!(path.final_t, 1.0);
                assert!(path.residual < 1e-10);
                let value = target.evaluate(&path.endpoint).unwrap();
                assert!(value.norm() < 1e-10, "f(endpoint) = {value}");
                endpoints.push(path.endpoint[0]);
            }
        }
        assert_eq!(endpoints.len(), 3);
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert!((endpoints[i] - endpoints[j]).norm() > 1e-3);
            }
        }
    }

    fn quadric_instance(seed: u64) -> (LinearObjectiveProblem, SquareSystem, Vec<Vec<Complex64>>) {
        let support = SupportDescription::dense(2, 2);
        let f = random_generic(2, &support, CoefficientMode::UnitComplex, seed).unwrap();
        let u = vec![1.0, -0.7];
        let c0 = f.coefficient(&ExponentVector::zero(2)).unwrap();
        let c1 = f.coefficient(&ExponentVector::axis(2, 0, 2)).unwrap();
        let c2 = f.coefficient(&ExponentVector::axis(2, 1, 2)).unwrap();
        let start = build_binomial_start(&u, &[c0, c1, c2], &[2, 2]).unwrap();
        let roots: Vec<_> = start.roots().collect();
        let problem = LinearObjectiveProblem::new(u, f).unwrap();
        (problem, start.system().clone(), roots)
    }

    #[test]
    fn straight_line_tracks_both_quadric_paths() {
        let (problem, start_system, roots) = quadric_instance(3);
        assert_eq!(roots.len(), 2);
        let gamma = Complex64::from_polar(1.0, 0.83);
        let homotopy = Homotopy::to_lagrange(start_system, &problem, gamma).unwrap();
        let results = track_all(&homotopy, &roots, &TrackerConfig::default());
        assert_eq!(results.len(), 2);
        for r in &results {
            assert_eq!(r.status, PathStatus::Converged);
            assert!(r.residual < 1e-10);
            assert!(
                homotopy.target_system().residual_inf(&r.endpoint).unwrap() < 1e-10
            );
        }
        let dist = results[0]
            .endpoint
            .iter()
            .zip(&results[1].endpoint)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(dist > 1e-6);
    }

    #[test]
    fn off_start_point_is_rejected() {
        let (problem, start_system, _) = quadric_instance(5);
        let gamma = Complex64::from_polar(1.0, 1.1);
        let homotopy = Homotopy::to_lagrange(start_system, &problem, gamma).unwrap();
        let bogus = vec![c(0.3, 0.1), c(-0.2, 0.4), c(1.0, 0.0)];
        match track_path(&homotopy, &bogus, &TrackerConfig::default()) {
            Err(TrackError::StartResidual { residual }) => assert!(residual >= 1e-8),
            other => panic!("expected start-residual rejection, got {other:?}"),
        }
    }

    #[test]
    fn empty_start_list_gives_empty_results() {
        let (problem, start_system, _) = quadric_instance(6);
        let homotopy =
            Homotopy::to_lagrange(start_system, &problem, Complex64::ONE).unwrap();
        let results = track_all(&homotopy, &[], &TrackerConfig::default());
        assert!(results.is_empty());
    }

    #[test]
    fn gamma_choice_does_not_change_endpoints() {
        let support = SupportDescription::dense(2, 3);
        let f = random_generic(2, &support, CoefficientMode::UnitComplex, 11).unwrap();
        let u = vec![0.9, 1.4];
        let c0 = f.coefficient(&ExponentVector::zero(2)).unwrap();
        let c1 = f.coefficient(&ExponentVector::axis(2, 0, 3)).unwrap();
        let c2 = f.coefficient(&ExponentVector::axis(2, 1, 3)).unwrap();
        let start = build_binomial_start(&u, &[c0, c1, c2], &[3, 3]).unwrap();
        let roots: Vec<_> = start.roots().collect();
        let problem = LinearObjectiveProblem::new(u, f).unwrap();

        let mut endpoint_sets = Vec::new();
        for angle in [0.37, 2.11] {
            let gamma = Complex64::from_polar(1.0, angle);
            let homotopy =
                Homotopy::to_lagrange(start.system().clone(), &problem, gamma).unwrap();
            let results = track_all(&homotopy, &roots, &TrackerConfig::default());
            assert!(results
                .iter()
                .all(|r| r.status == PathStatus::Converged));
            endpoint_sets.push(
                results
                    .into_iter()
                    .map(|r| r.endpoint)
                    .collect::<Vec<_>>(),
            );
        }
        let (a, b) = (&endpoint_sets[0], &endpoint_sets[1]);
        assert_eq!(a.len(), b.len());
        for pa in a {
            let nearest = b
                .iter()
                .map(|pb| {
                    pa.iter()
                        .zip(pb)
                        .map(|(x, y)| (x - y).norm())
                        .fold(0.0f64, f64::max)
                })
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-8, "endpoint mismatch across gammas: {nearest}");
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = TrackerConfig::default();
        cfg.min_step = 0.5;
        assert!(matches!(
            cfg.validate(),
            Err(TrackError::InvalidConfig(_))
        ));
    }
}
