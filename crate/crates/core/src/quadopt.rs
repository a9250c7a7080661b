//! Length minimization for `{4,12}` filling pairs.
//!
//! By symmetry the 12-gon is tiled by eight copies of one quadrilateral with
//! angles `π/4, π/2, π − θ, θ/2`, a side `l/2` and free sides `x, y, z`. The
//! square face is the regular quadrilateral with angle `θ` and side `l`.
//! Splitting the quadrilateral along an auxiliary geodesic `w` gives two
//! triangles:
//!
//! * angles `(π − θ, θ₁, θ₂)` with `w`, `l/2`, `x` opposite them;
//! * angles `(π/4, θ/2 − θ₁, π/2 − θ₂)` with `w`, `z`, `y` opposite them.
//!
//! For a fixed `θ` the constraints determine everything, so the length
//! `4(x + l)` becomes a function of one variable.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::hypgeom::{AnglesTriple, Opposite};
use crate::numeric::{self, acosh};
use crate::precision;

/// Residual tolerance required of every reported solution, relative to
/// [`QuadSolution::residual_scale`].
pub const SOLVER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no feasible configuration at theta = {theta}")]
    Infeasible { theta: f64 },
    #[error("solver failed at theta = {theta}: {}", trace.join("; "))]
    SolverFailure { theta: f64, trace: Vec<String> },
}

fn domain(msg: impl Into<String>) -> QuadError {
    QuadError::Domain(msg.into())
}

/// A point `(x, l, θ, θ₁, θ₂)` of the constrained problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadPoint {
    #[serde(serialize_with = "precision::ser")]
    pub x: f64,
    #[serde(serialize_with = "precision::ser")]
    pub l: f64,
    #[serde(serialize_with = "precision::ser")]
    pub theta: f64,
    #[serde(serialize_with = "precision::ser")]
    pub theta1: f64,
    #[serde(serialize_with = "precision::ser")]
    pub theta2: f64,
}

impl QuadPoint {
    pub fn to_array(self) -> [f64; 5] {
        [self.x, self.l, self.theta, self.theta1, self.theta2]
    }

    pub fn from_array(v: [f64; 5]) -> Self {
        QuadPoint {
            x: v[0],
            l: v[1],
            theta: v[2],
            theta1: v[3],
            theta2: v[4],
        }
    }
}

/// The exact minimizer.
pub fn p0() -> QuadPoint {
    QuadPoint {
        x: acosh(3.5),
        l: acosh(1.5),
        theta: (0.2f64).acos(),
        theta1: (2.0 * 6f64.sqrt() / 41.0).atan(),
        theta2: (6.0 * 30f64.sqrt() / 25.0).atan(),
    }
}

/// The Lagrange multipliers certifying [`p0`].
pub fn lambda0() -> [f64; 4] {
    let r5 = 5f64.sqrt();
    [70.0 / 341.0, 3.0 / (5.0 * r5), 2.0 / (3.0 * r5), 14.0 / 5.0]
}

fn check_angles(theta: f64, theta1: f64, theta2: f64) -> Result<(), QuadError> {
    if !(theta > 0.0 && theta < PI) {
        return Err(domain(format!("theta = {theta} outside (0, pi)")));
    }
    if !(theta1 > 0.0) {
        return Err(domain(format!("theta1 = {theta1} is not positive")));
    }
    if !(theta / 2.0 - theta1 > 0.0) {
        return Err(domain(format!("theta/2 - theta1 = {} is not positive", theta / 2.0 - theta1)));
    }
    if !(theta2 > 0.0 && theta2 < FRAC_PI_2) {
        return Err(domain(format!("theta2 = {theta2} outside (0, pi/2)")));
    }
    Ok(())
}

/// `cosh w` from the upper triangle.
fn cosh_w_upper(theta: f64, t1: f64, t2: f64) -> f64 {
    (-theta.cos() + t1.cos() * t2.cos()) / (t1.sin() * t2.sin())
}

/// `cosh w` from the lower triangle.
fn cosh_w_lower(theta: f64, t1: f64, t2: f64) -> f64 {
    let d = theta / 2.0 - t1;
    (FRAC_1_SQRT_2 + d.cos() * t2.sin()) / (d.sin() * t2.cos())
}

/// Right-hand side of the `cosh l` constraint.
pub fn cosh_l_of_theta(theta: f64) -> f64 {
    let h = theta / 2.0;
    (h.cos() + theta.cos() * h.cos()) / (theta.sin() * h.sin())
}

fn cosh_x_rhs(theta: f64, t1: f64, t2: f64) -> f64 {
    (t2.cos() - theta.cos() * t1.cos()) / (theta.sin() * t1.sin())
}

fn cosh_half_l_rhs(theta: f64, t1: f64, t2: f64) -> f64 {
    (t1.cos() - theta.cos() * t2.cos()) / (theta.sin() * t2.sin())
}

/// The constraint values `(g₁, g₂, g₃, g₄)`.
pub fn g_residuals(p: &QuadPoint) -> Result<[f64; 4], QuadError> {
    let QuadPoint { x, l, theta, theta1: t1, theta2: t2 } = *p;
    check_angles(theta, t1, t2)?;
    Ok([
        cosh_w_upper(theta, t1, t2) - cosh_w_lower(theta, t1, t2),
        l.cosh() - cosh_l_of_theta(theta),
        x.cosh() - cosh_x_rhs(theta, t1, t2),
        (l / 2.0).cosh() - cosh_half_l_rhs(theta, t1, t2),
    ])
}

/// How the inner `(θ₁, θ₂)` system was solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverPath {
    Newton { iterations: usize },
    Bisection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadSolution {
    #[serde(serialize_with = "precision::ser")]
    pub theta: f64,
    #[serde(serialize_with = "precision::ser")]
    pub theta1: f64,
    #[serde(serialize_with = "precision::ser")]
    pub theta2: f64,
    #[serde(serialize_with = "precision::ser")]
    pub l: f64,
    #[serde(serialize_with = "precision::ser")]
    pub x: f64,
    #[serde(serialize_with = "precision::ser")]
    pub w: f64,
    #[serde(serialize_with = "precision::ser")]
    pub y: f64,
    #[serde(serialize_with = "precision::ser")]
    pub z: f64,
    #[serde(serialize_with = "precision::ser")]
    pub objective: f64,
    #[serde(serialize_with = "precision::ser_slice")]
    pub residuals: [f64; 4],
    pub solver: SolverPath,
}

impl QuadSolution {
    pub fn point(&self) -> QuadPoint {
        QuadPoint {
            x: self.x,
            l: self.l,
            theta: self.theta,
            theta1: self.theta1,
            theta2: self.theta2,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// Size of the terms being cancelled in the constraints, at least 1.
    /// Near `θ = 0` the `cosh` values grow without bound and an absolute
    /// residual below `1e-10` is no longer representable.
    pub fn residual_scale(&self) -> f64 {
        [1.0, self.w.cosh(), self.x.cosh(), self.l.cosh()]
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// [`max_residual`](Self::max_residual) divided by the residual scale.
    pub fn relative_residual(&self) -> f64 {
        self.max_residual() / self.residual_scale()
    }

    /// Curve length `4(x + l)` of the corresponding filling pair.
    pub fn length(&self) -> f64 {
        4.0 * self.objective
    }
}

/// `(g₁, g₄)` as a function of `(θ₁, θ₂)` for fixed `θ` and `l`.
fn inner_system(theta: f64, l: f64, t1: f64, t2: f64) -> Option<[f64; 2]> {
    check_angles(theta, t1, t2).ok()?;
    let r = [
        cosh_w_upper(theta, t1, t2) - cosh_w_lower(theta, t1, t2),
        (l / 2.0).cosh() - cosh_half_l_rhs(theta, t1, t2),
    ];
    r.iter().all(|v| v.is_finite()).then_some(r)
}

fn norm(r: [f64; 2]) -> f64 {
    r[0].abs().max(r[1].abs())
}

/// Damped Newton with a central-difference Jacobian.
fn newton(theta: f64, l: f64, trace: &mut Vec<String>) -> Option<(f64, f64, usize)> {
    let (mut t1, mut t2) = (theta / 4.0, FRAC_PI_4);
    let mut r = inner_system(theta, l, t1, t2)?;
    let h = 1e-7;
    for it in 0..60 {
        if norm(r) <= 1e-13 {
            return Some((t1, t2, it));
        }
        let col = |d1: f64, d2: f64| -> Option<[f64; 2]> {
            let p = inner_system(theta, l, t1 + d1, t2 + d2)?;
            let m = inner_system(theta, l, t1 - d1, t2 - d2)?;
            Some([(p[0] - m[0]) / (2.0 * h), (p[1] - m[1]) / (2.0 * h)])
        };
        let (Some(c1), Some(c2)) = (col(h, 0.0), col(0.0, h)) else {
            trace.push(format!("newton it {it}: jacobian left the domain"));
            return None;
        };
        let det = c1[0] * c2[1] - c2[0] * c1[1];
        if det == 0.0 || !det.is_finite() {
            trace.push(format!("newton it {it}: singular jacobian"));
            return None;
        }
        let s1 = (r[0] * c2[1] - c2[0] * r[1]) / det;
        let s2 = (c1[0] * r[1] - r[0] * c1[1]) / det;
        let mut damp = 1.0;
        loop {
            let (n1, n2) = (t1 - damp * s1, t2 - damp * s2);
            if let Some(nr) = inner_system(theta, l, n1, n2) {
                if norm(nr) < norm(r) {
                    t1 = n1;
                    t2 = n2;
                    r = nr;
                    break;
                }
            }
            damp *= 0.5;
            if damp < 1e-10 {
                trace.push(format!("newton it {it}: line search stalled at |F| = {:e}", norm(r)));
                return (norm(r) <= SOLVER_TOL * 1e-2).then_some((t1, t2, it));
            }
        }
    }
    trace.push(format!("newton: no convergence, |F| = {:e}", norm(r)));
    None
}

/// `θ₁` from the `cosh(l/2)` constraint given `θ₂`, when it lies in `(0, θ/2)`.
fn theta1_from_theta2(theta: f64, l: f64, t2: f64) -> Option<f64> {
    let c = (l / 2.0).cosh() * theta.sin() * t2.sin() + theta.cos() * t2.cos();
    if !(-1.0..=1.0).contains(&c) {
        return None;
    }
    let t1 = c.acos();
    (t1 > 0.0 && t1 < theta / 2.0).then_some(t1)
}

/// Intervals of `θ₂` on which [`theta1_from_theta2`] lands in `(0, θ/2)`.
///
/// Writing `cos θ₁ = R cos(θ₂ − φ)` with `R > 1`, the condition
/// `cos(θ/2) < cos θ₁ < 1` leaves two windows symmetric about `φ`.
fn theta2_windows(theta: f64, l: f64) -> Vec<(f64, f64)> {
    let a = (l / 2.0).cosh() * theta.sin();
    let b = theta.cos();
    let r = a.hypot(b);
    let phi = a.atan2(b);
    let inner = (1.0 / r).acos();
    let outer = ((theta / 2.0).cos() / r).clamp(-1.0, 1.0).acos();
    [(phi + inner, phi + outer), (phi - outer, phi - inner)]
        .into_iter()
        .map(|(lo, hi)| (lo.max(0.0), hi.min(FRAC_PI_2)))
        .filter(|(lo, hi)| lo < hi)
        .collect()
}

/// Scan `θ₂` for a sign change of `g₁` along the `g₄ = 0` curve, then bisect.
fn bisection_fallback(theta: f64, l: f64, trace: &mut Vec<String>) -> Option<(f64, f64)> {
    let h = |t2: f64| {
        theta1_from_theta2(theta, l, t2)
            .and_then(|t1| inner_system(theta, l, t1, t2))
            .map_or(f64::NAN, |r| r[0])
    };
    let n = 2000;
    for (lo, hi) in theta2_windows(theta, l) {
        let pts: Vec<f64> = (1..n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
        for w in pts.windows(2) {
            let (a, b) = (h(w[0]), h(w[1]));
            if a.is_finite() && b.is_finite() && a.signum() != b.signum() {
                let t2 = numeric::bisect(h, w[0], w[1], 0.0)?;
                let t1 = theta1_from_theta2(theta, l, t2)?;
                return Some((t1, t2));
            }
        }
    }
    trace.push("bisection: no sign change of g1 along g4 = 0".into());
    None
}

/// Solves all remaining variables for the given `θ ∈ (0, π/2)`.
pub fn solve_at_theta(theta: f64) -> Result<QuadSolution, QuadError> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(domain(format!("theta = {theta} outside (0, pi/2)")));
    }
    let l = acosh(cosh_l_of_theta(theta));
    let mut trace = Vec::new();
    let (theta1, theta2, solver) = match newton(theta, l, &mut trace) {
        Some((t1, t2, iterations)) => (t1, t2, SolverPath::Newton { iterations }),
        None => match bisection_fallback(theta, l, &mut trace) {
            Some((t1, t2)) => (t1, t2, SolverPath::Bisection),
            None => return Err(QuadError::Infeasible { theta }),
        },
    };

    let cx = cosh_x_rhs(theta, theta1, theta2);
    if !(cx >= 1.0) {
        trace.push(format!("cosh x = {cx} below 1"));
        return Err(QuadError::SolverFailure { theta, trace });
    }
    let x = acosh(cx);
    let upper = AnglesTriple::new(PI - theta, theta1, theta2).map_err(|e| domain(e.to_string()))?;
    let lower = AnglesTriple::new(FRAC_PI_4, theta / 2.0 - theta1, FRAC_PI_2 - theta2)
        .map_err(|e| domain(e.to_string()))?;
    let w = upper.side(Opposite::A);
    let z = lower.side(Opposite::B);
    let y = lower.side(Opposite::C);

    let sol = QuadSolution {
        theta,
        theta1,
        theta2,
        l,
        x,
        w,
        y,
        z,
        objective: x + l,
        residuals: g_residuals(&QuadPoint { x, l, theta, theta1, theta2 })?,
        solver,
    };
    if sol.relative_residual() > SOLVER_TOL {
        trace.push(format!("relative residual {:e} above tolerance", sol.relative_residual()));
        return Err(QuadError::SolverFailure { theta, trace });
    }
    Ok(sol)
}

/// `x(θ) + l(θ)`.
pub fn objective(theta: f64) -> Result<f64, QuadError> {
    Ok(solve_at_theta(theta)?.objective)
}

fn objective_or_inf(theta: f64) -> Result<f64, QuadError> {
    match objective(theta) {
        Ok(v) => Ok(v),
        Err(QuadError::Infeasible { .. }) | Err(QuadError::Domain(_)) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Grid step of the bracketing scan in [`minimize_objective`].
pub const GRID_STEP: f64 = 0.01;

/// Minimizes `x + l` over `θ ∈ (0, π/2)`: a grid scan brackets the minimum
/// and golden-section search refines it.
pub fn minimize_objective() -> Result<QuadSolution, QuadError> {
    let thetas: Vec<f64> = numeric::grid(GRID_STEP, FRAC_PI_2 - 1e-9, GRID_STEP);
    let mut best = (0, f64::INFINITY);
    for (k, &t) in thetas.iter().enumerate() {
        let v = objective_or_inf(t)?;
        if v < best.1 {
            best = (k, v);
        }
    }
    if !best.1.is_finite() {
        return Err(QuadError::Infeasible { theta: f64::NAN });
    }
    let k = best.0;
    let a = if k == 0 { GRID_STEP / 2.0 } else { thetas[k - 1] };
    let b = thetas.get(k + 1).copied().unwrap_or(FRAC_PI_2 - 1e-9);
    let (theta, _) = numeric::golden_section(
        |t| objective_or_inf(t).unwrap_or(f64::INFINITY),
        a,
        b,
        1e-10,
    );
    solve_at_theta(theta)
}

/// Lower bound `4 · min(x + l)` on the length of a `{4,12}` filling pair.
pub fn length_bound_412() -> Result<f64, QuadError> {
    Ok(minimize_objective()?.length())
}

/// `6 acosh(7/2)`.
pub fn length_412_closed_form() -> f64 {
    6.0 * acosh(3.5)
}

/// Stationarity and feasibility residuals of a Lagrange multiplier guess.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagrangeCertificate {
    pub point: QuadPoint,
    #[serde(serialize_with = "precision::ser_slice")]
    pub multipliers: [f64; 4],
    /// `‖∇(x + l) − Σ λᵢ ∇gᵢ‖∞`.
    #[serde(serialize_with = "precision::ser")]
    pub gradient_residual: f64,
    /// `max |gᵢ|`.
    #[serde(serialize_with = "precision::ser")]
    pub constraint_residual: f64,
}

/// Step of the finite differences in [`verify_lagrange`].
pub const LAGRANGE_FD_STEP: f64 = 1e-6;

/// Evaluates the Lagrange conditions at `point` with Richardson-extrapolated
/// central differences.
pub fn verify_lagrange(point: &QuadPoint, multipliers: [f64; 4]) -> Result<LagrangeCertificate, QuadError> {
    let g0 = g_residuals(point)?;
    let base = point.to_array();
    let objective_grad = [1.0, 1.0, 0.0, 0.0, 0.0];
    let mut residual = [0.0; 5];
    for j in 0..5 {
        let mut grads = [0.0; 4];
        for (i, gi) in grads.iter_mut().enumerate() {
            let along = |t: f64| {
                let mut v = base;
                v[j] = t;
                g_residuals(&QuadPoint::from_array(v)).map_or(f64::NAN, |g| g[i])
            };
            *gi = numeric::richardson_derivative(along, base[j], LAGRANGE_FD_STEP);
        }
        if grads.iter().any(|g| !g.is_finite()) {
            return Err(domain(format!("finite difference left the domain in coordinate {j}")));
        }
        residual[j] = objective_grad[j]
            - multipliers.iter().zip(&grads).map(|(l, g)| l * g).sum::<f64>();
    }
    Ok(LagrangeCertificate {
        point: *point,
        multipliers,
        gradient_residual: residual.iter().fold(0.0, |m, r| m.max(r.abs())),
        constraint_residual: g0.iter().fold(0.0, |m, r| m.max(r.abs())),
    })
}

/// Writes one CSV row per feasible `θ`; infeasible points are skipped.
pub fn write_objective_sweep<W: Write>(out: W, thetas: &[f64]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theta", "theta1", "theta2", "l", "x", "w", "y", "z", "objective"])?;
    for &t in thetas {
        if let Ok(s) = solve_at_theta(t) {
            let row = [s.theta, s.theta1, s.theta2, s.l, s.x, s.w, s.y, s.z, s.objective];
            w.write_record(row.iter().map(|v| precision::sig12(*v)))?;
        }
    }
    w.flush()?;
    Ok(())
}
