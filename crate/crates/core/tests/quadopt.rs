use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use minfill::hypgeom::regular_polygon_perimeter;
use minfill::numeric::acosh;
use minfill::quadopt::{
    g_residuals, lambda0, length_412_closed_form, length_bound_412, minimize_objective, objective, p0,
    solve_at_theta, verify_lagrange, QuadError, QuadPoint,
};
use rand::{rngs::StdRng, Rng, SeedableRng};

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> Option<f64> {
    let mut fa = f(a);
    if fa.signum() == f(b).signum() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// `(θ₁, θ₂)` by nested bisection: the inner search solves the `cosh(l/2)`
/// constraint for `θ₁`, the outer one the two expressions for `cosh w`.
fn nested_bisection(theta: f64) -> Option<(f64, f64)> {
    let h = theta / 2.0;
    let cosh_l = (h.cos() + theta.cos() * h.cos()) / (theta.sin() * h.sin());
    let half = ((cosh_l + 1.0) / 2.0).sqrt();
    let inner = |t2: f64| {
        let g4 = |t1: f64| half - (t1.cos() - theta.cos() * t2.cos()) / (theta.sin() * t2.sin());
        bisect(g4, 1e-15, h - 1e-15)
    };
    let outer = |t2: f64| match inner(t2) {
        Some(t1) => {
            let up = (-theta.cos() + t1.cos() * t2.cos()) / (t1.sin() * t2.sin());
            let d = h - t1;
            let lo = (FRAC_1_SQRT_2 + d.cos() * t2.sin()) / (d.sin() * t2.cos());
            up - lo
        }
        None => f64::NAN,
    };
    let n = 4000;
    for k in 1..n - 1 {
        let (a, b) = (FRAC_PI_2 * k as f64 / n as f64, FRAC_PI_2 * (k + 1) as f64 / n as f64);
        let (fa, fb) = (outer(a), outer(b));
        if fa.is_finite() && fb.is_finite() && fa.signum() != fb.signum() {
            let t2 = bisect(outer, a, b)?;
            return Some((inner(t2)?, t2));
        }
    }
    None
}

#[test]
fn inner_solver_matches_bisection_oracle() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..20 {
        let theta = rng.gen_range(0.15..1.55);
        let s = solve_at_theta(theta).unwrap();
        let (t1, t2) = nested_bisection(theta).expect("oracle finds a root");
        assert!((s.theta1 - t1).abs() < 1e-8, "theta {theta}: theta1 {} vs {t1}", s.theta1);
        assert!((s.theta2 - t2).abs() < 1e-8, "theta {theta}: theta2 {} vs {t2}", s.theta2);
    }
}

#[test]
fn solutions_satisfy_invariants_on_grid() {
    for k in 1..157 {
        let theta = 0.01 * k as f64;
        let s = solve_at_theta(theta).unwrap();
        assert!(s.relative_residual() <= 1e-10, "theta {theta}");
        if theta >= 0.2 {
            assert!(s.max_residual() <= 1e-10, "theta {theta}: {}", s.max_residual());
        }
        assert!(s.theta1 > 0.0 && s.theta1 < theta / 2.0);
        assert!(s.theta2 > 0.0 && s.theta2 < FRAC_PI_2);
        // lower triangle, angles (π/4, θ/2 − θ₁, π/2 − θ₂), checked by hand
        let (a, b, c) = (FRAC_PI_4, theta / 2.0 - s.theta1, FRAC_PI_2 - s.theta2);
        let cosh_w = (a.cos() + b.cos() * c.cos()) / (b.sin() * c.sin());
        let cosh_z = (b.cos() + a.cos() * c.cos()) / (a.sin() * c.sin());
        let cosh_y = (c.cos() + a.cos() * b.cos()) / (a.sin() * b.sin());
        assert!((s.w.cosh() - cosh_w).abs() < 1e-9 * cosh_w);
        assert!((s.z.cosh() - cosh_z).abs() < 1e-9 * cosh_z);
        assert!((s.y.cosh() - cosh_y).abs() < 1e-9 * cosh_y);
        assert_eq!(s.objective, s.x + s.l);
    }
}

#[test]
fn exact_point_from_solver() {
    let s = solve_at_theta(0.2f64.acos()).unwrap();
    let p = p0();
    for (got, want) in [(s.x, p.x), (s.l, p.l), (s.theta1, p.theta1), (s.theta2, p.theta2)] {
        assert!((got - want).abs() < 1e-9);
    }
    assert!((s.w.cosh() - 19.0 / (2.0 * 5f64.sqrt())).abs() < 1e-9);
    assert!((s.x.cosh() - 3.5).abs() < 1e-9);
    assert!((s.l.cosh() - 1.5).abs() < 1e-9);
    assert!(((s.l / 2.0).cosh() - 5f64.sqrt() / 2.0).abs() < 1e-9);
}

#[test]
fn p0_residuals_and_perturbation() {
    let p = p0();
    let g = g_residuals(&p).unwrap();
    assert!(g.iter().all(|v| v.abs() < 1e-12), "{g:?}");
    let moved = QuadPoint { x: p.x + 0.1, ..p };
    let h = g_residuals(&moved).unwrap();
    // g₃ moves by cosh(x + 0.1) − cosh x ≈ 0.1 sinh x, the others stay put
    assert!((h[2] - 0.1 * p.x.sinh()).abs() < 0.01 * p.x.cosh());
    for i in [0, 1, 3] {
        assert_eq!(h[i], g[i]);
    }
    let collapsed = QuadPoint { theta: 1e-9, ..p };
    assert!(matches!(g_residuals(&collapsed), Err(QuadError::Domain(_))));
}

#[test]
fn objective_is_unimodal() {
    let values: Vec<f64> = (1..157).map(|k| objective(0.01 * k as f64).unwrap()).collect();
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let changes = diffs.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    assert_eq!(changes, 1);
    assert!(objective(1.0).unwrap() > objective(0.2f64.acos()).unwrap());
}

#[test]
fn minimum_is_the_exact_point() {
    let s = minimize_objective().unwrap();
    let p = p0();
    assert!((s.theta - p.theta).abs() < 1e-6);
    assert!((s.theta - 1.3694384).abs() < 1e-6);
    for (got, want) in [(s.x, p.x), (s.l, p.l), (s.theta1, p.theta1), (s.theta2, p.theta2)] {
        assert!((got - want).abs() < 1e-6);
    }
    assert!((s.objective - 3.0 * acosh(1.5)).abs() < 1e-9);
    assert!((s.objective - 2.8872710).abs() < 1e-6);
    let again = minimize_objective().unwrap();
    assert_eq!(s.theta.to_bits(), again.theta.to_bits());
    assert_eq!(s.objective.to_bits(), again.objective.to_bits());
}

#[test]
fn length_bound() {
    assert!((acosh(3.5) - 2.0 * acosh(1.5)).abs() < 1e-12);
    assert!((length_412_closed_form() - 11.5490838).abs() < 1e-7);
    let b = length_bound_412().unwrap();
    assert!((b - 11.5490838).abs() < 1e-5);
    assert!((b - length_412_closed_form()).abs() < 1e-9);
    assert!(b < minfill::hypgeom::length_bound_88());
}

#[test]
fn square_face_matches_regular_polygon() {
    // the 4-gon of the {4,12} pair is regular with angle θ* and side l
    let p = p0();
    let per = regular_polygon_perimeter(4, 2.0 * PI - 4.0 * p.theta).unwrap();
    assert!((per - 4.0 * p.l).abs() < 1e-10);
}

#[test]
fn lagrange_certificate() {
    let c = verify_lagrange(&p0(), lambda0()).unwrap();
    assert!(c.constraint_residual <= 1e-10);
    assert!(c.gradient_residual <= 1e-6, "{}", c.gradient_residual);

    let zero = verify_lagrange(&p0(), [0.0; 4]).unwrap();
    assert!((zero.gradient_residual - 1.0).abs() < 1e-12);

    let mut q = p0();
    q.theta += 1e-3;
    let off = verify_lagrange(&q, lambda0()).unwrap();
    assert!(off.constraint_residual > 1e-5);
}

#[test]
fn multipliers_from_closed_form_partials() {
    // ∂/∂x: 1 − λ₃ sinh x = 0; ∂/∂l: 1 − λ₂ sinh l − λ₄ sinh(l/2)/2 = 0
    let p = p0();
    let l = lambda0();
    assert!((1.0 - l[2] * p.x.sinh()).abs() < 1e-12);
    assert!((1.0 - l[1] * p.l.sinh() - l[3] * (p.l / 2.0).sinh() / 2.0).abs() < 1e-12);
    assert!((p.x.sinh() - (45f64 / 4.0).sqrt()).abs() < 1e-12);
    assert!((p.l.sinh() - 5f64.sqrt() / 2.0).abs() < 1e-12);
}

#[test]
fn domain_is_open() {
    assert!(solve_at_theta(0.0).is_err());
    assert!(solve_at_theta(FRAC_PI_2).is_err());
    assert!(solve_at_theta(-0.3).is_err());
}
