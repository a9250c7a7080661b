//! Hyperbolic trigonometry and the length bound for `{8,8}` filling pairs.
//!
//! For an `{8,8}` pair the two complementary octagons have areas `2π − θ` and
//! `2π + θ`, where `θ` is a signed sum of intersection angles. Replacing each
//! octagon by the regular octagon of the same area can only shorten the
//! perimeter, so the curve length is bounded below by half of
//!
//! ```text
//! f8(θ) = Perim(regular octagon, 2π − θ) + Perim(regular octagon, 2π + θ)
//! ```
//!
//! which is minimized at `θ = 0` by two right-angled regular octagons.

use std::f64::consts::{PI, SQRT_2};
use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::numeric::{self, acosh};
use crate::precision;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("domain error: {0}")]
    Domain(String),
}

fn domain(msg: impl Into<String>) -> GeometryError {
    GeometryError::Domain(msg.into())
}

/// Interior angles of a hyperbolic triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnglesTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Selects the side opposite one of the three angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Opposite {
    A,
    B,
    C,
}

impl AnglesTriple {
    /// A hyperbolic triangle exists iff all angles are positive and their sum
    /// is less than `π`.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, GeometryError> {
        if !(a > 0.0 && b > 0.0 && c > 0.0) {
            return Err(domain(format!("non-positive angle in ({a}, {b}, {c})")));
        }
        if a + b + c >= PI {
            return Err(domain(format!("angle sum {} is not below pi", a + b + c)));
        }
        Ok(AnglesTriple { a, b, c })
    }

    /// `cosh` of the side opposite the chosen angle, from the second law of
    /// cosines `cosh a = (cos A + cos B cos C) / (sin B sin C)`.
    pub fn side_cosh(&self, opposite: Opposite) -> f64 {
        let (x, y, z) = match opposite {
            Opposite::A => (self.a, self.b, self.c),
            Opposite::B => (self.b, self.c, self.a),
            Opposite::C => (self.c, self.a, self.b),
        };
        (x.cos() + y.cos() * z.cos()) / (y.sin() * z.sin())
    }

    pub fn side(&self, opposite: Opposite) -> f64 {
        acosh(self.side_cosh(opposite).max(1.0))
    }

    /// Gauss–Bonnet area `π − (A + B + C)`.
    pub fn area(&self) -> f64 {
        PI - (self.a + self.b + self.c)
    }
}

/// Length of the side opposite `opposite` in the triangle with angles `(a, b, c)`.
pub fn triangle_side(a: f64, b: f64, c: f64, opposite: Opposite) -> Result<f64, GeometryError> {
    Ok(AnglesTriple::new(a, b, c)?.side(opposite))
}

/// Gauss–Bonnet area `(n − 2)π − Σ angles` of a hyperbolic n-gon.
pub fn polygon_area(angles: &[f64]) -> Result<f64, GeometryError> {
    if angles.len() < 3 {
        return Err(domain(format!("a polygon needs 3 or more angles, got {}", angles.len())));
    }
    let area = (angles.len() as f64 - 2.0) * PI - angles.iter().sum::<f64>();
    if area <= 0.0 {
        return Err(domain(format!("angles give non-positive area {area}")));
    }
    Ok(area)
}

/// Interior angle of the regular n-gon with the given area.
pub fn regular_polygon_angle(n: u32, area: f64) -> Result<f64, GeometryError> {
    if n < 3 {
        return Err(domain(format!("a polygon needs 3 or more sides, got {n}")));
    }
    let max = (n as f64 - 2.0) * PI;
    if !(area > 0.0 && area < max) {
        return Err(domain(format!("area {area} outside (0, {max}) for a {n}-gon")));
    }
    Ok((max - area) / n as f64)
}

/// `cosh` of the side of the regular n-gon with interior angle `gamma`:
/// `(cos(2π/n) + cos²(γ/2)) / sin²(γ/2)`.
pub fn regular_polygon_side_cosh(n: u32, gamma: f64) -> f64 {
    let h = 0.5 * gamma;
    let (s, c) = h.sin_cos();
    ((2.0 * PI / n as f64).cos() + c * c) / (s * s)
}

/// Perimeter of the regular hyperbolic n-gon with the given area.
pub fn regular_polygon_perimeter(n: u32, area: f64) -> Result<f64, GeometryError> {
    let gamma = regular_polygon_angle(n, area)?;
    Ok(n as f64 * acosh(regular_polygon_side_cosh(n, gamma)))
}

/// Angle excess of an `{8,8}` configuration and the octagon areas it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OctagonPairState {
    pub theta: f64,
}

impl OctagonPairState {
    pub fn new(theta: f64) -> Result<Self, GeometryError> {
        if !(theta.abs() < 2.0 * PI) {
            return Err(domain(format!("theta {theta} outside (-2pi, 2pi)")));
        }
        Ok(OctagonPairState { theta })
    }

    /// `(2π − θ, 2π + θ)`, summing to `4π`.
    pub fn areas(&self) -> (f64, f64) {
        (2.0 * PI - self.theta, 2.0 * PI + self.theta)
    }
}

/// Sum of the perimeters of the regular octagons with areas `2π ∓ θ`.
pub fn f8(theta: f64) -> Result<f64, GeometryError> {
    let (a1, a2) = OctagonPairState::new(theta)?.areas();
    Ok(regular_polygon_perimeter(8, a1)? + regular_polygon_perimeter(8, a2)?)
}

/// `f8` in simplified form, with `s = sin(θ/8)`:
/// `8 acosh((√2+1−s)/(1+s)) + 8 acosh((√2+1+s)/(1−s))`.
pub fn f8_closed_form(theta: f64) -> Result<f64, GeometryError> {
    OctagonPairState::new(theta)?;
    let c = SQRT_2 + 1.0;
    let s = (theta / 8.0).sin();
    Ok(8.0 * acosh((c - s) / (1.0 + s)) + 8.0 * acosh((c + s) / (1.0 - s)))
}

/// Analytic derivative of [`f8_closed_form`].
pub fn f8_derivative(theta: f64) -> Result<f64, GeometryError> {
    OctagonPairState::new(theta)?;
    let c = SQRT_2 + 1.0;
    let (s, co) = (theta / 8.0).sin_cos();
    let u1 = (c - s) / (1.0 + s);
    let u2 = (c + s) / (1.0 - s);
    let t1 = -1.0 / ((1.0 + s).powi(2) * (u1 * u1 - 1.0).sqrt());
    let t2 = 1.0 / ((1.0 - s).powi(2) * (u2 * u2 - 1.0).sqrt());
    Ok(co * (1.0 + c) * (t1 + t2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct F8Minimum {
    #[serde(serialize_with = "precision::ser")]
    pub theta: f64,
    #[serde(serialize_with = "precision::ser")]
    pub value: f64,
}

/// Minimizer of `f8` over the whole domain `(−2π, 2π)`.
pub fn minimize_f8() -> F8Minimum {
    let edge = 2.0 * PI * (1.0 - 1e-12);
    minimize_f8_on(-edge, edge).expect("interior interval is inside the domain")
}

/// Minimizer of `f8` on `[lo, hi]`.
///
/// Scans the sign of `f8′` on a 64-interval grid. Each `−/+` sign change is
/// refined by golden-section search and then polished by bisection on `f8′`.
/// The result is the smallest of these local minima and the two endpoints.
pub fn minimize_f8_on(lo: f64, hi: f64) -> Result<F8Minimum, GeometryError> {
    if !(lo < hi) {
        return Err(domain(format!("empty interval [{lo}, {hi}]")));
    }
    let f = |t: f64| f8(t).unwrap_or(f64::INFINITY);
    let df = |t: f64| f8_derivative(t).unwrap_or(f64::NAN);
    let steps = 64;
    let pts: Vec<f64> = (0..=steps)
        .map(|k| lo + (hi - lo) * k as f64 / steps as f64)
        .collect();
    let mut slopes = Vec::with_capacity(pts.len());
    for &t in &pts {
        slopes.push(f8_derivative(t)?);
    }

    let mut best = F8Minimum { theta: lo, value: f8(lo)? };
    let mut consider = |theta: f64| -> Result<(), GeometryError> {
        let value = f8(theta)?;
        if value < best.value {
            best = F8Minimum { theta, value };
        }
        Ok(())
    };
    consider(hi)?;
    for k in 0..steps {
        if slopes[k] < 0.0 && slopes[k + 1] >= 0.0 {
            let (a, b) = (pts[k], pts[k + 1]);
            let (tg, _) = numeric::golden_section(f, a, b, 1e-9);
            let w = 1e-6;
            let (pa, pb) = ((tg - w).max(a), (tg + w).min(b));
            consider(numeric::bisect(df, pa, pb, 0.0).unwrap_or(tg))?;
        }
    }
    Ok(best)
}

/// Location `8 asin(√(√2 − 1))` of the two interior maxima of `f8`, where
/// `(1 + s)²(√2 − 2s) = (1 − s)²(√2 + 2s)` with `s ≠ 0`.
pub fn f8_local_max_theta() -> f64 {
    8.0 * (SQRT_2 - 1.0).sqrt().asin()
}

/// Lower bound on the length of an `{8,8}` filling pair: every arc bounds two
/// faces, so the length is half the perimeter sum.
pub fn length_bound_88() -> f64 {
    0.5 * minimize_f8().value
}

/// `8 acosh(1 + √2)`, the perimeter of the right-angled regular octagon.
pub fn length_88_closed_form() -> f64 {
    8.0 * acosh(1.0 + SQRT_2)
}

/// Writes `theta,f8,fd_derivative` rows. The derivative column is a
/// Richardson-extrapolated central difference with step `1e-4`.
pub fn write_f8_sweep<W: Write>(out: W, thetas: &[f64]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theta", "f8", "fd_derivative"])?;
    for &t in thetas {
        let v = f8(t).unwrap_or(f64::NAN);
        let d = numeric::richardson_derivative(|x| f8(x).unwrap_or(f64::NAN), t, 1e-4);
        w.write_record([precision::sig12(t), precision::sig12(v), precision::sig12(d)])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilateral_right_eighth_triangle() {
        let q = PI / 4.0;
        let t = AnglesTriple::new(q, q, q).unwrap();
        for o in [Opposite::A, Opposite::B, Opposite::C] {
            assert!((t.side_cosh(o) - (SQRT_2 + 1.0)).abs() < 1e-12);
        }
        assert!((triangle_side(q, q, q, Opposite::A).unwrap() - acosh(1.0 + SQRT_2)).abs() < 1e-12);
    }

    #[test]
    fn triangle_domain_errors() {
        assert!(AnglesTriple::new(0.0, 1.0, 1.0).is_err());
        assert!(AnglesTriple::new(-0.1, 1.0, 1.0).is_err());
        assert!(AnglesTriple::new(1.0, 1.0, PI - 2.0).is_err());
        assert!(triangle_side(1.0, 1.0, 1.2, Opposite::B).is_err());
    }

    #[test]
    fn gauss_bonnet_areas() {
        assert!((polygon_area(&[PI / 2.0; 8]).unwrap() - 2.0 * PI).abs() < 1e-12);
        for theta in [0.3, 0.9, 1.4] {
            let a = polygon_area(&[PI / 4.0, PI / 2.0, PI - theta, theta / 2.0]).unwrap();
            // eight copies tile the 12-gon of area 2π + 4θ
            assert!((a - (PI / 4.0 + theta / 2.0)).abs() < 1e-12, "theta {theta}: {a}");
            assert!((8.0 * a - (2.0 * PI + 4.0 * theta)).abs() < 1e-12);
        }
        let eps = 1e-9;
        let tiny = polygon_area(&[PI / 3.0, PI / 3.0, PI / 3.0 - eps]).unwrap();
        assert!(tiny > 0.0 && tiny < 2.0 * eps);
        assert!(polygon_area(&[PI / 3.0; 3]).is_err());
        assert!(polygon_area(&[0.1, 0.1]).is_err());
    }

    #[test]
    fn regular_octagon_of_area_two_pi() {
        let p = regular_polygon_perimeter(8, 2.0 * PI).unwrap();
        assert!((p - 8.0 * acosh(1.0 + SQRT_2)).abs() < 1e-10);
        assert!((p - 12.228567).abs() < 1e-6);
        assert!((regular_polygon_angle(8, 2.0 * PI).unwrap() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn regular_polygon_domain() {
        assert!(regular_polygon_perimeter(8, 6.0 * PI).is_err());
        assert!(regular_polygon_perimeter(8, 0.0).is_err());
        assert!(regular_polygon_perimeter(2, 1.0).is_err());
    }

    #[test]
    fn octagon_pair_areas_sum_to_four_pi() {
        let s = OctagonPairState::new(1.3).unwrap();
        let (a, b) = s.areas();
        assert!(a > 0.0 && b > 0.0);
        assert!((a + b - 4.0 * PI).abs() < 1e-12);
        assert!(OctagonPairState::new(2.0 * PI).is_err());
        assert!(f8(-7.0).is_err());
    }

    #[test]
    fn f8_at_zero_and_symmetry() {
        let v = f8(0.0).unwrap();
        assert!((v - 16.0 * acosh(1.0 + SQRT_2)).abs() < 1e-10);
        assert!((v - 24.457135).abs() < 1e-6);
        for t in [0.1, 1.0, 2.5, 5.0, 6.2] {
            assert!((f8(t).unwrap() - f8(-t).unwrap()).abs() < 1e-10);
        }
        assert_eq!(f8_derivative(0.0).unwrap(), 0.0);
    }

    #[test]
    fn boundary_minimum_on_positive_interval() {
        let m = minimize_f8_on(1.0, 2.0).unwrap();
        assert_eq!(m.theta, 1.0);
        let m = minimize_f8_on(-2.0, -1.0).unwrap();
        assert_eq!(m.theta, -1.0);
        assert!(minimize_f8_on(1.0, 1.0).is_err());
    }

    #[test]
    fn sweep_has_header_and_rows() {
        let mut buf = Vec::new();
        write_f8_sweep(&mut buf, &[-1.0, 0.0, 1.0]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "theta,f8,fd_derivative");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("0,24.4571347117,"));
    }
}
