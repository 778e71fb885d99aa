//! Smoothed turn: a convex C-infinity graph that is flat at `t = 0`, agrees
//! with a circular arc of radius `1 / sin(alpha)` to first order at `t = 1`
//! and is linear beyond the smoothing window.
//!
//! `G = K_h * A` where `A` is the tangent-line envelope of the arc. Since `A`
//! is piecewise linear, `G(t) = C'(1) [(t - t*) M0(u) - M1(u)]` with
//! `u = t - t*` clamped to the kernel support and `M0`, `M1` the first two
//! truncated moments of the kernel, so only the kernel itself is integrated.

use std::f64::consts::PI;

use super::quad::{adaptive_simpson, gauss_legendre8};
use crate::error::{Error, Result};
use crate::geometry::PointCloud;

pub const WIDGET_BANDWIDTH: f64 = 0.01;
const PANELS: usize = 256;

fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

fn bump_prime(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        let q = 1.0 - s * s;
        -2.0 * s / (q * q) * bump(s)
    }
}

#[derive(Debug, Clone)]
pub struct TurnWidget {
    pub alpha: f64,
    pub r_alpha: f64,
    pub h: f64,
    c1: f64,
    slope: f64,
    t_star: f64,
    norm: f64,
}

impl TurnWidget {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= PI / 4.0 + 1e-15) {
            return Err(Error::invalid(format!("turn angle {alpha} outside (0, pi/4]")));
        }
        let r_alpha = 1.0 / alpha.sin();
        let c1 = r_alpha - (r_alpha * r_alpha - 1.0).sqrt();
        let slope = 1.0 / (r_alpha * r_alpha - 1.0).sqrt();
        let mass = adaptive_simpson(&bump, -1.0, 1.0, 1e-13)?;
        let check = panel_integral(&bump, 1.0);
        if (mass - check).abs() > 1e-10 {
            return Err(Error::Numeric(format!(
                "kernel normalisation disagrees: {mass} vs {check}"
            )));
        }
        Ok(TurnWidget {
            alpha,
            r_alpha,
            h: WIDGET_BANDWIDTH,
            c1,
            slope,
            t_star: 1.0 / (1.0 + alpha.cos()),
            norm: 1.0 / check,
        })
    }

    /// The arc `C(t) = R - sqrt(R^2 - t^2)`.
    pub fn arc(&self, t: f64) -> f64 {
        self.r_alpha - (self.r_alpha * self.r_alpha - t * t).sqrt()
    }

    pub fn arc_prime(&self, t: f64) -> f64 {
        t / (self.r_alpha * self.r_alpha - t * t).sqrt()
    }

    /// `max(0, C(1) + (t - 1) C'(1))`.
    pub fn envelope(&self, t: f64) -> f64 {
        (self.c1 + (t - 1.0) * self.slope).max(0.0)
    }

    /// Zero of the envelope, `R tan(alpha / 2)`.
    pub fn t_star(&self) -> f64 {
        self.t_star
    }

    // truncated moments of the unit kernel up to s in [-1, 1]
    fn moments(&self, s: f64) -> (f64, f64) {
        if s <= -1.0 {
            return (0.0, 0.0);
        }
        if s >= 1.0 {
            return (1.0, 0.0);
        }
        let m0 = panel_integral(&bump, s) * self.norm;
        let m1 = panel_integral(&|x: f64| x * bump(x), s) * self.norm;
        (m0, m1)
    }

    pub fn g(&self, t: f64) -> f64 {
        let u = t - self.t_star;
        if u <= -self.h {
            return 0.0;
        }
        if u >= self.h {
            return self.slope * u;
        }
        let (m0, m1) = self.moments(u / self.h);
        self.slope * (u * m0 - self.h * m1)
    }

    pub fn g_prime(&self, t: f64) -> f64 {
        let u = t - self.t_star;
        self.slope * self.moments(u / self.h).0
    }

    pub fn g_second(&self, t: f64) -> f64 {
        self.slope * self.norm * bump((t - self.t_star) / self.h) / self.h
    }

    pub fn g_third(&self, t: f64) -> f64 {
        self.slope * self.norm * bump_prime((t - self.t_star) / self.h) / (self.h * self.h)
    }
}

// composite Gauss-Legendre on fixed panels of [-1, 1], truncated at `s`
fn panel_integral(f: &impl Fn(f64) -> f64, s: f64) -> f64 {
    let w = 2.0 / PANELS as f64;
    let mut acc = 0.0;
    for p in 0..PANELS {
        let a = -1.0 + p as f64 * w;
        if a >= s {
            break;
        }
        let b = (a + w).min(s);
        acc += gauss_legendre8(f, a, b);
    }
    acc
}

/// Sampled curve `(R / R_alpha) (t, G(t))` on a uniform grid of `[0, 1]`.
#[derive(Debug, Clone)]
pub struct WidgetCurve {
    pub widget: TurnWidget,
    pub scale: f64,
    pub t: Vec<f64>,
    pub g: Vec<f64>,
    pub points: PointCloud,
}

pub fn turn_widget(alpha: f64, r: f64, t_grid: usize) -> Result<WidgetCurve> {
    if !(r > 0.0 && r.is_finite()) || t_grid < 2 {
        return Err(Error::invalid("turn widget needs R > 0 and at least 2 grid points"));
    }
    let widget = TurnWidget::new(alpha)?;
    let scale = r / widget.r_alpha;
    let t: Vec<f64> = (0..t_grid).map(|i| i as f64 / (t_grid - 1) as f64).collect();
    let g: Vec<f64> = t.iter().map(|&s| widget.g(s)).collect();
    let mut points = PointCloud::new(2);
    for (a, b) in t.iter().zip(&g) {
        points.push(&[scale * a, scale * b])?;
    }
    Ok(WidgetCurve {
        widget,
        scale,
        t,
        g,
        points,
    })
}

/// Outcome of the five structural checks on one widget.
#[derive(Debug, Clone, serde::Serialize)]
pub struct WidgetChecks {
    pub alpha: f64,
    /// Largest of |G| and its first three one-sided differences at 0.
    pub start_defect: f64,
    /// Largest of |G(1) - C(1)|, |G'(1) - C'(1)| and |G''|, |G'''| at 1.
    pub end_defect: f64,
    /// `R_alpha max |G^(l)|` for l = 1, 2, 3.
    pub scaled_derivative_max: [f64; 3],
    /// `min (C - G)` over the open grid.
    pub below_arc_margin: f64,
    /// Smallest second divided difference of G.
    pub min_second_difference: f64,
    pub start_ok: bool,
    pub end_ok: bool,
    pub below_arc_ok: bool,
    pub convex_ok: bool,
}

impl WidgetChecks {
    pub fn pass(&self) -> bool {
        self.start_ok && self.end_ok && self.below_arc_ok && self.convex_ok
    }
}

/// Runs the structural checks with finite differences of step `1 / t_grid`
/// for the value checks and `h / 20` for derivatives.
pub fn check_turn_widget(alpha: f64, t_grid: usize) -> Result<WidgetChecks> {
    let w = TurnWidget::new(alpha)?;
    let n = t_grid.max(100);
    let step = 1.0 / n as f64;
    let eta = w.h / 20.0;

    let g0: Vec<f64> = (0..4).map(|i| w.g(i as f64 * eta)).collect();
    let start_defect = [
        g0[0].abs(),
        ((g0[1] - g0[0]) / eta).abs(),
        ((g0[2] - 2.0 * g0[1] + g0[0]) / (eta * eta)).abs(),
        ((g0[3] - 3.0 * g0[2] + 3.0 * g0[1] - g0[0]) / eta.powi(3)).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    let d1 = w.g_prime(1.0);
    let d2 = (w.g_prime(1.0) - w.g_prime(1.0 - eta)) / eta;
    let d3 = (w.g_prime(1.0) - 2.0 * w.g_prime(1.0 - eta) + w.g_prime(1.0 - 2.0 * eta)) / (eta * eta);
    let end_defect = [
        (w.g(1.0) - w.arc(1.0)).abs(),
        (d1 - w.arc_prime(1.0)).abs(),
        d2.abs(),
        d3.abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    // derivative sup norms on a grid fine enough to see the kernel window
    let fine = ((1.0 / eta).ceil() as usize).max(n);
    let mut maxes = [0.0f64; 3];
    for i in 0..=fine {
        let t = i as f64 / fine as f64;
        let (lo, hi) = ((t - eta).max(0.0), (t + eta).min(1.0));
        let gl = w.g_prime(lo);
        let gc = w.g_prime(t);
        let gh = w.g_prime(hi);
        maxes[0] = maxes[0].max(gc.abs());
        maxes[1] = maxes[1].max(((gh - gl) / (hi - lo)).abs());
        if t >= eta && t + eta <= 1.0 {
            let (a, b) = (w.g_prime(t - eta), w.g_prime(t + eta));
            maxes[2] = maxes[2].max(((b - 2.0 * gc + a) / (eta * eta)).abs());
        }
    }
    let scaled = maxes.map(|m| m * w.r_alpha);

    let vals: Vec<f64> = (0..=n).map(|i| w.g(i as f64 * step)).collect();
    let mut margin = f64::INFINITY;
    for (i, v) in vals.iter().enumerate().take(n).skip(1) {
        margin = margin.min(w.arc(i as f64 * step) - v);
    }
    let mut min_dd = f64::INFINITY;
    for i in 1..n {
        min_dd = min_dd.min((vals[i + 1] - 2.0 * vals[i] + vals[i - 1]) / (step * step));
    }
    // where G is affine the divided difference is pure rounding
    let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let dd_tol = (8.0 * f64::EPSILON * top / (step * step)).max(1e-9);

    Ok(WidgetChecks {
        alpha,
        start_defect,
        end_defect,
        scaled_derivative_max: scaled,
        below_arc_margin: margin,
        min_second_difference: min_dd,
        start_ok: start_defect <= 1e-9,
        end_ok: end_defect <= 1e-6,
        below_arc_ok: margin > 0.0,
        convex_ok: min_dd >= -dd_tol,
    })
}
