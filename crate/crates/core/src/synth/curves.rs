//! Closed planar curves parametrised for exact intrinsic distances.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::quad::gauss_legendre8;

/// Ellipse `(a cos t, b sin t)` with a tabulated arc-length function.
#[derive(Debug, Clone)]
pub struct Ellipse {
    pub a: f64,
    pub b: f64,
    knots: Vec<f64>,
    perimeter: f64,
}

const ELLIPSE_KNOTS: usize = 1024;

impl Ellipse {
    pub fn new(a: f64, b: f64) -> Self {
        let mut e = Ellipse {
            a,
            b,
            knots: Vec::with_capacity(ELLIPSE_KNOTS + 1),
            perimeter: 0.0,
        };
        let w = TAU / ELLIPSE_KNOTS as f64;
        let mut acc = 0.0;
        e.knots.push(0.0);
        for k in 0..ELLIPSE_KNOTS {
            acc += gauss_legendre8(|t| e.speed(t), k as f64 * w, (k + 1) as f64 * w);
            e.knots.push(acc);
        }
        e.perimeter = acc;
        e
    }

    pub fn speed(&self, t: f64) -> f64 {
        (self.a * self.a * t.sin().powi(2) + self.b * self.b * t.cos().powi(2)).sqrt()
    }

    pub fn point(&self, t: f64) -> [f64; 2] {
        [self.a * t.cos(), self.b * t.sin()]
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// Arc length from parameter 0 to `t` (any real `t`).
    pub fn arc_length(&self, t: f64) -> f64 {
        let turns = (t / TAU).floor();
        let r = t - turns * TAU;
        let w = TAU / ELLIPSE_KNOTS as f64;
        let k = ((r / w) as usize).min(ELLIPSE_KNOTS - 1);
        let s = self.knots[k] + gauss_legendre8(|u| self.speed(u), k as f64 * w, r);
        turns * self.perimeter + s
    }

    pub fn geodesic(&self, t1: f64, t2: f64) -> f64 {
        let d = (self.arc_length(t1) - self.arc_length(t2)).abs() % self.perimeter;
        d.min(self.perimeter - d)
    }

    pub fn tangent(&self, t: f64) -> [f64; 2] {
        let v = [-self.a * t.sin(), self.b * t.cos()];
        let s = self.speed(t);
        [v[0] / s, v[1] / s]
    }
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Line { from: [f64; 2], dir: [f64; 2] },
    // counterclockwise when `sign = 1`
    Arc { center: [f64; 2], radius: f64, start: f64, sign: f64 },
}

/// Two round bulbs joined by a straight neck with concave fillets. The
/// curve is C^1 with curvature radii `fillet` and `bulb`, and the two neck
/// segments sit `2 neck` apart.
#[derive(Debug, Clone)]
pub struct Dumbbell {
    pub neck: f64,
    pub fillet: f64,
    pub bulb: f64,
    pub length: f64,
    pieces: Vec<(f64, f64, Piece)>,
    perimeter: f64,
}

impl Dumbbell {
    /// Returns `None` when the fillet and bulb circles cannot be tangent.
    pub fn new(neck: f64, fillet: f64, bulb: f64, length: f64) -> Option<Self> {
        let fy = neck + fillet;
        let reach = fillet + bulb;
        if reach <= fy || bulb <= neck {
            return None;
        }
        let half = length / 2.0;
        let cx = half + (reach * reach - fy * fy).sqrt();
        // fillet contact angle seen from the fillet centre, and the bulb
        // contact angle seen from the bulb centre
        let beta = (-fy).atan2(cx - half);
        let top = fy.atan2(half - cx);
        let fillet_sweep = beta + FRAC_PI_2;
        let bulb_sweep = 2.0 * top;

        let mut raw: Vec<(f64, Piece)> = Vec::new();
        // start at (-L/2, neck) heading +x along the upper neck
        raw.push((length, Piece::Line { from: [-half, neck], dir: [1.0, 0.0] }));
        raw.push((
            fillet * fillet_sweep,
            Piece::Arc { center: [half, fy], radius: fillet, start: -FRAC_PI_2, sign: 1.0 },
        ));
        raw.push((
            bulb * bulb_sweep,
            Piece::Arc { center: [cx, 0.0], radius: bulb, start: top, sign: -1.0 },
        ));
        raw.push((
            fillet * fillet_sweep,
            Piece::Arc { center: [half, -fy], radius: fillet, start: -beta, sign: 1.0 },
        ));
        raw.push((length, Piece::Line { from: [half, -neck], dir: [-1.0, 0.0] }));
        raw.push((
            fillet * fillet_sweep,
            Piece::Arc { center: [-half, -fy], radius: fillet, start: FRAC_PI_2, sign: 1.0 },
        ));
        raw.push((
            bulb * bulb_sweep,
            Piece::Arc { center: [-cx, 0.0], radius: bulb, start: PI + top, sign: -1.0 },
        ));
        raw.push((
            fillet * fillet_sweep,
            Piece::Arc { center: [-half, fy], radius: fillet, start: PI - beta, sign: 1.0 },
        ));
        let mut pieces = Vec::new();
        let mut s = 0.0;
        for (len, p) in raw {
            pieces.push((s, len, p));
            s += len;
        }
        Some(Dumbbell {
            neck,
            fillet,
            bulb,
            length,
            pieces,
            perimeter: s,
        })
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    fn locate(&self, s: f64) -> (f64, Piece) {
        let s = s.rem_euclid(self.perimeter);
        for &(start, len, p) in &self.pieces {
            if s < start + len {
                return (s - start, p);
            }
        }
        let &(start, _, p) = self.pieces.last().expect("pieces");
        (s - start, p)
    }

    /// Point at arc length `s`.
    pub fn point(&self, s: f64) -> [f64; 2] {
        match self.locate(s) {
            (u, Piece::Line { from, dir }) => [from[0] + u * dir[0], from[1] + u * dir[1]],
            (u, Piece::Arc { center, radius, start, sign }) => {
                let th = start + sign * u / radius;
                [center[0] + radius * th.cos(), center[1] + radius * th.sin()]
            }
        }
    }

    pub fn tangent(&self, s: f64) -> [f64; 2] {
        match self.locate(s) {
            (_, Piece::Line { dir, .. }) => dir,
            (u, Piece::Arc { radius, start, sign, .. }) => {
                let th = start + sign * u / radius;
                [-sign * th.sin(), sign * th.cos()]
            }
        }
    }

    pub fn geodesic(&self, s1: f64, s2: f64) -> f64 {
        let d = (s1 - s2).abs() % self.perimeter;
        d.min(self.perimeter - d)
    }

    /// Distance between the two neck segments halved.
    pub fn bottleneck(&self) -> f64 {
        self.neck
    }

    pub fn min_curvature_radius(&self) -> f64 {
        self.fillet.min(self.bulb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipse_perimeter() {
        let e = Ellipse::new(1.0, 1.0);
        assert!((e.perimeter() - TAU).abs() < 1e-13);
        // Ramanujan's second approximation is accurate to ~1e-11 at this aspect
        let (a, b) = (2.0f64, 1.0f64);
        let e = Ellipse::new(a, b);
        let h = ((a - b) / (a + b)).powi(2);
        let ram = PI * (a + b) * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt()));
        assert!((e.perimeter() - ram).abs() < 1e-6);
        assert!((e.arc_length(PI) - e.perimeter() / 2.0).abs() < 1e-12);
        assert!((e.geodesic(0.1, 0.1 + TAU) - 0.0).abs() < 1e-12);
    }

    #[test]
    fn dumbbell_is_closed_and_c1() {
        let d = Dumbbell::new(0.2, 0.4, 0.6, 1.0).unwrap();
        let p = d.perimeter();
        let start = d.point(0.0);
        let end = d.point(p - 1e-12);
        assert!((start[0] - end[0]).abs() < 1e-9 && (start[1] - end[1]).abs() < 1e-9);
        for &(s0, _, _) in &d.pieces {
            let a = d.point(s0 - 1e-10);
            let b = d.point(s0 + 1e-10);
            assert!(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt() < 1e-8, "gap at {s0}");
            let ta = d.tangent(s0 - 1e-10);
            let tb = d.tangent(s0 + 1e-10);
            assert!((ta[0] - tb[0]).abs() < 1e-6 && (ta[1] - tb[1]).abs() < 1e-6, "kink at {s0}");
        }
        // neck half-width and bulb extent
        assert!((d.point(0.5)[1] - 0.2).abs() < 1e-15);
        let far = (0..4000)
            .map(|i| d.point(p * i as f64 / 4000.0)[0])
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((far - 1.9).abs() < 1e-5);
    }
}
