//! Symmetric multilinear maps from a `d`-dimensional coordinate plane into
//! `R^D`, stored as full coefficient arrays.

use rand::Rng;

use crate::rng::seeded;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor {
    order: usize,
    d: usize,
    out: usize,
    /// `out x d^order`, column index in base `d` with the first slot least significant.
    data: Vec<f64>,
}

/// Sorted multi-indices `i_1 <= ... <= i_j` over `0..d`.
pub fn monomials(d: usize, order: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, left: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(d, left - 1, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, order, 0, &mut Vec::new(), &mut out);
    out
}

pub fn monomial_value(alpha: &[usize], c: &[f64]) -> f64 {
    alpha.iter().map(|&i| c[i]).product()
}

fn decode(mut idx: usize, d: usize, order: usize, buf: &mut [usize]) {
    for slot in buf.iter_mut().take(order) {
        *slot = idx % d;
        idx /= d;
    }
}

impl SymTensor {
    pub fn zeros(order: usize, d: usize, out: usize) -> Self {
        SymTensor {
            order,
            d,
            out,
            data: vec![0.0; out * d.pow(order as u32)],
        }
    }

    /// Builds the tensor whose diagonal form is `sum_alpha coef_alpha c^alpha`.
    /// `coefs[m]` is the `out`-vector for `monomials(d, order)[m]`.
    pub fn from_monomials(order: usize, d: usize, out: usize, coefs: &[Vec<f64>]) -> Self {
        let mut t = SymTensor::zeros(order, d, out);
        let mons = monomials(d, order);
        assert_eq!(mons.len(), coefs.len());
        let cols = d.pow(order as u32);
        let mut buf = vec![0; order];
        let mut counts = std::collections::HashMap::new();
        for col in 0..cols {
            decode(col, d, order, &mut buf);
            let mut key = buf.clone();
            key.sort_unstable();
            *counts.entry(key).or_insert(0usize) += 1;
        }
        for col in 0..cols {
            decode(col, d, order, &mut buf);
            let mut key = buf.clone();
            key.sort_unstable();
            let m = mons.iter().position(|a| *a == key).expect("monomial");
            let k = counts[&key] as f64;
            for r in 0..out {
                t.data[col * out + r] = coefs[m][r] / k;
            }
        }
        t
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn plane_dim(&self) -> usize {
        self.d
    }

    pub fn out_dim(&self) -> usize {
        self.out
    }

    /// Coefficient vector of the column `idx` (one plane index per slot).
    pub fn column(&self, idx: &[usize]) -> &[f64] {
        let mut col = 0;
        for &i in idx.iter().rev() {
            col = col * self.d + i;
        }
        &self.data[col * self.out..(col + 1) * self.out]
    }

    pub fn column_mut(&mut self, idx: &[usize]) -> &mut [f64] {
        let mut col = 0;
        for &i in idx.iter().rev() {
            col = col * self.d + i;
        }
        &mut self.data[col * self.out..(col + 1) * self.out]
    }

    /// `T(args[0], ..., args[order-1])`.
    pub fn apply(&self, args: &[&[f64]]) -> Vec<f64> {
        assert_eq!(args.len(), self.order);
        let mut out = vec![0.0; self.out];
        let cols = self.d.pow(self.order as u32);
        let mut buf = vec![0; self.order];
        for col in 0..cols {
            decode(col, self.d, self.order, &mut buf);
            let w: f64 = buf.iter().zip(args).map(|(&i, a)| a[i]).product();
            if w != 0.0 {
                for (o, c) in out.iter_mut().zip(&self.data[col * self.out..]) {
                    *o += w * c;
                }
            }
        }
        out
    }

    /// `T(v, ..., v)`.
    pub fn apply_diag(&self, v: &[f64]) -> Vec<f64> {
        let args = vec![v; self.order];
        self.apply(&args)
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|x| *x *= s);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }

    /// Applies a linear map to the output: `M T` with `M` row-major `rows x out`.
    pub fn map_output(&self, m: &[f64], rows: usize) -> SymTensor {
        let cols = self.d.pow(self.order as u32);
        let mut data = vec![0.0; rows * cols];
        for col in 0..cols {
            let c = &self.data[col * self.out..(col + 1) * self.out];
            for r in 0..rows {
                data[col * rows + r] = (0..self.out).map(|k| m[r * self.out + k] * c[k]).sum();
            }
        }
        SymTensor {
            order: self.order,
            d: self.d,
            out: rows,
            data,
        }
    }

    /// `sup_{|u| = 1} |T(u, ..., u)|`.
    ///
    /// Exact for `d = 1`; an angle grid with golden-section refinement for
    /// `d = 2`; 64 restarts of projected gradient ascent above that.
    pub fn opnorm(&self) -> f64 {
        let f = |u: &[f64]| crate::geometry::norm(&self.apply_diag(u));
        match self.d {
            0 => 0.0,
            1 => f(&[1.0]),
            2 => {
                let g = |a: f64| f(&[a.cos(), a.sin()]);
                let steps = 360;
                let h = std::f64::consts::PI / steps as f64;
                let (mut best_a, mut best) = (0.0, g(0.0));
                for s in 1..steps {
                    let a = s as f64 * h;
                    let v = g(a);
                    if v > best {
                        best = v;
                        best_a = a;
                    }
                }
                let (a, v) = golden_max(g, best_a - h, best_a + h, 1e-12);
                let _ = a;
                best.max(v)
            }
            _ => self.opnorm_ascent(64, 0x5eed),
        }
    }

    fn opnorm_ascent(&self, restarts: usize, seed: u64) -> f64 {
        let d = self.d;
        let j = self.order as f64;
        let mut rng = seeded(seed);
        let val = |u: &[f64]| crate::geometry::norm(&self.apply_diag(u));
        let mut best = 0.0f64;
        for _ in 0..restarts {
            let mut u: Vec<f64> = (0..d).map(|_| rng.gen::<f64>() - 0.5).collect();
            normalize(&mut u);
            let mut fu = val(&u);
            let mut step = 1.0;
            for _ in 0..500 {
                // gradient of |T(u^j)|^2 / 2 is j * sum_r g_r T(u^{j-1}, e_a)_r
                let g = self.apply_diag(&u);
                let mut grad = vec![0.0; d];
                let mut args: Vec<Vec<f64>> = vec![u.clone(); self.order];
                for (a, ga) in grad.iter_mut().enumerate() {
                    let mut e = vec![0.0; d];
                    e[a] = 1.0;
                    args[self.order - 1] = e;
                    let refs: Vec<&[f64]> = args.iter().map(|x| x.as_slice()).collect();
                    let col = self.apply(&refs);
                    *ga = j * col.iter().zip(&g).map(|(x, y)| x * y).sum::<f64>();
                }
                let radial: f64 = grad.iter().zip(&u).map(|(x, y)| x * y).sum();
                for (ga, ua) in grad.iter_mut().zip(&u) {
                    *ga -= radial * ua;
                }
                if crate::geometry::norm(&grad) < 1e-14 {
                    break;
                }
                let mut moved = false;
                while step > 1e-14 {
                    let mut cand: Vec<f64> = u.iter().zip(&grad).map(|(x, g)| x + step * g).collect();
                    normalize(&mut cand);
                    let fc = val(&cand);
                    if fc > fu {
                        let gain = fc - fu;
                        u = cand;
                        fu = fc;
                        step *= 2.0;
                        moved = gain > 1e-10 * fu.max(1e-300);
                        break;
                    }
                    step *= 0.5;
                }
                if !moved {
                    break;
                }
            }
            best = best.max(fu);
        }
        best
    }
}

fn normalize(u: &mut [f64]) {
    let n = crate::geometry::norm(u);
    if n > 0.0 {
        u.iter_mut().for_each(|x| *x /= n);
    }
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
