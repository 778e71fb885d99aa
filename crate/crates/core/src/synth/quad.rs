//! One-dimensional quadrature used by the synthetic constructions.

use crate::error::{Error, Result};

/// Adaptive Simpson integration to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if diff.abs() <= 15.0 * tol || (b - a).abs() < 1e-15 {
        return Ok(left + right + diff / 15.0);
    }
    if depth == 0 {
        return Err(Error::Numeric(format!(
            "quadrature did not converge on [{a}, {b}]"
        )));
    }
    Ok(step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
        + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
}

/// Eight-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss_legendre8(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const X: [f64; 4] = [
        0.183_434_642_495_649_8,
        0.525_532_409_916_329,
        0.796_666_477_413_626_7,
        0.960_289_856_497_536_3,
    ];
    const W: [f64; 4] = [
        0.362_683_783_378_362,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_5,
        0.101_228_536_290_376_3,
    ];
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut s = 0.0;
    for k in 0..4 {
        s += W[k] * (f(c - h * X[k]) + f(c + h * X[k]));
    }
    s * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_known_functions() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
        let g = gauss_legendre8(|x| x.powi(15), 0.0, 1.0);
        assert!((g - 1.0 / 16.0).abs() < 1e-15);
        let kink = adaptive_simpson(&|x: f64| x.abs(), -1.0, 2.0, 1e-12).unwrap();
        assert!((kink - 2.5).abs() < 1e-11);
    }
}
