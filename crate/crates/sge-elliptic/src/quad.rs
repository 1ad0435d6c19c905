//! Numerical quadrature for complex-valued integrands on real intervals.
//!
//! Two rules are provided: an adaptive Gauss-Kronrod (7/15) scheme for
//! smooth integrands and a tanh-sinh scheme that tolerates integrable
//! endpoint singularities. Both are used as independent oracles for the
//! closed forms elsewhere in the crate.

use crate::{Cplx, Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment {
    a: f64,
    b: f64,
    value: Cplx,
    err: f64,
}

fn kronrod<F: Fn(f64) -> Cplx>(f: &F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        k += pair * WGK[j];
        if j % 2 == 1 {
            g += pair * WG[j / 2];
        }
    }
    Segment {
        a,
        b,
        value: k * h,
        err: ((k - g) * h).norm(),
    }
}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Splits the interval with the largest error estimate until the summed
/// estimate drops below `max(abs_tol, rel_tol * |I|)`.
pub fn gauss_kronrod<F: Fn(f64) -> Cplx>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<Cplx> {
    const MAX_SEGMENTS: usize = 4000;
    let mut segs = vec![kronrod(&f, a, b)];
    loop {
        let total: Cplx = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        if !(total.re.is_finite() && total.im.is_finite()) {
            return Err(Error::NonConvergence("quadrature produced a non-finite value".into()));
        }
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok(total);
        }
        if segs.len() >= MAX_SEGMENTS {
            return Err(Error::NonConvergence(format!(
                "Gauss-Kronrod stopped at {MAX_SEGMENTS} segments, error estimate {err:e}"
            )));
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("non-empty");
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        segs.push(kronrod(&f, s.a, mid));
        segs.push(kronrod(&f, mid, s.b));
    }
}

/// Tanh-sinh (double exponential) integration over `[a, b]`.
///
/// The integrand receives `(x, x - a, b - x)`; the two distances are computed
/// without cancellation so singular factors like `1/sqrt(b - x)` stay accurate
/// right up to the endpoint.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> Cplx>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<Cplx> {
    const S_MAX: f64 = 4.0;
    const MAX_LEVEL: u32 = 12;
    let half = 0.5 * (b - a);
    let width = b - a;
    let eval = |s: f64| -> Cplx {
        let u = std::f64::consts::FRAC_PI_2 * s.sinh();
        let near = 2.0 * half / (1.0 + (2.0 * u.abs()).exp());
        if near <= 0.0 {
            return Cplx::new(0.0, 0.0);
        }
        let far = width - near;
        let w = half * std::f64::consts::FRAC_PI_2 * s.cosh() / (u.cosh() * u.cosh());
        if w == 0.0 {
            return Cplx::new(0.0, 0.0);
        }
        let v = if s < 0.0 { f(a + near, near, far) } else { f(b - near, far, near) };
        v * w
    };
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut j = 1.0;
    while j <= S_MAX {
        sum += eval(j) + eval(-j);
        j += 1.0;
    }
    let mut prev = sum * h;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut s = h;
        while s <= S_MAX {
            sum += eval(s) + eval(-s);
            s += 2.0 * h;
        }
        let cur = sum * h;
        if !(cur.re.is_finite() && cur.im.is_finite()) {
            return Err(Error::NonConvergence("tanh-sinh produced a non-finite value".into()));
        }
        if level >= 3 && (cur - prev).norm() <= rel_tol * cur.norm() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence("tanh-sinh did not settle".into()))
}
