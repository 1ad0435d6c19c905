//! Jacobi theta functions in the period-one convention
//! `theta3(l; B) = sum_n exp(i pi B n^2 + 2 pi i n l)`, `Im B > 0`.

use std::f64::consts::PI;

use crate::{c, Cplx, Error, Result, I};

const MAX_TERMS: usize = 10_000;
/// `|q| >= 0.99` is rejected, i.e. `Im B` at or below this value.
const MIN_IM_B: f64 = 0.003_199_114_641_675_484;

/// Argument `l` and period parameter `B` of a one-dimensional theta function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaArgs {
    pub l: Cplx,
    pub b: Cplx,
}

impl ThetaArgs {
    pub fn new(l: Cplx, b: Cplx) -> Result<Self> {
        if !(b.im > 0.0) || !b.re.is_finite() || !l.re.is_finite() || !l.im.is_finite() {
            return Err(Error::Domain(format!("theta needs finite l and Im B > 0, got l = {l}, B = {b}")));
        }
        if b.im <= MIN_IM_B {
            return Err(Error::NonConvergence(format!("|q| >= 0.99 for B = {b}")));
        }
        Ok(Self { l, b })
    }
}

/// All four thetas at a lattice-reduced point together with the bookkeeping
/// needed to move back to the original argument.
///
/// `l = l0 + m + n B` with `|Re l0| <= 1/2`, `|Im l0| <= Im B / 2`. The common
/// factor `exp(-i pi n^2 B - 2 pi i n l0)` is kept separately so ratios never
/// overflow.
#[derive(Debug, Clone, Copy)]
pub struct ReducedThetas {
    pub at_reduced: [Cplx; 4],
    pub m: i64,
    pub n: i64,
    pub l0: Cplx,
    pub b: Cplx,
}

impl ReducedThetas {
    fn sign(&self, j: usize) -> f64 {
        let odd = match j {
            1 => self.m + self.n,
            2 => self.m,
            3 => 0,
            _ => self.n,
        };
        if odd.rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `theta_j(l) / theta_i(l)` for `i, j` in `1..=4`.
    pub fn ratio(&self, j: usize, i: usize) -> Cplx {
        self.at_reduced[j - 1] / self.at_reduced[i - 1] * (self.sign(j) * self.sign(i))
    }

    /// Log of the quasi-periodicity factor.
    pub fn log_factor(&self) -> Cplx {
        let n = self.n as f64;
        -I * PI * n * n * self.b - 2.0 * PI * I * n * self.l0
    }

    pub fn value(&self, j: usize) -> Result<Cplx> {
        let v = self.at_reduced[j - 1] * self.log_factor().exp() * self.sign(j);
        crate::ensure_finite(v, "theta value")
    }
}

fn series(l: Cplx, b: Cplx) -> Result<[Cplx; 4]> {
    let y = l.im.abs();
    let mut s1 = c(0.0);
    let mut s2 = c(0.0);
    let mut s3 = c(1.0);
    let mut s4 = c(1.0);
    let mut scale34 = 1.0;
    let mut scale12 = 0.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let h = nf + 0.5;
        // half-integer terms feed theta1/theta2
        let qh = (I * PI * b * h * h).exp();
        let arg = 2.0 * PI * h * l;
        let bound_h = 2.0 * qh.norm() * (2.0 * PI * h * y).cosh();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        s2 += 2.0 * qh * arg.cos();
        s1 += 2.0 * sign * qh * arg.sin();
        scale12 += bound_h;
        let mut bound_i = 0.0;
        if n >= 1 {
            let qi = (I * PI * b * nf * nf).exp();
            let t = 2.0 * qi * (2.0 * PI * nf * l).cos();
            bound_i = 2.0 * qi.norm() * (2.0 * PI * nf * y).cosh();
            s3 += t;
            s4 += sign * t;
            scale34 += bound_i;
        }
        if n >= 1 && bound_h <= 1e-16 * scale12 && bound_i <= 1e-16 * scale34 {
            let out = [s1, s2, s3, s4];
            for v in out {
                crate::ensure_finite(v, "theta series")?;
            }
            return Ok(out);
        }
    }
    Err(Error::NonConvergence(format!("theta series exceeded {MAX_TERMS} terms")))
}

/// Reduce `l` by the period lattice and evaluate all four series there.
pub fn reduced(args: &ThetaArgs) -> Result<ReducedThetas> {
    let ThetaArgs { l, b } = *args;
    let n = (l.im / b.im).round();
    let l1 = l - n * b;
    let m = l1.re.round();
    let l0 = l1 - m;
    Ok(ReducedThetas { at_reduced: series(l0, b)?, m: m as i64, n: n as i64, l0, b })
}

/// `[theta1, theta2, theta3, theta4]` at `args`.
pub fn theta_all(args: &ThetaArgs) -> Result<[Cplx; 4]> {
    let r = reduced(args)?;
    Ok([r.value(1)?, r.value(2)?, r.value(3)?, r.value(4)?])
}

/// `theta1(l; B) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi l)`.
pub fn theta1(args: &ThetaArgs) -> Result<Cplx> {
    reduced(args)?.value(1)
}

/// `theta2(l; B) = 2 sum_{n>=0} q^{(n+1/2)^2} cos((2n+1) pi l)`.
pub fn theta2(args: &ThetaArgs) -> Result<Cplx> {
    reduced(args)?.value(2)
}

pub fn theta3(args: &ThetaArgs) -> Result<Cplx> {
    reduced(args)?.value(3)
}

/// `theta4(l; B) = theta3(l + 1/2; B)`.
pub fn theta4(args: &ThetaArgs) -> Result<Cplx> {
    reduced(args)?.value(4)
}

/// `theta4(l; B) / theta3(l; B)` without forming either factor.
pub fn theta43_ratio(args: &ThetaArgs) -> Result<Cplx> {
    let r = reduced(args)?;
    crate::ensure_finite(r.ratio(4, 3), "theta4/theta3")
}

fn raw_product(l: Cplx, b: Cplx, n_terms: usize) -> Cplx {
    let mut p = (-I * PI * l).exp();
    for n in 1..=n_terms {
        p *= 1.0 + (2.0 * PI * I * (n as f64 * b - l)).exp();
    }
    for n in 0..=n_terms {
        // the n <= 0 half of the product, written with m = -n >= 0
        p *= 1.0 + (2.0 * PI * I * (n as f64 * b + l)).exp();
    }
    p
}

/// Truncated product form of `theta2`:
/// `c e^{-i pi l} prod_{n>=1} (1 + e^{2 pi i (nB - l)}) prod_{n<=0} (1 + e^{-2 pi i (nB - l)})`.
///
/// The constant `c` is fixed by matching the series at `l = 0`.
pub fn theta2_product(l: Cplx, b: Cplx, n_terms: usize) -> Result<Cplx> {
    if n_terms == 0 {
        return Err(Error::Domain("theta2_product needs at least one factor".into()));
    }
    let args = ThetaArgs::new(l, b)?;
    let c0 = theta2(&ThetaArgs::new(c(0.0), b)?)? / raw_product(c(0.0), b, n_terms);
    crate::ensure_finite(c0 * raw_product(args.l, b, n_terms), "theta2 product")
}

/// `prod_{n=-N}^{N} s_n (1 - i e^{alpha_n}) / (1 + i e^{alpha_n})`, `alpha_n = alpha + 2 n pi i B`,
/// with `s_n = -1` for `n <= 0` and `+1` otherwise.
///
/// The signs make the product converge in both directions. The limit equals
/// `theta4/theta3` at `l = -1/4 - B/2 + i alpha / (2 pi)`.
pub fn theta_ratio_product(alpha: Cplx, b: Cplx, n_max: usize) -> Result<Cplx> {
    ThetaArgs::new(c(0.0), b)?;
    let mut p = c(1.0);
    let n = n_max as i64;
    for j in -n..=n {
        let an = alpha + 2.0 * PI * I * b * j as f64;
        let f = if an.re <= 0.0 {
            let x = an.exp();
            (1.0 - I * x) / (1.0 + I * x)
        } else {
            let y = (-an).exp();
            (y - I) / (y + I)
        };
        p *= if j <= 0 { -f } else { f };
    }
    crate::ensure_finite(p, "theta ratio product")
}

/// The argument at which [`theta_ratio_product`] equals `theta4/theta3`.
pub fn product_ratio_argument(alpha: Cplx, b: Cplx) -> Cplx {
    c(-0.25) - 0.5 * b + I * alpha / (2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(j: usize, l: Cplx, b: Cplx) -> Cplx {
        let mut s = c(0.0);
        for n in -50i64..=50 {
            let nf = n as f64;
            let sg = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            s += match j {
                1 => -I * sg * (I * PI * b * (nf + 0.5).powi(2) + 2.0 * PI * I * (nf + 0.5) * l).exp(),
                2 => (I * PI * b * (nf + 0.5).powi(2) + 2.0 * PI * I * (nf + 0.5) * l).exp(),
                3 => (I * PI * b * nf * nf + 2.0 * PI * I * nf * l).exp(),
                _ => sg * (I * PI * b * nf * nf + 2.0 * PI * I * nf * l).exp(),
            };
        }
        s
    }

    fn a(l: Cplx, b: Cplx) -> ThetaArgs {
        ThetaArgs::new(l, b).unwrap()
    }

    #[test]
    fn matches_brute_force_sum() {
        for (l, b) in [
            (c(0.0), I),
            (Cplx::new(0.3, 0.2), Cplx::new(0.5, 0.7)),
            (Cplx::new(-1.7, 0.9), Cplx::new(-0.5, 0.4)),
            (Cplx::new(2.2, -1.3), Cplx::new(0.2, 1.1)),
        ] {
            let v = theta_all(&a(l, b)).unwrap();
            for j in 1..=4 {
                let o = brute(j, l, b);
                assert!((v[j - 1] - o).norm() < 1e-13 * o.norm().max(1.0), "j={j} l={l} B={b}: {} vs {o}", v[j - 1]);
            }
        }
    }

    #[test]
    fn integer_shift_and_half_shift() {
        let b = Cplx::new(0.1, 0.8);
        let l = Cplx::new(0.37, 0.11);
        let t3 = theta3(&a(l, b)).unwrap();
        assert!((theta3(&a(l + 1.0, b)).unwrap() - t3).norm() < 1e-14);
        assert!((theta1(&a(l + 1.0, b)).unwrap() + theta1(&a(l, b)).unwrap()).norm() < 1e-14);
        let t = theta3(&a(c(0.5), I)).unwrap();
        assert!((t - theta4(&a(c(0.0), I)).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn theta1_vanishes_at_origin() {
        for b in [I, Cplx::new(0.5, 0.3), Cplx::new(-0.2, 2.0)] {
            assert!(theta1(&a(c(0.0), b)).unwrap().norm() < 1e-16);
        }
    }

    #[test]
    fn k_squared_at_tau_i_is_half() {
        let v = theta_all(&a(c(0.0), I)).unwrap();
        assert!(((v[1] / v[2]).powi(4) - 0.5).norm() < 1e-12);
    }

    #[test]
    fn ratio_survives_far_arguments() {
        let b = Cplx::new(0.0, 0.5);
        let l = Cplx::new(0.2, 40.3);
        let r = theta43_ratio(&a(l, b)).unwrap();
        // theta4/theta3 is B-periodic up to sign
        let n = (l.im / b.im).round();
        let r0 = theta43_ratio(&a(l - n * b, b)).unwrap();
        let sign = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
        assert!((r - sign * r0).norm() < 1e-12);
        assert!(theta3(&a(l, b)).is_err());
    }

    #[test]
    fn rejects_nome_near_unit_circle() {
        assert!(matches!(ThetaArgs::new(c(0.0), Cplx::new(0.0, 0.003)), Err(Error::NonConvergence(_))));
        assert!(ThetaArgs::new(c(0.0), Cplx::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn product_matches_series() {
        let b = I;
        for l in [c(0.2), Cplx::new(0.3, 0.1), Cplx::new(-0.4, -0.2)] {
            let p = theta2_product(l, b, 30).unwrap();
            let s = theta2(&a(l, b)).unwrap();
            assert!((p / s - 1.0).norm() < 1e-12, "{l}");
        }
        let l = c(0.2);
        let r = theta2_product(l + 1.0, b, 30).unwrap() / theta2_product(l, b, 30).unwrap();
        assert!((r + 1.0).norm() < 1e-12);
        let b = Cplx::new(0.5, 0.4);
        let l = Cplx::new(0.1, 0.05);
        let p = theta2_product(l, b, 50).unwrap();
        assert!((p / theta2(&a(l, b)).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn ratio_product_identification() {
        for b in [Cplx::new(0.0, 0.5), Cplx::new(0.5, 0.5), Cplx::new(0.5, 0.3)] {
            for alpha in [c(0.3), c(-1.2), Cplx::new(0.4, 0.7)] {
                let p = theta_ratio_product(alpha, b, 60).unwrap();
                let l = product_ratio_argument(alpha, b);
                let r = theta43_ratio(&a(l, b)).unwrap();
                assert!((p - r).norm() < 1e-10, "B={b} alpha={alpha}: {p} vs {r}");
            }
        }
    }
}
