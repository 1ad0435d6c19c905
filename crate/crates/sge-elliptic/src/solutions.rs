//! N=1 sine-Gordon solutions: direct (Jacobi) breather and kink, the
//! separatrix traveling wave, theta-representation solutions and
//! kink/breather trains.
//!
//! Every solution is also available through its "argument" `w`, the quantity
//! inside `q = 2i ln w`. Comparisons between representations are done on `w`,
//! which carries no branch ambiguity.

use std::f64::consts::PI;

use crate::elliptic::{unwrap_phase, Modulus};
use crate::jacobi::{Jacobi, RealAmplitude};
use crate::theta::{reduced, theta2_product, theta43_ratio, ThetaArgs};
use crate::{c, Cplx, Error, Result, I};

/// Conserved energy `H`, with `q_t^2/2 - cos q = H - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energy {
    pub h: f64,
}

impl Energy {
    pub fn new(h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::EnergyRange(format!("H must be positive and finite, got {h}")));
        }
        Ok(Self { h })
    }

    pub fn is_breather(&self) -> bool {
        self.h <= 2.0
    }

    pub fn is_kink(&self) -> bool {
        self.h >= 2.0
    }
}

/// Breather branch points `E1 = e^{-i phi}/16`, `E2 = conj(E1)`, `pi <= phi <= 2 pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreatherSpectrum {
    pub phi: f64,
    pub e1: Cplx,
    pub e2: Cplx,
}

impl BreatherSpectrum {
    pub fn new(phi: f64) -> Result<Self> {
        if !(PI..=2.0 * PI).contains(&phi) {
            return Err(Error::EnergyRange(format!("breather phase must lie in [pi, 2 pi], got {phi}")));
        }
        let e1 = (-I * phi).exp() / 16.0;
        Ok(Self { phi, e1, e2: e1.conj() })
    }

    /// `phi = 2 pi - arccos(1 - H)`, which lands in `[pi, 2 pi]`.
    pub fn from_energy(e: Energy) -> Result<Self> {
        if !e.is_breather() {
            return Err(Error::EnergyRange(format!("breather requires H <= 2, got {}", e.h)));
        }
        Self::new(2.0 * PI - (1.0 - e.h).acos())
    }

    /// `H = 1 - 8 (E1 + E2) = 1 - cos phi`.
    pub fn energy(&self) -> Energy {
        Energy { h: 1.0 - 8.0 * (self.e1 + self.e2).re }
    }
}

/// Kink branch points `E1 = -e^{eta}/16 < E2 = -e^{-eta}/16 < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkSpectrum {
    pub eta: f64,
    pub e1: f64,
    pub e2: f64,
}

impl KinkSpectrum {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::EnergyRange(format!("kink gap must be non-negative, got {eta}")));
        }
        Ok(Self { eta, e1: -eta.exp() / 16.0, e2: -(-eta).exp() / 16.0 })
    }

    /// `eta = arccosh(H - 1)`.
    pub fn from_energy(e: Energy) -> Result<Self> {
        if !e.is_kink() {
            return Err(Error::EnergyRange(format!("kink requires H >= 2, got {}", e.h)));
        }
        Self::new((e.h - 1.0).acosh())
    }

    /// `H = 1 - 8 (E1 + E2) = 1 + cosh eta`.
    pub fn energy(&self) -> Energy {
        Energy { h: 1.0 - 8.0 * (self.e1 + self.e2) }
    }
}

/// `q = 2i ln w` with the real part taken; `Im q = 2 ln|w|` is dropped.
pub fn q_from_w(w: Cplx) -> f64 {
    -2.0 * w.arg()
}

/// Branch-continuous `q` along a grid of arguments.
pub fn q_from_w_grid(ws: &[Cplx]) -> Result<Vec<f64>> {
    Ok(unwrap_phase(ws)?.into_iter().map(|p| -2.0 * p).collect())
}

/// Breather by direct integration, `k_b = sqrt(H/2)`.
#[derive(Debug, Clone)]
pub struct BreatherDirect {
    pub kb: f64,
    jac: Jacobi,
    amp: RealAmplitude,
}

impl BreatherDirect {
    pub fn new(e: Energy) -> Result<Self> {
        if !e.is_breather() {
            return Err(Error::EnergyRange(format!("breather requires H <= 2, got {}", e.h)));
        }
        let kb = (e.h / 2.0).sqrt();
        Ok(Self { kb, jac: Jacobi::real(kb)?, amp: RealAmplitude::new(kb)? })
    }

    /// Complex-argument evaluator for the same modulus.
    pub fn jacobi(&self) -> &Jacobi {
        &self.jac
    }

    /// `w = dn(t - t0; k_b) - i k_b sn(t - t0; k_b)`, on the unit circle.
    pub fn w(&self, t: f64, t0: f64) -> Result<Cplx> {
        let (s, _, d) = self.amp.sncndn(t - t0)?;
        Ok(Cplx::new(d, -self.kb * s))
    }

    /// `q = 2i ln w = 2 atan2(k_b sn, dn)`.
    pub fn q(&self, t: f64, t0: f64) -> Result<f64> {
        let (s, _, d) = self.amp.sncndn(t - t0)?;
        Ok(2.0 * (self.kb * s).atan2(d))
    }

    /// `q = 2 arcsin(k_b sn(t - t0; k_b))`, with sn from the theta path.
    pub fn q_arcsin(&self, t: f64, t0: f64) -> Result<f64> {
        Ok(2.0 * (self.kb * self.jac.sn(c(t - t0))?.re).clamp(-1.0, 1.0).asin())
    }
}

/// Kink by direct integration, `k_k = sqrt(2/H)`.
#[derive(Debug, Clone)]
pub struct KinkDirect {
    pub kk: f64,
    jac: Jacobi,
    amp: RealAmplitude,
}

impl KinkDirect {
    pub fn new(e: Energy) -> Result<Self> {
        if !e.is_kink() {
            return Err(Error::EnergyRange(format!("kink requires H >= 2, got {}", e.h)));
        }
        let kk = (2.0 / e.h).sqrt();
        Ok(Self { kk, jac: Jacobi::real(kk)?, amp: RealAmplitude::new(kk)? })
    }

    /// Complex-argument evaluator for the same modulus.
    pub fn jacobi(&self) -> &Jacobi {
        &self.jac
    }

    /// `w = cn(s; k_k) - i sn(s; k_k)`, `s = (t - t0)/k_k`.
    pub fn w(&self, t: f64, t0: f64) -> Result<Cplx> {
        let (s, cc, _) = self.amp.sncndn((t - t0) / self.kk)?;
        Ok(Cplx::new(cc, -s))
    }

    /// Principal `q = 2 am(s) = 2 atan2(sn, cn)`, in `(-2 pi, 2 pi]`; use
    /// [`q_from_w_grid`] for the winding field.
    pub fn q(&self, t: f64, t0: f64) -> Result<f64> {
        let (p, n) = self.amp.amplitude((t - t0) / self.kk)?;
        Ok(if n.rem_euclid(2) == 0 {
            2.0 * p
        } else if p > 0.0 {
            2.0 * p - 2.0 * PI
        } else {
            2.0 * p + 2.0 * PI
        })
    }

    /// `q = 2 arcsin(sn(sqrt(H/2)(t - t0); k_k))`, sn from the theta path.
    /// Matches [`KinkDirect::q`] where `cn >= 0` and is its reflection
    /// `2 pi - q` elsewhere.
    pub fn q_arcsin(&self, t: f64, t0: f64) -> Result<f64> {
        Ok(2.0 * self.jac.sn(c((t - t0) / self.kk))?.re.clamp(-1.0, 1.0).asin())
    }
}

pub fn breather_direct(t: f64, e: Energy, t0: f64) -> Result<f64> {
    BreatherDirect::new(e)?.q(t, t0)
}

pub fn kink_direct(t: f64, e: Energy, t0: f64) -> Result<f64> {
    KinkDirect::new(e)?.q(t, t0)
}

fn separatrix_phase(x: f64, t: f64, x0: f64, v: f64) -> Result<f64> {
    if !(v.abs() < 1.0) {
        return Err(Error::SuperluminalVelocity(v.abs()));
    }
    Ok((x - x0 - v * t) / (1.0 - v * v).sqrt())
}

/// Traveling kink (`sign = +1`) or antikink (`sign = -1`):
/// `q = 4 atan(e^{sign phi})`, `phi = (x - x0 - v t)/sqrt(1 - v^2)`.
pub fn separatrix(x: f64, t: f64, x0: f64, v: f64, sign: i8) -> Result<f64> {
    let phi = separatrix_phase(x, t, x0, v)?;
    Ok(4.0 * (f64::from(sign.signum()) * phi).exp().atan())
}

/// `w = (1 - i sign e^phi)/(1 + i sign e^phi)`; `2i ln w` reproduces the kink
/// exactly and the antikink minus `2 pi`.
pub fn separatrix_w(x: f64, t: f64, x0: f64, v: f64, sign: i8) -> Result<Cplx> {
    let phi = separatrix_phase(x, t, x0, v)?;
    let s = f64::from(sign.signum());
    Ok(if phi <= 0.0 {
        let e = phi.exp();
        (1.0 - I * s * e) / (1.0 + I * s * e)
    } else {
        let e = (-phi).exp();
        (e - I * s) / (e + I * s)
    })
}

/// Which solution a [`SolutionParams`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    BreatherDirect,
    KinkDirect,
    Separatrix,
    ThetaBreather,
    ThetaKink,
}

/// Everything needed to evaluate one solution.
///
/// For the theta kinds the argument line is `l(t) = l0 + i a t` and the
/// solution is `q = 2i ln[theta4(l; B)/theta3(l; B)]`. `t0` is the offset of
/// the matching direct solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionParams {
    pub kind: SolutionKind,
    pub energy: Option<Energy>,
    pub t0: f64,
    pub l0: Cplx,
    pub a: Cplx,
    pub b: Cplx,
}

impl SolutionParams {
    pub fn breather_direct(e: Energy, t0: f64) -> Result<Self> {
        BreatherDirect::new(e)?;
        Ok(Self { kind: SolutionKind::BreatherDirect, energy: Some(e), t0, l0: c(0.0), a: c(0.0), b: I })
    }

    pub fn kink_direct(e: Energy, t0: f64) -> Result<Self> {
        KinkDirect::new(e)?;
        Ok(Self { kind: SolutionKind::KinkDirect, energy: Some(e), t0, l0: c(0.0), a: c(0.0), b: I })
    }

    /// Theta-representation parameters.
    ///
    /// Breather: `Re l0 = 0` and `Re B = +-1/2`. Kink: `Re l0 = +-1/4` and the
    /// complementary modulus of `B` real and negative.
    pub fn theta(kind: SolutionKind, b: Cplx, l0: Cplx, a: Cplx, t0: f64) -> Result<Self> {
        ThetaArgs::new(l0, b)?;
        match kind {
            SolutionKind::ThetaBreather => {
                if l0.re.abs() > 1e-12 || (b.re.abs() - 0.5).abs() > 1e-12 {
                    return Err(Error::Domain(format!("breather needs Re l = 0 and Re B = +-1/2, got l0 = {l0}, B = {b}")));
                }
            }
            SolutionKind::ThetaKink => {
                if (l0.re.abs() - 0.25).abs() > 1e-12 {
                    return Err(Error::Domain(format!("kink needs Re l = +-1/4, got l0 = {l0}")));
                }
                let r = reduced(&ThetaArgs::new(c(0.0), b)?)?;
                let kp = r.ratio(4, 3).powi(2);
                if kp.re >= 0.0 || kp.im.abs() > 1e-9 * kp.norm() {
                    return Err(Error::Domain(format!("kink needs k'(B) < 0, got {kp}")));
                }
            }
            _ => return Err(Error::Domain("theta parameters need a theta kind".into())),
        }
        Ok(Self { kind, energy: None, t0, l0, a, b })
    }
}

/// Both theta-side values at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaRepValue {
    /// `theta4(l; B)/theta3(l; B)`
    pub w_theta: Cplx,
    /// `sqrt(k') nd(2K l; k)` in the frame of `B`
    pub w_nd: Cplx,
    /// principal `2i ln w_theta` (real part)
    pub q: f64,
}

/// Prepared evaluator for a theta-representation solution.
#[derive(Debug, Clone, Copy)]
pub struct ThetaRep {
    params: SolutionParams,
    sqrt_kp: Cplx,
    kq: Cplx,
    jac: Jacobi,
}

impl ThetaRep {
    pub fn new(params: &SolutionParams) -> Result<Self> {
        if !matches!(params.kind, SolutionKind::ThetaBreather | SolutionKind::ThetaKink) {
            return Err(Error::Domain("theta_rep needs theta parameters".into()));
        }
        let r = reduced(&ThetaArgs::new(c(0.0), params.b)?)?;
        let (t2, t3, t4) = (r.value(2)?, r.value(3)?, r.value(4)?);
        let m = Modulus::from_pair((t2 / t3).powi(2), (t4 / t3).powi(2))?;
        Ok(Self { params: *params, sqrt_kp: t4 / t3, kq: 0.5 * PI * t3 * t3, jac: Jacobi::new(m)? })
    }

    pub fn l(&self, t: f64) -> Cplx {
        self.params.l0 + I * self.params.a * t
    }

    pub fn w_theta(&self, t: f64) -> Result<Cplx> {
        theta43_ratio(&ThetaArgs::new(self.l(t), self.params.b)?)
    }

    pub fn eval(&self, t: f64) -> Result<ThetaRepValue> {
        let w_theta = self.w_theta(t)?;
        let w_nd = self.sqrt_kp * self.jac.nd(2.0 * self.kq * self.l(t))?;
        Ok(ThetaRepValue { w_theta, w_nd, q: q_from_w(w_theta) })
    }
}

pub fn theta_rep(t: f64, params: &SolutionParams) -> Result<ThetaRepValue> {
    ThetaRep::new(params)?.eval(t)
}

/// Parameters of a kink or breather train.
///
/// `alpha_n = kappa (x - x0) + w t + 2 n pi i B`, `kappa = 1/sqrt(1 - v^2)`,
/// `w = -v kappa`, and the spacing `L = 2 pi Im(B)/kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainParams {
    pub v: f64,
    pub kappa: f64,
    pub w: f64,
    pub x0: f64,
    pub b: Cplx,
    pub l: f64,
    pub n_max: usize,
}

impl TrainParams {
    fn build(v: f64, l: f64, x0: f64, n_max: usize, re_b: f64) -> Result<Self> {
        if !(v.abs() < 1.0) {
            return Err(Error::SuperluminalVelocity(v.abs()));
        }
        if !(l > 0.0) {
            return Err(Error::Domain(format!("train spacing must be positive, got {l}")));
        }
        let kappa = 1.0 / (1.0 - v * v).sqrt();
        let b = Cplx::new(re_b, kappa * l / (2.0 * PI));
        ThetaArgs::new(c(0.0), b)?;
        Ok(Self { v, kappa, w: -v * kappa, x0, b, l, n_max })
    }

    /// Kink train, `Re B = 0`.
    pub fn kink(v: f64, l: f64, x0: f64, n_max: usize) -> Result<Self> {
        Self::build(v, l, x0, n_max, 0.0)
    }

    /// Breather train, `Re B = 1/2`.
    pub fn breather(v: f64, l: f64, x0: f64, n_max: usize) -> Result<Self> {
        Self::build(v, l, x0, n_max, 0.5)
    }

    pub fn alpha(&self, x: f64, t: f64) -> f64 {
        self.kappa * (x - self.x0) + self.w * t
    }

    /// `L` recovered from `B` and `kappa`.
    pub fn spacing_from_b(&self) -> f64 {
        2.0 * PI * self.b.im / self.kappa
    }
}

/// `sum_{|n| <= N} [q_K(x - x0 - nL) + pi (sgn(n) - 1)]`, `sgn(n) = +1` for
/// `n > 0` and `-1` for `n <= 0`.
pub fn kink_train(x: f64, t: f64, p: &TrainParams) -> Result<f64> {
    if p.b.re.abs() > 1e-12 {
        return Err(Error::Domain("kink train needs Re B = 0".into()));
    }
    let n = p.n_max as i64;
    let mut q = 0.0;
    for j in -n..=n {
        let sgn = if j > 0 { 1.0 } else { -1.0 };
        q += separatrix(x - j as f64 * p.l, t, p.x0, p.v, 1)? + PI * (sgn - 1.0);
    }
    Ok(q)
}

/// `sum_{|n| <= N} [q_K(x - x0 - 2nL) + q_AK(x - x0 - (2n-1)L) - 2 pi]`.
///
/// Each kink/antikink pair carries the constant `-2 pi`, which is what the
/// theta product gives and keeps the sum finite as `N` grows.
pub fn breather_train(x: f64, t: f64, p: &TrainParams) -> Result<f64> {
    if (p.b.re - 0.5).abs() > 1e-12 {
        return Err(Error::Domain("breather train needs Re B = 1/2".into()));
    }
    let n = p.n_max as i64;
    let mut q = 0.0;
    for j in -n..=n {
        let jf = j as f64;
        q += separatrix(x - 2.0 * jf * p.l, t, p.x0, p.v, 1)?
            + separatrix(x - (2.0 * jf - 1.0) * p.l, t, p.x0, p.v, -1)?
            - 2.0 * PI;
    }
    Ok(q)
}

/// Theta argument of a train at `(x, t)`: `l = -1/4 - B/2 + i alpha/(2 pi)`.
pub fn train_theta_argument(x: f64, t: f64, p: &TrainParams) -> Cplx {
    c(-0.25) - 0.5 * p.b + I * p.alpha(x, t) / (2.0 * PI)
}

/// `theta4/theta3` of the train from the theta series.
pub fn train_theta_series(x: f64, t: f64, p: &TrainParams) -> Result<Cplx> {
    theta43_ratio(&ThetaArgs::new(train_theta_argument(x, t, p), p.b)?)
}

/// `theta4/theta3` of the train through the product form of `theta2`:
/// `i theta2(l + B/2 + 1/2)/theta2(l + B/2)`, both products truncated at `n_terms`.
pub fn train_theta_product(x: f64, t: f64, p: &TrainParams, n_terms: usize) -> Result<Cplx> {
    let shifted = train_theta_argument(x, t, p) + 0.5 * p.b;
    Ok(I * theta2_product(shifted + 0.5, p.b, n_terms)? / theta2_product(shifted, p.b, n_terms)?)
}

/// Finite-difference residual of `q_tt + sin q = 0`:
/// `max |(q(t+h) - 2q(t) + q(t-h))/h^2 + sin q(t)|` over the interior grid
/// points. Differences are reduced modulo `4 pi` into `(-2 pi, 2 pi]` so
/// principal-branch evaluators can be used across branch jumps.
pub fn sge_residual<F: Fn(f64) -> Result<f64>>(q: F, t_grid: &[f64], h: f64) -> Result<f64> {
    if t_grid.len() < 3 {
        return Err(Error::Domain("sge_residual needs at least three grid points".into()));
    }
    let wrap = |d: f64| d - 4.0 * PI * ((d + 2.0 * PI) / (4.0 * PI) - 1e-15).ceil() + 4.0 * PI;
    let mut worst: f64 = 0.0;
    for &t in &t_grid[1..t_grid.len() - 1] {
        let (qm, q0, qp) = (q(t - h)?, q(t)?, q(t + h)?);
        let second = (wrap(qp - q0) - wrap(q0 - qm)) / (h * h);
        worst = worst.max((second + q0.sin()).abs());
    }
    Ok(worst)
}

/// Inclusive uniform grid `min, min + step, ...` up to `max` within half a step.
pub fn uniform_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(max >= min) || !min.is_finite() || !max.is_finite() {
        return Err(Error::Domain(format!("bad grid {min}:{max}:{step}")));
    }
    let n = ((max - min) / step + 0.5).floor() as usize;
    Ok((0..=n).map(|j| min + j as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(h: f64) -> Energy {
        Energy::new(h).unwrap()
    }

    #[test]
    fn wrap_reduces_into_half_open_interval() {
        let grid = uniform_grid(-1.0, 1.0, 0.5).unwrap();
        assert_eq!(grid, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        // constant zero solution
        assert_eq!(sge_residual(|_| Ok(0.0), &grid, 1e-4).unwrap(), 0.0);
    }

    #[test]
    fn breather_examples() {
        let b = BreatherDirect::new(e(1e-6)).unwrap();
        for t in [-3.0, 0.2, 5.0] {
            assert!(b.q(t, 0.0).unwrap().abs() <= 2.0 * (0.5e-6f64).sqrt() + 1e-15);
        }
        let b = BreatherDirect::new(e(2.0)).unwrap();
        for t in [-1.0, 0.3, 2.0] {
            assert!((b.q(t, 0.0).unwrap() - 2.0 * f64::tanh(t).asin()).abs() < 1e-14);
        }
        let b = BreatherDirect::new(e(1.0)).unwrap();
        let kq = crate::elliptic::complete_k(&Modulus::real(b.kb).unwrap()).unwrap().re;
        assert!((b.q(kq, 0.0).unwrap() - PI / 2.0).abs() < 1e-12);
        assert!(BreatherDirect::new(e(2.5)).is_err());
    }

    #[test]
    fn breather_log_and_arcsin_agree() {
        for h in [0.3, 1.0, 1.9] {
            let b = BreatherDirect::new(e(h)).unwrap();
            for j in 0..40 {
                let t = -6.0 + 0.31 * j as f64;
                assert!((b.q(t, 0.4).unwrap() - b.q_arcsin(t, 0.4).unwrap()).abs() < 1e-10);
                let w = b.w(t, 0.4).unwrap();
                assert!((w.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kink_examples() {
        let k = KinkDirect::new(e(5.0)).unwrap();
        assert_eq!(k.q(1.5, 1.5).unwrap(), 0.0);
        let k = KinkDirect::new(e(2.0)).unwrap();
        for t in [-2.0, 0.0, 1.0] {
            let sep = 4.0 * f64::exp(t).atan() - PI;
            assert!((k.q(t, 0.0).unwrap() - sep).abs() < 1e-14);
        }
        let k = KinkDirect::new(e(8.0)).unwrap();
        let kq = crate::elliptic::complete_k(&Modulus::real(0.5).unwrap()).unwrap().re;
        assert!((k.q(0.5 * kq, 0.0).unwrap() - PI).abs() < 1e-10);
        assert!(KinkDirect::new(e(1.0)).is_err());
    }

    #[test]
    fn kink_arcsin_is_reflection_where_cn_negative() {
        let k = KinkDirect::new(e(4.0)).unwrap();
        for j in 0..60 {
            let t = -7.0 + 0.23 * j as f64;
            let (q, qa) = (k.q(t, 0.0).unwrap(), k.q_arcsin(t, 0.0).unwrap());
            assert!(((q / 2.0).sin() - (qa / 2.0).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn kink_winds_by_two_pi_per_period() {
        let k = KinkDirect::new(e(4.0)).unwrap();
        let kq = crate::elliptic::complete_k(&Modulus::real(k.kk).unwrap()).unwrap().re;
        let period = 4.0 * k.kk * kq;
        let ts = uniform_grid(0.0, period, period / 400.0).unwrap();
        let ws: Vec<Cplx> = ts.iter().map(|&t| k.w(t, 0.0).unwrap()).collect();
        let q = q_from_w_grid(&ws).unwrap();
        assert!((q.last().unwrap() - q[0] - 4.0 * PI).abs() < 1e-9 || (q.last().unwrap() - q[0] - 2.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn separatrix_examples() {
        assert!((separatrix(0.0, 0.0, 0.0, 0.3, 1).unwrap() - PI).abs() < 1e-15);
        assert!((separatrix(30.0, 0.0, 0.0, 0.0, 1).unwrap() - 2.0 * PI).abs() < 1e-12);
        let q = separatrix(1.0, 0.0, 0.0, 0.6, 1).unwrap();
        assert!((q - 4.0 * 1.25f64.exp().atan()).abs() < 1e-15);
        assert!(matches!(separatrix(0.0, 0.0, 0.0, 1.0, 1), Err(Error::SuperluminalVelocity(_))));
        for x in [-5.0, -0.3, 0.0, 2.0, 40.0] {
            let qk = separatrix(x, 0.2, 0.1, 0.4, 1).unwrap();
            let wk = separatrix_w(x, 0.2, 0.1, 0.4, 1).unwrap();
            assert!((q_from_w(wk) - qk).abs() < 1e-12);
            let qa = separatrix(x, 0.2, 0.1, 0.4, -1).unwrap();
            let wa = separatrix_w(x, 0.2, 0.1, 0.4, -1).unwrap();
            assert!((q_from_w(wa) + 2.0 * PI - qa).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_maps() {
        assert!((BreatherSpectrum::new(PI).unwrap().energy().h - 2.0).abs() < 1e-15);
        assert!((KinkSpectrum::new(0.0).unwrap().energy().h - 2.0).abs() < 1e-15);
        assert!((BreatherSpectrum::from_energy(e(1.0)).unwrap().phi - 1.5 * PI).abs() < 1e-15);
        for h in [0.1, 0.7, 1.5, 2.0] {
            let s = BreatherSpectrum::from_energy(e(h)).unwrap();
            assert!((s.energy().h - h).abs() < 1e-12);
            assert!((s.e1.norm() - 1.0 / 16.0).abs() < 1e-16);
        }
        for h in [2.0, 2.5, 10.0] {
            let s = KinkSpectrum::from_energy(e(h)).unwrap();
            assert!((s.energy().h - h).abs() < 1e-12);
            assert!(s.e1 <= s.e2 && s.e2 < 0.0);
        }
        assert!(KinkSpectrum::from_energy(e(1.0)).is_err());
    }

    #[test]
    fn theta_params_invariants() {
        assert!(SolutionParams::theta(SolutionKind::ThetaBreather, Cplx::new(0.5, 0.4), c(0.0), I, 0.0).is_ok());
        assert!(SolutionParams::theta(SolutionKind::ThetaBreather, Cplx::new(0.3, 0.4), c(0.0), I, 0.0).is_err());
        // purely imaginary B has k' > 0 and is refused for kinks
        assert!(SolutionParams::theta(SolutionKind::ThetaKink, Cplx::new(0.0, 0.8), c(0.25), I, 0.0).is_err());
    }

    #[test]
    fn theta_rep_dual_paths_agree() {
        let p = SolutionParams::theta(SolutionKind::ThetaBreather, Cplx::new(-0.5, 0.45), c(0.0), Cplx::new(0.0, -0.2), 0.0).unwrap();
        let r = ThetaRep::new(&p).unwrap();
        for j in 0..20 {
            let v = r.eval(-2.0 + 0.2 * j as f64).unwrap();
            assert!((v.w_theta - v.w_nd).norm() < 1e-10, "{v:?}");
        }
    }

    #[test]
    fn kink_train_single_term() {
        let p = TrainParams::kink(0.3, 4.0, 0.0, 0).unwrap();
        let q = kink_train(0.7, 0.1, &p).unwrap();
        assert!((q - (separatrix(0.7, 0.1, 0.0, 0.3, 1).unwrap() - 2.0 * PI)).abs() < 1e-15);
        assert!((p.spacing_from_b() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn kink_train_matches_theta_series() {
        let p = TrainParams::kink(0.2, 3.0, 0.5, 20).unwrap();
        for (x, t) in [(0.0, 0.0), (1.3, 0.4), (-2.2, 1.0), (4.0, -0.7)] {
            let w_sum = (-I * kink_train(x, t, &p).unwrap() / 2.0).exp();
            let w_series = train_theta_series(x, t, &p).unwrap();
            let w_prod = train_theta_product(x, t, &p, 20).unwrap();
            assert!((w_sum - w_series).norm() < 1e-10, "{x} {t}");
            assert!((w_prod - w_series).norm() < 1e-10);
        }
    }

    #[test]
    fn breather_train_is_localized_and_matches_theta() {
        let p = TrainParams::breather(0.0, 2.5, 0.0, 10).unwrap();
        for x in [-1e3, 1e3] {
            let q = breather_train(x, 0.0, &p).unwrap();
            let r = q.rem_euclid(2.0 * PI);
            assert!(r.min(2.0 * PI - r) < 1e-6);
        }
        for (x, t) in [(0.3, 0.0), (1.7, 0.5), (-2.0, 0.2)] {
            let w_sum = (-I * breather_train(x, t, &p).unwrap() / 2.0).exp();
            let w_series = train_theta_series(x, t, &p).unwrap();
            assert!((w_sum - w_series).norm() < 1e-9, "{x}: {w_sum} {w_series}");
        }
    }
}
