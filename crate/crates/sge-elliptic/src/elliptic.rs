//! Complete elliptic integrals, modulus / period-ratio / nome conversions and
//! phase unwrapping.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::quad::{gauss_kronrod, tanh_sinh};
use crate::theta::{theta2, theta3, theta4, ThetaArgs};
use crate::{c, Cplx, Error, Result, I};

/// Elliptic modulus pair with `k^2 + k'^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    k: Cplx,
    k_prime: Cplx,
}

fn complement_defect(k: Cplx, kp: Cplx) -> (f64, f64) {
    let k2 = k * k;
    let kp2 = kp * kp;
    let scale = 1f64.max(k2.norm()).max(kp2.norm());
    ((k2 + kp2 - 1.0).norm(), 1e-12 * scale)
}

impl Modulus {
    /// Modulus from `k`; `k'` is the principal root of `1 - k^2`.
    pub fn new(k: Cplx) -> Result<Self> {
        if !(k.re.is_finite() && k.im.is_finite()) {
            return Err(Error::Domain("modulus must be finite".into()));
        }
        Ok(Self { k, k_prime: (1.0 - k * k).sqrt() })
    }

    pub fn real(k: f64) -> Result<Self> {
        Self::new(c(k))
    }

    /// Modulus from an explicit pair; any branch of `k'` is accepted as long
    /// as the pair is complementary.
    pub fn from_pair(k: Cplx, k_prime: Cplx) -> Result<Self> {
        let (defect, tol) = complement_defect(k, k_prime);
        if !(defect <= tol) {
            return Err(Error::Domain(format!("k^2 + k'^2 - 1 = {defect:e} for k = {k}, k' = {k_prime}")));
        }
        Ok(Self { k, k_prime })
    }

    pub fn k(&self) -> Cplx {
        self.k
    }

    pub fn k_prime(&self) -> Cplx {
        self.k_prime
    }

    /// The parameter `m = k^2`.
    pub fn m(&self) -> Cplx {
        self.k * self.k
    }

    /// `(k', k)`.
    pub fn complement(&self) -> Self {
        Self { k: self.k_prime, k_prime: self.k }
    }

    pub fn complementarity_defect(&self) -> f64 {
        complement_defect(self.k, self.k_prime).0
    }
}

/// Period ratio `tau = i K'/K` on the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodRatio {
    tau: Cplx,
}

impl PeriodRatio {
    pub fn new(tau: Cplx) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(Error::Domain(format!("period ratio {tau} is not in the upper half plane")));
        }
        Ok(Self { tau })
    }

    pub fn tau(&self) -> Cplx {
        self.tau
    }
}

/// Nome `q = exp(i pi tau)`. The period ratio is kept alongside so fractional
/// powers such as `q^(1/2)` are unambiguous.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nome {
    pub q: Cplx,
    pub tau: Cplx,
}

impl Nome {
    /// `q^p = exp(i pi tau p)`.
    pub fn pow(&self, p: f64) -> Cplx {
        (I * PI * self.tau * p).exp()
    }
}

/// Quarter periods `K = K(k)` and `K' = K(k')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarterPeriods {
    pub k_quarter: Cplx,
    pub k_quarter_prime: Cplx,
}

impl QuarterPeriods {
    pub fn of(m: &Modulus) -> Result<Self> {
        Ok(Self { k_quarter: complete_k(m)?, k_quarter_prime: complete_k_prime(m)? })
    }
}

fn agm_real(b: f64) -> f64 {
    let mut a = 1.0f64;
    let mut b = b;
    for _ in 0..64 {
        if (a - b).abs() <= 1e-9 * a {
            // quadratic convergence: one more mean is exact to rounding
            return 0.5 * (a + b);
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    a
}

fn agm_complex(b: Cplx) -> Result<Cplx> {
    let mut a = c(1.0);
    let mut b = b;
    for _ in 0..64 {
        if (a - b).norm() <= 1e-9 * a.norm() {
            return Ok(0.5 * (a + b));
        }
        let an = 0.5 * (a + b);
        let mut bn = (a * b).sqrt();
        if (an - bn).norm() > (an + bn).norm() {
            bn = -bn;
        }
        a = an;
        b = bn;
    }
    Err(Error::NonConvergence("complex AGM".into()))
}

/// K as a function of the parameter `m = k^2`.
///
/// Real `m < 1` uses the real AGM, complex `m` the complex AGM seeded with the
/// principal `sqrt(1 - m)` (the analytic continuation of the principal-branch
/// integral), and real `m > 1` the integral on the upper lip `m + i0`.
pub fn complete_k_param(m: Cplx) -> Result<Cplx> {
    if !(m.re.is_finite() && m.im.is_finite()) {
        return Err(Error::Domain("parameter must be finite".into()));
    }
    if m == c(1.0) {
        return Err(Error::ModulusSingular);
    }
    if m.im == 0.0 {
        if m.re < 1.0 {
            return Ok(c(FRAC_PI_2 / agm_real((1.0 - m.re).sqrt())));
        }
        return upper_lip_quadrature(m.re);
    }
    let a = agm_complex((1.0 - m).sqrt())?;
    crate::ensure_finite(FRAC_PI_2 / a, "K")
}

/// Complete elliptic integral of the first kind, `K(k)`.
pub fn complete_k(m: &Modulus) -> Result<Cplx> {
    complete_k_param(m.m())
}

/// `K'(k) = K(k')`.
pub fn complete_k_prime(m: &Modulus) -> Result<Cplx> {
    complete_k_param(m.k_prime() * m.k_prime())
}

fn upper_lip_quadrature(m: f64) -> Result<Cplx> {
    // 1 - m sin^2 t = m sin(t* - t) sin(t* + t), t* = asin(1/sqrt m)
    let ts = (1.0 / m.sqrt()).asin();
    let below = tanh_sinh(|x, _, d| c(1.0 / (m * d.sin() * (ts + x).sin()).sqrt()), 0.0, ts, 1e-15)?;
    let above = tanh_sinh(|x, d, _| c(1.0 / (m * d.sin() * (ts + x).sin()).sqrt()), ts, FRAC_PI_2, 1e-15)?;
    Ok(below + I * above)
}

/// `K(k)` by direct quadrature of `int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t)`.
///
/// Principal branch off the real axis; for real `k^2 > 1` the upper lip
/// `k^2 + i0` is used, matching [`complete_k`]. Kept public as an oracle for
/// the AGM paths.
pub fn complete_k_quadrature(m: &Modulus) -> Result<Cplx> {
    let p = m.m();
    if p == c(1.0) {
        return Err(Error::ModulusSingular);
    }
    if p.im == 0.0 && p.re > 1.0 {
        return upper_lip_quadrature(p.re);
    }
    if p.im == 0.0 && p.re > 0.9 {
        // peaked near pi/2; keep the endpoint distance exact
        let below = p.re;
        return tanh_sinh(
            |_, _, d| {
                let s = d.cos();
                c(1.0 / (1.0 - below * s * s).sqrt())
            },
            0.0,
            FRAC_PI_2,
            1e-15,
        );
    }
    gauss_kronrod(
        |t| {
            let s = t.sin();
            1.0 / (1.0 - p * s * s).sqrt()
        },
        0.0,
        FRAC_PI_2,
        1e-14,
        0.0,
    )
}

/// `tau = i K'/K`.
pub fn tau_from_modulus(m: &Modulus) -> Result<PeriodRatio> {
    let k = complete_k(m)?;
    let kp = complete_k_prime(m)?;
    if k.norm() == 0.0 {
        return Err(Error::Degenerate("K = 0".into()));
    }
    PeriodRatio::new(I * kp / k)
}

pub fn nome_from_tau(t: &PeriodRatio) -> Nome {
    Nome { q: (I * PI * t.tau()).exp(), tau: t.tau() }
}

/// Modulus from theta constants: `k = theta2^2/theta3^2`, `k' = theta4^2/theta3^2`.
pub fn modulus_from_tau(t: &PeriodRatio) -> Result<Modulus> {
    let args = ThetaArgs::new(c(0.0), t.tau())?;
    let t2 = theta2(&args)?;
    let t3 = theta3(&args)?;
    let t4 = theta4(&args)?;
    Modulus::from_pair((t2 / t3).powi(2), (t4 / t3).powi(2))
}

/// Continuous argument of a sequence of non-zero complex samples.
///
/// Steps whose wrapped argument change exceeds `3 pi / 4` are rejected as
/// unresolved: the grid is too coarse to tell which way the phase turned.
pub fn unwrap_phase(samples: &[Cplx]) -> Result<Vec<f64>> {
    const MAX_STEP: f64 = 0.75 * PI;
    let mut out = Vec::with_capacity(samples.len());
    let mut prev: Option<(Cplx, f64)> = None;
    for (i, &z) in samples.iter().enumerate() {
        if z.norm() == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::PhaseJump { index: i.saturating_sub(1) });
        }
        let phase = match prev {
            None => z.arg(),
            Some((zp, acc)) => {
                let d = (z / zp).arg();
                if d.abs() > MAX_STEP {
                    return Err(Error::PhaseJump { index: i - 1 });
                }
                acc + d
            }
        };
        out.push(phase);
        prev = Some((z, phase));
    }
    Ok(out)
}
