//! Jacobi elliptic functions of complex argument and complex modulus.
//!
//! The reference path builds sn, cn, dn from theta quotients. Two series
//! paths (Fourier in the nome, and csc sums over the imaginary period) are
//! kept as independent evaluators.

use std::f64::consts::PI;

use crate::elliptic::{complete_k, complete_k_prime, Modulus, Nome};
use crate::theta::{reduced, ThetaArgs};
use crate::{c, Cplx, Error, Result, I};

/// Distance in `u` below which a quotient is refused.
pub const POLE_RADIUS: f64 = 1e-9;

/// An argument together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JefPoint {
    pub u: Cplx,
    pub m: Modulus,
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    /// period parameter of the thetas; `-1/tau` when swapped
    b: Cplx,
    swapped: bool,
    /// `2K` (or `2K'` when swapped) from `pi theta3(0)^2`
    two_k: Cplx,
    t2: Cplx,
    t3: Cplx,
    t4: Cplx,
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Circular,
    Hyperbolic,
    Theta(Frame),
}

/// Prepared evaluator for one modulus. Construction computes the quarter
/// periods and theta constants once; evaluation is then a handful of theta
/// series.
#[derive(Debug, Clone, Copy)]
pub struct Jacobi {
    modulus: Modulus,
    kind: Kind,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Fun {
    Sn,
    Cn,
    Dn,
    Nd,
    Sc,
    Nc,
    Cs,
}

fn theta_zero(j: usize, b: Cplx) -> Cplx {
    match j {
        1 => c(0.0),
        2 => c(0.5),
        3 => 0.5 + 0.5 * b,
        _ => 0.5 * b,
    }
}

fn lattice_distance(d: Cplx, b: Cplx) -> f64 {
    let n = (d.im / b.im).round();
    let d1 = d - n * b;
    let mut best = f64::INFINITY;
    for dn in -1..=1 {
        let d2 = d1 - dn as f64 * b;
        let m = d2.re.round();
        for dm in -1..=1 {
            best = best.min((d2 - m - dm as f64).norm());
        }
    }
    best
}

impl Jacobi {
    pub fn new(modulus: Modulus) -> Result<Self> {
        let m = modulus.m();
        if m == c(0.0) {
            return Ok(Self { modulus, kind: Kind::Circular });
        }
        if m == c(1.0) {
            return Ok(Self { modulus, kind: Kind::Hyperbolic });
        }
        let kq = complete_k(&modulus)?;
        let kqp = complete_k_prime(&modulus)?;
        let tau = I * kqp / kq;
        if !(tau.im > 0.0) {
            return Err(Error::Domain(format!("period ratio {tau} not in the upper half plane")));
        }
        let swapped_b = -1.0 / tau;
        let (b, swapped) = if swapped_b.im > tau.im { (swapped_b, true) } else { (tau, false) };
        let r = reduced(&ThetaArgs::new(c(0.0), b)?)?;
        let t2 = r.value(2)?;
        let t3 = r.value(3)?;
        let t4 = r.value(4)?;
        // the frame must reproduce the requested parameter (or its complement)
        let lam = if swapped { (t4 / t3).powi(4) } else { (t2 / t3).powi(4) };
        if (lam - m).norm() > 1e-9 * m.norm().max(1.0) {
            return Err(Error::BranchInconsistent(format!(
                "theta frame gives m = {lam}, requested {m}"
            )));
        }
        let frame = Frame { b, swapped, two_k: PI * t3 * t3, t2, t3, t4 };
        Ok(Self { modulus, kind: Kind::Theta(frame) })
    }

    pub fn real(k: f64) -> Result<Self> {
        Self::new(Modulus::real(k)?)
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    fn eval(&self, u: Cplx, f: Fun) -> Result<Cplx> {
        if !(u.re.is_finite() && u.im.is_finite()) {
            return Err(Error::Domain("argument must be finite".into()));
        }
        match self.kind {
            Kind::Circular => {
                let (s, co) = (u.sin(), u.cos());
                let guard = |d: Cplx| {
                    if d.norm() < POLE_RADIUS {
                        Err(Error::PoleProximity { radius: POLE_RADIUS })
                    } else {
                        Ok(d)
                    }
                };
                Ok(match f {
                    Fun::Sn => s,
                    Fun::Cn => co,
                    Fun::Dn | Fun::Nd => c(1.0),
                    Fun::Sc => s / guard(co)?,
                    Fun::Nc => 1.0 / guard(co)?,
                    Fun::Cs => co / guard(s)?,
                })
            }
            Kind::Hyperbolic => {
                let (sh, ch) = (u.sinh(), u.cosh());
                let guard = |d: Cplx| {
                    if d.norm() < POLE_RADIUS {
                        Err(Error::PoleProximity { radius: POLE_RADIUS })
                    } else {
                        Ok(d)
                    }
                };
                Ok(match f {
                    Fun::Sn => sh / guard(ch)?,
                    Fun::Cn | Fun::Dn => 1.0 / guard(ch)?,
                    Fun::Nd | Fun::Nc => ch,
                    Fun::Sc => sh,
                    Fun::Cs => 1.0 / guard(sh)?,
                })
            }
            Kind::Theta(fr) => self.eval_theta(&fr, u, f),
        }
    }

    fn eval_theta(&self, fr: &Frame, u: Cplx, f: Fun) -> Result<Cplx> {
        let l = if fr.swapped { I * u / fr.two_k } else { u / fr.two_k };
        let (t2, t3, t4) = (fr.t2, fr.t3, fr.t4);
        // (numerator, denominator, constant)
        let (j, i, k) = if fr.swapped {
            match f {
                Fun::Sn => (1, 2, -I * t3 / t4),
                Fun::Cn => (4, 2, t2 / t4),
                Fun::Dn => (3, 2, t2 / t3),
                Fun::Nd => (2, 3, t3 / t2),
                Fun::Sc => (1, 4, -I * t3 / t2),
                Fun::Nc => (2, 4, t4 / t2),
                Fun::Cs => (4, 1, I * t2 / t3),
            }
        } else {
            match f {
                Fun::Sn => (1, 4, t3 / t2),
                Fun::Cn => (2, 4, t4 / t2),
                Fun::Dn => (3, 4, t4 / t3),
                Fun::Nd => (4, 3, t3 / t4),
                Fun::Sc => (1, 2, t3 / t4),
                Fun::Nc => (4, 2, t2 / t4),
                Fun::Cs => (2, 1, t4 / t3),
            }
        };
        let dist = lattice_distance(l - theta_zero(i, fr.b), fr.b) * fr.two_k.norm();
        if dist < POLE_RADIUS {
            return Err(Error::PoleProximity { radius: POLE_RADIUS });
        }
        let r = reduced(&ThetaArgs::new(l, fr.b)?)?;
        crate::ensure_finite(k * r.ratio(j, i), "Jacobi function")
    }

    pub fn sn(&self, u: Cplx) -> Result<Cplx> {
        self.eval(u, Fun::Sn)
    }
    pub fn cn(&self, u: Cplx) -> Result<Cplx> {
        self.eval(u, Fun::Cn)
    }
    pub fn dn(&self, u: Cplx) -> Result<Cplx> {
        self.eval(u, Fun::Dn)
    }
    pub fn nd(&self, u: Cplx) -> Result<Cplx> {
        self.eval(u, Fun::Nd)
    }
    pub fn sc(&self, u: Cplx) -> Result<Cplx> {
        self.eval(u, Fun::Sc)
    }
    pub fn nc(&self, u: Cplx) -> Result<Cplx> {
        self.eval(u, Fun::Nc)
    }
    pub fn cs(&self, u: Cplx) -> Result<Cplx> {
        self.eval(u, Fun::Cs)
    }

    /// `(sn, cn, dn)` from a single theta evaluation.
    pub fn sncndn(&self, u: Cplx) -> Result<(Cplx, Cplx, Cplx)> {
        let fr = match self.kind {
            Kind::Theta(fr) => fr,
            _ => return Ok((self.sn(u)?, self.cn(u)?, self.dn(u)?)),
        };
        let l = if fr.swapped { I * u / fr.two_k } else { u / fr.two_k };
        let den = if fr.swapped { 2 } else { 4 };
        if lattice_distance(l - theta_zero(den, fr.b), fr.b) * fr.two_k.norm() < POLE_RADIUS {
            return Err(Error::PoleProximity { radius: POLE_RADIUS });
        }
        let r = reduced(&ThetaArgs::new(l, fr.b)?)?;
        let (t2, t3, t4) = (fr.t2, fr.t3, fr.t4);
        let out = if fr.swapped {
            (-I * t3 / t4 * r.ratio(1, 2), t2 / t4 * r.ratio(4, 2), t2 / t3 * r.ratio(3, 2))
        } else {
            (t3 / t2 * r.ratio(1, 4), t4 / t2 * r.ratio(2, 4), t4 / t3 * r.ratio(3, 4))
        };
        crate::ensure_finite(out.0 + out.1 + out.2, "Jacobi functions")?;
        Ok(out)
    }
}

/// Jacobi amplitude for real `0 <= k <= 1` and real argument, by the
/// descending Gauss transformation (arithmetic-geometric mean).
///
/// The argument is first reduced by multiples of `2K`, so the returned
/// amplitude lies in `[-pi/2, pi/2]` and `am(u) = am_r + n pi`. Working in
/// real arithmetic on the reduced argument keeps the rounding noise at a few
/// ulps of the result, which matters when the values are fed to second
/// differences.
#[derive(Debug, Clone)]
pub struct RealAmplitude {
    k: f64,
    /// `a_n` and `c_n` of the AGM, `c_0 = k`
    a: Vec<f64>,
    c: Vec<f64>,
    k_quarter: f64,
}

impl RealAmplitude {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::Domain(format!("real amplitude needs 0 <= k <= 1, got {k}")));
        }
        if k == 1.0 {
            return Ok(Self { k, a: Vec::new(), c: Vec::new(), k_quarter: f64::INFINITY });
        }
        let mut a = vec![1.0f64];
        let mut cs = vec![k];
        let mut b = (1.0 - k * k).sqrt();
        for _ in 0..64 {
            let an = *a.last().unwrap();
            let cn = *cs.last().unwrap();
            if cn.abs() <= f64::EPSILON * an {
                break;
            }
            a.push(0.5 * (an + b));
            cs.push(0.5 * (an - b));
            b = (an * b).sqrt();
        }
        let k_quarter = PI / (2.0 * a.last().unwrap());
        Ok(Self { k, a, c: cs, k_quarter })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `K(k)`; infinite at `k = 1`.
    pub fn k_quarter(&self) -> f64 {
        self.k_quarter
    }

    /// `(am_r, n)` with `am(u) = am_r + n pi` and `|am_r| <= pi/2`.
    pub fn amplitude(&self, u: f64) -> Result<(f64, i64)> {
        if !u.is_finite() {
            return Err(Error::Domain("amplitude argument must be finite".into()));
        }
        if self.k == 1.0 {
            // gudermannian
            return Ok((u.sinh().atan(), 0));
        }
        let n = (u / (2.0 * self.k_quarter)).round();
        let ur = u - n * 2.0 * self.k_quarter;
        let last = self.a.len() - 1;
        let mut phi = (1u64 << last) as f64 * self.a[last] * ur;
        for j in (1..=last).rev() {
            phi = 0.5 * (phi + (self.c[j] / self.a[j] * phi.sin()).asin());
        }
        Ok((phi, n as i64))
    }

    /// Real `(sn, cn, dn)`.
    pub fn sncndn(&self, u: f64) -> Result<(f64, f64, f64)> {
        let (p, n) = self.amplitude(u)?;
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let s = p.sin();
        Ok((sign * s, sign * p.cos(), (1.0 - self.k * self.k * s * s).sqrt()))
    }
}

macro_rules! point_fn {
    ($($name:ident),*) => {$(
        pub fn $name(p: &JefPoint) -> Result<Cplx> {
            Jacobi::new(p.m)?.$name(p.u)
        }
    )*};
}
point_fn!(sn, cn, dn, nd, sc, nc, cs);

/// Theta-constant data read off a nome.
struct NomeData {
    k: Cplx,
    kp: Cplx,
    kq: Cplx,
    tau: Cplx,
}

fn nome_data(nome: &Nome) -> Result<NomeData> {
    let r = reduced(&ThetaArgs::new(c(0.0), nome.tau)?)?;
    let (t2, t3, t4) = (r.value(2)?, r.value(3)?, r.value(4)?);
    Ok(NomeData { k: (t2 / t3).powi(2), kp: (t4 / t3).powi(2), kq: 0.5 * PI * t3 * t3, tau: nome.tau })
}

fn check_strip(u: Cplx, kq: Cplx, tau: Cplx) -> Result<()> {
    if (u / kq).im.abs() < tau.im {
        Ok(())
    } else {
        Err(Error::StripViolation)
    }
}

fn fourier_sum<F: Fn(usize) -> (Cplx, f64)>(term: F) -> Result<Cplx> {
    let mut s = c(0.0);
    let mut scale = 0.0;
    for m in 0..10_000 {
        let (t, bound) = term(m);
        s += t;
        scale += bound;
        if m > 2 && bound <= 1e-17 * scale {
            return crate::ensure_finite(s, "Fourier series");
        }
    }
    Err(Error::NonConvergence("Fourier series exceeded 10^4 terms".into()))
}

/// `sn(u) = (2 pi/(k K)) sum_{m>=0} q^{m+1/2}/(1 - q^{2m+1}) sin((m+1/2) pi u/K)`,
/// with `k`, `k'`, `K` read off the nome's theta constants.
pub fn sn_fourier(u: Cplx, nome: &Nome) -> Result<Cplx> {
    let d = nome_data(nome)?;
    check_strip(u, d.kq, d.tau)?;
    let x = PI * u / d.kq;
    let s = fourier_sum(|m| {
        let h = m as f64 + 0.5;
        let qh = nome.pow(h);
        let t = qh / (1.0 - nome.pow(2.0 * h)) * (h * x).sin();
        (t, qh.norm() * (h * x.im).abs().exp())
    })?;
    Ok(2.0 * PI / (d.k * d.kq) * s)
}

/// `dn(u) = pi/(2K) + (2 pi/K) sum_{m>=0} q^{m+1}/(1 + q^{2m+2}) cos((m+1) pi u/K)`.
pub fn dn_fourier(u: Cplx, nome: &Nome) -> Result<Cplx> {
    let d = nome_data(nome)?;
    check_strip(u, d.kq, d.tau)?;
    let x = PI * u / d.kq;
    let s = fourier_sum(|m| {
        let j = m as f64 + 1.0;
        let qj = nome.pow(j);
        (qj / (1.0 + nome.pow(2.0 * j)) * (j * x).cos(), qj.norm() * (j * x.im).abs().exp())
    })?;
    Ok(PI / (2.0 * d.kq) + 2.0 * PI / d.kq * s)
}

/// Terms of the nd series: element `m` is
/// `(2 pi/(k' K)) (-1)^{m+1} q^{m+1}/(1 + q^{2m+2}) cos((m+1) pi u/K)`;
/// the constant `pi/(2 k' K)` is returned separately as `.0`.
pub fn nd_fourier_terms(u: Cplx, nome: &Nome, n_terms: usize) -> Result<(Cplx, Vec<Cplx>)> {
    let d = nome_data(nome)?;
    check_strip(u, d.kq, d.tau)?;
    let x = PI * u / d.kq;
    let pre = 2.0 * PI / (d.kp * d.kq);
    let terms = (0..n_terms)
        .map(|m| {
            let j = m as f64 + 1.0;
            let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
            pre * sign * nome.pow(j) / (1.0 + nome.pow(2.0 * j)) * (j * x).cos()
        })
        .collect();
    Ok((PI / (2.0 * d.kp * d.kq), terms))
}

/// `nd(u) = pi/(2 k' K) + (2 pi/(k' K)) sum_{m>=0} (-1)^{m+1} q^{m+1}/(1 + q^{2m+2}) cos((m+1) pi u/K)`.
pub fn nd_fourier(u: Cplx, nome: &Nome) -> Result<Cplx> {
    let d = nome_data(nome)?;
    check_strip(u, d.kq, d.tau)?;
    let x = PI * u / d.kq;
    let s = fourier_sum(|m| {
        let j = m as f64 + 1.0;
        let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
        let qj = nome.pow(j);
        (sign * qj / (1.0 + nome.pow(2.0 * j)) * (j * x).cos(), qj.norm() * (j * x.im).abs().exp())
    })?;
    Ok(PI / (2.0 * d.kp * d.kq) + 2.0 * PI / (d.kp * d.kq) * s)
}

fn csc(z: Cplx) -> Cplx {
    if z.im > 0.0 {
        let w = (I * z).exp();
        2.0 * I * w / (w * w - 1.0)
    } else {
        let w = (-I * z).exp();
        2.0 * I * w / (1.0 - w * w)
    }
}

fn csc_sum(p: &JefPoint, n_terms: usize, alternating: bool) -> Result<(Cplx, Cplx, Cplx)> {
    let kq = complete_k(&p.m)?;
    let kqp = complete_k_prime(&p.m)?;
    check_strip(p.u, kq, I * kqp / kq)?;
    let n = n_terms as i64;
    let mut s = c(0.0);
    for m in -n..=n {
        let sign = if alternating && m.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
        s += sign * csc(PI / (2.0 * kq) * (p.u - (2 * m - 1) as f64 * I * kqp));
    }
    Ok((crate::ensure_finite(s, "csc series")?, kq, p.m.k()))
}

/// `sn(u) = (pi/(2kK)) sum_{m=-N}^{N} csc(pi/(2K) [u - (2m-1) i K'])`.
pub fn sn_csc(p: &JefPoint, n_terms: usize) -> Result<Cplx> {
    let (s, kq, k) = csc_sum(p, n_terms, false)?;
    Ok(PI / (2.0 * k * kq) * s)
}

/// `cn(u) = (pi i/(2kK)) sum_{m=-N}^{N} (-1)^m csc(pi/(2K) [u - (2m-1) i K'])`.
pub fn cn_csc(p: &JefPoint, n_terms: usize) -> Result<Cplx> {
    let (s, kq, k) = csc_sum(p, n_terms, true)?;
    Ok(PI * I / (2.0 * k * kq) * s)
}

/// The same sum with the alternating sign dropped; used to show the sign
/// pattern matters.
#[doc(hidden)]
pub fn cn_csc_without_signs(p: &JefPoint, n_terms: usize) -> Result<Cplx> {
    let (s, kq, k) = csc_sum(p, n_terms, false)?;
    Ok(PI * I / (2.0 * k * kq) * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{nome_from_tau, tau_from_modulus};

    fn close(a: Cplx, b: Cplx, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn degenerate_moduli() {
        let j = Jacobi::real(0.0).unwrap();
        for u in [c(0.3), c(1.2), Cplx::new(2.0, 1.0)] {
            assert!(close(j.sn(u).unwrap(), u.sin(), 1e-12));
            assert!(close(j.cn(u).unwrap(), u.cos(), 1e-12));
            assert!(close(j.dn(u).unwrap(), c(1.0), 1e-12));
        }
        assert!(close(j.sc(c(0.5)).unwrap(), c(0.5f64.tan()), 1e-12));
        let h = Jacobi::real(1.0).unwrap();
        assert!(close(h.sn(c(0.7)).unwrap(), c(0.7f64.tanh()), 1e-15));
    }

    #[test]
    fn quarter_period_values() {
        for k in [0.4, 0.7] {
            let m = Modulus::real(k).unwrap();
            let j = Jacobi::new(m).unwrap();
            let kq = complete_k(&m).unwrap();
            assert!(close(j.sn(kq).unwrap(), c(1.0), 1e-11));
            assert!(close(j.dn(kq).unwrap(), m.k_prime(), 1e-11));
        }
    }

    #[test]
    fn near_one_uses_swapped_frame_consistently() {
        for k in [0.9, 0.999, 0.999_999] {
            let j = Jacobi::real(k).unwrap();
            for u in [c(0.3), Cplx::new(1.1, 0.4), c(-2.5)] {
                let (s, cc, d) = j.sncndn(u).unwrap();
                assert!((s * s + cc * cc - 1.0).norm() < 1e-12);
                assert!((d * d + k * k * s * s - 1.0).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn imaginary_argument_relation() {
        let k = 0.6;
        let j = Jacobi::real(k).unwrap();
        let jp = Jacobi::real(0.8).unwrap();
        for v in [0.1, 0.5, 1.3, -0.9] {
            let lhs = j.sn(I * v).unwrap();
            let rhs = I * jp.sc(c(v)).unwrap();
            assert!(close(lhs, rhs, 1e-10), "{v}");
        }
    }

    #[test]
    fn reciprocal_dn_half_period_relation() {
        let m = Modulus::real(0.6).unwrap();
        let j = Jacobi::new(m).unwrap();
        let kqp = complete_k_prime(&m).unwrap();
        for v in [0.2, 0.9, 1.4] {
            let lhs = 1.0 / j.dn(c(v) + I * kqp).unwrap();
            assert!(close(lhs, I * j.sc(c(v)).unwrap(), 1e-10));
        }
    }

    #[test]
    fn poles_are_refused() {
        let m = Modulus::real(0.6).unwrap();
        let j = Jacobi::new(m).unwrap();
        let kqp = complete_k_prime(&m).unwrap();
        assert!(matches!(j.sn(I * kqp), Err(Error::PoleProximity { .. })));
        assert!(matches!(j.cs(c(0.0)), Err(Error::PoleProximity { .. })));
        assert!(j.nd(c(0.0)).unwrap() == c(1.0) || close(j.nd(c(0.0)).unwrap(), c(1.0), 1e-15));
    }

    #[test]
    fn complex_and_large_moduli_satisfy_pythagoras() {
        for k in [Cplx::new(0.5, 0.5), Cplx::new(1.25, 0.0), Cplx::new(0.0, 1.5), Cplx::new(3.0, -0.2)] {
            let j = Jacobi::new(Modulus::new(k).unwrap()).unwrap();
            for u in [c(0.3), Cplx::new(0.2, 0.3)] {
                let (s, cc, d) = j.sncndn(u).unwrap();
                assert!((s * s + cc * cc - 1.0).norm() < 1e-10, "{k} {u}");
                assert!((d * d + k * k * s * s - 1.0).norm() < 1e-10, "{k} {u}");
            }
        }
    }

    #[test]
    fn fourier_matches_theta_path() {
        let m = Modulus::real(0.5).unwrap();
        let j = Jacobi::new(m).unwrap();
        let kq = complete_k(&m).unwrap();
        let nome = nome_from_tau(&tau_from_modulus(&m).unwrap());
        for f in [0.2, 0.7, 1.3] {
            let u = kq * f;
            assert!(close(sn_fourier(u, &nome).unwrap(), j.sn(u).unwrap(), 1e-10));
            assert!(close(dn_fourier(u, &nome).unwrap(), j.dn(u).unwrap(), 1e-10));
            assert!(close(nd_fourier(u, &nome).unwrap(), j.nd(u).unwrap(), 1e-10));
        }
        assert!(sn_fourier(c(0.0), &nome).unwrap().norm() < 1e-10);
        assert!(close(dn_fourier(c(0.0), &nome).unwrap(), c(1.0), 1e-10));
        assert_eq!(sn_fourier(I * 10.0, &nome), Err(Error::StripViolation));
    }

    #[test]
    fn nd_terms_split_for_half_integer_real_part() {
        // Re tau = 1/2 and real u/K: odd m terms real, even m terms imaginary,
        // once the common prefactor 2 pi/(k' K) is divided out
        let tau = Cplx::new(0.5, 0.6);
        let nome = nome_from_tau(&crate::elliptic::PeriodRatio::new(tau).unwrap());
        let d = nome_data(&nome).unwrap();
        let u = d.kq * 0.37;
        let (_, terms) = nd_fourier_terms(u, &nome, 12).unwrap();
        let pre = 2.0 * PI / (d.kp * d.kq);
        for (m, t) in terms.iter().enumerate() {
            let r = t / pre;
            if m % 2 == 1 {
                assert!(r.im.abs() <= 1e-14 * r.norm().max(1e-300), "m={m}: {r}");
            } else {
                assert!(r.re.abs() <= 1e-14 * r.norm().max(1e-300), "m={m}: {r}");
            }
        }
    }

    #[test]
    fn csc_series_matches_theta_path() {
        let m = Modulus::real(0.6).unwrap();
        let kq = complete_k(&m).unwrap();
        let p = JefPoint { u: kq * 0.4, m };
        let j = Jacobi::new(m).unwrap();
        assert!(close(sn_csc(&p, 60).unwrap(), j.sn(p.u).unwrap(), 1e-9));
        assert!(close(cn_csc(&p, 60).unwrap(), j.cn(p.u).unwrap(), 1e-9));
        assert!(!close(cn_csc_without_signs(&p, 60).unwrap(), j.cn(p.u).unwrap(), 1e-3));
        let shifted = JefPoint { u: p.u + 4.0 * kq, m };
        assert!(close(sn_csc(&shifted, 60).unwrap(), sn_csc(&p, 60).unwrap(), 1e-9));
    }

    #[test]
    fn real_amplitude_matches_theta_path() {
        for k in [0.0, 0.3, 0.6, 0.95, 0.999] {
            let ra = RealAmplitude::new(k).unwrap();
            let j = Jacobi::real(k).unwrap();
            for u in [-11.3, -2.0, 0.0, 0.7, 3.9, 25.0] {
                let (s, cc, d) = ra.sncndn(u).unwrap();
                let (s2, c2, d2) = j.sncndn(c(u)).unwrap();
                assert!((s - s2.re).abs() < 1e-13 && (cc - c2.re).abs() < 1e-13 && (d - d2.re).abs() < 1e-13, "{k} {u}");
            }
            if k > 0.0 {
                assert!((ra.k_quarter() - complete_k(&Modulus::real(k).unwrap()).unwrap().re).abs() < 1e-13);
            }
        }
        let one = RealAmplitude::new(1.0).unwrap();
        let (s, cc, d) = one.sncndn(0.8).unwrap();
        assert!((s - 0.8f64.tanh()).abs() < 1e-15 && (cc - 1.0 / 0.8f64.cosh()).abs() < 1e-15 && (d - cc).abs() < 1e-15);
        assert!(RealAmplitude::new(1.5).is_err());
    }
}
