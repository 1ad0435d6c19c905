//! Modular case table, Landen maps and the reciprocal / half-period
//! identities, each reported as a residual.

use crate::elliptic::{complete_k, complete_k_prime, modulus_from_tau, Modulus, PeriodRatio};
use crate::jacobi::Jacobi;
use crate::{c, Cplx, Error, Result, I};

/// Integer matrix `(a b; c d)` with unit determinant acting by
/// `tau -> (a tau + b)/(c tau + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sl2zElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2zElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::Domain(format!("det({a} {b}; {c} {d}) != 1")));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn apply(&self, tau: Cplx) -> Cplx {
        (tau * self.a as f64 + self.b as f64) / (tau * self.c as f64 + self.d as f64)
    }

    /// Matrix product `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// Equal as Mobius maps (matrices up to overall sign).
    pub fn same_map(&self, other: &Self) -> bool {
        let s = [self.a, self.b, self.c, self.d];
        let o = [other.a, other.b, other.c, other.d];
        s == o || s.iter().zip(&o).all(|(x, y)| *x == -*y)
    }
}

/// One of the six modular equivalence classes obtained by permuting the
/// branch points of the cubic.
///
/// | case | tau map (table)     | k~      | k~'     |
/// |------|---------------------|---------|---------|
/// | 1    | tau                 | k       | k'      |
/// | 2    | 1 - tau             | ik/k'   | 1/k'    |
/// | 3    | -tau/(1 - tau)      | 1/k     | ik'/k   |
/// | 4    | 1/tau               | k'      | k       |
/// | 5    | 1/(1 - tau)         | 1/k'    | ik/k'   |
/// | 6    | -(1 - tau)/tau      | ik'/k   | 1/k     |
///
/// The table maps of cases 2-4 reverse orientation (they send the upper
/// half plane to the lower one). [`ModularCase::element`] gives the
/// orientation-preserving representative `-M(tau)`, which is what
/// [`apply_modular_case`] uses; both induce the same `k~^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModularCase {
    case_id: u8,
}

impl ModularCase {
    pub fn new(case_id: u8) -> Result<Self> {
        if (1..=6).contains(&case_id) {
            Ok(Self { case_id })
        } else {
            Err(Error::BadCase(case_id))
        }
    }

    pub fn all() -> [ModularCase; 6] {
        [1, 2, 3, 4, 5, 6].map(|case_id| ModularCase { case_id })
    }

    pub fn id(&self) -> u8 {
        self.case_id
    }

    /// The tau map exactly as tabulated.
    pub fn table_tau_map(&self, tau: Cplx) -> Cplx {
        let one = c(1.0);
        match self.case_id {
            1 => tau,
            2 => one - tau,
            3 => -tau / (one - tau),
            4 => one / tau,
            5 => one / (one - tau),
            _ => -(one - tau) / tau,
        }
    }

    /// Orientation-preserving representative in SL(2, Z).
    pub fn element(&self) -> Sl2zElement {
        let (a, b, c, d) = match self.case_id {
            1 => (1, 0, 0, 1),
            2 => (1, -1, 0, 1),
            3 => (1, 0, -1, 1),
            4 => (0, -1, 1, 0),
            5 => (0, 1, -1, 1),
            _ => (1, -1, 1, 0),
        };
        Sl2zElement { a, b, c, d }
    }

    pub fn tau_map(&self, tau: &PeriodRatio) -> Result<PeriodRatio> {
        PeriodRatio::new(self.element().apply(tau.tau()))
    }

    pub fn modulus_map(&self, m: &Modulus) -> Result<Modulus> {
        let (k, kp) = (m.k(), m.k_prime());
        let need = |z: Cplx, name: &str| {
            if z.norm() == 0.0 {
                Err(Error::Degenerate(format!("case {} divides by {name} = 0", self.case_id)))
            } else {
                Ok(z)
            }
        };
        let (nk, nkp) = match self.case_id {
            1 => (k, kp),
            2 => {
                need(kp, "k'")?;
                (I * k / kp, 1.0 / kp)
            }
            3 => {
                need(k, "k")?;
                (1.0 / k, I * kp / k)
            }
            4 => (kp, k),
            5 => {
                need(kp, "k'")?;
                (1.0 / kp, I * k / kp)
            }
            _ => {
                need(k, "k")?;
                (I * kp / k, 1.0 / k)
            }
        };
        Modulus::from_pair(nk, nkp)
    }
}

/// Apply case `case_id` to `(tau, k, k')`.
pub fn apply_modular_case(case_id: u8, tau: &PeriodRatio, m: &Modulus) -> Result<(PeriodRatio, Modulus)> {
    let case = ModularCase::new(case_id)?;
    Ok((case.tau_map(tau)?, case.modulus_map(m)?))
}

/// Residuals `|k~^2 - k(tau~)^2|` and `|k~'^2 - k'(tau~)^2|`, where `k~, k~'`
/// come from the case table applied to the theta moduli at `tau` and
/// `k(tau~), k'(tau~)` are the theta moduli at the mapped period ratio.
/// Squares are compared because the table fixes the sign of `k~` only up to
/// the branch of the theta quotient.
pub fn theta_case_consistency(case_id: u8, tau: &PeriodRatio) -> Result<(f64, f64)> {
    let case = ModularCase::new(case_id)?;
    let m = modulus_from_tau(tau)?;
    let mapped = case.modulus_map(&m)?;
    let direct = modulus_from_tau(&case.tau_map(tau)?)?;
    Ok(((mapped.m() - direct.m()).norm(), (mapped.complement().m() - direct.complement().m()).norm()))
}

/// Descending Landen step `k1 = (1 - k')/(1 + k')`, `k1' = 2 sqrt(k')/(1 + k')`.
/// Doubles the period ratio.
pub fn landen_descend(m: &Modulus) -> Result<Modulus> {
    let kp = m.k_prime();
    if (kp + 1.0).norm() == 0.0 {
        return Err(Error::Degenerate("k' = -1".into()));
    }
    Modulus::from_pair((1.0 - kp) / (1.0 + kp), 2.0 * kp.sqrt() / (1.0 + kp))
}

/// Inverse of [`landen_descend`]: `k' = (1 - k1)/(1 + k1)`, `k = 2 sqrt(k1)/(1 + k1)`.
pub fn landen_ascend(m1: &Modulus) -> Result<Modulus> {
    let k1 = m1.k();
    if (k1 + 1.0).norm() == 0.0 {
        return Err(Error::Degenerate("k1 = -1".into()));
    }
    Modulus::from_pair(2.0 * k1.sqrt() / (1.0 + k1), (1.0 - k1) / (1.0 + k1))
}

/// `|nd(u; k) - [dn(u1; k1) - k1 cn(u1; k1)]/(1 - k1)|` with
/// `k1 = (1 - k')/(1 + k')` and `u1 = 2u/(1 + k1)`.
pub fn landen_gauss_identity(u: Cplx, m: &Modulus) -> Result<f64> {
    let m1 = landen_descend(m)?;
    let k1 = m1.k();
    let u1 = 2.0 * u / (1.0 + k1);
    let j = Jacobi::new(*m)?;
    let j1 = Jacobi::new(m1)?;
    let (_, cn1, dn1) = j1.sncndn(u1)?;
    let rhs = (dn1 - k1 * cn1) / (1.0 - k1);
    Ok((j.nd(u)? - rhs).norm())
}

/// Residuals of `sn(t/k_k; k_k) = k_b sn(t; k_b)` and
/// `cn(t/k_k; k_k) = dn(t; k_b)` with `k_k = 1/k_b`.
///
/// The `k_k > 1` side is evaluated directly (theta quotients on the
/// `k_k^2 + i0` lattice), so the check does not route through the identity
/// being tested.
pub fn reciprocal_modulus_identities(t: Cplx, m_b: &Modulus) -> Result<(f64, f64)> {
    let kb = m_b.k();
    if kb.norm() == 0.0 {
        return Err(Error::Degenerate("k_b = 0".into()));
    }
    let jb = Jacobi::new(*m_b)?;
    let jk = Jacobi::new(Modulus::new(1.0 / kb)?)?;
    reciprocal_with(t, kb, &jb, &jk)
}

/// Same as [`reciprocal_modulus_identities`] with prepared evaluators.
pub fn reciprocal_with(t: Cplx, kb: Cplx, jb: &Jacobi, jk: &Jacobi) -> Result<(f64, f64)> {
    let (sk, ck, _) = jk.sncndn(t * kb)?;
    let (sb, _, db) = jb.sncndn(t)?;
    Ok(((sk - kb * sb).norm(), (ck - db).norm()))
}

/// `|K(1/k) - k [K(k) + i K'(k)]|`, with `K(1/k)` taken on the upper lip.
pub fn reciprocal_k_identity(m: &Modulus) -> Result<f64> {
    let k = m.k();
    let inv = complete_k(&Modulus::new(1.0 / k)?)?;
    Ok((inv - k * (complete_k(m)? + I * complete_k_prime(m)?)).norm())
}

/// Residuals of `cn(u + K + iK') = (-i k'/k) nc(u)` and
/// `dn(u + K + iK') = i k' sc(u)`.
pub fn half_period_shift_identities(u: Cplx, m: &Modulus) -> Result<(f64, f64)> {
    let j = Jacobi::new(*m)?;
    let shift = complete_k(m)? + I * complete_k_prime(m)?;
    let (_, cs, ds) = j.sncndn(u + shift)?;
    let (k, kp) = (m.k(), m.k_prime());
    Ok(((cs + I * kp / k * j.nc(u)?).norm(), (ds - I * kp * j.sc(u)?).norm()))
}

/// Residuals of `dn(u1; k1) = cn(k1 u1; k_k')` and `cn(u1; k1) = dn(k1 u1; k_k')`
/// where `k1 = 1/k_k'`.
pub fn reciprocal_jef_map(u1: Cplx, m_k: &Modulus) -> Result<(f64, f64)> {
    let kkp = m_k.k_prime();
    if kkp.norm() == 0.0 {
        return Err(Error::Degenerate("k_k' = 0".into()));
    }
    let k1 = 1.0 / kkp;
    let j1 = Jacobi::new(Modulus::new(k1)?)?;
    let jr = Jacobi::new(Modulus::new(kkp)?)?;
    let (_, c1, d1) = j1.sncndn(u1)?;
    let (_, cr, dr) = jr.sncndn(k1 * u1)?;
    Ok(((d1 - cr).norm(), (c1 - dr).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::tau_from_modulus;

    #[test]
    fn case_one_is_identity() {
        let tau = PeriodRatio::new(Cplx::new(0.2, 0.9)).unwrap();
        let m = modulus_from_tau(&tau).unwrap();
        let (t, mm) = apply_modular_case(1, &tau, &m).unwrap();
        assert_eq!(t, tau);
        assert_eq!(mm, m);
        assert_eq!(apply_modular_case(7, &tau, &m), Err(Error::BadCase(7)));
    }

    #[test]
    fn case_four_at_self_dual_point() {
        let tau = PeriodRatio::new(I).unwrap();
        let m = Modulus::real(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        let (t, mm) = apply_modular_case(4, &tau, &m).unwrap();
        assert!((t.tau() - I).norm() < 1e-15);
        assert!((mm.k() - std::f64::consts::FRAC_1_SQRT_2).norm() < 1e-15);
        // the tabulated map lands in the lower half plane
        assert!((ModularCase::new(4).unwrap().table_tau_map(I) + I).norm() < 1e-15);
    }

    #[test]
    fn case_three_at_half() {
        let m = Modulus::real(0.5).unwrap();
        let mm = ModularCase::new(3).unwrap().modulus_map(&m).unwrap();
        assert!((mm.k() - 2.0).norm() < 1e-15);
        assert!((mm.k_prime() - I * (3f64.sqrt() / 2.0) / 0.5).norm() < 1e-15);
        assert!(mm.complementarity_defect() < 1e-12);
    }

    #[test]
    fn group_closure() {
        let e = |i| ModularCase::new(i).unwrap().element();
        assert!(e(4).compose(&e(2)).same_map(&e(5)));
        assert!(e(4).compose(&e(3)).same_map(&e(6)));
        for id in 1..=6 {
            let g = e(id);
            assert_eq!(g.a * g.d - g.b * g.c, 1);
        }
        let tau = Cplx::new(0.3, 0.8);
        let t = |i: u8, z| ModularCase::new(i).unwrap().table_tau_map(z);
        assert!((t(4, t(2, tau)) - t(5, tau)).norm() < 1e-14);
        assert!((t(4, t(3, tau)) - t(6, tau)).norm() < 1e-14);
    }

    #[test]
    fn landen_examples() {
        let d = landen_descend(&Modulus::real(0.0).unwrap()).unwrap();
        assert!(d.k().norm() < 1e-16);
        let d = landen_descend(&Modulus::from_pair(c(1.0), c(0.0)).unwrap()).unwrap();
        assert!((d.k() - 1.0).norm() < 1e-16);
        let m = Modulus::real(0.8).unwrap();
        let d = landen_descend(&m).unwrap();
        assert!((d.k() - 0.25).norm() < 1e-15);
        let tau = tau_from_modulus(&m).unwrap();
        let doubled = modulus_from_tau(&PeriodRatio::new(2.0 * tau.tau()).unwrap()).unwrap();
        assert!((doubled.k() - 0.25).norm() < 1e-10);
        let back = landen_ascend(&d).unwrap();
        assert!((back.k() - 0.8).norm() < 1e-12);
        assert!(landen_descend(&Modulus::from_pair(c(0.0), c(-1.0)).unwrap()).is_err());
    }

    #[test]
    fn landen_gauss_examples() {
        let m = Modulus::real(0.6).unwrap();
        assert!(landen_gauss_identity(c(0.0), &m).unwrap() < 1e-15);
        assert!(landen_gauss_identity(c(0.7), &m).unwrap() < 1e-10);
        assert!(landen_gauss_identity(Cplx::new(1.0, 0.2), &Modulus::real(0.9).unwrap()).unwrap() < 1e-9);
    }

    #[test]
    fn reciprocal_examples() {
        let (a, b) = reciprocal_modulus_identities(c(0.0), &Modulus::real(0.7).unwrap()).unwrap();
        assert!(a < 1e-15 && b < 1e-15);
        let (a, b) = reciprocal_modulus_identities(c(1.3), &Modulus::real(0.7).unwrap()).unwrap();
        assert!(a < 1e-10 && b < 1e-10, "{a} {b}");
        let (a, b) = reciprocal_modulus_identities(c(0.5), &Modulus::real(0.999).unwrap()).unwrap();
        assert!(a < 1e-9 && b < 1e-9);
        // both sides approach tanh / sech
        let jb = Jacobi::real(0.999).unwrap();
        assert!((jb.sn(c(0.5)).unwrap() - 0.5f64.tanh()).norm() < 1e-3);
    }

    #[test]
    fn reciprocal_k_examples() {
        for k in [0.5, std::f64::consts::FRAC_1_SQRT_2, 0.9] {
            assert!(reciprocal_k_identity(&Modulus::real(k).unwrap()).unwrap() < 1e-9, "{k}");
        }
    }

    #[test]
    fn half_period_examples() {
        let m = Modulus::real(0.6).unwrap();
        let (a, b) = half_period_shift_identities(c(0.4), &m).unwrap();
        assert!(a < 1e-10 && b < 1e-10);
        let (a, b) = half_period_shift_identities(Cplx::new(0.3, 0.1), &Modulus::real(0.8).unwrap()).unwrap();
        assert!(a < 1e-9 && b < 1e-9);
        let j = Jacobi::new(m).unwrap();
        let v = j.cn(complete_k(&m).unwrap() + I * complete_k_prime(&m).unwrap()).unwrap();
        assert!((v + I * 0.8 / 0.6).norm() < 1e-10);
    }

    #[test]
    fn reciprocal_jef_examples() {
        let m = Modulus::real(0.6).unwrap();
        let (a, b) = reciprocal_jef_map(c(0.0), &m).unwrap();
        assert!(a < 1e-15 && b < 1e-15);
        for u in [c(0.5), Cplx::new(0.3, 0.2)] {
            let (a, b) = reciprocal_jef_map(u, &m).unwrap();
            assert!(a < 1e-9 && b < 1e-9, "{u}: {a} {b}");
        }
    }

    #[test]
    fn theta_moduli_follow_the_case_table() {
        for tau in [Cplx::new(0.3, 0.9), Cplx::new(-0.4, 0.6), Cplx::new(0.1, 1.7)] {
            let tau = PeriodRatio::new(tau).unwrap();
            for id in 1..=6 {
                let (a, b) = theta_case_consistency(id, &tau).unwrap();
                assert!(a < 1e-9 && b < 1e-9, "case {id}: {a} {b}");
            }
        }
    }
}
