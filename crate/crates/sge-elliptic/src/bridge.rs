//! Parameter maps between the direct (Jacobi) solutions and their theta
//! representations, the kink/breather modular chain, period integrals with
//! quadrature oracles, and the end-to-end equivalence checks.
//!
//! Everything here reports residuals. Thresholds belong to the caller.

use std::f64::consts::PI;

use crate::elliptic::{complete_k, complete_k_param, complete_k_prime, nome_from_tau, tau_from_modulus, Modulus, PeriodRatio};
use crate::jacobi::Jacobi;
use crate::quad::tanh_sinh;
use crate::solutions::{BreatherDirect, BreatherSpectrum, Energy, KinkDirect, KinkSpectrum, SolutionKind, SolutionParams, ThetaRep};
use crate::theta::{reduced, ThetaArgs};
use crate::transforms::landen_ascend;
use crate::{c, Cplx, Error, Result, I};

/// Sign applied to the theta-side `sqrt(k')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqrtBranch {
    Plus,
    Minus,
}

impl SqrtBranch {
    pub fn sign(self) -> f64 {
        match self {
            SqrtBranch::Plus => 1.0,
            SqrtBranch::Minus => -1.0,
        }
    }

    pub fn other(self) -> Self {
        match self {
            SqrtBranch::Plus => SqrtBranch::Minus,
            SqrtBranch::Minus => SqrtBranch::Plus,
        }
    }
}

/// `(theta2(0)/theta3(0), theta4(0)/theta3(0), (pi/2) theta3(0)^2)` at `b`,
/// i.e. `sqrt(k)`, `sqrt(k')` and `K` in the frame of `b`.
fn theta_constants(b: Cplx) -> Result<(Cplx, Cplx, Cplx)> {
    let r = reduced(&ThetaArgs::new(c(0.0), b)?)?;
    let t3 = r.value(3)?;
    Ok((r.ratio(2, 3), r.ratio(4, 3), 0.5 * PI * t3 * t3))
}

/// Breather side of the bridge.
///
/// Direct side `k_b`; theta side built on `tau1 = (1 + tau_b)/2`. The
/// solution itself uses `B = tau1 - 1`, where `t0 = K_b` and `4 i a = 1/K_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreatherBridge {
    pub k_b: f64,
    pub k_quarter_b: f64,
    pub k_quarter_b_prime: f64,
    pub tau_b: Cplx,
    pub q_b: Cplx,
    pub tau_1: Cplx,
    pub k1: Cplx,
    pub k1_prime: Cplx,
    /// `sqrt(k1')` with the requested branch applied
    pub sqrt_k1_prime: Cplx,
    pub k_quarter_1: Cplx,
    /// `tau~` from the ascending Landen step of `k_b`
    pub tau_tilde: Cplx,
    pub q_tilde: Cplx,
    pub b: Cplx,
    pub a: Cplx,
    pub t0: f64,
    pub branch: SqrtBranch,
    /// `|q_b - q~^2|`
    pub nome_residual: f64,
    /// `|q~ - (-i q1)|`, theta-side nome against the Landen one
    pub theta_nome_residual: f64,
    /// `|tau_b - 2 tau~|`
    pub tau_doubling_residual: f64,
    /// `|theta4/theta3(0; B) - w_direct(0)|`, which pins `t0 = K_b`
    pub t0_residual: f64,
    /// `|K_b - sqrt(k1') K1|`
    pub quarter_period_residual: f64,
    /// `|4 i a - 1/(sqrt(k1') K1)|`
    pub a_residual: f64,
    /// `2 sqrt(k')/(1 + k')` on the kink route with `k_k = 1/k_b` (not equal
    /// to `k_b`; see [`BreatherBridge::landen_claim_residual`])
    pub landen_claim_value: Option<Cplx>,
}

impl BreatherBridge {
    /// `|2 sqrt(k')/(1 + k') - k_b|`. Reported, never asserted.
    pub fn landen_claim_residual(&self) -> Option<f64> {
        self.landen_claim_value.map(|v| (v - self.k_b).norm())
    }

    /// Largest of the relations that must hold for a valid bridge.
    pub fn max_relation_residual(&self) -> f64 {
        self.nome_residual.max(self.t0_residual).max(self.quarter_period_residual).max(self.a_residual)
    }

    pub fn solution_params(&self) -> Result<SolutionParams> {
        SolutionParams::theta(SolutionKind::ThetaBreather, self.b, c(0.0), self.a, self.t0)
    }
}

fn breather_bridge_unchecked(k_b: f64, branch: SqrtBranch) -> Result<BreatherBridge> {
    if !(k_b > 0.0 && k_b < 1.0) {
        return Err(Error::Domain(format!("breather bridge needs 0 < k_b < 1, got {k_b}")));
    }
    let mb = Modulus::real(k_b)?;
    let kq = complete_k(&mb)?.re;
    let kqp = complete_k_prime(&mb)?.re;
    let tau_b = I * kqp / kq;
    let q_b = (-PI * kqp / kq).exp();
    let tau_1 = 0.5 * (1.0 + tau_b);
    let (s1, sp1, k1q) = theta_constants(tau_1)?;
    let sqrt_k1p = branch.sign() * sp1;

    let tilde = tau_from_modulus(&landen_ascend(&mb)?)?.tau();
    let q_tilde = (I * PI * tilde).exp();
    let q_1 = nome_from_tau(&PeriodRatio::new(tau_1)?).q;

    let b = tau_1 - 1.0;
    let a = 1.0 / (4.0 * I * kq);
    let t0 = kq;
    let (_, sp_b, _) = theta_constants(b)?;
    let direct = BreatherDirect::new(Energy::new(2.0 * k_b * k_b)?)?;
    let w0 = Cplx::new(direct.jacobi().dn(c(-t0))?.re, -k_b * direct.jacobi().sn(c(-t0))?.re);

    let landen_claim_value = (|| -> Result<Cplx> {
        let (_, sp, _) = theta_constants(kink_tau_from(&Modulus::real(1.0 / k_b)?)?)?;
        let kp = sp * sp;
        Ok(2.0 * sp / (1.0 + kp))
    })()
    .ok();

    Ok(BreatherBridge {
        k_b,
        k_quarter_b: kq,
        k_quarter_b_prime: kqp,
        tau_b,
        q_b: c(q_b),
        tau_1,
        k1: s1 * s1,
        k1_prime: sp1 * sp1,
        sqrt_k1_prime: sqrt_k1p,
        k_quarter_1: k1q,
        tau_tilde: tilde,
        q_tilde,
        b,
        a,
        t0,
        branch,
        nome_residual: (q_b - q_tilde * q_tilde).norm(),
        theta_nome_residual: (q_tilde + I * q_1).norm(),
        tau_doubling_residual: (tau_b - 2.0 * tilde).norm(),
        t0_residual: (sp_b - w0).norm(),
        quarter_period_residual: (kq - sqrt_k1p * k1q).norm(),
        a_residual: (4.0 * I * a - 1.0 / (sqrt_k1p * k1q)).norm(),
        landen_claim_value,
    })
}

/// Breather bridge for real `0 < k_b < 1` with the given branch of `sqrt(k1')`.
///
/// Fails with [`Error::BranchInconsistent`] only if neither branch satisfies
/// `K_b = sqrt(k1') K1`; a wrong branch choice is visible in the residuals.
pub fn breather_bridge(k_b: f64, branch: SqrtBranch) -> Result<BreatherBridge> {
    let out = breather_bridge_unchecked(k_b, branch)?;
    let tol = 1e-9 * out.k_quarter_b.max(1.0);
    if out.quarter_period_residual > tol {
        let alt = breather_bridge_unchecked(k_b, branch.other())?;
        if alt.quarter_period_residual > tol {
            return Err(Error::BranchInconsistent(format!(
                "K_b = sqrt(k1') K1 fails on both branches ({:e}, {:e})",
                out.quarter_period_residual, alt.quarter_period_residual
            )));
        }
    }
    Ok(out)
}

/// `tau = -1/(2(tau_k - 1))` for the kink modulus `m_k`.
fn kink_tau_from(m_k: &Modulus) -> Result<Cplx> {
    let tau_k = tau_from_modulus(m_k)?.tau();
    Ok(-1.0 / (2.0 * (tau_k - 1.0)))
}

/// Kink side of the bridge for real `0 < k_k < 1`.
///
/// The theta side has `tau = -1/(2(tau_k - 1))`, whose complementary modulus
/// is the negative number `k' = (k_k' - 1)/(k_k' + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkBridge {
    pub k_k: f64,
    pub k_k_prime: f64,
    pub k_quarter_k: f64,
    pub k_quarter_k_prime: f64,
    pub tau_k: Cplx,
    /// `k'` from the closed form
    pub k_prime: f64,
    /// `k = sqrt(1 - k'^2)`, real
    pub k: f64,
    pub tau: Cplx,
    /// `theta4(0)/theta3(0)` at `tau`, the branch `-i sqrt|k'|`
    pub sqrt_k_prime_theta: Cplx,
    /// principal `sqrt(k') = i sqrt|k'|`
    pub sqrt_k_prime_principal: Cplx,
    /// `(pi/2) theta3(0; tau)^2 = K(k) + 2 i K(k')`
    pub k_quarter_theta: Cplx,
    /// `a = 1/(4 i sqrt(k') K)` with the principal root
    pub a: Cplx,
    /// `|theta-side k' - (k_k' - 1)/(k_k' + 1)|`
    pub k_prime_residual: f64,
    /// `|tau - tau0/(1 + 2 tau0)|`, `tau0 = i K(k')/K(k)`
    pub tau_residual: f64,
    /// `|K(k') - (1 + k_k')/2 K(k_k)|`
    pub quarter_period_residual: f64,
}

impl KinkBridge {
    pub fn max_relation_residual(&self) -> f64 {
        self.k_prime_residual.max(self.tau_residual).max(self.quarter_period_residual)
    }

    /// Theta parameters `B = tau`, `l0 = 1/4`, `a`, `t0 = 0`.
    pub fn solution_params(&self) -> Result<SolutionParams> {
        SolutionParams::theta(SolutionKind::ThetaKink, self.tau, c(0.25), self.a, 0.0)
    }
}

pub fn kink_bridge(k_k: f64) -> Result<KinkBridge> {
    if k_k >= 1.0 {
        return Err(Error::Degenerate(format!("k_k = {k_k} >= 1 is the separatrix (k' = -1), no bridge")));
    }
    if !(k_k > 0.0) {
        return Err(Error::Domain(format!("kink bridge needs 0 < k_k < 1, got {k_k}")));
    }
    let mk = Modulus::real(k_k)?;
    let kkp = mk.k_prime().re;
    let kq = complete_k(&mk)?.re;
    let kqp = complete_k_prime(&mk)?.re;
    let tau_k = I * kqp / kq;
    let tau = -1.0 / (2.0 * (tau_k - 1.0));
    let (_, sp, k_theta) = theta_constants(tau)?;

    let kp = (kkp - 1.0) / (kkp + 1.0);
    let k = (1.0 - kp * kp).sqrt();
    let kr = Modulus::from_pair(c(k), c(kp))?;
    let k_r = complete_k(&kr)?.re;
    let k_rp = complete_k_prime(&kr)?.re;
    let tau0 = I * k_rp / k_r;
    let sqrt_p = c(kp).sqrt();

    Ok(KinkBridge {
        k_k,
        k_k_prime: kkp,
        k_quarter_k: kq,
        k_quarter_k_prime: kqp,
        tau_k,
        k_prime: kp,
        k,
        tau,
        sqrt_k_prime_theta: sp,
        sqrt_k_prime_principal: sqrt_p,
        k_quarter_theta: k_theta,
        a: 1.0 / (4.0 * I * sqrt_p * k_theta),
        k_prime_residual: (sp * sp - kp).norm(),
        tau_residual: (tau - tau0 / (1.0 + 2.0 * tau0)).norm(),
        quarter_period_residual: (k_rp - 0.5 * (1.0 + kkp) * kq).abs(),
    })
}

/// Residuals of the two kink coefficient relations
/// `2 sqrt(k') K(k') = i k_k K(k_k)` (principal root) and the value of `a`
/// solved from `1/(2 K_k k_k) = -K a/K'`, compared with `1/(4 i sqrt(k') K)`.
pub fn kink_coefficient_relations(k_k: f64) -> Result<(f64, f64)> {
    let br = kink_bridge(k_k)?;
    let kr = Modulus::from_pair(c(br.k), c(br.k_prime))?;
    let k_rp = complete_k_prime(&kr)?;
    let r1 = (2.0 * br.sqrt_k_prime_principal * k_rp - I * k_k * br.k_quarter_k).norm();
    let kq_prime_theta = -I * br.tau * br.k_quarter_theta;
    let a = -kq_prime_theta / (2.0 * br.k_quarter_k * k_k * br.k_quarter_theta);
    Ok((r1, (a - br.a).norm()))
}

/// Result of the breather equivalence check on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreatherEquivalence {
    /// `max |w_direct - theta4/theta3|`
    pub max_residual: f64,
    /// `max |w_direct - sqrt(k') nd(2K l; k)|` in the frame of `B`
    pub nd_residual: f64,
    /// same comparison with the alternative normalization `2 K1 a = 1/(2 sqrt(k1'))`
    pub alt_normalization_residual: f64,
}

/// Direct breather vs theta representation, compared on `w` (the argument of
/// `2i ln`) over `t_grid`.
pub fn verify_equivalence_breather(e: Energy, t_grid: &[f64]) -> Result<BreatherEquivalence> {
    if !(e.h < 2.0) {
        return Err(Error::EnergyRange(format!("breather equivalence needs 0 < H < 2, got {}", e.h)));
    }
    let direct = BreatherDirect::new(e)?;
    let br = breather_bridge(direct.kb, SqrtBranch::Plus)?;
    let rep = ThetaRep::new(&br.solution_params()?)?;
    let a_alt = 1.0 / (4.0 * br.k_quarter_1 * br.sqrt_k1_prime);
    let mut out = BreatherEquivalence { max_residual: 0.0, nd_residual: 0.0, alt_normalization_residual: 0.0 };
    for &t in t_grid {
        let wd = direct.w(t, br.t0)?;
        let v = rep.eval(t)?;
        let alt = crate::theta::theta43_ratio(&ThetaArgs::new(I * a_alt * t, br.b)?)?;
        out.max_residual = out.max_residual.max((wd - v.w_theta).norm());
        out.nd_residual = out.nd_residual.max((wd - v.w_nd).norm());
        out.alt_normalization_residual = out.alt_normalization_residual.max((wd - alt).norm());
    }
    Ok(out)
}

/// Result of the kink equivalence check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkEquivalence {
    /// `|i (k_k'/k_k)(1 - k1) - sqrt(k')|`, `sqrt(k') = theta4/theta3(0)`
    pub relation1: f64,
    /// `|(1 + k1)/2 K(k1) - K/2|` with `K(k1)` on the upper lip
    pub relation2: f64,
    /// `|K(k1) - (K(k_k') + i K(k_k))/k1|`
    pub reciprocal_k: f64,
    /// `|-i (1 + k1)/(2 k1 k_k) - 1/(2 sqrt(k'))|` as printed
    pub relation3_printed: f64,
    /// same with the opposite sign on the right-hand side
    pub relation3: f64,
    /// `max |w_direct - sqrt(k') nd(K/2 - t/(2 sqrt(k')); k)|`
    pub max_residual: f64,
    /// `max |w_direct - theta4/theta3(1/4 + i a t)|`
    pub theta_residual: f64,
    /// `max |w_direct - sqrt(k') nd(t/(2 sqrt(k')) + K/2; k)|`
    pub printed_form_residual: f64,
}

impl KinkEquivalence {
    /// Coefficient relations that hold (relation 3 with corrected sign).
    pub fn max_relation_residual(&self) -> f64 {
        self.relation1.max(self.relation2).max(self.reciprocal_k).max(self.relation3)
    }
}

/// Direct kink vs theta representation: the three coefficient relations and
/// the function values on `t_grid`.
pub fn verify_equivalence_kink(e: Energy, t_grid: &[f64]) -> Result<KinkEquivalence> {
    if !(e.h > 2.0) {
        return Err(Error::EnergyRange(format!("kink equivalence needs H > 2, got {}", e.h)));
    }
    let direct = KinkDirect::new(e)?;
    let br = kink_bridge(direct.kk)?;
    let (kk, kkp) = (br.k_k, br.k_k_prime);
    let k1 = 1.0 / kkp;
    let sq = br.sqrt_k_prime_theta;
    let big_k = br.k_quarter_theta;

    let relation1 = (I * (kkp / kk) * (1.0 - k1) - sq).norm();
    let k_k1 = complete_k(&Modulus::real(k1)?)?;
    let reciprocal_k = (k_k1 - (br.k_quarter_k_prime + I * br.k_quarter_k) / k1).norm();
    let relation2 = (0.5 * (1.0 + k1) * k_k1 - 0.5 * big_k).norm();
    let lhs3 = -I * (1.0 + k1) / (2.0 * k1 * kk);
    let relation3_printed = (lhs3 - 1.0 / (2.0 * sq)).norm();
    let relation3 = (lhs3 + 1.0 / (2.0 * sq)).norm();
    if relation1 > 1e-6 && (I * (kkp / kk) * (1.0 - k1) + sq).norm() > 1e-6 {
        return Err(Error::BranchInconsistent("no branch of sqrt(k') satisfies the outer coefficient".into()));
    }

    let jac = Jacobi::new(Modulus::from_pair(c(br.k), c(br.k_prime))?)?;
    let rep = ThetaRep::new(&br.solution_params()?)?;
    let mut out = KinkEquivalence {
        relation1,
        relation2,
        reciprocal_k,
        relation3_printed,
        relation3,
        max_residual: 0.0,
        theta_residual: 0.0,
        printed_form_residual: 0.0,
    };
    for &t in t_grid {
        let wd = direct.w(t, 0.0)?;
        let shift = t / (2.0 * sq);
        let corrected = sq * jac.nd(0.5 * big_k - shift)?;
        out.max_residual = out.max_residual.max((wd - corrected).norm());
        out.theta_residual = out.theta_residual.max((wd - rep.w_theta(t)?).norm());
        // the printed form can land on a pole; an error there is an O(1) miss
        let printed = jac.nd(0.5 * big_k + shift).map(|v| (wd - sq * v).norm()).unwrap_or(f64::INFINITY);
        out.printed_form_residual = out.printed_form_residual.max(printed);
    }
    Ok(out)
}

/// Kink period integral with its quadrature oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkPeriod {
    /// `-4/sqrt(-E1) K(sqrt(lambda_k))`
    pub closed_form: Cplx,
    /// `-2 int_{E1}^{E2} dE/sqrt(E (E - E1)(E - E2))` by quadrature
    pub quadrature: Cplx,
    pub lambda_k: f64,
    /// `sqrt(1 - lambda_k)`, which equals `e^{-eta}`
    pub k_k_prime: f64,
    pub relative_error: f64,
}

/// Closed form vs quadrature after `E = E1 + (E2 - E1) s^2`, which removes
/// the singularity at `E1`; the one at `E2` is left to tanh-sinh.
pub fn period_integral_kink(s: &KinkSpectrum) -> Result<KinkPeriod> {
    let (e1, e2) = (s.e1, s.e2);
    if !(e1 < e2) {
        return Err(Error::Degenerate("kink period needs E1 < E2".into()));
    }
    let lambda_k = (e2 - e1) / (-e1);
    let closed_form = -4.0 / (-e1).sqrt() * complete_k_param(c(lambda_k))?;
    let integral = tanh_sinh(
        |sv, _, one_minus| {
            let e = e1 + (e2 - e1) * sv * sv;
            c(2.0 / (-e * one_minus * (1.0 + sv)).sqrt())
        },
        0.0,
        1.0,
        1e-13,
    )?;
    let quadrature = -2.0 * integral;
    Ok(KinkPeriod {
        closed_form,
        quadrature,
        lambda_k,
        k_k_prime: (1.0 - lambda_k).sqrt(),
        relative_error: (closed_form - quadrature).norm() / closed_form.norm(),
    })
}

/// Breather period integral with its contour oracle and the intermediate
/// quantities of the Mobius reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreatherPeriod {
    /// `-4/sqrt|E1| K(cos(phi/2))`
    pub closed_form: Cplx,
    /// `-4 Re int_{x_c}^{E1} dE/sqrt(E (E - E1)(E - E2))` on a straight segment
    pub contour: Cplx,
    /// start of the segment on the negative real axis
    pub contour_start: f64,
    pub relative_error: f64,
    /// `(1 + sqrt(lambda))/(1 - sqrt(lambda))` with `sqrt(lambda) = e^{i phi}`
    pub k3: Cplx,
    /// `|k3 - i cot(phi/2)|`
    pub k3_residual: f64,
    /// `h = sin(phi/2)`, `h^2 = 1/(1 - k3^2)`
    pub h: f64,
    pub h_prime: f64,
    /// `|h^2 - 1/(1 - k3^2)|`
    pub h_residual: f64,
    /// `lambda_b = conj(E1)/E1`
    pub lambda_b: Cplx,
    /// `|lambda_b - e^{2 i phi}|`
    pub lambda_residual: f64,
}

pub fn period_integral_breather(s: &BreatherSpectrum) -> Result<BreatherPeriod> {
    let phi = s.phi;
    if !(phi > PI && phi < 2.0 * PI) {
        return Err(Error::Domain(format!("breather period needs pi < phi < 2 pi, got {phi}")));
    }
    let (e1, e2) = (s.e1, s.e2);
    let r1 = e1.norm();
    let h_prime = (0.5 * phi).cos();
    let h = (0.5 * phi).sin();
    let closed_form = -4.0 / r1.sqrt() * complete_k_param(c(h_prime * h_prime))?;

    let xc = e1.re.min(-0.5 * r1);
    let d = e1 - xc;
    let integral = tanh_sinh(
        |sv, _, one_minus| {
            let e = xc + sv * d;
            // E - E1 = -d (1 - s), exact near the endpoint
            d / (e * (-d * one_minus) * (e - e2)).sqrt()
        },
        0.0,
        1.0,
        1e-13,
    )?;
    let contour = c(-4.0 * integral.re);

    let sqrt_lambda = (I * phi).exp();
    let k3 = (1.0 + sqrt_lambda) / (1.0 - sqrt_lambda);
    let cot = (0.5 * phi).cos() / (0.5 * phi).sin();
    let lambda_b = e2 / e1;
    Ok(BreatherPeriod {
        closed_form,
        contour,
        contour_start: xc,
        relative_error: (closed_form - contour).norm() / closed_form.norm(),
        k3,
        k3_residual: (k3 - I * cot).norm(),
        h,
        h_prime,
        h_residual: (h * h - 1.0 / (1.0 - k3 * k3)).norm(),
        lambda_b,
        lambda_residual: (lambda_b - (2.0 * I * phi).exp()).norm(),
    })
}

/// Input of the kink/breather modular chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChainInput {
    /// breather phase `pi < phi < 2 pi`
    Breather { phi: f64 },
    /// kink gap `eta > 0`, continued as `phi = pi + i eta`
    Kink { eta: f64 },
}

/// Every quantity of the chain `tau_b -> tau2 = 1 + tau_b -> tau1 = tau2/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularChain {
    pub input: ChainInput,
    pub phi: Cplx,
    pub energy: f64,
    pub s_b: Cplx,
    pub s_b_prime: Cplx,
    pub tau_b: Cplx,
    pub tau_2: Cplx,
    pub tau_1: Cplx,
    /// `tau3 = tau_b + 1`
    pub tau_3: Cplx,
    /// kink input: `i K(e^{-eta})/K(sqrt(1 - e^{-2 eta}))`; breather input: `tau1`
    pub tau_k: Cplx,
    pub s_2: Cplx,
    pub s_2_prime: Cplx,
    pub s_1_prime: Cplx,
    pub k3: Cplx,
    pub h: Cplx,
    pub h_prime: Cplx,
    /// `e^{2 i phi}`
    pub lambda_b: Cplx,
    /// `(E2 - E1)/(-E1) = 1 - e^{-2 eta}` for kinks, `s_b^2` for breathers
    pub lambda_k: Cplx,
    /// `|s1' - (1 - s2)/(1 + s2)|` against `-e^{i phi}`
    pub s1_prime_residual: f64,
    /// `|s2^2 + s2'^2 - 1|`
    pub s2_residual: f64,
    /// `|tau1 - tau_k|` (kink input only, else 0)
    pub tau_k_residual: f64,
    /// `|s1' - e^{-eta}|` (kink input only, else 0)
    pub continuation_residual: f64,
    /// `|sqrt(2/H) - 1/cosh(eta/2)|` (kink), `|sqrt(H/2) - s_b'|` (breather)
    pub route_residual: f64,
    /// theta-side `k'(tau1)^2`; equals `s1'^2` under continuation and `s1'^-2` for real phi
    pub theta_k_prime_sq: Cplx,
}

pub fn kink_breather_chain(input: ChainInput) -> Result<ModularChain> {
    let (phi, energy) = match input {
        ChainInput::Breather { phi } => {
            if !(phi > PI && phi < 2.0 * PI) {
                return Err(Error::Domain(format!("breather chain needs pi < phi < 2 pi, got {phi}")));
            }
            (c(phi), 1.0 - phi.cos())
        }
        ChainInput::Kink { eta } => {
            if !(eta > 0.0) || !eta.is_finite() {
                return Err(Error::Domain(format!("kink chain needs eta > 0, got {eta}")));
            }
            (Cplx::new(PI, eta), 1.0 + eta.cosh())
        }
    };
    let half = 0.5 * phi;
    let s_b = half.cos();
    let s_b_prime = half.sin();
    let tau_b = I * complete_k_param(s_b_prime * s_b_prime)? / complete_k_param(s_b * s_b)?;
    let tau_2 = 1.0 + tau_b;
    let tau_1 = 0.5 * tau_2;
    let s_2 = I * s_b / s_b_prime;
    let s_2_prime = 1.0 / s_b_prime;
    let s_1_prime = (1.0 - s_2) / (1.0 + s_2);
    let sqrt_lambda = (I * phi).exp();
    let k3 = (1.0 + sqrt_lambda) / (1.0 - sqrt_lambda);
    let (_, sp1, _) = theta_constants(tau_1)?;

    let (tau_k, lambda_k, tau_k_residual, continuation_residual, route_residual) = match input {
        ChainInput::Kink { eta } => {
            let kp = (-eta).exp();
            let lam = 1.0 - kp * kp;
            let tk = I * complete_k_param(c(kp * kp))? / complete_k_param(c(lam))?;
            (
                tk,
                c(lam),
                (tau_1 - tk).norm(),
                (s_1_prime - kp).norm(),
                ((2.0 / energy).sqrt() - 1.0 / (0.5 * eta).cosh()).abs(),
            )
        }
        ChainInput::Breather { .. } => (tau_1, s_b * s_b, 0.0, 0.0, (c((energy / 2.0).sqrt()) - s_b_prime).norm()),
    };

    Ok(ModularChain {
        input,
        phi,
        energy,
        s_b,
        s_b_prime,
        tau_b,
        tau_2,
        tau_1,
        tau_3: tau_b + 1.0,
        tau_k,
        s_2,
        s_2_prime,
        s_1_prime,
        k3,
        h: s_b_prime,
        h_prime: s_b,
        lambda_b: (2.0 * I * phi).exp(),
        lambda_k,
        s1_prime_residual: (s_1_prime + sqrt_lambda).norm(),
        s2_residual: (s_2 * s_2 + s_2_prime * s_2_prime - 1.0).norm(),
        tau_k_residual,
        continuation_residual,
        route_residual,
        theta_k_prime_sq: sp1.powi(4),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::uniform_grid;

    #[test]
    fn breather_bridge_relations() {
        for kb in [0.05, 0.3, std::f64::consts::FRAC_1_SQRT_2, 0.9, 0.97] {
            let b = breather_bridge(kb, SqrtBranch::Plus).unwrap();
            assert!(b.nome_residual < 1e-10, "{kb} {b:?}");
            assert!(b.theta_nome_residual < 1e-10, "{kb} {b:?}");
            assert!(b.tau_doubling_residual < 1e-10, "{kb} {b:?}");
            assert!(b.t0_residual < 1e-9, "{kb} {b:?}");
            assert!(b.quarter_period_residual < 1e-9, "{kb} {b:?}");
            assert!(b.a_residual < 1e-9, "{kb} {b:?}");
        }
    }

    #[test]
    fn breather_bridge_wrong_branch_shows_in_residual() {
        let b = breather_bridge(0.6, SqrtBranch::Minus).unwrap();
        assert!(b.quarter_period_residual > 1.0);
    }

    #[test]
    fn landen_claim_value_is_reciprocal_complement() {
        let b = breather_bridge(0.9, SqrtBranch::Plus).unwrap();
        let v = b.landen_claim_value.unwrap();
        assert!((v - 1.0 / (1.0 - 0.81f64).sqrt()).norm() < 1e-9, "{v}");
        assert!(b.landen_claim_residual().unwrap() > 1.0);
    }

    #[test]
    fn kink_bridge_relations() {
        let b = kink_bridge(0.6).unwrap();
        assert!((b.k_prime + 1.0 / 9.0).abs() < 1e-15);
        for kk in [0.1, 0.6, 0.8, 0.99] {
            let b = kink_bridge(kk).unwrap();
            assert!(b.max_relation_residual() < 1e-9, "{kk} {b:?}");
            assert!((b.sqrt_k_prime_theta + b.sqrt_k_prime_principal).norm() < 1e-9);
        }
        assert!(matches!(kink_bridge(1.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn kink_coefficients() {
        for kk in [0.6, 0.9] {
            let (r1, r2) = kink_coefficient_relations(kk).unwrap();
            assert!(r1 < 1e-9 && r2 < 1e-9, "{kk}: {r1} {r2}");
        }
    }

    #[test]
    fn breather_equivalence() {
        let grid = uniform_grid(-4.0, 4.0, 0.1).unwrap();
        for h in [0.2, 1.0, 1.8] {
            let r = verify_equivalence_breather(Energy::new(h).unwrap(), &grid).unwrap();
            assert!(r.max_residual < 1e-8 && r.nd_residual < 1e-8, "{h} {r:?}");
            assert!(r.alt_normalization_residual > 1e-3);
        }
    }

    #[test]
    fn kink_equivalence() {
        let grid = uniform_grid(-3.0, 3.0, 0.1).unwrap();
        for h in [2.5, 4.0, 10.0] {
            let r = verify_equivalence_kink(Energy::new(h).unwrap(), &grid).unwrap();
            assert!(r.max_relation_residual() < 1e-9, "{h} {r:?}");
            assert!(r.max_residual < 1e-8 && r.theta_residual < 1e-8, "{h} {r:?}");
            assert!(r.relation3_printed > 1e-3 && r.printed_form_residual > 1e-3, "{h} {r:?}");
        }
    }

    #[test]
    fn kink_periods() {
        for eta in [0.5, 1.0, 2.0] {
            let p = period_integral_kink(&KinkSpectrum::new(eta).unwrap()).unwrap();
            assert!(p.relative_error < 1e-7, "{eta} {p:?}");
            assert!((p.k_k_prime - (-eta).exp()).abs() < 1e-14);
        }
        let p = period_integral_kink(&KinkSpectrum::new(1e-3).unwrap()).unwrap();
        assert!((p.closed_form.re + 8.0 * PI).abs() < 1e-2);
    }

    #[test]
    fn breather_periods() {
        for f in [1.1, 1.5, 1.9] {
            let p = period_integral_breather(&BreatherSpectrum::new(f * PI).unwrap()).unwrap();
            assert!(p.relative_error < 1e-6, "{f} {p:?}");
            assert!(p.k3_residual < 1e-12 && p.h_residual < 1e-12 && p.lambda_residual < 1e-15);
        }
    }

    #[test]
    fn chain_breather() {
        let ch = kink_breather_chain(ChainInput::Breather { phi: 1.5 * PI }).unwrap();
        assert!((ch.s_1_prime - I).norm() < 1e-12);
        assert!(ch.s1_prime_residual < 1e-12 && ch.s2_residual < 1e-12 && ch.route_residual < 1e-14, "{ch:?}");
        assert!((ch.theta_k_prime_sq * ch.s_1_prime.powi(2) - 1.0).norm() < 1e-9);
    }

    #[test]
    fn chain_kink() {
        for eta in [0.5, 1.0, 2.0] {
            let ch = kink_breather_chain(ChainInput::Kink { eta }).unwrap();
            assert!(ch.continuation_residual < 1e-10, "{ch:?}");
            assert!(ch.route_residual < 1e-14);
            assert!(ch.tau_k_residual < 1e-9, "{ch:?}");
            assert!((ch.theta_k_prime_sq - ch.s_1_prime.powi(2)).norm() < 1e-9, "{ch:?}");
        }
    }
}
