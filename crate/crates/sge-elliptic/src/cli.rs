//! Command-line front end: `sge-elliptic <eval|verify|bridge|spectrum>`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bridge::{
    breather_bridge, kink_breather_chain, kink_bridge, kink_coefficient_relations, period_integral_breather,
    period_integral_kink, verify_equivalence_breather, verify_equivalence_kink, ChainInput, SqrtBranch,
};
use crate::elliptic::{modulus_from_tau, tau_from_modulus, Modulus, PeriodRatio};
use crate::format::{csv, table};
use crate::solutions::{
    breather_train, kink_train, q_from_w_grid, separatrix, separatrix_w, sge_residual, train_theta_product,
    train_theta_series, uniform_grid, BreatherDirect, BreatherSpectrum, Energy, KinkDirect, KinkSpectrum, ThetaRep,
    TrainParams,
};
use crate::transforms::{
    half_period_shift_identities, landen_ascend, landen_descend, landen_gauss_identity, reciprocal_jef_map,
    reciprocal_k_identity, reciprocal_modulus_identities, theta_case_consistency, ModularCase,
};
use crate::{c, Cplx, Error, Result};

const EXIT_OK: i32 = 0;
const EXIT_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "sge-elliptic", version, about = "N=1 sine-Gordon solutions and their elliptic/theta transformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a solution on a time grid and write CSV `t,q,re_w,im_w`
    Eval(EvalArgs),
    /// Run a verification suite and print one PASS/FAIL line per check
    Verify(VerifyArgs),
    /// Print the direct/theta parameter bridge for an energy
    Bridge(BridgeArgs),
    /// Print branch points, energy and period data
    Spectrum(SpectrumArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Breather,
    Kink,
    Separatrix,
    Antikink,
    /// Theta form of the breather; its time origin is the direct one shifted by K(k_b)
    ThetaBreather,
    /// Theta form of the kink; same time origin as the direct kink
    ThetaKink,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Energy H
    #[arg(long = "H")]
    h: Option<f64>,
    /// Velocity for separatrix kinds
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    v: f64,
    /// Position for separatrix kinds
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    x0: f64,
    /// Time offset of direct solutions
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t0: f64,
    /// Grid `min:max:step`, endpoints inclusive
    #[arg(long, default_value = "-5:5:0.1", allow_hyphen_values = true)]
    t: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Landen,
    ModularCases,
    Reciprocal,
    BridgeBreather,
    BridgeKink,
    Periods,
    Trains,
    Residual,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Modulus used by the landen, reciprocal and bridge suites
    #[arg(long)]
    k: Option<f64>,
    /// Energy for the bridge suites (overrides --k)
    #[arg(long = "H")]
    h: Option<f64>,
    /// Replace every tolerance
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BridgeArgs {
    #[arg(long = "H")]
    h: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long = "H", conflicts_with_all = ["phi", "eta"])]
    h: Option<f64>,
    #[arg(long, conflicts_with = "eta")]
    phi: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub note: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tol
    }

    fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!("{:<46} {:>10.3e} {:>9.1e} {status}", self.name, self.residual, self.tol);
        if let Some(n) = &self.note {
            s.push_str("  ");
            s.push_str(n);
        }
        s
    }
}

fn check(name: impl Into<String>, tol: f64, f: impl FnOnce() -> Result<f64>) -> Check {
    match f() {
        Ok(r) => Check { name: name.into(), residual: if r.is_nan() { f64::INFINITY } else { r }, tol, note: None },
        Err(e) => Check { name: name.into(), residual: f64::INFINITY, tol, note: Some(e.to_string()) },
    }
}

fn max_over<T>(items: impl IntoIterator<Item = T>, mut f: impl FnMut(T) -> Result<f64>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for it in items {
        worst = worst.max(f(it)?);
    }
    Ok(worst)
}

struct SuiteOpts {
    k: Option<f64>,
    h: Option<f64>,
}

fn landen_suite(o: &SuiteOpts) -> Vec<Check> {
    let k = o.k.unwrap_or(0.6);
    let m = || Modulus::real(k);
    let reals: Vec<f64> = (0..=16).map(|j| -2.0 + 0.25 * j as f64).collect();
    vec![
        check(format!("landen/nd identity real u (k={k})"), 1e-10, || {
            let m = m()?;
            max_over(&reals, |&u| landen_gauss_identity(c(u), &m))
        }),
        check(format!("landen/nd identity complex u (k={k})"), 1e-9, || {
            let m = m()?;
            max_over(&reals, |&u| landen_gauss_identity(Cplx::new(u, 0.4), &m))
        }),
        check("landen/period ratio doubles", 1e-10, || {
            let m = m()?;
            let t = tau_from_modulus(&m)?.tau();
            let t1 = tau_from_modulus(&landen_descend(&m)?)?.tau();
            Ok((t1 - 2.0 * t).norm())
        }),
        check("landen/ascend inverts descend", 1e-12, || {
            let m = m()?;
            Ok((landen_ascend(&landen_descend(&m)?)?.k() - m.k()).norm())
        }),
    ]
}

const SAMPLE_TAUS: [(f64, f64); 5] = [(0.3, 0.9), (-0.4, 0.6), (0.1, 1.7), (0.5, 0.5), (-0.2, 1.1)];

fn modular_suite() -> Vec<Check> {
    let taus: Vec<PeriodRatio> = SAMPLE_TAUS.iter().map(|&(a, b)| PeriodRatio::new(Cplx::new(a, b)).unwrap()).collect();
    let mut out = Vec::new();
    for case in ModularCase::all() {
        let id = case.id();
        out.push(check(format!("modular/case {id} complementarity"), 1e-12, || {
            max_over(&taus, |t| Ok(case.modulus_map(&modulus_from_tau(t)?)?.complementarity_defect()))
        }));
        out.push(check(format!("modular/case {id} theta moduli"), 1e-9, || {
            max_over(&taus, |t| {
                let (a, b) = theta_case_consistency(id, t)?;
                Ok(a.max(b))
            })
        }));
    }
    let map = |i: u8, z: Cplx| ModularCase::new(i).map(|m| m.table_tau_map(z));
    out.push(check("modular/case 5 = case 4 o case 2", 1e-12, || {
        max_over(&taus, |t| Ok((map(4, map(2, t.tau())?)? - map(5, t.tau())?).norm()))
    }));
    out.push(check("modular/case 6 = case 4 o case 3", 1e-12, || {
        max_over(&taus, |t| Ok((map(4, map(3, t.tau())?)? - map(6, t.tau())?).norm()))
    }));
    out
}

fn reciprocal_suite(o: &SuiteOpts) -> Vec<Check> {
    let k = o.k.unwrap_or(0.6);
    let ts: Vec<f64> = (0..=32).map(|j| -4.0 + 0.25 * j as f64).collect();
    vec![
        check(format!("reciprocal/sn, cn with k_k = 1/k_b (k_b={k})"), 1e-9, || {
            let m = Modulus::real(k)?;
            max_over(&ts, |&t| {
                let (a, b) = reciprocal_modulus_identities(c(t), &m)?;
                Ok(a.max(b))
            })
        }),
        check("reciprocal/K(1/k) = k[K + iK']", 1e-9, || reciprocal_k_identity(&Modulus::real(k)?)),
        check("reciprocal/half-period shift", 1e-9, || {
            let m = Modulus::real(k)?;
            max_over([c(0.4), Cplx::new(0.3, 0.1), c(-1.1)], |u| {
                let (a, b) = half_period_shift_identities(u, &m)?;
                Ok(a.max(b))
            })
        }),
        check("reciprocal/dn(u1; 1/k') = cn(u1/k'; k')", 1e-9, || {
            let m = Modulus::real(k)?;
            max_over([c(0.5), Cplx::new(0.3, 0.2), c(-0.8)], |u| {
                let (a, b) = reciprocal_jef_map(u, &m)?;
                Ok(a.max(b))
            })
        }),
    ]
}

fn grid(min: f64, max: f64, step: f64) -> Vec<f64> {
    uniform_grid(min, max, step).expect("static grid")
}

fn bridge_breather_suite(o: &SuiteOpts) -> Vec<Check> {
    let kb = match o.h {
        Some(h) => (h / 2.0).sqrt(),
        None => o.k.unwrap_or(std::f64::consts::FRAC_1_SQRT_2),
    };
    let br = breather_bridge(kb, SqrtBranch::Plus);
    let field = |name: &str, tol: f64, f: fn(&crate::bridge::BreatherBridge) -> f64| {
        check(format!("bridge-breather/{name} (k_b={})", table(kb)), tol, || br.clone().map(|b| f(&b)))
    };
    let mut out = vec![
        field("q_b = q~^2", 1e-10, |b| b.nome_residual),
        field("tau_b = 2 tau~", 1e-10, |b| b.tau_doubling_residual),
        field("theta nome q~ = -i q1", 1e-10, |b| b.theta_nome_residual),
        field("t0 = K_b", 1e-9, |b| b.t0_residual),
        field("K_b = sqrt(k1') K1", 1e-9, |b| b.quarter_period_residual),
        field("4ia = 1/(sqrt(k1') K1)", 1e-9, |b| b.a_residual),
    ];
    let ts = grid(-3.0, 3.0, 0.1);
    let eq = Energy::new(2.0 * kb * kb).and_then(|e| verify_equivalence_breather(e, &ts));
    out.push(check("bridge-breather/direct vs theta ratio", 1e-8, || eq.clone().map(|r| r.max_residual)));
    out.push(check("bridge-breather/direct vs sqrt(k') nd", 1e-8, || eq.clone().map(|r| r.nd_residual)));
    out
}

fn bridge_kink_suite(o: &SuiteOpts) -> Vec<Check> {
    let kk = match o.h {
        Some(h) => (2.0 / h).sqrt(),
        None => o.k.unwrap_or(0.6),
    };
    let br = kink_bridge(kk);
    let tag = table(kk);
    let field = |name: &str, f: fn(&crate::bridge::KinkBridge) -> f64| {
        check(format!("bridge-kink/{name} (k_k={tag})"), 1e-9, || br.clone().map(|b| f(&b)))
    };
    let mut out = vec![
        field("k' = (k_k' - 1)/(k_k' + 1)", |b| b.k_prime_residual),
        field("-1/tau = 2(tau_k - 1)", |b| b.tau_residual),
        field("K(k') = (1 + k_k')/2 K(k_k)", |b| b.quarter_period_residual),
    ];
    let coeff = kink_coefficient_relations(kk);
    out.push(check("bridge-kink/2 sqrt(k') K' = i k_k K_k", 1e-9, || coeff.clone().map(|r| r.0)));
    out.push(check("bridge-kink/a from coefficient relation", 1e-9, || coeff.clone().map(|r| r.1)));
    let ts = grid(-3.0, 3.0, 0.1);
    let eq = Energy::new(2.0 / (kk * kk)).and_then(|e| verify_equivalence_kink(e, &ts));
    let get = |name: &str, tol: f64, f: fn(&crate::bridge::KinkEquivalence) -> f64| {
        check(format!("bridge-kink/{name}"), tol, || eq.clone().map(|r| f(&r)))
    };
    out.push(get("outer coefficient", 1e-9, |r| r.relation1));
    out.push(get("K(k1) on the reciprocal lattice", 1e-9, |r| r.reciprocal_k));
    out.push(get("inner constant (1 + k1)/2 K(k1) = K/2", 1e-9, |r| r.relation2));
    out.push(get("t coefficient (sign corrected)", 1e-9, |r| r.relation3));
    out.push(get("direct vs sqrt(k') nd(K/2 - t/(2 sqrt(k')))", 1e-8, |r| r.max_residual));
    out.push(get("direct vs theta ratio", 1e-8, |r| r.theta_residual));
    out
}

fn periods_suite() -> Vec<Check> {
    let mut out = Vec::new();
    for eta in [0.5, 1.0, 2.0] {
        let p = KinkSpectrum::new(eta).and_then(|s| period_integral_kink(&s));
        out.push(check(format!("periods/kink closed form vs quadrature eta={eta}"), 1e-7, || {
            p.clone().map(|p| p.relative_error)
        }));
    }
    for f in [1.1, 1.5, 1.9] {
        let p = BreatherSpectrum::new(f * PI).and_then(|s| period_integral_breather(&s));
        out.push(check(format!("periods/breather closed form vs contour phi={f}pi"), 1e-6, || {
            p.clone().map(|p| p.relative_error)
        }));
        out.push(check(format!("periods/breather k3 = i cot(phi/2) phi={f}pi"), 1e-12, || {
            p.clone().map(|p| p.k3_residual.max(p.h_residual))
        }));
    }
    let ch = kink_breather_chain(ChainInput::Breather { phi: 1.5 * PI });
    out.push(check("periods/chain s1' = -e^{i phi}", 1e-12, || ch.clone().map(|c| c.s1_prime_residual)));
    let ck = kink_breather_chain(ChainInput::Kink { eta: 1.0 });
    out.push(check("periods/chain continuation s1' = e^{-eta}", 1e-10, || ck.clone().map(|c| c.continuation_residual)));
    out.push(check("periods/chain k_k routes agree", 1e-14, || ck.clone().map(|c| c.route_residual)));
    out.push(check("periods/chain tau1 = tau_k", 1e-9, || ck.clone().map(|c| c.tau_k_residual)));
    out
}

const TRAIN_SAMPLES: [(f64, f64); 10] = [
    (0.0, 0.0),
    (0.4, 0.1),
    (1.3, 0.4),
    (-2.2, 1.0),
    (4.0, -0.7),
    (-0.9, -0.3),
    (2.6, 0.8),
    (-3.7, 0.2),
    (0.75, -1.1),
    (1.9, 1.5),
];

fn trains_suite() -> Vec<Check> {
    let kp = TrainParams::kink(0.2, 3.0, 0.5, 20);
    let bp = TrainParams::breather(0.3, 2.5, 0.0, 10);
    vec![
        check("trains/kink sum vs theta series (N=20)", 1e-6, || {
            let p = kp.clone()?;
            max_over(TRAIN_SAMPLES, |(x, t)| {
                let w = (-crate::I * kink_train(x, t, &p)? / 2.0).exp();
                Ok((w - train_theta_series(x, t, &p)?).norm())
            })
        }),
        check("trains/kink sum vs theta2 product (N=20)", 1e-6, || {
            let p = kp.clone()?;
            max_over(TRAIN_SAMPLES, |(x, t)| {
                let w = (-crate::I * kink_train(x, t, &p)? / 2.0).exp();
                Ok((w - train_theta_product(x, t, &p, p.n_max)?).norm())
            })
        }),
        check("trains/kink shift by L adds 2 pi", 1e-6, || {
            let p = kp.clone()?;
            max_over(TRAIN_SAMPLES, |(x, t)| Ok((kink_train(x + p.l, t, &p)? - kink_train(x, t, &p)? - 2.0 * PI).abs()))
        }),
        check("trains/breather sum vs theta series (N=10)", 1e-6, || {
            let p = bp.clone()?;
            max_over(TRAIN_SAMPLES, |(x, t)| {
                let w = (-crate::I * breather_train(x, t, &p)? / 2.0).exp();
                Ok((w - train_theta_series(x, t, &p)?).norm())
            })
        }),
        check("trains/breather winding over one period", 1e-6, || {
            let p = bp.clone()?;
            max_over(TRAIN_SAMPLES, |(x, t)| Ok((breather_train(x + 2.0 * p.l, t, &p)? - breather_train(x, t, &p)?).abs()))
        }),
    ]
}

fn residual_suite() -> Vec<Check> {
    let ts = grid(-5.0, 5.0, 0.05);
    let h = 1e-4;
    let mut out = Vec::new();
    for hh in [0.2, 1.0, 1.8] {
        out.push(check(format!("residual/breather q_tt + sin q H={hh}"), 1e-6, || {
            let b = BreatherDirect::new(Energy::new(hh)?)?;
            sge_residual(|t| b.q(t, 0.0), &ts, h)
        }));
    }
    for hh in [2.5, 4.0, 10.0] {
        out.push(check(format!("residual/kink q_tt + sin q H={hh}"), 1e-6, || {
            let k = KinkDirect::new(Energy::new(hh)?)?;
            sge_residual(|t| k.q(t, 0.0), &ts, h)
        }));
    }
    let near = grid(-3.0, 3.0, 0.05);
    let sep = |t: f64| 4.0 * t.exp().atan() - PI;
    out.push(check("residual/breather H = 2 - 1e-4 near separatrix", 1e-3, || {
        let b = BreatherDirect::new(Energy::new(2.0 - 1e-4)?)?;
        max_over(&near, |&t| Ok((b.q(t, 0.0)? - sep(t)).abs()))
    }));
    out.push(check("residual/kink H = 2 + 1e-4 near separatrix", 1e-3, || {
        let k = KinkDirect::new(Energy::new(2.0 + 1e-4)?)?;
        max_over(&near, |&t| Ok((k.q(t, 0.0)? - sep(t)).abs()))
    }));
    out
}

/// All checks of a suite, in a fixed order.
pub fn suite_checks(suite: &str, k: Option<f64>, h: Option<f64>) -> Result<Vec<Check>> {
    let s = Suite::from_str(suite, false).map_err(|_| Error::Domain(format!("unknown suite {suite}")))?;
    Ok(run_suite(s, &SuiteOpts { k, h }))
}

fn run_suite(s: Suite, o: &SuiteOpts) -> Vec<Check> {
    match s {
        Suite::Landen => landen_suite(o),
        Suite::ModularCases => modular_suite(),
        Suite::Reciprocal => reciprocal_suite(o),
        Suite::BridgeBreather => bridge_breather_suite(o),
        Suite::BridgeKink => bridge_kink_suite(o),
        Suite::Periods => periods_suite(),
        Suite::Trains => trains_suite(),
        Suite::Residual => residual_suite(),
        Suite::All => [
            Suite::Landen,
            Suite::ModularCases,
            Suite::Reciprocal,
            Suite::BridgeBreather,
            Suite::BridgeKink,
            Suite::Periods,
            Suite::Trains,
            Suite::Residual,
        ]
        .into_iter()
        .flat_map(|s| run_suite(s, o))
        .collect(),
    }
}

fn parse_grid(text: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must be min:max:step, got {text}"));
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("bad number {s:?} in grid {text}"));
    let g = uniform_grid(num(parts[0])?, num(parts[1])?, num(parts[2])?).map_err(|e| e.to_string())?;
    if g.len() < 2 {
        return Err(format!("grid {text} has fewer than two points"));
    }
    Ok(g)
}

enum Failure {
    Usage(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

fn need_h(h: Option<f64>, kind: &str) -> std::result::Result<Energy, Failure> {
    let h = h.ok_or_else(|| Failure::Usage(format!("--H is required for --kind {kind}")))?;
    Ok(Energy::new(h)?)
}

fn eval_rows(a: &EvalArgs, ts: &[f64]) -> std::result::Result<Vec<Cplx>, Failure> {
    let ws: Result<Vec<Cplx>> = match a.kind {
        Kind::Breather => {
            let b = BreatherDirect::new(need_h(a.h, "breather")?)?;
            ts.iter().map(|&t| b.w(t, a.t0)).collect()
        }
        Kind::Kink => {
            let k = KinkDirect::new(need_h(a.h, "kink")?)?;
            ts.iter().map(|&t| k.w(t, a.t0)).collect()
        }
        Kind::Separatrix | Kind::Antikink => {
            let sign = if a.kind == Kind::Separatrix { 1 } else { -1 };
            ts.iter().map(|&t| separatrix_w(a.x, t, a.x0, a.v, sign)).collect()
        }
        Kind::ThetaBreather => {
            let e = need_h(a.h, "theta-breather")?;
            if !(e.h < 2.0) {
                return Err(Failure::Usage(format!("theta-breather requires H < 2, got {}", e.h)));
            }
            let rep = ThetaRep::new(&breather_bridge((e.h / 2.0).sqrt(), SqrtBranch::Plus)?.solution_params()?)?;
            ts.iter().map(|&t| rep.w_theta(t)).collect()
        }
        Kind::ThetaKink => {
            let e = need_h(a.h, "theta-kink")?;
            if !(e.h > 2.0) {
                return Err(Failure::Usage(format!("theta-kink requires H > 2, got {}", e.h)));
            }
            let rep = ThetaRep::new(&kink_bridge((2.0 / e.h).sqrt())?.solution_params()?)?;
            ts.iter().map(|&t| rep.w_theta(t)).collect()
        }
    };
    Ok(ws?)
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let ts = parse_grid(&a.t).map_err(Failure::Usage)?;
    let ws = eval_rows(a, &ts)?;
    let mut qs = q_from_w_grid(&ws)?;
    if matches!(a.kind, Kind::Separatrix | Kind::Antikink) {
        // anchor on the closed form so the kink runs 0 -> 2 pi
        let sign = if a.kind == Kind::Separatrix { 1 } else { -1 };
        let q0 = separatrix(a.x, ts[0], a.x0, a.v, sign)?;
        let shift = 2.0 * PI * ((q0 - qs[0]) / (2.0 * PI)).round();
        qs.iter_mut().for_each(|q| *q += shift);
    }
    let mut s = String::from("t,q,re_w,im_w\n");
    for ((t, q), w) in ts.iter().zip(&qs).zip(&ws) {
        s.push_str(&format!("{},{},{},{}\n", csv(*t), csv(*q), csv(w.re), csv(w.im)));
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    if let Some(t) = a.tol {
        if !(t > 0.0) {
            return Err(Failure::Usage(format!("--tol must be positive, got {t}")));
        }
    }
    let mut checks = run_suite(a.suite, &SuiteOpts { k: a.k, h: a.h });
    if let Some(t) = a.tol {
        checks.iter_mut().for_each(|c| c.tol = t);
    }
    let mut s = String::new();
    for c in &checks {
        s.push_str(&c.line());
        s.push('\n');
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    s.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    out.write_all(s.as_bytes())?;
    if failed > 0 {
        Err(Failure::Verify)
    } else {
        Ok(())
    }
}

fn cx(z: Cplx) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", table(z.re), table(z.im.abs()))
}

fn rows(s: &mut String, items: &[(&str, String)]) {
    for (k, v) in items {
        s.push_str(&format!("{k:<34} {v}\n"));
    }
}

fn cmd_bridge(a: &BridgeArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let e = Energy::new(a.h)?;
    let mut s = String::new();
    if e.h == 2.0 {
        return Err(Failure::Usage("H = 2 is the separatrix boundary: no breather or kink bridge".into()));
    }
    if e.h < 2.0 {
        let kb = (e.h / 2.0).sqrt();
        let b = breather_bridge(kb, SqrtBranch::Plus)?;
        s.push_str("regime breather\n");
        rows(
            &mut s,
            &[
                ("H", table(e.h)),
                ("k_b", table(b.k_b)),
                ("K_b", table(b.k_quarter_b)),
                ("K'_b", table(b.k_quarter_b_prime)),
                ("tau_b", cx(b.tau_b)),
                ("q_b", cx(b.q_b)),
                ("tau_1", cx(b.tau_1)),
                ("k1", cx(b.k1)),
                ("k1'", cx(b.k1_prime)),
                ("sqrt(k1')", cx(b.sqrt_k1_prime)),
                ("K1", cx(b.k_quarter_1)),
                ("tau~", cx(b.tau_tilde)),
                ("q~", cx(b.q_tilde)),
                ("B", cx(b.b)),
                ("a", cx(b.a)),
                ("t0", table(b.t0)),
                ("residual q_b = q~^2", table(b.nome_residual)),
                ("residual tau_b = 2 tau~", table(b.tau_doubling_residual)),
                ("residual t0 = K_b", table(b.t0_residual)),
                ("residual K_b = sqrt(k1') K1", table(b.quarter_period_residual)),
                ("residual 4ia = 1/(sqrt(k1') K1)", table(b.a_residual)),
                ("2 sqrt(k')/(1 + k'), k_k = 1/k_b", b.landen_claim_value.map(cx).unwrap_or_else(|| "n/a".into())),
            ],
        );
    } else {
        let kk = (2.0 / e.h).sqrt();
        let b = kink_bridge(kk)?;
        let (r1, r2) = kink_coefficient_relations(kk)?;
        s.push_str("regime kink\n");
        rows(
            &mut s,
            &[
                ("H", table(e.h)),
                ("k_k", table(b.k_k)),
                ("k_k'", table(b.k_k_prime)),
                ("K_k", table(b.k_quarter_k)),
                ("K'_k", table(b.k_quarter_k_prime)),
                ("tau_k", cx(b.tau_k)),
                ("k", table(b.k)),
                ("k'", table(b.k_prime)),
                ("tau", cx(b.tau)),
                ("sqrt(k') theta", cx(b.sqrt_k_prime_theta)),
                ("sqrt(k') principal", cx(b.sqrt_k_prime_principal)),
                ("K theta", cx(b.k_quarter_theta)),
                ("a", cx(b.a)),
                ("residual k' closed form", table(b.k_prime_residual)),
                ("residual -1/tau = 2(tau_k - 1)", table(b.tau_residual)),
                ("residual K(k') = (1+k_k')/2 K_k", table(b.quarter_period_residual)),
                ("residual 2 sqrt(k') K' = i k_k K_k", table(r1)),
                ("residual a from coefficients", table(r2)),
            ],
        );
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn cmd_spectrum(a: &SpectrumArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    enum Which {
        Breather(BreatherSpectrum),
        Kink(KinkSpectrum),
    }
    let which = match (a.h, a.phi, a.eta) {
        (Some(h), _, _) => {
            let e = Energy::new(h)?;
            if e.h <= 2.0 {
                Which::Breather(BreatherSpectrum::from_energy(e)?)
            } else {
                Which::Kink(KinkSpectrum::from_energy(e)?)
            }
        }
        (_, Some(phi), _) => Which::Breather(BreatherSpectrum::new(phi)?),
        (_, _, Some(eta)) => Which::Kink(KinkSpectrum::new(eta)?),
        _ => return Err(Failure::Usage("spectrum needs one of --H, --phi, --eta".into())),
    };
    let mut s = String::new();
    match which {
        Which::Breather(sp) => {
            s.push_str("regime breather\n");
            let mut r = vec![
                ("H", table(sp.energy().h)),
                ("phi", table(sp.phi)),
                ("E1", cx(sp.e1)),
                ("E2", cx(sp.e2)),
            ];
            if sp.phi > PI && sp.phi < 2.0 * PI {
                let p = period_integral_breather(&sp)?;
                r.push(("I(a) closed form", cx(p.closed_form)));
                r.push(("I(a) contour", cx(p.contour)));
                r.push(("k3", cx(p.k3)));
            }
            rows(&mut s, &r);
        }
        Which::Kink(sp) => {
            s.push_str("regime kink\n");
            let mut r = vec![
                ("H", table(sp.energy().h)),
                ("eta", table(sp.eta)),
                ("E1", table(sp.e1)),
                ("E2", table(sp.e2)),
            ];
            if sp.eta > 0.0 {
                let p = period_integral_kink(&sp)?;
                r.push(("lambda_k", table(p.lambda_k)));
                r.push(("k_k'", table(p.k_k_prime)));
                r.push(("I(a) closed form", cx(p.closed_form)));
                r.push(("I(a) quadrature", cx(p.quadrature)));
            }
            rows(&mut s, &r);
        }
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn with_output(
    path: &Option<PathBuf>,
    out: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> std::result::Result<(), Failure>,
) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            let r = f(&mut w);
            w.flush()?;
            r
        }
        None => f(out),
    }
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            } else {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            };
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => with_output(&a.out, out, |w| cmd_eval(a, w)),
        Command::Verify(a) => with_output(&a.out, out, |w| cmd_verify(a, w)),
        Command::Bridge(a) => with_output(&a.out, out, |w| cmd_bridge(a, w)),
        Command::Spectrum(a) => with_output(&a.out, out, |w| cmd_spectrum(a, w)),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Verify) => EXIT_FAIL,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}
