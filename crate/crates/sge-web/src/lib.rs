//! Browser bindings: the field `q(t)` for an energy, the direct-vs-theta
//! residual along the same grid, and a text summary of the parameter bridge.
//!
//! Errors come back as strings so the functions also run natively in tests.

use num_complex::Complex64 as Cplx;
use wasm_bindgen::prelude::*;

use sge_elliptic::bridge::{breather_bridge, kink_bridge, SqrtBranch};
use sge_elliptic::format::table;
use sge_elliptic::solutions::{q_from_w_grid, BreatherDirect, Energy, KinkDirect, ThetaRep};

type Out<T> = Result<T, String>;

fn grid(t_min: f64, t_max: f64, n: usize) -> Out<Vec<f64>> {
    if n < 2 || !t_min.is_finite() || !t_max.is_finite() || t_max <= t_min {
        return Err(format!("need t_min < t_max and at least two points, got {t_min}..{t_max} with {n}"));
    }
    if n > 100_000 {
        return Err(format!("{n} points is more than this page draws"));
    }
    let step = (t_max - t_min) / (n - 1) as f64;
    Ok((0..n).map(|i| t_min + step * i as f64).collect())
}

/// `w` on the grid from the direct formula and from the theta form, with the
/// direct time origin moved onto the theta one.
fn both_paths(h: f64, ts: &[f64]) -> Out<(Vec<Cplx>, Vec<Cplx>)> {
    let e = Energy::new(h).map_err(|e| e.to_string())?;
    let run = || -> sge_elliptic::Result<(Vec<Cplx>, Vec<Cplx>)> {
        if e.is_breather() {
            let d = BreatherDirect::new(e)?;
            let br = breather_bridge((h / 2.0).sqrt(), SqrtBranch::Plus)?;
            let rep = ThetaRep::new(&br.solution_params()?)?;
            let direct = ts.iter().map(|&t| d.w(t, br.t0)).collect::<sge_elliptic::Result<_>>()?;
            let theta = ts.iter().map(|&t| rep.w_theta(t)).collect::<sge_elliptic::Result<_>>()?;
            Ok((direct, theta))
        } else {
            let d = KinkDirect::new(e)?;
            let rep = ThetaRep::new(&kink_bridge((2.0 / h).sqrt())?.solution_params()?)?;
            let direct = ts.iter().map(|&t| d.w(t, 0.0)).collect::<sge_elliptic::Result<_>>()?;
            let theta = ts.iter().map(|&t| rep.w_theta(t)).collect::<sge_elliptic::Result<_>>()?;
            Ok((direct, theta))
        }
    };
    run().map_err(|e| e.to_string())
}

/// Interleaved `[q_direct, q_theta]` pairs, one per grid point; kinks are
/// unwrapped so they wind instead of jumping.
#[wasm_bindgen]
pub fn field_curve(h: f64, t_min: f64, t_max: f64, n: usize) -> Out<Vec<f64>> {
    let ts = grid(t_min, t_max, n)?;
    let (d, th) = both_paths(h, &ts)?;
    let qd = q_from_w_grid(&d).map_err(|e| e.to_string())?;
    let qt = q_from_w_grid(&th).map_err(|e| e.to_string())?;
    Ok(qd.into_iter().zip(qt).flat_map(|(a, b)| [a, b]).collect())
}

/// `|w_direct - w_theta|` at each grid point.
#[wasm_bindgen]
pub fn equivalence_residual(h: f64, t_min: f64, t_max: f64, n: usize) -> Out<Vec<f64>> {
    let ts = grid(t_min, t_max, n)?;
    let (d, th) = both_paths(h, &ts)?;
    Ok(d.iter().zip(&th).map(|(a, b)| (a - b).norm()).collect())
}

fn cx(z: Cplx) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", table(z.re), table(z.im.abs()))
}

/// Plain-text table of the bridge between the direct and theta parameters.
#[wasm_bindgen]
pub fn bridge_summary(h: f64) -> Out<String> {
    let e = Energy::new(h).map_err(|e| e.to_string())?;
    if h == 2.0 {
        return Err("H = 2 is the separatrix: there is no bridge".into());
    }
    let rows: Vec<(&str, String)> = if e.is_breather() {
        let b = breather_bridge((h / 2.0).sqrt(), SqrtBranch::Plus).map_err(|e| e.to_string())?;
        vec![
            ("regime", "breather".into()),
            ("k_b", table(b.k_b)),
            ("K(k_b)", table(b.k_quarter_b)),
            ("tau_b", cx(b.tau_b)),
            ("B", cx(b.b)),
            ("a", cx(b.a)),
            ("t0", table(b.t0)),
            ("largest relation residual", format!("{:.2e}", b.max_relation_residual())),
        ]
    } else {
        let b = kink_bridge((2.0 / h).sqrt()).map_err(|e| e.to_string())?;
        vec![
            ("regime", "kink".into()),
            ("k_k", table(b.k_k)),
            ("K(k_k)", table(b.k_quarter_k)),
            ("k'", table(b.k_prime)),
            ("B", cx(b.tau)),
            ("a", cx(b.a)),
            ("largest relation residual", format!("{:.2e}", b.max_relation_residual())),
        ]
    };
    Ok(rows.iter().map(|(k, v)| format!("{k:<26} {v}\n")).collect())
}
