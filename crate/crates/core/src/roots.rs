//! Principal fractional powers, the 𝔉-transform and root inequalities.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{resolvent, unitize, Element, Unitization};
use crate::error::{Error, Result};
use crate::linalg::{lu_solve, CVector, C64};
use crate::states::cone_report;
use crate::tol::Tolerances;

const SERIES_CAP: usize = 1_000_000;
const AUTO_SERIES_CAP: usize = 1 << 16;
const F_SLACK: f64 = 1e-9;
const PANEL_ORDER: usize = 16;
const MAX_PANELS: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerMethod {
    Series,
    Quadrature,
}

#[derive(Debug, Clone)]
pub struct PowerResult {
    pub value: Element,
    pub method: PowerMethod,
    pub est_error: f64,
    pub terms_or_nodes: usize,
}

/// Lifts `x` to the unitization; results are mapped back with [`Unitization::to_base`].
fn lift(x: &Element) -> Result<(Unitization, Element)> {
    let u = unitize(x.algebra())?;
    let y = u.embed(x)?;
    Ok((u, y))
}

fn check_t(t: f64, lo_open: bool, hi_open: bool) -> Result<()> {
    let ok = t.is_finite() && if lo_open { t > 0.0 } else { t >= 0.0 } && if hi_open { t < 1.0 } else { t <= 1.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("exponent {t} out of range")))
    }
}

/// `x^t` for `x ∈ 𝔉_A` by the binomial series `Σ binom(t,k)(−1)^k (1−x)^k`.
///
/// The series is summed at `x/2 ∈ ½𝔉_A` and rescaled by `2^t`; then the only
/// unimodular spectrum of `1 − x/2` is the eigenvalue 1 coming from the
/// kernel of `x`. At checkpoints `K = 16, 32, …` the run stops when either the
/// rigorous tail bound `‖(1−x/2)^K‖·Σ_{k>K}|binom(t,k)|` or the change in the
/// kernel-extrapolated sum falls below `tol`.
pub fn power_series(x: &Element, t: f64, tol: f64) -> Result<PowerResult> {
    series_with_cap(x, t, tol, SERIES_CAP)
}

fn series_with_cap(x: &Element, t: f64, tol: f64, cap: usize) -> Result<PowerResult> {
    check_t(t, false, false)?;
    let (u, xl) = lift(x)?;
    let dist = xl.one_minus()?.norm();
    if dist > 1.0 + F_SLACK {
        return Err(Error::NotInF(dist));
    }
    let one = Element::one(xl.algebra())?;
    let done = |v: CVector, err: f64, k: usize| -> Result<PowerResult> {
        let value = u.to_base(&Element::new(xl.algebra(), v)?.scale_re(2f64.powf(t)))?;
        Ok(PowerResult { value, method: PowerMethod::Series, est_error: err, terms_or_nodes: k })
    };
    if t == 0.0 {
        return done(one.coeffs().clone(), 0.0, 1);
    }
    if t == 1.0 {
        return done(xl.scale_re(0.5).into_coeffs(), 0.0, 2);
    }

    let y = xl.scale_re(0.5).one_minus()?;
    let ly = y.left_matrix();
    let scale = 2f64.powf(t);
    // Work to tol/2^t so the rescaled result meets tol.
    let tol_s = tol / scale;
    let mut power = one.coeffs().clone();
    let mut sum = power.clone();
    let mut coef = 1.0;
    let mut mass = 1.0; // Σ_{k>K} |binom(t,k)| = |binom(t−1, K)|
    let mut prev: Option<(CVector, f64, Option<CVector>)> = None;
    let mut checkpoint = 16;
    let norm = |v: &CVector| xl.algebra().norm(v);
    for k in 1..=cap {
        power = &ly * &power;
        coef *= (k as f64 - 1.0 - t) / k as f64;
        mass *= (k as f64 - t) / k as f64;
        sum += &power * C64::from(coef);
        if k != checkpoint {
            continue;
        }
        checkpoint *= 2;
        let bound = norm(&power) * mass;
        if bound < tol_s {
            return done(sum, bound * scale, k + 1);
        }
        let limit = prev.as_ref().map(|(s_half, m_half, l_half)| {
            let e = (s_half - &sum) / C64::from(m_half - mass);
            let l = &sum - e * C64::from(mass);
            let change = l_half.as_ref().map(|lh| norm(&(&l - lh)));
            (l, change)
        });
        let l_now = match limit {
            Some((l, Some(change))) if change < tol_s => return done(l, change * scale, k + 1),
            Some((l, _)) => Some(l),
            None => None,
        };
        prev = Some((sum.clone(), mass, l_now));
    }
    let err = prev.map_or(f64::INFINITY, |(_, m, _)| m) * scale;
    Err(Error::TolNotReached { tol, err, steps: cap })
}

/// `x^α` for accretive `x` by the Balakrishnan integral
/// `(sin απ/π) ∫_0^∞ t^{α−1} (t + x)^{-1} x dt` after `t = e^s`, with
/// composite Gauss–Legendre panels on `[−S₁, S₂]`.
pub fn power_balakrishnan(x: &Element, alpha: f64, tol: f64) -> Result<PowerResult> {
    check_t(alpha, true, true)?;
    let (u, xl) = lift(x)?;
    let nx = xl.norm();
    if nx == 0.0 {
        return Ok(PowerResult {
            value: u.to_base(&xl)?,
            method: PowerMethod::Quadrature,
            est_error: 0.0,
            terms_or_nodes: 0,
        });
    }
    let report = cone_report(&xl, Tolerances::DEFAULT.cone)?;
    if !report.accretive {
        return Err(Error::NotAccretive(report.min_re));
    }
    let c = (alpha * PI).sin() / PI;
    // Tails: ‖(t+x)^{-1}x‖ ≤ 2 below e^{−S₁}, ≤ ‖x‖/t above e^{S₂}; each contributes < tol/4.
    let s1 = (8.0 * c / (alpha * tol)).ln() / alpha;
    let s2 = (4.0 * c * nx / ((1.0 - alpha) * tol)).ln() / (1.0 - alpha);
    let (lo, hi) = (-s1.max(0.0), s2.max(-s1 + 1.0).max(0.0));

    let one = Element::one(xl.algebra())?;
    let lx = xl.left_matrix();
    let lid = one.left_matrix();
    let x_vec = xl.coeffs().clone();
    let integrand = |s: f64| -> Option<CVector> {
        // (t + x)^{-1} x solves L_{t+x} v = x.
        let lt = &lx + &lid * C64::from(s.exp());
        lu_solve(&lt, &x_vec).map(|v| v * C64::from((alpha * s).exp()))
    };

    let gl = GaussLegendre::new(NonZeroUsize::new(PANEL_ORDER).expect("nonzero"));
    let rule = gl.as_node_weight_pairs();
    let base = graded_panels(lo, hi, nx.ln());
    let mut split = 1usize;
    let mut previous: Option<CVector> = None;
    loop {
        let nodes: Vec<(f64, f64)> = base
            .iter()
            .flat_map(|&(a, b)| {
                let h = (b - a) / split as f64;
                (0..split).map(move |k| a + (k as f64 + 0.5) * h).map(move |mid| (mid, h))
            })
            .flat_map(|(mid, h)| rule.iter().map(move |&(n, w)| (mid + 0.5 * h * n, 0.5 * h * w)))
            .collect();
        let values: Vec<Option<CVector>> = nodes.par_iter().map(|&(s, _)| integrand(s)).collect();
        let mut total = CVector::zeros(x_vec.len());
        for (v, &(_, w)) in values.iter().zip(&nodes) {
            let v = v.as_ref().ok_or(Error::Singular(0.0))?;
            total += v * C64::from(w);
        }
        total *= C64::from(c);
        if let Some(prev) = &previous {
            let diff = xl.algebra().norm(&(&total - prev));
            if diff < tol {
                let value = u.to_base(&Element::new(xl.algebra(), total)?)?;
                return Ok(PowerResult {
                    value,
                    method: PowerMethod::Quadrature,
                    est_error: diff + tol / 2.0,
                    terms_or_nodes: nodes.len(),
                });
            }
            if base.len() * split >= MAX_PANELS {
                return Err(Error::TolNotReached { tol, err: diff, steps: nodes.len() });
            }
        }
        previous = Some(total);
        split *= 2;
    }
}

/// Panels covering `[lo, hi]`: unit width where `(e^s + x)^{-1}x` can vary,
/// i.e. for `e^s` between `e^{-40}` and `e^{40}‖x‖`, and doubling widths
/// beyond, where the integrand is a smooth exponential times a nearly
/// constant factor. Keeps the node count independent of `α` near 0 and 1.
fn graded_panels(lo: f64, hi: f64, log_norm: f64) -> Vec<(f64, f64)> {
    let core_lo = lo.max(-40.0).min(hi);
    let core_hi = hi.min(log_norm + 40.0).max(core_lo);
    let mut panels = Vec::new();
    let (mut b, mut w) = (core_lo, 1.0);
    while b > lo {
        let a = (b - w).max(lo);
        panels.push((a, b));
        b = a;
        w *= 2.0;
    }
    panels.reverse();
    let n = ((core_hi - core_lo).ceil() as usize).max(4);
    let h = (core_hi - core_lo) / n as f64;
    panels.extend((0..n).map(|k| (core_lo + k as f64 * h, core_lo + (k + 1) as f64 * h)));
    let (mut a, mut w) = (core_hi, 1.0);
    while a < hi {
        let b = (a + w).min(hi);
        panels.push((a, b));
        a = b;
        w *= 2.0;
    }
    panels
}

/// `x^t`: the binomial series when `x ∈ 𝔉_A`, otherwise (or if the series
/// stalls) the Balakrishnan integral.
pub fn principal_power(x: &Element, t: f64, tol: f64) -> Result<PowerResult> {
    check_t(t, false, false)?;
    let (_, xl) = lift(x)?;
    let in_f = xl.one_minus()?.norm() <= 1.0 + F_SLACK;
    if in_f {
        // A series that has not converged by then sits on a nearly singular
        // boundary point, where the integral is far cheaper.
        match series_with_cap(x, t, tol, AUTO_SERIES_CAP) {
            Ok(r) => return Ok(r),
            Err(Error::TolNotReached { .. }) if t > 0.0 && t < 1.0 => {}
            Err(e) => return Err(e),
        }
    }
    if t == 1.0 {
        return Ok(PowerResult { value: x.clone(), method: PowerMethod::Series, est_error: 0.0, terms_or_nodes: 0 });
    }
    if t == 0.0 {
        let value = Element::one(xl.algebra())?;
        return Ok(PowerResult { value, method: PowerMethod::Series, est_error: 0.0, terms_or_nodes: 0 });
    }
    power_balakrishnan(x, t, tol)
}

/// `𝔉(x) = x(1 + x)^{-1} = 1 − (1 + x)^{-1}`, in the algebra of `x`.
pub fn f_transform(x: &Element) -> Result<Element> {
    let (u, xl) = lift(x)?;
    let r = resolvent(&xl, C64::from(1.0))?;
    u.to_base(&r.one_minus()?)
}

/// `y(1 − y)^{-1} = (1 − y)^{-1} − 1`, inverse of [`f_transform`].
pub fn inverse_f_transform(y: &Element) -> Result<Element> {
    let (u, yl) = lift(y)?;
    let r = resolvent(&(-&yl), C64::from(1.0))?;
    u.to_base(&r.plus_scalar(C64::from(-1.0))?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootDefectProfile {
    pub n: Vec<u32>,
    /// `‖x^{1/n} x − x‖`.
    pub defects: Vec<f64>,
}

pub fn root_defect_profile(x: &Element, ns: &[u32], tol: f64) -> Result<RootDefectProfile> {
    let mut defects = Vec::with_capacity(ns.len());
    for &n in ns {
        if n == 0 {
            return Err(Error::InvalidInput("root order must be positive".into()));
        }
        let r = principal_power(x, 1.0 / n as f64, tol)?.value;
        defects.push((&r * x - x).norm());
    }
    Ok(RootDefectProfile { n: ns.to_vec(), defects })
}

/// `(sin απ/π)(4/α + 1/(1−α))`.
pub fn strsq_constant(alpha: f64) -> f64 {
    (alpha * PI).sin() / PI * (4.0 / alpha + 1.0 / (1.0 - alpha))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipschitzReport {
    pub alpha: f64,
    pub constant: f64,
    pub trials: usize,
    pub violations: usize,
    /// Largest `‖(a^α − b^α)c‖ / (K‖(a − b)c‖^α)` over trials with a nonzero denominator.
    pub worst_ratio: f64,
}

/// Checks `‖(a^α − b^α)c‖ ≤ K‖(a − b)c‖^α` for commuting accretive `a, b`
/// and each `c` with `‖c‖ ≤ 1`.
pub fn commuting_power_lipschitz_check(
    a: &Element,
    b: &Element,
    cs: &[Element],
    alpha: f64,
    tol: f64,
) -> Result<LipschitzReport> {
    check_t(alpha, true, true)?;
    a.same_algebra(b)?;
    let comm = a.commutator_norm(b);
    if comm > 1e-10 {
        return Err(Error::NotCommuting(comm));
    }
    let k = strsq_constant(alpha);
    let pa = principal_power(a, alpha, tol)?.value;
    let pb = principal_power(b, alpha, tol)?.value;
    let diff_pow = &pa - &pb;
    let diff = a - b;
    let mut report = LipschitzReport { alpha, constant: k, trials: cs.len(), violations: 0, worst_ratio: 0.0 };
    for c in cs {
        c.same_algebra(a)?;
        if c.norm() > 1.0 + 1e-12 {
            return Err(Error::InvalidInput(format!("‖c‖ = {} exceeds 1", c.norm())));
        }
        let lhs = (&diff_pow * c).norm();
        let rhs = k * (&diff * c).norm().powf(alpha);
        if lhs > rhs + 10.0 * tol {
            report.violations += 1;
        }
        if rhs > 0.0 {
            report.worst_ratio = report.worst_ratio.max(lhs / rhs);
        }
    }
    Ok(report)
}
