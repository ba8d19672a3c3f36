//! Numerical ranges, the cones `𝔉_A`, `½𝔉_A`, `𝔯_A`, and the unital decomposition.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{unitize, Element, NormKind};
use crate::error::{Error, Result};
use crate::geometry::{angle_grid, project, Polygon};
use crate::linalg::{CVector, C64, ONE};
use crate::tol::Tolerances;

/// λ-grid and direction-grid sizes for the Williams outer body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WilliamsGrid {
    pub rings: usize,
    pub per_ring: usize,
    pub angles: usize,
}

impl Default for WilliamsGrid {
    fn default() -> Self {
        WilliamsGrid { rings: 8, per_ring: 16, angles: 360 }
    }
}

impl WilliamsGrid {
    /// Doubles rings and points per ring. The refined λ-grid contains the old one.
    pub fn refined(self) -> Self {
        WilliamsGrid { rings: 2 * self.rings, per_ring: 2 * self.per_ring, angles: self.angles }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridMeta {
    #[serde(flatten)]
    pub grid: WilliamsGrid,
    /// Ring center: a minimizer of `λ ↦ ‖a − λ1‖`.
    pub center: (f64, f64),
    pub radius: f64,
    pub lambdas: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct NumericalRangeEstimate {
    pub angles: Vec<f64>,
    /// Support values of the outer body at `angles`.
    pub outer: Vec<f64>,
    #[serde(serialize_with = "serialize_points")]
    pub inner: Vec<C64>,
    /// Largest support-function gap between the outer body and the inner hull.
    pub hausdorff_gap: Option<f64>,
    pub grid: GridMeta,
}

fn serialize_points<S: serde::Serializer>(pts: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(pts.len()))?;
    for p in pts {
        seq.serialize_element(&[p.re, p.im])?;
    }
    seq.end()
}

impl NumericalRangeEstimate {
    pub fn polygon(&self) -> Polygon {
        Polygon::from_support(&self.angles, &self.outer)
    }

    /// Whether `z` satisfies every sampled half-plane constraint up to `slack`.
    pub fn contains(&self, z: C64, slack: f64) -> bool {
        self.angles.iter().zip(&self.outer).all(|(&t, &h)| project(z, t) <= h + slack)
    }

    /// Smallest real part on the outer body.
    pub fn min_re(&self) -> f64 {
        self.polygon().min_re()
    }

    /// Support value of the outer polygon at an arbitrary direction.
    pub fn support(&self, theta: f64) -> f64 {
        self.polygon().support(theta)
    }

    fn set_inner(&mut self, inner: Vec<C64>) {
        let gap = self
            .angles
            .iter()
            .zip(&self.outer)
            .map(|(&t, &h)| {
                let hin = inner.iter().map(|&z| project(z, t)).fold(f64::NEG_INFINITY, f64::max);
                h - hin
            })
            .fold(0.0, f64::max);
        self.hausdorff_gap = (!inner.is_empty()).then_some(gap);
        self.inner = inner;
    }
}

/// Williams outer body from a map `λ ↦ ‖a − λ1‖`. `scale` sets the ring radius.
pub fn williams_outer<F>(dist: F, scale: f64, grid: WilliamsGrid) -> NumericalRangeEstimate
where
    F: Fn(C64) -> f64 + Sync,
{
    let center = minimize_distance(&dist, scale);
    let radius = 3.0 * scale.max(dist(center));
    let mut lambdas = vec![C64::new(0.0, 0.0), center];
    for j in 1..=grid.rings {
        let r = radius * j as f64 / grid.rings as f64;
        for m in 0..grid.per_ring {
            let phi = 2.0 * PI * m as f64 / grid.per_ring as f64;
            lambdas.push(center + C64::from_polar(r, phi));
        }
    }
    let radii: Vec<f64> = lambdas.par_iter().map(|&l| dist(l)).collect();
    let angles = angle_grid(grid.angles);
    let outer = angles
        .iter()
        .map(|&t| lambdas.iter().zip(&radii).map(|(&l, &r)| project(l, t) + r).fold(f64::INFINITY, f64::min))
        .collect();
    NumericalRangeEstimate {
        angles,
        outer,
        inner: Vec::new(),
        hausdorff_gap: None,
        grid: GridMeta { grid, center: (center.re, center.im), radius, lambdas: lambdas.len() },
    }
}

/// Deterministic compass search for a minimizer of a convex function on `C`.
fn minimize_distance<F: Fn(C64) -> f64>(f: &F, scale: f64) -> C64 {
    let mut x = C64::new(0.0, 0.0);
    let mut fx = f(x);
    let mut step = scale.max(1e-12);
    let floor = 1e-13 * scale.max(1.0);
    let dirs: Vec<C64> = (0..8).map(|k| C64::from_polar(1.0, PI * k as f64 / 4.0)).collect();
    let mut evals = 0;
    while step > floor && evals < 20_000 {
        let mut moved = false;
        for d in &dirs {
            let y = x + d * step;
            let fy = f(y);
            evals += 1;
            if fy < fx {
                x = y;
                fx = fy;
                moved = true;
                break;
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    x
}

/// Outer estimate of `W(a)` in the unitization.
pub fn numrange_outer(a: &Element, grid: WilliamsGrid) -> Result<NumericalRangeEstimate> {
    let x = unitize(a.algebra())?.embed(a)?;
    let one = Element::one(x.algebra())?;
    let scale = x.norm();
    Ok(williams_outer(|l| (&x - &one.scale(l)).norm(), scale, grid))
}

/// Weights and identity index when the state family has a closed form:
/// an l1 norm whose identity is a basis vector of weight one.
fn closed_form_states(a: &Element) -> Option<(usize, Vec<f64>)> {
    let alg = a.algebra();
    let NormKind::L1 { weights } = alg.norm_kind() else {
        return None;
    };
    let u = alg.identity()?;
    let k = (0..alg.dim()).find(|&i| u[i] == ONE)?;
    if u.iter().enumerate().any(|(i, z)| i != k && z.norm() != 0.0) {
        return None;
    }
    let w = weights.clone().unwrap_or_else(|| vec![1.0; alg.dim()]);
    (w[k] == 1.0).then_some((k, w))
}

/// Values `φ(a)` on sampled states: half unimodular extreme states, half
/// interior ones, plus the states attaining the support in 16 directions.
pub fn numrange_inner(a: &Element, n_samples: usize, rng: &mut impl Rng) -> Result<Vec<C64>> {
    let (k, w) = closed_form_states(a).ok_or(Error::UnsupportedStateFamily)?;
    let c = a.coeffs();
    let eval = |zeta: &dyn Fn(usize) -> C64| -> C64 {
        (0..c.len()).map(|j| if j == k { c[j] } else { c[j] * zeta(j) * w[j] }).sum()
    };
    let mut out = Vec::with_capacity(n_samples + 16);
    for t in angle_grid(16) {
        let u = C64::from_polar(1.0, t);
        // Maximize Re(φ(a) ū): each term c_j ζ_j ū is made real and positive.
        out.push(eval(&|j| {
            let z = c[j] * u.conj();
            if z.norm() == 0.0 {
                ONE
            } else {
                z.conj() / z.norm()
            }
        }));
    }
    for s in 0..n_samples {
        let zetas: Vec<C64> = (0..c.len())
            .map(|_| {
                let phase = rng.random::<f64>() * 2.0 * PI;
                let r = if s % 2 == 0 { 1.0 } else { rng.random::<f64>().sqrt() };
                C64::from_polar(r, phase)
            })
            .collect();
        out.push(eval(&|j| zetas[j]));
    }
    Ok(out)
}

/// Outer body plus, where available, the sampled inner cloud and gap.
pub fn numerical_range(
    a: &Element,
    grid: WilliamsGrid,
    n_samples: usize,
    rng: &mut impl Rng,
) -> Result<NumericalRangeEstimate> {
    let mut est = numrange_outer(a, grid)?;
    match numrange_inner(a, n_samples, rng) {
        Ok(inner) => est.set_inner(inner),
        Err(Error::UnsupportedStateFamily) => {}
        Err(e) => return Err(e),
    }
    Ok(est)
}

/// An extrapolated value such as `min Re W(a)`, with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Abscissa {
    pub value: f64,
    pub err: f64,
}

/// `min Re W(a)` as `−lim (‖1 − ta‖ − 1)/t`, by Richardson extrapolation of
/// the difference quotients at `t = 2^{-k}`, `k = 4..=24`.
pub fn min_re_abscissa(a: &Element) -> Result<Abscissa> {
    let est = abscissa_estimate(a)?;
    if est.err > Tolerances::DEFAULT.abscissa {
        return Err(Error::NonConvergent { estimate: est.value, err: est.err });
    }
    Ok(est)
}

fn abscissa_estimate(a: &Element) -> Result<Abscissa> {
    let x = unitize(a.algebra())?.embed(a)?;
    let one = Element::one(x.algebra())?;
    let h = support_by_extrapolation(|t| (&one - &x.scale_re(t)).norm());
    Ok(Abscissa { value: -h.value, err: h.err })
}

/// Support value `max Re(e^{-iθ} W)` as the one-sided derivative at 0 of
/// `norm_at(t) = ‖1 + t e^{-iθ} a‖`, from difference quotients at
/// `t = 2^{-4}, …, 2^{-24}` and a Richardson table in `t`.
pub fn support_by_extrapolation(norm_at: impl Fn(f64) -> f64) -> Abscissa {
    let quotients: Vec<f64> = (4..=24)
        .map(|k| {
            let t = 0.5f64.powi(k);
            (norm_at(t) - 1.0) / t
        })
        .collect();
    let mut table = vec![quotients];
    for m in 1..=4 {
        let prev = &table[m - 1];
        let f = 2f64.powi(m as i32);
        let next = (0..prev.len() - 1).map(|k| (f * prev[k + 1] - prev[k]) / (f - 1.0)).collect();
        table.push(next);
    }
    let mut best = (f64::INFINITY, table[0][table[0].len() - 1]);
    for row in &table {
        for k in 0..row.len().saturating_sub(2) {
            let err = (row[k + 1] - row[k]).abs().max((row[k + 2] - row[k + 1]).abs());
            if err < best.0 {
                best = (err, row[k + 2]);
            }
        }
    }
    Abscissa { value: best.1, err: best.0 }
}

/// Support function of `W(a)` at `θ`, computed in the unitization.
pub fn numrange_support(a: &Element, theta: f64) -> Result<Abscissa> {
    let x = unitize(a.algebra())?.embed(a)?;
    let one = Element::one(x.algebra())?;
    let u = C64::from_polar(1.0, -theta);
    let ux = x.scale(u);
    Ok(support_by_extrapolation(|t| (&one + &ux.scale_re(t)).norm()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeReport {
    pub in_f: bool,
    pub in_half_f: bool,
    pub min_re: f64,
    pub min_re_err: f64,
    pub accretive: bool,
    pub crosscheck_ok: bool,
    /// `‖1 − a‖`.
    pub dist_f: f64,
    /// `‖1 − 2a‖`.
    pub dist_half_f: f64,
}

/// Membership of `a` in `𝔉_A`, `½𝔉_A` and `𝔯_A`, computed in the unitization.
pub fn cone_report(a: &Element, tol: f64) -> Result<ConeReport> {
    let x = unitize(a.algebra())?.embed(a)?;
    let dist_f = x.one_minus()?.norm();
    let dist_half_f = x.scale_re(2.0).one_minus()?.norm();
    let abscissa = abscissa_estimate(&x)?;
    let n2 = x.norm().powi(2);
    let crosscheck_ok = (-10..=4).all(|k| {
        let t = 2f64.powi(k);
        x.scale_re(t).one_minus().map(|y| y.norm()).unwrap_or(f64::INFINITY) <= 1.0 + t * t * n2 + tol
    });
    Ok(ConeReport {
        in_f: dist_f <= 1.0 + tol,
        in_half_f: dist_half_f <= 1.0 + tol,
        min_re: abscissa.value,
        min_re_err: abscissa.err,
        accretive: abscissa.value >= -tol,
        crosscheck_ok,
        dist_f,
        dist_half_f,
    })
}

/// `a ⪯ b`, i.e. `b − a` is accretive.
pub fn preceq(a: &Element, b: &Element, tol: f64) -> Result<bool> {
    a.same_algebra(b)?;
    Ok(cone_report(&(b - a), tol)?.accretive)
}

/// `x = a − b` with `a = (1 + x)/2` and `b = (1 − x)/2`, both in `½𝔉_A`.
pub fn decompose_unital(x: &Element) -> Result<(Element, Element)> {
    let one = Element::one(x.algebra())?;
    let n = x.norm();
    if n >= 1.0 {
        return Err(Error::NormTooLarge(n));
    }
    Ok(((&one + x).scale_re(0.5), (&one - x).scale_re(0.5)))
}

/// Coefficients of a state as a functional on the unitization, for the
/// closed-form l1 family: `φ(e_j) = w_j ζ_j`, `φ(1) = 1`.
pub fn l1_state(a: &Element, zetas: &[C64]) -> Result<CVector> {
    let (k, w) = closed_form_states(a).ok_or(Error::UnsupportedStateFamily)?;
    if zetas.len() != w.len() {
        return Err(Error::InconsistentDimensions("one phase per coordinate".into()));
    }
    Ok(CVector::from_iterator(w.len(), (0..w.len()).map(|j| if j == k { ONE } else { zetas[j] * w[j] })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{group_algebra, lower_triangular_l1, semigroup_l1_4};
    use crate::geometry::disk_support;
    use crate::linalg::c;
    use crate::sample;

    fn pq(alg: &std::sync::Arc<crate::Algebra>) -> Element {
        Element::from_reals(alg, &[1.0, -1.0, -1.0, 1.0]).unwrap()
    }

    #[test]
    fn scalar_multiple_of_identity_is_a_point() {
        let a = group_algebra(3);
        let lambda = c(0.7, -1.2);
        let x = Element::scalar(&a, lambda).unwrap();
        let est = numrange_outer(&x, WilliamsGrid::default()).unwrap();
        let gap = est.polygon().hausdorff_to(|t| project(lambda, t), lambda, 720);
        assert!(gap < 1e-9, "{gap}");
    }

    #[test]
    fn z2_projection_disk() {
        let a = group_algebra(2);
        let p = Element::from_reals(&a, &[0.5, 0.5]).unwrap();
        let center = c(0.5, 0.0);
        let disk = |t: f64| disk_support(center, 0.5, t);
        let coarse = numrange_outer(&p, WilliamsGrid::default()).unwrap();
        let fine = numrange_outer(&p, WilliamsGrid::default().refined()).unwrap();
        let g0 = coarse.polygon().hausdorff_to(disk, center, 1440);
        let g1 = fine.polygon().hausdorff_to(disk, center, 1440);
        assert!(g0 <= 0.02 && g1 <= 0.005, "{g0} {g1}");
        for (h0, h1) in coarse.outer.iter().zip(&fine.outer) {
            assert!(h1 <= &(h0 + 1e-12));
        }
    }

    #[test]
    fn z2_states_fill_the_disk() {
        let a = group_algebra(2);
        let p = Element::from_reals(&a, &[0.5, 0.5]).unwrap();
        let mut rng = sample::rng(sample::SEED);
        let est = numerical_range(&p, WilliamsGrid::default(), 400, &mut rng).unwrap();
        for z in &est.inner {
            assert!((z - c(0.5, 0.0)).norm() <= 0.5 + 1e-12);
            assert!(est.contains(*z, 1e-9));
        }
        assert!(est.hausdorff_gap.unwrap() < 0.02);
    }

    #[test]
    fn identity_states_are_one() {
        let a = semigroup_l1_4();
        let mut rng = sample::rng(1);
        let pts = numrange_inner(&Element::one(&a).unwrap(), 50, &mut rng).unwrap();
        assert!(pts.iter().all(|z| (z - ONE).norm() < 1e-15));
    }

    #[test]
    fn product_of_idempotents_reaches_minus_two() {
        let a = semigroup_l1_4();
        let x = pq(&a);
        let est = numrange_outer(&x, WilliamsGrid::default()).unwrap();
        assert!((est.min_re() + 2.0).abs() < 1e-3, "{}", est.min_re());
        let mut rng = sample::rng(2);
        let pts = numrange_inner(&x, 100, &mut rng).unwrap();
        assert!(pts.iter().any(|z| z.re < -1.9));
        assert!(pts.iter().all(|z| est.contains(*z, 1e-9)));
    }

    #[test]
    fn op_norm_algebras_have_no_closed_form_states() {
        let a = lower_triangular_l1();
        let mut rng = sample::rng(3);
        let x = Element::basis(&a, 0);
        assert!(matches!(numrange_inner(&x, 5, &mut rng), Err(Error::UnsupportedStateFamily)));
    }

    #[test]
    fn abscissa_examples() {
        let a = group_algebra(2);
        let one = Element::one(&a).unwrap();
        assert!((min_re_abscissa(&one).unwrap().value - 1.0).abs() < 1e-8);
        let bad = Element::from_reals(&a, &[1.0, 1.01]).unwrap();
        let v = min_re_abscissa(&bad).unwrap().value;
        assert!((v + 0.01).abs() < 1e-6, "{v}");
        let edge = Element::from_reals(&a, &[1.0, 1.0]).unwrap();
        assert!(min_re_abscissa(&edge).unwrap().value.abs() < 1e-6);
    }

    #[test]
    fn abscissa_in_op_norm_algebra() {
        // W of [[1, 0], [2, 3]] on ℓ¹_2: min Re is attained by the column functional.
        let a = lower_triangular_l1();
        let x = Element::from_reals(&a, &[1.0, 2.0, 3.0]).unwrap();
        let v = min_re_abscissa(&x).unwrap();
        // ‖I − tX‖ = max(|1 − t| + 2t, 1 − 3t) = 1 + t for small t.
        assert!((v.value + 1.0).abs() < 1e-7, "{v:?}");
    }

    #[test]
    fn cone_examples() {
        let a = semigroup_l1_4();
        let p = Element::basis(&a, 1).one_minus().unwrap();
        let r = cone_report(&p, 1e-7).unwrap();
        assert!(r.in_f && !r.in_half_f);
        let r = cone_report(&pq(&a), 1e-7).unwrap();
        assert!(!r.accretive && !r.crosscheck_ok);
        let r = cone_report(&Element::zero(&a), 1e-7).unwrap();
        assert!(r.in_f && r.accretive && r.crosscheck_ok);
    }

    #[test]
    fn preceq_examples() {
        let a = group_algebra(2);
        let x = Element::from_slice(&a, &[c(0.3, 1.0), c(-2.0, 0.5)]).unwrap();
        assert!(preceq(&x, &x, 1e-7).unwrap());
        let p = Element::from_reals(&a, &[0.5, 0.5]).unwrap();
        assert!(preceq(&Element::zero(&a), &p, 1e-7).unwrap());
        let y = Element::from_reals(&a, &[1.0, 1.01]).unwrap();
        assert!(!preceq(&Element::zero(&a), &y, 1e-7).unwrap());
    }

    #[test]
    fn decomposition_examples() {
        let a = group_algebra(2);
        let (p, q) = decompose_unital(&Element::zero(&a)).unwrap();
        assert!(p.dist(&Element::scalar(&a, c(0.5, 0.0)).unwrap()) == 0.0);
        assert!(q.dist(&p) == 0.0);
        let x = Element::from_reals(&a, &[0.0, 0.9]).unwrap();
        let (p, q) = decompose_unital(&x).unwrap();
        assert!(p.dist(&Element::from_reals(&a, &[0.5, 0.45]).unwrap()) < 1e-16);
        assert!(q.dist(&Element::from_reals(&a, &[0.5, -0.45]).unwrap()) < 1e-16);
        assert!(cone_report(&p, 1e-10).unwrap().in_half_f);
        assert!((cone_report(&q, 1e-10).unwrap().dist_half_f - 0.9).abs() < 1e-15);
        let big = Element::from_reals(&a, &[0.0, 1.0]).unwrap();
        assert!(matches!(decompose_unital(&big), Err(Error::NormTooLarge(_))));
    }

    #[test]
    fn non_unital_ambient_is_unitized() {
        let a = crate::catalog::pointwise_l1(3);
        let x = Element::from_reals(&a, &[1.0, 0.5, 0.0]).unwrap();
        let r = cone_report(&x, 1e-7).unwrap();
        // In A¹ with the sup norm: ‖1 − x‖ = 1 and min Re W = 0.
        assert!(r.in_f && r.in_half_f && r.accretive);
        assert!(r.min_re.abs() < 1e-7);
    }
}
