//! M-ideal ideals through their support projections, quotient norms and
//! numerical ranges, and norm-preserving lifts from the quotient.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::algebra::{linf_sum, max_abs_matrix, minimize_norm_affine, Algebra, Element, NormKind};
use crate::catalog::scalars;
use crate::error::{Error, Result};
use crate::geometry::{angle_grid, min_width, project, Polygon};
use crate::ideals::{IdealBasis, Side};
use crate::linalg::{orth_basis, span_intersection, span_sum, spans_equal, CMatrix, CVector, C64, ONE};
use crate::sample;
use crate::states::{
    cone_report, l1_state, numrange_support, support_by_extrapolation, williams_outer, NumericalRangeEstimate,
    WilliamsGrid,
};
use crate::tol::Tolerances;

const M_SAMPLES: usize = 500;
const M_TOL: f64 = 1e-9;
const CENTRAL_TOL: f64 = 1e-10;
/// Directions used for support-function checks on lifts.
const CHECK_ANGLES: usize = 180;
const INTERIOR_MARGIN: f64 = 1e-4;
const MIN_WIDTH: f64 = 1e-6;
const LIFT_SLACK: f64 = 1e-6;
pub const EPS_TRI: f64 = 0.05;
const MAX_HALVINGS: usize = 10;

/// A closed two-sided ideal `J` whose support projection `P` splits the
/// algebra as `J ⊕∞ ker P`. `P` acts as left multiplication by `z = P(1)`.
#[derive(Debug, Clone)]
pub struct MIdealIdeal {
    alg: Arc<Algebra>,
    p: CMatrix,
    z: Element,
    ideal: IdealBasis,
    exact: bool,
}

impl MIdealIdeal {
    /// The ideal spanned by the masked coordinates. Intended for summands of
    /// an l-infinity sum.
    pub fn coordinate(alg: &Arc<Algebra>, mask: &[bool]) -> Result<Self> {
        if mask.len() != alg.dim() {
            return Err(Error::InconsistentDimensions(format!(
                "mask of length {} for dimension {}",
                mask.len(),
                alg.dim()
            )));
        }
        let p = CMatrix::from_diagonal(&CVector::from_iterator(
            mask.len(),
            mask.iter().map(|&m| if m { ONE } else { C64::new(0.0, 0.0) }),
        ));
        Self::validate(alg, p, matches!(alg.norm_kind(), NormKind::LinfSum { .. }))
    }

    /// `J = zA` for a central idempotent `z`.
    pub fn from_central_idempotent(z: &Element) -> Result<Self> {
        Self::validate(z.algebra(), z.left_matrix(), false)
    }

    /// A projection given as a matrix on coefficient space.
    pub fn from_projection(alg: &Arc<Algebra>, p: CMatrix) -> Result<Self> {
        if p.nrows() != alg.dim() || p.ncols() != alg.dim() {
            return Err(Error::InconsistentDimensions("projection must be square of algebra dimension".into()));
        }
        Self::validate(alg, p, false)
    }

    fn validate(alg: &Arc<Algebra>, p: CMatrix, exact: bool) -> Result<Self> {
        let one = Element::one(alg)?;
        let d = max_abs_matrix(&(&p * &p - &p));
        if d > Tolerances::DEFAULT.structure {
            return Err(Error::NotMIdeal(format!("P² − P has entry {d:.3e}")));
        }
        let basis = orth_basis(&p, Tolerances::DEFAULT.ideal_rank);
        let ideal = IdealBasis::from_orthonormal(alg, Side::TwoSided, basis);
        let closure = ideal.closure_defect();
        if closure > 1e-9 {
            return Err(Error::NotMIdeal(format!("range of P is not an ideal (defect {closure:.3e})")));
        }
        let z = Element::new(alg, &p * one.coeffs())?;
        let zd = z.idempotent_defect();
        if zd > CENTRAL_TOL {
            return Err(Error::NotMIdeal(format!("P(1) is not idempotent (defect {zd:.3e})")));
        }
        let central = (0..alg.dim()).map(|i| z.commutator_norm(&Element::basis(alg, i))).fold(0.0, f64::max);
        if central > CENTRAL_TOL {
            return Err(Error::NotMIdeal(format!("P(1) is not central (defect {central:.3e})")));
        }
        let mult = max_abs_matrix(&(&p - z.left_matrix()));
        if mult > CENTRAL_TOL {
            return Err(Error::NotMIdeal(format!("P differs from multiplication by P(1) ({mult:.3e})")));
        }
        let zn = z.norm();
        if zn.min((zn - 1.0).abs()) > M_TOL {
            return Err(Error::NotMIdeal(format!("‖P(1)‖ = {zn}")));
        }
        if !cone_report(&z, Tolerances::DEFAULT.cone)?.in_f {
            return Err(Error::NotMIdeal("P(1) lies outside 𝔉_A".into()));
        }
        if let Some((x, gap)) = m_property_witness(alg, &p, M_SAMPLES, sample::SEED) {
            return Err(Error::NotMIdeal(format!("M-property fails by {gap:.3e} at {:?}", x.as_slice())));
        }
        Ok(MIdealIdeal { alg: alg.clone(), p, z, ideal, exact })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn projection(&self) -> &CMatrix {
        &self.p
    }

    /// The support projection `z = P(1)`.
    pub fn support(&self) -> &Element {
        &self.z
    }

    pub fn ideal(&self) -> &IdealBasis {
        &self.ideal
    }

    /// Whether the projection comes from an l-infinity sum decomposition.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn project(&self, x: &Element) -> Element {
        Element::new(&self.alg, &self.p * x.coeffs()).expect("dimension checked")
    }

    /// `(I − P)x`, the canonical representative of `Q(x)`.
    pub fn complement(&self, x: &Element) -> Element {
        x - &self.project(x)
    }

    /// `‖Q(x)‖ = ‖(I − P)x‖`.
    pub fn qnorm(&self, x: &Element) -> f64 {
        self.complement(x).norm()
    }

    /// `inf_{j ∈ J} ‖x − j‖` by subgradient descent, an upper bound for cross-checks.
    pub fn qnorm_by_minimization(&self, x: &Element, iters: usize) -> f64 {
        minimize_norm_affine(&self.alg, x.coeffs(), self.ideal.basis(), iters).1
    }

    pub fn quotient(&self, x: &Element) -> Result<QuotientElement> {
        x.same_algebra(&self.z)?;
        Ok(QuotientElement { representative: x.clone(), qnorm: self.qnorm(x) })
    }

    /// Whether the quotient is the zero space, i.e. `J = A`.
    fn quotient_is_zero(&self) -> bool {
        self.z.one_minus().map(|d| d.max_abs() < 1e-12).unwrap_or(false)
    }

    /// Largest `|φ(z)|` over the given functionals that vanish on `J`.
    /// Functionals are coefficient vectors, `φ(a) = Σ φ_i a_i`.
    pub fn face_defect(&self, states: &[CVector]) -> (usize, f64) {
        let q = self.ideal.basis();
        let mut used = 0;
        let mut worst = 0.0f64;
        for phi in states {
            let on_j = (phi.transpose() * q).iter().map(|v| v.norm()).fold(0.0, f64::max);
            if on_j <= 1e-12 {
                used += 1;
                worst = worst.max((phi.transpose() * self.z.coeffs())[0].norm());
            }
        }
        (used, worst)
    }
}

/// First sampled `x` with `‖x‖ ≠ max(‖Px‖, ‖x − Px‖)` beyond tolerance,
/// together with the gap. Basis vectors and `1 + i·e_k` are tried before
/// random samples.
pub fn m_property_witness(alg: &Arc<Algebra>, p: &CMatrix, samples: usize, seed: u64) -> Option<(CVector, f64)> {
    let n = alg.dim();
    let mut xs: Vec<CVector> = (0..n).map(|i| Element::basis(alg, i).into_coeffs()).collect();
    if let Some(u) = alg.identity() {
        for i in 0..n {
            let mut v = u.clone();
            v[i] += C64::new(0.0, 1.0);
            xs.push(v);
        }
    }
    let mut rng = sample::rng(seed);
    xs.extend((0..samples).map(|_| sample::random_element(alg, &mut rng).into_coeffs()));
    xs.into_iter().find_map(|x| {
        let px = p * &x;
        let full = alg.norm(&x);
        let split = alg.norm(&px).max(alg.norm(&(&x - &px)));
        let gap = (full - split).abs();
        (gap > M_TOL * full.max(1.0)).then_some((x, gap))
    })
}

/// States of an l-infinity sum of closed-form l1 algebras: convex
/// combinations of summand states, with weight 0 or 1 on a summand in a
/// third of the draws each.
pub fn sample_states(alg: &Arc<Algebra>, n: usize, rng: &mut impl Rng) -> Result<Vec<CVector>> {
    (0..n).map(|_| sample_state(alg, rng)).collect()
}

fn sample_state(alg: &Arc<Algebra>, rng: &mut impl Rng) -> Result<CVector> {
    match alg.norm_kind() {
        NormKind::LinfSum { left, right } => {
            let t = match rng.random_range(0..3) {
                0 => 0.0,
                1 => 1.0,
                _ => rng.random_range(0.0..1.0),
            };
            let l = sample_state(left, rng)? * C64::from(t);
            let r = sample_state(right, rng)? * C64::from(1.0 - t);
            Ok(CVector::from_iterator(alg.dim(), l.iter().chain(r.iter()).copied()))
        }
        _ => {
            let zetas: Vec<C64> = (0..alg.dim())
                .map(|_| C64::from_polar(rng.random_range(0.0..=1.0f64).sqrt(), rng.random_range(0.0..2.0 * PI)))
                .collect();
            l1_state(&Element::zero(alg), &zetas)
        }
    }
}

fn lattice_result(alg: &Arc<Algebra>, p: CMatrix, exact: bool, expect: &CMatrix) -> Result<MIdealIdeal> {
    let j = MIdealIdeal::validate(alg, p, exact).map_err(|e| match e {
        Error::NotMIdeal(m) => Error::SupportNotIdempotent(m),
        other => other,
    })?;
    if !spans_equal(j.ideal.basis(), expect, Tolerances::DEFAULT.span_rank) {
        return Err(Error::SupportNotIdempotent("lattice ideal span mismatch".into()));
    }
    Ok(j)
}

fn same(a: &MIdealIdeal, b: &MIdealIdeal) -> Result<()> {
    if !Arc::ptr_eq(&a.alg, &b.alg) {
        return Err(Error::AlgebraMismatch);
    }
    Ok(())
}

/// `J₁ ∩ J₂`, with support `z₁z₂`.
pub fn mideal_meet(a: &MIdealIdeal, b: &MIdealIdeal) -> Result<MIdealIdeal> {
    same(a, b)?;
    let p = &a.p * &b.p;
    let expect = span_intersection(a.ideal.basis(), b.ideal.basis(), Tolerances::DEFAULT.ideal_rank);
    lattice_result(&a.alg, p, a.exact && b.exact, &expect)
}

/// `J₁ + … + J_m`, with support built from `z₁ + z₂ − z₁z₂`.
pub fn mideal_join(list: &[MIdealIdeal]) -> Result<MIdealIdeal> {
    let (first, rest) = list.split_first().ok_or_else(|| Error::InvalidInput("empty join".into()))?;
    let mut acc = first.clone();
    for b in rest {
        same(&acc, b)?;
        let p = &acc.p + &b.p - &acc.p * &b.p;
        let expect = span_sum(acc.ideal.basis(), b.ideal.basis(), Tolerances::DEFAULT.ideal_rank);
        acc = lattice_result(&acc.alg, p, acc.exact && b.exact, &expect)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone)]
pub struct QuotientElement {
    pub representative: Element,
    pub qnorm: f64,
}

/// Williams outer body of `W(Q(x))` from the quotient norm `λ ↦ ‖Q(x − λ1)‖`.
pub fn quotient_numrange(x: &Element, j: &MIdealIdeal, grid: WilliamsGrid) -> Result<NumericalRangeEstimate> {
    x.same_algebra(&j.z)?;
    let one = Element::one(&j.alg)?;
    let qx = j.complement(x);
    let q1 = j.complement(&one);
    let dist = |l: C64| (&qx - &q1.scale(l)).norm();
    Ok(williams_outer(dist, qx.norm(), grid))
}

/// Support values of `W(Q(x))` at `CHECK_ANGLES` directions from the
/// derivative of `t ↦ ‖Q(1 + t e^{-iθ} x)‖`. Empty when `J = A`.
fn quotient_support(x: &Element, j: &MIdealIdeal) -> Result<(Vec<f64>, Vec<f64>)> {
    let angles = angle_grid(CHECK_ANGLES);
    if j.quotient_is_zero() {
        return Ok((angles, Vec::new()));
    }
    let q1 = j.complement(&Element::one(&j.alg)?);
    let qx = j.complement(x);
    let values = angles
        .iter()
        .map(|&t| {
            let ux = qx.scale(C64::from_polar(1.0, -t));
            support_by_extrapolation(|s| (&q1 + &ux.scale_re(s)).norm()).value
        })
        .collect();
    Ok((angles, values))
}

fn element_support(a: &Element) -> Result<Vec<f64>> {
    angle_grid(CHECK_ANGLES).iter().map(|&t| Ok(numrange_support(a, t)?.value)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum LiftMode {
    ClosedForm,
    /// Runs `x_{n+1} = x_n − 2^{-n} P(x_n − α1)` for the given number of steps.
    PaperIteration {
        steps: usize,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationStep {
    pub n: usize,
    pub eps: f64,
    /// Whether `W(x_n)` lies in `α + (1 + ε)(W(Q(x)) − α)`.
    pub contained: bool,
    pub excess: f64,
}

#[derive(Debug, Clone)]
pub struct CsswLift {
    pub v: Element,
    pub alpha: C64,
    pub qnorm: f64,
    pub norm: f64,
    /// Largest excess of the support function of `W(v)` over that of `W(Q(x))`.
    pub containment_excess: f64,
    pub steps: Vec<IterationStep>,
    /// Distance between the last iterate and the closed form.
    pub closed_form_gap: Option<f64>,
}

/// Smallest slack of `α` against the support values, i.e. its distance to
/// the boundary when it lies inside.
fn interior_slack(angles: &[f64], values: &[f64], alpha: C64) -> f64 {
    angles.iter().zip(values).map(|(&t, &h)| h - project(alpha, t)).fold(f64::INFINITY, f64::min)
}

/// A lift `v` of `Q(x)` with `‖v‖ = ‖Q(x)‖` and `W(v) ⊆ W(Q(x))`, for `α`
/// interior to `W(Q(x))`.
pub fn cssw_lift(x: &Element, j: &MIdealIdeal, alpha: C64, mode: LiftMode) -> Result<CsswLift> {
    x.same_algebra(&j.z)?;
    let (angles, body) = quotient_support(x, j)?;
    let width = if body.is_empty() { 0.0 } else { min_width(&body) };
    if width < MIN_WIDTH {
        return Err(Error::EmptyInterior(width));
    }
    let slack = interior_slack(&angles, &body, alpha);
    if slack < INTERIOR_MARGIN {
        return Err(Error::AlphaNotInterior(slack));
    }
    let shifted = |y: &Element| -> Result<Element> { Ok(j.project(&y.plus_scalar(-alpha)?)) };
    let closed = x - &shifted(x)?;

    let mut steps = Vec::new();
    let mut closed_form_gap = None;
    if let LiftMode::PaperIteration { steps: n_steps } = mode {
        let mut xn = x.clone();
        for n in 0..=n_steps {
            let eps = 0.5f64.powi(n as i32);
            let hv = element_support(&xn)?;
            let excess = angles
                .iter()
                .zip(&body)
                .zip(&hv)
                .map(|((&t, &h), &g)| {
                    let a = project(alpha, t);
                    g - (a + (1.0 + eps) * (h - a))
                })
                .fold(f64::NEG_INFINITY, f64::max);
            steps.push(IterationStep { n, eps, contained: excess <= LIFT_SLACK, excess });
            if n < n_steps {
                xn = &xn - &shifted(&xn)?.scale_re(eps);
            }
        }
        closed_form_gap = Some(xn.dist(&closed));
    }

    let qnorm = j.qnorm(x);
    let norm = closed.norm();
    if (norm - qnorm).abs() > 1e-8 * qnorm.max(1.0) {
        return Err(Error::NotMIdeal(format!("lift norm {norm} differs from quotient norm {qnorm}")));
    }
    let hv = element_support(&closed)?;
    let containment_excess = hv.iter().zip(&body).map(|(g, h)| g - h).fold(f64::NEG_INFINITY, f64::max);
    if containment_excess > LIFT_SLACK {
        return Err(Error::NotMIdeal(format!("W(v) leaves W(Q(x)) by {containment_excess:.3e}")));
    }
    Ok(CsswLift { v: closed, alpha, qnorm, norm, containment_excess, steps, closed_form_gap })
}

/// Centroid of the quotient body. Lies in the interior whenever the body has one.
pub fn default_alpha(x: &Element, j: &MIdealIdeal) -> Result<C64> {
    let (angles, body) = quotient_support(x, j)?;
    if body.is_empty() {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok(body_polygon(&angles, &body).centroid())
}

#[derive(Debug, Clone)]
pub struct SegmentLift {
    pub a: Element,
    /// `None` in the point case.
    pub triangle: Option<[C64; 3]>,
    pub eps_tri: f64,
    pub halvings: usize,
}

/// Lift for a quotient range that is a point or a segment `K`. The segment
/// case adjoins a scalar summand carrying an apex `λ` at height `ε_tri`
/// over the midpoint of `K`, on the side of `K` facing right (or up for a
/// horizontal `K`), and lifts there.
pub fn segment_lift(x: &Element, j: &MIdealIdeal) -> Result<SegmentLift> {
    x.same_algebra(&j.z)?;
    let (angles, body) = quotient_support(x, j)?;
    if body.is_empty() || j.qnorm(x) < 1e-14 {
        return Ok(SegmentLift { a: j.complement(x), triangle: None, eps_tri: 0.0, halvings: 0 });
    }
    let qnorm = j.qnorm(x);
    let diameter = max_width(&body);
    if diameter < MIN_WIDTH {
        let k = angles.len() / 4;
        let mu = C64::new(body[0] - body[2 * k], body[k] - body[3 * k]) / 2.0;
        let a = &j.complement(x) + &j.z.scale(mu);
        return Ok(SegmentLift { a, triangle: None, eps_tri: 0.0, halvings: 0 });
    }
    let (e1, e2) = farthest_pair(&body_polygon(&angles, &body).vertices);
    let mid = (e1 + e2) / 2.0;
    let dir = (e2 - e1) / (e2 - e1).norm();
    let mut normal = dir * C64::new(0.0, 1.0);
    if normal.re < -1e-12 || (normal.re.abs() <= 1e-12 && normal.im < 0.0) {
        normal = -normal;
    }

    let (big, _) = linf_sum(&j.alg, &scalars())?;
    let n = j.alg.dim();
    let mut p = CMatrix::zeros(n + 1, n + 1);
    p.view_mut((0, 0), (n, n)).copy_from(&j.p);
    let jb = MIdealIdeal::from_projection(&big, p)?;

    let mut eps = EPS_TRI;
    for halvings in 0..=MAX_HALVINGS {
        let apex = mid + normal * eps;
        let coeffs = x.coeffs().clone().insert_row(n, apex);
        let xb = Element::new(&big, coeffs)?;
        let alpha = (e1 + e2 + apex) / 3.0;
        let lifted = cssw_lift(&xb, &jb, alpha, LiftMode::ClosedForm)?;
        let a = Element::new(&j.alg, lifted.v.coeffs().rows(0, n).clone_owned())?;
        if a.norm() <= qnorm + LIFT_SLACK {
            return Ok(SegmentLift { a, triangle: Some([e1, e2, apex]), eps_tri: eps, halvings });
        }
        eps /= 2.0;
    }
    Err(Error::TolNotReached { tol: LIFT_SLACK, err: eps, steps: MAX_HALVINGS })
}

/// Polygon through the support values, padded so rounding in thin bodies
/// cannot empty it.
fn body_polygon(angles: &[f64], body: &[f64]) -> Polygon {
    let padded: Vec<f64> = body.iter().map(|h| h + 1e-9).collect();
    Polygon::from_support(angles, &padded)
}

fn max_width(values: &[f64]) -> f64 {
    let n = values.len();
    (0..n / 2).map(|k| values[k] + values[k + n / 2]).fold(0.0, f64::max)
}

fn farthest_pair(pts: &[C64]) -> (C64, C64) {
    let mut best = (pts[0], pts[0], 0.0);
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let d = (a - b).norm();
            if d > best.2 {
                best = (a, b, d);
            }
        }
    }
    (best.0, best.1)
}

/// Accretive `a` with `Q(a) = Q(x)` and `‖a‖ = ‖Q(x)‖`, for `Q(x)` real positive.
pub fn real_positive_lift(x: &Element, j: &MIdealIdeal) -> Result<Element> {
    x.same_algebra(&j.z)?;
    let (angles, body) = quotient_support(x, j)?;
    if body.is_empty() || j.qnorm(x) < 1e-14 {
        return Ok(j.complement(x));
    }
    let min_re = -body[angles.len() / 2];
    let poly_min = body_polygon(&angles, &body).min_re() + 1e-9;
    let min_re = min_re.min(poly_min);
    if min_re < -1e-8 {
        return Err(Error::NotQuotientRealPositive(min_re));
    }
    let centroid = body_polygon(&angles, &body).centroid();
    // Bodies too thin to hold the centroid with the interior margin go
    // through the segment route, whose apex supplies an interior.
    let a = if min_width(&body) < MIN_WIDTH || interior_slack(&angles, &body, centroid) < INTERIOR_MARGIN {
        segment_lift(x, j)?.a
    } else {
        if centroid.re <= 0.0 {
            return Err(Error::NotQuotientRealPositive(centroid.re));
        }
        cssw_lift(x, j, centroid, LiftMode::ClosedForm)?.v
    };
    let report = cone_report(&a, LIFT_SLACK)?;
    if !report.accretive {
        return Err(Error::NotQuotientRealPositive(report.min_re));
    }
    Ok(a)
}
