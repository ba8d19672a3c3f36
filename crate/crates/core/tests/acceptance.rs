//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criterion 5 is known to fail. The printed half-cone criterion for l1(Z2)
//! is only necessary, and the gallery reports it as a failing claim with a
//! counterexample. The harness fails on any other outcome.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use banachlab::algebra::{linf_sum, unitize};
use banachlab::catalog::{
    group_algebra, lower_triangular_l1, pointwise_l1, scalars, semigroup_l1_4, truncated_polynomial,
};
use banachlab::gallery::run_gallery;
use banachlab::geometry::angle_grid;
use banachlab::ideals::{
    blend, cohen_factorize, comm_join, principal_right_ideal, support_join, ws_equivalences_report,
};
use banachlab::linalg::C64;
use banachlab::mideals::{cssw_lift, default_alpha, quotient_numrange, real_positive_lift, LiftMode, MIdealIdeal};
use banachlab::roots::{power_balakrishnan, power_series, principal_power, strsq_constant};
use banachlab::sample::{self, SEED};
use banachlab::states::{decompose_unital, min_re_abscissa, numrange_outer, numrange_support, WilliamsGrid};
use banachlab::{Algebra, Element, Error};
use rand::Rng;
use rayon::prelude::*;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

/// Criteria expected to fail, with the reason.
const KNOWN_RED: &[(usize, &str)] = &[(
    5,
    "the printed criterion |b|^2 - |b| <= Re a - |a|^2 for the half cone of l1(Z2) is necessary but not sufficient",
)];

fn root_algebras() -> Vec<Arc<Algebra>> {
    let mut algs: Vec<_> = (2..=8).map(group_algebra).collect();
    algs.push(semigroup_l1_4());
    algs
}

fn c1_root_identities() -> Outcome {
    let algs = root_algebras();
    let mut rng = sample::rng(SEED);
    let (mut series_worst, mut quad_worst) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let x = sample::random_in_f(&algs[i % algs.len()], &mut rng).unwrap();
        for n in [2u32, 3, 5] {
            let t = 1.0 / n as f64;
            let s = power_series(&x, t, 1e-12).unwrap().value;
            let q = power_balakrishnan(&x, t, 1e-9).unwrap().value;
            series_worst = series_worst.max(s.powi(n).unwrap().dist(&x));
            quad_worst = quad_worst.max(q.powi(n).unwrap().dist(&x));
        }
    }
    outcome(
        series_worst <= 1e-7 && quad_worst <= 1e-5,
        format!("max ‖(x^(1/n))^n − x‖: series {series_worst:.2e}, quadrature {quad_worst:.2e}"),
    )
}

fn c2_balakrishnan_bound() -> Outcome {
    let algs = root_algebras();
    let mut rng = sample::rng(SEED + 2);
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..200 {
        let x = sample::random_accretive(&algs[i % algs.len()], &mut rng, 1.0).unwrap();
        for alpha in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let p = principal_power(&x, alpha, 1e-10).unwrap().value;
            let bound = 2.0 * (alpha * PI).sin() / (PI * alpha * (1.0 - alpha)) * x.norm().powf(alpha);
            let excess = p.norm() - bound;
            worst = worst.max(excess);
            if excess > 1e-6 {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("{violations} violations, max ‖x^α‖ − bound {worst:.3e}"))
}

fn c3_root_defect_decay() -> Outcome {
    let algs = root_algebras();
    let ns: Vec<u32> = (1..=128).map(|k| 2 * k).collect();
    let mut rng = sample::rng(SEED + 3);
    let xs: Vec<Element> = (0..50).map(|i| sample::random_in_f(&algs[i % algs.len()], &mut rng).unwrap()).collect();
    let batch: Vec<f64> = ns
        .par_iter()
        .map(|&n| {
            xs.iter()
                .map(|x| {
                    let r = principal_power(x, 1.0 / n as f64, 1e-12).unwrap().value;
                    (&r * x - x).norm()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let rises = batch.windows(2).filter(|w| w[1] > w[0] + 1e-9).count();
    let last = *batch.last().unwrap();
    outcome(
        rises == 0 && last < 0.05,
        format!("batch max {:.3e} at n = 2, {last:.3e} at n = 256, {rises} increases", batch[0]),
    )
}

fn c4_commuting_lipschitz() -> Outcome {
    let algs: Vec<_> = vec![group_algebra(2), group_algebra(3), group_algebra(5), semigroup_l1_4()];
    let mut rng = sample::rng(SEED + 4);
    let mut violations = 0;
    let mut worst = 0.0f64;
    for i in 0..100 {
        let alg = &algs[i % algs.len()];
        let alpha = [0.25, 0.5, 0.75][i % 3];
        let a = sample::random_accretive(alg, &mut rng, 1.0).unwrap();
        let b = sample::random_accretive(alg, &mut rng, 1.0).unwrap();
        let r = rng.random::<f64>();
        let c = sample::random_on_sphere(alg, &mut rng, r);
        let k = strsq_constant(alpha);
        let pa = principal_power(&a, alpha, 1e-11).unwrap().value;
        let pb = principal_power(&b, alpha, 1e-11).unwrap().value;
        let lhs = (&(&pa - &pb) * &c).norm();
        let rhs = k * (&(&a - &b) * &c).norm().powf(alpha);
        if lhs > rhs + 1e-9 {
            violations += 1;
        }
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        }
    }
    outcome(violations == 0, format!("{violations} violations, largest ratio to K‖(a − b)c‖^α {worst:.3}"))
}

fn c5_gallery() -> Outcome {
    let report = run_gallery(None).unwrap();
    let failing: Vec<String> = report
        .cases
        .iter()
        .flat_map(|c| c.claims.iter().filter(|cl| !cl.passed).map(move |cl| format!("{}: {}", c.id, cl.description)))
        .collect();
    let total: usize = report.cases.iter().map(|c| c.claims.len()).sum();
    outcome(failing.is_empty(), format!("{} of {total} claims pass; failing: {failing:?}", total - failing.len()))
}

fn gallery_failure_is_the_documented_one() -> bool {
    let report = run_gallery(Some("z2-projection")).unwrap();
    let case = &report.cases[0];
    let failing: Vec<&str> = case.claims.iter().filter(|c| !c.passed).map(|c| c.description.as_str()).collect();
    let others = run_gallery(None).unwrap().cases.iter().filter(|c| c.id != "z2-projection").all(|c| c.passed);
    others && failing.len() == 1 && failing[0].contains("as printed")
}

/// `Σ t_k (1 − ζ^k g^k)` in l1(Zn) with `Σ t_k = 1` and `ζ` an n-th root of
/// unity: a convex combination of points of 𝔉_A, all killed by the character
/// with `χ(g) = ζ^{-1}`, so it is accretive and singular.
fn singular_group_element(n: usize, rng: &mut impl Rng) -> Element {
    let kernel = rng.random_range(0..n);
    singular_at(n, kernel, rng)
}

/// Vanishes at the character `g ↦ e^{2πi·kernel/n}`.
fn singular_at(n: usize, kernel: usize, rng: &mut impl Rng) -> Element {
    let alg = group_algebra(n);
    let zeta = C64::from_polar(1.0, 2.0 * PI * kernel as f64 / n as f64);
    let terms = rng.random_range(1..n);
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = weights.iter().sum();
    let mut coeffs = vec![C64::new(0.0, 0.0); n];
    for (k, w) in weights.iter().enumerate() {
        coeffs[0] += w / total;
        coeffs[k + 1] -= zeta.powu(k as u32 + 1) * (w / total);
    }
    Element::from_slice(&alg, &coeffs).unwrap()
}

/// Singular accretive elements with a nontrivial support idempotent.
fn singular_accretive(i: usize, rng: &mut impl Rng) -> Element {
    match i % 3 {
        0 => singular_group_element(rng.random_range(2..=6), rng),
        1 => {
            let lt = lower_triangular_l1();
            let (s, t) = (rng.random::<f64>(), rng.random::<f64>());
            Element::from_reals(&lt, &[s + t, t, 0.0]).unwrap()
        }
        _ => {
            let a = semigroup_l1_4();
            let t = rng.random::<f64>() + 0.1;
            Element::from_reals(&a, &[t, -t, 0.0, 0.0]).unwrap()
        }
    }
}

fn c6_ws_equivalences() -> Outcome {
    let algs = [semigroup_l1_4(), group_algebra(2), truncated_polynomial(8), lower_triangular_l1(), group_algebra(3)];
    let mut rng = sample::rng(SEED + 6);
    let mut bad = Vec::new();
    let mut singular = 0;
    let mut min_gap = f64::INFINITY;
    for i in 0..100 {
        // Half the samples are singular, so that s(x) ≠ 1 is exercised.
        let x = if i % 2 == 0 {
            sample::random_accretive(&algs[(i / 2) % algs.len()], &mut rng, 1.0).unwrap()
        } else {
            singular_accretive(i / 2, &mut rng)
        };
        let r = ws_equivalences_report(&x).unwrap();
        if !r.support_is_identity {
            singular += 1;
            min_gap = min_gap.min(r.spectral_gap);
        }
        if !r.all || (!r.support_is_identity && r.spectral_gap < 1e-6) {
            bad.push(format!("{} {:?}", x.algebra().label(), r));
        }
    }
    outcome(
        bad.is_empty() && singular >= 40,
        format!(
            "{} failures; {singular} samples with s(x) ≠ 1, smallest gap among them {min_gap:.3e} {bad:?}",
            bad.len()
        ),
    )
}

fn c7_cohen() -> Outcome {
    let eps = 0.1;
    let mut rng = sample::rng(SEED + 7);
    let mut problems = Vec::new();
    let (mut worst_res, mut worst_dist, mut worst_f) = (0.0f64, 0.0f64, f64::NEG_INFINITY);
    let unitized = unitize(&pointwise_l1(3)).unwrap().algebra().clone();
    for i in 0..20 {
        // J = eA for an idempotent e ∈ 𝔉_A; the pool holds perturbations of e and decoys.
        let (alg, e) = match i % 4 {
            0 => {
                let a = semigroup_l1_4();
                let e = Element::from_reals(&a, &[1.0, -1.0, 0.0, 0.0]).unwrap();
                (a, e)
            }
            1 => {
                let a = group_algebra(4);
                let e = Element::from_reals(&a, &[0.5, 0.0, 0.5, 0.0]).unwrap();
                (a, e)
            }
            2 => {
                let a = unitized.clone();
                let d = a.dim();
                let mut v = vec![0.0; d];
                v[(i / 4) % (d - 1)] = 1.0;
                (a.clone(), Element::from_reals(&a, &v).unwrap())
            }
            _ => {
                let a = group_algebra(3);
                (a.clone(), Element::one(&a).unwrap())
            }
        };
        if e.one_minus().unwrap().norm() > 1.0 + 1e-12 || e.idempotent_defect_norm() > 1e-12 {
            problems.push(format!("instance {i}: e is not an idempotent in 𝔉_A"));
            continue;
        }
        let targets: Vec<Element> = (0..3).map(|_| &e * &sample::random_element(&alg, &mut rng)).collect();
        let mut pool = vec![sample::random_in_f(&alg, &mut rng).unwrap()];
        for eta in [1e-9, 1e-7] {
            let g = sample::random_in_f(&alg, &mut rng).unwrap();
            pool.push(blend(&e, &g, eta));
        }
        match cohen_factorize(&targets, &pool, eps) {
            Ok(f) => {
                worst_f = worst_f.max(f.z.one_minus().unwrap().norm() - 1.0);
                for ((x, w), r) in targets.iter().zip(&f.factors).zip(&f.residuals) {
                    // Recomputed rather than read from the report.
                    let res = (&f.z * w - x).norm();
                    worst_res = worst_res.max(res.max(*r));
                    worst_dist = worst_dist.max(w.dist(x));
                }
            }
            Err(err) => problems.push(format!("instance {i}: {err}")),
        }
    }
    let lt = lower_triangular_l1();
    let e =
        vec![Element::from_reals(&lt, &[1.0, 1.0, 0.0]).unwrap(), Element::from_reals(&lt, &[1.0, -1.0, 0.0]).unwrap()];
    let exhausted = matches!(cohen_factorize(&e, &e, eps), Err(Error::PoolExhausted { .. }));
    let passed = problems.is_empty() && worst_f <= 1e-8 && worst_res <= 1e-9 && worst_dist <= 2.0 * eps && exhausted;
    outcome(
        passed,
        format!(
            "‖1 − z‖ − 1 ≤ {worst_f:.2e}, residual {worst_res:.2e}, ‖w − x‖ ≤ {worst_dist:.3e}, \
             lower-triangular pool exhausted: {exhausted} {problems:?}"
        ),
    )
}

fn c8_williams() -> Outcome {
    let z2 = group_algebra(2);
    let p = Element::from_reals(&z2, &[0.5, 0.5]).unwrap();
    let center = C64::new(0.5, 0.0);
    let hausdorff = |grid: WilliamsGrid| {
        // Support functions of convex bodies: the sup gap is the Hausdorff distance.
        let poly = numrange_outer(&p, grid).unwrap().polygon();
        angle_grid(1440)
            .iter()
            .map(|&t| (poly.support(t) - (center.re * t.cos() + center.im * t.sin() + 0.5)).abs())
            .fold(0.0, f64::max)
    };
    let coarse = hausdorff(WilliamsGrid::default());
    let fine = hausdorff(WilliamsGrid::default().refined().refined());
    outcome(coarse <= 0.02 && fine <= 0.005, format!("Hausdorff distance {coarse:.4e} (default), {fine:.4e} (4x)"))
}

/// `B ⊕∞ C` with `J = B ⊕ 0` and the quotient summand `C`.
fn sum_instance(i: usize, quotients: &[Arc<Algebra>]) -> (Arc<Algebra>, MIdealIdeal, Arc<Algebra>) {
    let ideals = [scalars(), group_algebra(2), group_algebra(3)];
    let b = &ideals[i % ideals.len()];
    let c = &quotients[(i / ideals.len()) % quotients.len()];
    let (a, j) = linf_sum(b, c).unwrap();
    (a, j, c.clone())
}

fn quotient_part(x: &Element, c: &Arc<Algebra>) -> Element {
    let off = x.dim() - c.dim();
    Element::from_slice(c, &x.coeffs().as_slice()[off..]).unwrap()
}

fn c9_cssw() -> Outcome {
    let quotients = [group_algebra(2), group_algebra(3), semigroup_l1_4(), truncated_polynomial(3)];
    let mut rng = sample::rng(SEED + 9);
    let mut problems = Vec::new();
    let (mut norm_gap, mut q_gap, mut excess, mut mode_gap) = (0.0f64, 0.0f64, f64::NEG_INFINITY, 0.0f64);
    for i in 0..50 {
        let (a, j, c) = sum_instance(i, &quotients);
        let x = sample::random_element(&a, &mut rng);
        let centroid = default_alpha(&x, &j).unwrap();
        let body = quotient_numrange(&x, &j, WilliamsGrid::default()).unwrap().polygon();
        let v = body.vertices[rng.random_range(0..body.vertices.len())];
        let alpha = centroid + (v - centroid) * (0.5 * rng.random::<f64>());
        let closed = match cssw_lift(&x, &j, alpha, LiftMode::ClosedForm) {
            Ok(l) => l,
            Err(e) => {
                problems.push(format!("instance {i}: {e}"));
                continue;
            }
        };
        let iter = cssw_lift(&x, &j, alpha, LiftMode::PaperIteration { steps: 40 }).unwrap();
        // The quotient is the C summand, independently of the projection machinery.
        let xc = quotient_part(&x, &c);
        norm_gap = norm_gap.max((closed.v.norm() - xc.norm()).abs());
        q_gap = q_gap.max(quotient_part(&closed.v, &c).dist(&xc));
        mode_gap = mode_gap.max(closed.v.dist(&iter.v));
        for t in angle_grid(72) {
            let hv = numrange_support(&closed.v, t).unwrap().value;
            let hq = numrange_support(&xc, t).unwrap().value;
            excess = excess.max(hv - hq);
        }
    }
    outcome(
        problems.is_empty() && norm_gap <= 1e-8 && q_gap == 0.0 && excess <= 1e-6 && mode_gap <= 1e-7,
        format!(
            "|‖v‖ − ‖Q(x)‖| ≤ {norm_gap:.2e}, quotient gap {q_gap:.1e}, support excess {excess:.2e}, \
             closed form vs iteration {mode_gap:.2e} {problems:?}"
        ),
    )
}

fn c10_real_positive_lift() -> Outcome {
    let (cc, _) = linf_sum(&scalars(), &scalars()).unwrap();
    let quotients = [group_algebra(2), semigroup_l1_4(), scalars(), cc];
    let mut rng = sample::rng(SEED + 10);
    let mut problems = Vec::new();
    let (mut min_re, mut q_gap, mut norm_gap) = (f64::INFINITY, 0.0f64, 0.0f64);
    for i in 0..30 {
        let (a, j, c) = sum_instance(i, &quotients);
        let xc = sample::random_accretive(&c, &mut rng, 2.0).unwrap();
        let mut coeffs: Vec<C64> = sample::random_element(&a, &mut rng).coeffs().iter().copied().collect();
        let off = a.dim() - c.dim();
        coeffs[off..].copy_from_slice(xc.coeffs().as_slice());
        let x = Element::from_slice(&a, &coeffs).unwrap();
        match real_positive_lift(&x, &j) {
            Ok(l) => {
                min_re = min_re.min(min_re_abscissa(&l).unwrap().value);
                q_gap = q_gap.max(quotient_part(&l, &c).dist(&xc));
                norm_gap = norm_gap.max((l.norm() - xc.norm()).abs());
            }
            Err(e) => problems.push(format!("instance {i}: {e}")),
        }
    }
    outcome(
        problems.is_empty() && min_re >= -1e-6 && q_gap == 0.0 && norm_gap <= 1e-6,
        format!("min Re W(a) ≥ {min_re:.3e}, quotient gap {q_gap:.1e}, norm gap {norm_gap:.2e} {problems:?}"),
    )
}

fn c11_commutative_join() -> Outcome {
    let algs = [group_algebra(2), group_algebra(4), semigroup_l1_4(), truncated_polynomial(8)];
    let mut rng = sample::rng(SEED + 11);
    let mut problems = Vec::new();
    let (mut idem, mut dom, mut dist) = (0.0f64, 0.0f64, f64::NEG_INFINITY);
    let mut proper = 0;
    for i in 0..100 {
        let (x, y) = if i % 2 == 0 {
            let alg = &algs[(i / 2) % algs.len()];
            (sample::random_in_f(alg, &mut rng).unwrap(), sample::random_in_f(alg, &mut rng).unwrap())
        } else {
            // Singular pairs in the same l1(Zn); half share a kernel, so the
            // join stays proper, and the rest usually join to 1.
            let n = rng.random_range(2..=6);
            let kernel = rng.random_range(0..n);
            let x = singular_at(n, kernel, &mut rng);
            let other = if i % 4 == 1 { kernel } else { rng.random_range(0..n) };
            let y = singular_at(n, other, &mut rng).rebind(x.algebra()).unwrap();
            (x, y)
        };
        let alg = x.algebra().clone();
        let to_one = (&x + &y).scale_re(0.5).one_minus().unwrap().norm();
        if to_one.is_nan() || to_one > 1.0 + 1e-12 {
            problems.push(format!("{}: midpoint left 𝔉_A", alg.label()));
        }
        let m = (&x + &y).scale_re(0.5);
        let sum = principal_right_ideal(&x).sum(&principal_right_ideal(&y));
        if !principal_right_ideal(&m).same_span(&sum) {
            problems.push(format!("{}: ((x+y)/2)A ≠ xA + yA", alg.label()));
        }
        if let Err(e) = comm_join(&x, &y) {
            problems.push(format!("{}: comm_join {e}", alg.label()));
        }
        match support_join(&x, &y) {
            Ok(j) => {
                if j.dist_one > 1e-9 {
                    proper += 1;
                }
                idem = idem.max(j.idempotent_defect);
                dom = dom.max(j.domination_defect);
                dist = dist.max(j.dist_one - 1.0);
            }
            Err(e) => problems.push(format!("{}: support_join {e}", alg.label())),
        }
    }
    outcome(
        problems.is_empty() && idem <= 1e-7 && dom <= 1e-7 && dist <= 1e-8 && proper >= 20,
        format!(
            "{} failures; {proper} joins with s ≠ 1; idempotent defect {idem:.2e}, domination {dom:.2e}, \
             ‖1 − s‖ − 1 ≤ {dist:.2e} {problems:?}",
            problems.len()
        ),
    )
}

fn c12_unital_decomposition() -> Outcome {
    let algs = [group_algebra(3), semigroup_l1_4(), truncated_polynomial(8), lower_triangular_l1()];
    let mut rng = sample::rng(SEED + 12);
    let (mut cone, mut recon) = (f64::NEG_INFINITY, 0.0f64);
    for i in 0..100 {
        let alg = &algs[i % algs.len()];
        let r = rng.random::<f64>() * 0.999;
        let x = sample::random_on_sphere(alg, &mut rng, r);
        let (a, b) = decompose_unital(&x).unwrap();
        for p in [&a, &b] {
            cone = cone.max(p.scale_re(2.0).one_minus().unwrap().norm() - 1.0);
        }
        recon = recon.max((&a - &b).dist(&x));
    }
    outcome(cone <= 1e-10 && recon <= 1e-14, format!("max ‖1 − 2a‖ − 1 = {cone:.2e}, reconstruction error {recon:.1e}"))
}

type Criterion = fn() -> Outcome;

#[test]
fn acceptance() {
    let criteria: Vec<(usize, &str, Criterion)> = vec![
        (1, "root identities", c1_root_identities),
        (2, "fractional power norm bound", c2_balakrishnan_bound),
        (3, "root defect decay", c3_root_defect_decay),
        (4, "commuting power Lipschitz bound", c4_commuting_lipschitz),
        (5, "regression gallery", c5_gallery),
        (6, "pseudo-invertibility equivalences", c6_ws_equivalences),
        (7, "Cohen factorization", c7_cohen),
        (8, "Williams body convergence", c8_williams),
        (9, "norm-preserving lifts", c9_cssw),
        (10, "real-positive lifts", c10_real_positive_lift),
        (11, "commutative joins", c11_commutative_join),
        (12, "unital decomposition", c12_unital_decomposition),
    ];
    let results: Vec<(usize, &str, Outcome, f64)> = criteria
        .par_iter()
        .map(|&(k, name, f)| {
            let start = Instant::now();
            let o = f();
            (k, name, o, start.elapsed().as_secs_f64())
        })
        .collect();
    let mut unexpected = Vec::new();
    for (k, name, o, secs) in &results {
        let known = KNOWN_RED.iter().find(|(j, _)| j == k);
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status} {k:>2} {name} [{secs:.1}s]: {}", o.detail);
        match (o.passed, known) {
            (true, None) => {}
            (false, Some((_, why))) => println!("        known failure: {why}"),
            (false, None) => unexpected.push(format!("criterion {k} failed")),
            (true, Some(_)) => unexpected.push(format!("criterion {k} passed but is listed as a known failure")),
        }
    }
    assert!(gallery_failure_is_the_documented_one(), "gallery failures differ from the documented one");
    assert!(unexpected.is_empty(), "{unexpected:?}");
}
