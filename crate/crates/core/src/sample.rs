//! Seeded random elements for property checks and the gallery.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, Element};
use crate::error::Result;
use crate::linalg::{CVector, C64};

pub const SEED: u64 = 0x5EED;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Coefficients uniform in the unit square of `C`.
pub fn random_element(alg: &Arc<Algebra>, rng: &mut impl Rng) -> Element {
    let v = CVector::from_fn(alg.dim(), |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    Element::new(alg, v).expect("length matches")
}

/// Random element of norm exactly `r`.
pub fn random_on_sphere(alg: &Arc<Algebra>, rng: &mut impl Rng, r: f64) -> Element {
    loop {
        let y = random_element(alg, rng);
        let n = y.norm();
        if n > 1e-3 {
            return y.scale_re(r / n);
        }
    }
}

/// Random `x = 1 − y` with `‖y‖ ≤ 1`. A quarter of the samples sit on the
/// boundary with `y` a unimodular multiple of a norm-one basis element, which
/// produces non-invertible elements in group algebras.
pub fn random_in_f(alg: &Arc<Algebra>, rng: &mut impl Rng) -> Result<Element> {
    let one = Element::one(alg)?;
    let y = if rng.random_bool(0.25) {
        let j = rng.random_range(0..alg.dim());
        let e = Element::basis(alg, j);
        let phase = C64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
        e.scale(phase / C64::from(e.norm()))
    } else {
        let r = rng.random::<f64>().sqrt();
        random_on_sphere(alg, rng, r)
    };
    Ok(&one - &y)
}

/// Random accretive element `t(1 − y)`, `‖y‖ ≤ 1`, rescaled to norm at most `bound`.
pub fn random_accretive(alg: &Arc<Algebra>, rng: &mut impl Rng, bound: f64) -> Result<Element> {
    let x = random_in_f(alg, rng)?;
    let n = x.norm();
    if n == 0.0 {
        return Ok(x);
    }
    let target = bound * rng.random::<f64>().max(1e-3);
    Ok(x.scale_re(target / n))
}
