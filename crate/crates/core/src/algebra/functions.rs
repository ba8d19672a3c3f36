use super::{unitize, Element};
use crate::error::{Error, Result};
use crate::linalg::{inverse_condition, lu_solve, C64};
use crate::tol::Tolerances;

/// Inverse in a unital algebra, via the left regular representation.
pub fn invert(a: &Element) -> Result<Element> {
    let alg = a.algebra();
    let one = alg.identity_or_err()?;
    let tol = Tolerances::DEFAULT;
    let l = a.left_matrix();
    let cond = inverse_condition(&l);
    if cond < tol.singular_rel {
        return Err(Error::Singular(cond));
    }
    let y = lu_solve(&l, one).ok_or(Error::Singular(0.0))?;
    let y = Element::from_vec_unchecked(alg, y);
    let scale = 1f64.max(a.max_abs() * y.max_abs());
    let right = (a * &y - Element::one(alg)?).max_abs();
    let left = (&y * a - Element::one(alg)?).max_abs();
    if right.max(left) > tol.inverse_check * scale {
        return Err(Error::Singular(cond));
    }
    Ok(y)
}

/// `(λ1 + a)^{-1}` in the unitization of the ambient algebra. When the
/// ambient is already unital the result lives there.
pub fn resolvent(a: &Element, lambda: C64) -> Result<Element> {
    if a.algebra().is_unital() {
        return invert(&a.plus_scalar(lambda)?);
    }
    let u = unitize(a.algebra())?;
    invert(&u.element(a, lambda)?)
}

/// `exp(−t·a)` by scaling and squaring of the Taylor series.
pub fn exp_scaled(a: &Element, t: f64) -> Result<Element> {
    let one = Element::one(a.algebra())?;
    let b = a.scale_re(-t);
    let n = b.norm();
    let squarings = if n > 0.5 { (n / 0.5).log2().ceil() as u32 } else { 0 };
    let b = b.scale_re(0.5f64.powi(squarings as i32));
    let mut sum = one.clone();
    let mut term = one;
    for k in 1..64 {
        term = (&term * &b).scale_re(1.0 / k as f64);
        sum = &sum + &term;
        if term.norm() <= 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{dual_numbers, group_algebra, semigroup_l1_4};
    use crate::linalg::c;

    // ℓ¹(Z_2) diagonalizes by (a, b) ↦ (a + b, a − b).
    fn gelfand_z2(x: &Element) -> (C64, C64) {
        let v = x.coeffs();
        (v[0] + v[1], v[0] - v[1])
    }

    fn from_gelfand_z2(alg: &std::sync::Arc<super::super::Algebra>, g: (C64, C64)) -> Element {
        Element::from_slice(alg, &[(g.0 + g.1) / 2.0, (g.0 - g.1) / 2.0]).unwrap()
    }

    #[test]
    fn invert_identity() {
        let a = group_algebra(3);
        let one = Element::one(&a).unwrap();
        assert!(invert(&one).unwrap().dist(&one) < 1e-15);
    }

    #[test]
    fn invert_in_z2_matches_gelfand() {
        let a = group_algebra(2);
        let x = Element::from_reals(&a, &[2.0, 1.0]).unwrap();
        let (g0, g1) = gelfand_z2(&x);
        let expect = from_gelfand_z2(&a, (1.0 / g0, 1.0 / g1));
        let y = invert(&x).unwrap();
        assert!(y.dist(&expect) < 1e-14);
        assert!((y.coeffs()[0].re - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn nilpotent_is_singular() {
        let a = dual_numbers();
        let n = Element::basis(&a, 1);
        assert!(matches!(invert(&n), Err(Error::Singular(_))));
    }

    #[test]
    fn resolvent_of_zero_and_of_projection() {
        let a = group_algebra(2);
        let zero = Element::zero(&a);
        let r = resolvent(&zero, C64::from(1.0)).unwrap();
        assert!(r.dist(&Element::one(&a).unwrap()) < 1e-15);

        let p = Element::from_reals(&a, &[0.5, 0.5]).unwrap();
        let (g0, g1) = gelfand_z2(&p);
        let expect = from_gelfand_z2(&a, (1.0 / (1.0 + g0), 1.0 / (1.0 + g1)));
        let r = resolvent(&p, C64::from(1.0)).unwrap();
        assert!(r.dist(&expect) < 1e-14);
        assert!(r.dist(&Element::from_reals(&a, &[0.75, -0.25]).unwrap()) < 1e-14);
    }

    #[test]
    fn resolvent_bound_for_accretive_element() {
        // (1, 0.5 + 0.3i) is accretive in ℓ¹(Z_2) since |b| ≤ Re a.
        let a = group_algebra(2);
        let x = Element::from_slice(&a, &[c(1.0, 0.2), c(0.5, 0.3)]).unwrap();
        let r = resolvent(&x, C64::from(10.0)).unwrap();
        assert!(r.norm() <= 0.1 + 1e-9);
    }

    #[test]
    fn resolvent_in_non_unital_algebra_lives_in_unitization() {
        let a = crate::catalog::pointwise_l1(3);
        let x = Element::from_reals(&a, &[1.0, 0.5, 0.0]).unwrap();
        let r = resolvent(&x, C64::from(1.0)).unwrap();
        // Pointwise: (1 + x_j)^{-1} on each coordinate and 1 elsewhere.
        let expect = [0.5, 1.0 / 1.5, 1.0];
        for (j, e) in expect.iter().enumerate() {
            let ej = Element::basis(&a, j);
            let u = super::super::unitize(&a).unwrap();
            let v = &r * &u.embed(&ej).unwrap();
            assert!((v.coeffs()[j].re - e).abs() < 1e-14);
        }
    }

    #[test]
    fn exp_of_zero_and_idempotent() {
        let a = semigroup_l1_4();
        let one = Element::one(&a).unwrap();
        assert!(exp_scaled(&Element::zero(&a), 5.0).unwrap().dist(&one) < 1e-15);
        let p = Element::from_reals(&a, &[1.0, -1.0, 0.0, 0.0]).unwrap();
        for t in [0.1f64, 1.0, 7.5] {
            let expect = &one - &p.scale_re(1.0 - (-t).exp());
            assert!(exp_scaled(&p, t).unwrap().dist(&expect) < 1e-12);
        }
    }

    #[test]
    fn exp_matches_gelfand_in_z2() {
        let a = group_algebra(2);
        let x = Element::from_slice(&a, &[c(3.0, -1.0), c(1.5, 2.0)]).unwrap();
        let (g0, g1) = gelfand_z2(&x);
        let t = 2.0;
        let expect = from_gelfand_z2(&a, ((-g0 * t).exp(), (-g1 * t).exp()));
        let got = exp_scaled(&x, t).unwrap();
        assert!(got.dist(&expect) <= 1e-10 * expect.norm().max(1.0));
    }
}
