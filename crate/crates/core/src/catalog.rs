//! Builders for the small algebras used throughout the gallery and tests.
//! All tables are exact small integers.

use std::sync::Arc;

use crate::algebra::{build_algebra, Algebra, MultTable, NormKind, OpDomain};
use crate::linalg::{CMatrix, ONE};

fn build(table: MultTable, kind: NormKind, label: &str) -> Arc<Algebra> {
    build_algebra(table, kind, None, label).expect("catalog tables are valid")
}

/// `ℓ¹(Z_n)` with convolution.
pub fn group_algebra(n: usize) -> Arc<Algebra> {
    let t = MultTable::from_fn(n, |i, j| vec![((i + j) % n, ONE)]);
    build(t, NormKind::l1(), &format!("l1(Z{n})"))
}

/// `ℓ¹(Z_2)` with weights `(1, w)`, `w ≥ 1`.
pub fn weighted_group_algebra_z2(w: f64) -> Arc<Algebra> {
    let t = MultTable::from_fn(2, |i, j| vec![((i + j) % 2, ONE)]);
    build(t, NormKind::L1 { weights: Some(vec![1.0, w]) }, &format!("l1(Z2, w={w})"))
}

/// The semigroup algebra on `{1, a, b, c}` where `a, b, c` are idempotent and
/// `ab = ac = bc = c`. Coordinates are in that order.
pub fn semigroup_l1_4() -> Arc<Algebra> {
    // Generators as bitmasks: 1 = 0b00, a = 0b01, b = 0b10, c = 0b11; product is bitwise or.
    let t = MultTable::from_fn(4, |i, j| vec![(i | j, ONE)]);
    build(t, NormKind::l1(), "l1_4 semigroup")
}

/// Lower triangular 2×2 matrices acting on `ℓ¹_2`, basis `E11, E21, E22`.
pub fn lower_triangular_l1() -> Arc<Algebra> {
    let unit = |r: usize, c: usize| {
        let mut m = CMatrix::zeros(2, 2);
        m[(r, c)] = ONE;
        m
    };
    let rep = vec![unit(0, 0), unit(1, 0), unit(1, 1)];
    let mut t = MultTable::new(3);
    t.add(0, 0, 0, ONE) // E11 E11
        .add(1, 0, 1, ONE) // E21 E11
        .add(2, 1, 1, ONE) // E22 E21
        .add(2, 2, 2, ONE); // E22 E22
    build(t, NormKind::OpNorm { domain: OpDomain::L1, weights: None, rep }, "lower triangular on l1_2")
}

/// Full matrix algebra `M_n` acting on the given coordinate space, basis `E_ij` row-major.
pub fn matrix_algebra(n: usize, domain: OpDomain) -> Arc<Algebra> {
    let rep = (0..n * n)
        .map(|k| {
            let mut m = CMatrix::zeros(n, n);
            m[(k / n, k % n)] = ONE;
            m
        })
        .collect();
    let t = MultTable::from_fn(n * n, |a, b| {
        let (i, j) = (a / n, a % n);
        let (k, l) = (b / n, b % n);
        if j == k {
            vec![(i * n + l, ONE)]
        } else {
            vec![]
        }
    });
    build(t, NormKind::OpNorm { domain, weights: None, rep }, &format!("M{n} on {domain:?}"))
}

/// `ℓ¹_n` with pointwise product. Its identity has norm `n`.
pub fn pointwise_l1(n: usize) -> Arc<Algebra> {
    let t = MultTable::from_fn(n, |i, j| if i == j { vec![(i, ONE)] } else { vec![] });
    build(t, NormKind::l1(), &format!("pointwise l1_{n}"))
}

/// Polynomials in `t` truncated at degree `k`, convolution product, l1 norm.
pub fn truncated_polynomial(k: usize) -> Arc<Algebra> {
    let t = MultTable::from_fn(k, |i, j| if i + j < k { vec![(i + j, ONE)] } else { vec![] });
    build(t, NormKind::l1(), &format!("l1(N) mod t^{k}"))
}

/// The complex numbers.
pub fn scalars() -> Arc<Algebra> {
    let mut t = MultTable::new(1);
    t.add(0, 0, 0, ONE);
    build(t, NormKind::l1(), "C")
}

/// `span{1, n}` with `n² = 0`, l1 norm.
pub fn dual_numbers() -> Arc<Algebra> {
    let mut t = MultTable::new(2);
    t.add(0, 0, 0, ONE).add(0, 1, 1, ONE).add(1, 0, 1, ONE);
    build(t, NormKind::l1(), "span{1, n}")
}

/// Looks a catalog algebra up by name, as used by the CLI.
pub fn by_name(name: &str) -> Option<Arc<Algebra>> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let n = |default: usize| arg.map_or(Some(default), |a| a.parse().ok());
    Some(match head {
        "group" => group_algebra(n(2)?.clamp(1, 64)),
        "semigroup4" => semigroup_l1_4(),
        "lower-triangular" => lower_triangular_l1(),
        "pointwise" => pointwise_l1(n(3)?.clamp(1, 64)),
        "truncated" => truncated_polynomial(n(8)?.clamp(1, 64)),
        "scalars" => scalars(),
        "dual" => dual_numbers(),
        "m2" => matrix_algebra(2, OpDomain::L2),
        _ => return None,
    })
}

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] =
    &["group[:n]", "semigroup4", "lower-triangular", "pointwise[:n]", "truncated[:k]", "scalars", "dual", "m2"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{multiply, Element};
    use crate::linalg::{c, CVector, C64};
    use crate::Error;

    /// Direct expansion over the semigroup table, independent of the structure tensor.
    fn semigroup_product(x: &[f64; 4], y: &[f64; 4]) -> [f64; 4] {
        let word = |i: usize| -> &'static str { ["", "a", "b", "ab"][i] };
        let index = |w: String| -> usize {
            let has_a = w.contains('a');
            let has_b = w.contains('b');
            match (has_a, has_b) {
                (false, false) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (true, true) => 3,
            }
        };
        let mut out = [0.0; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[index(format!("{}{}", word(i), word(j)))] += x[i] * y[j];
            }
        }
        out
    }

    #[test]
    fn z2_identity_and_convolution() {
        let a = group_algebra(2);
        let x = Element::from_slice(&a, &[c(0.3, 1.0), c(-2.0, 0.5)]).unwrap();
        let one = Element::from_reals(&a, &[1.0, 0.0]).unwrap();
        assert!(multiply(&one, &x).unwrap().dist(&x) == 0.0);
        let (p, q, r, s) = (c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0), c(2.0, -1.0));
        let ab = Element::from_slice(&a, &[p, q]).unwrap();
        let cd = Element::from_slice(&a, &[r, s]).unwrap();
        let expect = Element::from_slice(&a, &[p * r + q * s, p * s + q * r]).unwrap();
        assert!((&ab * &cd).dist(&expect) < 1e-14);
    }

    #[test]
    fn multiply_rejects_foreign_elements() {
        let a = group_algebra(2);
        let b = group_algebra(2);
        let err = multiply(&Element::basis(&a, 0), &Element::basis(&b, 0)).unwrap_err();
        assert_eq!(err, Error::AlgebraMismatch);
    }

    #[test]
    fn semigroup_table_matches_word_expansion() {
        let a = semigroup_l1_4();
        let samples = [[1.0, -1.0, -1.0, 1.0], [0.5, 2.0, -0.25, 3.0], [0.0, 1.0, 0.0, 0.0]];
        for x in &samples {
            for y in &samples {
                let got = &Element::from_reals(&a, x).unwrap() * &Element::from_reals(&a, y).unwrap();
                let expect = semigroup_product(x, y);
                for (g, e) in got.coeffs().iter().zip(expect) {
                    assert!((g.re - e).abs() < 1e-14);
                }
            }
        }
        let d = Element::from_reals(&a, &[1.0, -1.0, -1.0, 1.0]).unwrap();
        assert!((&d * &Element::basis(&a, 1)).is_zero());
        assert!(a.is_unital());
    }

    #[test]
    fn cone_norm_examples() {
        let z2 = group_algebra(2);
        let p = Element::from_reals(&z2, &[0.5, 0.5]).unwrap();
        let v = p.scale_re(2.0).one_minus().unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-15);

        let s = semigroup_l1_4();
        let a = Element::basis(&s, 1);
        let p = a.one_minus().unwrap();
        assert!((p.scale_re(2.0).one_minus().unwrap().norm() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn lower_triangular_norm_is_max_column_sum() {
        let a = lower_triangular_l1();
        // [[1, 0], [2, -3]]: columns sum to 3 and 3; [[1,0],[4,1]] gives 5.
        let x = Element::from_reals(&a, &[1.0, 4.0, 1.0]).unwrap();
        assert!((x.norm() - 5.0).abs() < 1e-15);
        assert!(a.is_unital());
        assert!(!a.is_commutative());
    }

    #[test]
    fn weighted_l1_norm() {
        let a = weighted_group_algebra_z2(2.0);
        let x = Element::from_slice(&a, &[C64::new(1.0, 0.0), C64::new(0.0, 1.0)]).unwrap();
        assert_eq!(x.norm(), 3.0);
    }

    #[test]
    fn matrix_algebra_l2_norm() {
        let a = matrix_algebra(2, OpDomain::L2);
        // [[1, 1], [0, 1]] has largest singular value golden ratio.
        let x = Element::new(&a, CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((x.try_norm().unwrap() - phi).abs() < 1e-9);
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(by_name("group:5").unwrap().dim(), 5);
        assert_eq!(by_name("truncated").unwrap().dim(), 8);
        assert!(by_name("nope").is_none());
    }
}
