use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{basis_vector, Algebra};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64, ZERO};

/// An element of a fixed algebra: a coefficient vector and a shared handle
/// to the algebra it lives in.
#[derive(Clone)]
pub struct Element {
    alg: Arc<Algebra>,
    coeffs: CVector,
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[{}](", self.alg.label())?;
        for (i, z) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if z.im == 0.0 {
                write!(f, "{}", z.re)?;
            } else {
                write!(f, "{}{:+}i", z.re, z.im)?;
            }
        }
        write!(f, ")")
    }
}

/// Product of two elements, checking they share an algebra.
pub fn multiply(a: &Element, b: &Element) -> Result<Element> {
    a.same_algebra(b)?;
    Ok(a.mul_unchecked(b))
}

impl Element {
    pub fn new(alg: &Arc<Algebra>, coeffs: CVector) -> Result<Self> {
        if coeffs.len() != alg.dim() {
            return Err(Error::InconsistentDimensions(format!(
                "{} coefficients for an algebra of dimension {}",
                coeffs.len(),
                alg.dim()
            )));
        }
        Ok(Element { alg: alg.clone(), coeffs })
    }

    pub fn from_slice(alg: &Arc<Algebra>, coeffs: &[C64]) -> Result<Self> {
        Self::new(alg, CVector::from_column_slice(coeffs))
    }

    pub fn from_reals(alg: &Arc<Algebra>, coeffs: &[f64]) -> Result<Self> {
        Self::new(alg, CVector::from_iterator(coeffs.len(), coeffs.iter().map(|&x| C64::from(x))))
    }

    pub(crate) fn from_vec_unchecked(alg: &Arc<Algebra>, coeffs: CVector) -> Self {
        debug_assert_eq!(coeffs.len(), alg.dim());
        Element { alg: alg.clone(), coeffs }
    }

    pub fn zero(alg: &Arc<Algebra>) -> Self {
        Element { alg: alg.clone(), coeffs: CVector::zeros(alg.dim()) }
    }

    pub fn basis(alg: &Arc<Algebra>, i: usize) -> Self {
        Element { alg: alg.clone(), coeffs: basis_vector(alg.dim(), i) }
    }

    /// The norm-one identity.
    pub fn one(alg: &Arc<Algebra>) -> Result<Self> {
        Ok(Element { alg: alg.clone(), coeffs: alg.identity_or_err()?.clone() })
    }

    /// `λ·1`.
    pub fn scalar(alg: &Arc<Algebra>, lambda: C64) -> Result<Self> {
        Ok(Element::one(alg)?.scale(lambda))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn coeffs(&self) -> &CVector {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> CVector {
        self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn same_algebra(&self, other: &Element) -> Result<()> {
        if Arc::ptr_eq(&self.alg, &other.alg) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn norm(&self) -> f64 {
        self.alg.norm(&self.coeffs)
    }

    pub fn try_norm(&self) -> Result<f64> {
        self.alg.try_norm(&self.coeffs)
    }

    /// `‖self − other‖`.
    pub fn dist(&self, other: &Element) -> f64 {
        (self - other).norm()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        crate::linalg::max_abs(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| *z == ZERO)
    }

    pub fn scale(&self, lambda: C64) -> Element {
        Element { alg: self.alg.clone(), coeffs: &self.coeffs * lambda }
    }

    pub fn scale_re(&self, t: f64) -> Element {
        self.scale(C64::from(t))
    }

    /// `self + λ·1`.
    pub fn plus_scalar(&self, lambda: C64) -> Result<Element> {
        let one = self.alg.identity_or_err()?;
        Ok(Element { alg: self.alg.clone(), coeffs: &self.coeffs + one * lambda })
    }

    /// `1 − self`.
    pub fn one_minus(&self) -> Result<Element> {
        (-self).plus_scalar(C64::from(1.0))
    }

    fn mul_unchecked(&self, other: &Element) -> Element {
        Element { alg: self.alg.clone(), coeffs: self.alg.product(&self.coeffs, &other.coeffs) }
    }

    pub fn powi(&self, n: u32) -> Result<Element> {
        if n == 0 {
            return Element::one(&self.alg);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = &acc * self;
        }
        Ok(acc)
    }

    pub fn left_matrix(&self) -> CMatrix {
        self.alg.left_matrix(&self.coeffs)
    }

    pub fn right_matrix(&self) -> CMatrix {
        self.alg.right_matrix(&self.coeffs)
    }

    /// `‖ab − ba‖`.
    pub fn commutator_norm(&self, other: &Element) -> f64 {
        (self * other - other * self).norm()
    }

    /// Largest coefficient of `x² − x`.
    pub fn idempotent_defect(&self) -> f64 {
        (self * self - self).max_abs()
    }

    /// `‖x² − x‖`.
    pub fn idempotent_defect_norm(&self) -> f64 {
        (self * self - self).norm()
    }

    /// Element of another algebra with the same coefficients.
    pub fn rebind(&self, alg: &Arc<Algebra>) -> Result<Element> {
        Element::new(alg, self.coeffs.clone())
    }
}

fn check(a: &Element, b: &Element) {
    assert!(
        Arc::ptr_eq(&a.alg, &b.alg),
        "operands belong to different algebras ({} vs {})",
        a.alg.label(),
        b.alg.label()
    );
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                check(self, rhs);
                let f: fn(&Element, &Element) -> Element = $body;
                f(self, rhs)
            }
        }
        impl $trait<Element> for Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Element> for Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                (&self).$method(rhs)
            }
        }
        impl $trait<Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| Element { alg: a.alg.clone(), coeffs: &a.coeffs + &b.coeffs });
binop!(Sub, sub, |a, b| Element { alg: a.alg.clone(), coeffs: &a.coeffs - &b.coeffs });
binop!(Mul, mul, |a, b| a.mul_unchecked(b));

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { alg: self.alg.clone(), coeffs: -&self.coeffs }
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl Mul<C64> for &Element {
    type Output = Element;
    fn mul(self, rhs: C64) -> Element {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Element {
    type Output = Element;
    fn mul(self, rhs: f64) -> Element {
        self.scale_re(rhs)
    }
}

impl Mul<C64> for Element {
    type Output = Element;
    fn mul(self, rhs: C64) -> Element {
        self.scale(rhs)
    }
}

impl Mul<f64> for Element {
    type Output = Element;
    fn mul(self, rhs: f64) -> Element {
        self.scale_re(rhs)
    }
}
