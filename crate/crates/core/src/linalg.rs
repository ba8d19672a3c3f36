//! Dense complex linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Euclidean norm of a coefficient vector.
pub fn norm2(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry modulus.
pub fn max_abs(v: &CVector) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// nalgebra iterates to machine epsilon by default, and on nearly repeated
/// singular values that can end with factors whose product is visibly not
/// `m`. A slightly looser threshold converges properly; the product is
/// checked either way.
const SVD_EPS: [f64; 3] = [8.0 * f64::EPSILON, 64.0 * f64::EPSILON, 1024.0 * f64::EPSILON];
const SVD_ITERS: usize = 10_000;

type Svd = nalgebra::SVD<C64, nalgebra::Dyn, nalgebra::Dyn>;

fn svd(m: &CMatrix) -> Svd {
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let mut errs = Vec::new();
    for eps in SVD_EPS {
        if let Some(d) = m.clone().try_svd(true, true, eps, SVD_ITERS) {
            let (u, vt) = (d.u.as_ref().unwrap(), d.v_t.as_ref().unwrap());
            let sigma = CMatrix::from_diagonal(&d.singular_values.map(C64::from));
            let err = (u * sigma * vt - m).norm();
            if err <= 1e-10 * scale {
                return d;
            }
            errs.push(err);
        }
    }
    panic!("no accurate SVD of a {}x{} matrix of norm {scale:e}: {errs:?}", m.nrows(), m.ncols())
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = svd(m).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value with unit left and right singular vectors.
pub fn top_singular_triple(m: &CMatrix) -> (f64, CVector, CVector) {
    let d = svd(m);
    let (u, vt) = (d.u.as_ref().unwrap(), d.v_t.as_ref().unwrap());
    let k = d.singular_values.imax();
    (d.singular_values[k], u.column(k).clone_owned(), vt.row(k).adjoint())
}

/// Ratio of the smallest to the largest singular value of a square matrix.
pub fn inverse_condition(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    }
}

/// Solves `m x = b` by LU with partial pivoting.
pub fn lu_solve(m: &CMatrix, b: &CVector) -> Option<CVector> {
    m.clone().lu().solve(b)
}

/// Minimal-norm least-squares solution of `m x = b`; returns the solution and
/// the Euclidean residual.
pub fn lstsq(m: &CMatrix, b: &CVector, rel: f64) -> (CVector, f64) {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return (CVector::zeros(cols), norm2(b));
    }
    // Pad to at least square so the SVD is full in the column space.
    let padded;
    let (mm, bb) = if rows < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        let mut pb = CVector::zeros(cols);
        pb.rows_mut(0, rows).copy_from(b);
        padded = (p, pb);
        (&padded.0, &padded.1)
    } else {
        (m, b)
    };
    let d = svd(mm);
    let smax = d.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    let eps = (rel * smax).max(f64::MIN_POSITIVE);
    let x = d.solve(bb, eps).unwrap_or_else(|_| CVector::zeros(cols));
    let resid = norm2(&(m * &x - b));
    (x, resid)
}

/// Orthonormal basis (as columns) of the column span of `m`.
pub fn orth_basis(m: &CMatrix, rel: f64) -> CMatrix {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return CMatrix::zeros(rows, 0);
    }
    let d = svd(m);
    let u = d.u.as_ref().unwrap();
    let smax = d.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    let keep: Vec<usize> =
        (0..d.singular_values.len()).filter(|&i| smax > 0.0 && d.singular_values[i] > rel * smax).collect();
    let mut q = CMatrix::zeros(rows, keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        q.set_column(dst, &u.column(src));
    }
    q
}

pub fn rank(m: &CMatrix, rel: f64) -> usize {
    orth_basis(m, rel).ncols()
}

/// Orthonormal basis of the null space of `m`.
pub fn null_space(m: &CMatrix, rel: f64) -> CMatrix {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    let n = rows.max(cols);
    let mut p = CMatrix::zeros(n, cols);
    p.view_mut((0, 0), (rows, cols)).copy_from(m);
    let d = svd(&p);
    let vt = d.v_t.as_ref().unwrap();
    let smax = d.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    let null: Vec<usize> =
        (0..d.singular_values.len()).filter(|&i| smax == 0.0 || d.singular_values[i] <= rel * smax).collect();
    let mut z = CMatrix::zeros(cols, null.len());
    for (dst, &src) in null.iter().enumerate() {
        z.set_column(dst, &vt.row(src).adjoint());
    }
    z
}

/// Distance from `v` to the span of the orthonormal columns of `q`.
pub fn distance_to_span(q: &CMatrix, v: &CVector) -> f64 {
    if q.ncols() == 0 {
        return norm2(v);
    }
    let proj = q * (q.adjoint() * v);
    norm2(&(v - proj))
}

/// Whether every column of `vs` lies in the span of orthonormal `q`.
pub fn span_contains(q: &CMatrix, vs: &CMatrix, tol: f64) -> bool {
    vs.column_iter().all(|col| {
        let v = col.clone_owned();
        distance_to_span(q, &v) <= tol * norm2(&v).max(1.0)
    })
}

pub fn spans_equal(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    a.ncols() == b.ncols() && span_contains(a, b, tol) && span_contains(b, a, tol)
}

/// Orthonormal basis of the intersection of two spans given by orthonormal columns.
pub fn span_intersection(a: &CMatrix, b: &CMatrix, rel: f64) -> CMatrix {
    let n = a.nrows();
    if a.ncols() == 0 || b.ncols() == 0 {
        return CMatrix::zeros(n, 0);
    }
    let mut stacked = CMatrix::zeros(n, a.ncols() + b.ncols());
    stacked.view_mut((0, 0), (n, a.ncols())).copy_from(a);
    stacked.view_mut((0, a.ncols()), (n, b.ncols())).copy_from(&(-b));
    let z = null_space(&stacked, rel);
    if z.ncols() == 0 {
        return CMatrix::zeros(n, 0);
    }
    let coeffs = z.rows(0, a.ncols()).clone_owned();
    orth_basis(&(a * coeffs), rel)
}

/// Orthonormal basis of the sum of two spans.
pub fn span_sum(a: &CMatrix, b: &CMatrix, rel: f64) -> CMatrix {
    let n = a.nrows();
    let mut stacked = CMatrix::zeros(n, a.ncols() + b.ncols());
    stacked.view_mut((0, 0), (n, a.ncols())).copy_from(a);
    stacked.view_mut((0, a.ncols()), (n, b.ncols())).copy_from(b);
    orth_basis(&stacked, rel)
}

const SCHUR_ITERS: usize = 10_000;
/// nalgebra's default deflation threshold is machine epsilon, which a
/// subdiagonal next to a rounding-level eigenvalue may never reach.
const SCHUR_EPS: f64 = 8.0 * f64::EPSILON;

fn schur_diagonal(m: CMatrix) -> Option<Vec<C64>> {
    let (_, t) = Schur::try_new(m, SCHUR_EPS, SCHUR_ITERS)?.unpack();
    Some(t.diagonal().iter().copied().collect())
}

/// Eigenvalues via the complex Schur form, retried after a fixed Householder
/// similarity if the QR iteration does not settle.
pub fn eigenvalues(m: &CMatrix) -> Vec<C64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    schur_diagonal(m.clone())
        .or_else(|| {
            let v = CVector::from_fn(n, |i, _| C64::from_polar(1.0 + 0.3 * i as f64, 0.9 * i as f64 + 0.4));
            let h = CMatrix::identity(n, n) - (&v * v.adjoint()) * C64::from(2.0 / v.norm_squared());
            schur_diagonal(&h * m * &h)
        })
        .expect("Schur iteration converges after a generic similarity")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lstsq_handles_wide_systems() {
        let m = CMatrix::from_row_slice(1, 2, &[re(1.0), re(1.0)]);
        let b = CVector::from_vec(vec![re(2.0)]);
        let (x, r) = lstsq(&m, &b, 1e-12);
        assert!(r < 1e-12);
        assert!((x[0] - re(1.0)).norm() < 1e-12);
        assert!((x[1] - re(1.0)).norm() < 1e-12);
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = CMatrix::from_row_slice(2, 2, &[re(1.0), re(1.0), re(2.0), re(2.0)]);
        let z = null_space(&m, 1e-12);
        assert_eq!(z.ncols(), 1);
        assert!(norm2(&(&m * z.column(0))) < 1e-12);
    }

    #[test]
    fn intersection_of_planes() {
        let e = CMatrix::identity(3, 3);
        let a = e.columns(0, 2).clone_owned();
        let b = e.columns(1, 2).clone_owned();
        let i = span_intersection(&a, &b, 1e-12);
        assert_eq!(i.ncols(), 1);
        assert!((i[(1, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_of_triangular() {
        let m = CMatrix::from_row_slice(2, 2, &[re(1.0), re(5.0), ZERO, re(3.0)]);
        let mut ev: Vec<f64> = eigenvalues(&m).iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn near_degenerate_complex_spectrum() {
        // Circulant with two singular values equal and one null up to rounding;
        // SVD iterated to machine epsilon misreports the largest singular value.
        let x = [
            c(1.0, 0.0),
            c(-1.3866669807077948e-17, -0.22645990365111743),
            c(0.29548836524641764, -3.6186888068430934e-17),
            c(8.781667834822271e-17, 0.47805173110246485),
        ];
        let m = CMatrix::from_fn(4, 4, |i, j| x[(i + 4 - j) % 4]);
        let hat = |k: usize| -> C64 {
            (0..4).map(|j| x[j] * C64::from_polar(1.0, -std::f64::consts::FRAC_PI_2 * (j * k) as f64)).sum()
        };
        let mut exact: Vec<f64> = (0..4).map(|k| hat(k).norm()).collect();
        exact.sort_by(|a, b| b.total_cmp(a));
        for (s, e) in singular_values(&m).iter().zip(&exact) {
            assert!((s - e).abs() < 1e-12, "{s} vs {e}");
        }
        let b = CVector::from_fn(4, |i, _| c(1.0 + i as f64, -0.5));
        let (y, _) = lstsq(&m, &b, 1e-12);
        let q = orth_basis(&m, 1e-12);
        assert_eq!(q.ncols(), 3);
        // The residual is exactly the component of b outside the range.
        let outside = distance_to_span(&q, &b);
        assert!((norm2(&(&m * &y - &b)) - outside).abs() < 1e-10);
        assert_eq!(null_space(&m, 1e-12).ncols(), 1);
    }

    #[test]
    fn eigenvalues_of_a_circulant_idempotent() {
        // 1 - (sum of group elements)/4 in Z4 with rounding noise; QR iteration
        // at machine-epsilon deflation never terminates on it.
        let x = [re(0.7499999999999961), re(-0.24999999999999792), re(-0.24999999999999983), re(-0.2499999999999984)];
        let m = CMatrix::from_fn(4, 4, |i, j| x[(i + 4 - j) % 4]);
        assert!(Schur::try_new(m.clone(), f64::EPSILON, SCHUR_ITERS).is_none());
        let mut ev: Vec<f64> = eigenvalues(&m).iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        for (got, want) in ev.iter().zip([0.0, 1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12, "{ev:?}");
        }
    }
}
