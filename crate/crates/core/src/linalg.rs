//! Field-generic dense matrix primitives.
//!
//! Every function here works for both scalar fields through [`Scalar`]. The
//! involution written `ᵗ` throughout the crate is [`ttranspose`]: the plain
//! transpose over ℝ and the conjugate transpose over ℂ.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vector::AmbientVector;

pub type Mat<T> = DMatrix<T>;

/// Relative symmetry residual accepted by [`eig_tsym`] before symmetrizing.
pub const SYMMETRY_TOL: f64 = 1e-8;
/// Positive definiteness threshold: `λ_min > PD_REL_TOL · λ_max`.
pub const PD_REL_TOL: f64 = 1e-12;

/// Deterministic generator used for every seeded draw in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ttranspose<T: Scalar>(a: &Mat<T>) -> Mat<T> {
    a.adjoint()
}

fn check_square<T: Scalar>(a: &Mat<T>, context: &'static str) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            context,
            rows: a.nrows(),
            cols: a.ncols(),
        })
    }
}

/// `(A + Aᵗ)/2`, rejecting non-square input.
pub fn sym<T: Scalar>(a: &Mat<T>) -> Result<Mat<T>> {
    check_square(a, "sym")?;
    Ok(sym_part(a))
}

/// `(A − Aᵗ)/2`, rejecting non-square input.
pub fn asym<T: Scalar>(a: &Mat<T>) -> Result<Mat<T>> {
    check_square(a, "asym")?;
    Ok(asym_part(a))
}

pub(crate) fn sym_part<T: Scalar>(a: &Mat<T>) -> Mat<T> {
    debug_assert!(a.is_square());
    (a + a.adjoint()).scale(0.5)
}

pub(crate) fn asym_part<T: Scalar>(a: &Mat<T>) -> Mat<T> {
    debug_assert!(a.is_square());
    (a - a.adjoint()).scale(0.5)
}

/// Real trace pairing `Re tr(Aᵗ B)`.
pub fn inner<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> f64 {
    a.dotc(b).real()
}

pub fn fro_norm<T: Scalar>(a: &Mat<T>) -> f64 {
    a.norm()
}

/// `‖A − Aᵗ‖ / ‖A‖` (zero for the zero matrix).
pub fn symmetry_residual<T: Scalar>(a: &Mat<T>) -> f64 {
    let scale = a.norm();
    if scale == 0.0 {
        0.0
    } else {
        (a - a.adjoint()).norm() / scale
    }
}

/// `‖AᵗA − I‖`.
pub fn orthonormality_residual<T: Scalar>(a: &Mat<T>) -> f64 {
    let g = a.adjoint() * a;
    (g - Mat::<T>::identity(a.ncols(), a.ncols())).norm()
}

pub fn real_diag<T: Scalar>(values: &DVector<f64>) -> Mat<T> {
    Mat::from_diagonal(&values.map(T::from_real))
}

/// Eigendecomposition `P = C Λ Cᵗ` of a 𝔱-symmetric matrix.
#[derive(Debug, Clone)]
pub struct TSymEigen<T: Scalar> {
    /// 𝔱-orthogonal eigenvector matrix.
    pub vectors: Mat<T>,
    /// Real eigenvalues in descending order.
    pub values: DVector<f64>,
}

impl<T: Scalar> TSymEigen<T> {
    /// `C φ(Λ) Cᵗ`.
    pub fn map(&self, phi: impl Fn(f64) -> f64) -> Mat<T> {
        let c = &self.vectors;
        let mut scaled = c.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(phi(lam));
        }
        scaled * c.adjoint()
    }

    pub fn reconstruct(&self) -> Mat<T> {
        self.map(|x| x)
    }

    pub fn min(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn is_positive_definite(&self) -> bool {
        self.values.len() > 0 && self.min() > PD_REL_TOL * self.max().abs() && self.min() > 0.0
    }
}

pub fn eig_tsym<T: Scalar>(p: &Mat<T>) -> Result<TSymEigen<T>> {
    check_square(p, "eig_tsym")?;
    let residual = symmetry_residual(p);
    if residual > SYMMETRY_TOL {
        return Err(Error::NotSymmetric {
            context: "eig_tsym",
            residual,
        });
    }
    let eig = sym_part(p).symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = Mat::<T>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(TSymEigen { vectors, values })
}

/// Scalar functions applied through the eigenbasis by [`spd_fun`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpdFn {
    Sqrt,
    InvSqrt,
    Inverse,
    Exp,
    Log,
}

impl SpdFn {
    fn needs_pd(self) -> bool {
        !matches!(self, SpdFn::Exp)
    }

    fn eval(self, x: f64) -> f64 {
        match self {
            SpdFn::Sqrt => x.sqrt(),
            SpdFn::InvSqrt => 1.0 / x.sqrt(),
            SpdFn::Inverse => 1.0 / x,
            SpdFn::Exp => x.exp(),
            SpdFn::Log => x.ln(),
        }
    }
}

pub(crate) fn require_pd<T: Scalar>(eig: &TSymEigen<T>, context: &'static str) -> Result<()> {
    if eig.is_positive_definite() {
        Ok(())
    } else {
        Err(Error::NotPositiveDefinite {
            context,
            min_eig: eig.min(),
            max_eig: eig.max(),
        })
    }
}

pub fn spd_fun<T: Scalar>(p: &Mat<T>, f: SpdFn) -> Result<Mat<T>> {
    let eig = eig_tsym(p)?;
    if f.needs_pd() {
        require_pd(&eig, "spd_fun")?;
    }
    Ok(sym_part(&eig.map(|x| f.eval(x))))
}

/// Orthonormal basis `U₀` (m×(m−p)) of the complement of `span(U)`.
pub fn complement_basis<T: Scalar>(u: &Mat<T>) -> Mat<T> {
    let (m, p) = u.shape();
    if p >= m {
        return Mat::zeros(m, 0);
    }
    let mut stacked = Mat::<T>::zeros(m, m + p);
    stacked.view_mut((0, 0), (m, p)).copy_from(u);
    stacked
        .view_mut((0, p), (m, m))
        .copy_from(&Mat::<T>::identity(m, m));
    let q = stacked.qr().q();
    q.columns(p, m - p).into_owned()
}

/// Thin SVD `A = U diag(σ) Vᵗ` with `σ` in descending order and
/// `min(m, n)` columns in `U` and `V`.
#[derive(Debug, Clone)]
pub struct ThinSvd<T: Scalar> {
    pub u: Mat<T>,
    pub singular_values: DVector<f64>,
    pub v: Mat<T>,
}

pub fn thin_svd<T: Scalar>(a: &Mat<T>) -> Result<ThinSvd<T>> {
    T::thin_svd(a)
}

pub(crate) fn faer_thin_svd<T>(a: &Mat<T>) -> Result<ThinSvd<T>>
where
    T: Scalar + faer::traits::ComplexField,
{
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return Ok(ThinSvd {
            u: Mat::zeros(m, 0),
            singular_values: DVector::zeros(0),
            v: Mat::zeros(n, 0),
        });
    }
    let svd = faer::Mat::<T>::from_fn(m, n, |i, j| a[(i, j)])
        .thin_svd()
        .map_err(|e| Error::Invariant(format!("singular value decomposition failed: {e:?}")))?;
    let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
    Ok(ThinSvd {
        u: Mat::from_fn(m, k, |i, j| u[(i, j)]),
        singular_values: DVector::from_fn(k, |i, _| <T as nalgebra::ComplexField>::real(s[i])),
        v: Mat::from_fn(n, k, |i, j| v[(i, j)]),
    })
}

/// Orthonormal polar factor `W Zᵗ` of `A = W Σ Zᵗ`.
pub fn polar_factor<T: Scalar>(a: &Mat<T>) -> Result<Mat<T>> {
    let svd = thin_svd(a)?;
    Ok(svd.u * svd.v.adjoint())
}

pub fn random_matrix<T: Scalar, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Mat<T> {
    let mut a = Mat::<T>::zeros(rows, cols);
    // Column-major fill keeps the draw order stable across nalgebra versions.
    for j in 0..cols {
        for i in 0..rows {
            a[(i, j)] = T::gaussian(rng);
        }
    }
    a
}

pub fn random_tsym<T: Scalar, R: Rng + ?Sized>(p: usize, rng: &mut R) -> Mat<T> {
    sym_part(&random_matrix(p, p, rng))
}

pub fn random_tasym<T: Scalar, R: Rng + ?Sized>(p: usize, rng: &mut R) -> Mat<T> {
    asym_part(&random_matrix(p, p, rng))
}

pub fn rand_stiefel<T: Scalar, R: Rng + ?Sized>(m: usize, p: usize, rng: &mut R) -> Result<Mat<T>> {
    if p > m {
        return Err(Error::Dimensions(format!("stiefel requires p <= m, got p={p}, m={m}")));
    }
    let g = random_matrix::<T, _>(m, p, rng);
    Ok(g.qr().q())
}

/// Random 𝔱-orthogonal p×p matrix.
pub fn rand_unitary<T: Scalar, R: Rng + ?Sized>(p: usize, rng: &mut R) -> Mat<T> {
    random_matrix::<T, _>(p, p, rng).qr().q()
}

/// Random positive-definite matrix with eigenvalues in `[e^{-1.5}, e^{1.5}]`.
pub fn rand_spd<T: Scalar, R: Rng + ?Sized>(p: usize, rng: &mut R) -> Mat<T> {
    let c = rand_unitary::<T, _>(p, rng);
    let values = DVector::from_iterator(p, (0..p).map(|_| rng.random_range(-1.5..1.5f64).exp()));
    let eig = TSymEigen { vectors: c, values };
    sym_part(&eig.reconstruct())
}

pub fn rand_ambient<T: Scalar, R: Rng + ?Sized>(
    m: usize,
    n: usize,
    p: usize,
    rng: &mut R,
) -> Result<AmbientVector<T>> {
    if p > m.min(n) {
        return Err(Error::Dimensions(format!("p={p} exceeds min(m={m}, n={n})")));
    }
    Ok(AmbientVector::new(
        random_matrix(m, p, rng),
        random_matrix(p, p, rng),
        random_matrix(n, p, rng),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    type C = Complex64;

    #[test]
    fn ttranspose_examples() {
        let a = Mat::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(ttranspose(&a), Mat::from_row_slice(2, 2, &[1.0, 3.0, 2.0, 4.0]));
        let z = Mat::from_element(1, 1, C::new(0.0, 1.0));
        assert_eq!(ttranspose(&z)[(0, 0)], C::new(0.0, -1.0));
        let i3 = Mat::<C>::identity(3, 3);
        assert_eq!(ttranspose(&i3), i3);
    }

    #[test]
    fn ttranspose_antihomomorphism() {
        let mut rng = seeded_rng(1);
        let a = random_matrix::<C, _>(3, 4, &mut rng);
        let b = random_matrix::<C, _>(4, 2, &mut rng);
        let lhs = ttranspose(&(&a * &b));
        let rhs = ttranspose(&b) * ttranspose(&a);
        assert!((lhs - rhs).norm() < 1e-13);
        assert_eq!(ttranspose(&ttranspose(&a)), a);
    }

    #[test]
    fn sym_asym_examples() {
        let a = Mat::from_row_slice(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        assert_eq!(sym(&a).unwrap(), Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let mut rng = seeded_rng(2);
        let s = random_tsym::<C, _>(4, &mut rng);
        assert!(asym(&s).unwrap().norm() < 1e-15);
        let r = random_matrix::<C, _>(4, 4, &mut rng);
        assert!((sym(&r).unwrap() + asym(&r).unwrap() - &r).norm() < 1e-14);
        assert!(matches!(sym(&Mat::<f64>::zeros(2, 3)), Err(Error::NotSquare { .. })));
        assert!(asym(&Mat::<f64>::zeros(3, 1)).is_err());
    }

    #[test]
    fn eig_examples() {
        let d = Mat::from_diagonal(&DVector::from_vec(vec![3.0, 1.0]));
        let e = eig_tsym(&d).unwrap();
        assert_eq!(e.values.as_slice(), &[3.0, 1.0]);
        assert!((e.vectors.abs() - Mat::<f64>::identity(2, 2)).norm() < 1e-15);
        let e = eig_tsym(&Mat::<C>::identity(4, 4)).unwrap();
        assert!(e.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));
        let mut rng = seeded_rng(3);
        let p = rand_spd::<C, _>(5, &mut rng);
        let e = eig_tsym(&p).unwrap();
        assert!((e.reconstruct() - &p).norm() / p.norm() <= 1e-12);
        assert!(orthonormality_residual(&e.vectors) < 1e-12);
    }

    #[test]
    fn eig_rejects_nonsymmetric() {
        let a = Mat::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(eig_tsym(&a), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn eig_ill_conditioned() {
        let mut rng = seeded_rng(4);
        for_both_fields_ill_conditioned::<f64>(&mut rng);
        for_both_fields_ill_conditioned::<C>(&mut rng);
    }

    fn for_both_fields_ill_conditioned<T: Scalar>(rng: &mut ChaCha8Rng) {
        let c = rand_unitary::<T, _>(6, rng);
        let values = DVector::from_vec(vec![1e8, 1e5, 3e2, 1.0, 0.5, 1.0]);
        let p = sym_part(&TSymEigen { vectors: c, values }.reconstruct());
        let e = eig_tsym(&p).unwrap();
        assert!((e.reconstruct() - &p).norm() / p.norm() <= 1e-12);
    }

    #[test]
    fn spd_fun_examples() {
        let d = Mat::from_diagonal(&DVector::from_vec(vec![4.0, 9.0]));
        let s = spd_fun(&d, SpdFn::Sqrt).unwrap();
        assert!((s - Mat::from_diagonal(&DVector::from_vec(vec![2.0, 3.0]))).norm() < 1e-14);
        let e = spd_fun(&Mat::<C>::zeros(3, 3), SpdFn::Exp).unwrap();
        assert!((e - Mat::<C>::identity(3, 3)).norm() < 1e-15);
        let mut rng = seeded_rng(5);
        let p = rand_spd::<C, _>(4, &mut rng);
        let r = spd_fun(&p, SpdFn::Sqrt).unwrap();
        assert!((&r * &r - &p).norm() / p.norm() <= 1e-12);
        let inv = spd_fun(&p, SpdFn::Inverse).unwrap();
        assert!((&inv * &p - Mat::<C>::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn spd_fun_fourth_root_routes_agree() {
        let mut rng = seeded_rng(6);
        let p = rand_spd::<C, _>(5, &mut rng);
        let twice = spd_fun(&spd_fun(&p, SpdFn::Sqrt).unwrap(), SpdFn::Sqrt).unwrap();
        let log = spd_fun(&p, SpdFn::Log).unwrap();
        let via_log = spd_fun(&log.scale(0.25), SpdFn::Exp).unwrap();
        assert!((&twice - &via_log).norm() / twice.norm() <= 1e-10);
    }

    #[test]
    fn spd_fun_rejects_indefinite() {
        let d = Mat::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        assert!(matches!(spd_fun(&d, SpdFn::Sqrt), Err(Error::NotPositiveDefinite { .. })));
        assert!(spd_fun(&d, SpdFn::Exp).is_ok());
    }

    #[test]
    fn complement_examples() {
        let id = Mat::<f64>::identity(5, 5);
        let u = id.columns(0, 2).into_owned();
        let u0 = complement_basis(&u);
        assert_eq!(u0.shape(), (5, 3));
        assert!((u0.abs() - id.columns(2, 3)).norm() < 1e-14);
        let sq = rand_unitary::<C, _>(3, &mut seeded_rng(7));
        assert_eq!(complement_basis(&sq).shape(), (3, 0));
        let mut rng = seeded_rng(8);
        let u = rand_stiefel::<C, _>(7, 3, &mut rng).unwrap();
        let u0 = complement_basis(&u);
        assert!(orthonormality_residual(&u0) < 1e-12);
        assert!((u0.adjoint() * &u).norm() < 1e-12);
        let mut full = Mat::<C>::zeros(7, 7);
        full.view_mut((0, 0), (7, 3)).copy_from(&u);
        full.view_mut((0, 3), (7, 4)).copy_from(&u0);
        assert!(orthonormality_residual(&full) < 1e-12);
    }

    #[test]
    fn random_generators() {
        let u = rand_stiefel::<f64, _>(5, 2, &mut seeded_rng(9)).unwrap();
        assert!(orthonormality_residual(&u) < 1e-12);
        let p = rand_spd::<C, _>(3, &mut seeded_rng(9));
        assert!(eig_tsym(&p).unwrap().min() > 0.0);
        let a = rand_stiefel::<C, _>(6, 3, &mut seeded_rng(42)).unwrap();
        let b = rand_stiefel::<C, _>(6, 3, &mut seeded_rng(42)).unwrap();
        assert_eq!(a, b);
        assert!(rand_stiefel::<f64, _>(2, 3, &mut seeded_rng(0)).is_err());
        assert!(rand_ambient::<f64, _>(4, 2, 3, &mut seeded_rng(0)).is_err());
    }

    #[test]
    fn polar_is_orthonormal() {
        let a = random_matrix::<C, _>(6, 3, &mut seeded_rng(10));
        assert!(orthonormality_residual(&polar_factor(&a).unwrap()) < 1e-12);
    }

    #[test]
    fn thin_svd_reconstructs_exactly_low_rank_complex_matrices() {
        let mut rng = seeded_rng(11);
        for (m, n, r) in [(20, 15, 3), (15, 20, 3), (9, 9, 1), (6, 4, 4)] {
            for _ in 0..25 {
                let a = random_matrix::<C, _>(m, r, &mut rng) * random_matrix::<C, _>(r, n, &mut rng);
                let svd = thin_svd(&a).unwrap();
                let s = svd.singular_values.map(|x| C::new(x, 0.0));
                let back = &svd.u * Mat::from_diagonal(&s) * svd.v.adjoint();
                assert!((back - &a).norm() <= 1e-12 * a.norm());
                assert!(orthonormality_residual(&svd.u) < 1e-12);
                assert!(orthonormality_residual(&svd.v) < 1e-12);
                assert!(svd.singular_values.as_slice().windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }
}
