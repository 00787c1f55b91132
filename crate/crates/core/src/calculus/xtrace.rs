use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::quotient::{metric_deriv, MetricParams, Point};
use crate::scalar::Scalar;
use crate::vector::AmbientVector;

/// Shape of a trace monomial `Re tr(A b C)` or `Re tr(A bᵗ C)` in the slot
/// variable `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XtraceForm {
    AbC,
    AbtC,
}

/// Index raising: the matrix `Z` with `⟨Z, b⟩_ℰ = Re tr(A b C)` (form
/// `AbC`, giving `AᵗCᵗ`) or `Re tr(A bᵗ C)` (form `AbᵗC`, giving `CA`).
pub fn xtrace_rule<T: Scalar>(form: XtraceForm, a: &Mat<T>, c: &Mat<T>) -> Result<Mat<T>> {
    if a.nrows() != c.ncols() {
        return Err(Error::Shape {
            context: "xtrace trace closure",
            expected: (c.ncols(), a.ncols()),
            got: a.shape(),
        });
    }
    Ok(match form {
        XtraceForm::AbC => a.adjoint() * c.adjoint(),
        XtraceForm::AbtC => c * a,
    })
}

/// `coeff · Re tr(A b C)` (or with `bᵗ`), one term of a linear functional.
#[derive(Debug, Clone)]
pub struct TraceTerm<T: Scalar> {
    pub form: XtraceForm,
    pub coeff: f64,
    pub a: Mat<T>,
    pub c: Mat<T>,
}

impl<T: Scalar> TraceTerm<T> {
    pub fn new(form: XtraceForm, coeff: f64, a: Mat<T>, c: Mat<T>) -> Self {
        Self { form, coeff, a, c }
    }

    pub fn evaluate(&self, b: &Mat<T>) -> f64 {
        let inner = match self.form {
            XtraceForm::AbC => &self.a * b * &self.c,
            XtraceForm::AbtC => &self.a * b.adjoint() * &self.c,
        };
        self.coeff * inner.trace().real()
    }
}

/// Raises a sum of trace terms in one slot variable to a matrix.
pub fn raise<T: Scalar>(terms: &[TraceTerm<T>], rows: usize, cols: usize) -> Result<Mat<T>> {
    let mut out = Mat::<T>::zeros(rows, cols);
    for term in terms {
        let z = xtrace_rule(term.form, &term.a, &term.c)?;
        if z.shape() != (rows, cols) {
            return Err(Error::Shape {
                context: "xtrace term",
                expected: (rows, cols),
                got: z.shape(),
            });
        }
        out += z.scale(term.coeff);
    }
    Ok(out)
}

/// The functional `φ ↦ ⟨(D_φ g)ξ, η⟩_ℰ` written slot by slot as trace terms.
pub(crate) fn metric_deriv_functional<T: Scalar>(
    y: &Point<T>,
    xi: &AmbientVector<T>,
    eta: &AmbientVector<T>,
    params: &MetricParams,
) -> [Vec<TraceTerm<T>>; 3] {
    use XtraceForm::{AbC, AbtC};
    let stiefel = |base: &Mat<T>, x: &Mat<T>, e: &Mat<T>, c: f64| {
        // Re tr(eᵗ(φBᵗ + Bφᵗ)x)
        vec![
            TraceTerm::new(AbC, c, e.adjoint(), base.adjoint() * x),
            TraceTerm::new(AbtC, c, e.adjoint() * base, x.clone()),
        ]
    };
    let pinv = y.p_inv();
    let e = eta.p.adjoint();
    // −β Re tr(ηᵗ(P⁻¹φP⁻¹ξP⁻¹ + P⁻¹ξP⁻¹φP⁻¹))
    let p_terms = vec![
        TraceTerm::new(AbC, -params.beta, &e * pinv, pinv * &xi.p * pinv),
        TraceTerm::new(AbC, -params.beta, &e * pinv * &xi.p * pinv, pinv.clone()),
    ];
    [
        stiefel(y.u(), &xi.u, &eta.u, params.alpha1 - params.alpha0),
        p_terms,
        stiefel(y.v(), &xi.v, &eta.v, params.gamma1 - params.gamma0),
    ]
}

/// Generic Koszul form `½((D_ξg)η + (D_ηg)ξ − xtrace(⟨(D_φg)ξ, η⟩_ℰ, φ))`.
///
/// Agrees with [`crate::quotient::christoffel_k`] on tangent arguments and
/// serves as its independent check.
pub fn koszul_oracle<T: Scalar>(
    y: &Point<T>,
    xi: &AmbientVector<T>,
    eta: &AmbientVector<T>,
    params: &MetricParams,
) -> Result<AmbientVector<T>> {
    let first = metric_deriv(y, xi, eta, params)?;
    let second = metric_deriv(y, eta, xi, params)?;
    let (m, n, p) = y.dims();
    let [tu, tp, tv] = metric_deriv_functional(y, xi, eta, params);
    let raised = AmbientVector::new(raise(&tu, m, p)?, raise(&tp, p, p)?, raise(&tv, n, p)?);
    Ok((first + second - raised).scale(0.5))
}
