use crate::scalar::Scalar;
use crate::vector::AmbientVector;

/// A cost `f̂` defined on a neighborhood of the total space in ℰ.
///
/// `egrad` is the gradient for the pairing `⟨·,·⟩_ℰ = Re tr(·ᵗ·)` and
/// `ehess(y, ξ)` its directional derivative along `ξ`. Directions are
/// real-linear, so the complex case needs no Wirtinger conventions.
pub trait AmbientFunction<T: Scalar>: Send + Sync {
    fn value(&self, y: &AmbientVector<T>) -> f64;
    fn egrad(&self, y: &AmbientVector<T>) -> AmbientVector<T>;
    fn ehess(&self, y: &AmbientVector<T>, xi: &AmbientVector<T>) -> AmbientVector<T>;
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantFunction(pub f64);

impl<T: Scalar> AmbientFunction<T> for ConstantFunction {
    fn value(&self, _y: &AmbientVector<T>) -> f64 {
        self.0
    }

    fn egrad(&self, y: &AmbientVector<T>) -> AmbientVector<T> {
        y.zeros_like()
    }

    fn ehess(&self, y: &AmbientVector<T>, _xi: &AmbientVector<T>) -> AmbientVector<T> {
        y.zeros_like()
    }
}

/// `f̂(Y) = ⟨G₀, Y⟩_ℰ`.
#[derive(Debug, Clone)]
pub struct LinearFunction<T: Scalar>(pub AmbientVector<T>);

impl<T: Scalar> AmbientFunction<T> for LinearFunction<T> {
    fn value(&self, y: &AmbientVector<T>) -> f64 {
        self.0.inner(y)
    }

    fn egrad(&self, _y: &AmbientVector<T>) -> AmbientVector<T> {
        self.0.clone()
    }

    fn ehess(&self, y: &AmbientVector<T>, _xi: &AmbientVector<T>) -> AmbientVector<T> {
        y.zeros_like()
    }
}
