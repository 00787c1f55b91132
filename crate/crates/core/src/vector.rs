//! Elements of the ambient space ℰ = 𝕂^{m×p} ⊕ 𝕂^{p×p} ⊕ 𝕂^{n×p} and of
//! the coordinate space ℰ_N = 𝕂^{(m−p)×p} ⊕ 𝕂^{p×p} ⊕ 𝕂^{(n−p)×p}.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::linalg::{inner, Mat};
use crate::scalar::Scalar;

/// A triple `(ω_U, ω_P, ω_V)`. Tangent and horizontal vectors are ambient
/// vectors satisfying extra linear constraints at a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientVector<T: Scalar> {
    pub u: Mat<T>,
    pub p: Mat<T>,
    pub v: Mat<T>,
}

impl<T: Scalar> AmbientVector<T> {
    pub fn new(u: Mat<T>, p: Mat<T>, v: Mat<T>) -> Self {
        Self { u, p, v }
    }

    pub fn zeros(m: usize, n: usize, p: usize) -> Self {
        Self::new(Mat::zeros(m, p), Mat::zeros(p, p), Mat::zeros(n, p))
    }

    pub fn zeros_like(&self) -> Self {
        let (m, n, p) = self.dims();
        Self::zeros(m, n, p)
    }

    /// `(m, n, p)` read off the slot shapes.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.u.nrows(), self.v.nrows(), self.p.nrows())
    }

    pub fn check_dims(&self, m: usize, n: usize, p: usize, context: &'static str) -> Result<()> {
        let slots = [
            (self.u.shape(), (m, p)),
            (self.p.shape(), (p, p)),
            (self.v.shape(), (n, p)),
        ];
        for (got, expected) in slots {
            if got != expected {
                return Err(Error::Shape {
                    context,
                    expected,
                    got,
                });
            }
        }
        Ok(())
    }

    /// `⟨a, b⟩_ℰ = Re tr(a_Uᵗb_U) + Re tr(a_Pᵗb_P) + Re tr(a_Vᵗb_V)`.
    pub fn inner(&self, other: &Self) -> f64 {
        inner(&self.u, &other.u) + inner(&self.p, &other.p) + inner(&self.v, &other.v)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    /// Largest absolute entry modulus over all three slots.
    pub fn max_abs(&self) -> f64 {
        [&self.u, &self.p, &self.v]
            .iter()
            .flat_map(|m| m.iter().map(|x| x.modulus()))
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.u.scale(s), self.p.scale(s), self.v.scale(s))
    }

    /// `self += s · other`.
    pub fn axpy(&mut self, s: f64, other: &Self) {
        self.u += other.u.scale(s);
        self.p += other.p.scale(s);
        self.v += other.v.scale(s);
    }

    pub fn map_slots(&self, mut f: impl FnMut(Slot, &Mat<T>) -> Mat<T>) -> Self {
        Self::new(f(Slot::U, &self.u), f(Slot::P, &self.p), f(Slot::V, &self.v))
    }

    pub fn slot(&self, slot: Slot) -> &Mat<T> {
        match slot {
            Slot::U => &self.u,
            Slot::P => &self.p,
            Slot::V => &self.v,
        }
    }

    pub fn slot_mut(&mut self, slot: Slot) -> &mut Mat<T> {
        match slot {
            Slot::U => &mut self.u,
            Slot::P => &mut self.p,
            Slot::V => &mut self.v,
        }
    }

    /// Same vector with every slot but `keep` zeroed.
    pub fn restrict(&self, keep: Slot) -> Self {
        let mut out = self.zeros_like();
        *out.slot_mut(keep) = self.slot(keep).clone();
        out
    }

    /// Number of real coordinates of ℰ.
    pub fn real_dim(&self) -> usize {
        let entries = self.u.len() + self.p.len() + self.v.len();
        match T::FIELD {
            crate::scalar::Field::Real => entries,
            crate::scalar::Field::Complex => 2 * entries,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    U,
    P,
    V,
}

impl Slot {
    pub const ALL: [Slot; 3] = [Slot::U, Slot::P, Slot::V];
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<T: Scalar> $trait<&AmbientVector<T>> for &AmbientVector<T> {
            type Output = AmbientVector<T>;
            fn $method(self, rhs: &AmbientVector<T>) -> AmbientVector<T> {
                AmbientVector::new(&self.u $op &rhs.u, &self.p $op &rhs.p, &self.v $op &rhs.v)
            }
        }
        impl<T: Scalar> $trait<AmbientVector<T>> for AmbientVector<T> {
            type Output = AmbientVector<T>;
            fn $method(self, rhs: AmbientVector<T>) -> AmbientVector<T> {
                AmbientVector::new(self.u $op rhs.u, self.p $op rhs.p, self.v $op rhs.v)
            }
        }
        impl<T: Scalar> $trait<&AmbientVector<T>> for AmbientVector<T> {
            type Output = AmbientVector<T>;
            fn $method(self, rhs: &AmbientVector<T>) -> AmbientVector<T> {
                AmbientVector::new(self.u $op &rhs.u, self.p $op &rhs.p, self.v $op &rhs.v)
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);

impl<T: Scalar> AddAssign<&AmbientVector<T>> for AmbientVector<T> {
    fn add_assign(&mut self, rhs: &AmbientVector<T>) {
        self.u += &rhs.u;
        self.p += &rhs.p;
        self.v += &rhs.v;
    }
}

impl<T: Scalar> SubAssign<&AmbientVector<T>> for AmbientVector<T> {
    fn sub_assign(&mut self, rhs: &AmbientVector<T>) {
        self.u -= &rhs.u;
        self.p -= &rhs.p;
        self.v -= &rhs.v;
    }
}

impl<T: Scalar> Neg for AmbientVector<T> {
    type Output = AmbientVector<T>;
    fn neg(self) -> AmbientVector<T> {
        AmbientVector::new(-self.u, -self.p, -self.v)
    }
}

impl<T: Scalar> Neg for &AmbientVector<T> {
    type Output = AmbientVector<T>;
    fn neg(self) -> AmbientVector<T> {
        AmbientVector::new(-&self.u, -&self.p, -&self.v)
    }
}

impl<T: Scalar> Mul<f64> for &AmbientVector<T> {
    type Output = AmbientVector<T>;
    fn mul(self, s: f64) -> AmbientVector<T> {
        self.scale(s)
    }
}

impl<T: Scalar> Mul<f64> for AmbientVector<T> {
    type Output = AmbientVector<T>;
    fn mul(self, s: f64) -> AmbientVector<T> {
        self.scale(s)
    }
}

/// Coordinates `[B, D, C]` parametrizing the horizontal space.
#[derive(Debug, Clone, PartialEq)]
pub struct NCoordinates<T: Scalar> {
    pub b: Mat<T>,
    pub d: Mat<T>,
    pub c: Mat<T>,
}

impl<T: Scalar> NCoordinates<T> {
    pub fn new(b: Mat<T>, d: Mat<T>, c: Mat<T>) -> Self {
        Self { b, d, c }
    }

    pub fn zeros(m: usize, n: usize, p: usize) -> Self {
        Self::new(Mat::zeros(m - p, p), Mat::zeros(p, p), Mat::zeros(n - p, p))
    }

    /// Plain trace pairing on ℰ_N.
    pub fn inner(&self, other: &Self) -> f64 {
        inner(&self.b, &other.b) + inner(&self.d, &other.d) + inner(&self.c, &other.c)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    /// Number of real coordinates of ℰ_N (equals the quotient dimension).
    pub fn real_dim(&self) -> usize {
        let entries = self.b.len() + self.d.len() + self.c.len();
        match T::FIELD {
            crate::scalar::Field::Real => entries,
            crate::scalar::Field::Complex => 2 * entries,
        }
    }

    /// The `k`-th canonical real basis vector of ℰ_N, for `k < real_dim()`.
    pub fn basis(m: usize, n: usize, p: usize, k: usize) -> Self {
        let mut out = Self::zeros(m, n, p);
        let per_entry = match T::FIELD {
            crate::scalar::Field::Real => 1,
            crate::scalar::Field::Complex => 2,
        };
        let mut entry = k / per_entry;
        let unit = if k % per_entry == 0 {
            T::one()
        } else {
            T::from_parts(0.0, 1.0)
        };
        for slot in [&mut out.b, &mut out.d, &mut out.c] {
            if entry < slot.len() {
                slot[entry] = unit;
                break;
            }
            entry -= slot.len();
        }
        assert!(k < out.real_dim(), "basis index {k} out of range");
        out
    }
}
