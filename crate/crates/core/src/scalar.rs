//! Scalar fields supported by the library.
//!
//! Everything is generic over [`Scalar`], implemented for `f64` (the real
//! field, where the involution is the plain transpose) and `Complex64`
//! (where it is the conjugate transpose). All pairings use the real part of
//! the trace, so both fields are treated as real Riemannian manifolds.

use std::fmt;

use nalgebra::ComplexField;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{faer_thin_svd, Mat, ThinSvd};

/// Runtime tag for the scalar field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(Field::Real),
            "complex" | "c" => Ok(Field::Complex),
            other => Err(Error::Config(format!("unknown field `{other}`"))),
        }
    }
}

pub trait Scalar:
    ComplexField<RealField = f64> + Copy + Send + Sync + fmt::Debug + fmt::Display + 'static
{
    const FIELD: Field;

    /// Standard Gaussian sample; complex values get independent real and
    /// imaginary parts.
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Builds a scalar from real and imaginary parts. The real field drops `im`.
    fn from_parts(re: f64, im: f64) -> Self;

    /// Parses `1.5`, `-2e-3`, and for the complex field `re+imj` / `re-imj` / `imj`.
    fn parse_text(s: &str) -> Option<Self>;

    fn format_text(&self) -> String;

    /// Thin singular value decomposition; see [`crate::linalg::thin_svd`].
    fn thin_svd(a: &Mat<Self>) -> Result<ThinSvd<Self>>;
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }

    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }

    fn parse_text(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }

    fn format_text(&self) -> String {
        format!("{self:e}")
    }

    fn thin_svd(a: &Mat<Self>) -> Result<ThinSvd<Self>> {
        faer_thin_svd(a)
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;

    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }

    fn from_parts(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }

    fn parse_text(s: &str) -> Option<Self> {
        parse_complex(s.trim())
    }

    fn format_text(&self) -> String {
        if self.im.is_sign_negative() {
            format!("{:e}-{:e}j", self.re, -self.im)
        } else {
            format!("{:e}+{:e}j", self.re, self.im)
        }
    }

    fn thin_svd(a: &Mat<Self>) -> Result<ThinSvd<Self>> {
        faer_thin_svd(a)
    }
}

fn parse_complex(s: &str) -> Option<Complex64> {
    let Some(body) = s.strip_suffix('j').or_else(|| s.strip_suffix('i')) else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // Split at the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().ok()?;
            let im = match &body[k..] {
                "+" => 1.0,
                "-" => -1.0,
                t => t.parse::<f64>().ok()?,
            };
            Some(Complex64::new(re, im))
        }
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                t => t.parse::<f64>().ok()?,
            };
            Some(Complex64::new(0.0, im))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let cases = [
            ("1+2j", (1.0, 2.0)),
            ("-1.5-2.5j", (-1.5, -2.5)),
            ("3", (3.0, 0.0)),
            ("4j", (0.0, 4.0)),
            ("-j", (0.0, -1.0)),
            ("1e-3+2E+2j", (1e-3, 200.0)),
            ("-2e-1-1e-2j", (-0.2, -0.01)),
        ];
        for (text, (re, im)) in cases {
            let z = Complex64::parse_text(text).unwrap();
            assert_eq!((z.re, z.im), (re, im), "{text}");
        }
        assert!(Complex64::parse_text("1+xj").is_none());
    }

    #[test]
    fn format_roundtrip() {
        let z = Complex64::new(-0.25, -3.5e-7);
        assert_eq!(Complex64::parse_text(&z.format_text()), Some(z));
        let x = 1.0 / 3.0;
        assert_eq!(f64::parse_text(&x.format_text()), Some(x));
    }
}
