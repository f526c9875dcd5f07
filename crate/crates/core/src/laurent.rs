//! Laurent polynomials over the complex numbers with exact exponents.
//!
//! A trigonometric polynomial f(z) = Σ_n c_n z^n on the unit circle is
//! stored as a finitely supported map from exponent to coefficient. The
//! exponents are exact integers — upsampling f(z) ↦ f(z^N) multiplies
//! them without roundoff — while the coefficients are `f64` complex
//! numbers. Coefficients whose magnitude drops to [`PRUNE_EPS`] or below
//! are removed after every operation, so supports stay finite under
//! floating-point noise and "this vector is zero" is a cheap, meaningful
//! test.
//!
//! Identifying z^n with the n-th Fourier basis vector e_n of L²(T), the
//! Euclidean norm of the coefficients equals the L² norm of the function,
//! and [`LaurentPoly::inner`] is the L² inner product, conjugate-linear in
//! its **first** argument: ⟨f, g⟩ = Σ_n conj(f_n) g_n.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;

/// Coefficients with magnitude at or below this threshold are dropped
/// after every arithmetic operation. Chosen two decades above the f64
/// epsilon so genuine cancellation survives but accumulated roundoff
/// does not masquerade as support.
pub const PRUNE_EPS: f64 = 1e-14;

/// How far an evaluation point may sit from the unit circle before
/// [`LaurentPoly::evaluate`] rejects it. Laurent polynomials with
/// negative exponents are only functions on the circle itself.
pub const CIRCLE_TOL: f64 = 1e-12;

/// A finitely supported Laurent polynomial Σ_n c_n z^n with n ∈ ℤ.
///
/// Construct via [`LaurentPoly::zero`], [`LaurentPoly::basis`], or
/// [`LaurentPoly::from_coeffs`]; combine with the arithmetic operators
/// (implemented on references to avoid needless clones).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Complex>,
}

impl LaurentPoly {
    /// The zero polynomial (empty support).
    pub fn zero() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis monomial e_n(z) = z^n.
    pub fn basis(n: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(n, Complex::new(1.0, 0.0));
        LaurentPoly { coeffs }
    }

    /// The constant polynomial 1 = e_0.
    pub fn one() -> Self {
        Self::basis(0)
    }

    /// Build from (exponent, coefficient) pairs. Duplicate exponents are
    /// summed; negligible coefficients are pruned. Rejects non-finite
    /// coefficients.
    pub fn from_coeffs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex)>,
    {
        let mut coeffs: BTreeMap<i64, Complex> = BTreeMap::new();
        for (n, c) in pairs {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite {
                    context: "polynomial coefficient",
                });
            }
            *coeffs.entry(n).or_insert_with(|| Complex::new(0.0, 0.0)) += c;
        }
        let mut p = LaurentPoly { coeffs };
        p.prune();
        Ok(p)
    }

    /// Convenience: build from real coefficients.
    pub fn from_real_coeffs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, f64)>,
    {
        Self::from_coeffs(pairs.into_iter().map(|(n, x)| (n, Complex::new(x, 0.0))))
    }

    /// Coefficient of z^n (zero off the support).
    pub fn coeff(&self, n: i64) -> Complex {
        self.coeffs
            .get(&n)
            .copied()
            .unwrap_or_else(|| Complex::new(0.0, 0.0))
    }

    /// Iterate over (exponent, coefficient) pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    /// Number of stored (non-negligible) terms.
    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// True when the support is empty after pruning.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest and largest exponent in the support, or `None` when zero.
    pub fn support_bounds(&self) -> Option<(i64, i64)> {
        let lo = self.coeffs.keys().next()?;
        let hi = self.coeffs.keys().next_back()?;
        Some((*lo, *hi))
    }

    /// Scalar multiple c·f.
    pub fn scaled(&self, c: Complex) -> Self {
        let mut out = LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&n, &a)| (n, c * a)).collect(),
        };
        out.prune();
        out
    }

    /// Real scalar multiple.
    pub fn scaled_real(&self, c: f64) -> Self {
        self.scaled(Complex::new(c, 0.0))
    }

    /// Upsampling f(z) ↦ f(z^n): every exponent is multiplied by n.
    /// Fails for n = 0, which is not injective on exponents.
    pub fn upsample(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidScale { scale: 0, min: 1 });
        }
        let n = i64::try_from(n).expect("upsampling factor fits in i64");
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, &c)| (k.checked_mul(n).expect("exponent overflow in upsample"), c))
            .collect();
        Ok(LaurentPoly { coeffs })
    }

    /// L² inner product ⟨f, g⟩ = Σ_n conj(f_n) g_n, conjugate-linear in
    /// the first argument (this one).
    pub fn inner(&self, other: &Self) -> Complex {
        let mut acc = Complex::new(0.0, 0.0);
        for (&n, &c) in &self.coeffs {
            if let Some(&d) = other.coeffs.get(&n) {
                acc += c.conj() * d;
            }
        }
        acc
    }

    /// Squared L² norm Σ_n |c_n|².
    pub fn norm_sq(&self) -> f64 {
        // Fold from +0.0: the stdlib's empty f64 sum is −0.0, which would
        // otherwise leak through sqrt and max-folds into printed reports.
        self.coeffs.values().fold(0.0, |acc, c| acc + c.norm_sqr())
    }

    /// L² norm.
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Euclidean distance ‖f − g‖ between coefficient sequences.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    /// f/‖f‖, or `None` for the zero polynomial.
    pub fn normalized(&self) -> Option<Self> {
        let norm = self.norm();
        if norm > 0.0 {
            Some(self.scaled_real(1.0 / norm))
        } else {
            None
        }
    }

    /// Evaluate at a point of the unit circle. Points with |z| off the
    /// circle by more than [`CIRCLE_TOL`] are rejected: with negative
    /// exponents present, values away from the circle are not the
    /// function this polynomial represents.
    pub fn evaluate(&self, z: Complex) -> Result<Complex> {
        let modulus = z.norm();
        if (modulus - 1.0).abs() > CIRCLE_TOL {
            return Err(Error::OffUnitCircle {
                modulus,
                tol: CIRCLE_TOL,
            });
        }
        Ok(self.eval_unchecked(z))
    }

    /// Evaluation without the circle check, for internal samplers that
    /// construct z = e^{iθ} themselves.
    pub(crate) fn eval_unchecked(&self, z: Complex) -> Complex {
        let mut acc = Complex::new(0.0, 0.0);
        for (&n, &c) in &self.coeffs {
            let n = i32::try_from(n).expect("exponent fits in i32 for evaluation");
            acc += c * z.powi(n);
        }
        acc
    }

    /// Drop negligible coefficients in place.
    fn prune(&mut self) {
        self.coeffs.retain(|_, c| c.norm() > PRUNE_EPS);
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "({:.6}{:+.6}i)", c.re, c.im)?,
                1 => write!(f, "({:.6}{:+.6}i)·z", c.re, c.im)?,
                _ => write!(f, "({:.6}{:+.6}i)·z^{}", c.re, c.im, n)?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut coeffs = self.coeffs.clone();
        for (&n, &c) in &rhs.coeffs {
            *coeffs.entry(n).or_insert_with(|| Complex::new(0.0, 0.0)) += c;
        }
        let mut out = LaurentPoly { coeffs };
        out.prune();
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut coeffs = self.coeffs.clone();
        for (&n, &c) in &rhs.coeffs {
            *coeffs.entry(n).or_insert_with(|| Complex::new(0.0, 0.0)) -= c;
        }
        let mut out = LaurentPoly { coeffs };
        out.prune();
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scaled_real(-1.0)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    /// Convolution of coefficient sequences: (fg)_m = Σ_n f_n g_{m−n}.
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut coeffs: BTreeMap<i64, Complex> = BTreeMap::new();
        for (&n, &a) in &self.coeffs {
            for (&m, &b) in &rhs.coeffs {
                let k = n.checked_add(m).expect("exponent overflow in product");
                *coeffs.entry(k).or_insert_with(|| Complex::new(0.0, 0.0)) += a * b;
            }
        }
        let mut out = LaurentPoly { coeffs };
        out.prune();
        out
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// On-disk form of a single term: exponent plus real and imaginary parts.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct CoeffEntry {
    n: i64,
    re: f64,
    im: f64,
}

impl Serialize for LaurentPoly {
    /// Serializes as a list of `{n, re, im}` entries sorted by exponent,
    /// so equal polynomials produce byte-identical JSON.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for (&n, &c) in &self.coeffs {
            seq.serialize_element(&CoeffEntry {
                n,
                re: c.re,
                im: c.im,
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<CoeffEntry>::deserialize(deserializer)?;
        LaurentPoly::from_coeffs(entries.into_iter().map(|e| (e.n, Complex::new(e.re, e.im))))
            .map_err(serde::de::Error::custom)
    }
}
