//! Truncated Taylor arithmetic ("jets").
//!
//! A [`Jet`] of order `N` holds the Taylor coefficients `c_0..c_N` of a
//! function about a base point chosen by the caller, with `c_k = f^(k)/k!`.
//! Every derivative-at-a-point quantity in this crate (residue generating
//! functions, boundary-term derivatives, radial derivative chains) is
//! computed through jet operations; finite differences appear only as test
//! oracles.
//!
//! Coefficients are always local to the evaluation point. The base point
//! itself is not stored: all arithmetic assumes both operands are expansions
//! about the same point, which is the caller's contract to uphold.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Coefficient ring shared by jets and exterior-algebra elements.
/// Implemented for `f64`, `Complex64`, and exact big rationals.
pub trait Scalar:
    Clone
    + PartialEq
    + std::fmt::Debug
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
{
    /// Exact embedding of small integers.
    fn from_integer(n: i64) -> Self;

    /// Multiplicative inverse, or `None` when not invertible.
    fn try_recip(&self) -> Option<Self>;
}

impl Scalar for f64 {
    fn from_integer(n: i64) -> Self {
        n as f64
    }

    fn try_recip(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
}

impl Scalar for Complex64 {
    fn from_integer(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn try_recip(&self) -> Option<Self> {
        if self.re == 0.0 && self.im == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
}

impl Scalar for num_rational::BigRational {
    fn from_integer(n: i64) -> Self {
        num_rational::BigRational::from_integer(n.into())
    }

    fn try_recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Scalars supporting the analytic operations needed by fractional powers,
/// logarithms, and exponentials of jets.
pub trait Analytic: Scalar {
    /// True when the value lies on the positive real axis; fractional powers
    /// and logarithms of jets are only admitted for such constant terms.
    fn is_positive_real(&self) -> bool;

    /// Multiplication by a real scalar.
    fn scale(&self, k: f64) -> Self;

    fn pow_real(&self, alpha: f64) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
}

impl Analytic for f64 {
    fn is_positive_real(&self) -> bool {
        *self > 0.0
    }

    fn scale(&self, k: f64) -> Self {
        self * k
    }

    fn pow_real(&self, alpha: f64) -> Self {
        self.powf(alpha)
    }

    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }
}

impl Analytic for Complex64 {
    fn is_positive_real(&self) -> bool {
        self.im == 0.0 && self.re > 0.0
    }

    fn scale(&self, k: f64) -> Self {
        self * k
    }

    fn pow_real(&self, alpha: f64) -> Self {
        self.powf(alpha)
    }

    fn ln(&self) -> Self {
        Complex64::ln(*self)
    }

    fn exp(&self) -> Self {
        Complex64::exp(*self)
    }
}

/// Order-`N` truncated Taylor expansion with coefficients `c_0..c_N`.
///
/// Arithmetic agrees exactly with polynomial arithmetic truncated at degree
/// `N`. Binary operations require equal orders (a programming contract, so a
/// mismatch panics rather than returning an error).
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T = Complex64> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Jet<T> {
    /// Jet with the given coefficients `c_0..c_N`; the order is `len - 1`.
    ///
    /// # Panics
    /// Panics on an empty coefficient list.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least the constant term");
        Jet { coeffs }
    }

    /// The constant function `value`, as a jet of the given order.
    pub fn constant(value: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// The coordinate function centered at the base point: constant term
    /// `value_at_base`, first coefficient one.
    pub fn coordinate(value_at_base: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = value_at_base;
        if order >= 1 {
            coeffs[1] = T::one();
        }
        Jet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    /// Copy truncated (or zero-extended) to the given order.
    pub fn resized(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, T::zero());
        coeffs.truncate(order + 1);
        Jet { coeffs }
    }

    fn assert_same_order(&self, other: &Self) {
        assert_eq!(
            self.coeffs.len(),
            other.coeffs.len(),
            "jet order mismatch: {} vs {}",
            self.order(),
            other.order()
        );
    }

    /// Quotient of jets. The divisor must have an invertible constant term.
    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        self.assert_same_order(rhs);
        let inv0 = rhs.coeffs[0].try_recip().ok_or(Error::JetNotInvertible)?;
        let n = self.coeffs.len();
        let mut q = vec![T::zero(); n];
        for k in 0..n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc = acc - rhs.coeffs[j].clone() * q[k - j].clone();
            }
            q[k] = inv0.clone() * acc;
        }
        Ok(Jet { coeffs: q })
    }

    /// Integer power by binary exponentiation. Negative exponents require an
    /// invertible constant term.
    pub fn powi(&self, n: i64) -> Result<Self> {
        let base = if n < 0 {
            Jet::constant(T::one(), self.order()).try_div(self)?
        } else {
            self.clone()
        };
        let mut e = n.unsigned_abs();
        let mut acc = Jet::constant(T::one(), self.order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            sq = sq.clone() * sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Composition `outer(inner(s))` by Horner evaluation in the jet ring.
    /// The inner jet must have zero constant term, so that the composite is
    /// again an expansion about the same base point.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::JetDomainError(
                "composition requires inner constant term zero",
            ));
        }
        let order = self.order().max(inner.order());
        let inner = inner.resized(order);
        let mut acc = Jet::constant(self.coeffs[self.order()].clone(), order);
        for k in (0..self.order()).rev() {
            acc = acc * inner.clone() + Jet::constant(self.coeffs[k].clone(), order);
        }
        Ok(acc)
    }

    /// The `k`-th derivative at the base point, `k! * c_k`.
    pub fn derivative_at(&self, k: usize) -> Result<T> {
        if k > self.order() {
            return Err(Error::JetOrderExceeded { wanted: k, order: self.order() });
        }
        let mut acc = self.coeffs[k].clone();
        for j in 2..=k as i64 {
            acc = acc * T::from_integer(j);
        }
        Ok(acc)
    }

    /// Derivative jet, one order lower.
    ///
    /// # Panics
    /// Panics on a jet of order 0 (nothing is known about its derivative).
    pub fn derivative(&self) -> Self {
        assert!(self.order() >= 1, "derivative of an order-0 jet is undetermined");
        let coeffs = (1..self.coeffs.len())
            .map(|k| self.coeffs[k].clone() * T::from_integer(k as i64))
            .collect();
        Jet { coeffs }
    }

    /// Antiderivative with the given constant term, truncated to the same
    /// order (the top coefficient of the input does not fit and is dropped).
    pub fn antiderivative(&self, constant: T) -> Self {
        let n = self.coeffs.len();
        let mut coeffs = vec![constant; n];
        for k in 1..n {
            let inv = T::from_integer(k as i64).try_recip().expect("nonzero integer");
            coeffs[k] = self.coeffs[k - 1].clone() * inv;
        }
        Jet { coeffs }
    }
}

impl<T: Scalar> Jet<T> {
    /// Real power `a^alpha`. Integer `alpha` reduces to [`Jet::powi`] (no
    /// positivity requirement); fractional `alpha` requires a positive real
    /// constant term and uses the power-series recurrence
    /// `k p_k = sum_{j=1..k} ((alpha+1) j - k) u_j p_{k-j}` for `u = a/c_0`.
    pub fn pow(&self, alpha: f64) -> Result<Self>
    where
        T: Analytic,
    {
        if alpha.fract() == 0.0 && alpha.abs() < 9.0e15 {
            return self.powi(alpha as i64);
        }
        let c0 = self.coeffs[0].clone();
        if !c0.is_positive_real() {
            return Err(Error::JetDomainError(
                "fractional power requires a positive real constant term",
            ));
        }
        let inv0 = c0.try_recip().expect("positive constant term");
        let n = self.coeffs.len();
        let u: Vec<T> = self.coeffs.iter().map(|c| c.clone() * inv0.clone()).collect();
        let mut p = vec![T::zero(); n];
        p[0] = T::one();
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                let factor = (alpha + 1.0) * j as f64 - k as f64;
                acc = acc + (u[j].clone() * p[k - j].clone()).scale(factor);
            }
            p[k] = acc.scale(1.0 / k as f64);
        }
        let lead = c0.pow_real(alpha);
        Ok(Jet { coeffs: p.into_iter().map(|c| c * lead.clone()).collect() })
    }

    /// Logarithm of a jet with positive real constant term, via
    /// `d_k = b_k - sum_{j=1..k-1} (j/k) d_j b_{k-j}` for `b = a/c_0`.
    pub fn log(&self) -> Result<Self>
    where
        T: Analytic,
    {
        let c0 = self.coeffs[0].clone();
        if !c0.is_positive_real() {
            return Err(Error::JetDomainError(
                "logarithm requires a positive real constant term",
            ));
        }
        let inv0 = c0.try_recip().expect("positive constant term");
        let n = self.coeffs.len();
        let b: Vec<T> = self.coeffs.iter().map(|c| c.clone() * inv0.clone()).collect();
        let mut d = vec![T::zero(); n];
        d[0] = c0.ln();
        for k in 1..n {
            let mut acc = b[k].clone();
            for j in 1..k {
                acc = acc - (d[j].clone() * b[k - j].clone()).scale(j as f64 / k as f64);
            }
            d[k] = acc;
        }
        Ok(Jet { coeffs: d })
    }

    /// Exponential of a jet, via `k e_k = sum_{j=1..k} j a_j e_{k-j}`.
    pub fn exp(&self) -> Self
    where
        T: Analytic,
    {
        let n = self.coeffs.len();
        let mut e = vec![T::zero(); n];
        e[0] = self.coeffs[0].exp();
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + (self.coeffs[j].clone() * e[k - j].clone()).scale(j as f64);
            }
            e[k] = acc.scale(1.0 / k as f64);
        }
        Jet { coeffs: e }
    }
}

impl<T: Scalar> std::ops::Add for Jet<T> {
    type Output = Jet<T>;

    fn add(self, rhs: Jet<T>) -> Jet<T> {
        self.assert_same_order(&rhs);
        let coeffs = self
            .coeffs
            .into_iter()
            .zip(rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Jet { coeffs }
    }
}

impl<T: Scalar> std::ops::Sub for Jet<T> {
    type Output = Jet<T>;

    fn sub(self, rhs: Jet<T>) -> Jet<T> {
        self.assert_same_order(&rhs);
        let coeffs = self
            .coeffs
            .into_iter()
            .zip(rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Jet { coeffs }
    }
}

impl<T: Scalar> std::ops::Mul for Jet<T> {
    type Output = Jet<T>;

    /// Truncated Cauchy product.
    fn mul(self, rhs: Jet<T>) -> Jet<T> {
        self.assert_same_order(&rhs);
        let n = self.coeffs.len();
        let mut coeffs = vec![T::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Jet { coeffs }
    }
}

impl<T: Scalar> std::ops::Neg for Jet<T> {
    type Output = Jet<T>;

    fn neg(self) -> Jet<T> {
        Jet { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}
