//! Exact exterior-algebra computations on `2q` anticommuting generators.
//!
//! Elements are stored densely: the coefficient of each ordered monomial
//! `xi^{i_1} xi^{i_2} ... (i_1 < i_2 < ...)` sits in a slot indexed by the
//! subset bitmask of its generators, `4^q` slots in total. The scale of
//! interest never exceeds `q = 8`, so simplicity wins over sparsity.
//!
//! The Berezin integral is normalized so that the top monomial
//! `xi^1 xi^2 ... xi^{2q}` integrates to `+1`; every downstream constant
//! (boundary volume, weight integrals, log integral) is pinned against that
//! convention by the tests here.
//!
//! Coefficients are generic: exact big rationals for identity checks, floats
//! when coupling to quadrature.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::jets::{Jet, Scalar};
use crate::quadrature::{integrate_finite, EndpointKind, QuadratureSpec, TailModel};
use crate::specfun::{gamma_exact_half_integer, gen_binomial, recip_gamma_exact_half_integer};

/// Element of the exterior algebra on `num_generators` anticommuting
/// generators, with coefficients in `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannElement<T> {
    num_generators: usize,
    /// Slot `m` holds the coefficient of the ordered monomial whose
    /// generator set is the bit set of `m`.
    coeffs: Vec<T>,
}

impl<T: Scalar> GrassmannElement<T> {
    /// The zero element of the algebra on the given number of generators.
    ///
    /// # Panics
    /// Panics above 16 generators (the dense table would stop being a desk
    /// quantity).
    pub fn zero(num_generators: usize) -> Self {
        assert!(num_generators <= 16, "dense storage is sized for q <= 8");
        GrassmannElement { num_generators, coeffs: vec![T::zero(); 1 << num_generators] }
    }

    /// The scalar (body-only) element `value`.
    pub fn scalar(num_generators: usize, value: T) -> Self {
        let mut e = Self::zero(num_generators);
        e.coeffs[0] = value;
        e
    }

    /// `coeff * xi^{g_1} xi^{g_2} ...` for strictly increasing 1-based
    /// generator indices.
    ///
    /// # Panics
    /// Panics when indices are out of range or not strictly increasing.
    pub fn monomial(num_generators: usize, generators: &[usize], coeff: T) -> Self {
        let mut e = Self::zero(num_generators);
        let mut mask = 0usize;
        let mut last = 0usize;
        for &g in generators {
            assert!(g >= 1 && g <= num_generators, "generator index {g} out of range");
            assert!(g > last, "generator indices must be strictly increasing");
            last = g;
            mask |= 1 << (g - 1);
        }
        e.coeffs[mask] = coeff;
        e
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    /// Coefficient of the ordered monomial on the given generator set.
    pub fn coefficient(&self, generators: &[usize]) -> &T {
        let mut mask = 0usize;
        for &g in generators {
            assert!(g >= 1 && g <= self.num_generators, "generator index {g} out of range");
            mask |= 1 << (g - 1);
        }
        &self.coeffs[mask]
    }

    /// The scalar part (coefficient of the empty monomial).
    pub fn body(&self) -> &T {
        &self.coeffs[0]
    }

    /// True when every nonzero term has an even number of generators.
    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(m, c)| c.is_zero() || m.count_ones() % 2 == 0)
    }

    pub fn scale(&self, k: T) -> Self {
        GrassmannElement {
            num_generators: self.num_generators,
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
        }
    }

    /// Coefficient of the top monomial `xi^1 ... xi^{2q}`, normalized so the
    /// integral of the top monomial itself is `+1`.
    pub fn berezin_integral(&self) -> T {
        self.coeffs[self.coeffs.len() - 1].clone()
    }
}

impl<T: Scalar> std::ops::Add for GrassmannElement<T> {
    type Output = GrassmannElement<T>;

    fn add(self, rhs: GrassmannElement<T>) -> GrassmannElement<T> {
        assert_eq!(self.num_generators, rhs.num_generators, "generator count mismatch");
        GrassmannElement {
            num_generators: self.num_generators,
            coeffs: self
                .coeffs
                .into_iter()
                .zip(rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: Scalar> std::ops::Neg for GrassmannElement<T> {
    type Output = GrassmannElement<T>;

    fn neg(self) -> GrassmannElement<T> {
        GrassmannElement {
            num_generators: self.num_generators,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<T: Scalar> std::ops::Sub for GrassmannElement<T> {
    type Output = GrassmannElement<T>;

    fn sub(self, rhs: GrassmannElement<T>) -> GrassmannElement<T> {
        self + (-rhs)
    }
}

impl<T: Scalar> std::ops::Mul for GrassmannElement<T> {
    type Output = GrassmannElement<T>;

    /// Exterior product. The sign of each monomial pair counts the
    /// transpositions needed to interleave the two ordered generator lists.
    fn mul(self, rhs: GrassmannElement<T>) -> GrassmannElement<T> {
        assert_eq!(self.num_generators, rhs.num_generators, "generator count mismatch");
        let mut out: GrassmannElement<T> = GrassmannElement::zero(self.num_generators);
        for (ma, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (mb, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() || ma & mb != 0 {
                    continue;
                }
                // Each generator of mb moves left past the generators of ma
                // above it.
                let mut swaps = 0u32;
                let mut rest = mb;
                while rest != 0 {
                    let bit = rest.trailing_zeros();
                    swaps += (ma >> (bit + 1)).count_ones();
                    rest &= rest - 1;
                }
                let term = a.clone() * b.clone();
                let slot = &mut out.coeffs[ma | mb];
                *slot = if swaps % 2 == 0 {
                    slot.clone() + term
                } else {
                    slot.clone() - term
                };
            }
        }
        out
    }
}

/// The squared super-radius of the fermionic block:
/// `xi* xi = 2 sum_{j=1}^{q} xi^{2j-1} xi^{2j}`.
pub fn symplectic_square<T: Scalar>(q: usize) -> GrassmannElement<T> {
    let mut e = GrassmannElement::zero(2 * q);
    let two = T::from_integer(2);
    for j in 0..q {
        e.coeffs[0b11 << (2 * j)] = two.clone();
    }
    e
}

/// Functional calculus `f(a + n) = sum_k f^(k)(a)/k! n^k` for an even
/// nilpotent `n`: substitutes the Grassmann perturbation into the Taylor
/// expansion carried by the jet.
///
/// The jet must reach order `q` (powers of `n` vanish beyond that), and `n`
/// must be even with zero body.
pub fn apply_scalar_function<T: Scalar>(
    f_jet: &Jet<T>,
    n: &GrassmannElement<T>,
) -> Result<GrassmannElement<T>> {
    if !n.is_even() || !n.body().is_zero() {
        return Err(Error::NotAnEvenNilpotent);
    }
    let q = n.num_generators / 2;
    if f_jet.order() < q {
        return Err(Error::JetOrderExceeded { wanted: q, order: f_jet.order() });
    }
    let mut acc = GrassmannElement::scalar(n.num_generators, f_jet.coeff(0).clone());
    let mut power = GrassmannElement::scalar(n.num_generators, T::one());
    for k in 1..=q {
        power = power * n.clone();
        acc = acc + power.scale(f_jet.coeff(k).clone());
    }
    Ok(acc)
}

/// Fermionic weight integral `Int D(xi) (1 - u^2 - xi* xi)^{-1/2}`, by
/// functional calculus and the Berezin integral. Equals
/// `(-2)^q sqrt(pi) / Gamma(1/2 - q) * (1 - u^2)^{-1/2 - q}`.
///
/// # Panics
/// Panics unless `|u| < 1`.
pub fn fermionic_weight_integral(q: usize, u: f64) -> f64 {
    assert!(u.abs() < 1.0, "weight integral needs |u| < 1, got {u}");
    let a = 1.0 - u * u;
    let coeffs: Vec<f64> = (0..=q)
        .map(|k| gen_binomial(-0.5, k) * a.powf(-0.5 - k as f64))
        .collect();
    let n = -symplectic_square::<f64>(q);
    apply_scalar_function(&Jet::from_coeffs(coeffs), &n)
        .expect("xi*xi is even nilpotent")
        .berezin_integral()
}

/// Exact-rational version of [`fermionic_weight_integral`], in units of the
/// common irrational factor `(1 - u^2)^{-1/2}` (which is divided out so the
/// whole computation stays inside the rationals). The closed form for the
/// returned value is `(-2)^q prod_{j=1..q} (1/2 - j) * (1 - u^2)^{-q}`.
pub fn fermionic_weight_integral_exact(q: usize, u: &BigRational) -> BigRational {
    let one = BigRational::from_integer(1.into());
    let a = one.clone() - u * u;
    assert!(a.numer().sign() == num_bigint::Sign::Plus, "weight integral needs |u| < 1");
    let mut binom = one.clone();
    let mut coeffs = Vec::with_capacity(q + 1);
    for k in 0..=q {
        coeffs.push(binom.clone() / num_traits::pow(a.clone(), k));
        // next generalized binomial (-1/2 choose k+1)
        let j = BigRational::from_integer((k as i64).into());
        let half = BigRational::new((-1).into(), 2.into());
        binom = binom * (half - j) / BigRational::from_integer((k as i64 + 1).into());
    }
    let n = -symplectic_square::<BigRational>(q);
    apply_scalar_function(&Jet::from_coeffs(coeffs), &n)
        .expect("xi*xi is even nilpotent")
        .berezin_integral()
}

/// Logarithmic weight integral
/// `Int D(eta) (1 - eta* eta)^{(p-1)/2} log(1 - eta* eta)`
/// for odd `p` and `q >= (p+1)/2` (so that `rho = p/2 - q < 0` is
/// half-integral). Defers to the exact rational expansion.
pub fn log_weight_integral(p: i64, q: i64) -> Result<f64> {
    use num_traits::ToPrimitive;
    let exact = log_weight_integral_exact(p, q)?;
    Ok(exact.to_f64().expect("finite rational"))
}

/// Exact expansion behind [`log_weight_integral`]. The closed form it must
/// reproduce is `(-1)^{(p+1)/2} 2^q Gamma((p+1)/2) Gamma(1/2 - rho)`.
pub fn log_weight_integral_exact(p: i64, q: i64) -> Result<BigRational> {
    if p < 1 || p % 2 == 0 || q < (p + 1) / 2 {
        return Err(Error::ParitySignRegimeError(format!(
            "log weight integral needs odd p >= 1 and q >= (p+1)/2, got p={p}, q={q}"
        )));
    }
    let q = q as usize;
    let m = ((p - 1) / 2) as usize;
    // Jet of x^m log(x) about x = 1 in the shift s = x - 1, to order q:
    // (1 + s)^m times log(1 + s) = sum (-1)^{k+1} s^k / k.
    let mut log_coeffs = vec![BigRational::from_integer(0.into()); q + 1];
    for (k, c) in log_coeffs.iter_mut().enumerate().skip(1) {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        *c = BigRational::new(sign.into(), (k as i64).into());
    }
    let log_jet = Jet::from_coeffs(log_coeffs);
    let shift = Jet::from_coeffs({
        let mut v = vec![BigRational::from_integer(0.into()); q + 1];
        v[0] = BigRational::from_integer(1.into());
        if q >= 1 {
            v[1] = BigRational::from_integer(1.into());
        }
        v
    });
    let f_jet = shift.powi(m as i64).expect("nonnegative power") * log_jet;
    let n = -symplectic_square::<BigRational>(q);
    Ok(apply_scalar_function(&f_jet, &n)?.berezin_integral())
}

/// Riemannian volume of the boundary supersphere of superdimension
/// `2 rho = p - 2q`: `(-1)^q 2^{q+1} pi^{(p+1)/2} / Gamma(rho + 1/2)`.
/// Vanishes exactly when `rho` is half-integral and negative.
pub fn vol_boundary(p: i64, q: i64) -> f64 {
    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
    let pi_pow = std::f64::consts::PI.powf((p as f64 + 1.0) / 2.0);
    // rho + 1/2 = (p - 2q + 1) / 2.
    sign * 2f64.powi(q as i32 + 1) * pi_pow * recip_gamma_exact_half_integer(p - 2 * q + 1)
}

/// Normalization constant relating the invariant density on the boundary
/// orbit K/M to the Riemannian one: `(-1)^q / (sqrt2 (2 pi)^{(p+1)/2})`.
pub fn c_km(p: i64, q: i64) -> f64 {
    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
    sign / (std::f64::consts::SQRT_2 * (2.0 * std::f64::consts::PI).powf((p as f64 + 1.0) / 2.0))
}

/// How the radial profile `h` decays in its argument `x = r^2`; fixes the
/// truncation radius of the bosonic integral.
#[derive(Debug, Clone, Copy)]
pub enum DecayClass {
    /// `h(x) = 0` for `x >= x_max`.
    SupportedIn { x_max: f64 },
    /// `h` and its first `q` derivatives decay like `exp(-rate * x)`.
    ExponentialDecay { rate: f64 },
}

/// Full superspace integral of a radial profile:
///
/// ```text
/// Int |D(x)| h(|x|^2) = A_p Int_0^inf 2^q h^(q)(r^2) r^p dr,
/// A_p = 2 pi^{(p+1)/2} / Gamma((p+1)/2),
/// ```
///
/// where the fermionic directions have been reduced exactly (the Berezin
/// integral of `h(c + xi* xi)` equals `2^q h^(q)(c)`, an identity the test
/// suite re-derives by explicit functional calculus) and the remaining
/// bosonic factor is integrated numerically.
///
/// The profile oracle must return jets of order at least `q` at the
/// requested base point.
pub fn full_super_integral_radial(
    p: i64,
    q: i64,
    h_jet: &mut dyn FnMut(f64) -> Jet<f64>,
    decay: DecayClass,
) -> Result<f64> {
    assert!(p >= 1 && q >= 0, "needs p >= 1, q >= 0");
    let probe = h_jet(0.0);
    if probe.order() < q as usize {
        return Err(Error::JetOrderExceeded { wanted: q as usize, order: probe.order() });
    }
    let r_max = match decay {
        DecayClass::SupportedIn { x_max } => x_max.sqrt(),
        DecayClass::ExponentialDecay { rate } => {
            assert!(rate > 0.0, "decay rate must be positive");
            (55.0 / rate).sqrt()
        }
    };
    let a_p = 2.0 * std::f64::consts::PI.powf((p as f64 + 1.0) / 2.0)
        / gamma_exact_half_integer(p + 1).expect("p + 1 >= 2");
    let two_q = 2f64.powi(q as i32);
    let spec = QuadratureSpec {
        panels: 24,
        nodes_per_panel: 16,
        s_max: r_max,
        tol: 1e-11,
        tail_model: TailModel::None,
    };
    let g = &mut |r: f64| {
        let jet = h_jet(r * r);
        two_q * jet.derivative_at(q as usize).expect("order checked above") * r.powi(p as i32)
    };
    let result = integrate_finite(g, 0.0, r_max, [EndpointKind::Regular; 2], &spec)
        .map_err(|e| Error::IntegralBudgetExceeded(e.to_string()))?;
    Ok(a_p * result.value)
}
