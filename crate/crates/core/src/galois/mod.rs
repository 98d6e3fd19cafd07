//! Arithmetic in `F_p` and `F_{p^2}` and the prime searches that feed the
//! triangle group representations.
//!
//! `F_{p^2}` is realized as `F_p[w] / (w^2 - s)` where `s` is the smallest
//! positive quadratic nonresidue mod `p`, so that every field of a given
//! order has exactly one textual form.

pub mod arith;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use arith::{factorize, is_prime_u64, mul_mod, order_from_multiple, pow_mod};

/// Moduli must leave room for `a + b` without overflow in `u64`.
pub const MAX_MODULUS: u64 = 1 << 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("modulus {0} is too large (must be below 2^63)")]
    ModulusTooLarge(u64),
    #[error("{s} is not a quadratic nonresidue mod {p}")]
    NotNonresidue { p: u64, s: u64 },
    #[error("extension degree {0} unsupported (expected 1 or 2)")]
    BadDegree(u8),
    #[error("coordinate {value} out of range for p={p}")]
    CoordinateOutOfRange { p: u64, value: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("no prime p = 1 (mod {ell}) below the search ceiling {ceiling}")]
    SearchLimit { ell: u64, ceiling: u64 },
    #[error("{ell} does not divide p - 1 = {}", p - 1)]
    NotDivisor { p: u64, ell: u64 },
    #[error("operation needs a prime field, got degree {0}")]
    NeedsPrimeField(u8),
    #[error("cannot factor {0}: beyond the deterministic primality range")]
    FactorizationCeiling(u128),
    #[error("cannot certify primality of {0}: beyond the deterministic range")]
    PrimalityCeiling(u128),
    #[error("ell must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("element has order {found}, expected {expected}")]
    OrderMismatch { expected: u128, found: u128 },
}

/// A finite field of order `p` or `p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    p: u64,
    degree: u8,
    nonresidue: Option<u64>,
}

/// Coordinates `c0 + c1 * w`; `c1` is always zero over a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement {
    pub c0: u64,
    pub c1: u64,
}

impl FieldElement {
    pub const fn new(c0: u64, c1: u64) -> Self {
        FieldElement { c0, c1 }
    }
}

fn check_modulus(p: u64) -> Result<(), FieldError> {
    if p >= MAX_MODULUS {
        return Err(FieldError::ModulusTooLarge(p));
    }
    if p < 3 || p % 2 == 0 || !is_prime_u64(p) {
        return Err(FieldError::NotOddPrime(p));
    }
    Ok(())
}

/// Euler's criterion for `a != 0`.
fn is_residue(a: u64, p: u64) -> bool {
    pow_mod(a, ((p - 1) / 2) as u128, p) == 1
}

pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&s| !is_residue(s, p))
        .expect("every odd prime has a nonresidue")
}

impl FieldSpec {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        check_modulus(p)?;
        Ok(FieldSpec {
            p,
            degree: 1,
            nonresidue: None,
        })
    }

    /// The canonical `F_{p^2}`, adjoining a square root of the smallest
    /// nonresidue.
    pub fn quadratic(p: u64) -> Result<Self, FieldError> {
        check_modulus(p)?;
        Ok(FieldSpec {
            p,
            degree: 2,
            nonresidue: Some(smallest_nonresidue(p)),
        })
    }

    /// `F_{p^2}` with an explicitly given `s`, which must be a nonresidue.
    pub fn with_nonresidue(p: u64, s: u64) -> Result<Self, FieldError> {
        check_modulus(p)?;
        if s == 0 || s >= p || is_residue(s, p) {
            return Err(FieldError::NotNonresidue { p, s });
        }
        Ok(FieldSpec {
            p,
            degree: 2,
            nonresidue: Some(s),
        })
    }

    pub fn from_parts(p: u64, degree: u8, s: Option<u64>) -> Result<Self, FieldError> {
        match (degree, s) {
            (1, None) => Self::prime(p),
            (2, Some(s)) => Self::with_nonresidue(p, s),
            (2, None) => Self::quadratic(p),
            (1, Some(s)) => Err(FieldError::NotNonresidue { p, s }),
            (d, _) => Err(FieldError::BadDegree(d)),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn nonresidue(&self) -> Option<u64> {
        self.nonresidue
    }

    /// `|F| = p^degree`.
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.degree as u32)
    }

    /// The quadratic extension of this field's prime field.
    pub fn upgraded(&self) -> FieldSpec {
        match self.degree {
            2 => *self,
            _ => FieldSpec::quadratic(self.p).expect("modulus already validated"),
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::default()
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::new(1, 0)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        FieldElement::new(v.rem_euclid(self.p as i64) as u64, 0)
    }

    pub fn from_u64(&self, v: u64) -> FieldElement {
        FieldElement::new(v % self.p, 0)
    }

    /// `c1 * w` needs the extension; checked here.
    pub fn element(&self, c0: u64, c1: u64) -> Result<FieldElement, FieldError> {
        for v in [c0, c1] {
            if v >= self.p {
                return Err(FieldError::CoordinateOutOfRange { p: self.p, value: v });
            }
        }
        if self.degree == 1 && c1 != 0 {
            return Err(FieldError::NeedsPrimeField(1));
        }
        Ok(FieldElement::new(c0, c1))
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.c0 < self.p && x.c1 < self.p && (self.degree == 2 || x.c1 == 0)
    }

    pub fn is_zero(&self, x: FieldElement) -> bool {
        x.c0 == 0 && x.c1 == 0
    }

    #[inline]
    fn add_mod(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub_mod(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement::new(self.add_mod(x.c0, y.c0), self.add_mod(x.c1, y.c1))
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement::new(self.sub_mod(x.c0, y.c0), self.sub_mod(x.c1, y.c1))
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        self.sub(self.zero(), x)
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let p = self.p;
        let c0 = mul_mod(x.c0, y.c0, p);
        if self.degree == 1 {
            return FieldElement::new(c0, 0);
        }
        let s = self.nonresidue.unwrap_or(0);
        let cross = mul_mod(mul_mod(x.c1, y.c1, p), s, p);
        FieldElement::new(
            self.add_mod(c0, cross),
            self.add_mod(mul_mod(x.c0, y.c1, p), mul_mod(x.c1, y.c0, p)),
        )
    }

    pub fn square(&self, x: FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    pub fn pow(&self, mut x: FieldElement, mut exp: u128) -> FieldElement {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            exp >>= 1;
        }
        acc
    }

    /// `(a + b w)^{-1} = (a - b w) / (a^2 - s b^2)`; the denominator is the
    /// norm, which vanishes only at zero because `s` is a nonresidue.
    pub fn inv(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        if self.is_zero(x) {
            return Err(FieldError::DivisionByZero);
        }
        let p = self.p;
        if self.degree == 1 {
            return Ok(FieldElement::new(pow_mod(x.c0, (p - 2) as u128, p), 0));
        }
        let s = self.nonresidue.unwrap_or(0);
        let norm = self.sub_mod(mul_mod(x.c0, x.c0, p), mul_mod(mul_mod(x.c1, x.c1, p), s, p));
        let norm_inv = pow_mod(norm, (p - 2) as u128, p);
        Ok(FieldElement::new(
            mul_mod(x.c0, norm_inv, p),
            mul_mod(self.sub_mod(0, x.c1), norm_inv, p),
        ))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Square root in the prime field (Tonelli-Shanks). `None` for
    /// nonresidues. Of the two roots the one returned is whatever the
    /// algorithm lands on, which is deterministic.
    pub fn sqrt_mod_p(&self, a: FieldElement) -> Result<Option<FieldElement>, FieldError> {
        if a.c1 != 0 {
            return Err(FieldError::NeedsPrimeField(self.degree));
        }
        Ok(tonelli_shanks(a.c0 % self.p, self.p).map(|r| FieldElement::new(r, 0)))
    }

    /// A square root of an element of the prime subfield, taken in
    /// `F_{p^2}` when needed: for a nonresidue `a`, `a / s` is a residue and
    /// `sqrt(a) = sqrt(a / s) * w`. Requires `self` to be the quadratic field
    /// whenever `a` is a nonresidue.
    pub fn sqrt_prime_subfield(&self, a: u64) -> Result<FieldElement, FieldError> {
        let p = self.p;
        if let Some(r) = tonelli_shanks(a % p, p) {
            return Ok(FieldElement::new(r, 0));
        }
        let s = self.nonresidue.ok_or(FieldError::NeedsPrimeField(self.degree))?;
        let s_inv = pow_mod(s, (p - 2) as u128, p);
        let k = tonelli_shanks(mul_mod(a % p, s_inv, p), p)
            .expect("quotient of two nonresidues is a residue");
        Ok(FieldElement::new(0, k))
    }

    /// Exact multiplicative order, via the factorization of `|F^*|`.
    pub fn element_order(&self, x: FieldElement) -> Result<u128, FieldError> {
        if self.is_zero(x) {
            return Err(FieldError::DivisionByZero);
        }
        let group_order = self.order() - 1;
        order_from_multiple(group_order, |k| self.pow(x, k) == self.one())
    }

    pub fn fmt_element(&self, x: FieldElement) -> String {
        ElementDisplay { spec: *self, x }.to_string()
    }
}

struct ElementDisplay {
    spec: FieldSpec,
    x: FieldElement,
}

impl fmt::Display for ElementDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.spec.degree {
            1 => write!(f, "{}", self.x.c0),
            _ => write!(f, "{}+{}*w", self.x.c0, self.x.c1),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.nonresidue {
            Some(s) => write!(f, "field p={} deg={} s={}", self.p, self.degree, s),
            None => write!(f, "field p={} deg={}", self.p, self.degree),
        }
    }
}

fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    if !is_residue(a, p) {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, ((p + 1) / 4) as u128, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = smallest_nonresidue(p);
    let mut m = s;
    let mut c = pow_mod(z, q as u128, p);
    let mut t = pow_mod(a, q as u128, p);
    let mut r = pow_mod(a, ((q + 1) / 2) as u128, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u128 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Result of searching the progression `1 (mod ell)` for its least prime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProgressionPrime {
    pub p: u64,
    pub ell: u64,
    /// `p / ell^5.18`, the observed constant against the Xylouris exponent.
    pub linnik_ratio: f64,
}

pub const DEFAULT_PRIME_CEILING: u64 = 1_000_000_000;

/// Smallest prime `p = 1 (mod ell)` with `p <= ceiling`.
pub fn smallest_prime_in_progression(ell: u64, ceiling: u64) -> Result<ProgressionPrime, FieldError> {
    if ell < 2 {
        return Err(FieldError::ModulusTooSmall(ell));
    }
    let mut candidate = ell.checked_add(1);
    while let Some(p) = candidate {
        if p > ceiling || p >= MAX_MODULUS {
            break;
        }
        if is_prime_u64(p) {
            return Ok(ProgressionPrime {
                p,
                ell,
                linnik_ratio: p as f64 / (ell as f64).powf(5.18),
            });
        }
        candidate = p.checked_add(ell);
    }
    Err(FieldError::SearchLimit { ell, ceiling })
}

/// Smallest generator of `F_p^*`.
pub fn primitive_root(p: u64) -> Result<u64, FieldError> {
    check_modulus(p)?;
    let factors = factorize((p - 1) as u128)?;
    let g = (2..p)
        .find(|&g| {
            factors
                .iter()
                .all(|&(q, _)| pow_mod(g, ((p - 1) as u128) / q, p) != 1)
        })
        .expect("F_p^* is cyclic");
    Ok(g)
}

/// Element of exact multiplicative order `ell` in `F_p`, taken as
/// `g^((p-1)/ell)` for the smallest primitive root `g`.
pub fn root_of_unity(p: u64, ell: u64) -> Result<FieldElement, FieldError> {
    check_modulus(p)?;
    if ell == 0 || (p - 1) % ell != 0 {
        return Err(FieldError::NotDivisor { p, ell });
    }
    let g = primitive_root(p)?;
    let zeta = pow_mod(g, ((p - 1) / ell) as u128, p);
    verify_exact_order(p, zeta, ell)?;
    Ok(FieldElement::new(zeta, 0))
}

/// Checks `zeta^ell = 1` and `zeta^(ell/q) != 1` for each prime `q | ell`.
pub fn verify_exact_order(p: u64, zeta: u64, ell: u64) -> Result<(), FieldError> {
    if pow_mod(zeta, ell as u128, p) != 1 {
        let spec = FieldSpec::prime(p)?;
        let found = spec.element_order(FieldElement::new(zeta, 0))?;
        return Err(FieldError::OrderMismatch {
            expected: ell as u128,
            found,
        });
    }
    for (q, _) in factorize(ell as u128)? {
        if pow_mod(zeta, (ell as u128) / q, p) == 1 {
            let spec = FieldSpec::prime(p)?;
            let found = spec.element_order(FieldElement::new(zeta, 0))?;
            return Err(FieldError::OrderMismatch {
                expected: ell as u128,
                found,
            });
        }
    }
    Ok(())
}
