//! Representations of triangle groups `T(n1, n2, n3) = <x, y | x^n1, y^n2, (xy)^n3>`
//! into `PSL(2, F)` for small finite fields `F`.
//!
//! Hyperbolic triples with coprime entries use the integral representation
//!
//! ```text
//! x -> [[C1, 1], [-1, 0]],   y -> T_r [[C2, 1], [-1, 0]] T_r^-1,   T_r = [[1, r], [0, 1]]
//! ```
//!
//! with `Ck = 2 cos(pi / nk)` and `r` a root of
//! `r^2 + r (C1 - C2) + (2 - C1 C2 - C3)`, reduced modulo a prime above the
//! least prime `p = 1 (mod l)`, `l = 2 lcm(n1, n2, n3)`. Modulo such a prime
//! the cosines are `zeta^(l / 2nk) + zeta^(-l / 2nk)` for `zeta` of order `l`
//! in `F_p`, and `r` lies in `F_p` or `F_{p^2}`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::certificate::{Certificate, CertificateBody, Level};
use crate::galois::arith::{factorize, gcd, lcm, totient};
use crate::galois::{
    root_of_unity, smallest_prime_in_progression, verify_exact_order, FieldElement, FieldError, FieldSpec,
    ProgressionPrime,
};
use crate::presentation::{GroupPresentation, Word};
use crate::projmat::{enumerate_psl, MatrixError, ProjMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangleError {
    #[error("triangle group orders must be at least 2, got ({0}, {1}, {2})")]
    OrderTooSmall(u64, u64, u64),
    #[error("expected a hyperbolic triple with coprime entries")]
    NotHyperbolicCoprime,
    #[error("triple is hyperbolic with coprime entries; use the reduced representation")]
    NeedsHyperbolicBuild,
    #[error("verification of the built representation failed: {0}")]
    Verification(String),
    #[error("no representation found in PSL(2, q) for q <= 9")]
    SearchExhausted,
    #[error("cosine order {0} does not divide l/2")]
    BadCosineIndex(u64),
    #[error("n must exceed 2, got {0}")]
    NormIndex(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Curvature {
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl fmt::Display for Curvature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Curvature::Spherical => "spherical",
            Curvature::Euclidean => "euclidean",
            Curvature::Hyperbolic => "hyperbolic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TriangleType {
    /// Sorted ascending.
    pub n: [u64; 3],
    /// `2 lcm(n1, n2, n3)`
    pub ell: u64,
    /// `gcd(n1, n2, n3)`
    pub d: u64,
    pub curvature: Curvature,
}

impl TriangleType {
    pub fn is_hyperbolic_coprime(&self) -> bool {
        self.curvature == Curvature::Hyperbolic && self.d == 1
    }
}

impl fmt::Display for TriangleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n[0], self.n[1], self.n[2])
    }
}

pub fn classify(n1: u64, n2: u64, n3: u64) -> Result<TriangleType, TriangleError> {
    if n1 < 2 || n2 < 2 || n3 < 2 {
        return Err(TriangleError::OrderTooSmall(n1, n2, n3));
    }
    let mut n = [n1, n2, n3];
    n.sort_unstable();
    let [a, b, c] = n.map(|v| v as u128);
    // 1/a + 1/b + 1/c vs 1, cleared of denominators
    let curvature = match (b * c + a * c + a * b).cmp(&(a * b * c)) {
        Ordering::Greater => Curvature::Spherical,
        Ordering::Equal => Curvature::Euclidean,
        Ordering::Less => Curvature::Hyperbolic,
    };
    let ell = 2 * lcm(lcm(a, b), c);
    let d = gcd(gcd(a, b), c);
    Ok(TriangleType {
        n,
        ell: u64::try_from(ell).expect("lcm of three u64 values below 2^63"),
        d: d as u64,
        curvature,
    })
}

/// `zeta^(l/2n) + zeta^(-l/2n)` for each `n`, the image of `2 cos(pi/n)`.
pub fn reduced_cosines_with(
    spec: FieldSpec,
    ell: u64,
    zeta: FieldElement,
    n: [u64; 3],
) -> Result<[FieldElement; 3], TriangleError> {
    let mut out = [spec.zero(); 3];
    for (k, &nk) in n.iter().enumerate() {
        if ell % (2 * nk) != 0 {
            return Err(TriangleError::BadCosineIndex(nk));
        }
        let z = spec.pow(zeta, (ell / (2 * nk)) as u128);
        out[k] = spec.add(z, spec.inv(z)?);
    }
    Ok(out)
}

/// The canonical `zeta` for `(p, l)` and the three reduced cosines.
pub fn reduced_cosines(p: u64, ell: u64, n: [u64; 3]) -> Result<(FieldElement, [FieldElement; 3]), TriangleError> {
    let spec = FieldSpec::prime(p)?;
    let zeta = root_of_unity(p, ell)?;
    Ok((zeta, reduced_cosines_with(spec, ell, zeta, n)?))
}

/// Root of `r^2 + r (C1 - C2) + (2 - C1 C2 - C3)`, moving to `F_{p^2}` when
/// the discriminant is a nonresidue. Returns the field, `r`, and whether the
/// discriminant was a square in `F_p`.
pub fn solve_r(
    spec: FieldSpec,
    c: [FieldElement; 3],
) -> Result<(FieldSpec, FieldElement, bool), TriangleError> {
    let f = spec;
    let [c1, c2, c3] = c;
    let b = f.sub(c1, c2);
    let c0 = f.sub(f.sub(f.from_u64(2), f.mul(c1, c2)), c3);
    let disc = f.sub(f.square(b), f.mul(f.from_u64(4), c0));
    let half = f.inv(f.from_u64(2))?;
    match f.sqrt_mod_p(disc)? {
        Some(root) => Ok((spec, f.mul(f.sub(root, b), half), true)),
        None => {
            let big = spec.upgraded();
            let root = big.sqrt_prime_subfield(disc.c0)?;
            Ok((big, big.mul(big.sub(root, b), half), false))
        }
    }
}

pub fn quadratic_residual(spec: FieldSpec, c: [FieldElement; 3], r: FieldElement) -> FieldElement {
    let f = spec;
    let [c1, c2, c3] = c;
    let lin = f.mul(r, f.sub(c1, c2));
    let c0 = f.sub(f.sub(f.from_u64(2), f.mul(c1, c2)), c3);
    f.add(f.add(f.square(r), lin), c0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepChecks {
    pub orders: [u128; 3],
    pub nonabelian: bool,
    /// `r` satisfies its quadratic.
    pub quadratic_ok: bool,
    /// `tr(xy) = ±C3`.
    pub trace_ok: bool,
}

#[derive(Debug, Clone)]
pub struct ReducedRepData {
    pub triangle: TriangleType,
    pub prime: ProgressionPrime,
    pub spec: FieldSpec,
    pub zeta: FieldElement,
    pub cosines: [FieldElement; 3],
    pub r: FieldElement,
    pub discriminant_is_square: bool,
    pub x: ProjMatrix,
    pub y: ProjMatrix,
    pub checks: RepChecks,
}

impl ReducedRepData {
    /// Triangle-group-level certificate for this representation.
    pub fn certificate(&self) -> Certificate {
        rep_certificate(&self.triangle, self.spec, self.x, self.y)
    }
}

pub fn build_hyperbolic_rep(t: &TriangleType, ceiling: u64) -> Result<ReducedRepData, TriangleError> {
    if !t.is_hyperbolic_coprime() {
        return Err(TriangleError::NotHyperbolicCoprime);
    }
    let prime = smallest_prime_in_progression(t.ell, ceiling)?;
    let zeta = root_of_unity(prime.p, t.ell)?;
    build_hyperbolic_rep_with(t, prime, zeta)
}

/// Same construction with a caller-chosen `zeta` of order `l`.
pub fn build_hyperbolic_rep_with(
    t: &TriangleType,
    prime: ProgressionPrime,
    zeta: FieldElement,
) -> Result<ReducedRepData, TriangleError> {
    if !t.is_hyperbolic_coprime() {
        return Err(TriangleError::NotHyperbolicCoprime);
    }
    verify_exact_order(prime.p, zeta.c0, t.ell)?;
    let base = FieldSpec::prime(prime.p)?;
    let cosines = reduced_cosines_with(base, t.ell, zeta, t.n)?;
    let (spec, r, discriminant_is_square) = solve_r(base, cosines)?;
    let f = spec;
    let [c1, c2, c3] = cosines;
    let one = f.one();
    let x = ProjMatrix::new(f, [c1, one, f.neg(one), f.zero()])?;
    let y_b = f.add(f.sub(f.square(r), f.mul(r, c2)), one);
    let y = ProjMatrix::new(f, [f.sub(c2, r), y_b, f.neg(one), r])?;

    let xy = x.mul(&y)?;
    let yx = y.mul(&x)?;
    let cap = t.n[2] as u128;
    let orders = [x.projective_order(cap)?, y.projective_order(cap)?, xy.projective_order(cap)?];
    let tr = xy.trace();
    let checks = RepChecks {
        orders,
        nonabelian: xy != yx,
        quadratic_ok: f.is_zero(quadratic_residual(f, cosines, r)),
        trace_ok: tr == c3 || tr == f.neg(c3),
    };
    let expected = t.n.map(|v| v as u128);
    if checks.orders != expected || !checks.nonabelian || !checks.quadratic_ok || !checks.trace_ok {
        return Err(TriangleError::Verification(format!("{t}: {checks:?}")));
    }
    Ok(ReducedRepData {
        triangle: *t,
        prime,
        spec,
        zeta,
        cosines,
        r,
        discriminant_is_square,
        x,
        y,
        checks,
    })
}

fn triangle_presentation(t: &TriangleType) -> GroupPresentation {
    GroupPresentation::triangle_group(t.n[0] as u32, t.n[1] as u32, t.n[2] as u32)
}

fn commutator_witness() -> (Word, Word) {
    let xy = Word::from_letters(vec![(0, 1), (1, 1)]);
    let yx = Word::from_letters(vec![(1, 1), (0, 1)]);
    (xy, yx)
}

pub(crate) fn rep_certificate(t: &TriangleType, spec: FieldSpec, x: ProjMatrix, y: ProjMatrix) -> Certificate {
    Certificate {
        level: Level::Orbifold,
        presentation: triangle_presentation(t),
        body: CertificateBody::NonAbelianRep {
            spec,
            names: vec!["x".into(), "y".into()],
            matrices: vec![x.entries(), y.entries()],
            surjection: None,
            witness: commutator_witness(),
        },
    }
}

fn abelian_certificate(t: &TriangleType, d: u64) -> Certificate {
    Certificate {
        level: Level::Orbifold,
        presentation: triangle_presentation(t),
        body: CertificateBody::NonCyclicAbelian {
            target: (BigInt::from(d), BigInt::from(d)),
            images: vec![
                (BigInt::from(1), BigInt::from(0)),
                (BigInt::from(0), BigInt::from(1)),
            ],
        },
    }
}

/// Which construction a triple falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertCase {
    /// `d > 1`: onto `(Z/d)^2`.
    CommonDivisor,
    /// `(2,3,3), (2,3,4), (2,3,5)`: search in `PSL(2, q)`, `q <= 9`.
    SphericalSearch,
    /// `(2,3,6)` through the `(2,3,3)` images.
    Euclidean236,
    /// `(2,2,m)`, `m` odd: a dihedral image.
    Dihedral,
    /// Hyperbolic and coprime: the reduced representation.
    Hyperbolic,
}

pub fn cert_case(t: &TriangleType) -> CertCase {
    if t.d > 1 {
        CertCase::CommonDivisor
    } else if t.curvature == Curvature::Hyperbolic {
        CertCase::Hyperbolic
    } else if t.n == [2, 3, 6] {
        CertCase::Euclidean236
    } else if t.n[0] == 2 && t.n[1] == 2 {
        CertCase::Dihedral
    } else {
        CertCase::SphericalSearch
    }
}

/// Certificate for a triple not handled by [`build_hyperbolic_rep`].
pub fn build_nonhyperbolic_cert(t: &TriangleType) -> Result<Certificate, TriangleError> {
    match cert_case(t) {
        CertCase::CommonDivisor => Ok(abelian_certificate(t, t.d)),
        CertCase::Hyperbolic => Err(TriangleError::NeedsHyperbolicBuild),
        CertCase::Euclidean236 => {
            let (spec, x, y) = spherical_search([2, 3, 3])?;
            Ok(rep_certificate(t, spec, x, y))
        }
        CertCase::SphericalSearch => {
            let (spec, x, y) = spherical_search(t.n)?;
            Ok(rep_certificate(t, spec, x, y))
        }
        CertCase::Dihedral => {
            let (spec, x, y) = dihedral_images(t.n[2])?;
            Ok(rep_certificate(t, spec, x, y))
        }
    }
}

/// Fields searched for the spherical triples, in order: `q = 3, 5, 7, 9`.
pub fn spherical_fields() -> Vec<FieldSpec> {
    vec![
        FieldSpec::prime(3).expect("prime"),
        FieldSpec::prime(5).expect("prime"),
        FieldSpec::prime(7).expect("prime"),
        FieldSpec::quadratic(3).expect("prime"),
    ]
}

/// First pair `(A, B)` in enumeration order with projective orders
/// `(n1, n2)`, `AB` of order `n3`, and `AB != BA`.
pub fn spherical_search(n: [u64; 3]) -> Result<(FieldSpec, ProjMatrix, ProjMatrix), TriangleError> {
    for spec in spherical_fields() {
        let elements = enumerate_psl(spec);
        let orders: Vec<u128> = elements
            .iter()
            .map(|m| m.projective_order_unbounded())
            .collect::<Result<_, _>>()?;
        let with_order =
            |k: u64| elements.iter().zip(&orders).filter(move |(_, &o)| o == k as u128).map(|(m, _)| *m);
        for a in with_order(n[0]) {
            for b in with_order(n[1]) {
                let ab = a.mul(&b)?;
                if ab != b.mul(&a)? && ab.projective_order_unbounded()? == n[2] as u128 {
                    return Ok((spec, a, b));
                }
            }
        }
    }
    Err(TriangleError::SearchExhausted)
}

/// `x -> [[i, 0], [0, -i]]`, `y -> [[i, i], [0, -i]]` with `i^2 = -1`, over
/// `F_p` when `p = 1 (mod 4)` and `F_{p^2}` otherwise, `p` the least prime
/// factor of `m`. Then `xy = -[[1, 1], [0, 1]]` has order `p`.
pub fn dihedral_images(m: u64) -> Result<(FieldSpec, ProjMatrix, ProjMatrix), TriangleError> {
    let p = factorize(m as u128)?
        .first()
        .map(|&(q, _)| q as u64)
        .ok_or(TriangleError::OrderTooSmall(2, 2, m))?;
    let spec = if p % 4 == 1 {
        FieldSpec::prime(p)?
    } else {
        FieldSpec::quadratic(p)?
    };
    let i = spec.sqrt_prime_subfield(p - 1)?;
    let neg_i = spec.neg(i);
    let x = ProjMatrix::new(spec, [i, spec.zero(), spec.zero(), neg_i])?;
    let y = ProjMatrix::new(spec, [i, i, spec.zero(), neg_i])?;
    Ok((spec, x, y))
}

/// Integer norm from `Q(zeta_2n)` of `2 cos(pi/n)` (`Plain`) or
/// `2 cos(pi/n) - 2` (`MinusTwo`), by the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormVariant {
    Plain,
    MinusTwo,
}

pub fn cosine_norm(n: u64, variant: NormVariant) -> Result<u64, TriangleError> {
    if n <= 2 {
        return Err(TriangleError::NormIndex(n));
    }
    Ok(match variant {
        NormVariant::Plain => match prime_power_base(n / 2) {
            Some(q) if n % 2 == 0 => q * q,
            _ => 1,
        },
        NormVariant::MinusTwo => {
            if n.is_power_of_two() {
                4
            } else {
                1
            }
        }
    })
}

/// `prod |2 cos(2 pi l / 2n) - shift|` over `1 <= l < 2n` coprime to `2n`.
pub fn cosine_norm_numeric(n: u64, shift: f64) -> f64 {
    let two_n = 2 * n;
    (1..two_n)
        .filter(|&l| gcd(l as u128, two_n as u128) == 1)
        .map(|l| (2.0 * (std::f64::consts::PI * l as f64 / n as f64).cos() - shift).abs())
        .product()
}

/// `q` when `n = q^e` for a prime `q` and `e >= 1`.
pub fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let f = factorize(n as u128).expect("u64 is in range");
    (f.len() == 1).then(|| f[0].0 as u64)
}

/// Coefficients of the `k`-th cyclotomic polynomial, constant term first,
/// by exact division of `x^k - 1` by `Phi_d` for the proper divisors `d`.
pub fn cyclotomic_polynomial(k: u64) -> Vec<BigInt> {
    let mut table: Vec<Option<Vec<BigInt>>> = vec![None; k as usize + 1];
    cyclotomic_rec(k, &mut table)
}

fn cyclotomic_rec(k: u64, table: &mut Vec<Option<Vec<BigInt>>>) -> Vec<BigInt> {
    if let Some(p) = &table[k as usize] {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); k as usize + 1];
    num[0] = -BigInt::one();
    num[k as usize] = BigInt::one();
    for d in (1..k).filter(|d| k % d == 0) {
        let div = cyclotomic_rec(d, table);
        num = exact_div(&num, &div);
    }
    table[k as usize] = Some(num.clone());
    num
}

/// Quotient of polynomials with monic divisor; panics on a remainder.
fn exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut q = vec![BigInt::zero(); qn + 1];
    for i in (0..=qn).rev() {
        let coef = rem[i + dn].clone();
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &coef * dj;
        }
        q[i] = coef;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

pub fn poly_eval(coeffs: &[BigInt], at: i64) -> BigInt {
    let at = BigInt::from(at);
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &at + c)
}

/// `Phi_k(at)` for `at = ±1`, by exact polynomial evaluation.
pub fn cyclotomic_eval(k: u64, at: i64) -> BigInt {
    assert!(k >= 1 && (at == 1 || at == -1));
    poly_eval(&cyclotomic_polynomial(k), at)
}

/// Closed forms: `Phi_k(-1)` is `-2` for `k = 1`, `0` for `k = 2`, `q` for
/// `k = 2 q^e`, else `1`; `Phi_k(1)` is `q` for `k = q^e`, else `1`, except
/// `Phi_1(1) = 0`.
pub fn cyclotomic_closed_form(k: u64, at: i64) -> i64 {
    match at {
        -1 => match k {
            1 => -2,
            2 => 0,
            _ if k % 2 == 0 => prime_power_base(k / 2).map_or(1, |q| q as i64),
            _ => 1,
        },
        1 => match k {
            1 => 0,
            _ => prime_power_base(k).map_or(1, |q| q as i64),
        },
        _ => panic!("closed forms only at ±1"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EmbeddingVerdict {
    /// Some `l` puts the left side below `2 - margin`: a non-real embedding.
    Witness { l: u64, value: f64 },
    /// Every `l` has the left side above `2 + margin`.
    AllReal,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldDegreeReport {
    pub triangle: TriangleType,
    /// `phi(l) / 2`
    pub trace_degree: u64,
    /// `phi(l)` with a witness, `None` otherwise.
    pub definition_degree: Option<u64>,
    /// `(cos(2 pi l / 2n2) + cos(2 pi l / 2n3))^2 + 2 cos(2 pi l / 2n3) < 2`
    pub verdict: EmbeddingVerdict,
    /// Same scan with the first cosine indexed by `n1` instead of `n2`.
    pub n1_variant: EmbeddingVerdict,
    pub variants_disagree: bool,
}

pub const EMBEDDING_MARGIN: f64 = 1e-9;

fn embedding_scan(ell: u64, first: u64, second: u64) -> EmbeddingVerdict {
    let c = |l: u64, n: u64| (std::f64::consts::PI * l as f64 / n as f64).cos();
    let mut all_above = true;
    for l in (1..ell).filter(|&l| gcd(l as u128, ell as u128) == 1) {
        let value = (c(l, first) + c(l, second)).powi(2) + 2.0 * c(l, second);
        if value < 2.0 - EMBEDDING_MARGIN {
            return EmbeddingVerdict::Witness { l, value };
        }
        if value <= 2.0 + EMBEDDING_MARGIN {
            all_above = false;
        }
    }
    if all_above {
        EmbeddingVerdict::AllReal
    } else {
        EmbeddingVerdict::Undetermined
    }
}

pub fn field_degree_report(t: &TriangleType) -> FieldDegreeReport {
    let phi = totient(t.ell);
    let [n1, n2, n3] = t.n;
    let verdict = embedding_scan(t.ell, n2, n3);
    let n1_variant = embedding_scan(t.ell, n1, n3);
    let kind = |v: &EmbeddingVerdict| std::mem::discriminant(v);
    FieldDegreeReport {
        triangle: *t,
        trace_degree: phi / 2,
        definition_degree: matches!(verdict, EmbeddingVerdict::Witness { .. }).then_some(phi),
        variants_disagree: kind(&verdict) != kind(&n1_variant),
        verdict,
        n1_variant,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TetrahedraBounds {
    pub t: u64,
    /// `2^(2t) 3^(12t)`
    pub ell_bound: String,
    pub ell_within: bool,
    /// `2^(t-1) 3^(6t)`
    pub degree_bound: String,
    /// `phi(l) / 2 <= 2^(t-1) 3^(6t)`
    pub trace_degree_within: bool,
    /// `2^(20t) 3^(120t)`, the field-size bound without its constant
    pub field_bound_bits: u64,
    pub field_within: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldSizeReport {
    pub p: u64,
    pub field_order: String,
    /// `|F| / l^10`
    pub ratio_to_ell10: f64,
    pub below_ell10: bool,
    /// `p / l^5.18`
    pub linnik_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub triangle: TriangleType,
    pub ell: u64,
    pub d: u64,
    pub tetrahedra: Option<TetrahedraBounds>,
    pub field: Option<FieldSizeReport>,
}

fn big_pow(base: u64, exp: u64) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

/// Evaluates the size bounds; reports, never asserts.
pub fn bound_report(t: &TriangleType, tetrahedra: Option<u64>, rep: Option<&ReducedRepData>) -> BoundReport {
    let field = rep.map(|rep| {
        let order = BigUint::from(rep.spec.order());
        let ell10 = big_pow(t.ell, 10);
        FieldSizeReport {
            p: rep.prime.p,
            field_order: order.to_string(),
            ratio_to_ell10: order.to_f64().unwrap_or(f64::INFINITY) / ell10.to_f64().unwrap_or(f64::INFINITY),
            below_ell10: order < ell10,
            linnik_ratio: rep.prime.linnik_ratio,
        }
    });
    let tetrahedra = tetrahedra.map(|n| {
        let ell_bound = big_pow(2, 2 * n) * big_pow(3, 12 * n);
        let degree_bound = big_pow(2, n.saturating_sub(1)) * big_pow(3, 6 * n);
        let field_bound = big_pow(2, 20 * n) * big_pow(3, 120 * n);
        TetrahedraBounds {
            t: n,
            ell_within: BigUint::from(t.ell) <= ell_bound,
            ell_bound: ell_bound.to_string(),
            trace_degree_within: BigUint::from(totient(t.ell) / 2) <= degree_bound,
            degree_bound: degree_bound.to_string(),
            field_bound_bits: field_bound.bits(),
            field_within: rep.map(|r| BigUint::from(r.spec.order()) < field_bound),
        }
    });
    BoundReport {
        triangle: *t,
        ell: t.ell,
        d: t.d,
        tetrahedra,
        field,
    }
}

/// Hyperbolic triples `n1 <= n2 <= n3 <= max_n`.
pub fn hyperbolic_triples(max_n: u64) -> Vec<TriangleType> {
    let mut out = Vec::new();
    for a in 2..=max_n {
        for b in a..=max_n {
            for c in b..=max_n {
                let t = classify(a, b, c).expect("entries >= 2");
                if t.curvature == Curvature::Hyperbolic {
                    out.push(t);
                }
            }
        }
    }
    out
}
