//! Elements of `PSL(2, F)` for `F = F_p` or `F_{p^2}`.
//!
//! A matrix and its negative are the same element, so every value is stored
//! with a canonical sign: the first nonzero entry, in the order `a, b, c, d`,
//! has its first nonzero coordinate in `1..=(p-1)/2`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::galois::arith::{order_from_multiple, pow_mod};
use crate::galois::{FieldElement, FieldError, FieldSpec};
use crate::presentation::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrices over different fields")]
    SpecMismatch,
    #[error("determinant is {0}, not 1")]
    DeterminantNotOne(String),
    #[error("entry outside the field")]
    EntryOutOfField,
    #[error("projective order exceeds the ceiling {ceiling}")]
    OrderExceedsCeiling { ceiling: u128 },
    #[error("generator {0} has no image")]
    UnmappedGenerator(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjMatrix {
    spec: FieldSpec,
    entries: [FieldElement; 4],
}

impl ProjMatrix {
    /// Checks `ad - bc = 1` and normalizes the sign.
    pub fn new(spec: FieldSpec, entries: [FieldElement; 4]) -> Result<Self, MatrixError> {
        if !entries.iter().all(|&e| spec.contains(e)) {
            return Err(MatrixError::EntryOutOfField);
        }
        let [a, b, c, d] = entries;
        let det = spec.sub(spec.mul(a, d), spec.mul(b, c));
        if det != spec.one() {
            return Err(MatrixError::DeterminantNotOne(spec.fmt_element(det)));
        }
        Ok(Self::normalized(spec, entries))
    }

    pub fn from_ints(spec: FieldSpec, entries: [i64; 4]) -> Result<Self, MatrixError> {
        Self::new(spec, entries.map(|v| spec.from_i64(v)))
    }

    fn normalized(spec: FieldSpec, entries: [FieldElement; 4]) -> Self {
        let half = (spec.p() - 1) / 2;
        let lead = entries
            .iter()
            .flat_map(|e| [e.c0, e.c1])
            .find(|&c| c != 0)
            .expect("a determinant-one matrix is nonzero");
        let entries = if lead > half {
            entries.map(|e| spec.neg(e))
        } else {
            entries
        };
        ProjMatrix { spec, entries }
    }

    pub fn identity(spec: FieldSpec) -> Self {
        ProjMatrix {
            spec,
            entries: [spec.one(), spec.zero(), spec.zero(), spec.one()],
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn entries(&self) -> [FieldElement; 4] {
        self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.spec)
    }

    /// Trace of the stored representative; defined up to sign.
    pub fn trace(&self) -> FieldElement {
        self.spec.add(self.entries[0], self.entries[3])
    }

    pub fn mul(&self, other: &ProjMatrix) -> Result<ProjMatrix, MatrixError> {
        if self.spec != other.spec {
            return Err(MatrixError::SpecMismatch);
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &ProjMatrix) -> ProjMatrix {
        let f = &self.spec;
        let [a, b, c, d] = self.entries;
        let [e, g, h, k] = other.entries;
        let out = [
            f.add(f.mul(a, e), f.mul(b, h)),
            f.add(f.mul(a, g), f.mul(b, k)),
            f.add(f.mul(c, e), f.mul(d, h)),
            f.add(f.mul(c, g), f.mul(d, k)),
        ];
        Self::normalized(self.spec, out)
    }

    /// `[[d, -b], [-c, a]]`
    pub fn inverse(&self) -> ProjMatrix {
        let f = &self.spec;
        let [a, b, c, d] = self.entries;
        Self::normalized(self.spec, [d, f.neg(b), f.neg(c), a])
    }

    pub fn pow(&self, mut exp: u128) -> ProjMatrix {
        let mut acc = Self::identity(self.spec);
        let mut base = *self;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            exp >>= 1;
        }
        acc
    }

    /// Least `k >= 1` with `M^k = ±I`.
    ///
    /// `±I` has order 1; a non-central matrix of trace `±2` is unipotent up
    /// to sign and has order `p`. Otherwise the eigenvalues lie in `F` or in
    /// its quadratic extension, so the order divides `q - 1` or `q + 1`
    /// (`q = |F|`) according to whether `tr^2 - 4` is a square in `F`.
    pub fn projective_order(&self, ceiling: u128) -> Result<u128, MatrixError> {
        let order = self.projective_order_unbounded()?;
        if order > ceiling {
            return Err(MatrixError::OrderExceedsCeiling { ceiling });
        }
        Ok(order)
    }

    pub fn projective_order_unbounded(&self) -> Result<u128, MatrixError> {
        if self.is_identity() {
            return Ok(1);
        }
        let f = &self.spec;
        let t = self.trace();
        let two = f.from_u64(2);
        if t == two || t == f.neg(two) {
            return Ok(f.p() as u128);
        }
        let q = f.order();
        let disc = f.sub(f.square(t), f.from_u64(4));
        let split = f.pow(disc, (q - 1) / 2) == f.one();
        let multiple = if split { q - 1 } else { q + 1 };
        Ok(order_from_multiple(multiple, |k| self.pow(k).is_identity())?)
    }

    /// `4 * degree * ceil(log2(p - 1))` bits: four entries, each with
    /// `degree` coordinates in `[0, p)`.
    pub fn bit_size(&self) -> u64 {
        bit_size(self.spec)
    }

    pub fn to_text(&self) -> String {
        let f = &self.spec;
        let [a, b, c, d] = self.entries.map(|e| f.fmt_element(e));
        format!("[[{a},{b}],[{c},{d}]]")
    }
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn bit_size(spec: FieldSpec) -> u64 {
    4 * spec.degree() as u64 * ceil_log2(spec.p() - 1)
}

pub fn ceil_log2(n: u64) -> u64 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros() as u64
    }
}

/// `|PSL(2, q)| = q (q^2 - 1) / gcd(2, q - 1)`
pub fn psl_order(spec: FieldSpec) -> u128 {
    let q = spec.order();
    q * (q * q - 1) / 2
}

/// Left-to-right product of generator images, inverses for negative
/// letters. Returns the product and the number of matrix multiplications,
/// one per letter.
pub fn evaluate_word_counted(images: &[ProjMatrix], w: &Word) -> Result<(ProjMatrix, u64), MatrixError> {
    let spec = images.first().ok_or(MatrixError::UnmappedGenerator(0))?.spec;
    if images.iter().any(|m| m.spec != spec) {
        return Err(MatrixError::SpecMismatch);
    }
    let inverses: Vec<ProjMatrix> = images.iter().map(ProjMatrix::inverse).collect();
    let mut acc = ProjMatrix::identity(spec);
    let mut mults = 0u64;
    for &(g, e) in w.letters() {
        let m = if e > 0 { images.get(g) } else { inverses.get(g) };
        let m = m.ok_or(MatrixError::UnmappedGenerator(g))?;
        acc = acc.mul_unchecked(m);
        mults += 1;
    }
    Ok((acc, mults))
}

pub fn evaluate_word(images: &[ProjMatrix], w: &Word) -> Result<ProjMatrix, MatrixError> {
    evaluate_word_counted(images, w).map(|(m, _)| m)
}

/// Order of the subgroup generated by `gens`, or `None` once it exceeds
/// `limit` elements.
pub fn subgroup_order(gens: &[ProjMatrix], limit: usize) -> Option<usize> {
    let spec = gens.first()?.spec;
    let identity = ProjMatrix::identity(spec);
    let mut seen = HashSet::from([identity]);
    let mut queue = VecDeque::from([identity]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let next = m.mul_unchecked(g);
            if seen.insert(next) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(next);
            }
        }
    }
    Some(seen.len())
}

/// Every element of `PSL(2, F)`, in increasing entry order.
pub fn enumerate_psl(spec: FieldSpec) -> Vec<ProjMatrix> {
    let elements = field_elements(spec);
    let mut out = HashSet::new();
    for &a in &elements {
        for &b in &elements {
            for &c in &elements {
                // solve for d when a != 0, else need bc = -1
                if !spec.is_zero(a) {
                    let d = spec
                        .div(spec.add(spec.one(), spec.mul(b, c)), a)
                        .expect("a is nonzero");
                    out.insert(ProjMatrix::normalized(spec, [a, b, c, d]));
                } else if spec.mul(b, c) == spec.neg(spec.one()) {
                    for &d in &elements {
                        out.insert(ProjMatrix::normalized(spec, [a, b, c, d]));
                    }
                }
            }
        }
    }
    let mut list: Vec<ProjMatrix> = out.into_iter().collect();
    list.sort_by_key(|m| m.entries);
    list
}

pub fn field_elements(spec: FieldSpec) -> Vec<FieldElement> {
    let p = spec.p();
    let c1_range = if spec.degree() == 2 { p } else { 1 };
    (0..c1_range)
        .flat_map(|c1| (0..p).map(move |c0| FieldElement::new(c0, c1)))
        .collect()
}

/// Whether `x` is a square in the prime field `F_p`.
pub fn is_square_mod(x: u64, p: u64) -> bool {
    x % p == 0 || pow_mod(x, ((p - 1) / 2) as u128, p) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(spec: FieldSpec, rng: &mut impl Rng) -> ProjMatrix {
        let p = spec.p();
        let deg2 = spec.degree() == 2;
        loop {
            let mut r = || FieldElement::new(rng.gen_range(0..p), if deg2 { rng.gen_range(0..p) } else { 0 });
            let (a, b, c) = (r(), r(), r());
            if spec.is_zero(a) {
                continue;
            }
            let d = spec.div(spec.add(spec.one(), spec.mul(b, c)), a).unwrap();
            return ProjMatrix::new(spec, [a, b, c, d]).unwrap();
        }
    }

    #[test]
    fn bit_sizes() {
        assert_eq!(bit_size(FieldSpec::prime(3).unwrap()), 4);
        assert_eq!(bit_size(FieldSpec::with_nonresidue(5, 2).unwrap()), 16);
        assert_eq!(bit_size(FieldSpec::quadratic(337).unwrap()), 72);
    }

    #[test]
    fn sign_identification() {
        let f = FieldSpec::prime(7).unwrap();
        let m = ProjMatrix::from_ints(f, [2, 3, 1, 2]).unwrap();
        let n = ProjMatrix::from_ints(f, [-2, -3, -1, -2]).unwrap();
        assert_eq!(m, n);
        assert_eq!(m.entries()[0].c0, 2);
        assert_eq!(n.to_text(), "[[2,3],[1,2]]");
        assert!(ProjMatrix::from_ints(f, [1, 1, 1, 1]).is_err());
    }

    #[test]
    fn normalization_is_sign_invariant_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for spec in [FieldSpec::prime(337).unwrap(), FieldSpec::quadratic(337).unwrap()] {
            for _ in 0..5000 {
                let m = random_matrix(spec, &mut rng);
                let neg = ProjMatrix::new(spec, m.entries().map(|e| spec.neg(e))).unwrap();
                assert_eq!(m, neg);
                assert_eq!(ProjMatrix::normalized(spec, m.entries()), m);
            }
        }
    }

    #[test]
    fn group_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spec = FieldSpec::quadratic(13).unwrap();
        for _ in 0..500 {
            let a = random_matrix(spec, &mut rng);
            let b = random_matrix(spec, &mut rng);
            assert!(a.mul(&a.inverse()).unwrap().is_identity());
            let ab = a.mul(&b).unwrap();
            assert_eq!(ab.inverse(), b.inverse().mul(&a.inverse()).unwrap());
            let [w, x, y, z] = ab.entries();
            assert_eq!(spec.sub(spec.mul(w, z), spec.mul(x, y)), spec.one());
        }
    }

    #[test]
    fn orders_match_naive_powering() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for spec in [
            FieldSpec::prime(5).unwrap(),
            FieldSpec::prime(13).unwrap(),
            FieldSpec::quadratic(3).unwrap(),
            FieldSpec::quadratic(7).unwrap(),
        ] {
            for _ in 0..200 {
                let m = random_matrix(spec, &mut rng);
                let naive = (1u128..).find(|&k| m.pow(k).is_identity()).unwrap();
                assert_eq!(m.projective_order(1 << 40).unwrap(), naive);
                assert_eq!(psl_order(spec) % naive, 0);
            }
        }
    }

    #[test]
    fn order_special_cases() {
        let f = FieldSpec::prime(31).unwrap();
        assert_eq!(ProjMatrix::identity(f).projective_order(1).unwrap(), 1);
        let u = ProjMatrix::from_ints(f, [1, 1, 0, 1]).unwrap();
        assert_eq!(u.projective_order(100).unwrap(), 31);
        assert!(matches!(
            u.projective_order(30),
            Err(MatrixError::OrderExceedsCeiling { .. })
        ));
    }

    #[test]
    fn word_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = FieldSpec::prime(101).unwrap();
        let images = vec![random_matrix(spec, &mut rng), random_matrix(spec, &mut rng)];
        assert!(evaluate_word(&images, &Word::empty()).unwrap().is_identity());
        let xxinv = Word::from_letters(vec![(0, 1), (0, -1)]);
        assert!(evaluate_word(&images, &xxinv).unwrap().is_identity());
        let u = Word::from_letters(vec![(0, 1), (1, -1), (1, -1)]);
        let v = Word::from_letters(vec![(1, 1), (0, 1)]);
        let lhs = evaluate_word(&images, &u.concat(&v)).unwrap();
        let rhs = evaluate_word(&images, &u)
            .unwrap()
            .mul(&evaluate_word(&images, &v).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(evaluate_word_counted(&images, &u).unwrap().1, 3);
        assert!(matches!(
            evaluate_word(&images, &Word::generator(2)),
            Err(MatrixError::UnmappedGenerator(2))
        ));
    }

    #[test]
    fn psl_enumeration_sizes() {
        assert_eq!(enumerate_psl(FieldSpec::prime(3).unwrap()).len(), 12);
        assert_eq!(enumerate_psl(FieldSpec::prime(5).unwrap()).len(), 60);
        assert_eq!(enumerate_psl(FieldSpec::prime(7).unwrap()).len(), 168);
        assert_eq!(enumerate_psl(FieldSpec::quadratic(3).unwrap()).len(), 360);
    }

    #[test]
    fn subgroup_closure() {
        let f = FieldSpec::prime(7).unwrap();
        let u = ProjMatrix::from_ints(f, [1, 1, 0, 1]).unwrap();
        assert_eq!(subgroup_order(&[u], 100), Some(7));
        let s = ProjMatrix::from_ints(f, [0, -1, 1, 0]).unwrap();
        assert_eq!(subgroup_order(&[u, s], 1000), Some(168));
        assert_eq!(subgroup_order(&[u, s], 100), None);
    }
}
