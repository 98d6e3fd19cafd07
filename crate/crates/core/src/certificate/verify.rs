use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{Certificate, CertificateBody, CertificateKind, Level};
use crate::galois::{FieldElement, FieldSpec};
use crate::intlinalg::{smith_normal_form, IntMatrix};
use crate::presentation::{GroupPresentation, Word};
use crate::projmat::{evaluate_word_counted, ProjMatrix};

/// Field operations charged per 2x2 product: eight products, four sums.
pub const FIELD_OPS_PER_MULT: u64 = 12;
/// Per input matrix: the determinant (two products, one difference) and the
/// inverse (two negations).
pub const FIELD_OPS_PER_MATRIX: u64 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub accepted: bool,
    pub failure: Option<String>,
    pub kind: CertificateKind,
    pub level: Level,
    pub generators: usize,
    pub relators: usize,
    pub presentation_size: usize,
    /// Matrix products spent on relators, one per letter after the
    /// surjection is applied.
    pub mat_mults: u64,
    /// Matrix products spent on the two witness words.
    pub witness_mults: u64,
    pub field_ops: u64,
    /// Group operations in `Z/a x Z/b` for abelian certificates.
    pub abelian_ops: u64,
    pub matrix_bits: Vec<u64>,
    pub total_bits: u64,
}

impl VerificationReport {
    fn new(cert: &Certificate) -> Self {
        VerificationReport {
            accepted: false,
            failure: None,
            kind: cert.kind(),
            level: cert.level,
            generators: cert.presentation.generator_count(),
            relators: cert.presentation.relators().len(),
            presentation_size: cert.presentation.size(),
            mat_mults: 0,
            witness_mults: 0,
            field_ops: 0,
            abelian_ops: 0,
            matrix_bits: Vec::new(),
            total_bits: 0,
        }
    }

    fn reject(mut self, reason: impl Into<String>) -> Self {
        self.accepted = false;
        self.failure = Some(reason.into());
        self
    }
}

/// Checks a parsed certificate. Never errors: every well-formed certificate
/// is either accepted or rejected with a reason.
pub fn verify(cert: &Certificate) -> VerificationReport {
    let report = VerificationReport::new(cert);
    match &cert.body {
        CertificateBody::NonAbelianRep {
            spec,
            names,
            matrices,
            surjection,
            witness,
        } => verify_rep(report, &cert.presentation, *spec, names, matrices, surjection.as_deref(), witness),
        CertificateBody::NonCyclicAbelian { target, images } => {
            verify_abelian(report, &cert.presentation, target, images)
        }
    }
}

fn verify_rep(
    mut report: VerificationReport,
    pres: &GroupPresentation,
    spec: FieldSpec,
    names: &[String],
    matrices: &[[FieldElement; 4]],
    surjection: Option<&[Word]>,
    witness: &(Word, Word),
) -> VerificationReport {
    report.matrix_bits = vec![crate::projmat::bit_size(spec); matrices.len()];
    report.total_bits = report.matrix_bits.iter().sum();
    report.field_ops = FIELD_OPS_PER_MATRIX * matrices.len() as u64;

    let mut images = Vec::with_capacity(matrices.len());
    for (name, entries) in names.iter().zip(matrices) {
        match ProjMatrix::new(spec, *entries) {
            Ok(m) if m.entries() == *entries => images.push(m),
            Ok(_) => return report.reject(format!("matrix for `{name}` is not sign-normalized")),
            Err(e) => return report.reject(format!("matrix for `{name}`: {e}")),
        }
    }

    let push = |w: &Word| match surjection {
        Some(words) => w.substitute(words),
        None => w.clone(),
    };

    for (j, rel) in pres.relators().iter().enumerate() {
        let word = push(rel);
        let (value, mults) = match evaluate_word_counted(&images, &word) {
            Ok(v) => v,
            Err(e) => return report.reject(format!("relator {j}: {e}")),
        };
        report.mat_mults += mults;
        report.field_ops += FIELD_OPS_PER_MULT * mults;
        if !value.is_identity() {
            return report.reject(format!("relator {j} does not map to the identity"));
        }
    }

    let mut nontrivial = false;
    for k in 0..pres.generator_count() {
        let word = push(&Word::generator(k));
        let (value, mults) = evaluate_word_counted(&images, &word).expect("checked above");
        report.witness_mults += mults;
        report.field_ops += FIELD_OPS_PER_MULT * mults;
        if !value.is_identity() {
            nontrivial = true;
            break;
        }
    }
    if !nontrivial {
        return report.reject("every generator maps to the identity");
    }

    let mut values = Vec::with_capacity(2);
    for w in [&witness.0, &witness.1] {
        let (value, mults) = match evaluate_word_counted(&images, &push(w)) {
            Ok(v) => v,
            Err(e) => return report.reject(format!("witness: {e}")),
        };
        report.witness_mults += mults;
        report.field_ops += FIELD_OPS_PER_MULT * mults;
        values.push(value);
    }
    if values[0] == values[1] {
        return report.reject("witness words have equal images");
    }
    report.accepted = true;
    report
}

fn bits_of(n: &BigInt) -> u64 {
    // values in [0, n) need ceil(log2 n) bits
    (n - 1u32).bits()
}

fn verify_abelian(
    mut report: VerificationReport,
    pres: &GroupPresentation,
    target: &(BigInt, BigInt),
    images: &[(BigInt, BigInt)],
) -> VerificationReport {
    let (a, b) = target;
    report.total_bits = images.len() as u64 * (bits_of(a) + bits_of(b));

    for (j, rel) in pres.relators().iter().enumerate() {
        let mut u = BigInt::zero();
        let mut v = BigInt::zero();
        for &(k, e) in rel.letters() {
            u += &images[k].0 * e as i32;
            v += &images[k].1 * e as i32;
            report.abelian_ops += 1;
        }
        if !u.mod_floor(a).is_zero() || !v.mod_floor(b).is_zero() {
            return report.reject(format!("relator {j} does not vanish in Z/{a} x Z/{b}"));
        }
    }

    // the image lattice is spanned by the generator images and (a,0), (0,b);
    // its index in Z^2 is the product of its invariant factors
    let mut rows: Vec<Vec<BigInt>> = images.iter().map(|(u, v)| vec![u.clone(), v.clone()]).collect();
    rows.push(vec![a.clone(), BigInt::zero()]);
    rows.push(vec![BigInt::zero(), b.clone()]);
    let snf = smith_normal_form(&IntMatrix::from_rows(2, &rows), false);
    let index: BigInt = snf.diag.iter().take(snf.rank).product();
    let order = (a * b) / index;
    let exponent = images.iter().fold(BigInt::from(1), |acc, (u, v)| {
        let ord_u = a / a.gcd(u);
        let ord_v = b / b.gcd(v);
        acc.lcm(&ord_u.lcm(&ord_v))
    });
    report.abelian_ops += images.len() as u64;
    if exponent == order {
        let order = order.to_u64().map_or_else(|| order.to_string(), |o| o.to_string());
        return report.reject(format!("image subgroup of order {order} is cyclic"));
    }
    report.accepted = true;
    report
}
