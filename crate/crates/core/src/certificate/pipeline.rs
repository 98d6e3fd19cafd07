//! From a triangulation to a certificate: homology first, then a
//! representation of the base orbifold's triangle group.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use super::{verify, Certificate, CertificateBody, Level, VerificationReport};
use crate::galois::DEFAULT_PRIME_CEILING;
use crate::intlinalg::{abelianization_map, AbelianGroup};
use crate::presentation::{fundamental_group, GroupPresentation, Word};
use crate::projmat::ProjMatrix;
use crate::trianglerep::{
    build_hyperbolic_rep, build_nonhyperbolic_cert, classify, TriangleError, TriangleType,
};
use crate::triangulation::{orientation_check, validate, Triangulation, TriangulationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("triangulation is not a closed 3-manifold")]
    NotClosed,
    #[error("triangulation is non-orientable")]
    NonOrientable,
    #[error("first homology {0} is cyclic and no base orbifold was given")]
    MissingBase(String),
    #[error("a triangulation-level certificate needs a surjection onto the triangle group")]
    MissingSurjection,
    #[error("surjection has {found} images for {expected} generators")]
    SurjectionArity { expected: usize, found: usize },
    #[error("the surjection's image does not verify: {0}")]
    SurjectionRejected(String),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Triangle(#[from] TriangleError),
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    /// Base orbifold `S^2(n1, n2, n3)`, asserted by the caller.
    pub base: Option<(u64, u64, u64)>,
    /// Image of each generator of the triangulation's presentation as a
    /// word in `x, y`.
    pub surjection: Option<Vec<Word>>,
    /// Fail instead of falling back to an orbifold-level certificate.
    pub require_triangulation_level: bool,
    pub prime_ceiling: u64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            base: None,
            surjection: None,
            require_triangulation_level: false,
            prime_ceiling: DEFAULT_PRIME_CEILING,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Step {
    /// Non-cyclic first homology.
    Homology,
    /// A quotient of the base orbifold's triangle group.
    TriangleGroup,
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub presentation: GroupPresentation,
    pub homology: AbelianGroup,
    pub step: Step,
    pub triangle: Option<TriangleType>,
    pub certificate: Certificate,
    pub report: VerificationReport,
}

/// A non-cyclic quotient `Z/a x Z/b` of the abelianization, when there is
/// one: the last two torsion factors, or a torsion factor against a free
/// one, or two free factors mod 2.
pub fn abelian_quotient_certificate(pres: &GroupPresentation, level: Level) -> Option<Certificate> {
    let quotient = abelianization_map(pres);
    let group = &quotient.group;
    let k = group.torsion.len();
    let r = group.free_rank;
    // image coordinates are (torsion..., free...)
    let (ia, ib, a, b) = if k >= 2 {
        (k - 2, k - 1, group.torsion[k - 2].clone(), group.torsion[k - 1].clone())
    } else if k == 1 && r >= 1 {
        (0, 1, group.torsion[0].clone(), group.torsion[0].clone())
    } else if r >= 2 {
        (0, 1, BigInt::from(2), BigInt::from(2))
    } else {
        return None;
    };
    let images = quotient
        .images
        .iter()
        .map(|c| (c[ia].mod_floor(&a), c[ib].mod_floor(&b)))
        .collect();
    Some(Certificate {
        level,
        presentation: pres.clone(),
        body: CertificateBody::NonCyclicAbelian {
            target: (a, b),
            images,
        },
    })
}

/// Algorithm: compute `H_1`; if it is not cyclic, certify that. Otherwise
/// build a certificate for the base orbifold's triangle group and, given a
/// surjection, pull it back to the triangulation's presentation.
pub fn pipeline(tri: &Triangulation, options: &PipelineOptions) -> Result<PipelineOutcome, PipelineError> {
    if !validate(tri).pass {
        return Err(PipelineError::NotClosed);
    }
    if !orientation_check(tri)?.orientable {
        return Err(PipelineError::NonOrientable);
    }
    let pres = fundamental_group(tri)?;
    let homology = crate::intlinalg::abelianization(&pres);

    if let Some(cert) = abelian_quotient_certificate(&pres, Level::Triangulation) {
        let report = verify(&cert);
        return Ok(PipelineOutcome {
            presentation: pres,
            homology,
            step: Step::Homology,
            triangle: None,
            certificate: cert,
            report,
        });
    }

    let (n1, n2, n3) = options.base.ok_or_else(|| PipelineError::MissingBase(homology.to_string()))?;
    let triangle = classify(n1, n2, n3)?;
    let orbifold_cert = if triangle.is_hyperbolic_coprime() {
        build_hyperbolic_rep(&triangle, options.prime_ceiling)?.certificate()
    } else {
        build_nonhyperbolic_cert(&triangle)?
    };

    let certificate = match &options.surjection {
        None if options.require_triangulation_level => return Err(PipelineError::MissingSurjection),
        None => orbifold_cert,
        Some(words) => pull_back(&pres, orbifold_cert, words)?,
    };
    let report = verify(&certificate);
    if certificate.level == Level::Triangulation && !report.accepted {
        return Err(PipelineError::SurjectionRejected(report.failure.clone().unwrap_or_default()));
    }
    Ok(PipelineOutcome {
        presentation: pres,
        homology,
        step: Step::TriangleGroup,
        triangle: Some(triangle),
        certificate,
        report,
    })
}

/// Composes a triangle-group certificate with `pi_1 -> T`.
fn pull_back(pres: &GroupPresentation, cert: Certificate, words: &[Word]) -> Result<Certificate, PipelineError> {
    if words.len() != pres.generator_count() {
        return Err(PipelineError::SurjectionArity {
            expected: pres.generator_count(),
            found: words.len(),
        });
    }
    let body = match cert.body {
        CertificateBody::NonCyclicAbelian { target, images } => {
            let images = words
                .iter()
                .map(|w| {
                    let mut u = BigInt::from(0);
                    let mut v = BigInt::from(0);
                    for &(k, e) in w.letters() {
                        u += &images[k].0 * e as i32;
                        v += &images[k].1 * e as i32;
                    }
                    (u.mod_floor(&target.0), v.mod_floor(&target.1))
                })
                .collect();
            CertificateBody::NonCyclicAbelian { target, images }
        }
        CertificateBody::NonAbelianRep {
            spec, names, matrices, ..
        } => {
            let mats: Vec<ProjMatrix> = matrices
                .iter()
                .map(|m| ProjMatrix::new(spec, *m).expect("builder output is valid"))
                .collect();
            let image = |k: usize| crate::projmat::evaluate_word(&mats, &words[k]);
            let g = pres.generator_count();
            let mut witness = None;
            'search: for i in 0..g {
                for j in i + 1..g {
                    let (a, b) = (
                        image(i).map_err(|e| PipelineError::SurjectionRejected(e.to_string()))?,
                        image(j).map_err(|e| PipelineError::SurjectionRejected(e.to_string()))?,
                    );
                    if a.mul(&b).ok() != b.mul(&a).ok() {
                        let ij = Word::from_letters(vec![(i, 1), (j, 1)]);
                        let ji = Word::from_letters(vec![(j, 1), (i, 1)]);
                        witness = Some((ij, ji));
                        break 'search;
                    }
                }
            }
            let witness = witness.ok_or_else(|| {
                PipelineError::SurjectionRejected("images of the generators pairwise commute".into())
            })?;
            CertificateBody::NonAbelianRep {
                spec,
                names,
                matrices,
                surjection: Some(words.to_vec()),
                witness,
            }
        }
    };
    Ok(Certificate {
        level: Level::Triangulation,
        presentation: pres.clone(),
        body,
    })
}
