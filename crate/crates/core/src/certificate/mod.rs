//! Certificates that a group (and so a manifold) is not a lens space group:
//! either a non-cyclic abelian quotient `Z/a x Z/b` or a non-abelian image in
//! `PSL(2, F)`.

mod format;
mod pipeline;
mod verify;

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::galois::{FieldElement, FieldSpec};
use crate::presentation::{GroupPresentation, Word};

pub use format::{parse_certificate, parse_surjection};
pub use pipeline::{abelian_quotient_certificate, pipeline, PipelineError, PipelineOptions, PipelineOutcome, Step};
pub use verify::{verify, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl CertificateError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> Self {
        CertificateError::Parse {
            line,
            message: message.into(),
        }
    }
}

/// What the presentation in a certificate is a presentation of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Level {
    /// The triangle group of the base orbifold.
    Orbifold,
    /// The fundamental group read off a triangulation.
    Triangulation,
    /// Any other finitely presented group.
    Group,
}

impl Level {
    pub fn as_str(&self) -> &'static str {
        match self {
            Level::Orbifold => "orbifold",
            Level::Triangulation => "triangulation",
            Level::Group => "group",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    NonCyclicAbelian,
    NonAbelianRep,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::NonCyclicAbelian => "NonCyclicAbelian",
            CertificateKind::NonAbelianRep => "NonAbelianRep",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateBody {
    /// Generator `k` maps to `images[k]` in `Z/a x Z/b`.
    NonCyclicAbelian {
        target: (BigInt, BigInt),
        images: Vec<(BigInt, BigInt)>,
    },
    /// Matrices are named by `names`. Without a surjection the names are the
    /// presentation's generators; with one, they are the generators of an
    /// intermediate group and `surjection[k]` is the image of presentation
    /// generator `k` as a word in them. Witness words are over the
    /// presentation's generators.
    NonAbelianRep {
        spec: FieldSpec,
        names: Vec<String>,
        matrices: Vec<[FieldElement; 4]>,
        surjection: Option<Vec<Word>>,
        witness: (Word, Word),
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub level: Level,
    pub presentation: GroupPresentation,
    pub body: CertificateBody,
}

impl Certificate {
    pub fn kind(&self) -> CertificateKind {
        match self.body {
            CertificateBody::NonCyclicAbelian { .. } => CertificateKind::NonCyclicAbelian,
            CertificateBody::NonAbelianRep { .. } => CertificateKind::NonAbelianRep,
        }
    }

    pub fn parse(text: &str) -> Result<Certificate, CertificateError> {
        parse_certificate(text)
    }

    /// Canonical text form.
    pub fn to_text(&self) -> String {
        format::serialize(self)
    }

    pub fn verify(&self) -> VerificationReport {
        verify(self)
    }
}
