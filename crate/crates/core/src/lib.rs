//! Polynomial-size certificates that a Seifert fibered 3-manifold is not a
//! lens space.
//!
//! The pieces, bottom up:
//!
//! * [`triangulation`]: parse, validate and orient face-pairing
//!   triangulations.
//! * [`presentation`]: read a presentation of the fundamental group off the
//!   cell structure, one relator of length at most 3 per face.
//! * [`intlinalg`]: Smith normal form over arbitrary-precision integers and
//!   the abelianization it encodes.
//! * [`galois`]: `F_p` and `F_{p^2}` arithmetic and prime searches.
//! * [`projmat`]: sign-normalized elements of `PSL(2, F)`.
//! * [`trianglerep`]: explicit representations of triangle groups reduced
//!   modulo a split prime, plus the non-hyperbolic cases.
//! * [`certificate`]: the certificate text format, its verifier and the
//!   end-to-end pipeline.

pub mod certificate;
pub mod galois;
pub mod intlinalg;
pub mod presentation;
pub mod projmat;
pub mod trianglerep;
pub mod triangulation;

pub use certificate::{Certificate, CertificateError, VerificationReport};
pub use galois::{FieldElement, FieldError, FieldSpec};
pub use intlinalg::{AbelianGroup, IntMatrix, SnfResult};
pub use presentation::{GroupPresentation, Word};
pub use projmat::{MatrixError, ProjMatrix};
pub use trianglerep::{Curvature, TriangleError, TriangleType};
pub use triangulation::{Triangulation, TriangulationError};
