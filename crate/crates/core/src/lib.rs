//! Multigraded Hilbert functions on products of projective spaces, Macaulay
//! and Gotzmann combinatorics, and hypercube certificates for constant
//! Hilbert polynomials.

pub mod budget;
pub mod certificate;
pub mod error;
pub mod grading;
pub mod ideal;
pub mod io;
pub mod linalg;
pub mod macaulay;
pub mod oracle;
pub mod par;
pub mod poly;

pub use budget::Limits;
pub use certificate::{
    certify_constant, certify_constant_with, gasharov_check, hypercube_vertices, module_slice,
    module_slice_along, replay_induction, CertificateVerdict, GasharovOutcome, GasharovReport,
    ModuleSlice, PreconditionReason,
};
pub use error::{Error, Result};
pub use grading::{graded_piece_dimension, enumerate_monomials, Monomial, Multidegree, RingElement, RingSpec};
pub use ideal::{HilbertValue, MultigradedIdeal};
pub use linalg::RankMethod;
pub use macaulay::{gotzmann_number, gotzmann_rep, macaulay_growth, macaulay_rep, min_certificate_point_2d, GotzmannRep, MacaulayRep};
pub use oracle::{compute_grid, verify_persistence, HilbertGrid, PersistenceReport};
pub use par::Execution;
pub use poly::{hilbert_polynomial, interpolate_on_grid, NumericalPolynomial};
