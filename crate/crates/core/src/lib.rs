//! Exact (q,m)-polymatroids, demi-polymatroids and generalized weights of
//! Delsarte rank-metric codes and flags of codes over small finite fields.
//!
//! Everything is computed by exhaustive scans over the lattice of all
//! subspaces of `F_q^n`, so the library is meant for small parameters.

pub mod delsarte;
pub mod error;
pub mod field;
pub mod flags;
pub mod lattice;
pub mod matrix;
pub mod polymatroid;
pub mod weights;

pub use delsarte::{code_weights, support_space, DelsarteCode};
pub use error::{Error, Result};
pub use field::{Elem, FieldSpec};
pub use flags::{Flag, NormalizedFlag};
pub use lattice::{enumerate_subspaces, gaussian_binomial, Subspace, SubspaceLattice};
pub use matrix::{Matrix, Rref};
pub use polymatroid::{AxiomReport, PolymatroidTable, Verdict, Violation};
pub use weights::{generalized_weights, h_profiles, wei_duality_report, HProfile, WeiReport, WeightProfile};
