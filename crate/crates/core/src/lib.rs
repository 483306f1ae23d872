//! Exact computations around instanton counting and the c = 1 AGT relations.
//!
//! The crate is organised bottom-up:
//!
//! - [`partitions`]: Young diagrams, r-tuples, border strips and blended partitions.
//! - [`exactmath`]: rationals, Laurent polynomials in torus variables, truncated
//!   multivariate q-series and exact dense matrices.
//! - [`characters`]: torus characters of the Ext bundle at fixed points and the
//!   localization weights built from them.
//! - [`nekrasov`]: Nekrasov partition functions, the Ext operator `W` and the
//!   prefactor `Z'`.
//! - [`virasoro`]: Verma modules, Shapovalov forms, vertex operator matrix
//!   elements and torus conformal blocks.
//! - [`fock`]: the infinite wedge / boson Fock space with Heisenberg, vertex,
//!   affine sl2 and Segal-Sugawara operators.
//!
//! Every quantity is an exact rational. Symbolic parameters are handled by
//! evaluating at exact rational points.

pub mod characters;
pub mod error;
pub mod exactmath;
pub mod fock;
pub mod nekrasov;
pub mod partitions;
pub mod virasoro;

pub use error::{Error, Result};
pub use exactmath::Rat;
pub use partitions::{ChargeVector, Partition, RTuple};
