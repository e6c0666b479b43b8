//! Exact symbolic computation for Verma-type modules over untwisted quantum
//! affine algebras, at desk scale (ranks <= 2 in anger, bounded degree).
//!
//! The crate is organized bottom-up:
//! - [`qcoeff`]: Laurent polynomials and rational functions in q, q-integers,
//!   q-binomials, evaluation at q = 1, and the A-form membership test
//! - [`rootsys`]: affine Cartan data, roots, weights, the invariant bilinear
//!   form, heights and simple reflections
//! - [`partition`]: the closed partitions S_J of the affine root system and
//!   the six root blocks with their finite/infinite refinements
//! - [`beckorder`]: the doubly-infinite reflection sequence behind Beck's
//!   convex total order on positive real roots
//! - [`ncalg`]: the free word algebra on the Chevalley alphabet and a
//!   degree-truncated rewriting engine with overlap completion
//! - [`uq`]: the quantum affine algebra layer — defining relations, braid
//!   action, the antiautomorphism omega, real and imaginary root vectors,
//!   Lusztig elements
//! - [`verma`]: quantum Verma-type modules — weight multiplicities, truncated
//!   module models, singular vectors, irreducibility probes, level zero
//! - [`classical`]: the loop-algebra realization used as an independent
//!   classical oracle, and the q -> 1 comparison

pub mod beckorder;

pub mod error;
pub mod ncalg;
pub mod partition;
pub mod qcoeff;
pub mod rootsys;
pub mod uq;



pub use beckorder::BeckOrdering;
pub use error::{Error, Result};
pub use partition::{Block, BlockTag, PartitionSpec, Refinement};
pub use qcoeff::{aform_member, qbinom, qfact, qint, AFormFlag, LaurentPoly, QRat};
pub use rootsys::{build_cartan, CartanData, CartanSpec, Root, Weight};
