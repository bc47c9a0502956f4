//! Exact computation in the algebra of essential relations on a finite set.
//!
//! Everything is exact arithmetic at desk scale: relations live in 64 bits,
//! essentiality is decided by exact minimum biclique cover, and the algebra
//! layers (essential algebra, algebra of permuted orders, simple modules,
//! branching) work over arbitrary-precision integers, rationals, or Z/p.

pub mod error;
pub mod permutation;
pub mod relation;
pub mod essentiality;
pub mod order_lattice;
pub mod scalar;
pub mod algebra;
pub mod linalg;
pub mod lattice_idempotents;
pub mod essential_algebra;
pub mod permuted_orders;
pub mod representations;
pub mod branching;

pub use error::{Error, Result};
pub use permutation::Permutation;
pub use relation::{Relation, RelationClass};
pub use essentiality::{Block, BlockCover, EssVerdict};
pub use scalar::{RingTag, Scalar};
pub use algebra::{AlgebraElement, BasisTag};
