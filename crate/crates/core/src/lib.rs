//! A finite universal-algebra workbench.
//!
//! Algebras are operation tables over `{0..n-1}`. On top of them the crate
//! computes congruence and subuniverse lattices, subalgebras of finite
//! powers, higher commutators and supernilpotence, and builds checkable
//! certificates representing a subalgebra as a retract of a finite
//! subdirect power.

pub mod algebra;
pub mod builtin;
pub mod commutator;
pub mod error;
pub mod lattice;
pub mod par;
pub mod retract;
pub mod subpower;
pub mod z6;

pub use algebra::{parse_algebra, serialize_algebra, Elem, ElementTuple, FiniteAlgebra, Signature};
pub use error::{Error, ParseError, Result};
pub use lattice::{Partition, Subset};
pub use par::Parallelism;
pub use subpower::{Budget, ClosureConfig, Subpower, Termination};
