//! Exact-arithmetic toolkit for finite-dimensional evolution algebras.
//!
//! An evolution algebra is a commutative algebra with a *natural basis*
//! `e_1, ..., e_n` in which distinct basis vectors multiply to zero, so the
//! whole product is determined by the squares `e_i^2`. This crate computes
//! the structural invariants of such algebras over exact fields (the
//! rationals or a prime field): annihilators, lower-central and derived
//! series, ideals and quotients, the full subalgebra lattice, and the
//! lattice-theoretic properties (distributivity, modularity, semimodularity,
//! the Jordan-Dedekind chain condition, supersolvability).
//!
//! Everything is computed with exact arithmetic; there is no floating point
//! anywhere. Brute-force enumeration over prime fields doubles as an oracle
//! for the structural shortcuts.
//!
//! ```
//! use evolab::{EvolutionAlgebra, FieldSpec};
//!
//! // e1^2 = -e2^2 = e1 + e2, e3^2 = e2
//! let a = EvolutionAlgebra::from_i64_rows(
//!     FieldSpec::Rationals,
//!     &[vec![1, 1, 0], vec![-1, -1, 0], vec![0, 1, 0]],
//! );
//! assert!(a.is_solvable() && !a.is_nilpotent());
//! assert_eq!(a.solvability_index(), Some(4));
//!
//! let verdict = evolab::structure::analyze(&a);
//! assert!(verdict.supersolvable && verdict.max_solvability_index);
//!
//! let set = evolab::subalgebras::enumerate_structural(&a).unwrap();
//! let lattice = evolab::lattice::build_lattice(&a, &set).unwrap();
//! assert!(lattice.is_distributive().0);
//! ```

pub mod algebra;
pub mod error;
pub mod families;
pub mod field;
pub mod lattice;
pub mod linalg;
pub mod structure;
pub mod subalgebras;

pub use algebra::EvolutionAlgebra;
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use linalg::{Matrix, Subspace, Vector};
