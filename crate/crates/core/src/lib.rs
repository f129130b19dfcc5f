//! Whitehead's algorithm for free groups of finite rank.
//!
//! Words over `F_n` are minimised by elementary Whitehead automorphisms,
//! the equal-length automorphic images of a minimal word are enumerated
//! with a spanning tree of explicit certificates, and equivalence queries
//! return an automorphism that can be checked by direct application.
//! Forward orbits under a single endomorphism, torsion orders in `Aut(F_n)`
//! and primitive-element censuses in `F_2` round out the crate.
//!
//! The crate is `no_std` and only needs `alloc`.
//!
//! ```
//! use autorbit::{orbits, Word};
//!
//! let u = Word::parse("abAB", 2).unwrap();
//! let v = Word::parse("bABa", 2).unwrap();
//! let answer = orbits::is_equivalent(&u, &v, orbits::DEFAULT_CAP).unwrap();
//! let cert = answer.certificate().unwrap();
//! assert_eq!(cert.witness.apply(&u).unwrap(), v);
//! ```
#![no_std]

extern crate alloc;

pub mod endos;
pub mod orbits;
pub mod primitives;
pub mod whitehead;
pub mod words;

pub use endos::{AbelMatrix, EndoError, GenMap, Order};
pub use orbits::{Certificate, Equivalence, OrbitError, OrbitTrace, PeakSet};
pub use whitehead::{MoveSet, Step, WhiteheadMove};
pub use words::{ExponentVector, Letter, Word, WordError};
