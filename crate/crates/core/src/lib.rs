//! Geometry of torsion-free affine surfaces and their cotangent-bundle
//! Walker extensions.
//!
//! The crate is organised around three layers:
//!
//! * a small expression language ([`expr`]) with truncated-Taylor jet
//!   evaluation ([`jet`]) and a finite-difference oracle ([`fd`]),
//! * the affine surface layer ([`surface`], [`parallel`]): Ricci tensor and
//!   its symmetric/skew split, recurrence, parallel trace-free
//!   (1,1)-tensor fields and their Kähler / para-Kähler / nilpotent
//!   classification,
//! * the neutral-signature extension layer ([`extension`]): the modified
//!   Riemannian extension metric on cotangent coordinates together with
//!   its Weyl, Bach, soliton and quasi-Einstein diagnostics.
//!
//! [`catalog`] carries constructors for the named model surfaces used by the
//! test-suite and the command line front end.
//!
//! The core is `no_std`-compatible (requires `alloc`); the `std` feature is
//! enabled by default.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod catalog;
pub mod expr;
pub mod extension;
pub mod fd;
pub mod field;
pub mod jet;
pub mod linalg;
pub mod parallel;
pub mod surface;

pub use expr::{Expr, Func, ParseError, Var};
pub use field::ScalarField;
pub use jet::{EvalError, Jet};
