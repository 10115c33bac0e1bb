//! Symbolic Cartan calculus for finitely presented smooth rings.
//!
//! The crate is organized bottom-up:
//!
//! * [`expr`] holds smooth expressions, their polynomial normal form and the
//!   registry of smooth primitives they may call.
//! * [`ring`] presents rings as generators modulo polynomial ideals and decides
//!   ideal membership with Gröbner bases.
//! * [`forms`] is the exterior algebra of differential forms with `d`.
//! * [`cartan`] adds vector fields, contractions, Lie derivatives, graded
//!   operators and the identity-checking harness.
//! * [`derquot`] computes derivations of zero sets as tangent fields modulo
//!   fields with coordinates in the ideal.
//! * [`site`] lifts everything to presheaves over a finite poset of open boxes.
//! * [`parse`] and [`json`] are the text and JSON front ends.

pub mod cartan;
pub mod derquot;
pub mod error;
pub mod expr;
pub mod forms;
pub mod json;
pub mod parse;
pub mod random;
pub mod ring;
pub mod site;

pub use error::{Error, Result};
pub use expr::{Poly, PrimId, Rational, SmoothExpr};
pub use forms::DifferentialForm;
pub use ring::{IdealPresentation, Ring, RingHom, RingPresentation};
