//! Construction and verification of iterated consistency sentences.
//!
//! The crate builds, as concrete syntax, the transfinite iterates
//! `Con^α(φ)` via a diagonal fixed point, the staged sentence trees `𝔄_α`,
//! and the operators `g`, `g₀`, `g₀*` over them. Everything that can be
//! checked mechanically is checked at the level of modal skeletons with a
//! decision procedure for GL.

pub mod aset;
pub mod con_iter;
pub mod diagonal;
pub mod formula;
pub mod gen;
pub mod gl;
pub mod gops;
pub(crate) mod intern;
pub mod manifest;
pub mod modal;
pub mod ordinals;
pub mod suite;
pub mod verdict;

pub use formula::{Formula, Term};
pub use modal::ModalFormula;
pub use ordinals::OrdNotation;
pub use verdict::{Verdict, Witness};
