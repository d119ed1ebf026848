//! Algebraic workbench for the modal μ-calculus.
//!
//! Terms and their normal forms live in [`term`], finite Kripke semantics in
//! [`kripke`], equation systems in [`systems`], the cover calculus of
//! finitely generated lower sets in [`covers`], Dedekind-MacNeille
//! completions in [`completion`] and the non-completable reduced power in
//! [`counterexample`]. [`suites`] bundles the acceptance checks.

pub mod completion;
pub mod counterexample;
pub mod covers;
pub mod formats;
pub mod gen;
pub mod kripke;
pub mod lattice;
pub mod suites;
pub mod syntax;
pub mod systems;
pub mod term;

pub use kripke::{eval, KripkeModel, StateSet};
pub use syntax::{parse_term, print_term};
pub use term::Term;
