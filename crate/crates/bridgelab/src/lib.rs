//! bridgelab: a three-valued logic engine and proof checker for the Bridge
//! paradox — Plato's oath, Socrates's self-undermining prediction, and the
//! logics (K3, LP, ST, and friends) under which the reasoning about them
//! does or does not go through.
//!
//! The crate is organized bottom-up:
//! - [`syntax`]: the first-order object language with a truth predicate,
//!   quotation names, a future operator, and a meta-assertion operator.
//! - [`semantics`]: three-valued models and evaluation, with pluggable
//!   conditional families (strong Kleene, Cooper).
//! - [`temporal`]: branching-time frames and the supervaluationist `Fut`.
//! - [`consequence`]: five consequence relations decided by model
//!   enumeration, with countermodels.
//! - [`proofs`]: natural-deduction proof scripts, checked per step against
//!   any of the consequence relations.
//! - [`scenarios`]: canned analyses (buridan, cervantes, jacquette,
//!   liar-bridge) with deterministic JSON reports.

pub mod consequence;
pub mod proofs;
pub mod scenarios;
pub mod semantics;
pub mod syntax;
pub mod temporal;
