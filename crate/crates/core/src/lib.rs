//! Quotient dynamics and contextual semantics.
//!
//! The crate implements the update rule `X_{t+1} = π(F(f(X_t)))` in two
//! settings: a scalar map on the real line ([`scalar`]) and finite symbolic
//! state spaces quotiented by an equivalence relation ([`equiv`]). Around it
//! sit finite checkers for the categorical structure the rule relies on:
//! finite categories and functors ([`fincat`]), constraint presheaves over
//! context posets with their downset Heyting algebra ([`context`]), finite
//! truncations of `Set^{N^op}` ([`temporal`]) and Galois connections and
//! quotient factorizations ([`adjunction`]). The [`dsl`] module parses and
//! runs scenario files; [`cli`] is the command-line front end.

pub mod adjunction;
pub mod cli;
pub mod context;
pub mod dsl;
pub mod equiv;
mod error;
pub mod fincat;
pub mod law;
pub mod order;
pub mod scalar;
pub mod temporal;

pub use error::{Error, Result};
pub use law::LawReport;
