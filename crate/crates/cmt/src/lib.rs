//! Compiler and verifier toolkit for a mind-transition action language:
//! core model, textual syntax, native trajectory semantics, emotion-theory
//! constraint checking, ASP program emission, and experiment harness.

pub mod analysis;
pub mod aspgen;
pub mod dsl;
pub mod engine;
pub mod model;
pub mod theories;
