//! Exact-arithmetic stability analysis of parameterized variational systems
//!
//! Decides verifiable stability conditions for systems of the form
//! `0 ∈ f(p,x) + N_{Γ(p,x)}(x)` with `Γ(p,x) = { z : g(p,x,z) ∈ D }` and `D`
//! convex polyhedral: Robinson's constraint qualification, directional
//! non-degeneracy, the second-order condition for isolated calmness,
//! directional metric regularity, and the Aubin property relative to a
//! parameter restriction. All verdicts come with rational certificates and
//! every computation is carried out in exact rational arithmetic.

pub mod exact;
pub mod graphder;
pub mod oracle;
pub mod poly;
pub mod sys;
pub mod verdicts;
