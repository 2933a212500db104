//! The variational system `0 ∈ f(p,x) + N_{Γ(p,x)}(x)`,
//! `Γ(p,x) = { z : g(p,x,z) ∈ D }`, together with the derived maps
//! `g̃(p,x) = g(p,x,x)`, `b(p,x) = ∇₃g(p,x,x)`, Lagrangian derivatives, and
//! the multiplier polyhedra Λ, Λ(·;v), Ξ, Ξ(·;(q,u)), Λ̃.

mod func;
mod mult;
pub(crate) mod system;

pub use func::{Component, PolyFunc2};
pub use mult::{
    multiplier_lambda, multiplier_lambda_dir, multiplier_lambda_tilde, multiplier_xi,
    multiplier_xi_dir, LambdaTilde, MultKind, MultiplierPoly,
};
pub use system::{Anchor, VarSystem};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SysError {
    #[error("infeasible anchor: {0}")]
    InfeasibleAnchor(String),
    #[error("empty multiplier set: {0}")]
    EmptyMultiplierSet(String),
    #[error("directional multiplier set undefined (unbounded argmax)")]
    UnboundedArgmax,
    #[error("operation requires an affine system: {0}")]
    NonAffine(String),
    #[error("quadratic constraints with a non-singleton multiplier stratum: {0}")]
    InconclusiveStratum(String),
    #[error("problem file: {0}")]
    Schema(String),
    #[error(transparent)]
    Poly(#[from] crate::poly::PolyError),
}
