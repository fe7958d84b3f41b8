//! Discretisation of continuous-time LTI models by rational interpolation.
//!
//! Given a continuous-time model `G` (state space or a network of delayed
//! state equations) and a sampling period `h`, this crate builds a
//! discrete-time state-space model `G_d` whose zero-order-hold reconstruction
//! tracks `G` across the whole band up to the Nyquist frequency, not just
//! asymptotically as `h -> 0`. The pipeline:
//!
//! 1. sample `R(jw)^-1 G(jw)` on a frequency grid, where `R` is the
//!    zero-order-hold transfer `(1 - e^{-jwh})/(jwh)` ([`loewner::holder_transfer`]),
//! 2. interpolate the samples by a descriptor model in the variable
//!    `z = e^{jwh}` via the Loewner matrix pencil ([`loewner`]),
//! 3. compress to the numerical rank, or any requested order, by projecting
//!    onto dominant singular subspaces ([`loewner::project`]),
//! 4. if the reduced model picked up unstable poles, replace it by an optimal
//!    stable approximation ([`stabilize::nehari_project`]) or by discarding
//!    the antistable part ([`stabilize::l2_truncate`]),
//! 5. quantify the discretisation error against the continuous model and
//!    against classical rules ([`metrics`], [`baselines`]).
//!
//! The whole numerical stack is dense and deterministic; see [`linalg`] for
//! the decompositions it is built on.

pub mod baselines;
pub mod error;
pub mod linalg;
pub mod loewner;
pub mod metrics;
pub mod models;
pub mod pipeline;
pub mod plants;
pub mod stabilize;

pub use error::{Error, Result};
