//! Numerics for measuring a gated Gamma-function identity.
//!
//! The library is organised around five pieces:
//!
//! * [`summation`] — deterministic series summation with certified tail
//!   bounds and partial-sum tracing,
//! * [`quadrature`] — adaptive Gauss–Kronrod integration,
//! * [`special`] — reference Γ, log Γ, ψ, the Euler–Mascheroni constant and
//!   the Weierstrass-product reciprocal Γ,
//! * [`identity`] — the η/α term functions, the gating factor, both blocks
//!   of the claimed identity and its residual against 1/Γ(s+1),
//! * [`derivation`] — replay of the F(s) construction behind the identity,
//!   quantifying the Leibniz term the closed form drops.
//!
//! Everything is a pure function of its arguments; results are bit-identical
//! across runs on the same platform.

pub mod derivation;
mod error;
pub mod identity;
mod kahan;
pub mod quadrature;
pub mod special;
pub mod summation;

pub use error::Error;
pub use kahan::CompensatedSum;

pub type Result<T> = std::result::Result<T, Error>;
