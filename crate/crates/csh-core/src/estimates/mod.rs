//! Exact-arithmetic and sampling tools around the wave-Sobolev (`X^{s,b}`)
//! bilinear product estimate in two space dimensions.
//!
//! * [`ext`] — rational scalars extended by a formal infinitesimal `ε`, so
//!   exponent bookkeeping like `1/2+` ("slightly more than one half") is
//!   exact rather than a floating-point fudge.
//! * [`afs`] — the fourteen sharp exponent conditions under which the
//!   bilinear estimate `‖uv‖ ≲ ‖u‖·‖v‖` between wave-Sobolev spaces holds,
//!   evaluated with exact margins.
//! * [`registry`] — the exponent tuples instantiated by the local
//!   well-posedness argument for the Chern-Simons-Higgs system, with
//!   pass/fail verdicts as a function of the Sobolev index `s`.
//! * [`angle`] — a deterministic sampler probing the angular-interaction
//!   bound that powers the null-form estimates.
//! * [`xsb`] — a discrete `X^{s,b}` norm for trajectories produced by the
//!   simulator.

pub mod afs;
pub mod angle;
pub mod ext;
pub mod registry;
pub mod xsb;

pub use afs::{afs_check, AfsReport, ConditionReport, ExponentTuple};
pub use angle::{angle_bound_sample, AngleSampleReport};
pub use ext::{ExtScalar, Rat};
pub use registry::{registry, verify_claim_registry, ClaimInstance, InstanceReport};
pub use xsb::{xsb_norm, TemporalWeight};
