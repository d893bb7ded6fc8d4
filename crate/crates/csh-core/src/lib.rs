//! Pseudospectral toolkit for the (2+1)-dimensional Chern-Simons-Higgs system
//! in temporal gauge (`A_0 = 0`) on a periodic box `[0, L)^2`, together with an
//! exact-arithmetic checker for the wave-Sobolev (`X^{s,b}`) bilinear exponent
//! conditions that control the system's product estimates at low regularity.
//!
//! The crate has two halves that share nothing but a few conventions:
//!
//! * **Simulation** ([`field`], [`gauge`], [`dynamics`], [`integrator`],
//!   [`data`]): band-limited complex fields on an `n × n` Fourier grid, a
//!   Helmholtz (divergence-free / curl-free / mean) split of the gauge
//!   potential, the Chern-Simons-Higgs equations of motion in both their
//!   direct form and the reformulation that carries only the curl-free gauge
//!   remainder, and a fourth-order exponential (Lawson) integrator for the
//!   half-wave split of the Higgs field.
//!
//! * **Estimate checking** ([`estimates`]): exact rational-plus-infinitesimal
//!   scalars, the fourteen sharp conditions for the bilinear wave-Sobolev
//!   product estimate in two space dimensions, a registry of the exponent
//!   tuples the local well-posedness argument instantiates, a seeded sampler
//!   probing the angular interaction bound, and a discrete `X^{s,b}` norm.
//!
//! Conventions used throughout: fields are trigonometric polynomials
//! `u(x) = Σ_m c_m e^{i ξ_m · x}` with `ξ_m = (2π/L) m`, integer modes
//! `m ∈ [−n/2, n/2)^2`, and the Nyquist row/column (`m_j = −n/2`) identically
//! zero. Products of band-limited fields are always evaluated on a zero-padded
//! grid large enough to make the projected result alias-free (exact).
//! Spatial indices are written `1, 2` (stored as axes `0, 1`) and the metric
//! convention makes the wave operator `□ = ∂_t² − Δ`.

pub mod data;
pub mod dynamics;
pub mod error;
pub mod estimates;
pub mod field;
pub mod gauge;
pub mod integrator;
pub mod products;

mod fft;
mod util;

pub use data::{gen_lowreg_data, LowRegData};
pub use dynamics::{
    charge, compute_adf, energy, gauss_residual, gauss_residual_direct, CshState, DirectState,
    Potential, QuarticGrouping,
};
pub use error::{CoreError, CoreResult};
pub use field::{Grid, SpectralField};
pub use gauge::{curl, divergence, helmholtz_split, GaugeSplit};
pub use integrator::{
    continuity_probe, convergence_study, init_from_data, init_from_gauge, simulate, Formulation,
    SimOutcome, StepperConfig,
};
pub use products::dealiased_product;

/// Complex scalar used for all field coefficients.
pub type C64 = num_complex::Complex64;
