//! Helmholtz decomposition of the gauge potential and first-order
//! differential combinations of vector fields.
//!
//! A spatial vector field `A = (A₁, A₂)` on the torus splits uniquely as
//!
//! `A = A^df + A^cf + mean`,
//!
//! with `div A^df = 0`, `curl A^cf = 0`, and both parts mean-free. In
//! Fourier space, writing `ξ = (ξ₁, ξ₂)`:
//!
//! * `Â^df₁ = (ξ₂² Â₁ − ξ₁ξ₂ Â₂)/|ξ|²`, `Â^df₂ = (ξ₁² Â₂ − ξ₁ξ₂ Â₁)/|ξ|²`
//! * `Â^cf_j = ξ_j (ξ·Â)/|ξ|²`
//!
//! and the zero mode is carried separately as the spatial mean.

use crate::error::CoreResult;
use crate::field::SpectralField;
use crate::C64;

/// Result of [`helmholtz_split`]: divergence-free part, curl-free part and
/// the spatial means. `df` and `cf` are mean-free by construction.
#[derive(Clone, Debug)]
pub struct GaugeSplit {
    /// Divergence-free (solenoidal) part, zero mean.
    pub df: [SpectralField; 2],
    /// Curl-free (gradient) part, zero mean.
    pub cf: [SpectralField; 2],
    /// Spatial means of the two components.
    pub mean: [C64; 2],
}

impl GaugeSplit {
    /// Reassemble the full vector field `df + cf + mean`.
    pub fn reassemble(&self) -> [SpectralField; 2] {
        let mut a1 = &self.df[0] + &self.cf[0];
        let mut a2 = &self.df[1] + &self.cf[1];
        a1.set_zero_mode(self.mean[0]);
        a2.set_zero_mode(self.mean[1]);
        [a1, a2]
    }
}

/// Split a vector field into divergence-free, curl-free and mean parts.
pub fn helmholtz_split(a1: &SpectralField, a2: &SpectralField) -> CoreResult<GaugeSplit> {
    let grid = a1.grid();
    grid.ensure_same(&a2.grid(), "helmholtz_split")?;

    let n = grid.n();
    let mut df1 = SpectralField::zeros(grid);
    let mut df2 = SpectralField::zeros(grid);
    let mut cf1 = SpectralField::zeros(grid);
    let mut cf2 = SpectralField::zeros(grid);

    for i in 0..n {
        if grid.is_nyquist_bin(i) {
            continue;
        }
        let x1 = grid.freq(i);
        for j in 0..n {
            if grid.is_nyquist_bin(j) {
                continue;
            }
            let x2 = grid.freq(j);
            let q = x1 * x1 + x2 * x2;
            if q == 0.0 {
                continue; // zero mode handled as the mean
            }
            let v1 = a1.coeffs()[[i, j]];
            let v2 = a2.coeffs()[[i, j]];
            let dot = (v1 * x1 + v2 * x2) / q;
            let c1 = dot * x1;
            let c2 = dot * x2;
            cf1.coeffs_mut()[[i, j]] = c1;
            cf2.coeffs_mut()[[i, j]] = c2;
            df1.coeffs_mut()[[i, j]] = v1 - c1;
            df2.coeffs_mut()[[i, j]] = v2 - c2;
        }
    }

    Ok(GaugeSplit {
        df: [df1, df2],
        cf: [cf1, cf2],
        mean: [a1.zero_mode(), a2.zero_mode()],
    })
}

/// Scalar curl `∂₁a₂ − ∂₂a₁`.
pub fn curl(a1: &SpectralField, a2: &SpectralField) -> CoreResult<SpectralField> {
    a1.grid().ensure_same(&a2.grid(), "curl")?;
    Ok(&a2.derivative(0) - &a1.derivative(1))
}

/// Divergence `∂₁a₁ + ∂₂a₂`.
pub fn divergence(a1: &SpectralField, a2: &SpectralField) -> CoreResult<SpectralField> {
    a1.grid().ensure_same(&a2.grid(), "divergence")?;
    Ok(&a1.derivative(0) + &a2.derivative(1))
}
