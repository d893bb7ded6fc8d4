//! Discrete `X^{s,b}` norm of a uniformly sampled field trajectory.
//!
//! Given `M ≥ 8` snapshots `u(t_i)` at spacing `dt`, the trajectory is
//! expanded in a discrete Fourier series in time (periodization over the
//! window `T = M·dt`) and weighted mode-wise:
//!
//! `‖u‖² = L² Σ_{m,k} ⟨ξ_m⟩^{2s} · w(τ_k, ξ_m)^{2b} · |û(τ_k, ξ_m)|²`
//!
//! with `τ_k = 2πk̃/(M dt)` (signed integer time modes `k̃`) and weight
//! `w = ⟨|τ| − |ξ|⟩` (wave-adapted) or `w = ⟨τ⟩` (plain space-time Sobolev).
//! The temporal transform is normalized by `1/M`, so for `b = 0` the norm
//! collapses to the root-mean-square over snapshots of `‖u(t_i)‖_{H^s}` —
//! a convenient exactness check and a sane scale convention.

use crate::error::{CoreError, CoreResult};
use crate::field::SpectralField;
use crate::util::kahan_sum;
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Temporal weight selection for the discrete `X^{s,b}` norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemporalWeight {
    /// `⟨|τ| − |ξ|⟩^b` — distance to the wave cone.
    WaveDistance,
    /// `⟨τ⟩^b` — plain temporal bracket.
    TauBracket,
}

/// Discrete `X^{s,b}` norm of `samples` (snapshots at spacing `dt`).
///
/// Errors when fewer than 8 snapshots are supplied, on grid mismatch, or on
/// a non-positive `dt`.
pub fn xsb_norm(
    samples: &[SpectralField],
    dt: f64,
    s: f64,
    b: f64,
    weight: TemporalWeight,
) -> CoreResult<f64> {
    const MIN_SAMPLES: usize = 8;
    if samples.len() < MIN_SAMPLES {
        return Err(CoreError::InsufficientSamples {
            what: "xsb_norm",
            got: samples.len(),
            need: MIN_SAMPLES,
        });
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(CoreError::InvalidParameter {
            name: "dt",
            reason: format!("{dt} must be finite and positive"),
        });
    }
    let grid = samples[0].grid();
    for f in &samples[1..] {
        grid.ensure_same(&f.grid(), "xsb_norm")?;
    }

    let m = samples.len();
    let window = m as f64 * dt;
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);
    let n = grid.n();

    let mut contributions: Vec<f64> = Vec::with_capacity(n * n);
    let mut series = vec![Complex64::new(0.0, 0.0); m];
    for i in 0..n {
        if grid.is_nyquist_bin(i) {
            continue;
        }
        for j in 0..n {
            if grid.is_nyquist_bin(j) {
                continue;
            }
            for (t, f) in samples.iter().enumerate() {
                series[t] = f.coeffs()[[i, j]];
            }
            fft.process(&mut series);
            let x1 = grid.freq(i);
            let x2 = grid.freq(j);
            let xi = (x1 * x1 + x2 * x2).sqrt();
            let space_weight = (1.0 + xi * xi).powf(s);
            for (k, c) in series.iter().enumerate() {
                let kt = if k < m / 2 {
                    k as i64
                } else {
                    k as i64 - m as i64
                };
                let tau = 2.0 * std::f64::consts::PI * kt as f64 / window;
                let base = match weight {
                    TemporalWeight::WaveDistance => {
                        let d = tau.abs() - xi;
                        1.0 + d * d
                    }
                    TemporalWeight::TauBracket => 1.0 + tau * tau,
                };
                // |û|² carries the 1/M forward normalization squared.
                let amp = c.norm_sqr() / (m as f64 * m as f64);
                contributions.push(space_weight * base.powf(b) * amp);
            }
        }
    }
    Ok(grid.length() * kahan_sum(contributions).sqrt())
}
