//! Deterministic sampler for the angular interaction bound.
//!
//! For a convolution triple `ξ₃ = −ξ₁ − ξ₂`, `τ₃ = −τ₁ − τ₂` and wave signs
//! `σ₁, σ₂ ∈ {±1}`, the bound controls the angle between `σ₁ξ₁` and `σ₂ξ₂`:
//!
//! `∠(σ₁ξ₁, σ₂ξ₂) ≲ [ (⟨τ₁+σ₁|ξ₁|⟩ + ⟨τ₂+σ₂|ξ₂|⟩ + ⟨|τ₃|−|ξ₃|⟩) / min(⟨ξ₁⟩, ⟨ξ₂⟩) ]^{1/2}`
//!
//! The sampler draws frequency/modulation configurations from a fixed seeded
//! stream (wide magnitude range, a sub-population exactly on the wave cones
//! where the bound is tightest), evaluates the ratio `angle / rhs` for all
//! four sign pairs of every draw, and reports the maximum with a witness.
//! The run is a single serial fold over the stream, so the result is fully
//! deterministic for a given `(samples, seed)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Argmax configuration of the sampled ratio.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AngleWitness {
    pub xi1: [f64; 2],
    pub xi2: [f64; 2],
    pub tau1: f64,
    pub tau2: f64,
    /// Wave signs `(σ₁, σ₂)` of the extremal pair.
    pub signs: (i8, i8),
    /// Angle and bound at the witness.
    pub angle: f64,
    pub rhs: f64,
}

/// Result of a sampling run.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AngleSampleReport {
    /// Largest observed `angle / bound` ratio.
    pub max_ratio: f64,
    /// Number of configurations drawn (each checks four sign pairs).
    pub samples: u64,
    pub seed: u64,
    pub witness: AngleWitness,
}

/// Angle between two nonzero plane vectors, in `[0, π]`.
pub fn angle_between(u: [f64; 2], v: [f64; 2]) -> f64 {
    let cross = u[0] * v[1] - u[1] * v[0];
    let dot = u[0] * v[0] + u[1] * v[1];
    cross.abs().atan2(dot)
}

#[inline]
fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

fn ratio_for(
    xi1: [f64; 2],
    xi2: [f64; 2],
    tau1: f64,
    tau2: f64,
    s1: f64,
    s2: f64,
) -> (f64, f64, f64) {
    let n1 = (xi1[0] * xi1[0] + xi1[1] * xi1[1]).sqrt();
    let n2 = (xi2[0] * xi2[0] + xi2[1] * xi2[1]).sqrt();
    let xi3 = [-xi1[0] - xi2[0], -xi1[1] - xi2[1]];
    let tau3 = -tau1 - tau2;
    let n3 = (xi3[0] * xi3[0] + xi3[1] * xi3[1]).sqrt();
    let w1 = bracket(tau1 + s1 * n1);
    let w2 = bracket(tau2 + s2 * n2);
    let w3 = bracket(tau3.abs() - n3);
    let denom = bracket(n1).min(bracket(n2));
    let rhs = ((w1 + w2 + w3) / denom).sqrt();
    let angle = angle_between([s1 * xi1[0], s1 * xi1[1]], [s2 * xi2[0], s2 * xi2[1]]);
    (angle / rhs, angle, rhs)
}

/// Draw `samples` configurations from the seeded stream and report the
/// maximal `angle / bound` ratio over all draws and sign pairs.
pub fn angle_bound_sample(samples: u64, seed: u64) -> AngleSampleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = AngleSampleReport {
        max_ratio: f64::NEG_INFINITY,
        samples,
        seed,
        witness: AngleWitness {
            xi1: [0.0; 2],
            xi2: [0.0; 2],
            tau1: 0.0,
            tau2: 0.0,
            signs: (1, 1),
            angle: 0.0,
            rhs: 1.0,
        },
    };

    for _ in 0..samples {
        // Magnitudes log-uniform over [1e-1, 1e3); independent directions.
        let r1 = 10f64.powf(rng.random_range(-1.0..3.0));
        let r2 = 10f64.powf(rng.random_range(-1.0..3.0));
        let th1 = rng.random_range(0.0..std::f64::consts::TAU);
        let th2 = rng.random_range(0.0..std::f64::consts::TAU);
        let xi1 = [r1 * th1.cos(), r1 * th1.sin()];
        let xi2 = [r2 * th2.cos(), r2 * th2.sin()];

        // Base modulations on a randomly chosen cone sheet, displaced by a
        // log-uniform amount; half the draws sit exactly on the cone.
        let mut tau = [0.0_f64; 2];
        for (t, r) in tau.iter_mut().zip([r1, r2]) {
            let sheet: f64 = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let on_cone = rng.random::<bool>();
            let disp = if on_cone {
                0.0
            } else {
                let mag = 10f64.powf(rng.random_range(-3.0..3.0));
                if rng.random::<bool>() {
                    mag
                } else {
                    -mag
                }
            };
            *t = sheet * r + disp;
        }

        for s1 in [1.0_f64, -1.0] {
            for s2 in [1.0_f64, -1.0] {
                let (ratio, angle, rhs) = ratio_for(xi1, xi2, tau[0], tau[1], s1, s2);
                if ratio > best.max_ratio {
                    best.max_ratio = ratio;
                    best.witness = AngleWitness {
                        xi1,
                        xi2,
                        tau1: tau[0],
                        tau2: tau[1],
                        signs: (s1 as i8, s2 as i8),
                        angle,
                        rhs,
                    };
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_between_basic_geometry() {
        let quarter = angle_between([1.0, 0.0], [0.0, 2.0]);
        assert!((quarter - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let opposite = angle_between([1.0, 1.0], [-3.0, -3.0]);
        assert!((opposite - std::f64::consts::PI).abs() < 1e-15);
        let same = angle_between([2.0, -1.0], [4.0, -2.0]);
        assert!(same.abs() < 1e-15);
    }

    #[test]
    fn sampler_is_deterministic_in_process() {
        let a = angle_bound_sample(20_000, 42);
        let b = angle_bound_sample(20_000, 42);
        assert_eq!(a.max_ratio.to_bits(), b.max_ratio.to_bits());
        assert_eq!(a.witness.xi1, b.witness.xi1);
        assert_eq!(a.witness.tau1.to_bits(), b.witness.tau1.to_bits());
        assert_eq!(a.witness.signs, b.witness.signs);
    }

    #[test]
    fn different_seeds_explore_different_configurations() {
        let a = angle_bound_sample(5_000, 1);
        let b = angle_bound_sample(5_000, 2);
        assert_ne!(a.witness.xi1, b.witness.xi1);
    }

    #[test]
    fn witness_reproduces_its_ratio() {
        let rep = angle_bound_sample(50_000, 7);
        let w = rep.witness;
        let (ratio, angle, rhs) = ratio_for(
            w.xi1,
            w.xi2,
            w.tau1,
            w.tau2,
            w.signs.0 as f64,
            w.signs.1 as f64,
        );
        assert_eq!(ratio.to_bits(), rep.max_ratio.to_bits());
        assert_eq!(angle.to_bits(), w.angle.to_bits());
        assert_eq!(rhs.to_bits(), w.rhs.to_bits());
    }

    #[test]
    fn ratio_stays_of_order_one_on_a_quick_run() {
        // The bound should hold with a modest constant: the observed maximum
        // must be positive, at least the trivial on-cone value, and far from
        // diverging. (The precise frozen regression value for the canonical
        // run lives in the acceptance suite.)
        let rep = angle_bound_sample(50_000, 7);
        assert!(
            rep.max_ratio > 0.5,
            "suspiciously small max {}",
            rep.max_ratio
        );
        assert!(rep.max_ratio < 10.0, "bound violated: {}", rep.max_ratio);
    }

    #[test]
    fn parallel_on_cone_interactions_have_zero_angle() {
        // Same direction, both exactly on the + cone: angle 0, rhs ≥ sqrt(3/⟨ξ⟩)… > 0.
        let xi = [3.0, 4.0];
        let (ratio, angle, rhs) = ratio_for(xi, [6.0, 8.0], -5.0, -10.0, 1.0, 1.0);
        assert_eq!(angle, 0.0);
        assert!(rhs > 0.0);
        assert_eq!(ratio, 0.0);
    }
}
