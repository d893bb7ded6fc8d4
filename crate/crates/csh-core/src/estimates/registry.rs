//! Registry of the bilinear-estimate instances used by the low-regularity
//! local well-posedness argument for the Chern-Simons-Higgs system.
//!
//! Each entry records, as a function of the Sobolev index `s` of the Higgs
//! data, the exponent tuple of one product estimate the fixed-point argument
//! needs. The argument closes exactly when every registered instance passes
//! the fourteen conditions in [`super::afs`]; the registry therefore encodes
//! where the method stops working as `s` decreases. The threshold is
//! `s = 1/4`: strictly above it every instance passes, and at `1/4` exactly
//! two instances pin the failure (the first null-form case through condition
//! 7 and the high-frequency curl-free gradient bound through condition 10,
//! both with margin exactly zero).

use super::afs::{afs_check, ExponentTuple};
use super::ext::ExtScalar;
use serde_json::json;

/// One registered estimate instance: a labelled exponent-tuple builder plus
/// the expected verdicts at the threshold and just above it.
#[derive(Clone, Copy)]
pub struct ClaimInstance {
    /// Stable label naming what the instance bounds.
    pub label: &'static str,
    /// Human-oriented summary of the bounded product.
    pub role: &'static str,
    /// Exponent tuple as a function of the Sobolev index `s`.
    pub builder: fn(ExtScalar) -> ExponentTuple,
    /// Expected verdict at `s = 1/4` exactly.
    pub passes_at_quarter: bool,
    /// Expected verdict at `s = 1/4 + ε`.
    pub passes_above_quarter: bool,
}

fn half() -> ExtScalar {
    ExtScalar::rational(1, 2)
}

/// Null-form product, output space at `(s₀, b₀) = (s − 1/4, −1/2)`.
fn q12_case1(s: ExtScalar) -> ExponentTuple {
    ExponentTuple {
        s0: ExtScalar::rational(1, 4) - s,
        s1: s + half(),
        s2: s,
        b0: -half(),
        b1: half().tick(1),
        b2: half().tick(1),
    }
}

/// Null-form product, output modulation exponent traded down to 0.
fn q12_case2(s: ExtScalar) -> ExponentTuple {
    ExponentTuple {
        s0: ExtScalar::rational(1, 4) - s,
        s1: s + half(),
        s2: s,
        b0: ExtScalar::zero(),
        b1: ExtScalar::zero().tick(1),
        b2: half().tick(1),
    }
}

/// Null-form product, the low-modulation factor on the other input.
fn q12_case3(s: ExtScalar) -> ExponentTuple {
    ExponentTuple {
        s0: ExtScalar::rational(1, 4) - s,
        s1: s + half(),
        s2: s,
        b0: ExtScalar::zero(),
        b1: half().tick(1),
        b2: ExtScalar::zero().tick(1),
    }
}

/// Source bound for the divergence-free gauge part (`A^df` from `φ ∂φ`).
fn adf_product(s: ExtScalar) -> ExponentTuple {
    ExponentTuple {
        s0: -s,
        s1: s + ExtScalar::int(1),
        s2: s,
        b0: ExtScalar::with_eps(-1, 2, -1, 2), // −1/2 − ε/2
        b1: half().tick(1),
        b2: half().tick(1),
    }
}

/// High-frequency part of the curl-free gauge potential against a gradient.
fn acf_grad_high(s: ExtScalar) -> ExponentTuple {
    ExponentTuple {
        s0: -s,
        s1: s + ExtScalar::rational(3, 4),
        s2: s,
        b0: half().tick(-1),
        b1: ExtScalar::zero(),
        b2: half().tick(1),
    }
}

/// Dual estimate placing the gradient on the curl-free gauge factor.
fn grad_acf_dual(s: ExtScalar) -> ExponentTuple {
    ExponentTuple {
        s0: s + ExtScalar::rational(1, 4).tick(-2),
        s1: s + ExtScalar::int(1),
        s2: -s,
        b0: -half() + ExtScalar::zero().tick(2),
        b1: half().tick(1),
        b2: half().tick(-1),
    }
}

/// The six instances the well-posedness argument instantiates.
pub fn registry() -> Vec<ClaimInstance> {
    vec![
        ClaimInstance {
            label: "q12/case1",
            role: "null-form product of two half-wave factors, rough output",
            builder: q12_case1,
            passes_at_quarter: false,
            passes_above_quarter: true,
        },
        ClaimInstance {
            label: "q12/case2",
            role: "null-form product, zero output modulation weight",
            builder: q12_case2,
            passes_at_quarter: true,
            passes_above_quarter: true,
        },
        ClaimInstance {
            label: "q12/case3",
            role: "null-form product, low modulation moved to the second factor",
            builder: q12_case3,
            passes_at_quarter: true,
            passes_above_quarter: true,
        },
        ClaimInstance {
            label: "adf-product",
            role: "divergence-free gauge part sourced by φ·∂φ",
            builder: adf_product,
            passes_at_quarter: true,
            passes_above_quarter: true,
        },
        ClaimInstance {
            label: "acf-grad-high",
            role: "high-frequency curl-free gauge part times a gradient",
            builder: acf_grad_high,
            passes_at_quarter: false,
            passes_above_quarter: true,
        },
        ClaimInstance {
            label: "grad-acf-dual",
            role: "gradient of the curl-free gauge part times the field (dual form)",
            builder: grad_acf_dual,
            passes_at_quarter: true,
            passes_above_quarter: true,
        },
    ]
}

/// Verdict for one registered instance at a concrete `s`.
#[derive(Clone, Debug)]
pub struct InstanceReport {
    pub label: &'static str,
    pub tuple: ExponentTuple,
    pub passed: bool,
    /// Indices of violated conditions (empty iff passed).
    pub violations: Vec<u8>,
    /// Binding condition (smallest margin; for failures, a violated one).
    pub binding_condition: u8,
    /// Margin of the binding condition.
    pub margin: ExtScalar,
}

impl InstanceReport {
    /// One NDJSON object: `{label, tuple, verdict, binding_condition, margin}`.
    /// Scalars are printed in the exact `q±ke` form.
    pub fn to_ndjson(&self) -> String {
        let t = &self.tuple;
        json!({
            "label": self.label,
            "tuple": {
                "s0": t.s0.to_string(),
                "s1": t.s1.to_string(),
                "s2": t.s2.to_string(),
                "b0": t.b0.to_string(),
                "b1": t.b1.to_string(),
                "b2": t.b2.to_string(),
            },
            "verdict": if self.passed { "pass" } else { "fail" },
            "binding_condition": self.binding_condition,
            "margin": self.margin.to_string(),
        })
        .to_string()
    }
}

/// Evaluate every registered instance at Sobolev index `s`.
pub fn verify_claim_registry(s: ExtScalar) -> Vec<InstanceReport> {
    registry()
        .into_iter()
        .map(|inst| {
            let tuple = (inst.builder)(s);
            let rep = afs_check(&tuple);
            let binding = rep.binding();
            InstanceReport {
                label: inst.label,
                tuple,
                passed: rep.passed(),
                violations: rep.violations(),
                binding_condition: binding.index,
                margin: binding.margin,
            }
        })
        .collect()
}
