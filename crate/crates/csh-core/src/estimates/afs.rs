//! The fourteen sharp exponent conditions of the two-dimensional bilinear
//! wave-Sobolev product estimate.
//!
//! The estimate bounds `‖uv‖` in the space with exponents `(−s₀, −b₀)`
//! against `‖u‖ (s₁, b₁)` and `‖v‖ (s₂, b₂)`; it holds if and only if the
//! conditions below are satisfied (conditions 1–11 strictly, 12–14 allowing
//! equality). The checker evaluates **all** conditions with exact
//! [`ExtScalar`] margins — it never short-circuits — so callers can report
//! the full violation set and the binding (smallest-margin) condition.

use super::ext::ExtScalar;
use serde::Serialize;

/// The six exponents of one bilinear estimate instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentTuple {
    pub s0: ExtScalar,
    pub s1: ExtScalar,
    pub s2: ExtScalar,
    pub b0: ExtScalar,
    pub b1: ExtScalar,
    pub b2: ExtScalar,
}

/// Outcome of a single condition: exact margin (left side minus right side,
/// so the condition wants it positive / nonnegative) and its verdict.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConditionReport {
    /// 1-based condition index (stable, part of the public interface).
    pub index: u8,
    /// `LHS − RHS` in exact arithmetic.
    pub margin: ExtScalar,
    /// Strict (`> 0`) or non-strict (`≥ 0`) requirement.
    pub strict: bool,
    /// Whether the condition holds.
    pub satisfied: bool,
}

/// Full report: all fourteen condition margins.
#[derive(Clone, Debug, Serialize)]
pub struct AfsReport {
    pub conditions: Vec<ConditionReport>,
}

impl AfsReport {
    /// All conditions hold.
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.satisfied)
    }

    /// Indices of violated conditions (empty iff passed).
    pub fn violations(&self) -> Vec<u8> {
        self.conditions
            .iter()
            .filter(|c| !c.satisfied)
            .map(|c| c.index)
            .collect()
    }

    /// The binding condition: smallest margin, ties broken by smallest
    /// index. For a failing tuple this is always a violated condition.
    pub fn binding(&self) -> &ConditionReport {
        self.conditions
            .iter()
            .min_by(|a, b| a.margin.cmp(&b.margin).then(a.index.cmp(&b.index)))
            .expect("report always has 14 conditions")
    }
}

fn min3(a: ExtScalar, b: ExtScalar, c: ExtScalar) -> ExtScalar {
    a.min(b).min(c)
}

/// Evaluate all fourteen conditions for `t` with exact margins.
pub fn afs_check(t: &ExponentTuple) -> AfsReport {
    let ExponentTuple {
        s0,
        s1,
        s2,
        b0,
        b1,
        b2,
    } = *t;
    let zero = ExtScalar::zero();
    let half = ExtScalar::rational(1, 2);
    let one = ExtScalar::int(1);
    let three_half = ExtScalar::rational(3, 2);
    let three_quarter = ExtScalar::rational(3, 4);

    let ssum = s0 + s1 + s2;
    let bsum = b0 + b1 + b2;
    let pair01 = b0 + b1;
    let pair02 = b0 + b2;
    let pair12 = b1 + b2;

    // (index, margin = LHS − RHS, strict)
    let raw: [(u8, ExtScalar, bool); 14] = [
        (1, bsum - half, true),
        (2, pair01, true),
        (3, pair02, true),
        (4, pair12, true),
        (5, ssum - (three_half - bsum), true),
        (6, ssum - (one - min3(pair01, pair02, pair12)), true),
        (7, ssum - (half - min3(b0, b1, b2)), true),
        (8, ssum - three_quarter, true),
        (9, (s0 + b0) + s1 * 2 + s2 * 2 - one, true),
        (10, s0 * 2 + (s1 + b1) + s2 * 2 - one, true),
        (11, s0 * 2 + s1 * 2 + (s2 + b2) - one, true),
        (12, (s1 + s2) - zero.max(-b0), false),
        (13, (s0 + s2) - zero.max(-b1), false),
        (14, (s0 + s1) - zero.max(-b2), false),
    ];

    AfsReport {
        conditions: raw
            .into_iter()
            .map(|(index, margin, strict)| ConditionReport {
                index,
                margin,
                strict,
                satisfied: if strict {
                    margin.is_positive()
                } else {
                    margin.is_nonnegative()
                },
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::ext::Rat;
    use proptest::prelude::*;

    fn tuple(vals: [ExtScalar; 6]) -> ExponentTuple {
        ExponentTuple {
            s0: vals[0],
            s1: vals[1],
            s2: vals[2],
            b0: vals[3],
            b1: vals[4],
            b2: vals[5],
        }
    }

    /// Independent re-evaluation: substitute a small positive rational for ε
    /// and recheck every condition in plain rational arithmetic. For margins
    /// whose rational part is nonzero, any ε below the smallest rational gap
    /// gives the same verdict; zero-rational margins are decided by the ε
    /// coefficient, which substitution also reproduces.
    fn substitution_oracle(t: &ExponentTuple, e: Rat) -> Vec<bool> {
        let v = |x: ExtScalar| x.eval_at(e);
        let (s0, s1, s2, b0, b1, b2) = (v(t.s0), v(t.s1), v(t.s2), v(t.b0), v(t.b1), v(t.b2));
        let zero = Rat::new(0, 1);
        let min3 = |a: Rat, b: Rat, c: Rat| a.min(b).min(c);
        let ssum = s0 + s1 + s2;
        let bsum = b0 + b1 + b2;
        vec![
            bsum > Rat::new(1, 2),
            b0 + b1 > zero,
            b0 + b2 > zero,
            b1 + b2 > zero,
            ssum > Rat::new(3, 2) - bsum,
            ssum > Rat::new(1, 1) - min3(b0 + b1, b0 + b2, b1 + b2),
            ssum > Rat::new(1, 2) - min3(b0, b1, b2),
            ssum > Rat::new(3, 4),
            (s0 + b0) + s1 * Rat::new(2, 1) + s2 * Rat::new(2, 1) > Rat::new(1, 1),
            s0 * Rat::new(2, 1) + (s1 + b1) + s2 * Rat::new(2, 1) > Rat::new(1, 1),
            s0 * Rat::new(2, 1) + s1 * Rat::new(2, 1) + (s2 + b2) > Rat::new(1, 1),
            s1 + s2 >= zero.max(-b0),
            s0 + s2 >= zero.max(-b1),
            s0 + s1 >= zero.max(-b2),
        ]
    }

    #[test]
    fn all_fourteen_conditions_present_in_order() {
        let t = tuple([ExtScalar::int(1); 6]);
        let rep = afs_check(&t);
        assert_eq!(rep.conditions.len(), 14);
        for (k, c) in rep.conditions.iter().enumerate() {
            assert_eq!(c.index as usize, k + 1);
        }
        let strict: Vec<bool> = rep.conditions.iter().map(|c| c.strict).collect();
        assert_eq!(
            strict,
            [
                true, true, true, true, true, true, true, true, true, true, true, false, false,
                false
            ]
        );
    }

    #[test]
    fn generous_exponents_pass_with_positive_margins() {
        let one = ExtScalar::int(1);
        let rep = afs_check(&tuple([one; 6]));
        assert!(rep.passed());
        for c in &rep.conditions {
            assert!(c.margin.is_positive());
        }
    }

    #[test]
    fn nonstrict_conditions_accept_zero_margin_strict_do_not() {
        // s0 = s1 = s2 = 1/4, b0 = b1 = b2 = 0: condition 12 has margin 1/2
        // but condition 2 (b0+b1 > 0) has margin exactly 0 and must fail.
        let q = ExtScalar::rational(1, 4);
        let z = ExtScalar::zero();
        let rep = afs_check(&tuple([q, q, q, z, z, z]));
        let c2 = &rep.conditions[1];
        assert_eq!(c2.margin, ExtScalar::zero());
        assert!(!c2.satisfied, "strict condition at margin 0 must fail");
        // Now a tuple where a *non-strict* condition sits exactly at 0:
        // s0 = −1/4, s2 = 1/4, b1 = 1/2 ⟹ condition 13: s0+s2 = 0 ≥ max(0,−b1) = 0.
        let rep = afs_check(&tuple([
            ExtScalar::rational(-1, 4),
            ExtScalar::int(1),
            ExtScalar::rational(1, 4),
            ExtScalar::rational(1, 2),
            ExtScalar::rational(1, 2),
            ExtScalar::rational(1, 2),
        ]));
        let c13 = &rep.conditions[12];
        assert_eq!(c13.margin, ExtScalar::zero());
        assert!(c13.satisfied, "non-strict condition at margin 0 must pass");
    }

    #[test]
    fn binding_condition_is_minimum_margin_with_smallest_index_tiebreak() {
        // All margins comfortably positive except conditions 2 and 3, which
        // tie at ε: binding must be index 2.
        let s = ExtScalar::int(1);
        let rep = afs_check(&tuple([
            s,
            s,
            s,
            ExtScalar::rational(-1, 2),
            ExtScalar::rational(1, 2).tick(1),
            ExtScalar::rational(1, 2).tick(1),
        ]));
        let b = rep.binding();
        assert_eq!(b.index, 2);
        assert_eq!(b.margin, ExtScalar::zero().tick(1));
    }

    #[test]
    fn failing_tuple_reports_every_violation() {
        // b's sum to < 1/2 and s's are tiny: several conditions fail at once
        // and the report must list them all (no short-circuit).
        let z = ExtScalar::zero();
        let rep = afs_check(&tuple([z, z, z, z, z, z]));
        let v = rep.violations();
        assert_eq!(v, vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]);
        assert!(!rep.passed());
    }

    proptest! {
        /// Verdict equivalence against the ε-substitution oracle on random
        /// small-denominator tuples. ε = 1/2²⁰ is far below the smallest
        /// rational gap producible from denominators ≤ 16 and ε-coefficients
        /// |k| ≤ 4 (gaps are ≥ 1/16·…·≫ 6·2⁻²⁰·4), so the substituted order
        /// agrees with the formal one.
        #[test]
        fn matches_substitution_oracle(
            nums in proptest::collection::vec(-12i64..=12, 6),
            dens in proptest::collection::vec(1i64..=4, 6),
            ticks in proptest::collection::vec(-4i64..=4, 6),
        ) {
            let mk = |i: usize| ExtScalar::new(
                Rat::new(nums[i], 4 * dens[i]),
                Rat::new(ticks[i], 1),
            );
            let t = tuple([mk(0), mk(1), mk(2), mk(3), mk(4), mk(5)]);
            let rep = afs_check(&t);
            let got: Vec<bool> = rep.conditions.iter().map(|c| c.satisfied).collect();
            let want = substitution_oracle(&t, Rat::new(1, 1 << 20));
            prop_assert_eq!(got, want);
        }

        /// Monotonicity: raising any single s-exponent (with everything else
        /// fixed) can only keep or enlarge every margin, never break a
        /// previously passing tuple.
        #[test]
        fn raising_regularity_never_hurts(
            nums in proptest::collection::vec(-8i64..=8, 6),
            ticks in proptest::collection::vec(-2i64..=2, 6),
            which in 0usize..3,
            bump_num in 1i64..=8,
        ) {
            let mk = |i: usize| ExtScalar::new(Rat::new(nums[i], 8), Rat::new(ticks[i], 1));
            let base = tuple([mk(0), mk(1), mk(2), mk(3), mk(4), mk(5)]);
            let mut bumped = base;
            let bump = ExtScalar::new(Rat::new(bump_num, 8), Rat::new(0, 1));
            match which {
                0 => bumped.s0 = bumped.s0 + bump,
                1 => bumped.s1 = bumped.s1 + bump,
                _ => bumped.s2 = bumped.s2 + bump,
            }
            let before = afs_check(&base);
            let after = afs_check(&bumped);
            for (b, a) in before.conditions.iter().zip(after.conditions.iter()) {
                prop_assert!(a.margin >= b.margin,
                    "margin of condition {} decreased after raising s{}", b.index, which);
                if b.satisfied {
                    prop_assert!(a.satisfied);
                }
            }
        }
    }
}
