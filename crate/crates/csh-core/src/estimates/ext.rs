//! Rational numbers extended by a formal positive infinitesimal `ε`.
//!
//! Exponent arithmetic in sharp bilinear estimates constantly uses values
//! like `1/2+` (any exponent strictly above one half, as close as desired).
//! We model them exactly as `q + k·ε` with `q, k ∈ ℚ` and `ε` a formal
//! infinitesimal: positive, yet smaller than every positive rational. The
//! induced order is lexicographic in `(q, k)`, which is exactly the order of
//! evaluating at a sufficiently small positive real `ε`.

use num_rational::Rational64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// Exact rational scalar.
pub type Rat = Rational64;

/// `q + k·ε` with `ε` an order-defining positive infinitesimal.
///
/// The derived `Ord` is lexicographic in `(q, eps)` thanks to field order,
/// which is the mathematically correct order on `ℚ + ℚ·ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtScalar {
    /// Rational (standard) part.
    pub q: Rat,
    /// Coefficient of the infinitesimal.
    pub eps: Rat,
}

impl ExtScalar {
    /// Zero.
    pub const fn zero() -> Self {
        // Rational64::new_raw is const; 0/1 is already reduced.
        ExtScalar {
            q: Rat::new_raw(0, 1),
            eps: Rat::new_raw(0, 1),
        }
    }

    /// Purely rational value `p/d`.
    pub fn rational(p: i64, d: i64) -> Self {
        ExtScalar {
            q: Rat::new(p, d),
            eps: Rat::new(0, 1),
        }
    }

    /// Integer value.
    pub fn int(v: i64) -> Self {
        Self::rational(v, 1)
    }

    /// General value `p/d + (ep/ed)·ε`.
    pub fn with_eps(p: i64, d: i64, ep: i64, ed: i64) -> Self {
        ExtScalar {
            q: Rat::new(p, d),
            eps: Rat::new(ep, ed),
        }
    }

    /// From parts.
    pub fn new(q: Rat, eps: Rat) -> Self {
        ExtScalar { q, eps }
    }

    /// `self + k·ε` — the "tick" used to write exponents like `1/2+`.
    pub fn tick(self, k: i64) -> Self {
        ExtScalar {
            q: self.q,
            eps: self.eps + Rat::new(k, 1),
        }
    }

    /// True when the value is `> 0` in the extended order.
    pub fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    /// True when the value is `≥ 0` in the extended order.
    pub fn is_nonnegative(&self) -> bool {
        *self >= Self::zero()
    }

    /// Smaller of two values.
    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Larger of two values.
    pub fn max(self, other: Self) -> Self {
        if self < other {
            other
        } else {
            self
        }
    }

    /// Evaluate at a concrete rational `ε = e` (used by independent oracles:
    /// for small enough `e > 0` strict comparisons against 0 must agree with
    /// the formal order).
    pub fn eval_at(&self, e: Rat) -> Rat {
        self.q + self.eps * e
    }

    /// Double both parts into a float (display/diagnostics only).
    pub fn to_f64_at(&self, e: f64) -> f64 {
        let qf = *self.q.numer() as f64 / *self.q.denom() as f64;
        let kf = *self.eps.numer() as f64 / *self.eps.denom() as f64;
        qf + kf * e
    }
}

impl Add for ExtScalar {
    type Output = ExtScalar;
    fn add(self, rhs: ExtScalar) -> ExtScalar {
        ExtScalar {
            q: self.q + rhs.q,
            eps: self.eps + rhs.eps,
        }
    }
}

impl Sub for ExtScalar {
    type Output = ExtScalar;
    fn sub(self, rhs: ExtScalar) -> ExtScalar {
        ExtScalar {
            q: self.q - rhs.q,
            eps: self.eps - rhs.eps,
        }
    }
}

impl Neg for ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        ExtScalar {
            q: -self.q,
            eps: -self.eps,
        }
    }
}

impl Mul<Rat> for ExtScalar {
    type Output = ExtScalar;
    fn mul(self, rhs: Rat) -> ExtScalar {
        ExtScalar {
            q: self.q * rhs,
            eps: self.eps * rhs,
        }
    }
}

impl Mul<i64> for ExtScalar {
    type Output = ExtScalar;
    fn mul(self, rhs: i64) -> ExtScalar {
        self * Rat::new(rhs, 1)
    }
}

impl fmt::Display for ExtScalar {
    /// `"3/4"`, `"3/4+e"`, `"0-2e"`, `"1/2+1/2e"` — rational part first,
    /// then the ε coefficient with explicit sign (unit coefficient printed
    /// as a bare `e`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.eps == Rat::new(0, 1) {
            return write!(f, "{}", self.q);
        }
        let sign = if self.eps < Rat::new(0, 1) { '-' } else { '+' };
        let mag = if self.eps < Rat::new(0, 1) {
            -self.eps
        } else {
            self.eps
        };
        if mag == Rat::new(1, 1) {
            write!(f, "{}{}e", self.q, sign)
        } else {
            write!(f, "{}{}{}e", self.q, sign, mag)
        }
    }
}

impl Serialize for ExtScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ExtScalar", 2)?;
        st.serialize_field("q", &self.q.to_string())?;
        st.serialize_field("eps", &self.eps.to_string())?;
        st.end()
    }
}

/// Parse a plain rational ("3/10", "-1/2", "2") into an `ExtScalar` with no
/// infinitesimal part. Used by the CLI for `--s`.
impl FromStr for ExtScalar {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let q = Rat::from_str(s.trim())
            .map_err(|e| format!("cannot parse '{s}' as a rational: {e}"))?;
        Ok(ExtScalar::new(q, Rat::new(0, 1)))
    }
}
