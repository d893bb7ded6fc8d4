//! Small numeric helpers.

/// Compensated (Kahan-Babuška-Neumaier) summation.
///
/// Used for mode sums that feed diagnostics (norms, charge, energy) so the
/// floating-point floor of conservation tests is set by the dynamics, not by
/// naive accumulation order.
pub(crate) fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
