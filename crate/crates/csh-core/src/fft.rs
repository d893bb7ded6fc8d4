//! 2-D FFT plumbing and band embedding used by the field layer.
//!
//! All arrays are row-major `Array2<Complex64>` with axis 0 ↔ spatial
//! direction 1 and axis 1 ↔ spatial direction 2. The forward transform here is
//! unnormalized (rustfft convention); callers apply `1/N²` where needed so
//! that coefficients are amplitudes of `e^{i ξ_m · x}`.

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

pub(crate) use rustfft::FftDirection;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Transform every contiguous row of `flat` (length `len` each) in place.
fn transform_rows(flat: &mut [Complex64], len: usize, direction: FftDirection) {
    debug_assert_eq!(flat.len() % len, 0);
    PLANNER.with(|p| {
        let fft = p.borrow_mut().plan_fft(len, direction);
        fft.process(flat);
    });
}

/// In-place 2-D DFT over both axes (unnormalized).
pub(crate) fn fft2(a: &mut Array2<Complex64>, direction: FftDirection) {
    let (n0, n1) = a.dim();
    transform_rows(
        a.as_slice_mut().expect("owned arrays are standard layout"),
        n1,
        direction,
    );
    // Second axis: transform the columns via a transposed copy.
    let mut t = a.t().as_standard_layout().into_owned();
    transform_rows(
        t.as_slice_mut().expect("owned arrays are standard layout"),
        n0,
        direction,
    );
    a.assign(&t.t());
}

/// Signed integer mode of `bin` on an `n`-point axis: `0..n/2` then negative.
#[inline]
pub(crate) fn signed_mode(bin: usize, n: usize) -> i64 {
    if bin < n / 2 {
        bin as i64
    } else {
        bin as i64 - n as i64
    }
}

/// Storage bin of signed mode `m` on an `n`-point axis.
#[inline]
pub(crate) fn mode_bin(m: i64, n: usize) -> usize {
    if m >= 0 {
        m as usize
    } else {
        (n as i64 + m) as usize
    }
}

/// Row indices of the retained (non-Nyquist) band of an `n`-point axis, paired
/// with their positions on an `n_pad`-point axis: modes `0..n/2` keep their
/// bin, modes `-1..-(n/2-1)` sit at the top of the padded axis.
fn band_rows(n: usize, n_pad: usize) -> impl Iterator<Item = (usize, usize)> {
    let lo = n / 2;
    (0..lo)
        .map(move |i| (i, i))
        .chain((1..n - lo).map(move |k| (n - k, n_pad - k)))
}

/// Copy the retained band (the `n/2` leading and `n/2 - 1` trailing slots) of
/// one row between axes of lengths `src_n` and `dst_n`, both ≥ `n`.
#[inline]
fn copy_band_row(dst: &mut [Complex64], dst_n: usize, src: &[Complex64], src_n: usize, n: usize) {
    let lo = n / 2;
    let neg = n - lo - 1;
    dst[..lo].copy_from_slice(&src[..lo]);
    dst[dst_n - neg..dst_n].copy_from_slice(&src[src_n - neg..src_n]);
}

/// Scatter the retained band of an `n × n` coefficient array into the centre
/// band of an `n_pad × n_pad` array (zeros elsewhere). The Nyquist lines of
/// the source are skipped; by crate invariant they are zero anyway.
pub(crate) fn embed(coeffs: &Array2<Complex64>, n_pad: usize) -> Array2<Complex64> {
    let n = coeffs.nrows();
    debug_assert!(n_pad >= n);
    let mut big = Array2::zeros((n_pad, n_pad));
    let src = coeffs.as_slice().expect("owned arrays are standard layout");
    let dst = big
        .as_slice_mut()
        .expect("owned arrays are standard layout");
    for (si, di) in band_rows(n, n_pad) {
        copy_band_row(
            &mut dst[di * n_pad..(di + 1) * n_pad],
            n_pad,
            &src[si * n..(si + 1) * n],
            n,
            n,
        );
    }
    big
}

/// Gather the retained band of an `n_pad × n_pad` coefficient array back into
/// an `n × n` array. Nyquist lines of the result are left at zero.
pub(crate) fn extract(big: &Array2<Complex64>, n: usize) -> Array2<Complex64> {
    let n_pad = big.nrows();
    debug_assert!(n_pad >= n);
    let mut out = Array2::zeros((n, n));
    let src = big.as_slice().expect("owned arrays are standard layout");
    let dst = out
        .as_slice_mut()
        .expect("owned arrays are standard layout");
    for (di, si) in band_rows(n, n_pad) {
        copy_band_row(
            &mut dst[di * n..(di + 1) * n],
            n,
            &src[si * n_pad..(si + 1) * n_pad],
            n_pad,
            n,
        );
    }
    out
}

/// Samples of the band-limited polynomial with coefficients `coeffs` on the
/// `n_pad × n_pad` physical grid.
pub(crate) fn synthesize_padded(coeffs: &Array2<Complex64>, n_pad: usize) -> Array2<Complex64> {
    let mut big = embed(coeffs, n_pad);
    fft2(&mut big, FftDirection::Inverse);
    big
}

/// Forward transform of padded physical samples, band-limited back to `n`
/// (Nyquist lines zero) with the `1/N²` normalization applied.
pub(crate) fn analyze_padded(mut vals: Array2<Complex64>, n: usize) -> Array2<Complex64> {
    let n_pad = vals.nrows();
    fft2(&mut vals, FftDirection::Forward);
    let scale = 1.0 / (n_pad * n_pad) as f64;
    let mut out = extract(&vals, n);
    out.mapv_inplace(|c| c * scale);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn single_mode_synthesis_matches_the_exponential() {
        // c_{(1,-2)} = 2+i on an 8-grid, synthesized on a 16-grid, must equal
        // (2+i) e^{2πi (p - 2q)/16} at every padded grid point.
        let n = 8;
        let n_pad = 16;
        let mut coeffs = ndarray::Array2::<C>::zeros((n, n));
        let amp = C::new(2.0, 1.0);
        coeffs[[mode_bin(1, n), mode_bin(-2, n)]] = amp;
        let vals = synthesize_padded(&coeffs, n_pad);
        for p in 0..n_pad {
            for q in 0..n_pad {
                let phase = 2.0 * std::f64::consts::PI * (p as f64 - 2.0 * q as f64) / n_pad as f64;
                let expect = amp * C::from_polar(1.0, phase);
                let got = vals[[p, q]];
                assert!(
                    (got - expect).norm() < 1e-12,
                    "mismatch at ({p},{q}): {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn analyze_inverts_synthesize() {
        let n = 8;
        let n_pad = 24;
        let mut coeffs = ndarray::Array2::<C>::zeros((n, n));
        // Fill every retained (non-Nyquist) mode with a distinct value.
        for i in 0..n {
            for j in 0..n {
                if signed_mode(i, n) == -4 || signed_mode(j, n) == -4 {
                    continue;
                }
                coeffs[[i, j]] = C::new(i as f64 + 0.25, j as f64 - 1.5);
            }
        }
        let vals = synthesize_padded(&coeffs, n_pad);
        let back = analyze_padded(vals, n);
        for i in 0..n {
            for j in 0..n {
                assert!(
                    (back[[i, j]] - coeffs[[i, j]]).norm() < 1e-12,
                    "coefficient ({i},{j}) not recovered"
                );
            }
        }
    }

    #[test]
    fn embed_extract_round_trip_is_exact() {
        let n = 8;
        let mut coeffs = ndarray::Array2::<C>::zeros((n, n));
        coeffs[[mode_bin(3, n), mode_bin(-3, n)]] = C::new(1.0, -4.0);
        coeffs[[0, 0]] = C::new(0.5, 0.0);
        let big = embed(&coeffs, 20);
        let back = extract(&big, n);
        assert_eq!(back, coeffs);
    }
}
