//! Periodic grid and band-limited spectral fields.
//!
//! A [`SpectralField`] stores the Fourier coefficients `c_m` of a complex
//! trigonometric polynomial `u(x) = Σ_m c_m e^{i ξ_m · x}` on the square
//! periodic box `[0, L)²`, with integer modes `m = (m₁, m₂)` in
//! `[−n/2, n/2)²` and frequencies `ξ_m = (2π/L) m`. The Nyquist row and
//! column (`m_j = −n/2`) are pinned to zero so that every retained mode has
//! its reflection `−m` in the band; this keeps conjugation, real/imaginary
//! parts and real-valued fields exactly representable.

use crate::error::{CoreError, CoreResult};
use crate::fft;
use crate::util::kahan_sum;
use crate::C64;
use ndarray::Array2;
use std::ops::{Add, Mul, Neg, Sub};

/// Square periodic grid: `n × n` modes on a box of side `length`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    n: usize,
    length: f64,
}

impl Grid {
    /// Create a grid with `n` modes per axis (even, ≥ 4) on a box of side
    /// `length` (finite, positive).
    pub fn new(n: usize, length: f64) -> CoreResult<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(CoreError::InvalidGrid {
                reason: format!("n = {n} must be even and at least 4"),
            });
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(CoreError::InvalidGrid {
                reason: format!("length = {length} must be finite and positive"),
            });
        }
        Ok(Grid { n, length })
    }

    /// Modes per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Box side length.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Box area `L²`.
    pub fn area(&self) -> f64 {
        self.length * self.length
    }

    /// Signed integer mode for a storage bin.
    #[inline]
    pub fn signed_mode(&self, bin: usize) -> i64 {
        fft::signed_mode(bin, self.n)
    }

    /// Storage bin for a signed integer mode (must be in `[-n/2, n/2)`).
    #[inline]
    pub fn mode_bin(&self, m: i64) -> usize {
        fft::mode_bin(m, self.n)
    }

    /// Whether a storage bin lies on the (zeroed) Nyquist line.
    #[inline]
    pub fn is_nyquist_bin(&self, bin: usize) -> bool {
        bin == self.n / 2
    }

    /// Continuous frequency `ξ = 2π m / L` of a storage bin.
    #[inline]
    pub fn freq(&self, bin: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.signed_mode(bin) as f64 / self.length
    }

    /// `⟨ξ⟩ = sqrt(1 + |ξ|²)` for the mode in bins `(i, j)`.
    #[inline]
    pub fn bracket(&self, i: usize, j: usize) -> f64 {
        let x1 = self.freq(i);
        let x2 = self.freq(j);
        (1.0 + x1 * x1 + x2 * x2).sqrt()
    }

    /// Largest `⟨ξ⟩` over the retained band.
    pub fn max_bracket(&self) -> f64 {
        let k = (self.n as f64 / 2.0 - 1.0) * 2.0 * std::f64::consts::PI / self.length;
        (1.0 + 2.0 * k * k).sqrt()
    }

    fn key(&self) -> (usize, f64) {
        (self.n, self.length)
    }

    /// Error unless two grids are identical.
    pub(crate) fn ensure_same(&self, other: &Grid, context: &'static str) -> CoreResult<()> {
        if self == other {
            Ok(())
        } else {
            Err(CoreError::mismatch(context, self.key(), other.key()))
        }
    }
}

/// Band-limited complex field stored by Fourier coefficients.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Grid,
    c: Array2<C64>,
}

impl SpectralField {
    /// The zero field.
    pub fn zeros(grid: Grid) -> Self {
        SpectralField {
            grid,
            c: Array2::zeros((grid.n(), grid.n())),
        }
    }

    /// The constant field `u ≡ value`.
    pub fn constant(grid: Grid, value: C64) -> Self {
        let mut f = Self::zeros(grid);
        f.c[[0, 0]] = value;
        f
    }

    /// Build a field by evaluating `f(m₁, m₂)` at every retained mode.
    pub fn from_modes(grid: Grid, mut f: impl FnMut(i64, i64) -> C64) -> Self {
        let n = grid.n();
        let mut out = Self::zeros(grid);
        for ((i, j), v) in out.c.indexed_iter_mut() {
            if grid.is_nyquist_bin(i) || grid.is_nyquist_bin(j) {
                continue;
            }
            *v = f(fft::signed_mode(i, n), fft::signed_mode(j, n));
        }
        out
    }

    /// Wrap raw coefficients (crate-internal; assumes Nyquist lines are zero).
    pub(crate) fn from_coeffs(grid: Grid, c: Array2<C64>) -> Self {
        debug_assert_eq!(c.dim(), (grid.n(), grid.n()));
        SpectralField { grid, c }
    }

    /// Transform physical samples on the native `n × n` grid into a field.
    /// Any content on the Nyquist lines is discarded.
    pub fn from_physical(grid: Grid, values: &Array2<C64>) -> CoreResult<Self> {
        if values.dim() != (grid.n(), grid.n()) {
            return Err(CoreError::InvalidParameter {
                name: "values",
                reason: format!(
                    "expected {n}×{n} samples, got {a}×{b}",
                    n = grid.n(),
                    a = values.dim().0,
                    b = values.dim().1
                ),
            });
        }
        Ok(Self::from_coeffs(
            grid,
            fft::analyze_padded(values.clone(), grid.n()),
        ))
    }

    /// Samples of the field on the native `n × n` physical grid,
    /// `x_{pq} = (p, q) · L/n`.
    pub fn to_physical(&self) -> Array2<C64> {
        fft::synthesize_padded(&self.c, self.grid.n())
    }

    /// Grid the field lives on.
    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Read-only coefficient access.
    pub fn coeffs(&self) -> &Array2<C64> {
        &self.c
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut Array2<C64> {
        &mut self.c
    }

    fn check_band(&self, m1: i64, m2: i64) -> CoreResult<()> {
        let h = self.grid.n() as i64 / 2;
        if m1 < -h || m1 >= h || m2 < -h || m2 >= h {
            return Err(CoreError::OutOfBand {
                m1,
                m2,
                n: self.grid.n(),
            });
        }
        Ok(())
    }

    /// Coefficient of mode `(m₁, m₂)`.
    pub fn coeff(&self, m1: i64, m2: i64) -> CoreResult<C64> {
        self.check_band(m1, m2)?;
        if m1 == -(self.grid.n() as i64) / 2 || m2 == -(self.grid.n() as i64) / 2 {
            return Ok(C64::new(0.0, 0.0));
        }
        Ok(self.c[[self.grid.mode_bin(m1), self.grid.mode_bin(m2)]])
    }

    /// Set the coefficient of mode `(m₁, m₂)`. Writing on the Nyquist lines
    /// is an error (they are pinned to zero).
    pub fn set_coeff(&mut self, m1: i64, m2: i64, v: C64) -> CoreResult<()> {
        self.check_band(m1, m2)?;
        if m1 == -(self.grid.n() as i64) / 2 || m2 == -(self.grid.n() as i64) / 2 {
            return Err(CoreError::NyquistWrite { m1, m2 });
        }
        self.c[[self.grid.mode_bin(m1), self.grid.mode_bin(m2)]] = v;
        Ok(())
    }

    /// Coefficient of the zero mode (the spatial mean of the field).
    pub fn zero_mode(&self) -> C64 {
        self.c[[0, 0]]
    }

    /// Overwrite the zero mode.
    pub fn set_zero_mode(&mut self, v: C64) {
        self.c[[0, 0]] = v;
    }

    /// Apply a Fourier multiplier `m(ξ₁, ξ₂)`. Errors if the multiplier is
    /// non-finite at any retained mode (the zeroed Nyquist lines are exempt).
    pub fn apply_multiplier(&self, name: &str, m: impl Fn(f64, f64) -> C64) -> CoreResult<Self> {
        let g = self.grid;
        let mut out = self.c.clone();
        for ((i, j), v) in out.indexed_iter_mut() {
            if g.is_nyquist_bin(i) || g.is_nyquist_bin(j) {
                *v = C64::new(0.0, 0.0);
                continue;
            }
            let w = m(g.freq(i), g.freq(j));
            if !(w.re.is_finite() && w.im.is_finite()) {
                return Err(CoreError::NonFiniteMultiplier {
                    name: name.to_string(),
                    m1: g.signed_mode(i),
                    m2: g.signed_mode(j),
                });
            }
            *v *= w;
        }
        Ok(Self::from_coeffs(g, out))
    }

    /// In-place multiplier without the finiteness audit (crate-internal,
    /// used by the integrator for unit-modulus phase factors).
    pub(crate) fn multiply_in_place(&mut self, m: impl Fn(f64, f64) -> C64) {
        let g = self.grid;
        for ((i, j), v) in self.c.indexed_iter_mut() {
            if g.is_nyquist_bin(i) || g.is_nyquist_bin(j) {
                continue;
            }
            *v *= m(g.freq(i), g.freq(j));
        }
    }

    /// Partial derivative along `axis` (0 ↔ ∂₁, 1 ↔ ∂₂): multiplier `iξ`.
    pub fn derivative(&self, axis: usize) -> Self {
        assert!(axis < 2, "axis must be 0 or 1");
        self.apply_multiplier("derivative", |x1, x2| {
            C64::new(0.0, if axis == 0 { x1 } else { x2 })
        })
        .expect("iξ is finite")
    }

    /// Laplacian: multiplier `−|ξ|²`.
    pub fn laplacian(&self) -> Self {
        self.apply_multiplier("laplacian", |x1, x2| C64::new(-(x1 * x1 + x2 * x2), 0.0))
            .expect("-|ξ|² is finite")
    }

    /// Bessel bracket power `⟨∇⟩^α`: multiplier `(1 + |ξ|²)^{α/2}`.
    pub fn bracket_power(&self, alpha: f64) -> Self {
        self.apply_multiplier("bracket_power", |x1, x2| {
            C64::new((1.0 + x1 * x1 + x2 * x2).powf(alpha / 2.0), 0.0)
        })
        .expect("⟨ξ⟩^α is finite")
    }

    /// `Δ⁻¹∂_axis`: multiplier `−iξ_axis/|ξ|²`, with the zero mode mapped to
    /// zero (the inverse Laplacian is defined on mean-free data; callers
    /// track means separately).
    pub fn inv_laplacian_derivative(&self, axis: usize) -> Self {
        assert!(axis < 2, "axis must be 0 or 1");
        self.apply_multiplier("inv_laplacian_derivative", |x1, x2| {
            let q = x1 * x1 + x2 * x2;
            if q == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                C64::new(0.0, -(if axis == 0 { x1 } else { x2 }) / q)
            }
        })
        .expect("multiplier finite by construction")
    }

    /// Complex conjugate of the field: `ĉ'(m) = conj(ĉ(−m))`.
    pub fn conjugated(&self) -> Self {
        let g = self.grid;
        let n = g.n();
        let mut out = Array2::zeros((n, n));
        for i in 0..n {
            if g.is_nyquist_bin(i) {
                continue;
            }
            let ri = g.mode_bin(-g.signed_mode(i));
            for j in 0..n {
                if g.is_nyquist_bin(j) {
                    continue;
                }
                let rj = g.mode_bin(-g.signed_mode(j));
                out[[i, j]] = self.c[[ri, rj]].conj();
            }
        }
        Self::from_coeffs(g, out)
    }

    /// Pointwise real part `Re u = (u + ū)/2`, computed spectrally.
    pub fn real_part(&self) -> Self {
        let conj = self.conjugated();
        let mut out = self.clone();
        out.c.zip_mut_with(&conj.c, |a, b| *a = (*a + *b) * 0.5);
        out
    }

    /// Pointwise imaginary part `Im u = (u − ū)/(2i)`, computed spectrally.
    pub fn imag_part(&self) -> Self {
        let conj = self.conjugated();
        let half_over_i = C64::new(0.0, -0.5); // 1/(2i)
        let mut out = self.clone();
        out.c
            .zip_mut_with(&conj.c, |a, b| *a = (*a - *b) * half_over_i);
        out
    }

    /// `L²` norm, `‖u‖ = L (Σ_m |c_m|²)^{1/2}` (Parseval on the box).
    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    /// Sobolev norm `‖u‖_{H^s} = L (Σ_m ⟨ξ_m⟩^{2s} |c_m|²)^{1/2}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let g = self.grid;
        let sum = kahan_sum(self.c.indexed_iter().map(|((i, j), v)| {
            if v.re == 0.0 && v.im == 0.0 {
                0.0
            } else {
                g.bracket(i, j).powf(2.0 * s) * v.norm_sqr()
            }
        }));
        g.length() * sum.sqrt()
    }

    /// True when every coefficient is finite.
    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// `self += a · other` (same grid required; panics otherwise — this is
    /// internal state algebra, not a user-facing entry point).
    pub fn add_scaled(&mut self, a: C64, other: &Self) {
        assert_eq!(self.grid, other.grid, "add_scaled: grid mismatch");
        self.c.zip_mut_with(&other.c, |x, y| *x += a * *y);
    }

    /// A copy scaled by a complex factor.
    pub fn scaled(&self, a: C64) -> Self {
        let mut out = self.clone();
        out.c.mapv_inplace(|v| v * a);
        out
    }

    /// Maximum coefficient magnitude (used in tolerances).
    pub fn max_coeff_norm(&self) -> f64 {
        self.c.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        assert_eq!(self.grid, rhs.grid, "add: grid mismatch");
        SpectralField::from_coeffs(self.grid, &self.c + &rhs.c)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        assert_eq!(self.grid, rhs.grid, "sub: grid mismatch");
        SpectralField::from_coeffs(self.grid, &self.c - &rhs.c)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scaled(C64::new(-1.0, 0.0))
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scaled(C64::new(rhs, 0.0))
    }
}
