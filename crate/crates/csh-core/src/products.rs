//! Alias-free (dealiased) pointwise products of band-limited fields.
//!
//! The product of `d` band-limited fields has Fourier support up to `d`
//! times the retained band. Evaluating it on a grid padded to
//! `⌈(d+1)/2⌉·n` points per axis and projecting back onto the original band
//! is *exact*: with maximum retained mode `K = n/2 − 1` aliasing can only
//! move energy by multiples of the padded grid size `N ≥ (d+1)n/2 > (d+1)K`,
//! which cannot land inside `[−K, K]`. Every nonlinear term in the dynamics
//! is assembled from these projected products.

use crate::error::{CoreError, CoreResult};
use crate::fft;
use crate::field::{Grid, SpectralField};
use ndarray::Array2;
use num_complex::Complex64;

/// Physical samples of `f` on the binary-product (`2n`) grid. Pointwise
/// products of two such sample sets, projected back with [`binary_project`],
/// reproduce [`product2`] exactly; sharing the samples across many products
/// avoids re-synthesizing common factors.
pub(crate) fn binary_samples(f: &SpectralField) -> Array2<Complex64> {
    fft::synthesize_padded(f.coeffs(), 2 * f.grid().n())
}

/// Exact band projection of pointwise values on the `2n` grid back to `grid`.
pub(crate) fn binary_project(vals: Array2<Complex64>, grid: Grid) -> SpectralField {
    SpectralField::from_coeffs(grid, fft::analyze_padded(vals, grid.n()))
}

/// Exact band-limited projection of the pointwise product of `factors`
/// (2 to 5 of them, all on the same grid).
pub fn dealiased_product(factors: &[&SpectralField]) -> CoreResult<SpectralField> {
    let d = factors.len();
    if !(2..=5).contains(&d) {
        return Err(CoreError::ProductArity { arity: d });
    }
    let grid = factors[0].grid();
    for f in &factors[1..] {
        grid.ensure_same(&f.grid(), "dealiased_product")?;
    }
    let n = grid.n();
    let n_pad = (d + 2) / 2 * n; // ⌈(d+1)/2⌉ · n
    let mut acc = fft::synthesize_padded(factors[0].coeffs(), n_pad);
    for f in &factors[1..] {
        let vals = fft::synthesize_padded(f.coeffs(), n_pad);
        acc.zip_mut_with(&vals, |a, b| *a *= *b);
    }
    Ok(SpectralField::from_coeffs(
        grid,
        fft::analyze_padded(acc, n),
    ))
}

/// Binary product `P(fg)`.
pub fn product2(f: &SpectralField, g: &SpectralField) -> CoreResult<SpectralField> {
    dealiased_product(&[f, g])
}

/// Ternary product `P(fgh)`.
pub fn product3(
    f: &SpectralField,
    g: &SpectralField,
    h: &SpectralField,
) -> CoreResult<SpectralField> {
    dealiased_product(&[f, g, h])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid;
    use crate::C64;
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: Grid, rng: &mut ChaCha8Rng) -> SpectralField {
        SpectralField::from_modes(grid, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    /// O(n⁴) reference: the projected product of two band-limited fields is
    /// the truncated convolution of their coefficients.
    fn convolution_oracle(f: &SpectralField, g: &SpectralField) -> SpectralField {
        let grid = f.grid();
        let n = grid.n() as i64;
        let h = n / 2;
        let mut out = Array2::<C64>::zeros((grid.n(), grid.n()));
        for m1 in (-h + 1)..h {
            for m2 in (-h + 1)..h {
                let mut acc = C64::new(0.0, 0.0);
                for a1 in (-h + 1)..h {
                    for a2 in (-h + 1)..h {
                        let b1 = m1 - a1;
                        let b2 = m2 - a2;
                        if b1 <= -h || b1 >= h || b2 <= -h || b2 >= h {
                            continue;
                        }
                        acc += f.coeff(a1, a2).unwrap() * g.coeff(b1, b2).unwrap();
                    }
                }
                out[[grid.mode_bin(m1), grid.mode_bin(m2)]] = acc;
            }
        }
        SpectralField::from_coeffs(grid, out)
    }

    #[test]
    fn binary_product_matches_truncated_convolution() {
        let grid = Grid::new(16, 5.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = random_field(grid, &mut rng);
        let g = random_field(grid, &mut rng);
        let fast = product2(&f, &g).unwrap();
        let slow = convolution_oracle(&f, &g);
        let scale = fast.l2_norm().max(1.0);
        assert!(
            (&fast - &slow).l2_norm() < 1e-12 * scale,
            "dealiased product deviates from direct convolution"
        );
    }

    #[test]
    fn product_is_commutative_bitwise() {
        let grid = Grid::new(12, 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_field(grid, &mut rng);
        let g = random_field(grid, &mut rng);
        let fg = product2(&f, &g).unwrap();
        let gf = product2(&g, &f).unwrap();
        assert_eq!(fg.coeffs(), gf.coeffs());
    }

    #[test]
    fn product_with_constant_is_scaling() {
        let grid = Grid::new(16, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_field(grid, &mut rng);
        let two = SpectralField::constant(grid, C64::new(2.0, 0.0));
        let prod = product2(&f, &two).unwrap();
        let expect = f.scaled(C64::new(2.0, 0.0));
        assert!((&prod - &expect).l2_norm() < 1e-13 * (1.0 + f.l2_norm()));
    }

    #[test]
    fn plane_wave_product_lands_on_sum_mode() {
        let grid = Grid::new(16, 1.0).unwrap();
        let mut f = SpectralField::zeros(grid);
        let mut g = SpectralField::zeros(grid);
        f.set_coeff(3, -2, C64::new(1.0, 0.0)).unwrap();
        g.set_coeff(-1, 4, C64::new(0.0, 1.0)).unwrap();
        let p = product2(&f, &g).unwrap();
        for m1 in -7..8_i64 {
            for m2 in -7..8_i64 {
                let expect = if (m1, m2) == (2, 2) {
                    C64::new(0.0, 1.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                assert!(
                    (p.coeff(m1, m2).unwrap() - expect).norm() < 1e-13,
                    "unexpected coefficient at ({m1},{m2})"
                );
            }
        }
    }

    #[test]
    fn high_mode_product_does_not_alias_into_band() {
        // (n/2 − 1) + (n/2 − 1) is far outside the band; the projected
        // product of two highest-mode waves must be exactly zero.
        let grid = Grid::new(16, 1.0).unwrap();
        let mut f = SpectralField::zeros(grid);
        let mut g = SpectralField::zeros(grid);
        f.set_coeff(7, 7, C64::new(1.0, 0.0)).unwrap();
        g.set_coeff(7, -7, C64::new(1.0, 0.0)).unwrap();
        let p = product2(&f, &g).unwrap();
        assert!(p.l2_norm() < 1e-14);
    }

    #[test]
    fn quintuple_product_matches_iterated_exact_convolutions_on_smooth_data() {
        // For data supported in |m| ≤ 1 the full product (degree 5) has
        // support ≤ 5 < n/2 for n = 16, so iterated binary products are also
        // exact and must agree with the single 5-fold product.
        let grid = Grid::new(16, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let small = |rng: &mut ChaCha8Rng| {
            SpectralField::from_modes(grid, |m1, m2| {
                if m1.abs() <= 1 && m2.abs() <= 1 {
                    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        };
        let f: Vec<SpectralField> = (0..5).map(|_| small(&mut rng)).collect();
        let refs: Vec<&SpectralField> = f.iter().collect();
        let all = dealiased_product(&refs).unwrap();
        let mut iter = f[0].clone();
        for fi in &f[1..] {
            iter = product2(&iter, fi).unwrap();
        }
        assert!((&all - &iter).l2_norm() < 1e-12 * (1.0 + iter.l2_norm()));
    }

    #[test]
    fn arity_outside_two_to_five_rejected() {
        let grid = Grid::new(8, 1.0).unwrap();
        let f = SpectralField::zeros(grid);
        assert!(matches!(
            dealiased_product(&[&f]),
            Err(CoreError::ProductArity { arity: 1 })
        ));
        let six = [&f, &f, &f, &f, &f, &f];
        assert!(matches!(
            dealiased_product(&six),
            Err(CoreError::ProductArity { arity: 6 })
        ));
    }

    #[test]
    fn grid_mismatch_rejected() {
        let f = SpectralField::zeros(Grid::new(8, 1.0).unwrap());
        let g = SpectralField::zeros(Grid::new(16, 1.0).unwrap());
        assert!(matches!(
            product2(&f, &g),
            Err(CoreError::GridMismatch { .. })
        ));
    }
}
