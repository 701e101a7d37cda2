//! Seeded constructors for smooth test fields.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ops::leray_project;
use crate::{Complex64, Component, Grid, SpectralField};

/// Random real band-limited field with unit-scale coefficients.
pub fn random_band_limited(
    grid: Grid,
    comps: Component,
    band: i64,
    mean_free: bool,
    seed: u64,
) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(grid, comps);
    for c in 0..comps.count() {
        for a in -band..=band {
            for b in -band..=band {
                for d in -band..=band {
                    let re = rng.gen_range(-1.0..1.0);
                    let im = rng.gen_range(-1.0..1.0);
                    f.set_coeff(c, [a, b, d], Complex64::new(re, im));
                }
            }
        }
    }
    f.enforce_real();
    if mean_free {
        f.remove_mean();
    }
    f
}

/// Random real divergence-free mean-free vector field.
pub fn random_divergence_free(grid: Grid, band: i64, seed: u64) -> SpectralField {
    let raw = random_band_limited(grid, Component::Vector, band, true, seed);
    let mut v = leray_project(&raw).expect("projection");
    v.enforce_real();
    v.remove_mean();
    v
}

/// The scalar field `sin(xi . x)`.
pub fn sin_mode(grid: Grid, xi: [i64; 3]) -> SpectralField {
    let mut f = SpectralField::zeros(grid, Component::Scalar);
    f.set_coeff(0, xi, Complex64::new(0.0, -0.5));
    f.set_coeff(0, [-xi[0], -xi[1], -xi[2]], Complex64::new(0.0, 0.5));
    f
}

/// The scalar field `cos(xi . x)`.
pub fn cos_mode(grid: Grid, xi: [i64; 3]) -> SpectralField {
    let mut f = SpectralField::zeros(grid, Component::Scalar);
    f.set_coeff(0, xi, Complex64::new(0.5, 0.0));
    f.set_coeff(0, [-xi[0], -xi[1], -xi[2]], Complex64::new(0.5, 0.0));
    f
}

/// Complex exponential `e^{i xi . x}` (not Hermitian-symmetric).
pub fn exp_mode(grid: Grid, xi: [i64; 3]) -> SpectralField {
    let mut f = SpectralField::zeros(grid, Component::Scalar);
    f.set_coeff(0, xi, Complex64::new(1.0, 0.0));
    f.set_real(false);
    f
}

/// Vector field with the given scalar field in one slot.
pub fn vector_from_scalar(s: &SpectralField, slot: usize) -> SpectralField {
    let mut v = SpectralField::zeros(s.grid(), Component::Vector);
    let n3 = s.grid().len();
    v.data_mut()[slot * n3..(slot + 1) * n3].copy_from_slice(s.data());
    v.set_real(s.is_real());
    v
}
