//! Seeded band-limited random fields for randomized trials.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::field::SpectralField;
use crate::grid::Grid;
use crate::ops;

/// Random real scalar with coefficients on the cube |k_i| <= band.
pub fn random_scalar(g: Grid, band: i64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(g, 1);
    for kx in -band..=band {
        for ky in -band..=band {
            for kz in -band..=band {
                let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                f.add_coeff(0, [kx, ky, kz], v).unwrap();
            }
        }
    }
    f.symmetrize();
    f
}

/// Random real 3-vector field, band-limited as above.
pub fn random_vector(g: Grid, band: i64, seed: u64) -> SpectralField {
    let mut f = SpectralField::zeros(g, 3);
    for c in 0..3 {
        let s = random_scalar(g, band, seed.wrapping_add(1000 * c as u64));
        f.comp_mut(c).copy_from_slice(s.comp(0));
    }
    f
}

/// Random divergence-free mean-free vector field.
pub fn random_solenoidal(g: Grid, band: i64, seed: u64) -> SpectralField {
    let v = random_vector(g, band, seed);
    let mut p = ops::leray_project(&v).unwrap();
    p = ops::freq_project(&p, ops::FreqCut::NotZero);
    p.symmetrize();
    p
}
