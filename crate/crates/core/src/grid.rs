use crate::error::{Error, Result};

/// Uniform periodic grid on `[0, 2π)³` with `n` points per axis.
///
/// Retained integer wavenumbers per axis are `-kmax ..= kmax` with
/// `kmax = n/2 - 1`; the Nyquist plane `k = -n/2` is always kept zero so
/// every field has an exact real-valued representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

pub const PERIOD: f64 = 2.0 * std::f64::consts::PI;
/// |T³| = (2π)³.
pub const VOLUME: f64 = PERIOD * PERIOD * PERIOD;

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidParams(format!(
                "grid size must be a power of two >= 16, got {n}"
            )));
        }
        Ok(Grid { n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest retained wavenumber per axis.
    #[inline]
    pub fn kmax(&self) -> i64 {
        (self.n / 2 - 1) as i64
    }

    /// Integer wavenumber for a storage index along one axis (FFT order).
    #[inline]
    pub fn wavenumber(&self, idx: usize) -> i64 {
        if idx <= self.n / 2 - 1 {
            idx as i64
        } else {
            idx as i64 - self.n as i64
        }
    }

    /// Storage index along one axis for an integer wavenumber.
    #[inline]
    pub fn index_of(&self, k: i64) -> Option<usize> {
        if k.unsigned_abs() as usize > self.n / 2 - 1 {
            return None;
        }
        Some(if k >= 0 { k as usize } else { (k + self.n as i64) as usize })
    }

    #[inline]
    pub fn flat(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (ix * self.n + iy) * self.n + iz
    }

    /// Flat index for an integer wavevector, or None if out of band.
    #[inline]
    pub fn flat_of_k(&self, k: [i64; 3]) -> Option<usize> {
        let ix = self.index_of(k[0])?;
        let iy = self.index_of(k[1])?;
        let iz = self.index_of(k[2])?;
        Some(self.flat(ix, iy, iz))
    }

    /// Physical coordinates of grid point (ix, iy, iz).
    #[inline]
    pub fn point(&self, ix: usize, iy: usize, iz: usize) -> [f64; 3] {
        let h = PERIOD / self.n as f64;
        [ix as f64 * h, iy as f64 * h, iz as f64 * h]
    }

    /// Wavevector table for one axis in storage order.
    pub fn k_table(&self) -> Vec<i64> {
        (0..self.n).map(|i| self.wavenumber(i)).collect()
    }

    pub fn same(&self, other: &Grid) -> Result<()> {
        if self.n != other.n {
            return Err(Error::GridMismatch(self.n, other.n));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumber_roundtrip() {
        let g = Grid::new(16).unwrap();
        for k in -7..=7 {
            let idx = g.index_of(k).unwrap();
            assert_eq!(g.wavenumber(idx), k);
        }
        assert_eq!(g.index_of(8), None);
        assert_eq!(g.index_of(-8), None);
        assert_eq!(g.kmax(), 7);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(12).is_err());
        assert!(Grid::new(8).is_err());
        assert!(Grid::new(17).is_err());
    }
}
