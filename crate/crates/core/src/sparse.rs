//! Sparse vector fields over integer wavevectors.
//!
//! Lacunary constructions (waves with a few thousand modes at large λ) need
//! coefficient arithmetic without a dense grid. Keys are integer wavevectors;
//! conjugate pairs are stored explicitly.

use num_complex::Complex64;
use std::collections::HashMap;

use crate::grid::VOLUME;

#[derive(Debug, Clone, Default)]
pub struct SparseVec3 {
    map: HashMap<[i64; 3], [Complex64; 3]>,
}

impl SparseVec3 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, k: [i64; 3], v: [Complex64; 3]) {
        let e = self.map.entry(k).or_insert([Complex64::default(); 3]);
        for i in 0..3 {
            e[i] += v[i];
        }
    }

    pub fn add_field(&mut self, other: &SparseVec3, scale: f64) {
        for (k, v) in &other.map {
            self.add(*k, [v[0] * scale, v[1] * scale, v[2] * scale]);
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[i64; 3], &[Complex64; 3])> {
        self.map.iter()
    }

    /// ∇× per mode.
    pub fn curl(&self) -> SparseVec3 {
        let mut out = SparseVec3::new();
        for (k, v) in &self.map {
            let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
            let i = Complex64::new(0.0, 1.0);
            out.add(
                *k,
                [
                    i * (kf[1] * v[2] - kf[2] * v[1]),
                    i * (kf[2] * v[0] - kf[0] * v[2]),
                    i * (kf[0] * v[1] - kf[1] * v[0]),
                ],
            );
        }
        out
    }

    /// Leray projection + zero-mean per mode.
    pub fn leray_neq0(&self) -> SparseVec3 {
        let mut out = SparseVec3::new();
        for (k, v) in &self.map {
            let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
            if k2 == 0.0 {
                continue;
            }
            let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
            let dot = kf[0] * v[0] + kf[1] * v[1] + kf[2] * v[2];
            let mut w = [Complex64::default(); 3];
            for i in 0..3 {
                w[i] = v[i] - kf[i] * dot / k2;
            }
            out.add(*k, w);
        }
        out
    }

    /// ∫|f|² dx = (2π)³ Σ |v(k)|² with deterministic ordering.
    pub fn energy(&self) -> f64 {
        let mut keys: Vec<_> = self.map.keys().copied().collect();
        keys.sort_unstable();
        let mut acc = 0.0;
        for k in keys {
            let v = &self.map[&k];
            acc += v.iter().map(|c| c.norm_sqr()).sum::<f64>();
        }
        VOLUME * acc
    }

    /// Max |k_i| over stored modes.
    pub fn band(&self) -> i64 {
        self.map
            .keys()
            .map(|k| k.iter().map(|v| v.abs()).max().unwrap())
            .max()
            .unwrap_or(0)
    }
}
