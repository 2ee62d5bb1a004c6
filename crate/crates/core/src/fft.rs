//! Shared 3D complex FFT machinery on top of rustfft.
//!
//! Plans are cached per length; the cache is a read-mostly map safe for
//! concurrent use. Transforms run axis by axis with rayon over row batches.

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

type PlanKey = (usize, bool);

fn plan_cache() -> &'static Mutex<HashMap<PlanKey, Arc<dyn Fft<f64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<PlanKey, Arc<dyn Fft<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut cache = plan_cache().lock().unwrap();
    cache
        .entry((len, forward))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            let dir = if forward { FftDirection::Forward } else { FftDirection::Inverse };
            planner.plan_fft(len, dir)
        })
        .clone()
}

/// In-place 3D transform of `data` laid out as (x*n + y)*n + z.
///
/// `forward = true` maps physical samples to coefficients and divides by n³,
/// so c(0) is the field mean. The inverse is unnormalized; round trips are
/// the identity.
pub fn fft3(data: &mut [Complex64], n: usize, forward: bool) {
    assert_eq!(data.len(), n * n * n);
    let fft = plan(n, forward);
    let scratch_len = fft.get_inplace_scratch_len();

    // z axis: contiguous rows
    data.par_chunks_mut(n).for_each_init(
        || vec![Complex64::default(); scratch_len],
        |scratch, row| fft.process_with_scratch(row, scratch),
    );

    // y axis: stride n within each x-slab
    data.par_chunks_mut(n * n).for_each_init(
        || (vec![Complex64::default(); n], vec![Complex64::default(); scratch_len]),
        |(buf, scratch), slab| {
            for iz in 0..n {
                for iy in 0..n {
                    buf[iy] = slab[iy * n + iz];
                }
                fft.process_with_scratch(buf, scratch);
                for iy in 0..n {
                    slab[iy * n + iz] = buf[iy];
                }
            }
        },
    );

    // x axis: stride n*n; parallelize over (y,z) pairs in row batches
    let n2 = n * n;
    let ptr = SendPtr(data.as_mut_ptr());
    (0..n2).into_par_iter().for_each_init(
        || (vec![Complex64::default(); n], vec![Complex64::default(); scratch_len]),
        |(buf, scratch), yz| {
            // safety: each yz owns the disjoint strided column {yz + i*n2}
            let p = ptr;
            for ix in 0..n {
                buf[ix] = unsafe { *p.0.add(yz + ix * n2) };
            }
            fft.process_with_scratch(buf, scratch);
            for ix in 0..n {
                unsafe { *p.0.add(yz + ix * n2) = buf[ix] };
            }
        },
    );

    if forward {
        let scale = 1.0 / (n * n * n) as f64;
        data.par_iter_mut().for_each(|c| *c *= scale);
    }
}

#[derive(Clone, Copy)]
struct SendPtr(*mut Complex64);
unsafe impl Send for SendPtr {}
unsafe impl Sync for SendPtr {}

/// Deterministic sum of f64 values: fixed-size chunks combined in order.
pub fn det_sum(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    const CHUNK: usize = 4096;
    let mut partials = Vec::new();
    let mut acc = 0.0;
    let mut count = 0usize;
    for v in values {
        acc += v;
        count += 1;
        if count == CHUNK {
            partials.push(acc);
            acc = 0.0;
            count = 0;
        }
    }
    partials.push(acc);
    partials.into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_identity() {
        let n = 16;
        let mut data: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i as f64 * 0.7).sin(), 0.0))
            .collect();
        let orig = data.clone();
        fft3(&mut data, n, true);
        fft3(&mut data, n, false);
        let err = data
            .iter()
            .zip(&orig)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(err < 1e-12, "roundtrip error {err}");
    }

    #[test]
    fn pure_mode_lands_on_single_coefficient() {
        let n = 16;
        let mut data = vec![Complex64::default(); n * n * n];
        // e^{i x} along the x axis
        for ix in 0..n {
            let x = 2.0 * std::f64::consts::PI * ix as f64 / n as f64;
            let v = Complex64::new(x.cos(), x.sin());
            for iy in 0..n {
                for iz in 0..n {
                    data[(ix * n + iy) * n + iz] = v;
                }
            }
        }
        fft3(&mut data, n, true);
        let idx = (1 * n + 0) * n + 0;
        assert!((data[idx] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let total: f64 = data.iter().map(|c| c.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
