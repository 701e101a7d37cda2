use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::Complex64;

/// Cached 3D FFT plans for one cubic resolution.
///
/// Transforms act in place on a component slab of length `n^3` laid out as
/// `(i*n + j)*n + k`. Axis 2 is contiguous; axes 0 and 1 go through a
/// transpose so every 1D batch runs on contiguous lines in parallel.
pub struct Fft3 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Fft3 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Unnormalized forward DFT over all three axes.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.all_axes(data, &self.fwd);
    }

    /// Unnormalized inverse DFT over all three axes.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.all_axes(data, &self.inv);
    }

    fn all_axes(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        assert_eq!(data.len(), n * n * n, "slab length mismatch");

        // axis 2: contiguous lines
        data.par_chunks_mut(n).for_each(|line| plan.process(line));

        // axis 1: within each contiguous i-plane, gather strided j-lines
        data.par_chunks_mut(n * n).for_each(|plane| {
            let mut line = vec![Complex64::default(); n];
            for k in 0..n {
                for j in 0..n {
                    line[j] = plane[j * n + k];
                }
                plan.process(&mut line);
                for j in 0..n {
                    plane[j * n + k] = line[j];
                }
            }
        });

        // axis 0: transpose i to the contiguous position, batch, transpose back
        let mut scratch = vec![Complex64::default(); n * n * n];
        transpose_i_last(data, &mut scratch, n);
        scratch.par_chunks_mut(n).for_each(|line| plan.process(line));
        transpose_i_first(&scratch, data, n);
    }
}

/// scratch[(j*n + k)*n + i] = data[(i*n + j)*n + k]
fn transpose_i_last(data: &[Complex64], scratch: &mut [Complex64], n: usize) {
    scratch
        .par_chunks_mut(n * n)
        .enumerate()
        .for_each(|(j, block)| {
            for k in 0..n {
                for i in 0..n {
                    block[k * n + i] = data[(i * n + j) * n + k];
                }
            }
        });
}

/// data[(i*n + j)*n + k] = scratch[(j*n + k)*n + i]
fn transpose_i_first(scratch: &[Complex64], data: &mut [Complex64], n: usize) {
    data.par_chunks_mut(n * n)
        .enumerate()
        .for_each(|(i, block)| {
            for j in 0..n {
                for k in 0..n {
                    block[j * n + k] = scratch[(j * n + k) * n + i];
                }
            }
        });
}
