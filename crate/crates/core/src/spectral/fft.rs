//! Unnormalized d-dimensional DFT built from rustfft line transforms.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::GridSpec;
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `Σ_j u_j e^{−iξ·x_j}`
    Forward,
    /// `Σ_ξ û_ξ e^{+iξ·x_j}`
    Inverse,
}

type Plan = Arc<dyn Fft<f64>>;

fn plan(n: usize, dir: Direction) -> Plan {
    static PLANS: OnceLock<Mutex<(FftPlanner<f64>, HashMap<(usize, Direction), Plan>)>> =
        OnceLock::new();
    let cell = PLANS.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cell.lock().unwrap_or_else(|e| e.into_inner());
    let (planner, cache) = &mut *guard;
    cache
        .entry((n, dir))
        .or_insert_with(|| {
            let d = match dir {
                Direction::Forward => FftDirection::Forward,
                Direction::Inverse => FftDirection::Inverse,
            };
            planner.plan_fft(n, d)
        })
        .clone()
}

/// In-place unnormalized transform over every axis of `grid`.
pub(crate) fn dft_in_place(grid: &GridSpec, data: &mut [Complex64], dir: Direction) {
    debug_assert_eq!(data.len(), grid.len());
    let n = grid.n();
    let fft = plan(n, dir);
    match grid.dim() {
        1 => {
            let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(data, &mut scratch);
        }
        _ => {
            last_axis(data, n, &fft);
            middle_axis(data, n, &fft);
            first_axis(data, n, &fft);
        }
    }
}

fn last_axis(data: &mut [Complex64], n: usize, fft: &Plan) {
    // one slab (n² values) per task keeps the scratch allocation amortized
    par::for_each_chunk_mut(data, n * n, |_, slab| {
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(slab, &mut scratch);
    });
}

fn middle_axis(data: &mut [Complex64], n: usize, fft: &Plan) {
    par::for_each_chunk_mut(data, n * n, |_, slab| {
        let mut line = vec![Complex64::default(); n];
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        for k in 0..n {
            for j in 0..n {
                line[j] = slab[j * n + k];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for j in 0..n {
                slab[j * n + k] = line[j];
            }
        }
    });
}

fn first_axis(data: &mut [Complex64], n: usize, fft: &Plan) {
    let nn = n * n;
    let mut transposed = vec![Complex64::default(); data.len()];
    {
        let src: &[Complex64] = data;
        par::for_each_chunk_mut(&mut transposed, nn, |j, block| {
            // block holds lines (j, k, ·) for every k
            let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
            for k in 0..n {
                let line = &mut block[k * n..(k + 1) * n];
                for (i, v) in line.iter_mut().enumerate() {
                    *v = src[i * nn + j * n + k];
                }
                fft.process_with_scratch(line, &mut scratch);
            }
        });
    }
    let src = &transposed;
    par::for_each_chunk_mut(data, nn, |i, slab| {
        for j in 0..n {
            for k in 0..n {
                slab[j * n + k] = src[j * nn + k * n + i];
            }
        }
    });
}
