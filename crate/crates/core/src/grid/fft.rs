use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::C64;

/// Forward and inverse plans of one length, usable from several threads.
#[derive(Clone)]
pub(crate) struct Plans {
    pub forward: Arc<dyn Fft<f64>>,
    pub inverse: Arc<dyn Fft<f64>>,
}

impl Plans {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }
}

/// Applies `op` to every line along `axis` of a hypercube of side `n` and rank `rank`
/// stored with the first axis slowest.
pub(crate) fn for_each_line(
    data: &mut [C64],
    n: usize,
    rank: usize,
    axis: usize,
    mut op: impl FnMut(&[usize], &mut [C64]),
) {
    let stride = n.pow((rank - 1 - axis) as u32);
    let outer = n.pow(axis as u32);
    let mut line = vec![C64::new(0.0, 0.0); n];
    let mut ix = vec![0usize; rank];
    for o in 0..outer {
        for inner in 0..stride {
            let base = o * n * stride + inner;
            for (j, v) in line.iter_mut().enumerate() {
                *v = data[base + j * stride];
            }
            let mut rest = o;
            for a in (0..axis).rev() {
                ix[a] = rest % n;
                rest /= n;
            }
            let mut rest = inner;
            for a in (axis + 1..rank).rev() {
                ix[a] = rest % n;
                rest /= n;
            }
            ix[axis] = 0;
            op(&ix, &mut line);
            for (j, v) in line.iter().enumerate() {
                data[base + j * stride] = *v;
            }
        }
    }
}

/// Unnormalized transform along every axis.
pub(crate) fn fft_all_axes(data: &mut [C64], rank: usize, plan: &Arc<dyn Fft<f64>>) {
    let n = plan.len();
    let mut scratch = vec![C64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    for axis in 0..rank {
        for_each_line(data, n, rank, axis, |_, line| plan.process_with_scratch(line, &mut scratch));
    }
}

/// `out[a] = Σ_i in[i] exp(±i2π(i - N/2)·(a - N/2)/N)` over every axis, where the sign is
/// `+` for the inverse plan. Requires `N/2` even.
pub(crate) fn centered_dft(data: &mut [C64], rank: usize, plan: &Arc<dyn Fft<f64>>) {
    let n = plan.len();
    let flip = |data: &mut [C64]| {
        for (idx, v) in data.iter_mut().enumerate() {
            let mut rest = idx;
            let mut parity = 0;
            for _ in 0..rank {
                parity += rest % n;
                rest /= n;
            }
            if parity % 2 == 1 {
                *v = -*v;
            }
        }
    };
    flip(data);
    fft_all_axes(data, rank, plan);
    flip(data);
}

/// Signed frequency index of FFT bin `j`: `j` for `j < n/2`, else `j - n`.
pub(crate) fn signed(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}
