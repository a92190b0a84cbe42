use std::f64::consts::PI;

use rayon::prelude::*;

use super::fft::{fft_all_axes, Plans};
use super::{Extension, GridSpec, PhaseFunction};
use crate::{Error, Result, C64};

/// Cross-Wigner transform `(2πħ)^{-d} ∫dξ e^{iξ·p/ħ} conj(ψ_col(q+ξ/2)) ψ_row(q-ξ/2)`.
///
/// The chord `ξ = 2jΔq` keeps `q ± ξ/2` on the lattice, and `j` is limited to
/// `|j| ≤ N/4` per axis (half weight at the ends) so that `q ± ξ/2` never wraps
/// past the opposite side of the box. Within that window the transform is a
/// plain inverse FFT onto the momentum axis `(k - N/2) πħ/L`.
pub fn wigner_continuous(psi_row: &[C64], psi_col: &[C64], grid: &GridSpec) -> Result<PhaseFunction> {
    let p = grid.points();
    for (name, f) in [("psi_row", psi_row), ("psi_col", psi_col)] {
        if f.len() != p {
            return Err(Error::GridMismatch(format!("{name} has {} samples, grid has {p}", f.len())));
        }
    }
    let values = wigner_from_pairs(grid, |minus, plus| psi_row[minus] * psi_col[plus].conj());
    PhaseFunction::new(*grid, values, Extension::Periodic)
}

/// Wigner transform of a two-point kernel `pair(q - ξ/2, q + ξ/2)` given by flat
/// lattice indices. Output is stored `[p][q]`.
pub(crate) fn wigner_from_pairs<F>(grid: &GridSpec, pair: F) -> Vec<C64>
where
    F: Fn(usize, usize) -> C64 + Sync,
{
    let n = grid.n_points();
    let d = grid.d();
    let pts = grid.points();
    let plans = Plans::new(n);
    let quarter = (n / 4) as i64;
    let offsets: Vec<(i64, f64)> = (-quarter..=quarter)
        .map(|j| (j, if j.abs() == quarter { 0.5 } else { 1.0 }))
        .collect();
    let scale = (grid.dq() / (PI * grid.hbar())).powi(d as i32);
    let ni = n as i64;
    let half = n / 2;

    let columns: Vec<Vec<C64>> = (0..pts)
        .into_par_iter()
        .map(|a| {
            let ai = grid.unravel(a);
            let mut x = vec![C64::new(0.0, 0.0); pts];
            let m = offsets.len();
            for t in 0..m.pow(d as u32) {
                let mut digits = [0usize; 3];
                let mut rest = t;
                for axis in (0..d).rev() {
                    digits[axis] = rest % m;
                    rest /= m;
                }
                let mut w = 1.0;
                let (mut minus, mut plus, mut bin) = (0usize, 0usize, 0usize);
                for axis in 0..d {
                    let (j, wj) = offsets[digits[axis]];
                    w *= wj;
                    let c = ai[axis] as i64;
                    minus = minus * n + (c - j).rem_euclid(ni) as usize;
                    plus = plus * n + (c + j).rem_euclid(ni) as usize;
                    bin = bin * n + j.rem_euclid(ni) as usize;
                }
                x[bin] += pair(minus, plus) * w;
            }
            fft_all_axes(&mut x, d, &plans.inverse);
            (0..pts)
                .map(|k| {
                    let mut bin = 0usize;
                    let mut rest = k;
                    let mut mult = 1usize;
                    for _ in 0..d {
                        let i = rest % n;
                        rest /= n;
                        bin += ((i + n - half) % n) * mult;
                        mult *= n;
                    }
                    x[bin] * scale
                })
                .collect()
        })
        .collect();

    let mut out = vec![C64::new(0.0, 0.0); pts * pts];
    for (a, col) in columns.iter().enumerate() {
        for (k, v) in col.iter().enumerate() {
            out[k * pts + a] = *v;
        }
    }
    out
}
