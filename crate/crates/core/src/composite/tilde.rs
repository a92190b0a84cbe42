use std::f64::consts::PI;

use rayon::prelude::*;

use super::HybridState;
use crate::grid::fft::{centered_dft, Plans};
use crate::grid::{GridSpec, WignerField};
use crate::spin::{DiscreteKernel, SpinDim};
use crate::{Error, Result, C64};

/// `ρ̃̃(λ, μ, k, l)` on the dual lattice, stored `[λ][μ][k][l]`.
///
/// Per axis `λ_j = 2jΔq/ħ` with `|j| ≤ N/4` (`N/2 + 1` points) and
/// `μ_r = (r - N/2) 2π/L` (`N` points).
#[derive(Clone, Debug, PartialEq)]
pub struct HybridTilde {
    grid: GridSpec,
    spin: SpinDim,
    values: Vec<C64>,
}

fn lambda_side(grid: &GridSpec) -> usize {
    grid.n_points() / 2 + 1
}

fn lambda_offsets(grid: &GridSpec, idx: usize) -> Vec<i64> {
    let side = lambda_side(grid);
    let quarter = (grid.n_points() / 4) as i64;
    let mut rest = idx;
    let mut out = vec![0i64; grid.d()];
    for v in out.iter_mut().rev() {
        *v = (rest % side) as i64 - quarter;
        rest /= side;
    }
    out
}

impl HybridTilde {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn spin(&self) -> SpinDim {
        self.spin
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn lambda_points(&self) -> usize {
        lambda_side(&self.grid).pow(self.grid.d() as u32)
    }

    pub fn lambda(&self, idx: usize) -> Vec<f64> {
        let step = 2.0 * self.grid.dq() / self.grid.hbar();
        lambda_offsets(&self.grid, idx).into_iter().map(|j| j as f64 * step).collect()
    }

    pub fn mu(&self, idx: usize) -> Vec<f64> {
        let step = 2.0 * PI / self.grid.length();
        let half = (self.grid.n_points() / 2) as f64;
        self.grid.unravel(idx).into_iter().map(|r| (r as f64 - half) * step).collect()
    }

    /// Index of the origin `λ = μ = 0`.
    pub fn origin(&self) -> (usize, usize) {
        let d = self.grid.d();
        let lam = (0..d).fold(0, |acc, _| acc * lambda_side(&self.grid) + self.grid.n_points() / 4);
        let mu = self.grid.ravel(&vec![self.grid.n_points() / 2; d]);
        (lam, mu)
    }

    pub fn get(&self, lambda: usize, mu: usize, k: usize, l: usize) -> C64 {
        let d = self.spin.dim();
        self.values[((lambda * self.grid.points() + mu) * d + k) * d + l]
    }
}

/// `ρ̃̃(λ,μ,k,l) = (ħ/2π)^d (s+1)^{-1} exp(-iπkl/(s+1)) Σ_n ∫dq exp(-iμ·q) exp(-i2πln/(s+1))
/// ⟨q - ħλ/2, n|ρ|q + ħλ/2, n+k mod (s+1)⟩`.
pub fn tilde_rho(state: &HybridState) -> Result<HybridTilde> {
    let grid = *state.grid();
    let spin = state.spin();
    let d = spin.dim();
    let n = grid.n_points();
    let rank = grid.d();
    let pts = grid.points();
    let side = lambda_side(&grid);
    let nl = side.pow(rank as u32);
    let plans = Plans::new(n);
    let roots = spin.roots_of_unity();
    let pref = (grid.hbar() / (2.0 * PI)).powi(rank as i32) * grid.dq().powi(rank as i32) / d as f64;

    let mut values = vec![C64::new(0.0, 0.0); nl * pts * d * d];
    values.par_chunks_mut(pts * d * d).enumerate().for_each(|(li, chunk)| {
        let j = lambda_offsets(&grid, li);
        let shifted = |a: usize, sign: i64| {
            let ix: Vec<usize> = grid
                .unravel(a)
                .into_iter()
                .zip(&j)
                .map(|(c, jj)| (c as i64 + sign * jj).rem_euclid(n as i64) as usize)
                .collect();
            grid.ravel(&ix)
        };
        let minus: Vec<usize> = (0..pts).map(|a| shifted(a, -1)).collect();
        let plus: Vec<usize> = (0..pts).map(|a| shifted(a, 1)).collect();
        let mut h = vec![C64::new(0.0, 0.0); pts];
        for k in 0..d {
            for nn in 0..d {
                let n2 = (nn + k) % d;
                for a in 0..pts {
                    h[a] = state.kernel(nn, n2, minus[a], plus[a]);
                }
                centered_dft(&mut h, rank, &plans.forward);
                for l in 0..d {
                    let c = C64::cis(-PI * (k * l) as f64 / d as f64) * roots[(d - (l * nn) % d) % d] * pref;
                    for (r, v) in h.iter().enumerate() {
                        chunk[(r * d + k) * d + l] += c * v;
                    }
                }
            }
        }
    });
    Ok(HybridTilde { grid, spin, values })
}

/// `ρ_W(p,q,φ_m,n) = (2πħ)^{-d} (s+1)^{-1} Σ_kl conj(K[k][l]) ∫dλ dμ exp(i(λ·p + μ·q))
/// exp(i2π(km+ln)/(s+1)) ρ̃̃(λ,μ,k,l)`, with half weight at `|j| = N/4`.
pub fn wigner_from_tilde(t: &HybridTilde, kernel: &DiscreteKernel) -> Result<WignerField> {
    let spin = t.spin;
    kernel.check_dim(spin)?;
    let grid = t.grid;
    let d = spin.dim();
    let n = grid.n_points();
    let rank = grid.d();
    let pts = grid.points();
    let nl = t.lambda_points();
    let quarter = (n / 4) as i64;
    let plans = Plans::new(n);
    let roots = spin.roots_of_unity();
    let measure = (2.0 * grid.dq() / grid.hbar() * 2.0 * PI / grid.length()).powi(rank as i32);
    let pref = measure / ((2.0 * PI * grid.hbar()).powi(rank as i32) * d as f64);

    let bins: Vec<(usize, f64)> = (0..nl)
        .map(|li| {
            let j = lambda_offsets(&grid, li);
            let w = j.iter().map(|v| if v.abs() == quarter { 0.5 } else { 1.0 }).product();
            let ix: Vec<usize> = j.iter().map(|v| (v + (n / 2) as i64) as usize).collect();
            (grid.ravel(&ix), w)
        })
        .collect();

    let mut acc = vec![C64::new(0.0, 0.0); d * d * pts * pts];
    for k in 0..d {
        for l in 0..d {
            let over_mu: Vec<Vec<C64>> = (0..nl)
                .into_par_iter()
                .map(|li| {
                    let mut g: Vec<C64> = (0..pts).map(|r| t.get(li, r, k, l)).collect();
                    centered_dft(&mut g, rank, &plans.inverse);
                    g
                })
                .collect();
            let columns: Vec<Vec<C64>> = (0..pts)
                .into_par_iter()
                .map(|a| {
                    let mut x = vec![C64::new(0.0, 0.0); pts];
                    for (li, (bin, w)) in bins.iter().enumerate() {
                        x[*bin] = over_mu[li][a] * *w;
                    }
                    centered_dft(&mut x, rank, &plans.inverse);
                    x
                })
                .collect();
            let weight = kernel.get(k, l).conj() * pref;
            acc.par_chunks_mut(pts * pts).enumerate().for_each(|(i, slot)| {
                let (m, nn) = (i / d, i % d);
                let c = weight * roots[(k * m + l * nn) % d];
                for (a, col) in columns.iter().enumerate() {
                    for (pk, v) in col.iter().enumerate() {
                        slot[pk * pts + a] += c * v;
                    }
                }
            });
        }
    }
    let imag = acc.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let scale = acc.iter().map(|v| v.re.abs()).fold(0.0, f64::max).max(1.0);
    if !(imag <= 1e-8 * scale) {
        return Err(Error::InvalidState(format!(
            "tilde data does not reconstruct a real function (imaginary part {imag:e})"
        )));
    }
    WignerField::new(grid, spin, acc.into_iter().map(|v| v.re).collect())
}
