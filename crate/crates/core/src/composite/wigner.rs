use rayon::prelude::*;
use serde::Serialize;

use super::HybridState;
use crate::grid::{wigner_from_pairs, WignerField};
use crate::spin::{spin_quantizer, DiscreteKernel, KernelVariant, KERNEL_ZERO_TOL};
use crate::{Error, Result, C64};

/// Wigner function of a state on `L² ⊗ C^(s+1)`.
///
/// With `W_ab(p,q)` the continuous Wigner transform of `⟨q-ξ/2, a|ρ|q+ξ/2, b⟩`,
/// cosine kernels evaluate
/// `(1/((s+1) cos ε)) Re[exp(i(ε - nφ_m)) Σ_n' exp(i n'φ_m) W_nn'(p,q)]`
/// and any other kernel uses `(1/(s+1)) Σ_ab W_ab ω(m,n)_ba`.
pub fn full_wigner(state: &HybridState, kernel: &DiscreteKernel) -> Result<WignerField> {
    let s = state.spin();
    kernel.check_dim(s)?;
    let grid = *state.grid();
    let values = if kernel.variant() == Some(KernelVariant::Cosine) {
        cosine_form(state, kernel)
    } else {
        full_wigner_complex(state, kernel)?.into_iter().map(|v| v.re).collect()
    };
    WignerField::new(grid, s, values)
}

fn block(state: &HybridState, a: usize, b: usize) -> Vec<C64> {
    wigner_from_pairs(state.grid(), |minus, plus| state.kernel(a, b, minus, plus))
}

fn cosine_form(state: &HybridState, kernel: &DiscreteKernel) -> Vec<f64> {
    let s = state.spin();
    let d = s.dim();
    let eps = kernel.epsilon();
    let size = state.grid().points().pow(2);
    let mut out = vec![0.0; d * d * size];
    let pref = 1.0 / (d as f64 * eps.cos());
    for n in 0..d {
        for n2 in 0..d {
            let w = block(state, n, n2);
            out.par_chunks_mut(size)
                .enumerate()
                .filter(|(i, _)| i % d == n)
                .for_each(|(i, slot)| {
                    let m = (i / d) as i64;
                    let c = C64::cis(eps + (n2 as f64 - n as f64) * s.phase(m)) * pref;
                    for (o, v) in slot.iter_mut().zip(&w) {
                        *o += (c * v).re;
                    }
                });
        }
    }
    out
}

/// Complex accumulation of `(1/(s+1)) Σ_ab W_ab ω(m,n)_ba`, before projecting onto the real part.
pub fn full_wigner_complex(state: &HybridState, kernel: &DiscreteKernel) -> Result<Vec<C64>> {
    let s = state.spin();
    kernel.check_dim(s)?;
    let d = s.dim();
    let omega = spin_quantizer(kernel);
    let size = state.grid().points().pow(2);
    let mut out = vec![C64::new(0.0, 0.0); d * d * size];
    for a in 0..d {
        for b in 0..d {
            let w = block(state, a, b);
            out.par_chunks_mut(size).enumerate().for_each(|(i, slot)| {
                let c = omega.get(i / d, i % d).get(b, a) / d as f64;
                for (o, v) in slot.iter_mut().zip(&w) {
                    *o += c * v;
                }
            });
        }
    }
    Ok(out)
}

/// The four reductions of a Wigner function.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Marginals {
    /// Sum over `(m, n)` and integral over `p`, per position lattice site.
    pub position: Vec<f64>,
    /// Sum over `(m, n)` and integral over `q`, per momentum lattice site.
    pub momentum: Vec<f64>,
    /// Distribution of `n`.
    pub n_distribution: Vec<f64>,
    /// Distribution of `φ_m`.
    pub m_distribution: Vec<f64>,
}

pub fn marginals(w: &WignerField) -> Marginals {
    let g = w.grid();
    let d = w.spin().dim();
    let pts = g.points();
    let dp = g.dp().powi(g.d() as i32);
    let dq = g.dq().powi(g.d() as i32);
    let mut position = vec![0.0; pts];
    let mut momentum = vec![0.0; pts];
    let mut n_distribution = vec![0.0; d];
    let mut m_distribution = vec![0.0; d];
    for m in 0..d {
        for n in 0..d {
            let slice = w.slice(m, n);
            let mut total = 0.0;
            for (k, row) in slice.chunks(pts).enumerate() {
                for (x, v) in row.iter().enumerate() {
                    position[x] += v * dp;
                    momentum[k] += v * dq;
                    total += v;
                }
            }
            n_distribution[n] += total * g.cell();
            m_distribution[m] += total * g.cell();
        }
    }
    Marginals {
        position,
        momentum,
        n_distribution,
        m_distribution,
    }
}

/// Re-expresses `W` for the discrete kernel `k_new`, keeping the continuous (Weyl) kernel.
///
/// `c(k,l) = Σ_mn W exp(-i2π(km+ln)/(s+1))` is reweighted by `conj(K_new/K)` and transformed back.
pub fn kernel_change(w: &WignerField, k: &DiscreteKernel, k_new: &DiscreteKernel) -> Result<WignerField> {
    let s = w.spin();
    k.check_dim(s)?;
    k_new.check_dim(s)?;
    let d = s.dim();
    let mut ratio = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let old = k.get(a, b);
            if old.norm() < KERNEL_ZERO_TOL {
                return Err(Error::KernelZero { k: a, l: b });
            }
            ratio.push((k_new.get(a, b) / old).conj());
        }
    }
    // Combined (m,n) -> (m',n') weights: (1/d²) Σ_kl ratio(k,l) e^{i2π(k(m'-m) + l(n'-n))/d}.
    let roots = s.roots_of_unity();
    let mix: Vec<C64> = (0..d * d)
        .map(|dd| {
            let (dm, dn) = (dd / d, dd % d);
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..d {
                for b in 0..d {
                    acc += ratio[a * d + b] * roots[(a * dm + b * dn) % d];
                }
            }
            acc / (d * d) as f64
        })
        .collect();
    let size = w.grid().points().pow(2);
    let mut out = vec![0.0; d * d * size];
    out.par_chunks_mut(size).enumerate().for_each(|(i, slot)| {
        let (m2, n2) = (i / d, i % d);
        for m in 0..d {
            for n in 0..d {
                let c = mix[((m2 + d - m) % d) * d + (n2 + d - n) % d];
                for (o, v) in slot.iter_mut().zip(w.slice(m, n)) {
                    *o += (c * v).re;
                }
            }
        }
    });
    WignerField::new(*w.grid(), s, out)
}
