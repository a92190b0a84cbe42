use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::state::{plane_waves, state_momentum_coords};
use super::HybridOperator;
use crate::grid::GridSpec;
use crate::spin::{phase_basis, SpinDim};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    /// Positions and `n` to the left: `⟨q,n|f̂|p,φ_m⟩ / ⟨q,n|p,φ_m⟩`.
    Standard,
    /// Positions and `n` to the right: `⟨p,φ_m|f̂|q,n⟩ / ⟨p,φ_m|q,n⟩`.
    Antistandard,
}

/// Ordered symbol over `(p, q, φ_m, n)`, stored `[m][n][p][q]` with `p` on the state
/// momentum lattice `(k - N/2) 2πħ/L`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderedSymbol {
    grid: GridSpec,
    spin: SpinDim,
    ordering: Ordering,
    values: Vec<C64>,
}

impl OrderedSymbol {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn spin(&self) -> SpinDim {
        self.spin
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn momentum(&self, k: usize) -> Vec<f64> {
        state_momentum_coords(&self.grid, k)
    }

    pub fn get(&self, m: usize, n: usize, p: usize, q: usize) -> C64 {
        let pts = self.grid.points();
        self.values[((m * self.spin.dim() + n) * pts + p) * pts + q]
    }

    pub fn max_abs_diff(&self, other: &OrderedSymbol) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Standard or antistandard symbol of `f̂`, on the lattice where plane waves
/// `⟨q,n|p,φ_m⟩ = exp(iq·p/ħ) exp(inφ_m) / √(N^d (s+1))` resolve the identity exactly.
pub fn ordered_symbol(op: &HybridOperator, ordering: Ordering) -> OrderedSymbol {
    let grid = *op.grid();
    let spin = op.spin();
    let d = spin.dim();
    let pts = grid.points();
    let u = plane_waves(&grid);
    let f = phase_basis(spin);
    // Columns of `basis` are |p_k, φ_m⟩ at column m·P + k.
    let basis = DMatrix::from_fn(d * pts, d * pts, |r, c| f[(r / pts, c / pts)] * u[(r % pts, c % pts)]);
    let (prod, transpose) = match ordering {
        Ordering::Standard => (op.matrix() * &basis, false),
        Ordering::Antistandard => (basis.adjoint() * op.matrix(), true),
    };
    let mut values = vec![C64::new(0.0, 0.0); d * d * pts * pts];
    for m in 0..d {
        for n in 0..d {
            for k in 0..pts {
                for x in 0..pts {
                    let (row, col) = (n * pts + x, m * pts + k);
                    let overlap = basis[(row, col)];
                    values[((m * d + n) * pts + k) * pts + x] = if transpose {
                        prod[(col, row)] / overlap.conj()
                    } else {
                        prod[(row, col)] / overlap
                    };
                }
            }
        }
    }
    OrderedSymbol {
        grid,
        spin,
        ordering,
        values,
    }
}
