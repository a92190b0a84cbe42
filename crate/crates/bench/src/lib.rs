//! Fixtures shared by the benchmarks.

use moyalspin::{
    Extension, GridSpec, HybridState, PhaseFunction, SpinDim, SpinOperator, SpinorField, C64,
};

/// A dense operator with deterministic, non-degenerate entries.
pub fn operator(dim: usize, seed: f64) -> SpinOperator {
    SpinOperator::from_fn(dim, |i, j| {
        let t = seed + (i * dim + j) as f64;
        C64::new((1.3 * t).sin(), (0.7 * t).cos())
    })
}

/// Unit-norm Gaussian packet on `grid` times the spin-up basis vector.
pub fn packet(grid: GridSpec, spin: SpinDim) -> HybridState {
    let scale = std::f64::consts::PI.powf(-0.25 * grid.d() as f64);
    let psi = SpinorField::from_fn(grid, spin, |m, q| {
        let r2: f64 = q.iter().map(|x| (x - 0.4) * (x - 0.4)).sum();
        if m == 0 {
            C64::from_polar(scale * (-0.5 * r2).exp(), 0.6 * q[0])
        } else {
            C64::new(0.0, 0.0)
        }
    });
    HybridState::pure(psi).expect("packet is normalizable")
}

/// Smooth periodic bump centred at `(p0, q0)` on every axis.
pub fn bump(grid: GridSpec, p0: f64, q0: f64) -> PhaseFunction {
    PhaseFunction::from_fn(grid, Extension::Periodic, |p, q| {
        let r2: f64 = p.iter().map(|x| (x - p0).powi(2)).sum::<f64>() + q.iter().map(|x| (x - q0).powi(2)).sum::<f64>();
        C64::new((-r2).exp(), 0.0)
    })
}
