//! Weyl–Wigner–Moyal phase-space calculus for a quantum particle with spin.
//!
//! The phase space is `R^d x R^d x Γ^(s+1)`: a continuous position/momentum part
//! sampled on a periodic lattice, and a discrete `(s+1) x (s+1)` grid of points
//! `(φ_m, n)` for the spin degree of freedom.
//!
//! * [`spin`] holds the exact finite-dimensional machinery (Schwinger operators,
//!   displacement operators, kernels, quantizers, symbols and star products).
//! * [`grid`] handles the continuous factor: spinor fields, the lattice Wigner
//!   transform and the Moyal product.
//! * [`composite`] combines both factors.
//! * [`physics`] contains Landau levels and magnetic resonance for spin 1/2.
//! * [`special`] has Laguerre polynomials and oscillator eigenfunctions.

pub mod composite;
mod error;
pub mod grid;
pub mod physics;
pub mod special;
pub mod spin;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use composite::{
    full_wigner, full_wigner_complex, kernel_change, marginals, ordered_symbol, tilde_rho, wigner_from_tilde, HybridOperator,
    HybridState, HybridTilde, Marginals, OrderedSymbol, Ordering,
};
pub use grid::{
    free_evolution, moyal_star, wigner_continuous, Extension, GridSpec, PhaseFunction, SpinorField, StarOrder,
    WignerField,
};
pub use physics::{
    fit_rabi, landau_energy, landau_residuals, landau_wigner_reduced, pauli_symbol, purity_check, rabi_frequency,
    resonance_analytic, resonance_integrate, EMParams, GammaState, LandauGauge, LandauMode, LandauResiduals,
    PurityReport, RabiFit, ResonanceRun,
};
pub use spin::{
    boxtimes_discrete, disp_d, kernel_make, phase_basis, schwinger_ops, spin_dequantize, spin_quantizer,
    spin_star, spin_star_bracket, spin_symbol, spin_wigner, DiscreteKernel, DiscreteSymbol, KernelVariant,
    QuantizerTable, SpinDim, SpinOperator, TildeSymbol,
};
