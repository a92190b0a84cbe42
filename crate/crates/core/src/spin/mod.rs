//! The discrete spin factor `Γ^(s+1)`.

mod kernel;
mod operator;
mod quantizer;
mod star;
mod symbol;
mod tilde;

pub use kernel::{default_epsilon, kernel_make, DiscreteKernel, KernelVariant, KERNEL_TABLE_TOL, KERNEL_ZERO_TOL};
pub use operator::{disp_d, phase_basis, phase_ket, schwinger_ops, DisplacementTable, SpinDim, SpinOperator};
pub use quantizer::{spin_dequantize, spin_quantizer, spin_symbol, spin_wigner, QuantizerTable, STATE_TOL};
pub use star::{spin_star, spin_star_bracket};
pub use symbol::{DiscreteSymbol, TildeSymbol};
pub use tilde::{boxtimes_discrete, from_tilde, tilde_of};
