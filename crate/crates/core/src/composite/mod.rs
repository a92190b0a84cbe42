//! Phase space of `L²(R^d) ⊗ C^(s+1)`: the Weyl kernel on the continuous factor and a
//! discrete kernel on the spin factor.

mod ordering;
mod state;
mod tilde;
mod wigner;

pub use ordering::{ordered_symbol, OrderedSymbol, Ordering};
pub use state::{HybridOperator, HybridState};
pub use tilde::{tilde_rho, wigner_from_tilde, HybridTilde};
pub use wigner::{full_wigner, full_wigner_complex, kernel_change, marginals, Marginals};
