use super::quantizer::spin_quantizer;
use super::{spin_symbol, DiscreteKernel, DiscreteSymbol};
use crate::Result;

/// `f ∗ g`: the symbol of the product of the operators with symbols `f` and `g`.
pub fn spin_star(f: &DiscreteSymbol, g: &DiscreteSymbol, kernel: &DiscreteKernel) -> Result<DiscreteSymbol> {
    f.check_same(g)?;
    kernel.check_dim(f.dim())?;
    let q = spin_quantizer(kernel);
    let prod = &q.dequantize(f)? * &q.dequantize(g)?;
    spin_symbol(&prod, kernel)
}

/// `[f, g]∗ = f ∗ g - g ∗ f`.
pub fn spin_star_bracket(f: &DiscreteSymbol, g: &DiscreteSymbol, kernel: &DiscreteKernel) -> Result<DiscreteSymbol> {
    let fg = spin_star(f, g, kernel)?;
    let gf = spin_star(g, f, kernel)?;
    fg.zip_with(&gf, |a, b| a - b)
}
