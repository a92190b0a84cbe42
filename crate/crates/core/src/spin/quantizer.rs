use rayon::prelude::*;

use super::operator::DisplacementTable;
use super::{DiscreteKernel, DiscreteSymbol, SpinDim, SpinOperator};
use crate::{Error, Result, C64};

/// Tolerance for density-matrix validity checks.
pub const STATE_TOL: f64 = 1e-10;

/// The quantizer `ω(m,n)` on every point of `Γ^(s+1)`.
#[derive(Clone, Debug)]
pub struct QuantizerTable {
    kernel: DiscreteKernel,
    ops: Vec<SpinOperator>,
}

impl QuantizerTable {
    pub fn dim(&self) -> SpinDim {
        self.kernel.dim()
    }

    pub fn kernel(&self) -> &DiscreteKernel {
        &self.kernel
    }

    pub fn get(&self, m: usize, n: usize) -> &SpinOperator {
        &self.ops[m * self.dim().dim() + n]
    }

    pub fn ops(&self) -> &[SpinOperator] {
        &self.ops
    }

    /// `(1/(s+1)) Tr(A ω(m,n))` at every `(m,n)`.
    pub fn expectation(&self, a: &SpinOperator) -> Result<DiscreteSymbol> {
        let s = self.dim();
        if a.dim() != s.dim() {
            return Err(Error::DimensionMismatch {
                expected: s.dim(),
                found: a.dim(),
            });
        }
        let inv = 1.0 / s.dim() as f64;
        let values = self.ops.iter().map(|w| a.trace_product(w) * inv).collect();
        DiscreteSymbol::new(s, values)
    }

    /// `(1/(s+1)) Σ_{m,n} f(m,n) ω(m,n)`.
    pub fn dequantize(&self, f: &DiscreteSymbol) -> Result<SpinOperator> {
        let s = self.dim();
        if f.dim() != s {
            return Err(Error::DimensionMismatch {
                expected: s.dim(),
                found: f.dim().dim(),
            });
        }
        let d = s.dim();
        let mut acc = SpinOperator::zeros(d);
        for (w, &c) in self.ops.iter().zip(f.values()) {
            acc = &acc + &w.scale(c);
        }
        Ok(acc.scale(C64::new(1.0 / d as f64, 0.0)))
    }
}

/// `ω(m,n) = (1/(s+1)) Σ_{k,l} K[k][l] exp(-i2π(km+ln)/(s+1)) D(k,l)`.
pub fn spin_quantizer(kernel: &DiscreteKernel) -> QuantizerTable {
    let s = kernel.dim();
    let d = s.dim();
    let table = DisplacementTable::new(s);
    let roots = s.roots_of_unity();
    let ops = (0..d * d)
        .into_par_iter()
        .map(|idx| {
            let (m, n) = (idx / d, idx % d);
            let coeffs: Vec<C64> = (0..d * d)
                .map(|kl| {
                    let (k, l) = (kl / d, kl % d);
                    let phase = roots[(d - (k * m + l * n) % d) % d];
                    kernel.get(k, l) * phase / d as f64
                })
                .collect();
            table.synthesize(&coeffs)
        })
        .collect();
    QuantizerTable {
        kernel: kernel.clone(),
        ops,
    }
}

/// Discrete Wigner function `(1/(s+1)) Tr(ρ ω(m,n))` of a spin density matrix.
pub fn spin_wigner(rho: &SpinOperator, kernel: &DiscreteKernel) -> Result<DiscreteSymbol> {
    kernel.check_dim(SpinDim::from_dim(rho.dim())?)?;
    rho.check_density(STATE_TOL)?;
    spin_quantizer(kernel).expectation(rho)
}

/// Symbol of an operator:
/// `f(m,n) = (1/(s+1)) Σ_{k,l} K[k][l]^{-1} exp(i2π(km+ln)/(s+1)) Tr(f D†(k,l))`.
pub fn spin_symbol(op: &SpinOperator, kernel: &DiscreteKernel) -> Result<DiscreteSymbol> {
    let s = kernel.dim();
    if op.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: op.dim(),
        });
    }
    let d = s.dim();
    let table = DisplacementTable::new(s);
    // coefficients() already carries the 1/(s+1) factor of the trace.
    let c: Vec<C64> = table
        .coefficients(op)
        .iter()
        .enumerate()
        .map(|(kl, &t)| t / kernel.get(kl / d, kl % d))
        .collect();
    let roots = s.roots_of_unity();
    Ok(DiscreteSymbol::from_fn(s, |m, n| {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..d {
            for l in 0..d {
                acc += c[k * d + l] * roots[(k * m + l * n) % d];
            }
        }
        acc
    }))
}

/// Inverse of [`spin_symbol`]: `(1/(s+1)) Σ_{m,n} f(m,n) ω(m,n)`.
pub fn spin_dequantize(f: &DiscreteSymbol, kernel: &DiscreteKernel) -> Result<SpinOperator> {
    kernel.check_dim(f.dim())?;
    spin_quantizer(kernel).dequantize(f)
}
