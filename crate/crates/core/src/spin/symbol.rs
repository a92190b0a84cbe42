use serde::Serialize;

use super::SpinDim;
use crate::{Error, Result, C64};

macro_rules! spin_table {
    ($name:ident, $doc:literal, $a:ident, $b:ident) => {
        #[doc = $doc]
        #[derive(Clone, Debug, PartialEq, Serialize)]
        pub struct $name {
            dim: SpinDim,
            values: Vec<C64>,
        }

        impl $name {
            pub fn new(dim: SpinDim, values: Vec<C64>) -> Result<Self> {
                let d = dim.dim();
                if values.len() != d * d {
                    return Err(Error::DimensionMismatch {
                        expected: d * d,
                        found: values.len(),
                    });
                }
                Ok(Self { dim, values })
            }

            pub fn from_fn(dim: SpinDim, mut f: impl FnMut(usize, usize) -> C64) -> Self {
                let d = dim.dim();
                let mut values = Vec::with_capacity(d * d);
                for $a in 0..d {
                    for $b in 0..d {
                        values.push(f($a, $b));
                    }
                }
                Self { dim, values }
            }

            pub fn from_real(dim: SpinDim, values: &[f64]) -> Result<Self> {
                Self::new(dim, values.iter().map(|&x| C64::new(x, 0.0)).collect())
            }

            pub fn constant(dim: SpinDim, c: C64) -> Self {
                Self::from_fn(dim, |_, _| c)
            }

            pub fn dim(&self) -> SpinDim {
                self.dim
            }

            pub fn get(&self, $a: usize, $b: usize) -> C64 {
                self.values[$a * self.dim.dim() + $b]
            }

            pub fn values(&self) -> &[C64] {
                &self.values
            }

            pub fn sum(&self) -> C64 {
                self.values.iter().sum()
            }

            pub fn max_abs(&self) -> f64 {
                self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
            }

            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                self.values
                    .iter()
                    .zip(&other.values)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
            }

            pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
                Self {
                    dim: self.dim,
                    values: self.values.iter().map(|&v| f(v)).collect(),
                }
            }

            pub fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
                self.check_same(other)?;
                Ok(Self {
                    dim: self.dim,
                    values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
                })
            }

            pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
                if self.dim != other.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim.dim(),
                        found: other.dim.dim(),
                    });
                }
                Ok(())
            }
        }
    };
}

spin_table!(
    DiscreteSymbol,
    "Function on the discrete grid `Γ^(s+1)`, indexed by `(m, n)` with `φ_m = 2πm/(s+1)`.",
    m,
    n
);

spin_table!(
    TildeSymbol,
    "Coefficients `f̃(k,l) = (1/(s+1)) Tr(f D†(k,l))`, indexed by `(k, l)`.",
    k,
    l
);

impl DiscreteSymbol {
    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// `Σ_m f(m, n)` for each `n`.
    pub fn n_marginal(&self) -> Vec<C64> {
        let d = self.dim.dim();
        (0..d).map(|n| (0..d).map(|m| self.get(m, n)).sum()).collect()
    }

    /// `Σ_n f(m, n)` for each `m`.
    pub fn m_marginal(&self) -> Vec<C64> {
        let d = self.dim.dim();
        (0..d).map(|m| (0..d).map(|n| self.get(m, n)).sum()).collect()
    }
}
