use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SpinDim;
use crate::{Error, Result, C64};

/// Values smaller than this are treated as zero when validating kernels.
pub const KERNEL_ZERO_TOL: f64 = 1e-12;
/// Tolerance for the normalization and Hermiticity constraints on kernel tables.
pub const KERNEL_TABLE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelVariant {
    /// `(-1)^{kl}`, for odd `s+1`.
    ParityOdd,
    /// `±1` pattern for even `s+1` with `(s+1)/2` odd.
    ParityEvenHalfOdd,
    /// `cos(πkl/(s+1) + ε)/cos ε`.
    Cosine,
}

impl KernelVariant {
    pub fn name(self) -> &'static str {
        match self {
            KernelVariant::ParityOdd => "parity_odd",
            KernelVariant::ParityEvenHalfOdd => "parity_even_half_odd",
            KernelVariant::Cosine => "cosine",
        }
    }
}

impl fmt::Display for KernelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parity_odd" => Ok(KernelVariant::ParityOdd),
            "parity_even_half_odd" => Ok(KernelVariant::ParityEvenHalfOdd),
            "cosine" => Ok(KernelVariant::Cosine),
            other => Err(Error::InvalidParameter(format!("unknown kernel variant {other:?}"))),
        }
    }
}

/// Default `ε` for the cosine kernel.
///
/// `0` for odd `s+1` and `π/4` for `s+1 ≡ 2 (mod 4)`. When `s+1` is a multiple of 4,
/// `π/4` makes `cos(πkl/(s+1) + ε)` vanish at `kl = (s+1)/4`, so `π/(4(s+1))` is used.
pub fn default_epsilon(s: SpinDim) -> f64 {
    let d = s.dim();
    if d % 2 == 1 {
        0.0
    } else if d % 4 == 2 {
        PI / 4.0
    } else {
        PI / (4.0 * d as f64)
    }
}

/// Kernel table `K[k][l]` on `(k,l) ∈ {0..s}²` together with `ε`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscreteKernel {
    dim: SpinDim,
    values: Vec<C64>,
    epsilon: f64,
    variant: Option<KernelVariant>,
}

/// Builds one of the named kernels.
pub fn kernel_make(s: SpinDim, variant: KernelVariant, epsilon: f64) -> Result<DiscreteKernel> {
    let d = s.dim();
    let mut values = Vec::with_capacity(d * d);
    match variant {
        KernelVariant::ParityOdd => {
            if d % 2 == 0 {
                return Err(Error::DimensionParity {
                    variant: variant.name(),
                    dim: d,
                    requirement: "s+1 must be odd",
                });
            }
            for k in 0..d {
                for l in 0..d {
                    values.push(C64::new(if (k * l) % 2 == 0 { 1.0 } else { -1.0 }, 0.0));
                }
            }
        }
        KernelVariant::ParityEvenHalfOdd => {
            if d % 4 != 2 {
                return Err(Error::DimensionParity {
                    variant: variant.name(),
                    dim: d,
                    requirement: "s+1 must be even with (s+1)/2 odd",
                });
            }
            for k in 0..d {
                for l in 0..d {
                    let v = if (k * l) % 4 == 0 { 1.0 } else { -1.0 };
                    values.push(C64::new(v, 0.0));
                }
            }
        }
        KernelVariant::Cosine => {
            let c0 = epsilon.cos();
            if c0.abs() < KERNEL_ZERO_TOL {
                return Err(Error::KernelZero { k: 0, l: 0 });
            }
            for k in 0..d {
                for l in 0..d {
                    let x = (PI * ((k * l) % (2 * d)) as f64 / d as f64 + epsilon).cos();
                    if x.abs() < KERNEL_ZERO_TOL {
                        return Err(Error::KernelZero { k, l });
                    }
                    values.push(C64::new(x / c0, 0.0));
                }
            }
        }
    }
    let mut kernel = DiscreteKernel::from_table(s, values, epsilon)?;
    kernel.variant = Some(variant);
    Ok(kernel)
}

impl DiscreteKernel {
    /// Validates an arbitrary table: `K[0][0] = 1`, no zero entries, and the
    /// Hermiticity constraint that makes every quantizer Hermitian:
    /// `conj K[k][l] = (-1)^{s+1-k-l} K[s+1-k][s+1-l]` for `1 ≤ k,l ≤ s`,
    /// `conj K[0][l] = K[0][s+1-l]` and `conj K[k][0] = K[s+1-k][0]`.
    pub fn from_table(s: SpinDim, values: Vec<C64>, epsilon: f64) -> Result<Self> {
        let d = s.dim();
        if values.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: values.len(),
            });
        }
        if !epsilon.is_finite() {
            return Err(Error::InvalidParameter("epsilon must be finite".into()));
        }
        let at = |k: usize, l: usize| values[k * d + l];
        if (at(0, 0) - C64::new(1.0, 0.0)).norm() > KERNEL_TABLE_TOL {
            return Err(Error::InvalidKernel(format!("K[0][0] = {} differs from 1", at(0, 0))));
        }
        for k in 0..d {
            for l in 0..d {
                if !(at(k, l).norm() >= KERNEL_ZERO_TOL) {
                    return Err(Error::KernelZero { k, l });
                }
            }
        }
        for k in 0..d {
            for l in 0..d {
                if k == 0 && l == 0 {
                    continue;
                }
                let (kk, ll) = ((d - k) % d, (d - l) % d);
                let sign = if k > 0 && l > 0 && (3 * d - k - l) % 2 == 1 { -1.0 } else { 1.0 };
                let want = at(kk, ll) * sign;
                let scale = at(k, l).norm().max(1.0);
                if (at(k, l).conj() - want).norm() > KERNEL_TABLE_TOL * scale {
                    return Err(Error::InvalidKernel(format!(
                        "Hermiticity constraint fails at (k, l) = ({k}, {l})"
                    )));
                }
            }
        }
        Ok(Self {
            dim: s,
            values,
            epsilon,
            variant: None,
        })
    }

    /// Cosine kernel with the default `ε`.
    pub fn default_for(s: SpinDim) -> Result<Self> {
        kernel_make(s, KernelVariant::Cosine, default_epsilon(s))
    }

    /// The spin-1/2 kernel `(-1)^{kl}` (cosine with `ε = π/4`).
    pub fn qubit() -> Self {
        kernel_make(SpinDim::HALF, KernelVariant::Cosine, PI / 4.0).expect("qubit kernel is valid")
    }

    pub fn dim(&self) -> SpinDim {
        self.dim
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn variant(&self) -> Option<KernelVariant> {
        self.variant
    }

    pub fn get(&self, k: usize, l: usize) -> C64 {
        self.values[k * self.dim.dim() + l]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// True when every entry has unit modulus.
    pub fn is_unimodular(&self, tol: f64) -> bool {
        self.values.iter().all(|v| (v.norm() - 1.0).abs() <= tol)
    }

    pub(crate) fn check_dim(&self, s: SpinDim) -> Result<()> {
        if self.dim != s {
            return Err(Error::DimensionMismatch {
                expected: self.dim.dim(),
                found: s.dim(),
            });
        }
        Ok(())
    }
}
