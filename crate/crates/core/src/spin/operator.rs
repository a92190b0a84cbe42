use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Spin label: `s` is twice the spin, the Hilbert space has dimension `s + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinDim {
    s: usize,
}

impl SpinDim {
    pub const HALF: SpinDim = SpinDim { s: 1 };

    pub fn new(s: usize) -> Self {
        Self { s }
    }

    pub fn from_dim(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("spin dimension must be at least 1".into()));
        }
        Ok(Self { s: dim - 1 })
    }

    pub fn s(self) -> usize {
        self.s
    }

    pub fn dim(self) -> usize {
        self.s + 1
    }

    /// Reduces an integer label into `0..=s`.
    pub fn wrap(self, k: i64) -> usize {
        k.rem_euclid(self.dim() as i64) as usize
    }

    /// `φ_m = 2πm/(s+1)`.
    pub fn phase(self, m: i64) -> f64 {
        2.0 * PI * m as f64 / self.dim() as f64
    }

    /// `exp(i 2π j/(s+1))` for every residue `j`, indexed by `j mod (s+1)`.
    pub(crate) fn roots_of_unity(self) -> Vec<C64> {
        let d = self.dim();
        (0..d).map(|j| C64::cis(2.0 * PI * j as f64 / d as f64)).collect()
    }
}

/// Dense operator on the `(s+1)`-dimensional spin space.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinOperator {
    m: DMatrix<C64>,
}

impl SpinOperator {
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidParameter("empty operator".into()));
        }
        Ok(Self { m })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            m: DMatrix::from_fn(dim, dim, f),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: DMatrix::zeros(dim, dim),
        }
    }

    /// `|v⟩⟨v|`.
    pub fn projector(v: &DVector<C64>) -> Self {
        Self { m: v * v.adjoint() }
    }

    /// Pauli matrices, with index 0 the identity.
    pub fn pauli(i: usize) -> Self {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        let j = C64::new(0.0, 1.0);
        let e = match i {
            0 => [o, z, z, o],
            1 => [z, o, o, z],
            2 => [z, -j, j, z],
            3 => [o, z, z, -o],
            _ => panic!("Pauli index {i} out of range"),
        };
        Self {
            m: DMatrix::from_row_slice(2, 2, &e),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m[(row, col)]
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { m: &self.m * c }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &SpinOperator) -> C64 {
        let d = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += self.m[(i, j)] * other.m[(j, i)];
            }
        }
        acc
    }

    pub fn commutator(&self, other: &SpinOperator) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn max_abs_diff(&self, other: &SpinOperator) -> f64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let p = &self.adjoint() * self;
        p.max_abs_diff(&Self::identity(self.dim())) <= tol
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (&self.m + self.m.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Checks that the operator is a density matrix to within `tol`.
    pub fn check_density(&self, tol: f64) -> Result<()> {
        if !self.is_hermitian(tol) {
            return Err(Error::InvalidState("density operator is not Hermitian".into()));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidState(format!("density operator has trace {tr}")));
        }
        let min = self.hermitian_eigenvalues()[0];
        if min < -tol {
            return Err(Error::InvalidState(format!(
                "density operator has negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }
}

impl Mul<&SpinOperator> for &SpinOperator {
    type Output = SpinOperator;
    fn mul(self, rhs: &SpinOperator) -> SpinOperator {
        SpinOperator { m: &self.m * &rhs.m }
    }
}

impl Add<&SpinOperator> for &SpinOperator {
    type Output = SpinOperator;
    fn add(self, rhs: &SpinOperator) -> SpinOperator {
        SpinOperator { m: &self.m + &rhs.m }
    }
}

impl Sub<&SpinOperator> for &SpinOperator {
    type Output = SpinOperator;
    fn sub(self, rhs: &SpinOperator) -> SpinOperator {
        SpinOperator { m: &self.m - &rhs.m }
    }
}

/// Columns are the phase states `|φ_m⟩`, with entries `exp(i 2π nm/(s+1))/√(s+1)`.
pub fn phase_basis(s: SpinDim) -> DMatrix<C64> {
    let d = s.dim();
    let roots = s.roots_of_unity();
    let norm = 1.0 / (d as f64).sqrt();
    DMatrix::from_fn(d, d, |n, m| roots[(n * m) % d] * norm)
}

/// Phase state `|φ_m⟩` for any integer `m`.
pub fn phase_ket(s: SpinDim, m: i64) -> DVector<C64> {
    phase_basis(s).column(s.wrap(m)).into_owned()
}

/// The clock `V` and shift `R` operators.
///
/// `V = diag(exp(iφ_n))` and `R = Σ_m exp(iφ_m)|φ_m⟩⟨φ_m|`, so that
/// `R|n⟩ = |n-1⟩` cyclically.
pub fn schwinger_ops(s: SpinDim) -> (SpinOperator, SpinOperator) {
    let d = s.dim();
    let roots = s.roots_of_unity();
    let v = SpinOperator::from_fn(d, |i, j| if i == j { roots[i] } else { C64::new(0.0, 0.0) });
    let f = phase_basis(s);
    let diag = DMatrix::from_fn(d, d, |i, j| if i == j { roots[i] } else { C64::new(0.0, 0.0) });
    let r = SpinOperator { m: &f * diag * f.adjoint() };
    (v, r)
}

/// Displacement operator `D(k,l) = exp(-iπkl/(s+1)) R^k V^l`.
///
/// The phase uses the integers as given; the powers of `R` and `V` are reduced
/// modulo `s+1`.
pub fn disp_d(s: SpinDim, k: i64, l: i64) -> SpinOperator {
    let (v, r) = schwinger_ops(s);
    disp_from(s, &v, &r, k, l)
}

fn disp_from(s: SpinDim, v: &SpinOperator, r: &SpinOperator, k: i64, l: i64) -> SpinOperator {
    let d = s.dim() as f64;
    let phase = C64::cis(-PI * (k as f64) * (l as f64) / d);
    let rk = r.pow(s.wrap(k) as u32);
    let vl = v.pow(s.wrap(l) as u32);
    (&rk * &vl).scale(phase)
}

/// All `D(k,l)` for `k, l ∈ 0..=s`, stored row-major in `k`.
#[derive(Clone, Debug)]
pub struct DisplacementTable {
    dim: SpinDim,
    ops: Vec<SpinOperator>,
}

impl DisplacementTable {
    pub fn new(s: SpinDim) -> Self {
        let (v, r) = schwinger_ops(s);
        let d = s.dim();
        let mut ops = Vec::with_capacity(d * d);
        for k in 0..d {
            for l in 0..d {
                ops.push(disp_from(s, &v, &r, k as i64, l as i64));
            }
        }
        Self { dim: s, ops }
    }

    pub fn dim(&self) -> SpinDim {
        self.dim
    }

    pub fn get(&self, k: usize, l: usize) -> &SpinOperator {
        &self.ops[k * self.dim.dim() + l]
    }

    /// `(1/(s+1)) Tr(A D†(k,l))` for all `(k,l)`.
    pub fn coefficients(&self, a: &SpinOperator) -> Vec<C64> {
        let d = self.dim.dim();
        let am = a.matrix();
        self.ops
            .iter()
            .map(|dk| {
                let dm = dk.matrix();
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..d {
                    for j in 0..d {
                        acc += am[(i, j)] * dm[(i, j)].conj();
                    }
                }
                acc / d as f64
            })
            .collect()
    }

    /// `Σ c(k,l) D(k,l)`.
    pub fn synthesize(&self, c: &[C64]) -> SpinOperator {
        let d = self.dim.dim();
        let mut m = DMatrix::zeros(d, d);
        for (ck, dk) in c.iter().zip(&self.ops) {
            m += dk.matrix() * *ck;
        }
        SpinOperator { m }
    }
}
