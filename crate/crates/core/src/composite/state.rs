use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;

use crate::grid::{GridSpec, SpinorField};
use crate::spin::{SpinDim, SpinOperator, STATE_TOL};
use crate::{Error, Result, C64};

/// Operator on `L² ⊗ C^(s+1)` as a matrix in the orthonormal lattice basis `|q_x, n⟩`,
/// row and column index `n·N^d + x`.
///
/// The position-space kernel is `⟨q,n|A|q',n'⟩ = matrix / Δq^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridOperator {
    grid: GridSpec,
    spin: SpinDim,
    matrix: DMatrix<C64>,
}

impl HybridOperator {
    pub fn from_matrix(grid: GridSpec, spin: SpinDim, matrix: DMatrix<C64>) -> Result<Self> {
        let n = grid.points() * spin.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::GridMismatch(format!(
                "expected a {n}×{n} matrix, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { grid, spin, matrix })
    }

    /// Builds the operator from its kernel `⟨q_x, n|A|q_y, n'⟩` given as `f(n, n', x, y)`.
    pub fn from_kernel(grid: GridSpec, spin: SpinDim, f: impl Fn(usize, usize, usize, usize) -> C64) -> Self {
        let p = grid.points();
        let w = grid.dq().powi(grid.d() as i32);
        let matrix = DMatrix::from_fn(p * spin.dim(), p * spin.dim(), |r, c| f(r / p, c / p, r % p, c % p) * w);
        Self { grid, spin, matrix }
    }

    pub fn identity(grid: GridSpec, spin: SpinDim) -> Self {
        let n = grid.points() * spin.dim();
        Self {
            grid,
            spin,
            matrix: DMatrix::identity(n, n),
        }
    }

    /// `g(q̂) ⊗ 1`.
    pub fn position_function(grid: GridSpec, spin: SpinDim, g: impl Fn(&[f64]) -> C64) -> Self {
        let p = grid.points();
        let diag: Vec<C64> = (0..p).map(|x| g(&grid.coords(x))).collect();
        let n = p * spin.dim();
        let matrix = DMatrix::from_fn(n, n, |r, c| if r == c { diag[r % p] } else { C64::new(0.0, 0.0) });
        Self { grid, spin, matrix }
    }

    /// `h(p̂) ⊗ 1`, diagonal on the state momentum lattice `(k - N/2) 2πħ/L`.
    pub fn momentum_function(grid: GridSpec, spin: SpinDim, h: impl Fn(&[f64]) -> C64) -> Self {
        let p = grid.points();
        let u = plane_waves(&grid);
        let diag = DMatrix::from_fn(p, p, |r, c| {
            if r == c {
                h(&state_momentum_coords(&grid, r))
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let block = &u * diag * u.adjoint();
        Self::tensor(grid, &SpinOperator::identity(spin.dim()), &block)
    }

    pub fn position(grid: GridSpec, spin: SpinDim, axis: usize) -> Self {
        Self::position_function(grid, spin, |q| C64::new(q[axis], 0.0))
    }

    pub fn momentum(grid: GridSpec, spin: SpinDim, axis: usize) -> Self {
        Self::momentum_function(grid, spin, |p| C64::new(p[axis], 0.0))
    }

    /// `1 ⊗ A`.
    pub fn from_spin(grid: GridSpec, a: &SpinOperator) -> Self {
        let p = grid.points();
        Self::tensor(grid, a, &DMatrix::identity(p, p))
    }

    fn tensor(grid: GridSpec, a: &SpinOperator, block: &DMatrix<C64>) -> Self {
        let p = grid.points();
        let d = a.dim();
        let matrix = DMatrix::from_fn(p * d, p * d, |r, c| a.get(r / p, c / p) * block[(r % p, c % p)]);
        Self {
            grid,
            spin: SpinDim::new(d - 1),
            matrix,
        }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(psi: &SpinorField) -> Self {
        let g = *psi.grid();
        let w = g.dq().powf(g.d() as f64 / 2.0);
        let v = nalgebra::DVector::from_iterator(psi.amplitudes().len(), psi.amplitudes().iter().map(|a| a * w));
        Self {
            grid: g,
            spin: psi.spin(),
            matrix: &v * v.adjoint(),
        }
    }

    /// `Σ_i w_i |ψ_i⟩⟨ψ_i|`.
    pub fn mixture(states: &[(f64, SpinorField)]) -> Result<Self> {
        let (_, first) = states
            .first()
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let mut acc = Self::projector(first).scale(C64::new(0.0, 0.0));
        for (w, psi) in states {
            if psi.grid() != first.grid() || psi.spin() != first.spin() {
                return Err(Error::GridMismatch("mixture components live on different spaces".into()));
            }
            acc = &acc + &Self::projector(psi).scale(C64::new(*w, 0.0));
        }
        Ok(acc)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn spin(&self) -> SpinDim {
        self.spin
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// `⟨q_x, n|A|q_y, n'⟩`.
    pub fn kernel(&self, n: usize, n2: usize, x: usize, y: usize) -> C64 {
        let p = self.grid.points();
        self.matrix[(n * p + x, n2 * p + y)] / self.grid.dq().powi(self.grid.d() as i32)
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            grid: self.grid,
            spin: self.spin,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            grid: self.grid,
            spin: self.spin,
            matrix: &self.matrix * c,
        }
    }

    pub fn max_abs_diff(&self, other: &HybridOperator) -> f64 {
        (&self.matrix - &other.matrix).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Partial trace over the continuous factor.
    pub fn spin_part(&self) -> SpinOperator {
        let p = self.grid.points();
        SpinOperator::from_fn(self.spin.dim(), |a, b| (0..p).map(|x| self.matrix[(a * p + x, b * p + x)]).sum())
    }

    pub(crate) fn check_density(&self, tol: f64) -> Result<()> {
        let herm = (&self.matrix - self.matrix.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max);
        if herm > tol {
            return Err(Error::InvalidState(format!("density operator is not Hermitian ({herm:e})")));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidState(format!("density operator has trace {tr}")));
        }
        Ok(())
    }
}

impl Mul<&HybridOperator> for &HybridOperator {
    type Output = HybridOperator;
    fn mul(self, rhs: &HybridOperator) -> HybridOperator {
        HybridOperator {
            grid: self.grid,
            spin: self.spin,
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

impl Add<&HybridOperator> for &HybridOperator {
    type Output = HybridOperator;
    fn add(self, rhs: &HybridOperator) -> HybridOperator {
        HybridOperator {
            grid: self.grid,
            spin: self.spin,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub<&HybridOperator> for &HybridOperator {
    type Output = HybridOperator;
    fn sub(self, rhs: &HybridOperator) -> HybridOperator {
        HybridOperator {
            grid: self.grid,
            spin: self.spin,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

pub(crate) fn state_momentum_coords(grid: &GridSpec, idx: usize) -> Vec<f64> {
    let step = 2.0 * std::f64::consts::PI * grid.hbar() / grid.length();
    let half = (grid.n_points() / 2) as f64;
    grid.unravel(idx).into_iter().map(|i| (i as f64 - half) * step).collect()
}

/// Unitary `U[x][k] = exp(i q_x·p_k/ħ)/√(N^d)` onto the state momentum lattice.
pub(crate) fn plane_waves(grid: &GridSpec) -> DMatrix<C64> {
    let p = grid.points();
    let norm = 1.0 / (p as f64).sqrt();
    let qs: Vec<Vec<f64>> = (0..p).map(|x| grid.coords(x)).collect();
    let ks: Vec<Vec<f64>> = (0..p).map(|k| state_momentum_coords(grid, k)).collect();
    DMatrix::from_fn(p, p, |x, k| {
        let dot: f64 = qs[x].iter().zip(&ks[k]).map(|(q, p)| q * p).sum();
        C64::cis(dot / grid.hbar()) * norm
    })
}

/// State on `L² ⊗ C^(s+1)`: a normalized spinor field or a density operator.
#[derive(Clone, Debug, PartialEq)]
pub enum HybridState {
    Pure(SpinorField),
    Mixed(HybridOperator),
}

impl HybridState {
    pub fn pure(psi: SpinorField) -> Result<Self> {
        let n = psi.norm_sq();
        if (n - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("state has norm² {n}")));
        }
        Ok(Self::Pure(psi))
    }

    /// Mixed states are limited to one spatial dimension.
    pub fn mixed(rho: HybridOperator) -> Result<Self> {
        if rho.grid.d() != 1 {
            return Err(Error::InvalidGrid(format!(
                "mixed states are supported for d = 1 only, got d = {}",
                rho.grid.d()
            )));
        }
        rho.check_density(STATE_TOL)?;
        Ok(Self::Mixed(rho))
    }

    pub fn grid(&self) -> &GridSpec {
        match self {
            Self::Pure(psi) => psi.grid(),
            Self::Mixed(rho) => rho.grid(),
        }
    }

    pub fn spin(&self) -> SpinDim {
        match self {
            Self::Pure(psi) => psi.spin(),
            Self::Mixed(rho) => rho.spin(),
        }
    }

    /// `⟨q_x, n|ρ|q_y, n'⟩`.
    pub fn kernel(&self, n: usize, n2: usize, x: usize, y: usize) -> C64 {
        match self {
            Self::Pure(psi) => psi.component(n)[x] * psi.component(n2)[y].conj(),
            Self::Mixed(rho) => rho.kernel(n, n2, x, y),
        }
    }

    pub fn to_operator(&self) -> HybridOperator {
        match self {
            Self::Pure(psi) => HybridOperator::projector(psi),
            Self::Mixed(rho) => rho.clone(),
        }
    }
}
