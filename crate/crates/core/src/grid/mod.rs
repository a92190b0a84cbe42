//! The continuous factor on a periodic position lattice.
//!
//! Positions are `q_j = (j - N/2) Δq` with `Δq = L/N`. Phase-space functions use the
//! momentum lattice `p_k = (k - N/2) πħ/L`, which is the exact Fourier dual of the
//! chord variable `ξ = 2jΔq` used by the Wigner transform. The state momentum
//! lattice (dual of `q`) is `(k - N/2) 2πħ/L`.

pub(crate) mod fft;
mod moyal;
mod stencil;
mod wigner;

use std::f64::consts::PI;

use serde::Serialize;

pub use moyal::{derivative, free_evolution, moyal_star, StarOrder};
pub use wigner::wigner_continuous;
pub(crate) use wigner::wigner_from_pairs;

use crate::spin::SpinDim;
use crate::{Error, Result, C64};

/// Upper bound on `N^d`.
pub const MAX_GRID_POINTS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    d: usize,
    n_points: usize,
    length: f64,
    hbar: f64,
}

impl GridSpec {
    pub fn new(d: usize, n_points: usize, length: f64, hbar: f64) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::InvalidGrid(format!("dimension {d} is outside 1..=3")));
        }
        if n_points < 4 || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_points = {n_points} must be a power of two and at least 4"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidGrid(format!("length = {length} must be positive")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidGrid(format!("hbar = {hbar} must be positive")));
        }
        let total = n_points.checked_pow(d as u32).unwrap_or(usize::MAX);
        if total > MAX_GRID_POINTS {
            return Err(Error::InvalidGrid(format!(
                "N^d = {total} exceeds the limit of {MAX_GRID_POINTS} lattice points"
            )));
        }
        Ok(Self {
            d,
            n_points,
            length,
            hbar,
        })
    }

    /// One-dimensional grid.
    pub fn line(n_points: usize, length: f64, hbar: f64) -> Result<Self> {
        Self::new(1, n_points, length, hbar)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dq(&self) -> f64 {
        self.length / self.n_points as f64
    }

    /// Momentum spacing of phase-space functions, `πħ/L`.
    pub fn dp(&self) -> f64 {
        PI * self.hbar / self.length
    }

    /// `N^d`.
    pub fn points(&self) -> usize {
        self.n_points.pow(self.d as u32)
    }

    /// Phase-space cell `(Δp Δq)^d`.
    pub fn cell(&self) -> f64 {
        (self.dp() * self.dq()).powi(self.d as i32)
    }

    pub fn positions(&self) -> Vec<f64> {
        let n = self.n_points as f64;
        (0..self.n_points).map(|j| (j as f64 - n / 2.0) * self.dq()).collect()
    }

    /// Phase-space momentum axis `(k - N/2) πħ/L`.
    pub fn momenta(&self) -> Vec<f64> {
        let n = self.n_points as f64;
        (0..self.n_points).map(|k| (k as f64 - n / 2.0) * self.dp()).collect()
    }

    /// Momentum lattice dual to the positions, `(k - N/2) 2πħ/L`.
    pub fn state_momenta(&self) -> Vec<f64> {
        let n = self.n_points as f64;
        let dk = 2.0 * PI * self.hbar / self.length;
        (0..self.n_points).map(|k| (k as f64 - n / 2.0) * dk).collect()
    }

    /// Per-axis indices of a flat point index, slowest axis first.
    pub fn unravel(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.d];
        for a in (0..self.d).rev() {
            out[a] = idx % self.n_points;
            idx /= self.n_points;
        }
        out
    }

    pub fn ravel(&self, ix: &[usize]) -> usize {
        ix.iter().fold(0, |acc, &i| acc * self.n_points + i)
    }

    /// Coordinates of a flat point index on the position lattice.
    pub fn coords(&self, idx: usize) -> Vec<f64> {
        let n = self.n_points as f64;
        self.unravel(idx)
            .into_iter()
            .map(|i| (i as f64 - n / 2.0) * self.dq())
            .collect()
    }

    /// Coordinates of a flat point index on the phase-space momentum lattice.
    pub fn momentum_coords(&self, idx: usize) -> Vec<f64> {
        let n = self.n_points as f64;
        self.unravel(idx)
            .into_iter()
            .map(|i| (i as f64 - n / 2.0) * self.dp())
            .collect()
    }

    pub(crate) fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// Spinor amplitudes `ψ_n(q)` stored component by component.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    grid: GridSpec,
    spin: SpinDim,
    amps: Vec<C64>,
}

impl SpinorField {
    pub fn new(grid: GridSpec, spin: SpinDim, amps: Vec<C64>) -> Result<Self> {
        let want = grid.points() * spin.dim();
        if amps.len() != want {
            return Err(Error::GridMismatch(format!("expected {want} amplitudes, got {}", amps.len())));
        }
        Ok(Self { grid, spin, amps })
    }

    pub fn from_fn(grid: GridSpec, spin: SpinDim, mut f: impl FnMut(usize, &[f64]) -> C64) -> Self {
        let p = grid.points();
        let mut amps = Vec::with_capacity(p * spin.dim());
        for n in 0..spin.dim() {
            for x in 0..p {
                amps.push(f(n, &grid.coords(x)));
            }
        }
        Self { grid, spin, amps }
    }

    /// `ψ_n(q) = φ(q) χ_n`.
    pub fn product(grid: GridSpec, spatial: &[C64], spinor: &[C64]) -> Result<Self> {
        if spatial.len() != grid.points() {
            return Err(Error::GridMismatch(format!(
                "expected {} spatial amplitudes, got {}",
                grid.points(),
                spatial.len()
            )));
        }
        let spin = SpinDim::from_dim(spinor.len())?;
        let amps = spinor
            .iter()
            .flat_map(|&c| spatial.iter().map(move |&a| a * c))
            .collect();
        Ok(Self { grid, spin, amps })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn spin(&self) -> SpinDim {
        self.spin
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn component(&self, n: usize) -> &[C64] {
        let p = self.grid.points();
        &self.amps[n * p..(n + 1) * p]
    }

    /// `Σ_n Σ_q |ψ_n(q)|² Δq^d`.
    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dq().powi(self.grid.d() as i32)
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidState("field has zero norm".into()));
        }
        let k = 1.0 / n.sqrt();
        Ok(Self {
            grid: self.grid,
            spin: self.spin,
            amps: self.amps.iter().map(|a| a * k).collect(),
        })
    }

    /// Fraction of the probability carried by points within 5% of the box edge.
    pub fn boundary_mass_fraction(&self) -> f64 {
        let n = self.grid.n_points();
        let band = ((n as f64) * 0.05).ceil() as usize;
        let near = |i: usize| i < band || i + band >= n;
        let p = self.grid.points();
        let total: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let mut edge = 0.0;
        for x in 0..p {
            if self.grid.unravel(x).into_iter().any(near) {
                for c in 0..self.spin.dim() {
                    edge += self.amps[c * p + x].norm_sqr();
                }
            }
        }
        edge / total
    }
}

/// How a phase-space function continues past the box edge when differentiated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Extension {
    /// Periodic (or negligible at the edges): plain spectral derivatives.
    Periodic,
    /// Smooth but non-periodic, such as polynomial symbols: derivative jumps at
    /// the seam are removed by a polynomial correction before differentiating.
    Polynomial,
}

/// Complex function on the phase-space lattice, stored `[p][q]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseFunction {
    grid: GridSpec,
    values: Vec<C64>,
    extension: Extension,
}

impl PhaseFunction {
    pub fn new(grid: GridSpec, values: Vec<C64>, extension: Extension) -> Result<Self> {
        let want = grid.points() * grid.points();
        if values.len() != want {
            return Err(Error::GridMismatch(format!("expected {want} values, got {}", values.len())));
        }
        Ok(Self {
            grid,
            values,
            extension,
        })
    }

    pub fn from_fn(grid: GridSpec, extension: Extension, mut f: impl FnMut(&[f64], &[f64]) -> C64) -> Self {
        let p = grid.points();
        let qs: Vec<Vec<f64>> = (0..p).map(|x| grid.coords(x)).collect();
        let mut values = Vec::with_capacity(p * p);
        for k in 0..p {
            let pk = grid.momentum_coords(k);
            for q in &qs {
                values.push(f(&pk, q));
            }
        }
        Self {
            grid,
            values,
            extension,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    pub fn with_extension(mut self, extension: Extension) -> Self {
        self.extension = extension;
        self
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn get(&self, p: usize, q: usize) -> C64 {
        self.values[p * self.grid.points() + q]
    }

    /// `Σ f (Δp Δq)^d`.
    pub fn integral(&self) -> C64 {
        self.values.iter().sum::<C64>() * self.grid.cell()
    }

    /// `Σ_p f Δp^d` at each position.
    pub fn position_marginal(&self) -> Vec<C64> {
        let p = self.grid.points();
        let w = self.grid.dp().powi(self.grid.d() as i32);
        (0..p).map(|q| (0..p).map(|k| self.get(k, q)).sum::<C64>() * w).collect()
    }

    /// `Σ_q f Δq^d` at each momentum.
    pub fn momentum_marginal(&self) -> Vec<C64> {
        let p = self.grid.points();
        let w = self.grid.dq().powi(self.grid.d() as i32);
        (0..p).map(|k| self.values[k * p..(k + 1) * p].iter().sum::<C64>() * w).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &PhaseFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn zip_with(&self, other: &PhaseFunction, f: impl Fn(C64, C64) -> C64) -> Result<PhaseFunction> {
        self.grid.check_same(&other.grid)?;
        Ok(PhaseFunction {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
            extension: self.extension,
        })
    }
}

/// Real Wigner function `ρ_W(p, q, φ_m, n)`, stored `[m][n][p][q]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerField {
    grid: GridSpec,
    spin: SpinDim,
    values: Vec<f64>,
}

impl WignerField {
    pub fn new(grid: GridSpec, spin: SpinDim, values: Vec<f64>) -> Result<Self> {
        let d = spin.dim();
        let want = d * d * grid.points() * grid.points();
        if values.len() != want {
            return Err(Error::GridMismatch(format!("expected {want} values, got {}", values.len())));
        }
        Ok(Self { grid, spin, values })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn spin(&self) -> SpinDim {
        self.spin
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn block(&self) -> usize {
        self.grid.points() * self.grid.points()
    }

    /// Phase-space slice at the discrete point `(m, n)`, stored `[p][q]`.
    pub fn slice(&self, m: usize, n: usize) -> &[f64] {
        let b = self.block();
        let i = m * self.spin.dim() + n;
        &self.values[i * b..(i + 1) * b]
    }

    pub fn get(&self, m: usize, n: usize, p: usize, q: usize) -> f64 {
        self.slice(m, n)[p * self.grid.points() + q]
    }

    /// `Σ_{m,n} Σ_{p,q} ρ_W (Δp Δq)^d`.
    pub fn total(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell()
    }

    pub fn max_abs_diff(&self, other: &WignerField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
