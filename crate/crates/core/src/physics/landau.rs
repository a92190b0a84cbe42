use std::f64::consts::PI;

use serde::Serialize;

use super::EMParams;
use crate::grid::{moyal_star, Extension, GridSpec, PhaseFunction, StarOrder};
use crate::special::{laguerre, laguerre_derivative};
use crate::{Error, Result, C64};

/// Landau gauge for `B = (0, 0, B3)`: `A = (-q2 B3, 0, 0)`, `A0 = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LandauGauge;

impl LandauGauge {
    pub fn vector_potential(self, params: &EMParams, q: [f64; 3]) -> [f64; 3] {
        [-q[1] * params.b3, 0.0, 0.0]
    }

    pub fn field(self, params: &EMParams) -> [f64; 3] {
        [0.0, 0.0, params.b3]
    }
}

/// Pauli Hamiltonian symbol at `(p, q, φ_m, n)` for the qubit kernel:
/// `(1/2m0) Σ_j (p_j - e0 A_j/c)² - (e0ħ/2m0c)[(-1)^m B1 + (-1)^{m+n} B2 + (-1)^n B3]`.
pub fn pauli_symbol(params: &EMParams, gauge: LandauGauge, p: [f64; 3], q: [f64; 3], m: usize, n: usize) -> f64 {
    let a = gauge.vector_potential(params, q);
    let kinetic: f64 = (0..3).map(|j| (p[j] - params.e0 * a[j] / params.c).powi(2)).sum::<f64>() / (2.0 * params.m0);
    let b = gauge.field(params);
    let sign = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
    let zeeman = sign(m) * b[0] + sign(m + n) * b[1] + sign(n) * b[2];
    kinetic - params.e0 * params.hbar / (2.0 * params.m0 * params.c) * zeeman
}

/// Quantum numbers of a Landau eigenfunction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LandauMode {
    pub n: u32,
    pub lambda0: i8,
    pub p10: f64,
    pub p30: f64,
    pub params: EMParams,
}

impl LandauMode {
    pub fn new(n: u32, lambda0: i8, p10: f64, p30: f64, params: EMParams) -> Result<Self> {
        if lambda0 != 1 && lambda0 != -1 {
            return Err(Error::InvalidParameter(format!("lambda0 must be +1 or -1, got {lambda0}")));
        }
        params.validate()?;
        if params.e0 == 0.0 || params.b3 <= 0.0 {
            return Err(Error::InvalidParameter("Landau levels need e0 != 0 and B3 > 0".into()));
        }
        if !p10.is_finite() || !p30.is_finite() {
            return Err(Error::InvalidParameter("momenta must be finite".into()));
        }
        Ok(Self {
            n,
            lambda0,
            p10,
            p30,
            params,
        })
    }

    /// `γ(φ_m, n)` ordered `(m,n) = (0,0), (0,1), (1,0), (1,1)`.
    pub fn spin_vector(&self) -> [f64; 4] {
        if self.lambda0 == 1 {
            [0.5, 0.0, 0.5, 0.0]
        } else {
            [0.0, 0.5, 0.0, 0.5]
        }
    }

    /// Centre `-c p10 / (e0 B3)` of the `q2` oscillation.
    pub fn centre(&self) -> f64 {
        -self.params.c * self.p10 / (self.params.e0 * self.params.b3)
    }

    fn quantum(&self) -> f64 {
        self.params.hbar * self.params.omega0()
    }
}

/// `E_N = ħω0 (N + 1/2 - λ0 sgn(e0)/2) + p30²/(2m0)`.
pub fn landau_energy(mode: &LandauMode) -> f64 {
    let p = &mode.params;
    mode.quantum() * (f64::from(mode.n) + 0.5 - 0.5 * f64::from(mode.lambda0) * p.e0.signum())
        + mode.p30 * mode.p30 / (2.0 * p.m0)
}

/// `H0' = p2²/2m0 + m0 ω0² (q2 - centre)²/2`.
pub fn landau_h0(mode: &LandauMode, p2: f64, q2: f64) -> f64 {
    let p = &mode.params;
    let w = p.omega0();
    p2 * p2 / (2.0 * p.m0) + 0.5 * p.m0 * w * w * (q2 - mode.centre()).powi(2)
}

fn rho0(mode: &LandauMode, h: f64) -> f64 {
    let e = mode.quantum();
    let sign = if mode.n % 2 == 0 { 1.0 } else { -1.0 };
    sign / (PI * mode.params.hbar) * (-2.0 * h / e).exp() * laguerre(mode.n, 0.0, 4.0 * h / e)
}

/// `ρ0,N = ((-1)^N/πħ) exp(-2H0'/ħω0) L_N(4H0'/ħω0)` in the `(p2, q2)` plane.
///
/// The full function carries `δ(p1 - p10) δ(p3 - p30)` and the spin vector of
/// [`LandauMode::spin_vector`]; both are kept analytic.
pub fn landau_wigner_reduced(mode: &LandauMode, p2: f64, q2: f64) -> f64 {
    rho0(mode, landau_h0(mode, p2, q2))
}

/// Trapezoid integral of `ρ0,N` over the `(p2, q2)` plane on `points × points` nodes.
pub fn landau_normalization(mode: &LandauMode, points: usize) -> f64 {
    let p = &mode.params;
    let e = mode.quantum();
    let h_max = e * (40.0 + 4.0 * f64::from(mode.n));
    let p_max = (2.0 * p.m0 * h_max).sqrt();
    let q_max = (2.0 * h_max / p.m0).sqrt() / p.omega0();
    let points = points.max(3);
    let dp = 2.0 * p_max / (points - 1) as f64;
    let dq = 2.0 * q_max / (points - 1) as f64;
    let mut acc = 0.0;
    for i in 0..points {
        let p2 = -p_max + i as f64 * dp;
        let wi = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
        for j in 0..points {
            let q2 = mode.centre() - q_max + j as f64 * dq;
            let wj = if j == 0 || j == points - 1 { 0.5 } else { 1.0 };
            acc += wi * wj * landau_wigner_reduced(mode, p2, q2);
        }
    }
    acc * dp * dq
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LandauResiduals {
    /// Max over sampled `H0'` of the radial equation residual, relative to the largest term.
    pub ode: f64,
    /// Max finite-difference residual of the transport equation.
    pub transport: f64,
    /// Max of `|p_j ∗ ρ - p_j0 ρ|` for `j = 1, 3`.
    pub eigen_p: f64,
}

const TRANSPORT_STEP: f64 = 1e-3;

/// Checks `ρ0,N` against the radial eigen-equation, the transport equation and the
/// momentum eigen-equations.
pub fn landau_residuals(mode: &LandauMode) -> LandauResiduals {
    LandauResiduals {
        ode: ode_residual(mode),
        transport: transport_residual(mode),
        eigen_p: eigen_p_residual(mode),
    }
}

fn ode_residual(mode: &LandauMode) -> f64 {
    let p = &mode.params;
    let e = mode.quantum();
    let en = landau_energy(mode);
    let rhs = en + p.e0 * p.hbar * p.b3 * f64::from(mode.lambda0) / (2.0 * p.m0 * p.c) - mode.p30.powi(2) / (2.0 * p.m0);
    let pref = if mode.n % 2 == 0 { 1.0 } else { -1.0 } / (PI * p.hbar);
    let (mut worst, mut scale) = (0.0f64, 0.0f64);
    for i in 0..=400 {
        let x = 0.1 * f64::from(i);
        let h = e * x / 4.0;
        let ex = pref * (-0.5 * x).exp();
        let l = laguerre(mode.n, 0.0, x);
        let l1 = laguerre_derivative(mode.n, 1, x);
        let l2 = laguerre_derivative(mode.n, 2, x);
        let r = ex * l;
        let dr = 4.0 / e * ex * (l1 - 0.5 * l);
        let ddr = (4.0 / e).powi(2) * ex * (l2 - l1 + 0.25 * l);
        let a = h * r;
        let b = 0.25 * e * e * (h * ddr + dr);
        let c = rhs * r;
        worst = worst.max((a - b - c).abs());
        scale = scale.max(a.abs()).max(b.abs()).max(c.abs());
    }
    worst / scale
}

/// `ρ(p, q, t) = ρ0,N(H') g(p2 + e0 B3 q1/c) w(q3 - p3 t/m0)` with `H'` built from `p1`.
fn transport_field(mode: &LandauMode, p: [f64; 3], q: [f64; 3], t: f64) -> f64 {
    let pr = &mode.params;
    let k = pr.e0 * pr.b3 / pr.c;
    let h = ((p[0] + k * q[1]).powi(2) + p[1] * p[1]) / (2.0 * pr.m0);
    let g = (-0.5 * (p[1] + k * q[0]).powi(2)).exp();
    let w = (-0.25 * (q[2] - p[2] * t / pr.m0).powi(2)).exp();
    rho0(mode, h) * g * w
}

fn transport_residual(mode: &LandauMode) -> f64 {
    let pr = &mode.params;
    let k = pr.e0 * pr.b3 / pr.c;
    let h = TRANSPORT_STEP;
    let mut worst = 0.0f64;
    for i in 0..27 {
        let u = [(i % 3) as f64 - 1.0, ((i / 3) % 3) as f64 - 1.0, (i / 9) as f64 - 1.0];
        let p = [0.3 * u[0] + 0.1, 0.4 * u[1] - 0.2, 0.5 * u[2]];
        let q = [0.2 * u[1] + 0.05, 0.3 * u[2] - 0.1, 0.6 * u[0]];
        let t = 0.25 * u[2] + 0.5;
        let f = |dp: [f64; 3], dq: [f64; 3], dt: f64| {
            let pp = [p[0] + dp[0], p[1] + dp[1], p[2] + dp[2]];
            let qq = [q[0] + dq[0], q[1] + dq[1], q[2] + dq[2]];
            transport_field(mode, pp, qq, t + dt)
        };
        let z = [0.0; 3];
        let unit = |j: usize| {
            let mut e = [0.0; 3];
            e[j] = h;
            e
        };
        let neg = |v: [f64; 3]| [-v[0], -v[1], -v[2]];
        let d_t = (f(z, z, h) - f(z, z, -h)) / (2.0 * h);
        let d_q = |j: usize| (f(z, unit(j), 0.0) - f(z, neg(unit(j)), 0.0)) / (2.0 * h);
        let d_p = |j: usize| (f(unit(j), z, 0.0) - f(neg(unit(j)), z, 0.0)) / (2.0 * h);
        let res = d_t
            + ((p[0] + k * q[1]) * (d_q(0) - k * d_p(1)) + p[1] * d_q(1) + p[2] * d_q(2)) / pr.m0;
        worst = worst.max(res.abs());
    }
    worst
}

/// `p_j ∗ ρ = p_j ρ - (iħ/2) ∂ρ/∂q_j`; on the δ support `p_j ρ = p_j0 ρ`, leaving the derivative term.
fn eigen_p_residual(mode: &LandauMode) -> f64 {
    let rho = |q: [f64; 3], p2: f64| landau_wigner_reduced(mode, p2, q[1]);
    let h = TRANSPORT_STEP;
    let mut worst = 0.0f64;
    for i in 0..9 {
        let (p2, q2) = (0.3 * f64::from(i) - 1.2, 0.2 * f64::from(i % 3) - 0.2);
        let d1 = (rho([h, q2, 0.0], p2) - rho([-h, q2, 0.0], p2)) / (2.0 * h);
        let d3 = (rho([0.0, q2, h], p2) - rho([0.0, q2, -h], p2)) / (2.0 * h);
        worst = worst.max(0.5 * mode.params.hbar * d1.abs()).max(0.5 * mode.params.hbar * d3.abs());
    }
    worst
}

/// Kinetic symbol `(1/2m0) Σ_j (p_j - e0 A_j/c)²` and the mechanical momentum
/// `p1 + e0 B3 q2/c` on a phase-space grid with polynomial extension (`d ≥ 2`).
pub fn landau_kinetic_fields(params: &EMParams, grid: GridSpec) -> Result<(PhaseFunction, PhaseFunction)> {
    if grid.d() < 2 {
        return Err(Error::InvalidGrid("the Landau gauge needs at least two dimensions".into()));
    }
    let k = params.e0 * params.b3 / params.c;
    let pi1 = PhaseFunction::from_fn(grid, Extension::Polynomial, |p, q| C64::new(p[0] + k * q[1], 0.0));
    let h = PhaseFunction::from_fn(grid, Extension::Polynomial, |p, q| {
        let rest: f64 = p[1..].iter().map(|v| v * v).sum();
        C64::new(((p[0] + k * q[1]).powi(2) + rest) / (2.0 * params.m0), 0.0)
    });
    Ok((pi1, h))
}

/// `max |π1 ∗ π1 - π1²|` and `max |[p_j, H]∗|` over the grid for every momentum
/// `p_j` conjugate to a cyclic coordinate (`j = 1` and, in three dimensions, `j = 3`).
pub fn landau_star_checks(params: &EMParams, grid: GridSpec) -> Result<(f64, f64)> {
    let (pi1, h) = landau_kinetic_fields(params, grid)?;
    let order = StarOrder::Truncated(2);
    let square = moyal_star(&pi1, &pi1, order)?;
    let pointwise = pi1.zip_with(&pi1, |a, b| a * b)?;
    let square_defect = square.max_abs_diff(&pointwise);
    let mut comm = 0.0f64;
    for j in [0usize, 2] {
        if j >= grid.d() {
            continue;
        }
        let pj = PhaseFunction::from_fn(grid, Extension::Polynomial, |p, _| C64::new(p[j], 0.0));
        let a = moyal_star(&pj, &h, order)?;
        let b = moyal_star(&h, &pj, order)?;
        comm = comm.max(a.max_abs_diff(&b));
    }
    Ok((square_defect, comm))
}
