use serde::Serialize;

use super::EMParams;
use crate::spin::{spin_star, DiscreteKernel, DiscreteSymbol, SpinDim, STATE_TOL};
use crate::{Error, Result, C64};

/// Threshold on the purity defect below which a state counts as pure.
pub const PURITY_TOL: f64 = 1e-10;

const MAX_STEP: f64 = 0.5;

/// Spin part `γ(φ_m, n)` of a qubit Wigner function, ordered
/// `(γ00, γ01, γ10, γ11)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GammaState {
    gamma_mn: [f64; 4],
}

impl GammaState {
    pub fn new(gamma_mn: [f64; 4]) -> Result<Self> {
        if gamma_mn.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("γ has non-finite entries".into()));
        }
        let sum: f64 = gamma_mn.iter().sum();
        if (sum - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("γ sums to {sum}, expected 1")));
        }
        Ok(Self { gamma_mn })
    }

    /// `γ00 = (γ0+γ1+γ2+1)/4`, `γ01 = (γ0-γ1-γ2+1)/4`, `γ10 = (γ1-γ0-γ2+1)/4`,
    /// `γ11 = (γ2-γ0-γ1+1)/4`.
    pub fn from_components(g: [f64; 3]) -> Self {
        let [a, b, c] = g;
        Self {
            gamma_mn: [
                0.25 * (a + b + c + 1.0),
                0.25 * (a - b - c + 1.0),
                0.25 * (b - a - c + 1.0),
                0.25 * (c - a - b + 1.0),
            ],
        }
    }

    pub fn from_symbol(g: &DiscreteSymbol) -> Result<Self> {
        if g.dim() != SpinDim::HALF {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: g.dim().dim(),
            });
        }
        Self::new([g.get(0, 0).re, g.get(0, 1).re, g.get(1, 0).re, g.get(1, 1).re])
    }

    pub fn gamma_mn(&self) -> [f64; 4] {
        self.gamma_mn
    }

    /// `(γ0, γ1, γ2) = (2(γ00+γ01)-1, 2(γ00+γ10)-1, 2(γ00+γ11)-1)`.
    pub fn components(&self) -> [f64; 3] {
        let [g00, g01, g10, g11] = self.gamma_mn;
        [2.0 * (g00 + g01) - 1.0, 2.0 * (g00 + g10) - 1.0, 2.0 * (g00 + g11) - 1.0]
    }

    pub fn to_symbol(&self) -> DiscreteSymbol {
        DiscreteSymbol::from_fn(SpinDim::HALF, |m, n| C64::new(self.gamma_mn[2 * m + n], 0.0))
    }

    /// Probability of spin up, `(γ1 + 1)/2`.
    pub fn p_plus(&self) -> f64 {
        0.5 * (self.components()[1] + 1.0)
    }
}

/// `Ω = sqrt((μ0 b/ħ)² + (μ0 B3/ħ - ω/2)²)`.
pub fn rabi_frequency(p: &EMParams) -> f64 {
    ((p.mu0 * p.b / p.hbar).powi(2) + (p.mu0 * p.b3 / p.hbar - 0.5 * p.omega).powi(2)).sqrt()
}

/// Period `π/Ω` of `P₊ = a sin²(Ωt)`.
pub fn rabi_period(p: &EMParams) -> f64 {
    std::f64::consts::PI / rabi_frequency(p)
}

/// Amplitude `(μ0 b/(ħΩ))²` for which the closed-form trajectory stays pure.
pub fn pure_amplitude(p: &EMParams) -> f64 {
    (p.mu0 * p.b / (p.hbar * rabi_frequency(p))).powi(2)
}

/// Closed-form `(γ0, γ1, γ2)(t)` of the trajectory with `P₊ = a sin²(Ωt)`.
pub fn resonance_analytic(p: &EMParams, a: f64, t: f64) -> Result<[f64; 3]> {
    p.validate()?;
    if p.mu0 * p.b == 0.0 {
        return Err(Error::InvalidParameter("the closed form needs mu0·b != 0".into()));
    }
    if !(a <= 1.0) {
        return Err(Error::InvalidParameter(format!("amplitude must not exceed 1, got {a}")));
    }
    let denom = 2.0 * p.mu0 * p.b3 - p.hbar * p.omega;
    let scale = (2.0 * p.mu0 * p.b3).abs().max((p.hbar * p.omega).abs()).max(f64::MIN_POSITIVE);
    let detuned = if denom.abs() <= 1e-12 * scale {
        if (a - 1.0).abs() > 1e-12 {
            return Err(Error::ResonantDenominator { a });
        }
        0.0
    } else {
        2.0 * p.mu0 * p.b * (a - 1.0) / denom
    };
    let big = rabi_frequency(p);
    let delta = 2.0 * p.mu0 * p.b3 / p.hbar - p.omega;
    let k = a * p.hbar / (2.0 * p.mu0 * p.b);
    let (s2, c2) = (2.0 * big * t).sin_cos();
    let (sw, cw) = (p.omega * t).sin_cos();
    let g0 = k * (delta * c2 * cw - 2.0 * big * s2 * sw) + detuned * cw;
    let g1 = 2.0 * a * (big * t).sin().powi(2) - 1.0;
    let g2 = -k * (delta * c2 * sw + 2.0 * big * s2 * cw) - detuned * sw;
    Ok([g0, g1, g2])
}

/// Initial state of the closed-form family at `t = 0`.
pub fn resonance_initial(p: &EMParams, a: f64) -> Result<GammaState> {
    Ok(GammaState::from_components(resonance_analytic(p, a, 0.0)?))
}

/// Sampled trajectory of `(γ0, γ1, γ2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResonanceRun {
    pub params: EMParams,
    pub dt: f64,
    pub times: Vec<f64>,
    pub components: Vec<[f64; 3]>,
}

impl ResonanceRun {
    pub fn p_plus(&self) -> Vec<f64> {
        self.components.iter().map(|g| 0.5 * (g[1] + 1.0)).collect()
    }

    pub fn states(&self) -> Vec<GammaState> {
        self.components.iter().map(|g| GammaState::from_components(*g)).collect()
    }

    /// Largest component deviation from [`resonance_analytic`] with amplitude `a`.
    pub fn max_deviation(&self, a: f64) -> Result<f64> {
        let mut worst = 0.0f64;
        for (t, g) in self.times.iter().zip(&self.components) {
            let want = resonance_analytic(&self.params, a, *t)?;
            for j in 0..3 {
                worst = worst.max((g[j] - want[j]).abs());
            }
        }
        Ok(worst)
    }

    /// Largest drift of `γ0² + γ1² + γ2²` from its initial value.
    pub fn norm_drift(&self) -> f64 {
        let n = |g: &[f64; 3]| g.iter().map(|v| v * v).sum::<f64>();
        let n0 = self.components.first().map(n).unwrap_or(0.0);
        self.components.iter().map(|g| (n(g) - n0).abs()).fold(0.0, f64::max)
    }
}

fn rhs(p: &EMParams, t: f64, g: [f64; 3]) -> [f64; 3] {
    let k = 2.0 * p.mu0 / p.hbar;
    let (s, c) = (p.omega * t).sin_cos();
    [
        k * (p.b * g[1] * s + p.b3 * g[2]),
        -k * p.b * (g[0] * s + g[2] * c),
        -k * (p.b3 * g[0] - p.b * g[1] * c),
    ]
}

/// Fixed-step RK4 for the spin equations of motion, sampled at every step.
pub fn resonance_integrate(p: &EMParams, initial: &GammaState, t_end: f64, dt: f64) -> Result<ResonanceRun> {
    p.validate()?;
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("need dt > 0 and t_end >= 0, got dt = {dt}, t_end = {t_end}")));
    }
    let big = rabi_frequency(p);
    if dt * big > MAX_STEP {
        return Err(Error::StepTooLarge(dt * big));
    }
    let steps = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut components = Vec::with_capacity(steps + 1);
    let mut g = initial.components();
    times.push(0.0);
    components.push(g);
    let axpy = |a: [f64; 3], s: f64, b: [f64; 3]| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
    for i in 0..steps {
        let t = i as f64 * dt;
        let k1 = rhs(p, t, g);
        let k2 = rhs(p, t + 0.5 * dt, axpy(g, 0.5 * dt, k1));
        let k3 = rhs(p, t + 0.5 * dt, axpy(g, 0.5 * dt, k2));
        let k4 = rhs(p, t + dt, axpy(g, dt, k3));
        for j in 0..3 {
            g[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        times.push((i + 1) as f64 * dt);
        components.push(g);
    }
    Ok(ResonanceRun {
        params: *p,
        dt,
        times,
        components,
    })
}

/// Max over interior samples of `|ζ' + i(2μ0B3/ħ)ζ - i(2μ0b/ħ)γ1 e^{-iωt}|`, with
/// `ζ = γ0 + iγ2` and `ζ'` from the five-point central difference.
pub fn zeta_residual(run: &ResonanceRun) -> f64 {
    let p = &run.params;
    let zeta = |g: &[f64; 3]| C64::new(g[0], g[2]);
    let i = C64::new(0.0, 1.0);
    let mut worst = 0.0f64;
    let z: Vec<C64> = run.components.iter().map(zeta).collect();
    for w in 2..z.len().saturating_sub(2) {
        let dz = (z[w - 2] - 8.0 * z[w - 1] + 8.0 * z[w + 1] - z[w + 2]) / (12.0 * run.dt);
        let g = &run.components[w];
        let r = dz + i * (2.0 * p.mu0 * p.b3 / p.hbar) * z[w]
            - i * (2.0 * p.mu0 * p.b / p.hbar) * g[1] * C64::cis(-p.omega * run.times[w]);
        worst = worst.max(r.norm());
    }
    worst
}

/// Rabi frequency and amplitude read off the maxima of `P₊`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RabiFit {
    pub omega: f64,
    pub amplitude: f64,
    pub peak_times: Vec<f64>,
    pub peak_values: Vec<f64>,
}

/// Locates the local maxima of `P₊` by parabolic interpolation and fits
/// `Ω = π / spacing` by least squares on the peak times.
pub fn fit_rabi(run: &ResonanceRun) -> Result<RabiFit> {
    let pp = run.p_plus();
    let mut peak_times = Vec::new();
    let mut peak_values = Vec::new();
    for i in 1..pp.len().saturating_sub(1) {
        let (a, b, c) = (pp[i - 1], pp[i], pp[i + 1]);
        if b > a && b >= c {
            let curv = a - 2.0 * b + c;
            let off = if curv != 0.0 { 0.5 * (a - c) / curv } else { 0.0 };
            let h = run.times[i + 1] - run.times[i];
            peak_times.push(run.times[i] + off * h);
            peak_values.push(b - 0.25 * (a - c) * off);
        }
    }
    if peak_times.len() < 2 {
        return Err(Error::InvalidParameter("trajectory has fewer than two P+ maxima".into()));
    }
    let n = peak_times.len() as f64;
    let mean_i = (n - 1.0) / 2.0;
    let mean_t = peak_times.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, t) in peak_times.iter().enumerate() {
        let x = i as f64 - mean_i;
        sxy += x * (t - mean_t);
        sxx += x * x;
    }
    let spacing = sxy / sxx;
    Ok(RabiFit {
        omega: std::f64::consts::PI / spacing,
        amplitude: peak_values.iter().sum::<f64>() / n,
        peak_times,
        peak_values,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PurityReport {
    pub is_pure: bool,
    /// `|γ0² + γ1² + γ2² - 1|`.
    pub defect: f64,
    /// `16 max |γ ∗ γ - γ/2|`, equal to `defect` for a valid state.
    pub star_defect: f64,
}

/// Purity of a qubit spin Wigner function, by the quadratic form and by `γ ∗ γ = γ/2`.
pub fn purity_check(g: &GammaState, kernel: &DiscreteKernel) -> Result<PurityReport> {
    let qubit = DiscreteKernel::qubit();
    kernel.check_dim(SpinDim::HALF)?;
    let off = kernel
        .values()
        .iter()
        .zip(qubit.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if off > 1e-12 {
        return Err(Error::InvalidKernel("the purity test needs the qubit kernel (-1)^{kl}".into()));
    }
    let defect = (g.components().iter().map(|v| v * v).sum::<f64>() - 1.0).abs();
    let sym = g.to_symbol();
    let sq = spin_star(&sym, &sym, kernel)?;
    let star_defect = 16.0 * sq.max_abs_diff(&sym.map(|v| v * 0.5));
    Ok(PurityReport {
        is_pure: defect < PURITY_TOL,
        defect,
        star_defect,
    })
}
