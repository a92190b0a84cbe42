use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::fft::{fft_all_axes, for_each_line, signed, Plans};
use super::stencil::fd_weights;
use super::{Extension, GridSpec, PhaseFunction};
use crate::{Error, Result, C64};

/// Truncation of the Moyal series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StarOrder {
    /// Terms up to `ħ^n`.
    Truncated(u32),
    /// All orders, as a twisted convolution of Fourier coefficients.
    Exact,
}

impl Default for StarOrder {
    fn default() -> Self {
        StarOrder::Truncated(2)
    }
}

const STENCIL_POINTS: usize = 6;
const JUMP_ORDERS: usize = 4;

/// Differentiation and shifting along one lattice axis.
struct LineOps {
    n: usize,
    h: f64,
    period: f64,
    plans: Plans,
    left: Vec<Vec<f64>>,
    right: Vec<Vec<f64>>,
    jumps: usize,
}

impl LineOps {
    fn new(n: usize, h: f64) -> Self {
        let m = STENCIL_POINTS.min(n);
        let jumps = JUMP_ORDERS.min(m - 1);
        let xl: Vec<f64> = (0..m).map(|j| j as f64).collect();
        let xr: Vec<f64> = (0..m).map(|j| j as f64 - m as f64).collect();
        Self {
            n,
            h,
            period: n as f64 * h,
            plans: Plans::new(n),
            left: fd_weights(0.0, &xl, jumps),
            right: fd_weights(0.0, &xr, jumps),
            jumps,
        }
    }

    fn kappa(&self, j: usize) -> f64 {
        2.0 * PI * signed(j, self.n) as f64 / self.period
    }

    /// Coefficients `b_c` of `P(t) = Σ_{c=1}^{D} b_c (t/period)^c` whose derivative
    /// jumps across the seam match those of the line.
    fn seam_polynomial(&self, line: &[C64]) -> Vec<C64> {
        let m = self.left[0].len();
        let d = self.jumps;
        let mut jump = vec![C64::new(0.0, 0.0); d];
        for (i, ji) in jump.iter_mut().enumerate() {
            let l: C64 = (0..m).map(|j| line[j] * self.left[i][j]).sum();
            let r: C64 = (0..m).map(|j| line[self.n - m + j] * self.right[i][j]).sum();
            *ji = (r - l) / self.h.powi(i as i32) * self.period.powi(i as i32);
        }
        let mut b = vec![C64::new(0.0, 0.0); d + 1];
        for i in (0..d).rev() {
            let mut rhs = jump[i];
            for c in i + 2..=d {
                rhs -= b[c] * falling(c, i);
            }
            b[i + 1] = rhs / falling(i + 1, i);
        }
        b
    }

    /// `r`-th derivative of `P` at `u = t/period`.
    fn poly_derivative(&self, b: &[C64], r: u32, u: f64) -> C64 {
        let r = r as usize;
        let mut acc = C64::new(0.0, 0.0);
        for (c, bc) in b.iter().enumerate().skip(r.max(1)) {
            acc += bc * falling(c, r) * u.powi((c - r) as i32);
        }
        acc / self.period.powi(r as i32)
    }

    fn differentiate(&self, line: &mut [C64], r: u32, ext: Extension, scratch: &mut [C64]) {
        if r == 0 {
            return;
        }
        let b = match ext {
            Extension::Periodic => None,
            Extension::Polynomial => {
                let b = self.seam_polynomial(line);
                for (j, v) in line.iter_mut().enumerate() {
                    *v -= self.poly_derivative(&b, 0, j as f64 / self.n as f64);
                }
                Some(b)
            }
        };
        self.plans.forward.process_with_scratch(line, scratch);
        let n = self.n;
        for (j, v) in line.iter_mut().enumerate() {
            let factor = if j == n / 2 && r % 2 == 1 {
                C64::new(0.0, 0.0)
            } else {
                C64::new(0.0, self.kappa(j)).powu(r)
            };
            *v *= factor / n as f64;
        }
        self.plans.inverse.process_with_scratch(line, scratch);
        if let Some(b) = b {
            for (j, v) in line.iter_mut().enumerate() {
                *v += self.poly_derivative(&b, r, j as f64 / n as f64);
            }
        }
    }

    /// Replaces `f(x)` by `f(x - s)`.
    fn shift(&self, line: &mut [C64], s: f64, ext: Extension, scratch: &mut [C64]) {
        let n = self.n;
        let b = match ext {
            Extension::Periodic => None,
            Extension::Polynomial => {
                let b = self.seam_polynomial(line);
                for (j, v) in line.iter_mut().enumerate() {
                    *v -= self.poly_derivative(&b, 0, j as f64 / n as f64);
                }
                Some(b)
            }
        };
        self.plans.forward.process_with_scratch(line, scratch);
        for (j, v) in line.iter_mut().enumerate() {
            let k = self.kappa(j);
            let factor = if j == n / 2 {
                C64::new((k * s).cos(), 0.0)
            } else {
                C64::cis(-k * s)
            };
            *v *= factor / n as f64;
        }
        self.plans.inverse.process_with_scratch(line, scratch);
        if let Some(b) = b {
            for (j, v) in line.iter_mut().enumerate() {
                let u = (j as f64 * self.h - s) / self.period;
                *v += self.poly_derivative(&b, 0, u);
            }
        }
    }
}

fn falling(c: usize, r: usize) -> f64 {
    ((c - r + 1)..=c).map(|x| x as f64).product()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Axis `t` of the rank-`2d` phase array: `t < d` are momentum axes, the rest positions.
fn axis_spacing(grid: &GridSpec, t: usize) -> f64 {
    if t < grid.d() {
        grid.dp()
    } else {
        grid.dq()
    }
}

fn derivative_values(f: &PhaseFunction, orders: &[u32], ops: &[LineOps]) -> Vec<C64> {
    let grid = f.grid();
    let rank = 2 * grid.d();
    let mut data = f.values().to_vec();
    for (t, &r) in orders.iter().enumerate() {
        if r == 0 {
            continue;
        }
        let op = &ops[t];
        let mut scratch = vec![C64::new(0.0, 0.0); op.plans.forward.get_inplace_scratch_len()];
        for_each_line(&mut data, grid.n_points(), rank, t, |_, line| {
            op.differentiate(line, r, f.extension(), &mut scratch)
        });
    }
    data
}

fn line_ops(grid: &GridSpec) -> Vec<LineOps> {
    (0..2 * grid.d())
        .map(|t| LineOps::new(grid.n_points(), axis_spacing(grid, t)))
        .collect()
}

/// Partial derivative `∂_p^α ∂_q^β f`; `orders` lists the momentum axes first,
/// then the position axes.
pub fn derivative(f: &PhaseFunction, orders: &[u32]) -> Result<PhaseFunction> {
    let grid = *f.grid();
    if orders.len() != 2 * grid.d() {
        return Err(Error::InvalidParameter(format!(
            "expected {} derivative orders, got {}",
            2 * grid.d(),
            orders.len()
        )));
    }
    let values = derivative_values(f, orders, &line_ops(&grid));
    PhaseFunction::new(grid, values, f.extension())
}

/// Multi-indices `(a, b) ∈ N^d x N^d` with `|a| + |b| ≤ order`.
fn multi_indices(d: usize, order: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, slots: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == slots {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=left {
            prefix.push(v);
            rec(prefix, slots, left - v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), 2 * d, order, &mut out);
    out
}

/// Moyal product `f exp(iħ/2 (←∂_q →∂_p - ←∂_p →∂_q)) g`.
///
/// `Truncated(n)` keeps terms up to `ħ^n`, with derivatives taken spectrally (after a
/// seam correction for [`Extension::Polynomial`] inputs). `Exact` evaluates the full
/// product as a twisted convolution of the Fourier coefficients; it needs
/// periodic inputs on a one-dimensional grid.
pub fn moyal_star(f: &PhaseFunction, g: &PhaseFunction, order: StarOrder) -> Result<PhaseFunction> {
    f.grid().check_same(g.grid())?;
    let grid = *f.grid();
    let ext = if f.extension() == Extension::Polynomial && g.extension() == Extension::Polynomial {
        Extension::Polynomial
    } else {
        Extension::Periodic
    };
    match order {
        StarOrder::Truncated(n) => truncated(f, g, n, ext),
        StarOrder::Exact => {
            if grid.d() != 1 {
                return Err(Error::InvalidParameter(
                    "the all-orders product is available for d = 1 only".into(),
                ));
            }
            if f.extension() != Extension::Periodic || g.extension() != Extension::Periodic {
                return Err(Error::InvalidParameter(
                    "the all-orders product needs periodic inputs".into(),
                ));
            }
            let values = twisted_convolution(f.values(), g.values(), grid.n_points());
            PhaseFunction::new(grid, values, ext)
        }
    }
}

fn truncated(f: &PhaseFunction, g: &PhaseFunction, order: u32, ext: Extension) -> Result<PhaseFunction> {
    let grid = *f.grid();
    let d = grid.d();
    let ops = line_ops(&grid);
    let half = 0.5 * grid.hbar();
    let mut cache_f: HashMap<Vec<u32>, Vec<C64>> = HashMap::new();
    let mut cache_g: HashMap<Vec<u32>, Vec<C64>> = HashMap::new();
    let mut out = vec![C64::new(0.0, 0.0); f.values().len()];
    for idx in multi_indices(d, order) {
        let (a, b) = idx.split_at(d);
        let mut coef = C64::new(1.0, 0.0);
        for j in 0..d {
            coef *= C64::new(0.0, half).powu(a[j]) / factorial(a[j]);
            coef *= C64::new(0.0, -half).powu(b[j]) / factorial(b[j]);
        }
        let of: Vec<u32> = b.iter().chain(a).copied().collect();
        let og: Vec<u32> = a.iter().chain(b).copied().collect();
        let df = cache_f
            .entry(of.clone())
            .or_insert_with(|| derivative_values(f, &of, &ops));
        let df = df.clone();
        let dg = cache_g.entry(og.clone()).or_insert_with(|| derivative_values(g, &og, &ops));
        for ((o, x), y) in out.iter_mut().zip(&df).zip(dg.iter()) {
            *o += coef * x * y;
        }
    }
    PhaseFunction::new(grid, out, ext)
}

fn twisted_convolution(f: &[C64], g: &[C64], n: usize) -> Vec<C64> {
    let plans = Plans::new(n);
    let mut ff = f.to_vec();
    let mut gg = g.to_vec();
    fft_all_axes(&mut ff, 2, &plans.forward);
    fft_all_axes(&mut gg, 2, &plans.forward);
    let ni = n as i64;
    let half = ni / 2;
    let bin = |u: i64| u.rem_euclid(ni) as usize;
    let norm = 1.0 / (n * n) as f64;
    let roots: Vec<C64> = (0..n).map(|j| C64::cis(2.0 * PI * j as f64 / n as f64)).collect();
    let rows: Vec<Vec<C64>> = (-half..half)
        .into_par_iter()
        .map(|wp| {
            let mut row = vec![C64::new(0.0, 0.0); n];
            for (wq_i, wq) in (-half..half).enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for up in -half..half {
                    let vp = wp - up;
                    if vp < -half || vp >= half {
                        continue;
                    }
                    for uq in -half..half {
                        let vq = wq - uq;
                        if vq < -half || vq >= half {
                            continue;
                        }
                        let e = (up * vq - uq * vp).rem_euclid(ni) as usize;
                        acc += ff[bin(up) * n + bin(uq)] * gg[bin(vp) * n + bin(vq)] * roots[e];
                    }
                }
                row[wq_i] = acc * norm;
            }
            row
        })
        .collect();
    let mut h = vec![C64::new(0.0, 0.0); n * n];
    for (i, wp) in (-half..half).enumerate() {
        for (j, wq) in (-half..half).enumerate() {
            h[bin(wp) * n + bin(wq)] = rows[i][j];
        }
    }
    fft_all_axes(&mut h, 2, &plans.inverse);
    h.iter().map(|v| v * norm).collect()
}

/// Free flight `ρ(p, q - p t/m₀)`, evaluated by Fourier interpolation along each
/// position axis.
pub fn free_evolution(rho: &PhaseFunction, t: f64, m0: f64) -> Result<PhaseFunction> {
    if !(m0 > 0.0 && m0.is_finite()) {
        return Err(Error::InvalidParameter(format!("mass m0 = {m0} must be positive")));
    }
    if !t.is_finite() {
        return Err(Error::InvalidParameter("time must be finite".into()));
    }
    let grid = *rho.grid();
    let d = grid.d();
    let n = grid.n_points();
    let momenta = grid.momenta();
    let mut data = rho.values().to_vec();
    if t != 0.0 {
        let op = LineOps::new(n, grid.dq());
        let mut scratch = vec![C64::new(0.0, 0.0); op.plans.forward.get_inplace_scratch_len()];
        for j in 0..d {
            for_each_line(&mut data, n, 2 * d, d + j, |ix, line| {
                let s = momenta[ix[j]] * t / m0;
                op.shift(line, s, rho.extension(), &mut scratch);
            });
        }
    }
    PhaseFunction::new(grid, data, rho.extension())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> GridSpec {
        GridSpec::line(n, 20.0, 1.0).unwrap()
    }

    fn poly(g: GridSpec, f: impl Fn(f64, f64) -> f64) -> PhaseFunction {
        PhaseFunction::from_fn(g, Extension::Polynomial, |p, q| C64::new(f(p[0], q[0]), 0.0))
    }

    fn smooth(g: GridSpec, f: impl Fn(f64, f64) -> C64) -> PhaseFunction {
        PhaseFunction::from_fn(g, Extension::Periodic, |p, q| f(p[0], q[0]))
    }

    #[test]
    fn canonical_commutator() {
        let g = grid(64);
        let q = poly(g, |_, q| q);
        let p = poly(g, |p, _| p);
        let qp = moyal_star(&q, &p, StarOrder::Truncated(2)).unwrap();
        let pq = moyal_star(&p, &q, StarOrder::Truncated(2)).unwrap();
        for (a, b) in qp.values().iter().zip(pq.values()) {
            assert!((a - b - C64::new(0.0, 1.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn polynomial_derivatives_are_exact() {
        let g = grid(32);
        let f = poly(g, |p, q| 1.0 + q * q * q - 0.5 * p * q * q + 0.1 * q.powi(4));
        let dq = derivative(&f, &[0, 1]).unwrap();
        let dpq = derivative(&f, &[1, 2]).unwrap();
        for (k, p) in g.momenta().iter().enumerate() {
            for (a, q) in g.positions().iter().enumerate() {
                let want = 3.0 * q * q - p * q + 0.4 * q.powi(3);
                assert!((dq.get(k, a).re - want).abs() < 1e-8 * (1.0 + want.abs()));
                assert!((dpq.get(k, a).re + 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn functions_of_q_multiply_pointwise() {
        let g = grid(64);
        let f = smooth(g, |_, q| C64::new((-(q * q) / 4.0).exp(), 0.0));
        let h = smooth(g, |_, q| C64::new((-(q - 1.0).powi(2)).exp(), 0.0));
        let prod = moyal_star(&f, &h, StarOrder::Truncated(4)).unwrap();
        for ((a, b), c) in prod.values().iter().zip(f.values()).zip(h.values()) {
            assert!((a - b * c).norm() < 1e-12);
        }
    }

    #[test]
    fn order_zero_is_pointwise() {
        let g = grid(32);
        let f = smooth(g, |p, q| C64::new((-(p * p + q * q) / 8.0).exp(), 0.0));
        let h = smooth(g, |p, q| C64::new((-(p * p) / 4.0 - q * q / 2.0).exp(), 0.0));
        let prod = moyal_star(&f, &h, StarOrder::Truncated(0)).unwrap();
        for ((a, b), c) in prod.values().iter().zip(f.values()).zip(h.values()) {
            assert!((a - b * c).norm() < 1e-15);
        }
    }

    #[test]
    fn first_order_bracket_is_poisson() {
        let g = grid(64);
        let fw = |p: f64, q: f64| (-p * p - (q - 0.5).powi(2) / 4.0).exp();
        let hw = |p: f64, q: f64| (-(p - 0.3).powi(2) - q * q / 4.0).exp();
        let f = smooth(g, |p, q| C64::new(fw(p, q), 0.0));
        let h = smooth(g, |p, q| C64::new(hw(p, q), 0.0));
        let fh = moyal_star(&f, &h, StarOrder::Truncated(1)).unwrap();
        let hf = moyal_star(&h, &f, StarOrder::Truncated(1)).unwrap();
        for (k, p) in g.momenta().iter().enumerate() {
            for (a, q) in g.positions().iter().enumerate() {
                let fq = -(q - 0.5) / 2.0 * fw(*p, *q);
                let fp = -2.0 * p * fw(*p, *q);
                let hq = -q / 2.0 * hw(*p, *q);
                let hp = -2.0 * (p - 0.3) * hw(*p, *q);
                let want = C64::new(0.0, 1.0) * (fq * hp - fp * hq);
                let got = fh.get(k, a) - hf.get(k, a);
                assert!((got - want).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn exact_product_of_plane_waves() {
        let g = GridSpec::line(16, 20.0, 1.0).unwrap();
        let (kp, kq) = (2.0 * PI * 2.0 / (16.0 * g.dp()), 2.0 * PI * 3.0 / g.length());
        let (lp, lq) = (-2.0 * PI / (16.0 * g.dp()), 2.0 * PI * 1.0 / g.length());
        let f = smooth(g, |p, q| C64::cis(kp * p + kq * q));
        let h = smooth(g, |p, q| C64::cis(lp * p + lq * q));
        let prod = moyal_star(&f, &h, StarOrder::Exact).unwrap();
        let phase = C64::cis(0.5 * g.hbar() * (kp * lq - kq * lp));
        for ((a, b), c) in prod.values().iter().zip(f.values()).zip(h.values()) {
            assert!((a - b * c * phase).norm() < 1e-12);
        }
    }

    #[test]
    fn exact_rejects_unsupported_inputs() {
        let g = grid(8);
        let f = poly(g, |_, q| q);
        assert!(moyal_star(&f, &f, StarOrder::Exact).is_err());
        let g2 = GridSpec::new(2, 4, 1.0, 1.0).unwrap();
        let h = PhaseFunction::from_fn(g2, Extension::Periodic, |_, _| C64::new(1.0, 0.0));
        assert!(moyal_star(&h, &h, StarOrder::Exact).is_err());
        assert!(matches!(moyal_star(&f, &h, StarOrder::Truncated(1)), Err(Error::GridMismatch(_))));
    }

    fn packet(g: GridSpec) -> PhaseFunction {
        smooth(g, |p, q| C64::new((-((q + 2.0).powi(2) + (p - 1.0).powi(2))).exp() / PI, 0.0))
    }

    #[test]
    fn free_evolution_moves_the_mean() {
        let g = grid(128);
        let rho = packet(g);
        let moments = |f: &PhaseFunction| {
            let (mut z, mut mq, mut mp) = (0.0, 0.0, 0.0);
            for (k, p) in g.momenta().iter().enumerate() {
                for (a, q) in g.positions().iter().enumerate() {
                    let v = f.get(k, a).re;
                    z += v;
                    mq += q * v;
                    mp += p * v;
                }
            }
            (z * g.cell(), mq / z, mp / z)
        };
        let (z0, q0, p0) = moments(&rho);
        assert!(free_evolution(&rho, 0.0, 1.0).unwrap().max_abs_diff(&rho) == 0.0);
        for t in [0.5, 1.5, 3.0] {
            let r = free_evolution(&rho, t, 2.0).unwrap();
            let (z, q, _) = moments(&r);
            assert!((z - z0).abs() < 1e-10);
            assert!((q - (q0 + p0 * t / 2.0)).abs() < 1e-8, "t = {t}: {q}");
        }
    }

    #[test]
    fn free_evolution_solves_transport() {
        let g = grid(128);
        let rho = packet(g);
        let (t, dt, m0) = (1.0, 1e-4, 1.5);
        let fwd = free_evolution(&rho, t + dt, m0).unwrap();
        let bwd = free_evolution(&rho, t - dt, m0).unwrap();
        let mid = free_evolution(&rho, t, m0).unwrap();
        let dq = derivative(&mid, &[0, 1]).unwrap();
        let mut res: f64 = 0.0;
        for (k, p) in g.momenta().iter().enumerate() {
            for a in 0..g.n_points() {
                let dt_rho = (fwd.get(k, a) - bwd.get(k, a)) / (2.0 * dt);
                res = res.max((dt_rho + dq.get(k, a) * (p / m0)).norm());
            }
        }
        assert!(res < 1e-6, "{res}");
    }

    #[test]
    fn polynomial_shift() {
        let g = grid(32);
        let f = poly(g, |p, q| q * q + p);
        let r = free_evolution(&f, 0.7, 1.0).unwrap();
        for (k, p) in g.momenta().iter().enumerate() {
            for (a, q) in g.positions().iter().enumerate() {
                let want = (q - p * 0.7).powi(2) + p;
                assert!((r.get(k, a).re - want).abs() < 1e-8 * (1.0 + want.abs()));
            }
        }
    }

    #[test]
    fn bad_mass() {
        let g = grid(8);
        assert!(free_evolution(&packet(g), 1.0, 0.0).is_err());
    }
}
