use std::f64::consts::PI;

use moyalspin::physics::{landau_normalization, landau_star_checks, rabi_period, resonance_initial, zeta_residual};
use moyalspin::special::{oscillator_state, oscillator_wigner};
use moyalspin::spin::{from_tilde, schwinger_ops, tilde_of};
use moyalspin::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{Scenario, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::output::{Check, Report, Table};

/// Identities that hold up to roundoff.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Violation size that counts as a genuine failure of an identity.
pub const VIOLATION_TOL: f64 = 1e-2;
pub const PARSEVAL_TOL: f64 = 1e-10;
pub const ANALYTIC_WIGNER_TOL: f64 = 1e-6;
pub const ORACLE_TOL: f64 = 1e-10;
pub const BRACKET_TOL: f64 = 1e-8;
pub const POLYNOMIAL_STAR_TOL: f64 = 1e-9;
pub const LANDAU_ODE_TOL: f64 = 1e-9;
pub const LANDAU_TRANSPORT_TOL: f64 = 1e-5;
pub const LANDAU_NORM_TOL: f64 = 1e-8;
pub const LANDAU_NORM_POINTS: usize = 801;
pub const TRAJECTORY_TOL: f64 = 1e-6;
pub const ZETA_TOL: f64 = 1e-5;
pub const DRIFT_TOL: f64 = 1e-8;
pub const RABI_REL_TOL: f64 = 1e-3;
pub const AMPLITUDE_TOL: f64 = 1e-6;

pub fn run(config: &ScenarioConfig) -> CliResult<Report> {
    let scenario = config.scenario;
    let compute = |source| CliError::Compute { scenario, source };
    let report = match scenario {
        Scenario::QuantizerCheck => quantizer_check(config),
        Scenario::Wigner => wigner(config),
        Scenario::StarCheck => star_check(config),
        Scenario::Landau => landau(config),
        Scenario::Resonance => resonance(config),
    };
    report.map_err(compute)
}

fn random_operator(rng: &mut ChaCha8Rng, dim: usize) -> SpinOperator {
    SpinOperator::from_fn(dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn check_table(checks: &[Check]) -> Table {
    let mut t = Table::new(&["check", "value", "tolerance", "passed"]);
    for c in checks {
        t.push(vec![json!(c.name), json!(c.value), json!(c.tolerance), json!(c.passed)]);
    }
    t
}

fn quantizer_check(config: &ScenarioConfig) -> moyalspin::Result<Report> {
    let kernel = config.kernel().expect("validated");
    let s = kernel.dim();
    let d = s.dim();
    let di = d as i64;
    let one = SpinOperator::identity(d);
    let (v, r) = schwinger_ops(s);
    let w1 = C64::cis(2.0 * PI / d as f64);
    let mut checks = Vec::new();

    let cyclic = v.pow(d as u32).max_abs_diff(&one).max(r.pow(d as u32).max_abs_diff(&one));
    checks.push(Check::within("clock_shift_cyclic", cyclic, ALGEBRA_TOL));
    let weyl = (&r * &v).max_abs_diff(&(&v * &r).scale(w1));
    checks.push(Check::within("clock_shift_commutation", weyl, ALGEBRA_TOL));

    let (mut adjoint, mut unitary, mut trace, mut orth, mut compose) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for k in 0..di {
        for l in 0..di {
            let dkl = disp_d(s, k, l);
            adjoint = adjoint.max(dkl.adjoint().max_abs_diff(&disp_d(s, -k, -l)));
            unitary = unitary.max((&dkl * &dkl.adjoint()).max_abs_diff(&one));
            let want = if k == 0 && l == 0 { d as f64 } else { 0.0 };
            trace = trace.max((dkl.trace() - want).norm());
            for k2 in 0..di {
                for l2 in 0..di {
                    let other = disp_d(s, k2, l2);
                    let want = if (k, l) == (k2, l2) { d as f64 } else { 0.0 };
                    orth = orth.max((dkl.trace_product(&other.adjoint()) - want).norm());
                    let phase = C64::cis(PI * (k * l2 - l * k2) as f64 / d as f64);
                    let lhs = &dkl * &other;
                    compose = compose.max(lhs.max_abs_diff(&disp_d(s, k + k2, l + l2).scale(phase)));
                }
            }
        }
    }
    checks.push(Check::within("displacement_adjoint", adjoint, ALGEBRA_TOL));
    checks.push(Check::within("displacement_unitary", unitary, ALGEBRA_TOL));
    checks.push(Check::within("displacement_composition", compose, ALGEBRA_TOL));
    checks.push(Check::within("displacement_trace", trace, ALGEBRA_TOL));
    checks.push(Check::within("displacement_orthogonality", orth, ALGEBRA_TOL));

    let q = spin_quantizer(&kernel);
    let (mut herm, mut unit_trace, mut overlap) = (0.0f64, 0.0f64, 0.0f64);
    let mut sum = SpinOperator::zeros(d);
    for m in 0..d {
        for n in 0..d {
            let w = q.get(m, n);
            herm = herm.max(w.max_abs_diff(&w.adjoint()));
            unit_trace = unit_trace.max((w.trace() - 1.0).norm());
            sum = &sum + w;
            for m2 in 0..d {
                for n2 in 0..d {
                    let want = if (m, n) == (m2, n2) { d as f64 } else { 0.0 };
                    overlap = overlap.max((w.trace_product(q.get(m2, n2)) - want).norm());
                }
            }
        }
    }
    checks.push(Check::within("quantizer_hermitian", herm, ALGEBRA_TOL));
    checks.push(Check::within("quantizer_unit_trace", unit_trace, ALGEBRA_TOL));
    let completeness = sum.max_abs_diff(&one.scale(C64::new(d as f64, 0.0)));
    checks.push(Check::within("quantizer_completeness", completeness, ALGEBRA_TOL));
    let unimodular = kernel.is_unimodular(ALGEBRA_TOL);
    checks.push(if unimodular {
        Check::within("quantizer_overlap", overlap, ALGEBRA_TOL)
    } else {
        Check::exceeds("quantizer_overlap_violated", overlap, VIOLATION_TOL)
    });

    let mut rng = ChaCha8Rng::seed_from_u64(config.star_check.seed);
    let a = random_operator(&mut rng, d);
    let symbol = spin_symbol(&a, &kernel)?;
    let round_trip = spin_dequantize(&symbol, &kernel)?.max_abs_diff(&a);
    checks.push(Check::within("symbol_round_trip", round_trip, ALGEBRA_TOL));
    let h = (&a + &a.adjoint()).scale(C64::new(0.5, 0.0));
    let imag = spin_symbol(&h, &kernel)?.values().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    checks.push(Check::within("hermitian_symbol_real", imag, ALGEBRA_TOL));

    let mut report = Report {
        table: check_table(&checks),
        checks,
        ..Report::default()
    };
    report.result("spin_dim", d);
    report.result("unimodular_kernel", unimodular);
    Ok(report)
}

fn wigner(config: &ScenarioConfig) -> moyalspin::Result<Report> {
    let kernel = config.kernel().expect("validated");
    let grid = config.grid().expect("validated");
    let s = kernel.dim();
    let w = &config.wigner;
    let mass = config.physics.m0;
    let hbar = grid.hbar();
    let level = |axis: usize| if axis == 0 { w.level } else { 0 };
    let psi = SpinorField::from_fn(grid, s, |n, q| {
        if n != w.spin_state {
            return C64::new(0.0, 0.0);
        }
        let amp: f64 = q
            .iter()
            .enumerate()
            .map(|(axis, &x)| oscillator_state(level(axis), mass, w.frequency, hbar, x))
            .product();
        C64::new(amp, 0.0)
    });
    let lattice_norm = psi.norm_sq();
    let boundary = psi.boundary_mass_fraction();
    let psi = psi.normalized()?;
    let field = full_wigner(&HybridState::pure(psi)?, &kernel)?;

    let basis = SpinOperator::from_fn(s.dim(), |i, j| {
        C64::new(if i == w.spin_state && j == w.spin_state { 1.0 } else { 0.0 }, 0.0)
    });
    let spin_part = spin_wigner(&basis, &kernel)?;

    let pts = grid.points();
    let dim = s.dim();
    let d = grid.d();
    let mut analytic_err = 0.0f64;
    let mut columns: Vec<String> = (0..d).map(|a| format!("q{a}")).collect();
    columns.extend((0..d).map(|a| format!("p{a}")));
    for m in 0..dim {
        for n in 0..dim {
            columns.push(format!("w_{m}_{n}"));
        }
    }
    let mut table = Table {
        columns,
        rows: Vec::with_capacity(pts * pts),
    };
    for x in 0..pts {
        let q = grid.coords(x);
        for k in 0..pts {
            let p = grid.momentum_coords(k);
            let continuous: f64 = (0..d)
                .map(|a| oscillator_wigner(level(a), mass, w.frequency, hbar, p[a], q[a]))
                .product();
            let mut row: Vec<serde_json::Value> = q.iter().chain(&p).map(|v| json!(v)).collect();
            for m in 0..dim {
                for n in 0..dim {
                    let value = field.get(m, n, k, x);
                    let want = continuous * spin_part.get(m, n).re;
                    analytic_err = analytic_err.max((value - want).abs());
                    row.push(json!(value));
                }
            }
            table.push(row);
        }
    }

    let marg = marginals(&field);
    let spin_err = (0..dim)
        .map(|n| (marg.n_distribution[n] - if n == w.spin_state { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    let checks = vec![
        Check::within("probability_total", (field.total() - 1.0).abs(), PARSEVAL_TOL),
        Check::within("spin_marginal", spin_err, PARSEVAL_TOL),
        Check::within("oscillator_wigner", analytic_err, ANALYTIC_WIGNER_TOL),
    ];
    let mut report = Report {
        checks,
        table,
        ..Report::default()
    };
    report.result("lattice_norm_before_normalization", lattice_norm);
    report.result("boundary_mass_fraction", boundary);
    report.result("n_distribution", &marg.n_distribution);
    report.result("m_distribution", &marg.m_distribution);
    Ok(report)
}

fn star_check(config: &ScenarioConfig) -> moyalspin::Result<Report> {
    let kernel = config.kernel().expect("validated");
    let grid = config.grid().expect("validated");
    let d = grid.d();
    let hbar = grid.hbar();
    let mut checks = Vec::new();

    let mut commutator = 0.0f64;
    for axis in 0..d {
        let q = PhaseFunction::from_fn(grid, Extension::Polynomial, |_, q| C64::new(q[axis], 0.0));
        let p = PhaseFunction::from_fn(grid, Extension::Polynomial, |p, _| C64::new(p[axis], 0.0));
        let qp = moyal_star(&q, &p, StarOrder::default())?;
        let pq = moyal_star(&p, &q, StarOrder::default())?;
        let comm = qp.zip_with(&pq, |a, b| a - b - C64::new(0.0, hbar))?;
        commutator = commutator.max(comm.max_abs());
    }
    checks.push(Check::within("canonical_commutator", commutator, POLYNOMIAL_STAR_TOL));

    let widths = (grid.n_points() as f64 / PI).sqrt();
    let (sp, sq) = (grid.dp() * widths, grid.dq() * widths);
    let bump = |p: &[f64], q: &[f64], shift: f64| -> f64 {
        let e: f64 = p
            .iter()
            .zip(q)
            .map(|(a, b)| ((a - shift * sp) / sp).powi(2) + ((b + shift * sq) / sq).powi(2))
            .sum();
        (-e).exp()
    };
    let f = PhaseFunction::from_fn(grid, Extension::Periodic, |p, q| C64::new(bump(p, q, 0.0), 0.0));
    let g = PhaseFunction::from_fn(grid, Extension::Periodic, |p, q| C64::new(bump(p, q, 0.3), 0.0));
    let zero = moyal_star(&f, &g, StarOrder::Truncated(0))?;
    let pointwise = f.zip_with(&g, |a, b| a * b)?;
    checks.push(Check::within("order_zero_pointwise", zero.max_abs_diff(&pointwise), ALGEBRA_TOL));

    let fg = moyal_star(&f, &g, StarOrder::Truncated(1))?;
    let gf = moyal_star(&g, &f, StarOrder::Truncated(1))?;
    let slopes = |p: &[f64], q: &[f64], shift: f64| -> (Vec<f64>, Vec<f64>) {
        let dp = p.iter().map(|a| -2.0 * (a - shift * sp) / (sp * sp)).collect();
        let dq = q.iter().map(|b| -2.0 * (b + shift * sq) / (sq * sq)).collect();
        (dp, dq)
    };
    let bracket = PhaseFunction::from_fn(grid, Extension::Periodic, |p, q| {
        let (fp, fq) = slopes(p, q, 0.0);
        let (gp, gq) = slopes(p, q, 0.3);
        let poisson: f64 = (0..d).map(|a| fq[a] * gp[a] - fp[a] * gq[a]).sum();
        C64::new(0.0, 0.5 * hbar * poisson * bump(p, q, 0.0) * bump(p, q, 0.3))
    });
    let antisymmetric = fg.zip_with(&gf, |a, b| 0.5 * (a - b))?;
    let bracket_err = antisymmetric.max_abs_diff(&bracket);
    checks.push(Check::within("order_one_poisson_bracket", bracket_err, BRACKET_TOL));

    let dim = kernel.dim().dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.star_check.seed);
    let (mut star_err, mut box_err, mut assoc_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..config.star_check.pairs {
        let a = random_operator(&mut rng, dim);
        let b = random_operator(&mut rng, dim);
        let c = random_operator(&mut rng, dim);
        let ab = &a * &b;
        let scale = ab.max_abs().max(1.0);
        let (fa, fb, fc) = (spin_symbol(&a, &kernel)?, spin_symbol(&b, &kernel)?, spin_symbol(&c, &kernel)?);
        let fab = spin_star(&fa, &fb, &kernel)?;
        star_err = star_err.max(spin_dequantize(&fab, &kernel)?.max_abs_diff(&ab) / scale);
        let t = boxtimes_discrete(&tilde_of(&a)?, &tilde_of(&b)?)?;
        box_err = box_err.max(from_tilde(&t).max_abs_diff(&ab) / scale);
        let left = spin_star(&fab, &fc, &kernel)?;
        let right = spin_star(&fa, &spin_star(&fb, &fc, &kernel)?, &kernel)?;
        assoc_err = assoc_err.max(left.max_abs_diff(&right) / left.max_abs().max(1.0));
    }
    checks.push(Check::within("spin_star_matrix_product", star_err, ORACLE_TOL));
    checks.push(Check::within("boxtimes_matrix_product", box_err, ORACLE_TOL));
    checks.push(Check::within("spin_star_associative", assoc_err, ORACLE_TOL));

    let mut report = Report {
        table: check_table(&checks),
        checks,
        ..Report::default()
    };
    report.result("pairs", config.star_check.pairs);
    Ok(report)
}

fn landau(config: &ScenarioConfig) -> moyalspin::Result<Report> {
    let mode = config.landau_mode().expect("validated");
    let params = mode.params;
    let energy = landau_energy(&mode);
    let residuals = landau_residuals(&mode);
    let normalization = landau_normalization(&mode, LANDAU_NORM_POINTS);
    let star_grid = GridSpec::new(2, 8, 4.0, params.hbar)?;
    let (square_defect, comm_defect) = landau_star_checks(&params, star_grid)?;

    let checks = vec![
        Check::within("phase_space_ode", residuals.ode, LANDAU_ODE_TOL),
        Check::within("transport", residuals.transport, LANDAU_TRANSPORT_TOL),
        Check::within("momentum_eigen", residuals.eigen_p, 0.0),
        Check::within("normalization", (normalization - 1.0).abs(), LANDAU_NORM_TOL),
        Check::within("kinetic_momentum_square", square_defect, POLYNOMIAL_STAR_TOL),
        Check::within("cyclic_momentum_commutes", comm_defect, POLYNOMIAL_STAR_TOL),
    ];

    let n = config.grid.n_points;
    let w0 = params.omega0();
    let h_plot = params.hbar * w0 * (2.0 * f64::from(mode.n) + 10.0);
    let q_max = (2.0 * h_plot / params.m0).sqrt() / w0;
    let p_max = (2.0 * params.m0 * h_plot).sqrt();
    let mut table = Table::new(&["p2", "q2", "rho"]);
    for j in 0..n {
        let q2 = mode.centre() + (2.0 * j as f64 / n as f64 - 1.0) * q_max;
        for k in 0..n {
            let p2 = (2.0 * k as f64 / n as f64 - 1.0) * p_max;
            table.push(vec![json!(p2), json!(q2), json!(landau_wigner_reduced(&mode, p2, q2))]);
        }
    }

    let mut report = Report {
        checks,
        table,
        ..Report::default()
    };
    report.result("energy", energy);
    report.result("omega0", w0);
    report.result("centre_q2", mode.centre());
    report.result("spin_vector", mode.spin_vector());
    report.result("residuals", residuals);
    report.result("normalization", normalization);
    Ok(report)
}

fn resonance(config: &ScenarioConfig) -> moyalspin::Result<Report> {
    let p = config.physics();
    let a = config.amplitude();
    let (t_end, dt) = config.resonance_times();
    let run = resonance_integrate(&p, &resonance_initial(&p, a)?, t_end, dt)?;
    let big = rabi_frequency(&p);
    let deviation = run.max_deviation(a)?;
    let zeta = zeta_residual(&run);
    let drift = run.norm_drift();

    let mut checks = vec![
        Check::within("analytic_trajectory", deviation, TRAJECTORY_TOL),
        Check::within("complex_amplitude_equation", zeta, ZETA_TOL),
        Check::within("norm_drift", drift, DRIFT_TOL),
    ];
    let fit = fit_rabi(&run);
    if let Ok(fit) = &fit {
        checks.push(Check::within("rabi_frequency", (fit.omega - big).abs() / big, RABI_REL_TOL));
        checks.push(Check::within("rabi_amplitude", (fit.amplitude - a).abs(), AMPLITUDE_TOL));
    } else {
        checks.push(Check::within("rabi_frequency", f64::NAN, RABI_REL_TOL));
    }

    let mut table = Table::new(&["t", "gamma0", "gamma1", "gamma2", "p_plus"]);
    for (t, g) in run.times.iter().zip(&run.components) {
        table.push(vec![json!(t), json!(g[0]), json!(g[1]), json!(g[2]), json!(0.5 * (g[1] + 1.0))]);
    }

    let mut report = Report {
        checks,
        table,
        ..Report::default()
    };
    report.result("amplitude", a);
    report.result("rabi_frequency", big);
    report.result("rabi_period", rabi_period(&p));
    report.result("dt", dt);
    report.result("steps", run.times.len() - 1);
    if let Ok(fit) = fit {
        report.result("fitted_rabi_frequency", fit.omega);
        report.result("fitted_amplitude", fit.amplitude);
        report.result("peaks", fit.peak_times.len());
    }
    Ok(report)
}
