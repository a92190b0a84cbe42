//! Acceptance criteria 1-10, one PASS/FAIL line each.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use moyalspin::physics::{pure_amplitude, rabi_period, resonance_initial, zeta_residual, PURITY_TOL};
use moyalspin::special::{laguerre, oscillator_state};
use moyalspin::spin::{from_tilde, phase_ket, schwinger_ops, tilde_of};
use moyalspin::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn random_operator(rng: &mut ChaCha8Rng, dim: usize) -> SpinOperator {
    SpinOperator::from_fn(dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> nalgebra::DVector<C64> {
    let v = nalgebra::DVector::from_fn(dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

fn schwinger_algebra() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for dim in 2..=6 {
        let s = SpinDim::from_dim(dim).unwrap();
        let one = SpinOperator::identity(dim);
        let (v, r) = schwinger_ops(s);
        worst = worst.max(v.pow(dim as u32).max_abs_diff(&one));
        worst = worst.max(r.pow(dim as u32).max_abs_diff(&one));
        worst = worst.max((&r * &v).max_abs_diff(&(&v * &r).scale(C64::cis(2.0 * PI / dim as f64))));
        let di = dim as i64;
        for k in 0..di {
            for l in 0..di {
                let d = disp_d(s, k, l);
                worst = worst.max(d.adjoint().max_abs_diff(&disp_d(s, -k, -l)));
                worst = worst.max((&d * &d.adjoint()).max_abs_diff(&one));
                let tr = if k == 0 && l == 0 { dim as f64 } else { 0.0 };
                worst = worst.max((d.trace() - tr).norm());
                for k2 in 0..di {
                    for l2 in 0..di {
                        let want = if (k, l) == (k2, l2) { dim as f64 } else { 0.0 };
                        worst = worst.max((d.trace_product(&disp_d(s, k2, l2).adjoint()) - want).norm());
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-12 && elapsed < Duration::from_secs(1),
        format!("max error {worst:.3e} (< 1e-12), {:.3} s (< 1 s)", elapsed.as_secs_f64()),
    )
}

fn qubit_quantizer() -> Outcome {
    let k = kernel_make(SpinDim::HALF, KernelVariant::Cosine, FRAC_PI_4).unwrap();
    let q = spin_quantizer(&k);
    let mut worst = 0.0f64;
    for m in 0..2 {
        for n in 0..2 {
            let sign = |e: usize| if e % 2 == 0 { 1.0 } else { -1.0 };
            let want = (&(&(&SpinOperator::pauli(0) + &SpinOperator::pauli(1).scale(C64::new(sign(m), 0.0)))
                + &SpinOperator::pauli(2).scale(C64::new(sign(m + n), 0.0)))
                + &SpinOperator::pauli(3).scale(C64::new(sign(n), 0.0)))
                .scale(C64::new(0.5, 0.0));
            worst = worst.max(q.get(m, n).max_abs_diff(&want));
        }
    }
    outcome(worst < 1e-14, format!("max entry error {worst:.3e} (< 1e-14)"))
}

fn overlap_error(k: &DiscreteKernel) -> f64 {
    let q = spin_quantizer(k);
    let d = k.dim().dim();
    let mut worst = 0.0f64;
    for a in 0..d * d {
        for b in 0..d * d {
            let want = if a == b { d as f64 } else { 0.0 };
            worst = worst.max((q.get(a / d, a % d).trace_product(q.get(b / d, b % d)) - want).norm());
        }
    }
    worst
}

fn orthogonality_dichotomy() -> Outcome {
    let parity = overlap_error(&kernel_make(SpinDim::new(2), KernelVariant::ParityOdd, 0.0).unwrap());
    let cosine = overlap_error(&kernel_make(SpinDim::HALF, KernelVariant::Cosine, 0.3).unwrap());
    outcome(
        parity < 1e-12 && cosine >= 1e-2,
        format!("parity s=2 error {parity:.3e} (< 1e-12), cosine eps=0.3 violation {cosine:.3e} (>= 1e-2)"),
    )
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for dim in 2..=5 {
        let kernel = DiscreteKernel::default_for(SpinDim::from_dim(dim).unwrap()).unwrap();
        for _ in 0..100 {
            let a = random_operator(&mut rng, dim);
            let b = random_operator(&mut rng, dim);
            let ab = &a * &b;
            let direct = spin_symbol(&ab, &kernel).unwrap();
            let star = spin_star(&spin_symbol(&a, &kernel).unwrap(), &spin_symbol(&b, &kernel).unwrap(), &kernel).unwrap();
            worst = worst.max(star.max_abs_diff(&direct) / direct.max_abs());
            let boxed = from_tilde(&boxtimes_discrete(&tilde_of(&a).unwrap(), &tilde_of(&b).unwrap()).unwrap());
            worst = worst.max(boxed.max_abs_diff(&ab) / ab.max_abs());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-10 && elapsed < Duration::from_secs(5),
        format!("max relative error {worst:.3e} (< 1e-10), {:.3} s (< 5 s)", elapsed.as_secs_f64()),
    )
}

fn continuous_wigner() -> Outcome {
    let g = GridSpec::line(128, 20.0, 1.0).unwrap();
    let mut worst = 0.0f64;
    for n in 0..5u32 {
        let psi: Vec<C64> = g
            .positions()
            .iter()
            .map(|&q| C64::new(oscillator_state(n, 1.0, 1.0, 1.0, q), 0.0))
            .collect();
        let w = wigner_continuous(&psi, &psi, &g).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for (k, p) in g.momenta().iter().enumerate() {
            for (x, q) in g.positions().iter().enumerate() {
                let h = 0.5 * (p * p + q * q);
                let want = sign / PI * (-2.0 * h).exp() * laguerre(n, 0.0, 4.0 * h);
                worst = worst.max((w.get(k, x) - want).norm());
            }
        }
    }
    outcome(worst < 1e-6, format!("max abs error {worst:.3e} (< 1e-6)"))
}

fn landau_levels() -> Outcome {
    let mut energy_ok = true;
    let (mut ode, mut norm) = (0.0f64, 0.0f64);
    for (e0, b3, m0, p30) in [(-1.0, 2.0, 1.0, 1.0), (1.0, 1.0, 2.0, 0.5), (-2.0, 0.5, 0.5, 0.0)] {
        let params = EMParams {
            e0,
            b3,
            m0,
            ..EMParams::default()
        };
        for n in 0..=5u32 {
            for lambda0 in [1i8, -1] {
                let mode = LandauMode::new(n, lambda0, 0.25, p30, params).unwrap();
                let w0 = e0.abs() * b3 / (m0 * params.c);
                let want = params.hbar * w0 * (f64::from(n) + 0.5 - 0.5 * f64::from(lambda0) * e0.signum())
                    + p30 * p30 / (2.0 * m0);
                energy_ok &= landau_energy(&mode) == want;
                ode = ode.max(landau_residuals(&mode).ode);
                norm = norm.max((physics::landau_normalization(&mode, 801) - 1.0).abs());
            }
        }
    }
    outcome(
        energy_ok && ode < 1e-9 && norm < 1e-8,
        format!("energies exact: {energy_ok}, ODE residual {ode:.3e} (< 1e-9), normalization error {norm:.3e} (< 1e-8)"),
    )
}

fn magnetic_resonance() -> Outcome {
    let mut worst = 0.0f64;
    let mut freq_err = 0.0f64;
    let mut amp_err = f64::NAN;
    let mut zeta = 0.0f64;
    for omega in [2.0, 1.7, 2.6] {
        let p = EMParams {
            b: 0.5,
            omega,
            ..EMParams::default()
        };
        let a = pure_amplitude(&p);
        let t = rabi_period(&p);
        let run = resonance_integrate(&p, &resonance_initial(&p, a).unwrap(), 10.0 * t, t / 1000.0).unwrap();
        worst = worst.max(run.max_deviation(a).unwrap());
        zeta = zeta.max(zeta_residual(&run));
        let fit = fit_rabi(&run).unwrap();
        let big = rabi_frequency(&p);
        freq_err = freq_err.max((fit.omega - big).abs() / big);
        if omega == 2.0 {
            amp_err = (fit.amplitude - 1.0).abs();
        }
    }
    outcome(
        worst < 1e-6 && freq_err < 1e-3 && amp_err <= 1e-6 && zeta < 1e-5,
        format!(
            "max component error {worst:.3e} (< 1e-6), Rabi frequency error {:.3e}% (< 0.1%), resonant amplitude error {amp_err:.3e} (<= 1e-6), zeta residual {zeta:.3e}",
            100.0 * freq_err
        ),
    )
}

fn purity_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let k = DiscreteKernel::qubit();
    let mut agree = true;
    let mut worst_gap = 0.0f64;
    let mut classified = true;
    for pure in [true, false] {
        for _ in 0..50 {
            let rho = if pure {
                SpinOperator::projector(&random_unit(&mut rng, 2))
            } else {
                let w: f64 = rng.random_range(0.1..0.9);
                let a = SpinOperator::projector(&random_unit(&mut rng, 2)).scale(C64::new(w, 0.0));
                let b = SpinOperator::projector(&random_unit(&mut rng, 2)).scale(C64::new(1.0 - w, 0.0));
                &a + &b
            };
            let g = GammaState::from_symbol(&spin_wigner(&rho, &k).unwrap()).unwrap();
            let r = purity_check(&g, &k).unwrap();
            let by_star = r.star_defect < PURITY_TOL;
            let by_form = r.defect < PURITY_TOL;
            agree &= by_star == by_form && by_form == r.is_pure;
            worst_gap = worst_gap.max((r.defect - r.star_defect).abs());
            let purity = rho.trace_product(&rho).re;
            classified &= r.is_pure == ((purity - 1.0).abs() < 1e-10);
        }
    }
    outcome(
        agree && classified && worst_gap <= 1e-10,
        format!("booleans agree: {agree}, classification matches Tr rho^2: {classified}, max defect gap {worst_gap:.3e} (<= 1e-10)"),
    )
}

fn marginals_of_mixed_states() -> Outcome {
    let g = GridSpec::line(64, 18.0, 1.0).unwrap();
    let s = SpinDim::HALF;
    let kernel = DiscreteKernel::qubit();
    let q = spin_quantizer(&kernel);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let qs = g.positions();
    let pref = g.dq() / (2.0 * PI * g.hbar()).sqrt();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let rank = rng.random_range(1..=3);
        let weights: Vec<f64> = (0..rank).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let states: Vec<(f64, SpinorField)> = weights
            .iter()
            .map(|w| {
                let (q0, p0) = (rng.random_range(-1.5..1.5), rng.random_range(-0.6..0.6));
                let spatial: Vec<C64> = qs
                    .iter()
                    .map(|&x| C64::from_polar((-0.5 * (x - q0) * (x - q0)).exp(), p0 * x))
                    .collect();
                let chi = random_unit(&mut rng, 2);
                let psi = SpinorField::product(g, &spatial, chi.as_slice()).unwrap().normalized().unwrap();
                (w / total, psi)
            })
            .collect();
        let rho = HybridState::mixed(HybridOperator::mixture(&states).unwrap()).unwrap();
        let mg = marginals(&full_wigner(&rho, &kernel).unwrap());

        let mut position = vec![0.0; g.points()];
        let mut momentum = vec![0.0; g.points()];
        let mut spin_rho = SpinOperator::zeros(2);
        for (w, psi) in &states {
            for n in 0..2 {
                let comp = psi.component(n);
                for (x, a) in comp.iter().enumerate() {
                    position[x] += w * a.norm_sqr();
                }
                for (k, p) in g.momenta().iter().enumerate() {
                    let amp: C64 = qs.iter().zip(comp).map(|(x, a)| a * C64::cis(-x * p)).sum::<C64>() * pref;
                    momentum[k] += w * amp.norm_sqr();
                }
            }
            let block = SpinOperator::from_fn(2, |a, b| {
                psi.component(a).iter().zip(psi.component(b)).map(|(x, y)| x * y.conj()).sum::<C64>() * g.dq() * *w
            });
            spin_rho = &spin_rho + &block;
        }
        for (a, b) in mg.position.iter().zip(&position).chain(mg.momentum.iter().zip(&momentum)) {
            worst = worst.max((a - b).abs());
        }
        for n in 0..2 {
            worst = worst.max((mg.n_distribution[n] - spin_rho.get(n, n).re).abs());
            let phi = phase_ket(s, n as i64);
            let direct = (phi.adjoint() * spin_rho.matrix() * &phi)[(0, 0)].re;
            let via_quantizer: f64 = (0..2).map(|l| spin_rho.trace_product(q.get(n, l)).re).sum::<f64>() / 2.0;
            worst = worst.max((mg.m_distribution[n] - direct).abs());
            worst = worst.max((via_quantizer - direct).abs());
        }
    }
    outcome(worst < 1e-8, format!("max marginal error {worst:.3e} (< 1e-8) over 20 states"))
}

fn run_cli(dir: &Path, args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_moyalspin"))
        .current_dir(dir)
        .args(args)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn determinism() -> Outcome {
    let root = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 5] = [
        &["quantizer-check", "--spin-dim", "3", "--kernel", "parity"],
        &["wigner", "--level", "2"],
        &["star-check", "--pairs", "20"],
        &["landau", "--N", "2", "--lambda0", "-1", "--B3", "2", "--e0", "-1"],
        &["resonance", "--b", "0.5", "--omega", "1.8", "--periods", "3"],
    ];
    let mut mismatched = Vec::new();
    for (i, args) in runs.iter().enumerate() {
        let a = root.path().join(format!("a{i}"));
        let b = root.path().join(format!("b{i}"));
        fs::create_dir_all(&a).unwrap();
        fs::create_dir_all(&b).unwrap();
        let mut full = args.to_vec();
        full.extend(["--output", "run"]);
        if !run_cli(&a, &full) || !run_cli(&b, &full) {
            mismatched.push(format!("{} (run failed)", args[0]));
            continue;
        }
        for file in ["run.csv", "run.json"] {
            if fs::read(a.join(file)).ok() != fs::read(b.join(file)).ok() {
                mismatched.push(format!("{} {file}", args[0]));
            }
        }
    }
    outcome(
        mismatched.is_empty(),
        if mismatched.is_empty() {
            "5 scenarios, CSV and JSON byte-identical across runs".to_string()
        } else {
            format!("differences: {}", mismatched.join(", "))
        },
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Schwinger algebra", schwinger_algebra),
        ("qubit quantizer identity", qubit_quantizer),
        ("orthogonality dichotomy", orthogonality_dichotomy),
        ("star product oracle equivalence", oracle_equivalence),
        ("continuous Wigner of oscillator states", continuous_wigner),
        ("Landau levels", landau_levels),
        ("magnetic resonance", magnetic_resonance),
        ("purity equivalence", purity_equivalence),
        ("marginals of mixed states", marginals_of_mixed_states),
        ("CLI determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.passed {
            failures += 1;
        }
        println!("{} criterion {:>2} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
