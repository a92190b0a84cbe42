mod common;

use std::f64::consts::PI;

use moyalspin::spin::phase_ket;
use moyalspin::*;
use proptest::prelude::*;

fn grid() -> GridSpec {
    GridSpec::line(64, 18.0, 1.0).unwrap()
}

/// Coherent packet centre `(q0, p0)`, spinor, and mixing weight.
type Component = ((f64, f64), Vec<(f64, f64)>, f64);

fn component() -> impl Strategy<Value = Component> {
    (
        (-1.5..1.5f64, -0.6..0.6f64),
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2),
        0.1..1.0f64,
    )
}

fn field(g: &GridSpec, c: &Component) -> Option<SpinorField> {
    let spatial: Vec<C64> = g
        .positions()
        .iter()
        .map(|&q| C64::from_polar((-0.5 * (q - c.0 .0).powi(2)).exp(), c.0 .1 * q / g.hbar()))
        .collect();
    let chi: Vec<C64> = c.1.iter().map(|&(a, b)| C64::new(a, b)).collect();
    let psi = SpinorField::product(*g, &spatial, &chi).ok()?;
    if psi.norm_sq() < 1e-3 {
        return None;
    }
    psi.normalized().ok()
}

fn mixed_state(parts: &[Component]) -> Option<(HybridState, Vec<(f64, SpinorField)>)> {
    let g = grid();
    let total: f64 = parts.iter().map(|c| c.2).sum();
    let mut states = Vec::new();
    for c in parts {
        states.push((c.2 / total, field(&g, c)?));
    }
    let rho = HybridState::mixed(HybridOperator::mixture(&states).ok()?).ok()?;
    Some((rho, states))
}

fn kernels() -> Vec<DiscreteKernel> {
    let s = SpinDim::new(1);
    vec![
        DiscreteKernel::qubit(),
        kernel_make(s, KernelVariant::ParityEvenHalfOdd, 0.0).unwrap(),
        kernel_make(s, KernelVariant::Cosine, 0.3).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn mixed_wigner_is_real_before_projection(parts in prop::collection::vec(component(), 1..=3)) {
        let Some((rho, _)) = mixed_state(&parts) else { return Ok(()) };
        for k in kernels() {
            let w = full_wigner_complex(&rho, &k).unwrap();
            let imag = w.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
            prop_assert!(imag < 1e-12, "{imag}");
        }
    }

    #[test]
    fn marginals_match_hilbert_space_expectations(parts in prop::collection::vec(component(), 1..=3)) {
        let Some((rho, states)) = mixed_state(&parts) else { return Ok(()) };
        let g = grid();
        let qs = g.positions();
        let pref = g.dq() / (2.0 * PI * g.hbar()).sqrt();

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
                    let amp: C64 = qs.iter().zip(comp).map(|(q, a)| a * C64::cis(-q * p / g.hbar())).sum::<C64>() * pref;
                    momentum[k] += w * amp.norm_sqr();
                }
            }
            for a in 0..2 {
                for b in 0..2 {
                    let v: C64 = psi.component(a).iter().zip(psi.component(b)).map(|(x, y)| x * y.conj()).sum::<C64>() * g.dq();
                    spin_rho = &spin_rho + &SpinOperator::from_fn(2, |i, j| if i == a && j == b { v * w } else { C64::new(0.0, 0.0) });
                }
            }
        }

        for k in kernels() {
            let mg = marginals(&full_wigner(&rho, &k).unwrap());
            for (a, b) in mg.position.iter().zip(&position) {
                prop_assert!((a - b).abs() < 1e-8);
            }
            for (a, b) in mg.momentum.iter().zip(&momentum) {
                prop_assert!((a - b).abs() < 1e-8);
            }
            for n in 0..2 {
                prop_assert!((mg.n_distribution[n] - spin_rho.get(n, n).re).abs() < 1e-8);
            }
            let q = spin_quantizer(&k);
            for m in 0..2 {
                let direct: f64 = (0..2).map(|n| spin_rho.trace_product(q.get(m, n)).re).sum::<f64>() / 2.0;
                prop_assert!((mg.m_distribution[m] - direct).abs() < 1e-8);
                if (0..2).all(|l| (k.get(0, l) - 1.0).norm() < 1e-14) {
                    let phi = phase_ket(SpinDim::new(1), m as i64);
                    let proj = (phi.adjoint() * spin_rho.matrix() * &phi)[(0, 0)].re;
                    prop_assert!((mg.m_distribution[m] - proj).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn kernel_change_keeps_continuous_marginals(parts in prop::collection::vec(component(), 1..=2)) {
        let Some((rho, _)) = mixed_state(&parts) else { return Ok(()) };
        let ks = kernels();
        let w = full_wigner(&rho, &ks[0]).unwrap();
        for k in &ks[1..] {
            let changed = kernel_change(&w, &ks[0], k).unwrap();
            prop_assert!(changed.max_abs_diff(&full_wigner(&rho, k).unwrap()) < 1e-10);
            let (a, b) = (marginals(&w), marginals(&changed));
            for (x, y) in a.position.iter().zip(&b.position) {
                prop_assert!((x - y).abs() < 1e-10);
            }
            for (x, y) in a.momentum.iter().zip(&b.momentum) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn parity_kernel_symbols_recover_hybrid_trace_at_s_two() {
    let s = SpinDim::new(2);
    let k = kernel_make(s, KernelVariant::ParityOdd, 0.0).unwrap();
    let q = spin_quantizer(&k);
    let a = SpinOperator::from_fn(3, |i, j| C64::new((i + 2 * j) as f64, i as f64 - j as f64));
    let f = spin_symbol(&a, &k).unwrap();
    for m in 0..3 {
        for n in 0..3 {
            assert!((a.trace_product(q.get(m, n)) - f.get(m, n)).norm() < 1e-12);
        }
    }
    let cos = kernel_make(s, KernelVariant::Cosine, 0.4).unwrap();
    assert!(!cos.is_unimodular(1e-12));
    let fc = spin_symbol(&a, &cos).unwrap();
    assert!(spin_dequantize(&fc, &cos).unwrap().max_abs_diff(&a) < 1e-12);
}
