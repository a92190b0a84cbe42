mod common;

use common::{density, hermitian, operator, unit_vector};
use moyalspin::spin::{default_epsilon, from_tilde, tilde_of};
use moyalspin::*;
use proptest::prelude::*;

fn kernels(s: SpinDim) -> Vec<DiscreteKernel> {
    let mut out = vec![DiscreteKernel::default_for(s).unwrap()];
    for v in [KernelVariant::ParityOdd, KernelVariant::ParityEvenHalfOdd] {
        if let Ok(k) = kernel_make(s, v, 0.0) {
            out.push(k);
        }
    }
    if s.dim() % 2 == 1 {
        out.push(kernel_make(s, KernelVariant::Cosine, 0.2).unwrap());
    }
    out
}

#[test]
fn displacements_are_unitary_with_inverse_adjoint() {
    for dim in 2..=8 {
        let s = SpinDim::from_dim(dim).unwrap();
        for k in 0..dim as i64 {
            for l in 0..dim as i64 {
                let d = disp_d(s, k, l);
                assert!(d.is_unitary(1e-12));
                assert!(d.adjoint().max_abs_diff(&disp_d(s, -k, -l)) < 1e-12);
            }
        }
    }
}

#[test]
fn displacements_are_trace_orthogonal() {
    for dim in 2..=6 {
        let s = SpinDim::from_dim(dim).unwrap();
        for k in 0..dim as i64 {
            for l in 0..dim as i64 {
                for k2 in 0..dim as i64 {
                    for l2 in 0..dim as i64 {
                        let t = disp_d(s, k, l).trace_product(&disp_d(s, k2, l2).adjoint());
                        let want = if k == k2 && l == l2 { dim as f64 } else { 0.0 };
                        assert!((t - want).norm() < 1e-12);
                    }
                }
            }
        }
    }
}

fn max_overlap_error(k: &DiscreteKernel) -> f64 {
    let q = spin_quantizer(k);
    let d = k.dim().dim();
    let mut worst = 0.0f64;
    for a in 0..d * d {
        for b in 0..d * d {
            let t = q.get(a / d, a % d).trace_product(q.get(b / d, b % d));
            let want = if a == b { d as f64 } else { 0.0 };
            worst = worst.max((t - want).norm());
        }
    }
    worst
}

#[test]
fn quantizer_overlap_holds_exactly_for_unimodular_kernels() {
    for s in 0..6 {
        let s = SpinDim::new(s);
        for k in kernels(s) {
            let err = max_overlap_error(&k);
            if k.is_unimodular(1e-12) {
                assert!(err < 1e-12, "{s:?} {:?}", k.variant());
            } else {
                assert!(err > 1e-2, "{s:?} {:?}", k.variant());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symbol_round_trips(s in common::spin_dim(), seed in 0usize..4) {
        let ks = kernels(s);
        let k = &ks[seed % ks.len()];
        let d = s.dim();
        let a = SpinOperator::from_fn(d, |i, j| C64::new((i as f64 + 0.3 * seed as f64).sin(), (j as f64 * 1.7).cos()));
        let back = spin_dequantize(&spin_symbol(&a, k).unwrap(), k).unwrap();
        prop_assert!(back.max_abs_diff(&a) < 1e-11);
        let f = DiscreteSymbol::from_fn(s, |m, n| C64::new((m + 2 * n) as f64, seed as f64 - n as f64));
        let f2 = spin_symbol(&spin_dequantize(&f, k).unwrap(), k).unwrap();
        prop_assert!(f2.max_abs_diff(&f) < 1e-11);
    }

    #[test]
    fn hermitian_operators_have_real_symbols(a in hermitian(3), b in hermitian(4), c in hermitian(2)) {
        for (op, s) in [(a, 2usize), (b, 3), (c, 1)] {
            for k in kernels(SpinDim::new(s)) {
                prop_assert!(spin_symbol(&op, &k).unwrap().is_real(1e-12));
            }
        }
    }

    #[test]
    fn star_is_associative_and_matches_matrix_products(
        dim in 2usize..6,
        seed in prop::collection::vec(-1.0..1.0f64, 75),
    ) {
        let s = SpinDim::from_dim(dim).unwrap();
        let mk = |off: usize| SpinOperator::from_fn(dim, |i, j| C64::new(seed[(off + i * dim + j) % 75], seed[(off + 3 * i + j + 7) % 75]));
        let (a, b, c) = (mk(0), mk(25), mk(50));
        for k in kernels(s) {
            let (fa, fb, fc) = (spin_symbol(&a, &k).unwrap(), spin_symbol(&b, &k).unwrap(), spin_symbol(&c, &k).unwrap());
            let ab = spin_star(&fa, &fb, &k).unwrap();
            let direct = spin_symbol(&(&a * &b), &k).unwrap();
            prop_assert!(ab.max_abs_diff(&direct) <= 1e-10 * direct.max_abs().max(1.0));
            let left = spin_star(&ab, &fc, &k).unwrap();
            let right = spin_star(&fa, &spin_star(&fb, &fc, &k).unwrap(), &k).unwrap();
            prop_assert!(left.max_abs_diff(&right) <= 1e-10 * left.max_abs().max(1.0));
        }
        let t = boxtimes_discrete(&tilde_of(&a).unwrap(), &tilde_of(&b).unwrap()).unwrap();
        prop_assert!(from_tilde(&t).max_abs_diff(&(&a * &b)) < 1e-10 * (&a * &b).max_abs().max(1.0));
    }

    #[test]
    fn wigner_of_density_is_normalized_with_marginals(rho in density(3, 2)) {
        let s = SpinDim::new(2);
        for k in kernels(s) {
            let w = spin_wigner(&rho, &k).unwrap();
            prop_assert!(w.is_real(1e-12));
            prop_assert!((w.sum() - 1.0).norm() < 1e-12);
            let nm = w.n_marginal();
            for n in 0..3 {
                prop_assert!((nm[n] - rho.get(n, n)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn purity_forms_agree_for_qubits(v in unit_vector(2), rho in density(2, 2)) {
        let k = DiscreteKernel::qubit();
        let pure = GammaState::from_symbol(&spin_wigner(&SpinOperator::projector(&v), &k).unwrap()).unwrap();
        let r = purity_check(&pure, &k).unwrap();
        prop_assert!(r.is_pure);
        prop_assert!((r.defect - r.star_defect).abs() < 1e-10);
        let mixed = GammaState::from_symbol(&spin_wigner(&rho, &k).unwrap()).unwrap();
        let r = purity_check(&mixed, &k).unwrap();
        prop_assert!((r.defect - r.star_defect).abs() < 1e-10);
        let purity = rho.trace_product(&rho).re;
        prop_assert_eq!(r.is_pure, (purity - 1.0).abs() < 1e-10);
    }

    #[test]
    fn operators_round_trip_through_displacement_coefficients(a in operator(5)) {
        prop_assert!(from_tilde(&tilde_of(&a).unwrap()).max_abs_diff(&a) < 1e-12);
    }
}

#[test]
fn maximally_mixed_qubit_is_not_pure() {
    let k = DiscreteKernel::qubit();
    let w = spin_wigner(&SpinOperator::identity(2).scale(C64::new(0.5, 0.0)), &k).unwrap();
    let r = purity_check(&GammaState::from_symbol(&w).unwrap(), &k).unwrap();
    assert!(!r.is_pure);
    assert!((r.defect - 1.0).abs() < 1e-14);
}

#[test]
fn default_epsilon_gives_valid_kernels() {
    for s in 0..10 {
        let s = SpinDim::new(s);
        let k = kernel_make(s, KernelVariant::Cosine, default_epsilon(s)).unwrap();
        assert_eq!(k.get(0, 0), C64::new(1.0, 0.0));
    }
}
