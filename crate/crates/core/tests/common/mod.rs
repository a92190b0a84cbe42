#![allow(dead_code)]

use moyalspin::{SpinDim, SpinOperator, C64};
use nalgebra::DVector;
use proptest::prelude::*;

pub fn operator(dim: usize) -> impl Strategy<Value = SpinOperator> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim).prop_map(move |v| {
        let mut it = v.into_iter();
        SpinOperator::from_fn(dim, |_, _| {
            let (a, b) = it.next().unwrap();
            C64::new(a, b)
        })
    })
}

pub fn hermitian(dim: usize) -> impl Strategy<Value = SpinOperator> {
    operator(dim).prop_map(|a| (&a + &a.adjoint()).scale(C64::new(0.5, 0.0)))
}

pub fn unit_vector(dim: usize) -> impl Strategy<Value = DVector<C64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let x = DVector::from_iterator(v.len(), v.into_iter().map(|(a, b)| C64::new(a, b)));
            let n = x.norm();
            x / C64::new(n, 0.0)
        })
}

/// Random density matrix of the given rank built from a weighted sum of projectors.
pub fn density(dim: usize, rank: usize) -> impl Strategy<Value = SpinOperator> {
    (
        prop::collection::vec(unit_vector(dim), rank),
        prop::collection::vec(0.05..1.0f64, rank),
    )
        .prop_map(move |(vs, ws)| {
            let total: f64 = ws.iter().sum();
            let mut acc = SpinOperator::zeros(dim);
            for (v, w) in vs.iter().zip(&ws) {
                acc = &acc + &SpinOperator::projector(v).scale(C64::new(w / total, 0.0));
            }
            acc
        })
}

pub fn spin_dim() -> impl Strategy<Value = SpinDim> {
    (1usize..5).prop_map(SpinDim::new)
}
