use std::f64::consts::PI;

use super::operator::DisplacementTable;
use super::{SpinOperator, TildeSymbol};
use crate::{Error, Result, C64};

/// `f̃(k,l) = (1/(s+1)) Tr(f D†(k,l))`.
pub fn tilde_of(op: &SpinOperator) -> Result<TildeSymbol> {
    let s = super::SpinDim::from_dim(op.dim())?;
    let table = DisplacementTable::new(s);
    TildeSymbol::new(s, table.coefficients(op))
}

/// `Σ_{k,l} f̃(k,l) D(k,l)`.
pub fn from_tilde(t: &TildeSymbol) -> SpinOperator {
    DisplacementTable::new(t.dim()).synthesize(t.values())
}

fn theta(j: i64) -> i64 {
    i64::from(j >= 0)
}

/// Twisted convolution of tilde symbols: the tilde image of the operator product.
///
/// `(f̃ ⊠ g̃)(k,l) = Σ_{k',l'} f̃(k',l') g̃(k'',l'') σ exp(iπ(k'l - kl')/(s+1))` with
/// `k'' ≡ k - k'`, `l'' ≡ l - l'` reduced into `0..=s` and the sign
/// `σ = (-1)^{(k'-k)θ(l'-l-1) + (l'-l)θ(k'-k-1) + (s+1)θ(k'-k-1)θ(l'-l-1)}`.
pub fn boxtimes_discrete(f: &TildeSymbol, g: &TildeSymbol) -> Result<TildeSymbol> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim().dim(),
            found: g.dim().dim(),
        });
    }
    let s = f.dim();
    let d = s.dim() as i64;
    Ok(TildeSymbol::from_fn(s, |k, l| {
        let (k, l) = (k as i64, l as i64);
        let mut acc = C64::new(0.0, 0.0);
        for k1 in 0..d {
            for l1 in 0..d {
                let k2 = (k - k1).rem_euclid(d) as usize;
                let l2 = (l - l1).rem_euclid(d) as usize;
                let a = theta(l1 - l - 1);
                let b = theta(k1 - k - 1);
                let e = (k1 - k) * a + (l1 - l) * b + d * b * a;
                let sign = if e.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let phase = C64::cis(PI * (k1 * l - k * l1) as f64 / d as f64);
                acc += f.get(k1 as usize, l1 as usize) * g.get(k2, l2) * phase * sign;
            }
        }
        acc
    }))
}
