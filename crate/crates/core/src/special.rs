//! Orthogonal polynomials and oscillator eigenfunctions.

use std::f64::consts::PI;

/// Generalized Laguerre polynomial `L_n^(α)(x)` by the three-term recurrence.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = f64::from(k);
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `d^r/dx^r L_n(x) = (-1)^r L_{n-r}^(r)(x)`.
pub fn laguerre_derivative(n: u32, r: u32, x: f64) -> f64 {
    if r > n {
        return 0.0;
    }
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    sign * laguerre(n - r, f64::from(r), x)
}

/// Normalized Hermite function `h_n(ξ) = H_n(ξ) e^{-ξ²/2} / sqrt(2^n n! √π)`.
pub fn hermite_function(n: u32, xi: f64) -> f64 {
    let mut prev = PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    if n == 0 {
        return prev;
    }
    let mut cur = 2f64.sqrt() * xi * prev;
    for k in 1..n {
        let k = f64::from(k);
        let next = (2.0 / (k + 1.0)).sqrt() * xi * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Eigenfunction `n` of `p²/2m + mω²q²/2`, normalized on the real line.
pub fn oscillator_state(n: u32, mass: f64, omega: f64, hbar: f64, q: f64) -> f64 {
    let k = mass * omega / hbar;
    k.powf(0.25) * hermite_function(n, q * k.sqrt())
}

/// Wigner function of oscillator eigenstate `n`:
/// `((-1)^n/πħ) exp(-2H/ħω) L_n(4H/ħω)`.
pub fn oscillator_wigner(n: u32, mass: f64, omega: f64, hbar: f64, p: f64, q: f64) -> f64 {
    let h = p * p / (2.0 * mass) + 0.5 * mass * omega * omega * q * q;
    let e = hbar * omega;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign / (PI * hbar) * (-2.0 * h / e).exp() * laguerre(n, 0.0, 4.0 * h / e)
}
