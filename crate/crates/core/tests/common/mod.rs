//! Term-by-term log-likelihood in 256-bit arithmetic.

#![allow(dead_code)]

use hetprobit::model::{Dataset, ParamVector};
use rug::Float;

pub const PREC: u32 = 256;

pub fn f(v: f64) -> Float {
    Float::with_val(PREC, v)
}

/// `y ln Φ(a) + (1 − y) ln Φ(−a)` with `Φ(a) = erfc(−a/√2)/2`.
pub fn oracle_term(y: u8, a: &Float) -> Float {
    let sqrt2 = f(2.0).sqrt();
    let signed = if y == 1 { -a.clone() } else { a.clone() };
    let phi = (signed / sqrt2).erfc() / 2u32;
    phi.ln()
}

pub fn oracle_index(x: &[f64], beta: &[f64], z: &[f64], gamma: &[f64]) -> Float {
    let mut xb = f(0.0);
    for (a, b) in x.iter().zip(beta) {
        xb += f(*a) * f(*b);
    }
    let mut zg = f(0.0);
    for (a, b) in z.iter().zip(gamma) {
        zg += f(*a) * f(*b);
    }
    xb / zg.exp()
}

pub fn oracle(d: &Dataset, p: &ParamVector) -> Float {
    let mut total = f(0.0);
    for i in 0..d.n() {
        let x: Vec<f64> = d.x_row(i).to_vec();
        let z: Vec<f64> = d.z_row(i).to_vec();
        let a = oracle_index(&x, &p.beta, &z, &p.gamma);
        total += oracle_term(d.y()[i], &a);
    }
    total
}

pub fn rel_err(got: f64, want: &Float) -> f64 {
    let want = want.to_f64();
    ((got - want) / want).abs()
}
