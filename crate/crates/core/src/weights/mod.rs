//! Torsion-decorated weight system on Jacobi diagrams.

mod complex;
mod operator;
mod theta;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use serde::Serialize;

use crate::error::{LmoError, Result};
use crate::homology::TorsionData;

pub use complex::{ComplexValue, ExactComplex};
pub use operator::{closed_diagram_eval, cut_closed_diagram, operator_of_open_diagram, trace, DecoratedOperator};
pub use theta::{theta_eval, theta_eval_float};

/// `((k/p))`: zero on multiples of `p`, else `(k mod p)/p - 1/2`.
pub fn sawtooth(k: i64, p: i64) -> Result<Rational64> {
    if p <= 0 {
        return Err(LmoError::Argument(format!("sawtooth modulus must be positive, got {p}")));
    }
    let r = k.rem_euclid(p);
    Ok(if r == 0 { Rational64::zero() } else { Rational64::new(2 * r - p, 2 * p) })
}

/// `2p·((g/p))`, an integer.
pub(crate) fn sawtooth_scaled(g: u64, p: u64) -> i128 {
    let r = (g % p) as i128;
    if r == 0 {
        0
    } else {
        2 * r - p as i128
    }
}

/// Numerator of `W(a, b, c)` over the fixed denominator `8p³`.
pub(crate) fn w_numerator(p: u64, a: u64, b: u64, c: u64) -> i128 {
    let (s1, s2, s3) = (sawtooth_scaled(a, p), sawtooth_scaled(b, p), sawtooth_scaled(c, p));
    let pp = (p as i128) * (p as i128);
    s1 * s2 * s3 - pp * (s1 + s2 + s3)
}

/// `W = f(a)f(b)f(c) - (f(a) + f(b) + f(c))/4` on `ℤ/p`.
pub fn w_cyclic(p: u64, a: u64, b: u64, c: u64) -> Rational64 {
    let den = 8 * (p as i64).pow(3);
    Rational64::new(w_numerator(p, a, b, c) as i64, den)
}

/// The order of a cyclic torsion group, refusing anything else.
pub fn cyclic_order(t: &TorsionData) -> Result<u64> {
    if t.free_rank > 0 {
        return Err(LmoError::Unsupported("torsion data of a non-QHS presentation".into()));
    }
    if !t.is_cyclic() {
        return Err(LmoError::Unsupported(format!(
            "weights need a cyclic torsion group, got invariant factors {:?}",
            t.invariant_factors
        )));
    }
    Ok(t.order())
}

pub(crate) fn element(t: &TorsionData, g: u64) -> Vec<u64> {
    if t.invariant_factors.is_empty() {
        vec![]
    } else {
        vec![g]
    }
}

pub fn w_factor(t: &TorsionData, g1: u64, g2: u64, g3: u64) -> Result<Rational64> {
    let p = cyclic_order(t)?;
    Ok(w_cyclic(p, g1, g2, g3))
}

/// `qform(g)` for every `g ∈ ℤ/p`.
pub(crate) fn qform_table(t: &TorsionData) -> Result<Vec<Rational64>> {
    let p = cyclic_order(t)?;
    (0..p)
        .map(|g| {
            t.qform(&element(t, g))
                .ok_or_else(|| LmoError::Unsupported("torsion data carries no quadratic refinement".into()))
        })
        .collect()
}

/// `exp(2πi·qform(g))`.
pub fn edge_factor(g: u64, t: &TorsionData) -> Result<ComplexValue> {
    let p = cyclic_order(t)?;
    let phase = t
        .qform(&element(t, g % p))
        .ok_or_else(|| LmoError::Unsupported("torsion data carries no quadratic refinement".into()))?;
    Ok(ComplexValue::from_exact(ExactComplex::phase(phase)))
}

/// `S(q, p) = Σ_{k=1}^{p-1} ((k/p))((kq/p))`.
pub fn dedekind_sum(q: i64, p: i64) -> Result<BigRational> {
    if p <= 0 || q.gcd(&p) != 1 {
        return Err(LmoError::Argument(format!("Dedekind sum needs p >= 1 and gcd(q, p) = 1, got ({q}, {p})")));
    }
    let mut s = BigRational::zero();
    for k in 1..p {
        let a = sawtooth(k, p)?;
        let b = sawtooth(k * q, p)?;
        let prod = a * b;
        s += BigRational::new(BigInt::from(*prod.numer()), BigInt::from(*prod.denom()));
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeResidues {
    pub prime: u64,
    pub exponent: u32,
    /// Legendre symbols; `None` at the prime 2.
    pub legendre_q1: Option<i8>,
    pub legendre_q2: Option<i8>,
    pub symmetric: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueReport {
    pub p: u64,
    pub q1: i64,
    pub q2: i64,
    pub primes: Vec<PrimeResidues>,
    pub asymmetric_primes: Vec<u64>,
    pub asymmetric: bool,
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Legendre symbol `(a/l)` for an odd prime `l`, by Euler's criterion.
pub fn legendre(a: i64, l: u64) -> i8 {
    let a = a.rem_euclid(l as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (l - 1) / 2, l) == 1 {
        1
    } else {
        -1
    }
}

pub fn residue_report(p: u64, q1: i64, q2: i64) -> Result<ResidueReport> {
    if p == 0 || q1.gcd(&(p as i64)) != 1 || q2.gcd(&(p as i64)) != 1 {
        return Err(LmoError::Argument(format!("residue report needs gcd(q, {p}) = 1 for q = {q1}, {q2}")));
    }
    let primes: Vec<PrimeResidues> = factorize(p)
        .into_iter()
        .map(|(l, e)| {
            if l == 2 {
                PrimeResidues { prime: l, exponent: e, legendre_q1: None, legendre_q2: None, symmetric: true }
            } else {
                let (a, b) = (legendre(q1, l), legendre(q2, l));
                PrimeResidues { prime: l, exponent: e, legendre_q1: Some(a), legendre_q2: Some(b), symmetric: a == b }
            }
        })
        .collect();
    let asymmetric_primes: Vec<u64> = primes.iter().filter(|r| !r.symmetric).map(|r| r.prime).collect();
    Ok(ResidueReport { p, q1, q2, asymmetric: !asymmetric_primes.is_empty(), asymmetric_primes, primes })
}
