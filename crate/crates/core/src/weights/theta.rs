use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};

use super::{cyclic_order, qform_table, sawtooth, sawtooth_scaled, ComplexValue, ExactComplex};
use crate::error::Result;
use crate::homology::{mod1, TorsionData};

/// `(1/|G|³) Σ_{g1+g2+g3=0} W(g1,g2,g3)² ∏ exp(2πi·qform(gj))`.
///
/// `W` has denominator `8p³`, so each summand is `N²/(64p⁹)` times a phase;
/// the integers `N²` are accumulated per phase and divided once.
/// `N = s1·s2·s3 - p²(s1 + s2 + s3)` with `s = 2p·f`.
pub fn theta_eval(t: &TorsionData) -> Result<ComplexValue> {
    let p = cyclic_order(t)?;
    let q = qform_table(t)?;
    // phases as residues over a common denominator
    let den_phase = q.iter().fold(1i64, |acc, r| acc.lcm(r.denom()));
    let idx: Vec<usize> = q.iter().map(|r| (mod1(*r) * den_phase).to_integer() as usize).collect();
    let s: Vec<i128> = (0..p).map(|g| sawtooth_scaled(g, p)).collect();
    let pp = (p as i128) * (p as i128);
    let dp = den_phase as usize;
    let mut acc = vec![0i128; dp];
    let pu = p as usize;
    for a in 0..pu {
        for b in 0..pu {
            let c = (2 * pu - a - b) % pu;
            let n = s[a] * s[b] * s[c] - pp * (s[a] + s[b] + s[c]);
            if n != 0 {
                acc[(idx[a] + idx[b] + idx[c]) % dp] += n * n;
            }
        }
    }
    let den = BigInt::from(64) * BigInt::from(p).pow(9);
    let mut e = ExactComplex::zero();
    for (k, total) in acc.into_iter().enumerate() {
        if total != 0 {
            e.add_term(Rational64::new(k as i64, den_phase), BigRational::new(BigInt::from(total), den.clone()));
        }
    }
    Ok(ComplexValue::from_exact(e))
}

/// The same sum in plain double precision, term by term.
pub fn theta_eval_float(t: &TorsionData) -> Result<(f64, f64)> {
    let p = cyclic_order(t)?;
    let q = qform_table(t)?;
    let f: Vec<f64> = (0..p).map(|g| to_f64(sawtooth(g as i64, p as i64).unwrap())).collect();
    let qf: Vec<f64> = q.into_iter().map(to_f64).collect();
    let (mut re, mut im) = (0.0, 0.0);
    for a in 0..p as usize {
        for b in 0..p as usize {
            let c = (2 * p as usize - a - b) % p as usize;
            let w = f[a] * f[b] * f[c] - 0.25 * (f[a] + f[b] + f[c]);
            let angle = 2.0 * std::f64::consts::PI * (qf[a] + qf[b] + qf[c]);
            re += w * w * angle.cos();
            im += w * w * angle.sin();
        }
    }
    let n = (p as f64).powi(3);
    Ok((re / n, im / n))
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
