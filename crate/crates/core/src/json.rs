//! JSON encodings shared by the command line and the tests.
//!
//! Rationals are `{"num": n, "den": d}` with integers, or decimal strings
//! when they do not fit in 64 bits. Floats are rounded to 15 significant
//! digits.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::diagram::{DiagramSum, JacobiGraph};
use crate::error::{LmoError, Result};
use crate::homology::{LinkingMatrix, TorsionData};
use crate::weights::{ComplexValue, ExactComplex};

fn bad(msg: impl Into<String>) -> LmoError {
    LmoError::Argument(msg.into())
}

pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

pub fn float(x: f64) -> Value {
    json!(round15(x))
}

fn bigint_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub fn rational(q: &BigRational) -> Value {
    json!({"num": bigint_json(q.numer()), "den": bigint_json(q.denom())})
}

pub fn rational64(q: &Rational64) -> Value {
    json!({"num": q.numer(), "den": q.denom()})
}

fn bigint_from(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| bad(format!("integer expected, got {n}"))),
        Value::String(s) => s.parse().map_err(|_| bad(format!("integer expected, got {s:?}"))),
        _ => Err(bad(format!("integer expected, got {v}"))),
    }
}

/// Accepts `{"num", "den"}`, a bare integer, or a string `"n/d"`.
pub fn rational_from(v: &Value) -> Result<BigRational> {
    match v {
        Value::Object(o) => {
            let num = bigint_from(o.get("num").ok_or_else(|| bad("rational without num"))?)?;
            let den = o.get("den").map(bigint_from).transpose()?.unwrap_or_else(|| 1.into());
            if den.is_zero() {
                return Err(bad("rational with zero denominator"));
            }
            Ok(BigRational::new(num, den))
        }
        Value::Number(_) => Ok(BigRational::from_integer(bigint_from(v)?)),
        Value::String(s) => {
            let (n, d) = s.split_once('/').unwrap_or((s.as_str(), "1"));
            let (n, d): (BigInt, BigInt) = (
                n.trim().parse().map_err(|_| bad(format!("bad rational {s:?}")))?,
                d.trim().parse().map_err(|_| bad(format!("bad rational {s:?}")))?,
            );
            if d.is_zero() {
                return Err(bad("rational with zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        _ => Err(bad(format!("rational expected, got {v}"))),
    }
}

pub fn graph(g: &JacobiGraph) -> Value {
    serde_json::to_value(g).expect("graph serializes")
}

pub fn graph_from(v: &Value) -> Result<JacobiGraph> {
    let g: JacobiGraph = serde_json::from_value(v.clone()).map_err(|e| bad(format!("bad diagram: {e}")))?;
    g.validate()?;
    Ok(g)
}

pub fn sum(s: &DiagramSum) -> Value {
    Value::Array(s.iter().map(|(g, c)| json!({"coeff": rational(c), "graph": graph(g)})).collect())
}

/// A diagram sum given as a list of `{"coeff", "graph"}` terms or as a single
/// graph object (coefficient one).
pub fn sum_from(v: &Value) -> Result<DiagramSum> {
    match v {
        Value::Array(terms) => {
            let mut s = DiagramSum::zero();
            for t in terms {
                let g = graph_from(t.get("graph").ok_or_else(|| bad("term without graph"))?)?;
                let c = match t.get("coeff") {
                    Some(c) => rational_from(c)?,
                    None => BigRational::from_integer(1.into()),
                };
                s.add_graph(&g, &c)?;
            }
            Ok(s)
        }
        Value::Object(_) => DiagramSum::from_graph(&graph_from(v)?),
        _ => Err(bad("diagram or list of terms expected")),
    }
}

pub fn exact(e: &ExactComplex) -> Value {
    Value::Array(e.terms().map(|(phi, c)| json!({"phase": rational64(phi), "coeff": rational(c)})).collect())
}

pub fn complex(v: &ComplexValue) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), float(v.re));
    m.insert("im".into(), float(v.im));
    m.insert("exact".into(), v.exact.as_ref().map_or(Value::Null, exact));
    Value::Object(m)
}

pub fn matrix(m: &LinkingMatrix) -> Value {
    json!({"n": m.n, "entries": m.entries})
}

/// `{"n", "entries", "qform"?}`; the optional refinement is a list of
/// `{"elem": [...], "value": rational}`.
pub fn matrix_from(v: &Value) -> Result<(LinkingMatrix, Option<BTreeMap<Vec<u64>, Rational64>>)> {
    let entries: Vec<Vec<i64>> = serde_json::from_value(v.get("entries").cloned().ok_or_else(|| bad("matrix without entries"))?)
        .map_err(|e| bad(format!("bad matrix entries: {e}")))?;
    let n = match v.get("n") {
        Some(n) => n.as_u64().ok_or_else(|| bad("matrix size must be a nonnegative integer"))? as usize,
        None => entries.len(),
    };
    let m = LinkingMatrix { n, entries };
    m.validate()?;
    let qform = match v.get("qform") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) => {
            let mut out = BTreeMap::new();
            for it in items {
                let elem: Vec<u64> = serde_json::from_value(it.get("elem").cloned().ok_or_else(|| bad("qform item without elem"))?)
                    .map_err(|e| bad(format!("bad qform element: {e}")))?;
                let q = rational_from(it.get("value").ok_or_else(|| bad("qform item without value"))?)?;
                let q = Rational64::new(
                    q.numer().to_i64().ok_or_else(|| bad("qform value too large"))?,
                    q.denom().to_i64().ok_or_else(|| bad("qform value too large"))?,
                );
                out.insert(elem, q);
            }
            Some(out)
        }
        Some(_) => return Err(bad("qform must be a list")),
    };
    Ok((m, qform))
}

pub fn torsion(t: &TorsionData) -> Value {
    json!({
        "invariant_factors": t.invariant_factors,
        "free_rank": t.free_rank,
        "order": t.order(),
        "has_qform": t.qform.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::rat;

    #[test]
    fn rationals_round_trip() {
        for q in [rat(1, 2), rat(-7, 3), rat(0, 1)] {
            assert_eq!(rational_from(&rational(&q)).unwrap(), q);
        }
        let big = BigRational::new(BigInt::from(10).pow(30), 7.into());
        let v = rational(&big);
        assert!(v["num"].is_string());
        assert_eq!(rational_from(&v).unwrap(), big);
        assert_eq!(rational_from(&json!("3/4")).unwrap(), rat(3, 4));
        assert!(rational_from(&json!({"num": 1, "den": 0})).is_err());
    }

    #[test]
    fn floats_have_fifteen_digits() {
        assert_eq!(round15(0.1 + 0.2), 0.3);
        assert_eq!(round15(-1.6111012345678912e-6), -1.61110123456789e-6);
        assert_eq!(round15(round15(2.0f64.sqrt())), round15(2.0f64.sqrt()));
    }

    #[test]
    fn sums_round_trip() {
        let s = DiagramSum::from_graph(&JacobiGraph::theta()).unwrap().scale(&rat(-2, 3));
        assert_eq!(sum_from(&sum(&s)).unwrap(), s);
        let t = sum_from(&graph(&JacobiGraph::theta())).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn matrix_with_qform() {
        let v = json!({"n": 1, "entries": [[2]], "qform": [{"elem": [0], "value": 0}, {"elem": [1], "value": {"num": 1, "den": 4}}]});
        let (m, q) = matrix_from(&v).unwrap();
        assert_eq!(m.entries, vec![vec![2]]);
        assert_eq!(q.unwrap()[&vec![1]], Rational64::new(1, 4));
        assert!(matrix_from(&json!({"n": 2, "entries": [[1, 2], [3, 4]]})).is_err());
    }
}
