//! Free Lie algebra on `x`, `y` inside noncommutative polynomials, tangential
//! derivations, the map ν and the depth-1 comparison for `[σ1, σ5]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub const X: u8 = 0;
pub const Y: u8 = 1;

/// Finite ℚ-combination of words in `x` (0) and `y` (1).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NcPoly {
    terms: BTreeMap<Vec<u8>, BigRational>,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn x() -> Self {
        Self::word(&[X])
    }

    pub fn y() -> Self {
        Self::word(&[Y])
    }

    pub fn word(w: &[u8]) -> Self {
        let mut p = Self::zero();
        p.add_term(w.to_vec(), BigRational::one());
        p
    }

    pub fn add_term(&mut self, w: Vec<u8>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn coeff(&self, w: &[u8]) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &BigRational) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    /// Words of exactly `d` letters `y`.
    pub fn depth_part(&self, d: usize) -> NcPoly {
        self.filter(|w| w.iter().filter(|&&l| l == Y).count() == d)
    }

    pub fn degree_part(&self, n: usize) -> NcPoly {
        self.filter(|w| w.len() == n)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|w| w.len()).collect();
        d.dedup();
        d.sort_unstable();
        d.dedup();
        d
    }

    fn filter(&self, keep: impl Fn(&[u8]) -> bool) -> NcPoly {
        NcPoly { terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    /// Substitutes `a` for `x` and `b` for `y` in every word.
    pub fn substitute(&self, a: &NcPoly, b: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            let mut prod = NcPoly::word(&[]);
            for &l in w {
                prod = &prod * if l == X { a } else { b };
            }
            out = &out + &prod.scale(c);
        }
        out
    }

    /// If `self = c · ad_x^n(y)`, returns `(n, c)`.
    pub fn as_ad_x_multiple(&self) -> Option<(usize, BigRational)> {
        let n = self.terms.keys().next()?.len().checked_sub(1)?;
        let base = ad_n(&NcPoly::x(), n, &NcPoly::y());
        // coefficient of x^n y in ad_x^n(y) is 1
        let mut w = vec![X; n];
        w.push(Y);
        let c = self.coeff(&w);
        (base.scale(&c) == *self).then_some((n, c))
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, a * b);
            }
        }
        out
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let word: String = w.iter().map(|&l| if l == X { 'x' } else { 'y' }).collect();
            let word = if word.is_empty() { "1".to_string() } else { word };
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{word}")?;
            } else {
                write!(f, "{a} {word}")?;
            }
        }
        Ok(())
    }
}

pub fn bracket(a: &NcPoly, b: &NcPoly) -> NcPoly {
    &(a * b) - &(b * a)
}

/// `ad_a^n(b)`.
pub fn ad_n(a: &NcPoly, n: usize, b: &NcPoly) -> NcPoly {
    let mut r = b.clone();
    for _ in 0..n {
        r = bracket(a, &r);
    }
    r
}

/// Left-normed Dynkin map `a1 a2 ... an ↦ [a1, [a2, ... [a_{n-1}, a_n]]]`.
pub fn dynkin(p: &NcPoly) -> NcPoly {
    let mut out = NcPoly::zero();
    for (w, c) in p.terms() {
        let Some((&last, rest)) = w.split_last() else {
            continue;
        };
        let mut r = NcPoly::word(&[last]);
        for &l in rest.iter().rev() {
            r = bracket(&NcPoly::word(&[l]), &r);
        }
        out = &out + &r.scale(c);
    }
    out
}

/// Dynkin-Specht-Wever: a homogeneous `p` of degree `n ≥ 1` is Lie iff
/// `dynkin(p) = n·p`.
pub fn is_lie_element(p: &NcPoly) -> bool {
    p.degrees().into_iter().all(|n| {
        let part = p.degree_part(n);
        n > 0 && dynkin(&part) == part.scale(&BigRational::from_integer(BigInt::from(n)))
    })
}

pub fn sigma1(a: &NcPoly, b: &NcPoly) -> NcPoly {
    bracket(a, b).scale(&q(1, 2))
}

pub const B4: (i64, i64) = (-1, 30);

/// `σ5` modulo double commutators:
/// `(B4/8)(½ ad_A⁴B + ½ ad_B⁴A + [[A,B], ad_A²B])`.
pub fn sigma5(a: &NcPoly, b: &NcPoly) -> NcPoly {
    let t1 = ad_n(a, 4, b).scale(&q(1, 2));
    let t2 = ad_n(b, 4, a).scale(&q(1, 2));
    let t3 = bracket(&bracket(a, b), &ad_n(a, 2, b));
    (&(&t1 + &t2) + &t3).scale(&q(B4.0, 8 * B4.1))
}

/// Tangential derivation stored as the pair `(a, b)` of images of `x`, `y`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TangentialDeriv {
    pub a: NcPoly,
    pub b: NcPoly,
}

impl TangentialDeriv {
    pub fn new(a: NcPoly, b: NcPoly) -> Self {
        TangentialDeriv { a, b }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn depth_part(&self, d: usize) -> TangentialDeriv {
        TangentialDeriv { a: self.a.depth_part(d), b: self.b.depth_part(d) }
    }

    pub fn scale(&self, c: &BigRational) -> TangentialDeriv {
        TangentialDeriv { a: self.a.scale(c), b: self.b.scale(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_lie(&self) -> bool {
        is_lie_element(&self.a) && is_lie_element(&self.b)
    }
}

/// `ν(σ) = (σ(-x-y, x), σ(-x-y, y))`.
pub fn nu(sigma: impl Fn(&NcPoly, &NcPoly) -> NcPoly) -> TangentialDeriv {
    let z = -&(&NcPoly::x() + &NcPoly::y());
    TangentialDeriv { a: sigma(&z, &NcPoly::x()), b: sigma(&z, &NcPoly::y()) }
}

/// Derivation `x ↦ a, y ↦ b` extended by the Leibniz rule over words. On Lie
/// elements this is the bracket-tree action.
pub fn deriv_act(u: &TangentialDeriv, p: &NcPoly) -> NcPoly {
    let mut out = NcPoly::zero();
    for (w, c) in p.terms() {
        for i in 0..w.len() {
            let left = NcPoly::word(&w[..i]);
            let right = NcPoly::word(&w[i + 1..]);
            let mid = if w[i] == X { &u.a } else { &u.b };
            out = &out + &(&(&left * mid) * &right).scale(c);
        }
    }
    out
}

/// `[u, v] = (u(c) - v(a), u(d) - v(b))` for `u = (a, b)`, `v = (c, d)`.
pub fn deriv_bracket(u: &TangentialDeriv, v: &TangentialDeriv) -> TangentialDeriv {
    TangentialDeriv {
        a: &deriv_act(u, &v.a) - &deriv_act(v, &u.a),
        b: &deriv_act(u, &v.b) - &deriv_act(v, &u.b),
    }
}

/// `{f, g} = [f, g] + D_f(g) - D_g(f)` with `D_f(x) = 0`, `D_f(y) = [y, f]`.
pub fn ihara_bracket(f: &NcPoly, g: &NcPoly) -> NcPoly {
    let df = TangentialDeriv::new(NcPoly::zero(), bracket(&NcPoly::y(), f));
    let dg = TangentialDeriv::new(NcPoly::zero(), bracket(&NcPoly::y(), g));
    &(&bracket(f, g) + &deriv_act(&df, g)) - &deriv_act(&dg, f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Depth1Report {
    /// Depth-1 part of `ν([σ1, σ5])` before doubling.
    pub lhs_single: TangentialDeriv,
    /// `2 · ν([σ1, σ5])^(1)`.
    pub lhs: TangentialDeriv,
    /// `[ν(σ1), ν(σ5)]^(1)`.
    pub rhs: TangentialDeriv,
    pub equal: bool,
    /// `(0, -1/240 ad_x⁴y)`.
    pub expected_lhs_single: TangentialDeriv,
    /// `(0, -1/120 ad_x⁴y)`.
    pub expected_rhs: TangentialDeriv,
    pub lhs_matches_expected: bool,
    pub rhs_matches_expected: bool,
}

pub fn verify_depth1_identity() -> Depth1Report {
    let commutator = nu(|a, b| bracket(&sigma1(a, b), &sigma5(a, b)));
    let lhs_single = commutator.depth_part(1);
    let lhs = lhs_single.scale(&q(2, 1));
    let rhs = deriv_bracket(&nu(sigma1), &nu(sigma5)).depth_part(1);
    let ad4 = ad_n(&NcPoly::x(), 4, &NcPoly::y());
    let expected_lhs_single = TangentialDeriv::new(NcPoly::zero(), ad4.scale(&q(-1, 240)));
    let expected_rhs = TangentialDeriv::new(NcPoly::zero(), ad4.scale(&q(-1, 120)));
    Depth1Report {
        equal: lhs == rhs,
        lhs_matches_expected: lhs_single == expected_lhs_single,
        rhs_matches_expected: rhs == expected_rhs,
        lhs_single,
        lhs,
        rhs,
        expected_lhs_single,
        expected_rhs,
    }
}

/// Root of `a + b·C = 0`.
pub fn solve_linear(a: &BigRational, b: &BigRational) -> Option<BigRational> {
    (!b.is_zero()).then(|| -a / b)
}

/// The W-factor constant from `(1/2 + 2C) = 0`.
pub fn solve_pentagon_constant() -> BigRational {
    solve_linear(&q(1, 2), &q(2, 1)).expect("nonzero linear coefficient")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> NcPoly {
        NcPoly::x()
    }
    fn y() -> NcPoly {
        NcPoly::y()
    }

    #[test]
    fn brackets() {
        assert!(bracket(&x(), &x()).is_zero());
        assert_eq!(bracket(&x(), &y()), &NcPoly::word(&[X, Y]) - &NcPoly::word(&[Y, X]));
        let xy = bracket(&x(), &y());
        let jac = &(&bracket(&x(), &bracket(&y(), &xy)) + &bracket(&y(), &bracket(&xy, &x())))
            + &bracket(&xy, &bracket(&x(), &y()));
        assert!(jac.is_zero());
    }

    #[test]
    fn ad_powers() {
        assert_eq!(ad_n(&x(), 0, &y()), y());
        assert_eq!(ad_n(&x(), 1, &y()), bracket(&x(), &y()));
        let a4 = ad_n(&x(), 4, &y());
        assert_eq!(a4.len(), 5);
        assert_eq!(a4.coeff(&[X, X, X, X, Y]), q(1, 1));
        assert_eq!(a4.coeff(&[X, X, Y, X, X]), q(6, 1));
        assert_eq!(a4.coeff(&[Y, X, X, X, X]), q(1, 1));
    }

    #[test]
    fn sigmas() {
        assert_eq!(sigma1(&x(), &y()).coeff(&[X, Y]), q(1, 2));
        assert!(sigma1(&x(), &x()).is_zero());
        let s5 = sigma5(&x(), &y());
        assert_eq!(s5.coeff(&[X, X, X, X, Y]), q(-1, 480));
        assert!(is_lie_element(&s5));
    }

    #[test]
    fn nu_of_sigma1() {
        let u = nu(sigma1);
        assert_eq!(u.a, bracket(&y(), &x()).scale(&q(-1, 2)));
        assert_eq!(u.b, bracket(&x(), &y()).scale(&q(-1, 2)));
        assert!(nu(|_, _| NcPoly::zero()).is_zero());
        assert!(nu(sigma5).is_lie());
    }

    #[test]
    fn derivations() {
        let u = TangentialDeriv::new(bracket(&x(), &y()), y());
        assert!(deriv_act(&TangentialDeriv::zero(), &bracket(&x(), &y())).is_zero());
        assert_eq!(deriv_act(&u, &x()), u.a);
        let lhs = deriv_act(&u, &bracket(&x(), &y()));
        assert_eq!(lhs, &bracket(&u.a, &y()) + &bracket(&x(), &u.b));
        let v = nu(sigma1);
        let uv = deriv_bracket(&u, &v);
        let vu = deriv_bracket(&v, &u);
        assert_eq!(uv.a, -&vu.a);
        assert!(deriv_bracket(&TangentialDeriv::zero(), &v).is_zero());
    }

    #[test]
    fn ihara() {
        let f = sigma1(&x(), &y());
        assert!(ihara_bracket(&f, &f).is_zero());
        let g = ad_n(&x(), 2, &y());
        assert_eq!(ihara_bracket(&f, &g), -&ihara_bracket(&g, &f));
        // D_f kills x, so only D_x contributes against the plain bracket
        let dx = TangentialDeriv::new(NcPoly::zero(), bracket(&y(), &x()));
        assert_eq!(ihara_bracket(&g, &x()), &bracket(&g, &x()) - &deriv_act(&dx, &g));
    }

    #[test]
    fn depth_parts() {
        let xy = bracket(&x(), &y());
        assert_eq!(xy.depth_part(1), xy);
        assert!(NcPoly::word(&[X, X, X]).depth_part(1).is_zero());
        let (n, c) = nu(sigma5).b.depth_part(1).as_ad_x_multiple().unwrap();
        assert_eq!(n, 4);
        assert!(!c.is_zero());
    }

    #[test]
    fn pentagon_constant() {
        let c = solve_pentagon_constant();
        assert_eq!(c, q(-1, 4));
        assert!((q(1, 2) + q(2, 1) * c).is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(bracket(&x(), &y()).scale(&q(1, 2)).to_string(), "1/2 xy - 1/2 yx");
        assert_eq!(NcPoly::zero().to_string(), "0");
    }
}
