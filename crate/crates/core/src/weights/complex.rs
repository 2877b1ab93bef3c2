use std::collections::BTreeMap;

use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};

use crate::homology::mod1;

/// `Σ c · exp(2πi·φ)` with rational phases `φ ∈ [0, 1)` and rational
/// coefficients. Terms with equal phase are combined exactly; no relation
/// between distinct roots of unity is applied.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactComplex {
    terms: BTreeMap<Rational64, BigRational>,
}

impl ExactComplex {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::phase(Rational64::zero())
    }

    /// `exp(2πi·φ)`.
    pub fn phase(phi: Rational64) -> Self {
        let mut e = Self::zero();
        e.add_term(phi, BigRational::from_integer(1.into()));
        e
    }

    pub fn add_term(&mut self, phi: Rational64, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let key = mod1(phi);
        let slot = self.terms.entry(key).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_assign(&mut self, other: &ExactComplex) {
        for (phi, c) in &other.terms {
            self.add_term(*phi, c.clone());
        }
    }

    pub fn scale(&self, q: &BigRational) -> ExactComplex {
        let mut out = ExactComplex::zero();
        for (phi, c) in &self.terms {
            out.add_term(*phi, c * q);
        }
        out
    }

    pub fn mul(&self, other: &ExactComplex) -> ExactComplex {
        let mut out = ExactComplex::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(*a + *b, ca * cb);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational64, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Float value, summed in phase order.
    pub fn to_f64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (phi, c) in &self.terms {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * (*phi.numer() as f64) / (*phi.denom() as f64);
            re += c * angle.cos();
            im += c * angle.sin();
        }
        (re, im)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
    pub exact: Option<ExactComplex>,
}

impl ComplexValue {
    pub fn from_exact(e: ExactComplex) -> Self {
        let (re, im) = e.to_f64();
        ComplexValue { re, im, exact: Some(e) }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        ComplexValue { re, im, exact: None }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn dist(&self, other: &ComplexValue) -> f64 {
        (self.re - other.re).hypot(self.im - other.im)
    }

    pub fn conj(&self) -> ComplexValue {
        let exact = self.exact.as_ref().map(|e| {
            let mut out = ExactComplex::zero();
            for (phi, c) in e.terms() {
                out.add_term(-*phi, c.clone());
            }
            out
        });
        ComplexValue { re: self.re, im: -self.im, exact }
    }
}
