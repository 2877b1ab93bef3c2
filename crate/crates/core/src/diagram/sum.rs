use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::canon::canonicalize;
use super::graph::JacobiGraph;
use crate::error::Result;

/// Finite ℚ-linear combination of canonical graphs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiagramSum {
    terms: BTreeMap<JacobiGraph, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl DiagramSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_graph(g: &JacobiGraph) -> Result<Self> {
        let mut s = Self::zero();
        s.add_graph(g, &BigRational::one())?;
        Ok(s)
    }

    pub fn from_graphs<'a>(gs: impl IntoIterator<Item = &'a JacobiGraph>) -> Result<Self> {
        let mut s = Self::zero();
        for g in gs {
            s.add_graph(g, &BigRational::one())?;
        }
        Ok(s)
    }

    /// Adds `coeff * g`, canonicalizing `g` first.
    pub fn add_graph(&mut self, g: &JacobiGraph, coeff: &BigRational) -> Result<()> {
        let c = canonicalize(g)?;
        if c.sign != 0 {
            let signed = if c.sign < 0 { -coeff.clone() } else { coeff.clone() };
            self.add_canonical(c.graph, signed);
        }
        Ok(())
    }

    /// Adds a term whose graph is already canonical with sign +1.
    pub(crate) fn add_canonical(&mut self, g: JacobiGraph, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&JacobiGraph, &BigRational)> {
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

    pub fn coeff(&self, g: &JacobiGraph) -> BigRational {
        self.terms.get(g).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, q: &BigRational) -> DiagramSum {
        if q.is_zero() {
            return DiagramSum::zero();
        }
        DiagramSum { terms: self.terms.iter().map(|(g, c)| (g.clone(), c * q)).collect() }
    }

    pub fn add_assign_scaled(&mut self, other: &DiagramSum, q: &BigRational) {
        for (g, c) in &other.terms {
            self.add_canonical(g.clone(), c * q);
        }
    }

    /// Bilinear disjoint union.
    pub fn disjoint_union(&self, other: &DiagramSum) -> DiagramSum {
        let mut out = DiagramSum::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_graph(&a.disjoint_union(b), &(ca * cb)).expect("union of valid graphs");
            }
        }
        out
    }
}

pub fn disjoint_union(a: &DiagramSum, b: &DiagramSum) -> DiagramSum {
    a.disjoint_union(b)
}

impl Add for &DiagramSum {
    type Output = DiagramSum;
    fn add(self, rhs: &DiagramSum) -> DiagramSum {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &BigRational::one());
        out
    }
}

impl Sub for &DiagramSum {
    type Output = DiagramSum;
    fn sub(self, rhs: &DiagramSum) -> DiagramSum {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &-BigRational::one());
        out
    }
}

impl Neg for &DiagramSum {
    type Output = DiagramSum;
    fn neg(self) -> DiagramSum {
        self.scale(&-BigRational::one())
    }
}
