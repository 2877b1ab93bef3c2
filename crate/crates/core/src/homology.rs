//! Smith normal form, torsion linking data of surgery presentations and
//! Kirby moves on linking matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{LmoError, Result};

pub type IntMatrix = Vec<Vec<i64>>;

pub const DEFAULT_SEARCH_BOUND: u64 = 5000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingMatrix {
    pub n: usize,
    pub entries: IntMatrix,
}

impl LinkingMatrix {
    pub fn new(entries: IntMatrix) -> Result<Self> {
        let n = entries.len();
        let m = LinkingMatrix { n, entries };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(LmoError::Argument(format!("linking matrix is not {0}x{0}", self.n)));
        }
        for i in 0..self.n {
            for j in 0..i {
                if self.entries[i][j] != self.entries[j][i] {
                    return Err(LmoError::Argument(format!("linking matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        LinkingMatrix { n, entries }
    }

    pub fn diagonal(d: &[i64]) -> Self {
        let n = d.len();
        let entries = (0..n).map(|i| (0..n).map(|j| if i == j { d[i] } else { 0 }).collect()).collect();
        LinkingMatrix { n, entries }
    }

    /// Linear chain for `p/q = a1 - 1/(a2 - 1/(...))`, a surgery presentation of L(p, q).
    pub fn lens_chain(p: i64, q: i64) -> Result<Self> {
        if p < 1 || gcd(p, q) != 1 {
            return Err(LmoError::Argument(format!("lens parameters ({p}, {q}) must be coprime, p >= 1")));
        }
        let mut coeffs = Vec::new();
        let (mut a, mut b) = (p, q.rem_euclid(p));
        if b == 0 {
            // p = 1
            return Ok(LinkingMatrix::diagonal(&[1]));
        }
        while b != 0 {
            let c = (a + b - 1) / b; // ceiling
            coeffs.push(c);
            let r = c * b - a;
            a = b;
            b = r;
        }
        let n = coeffs.len();
        let mut entries = vec![vec![0i64; n]; n];
        for i in 0..n {
            entries[i][i] = coeffs[i];
            if i + 1 < n {
                entries[i][i + 1] = 1;
                entries[i + 1][i] = 1;
            }
        }
        Ok(LinkingMatrix { n, entries })
    }

    pub fn determinant(&self) -> BigInt {
        let mut m: Vec<Vec<BigRational>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let n = self.n;
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return BigInt::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= &m[c][c];
            for r in c + 1..n {
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let sub = &f * &m[c][k];
                    m[r][k] -= sub;
                }
            }
        }
        det.to_integer()
    }

    fn inverse(&self) -> Option<Vec<Vec<BigRational>>> {
        let n = self.n;
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            BigRational::from_integer(self.entries[i][j].into())
                        } else {
                            BigRational::from_integer(BigInt::from(i64::from(j - n == i)))
                        }
                    })
                    .collect()
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !m[r][c].is_zero())?;
            m.swap(p, c);
            let piv = m[c][c].clone();
            for k in 0..2 * n {
                m[c][k] = &m[c][k] / &piv;
            }
            for r in 0..n {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    for k in 0..2 * n {
                        let sub = &f * &m[c][k];
                        m[r][k] -= sub;
                    }
                }
            }
        }
        Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `u`, used to lift cokernel generators.
    pub u_inv: IntMatrix,
}

fn to_i64(m: Vec<Vec<i128>>) -> IntMatrix {
    m.into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("SNF entry fits in i64")).collect())
        .collect()
}

fn eye(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect())
        .collect()
}

/// `U·B·V = D` with unimodular `U`, `V` and `D` diagonal with
/// `d1 | d2 | ...`, nonnegative, zeros last. The pivot is always the entry of
/// smallest absolute value in the active block, first in row-major order.
pub fn smith_normal_form(b: &IntMatrix) -> Snf {
    let m = b.len();
    let n = b.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = b.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u = eye(m);
    let mut ui = eye(m);
    let mut v = eye(n);

    let swap_rows = |a: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, ui: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        a.swap(i, j);
        u.swap(i, j);
        for row in ui.iter_mut() {
            row.swap(i, j);
        }
    };
    // row_i += c * row_j
    let add_row = |a: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, ui: &mut Vec<Vec<i128>>, i: usize, j: usize, c: i128| {
        for k in 0..a[0].len() {
            a[i][k] += c * a[j][k];
        }
        for k in 0..u[0].len() {
            u[i][k] += c * u[j][k];
        }
        for row in ui.iter_mut() {
            row[j] -= c * row[i];
        }
    };
    let swap_cols = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    // col_i += c * col_j
    let add_col = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, i: usize, j: usize, c: i128| {
        for row in a.iter_mut() {
            row[i] += c * row[j];
        }
        for row in v.iter_mut() {
            row[i] += c * row[j];
        }
    };

    for t in 0..m.min(n) {
        loop {
            // smallest nonzero in the active block, row-major
            let mut best: Option<(i128, usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = a[i][j].abs();
                    if x != 0 && best.is_none_or(|(bx, _, _)| x < bx) {
                        best = Some((x, i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                break;
            };
            if pi != t {
                swap_rows(&mut a, &mut u, &mut ui, t, pi);
            }
            if pj != t {
                swap_cols(&mut a, &mut v, t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..m {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    add_row(&mut a, &mut u, &mut ui, i, t, -q);
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    add_col(&mut a, &mut v, j, t, -q);
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => add_row(&mut a, &mut u, &mut ui, t, i, 1),
                None => break,
            }
        }
        if t < m && t < n && a[t][t] < 0 {
            for k in 0..n {
                a[t][k] = -a[t][k];
            }
            for k in 0..m {
                u[t][k] = -u[t][k];
            }
            for row in ui.iter_mut() {
                row[t] = -row[t];
            }
        }
    }
    let snf = Snf { u: to_i64(u), d: to_i64(a), v: to_i64(v), u_inv: to_i64(ui) };
    if cfg!(debug_assertions) {
        assert_eq!(mat_mul(&mat_mul(&snf.u, b), &snf.v), snf.d, "SNF postcondition U·B·V = D");
        assert_eq!(mat_mul(&snf.u, &snf.u_inv), to_i64(eye(m)), "U·U⁻¹ = I");
    }
    snf
}

fn frac_mod1(x: &BigRational) -> Rational64 {
    let f = x - x.floor();
    Rational64::new(f.numer().to_i64().expect("small numerator"), f.denom().to_i64().expect("small denominator"))
}

pub fn mod1(x: Rational64) -> Rational64 {
    x - x.floor()
}

/// How the quadratic refinement is obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadraticRefinement {
    /// `q·g²/(2p)` on `ℤ/p` with `g` the least nonnegative residue.
    Lens { p: u64, q: i64 },
    /// `inv2 · λ(g, g)` for groups of odd order.
    OddOrder,
    /// Values supplied element by element.
    Explicit(BTreeMap<Vec<u64>, Rational64>),
}

/// Torsion of `H_1` with its linking form and optional quadratic refinement.
/// Elements are tuples of residues modulo the invariant factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionData {
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
    /// `λ(e_i, e_j)` on the generators, reduced mod 1; absent when the
    /// presentation is not a rational homology sphere.
    pub bilinear_gens: Option<Vec<Vec<Rational64>>>,
    pub qform: Option<QuadraticRefinement>,
}

impl TorsionData {
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &d in &self.invariant_factors {
            out = out
                .into_iter()
                .flat_map(|e: Vec<u64>| {
                    (0..d).map(move |x| {
                        let mut e = e.clone();
                        e.push(x);
                        e
                    })
                })
                .collect();
        }
        out
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        self.invariant_factors.iter().enumerate().map(|(i, &d)| (x[i] + y[i]) % d).collect()
    }

    pub fn neg(&self, x: &[u64]) -> Vec<u64> {
        self.invariant_factors.iter().enumerate().map(|(i, &d)| (d - x[i] % d) % d).collect()
    }

    pub fn bilinear(&self, x: &[u64], y: &[u64]) -> Option<Rational64> {
        let b = self.bilinear_gens.as_ref()?;
        let mut s = Rational64::zero();
        for i in 0..x.len().min(b.len()) {
            for j in 0..y.len().min(b.len()) {
                s = mod1(s + b[i][j] * Rational64::from_integer((x[i] * y[j]) as i64));
            }
        }
        Some(s)
    }

    pub fn qform(&self, x: &[u64]) -> Option<Rational64> {
        match self.qform.as_ref()? {
            QuadraticRefinement::Lens { p, q } => {
                let g = x.first().copied().unwrap_or(0) as i64;
                let p = *p as i64;
                Some(mod1(Rational64::new((q * g * g).rem_euclid(2 * p), 2 * p)))
            }
            QuadraticRefinement::OddOrder => {
                let e = *self.invariant_factors.last().unwrap_or(&1) as i64;
                let inv2 = (e + 1) / 2;
                Some(mod1(self.bilinear(x, x)? * Rational64::from_integer(inv2)))
            }
            QuadraticRefinement::Explicit(m) => m.get(x).copied(),
        }
    }

    pub fn with_explicit_qform(mut self, values: BTreeMap<Vec<u64>, Rational64>) -> Result<Self> {
        for e in self.elements() {
            if !values.contains_key(&e) {
                return Err(LmoError::Argument(format!("quadratic refinement missing element {e:?}")));
            }
        }
        self.qform = Some(QuadraticRefinement::Explicit(values.into_iter().map(|(k, v)| (k, mod1(v))).collect()));
        Ok(self)
    }
}

/// Cokernel of `B` with the linking form `x̃ᵀ B⁻¹ ỹ mod 1`.
pub fn torsion_data_from_matrix(b: &LinkingMatrix) -> Result<TorsionData> {
    b.validate()?;
    let snf = smith_normal_form(&b.entries);
    let n = b.n;
    let mut factors = Vec::new();
    let mut gens = Vec::new();
    let mut free_rank = 0;
    for i in 0..n {
        let d = snf.d[i][i];
        if d == 0 {
            free_rank += 1;
        } else if d > 1 {
            factors.push(d as u64);
            // generator of ℤ^n/Bℤ^n corresponding to e_i: column i of U⁻¹
            gens.push((0..n).map(|r| snf.u_inv[r][i]).collect::<Vec<i64>>());
        }
    }
    let bilinear_gens = if free_rank == 0 {
        let inv = b.inverse().expect("nonsingular");
        let lam = |x: &[i64], y: &[i64]| {
            let mut s = BigRational::zero();
            for i in 0..n {
                for j in 0..n {
                    s += &inv[i][j] * BigRational::from_integer((x[i] * y[j]).into());
                }
            }
            frac_mod1(&s)
        };
        Some(gens.iter().map(|x| gens.iter().map(|y| lam(x, y)).collect()).collect())
    } else {
        None
    };
    let order: u64 = factors.iter().product();
    let qform = (free_rank == 0 && order % 2 == 1).then_some(QuadraticRefinement::OddOrder);
    Ok(TorsionData { invariant_factors: factors, free_rank, bilinear_gens, qform })
}

/// Same as [`torsion_data_from_matrix`] but refuses non-QHS input.
pub fn torsion_data_qhs(b: &LinkingMatrix) -> Result<TorsionData> {
    let t = torsion_data_from_matrix(b)?;
    if t.free_rank > 0 {
        return Err(LmoError::Unsupported("matrix is singular: not a rational homology sphere".into()));
    }
    Ok(t)
}

pub fn lens_torsion_data(p: u64, q: i64) -> Result<TorsionData> {
    if p == 0 || gcd(p as i64, q) != 1 {
        return Err(LmoError::Argument(format!("lens parameters ({p}, {q}) must be coprime, p >= 1")));
    }
    if p == 1 {
        return Ok(TorsionData {
            invariant_factors: vec![],
            free_rank: 0,
            bilinear_gens: Some(vec![]),
            qform: Some(QuadraticRefinement::Lens { p, q }),
        });
    }
    let lam = mod1(Rational64::new(q.rem_euclid(p as i64), p as i64));
    Ok(TorsionData {
        invariant_factors: vec![p],
        free_rank: 0,
        bilinear_gens: Some(vec![vec![lam]]),
        qform: Some(QuadraticRefinement::Lens { p, q }),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KirbyMove {
    Stabilize { sign: i8 },
    Slide { i: usize, j: usize, sign: i8 },
}

pub fn kirby_stabilize(b: &LinkingMatrix, sign: i8) -> LinkingMatrix {
    let n = b.n + 1;
    let mut entries = vec![vec![0i64; n]; n];
    for i in 0..b.n {
        entries[i][..b.n].copy_from_slice(&b.entries[i]);
    }
    entries[b.n][b.n] = if sign < 0 { -1 } else { 1 };
    LinkingMatrix { n, entries }
}

/// `EᵀBE` with `E = I + sign·E_ij`.
pub fn kirby_slide(b: &LinkingMatrix, i: usize, j: usize, sign: i8) -> Result<LinkingMatrix> {
    if i == j || i >= b.n || j >= b.n {
        return Err(LmoError::Argument(format!("invalid slide indices ({i}, {j}) for n = {}", b.n)));
    }
    let mut e = LinkingMatrix::identity(b.n).entries;
    e[i][j] = if sign < 0 { -1 } else { 1 };
    let et: IntMatrix = (0..b.n).map(|r| (0..b.n).map(|c| e[c][r]).collect()).collect();
    Ok(LinkingMatrix { n: b.n, entries: mat_mul(&mat_mul(&et, &b.entries), &e) })
}

pub fn apply_move(b: &LinkingMatrix, m: KirbyMove) -> Result<LinkingMatrix> {
    match m {
        KirbyMove::Stabilize { sign } => Ok(kirby_stabilize(b, sign)),
        KirbyMove::Slide { i, j, sign } => kirby_slide(b, i, j, sign),
    }
}

fn element_order(t: &TorsionData, x: &[u64]) -> u64 {
    t.invariant_factors
        .iter()
        .zip(x)
        .map(|(&d, &xi)| d / d.gcd(&xi))
        .fold(1, |acc, o| acc.lcm(&o))
}

/// Exhaustive search for a group isomorphism carrying the form of `a` to
/// that of `b`. The quadratic refinements are compared when both sides carry
/// one; otherwise the bilinear forms are.
pub fn torsion_pair_equivalent(a: &TorsionData, b: &TorsionData, bound: u64) -> Result<bool> {
    if a.order() > bound || b.order() > bound {
        return Err(LmoError::Unsupported(format!("group order exceeds search bound {bound}")));
    }
    if a.invariant_factors != b.invariant_factors || a.free_rank != b.free_rank {
        return Ok(false);
    }
    let use_q = a.qform.is_some() && b.qform.is_some();
    if !use_q && (a.bilinear_gens.is_none() || b.bilinear_gens.is_none()) {
        // nothing beyond the group to compare
        return Ok(true);
    }
    let k = a.invariant_factors.len();
    let elems = b.elements();
    let candidates: Vec<Vec<Vec<u64>>> = (0..k)
        .map(|i| {
            let d = a.invariant_factors[i];
            let mut e_i = vec![0u64; k];
            e_i[i] = 1;
            elems
                .iter()
                .filter(|y| element_order(b, y) == d)
                .filter(|y| !use_q || a.qform(&e_i) == b.qform(y))
                .filter(|y| a.bilinear(&e_i, &e_i) == b.bilinear(y, y))
                .cloned()
                .collect()
        })
        .collect();
    let mut images: Vec<Vec<u64>> = Vec::with_capacity(k);
    Ok(search_iso(a, b, &candidates, &mut images, use_q))
}

fn search_iso(
    a: &TorsionData,
    b: &TorsionData,
    candidates: &[Vec<Vec<u64>>],
    images: &mut Vec<Vec<u64>>,
    use_q: bool,
) -> bool {
    let k = candidates.len();
    let i = images.len();
    if i == k {
        return check_iso(a, b, images, use_q);
    }
    for y in &candidates[i] {
        let ok = (0..i).all(|j| {
            let mut ei = vec![0u64; k];
            let mut ej = vec![0u64; k];
            ei[i] = 1;
            ej[j] = 1;
            a.bilinear(&ei, &ej) == b.bilinear(y, &images[j])
        });
        if ok {
            images.push(y.clone());
            if search_iso(a, b, candidates, images, use_q) {
                return true;
            }
            images.pop();
        }
    }
    false
}

fn check_iso(a: &TorsionData, b: &TorsionData, images: &[Vec<u64>], use_q: bool) -> bool {
    let map = |x: &[u64]| -> Vec<u64> {
        b.invariant_factors
            .iter()
            .enumerate()
            .map(|(j, &d)| x.iter().zip(images).map(|(&xi, img)| (xi % d) * img[j] % d).sum::<u64>() % d)
            .collect()
    };
    let elems = a.elements();
    let mut seen = std::collections::BTreeSet::new();
    for x in &elems {
        let y = map(x);
        if use_q && a.qform(x) != b.qform(&y) {
            return false;
        }
        if !seen.insert(y) {
            return false;
        }
    }
    true
}
