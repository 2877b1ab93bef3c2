//! Leg-gluing operator, derived brackets and the connected sum.

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::diagram::{DiagramSum, JacobiGraph};
use crate::error::{LmoError, Result};
use crate::rewrite::normal_form;

fn koszul(exp: usize) -> BigRational {
    if exp.is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// Raw graphs obtained by gluing each unordered pair of distinct legs.
pub fn leg_gluings(g: &JacobiGraph) -> Vec<JacobiGraph> {
    let n = g.num_legs();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(g.glue_legs(i, j).expect("leg indices in range"));
        }
    }
    out
}

/// `∂_H`: sum over unordered pairs of legs of the graph with those legs joined.
pub fn d_h(s: &DiagramSum) -> DiagramSum {
    let mut out = DiagramSum::zero();
    for (g, c) in s.iter() {
        for h in leg_gluings(g) {
            out.add_graph(&h, c).expect("gluing keeps graphs valid");
        }
    }
    out
}

pub fn d_h_graph(g: &JacobiGraph) -> DiagramSum {
    let mut out = DiagramSum::zero();
    for h in leg_gluings(g) {
        out.add_graph(&h, &BigRational::one()).expect("gluing keeps graphs valid");
    }
    out
}

fn single(g: &JacobiGraph, c: &BigRational) -> DiagramSum {
    let mut s = DiagramSum::zero();
    s.add_canonical(g.clone(), c.clone());
    s
}

/// `(-1)^|a| (∂(a⊔b) - ∂a⊔b - (-1)^|a| a⊔∂b)`, extended bilinearly.
pub fn l2(a: &DiagramSum, b: &DiagramSum) -> DiagramSum {
    let mut out = DiagramSum::zero();
    for (ga, ca) in a.iter() {
        for (gb, cb) in b.iter() {
            let (sa, sb) = (single(ga, ca), single(gb, cb));
            let mut t = d_h(&sa.disjoint_union(&sb));
            t = &t - &d_h(&sa).disjoint_union(&sb);
            t.add_assign_scaled(&sa.disjoint_union(&d_h(&sb)), &-koszul(ga.degree()));
            out.add_assign_scaled(&t, &koszul(ga.degree()));
        }
    }
    out
}

/// Derived bracket before the IHX projection.
///
/// `Σ_S (-1)^{k-|S|} κ(S) ∂(⊔_{i∈S} a_i) ⊔ ⊔_{j∉S} a_j`, where `κ(S)` is the
/// Koszul sign of moving `∂` past the factors outside `S` that precede the
/// last element of `S`. For `k ≥ 2` the sum carries the prefactor
/// `(-1)^{|a_1|}`, which makes `k = 2` coincide with [`l2`].
pub fn l_k_raw(args: &[DiagramSum]) -> Result<DiagramSum> {
    let k = args.len();
    if k == 0 {
        return Err(LmoError::Argument("l_k needs at least one argument".into()));
    }
    let mut out = DiagramSum::zero();
    let mut tuple: Vec<(JacobiGraph, BigRational)> = Vec::with_capacity(k);
    expand(args, &mut tuple, &mut |terms| {
        let coeff: BigRational = terms.iter().map(|(_, c)| c.clone()).product();
        let degs: Vec<usize> = terms.iter().map(|(g, _)| g.degree()).collect();
        let pre = if k >= 2 { koszul(degs[0]) } else { BigRational::one() };
        for mask in 1u32..(1 << k) {
            let last = 31 - mask.leading_zeros() as usize;
            let passed: usize = (0..last).filter(|&j| mask & (1 << j) == 0).map(|j| degs[j]).sum();
            let sign = koszul(k - mask.count_ones() as usize + passed);
            let mut inside = JacobiGraph::empty();
            let mut outside = JacobiGraph::empty();
            for (i, (g, _)) in terms.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    inside = inside.disjoint_union(g);
                } else {
                    outside = outside.disjoint_union(g);
                }
            }
            let scale = &coeff * &sign * &pre;
            for glued in leg_gluings(&inside) {
                out.add_graph(&glued.disjoint_union(&outside), &scale).expect("valid graphs");
            }
        }
    });
    Ok(out)
}

fn expand(
    args: &[DiagramSum],
    tuple: &mut Vec<(JacobiGraph, BigRational)>,
    visit: &mut dyn FnMut(&[(JacobiGraph, BigRational)]),
) {
    if tuple.len() == args.len() {
        visit(tuple);
        return;
    }
    for (g, c) in args[tuple.len()].iter() {
        tuple.push((g.clone(), c.clone()));
        expand(args, tuple, visit);
        tuple.pop();
    }
}

/// Derived bracket followed by the IHX normal form.
pub fn l_k(args: &[DiagramSum]) -> Result<DiagramSum> {
    Ok(normal_form(&l_k_raw(args)?)?.0)
}

/// All raw connected-sum graphs of two graphs: every pair of internal edges,
/// straight reconnection before twisted.
pub fn connected_sum_terms(a: &JacobiGraph, b: &JacobiGraph) -> Vec<JacobiGraph> {
    let mut out = Vec::new();
    for e1 in a.internal_edges() {
        for e2 in b.internal_edges() {
            for twisted in [false, true] {
                out.push(a.connect(b, e1, e2, twisted));
            }
        }
    }
    out
}

pub fn connected_sum(a: &DiagramSum, b: &DiagramSum) -> DiagramSum {
    let mut out = DiagramSum::zero();
    for (ga, ca) in a.iter() {
        for (gb, cb) in b.iter() {
            let c = ca * cb;
            for g in connected_sum_terms(ga, gb) {
                out.add_graph(&g, &c).expect("valid graphs");
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axiom {
    CS2,
    CS3,
    CS6,
}

impl std::str::FromStr for Axiom {
    type Err = LmoError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "CS2" => Ok(Axiom::CS2),
            "CS3" => Ok(Axiom::CS3),
            "CS6" => Ok(Axiom::CS6),
            _ => Err(LmoError::Argument(format!("unknown axiom {s}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AxiomInputs {
    pub graphs: Vec<JacobiGraph>,
    /// Grafting legs `(a, b)`: leg `a` of the first graph, leg `b` of the second.
    pub legs: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    EqualInNormalForm,
    Unequal,
}

#[derive(Clone, Debug, Default)]
pub struct GraftParts {
    pub part_a: DiagramSum,
    pub part_b: DiagramSum,
    pub part_c: DiagramSum,
    /// Part A coincides with the left-hand side before any rewriting.
    pub part_a_matches_lhs: bool,
    /// Normal form of Part B + Part C is zero.
    pub surplus_vanishes: bool,
    pub surplus_normal_form: DiagramSum,
}

#[derive(Clone, Debug)]
pub struct OperatorReport {
    pub axiom: Axiom,
    pub inputs: Vec<JacobiGraph>,
    pub lhs: DiagramSum,
    pub rhs: DiagramSum,
    pub verdict: Verdict,
    /// Normal form of `lhs - rhs`.
    pub witness: DiagramSum,
    pub graft: Option<GraftParts>,
}

fn sum_of(g: &JacobiGraph) -> Result<DiagramSum> {
    DiagramSum::from_graph(g)
}

pub fn check_axiom(axiom: Axiom, inputs: &AxiomInputs) -> Result<OperatorReport> {
    let gs = &inputs.graphs;
    let need = match axiom {
        Axiom::CS2 => 2,
        Axiom::CS3 | Axiom::CS6 => 3,
    };
    if gs.len() != need {
        return Err(LmoError::Argument(format!("{axiom:?} takes {need} graphs, got {}", gs.len())));
    }
    for g in gs {
        g.validate()?;
    }
    let (lhs, rhs, graft) = match axiom {
        Axiom::CS2 => {
            let (a, b) = (sum_of(&gs[0])?, sum_of(&gs[1])?);
            (connected_sum(&a, &b), connected_sum(&b, &a), None)
        }
        Axiom::CS3 => {
            let (a, b, c) = (sum_of(&gs[0])?, sum_of(&gs[1])?, sum_of(&gs[2])?);
            (
                connected_sum(&connected_sum(&a, &b), &c),
                connected_sum(&a, &connected_sum(&b, &c)),
                None,
            )
        }
        Axiom::CS6 => {
            let (la, lb) = inputs
                .legs
                .ok_or_else(|| LmoError::Argument("CS6 needs a grafting leg pair".into()))?;
            let (lhs, rhs, parts) = graft_surplus(&gs[0], la, &gs[1], lb, &gs[2])?;
            (lhs, rhs, Some(parts))
        }
    };
    let witness = normal_form(&(&lhs - &rhs))?.0;
    let verdict = if witness.is_zero() { Verdict::EqualInNormalForm } else { Verdict::Unequal };
    Ok(OperatorReport { axiom, inputs: gs.clone(), lhs, rhs, verdict, witness, graft })
}

/// Compares `a ∘_b (Γ1 ⊗ (Γ2 # Γ3))` with `(a ∘_b (Γ1 ⊗ Γ2)) # Γ3`, splitting
/// the right side by where the cut edge of the grafted graph comes from:
/// Γ2 (Part A), Γ1 (Part B) or the grafting edge (Part C).
fn graft_surplus(
    g1: &JacobiGraph,
    a: usize,
    g2: &JacobiGraph,
    b: usize,
    g3: &JacobiGraph,
) -> Result<(DiagramSum, DiagramSum, GraftParts)> {
    if a >= g1.num_legs() || b >= g2.num_legs() {
        return Err(LmoError::Argument("grafting legs out of range".into()));
    }
    let one = BigRational::one();
    let mut lhs = DiagramSum::zero();
    for h in connected_sum_terms(g2, g3) {
        // g2's legs come first in g2 # g3, so leg b keeps its index
        let (grafted, _) = g1.graft(a, &h, b)?;
        lhs.add_graph(&grafted, &one)?;
    }
    let (grafted, new_edge) = g1.graft(a, g2, b)?;
    let off = g1.union_offset();
    let mut parts = GraftParts::default();
    for f in grafted.internal_edges() {
        let target = if f == new_edge {
            &mut parts.part_c
        } else if f.iter().all(|&h| h < off) {
            &mut parts.part_b
        } else {
            &mut parts.part_a
        };
        for e3 in g3.internal_edges() {
            for twisted in [false, true] {
                target.add_graph(&grafted.connect(g3, f, e3, twisted), &one)?;
            }
        }
    }
    let rhs = &(&parts.part_a + &parts.part_b) + &parts.part_c;
    parts.part_a_matches_lhs = parts.part_a == lhs;
    let surplus = &parts.part_b + &parts.part_c;
    parts.surplus_normal_form = normal_form(&surplus)?.0;
    parts.surplus_vanishes = parts.surplus_normal_form.is_zero();
    Ok((lhs, rhs, parts))
}

/// The `n = 3` generalized Jacobi expression
/// `Σ_{i+j=4} Σ_σ χ(σ) (-1)^{i(j-1)} l_j(l_i(v_σ1..v_σi), v_σ(i+1)..v_σ3)`
/// over (i, 3-i)-unshuffles, with graded-antisymmetric Koszul signs `χ`,
/// returned after the IHX normal form. Inputs are single graphs.
pub fn jacobi3(v: [&JacobiGraph; 3]) -> Result<DiagramSum> {
    Ok(normal_form(&jacobi3_raw(v)?)?.0)
}

pub fn jacobi3_raw(v: [&JacobiGraph; 3]) -> Result<DiagramSum> {
    let deg: Vec<usize> = v.iter().map(|g| g.degree()).collect();
    let sums: Vec<DiagramSum> = v.iter().map(|g| sum_of(g)).collect::<Result<_>>()?;
    let mut total = DiagramSum::zero();
    for i in 1..=3usize {
        let j = 4 - i;
        for mask in 0u32..8 {
            if mask.count_ones() as usize != i {
                continue;
            }
            let first: Vec<usize> = (0..3).filter(|&t| mask & (1 << t) != 0).collect();
            let rest: Vec<usize> = (0..3).filter(|&t| mask & (1 << t) == 0).collect();
            // each inversion of the unshuffle contributes -(-1)^{|x||y|}
            let mut chi = 0usize;
            for &x in &first {
                for &y in &rest {
                    if y < x {
                        chi += 1 + deg[x] * deg[y];
                    }
                }
            }
            let inner = l_k_raw(&first.iter().map(|&t| sums[t].clone()).collect::<Vec<_>>())?;
            let mut outer_args = vec![inner];
            outer_args.extend(rest.iter().map(|&t| sums[t].clone()));
            let term = l_k_raw(&outer_args)?;
            total.add_assign_scaled(&term, &koszul(chi + i * (j - 1)));
        }
    }
    Ok(total)
}
