//! Open diagrams as operators on tensor powers of the group algebra.
//!
//! Conventions: an internal edge `[a, b]` carries its value from the vertex
//! of `a` to the vertex of `b`. In-legs carry their value into the diagram,
//! out-legs out of it. Every vertex conserves flow, and its factor is
//! `(-1)^(incoming) · W(outflows)`; every internal edge contributes
//! `exp(2πi·qform(value))`.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use super::{cyclic_order, qform_table, w_numerator, ComplexValue, ExactComplex};
use crate::diagram::{canonicalize, JacobiGraph};
use crate::error::{LmoError, Result};
use crate::homology::{mod1, TorsionData};

/// Upper bound on the number of decorations enumerated for one operator.
pub const MAX_DECORATIONS: u128 = 2_000_000_000;

pub type OperatorKey = (Vec<u64>, Vec<u64>);

#[derive(Clone, Debug, PartialEq)]
pub struct DecoratedOperator {
    pub in_arity: usize,
    pub out_arity: usize,
    pub group: TorsionData,
    /// Nonzero entries only, keyed by (input tuple, output tuple) of residues.
    pub entries: BTreeMap<OperatorKey, ExactComplex>,
}

impl DecoratedOperator {
    /// `δ_{g,h}` on one strand.
    pub fn identity(t: &TorsionData) -> Result<Self> {
        let p = cyclic_order(t)?;
        let entries = (0..p).map(|g| ((vec![g], vec![g]), ExactComplex::one())).collect();
        Ok(DecoratedOperator { in_arity: 1, out_arity: 1, group: t.clone(), entries })
    }

    pub fn entry(&self, ins: &[u64], outs: &[u64]) -> ExactComplex {
        self.entries.get(&(ins.to_vec(), outs.to_vec())).cloned().unwrap_or_default()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }
}

#[derive(Clone, Copy)]
enum Flow {
    /// Internal edge from `tail` to `head`.
    Internal { tail: usize, head: usize },
    In { at: usize },
    Out { at: usize },
}

impl Flow {
    fn ends(self, infinity: usize) -> (usize, usize) {
        match self {
            Flow::Internal { tail, head } => (tail, head),
            Flow::In { at } => (infinity, at),
            Flow::Out { at } => (at, infinity),
        }
    }
}

/// Operator of an open diagram whose first `in_arity` legs are inputs and
/// remaining legs outputs. All decorations consistent with conservation are
/// enumerated; entries with equal leg values are summed.
pub fn operator_of_open_diagram(d: &JacobiGraph, in_arity: usize, t: &TorsionData) -> Result<DecoratedOperator> {
    build_operator(d, in_arity, t, false)
}

/// With `diagonal_only`, only entries whose input and output tuples agree are
/// kept; traces need nothing else.
fn build_operator(d: &JacobiGraph, in_arity: usize, t: &TorsionData, diagonal_only: bool) -> Result<DecoratedOperator> {
    d.validate()?;
    if in_arity > d.num_legs() {
        return Err(LmoError::Argument(format!("{in_arity} inputs requested but diagram has {} legs", d.num_legs())));
    }
    let p = cyclic_order(t)?;
    let qf = qform_table(t)?;
    let nv = d.num_vertices();
    let inf = nv;

    // flows: legs first, then internal edges in stored order
    let mut flows: Vec<Flow> = Vec::new();
    let mut half_flow: BTreeMap<u32, usize> = BTreeMap::new();
    for (i, &leg) in d.legs.iter().enumerate() {
        let h = d.partner(leg).expect("validated leg");
        let at = d.vertex_of(h).expect("leg attached to a vertex");
        half_flow.insert(h, flows.len());
        flows.push(if i < in_arity { Flow::In { at } } else { Flow::Out { at } });
    }
    let mut internal = Vec::new();
    let mut tails = std::collections::BTreeSet::new();
    for [a, b] in d.internal_edges() {
        tails.insert(a);
        let (tail, head) = (d.vertex_of(a).unwrap(), d.vertex_of(b).unwrap());
        half_flow.insert(a, flows.len());
        half_flow.insert(b, flows.len());
        internal.push(flows.len());
        flows.push(Flow::Internal { tail, head });
    }

    let vertex_ports: Vec<[(usize, bool); 3]> = d
        .vertices
        .iter()
        .map(|hs| {
            hs.map(|h| {
                let fi = half_flow[&h];
                let leaving = match flows[fi] {
                    Flow::Internal { .. } => tails.contains(&h),
                    Flow::In { .. } => false,
                    Flow::Out { .. } => true,
                };
                (fi, leaving)
            })
        })
        .collect();

    // incidence with the point at infinity as an extra node
    let nodes = nv + 1;
    let mut incident: Vec<Vec<usize>> = vec![vec![]; nodes];
    for (i, f) in flows.iter().enumerate() {
        let (u, v) = f.ends(inf);
        if u != v {
            incident[u].push(i);
            incident[v].push(i);
        }
    }
    let mut parent_flow = vec![usize::MAX; nodes];
    let mut visited = vec![false; nodes];
    let mut order = Vec::new();
    let roots = std::iter::once(inf).chain(0..nv);
    for root in roots {
        if visited[root] || (root == inf && d.legs.is_empty()) {
            continue;
        }
        visited[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &fi in &incident[u] {
                let (a, b) = flows[fi].ends(inf);
                let w = if a == u { b } else { a };
                if !visited[w] {
                    visited[w] = true;
                    parent_flow[w] = fi;
                    queue.push_back(w);
                }
            }
        }
    }
    let is_tree: Vec<bool> = (0..flows.len()).map(|fi| parent_flow.contains(&fi)).collect();
    let free: Vec<usize> = (0..flows.len()).filter(|&fi| !is_tree[fi]).collect();
    let count = (p as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    if count > MAX_DECORATIONS {
        return Err(LmoError::Unsupported(format!("{count} decorations exceed the enumeration limit")));
    }

    let den = BigInt::from(8 * p * p * p).pow(nv as u32);
    let mut acc: BTreeMap<OperatorKey, BTreeMap<Rational64, BigInt>> = BTreeMap::new();
    let mut values = vec![0u64; flows.len()];
    let mut digits = vec![0u64; free.len()];
    let neg = |x: u64| (p - x % p) % p;
    loop {
        for (k, &fi) in free.iter().enumerate() {
            values[fi] = digits[k];
        }
        // determine tree flows from the leaves up
        for &u in order.iter().rev() {
            let fi = parent_flow[u];
            if fi == usize::MAX {
                continue;
            }
            let mut out = 0u64;
            for &fj in &incident[u] {
                if fj == fi {
                    continue;
                }
                let (a, _) = flows[fj].ends(inf);
                out = (out + if a == u { values[fj] } else { neg(values[fj]) }) % p;
            }
            let (a, _) = flows[fi].ends(inf);
            values[fi] = if a == u { neg(out) } else { out };
        }
        let diagonal = (0..in_arity).all(|i| in_arity + i < d.num_legs() && values[i] == values[in_arity + i]);
        if diagonal_only && !diagonal {
            if advance(&mut digits, p) {
                continue;
            }
            break;
        }
        // vertex factors, in i128 while the product fits
        let mut small: Option<i128> = Some(1);
        let mut num = BigInt::one();
        for ports in &vertex_ports {
            let mut outs = [0u64; 3];
            let mut incoming = 0;
            for (i, &(fi, leaving)) in ports.iter().enumerate() {
                if leaving {
                    outs[i] = values[fi];
                } else {
                    outs[i] = neg(values[fi]);
                    incoming += 1;
                }
            }
            let n = w_numerator(p, outs[0], outs[1], outs[2]);
            let n = if incoming % 2 == 1 { -n } else { n };
            if n == 0 {
                small = Some(0);
                break;
            }
            small = match small {
                Some(acc) => acc.checked_mul(n).or_else(|| {
                    num = BigInt::from(acc) * BigInt::from(n);
                    None
                }),
                None => {
                    num *= BigInt::from(n);
                    None
                }
            };
        }
        if let Some(v) = small {
            num = BigInt::from(v);
        }
        if !num.is_zero() {
            let mut phase = Rational64::zero();
            for &fi in &internal {
                phase += qf[values[fi] as usize];
            }
            let ins: Vec<u64> = (0..in_arity).map(|i| values[i]).collect();
            let outs: Vec<u64> = (in_arity..d.num_legs()).map(|i| values[i]).collect();
            let slot = acc.entry((ins, outs)).or_default().entry(mod1(phase)).or_insert_with(BigInt::zero);
            *slot += num;
        }
        if !advance(&mut digits, p) {
            break;
        }
    }
    let entries = acc
        .into_iter()
        .filter_map(|(key, phases)| {
            let mut e = ExactComplex::zero();
            for (phi, n) in phases {
                e.add_term(phi, BigRational::new(n, den.clone()));
            }
            (!e.is_zero()).then_some((key, e))
        })
        .collect();
    Ok(DecoratedOperator { in_arity, out_arity: d.num_legs() - in_arity, group: t.clone(), entries })
}

/// Odometer step over `ℤ/p` digits; false once every tuple has been seen.
fn advance(digits: &mut [u64], p: u64) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}

pub fn trace(op: &DecoratedOperator) -> Result<ComplexValue> {
    if op.in_arity != op.out_arity {
        return Err(LmoError::Argument(format!("trace of a {} -> {} operator", op.in_arity, op.out_arity)));
    }
    let mut e = ExactComplex::zero();
    for ((ins, outs), v) in &op.entries {
        if ins == outs {
            e.add_assign(v);
        }
    }
    Ok(ComplexValue::from_exact(e))
}

/// Cuts the edges outside a BFS spanning tree of the canonical form of `g`.
/// Each cut edge `a -> b` becomes an in-leg at `b` and an out-leg at `a`;
/// in-legs come first, both in cut order. Returns the open diagram and the
/// number of cut edges.
pub fn cut_closed_diagram(g: &JacobiGraph) -> Result<(JacobiGraph, usize)> {
    let c = canonicalize(g)?.graph;
    let nv = c.num_vertices();
    let edges = c.internal_edges();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![vec![]; nv];
    for (i, &[a, b]) in edges.iter().enumerate() {
        let (u, v) = (c.vertex_of(a).unwrap(), c.vertex_of(b).unwrap());
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    let mut in_tree = vec![false; edges.len()];
    let mut seen = vec![false; nv];
    if nv > 0 {
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &(w, i) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    in_tree[i] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut next = c.union_offset();
    let mut kept = Vec::new();
    let mut in_legs = Vec::new();
    let mut out_legs = Vec::new();
    for (i, &[a, b]) in edges.iter().enumerate() {
        if in_tree[i] {
            kept.push([a, b]);
        } else {
            in_legs.push((b, next));
            out_legs.push((a, next + 1));
            next += 2;
        }
    }
    let k = in_legs.len();
    let mut legs = Vec::new();
    for &(h, l) in in_legs.iter().chain(&out_legs) {
        legs.push(l);
        kept.push([h, l]);
    }
    Ok((JacobiGraph::new(c.vertices.clone(), legs, kept)?, k))
}

/// Trace of the cut diagram with the edge factors of the cut edges restored,
/// normalized by `1/|G|^(#edges)`.
pub fn closed_diagram_eval(g: &JacobiGraph, t: &TorsionData) -> Result<ComplexValue> {
    g.validate()?;
    if !g.is_closed() {
        return Err(LmoError::Argument("closed diagram expected, found legs".into()));
    }
    if g.num_vertices() == 0 {
        return Ok(ComplexValue::from_exact(ExactComplex::one()));
    }
    if !g.is_connected() {
        return Err(LmoError::Argument("closed diagram must be connected".into()));
    }
    let p = cyclic_order(t)?;
    let qf = qform_table(t)?;
    let (d, k) = cut_closed_diagram(g)?;
    let op = build_operator(&d, k, t, true)?;
    let mut e = ExactComplex::zero();
    for ((ins, outs), v) in &op.entries {
        if ins != outs {
            continue;
        }
        let completion: Rational64 = ins.iter().map(|&x| qf[x as usize]).sum();
        e.add_assign(&v.mul(&ExactComplex::phase(completion)));
    }
    let edges = g.internal_edges().len() as u32;
    let norm = BigRational::new(BigInt::one(), BigInt::from(p).pow(edges));
    Ok(ComplexValue::from_exact(e.scale(&norm)))
}
