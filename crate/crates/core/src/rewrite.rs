//! IHX as a directed rewrite rule `I -> H - X` and the normal-form loop.

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::diagram::{canonicalize, count_i_configurations, i_configuration_pairs, DiagramSum, HalfEdge, JacobiGraph};
use crate::error::{LmoError, Result};

pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

/// Which term and which I-configuration a step rewrites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SelectionOrder {
    /// First term in canonical order, smallest I-configuration edge.
    #[default]
    First,
    /// Last term in canonical order, largest I-configuration edge.
    Last,
}

#[derive(Clone, Copy, Debug)]
pub struct RewriteConfig {
    pub max_steps: usize,
    pub order: SelectionOrder,
}

impl Default for RewriteConfig {
    fn default() -> Self {
        RewriteConfig { max_steps: DEFAULT_STEP_BUDGET, order: SelectionOrder::First }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RewriteStep {
    pub input: JacobiGraph,
    pub edge: [HalfEdge; 2],
    /// Canonical H and X with the signs they enter with (X carries the minus).
    pub outputs: Vec<(JacobiGraph, i8)>,
    pub input_count: usize,
    pub output_counts: Vec<usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
    /// Sorted multiset of I-configuration counts, one entry per term, per state.
    pub potential_history: Vec<Vec<usize>>,
}

pub enum StepOutcome {
    NoOp,
    Rewritten(DiagramSum, RewriteStep),
}

/// Edges `[h, k]` (h < k) of `g` forming I-configurations, sorted.
pub fn i_configurations(g: &JacobiGraph) -> Vec<[HalfEdge; 2]> {
    let c = g.compact();
    let pairs = i_configuration_pairs(&c);
    let mut out: Vec<[HalfEdge; 2]> = g
        .edges
        .iter()
        .filter_map(|&[a, b]| {
            let (v, w) = (g.vertex_of(a)?, g.vertex_of(b)?);
            let key = (v.min(w), v.max(w));
            (v != w && pairs.binary_search(&key).is_ok()).then_some([a.min(b), a.max(b)])
        })
        .collect();
    out.sort_unstable();
    out
}

fn rotate_to(v: [HalfEdge; 3], h: HalfEdge) -> [HalfEdge; 3] {
    match v.iter().position(|&x| x == h).expect("half-edge at vertex") {
        0 => v,
        1 => [v[1], v[2], v[0]],
        _ => [v[2], v[0], v[1]],
    }
}

/// The H and X reconnections around the I-bar `edge`, uncanonicalized.
///
/// With the two ends in cyclic order `(h, a, b)` and `(k, c, d)` the I graph is
/// the bracket `[[a, b], c]` with root `d`; H is `[a, [b, c]]` and X is
/// `[b, [a, c]]`, so that `I = H - X`.
pub fn ihx_resolve(g: &JacobiGraph, edge: [HalfEdge; 2]) -> Result<(JacobiGraph, JacobiGraph)> {
    let [h, k] = edge;
    let v = g.vertex_of(h).ok_or_else(|| LmoError::Argument(format!("{h} is not at a vertex")))?;
    let w = g.vertex_of(k).ok_or_else(|| LmoError::Argument(format!("{k} is not at a vertex")))?;
    if v == w || g.partner(h) != Some(k) {
        return Err(LmoError::Argument(format!("{h}-{k} is not an edge between distinct vertices")));
    }
    let [_, a, b] = rotate_to(g.vertices[v], h);
    let [_, c, d] = rotate_to(g.vertices[w], k);
    let make = |vv: [HalfEdge; 3], ww: [HalfEdge; 3]| {
        let mut out = g.clone();
        out.vertices[v] = vv;
        out.vertices[w] = ww;
        out
    };
    Ok((make([b, c, h], [a, k, d]), make([a, c, h], [b, k, d])))
}

pub fn ihx_step(s: &DiagramSum) -> Result<StepOutcome> {
    ihx_step_with(s, SelectionOrder::First)
}

pub fn ihx_step_with(s: &DiagramSum, order: SelectionOrder) -> Result<StepOutcome> {
    let pick = |(g, c): (&JacobiGraph, &BigRational)| {
        let configs = i_configurations(g);
        let e = match order {
            SelectionOrder::First => configs.first().copied(),
            SelectionOrder::Last => configs.last().copied(),
        };
        e.map(|e| (g.clone(), c.clone(), e))
    };
    let found = match order {
        SelectionOrder::First => s.iter().find_map(pick),
        SelectionOrder::Last => s.iter().rev().find_map(pick),
    };
    let Some((g, coeff, edge)) = found else {
        return Ok(StepOutcome::NoOp);
    };
    let (hg, xg) = ihx_resolve(&g, edge)?;
    let mut next = s.clone();
    next.add_canonical(g.clone(), -coeff.clone());
    let mut outputs = Vec::new();
    let mut output_counts = Vec::new();
    for (raw, sign) in [(hg, 1i8), (xg, -1i8)] {
        let c = canonicalize(&raw)?;
        if c.sign == 0 {
            continue;
        }
        let s = sign * c.sign;
        let term = if s > 0 { coeff.clone() } else { -coeff.clone() };
        output_counts.push(count_i_configurations(&c.graph));
        next.add_canonical(c.graph.clone(), term);
        outputs.push((c.graph, s));
    }
    let step = RewriteStep { input_count: count_i_configurations(&g), input: g, edge, outputs, output_counts };
    Ok(StepOutcome::Rewritten(next, step))
}

pub fn potential(s: &DiagramSum) -> Vec<usize> {
    let mut v: Vec<usize> = s.iter().map(|(g, _)| count_i_configurations(g)).collect();
    v.sort_unstable();
    v
}

/// Strict Dershowitz-Manna comparison `old > new` on sorted multisets.
pub fn multiset_greater(old: &[usize], new: &[usize]) -> bool {
    let mut o = old.to_vec();
    let mut n = new.to_vec();
    // cancel the common part
    let mut i = 0;
    let mut j = 0;
    let mut only_old = Vec::new();
    let mut only_new = Vec::new();
    o.sort_unstable();
    n.sort_unstable();
    while i < o.len() || j < n.len() {
        if j == n.len() || (i < o.len() && o[i] < n[j]) {
            only_old.push(o[i]);
            i += 1;
        } else if i == o.len() || n[j] < o[i] {
            only_new.push(n[j]);
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    if only_old.is_empty() {
        return false;
    }
    let top = *only_old.iter().max().unwrap();
    only_new.iter().all(|&y| y < top)
}

pub fn normal_form(s: &DiagramSum) -> Result<(DiagramSum, RewriteTrace)> {
    normal_form_with(s, RewriteConfig::default())
}

/// Rewrites until no I-configuration remains, asserting at every step that
/// each output has fewer I-configurations than its input and that the
/// multiset potential decreases.
pub fn normal_form_with(s: &DiagramSum, config: RewriteConfig) -> Result<(DiagramSum, RewriteTrace)> {
    let mut current = s.clone();
    let mut trace = RewriteTrace { steps: vec![], potential_history: vec![potential(&current)] };
    loop {
        match ihx_step_with(&current, config.order)? {
            StepOutcome::NoOp => return Ok((current, trace)),
            StepOutcome::Rewritten(next, step) => {
                if trace.steps.len() >= config.max_steps {
                    return Err(LmoError::BudgetExceeded { budget: config.max_steps });
                }
                for ((g, _), &n) in step.outputs.iter().zip(&step.output_counts) {
                    if n >= step.input_count {
                        return Err(LmoError::PotentialViolation {
                            input: Box::new(step.input.clone()),
                            output: Box::new(g.clone()),
                            input_count: step.input_count,
                            output_count: n,
                        });
                    }
                }
                let p = potential(&next);
                let prev = trace.potential_history.last().unwrap();
                if !multiset_greater(prev, &p) {
                    return Err(LmoError::PotentialViolation {
                        input: Box::new(step.input.clone()),
                        output: Box::new(step.input.clone()),
                        input_count: step.input_count,
                        output_count: step.input_count,
                    });
                }
                trace.potential_history.push(p);
                trace.steps.push(step);
                current = next;
            }
        }
    }
}

/// Normalizes with both selection orders and reports whether they agree.
/// A mismatch is logged, not treated as an error.
pub fn confluence_probe(s: &DiagramSum, max_steps: usize) -> Result<bool> {
    let (a, _) = normal_form_with(s, RewriteConfig { max_steps, order: SelectionOrder::First })?;
    let (b, _) = normal_form_with(s, RewriteConfig { max_steps, order: SelectionOrder::Last })?;
    if a != b {
        log::warn!("normal forms differ between selection orders ({} vs {} terms)", a.len(), b.len());
    }
    Ok(a == b)
}

/// Convenience: the normal form of a single graph with coefficient one.
pub fn normal_form_of_graph(g: &JacobiGraph) -> Result<(DiagramSum, RewriteTrace)> {
    let mut s = DiagramSum::zero();
    s.add_graph(g, &BigRational::one())?;
    normal_form(&s)
}
