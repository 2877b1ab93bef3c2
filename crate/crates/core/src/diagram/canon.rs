//! Signed canonical labeling.
//!
//! Vertex orders come from colour refinement with individualization; each
//! leaf of the search fixes a labeling and the lexicographically smallest
//! partner array wins. Two minimal labelings that differ in orientation
//! parity mean the graph has an orientation-reversing automorphism and is
//! zero.

use super::graph::{Compact, JacobiGraph};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub graph: JacobiGraph,
    /// `+1` or `-1`; `0` when the graph vanishes under AS.
    pub sign: i8,
}

impl Canonical {
    pub fn vanishes(&self) -> bool {
        self.sign == 0
    }
}

pub fn canonicalize(g: &JacobiGraph) -> Result<Canonical> {
    g.validate()?;
    let c = g.compact();
    let (code, sign) = canonical_code(&c);
    let graph = Compact { nv: c.nv, nl: c.nl, partner: code }.to_graph();
    Ok(Canonical { graph, sign: sign * g.sign })
}

/// Canonical partner array and orientation sign (0 on sign conflict).
pub(crate) fn canonical_code(c: &Compact) -> (Vec<u32>, i8) {
    let mut search = Search { c, best: None, forced_zero: has_odd_local_symmetry(c) };
    if c.nv == 0 {
        search.leaf(&[]);
    } else {
        let colors = initial_colors(c);
        search.explore(colors);
    }
    let best = search.best.expect("at least one leaf");
    (best.code, if best.conflict { 0 } else { best.sign })
}

struct Best {
    code: Vec<u32>,
    sign: i8,
    conflict: bool,
}

struct Search<'a> {
    c: &'a Compact,
    best: Option<Best>,
    forced_zero: bool,
}

/// A self-loop, or two legs on one vertex, gives an automorphism that swaps
/// two half-edges at a single vertex: an odd permutation of its cyclic order.
fn has_odd_local_symmetry(c: &Compact) -> bool {
    (0..c.nv).any(|v| {
        let mut legs = 0;
        for h in 3 * v..3 * v + 3 {
            match c.owner(c.partner[h]) {
                Some(w) if w == v => return true,
                None => legs += 1,
                _ => {}
            }
        }
        legs >= 2
    })
}

fn initial_colors(c: &Compact) -> Vec<u32> {
    let keys: Vec<(u32, u32)> = (0..c.nv)
        .map(|v| {
            let mut loops = 0;
            let mut legs = 0;
            for h in 3 * v..3 * v + 3 {
                match c.owner(c.partner[h]) {
                    Some(w) if w == v => loops += 1,
                    None => legs += 1,
                    _ => {}
                }
            }
            (loops, legs)
        })
        .collect();
    rank(&keys)
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap() as u32).collect()
}

fn class_count(colors: &[u32]) -> usize {
    let mut v = colors.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn refine(c: &Compact, mut colors: Vec<u32>) -> Vec<u32> {
    let mut classes = class_count(&colors);
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..c.nv)
            .map(|v| {
                let mut nb: Vec<u32> = (3 * v..3 * v + 3)
                    .filter_map(|h| c.owner(c.partner[h]).filter(|&w| w != v))
                    .map(|w| colors[w])
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        colors = rank(&sigs);
        let n = class_count(&colors);
        if n == classes {
            return colors;
        }
        classes = n;
    }
}

impl<'a> Search<'a> {
    fn explore(&mut self, colors: Vec<u32>) {
        let colors = refine(self.c, colors);
        let nv = self.c.nv;
        let mut counts = vec![0usize; nv];
        for &col in &colors {
            counts[col as usize] += 1;
        }
        match (0..nv).find(|&col| counts[col] > 1) {
            None => self.leaf(&colors),
            Some(target) => {
                for v in 0..nv {
                    if colors[v] as usize != target {
                        continue;
                    }
                    let next: Vec<u32> = colors
                        .iter()
                        .enumerate()
                        .map(|(u, &col)| 2 * col + u32::from(col as usize == target && u != v))
                        .collect();
                    self.explore(next);
                }
            }
        }
    }

    /// `pos[v]` is the final position of vertex `v`.
    ///
    /// Half-edges at a vertex are sorted by what they attach to. Parallel
    /// half-edges towards an already labeled vertex follow the labels there,
    /// which is the smallest code among the tied arrangements; swapping a
    /// parallel pair at both ends is an even automorphism, so the sign does
    /// not depend on the tie-break. Loops and doubled legs force the graph to
    /// vanish and are detected up front.
    fn leaf(&mut self, pos: &[u32]) {
        let c = self.c;
        let nv = c.nv;
        let mut by_pos = vec![0usize; nv];
        for v in 0..nv {
            by_pos[pos[v] as usize] = v;
        }
        let mut label = vec![u32::MAX; c.partner.len()];
        let mut sign = 1i8;
        for &v in &by_pos {
            let key = |i: usize| -> (u32, u32, u32) {
                let h = 3 * v + i;
                let q = c.partner[h];
                match c.owner(q) {
                    Some(w) if w == v => (0, 0, h as u32),
                    None => (1, 0, h as u32),
                    Some(w) if pos[w] < pos[v] => (2, pos[w], label[q as usize]),
                    Some(w) => (2, pos[w], h as u32),
                }
            };
            let keys = [key(0), key(1), key(2)];
            let arr = *PERMS
                .iter()
                .find(|p| keys[p[0]] < keys[p[1]] && keys[p[1]] < keys[p[2]])
                .expect("keys are distinct");
            let base = 3 * pos[v];
            for (slot, &i) in arr.iter().enumerate() {
                label[3 * v + i] = base + slot as u32;
            }
            if !is_even(arr) {
                sign = -sign;
            }
        }
        // legs ordered by the label of the half-edge they attach to
        let mut legs: Vec<(u32, usize)> =
            (0..c.nl).map(|j| (label[c.partner[3 * nv + j] as usize], 3 * nv + j)).collect();
        legs.sort_unstable();
        for (rank, &(_, h)) in legs.iter().enumerate() {
            label[h] = (3 * nv + rank) as u32;
        }
        let mut code = vec![0u32; c.partner.len()];
        for h in 0..c.partner.len() {
            code[label[h] as usize] = label[c.partner[h] as usize];
        }
        if self.forced_zero {
            sign = 0;
        }
        self.offer(code, sign);
    }

    fn offer(&mut self, code: Vec<u32>, sign: i8) {
        match &mut self.best {
            None => self.best = Some(Best { code, sign, conflict: sign == 0 }),
            Some(b) => match code.cmp(&b.code) {
                std::cmp::Ordering::Less => *b = Best { code, sign, conflict: sign == 0 },
                std::cmp::Ordering::Equal => {
                    if sign != b.sign {
                        b.conflict = true;
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn is_even(p: [usize; 3]) -> bool {
    matches!(p, [0, 1, 2] | [1, 2, 0] | [2, 0, 1])
}

/// Number of unordered vertex pairs joined by exactly one edge.
pub fn count_i_configurations(g: &JacobiGraph) -> usize {
    i_configuration_pairs(&g.compact()).len()
}

pub(crate) fn i_configuration_pairs(c: &Compact) -> Vec<(usize, usize)> {
    let mut mult = std::collections::BTreeMap::new();
    for h in 0..c.partner.len() {
        let k = c.partner[h] as usize;
        if h < k {
            if let (Some(v), Some(w)) = (c.owner(h as u32), c.owner(k as u32)) {
                if v != w {
                    *mult.entry((v.min(w), v.max(w))).or_insert(0usize) += 1;
                }
            }
        }
    }
    mult.into_iter().filter(|&(_, m)| m == 1).map(|(p, _)| p).collect()
}
