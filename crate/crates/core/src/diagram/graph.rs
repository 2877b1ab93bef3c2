use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{LmoError, Result};

pub type HalfEdge = u32;

fn plus_one() -> i8 {
    1
}

fn is_plus_one(s: &i8) -> bool {
    *s == 1
}

/// Trivalent graph with a cyclic order at each vertex and optional univalent legs.
///
/// Every half-edge id appears once among `vertices` and `legs` and once among
/// `edges`. Edges joining two legs (struts) are rejected.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JacobiGraph {
    pub vertices: Vec<[HalfEdge; 3]>,
    #[serde(default)]
    pub legs: Vec<HalfEdge>,
    pub edges: Vec<[HalfEdge; 2]>,
    #[serde(default = "plus_one", skip_serializing_if = "is_plus_one")]
    pub sign: i8,
}

impl Default for JacobiGraph {
    fn default() -> Self {
        Self::empty()
    }
}

impl JacobiGraph {
    pub fn new(
        vertices: Vec<[HalfEdge; 3]>,
        legs: Vec<HalfEdge>,
        edges: Vec<[HalfEdge; 2]>,
    ) -> Result<Self> {
        let g = JacobiGraph { vertices, legs, edges, sign: 1 };
        g.validate()?;
        Ok(g)
    }

    pub fn empty() -> Self {
        JacobiGraph { vertices: vec![], legs: vec![], edges: vec![], sign: 1 }
    }

    /// Two vertices joined by three parallel edges.
    pub fn theta() -> Self {
        JacobiGraph {
            vertices: vec![[0, 1, 2], [3, 4, 5]],
            legs: vec![],
            edges: vec![[0, 3], [1, 4], [2, 5]],
            sign: 1,
        }
    }

    /// The tetrahedron K4 (also the 3-spoke wheel).
    pub fn tetrahedron() -> Self {
        // vertex i holds half-edges 3i..3i+2; one edge for each vertex pair
        JacobiGraph {
            vertices: vec![[0, 1, 2], [3, 4, 5], [6, 7, 8], [9, 10, 11]],
            legs: vec![],
            edges: vec![[0, 3], [1, 6], [2, 9], [4, 10], [5, 7], [8, 11]],
            sign: 1,
        }
    }

    /// Two vertices, each carrying a self-loop, joined by one edge.
    pub fn dumbbell() -> Self {
        JacobiGraph {
            vertices: vec![[0, 1, 2], [3, 4, 5]],
            legs: vec![],
            edges: vec![[0, 3], [1, 2], [4, 5]],
            sign: 1,
        }
    }

    /// Two vertices joined by a double edge, each with one leg.
    pub fn bubble() -> Self {
        JacobiGraph {
            vertices: vec![[0, 1, 2], [3, 5, 4]],
            legs: vec![6, 7],
            edges: vec![[0, 6], [3, 7], [1, 4], [2, 5]],
            sign: 1,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn is_closed(&self) -> bool {
        self.legs.is_empty()
    }

    /// Grading used for Koszul signs: the number of trivalent vertices.
    pub fn degree(&self) -> usize {
        self.vertices.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.sign != 1 && self.sign != -1 {
            return Err(LmoError::Structural(format!("sign {} is not ±1", self.sign)));
        }
        let mut owner: BTreeMap<HalfEdge, bool> = BTreeMap::new();
        for v in &self.vertices {
            for &h in v {
                if owner.insert(h, true).is_some() {
                    return Err(LmoError::Structural(format!("half-edge {h} used twice")));
                }
            }
        }
        for &h in &self.legs {
            if owner.insert(h, false).is_some() {
                return Err(LmoError::Structural(format!("half-edge {h} used twice")));
            }
        }
        let mut seen = BTreeSet::new();
        for &[a, b] in &self.edges {
            for h in [a, b] {
                if !owner.contains_key(&h) {
                    return Err(LmoError::Structural(format!("edge uses unknown half-edge {h}")));
                }
                if !seen.insert(h) {
                    return Err(LmoError::Structural(format!("half-edge {h} in two edges")));
                }
            }
            if !owner[&a] && !owner[&b] {
                return Err(LmoError::Structural(format!("strut {a}-{b} between two legs")));
            }
        }
        if seen.len() != owner.len() {
            let h = owner.keys().find(|h| !seen.contains(h)).unwrap();
            return Err(LmoError::Structural(format!("dangling half-edge {h}")));
        }
        Ok(())
    }

    pub(crate) fn compact(&self) -> Compact {
        Compact::from_graph(self)
    }

    /// Edges whose ends are both vertex half-edges, self-loops included.
    pub fn internal_edges(&self) -> Vec<[HalfEdge; 2]> {
        let legs: BTreeSet<HalfEdge> = self.legs.iter().copied().collect();
        self.edges
            .iter()
            .filter(|e| !legs.contains(&e[0]) && !legs.contains(&e[1]))
            .copied()
            .collect()
    }

    pub fn partner(&self, h: HalfEdge) -> Option<HalfEdge> {
        self.edges.iter().find_map(|&[a, b]| {
            if a == h {
                Some(b)
            } else if b == h {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn vertex_of(&self, h: HalfEdge) -> Option<usize> {
        self.vertices.iter().position(|v| v.contains(&h))
    }

    fn max_id(&self) -> Option<HalfEdge> {
        self.vertices.iter().flatten().chain(self.legs.iter()).copied().max()
    }

    fn shifted(&self, by: HalfEdge) -> JacobiGraph {
        JacobiGraph {
            vertices: self.vertices.iter().map(|v| v.map(|h| h + by)).collect(),
            legs: self.legs.iter().map(|h| h + by).collect(),
            edges: self.edges.iter().map(|e| e.map(|h| h + by)).collect(),
            sign: self.sign,
        }
    }

    /// Offset applied to the second graph's half-edge ids in `disjoint_union`.
    pub fn union_offset(&self) -> HalfEdge {
        self.max_id().map_or(0, |m| m + 1)
    }

    /// Disjoint union; legs of `self` come first.
    pub fn disjoint_union(&self, other: &JacobiGraph) -> JacobiGraph {
        let o = other.shifted(self.union_offset());
        let mut g = self.clone();
        g.vertices.extend(o.vertices);
        g.legs.extend(o.legs);
        g.edges.extend(o.edges);
        g.sign *= o.sign;
        g
    }

    /// Joins legs `i` and `j` into one edge between their partner half-edges.
    pub fn glue_legs(&self, i: usize, j: usize) -> Result<JacobiGraph> {
        if i == j || i >= self.legs.len() || j >= self.legs.len() {
            return Err(LmoError::Argument(format!(
                "cannot glue legs {i} and {j} of a graph with {} legs",
                self.legs.len()
            )));
        }
        let (li, lj) = (self.legs[i], self.legs[j]);
        let x = self.partner(li).expect("validated graph");
        let y = self.partner(lj).expect("validated graph");
        let mut g = self.clone();
        g.legs.retain(|&h| h != li && h != lj);
        g.edges.retain(|e| !e.contains(&li) && !e.contains(&lj));
        g.edges.push([x, y]);
        Ok(g)
    }

    /// Cuts internal edge `e1` of `self` and `e2` of `other` and reconnects the
    /// four loose ends crosswise. `twisted` selects the second reconnection.
    pub fn connect(
        &self,
        other: &JacobiGraph,
        e1: [HalfEdge; 2],
        e2: [HalfEdge; 2],
        twisted: bool,
    ) -> JacobiGraph {
        let off = self.union_offset();
        let mut g = self.disjoint_union(other);
        let (x, y) = (e1[0], e1[1]);
        let (u, w) = (e2[0] + off, e2[1] + off);
        g.edges.retain(|e| *e != e1 && *e != [u, w]);
        if twisted {
            g.edges.push([x, w]);
            g.edges.push([y, u]);
        } else {
            g.edges.push([x, u]);
            g.edges.push([y, w]);
        }
        g
    }

    /// Grafts leg `a` of `self` onto leg `b` of `other`. Returns the glued graph
    /// and the new edge, with `other`'s ids shifted by `union_offset()`.
    pub fn graft(&self, a: usize, other: &JacobiGraph, b: usize) -> Result<(JacobiGraph, [HalfEdge; 2])> {
        if a >= self.legs.len() || b >= other.legs.len() {
            return Err(LmoError::Argument("grafting leg index out of range".into()));
        }
        let u = self.disjoint_union(other);
        let g = u.glue_legs(a, self.legs.len() + b)?;
        let e = *g.edges.last().unwrap();
        Ok((g, e))
    }

    /// Connected components, each a list of vertex indices and a list of leg indices.
    pub fn components(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let c = self.compact();
        let nv = c.nv;
        let n = nv + c.nl;
        let node = |h: usize| if h < 3 * nv { h / 3 } else { nv + (h - 3 * nv) };
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for h in 0..c.partner.len() {
            let (a, b) = (find(&mut parent, node(h)), find(&mut parent, node(c.partner[h] as usize)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut comps: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            let entry = comps.entry(r).or_default();
            if x < nv {
                entry.0.push(x);
            } else {
                entry.1.push(x - nv);
            }
        }
        comps.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// Dense relabeling: vertex `v` owns half-edges `3v..3v+3` in cyclic order,
/// leg `j` is half-edge `3*nv + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Compact {
    pub nv: usize,
    pub nl: usize,
    pub partner: Vec<u32>,
}

impl Compact {
    pub fn from_graph(g: &JacobiGraph) -> Compact {
        let nv = g.vertices.len();
        let mut index: BTreeMap<HalfEdge, u32> = BTreeMap::new();
        for (v, hs) in g.vertices.iter().enumerate() {
            for (i, &h) in hs.iter().enumerate() {
                index.insert(h, (3 * v + i) as u32);
            }
        }
        for (j, &h) in g.legs.iter().enumerate() {
            index.insert(h, (3 * nv + j) as u32);
        }
        let mut partner = vec![0u32; index.len()];
        for &[a, b] in &g.edges {
            let (a, b) = (index[&a], index[&b]);
            partner[a as usize] = b;
            partner[b as usize] = a;
        }
        Compact { nv, nl: g.legs.len(), partner }
    }

    pub fn to_graph(&self) -> JacobiGraph {
        let nv = self.nv as u32;
        let vertices = (0..nv).map(|v| [3 * v, 3 * v + 1, 3 * v + 2]).collect();
        let legs = (0..self.nl as u32).map(|j| 3 * nv + j).collect();
        let edges = (0..self.partner.len() as u32)
            .filter(|&h| h < self.partner[h as usize])
            .map(|h| [h, self.partner[h as usize]])
            .collect();
        JacobiGraph { vertices, legs, edges, sign: 1 }
    }

    #[inline]
    pub fn owner(&self, h: u32) -> Option<usize> {
        let h = h as usize;
        (h < 3 * self.nv).then_some(h / 3)
    }
}
