use std::collections::BTreeSet;
use std::sync::OnceLock;

use super::canon::canonicalize;
use super::graph::{Compact, JacobiGraph};

/// All non-vanishing canonical graphs with at most `max_vertices` trivalent
/// vertices and at most `max_legs` legs, in canonical order.
pub fn corpus(max_vertices: usize, max_legs: usize) -> Vec<JacobiGraph> {
    if max_vertices <= 4 && max_legs <= 2 {
        return standard_corpus()
            .iter()
            .filter(|g| g.num_vertices() <= max_vertices && g.num_legs() <= max_legs)
            .cloned()
            .collect();
    }
    generate(max_vertices, max_legs)
}

/// The graphs with at most four vertices and at most two legs.
pub fn standard_corpus() -> &'static [JacobiGraph] {
    static CORPUS: OnceLock<Vec<JacobiGraph>> = OnceLock::new();
    CORPUS.get_or_init(|| generate(4, 2))
}

fn generate(max_vertices: usize, max_legs: usize) -> Vec<JacobiGraph> {
    let mut found = BTreeSet::new();
    for nv in 0..=max_vertices {
        for nl in 0..=max_legs {
            if (3 * nv + nl) % 2 != 0 || (nv == 0 && nl > 0) {
                continue;
            }
            let n = 3 * nv + nl;
            let mut partner = vec![u32::MAX; n];
            matchings(nv, &mut partner, &mut |p| {
                let g = Compact { nv, nl, partner: p.to_vec() }.to_graph();
                let c = canonicalize(&g).expect("generated graph is valid");
                if c.sign != 0 {
                    found.insert(c.graph);
                }
            });
        }
    }
    found.into_iter().collect()
}

fn matchings(nv: usize, partner: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    let Some(h) = partner.iter().position(|&p| p == u32::MAX) else {
        visit(partner);
        return;
    };
    for k in h + 1..partner.len() {
        // legs may not pair with legs
        if partner[k] != u32::MAX || (h >= 3 * nv && k >= 3 * nv) {
            continue;
        }
        partner[h] = k as u32;
        partner[k] = h as u32;
        matchings(nv, partner, visit);
        partner[h] = u32::MAX;
        partner[k] = u32::MAX;
    }
}
