//! Seeded Kirby-move fuzzing of surgery presentations.

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::homology::{
    apply_move, mod1, torsion_data_qhs, torsion_pair_equivalent, KirbyMove, LinkingMatrix, QuadraticRefinement,
    TorsionData, DEFAULT_SEARCH_BOUND,
};
use crate::weights::{cyclic_order, theta_eval, ComplexValue};

pub const THETA_TOLERANCE: f64 = 1e-9;

/// Largest group order for which the generator orbit of θ is computed.
pub const ORBIT_LIMIT: u64 = 200;

#[derive(Clone, Debug)]
pub enum FuzzSource {
    /// Every trial starts from this matrix.
    Fixed(LinkingMatrix),
    /// Random symmetric matrices (size ≤ 4, entries in `[-5, 5]`, det ≠ 0)
    /// alternating with lens chains from `lens`.
    Mixed { lens: Vec<(i64, i64)> },
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub trials: usize,
    pub max_moves: usize,
    pub seed: u64,
    pub source: FuzzSource,
    pub search_bound: u64,
}

impl FuzzConfig {
    pub fn new(trials: usize, seed: u64, source: FuzzSource) -> Self {
        FuzzConfig { trials, max_moves: 8, seed, source, search_bound: DEFAULT_SEARCH_BOUND }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub index: usize,
    pub start: LinkingMatrix,
    pub moves: Vec<KirbyMove>,
    pub invariant_factors: Vec<u64>,
    pub equivalent: bool,
    /// `|θ(before) - θ(after)|` when both sides carry a refinement on a cyclic group.
    pub delta_theta: Option<f64>,
    /// Whether `θ(after)` equals `θ` of the starting data for some choice of
    /// generator of the cyclic group.
    pub theta_in_generator_orbit: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub trials: usize,
    pub seed: u64,
    pub all_equivalent: bool,
    pub theta_compared: usize,
    pub max_delta_theta: f64,
    pub theta_violations: usize,
    pub orbit_misses: usize,
    pub records: Vec<TrialRecord>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.all_equivalent && self.theta_violations == 0
    }
}

/// Resamples until `0 < |det| ≤ max_det`.
pub fn random_qhs_matrix(rng: &mut impl Rng, max_det: u64) -> LinkingMatrix {
    loop {
        let n = rng.gen_range(1..=4);
        let mut e = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-5..=5);
                e[i][j] = v;
                e[j][i] = v;
            }
        }
        let m = LinkingMatrix { n, entries: e };
        let det = m.determinant().magnitude().clone();
        if det != 0u32.into() && det <= max_det.into() {
            return m;
        }
    }
}

pub fn random_moves(n: usize, len: usize, rng: &mut impl Rng) -> Vec<KirbyMove> {
    let mut size = n;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        if size < 2 || rng.gen_bool(0.3) {
            out.push(KirbyMove::Stabilize { sign });
            size += 1;
        } else {
            let i = rng.gen_range(0..size);
            let mut j = rng.gen_range(0..size - 1);
            if j >= i {
                j += 1;
            }
            out.push(KirbyMove::Slide { i, j, sign });
        }
    }
    out
}

/// θ for every relabeling `e ↦ u·e` of the generator, `u` a unit.
pub fn theta_generator_orbit(t: &TorsionData) -> Result<Vec<ComplexValue>> {
    let p = cyclic_order(t)?;
    if p <= 1 {
        return Ok(vec![theta_eval(t)?]);
    }
    let mut out = Vec::new();
    for u in 1..p {
        if num_integer::gcd(u, p) != 1 {
            continue;
        }
        let mut s = t.clone();
        let uu = ((u * u) % p) as i64;
        if let Some(b) = &t.bilinear_gens {
            s.bilinear_gens = Some(vec![vec![mod1(b[0][0] * Rational64::from_integer(uu))]]);
        }
        s.qform = match &t.qform {
            Some(QuadraticRefinement::Lens { p, q }) => Some(QuadraticRefinement::Lens { p: *p, q: q * uu }),
            Some(QuadraticRefinement::OddOrder) => Some(QuadraticRefinement::OddOrder),
            Some(QuadraticRefinement::Explicit(m)) => Some(QuadraticRefinement::Explicit(
                (0..p).map(|g| (vec![g], m[&vec![(g * u) % p]])).collect(),
            )),
            None => None,
        };
        out.push(theta_eval(&s)?);
    }
    Ok(out)
}

fn theta_if_defined(t: &TorsionData) -> Option<ComplexValue> {
    (t.qform.is_some() && t.is_cyclic()).then(|| theta_eval(t).ok()).flatten()
}

fn run_trial(config: &FuzzConfig, index: usize) -> Result<TrialRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index as u64));
    let start = match &config.source {
        FuzzSource::Fixed(m) => m.clone(),
        FuzzSource::Mixed { lens } => {
            if index % 2 == 1 && !lens.is_empty() {
                let (p, q) = lens[(index / 2) % lens.len()];
                LinkingMatrix::lens_chain(p, q)?
            } else {
                random_qhs_matrix(&mut rng, config.search_bound)
            }
        }
    };
    let len = rng.gen_range(0..=config.max_moves);
    let moves = random_moves(start.n, len, &mut rng);
    let mut m = start.clone();
    for &mv in &moves {
        m = apply_move(&m, mv)?;
    }
    let before = torsion_data_qhs(&start)?;
    let after = torsion_data_qhs(&m)?;
    let equivalent = torsion_pair_equivalent(&before, &after, config.search_bound)?;
    let (tb, ta) = (theta_if_defined(&before), theta_if_defined(&after));
    let delta_theta = match (&tb, &ta) {
        (Some(a), Some(b)) => Some(a.dist(b)),
        _ => None,
    };
    let theta_in_generator_orbit = match &ta {
        Some(b) if before.order() <= ORBIT_LIMIT => Some(theta_generator_orbit(&before)?.iter().any(|v| v.dist(b) < THETA_TOLERANCE)),
        _ => None,
    };
    Ok(TrialRecord {
        index,
        start,
        moves,
        invariant_factors: before.invariant_factors,
        equivalent,
        delta_theta,
        theta_in_generator_orbit,
    })
}

/// Runs the trials in parallel; each trial has its own seeded generator, so
/// the report does not depend on scheduling.
pub fn kirby_fuzz(config: &FuzzConfig) -> Result<FuzzReport> {
    let records: Vec<TrialRecord> =
        (0..config.trials).into_par_iter().map(|i| run_trial(config, i)).collect::<Result<_>>()?;
    let deltas: Vec<f64> = records.iter().filter_map(|r| r.delta_theta).collect();
    Ok(FuzzReport {
        trials: config.trials,
        seed: config.seed,
        all_equivalent: records.iter().all(|r| r.equivalent),
        theta_compared: deltas.len(),
        max_delta_theta: deltas.iter().copied().fold(0.0, f64::max),
        theta_violations: deltas.iter().filter(|&&d| d >= THETA_TOLERANCE).count(),
        orbit_misses: records.iter().filter(|r| r.theta_in_generator_orbit == Some(false)).count(),
        records,
    })
}
