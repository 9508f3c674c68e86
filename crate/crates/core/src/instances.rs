//! Instance generators and solution-quality measures.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DensityProfile, TemporalGraph, VertexSet};
use crate::rational::{int, ratio, Rational};

/// Parameters of the planted fair-dense-subgraph benchmark: two groups `U`
/// and `W`; the first two snapshots plant a dense random graph on `U` plus
/// sparse noise, the remaining ones are uniform random graphs.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub n: usize,
    pub planted: usize,
    /// Snapshots carrying the planted component.
    pub planted_snapshots: usize,
    /// Uniform snapshots appended after the planted ones.
    pub uniform_snapshots: usize,
    /// Planted edge budget per snapshot is `floor(planted_budget * p)`.
    pub planted_budget: usize,
    pub p_range: (f64, f64),
    pub noise_within_w: usize,
    pub noise_between: usize,
    pub uniform_edges: usize,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n: 200,
            planted: 100,
            planted_snapshots: 2,
            uniform_snapshots: 2,
            planted_budget: 1500,
            p_range: (0.4, 1.0),
            noise_within_w: 200,
            noise_between: 200,
            uniform_edges: 6000,
        }
    }
}

/// The planted set and its profile on the generated graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedTruth {
    pub set: VertexSet,
    pub profile: DensityProfile,
}

/// Decodes index `k` of the `C(m, 2)` pairs of `0..m` in row-major order.
fn pair_from_index(k: usize, m: usize) -> (usize, usize) {
    let mut row = 0;
    let mut k = k;
    let mut row_len = m - 1;
    while k >= row_len {
        k -= row_len;
        row += 1;
        row_len -= 1;
    }
    (row, row + 1 + k)
}

fn choose2(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// `count` distinct pairs among `members`, sampled without replacement.
fn sample_within(rng: &mut ChaCha8Rng, members: &[usize], count: usize) -> Result<Vec<(usize, usize)>> {
    let pairs = choose2(members.len());
    if count > pairs {
        return Err(Error::Input(format!("cannot place {count} edges among {} vertices", members.len())));
    }
    Ok(sample(rng, pairs, count)
        .into_iter()
        .map(|k| {
            let (a, b) = pair_from_index(k, members.len());
            (members[a], members[b])
        })
        .collect())
}

/// `count` distinct pairs with one end in `left` and the other in `right`.
fn sample_between(rng: &mut ChaCha8Rng, left: &[usize], right: &[usize], count: usize) -> Result<Vec<(usize, usize)>> {
    let pairs = left.len() * right.len();
    if count > pairs {
        return Err(Error::Input(format!("cannot place {count} edges across the two groups")));
    }
    Ok(sample(rng, pairs, count)
        .into_iter()
        .map(|k| (left[k / right.len()], right[k % right.len()]))
        .collect())
}

impl SyntheticSpec {
    pub fn generate(&self, seed: u64) -> Result<(TemporalGraph, PlantedTruth)> {
        if self.planted > self.n {
            return Err(Error::Input("planted group larger than the graph".into()));
        }
        let (lo, hi) = self.p_range;
        if !(0.0..=1.0).contains(&lo) || !(lo..=1.0).contains(&hi) {
            return Err(Error::Input(format!("invalid p range [{lo}, {hi}]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut u = sample(&mut rng, self.n, self.planted).into_vec();
        u.sort_unstable();
        let planted = VertexSet::new(u.iter().copied());
        let w: Vec<usize> = (0..self.n).filter(|&v| !planted.contains(v)).collect();
        let everyone: Vec<usize> = (0..self.n).collect();

        let mut snapshots = Vec::new();
        for _ in 0..self.planted_snapshots {
            let p: f64 = rng.random_range(lo..=hi);
            let dense = (self.planted_budget as f64 * p).floor() as usize;
            let mut edges = sample_within(&mut rng, &u, dense)?;
            edges.extend(sample_within(&mut rng, &w, self.noise_within_w)?);
            edges.extend(sample_between(&mut rng, &u, &w, self.noise_between)?);
            snapshots.push(edges);
        }
        for _ in 0..self.uniform_snapshots {
            snapshots.push(sample_within(&mut rng, &everyone, self.uniform_edges)?);
        }
        let graph = TemporalGraph::new(self.n, snapshots)?;
        let profile = graph.profile(&planted)?;
        Ok((graph, PlantedTruth { set: planted, profile }))
    }
}

/// The default planted benchmark: 200 vertices, 4 snapshots.
pub fn gen_synthetic(seed: u64) -> (TemporalGraph, PlantedTruth) {
    SyntheticSpec::default().generate(seed).expect("default spec is valid")
}

/// Two-snapshot instance from a single-snapshot graph `h`: the first
/// snapshot is `h` plus `k` isolated extra vertices, the second a `k`-clique
/// on those extra vertices. Balanced sets of total density `(k - 1) / 2`
/// exist exactly when `h` has a `k`-clique.
pub fn gen_clique_reduction(h: &TemporalGraph, k: usize) -> Result<TemporalGraph> {
    if h.r() != 1 {
        return Err(Error::Input(format!("expected a single-snapshot graph, got r = {}", h.r())));
    }
    if k < 2 {
        return Err(Error::Input(format!("clique size must be at least 2, got {k}")));
    }
    let base = h.n();
    let mut clique = Vec::with_capacity(choose2(k));
    for a in 0..k {
        for b in a + 1..k {
            clique.push((base + a, base + b));
        }
    }
    TemporalGraph::new(base + k, vec![h.edges(0).to_vec(), clique])
}

/// `r` snapshots, each with exactly `edges_per_snapshot` distinct uniform
/// edges.
pub fn gen_random(n: usize, r: usize, edges_per_snapshot: usize, seed: u64) -> Result<TemporalGraph> {
    if n == 0 || r == 0 {
        return Err(Error::Input("n and r must be positive".into()));
    }
    if edges_per_snapshot > choose2(n) {
        return Err(Error::Input(format!(
            "{edges_per_snapshot} edges do not fit in a simple graph on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let everyone: Vec<usize> = (0..n).collect();
    let snapshots = (0..r)
        .map(|_| sample_within(&mut rng, &everyone, edges_per_snapshot))
        .collect::<Result<Vec<_>>>()?;
    TemporalGraph::new(n, snapshots)
}

/// `|a ∩ b| / |a ∪ b|`, defined as 1 when both sets are empty.
pub fn jaccard(a: &VertexSet, b: &VertexSet) -> Rational {
    let common = a.intersection_len(b);
    let union = a.len() + b.len() - common;
    if union == 0 {
        int(1)
    } else {
        ratio(common as i128, union as i128)
    }
}
