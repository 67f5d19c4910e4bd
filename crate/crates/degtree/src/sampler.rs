//! Exact uniform sampling of plane trees with a given degree sequence, plus
//! an exhaustive enumeration oracle for small sizes.
//!
//! Sampling uniformly permutes the child sequence (Fisher-Yates), forms the
//! bridge with increments `d - 1`, rotates it at its first minimum, and
//! decodes the resulting excursion as a breadth-first walk. Exactly one
//! cyclic shift of the bridge is an excursion, so the output is exactly
//! uniform; the first-minimum index itself is uniform on `[s]` and
//! independent of the tree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::degseq::DegreeSequence;
use crate::error::Error;
use crate::exec;
use crate::transforms::discrete_vervaat_bridge;
use crate::tree::{discrete_lamperti, rescale, tree_from_bfw, LatticeWalk, PlaneTree, Profile, WalkKind};
use crate::Result;

/// Reproducible RNG stream: distinct `(master_seed, stream_id)` pairs give
/// independent streams regardless of scheduling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeededStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeededStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self {
            master_seed,
            stream_id,
        }
    }

    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Uniformly permuted bridge of child-sequence increments, before rotation.
/// Exposed for tests of the first-minimum law.
pub fn permuted_bridge_increments(ds: &DegreeSequence, rng: &mut impl Rng) -> Vec<i64> {
    let child = ds.child_sequence();
    let mut incs: Vec<i64> = child.values().iter().map(|&d| d as i64 - 1).collect();
    // Fisher-Yates
    for i in (1..incs.len()).rev() {
        let j = rng.gen_range(0..=i);
        incs.swap(i, j);
    }
    incs
}

/// Draws a uniform tree with degree sequence `ds`, returning the tree and the
/// Vervaat rotation index of the underlying bridge.
pub fn sample_uniform_tree_with_rotation(
    ds: &DegreeSequence,
    rng: &mut impl Rng,
) -> (PlaneTree, usize) {
    let incs = permuted_bridge_increments(ds, rng);
    let (walk, rho) = discrete_vervaat_bridge(&incs).expect("child sequence sums to s - 1");
    let bfw = LatticeWalk {
        values: walk.values,
        kind: WalkKind::Bfw,
    };
    let tree = tree_from_bfw(&bfw).expect("rotated bridge is an excursion");
    (tree, rho)
}

/// Draws a uniform tree with degree sequence `ds`.
pub fn sample_uniform_tree(ds: &DegreeSequence, rng: &mut impl Rng) -> PlaneTree {
    sample_uniform_tree_with_rotation(ds, rng).0
}

/// Default size bound of the enumeration oracle.
pub const DEFAULT_ENUM_BOUND: u64 = 12;

/// Lists every plane tree with the given degree sequence, by multiset
/// permutation of the depth-first degree array with prefix-positivity
/// pruning. Duplicate-free by construction.
pub fn enumerate_trees(ds: &DegreeSequence, bound: u64) -> Result<Vec<PlaneTree>> {
    let s = ds.size();
    if s > bound {
        return Err(Error::SizeTooLarge { size: s, bound });
    }
    let mut avail: Vec<(u32, u64)> = ds.entries().map(|(i, n)| (i as u32, n)).collect();
    let mut acc: Vec<u32> = Vec::with_capacity(s as usize);
    let mut out = Vec::new();
    fn rec(
        avail: &mut Vec<(u32, u64)>,
        acc: &mut Vec<u32>,
        walk: i64,
        s: usize,
        out: &mut Vec<PlaneTree>,
    ) {
        if acc.len() == s {
            out.push(PlaneTree::from_dfs_degrees(acc.clone()).expect("pruned to valid walks"));
            return;
        }
        let last = acc.len() + 1 == s;
        for slot in 0..avail.len() {
            let (deg, n) = avail[slot];
            if n == 0 {
                continue;
            }
            let w = walk + deg as i64 - 1;
            if (last && w != 0) || (!last && w < 1) {
                continue;
            }
            avail[slot].1 -= 1;
            acc.push(deg);
            rec(avail, acc, w, s, out);
            acc.pop();
            avail[slot].1 += 1;
        }
    }
    rec(&mut avail, &mut acc, 1, s as usize, &mut out);
    Ok(out)
}

/// Exact number of trees with the given degree sequence via the cycle-lemma
/// identity `(1/s) * s! / prod N_i!`, computed exactly in u128.
pub fn count_trees(ds: &DegreeSequence) -> u128 {
    // multinomial(s; N_0, N_1, ...) built incrementally, then divided by s
    let mut result: u128 = 1;
    let mut placed: u64 = 0;
    for (_, n) in ds.entries() {
        for j in 1..=n {
            placed += 1;
            result = result * placed as u128 / j as u128;
        }
    }
    result / ds.size() as u128
}

/// Deterministic accumulator of a replicated sampling run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchStats {
    pub replicates: u64,
    pub master_seed: u64,
    /// Mean rescaled cumulative profile on `grid`.
    pub mean_c: Vec<f64>,
    /// Mean rescaled profile on `grid`.
    pub mean_z: Vec<f64>,
    pub grid: Vec<f64>,
    pub mean_height: f64,
    pub max_height: u64,
    /// Tree frequencies by DFS degree array, populated for sizes <= 16.
    pub tree_counts: std::collections::BTreeMap<Vec<u32>, u64>,
}

/// Samples `n_replicates` trees on streams `(master_seed, 0..n)`, reducing
/// per-replicate summaries in stream order so the result is bit-identical
/// regardless of worker scheduling.
pub fn sample_batch(
    ds: &DegreeSequence,
    n_replicates: u64,
    master_seed: u64,
    b_n: f64,
    grid: &[f64],
    mode: exec::Mode,
) -> BatchStats {
    let s = ds.size();
    let per: Vec<(Vec<f64>, Vec<f64>, u64, Option<Vec<u32>>)> =
        exec::map_indexed(n_replicates as usize, mode, |rep| {
            let mut rng = SeededStream::new(master_seed, rep as u64).rng();
            let tree = sample_uniform_tree(ds, &mut rng);
            let profile = discrete_lamperti(&tree.bfw());
            let (c, z) = rescale(&profile, s, b_n, grid);
            let height = (profile.z.len() - 1) as u64;
            let key = (s <= 16).then(|| tree.dfs_degrees().to_vec());
            (c, z, height, key)
        });

    let mut mean_c = vec![0.0; grid.len()];
    let mut mean_z = vec![0.0; grid.len()];
    let mut height_sum = 0u64;
    let mut max_height = 0u64;
    let mut tree_counts = std::collections::BTreeMap::new();
    for (c, z, height, key) in &per {
        for (acc, v) in mean_c.iter_mut().zip(c) {
            *acc += v;
        }
        for (acc, v) in mean_z.iter_mut().zip(z) {
            *acc += v;
        }
        height_sum += height;
        max_height = max_height.max(*height);
        if let Some(k) = key {
            *tree_counts.entry(k.clone()).or_insert(0) += 1;
        }
    }
    let n = n_replicates as f64;
    for v in mean_c.iter_mut().chain(mean_z.iter_mut()) {
        *v /= n;
    }
    BatchStats {
        replicates: n_replicates,
        master_seed,
        mean_c,
        mean_z,
        grid: grid.to_vec(),
        mean_height: height_sum as f64 / n,
        max_height,
        tree_counts,
    }
}

/// Per-replicate profile of a batch, for writers that dump raw replicates.
pub fn sample_profiles(
    ds: &DegreeSequence,
    n_replicates: u64,
    master_seed: u64,
    mode: exec::Mode,
) -> Vec<Profile> {
    exec::map_indexed(n_replicates as usize, mode, |rep| {
        let mut rng = SeededStream::new(master_seed, rep as u64).rng();
        discrete_lamperti(&sample_uniform_tree(ds, &mut rng).bfw())
    })
}
