//! Discrete path and tree transformations: the Vervaat transform, the 213
//! tree transformation and its walk-level bijection, permutation of
//! excursions below the running maximum, and the future-minimum reversal.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::tree::{LatticeWalk, PlaneTree, WalkKind};
use crate::Result;

/// Real-valued discrete path stored as increments together with the partial
/// sums from zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealWalk {
    pub increments: Vec<f64>,
    pub values: Vec<f64>,
}

impl RealWalk {
    pub fn from_increments(increments: Vec<f64>) -> Self {
        let mut values = Vec::with_capacity(increments.len() + 1);
        let mut acc = 0.0;
        values.push(acc);
        for &x in &increments {
            acc += x;
            values.push(acc);
        }
        Self { increments, values }
    }

    pub fn steps(&self) -> usize {
        self.increments.len()
    }

    /// Index of the first minimum among positions `1..=n`.
    pub fn first_min_index(&self) -> usize {
        let mut best = 1;
        for i in 2..self.values.len() {
            if self.values[i] < self.values[best] {
                best = i;
            }
        }
        best
    }

    /// Unique argmin over all positions `0..=n`, or a tie error.
    pub fn unique_min_index(&self) -> Result<usize> {
        unique_extremum(&self.values, |a, b| a < b)
    }

    /// Unique argmax over all positions `0..=n`, or a tie error.
    pub fn unique_max_index(&self) -> Result<usize> {
        unique_extremum(&self.values, |a, b| a > b)
    }
}

fn unique_extremum(values: &[f64], better: impl Fn(f64, f64) -> bool) -> Result<usize> {
    let mut best = 0;
    let mut tie: Option<usize> = None;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if better(v, values[best]) {
            best = i;
            tie = None;
        } else if v == values[best] {
            tie = Some(i);
        }
    }
    match tie {
        Some(b) => Err(Error::TiedExtremum { a: best, b }),
        None => Ok(best),
    }
}

/// Cyclic shift of a walk at index `i`: increments are rotated so the walk
/// restarts from position `i`, re-anchored at zero.
pub fn cyclic_shift(w: &RealWalk, i: usize) -> RealWalk {
    let n = w.steps();
    let mut increments = Vec::with_capacity(n);
    increments.extend_from_slice(&w.increments[i..]);
    increments.extend_from_slice(&w.increments[..i]);
    RealWalk::from_increments(increments)
}

/// Discrete Vervaat transform of a real walk: the cyclic shift at the first
/// minimum (taken over positions `1..=n`). Returns the shifted walk and the
/// shift index `rho`.
pub fn discrete_vervaat(w: &RealWalk) -> (RealWalk, usize) {
    let rho = w.first_min_index();
    if rho == w.steps() {
        return (w.clone(), rho);
    }
    (cyclic_shift(w, rho), rho)
}

/// Discrete Vervaat transform of an integer bridge with increments summing to
/// -1: the output, restarted from one, is a lattice excursion (positive
/// before the last step, zero there).
pub fn discrete_vervaat_bridge(increments: &[i64]) -> Result<(LatticeWalk, usize)> {
    if increments.iter().sum::<i64>() != -1 {
        return Err(Error::InvalidParameter(
            "bridge increments must sum to -1".into(),
        ));
    }
    let n = increments.len();
    let mut best = 1;
    let mut acc = 0i64;
    let mut best_val = i64::MAX;
    for (i, &x) in increments.iter().enumerate() {
        acc += x;
        if acc < best_val {
            best_val = acc;
            best = i + 1;
        }
    }
    let rho = best;
    let mut values = Vec::with_capacity(n + 1);
    let mut w = 1i64;
    values.push(w);
    for j in 0..n {
        w += increments[(rho + j) % n];
        values.push(w);
    }
    Ok((LatticeWalk::new(values, WalkKind::Dfw)?, rho))
}

/// Pieces of the 213 cut. With `v` the chosen vertex and `u` its ancestor,
/// the tree splits into the root piece (tree minus the subtree at `u`), the
/// middle piece (subtree at `u` pruned at `v`) and the top piece (subtree at
/// `v`); the reassembled tree is rooted at the middle piece, with the root
/// piece grafted where `v` was cut and the top piece grafted where `u` was
/// cut. Every vertex keeps its child count, so the degree sequence is
/// preserved, and both the depth-first index and the height of `v` are
/// invariant.
fn splice_213(t: &PlaneTree, u: usize, v: usize) -> PlaneTree {
    let deg = t.dfs_degrees();
    let sizes = t.subtree_sizes();
    let (su, sv) = (sizes[u], sizes[v]);
    let mut out = Vec::with_capacity(deg.len());
    out.extend_from_slice(&deg[u..v]); // middle piece up to the cut at v
    out.extend_from_slice(&deg[..u]); // root piece before the cut at u
    out.extend_from_slice(&deg[v..v + sv]); // top piece
    out.extend_from_slice(&deg[u + su..]); // root piece after the cut
    out.extend_from_slice(&deg[v + sv..u + su]); // middle piece after the cut
    PlaneTree::from_dfs_degrees(out).expect("splice preserves the excursion property")
}

/// 213 transformation cutting at the vertex with depth-first index `v`
/// (1-based, in `2..=s`) and its ancestor at distance `h`. Vertices at height
/// at most `h` are left fixed.
pub fn transform_213(t: &PlaneTree, v: usize, h: u64) -> Result<PlaneTree> {
    let (idx, heights) = check_vertex(t, v)?;
    if h == 0 {
        return Err(Error::InvalidParameter("213 cut distance must be >= 1".into()));
    }
    if heights[idx] <= h {
        return Ok(t.clone());
    }
    let u = ancestor_at_distance(t, idx, h);
    Ok(splice_213(t, u, idx))
}

/// Inverse of [`transform_213`] with the same `(v, h)`: the cut is taken at
/// the ancestor at height `h` (equivalently, distance `height(v) - h`).
pub fn inverse_213(t: &PlaneTree, v: usize, h: u64) -> Result<PlaneTree> {
    let (idx, heights) = check_vertex(t, v)?;
    if h == 0 {
        return Err(Error::InvalidParameter("213 cut distance must be >= 1".into()));
    }
    if heights[idx] <= h {
        return Ok(t.clone());
    }
    let u = ancestor_at_distance(t, idx, heights[idx] - h);
    Ok(splice_213(t, u, idx))
}

fn check_vertex(t: &PlaneTree, v: usize) -> Result<(usize, Vec<u64>)> {
    let s = t.size();
    if v < 2 || v > s {
        return Err(Error::InvalidVertex { v, size: s });
    }
    Ok((v - 1, t.heights()))
}

fn ancestor_at_distance(t: &PlaneTree, idx: usize, d: u64) -> usize {
    let parents = t.parents();
    let mut u = idx;
    for _ in 0..d {
        u = parents[u];
    }
    u
}

/// Decomposition of a walk into its complete excursions below the running
/// maximum: `boundaries[j]` are the indices where the walk meets its running
/// maximum, and the `j`-th excursion occupies `[boundaries[j], boundaries[j+1])`.
/// Steps after the last meeting point form an incomplete tail.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcursionDecomposition {
    pub boundaries: Vec<usize>,
    /// Increment blocks of the complete excursions, in path order.
    pub excursions: Vec<Vec<f64>>,
    /// Increments after the last meeting point.
    pub tail: Vec<f64>,
}

impl ExcursionDecomposition {
    pub fn count(&self) -> usize {
        self.excursions.len()
    }
}

/// Scans the meeting points of `w` with its running maximum.
pub fn excursion_decompose(w: &RealWalk) -> ExcursionDecomposition {
    let n = w.steps();
    let mut boundaries = vec![0usize];
    let mut running = w.values[0];
    for i in 1..=n {
        if w.values[i] >= running {
            running = w.values[i];
            boundaries.push(i);
        }
    }
    let excursions = boundaries
        .windows(2)
        .map(|b| w.increments[b[0]..b[1]].to_vec())
        .collect();
    let tail = w.increments[*boundaries.last().unwrap()..].to_vec();
    ExcursionDecomposition {
        boundaries,
        excursions,
        tail,
    }
}

/// Reorders the complete excursions of `w` by `sigma` (block `j` of the
/// output is block `sigma[j]` of the input), keeping the incomplete tail in
/// place. Increments inside each block are untouched.
pub fn excursion_permute(w: &RealWalk, sigma: &[usize]) -> Result<RealWalk> {
    let dec = excursion_decompose(w);
    if sigma.len() != dec.count() {
        return Err(Error::PermutationSizeMismatch {
            got: sigma.len(),
            expected: dec.count(),
        });
    }
    let mut seen = vec![false; sigma.len()];
    for &j in sigma {
        if j >= sigma.len() || seen[j] {
            return Err(Error::InvalidParameter("not a permutation".into()));
        }
        seen[j] = true;
    }
    let mut increments = Vec::with_capacity(w.steps());
    for &j in sigma {
        increments.extend_from_slice(&dec.excursions[j]);
    }
    increments.extend_from_slice(&dec.tail);
    Ok(RealWalk::from_increments(increments))
}

/// Future minimum process: `fm_i = min_{j >= i} w_j`.
pub fn future_minimum(w: &RealWalk) -> Vec<f64> {
    let mut fm = w.values.clone();
    for i in (0..fm.len() - 1).rev() {
        fm[i] = fm[i].min(fm[i + 1]);
    }
    fm
}

/// Running maximum process: `rm_i = max_{j <= i} w_j`.
pub fn running_max(w: &RealWalk) -> Vec<f64> {
    let mut rm = w.values.clone();
    for i in 1..rm.len() {
        rm[i] = rm[i].max(rm[i - 1]);
    }
    rm
}

/// Right endpoint of the excursion straddling `t`: the first index `>= t`
/// where the walk meets its running maximum, if any.
pub fn straddle_d(w: &RealWalk, t: usize) -> Option<usize> {
    let rm = running_max(w);
    (t..w.values.len()).find(|&i| w.values[i] == rm[i])
}

/// Future-minimum reversal: reverses the increment order (the path seen
/// backwards from its endpoint) and then reverses the order of the complete
/// excursions below the running maximum. The output walk `y` satisfies,
/// pathwise,
///
/// `max(y) ∘ d(y)` on `[0, argmax(y)]`  ==  post-minimum future minimum of
/// `w`, shifted to start at zero,
///
/// and the transformation preserves the uniform law on paths with distinct
/// subset sums.
pub fn future_min_transform(w: &RealWalk) -> Result<RealWalk> {
    w.unique_min_index()?;
    w.unique_max_index()?;
    let reversed = RealWalk::from_increments(w.increments.iter().rev().copied().collect());
    let k = excursion_decompose(&reversed).count();
    let sigma: Vec<usize> = (0..k).rev().collect();
    excursion_permute(&reversed, &sigma)
}

/// Visits every ordering of `items` exactly once. Intended for exhaustive
/// checks at small `n`; the cost is `n * n!`.
pub fn for_each_permutation<T: Clone>(items: &[T], mut f: impl FnMut(&[T])) {
    fn rec<T: Clone>(pool: &mut Vec<T>, acc: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
        if pool.is_empty() {
            f(acc);
            return;
        }
        for i in 0..pool.len() {
            let x = pool.remove(i);
            acc.push(x.clone());
            rec(pool, acc, f);
            acc.pop();
            pool.insert(i, x);
        }
    }
    let mut pool = items.to_vec();
    let mut acc = Vec::with_capacity(items.len());
    rec(&mut pool, &mut acc, &mut f);
}

/// Left side of the pathwise identity: the future-minimum process after the
/// (unique) minimum, shifted to start at zero.
pub fn post_min_future_minimum(w: &RealWalk) -> Result<Vec<f64>> {
    let rho = w.unique_min_index()?;
    let fm = future_minimum(w);
    Ok(fm[rho..].iter().map(|&x| x - w.values[rho]).collect())
}

/// Right side of the pathwise identity: `rm ∘ d` evaluated on `[0, argmax]`.
pub fn running_max_at_straddle(w: &RealWalk) -> Result<Vec<f64>> {
    let eta = w.unique_max_index()?;
    let rm = running_max(w);
    let mut out = Vec::with_capacity(eta + 1);
    for t in 0..=eta {
        let d = straddle_d(w, t).expect("a meeting point exists up to the argmax");
        out.push(rm[d]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::tree_from_dfw;

    fn example_tree() -> PlaneTree {
        PlaneTree::from_dfs_degrees(vec![3, 2, 0, 0, 0, 1, 2, 1, 0, 0]).unwrap()
    }

    #[test]
    fn vervaat_hand_example() {
        let w = RealWalk::from_increments(vec![-1.0, 1.0, -1.0]);
        assert_eq!(w.values, vec![0.0, -1.0, 0.0, -1.0]);
        let (v, rho) = discrete_vervaat(&w);
        assert_eq!(rho, 1);
        assert_eq!(v.increments, vec![1.0, -1.0, -1.0]);
    }

    #[test]
    fn vervaat_bridge_hand_example() {
        let (walk, rho) = discrete_vervaat_bridge(&[-1, 1, -1]).unwrap();
        assert_eq!(rho, 1);
        assert_eq!(walk.values, vec![1, 2, 1, 0]);
    }

    #[test]
    fn vervaat_fixes_excursions() {
        // identity-order child sequence of the example tree is already an excursion
        let incs = [2i64, 1, 1, 0, 0, -1, -1, -1, -1, -1];
        let (walk, rho) = discrete_vervaat_bridge(&incs).unwrap();
        assert_eq!(rho, 10);
        let expect: Vec<i64> = std::iter::once(1)
            .chain(incs.iter().scan(1i64, |acc, &x| {
                *acc += x;
                Some(*acc)
            }))
            .collect();
        assert_eq!(walk.values, expect);
    }

    #[test]
    fn vervaat_invariant_under_pre_rotation() {
        // zero-terminal bridge with exact dyadic increments and a unique
        // cyclic minimum: every pre-rotation yields the same transform
        let w = RealWalk::from_increments(vec![0.25, -0.75, 0.375, 0.125]);
        assert_eq!(*w.values.last().unwrap(), 0.0);
        let (v0, _) = discrete_vervaat(&w);
        for i in 1..w.steps() {
            let (vi, _) = discrete_vervaat(&cyclic_shift(&w, i));
            assert_eq!(vi.values, v0.values, "pre-shift by {i}");
        }
    }

    #[test]
    fn t213_guard_is_identity() {
        let t = example_tree();
        for v in 2..=t.size() {
            let out = transform_213(&t, v, 10).unwrap();
            assert_eq!(out, t);
        }
    }

    #[test]
    fn t213_hand_example() {
        // cut at vertex "3111" (dfs index 9, height 4) with h = 2: the
        // ancestor is "31"; pieces have sizes 6, 3, 1.
        let t = example_tree();
        let out = transform_213(&t, 9, 2).unwrap();
        assert_eq!(out.dfs_degrees(), &[2, 1, 3, 2, 0, 0, 0, 1, 0, 0]);
        let mut a: Vec<u32> = t.dfs_degrees().to_vec();
        let mut b: Vec<u32> = out.dfs_degrees().to_vec();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b, "degree sequence must be preserved");
        // the chosen vertex keeps its depth-first index and height
        assert_eq!(out.heights()[8], 4);
        let back = inverse_213(&out, 9, 2).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn t213_rejects_bad_vertex() {
        let t = example_tree();
        assert!(matches!(
            transform_213(&t, 1, 1),
            Err(Error::InvalidVertex { .. })
        ));
        assert!(matches!(
            transform_213(&t, 11, 1),
            Err(Error::InvalidVertex { .. })
        ));
    }

    #[test]
    fn t213_walk_level_agrees_with_tree_level() {
        let t = example_tree();
        let w = t.dfw();
        let out = transform_213(&tree_from_dfw(&w).unwrap(), 9, 2).unwrap();
        assert_eq!(out.dfw().values, transform_213(&t, 9, 2).unwrap().dfw().values);
    }

    #[test]
    fn excursion_decompose_hand_scan() {
        let w = RealWalk::from_increments(vec![1.0, -0.4, 0.5]);
        let dec = excursion_decompose(&w);
        assert_eq!(dec.boundaries, vec![0, 1, 3]);
        assert_eq!(dec.count(), 2);
        assert_eq!(dec.excursions[0], vec![1.0]);
        assert_eq!(dec.excursions[1], vec![-0.4, 0.5]);
        assert!(dec.tail.is_empty());
    }

    #[test]
    fn excursion_permute_identity_and_roundtrip() {
        let w = RealWalk::from_increments(vec![0.7, 0.1, -0.3, -0.6, 0.9, -0.2]);
        let dec = excursion_decompose(&w);
        let k = dec.count();
        let id: Vec<usize> = (0..k).collect();
        assert_eq!(excursion_permute(&w, &id).unwrap(), w);
        let rev: Vec<usize> = (0..k).rev().collect();
        let permuted = excursion_permute(&w, &rev).unwrap();
        // the inverse of the reversal is the reversal itself
        let back = excursion_permute(&permuted, &rev).unwrap();
        for (a, b) in back.values.iter().zip(&w.values) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(matches!(
            excursion_permute(&w, &[0]),
            Err(Error::PermutationSizeMismatch { .. })
        ));
    }

    #[test]
    fn excursion_reversal_is_bijection_on_orderings() {
        // all 24 orderings of a distinct-subset-sum increment set
        let base = [0.7, 0.1, -0.3, -0.6];
        let mut outputs = Vec::new();
        permute_all(&base, &mut |incs| {
            let w = RealWalk::from_increments(incs.to_vec());
            let k = excursion_decompose(&w).count();
            let rev: Vec<usize> = (0..k).rev().collect();
            let out = excursion_permute(&w, &rev).unwrap();
            outputs.push(quantize(&out.values));
        });
        let total = outputs.len();
        outputs.sort();
        outputs.dedup();
        assert_eq!(outputs.len(), total, "reversal must not collide paths");
    }

    #[test]
    fn future_min_running_max_straddle() {
        let w = RealWalk {
            increments: vec![1.0, -2.0, 3.0],
            values: vec![0.0, 1.0, -1.0, 2.0],
        };
        assert_eq!(future_minimum(&w), vec![-1.0, -1.0, -1.0, 2.0]);
        assert_eq!(running_max(&w), vec![0.0, 1.0, 1.0, 2.0]);
        assert_eq!(straddle_d(&w, 2), Some(3));
        // monotone increasing walk is its own future minimum and running max
        let mono = RealWalk::from_increments(vec![0.5, 0.25, 0.125]);
        assert_eq!(future_minimum(&mono), mono.values);
        assert_eq!(running_max(&mono), mono.values);
        for t in 0..=3 {
            assert_eq!(straddle_d(&mono, t), Some(t));
        }
    }

    #[test]
    fn future_min_identity_hand_case() {
        let w = RealWalk::from_increments(vec![-0.4, 1.1, -0.8]);
        let lhs = post_min_future_minimum(&w).unwrap();
        let y = future_min_transform(&w).unwrap();
        let rhs = running_max_at_straddle(&y).unwrap();
        assert_eq!(lhs.len(), rhs.len());
        for (a, b) in lhs.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-12, "{lhs:?} vs {rhs:?}");
        }
    }

    #[test]
    fn future_min_identity_decreasing_input() {
        let w = RealWalk::from_increments(vec![-1.0, -1.015625, -1.03125]);
        let lhs = post_min_future_minimum(&w).unwrap();
        assert_eq!(lhs, vec![0.0]);
        let y = future_min_transform(&w).unwrap();
        let rhs = running_max_at_straddle(&y).unwrap();
        assert_eq!(rhs, vec![0.0]);
    }

    #[test]
    fn future_min_identity_exhaustive_n4() {
        // dyadic increments make every partial sum exact in f64
        let base = [
            0.3125, -0.046875, -0.515625, 0.21875, // distinct subset sums
        ];
        let mut lhs_paths = Vec::new();
        let mut rhs_paths = Vec::new();
        permute_all(&base, &mut |incs| {
            let w = RealWalk::from_increments(incs.to_vec());
            let lhs = post_min_future_minimum(&w).unwrap();
            let y = future_min_transform(&w).unwrap();
            let rhs = running_max_at_straddle(&y).unwrap();
            // pathwise identity for the transform of this very path
            assert_eq!(lhs.len(), rhs.len());
            for (a, b) in lhs.iter().zip(&rhs) {
                assert!((a - b).abs() < 1e-12);
            }
            lhs_paths.push(quantize(&lhs));
            rhs_paths.push(quantize(&rhs));
        });
        lhs_paths.sort();
        rhs_paths.sort();
        assert_eq!(lhs_paths, rhs_paths, "multiset identity over all orderings");
    }

    #[test]
    fn tied_extremum_detected() {
        let w = RealWalk::from_increments(vec![1.0, -1.0, 1.0]);
        assert!(matches!(
            future_min_transform(&w),
            Err(Error::TiedExtremum { .. })
        ));
    }

    fn quantize(xs: &[f64]) -> Vec<i64> {
        xs.iter().map(|&x| (x * 1e9).round() as i64).collect()
    }

    fn permute_all(base: &[f64], f: &mut impl FnMut(&[f64])) {
        for_each_permutation(base, |p| f(p));
    }

    #[test]
    fn for_each_permutation_visits_all_orderings() {
        let mut seen = Vec::new();
        for_each_permutation(&[1u8, 2, 3, 4], |p| seen.push(p.to_vec()));
        assert_eq!(seen.len(), 24);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 24);
    }
}
