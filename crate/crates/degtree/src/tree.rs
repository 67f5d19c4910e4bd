//! Plane trees encoded as child counts in depth-first order, their
//! depth-first and breadth-first walks, profiles, the discrete Lamperti
//! transform, and subtree band statistics.
//!
//! The canonical encoding is the DFS degree array: `dfs_degrees[i]` is the
//! number of children of the `i`-th vertex in lexicographic (depth-first)
//! order. This is O(s) memory, walk construction is a scan, and subtrees are
//! contiguous index ranges. Heights and BFS order are derived in single
//! stack/queue passes; recursion is never used since trees can be path-like.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Rooted plane tree, canonically encoded as child counts in depth-first
/// order. Serializes as the bare degree array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PlaneTree {
    dfs_degrees: Vec<u32>,
}

impl<'de> Deserialize<'de> for PlaneTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let degrees = Vec::<u32>::deserialize(d)?;
        PlaneTree::from_dfs_degrees(degrees).map_err(serde::de::Error::custom)
    }
}

/// Tag distinguishing the three lattice-walk kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WalkKind {
    Dfw,
    Bfw,
    EiBridge,
}

/// Integer-valued discrete path. Depth- and breadth-first walks start at one,
/// stay positive before the final step and end at zero; bridges share the
/// endpoints but may go non-positive in between.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeWalk {
    pub values: Vec<i64>,
    pub kind: WalkKind,
}

impl LatticeWalk {
    pub fn new(values: Vec<i64>, kind: WalkKind) -> Result<Self> {
        if values.len() < 2 || values[0] != 1 || *values.last().unwrap() != 0 {
            return Err(Error::InvalidParameter(
                "walk must start at 1 and end at 0".into(),
            ));
        }
        let w = Self { values, kind };
        if kind != WalkKind::EiBridge {
            w.check_excursion()?;
        }
        Ok(w)
    }

    /// Number of steps (one less than the number of values).
    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }

    fn check_excursion(&self) -> Result<()> {
        for (i, &v) in self.values.iter().enumerate().take(self.steps()) {
            if v < 1 {
                return Err(Error::NotAnExcursion { at: i });
            }
        }
        Ok(())
    }
}

/// Generation sizes `z_k` and their partial sums `c_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub z: Vec<u64>,
    pub c: Vec<u64>,
}

impl PlaneTree {
    /// Builds a tree from child counts in depth-first order, checking that the
    /// induced walk is an excursion.
    pub fn from_dfs_degrees(dfs_degrees: Vec<u32>) -> Result<Self> {
        if dfs_degrees.is_empty() {
            return Err(Error::Empty);
        }
        let mut w: i64 = 1;
        for (i, &d) in dfs_degrees.iter().enumerate() {
            w += d as i64 - 1;
            let last = i + 1 == dfs_degrees.len();
            if (last && w != 0) || (!last && w < 1) {
                return Err(Error::NotAnExcursion { at: i });
            }
        }
        Ok(Self { dfs_degrees })
    }

    pub fn size(&self) -> usize {
        self.dfs_degrees.len()
    }

    pub fn dfs_degrees(&self) -> &[u32] {
        &self.dfs_degrees
    }

    /// Depth-first walk: starts at one, `i`-th increment is `children(i) - 1`
    /// in depth-first order.
    pub fn dfw(&self) -> LatticeWalk {
        let mut values = Vec::with_capacity(self.size() + 1);
        let mut w: i64 = 1;
        values.push(w);
        for &d in &self.dfs_degrees {
            w += d as i64 - 1;
            values.push(w);
        }
        LatticeWalk {
            values,
            kind: WalkKind::Dfw,
        }
    }

    /// Heights of all vertices in depth-first order, by one stack pass.
    pub fn heights(&self) -> Vec<u64> {
        let s = self.size();
        let mut heights = vec![0u64; s];
        // stack of (height, remaining children) of the current ancestor chain
        let mut stack: Vec<(u64, u32)> = Vec::new();
        stack.push((0, self.dfs_degrees[0]));
        for i in 1..s {
            while let Some(&(_, remaining)) = stack.last() {
                if remaining == 0 {
                    stack.pop();
                } else {
                    break;
                }
            }
            let (h, remaining) = stack.last_mut().expect("walk positivity");
            heights[i] = *h + 1;
            *remaining -= 1;
            let hi = heights[i];
            stack.push((hi, self.dfs_degrees[i]));
        }
        heights
    }

    /// Parent of every vertex in depth-first indexing; the root maps to itself.
    pub fn parents(&self) -> Vec<usize> {
        let s = self.size();
        let mut parents = vec![0usize; s];
        let mut stack: Vec<(usize, u32)> = Vec::new();
        stack.push((0, self.dfs_degrees[0]));
        for i in 1..s {
            while let Some(&(_, remaining)) = stack.last() {
                if remaining == 0 {
                    stack.pop();
                } else {
                    break;
                }
            }
            let (p, remaining) = stack.last_mut().expect("walk positivity");
            parents[i] = *p;
            *remaining -= 1;
            stack.push((i, self.dfs_degrees[i]));
        }
        parents
    }

    /// Subtree sizes in depth-first indexing. The subtree rooted at `v`
    /// occupies the contiguous index range `v .. v + size`.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let s = self.size();
        let mut sizes = vec![1usize; s];
        let parents = self.parents();
        for i in (1..s).rev() {
            sizes[parents[i]] += sizes[i];
        }
        sizes
    }

    /// Breadth-first walk. BFS order sorts vertices by generation, keeping
    /// depth-first order within each generation, so a stable counting sort of
    /// the heights yields it in O(s).
    pub fn bfw(&self) -> LatticeWalk {
        let heights = self.heights();
        let max_h = heights.iter().copied().max().unwrap_or(0) as usize;
        let mut gen_starts = vec![0usize; max_h + 2];
        for &h in &heights {
            gen_starts[h as usize + 1] += 1;
        }
        for k in 1..gen_starts.len() {
            gen_starts[k] += gen_starts[k - 1];
        }
        let mut bfs_degrees = vec![0u32; self.size()];
        let mut next = gen_starts;
        for (i, &h) in heights.iter().enumerate() {
            bfs_degrees[next[h as usize]] = self.dfs_degrees[i];
            next[h as usize] += 1;
        }
        let mut values = Vec::with_capacity(self.size() + 1);
        let mut w: i64 = 1;
        values.push(w);
        for &d in &bfs_degrees {
            w += d as i64 - 1;
            values.push(w);
        }
        LatticeWalk {
            values,
            kind: WalkKind::Bfw,
        }
    }

    /// Generation sizes counted directly from vertex heights.
    pub fn profile(&self) -> Profile {
        let heights = self.heights();
        let max_h = heights.iter().copied().max().unwrap_or(0) as usize;
        let mut z = vec![0u64; max_h + 1];
        for &h in &heights {
            z[h as usize] += 1;
        }
        let mut c = Vec::with_capacity(z.len());
        let mut acc = 0u64;
        for &zk in &z {
            acc += zk;
            c.push(acc);
        }
        Profile { z, c }
    }

    /// Number of vertices of the subtree rooted at `v` (1-based depth-first
    /// index) whose height in the whole tree lies in `[h1, h2]`; `h2 = None`
    /// means unbounded.
    pub fn subtree_band_count(&self, v: usize, h1: u64, h2: Option<u64>) -> Result<u64> {
        let s = self.size();
        if v < 1 || v > s {
            return Err(Error::InvalidVertex { v, size: s });
        }
        let idx = v - 1;
        let heights = self.heights();
        let hv = heights[idx];
        let h2v = h2.unwrap_or(u64::MAX);
        if h1 < hv || h2v < h1 {
            return Err(Error::InvalidRange { h1, h2: h2v, hv });
        }
        let sz = self.subtree_sizes()[idx];
        Ok(heights[idx..idx + sz]
            .iter()
            .filter(|&&h| h >= h1 && h <= h2v)
            .count() as u64)
    }

    /// First height at which the subtree rooted at `v` holds at least half of
    /// its vertices, and the first later height by which it accumulates
    /// another quarter.
    pub fn subtree_half_quarter_heights(&self, v: usize) -> Result<(u64, u64)> {
        let s = self.size();
        if v < 1 || v > s {
            return Err(Error::InvalidVertex { v, size: s });
        }
        let idx = v - 1;
        let heights = self.heights();
        let sz = self.subtree_sizes()[idx];
        let hv = heights[idx];
        let max_h = heights[idx..idx + sz].iter().copied().max().unwrap();
        let mut band = vec![0u64; (max_h - hv + 1) as usize];
        for &h in &heights[idx..idx + sz] {
            band[(h - hv) as usize] += 1;
        }
        let total = sz as u64;
        let mut acc = 0u64;
        let mut h_half = max_h;
        for (off, &n) in band.iter().enumerate() {
            acc += n;
            if 2 * acc >= total {
                h_half = hv + off as u64;
                break;
            }
        }
        let mut acc2 = 0u64;
        let mut h_quarter = max_h;
        for off in (h_half - hv + 1) as usize..band.len() {
            acc2 += band[off];
            if 4 * acc2 >= total {
                h_quarter = hv + off as u64;
                break;
            }
        }
        Ok((h_half, h_quarter))
    }
}

/// Reconstructs the tree whose depth-first walk is `w`.
pub fn tree_from_dfw(w: &LatticeWalk) -> Result<PlaneTree> {
    let degrees = degrees_from_walk(w)?;
    Ok(PlaneTree {
        dfs_degrees: degrees,
    })
}

/// Reconstructs the tree whose breadth-first walk is `w`: the increments give
/// child counts in BFS order, from which the DFS degree array is rebuilt.
pub fn tree_from_bfw(w: &LatticeWalk) -> Result<PlaneTree> {
    let bfs_degrees = degrees_from_walk(w)?;
    let s = bfs_degrees.len();
    // Children of BFS vertex v are the next `deg(v)` BFS indices.
    let mut child_start = vec![0usize; s + 1];
    child_start[0] = 1;
    for v in 0..s {
        child_start[v + 1] = child_start[v] + bfs_degrees[v] as usize;
    }
    // Emit degrees in DFS order with an explicit stack of child ranges,
    // pushing children in reverse so the leftmost comes out first.
    let mut dfs_degrees = Vec::with_capacity(s);
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        dfs_degrees.push(bfs_degrees[v]);
        for c in (child_start[v]..child_start[v + 1]).rev() {
            stack.push(c);
        }
    }
    Ok(PlaneTree { dfs_degrees })
}

fn degrees_from_walk(w: &LatticeWalk) -> Result<Vec<u32>> {
    if w.values.len() < 2 || w.values[0] != 1 || *w.values.last().unwrap() != 0 {
        return Err(Error::InvalidParameter(
            "walk must start at 1 and end at 0".into(),
        ));
    }
    let s = w.steps();
    let mut degrees = Vec::with_capacity(s);
    for i in 1..=s {
        if i < s && w.values[i] < 1 {
            return Err(Error::NotAnExcursion { at: i });
        }
        let inc = w.values[i] - w.values[i - 1];
        if inc < -1 {
            return Err(Error::NotAnExcursion { at: i });
        }
        degrees.push((inc + 1) as u32);
    }
    Ok(degrees)
}

/// Discrete Lamperti transform: recovers the profile of the underlying tree
/// from its breadth-first walk via `z_0 = 1`, `c_k = z_0 + ... + z_k`,
/// `z_{k+1} = x(c_k)`, stopping when `z` hits zero.
pub fn discrete_lamperti(x: &LatticeWalk) -> Profile {
    let mut z = vec![1u64];
    let mut c = vec![1u64];
    loop {
        let ck = *c.last().unwrap() as usize;
        let next = if ck < x.values.len() {
            x.values[ck]
        } else {
            0
        };
        if next <= 0 {
            break;
        }
        z.push(next as u64);
        c.push(c.last().unwrap() + next as u64);
    }
    Profile { z, c }
}

/// Scaled profile curves on a user grid: `C(t) = c(floor((s/b) t)) / s` and
/// `Z(t) = z(floor((s/b) t)) / b`, both extended by constancy (`c` at `s`,
/// `z` at zero) beyond the last generation.
pub fn rescale(profile: &Profile, s_n: u64, b_n: f64, grid: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let a = s_n as f64 / b_n;
    let mut cs = Vec::with_capacity(grid.len());
    let mut zs = Vec::with_capacity(grid.len());
    for &t in grid {
        let j = (a * t).floor() as usize;
        let cv = if j < profile.c.len() {
            profile.c[j]
        } else {
            s_n
        };
        let zv = if j < profile.z.len() { profile.z[j] } else { 0 };
        cs.push(cv as f64 / s_n as f64);
        zs.push(zv as f64 / b_n);
    }
    (cs, zs)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The running example tree: root with children {1, 2, 3}, vertex 1 with
    /// two leaves, vertex 3 -> 31 -> {311 -> 3111, 312}. Profile 1,3,3,2,1.
    pub fn example_tree() -> PlaneTree {
        PlaneTree::from_dfs_degrees(vec![3, 2, 0, 0, 0, 1, 2, 1, 0, 0]).unwrap()
    }

    #[test]
    fn dfw_of_example_tree() {
        assert_eq!(
            example_tree().dfw().values,
            vec![1, 3, 4, 3, 2, 1, 1, 2, 2, 1, 0]
        );
    }

    #[test]
    fn bfw_of_example_tree() {
        assert_eq!(
            example_tree().bfw().values,
            vec![1, 3, 4, 3, 3, 2, 1, 2, 2, 1, 0]
        );
    }

    #[test]
    fn single_vertex_walks() {
        let t = PlaneTree::from_dfs_degrees(vec![0]).unwrap();
        assert_eq!(t.dfw().values, vec![1, 0]);
        assert_eq!(t.bfw().values, vec![1, 0]);
    }

    #[test]
    fn path_walks() {
        let t = PlaneTree::from_dfs_degrees(vec![1, 1, 0]).unwrap();
        assert_eq!(t.dfw().values, vec![1, 1, 1, 0]);
        assert_eq!(t.bfw().values, vec![1, 1, 1, 0]);
    }

    #[test]
    fn tree_from_dfw_roundtrip() {
        let w = LatticeWalk::new(vec![1, 3, 4, 3, 2, 1, 1, 2, 2, 1, 0], WalkKind::Dfw).unwrap();
        let t = tree_from_dfw(&w).unwrap();
        assert_eq!(t.dfs_degrees(), &[3, 2, 0, 0, 0, 1, 2, 1, 0, 0]);
        assert_eq!(t.dfw().values, w.values);

        let single = LatticeWalk::new(vec![1, 0], WalkKind::Dfw).unwrap();
        assert_eq!(tree_from_dfw(&single).unwrap().size(), 1);

        let cherry = LatticeWalk::new(vec![1, 2, 1, 0], WalkKind::Dfw).unwrap();
        assert_eq!(tree_from_dfw(&cherry).unwrap().dfs_degrees(), &[2, 0, 0]);
    }

    #[test]
    fn tree_from_dfw_rejects_non_excursion() {
        assert!(matches!(
            LatticeWalk::new(vec![1, 0, 1, 0], WalkKind::Dfw),
            Err(Error::NotAnExcursion { .. })
        ));
    }

    #[test]
    fn discrete_lamperti_of_example_tree() {
        let p = discrete_lamperti(&example_tree().bfw());
        assert_eq!(p.z, vec![1, 3, 3, 2, 1]);
        assert_eq!(p.c, vec![1, 4, 7, 9, 10]);
    }

    #[test]
    fn discrete_lamperti_trivial_cases() {
        let single = LatticeWalk::new(vec![1, 0], WalkKind::Bfw).unwrap();
        let p = discrete_lamperti(&single);
        assert_eq!(p.z, vec![1]);
        assert_eq!(p.c, vec![1]);

        let path = LatticeWalk::new(vec![1, 1, 1, 0], WalkKind::Bfw).unwrap();
        let p = discrete_lamperti(&path);
        assert_eq!(p.z, vec![1, 1, 1]);
        assert_eq!(p.c, vec![1, 2, 3]);
    }

    #[test]
    fn profile_counts_match_lamperti() {
        let t = example_tree();
        assert_eq!(t.profile(), discrete_lamperti(&t.bfw()));
    }

    #[test]
    fn walks_share_increment_multiset() {
        let t = example_tree();
        let mut a: Vec<i64> = t.dfw().values.windows(2).map(|w| w[1] - w[0]).collect();
        let mut b: Vec<i64> = t.bfw().values.windows(2).map(|w| w[1] - w[0]).collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
    }

    #[test]
    fn subtree_band_counts() {
        let t = example_tree();
        // vertex "3" is depth-first index 6 (1-based), height 1
        assert_eq!(t.subtree_band_count(6, 1, Some(2)).unwrap(), 2);
        // whole tree from the root
        assert_eq!(t.subtree_band_count(1, 0, None).unwrap(), 10);
        // vertex "31" is index 7: subtree {31, 311, 3111, 312}, heights 2,3,4,3
        let (h_half, h_quarter) = t.subtree_half_quarter_heights(7).unwrap();
        assert_eq!(h_half, 3);
        assert_eq!(h_quarter, 4);
        assert!(t.subtree_band_count(6, 0, Some(2)).is_err());
        assert!(t.subtree_band_count(99, 0, None).is_err());
    }

    #[test]
    fn rescale_example_profile() {
        let p = Profile {
            z: vec![1, 3, 3, 2, 1],
            c: vec![1, 4, 7, 9, 10],
        };
        let b = (10f64).sqrt();
        let (c, _z) = rescale(&p, 10, b, &[0.0]);
        assert!((c[0] - 0.1).abs() < 1e-15);
        let grid: Vec<f64> = (0..100).map(|i| i as f64 * 0.05).collect();
        let (c, _) = rescale(&p, 10, b, &grid);
        assert_eq!(c.last().copied().unwrap(), 1.0);
        assert!(c.iter().cloned().fold(f64::MIN, f64::max) <= 1.0);
        // identity time change: b_n = s_n reads off z_k / s_n at unit arguments
        let (_, z) = rescale(&p, 10, 10.0, &[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(z, vec![0.1, 0.3, 0.3, 0.2, 0.1]);
    }

    #[test]
    fn heights_and_parents_of_example() {
        let t = example_tree();
        assert_eq!(t.heights(), vec![0, 1, 2, 2, 1, 1, 2, 3, 4, 3]);
        assert_eq!(t.parents(), vec![0, 0, 1, 1, 0, 0, 5, 6, 7, 6]);
        assert_eq!(t.subtree_sizes(), vec![10, 3, 1, 1, 1, 5, 4, 2, 1, 1]);
    }

    #[test]
    fn bfw_roundtrip_example() {
        let t = example_tree();
        let back = tree_from_bfw(&t.bfw()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn deep_path_does_not_overflow_stack() {
        let n = 200_000;
        let mut deg = vec![1u32; n - 1];
        deg.push(0);
        let t = PlaneTree::from_dfs_degrees(deg).unwrap();
        assert_eq!(t.heights()[n - 1], (n - 1) as u64);
        assert_eq!(t.profile().z.len(), n);
    }
}
