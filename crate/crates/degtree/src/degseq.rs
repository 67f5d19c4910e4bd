//! Degree sequences, child sequences, offspring laws and example families.
//!
//! A degree sequence stores, for each child count `i`, the number `N_i` of
//! vertices with `i` children, subject to the balance identity
//! `sum N_i = 1 + sum i*N_i`. Counts are kept sparse (sorted map keyed by
//! child count) because hub families have huge gaps between occupied degrees;
//! child sequences are dense arrays.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::stats::linear_fit;
use crate::Result;

/// Counts `N_i` of vertices with `i` children, satisfying the balance
/// identity `sum N_i = 1 + sum i*N_i`. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSequence {
    counts: BTreeMap<u64, u64>,
}

impl<'de> Deserialize<'de> for DegreeSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            counts: BTreeMap<u64, u64>,
        }
        let raw = Raw::deserialize(d)?;
        DegreeSequence::validate(raw.counts).map_err(serde::de::Error::custom)
    }
}

impl DegreeSequence {
    /// Validates a raw count map. Zero-count entries are dropped.
    pub fn validate(raw: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for (i, n) in raw {
            if n > 0 {
                *counts.entry(i).or_insert(0) += n;
            }
        }
        if counts.is_empty() {
            return Err(Error::Empty);
        }
        let total: u64 = counts.values().sum();
        let weighted: u64 = counts.iter().map(|(&i, &n)| i * n).sum();
        if total != 1 + weighted {
            return Err(Error::BalanceViolation { total, weighted });
        }
        Ok(Self { counts })
    }

    /// Number of vertices `s = sum N_i`.
    pub fn size(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Count of vertices with exactly `i` children.
    pub fn count(&self, i: u64) -> u64 {
        self.counts.get(&i).copied().unwrap_or(0)
    }

    /// Occupied degrees with their counts, ascending by degree.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&i, &n)| (i, n))
    }

    /// Largest degree with a positive count.
    pub fn max_degree(&self) -> u64 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    /// Child sequence: the counts expanded into a non-increasing array of
    /// length `s` summing to `s - 1`.
    pub fn child_sequence(&self) -> ChildSequence {
        let mut d = Vec::with_capacity(self.size() as usize);
        for (&i, &n) in self.counts.iter().rev() {
            d.extend(std::iter::repeat(i).take(n as usize));
        }
        ChildSequence { d }
    }

    /// The statistic `sum (i-1)^2 N_i`, exact in integers.
    pub fn squared_centered_sum(&self) -> u64 {
        self.counts
            .iter()
            .map(|(&i, &n)| {
                let di = i as i64 - 1;
                (di * di) as u64 * n
            })
            .sum()
    }
}

/// Dense non-increasing array of child counts; inverse of the count map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChildSequence {
    d: Vec<u64>,
}

impl ChildSequence {
    /// Builds from an arbitrary multiset of child counts; sorts and validates.
    pub fn from_multiset(mut d: Vec<u64>) -> Result<Self> {
        d.sort_unstable_by(|a, b| b.cmp(a));
        let seq = Self { d };
        seq.to_degree_sequence()?;
        Ok(seq)
    }

    pub fn values(&self) -> &[u64] {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Collapses back to the sparse count map. Roundtrip with
    /// [`DegreeSequence::child_sequence`] is the identity.
    pub fn to_degree_sequence(&self) -> Result<DegreeSequence> {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for &x in &self.d {
            *counts.entry(x).or_insert(0) += 1;
        }
        DegreeSequence::validate(counts)
    }
}

/// Finite-support offspring distribution `(mu_0, ..., mu_K)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OffspringLaw {
    probabilities: Vec<f64>,
    mean: f64,
    critical: bool,
    /// gcd of the positive support; 1 means aperiodic.
    period: u64,
}

/// Tolerance on the mean when flagging criticality of float-valued laws.
pub const CRITICAL_TOL: f64 = 1e-12;

impl OffspringLaw {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() || probabilities.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidParameter(
                "offspring probabilities must lie in [0, 1]".into(),
            ));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "offspring probabilities sum to {total}, expected 1"
            )));
        }
        let mean: f64 = probabilities
            .iter()
            .enumerate()
            .map(|(k, &p)| k as f64 * p)
            .sum();
        let period = probabilities
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, _)| k as u64)
            .fold(0, gcd);
        Ok(Self {
            critical: (mean - 1.0).abs() <= CRITICAL_TOL,
            probabilities,
            mean,
            period,
        })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn is_critical(&self) -> bool {
        self.critical
    }

    /// gcd of `{k >= 1 : mu_k > 0}`; zero when the law has no positive support.
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn is_aperiodic(&self) -> bool {
        self.period == 1
    }

    /// Variance `sum k^2 mu_k - mean^2`.
    pub fn variance(&self) -> f64 {
        let m2: f64 = self
            .probabilities
            .iter()
            .enumerate()
            .map(|(k, &p)| (k * k) as f64 * p)
            .sum();
        m2 - self.mean * self.mean
    }

    fn sample_one(&self, rng: &mut impl Rng) -> u64 {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (k, &p) in self.probabilities.iter().enumerate() {
            acc += p;
            if u < acc {
                return k as u64;
            }
        }
        (self.probabilities.len() - 1) as u64
    }

    /// Smallest feasible conditioning size `>= n` (sizes must satisfy
    /// `n ≡ 1 (mod period)`), or `None` when the law has no positive support.
    pub fn feasible_size(&self, n: u64) -> Option<u64> {
        if self.period == 0 {
            return None;
        }
        let rem = (n.max(2) - 1) % self.period;
        Some(if rem == 0 {
            n.max(2)
        } else {
            n.max(2) + self.period - rem
        })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// k-ary family: `N_k = n`, `N_0 = 1 + (k-1)n`, size `1 + nk`.
pub fn gen_kary(k: u64, n: u64) -> Result<DegreeSequence> {
    if k < 1 || n < 1 {
        return Err(Error::InvalidParameter("gen_kary requires k, n >= 1".into()));
    }
    DegreeSequence::validate([(k, n), (0, 1 + (k - 1) * n)])
}

/// Restricted-degree family: positive counts `n_i` on a finite set of
/// degrees, with `N_0 = 1 + sum (i-1) n_i` leaves.
pub fn gen_restricted(entries: &[(u64, u64)]) -> Result<DegreeSequence> {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut leaves: i64 = 1;
    for &(i, n) in entries {
        if i == 0 {
            return Err(Error::InvalidParameter(
                "restricted family takes degrees >= 1; leaves are derived".into(),
            ));
        }
        *counts.entry(i).or_insert(0) += n;
        leaves += (i as i64 - 1) * n as i64;
    }
    if counts.is_empty() || leaves < 1 {
        return Err(Error::DegenerateSize);
    }
    counts.insert(0, leaves as u64);
    DegreeSequence::validate(counts)
}

/// Power-law hub family: hub degrees `d_j = floor(j^-alpha * b_n)` for
/// `j <= M_n = sup{j : j^-alpha * b_n >= 1}` with `b_n = floor(n^alpha)`.
/// Returns the sequence together with `b_n`. Duplicate hub degrees are
/// accumulated into the count map, which keeps the balance identity exact.
pub fn gen_powerlaw(alpha: f64, n: u64) -> Result<(DegreeSequence, f64)> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::InvalidParameter(
            "power-law exponent must lie in (1/2, 1)".into(),
        ));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("power-law family needs n >= 2".into()));
    }
    let b_n = (n as f64).powf(alpha).floor();
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut hub_sum: u64 = 0;
    let mut hubs: u64 = 0;
    for j in 1.. {
        let d = ((j as f64).powf(-alpha) * b_n).floor() as u64;
        if d == 0 {
            break;
        }
        *counts.entry(d).or_insert(0) += 1;
        hub_sum += d;
        hubs += 1;
    }
    if hubs == 0 {
        return Err(Error::DegenerateSize);
    }
    counts.insert(0, 1 + hub_sum - hubs);
    Ok((DegreeSequence::validate(counts)?, b_n))
}

/// Adds hub degrees `d_j = floor(beta_j * sqrt(s))` to a base sequence,
/// inflating the leaf count to keep the balance identity. When a hub degree
/// collides with an already occupied degree, the count there is incremented
/// instead of overwritten.
pub fn gen_sigma_plus_jumps(base: &DegreeSequence, beta: &[f64]) -> Result<DegreeSequence> {
    if beta.windows(2).any(|w| w[0] < w[1]) || beta.iter().any(|&b| b <= 0.0) {
        return Err(Error::InvalidParameter(
            "jump sizes must be positive and non-increasing".into(),
        ));
    }
    let root_s = (base.size() as f64).sqrt();
    let mut counts: BTreeMap<u64, u64> = base.entries().collect();
    let mut extra_leaves: u64 = 0;
    for &b in beta {
        let d = (b * root_s).floor() as u64;
        if d == 0 {
            continue;
        }
        *counts.entry(d).or_insert(0) += 1;
        extra_leaves += d - 1;
    }
    *counts.entry(0).or_insert(0) += extra_leaves;
    DegreeSequence::validate(counts)
}

/// Default attempt budget for conditioned Galton-Watson rejection sampling.
pub const DEFAULT_REJECTION_BUDGET: u64 = 1_000_000;

/// Degree counts of `n` i.i.d. offspring draws conditioned on
/// `sum (xi_i - 1) = -1`, by plain rejection.
pub fn sample_cgw_degree_sequence(
    law: &OffspringLaw,
    n: u64,
    rng: &mut impl Rng,
    budget: u64,
) -> Result<DegreeSequence> {
    if !law.is_critical() {
        return Err(Error::NotCritical { mean: law.mean() });
    }
    if n == 0 {
        return Err(Error::Empty);
    }
    let target = n - 1;
    for _ in 0..budget {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        let mut total: u64 = 0;
        let mut ok = true;
        for _ in 0..n {
            let k = law.sample_one(rng);
            total += k;
            if total > target {
                ok = false;
                break;
            }
            *counts.entry(k).or_insert(0) += 1;
        }
        if ok && total == target {
            return DegreeSequence::validate(counts);
        }
    }
    Err(Error::RejectionBudgetExceeded { budget, size: n })
}

/// Numeric diagnostics for a family of degree sequences against the
/// convergence hypotheses: growing size, per-rank hub ratios, the scaled
/// degree-variance statistic, and the `s_n/b_n` trend. Non-convergence is
/// reported, never raised.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsReport {
    pub sizes: Vec<u64>,
    pub b: Vec<f64>,
    pub s_over_b: Vec<f64>,
    /// Hub ratios `d^n_j / b_n` for ranks `j = 1..=10`, one row per family member.
    pub hub_ratios: Vec<Vec<f64>>,
    /// `(1/b_n^2) sum (i-1)^2 N_i`, one entry per family member.
    pub variance_stat: Vec<f64>,
    /// Estimated limit jump sizes (ranks that stabilized across the ladder).
    pub beta_hat: Vec<f64>,
    /// Fitted decay exponent of the stabilized hub ranks, when at least two.
    pub beta_decay_hat: Option<f64>,
    pub sigma2_hat: f64,
    pub size_diverging: bool,
    pub s_over_b_diverging: bool,
    /// Declared sufficient check: positive diffusion part or slowly decaying
    /// hub sizes. A `false` here flags a bounded-variation limit.
    pub unbounded_variation: bool,
    pub notes: Vec<String>,
}

/// How many hub ranks are tracked for estimation (the report table shows 10).
const ESTIMATION_RANKS: usize = 4096;
const REPORT_RANKS: usize = 10;

pub fn hypothesis_diagnostics(family: &[DegreeSequence], b: &[f64]) -> Result<DiagnosticsReport> {
    if family.len() < 3 || family.len() != b.len() {
        return Err(Error::InvalidParameter(
            "diagnostics need at least 3 family members with matching scalings".into(),
        ));
    }
    if b.iter().any(|&x| x <= 0.0) {
        return Err(Error::InvalidParameter("scalings must be positive".into()));
    }
    let mut notes = Vec::new();
    let sizes: Vec<u64> = family.iter().map(|ds| ds.size()).collect();
    let s_over_b: Vec<f64> = sizes
        .iter()
        .zip(b)
        .map(|(&s, &bn)| s as f64 / bn)
        .collect();

    // Per-rank hub ratios, up to the estimation cap.
    let ranks: Vec<Vec<f64>> = family
        .iter()
        .zip(b)
        .map(|(ds, &bn)| {
            let child = ds.child_sequence();
            child
                .values()
                .iter()
                .take(ESTIMATION_RANKS)
                .map(|&d| d as f64 / bn)
                .collect()
        })
        .collect();
    let variance_stat: Vec<f64> = family
        .iter()
        .zip(b)
        .map(|(ds, &bn)| ds.squared_centered_sum() as f64 / (bn * bn))
        .collect();

    // A rank is treated as a genuine hub when its ratio is stable over the
    // last three ladder entries and stays clearly positive.
    let last = ranks.len() - 1;
    let stable = |j: usize| -> Option<f64> {
        let r2 = *ranks[last].get(j)?;
        let r1 = *ranks[last - 1].get(j)?;
        let r0 = *ranks[last - 2].get(j)?;
        let spread = (r2 - r1).abs().max((r1 - r0).abs());
        (r2 > 0.02 && spread <= 0.2 * r2.max(0.05)).then_some(r2)
    };
    let mut beta_hat = Vec::new();
    for j in 0..ranks[last].len() {
        match stable(j) {
            Some(r) => beta_hat.push(r),
            None => break,
        }
    }

    // Decay of the stabilized ranks; an exponent below one means the jump
    // sizes are not summable, which is the unbounded-variation regime.
    let beta_decay_hat = if beta_hat.len() >= 8 {
        let xs: Vec<f64> = (1..=beta_hat.len()).map(|j| (j as f64).ln()).collect();
        let ys: Vec<f64> = beta_hat.iter().map(|&v| v.ln()).collect();
        Some(-linear_fit(&xs, &ys).0)
    } else {
        None
    };

    // Subtract the explained jump part, extended by the fitted tail, from the
    // variance statistic at the top of the ladder.
    let mut explained: f64 = beta_hat.iter().map(|&v| v * v).sum();
    if let Some(theta) = beta_decay_hat {
        if theta > 0.5 {
            let r = beta_hat.len() as f64;
            let last_val = *beta_hat.last().unwrap();
            // integral tail of (last * (j/R)^-theta)^2 beyond rank R
            explained += last_val * last_val * r / (2.0 * theta - 1.0);
        }
    }
    let sigma2_hat = (variance_stat[last] - explained).max(0.0);

    let size_diverging = sizes.windows(2).all(|w| w[1] > w[0])
        && sizes[sizes.len() - 1] as f64 >= 2.0 * sizes[0] as f64;
    if !size_diverging {
        notes.push("size ladder is not clearly diverging".into());
    }
    let s_over_b_diverging = s_over_b.windows(2).all(|w| w[1] > w[0] * 0.999)
        && s_over_b[s_over_b.len() - 1] >= 1.5 * s_over_b[0];
    if !s_over_b_diverging {
        notes.push("s_n/b_n does not appear to diverge".into());
    }
    // A variance statistic that keeps shrinking along the ladder is treated
    // as vanishing rather than as a positive diffusion coefficient.
    let stat_vanishing = variance_stat[last] < 0.5 * variance_stat[last - 1]
        || variance_stat[last] < 1e-9;
    let sigma2_hat = if stat_vanishing { 0.0 } else { sigma2_hat };

    let heavy_jumps = matches!(beta_decay_hat, Some(theta) if theta < 1.0);
    let unbounded_variation = sigma2_hat > 1e-9 || heavy_jumps;
    if !unbounded_variation {
        notes.push("bounded-variation limit: sigma^2 = 0 and jump sizes summable".into());
    }
    for j in 0..REPORT_RANKS.min(ranks[last].len()) {
        if stable(j).is_none() && ranks[last][j] > 0.05 {
            notes.push(format!("hub rank {} has not stabilized", j + 1));
            break;
        }
    }

    Ok(DiagnosticsReport {
        sizes,
        b: b.to_vec(),
        s_over_b,
        hub_ratios: ranks
            .iter()
            .map(|r| r.iter().take(REPORT_RANKS).copied().collect())
            .collect(),
        variance_stat,
        beta_hat,
        beta_decay_hat,
        sigma2_hat,
        size_diverging,
        s_over_b_diverging,
        unbounded_variation,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn ds(entries: &[(u64, u64)]) -> DegreeSequence {
        DegreeSequence::validate(entries.iter().copied()).unwrap()
    }

    #[test]
    fn validate_figure_tree_counts() {
        let d = ds(&[(0, 5), (1, 2), (2, 2), (3, 1)]);
        assert_eq!(d.size(), 10);
    }

    #[test]
    fn validate_kary_example() {
        // k=2, n=3: N_2 = 3, N_0 = 1 + 3 = 4, size 7.
        let d = ds(&[(2, 3), (0, 4)]);
        assert_eq!(d.size(), 7);
    }

    #[test]
    fn validate_rejects_unbalanced() {
        match DegreeSequence::validate([(0u64, 2u64)]) {
            Err(Error::BalanceViolation { total: 2, weighted: 0 }) => {}
            other => panic!("expected balance violation, got {other:?}"),
        }
        assert!(matches!(
            DegreeSequence::validate(std::iter::empty::<(u64, u64)>()),
            Err(Error::Empty)
        ));
    }

    #[test]
    fn child_sequence_is_sorted_expansion() {
        let d = ds(&[(0, 5), (1, 2), (2, 2), (3, 1)]);
        assert_eq!(
            d.child_sequence().values(),
            &[3, 2, 2, 1, 1, 0, 0, 0, 0, 0]
        );
        assert_eq!(ds(&[(0, 1)]).child_sequence().values(), &[0]);
        assert_eq!(
            ds(&[(2, 3), (0, 4)]).child_sequence().values(),
            &[2, 2, 2, 0, 0, 0, 0]
        );
    }

    #[test]
    fn child_sequence_roundtrip() {
        for d in [
            ds(&[(0, 5), (1, 2), (2, 2), (3, 1)]),
            ds(&[(0, 1)]),
            gen_kary(3, 7).unwrap(),
        ] {
            assert_eq!(d.child_sequence().to_degree_sequence().unwrap(), d);
        }
    }

    #[test]
    fn kary_matches_closed_form() {
        let d = gen_kary(2, 4).unwrap();
        assert_eq!(d.count(2), 4);
        assert_eq!(d.count(0), 5);
        assert_eq!(d.size(), 9);
        let path = gen_kary(1, 5).unwrap();
        assert_eq!(path.count(1), 5);
        assert_eq!(path.count(0), 1);
        assert_eq!(path.size(), 6);
        let t = gen_kary(3, 2).unwrap();
        assert_eq!(t.count(3), 2);
        assert_eq!(t.count(0), 5);
        assert_eq!(t.size(), 7);
        for (k, n) in [(1u64, 1u64), (2, 10), (5, 3)] {
            assert_eq!(gen_kary(k, n).unwrap().size(), 1 + n * k);
        }
    }

    #[test]
    fn restricted_family_balances() {
        let d = gen_restricted(&[(2, 3), (5, 1)]).unwrap();
        assert_eq!(d.count(0), 1 + 3 + 4);
        assert_eq!(d.size(), 3 + 1 + 8);
    }

    #[test]
    fn powerlaw_direct_evaluation() {
        let (d, b) = gen_powerlaw(0.6, 100).unwrap();
        assert_eq!(b, 15.0); // floor(100^0.6)
        // M_n = #{j : floor(15 j^-0.6) >= 1} = #{j <= 15^(5/3)} = 91 hubs
        let hubs: u64 = d.entries().filter(|&(i, _)| i > 0).map(|(_, n)| n).sum();
        assert_eq!(hubs, 91);
        let top = d.child_sequence().values()[0];
        assert_eq!(top, 15);
        // second hub: floor(15 * 2^-0.6) = 9
        assert_eq!(d.child_sequence().values()[1], 9);
    }

    #[test]
    fn powerlaw_degenerate_small_n() {
        let (d, b) = gen_powerlaw(0.9, 2).unwrap();
        assert_eq!(b, 1.0);
        assert_eq!(d.count(1), 1);
        assert_eq!(d.count(0), 1);
        assert_eq!(d.size(), 2);
    }

    #[test]
    fn powerlaw_outputs_always_validate() {
        for n in [2u64, 10, 1000, 12345] {
            for alpha in [0.55, 0.6, 0.75, 0.9] {
                let (d, _) = gen_powerlaw(alpha, n).unwrap();
                assert!(d.size() >= 2);
            }
        }
        assert!(gen_powerlaw(0.4, 10).is_err());
        assert!(gen_powerlaw(1.0, 10).is_err());
    }

    #[test]
    fn sigma_plus_jumps_adds_hubs() {
        let base = gen_kary(2, 1000).unwrap(); // size 2001, sqrt ~ 44.7
        let d = gen_sigma_plus_jumps(&base, &[1.0]).unwrap();
        let hub = (2001f64.sqrt()).floor() as u64;
        assert_eq!(d.count(hub), 1);
        assert_eq!(d.count(0), base.count(0) + hub - 1);
        // relative size growth identity
        let (s, st) = (base.size() as f64, d.size() as f64);
        assert!((st / s - 1.0 - hub as f64 / s).abs() < 1e-12);
    }

    #[test]
    fn sigma_plus_jumps_empty_is_identity() {
        let base = gen_kary(2, 50).unwrap();
        assert_eq!(gen_sigma_plus_jumps(&base, &[]).unwrap(), base);
    }

    #[test]
    fn sigma_plus_jumps_hub_collision_increments() {
        // base occupies degree 2; a jump that lands on 2 must increment it.
        let base = gen_kary(2, 5).unwrap(); // size 11, sqrt ~ 3.3
        let d = gen_sigma_plus_jumps(&base, &[0.7]).unwrap(); // hub degree 2
        assert_eq!(d.count(2), 6);
        assert_eq!(d.size(), base.size() + 2);
    }

    #[test]
    fn offspring_law_flags() {
        let binary = OffspringLaw::new(vec![0.5, 0.0, 0.5]).unwrap();
        assert!(binary.is_critical());
        assert_eq!(binary.period(), 2);
        assert!(!binary.is_aperiodic());
        assert_eq!(binary.feasible_size(512), Some(513));
        assert_eq!(binary.feasible_size(513), Some(513));

        let uniform = OffspringLaw::new(vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!(uniform.is_critical());
        assert!(uniform.is_aperiodic());

        let sub = OffspringLaw::new(vec![1.0]).unwrap();
        assert!(!sub.is_critical());
    }

    #[test]
    fn cgw_size_three_is_forced() {
        let law = OffspringLaw::new(vec![0.5, 0.0, 0.5]).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..50 {
            let d = sample_cgw_degree_sequence(&law, 3, &mut rng, 10_000).unwrap();
            assert_eq!(d.count(0), 2);
            assert_eq!(d.count(2), 1);
        }
    }

    #[test]
    fn cgw_parity_exhausts_budget() {
        let law = OffspringLaw::new(vec![0.5, 0.0, 0.5]).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        match sample_cgw_degree_sequence(&law, 4, &mut rng, 2_000) {
            Err(Error::RejectionBudgetExceeded { budget: 2_000, size: 4 }) => {}
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn cgw_matches_bruteforce_conditional_law() {
        // All 27 outcomes of {0,1,2}^3 under the uniform critical law,
        // conditioned on sum = 2: multisets {0,1,1} and {0,0,2}, 3 ways each.
        let law = OffspringLaw::new(vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let mut seen = [0u64; 2];
        let reps = 20_000;
        for _ in 0..reps {
            let d = sample_cgw_degree_sequence(&law, 3, &mut rng, 100_000).unwrap();
            if d.count(2) == 1 {
                seen[1] += 1;
            } else {
                seen[0] += 1;
            }
        }
        let t = crate::stats::chi_square_gof(&seen, &[1.0, 1.0]);
        assert!(t.p_value > 1e-3, "p = {}", t.p_value);
    }

    #[test]
    fn diagnostics_kary_family() {
        let sizes = [100u64, 1000, 10_000];
        let family: Vec<_> = sizes.iter().map(|&n| gen_kary(2, n).unwrap()).collect();
        let b: Vec<f64> = sizes.iter().map(|&n| (n as f64).sqrt()).collect();
        let rep = hypothesis_diagnostics(&family, &b).unwrap();
        // closed form (1 + k(k-1)n)/n -> k(k-1) = 2, within 1% at the top size
        let last = *rep.variance_stat.last().unwrap();
        assert!((last - 2.0).abs() / 2.0 < 0.01, "stat = {last}");
        assert!(rep.hub_ratios.last().unwrap()[0] < 0.05);
        assert!(rep.beta_hat.is_empty());
        assert!((rep.sigma2_hat - 2.0).abs() < 0.01);
        assert!(rep.unbounded_variation);
        assert!(rep.size_diverging && rep.s_over_b_diverging);
    }

    #[test]
    fn diagnostics_powerlaw_family() {
        let ns = [2_000u64, 8_000, 32_000];
        let mut family = Vec::new();
        let mut b = Vec::new();
        for &n in &ns {
            let (d, bn) = gen_powerlaw(0.6, n).unwrap();
            family.push(d);
            b.push(bn);
        }
        let rep = hypothesis_diagnostics(&family, &b).unwrap();
        for (j, &r) in rep.hub_ratios.last().unwrap().iter().enumerate() {
            let target = ((j + 1) as f64).powf(-0.6);
            assert!(
                (r - target).abs() < 0.05,
                "rank {} ratio {} vs {}",
                j + 1,
                r,
                target
            );
        }
        assert!(rep.beta_hat.len() >= REPORT_RANKS);
        let theta = rep.beta_decay_hat.unwrap();
        assert!((theta - 0.6).abs() < 0.1, "theta = {theta}");
        assert!(rep.unbounded_variation);
        assert!(rep.sigma2_hat < 0.5, "sigma2 = {}", rep.sigma2_hat);
    }

    #[test]
    fn diagnostics_flags_constant_family() {
        let d = gen_kary(2, 100).unwrap();
        let family = vec![d.clone(), d.clone(), d];
        let rep = hypothesis_diagnostics(&family, &[10.0, 10.0, 10.0]).unwrap();
        assert!(!rep.size_diverging);
        assert!(!rep.notes.is_empty());
    }

    #[test]
    fn diagnostics_flags_path_family() {
        let family: Vec<_> = [100u64, 1000, 10_000]
            .iter()
            .map(|&n| gen_kary(1, n).unwrap())
            .collect();
        let b: Vec<f64> = family.iter().map(|d| (d.size() as f64).sqrt()).collect();
        let rep = hypothesis_diagnostics(&family, &b).unwrap();
        assert!(!rep.unbounded_variation);
    }
}
