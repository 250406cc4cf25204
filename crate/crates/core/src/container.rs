//! Greedy fingerprint–container construction.
//!
//! [`container_step`] runs one greedy round: it repeatedly moves the vertex
//! of `U` with the largest degree outside the current *R-set* into the
//! fingerprint `F`, where the R-set holds every vertex with at least `D`
//! neighbours in `F`. The container is read off the final complement
//! `Z = V \ R` as its vertices of degree below `Δ` inside `Z`.
//!
//! [`fingerprint`] iterates that step on shrinking induced subgraphs until
//! the container drops below `ceil(ζn)` vertices.
//!
//! Both constructions only look at `U` through the choice of the next
//! fingerprint vertex, so any `U'` with `F ⊆ U' ⊆ U` replays them exactly;
//! [`rebuild_step`] and [`rebuild_fingerprint`] do that replay.

use serde::Serialize;

use crate::density::DensityParams;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::ratio::ceil_div;

/// One greedy round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub vertex: usize,
    /// Degree of `vertex` in the ambient graph minus the previous R-set.
    pub degree: usize,
    /// `|R_i|` after adding `vertex` to the fingerprint.
    pub r_size: usize,
}

/// Guarantees observed on a finished run. These are measured, not assumed;
/// they are only promised when the caller's degree hypothesis holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepReport {
    /// `U ∩ R_i = ∅` after every round.
    pub u_disjoint_from_r: bool,
    /// `deg(v_ℓ, Z)` for the last fingerprint vertex.
    pub last_vertex_degree_in_z: Option<usize>,
    pub last_vertex_below_delta: bool,
    /// `|C| < k`, when a `k` was supplied.
    pub container_below_k: Option<bool>,
    /// `U ⊆ C ∪ F`.
    pub covers_u: bool,
}

impl StepReport {
    pub fn all_hold(&self) -> bool {
        self.u_disjoint_from_r
            && self.last_vertex_below_delta
            && self.container_below_k.unwrap_or(true)
            && self.covers_u
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContainerStepResult {
    pub bound: usize,
    pub delta: usize,
    pub k: Option<usize>,
    /// `ℓ = ceil(2·|ambient|·D/Δ)`.
    pub ell: usize,
    /// `v_1, …, v_ℓ` in the order chosen.
    pub fingerprint: Vec<usize>,
    pub z: VertexSet,
    pub container: VertexSet,
    pub trace: Vec<StepRecord>,
    pub report: StepReport,
}

/// `ceil(2·size·D/Δ)`.
pub fn step_length(size: usize, bound: usize, delta: usize) -> usize {
    ceil_div(2 * size as u128 * bound as u128, delta as u128) as usize
}

/// One greedy round on the whole graph. See [`container_step_within`].
pub fn container_step(
    g: &Graph,
    u: &VertexSet,
    bound: usize,
    delta: usize,
    k: usize,
) -> Result<ContainerStepResult> {
    container_step_within(g, &g.vertices(), u, bound, delta, Some(k))
}

/// One greedy round on `G[ambient]`, without materializing it.
///
/// Requires `D, Δ ≥ 1`, `U ⊆ ambient`, `Δ(G[U]) < D` and `|U| ≥ ℓ`.
/// Ties in the degree competition go to the smallest vertex id.
pub fn container_step_within(
    g: &Graph,
    ambient: &VertexSet,
    u: &VertexSet,
    bound: usize,
    delta: usize,
    k: Option<usize>,
) -> Result<ContainerStepResult> {
    if bound == 0 || delta == 0 {
        return Err(Error::InvalidParameter(format!(
            "D and delta must be at least 1, got D = {bound}, delta = {delta}"
        )));
    }
    if u.universe() != g.n() || ambient.universe() != g.n() {
        return Err(Error::InvalidParameter("vertex set universe differs from graph order".into()));
    }
    if !u.is_subset(ambient) {
        return Err(Error::Precondition("U must lie inside the ambient vertex set".into()));
    }
    let ell = step_length(ambient.len(), bound, delta);
    if u.len() < ell {
        return Err(Error::TooSmall { needed: ell, have: u.len() });
    }
    let max_degree = g.max_degree_in(u);
    if max_degree >= bound {
        return Err(Error::NotSparse { max_degree, bound });
    }

    let n = g.n();
    // deg_rest[x] = |N(x) ∩ (ambient \ R)|
    let mut deg_rest: Vec<usize> = (0..n).map(|x| g.degree_in(x, ambient)).collect();
    let mut deg_f = vec![0usize; n];
    let mut in_r = VertexSet::empty(n);
    let mut r_size = 0;
    let mut in_f = VertexSet::empty(n);
    let mut fingerprint = Vec::with_capacity(ell);
    let mut trace = Vec::with_capacity(ell);
    let mut u_disjoint_from_r = true;
    let candidates = u.to_vec();

    for _ in 0..ell {
        let mut best: Option<usize> = None;
        for &v in &candidates {
            if in_f.contains(v) {
                continue;
            }
            // strict comparison keeps the smallest id among equals
            if best.is_none_or(|b| deg_rest[v] > deg_rest[b]) {
                best = Some(v);
            }
        }
        let v = best.expect("|U| >= ell leaves a candidate every round");
        let degree = deg_rest[v];
        in_f.insert(v);
        fingerprint.push(v);
        for &w in g.neighbors(v) {
            if !ambient.contains(w) {
                continue;
            }
            deg_f[w] += 1;
            if deg_f[w] == bound && in_r.insert(w) {
                r_size += 1;
                if u.contains(w) {
                    u_disjoint_from_r = false;
                }
                for &x in g.neighbors(w) {
                    deg_rest[x] -= 1;
                }
            }
        }
        trace.push(StepRecord { vertex: v, degree, r_size });
    }

    let z = ambient.difference(&in_r);
    let mut container = VertexSet::empty(n);
    for w in &z {
        if deg_rest[w] < delta {
            container.insert(w);
        }
    }
    let last_vertex_degree_in_z = fingerprint.last().map(|&v| deg_rest[v]);
    let report = StepReport {
        u_disjoint_from_r,
        last_vertex_degree_in_z,
        last_vertex_below_delta: last_vertex_degree_in_z.is_none_or(|d| d < delta),
        container_below_k: k.map(|k| container.len() < k),
        covers_u: u.difference(&in_f).is_subset(&container),
    };
    Ok(ContainerStepResult {
        bound,
        delta,
        k,
        ell,
        fingerprint,
        z,
        container,
        trace,
        report,
    })
}

/// Replays [`container_step`] from a claimed fingerprint alone
/// (`U' = set(F)`). Callers compare the result with the original run.
pub fn rebuild_step(
    g: &Graph,
    claimed: &[usize],
    bound: usize,
    delta: usize,
) -> Result<ContainerStepResult> {
    let u = claimed_set(g, claimed)?;
    container_step_within(g, &g.vertices(), &u, bound, delta, None)
}

fn claimed_set(g: &Graph, claimed: &[usize]) -> Result<VertexSet> {
    if claimed.is_empty() {
        return Err(Error::Precondition("claimed fingerprint is empty".into()));
    }
    let u = VertexSet::from_ids(g.n(), claimed.iter().copied())?;
    if u.len() != claimed.len() {
        return Err(Error::Precondition("claimed fingerprint repeats a vertex".into()));
    }
    Ok(u)
}

/// Parameters and outcome of one halving round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub k: usize,
    pub delta: usize,
    pub ell: usize,
    pub size_before: usize,
    pub size_after: usize,
    pub report: StepReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FingerprintResult {
    /// Ordered fingerprint, greedy rounds first, then padding.
    pub fingerprint: Vec<usize>,
    /// End offsets of each round's slice of `fingerprint`.
    pub boundaries: Vec<usize>,
    pub rounds: Vec<RoundRecord>,
    pub container: VertexSet,
    pub f_target: usize,
    pub f_real: f64,
    /// Trailing fingerprint vertices added by ascending id to reach `f_target`.
    pub padded: usize,
    /// `ceil(ζn)`.
    pub size_threshold: usize,
    /// The final container has fewer than `ceil(ζn)` vertices.
    pub completed: bool,
    /// A round was skipped because `U` had too few unused vertices left.
    pub early_terminated: bool,
    /// `U \ F ⊆ C`.
    pub covers_u: bool,
}

impl FingerprintResult {
    pub fn greedy_len(&self) -> usize {
        self.boundaries.last().copied().unwrap_or(0)
    }
}

struct Round {
    k: usize,
    delta: usize,
    ell: usize,
}

fn round_params(p: &DensityParams, threshold: usize, size: usize, bound: usize) -> Round {
    let k = threshold.max(size.div_ceil(2));
    let delta = p.delta_for(size);
    Round {
        k,
        delta,
        ell: step_length(size, bound, delta),
    }
}

/// Iterated construction: greedy rounds on `G[C]` with
/// `k = max(ceil(ζn), ceil(|C|/2))` and `Δ = ceil(|C|·d/2)`, for at most
/// `ceil(log2(1/ζ))` rounds and while `|C| ≥ ceil(ζn)`, then padding from
/// `U \ F` by ascending id up to `f = ceil(4D/d)·ceil(log2(1/ζ))`.
pub fn fingerprint(
    g: &Graph,
    u: &VertexSet,
    p: &DensityParams,
    bound: usize,
) -> Result<FingerprintResult> {
    let n = g.n();
    if bound == 0 {
        return Err(Error::InvalidParameter("degree bound D must be at least 1".into()));
    }
    if u.universe() != n {
        return Err(Error::InvalidParameter("vertex set universe differs from graph order".into()));
    }
    let max_degree = g.max_degree_in(u);
    if max_degree >= bound {
        return Err(Error::NotSparse { max_degree, bound });
    }
    let f_target = p.f_target(bound);
    if u.len() < f_target {
        return Err(Error::TooSmall { needed: f_target, have: u.len() });
    }
    let threshold = p.size_threshold(n);
    let budget = p.round_budget();

    let mut container = g.vertices();
    let mut fp: Vec<usize> = Vec::with_capacity(f_target);
    let mut used = VertexSet::empty(n);
    let mut boundaries = Vec::new();
    let mut rounds = Vec::new();
    let mut early_terminated = false;

    while container.len() >= threshold && rounds.len() < budget {
        let size = container.len();
        let r = round_params(p, threshold, size, bound);
        let available = u.intersection(&container).difference(&used);
        if available.len() < r.ell {
            early_terminated = true;
            break;
        }
        let step = container_step_within(g, &container, &available, bound, r.delta, Some(r.k))?;
        for &v in &step.fingerprint {
            used.insert(v);
        }
        fp.extend_from_slice(&step.fingerprint);
        boundaries.push(fp.len());
        rounds.push(RoundRecord {
            k: r.k,
            delta: r.delta,
            ell: r.ell,
            size_before: size,
            size_after: step.container.len(),
            report: step.report,
        });
        container = step.container;
    }
    debug_assert!(fp.len() <= f_target);

    let greedy = fp.len();
    for v in u.difference(&used).iter().take(f_target.saturating_sub(greedy)) {
        used.insert(v);
        fp.push(v);
    }
    let covers_u = u.difference(&used).is_subset(&container);
    Ok(FingerprintResult {
        padded: fp.len() - greedy,
        fingerprint: fp,
        boundaries,
        rounds,
        completed: container.len() < threshold,
        container,
        f_target,
        f_real: p.f_real(bound),
        size_threshold: threshold,
        early_terminated,
        covers_u,
    })
}

/// Rebuilds the container of `fp` from its fingerprint alone, replaying each
/// round with that round's slice as `U'`. The replay must pick every slice
/// in its recorded order.
pub fn rebuild_fingerprint(
    g: &Graph,
    fp: &FingerprintResult,
    p: &DensityParams,
    bound: usize,
) -> Result<VertexSet> {
    let total = fp.fingerprint.len();
    let greedy = fp.greedy_len();
    if greedy > total || greedy + fp.padded != total {
        return Err(Error::Structural(format!(
            "round markers cover {greedy} vertices plus {} padded, fingerprint has {total}",
            fp.padded
        )));
    }
    if fp.boundaries.windows(2).any(|w| w[0] >= w[1]) || fp.boundaries.first() == Some(&0) {
        return Err(Error::Structural("round markers must be strictly increasing".into()));
    }
    let n = g.n();
    let threshold = p.size_threshold(n);
    let mut container = g.vertices();
    let mut start = 0;
    for (i, &end) in fp.boundaries.iter().enumerate() {
        if container.len() < threshold || i >= p.round_budget() {
            return Err(Error::Structural(format!("round {i} would not run")));
        }
        let slice = &fp.fingerprint[start..end];
        let r = round_params(p, threshold, container.len(), bound);
        let u = claimed_set(g, slice).map_err(|e| Error::Structural(format!("round {i}: {e}")))?;
        let step = container_step_within(g, &container, &u, bound, r.delta, Some(r.k))
            .map_err(|e| Error::Structural(format!("round {i}: {e}")))?;
        if step.fingerprint != slice {
            return Err(Error::Structural(format!(
                "round {i} replay chose {:?}, recorded {slice:?}",
                step.fingerprint
            )));
        }
        container = step.container;
        start = end;
    }
    Ok(container)
}
