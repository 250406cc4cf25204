//! Property suites over instance lists. Each suite recomputes the promised
//! guarantees independently of the reports the library itself produces.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::container::container_step_within;
use crate::counting::{count_sparse_sets, verify_count_bound, SparsityQuery};
use crate::density::{is_locally_dense_exact, DensityParams};
use crate::error::{Error, Result};
use crate::generators::{gnp, nonisomorphic_graphs, GeneratorSpec};
use crate::graph::{Graph, VertexSet};
use crate::limits::ScaleLimits;
use crate::ratio::ceil_div;
use crate::sparsifier::{draw, verify_sparsifier, VerifyMode};

pub const SUITE_NAMES: [&str; 5] = [
    "container-step",
    "determinism",
    "count-bound",
    "independent-sets",
    "sparsifier",
];

/// A named graph to run a suite on.
#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub graph: Graph,
}

impl Instance {
    pub fn from_spec(spec: &GeneratorSpec) -> Result<Instance> {
        Ok(Instance {
            label: spec.to_string(),
            graph: spec.build()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub instance: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub instances: usize,
    /// Individual checks performed.
    pub checks: u64,
    pub violations: Vec<Violation>,
    pub refusals: usize,
    /// Sparsifier suite only: bad-set passes that exact mode re-examined.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bad_set_passes: Option<usize>,
    /// No check ran at all.
    pub vacuous: bool,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, instances: usize) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            instances,
            checks: 0,
            violations: Vec::new(),
            refusals: 0,
            bad_set_passes: None,
            vacuous: false,
            notes: Vec::new(),
        }
    }

    fn violation(&mut self, instance: &str, detail: String) {
        self.violations.push(Violation {
            instance: instance.to_string(),
            detail,
        });
    }

    fn finish(mut self) -> SuiteReport {
        self.violations.sort();
        self.vacuous = self.checks == 0;
        self
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Adds another report's counts into this one.
    pub fn absorb(&mut self, other: SuiteReport) {
        self.instances += other.instances;
        self.checks += other.checks;
        self.violations.extend(other.violations);
        self.violations.sort();
        self.refusals += other.refusals;
        self.notes.extend(other.notes);
        self.vacuous = self.checks == 0;
    }
}

/// Per-mask maximum induced degree for a graph on at most 16 vertices.
fn mask_max_degrees(rows: &[u64]) -> Vec<u8> {
    let n = rows.len();
    assert!(n <= 16, "mask scan is limited to 16 vertices");
    (0u64..1 << n)
        .map(|mask| {
            let mut best = 0;
            let mut rest = mask;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                best = best.max((rows[v] & mask).count_ones());
            }
            best as u8
        })
        .collect()
}

/// `table[k]` is the least `Δ(G[S])` over `|S| = k`, so the degree
/// hypothesis for `(k, Δ)` holds exactly when `table[k] ≥ Δ`.
pub fn hypothesis_table(g: &Graph) -> Vec<usize> {
    let rows = g.small_rows().expect("hypothesis table needs n <= 64");
    hypothesis_from_degrees(&mask_max_degrees(&rows), g.n())
}

fn hypothesis_from_degrees(degrees: &[u8], n: usize) -> Vec<usize> {
    let mut table = vec![usize::MAX; n + 1];
    for (mask, &deg) in degrees.iter().enumerate() {
        let k = (mask as u64).count_ones() as usize;
        table[k] = table[k].min(deg as usize);
    }
    table
}

/// One container-step run: a sparse `U`, the bound `D`, and the strongest
/// `(k, Δ)` pair the graph supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRun {
    pub u: VertexSet,
    pub bound: usize,
    pub delta: usize,
    pub k: usize,
}

/// All runs on `g`: every `U` with `Δ(G[U]) < D` for `D ∈ bounds`, every
/// `Δ` for which some `k` satisfies the degree hypothesis and `|U| ≥ ℓ`,
/// paired with the least such `k`.
pub fn step_runs(g: &Graph, bounds: &[usize]) -> Vec<StepRun> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    let rows = g.small_rows().expect("step runs need n <= 16");
    let degrees = mask_max_degrees(&rows);
    let table = hypothesis_from_degrees(&degrees, n);
    let k_min = |delta: usize| (1..=n).find(|&k| table[k] >= delta);
    let mut runs = Vec::new();
    for &bound in bounds {
        for (mask, &deg) in degrees.iter().enumerate() {
            let size = (mask as u64).count_ones() as usize;
            if mask == 0 || deg as usize >= bound {
                continue;
            }
            let lo = ceil_div(2 * (n * bound) as u128, size as u128) as usize;
            for delta in lo.max(1)..=table[n] {
                if let Some(k) = k_min(delta) {
                    runs.push(StepRun {
                        u: VertexSet::from_mask(n, mask as u64),
                        bound,
                        delta,
                        k,
                    });
                }
            }
        }
    }
    runs
}

fn check_step(g: &Graph, run: &StepRun) -> std::result::Result<(), String> {
    let all = g.vertices();
    let r = container_step_within(g, &all, &run.u, run.bound, run.delta, Some(run.k))
        .map_err(|e| format!("unexpected error: {e}"))?;
    let f = VertexSet::from_ids(g.n(), r.fingerprint.iter().copied()).expect("ids in range");
    let mut problems = Vec::new();
    if r.container.len() >= run.k {
        problems.push(format!("|C| = {} >= k", r.container.len()));
    }
    if !run.u.is_subset(&r.container.union(&f)) {
        problems.push("U not inside C ∪ F".to_string());
    }
    // R only grows with F, so the final F decides every round
    if run.u.iter().any(|x| g.degree_in(x, &f) >= run.bound) {
        problems.push("U meets R".to_string());
    }
    let last = *r.fingerprint.last().expect("ℓ >= 1");
    let last_degree = g.degree_in(last, &r.z);
    if last_degree >= run.delta {
        problems.push(format!("deg(v_ℓ, Z) = {last_degree} >= Δ"));
    }
    if !r.report.all_hold() {
        problems.push(format!("self-report disagrees: {:?}", r.report));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(format!(
            "U = {:?}, D = {}, Δ = {}, k = {}: {}",
            run.u.to_vec(),
            run.bound,
            run.delta,
            run.k,
            problems.join("; ")
        ))
    }
}

const STEP_BOUNDS: [usize; 3] = [1, 2, 3];

/// Container-step soundness on every supported `(U, D, Δ, k)` of each instance.
pub fn container_step_suite(instances: &[Instance]) -> SuiteReport {
    let mut report = SuiteReport::new("container-step", instances.len());
    for inst in instances {
        if inst.graph.n() > 16 {
            report.refusals += 1;
            continue;
        }
        for run in step_runs(&inst.graph, &STEP_BOUNDS) {
            report.checks += 1;
            if let Err(detail) = check_step(&inst.graph, &run) {
                report.violation(&inst.label, detail);
            }
        }
    }
    report.finish()
}

/// [`container_step_suite`] over every graph on `n` vertices up to
/// isomorphism, for `n = 1..=max_n`.
pub fn container_step_exhaustive(max_n: usize) -> SuiteReport {
    let mut report = SuiteReport::new("container-step", 0);
    for n in 1..=max_n {
        let instances: Vec<Instance> = nonisomorphic_graphs(n)
            .into_iter()
            .enumerate()
            .map(|(i, graph)| Instance {
                label: format!("class:{n}:{i}"),
                graph,
            })
            .collect();
        report.absorb(container_step_suite(&instances));
    }
    report.notes.push(format!("all graphs up to isomorphism, n = 1..={max_n}"));
    report
}

/// Rebuilds `count` container-step runs, spread evenly over all runs of the
/// instances, from `U' = F` and from `extra` random `F ⊆ U' ⊆ U`.
pub fn determinism_suite(instances: &[Instance], count: usize, extra: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("determinism", instances.len());
    let mut pool: Vec<(usize, StepRun)> = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        if inst.graph.n() > 16 {
            report.refusals += 1;
            continue;
        }
        pool.extend(step_runs(&inst.graph, &STEP_BOUNDS).into_iter().map(|r| (i, r)));
    }
    let picked: Vec<&(usize, StepRun)> = if pool.len() <= count {
        pool.iter().collect()
    } else {
        (0..count).map(|j| &pool[j * pool.len() / count]).collect()
    };
    report.notes.push(format!("{} runs available, {} rebuilt", pool.len(), picked.len()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (i, run) in picked {
        let inst = &instances[*i];
        let g = &inst.graph;
        let all = g.vertices();
        let original = match container_step_within(g, &all, &run.u, run.bound, run.delta, None) {
            Ok(r) => r,
            Err(e) => {
                report.violation(&inst.label, format!("original run failed: {e}"));
                continue;
            }
        };
        let f = VertexSet::from_ids(g.n(), original.fingerprint.iter().copied()).expect("ids in range");
        let rest: Vec<usize> = run.u.difference(&f).to_vec();
        let mut variants = vec![f.clone()];
        for _ in 0..extra {
            let mut shuffled = rest.clone();
            shuffled.shuffle(&mut rng);
            let take = rng.gen_range(0..=rest.len());
            let mut u2 = f.clone();
            for &x in &shuffled[..take] {
                u2.insert(x);
            }
            variants.push(u2);
        }
        for u2 in variants {
            report.checks += 1;
            match container_step_within(g, &all, &u2, run.bound, run.delta, None) {
                Ok(r) if r.fingerprint == original.fingerprint && r.container == original.container => {}
                Ok(r) => report.violation(
                    &inst.label,
                    format!(
                        "U = {:?}, U' = {:?}, D = {}, Δ = {}: F {:?} vs {:?}",
                        run.u.to_vec(),
                        u2.to_vec(),
                        run.bound,
                        run.delta,
                        original.fingerprint,
                        r.fingerprint
                    ),
                ),
                Err(e) => report.violation(
                    &inst.label,
                    format!("U' = {:?}: rebuild failed: {e}", u2.to_vec()),
                ),
            }
        }
    }
    report.finish()
}

pub const ZETA_GRID: [&str; 2] = ["1/2", "1/4"];
pub const D_GRID: [&str; 5] = ["1/2", "2/5", "3/10", "1/5", "1/10"];

/// The maximal grid point the graph passes: largest `d` first, then
/// largest `ζ`.
pub fn strongest_grid_point(g: &Graph, limits: &ScaleLimits) -> Result<Option<DensityParams>> {
    for d in D_GRID {
        for z in ZETA_GRID {
            let p = DensityParams::parse(z, d)?;
            if is_locally_dense_exact(g, &p, limits)?.holds {
                return Ok(Some(p));
            }
        }
    }
    Ok(None)
}

/// Count-bound certificates at each instance's strongest grid point, for
/// `D ∈ {1, 2}` and `s` from `f` to `min(n, f + 3)`.
pub fn count_bound_suite(instances: &[Instance], limits: &ScaleLimits) -> SuiteReport {
    let mut report = SuiteReport::new("count-bound", instances.len());
    let mut no_grid_point = 0;
    let mut empty_ranges = 0;
    let mut nonzero = 0;
    for inst in instances {
        let g = &inst.graph;
        let p = match strongest_grid_point(g, limits) {
            Ok(Some(p)) => p,
            Ok(None) => {
                no_grid_point += 1;
                continue;
            }
            Err(_) => {
                report.refusals += 1;
                continue;
            }
        };
        for bound in [1, 2] {
            let f = p.f_target(bound);
            if f > g.n() {
                empty_ranges += 1;
                continue;
            }
            for s in f..=g.n().min(f + 3) {
                report.checks += 1;
                match verify_count_bound(g, &p, bound, s, limits) {
                    Ok(cert) => {
                        if !cert.brute_count.is_zero() {
                            nonzero += 1;
                        }
                        let ordered = cert.brute_count <= cert.realized_bound
                            && cert.realized_bound <= cert.container_bound;
                        if !(cert.holds && cert.coverage_ok && ordered) {
                            report.violation(
                                &inst.label,
                                format!(
                                    "{p:?}, D = {bound}, s = {s}: brute {} realized {} bound {} coverage {}",
                                    cert.brute_count, cert.realized_bound, cert.container_bound, cert.coverage_ok
                                ),
                            );
                        }
                    }
                    Err(e) if e.is_refusal() => report.refusals += 1,
                    Err(e) => report.violation(&inst.label, format!("{p:?}, D = {bound}, s = {s}: {e}")),
                }
            }
        }
    }
    report.notes.push(format!("{no_grid_point} instances pass no grid point"));
    report.notes.push(format!("{empty_ranges} (instance, D) pairs have f > n"));
    report.notes.push(format!("{nonzero} certificates with a nonzero count"));
    report.finish()
}

/// Independent-set counts by plain subset scan, indexed by size.
pub fn naive_independent_counts(g: &Graph) -> Vec<u64> {
    let n = g.n();
    assert!(n <= 24, "naive counter is limited to 24 vertices");
    let rows = g.small_rows().expect("n <= 24");
    let mut counts = vec![0u64; n + 1];
    for mask in 0u64..1 << n {
        if (0..n).all(|v| mask >> v & 1 == 0 || rows[v] & mask == 0) {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    counts
}

/// `D = 1` counts against [`naive_independent_counts`] for every `s ≥ 1`.
pub fn independent_sets_suite(instances: &[Instance], limits: &ScaleLimits) -> SuiteReport {
    let mut report = SuiteReport::new("independent-sets", instances.len());
    for inst in instances {
        let g = &inst.graph;
        if g.n() > 24 {
            report.refusals += 1;
            continue;
        }
        let naive = naive_independent_counts(g);
        for (s, &expected) in naive.iter().enumerate().skip(1) {
            report.checks += 1;
            let q = SparsityQuery::new(s, 1).expect("valid query");
            match count_sparse_sets(g, &q, limits) {
                Ok(c) if c == BigUint::from(expected) => {}
                Ok(c) => report.violation(&inst.label, format!("s = {s}: {c} vs naive {expected}")),
                Err(e) if e.is_refusal() => report.refusals += 1,
                Err(e) => report.violation(&inst.label, format!("s = {s}: {e}")),
            }
        }
    }
    report.finish()
}

pub const SPARSIFIER_TRIAL_PARAMS: [(usize, usize); 5] = [(3, 1), (4, 1), (5, 1), (5, 2), (6, 2)];

/// Tiny sparsifier checks: a bad-set pass must imply an exact pass, and an
/// independent `s`-set planted in `V'` must be caught by bad-set mode.
///
/// Trial `i` draws `V'` with keep probability 0.8 under `seed + i` and
/// takes `(s, D)` from [`SPARSIFIER_TRIAL_PARAMS`] cyclically.
pub fn sparsifier_suite(instances: &[Instance], seed: u64, limits: &ScaleLimits) -> SuiteReport {
    let mut report = SuiteReport::new("sparsifier", instances.len());
    let mut bad_passes = 0;
    for (i, inst) in instances.iter().enumerate() {
        let g = &inst.graph;
        let v_prime = draw(g.n(), 0.8, seed.wrapping_add(i as u64), 0);
        if v_prime.len() > 14 {
            report.refusals += 1;
            continue;
        }
        let (s, bound) = SPARSIFIER_TRIAL_PARAMS[i % SPARSIFIER_TRIAL_PARAMS.len()];
        let tag = format!("|V'| = {}, s = {s}, D = {bound}", v_prime.len());
        let bad = verify_sparsifier(g, &v_prime, s, bound, VerifyMode::BadSet, limits);
        let exact = verify_sparsifier(g, &v_prime, s, bound, VerifyMode::Exact, limits);
        match (bad, exact) {
            (Ok(b), Ok(e)) => {
                report.checks += 1;
                if b.passed {
                    bad_passes += 1;
                    if !e.passed {
                        report.violation(
                            &inst.label,
                            format!("{tag}: bad-set passed but exact found {:?}", e.witness.map(|w| w.to_vec())),
                        );
                    }
                }
            }
            (Err(x), _) | (_, Err(x)) => {
                if x.is_refusal() {
                    report.refusals += 1;
                } else {
                    report.violation(&inst.label, format!("{tag}: {x}"));
                }
            }
        }

        if v_prime.len() < s {
            continue;
        }
        let planted: Vec<usize> = v_prime.iter().take(s).collect();
        let edges: Vec<(usize, usize)> = g
            .edges()
            .filter(|&(a, b)| !(planted.contains(&a) && planted.contains(&b)))
            .collect();
        let h = Graph::from_edge_list(g.n(), &edges).expect("subgraph of a valid graph");
        report.checks += 1;
        match verify_sparsifier(&h, &v_prime, s, bound, VerifyMode::BadSet, limits) {
            Ok(v) if !v.passed => {
                let w = v.witness.expect("failing verdict has a witness");
                if h.max_degree_in(&w) >= 2 * bound || w.len() != s || !w.is_subset(&v_prime) {
                    report.violation(&inst.label, format!("{tag}: bogus witness {:?}", w.to_vec()));
                }
            }
            Ok(_) => report.violation(&inst.label, format!("{tag}: planted set {planted:?} missed")),
            Err(e) => report.violation(&inst.label, format!("{tag}: {e}")),
        }
    }
    report.notes.push(format!("{bad_passes} bad-set passes cross-checked by exact mode"));
    report.bad_set_passes = Some(bad_passes);
    report.finish()
}

/// Runs a suite by name.
pub fn run_suite(name: &str, instances: &[Instance], seed: u64, limits: &ScaleLimits) -> Result<SuiteReport> {
    Ok(match name {
        "container-step" => container_step_suite(instances),
        "determinism" => determinism_suite(instances, 200, 10, seed),
        "count-bound" => count_bound_suite(instances, limits),
        "independent-sets" => independent_sets_suite(instances, limits),
        "sparsifier" => sparsifier_suite(instances, seed, limits),
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITE_NAMES.join(", ")
            )))
        }
    })
}

/// `n=8..12,p=0.5:0.7,seeds=0..49`: ranges are inclusive, `:` separates
/// alternatives. All three keys are required.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub ns: Vec<usize>,
    pub ps: Vec<f64>,
    pub seeds: Vec<u64>,
}

fn parse_range<T: std::str::FromStr + Copy + Into<u64> + TryFrom<u64>>(text: &str) -> Option<Vec<T>> {
    let mut out = Vec::new();
    for part in text.split(':').filter(|s| !s.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: T = a.trim().parse().ok()?;
            let b: T = b.trim().parse().ok()?;
            for x in a.into()..=b.into() {
                out.push(T::try_from(x).ok()?);
            }
        } else {
            out.push(part.trim().parse().ok()?);
        }
    }
    Some(out)
}

impl std::str::FromStr for Sweep {
    type Err = Error;

    fn from_str(text: &str) -> Result<Sweep> {
        let bad = |why: &str| Error::Malformed(format!("sweep {text:?}: {why}"));
        let (mut ns, mut ps, mut seeds) = (None, None, None);
        for field in text.split(',').filter(|s| !s.trim().is_empty()) {
            let (key, value) = field.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match key.trim() {
                "n" => {
                    let v: Vec<u64> = parse_range(value).ok_or_else(|| bad("bad n range"))?;
                    ns = Some(v.into_iter().map(|x| x as usize).collect::<Vec<_>>());
                }
                "p" => {
                    let v = value
                        .split(':')
                        .filter(|s| !s.is_empty())
                        .map(|s| s.trim().parse::<f64>().ok().filter(|p| (0.0..=1.0).contains(p)))
                        .collect::<Option<Vec<f64>>>()
                        .ok_or_else(|| bad("bad p list"))?;
                    ps = Some(v);
                }
                "seeds" => seeds = Some(parse_range::<u64>(value).ok_or_else(|| bad("bad seed range"))?),
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        Ok(Sweep {
            ns: ns.ok_or_else(|| bad("missing n"))?,
            ps: ps.ok_or_else(|| bad("missing p"))?,
            seeds: seeds.ok_or_else(|| bad("missing seeds"))?,
        })
    }
}

impl Sweep {
    /// `G(n, p)` for every combination, in `n`, `p`, seed order.
    pub fn instances(&self) -> Result<Vec<Instance>> {
        let mut out = Vec::new();
        for &n in &self.ns {
            for &p in &self.ps {
                for &seed in &self.seeds {
                    out.push(Instance {
                        label: GeneratorSpec::Gnp { n, prob: p, seed }.to_string(),
                        graph: gnp(n, p, seed)?,
                    });
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::min_degree_threshold_check;

    #[test]
    fn hypothesis_table_matches_threshold_check() {
        let limits = ScaleLimits::default();
        for seed in 0..20 {
            let g = gnp(9, 0.5, seed).unwrap();
            let table = hypothesis_table(&g);
            for (k, &least) in table.iter().enumerate().skip(1) {
                for delta in 1..=9 {
                    let holds = min_degree_threshold_check(&g, k, delta, &limits).unwrap().holds;
                    assert_eq!(holds, least >= delta, "seed {seed} k {k} delta {delta}");
                }
            }
        }
    }

    #[test]
    fn step_runs_respect_length() {
        let g = gnp(10, 0.7, 4).unwrap();
        let runs = step_runs(&g, &STEP_BOUNDS);
        assert!(!runs.is_empty());
        for r in runs {
            assert!(g.max_degree_in(&r.u) < r.bound);
            assert!(ceil_div(2 * (10 * r.bound) as u128, r.delta as u128) as usize <= r.u.len());
        }
    }

    #[test]
    fn sweep_parsing() {
        let s: Sweep = "n=8..10,p=0.5:0.7,seeds=0..2".parse().unwrap();
        assert_eq!(s.ns, vec![8, 9, 10]);
        assert_eq!(s.ps, vec![0.5, 0.7]);
        assert_eq!(s.seeds, vec![0, 1, 2]);
        assert_eq!(s.instances().unwrap().len(), 18);
        let empty: Sweep = "n=9..8,p=0.5,seeds=0..3".parse().unwrap();
        assert!(empty.instances().unwrap().is_empty());
        assert!("n=8".parse::<Sweep>().is_err());
        assert!("n=8,p=2,seeds=0".parse::<Sweep>().is_err());
        assert!("n=8,p=0.5,seeds=0,q=1".parse::<Sweep>().is_err());
    }

    #[test]
    fn empty_suite_is_vacuous() {
        let r = container_step_suite(&[]);
        assert!(r.passed() && r.vacuous);
        assert!(run_suite("nope", &[], 0, &ScaleLimits::default()).is_err());
    }

    #[test]
    fn naive_counts_on_cycle() {
        // independent sets of C5 by size: 1, 5, 5
        assert_eq!(naive_independent_counts(&Graph::cycle(5)), vec![1, 5, 5, 0, 0, 0]);
    }
}
