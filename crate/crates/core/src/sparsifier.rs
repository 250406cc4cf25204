//! Random vertex subsets in which every large set is edge-dense.
//!
//! A vertex subset `V'` is drawn by keeping each vertex independently with
//! probability `p`. It is accepted once it is large enough and the chosen
//! verification mode passes; otherwise another independent draw is made.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::counting::{binomial, SparseSets};
use crate::density::{first_light_set, DensityParams};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::limits::{ScaleLimits, WORD_LIMIT};
use crate::ratio::{big_int, exact_string, to_big};

fn big_string<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn rational_string<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&exact_string(x))
}

/// The sampling parameters in exact arithmetic, for any host size.
///
/// * `f = ceil(8D/d)·ceil(log2(1/ζ))`
/// * `s = 2·f·ceil(log2 n)`
/// * `p = f·log2(n) / (2e·ζ·n)`
/// * `target = ceil(s / (4e·ζ))`
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparsifierChain {
    #[serde(serialize_with = "big_string")]
    pub n: BigUint,
    #[serde(serialize_with = "rational_string")]
    pub zeta: BigRational,
    #[serde(serialize_with = "rational_string")]
    pub d: BigRational,
    #[serde(serialize_with = "big_string")]
    pub bound: BigUint,
    /// `ceil(8D/d)`.
    #[serde(serialize_with = "big_string")]
    pub step_budget: BigUint,
    /// `ceil(log2(1/ζ))`.
    pub round_budget: u64,
    /// `ceil(log2 n)`.
    pub ceil_log2_n: u64,
    #[serde(serialize_with = "big_string")]
    pub f: BigUint,
    #[serde(serialize_with = "big_string")]
    pub s: BigUint,
    pub p: f64,
    #[serde(serialize_with = "big_string")]
    pub target_size: BigUint,
}

/// `ceil(log2(1/ζ))` for `0 < ζ ≤ 1`.
pub fn ceil_log2_inverse(zeta: &BigRational) -> u64 {
    let (num, den) = (zeta.numer(), zeta.denom());
    let mut j = 0u64;
    while (num << j) < *den {
        j += 1;
    }
    j
}

/// `ceil(log2 n)` for `n ≥ 1`.
pub fn ceil_log2(n: &BigUint) -> u64 {
    if n.is_zero() {
        return 0;
    }
    (n - 1u32).bits()
}

fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    (n >> shift).to_f64().unwrap().log2() + shift as f64
}

fn log2_rational(r: &BigRational) -> f64 {
    let num = r.numer().to_biguint().unwrap_or_default();
    let den = r.denom().to_biguint().unwrap_or_default();
    log2_big(&num) - log2_big(&den)
}

/// `e` bracketed by partial sums of `1/k!` with `terms` terms.
fn e_bounds(terms: u32) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let mut fact = BigInt::one();
    for k in 0..terms {
        if k > 0 {
            fact *= k;
        }
        sum += BigRational::new(BigInt::one(), fact.clone());
    }
    // remainder after `terms` terms is below 2/terms!
    fact *= terms;
    let upper = &sum + BigRational::new(BigInt::from(2), fact);
    (sum, upper)
}

fn ceil_rational(r: &BigRational) -> BigInt {
    let (q, rem) = r.numer().div_rem(r.denom());
    if rem > BigInt::zero() {
        q + 1
    } else {
        q
    }
}

/// Exact `ceil(x / e)` for `x ≥ 0`. `x/e` is irrational for `x > 0`, so
/// narrowing the bracket on `e` always settles the ceiling.
pub fn ceil_div_e(x: &BigRational) -> BigUint {
    if x.is_zero() {
        return BigUint::zero();
    }
    let mut terms = 32;
    loop {
        let (lo, hi) = e_bounds(terms);
        let a = ceil_rational(&(x / &hi));
        let b = ceil_rational(&(x / &lo));
        if a == b {
            return a.to_biguint().expect("non-negative");
        }
        terms *= 2;
    }
}

/// Evaluates the sampling parameters for a host graph with `n` vertices.
pub fn sparsifier_chain(
    n: &BigUint,
    zeta: &BigRational,
    d: &BigRational,
    bound: &BigUint,
) -> Result<SparsifierChain> {
    if *n < BigUint::from(2u32) {
        return Err(Error::InvalidParameter("host graph needs at least 2 vertices".into()));
    }
    if bound.is_zero() {
        return Err(Error::InvalidParameter("degree bound D must be at least 1".into()));
    }
    let zero = BigRational::zero();
    let one = BigRational::one();
    if !(*zeta > zero && *zeta <= one) || !(*d > zero && *d < one) {
        return Err(Error::Infeasible {
            constraint: format!(
                "0 < zeta <= 1 and 0 < d < 1 (zeta = {}, d = {})",
                exact_string(zeta),
                exact_string(d)
            ),
        });
    }
    let step_budget = ceil_rational(&(big_int(&(bound * 8u32)) / d))
        .to_biguint()
        .expect("positive");
    let round_budget = ceil_log2_inverse(zeta);
    let f = &step_budget * round_budget;
    if f.is_zero() {
        return Err(Error::Infeasible {
            constraint: "f > 0: log2(1/zeta) = 0 at zeta = 1 leaves s = 0".into(),
        });
    }
    let ceil_log2_n = ceil_log2(n);
    let s = &f * 2u32 * ceil_log2_n;

    // p = f·log2(n) / (2e·ζ·n), evaluated in logs so huge hosts stay finite
    let log2_p = log2_big(&f) + log2_big(n).log2() - 1.0 - std::f64::consts::E.log2()
        - log2_rational(zeta)
        - log2_big(n);
    let p = log2_p.exp2();
    if p > 1.0 {
        return Err(Error::Infeasible {
            constraint: format!("p <= 1: f*log2(n)/(2e*zeta*n) = {p:.6}"),
        });
    }
    let target_size = ceil_div_e(&(big_int(&s) / (zeta * BigRational::from_integer(4.into()))));
    Ok(SparsifierChain {
        n: n.clone(),
        zeta: zeta.clone(),
        d: d.clone(),
        bound: bound.clone(),
        step_budget,
        round_budget,
        ceil_log2_n,
        f,
        s,
        p,
        target_size,
    })
}

/// Machine-sized sampling parameters for a concrete graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparsifierParams {
    pub n: usize,
    pub density: DensityParams,
    pub bound: usize,
    pub f: usize,
    pub s: usize,
    pub p: f64,
    pub target_size: usize,
}

pub fn sparsifier_params(n: usize, density: &DensityParams, bound: usize) -> Result<SparsifierParams> {
    let chain = sparsifier_chain(
        &BigUint::from(n),
        &to_big(density.zeta()),
        &to_big(density.d()),
        &BigUint::from(bound),
    )?;
    let small = |x: &BigUint| x.to_usize().ok_or_else(|| Error::Infeasible {
        constraint: format!("{x} does not fit a machine word"),
    });
    Ok(SparsifierParams {
        n,
        density: *density,
        bound,
        f: small(&chain.f)?,
        s: small(&chain.s)?,
        p: chain.p,
        target_size: small(&chain.target_size)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every `S ⊆ V'` with `|S| ≥ 2s` spans at least `D·|S|` edges.
    Exact,
    /// No `U ⊆ V'` with `|U| = s` has `Δ(G[U]) < 2D`. Implies exact.
    BadSet,
    /// Random sets only; a pass is evidence, not proof.
    SpotCheck { trials: usize, seed: u64 },
}

impl VerifyMode {
    pub fn name(&self) -> &'static str {
        match self {
            VerifyMode::Exact => "exact",
            VerifyMode::BadSet => "bad-set",
            VerifyMode::SpotCheck { .. } => "spot-check",
        }
    }

    /// Exact for small `V'`, bad-set while `C(|V'|, s)` is walkable,
    /// spot checks otherwise.
    pub fn auto(size: usize, s: usize, seed: u64, limits: &ScaleLimits) -> VerifyMode {
        if size <= limits.auto_exact_max {
            VerifyMode::Exact
        } else if binomial(size as u64, s as u64) <= BigUint::from(limits.bad_set_max_subsets) {
            VerifyMode::BadSet
        } else {
            VerifyMode::SpotCheck {
                trials: limits.auto_spot_trials,
                seed,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparsifierVerdict {
    pub mode: &'static str,
    pub passed: bool,
    pub witness: Option<VertexSet>,
    /// Sets actually examined (spot-check mode) or 0 for the exhaustive modes.
    pub checks: u64,
    /// A pass with no set examined.
    pub no_evidence: bool,
}

impl SparsifierVerdict {
    fn exhaustive(mode: VerifyMode, witness: Option<VertexSet>) -> Self {
        SparsifierVerdict {
            mode: mode.name(),
            passed: witness.is_none(),
            witness,
            checks: 0,
            no_evidence: false,
        }
    }
}

pub fn verify_sparsifier(
    g: &Graph,
    v_prime: &VertexSet,
    s: usize,
    bound: usize,
    mode: VerifyMode,
    limits: &ScaleLimits,
) -> Result<SparsifierVerdict> {
    if s == 0 || bound == 0 {
        return Err(Error::InvalidParameter("s and D must be at least 1".into()));
    }
    let size = v_prime.len();
    match mode {
        VerifyMode::Exact => {
            let limit = limits.exhaustive_max_n.min(WORD_LIMIT);
            if size > limit {
                return Err(Error::ScaleLimit {
                    what: "exact sparsifier verification",
                    requested: format!("|V'| = {size}"),
                    limit: format!("|V'| <= {limit}"),
                });
            }
            let (local, map) = g.induce(v_prime);
            let rows = local.small_rows().expect("bounded by the word limit");
            let hit = first_light_set(&rows, 2 * s, &|e, m| e < bound * m);
            let witness = hit.map(|mask| {
                VertexSet::from_ids(g.n(), (0..size).filter(|i| mask >> i & 1 == 1).map(|i| map[i]))
                    .expect("mapped ids are in range")
            });
            Ok(SparsifierVerdict::exhaustive(mode, witness))
        }
        VerifyMode::BadSet => {
            let total = binomial(size as u64, s as u64);
            if total > BigUint::from(limits.bad_set_max_subsets) {
                return Err(Error::ScaleLimit {
                    what: "bad-set sparsifier verification",
                    requested: format!("C({size}, {s}) = {total}"),
                    limit: format!("C(|V'|, s) <= {}", limits.bad_set_max_subsets),
                });
            }
            let witness = SparseSets::new(g, Some(v_prime), s, 2 * bound).next();
            Ok(SparsifierVerdict::exhaustive(mode, witness))
        }
        VerifyMode::SpotCheck { trials, seed } => {
            let members = v_prime.to_vec();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut checks = 0u64;
            let pick = |rng: &mut ChaCha8Rng, k: usize| {
                let idx = sample(rng, size, k);
                VertexSet::from_ids(g.n(), idx.iter().map(|i| members[i])).expect("members are in range")
            };
            for _ in 0..trials {
                if 2 * s <= size {
                    let k = rng.gen_range(2 * s..=size);
                    let set = pick(&mut rng, k);
                    checks += 1;
                    if g.edge_count_in(&set) < bound * k {
                        return Ok(spot_fail(set, checks));
                    }
                }
                if s <= size {
                    let set = pick(&mut rng, s);
                    checks += 1;
                    if g.max_degree_in(&set) < 2 * bound {
                        return Ok(spot_fail(set, checks));
                    }
                }
            }
            Ok(SparsifierVerdict {
                mode: mode.name(),
                passed: true,
                witness: None,
                checks,
                no_evidence: checks == 0,
            })
        }
    }
}

fn spot_fail(witness: VertexSet, checks: u64) -> SparsifierVerdict {
    SparsifierVerdict {
        mode: "spot-check",
        passed: false,
        witness: Some(witness),
        checks,
        no_evidence: false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttemptRecord {
    pub attempt: usize,
    pub size: usize,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparsifierResult {
    pub accepted: bool,
    pub v_prime: Option<VertexSet>,
    pub params: SparsifierParams,
    pub seed: u64,
    pub attempts: usize,
    pub verdict: Option<SparsifierVerdict>,
    pub log: Vec<AttemptRecord>,
}

/// Draw `i` (0-based) uses ChaCha8 stream `i` under `seed`, so every draw
/// is reproducible on its own.
pub fn draw(n: usize, p: f64, seed: u64, attempt: usize) -> VertexSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    let mut out = VertexSet::empty(n);
    for v in 0..n {
        if rng.gen_bool(p) {
            out.insert(v);
        }
    }
    out
}

/// Draws until a sample of at least the target size passes verification.
/// `mode = None` picks [`VerifyMode::auto`] per draw.
pub fn sample_sparsifier(
    g: &Graph,
    density: &DensityParams,
    bound: usize,
    seed: u64,
    max_attempts: usize,
    mode: Option<VerifyMode>,
    limits: &ScaleLimits,
) -> Result<SparsifierResult> {
    let params = sparsifier_params(g.n(), density, bound)?;
    let mut log = Vec::new();
    for attempt in 0..max_attempts {
        let v_prime = draw(g.n(), params.p, seed, attempt);
        let size = v_prime.len();
        if size < params.target_size {
            log.push(AttemptRecord {
                attempt,
                size,
                outcome: format!("too small: {size} < target {}", params.target_size),
            });
            continue;
        }
        let mode = mode.unwrap_or_else(|| {
            VerifyMode::auto(size, params.s, seed.wrapping_add(attempt as u64), limits)
        });
        let verdict = verify_sparsifier(g, &v_prime, params.s, bound, mode, limits)?;
        if verdict.passed {
            log.push(AttemptRecord {
                attempt,
                size,
                outcome: format!("accepted ({})", verdict.mode),
            });
            return Ok(SparsifierResult {
                accepted: true,
                v_prime: Some(v_prime),
                params,
                seed,
                attempts: attempt + 1,
                verdict: Some(verdict),
                log,
            });
        }
        log.push(AttemptRecord {
            attempt,
            size,
            outcome: format!(
                "{} verification failed on {:?}",
                verdict.mode,
                verdict.witness.as_ref().map(VertexSet::to_vec).unwrap_or_default()
            ),
        });
    }
    Ok(SparsifierResult {
        accepted: false,
        v_prime: None,
        params,
        seed,
        attempts: max_attempts,
        verdict: None,
        log,
    })
}
