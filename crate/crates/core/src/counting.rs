//! Exact enumeration of sparse vertex sets and certificates for the
//! fingerprint counting bound.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::container::fingerprint;
use crate::density::{is_locally_dense_exact, DensityParams};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::limits::ScaleLimits;

/// Exact `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

const ROW_LIMIT: usize = 4096;

/// Sets of size `s` with `Δ(G[U]) < bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SparsityQuery {
    pub s: usize,
    pub bound: usize,
}

impl SparsityQuery {
    pub fn new(s: usize, bound: usize) -> Result<Self> {
        if bound == 0 {
            return Err(Error::InvalidParameter("degree bound D must be at least 1".into()));
        }
        Ok(SparsityQuery { s, bound })
    }
}

/// Lexicographic backtracking over `s`-subsets of an ambient vertex set with
/// induced maximum degree below `bound`.
///
/// A partial set is extended by `v` only if `v` has fewer than `bound`
/// neighbours in it and none of those neighbours is already saturated
/// (holding `bound − 1` neighbours). Degrees only grow, so pruned branches
/// hold no solutions.
pub struct SparseSets {
    universe: usize,
    map: Vec<usize>,
    neighbors: Vec<Vec<usize>>,
    rows: Vec<u64>,
    words: usize,
    s: usize,
    bound: usize,
    count: Vec<usize>,
    saturated: Vec<u64>,
    in_set: Vec<bool>,
    chosen: Vec<usize>,
    next: usize,
    done: bool,
}

impl SparseSets {
    /// `ambient = None` means all of `V(G)`. A `bound` of zero yields nothing.
    pub fn new(g: &Graph, ambient: Option<&VertexSet>, s: usize, bound: usize) -> SparseSets {
        let (local, map) = match ambient {
            Some(a) => g.induce(a),
            None => (g.clone(), (0..g.n()).collect()),
        };
        let m = local.n();
        let words = m.div_ceil(64);
        let neighbors: Vec<Vec<usize>> = (0..m).map(|v| local.neighbors(v).to_vec()).collect();
        // Bitset rows only while they stay small; larger ambients scan lists.
        let mut rows = Vec::new();
        if m <= ROW_LIMIT {
            rows = vec![0u64; m * words];
            for (v, list) in neighbors.iter().enumerate() {
                for &w in list {
                    rows[v * words + (w >> 6)] |= 1u64 << (w & 63);
                }
            }
        }
        SparseSets {
            universe: g.n(),
            map,
            neighbors,
            rows,
            words,
            s,
            bound,
            count: vec![0; m],
            saturated: vec![0; words],
            in_set: vec![false; m],
            chosen: Vec::with_capacity(s),
            next: 0,
            done: bound == 0 || s > m,
        }
    }

    #[inline]
    fn allowed(&self, v: usize) -> bool {
        if self.count[v] >= self.bound {
            return false;
        }
        if self.rows.is_empty() {
            return self.neighbors[v]
                .iter()
                .all(|&w| self.saturated[w >> 6] >> (w & 63) & 1 == 0);
        }
        let row = &self.rows[v * self.words..(v + 1) * self.words];
        row.iter().zip(&self.saturated).all(|(a, b)| a & b == 0)
    }

    #[inline]
    fn set_saturated(&mut self, v: usize, on: bool) {
        let bit = 1u64 << (v & 63);
        if on {
            self.saturated[v >> 6] |= bit;
        } else {
            self.saturated[v >> 6] &= !bit;
        }
    }

    fn push(&mut self, v: usize) {
        let cap = self.bound - 1;
        for i in 0..self.neighbors[v].len() {
            let w = self.neighbors[v][i];
            self.count[w] += 1;
            if self.in_set[w] && self.count[w] == cap {
                self.set_saturated(w, true);
            }
        }
        self.in_set[v] = true;
        if self.count[v] == cap {
            self.set_saturated(v, true);
        }
        self.chosen.push(v);
    }

    fn pop(&mut self) -> Option<usize> {
        let v = self.chosen.pop()?;
        let cap = self.bound - 1;
        self.in_set[v] = false;
        self.set_saturated(v, false);
        for i in 0..self.neighbors[v].len() {
            let w = self.neighbors[v][i];
            if self.in_set[w] && self.count[w] == cap {
                self.set_saturated(w, false);
            }
            self.count[w] -= 1;
        }
        Some(v)
    }

    fn current(&self) -> VertexSet {
        let mut out = VertexSet::empty(self.universe);
        for &v in &self.chosen {
            out.insert(self.map[v]);
        }
        out
    }
}

impl Iterator for SparseSets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        let m = self.map.len();
        while !self.done {
            if self.chosen.len() == self.s {
                let out = self.current();
                match self.pop() {
                    Some(v) => self.next = v + 1,
                    None => self.done = true,
                }
                return Some(out);
            }
            let need = self.s - self.chosen.len();
            let mut found = None;
            while self.next + need <= m {
                if self.allowed(self.next) {
                    found = Some(self.next);
                    break;
                }
                self.next += 1;
            }
            match found {
                Some(v) => {
                    self.push(v);
                    self.next = v + 1;
                }
                None => match self.pop() {
                    Some(v) => self.next = v + 1,
                    None => self.done = true,
                },
            }
        }
        None
    }
}

fn check_count_scale(m: usize, s: usize, limit: u128) -> Result<()> {
    let total = binomial(m as u64, s as u64);
    if total > BigUint::from(limit) {
        return Err(Error::ScaleLimit {
            what: "sparse-set enumeration",
            requested: format!("C({m}, {s}) = {total}"),
            limit: format!("C(n, s) <= {limit}"),
        });
    }
    Ok(())
}

/// Lazily yields every qualifying `U` exactly once, in lexicographic order.
pub fn enumerate_sparse_sets(
    g: &Graph,
    q: &SparsityQuery,
    limits: &ScaleLimits,
) -> Result<SparseSets> {
    check_count_scale(g.n(), q.s, limits.count_max_subsets)?;
    Ok(SparseSets::new(g, None, q.s, q.bound))
}

pub fn count_sparse_sets(g: &Graph, q: &SparsityQuery, limits: &ScaleLimits) -> Result<BigUint> {
    let count = enumerate_sparse_sets(g, q, limits)?.count();
    Ok(BigUint::from(count))
}

fn big_string<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// A checked record tying an exact count of sparse `s`-sets to the
/// fingerprint-container bound on one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountCertificate {
    pub n: usize,
    pub params: DensityParams,
    pub bound: usize,
    pub s: usize,
    pub f_target: usize,
    pub f_real: f64,
    /// `ceil(ζn)`.
    pub size_threshold: usize,
    #[serde(serialize_with = "big_string")]
    pub brute_count: BigUint,
    /// `C(n, f)·C(ceil(ζn) − 1, s − f)`.
    #[serde(serialize_with = "big_string")]
    pub container_bound: BigUint,
    /// `C(n, f)·C(floor(ζn), s − f)`, reported for comparison.
    #[serde(serialize_with = "big_string")]
    pub literal_bound: BigUint,
    /// Sum of `C(|C(F)|, s − f)` over the distinct fingerprints realized.
    #[serde(serialize_with = "big_string")]
    pub realized_bound: BigUint,
    pub distinct_fingerprints: usize,
    /// Every enumerated `U` satisfied `F ⊆ U ⊆ F ∪ C(F)`, and equal
    /// fingerprints always produced equal containers.
    pub coverage_ok: bool,
    /// `brute_count ≤ realized_bound ≤ container_bound` together with coverage.
    pub chain_ok: bool,
    pub holds: bool,
}

/// Counts sparse `s`-sets by brute force and checks them against the
/// container bound, rebuilding a fingerprint for every set found.
pub fn verify_count_bound(
    g: &Graph,
    p: &DensityParams,
    bound: usize,
    s: usize,
    limits: &ScaleLimits,
) -> Result<CountCertificate> {
    let q = SparsityQuery::new(s, bound)?;
    let n = g.n();
    let density = is_locally_dense_exact(g, p, limits)?;
    if let Some(w) = density.witness {
        return Err(Error::Precondition(format!(
            "graph is not {p:?}-dense: S = {:?} has {} edges",
            w.to_vec(),
            g.edge_count_in(&w)
        )));
    }
    let f = p.f_target(bound);
    if s < f {
        return Err(Error::Precondition(format!(
            "s >= f is required, got s = {s} < f = {f}"
        )));
    }

    let mut brute = 0u64;
    let mut coverage_ok = true;
    let mut containers: BTreeMap<Vec<usize>, VertexSet> = BTreeMap::new();
    for u in enumerate_sparse_sets(g, &q, limits)? {
        brute += 1;
        let fp = fingerprint(g, &u, p, bound)?;
        let f_set = VertexSet::from_ids(n, fp.fingerprint.iter().copied())?;
        if !f_set.is_subset(&u) || !u.difference(&f_set).is_subset(&fp.container) {
            coverage_ok = false;
        }
        match containers.get(&fp.fingerprint) {
            Some(c) if *c != fp.container => coverage_ok = false,
            Some(_) => {}
            None => {
                containers.insert(fp.fingerprint, fp.container);
            }
        }
    }

    let rest = (s - f) as u64;
    let size_threshold = p.size_threshold(n);
    let choose_f = binomial(n as u64, f as u64);
    let container_bound = &choose_f * binomial(size_threshold as u64 - 1, rest);
    let literal_bound = &choose_f * binomial(p.literal_size(n) as u64, rest);
    let realized_bound: BigUint = containers
        .values()
        .map(|c| binomial(c.len() as u64, rest))
        .sum();
    let brute_count = BigUint::from(brute);
    let holds = brute_count <= container_bound;
    let chain_ok = coverage_ok && brute_count <= realized_bound && realized_bound <= container_bound;
    Ok(CountCertificate {
        n,
        params: *p,
        bound,
        s,
        f_target: f,
        f_real: p.f_real(bound),
        size_threshold,
        brute_count,
        container_bound,
        literal_bound,
        realized_bound,
        distinct_fingerprints: containers.len(),
        coverage_ok,
        chain_ok,
        holds,
    })
}
