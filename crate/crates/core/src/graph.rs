//! Immutable simple graphs and bitset vertex sets.
//!
//! Vertex ids `0..n` double as the fixed total order used for every
//! tie-break in the crate. Induced-subgraph queries take a [`VertexSet`]
//! mask instead of materializing a new graph.

use std::cmp::Ordering;
use std::fmt;
use std::io::{BufRead, Write};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Graphs up to this order keep a bitset row per vertex next to the
/// adjacency lists.
const DENSE_ROW_LIMIT: usize = 8192;

#[inline]
fn words_for(universe: usize) -> usize {
    universe.div_ceil(64)
}

/// A set of vertex ids drawn from `0..universe`, iterated in ascending order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            universe,
            words: vec![0; words_for(universe)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            let bits = (universe - lo).min(64);
            *w = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        }
        s
    }

    /// Builds a set from arbitrary ids; duplicates collapse.
    pub fn from_ids<I: IntoIterator<Item = usize>>(universe: usize, ids: I) -> Result<Self> {
        let mut s = Self::empty(universe);
        for v in ids {
            if v >= universe {
                return Err(Error::VertexOutOfRange { vertex: v, n: universe });
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Interprets the low `universe` bits of `mask` as a set. Requires `universe <= 64`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= 64, "from_mask needs a universe of at most 64");
        let mut s = Self::empty(universe);
        if universe > 0 {
            let keep = if universe == 64 { u64::MAX } else { (1u64 << universe) - 1 };
            s.words[0] = mask & keep;
        }
        s
    }

    /// The set as a single machine word, when it fits.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v >> 6] >> (v & 63) & 1 == 1
    }

    /// Panics if `v` is outside the universe.
    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        let w = &mut self.words[v >> 6];
        let had = *w >> (v & 63) & 1 == 1;
        *w |= 1u64 << (v & 63);
        !had
    }

    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let w = &mut self.words[v >> 6];
        let had = *w >> (v & 63) & 1 == 1;
        *w &= !(1u64 << (v & 63));
        had
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn check_universe(&self, other: &VertexSet) {
        assert_eq!(
            self.universe, other.universe,
            "vertex sets over different universes"
        );
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.check_universe(other);
        VertexSet {
            universe: self.universe,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.check_universe(other);
        VertexSet {
            universe: self.universe,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.check_universe(other);
        VertexSet {
            universe: self.universe,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.check_universe(other);
        intersect_count(&self.words, &other.words)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.check_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.check_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Lexicographic comparison of the ascending id sequences.
    ///
    /// For sets of equal size the smaller set is the one owning the least
    /// element of the symmetric difference.
    pub fn lex_cmp(&self, other: &VertexSet) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

#[inline]
pub(crate) fn intersect_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for v in self.iter() {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

/// Undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    neighbors: Vec<Vec<usize>>,
    /// Row-major bitset adjacency, present when `n <= DENSE_ROW_LIMIT`.
    rows: Option<Vec<u64>>,
    row_words: usize,
}

impl Graph {
    /// Builds a graph from an undirected edge list. Duplicate and reversed
    /// pairs collapse into one edge.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_sorted_neighbors(neighbors))
    }

    fn from_sorted_neighbors(neighbors: Vec<Vec<usize>>) -> Graph {
        let n = neighbors.len();
        let m = neighbors.iter().map(Vec::len).sum::<usize>() / 2;
        let row_words = words_for(n);
        let rows = (n <= DENSE_ROW_LIMIT).then(|| {
            let mut rows = vec![0u64; n * row_words];
            for (v, list) in neighbors.iter().enumerate() {
                for &w in list {
                    rows[v * row_words + (w >> 6)] |= 1u64 << (w & 63);
                }
            }
            rows
        });
        Graph {
            n,
            m,
            neighbors,
            rows,
            row_words,
        }
    }

    pub fn empty(n: usize) -> Graph {
        Self::from_sorted_neighbors(vec![Vec::new(); n])
    }

    pub fn complete(n: usize) -> Graph {
        Self::from_sorted_neighbors((0..n).map(|v| (0..n).filter(|&w| w != v).collect()).collect())
    }

    /// The cycle `0-1-...-(n-1)-0`. Needs `n >= 3`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edge_list(n, &edges).expect("cycle edges are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.rows {
            Some(rows) => rows[u * self.row_words + (v >> 6)] >> (v & 63) & 1 == 1,
            None => self.neighbors[u].binary_search(&v).is_ok(),
        }
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Adjacency as one `u64` per vertex, for graphs with at most 64 vertices.
    pub fn small_rows(&self) -> Option<Vec<u64>> {
        if self.n > 64 {
            return None;
        }
        let rows = self.rows.as_ref()?;
        Some(if self.row_words == 0 { Vec::new() } else { rows.clone() })
    }

    #[inline]
    fn row(&self, v: usize) -> Option<&[u64]> {
        self.rows
            .as_ref()
            .map(|r| &r[v * self.row_words..(v + 1) * self.row_words])
    }

    /// `|N(v) ∩ s|`. `v` need not belong to `s`.
    #[inline]
    pub fn degree_in(&self, v: usize, s: &VertexSet) -> usize {
        debug_assert_eq!(s.universe(), self.n);
        match self.row(v) {
            Some(row) => intersect_count(row, s.words()),
            None => self.neighbors[v].iter().filter(|&&w| s.contains(w)).count(),
        }
    }

    /// `Δ(G[s])`, zero for sets of size at most one.
    pub fn max_degree_in(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| self.degree_in(v, s)).max().unwrap_or(0)
    }

    /// `e(G[s])`.
    pub fn edge_count_in(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| self.degree_in(v, s)).sum::<usize>() / 2
    }

    /// Materializes `G[s]`, relabelling `s` to `0..|s|` in ascending order.
    /// Returns the induced graph and the map from new ids to old ids.
    pub fn induce(&self, s: &VertexSet) -> (Graph, Vec<usize>) {
        let map = s.to_vec();
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        let neighbors = map
            .iter()
            .map(|&v| {
                self.neighbors[v]
                    .iter()
                    .filter(|&&w| local[w] != usize::MAX)
                    .map(|&w| local[w])
                    .collect()
            })
            .collect();
        (Self::from_sorted_neighbors(neighbors), map)
    }

    /// Reads the `n m` header followed by `m` lines of `u v`.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
        let mut lines = reader
            .lines()
            .enumerate()
            .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(|e| Error::Malformed(e.to_string())))
            .filter(|r| r.as_ref().map_or(true, |(_, l)| !l.trim().is_empty()));

        let parse_pair = |lineno: usize, line: &str| -> Result<(usize, usize)> {
            let mut it = line.split_whitespace();
            let bad = || Error::Malformed(format!("line {lineno}: expected two integers, got {line:?}"));
            let a = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let b = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if it.next().is_some() {
                return Err(bad());
            }
            Ok((a, b))
        };

        let (lineno, header) = lines
            .next()
            .ok_or_else(|| Error::Malformed("empty input".into()))??;
        let (n, m) = parse_pair(lineno, &header)?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (lineno, line) = lines.next().ok_or_else(|| {
                Error::Malformed(format!("expected {m} edge lines, found {}", edges.len()))
            })??;
            edges.push(parse_pair(lineno, &line)?);
        }
        if let Some(extra) = lines.next() {
            let (lineno, _) = extra?;
            return Err(Error::Malformed(format!(
                "line {lineno}: more than the {m} declared edges"
            )));
        }
        Graph::from_edge_list(n, &edges)
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n, self.m)?;
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}
