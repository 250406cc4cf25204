//! Seeded instance generators.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Erdős–Rényi `G(n, prob)`: pairs `(i, j)`, `i < j`, are drawn in
/// lexicographic order from a ChaCha8 stream seeded with `seed`.
pub fn gnp(n: usize, prob: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::InvalidParameter(format!("edge probability {prob} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(prob) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edge_list(n, &edges)
}

/// Complete multipartite graph; part `i` occupies a contiguous id block.
pub fn complete_multipartite(part_sizes: &[usize]) -> Result<Graph> {
    if part_sizes.contains(&0) {
        return Err(Error::InvalidParameter("every part needs at least one vertex".into()));
    }
    let part: Vec<usize> = part_sizes
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| std::iter::repeat_n(i, s))
        .collect();
    let n = part.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if part[u] != part[v] {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edge_list(n, &edges)
}

/// Replaces vertex `v` by the independent set `{v·t, …, v·t + t − 1}` and each
/// edge by a complete bipartite graph between the two blocks.
pub fn blowup(g: &Graph, t: usize) -> Result<Graph> {
    if t == 0 {
        return Err(Error::InvalidParameter("blow-up factor must be at least 1".into()));
    }
    let mut edges = Vec::with_capacity(g.edge_count() * t * t);
    for (u, v) in g.edges() {
        for a in 0..t {
            for b in 0..t {
                edges.push((u * t + a, v * t + b));
            }
        }
    }
    Graph::from_edge_list(g.n() * t, &edges)
}

/// Colon-delimited generator description, e.g. `gnp:10:0.5:7`.
///
/// Accepted forms: `gnp:n:p:seed`, `multipartite:a:b:...`, `complete:n`,
/// `empty:n`, `cycle:n`, `blowup:t:<inner spec>`.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Gnp { n: usize, prob: f64, seed: u64 },
    Multipartite(Vec<usize>),
    Complete(usize),
    Empty(usize),
    Cycle(usize),
    Blowup { t: usize, inner: Box<GeneratorSpec> },
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GeneratorSpec::Gnp { n, prob, seed } => gnp(*n, *prob, *seed),
            GeneratorSpec::Multipartite(parts) => complete_multipartite(parts),
            GeneratorSpec::Complete(n) => Ok(Graph::complete(*n)),
            GeneratorSpec::Empty(n) => Ok(Graph::empty(*n)),
            GeneratorSpec::Cycle(n) => Ok(Graph::cycle(*n)),
            GeneratorSpec::Blowup { t, inner } => blowup(&inner.build()?, *t),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::Malformed(format!("generator spec {text:?}: {why}"));
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad("expected an integer"));
        let (kind, rest) = text.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let fields: Vec<&str> = rest.split(':').collect();
        let single = |fields: &[&str]| match fields {
            [x] => num(x),
            _ => Err(bad("expected exactly one field")),
        };
        match kind {
            "gnp" => match fields.as_slice() {
                [n, p, seed] => {
                    let prob: f64 = p.parse().map_err(|_| bad("bad probability"))?;
                    if !(0.0..=1.0).contains(&prob) {
                        return Err(bad("probability outside [0, 1]"));
                    }
                    Ok(GeneratorSpec::Gnp {
                        n: num(n)?,
                        prob,
                        seed: seed.parse().map_err(|_| bad("bad seed"))?,
                    })
                }
                _ => Err(bad("expected gnp:n:p:seed")),
            },
            "multipartite" => {
                let parts = fields.iter().map(|f| num(f)).collect::<Result<Vec<_>>>()?;
                if parts.contains(&0) {
                    return Err(bad("parts must be non-empty"));
                }
                Ok(GeneratorSpec::Multipartite(parts))
            }
            "complete" => Ok(GeneratorSpec::Complete(single(&fields)?)),
            "empty" => Ok(GeneratorSpec::Empty(single(&fields)?)),
            "cycle" => {
                let n = single(&fields)?;
                if n < 3 {
                    return Err(bad("cycles need at least 3 vertices"));
                }
                Ok(GeneratorSpec::Cycle(n))
            }
            "blowup" => {
                let (t, inner) = rest.split_once(':').ok_or_else(|| bad("expected blowup:t:spec"))?;
                let t = num(t)?;
                if t == 0 {
                    return Err(bad("blow-up factor must be at least 1"));
                }
                Ok(GeneratorSpec::Blowup {
                    t,
                    inner: Box::new(inner.parse()?),
                })
            }
            _ => Err(bad("unknown generator kind")),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Gnp { n, prob, seed } => write!(f, "gnp:{n}:{prob}:{seed}"),
            GeneratorSpec::Multipartite(parts) => {
                write!(f, "multipartite")?;
                for p in parts {
                    write!(f, ":{p}")?;
                }
                Ok(())
            }
            GeneratorSpec::Complete(n) => write!(f, "complete:{n}"),
            GeneratorSpec::Empty(n) => write!(f, "empty:{n}"),
            GeneratorSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GeneratorSpec::Blowup { t, inner } => write!(f, "blowup:{t}:{inner}"),
        }
    }
}

/// One representative of every isomorphism class of graphs on `n ≤ 8`
/// vertices, built by vertex augmentation and deduplicated on a canonical
/// code. Output order is by canonical code.
pub fn nonisomorphic_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 8, "isomorph enumeration is limited to 8 vertices");
    let mut level: Vec<Vec<u64>> = vec![Vec::new()];
    for order in 1..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for rows in &level {
            for nbrs in 0u64..1 << (order - 1) {
                let mut cand = rows.clone();
                for (v, row) in cand.iter_mut().enumerate() {
                    if nbrs >> v & 1 == 1 {
                        *row |= 1 << (order - 1);
                    }
                }
                cand.push(nbrs);
                let code = canonical_code(&cand);
                if seen.insert(code) {
                    next.push((code, decode(order, code)));
                }
            }
        }
        next.sort_by_key(|(c, _)| *c);
        level = next.into_iter().map(|(_, r)| r).collect();
    }
    level
        .iter()
        .map(|rows| {
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).filter(move |&v| rows[u] >> v & 1 == 1).map(move |v| (u, v)))
                .collect();
            Graph::from_edge_list(n, &edges).expect("rows describe a simple graph")
        })
        .collect()
}

/// Upper-triangle bits of the adjacency matrix under `order`.
fn code_under(rows: &[u64], order: &[usize]) -> u64 {
    let n = order.len();
    let mut code = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            code = code << 1 | (rows[order[i]] >> order[j] & 1);
        }
    }
    code
}

fn decode(n: usize, code: u64) -> Vec<u64> {
    let mut rows = vec![0u64; n];
    let mut bit = n * n.saturating_sub(1) / 2;
    for i in 0..n {
        for j in i + 1..n {
            bit -= 1;
            if code >> bit & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
        }
    }
    rows
}

/// Maximum adjacency code over all orderings that respect an
/// isomorphism-invariant colour refinement.
fn canonical_code(rows: &[u64]) -> u64 {
    let n = rows.len();
    let mut colour: Vec<usize> = rows.iter().map(|r| r.count_ones() as usize).collect();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n).filter(|&w| rows[v] >> w & 1 == 1).map(|w| colour[w]).collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let refined: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(s).unwrap()).collect();
        let before = colour.iter().collect::<HashSet<_>>().len();
        colour = refined;
        if distinct.len() == before {
            break;
        }
    }
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut by_colour: Vec<(usize, usize)> = (0..n).map(|v| (colour[v], v)).collect();
    by_colour.sort_unstable();
    for (c, v) in by_colour {
        match cells.last_mut() {
            Some(cell) if colour[cell[0]] == c => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut best = 0u64;
    permute_cells(rows, &cells, 0, &mut vec![false; n], &mut order, &mut best);
    best
}

fn permute_cells(
    rows: &[u64],
    cells: &[Vec<usize>],
    cell: usize,
    used: &mut Vec<bool>,
    order: &mut Vec<usize>,
    best: &mut u64,
) {
    let Some(current) = cells.get(cell) else {
        *best = (*best).max(code_under(rows, order));
        return;
    };
    let placed = current.iter().filter(|&&v| used[v]).count();
    if placed == current.len() {
        return permute_cells(rows, cells, cell + 1, used, order, best);
    }
    for &v in current {
        if used[v] {
            continue;
        }
        used[v] = true;
        order.push(v);
        permute_cells(rows, cells, cell, used, order, best);
        order.pop();
        used[v] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_extremes_and_determinism() {
        assert_eq!(gnp(8, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(gnp(8, 1.0, 1).unwrap(), Graph::complete(8));
        assert_eq!(gnp(10, 0.5, 7).unwrap(), gnp(10, 0.5, 7).unwrap());
        assert!(gnp(3, 1.5, 0).is_err());
    }

    #[test]
    fn gnp_edge_count_mean() {
        let (n, prob) = (20usize, 0.3);
        let pairs = (n * (n - 1) / 2) as f64;
        let counts: Vec<f64> = (0..200).map(|s| gnp(n, prob, s).unwrap().edge_count() as f64).collect();
        let mean = counts.iter().sum::<f64>() / counts.len() as f64;
        let sigma_of_mean = (pairs * prob * (1.0 - prob) / counts.len() as f64).sqrt();
        assert!((mean - prob * pairs).abs() < 3.0 * sigma_of_mean, "mean {mean}");
    }

    #[test]
    fn multipartite_examples() {
        assert_eq!(complete_multipartite(&[1, 1, 1]).unwrap(), Graph::complete(3));
        let c4 = complete_multipartite(&[2, 2]).unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert!((0..4).all(|v| c4.degree(v) == 2));
        assert_eq!(complete_multipartite(&[3]).unwrap(), Graph::empty(3));
        assert!(complete_multipartite(&[2, 0]).is_err());
    }

    #[test]
    fn blowup_examples() {
        let k2 = Graph::complete(2);
        let c4 = blowup(&k2, 2).unwrap();
        assert_eq!(c4, complete_multipartite(&[2, 2]).unwrap());
        let c5 = Graph::cycle(5);
        assert_eq!(blowup(&c5, 1).unwrap(), c5);
        let b = blowup(&c5, 2).unwrap();
        assert_eq!((b.n(), b.edge_count()), (10, 20));
        assert!(blowup(&c5, 0).is_err());
    }

    fn has_k4(g: &Graph) -> bool {
        let n = g.n();
        (0..n).any(|a| {
            (a + 1..n).any(|b| {
                g.has_edge(a, b)
                    && (b + 1..n).any(|c| {
                        g.has_edge(a, c) && g.has_edge(b, c) && (c + 1..n).any(|d| g.has_edge(a, d) && g.has_edge(b, d) && g.has_edge(c, d))
                    })
            })
        })
    }

    #[test]
    fn blowup_keeps_k4_freeness() {
        for g in nonisomorphic_graphs(5) {
            let b = blowup(&g, 2).unwrap();
            assert_eq!(has_k4(&g), has_k4(&b), "{g:?}");
        }
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["gnp:10:0.5:7", "multipartite:2:3", "complete:4", "empty:3", "cycle:5", "blowup:2:cycle:5"] {
            let spec: GeneratorSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!("blowup:2:complete:2".parse::<GeneratorSpec>().unwrap().build().unwrap().edge_count(), 4);
        for bad in ["gnp:10:0.5", "gnp:10:2:1", "cycle:2", "foo:1", "complete", "multipartite:0", "blowup:0:cycle:5"] {
            assert!(bad.parse::<GeneratorSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn graph_counts_match_known_sequence() {
        // unlabelled graphs on n vertices: 1, 1, 2, 4, 11, 34, 156, 1044
        let counts: Vec<usize> = (0..=7).map(|n| nonisomorphic_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156, 1044]);
    }
}
