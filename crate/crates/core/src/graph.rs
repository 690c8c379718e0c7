//! Simple undirected graphs, the standard graph-state families, colorings and
//! graph moves (local complementation, vertex deletion).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{self, get_bit, ones, set_bit, words_for};

/// Named graph families with known closed-form entropy optima.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Chain { n: usize },
    Lattice { rows: usize, cols: usize },
    Star { n: usize },
    Ring { n: usize },
    Complete { n: usize },
}

impl Family {
    pub fn build(self) -> Result<Graph> {
        match self {
            Family::Chain { n } => Graph::chain(n),
            Family::Lattice { rows, cols } => Graph::lattice(rows, cols),
            Family::Star { n } => Graph::star(n),
            Family::Ring { n } => Graph::ring(n),
            Family::Complete { n } => Graph::complete(n),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Chain { n } => write!(f, "chain:{n}"),
            Family::Lattice { rows, cols } => write!(f, "lattice:{rows}x{cols}"),
            Family::Star { n } => write!(f, "star:{n}"),
            Family::Ring { n } => write!(f, "ring:{n}"),
            Family::Complete { n } => write!(f, "complete:{n}"),
        }
    }
}

/// Builder mini-language: `chain:N`, `lattice:RxC`, `ring:N`, `star:N`,
/// `complete:N`.
impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown graph builder {s:?}"));
        let (name, arg) = s.trim().split_once(':').ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        Ok(match name.trim().to_ascii_lowercase().as_str() {
            "chain" => Family::Chain { n: num(arg)? },
            "lattice" => {
                let (r, c) = arg.split_once(['x', 'X']).ok_or_else(bad)?;
                Family::Lattice { rows: num(r)?, cols: num(c)? }
            }
            "star" | "ghz" => Family::Star { n: num(arg)? },
            "ring" => Family::Ring { n: num(arg)? },
            "complete" => Family::Complete { n: num(arg)? },
            _ => return Err(bad()),
        })
    }
}

/// Simple undirected graph stored as packed adjacency bit-rows.
///
/// Equality compares the edge sets only; the family tag is metadata.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    stride: usize,
    adj: Vec<u64>,
    family: Option<Family>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .field("family", &self.family)
            .finish()
    }
}

/// Wire format `{"n": int, "edges": [[i, j], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl Graph {
    /// Edgeless graph on `n >= 1` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("graph needs at least one vertex".into()));
        }
        let stride = words_for(n);
        Ok(Graph { n, stride, adj: vec![0; n * stride], family: None })
    }

    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(i, j) in edges {
            for v in [i, j] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            g.set_edge(i, j, true);
        }
        Ok(g)
    }

    pub fn chain(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Ok(Self::from_edge_list(n, &edges)?.tagged(Family::Chain { n }))
    }

    /// `rows x cols` grid, vertex `r * cols + c`. A single row or column is
    /// tagged as a chain.
    pub fn lattice(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidSize(format!("lattice {rows}x{cols}")));
        }
        let mut edges = Vec::with_capacity(2 * rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        let family = if rows == 1 || cols == 1 {
            Family::Chain { n: rows * cols }
        } else {
            Family::Lattice { rows, cols }
        };
        Ok(Self::from_edge_list(rows * cols, &edges)?.tagged(family))
    }

    /// Hub 0 joined to every other vertex (the GHZ graph).
    pub fn star(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize(format!("star needs n >= 2, got {n}")));
        }
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Ok(Self::from_edge_list(n, &edges)?.tagged(Family::Star { n }))
    }

    pub fn ring(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSize(format!("ring needs n >= 3, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Ok(Self::from_edge_list(n, &edges)?.tagged(Family::Ring { n }))
    }

    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize(format!("complete graph needs n >= 2, got {n}")));
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Ok(Self::from_edge_list(n, &edges)?.tagged(Family::Complete { n }))
    }

    /// Builder string (`chain:6`, ...) or graph JSON text.
    pub fn from_spec(spec: &str) -> Result<Self> {
        if spec.trim_start().starts_with('{') {
            Self::from_json_str(spec)
        } else {
            spec.parse::<Family>()?.build()
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let edges: Vec<_> = json.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::from_edge_list(json.n, &edges)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson { n: self.n, edges: self.edges().into_iter().map(|(i, j)| [i, j]).collect() }
    }

    fn tagged(mut self, family: Family) -> Self {
        self.family = Some(family);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    /// Builder string for tagged graphs, otherwise a size summary.
    pub fn label(&self) -> String {
        match self.family {
            Some(f) => f.to_string(),
            None => format!("graph:n={},m={}", self.n, self.edge_count()),
        }
    }

    fn set_edge(&mut self, i: usize, j: usize, v: bool) {
        let s = self.stride;
        set_bit(&mut self.adj[i * s..(i + 1) * s], j, v);
        set_bit(&mut self.adj[j * s..(j + 1) * s], i, v);
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        get_bit(self.adjacency_row(i), j)
    }

    /// Packed neighbourhood of `i`.
    pub fn adjacency_row(&self, i: usize) -> &[u64] {
        &self.adj[i * self.stride..(i + 1) * self.stride]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.adjacency_row(i))
    }

    pub fn degree(&self, i: usize) -> usize {
        gf2::popcount(self.adjacency_row(i)) as usize
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|i| self.neighbors(i).filter(move |&j| j > i).map(move |j| (i, j))).collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).sum::<usize>() / 2
    }


    /// Packed membership mask for a vertex list; rejects out-of-range entries.
    pub fn vertex_mask(&self, vertices: &[usize]) -> Result<Vec<u64>> {
        let mut mask = vec![0u64; self.stride];
        for &v in vertices {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            set_bit(&mut mask, v, true);
        }
        Ok(mask)
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(a, &i)| set[a + 1..].iter().all(|&j| !self.has_edge(i, j)))
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = vec![s];
            while let Some(v) = stack.pop() {
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Local complementation at `i`: toggles every edge inside the
    /// neighbourhood of `i`.
    pub fn local_complement(&self, i: usize) -> Result<Graph> {
        if i >= self.n {
            return Err(Error::VertexOutOfRange { vertex: i, n: self.n });
        }
        let nbhd = self.adjacency_row(i).to_vec();
        let mut out = self.clone();
        out.family = None;
        let s = self.stride;
        for j in ones(&nbhd) {
            let row = &mut out.adj[j * s..(j + 1) * s];
            gf2::xor_into(row, &nbhd);
            // j is in its own neighbourhood mask; undo the self-loop
            set_bit(row, j, false);
        }
        Ok(out)
    }

    /// Induced subgraph on the vertices not in `drop`, reindexed in ascending
    /// order. Returns the graph and `kept`, where `kept[new] = old`.
    pub fn delete_vertices(&self, drop: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mask = self.vertex_mask(drop)?;
        let kept: Vec<usize> = (0..self.n).filter(|&v| !get_bit(&mask, v)).collect();
        if drop.is_empty() {
            return Ok((self.clone(), kept));
        }
        let mut out = Graph::empty(kept.len())
            .map_err(|_| Error::InvalidSize("cannot delete every vertex".into()))?;
        for (a, &u) in kept.iter().enumerate() {
            for (b, &v) in kept.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    out.set_edge(a, b, true);
                }
            }
        }
        Ok((out, kept))
    }

    /// Proper 2-coloring by breadth-first search (each component seeded at its
    /// smallest vertex with class 0), or `None` if the graph has an odd cycle.
    pub fn two_coloring(&self) -> Option<Coloring> {
        let mut color = vec![usize::MAX; self.n];
        for s in 0..self.n {
            if color[s] != usize::MAX {
                continue;
            }
            color[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(v) {
                    if color[u] == usize::MAX {
                        color[u] = 1 - color[v];
                        queue.push_back(u);
                    } else if color[u] == color[v] {
                        return None;
                    }
                }
            }
        }
        Coloring::from_assignment(self, &color).ok()
    }

    /// Greedy coloring in largest-degree-first order (ties by index).
    pub fn greedy_coloring(&self) -> Coloring {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        let mut color = vec![usize::MAX; self.n];
        for &v in &order {
            let mut used = vec![false; self.n + 1];
            for u in self.neighbors(v) {
                if color[u] != usize::MAX {
                    used[color[u]] = true;
                }
            }
            color[v] = used.iter().position(|&t| !t).unwrap();
        }
        Coloring::from_assignment(self, &color).expect("greedy coloring is proper")
    }

    /// Exact minimum coloring with at most `k_max` classes.
    ///
    /// The returned assignment is the lexicographically smallest proper
    /// assignment (vertex 0 first) that uses the minimum number of colors.
    pub fn chromatic_coloring(&self, k_max: usize) -> Result<Coloring> {
        if k_max == 0 {
            return Err(Error::InvalidSize("k_max must be at least 1".into()));
        }
        let upper = self.greedy_coloring().k();
        let lower = if self.edge_count() > 0 { 2 } else { 1 };
        for k in lower..=upper.min(k_max) {
            if let Some(assign) = self.color_with(k) {
                return Coloring::from_assignment(self, &assign);
            }
        }
        Err(Error::NoColoring(k_max))
    }

    fn color_with(&self, k: usize) -> Option<Vec<usize>> {
        fn rec(g: &Graph, k: usize, v: usize, used: usize, color: &mut Vec<usize>) -> bool {
            if v == g.n {
                return true;
            }
            // symmetry breaking: a fresh color is always the next unused one
            for c in 0..k.min(used + 1) {
                if g.neighbors(v).all(|u| u >= v || color[u] != c) {
                    color[v] = c;
                    if rec(g, k, v + 1, used.max(c + 1), color) {
                        return true;
                    }
                }
            }
            color[v] = usize::MAX;
            false
        }
        let mut color = vec![usize::MAX; self.n];
        rec(self, k, 0, 0, &mut color).then_some(color)
    }
}

/// Partition of the vertices into independent sets (color classes).
///
/// Class `l` corresponds to measurement setting `l`: X on the class, Z
/// everywhere else.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    classes: Vec<Vec<usize>>,
    #[serde(skip)]
    color_of: Vec<usize>,
}

impl Coloring {
    /// Validates that `classes` partition the vertices into nonempty
    /// independent sets. Class order is kept; members are sorted.
    pub fn new(g: &Graph, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut color_of = vec![usize::MAX; g.n()];
        let mut classes = classes;
        for (l, class) in classes.iter_mut().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidColoring(format!("class {l} is empty")));
            }
            class.sort_unstable();
            for &v in class.iter() {
                if v >= g.n() {
                    return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
                }
                if color_of[v] != usize::MAX {
                    return Err(Error::InvalidColoring(format!("vertex {v} appears twice")));
                }
                color_of[v] = l;
            }
            if !g.is_independent(class) {
                return Err(Error::InvalidColoring(format!("class {l} is not an independent set")));
            }
        }
        if let Some(v) = color_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidColoring(format!("vertex {v} is uncolored")));
        }
        Ok(Coloring { classes, color_of })
    }

    /// Classes numbered by their colors; unused color numbers are skipped.
    pub fn from_assignment(g: &Graph, color: &[usize]) -> Result<Self> {
        if color.len() != g.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} colors for {} vertices",
                color.len(),
                g.n()
            )));
        }
        let k = color.iter().copied().max().map_or(0, |c| c + 1);
        let mut classes = vec![Vec::new(); k];
        for (v, &c) in color.iter().enumerate() {
            classes[c].push(v);
        }
        classes.retain(|c| !c.is_empty());
        Self::new(g, classes)
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, l: usize) -> &[usize] {
        &self.classes[l]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn color_of(&self, v: usize) -> usize {
        self.color_of[v]
    }

    /// Rebuilds the lookup table after deserialization.
    pub fn revalidate(self, g: &Graph) -> Result<Self> {
        Self::new(g, self.classes)
    }

    /// Restriction to the kept vertices of a vertex-deleted graph
    /// (`kept[new] = old`). Classes that become empty are dropped; the second
    /// value maps each surviving class to its original index.
    pub fn restrict(&self, sub: &Graph, kept: &[usize]) -> Result<(Coloring, Vec<usize>)> {
        let mut classes = Vec::new();
        let mut origin = Vec::new();
        for (l, class) in self.classes.iter().enumerate() {
            let mapped: Vec<usize> =
                kept.iter().enumerate().filter(|(_, old)| class.binary_search(old).is_ok()).map(|(new, _)| new).collect();
            if !mapped.is_empty() {
                classes.push(mapped);
                origin.push(l);
            }
        }
        Ok((Coloring::new(sub, classes)?, origin))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edge_list(n, &edges).unwrap()
    }

    #[test]
    fn chain_builders() {
        assert_eq!(Graph::chain(1).unwrap().edge_count(), 0);
        assert_eq!(Graph::chain(6).unwrap().edges(), vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]);
        let c2 = Graph::chain(2).unwrap();
        assert_eq!(c2.edge_count(), 1);
        assert_eq!(c2.chromatic_coloring(4).unwrap().k(), 2);
        assert!(Graph::chain(0).is_err());
    }

    #[test]
    fn lattice_builders() {
        assert_eq!(Graph::lattice(1, 6).unwrap(), Graph::chain(6).unwrap());
        assert_eq!(Graph::lattice(1, 6).unwrap().family(), Some(Family::Chain { n: 6 }));
        let l = Graph::lattice(5, 5).unwrap();
        assert_eq!(l.n(), 25);
        assert_eq!(l.edge_count(), 40);
        let sq = Graph::lattice(2, 2).unwrap();
        assert_eq!(sq, Graph::from_edge_list(4, &[(0, 1), (1, 3), (3, 2), (2, 0)]).unwrap());
        assert!(Graph::lattice(0, 3).is_err());
    }

    #[test]
    fn star_ring_complete() {
        assert_eq!(Graph::star(4).unwrap().edges(), vec![(0, 1), (0, 2), (0, 3)]);
        let r5 = Graph::ring(5).unwrap();
        assert_eq!(r5.edges(), vec![(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]);
        assert!(r5.neighbors(0).eq([1, 4]));
        assert_eq!(Graph::complete(3).unwrap().edge_count(), 3);
        assert!(Graph::star(1).is_err());
        assert!(Graph::ring(2).is_err());
        assert!(Graph::complete(1).is_err());
    }

    #[test]
    fn edge_list_validation() {
        assert_eq!(Graph::from_edge_list(3, &[(0, 1), (1, 0)]).unwrap().edge_count(), 1);
        assert!(matches!(
            Graph::from_edge_list(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        assert!(matches!(Graph::from_edge_list(2, &[(1, 1)]), Err(Error::SelfLoop(1))));
        let chain_edges: Vec<_> = (0..5).map(|i| (i, i + 1)).collect();
        assert_eq!(Graph::from_edge_list(6, &chain_edges).unwrap(), Graph::chain(6).unwrap());
    }

    #[test]
    fn builder_strings_and_json() {
        assert_eq!(Graph::from_spec("lattice:3x4").unwrap(), Graph::lattice(3, 4).unwrap());
        assert_eq!(Graph::from_spec("ring:5").unwrap().family(), Some(Family::Ring { n: 5 }));
        assert!(Graph::from_spec("torus:3").is_err());
        assert!(Graph::from_spec("chain:x").is_err());
        for f in ["chain:6", "lattice:5x5", "ring:5", "star:4", "complete:3"] {
            assert_eq!(f.parse::<Family>().unwrap().to_string(), f);
        }
        let g = Graph::ring(5).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(text, r#"{"n":5,"edges":[[0,1],[0,4],[1,2],[2,3],[3,4]]}"#);
        assert_eq!(Graph::from_spec(&text).unwrap(), g);
    }

    #[test]
    fn local_complement_examples() {
        for n in 3..7 {
            let k = Graph::complete(n).unwrap();
            for i in 0..n {
                let want: Vec<_> = (0..n).filter(|&j| j != i).map(|j| (i.min(j), i.max(j))).collect();
                let mut got = k.local_complement(i).unwrap().edges();
                got.sort_unstable();
                let mut want = want;
                want.sort_unstable();
                assert_eq!(got, want, "K{n} at {i} should be a star centred on {i}");
            }
            assert_eq!(Graph::star(n).unwrap().local_complement(0).unwrap(), Graph::complete(n).unwrap());
        }
        let tri = Graph::chain(3).unwrap().local_complement(1).unwrap();
        assert_eq!(tri, Graph::complete(3).unwrap());
        assert!(Graph::chain(3).unwrap().local_complement(3).is_err());
    }

    #[test]
    fn local_complement_is_an_involution_exhaustively() {
        for n in 1..=6usize {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            for mask in 0u32..(1 << pairs.len()) {
                let edges: Vec<_> = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, e)| *e).collect();
                let g = Graph::from_edge_list(n, &edges).unwrap();
                for i in 0..n {
                    assert_eq!(g.local_complement(i).unwrap().local_complement(i).unwrap(), g);
                }
            }
        }
        // n = 7, 8: too many graphs to enumerate; sample instead
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let n = rng.random_range(7..=8);
            let p = rng.random_range(0.1..0.9);
            let g = random_graph(&mut rng, n, p);
            let i = rng.random_range(0..n);
            assert_eq!(g.local_complement(i).unwrap().local_complement(i).unwrap(), g);
        }
    }

    #[test]
    fn vertex_deletion() {
        let g = Graph::lattice(4, 4).unwrap();
        let (same, kept) = g.delete_vertices(&[]).unwrap();
        assert_eq!(same, g);
        assert_eq!(kept, (0..16).collect::<Vec<_>>());
        let (sub, kept) = g.delete_vertices(&[3, 7, 11, 15]).unwrap();
        assert_eq!(sub, Graph::lattice(4, 3).unwrap());
        assert_eq!(kept, vec![0, 1, 2, 4, 5, 6, 8, 9, 10, 12, 13, 14]);
        let (split, _) = Graph::chain(6).unwrap().delete_vertices(&[2]).unwrap();
        assert_eq!(split.components(), vec![vec![0, 1], vec![2, 3, 4]]);
        assert!(g.delete_vertices(&[16]).is_err());
        assert!(Graph::chain(2).unwrap().delete_vertices(&[0, 1]).is_err());
    }

    #[test]
    fn deletion_order_is_irrelevant() {
        let g = Graph::lattice(3, 4).unwrap();
        let (a, ka) = g.delete_vertices(&[1, 6]).unwrap();
        let (b1, kb1) = g.delete_vertices(&[6]).unwrap();
        let pos = kb1.iter().position(|&v| v == 1).unwrap();
        let (b, kb2) = b1.delete_vertices(&[pos]).unwrap();
        assert_eq!(a, b);
        let kb: Vec<usize> = kb2.iter().map(|&i| kb1[i]).collect();
        assert_eq!(ka, kb);
    }

    #[test]
    fn two_colorings() {
        let c = Graph::chain(6).unwrap().two_coloring().unwrap();
        assert_eq!(c.classes(), &[vec![0, 2, 4], vec![1, 3, 5]]);
        assert!(Graph::ring(5).unwrap().two_coloring().is_none());
        let l = Graph::lattice(5, 5).unwrap().two_coloring().unwrap();
        assert_eq!(l.class_sizes(), vec![13, 12]);
        assert!(l.class(0).iter().all(|&v| (v / 5 + v % 5) % 2 == 0));
        assert_eq!(Graph::chain(1).unwrap().two_coloring().unwrap().k(), 1);
    }

    #[test]
    fn chromatic_numbers() {
        let r5 = Graph::ring(5).unwrap().chromatic_coloring(5).unwrap();
        assert_eq!(r5.k(), 3);
        assert_eq!(r5.classes(), &[vec![0, 2], vec![1, 3], vec![4]]);
        assert_eq!(Graph::complete(4).unwrap().chromatic_coloring(4).unwrap().k(), 4);
        assert_eq!(Graph::chain(6).unwrap().chromatic_coloring(3).unwrap().k(), 2);
        assert!(matches!(Graph::complete(4).unwrap().chromatic_coloring(3), Err(Error::NoColoring(3))));
        assert_eq!(Graph::empty(3).unwrap().chromatic_coloring(1).unwrap().k(), 1);
    }

    #[test]
    fn two_coloring_matches_odd_cycle_test() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3000 {
            let n = rng.random_range(1..=10);
            let p = rng.random_range(0.05..0.6);
            let g = random_graph(&mut rng, n, p);
            let exact = g.chromatic_coloring(n).unwrap();
            for class in exact.classes() {
                assert!(g.is_independent(class));
            }
            let greedy = g.greedy_coloring();
            assert!(greedy.k() >= exact.k());
            match g.two_coloring() {
                Some(c) => {
                    assert!(exact.k() <= 2);
                    for class in c.classes() {
                        assert!(g.is_independent(class));
                    }
                }
                None => assert!(exact.k() >= 3),
            }
        }
    }

    #[test]
    fn coloring_validation() {
        let g = Graph::chain(3).unwrap();
        assert!(Coloring::new(&g, vec![vec![0, 1], vec![2]]).is_err());
        assert!(Coloring::new(&g, vec![vec![0, 2]]).is_err());
        assert!(Coloring::new(&g, vec![vec![0, 2], vec![1], vec![]]).is_err());
        assert!(Coloring::new(&g, vec![vec![0, 2], vec![1, 2]]).is_err());
        let c = Coloring::new(&g, vec![vec![2, 0], vec![1]]).unwrap();
        assert_eq!(c.class(0), &[0, 2]);
        assert_eq!(c.color_of(1), 1);
    }

    #[test]
    fn restricted_coloring() {
        let g = Graph::chain(5).unwrap();
        let c = g.two_coloring().unwrap();
        let (sub, kept) = g.delete_vertices(&[1, 3]).unwrap();
        let (rc, origin) = c.restrict(&sub, &kept).unwrap();
        assert_eq!(rc.classes(), &[vec![0, 1, 2]]);
        assert_eq!(origin, vec![0]);
    }
}
