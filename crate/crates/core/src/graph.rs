//! Dependency graphs, vertex sets as bitmasks, borders, cuts, the
//! path-based equivalence relation, and sparse-set tests.
//!
//! Vertices are ordered lexicographically by name and every set is a
//! bitmask over that order, so all enumeration orders are deterministic.

use std::fmt;

use crate::error::{Error, Result};

/// Hard cap: sets are `u64` bitmasks.
pub const MAX_VERTICES: usize = 64;

/// A player / graph vertex, identified by a short token over `[a-z0-9_]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(name: &str) -> Result<Self> {
        if name.is_empty()
            || !name
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        {
            return Err(Error::InvalidVertexName(name.to_string()));
        }
        Ok(VertexId(name.to_string()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A subset of some graph's vertices, as a bitmask over its vertex order.
///
/// The bitmask layout is only meaningful relative to the owning graph;
/// conversions to and from names go through [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(index: usize) -> Self {
        VertexSet(1 << index)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 & (1 << index) != 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn insert(&mut self, index: usize) {
        self.0 |= 1 << index;
    }

    /// Member indices in ascending (lexicographic) order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

/// A partition (U, W) of the whole vertex set into two disjoint halves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cut {
    pub u: VertexSet,
    pub w: VertexSet,
}

/// Finite simple undirected graph: no loops, no multi-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<VertexId>,
    adj: Vec<u64>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from vertex names and name pairs. Vertices are
    /// sorted; loops, duplicate vertices, duplicate edges, and edges with
    /// unknown endpoints are rejected.
    pub fn new(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let mut ids: Vec<VertexId> = vertices
            .iter()
            .map(|n| VertexId::new(n))
            .collect::<Result<_>>()?;
        ids.sort();
        for pair in ids.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateVertex(pair[0].name().to_string()));
            }
        }
        if ids.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(ids.len(), MAX_VERTICES));
        }
        let mut g = Graph {
            adj: vec![0; ids.len()],
            vertices: ids,
            edges: Vec::new(),
        };
        for &(a, b) in edges {
            let i = g.index_of(a)?;
            let j = g.index_of(b)?;
            if i == j {
                return Err(Error::LoopEdge(a.to_string()));
            }
            let (lo, hi) = (i.min(j), i.max(j));
            if g.edges.contains(&(lo, hi)) {
                return Err(Error::DuplicateEdge(
                    g.vertices[lo].name().to_string(),
                    g.vertices[hi].name().to_string(),
                ));
            }
            g.edges.push((lo, hi));
            g.adj[i] |= 1 << j;
            g.adj[j] |= 1 << i;
        }
        g.edges.sort();
        Ok(g)
    }

    /// Complete graph on `names`.
    pub fn complete(names: &[&str]) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                edges.push((names[i], names[j]));
            }
        }
        Graph::new(names, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Edges as canonical (lower, higher) index pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex(&self, index: usize) -> &VertexId {
        &self.vertices[index]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.vertices
            .binary_search_by(|v| v.name().cmp(name))
            .map_err(|_| Error::InvalidVertex(name.to_string()))
    }

    /// All vertices.
    pub fn full_set(&self) -> VertexSet {
        if self.vertices.is_empty() {
            VertexSet::EMPTY
        } else {
            VertexSet::from_bits(u64::MAX >> (64 - self.vertices.len()))
        }
    }

    /// Builds a [`VertexSet`] from names, rejecting unknown vertices.
    pub fn set_of(&self, names: &[&str]) -> Result<VertexSet> {
        let mut s = VertexSet::EMPTY;
        for n in names {
            s.insert(self.index_of(n)?);
        }
        Ok(s)
    }

    /// Member names in lexicographic order.
    pub fn names(&self, s: VertexSet) -> Vec<&str> {
        s.iter().map(|i| self.vertices[i].name()).collect()
    }

    /// Renders a set as `a,b,c`, or `.` when empty.
    pub fn render_set(&self, s: VertexSet) -> String {
        if s.is_empty() {
            ".".to_string()
        } else {
            self.names(s).join(",")
        }
    }

    fn check_subset(&self, s: VertexSet) -> Result<()> {
        if !s.is_subset(self.full_set()) {
            let bad = s.difference(self.full_set());
            return Err(Error::InvalidVertex(format!(
                "bit {}",
                bad.bits().trailing_zeros()
            )));
        }
        Ok(())
    }

    /// Neighbors of `v` as a set.
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet::from_bits(self.adj[v])
    }

    /// Closed neighborhood: neighbors of `v` plus `v` itself.
    pub fn adj_plus(&self, v: usize) -> VertexSet {
        VertexSet::from_bits(self.adj[v] | (1 << v))
    }

    /// Border of `u`: members of `u` with at least one neighbor outside `u`.
    pub fn border(&self, u: VertexSet) -> Result<VertexSet> {
        self.check_subset(u)?;
        let outside = self.full_set().difference(u);
        let mut b = VertexSet::EMPTY;
        for v in u.iter() {
            if self.adj[v] & outside.bits() != 0 {
                b.insert(v);
            }
        }
        Ok(b)
    }

    /// Every cut (U, W) with `constraint_a ⊆ U` and `constraint_c ⊆ W`,
    /// ordered by ascending bitmask over the unconstrained vertices.
    pub fn enumerate_cuts(
        &self,
        constraint_a: VertexSet,
        constraint_c: VertexSet,
    ) -> Result<Vec<Cut>> {
        self.check_subset(constraint_a)?;
        self.check_subset(constraint_c)?;
        let overlap = constraint_a.intersection(constraint_c);
        if !overlap.is_empty() {
            return Err(Error::NoValidCut(self.render_set(overlap)));
        }
        let full = self.full_set();
        let free = full.difference(constraint_a).difference(constraint_c);
        let free_bits: Vec<usize> = free.iter().collect();
        let mut cuts = Vec::with_capacity(1 << free_bits.len());
        for mask in 0u64..(1 << free_bits.len()) {
            let mut u = constraint_a;
            for (k, &i) in free_bits.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    u.insert(i);
                }
            }
            cuts.push(Cut {
                u,
                w: full.difference(u),
            });
        }
        Ok(cuts)
    }

    /// Partition of the vertices under u ~ v: some u–v walk has no two
    /// consecutive vertices inside `s`.
    ///
    /// Computed as connected components of the relation joining endpoints
    /// of edges with at least one endpoint outside `s`, together with
    /// two-step paths whose middle vertex is outside `s`, then closed
    /// transitively. Validated against a brute-force path oracle in tests.
    pub fn equiv_classes(&self, s: VertexSet) -> Result<Vec<VertexSet>> {
        self.check_subset(s)?;
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for &(a, b) in &self.edges {
            if !s.contains(a) || !s.contains(b) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        // two-step paths v–m–w with m outside s
        for m in 0..n {
            if s.contains(m) {
                continue;
            }
            let nbrs: Vec<usize> = self.neighbors(m).iter().collect();
            for i in 0..nbrs.len() {
                for j in i + 1..nbrs.len() {
                    let (ra, rb) = (find(&mut parent, nbrs[i]), find(&mut parent, nbrs[j]));
                    parent[ra] = rb;
                }
            }
        }
        let mut classes: Vec<(usize, VertexSet)> = Vec::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            match classes.iter_mut().find(|(root, _)| *root == r) {
                Some((_, set)) => set.insert(v),
                None => classes.push((r, VertexSet::singleton(v))),
            }
        }
        let mut out: Vec<VertexSet> = classes.into_iter().map(|(_, s)| s).collect();
        out.sort();
        Ok(out)
    }

    /// The ~-class of a single vertex.
    pub fn equiv_class_of(&self, s: VertexSet, v: usize) -> Result<VertexSet> {
        Ok(self
            .equiv_classes(s)?
            .into_iter()
            .find(|c| c.contains(v))
            .expect("partition covers every vertex"))
    }

    /// Pairwise graph distances (usize::MAX when unreachable).
    pub fn distances(&self, from: usize) -> Vec<usize> {
        let n = self.vertices.len();
        let mut dist = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        dist[from] = 0;
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v).iter() {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// True iff every pair of distinct members of `w` is at graph
    /// distance at least 3.
    pub fn is_sparse(&self, w: VertexSet) -> Result<bool> {
        self.check_subset(w)?;
        let members: Vec<usize> = w.iter().collect();
        for (k, &a) in members.iter().enumerate() {
            let dist = self.distances(a);
            for &b in &members[k + 1..] {
                if dist[b] < 3 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn path4() -> Graph {
        Graph::new(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")]).unwrap()
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(matches!(
            Graph::new(&["a"], &[("a", "a")]),
            Err(Error::LoopEdge(_))
        ));
        assert!(matches!(
            Graph::new(&["a", "b"], &[("a", "b"), ("b", "a")]),
            Err(Error::DuplicateEdge(..))
        ));
        assert!(matches!(
            Graph::new(&["a", "a"], &[]),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(matches!(
            Graph::new(&["a", "B"], &[]),
            Err(Error::InvalidVertexName(_))
        ));
    }

    #[test]
    fn border_on_path() {
        let g = path4();
        let u = g.set_of(&["a", "b"]).unwrap();
        assert_eq!(g.border(u).unwrap(), g.set_of(&["b"]).unwrap());
        let w = g.set_of(&["c", "d"]).unwrap();
        assert_eq!(g.border(w).unwrap(), g.set_of(&["c"]).unwrap());
        assert_eq!(g.border(g.full_set()).unwrap(), VertexSet::EMPTY);
        assert_eq!(g.border(VertexSet::EMPTY).unwrap(), VertexSet::EMPTY);
    }

    #[test]
    fn border_rejects_foreign_vertices() {
        let g = path4();
        let bad = VertexSet::from_bits(1 << 10);
        assert!(matches!(g.border(bad), Err(Error::InvalidVertex(_))));
    }

    #[test]
    fn adj_plus_on_path() {
        let g = path4();
        let b = g.index_of("b").unwrap();
        assert_eq!(g.adj_plus(b), g.set_of(&["a", "b", "c"]).unwrap());
        let iso = Graph::new(&["a", "b"], &[]).unwrap();
        assert_eq!(
            iso.adj_plus(iso.index_of("a").unwrap()),
            iso.set_of(&["a"]).unwrap()
        );
        let k4 = Graph::complete(&["a", "b", "c", "d"]).unwrap();
        assert_eq!(k4.adj_plus(0), k4.full_set());
        assert!(matches!(g.index_of("zz"), Err(Error::InvalidVertex(_))));
    }

    #[test]
    fn cut_enumeration_counts() {
        let g = path4();
        let a = g.set_of(&["a"]).unwrap();
        let d = g.set_of(&["d"]).unwrap();
        let cuts = g.enumerate_cuts(a, d).unwrap();
        assert_eq!(cuts.len(), 4);
        for c in &cuts {
            assert!(a.is_subset(c.u));
            assert!(d.is_subset(c.w));
            assert_eq!(c.u.intersection(c.w), VertexSet::EMPTY);
            assert_eq!(c.u.union(c.w), g.full_set());
        }
        // fully constrained: one cut
        let u = g.set_of(&["a", "b"]).unwrap();
        let w = g.set_of(&["c", "d"]).unwrap();
        assert_eq!(g.enumerate_cuts(u, w).unwrap().len(), 1);
        // unconstrained: 2^|V|
        assert_eq!(
            g.enumerate_cuts(VertexSet::EMPTY, VertexSet::EMPTY)
                .unwrap()
                .len(),
            16
        );
        assert!(matches!(g.enumerate_cuts(a, a), Err(Error::NoValidCut(_))));
    }

    #[test]
    fn sparse_sets() {
        let g = path4();
        assert!(g.is_sparse(g.set_of(&["a", "d"]).unwrap()).unwrap());
        assert!(!g.is_sparse(g.set_of(&["a", "b"]).unwrap()).unwrap());
        assert!(!g.is_sparse(g.set_of(&["a", "c"]).unwrap()).unwrap());
        assert!(g.is_sparse(g.set_of(&["a"]).unwrap()).unwrap());
        assert!(g.is_sparse(VertexSet::EMPTY).unwrap());
    }

    /// Path oracle: u ~ v iff some simple path from u to v has no two
    /// consecutive vertices inside `s`. Enumerates every simple path by
    /// DFS, following the definition literally.
    fn oracle_related(g: &Graph, s: VertexSet, from: usize, to: usize) -> bool {
        fn dfs(g: &Graph, s: VertexSet, path: &mut Vec<usize>, visited: u64, to: usize) -> bool {
            let v = *path.last().unwrap();
            if v == to {
                return true;
            }
            for u in g.neighbors(v).iter() {
                if visited & (1 << u) != 0 {
                    continue;
                }
                if s.contains(v) && s.contains(u) {
                    continue;
                }
                path.push(u);
                if dfs(g, s, path, visited | (1 << u), to) {
                    return true;
                }
                path.pop();
            }
            false
        }
        let mut path = vec![from];
        dfs(g, s, &mut path, 1 << from, to)
    }

    fn oracle_classes(g: &Graph, s: VertexSet) -> Vec<VertexSet> {
        let n = g.vertex_count();
        let mut out: Vec<VertexSet> = Vec::new();
        for v in 0..n {
            if out.iter().any(|c| c.contains(v)) {
                continue;
            }
            let mut class = VertexSet::singleton(v);
            for u in 0..n {
                if u != v && oracle_related(g, s, v, u) {
                    assert!(oracle_related(g, s, u, v), "oracle relation is symmetric");
                    class.insert(u);
                }
            }
            out.push(class);
        }
        out.sort();
        out
    }

    #[test]
    fn equiv_classes_match_oracle_on_small_graphs() {
        let names = ["a", "b", "c", "d", "e"];
        for n in 1..=5usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            for edge_mask in 0u32..(1 << pairs.len()) {
                let edges: Vec<(&str, &str)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| edge_mask & (1 << k) != 0)
                    .map(|(_, &(i, j))| (names[i], names[j]))
                    .collect();
                let g = Graph::new(&names[..n], &edges).unwrap();
                for s_bits in 0u64..(1 << n) {
                    let s = VertexSet::from_bits(s_bits);
                    assert_eq!(g.equiv_classes(s).unwrap(), oracle_classes(&g, s));
                }
            }
        }
    }

    #[test]
    fn equiv_classes_edge_cases() {
        let g = path4();
        // empty s on a connected graph: one class
        assert_eq!(g.equiv_classes(VertexSet::EMPTY).unwrap(), vec![g.full_set()]);
        // s = {b,c}: edge b-c is blocked, so {a,b} and {c,d}
        let s = g.set_of(&["b", "c"]).unwrap();
        assert_eq!(
            g.equiv_classes(s).unwrap(),
            vec![g.set_of(&["a", "b"]).unwrap(), g.set_of(&["c", "d"]).unwrap()]
        );
        // s = V: every length-1 walk blocked, all singletons
        let classes = g.equiv_classes(g.full_set()).unwrap();
        assert_eq!(classes.len(), 4);
        assert!(classes.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn border_union_exhaustive() {
        // B(X ∪ Y) ⊆ B(X) ∪ B(Y) over all subsets of small path graphs
        let names = ["a", "b", "c", "d", "e"];
        for n in 2..=5usize {
            let edges: Vec<(&str, &str)> =
                (0..n - 1).map(|i| (names[i], names[i + 1])).collect();
            let g = Graph::new(&names[..n], &edges).unwrap();
            for x in 0u64..(1 << n) {
                for y in 0u64..(1 << n) {
                    let (x, y) = (VertexSet::from_bits(x), VertexSet::from_bits(y));
                    let lhs = g.border(x.union(y)).unwrap();
                    let rhs = g.border(x).unwrap().union(g.border(y).unwrap());
                    assert!(lhs.is_subset(rhs));
                }
            }
        }
    }
}
