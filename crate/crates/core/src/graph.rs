//! Orientations, simple graphs and 3-graphs, plus the three triple-system
//! constructions and the structural checkers used to validate them.

use std::collections::BTreeSet;

use subsets::{four_subsets, three_subsets};

use crate::error::{domain, Result};
use crate::scalar::binomial;
use crate::Rational;

pub type Vertex = usize;
pub type Triple = [Vertex; 3];

/// A directed graph without loops or antiparallel pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedGraph {
    n: usize,
    arcs: BTreeSet<(Vertex, Vertex)>,
    adj: Vec<bool>,
}

impl OrientedGraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in arcs {
            g.insert(u, v)?;
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        OrientedGraph {
            n,
            arcs: BTreeSet::new(),
            adj: vec![false; n * n],
        }
    }

    /// Decodes an orientation from its base-3 index over the pairs
    /// `u < v` in lexicographic order: digit 0 is no arc, 1 is `u -> v`,
    /// 2 is `v -> u`.
    pub fn from_code(n: usize, mut code: u64) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                match code % 3 {
                    1 => g.insert_unchecked(u, v),
                    2 => g.insert_unchecked(v, u),
                    _ => {}
                }
                code /= 3;
            }
        }
        g
    }

    pub(crate) fn insert(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        if u >= self.n || v >= self.n {
            return domain(format!("arc ({u},{v}) out of range for {} vertices", self.n));
        }
        if u == v {
            return domain(format!("self-loop at vertex {u}"));
        }
        if self.has_arc(u, v) {
            return domain(format!("duplicate arc ({u},{v})"));
        }
        if self.has_arc(v, u) {
            return domain(format!("not an orientation: both ({u},{v}) and ({v},{u}) present"));
        }
        self.insert_unchecked(u, v);
        Ok(())
    }

    fn insert_unchecked(&mut self, u: Vertex, v: Vertex) {
        self.arcs.insert((u, v));
        self.adj[u * self.n + v] = true;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn out_neighbors(&self, u: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n).filter(move |&v| self.has_arc(u, v))
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Self {
        let mut g = Self::empty(self.n);
        for &(u, v) in &self.arcs {
            g.insert_unchecked(perm[u], perm[v]);
        }
        g
    }

    /// Forgets directions.
    pub fn underlying(&self) -> UndirectedGraph {
        let mut g = UndirectedGraph::empty(self.n);
        for &(u, v) in &self.arcs {
            g.insert_unchecked(u, v);
        }
        g
    }

    /// Arc count inside `t` and the vertex of `t` with arcs to both others, if any.
    fn triple_pattern(&self, t: &Triple) -> (usize, Option<Vertex>) {
        let mut arcs = 0;
        let mut dominator = None;
        for (i, &x) in t.iter().enumerate() {
            let others = [t[(i + 1) % 3], t[(i + 2) % 3]];
            let out = others.iter().filter(|&&y| self.has_arc(x, y)).count();
            arcs += out;
            if out == 2 {
                dominator = Some(x);
            }
        }
        (arcs, dominator)
    }

    /// The vertex of `t` that dominates the other two, if any.
    pub fn dominator(&self, t: &Triple) -> Option<Vertex> {
        self.triple_pattern(t).1
    }

    pub fn arcs_within(&self, t: &Triple) -> usize {
        self.triple_pattern(t).0
    }
}

/// A simple undirected graph; edges stored as `(min, max)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: BTreeSet<(Vertex, Vertex)>,
    adj: Vec<bool>,
}

impl UndirectedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.insert(u, v)?;
        }
        Ok(g)
    }

    pub(crate) fn insert(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        let n = self.n;
        if u >= n || v >= n {
            return domain(format!("edge {{{u},{v}}} out of range for {n} vertices"));
        }
        if u == v {
            return domain(format!("self-loop at vertex {u}"));
        }
        if self.has_edge(u, v) {
            return domain(format!("duplicate edge {{{u},{v}}}"));
        }
        self.insert_unchecked(u, v);
        Ok(())
    }

    pub fn empty(n: usize) -> Self {
        UndirectedGraph {
            n,
            edges: BTreeSet::new(),
            adj: vec![false; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_unchecked(u, v);
            }
        }
        g
    }

    fn insert_unchecked(&mut self, u: Vertex, v: Vertex) {
        let (a, b) = (u.min(v), u.max(v));
        self.edges.insert((a, b));
        self.adj[a * self.n + b] = true;
        self.adj[b * self.n + a] = true;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn neighbors(&self, u: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n).filter(move |&v| self.has_edge(u, v))
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() as u64 == binomial(self.n, 2)
    }

    /// Non-adjacent pairs `(a, b)`, `a < b`, in lexicographic order.
    pub fn non_edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n)
            .flat_map(move |a| (a + 1..self.n).map(move |b| (a, b)))
            .filter(move |&(a, b)| !self.has_edge(a, b))
    }

    pub fn permuted(&self, perm: &[Vertex]) -> Self {
        let mut g = Self::empty(self.n);
        for &(u, v) in &self.edges {
            g.insert_unchecked(perm[u], perm[v]);
        }
        g
    }

    /// Deletes `v` and shifts higher labels down by one.
    pub fn without_vertex(&self, v: Vertex) -> Self {
        let relabel = |x: Vertex| if x > v { x - 1 } else { x };
        let mut g = Self::empty(self.n - 1);
        for &(a, b) in &self.edges {
            if a != v && b != v {
                g.insert_unchecked(relabel(a), relabel(b));
            }
        }
        g
    }

    pub fn edges_within(&self, t: &Triple) -> usize {
        [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
            .iter()
            .filter(|&&(u, v)| self.has_edge(u, v))
            .count()
    }
}

/// A 3-uniform hypergraph with sorted triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSystem {
    n: usize,
    triples: BTreeSet<Triple>,
}

impl TripleSystem {
    pub fn new(n: usize, triples: impl IntoIterator<Item = Triple>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for mut t in triples {
            t.sort_unstable();
            if t[2] >= n {
                return domain(format!("triple {t:?} out of range for {n} vertices"));
            }
            if t[0] == t[1] || t[1] == t[2] {
                return domain(format!("triple {t:?} has repeated vertices"));
            }
            if !set.insert(t) {
                return domain(format!("duplicate triple {t:?}"));
            }
        }
        Ok(TripleSystem { n, triples: set })
    }

    pub fn empty(n: usize) -> Self {
        TripleSystem { n, triples: BTreeSet::new() }
    }

    pub fn complete(n: usize) -> Self {
        Self::filtered(n, |_| true)
    }

    fn filtered(n: usize, keep: impl FnMut(&Triple) -> bool) -> Self {
        TripleSystem {
            n,
            triples: three_subsets(n).filter(keep).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        let mut s = *t;
        s.sort_unstable();
        self.triples.contains(&s)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.triples.iter()
    }

    pub fn is_subset(&self, other: &TripleSystem) -> bool {
        self.triples.is_subset(&other.triples)
    }

    pub fn is_disjoint(&self, other: &TripleSystem) -> bool {
        self.triples.is_disjoint(&other.triples)
    }

    pub fn difference(&self, other: &TripleSystem) -> TripleSystem {
        TripleSystem {
            n: self.n,
            triples: self.triples.difference(&other.triples).copied().collect(),
        }
    }

    /// All triples of `K_n^(3)` not in `self`.
    pub fn complement(&self) -> TripleSystem {
        Self::filtered(self.n, |t| !self.triples.contains(t))
    }

    pub fn permuted(&self, perm: &[Vertex]) -> Self {
        TripleSystem {
            n: self.n,
            triples: self
                .triples
                .iter()
                .map(|t| {
                    let mut s = [perm[t[0]], perm[t[1]], perm[t[2]]];
                    s.sort_unstable();
                    s
                })
                .collect(),
        }
    }
}

/// Fon-der-Flaass triples: at most one arc inside, or a dominating vertex.
pub fn build_f(g: &OrientedGraph) -> TripleSystem {
    TripleSystem::filtered(g.n(), |t| {
        let (arcs, dominator) = g.triple_pattern(t);
        arcs <= 1 || dominator.is_some()
    })
}

/// Complement of [`build_f`]: at least two arcs and no dominating vertex.
pub fn build_cf(g: &OrientedGraph) -> TripleSystem {
    TripleSystem::filtered(g.n(), |t| {
        let (arcs, dominator) = g.triple_pattern(t);
        arcs >= 2 && dominator.is_none()
    })
}

/// Triples spanning at least two edges.
pub fn build_bf(g: &UndirectedGraph) -> TripleSystem {
    TripleSystem::filtered(g.n(), |t| g.edges_within(t) >= 2)
}

pub fn underlying(g: &OrientedGraph) -> UndirectedGraph {
    g.underlying()
}

/// `|triples| / C(n, 3)`, exact.
pub fn edge_density(t: &TripleSystem) -> Result<Rational> {
    if t.n() < 3 {
        return domain(format!("edge density needs at least 3 vertices, got {}", t.n()));
    }
    Ok(Rational::new(
        (t.len() as u64).into(),
        binomial(t.n(), 3).into(),
    ))
}

/// A 4-set inducing exactly a directed 4-cycle, listed in cycle order
/// starting from its smallest vertex.
pub fn has_induced_directed_c4(g: &OrientedGraph) -> Option<[Vertex; 4]> {
    four_subsets(g.n()).find_map(|s| induced_cycle(g, &s))
}

fn induced_cycle(g: &OrientedGraph, s: &[Vertex; 4]) -> Option<[Vertex; 4]> {
    let mut successor = [usize::MAX; 4];
    let mut arcs = 0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j && g.has_arc(s[i], s[j]) {
                arcs += 1;
                successor[i] = j;
            }
        }
    }
    if arcs != 4 {
        return None;
    }
    let mut order = [0usize; 4];
    let mut at = 0;
    for slot in order.iter_mut() {
        *slot = s[at];
        at = successor[at];
        if at == usize::MAX {
            return None;
        }
    }
    // 4 arcs with every vertex of out-degree one; returning to the start
    // after 4 steps with all visited forces a single 4-cycle
    let distinct: BTreeSet<_> = order.iter().collect();
    (at == 0 && distinct.len() == 4).then_some(order)
}

/// A 4-set containing none of the system's triples.
pub fn has_independent_4set(t: &TripleSystem) -> Result<Option<[Vertex; 4]>> {
    if t.n() < 4 {
        return domain(format!("independent 4-sets need at least 4 vertices, got {}", t.n()));
    }
    Ok(four_subsets(t.n()).find(|s| {
        (0..4).all(|skip| {
            let mut sub = [0; 3];
            let mut k = 0;
            for (i, &v) in s.iter().enumerate() {
                if i != skip {
                    sub[k] = v;
                    k += 1;
                }
            }
            !t.triples.contains(&sub)
        })
    }))
}

mod subsets {
    use super::{Triple, Vertex};

    pub fn three_subsets(n: usize) -> impl Iterator<Item = Triple> {
        (0..n).flat_map(move |a| {
            (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| [a, b, c]))
        })
    }

    pub fn four_subsets(n: usize) -> impl Iterator<Item = [Vertex; 4]> {
        three_subsets(n).flat_map(move |[a, b, c]| (c + 1..n).map(move |d| [a, b, c, d]))
    }
}

pub use subsets::three_subsets as all_triples;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;

    fn digraph(n: usize, arcs: &[(usize, usize)]) -> OrientedGraph {
        OrientedGraph::new(n, arcs.iter().copied()).unwrap()
    }

    fn triples(t: &TripleSystem) -> Vec<Triple> {
        t.iter().copied().collect()
    }

    #[test]
    fn build_f_examples() {
        assert_eq!(triples(&build_f(&digraph(3, &[(0, 1), (0, 2)]))), vec![[0, 1, 2]]);
        assert_eq!(triples(&build_f(&digraph(3, &[(0, 1)]))), vec![[0, 1, 2]]);
        assert!(build_f(&digraph(3, &[(0, 1), (2, 1)])).is_empty());
    }

    #[test]
    fn build_cf_examples() {
        assert_eq!(triples(&build_cf(&digraph(3, &[(0, 1), (2, 1)]))), vec![[0, 1, 2]]);
        assert!(build_cf(&digraph(3, &[(0, 1), (0, 2)])).is_empty());
        assert!(build_cf(&digraph(3, &[])).is_empty());
    }

    #[test]
    fn directed_triangle_is_a_cf_triple() {
        let g = digraph(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(build_cf(&g).len(), 1);
        assert_eq!(g.dominator(&[0, 1, 2]), None);
    }

    #[test]
    fn build_bf_examples() {
        let path = UndirectedGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(triples(&build_bf(&path)), vec![[0, 1, 2]]);
        let single = UndirectedGraph::new(3, [(0, 1)]).unwrap();
        assert!(build_bf(&single).is_empty());
        let k4_minus = UndirectedGraph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(build_bf(&k4_minus).len(), 4);
    }

    #[test]
    fn underlying_examples() {
        let g = digraph(3, &[(0, 1), (2, 1)]).underlying();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(digraph(3, &[]).underlying().edge_count(), 0);
        let tri = digraph(3, &[(0, 1), (1, 2), (2, 0)]).underlying();
        assert_eq!(tri, UndirectedGraph::complete(3));
    }

    #[test]
    fn edge_density_examples() {
        assert_eq!(edge_density(&TripleSystem::complete(4)).unwrap(), Rational::from_count(1));
        assert_eq!(edge_density(&TripleSystem::empty(5)).unwrap(), Rational::from_count(0));
        let seven = TripleSystem::new(5, all_triples(5).take(7)).unwrap();
        assert_eq!(edge_density(&seven).unwrap(), Rational::from_ratio(7, 10));
        assert!(edge_density(&TripleSystem::empty(2)).is_err());
    }

    #[test]
    fn induced_c4_examples() {
        let c4 = digraph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(has_induced_directed_c4(&c4), Some([0, 1, 2, 3]));
        let chorded = digraph(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        assert_eq!(has_induced_directed_c4(&chorded), None);
        assert_eq!(has_induced_directed_c4(&digraph(3, &[(0, 1), (1, 2), (2, 0)])), None);
    }

    #[test]
    fn induced_c4_witness_follows_arcs() {
        let c4 = digraph(5, &[(4, 2), (2, 0), (0, 3), (3, 4)]);
        assert_eq!(has_induced_directed_c4(&c4), Some([0, 3, 4, 2]));
        // two disjoint 2-paths have 4 arcs but are not a cycle
        let not_cycle = digraph(4, &[(0, 1), (1, 2), (3, 0), (3, 2)]);
        assert_eq!(has_induced_directed_c4(&not_cycle), None);
    }

    #[test]
    fn independent_4set_examples() {
        assert_eq!(has_independent_4set(&TripleSystem::empty(4)).unwrap(), Some([0, 1, 2, 3]));
        assert_eq!(has_independent_4set(&TripleSystem::complete(4)).unwrap(), None);
        assert!(has_independent_4set(&TripleSystem::empty(3)).is_err());
    }

    #[test]
    fn orientation_rejects_bad_arcs() {
        assert!(OrientedGraph::new(2, [(0, 1), (1, 0)]).is_err());
        assert!(OrientedGraph::new(2, [(0, 0)]).is_err());
        assert!(OrientedGraph::new(2, [(0, 1), (0, 1)]).is_err());
        assert!(OrientedGraph::new(2, [(0, 2)]).is_err());
        assert!(UndirectedGraph::new(2, [(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn triple_system_validation() {
        assert!(TripleSystem::new(3, [[0, 1, 1]]).is_err());
        assert!(TripleSystem::new(3, [[0, 1, 3]]).is_err());
        assert!(TripleSystem::new(3, [[2, 1, 0], [0, 1, 2]]).is_err());
        let t = TripleSystem::new(4, [[3, 1, 0]]).unwrap();
        assert!(t.contains(&[0, 3, 1]));
    }

    #[test]
    fn code_round_trip_counts() {
        let mut seen = BTreeSet::new();
        for code in 0..27 {
            seen.insert(OrientedGraph::from_code(3, code).arcs().collect::<Vec<_>>());
        }
        assert_eq!(seen.len(), 27);
        assert_eq!(
            OrientedGraph::from_code(3, 1 + 2 * 3).arcs().collect::<Vec<_>>(),
            vec![(0, 1), (2, 0)]
        );
    }

    #[test]
    fn without_vertex_relabels() {
        let g = UndirectedGraph::new(4, [(0, 2), (1, 3), (2, 3)]).unwrap();
        let h = g.without_vertex(1);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }
}
