//! Folded subgroup graphs.
//!
//! A [`CoreGraph`] is the Stallings graph of a finitely generated subgroup:
//! the core (every vertex of degree at least two) plus, when the basepoint
//! lies outside it, the spur path joining the basepoint to the core.
//! Vertices are numbered in breadth-first order from the basepoint, visiting
//! letters in alphabet order, so equal subgroups give equal graphs.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::word::{Alphabet, CyclicWord, Letter, Word};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoreGraph {
    alphabet: Alphabet,
    /// `adj[v * 2n + letter]` is the end of the edge leaving `v` with that label.
    adj: Vec<Option<u32>>,
    in_core: Vec<bool>,
}

impl CoreGraph {
    /// Folds the wedge of generator loops and trims it to the core plus spur.
    pub fn from_generators(alphabet: Alphabet, gens: &[Word]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::NoGenerators);
        }
        let mut folder = Folder::new(alphabet.size());
        let base = folder.add_vertex();
        for g in gens.iter().filter(|g| !g.is_empty()) {
            let mut cur = base;
            let letters = g.letters();
            for (i, &l) in letters.iter().enumerate() {
                let next = if i + 1 == letters.len() { base } else { folder.add_vertex() };
                folder.add_edge(cur, l, next);
                cur = next;
            }
        }
        let (adj, count, base) = folder.finish(base);
        let graph = Self::assemble(alphabet, adj, count, base);
        if graph.vertex_count() == 1 && graph.degree(0) == 0 {
            return Err(Error::TrivialSubgroup);
        }
        Ok(graph)
    }

    /// Trims hanging trees, marks the core and relabels from `base`.
    fn assemble(alphabet: Alphabet, adj: Vec<Option<u32>>, count: usize, base: usize) -> Self {
        let stride = alphabet.size();
        let mut adj = adj;
        let alive = trim(&mut adj, stride, count, Some(base));
        let mut core_adj = adj.clone();
        let core = trim(&mut core_adj, stride, count, None);
        let in_core: Vec<bool> = (0..count).map(|v| alive[v] && core[v]).collect();
        relabel(alphabet, &adj, &in_core, base)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.in_core.len()
    }

    pub fn basepoint(&self) -> usize {
        0
    }

    pub fn is_core(&self, v: usize) -> bool {
        self.in_core[v]
    }

    pub fn core_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|&v| self.in_core[v])
    }

    pub fn follow(&self, v: usize, l: Letter) -> Option<usize> {
        self.adj[v * self.alphabet.size() + l.index()].map(|t| t as usize)
    }

    /// Like [`follow`](Self::follow) but only along edges of the core.
    pub fn core_follow(&self, v: usize, l: Letter) -> Option<usize> {
        self.follow(v, l).filter(|&t| self.in_core[v] && self.in_core[t])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.alphabet.letters().filter(|&l| self.follow(v, l).is_some()).count()
    }

    /// End vertex of the path labelled `w` from `v`, if it exists.
    pub fn read(&self, v: usize, w: &Word) -> Option<usize> {
        w.letters().iter().try_fold(v, |cur, &l| self.follow(cur, l))
    }

    pub fn readable_from(&self, v: usize, w: &Word) -> bool {
        self.read(v, w).is_some()
    }

    /// Membership: `w` reads a closed loop at the basepoint.
    pub fn contains(&self, w: &Word) -> bool {
        self.read(0, w) == Some(0)
    }

    /// True if some conjugate of `g` lies in the subgroup.
    pub fn is_conjugate_into(&self, g: &CyclicWord) -> bool {
        self.core_vertices().any(|v| self.read(v, g.word()) == Some(v))
    }

    /// Every edge once, as `(source, positive letter, target)`.
    pub fn edges(&self) -> Vec<(usize, Letter, usize)> {
        let mut out = Vec::new();
        for v in 0..self.vertex_count() {
            for l in self.alphabet.generators() {
                if let Some(t) = self.follow(v, l) {
                    out.push((v, l, t));
                }
            }
        }
        out
    }

    /// First Betti number, the rank of the subgroup.
    pub fn rank(&self) -> usize {
        self.edges().len() + 1 - self.vertex_count()
    }

    pub fn is_whole_group(&self) -> bool {
        self.core_vertices().count() == 1 && self.core_vertices().all(|v| self.degree(v) == self.alphabet.size())
    }

    /// Labels of shortest paths from the basepoint, in breadth-first order.
    pub fn spanning_paths(&self) -> Vec<Word> {
        let mut paths: Vec<Option<Word>> = vec![None; self.vertex_count()];
        paths[0] = Some(Word::empty());
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let pv = paths[v].clone().unwrap_or_default();
            for l in self.alphabet.letters() {
                if let Some(t) = self.follow(v, l) {
                    if paths[t].is_none() {
                        paths[t] = Some(pv.with(l));
                        queue.push_back(t);
                    }
                }
            }
        }
        paths.into_iter().map(Option::unwrap_or_default).collect()
    }

    /// Label of a shortest path from the basepoint to `v`.
    pub fn path_to(&self, v: usize) -> Word {
        self.spanning_paths().swap_remove(v)
    }

    /// A free basis read off a breadth-first spanning tree.
    pub fn basis(&self) -> Vec<Word> {
        let paths = self.spanning_paths();
        self.edges()
            .into_iter()
            .filter_map(|(u, l, v)| {
                let through = paths[u].mul(&Word::letter(l));
                let tree = through == paths[v] || paths[v].mul(&Word::letter(l.inverse())) == paths[u];
                (!tree).then(|| through.mul(&paths[v].inverse()))
            })
            .collect()
    }

    /// The core alone, based at the core vertex nearest the basepoint,
    /// together with the spur label `s`. The returned graph is the graph of
    /// `s^-1 A s`.
    pub fn rebased(&self) -> (CoreGraph, Word) {
        let paths = self.spanning_paths();
        let start = self
            .core_vertices()
            .min_by(|&a, &b| paths[a].len().cmp(&paths[b].len()).then(a.cmp(&b)))
            .expect("nontrivial subgroup has a core");
        let mut adj = self.adj.clone();
        let stride = self.alphabet.size();
        for v in 0..self.vertex_count() {
            for l in 0..stride {
                if let Some(t) = adj[v * stride + l] {
                    if !self.in_core[v] || !self.in_core[t as usize] {
                        adj[v * stride + l] = None;
                    }
                }
            }
        }
        let graph = relabel(self.alphabet, &adj, &self.in_core, start);
        (graph, paths[start].clone())
    }
}

impl fmt::Display for CoreGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (u, l, v) in self.edges() {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            write!(f, "{u}{l}{v}")?;
        }
        Ok(())
    }
}

/// Union-find folding of a labelled graph.
struct Folder {
    stride: usize,
    parent: Vec<usize>,
    adj: Vec<Vec<Option<usize>>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn new(stride: usize) -> Self {
        Folder { stride, parent: Vec::new(), adj: Vec::new(), pending: Vec::new() }
    }

    fn add_vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.adj.push(vec![None; self.stride]);
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn add_edge(&mut self, u: usize, l: Letter, v: usize) {
        self.set(u, l.index(), v);
        self.set(v, l.inverse().index(), u);
        while let Some((x, y)) = self.pending.pop() {
            self.merge(x, y);
        }
    }

    fn set(&mut self, u: usize, l: usize, v: usize) {
        let u = self.find(u);
        let v = self.find(v);
        match self.adj[u][l] {
            Some(w) => {
                let w = self.find(w);
                if w != v {
                    self.pending.push((w, v));
                }
            }
            None => self.adj[u][l] = Some(v),
        }
    }

    fn merge(&mut self, x: usize, y: usize) {
        let x = self.find(x);
        let y = self.find(y);
        if x == y {
            return;
        }
        self.parent[y] = x;
        let row = core::mem::take(&mut self.adj[y]);
        for (l, target) in row.into_iter().enumerate() {
            if let Some(z) = target {
                self.set(x, l, z);
            }
        }
    }

    /// Compacts representatives; returns adjacency, vertex count and base.
    fn finish(mut self, base: usize) -> (Vec<Option<u32>>, usize, usize) {
        let n = self.parent.len();
        let mut index = vec![usize::MAX; n];
        let mut count = 0;
        for (v, slot) in index.iter_mut().enumerate() {
            if self.parent[v] == v {
                *slot = count;
                count += 1;
            }
        }
        let mut adj = vec![None; count * self.stride];
        for v in 0..n {
            if self.parent[v] != v {
                continue;
            }
            for l in 0..self.stride {
                if let Some(t) = self.adj[v][l] {
                    let t = self.find(t);
                    adj[index[v] * self.stride + l] = Some(index[t] as u32);
                }
            }
        }
        let base = index[self.find(base)];
        (adj, count, base)
    }
}

/// Repeatedly deletes degree-one vertices other than `keep`. Returns the
/// surviving vertices. Isolated vertices are deleted too, except `keep`.
fn trim(adj: &mut [Option<u32>], stride: usize, count: usize, keep: Option<usize>) -> Vec<bool> {
    let degree = |adj: &[Option<u32>], v: usize| (0..stride).filter(|&l| adj[v * stride + l].is_some()).count();
    let mut alive = vec![true; count];
    let mut queue: Vec<usize> = (0..count).filter(|&v| Some(v) != keep && degree(adj, v) <= 1).collect();
    while let Some(v) = queue.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for l in 0..stride {
            if let Some(t) = adj[v * stride + l].take() {
                let t = t as usize;
                adj[t * stride + (l ^ 1)] = None;
                if alive[t] && Some(t) != keep && degree(adj, t) <= 1 {
                    queue.push(t);
                }
            }
        }
    }
    alive
}

/// Breadth-first renumbering of the component of `base`.
fn relabel(alphabet: Alphabet, adj: &[Option<u32>], in_core: &[bool], base: usize) -> CoreGraph {
    let stride = alphabet.size();
    let count = in_core.len();
    let mut index = vec![usize::MAX; count];
    let mut order = vec![base];
    index[base] = 0;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for l in 0..stride {
            if let Some(t) = adj[v * stride + l] {
                let t = t as usize;
                if index[t] == usize::MAX {
                    index[t] = order.len();
                    order.push(t);
                }
            }
        }
    }
    let mut new_adj = vec![None; order.len() * stride];
    for (i, &v) in order.iter().enumerate() {
        for l in 0..stride {
            if let Some(t) = adj[v * stride + l] {
                new_adj[i * stride + l] = Some(index[t as usize] as u32);
            }
        }
    }
    CoreGraph {
        alphabet,
        adj: new_adj,
        in_core: order.iter().map(|&v| in_core[v]).collect(),
    }
}

/// A vertex of a fiber product: one vertex from each factor.
pub type PairVertex = (usize, usize);

/// A connected component of a fiber product with at least one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberComponent {
    pub vertices: Vec<PairVertex>,
    /// Edges once each, labelled by positive letters.
    pub edges: Vec<(PairVertex, Letter, PairVertex)>,
    pub is_diagonal: bool,
}

impl FiberComponent {
    pub fn is_acyclic(&self) -> bool {
        self.edges.len() + 1 == self.vertices.len()
    }

    fn neighbours(&self) -> Vec<Vec<(usize, Letter)>> {
        let pos = |p: &(usize, usize)| self.vertices.binary_search(p).expect("vertex of component");
        let mut nb = vec![Vec::new(); self.vertices.len()];
        for (u, l, v) in &self.edges {
            let (u, v) = (pos(u), pos(v));
            nb[u].push((v, *l));
            nb[v].push((u, l.inverse()));
        }
        nb
    }

    /// Longest path in edges; meaningful for trees.
    pub fn diameter(&self) -> usize {
        let nb = self.neighbours();
        let far = |start: usize| {
            let mut dist = vec![usize::MAX; nb.len()];
            dist[start] = 0;
            let mut queue = VecDeque::from([start]);
            let mut best = (0, start);
            while let Some(v) = queue.pop_front() {
                if dist[v] > best.0 {
                    best = (dist[v], v);
                }
                for &(t, _) in &nb[v] {
                    if dist[t] == usize::MAX {
                        dist[t] = dist[v] + 1;
                        queue.push_back(t);
                    }
                }
            }
            best
        };
        let (_, x) = far(0);
        far(x).0
    }

    /// Cyclically reduced label of a loop through one non-tree edge, if any.
    pub fn cycle_label(&self) -> Option<Word> {
        let nb = self.neighbours();
        let mut path: Vec<Option<Word>> = vec![None; nb.len()];
        path[0] = Some(Word::empty());
        let mut queue = VecDeque::from([0usize]);
        let mut tree_edges = Vec::new();
        while let Some(v) = queue.pop_front() {
            for &(t, l) in &nb[v] {
                if path[t].is_none() {
                    path[t] = Some(path[v].as_ref()?.mul(&Word::letter(l)));
                    tree_edges.push((v.min(t), v.max(t), l.generator_index()));
                    queue.push_back(t);
                }
            }
        }
        let pos = |p: &(usize, usize)| self.vertices.binary_search(p).expect("vertex of component");
        let mut used = tree_edges.clone();
        for (u, l, v) in &self.edges {
            let (a, b) = (pos(u), pos(v));
            let key = (a.min(b), a.max(b), l.generator_index());
            if let Some(i) = used.iter().position(|e| *e == key) {
                used.swap_remove(i);
                continue;
            }
            let loop_word = path[a].as_ref()?.mul(&Word::letter(*l)).mul(&path[b].as_ref()?.inverse());
            return CyclicWord::new(&loop_word).map(|c| c.word().clone());
        }
        None
    }
}

/// Components with an edge of the product of the cores of `g1` and `g2`.
/// When the two graphs are equal the diagonal component is flagged.
pub fn fiber_product(g1: &CoreGraph, g2: &CoreGraph) -> Vec<FiberComponent> {
    fiber_product_impl(g1, g2, g1 == g2)
}

fn fiber_product_impl(g1: &CoreGraph, g2: &CoreGraph, same: bool) -> Vec<FiberComponent> {
    let alphabet = g1.alphabet();
    let n2 = g2.vertex_count();
    let id = |u: usize, v: usize| u * n2 + v;
    let mut seen = vec![false; g1.vertex_count() * n2];
    let mut out = Vec::new();
    for u0 in g1.core_vertices() {
        for v0 in g2.core_vertices() {
            if seen[id(u0, v0)] {
                continue;
            }
            seen[id(u0, v0)] = true;
            let mut vertices = vec![(u0, v0)];
            let mut edges = Vec::new();
            let mut queue = VecDeque::from([(u0, v0)]);
            while let Some((u, v)) = queue.pop_front() {
                for l in alphabet.letters() {
                    let (Some(u2), Some(v2)) = (g1.core_follow(u, l), g2.core_follow(v, l)) else {
                        continue;
                    };
                    if !l.is_inverse() {
                        edges.push(((u, v), l, (u2, v2)));
                    }
                    if !seen[id(u2, v2)] {
                        seen[id(u2, v2)] = true;
                        vertices.push((u2, v2));
                        queue.push_back((u2, v2));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            vertices.sort_unstable();
            edges.sort_unstable();
            let is_diagonal = same && vertices.iter().any(|(u, v)| u == v);
            out.push(FiberComponent { vertices, edges, is_diagonal });
        }
    }
    out
}

/// A nontrivial element conjugate into two subgroups of the system in a
/// way forbidden by malnormality. `first == second` for a self-intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalnormalityWitness {
    pub first: usize,
    pub second: usize,
    pub element: Word,
}

impl fmt::Display for MalnormalityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} lies in conjugates of subgroups {} and {}", self.element, self.first, self.second)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MalnormalVerdict {
    Ok,
    Witness(MalnormalityWitness),
}

/// Components that must be finite trees in a malnormal system, tagged
/// with the pair of subgroup indices.
fn constrained_components(graphs: &[CoreGraph]) -> Vec<(usize, usize, FiberComponent)> {
    let mut out = Vec::new();
    for i in 0..graphs.len() {
        for j in i..graphs.len() {
            for comp in fiber_product_impl(&graphs[i], &graphs[j], i == j) {
                if !comp.is_diagonal {
                    out.push((i, j, comp));
                }
            }
        }
    }
    out
}

pub fn check_malnormal_system(graphs: &[CoreGraph]) -> MalnormalVerdict {
    for (first, second, comp) in constrained_components(graphs) {
        if let Some(element) = comp.cycle_label() {
            return MalnormalVerdict::Witness(MalnormalityWitness { first, second, element });
        }
    }
    MalnormalVerdict::Ok
}

/// Largest diameter of an intersection of two distinct subgroup trees.
#[allow(non_snake_case)]
pub fn compute_L(graphs: &[CoreGraph]) -> Result<usize> {
    let mut l = 0;
    for (first, second, comp) in constrained_components(graphs) {
        if let Some(element) = comp.cycle_label() {
            return Err(Error::NotMalnormal(MalnormalityWitness { first, second, element }));
        }
        l = l.max(comp.diameter());
    }
    Ok(l)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootClosedVerdict {
    NoCounterexample,
    /// `element^exponent` lies in the subgroup but `element` does not.
    Witness { element: Word, exponent: usize },
}

/// Searches cyclically reduced `c` with `|c| <= max_len` and exponents
/// `2..=max_exp` for a loop `c^k` at some vertex not closed by `c` itself.
pub fn is_root_closed_bounded(g: &CoreGraph, max_len: usize, max_exp: usize) -> Result<RootClosedVerdict> {
    if g.is_whole_group() {
        return Err(Error::WholeGroup);
    }
    let alphabet = g.alphabet();
    let paths = g.spanning_paths();
    for len in 1..=max_len {
        for c in alphabet.cyclically_reduced_words(len) {
            for (v, p) in paths.iter().enumerate() {
                if g.read(v, &c) == Some(v) {
                    continue;
                }
                for k in 2..=max_exp {
                    if g.read(v, &c.pow(k)) == Some(v) {
                        let element = p.mul(&c).mul(&p.inverse());
                        return Ok(RootClosedVerdict::Witness { element, exponent: k });
                    }
                }
            }
        }
    }
    Ok(RootClosedVerdict::NoCounterexample)
}
