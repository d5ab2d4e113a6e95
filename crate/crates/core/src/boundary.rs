//! The pair `(F_n, A)`: the separating word set `C`, the strata `S_k`,
//! peripherality, and cylinder sets of positioned paths.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::stallings::{compute_L, CoreGraph};
use crate::word::{Alphabet, CyclicWord, Word};
use crate::{Error, Result};

/// A malnormal subgroup system with its derived data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupSystem {
    alphabet: Alphabet,
    graphs: Vec<CoreGraph>,
    cores: Vec<CoreGraph>,
    conjugators: Vec<Word>,
    l: usize,
    c_set: BTreeSet<Word>,
    fingerprint: u64,
}

impl SubgroupSystem {
    /// Validates malnormality, then computes `L` and `C`.
    pub fn build(alphabet: Alphabet, graphs: Vec<CoreGraph>) -> Result<Self> {
        if graphs.iter().any(CoreGraph::is_whole_group) {
            return Err(Error::WholeGroup);
        }
        let (cores, conjugators): (Vec<_>, Vec<_>) = graphs.iter().map(CoreGraph::rebased).unzip();
        let l = compute_L(&cores)?;
        let c_set: BTreeSet<Word> = alphabet
            .reduced_words(l + 2)
            .into_iter()
            .filter(|w| !readable_in(&cores, w))
            .collect();
        let fingerprint = fingerprint(alphabet, l, &cores, &c_set);
        Ok(SubgroupSystem { alphabet, graphs, cores, conjugators, l, c_set, fingerprint })
    }

    pub fn from_generators(alphabet: Alphabet, subgroups: &[Vec<Word>]) -> Result<Self> {
        let graphs = subgroups
            .iter()
            .map(|gens| CoreGraph::from_generators(alphabet, gens))
            .collect::<Result<Vec<_>>>()?;
        Self::build(alphabet, graphs)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn graphs(&self) -> &[CoreGraph] {
        &self.graphs
    }

    /// Cores based at a core vertex; `cores()[i]` is the graph of
    /// `s^-1 A_i s` with `s = conjugators()[i]`.
    pub fn cores(&self) -> &[CoreGraph] {
        &self.cores
    }

    pub fn conjugators(&self) -> &[Word] {
        &self.conjugators
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// The intersection diameter bound `L`.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Length of the words in `C`, which is `L + 2`.
    pub fn cylinder_length(&self) -> usize {
        self.l + 2
    }

    pub fn c_words(&self) -> &BTreeSet<Word> {
        &self.c_set
    }

    /// Stable 64-bit hash of rank, `L`, the cores and `C`.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// True if `w` labels a path from some vertex of some core.
    pub fn readable_in_cores(&self, w: &Word) -> bool {
        readable_in(&self.cores, w)
    }

    /// First `(core index, vertex)` from which `w` can be read.
    pub fn reading(&self, w: &Word) -> Option<(usize, usize)> {
        self.cores.iter().enumerate().find_map(|(i, g)| g.core_vertices().find(|&v| g.readable_from(v, w)).map(|v| (i, v)))
    }

    /// True if `w` has a subword in `C`.
    pub fn in_cyl_c(&self, w: &Word) -> bool {
        let m = self.cylinder_length();
        w.len() >= m && (0..=w.len() - m).any(|i| self.c_set.contains(&w.subword(i, m)))
    }

    /// True for the identity and for elements conjugate into some subgroup.
    pub fn is_peripheral(&self, g: &Word) -> bool {
        match CyclicWord::new(g) {
            None => true,
            Some(c) => self.cores.iter().any(|core| core.is_conjugate_into(&c)),
        }
    }

    /// All reduced words of length `k` without a subword in `C`, sorted.
    pub fn stratum(&self, k: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut buf = Word::empty();
        self.grow_stratum(k, &mut buf, &mut out);
        out
    }

    fn grow_stratum(&self, k: usize, buf: &mut Word, out: &mut Vec<Word>) {
        if buf.len() == k {
            out.push(buf.clone());
            return;
        }
        let m = self.cylinder_length();
        for l in self.alphabet.letters() {
            if buf.last() == Some(l.inverse()) {
                continue;
            }
            let next = buf.with(l);
            if next.len() >= m && self.c_set.contains(&next.suffix(m)) {
                continue;
            }
            let mut next = next;
            self.grow_stratum(k, &mut next, out);
        }
    }

    /// The half of `S_k` whose words are not larger than their inverses.
    pub fn stratum_half(&self, k: usize) -> Vec<Word> {
        self.stratum(k).into_iter().filter(|w| *w <= w.inverse()).collect()
    }
}

fn readable_in(cores: &[CoreGraph], w: &Word) -> bool {
    cores.iter().any(|g| g.core_vertices().any(|v| g.readable_from(v, w)))
}

fn fingerprint(alphabet: Alphabet, l: usize, cores: &[CoreGraph], c_set: &BTreeSet<Word>) -> u64 {
    struct Fnv(u64);
    impl fmt::Write for Fnv {
        fn write_str(&mut self, s: &str) -> fmt::Result {
            for b in s.bytes() {
                self.0 ^= u64::from(b);
                self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
            }
            Ok(())
        }
    }
    let mut h = Fnv(0xcbf2_9ce4_8422_2325);
    let _ = fmt::write(&mut h, format_args!("{};{};", alphabet.rank(), l));
    for g in cores {
        let _ = fmt::write(&mut h, format_args!("{g};"));
    }
    for w in c_set {
        let _ = fmt::write(&mut h, format_args!("{w},"));
    }
    h.0
}

/// A flip-canonical nonempty word: the smaller of a word and its inverse.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CylinderKey(Word);

impl CylinderKey {
    pub fn new(w: &Word) -> Option<Self> {
        (!w.is_empty()).then(|| CylinderKey(w.flip_canonical()))
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for CylinderKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The geodesic edge path `origin · γ_label` in the Cayley tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PositionedPath {
    pub origin: Word,
    pub label: Word,
}

impl PositionedPath {
    pub fn new(origin: Word, label: Word) -> Result<Self> {
        if label.is_empty() {
            return Err(Error::EmptyPath);
        }
        Ok(PositionedPath { origin, label })
    }

    pub fn start(&self) -> Word {
        self.origin.clone()
    }

    pub fn end(&self) -> Word {
        self.origin.mul(&self.label)
    }

    /// The same path traversed from the other end.
    pub fn reversed(&self) -> Self {
        PositionedPath { origin: self.end(), label: self.label.inverse() }
    }

    /// Unordered endpoint pair; equal for a path and its reverse.
    pub fn endpoints(&self) -> (Word, Word) {
        let (s, e) = (self.start(), self.end());
        if s <= e {
            (s, e)
        } else {
            (e, s)
        }
    }
}

impl fmt::Display for PositionedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·{}", self.origin, self.label)
    }
}

/// Tree distance between vertices of the Cayley tree.
pub fn distance(x: &Word, y: &Word) -> usize {
    x.inverse().mul(y).len()
}

fn on_segment(z: &Word, x: &Word, y: &Word) -> bool {
    distance(x, z) + distance(z, y) == distance(x, y)
}

/// Endpoints `(x, y)` of a geodesic segment containing both paths, if one
/// exists. The segment is the convex hull of the four endpoints.
fn common_segment(p: &PositionedPath, q: &PositionedPath) -> Option<(Word, Word)> {
    let pts = [p.start(), p.end(), q.start(), q.end()];
    let mut best: Option<(usize, usize, usize)> = None;
    for i in 0..4 {
        for j in i + 1..4 {
            if pts.iter().all(|z| on_segment(z, &pts[i], &pts[j])) {
                let d = distance(&pts[i], &pts[j]);
                if best.is_none_or(|b| d > b.0) {
                    best = Some((d, i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (pts[i].clone(), pts[j].clone()))
}

/// `C(p) ∩ C(q)` is nonempty iff both paths lie on one geodesic line.
pub fn cylinders_intersect(p: &PositionedPath, q: &PositionedPath) -> bool {
    common_segment(p, q).is_some()
}

/// `C(inner) ⊆ C(outer)` iff the path `outer` lies on the path `inner`.
pub fn cylinder_contains(outer: &PositionedPath, inner: &PositionedPath) -> bool {
    let (s, e) = (inner.start(), inner.end());
    on_segment(&outer.start(), &s, &e) && on_segment(&outer.end(), &s, &e)
}

/// All `2n - 1` one-letter extensions of `p` beyond its end.
fn extend_end(alphabet: Alphabet, p: &PositionedPath) -> Vec<PositionedPath> {
    alphabet
        .letters()
        .filter(|&l| p.label.last() != Some(l.inverse()))
        .map(|l| PositionedPath { origin: p.origin.clone(), label: p.label.with(l) })
        .collect()
}

/// Decides `C(path) ⊆ ⋃ C(family)` by refining `path` until every piece is
/// inside or disjoint from each member.
pub fn covers(alphabet: Alphabet, family: &[PositionedPath], path: &PositionedPath) -> bool {
    if family.iter().any(|d| cylinder_contains(d, path)) {
        return true;
    }
    let Some(delta) = family.iter().find(|d| cylinders_intersect(d, path)) else {
        return false;
    };
    let (x, y) = common_segment(delta, path).expect("intersecting cylinders share a segment");
    let end = path.end();
    let pieces = if end != x && end != y {
        extend_end(alphabet, path)
    } else {
        extend_end(alphabet, &path.reversed())
    };
    pieces.iter().all(|piece| covers(alphabet, family, piece))
}

const REFINEMENT_CAP: usize = 100_000;

/// Replaces a finite family of paths with labels in `Cyl(C)` by a family
/// with pairwise disjoint cylinders and the same union.
pub fn decompose_compact_open(sys: &SubgroupSystem, paths: &[PositionedPath]) -> Result<Vec<PositionedPath>> {
    for p in paths {
        if p.label.is_empty() {
            return Err(Error::EmptyPath);
        }
        if !sys.in_cyl_c(&p.label) {
            return Err(Error::OutsideCylC(p.label.clone()));
        }
    }
    let alphabet = sys.alphabet();
    let mut family: Vec<PositionedPath> = paths.to_vec();
    for _ in 0..REFINEMENT_CAP {
        absorb(&mut family);
        let pair = (0..family.len())
            .flat_map(|i| (i + 1..family.len()).map(move |j| (i, j)))
            .find(|&(i, j)| cylinders_intersect(&family[i], &family[j]));
        let Some((i, j)) = pair else {
            family.sort();
            return Ok(family);
        };
        let q = family.swap_remove(j);
        let p = family.swap_remove(i);
        family.extend(split_pair(alphabet, &p, &q));
    }
    Err(Error::NoConvergence(REFINEMENT_CAP))
}

/// Drops every path whose cylinder lies in another member's cylinder.
fn absorb(family: &mut Vec<PositionedPath>) {
    let mut keep: Vec<PositionedPath> = Vec::with_capacity(family.len());
    'outer: for (i, p) in family.iter().enumerate() {
        for (j, q) in family.iter().enumerate() {
            if i == j || !cylinder_contains(q, p) {
                continue;
            }
            let same = cylinder_contains(p, q);
            if !same || j < i {
                continue 'outer;
            }
        }
        keep.push(p.clone());
    }
    *family = keep;
}

/// Refines two intersecting paths, neither containing the other, into
/// paths running from an extreme end of their common segment to distance
/// one beyond it, plus the segment itself.
fn split_pair(alphabet: Alphabet, p: &PositionedPath, q: &PositionedPath) -> Vec<PositionedPath> {
    let (x, y) = common_segment(p, q).expect("intersecting pair");
    let hull = PositionedPath { origin: x.clone(), label: x.inverse().mul(&y) };
    let mut out = alloc::vec![hull.clone()];
    for path in [p, q] {
        let (from, along) = if path.start() == x || path.end() == x {
            (x.clone(), hull.clone())
        } else {
            (y.clone(), hull.reversed())
        };
        let own = path.label.len();
        let h = &along.label;
        for pos in own..h.len() {
            let stem = h.prefix(pos);
            for l in alphabet.letters() {
                if l == h.letters()[pos] || stem.last() == Some(l.inverse()) {
                    continue;
                }
                out.push(PositionedPath { origin: from.clone(), label: stem.with(l) });
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
