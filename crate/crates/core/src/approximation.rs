//! Approximation of relative currents by rational currents.
//!
//! A scaled k-extension is read as edge weights on the graph whose vertices
//! are words of length `k - 1` and whose edges are words of length `k`.
//! Cycles of weight at least one are peeled off as rational currents until
//! none is left.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::boundary::SubgroupSystem;
use crate::currents::{eval_rational, extend_k, CurrentTable, ExtendOptions, RationalCurrentSum, SignedTable};
use crate::word::{Alphabet, CyclicWord, Word};
use crate::{Error, Rational, Result};

/// Largest exponent materialized by [`martin_threshold`].
const MAX_THRESHOLD_EXPONENT: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Threshold {
    pub value: BigUint,
    /// False when `n < 3`; the value is still the formula's.
    pub hypothesis_met: bool,
}

/// `P = 2n (2n - 1)^(2n (2n - 1)^(k - 2))`.
pub fn martin_threshold(n: usize, k: usize) -> Result<Threshold> {
    if k < 2 {
        return Err(Error::DepthTooSmall { depth: k, min: 2 });
    }
    if n == 0 {
        return Err(Error::InvalidRank(n));
    }
    let base = 2 * n - 1;
    let exponent = BigUint::from(2 * n) * num_traits::pow(BigUint::from(base), k - 2);
    let exponent = usize::try_from(&exponent)
        .ok()
        .filter(|&e| e <= MAX_THRESHOLD_EXPONENT)
        .ok_or(Error::ThresholdTooLarge)?;
    let value = BigUint::from(2 * n) * num_traits::pow(BigUint::from(base), exponent);
    Ok(Threshold { value, hypothesis_met: n >= 3 })
}

/// Weighted graph on reduced words of length `k - 1`; the edge `w` of
/// length `k` runs from its prefix to its suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionGraph {
    alphabet: Alphabet,
    k: usize,
    weights: BTreeMap<Word, Rational>,
}

impl TransitionGraph {
    /// Edge weights `scale · table(w)` for every word `w` of length `k`.
    pub fn from_table(table: &SignedTable, k: usize, scale: &Rational) -> Result<Self> {
        if k < 2 {
            return Err(Error::DepthTooSmall { depth: k, min: 2 });
        }
        if k > table.depth() {
            return Err(Error::DepthTooLarge { have: table.depth(), want: k });
        }
        let alphabet = table.alphabet();
        let weights = alphabet
            .reduced_words(k)
            .into_iter()
            .map(|w| {
                let v = table.get(&w).cloned().unwrap_or_default() * scale;
                (w, v)
            })
            .collect();
        Ok(TransitionGraph { alphabet, k, weights })
    }

    /// Edge weights given directly; missing edges are zero.
    pub fn from_weights(alphabet: Alphabet, k: usize, weights: impl IntoIterator<Item = (Word, Rational)>) -> Result<Self> {
        if k < 2 {
            return Err(Error::DepthTooSmall { depth: k, min: 2 });
        }
        let mut all: BTreeMap<Word, Rational> = alphabet.reduced_words(k).into_iter().map(|w| (w, Rational::zero())).collect();
        for (w, v) in weights {
            match all.get_mut(&w) {
                Some(slot) => *slot = v,
                None => return Err(Error::NotInDomain(w)),
            }
        }
        Ok(TransitionGraph { alphabet, k, weights: all })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weight(&self, w: &Word) -> Option<&Rational> {
        self.weights.get(w)
    }

    pub fn weights(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.weights.iter()
    }

    pub fn total_mass(&self) -> Rational {
        self.weights.values().sum()
    }

    /// Counts of `η_[α]` on the edges, nonzero entries only.
    fn cycle_counts(&self, alpha: &CyclicWord) -> Vec<(Word, usize)> {
        self.weights
            .keys()
            .filter_map(|w| {
                let c = eval_rational(alpha.word(), w).expect("cycles are nontrivial");
                (c > 0).then(|| (w.clone(), c))
            })
            .collect()
    }

    /// Largest `t` with `weight - t · η_[α] >= 0` on every edge.
    pub fn multiplicity(&self, alpha: &CyclicWord) -> usize {
        let mut t: Option<Rational> = None;
        for (w, c) in self.cycle_counts(alpha) {
            let ratio = (&self.weights[&w] / Rational::from_integer(c.into())).floor();
            t = Some(match t {
                Some(cur) if cur <= ratio => cur,
                _ => ratio,
            });
        }
        t.filter(|v| v.is_positive())
            .and_then(|v| usize::try_from(v.to_integer()).ok())
            .unwrap_or(0)
    }

    /// Subtracts `t · η_[α]` from the edge weights.
    pub fn subtract(&mut self, alpha: &CyclicWord, t: usize) {
        for (w, c) in self.cycle_counts(alpha) {
            let slot = self.weights.get_mut(&w).expect("edge exists");
            *slot -= Rational::from_integer((c * t).into());
        }
    }
}

/// Shortest cycle, ties broken by the cyclic word, among cycles on edges of
/// weight at least one that can be subtracted at least once. Returns the
/// cyclic word read along the cycle and the largest multiple that keeps
/// every weight nonnegative.
pub fn extract_cycle(graph: &TransitionGraph) -> Option<(CyclicWord, usize)> {
    let vertices = graph.alphabet.reduced_words(graph.k - 1);
    let index: BTreeMap<&Word, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let one = Rational::one();
    let mut out_edges: Vec<Vec<(usize, crate::word::Letter)>> = vec![Vec::new(); vertices.len()];
    for (w, v) in &graph.weights {
        if *v >= one {
            let from = index[&w.prefix(graph.k - 1)];
            let to = index[&w.suffix(graph.k - 1)];
            out_edges[from].push((to, w.last().expect("edge words are nonempty")));
        }
    }
    prune_acyclic(&mut out_edges);
    if out_edges.iter().all(Vec::is_empty) {
        return None;
    }
    for len in 1..=vertices.len() {
        let mut cycles: Vec<CyclicWord> = Vec::new();
        for start in 0..vertices.len() {
            let mut letters = Vec::with_capacity(len);
            collect_cycles(&out_edges, start, start, len, &mut letters, &mut cycles);
        }
        cycles.sort();
        cycles.dedup();
        for alpha in cycles {
            let t = graph.multiplicity(&alpha);
            if t >= 1 {
                return Some((alpha, t));
            }
        }
    }
    None
}

/// Removes edges that lie on no directed cycle.
fn prune_acyclic(out_edges: &mut [Vec<(usize, crate::word::Letter)>]) {
    loop {
        let n = out_edges.len();
        let mut indeg = vec![0usize; n];
        for edges in out_edges.iter() {
            for &(t, _) in edges {
                indeg[t] += 1;
            }
        }
        let mut changed = false;
        for v in 0..n {
            if (indeg[v] == 0 || out_edges[v].is_empty()) && !out_edges[v].is_empty() {
                out_edges[v].clear();
                changed = true;
            }
            if out_edges[v].is_empty() {
                for edges in out_edges.iter_mut() {
                    let before = edges.len();
                    edges.retain(|&(t, _)| t != v);
                    changed |= edges.len() != before;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Simple cycles of exactly `len` edges through `start` whose other
/// vertices all have larger index.
fn collect_cycles(
    out_edges: &[Vec<(usize, crate::word::Letter)>],
    start: usize,
    at: usize,
    len: usize,
    letters: &mut Vec<crate::word::Letter>,
    out: &mut Vec<CyclicWord>,
) {
    let mut visited = vec![false; out_edges.len()];
    fn walk(
        out_edges: &[Vec<(usize, crate::word::Letter)>],
        start: usize,
        at: usize,
        len: usize,
        letters: &mut Vec<crate::word::Letter>,
        visited: &mut [bool],
        out: &mut Vec<CyclicWord>,
    ) {
        for &(t, l) in &out_edges[at] {
            letters.push(l);
            if letters.len() == len {
                if t == start {
                    let word = Word::from_reduced(letters.clone());
                    if let Some(c) = CyclicWord::new(&word) {
                        out.push(c);
                    }
                }
            } else if t > start && !visited[t] {
                visited[t] = true;
                walk(out_edges, start, t, len, letters, visited, out);
                visited[t] = false;
            }
            letters.pop();
        }
    }
    walk(out_edges, start, at, len, letters, &mut visited, out);
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximationReport {
    pub k: usize,
    pub scale: Rational,
    /// Nonperipheral extractions `(α, t)` in extraction order.
    pub alphas: Vec<(CyclicWord, usize)>,
    /// Peripheral extractions, which vanish on `Cyl(C)`.
    pub peripheral: Vec<(CyclicWord, usize)>,
    /// Multiple of the repair current used by the extension.
    pub repair: Rational,
    /// `max |η₀(w) - (1/R) Σ t η_[α](w)|` over `Cyl(C)` words of length `<= k`.
    pub residual: Rational,
    /// Largest weight left unextracted on any word of length in `[L + 2, k]`.
    pub stopping_bound: Rational,
    pub tolerance: Option<Rational>,
    /// True when a tolerance was given and the residual exceeds it.
    pub stalled: bool,
}

impl ApproximationReport {
    /// `Σ t · η_[α]` over the nonperipheral extractions.
    pub fn approximant(&self) -> RationalCurrentSum {
        let mut sum = RationalCurrentSum::new();
        for (alpha, t) in &self.alphas {
            sum.add_class(alpha.word(), Rational::from_integer((*t).into())).expect("cycles are nontrivial");
        }
        sum
    }
}

/// Extracts rational currents from `R` times a k-extension of `eta0` until
/// no cycle of weight at least one remains.
pub fn approximate(sys: &SubgroupSystem, eta0: &CurrentTable, k: usize, scale: &Rational, tolerance: Option<Rational>) -> Result<ApproximationReport> {
    if !scale.is_positive() {
        return Err(Error::NonPositiveScale);
    }
    if eta0.is_zero() {
        return Err(Error::ZeroProjectiveClass);
    }
    let extension = extend_k(sys, eta0, k, &ExtendOptions::default())?;
    let mut graph = TransitionGraph::from_table(&extension.table, k, scale)?;
    let mut alphas = Vec::new();
    let mut peripheral = Vec::new();
    while let Some((alpha, t)) = extract_cycle(&graph) {
        let before = graph.total_mass();
        graph.subtract(&alpha, t);
        if let Some((w, _)) = graph.weights().find(|(_, v)| v.is_negative()) {
            return Err(Error::Invariant(format!("extraction of {alpha} left a negative weight at {w}")));
        }
        if graph.total_mass() >= before {
            return Err(Error::Invariant(format!("extraction of {alpha} did not reduce the mass")));
        }
        if sys.is_peripheral(alpha.word()) {
            peripheral.push((alpha, t));
        } else {
            alphas.push((alpha, t));
        }
    }
    let relative_keys: Vec<Word> = eta0.entries().filter(|(key, _)| key.len() <= k).map(|(key, _)| key.word().clone()).collect();
    for (alpha, _) in &peripheral {
        for w in &relative_keys {
            if eval_rational(alpha.word(), w)? != 0 {
                return Err(Error::Invariant(format!("peripheral {alpha} meets Cyl(C) at {w}")));
            }
        }
    }
    let mut extracted = RationalCurrentSum::new();
    for (alpha, t) in alphas.iter().chain(&peripheral) {
        extracted.add_class(alpha.word(), Rational::from_integer((*t).into()))?;
    }
    let report_sum = {
        let mut s = RationalCurrentSum::new();
        for (alpha, t) in &alphas {
            s.add_class(alpha.word(), Rational::from_integer((*t).into()))?;
        }
        s
    };
    let mut residual = Rational::zero();
    for w in &relative_keys {
        let target = eta0.get(w).expect("domain key");
        let diff = (target - report_sum.eval(w)? / scale).abs();
        if diff > residual {
            residual = diff;
        }
    }
    let mut stopping_bound = Rational::zero();
    for (key, v) in extension.table.entries().filter(|(key, _)| key.len() >= sys.cylinder_length()) {
        let left = v * scale - extracted.eval(key.word())?;
        if left.is_negative() {
            return Err(Error::Invariant(format!("extracted currents exceed the extension at {key}")));
        }
        if left > stopping_bound {
            stopping_bound = left;
        }
    }
    if &residual * scale > stopping_bound {
        return Err(Error::Invariant("residual exceeds the stopping bound".into()));
    }
    let stalled = tolerance.as_ref().is_some_and(|tol| residual > *tol);
    Ok(ApproximationReport {
        k,
        scale: scale.clone(),
        alphas,
        peripheral,
        repair: extension.repair,
        residual,
        stopping_bound,
        tolerance,
        stalled,
    })
}

/// Cyclic reduction of `∏ α^m` over `alphas` in the given order.
pub fn combine_single(alphas: &[CyclicWord], m: usize) -> Result<CyclicWord> {
    let product = alphas.iter().fold(Word::empty(), |acc, a| acc.mul(&a.word().pow(m)));
    CyclicWord::new(&product).ok_or(Error::DegenerateProduct)
}

/// Largest absolute difference of two tables of the same system and depth.
pub fn sup_distance(t1: &CurrentTable, t2: &CurrentTable) -> Result<Rational> {
    if t1.fingerprint() != t2.fingerprint() || t1.depth() != t2.depth() {
        return Err(Error::TableMismatch);
    }
    let mut best = Rational::zero();
    for (key, v) in t1.entries() {
        let other = t2.get(key.word()).ok_or(Error::TableMismatch)?;
        let d = (v - other).abs();
        if d > best {
            best = d;
        }
    }
    Ok(best)
}
