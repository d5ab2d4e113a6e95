//! Finite coordinates of currents.
//!
//! A [`CurrentTable`] holds the weights of a relative current on the
//! cylinders of words in `Cyl(C)` up to a depth. A [`SignedTable`] holds a
//! signed current on every reduced word up to a depth. Both are keyed by
//! [`CylinderKey`], which makes them flip-invariant by construction.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::boundary::{CylinderKey, SubgroupSystem};
use crate::linalg::LinearSystem;
use crate::word::{occurrences, Alphabet, Automorphism, CyclicWord, Letter, Word};
use crate::{Error, Rational, Result};

fn int(n: usize) -> Rational {
    Rational::from_integer(n.into())
}

fn key(w: &Word) -> CylinderKey {
    CylinderKey::new(w).expect("nonempty word")
}

/// Value of the rational current of `g` on the cylinder of `w`: the number
/// of unoriented translation axes of conjugates of `g` containing `γ_w`.
pub fn eval_rational(g: &Word, w: &Word) -> Result<usize> {
    let class = CyclicWord::new(g).ok_or(Error::TrivialElement)?;
    let (root, exponent) = class.primitive_root();
    Ok(exponent * (occurrences(w, &root)? + occurrences(&w.inverse(), &root)?))
}

/// A finite positive combination of rational currents `η_[g]`.
///
/// Keys are root-free classes identified with their inverses, since `g`
/// and `g^-1` have the same axes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RationalCurrentSum {
    terms: BTreeMap<CyclicWord, Rational>,
}

impl RationalCurrentSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// `η_[g]` for a nontrivial `g`.
    pub fn single(g: &Word) -> Result<Self> {
        let mut sum = Self::new();
        sum.add_class(g, Rational::one())?;
        Ok(sum)
    }

    /// Adds `mult · η_[g]`, rewriting proper powers through their root.
    pub fn add_class(&mut self, g: &Word, mult: Rational) -> Result<()> {
        let class = CyclicWord::new(g).ok_or(Error::TrivialElement)?;
        let (root, exponent) = class.primitive_root();
        let entry = self.terms.entry(root.unoriented()).or_insert_with(Rational::zero);
        *entry += mult * int(exponent);
        if entry.is_zero() {
            self.terms.remove(&root.unoriented());
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CyclicWord, &Rational)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn eval(&self, w: &Word) -> Result<Rational> {
        let mut total = Rational::zero();
        for (h, m) in &self.terms {
            total += m * int(eval_rational(h.word(), w)?);
        }
        Ok(total)
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        let mut out = Self::new();
        if factor.is_zero() {
            return out;
        }
        for (h, m) in &self.terms {
            out.terms.insert(h.clone(), m * factor);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (h, m) in &other.terms {
            out.add_class(h.word(), m.clone()).expect("stored classes are nontrivial");
        }
        out
    }
}

/// Weights of a relative current on `Cyl(C)` words of length at most
/// `depth`. Every domain key is stored, zeros included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurrentTable {
    alphabet: Alphabet,
    fingerprint: u64,
    cylinder_length: usize,
    depth: usize,
    weights: BTreeMap<CylinderKey, Rational>,
}

/// Keys of `Cyl(C)` words with length in `[L + 2, depth]`.
pub fn relative_domain(sys: &SubgroupSystem, depth: usize) -> Vec<CylinderKey> {
    let mut out = Vec::new();
    for len in sys.cylinder_length()..=depth {
        for w in sys.alphabet().reduced_words(len) {
            if w <= w.inverse() && sys.in_cyl_c(&w) {
                out.push(key(&w));
            }
        }
    }
    out
}

impl CurrentTable {
    fn check_depth(sys: &SubgroupSystem, depth: usize) -> Result<()> {
        if depth < sys.cylinder_length() {
            return Err(Error::DepthTooSmall { depth, min: sys.cylinder_length() });
        }
        Ok(())
    }

    /// Evaluates `f` on every domain key. Negative values are rejected.
    pub fn from_fn(sys: &SubgroupSystem, depth: usize, mut f: impl FnMut(&Word) -> Result<Rational>) -> Result<Self> {
        Self::check_depth(sys, depth)?;
        let mut weights = BTreeMap::new();
        for k in relative_domain(sys, depth) {
            let v = f(k.word())?;
            if v.is_negative() {
                return Err(Error::NegativeWeight(k.word().clone()));
            }
            weights.insert(k, v);
        }
        Ok(Self::with_weights(sys, depth, weights))
    }

    fn with_weights(sys: &SubgroupSystem, depth: usize, weights: BTreeMap<CylinderKey, Rational>) -> Self {
        CurrentTable {
            alphabet: sys.alphabet(),
            fingerprint: sys.fingerprint(),
            cylinder_length: sys.cylinder_length(),
            depth,
            weights,
        }
    }

    /// Builds a table from explicit entries; absent keys are zero. A word
    /// and its inverse may both appear only with equal values.
    pub fn from_entries(sys: &SubgroupSystem, depth: usize, entries: impl IntoIterator<Item = (Word, Rational)>) -> Result<Self> {
        let mut table = Self::from_fn(sys, depth, |_| Ok(Rational::zero()))?;
        let mut seen = BTreeSet::new();
        for (w, v) in entries {
            let k = CylinderKey::new(&w).ok_or(Error::EmptyPath)?;
            if !table.weights.contains_key(&k) {
                return Err(Error::NotInDomain(w));
            }
            if v.is_negative() {
                return Err(Error::NegativeWeight(w));
            }
            if !seen.insert(k.clone()) && table.weights[&k] != v {
                return Err(Error::Inconsistent(w));
            }
            table.weights.insert(k, v);
        }
        Ok(table)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn cylinder_length(&self) -> usize {
        self.cylinder_length
    }

    pub fn get(&self, w: &Word) -> Option<&Rational> {
        self.weights.get(&CylinderKey::new(w)?)
    }

    /// Overwrites a domain weight.
    pub fn set(&mut self, w: &Word, v: Rational) -> Result<()> {
        let k = CylinderKey::new(w).ok_or(Error::EmptyPath)?;
        match self.weights.get_mut(&k) {
            Some(slot) if !v.is_negative() => {
                *slot = v;
                Ok(())
            }
            Some(_) => Err(Error::NegativeWeight(w.clone())),
            None => Err(Error::NotInDomain(w.clone())),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&CylinderKey, &Rational)> {
        self.weights.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.values().all(Zero::is_zero)
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        let mut out = self.clone();
        for v in out.weights.values_mut() {
            *v = &*v * factor;
        }
        out
    }

    /// The same current on a smaller depth.
    pub fn truncated(&self, depth: usize) -> Result<Self> {
        if depth < self.cylinder_length {
            return Err(Error::DepthTooSmall { depth, min: self.cylinder_length });
        }
        if depth > self.depth {
            return Err(Error::DepthTooLarge { have: self.depth, want: depth });
        }
        let mut out = self.clone();
        out.depth = depth;
        out.weights.retain(|k, _| k.len() <= depth);
        Ok(out)
    }

    fn require_system(&self, sys: &SubgroupSystem) -> Result<()> {
        if self.fingerprint != sys.fingerprint() {
            return Err(Error::TableMismatch);
        }
        Ok(())
    }
}

/// Restriction of a rational current to `Cyl(C)` words up to depth `k`.
pub fn restrict_relative(sys: &SubgroupSystem, current: &RationalCurrentSum, k: usize) -> Result<CurrentTable> {
    CurrentTable::from_fn(sys, k, |w| current.eval(w))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistencyVerdict {
    Ok,
    Failing(Word),
}

/// Checks additivity `η(w) = Σ_b η(wb)` at every domain word shorter than
/// the depth, in both orientations.
pub fn check_consistency(table: &CurrentTable) -> ConsistencyVerdict {
    for (k, v) in &table.weights {
        if k.len() >= table.depth {
            continue;
        }
        for w in [k.word().clone(), k.word().inverse()] {
            let mut sum = Rational::zero();
            for l in table.alphabet.letters() {
                if w.last() == Some(l.inverse()) {
                    continue;
                }
                sum += table.get(&w.with(l)).expect("extensions of domain words are in the domain");
            }
            if sum != *v {
                return ConsistencyVerdict::Failing(w);
            }
        }
    }
    ConsistencyVerdict::Ok
}

/// Weights of a signed current on every nonempty reduced word of length at
/// most `depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedTable {
    alphabet: Alphabet,
    fingerprint: u64,
    depth: usize,
    weights: BTreeMap<CylinderKey, Rational>,
}

impl SignedTable {
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn get(&self, w: &Word) -> Option<&Rational> {
        self.weights.get(&CylinderKey::new(w)?)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&CylinderKey, &Rational)> {
        self.weights.iter()
    }

    /// First word shorter than the depth where additivity fails.
    pub fn additivity_defect(&self) -> Option<Word> {
        for k in self.weights.keys().filter(|k| k.len() < self.depth) {
            for w in [k.word().clone(), k.word().inverse()] {
                let sum: Rational = self
                    .alphabet
                    .letters()
                    .filter(|&l| w.last() != Some(l.inverse()))
                    .map(|l| self.get(&w.with(l)).cloned().unwrap_or_default())
                    .sum();
                if sum != self.weights[k] {
                    return Some(w);
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendOptions {
    /// Value given to letters left free by the solve.
    pub base: Rational,
}

impl Default for ExtendOptions {
    fn default() -> Self {
        ExtendOptions { base: Rational::one() }
    }
}

/// How the unknowns of one length were determined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelReport {
    pub length: usize,
    pub rows: usize,
    pub unknowns: usize,
    /// Solved together with all shorter lengths.
    pub joint: bool,
    /// The row relations were verified on the right-hand side before solving.
    pub identity_checked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub table: SignedTable,
    /// Multiple of the repair current added; zero when none was needed.
    pub repair: Rational,
    pub repair_current: Option<RationalCurrentSum>,
    pub levels: Vec<LevelReport>,
}

/// Solves for a signed current that agrees with `eta0` on `Cyl(C)` words of
/// length at most `k` and is nonnegative on words of length in
/// `[L + 2, k]`.
///
/// Lengths up to `L + 2` are solved as one system; each longer length is
/// solved on its own after checking that the right-hand side satisfies the
/// relations among the rows.
pub fn extend_k(sys: &SubgroupSystem, eta0: &CurrentTable, k: usize, options: &ExtendOptions) -> Result<Extension> {
    eta0.require_system(sys)?;
    let m = sys.cylinder_length();
    if k < m {
        return Err(Error::DepthTooSmall { depth: k, min: m });
    }
    if eta0.depth() < k {
        return Err(Error::DepthTooLarge { have: eta0.depth(), want: k });
    }
    if let ConsistencyVerdict::Failing(w) = check_consistency(eta0) {
        return Err(Error::Inconsistent(w));
    }
    let alphabet = sys.alphabet();
    let mut values: BTreeMap<CylinderKey, Rational> = BTreeMap::new();
    for (key, v) in eta0.entries().filter(|(key, _)| key.len() <= k) {
        values.insert(key.clone(), v.clone());
    }
    let mut levels = Vec::new();
    levels.push(solve_short_levels(sys, &mut values, options)?);
    for len in m + 1..=k {
        levels.push(solve_level(sys, &mut values, len)?);
    }
    let mut table = SignedTable { alphabet, fingerprint: sys.fingerprint(), depth: k, weights: values };
    if let Some(w) = table.additivity_defect() {
        return Err(Error::Invariant(format!("extension is not additive at {w}")));
    }
    let (repair, repair_current) = repair(sys, &mut table)?;
    Ok(Extension { table, repair, repair_current, levels })
}

/// Unknown and known terms of the equation `Σ_b η(vb) = η(v)`.
fn extension_terms(alphabet: Alphabet, v: &Word) -> impl Iterator<Item = Word> + '_ {
    alphabet.letters().filter(move |&l| v.last() != Some(l.inverse())).map(move |l| v.with(l))
}

fn solve_short_levels(sys: &SubgroupSystem, values: &mut BTreeMap<CylinderKey, Rational>, options: &ExtendOptions) -> Result<LevelReport> {
    let alphabet = sys.alphabet();
    let m = sys.cylinder_length();
    let mut unknowns: Vec<CylinderKey> = Vec::new();
    for len in (1..=m).rev() {
        let words = if len == m { sys.stratum_half(m) } else { alphabet.reduced_words(len).into_iter().filter(|w| *w <= w.inverse()).collect() };
        unknowns.extend(words.iter().map(key));
    }
    let column: BTreeMap<&CylinderKey, usize> = unknowns.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut system = LinearSystem::new(unknowns.len());
    let mut row_words = Vec::new();
    for len in 1..m {
        for v in alphabet.reduced_words(len) {
            let mut coeffs = vec![(column[&key(&v)], -Rational::one())];
            let mut rhs = Rational::zero();
            for vb in extension_terms(alphabet, &v) {
                let k = key(&vb);
                match column.get(&k) {
                    Some(&c) => coeffs.push((c, Rational::one())),
                    None => rhs -= &values[&k],
                }
            }
            system.push_row(coeffs, rhs);
            row_words.push(v);
        }
    }
    let solution = system
        .solve(|c| if unknowns[c].len() == 1 { options.base.clone() } else { Rational::zero() })
        .map_err(|e| Error::UnsolvableLevel { level: m, plus: vec![row_words[e.row].clone()], minus: Vec::new() })?;
    let rows = system.row_count();
    for (k, v) in unknowns.iter().zip(solution) {
        values.insert(k.clone(), v);
    }
    Ok(LevelReport { length: m, rows, unknowns: unknowns.len(), joint: true, identity_checked: false })
}

/// Right-hand side `c_v = η(v) - Σ_{vb ∈ Cyl(C)} η(vb)` of the row for `v`.
fn row_rhs(sys: &SubgroupSystem, values: &BTreeMap<CylinderKey, Rational>, v: &Word) -> Rational {
    let mut c = values[&key(v)].clone();
    for vb in extension_terms(sys.alphabet(), v) {
        if sys.in_cyl_c(&vb) {
            c -= &values[&key(&vb)];
        }
    }
    c
}

fn solve_level(sys: &SubgroupSystem, values: &mut BTreeMap<CylinderKey, Rational>, len: usize) -> Result<LevelReport> {
    let alphabet = sys.alphabet();
    let rows_words = sys.stratum(len - 1);
    let row_set: BTreeSet<&Word> = rows_words.iter().collect();
    let rhs: BTreeMap<&Word, Rational> = rows_words.iter().map(|v| (v, row_rhs(sys, values, v))).collect();
    for u in sys.stratum(len - 2) {
        let left: Vec<Word> = alphabet
            .letters()
            .filter(|&b| u.first() != Some(b.inverse()))
            .map(|b| Word::letter(b).mul(&u))
            .filter(|w| row_set.contains(w))
            .collect();
        let ui = u.inverse();
        let right: Vec<Word> = alphabet
            .letters()
            .filter(|&b| ui.first() != Some(b.inverse()))
            .map(|b| Word::letter(b).mul(&ui))
            .filter(|w| row_set.contains(w))
            .collect();
        let lhs: Rational = left.iter().map(|w| &rhs[w]).sum();
        let rhs_sum: Rational = right.iter().map(|w| &rhs[w]).sum();
        if lhs != rhs_sum {
            return Err(Error::UnsolvableLevel { level: len, plus: left, minus: right });
        }
    }
    let unknowns: Vec<CylinderKey> = sys.stratum_half(len).iter().map(key).collect();
    let column: BTreeMap<&CylinderKey, usize> = unknowns.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut system = LinearSystem::new(unknowns.len());
    for v in &rows_words {
        let coeffs = extension_terms(alphabet, v)
            .filter_map(|vb| column.get(&key(&vb)).map(|&c| (c, Rational::one())))
            .collect();
        system.push_row(coeffs, rhs[v].clone());
    }
    let solution = system
        .solve(|_| Rational::zero())
        .map_err(|e| Error::UnsolvableLevel { level: len, plus: vec![rows_words[e.row].clone()], minus: Vec::new() })?;
    for (k, v) in unknowns.iter().zip(solution) {
        values.insert(k.clone(), v);
    }
    Ok(LevelReport { length: len, rows: rows_words.len(), unknowns: unknowns.len(), joint: false, identity_checked: true })
}

/// Adds the least multiple of the repair current that removes negative
/// weights on lengths `[L + 2, depth]`.
fn repair(sys: &SubgroupSystem, table: &mut SignedTable) -> Result<(Rational, Option<RationalCurrentSum>)> {
    let m = sys.cylinder_length();
    let deficient: Vec<(Word, Rational)> = table
        .weights
        .iter()
        .filter(|(k, v)| k.len() >= m && v.is_negative())
        .map(|(k, v)| (k.word().clone(), v.clone()))
        .collect();
    if deficient.is_empty() {
        return Ok((Rational::zero(), None));
    }
    let eta_a = build_eta_A(sys, table.depth)?;
    let mut scale = Rational::zero();
    for (w, v) in &deficient {
        let mass = eta_a.eval(w)?;
        if !mass.is_positive() {
            return Err(Error::Invariant(format!("repair current vanishes on deficient word {w}")));
        }
        let need = -v / mass;
        if need > scale {
            scale = need;
        }
    }
    for (k, v) in table.weights.iter_mut() {
        *v += &scale * eta_a.eval(k.word())?;
    }
    if let Some((k, _)) = table.weights.iter().find(|(k, v)| k.len() >= m && v.is_negative()) {
        return Err(Error::Invariant(format!("repair left a negative weight at {k}")));
    }
    Ok((scale, Some(eta_a)))
}

/// Sum of rational currents of loops through every word of `S_k`; positive
/// on the strata `S_{L+2}, ..., S_k` and zero on `Cyl(C)`.
#[allow(non_snake_case)]
pub fn build_eta_A(sys: &SubgroupSystem, k: usize) -> Result<RationalCurrentSum> {
    if sys.is_empty() {
        return Err(Error::RepairUndefined);
    }
    if k < sys.cylinder_length() {
        return Err(Error::DepthTooSmall { depth: k, min: sys.cylinder_length() });
    }
    let mut classes = BTreeSet::new();
    for w in sys.stratum_half(k) {
        let (i, v) = sys.reading(&w).ok_or_else(|| Error::Invariant(format!("stratum word {w} is not readable")))?;
        let core = &sys.cores()[i];
        let end = core.read(v, &w).expect("reading vertex reads the word");
        let closing = shortest_closing(core, end, &w, v)
            .ok_or_else(|| Error::Invariant(format!("no cyclically reduced loop through {w}")))?;
        let class = CyclicWord::new(&w.mul(&closing)).ok_or(Error::TrivialElement)?;
        classes.insert(class.unoriented());
    }
    let mut sum = RationalCurrentSum::new();
    for class in classes {
        sum.add_class(class.word(), Rational::one())?;
    }
    Ok(sum)
}

/// Shortest `p` with `w·p` a cyclically reduced loop at `start`, where `w`
/// has been read from `start` to `end`.
fn shortest_closing(core: &crate::stallings::CoreGraph, end: usize, w: &Word, start: usize) -> Option<Word> {
    let alphabet = core.alphabet();
    let first = w.first()?;
    let last = w.last()?;
    let closes = |v: usize, incoming: Letter| v == start && incoming != first.inverse();
    if closes(end, last) {
        return Some(Word::empty());
    }
    let states = core.vertex_count() * alphabet.size();
    let state = |v: usize, l: Letter| v * alphabet.size() + l.index();
    let mut prev: Vec<Option<(usize, Letter)>> = vec![None; states];
    let mut seen = vec![false; states];
    seen[state(end, last)] = true;
    let mut queue = VecDeque::from([(end, last)]);
    while let Some((v, incoming)) = queue.pop_front() {
        for l in alphabet.letters() {
            if l == incoming.inverse() {
                continue;
            }
            let Some(t) = core.core_follow(v, l) else { continue };
            let s = state(t, l);
            if seen[s] {
                continue;
            }
            seen[s] = true;
            prev[s] = Some((v, incoming));
            if closes(t, l) {
                let mut letters = vec![l];
                let mut cur = (v, incoming);
                while (cur.0, cur.1) != (end, last) {
                    letters.push(cur.1);
                    cur = prev[state(cur.0, cur.1)].expect("path back to the start state");
                }
                letters.reverse();
                return Some(Word::from_reduced(letters));
            }
            queue.push_back((t, l));
        }
    }
    None
}

/// Scales a table so that its largest weight on `C` words is 1. Returns
/// the scaled table and the factor applied.
pub fn normalize(table: &CurrentTable) -> Result<(CurrentTable, Rational)> {
    let max = table
        .entries()
        .filter(|(k, _)| k.len() == table.cylinder_length())
        .map(|(_, v)| v)
        .max()
        .cloned()
        .unwrap_or_default();
    if max.is_zero() {
        return Err(Error::ZeroProjectiveClass);
    }
    let scale = max.recip();
    Ok((table.scaled(&scale), scale))
}

/// True if every generator of `image` closes a loop at one common vertex
/// of `target`, i.e. `image` is conjugate into `target`.
fn conjugate_into(image: &crate::stallings::CoreGraph, target: &crate::stallings::CoreGraph) -> bool {
    let (image, _) = image.rebased();
    let basis = image.basis();
    target.core_vertices().any(|v| basis.iter().all(|g| target.read(v, g) == Some(v)))
}

fn image_graph(sys: &SubgroupSystem, phi: &Automorphism, i: usize, inverse: bool) -> Result<crate::stallings::CoreGraph> {
    let gens: Vec<Word> = sys.cores()[i]
        .basis()
        .iter()
        .map(|g| if inverse { phi.apply_inverse(g) } else { phi.apply(g) })
        .collect();
    crate::stallings::CoreGraph::from_generators(sys.alphabet(), &gens)
}

/// Checks that `phi` permutes the conjugacy classes of the system.
pub fn stabilizes(sys: &SubgroupSystem, phi: &Automorphism) -> Result<bool> {
    if phi.alphabet() != sys.alphabet() {
        return Ok(false);
    }
    let r = sys.cores().len();
    let target = |i: usize, inverse: bool| -> Result<Option<usize>> {
        let img = image_graph(sys, phi, i, inverse)?;
        Ok((0..r).find(|&j| conjugate_into(&img, &sys.cores()[j])))
    };
    for i in 0..r {
        let Some(j) = target(i, false)? else { return Ok(false) };
        if target(j, true)? != Some(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The automorphism action `[g] ↦ [Φ(g)]` on rational currents.
pub fn act(sys: &SubgroupSystem, phi: &Automorphism, current: &RationalCurrentSum) -> Result<RationalCurrentSum> {
    if !stabilizes(sys, phi)? {
        return Err(Error::DoesNotStabilize);
    }
    let mut out = RationalCurrentSum::new();
    for (h, m) in current.terms() {
        out.add_class(&phi.apply(h.word()), m.clone())?;
    }
    Ok(out)
}
