//! Brute-force oracles that do not use folding, fiber products or
//! occurrence counting.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use relcurr_core::boundary::{PositionedPath, SubgroupSystem};
use relcurr_core::word::{Alphabet, CyclicWord, Word};
use relcurr_core::Rational;

pub fn f2() -> Alphabet {
    Alphabet::new(2).unwrap()
}

pub fn w(s: &str) -> Word {
    f2().parse(s).unwrap()
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn system(subgroups: &[&[&str]]) -> SubgroupSystem {
    let lists: Vec<Vec<Word>> = subgroups.iter().map(|g| g.iter().map(|s| w(s)).collect()).collect();
    SubgroupSystem::from_generators(f2(), &lists).unwrap()
}

/// Reduced products of at most `max_factors` generators and inverses,
/// kept when no longer than `max_len`.
pub fn products(gens: &[Word], max_factors: usize, max_len: usize) -> HashSet<Word> {
    let mut symbols: Vec<Word> = gens.to_vec();
    symbols.extend(gens.iter().map(Word::inverse));
    let mut out = HashSet::new();
    let mut frontier = vec![Word::empty()];
    out.insert(Word::empty());
    for _ in 0..max_factors {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &symbols {
                let y = x.mul(s);
                if out.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    out.retain(|x| x.len() <= max_len);
    out
}

/// Membership in the cyclic group generated by `g`.
pub fn in_cyclic(g: &Word, u: &Word) -> bool {
    if u.is_empty() {
        return true;
    }
    (1..=u.len()).any(|j| g.pow(j) == *u || g.inverse().pow(j) == *u)
}

/// Vertices within distance `radius` of `e` on the axis of `c`.
pub fn axis_in_ball(c: &Word, radius: usize) -> BTreeSet<Word> {
    let (core, conj) = c.cyclic_reduce();
    let h = core.expect("nontrivial element").word().clone();
    let mut out = BTreeSet::new();
    let steps = conj.len() + radius + h.len() + 1;
    for dir in [h.clone(), h.inverse()] {
        let mut v = conj.clone();
        for i in 0..steps * h.len() {
            if v.len() <= radius {
                out.insert(v.clone());
            }
            let l = dir.letters()[i % dir.len()];
            v = v.mul(&Word::letter(l));
        }
    }
    out
}

/// Distinct unoriented axes through `e` of conjugates `x r x^-1` of the root
/// `r` of `g` with `|x| <= conj_len`, seen in the ball of radius `radius`,
/// together with the exponent of `g` over `r`.
pub fn axes_through_origin(g: &Word, conj_len: usize, radius: usize) -> (usize, Vec<BTreeSet<Word>>) {
    let class = CyclicWord::new(g).expect("nontrivial");
    let (root, exponent) = class.primitive_root();
    let mut axes: BTreeSet<BTreeSet<Word>> = BTreeSet::new();
    for x in f2().reduced_words_up_to(conj_len) {
        let c = x.mul(root.word()).mul(&x.inverse());
        let axis = axis_in_ball(&c, radius);
        if axis.contains(&Word::empty()) {
            axes.insert(axis);
        }
    }
    (exponent, axes.into_iter().collect())
}

/// Number of unoriented axes of conjugates of `g` through the path from `e`
/// to `target`, times the exponent of `g` over its root.
pub fn axis_count(g: &Word, target: &Word, conj_len: usize, radius: usize) -> usize {
    let (exponent, axes) = axes_through_origin(g, conj_len, radius);
    exponent * axes.iter().filter(|a| a.contains(target)).count()
}

/// Largest diameter of the intersection of two distinct translates of the
/// subgroup trees of a system of cyclic subgroups, seen in a ball.
pub fn ball_l(generators: &[Word], radius: usize) -> usize {
    let mut axes: BTreeSet<(usize, BTreeSet<Word>)> = BTreeSet::new();
    for (i, g) in generators.iter().enumerate() {
        for x in f2().reduced_words_up_to(radius) {
            let axis = axis_in_ball(&x.mul(g).mul(&x.inverse()), radius);
            if axis.contains(&Word::empty()) {
                axes.insert((i, axis));
            }
        }
    }
    let axes: Vec<_> = axes.into_iter().collect();
    let mut best = 0;
    for (a, (_, s)) in axes.iter().enumerate() {
        for (_, t) in &axes[a + 1..] {
            let common: Vec<&Word> = s.intersection(t).collect();
            for x in &common {
                for y in &common {
                    best = best.max(x.inverse().mul(y).len());
                }
            }
        }
    }
    best
}

/// Vertices of the geodesic between two vertices of the Cayley tree.
pub fn geodesic(x: &Word, y: &Word) -> Vec<Word> {
    let step = x.inverse().mul(y);
    let mut out = vec![x.clone()];
    let mut cur = x.clone();
    for &l in step.letters() {
        cur = cur.mul(&Word::letter(l));
        out.push(cur.clone());
    }
    out
}

/// Two cylinders meet iff the subtree spanned by the four endpoints has
/// no vertex of degree three or more.
pub fn cylinders_meet(p: &PositionedPath, q: &PositionedPath) -> bool {
    let pts = [p.start(), p.end(), q.start(), q.end()];
    let mut span: HashSet<Word> = HashSet::new();
    for b in &pts[1..] {
        span.extend(geodesic(&pts[0], b));
    }
    span.iter().all(|v| {
        f2().letters().filter(|&l| span.contains(&v.mul(&Word::letter(l)))).count() <= 2
    })
}

/// For every geodesic segment between two vertices of the sphere of the
/// given radius, the number of members of `family` lying on it. A line
/// through the ball is in `C(γ)` iff `γ` lies on its trace in the ball.
pub fn sphere_profile(family: &[PositionedPath], radius: usize) -> Vec<usize> {
    let leaves = f2().reduced_words(radius);
    let dist = |x: &Word, y: &Word| x.inverse().mul(y).len();
    let ends: Vec<(Vec<usize>, Vec<usize>)> = family
        .iter()
        .map(|p| {
            let (s, e) = (p.start(), p.end());
            (leaves.iter().map(|a| dist(a, &s)).collect(), leaves.iter().map(|a| dist(a, &e)).collect())
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..leaves.len() {
        for j in i + 1..leaves.len() {
            let d = dist(&leaves[i], &leaves[j]);
            out.push(ends.iter().filter(|(s, e)| s[i] + s[j] == d && e[i] + e[j] == d).count());
        }
    }
    out
}

/// Reduced words of length at most `max_len` that read a closed loop at
/// some core vertex of some subgroup of the system.
pub fn loop_labels(sys: &SubgroupSystem, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for g in sys.cores() {
        for v in g.core_vertices() {
            let mut stack = vec![(v, Word::empty())];
            while let Some((at, word)) = stack.pop() {
                if !word.is_empty() && at == v {
                    out.push(word.clone());
                }
                if word.len() == max_len {
                    continue;
                }
                for l in f2().letters() {
                    if word.last() == Some(l.inverse()) {
                        continue;
                    }
                    if let Some(t) = g.follow(at, l) {
                        stack.push((t, word.with(l)));
                    }
                }
            }
        }
    }
    out
}

pub fn random_path(rng: &mut ChaCha8Rng, sys: &SubgroupSystem) -> PositionedPath {
    let m = sys.cylinder_length();
    loop {
        let origin_len = rng.gen_range(0..=2);
        let origin = random_word(rng, origin_len);
        let label_len = rng.gen_range(m..=m + 2);
        let label = random_word(rng, label_len);
        if sys.in_cyl_c(&label) {
            return PositionedPath::new(origin, label).unwrap();
        }
    }
}

pub fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Word {
    let mut x = Word::empty();
    while x.len() < len {
        let l = f2().letters().nth(rng.gen_range(0..4)).unwrap();
        if x.last() != Some(l.inverse()) {
            x.push(l);
        }
    }
    x
}
