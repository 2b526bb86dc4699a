//! The Morse arrangement: one hyperplane `x_σ = x_τ` per cover `σ ⊂ τ`.
//!
//! The arrangement is graphic (its hyperplanes are the edges of the Hasse
//! graph), so faces are handled combinatorially: a covector is realizable
//! exactly when contracting its zero edges and orienting the rest leaves an
//! acyclic directed graph.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::function::DiscreteFunction;
use crate::morse::{is_dag, is_discrete_morse, Matching};
use crate::rational::Rational;

/// Default bound on the number of hyperplanes for region enumeration.
pub const DEFAULT_GUARD: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl Sign {
    pub fn of(lower: &Rational, upper: &Rational) -> Sign {
        match lower.cmp(upper) {
            std::cmp::Ordering::Less => Sign::Plus,
            std::cmp::Ordering::Greater => Sign::Minus,
            std::cmp::Ordering::Equal => Sign::Zero,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::Zero => "0",
        }
    }

    pub fn parse(s: &str) -> Option<Sign> {
        match s {
            "+" => Some(Sign::Plus),
            "-" | "\u{2212}" => Some(Sign::Minus),
            "0" => Some(Sign::Zero),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A covector of the Morse arrangement, indexed by cover index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    pub signs: Vec<Sign>,
}

impl SignVector {
    pub fn new(signs: Vec<Sign>) -> Self {
        Self { signs }
    }

    pub fn all(x: &Complex, sign: Sign) -> Self {
        Self {
            signs: vec![sign; x.covers().len()],
        }
    }

    pub fn check_len(&self, x: &Complex) -> Result<()> {
        if self.signs.len() != x.covers().len() {
            return Err(Error::SignLength {
                got: self.signs.len(),
                expected: x.covers().len(),
            });
        }
        Ok(())
    }

    pub fn to_map(&self, x: &Complex) -> BTreeMap<String, String> {
        self.signs
            .iter()
            .enumerate()
            .map(|(e, s)| (x.cover_key(e), s.as_str().to_string()))
            .collect()
    }

    pub fn has(&self, sign: Sign) -> bool {
        self.signs.contains(&sign)
    }
}

pub fn sign_vector(x: &Complex, f: &DiscreteFunction) -> SignVector {
    SignVector {
        signs: x
            .covers()
            .iter()
            .map(|c| Sign::of(f.value(c.lower), f.value(c.upper)))
            .collect(),
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Class of each cell, number of classes, and "strictly below" edges.
type Contracted = (Vec<usize>, usize, Vec<(usize, usize)>);

/// Classes of cells after contracting zero edges, and the "strictly below"
/// edges between classes. `None` when a nonzero edge joins a class to itself.
fn contracted_order(x: &Complex, v: &SignVector) -> Option<Contracted> {
    let mut uf = UnionFind::new(x.len());
    for (e, c) in x.covers().iter().enumerate() {
        if v.signs[e] == Sign::Zero {
            uf.union(c.lower, c.upper);
        }
    }
    let mut class_of = vec![usize::MAX; x.len()];
    let mut classes = 0;
    for i in 0..x.len() {
        let r = uf.find(i);
        if class_of[r] == usize::MAX {
            class_of[r] = classes;
            classes += 1;
        }
        class_of[i] = class_of[r];
    }
    let mut edges = Vec::new();
    for (e, c) in x.covers().iter().enumerate() {
        let (a, b) = (class_of[c.lower], class_of[c.upper]);
        match v.signs[e] {
            Sign::Zero => {}
            _ if a == b => return None,
            Sign::Plus => edges.push((a, b)),
            Sign::Minus => edges.push((b, a)),
        }
    }
    Some((class_of, classes, edges))
}

/// Whether some point of `ℝ^X` has covector `v`.
pub fn is_realizable(x: &Complex, v: &SignVector) -> Result<bool> {
    v.check_len(x)?;
    Ok(match contracted_order(x, v) {
        Some((_, n, edges)) => is_dag(n, &edges),
        None => false,
    })
}

/// An integer point with covector `v`: each contracted class sits at the
/// length of the longest strictly-increasing chain below it.
pub fn witness_point(x: &Complex, v: &SignVector) -> Result<DiscreteFunction> {
    let (class_of, levels) = leveled(x, v, false)?;
    DiscreteFunction::from_values(x, class_of.iter().map(|&c| int_rational(levels[c])).collect())
}

/// Like [`witness_point`], but distinct classes get distinct values (a
/// topological order), so the point avoids every braid hyperplane that the
/// covector does not force it onto.
pub fn generic_witness_point(x: &Complex, v: &SignVector) -> Result<DiscreteFunction> {
    let (class_of, levels) = leveled(x, v, true)?;
    DiscreteFunction::from_values(x, class_of.iter().map(|&c| int_rational(levels[c])).collect())
}

fn int_rational(n: usize) -> Rational {
    Rational::from_integer((n as i64).into())
}

fn leveled(x: &Complex, v: &SignVector, injective: bool) -> Result<(Vec<usize>, Vec<usize>)> {
    v.check_len(x)?;
    let (class_of, n, edges) = contracted_order(x, v).ok_or(Error::NotRealizable)?;
    let mut out = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for &(a, b) in &edges {
        out[a].push(b);
        indeg[b] += 1;
    }
    // smallest class first keeps the witness deterministic
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
        (0..n).filter(|&c| indeg[c] == 0).map(std::cmp::Reverse).collect();
    let mut level = vec![0usize; n];
    let mut position = 0;
    let mut visited = 0;
    while let Some(std::cmp::Reverse(c)) = ready.pop() {
        visited += 1;
        if injective {
            level[c] = position;
            position += 1;
        }
        for &d in &out[c] {
            if !injective {
                level[d] = level[d].max(level[c] + 1);
            }
            indeg[d] -= 1;
            if indeg[d] == 0 {
                ready.push(std::cmp::Reverse(d));
            }
        }
    }
    if visited != n {
        return Err(Error::NotRealizable);
    }
    Ok((class_of, level))
}

fn morse_counts_ok(x: &Complex, v: &SignVector) -> bool {
    let mut up_minus = vec![0u32; x.len()];
    let mut down_minus = vec![0u32; x.len()];
    for (e, c) in x.covers().iter().enumerate() {
        if v.signs[e] == Sign::Minus {
            if !c.regular {
                return false;
            }
            up_minus[c.lower] += 1;
            down_minus[c.upper] += 1;
        }
    }
    up_minus.iter().chain(&down_minus).all(|&k| k <= 1)
}

/// Whether the open region with covector `v` consists of Morse functions.
pub fn is_morse_region(x: &Complex, v: &SignVector) -> Result<bool> {
    v.check_len(x)?;
    if let Some(e) = v.signs.iter().position(|&s| s == Sign::Zero) {
        return Err(Error::ZeroEntry(x.cover_key(e)));
    }
    if !is_realizable(x, v)? {
        return Err(Error::NotRealizable);
    }
    Ok(morse_counts_ok(x, v))
}

/// Lazy depth-first enumeration of zero-free realizable covectors, trying
/// `+` before `-` on each cover in index order.
pub struct RegionIter<'a> {
    x: &'a Complex,
    morse_only: bool,
    signs: Vec<Sign>,
    tried: Vec<u8>,
    base: usize,
    out: Vec<Vec<usize>>,
    up_minus: Vec<u8>,
    down_minus: Vec<u8>,
    emitted: bool,
    finished: bool,
}

impl<'a> RegionIter<'a> {
    fn new(x: &'a Complex, morse_only: bool, prefix: &[Sign]) -> Self {
        let m = x.covers().len();
        let mut it = Self {
            x,
            morse_only,
            signs: Vec::with_capacity(m),
            tried: vec![0; m + 1],
            base: prefix.len(),
            out: vec![Vec::new(); x.len()],
            up_minus: vec![0; x.len()],
            down_minus: vec![0; x.len()],
            emitted: false,
            finished: false,
        };
        for (d, &s) in prefix.iter().enumerate() {
            if !it.try_apply(d, s) {
                it.finished = true;
                break;
            }
            it.signs.push(s);
        }
        it
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.x.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(a) = stack.pop() {
            if a == to {
                return true;
            }
            for &b in &self.out[a] {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        false
    }

    fn try_apply(&mut self, e: usize, sign: Sign) -> bool {
        let c = self.x.cover(e);
        let (a, b) = match sign {
            Sign::Plus => (c.lower, c.upper),
            Sign::Minus => (c.upper, c.lower),
            Sign::Zero => return false,
        };
        if sign == Sign::Minus
            && self.morse_only
            && (!c.regular || self.up_minus[c.lower] > 0 || self.down_minus[c.upper] > 0)
        {
            return false;
        }
        if self.reaches(b, a) {
            return false;
        }
        self.out[a].push(b);
        if sign == Sign::Minus {
            self.up_minus[c.lower] += 1;
            self.down_minus[c.upper] += 1;
        }
        true
    }

    fn unapply(&mut self, e: usize) {
        let c = self.x.cover(e);
        let sign = self.signs[e];
        let a = if sign == Sign::Plus { c.lower } else { c.upper };
        self.out[a].pop();
        if sign == Sign::Minus {
            self.up_minus[c.lower] -= 1;
            self.down_minus[c.upper] -= 1;
        }
    }
}

impl Iterator for RegionIter<'_> {
    type Item = SignVector;

    fn next(&mut self) -> Option<SignVector> {
        let m = self.x.covers().len();
        loop {
            if self.finished {
                return None;
            }
            let d = self.signs.len();
            if d == m && !self.emitted {
                self.emitted = true;
                return Some(SignVector::new(self.signs.clone()));
            }
            if d < m && self.tried[d] < 2 {
                let sign = if self.tried[d] == 0 { Sign::Plus } else { Sign::Minus };
                self.tried[d] += 1;
                if self.try_apply(d, sign) {
                    self.signs.push(sign);
                    self.tried[d + 1] = 0;
                    self.emitted = false;
                }
                continue;
            }
            if d == self.base {
                self.finished = true;
                return None;
            }
            self.unapply(d - 1);
            self.signs.pop();
        }
    }
}

fn guard_check(x: &Complex, guard: usize) -> Result<()> {
    let edges = x.covers().len();
    if edges > guard {
        return Err(Error::TooLarge { edges, limit: guard });
    }
    Ok(())
}

/// All zero-free realizable covectors (optionally only Morse regions) in a
/// fixed deterministic order.
pub fn enumerate_regions(x: &Complex, morse_only: bool, guard: usize) -> Result<RegionIter<'_>> {
    guard_check(x, guard)?;
    Ok(RegionIter::new(x, morse_only, &[]))
}

fn prefixes(m: usize) -> Vec<Vec<Sign>> {
    let k = m.min(6);
    (0..1usize << k)
        .map(|mask| {
            (0..k)
                .map(|bit| {
                    if mask >> (k - 1 - bit) & 1 == 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
                .collect()
        })
        .collect()
}

/// Counts regions in parallel over independent prefix partitions.
pub fn count_regions(x: &Complex, morse_only: bool, guard: usize) -> Result<u64> {
    guard_check(x, guard)?;
    Ok(prefixes(x.covers().len())
        .par_iter()
        .map(|p| RegionIter::new(x, morse_only, p).count() as u64)
        .sum())
}

/// Collects all regions in parallel; the order equals the sequential order.
pub fn collect_regions(x: &Complex, morse_only: bool, guard: usize) -> Result<Vec<SignVector>> {
    guard_check(x, guard)?;
    let parts: Vec<Vec<SignVector>> = prefixes(x.covers().len())
        .par_iter()
        .map(|p| RegionIter::new(x, morse_only, p).collect())
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

/// Covers whose hyperplane supports a facet of the all-`+` region: those with
/// no other upward path from the lower to the upper cell.
pub fn facets_of_critical_region(x: &Complex) -> Vec<usize> {
    (0..x.covers().len())
        .filter(|&e| {
            let c = x.cover(e);
            // any other upward path has to start with a different up-cover
            !x.up_covers(c.lower).iter().filter(|&&f| f != e).any(|&f| {
                let mid = x.cover(f).upper;
                mid == c.upper || x.is_face(mid, c.upper)
            })
        })
        .collect()
}

/// Whether `f` lies in the closure of the critical region and is Morse.
pub fn is_essential(x: &Complex, f: &DiscreteFunction) -> bool {
    is_discrete_morse(x, f) && !sign_vector(x, f).has(Sign::Minus)
}

/// All nonempty acyclic matchings on regular covers with at most `max_card`
/// elements, ordered by size and then lexicographically.
pub fn matching_complex(x: &Complex, max_card: usize) -> Vec<Matching> {
    let candidates: Vec<usize> = (0..x.covers().len()).filter(|&e| x.cover(e).regular).collect();
    let mut used = vec![false; x.len()];
    let mut current = Vec::new();
    let mut out = Vec::new();
    fn walk(
        x: &Complex,
        candidates: &[usize],
        start: usize,
        max_card: usize,
        used: &mut [bool],
        current: &mut Vec<usize>,
        out: &mut Vec<Matching>,
    ) {
        if current.len() == max_card {
            return;
        }
        for k in start..candidates.len() {
            let e = candidates[k];
            let c = x.cover(e);
            if used[c.lower] || used[c.upper] {
                continue;
            }
            current.push(e);
            let m = Matching {
                covers: current.clone(),
            };
            if crate::morse::is_acyclic_matching(x, &m) {
                used[c.lower] = true;
                used[c.upper] = true;
                out.push(m);
                walk(x, candidates, k + 1, max_card, used, current, out);
                used[c.lower] = false;
                used[c.upper] = false;
            }
            current.pop();
        }
    }
    walk(x, &candidates, 0, max_card, &mut used, &mut current, &mut out);
    out.sort_by(|a, b| (a.len(), &a.covers).cmp(&(b.len(), &b.covers)));
    out
}

/// An intersection of Morse hyperplanes, stored as the partition of cells
/// into blocks of coordinates forced equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    pub blocks: Vec<Vec<usize>>,
}

impl Flat {
    pub fn from_tight_edges(x: &Complex, edges: &[usize]) -> Flat {
        let mut uf = UnionFind::new(x.len());
        for &e in edges {
            let c = x.cover(e);
            uf.union(c.lower, c.upper);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..x.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        Flat {
            blocks: groups.into_values().collect(),
        }
    }

    /// Whether `self ⊆ other` as linear subspaces, i.e. every block of
    /// `other` lies inside a block of `self`.
    pub fn is_subspace_of(&self, other: &Flat) -> bool {
        let n: usize = self.blocks.iter().map(Vec::len).sum();
        let mut block_of = vec![usize::MAX; n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &i in b {
                block_of[i] = k;
            }
        }
        other
            .blocks
            .iter()
            .all(|b| b.iter().all(|&i| block_of[i] == block_of[b[0]]))
    }

    pub fn ids(&self, x: &Complex) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut ids: Vec<String> = b.iter().map(|&i| x.id(i).to_string()).collect();
                ids.sort();
                ids
            })
            .collect();
        out.sort();
        out
    }
}

pub fn matching_to_flat(x: &Complex, m: &Matching) -> Flat {
    Flat::from_tight_edges(x, &m.covers)
}

/// A braid hyperplane `x_a = x_b` separating two functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub a: usize,
    pub b: usize,
    pub in_morse_arrangement: bool,
}

/// Unordered cell pairs whose relative order differs between `f` and `g`,
/// sorted by id pair with the smaller id first.
pub fn crossed_hyperplanes(x: &Complex, f: &DiscreteFunction, g: &DiscreteFunction) -> Result<Vec<Crossing>> {
    f.check_len(x)?;
    g.check_len(x)?;
    let order = x.id_order();
    let mut out = Vec::new();
    for (p, &a) in order.iter().enumerate() {
        for &b in &order[p + 1..] {
            if f.value(a).cmp(f.value(b)) != g.value(a).cmp(g.value(b)) {
                let in_morse_arrangement = x.find_cover(a, b).is_some() || x.find_cover(b, a).is_some();
                out.push(Crossing {
                    a,
                    b,
                    in_morse_arrangement,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use std::collections::BTreeSet;

    fn simplices(s: &[&[&str]]) -> Complex {
        let v: Vec<Vec<&str>> = s.iter().map(|t| t.to_vec()).collect();
        Complex::from_maximal_simplices(&v).unwrap()
    }

    fn func(x: &Complex, pairs: &[(&str, i64)]) -> DiscreteFunction {
        let pairs: Vec<(&str, Rational)> = pairs.iter().map(|(k, v)| (*k, int(*v))).collect();
        DiscreteFunction::from_pairs(x, &pairs).unwrap()
    }

    fn vector(x: &Complex, entries: &[(&str, &str, Sign)], default: Sign) -> SignVector {
        let mut v = SignVector::all(x, default);
        for (l, u, s) in entries {
            let e = x.find_cover(x.index_of(l).unwrap(), x.index_of(u).unwrap()).unwrap();
            v.signs[e] = *s;
        }
        v
    }

    /// Every covector realized by some point with values in `0..n`.
    fn grid_covectors(x: &Complex) -> BTreeSet<SignVector> {
        let n = x.len();
        let mut out = BTreeSet::new();
        let mut values = vec![0usize; n];
        loop {
            let f = DiscreteFunction::from_values(x, values.iter().map(|&k| int(k as i64)).collect()).unwrap();
            out.insert(sign_vector(x, &f));
            let mut k = 0;
            while k < n {
                values[k] += 1;
                if values[k] < n {
                    break;
                }
                values[k] = 0;
                k += 1;
            }
            if k == n {
                return out;
            }
        }
    }

    fn all_covectors(m: usize) -> Vec<SignVector> {
        let mut out = vec![Vec::new()];
        for _ in 0..m {
            out = out
                .into_iter()
                .flat_map(|v: Vec<Sign>| {
                    [Sign::Plus, Sign::Minus, Sign::Zero].into_iter().map(move |s| {
                        let mut w = v.clone();
                        w.push(s);
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(SignVector::new).collect()
    }

    #[test]
    fn sign_vector_examples() {
        let i = simplices(&[&["a", "b"]]);
        let show = |f: &DiscreteFunction| sign_vector(&i, f).to_map(&i);
        let m = show(&func(&i, &[("a", 0), ("b", 1), ("ab", 2)]));
        assert_eq!((m["a<ab"].as_str(), m["b<ab"].as_str()), ("+", "+"));
        let m = show(&func(&i, &[("a", 3), ("b", 1), ("ab", 2)]));
        assert_eq!((m["a<ab"].as_str(), m["b<ab"].as_str()), ("-", "+"));
        let m = show(&func(&i, &[("a", 2), ("b", 1), ("ab", 2)]));
        assert_eq!((m["a<ab"].as_str(), m["b<ab"].as_str()), ("0", "+"));
    }

    #[test]
    fn realizability_examples() {
        let d2 = simplices(&[&["a", "b", "c"]]);
        assert!(is_realizable(&d2, &SignVector::all(&d2, Sign::Plus)).unwrap());
        let v = vector(&d2, &[("ab", "abc", Sign::Zero), ("ac", "abc", Sign::Zero)], Sign::Plus);
        assert!(is_realizable(&d2, &v).unwrap());
        let w = witness_point(&d2, &v).unwrap();
        assert_eq!(sign_vector(&d2, &w), v);

        let tri = simplices(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
        let cyclic = vector(
            &tri,
            &[
                ("a", "ab", Sign::Plus),
                ("b", "ab", Sign::Minus),
                ("b", "bc", Sign::Plus),
                ("c", "bc", Sign::Minus),
                ("c", "ac", Sign::Plus),
                ("a", "ac", Sign::Minus),
            ],
            Sign::Plus,
        );
        assert!(!is_realizable(&tri, &cyclic).unwrap());
        assert_eq!(witness_point(&tri, &cyclic), Err(Error::NotRealizable));
    }

    #[test]
    fn realizability_matches_grid_oracle() {
        for x in [
            simplices(&[&["a", "b"]]),
            simplices(&[&["a", "b"], &["b", "c"]]),
            simplices(&[&["a", "b"], &["b", "c"], &["a", "c"]]),
        ] {
            let realized = grid_covectors(&x);
            for v in all_covectors(x.covers().len()) {
                let ok = is_realizable(&x, &v).unwrap();
                assert_eq!(ok, realized.contains(&v), "{:?}", v.to_map(&x));
                if ok {
                    assert_eq!(sign_vector(&x, &witness_point(&x, &v).unwrap()), v);
                    assert_eq!(sign_vector(&x, &generic_witness_point(&x, &v).unwrap()), v);
                }
            }
        }
    }

    #[test]
    fn morse_region_examples() {
        let i = simplices(&[&["a", "b"]]);
        let v = |a, b| SignVector::new(vec![a, b]);
        assert!(is_morse_region(&i, &v(Sign::Plus, Sign::Plus)).unwrap());
        assert!(is_morse_region(&i, &v(Sign::Minus, Sign::Plus)).unwrap());
        assert!(!is_morse_region(&i, &v(Sign::Minus, Sign::Minus)).unwrap());
        assert_eq!(
            is_morse_region(&i, &v(Sign::Zero, Sign::Plus)),
            Err(Error::ZeroEntry("a<ab".into()))
        );
    }

    #[test]
    fn interval_regions() {
        let i = simplices(&[&["a", "b"]]);
        assert_eq!(enumerate_regions(&i, false, DEFAULT_GUARD).unwrap().count(), 4);
        assert_eq!(enumerate_regions(&i, true, DEFAULT_GUARD).unwrap().count(), 3);
        let p = simplices(&[&["a"]]);
        let all: Vec<SignVector> = enumerate_regions(&p, true, DEFAULT_GUARD).unwrap().collect();
        assert_eq!(all, vec![SignVector::new(vec![])]);
        let first = enumerate_regions(&i, false, DEFAULT_GUARD).unwrap().next().unwrap();
        assert_eq!(first, SignVector::all(&i, Sign::Plus));
    }

    /// Regions seen by points with pairwise distinct values in `0..n`.
    fn permutation_regions(x: &Complex) -> BTreeSet<SignVector> {
        let n = x.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut out = BTreeSet::new();
        fn rec(k: usize, perm: &mut Vec<usize>, x: &Complex, out: &mut BTreeSet<SignVector>) {
            if k == perm.len() {
                let f = DiscreteFunction::from_values(x, perm.iter().map(|&p| int(p as i64)).collect()).unwrap();
                out.insert(sign_vector(x, &f));
                return;
            }
            for j in k..perm.len() {
                perm.swap(k, j);
                rec(k + 1, perm, x, out);
                perm.swap(k, j);
            }
        }
        rec(0, &mut perm, x, &mut out);
        out
    }

    #[test]
    fn enumeration_matches_permutation_oracle() {
        for x in [
            simplices(&[&["a", "b", "c"]]),
            simplices(&[&["a", "b"], &["b", "c"], &["a", "c"]]),
            simplices(&[&["a", "b"], &["c", "d"]]),
        ] {
            let oracle = permutation_regions(&x);
            let all: Vec<SignVector> = enumerate_regions(&x, false, DEFAULT_GUARD).unwrap().collect();
            assert_eq!(all.iter().cloned().collect::<BTreeSet<_>>(), oracle);
            assert_eq!(all.len(), oracle.len());
            let morse_oracle = oracle
                .iter()
                .filter(|v| {
                    let f = generic_witness_point(&x, v).unwrap();
                    is_discrete_morse(&x, &f)
                })
                .count();
            assert_eq!(count_regions(&x, true, DEFAULT_GUARD).unwrap() as usize, morse_oracle);
            assert_eq!(collect_regions(&x, false, DEFAULT_GUARD).unwrap(), all);
        }
    }

    #[test]
    fn guard_is_enforced() {
        let d2 = simplices(&[&["a", "b", "c"]]);
        assert!(matches!(
            enumerate_regions(&d2, false, 8),
            Err(Error::TooLarge { edges: 9, limit: 8 })
        ));
    }

    #[test]
    fn facets_of_the_critical_region() {
        let d2 = simplices(&[&["a", "b", "c"]]);
        assert_eq!(facets_of_critical_region(&d2).len(), 9);
        assert_eq!(d2.essential_rank(), 6);
        let i = simplices(&[&["a", "b"]]);
        assert_eq!(facets_of_critical_region(&i).len(), 2);
    }

    #[test]
    fn facets_agree_with_one_tight_edge_realizability() {
        use crate::complex::Cell;
        // a 2-cell attached along a loop, plus a vertex cover skipping a dimension
        let cells = vec![
            Cell { id: "v".into(), dim: 0 },
            Cell { id: "e".into(), dim: 1 },
            Cell { id: "d".into(), dim: 2 },
        ];
        let covers = vec![
            ("v".to_string(), "e".to_string(), false),
            ("e".to_string(), "d".to_string(), true),
            ("v".to_string(), "d".to_string(), false),
        ];
        let disk = Complex::new(cells, &covers, false).unwrap();
        for x in [disk, simplices(&[&["a", "b", "c"]])] {
            let facets = facets_of_critical_region(&x);
            for e in 0..x.covers().len() {
                let mut v = SignVector::all(&x, Sign::Plus);
                v.signs[e] = Sign::Zero;
                assert_eq!(facets.contains(&e), is_realizable(&x, &v).unwrap());
            }
        }
    }

    #[test]
    fn matching_complex_examples() {
        let i = simplices(&[&["a", "b"]]);
        let mc = matching_complex(&i, 10);
        assert_eq!(mc.len(), 2);
        assert!(mc.iter().all(|m| m.len() == 1));
        let p = simplices(&[&["a"]]);
        assert!(matching_complex(&p, 10).is_empty());
        let two = simplices(&[&["a", "b"], &["c", "d"]]);
        let mc = matching_complex(&two, 10);
        assert_eq!(mc.iter().filter(|m| m.len() == 1).count(), 4);
        assert_eq!(mc.iter().filter(|m| m.len() == 2).count(), 4);
        assert_eq!(mc.len(), 8);
        assert_eq!(matching_complex(&two, 1).len(), 4);
    }

    #[test]
    fn flats_embed_the_matching_complex() {
        let i = simplices(&[&["a", "b"]]);
        assert_eq!(matching_to_flat(&i, &Matching::default()).blocks.len(), 3);
        let a_ab = Matching::new(vec![i.find_cover(0, 2).unwrap()]);
        assert_eq!(
            matching_to_flat(&i, &a_ab).ids(&i),
            vec![vec!["a".to_string(), "ab".to_string()], vec!["b".to_string()]]
        );
        let two = simplices(&[&["a", "b"], &["c", "d"]]);
        let mc = matching_complex(&two, 10);
        let flats: BTreeSet<Flat> = mc.iter().map(|m| matching_to_flat(&two, m)).collect();
        assert_eq!(flats.len(), mc.len());
        for m in &mc {
            for n in &mc {
                let sub = m.covers.iter().all(|e| n.covers.contains(e));
                let (fm, fn_) = (matching_to_flat(&two, m), matching_to_flat(&two, n));
                assert_eq!(sub, fn_.is_subspace_of(&fm));
            }
        }
    }

    #[test]
    fn crossings() {
        let i = simplices(&[&["a", "b"]]);
        let f = func(&i, &[("a", 0), ("b", 1), ("ab", 2)]);
        let g = func(&i, &[("a", 3), ("b", 1), ("ab", 2)]);
        assert!(crossed_hyperplanes(&i, &f, &f).unwrap().is_empty());
        let c = crossed_hyperplanes(&i, &f, &g).unwrap();
        let named: Vec<(&str, &str, bool)> = c
            .iter()
            .map(|c| (i.id(c.a), i.id(c.b), c.in_morse_arrangement))
            .collect();
        assert_eq!(named, vec![("a", "ab", true), ("a", "b", false)]);
    }

    #[test]
    fn essential_predicate_and_centrality() {
        let i = simplices(&[&["a", "b"]]);
        assert!(is_essential(&i, &DiscreteFunction::dimension(&i)));
        assert!(!is_essential(&i, &func(&i, &[("a", 3), ("b", 1), ("ab", 2)])));
        let flat = DiscreteFunction::constant(&i, int(5));
        assert!(!sign_vector(&i, &flat).has(Sign::Plus));
        assert!(!sign_vector(&i, &flat).has(Sign::Minus));
    }
}
