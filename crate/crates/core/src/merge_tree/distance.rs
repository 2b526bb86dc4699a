//! Bounded search for the euclidean edit distance between merge trees.
//!
//! The search space consists of all merge trees with at most `max_nodes`
//! nodes whose values lie on a finite grid (by default the union of the
//! values of the inputs), identified up to automorphism. Two states are
//! adjacent when their posets are related by edit moves in one direction,
//! with the elementary distance as edge weight. Dijkstra's algorithm on this
//! graph yields the edit distance restricted to the grid and the node bound.
//!
//! When every input tree is strict, so is every intermediate tree. Without
//! that restriction a leaf could be added at the value of its new parent for
//! free, and distinct strict trees could end up at distance zero.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::canon::{enumerate_shapes, Shape};
use super::edit::{elementary_distance, embedding_cost, shape_embeddings, Inclusion};
use super::{MergeTree, TreePoset};
use crate::distance::Distance;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Limits for [`edit_distance`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EditBudget {
    /// Largest intermediate tree; defaults to one more than the larger input.
    pub max_nodes: Option<usize>,
    /// Largest number of search states; defaults to [`EditBudget::DEFAULT_STEPS`].
    pub max_steps: Option<usize>,
    /// Values allowed on intermediate trees, in addition to the input values.
    pub grid: Option<Vec<Rational>>,
}

impl EditBudget {
    pub const DEFAULT_STEPS: usize = 20_000;
}

/// An upper bound on the edit distance. `exact` is set when the search
/// exhausted every sequence through grid-valued trees within the node bound.
#[derive(Debug, Clone, PartialEq)]
pub struct EditDistance {
    pub distance: Distance,
    pub exact: bool,
    pub states: usize,
}

enum Relation {
    Unrelated,
    Same(Vec<Vec<usize>>),
    /// Embeddings from the row shape into the column shape.
    Up(Vec<Inclusion>),
    /// Embeddings from the column shape into the row shape.
    Down(Vec<Inclusion>),
}

struct Space {
    shapes: Vec<Shape>,
    relations: Vec<Vec<Relation>>,
    states: Vec<(usize, Vec<u16>)>,
    index: HashMap<(usize, Vec<u16>), usize>,
    by_shape: Vec<Vec<usize>>,
    adjacency: Vec<OnceLock<Vec<(u32, i128)>>>,
}

/// A reusable edit-distance engine for one grid and node bound.
pub struct TreeEditSearch {
    grid: Vec<Rational>,
    scaled: Vec<i128>,
    scale: BigInt,
    max_nodes: usize,
    max_steps: usize,
    strict: bool,
    space: Option<Space>,
}

const CACHE_LIMIT: usize = 4_000;

struct Valuations<'a> {
    shape: &'a Shape,
    grid_len: usize,
    strict: bool,
    limit: usize,
}

impl Valuations<'_> {
    /// Appends every order-preserving grid valuation of the shape, returning
    /// false once more than `limit` have been produced.
    fn collect(&self, out: &mut Vec<Vec<u16>>) -> bool {
        let mut v = vec![0u16; self.shape.len()];
        self.rec(0, &mut v, out)
    }

    fn rec(&self, k: usize, v: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) -> bool {
        if k == v.len() {
            out.push(v.clone());
            return out.len() <= self.limit;
        }
        // nodes are in preorder, so parents precede children
        let bound = match self.shape.parent(k) {
            Some(p) if self.strict => v[p] as usize,
            Some(p) => v[p] as usize + 1,
            None => self.grid_len,
        };
        for g in 0..bound {
            v[k] = g as u16;
            if !self.rec(k + 1, v, out) {
                return false;
            }
        }
        true
    }
}

fn canonical_valuation(autos: &[Vec<usize>], v: &[u16]) -> Vec<u16> {
    let mut best: Option<Vec<u16>> = None;
    for a in autos {
        let mut w = vec![0u16; v.len()];
        for (i, &x) in v.iter().enumerate() {
            w[a[i]] = x;
        }
        if best.as_ref().is_none_or(|b| w < *b) {
            best = Some(w);
        }
    }
    best.expect("the identity is an automorphism")
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl TreeEditSearch {
    /// Prepares the search space for the given trees. The grid is the budget
    /// grid joined with every value of `trees`.
    pub fn new(budget: &EditBudget, trees: &[&MergeTree]) -> Result<Self> {
        let largest = trees.iter().map(|t| t.len()).max().unwrap_or(1);
        let max_nodes = budget.max_nodes.unwrap_or(largest + 1);
        let max_steps = budget.max_steps.unwrap_or(EditBudget::DEFAULT_STEPS);
        if max_nodes == 0 || max_steps == 0 {
            return Err(Error::OutOfRange("budgets must be positive".into()));
        }
        if max_nodes < largest {
            return Err(Error::OutOfRange(format!(
                "max_nodes = {max_nodes} is smaller than an input tree with {largest} nodes"
            )));
        }
        let mut grid: BTreeSet<Rational> = budget.grid.iter().flatten().cloned().collect();
        for t in trees {
            grid.extend(t.values().iter().cloned());
        }
        if grid.is_empty() {
            grid.insert(Rational::zero());
        }
        let grid: Vec<Rational> = grid.into_iter().collect();
        if grid.len() > u16::MAX as usize {
            return Err(Error::OutOfRange("grid too large".into()));
        }
        let scale = grid.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scaled = grid
            .iter()
            .map(|v| {
                (v.numer() * (&scale / v.denom()))
                    .to_i128()
                    .filter(|x| x.unsigned_abs() < 1u128 << 60)
                    .ok_or_else(|| Error::OutOfRange("grid values too large for the search".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut search = Self {
            grid,
            scaled,
            scale,
            max_nodes,
            max_steps,
            strict: trees.iter().all(|t| t.classify().strict),
            space: None,
        };
        search.space = search.build_space();
        Ok(search)
    }

    fn build_space(&self) -> Option<Space> {
        let shapes = enumerate_shapes(self.max_nodes);
        let mut states = Vec::new();
        let mut by_shape = vec![Vec::new(); shapes.len()];
        let mut index = HashMap::new();
        for (s, shape) in shapes.iter().enumerate() {
            let autos = shape.automorphisms();
            let mut vals = Vec::new();
            let budget_left = self.max_steps.saturating_sub(states.len());
            let valuations = Valuations {
                shape,
                grid_len: self.grid.len(),
                strict: self.strict,
                limit: budget_left.saturating_mul(autos.len()),
            };
            if !valuations.collect(&mut vals) {
                return None;
            }
            for v in vals {
                if canonical_valuation(&autos, &v) == v {
                    index.insert((s, v.clone()), states.len());
                    by_shape[s].push(states.len());
                    states.push((s, v));
                    if states.len() > self.max_steps {
                        return None;
                    }
                }
            }
        }
        let pairs: Vec<(usize, usize)> = (0..shapes.len())
            .flat_map(|a| (0..shapes.len()).map(move |b| (a, b)))
            .collect();
        let computed: Vec<Relation> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let (sa, sb) = (&shapes[a], &shapes[b]);
                match sa.len().cmp(&sb.len()) {
                    Ordering::Equal if a == b => Relation::Same(sa.automorphisms()),
                    Ordering::Equal => Relation::Unrelated,
                    Ordering::Less => {
                        let e = shape_embeddings(sa, sb);
                        if e.is_empty() {
                            Relation::Unrelated
                        } else {
                            Relation::Up(e)
                        }
                    }
                    Ordering::Greater => {
                        let e = shape_embeddings(sb, sa);
                        if e.is_empty() {
                            Relation::Unrelated
                        } else {
                            Relation::Down(e)
                        }
                    }
                }
            })
            .collect();
        let mut relations: Vec<Vec<Relation>> = (0..shapes.len()).map(|_| Vec::new()).collect();
        for ((a, _), r) in pairs.into_iter().zip(computed) {
            relations[a].push(r);
        }
        let adjacency = (0..states.len()).map(|_| OnceLock::new()).collect();
        Some(Space {
            shapes,
            relations,
            states,
            index,
            by_shape,
            adjacency,
        })
    }

    pub fn grid(&self) -> &[Rational] {
        &self.grid
    }

    pub fn max_nodes(&self) -> usize {
        self.max_nodes
    }

    /// Whether intermediate trees are restricted to strict valuations.
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// Number of search states, or `None` when the space exceeds the budget.
    pub fn state_count(&self) -> Option<usize> {
        self.space.as_ref().map(|s| s.states.len())
    }

    fn ints(&self, v: &[u16]) -> Vec<i128> {
        v.iter().map(|&g| self.scaled[g as usize]).collect()
    }

    fn cost(&self, space: &Space, u: usize, w: usize) -> Option<i128> {
        let (a, va) = &space.states[u];
        let (b, vb) = &space.states[w];
        let (x, y) = (self.ints(va), self.ints(vb));
        match &space.relations[*a][*b] {
            Relation::Unrelated => None,
            Relation::Same(autos) => autos
                .iter()
                .map(|aut| {
                    (0..x.len())
                        .map(|i| {
                            let d = x[i] - y[aut[i]];
                            d * d
                        })
                        .sum()
                })
                .min(),
            Relation::Up(embs) => {
                let parent = &space.shapes[*b].tree.parent;
                embs.iter().map(|e| embedding_cost(parent, e, &x, &y)).min()
            }
            Relation::Down(embs) => {
                let parent = &space.shapes[*a].tree.parent;
                embs.iter().map(|e| embedding_cost(parent, e, &y, &x)).min()
            }
        }
    }

    fn neighbors(&self, space: &Space, u: usize) -> Vec<(u32, i128)> {
        let shape = space.states[u].0;
        let candidates: Vec<usize> = (0..space.shapes.len())
            .filter(|&b| !matches!(space.relations[shape][b], Relation::Unrelated))
            .flat_map(|b| space.by_shape[b].iter().copied())
            .filter(|&w| w != u)
            .collect();
        candidates
            .par_iter()
            .filter_map(|&w| self.cost(space, u, w).map(|c| (w as u32, c)))
            .collect()
    }

    fn state_of(&self, space: &Space, t: &MergeTree) -> Result<usize> {
        let (shape, map) = Shape::canonical_of(t.poset().parents());
        let s = space
            .shapes
            .iter()
            .position(|sh| sh.code() == shape.code())
            .ok_or_else(|| Error::OutOfRange("tree larger than max_nodes".into()))?;
        let mut v = vec![0u16; t.len()];
        for i in 0..t.len() {
            let g = self
                .grid
                .binary_search(t.value(i))
                .map_err(|_| Error::OutOfRange("tree value outside the search grid".into()))?;
            v[map[i]] = g as u16;
        }
        let v = canonical_valuation(&space.shapes[s].automorphisms(), &v);
        space
            .index
            .get(&(s, v))
            .copied()
            .ok_or_else(|| Error::OutOfRange("the search is restricted to strict trees".into()))
    }

    fn term(&self, scaled_sq: i128) -> Rational {
        Rational::new(BigInt::from(scaled_sq), &self.scale * &self.scale)
    }

    /// Edit distance between two trees.
    pub fn distance(&self, a: &MergeTree, b: &MergeTree) -> Result<EditDistance> {
        Ok(self.distances_from(a, std::slice::from_ref(b))?.remove(0))
    }

    /// Edit distances from `source` to each target with a single search.
    pub fn distances_from(&self, source: &MergeTree, targets: &[MergeTree]) -> Result<Vec<EditDistance>> {
        for t in std::iter::once(source).chain(targets) {
            if t.len() > self.max_nodes {
                return Err(Error::OutOfRange(format!(
                    "tree with {} nodes exceeds max_nodes = {}",
                    t.len(),
                    self.max_nodes
                )));
            }
        }
        let Some(space) = &self.space else {
            return targets.iter().map(|t| self.fallback(source, t)).collect();
        };
        let src = self.state_of(space, source)?;
        let goals: Vec<usize> = targets.iter().map(|t| self.state_of(space, t)).collect::<Result<_>>()?;
        let n = space.states.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred: Vec<Option<(usize, i128)>> = vec![None; n];
        let mut done = vec![false; n];
        let mut remaining: BTreeSet<usize> = goals.iter().copied().collect();
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(Entry(0.0, src));
        let scale = self.scale.to_f64().unwrap_or(f64::INFINITY);
        while let Some(Entry(d, u)) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            remaining.remove(&u);
            if remaining.is_empty() {
                break;
            }
            let fresh;
            let adj: &Vec<(u32, i128)> = if n <= CACHE_LIMIT {
                space.adjacency[u].get_or_init(|| self.neighbors(space, u))
            } else {
                fresh = self.neighbors(space, u);
                &fresh
            };
            for &(w, c) in adj {
                let w = w as usize;
                if done[w] {
                    continue;
                }
                let nd = d + (c as f64).sqrt() / scale;
                if nd < dist[w] {
                    dist[w] = nd;
                    pred[w] = Some((u, c));
                    heap.push(Entry(nd, w));
                }
            }
        }
        Ok(goals
            .iter()
            .map(|&g| {
                let mut terms = Vec::new();
                let mut cur = g;
                while let Some((p, c)) = pred[cur] {
                    terms.push(self.term(c));
                    cur = p;
                }
                let mut distance = Distance::zero();
                for t in terms.into_iter().rev() {
                    distance.push(t);
                }
                EditDistance {
                    distance,
                    exact: done[g],
                    states: n,
                }
            })
            .collect())
    }

    /// A valid but possibly loose bound used when the space is too large:
    /// the direct elementary step when one exists, otherwise a detour through
    /// a single-node tree.
    fn fallback(&self, a: &MergeTree, b: &MergeTree) -> Result<EditDistance> {
        let mut best: Option<Distance> = elementary_distance(a, b).ok().map(|(d, _)| d);
        for root in [a.value(a.poset().root()), b.value(b.poset().root())] {
            let point = MergeTree::new(TreePoset::new(&[("r", None)])?, vec![root.clone()])?;
            let (d1, _) = elementary_distance(a, &point)?;
            let (d2, _) = elementary_distance(&point, b)?;
            let mut d = Distance::zero();
            for t in d1.terms().iter().chain(d2.terms()) {
                d.push(t.clone());
            }
            if best.as_ref().is_none_or(|cur| d.approx() < cur.approx()) {
                best = Some(d);
            }
        }
        Ok(EditDistance {
            distance: best.expect("a bound always exists"),
            exact: false,
            states: 0,
        })
    }
}

pub fn edit_distance(a: &MergeTree, b: &MergeTree, budget: &EditBudget) -> Result<EditDistance> {
    TreeEditSearch::new(budget, &[a, b])?.distance(a, b)
}
