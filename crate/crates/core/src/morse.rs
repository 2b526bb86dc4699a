//! Discrete Morse functions, their gradient matchings and gradient paths.

use std::collections::BTreeMap;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::function::DiscreteFunction;
use crate::rational::Rational;

/// The first failing Forman condition, reported for the smallest cell id.
///
/// Condition 1: more than one coface with value at most the cell's value.
/// Condition 2: more than one face with value at least the cell's value.
/// Condition 3: the value does not strictly increase across a non-regular
/// cover (reported at the upper cell).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub cell: String,
    pub condition: u8,
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::NotMorse {
            cell: v.cell,
            condition: v.condition,
        }
    }
}

pub fn first_violation(x: &Complex, f: &DiscreteFunction) -> Option<Violation> {
    for &i in x.id_order() {
        let fi = f.value(i);
        let low_cofaces = x.cofaces1_of(i).filter(|&t| f.value(t) <= fi).count();
        if low_cofaces > 1 {
            return Some(Violation {
                cell: x.id(i).to_string(),
                condition: 1,
            });
        }
        let high_faces = x.faces1_of(i).filter(|&g| f.value(g) >= fi).count();
        if high_faces > 1 {
            return Some(Violation {
                cell: x.id(i).to_string(),
                condition: 2,
            });
        }
        let irregular_tie = x.down_covers(i).iter().any(|&e| {
            let c = x.cover(e);
            !c.regular && f.value(c.lower) >= fi
        });
        if irregular_tie {
            return Some(Violation {
                cell: x.id(i).to_string(),
                condition: 3,
            });
        }
    }
    None
}

pub fn check_morse(x: &Complex, f: &DiscreteFunction) -> Result<()> {
    f.check_len(x)?;
    match first_violation(x, f) {
        Some(v) => Err(v.into()),
        None => Ok(()),
    }
}

pub fn is_discrete_morse(x: &Complex, f: &DiscreteFunction) -> bool {
    f.len() == x.len() && first_violation(x, f).is_none()
}

/// A set of covers, stored as sorted cover indices of the owning complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Matching {
    pub covers: Vec<usize>,
}

impl Matching {
    pub fn new(mut covers: Vec<usize>) -> Self {
        covers.sort_unstable();
        covers.dedup();
        Self { covers }
    }

    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }

    /// Each cell's matched partner, or `None` when some cell is used twice.
    pub fn partners(&self, x: &Complex) -> Option<Vec<Option<usize>>> {
        let mut partner = vec![None; x.len()];
        for &e in &self.covers {
            let c = x.cover(e);
            if partner[c.lower].is_some() || partner[c.upper].is_some() {
                return None;
            }
            partner[c.lower] = Some(c.upper);
            partner[c.upper] = Some(c.lower);
        }
        Some(partner)
    }

    pub fn is_partial_matching(&self, x: &Complex) -> bool {
        self.partners(x).is_some()
    }

    /// `(lower, upper)` id pairs in cover order.
    pub fn pairs(&self, x: &Complex) -> Vec<(String, String)> {
        self.covers
            .iter()
            .map(|&e| {
                let c = x.cover(e);
                (x.id(c.lower).to_string(), x.id(c.upper).to_string())
            })
            .collect()
    }
}

/// `∇f`: every cover whose upper value does not exceed its lower value.
pub fn induced_matching(x: &Complex, f: &DiscreteFunction) -> Result<Matching> {
    check_morse(x, f)?;
    Ok(matching_unchecked(x, f))
}

pub(crate) fn matching_unchecked(x: &Complex, f: &DiscreteFunction) -> Matching {
    let covers = (0..x.covers().len())
        .filter(|&e| {
            let c = x.cover(e);
            f.value(c.upper) <= f.value(c.lower)
        })
        .collect();
    Matching { covers }
}

/// Unmatched cells grouped by dimension; ids sorted within a group and every
/// dimension of the complex present.
pub fn critical_cells(x: &Complex, f: &DiscreteFunction) -> Result<BTreeMap<usize, Vec<String>>> {
    let m = induced_matching(x, f)?;
    Ok(critical_of_matching(x, &m))
}

pub fn critical_of_matching(x: &Complex, m: &Matching) -> BTreeMap<usize, Vec<String>> {
    let mut matched = vec![false; x.len()];
    for &e in &m.covers {
        let c = x.cover(e);
        matched[c.lower] = true;
        matched[c.upper] = true;
    }
    let mut out: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    if let Some(top) = x.max_dim() {
        for d in 0..=top {
            out.insert(d, Vec::new());
        }
    }
    for &i in x.id_order() {
        if !matched[i] {
            out.entry(x.dim(i)).or_default().push(x.id(i).to_string());
        }
    }
    out
}

/// Directed edges `(from, to)` of the Hasse diagram with the matched covers
/// reversed. Unmatched covers point from the upper to the lower cell.
pub fn modified_hasse_edges(x: &Complex, m: &Matching) -> Vec<(usize, usize)> {
    let mut matched = vec![false; x.covers().len()];
    for &e in &m.covers {
        matched[e] = true;
    }
    x.covers()
        .iter()
        .enumerate()
        .map(|(e, c)| {
            if matched[e] {
                (c.lower, c.upper)
            } else {
                (c.upper, c.lower)
            }
        })
        .collect()
}

pub fn modified_hasse(x: &Complex, f: &DiscreteFunction) -> Result<Vec<(usize, usize)>> {
    let m = induced_matching(x, f)?;
    Ok(modified_hasse_edges(x, &m))
}

/// Kahn's algorithm on a directed graph with `n` nodes.
pub(crate) fn is_dag(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut indeg = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for &(a, b) in edges {
        out[a].push(b);
        indeg[b] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    seen == n
}

/// Whether reversing the covers of `m` leaves the Hasse diagram acyclic.
pub fn is_acyclic_matching(x: &Complex, m: &Matching) -> bool {
    is_dag(x.len(), &modified_hasse_edges(x, m))
}

fn semi_injective_and_generic(x: &Complex, f: &DiscreteFunction) -> bool {
    let mut fibers: BTreeMap<&Rational, Vec<usize>> = BTreeMap::new();
    for i in 0..x.len() {
        fibers.entry(f.value(i)).or_default().push(i);
    }
    fibers.values().all(|cells| match cells.as_slice() {
        [_] => true,
        [a, b] => x.comparable(*a, *b),
        _ => false,
    })
}

/// Monotone along all face relations, fibers of size at most two, and equal
/// values only on nested cells.
pub fn is_morse_benedetti(x: &Complex, f: &DiscreteFunction) -> Result<bool> {
    if !x.is_regular() {
        return Err(Error::NotRegular);
    }
    f.check_len(x)?;
    let monotone = (0..x.len()).all(|t| x.closure_of(t).iter().all(|&s| f.value(s) <= f.value(t)));
    Ok(monotone && semi_injective_and_generic(x, f))
}

/// Discrete Morse, semi-injective and generic.
pub fn is_weak_morse_benedetti(x: &Complex, f: &DiscreteFunction) -> Result<bool> {
    if !x.is_regular() {
        return Err(Error::NotRegular);
    }
    f.check_len(x)?;
    Ok(is_discrete_morse(x, f) && semi_injective_and_generic(x, f))
}

/// `(1 − t)·f + t·dim` for `t` in `[0, 1]`.
pub fn straight_line(x: &Complex, f: &DiscreteFunction, t: &Rational) -> Result<DiscreteFunction> {
    f.check_len(x)?;
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    if *t < zero || *t > one {
        return Err(Error::OutOfRange(format!("t = {t} is outside [0, 1]")));
    }
    let dim = DiscreteFunction::dimension(x);
    Ok(dim.affine_combination(f, t))
}

/// A gradient path in the 1-skeleton: a critical edge, one of its vertices,
/// then alternating matched edges and vertices until a critical vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradientPath {
    pub cells: Vec<usize>,
}

impl GradientPath {
    pub fn ids(&self, x: &Complex) -> Vec<String> {
        self.cells.iter().map(|&i| x.id(i).to_string()).collect()
    }

    /// The critical vertex the path ends in.
    pub fn end(&self) -> usize {
        *self.cells.last().expect("gradient paths are nonempty")
    }
}

/// All maximal gradient paths leaving the critical edge `edge`, one per
/// boundary vertex, in vertex id order.
pub fn gradient_paths_from(x: &Complex, f: &DiscreteFunction, edge: &str) -> Result<Vec<GradientPath>> {
    if !x.is_regular() {
        return Err(Error::NotRegular);
    }
    let m = induced_matching(x, f)?;
    let tau = x.index_of(edge)?;
    let partner = m.partners(x).ok_or(Error::NotCriticalEdge(edge.to_string()))?;
    if x.dim(tau) != 1 || partner[tau].is_some() {
        return Err(Error::NotCriticalEdge(edge.to_string()));
    }
    let mut starts: Vec<usize> = x.faces1_of(tau).collect();
    starts.sort_by(|&a, &b| x.id(a).cmp(x.id(b)));
    let mut paths = Vec::with_capacity(starts.len());
    for v in starts {
        let mut cells = vec![tau, v];
        let mut current = v;
        while let Some(e) = partner[current] {
            cells.push(e);
            let next = x
                .faces1_of(e)
                .find(|&w| w != current)
                .expect("edges of a regular complex have two vertices");
            cells.push(next);
            current = next;
            if cells.len() > 2 * x.len() + 2 {
                unreachable!("gradient paths of a Morse function are acyclic");
            }
        }
        paths.push(GradientPath { cells });
    }
    Ok(paths)
}
