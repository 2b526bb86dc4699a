//! Barcodes: disjoint unions of closed bars with rational endpoints.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::distance::Distance;
use crate::error::{Error, Result};
use crate::merge_tree::{EditDistance, MergeTree};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bar {
    pub id: String,
    pub birth: Rational,
    pub death: Rational,
}

/// A finite set of bars, kept sorted by id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(mut bars: Vec<Bar>) -> Result<Self> {
        bars.sort_by(|a, b| a.id.cmp(&b.id));
        for w in bars.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::InvalidBarcode(format!("duplicate bar `{}`", w[0].id)));
            }
        }
        if let Some(b) = bars.iter().find(|b| b.birth > b.death) {
            return Err(Error::InvalidBarcode(format!("bar `{}` dies before it is born", b.id)));
        }
        Ok(Self { bars })
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Bar> {
        self.bars.iter().find(|b| b.id == id)
    }

    pub fn squared_norm_difference(&self, other: &Barcode) -> Option<Rational> {
        (self.len() == other.len()).then(|| {
            self.coordinates()
                .iter()
                .zip(other.coordinates())
                .fold(Rational::zero(), |acc, (x, y)| acc + (x - &y) * (x - &y))
        })
    }

    /// Endpoints as a coordinate vector `(birth₀, death₀, birth₁, …)`.
    pub fn coordinates(&self) -> Vec<Rational> {
        self.bars
            .iter()
            .flat_map(|b| [b.birth.clone(), b.death.clone()])
            .collect()
    }
}

/// Elder rule. Inner nodes are visited by increasing value (ties by id) and
/// each takes the smallest unpaired leaf below it, giving the bar
/// `[θ(leaf), θ(node)]`. A leaf left over dies at its parent; a lone root
/// leaf gives a bar of length zero. Bars are named after their leaves.
pub fn induced_barcode(theta: &MergeTree) -> Result<Barcode> {
    if !theta.classify().well_branched {
        return Err(Error::NotWellBranched);
    }
    let p = theta.poset();
    let mut inner: Vec<usize> = (0..p.len()).filter(|&i| !p.is_leaf(i)).collect();
    inner.sort_by(|&a, &b| theta.value(a).cmp(theta.value(b)).then_with(|| p.id(a).cmp(p.id(b))));
    let mut death: Vec<Option<usize>> = vec![None; p.len()];
    for y in inner {
        let leaf = p
            .subtree(y)
            .into_iter()
            .filter(|&x| p.is_leaf(x) && death[x].is_none())
            .min_by(|&a, &b| theta.value(a).cmp(theta.value(b)).then_with(|| p.id(a).cmp(p.id(b))));
        if let Some(x) = leaf {
            death[x] = Some(y);
        }
    }
    let bars = p
        .leaves()
        .into_iter()
        .map(|x| {
            let y = death[x].or(p.parent(x)).unwrap_or(x);
            Bar {
                id: p.id(x).to_string(),
                birth: theta.value(x).clone(),
                death: theta.value(y).clone(),
            }
        })
        .collect();
    Barcode::new(bars)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BarcodeEditMove {
    /// `perm[i]` is the new position of bar `i`; ids are taken over.
    Reorder(Vec<usize>),
    Collapse(String),
    Create(Bar),
}

pub fn apply_barcode_edit(beta: &Barcode, mv: &BarcodeEditMove) -> Result<Barcode> {
    match mv {
        BarcodeEditMove::Reorder(perm) => {
            let mut seen = vec![false; beta.len()];
            if perm.len() != beta.len()
                || perm
                    .iter()
                    .any(|&j| j >= beta.len() || std::mem::replace(&mut seen[j], true))
            {
                return Err(Error::InvalidBarcode("reorder must be a bijection of bars".into()));
            }
            let mut bars = beta.bars.clone();
            for (i, &j) in perm.iter().enumerate() {
                bars[j].birth = beta.bars[i].birth.clone();
                bars[j].death = beta.bars[i].death.clone();
            }
            Barcode::new(bars)
        }
        BarcodeEditMove::Collapse(id) => {
            if beta.get(id).is_none() {
                return Err(Error::InvalidBarcode(format!("no bar `{id}`")));
            }
            Barcode::new(beta.bars.iter().filter(|b| &b.id != id).cloned().collect())
        }
        BarcodeEditMove::Create(bar) => {
            let mut bars = beta.bars.clone();
            bars.push(bar.clone());
            Barcode::new(bars)
        }
    }
}

/// Minimum over injections `rows → columns` of the summed costs
/// (`rows ≤ columns`), by the Hungarian method with potentials.
pub(crate) fn assignment(cost: &[Vec<i128>]) -> (i128, Vec<usize>) {
    let n = cost.len();
    if n == 0 {
        return (0, Vec::new());
    }
    let m = cost[0].len();
    assert!(n <= m, "more rows than columns");
    let inf = i128::MAX / 4;
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut rows = vec![0; n];
    for j in 1..=m {
        if p[j] != 0 {
            rows[p[j] - 1] = j - 1;
        }
    }
    let total = rows.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
    (total, rows)
}

type ScaledBar = (i128, i128);

/// Cost of one edit step between bar multisets whose sizes differ by at most
/// one: the smaller one is embedded and bars outside the image are free.
fn step_cost(a: &[ScaledBar], b: &[ScaledBar]) -> i128 {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let cost: Vec<Vec<i128>> = small
        .iter()
        .map(|x| {
            large
                .iter()
                .map(|y| (x.0 - y.0) * (x.0 - y.0) + (x.1 - y.1) * (x.1 - y.1))
                .collect()
        })
        .collect();
    assignment(&cost).0
}

/// Endpoints of several barcodes over a common denominator.
fn scaled(codes: &[&Barcode]) -> Result<(Vec<Vec<ScaledBar>>, BigInt)> {
    let scale = codes
        .iter()
        .flat_map(|c| c.bars())
        .flat_map(|b| [b.birth.denom(), b.death.denom()])
        .fold(BigInt::one(), |acc, d| acc.lcm(d));
    let int = |v: &Rational| {
        (v.numer() * (&scale / v.denom()))
            .to_i128()
            .filter(|x| x.unsigned_abs() < 1u128 << 60)
            .ok_or_else(|| Error::OutOfRange("bar endpoints too large".into()))
    };
    let bars = codes
        .iter()
        .map(|c| c.bars().iter().map(|b| Ok((int(&b.birth)?, int(&b.death)?))).collect())
        .collect::<Result<_>>()?;
    Ok((bars, scale))
}

/// Cost of a single edit step between two barcodes whose sizes differ by at
/// most one, as the square of its euclidean length.
pub fn barcode_step_cost(a: &Barcode, b: &Barcode) -> Result<Rational> {
    if a.len().abs_diff(b.len()) > 1 {
        return Err(Error::InvalidBarcode(
            "a single step changes the bar count by at most one".into(),
        ));
    }
    let (bars, scale) = scaled(&[a, b])?;
    Ok(Rational::new(
        BigInt::from(step_cost(&bars[0], &bars[1])),
        &scale * &scale,
    ))
}

/// Limits for [`barcode_edit_distance`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BarBudget {
    /// Largest intermediate barcode; defaults to the larger input.
    pub max_bars: Option<usize>,
    /// Longest edit sequence considered.
    pub max_steps: Option<usize>,
}

/// An edit sequence from `a` to `b` through barcodes with at most two more
/// bars than needed, every step of which costs nothing: shrink `a` to one
/// bar, add the first bar of `b`, drop the remaining bar of `a`, then add the
/// rest of `b`.
pub fn zero_cost_sequence(a: &Barcode, b: &Barcode) -> Vec<Barcode> {
    let mut seq = vec![a.clone()];
    let mut cur = a.clone();
    let keep = a.bars()[0].id.clone();
    for bar in &a.bars()[1..] {
        cur = apply_barcode_edit(&cur, &BarcodeEditMove::Collapse(bar.id.clone())).expect("bar exists");
        seq.push(cur.clone());
    }
    let fresh = |k: usize, cur: &Barcode| {
        let mut id = b.bars()[k].id.clone();
        while cur.get(&id).is_some() {
            id.push('\'');
        }
        Bar {
            id,
            ..b.bars()[k].clone()
        }
    };
    cur = apply_barcode_edit(&cur, &BarcodeEditMove::Create(fresh(0, &cur))).expect("fresh id");
    seq.push(cur.clone());
    cur = apply_barcode_edit(&cur, &BarcodeEditMove::Collapse(keep)).expect("bar exists");
    seq.push(cur.clone());
    for k in 1..b.len() {
        cur = apply_barcode_edit(&cur, &BarcodeEditMove::Create(fresh(k, &cur))).expect("fresh id");
        seq.push(cur.clone());
    }
    seq
}

/// Edit distance on barcodes. Intermediate barcodes are nonempty and have at
/// most `max_bars` bars. With room for two bars the zero-cost sequence of
/// [`zero_cost_sequence`] makes the distance vanish; with a single bar only
/// direct reassignment is possible. When `max_steps` is too small for the
/// zero-cost sequence, the bound from collapsing surplus bars and reassigning
/// the rest is returned with `exact = false`.
pub fn barcode_edit_distance(a: &Barcode, b: &Barcode, budget: &BarBudget) -> Result<EditDistance> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidBarcode("edit distances need nonempty barcodes".into()));
    }
    let largest = a.len().max(b.len());
    let max_bars = budget.max_bars.unwrap_or(largest);
    let max_steps = budget.max_steps.unwrap_or(usize::MAX);
    if max_bars == 0 || max_steps == 0 {
        return Err(Error::OutOfRange("budgets must be positive".into()));
    }
    if max_bars < largest {
        return Err(Error::OutOfRange(format!(
            "max_bars = {max_bars} is below an input with {largest} bars"
        )));
    }
    let (bars, scale) = scaled(&[a, b])?;
    let direct = Distance::from_squared(Rational::new(
        BigInt::from(step_cost(&bars[0], &bars[1])),
        &scale * &scale,
    ));
    if a == b {
        return Ok(EditDistance {
            distance: Distance::zero(),
            exact: true,
            states: 1,
        });
    }
    if max_bars == 1 {
        return Ok(EditDistance {
            distance: direct,
            exact: true,
            states: 2,
        });
    }
    let steps = a.len() + b.len();
    if steps <= max_steps {
        Ok(EditDistance {
            distance: Distance::zero(),
            exact: true,
            states: steps + 1,
        })
    } else {
        Ok(EditDistance {
            distance: direct,
            exact: false,
            states: a.len().abs_diff(b.len()) + 2,
        })
    }
}

/// Coordinate hyperplanes on the space of a barcode poset, with coordinate
/// `2i` the birth and `2i + 1` the death of bar `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarcodeArrangements {
    pub order: Vec<(usize, usize)>,
    pub braid: Vec<(usize, usize)>,
}

pub fn barcode_arrangements(beta: &Barcode) -> BarcodeArrangements {
    let k = 2 * beta.len();
    BarcodeArrangements {
        order: (0..beta.len()).map(|i| (2 * i, 2 * i + 1)).collect(),
        braid: (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect(),
    }
}

/// Coordinate labels `id.birth` / `id.death` matching [`barcode_arrangements`].
pub fn coordinate_labels(beta: &Barcode) -> Vec<String> {
    beta.bars()
        .iter()
        .flat_map(|b| [format!("{}.birth", b.id), format!("{}.death", b.id)])
        .collect()
}
