//! Random generators for discrete Morse functions, merge trees and
//! subcomplexes.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::function::DiscreteFunction;
use crate::merge_tree::MergeTree;
use crate::morse::{is_acyclic_matching, modified_hasse_edges, Matching};
use crate::rational::{frac, Rational};

/// Greedily adds regular covers in random order while the matching stays
/// acyclic.
pub fn random_acyclic_matching<R: Rng + ?Sized>(x: &Complex, rng: &mut R) -> Matching {
    let mut order: Vec<usize> = (0..x.covers().len()).filter(|&e| x.cover(e).regular).collect();
    order.shuffle(rng);
    let mut used = vec![false; x.len()];
    let mut chosen = Vec::new();
    for e in order {
        let c = x.cover(e);
        if used[c.lower] || used[c.upper] || rng.gen_bool(0.3) {
            continue;
        }
        chosen.push(e);
        if is_acyclic_matching(x, &Matching::new(chosen.clone())) {
            used[c.lower] = true;
            used[c.upper] = true;
        } else {
            chosen.pop();
        }
    }
    Matching::new(chosen)
}

/// Topological order of `n` nodes under `edges`, choosing uniformly among the
/// available nodes at each step.
fn random_topological_order<R: Rng + ?Sized>(n: usize, edges: &[(usize, usize)], rng: &mut R) -> Vec<usize> {
    let mut indegree = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for &(a, b) in edges {
        indegree[b] += 1;
        out[a].push(b);
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while !ready.is_empty() {
        let k = rng.gen_range(0..ready.len());
        let v = ready.swap_remove(k);
        order.push(v);
        for &w in &out[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(w);
            }
        }
    }
    assert_eq!(order.len(), n, "graph has a cycle");
    order
}

fn random_step<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    frac(rng.gen_range(1..=8), rng.gen_range(1..=4))
}

/// An injective discrete Morse function whose gradient is a random acyclic
/// matching.
pub fn random_morse_function<R: Rng + ?Sized>(x: &Complex, rng: &mut R) -> DiscreteFunction {
    let m = random_acyclic_matching(x, rng);
    // edges point from the larger to the smaller value
    let order = random_topological_order(x.len(), &modified_hasse_edges(x, &m), rng);
    let mut values = vec![Rational::default(); x.len()];
    let mut current = frac(rng.gen_range(-8..=8), 2);
    for &v in order.iter().rev() {
        values[v] = current.clone();
        current += random_step(rng);
    }
    DiscreteFunction::from_values(x, values).expect("one value per cell")
}

/// A Morse–Benedetti function: a random linear extension of the face poset
/// with some consecutive cover pairs sharing a value.
pub fn random_mb_function<R: Rng + ?Sized>(x: &Complex, rng: &mut R) -> Result<DiscreteFunction> {
    if !x.is_regular() {
        return Err(Error::NotRegular);
    }
    let edges: Vec<(usize, usize)> = x.covers().iter().map(|c| (c.lower, c.upper)).collect();
    let order = random_topological_order(x.len(), &edges, rng);
    let mut values = vec![Rational::default(); x.len()];
    let mut current = frac(rng.gen_range(-8..=8), 2);
    let mut previous_merged = false;
    for (k, &v) in order.iter().enumerate() {
        let merge = k > 0 && !previous_merged && x.find_cover(order[k - 1], v).is_some() && rng.gen_bool(0.5);
        if !merge && k > 0 {
            current += random_step(rng);
        }
        values[v] = current.clone();
        previous_merged = merge;
    }
    DiscreteFunction::from_values(x, values)
}

/// A random well-branched merge tree with `leaves` leaves: distinct leaf
/// values, and each inner node strictly above its children. Leaves are named
/// `l0, l1, …` and inner nodes `n0, n1, …`.
pub fn random_well_branched_tree<R: Rng + ?Sized>(leaves: usize, rng: &mut R) -> MergeTree {
    assert!(leaves > 0, "a merge tree has at least one leaf");
    let mut leaf_values: Vec<i64> = (0..leaves as i64).collect();
    leaf_values.shuffle(rng);
    let mut nodes: Vec<(String, Option<usize>, Rational)> = leaf_values
        .iter()
        .enumerate()
        .map(|(k, &v)| (format!("l{k}"), None, Rational::from_integer(v.into())))
        .collect();
    let mut roots: Vec<usize> = (0..leaves).collect();
    let mut inner = 0;
    while roots.len() > 1 {
        let k = if roots.len() >= 3 && rng.gen_bool(0.25) { 3 } else { 2 };
        roots.shuffle(rng);
        let children: Vec<usize> = roots.drain(..k).collect();
        let top = children.iter().map(|&c| nodes[c].2.clone()).max().expect("children");
        let id = nodes.len();
        nodes.push((format!("n{inner}"), None, top + random_step(rng)));
        inner += 1;
        for c in children {
            nodes[c].1 = Some(id);
        }
        roots.push(id);
    }
    let triples: Vec<(String, Option<String>, Rational)> = nodes
        .iter()
        .map(|(id, p, v)| (id.clone(), p.map(|p| nodes[p].0.clone()), v.clone()))
        .collect();
    MergeTree::from_nodes(&triples).expect("valid random tree")
}

/// The closure of a random nonempty set of cells.
pub fn random_subcomplex<R: Rng + ?Sized>(x: &Complex, rng: &mut R) -> Complex {
    let mut keep = vec![false; x.len()];
    let first = rng.gen_range(0..x.len());
    for i in 0..x.len() {
        if i == first || rng.gen_bool(0.4) {
            keep[i] = true;
            for &j in x.closure_of(i) {
                keep[j] = true;
            }
        }
    }
    x.induced(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::builtin;
    use crate::morse::{is_discrete_morse, is_morse_benedetti};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_produce_what_they_promise() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for name in ["simplex2", "boundary3", "cycle4", "hexagon", "disk_nr"] {
            let x = builtin(name).unwrap();
            for _ in 0..30 {
                let f = random_morse_function(&x, &mut rng);
                assert!(is_discrete_morse(&x, &f) && f.is_injective(), "{name}");
                if x.is_regular() {
                    let g = random_mb_function(&x, &mut rng).unwrap();
                    assert!(is_morse_benedetti(&x, &g).unwrap(), "{name}");
                }
                let sub = random_subcomplex(&x, &mut rng);
                assert!(!sub.is_empty());
            }
        }
        for leaves in 1..8 {
            let t = random_well_branched_tree(leaves, &mut rng);
            assert!(t.classify().well_branched);
            assert_eq!(t.poset().leaves().len(), leaves);
        }
    }
}
