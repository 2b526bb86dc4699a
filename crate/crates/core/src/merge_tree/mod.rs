//! Merge-tree-type posets, merge trees and their edit distance.

mod canon;
mod distance;
mod edit;
mod induced;

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use canon::{enumerate_shapes, Shape};
pub use distance::{edit_distance, EditBudget, EditDistance, TreeEditSearch};
pub use edit::{apply_edit, apply_edit_valued, elementary_distance, eta_star, Attach, EditMove, Inclusion, Provenance};
pub use induced::induced_merge_tree;

/// A finite poset with a unique maximum in which every element below the
/// root has exactly one parent and every inner node has at least two children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePoset {
    ids: Vec<String>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl TreePoset {
    /// Builds a poset from `(id, parent id)` pairs. Nodes are stored in id order.
    pub fn new<S: AsRef<str>>(nodes: &[(S, Option<S>)]) -> Result<Self> {
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by(|&a, &b| nodes[a].0.as_ref().cmp(nodes[b].0.as_ref()));
        let ids: Vec<String> = order.iter().map(|&k| nodes[k].0.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.as_str(), i).is_some() {
                return Err(Error::InvalidTree(format!("duplicate node `{id}`")));
            }
        }
        let mut parent = Vec::with_capacity(ids.len());
        for &k in &order {
            parent.push(match &nodes[k].1 {
                None => None,
                Some(p) => Some(
                    *index
                        .get(p.as_ref())
                        .ok_or_else(|| Error::InvalidTree(format!("unknown parent `{}`", p.as_ref())))?,
                ),
            });
        }
        Self::from_parents(ids, parent)
    }

    pub(crate) fn from_parents(ids: Vec<String>, parent: Vec<Option<usize>>) -> Result<Self> {
        let n = ids.len();
        let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
        let root = match roots.as_slice() {
            [r] => *r,
            [] => return Err(Error::InvalidTree("no root".into())),
            _ => return Err(Error::InvalidTree("more than one root".into())),
        };
        let mut children = vec![Vec::new(); n];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(i);
            }
        }
        for i in 0..n {
            let mut steps = 0;
            let mut cur = i;
            while let Some(p) = parent[cur] {
                cur = p;
                steps += 1;
                if steps > n {
                    return Err(Error::InvalidTree(format!("cycle through `{}`", ids[i])));
                }
            }
            if children[i].len() == 1 {
                return Err(Error::InvalidTree(format!(
                    "inner node `{}` has a single child",
                    ids[i]
                )));
            }
        }
        Ok(Self {
            ids,
            parent,
            children,
            root,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.ids
            .binary_search_by(|probe| probe.as_str().cmp(id))
            .map_err(|_| Error::InvalidTree(format!("unknown node `{id}`")))
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.children[i].is_empty()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_leaf(i)).collect()
    }

    /// `a ≤ b` in the poset.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        let mut cur = a;
        loop {
            if cur == b {
                return true;
            }
            match self.parent[cur] {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    /// The nodes of the subtree rooted at `y`, `y` included.
    pub fn subtree(&self, y: usize) -> Vec<usize> {
        let mut out = vec![y];
        let mut k = 0;
        while k < out.len() {
            out.extend_from_slice(&self.children[out[k]]);
            k += 1;
        }
        out
    }

    pub fn pairs(&self) -> Vec<(String, Option<String>)> {
        (0..self.len())
            .map(|i| (self.ids[i].clone(), self.parent[i].map(|p| self.ids[p].clone())))
            .collect()
    }
}

/// Order-preserving rational valuation of a [`TreePoset`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeTree {
    poset: TreePoset,
    values: Vec<Rational>,
    witnesses: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub strict: bool,
    pub well_branched: bool,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        if self.well_branched {
            "well_branched"
        } else if self.strict {
            "strict"
        } else {
            "general"
        }
    }
}

impl MergeTree {
    pub fn new(poset: TreePoset, values: Vec<Rational>) -> Result<Self> {
        if values.len() != poset.len() {
            return Err(Error::InvalidTree(format!(
                "{} values for {} nodes",
                values.len(),
                poset.len()
            )));
        }
        for i in 0..poset.len() {
            if let Some(p) = poset.parent(i) {
                if values[i] > values[p] {
                    return Err(Error::InvalidTree(format!(
                        "value of `{}` exceeds the value of its parent `{}`",
                        poset.id(i),
                        poset.id(p)
                    )));
                }
            }
        }
        Ok(Self {
            poset,
            values,
            witnesses: BTreeMap::new(),
        })
    }

    /// Builds a tree from `(id, parent, value)` triples.
    pub fn from_nodes<S: AsRef<str>>(nodes: &[(S, Option<S>, Rational)]) -> Result<Self> {
        let pairs: Vec<(&str, Option<&str>)> = nodes
            .iter()
            .map(|(i, p, _)| (i.as_ref(), p.as_ref().map(|s| s.as_ref())))
            .collect();
        let poset = TreePoset::new(&pairs)?;
        let mut values = vec![Rational::default(); poset.len()];
        for (id, _, v) in nodes {
            values[poset.index_of(id.as_ref())?] = v.clone();
        }
        Self::new(poset, values)
    }

    pub(crate) fn with_witnesses(mut self, witnesses: BTreeMap<String, Vec<String>>) -> Self {
        self.witnesses = witnesses;
        self
    }

    pub fn poset(&self) -> &TreePoset {
        &self.poset
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn value_of(&self, id: &str) -> Result<&Rational> {
        Ok(&self.values[self.poset.index_of(id)?])
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    /// Critical edges recorded for each inner node of an induced merge tree.
    pub fn witnesses(&self) -> &BTreeMap<String, Vec<String>> {
        &self.witnesses
    }

    pub fn classify(&self) -> Classification {
        let p = &self.poset;
        let strict = (0..p.len()).all(|i| p.parent(i).is_none_or(|q| self.values[i] < self.values[q]));
        let well_branched = strict
            && (0..p.len()).all(|y| {
                let sub = p.subtree(y);
                let min = sub
                    .iter()
                    .map(|&i| &self.values[i])
                    .min()
                    .expect("subtrees are nonempty");
                sub.iter().filter(|&&i| &self.values[i] == min).count() == 1
            });
        Classification { strict, well_branched }
    }

    pub fn is_injective(&self) -> bool {
        let mut v: Vec<&Rational> = self.values.iter().collect();
        v.sort();
        v.windows(2).all(|w| w[0] != w[1])
    }

    /// `(id, parent, value)` triples in id order.
    pub fn nodes(&self) -> Vec<(String, Option<String>, Rational)> {
        (0..self.len())
            .map(|i| {
                (
                    self.poset.id(i).to_string(),
                    self.poset.parent(i).map(|q| self.poset.id(q).to_string()),
                    self.values[i].clone(),
                )
            })
            .collect()
    }

    /// Squared euclidean distance to a tree on the same labeled poset.
    pub fn squared_distance_same_poset(&self, other: &MergeTree) -> Option<Rational> {
        if self.poset != other.poset {
            return None;
        }
        Some(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a - b) * (a - b))
                .sum(),
        )
    }
}

/// Hyperplanes of the leaf, order and braid arrangements of a tree poset as
/// pairs of node indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeArrangements {
    /// `(leaf, parent)` pairs.
    pub leaf: Vec<(usize, usize)>,
    /// `(x, y)` with `x < y` in the poset.
    pub order: Vec<(usize, usize)>,
    /// All unordered pairs `(x, y)` with `x < y` as indices.
    pub braid: Vec<(usize, usize)>,
}

pub fn tree_arrangements(p: &TreePoset) -> TreeArrangements {
    let n = p.len();
    let leaf = (0..n)
        .filter(|&x| p.is_leaf(x))
        .filter_map(|x| p.parent(x).map(|y| (x, y)))
        .collect();
    let mut order = Vec::new();
    for x in 0..n {
        let mut cur = p.parent(x);
        while let Some(y) = cur {
            order.push((x, y));
            cur = p.parent(y);
        }
    }
    order.sort_unstable();
    let braid = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    TreeArrangements { leaf, order, braid }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    pub(crate) fn tree(layout: &[(&str, Option<&str>, i64)]) -> MergeTree {
        let nodes: Vec<(&str, Option<&str>, Rational)> = layout.iter().map(|(i, p, v)| (*i, *p, int(*v))).collect();
        MergeTree::from_nodes(&nodes).unwrap()
    }

    #[test]
    fn classification_examples() {
        let t = tree(&[("a", Some("r"), 0), ("b", Some("r"), 1), ("r", None, 2)]);
        assert_eq!(t.classify().name(), "well_branched");
        let t = tree(&[("a", Some("r"), 0), ("b", Some("r"), 0), ("r", None, 1)]);
        assert_eq!(
            t.classify(),
            Classification {
                strict: true,
                well_branched: false
            }
        );
        let t = tree(&[("a", Some("r"), 0), ("b", Some("r"), 0), ("r", None, 0)]);
        assert_eq!(t.classify().name(), "general");
    }

    #[test]
    fn structural_errors() {
        let unary = TreePoset::new(&[("a", Some("r")), ("r", None)]);
        assert!(matches!(unary, Err(Error::InvalidTree(_))));
        let two_roots = TreePoset::new(&[("a", None), ("r", None)]);
        assert!(matches!(two_roots, Err(Error::InvalidTree(_))));
        let cyc = TreePoset::new(&[
            ("a", Some("b")),
            ("b", Some("a")),
            ("c", Some("d")),
            ("d", Some("c")),
            ("r", None),
        ]);
        assert!(matches!(cyc, Err(Error::InvalidTree(_))));
        let nodes = [("a", Some("r"), int(3)), ("b", Some("r"), int(0)), ("r", None, int(1))];
        assert!(matches!(MergeTree::from_nodes(&nodes), Err(Error::InvalidTree(_))));
    }

    #[test]
    fn arrangements_nest() {
        let t = tree(&[("a", Some("r"), 0), ("b", Some("r"), 1), ("r", None, 2)]);
        let arr = tree_arrangements(t.poset());
        let named = |v: &[(usize, usize)]| -> Vec<(String, String)> {
            v.iter()
                .map(|&(a, b)| (t.poset().id(a).to_string(), t.poset().id(b).to_string()))
                .collect()
        };
        assert_eq!(
            named(&arr.leaf),
            vec![("a".into(), "r".into()), ("b".into(), "r".into())]
        );
        assert_eq!(named(&arr.order), named(&arr.leaf));
        assert_eq!(arr.braid.len(), 3);
        let single = tree(&[("b", None, 1)]);
        let arr = tree_arrangements(single.poset());
        assert!(arr.leaf.is_empty() && arr.order.is_empty() && arr.braid.is_empty());

        let deep = tree(&[
            ("a", Some("y"), 0),
            ("b", Some("y"), 1),
            ("y", Some("r"), 3),
            ("c", Some("r"), 2),
            ("r", None, 4),
        ]);
        let arr = tree_arrangements(deep.poset());
        let p = deep.poset();
        for &(x, y) in &arr.order {
            assert!(p.leq(x, y) && x != y);
        }
        let comparable = (0..p.len())
            .flat_map(|a| (0..p.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && p.leq(a, b))
            .count();
        assert_eq!(arr.order.len(), comparable);
        for l in &arr.leaf {
            assert!(arr.order.contains(l));
        }
    }
}
