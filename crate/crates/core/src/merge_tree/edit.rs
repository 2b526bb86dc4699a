//! Edit moves on merge-tree posets, the inclusions they induce, the η_*
//! extension of valuations and the elementary euclidean distance.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;

use super::canon::{isomorphisms, Rooted, Shape};
use super::{MergeTree, TreePoset};
use crate::distance::Distance;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Where a new leaf is attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Attach {
    /// Below an existing inner node.
    Existing { parent: String },
    /// Below a new node `parent` inserted directly above the existing node
    /// `below` (possibly above the root).
    NewParent { parent: String, below: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditMove {
    Identity,
    AddLeaf {
        leaf: String,
        attach: Attach,
    },
    /// Removes a leaf, and its parent too when that parent is left with one child.
    RemoveLeaf {
        leaf: String,
    },
    /// Moves `lower_children` of `node` below a new node `lower` that becomes
    /// a child of `node`.
    SplitInner {
        node: String,
        lower: String,
        lower_children: Vec<String>,
    },
    /// Contracts the edge between inner nodes `lower` and its parent `upper`;
    /// the merged node keeps the id of `upper`.
    MergeInner {
        lower: String,
        upper: String,
    },
}

/// How a node of the larger poset relates to the smaller one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    /// Image of the given node of the smaller poset.
    Image(usize),
    NewLeaf,
    /// Inserted as the parent of a new leaf.
    NewParent,
    /// Split off the given node of the larger poset.
    SplitFrom(usize),
}

/// The inclusion of a smaller poset into a larger one induced by adding
/// leaves and splitting inner nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inclusion {
    /// Node of the smaller poset → node of the larger poset.
    pub map: Vec<usize>,
    /// One entry per node of the larger poset.
    pub provenance: Vec<Provenance>,
}

impl Inclusion {
    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
            provenance: (0..n).map(Provenance::Image).collect(),
        }
    }

    /// `next ∘ self` for `self: P → P₁` and `next: P₁ → P₂`.
    pub fn then(&self, next: &Inclusion) -> Inclusion {
        let map = self.map.iter().map(|&q| next.map[q]).collect();
        let provenance = next
            .provenance
            .iter()
            .map(|prov| match *prov {
                Provenance::Image(q) => match self.provenance[q] {
                    Provenance::SplitFrom(y) => Provenance::SplitFrom(next.map[y]),
                    other => other,
                },
                other => other,
            })
            .collect();
        Inclusion { map, provenance }
    }

    fn from_ids(small: &TreePoset, large: &TreePoset, origin: &HashMap<String, Provenance>) -> Inclusion {
        let map = (0..small.len())
            .map(|i| large.index_of(small.id(i)).expect("surviving node"))
            .collect();
        let provenance = (0..large.len())
            .map(|x| match origin.get(large.id(x)) {
                Some(Provenance::SplitFrom(y)) => Provenance::SplitFrom(*y),
                Some(p) => *p,
                None => Provenance::Image(small.index_of(large.id(x)).expect("surviving node")),
            })
            .collect();
        Inclusion { map, provenance }
    }
}

/// Result of an edit move. For adding and splitting the inclusion goes from
/// the old poset into the new one (`forward`); for removing and merging it
/// goes from the new poset into the old one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edited {
    pub poset: TreePoset,
    pub inclusion: Inclusion,
    pub forward: bool,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidEdit(msg.into())
}

fn require_new(p: &TreePoset, id: &str) -> Result<()> {
    if p.index_of(id).is_ok() {
        return Err(invalid(format!("node `{id}` already exists")));
    }
    Ok(())
}

fn require_node(p: &TreePoset, id: &str) -> Result<usize> {
    p.index_of(id).map_err(|_| invalid(format!("unknown node `{id}`")))
}

pub fn apply_edit(p: &TreePoset, mv: &EditMove) -> Result<Edited> {
    let mut nodes: Vec<(String, Option<String>)> = p.pairs();
    let set_parent = |nodes: &mut Vec<(String, Option<String>)>, id: &str, parent: Option<String>| {
        for n in nodes.iter_mut() {
            if n.0 == id {
                n.1 = parent.clone();
            }
        }
    };
    let mut origin: HashMap<String, Provenance> = HashMap::new();
    match mv {
        EditMove::Identity => Ok(Edited {
            poset: p.clone(),
            inclusion: Inclusion::identity(p.len()),
            forward: true,
        }),
        EditMove::AddLeaf { leaf, attach } => {
            require_new(p, leaf)?;
            match attach {
                Attach::Existing { parent } => {
                    let y = require_node(p, parent)?;
                    if p.is_leaf(y) {
                        return Err(invalid(format!(
                            "`{parent}` is minimal; attach with a new parent instead"
                        )));
                    }
                    nodes.push((leaf.clone(), Some(parent.clone())));
                }
                Attach::NewParent { parent, below } => {
                    require_new(p, parent)?;
                    if parent == leaf {
                        return Err(invalid("new leaf and new parent need distinct ids"));
                    }
                    let z = require_node(p, below)?;
                    let old_parent = p.parent(z).map(|q| p.id(q).to_string());
                    nodes.push((parent.clone(), old_parent));
                    set_parent(&mut nodes, below, Some(parent.clone()));
                    nodes.push((leaf.clone(), Some(parent.clone())));
                    origin.insert(parent.clone(), Provenance::NewParent);
                }
            }
            origin.insert(leaf.clone(), Provenance::NewLeaf);
            let poset = TreePoset::new(&nodes)?;
            let inclusion = Inclusion::from_ids(p, &poset, &origin);
            Ok(Edited {
                poset,
                inclusion,
                forward: true,
            })
        }
        EditMove::RemoveLeaf { leaf } => {
            let x = require_node(p, leaf)?;
            if !p.is_leaf(x) {
                return Err(invalid(format!("`{leaf}` is not a leaf")));
            }
            let y = p.parent(x).ok_or_else(|| invalid("cannot remove the only node"))?;
            nodes.retain(|n| n.0 != *leaf);
            origin.insert(leaf.clone(), Provenance::NewLeaf);
            if p.children(y).len() == 2 {
                let sibling = *p.children(y).iter().find(|&&c| c != x).expect("two children");
                let grand = p.parent(y).map(|q| p.id(q).to_string());
                let yid = p.id(y).to_string();
                nodes.retain(|n| n.0 != yid);
                set_parent(&mut nodes, p.id(sibling), grand);
                origin.insert(yid, Provenance::NewParent);
            }
            let poset = TreePoset::new(&nodes)?;
            let inclusion = Inclusion::from_ids(&poset, p, &origin);
            Ok(Edited {
                poset,
                inclusion,
                forward: false,
            })
        }
        EditMove::SplitInner {
            node,
            lower,
            lower_children,
        } => {
            let z = require_node(p, node)?;
            require_new(p, lower)?;
            let kids = p.children(z);
            if kids.len() < 3 {
                return Err(invalid(format!("`{node}` has fewer than three children")));
            }
            let chosen: BTreeSet<&str> = lower_children.iter().map(String::as_str).collect();
            if chosen.len() != lower_children.len() {
                return Err(invalid("repeated child in split"));
            }
            for c in &chosen {
                let ci = require_node(p, c)?;
                if p.parent(ci) != Some(z) {
                    return Err(invalid(format!("`{c}` is not a child of `{node}`")));
                }
            }
            if chosen.len() < 2 {
                return Err(invalid("the lower node needs at least two children"));
            }
            if chosen.len() == kids.len() {
                return Err(invalid("the upper node needs a child besides the lower node"));
            }
            for c in &chosen {
                set_parent(&mut nodes, c, Some(lower.clone()));
            }
            nodes.push((lower.clone(), Some(node.clone())));
            let poset = TreePoset::new(&nodes)?;
            origin.insert(lower.clone(), Provenance::SplitFrom(poset.index_of(node)?));
            let inclusion = Inclusion::from_ids(p, &poset, &origin);
            Ok(Edited {
                poset,
                inclusion,
                forward: true,
            })
        }
        EditMove::MergeInner { lower, upper } => {
            let z1 = require_node(p, lower)?;
            let z2 = require_node(p, upper)?;
            if p.is_leaf(z1) || p.is_leaf(z2) {
                return Err(invalid("only inner nodes can be merged"));
            }
            if p.parent(z1) != Some(z2) {
                return Err(invalid(format!("`{lower}` is not a child of `{upper}`")));
            }
            let moved: Vec<String> = p.children(z1).iter().map(|&c| p.id(c).to_string()).collect();
            for c in &moved {
                set_parent(&mut nodes, c, Some(upper.clone()));
            }
            nodes.retain(|n| n.0 != *lower);
            origin.insert(lower.clone(), Provenance::SplitFrom(z2));
            let poset = TreePoset::new(&nodes)?;
            let inclusion = Inclusion::from_ids(&poset, p, &origin);
            Ok(Edited {
                poset,
                inclusion,
                forward: false,
            })
        }
    }
}

/// Applies a move to a valued tree. New nodes take their values from
/// `new_values`; a merged node keeps the value of the upper node.
pub fn apply_edit_valued(
    theta: &MergeTree,
    mv: &EditMove,
    new_values: &BTreeMap<String, Rational>,
) -> Result<(MergeTree, Inclusion, bool)> {
    let edited = apply_edit(theta.poset(), mv)?;
    let values = (0..edited.poset.len())
        .map(|i| {
            let id = edited.poset.id(i);
            match theta.poset().index_of(id) {
                Ok(j) => Ok(theta.value(j).clone()),
                Err(_) => new_values
                    .get(id)
                    .cloned()
                    .ok_or_else(|| invalid(format!("no value for new node `{id}`"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let tree = MergeTree::new(edited.poset, values)?;
    Ok((tree, edited.inclusion, edited.forward))
}

/// Checks that `eta` is an inclusion of the shape produced by adding leaves
/// and splitting inner nodes.
fn check_inclusion(small: &Rooted, large: &Rooted, eta: &Inclusion) -> Result<()> {
    let bad = |m: &str| invalid(format!("not an edit inclusion: {m}"));
    if eta.map.len() != small.len() || eta.provenance.len() != large.len() {
        return Err(bad("sizes do not match the posets"));
    }
    let mut hit = vec![false; large.len()];
    for (p, &x) in eta.map.iter().enumerate() {
        if x >= large.len() || hit[x] {
            return Err(bad("map is not injective"));
        }
        hit[x] = true;
        if eta.provenance[x] != Provenance::Image(p) {
            return Err(bad("provenance disagrees with the map"));
        }
    }
    let leq = |t: &Rooted, a: usize, b: usize| t.ancestor_distance(a, b).is_some();
    for a in 0..small.len() {
        if let Some(b) = small.parent[a] {
            if !leq(large, eta.map[a], eta.map[b]) {
                return Err(bad("map is not order preserving"));
            }
        }
    }
    for (x, prov) in eta.provenance.iter().enumerate() {
        match *prov {
            Provenance::Image(_) => {}
            Provenance::NewLeaf if large.is_leaf(x) => {}
            Provenance::NewParent if !large.is_leaf(x) => {}
            Provenance::SplitFrom(y) if !large.is_leaf(x) && y < large.len() && y != x && leq(large, x, y) => {}
            _ => return Err(bad("provenance does not fit the larger poset")),
        }
    }
    Ok(())
}

/// η_* on raw valuations over parent arrays.
fn extend_values<T: Clone>(large_parent: &[Option<usize>], eta: &Inclusion, theta: &[T], theta_prime: &[T]) -> Vec<T> {
    (0..large_parent.len())
        .map(|x| match eta.provenance[x] {
            Provenance::Image(p) => theta[p].clone(),
            Provenance::NewLeaf => {
                let y = large_parent[x].expect("new leaves have a parent");
                match eta.provenance[y] {
                    Provenance::Image(q) => theta[q].clone(),
                    _ => theta_prime[y].clone(),
                }
            }
            Provenance::NewParent => theta_prime[x].clone(),
            Provenance::SplitFrom(y) => theta_prime[y].clone(),
        })
        .collect()
}

/// η_*(θ, θ′): extends θ along the inclusion `eta` of its poset into the
/// poset of θ′, filling new nodes from θ or θ′ as the move history dictates.
/// The result is indexed by the nodes of θ′.
pub fn eta_star(theta: &MergeTree, theta_prime: &MergeTree, eta: &Inclusion) -> Result<Vec<Rational>> {
    let small = Rooted::new(theta.poset().parents().to_vec());
    let large = Rooted::new(theta_prime.poset().parents().to_vec());
    check_inclusion(&small, &large, eta)?;
    Ok(extend_values(&large.parent, eta, theta.values(), theta_prime.values()))
}

/// A tree under construction with the provenance of each node.
#[derive(Clone)]
struct Labeled {
    parent: Vec<Option<usize>>,
    prov: Vec<Provenance>,
}

impl Labeled {
    fn key(&self) -> String {
        let t = Rooted::new(self.parent.clone());
        let labels: Vec<String> = (0..t.len())
            .map(|x| match self.prov[x] {
                Provenance::Image(p) => format!("i{p}"),
                Provenance::NewLeaf => "l".into(),
                Provenance::NewParent => "n".into(),
                Provenance::SplitFrom(y) => format!("s{}", t.ancestor_distance(x, y).unwrap_or(usize::MAX)),
            })
            .collect();
        fn code(t: &Rooted, labels: &[String], v: usize) -> String {
            let mut parts: Vec<String> = t.children[v].iter().map(|&c| code(t, labels, c)).collect();
            parts.sort();
            format!("{}[{}]", labels[v], parts.concat())
        }
        code(&t, &labels, t.root)
    }

    fn successors(&self) -> Vec<Labeled> {
        let t = Rooted::new(self.parent.clone());
        let n = t.len();
        let mut out = Vec::new();
        for y in 0..n {
            if !t.is_leaf(y) {
                let mut s = self.clone();
                s.parent.push(Some(y));
                s.prov.push(Provenance::NewLeaf);
                out.push(s);
            }
        }
        for z in 0..n {
            let mut s = self.clone();
            let y = n;
            s.parent.push(t.parent[z]);
            s.prov.push(Provenance::NewParent);
            s.parent[z] = Some(y);
            s.parent.push(Some(y));
            s.prov.push(Provenance::NewLeaf);
            out.push(s);
        }
        for z in 0..n {
            let kids = &t.children[z];
            let k = kids.len();
            if k < 3 {
                continue;
            }
            for mask in 1u32..(1 << k) - 1 {
                if mask.count_ones() < 2 {
                    continue;
                }
                let mut s = self.clone();
                let lower = n;
                s.parent.push(Some(z));
                s.prov.push(Provenance::SplitFrom(z));
                for (b, &c) in kids.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        s.parent[c] = Some(lower);
                    }
                }
                out.push(s);
            }
        }
        out
    }
}

/// Every inclusion `small → large` induced by a composition of leaf
/// additions and inner-node splits followed by an automorphism of `large`.
pub(crate) fn shape_embeddings(small: &Shape, large: &Shape) -> Vec<Inclusion> {
    let target = &large.tree;
    let n = small.len();
    let mut result = BTreeSet::new();
    let start = Labeled {
        parent: small.tree.parent.clone(),
        prov: (0..n).map(Provenance::Image).collect(),
    };
    // layers indexed by size; moves add one or two nodes
    let mut layers: BTreeMap<usize, HashMap<String, Labeled>> = BTreeMap::new();
    layers.entry(n).or_default().insert(start.key(), start);
    let goal = large.len();
    while let Some((size, layer)) = layers.pop_first() {
        if size == goal {
            for lab in layer.into_values() {
                let t = Rooted::new(lab.parent.clone());
                for iso in isomorphisms(&t, target) {
                    let mut provenance = vec![Provenance::NewLeaf; goal];
                    let mut map = vec![0; n];
                    for x in 0..goal {
                        provenance[iso[x]] = match lab.prov[x] {
                            Provenance::Image(p) => {
                                map[p] = iso[x];
                                Provenance::Image(p)
                            }
                            Provenance::SplitFrom(y) => Provenance::SplitFrom(iso[y]),
                            other => other,
                        };
                    }
                    result.insert(Inclusion { map, provenance });
                }
            }
            continue;
        }
        for lab in layer.into_values() {
            for s in lab.successors() {
                let len = s.parent.len();
                if len <= goal {
                    layers.entry(len).or_default().entry(s.key()).or_insert(s);
                }
            }
        }
    }
    result.into_iter().collect()
}

/// Squared euclidean cost `‖η_*(α, β) − β‖²` of one embedding.
pub(crate) fn embedding_cost<T>(large_parent: &[Option<usize>], eta: &Inclusion, alpha: &[T], beta: &[T]) -> T
where
    T: Clone + Zero + std::ops::Sub<Output = T> + std::ops::Mul<Output = T>,
{
    let ext = extend_values(large_parent, eta, alpha, beta);
    ext.into_iter().zip(beta).fold(T::zero(), |acc, (e, b)| {
        let d = e - b.clone();
        acc + d.clone() * d
    })
}

/// Elementary euclidean edit distance between trees related by edit moves in
/// one direction, minimized over all inclusions (automorphisms included).
/// Returns the distance and the minimizing inclusion from the smaller tree's
/// poset into the larger one's (ties broken by the inclusion order).
pub fn elementary_distance(theta: &MergeTree, theta_prime: &MergeTree) -> Result<(Distance, Inclusion)> {
    let (small, large) = if theta.len() <= theta_prime.len() {
        (theta, theta_prime)
    } else {
        (theta_prime, theta)
    };
    let (s_shape, s_map) = Shape::canonical_of(small.poset().parents());
    let (l_shape, l_map) = Shape::canonical_of(large.poset().parents());
    let embeddings = shape_embeddings(&s_shape, &l_shape);
    if embeddings.is_empty() {
        return Err(Error::NotRelated);
    }
    let mut alpha = vec![Rational::zero(); small.len()];
    for i in 0..small.len() {
        alpha[s_map[i]] = small.value(i).clone();
    }
    let mut beta = vec![Rational::zero(); large.len()];
    for i in 0..large.len() {
        beta[l_map[i]] = large.value(i).clone();
    }
    let mut best: Option<(Rational, &Inclusion)> = None;
    for e in &embeddings {
        let cost = embedding_cost(&l_shape.tree.parent, e, &alpha, &beta);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, e));
        }
    }
    let (cost, e) = best.expect("nonempty");
    // translate back to the node indices of the input posets
    let mut l_inv = vec![0; large.len()];
    for (i, &c) in l_map.iter().enumerate() {
        l_inv[c] = i;
    }
    let map = (0..small.len()).map(|i| l_inv[e.map[s_map[i]]]).collect();
    let mut s_inv = vec![0; small.len()];
    for (i, &c) in s_map.iter().enumerate() {
        s_inv[c] = i;
    }
    let provenance = (0..large.len())
        .map(|i| match e.provenance[l_map[i]] {
            Provenance::Image(p) => Provenance::Image(s_inv[p]),
            Provenance::SplitFrom(y) => Provenance::SplitFrom(l_inv[y]),
            other => other,
        })
        .collect();
    Ok((Distance::from_squared(cost), Inclusion { map, provenance }))
}
