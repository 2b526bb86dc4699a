//! Unlabeled merge-tree shapes, AHU codes and tree isomorphisms.

use std::collections::BTreeMap;

/// A rooted tree given by parent pointers, with derived children lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Rooted {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub root: usize,
}

impl Rooted {
    pub fn new(parent: Vec<Option<usize>>) -> Self {
        let mut children = vec![Vec::new(); parent.len()];
        let mut root = 0;
        for (i, p) in parent.iter().enumerate() {
            match p {
                Some(p) => children[*p].push(i),
                None => root = i,
            }
        }
        Self { parent, children, root }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.children[i].is_empty()
    }

    /// AHU code of every subtree.
    pub fn codes(&self) -> Vec<String> {
        let mut codes = vec![String::new(); self.len()];
        for &v in self.postorder().iter() {
            let mut parts: Vec<&str> = self.children[v].iter().map(|&c| codes[c].as_str()).collect();
            parts.sort_unstable();
            let mut s = String::with_capacity(2 + parts.iter().map(|p| p.len()).sum::<usize>());
            s.push('(');
            for p in parts {
                s.push_str(p);
            }
            s.push(')');
            codes[v] = s;
        }
        codes
    }

    fn postorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                order.push(v);
            } else {
                stack.push((v, true));
                for &c in &self.children[v] {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// Nodes in preorder with children visited in code order; ties keep
    /// their index order.
    pub fn canonical_order(&self) -> Vec<usize> {
        let codes = self.codes();
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            let mut kids = self.children[v].clone();
            kids.sort_by(|&a, &b| codes[a].cmp(&codes[b]).then(a.cmp(&b)));
            stack.extend(kids.into_iter().rev());
        }
        order
    }

    pub fn ancestor_distance(&self, x: usize, y: usize) -> Option<usize> {
        let mut cur = x;
        let mut k = 0;
        while cur != y {
            cur = self.parent[cur]?;
            k += 1;
        }
        Some(k)
    }
}

/// All isomorphisms from `a` to `b` as maps `a`-node → `b`-node.
pub(crate) fn isomorphisms(a: &Rooted, b: &Rooted) -> Vec<Vec<usize>> {
    if a.len() != b.len() {
        return Vec::new();
    }
    let (ca, cb) = (a.codes(), b.codes());
    if ca[a.root] != cb[b.root] {
        return Vec::new();
    }
    let partials = iso_rec(a, b, &ca, &cb, a.root, b.root);
    partials
        .into_iter()
        .map(|pairs| {
            let mut map = vec![usize::MAX; a.len()];
            for (u, v) in pairs {
                map[u] = v;
            }
            map
        })
        .collect()
}

fn iso_rec(a: &Rooted, b: &Rooted, ca: &[String], cb: &[String], u: usize, v: usize) -> Vec<Vec<(usize, usize)>> {
    let ku = &a.children[u];
    let kv = &b.children[v];
    if ku.is_empty() {
        return vec![vec![(u, v)]];
    }
    let mut results = Vec::new();
    let mut used = vec![false; kv.len()];
    let mut pick = Vec::with_capacity(ku.len());
    pair_children(ca, cb, ku, kv, &mut used, &mut pick, &mut |pairing: &[usize]| {
        let mut acc: Vec<Vec<(usize, usize)>> = vec![vec![(u, v)]];
        for (i, &j) in pairing.iter().enumerate() {
            let sub = iso_rec(a, b, ca, cb, ku[i], kv[j]);
            let mut next = Vec::with_capacity(acc.len() * sub.len());
            for prefix in &acc {
                for s in &sub {
                    let mut m = prefix.clone();
                    m.extend_from_slice(s);
                    next.push(m);
                }
            }
            acc = next;
        }
        results.extend(acc);
    });
    results
}

#[allow(clippy::too_many_arguments)]
fn pair_children(
    ca: &[String],
    cb: &[String],
    ku: &[usize],
    kv: &[usize],
    used: &mut Vec<bool>,
    pick: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    let i = pick.len();
    if i == ku.len() {
        emit(pick);
        return;
    }
    for j in 0..kv.len() {
        if !used[j] && ca[ku[i]] == cb[kv[j]] {
            used[j] = true;
            pick.push(j);
            pair_children(ca, cb, ku, kv, used, pick, emit);
            pick.pop();
            used[j] = false;
        }
    }
}

/// An unlabeled merge-tree shape in canonical node order (root first,
/// preorder, children sorted by code).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    pub(crate) tree: Rooted,
    code: String,
}

impl Shape {
    /// The canonical shape of a tree and the map original node → shape node.
    pub(crate) fn canonical_of(parent: &[Option<usize>]) -> (Shape, Vec<usize>) {
        let t = Rooted::new(parent.to_vec());
        let order = t.canonical_order();
        let mut to_canon = vec![0; t.len()];
        for (k, &v) in order.iter().enumerate() {
            to_canon[v] = k;
        }
        let parent = order.iter().map(|&v| t.parent[v].map(|p| to_canon[p])).collect();
        let tree = Rooted::new(parent);
        let code = tree.codes()[tree.root].clone();
        (Shape { tree, code }, to_canon)
    }

    pub fn from_code(code: &str) -> Shape {
        let mut parent = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for ch in code.chars() {
            match ch {
                '(' => {
                    parent.push(stack.last().copied());
                    stack.push(parent.len() - 1);
                }
                ')' => {
                    stack.pop();
                }
                _ => panic!("invalid shape code `{code}`"),
            }
        }
        Shape::canonical_of(&parent).0
    }

    pub fn code(&self) -> &str {
        &self.code
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.len() == 0
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.tree.parent[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.tree.children[i]
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.tree.is_leaf(i)
    }

    pub(crate) fn automorphisms(&self) -> Vec<Vec<usize>> {
        isomorphisms(&self.tree, &self.tree)
    }
}

/// All merge-tree shapes with at most `max_nodes` nodes, by size then code.
pub fn enumerate_shapes(max_nodes: usize) -> Vec<Shape> {
    let mut by_size: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for n in 1..=max_nodes {
        let mut codes = Vec::new();
        if n == 1 {
            codes.push("()".to_string());
        } else {
            let mut acc = Vec::new();
            child_multisets(&by_size, n - 1, None, &mut acc, &mut codes);
        }
        codes.sort();
        codes.dedup();
        by_size.insert(n, codes);
    }
    by_size
        .values()
        .flat_map(|codes| codes.iter().map(|c| Shape::from_code(c)))
        .collect()
}

/// Multisets of child shapes (at least two) of total size `remaining`, listed
/// as non-decreasing `(size, code)` sequences.
fn child_multisets(
    by_size: &BTreeMap<usize, Vec<String>>,
    remaining: usize,
    last: Option<(usize, usize)>,
    acc: &mut Vec<String>,
    out: &mut Vec<String>,
) {
    if remaining == 0 {
        if acc.len() >= 2 {
            let mut parts = acc.clone();
            parts.sort();
            out.push(format!("({})", parts.concat()));
        }
        return;
    }
    for (&size, codes) in by_size.range(1..=remaining) {
        for (k, code) in codes.iter().enumerate() {
            if let Some(prev) = last {
                if (size, k) < prev {
                    continue;
                }
            }
            acc.push(code.clone());
            child_multisets(by_size, remaining - size, Some((size, k)), acc, out);
            acc.pop();
        }
    }
}
