use std::collections::{BTreeMap, BTreeSet};

use super::{MergeTree, TreePoset};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::function::DiscreteFunction;
use crate::morse::{critical_of_matching, induced_matching};
use crate::rational::Rational;

struct Components {
    parent: Vec<usize>,
}

impl Components {
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
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The merge tree of a discrete Morse function on a connected regular complex.
///
/// Leaves are the critical vertices. Sweeping the distinct values upwards
/// over level subcomplexes, every time two or more tracked components fuse
/// at value `v` a single inner node with value `v` is created. An inner node
/// is named after the smallest-id critical edge of value `v` inside the fused
/// component; all such edges are kept as witnesses.
pub fn induced_merge_tree(x: &Complex, f: &DiscreteFunction) -> Result<MergeTree> {
    if !x.is_regular() {
        return Err(Error::NotRegular);
    }
    let matching = induced_matching(x, f)?;
    if !x.is_connected() {
        return Err(Error::Disconnected);
    }
    let critical = critical_of_matching(x, &matching);
    let critical_vertices: BTreeSet<usize> = critical
        .get(&0)
        .map(|ids| ids.iter().map(|id| x.index_of(id).expect("known cell")).collect())
        .unwrap_or_default();
    let critical_edges: Vec<usize> = critical
        .get(&1)
        .map(|ids| ids.iter().map(|id| x.index_of(id).expect("known cell")).collect())
        .unwrap_or_default();

    let levels: BTreeSet<&Rational> = f.values().iter().collect();
    let mut present = vec![false; x.len()];
    let mut uf = Components {
        parent: (0..x.len()).collect(),
    };
    // tracked node (index into `nodes`) per component representative
    let mut tracked: BTreeMap<usize, usize> = BTreeMap::new();
    let mut nodes: Vec<(String, Option<usize>, Rational)> = Vec::new();
    let mut witnesses: BTreeMap<String, Vec<String>> = BTreeMap::new();

    for level in levels {
        let mask = x.level_mask(f, level);
        let fresh: Vec<usize> = (0..x.len()).filter(|&i| mask[i] && !present[i]).collect();
        let before: Vec<(usize, usize)> = tracked.iter().map(|(&r, &n)| (r, n)).collect();
        for &i in &fresh {
            present[i] = true;
        }
        for &i in &fresh {
            for j in x.faces1_of(i).chain(x.cofaces1_of(i)) {
                if present[j] {
                    uf.union(i, j);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (rep, node) in before {
            groups.entry(uf.find(rep)).or_default().push(node);
        }
        for &i in &fresh {
            if critical_vertices.contains(&i) {
                nodes.push((x.id(i).to_string(), None, f.value(i).clone()));
                groups.entry(uf.find(i)).or_default().push(nodes.len() - 1);
            }
        }
        tracked.clear();
        for (rep, children) in groups {
            if children.len() == 1 {
                tracked.insert(rep, children[0]);
                continue;
            }
            let mut here: Vec<String> = critical_edges
                .iter()
                .filter(|&&e| f.value(e) == level && present[e] && uf.find(e) == rep)
                .map(|&e| x.id(e).to_string())
                .collect();
            here.sort();
            let name = match here.first() {
                Some(first) => first.clone(),
                None => {
                    let mut ids: Vec<&str> = fresh.iter().filter(|&&i| uf.find(i) == rep).map(|&i| x.id(i)).collect();
                    ids.sort_unstable();
                    ids.first()
                        .map(|s| s.to_string())
                        .unwrap_or_else(|| format!("merge@{level}"))
                }
            };
            nodes.push((name.clone(), None, level.clone()));
            let inner = nodes.len() - 1;
            for c in children {
                nodes[c].1 = Some(inner);
            }
            witnesses.insert(name, here);
            tracked.insert(rep, inner);
        }
    }
    let triples: Vec<(String, Option<String>, Rational)> = nodes
        .iter()
        .map(|(id, p, v)| (id.clone(), p.map(|q| nodes[q].0.clone()), v.clone()))
        .collect();
    let pairs: Vec<(&str, Option<&str>)> = triples.iter().map(|(i, p, _)| (i.as_str(), p.as_deref())).collect();
    let poset = TreePoset::new(&pairs)?;
    let mut values = vec![Rational::default(); poset.len()];
    for (id, _, v) in &triples {
        values[poset.index_of(id)?] = v.clone();
    }
    Ok(MergeTree::new(poset, values)?.with_witnesses(witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::gradient_paths_from;
    use crate::rational::int;

    fn func(x: &Complex, pairs: &[(&str, i64)]) -> DiscreteFunction {
        let pairs: Vec<(&str, Rational)> = pairs.iter().map(|(k, v)| (*k, int(*v))).collect();
        DiscreteFunction::from_pairs(x, &pairs).unwrap()
    }

    fn shape(t: &MergeTree) -> Vec<(String, Option<String>, Rational)> {
        t.nodes()
    }

    #[test]
    fn interval_examples() {
        let i = Complex::from_maximal_simplices(&[vec!["a", "b"]]).unwrap();
        let t = induced_merge_tree(&i, &func(&i, &[("a", 0), ("b", 1), ("ab", 2)])).unwrap();
        assert_eq!(
            shape(&t),
            vec![
                ("a".into(), Some("ab".into()), int(0)),
                ("ab".into(), None, int(2)),
                ("b".into(), Some("ab".into()), int(1)),
            ]
        );
        let t = induced_merge_tree(&i, &func(&i, &[("a", 3), ("b", 1), ("ab", 2)])).unwrap();
        assert_eq!(shape(&t), vec![("b".into(), None, int(1))]);
    }

    #[test]
    fn triangle_boundary_skips_the_cycle_edge() {
        let x = Complex::from_maximal_simplices(&[vec!["a", "b"], vec!["b", "c"], vec!["a", "c"]]).unwrap();
        let f = func(&x, &[("a", 0), ("b", 1), ("c", 2), ("ab", 3), ("bc", 4), ("ac", 5)]);
        let t = induced_merge_tree(&x, &f).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.value_of("ab").unwrap(), &int(3));
        assert_eq!(t.value_of("bc").unwrap(), &int(4));
        assert!(t.value_of("ac").is_err());
        assert_eq!(t.poset().id(t.poset().root()), "bc");
    }

    #[test]
    fn simultaneous_merges_make_one_node() {
        let x = Complex::from_maximal_simplices(&[vec!["a", "b"], vec!["b", "c"]]).unwrap();
        let f = func(&x, &[("a", 0), ("b", 1), ("c", 0), ("ab", 2), ("bc", 2)]);
        let t = induced_merge_tree(&x, &f).unwrap();
        assert_eq!(t.len(), 4);
        let root = t.poset().root();
        assert_eq!(t.poset().children(root).len(), 3);
        assert_eq!(t.witnesses()["ab"], vec!["ab".to_string(), "bc".to_string()]);
    }

    #[test]
    fn rejects_bad_input() {
        let two = Complex::from_maximal_simplices(&[vec!["a"], vec!["b"]]).unwrap();
        assert_eq!(
            induced_merge_tree(&two, &DiscreteFunction::dimension(&two)),
            Err(Error::Disconnected)
        );
        let i = Complex::from_maximal_simplices(&[vec!["a", "b"]]).unwrap();
        assert!(matches!(
            induced_merge_tree(&i, &func(&i, &[("a", 3), ("b", 3), ("ab", 2)])),
            Err(Error::NotMorse { .. })
        ));
    }

    #[test]
    fn weak_benedetti_merges_have_unique_paths_to_the_younger_leaf() {
        let i = Complex::from_maximal_simplices(&[vec!["a", "b"]]).unwrap();
        let f = func(&i, &[("a", 0), ("b", 1), ("ab", 2)]);
        let t = induced_merge_tree(&i, &f).unwrap();
        assert!(t.classify().well_branched && t.is_injective());
        let paths = gradient_paths_from(&i, &f, "ab").unwrap();
        let younger: Vec<_> = paths.iter().filter(|p| i.id(p.end()) == "b").collect();
        assert_eq!(younger.len(), 1);
    }
}
