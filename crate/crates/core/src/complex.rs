//! Regular (and mildly non-regular) CW complexes stored as face posets.
//!
//! A [`Complex`] keeps its cells in a dense array sorted by `(dim, id)` and its
//! Hasse diagram as a list of [`Cover`] relations sorted by `(lower, upper)`.
//! Cover indices double as hyperplane indices of the Morse arrangement.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::DiscreteFunction;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
}

/// A cover relation `lower < upper` of the face poset, i.e. an edge of the
/// Hasse diagram. Indices refer to cells of the owning complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cover {
    pub lower: usize,
    pub upper: usize,
    pub regular: bool,
}

#[derive(Debug, Clone)]
pub struct Complex {
    cells: Vec<Cell>,
    index: HashMap<String, usize>,
    covers: Vec<Cover>,
    regular: bool,
    down: Vec<Vec<usize>>,
    up: Vec<Vec<usize>>,
    // strict transitive faces of each cell, sorted
    closure: Vec<Vec<usize>>,
    // cell indices sorted by id string
    id_order: Vec<usize>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells && self.covers == other.covers && self.regular == other.regular
    }
}

impl Eq for Complex {}

impl Complex {
    /// Builds a complex from cells and `(lower, upper, regular)` cover triples.
    ///
    /// Validation is necessary but not sufficient for the poset to come from a
    /// regular CW complex: ids are unique, covers raise the dimension, regular
    /// complexes have codimension-one regular covers only, and every cell of
    /// positive dimension has faces in each lower dimension (for non-regular
    /// complexes: at least one vertex below it).
    pub fn new(cells: Vec<Cell>, covers: &[(String, String, bool)], regular: bool) -> Result<Self> {
        let mut cells = cells;
        cells.sort_by(|a, b| (a.dim, &a.id).cmp(&(b.dim, &b.id)));
        let mut index = HashMap::with_capacity(cells.len());
        for (i, cell) in cells.iter().enumerate() {
            if index.insert(cell.id.clone(), i).is_some() {
                return Err(Error::DuplicateCell(cell.id.clone()));
            }
        }
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| Error::UnknownCell(id.to_string()));
        let mut seen = BTreeSet::new();
        let mut resolved = Vec::with_capacity(covers.len());
        for (lower, upper, is_regular) in covers {
            let (l, u) = (lookup(lower)?, lookup(upper)?);
            if !seen.insert((l, u)) {
                return Err(Error::DuplicateCover(lower.clone(), upper.clone()));
            }
            let invalid = |reason: &str| Error::InvalidCover {
                lower: lower.clone(),
                upper: upper.clone(),
                reason: reason.to_string(),
            };
            if cells[u].dim <= cells[l].dim {
                return Err(invalid("upper cell must have larger dimension"));
            }
            if regular && (cells[u].dim != cells[l].dim + 1 || !is_regular) {
                return Err(invalid("regular complexes only have regular codimension-one covers"));
            }
            resolved.push(Cover {
                lower: l,
                upper: u,
                regular: *is_regular,
            });
        }
        resolved.sort_by_key(|c| (c.lower, c.upper));
        Self::assemble(cells, index, resolved, regular)
    }

    fn assemble(cells: Vec<Cell>, index: HashMap<String, usize>, covers: Vec<Cover>, regular: bool) -> Result<Self> {
        let n = cells.len();
        let mut down = vec![Vec::new(); n];
        let mut up = vec![Vec::new(); n];
        for (e, c) in covers.iter().enumerate() {
            down[c.upper].push(e);
            up[c.lower].push(e);
        }
        // cells are sorted by dimension and covers raise it, so a single pass
        // in index order sees every face before its cofaces
        let mut closure: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let mut acc = BTreeSet::new();
            for &e in &down[i] {
                let l = covers[e].lower;
                acc.insert(l);
                acc.extend(closure[l].iter().copied());
            }
            closure[i] = acc.into_iter().collect();
        }
        for i in 0..n {
            let d = cells[i].dim;
            if d == 0 {
                continue;
            }
            let dims: BTreeSet<usize> = closure[i].iter().map(|&j| cells[j].dim).collect();
            let graded = if regular {
                (0..d).all(|k| dims.contains(&k))
            } else {
                dims.contains(&0)
            };
            if !graded {
                return Err(Error::NotGraded(cells[i].id.clone()));
            }
        }
        let mut id_order: Vec<usize> = (0..n).collect();
        id_order.sort_by(|&a, &b| cells[a].id.cmp(&cells[b].id));
        Ok(Self {
            cells,
            index,
            covers,
            regular,
            down,
            up,
            closure,
            id_order,
        })
    }

    /// The simplicial complex generated by the given simplices. Cell ids are the
    /// sorted vertex ids joined without separator when every vertex id is a
    /// single character, and joined with `,` otherwise.
    pub fn from_maximal_simplices<S: AsRef<str>>(simplices: &[Vec<S>]) -> Result<Self> {
        let mut faces: BTreeSet<Vec<String>> = BTreeSet::new();
        let mut single_char = true;
        for (index, simplex) in simplices.iter().enumerate() {
            if simplex.is_empty() {
                return Err(Error::EmptySimplex(index));
            }
            let mut vertices: Vec<String> = Vec::with_capacity(simplex.len());
            for v in simplex {
                let v = v.as_ref().to_string();
                if vertices.contains(&v) {
                    return Err(Error::DuplicateVertex { vertex: v, index });
                }
                single_char &= v.chars().count() == 1;
                vertices.push(v);
            }
            vertices.sort();
            if vertices.len() > 20 {
                return Err(Error::OutOfRange(format!("simplex {index} has more than 20 vertices")));
            }
            for mask in 1u32..(1 << vertices.len()) {
                let face: Vec<String> = vertices
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, v)| v.clone())
                    .collect();
                faces.insert(face);
            }
        }
        let sep = if single_char { "" } else { "," };
        let name = |face: &[String]| face.join(sep);
        let cells: Vec<Cell> = faces
            .iter()
            .map(|f| Cell {
                id: name(f),
                dim: f.len() - 1,
            })
            .collect();
        let mut covers = Vec::new();
        for face in &faces {
            if face.len() < 2 {
                continue;
            }
            for skip in 0..face.len() {
                let mut lower = face.clone();
                lower.remove(skip);
                covers.push((name(&lower), name(face), true));
            }
        }
        Self::new(cells, &covers, true)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn id(&self, i: usize) -> &str {
        &self.cells[i].id
    }

    pub fn dim(&self, i: usize) -> usize {
        self.cells[i].dim
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownCell(id.to_string()))
    }

    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }

    pub fn cover(&self, e: usize) -> Cover {
        self.covers[e]
    }

    /// The `"lower<upper"` key naming a cover and its hyperplane.
    pub fn cover_key(&self, e: usize) -> String {
        let c = self.covers[e];
        format!("{}<{}", self.id(c.lower), self.id(c.upper))
    }

    pub fn find_cover(&self, lower: usize, upper: usize) -> Option<usize> {
        self.up[lower].iter().copied().find(|&e| self.covers[e].upper == upper)
    }

    /// Cover indices with `upper == i`.
    pub fn down_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    /// Cover indices with `lower == i`.
    pub fn up_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn faces1_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.down[i].iter().map(move |&e| self.covers[e].lower)
    }

    pub fn cofaces1_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.up[i].iter().map(move |&e| self.covers[e].upper)
    }

    /// Strict transitive faces of `i`, sorted by index.
    pub fn closure_of(&self, i: usize) -> &[usize] {
        &self.closure[i]
    }

    /// Strict transitive cofaces of `i`, sorted by index.
    pub fn cofaces_of(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.is_face(i, j)).collect()
    }

    /// `a` is a proper face of `b`.
    pub fn is_face(&self, a: usize, b: usize) -> bool {
        self.closure[b].binary_search(&a).is_ok()
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.is_face(a, b) || self.is_face(b, a)
    }

    /// The 0-cells in the closure of `i` (the cell itself if it is a vertex).
    pub fn vertices_of(&self, i: usize) -> Vec<usize> {
        if self.dim(i) == 0 {
            return vec![i];
        }
        self.closure[i].iter().copied().filter(|&j| self.dim(j) == 0).collect()
    }

    /// Cell indices sorted by their id strings.
    pub fn id_order(&self) -> &[usize] {
        &self.id_order
    }

    pub fn face1(&self, id: &str) -> Result<Vec<&str>> {
        let i = self.index_of(id)?;
        Ok(self.sorted_ids(self.faces1_of(i)))
    }

    pub fn coface1(&self, id: &str) -> Result<Vec<&str>> {
        let i = self.index_of(id)?;
        Ok(self.sorted_ids(self.cofaces1_of(i)))
    }

    pub fn face(&self, id: &str) -> Result<Vec<&str>> {
        let i = self.index_of(id)?;
        Ok(self.sorted_ids(self.closure[i].iter().copied()))
    }

    pub fn coface(&self, id: &str) -> Result<Vec<&str>> {
        let i = self.index_of(id)?;
        Ok(self.sorted_ids(self.cofaces_of(i).into_iter()))
    }

    fn sorted_ids(&self, cells: impl Iterator<Item = usize>) -> Vec<&str> {
        let mut ids: Vec<&str> = cells.map(|j| self.id(j)).collect();
        ids.sort_unstable();
        ids
    }

    /// The subcomplex on the cells flagged in `keep` with induced covers. The
    /// caller guarantees `keep` is closed under taking faces.
    pub fn induced(&self, keep: &[bool]) -> Complex {
        let cells: Vec<Cell> = (0..self.len())
            .filter(|&i| keep[i])
            .map(|i| self.cells[i].clone())
            .collect();
        let index: HashMap<String, usize> = cells.iter().enumerate().map(|(k, c)| (c.id.clone(), k)).collect();
        let covers: Vec<Cover> = self
            .covers
            .iter()
            .filter(|c| keep[c.lower] && keep[c.upper])
            .map(|c| Cover {
                lower: index[self.id(c.lower)],
                upper: index[self.id(c.upper)],
                regular: c.regular,
            })
            .collect();
        Self::assemble(cells, index, covers, self.regular).expect("subcomplex of a valid complex is valid")
    }

    /// Marks the union of closures of all cells with `f <= level`.
    pub fn level_mask(&self, f: &DiscreteFunction, level: &Rational) -> Vec<bool> {
        let mut keep = vec![false; self.len()];
        for i in 0..self.len() {
            if f.value(i) <= level {
                keep[i] = true;
                for &j in &self.closure[i] {
                    keep[j] = true;
                }
            }
        }
        keep
    }

    /// The level subcomplex: closures of all cells of value at most `level`.
    pub fn level_subcomplex(&self, f: &DiscreteFunction, level: &Rational) -> Result<Complex> {
        f.check_len(self)?;
        Ok(self.induced(&self.level_mask(f, level)))
    }

    /// Component label per cell (undirected Hasse connectivity) and the number
    /// of components. Labels are numbered by smallest member index.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            stack.push(start);
            while let Some(i) = stack.pop() {
                for j in self.faces1_of(i).chain(self.cofaces1_of(i)) {
                    if label[j] == usize::MAX {
                        label[j] = count;
                        stack.push(j);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Partition of cell ids into connected components of the Hasse graph.
    pub fn connected_components(&self) -> Vec<Vec<String>> {
        let (label, count) = self.component_labels();
        let mut parts = vec![Vec::new(); count];
        for (i, &l) in label.iter().enumerate() {
            parts[l].push(self.id(i).to_string());
        }
        for p in &mut parts {
            p.sort();
        }
        parts.sort();
        parts
    }

    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.component_labels().1 == 1
    }

    /// Rank of the Morse arrangement: `|X|` minus the number of components.
    pub fn essential_rank(&self) -> usize {
        self.len() - self.component_labels().1
    }
}
