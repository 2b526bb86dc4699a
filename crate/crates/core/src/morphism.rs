//! Cell maps between complexes and the transport of discrete functions.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::function::DiscreteFunction;
use crate::morse::is_discrete_morse;
use crate::rational::Rational;

/// A map of face posets given on every source cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMap {
    source: Complex,
    target: Complex,
    image: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapFlags {
    pub order_preserving: bool,
    pub simplicial: bool,
    pub non_degenerate: bool,
    pub injective: bool,
}

impl CellMap {
    pub fn new<S: AsRef<str>>(source: Complex, target: Complex, assignment: &[(S, S)]) -> Result<Self> {
        let mut image = vec![None; source.len()];
        for (from, to) in assignment {
            let (from, to) = (from.as_ref(), to.as_ref());
            let i = source
                .index_of(from)
                .map_err(|_| Error::InvalidMap(format!("`{from}` is not a source cell")))?;
            let j = target
                .index_of(to)
                .map_err(|_| Error::InvalidMap(format!("`{to}` is not a target cell")))?;
            if image[i].replace(j).is_some() {
                return Err(Error::InvalidMap(format!("`{from}` is assigned twice")));
            }
        }
        let image = image
            .into_iter()
            .enumerate()
            .map(|(i, j)| j.ok_or_else(|| Error::InvalidMap(format!("`{}` has no image", source.id(i)))))
            .collect::<Result<_>>()?;
        Ok(Self { source, target, image })
    }

    pub fn from_map(source: Complex, target: Complex, assignment: &BTreeMap<String, String>) -> Result<Self> {
        let pairs: Vec<(&str, &str)> = assignment.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Self::new(source, target, &pairs)
    }

    pub fn identity(x: &Complex) -> Self {
        Self {
            source: x.clone(),
            target: x.clone(),
            image: (0..x.len()).collect(),
        }
    }

    /// The inclusion of a complex whose cell ids all occur in `ambient`.
    pub fn inclusion(sub: &Complex, ambient: &Complex) -> Result<Self> {
        let pairs: Vec<(&str, &str)> = sub.cells().iter().map(|c| (c.id.as_str(), c.id.as_str())).collect();
        Self::new(sub.clone(), ambient.clone(), &pairs)
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn image(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn assignment(&self) -> BTreeMap<String, String> {
        self.image
            .iter()
            .enumerate()
            .map(|(i, &j)| (self.source.id(i).to_string(), self.target.id(j).to_string()))
            .collect()
    }

    fn preimage_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.target.len()];
        for &j in &self.image {
            counts[j] += 1;
        }
        counts
    }

    pub fn classify(&self) -> MapFlags {
        let (x, y) = (&self.source, &self.target);
        let leq = |a: usize, b: usize| a == b || y.is_face(a, b);
        let order_preserving = x.covers().iter().all(|c| leq(self.image[c.lower], self.image[c.upper]));
        let vertices_to_vertices = (0..x.len()).all(|i| x.dim(i) != 0 || y.dim(self.image[i]) == 0);
        let spans = (0..x.len()).all(|i| {
            let mut images: Vec<usize> = x.vertices_of(i).into_iter().map(|v| self.image[v]).collect();
            images.sort_unstable();
            images.dedup();
            images == y.vertices_of(self.image[i])
        });
        let non_degenerate = vertices_to_vertices
            && x.covers()
                .iter()
                .all(|c| y.find_cover(self.image[c.lower], self.image[c.upper]).is_some());
        MapFlags {
            order_preserving,
            simplicial: order_preserving && vertices_to_vertices && spans,
            non_degenerate,
            injective: self.preimage_counts().iter().all(|&c| c <= 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pushforward {
    pub function: DiscreteFunction,
    /// Whether the result is again a discrete Morse function.
    pub morse: bool,
}

fn min_defined(vals: &[Option<Rational>], cells: impl IntoIterator<Item = usize>) -> Option<&Rational> {
    cells.into_iter().filter_map(|c| vals[c].as_ref()).min()
}

/// Transports `f` along `phi`. Cells with a single preimage copy its value;
/// the others are filled by increasing dimension (ties by id) from their
/// already defined neighbours so that they end up critical.
pub fn pushforward(phi: &CellMap, f: &DiscreteFunction) -> Result<Pushforward> {
    let (x, y) = (&phi.source, &phi.target);
    f.check_len(x)?;
    let flags = phi.classify();
    let regular = x.is_regular() && y.is_regular();
    if !(flags.non_degenerate || (regular && flags.simplicial)) {
        return Err(Error::MapPrecondition(
            "pushforward needs a non-degenerate map or a simplicial map of regular complexes".into(),
        ));
    }
    let counts = phi.preimage_counts();
    let mut vals: Vec<Option<Rational>> = vec![None; y.len()];
    for (i, &j) in phi.image.iter().enumerate() {
        if counts[j] == 1 {
            vals[j] = Some(f.value(i).clone());
        }
    }
    let mut pending: Vec<usize> = (0..y.len()).filter(|&j| counts[j] != 1).collect();
    pending.sort_by(|&a, &b| y.dim(a).cmp(&y.dim(b)).then_with(|| y.id(a).cmp(y.id(b))));
    let one = Rational::one();
    for t in pending {
        let faces: Vec<usize> = y.faces1_of(t).collect();
        let cofaces: Vec<usize> = y.cofaces1_of(t).collect();
        let face_max = faces
            .iter()
            .map(|&s| vals[s].as_ref().expect("lower-dimensional cells are filled first"))
            .max()
            .cloned();
        let above = || min_defined(&vals, cofaces.iter().copied()).or_else(|| min_defined(&vals, y.cofaces_of(t)));
        let value = match (face_max, cofaces.is_empty()) {
            (None, true) => Rational::zero(),
            (None, false) => above().map(|m| m - &one).unwrap_or_else(Rational::zero),
            (Some(m), true) => m + &one,
            (Some(m), false) => {
                let up = above()
                    .cloned()
                    .unwrap_or_else(|| &m + Rational::from_integer(2.into()));
                (m + up) / Rational::from_integer(2.into())
            }
        };
        vals[t] = Some(value);
    }
    let function =
        DiscreteFunction::from_values(y, vals.into_iter().map(|v| v.expect("every cell is filled")).collect())?;
    let morse = is_discrete_morse(y, &function);
    Ok(Pushforward { function, morse })
}

/// `g ∘ phi`.
pub fn pullback(phi: &CellMap, g: &DiscreteFunction) -> Result<DiscreteFunction> {
    g.check_len(&phi.target)?;
    DiscreteFunction::from_values(&phi.source, phi.image.iter().map(|&j| g.value(j).clone()).collect())
}

/// For an injective non-degenerate map, the target hyperplane (cover index)
/// of every source hyperplane.
pub fn induced_arrangement_map(phi: &CellMap) -> Result<Vec<usize>> {
    let flags = phi.classify();
    if !(flags.injective && flags.non_degenerate) {
        return Err(Error::MapPrecondition(
            "the map must be injective and non-degenerate".into(),
        ));
    }
    Ok(phi
        .source
        .covers()
        .iter()
        .map(|c| {
            phi.target
                .find_cover(phi.image[c.lower], phi.image[c.upper])
                .expect("non-degenerate maps preserve covers")
        })
        .collect())
}
