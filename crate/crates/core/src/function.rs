use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// An exact rational value on every cell, stored in the complex's cell order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscreteFunction {
    values: Vec<Rational>,
}

impl DiscreteFunction {
    /// Wraps raw values in cell-index order.
    pub fn from_values(x: &Complex, values: Vec<Rational>) -> Result<Self> {
        if values.len() != x.len() {
            return Err(Error::FunctionLength {
                got: values.len(),
                expected: x.len(),
            });
        }
        Ok(Self { values })
    }

    /// Builds a function from `(cell id, value)` pairs that must cover every
    /// cell exactly once.
    pub fn from_pairs<S: AsRef<str>>(x: &Complex, pairs: &[(S, Rational)]) -> Result<Self> {
        let map: HashMap<&str, &Rational> = pairs.iter().map(|(k, v)| (k.as_ref(), v)).collect();
        for (k, _) in pairs {
            x.index_of(k.as_ref())?;
        }
        if map.len() != pairs.len() {
            let mut seen = std::collections::HashSet::new();
            for (k, _) in pairs {
                if !seen.insert(k.as_ref()) {
                    return Err(Error::DuplicateCell(k.as_ref().to_string()));
                }
            }
        }
        let values = (0..x.len())
            .map(|i| {
                map.get(x.id(i))
                    .map(|v| (*v).clone())
                    .ok_or_else(|| Error::MissingValue(x.id(i).to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { values })
    }

    pub fn from_map(x: &Complex, map: &BTreeMap<String, Rational>) -> Result<Self> {
        let pairs: Vec<(&str, Rational)> = map.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
        Self::from_pairs(x, &pairs)
    }

    /// The dimension function `σ ↦ dim σ`.
    pub fn dimension(x: &Complex) -> Self {
        Self {
            values: (0..x.len())
                .map(|i| Rational::from_integer((x.dim(i) as i64).into()))
                .collect(),
        }
    }

    pub fn constant(x: &Complex, c: Rational) -> Self {
        Self {
            values: vec![c; x.len()],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, x: &Complex, id: &str) -> Result<&Rational> {
        Ok(&self.values[x.index_of(id)?])
    }

    pub fn check_len(&self, x: &Complex) -> Result<()> {
        if self.values.len() != x.len() {
            return Err(Error::FunctionLength {
                got: self.values.len(),
                expected: x.len(),
            });
        }
        Ok(())
    }

    pub fn to_map(&self, x: &Complex) -> BTreeMap<String, Rational> {
        (0..x.len())
            .map(|i| (x.id(i).to_string(), self.values[i].clone()))
            .collect()
    }

    /// `λ·self + (1 − λ)·other`.
    pub fn affine_combination(&self, other: &Self, lambda: &Rational) -> Self {
        let mu = Rational::from_integer(1.into()) - lambda;
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| lambda * a + &mu * b)
                .collect(),
        }
    }

    /// Squared euclidean distance between two functions on the same complex.
    pub fn squared_distance(&self, other: &Self) -> Rational {
        self.values
            .iter()
            .zip(&other.values)
            .fold(Rational::zero(), |acc, (a, b)| {
                let d = a - b;
                acc + &d * &d
            })
    }

    pub fn is_injective(&self) -> bool {
        let mut sorted: Vec<&Rational> = self.values.iter().collect();
        sorted.sort();
        sorted.windows(2).all(|w| w[0] != w[1])
    }
}
