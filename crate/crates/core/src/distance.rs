//! Sums of square roots of rationals, the exact form of edit distances.

use num_traits::{Signed, Zero};

use crate::rational::{to_f64, Rational};

/// A distance `Σ √termᵢ` with nonnegative rational radicands. Each term is
/// the squared euclidean cost of one step of an edit sequence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Distance {
    terms: Vec<Rational>,
}

impl Distance {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_squared(squared: Rational) -> Self {
        assert!(!squared.is_negative(), "squared distances are nonnegative");
        let mut d = Self::zero();
        d.push(squared);
        d
    }

    /// Appends one step; zero terms are dropped.
    pub fn push(&mut self, squared: Rational) {
        if !squared.is_zero() {
            self.terms.push(squared);
        }
    }

    pub fn terms(&self) -> &[Rational] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn approx(&self) -> f64 {
        self.terms.iter().map(|t| to_f64(t).sqrt()).sum()
    }

    /// The exact square of the distance when it has at most one term.
    pub fn single_squared(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [t] => Some(t.clone()),
            _ => None,
        }
    }
}
