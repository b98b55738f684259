//! Exponential towers `Q(x)(ξ₁, …, ξ_m)` with `δξᵢ/ξᵢ ∈ Q(x)`.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::hyperexp::{HyperClass, Hyperexp, TowerElem};
use super::solve_rank1;
use crate::error::Result;
use crate::galois::relation_lattice;
use crate::ratfield::RatFunc;

/// Generators of an exponential tower. Only their classes matter: rescaling
/// a generator by a rational function gives the same field.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SplittingTower {
    generators: Vec<Hyperexp>,
}

impl SplittingTower {
    /// The base field Q(x) itself.
    pub fn base() -> Self {
        Self::default()
    }

    /// Drops rational generators and repeated classes.
    pub fn new(generators: impl IntoIterator<Item = Hyperexp>) -> Self {
        let mut seen = BTreeSet::new();
        let generators = generators
            .into_iter()
            .filter(|g| !g.is_rational() && seen.insert(g.class().clone()))
            .collect();
        SplittingTower { generators }
    }

    /// Tower generated by solutions of `y' = aᵢ y`.
    pub fn generated_by(a: &[RatFunc]) -> Result<Self> {
        Ok(Self::new(a.iter().map(solve_rank1).collect::<Result<Vec<_>>>()?))
    }

    pub fn adjoin(&self, more: impl IntoIterator<Item = Hyperexp>) -> Self {
        Self::new(self.generators.iter().cloned().chain(more))
    }

    pub fn parse_list(items: &[String]) -> Result<Self> {
        Ok(Self::new(items.iter().map(|s| s.parse()).collect::<Result<Vec<Hyperexp>>>()?))
    }

    pub fn generators(&self) -> &[Hyperexp] {
        &self.generators
    }

    pub fn log_derivatives(&self) -> Vec<RatFunc> {
        self.generators.iter().map(Hyperexp::log_derivative).collect()
    }

    /// Is some rational multiple of `ξ_class` a monomial in the generators?
    pub fn contains_class(&self, class: &HyperClass) -> Result<bool> {
        if class.is_trivial() {
            return Ok(true);
        }
        let mut a = self.log_derivatives();
        a.push(class.log_derivative());
        let last = a.len() - 1;
        let g = relation_lattice(&a)?.iter().fold(BigInt::zero(), |g, v| g.gcd(&v[last]));
        Ok(g.is_one())
    }

    pub fn contains(&self, e: &TowerElem) -> Result<bool> {
        for class in e.terms().keys() {
            if !self.contains_class(class)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for SplittingTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(ToString::to_string).collect();
        if gens.is_empty() {
            return write!(f, "Q(x)");
        }
        write!(f, "Q(x)({})", gens.join(", "))
    }
}

impl fmt::Debug for SplittingTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SplittingTower({self})")
    }
}
