//! Buckingham-Pi dimensional analysis in exact rational arithmetic.
//!
//! A [`QuantitySet`] is a list of named quantities, each with a
//! [`DimensionVector`] over a shared [`BaseSystem`]. The dimensionless groups
//! are the kernel of the dimension matrix, returned in a canonical integer
//! basis so results are reproducible.

pub mod fixtures;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix, Rational};

pub use parse::parse_quantities;

/// Ordered list of base-quantity symbols, e.g. `L T M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseSystem {
    names: Vec<String>,
}

impl BaseSystem {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidBaseSystem("no base quantities".into()));
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref().trim();
            if n.is_empty() {
                return Err(Error::InvalidBaseSystem("empty base symbol".into()));
            }
            if out.iter().any(|o| o == n) {
                return Err(Error::InvalidBaseSystem(format!("duplicate base symbol `{n}`")));
            }
            out.push(n.to_string());
        }
        Ok(Self { names: out })
    }

    /// The mechanical system (length, time, mass).
    pub fn mechanical() -> Self {
        Self::new(&["L", "T", "M"]).expect("static base system")
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.names.iter().position(|n| n == symbol)
    }
}

/// Exponents of one quantity's dimension with respect to a base system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimensionVector {
    base: BaseSystem,
    exponents: Vec<Rational>,
}

impl DimensionVector {
    pub fn new(base: &BaseSystem, exponents: Vec<Rational>) -> Result<Self> {
        if exponents.len() != base.len() {
            return Err(Error::LengthMismatch {
                expected: base.len(),
                found: exponents.len(),
            });
        }
        Ok(Self {
            base: base.clone(),
            exponents,
        })
    }

    /// Convenience constructor from integer exponents.
    pub fn from_ints(base: &BaseSystem, exps: &[i64]) -> Result<Self> {
        Self::new(base, exps.iter().map(|&e| linalg::rat(e)).collect())
    }

    /// The dimension of a pure number.
    pub fn dimensionless(base: &BaseSystem) -> Self {
        Self {
            base: base.clone(),
            exponents: vec![Rational::zero(); base.len()],
        }
    }

    pub fn base(&self) -> &BaseSystem {
        &self.base
    }

    pub fn exponents(&self) -> &[Rational] {
        &self.exponents
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, e) in self.base.names.iter().zip(&self.exponents) {
            if e.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantity {
    pub name: String,
    pub dimension: DimensionVector,
}

/// An ordered, uniquely named collection of quantities over one base system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantitySet {
    base: BaseSystem,
    quantities: Vec<Quantity>,
}

impl QuantitySet {
    pub fn new(quantities: Vec<Quantity>) -> Result<Self> {
        let first = quantities.first().ok_or(Error::EmptyQuantitySet)?;
        let base = first.dimension.base.clone();
        for (i, q) in quantities.iter().enumerate() {
            if q.dimension.base != base {
                return Err(Error::BaseSystemMismatch {
                    quantity: q.name.clone(),
                    expected: base.names.clone(),
                    found: q.dimension.base.names.clone(),
                });
            }
            if quantities[..i].iter().any(|o| o.name == q.name) {
                return Err(Error::DuplicateQuantity(q.name.clone()));
            }
        }
        Ok(Self { base, quantities })
    }

    /// Builds a set from `(name, integer exponents)` pairs.
    pub fn from_int_table(base: &BaseSystem, table: &[(&str, &[i64])]) -> Result<Self> {
        let qs = table
            .iter()
            .map(|(name, exps)| {
                Ok(Quantity {
                    name: (*name).to_string(),
                    dimension: DimensionVector::from_ints(base, exps)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(qs)
    }

    pub fn base(&self) -> &BaseSystem {
        &self.base
    }

    pub fn quantities(&self) -> &[Quantity] {
        &self.quantities
    }

    pub fn len(&self) -> usize {
        self.quantities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quantities.is_empty()
    }

    pub fn names(&self) -> Vec<&str> {
        self.quantities.iter().map(|q| q.name.as_str()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.quantities.iter().position(|q| q.name == name)
    }

    /// Exponent vector over this set's quantities for a named monomial, e.g.
    /// `[("t", 2), ("g", 1), ("s", -1)]`. Unknown names are rejected.
    pub fn monomial(&self, factors: &[(&str, Rational)]) -> Result<Vec<Rational>> {
        let mut x = vec![Rational::zero(); self.len()];
        for (name, e) in factors {
            let j = self
                .index_of(name)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown quantity `{name}`")))?;
            x[j] += e;
        }
        Ok(x)
    }
}

/// Exponents `x_j` of a dimensionless monomial `Π Q_j^{x_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiGroup {
    pub exponents: Vec<Rational>,
}

impl PiGroup {
    /// Nonzero exponents keyed by quantity name.
    pub fn to_map(&self, qs: &QuantitySet) -> BTreeMap<String, Rational> {
        qs.quantities
            .iter()
            .zip(&self.exponents)
            .filter(|(_, e)| !e.is_zero())
            .map(|(q, e)| (q.name.clone(), e.clone()))
            .collect()
    }

    /// Human-readable monomial such as `t^2 s^-1 g`.
    pub fn display(&self, qs: &QuantitySet) -> String {
        let parts: Vec<String> = qs
            .quantities
            .iter()
            .zip(&self.exponents)
            .filter(|(_, e)| !e.is_zero())
            .map(|(q, e)| {
                if e.is_one() {
                    q.name.clone()
                } else if e.is_negative() || !e.is_integer() {
                    format!("{}^({e})", q.name)
                } else {
                    format!("{}^{e}", q.name)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

/// k×n matrix whose column j is the dimension vector of quantity j.
pub fn dimension_matrix(qs: &QuantitySet) -> Result<RatMatrix> {
    if qs.is_empty() {
        return Err(Error::EmptyQuantitySet);
    }
    let k = qs.base.len();
    for q in &qs.quantities {
        if q.dimension.base != qs.base {
            return Err(Error::BaseSystemMismatch {
                quantity: q.name.clone(),
                expected: qs.base.names.clone(),
                found: q.dimension.base.names.clone(),
            });
        }
    }
    Ok((0..k)
        .map(|s| {
            qs.quantities
                .iter()
                .map(|q| q.dimension.exponents[s].clone())
                .collect()
        })
        .collect())
}

/// Canonical kernel basis of a rational matrix with `n` columns.
pub fn rational_nullspace(m: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    linalg::nullspace(m, n)
}

/// A basis of the dimensionless groups, `n - rank` of them.
pub fn pi_groups(qs: &QuantitySet) -> Result<Vec<PiGroup>> {
    let m = dimension_matrix(qs)?;
    Ok(rational_nullspace(&m, qs.len())
        .into_iter()
        .map(|exponents| PiGroup { exponents })
        .collect())
}

/// True iff `Π Q_j^{x_j}` is dimensionless, decided exactly.
pub fn is_dimensionless(qs: &QuantitySet, x: &[Rational]) -> Result<bool> {
    if x.len() != qs.len() {
        return Err(Error::LengthMismatch {
            expected: qs.len(),
            found: x.len(),
        });
    }
    let m = dimension_matrix(qs)?;
    Ok(linalg::mat_vec(&m, x).iter().all(Zero::is_zero))
}

/// Coefficients writing `target` as a rational combination of `groups`, if
/// it lies in their span.
pub fn span_membership(groups: &[PiGroup], target: &[Rational]) -> Option<Vec<Rational>> {
    let basis: Vec<Vec<Rational>> = groups.iter().map(|g| g.exponents.clone()).collect();
    linalg::span_coefficients(&basis, target)
}

pub fn rank(qs: &QuantitySet) -> Result<usize> {
    Ok(linalg::rank(&dimension_matrix(qs)?))
}
