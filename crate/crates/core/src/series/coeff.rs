//! Coefficient rings for perturbation series.

use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::linalg::{self, Rational};

/// Arithmetic needed by the series routines.
///
/// `EXACT` rings decide zero exactly; inexact rings (complex floats) use a
/// scaled tolerance supplied by the caller.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn try_inv(&self) -> Option<Self>;

    /// Absolute value as a float, for tolerances and diagnostics.
    fn magnitude(&self) -> f64;

    fn from_rational(r: &Rational) -> Self;
}

impl Coeff for Rational {
    const EXACT: bool = true;

    fn try_inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().map_or(f64::INFINITY, f64::abs)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Coeff for Complex64 {
    const EXACT: bool = false;

    fn try_inv(&self) -> Option<Self> {
        (*self != Complex64::zero()).then(|| self.inv())
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn from_rational(r: &Rational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

/// Element of the number field Q(c^{1/n}), stored as a polynomial in
/// α = c^{1/n} of degree below n.
///
/// Elements built from plain rationals (`zero`, `one`, `from_rational`) carry
/// no field and are promoted when combined with an element that has one.
#[derive(Clone, Debug)]
pub struct Radical {
    coeffs: Vec<Rational>,
    field: Option<(usize, Rational)>,
}

impl Radical {
    /// α = c^{1/n} itself.
    pub fn root(c: Rational, n: usize) -> Self {
        assert!(n >= 1, "radical degree must be positive");
        let mut coeffs = vec![Rational::zero(); n];
        if n == 1 {
            coeffs[0] = c.clone();
        } else {
            coeffs[1] = Rational::one();
        }
        Self {
            coeffs,
            field: Some((n, c)),
        }
    }

    pub fn rational(r: Rational) -> Self {
        Self {
            coeffs: vec![r],
            field: None,
        }
    }

    /// Builds Σ a_i α^i in the field Q(c^{1/n}).
    pub fn from_powers(c: Rational, n: usize, powers: Vec<Rational>) -> Self {
        let mut out = Self {
            coeffs: powers,
            field: Some((n, c)),
        };
        out.reduce();
        out
    }

    /// Coefficient of α^i.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn to_f64(&self) -> f64 {
        let alpha = match &self.field {
            Some((n, c)) => c.to_f64().unwrap_or(f64::NAN).powf(1.0 / *n as f64),
            None => 0.0,
        };
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * alpha + a.to_f64().unwrap_or(f64::NAN))
    }

    fn merge_field(&self, other: &Self) -> Option<(usize, Rational)> {
        match (&self.field, &other.field) {
            (Some(a), Some(b)) => {
                assert!(a == b, "radical elements from different fields");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    /// Folds powers α^{n+j} back to c·α^j and trims trailing zeros.
    fn reduce(&mut self) {
        if let Some((n, c)) = &self.field {
            while self.coeffs.len() > *n {
                let top = self.coeffs.pop().expect("nonempty");
                let j = self.coeffs.len() - n;
                self.coeffs[j] += top * c;
            }
        }
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(Rational::zero());
        }
    }

    fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }
}

impl fmt::Display for Radical {
    /// Writes `a + b*c^(1/n) + ...`, dropping zero terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| match (&self.field, i) {
                (Some((n, c)), i) if i > 0 => {
                    let e = Rational::new(BigInt::from(i), BigInt::from(*n));
                    if a.is_one() {
                        format!("{c}^({e})")
                    } else if (-a).is_one() {
                        format!("-{c}^({e})")
                    } else {
                        format!("({a})*{c}^({e})")
                    }
                }
                _ => a.to_string(),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl PartialEq for Radical {
    fn eq(&self, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| self.coeff(i) == other.coeff(i))
    }
}

impl Add for Radical {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let field = self.merge_field(&rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        let mut out = Self { coeffs, field };
        out.reduce();
        out
    }
}

impl Neg for Radical {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().map(|a| -a).collect(),
            field: self.field,
        }
    }
}

impl Sub for Radical {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for Radical {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let field = self.merge_field(&rhs);
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut out = Self { coeffs, field };
        out.reduce();
        out
    }
}

impl Zero for Radical {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for Radical {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl Coeff for Radical {
    const EXACT: bool = true;

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(Self {
                coeffs: vec![self.coeffs[0].recip()],
                field: self.field.clone(),
            });
        }
        let (n, c) = self.field.clone().expect("irrational element has a field");
        // Column j of the multiplication matrix is self·α^j.
        let cols: Vec<Radical> = (0..n)
            .map(|j| {
                let mut e = vec![Rational::zero(); j + 1];
                e[j] = Rational::one();
                self.clone()
                    * Self {
                        coeffs: e,
                        field: Some((n, c.clone())),
                    }
            })
            .collect();
        let m: Vec<Vec<Rational>> = (0..n)
            .map(|i| cols.iter().map(|col| col.coeff(i)).collect())
            .collect();
        let mut rhs = vec![Rational::zero(); n];
        rhs[0] = Rational::one();
        // x^n - c is irreducible for the fields used here; a reducible
        // modulus can make the element a zero divisor.
        let x = linalg::solve(&m, &rhs)?;
        Some(Self::from_powers(c, n, x))
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    fn from_rational(r: &Rational) -> Self {
        Self::rational(r.clone())
    }
}

/// `n/d` as a radical-free element.
pub fn radical_ratio(n: i64, d: i64) -> Radical {
    Radical::rational(Rational::new(BigInt::from(n), BigInt::from(d)))
}
