use num_traits::Zero;

use super::coeff::Coeff;

/// Truncated power series a₀ + a₁ε + … + a_Nε^N.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> PerturbationSeries<C> {
    /// Series with the given coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series ε itself (zero when `order == 0`).
    pub fn epsilon(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = C::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn set_coeff(&mut self, i: usize, c: C) {
        self.coeffs[i] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Pads with zeros or truncates to the requested order.
    pub fn with_order(&self, order: usize) -> Self {
        Self {
            coeffs: (0..=order).map(|i| self.coeff(i)).collect(),
        }
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check_orders(&self, other: &Self) {
        assert_eq!(
            self.order(),
            other.order(),
            "series arithmetic needs equal truncation orders"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_orders(other);
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_orders(other);
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_orders(other);
        let n = self.order();
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self { coeffs: out }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::constant(C::one(), self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Evaluates the truncated polynomial at a concrete ε.
    pub fn eval(&self, eps: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, a| acc * eps.clone() + a.clone())
    }
}

/// Binary operation selector for [`series_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Pow(u32),
}

/// `a op b` with truncation at the shared order; `b` is ignored for `Pow`.
pub fn series_arith<C: Coeff>(
    a: &PerturbationSeries<C>,
    b: &PerturbationSeries<C>,
    op: SeriesOp,
) -> PerturbationSeries<C> {
    match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Mul => a.mul(b),
        SeriesOp::Pow(n) => a.pow(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, Rational};

    fn s(v: &[i64]) -> PerturbationSeries<Rational> {
        PerturbationSeries::new(v.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn square_of_one_plus_eps() {
        assert_eq!(series_arith(&s(&[1, 1, 0]), &s(&[1, 1, 0]), SeriesOp::Mul), s(&[1, 2, 1]));
        assert_eq!(s(&[1, 1, 0]).pow(2), s(&[1, 2, 1]));
    }

    #[test]
    fn product_with_zero() {
        assert!(s(&[3, -2, 7]).mul(&PerturbationSeries::zero(2)).is_zero());
    }

    #[test]
    fn geometric_identity() {
        assert_eq!(s(&[1, -1, 0]).mul(&s(&[1, 1, 1])), s(&[1, 0, 0]));
    }

    #[test]
    fn truncation_never_reads_past_order() {
        let a = s(&[0, 1, 1]);
        assert_eq!(a.pow(3), s(&[0, 0, 0]));
        assert_eq!(s(&[1, 1]).pow(5), s(&[1, 5]));
    }

    #[test]
    #[should_panic(expected = "equal truncation orders")]
    fn mismatched_orders_panic() {
        let _ = s(&[1, 2]).add(&s(&[1, 2, 3]));
    }

    #[test]
    fn eval_and_valuation() {
        let a = s(&[0, 0, 3, 1]);
        assert_eq!(a.valuation(), Some(2));
        assert_eq!(a.eval(&rat(2)), rat(20));
        assert_eq!(PerturbationSeries::<Rational>::zero(3).valuation(), None);
    }
}
