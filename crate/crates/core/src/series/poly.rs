//! Polynomial root problems whose coefficients depend on ε.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::coeff::Coeff;
use super::power_series::PerturbationSeries;
use crate::error::{Error, Result};
use crate::linalg::Rational;

/// Σ_j c_j(ε) x^j with each c_j a series in ε of a common order.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyFamily<C> {
    coeffs: Vec<PerturbationSeries<C>>,
}

impl<C: Coeff> PolyFamily<C> {
    /// `coeffs[j]` multiplies x^j. Series are padded to a common order.
    pub fn new(coeffs: Vec<PerturbationSeries<C>>) -> Result<Self> {
        let order = coeffs
            .iter()
            .map(PerturbationSeries::order)
            .max()
            .ok_or_else(|| Error::InvalidArgument("polynomial family has no coefficients".into()))?;
        if coeffs.last().is_some_and(PerturbationSeries::is_zero) {
            return Err(Error::ZeroLeadingCoefficient);
        }
        Ok(Self {
            coeffs: coeffs.iter().map(|c| c.with_order(order)).collect(),
        })
    }

    /// From nested arrays: `nested[j][i]` is the ε^i coefficient of x^j.
    pub fn from_nested(nested: Vec<Vec<C>>) -> Result<Self> {
        if nested.iter().any(Vec::is_empty) {
            return Err(Error::InvalidArgument("empty coefficient series".into()));
        }
        Self::new(nested.into_iter().map(PerturbationSeries::new).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Truncation order in ε of the coefficient series.
    pub fn order(&self) -> usize {
        self.coeffs[0].order()
    }

    pub fn coeffs(&self) -> &[PerturbationSeries<C>] {
        &self.coeffs
    }

    /// Coefficients of the ε = 0 polynomial.
    pub fn unperturbed(&self) -> Vec<C> {
        self.coeffs.iter().map(|c| c.coeff(0)).collect()
    }

    /// p(x(ε), ε) as a series truncated at the order of `x`.
    pub fn eval_series(&self, x: &PerturbationSeries<C>) -> PerturbationSeries<C> {
        let n = x.order();
        self.coeffs
            .iter()
            .rev()
            .fold(PerturbationSeries::zero(n), |acc, c| {
                acc.mul(x).add(&c.with_order(n))
            })
    }

    /// p(x, ε) at concrete values.
    pub fn eval_at(&self, x: &C, eps: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * x.clone() + c.eval(eps))
    }
}

fn horner<C: Coeff>(p: &[C], x: &C) -> C {
    p.iter()
        .rev()
        .fold(C::zero(), |acc, a| acc * x.clone() + a.clone())
}

fn derivative<C: Coeff>(p: &[C]) -> Vec<C> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(j, a)| a.clone() * C::from_rational(&Rational::from_integer(BigInt::from(j))))
        .collect()
}

/// Expands the root branch through `a0` to order `order`.
///
/// Each step evaluates p at the current partial sum with series arithmetic,
/// reads off the ε^m coefficient r_m and sets a_m = −r_m / p'(a0).
pub fn expand_root<C: Coeff>(
    p: &PolyFamily<C>,
    a0: C,
    order: usize,
) -> Result<PerturbationSeries<C>> {
    let p0 = p.unperturbed();
    let d = p.degree();
    let scale = 1.0 + a0.magnitude();
    let residual = horner(&p0, &a0);
    let not_root = if C::EXACT {
        !residual.is_zero()
    } else {
        let size = p0.iter().map(Coeff::magnitude).fold(1.0, f64::max);
        residual.magnitude() > 1e-9 * size * scale.powi(d as i32)
    };
    if not_root {
        return Err(Error::NotARoot {
            residual: residual.magnitude(),
        });
    }
    let dp = horner(&derivative(&p0), &a0);
    let degenerate = if C::EXACT {
        dp.is_zero()
    } else {
        dp.magnitude() <= 1e-12 * scale.powi(d.saturating_sub(1) as i32)
    };
    if degenerate {
        return Err(Error::DegenerateRoot {
            derivative: dp.magnitude(),
        });
    }
    let inv = dp.try_inv().ok_or(Error::DegenerateRoot {
        derivative: dp.magnitude(),
    })?;
    let mut x = PerturbationSeries::constant(a0, order);
    for m in 1..=order {
        let r = p.eval_series(&x).coeff(m);
        x.set_coeff(m, -(r * inv.clone()));
    }
    Ok(x)
}

/// A rescaled family in δ = ε^{1/q}.
#[derive(Clone, Debug, PartialEq)]
pub struct Rescaled<C> {
    pub family: PolyFamily<C>,
    /// q: the new expansion variable is δ with ε = δ^q.
    pub ramification: usize,
}

/// Substitutes x = ε^{−p} y and divides out the lowest power of ε.
///
/// For p = r/q with q > 1 the result is a family in δ = ε^{1/q}.
pub fn rescale_singular<C: Coeff>(p: &PolyFamily<C>, exponent: &Rational) -> Result<Rescaled<C>> {
    let r = exponent
        .numer()
        .to_i64()
        .ok_or(Error::NonRationalExponent(f64::NAN))?;
    let q = exponent
        .denom()
        .to_i64()
        .ok_or(Error::NonRationalExponent(f64::NAN))?;
    let mut lowest: Option<i64> = None;
    let mut highest = 0i64;
    for (j, c) in p.coeffs.iter().enumerate() {
        for (i, a) in c.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let idx = q * i as i64 - r * j as i64;
            lowest = Some(lowest.map_or(idx, |l| l.min(idx)));
            highest = highest.max(idx);
        }
    }
    let lowest = lowest.ok_or(Error::ZeroLeadingCoefficient)?;
    let order = ((highest - lowest) as usize).max(q as usize * p.order());
    let coeffs = p
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let mut s = PerturbationSeries::zero(order);
            for (i, a) in c.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let idx = q * i as i64 - r * j as i64 - lowest;
                s.set_coeff(idx as usize, a.clone());
            }
            s
        })
        .collect();
    Ok(Rescaled {
        family: PolyFamily::new(coeffs)?,
        ramification: q as usize,
    })
}

/// Recovers p/q from a float when q ≤ 64.
pub fn scale_exponent_from_f64(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::NonRationalExponent(x));
    }
    for q in 1..=64i64 {
        let p = (x * q as f64).round();
        if (x - p / q as f64).abs() <= 1e-12 * x.abs().max(1.0) {
            let r = Rational::new(BigInt::from(p as i64), BigInt::from(q));
            return Ok(r);
        }
    }
    Err(Error::NonRationalExponent(x))
}

/// [`rescale_singular`] with a float exponent that must be a small-denominator rational.
pub fn rescale_singular_f64<C: Coeff>(p: &PolyFamily<C>, exponent: f64) -> Result<Rescaled<C>> {
    rescale_singular(p, &scale_exponent_from_f64(exponent)?)
}

/// ε^p at a rational exponent; used to undo a rescaling numerically.
pub fn rational_power(eps: f64, p: &Rational) -> f64 {
    eps.powf(p.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};
    use crate::series::coeff::Radical;
    use num_complex::Complex64;
    use num_traits::{One, Zero};

    fn fam(nested: &[&[i64]]) -> PolyFamily<Rational> {
        PolyFamily::from_nested(
            nested
                .iter()
                .map(|c| c.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn regular_quadratic() {
        // x² − x + ε
        let p = fam(&[&[0, 1], &[-1], &[1]]);
        let x = expand_root(&p, rat(1), 4).unwrap();
        assert_eq!(x.coeffs(), &[rat(1), rat(-1), rat(-1), rat(-2), rat(-5)]);
        let r = p.eval_series(&x);
        assert!(r.is_zero());
    }

    #[test]
    fn other_quadratic_branch() {
        let p = fam(&[&[0, 1], &[-1], &[1]]);
        let x = expand_root(&p, rat(0), 4).unwrap();
        assert_eq!(x.coeffs(), &[rat(0), rat(1), rat(1), rat(2), rat(5)]);
    }

    #[test]
    fn quintic_in_radical_field() {
        // x⁵ − 2x + ε with a0 = 2^{1/4}
        let z = Radical::zero;
        let one = Radical::one;
        let nested = vec![
            vec![z(), one()],
            vec![Radical::rational(rat(-2))],
            vec![z()],
            vec![z()],
            vec![z()],
            vec![one()],
        ];
        let p = PolyFamily::from_nested(nested).unwrap();
        let a0 = Radical::root(rat(2), 4);
        let x = expand_root(&p, a0, 2).unwrap();
        assert_eq!(x.coeff(1), Radical::rational(ratio(-1, 8)));
        let a2 = Radical::from_powers(rat(2), 4, vec![rat(0), rat(0), rat(0), ratio(-5, 256)]);
        assert_eq!(x.coeff(2), a2);
        assert!((a2.to_f64() + 5.0 * 8f64.powf(0.25) / 256.0).abs() < 1e-15);
    }

    #[test]
    fn constant_root_has_no_corrections() {
        // x − 3
        let p = fam(&[&[-3], &[1]]);
        let x = expand_root(&p, rat(3), 5).unwrap();
        assert_eq!(x, PerturbationSeries::constant(rat(3), 5));
    }

    #[test]
    fn rejects_non_roots_and_double_roots() {
        let p = fam(&[&[0, 1], &[-1], &[1]]);
        assert!(matches!(expand_root(&p, rat(2), 3), Err(Error::NotARoot { .. })));
        // (x − 1)² + ε has a double root at 1.
        let q = fam(&[&[1, 1], &[-2], &[1]]);
        let err = expand_root(&q, rat(1), 3).unwrap_err();
        assert!(matches!(err, Error::DegenerateRoot { .. }));
        assert!(err.to_string().contains("rescale_singular"));
    }

    #[test]
    fn complex_mode_matches_rational_mode() {
        let p: PolyFamily<Complex64> = PolyFamily::from_nested(vec![
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(-1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0)],
        ])
        .unwrap();
        let x = expand_root(&p, Complex64::new(1.0, 0.0), 4).unwrap();
        let expect = [1.0, -1.0, -1.0, -2.0, -5.0];
        for (c, e) in x.coeffs().iter().zip(expect) {
            assert!((c - Complex64::new(e, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn singular_quadratic_rescale() {
        // ε x² + x − 1
        let p = fam(&[&[-1], &[1], &[0, 1]]);
        let r = rescale_singular(&p, &rat(1)).unwrap();
        assert_eq!(r.ramification, 1);
        assert_eq!(r.family, fam(&[&[0, -1], &[1, 0], &[1, 0]]));
        let y = expand_root(&r.family, rat(-1), 2).unwrap();
        assert_eq!(y.coeffs(), &[rat(-1), rat(-1), rat(1)]);
        let same = rescale_singular(&p, &rat(0)).unwrap();
        assert_eq!(same.family, p);
    }

    #[test]
    fn half_exponent_ramifies() {
        let p = fam(&[&[-1], &[1], &[0, 1]]);
        let r = rescale_singular(&p, &ratio(1, 2)).unwrap();
        assert_eq!(r.ramification, 2);
        // x = δ^{-1} y gives δ y² + y − δ: the y² coefficient vanishes at
        // δ = 0, so this balance does not recover the lost root.
        assert_eq!(r.family.coeffs()[2].coeff(1), rat(1));
        assert_eq!(r.family.coeffs()[1].coeff(0), rat(1));
        assert_eq!(r.family.coeffs()[0].coeff(1), rat(-1));
        assert!(r.family.coeffs()[2].coeff(0).is_zero());
    }

    #[test]
    fn float_exponents() {
        assert_eq!(scale_exponent_from_f64(0.5).unwrap(), ratio(1, 2));
        assert_eq!(scale_exponent_from_f64(-2.0).unwrap(), rat(-2));
        assert!(matches!(
            scale_exponent_from_f64(std::f64::consts::PI),
            Err(Error::NonRationalExponent(_))
        ));
        assert!((rational_power(0.01, &ratio(1, 2)) - 0.1).abs() < 1e-15);
    }
}
