use num_bigint::BigInt;
use num_traits::Zero;

use super::{BaseSystem, DimensionVector, Quantity, QuantitySet};
use crate::error::{Error, Result};
use crate::linalg::Rational;

/// Parses a quantity declaration file.
///
/// ```text
/// # comment
/// base: L T M
/// t: T
/// g: L T^-2
/// e: M^1/2 L^3/2 T^-1
/// n:
/// ```
///
/// The `base:` line is optional and defaults to `L T M`; when present it
/// must precede every quantity. A repeated base symbol inside one line adds
/// the exponents. An empty right-hand side declares a pure number.
pub fn parse_quantities(text: &str) -> Result<QuantitySet> {
    let mut base: Option<BaseSystem> = None;
    let mut quantities = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, rhs) = line.split_once(':').ok_or_else(|| Error::Parse {
            line: line_no,
            message: "expected `name: dimension`".into(),
        })?;
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty quantity name".into(),
            });
        }
        if name == "base" {
            if base.is_some() || !quantities.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "`base:` must appear once, before any quantity".into(),
                });
            }
            let names: Vec<&str> = rhs.split_whitespace().collect();
            base = Some(BaseSystem::new(&names).map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?);
            continue;
        }
        let b = base.get_or_insert_with(BaseSystem::mechanical).clone();
        let dim = parse_dimension(&b, rhs).map_err(|message| Error::Parse {
            line: line_no,
            message,
        })?;
        quantities.push(Quantity {
            name: name.to_string(),
            dimension: dim,
        });
    }
    QuantitySet::new(quantities)
}

fn parse_dimension(base: &BaseSystem, rhs: &str) -> std::result::Result<DimensionVector, String> {
    let mut exps = vec![Rational::zero(); base.len()];
    for token in rhs.split_whitespace() {
        let (sym, exp) = match token.split_once('^') {
            Some((s, e)) => (s, parse_rational(e)?),
            None => (token, Rational::from_integer(BigInt::from(1))),
        };
        let i = base
            .index_of(sym)
            .ok_or_else(|| format!("unknown base symbol `{sym}`"))?;
        exps[i] += exp;
    }
    DimensionVector::new(base, exps).map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    let s = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(s);
    let bad = || format!("invalid exponent `{s}`");
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    #[test]
    fn parses_rational_exponents() {
        let qs = parse_quantities("base: L T M\ne: M^1/2 L^(3/2) T^-1\n").unwrap();
        assert_eq!(
            qs.quantities()[0].dimension.exponents(),
            &[ratio(3, 2), rat(-1), ratio(1, 2)]
        );
    }

    #[test]
    fn default_base_and_comments() {
        let qs = parse_quantities("# pendulum\n t: T\ng: L T^-2 # gravity\n").unwrap();
        assert_eq!(qs.base().names(), &["L", "T", "M"]);
        assert_eq!(qs.len(), 2);
    }

    #[test]
    fn empty_rhs_is_pure_number() {
        let qs = parse_quantities("n:\n").unwrap();
        assert!(qs.quantities()[0].dimension.exponents().iter().all(Zero::is_zero));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_quantities("t: T\nx: Q^2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_quantities("t: T^1/0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_quantities("t: T\nbase: L\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert_eq!(parse_quantities("# nothing\n").unwrap_err(), Error::EmptyQuantitySet);
    }
}
