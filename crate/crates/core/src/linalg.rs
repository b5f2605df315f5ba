//! Exact rational linear algebra (row reduction, rank, kernels, solves) and
//! a small dense float solver for Newton steps.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Dense row-major rational matrix.
pub type RatMatrix = Vec<Vec<Rational>>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Reduced row echelon form. Returns the reduced matrix and the pivot column
/// of each nonzero row, scanning columns left to right.
pub fn rref(m: &[Vec<Rational>]) -> (RatMatrix, Vec<usize>) {
    let mut a: RatMatrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let delta = &f * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    rref(m).1.len()
}

/// Kernel basis of `m` (k×n) with the canonical normalisation: one vector per
/// non-pivot column (leftmost first) with that free variable set to 1 and the
/// other free variables 0, then scaled to coprime integers with the first
/// nonzero entry positive.
pub fn nullspace(m: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    if m.is_empty() {
        return (0..n)
            .map(|f| (0..n).map(|j| if j == f { rat(1) } else { rat(0) }).collect())
            .collect();
    }
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[row][f].clone();
            }
            normalize_integer(&v)
        })
        .collect()
}

/// Scales a nonzero rational vector to coprime integers with its first
/// nonzero entry positive. The zero vector is returned unchanged.
pub fn normalize_integer(v: &[Rational]) -> Vec<Rational> {
    let Some(first) = v.iter().find(|x| !x.is_zero()) else {
        return v.to_vec();
    };
    let lcm_den = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(lcm_den.clone())).to_integer())
        .collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if first.is_negative() { -BigInt::one() } else { BigInt::one() };
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g * &sign))
        .collect()
}

pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

/// Solves the square system `m x = b` exactly. Returns `None` when `m` is
/// singular.
pub fn solve(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let aug: RatMatrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(r.iter().map(|row| row[n].clone()).collect())
}

/// Is `target` in the span of `basis`? Decided by comparing ranks exactly.
pub fn in_span(basis: &[Vec<Rational>], target: &[Rational]) -> bool {
    if basis.is_empty() {
        return target.iter().all(Zero::is_zero);
    }
    let mut with = basis.to_vec();
    with.push(target.to_vec());
    rank(basis) == rank(&with)
}

/// Coefficients expressing `target` in terms of `basis`, if it lies in the span.
pub fn span_coefficients(basis: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let n = target.len();
    let p = basis.len();
    // Columns are basis vectors: solve B c = target with B n×p.
    let aug: RatMatrix = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.contains(&p) {
        return None;
    }
    let mut c = vec![Rational::zero(); p];
    for (row, &pc) in pivots.iter().enumerate() {
        c[pc] = r[row][p].clone();
    }
    Some(c)
}

/// Solves a small dense float system by Gaussian elimination with partial
/// pivoting. Returns `None` for a (numerically) singular matrix.
pub fn solve_f64(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-300 || !a[p][c].is_finite() {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            if f != 0.0 {
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let id = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(nullspace(&id, 3).is_empty());
        assert_eq!(rank(&id), 3);
    }

    #[test]
    fn zero_matrix_kernel_is_unit_vectors() {
        let z = m(&[&[0, 0, 0, 0], &[0, 0, 0, 0]]);
        let k = nullspace(&z, 4);
        assert_eq!(k.len(), 4);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x, rat(i64::from(i == j)));
            }
        }
    }

    #[test]
    fn normalisation_clears_denominators_and_sign() {
        let v = vec![ratio(-1, 2), rat(0), ratio(3, 4)];
        assert_eq!(normalize_integer(&v), vec![rat(2), rat(0), rat(-3)]);
    }

    #[test]
    fn solve_detects_singular() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert!(solve(&a, &[rat(1), rat(2)]).is_none());
        let b = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&b, &[rat(3), rat(5)]).unwrap();
        assert_eq!(x, vec![ratio(4, 5), ratio(7, 5)]);
    }

    #[test]
    fn float_solve() {
        let x = solve_f64(vec![vec![0.0, 2.0], vec![1.0, 1.0]], vec![4.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
        assert!(solve_f64(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 2.0]).is_none());
    }

    #[test]
    fn span_coefficients_roundtrip() {
        let basis = vec![vec![rat(1), rat(0), rat(1)], vec![rat(0), rat(1), rat(1)]];
        let t = vec![rat(2), rat(-3), rat(-1)];
        let c = span_coefficients(&basis, &t).unwrap();
        assert_eq!(c, vec![rat(2), rat(-3)]);
        assert!(span_coefficients(&basis, &[rat(1), rat(0), rat(0)]).is_none());
    }
}
