//! Exact rational arithmetic helpers and number-theoretic coefficient
//! tables: binomials, factorials, Bernoulli numbers, Eulerian polynomials
//! and the λ-coefficients of the polylogarithm product expansion.
//!
//! All values are exact [`Rational`]s; the Bernoulli and Eulerian tables
//! are memoized per process behind a mutex, so concurrent readers are fine.

use std::sync::Mutex;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::{Error, Result};

/// Shorthand for building a rational from small integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

/// Exact factorial n!.
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Exact binomial coefficient C(n, k). Returns 0 for k < 0 or k > n.
/// Negative n is rejected; no formula in this crate needs the generalized
/// binomial and silently extending it hides index bugs.
pub fn binomial(n: i64, k: i64) -> Result<Integer> {
    if n < 0 {
        return Err(Error::invalid(format!("binomial: negative n = {n}")));
    }
    if k < 0 || k > n {
        return Ok(Integer::new());
    }
    Ok(Integer::from(Integer::binomial_u(n as u32, k as u32)))
}

/// C(n, k) for arguments known to be in range.
pub(crate) fn binom(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// The k-th Bernoulli number under the convention B_1 = -1/2, i.e. the
/// coefficients of X/(e^X - 1) = Σ B_k X^k / k!.
///
/// Computed by the defining recursion Σ_{j=0}^{k} C(k+1, j) B_j = 0.
pub fn bernoulli(k: u32) -> Rational {
    let mut table = BERNOULLI.lock().unwrap();
    if table.is_empty() {
        table.push(Rational::from(1));
    }
    while table.len() <= k as usize {
        let m = table.len() as u64; // computing B_m
        if m > 1 && m % 2 == 1 {
            table.push(Rational::new());
            continue;
        }
        let mut acc = Rational::new();
        for (j, b) in table.iter().enumerate() {
            acc += Rational::from((binom(m + 1, j as u64), Integer::from(1))) * b;
        }
        acc /= Rational::from((Integer::from(-(m as i64) - 1), Integer::from(1)));
        table.push(acc);
    }
    table[k as usize].clone()
}

/// A dense univariate polynomial over ℚ. Trailing zero coefficients are
/// stripped; the zero polynomial has an empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0() == std::cmp::Ordering::Equal) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::new(vec![Rational::from(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of X^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Polynomial::new(out)
    }
}

static EULERIAN: Mutex<Vec<Polynomial>> = Mutex::new(Vec::new());

/// The s-th Eulerian polynomial P_s, defined through
/// Li_{-s}(z) = z P_s(z) / (1-z)^{s+1} with coefficients
/// A_{s,n} = Σ_{i=0}^{n} (-1)^i C(s+1, i) (n+1-i)^s.
///
/// P_0 = 1 and P_s(1) = s!.
pub fn eulerian_poly(s: u32) -> Polynomial {
    let mut table = EULERIAN.lock().unwrap();
    if table.is_empty() {
        table.push(Polynomial::one());
    }
    while table.len() <= s as usize {
        let s = table.len() as u64;
        let mut coeffs = Vec::with_capacity(s as usize);
        for n in 0..s {
            let mut a = Integer::new();
            for i in 0..=n {
                let term = binom(s + 1, i) * Integer::from(n + 1 - i).pow(s as u32);
                if i % 2 == 0 {
                    a += term;
                } else {
                    a -= term;
                }
            }
            coeffs.push(Rational::from(a));
        }
        table.push(Polynomial::new(coeffs));
    }
    table[s as usize].clone()
}

/// λ^j_{a,b} = (-1)^{b-1} C(a+b-j-1, a-j) B_{a+b-j} / (a+b-j)!, the
/// correction coefficients in the product of two negative-index
/// polylogarithms (and hence in the bracket quasi-shuffle product).
/// Requires 1 <= j <= a and b >= 1.
pub fn lambda_coeff(a: u32, b: u32, j: u32) -> Result<Rational> {
    if j < 1 || j > a {
        return Err(Error::invalid(format!(
            "lambda_coeff: j = {j} outside [1, {a}]"
        )));
    }
    if b < 1 {
        return Err(Error::invalid("lambda_coeff: b must be >= 1"));
    }
    let m = a + b - j;
    let mut out = Rational::from((
        binom((a + b - j - 1) as u64, (a - j) as u64),
        factorial(m),
    ));
    out *= bernoulli(m);
    if b % 2 == 0 {
        out = -out;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), rat(0, 1));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn bernoulli_defining_recursion() {
        // Σ_{j=0}^{k} C(k+1, j) B_j = 0 for all k >= 1.
        for k in 1..=40u64 {
            let mut acc = Rational::new();
            for j in 0..=k {
                acc += Rational::from(binom(k + 1, j)) * bernoulli(j as u32);
            }
            assert_eq!(acc, Rational::new(), "recursion fails at k = {k}");
        }
    }

    #[test]
    fn eulerian_poly_small() {
        assert_eq!(eulerian_poly(0), Polynomial::one());
        assert_eq!(eulerian_poly(1), Polynomial::one());
        assert_eq!(eulerian_poly(2), Polynomial::new(vec![rat(1, 1), rat(1, 1)]));
        // P_3 = 1 + 4X + X^2
        assert_eq!(
            eulerian_poly(3),
            Polynomial::new(vec![rat(1, 1), rat(4, 1), rat(1, 1)])
        );
    }

    #[test]
    fn eulerian_poly_at_one_is_factorial() {
        for s in 0..=20u32 {
            let val = eulerian_poly(s).eval(&rat(1, 1));
            assert_eq!(val, Rational::from(factorial(s)), "P_{s}(1) != {s}!");
        }
    }

    #[test]
    fn eulerian_li_identity() {
        // Coefficient of t^n in t P_{s-1}(t) / (1-t)^s equals n^{s-1}:
        // expand (1-t)^{-s} = Σ C(n+s-1, s-1) t^n and convolve.
        for s in 1..=8u64 {
            let p = eulerian_poly(s as u32 - 1);
            for n in 1..=30u64 {
                let mut acc = Rational::new();
                for (i, a) in p.coeffs().iter().enumerate() {
                    // term t^{1+i} * C(n-1-i + s-1, s-1)
                    let m = n as i64 - 1 - i as i64;
                    if m < 0 {
                        continue;
                    }
                    acc += Rational::from(binom(m as u64 + s - 1, s - 1)) * a;
                }
                assert_eq!(
                    acc,
                    Rational::from(Integer::from(n).pow(s as u32 - 1)),
                    "Li identity fails at s={s}, n={n}"
                );
            }
        }
    }

    #[test]
    fn lambda_examples() {
        // Forced by the product [2]·[3] = [3,2]+[2,3]+[5]-(1/12)[3].
        assert_eq!(lambda_coeff(3, 2, 3).unwrap(), rat(-1, 12));
        // B_2-free case, forced by [1]·[1] = 2[1,1]+[2]-[1].
        assert_eq!(lambda_coeff(1, 1, 1).unwrap(), rat(-1, 2));
        // Odd Bernoulli numbers vanish.
        for (a, b) in [(2u32, 3u32), (4, 1), (3, 2), (6, 1)] {
            let j = a; // a+b-j = b, pick cases with a+b-a = b odd >= 3
            if (b) % 2 == 1 && b >= 3 {
                assert_eq!(lambda_coeff(a, b, j).unwrap(), Rational::new());
            }
        }
        assert_eq!(lambda_coeff(2, 3, 2).unwrap(), Rational::new());
        assert!(lambda_coeff(3, 2, 4).is_err());
        assert!(lambda_coeff(3, 2, 0).is_err());
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2).unwrap(), Integer::from(10));
        assert_eq!(binomial(4, 0).unwrap(), Integer::from(1));
        assert_eq!(binomial(3, 5).unwrap(), Integer::new());
        assert_eq!(binomial(3, -1).unwrap(), Integer::new());
        assert!(binomial(-1, 0).is_err());
    }
}
