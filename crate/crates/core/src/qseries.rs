//! Truncated formal power series in q with exact rational coefficients.
//!
//! A [`QSeries`] stores coefficients for q^0 .. q^N where N is its order.
//! Arithmetic never fabricates coefficients beyond the smallest operand
//! order, and equality is only meaningful up to a common truncation.

use std::cmp::Ordering;
use std::fmt;

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::{Error, Result};

/// A formal power series Σ a_n q^n truncated at order N (inclusive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Series with the given coefficients; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        QSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        QSeries {
            coeffs: vec![Rational::new(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = QSeries::zero(order);
        s.coeffs[0] = Rational::from(1);
        s
    }

    /// The constant series c.
    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = QSeries::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Highest known exponent.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff_mut(&mut self, n: usize) -> &mut Rational {
        &mut self.coeffs[n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.cmp0() == Ordering::Equal)
    }

    /// Re-truncate to a (smaller or equal) order.
    pub fn truncate(&self, order: usize) -> QSeries {
        let n = order.min(self.order());
        QSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let n = self.order().min(other.order());
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..=n {
            out.push(Rational::from(&self.coeffs[i] + &other.coeffs[i]));
        }
        QSeries { coeffs: out }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        let n = self.order().min(other.order());
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..=n {
            out.push(Rational::from(&self.coeffs[i] - &other.coeffs[i]));
        }
        QSeries { coeffs: out }
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| Rational::from(a * c)).collect(),
        }
    }

    /// Cauchy product truncated to the smaller operand order.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::new(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.cmp0() == Ordering::Equal {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.cmp0() == Ordering::Equal {
                    continue;
                }
                out[i + j] += Rational::from(a * b);
            }
        }
        QSeries { coeffs: out }
    }

    /// The derivation d = q·d/dq: a_n ↦ n·a_n.
    pub fn derive(&self) -> QSeries {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, a)| Rational::from(a * Rational::from(n as u64)))
                .collect(),
        }
    }

    /// Numeric evaluation Σ a_n q0^n at a point inside the unit disk,
    /// with working precision in bits. The reported tail bound is the
    /// geometric estimate |a_N| |q0|^{N+1} / (1 - |q0|); it assumes the
    /// dropped coefficients stay bounded by |a_N| (see [`EvalResult`]).
    pub fn eval(&self, q0: &Complex, prec: u32) -> Result<EvalResult> {
        let abs = Float::with_val(prec, q0.abs_ref());
        if abs >= 1 {
            return Err(Error::OutsideUnitDisk(abs.to_string()));
        }
        // Horner from the top coefficient down.
        let mut acc = Complex::new(prec);
        for a in self.coeffs.iter().rev() {
            acc *= q0;
            acc += Complex::with_val(prec, a);
        }
        let last = Float::with_val(prec, self.coeffs.last().unwrap().clone().abs());
        let tail = last * abs.clone().pow((self.order() + 1) as u32)
            / (Float::with_val(prec, 1) - &abs);
        Ok(EvalResult {
            value: acc,
            tail_bound: tail,
            tail_assumes_bounded_coeffs: true,
        })
    }

    /// Serialize as `{"order": N, "coeffs": ["num/den", ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order(),
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    /// Parse the serialization produced by [`QSeries::to_json`].
    pub fn from_json(v: &serde_json::Value) -> Result<QSeries> {
        let order = v["order"]
            .as_u64()
            .ok_or_else(|| Error::Parse("missing order".into()))? as usize;
        let arr = v["coeffs"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing coeffs".into()))?;
        if arr.len() != order + 1 {
            return Err(Error::Parse("coeffs length does not match order".into()));
        }
        let mut coeffs = Vec::with_capacity(arr.len());
        for c in arr {
            let s = c.as_str().ok_or_else(|| Error::Parse("coeff not a string".into()))?;
            coeffs.push(
                s.parse::<Rational>()
                    .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?,
            );
        }
        Ok(QSeries { coeffs })
    }
}

/// Result of a numeric series evaluation. `tail_bound` is heuristic in the
/// sense recorded by `tail_assumes_bounded_coeffs`: it is exact only when
/// the dropped coefficients are bounded by the last stored one.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub value: Complex,
    pub tail_bound: Float,
    pub tail_assumes_bounded_coeffs: bool,
}

impl fmt::Display for QSeries {
    /// Text form used by the CLI, e.g. `q + 3q^2 + 4q^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.cmp0() == Ordering::Equal {
                continue;
            }
            let neg = c.cmp0() == Ordering::Less;
            let mag = c.clone().abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_str = if mag.is_integer() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            match n {
                0 => write!(f, "{coeff_str}")?,
                _ => {
                    if mag != 1u32 {
                        write!(f, "{coeff_str}")?;
                    }
                    if n == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{n}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// q-expansion of the discriminant cusp form Δ = q ∏_{n>0} (1-q^n)^24,
/// exact to the requested order.
pub fn delta_series(order: usize) -> QSeries {
    // Euler product via the pentagonal number theorem, then three squarings
    // and one product for the 24th power, then the leading q shift.
    let mut euler = vec![Integer::new(); order + 1];
    euler[0] = Integer::from(1);
    let mut k: i64 = 1;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        if g1 as usize > order && g2 as usize > order {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for g in [g1, g2] {
            if (g as usize) <= order {
                euler[g as usize] += sign;
            }
        }
        k += 1;
    }
    let sq = |a: &Vec<Integer>| -> Vec<Integer> {
        let mut out = vec![Integer::new(); order + 1];
        for i in 0..=order {
            if a[i].cmp0() == Ordering::Equal {
                continue;
            }
            for j in 0..=(order - i) {
                if a[j].cmp0() == Ordering::Equal {
                    continue;
                }
                out[i + j] += Integer::from(&a[i] * &a[j]);
            }
        }
        out
    };
    let e2 = sq(&euler);
    let e4 = sq(&e2);
    let e8 = sq(&e4);
    let e16 = sq(&e8);
    // e24 = e16 * e8
    let mut e24 = vec![Integer::new(); order + 1];
    for i in 0..=order {
        if e16[i].cmp0() == Ordering::Equal {
            continue;
        }
        for j in 0..=(order - i) {
            if e8[j].cmp0() == Ordering::Equal {
                continue;
            }
            e24[i + j] += Integer::from(&e16[i] * &e8[j]);
        }
    }
    let mut coeffs = vec![Rational::new(); order + 1];
    for n in 1..=order {
        coeffs[n] = Rational::from(e24[n - 1].clone());
    }
    QSeries::from_coeffs(coeffs)
}
