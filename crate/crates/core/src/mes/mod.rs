//! Numerics: multiple zeta values, monotangent and multitangent functions,
//! lattice-sum multiple Eisenstein series, their symbolic Fourier
//! expansions, the coproduct-based shuffle regularization, the stuffle
//! regularization at finite level, and the q → 1 limit map.
//!
//! Every evaluation takes an explicit [`Precision`]; there is no global
//! mutable precision state.

mod expansion;
mod lattice;
mod mzv;
mod tangent;
mod zk;

pub use expansion::{
    g_shuffle, mes_fourier, multitangent_reduce_len2, MesTerm, MesExpansion,
};
pub use lattice::{g_star_m, mes_lattice, zeta_direct, LatticeValue};
pub use mzv::{mzv_lincomb, mzv_numeric, z_shuffle_value, z_stuffle_value};
pub use tangent::{monotangent, multitangent};
pub use zk::{zk_limit, ZkResult};

use rug::ops::Pow;
use rug::{Complex, Float};

/// Working precision, expressed in decimal digits. The binary precision
/// carries a guard margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub fn digits(digits: u32) -> Self {
        Precision {
            digits: digits.max(16),
        }
    }

    pub fn digit_count(&self) -> u32 {
        self.digits
    }

    /// Binary working precision.
    pub fn bits(&self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: 64 }
    }
}

pub(crate) fn pi(prec: Precision) -> Float {
    Float::with_val(prec.bits(), rug::float::Constant::Pi)
}

/// The constant -2πi.
pub(crate) fn minus_two_pi_i(prec: Precision) -> Complex {
    let p = pi(prec);
    Complex::with_val(prec.bits(), (0, -2)) * p
}

/// Integer power of a complex number, exponent of either sign. Plain
/// square-and-multiply: the library pow routes through exp/log, which is an
/// order of magnitude slower at these exponents.
pub(crate) fn cpow(z: &Complex, e: i64, prec: Precision) -> Complex {
    let bits = prec.bits();
    if e == 0 {
        return Complex::with_val(bits, (1, 0));
    }
    let mut base = z.clone();
    let mut n = e.unsigned_abs();
    let mut acc: Option<Complex> = None;
    loop {
        if n & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => a * &base,
            });
        }
        n >>= 1;
        if n == 0 {
            break;
        }
        let sq = base.clone();
        base *= &sq;
    }
    let mut out = acc.expect("nonzero exponent");
    if e < 0 {
        out = Complex::with_val(bits, (1, 0)) / out;
    }
    out
}

/// q = exp(2πi τ).
pub(crate) fn q_of_tau(tau: &Complex, prec: Precision) -> Complex {
    let two_pi_i = Complex::with_val(prec.bits(), (0, 2)) * pi(prec);
    (two_pi_i * tau).exp()
}

/// Euler-Maclaurin tail Σ_{n > n0} (y + n)^{-s} for integer s >= 2 and a
/// complex shift y with the ray y + t, t >= n0 staying away from zero.
/// Twelve Bernoulli correction terms: far more accuracy than the window
/// truncations around it ever deliver.
pub(crate) fn em_tail(s: u32, y: &Complex, n0: i64, prec: Precision) -> Complex {
    use crate::exact::bernoulli;
    let bits = prec.bits();
    let a = Complex::with_val(bits, (n0 + 1, 0)) + y;
    let inv = Complex::with_val(bits, (1, 0)) / a.clone();
    // (y+a)^{1-s}/(s-1) + (y+a)^{-s}/2 + Σ_j B_{2j}/(2j)! (s)_{2j-1} (y+a)^{-s-2j+1}
    let mut out = cpow(&inv, (s - 1) as i64, prec)
        / Complex::with_val(bits, (s - 1, 0));
    out += cpow(&inv, s as i64, prec) / Complex::with_val(bits, (2, 0));
    let mut rising = rug::Rational::from(1); // (s)_{2j-1} accumulates
    let mut m = s as u64;
    for j in 1..=12u32 {
        // extend the rising factorial to length 2j-1
        while m < s as u64 + 2 * j as u64 - 1 {
            rising *= rug::Rational::from(m);
            m += 1;
        }
        let mut coeff = bernoulli(2 * j);
        coeff *= &rising;
        coeff /= rug::Rational::from(crate::exact::factorial(2 * j));
        out += cpow(&inv, (s + 2 * j - 1) as i64, prec) * Complex::with_val(bits, &coeff);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn em_tail_matches_brute_force() {
        let prec = Precision::digits(40);
        let bits = prec.bits();
        // Real shift: Σ_{n>50} 1/(0.5+n)^3 brute-forced far out.
        let y = Complex::with_val(bits, (0.5, 0.0));
        let tail = em_tail(3, &y, 50, prec);
        let mut brute = Complex::new(bits);
        for n in 51..400000i64 {
            brute += cpow(&(y.clone() + Complex::with_val(bits, (n, 0))), -3, prec);
        }
        let diff = Float::with_val(bits, (tail - brute).abs_ref());
        assert!(diff < 1e-10, "EM tail off by {diff}");

        // Complex shift.
        let y = Complex::with_val(bits, (0.25, 1.0));
        let tail = em_tail(2, &y, 80, prec);
        let mut brute = Complex::new(bits);
        for n in 81..2000000i64 {
            brute += cpow(&(y.clone() + Complex::with_val(bits, (n, 0))), -2, prec);
        }
        let diff = Float::with_val(bits, (tail - brute).abs_ref());
        assert!(diff < 2e-6, "complex EM tail off by {diff}");
    }

    #[test]
    fn q_of_tau_at_i() {
        let prec = Precision::default();
        let tau = Complex::with_val(prec.bits(), (0, 1));
        let q = q_of_tau(&tau, prec);
        let expect = (pi(prec) * -2i32).exp();
        let diff = Float::with_val(prec.bits(), q.real() - &expect);
        assert!(diff.abs() < 1e-60);
        assert!(Float::with_val(prec.bits(), q.imag()).abs() < 1e-60);
    }
}
