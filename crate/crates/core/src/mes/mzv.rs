//! Numeric multiple zeta values.
//!
//! Convergent values are computed by splitting the defining iterated
//! integral at the midpoint of [0, 1]: every piece becomes a multiple
//! polylogarithm at z = 1/2, whose nested sums converge geometrically.
//! Regularized values compose the word regularizations (at T = 0) with
//! this evaluator.

use std::collections::HashMap;
use std::sync::Mutex;

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::brackets::Index;
use crate::iterint::{shuffle_regularize, stuffle_regularize};
use crate::words::LinComb;
use crate::{Error, Result};

use super::Precision;

/// Multiple polylogarithm Li_{t_1,...,t_r}(1/2) = Σ_{n_1>...>n_r>0}
/// 2^{-n_1} / (n_1^{t_1} ... n_r^{t_r}); empty index gives 1.
fn polylog_half(t: &[u32], prec: Precision) -> Float {
    let bits = prec.bits();
    if t.is_empty() {
        return Float::with_val(bits, 1);
    }
    let r = t.len();
    let n_max = (bits as usize) + 48;
    // partial[j] = Σ_{n_j < current n} n_j^{-t_j} * partial over deeper slots
    let mut partial = vec![Float::new(bits); r + 1];
    partial[r] = Float::with_val(bits, 1);
    let mut acc = Float::new(bits);
    let half = Float::with_val(bits, 0.5);
    let mut half_pow = Float::with_val(bits, 1);
    for n in 1..=n_max {
        half_pow *= &half; // 2^{-n}
        let inv_powers: Vec<Float> = t
            .iter()
            .map(|&e| Float::with_val(bits, n).pow(-(e as i32)))
            .collect();
        // acc += 2^{-n} n^{-t_1} partial[2..]
        let mut term = half_pow.clone();
        term *= &inv_powers[0];
        term *= &partial[1];
        acc += term;
        // update the prefix sums outermost first, so each slot combines n
        // with the strictly-smaller-n value of the deeper slot
        for j in 1..r {
            let mut t_ = inv_powers[j].clone();
            t_ *= &partial[j + 1];
            partial[j] += t_;
        }
        // partial[r] stays 1 (empty deeper chain)
    }
    acc
}

/// Reverse the {0,1} letter string and swap letters; the dual word of the
/// path substitution t -> 1 - t.
fn dual(bits: &[bool]) -> Vec<bool> {
    bits.iter().rev().map(|&b| !b).collect()
}

/// Parse an {x,y} string ending in y into index parts.
fn parse_word(bits: &[bool]) -> Vec<u32> {
    let mut parts = Vec::new();
    let mut run = 0u32;
    for &b in bits {
        if b {
            parts.push(run + 1);
            run = 0;
        } else {
            run += 1;
        }
    }
    debug_assert_eq!(run, 0);
    parts
}

fn word_bits(s: &Index) -> Vec<bool> {
    let mut out = Vec::new();
    for &p in s.parts() {
        for _ in 0..p - 1 {
            out.push(false); // x, the form dt/t
        }
        out.push(true); // y, the form dt/(1-t)
    }
    out
}

static MZV_CACHE: Mutex<Option<HashMap<(Index, u32), Float>>> = Mutex::new(None);

/// ζ(s_1,...,s_l) for an admissible index, accurate to roughly the working
/// precision (far below any tolerance used by the callers). The empty index
/// gives 1.
pub fn mzv_numeric(s: &Index, prec: Precision) -> Result<Float> {
    if !s.is_admissible() {
        return Err(Error::NotAdmissible(s.to_string()));
    }
    let bits = prec.bits();
    if s.is_empty() {
        return Ok(Float::with_val(bits, 1));
    }
    {
        let mut guard = MZV_CACHE.lock().unwrap();
        if let Some(hit) = guard
            .get_or_insert_with(HashMap::new)
            .get(&(s.clone(), bits))
        {
            return Ok(hit.clone());
        }
    }
    let bits_word = word_bits(s);
    let k = bits_word.len();
    // Split the iterated integral at 1/2: both pieces are polylogarithms
    // at 1/2 (the upper piece after path reversal).
    let mut acc = Float::new(bits);
    for j in 0..=k {
        let upper = dual(&bits_word[..j]);
        let lower = &bits_word[j..];
        let a = polylog_half(&parse_word(&upper), prec);
        let b = polylog_half(&parse_word(lower), prec);
        acc += a * b;
    }
    let mut guard = MZV_CACHE.lock().unwrap();
    guard
        .get_or_insert_with(HashMap::new)
        .insert((s.clone(), bits), acc.clone());
    Ok(acc)
}

/// Numeric value of a rational combination of admissible indices.
pub fn mzv_lincomb(lc: &LinComb<Index>, prec: Precision) -> Result<Float> {
    let bits = prec.bits();
    let mut acc = Float::new(bits);
    for (w, c) in lc.iter() {
        let v = mzv_numeric(w, prec)?;
        acc += v * Float::with_val(bits, c);
    }
    Ok(acc)
}

/// The shuffle-regularized evaluation Z^⧢ at T = 0, defined on every index.
pub fn z_shuffle_value(s: &Index, prec: Precision) -> Result<Float> {
    mzv_lincomb(&shuffle_regularize(s).at_zero(), prec)
}

/// The stuffle-regularized evaluation Z^∗ at T = 0, defined on every index.
pub fn z_stuffle_value(s: &Index, prec: Precision) -> Result<Float> {
    mzv_lincomb(&stuffle_regularize(s).at_zero(), prec)
}

/// Convenience: ζ(k) for a single exponent.
pub fn zeta_single(k: u32, prec: Precision) -> Float {
    mzv_numeric(&Index::new(vec![k]).unwrap(), prec).expect("k >= 2")
}

pub(crate) fn rational_float(c: &Rational, prec: Precision) -> Float {
    Float::with_val(prec.bits(), c)
}
