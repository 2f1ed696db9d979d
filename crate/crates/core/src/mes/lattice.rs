//! Multiple Eisenstein series as truncated ordered lattice sums, and their
//! stuffle-regularized variant at finite level.
//!
//! The ordered chains over the lattice ℤτ + ℤ split along which links lie
//! in the real row R and which climb in imaginary direction U: trailing
//! R-links factor out partial zeta sums, and every maximal block ending in
//! a U-link becomes a multitangent row Σ_m Ψ_{block}(mτ). The row sums are
//! truncated at the cutoff with the difference of consecutive cutoffs as
//! the empirical tail estimate.

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::brackets::Index;
use crate::{Error, Result};

use super::tangent::multitangent;
use super::{em_tail, Precision};

/// Partial nested zeta sum by direct summation over a window with
/// Euler-Maclaurin top corrections; the lattice-route evaluator for the
/// trailing real-row blocks (independent of the midpoint-split evaluator).
pub fn zeta_direct(s: &Index, tol: f64, prec: Precision) -> Result<Float> {
    if !s.is_admissible() {
        return Err(Error::NotAdmissible(s.to_string()));
    }
    let bits = prec.bits();
    if s.is_empty() {
        return Ok(Float::with_val(bits, 1));
    }
    let parts = s.parts();
    let l = parts.len();
    let tol = tol.max(1e-40);
    // Length one is exact up to the Euler-Maclaurin residual; deeper nests
    // neglect products of two tails decaying with the smallest pair sum.
    let n0 = if l == 1 {
        ((1e8 / tol).powf(1.0 / (parts[0] as f64 + 25.0)).ceil() as i64).max(64)
    } else {
        let p = parts.windows(2).map(|w| w[0] + w[1]).min().unwrap() - 2;
        ((50.0 / tol).powf(1.0 / p.max(1) as f64).ceil() as i64).clamp(64, 3_000_000)
    };
    // c[j]: chains over slots j.. with indices in (0, m).
    let mut c = vec![Float::new(bits); l + 1];
    c[l] = Float::with_val(bits, 1);
    for m in 1..=n0 {
        for j in 0..l {
            let add = Float::with_val(bits, m).pow(-(parts[j] as i32)) * &c[j + 1];
            c[j] += add;
        }
    }
    let zero = Complex::new(bits);
    let mut v = Float::with_val(bits, 1);
    for j in (0..l).rev() {
        let tail = em_tail(parts[j], &zero, n0, prec);
        v = c[j].clone() + Float::with_val(bits, tail.real()) * v;
    }
    Ok(v)
}

/// A numeric lattice value together with the empirical cutoff-doubling
/// tail estimate.
#[derive(Debug, Clone)]
pub struct LatticeValue {
    pub value: Complex,
    pub tail_estimate: Float,
}

/// All ways to cut a slice into non-empty consecutive blocks.
fn block_splits(parts: &[u32]) -> Vec<Vec<Index>> {
    if parts.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=parts.len() {
        let head = Index::new(parts[..first].to_vec()).unwrap();
        for mut rest in block_splits(&parts[first..]) {
            let mut v = vec![head.clone()];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Σ over cutoff > m_1 > ... > m_k > 0 of Ψ_{b_1}(m_1 τ) ... Ψ_{b_k}(m_k τ)
/// for one block decomposition, accumulated per outer row m_1 so the caller
/// can difference consecutive cutoffs.
fn block_chain_sum(
    blocks: &[Index],
    tau: &Complex,
    cutoff: i64,
    row_tol: f64,
    prec: Precision,
) -> Result<Vec<Complex>> {
    let bits = prec.bits();
    // rows[m] = Ψ_{b}(m τ) per block, computed lazily over m = 1..cutoff-1.
    let k = blocks.len();
    // chain[j] = Σ_{m > m_j > ... > m_k > 0} Π Ψ; scan m upward.
    let mut chain = vec![Complex::new(bits); k + 1];
    chain[k] = Complex::with_val(bits, (1, 0));
    let mut per_row = Vec::with_capacity(cutoff.max(1) as usize);
    for m in 1..cutoff {
        let x = Complex::from(tau.clone() * Complex::with_val(bits, (m, 0)));
        let mut psis = Vec::with_capacity(k);
        for b in blocks {
            psis.push(multitangent(b, &x, row_tol, prec)?);
        }
        let before = chain[0].clone();
        for j in 0..k {
            let add = Complex::from(psis[j].clone() * &chain[j + 1]);
            chain[j] += add;
        }
        per_row.push(Complex::from(&chain[0] - before));
    }
    Ok(per_row)
}

/// The multiple Eisenstein series G_{s_1,...,s_l}(τ) as a truncated ordered
/// lattice sum. Requires s_1 >= 3 and all s_i >= 2 (absolute convergence;
/// the s_1 = 2 Eisenstein-summation cases live on the Fourier path only).
/// `cutoff` bounds the imaginary rows m; the returned tail estimate is the
/// contribution of the last row (the difference of consecutive cutoffs).
pub fn mes_lattice(
    s: &Index,
    tau: &Complex,
    cutoff: i64,
    tol: f64,
    prec: Precision,
) -> Result<LatticeValue> {
    if s.is_empty() {
        return Err(Error::invalid("lattice sum needs a non-empty index"));
    }
    if s.parts()[0] < 3 {
        return Err(Error::invalid(format!(
            "direct lattice summation needs s_1 >= 3, got [{s}]"
        )));
    }
    if s.parts().iter().any(|&e| e < 2) {
        return Err(Error::invalid(format!(
            "direct lattice summation needs all entries >= 2, got [{s}]"
        )));
    }
    if tau.imag().cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::invalid("lattice sum needs Im(τ) > 0"));
    }
    let bits = prec.bits();
    let l = s.len();
    let row_tol = tol / (8.0 * (cutoff as f64 + l as f64));
    let mut value = Complex::new(bits);
    let mut last_row = Float::new(bits);
    // Split at the last U-link: prefix realized by U-anchored rows, suffix a
    // pure zeta block.
    for cut in 0..=l {
        let prefix = &s.parts()[..cut];
        let suffix = Index::new(s.parts()[cut..].to_vec()).unwrap();
        let zeta_factor = Float::with_val(bits, zeta_direct(&suffix, tol / 8.0, prec)?);
        if prefix.is_empty() {
            value += Complex::with_val(bits, (&zeta_factor, &Float::new(bits)));
            continue;
        }
        for blocks in block_splits(prefix) {
            let rows = block_chain_sum(&blocks, tau, cutoff, row_tol, prec)?;
            let mut sum = Complex::new(bits);
            for r in &rows {
                sum += r;
            }
            if let Some(r) = rows.last() {
                last_row += Float::with_val(bits, r.abs_ref()) * zeta_factor.clone().abs();
            }
            value += Complex::from(sum * Complex::with_val(bits, (&zeta_factor, &Float::new(bits))));
        }
    }
    Ok(LatticeValue {
        value,
        tail_estimate: last_row,
    })
}

/// The stuffle-regularized multiple Eisenstein series at level M:
/// G^{∗,M} = Σ_{uv = w} g^{∗,M}(u) · ζ(v), where g^{∗,M}(u) sums the
/// multitangent chains of every block decomposition of u with rows below M,
/// and the suffix evaluates through the stuffle-regularized zeta (plain ζ
/// here: every entry is >= 2). As M → ∞ this approaches the lattice sum.
pub fn g_star_m(
    s: &Index,
    level: i64,
    tau: &Complex,
    tol: f64,
    prec: Precision,
) -> Result<Complex> {
    if s.is_empty() {
        return Err(Error::invalid("needs a non-empty index"));
    }
    if s.parts().iter().any(|&e| e < 2) {
        return Err(Error::invalid(format!(
            "stuffle regularization is restricted to entries >= 2, got [{s}]"
        )));
    }
    if level < 1 {
        return Err(Error::invalid("level M must be >= 1"));
    }
    let bits = prec.bits();
    let l = s.len();
    let row_tol = tol / (8.0 * (level as f64 + l as f64));
    let mut value = Complex::new(bits);
    for cut in 0..=l {
        let prefix = &s.parts()[..cut];
        let suffix = Index::new(s.parts()[cut..].to_vec()).unwrap();
        // Z^∗ of an all->=2 suffix is the plain zeta value.
        let zeta_factor = super::mzv::mzv_numeric(&suffix, prec)?;
        if prefix.is_empty() {
            value += Complex::with_val(bits, (&zeta_factor, &Float::new(bits)));
            continue;
        }
        let mut g = Complex::new(bits);
        for blocks in block_splits(prefix) {
            for r in block_chain_sum(&blocks, tau, level, row_tol, prec)? {
                g += r;
            }
        }
        value += Complex::from(g * Complex::with_val(bits, (&zeta_factor, &Float::new(bits))));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mes::mzv::mzv_numeric;

    fn idx(parts: &[u32]) -> Index {
        Index::new(parts.to_vec()).unwrap()
    }

    fn cdist(a: &Complex, b: &Complex) -> Float {
        let mut d = a.clone();
        d -= b;
        Float::with_val(a.real().prec(), d.abs_ref())
    }

    #[test]
    fn zeta_direct_agrees_with_midpoint_split() {
        let prec = Precision::default();
        for (parts, tol) in [
            (vec![2u32], 1e-12),
            (vec![3], 1e-12),
            (vec![4, 3], 1e-12),
            (vec![3, 2], 1e-12),
            (vec![2, 2, 2], 1e-9),
        ] {
            let s = idx(&parts);
            let a = zeta_direct(&s, tol, prec).unwrap();
            let b = mzv_numeric(&s, prec).unwrap();
            let d = Float::with_val(prec.bits(), &a - &b).abs();
            assert!(d.to_f64() < tol, "zeta_direct differs on {s}: {d}");
        }
        assert!(zeta_direct(&idx(&[1, 2]), 1e-8, prec).is_err());
    }

    #[test]
    fn lattice_g4_matches_fourier_series() {
        // G_4(i) = ζ(4) + (-2πi)^4/3! Σ σ_3(n) q^n at q = e^{-2π}.
        let prec = Precision::default();
        let tau = Complex::with_val(prec.bits(), (0, 1));
        let got = mes_lattice(&idx(&[4]), &tau, 40, 1e-10, prec).unwrap();
        let bracket = crate::brackets::bracket_series(&idx(&[4]), 60);
        let q = super::super::q_of_tau(&tau, prec);
        let series = bracket.eval(&q, prec.bits()).unwrap().value;
        let want = Complex::from(
            super::super::cpow(&super::super::minus_two_pi_i(prec), 4, prec) * series,
        ) + Complex::with_val(
            prec.bits(),
            (&mzv_numeric(&idx(&[4]), prec).unwrap(), &Float::new(prec.bits())),
        );
        assert!(
            cdist(&got.value, &want) < 1e-8,
            "G_4(i): {} vs {want}",
            got.value
        );
    }

    #[test]
    fn lattice_stuffle_product_relation() {
        // G_3(i)·G_4(i) = G_{4,3}(i) + G_{3,4}(i) + G_7(i)
        let prec = Precision::default();
        let tau = Complex::with_val(prec.bits(), (0, 1));
        let g3 = mes_lattice(&idx(&[3]), &tau, 40, 1e-9, prec).unwrap().value;
        let g4 = mes_lattice(&idx(&[4]), &tau, 40, 1e-9, prec).unwrap().value;
        let g43 = mes_lattice(&idx(&[4, 3]), &tau, 40, 1e-9, prec).unwrap().value;
        let g34 = mes_lattice(&idx(&[3, 4]), &tau, 40, 1e-9, prec).unwrap().value;
        let g7 = mes_lattice(&idx(&[7]), &tau, 40, 1e-9, prec).unwrap().value;
        let lhs = Complex::from(g3 * g4);
        let rhs = Complex::from(Complex::from(g43 + g34) + g7);
        assert!(cdist(&lhs, &rhs) < 1e-7, "stuffle relation: {lhs} vs {rhs}");
    }

    #[test]
    fn lattice_periodicity_and_rejections() {
        let prec = Precision::default();
        let tau = Complex::with_val(prec.bits(), (0, 1));
        let tau1 = Complex::with_val(prec.bits(), (1, 1));
        let a = mes_lattice(&idx(&[4, 3]), &tau, 30, 1e-8, prec).unwrap();
        let b = mes_lattice(&idx(&[4, 3]), &tau1, 30, 1e-8, prec).unwrap();
        assert!(cdist(&a.value, &b.value) < 1e-7);
        assert!(mes_lattice(&idx(&[2, 2]), &tau, 30, 1e-8, prec).is_err());
        assert!(mes_lattice(&idx(&[3, 1]), &tau, 30, 1e-8, prec).is_err());
    }

    #[test]
    fn g_star_levels_approach_lattice() {
        let prec = Precision::default();
        let tau = Complex::with_val(prec.bits(), (0, 1));
        let reference = mes_lattice(&idx(&[4, 3]), &tau, 60, 1e-9, prec)
            .unwrap()
            .value;
        // At τ = i the level tail dies like e^{-2πM}, so the distances hit
        // the evaluation noise floor almost immediately; monotone approach
        // is asserted only down to that floor.
        let mut first = Float::new(prec.bits());
        let mut last = Float::new(prec.bits());
        for (i, level) in [20i64, 40, 80].into_iter().enumerate() {
            let v = g_star_m(&idx(&[4, 3]), level, &tau, 1e-9, prec).unwrap();
            let d = cdist(&v, &reference);
            assert!(d < 1e-5, "level {level} is {d} away");
            if i == 0 {
                first = d.clone();
            }
            last = d;
        }
        assert!(
            last.to_f64() <= 2.0 * first.to_f64() + 1e-11,
            "distances grew: {first} -> {last}"
        );
    }

    #[test]
    fn g_star_level_one_collapse() {
        // G^{∗,M}_k = ζ(k) + Σ_{M>m>0} Ψ_k(mτ); at M = 1 the row sum is empty.
        let prec = Precision::default();
        let tau = Complex::with_val(prec.bits(), (0, 1));
        let v = g_star_m(&idx(&[4]), 1, &tau, 1e-10, prec).unwrap();
        let z = mzv_numeric(&idx(&[4]), prec).unwrap();
        let d = Float::with_val(prec.bits(), v.real() - &z);
        assert!(d.abs() < 1e-30 && Float::with_val(prec.bits(), v.imag()).abs() < 1e-30);
        assert!(g_star_m(&idx(&[2, 1]), 10, &tau, 1e-6, prec).is_err());
    }

    #[test]
    fn construction_is_stuffle_homomorphism() {
        // F_{s1}(M)·F_{s2}(M) = F_{s1,s2}(M) + F_{s2,s1}(M) + F_{s1+s2}(M),
        // with F the block-decomposed multitangent chains below level M.
        let prec = Precision::default();
        let tau = Complex::with_val(prec.bits(), (0, 1));
        let level = 12i64;
        let tol = 1e-9;
        let f = |parts: &[u32]| -> Complex {
            let mut acc = Complex::new(prec.bits());
            for blocks in block_splits(parts) {
                for r in block_chain_sum(&blocks, &tau, level, tol, prec).unwrap() {
                    acc += r;
                }
            }
            acc
        };
        let f3 = f(&[3]);
        let f2 = f(&[2]);
        let lhs = Complex::from(f3.clone() * &f2);
        let rhs = Complex::from(
            Complex::from(f(&[3, 2]) + f(&[2, 3])) + f(&[5]),
        );
        assert!(cdist(&lhs, &rhs) < 1e-7, "construction homomorphism: {lhs} vs {rhs}");
    }
}
