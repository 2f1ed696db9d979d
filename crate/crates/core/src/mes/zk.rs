//! The q → 1 limit map Z_k(f) = lim (1-q)^k f(q), evaluated from a
//! truncated series by Richardson extrapolation along q_j = 1 - 2^{-j}.

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::qseries::QSeries;
use crate::{Error, Result};

use super::Precision;

/// Outcome of a limit extrapolation.
#[derive(Debug, Clone)]
pub struct ZkResult {
    pub value: Float,
    /// Difference of the two deepest Richardson diagonals.
    pub error_estimate: Float,
    /// Set when the grid values grow without the decay a finite limit needs.
    pub diverged: bool,
    /// Grid points j = 3..=j_max actually used.
    pub points: usize,
}

/// Estimate of the dropped series tail at q, assuming the coefficients keep
/// growing no faster than a_N (n/N)^{k-1}: (1-q)^k |a_N| Σ_{m>0} (1+m/N)^{k-1} q^{N+m}.
fn tail_estimate(f: &QSeries, k: u32, q: &Float, prec: Precision) -> Float {
    let bits = prec.bits();
    let n = f.order();
    let a_last = Float::with_val(bits, f.coeff(n).abs());
    let one_minus = Float::with_val(bits, 1) - q.clone();
    let scale = one_minus.pow(k) * a_last;
    let mut sum = Float::new(bits);
    let mut qpow = q.clone().pow((n + 1) as u32);
    for m in 1..20000usize {
        let growth = Float::with_val(bits, 1f64 + m as f64 / n as f64).pow(k as i32 - 1);
        let term = growth * qpow.clone();
        sum += &term;
        qpow *= q;
        if term < 1e-35 && m > 32 {
            break;
        }
    }
    scale * sum
}

/// Evaluate lim_{q→1} (1-q)^k f(q) from the truncated series `f` by the
/// grid q_j = 1 - 2^{-j}, j >= 3, with Richardson acceleration. The grid
/// depth is bounded both by the rule order >= 2^{J+3} and by the requirement
/// that the estimated truncation tail at the deepest point stays below
/// tol/10. Divergence (the limit being +∞) is flagged when the grid
/// differences stop contracting.
pub fn zk_limit(f: &QSeries, k: u32, tol: f64, prec: Precision) -> Result<ZkResult> {
    let bits = prec.bits();
    let order = f.order();
    let j_order = (order as f64).log2().floor() as i64 - 3;
    let mut j_max = 3;
    for j in 3..=j_order.max(0) {
        let q = Float::with_val(bits, 1) - Float::with_val(bits, 2).pow(-(j as i32));
        if tail_estimate(f, k, &q, prec).to_f64() <= tol / 10.0 {
            j_max = j;
        } else {
            break;
        }
    }
    if j_max < 4 {
        return Err(Error::InsufficientOrder {
            have: order,
            need: 1 << 7,
        });
    }
    let mut values = Vec::new();
    for j in 3..=j_max {
        let q = Float::with_val(bits, 1) - Float::with_val(bits, 2).pow(-(j as i32));
        let qc = Complex::with_val(bits, (&q, &Float::new(bits)));
        let v = f.eval(&qc, bits)?.value;
        let scale = (Float::with_val(bits, 1) - &q).pow(k);
        values.push(Float::with_val(bits, v.real() * scale));
    }
    // Divergence check on the deep end of the grid: a convergent expansion
    // in (1-q), even with log factors, contracts its consecutive differences
    // towards the ratio 1/2, while Z_k = ∞ cases (growing like powers of
    // log(1-q)) keep them level or growing.
    let diffs: Vec<Float> = values
        .windows(2)
        .map(|w| Float::with_val(bits, &w[1] - &w[0]).abs())
        .collect();
    let m = diffs.len();
    let diverged = m >= 2
        && diffs[m - 1].to_f64() > 0.8 * diffs[m - 2].to_f64()
        && diffs[m - 1].to_f64() > 10.0 * tol;
    // Extrapolation ansatz v_j = L + Σ c_{a,b} j^b 2^{-aj}. A pure power
    // basis (b = 0 only) is exactly Richardson; multiple divisor sums also
    // put genuine log(1-q) powers into the subleading terms (their
    // coefficients grow like n log^b n), which become the j^b factors on
    // the dyadic grid. Both models are fitted and the one that stays
    // self-consistent when the shallowest point is dropped wins.
    let powers: Vec<(u32, u32)> = (1..=8u32).map(|a| (a, 0)).collect();
    let logs: Vec<(u32, u32)> = (1..=4u32)
        .flat_map(|a| (0..=2u32).rev().map(move |b| (a, b)))
        .collect();
    let mut best = Float::new(bits);
    let mut error_estimate = Float::new(bits);
    for (i, basis) in [powers, logs].into_iter().enumerate() {
        let full = fit_grid(&values, &basis, 3, bits);
        let shallow = fit_grid(&values[1..], &basis, 4, bits);
        let est = Float::with_val(bits, &full - &shallow).abs();
        if i == 0 || est < error_estimate {
            best = full;
            error_estimate = est;
        }
    }
    Ok(ZkResult {
        value: best,
        error_estimate,
        diverged,
        points: values.len(),
    })
}

/// Solve for L in v_j = L + Σ c φ(j) on the grid j = j0.., using as many of
/// the given basis functions as the points allow.
fn fit_grid(values: &[Float], basis: &[(u32, u32)], j0: u32, bits: u32) -> Float {
    let n = values.len();
    let basis: Vec<(u32, u32)> = basis.iter().copied().take(n - 1).collect();
    // rows: [1, φ_1(j), ..., φ_{n-1}(j) | v_j]
    let mut m: Vec<Vec<Float>> = Vec::with_capacity(n);
    for (i, v) in values.iter().enumerate() {
        let j = i as u32 + j0;
        let mut row = Vec::with_capacity(n + 1);
        row.push(Float::with_val(bits, 1));
        for &(a, b) in &basis {
            let phi = Float::with_val(bits, j).pow(b) * Float::with_val(bits, 2).pow(-((a * j) as i32));
            row.push(phi);
        }
        row.push(v.clone());
        m.push(row);
    }
    // Gaussian elimination with partial pivoting; the first unknown is L.
    let cols = n + 1;
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&x, &y| {
                m[x][c]
                    .clone()
                    .abs()
                    .partial_cmp(&m[y][c].clone().abs())
                    .unwrap()
            })
            .unwrap();
        m.swap(c, piv);
        for r in 0..n {
            if r == c {
                continue;
            }
            let factor = Float::with_val(bits, &m[r][c] / &m[c][c]);
            for col in c..cols {
                let sub = Float::with_val(bits, &m[c][col] * &factor);
                m[r][col] -= sub;
            }
        }
    }
    Float::with_val(bits, &m[0][n] / &m[0][0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::{bibracket_series, bracket_series, BiIndex, Index};
    use crate::mes::mzv::mzv_numeric;

    fn idx(parts: &[u32]) -> Index {
        Index::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn geometric_series_limit() {
        // (1-q) Σ q^n → 1.
        let prec = Precision::default();
        let f = QSeries::from_coeffs(vec![rug::Rational::from(1); 3000]);
        let r = zk_limit(&f, 1, 1e-6, prec).unwrap();
        assert!(!r.diverged);
        assert!((r.value.to_f64() - 1.0).abs() < 1e-6, "got {}", r.value);
    }

    #[test]
    fn bracket_2_limit_is_zeta_2() {
        let prec = Precision::default();
        let f = bracket_series(&idx(&[2]), 2000);
        let r = zk_limit(&f, 2, 1e-5, prec).unwrap();
        let want = mzv_numeric(&idx(&[2]), prec).unwrap().to_f64();
        assert!(!r.diverged);
        assert!((r.value.to_f64() - want).abs() < 1e-5, "Z_2[2] = {}", r.value);
    }

    #[test]
    fn lower_weight_dies() {
        // Z_3 of the weight-2 bracket vanishes.
        let prec = Precision::default();
        let f = bracket_series(&idx(&[2]), 2000);
        let r = zk_limit(&f, 3, 1e-4, prec).unwrap();
        assert!(!r.diverged);
        assert!(r.value.to_f64().abs() < 1e-4, "Z_3[2] = {}", r.value);
    }

    #[test]
    fn divergence_is_flagged() {
        // (1-q)^3 mb(1,1;1,0) → ∞.
        let prec = Precision::default();
        let f = bibracket_series(&BiIndex::new(vec![(1, 1), (1, 0)]).unwrap(), 2000);
        let r = zk_limit(&f, 3, 1e-6, prec).unwrap();
        assert!(r.diverged, "expected divergence flag, got {:?}", r);
    }

    #[test]
    fn insufficient_order_is_rejected() {
        let prec = Precision::default();
        let f = bracket_series(&idx(&[2]), 40);
        assert!(zk_limit(&f, 2, 1e-8, prec).is_err());
    }
}
