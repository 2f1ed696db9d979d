//! Exact linear algebra over ℚ and its consumers: relation discovery among
//! truncated q-series, the dimension generating series, conversions of
//! other q-analogue models into bi-brackets, and the q → 1 kernel report.

use rug::{Integer, Rational};

use crate::brackets::{bibracket_series, bracket_series, BiIndex, Index};
use crate::exact::{bernoulli, binom, eulerian_poly, factorial, Polynomial};
use crate::mes::{mzv_lincomb, zk_limit, Precision};
use crate::qseries::QSeries;
use crate::words::LinComb;
use crate::{Error, Result};

// --- exact nullspace -------------------------------------------------------

/// Reduced basis of the right kernel of a rational matrix, found by
/// fraction-free (Bareiss) elimination on the denominator-cleared integer
/// matrix followed by rational back-substitution. Basis vectors are
/// normalized to integer entries with content 1 and positive leading
/// coefficient, ordered by their free column.
pub fn rational_kernel(mat: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    if cols == 0 {
        return Vec::new();
    }
    // Clear denominators row by row.
    let mut m: Vec<Vec<Integer>> = mat
        .iter()
        .map(|row| {
            let mut lcm = Integer::from(1);
            for x in row {
                lcm = lcm.lcm(x.denom());
            }
            row.iter()
                .map(|x| Integer::from(x.numer() * &lcm) / x.denom())
                .collect()
        })
        .collect();
    // Bareiss forward elimination.
    let mut prev = Integer::from(1);
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c].cmp0() != std::cmp::Ordering::Equal) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let t = Integer::from(&m[r][c] * &m[i][j]) - Integer::from(&m[i][c] * &m[r][j]);
                m[i][j] = t.div_exact(&prev);
            }
            m[i][c] = Integer::new();
        }
        prev = m[r][c].clone();
        pivots.push((r, c));
        r += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    // Back-substitute one kernel vector per free column.
    let mut basis = Vec::with_capacity(free_cols.len());
    for &f in &free_cols {
        let mut v = vec![Rational::new(); cols];
        v[f] = Rational::from(1);
        for &(pr, pc) in pivots.iter().rev() {
            let mut acc = Rational::new();
            for j in pc + 1..cols {
                if v[j].cmp0() != std::cmp::Ordering::Equal {
                    acc += Rational::from(&m[pr][j]) * &v[j];
                }
            }
            v[pc] = -acc / Rational::from(&m[pr][pc]);
        }
        basis.push(normalize_vector(v));
    }
    basis
}

/// Scale to integer entries with content 1 and positive first nonzero entry.
fn normalize_vector(v: Vec<Rational>) -> Vec<Rational> {
    let mut lcm = Integer::from(1);
    for x in &v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<Integer> = v
        .iter()
        .map(|x| Integer::from(x.numer() * &lcm) / x.denom())
        .collect();
    let mut gcd = Integer::new();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.cmp0() == std::cmp::Ordering::Equal {
        return v;
    }
    let mut out: Vec<Rational> = ints
        .into_iter()
        .map(|x| Rational::from(x.div_exact(&gcd)))
        .collect();
    if let Some(first) = out.iter().find(|x| x.cmp0() != std::cmp::Ordering::Equal) {
        if first.cmp0() == std::cmp::Ordering::Less {
            for x in &mut out {
                *x = -x.clone();
            }
        }
    }
    out
}

/// Rank via the same elimination (used by the self-oracle tests).
pub fn rational_rank(mat: &[Vec<Rational>]) -> usize {
    let cols = if mat.is_empty() { 0 } else { mat[0].len() };
    cols - rational_kernel(mat).len()
}

// --- relation discovery ----------------------------------------------------

/// A labelled family of q-series on a common truncation order.
#[derive(Debug, Clone)]
pub struct SeriesFamily {
    labels: Vec<String>,
    series: Vec<QSeries>,
    max_weight: Option<u32>,
}

impl SeriesFamily {
    pub fn new(labels: Vec<String>, series: Vec<QSeries>) -> Result<Self> {
        if labels.len() != series.len() || series.is_empty() {
            return Err(Error::invalid("family needs one label per series"));
        }
        let order = series[0].order();
        if series.iter().any(|s| s.order() != order) {
            return Err(Error::invalid("family needs a common truncation order"));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(Error::invalid("family labels must be unique"));
        }
        Ok(SeriesFamily {
            labels,
            series,
            max_weight: None,
        })
    }

    /// Declare the largest total weight in the family, enabling the
    /// truncation-safety margin check.
    pub fn with_max_weight(mut self, w: u32) -> Self {
        self.max_weight = Some(w);
        self
    }

    pub fn order(&self) -> usize {
        self.series[0].order()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn series(&self) -> &[QSeries] {
        &self.series
    }
}

/// The kernel of the coefficient matrix of a family: every vector v with
/// Σ v_i · series_i = 0 exactly up to the common order.
#[derive(Debug, Clone)]
pub struct RelationSet {
    pub basis: Vec<Vec<Rational>>,
    pub verified_to_order: usize,
    /// The truncation order satisfies N >= 2·max_weight + 20; absent when
    /// the family declared no weight.
    pub margin_ok: Option<bool>,
}

impl RelationSet {
    pub fn to_json(&self, labels: &[String]) -> serde_json::Value {
        serde_json::Value::Array(
            self.basis
                .iter()
                .map(|v| {
                    serde_json::json!({
                        "coeffs": labels
                            .iter()
                            .zip(v)
                            .filter(|(_, c)| c.cmp0() != std::cmp::Ordering::Equal)
                            .map(|(l, c)| serde_json::json!({"label": l, "coeff": c.to_string()}))
                            .collect::<Vec<_>>(),
                        "verified_to_order": self.verified_to_order,
                    })
                })
                .collect(),
        )
    }
}

/// Find every ℚ-linear relation among the family members, exact to the
/// common truncation order. Each reported relation is re-verified by direct
/// series arithmetic.
pub fn find_relations(fam: &SeriesFamily) -> RelationSet {
    let order = fam.order();
    let rows: Vec<Vec<Rational>> = (0..=order)
        .map(|n| fam.series.iter().map(|s| s.coeff(n)).collect())
        .collect();
    let basis = rational_kernel(&rows);
    for v in &basis {
        let mut acc = QSeries::zero(order);
        for (c, s) in v.iter().zip(&fam.series) {
            acc = acc.add(&s.scale(c));
        }
        assert!(acc.is_zero(), "kernel vector fails direct verification");
    }
    RelationSet {
        basis,
        verified_to_order: order,
        margin_ok: fam.max_weight.map(|w| order >= 2 * w as usize + 20),
    }
}

// --- dimension generating series -------------------------------------------

/// Coefficients of the even, odd and cusp-form generating series and the
/// conjectural bidegree dimension table to length 4.
#[derive(Debug, Clone)]
pub struct DimSeries {
    pub even: Vec<Integer>,
    pub odd: Vec<Integer>,
    pub cusp: Vec<Integer>,
    /// dims[k][l] for 0 <= k <= maxk, 0 <= l <= 4.
    pub dims: Vec<Vec<Integer>>,
}

fn series_mul(a: &[Integer], b: &[Integer], maxk: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); maxk + 1];
    for (i, x) in a.iter().enumerate().take(maxk + 1) {
        if x.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(maxk + 1 - i) {
            out[i + j] += Integer::from(x * y);
        }
    }
    out
}

/// Expand the dimension generating series to the weight bound (<= 40).
pub fn bk_dim_series(maxk: usize) -> Result<DimSeries> {
    if maxk > 40 {
        return Err(Error::invalid("weight bound capped at 40"));
    }
    let mut even = vec![Integer::new(); maxk + 1];
    let mut odd = vec![Integer::new(); maxk + 1];
    for k in (2..=maxk).step_by(2) {
        even[k] = Integer::from(1);
    }
    for k in (3..=maxk).step_by(2) {
        odd[k] = Integer::from(1);
    }
    // X^12 / ((1-X^4)(1-X^6)) = Σ X^{12+4a+6b}
    let mut cusp = vec![Integer::new(); maxk + 1];
    for a in 0.. {
        if 12 + 4 * a > maxk {
            break;
        }
        for b in 0.. {
            let e = 12 + 4 * a + 6 * b;
            if e > maxk {
                break;
            }
            cusp[e] += 1;
        }
    }
    // (1 + E Y) / (1 - O Y + S Y^2 - S Y^4), expanded in Y to degree 4:
    // geometric series in A = O Y - S Y^2 + S Y^4.
    let zero = vec![Integer::new(); maxk + 1];
    let mut a_pow: Vec<Vec<Integer>> = vec![zero.clone(); 5]; // A^j by Y-degree
    a_pow[0] = {
        let mut one = zero.clone();
        one[0] = Integer::from(1);
        one
    };
    // A as Y-polynomial with X-series coefficients
    let neg = |v: &[Integer]| -> Vec<Integer> { v.iter().map(|x| Integer::from(-x)).collect() };
    let a_coeffs: [Vec<Integer>; 5] = [
        zero.clone(),
        odd.clone(),
        neg(&cusp),
        zero.clone(),
        cusp.clone(),
    ];
    let mut inv: Vec<Vec<Integer>> = vec![zero.clone(); 5];
    inv[0] = a_pow[0].clone();
    for _ in 1..=4 {
        // a_pow <- a_pow * A (truncate at Y^4)
        let mut next: Vec<Vec<Integer>> = vec![zero.clone(); 5];
        for (d1, coeff) in a_pow.iter().enumerate() {
            for (d2, a_c) in a_coeffs.iter().enumerate() {
                if d1 + d2 > 4 {
                    continue;
                }
                let prod = series_mul(coeff, a_c, maxk);
                for (k, x) in prod.into_iter().enumerate() {
                    next[d1 + d2][k] += x;
                }
            }
        }
        a_pow = next;
        for d in 0..=4 {
            for k in 0..=maxk {
                let add = a_pow[d][k].clone();
                inv[d][k] += add;
            }
        }
    }
    // multiply by (1 + E Y)
    let mut dims_by_l: Vec<Vec<Integer>> = vec![zero.clone(); 5];
    for d in 0..=4 {
        dims_by_l[d] = inv[d].clone();
        if d >= 1 {
            let prod = series_mul(&even, &inv[d - 1], maxk);
            for (k, x) in prod.into_iter().enumerate() {
                dims_by_l[d][k] += x;
            }
        }
    }
    let dims: Vec<Vec<Integer>> = (0..=maxk)
        .map(|k| (0..=4).map(|l| dims_by_l[l][k].clone()).collect())
        .collect();
    Ok(DimSeries {
        even,
        odd,
        cusp,
        dims,
    })
}

// --- the z_q model ----------------------------------------------------------

/// One slot of a partially reduced nested sum: the factor
/// n^{c} q^{eps·n} / (1 - q^n)^{s}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Slot {
    s: u32,
    eps: bool,
    c: u32,
}

/// Faulhaber polynomial S_c(x) = Σ_{n=1}^{x} n^c, degree c+1.
fn power_sum_poly(c: u32) -> Polynomial {
    let mut coeffs = vec![Rational::new(); c as usize + 2];
    for j in 0..=c {
        let mut t = Rational::from((binom((c + 1) as u64, j as u64), Integer::from(c + 1)));
        t *= bernoulli(j);
        if j % 2 == 1 {
            t = -t;
        }
        coeffs[(c + 1 - j) as usize] = t;
    }
    Polynomial::new(coeffs)
}

/// Substitute x - 1 into a polynomial.
fn shift_down(p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    // (x-1)^d expanded by binomials
    for (d, a) in p.coeffs().iter().enumerate() {
        if a.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        let mut coeffs = vec![Rational::new(); d + 1];
        for (i, coeff) in coeffs.iter_mut().enumerate() {
            let mut t = Rational::from(binom(d as u64, i as u64));
            if (d - i) % 2 == 1 {
                t = -t;
            }
            *coeff = t * a;
        }
        out = out.add(&Polynomial::new(coeffs));
    }
    out
}

/// b-coefficients of the basis change: Σ_j b^k_{i,j} t^j / j! := C(t+k-1-i, k-1),
/// returned as b^k_{i,j} for j = 1..k-1.
pub fn qana_basis_change(i: u32, k: u32) -> Result<Vec<Rational>> {
    if k < 2 || i < 1 || i > k - 1 {
        return Err(Error::invalid(format!(
            "basis change needs 1 <= i <= k-1, got i={i}, k={k}"
        )));
    }
    // C(t+k-1-i, k-1) = Π_{a=0}^{k-2} (t + k-1-i-a) / (k-1)!
    let mut p = Polynomial::one();
    for a in 0..=(k - 2) {
        let shift = k as i64 - 1 - i as i64 - a as i64;
        p = p.mul(&Polynomial::new(vec![
            Rational::from(shift),
            Rational::from(1),
        ]));
    }
    p = p.scale(&Rational::from((Integer::from(1), factorial(k - 1))));
    debug_assert!(p.coeff(0).cmp0() == std::cmp::Ordering::Equal);
    Ok((1..k)
        .map(|j| p.coeff(j as usize) * Rational::from(factorial(j)))
        .collect())
}

/// The Eulerian numerator Q^E_j(t) = t P_{j-1}(t) / (j-1)!.
pub fn eulerian_numerator(j: u32) -> Polynomial {
    let mut shifted = vec![Rational::new()];
    shifted.extend_from_slice(eulerian_poly(j - 1).coeffs());
    Polynomial::new(shifted).scale(&Rational::from((Integer::from(1), factorial(j - 1))))
}

/// Expansion coefficients of one fully reduced slot n^c q^n/(1-q^n)^s in the
/// bi-letter basis: pairs (letter (t, c), coefficient).
fn slot_letters(s: u32, c: u32) -> Vec<((u32, u32), Rational)> {
    let c_fact = Rational::from(factorial(c));
    if s == 1 {
        return vec![((1, c), c_fact)];
    }
    qana_basis_change(1, s)
        .expect("s >= 2")
        .into_iter()
        .enumerate()
        .map(|(idx, b)| ((idx as u32 + 2, c), b * c_fact.clone()))
        .collect()
}

/// Express the nested q-series Σ_{n_1 > ... > n_l > 0}
/// q^{n_1} / ((1-q^{n_1})^{s_1} ... (1-q^{n_l})^{s_l}) as an exact
/// bi-bracket combination: interior numerators split as 1 = q^n + (1-q^n)
/// until every slot carries q^n, empty slots are summed out through power
/// sums over their free range, and the surviving slots expand through the
/// Eulerian basis change.
pub fn zq_convert(s: &Index) -> Result<LinComb<BiIndex>> {
    if s.is_empty() {
        return Err(Error::invalid("needs a non-empty index"));
    }
    let init: Vec<Slot> = s
        .parts()
        .iter()
        .enumerate()
        .map(|(j, &e)| Slot {
            s: e,
            eps: j == 0,
            c: 0,
        })
        .collect();
    let mut work: Vec<(Vec<Slot>, Rational)> = vec![(init, Rational::from(1))];
    let mut reduced: Vec<(Vec<Slot>, Rational)> = Vec::new();
    while let Some((slots, coeff)) = work.pop() {
        // first slot needing attention
        let Some(j) = slots.iter().position(|sl| !sl.eps) else {
            reduced.push((slots, coeff));
            continue;
        };
        if slots[j].s > 0 {
            // 1/(1-z)^s = z/(1-z)^s + 1/(1-z)^{s-1}
            let mut with_num = slots.clone();
            with_num[j].eps = true;
            work.push((with_num, coeff.clone()));
            let mut lowered = slots.clone();
            lowered[j].s -= 1;
            work.push((lowered, coeff));
        } else {
            // free variable: Σ over its range of n^c, onto the neighbours
            let c = slots[j].c;
            debug_assert!(j >= 1, "leading slot always keeps its numerator");
            let sc = power_sum_poly(c);
            if j == slots.len() - 1 {
                // 0 < n < n_{j-1}: S_c(n_{j-1} - 1)
                let p = shift_down(&sc);
                for (alpha, a) in p.coeffs().iter().enumerate() {
                    if a.cmp0() == std::cmp::Ordering::Equal {
                        continue;
                    }
                    let mut next = slots.clone();
                    next.remove(j);
                    next[j - 1].c += alpha as u32;
                    work.push((next, coeff.clone() * a));
                }
            } else {
                // n_{j+1} < n < n_{j-1}: S_c(n_{j-1} - 1) - S_c(n_{j+1})
                let p = shift_down(&sc);
                for (alpha, a) in p.coeffs().iter().enumerate() {
                    if a.cmp0() == std::cmp::Ordering::Equal {
                        continue;
                    }
                    let mut next = slots.clone();
                    next.remove(j);
                    next[j - 1].c += alpha as u32;
                    work.push((next, coeff.clone() * a));
                }
                for (beta, b) in sc.coeffs().iter().enumerate() {
                    if b.cmp0() == std::cmp::Ordering::Equal {
                        continue;
                    }
                    let mut next = slots.clone();
                    next.remove(j);
                    next[j].c += beta as u32;
                    work.push((next, -coeff.clone() * b));
                }
            }
        }
    }
    // Expand each fully reduced term in the bi-letter basis.
    let mut out = LinComb::zero();
    for (slots, coeff) in reduced {
        let letter_choices: Vec<Vec<((u32, u32), Rational)>> = slots
            .iter()
            .map(|sl| slot_letters(sl.s, sl.c))
            .collect();
        let mut partial: Vec<(Vec<(u32, u32)>, Rational)> = vec![(vec![], coeff)];
        for choices in letter_choices {
            let mut next = Vec::with_capacity(partial.len() * choices.len());
            for (word, c0) in &partial {
                for (letter, c1) in &choices {
                    let mut w = word.clone();
                    w.push(*letter);
                    next.push((w, c0.clone() * c1));
                }
            }
            partial = next;
        }
        for (word, c) in partial {
            out.add_term(BiIndex::new(word)?, c);
        }
    }
    Ok(out)
}

/// Direct truncated expansion of the same nested series: the internal
/// oracle for [`zq_convert`].
pub fn zq_series_direct(s: &Index, order: usize) -> QSeries {
    let l = s.len();
    // chains[j](m) = Σ_{m >= n_j > ... > n_l} Π f_i(n_i) as truncated series
    let mut chains: Vec<QSeries> = vec![QSeries::zero(order); l + 1];
    chains[l] = QSeries::one(order);
    for m in 1..=order {
        for j in 0..l {
            // f_j(m) = (1 - q^m)^{-s_j}, times q^m for the leading slot
            let mut f = QSeries::zero(order);
            let mut v = 0usize;
            loop {
                let e = m * v + if j == 0 { m } else { 0 };
                if e > order {
                    break;
                }
                *f.coeff_mut(e) = Rational::from(binom(
                    (v as u64) + (s.parts()[j] as u64) - 1,
                    (s.parts()[j] as u64) - 1,
                ));
                v += 1;
            }
            let add = f.mul(&chains[j + 1]);
            chains[j] = chains[j].add(&add);
        }
    }
    chains[0].clone()
}

// --- kernel membership report ------------------------------------------------

/// One row of the kernel report.
#[derive(Debug, Clone)]
pub struct KernelCheck {
    pub label: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
}

/// Check representatives of the known kernel classes of the q → 1 map at
/// weight k: lower-weight brackets, derivative images, the weight-8 exact
/// relation and the weight-12 cusp-form combination.
pub fn kernel_membership_suite(k: u32, prec: Precision) -> Result<Vec<KernelCheck>> {
    if !(3..=12).contains(&k) {
        return Err(Error::invalid("report covers weights 3 to 12"));
    }
    let order = ((k as usize) + 36) * 32;
    let tol = 1e-3;
    let mut out = Vec::new();
    // Lower weight dies.
    let low = bracket_series(&Index::new(vec![k - 1])?, order);
    let r = zk_limit(&low, k, tol, prec)?;
    out.push(KernelCheck {
        label: format!("Z_{k}[{}] = 0 (lower weight)", k - 1),
        passed: !r.diverged && r.value.to_f64().abs() < tol,
        value: r.value.to_f64(),
        tolerance: tol,
    });
    // Derivatives of low-weight elements die. The weight-4 case uses
    // d[1,1], whose expansion at q -> 1 carries squared logarithms; it
    // needs the deep end of the dyadic grid.
    if k >= 4 {
        let f = if k == 4 {
            bracket_series(&Index::new(vec![1, 1])?, 7300)
        } else {
            bracket_series(&Index::new(vec![k - 2])?, order)
        };
        let r = zk_limit(&f.derive(), k, tol, prec)?;
        out.push(KernelCheck {
            label: format!("Z_{k} d(weight {}) = 0", k - 2),
            passed: !r.diverged && r.value.to_f64().abs() < tol,
            value: r.value.to_f64(),
            tolerance: tol,
        });
    }
    if k == 8 {
        // [8] = (1/40)[4] - (1/252)[2] + 12 [4,4], exactly as series.
        let n = 60;
        let mut acc = bracket_series(&Index::new(vec![8])?, n);
        acc = acc.sub(&bracket_series(&Index::new(vec![4])?, n).scale(&Rational::from((1, 40))));
        acc = acc.add(&bracket_series(&Index::new(vec![2])?, n).scale(&Rational::from((1, 252))));
        acc = acc.sub(&bracket_series(&Index::new(vec![4, 4])?, n).scale(&Rational::from(12)));
        out.push(KernelCheck {
            label: "[8] - (1/40)[4] + (1/252)[2] - 12[4,4] = 0 (exact)".into(),
            passed: acc.is_zero(),
            value: 0.0,
            tolerance: 0.0,
        });
    }
    if k == 12 {
        // Z_12 of the double-bracket part reproduces the weight-12 zeta
        // relation: 168 ζ(5,7) + 150 ζ(7,5) + 28 ζ(9,3) = (5197/691) ζ(12).
        let mut comb = bracket_series(&Index::new(vec![5, 7])?, order).scale(&Rational::from(168));
        comb = comb.add(&bracket_series(&Index::new(vec![7, 5])?, order).scale(&Rational::from(150)));
        comb = comb.add(&bracket_series(&Index::new(vec![9, 3])?, order).scale(&Rational::from(28)));
        let r = zk_limit(&comb, 12, tol, prec)?;
        let mut want = LinComb::term(Index::new(vec![12])?, Rational::from((5197, 691)));
        let zeta = mzv_lincomb(&want, prec)?.to_f64();
        want = LinComb::zero();
        let _ = want;
        let diff = r.value.to_f64() - zeta;
        out.push(KernelCheck {
            label: "Z_12(168[5,7]+150[7,5]+28[9,3]) = (5197/691) ζ(12)".into(),
            passed: !r.diverged && diff.abs() < tol,
            value: diff,
            tolerance: tol,
        });
    }
    Ok(out)
}

/// The discriminant combination of the weight-12 relation: the family whose
/// kernel reproduces the cusp-form coefficients (used by the CLI and the
/// acceptance suite).
pub fn delta_family(order: usize) -> Result<SeriesFamily> {
    let delta_normalized =
        crate::qseries::delta_series(order).scale(&Rational::from((Integer::from(-1), Integer::from(64 * 5 * 691))));
    let mut labels = vec!["delta_norm".to_string()];
    let mut series = vec![delta_normalized];
    for parts in [
        vec![5u32, 7],
        vec![7, 5],
        vec![9, 3],
        vec![2],
        vec![4],
        vec![6],
        vec![8],
        vec![12],
    ] {
        labels.push(format!("[{}]", Index::new(parts.clone())?));
        series.push(bracket_series(&Index::new(parts)?, order));
    }
    Ok(SeriesFamily::new(labels, series)?.with_max_weight(12))
}
