//! Multiple divisor sums and their generating q-series: brackets
//! `[s1,...,sl]`, bi-brackets with an extra row of upper exponents, and the
//! rational-normalized Eisenstein series.
//!
//! Every series here is exact. Brackets are computed along two independent
//! routes — the defining divisor-sum enumeration and the nested Eulerian
//! polynomial sums — which the tests hold against each other.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::exact::{bernoulli, factorial};
use crate::qseries::QSeries;
use crate::{Error, Result};

/// A composition (s_1, ..., s_l) of positive integers. The empty index is
/// allowed and stands for the unit (its series is the constant 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Index {
    parts: Vec<u32>,
}

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&s| s == 0) {
            return Err(Error::invalid("index entries must be >= 1"));
        }
        Ok(Index { parts })
    }

    pub fn empty() -> Self {
        Index { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Admissible means the corresponding multiple zeta value converges.
    pub fn is_admissible(&self) -> bool {
        self.parts.first().map_or(true, |&s| s >= 2)
    }
}

impl Ord for Index {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts
            .len()
            .cmp(&other.parts.len())
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Index {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Index::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad index entry {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Index::new(parts)
    }
}

/// A list of pairs (s_i, r_i) with s_i >= 1 and r_i >= 0: the index of a
/// bi-bracket, and simultaneously a word over the bi-alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiIndex {
    parts: Vec<(u32, u32)>,
}

impl BiIndex {
    pub fn new(parts: Vec<(u32, u32)>) -> Result<Self> {
        if parts.iter().any(|&(s, _)| s == 0) {
            return Err(Error::invalid("bi-index upper entries must be >= 1"));
        }
        Ok(BiIndex { parts })
    }

    pub fn empty() -> Self {
        BiIndex { parts: Vec::new() }
    }

    pub fn single(s: u32, r: u32) -> Self {
        BiIndex {
            parts: vec![(s, r)],
        }
    }

    pub fn parts(&self) -> &[(u32, u32)] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn upper_weight(&self) -> u32 {
        self.parts.iter().map(|&(s, _)| s).sum()
    }

    pub fn lower_weight(&self) -> u32 {
        self.parts.iter().map(|&(_, r)| r).sum()
    }

    pub fn total_weight(&self) -> u32 {
        self.upper_weight() + self.lower_weight()
    }

    /// The plain index when every upper exponent vanishes.
    pub fn as_index(&self) -> Option<Index> {
        if self.parts.iter().all(|&(_, r)| r == 0) {
            Some(Index {
                parts: self.parts.iter().map(|&(s, _)| s).collect(),
            })
        } else {
            None
        }
    }

    pub fn concat(&self, other: &BiIndex) -> BiIndex {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        BiIndex { parts }
    }
}

impl From<&Index> for BiIndex {
    fn from(ix: &Index) -> Self {
        BiIndex {
            parts: ix.parts.iter().map(|&s| (s, 0)).collect(),
        }
    }
}

impl Ord for BiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts
            .len()
            .cmp(&other.parts.len())
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for BiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BiIndex {
    /// `"4,2"` when all r_i = 0, otherwise `"4,2|1,0"`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let upper: Vec<String> = self.parts.iter().map(|(s, _)| s.to_string()).collect();
        write!(f, "{}", upper.join(","))?;
        if self.parts.iter().any(|&(_, r)| r != 0) {
            let lower: Vec<String> = self.parts.iter().map(|(_, r)| r.to_string()).collect();
            write!(f, "|{}", lower.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for BiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(BiIndex::empty());
        }
        let (upper, lower) = match s.split_once('|') {
            Some((u, l)) => (u, Some(l)),
            None => (s, None),
        };
        let uppers: Index = upper.parse()?;
        let lowers: Vec<u32> = match lower {
            Some(l) => l
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u32>()
                        .map_err(|e| Error::Parse(format!("bad exponent {p:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?,
            None => vec![0; uppers.len()],
        };
        if lowers.len() != uppers.len() {
            return Err(Error::Parse(format!(
                "upper/lower length mismatch in {s:?}"
            )));
        }
        BiIndex::new(uppers.parts.iter().copied().zip(lowers).collect())
    }
}

/// The multiple divisor sum σ_{r_1,...,r_l}(n): the sum of
/// v_1^{r_1} ... v_l^{r_l} over all solutions of u_1 v_1 + ... + u_l v_l = n
/// with u_1 > ... > u_l > 0 and v_i > 0.
pub fn multiple_divisor_sum(r: &[u32], n: u64) -> Integer {
    assert!(!r.is_empty() && n >= 1);
    // Enumerate the strictly decreasing u-row depth first; v_j runs over the
    // remaining budget. Levels j..l need at least 1 + 2 + ... + (l-j) more.
    fn rec(r: &[u32], j: usize, u_upper: u64, budget: u64, acc: &Integer, total: &mut Integer) {
        let l = r.len();
        let rest_min: u64 = ((l - j - 1) as u64) * ((l - j) as u64) / 2;
        if budget <= rest_min {
            return;
        }
        let u_max = (budget - rest_min).min(u_upper - 1);
        let u_min = (l - j) as u64;
        for u in u_min..=u_max {
            let mut v = 1u64;
            while u * v + rest_min <= budget {
                let mut term = acc.clone();
                term *= Integer::from(v).pow(r[j]);
                if j + 1 == l {
                    if u * v == budget {
                        *total += term;
                    }
                } else {
                    rec(r, j + 1, u, budget - u * v, &term, total);
                }
                v += 1;
            }
        }
    }
    let mut total = Integer::new();
    rec(r, 0, u64::MAX, n, &Integer::from(1), &mut total);
    total
}

/// Bracket series along the divisor-sum definition; the independent
/// cross-check route for [`bracket_series`].
pub fn bracket_series_via_sigma(s: &Index, order: usize) -> QSeries {
    if s.is_empty() {
        return QSeries::one(order);
    }
    let r: Vec<u32> = s.parts().iter().map(|&x| x - 1).collect();
    let mut denom = Integer::from(1);
    for &x in s.parts() {
        denom *= factorial(x - 1);
    }
    let mut coeffs = vec![Rational::new(); order + 1];
    for n in 1..=order {
        coeffs[n] = Rational::from((multiple_divisor_sum(&r, n as u64), denom.clone()));
    }
    QSeries::from_coeffs(coeffs)
}

/// Integer coefficient list of Li_{1-s}(q^u) = Σ_{v>0} v^{s-1} q^{uv},
/// truncated at `order`.
fn polylog_slot(s: u32, u: usize, order: usize) -> Vec<(usize, Integer)> {
    let mut out = Vec::with_capacity(order / u + 1);
    let mut v = 1usize;
    while u * v <= order {
        out.push((u * v, Integer::from(v).pow(s - 1)));
        v += 1;
    }
    out
}

/// Same prefix scan in u128 with checked arithmetic; every contribution is
/// nonnegative, so intermediate values never exceed the final coefficients
/// and a None return means the exact route has to take over.
fn bibracket_scan_u128(b: &BiIndex, order: usize) -> Option<Vec<u128>> {
    let l = b.len();
    let mut t = vec![vec![0u128; order + 1]; l + 1];
    t[l][0] = 1;
    let pow_u128 = |base: u128, e: u32| -> Option<u128> {
        let mut out: u128 = 1;
        for _ in 0..e {
            out = out.checked_mul(base)?;
        }
        Some(out)
    };
    for u in 1..=order {
        for j in 0..l {
            let (s, r) = b.parts()[j];
            let u_pow = pow_u128(u as u128, r)?;
            let (head, tail) = t.split_at_mut(j + 1);
            let dst = &mut head[j];
            let src = &tail[0];
            let mut v = 1usize;
            while u * v <= order {
                let e = u * v;
                let c = pow_u128(v as u128, s - 1)?.checked_mul(u_pow)?;
                if j == l - 1 {
                    dst[e] = dst[e].checked_add(c)?;
                } else {
                    for (f, &d) in src.iter().enumerate().take(order + 1 - e) {
                        if d == 0 {
                            continue;
                        }
                        dst[e + f] = dst[e + f].checked_add(c.checked_mul(d)?)?;
                    }
                }
                v += 1;
            }
        }
    }
    Some(t.swap_remove(0))
}

fn bibracket_series_uncached(b: &BiIndex, order: usize) -> QSeries {
    if b.is_empty() {
        return QSeries::one(order);
    }
    if let Some(scan) = bibracket_scan_u128(b, order) {
        let mut denom = Integer::from(1);
        for &(s, r) in b.parts() {
            denom *= factorial(s - 1);
            denom *= factorial(r);
        }
        let coeffs = scan
            .into_iter()
            .map(|c| Rational::from((Integer::from(c), denom.clone())))
            .collect();
        return QSeries::from_coeffs(coeffs);
    }
    let l = b.len();
    // t[j] holds Σ over chains u_j > ... > u_l up to the current scan point,
    // as integer series; t[l] is the constant 1.
    let mut t = vec![vec![Integer::new(); order + 1]; l + 1];
    t[l][0] = Integer::from(1);
    for u in 1..=order {
        for j in 0..l {
            let (s, r) = b.parts()[j];
            // slot_j(u) * t[j+1] before t[j+1] was touched at this u; updating
            // j in ascending order preserves exactly that.
            let slot = polylog_slot(s, u, order);
            let u_pow = Integer::from(u).pow(r);
            let (head, tail) = t.split_at_mut(j + 1);
            let dst = &mut head[j];
            if j == l - 1 {
                // innermost slot convolves with the constant 1
                for &(e, ref c) in &slot {
                    dst[e] += Integer::from(c * &u_pow);
                }
                continue;
            }
            let src = &tail[0];
            for &(e, ref c) in &slot {
                let scaled = Integer::from(c * &u_pow);
                for (f, d) in src.iter().enumerate().take(order + 1 - e) {
                    if d.cmp0() == Ordering::Equal {
                        continue;
                    }
                    dst[e + f] += Integer::from(&scaled * d);
                }
            }
        }
    }
    let mut denom = Integer::from(1);
    for &(s, r) in b.parts() {
        denom *= factorial(s - 1);
        denom *= factorial(r);
    }
    let coeffs = t[0]
        .iter()
        .map(|c| Rational::from((c.clone(), denom.clone())))
        .collect();
    QSeries::from_coeffs(coeffs)
}

static BIBRACKET_CACHE: Mutex<Option<HashMap<(BiIndex, usize), QSeries>>> = Mutex::new(None);

/// Exact q-expansion of the bi-bracket with the given index, up to `order`.
///
/// Computed by the nested sums over u_1 > ... > u_l > 0 of
/// (u_j^{r_j}/r_j!) Li_{1-s_j}(q^{u_j})/(s_j-1)!. Results are memoized; the
/// word-algebra tests evaluate the same indices thousands of times.
pub fn bibracket_series(b: &BiIndex, order: usize) -> QSeries {
    {
        let mut guard = BIBRACKET_CACHE.lock().unwrap();
        let cache = guard.get_or_insert_with(HashMap::new);
        if let Some(hit) = cache.get(&(b.clone(), order)) {
            return hit.clone();
        }
    }
    let computed = bibracket_series_uncached(b, order);
    let mut guard = BIBRACKET_CACHE.lock().unwrap();
    let cache = guard.get_or_insert_with(HashMap::new);
    cache.insert((b.clone(), order), computed.clone());
    computed
}

/// Exact q-expansion of the bracket [s_1,...,s_l] up to `order`, via the
/// nested Eulerian-polynomial route.
pub fn bracket_series(s: &Index, order: usize) -> QSeries {
    bibracket_series(&BiIndex::from(s), order)
}

/// The rational-normalized Eisenstein series of even weight k:
/// (-2πi)^{-k} ζ(k) + [k], where the constant is -B_k / (2 k!).
pub fn gtilde_eisenstein(k: u32, order: usize) -> Result<QSeries> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::invalid(format!(
            "normalized Eisenstein series needs even k >= 2, got {k}"
        )));
    }
    let mut constant = Rational::from((Integer::from(-1), 2 * factorial(k)));
    constant *= bernoulli(k);
    let idx = Index::new(vec![k])?;
    Ok(bracket_series(&idx, order).add(&QSeries::constant(constant, order)))
}

/// Drop the bi-bracket memo table. Only useful to bound memory in
/// long-running processes; never required for correctness.
pub fn clear_series_cache() {
    let mut guard = BIBRACKET_CACHE.lock().unwrap();
    *guard = None;
}
