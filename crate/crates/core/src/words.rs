//! The word-algebra engine.
//!
//! Words over the alphabet z_s (plain indices) and z_{s,r} (bi-indices)
//! carry four products: the stuffle ∗, the shuffle ⧢ (computed on the
//! two-letter alphabet {x, y} with z_s = x^{s-1} y), and the bracket
//! product ⊠∗ whose diamond adds the Bernoulli-weighted λ-corrections.
//! The partition involution P yields the second product expression
//! P(P(u) ⊠∗ P(v)), and the evaluation homomorphism sends every word to
//! its bi-bracket q-series.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use rug::{Integer, Rational};

use crate::brackets::{bibracket_series, BiIndex, Index};
use crate::exact::{binom, lambda_coeff};
use crate::qseries::QSeries;
use crate::{Error, Result};

/// A finite formal ℚ-linear combination of words. Zero coefficients are
/// never stored, and iteration order is the canonical word order (length
/// first, then lexicographic), so printed output is reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinComb<W: Ord + Clone> {
    terms: BTreeMap<W, Rational>,
}

impl<W: Ord + Clone> Default for LinComb<W> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<W: Ord + Clone> LinComb<W> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(w: W) -> Self {
        let mut lc = Self::zero();
        lc.add_term(w, Rational::from(1));
        lc
    }

    pub fn term(w: W, c: Rational) -> Self {
        let mut lc = Self::zero();
        lc.add_term(w, c);
        lc
    }

    pub fn add_term(&mut self, w: W, c: Rational) {
        if c.cmp0() == std::cmp::Ordering::Equal {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().cmp0() == std::cmp::Ordering::Equal {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), Rational::from(-c));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.cmp0() == std::cmp::Ordering::Equal {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (w, a) in &self.terms {
            out.terms.insert(w.clone(), Rational::from(a * c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &W) -> Rational {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&W, &Rational)> {
        self.terms.iter()
    }

    /// Apply a word-level map that returns a combination, extended linearly.
    pub fn flat_map<V: Ord + Clone>(&self, mut f: impl FnMut(&W) -> LinComb<V>) -> LinComb<V> {
        let mut out = LinComb::zero();
        for (w, c) in &self.terms {
            for (v, d) in f(w).terms {
                out.add_term(v, d * c);
            }
        }
        out
    }
}

impl LinComb<BiIndex> {
    /// `[{"word": "s1,s2|r1,r2", "coeff": "num/den"}, ...]` in canonical order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| serde_json::json!({"word": w.to_string(), "coeff": c.to_string()}))
                .collect(),
        )
    }
}

impl LinComb<Index> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| serde_json::json!({"word": w.to_string(), "coeff": c.to_string()}))
                .collect(),
        )
    }

    pub fn into_biwords(&self) -> LinComb<BiIndex> {
        self.flat_map(|w| LinComb::single(BiIndex::from(w)))
    }
}

fn prepend(letter: (u32, u32), lc: &LinComb<BiIndex>) -> LinComb<BiIndex> {
    let mut out = LinComb::zero();
    for (w, c) in lc.iter() {
        let mut parts = vec![letter];
        parts.extend_from_slice(w.parts());
        out.add_term(BiIndex::new(parts).unwrap(), c.clone());
    }
    out
}

/// The commutative product on single bi-letters behind ⊠∗:
/// z_{s1,r1} ⋄ z_{s2,r2} = C(r1+r2, r1) ( z_{s1+s2, r1+r2}
///   + Σ_j λ^j_{s1,s2} z_{j, r1+r2} + Σ_j λ^j_{s2,s1} z_{j, r1+r2} ).
/// With r1 = r2 = 0 this is the diamond of the plain bracket product.
fn boxast_diamond(a: (u32, u32), b: (u32, u32)) -> Vec<((u32, u32), Rational)> {
    let (s1, r1) = a;
    let (s2, r2) = b;
    let r = r1 + r2;
    let front = Rational::from(binom((r1 + r2) as u64, r1 as u64));
    let mut out: Vec<((u32, u32), Rational)> = vec![((s1 + s2, r), front.clone())];
    for j in 1..=s1 {
        let c = lambda_coeff(s1, s2, j).expect("j in range");
        if c.cmp0() != std::cmp::Ordering::Equal {
            out.push(((j, r), c * front.clone()));
        }
    }
    for j in 1..=s2 {
        let c = lambda_coeff(s2, s1, j).expect("j in range");
        if c.cmp0() != std::cmp::Ordering::Equal {
            out.push(((j, r), c * front.clone()));
        }
    }
    out
}

fn stuffle_diamond(a: (u32, u32), b: (u32, u32)) -> Vec<((u32, u32), Rational)> {
    debug_assert!(a.1 == 0 && b.1 == 0, "stuffle acts on the plain alphabet");
    vec![((a.0 + b.0, 0), Rational::from(1))]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Stuffle,
    BoxAst,
}

static QS_CACHE: Mutex<Option<HashMap<(Kind, BiIndex, BiIndex), LinComb<BiIndex>>>> =
    Mutex::new(None);

/// The quasi-shuffle recursion aw ⊙ bv = a(w ⊙ bv) + b(aw ⊙ v) + (a⋄b)(w ⊙ v),
/// memoized on word pairs. Shared subproblems multiply combinatorially from
/// weight 8 on, so the memo is load-bearing for the larger test runs.
fn quasi_shuffle_rec(kind: Kind, w: &BiIndex, v: &BiIndex) -> LinComb<BiIndex> {
    if w.is_empty() {
        return LinComb::single(v.clone());
    }
    if v.is_empty() {
        return LinComb::single(w.clone());
    }
    let key = if w <= v {
        (kind, w.clone(), v.clone())
    } else {
        (kind, v.clone(), w.clone())
    };
    {
        let mut guard = QS_CACHE.lock().unwrap();
        if let Some(hit) = guard.get_or_insert_with(HashMap::new).get(&key) {
            return hit.clone();
        }
    }
    let a = w.parts()[0];
    let b = v.parts()[0];
    let w_rest = BiIndex::new(w.parts()[1..].to_vec()).unwrap();
    let v_rest = BiIndex::new(v.parts()[1..].to_vec()).unwrap();
    let mut out = prepend(a, &quasi_shuffle_rec(kind, &w_rest, v));
    out = out.add(&prepend(b, &quasi_shuffle_rec(kind, w, &v_rest)));
    let inner = quasi_shuffle_rec(kind, &w_rest, &v_rest);
    let diamond = match kind {
        Kind::Stuffle => stuffle_diamond(a, b),
        Kind::BoxAst => boxast_diamond(a, b),
    };
    for (letter, c) in diamond {
        out = out.add(&prepend(letter, &inner).scale(&c));
    }
    let mut guard = QS_CACHE.lock().unwrap();
    guard
        .get_or_insert_with(HashMap::new)
        .insert(key, out.clone());
    out
}

/// The bracket quasi-shuffle product ⊠∗ on bi-index words.
pub fn boxast(u: &BiIndex, v: &BiIndex) -> LinComb<BiIndex> {
    quasi_shuffle_rec(Kind::BoxAst, u, v)
}

/// ⊠∗ extended bilinearly to combinations.
pub fn boxast_lincomb(u: &LinComb<BiIndex>, v: &LinComb<BiIndex>) -> LinComb<BiIndex> {
    let mut out = LinComb::zero();
    for (w1, c1) in u.iter() {
        for (w2, c2) in v.iter() {
            for (w, c) in boxast(w1, w2).iter() {
                out.add_term(w.clone(), Rational::from(c * c1) * c2);
            }
        }
    }
    out
}

/// The stuffle (harmonic) product on plain index words.
pub fn stuffle(u: &Index, v: &Index) -> LinComb<Index> {
    let out = quasi_shuffle_rec(Kind::Stuffle, &BiIndex::from(u), &BiIndex::from(v));
    biwords_to_indices(&out)
}

/// The stuffle product extended bilinearly.
pub fn stuffle_lincomb(u: &LinComb<Index>, v: &LinComb<Index>) -> LinComb<Index> {
    let mut out = LinComb::zero();
    for (w1, c1) in u.iter() {
        for (w2, c2) in v.iter() {
            for (w, c) in stuffle(w1, w2).iter() {
                out.add_term(w.clone(), Rational::from(c * c1) * c2);
            }
        }
    }
    out
}

fn biwords_to_indices(lc: &LinComb<BiIndex>) -> LinComb<Index> {
    lc.flat_map(|w| {
        LinComb::single(
            w.as_index()
                .expect("plain-alphabet product produced an upper exponent"),
        )
    })
}

// --- shuffle on the two-letter alphabet ---------------------------------

/// z-word as a string over {x, y}, with z_s = x^{s-1} y; x = false, y = true.
fn to_xy(w: &Index) -> Vec<bool> {
    let mut out = Vec::with_capacity(w.weight() as usize);
    for &s in w.parts() {
        for _ in 0..s - 1 {
            out.push(false);
        }
        out.push(true);
    }
    out
}

fn from_xy(bits: &[bool]) -> Index {
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
    assert_eq!(run, 0, "xy-word does not end in y");
    Index::new(parts).unwrap()
}

fn shuffle_bits_rec(
    a: &[bool],
    b: &[bool],
    buf: &mut Vec<bool>,
    out: &mut HashMap<Vec<bool>, Integer>,
) {
    if a.is_empty() && b.is_empty() {
        *out.entry(buf.clone()).or_default() += 1;
        return;
    }
    if !a.is_empty() {
        buf.push(a[0]);
        shuffle_bits_rec(&a[1..], b, buf, out);
        buf.pop();
    }
    if !b.is_empty() {
        buf.push(b[0]);
        shuffle_bits_rec(a, &b[1..], buf, out);
        buf.pop();
    }
}

/// The shuffle product ⧢ of two z-words, computed by interleaving their
/// {x, y}-letter expansions.
pub fn shuffle(u: &Index, v: &Index) -> LinComb<Index> {
    let a = to_xy(u);
    let b = to_xy(v);
    let mut raw: HashMap<Vec<bool>, Integer> = HashMap::new();
    let mut buf = Vec::with_capacity(a.len() + b.len());
    shuffle_bits_rec(&a, &b, &mut buf, &mut raw);
    let mut out = LinComb::zero();
    for (bits, mult) in raw {
        out.add_term(from_xy(&bits), Rational::from(mult));
    }
    out
}

/// The shuffle product extended bilinearly.
pub fn shuffle_lincomb(u: &LinComb<Index>, v: &LinComb<Index>) -> LinComb<Index> {
    let mut out = LinComb::zero();
    for (w1, c1) in u.iter() {
        for (w2, c2) in v.iter() {
            for (w, c) in shuffle(w1, w2).iter() {
                out.add_term(w.clone(), Rational::from(c * c1) * c2);
            }
        }
    }
    out
}

/// Closed form for the shuffle of two single letters:
/// z_{s1} ⧢ z_{s2} = Σ_{a+b=s1+s2} (C(a-1, s1-1) + C(a-1, s2-1)) z_a z_b,
/// summed over a, b >= 1.
pub fn shuffle_len1(s1: u32, s2: u32) -> LinComb<Index> {
    let k = s1 + s2;
    let mut out = LinComb::zero();
    for a in 1..k {
        let b = k - a;
        let mut c = binom((a - 1) as u64, (s1 - 1) as u64);
        c += binom((a - 1) as u64, (s2 - 1) as u64);
        out.add_term(Index::new(vec![a, b]).unwrap(), Rational::from(c));
    }
    out
}

// --- partition involution ------------------------------------------------

type Monomial = (Vec<u32>, Vec<u32>); // (X exponents, Y exponents)

/// Expand the substituted generating monomial of `w`:
/// ∏_j (Y_1+...+Y_{l+1-j})^{s_j - 1} (X_{l+1-j} - X_{l+2-j})^{r_j},
/// with X_{l+1} = 0, as an exact multivariate polynomial.
fn expand_substituted(w: &BiIndex) -> HashMap<Monomial, Integer> {
    let l = w.len();
    let mut poly: HashMap<Monomial, Integer> = HashMap::new();
    poly.insert((vec![0; l], vec![0; l]), Integer::from(1));
    // (var index, is_x, negated) triples of a linear form
    let mul_linear = |poly: HashMap<Monomial, Integer>,
                      terms: &[(usize, bool, bool)]|
     -> HashMap<Monomial, Integer> {
        let mut out: HashMap<Monomial, Integer> = HashMap::new();
        for ((xs, ys), c) in &poly {
            for &(i, is_x, neg) in terms {
                let mut xs2 = xs.clone();
                let mut ys2 = ys.clone();
                if is_x {
                    xs2[i] += 1;
                } else {
                    ys2[i] += 1;
                }
                let t = if neg { Integer::from(-c) } else { c.clone() };
                *out.entry((xs2, ys2)).or_default() += t;
            }
        }
        out.retain(|_, c| c.cmp0() != std::cmp::Ordering::Equal);
        out
    };
    for (j, &(s, r)) in w.parts().iter().enumerate() {
        // j is 0-based: the 1-based slot j+1 uses Y_1 + ... + Y_{l-j} and
        // X_{l-j} - X_{l-j+1}.
        let y_terms: Vec<(usize, bool, bool)> = (0..l - j).map(|i| (i, false, false)).collect();
        for _ in 0..s - 1 {
            poly = mul_linear(poly, &y_terms);
        }
        let mut x_terms: Vec<(usize, bool, bool)> = vec![(l - j - 1, true, false)];
        if l - j < l {
            x_terms.push((l - j, true, true));
        }
        for _ in 0..r {
            poly = mul_linear(poly, &x_terms);
        }
    }
    poly
}

static SUBST_CACHE: Mutex<Option<HashMap<BiIndex, HashMap<Monomial, Integer>>>> = Mutex::new(None);

fn expand_substituted_cached(w: &BiIndex) -> HashMap<Monomial, Integer> {
    {
        let mut guard = SUBST_CACHE.lock().unwrap();
        if let Some(hit) = guard.get_or_insert_with(HashMap::new).get(w) {
            return hit.clone();
        }
    }
    let poly = expand_substituted(w);
    let mut guard = SUBST_CACHE.lock().unwrap();
    guard
        .get_or_insert_with(HashMap::new)
        .insert(w.clone(), poly.clone());
    poly
}

fn compositions_nonneg(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions_nonneg(total - first, parts - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// The partition involution P on a single bi-index word: conjugation of
/// partitions acting on the generating series. The image of `v` collects,
/// over every candidate word `w` of the dual bidegree, the coefficient of
/// `v`'s monomial in the substituted monomial of `w`. P ∘ P = id, and the
/// bi-bracket series is invariant under P.
pub fn partition_involution(v: &BiIndex) -> LinComb<BiIndex> {
    let l = v.len();
    if l == 0 {
        return LinComb::single(v.clone());
    }
    let target: Monomial = (
        v.parts().iter().map(|&(s, _)| s - 1).collect(),
        v.parts().iter().map(|&(_, r)| r).collect(),
    );
    // Candidates satisfy upper(w) = lower(v) + l and lower(w) = upper(v) - l.
    let upper_w = v.lower_weight() + l as u32;
    let lower_w = v.upper_weight() - l as u32;
    let mut out = LinComb::zero();
    for s_parts in compositions_nonneg(upper_w - l as u32, l) {
        for r_parts in compositions_nonneg(lower_w, l) {
            let w = BiIndex::new(
                s_parts
                    .iter()
                    .zip(&r_parts)
                    .map(|(&sm1, &r)| (sm1 + 1, r))
                    .collect(),
            )
            .unwrap();
            let poly = expand_substituted_cached(&w);
            if let Some(c) = poly.get(&target) {
                out.add_term(w, Rational::from(c.clone()));
            }
        }
    }
    out
}

/// P extended linearly to combinations.
pub fn partition_involution_lincomb(lc: &LinComb<BiIndex>) -> LinComb<BiIndex> {
    lc.flat_map(partition_involution)
}

/// The second product expression for bi-brackets, P(P(u) ⊠∗ P(v)): the
/// analogue of the shuffle product of multiple zeta values.
pub fn second_product(u: &BiIndex, v: &BiIndex) -> LinComb<BiIndex> {
    let pu = partition_involution(u);
    let pv = partition_involution(v);
    partition_involution_lincomb(&boxast_lincomb(&pu, &pv))
}

// --- shuffle brackets ----------------------------------------------------

fn bw(parts: &[(u32, u32)]) -> BiIndex {
    BiIndex::new(parts.to_vec()).unwrap()
}

/// The shuffle bracket [s_1,...,s_l]^⧢ as an explicit bi-index combination,
/// available for lengths up to 4 (the closed Kronecker-delta forms).
/// Whenever s_2, ..., s_l >= 2 it is the plain bracket word.
pub fn shuffle_bracket(s: &Index) -> Result<LinComb<BiIndex>> {
    let p = s.parts();
    let r = |num: i64, den: i64| Rational::from((num, den));
    let mut out = LinComb::single(BiIndex::from(s));
    match p.len() {
        0 | 1 => {}
        2 => {
            let (s1, s2) = (p[0], p[1]);
            if s2 == 1 {
                let mut c = LinComb::term(bw(&[(s1, 1)]), r(1, 2));
                c.add_term(bw(&[(s1, 0)]), r(-1, 2));
                out = out.add(&c);
            }
        }
        3 => {
            let (s1, s2, s3) = (p[0], p[1], p[2]);
            if s3 == 1 {
                let mut c = LinComb::term(bw(&[(s1, 0), (s2, 1)]), r(1, 2));
                c.add_term(bw(&[(s1, 0), (s2, 0)]), r(-1, 2));
                out = out.add(&c);
            }
            if s2 == 1 {
                let mut c = LinComb::term(bw(&[(s1, 1), (s3, 0)]), r(1, 2));
                c.add_term(bw(&[(s1, 0), (s3, 1)]), r(-1, 2));
                c.add_term(bw(&[(s1, 0), (s3, 0)]), r(-1, 2));
                out = out.add(&c);
            }
            if s2 == 1 && s3 == 1 {
                let mut c = LinComb::term(bw(&[(s1, 2)]), r(1, 6));
                c.add_term(bw(&[(s1, 1)]), r(-1, 4));
                c.add_term(bw(&[(s1, 0)]), r(1, 6));
                out = out.add(&c);
            }
        }
        4 => {
            let (s1, s2, s3, s4) = (p[0], p[1], p[2], p[3]);
            if s4 == 1 {
                let mut c = LinComb::term(bw(&[(s1, 0), (s2, 0), (s3, 1)]), r(1, 2));
                c.add_term(bw(&[(s1, 0), (s2, 0), (s3, 0)]), r(-1, 2));
                out = out.add(&c);
            }
            if s3 == 1 {
                let mut c = LinComb::term(bw(&[(s1, 0), (s2, 1), (s4, 0)]), r(1, 2));
                c.add_term(bw(&[(s1, 0), (s2, 0), (s4, 1)]), r(-1, 2));
                c.add_term(bw(&[(s1, 0), (s2, 0), (s4, 0)]), r(-1, 2));
                out = out.add(&c);
            }
            if s2 == 1 {
                let mut c = LinComb::term(bw(&[(s1, 1), (s3, 0), (s4, 0)]), r(1, 2));
                c.add_term(bw(&[(s1, 0), (s3, 1), (s4, 0)]), r(-1, 2));
                c.add_term(bw(&[(s1, 0), (s3, 0), (s4, 0)]), r(-1, 2));
                out = out.add(&c);
            }
            if s2 == 1 && s4 == 1 {
                let mut c = LinComb::term(bw(&[(s1, 1), (s3, 1)]), r(1, 4));
                c.add_term(bw(&[(s1, 0), (s3, 2)]), r(-1, 2));
                c.add_term(bw(&[(s1, 1), (s3, 0)]), r(-1, 4));
                c.add_term(bw(&[(s1, 0), (s3, 0)]), r(1, 4));
                out = out.add(&c);
            }
            if s3 == 1 && s4 == 1 {
                let mut c = LinComb::term(bw(&[(s1, 0), (s2, 2)]), r(1, 6));
                c.add_term(bw(&[(s1, 0), (s2, 1)]), r(-1, 4));
                c.add_term(bw(&[(s1, 0), (s2, 0)]), r(1, 6));
                out = out.add(&c);
            }
            if s2 == 1 && s3 == 1 {
                let mut c = LinComb::term(bw(&[(s1, 0), (s4, 2)]), r(1, 6));
                c.add_term(bw(&[(s1, 1), (s4, 1)]), r(-1, 6));
                c.add_term(bw(&[(s1, 0), (s4, 1)]), r(1, 4));
                c.add_term(bw(&[(s1, 2), (s4, 0)]), r(1, 6));
                c.add_term(bw(&[(s1, 1), (s4, 0)]), r(-1, 4));
                c.add_term(bw(&[(s1, 0), (s4, 0)]), r(1, 6));
                out = out.add(&c);
            }
            if s2 == 1 && s3 == 1 && s4 == 1 {
                let mut c = LinComb::term(bw(&[(s1, 3)]), r(1, 24));
                c.add_term(bw(&[(s1, 2)]), r(-1, 12));
                c.add_term(bw(&[(s1, 1)]), r(11, 144));
                c.add_term(bw(&[(s1, 0)]), r(-1, 24));
                out = out.add(&c);
            }
        }
        l => {
            return Err(Error::invalid(format!(
                "shuffle bracket only has closed forms for length <= 4, got {l}"
            )))
        }
    }
    Ok(out)
}

/// The shuffle bracket map extended linearly over a combination of plain
/// index words.
pub fn shuffle_bracket_lincomb(lc: &LinComb<Index>) -> Result<LinComb<BiIndex>> {
    let mut out = LinComb::zero();
    for (w, c) in lc.iter() {
        for (v, d) in shuffle_bracket(w)?.iter() {
            out.add_term(v.clone(), Rational::from(c * d));
        }
    }
    Ok(out)
}

// --- evaluation ----------------------------------------------------------

/// The evaluation homomorphism: the linear extension of the bi-bracket
/// series map to combinations of words, truncated at `order`.
pub fn eval_hom(lc: &LinComb<BiIndex>, order: usize) -> QSeries {
    let mut out = QSeries::zero(order);
    for (w, c) in lc.iter() {
        out = out.add(&bibracket_series(w, order).scale(c));
    }
    out
}

/// Evaluation of a combination of plain index words.
pub fn eval_hom_index(lc: &LinComb<Index>, order: usize) -> QSeries {
    eval_hom(&lc.into_biwords(), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::bracket_series;
    use crate::exact::rat;

    fn idx(parts: &[u32]) -> Index {
        Index::new(parts.to_vec()).unwrap()
    }

    fn bidx(parts: &[(u32, u32)]) -> BiIndex {
        BiIndex::new(parts.to_vec()).unwrap()
    }

    fn z(s: u32) -> Index {
        idx(&[s])
    }

    #[test]
    fn stuffle_two_letters() {
        let got = stuffle(&z(2), &z(3));
        let mut want = LinComb::single(idx(&[2, 3]));
        want.add_term(idx(&[3, 2]), rat(1, 1));
        want.add_term(idx(&[5]), rat(1, 1));
        assert_eq!(got, want);
    }

    #[test]
    fn stuffle_length_one_times_two() {
        let got = stuffle(&z(3), &idx(&[2, 1]));
        let mut want = LinComb::single(idx(&[3, 2, 1]));
        want.add_term(idx(&[2, 3, 1]), rat(1, 1));
        want.add_term(idx(&[2, 1, 3]), rat(1, 1));
        want.add_term(idx(&[5, 1]), rat(1, 1));
        want.add_term(idx(&[2, 4]), rat(1, 1));
        assert_eq!(got, want);
    }

    #[test]
    fn shuffle_two_letters() {
        let got = shuffle(&z(2), &z(3));
        let mut want = LinComb::single(idx(&[2, 3]));
        want.add_term(idx(&[3, 2]), rat(3, 1));
        want.add_term(idx(&[4, 1]), rat(6, 1));
        assert_eq!(got, want);
        // ζ(3)·ζ(2,1) analogue at the word level.
        let got = shuffle(&z(3), &idx(&[2, 1]));
        let mut want = LinComb::single(idx(&[2, 1, 3]));
        want.add_term(idx(&[2, 2, 2]), rat(1, 1));
        want.add_term(idx(&[2, 3, 1]), rat(2, 1));
        want.add_term(idx(&[3, 1, 2]), rat(2, 1));
        want.add_term(idx(&[3, 2, 1]), rat(5, 1));
        want.add_term(idx(&[4, 1, 1]), rat(9, 1));
        assert_eq!(got, want);
    }

    #[test]
    fn shuffle_len1_closed_form() {
        for (s1, s2) in [(2u32, 3u32), (2, 2), (1, 1), (1, 4), (3, 3), (2, 5)] {
            assert_eq!(
                shuffle_len1(s1, s2),
                shuffle(&z(s1), &z(s2)),
                "closed form differs from interleaving at ({s1},{s2})"
            );
        }
        assert_eq!(shuffle_len1(1, 1), LinComb::term(idx(&[1, 1]), rat(2, 1)));
        let mut want = LinComb::term(idx(&[2, 2]), rat(2, 1));
        want.add_term(idx(&[3, 1]), rat(4, 1));
        assert_eq!(shuffle_len1(2, 2), want);
    }

    #[test]
    fn products_commute_and_associate() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(3);
        let mut word = |rng: &mut StdRng, bi: bool| {
            let l = rng.gen_range(1..=2);
            let parts: Vec<(u32, u32)> = (0..l)
                .map(|_| {
                    (
                        rng.gen_range(1..=3),
                        if bi { rng.gen_range(0..=1) } else { 0 },
                    )
                })
                .collect();
            bidx(&parts)
        };
        for _ in 0..8 {
            let (u, v, w) = (
                word(&mut rng, true),
                word(&mut rng, true),
                word(&mut rng, true),
            );
            assert_eq!(boxast(&u, &v), boxast(&v, &u));
            assert_eq!(
                boxast_lincomb(&boxast(&u, &v), &LinComb::single(w.clone())),
                boxast_lincomb(&LinComb::single(u.clone()), &boxast(&v, &w))
            );
        }
        for _ in 0..8 {
            let ui = word(&mut rng, false).as_index().unwrap();
            let vi = word(&mut rng, false).as_index().unwrap();
            let wi = word(&mut rng, false).as_index().unwrap();
            assert_eq!(stuffle(&ui, &vi), stuffle(&vi, &ui));
            assert_eq!(shuffle(&ui, &vi), shuffle(&vi, &ui));
            assert_eq!(
                stuffle_lincomb(&stuffle(&ui, &vi), &LinComb::single(wi.clone())),
                stuffle_lincomb(&LinComb::single(ui.clone()), &stuffle(&vi, &wi))
            );
            assert_eq!(
                shuffle_lincomb(&shuffle(&ui, &vi), &LinComb::single(wi.clone())),
                shuffle_lincomb(&LinComb::single(ui.clone()), &shuffle(&vi, &wi))
            );
        }
    }

    #[test]
    fn boxast_paper_example() {
        // [3] ⊠∗ [2,1] expands into the eight-term combination.
        let got = boxast(&BiIndex::from(&z(3)), &BiIndex::from(&idx(&[2, 1])));
        let mut want = LinComb::single(bidx(&[(3, 0), (2, 0), (1, 0)]));
        want.add_term(bidx(&[(2, 0), (3, 0), (1, 0)]), rat(1, 1));
        want.add_term(bidx(&[(2, 0), (1, 0), (3, 0)]), rat(1, 1));
        want.add_term(bidx(&[(5, 0), (1, 0)]), rat(1, 1));
        want.add_term(bidx(&[(2, 0), (4, 0)]), rat(1, 1));
        want.add_term(bidx(&[(2, 0), (2, 0)]), rat(1, 12));
        want.add_term(bidx(&[(2, 0), (3, 0)]), rat(-1, 2));
        want.add_term(bidx(&[(3, 0), (1, 0)]), rat(-1, 12));
        assert_eq!(got, want);
    }

    #[test]
    fn eval_hom_is_multiplicative_on_examples() {
        let n = 30;
        // [2]·[3]
        let prod = eval_hom(&boxast(&BiIndex::from(&z(2)), &BiIndex::from(&z(3))), n);
        assert_eq!(prod, bracket_series(&z(2), n).mul(&bracket_series(&z(3), n)));
        // [1]·[1] = 2[1,1] + [2] - [1]
        let sq = eval_hom(&boxast(&BiIndex::from(&z(1)), &BiIndex::from(&z(1))), n);
        let direct = bracket_series(&z(1), n).mul(&bracket_series(&z(1), n));
        assert_eq!(sq, direct);
        let mut expect = bracket_series(&idx(&[1, 1]), n).scale(&rat(2, 1));
        expect = expect.add(&bracket_series(&z(2), n));
        expect = expect.sub(&bracket_series(&z(1), n));
        assert_eq!(direct, expect);
        // [1]·[2,1] = [1,2,1] + 2[2,1,1] - (3/2)[2,1] + [2,2] + [3,1]
        let p = eval_hom(
            &boxast(&BiIndex::from(&z(1)), &BiIndex::from(&idx(&[2, 1]))),
            n,
        );
        assert_eq!(
            p,
            bracket_series(&z(1), n).mul(&bracket_series(&idx(&[2, 1]), n))
        );
        let mut expect = bracket_series(&idx(&[1, 2, 1]), n);
        expect = expect.add(&bracket_series(&idx(&[2, 1, 1]), n).scale(&rat(2, 1)));
        expect = expect.add(&bracket_series(&idx(&[2, 1]), n).scale(&rat(-3, 2)));
        expect = expect.add(&bracket_series(&idx(&[2, 2]), n));
        expect = expect.add(&bracket_series(&idx(&[3, 1]), n));
        assert_eq!(p, expect);
        // Empty word maps to 1.
        assert_eq!(
            eval_hom(&LinComb::single(BiIndex::empty()), 5),
            QSeries::one(5)
        );
    }

    #[test]
    fn partition_involution_single_letter() {
        for s in 1..=5u32 {
            for r in 0..=4u32 {
                let got = partition_involution(&BiIndex::single(s, r));
                assert_eq!(
                    got,
                    LinComb::single(BiIndex::single(r + 1, s - 1)),
                    "P(z_({s},{r}))"
                );
            }
        }
    }

    #[test]
    fn partition_involution_2200() {
        // P(z_{2,0} z_{2,0}) = z_{1,1} z_{1,1} - 2 z_{1,0} z_{1,2}
        let got = partition_involution(&bidx(&[(2, 0), (2, 0)]));
        let mut want = LinComb::single(bidx(&[(1, 1), (1, 1)]));
        want.add_term(bidx(&[(1, 0), (1, 2)]), rat(-2, 1));
        assert_eq!(got, want);
    }

    #[test]
    fn partition_involution_matches_length_two_closed_form() {
        // Independent oracle: the explicit double-sum formula in length two.
        for s1 in 1..=3u32 {
            for s2 in 1..=3u32 {
                for r1 in 0..=2u32 {
                    for r2 in 0..=2u32 {
                        if s1 + s2 + r1 + r2 > 7 {
                            continue;
                        }
                        let got = partition_involution(&bidx(&[(s1, r1), (s2, r2)]));
                        let mut want = LinComb::zero();
                        for j in 0..=r1 {
                            for k in 0..=(s2 - 1) {
                                let mut c = Rational::from(binom((s1 - 1 + k) as u64, k as u64));
                                c *= Rational::from(binom((r2 + j) as u64, j as u64));
                                if k % 2 == 1 {
                                    c = -c;
                                }
                                want.add_term(
                                    bidx(&[(r2 + j + 1, s2 - 1 - k), (r1 - j + 1, s1 - 1 + k)]),
                                    c,
                                );
                            }
                        }
                        assert_eq!(got, want, "closed form mismatch at ({s1},{s2};{r1},{r2})");
                    }
                }
            }
        }
    }

    #[test]
    fn partition_involution_is_involutive_and_series_invariant() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..25 {
            let l = rng.gen_range(1..=3usize);
            let mut parts = Vec::new();
            for _ in 0..l {
                parts.push((rng.gen_range(1..=2u32), rng.gen_range(0..=1u32)));
            }
            let w = bidx(&parts);
            if w.total_weight() > 6 {
                continue;
            }
            let p = partition_involution(&w);
            assert_eq!(
                partition_involution_lincomb(&p),
                LinComb::single(w.clone()),
                "P(P({w})) != {w}"
            );
            assert_eq!(
                eval_hom(&p, 30),
                bibracket_series(&w, 30),
                "series not P-invariant for {w}"
            );
        }
    }

    #[test]
    fn second_product_length_one_examples() {
        // [2]·[3] = [2,3] + 3[3,2] + 6[4,1] + 3 mb(4;1) - 3[4]
        let got = second_product(&BiIndex::from(&z(2)), &BiIndex::from(&z(3)));
        let mut want = LinComb::single(bidx(&[(2, 0), (3, 0)]));
        want.add_term(bidx(&[(3, 0), (2, 0)]), rat(3, 1));
        want.add_term(bidx(&[(4, 0), (1, 0)]), rat(6, 1));
        want.add_term(bidx(&[(4, 1)]), rat(3, 1));
        want.add_term(bidx(&[(4, 0)]), rat(-3, 1));
        assert_eq!(got, want);
    }

    #[test]
    fn second_product_length_one_closed_form() {
        // The explicit shuffle-analogue formula for mb(s1;r1)·mb(s2;r2).
        for (s1, r1, s2, r2) in [
            (2u32, 0u32, 3u32, 0u32),
            (2, 1, 2, 0),
            (1, 1, 2, 1),
            (3, 0, 2, 2),
            (1, 0, 1, 0),
        ] {
            let got = second_product(&BiIndex::single(s1, r1), &BiIndex::single(s2, r2));
            let mut want = LinComb::zero();
            for j in 1..=s1 {
                for k in 0..=r2 {
                    let mut c = Rational::from(binom(
                        (s1 + s2 - j - 1) as u64,
                        (s1 - j) as u64,
                    ));
                    c *= Rational::from(binom((r1 + r2 - k) as u64, r1 as u64));
                    if (r2 - k) % 2 == 1 {
                        c = -c;
                    }
                    want.add_term(bidx(&[(s1 + s2 - j, k), (j, r1 + r2 - k)]), c);
                }
            }
            for j in 1..=s2 {
                for k in 0..=r1 {
                    let mut c = Rational::from(binom(
                        (s1 + s2 - j - 1) as u64,
                        (s1 - 1) as u64,
                    ));
                    c *= Rational::from(binom((r1 + r2 - k) as u64, (r1 - k) as u64));
                    if (r1 - k) % 2 == 1 {
                        c = -c;
                    }
                    want.add_term(bidx(&[(s1 + s2 - j, k), (j, r1 + r2 - k)]), c);
                }
            }
            let front = Rational::from(binom((s1 + s2 - 2) as u64, (s1 - 1) as u64));
            want.add_term(bidx(&[(s1 + s2 - 1, r1 + r2 + 1)]), front.clone());
            for (ra, rb) in [(r1, r2), (r2, r1)] {
                for j in 0..=ra {
                    let m = r1 + r2 - j + 1;
                    let mut c = Rational::from((
                        binom((r1 + r2 - j) as u64, (ra - j) as u64),
                        crate::exact::factorial(m),
                    ));
                    c *= crate::exact::bernoulli(m);
                    if rb % 2 == 1 {
                        c = -c;
                    }
                    c *= front.clone();
                    want.add_term(bidx(&[(s1 + s2 - 1, j)]), c);
                }
            }
            assert_eq!(got, want, "closed form mismatch at ({s1};{r1})·({s2};{r2})");
        }
    }

    #[test]
    fn second_product_paper_example_length_three() {
        // [3]·[2,1] via the partition route.
        let got = second_product(&BiIndex::from(&z(3)), &BiIndex::from(&idx(&[2, 1])));
        let mut want = LinComb::single(bidx(&[(2, 0), (1, 0), (3, 0)]));
        want.add_term(bidx(&[(2, 0), (2, 0), (2, 0)]), rat(1, 1));
        want.add_term(bidx(&[(2, 0), (3, 0), (1, 0)]), rat(2, 1));
        want.add_term(bidx(&[(3, 0), (1, 0), (2, 0)]), rat(2, 1));
        want.add_term(bidx(&[(3, 0), (2, 0), (1, 0)]), rat(5, 1));
        want.add_term(bidx(&[(4, 0), (1, 0), (1, 0)]), rat(9, 1));
        want.add_term(bidx(&[(2, 0), (3, 1)]), rat(1, 1));
        want.add_term(bidx(&[(3, 0), (2, 1)]), rat(2, 1));
        want.add_term(bidx(&[(4, 1), (1, 0)]), rat(3, 1));
        want.add_term(bidx(&[(2, 0), (3, 0)]), rat(-1, 1));
        want.add_term(bidx(&[(3, 0), (2, 0)]), rat(-2, 1));
        want.add_term(bidx(&[(4, 0), (1, 0)]), rat(-6, 1));
        assert_eq!(got, want);
    }

    #[test]
    fn second_product_matches_series_product() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..12 {
            let mut mk = |rng: &mut StdRng| {
                let l = rng.gen_range(1..=2);
                let parts: Vec<(u32, u32)> = (0..l)
                    .map(|_| (rng.gen_range(1..=2), rng.gen_range(0..=1)))
                    .collect();
                bidx(&parts)
            };
            let u = mk(&mut rng);
            let v = mk(&mut rng);
            if u.total_weight() + v.total_weight() > 6 {
                continue;
            }
            let n = 30;
            assert_eq!(
                eval_hom(&second_product(&u, &v), n),
                bibracket_series(&u, n).mul(&bibracket_series(&v, n)),
                "second product is not multiplicative on {u}, {v}"
            );
        }
    }

    #[test]
    fn shuffle_bracket_basics() {
        // [5]^⧢ = [5]
        assert_eq!(
            shuffle_bracket(&z(5)).unwrap(),
            LinComb::single(BiIndex::from(&z(5)))
        );
        // [s1, 1]^⧢ = [s1,1] + (1/2)(mb(s1;1) - [s1])
        let got = shuffle_bracket(&idx(&[4, 1])).unwrap();
        let mut want = LinComb::single(bidx(&[(4, 0), (1, 0)]));
        want.add_term(bidx(&[(4, 1)]), rat(1, 2));
        want.add_term(bidx(&[(4, 0)]), rat(-1, 2));
        assert_eq!(got, want);
        // Interior entries >= 2 keep the plain word.
        assert_eq!(
            shuffle_bracket(&idx(&[1, 2, 3])).unwrap(),
            LinComb::single(BiIndex::from(&idx(&[1, 2, 3])))
        );
        assert!(shuffle_bracket(&idx(&[1, 1, 1, 1, 1])).is_err());
    }

    #[test]
    fn shuffle_bracket_homomorphism_instances() {
        let n = 30;
        // series([2,3]^⧢ + 3[3,2]^⧢ + 6[4,1]^⧢) = [2]·[3]
        let comb = shuffle_bracket_lincomb(&shuffle(&z(2), &z(3))).unwrap();
        assert_eq!(
            eval_hom(&comb, n),
            bracket_series(&z(2), n).mul(&bracket_series(&z(3), n))
        );
        // Pairs whose shuffles reach lengths 3 and 4 with trailing ones.
        for (u, v) in [
            (z(2), idx(&[1])),
            (z(1), idx(&[1])),
            (z(2), idx(&[1, 1])),
            (z(3), idx(&[1, 1])),
            (idx(&[1, 1]), idx(&[1, 1])),
            (z(2), idx(&[2, 1, 1])),
            (z(1), idx(&[2, 1])),
            (z(1), idx(&[1, 1, 1])),
            (idx(&[2, 1]), idx(&[2, 1])),
            (z(2), idx(&[1, 1, 1])),
            (idx(&[2, 1]), idx(&[1, 1])),
        ] {
            let lhs = eval_hom(&shuffle_bracket_lincomb(&shuffle(&u, &v)).unwrap(), n);
            let rhs = eval_hom(&shuffle_bracket_lincomb(&LinComb::single(u.clone())).unwrap(), n)
                .mul(&eval_hom(
                    &shuffle_bracket_lincomb(&LinComb::single(v.clone())).unwrap(),
                    n,
                ));
            assert_eq!(lhs, rhs, "shuffle bracket fails on {u} ⧢ {v}");
        }
    }

    #[test]
    fn derivative_identity_sh23() {
        // [2]·[3] = [2,3] + 3[3,2] + 6[4,1] - 3[4] + d[3]
        let n = 40;
        let lhs = bracket_series(&z(2), n).mul(&bracket_series(&z(3), n));
        let mut rhs = bracket_series(&idx(&[2, 3]), n);
        rhs = rhs.add(&bracket_series(&idx(&[3, 2]), n).scale(&rat(3, 1)));
        rhs = rhs.add(&bracket_series(&idx(&[4, 1]), n).scale(&rat(6, 1)));
        rhs = rhs.sub(&bracket_series(&z(4), n).scale(&rat(3, 1)));
        rhs = rhs.add(&bracket_series(&z(3), n).derive());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_formula_family() {
        // C(s, s1-1) d[s]/s = [s1][s2] + C(s, s1-1)[s+1]
        //   - Σ_{a+b=s+2} (C(a-1, s1-1) + C(a-1, s2-1)) [a,b],  s = s1+s2-2.
        let n = 25;
        for s1 in 1..=5u32 {
            for s2 in s1..=5u32 {
                if s1 + s2 <= 2 || s1 + s2 > 8 {
                    continue;
                }
                let s = s1 + s2 - 2;
                let front = Rational::from(binom(s as u64, (s1 - 1) as u64));
                let lhs = bracket_series(&z(s), n)
                    .derive()
                    .scale(&(front.clone() / Rational::from(s)));
                let mut rhs = bracket_series(&z(s1), n).mul(&bracket_series(&z(s2), n));
                rhs = rhs.add(&bracket_series(&z(s + 1), n).scale(&front));
                for a in 1..=(s + 1) {
                    let b = s + 2 - a;
                    let mut c = Rational::from(binom((a - 1) as u64, (s1 - 1) as u64));
                    c += Rational::from(binom((a - 1) as u64, (s2 - 1) as u64));
                    rhs = rhs.sub(&bracket_series(&idx(&[a, b]), n).scale(&c));
                }
                assert_eq!(lhs, rhs, "derivative formula fails at ({s1},{s2})");
            }
        }
    }

    #[test]
    fn lincomb_json_is_canonical() {
        let mut lc = LinComb::zero();
        lc.add_term(bidx(&[(2, 0), (1, 1)]), rat(-1, 3));
        lc.add_term(bidx(&[(5, 0)]), rat(2, 1));
        let j = lc.to_json();
        let arr = j.as_array().unwrap();
        assert_eq!(arr[0]["word"], "5");
        assert_eq!(arr[0]["coeff"], "2");
        assert_eq!(arr[1]["word"], "2,1|0,1");
        assert_eq!(arr[1]["coeff"], "-1/3");
    }
}
