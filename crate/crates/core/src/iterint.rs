//! Formal iterated integrals and word regularization.
//!
//! Symbols I(a_0; a_1,...,a_N; a_{N+1}) with letters in {0, 1} are reduced
//! eagerly to the basis I(s_1,...,s_r) of the quotient by I(1;0;0): the
//! empty-middle unit, the vanishing of equal endpoints, path inversion and
//! the trailing-zero reduction leave exactly the index words. On that basis
//! live the Goncharov coproduct and the deconcatenation coproduct, and the
//! shuffle/stuffle regularizations that express any word as a polynomial in
//! T = (image of z_1) with admissible-word coefficients.

use std::collections::BTreeMap;

use rug::Rational;

use crate::brackets::Index;
use crate::exact::binom;
use crate::words::{shuffle_lincomb, stuffle_lincomb, LinComb};

/// Reduction of the trailing-zero symbols into the plain basis:
/// I_n(s_1,...,s_r) = (-1)^n Σ C(k_1-1, s_1-1)...C(k_r-1, s_r-1) I(k),
/// summed over k_1 + ... + k_r = s_1 + ... + s_r + n with all k_j >= 1.
pub fn in_reduce(n: u32, s: &Index) -> LinComb<Index> {
    if s.is_empty() {
        return if n == 0 {
            LinComb::single(Index::empty())
        } else {
            LinComb::zero()
        };
    }
    let total = s.weight() + n;
    let r = s.len();
    let mut out = LinComb::zero();
    // Walk the compositions k of `total` into r positive parts; the binomial
    // kills everything with k_j < s_j.
    fn walk(
        s: &[u32],
        j: usize,
        remaining: u32,
        acc: Rational,
        prefix: &mut Vec<u32>,
        out: &mut LinComb<Index>,
        negate: bool,
    ) {
        let left = (s.len() - j - 1) as u32;
        if j + 1 == s.len() {
            let k = remaining;
            if k < 1 {
                return;
            }
            let c = acc * Rational::from(binom((k - 1) as u64, (s[j] - 1) as u64));
            if c.cmp0() != std::cmp::Ordering::Equal {
                prefix.push(k);
                let c = if negate { -c } else { c };
                out.add_term(Index::new(prefix.clone()).unwrap(), c);
                prefix.pop();
            }
            return;
        }
        for k in 1..=(remaining - left) {
            let c = Rational::from(binom((k - 1) as u64, (s[j] - 1) as u64));
            if c.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            prefix.push(k);
            walk(s, j + 1, remaining - k, acc.clone() * c, prefix, out, negate);
            prefix.pop();
        }
    }
    walk(
        s.parts(),
        0,
        total,
        Rational::from(1),
        &mut Vec::with_capacity(r),
        &mut out,
        n % 2 == 1,
    );
    out
}

/// Parse a {0,1} middle word of a symbol with endpoints (1, 0) into the
/// basis: blocks 0^{e}1 become letters z_{e+1}, trailing zeros reduce via
/// [`in_reduce`].
fn parse_ten(letters: &[u8]) -> LinComb<Index> {
    let mut parts = Vec::new();
    let mut zeros = 0u32;
    for &a in letters {
        if a == 1 {
            parts.push(zeros + 1);
            zeros = 0;
        } else {
            zeros += 1;
        }
    }
    in_reduce(zeros, &Index::new(parts).unwrap())
}

/// Normalize the symbol I(x; letters; y) into the basis.
pub fn normalize_symbol(x: u8, letters: &[u8], y: u8) -> LinComb<Index> {
    if letters.is_empty() {
        return LinComb::single(Index::empty());
    }
    if x == y {
        return LinComb::zero();
    }
    if (x, y) == (1, 0) {
        parse_ten(letters)
    } else {
        // Path inversion: I(0; w; 1) = (-1)^{|w|} I(1; reverse w; 0).
        let rev: Vec<u8> = letters.iter().rev().copied().collect();
        let lc = parse_ten(&rev);
        if letters.len() % 2 == 1 {
            lc.scale(&Rational::from(-1))
        } else {
            lc
        }
    }
}

/// A finite ℚ-linear combination of ordered pairs of basis words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntTensor {
    terms: BTreeMap<(Index, Index), Rational>,
}

impl IntTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, left: Index, right: Index, c: Rational) {
        if c.cmp0() == std::cmp::Ordering::Equal {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((left, right)) {
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

    pub fn iter(&self) -> impl Iterator<Item = (&(Index, Index), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, left: &Index, right: &Index) -> Rational {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_default()
    }

    /// Componentwise shuffle product: (a⊗b)(c⊗d) = (a⧢c)⊗(b⧢d).
    pub fn shuffle_mul(&self, other: &IntTensor) -> IntTensor {
        let mut out = IntTensor::zero();
        for ((a, b), c1) in &self.terms {
            for ((c, d), c2) in &other.terms {
                let left = shuffle_lincomb(&LinComb::single(a.clone()), &LinComb::single(c.clone()));
                let right =
                    shuffle_lincomb(&LinComb::single(b.clone()), &LinComb::single(d.clone()));
                for (lw, lc) in left.iter() {
                    for (rw, rc) in right.iter() {
                        out.add_term(
                            lw.clone(),
                            rw.clone(),
                            Rational::from(lc * rc) * Rational::from(c1 * c2),
                        );
                    }
                }
            }
        }
        out
    }

    /// `[{"left": "...", "right": "...", "coeff": "num/den"}, ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|((l, r), c)| {
                    serde_json::json!({
                        "left": l.to_string(),
                        "right": r.to_string(),
                        "coeff": c.to_string(),
                    })
                })
                .collect(),
        )
    }
}

/// The letter string of the basis word I(s_1,...,s_r): each s_j contributes
/// s_j - 1 zeros followed by a one.
fn letters_of(s: &Index) -> Vec<u8> {
    let mut out = Vec::with_capacity(s.weight() as usize);
    for &p in s.parts() {
        for _ in 0..p - 1 {
            out.push(0);
        }
        out.push(1);
    }
    out
}

/// The Goncharov coproduct of a basis word: the sum over all subsets of
/// marked middle letters of (the symbol through the marks) ⊗ (the product
/// of the intermediate path segments), everything normalized to the basis.
pub fn goncharov_coproduct(w: &Index) -> IntTensor {
    let letters = letters_of(w);
    let n = letters.len();
    let mut out = IntTensor::zero();
    // Boundary values a_0 = 1 and a_{n+1} = 0.
    for mask in 0u64..(1u64 << n) {
        let chosen: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let left_letters: Vec<u8> = chosen.iter().map(|&i| letters[i]).collect();
        let left = normalize_symbol(1, &left_letters, 0);
        if left.is_zero() {
            continue;
        }
        // Segment endpoints: positions 0 (value 1), chosen..., n+1 (value 0).
        let mut right = LinComb::single(Index::empty());
        let mut boundary_pos: Vec<usize> = Vec::with_capacity(chosen.len() + 2);
        boundary_pos.push(0);
        boundary_pos.extend(chosen.iter().map(|&i| i + 1));
        boundary_pos.push(n + 1);
        let value_at = |p: usize| -> u8 {
            if p == 0 {
                1
            } else if p == n + 1 {
                0
            } else {
                letters[p - 1]
            }
        };
        for win in boundary_pos.windows(2) {
            let (lo, hi) = (win[0], win[1]);
            let middle: Vec<u8> = (lo + 1..hi).map(|p| letters[p - 1]).collect();
            let factor = normalize_symbol(value_at(lo), &middle, value_at(hi));
            if factor.is_zero() {
                right = LinComb::zero();
                break;
            }
            right = shuffle_lincomb(&right, &factor);
        }
        for (lw, lc) in left.iter() {
            for (rw, rc) in right.iter() {
                out.add_term(lw.clone(), rw.clone(), Rational::from(lc * rc));
            }
        }
    }
    out
}

/// The deconcatenation coproduct Δ_H(w) = Σ_{uv=w} u ⊗ v, including the
/// two splits with an empty factor.
pub fn deconcat_coproduct(w: &Index) -> IntTensor {
    let mut out = IntTensor::zero();
    for cut in 0..=w.len() {
        let u = Index::new(w.parts()[..cut].to_vec()).unwrap();
        let v = Index::new(w.parts()[cut..].to_vec()).unwrap();
        out.add_term(u, v, Rational::from(1));
    }
    out
}

// --- regularization -------------------------------------------------------

/// Which product the regularization is a homomorphism for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Product {
    Shuffle,
    Stuffle,
}

fn word_product(p: Product, u: &LinComb<Index>, v: &LinComb<Index>) -> LinComb<Index> {
    match p {
        Product::Shuffle => shuffle_lincomb(u, v),
        Product::Stuffle => stuffle_lincomb(u, v),
    }
}

/// A polynomial in the formal variable T whose coefficients are admissible
/// word combinations; the image of a word under regularization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegPoly {
    coeffs: Vec<LinComb<Index>>,
}

impl RegPoly {
    pub fn zero() -> Self {
        RegPoly { coeffs: vec![] }
    }

    pub fn constant(lc: LinComb<Index>) -> Self {
        RegPoly { coeffs: vec![lc] }
    }

    /// Coefficient of T^i.
    pub fn coeff(&self, i: usize) -> LinComb<Index> {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// The specialization T = 0.
    pub fn at_zero(&self) -> LinComb<Index> {
        self.coeff(0)
    }

    pub fn add(&self, other: &RegPoly) -> RegPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i).add(&other.coeff(i)));
        }
        RegPoly { coeffs }.trim()
    }

    pub fn scale(&self, c: &Rational) -> RegPoly {
        RegPoly {
            coeffs: self.coeffs.iter().map(|lc| lc.scale(c)).collect(),
        }
        .trim()
    }

    /// Multiply by T.
    pub fn shift(&self) -> RegPoly {
        let mut coeffs = vec![LinComb::zero()];
        coeffs.extend(self.coeffs.iter().cloned());
        RegPoly { coeffs }.trim()
    }

    /// Product of two regularized images, with the given word product on
    /// coefficients and the ordinary product on powers of T.
    pub fn mul(&self, other: &RegPoly, p: Product) -> RegPoly {
        let mut coeffs =
            vec![LinComb::zero(); (self.coeffs.len() + other.coeffs.len()).saturating_sub(1).max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&word_product(p, a, b));
            }
        }
        RegPoly { coeffs }.trim()
    }

    fn trim(mut self) -> RegPoly {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }
}

fn leading_ones(w: &Index) -> usize {
    w.parts().iter().take_while(|&&s| s == 1).count()
}

fn regularize_word(p: Product, w: &Index) -> RegPoly {
    if w.is_admissible() {
        // Covers the empty word and anything starting with s >= 2; interior
        // and trailing ones stay untouched.
        return RegPoly::constant(LinComb::single(w.clone()));
    }
    let m = leading_ones(w);
    let u = Index::new(w.parts()[1..].to_vec()).unwrap();
    // z_1 ⊙ u = m·w + R, where every word of R is shorter or has fewer
    // leading ones; so reg(w) = (T·reg(u) - reg(R)) / m.
    let z1 = Index::new(vec![1]).unwrap();
    let mut rest = word_product(p, &LinComb::single(z1), &LinComb::single(u.clone()));
    rest.add_term(w.clone(), Rational::from(-(m as i64)));
    let reg_rest = regularize_lincomb(p, &rest);
    regularize_word(p, &u)
        .shift()
        .add(&reg_rest.scale(&Rational::from(-1)))
        .scale(&Rational::from((1, m as i64)))
}

fn regularize_lincomb(p: Product, lc: &LinComb<Index>) -> RegPoly {
    let mut out = RegPoly::zero();
    for (w, c) in lc.iter() {
        out = out.add(&regularize_word(p, w).scale(c));
    }
    out
}

/// Express a word as a ⧢-polynomial in z_1 over the admissible words:
/// reg(z_1) = T, reg is the identity on admissible words, and reg is a
/// ⧢-homomorphism. The T = 0 specialization is the shuffle-regularized
/// evaluation map.
pub fn shuffle_regularize(w: &Index) -> RegPoly {
    regularize_word(Product::Shuffle, w)
}

/// The stuffle counterpart of [`shuffle_regularize`].
pub fn stuffle_regularize(w: &Index) -> RegPoly {
    regularize_word(Product::Stuffle, w)
}

/// Regularization extended linearly.
pub fn regularize(p: Product, lc: &LinComb<Index>) -> RegPoly {
    regularize_lincomb(p, lc)
}

/// Substitute z_1 back for T and expand with the word product; inverse of
/// regularization (used by the reconstruction tests).
pub fn reg_substitute(p: Product, poly: &RegPoly) -> LinComb<Index> {
    let z1 = LinComb::single(Index::new(vec![1]).unwrap());
    let mut out = LinComb::zero();
    let mut z1_pow = LinComb::single(Index::empty());
    for i in 0..=poly.degree() {
        out = out.add(&word_product(p, &poly.coeff(i), &z1_pow));
        z1_pow = word_product(p, &z1_pow, &z1);
    }
    out
}
