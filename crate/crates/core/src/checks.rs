//! Named verification bundles: the exact identity set, the randomized
//! homomorphism and partition suites, coproduct checks, the numeric
//! Eisenstein triangle, the q → 1 suite and relation discovery. The CLI
//! `suite` verb runs these; the acceptance tests assert on them.

use std::time::Instant;

use rug::{Complex, Float, Rational};

use crate::brackets::{bibracket_series, bracket_series, BiIndex, Index};
use crate::exact::{binom, rat};
use crate::iterint::{goncharov_coproduct, Product};
use crate::mes::{
    g_shuffle, g_star_m, mes_fourier, mes_lattice, mzv_lincomb, mzv_numeric, zk_limit, Precision,
};
use crate::qseries::{delta_series, QSeries};
use crate::relations::{delta_family, find_relations, SeriesFamily};
use crate::words::{boxast, eval_hom, partition_involution, partition_involution_lincomb, LinComb};
use crate::Result;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl Check {
    fn run(name: &str, f: impl FnOnce() -> (bool, String)) -> Check {
        let start = Instant::now();
        let (passed, detail) = f();
        Check {
            name: name.to_string(),
            passed,
            detail,
            millis: start.elapsed().as_millis(),
        }
    }
}

/// Deterministic 64-bit generator for the randomized suites.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.wrapping_add(0x9e3779b97f4a7c15))
    }

    pub fn next(&mut self) -> u64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// A random bi-index word of the given total weight (letters s >= 1, r >= 0).
pub fn random_biword(rng: &mut Rng, total_weight: u32) -> BiIndex {
    let mut parts: Vec<(u32, u32)> = Vec::new();
    let mut budget = total_weight;
    while budget > 0 {
        let s = 1 + rng.below(budget as u64) as u32;
        budget -= s;
        let r = if budget > 0 {
            rng.below(budget as u64 + 1) as u32
        } else {
            0
        };
        budget -= r;
        parts.push((s, r));
    }
    BiIndex::new(parts).unwrap()
}

/// All bi-index words of exactly the given total weight.
pub fn biwords_of_weight(total: u32) -> Vec<BiIndex> {
    fn rec(budget: u32, acc: &mut Vec<(u32, u32)>, out: &mut Vec<BiIndex>) {
        if budget == 0 {
            if !acc.is_empty() {
                out.push(BiIndex::new(acc.clone()).unwrap());
            }
            return;
        }
        for s in 1..=budget {
            for r in 0..=(budget - s) {
                acc.push((s, r));
                rec(budget - s - r, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(total, &mut Vec::new(), &mut out);
    out
}

fn idx(parts: &[u32]) -> Index {
    Index::new(parts.to_vec()).unwrap()
}

fn bidx(parts: &[(u32, u32)]) -> BiIndex {
    BiIndex::new(parts.to_vec()).unwrap()
}

fn combo(order: usize, terms: &[(&[u32], Rational)]) -> QSeries {
    let mut acc = QSeries::zero(order);
    for (parts, c) in terms {
        acc = acc.add(&bracket_series(&idx(parts), order).scale(c));
    }
    acc
}

/// The exact identity bundle: derivative identities, the weight-8 relation,
/// the two product expressions of [3]·[2,1], the conjugation identity, the
/// weight-4 bi-bracket identity, the derivative formula family up to weight
/// ten, and the discriminant representation to order 60.
pub fn suite_identities() -> Vec<Check> {
    let n = 40;
    let mut out = Vec::new();
    out.push(Check::run("d[1] = [3] + (1/2)[2] - [2,1]", || {
        let lhs = bracket_series(&idx(&[1]), n).derive();
        let rhs = combo(n, &[(&[3], rat(1, 1)), (&[2], rat(1, 2)), (&[2, 1], rat(-1, 1))]);
        (lhs == rhs, String::new())
    }));
    out.push(Check::run("d[2] = [4] + 2[3] - (1/6)[2] - 4[3,1]", || {
        let lhs = bracket_series(&idx(&[2]), n).derive();
        let rhs = combo(
            n,
            &[
                (&[4], rat(1, 1)),
                (&[3], rat(2, 1)),
                (&[2], rat(-1, 6)),
                (&[3, 1], rat(-4, 1)),
            ],
        );
        (lhs == rhs, String::new())
    }));
    out.push(Check::run(
        "d[2] = 2[4] + [3] + (1/6)[2] - 2[2,2] - 2[3,1]",
        || {
            let lhs = bracket_series(&idx(&[2]), n).derive();
            let rhs = combo(
                n,
                &[
                    (&[4], rat(2, 1)),
                    (&[3], rat(1, 1)),
                    (&[2], rat(1, 6)),
                    (&[2, 2], rat(-2, 1)),
                    (&[3, 1], rat(-2, 1)),
                ],
            );
            (lhs == rhs, String::new())
        },
    ));
    out.push(Check::run(
        "d[1,1] = [3,1] + (3/2)[2,1] + (1/2)[1,2] + [1,3] - 2[2,1,1] - [1,2,1]",
        || {
            let lhs = bracket_series(&idx(&[1, 1]), n).derive();
            let rhs = combo(
                n,
                &[
                    (&[3, 1], rat(1, 1)),
                    (&[2, 1], rat(3, 2)),
                    (&[1, 2], rat(1, 2)),
                    (&[1, 3], rat(1, 1)),
                    (&[2, 1, 1], rat(-2, 1)),
                    (&[1, 2, 1], rat(-1, 1)),
                ],
            );
            (lhs == rhs, String::new())
        },
    ));
    out.push(Check::run("[8] = (1/40)[4] - (1/252)[2] + 12[4,4]", || {
        let lhs = bracket_series(&idx(&[8]), n);
        let rhs = combo(
            n,
            &[
                (&[4], rat(1, 40)),
                (&[2], rat(-1, 252)),
                (&[4, 4], rat(12, 1)),
            ],
        );
        (lhs == rhs, String::new())
    }));
    out.push(Check::run(
        "[2]·[3] = [2,3] + 3[3,2] + 6[4,1] - 3[4] + d[3]",
        || {
            let lhs = bracket_series(&idx(&[2]), n).mul(&bracket_series(&idx(&[3]), n));
            let rhs = combo(
                n,
                &[
                    (&[2, 3], rat(1, 1)),
                    (&[3, 2], rat(3, 1)),
                    (&[4, 1], rat(6, 1)),
                    (&[4], rat(-3, 1)),
                ],
            )
            .add(&bracket_series(&idx(&[3]), n).derive());
            (lhs == rhs, String::new())
        },
    ));
    out.push(Check::run("[3]·[2,1]: quasi-shuffle route", || {
        let lhs = bracket_series(&idx(&[3]), n).mul(&bracket_series(&idx(&[2, 1]), n));
        let rhs = eval_hom(&boxast(&BiIndex::from(&idx(&[3])), &BiIndex::from(&idx(&[2, 1]))), n);
        (lhs == rhs, String::new())
    }));
    out.push(Check::run("[3]·[2,1]: partition route", || {
        let lhs = bracket_series(&idx(&[3]), n).mul(&bracket_series(&idx(&[2, 1]), n));
        let mut rhs = combo(
            n,
            &[
                (&[2, 1, 3], rat(1, 1)),
                (&[2, 2, 2], rat(1, 1)),
                (&[2, 3, 1], rat(2, 1)),
                (&[3, 1, 2], rat(2, 1)),
                (&[3, 2, 1], rat(5, 1)),
                (&[4, 1, 1], rat(9, 1)),
                (&[2, 3], rat(-1, 1)),
                (&[3, 2], rat(-2, 1)),
                (&[4, 1], rat(-6, 1)),
            ],
        );
        rhs = rhs.add(&bibracket_series(&bidx(&[(2, 0), (3, 1)]), n));
        rhs = rhs.add(&bibracket_series(&bidx(&[(3, 0), (2, 1)]), n).scale(&rat(2, 1)));
        rhs = rhs.add(&bibracket_series(&bidx(&[(4, 1), (1, 0)]), n).scale(&rat(3, 1)));
        (lhs == rhs, String::new())
    }));
    out.push(Check::run("[2,2] = mb(1,1;1,1) - 2 mb(1,1;0,2)", || {
        let lhs = bracket_series(&idx(&[2, 2]), n);
        let rhs = bibracket_series(&bidx(&[(1, 1), (1, 1)]), n)
            .sub(&bibracket_series(&bidx(&[(1, 0), (1, 2)]), n).scale(&rat(2, 1)));
        (lhs == rhs, String::new())
    }));
    out.push(Check::run(
        "[4] - [2,1,1] = (1/2)(d[1] + d[2]) - (1/3)[2] - [3] + mb(2,1;1,0)",
        || {
            let lhs = bracket_series(&idx(&[4]), n).sub(&bracket_series(&idx(&[2, 1, 1]), n));
            let mut rhs = bracket_series(&idx(&[1]), n)
                .derive()
                .add(&bracket_series(&idx(&[2]), n).derive())
                .scale(&rat(1, 2));
            rhs = rhs.add(&combo(n, &[(&[2], rat(-1, 3)), (&[3], rat(-1, 1))]));
            rhs = rhs.add(&bibracket_series(&bidx(&[(2, 1), (1, 0)]), n));
            (lhs == rhs, String::new())
        },
    ));
    out.push(Check::run("derivative formula family, weights <= 10", || {
        for s1 in 1..=9u32 {
            for s2 in s1..=9u32 {
                if s1 + s2 <= 2 || s1 + s2 > 10 {
                    continue;
                }
                let s = s1 + s2 - 2;
                let front = Rational::from(binom(s as u64, (s1 - 1) as u64));
                let lhs = bracket_series(&idx(&[s]), n)
                    .derive()
                    .scale(&(front.clone() / Rational::from(s)));
                let mut rhs = bracket_series(&idx(&[s1]), n).mul(&bracket_series(&idx(&[s2]), n));
                rhs = rhs.add(&bracket_series(&idx(&[s + 1]), n).scale(&front));
                for a in 1..=(s + 1) {
                    let b = s + 2 - a;
                    let mut c = Rational::from(binom((a - 1) as u64, (s1 - 1) as u64));
                    c += Rational::from(binom((a - 1) as u64, (s2 - 1) as u64));
                    rhs = rhs.sub(&bracket_series(&idx(&[a, b]), n).scale(&c));
                }
                if lhs != rhs {
                    return (false, format!("fails at ({s1},{s2})"));
                }
            }
        }
        (true, String::new())
    }));
    out.push(Check::run("discriminant bracket representation, order 60", || {
        let n = 60;
        let lhs = delta_series(n).scale(&Rational::from((-1, 64 * 5 * 691)));
        let rhs = combo(
            n,
            &[
                (&[5, 7], rat(168, 1)),
                (&[7, 5], rat(150, 1)),
                (&[9, 3], rat(28, 1)),
                (&[2], rat(1, 1408)),
                (&[4], rat(-83, 14400)),
                (&[6], rat(187, 6048)),
                (&[8], rat(-7, 120)),
                (&[12], rat(-5197, 691)),
            ],
        );
        (lhs == rhs, String::new())
    }));
    out
}

/// Golden series coefficients from the worked examples.
pub fn suite_golden_series() -> Vec<Check> {
    let cases: [(&[u32], usize, i64, &[i64]); 5] = [
        (&[2], 1, 1, &[1, 3, 4, 7, 6, 12, 8, 15]),
        (&[4, 2], 3, 6, &[1, 3, 15, 27, 78, 135]),
        (&[4, 4, 4], 6, 216, &[1, 9, 45, 190, 642, 1899]),
        (&[3, 1, 3, 1], 10, 4, &[1, 2, 8, 16, 43, 70]),
        (&[1, 2, 3, 4, 5], 15, 288, &[1, 17, 107, 512, 1985]),
    ];
    cases
        .into_iter()
        .map(|(parts, start, den, coeffs)| {
            Check::run(&format!("series of [{}]", idx(parts)), move || {
                let order = start + coeffs.len() - 1;
                let s = bracket_series(&idx(parts), order);
                for m in 0..start {
                    if s.coeff(m) != rat(0, 1) {
                        return (false, format!("nonzero below the gap at q^{m}"));
                    }
                }
                for (off, &c) in coeffs.iter().enumerate() {
                    if s.coeff(start + off) != rat(c, den) {
                        return (false, format!("coefficient of q^{}", start + off));
                    }
                }
                (true, String::new())
            })
        })
        .collect()
}

/// Randomized quasi-shuffle homomorphism suite: eval(u ⊠∗ v) = eval(u)·eval(v).
pub fn suite_homomorphism(pairs: usize, max_weight: u32, order: usize, seed: u64) -> Vec<Check> {
    vec![Check::run(
        &format!("{pairs} random pairs, weight <= {max_weight}, order {order}"),
        || {
            let mut rng = Rng::new(seed);
            for i in 0..pairs {
                let wu = 1 + rng.below(max_weight as u64 - 1) as u32;
                let wv = 1 + rng.below((max_weight - wu).max(1) as u64) as u32;
                let u = random_biword(&mut rng, wu);
                let v = random_biword(&mut rng, wv);
                let lhs = eval_hom(&boxast(&u, &v), order);
                let rhs = bibracket_series(&u, order).mul(&bibracket_series(&v, order));
                if lhs != rhs {
                    return (false, format!("pair {i}: ({u}) ⊠∗ ({v})"));
                }
            }
            (true, String::new())
        },
    )]
}

/// Partition relation suite over every bi-word up to the weight bound:
/// P ∘ P = id at the word level and series invariance of eval ∘ P.
pub fn suite_partition(max_weight: u32, order: usize) -> Vec<Check> {
    vec![
        Check::run(&format!("P∘P = id, all bi-words of weight <= {max_weight}"), || {
            for w in (1..=max_weight).flat_map(biwords_of_weight) {
                if partition_involution_lincomb(&partition_involution(&w))
                    != LinComb::single(w.clone())
                {
                    return (false, format!("P(P({w})) != {w}"));
                }
            }
            (true, String::new())
        }),
        Check::run(
            &format!("eval(P(w)) = eval(w), weight <= {max_weight}, order {order}"),
            || {
                for w in (1..=max_weight).flat_map(biwords_of_weight) {
                    if eval_hom(&partition_involution(&w), order) != bibracket_series(&w, order) {
                        return (false, format!("series differ for {w}"));
                    }
                }
                (true, String::new())
            },
        ),
    ]
}

/// Coproduct suite: the worked tensor, coassociativity and the shuffle
/// algebra-map property on low weights.
pub fn suite_coproduct() -> Vec<Check> {
    use crate::iterint::IntTensor;
    use crate::words::shuffle;
    let mut out = Vec::new();
    out.push(Check::run("Δ(I(3,2)) four-term tensor", || {
        let got = goncharov_coproduct(&idx(&[3, 2]));
        let mut want = IntTensor::zero();
        want.add_term(Index::empty(), idx(&[3, 2]), rat(1, 1));
        want.add_term(idx(&[2]), idx(&[3]), rat(3, 1));
        want.add_term(idx(&[3]), idx(&[2]), rat(2, 1));
        want.add_term(idx(&[3, 2]), Index::empty(), rat(1, 1));
        (got == want, String::new())
    }));
    out.push(Check::run("coassociativity, weight <= 4", || {
        use std::collections::BTreeMap;
        fn words_to(k: u32) -> Vec<Index> {
            fn rec(k: u32, pre: &mut Vec<u32>, out: &mut Vec<Index>) {
                if k == 0 {
                    out.push(Index::new(pre.clone()).unwrap());
                    return;
                }
                for f in 1..=k {
                    pre.push(f);
                    rec(k - f, pre, out);
                    pre.pop();
                }
            }
            let mut out = vec![];
            for w in 1..=k {
                rec(w, &mut vec![], &mut out);
            }
            out
        }
        for w in words_to(4) {
            let mut lhs: BTreeMap<(Index, Index, Index), Rational> = BTreeMap::new();
            let mut rhs = lhs.clone();
            for ((a, b), c) in goncharov_coproduct(&w).iter() {
                for ((a1, a2), d) in goncharov_coproduct(a).iter() {
                    *lhs.entry((a1.clone(), a2.clone(), b.clone())).or_default() +=
                        Rational::from(c * d);
                }
                for ((b1, b2), d) in goncharov_coproduct(b).iter() {
                    *rhs.entry((a.clone(), b1.clone(), b2.clone())).or_default() +=
                        Rational::from(c * d);
                }
            }
            lhs.retain(|_, c| c.cmp0() != std::cmp::Ordering::Equal);
            rhs.retain(|_, c| c.cmp0() != std::cmp::Ordering::Equal);
            if lhs != rhs {
                return (false, format!("coassociativity fails on {w}"));
            }
        }
        (true, String::new())
    }));
    out.push(Check::run("Δ is a ⧢-algebra map, weight <= 5", || {
        let mut pairs: Vec<(Index, Index)> = Vec::new();
        // exhaustive through total weight 4, exemplars at weight 5
        for wu in 1..=3u32 {
            for wv in 1..=(4 - wu) {
                for u in biwords_of_weight(wu) {
                    for v in biwords_of_weight(wv) {
                        if let (Some(ui), Some(vi)) = (u.as_index(), v.as_index()) {
                            pairs.push((ui, vi));
                        }
                    }
                }
            }
        }
        pairs.push((idx(&[2]), idx(&[3])));
        pairs.push((idx(&[2]), idx(&[2, 1])));
        for (u, v) in pairs {
            let mut lhs = IntTensor::zero();
            for (w, c) in shuffle(&u, &v).iter() {
                for ((l, r), d) in goncharov_coproduct(w).iter() {
                    lhs.add_term(l.clone(), r.clone(), Rational::from(c * d));
                }
            }
            let rhs = goncharov_coproduct(&u).shuffle_mul(&goncharov_coproduct(&v));
            if lhs != rhs {
                return (false, format!("algebra map fails on {u} ⧢ {v}"));
            }
        }
        (true, String::new())
    }));
    out.push(Check::run("regularization pins z1·z2", || {
        use crate::iterint::{shuffle_regularize, stuffle_regularize};
        let r = shuffle_regularize(&idx(&[1, 2]));
        let sh_ok = r.coeff(1) == LinComb::single(idx(&[2]))
            && r.coeff(0) == LinComb::term(idx(&[2, 1]), rat(-2, 1));
        let r = stuffle_regularize(&idx(&[1, 2]));
        let mut want = LinComb::term(idx(&[2, 1]), rat(-1, 1));
        want.add_term(idx(&[3]), rat(-1, 1));
        let st_ok = r.coeff(1) == LinComb::single(idx(&[2])) && r.coeff(0) == want;
        (sh_ok && st_ok, String::new())
    }));
    out
}

/// Reconstruction property of the regularizations on random words.
pub fn suite_regularization(words: usize, max_weight: u32, seed: u64) -> Vec<Check> {
    use crate::iterint::{reg_substitute, regularize};
    vec![Check::run(
        &format!("reconstruction on {words} random words, weight <= {max_weight}"),
        || {
            let mut rng = Rng::new(seed);
            for _ in 0..words {
                let w = loop {
                    let weight = 1 + rng.below(max_weight as u64) as u32;
                    let b = random_biword(&mut rng, weight);
                    if let Some(ix) = b.as_index() {
                        break ix;
                    }
                };
                for p in [Product::Shuffle, Product::Stuffle] {
                    let lc = LinComb::single(w.clone());
                    let reg = regularize(p, &lc);
                    if reg_substitute(p, &reg) != lc {
                        return (false, format!("reconstruction fails on {w}"));
                    }
                }
            }
            (true, String::new())
        },
    )]
}

fn cdist(a: &Complex, b: &Complex) -> f64 {
    let mut d = a.clone();
    d -= b;
    Float::with_val(a.real().prec(), d.abs_ref()).to_f64()
}

/// The numeric Eisenstein triangle at τ = i: lattice, Fourier and
/// coproduct realizations agree pairwise; the level approximation lands on
/// the lattice value; the Euler relations hold.
pub fn suite_mes_numeric(prec: Precision) -> Vec<Check> {
    let mut out = mes_triangle_checks(prec);
    out.extend(mes_level_check(prec));
    out.extend(mes_euler_checks(prec));
    out
}

/// Pairwise agreement of the three evaluation routes at τ = i.
pub fn mes_triangle_checks(prec: Precision) -> Vec<Check> {
    let bits = prec.bits();
    let tau = Complex::with_val(bits, (0, 1));
    let order = 60;
    let mut out = Vec::new();
    for parts in [vec![4u32, 3], vec![3, 2]] {
        let s = idx(&parts);
        let tau_ = tau.clone();
        out.push(Check::run(&format!("triangle at [{s}]"), move || {
            let lat = mes_lattice(&s, &tau_, 40, 1e-9, prec).map(|v| v.value);
            let fou = mes_fourier(&s).and_then(|e| e.realize(&tau_, order, prec));
            let shu = g_shuffle(&s).and_then(|e| e.realize(&tau_, order, prec));
            match (lat, fou, shu) {
                (Ok(a), Ok(b), Ok(c)) => {
                    let worst = cdist(&a, &b).max(cdist(&b, &c)).max(cdist(&a, &c));
                    (worst < 1e-6, format!("max pairwise {worst:.2e}"))
                }
                _ => (false, "evaluation failed".into()),
            }
        }));
    }
    out
}

/// The finite-level stuffle regularization against the lattice value.
pub fn mes_level_check(prec: Precision) -> Vec<Check> {
    let bits = prec.bits();
    let tau = Complex::with_val(bits, (0, 1));
    let _ = bits;
    let mut out = Vec::new();
    out.push(Check::run("level-80 stuffle regularization at [4,3]", || {
        let a = g_star_m(&idx(&[4, 3]), 80, &tau, 1e-8, prec);
        let b = mes_lattice(&idx(&[4, 3]), &tau, 60, 1e-9, prec);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                let d = cdist(&a, &b.value);
                (d < 1e-5, format!("distance {d:.2e}"))
            }
            _ => (false, "evaluation failed".into()),
        }
    }));
    out
}

/// Restricted double shuffle and the Euler relations, numerically.
pub fn mes_euler_checks(prec: Precision) -> Vec<Check> {
    let bits = prec.bits();
    let tau = Complex::with_val(bits, (0, 1));
    let order = 60;
    let mut out = Vec::new();
    out.push(Check::run("restricted double shuffle in weight 5", || {
        // G⧢_5 = 2 G⧢_{3,2} + 6 G⧢_{4,1}
        let g5 = g_shuffle(&idx(&[5])).and_then(|e| e.realize(&tau, order, prec));
        let g32 = g_shuffle(&idx(&[3, 2])).and_then(|e| e.realize(&tau, order, prec));
        let g41 = g_shuffle(&idx(&[4, 1])).and_then(|e| e.realize(&tau, order, prec));
        match (g5, g32, g41) {
            (Ok(a), Ok(b), Ok(c)) => {
                let rhs = Complex::from(Complex::from(b * 2u32) + Complex::from(c * 6u32));
                let d = cdist(&a, &rhs);
                (d < 1e-6, format!("distance {d:.2e}"))
            }
            _ => (false, "evaluation failed".into()),
        }
    }));
    out.push(Check::run("Euler relation G_4^2 = (7/6) G_8", || {
        let g4 = mes_fourier(&idx(&[4])).and_then(|e| e.realize(&tau, order, prec));
        let g8 = mes_fourier(&idx(&[8])).and_then(|e| e.realize(&tau, order, prec));
        match (g4, g8) {
            (Ok(a), Ok(b)) => {
                let lhs = a.square();
                let rhs = Complex::from(b * Complex::with_val(bits, (7, 0)))
                    / Complex::with_val(bits, (6, 0));
                let d = cdist(&lhs, &rhs);
                (d < 1e-6, format!("distance {d:.2e}"))
            }
            _ => (false, "evaluation failed".into()),
        }
    }));
    out.push(Check::run(
        "quasi-modular relation G_2^2 = 12 ζ(2) dG_2 + (5/2) G_4",
        || {
            (|| -> Result<(bool, String)> {
                let q = {
                    // q = e^{-2π} for τ = i
                    let two_pi = crate::mes::Precision::default();
                    let _ = two_pi;
                    let t = Complex::with_val(bits, (0, 1));
                    let two_pi_i = Complex::with_val(bits, (0, 2))
                        * Float::with_val(bits, rug::float::Constant::Pi);
                    (two_pi_i * t).exp()
                };
                let m2pi2 = {
                    let two_pi_i = Complex::with_val(bits, (0, -2))
                        * Float::with_val(bits, rug::float::Constant::Pi);
                    two_pi_i.square()
                };
                let z2 = mzv_numeric(&idx(&[2]), prec)?;
                let bracket2 = bracket_series(&idx(&[2]), order);
                let g2 = Complex::from(
                    Complex::from(m2pi2.clone() * bracket2.eval(&q, bits)?.value)
                        + Complex::with_val(bits, (&z2, &Float::new(bits))),
                );
                let dg2 =
                    Complex::from(m2pi2.clone() * bracket2.derive().eval(&q, bits)?.value);
                let g4 = mes_fourier(&idx(&[4]))?.realize(&tau, order, prec)?;
                let lhs = g2.square();
                let rhs = Complex::from(
                    Complex::from(dg2 * Complex::with_val(bits, (&z2, &Float::new(bits)))) * 12u32,
                ) + Complex::from(g4 * Complex::with_val(bits, (2.5, 0.0)));
                let d = cdist(&lhs, &Complex::from(rhs));
                Ok((d < 1e-6, format!("distance {d:.2e}")))
            })()
            .unwrap_or_else(|e| (false, format!("error: {e}")))
        },
    ));
    out
}

/// The q → 1 suite: limits of admissible brackets, kernel elements and the
/// divergence flag.
pub fn suite_zk(prec: Precision) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(Check::run("Z_5[2,3] = ζ(2,3) within 1e-4", || {
        let f = bracket_series(&idx(&[2, 3]), 2100);
        match zk_limit(&f, 5, 1e-4, prec) {
            Ok(r) => {
                let want = mzv_numeric(&idx(&[2, 3]), prec).unwrap().to_f64();
                let d = (r.value.to_f64() - want).abs();
                (!r.diverged && d < 1e-4, format!("difference {d:.2e}"))
            }
            Err(e) => (false, format!("error: {e}")),
        }
    }));
    out.push(Check::run("Z_4([4] - [2,1,1]) = 0 within 1e-4", || {
        let f = bracket_series(&idx(&[4]), 4200).sub(&bracket_series(&idx(&[2, 1, 1]), 4200));
        match zk_limit(&f, 4, 1e-4, prec) {
            Ok(r) => {
                let d = r.value.to_f64().abs();
                (!r.diverged && d < 1e-4, format!("value {d:.2e}"))
            }
            Err(e) => (false, format!("error: {e}")),
        }
    }));
    out.push(Check::run(
        "Z_12 of the cusp combination reproduces the weight-12 relation",
        || {
            let order = 4600;
            let mut comb = bracket_series(&idx(&[5, 7]), order).scale(&rat(168, 1));
            comb = comb.add(&bracket_series(&idx(&[7, 5]), order).scale(&rat(150, 1)));
            comb = comb.add(&bracket_series(&idx(&[9, 3]), order).scale(&rat(28, 1)));
            match zk_limit(&comb, 12, 1e-3, prec) {
                Ok(r) => {
                    let want = mzv_lincomb(
                        &LinComb::term(idx(&[12]), rat(5197, 691)),
                        prec,
                    )
                    .unwrap()
                    .to_f64();
                    let d = (r.value.to_f64() - want).abs();
                    (!r.diverged && d < 1e-3, format!("difference {d:.2e}"))
                }
                Err(e) => (false, format!("error: {e}")),
            }
        },
    ));
    out.push(Check::run("divergence flag on mb(1,1;1,0) at k = 3", || {
        let f = bibracket_series(&bidx(&[(1, 1), (1, 0)]), 2100);
        match zk_limit(&f, 3, 1e-6, prec) {
            Ok(r) => (r.diverged, format!("value {:.3}", r.value.to_f64())),
            Err(e) => (false, format!("error: {e}")),
        }
    }));
    out
}

/// Relation discovery: the cusp-form coefficient vector at order 60, its
/// stability at order 70, and the weight-bounded bi-bracket expressibility
/// experiment.
pub fn suite_relations() -> Vec<Check> {
    let mut out = Vec::new();
    out.push(Check::run("cusp-form kernel vector at order 60", || {
        let rels = find_relations(&delta_family(60).unwrap());
        (rels.basis.len() == 1, format!("kernel dim {}", rels.basis.len()))
    }));
    out.push(Check::run("stability at order 70", || {
        let a = find_relations(&delta_family(60).unwrap());
        let b = find_relations(&delta_family(70).unwrap());
        (a.basis == b.basis, String::new())
    }));
    out.push(Check::run(
        "bi-brackets of weight <= 4 lie in the bracket span",
        || {
            match bibracket_expressibility(4, 40) {
                Ok((expressed, total)) => (
                    expressed == total,
                    format!("{expressed}/{total} expressed"),
                ),
                Err(e) => (false, format!("error: {e}")),
            }
        },
    ));
    out
}

/// For every bi-bracket of total weight <= `max_weight` with a nonzero upper
/// row, test whether it lies in the span of plain brackets of weight <=
/// `max_weight`; returns (expressed, total).
pub fn bibracket_expressibility(max_weight: u32, order: usize) -> Result<(usize, usize)> {
    // bracket basis: all plain index words of weight <= max_weight
    let mut labels = Vec::new();
    let mut series = Vec::new();
    for w in 1..=max_weight {
        for b in biwords_of_weight(w) {
            if let Some(ix) = b.as_index() {
                labels.push(format!("[{ix}]"));
                series.push(bracket_series(&ix, order));
            }
        }
    }
    let mut total = 0usize;
    let mut expressed = 0usize;
    for w in 1..=max_weight {
        for b in biwords_of_weight(w) {
            if b.as_index().is_some() {
                continue;
            }
            total += 1;
            let mut fam_labels = vec![format!("mb({b})")];
            fam_labels.extend(labels.iter().cloned());
            let mut fam_series = vec![bibracket_series(&b, order)];
            fam_series.extend(series.iter().cloned());
            let fam = SeriesFamily::new(fam_labels, fam_series)?.with_max_weight(max_weight);
            let rels = find_relations(&fam);
            if rels
                .basis
                .iter()
                .any(|v| v[0].cmp0() != std::cmp::Ordering::Equal)
            {
                expressed += 1;
            }
        }
    }
    Ok((expressed, total))
}
