//! Multigraded K-polynomials and equivariant Hilbert series.
//!
//! A series is stored as `K(t) / ∏ (1 - t^w)`. Rational functions are never
//! normalized symbolically; equality is decided by exact evaluation at random
//! rational points. Half-integer exponents are evaluated through `s` with
//! `s_i^2 = θ_i`.

use crate::arith::{rat, rat_pow, BigRat};
use crate::groebner::{groebner_basis, GbError, GbStats, MonomialIdeal};
use crate::haiman::{self, haiman_equations, simple_eliminate};
use crate::laurent::{fmt_weight, LaurentJson, LaurentPoly};
use crate::partitions::{named, permutations, Partition};
use crate::poly::{MonomialOrder, MultiPoly};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

pub const SERIES_SCHEMA: &str = "hilbloc.hilbert_series";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HilbertError {
    #[error(transparent)]
    Groebner(#[from] GbError),
    #[error("generator {0} is not homogeneous for the torus weights")]
    NotHomogeneous(usize),
    #[error("variable {0} has zero weight")]
    ZeroWeight(usize),
    #[error("no linear functional is positive on all weights")]
    NoPositiveFunctional,
    #[error("no generic specialization found after {0} attempts")]
    RetryCap(usize),
    #[error("weights and ring disagree")]
    Shape,
}

/// `numerator / ∏ (1 - t^w)` over `w` in `denom_weights`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    pub numerator: LaurentPoly,
    pub denom_weights: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesJson {
    pub schema: String,
    pub version: String,
    pub numerator: LaurentJson,
    pub denom_weights: Vec<Vec<i64>>,
}

impl HilbertSeries {
    pub fn r(&self) -> usize {
        self.numerator.r()
    }

    /// Value at `θ = s^2`, or `None` when a denominator factor vanishes.
    pub fn eval_s(&self, s: &[BigRat]) -> Option<BigRat> {
        let num = if self.numerator.scale() == 2 {
            self.numerator.clone()
        } else {
            self.numerator.normalize().rescale(2)
        };
        let mut den = BigRat::one();
        for w in &self.denom_weights {
            let mut m = BigRat::one();
            for (x, &k) in s.iter().zip(w) {
                m *= rat_pow(x, 2 * k);
            }
            let f = BigRat::one() - m;
            if f.is_zero() {
                return None;
            }
            den *= f;
        }
        Some(num.eval_s(s) / den)
    }

    /// Value at `θ`; the numerator must have integral exponents.
    pub fn eval(&self, theta: &[BigRat]) -> Option<BigRat> {
        let mut den = BigRat::one();
        for w in &self.denom_weights {
            let mut m = BigRat::one();
            for (x, &k) in theta.iter().zip(w) {
                m *= rat_pow(x, k);
            }
            let f = BigRat::one() - m;
            if f.is_zero() {
                return None;
            }
            den *= f;
        }
        Some(self.numerator.eval(theta) / den)
    }

    /// Image under `t_i -> t_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> HilbertSeries {
        HilbertSeries {
            numerator: self.numerator.permute(perm),
            denom_weights: self.denom_weights.iter().map(|w| permute_weight(w, perm)).collect(),
        }
    }

    /// Coefficients of the series expansion up to `φ`-degree `d`. Requires
    /// integral exponents and `φ · w > 0` on every denominator weight.
    pub fn expand(&self, phi: &[i64], d: i64) -> BTreeMap<Vec<i64>, BigInt> {
        let num = self.numerator.normalize();
        assert_eq!(num.scale(), 1, "expansion needs integral exponents");
        let deg = |e: &[i64]| -> i64 { e.iter().zip(phi).map(|(a, b)| a * b).sum() };
        let mut cur: BTreeMap<Vec<i64>, BigInt> =
            num.terms().filter(|(e, _)| deg(e) <= d).map(|(e, c)| (e.clone(), c.clone())).collect();
        for w in &self.denom_weights {
            let step = deg(w);
            assert!(step > 0, "weight {w:?} is not positive for {phi:?}");
            let mut next: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
            for (e, c) in &cur {
                let mut m = e.clone();
                let mut k = deg(&m);
                while k <= d {
                    *next.entry(m.clone()).or_insert_with(BigInt::zero) += c;
                    for (a, b) in m.iter_mut().zip(w) {
                        *a += b;
                    }
                    k += step;
                }
            }
            next.retain(|_, c| !c.is_zero());
            cur = next;
        }
        cur
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            schema: SERIES_SCHEMA.into(),
            version: crate::VERSION.into(),
            numerator: self.numerator.to_json(),
            denom_weights: self.denom_weights.clone(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Option<HilbertSeries> {
        if j.schema != SERIES_SCHEMA {
            return None;
        }
        let numerator = LaurentPoly::from_json(&j.numerator)?;
        if j.denom_weights.iter().any(|w| w.len() != numerator.r() || w.iter().all(|&x| x == 0)) {
            return None;
        }
        Some(HilbertSeries { numerator, denom_weights: j.denom_weights.clone() })
    }

    /// `(K) / ((1 - t^w1)^m1 (1 - t^w2)^m2 ...)`.
    pub fn pretty(&self) -> String {
        let mut counts: BTreeMap<&Vec<i64>, usize> = BTreeMap::new();
        for w in &self.denom_weights {
            *counts.entry(w).or_default() += 1;
        }
        let den: Vec<String> = counts
            .iter()
            .map(|(w, &m)| {
                let f = format!("(1 - {})", fmt_weight(w, 1));
                if m == 1 {
                    f
                } else {
                    format!("{f}^{m}")
                }
            })
            .collect();
        if den.is_empty() {
            format!("{}", self.numerator)
        } else {
            format!("({}) / ({})", self.numerator, den.join(""))
        }
    }
}

fn permute_weight(w: &[i64], perm: &[usize]) -> Vec<i64> {
    let mut d = vec![0; w.len()];
    for (i, &x) in w.iter().enumerate() {
        d[perm[i]] = x;
    }
    d
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A small integral `φ` with `φ · w > 0` for every weight, searched over the
/// boxes `[-k, k]^r` for growing `k`, smallest `|φ|_1` first.
pub fn positive_functional(weights: &[Vec<i64>]) -> Option<Vec<i64>> {
    let r = weights.first()?.len();
    let ones = vec![1i64; r];
    if weights.iter().all(|w| dot(w, &ones) > 0) {
        return Some(ones);
    }
    if r > 6 {
        return None;
    }
    for k in 1..=6i64 {
        let side = (2 * k + 1) as usize;
        let mut cands: Vec<Vec<i64>> = (0..side.pow(r as u32))
            .map(|mut idx| {
                (0..r)
                    .map(|_| {
                        let x = (idx % side) as i64 - k;
                        idx /= side;
                        x
                    })
                    .collect()
            })
            .collect();
        cands.sort_by_key(|v: &Vec<i64>| (v.iter().map(|x| x.abs()).sum::<i64>(), v.iter().map(|x| -x).collect::<Vec<_>>()));
        if let Some(phi) = cands.into_iter().find(|phi| weights.iter().all(|w| dot(w, phi) > 0)) {
            return Some(phi);
        }
    }
    None
}

/// Monomial order refining the `φ`-grading of the variables, with lower total
/// degree first among ties. For torus-stable ideals this keeps Buchberger
/// inside the tangent cone and is much faster than grevlex.
pub fn grading_order(weights: &[Vec<i64>]) -> Option<MonomialOrder> {
    let phi = positive_functional(weights)?;
    Some(MonomialOrder::WeightedLow(weights.iter().map(|w| dot(w, &phi)).collect()))
}

/// K-polynomial of `S/J` for a monomial ideal, through the pivot recursion
/// `K(J) = K(J + (p)) + t^w(p) K(J : p)` with `p` a pure power of the most
/// frequent variable. Coprime generators and components are handled in
/// closed form; sub-ideals are memoized by their sorted minimal generators.
pub fn kpoly_monomial(j: &MonomialIdeal, weights: &[Vec<i64>]) -> LaurentPoly {
    assert_eq!(weights.len(), j.nvars(), "one weight per variable");
    let r = weights.first().map_or(0, |w| w.len());
    let mut memo = HashMap::new();
    Kpoly { weights, r, memo: &mut memo }.run(j.gens().to_vec())
}

struct Kpoly<'a> {
    weights: &'a [Vec<i64>],
    r: usize,
    memo: &'a mut HashMap<Vec<Vec<u32>>, LaurentPoly>,
}

impl Kpoly<'_> {
    fn wt(&self, m: &[u32]) -> Vec<i64> {
        let mut w = vec![0i64; self.r];
        for (i, &k) in m.iter().enumerate() {
            if k > 0 {
                for (a, b) in w.iter_mut().zip(&self.weights[i]) {
                    *a += k as i64 * b;
                }
            }
        }
        w
    }

    fn one_minus(&self, m: &[u32]) -> LaurentPoly {
        let mut p = LaurentPoly::one(self.r);
        p.add_term(self.wt(m), -BigInt::one());
        p
    }

    fn run(&mut self, gens: Vec<Vec<u32>>) -> LaurentPoly {
        let gens = minimalize(gens);
        if gens.is_empty() {
            return LaurentPoly::one(self.r);
        }
        if gens.iter().any(|g| g.iter().all(|&x| x == 0)) {
            return LaurentPoly::zero(self.r, 1);
        }
        if gens.len() == 1 {
            return self.one_minus(&gens[0]);
        }
        if let Some(k) = self.memo.get(&gens) {
            return k.clone();
        }
        let n = gens[0].len();
        let mut count = vec![0usize; n];
        for g in &gens {
            for (c, &x) in count.iter_mut().zip(g) {
                if x > 0 {
                    *c += 1;
                }
            }
        }
        let out = if count.iter().all(|&c| c <= 1) {
            gens.iter().fold(LaurentPoly::one(self.r), |acc, g| acc.mul(&self.one_minus(g)))
        } else if let Some((a, b)) = split_components(&gens) {
            let ka = self.run(a);
            ka.mul(&self.run(b))
        } else {
            let v = (0..n).max_by_key(|&i| (count[i], std::cmp::Reverse(i))).unwrap();
            let e = gens.iter().map(|g| g[v]).filter(|&x| x > 0).min().unwrap();
            let mut p = vec![0u32; n];
            p[v] = e;
            let mut plus: Vec<Vec<u32>> = gens.iter().filter(|g| g[v] < e).cloned().collect();
            plus.push(p.clone());
            let colon: Vec<Vec<u32>> = gens
                .iter()
                .map(|g| {
                    let mut h = g.clone();
                    h[v] = h[v].saturating_sub(e);
                    h
                })
                .collect();
            let k1 = self.run(plus);
            let k2 = self.run(colon).shift(&self.wt(&p));
            k1.add(&k2)
        };
        self.memo.insert(gens, out.clone());
        out
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimalize(mut gens: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    gens.sort_by_key(|g| (g.iter().sum::<u32>(), g.clone()));
    gens.dedup();
    let mut out: Vec<Vec<u32>> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| divides(h, &g)) {
            out.push(g);
        }
    }
    out.sort();
    out
}

type Gens = Vec<Vec<u32>>;

/// The positive functional used by the oracle and the dimension of each multidegree.
pub type GradedDims = (Vec<i64>, BTreeMap<Vec<i64>, u64>);

/// Splits generators into two nonempty groups with disjoint variable supports.
fn split_components(gens: &[Vec<u32>]) -> Option<(Gens, Gens)> {
    let n = gens.len();
    let mut comp = vec![usize::MAX; n];
    comp[0] = 0;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if comp[j] == usize::MAX && gens[i].iter().zip(&gens[j]).any(|(a, b)| *a > 0 && *b > 0) {
                comp[j] = 0;
                stack.push(j);
            }
        }
    }
    if comp.iter().all(|&c| c == 0) {
        return None;
    }
    let (a, b): (Vec<_>, Vec<_>) = gens.iter().cloned().zip(comp).partition(|(_, c)| *c == 0);
    Some((a.into_iter().map(|x| x.0).collect(), b.into_iter().map(|x| x.0).collect()))
}

/// `H(S/I; t)` through the initial ideal. With no explicit order the grading
/// order of the weights is used when one exists, grevlex otherwise.
pub fn hilbert_series(
    gens: &[MultiPoly],
    weights: &[Vec<i64>],
    order: Option<&MonomialOrder>,
    budget: usize,
) -> Result<(HilbertSeries, GbStats), HilbertError> {
    let first = gens.first().ok_or(GbError::Empty)?;
    if weights.len() != first.nvars() {
        return Err(HilbertError::Shape);
    }
    if let Some(i) = weights.iter().position(|w| w.iter().all(|&x| x == 0)) {
        return Err(HilbertError::ZeroWeight(i));
    }
    for (i, g) in gens.iter().enumerate() {
        if !g.is_zero() && g.homogeneous_weight(weights).is_none() {
            return Err(HilbertError::NotHomogeneous(i));
        }
    }
    let order = match order {
        Some(o) => o.clone(),
        None => grading_order(weights).unwrap_or(MonomialOrder::GrevLex),
    };
    let gb = if gens.iter().all(|g| g.is_zero()) {
        None
    } else {
        Some(groebner_basis(gens, &order, budget)?)
    };
    let (ideal, stats) = match &gb {
        Some(gb) => (gb.initial_ideal(), gb.stats),
        None => (MonomialIdeal::zero(first.nvars()), GbStats::default()),
    };
    let numerator = kpoly_monomial(&ideal, weights);
    Ok((HilbertSeries { numerator, denom_weights: weights.to_vec() }, stats))
}

/// Series of a monomial ideal directly from its generators.
pub fn monomial_series(j: &MonomialIdeal, weights: &[Vec<i64>]) -> HilbertSeries {
    HilbertSeries { numerator: kpoly_monomial(j, weights), denom_weights: weights.to_vec() }
}

/// Number of standard monomials of `J` in each multidegree of `φ`-degree at
/// most `d`, for a positive functional `φ` found by search.
pub fn graded_dim_oracle(
    j: &MonomialIdeal,
    weights: &[Vec<i64>],
    d: i64,
) -> Result<GradedDims, HilbertError> {
    let phi = positive_functional(weights).ok_or(HilbertError::NoPositiveFunctional)?;
    let steps: Vec<i64> = weights.iter().map(|w| dot(w, &phi)).collect();
    let r = phi.len();
    let mut out: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    let n = weights.len();
    let mut e = vec![0u32; n];
    // depth-first walk over exponent vectors, pruning by degree and by J
    fn walk(
        i: usize,
        deg: i64,
        e: &mut Vec<u32>,
        ctx: (&MonomialIdeal, &[Vec<i64>], &[i64], i64, usize),
        out: &mut BTreeMap<Vec<i64>, u64>,
    ) {
        let (j, weights, steps, d, r) = ctx;
        if i == e.len() {
            if !j.contains(e) {
                let mut w = vec![0i64; r];
                for (k, &x) in e.iter().enumerate() {
                    for (a, b) in w.iter_mut().zip(&weights[k]) {
                        *a += x as i64 * b;
                    }
                }
                *out.entry(w).or_default() += 1;
            }
            return;
        }
        let mut k = 0u32;
        loop {
            let dd = deg + k as i64 * steps[i];
            if dd > d {
                break;
            }
            e[i] = k;
            if j.contains(e) {
                break;
            }
            walk(i + 1, dd, e, ctx, out);
            k += 1;
        }
        e[i] = 0;
    }
    walk(0, 0, &mut e, (j, weights, &steps, d, r), &mut out);
    Ok((phi, out))
}

fn esym(u: &[LaurentPoly], k: usize) -> LaurentPoly {
    let r = u[0].r();
    let mut e = vec![LaurentPoly::zero(r, 1); k + 1];
    e[0] = LaurentPoly::one(r);
    for x in u {
        for j in (1..=k).rev() {
            e[j] = e[j].add(&e[j - 1].mul(x));
        }
    }
    e[k].clone()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

fn prod(u: &[LaurentPoly], s: &[usize], k: u32) -> LaurentPoly {
    s.iter().fold(LaurentPoly::one(u[0].r()), |acc, &i| acc.mul(&u[i].pow(k)))
}

fn sum(u: &[LaurentPoly], s: &[usize]) -> LaurentPoly {
    s.iter().fold(LaurentPoly::zero(u[0].r(), 1), |acc, &i| acc.add(&u[i]))
}

fn u_vars() -> Vec<LaurentPoly> {
    (0..6)
        .map(|i| {
            let mut e = vec![0; 6];
            e[i] = 1;
            LaurentPoly::char_of(&e)
        })
        .collect()
}

/// Characters of the Schur modules in the minimal resolution of the
/// Plücker cone over G(2,6), as polynomials in `u_0..u_5`:
/// `L(4), L(5,1), L(6,1,1), L(5,5), L(6,5,1), L(6,6,2), L(6,6,6)`.
pub fn g26_resolution_characters() -> [LaurentPoly; 7] {
    let u = u_vars();
    let e6 = prod(&u, &[0, 1, 2, 3, 4, 5], 1);
    let five = subsets(6, 5);
    let s51 = five.iter().fold(LaurentPoly::zero(6, 1), |acc, s| acc.add(&prod(&u, s, 1).mul(&sum(&u, s))));
    let mut h2 = LaurentPoly::zero(6, 1);
    for i in 0..6 {
        for j in i..6 {
            h2 = h2.add(&u[i].mul(&u[j]));
        }
    }
    let l4 = esym(&u, 4);
    let l51 = s51.add(&e6.scale_int(&BigInt::from(5)));
    let l611 = e6.mul(&h2);
    let mut l55 = five.iter().fold(LaurentPoly::zero(6, 1), |acc, s| acc.add(&prod(&u, s, 2)));
    for s in subsets(6, 4) {
        let rest: Vec<usize> = (0..6).filter(|i| !s.contains(i)).collect();
        l55 = l55.add(&prod(&u, &s, 2).mul(&prod(&u, &rest, 1)));
    }
    let e6sq = e6.mul(&e6);
    let l651 = e6.mul(&s51).add(&e6sq.scale_int(&BigInt::from(5)));
    let l662 = e6sq.mul(&esym(&u, 2));
    let l666 = e6sq.mul(&e6);
    [l4, l51, l611, l55, l651, l662, l666]
}

/// The K-polynomial of the Plücker cone over G(2,6) from the alternating sum
/// of its resolution characters, in `u_0..u_5`.
#[allow(non_snake_case)]
pub fn schur_K_G26() -> LaurentPoly {
    let [l4, l51, l611, l55, l651, l662, l666] = g26_resolution_characters();
    LaurentPoly::one(6).sub(&l4).add(&l51).sub(&l611.add(&l55)).add(&l651).sub(&l662).add(&l666)
}

/// A transcribed closed form `K(u(t)) / ∏ (1 - t^w)` for a fixed point.
/// `u` holds doubled exponents (`t^(u/2)`), each with sign `sign`.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub tag: &'static str,
    pub sign: i64,
    pub u: [[i64; 3]; 6],
    pub den: Vec<Vec<i64>>,
    /// Formulas the source states under an extra hypothesis.
    pub conditional: bool,
}

fn den(units: [usize; 3], rest: &[([i64; 3], usize)]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for (i, &m) in units.iter().enumerate() {
        let mut e = vec![0; 3];
        e[i] = 1;
        out.extend(std::iter::repeat_n(e, m));
    }
    for (w, m) in rest {
        out.extend(std::iter::repeat_n(w.to_vec(), *m));
    }
    out.sort();
    out
}

fn registry_data() -> Vec<ClosedForm> {
    let cf = |tag, sign, u, den, conditional| ClosedForm { tag, sign, u, den, conditional };
    vec![
        cf(
            "121",
            -1,
            [[-1, 1, 1], [1, -1, 1], [1, 1, -1], [-1, 3, -1], [-1, -1, 3], [3, -1, -1]],
            den(
                [3, 3, 3],
                &[
                    ([-1, 2, 0], 1), ([-1, 1, 1], 1), ([-1, 0, 2], 1), ([2, -1, 0], 1), ([1, -1, 1], 1),
                    ([0, -1, 2], 1), ([2, 0, -1], 1), ([1, 1, -1], 1), ([0, 2, -1], 1),
                ],
            ),
            false,
        ),
        cf(
            "131",
            -1,
            [[-2, 1, 1], [2, -1, 1], [2, 1, -1], [-2, 3, -1], [-2, -1, 3], [4, -1, -1]],
            den(
                [3, 3, 3],
                &[
                    ([2, 0, 0], 1), ([1, -1, 1], 1), ([0, -1, 2], 1), ([3, -1, 0], 1), ([1, 1, -1], 1),
                    ([0, 2, -1], 1), ([3, 0, -1], 1), ([-1, 1, 0], 1), ([-1, 0, 1], 1), ([-2, 2, 0], 1),
                    ([-2, 1, 1], 1), ([-2, 0, 2], 1),
                ],
            ),
            false,
        ),
        cf(
            "132",
            -1,
            [[-1, 1, 1], [1, -1, 1], [1, 1, -1], [-1, 3, -1], [-3, -1, 3], [5, -1, -1]],
            den(
                [3, 3, 2],
                &[
                    ([2, 0, 0], 1), ([-1, 2, 0], 1), ([-1, 1, 0], 1), ([-1, 0, 1], 2), ([-2, 2, 0], 1),
                    ([-2, 1, 1], 1), ([-2, 0, 2], 1), ([1, -1, 1], 1), ([3, -1, 0], 1), ([0, -1, 1], 1),
                    ([2, -1, 0], 1), ([-1, -1, 2], 1), ([3, 0, -1], 1), ([2, 1, -1], 1), ([0, 2, -1], 1),
                ],
            ),
            false,
        ),
        cf(
            "1311",
            -1,
            [[-2, 2, 1], [2, -2, 1], [2, 2, -1], [-2, 4, -1], [-2, -2, 3], [4, -2, -1]],
            den(
                [3, 3, 3],
                &[
                    ([2, 0, 0], 1), ([0, 2, 0], 1), ([-1, 1, 0], 1), ([-1, 0, 1], 1), ([-2, 1, 1], 1),
                    ([-2, 3, 0], 1), ([-2, 0, 2], 1), ([1, -1, 0], 1), ([1, -2, 1], 1), ([3, -2, 0], 1),
                    ([0, -1, 1], 1), ([0, -2, 2], 1), ([1, 1, -1], 1), ([3, 0, -1], 1), ([0, 3, -1], 1),
                ],
            ),
            false,
        ),
        cf(
            "141",
            1,
            [[-3, 1, 1], [3, -1, 1], [3, 1, -1], [-3, 3, -1], [-3, -1, 3], [5, -1, -1]],
            den(
                [3, 3, 3],
                &[
                    ([3, 0, 0], 1), ([2, 0, 0], 1), ([-1, 1, 0], 1), ([-1, 0, 1], 1), ([-2, 1, 0], 1),
                    ([-2, 0, 1], 1), ([-3, 2, 0], 1), ([-3, 1, 1], 1), ([-3, 0, 2], 1), ([1, -1, 1], 1),
                    ([4, -1, 0], 1), ([0, -1, 2], 1), ([1, 1, -1], 1), ([4, 0, -1], 1), ([0, 2, -1], 1),
                ],
            ),
            false,
        ),
        cf(
            "151",
            1,
            [[-4, 1, 1], [4, -1, 1], [4, 1, -1], [-4, 3, -1], [-4, -1, 3], [6, -1, -1]],
            den(
                [3, 3, 3],
                &[
                    ([4, 0, 0], 1), ([2, 0, 0], 1), ([3, 0, 0], 1), ([-1, 1, 0], 1), ([-1, 0, 1], 1),
                    ([-2, 1, 0], 1), ([-2, 0, 1], 1), ([-3, 1, 0], 1), ([-3, 0, 1], 1), ([-4, 2, 0], 1),
                    ([-4, 1, 1], 1), ([-4, 0, 2], 1), ([1, -1, 1], 1), ([5, -1, 0], 1), ([0, -1, 2], 1),
                    ([1, 1, -1], 1), ([5, 0, -1], 1), ([0, 2, -1], 1),
                ],
            ),
            false,
        ),
        cf(
            "142",
            1,
            [[-2, 1, 1], [2, -1, 1], [2, 1, -1], [-2, 3, -1], [-4, -1, 3], [6, -1, -1]],
            den(
                [3, 3, 2],
                &[
                    ([2, 0, 0], 2), ([-1, 0, 1], 2), ([-2, 2, 0], 1), ([-2, 0, 1], 1), ([-1, 1, 0], 2),
                    ([-3, 2, 0], 1), ([-3, 1, 1], 1), ([-3, 0, 2], 1), ([1, -1, 1], 1), ([4, -1, 0], 1),
                    ([0, -1, 1], 1), ([3, -1, 0], 1), ([-1, -1, 2], 1), ([2, 1, -1], 1), ([4, 0, -1], 1),
                    ([0, 2, -1], 1),
                ],
            ),
            false,
        ),
        cf(
            "232",
            1,
            [[-2, 1, 1], [2, -1, 1], [2, 1, -1], [-2, 3, -1], [-2, -1, 3], [4, -1, -1]],
            den(
                [3, 3, 3],
                &[
                    ([2, 0, 0], 1), ([-2, 2, 0], 1), ([-2, 1, 1], 1), ([-2, 0, 2], 1), ([3, -1, 0], 1),
                    ([0, -1, 2], 1), ([2, -1, 0], 1), ([1, -1, 1], 1), ([-1, 1, 0], 2), ([-1, 0, 1], 2),
                    ([-1, -1, 2], 1), ([3, 0, -1], 1), ([0, 2, -1], 1), ([2, 0, -1], 1), ([1, 1, -1], 1),
                    ([-1, 2, -1], 1),
                ],
            ),
            false,
        ),
        cf(
            "1411",
            1,
            [[-3, 2, 1], [3, -2, 1], [3, 2, -1], [-3, 4, -1], [-3, -2, 3], [5, -2, -1]],
            den(
                [3, 3, 3],
                &[
                    ([3, 0, 0], 1), ([2, 0, 0], 1), ([0, 2, 0], 1), ([-1, 1, 0], 1), ([-1, 0, 1], 1),
                    ([-2, 1, 0], 1), ([-2, 0, 1], 1), ([-3, 1, 1], 1), ([-3, 3, 0], 1), ([-3, 0, 2], 1),
                    ([1, -1, 0], 1), ([0, -1, 1], 1), ([1, -2, 1], 1), ([4, -2, 0], 1), ([0, -2, 2], 1),
                    ([1, 1, -1], 1), ([4, 0, -1], 1), ([0, 3, -1], 1),
                ],
            ),
            true,
        ),
        cf(
            "2311",
            1,
            [[-1, 2, 1], [1, -2, 1], [1, 2, -1], [-3, 4, -1], [-1, -2, 3], [5, -2, -1]],
            den(
                [3, 2, 3],
                &[
                    ([2, 0, 0], 1), ([0, 2, 0], 1), ([-1, 0, 2], 1), ([-1, 1, 0], 2), ([-1, 0, 1], 1),
                    ([-2, 1, 1], 1), ([-2, 3, 0], 1), ([-2, 0, 2], 1), ([1, -1, 0], 1), ([3, -2, 0], 1),
                    ([2, -2, 1], 1), ([0, -1, 1], 1), ([0, -2, 2], 1), ([1, 1, -1], 1), ([3, 0, -1], 1),
                    ([0, 1, -1], 1), ([2, 0, -1], 1), ([-1, 3, -1], 1),
                ],
            ),
            true,
        ),
        cf(
            "11311",
            1,
            [[-2, 2, 2], [2, -2, 2], [2, 2, -2], [-2, 4, -2], [-2, -2, 4], [4, -2, -2]],
            den(
                [3, 3, 3],
                &[
                    ([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], 1), ([-1, 1, 0], 1), ([-1, 0, 1], 1),
                    ([-2, 1, 1], 1), ([-2, 3, 0], 1), ([-2, 0, 3], 1), ([1, -1, 0], 1), ([0, -1, 1], 1),
                    ([1, -2, 1], 1), ([3, -2, 0], 1), ([0, -2, 3], 1), ([1, 1, -2], 1), ([1, 0, -1], 1),
                    ([3, 0, -2], 1), ([0, 1, -1], 1), ([0, 3, -2], 1),
                ],
            ),
            true,
        ),
    ]
}

/// All transcribed closed forms, keyed by tag.
pub fn closed_form_registry() -> &'static [ClosedForm] {
    static REG: OnceLock<Vec<ClosedForm>> = OnceLock::new();
    REG.get_or_init(registry_data)
}

pub fn closed_form(tag: &str) -> Option<&'static ClosedForm> {
    closed_form_registry().iter().find(|c| c.tag == tag)
}

impl ClosedForm {
    pub fn partition(&self) -> Partition {
        named(self.tag).expect("registry tags are named partitions")
    }

    /// The numerator `K(u(t))` on the half-integer lattice.
    pub fn numerator(&self) -> LaurentPoly {
        static K: OnceLock<LaurentPoly> = OnceLock::new();
        let k = K.get_or_init(schur_K_G26);
        let images: Vec<(i64, Vec<i64>)> = self.u.iter().map(|w| (self.sign, w.to_vec())).collect();
        k.substitute_monomials(&images, 3, 2)
    }

    pub fn series(&self) -> HilbertSeries {
        HilbertSeries { numerator: self.numerator(), denom_weights: self.den.clone() }
    }
}

/// Closed-form series for `λ` in any coordinate orientation: the registry
/// entry of the same `S_3` class, with `t` permuted accordingly.
pub fn closed_form_for(lambda: &Partition) -> Option<(&'static ClosedForm, HilbertSeries)> {
    if lambda.dim() != 3 {
        return None;
    }
    for cf in closed_form_registry() {
        let base = cf.partition();
        if base.size() != lambda.size() {
            continue;
        }
        for perm in permutations(3) {
            if &base.permute(&perm) == lambda {
                return Some((cf, cf.series().permute(&perm)));
            }
        }
    }
    None
}

/// Which presentation of the Haiman chart feeds the Gröbner route.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartTier {
    /// All Haiman coordinates and equations.
    Raw,
    /// After simple elimination of linear coordinates.
    Step0,
}

impl ChartTier {
    pub fn name(&self) -> &'static str {
        match self {
            ChartTier::Raw => "raw",
            ChartTier::Step0 => "step0",
        }
    }
}

/// `H(A_λ; t)` of the Haiman chart by the Gröbner route.
pub fn chart_series(lambda: &Partition, tier: ChartTier, budget: usize) -> Result<(HilbertSeries, GbStats), HilbertError> {
    let raw = haiman_equations(lambda);
    let p = match tier {
        ChartTier::Raw => raw,
        ChartTier::Step0 => simple_eliminate(&raw),
    };
    let w = p.weights();
    if p.equations.iter().all(|e| e.is_zero()) {
        let j = MonomialIdeal::zero(w.len());
        return Ok((monomial_series(&j, &w), GbStats::default()));
    }
    hilbert_series(&p.equations, &w, None, budget)
}

/// `H(A_{λ_1321})` from the Jacobian ideal of the transcribed potential,
/// computed once per process.
pub fn series_1321(budget: usize) -> Result<HilbertSeries, HilbertError> {
    static H: OnceLock<HilbertSeries> = OnceLock::new();
    if let Some(h) = H.get() {
        return Ok(h.clone());
    }
    let jac = haiman::registry::jac_f1321();
    let (h, _) = hilbert_series(&jac, &haiman::registry::f1321_weights(), None, budget)?;
    Ok(H.get_or_init(|| h).clone())
}

/// Random `s` in `(0, ∞) ∩ Q` with numerator and denominator at most
/// `height`, excluding `s = 1`.
pub fn random_s<R: Rng>(rng: &mut R, r: usize, height: i64) -> Vec<BigRat> {
    (0..r)
        .map(|_| loop {
            let q = rat(rng.gen_range(1..=height), rng.gen_range(1..=height));
            if q != BigRat::one() {
                break q;
            }
        })
        .collect()
}

pub const RETRY_CAP: usize = 50;

/// Random points where `ok` holds, resampled up to `RETRY_CAP` times each.
pub fn generic_points<R: Rng>(
    rng: &mut R,
    r: usize,
    k: usize,
    height: i64,
    ok: impl Fn(&[BigRat]) -> bool,
) -> Result<Vec<Vec<BigRat>>, HilbertError> {
    let mut pts = Vec::with_capacity(k);
    for _ in 0..k {
        let mut found = None;
        for _ in 0..RETRY_CAP {
            let s = random_s(rng, r, height);
            if ok(&s) {
                found = Some(s);
                break;
            }
        }
        pts.push(found.ok_or(HilbertError::RetryCap(RETRY_CAP))?);
    }
    Ok(pts)
}

/// True when the two series agree at `k` random points `θ = s^2`.
pub fn series_agree<R: Rng>(a: &HilbertSeries, b: &HilbertSeries, k: usize, rng: &mut R) -> Result<bool, HilbertError> {
    let pts = generic_points(rng, a.r(), k, 30, |s| a.eval_s(s).is_some() && b.eval_s(s).is_some())?;
    Ok(pts.iter().all(|s| a.eval_s(s) == b.eval_s(s)))
}

/// Both sides of `H(θ) = (-1)^|λ| (θ1θ2θ3)^-|λ| ∏_{i∈λ} θ^i H(θ^-1)` at `θ = s^2`.
pub fn reciprocity_sides(h: &HilbertSeries, lambda: &Partition, s: &[BigRat]) -> Option<(BigRat, BigRat)> {
    let n = lambda.size() as i64;
    let inv: Vec<BigRat> = s.iter().map(|x| BigRat::one() / x).collect();
    let lhs = h.eval_s(s)?;
    let mut factor = if n % 2 == 0 { BigRat::one() } else { -BigRat::one() };
    for x in s {
        factor *= rat_pow(x, -2 * n);
    }
    for c in lambda.cells() {
        for (x, &k) in s.iter().zip(c) {
            factor *= rat_pow(x, 2 * k as i64);
        }
    }
    Some((lhs, factor * h.eval_s(&inv)?))
}

/// Self-reciprocity at `k >= 3` random generic points.
pub fn reciprocity_check<R: Rng>(h: &HilbertSeries, lambda: &Partition, k: usize, rng: &mut R) -> Result<bool, HilbertError> {
    let pts = generic_points(rng, h.r(), k.max(3), 30, |s| reciprocity_sides(h, lambda, s).is_some())?;
    Ok(pts.iter().all(|s| {
        let (a, b) = reciprocity_sides(h, lambda, s).unwrap();
        a == b
    }))
}

/// The series with one extra numerator term, a negative control.
pub fn mutated(h: &HilbertSeries) -> HilbertSeries {
    let mut numerator = h.numerator.clone();
    let mut e = vec![0; h.r()];
    e[0] = numerator.scale() as i64;
    numerator.add_term(e, BigInt::one());
    HilbertSeries { numerator, denom_weights: h.denom_weights.clone() }
}
