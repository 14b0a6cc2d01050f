//! Buchberger's algorithm over the rationals, normal forms, initial ideals and
//! monomial ideals.
//!
//! Internally every polynomial is kept primitive over the integers with its
//! terms sorted from largest to smallest. Monomials carry a precomputed
//! order key (linear in the exponent vector), so comparisons are plain slice
//! comparisons and products of monomials add keys.

use crate::arith::BigRat;
use crate::poly::{divides, mono_lcm, MonomialOrder, MultiPoly, Ring};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

pub const DEFAULT_SPAIR_BUDGET: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GbError {
    #[error("S-pair budget exceeded after {0} reductions")]
    BudgetExceeded(usize),
    #[error("ring contexts differ")]
    ContextMismatch,
    #[error("empty generator list")]
    Empty,
    #[error("order is not a well-order on this ring")]
    InvalidOrder,
    #[error("a coefficient denominator vanishes modulo {0}")]
    BadPrime(u64),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Mono {
    // order key followed by the exponent vector
    d: Box<[i32]>,
    mask: u64,
}

#[derive(Clone)]
struct Ctx {
    n: usize,
    klen: usize,
    order: MonomialOrder,
}

impl Ctx {
    fn new(n: usize, order: &MonomialOrder) -> Self {
        let klen = match order {
            MonomialOrder::Lex => n,
            MonomialOrder::GrevLex => n + 1,
            MonomialOrder::Weighted(_) | MonomialOrder::WeightedLow(_) => n + 2,
        };
        Ctx { n, klen, order: order.clone() }
    }

    fn mono(&self, e: &[u32]) -> Mono {
        let mut d = Vec::with_capacity(self.klen + self.n);
        let deg: i64 = e.iter().map(|&x| x as i64).sum();
        match &self.order {
            MonomialOrder::Lex => d.extend(e.iter().map(|&x| x as i32)),
            MonomialOrder::GrevLex => {
                d.push(deg as i32);
                d.extend(e.iter().rev().map(|&x| -(x as i32)));
            }
            MonomialOrder::Weighted(w) | MonomialOrder::WeightedLow(w) => {
                let wd: i64 = e.iter().zip(w).map(|(&x, &y)| x as i64 * y).sum();
                d.push(wd as i32);
                d.push(if matches!(self.order, MonomialOrder::WeightedLow(_)) { -deg } else { deg } as i32);
                d.extend(e.iter().rev().map(|&x| -(x as i32)));
            }
        }
        d.extend(e.iter().map(|&x| x as i32));
        let mut mask = 0u64;
        for (i, &x) in e.iter().enumerate() {
            if x > 0 {
                mask |= 1 << (i % 64);
            }
        }
        Mono { d: d.into_boxed_slice(), mask }
    }

    #[inline]
    fn exps<'a>(&self, m: &'a Mono) -> &'a [i32] {
        &m.d[self.klen..]
    }

    fn exps_u32(&self, m: &Mono) -> Vec<u32> {
        self.exps(m).iter().map(|&x| x as u32).collect()
    }

    #[inline]
    fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        a.d[..self.klen].cmp(&b.d[..self.klen])
    }

    #[inline]
    fn mul(&self, a: &Mono, b: &Mono) -> Mono {
        let d: Box<[i32]> = a.d.iter().zip(b.d.iter()).map(|(x, y)| x + y).collect();
        Mono { d, mask: a.mask | b.mask }
    }

    fn div(&self, a: &Mono, b: &Mono) -> Mono {
        let e: Vec<u32> = self.exps(a).iter().zip(self.exps(b)).map(|(x, y)| (x - y) as u32).collect();
        self.mono(&e)
    }

    #[inline]
    fn divides(&self, a: &Mono, b: &Mono) -> bool {
        if a.mask & !b.mask != 0 {
            return false;
        }
        self.exps(a).iter().zip(self.exps(b)).all(|(x, y)| x <= y)
    }

    fn lcm(&self, a: &Mono, b: &Mono) -> Mono {
        let e: Vec<u32> = self.exps(a).iter().zip(self.exps(b)).map(|(x, y)| *x.max(y) as u32).collect();
        self.mono(&e)
    }

    fn coprime(&self, a: &Mono, b: &Mono) -> bool {
        self.exps(a).iter().zip(self.exps(b)).all(|(x, y)| *x == 0 || *y == 0)
    }

    /// Sugar degree: the weighted degree for a positive weight order, else the
    /// total degree.
    fn deg(&self, m: &Mono) -> u32 {
        match &self.order {
            MonomialOrder::Weighted(w) | MonomialOrder::WeightedLow(w) if w.iter().all(|&x| x > 0) => m.d[0] as u32,
            _ => self.exps(m).iter().map(|&x| x as u32).sum(),
        }
    }
}

type Terms = Vec<(Mono, BigInt)>;

#[derive(Clone)]
struct GPoly<C = BigInt> {
    t: Vec<(Mono, C)>,
    sugar: u32,
}

impl<C> GPoly<C> {
    fn lm(&self) -> &Mono {
        &self.t[0].0
    }
    fn lc(&self) -> &C {
        &self.t[0].1
    }
}

fn content(t: &[(Mono, BigInt)]) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in t {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn make_primitive(t: &mut Terms) {
    if t.is_empty() {
        return;
    }
    let mut g = content(t);
    if t[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, c) in t.iter_mut() {
            *c = &*c / &g;
        }
    }
}

impl Ctx {
    fn terms_of(&self, p: &MultiPoly) -> Terms {
        let mut den = BigInt::one();
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
        let mut t: Terms = p.terms().map(|(e, c)| (self.mono(e), (c * BigRat::from_integer(den.clone())).to_integer())).collect();
        t.sort_by(|a, b| self.cmp(&b.0, &a.0));
        make_primitive(&mut t);
        t
    }

    fn to_poly(&self, ring: &Ring, t: &[(Mono, BigInt)], mult: &BigRat) -> MultiPoly {
        MultiPoly::from_terms(ring, t.iter().map(|(m, c)| (self.exps_u32(m), BigRat::from_integer(c.clone()) / mult)))
    }

    fn poly_deg(&self, t: &[(Mono, BigInt)]) -> u32 {
        t.iter().map(|(m, _)| self.deg(m)).max().unwrap_or(0)
    }

    fn poly_deg_mod(&self, t: &[(Mono, u64)]) -> u32 {
        t.iter().map(|(m, _)| self.deg(m)).max().unwrap_or(0)
    }

    /// `a*cur - b*m*g`; `cur` ascending, `g` descending, result ascending.
    fn sub_mul(&self, cur: Terms, a: &BigInt, b: &BigInt, m: &Mono, g: &[(Mono, BigInt)]) -> Terms {
        let mut out = Vec::with_capacity(cur.len() + g.len());
        let mut gi = g.iter().rev().peekable();
        let scale_cur = !a.is_one();
        let mut ci = cur.into_iter().peekable();
        loop {
            let ord = match (ci.peek(), gi.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (Some((cm, _)), Some((gm, _))) => {
                    let pm = self.mul(m, gm);
                    let o = self.cmp(cm, &pm);
                    if o == Ordering::Greater {
                        let (_, gc) = gi.next().unwrap();
                        out.push((pm, -(b * gc)));
                        continue;
                    }
                    o
                }
            };
            match ord {
                Ordering::Less => {
                    let (cm, cc) = ci.next().unwrap();
                    out.push((cm, if scale_cur { cc * a } else { cc }));
                }
                Ordering::Greater => {
                    let (gm, gc) = gi.next().unwrap();
                    out.push((self.mul(m, gm), -(b * gc)));
                }
                Ordering::Equal => {
                    let (cm, cc) = ci.next().unwrap();
                    let (_, gc) = gi.next().unwrap();
                    let c = if scale_cur { cc * a } else { cc } - b * gc;
                    if !c.is_zero() {
                        out.push((cm, c));
                    }
                }
            }
        }
        out
    }

    fn find_reducer<C>(&self, m: &Mono, basis: &[GPoly<C>], active: &[usize]) -> Option<usize> {
        let mut best: Option<usize> = None;
        for &i in active {
            let g = &basis[i];
            if self.divides(g.lm(), m) && best.is_none_or(|b| g.t.len() < basis[b].t.len()) {
                best = Some(i);
            }
        }
        best
    }

    /// Full reduction. Returns the remainder (descending, not yet primitive),
    /// the factor `mult` with `remainder = mult * nf(p)`, and the sugar.
    fn reduce(&self, p: Terms, sugar: u32, basis: &[GPoly], active: &[usize], top_only: bool) -> (Terms, BigRat, u32) {
        let mut cur: Terms = p;
        cur.reverse();
        let mut rem: Terms = Vec::new();
        let mut mult = BigRat::one();
        let mut sugar = sugar;
        let mut steps = 0usize;
        while let Some((lm, lc)) = cur.last().cloned() {
            if top_only && !rem.is_empty() {
                // keep the tail as is
                rem.extend(cur.into_iter().rev());
                break;
            }
            match self.find_reducer(&lm, basis, active) {
                None => {
                    cur.pop();
                    rem.push((lm, lc));
                }
                Some(i) => {
                    let g = &basis[i];
                    let gl = g.lc();
                    let d = lc.gcd(gl);
                    let a = gl / &d;
                    let b = &lc / &d;
                    let (a, b) = if a.is_negative() { (-a, -b) } else { (a, b) };
                    let m = self.div(&lm, g.lm());
                    sugar = sugar.max(g.sugar + self.deg(&m));
                    cur.pop();
                    if !a.is_one() {
                        for (_, c) in rem.iter_mut() {
                            *c *= &a;
                        }
                        mult *= BigRat::from_integer(a.clone());
                    }
                    cur = self.sub_mul(cur, &a, &b, &m, &g.t[1..]);
                    steps += 1;
                    if steps.is_multiple_of(8) {
                        let mut gc = content(&rem);
                        for (_, c) in &cur {
                            if gc.is_one() {
                                break;
                            }
                            gc = gc.gcd(c);
                        }
                        if !gc.is_zero() && !gc.is_one() {
                            for (_, c) in rem.iter_mut().chain(cur.iter_mut()) {
                                *c = &*c / &gc;
                            }
                            mult /= BigRat::from_integer(gc);
                        }
                    }
                }
            }
        }
        (rem, mult, sugar)
    }

    fn spoly(&self, f: &GPoly, g: &GPoly, lcm: &Mono) -> Terms {
        let d = f.lc().gcd(g.lc());
        let a = g.lc() / &d;
        let b = f.lc() / &d;
        let mf = self.div(lcm, f.lm());
        let mg = self.div(lcm, g.lm());
        // a*mf*f - b*mg*g, leading terms cancel
        let mut cur: Terms = f.t[1..].iter().map(|(m, c)| (self.mul(&mf, m), c.clone())).collect();
        cur.reverse();
        let mut out = self.sub_mul(cur, &a, &b, &mg, &g.t[1..]);
        out.reverse();
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbStats {
    pub spairs_reduced: usize,
    pub zero_reductions: usize,
    pub pairs_skipped: usize,
}

/// A reduced Gröbner basis (monic, sorted by decreasing leading monomial).
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    order: MonomialOrder,
    polys: Vec<MultiPoly>,
    pub stats: GbStats,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
}

pub fn groebner_basis(gens: &[MultiPoly], order: &MonomialOrder, budget: usize) -> Result<GroebnerBasis, GbError> {
    let first = gens.first().ok_or(GbError::Empty)?;
    let ring = first.ring().clone();
    for g in gens {
        if g.ring() != &ring {
            return Err(GbError::ContextMismatch);
        }
    }
    if let MonomialOrder::WeightedLow(w) = order {
        if w.len() != ring.len() || w.iter().any(|&x| x <= 0) {
            return Err(GbError::InvalidOrder);
        }
    }
    let ctx = Ctx::new(ring.len(), order);
    let mut stats = GbStats::default();
    let mut basis: Vec<GPoly> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: BTreeMap<(u32, Vec<i32>, usize, usize), Pair> = BTreeMap::new();

    // seed: insert the generators one at a time, sorted by leading monomial
    let mut input: Vec<Terms> = gens.iter().map(|g| ctx.terms_of(g)).filter(|t| !t.is_empty()).collect();
    input.sort_by(|a, b| ctx.cmp(&a[0].0, &b[0].0).then_with(|| a.len().cmp(&b.len())));
    let mut queue: Vec<GPoly> = input
        .into_iter()
        .map(|t| {
            let s = ctx.poly_deg(&t);
            GPoly { t, sugar: s }
        })
        .collect();
    queue.reverse();

    loop {
        let next: Option<GPoly> = if let Some(p) = queue.pop() {
            let (mut rem, _, sugar) = ctx.reduce(p.t, p.sugar, &basis, &active, false);
            if rem.is_empty() {
                None
            } else {
                make_primitive(&mut rem);
                Some(GPoly { t: rem, sugar })
            }
        } else {
            let key = match pairs.keys().next() {
                Some(k) => k.clone(),
                None => break,
            };
            let pair = pairs.remove(&key).unwrap();
            if stats.spairs_reduced >= budget {
                return Err(GbError::BudgetExceeded(stats.spairs_reduced));
            }
            stats.spairs_reduced += 1;
            let (f, g) = (&basis[pair.i], &basis[pair.j]);
            let sugar = (f.sugar + ctx.deg(&pair.lcm) - ctx.deg(f.lm())).max(g.sugar + ctx.deg(&pair.lcm) - ctx.deg(g.lm()));
            let s = ctx.spoly(f, g, &pair.lcm);
            let (mut rem, _, sugar) = ctx.reduce(s, sugar, &basis, &active, false);
            if rem.is_empty() {
                stats.zero_reductions += 1;
                None
            } else {
                make_primitive(&mut rem);
                Some(GPoly { t: rem, sugar })
            }
        };
        if let Some(h) = next {
            let k = basis.len();
            basis.push(h);
            update_pairs(&ctx, &basis, &mut active, &mut pairs, k, &mut stats);
        }
    }

    // interreduce the minimal basis
    let mut out: Vec<GPoly> = Vec::new();
    let mut act = active.clone();
    act.sort_by(|&a, &b| ctx.cmp(basis[a].lm(), basis[b].lm()));
    for &i in &act {
        let others: Vec<usize> = act.iter().copied().filter(|&j| j != i).collect();
        let g = &basis[i];
        let head = g.t[0].clone();
        let (tail, mult, _) = ctx.reduce(g.t[1..].to_vec(), g.sugar, &basis, &others, false);
        // g = head + tail, tail reduces to tail_nf = rem/mult
        let mut t: Terms = Vec::with_capacity(tail.len() + 1);
        let num = mult.numer().clone();
        let den = mult.denom().clone();
        // head*mult ... scale to integers: head * num + rem * den, all over num
        t.push((head.0, head.1 * &num));
        for (m, c) in tail {
            t.push((m, c * &den));
        }
        make_primitive(&mut t);
        out.push(GPoly { t, sugar: g.sugar });
    }
    out.sort_by(|a, b| ctx.cmp(b.lm(), a.lm()));
    let polys = out
        .iter()
        .map(|g| {
            let lc = BigRat::from_integer(g.lc().clone());
            ctx.to_poly(&ring, &g.t, &lc)
        })
        .collect();
    Ok(GroebnerBasis { ring, order: order.clone(), polys, stats })
}

fn update_pairs<C>(
    ctx: &Ctx,
    basis: &[GPoly<C>],
    active: &mut Vec<usize>,
    pairs: &mut BTreeMap<(u32, Vec<i32>, usize, usize), Pair>,
    k: usize,
    stats: &mut GbStats,
) {
    let h = &basis[k];
    let hl = h.lm();
    // new pairs (i, k)
    let cand: Vec<(usize, Mono, bool)> = active
        .iter()
        .map(|&i| {
            let l = ctx.lcm(basis[i].lm(), hl);
            (i, l, ctx.coprime(basis[i].lm(), hl))
        })
        .collect();
    // criterion M: drop (i,k) when some (j,k) has lcm properly dividing it
    let n = cand.len();
    let mut keep = vec![true; n];
    for a in 0..n {
        for b in 0..n {
            if a != b && keep[b] && cand[b].1 != cand[a].1 && ctx.divides(&cand[b].1, &cand[a].1) {
                keep[a] = false;
                break;
            }
        }
    }
    // criterion F plus the product criterion per lcm class
    let mut by_lcm: HashMap<Mono, Vec<usize>> = HashMap::new();
    for (a, c) in cand.iter().enumerate() {
        if keep[a] {
            by_lcm.entry(c.1.clone()).or_default().push(a);
        }
    }
    let mut new_pairs: Vec<usize> = Vec::new();
    for (_, members) in by_lcm {
        if members.iter().any(|&a| cand[a].2) {
            stats.pairs_skipped += members.len();
            continue;
        }
        let first = *members.iter().min_by_key(|&&a| cand[a].0).unwrap();
        stats.pairs_skipped += members.len() - 1;
        new_pairs.push(first);
    }
    stats.pairs_skipped += keep.iter().filter(|&&x| !x).count();
    // chain criterion on old pairs
    let lcm_with: HashMap<usize, Mono> = cand.iter().map(|(i, l, _)| (*i, l.clone())).collect();
    let doomed: Vec<_> = pairs
        .iter()
        .filter(|(_, p)| {
            ctx.divides(hl, &p.lcm)
                && lcm_with.get(&p.i).is_some_and(|l| *l != p.lcm)
                && lcm_with.get(&p.j).is_some_and(|l| *l != p.lcm)
        })
        .map(|(k, _)| k.clone())
        .collect();
    stats.pairs_skipped += doomed.len();
    for k in doomed {
        pairs.remove(&k);
    }
    for a in new_pairs {
        let (i, l) = (cand[a].0, cand[a].1.clone());
        let f = &basis[i];
        let sugar = (f.sugar + ctx.deg(&l) - ctx.deg(f.lm())).max(h.sugar + ctx.deg(&l) - ctx.deg(hl));
        pairs.insert((sugar, l.d[..ctx.klen].to_vec(), i, k), Pair { i, j: k, lcm: l });
    }
    // drop basis elements whose leading monomial h divides
    active.retain(|&i| !ctx.divides(hl, basis[i].lm()));
    active.push(k);
}

/// Primes for the modular engine: `2^61 - 1` and `2^31 - 1`.
pub const MODULAR_PRIMES: [u64; 2] = [2_305_843_009_213_693_951, 2_147_483_647];

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn rat_mod(q: &BigRat, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = q.numer().mod_floor(&pb);
    let d = q.denom().mod_floor(&pb);
    if d.is_zero() {
        return None;
    }
    let n: u64 = n.try_into().ok()?;
    let d: u64 = d.try_into().ok()?;
    Some(mulmod(n, invmod(d, p), p))
}

type MTerms = Vec<(Mono, u64)>;

impl Ctx {
    fn terms_of_mod(&self, q: &MultiPoly, p: u64) -> Option<MTerms> {
        let mut t: MTerms = Vec::new();
        for (e, c) in q.terms() {
            let c = rat_mod(c, p)?;
            if c != 0 {
                t.push((self.mono(e), c));
            }
        }
        t.sort_by(|a, b| self.cmp(&b.0, &a.0));
        make_monic(&mut t, p);
        Some(t)
    }

    /// `cur - c*m*g`; `cur` ascending, `g` descending, result ascending.
    fn sub_mul_mod(&self, cur: MTerms, c: u64, m: &Mono, g: &[(Mono, u64)], p: u64) -> MTerms {
        let mut out = Vec::with_capacity(cur.len() + g.len());
        let mut gi = g.iter().rev().peekable();
        let mut ci = cur.into_iter().peekable();
        let neg = |x: u64| if x == 0 { 0 } else { p - x };
        let mut pending: Option<Mono> = None;
        loop {
            if pending.is_none() {
                pending = gi.peek().map(|(gm, _)| self.mul(m, gm));
            }
            match (ci.peek(), &pending) {
                (None, None) => break,
                (Some(_), None) => out.push(ci.next().unwrap()),
                (None, Some(_)) => {
                    let (_, gc) = gi.next().unwrap();
                    out.push((pending.take().unwrap(), neg(mulmod(c, *gc, p))));
                }
                (Some((cm, _)), Some(pm)) => match self.cmp(cm, pm) {
                    Ordering::Less => out.push(ci.next().unwrap()),
                    Ordering::Greater => {
                        let (_, gc) = gi.next().unwrap();
                        out.push((pending.take().unwrap(), neg(mulmod(c, *gc, p))));
                    }
                    Ordering::Equal => {
                        let (cm, cc) = ci.next().unwrap();
                        let (_, gc) = gi.next().unwrap();
                        pending = None;
                        let v = (cc + p - mulmod(c, *gc, p)) % p;
                        if v != 0 {
                            out.push((cm, v));
                        }
                    }
                },
            }
        }
        out
    }

    /// Full reduction modulo `p`; the result is monic and descending.
    fn reduce_mod(&self, t: MTerms, sugar: u32, basis: &[GPoly<u64>], active: &[usize], p: u64) -> (MTerms, u32) {
        let mut cur = t;
        cur.reverse();
        let mut rem: MTerms = Vec::new();
        let mut sugar = sugar;
        while let Some((lm, lc)) = cur.pop() {
            match self.find_reducer(&lm, basis, active) {
                None => rem.push((lm, lc)),
                Some(i) => {
                    let g = &basis[i];
                    let m = self.div(&lm, g.lm());
                    sugar = sugar.max(g.sugar + self.deg(&m));
                    cur = self.sub_mul_mod(cur, lc, &m, &g.t[1..], p);
                }
            }
        }
        make_monic(&mut rem, p);
        (rem, sugar)
    }

    fn spoly_mod(&self, f: &GPoly<u64>, g: &GPoly<u64>, lcm: &Mono, p: u64) -> MTerms {
        let mf = self.div(lcm, f.lm());
        let mg = self.div(lcm, g.lm());
        let mut cur: MTerms = f.t[1..].iter().map(|(m, c)| (self.mul(&mf, m), *c)).collect();
        cur.reverse();
        let mut out = self.sub_mul_mod(cur, 1, &mg, &g.t[1..], p);
        out.reverse();
        out
    }
}

fn make_monic(t: &mut MTerms, p: u64) {
    if let Some((_, lc)) = t.first() {
        if *lc != 1 {
            let inv = invmod(*lc, p);
            for (_, c) in t.iter_mut() {
                *c = mulmod(*c, inv, p);
            }
        }
    }
}

/// Initial ideal of the ideal generated by the reductions of `gens` modulo the
/// prime `p`. For all but finitely many primes this is the initial ideal over
/// the rationals; callers compare two primes to guard against bad reduction.
pub fn initial_ideal_modular(
    gens: &[MultiPoly],
    order: &MonomialOrder,
    budget: usize,
    p: u64,
) -> Result<(MonomialIdeal, GbStats), GbError> {
    let first = gens.first().ok_or(GbError::Empty)?;
    let ring = first.ring().clone();
    if gens.iter().any(|g| g.ring() != &ring) {
        return Err(GbError::ContextMismatch);
    }
    if let MonomialOrder::WeightedLow(w) = order {
        if w.len() != ring.len() || w.iter().any(|&x| x <= 0) {
            return Err(GbError::InvalidOrder);
        }
    }
    let ctx = Ctx::new(ring.len(), order);
    let mut stats = GbStats::default();
    let mut basis: Vec<GPoly<u64>> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: BTreeMap<(u32, Vec<i32>, usize, usize), Pair> = BTreeMap::new();
    let mut input: Vec<MTerms> = Vec::new();
    for g in gens {
        let t = ctx.terms_of_mod(g, p).ok_or(GbError::BadPrime(p))?;
        if !t.is_empty() {
            input.push(t);
        }
    }
    input.sort_by(|a, b| ctx.cmp(&b[0].0, &a[0].0).then_with(|| b.len().cmp(&a.len())));
    loop {
        let next = if let Some(t) = input.pop() {
            let s = ctx.poly_deg_mod(&t);
            let (rem, sugar) = ctx.reduce_mod(t, s, &basis, &active, p);
            (!rem.is_empty()).then_some(GPoly { t: rem, sugar })
        } else {
            let Some(key) = pairs.keys().next().cloned() else { break };
            let pair = pairs.remove(&key).unwrap();
            if stats.spairs_reduced >= budget {
                return Err(GbError::BudgetExceeded(stats.spairs_reduced));
            }
            stats.spairs_reduced += 1;
            let (f, g) = (&basis[pair.i], &basis[pair.j]);
            let s = ctx.spoly_mod(f, g, &pair.lcm, p);
            let (rem, sugar) = ctx.reduce_mod(s, key.0, &basis, &active, p);
            if rem.is_empty() {
                stats.zero_reductions += 1;
            }
            (!rem.is_empty()).then_some(GPoly { t: rem, sugar })
        };
        if let Some(h) = next {
            let k = basis.len();
            basis.push(h);
            update_pairs(&ctx, &basis, &mut active, &mut pairs, k, &mut stats);
        }
    }
    let lms: Vec<Vec<u32>> = active.iter().map(|&i| ctx.exps_u32(basis[i].lm())).collect();
    Ok((MonomialIdeal::new(ring.len(), lms), stats))
}


impl GroebnerBasis {
    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn leading_monomials(&self) -> Vec<Vec<u32>> {
        self.polys.iter().map(|p| p.leading_term(&self.order).unwrap().0.clone()).collect()
    }

    /// Unique normal form of `p` modulo the ideal.
    pub fn normal_form(&self, p: &MultiPoly) -> MultiPoly {
        let ctx = Ctx::new(self.ring.len(), &self.order);
        let basis: Vec<GPoly> = self.polys.iter().map(|g| GPoly { t: ctx.terms_of(g), sugar: 0 }).collect();
        let active: Vec<usize> = (0..basis.len()).collect();
        if p.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        // remember the scalar lost when making p primitive
        let t = ctx.terms_of(p);
        let lt_orig = p.leading_term(&self.order).unwrap().1.clone();
        let lt_int = BigRat::from_integer(t[0].1.clone());
        let pre = lt_int / lt_orig;
        let (rem, mult, _) = ctx.reduce(t, 0, &basis, &active, false);
        ctx.to_poly(&self.ring, &rem, &(mult * pre))
    }

    pub fn contains(&self, p: &MultiPoly) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn initial_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.ring.len(), self.leading_monomials())
    }

    pub fn to_json(&self) -> GbJson {
        GbJson {
            order: self.order.clone(),
            basis: self.polys.iter().map(|p| p.to_json()).collect(),
            spairs_used: self.stats.spairs_reduced,
        }
    }

    pub fn from_json(j: &GbJson) -> Option<GroebnerBasis> {
        let polys: Vec<MultiPoly> = j.basis.iter().map(MultiPoly::from_json).collect::<Result<_, _>>().ok()?;
        let ring = polys.first()?.ring().clone();
        let polys = polys.into_iter().map(|p| p.remap(&ring, &(0..ring.len()).collect::<Vec<_>>())).collect();
        Some(GroebnerBasis {
            ring,
            order: j.order.clone(),
            polys,
            stats: GbStats { spairs_reduced: j.spairs_used, ..Default::default() },
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GbJson {
    pub order: MonomialOrder,
    pub basis: Vec<crate::poly::PolyJson>,
    pub spairs_used: usize,
}

pub fn initial_ideal(gens: &[MultiPoly], order: &MonomialOrder, budget: usize) -> Result<MonomialIdeal, GbError> {
    Ok(groebner_basis(gens, order, budget)?.initial_ideal())
}

/// True when the two generator lists span the same ideal.
pub fn ideal_equal(i: &[MultiPoly], j: &[MultiPoly], order: &MonomialOrder, budget: usize) -> Result<bool, GbError> {
    let (i, j): (Vec<_>, Vec<_>) = (i.iter().filter(|p| !p.is_zero()).cloned().collect(), j.iter().filter(|p| !p.is_zero()).cloned().collect());
    match (i.is_empty(), j.is_empty()) {
        (true, true) => return Ok(true),
        (true, false) | (false, true) => return Ok(false),
        _ => {}
    }
    let gi = groebner_basis(&i, order, budget)?;
    if !j.iter().all(|p| gi.contains(p)) {
        return Ok(false);
    }
    let gj = groebner_basis(&j, order, budget)?;
    Ok(i.iter().all(|p| gj.contains(p)))
}

/// Monomial ideal given by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialIdeal {
    n: usize,
    gens: Vec<Vec<u32>>,
}

impl MonomialIdeal {
    pub fn new(n: usize, gens: Vec<Vec<u32>>) -> Self {
        let mut set: BTreeSet<Vec<u32>> = BTreeSet::new();
        for g in gens {
            assert_eq!(g.len(), n);
            set.insert(g);
        }
        let all: Vec<Vec<u32>> = set.into_iter().collect();
        let gens = all.iter().filter(|g| !all.iter().any(|h| h != *g && divides(h, g))).cloned().collect();
        MonomialIdeal { n, gens }
    }

    pub fn zero(n: usize) -> Self {
        MonomialIdeal { n, gens: vec![] }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Vec<u32>] {
        &self.gens
    }

    pub fn contains(&self, m: &[u32]) -> bool {
        self.gens.iter().any(|g| divides(g, m))
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.iter().all(|&x| x == 0))
    }

    /// `(J : f)`.
    pub fn colon(&self, f: &[u32]) -> MonomialIdeal {
        let gens = self.gens.iter().map(|g| g.iter().zip(f).map(|(a, b)| a.saturating_sub(*b)).collect()).collect();
        MonomialIdeal::new(self.n, gens)
    }

    pub fn add_gen(&self, m: Vec<u32>) -> MonomialIdeal {
        let mut g = self.gens.clone();
        g.push(m);
        MonomialIdeal::new(self.n, g)
    }

    pub fn lcm_all(&self) -> Vec<u32> {
        self.gens.iter().fold(vec![0; self.n], |a, g| mono_lcm(&a, g))
    }
}

pub fn monomial_colon(j: &MonomialIdeal, f: &[u32]) -> MonomialIdeal {
    j.colon(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ring;
    use proptest::prelude::*;

    fn p(r: &Ring, s: &str) -> MultiPoly {
        MultiPoly::parse(r, s).unwrap()
    }

    #[test]
    fn small_basis() {
        let r = ring(&["x", "y"]);
        let gb = groebner_basis(&[p(&r, "x^2 - y"), p(&r, "y^2")], &MonomialOrder::Lex, 100).unwrap();
        let got: BTreeSet<String> = gb.polys().iter().map(|q| q.to_string()).collect();
        // x^2 - y, y^2 and the S-pair consequence x*y... check via membership
        assert!(gb.contains(&p(&r, "x^2 - y")));
        assert!(gb.contains(&p(&r, "y^2")));
        assert!(!gb.contains(&p(&r, "x")));
        assert!(got.contains("y^2"));
        let gb = groebner_basis(&[p(&r, "3x^2 + 6y")], &MonomialOrder::GrevLex, 100).unwrap();
        assert_eq!(gb.polys(), &[p(&r, "x^2 + 2y")]);
    }

    #[test]
    fn cyclic3() {
        let r = ring(&["x", "y", "z"]);
        let gens = vec![p(&r, "x+y+z"), p(&r, "xy+yz+zx"), p(&r, "xyz-1")];
        for o in [MonomialOrder::Lex, MonomialOrder::GrevLex] {
            let gb = groebner_basis(&gens, &o, 1000).unwrap();
            for g in &gens {
                assert!(gb.contains(g));
            }
            // known leading monomials of the lex basis: x, y^2, z^3
            if o == MonomialOrder::Lex {
                let lm: BTreeSet<_> = gb.leading_monomials().into_iter().collect();
                assert_eq!(lm, [vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]].into_iter().collect());
            }
        }
    }

    #[test]
    fn initial_ideal_examples() {
        let r = ring(&["x", "y"]);
        let ii = initial_ideal(&[p(&r, "x^2 - y")], &MonomialOrder::Lex, 10).unwrap();
        assert_eq!(ii.gens(), &[vec![2, 0]]);
        let ii = initial_ideal(&[p(&r, "x^2"), p(&r, "xy")], &MonomialOrder::GrevLex, 10).unwrap();
        assert_eq!(ii, MonomialIdeal::new(2, vec![vec![2, 0], vec![1, 1]]));
    }

    #[test]
    fn equality_examples() {
        let r = ring(&["x", "y"]);
        let a = [p(&r, "x"), p(&r, "x^2")];
        assert!(ideal_equal(&[p(&r, "x")], &a, &MonomialOrder::GrevLex, 10).unwrap());
        assert!(ideal_equal(&[p(&r, "x+y"), p(&r, "x-y")], &[p(&r, "y"), p(&r, "x")], &MonomialOrder::GrevLex, 10).unwrap());
        assert!(!ideal_equal(&[p(&r, "x")], &[p(&r, "y")], &MonomialOrder::GrevLex, 10).unwrap());
    }

    #[test]
    fn budget_reported() {
        let r = ring(&["x", "y", "z"]);
        let gens = vec![p(&r, "x^2-y"), p(&r, "xy-z")];
        assert!(matches!(groebner_basis(&gens, &MonomialOrder::Lex, 0), Err(GbError::BudgetExceeded(0))));
    }

    #[test]
    fn colon_examples() {
        let j = MonomialIdeal::new(2, vec![vec![2, 0]]);
        assert_eq!(j.colon(&[1, 1]).gens(), &[vec![1, 0]]);
        assert_eq!(j.colon(&[0, 0]), j);
        let j = MonomialIdeal::new(2, vec![vec![2, 0], vec![1, 1], vec![0, 3]]);
        assert_eq!(j.colon(&[0, 1]), MonomialIdeal::new(2, vec![vec![1, 0], vec![0, 2]]));
    }

    #[test]
    fn plucker_is_already_a_basis() {
        let gens = crate::haiman::registry::plucker_ideal();
        let gb = groebner_basis(&gens, &MonomialOrder::GrevLex, 10_000).unwrap();
        assert_eq!(gb.polys().len(), 15);
        assert_eq!(gb.initial_ideal().gens().len(), 15);
        assert!(gb.initial_ideal().gens().iter().all(|g| g.iter().sum::<u32>() == 2));
    }

    fn small_poly(r: Ring) -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..2), -3i64..4), 1..4).prop_map(move |ts| {
            MultiPoly::from_terms(&r, ts.into_iter().map(|((a, b, c), k)| (vec![a, b, c], crate::arith::int(k))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn normal_form_is_linear_projection(g in proptest::collection::vec(small_poly(ring(&["x","y","z"])), 1..3),
                                            a in small_poly(ring(&["x","y","z"])), b in small_poly(ring(&["x","y","z"]))) {
            let r = ring(&["x", "y", "z"]);
            let g: Vec<MultiPoly> = g.into_iter().filter(|q| !q.is_zero()).map(|q| q.remap(&r, &[0,1,2])).collect();
            prop_assume!(!g.is_empty());
            let a = a.remap(&r, &[0,1,2]);
            let b = b.remap(&r, &[0,1,2]);
            if let Ok(gb) = groebner_basis(&g, &MonomialOrder::GrevLex, 2000) {
                let na = gb.normal_form(&a);
                prop_assert_eq!(gb.normal_form(&na), na.clone());
                prop_assert_eq!(gb.normal_form(&a.add(&b)), na.add(&gb.normal_form(&b)));
                prop_assert!(gb.contains(&a.sub(&na)));
                for q in &g { prop_assert!(gb.contains(q)); }
            }
        }

        #[test]
        fn monomial_membership(gens in proptest::collection::vec(proptest::collection::vec(0u32..4, 3), 1..5),
                               m in proptest::collection::vec(0u32..5, 3)) {
            let r = ring(&["x", "y", "z"]);
            let polys: Vec<MultiPoly> = gens.iter().map(|e| MultiPoly::monomial(&r, e.clone(), crate::arith::int(1))).collect();
            let gb = groebner_basis(&polys, &MonomialOrder::GrevLex, 1000).unwrap();
            let mi = MonomialIdeal::new(3, gens.clone());
            let q = MultiPoly::monomial(&r, m.clone(), crate::arith::int(1));
            prop_assert_eq!(gb.contains(&q), gens.iter().any(|g| divides(g, &m)));
            prop_assert_eq!(gb.initial_ideal(), mi.clone());
            for a in mi.gens() { for b in mi.gens() { prop_assert!(a == b || !divides(a, b)); } }
        }

        #[test]
        fn ideal_equal_is_symmetric(g in proptest::collection::vec(small_poly(ring(&["x","y","z"])), 1..3),
                                     h in proptest::collection::vec(small_poly(ring(&["x","y","z"])), 1..3)) {
            let r = ring(&["x", "y", "z"]);
            let g: Vec<MultiPoly> = g.into_iter().map(|q| q.remap(&r, &[0,1,2])).collect();
            let h: Vec<MultiPoly> = h.into_iter().map(|q| q.remap(&r, &[0,1,2])).collect();
            let o = MonomialOrder::GrevLex;
            if let (Ok(a), Ok(b)) = (ideal_equal(&g, &h, &o, 2000), ideal_equal(&h, &g, &o, 2000)) {
                prop_assert_eq!(a, b);
            }
            let mut both = g.clone();
            both.extend(h.iter().cloned());
            let mut gg = g.clone();
            gg.reverse();
            prop_assert!(ideal_equal(&g, &gg, &o, 2000).unwrap_or(true));
        }
    }
}
