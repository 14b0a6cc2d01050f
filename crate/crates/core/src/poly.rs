//! Sparse multivariate polynomials over the rationals.

use crate::arith::{fmt_rat, int, parse_rat, BigRat};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub const MAX_VARS: usize = 1024;

pub type Monomial = Vec<u32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("ring contexts differ")]
    ContextMismatch,
    #[error("too many variables: {0} (limit {MAX_VARS})")]
    TooManyVars(usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division is not exact")]
    NotExact,
    #[error("division by zero polynomial")]
    DivByZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[derive(Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    GrevLex,
    /// Weight vector first, grevlex to break ties.
    Weighted(Vec<i64>),
    /// Weight vector first, then the *smaller* total degree wins, then
    /// reverse lex. A well-order only for strictly positive weights; on a
    /// weighted-homogeneous ideal its leading terms sit in the lowest-degree
    /// parts, so the basis tracks the tangent cone.
    WeightedLow(Vec<i64>),
}


impl MonomialOrder {
    /// `Greater` means `a` is the larger monomial. Variable 0 is the largest.
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => grevlex(a, b),
            MonomialOrder::Weighted(w) => {
                let wa: i64 = a.iter().zip(w).map(|(&e, &x)| e as i64 * x).sum();
                let wb: i64 = b.iter().zip(w).map(|(&e, &x)| e as i64 * x).sum();
                wa.cmp(&wb).then_with(|| grevlex(a, b))
            }
            MonomialOrder::WeightedLow(w) => {
                let wa: i64 = a.iter().zip(w).map(|(&e, &x)| e as i64 * x).sum();
                let wb: i64 = b.iter().zip(w).map(|(&e, &x)| e as i64 * x).sum();
                let da: u64 = a.iter().map(|&e| e as u64).sum();
                let db: u64 = b.iter().map(|&e| e as u64).sum();
                wa.cmp(&wb).then_with(|| db.cmp(&da)).then_with(|| grevlex(a, b))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::GrevLex => "grevlex".into(),
            MonomialOrder::Weighted(w) => format!("weighted{w:?}"),
            MonomialOrder::WeightedLow(w) => format!("weighted-low{w:?}"),
        }
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    if da != db {
        return da.cmp(&db);
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            // smaller exponent in the last differing variable wins
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// `a / b`, assuming `b | a`.
pub fn mono_div(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn mono_deg(a: &[u32]) -> u32 {
    a.iter().sum()
}

/// Variable names shared by all polynomials of one ring.
pub type Ring = Arc<Vec<String>>;

pub fn ring<S: AsRef<str>>(names: &[S]) -> Ring {
    Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect())
}

#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Ring,
    terms: BTreeMap<Monomial, BigRat>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars) && self.terms == other.terms
    }
}
impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(vars: &Ring) -> Self {
        assert!(vars.len() <= MAX_VARS, "too many variables");
        MultiPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Ring, c: BigRat) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &Ring) -> Self {
        Self::constant(vars, BigRat::one())
    }

    pub fn var(vars: &Ring, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, BigRat::one())
    }

    pub fn var_named(vars: &Ring, name: &str) -> Option<Self> {
        vars.iter().position(|v| v == name).map(|i| Self::var(vars, i))
    }

    pub fn monomial(vars: &Ring, exp: Monomial, c: BigRat) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(exp, c);
        p
    }

    pub fn from_terms(vars: &Ring, terms: impl IntoIterator<Item = (Monomial, BigRat)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn ring(&self) -> &Ring {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> BigRat {
        self.terms.get(e).cloned().unwrap_or_else(BigRat::zero)
    }

    /// Adds `c x^e`, dropping the entry if it cancels.
    pub fn add_term(&mut self, e: Monomial, c: BigRat) {
        assert_eq!(e.len(), self.vars.len(), "exponent length");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_ring(&self, other: &Self) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        let mut out = Self::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(mono_mul(ea, eb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Panicking variants for internal use where the ring is known to match.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("ring mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("ring mismatch")
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRat::one())
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.vars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| mono_deg(e)).max()
    }

    /// Largest term under `order`.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &BigRat)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Terms listed from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, BigRat)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    /// Indices of variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }

    pub fn contains_var(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    /// Simultaneous substitution of `images[i]` for variable `i`. The images
    /// may live in a different ring (all in the same one).
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        if images.len() != self.nvars() {
            return Err(PolyError::ContextMismatch);
        }
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(self.clone()),
        };
        for p in images {
            p.same_ring(&images[0])?;
        }
        let mut cache: Vec<Vec<MultiPoly>> = vec![vec![]; self.nvars()];
        let mut out = MultiPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                if powers.is_empty() {
                    powers.push(MultiPoly::one(&target));
                }
                while powers.len() <= k as usize {
                    let next = powers.last().unwrap().mul(&images[i]);
                    powers.push(next);
                }
                t = t.mul(&powers[k as usize]);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Substitutes a single variable, keeping the ring.
    pub fn substitute_var(&self, i: usize, image: &MultiPoly) -> MultiPoly {
        if !self.contains_var(i) {
            return self.clone();
        }
        // p = sum_k x_i^k q_k, then sum_k q_k image^k
        let mut by_power: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[i] = 0;
            by_power.entry(e[i]).or_insert_with(|| Self::zero(&self.vars)).add_term(f, c.clone());
        }
        let mut out = Self::zero(&self.vars);
        let mut power = Self::one(&self.vars);
        let mut k = 0;
        for (j, q) in by_power {
            while k < j {
                power = power.mul(image);
                k += 1;
            }
            out = out.add(&q.mul(&power));
        }
        out
    }

    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * int(e[i] as i64));
            }
        }
        out
    }

    pub fn eval(&self, point: &[BigRat]) -> BigRat {
        let mut acc = BigRat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Moves the polynomial into `target`, sending variable `i` to `map[i]`.
    pub fn remap(&self, target: &Ring, map: &[usize]) -> MultiPoly {
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut f = vec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    f[map[i]] += k;
                }
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Multidegree of every term under integer variable weights, or `None`
    /// when the terms disagree.
    pub fn homogeneous_weight(&self, weights: &[Vec<i64>]) -> Option<Vec<i64>> {
        let mut found: Option<Vec<i64>> = None;
        for e in self.terms.keys() {
            let w = mono_weight(e, weights);
            match &found {
                None => found = Some(w),
                Some(f) if *f != w => return None,
                _ => {}
            }
        }
        found.or_else(|| weights.first().map(|w| vec![0; w.len()]))
    }

    /// Exact quotient `self / d`; fails when the remainder is nonzero.
    pub fn div_exact(&self, d: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.same_ring(d)?;
        let order = MonomialOrder::Lex;
        let (lm, lc) = match d.leading_term(&order) {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(PolyError::DivByZero),
        };
        let mut rem = self.clone();
        let mut q = MultiPoly::zero(&self.vars);
        while let Some((e, c)) = rem.leading_term(&order).map(|(e, c)| (e.clone(), c.clone())) {
            if !divides(&lm, &e) {
                return Err(PolyError::NotExact);
            }
            let t = MultiPoly::monomial(&self.vars, mono_div(&e, &lm), c / &lc);
            rem = rem.sub(&t.mul(d));
            q = q.add(&t);
        }
        Ok(q)
    }

    /// Parses sums of terms such as `-3/2*a*b^2 + eh^2 - y5*y10`.
    ///
    /// Variable names are matched greedily against the ring, so `eh^2` reads
    /// as `e*h^2` when `eh` is not itself a variable. `*` and blanks between
    /// factors are optional.
    pub fn parse(vars: &Ring, src: &str) -> Result<MultiPoly, PolyError> {
        Parser { vars, s: src.as_bytes(), pos: 0 }.poly()
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: self.vars.as_ref().clone(),
            terms: self.terms.iter().map(|(e, c)| TermJson { exp: e.clone(), coeff: fmt_rat(c) }).collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<MultiPoly, PolyError> {
        if j.vars.len() > MAX_VARS {
            return Err(PolyError::TooManyVars(j.vars.len()));
        }
        let vars = ring(&j.vars);
        let mut p = MultiPoly::zero(&vars);
        for t in &j.terms {
            if t.exp.len() != vars.len() {
                return Err(PolyError::ContextMismatch);
            }
            let c = parse_rat(&t.coeff).map_err(|e| PolyError::Parse { pos: 0, msg: e.to_string() })?;
            p.add_term(t.exp.clone(), c);
        }
        Ok(p)
    }

    /// Display with terms in the given order.
    pub fn display_with(&self, order: &MonomialOrder) -> String {
        let terms = self.sorted_terms(order);
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in terms.iter().enumerate() {
            let neg = c < &BigRat::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = fmt_monomial(&self.vars, e);
            if mono.is_empty() {
                out.push_str(&fmt_rat(&a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&fmt_rat(&a));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

pub fn mono_weight(e: &[u32], weights: &[Vec<i64>]) -> Vec<i64> {
    let r = weights.first().map_or(0, |w| w.len());
    let mut w = vec![0i64; r];
    for (i, &k) in e.iter().enumerate() {
        if k > 0 {
            for (a, b) in w.iter_mut().zip(&weights[i]) {
                *a += k as i64 * b;
            }
        }
    }
    w
}

pub fn fmt_monomial(vars: &[String], e: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(vars[i].clone()),
            _ => parts.push(format!("{}^{}", vars[i], k)),
        }
    }
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&MonomialOrder::GrevLex))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

struct Parser<'a> {
    vars: &'a Ring,
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn poly(&mut self) -> Result<MultiPoly, PolyError> {
        let mut out = MultiPoly::zero(self.vars);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if !first => break,
                None => return Err(self.err("empty polynomial")),
                Some(b'+') => {
                    self.pos += 1;
                    int(1)
                }
                Some(b'-') => {
                    self.pos += 1;
                    int(-1)
                }
                Some(_) if first => int(1),
                Some(_) => return Err(self.err("expected + or -")),
            };
            first = false;
            let (e, c) = self.term()?;
            out.add_term(e, c * sign);
        }
        Ok(out)
    }

    fn number(&mut self) -> Option<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn term(&mut self) -> Result<(Monomial, BigRat), PolyError> {
        let mut coeff = int(1);
        let mut exp = vec![0u32; self.vars.len()];
        let mut any = false;
        if let Some(n) = self.number() {
            any = true;
            coeff = BigRat::from_integer(n.into());
            if self.peek() == Some(b'/') {
                self.pos += 1;
                let d = self.number().ok_or_else(|| self.err("expected denominator"))?;
                if d == 0 {
                    return Err(self.err("zero denominator"));
                }
                coeff /= BigRat::from_integer(d.into());
            }
        }
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    continue;
                }
                Some(ch) if ch.is_ascii_alphabetic() || ch == b'_' => {
                    let i = self.var_name()?;
                    let mut k = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        k = self.number().ok_or_else(|| self.err("expected exponent"))? as u32;
                    }
                    exp[i] += k;
                    any = true;
                }
                _ => break,
            }
        }
        if !any {
            return Err(self.err("expected a term"));
        }
        Ok((exp, coeff))
    }

    fn var_name(&mut self) -> Result<usize, PolyError> {
        let rest = &self.s[self.pos..];
        let mut best: Option<(usize, usize)> = None;
        for (i, v) in self.vars.iter().enumerate() {
            let vb = v.as_bytes();
            if rest.starts_with(vb) && best.is_none_or(|(_, l)| vb.len() > l) {
                best = Some((i, vb.len()));
            }
        }
        let (i, l) = best.ok_or_else(|| self.err("unknown variable"))?;
        self.pos += l;
        Ok(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn r3() -> Ring {
        ring(&["x", "y", "z"])
    }

    #[test]
    fn order_examples() {
        use Ordering::*;
        assert_eq!(MonomialOrder::Lex.cmp(&[2, 0], &[1, 1]), Greater);
        assert_eq!(MonomialOrder::GrevLex.cmp(&[3, 0, 0], &[1, 1, 1]), Greater);
        assert_eq!(MonomialOrder::GrevLex.cmp(&[2, 1], &[1, 2]), Greater);
        assert_eq!(MonomialOrder::GrevLex.cmp(&[1, 0, 1], &[0, 2, 0]), Less);
        assert_eq!(MonomialOrder::Weighted(vec![0, 1]).cmp(&[5, 0], &[0, 1]), Less);
    }

    #[test]
    fn parse_display_roundtrip() {
        let r = r3();
        let p = MultiPoly::parse(&r, "x^2 - 3/2*x*y + z - 7").unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.coeff(&[1, 1, 0]), rat(-3, 2));
        assert_eq!(MultiPoly::parse(&r, &p.to_string()).unwrap(), p);
        let q = MultiPoly::parse(&r, "xy^2z - yx").unwrap();
        assert_eq!(q.coeff(&[1, 2, 1]), int(1));
        assert_eq!(q.coeff(&[1, 1, 0]), int(-1));
        assert!(MultiPoly::parse(&r, "x + w").is_err());
        let y = ring(&["y1", "y10", "y2"]);
        let p = MultiPoly::parse(&y, "y10y2 - y1*y1").unwrap();
        assert_eq!(p.coeff(&[0, 1, 1]), int(1));
        assert_eq!(p.coeff(&[2, 0, 0]), int(-1));
    }

    #[test]
    fn substitute_examples() {
        let r = ring(&["x", "y"]);
        let p = MultiPoly::parse(&r, "x^2").unwrap();
        let img = vec![MultiPoly::parse(&r, "x+y").unwrap(), MultiPoly::var(&r, 1)];
        assert_eq!(p.substitute(&img).unwrap(), MultiPoly::parse(&r, "x^2+2xy+y^2").unwrap());
        let id: Vec<_> = (0..2).map(|i| MultiPoly::var(&r, i)).collect();
        let q = MultiPoly::parse(&r, "3x^3y - y + 1/5").unwrap();
        assert_eq!(q.substitute(&id).unwrap(), q);
    }

    #[test]
    fn json_roundtrip() {
        let r = r3();
        let p = MultiPoly::parse(&r, "x^2 - 3/2*x*y + z - 7").unwrap();
        let j = serde_json::to_string(&p.to_json()).unwrap();
        let back: PolyJson = serde_json::from_str(&j).unwrap();
        assert_eq!(MultiPoly::from_json(&back).unwrap(), p);
    }

    #[test]
    fn exact_division() {
        let r = r3();
        let a = MultiPoly::parse(&r, "x - y").unwrap();
        let b = MultiPoly::parse(&r, "x^2 + z").unwrap();
        assert_eq!(a.mul(&b).div_exact(&a).unwrap(), b);
        assert_eq!(MultiPoly::parse(&r, "x^2+1").unwrap().div_exact(&a), Err(PolyError::NotExact));
    }

    #[test]
    fn derivative_and_weight() {
        let r = r3();
        let p = MultiPoly::parse(&r, "x^3y + 2xy").unwrap();
        assert_eq!(p.derivative(0), MultiPoly::parse(&r, "3x^2y + 2y").unwrap());
        let w = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        assert_eq!(MultiPoly::parse(&r, "x*y - z").unwrap().homogeneous_weight(&w), Some(vec![1, 1]));
        assert_eq!(MultiPoly::parse(&r, "x - z").unwrap().homogeneous_weight(&w), None);
    }

    fn poly_strat() -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..6), 0..5).prop_map(|ts| {
            let r = ring(&["x", "y", "z"]);
            MultiPoly::from_terms(&r, ts.into_iter().map(|((a, b, c), k)| (vec![a, b, c], int(k))))
        })
    }

    proptest! {
        #[test]
        fn substitute_is_ring_hom(p in poly_strat(), q in poly_strat(), imgs in proptest::collection::vec(poly_strat(), 3)) {
            let r = p.ring().clone();
            let imgs: Vec<MultiPoly> = imgs.into_iter().map(|i| MultiPoly::from_terms(&r, i.terms().map(|(e, c)| (e.clone(), c.clone())))).collect();
            let lhs = p.mul(&q).substitute(&imgs).unwrap();
            let rhs = p.substitute(&imgs).unwrap().mul(&q.substitute(&imgs).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn orders_are_multiplicative(a in proptest::collection::vec(0u32..4, 3), b in proptest::collection::vec(0u32..4, 3), c in proptest::collection::vec(0u32..4, 3)) {
            for o in [MonomialOrder::Lex, MonomialOrder::GrevLex, MonomialOrder::Weighted(vec![2, -1, 1])] {
                let ab = o.cmp(&a, &b);
                prop_assert_eq!(o.cmp(&mono_mul(&a, &c), &mono_mul(&b, &c)), ab);
            }
        }
    }
}
