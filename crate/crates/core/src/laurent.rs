//! Laurent polynomials with integer coefficients on the lattice `(1/D) Z^r`.
//!
//! An exponent vector `e` stands for `t^(e/D)`. With `D = 2` half-integer
//! exponents are exact; evaluation then goes through `s_i` with `s_i^D = t_i`.

use crate::arith::{rat_pow, BigRat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    r: usize,
    scale: u32,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    let g = num_integer::gcd(a, b);
    a / g * b
}

impl LaurentPoly {
    pub fn zero(r: usize, scale: u32) -> Self {
        assert!(scale >= 1);
        LaurentPoly { r, scale, terms: BTreeMap::new() }
    }

    pub fn one(r: usize) -> Self {
        Self::monomial(r, 1, vec![0; r], BigInt::one())
    }

    /// `c t^(e/scale)`.
    pub fn monomial(r: usize, scale: u32, e: Vec<i64>, c: BigInt) -> Self {
        let mut p = Self::zero(r, scale);
        p.add_term(e, c);
        p
    }

    /// `t^w` for an integral weight.
    pub fn char_of(w: &[i64]) -> Self {
        Self::monomial(w.len(), 1, w.to_vec(), BigInt::one())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
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

    pub fn add_term(&mut self, e: Vec<i64>, c: BigInt) {
        assert_eq!(e.len(), self.r, "weight length");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Coefficient of `t^(e/scale)`.
    pub fn coeff(&self, e: &[i64]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Same polynomial on the finer lattice `(1/new) Z^r`.
    pub fn rescale(&self, new: u32) -> Self {
        assert!(new.is_multiple_of(self.scale), "scale must be a multiple");
        let f = (new / self.scale) as i64;
        LaurentPoly {
            r: self.r,
            scale: new,
            terms: self.terms.iter().map(|(e, c)| (e.iter().map(|x| x * f).collect(), c.clone())).collect(),
        }
    }

    /// Coarsest scale representing the same polynomial.
    pub fn normalize(&self) -> Self {
        let mut g = self.scale as i64;
        for e in self.terms.keys() {
            for &x in e {
                g = num_integer::gcd(g, x);
            }
        }
        let g = g.max(1);
        LaurentPoly {
            r: self.r,
            scale: self.scale / g as u32,
            terms: self.terms.iter().map(|(e, c)| (e.iter().map(|x| x / g).collect(), c.clone())).collect(),
        }
    }

    fn align(&self, other: &Self) -> (Self, Self) {
        assert_eq!(self.r, other.r, "rank mismatch");
        let s = lcm_u32(self.scale, other.scale);
        (self.rescale(s), other.rescale(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.align(other);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale_int(&-BigInt::one())
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.r, self.scale);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.align(other);
        let mut out = Self::zero(a.r, a.scale);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                out.add_term(ea.iter().zip(eb).map(|(x, y)| x + y).collect(), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.r).rescale(self.scale);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Multiplies by `t^(e/scale)` on this polynomial's lattice.
    pub fn shift(&self, e: &[i64]) -> Self {
        LaurentPoly {
            r: self.r,
            scale: self.scale,
            terms: self.terms.iter().map(|(f, c)| (f.iter().zip(e).map(|(x, y)| x + y).collect(), c.clone())).collect(),
        }
    }

    /// `t -> t^{-1}`.
    pub fn invert(&self) -> Self {
        LaurentPoly {
            r: self.r,
            scale: self.scale,
            terms: self.terms.iter().map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone())).collect(),
        }
    }

    /// Renames `t_i` to `t_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.r, self.scale);
        for (e, c) in &self.terms {
            let mut f = vec![0; self.r];
            for (i, &x) in e.iter().enumerate() {
                f[perm[i]] = x;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Replaces each variable `u_i` of this polynomial (which must have scale 1
    /// and nonnegative or negative integer exponents) by `sign_i * t^(w_i/scale)`
    /// in a rank `r_out` ring.
    pub fn substitute_monomials(&self, images: &[(i64, Vec<i64>)], r_out: usize, scale: u32) -> Self {
        assert_eq!(self.scale, 1, "source must be on the integer lattice");
        assert_eq!(images.len(), self.r);
        let mut out = Self::zero(r_out, scale);
        for (e, c) in &self.terms {
            let mut w = vec![0i64; r_out];
            let mut sign = BigInt::one();
            for (i, &k) in e.iter().enumerate() {
                let (s, img) = &images[i];
                for (a, b) in w.iter_mut().zip(img) {
                    *a += k * b;
                }
                if *s < 0 && k.rem_euclid(2) == 1 {
                    sign = -sign;
                }
            }
            out.add_term(w, c * sign);
        }
        out
    }

    /// Value at `t_i = s_i^scale`.
    pub fn eval_s(&self, s: &[BigRat]) -> BigRat {
        assert_eq!(s.len(), self.r);
        let mut acc = BigRat::zero();
        for (e, c) in &self.terms {
            let mut t = BigRat::from_integer(c.clone());
            for (x, &k) in s.iter().zip(e) {
                if k != 0 {
                    t *= rat_pow(x, k);
                }
            }
            acc += t;
        }
        acc
    }

    /// Value at `t = theta`; every exponent must be integral.
    pub fn eval(&self, theta: &[BigRat]) -> BigRat {
        let p = self.normalize();
        assert_eq!(p.scale, 1, "fractional exponents need eval_s");
        p.eval_s(theta)
    }

    /// Sum of the coefficients (value at `t = 1`).
    pub fn value_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn to_json(&self) -> LaurentJson {
        LaurentJson {
            r: self.r,
            scale: self.scale,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.to_string())).collect(),
        }
    }

    pub fn from_json(j: &LaurentJson) -> Option<Self> {
        let mut p = Self::zero(j.r, j.scale);
        for (e, c) in &j.terms {
            if e.len() != j.r {
                return None;
            }
            p.add_term(e.clone(), c.parse().ok()?);
        }
        Some(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentJson {
    pub r: usize,
    pub scale: u32,
    pub terms: Vec<(Vec<i64>, String)>,
}

/// `t_1^2*t_2^-1`, with `t_3^1/2` for fractional exponents.
pub fn fmt_weight(e: &[i64], scale: u32) -> String {
    let mut parts = Vec::new();
    for (i, &x) in e.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let g = num_integer::gcd(x.abs(), scale as i64);
        let (n, d) = (x / g, scale as i64 / g);
        let exp = if d == 1 { n.to_string() } else { format!("{n}/{d}") };
        parts.push(if exp == "1" { format!("t_{}", i + 1) } else { format!("t_{}^{}", i + 1, exp) });
    }
    parts.join("*")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let m = fmt_weight(e, self.scale);
            if m.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&m)?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn t(r: usize, i: usize) -> LaurentPoly {
        let mut e = vec![0; r];
        e[i] = 1;
        LaurentPoly::char_of(&e)
    }

    #[test]
    fn eval_examples() {
        let l = t(2, 0).sub(&t(2, 1));
        assert_eq!(l.eval(&[int(3), int(3)]), int(0));
        let half = LaurentPoly::monomial(1, 2, vec![1], BigInt::one());
        assert_eq!(half.eval_s(&[int(2)]), int(2));
        // K of (x^2, xy) with w = (e1, e2): 1 - t1^2 - t1 t2 + t1^2 t2
        let mut k = LaurentPoly::one(2);
        k.add_term(vec![2, 0], BigInt::from(-1));
        k.add_term(vec![1, 1], BigInt::from(-1));
        k.add_term(vec![2, 1], BigInt::from(1));
        assert_eq!(k.eval(&[int(2), int(3)]), int(3));
        assert_eq!(LaurentPoly::char_of(&[-1]).eval(&[rat(1, 2)]), int(2));
    }

    #[test]
    fn scales_mix() {
        let a = LaurentPoly::monomial(1, 2, vec![1], BigInt::one());
        let sq = a.mul(&a).normalize();
        assert_eq!(sq, t(1, 0));
        assert_eq!(sq.to_string(), "t_1");
        assert_eq!(a.to_string(), "t_1^1/2");
    }

    #[test]
    fn monomial_substitution() {
        // u0*u1 with u0 = -t^(1/2), u1 = -t^(3/2) -> t^2
        let p = LaurentPoly::char_of(&[1, 1]);
        let out = p.substitute_monomials(&[(-1, vec![1]), (-1, vec![3])], 1, 2).normalize();
        assert_eq!(out, t(1, 0).mul(&t(1, 0)));
        let q = LaurentPoly::char_of(&[1, 0]);
        let out = q.substitute_monomials(&[(-1, vec![1]), (1, vec![0])], 1, 2);
        assert_eq!(out.eval_s(&[int(3)]), int(-3));
    }

    fn lp() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec(((-3i64..4, -3i64..4), -4i64..5), 0..5).prop_map(|ts| {
            let mut p = LaurentPoly::zero(2, 2);
            for ((a, b), c) in ts {
                p.add_term(vec![a, b], BigInt::from(c));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn eval_is_multiplicative(a in lp(), b in lp(), s1 in 1i64..9, s2 in -9i64..-1) {
            let s = [rat(s1, 3), rat(s2, 2)];
            prop_assert_eq!(a.mul(&b).eval_s(&s), a.eval_s(&s) * b.eval_s(&s));
        }

        #[test]
        fn json_roundtrip(a in lp()) {
            prop_assert_eq!(LaurentPoly::from_json(&a.to_json()).unwrap(), a);
        }
    }
}
