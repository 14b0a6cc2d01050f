//! Exact scalars and truncated univariate power series.
//!
//! `BigRat` is `num_rational::BigRational`, which is kept in lowest terms with a
//! positive denominator by construction. `TruncSeries` carries its truncation
//! order explicitly; binary operations truncate to the smaller order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

pub type BigRat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("series variable mismatch: {0} vs {1}")]
    TagMismatch(String, String),
    #[error("exp needs a zero constant term")]
    NonzeroConstant,
    #[error("series is not invertible (zero constant term)")]
    NotInvertible,
    #[error("pole at 0: numerator valuation {num} < denominator valuation {den}")]
    Pole { num: usize, den: usize },
    #[error("truncation order {0} too small to decide the limit")]
    Undecided(usize),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// Rational from a pair of machine integers.
pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Parses `"a"`, `"-a/b"` (surrounding whitespace ignored).
pub fn parse_rat(s: &str) -> Result<BigRat, ArithError> {
    let t = s.trim();
    let bad = || ArithError::Parse(s.to_string());
    match t.split_once('/') {
        None => t.parse::<BigInt>().map(BigRat::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRat::new(n, d))
        }
    }
}

/// `"a"` for integers, `"a/b"` otherwise.
pub fn fmt_rat(q: &BigRat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Integer power with a possibly negative exponent. Panics on `0^(-k)`.
pub fn rat_pow(base: &BigRat, e: i64) -> BigRat {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        assert!(!base.is_zero(), "zero raised to a negative power");
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// Power series `c_0 + c_1 x + ... + c_N x^N  (mod x^{N+1})` in a named variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    tag: String,
    coeffs: Vec<BigRat>,
}

impl TruncSeries {
    /// Builds a series of the given order; missing coefficients are zero, extra
    /// ones are dropped.
    pub fn new(tag: &str, mut coeffs: Vec<BigRat>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRat::zero());
        TruncSeries { tag: tag.to_string(), coeffs }
    }

    pub fn zero(tag: &str, order: usize) -> Self {
        Self::new(tag, vec![], order)
    }

    pub fn one(tag: &str, order: usize) -> Self {
        Self::constant(tag, BigRat::one(), order)
    }

    pub fn constant(tag: &str, c: BigRat, order: usize) -> Self {
        Self::new(tag, vec![c], order)
    }

    /// The monomial `c x^k` (zero when `k` exceeds the order).
    pub fn monomial(tag: &str, c: BigRat, k: usize, order: usize) -> Self {
        let mut s = Self::zero(tag, order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// `exp(c x)` to the given order.
    pub fn exp_linear(tag: &str, c: &BigRat, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut cur = BigRat::one();
        coeffs.push(cur.clone());
        for k in 1..=order {
            cur = cur * c / int(k as i64);
            coeffs.push(cur.clone());
        }
        TruncSeries { tag: tag.to_string(), coeffs }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRat {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn set_coeff(&mut self, k: usize, c: BigRat) {
        if k <= self.order() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient, `None` if zero to this order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(&self.tag, self.coeffs.clone(), order.min(self.order()))
    }

    fn check_tag(&self, other: &Self) -> Result<(), ArithError> {
        if self.tag != other.tag {
            return Err(ArithError::TagMismatch(self.tag.clone(), other.tag.clone()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_tag(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        Ok(TruncSeries { tag: self.tag.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_tag(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        Ok(TruncSeries { tag: self.tag.clone(), coeffs })
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRat::one())
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        TruncSeries { tag: self.tag.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplies by `x^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![BigRat::zero(); n + 1];
        for i in 0..=n {
            if i + k <= n {
                coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        TruncSeries { tag: self.tag.clone(), coeffs }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ArithError> {
        series_mul(self, other)
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inv(&self) -> Result<Self, ArithError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(ArithError::NotInvertible);
        }
        let n = self.order();
        let inv0 = c0.recip();
        let mut out: Vec<BigRat> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = BigRat::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(TruncSeries { tag: self.tag.clone(), coeffs: out })
    }

    /// `log(s)` for `s` with constant term 1.
    pub fn log(&self) -> Result<Self, ArithError> {
        if self.coeffs[0] != BigRat::one() {
            return Err(ArithError::NotInvertible);
        }
        // log(s)' = s'/s
        let inv = self.inv()?;
        let d = self.derivative();
        let q = series_mul(&d, &inv)?;
        Ok(q.integrate())
    }

    /// Formal derivative; the order drops by one (but never below zero).
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut coeffs = Vec::with_capacity(n.max(1));
        for k in 1..=n {
            coeffs.push(&self.coeffs[k] * int(k as i64));
        }
        let ord = n.saturating_sub(1);
        Self::new(&self.tag, coeffs, ord)
    }

    /// Antiderivative with zero constant term; the order grows by one.
    pub fn integrate(&self) -> Self {
        let n = self.order();
        let mut coeffs = vec![BigRat::zero()];
        for k in 0..=n {
            coeffs.push(&self.coeffs[k] / int(k as i64 + 1));
        }
        Self::new(&self.tag, coeffs, n + 1)
    }

    /// Substitutes a rational value for the variable (finite sum).
    pub fn eval(&self, x: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mon = match k {
                0 => String::new(),
                1 => self.tag.clone(),
                _ => format!("{}^{}", self.tag, k),
            };
            let cs = fmt_rat(c);
            parts.push(if mon.is_empty() {
                cs
            } else if c.is_one() {
                mon
            } else if *c == -BigRat::one() {
                format!("-{mon}")
            } else {
                format!("{cs}*{mon}")
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O({}^{})", parts.join(" + ").replace("+ -", "- "), self.tag, self.order() + 1)
    }
}

/// Cauchy product truncated at the smaller order.
pub fn series_mul(a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries, ArithError> {
    a.check_tag(b)?;
    let n = a.order().min(b.order());
    let mut out = vec![BigRat::zero(); n + 1];
    for (i, ai) in a.coeffs.iter().enumerate().take(n + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate().take(n + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    Ok(TruncSeries { tag: a.tag.clone(), coeffs: out })
}

/// `exp(a)` via `e' = a' e`, for `a` with zero constant term.
pub fn series_exp(a: &TruncSeries) -> Result<TruncSeries, ArithError> {
    if !a.coeffs[0].is_zero() {
        return Err(ArithError::NonzeroConstant);
    }
    let n = a.order();
    // k e_k = sum_{j=1..k} j a_j e_{k-j}
    let mut e: Vec<BigRat> = Vec::with_capacity(n + 1);
    e.push(BigRat::one());
    for k in 1..=n {
        let mut acc = BigRat::zero();
        for j in 1..=k {
            if !a.coeffs[j].is_zero() {
                acc += &a.coeffs[j] * int(j as i64) * &e[k - j];
            }
        }
        e.push(acc / int(k as i64));
    }
    Ok(TruncSeries { tag: a.tag.clone(), coeffs: e })
}

/// Value at 0 of `num/den` after cancelling the common leading power.
///
/// Fails when the quotient has a pole at 0, or when `den` vanishes to its
/// whole truncation order, or when `num` is not known far enough to read off
/// the needed coefficient.
pub fn eps_limit(num: &TruncSeries, den: &TruncSeries) -> Result<BigRat, ArithError> {
    num.check_tag(den)?;
    let dv = den.valuation().ok_or(ArithError::Undecided(den.order()))?;
    if dv > num.order() {
        return Err(ArithError::Undecided(num.order()));
    }
    if let Some(nv) = num.valuation() {
        if nv < dv {
            return Err(ArithError::Pole { num: nv, den: dv });
        }
    }
    Ok(num.coeff(dv) / den.coeff(dv))
}

/// Direction `a` for the substitution `t_i = exp(eps * a_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsDirection(pub Vec<i64>);

impl Default for EpsDirection {
    fn default() -> Self {
        EpsDirection(vec![1, 2, 5])
    }
}

impl EpsDirection {
    pub fn dot(&self, w: &[i64]) -> i64 {
        self.0.iter().zip(w).map(|(a, b)| a * b).sum()
    }

    /// True when no weight in the list is orthogonal to the direction.
    pub fn is_generic(&self, weights: &[Vec<i64>]) -> bool {
        weights.iter().all(|w| self.dot(w) != 0)
    }

    /// First generic direction among the default and a fixed list of
    /// fallbacks with rapidly growing entries.
    pub fn find_generic(dim: usize, weights: &[Vec<i64>]) -> Option<EpsDirection> {
        let mut cands = Vec::new();
        if dim == 3 {
            cands.push(EpsDirection::default());
        }
        for base in [3i64, 7, 11, 13, 17, 31, 101] {
            let mut v = Vec::with_capacity(dim);
            let mut p = 1i64;
            for _ in 0..dim {
                v.push(p);
                p = p.saturating_mul(base);
            }
            cands.push(EpsDirection(v));
        }
        cands.into_iter().find(|d| d.is_generic(weights))
    }
}

/// `|x|` for a rational, convenience for height bounds.
pub fn height(q: &BigRat) -> BigInt {
    q.numer().abs().max(q.denom().clone())
}
