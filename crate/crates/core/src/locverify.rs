//! Localization checks: both sides of the generating identity for the local
//! contributions `H(A_λ)`, its symmetric form, the exponential identity over
//! cycle types, toric assembly of global Euler characteristics, and the
//! coordinate-hyperplane example.

use crate::arith::{int, rat, rat_pow, series_exp, BigRat, EpsDirection, TruncSeries};
use crate::haiman::cotangent_weights;
use crate::hilbert::{chart_series, closed_form_for, generic_points, series_1321, ChartTier, HilbertError, HilbertSeries};
use crate::laurent::LaurentPoly;
use crate::partitions::{enumerate_partitions, named, permutations, Partition};
use crate::poly::{ring, MultiPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

pub const WZ_SCHEMA: &str = "hilbloc.wz_report";
pub const TORIC_SCHEMA: &str = "hilbloc.toric_report";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LocError {
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error("no {backend} formula for singular partition {partition}")]
    Unsupported { backend: &'static str, partition: String },
    #[error("direction is not generic for the fixed-point weights")]
    NonGenericDirection,
    #[error("limit has a pole of order {0}")]
    Pole(i64),
    #[error("bad fixed-point data: {0}")]
    BadData(String),
    #[error("v = 0 is not allowed in the symmetric form")]
    ZeroV,
    #[error("specialization hits a root of unity")]
    NonGenericPoint,
    #[error("result is not a Laurent polynomial")]
    NotPolynomial,
}

/// Where the local series of a partition comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Empty,
    Smooth,
    Groebner,
    Registry,
    Jacobian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Only smooth points; singular partitions are an error.
    Smooth,
    /// Singular charts through their Gröbner basis.
    Groebner,
    /// Singular charts from the transcribed closed forms.
    Registry,
    /// Registry first, then the Gröbner route.
    Auto,
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Smooth => "smooth",
            Backend::Groebner => "groebner",
            Backend::Registry => "registry",
            Backend::Auto => "auto",
        }
    }

    pub fn parse(s: &str) -> Option<Backend> {
        match s {
            "smooth" => Some(Backend::Smooth),
            "groebner" => Some(Backend::Groebner),
            "registry" => Some(Backend::Registry),
            "auto" => Some(Backend::Auto),
            _ => None,
        }
    }
}

/// Supplies `H(A_λ; t)` as a series; singular classes are cached by their
/// canonical `S_r` representative.
pub struct HProvider {
    pub backend: Backend,
    pub budget: usize,
    cache: HashMap<Partition, (HilbertSeries, Source)>,
}

impl HProvider {
    pub fn new(backend: Backend, budget: usize) -> Self {
        HProvider { backend, budget, cache: HashMap::new() }
    }

    /// Supplies a series computed elsewhere, e.g. loaded from a cache.
    pub fn insert(&mut self, lambda: Partition, h: HilbertSeries, source: Source) {
        self.cache.insert(lambda, (h, source));
    }

    pub fn contains(&self, lambda: &Partition) -> bool {
        self.cache.contains_key(lambda)
    }

    pub fn series(&mut self, lambda: &Partition) -> Result<(HilbertSeries, Source), LocError> {
        let r = lambda.dim();
        if lambda.size() == 0 {
            return Ok((HilbertSeries { numerator: LaurentPoly::one(r), denom_weights: vec![] }, Source::Empty));
        }
        if let Some(hit) = self.cache.get(lambda) {
            return Ok(hit.clone());
        }
        let (w, extra) = cotangent_weights(lambda);
        let out = if extra == 0 {
            (HilbertSeries { numerator: LaurentPoly::one(r), denom_weights: w }, Source::Smooth)
        } else {
            self.singular(lambda)?
        };
        self.cache.insert(lambda.clone(), out.clone());
        Ok(out)
    }

    fn singular(&mut self, lambda: &Partition) -> Result<(HilbertSeries, Source), LocError> {
        let unsupported = |b: &'static str| LocError::Unsupported { backend: b, partition: lambda.chain_notation() };
        let registry = |budget: usize| -> Result<Option<(HilbertSeries, Source)>, LocError> {
            if let Some((_, h)) = closed_form_for(lambda) {
                return Ok(Some((h, Source::Registry)));
            }
            let base = named("1321").unwrap();
            if lambda.dim() == 3 && lambda.size() == base.size() {
                for perm in permutations(3) {
                    if &base.permute(&perm) == lambda {
                        return Ok(Some((series_1321(budget)?.permute(&perm), Source::Jacobian)));
                    }
                }
            }
            Ok(None)
        };
        match self.backend {
            Backend::Smooth => Err(unsupported("smooth")),
            Backend::Registry => registry(self.budget)?.ok_or_else(|| unsupported("registry")),
            Backend::Groebner => self.groebner(lambda),
            Backend::Auto => match registry(self.budget)? {
                Some(x) => Ok(x),
                None => self.groebner(lambda),
            },
        }
    }

    fn groebner(&mut self, lambda: &Partition) -> Result<(HilbertSeries, Source), LocError> {
        let (canon, perm) = lambda.canonicalize();
        let inv = invert(&perm);
        if let Some((h, s)) = self.cache.get(&canon) {
            return Ok((h.permute(&inv), *s));
        }
        let (h, _) = chart_series(&canon, ChartTier::Step0, self.budget)?;
        self.cache.insert(canon, (h.clone(), Source::Groebner));
        Ok((h.permute(&inv), Source::Groebner))
    }
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// `θ^i = ∏ θ_j^{i_j}` evaluated from `s` with `θ = s^2`.
fn theta_pow(s: &[BigRat], cell: &[u32], sign: i64) -> BigRat {
    let mut acc = BigRat::one();
    for (x, &k) in s.iter().zip(cell) {
        if k > 0 {
            acc *= rat_pow(x, 2 * sign * k as i64);
        }
    }
    acc
}

/// One partition's term in the generating identity, at `θ = s^2`.
pub struct LocalTerm {
    pub partition: Partition,
    pub h: BigRat,
    pub source: Source,
}

/// `H(A_λ; s^2)` for every partition of size at most `n`, grouped by size.
pub fn local_values(
    r: usize,
    n: usize,
    s: &[BigRat],
    provider: &mut HProvider,
) -> Result<Option<Vec<Vec<LocalTerm>>>, LocError> {
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut row = Vec::new();
        for p in enumerate_partitions(r, k) {
            let (h, source) = provider.series(&p)?;
            let Some(h) = h.eval_s(s) else { return Ok(None) };
            row.push(LocalTerm { partition: p, h, source });
        }
        out.push(row);
    }
    Ok(Some(out))
}

/// `Σ_λ Q^|λ| H(A_λ; θ) ∏_{i∈λ} (1 - u θ^i)(1 - v θ^-i)`.
pub fn wz_lhs(values: &[Vec<LocalTerm>], s: &[BigRat], u: &BigRat, v: &BigRat) -> TruncSeries {
    let n = values.len() - 1;
    let coeffs = values
        .iter()
        .map(|row| {
            row.iter()
                .map(|t| {
                    t.partition.cells().iter().fold(t.h.clone(), |acc, c| {
                        acc * (BigRat::one() - u * theta_pow(s, c, 1)) * (BigRat::one() - v * theta_pow(s, c, -1))
                    })
                })
                .fold(BigRat::zero(), |a, b| a + b)
        })
        .collect();
    TruncSeries::new("Q", coeffs, n)
}

/// `exp(Σ_n (1 - u^n)(1 - v^n) Q^n / (n ∏_j (1 - θ_j^n)))`, or `None` at a
/// root of unity.
pub fn wz_rhs(n: usize, s: &[BigRat], u: &BigRat, v: &BigRat, sign: i64) -> Option<TruncSeries> {
    let mut inner = vec![BigRat::zero(); n + 1];
    for (k, slot) in inner.iter_mut().enumerate().skip(1) {
        let mut den = int(k as i64);
        for x in s {
            let f = BigRat::one() - rat_pow(x, 2 * k as i64);
            if f.is_zero() {
                return None;
            }
            den *= f;
        }
        let num = (BigRat::one() - rat_pow(u, k as i64)) * (BigRat::one() - rat_pow(v, k as i64));
        *slot = int(sign) * num / den;
    }
    Some(series_exp(&TruncSeries::new("Q", inner, n)).expect("zero constant term"))
}

/// Left side of the symmetric form:
/// `Σ_λ (-Q)^|λ| H(A_λ; θ) ∏_{i∈λ} θ^-i (1 - u θ^i)(1 - v θ^i)`.
pub fn wz_symmetric_lhs(values: &[Vec<LocalTerm>], s: &[BigRat], u: &BigRat, v: &BigRat) -> TruncSeries {
    let n = values.len() - 1;
    let coeffs = values
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let sign = if k % 2 == 0 { BigRat::one() } else { -BigRat::one() };
            row.iter()
                .map(|t| {
                    t.partition.cells().iter().fold(t.h.clone(), |acc, c| {
                        let th = theta_pow(s, c, 1);
                        acc / &th * (BigRat::one() - u * &th) * (BigRat::one() - v * &th)
                    })
                })
                .fold(BigRat::zero(), |a, b| a + b)
                * sign
        })
        .collect();
    TruncSeries::new("Q", coeffs, n)
}

/// One specialization of the identity and its verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WzReport {
    pub trunc: usize,
    pub s: Vec<String>,
    pub theta: Vec<String>,
    pub u: String,
    pub v: String,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
    pub verdict: bool,
    /// Same check in the symmetric form (absent when `v = 0`).
    pub symmetric_verdict: Option<bool>,
}

/// A full run over several random specializations.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WzRun {
    pub schema: String,
    pub version: String,
    pub r: usize,
    pub trunc: usize,
    pub seed: u64,
    pub backend: String,
    /// Number of partitions whose series came from each source.
    pub sources: BTreeMap<String, usize>,
    pub reports: Vec<WzReport>,
    pub verdict: bool,
}

fn strs(v: &[BigRat]) -> Vec<String> {
    v.iter().map(crate::arith::fmt_rat).collect()
}

/// Random nonzero rational of height at most `h`, avoiding `±1`.
fn random_param<R: Rng>(rng: &mut R, h: i64) -> BigRat {
    loop {
        let q = rat(rng.gen_range(-h..=h), rng.gen_range(1..=h));
        if !q.is_zero() && q.abs() != BigRat::one() {
            return q;
        }
    }
}

/// Checks the identity through `Q^trunc` at `points` random specializations.
pub fn verify_wz(r: usize, trunc: usize, points: usize, seed: u64, provider: &mut HProvider) -> Result<WzRun, LocError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    let mut sources: BTreeMap<String, usize> = BTreeMap::new();
    for k in 0..=trunc {
        for p in enumerate_partitions(r, k) {
            let (_, src) = provider.series(&p)?;
            *sources.entry(format!("{src:?}").to_lowercase()).or_default() += 1;
        }
    }
    for _ in 0..points {
        let mut found = None;
        for _ in 0..crate::hilbert::RETRY_CAP {
            let s = generic_points(&mut rng, r, 1, 30, |_| true)?.remove(0);
            if let Some(vals) = local_values(r, trunc, &s, provider)? {
                let u = random_param(&mut rng, 30);
                let v = random_param(&mut rng, 30);
                if let Some(rhs) = wz_rhs(trunc, &s, &u, &v, 1) {
                    found = Some((s, vals, u, v, rhs));
                    break;
                }
            }
        }
        let (s, vals, u, v, rhs) = found.ok_or(HilbertError::RetryCap(crate::hilbert::RETRY_CAP))?;
        let lhs = wz_lhs(&vals, &s, &u, &v);
        let verdict = lhs == rhs;
        let symmetric_verdict = Some(wz_symmetric_lhs(&vals, &s, &u, &v) == wz_rhs(trunc, &s, &u, &v, -1).unwrap());
        reports.push(WzReport {
            trunc,
            theta: strs(&s.iter().map(|x| x * x).collect::<Vec<_>>()),
            s: strs(&s),
            u: crate::arith::fmt_rat(&u),
            v: crate::arith::fmt_rat(&v),
            lhs: strs(lhs.coeffs()),
            rhs: strs(rhs.coeffs()),
            verdict,
            symmetric_verdict,
        });
    }
    let verdict = reports.iter().all(|r| r.verdict && r.symmetric_verdict != Some(false));
    Ok(WzRun {
        schema: WZ_SCHEMA.into(),
        version: crate::VERSION.into(),
        r,
        trunc,
        seed,
        backend: provider.backend.name().into(),
        sources,
        reports,
        verdict,
    })
}

/// Symmetric form on its own, at given `(s, u, v)`; `v = 0` is rejected.
pub fn wz_symmetric_variant(
    values: &[Vec<LocalTerm>],
    s: &[BigRat],
    u: &BigRat,
    v: &BigRat,
) -> Result<(TruncSeries, TruncSeries), LocError> {
    if v.is_zero() {
        return Err(LocError::ZeroV);
    }
    let n = values.len() - 1;
    let rhs = wz_rhs(n, s, u, v, -1).ok_or(LocError::NonGenericPoint)?;
    Ok((wz_symmetric_lhs(values, s, u, v), rhs))
}

/// `z_μ = ∏ i^{k_i} k_i!` where `k_i` counts parts equal to `i`.
pub fn z_mu(mu: &[u32]) -> BigInt {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &m in mu {
        *counts.entry(m).or_default() += 1;
    }
    counts.iter().fold(BigInt::one(), |acc, (&i, &k)| {
        let fact: BigInt = (1..=k).map(BigInt::from).product();
        acc * BigInt::from(i).pow(k) * fact
    })
}

/// Integer partitions of `n` as weakly decreasing part lists.
pub fn integer_partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// `1 + Σ_μ (1/z_μ) ∏ Y_{m_j} Q^|μ|` against `exp(Σ_r Y_r Q^r / r)` through
/// `Q^n`; `y[k]` holds `Y_{k+1}`.
pub fn exp_identity_sides(n: usize, y: &[BigRat]) -> (TruncSeries, TruncSeries) {
    assert!(y.len() >= n);
    let mut lhs = vec![BigRat::zero(); n + 1];
    lhs[0] = BigRat::one();
    for (k, slot) in lhs.iter_mut().enumerate().skip(1) {
        for mu in integer_partitions(k as u32) {
            let prod = mu.iter().fold(BigRat::one(), |acc, &m| acc * &y[m as usize - 1]);
            *slot += prod / BigRat::from_integer(z_mu(&mu));
        }
    }
    let inner: Vec<BigRat> =
        (0..=n).map(|k| if k == 0 { BigRat::zero() } else { &y[k - 1] / int(k as i64) }).collect();
    let rhs = series_exp(&TruncSeries::new("Q", inner, n)).expect("zero constant term");
    (TruncSeries::new("Q", lhs, n), rhs)
}

pub fn exp_identity_check(n: usize, y: &[BigRat]) -> bool {
    let (a, b) = exp_identity_sides(n, y);
    a == b
}

/// A torus-fixed point of a smooth toric variety: the weights of the local
/// coordinate functions and of each line bundle's local generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointDatum {
    pub cotangent: Vec<Vec<i64>>,
    pub bundles: BTreeMap<String, Vec<i64>>,
}

impl FixedPointDatum {
    pub fn validate(&self, r: usize) -> Result<(), LocError> {
        if self.cotangent.len() != r || self.cotangent.iter().any(|w| w.len() != r || w.iter().all(|&x| x == 0)) {
            return Err(LocError::BadData("need r nonzero cotangent weights of length r".into()));
        }
        if self.bundles.values().any(|w| w.len() != r) {
            return Err(LocError::BadData("bundle weight has wrong length".into()));
        }
        Ok(())
    }

    fn bundle(&self, tag: &str) -> Vec<i64> {
        self.bundles.get(tag).cloned().unwrap_or_else(|| vec![0; self.cotangent.len()])
    }
}

/// Fixed points of `P^3` with characters `0, e1, e2, e3` on the homogeneous
/// coordinates. At `p_i` the coordinate `X_j / X_i` has weight `χ_j - χ_i`
/// and the generator `X_i^d` of `O(d)` has weight `d χ_i`.
pub fn p3_fixed_points(k_degree: i64, l_degree: i64) -> Vec<FixedPointDatum> {
    let chi = |i: usize| -> Vec<i64> { (0..3).map(|k| (i == k + 1) as i64).collect() };
    (0..4)
        .map(|i| {
            let cotangent = (0..4)
                .filter(|&j| j != i)
                .map(|j| chi(j).iter().zip(chi(i)).map(|(a, b)| a - b).collect())
                .collect();
            let scaled = |d: i64| chi(i).iter().map(|x| d * x).collect::<Vec<i64>>();
            let bundles = BTreeMap::from([("K".to_string(), scaled(k_degree)), ("L".to_string(), scaled(l_degree))]);
            FixedPointDatum { cotangent, bundles }
        })
        .collect()
}

/// Laurent series `ε^val · s(ε)` with a fixed relative precision.
#[derive(Clone, Debug)]
struct EpsSeries {
    val: i64,
    s: TruncSeries,
}

impl EpsSeries {
    fn mul(&self, o: &EpsSeries) -> EpsSeries {
        EpsSeries { val: self.val + o.val, s: crate::arith::series_mul(&self.s, &o.s).unwrap() }
    }

    /// Coefficient of `ε^k`.
    fn coeff(&self, k: i64) -> BigRat {
        let i = k - self.val;
        if i < 0 || i as usize > self.s.order() {
            BigRat::zero()
        } else {
            self.s.coeff(i as usize)
        }
    }
}

/// `Σ c exp(ε x)` for the terms `c t^(e/scale)` of `p`, with `x = a·e/scale`.
fn exp_sum(terms: &[(BigRat, BigRat)], order: usize) -> TruncSeries {
    let mut coeffs = vec![BigRat::zero(); order + 1];
    for (c, x) in terms {
        let mut m = c.clone();
        for (k, slot) in coeffs.iter_mut().enumerate() {
            if k > 0 {
                m = m * x / int(k as i64);
            }
            *slot += &m;
        }
    }
    TruncSeries::new("eps", coeffs, order)
}

/// `1 / ∏ (1 - exp(ε x_i))` as `ε^-d` times a unit.
fn inv_den(xs: &[BigRat], order: usize) -> EpsSeries {
    let mut acc = TruncSeries::one("eps", order);
    for x in xs {
        // (1 - e^{εx}) / ε = -x - x^2 ε/2 - ...
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut m = -x.clone();
        for k in 0..=order {
            if k > 0 {
                m = m * x / int(k as i64 + 1);
            }
            coeffs.push(m.clone());
        }
        acc = crate::arith::series_mul(&acc, &TruncSeries::new("eps", coeffs, order)).unwrap();
    }
    EpsSeries { val: -(xs.len() as i64), s: acc.inv().expect("generic direction") }
}

/// Result of toric assembly for one `n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToricValue {
    pub n: usize,
    pub u: String,
    pub v: String,
    /// Exact value at the sample point `t = s^2`.
    pub equivariant_at: Vec<String>,
    pub equivariant: String,
    /// Limit `t -> 1`.
    pub limit: String,
    pub integral: bool,
}

/// Local data of one fixed point and one partition, prepared for both the
/// ε-expansion and exact evaluation.
struct Contribution {
    eps: EpsSeries,
    value: Option<BigRat>,
}

/// Assembles `χ(Λ_{-v} K^[n], Λ_{-u} L^[n])` from fixed-point data: the
/// product over fixed points of local terms `H(A_λ_b; t^{w_b})
/// ∏_{i∈λ_b} (1 - u t^{-k_b} θ_b^i)(1 - v t^{l_b} θ_b^{-i})`, summed over
/// all distributions of `n` points. Returns the value at `t = s^2` and the
/// limit `t -> 1` along `t = exp(ε a)`.
pub fn toric_assemble(
    points: &[FixedPointDatum],
    n: usize,
    u: &BigRat,
    v: &BigRat,
    dir: Option<&EpsDirection>,
    s_point: &[BigRat],
    provider: &mut HProvider,
) -> Result<ToricValue, LocError> {
    let r = points.first().ok_or_else(|| LocError::BadData("no fixed points".into()))?.cotangent.len();
    for p in points {
        p.validate(r)?;
    }
    // all weights that must be generic for the direction
    let mut all_w: Vec<Vec<i64>> = points.iter().flat_map(|p| p.cotangent.clone()).collect();
    let parts: Vec<Vec<Partition>> = (0..=n).map(|k| enumerate_partitions(r, k)).collect();
    let mut series: HashMap<Partition, HilbertSeries> = HashMap::new();
    for row in &parts {
        for p in row {
            let (h, _) = provider.series(p)?;
            all_w.extend(h.denom_weights.iter().cloned());
            series.insert(p.clone(), h);
        }
    }
    let image = |w: &[i64], b: &FixedPointDatum| -> Vec<i64> {
        (0..r).map(|k| w.iter().zip(&b.cotangent).map(|(e, c)| e * c[k]).sum()).collect()
    };
    let mut mapped = Vec::new();
    for b in points {
        for w in &all_w {
            mapped.push(image(w, b));
        }
    }
    let dir = match dir {
        Some(d) => d.clone(),
        None => EpsDirection::find_generic(r, &mapped).ok_or(LocError::NonGenericDirection)?,
    };
    if !dir.is_generic(&mapped) {
        return Err(LocError::NonGenericDirection);
    }
    // precision: the worst total pole order over distributions of n points
    let max_pole: Vec<usize> =
        parts.iter().map(|row| row.iter().map(|p| series[p].denom_weights.len()).max().unwrap_or(0)).collect();
    let mut best = vec![0usize; n + 1];
    for _ in points {
        let mut next = vec![0usize; n + 1];
        for tot in 0..=n {
            for k in 0..=tot {
                next[tot] = next[tot].max(best[tot - k] + max_pole[k]);
            }
        }
        best = next;
    }
    let order = best[n] + 1;

    let s_of = |w: &[i64]| -> BigRat {
        s_point.iter().zip(w).fold(BigRat::one(), |acc, (x, &k)| acc * rat_pow(x, k))
    };
    // local contributions per (fixed point, partition)
    let mut local: Vec<Vec<Vec<Contribution>>> = Vec::new();
    for b in points {
        let kb = b.bundle("K");
        let lb = b.bundle("L");
        let mut rows = Vec::new();
        for row in &parts {
            let mut out = Vec::new();
            for p in row {
                let h = &series[p];
                let scale = h.numerator.scale() as i64;
                let num_terms: Vec<(BigRat, BigRat)> = h
                    .numerator
                    .terms()
                    .map(|(e, c)| {
                        let x = dir.dot(&image(e, b));
                        (BigRat::from_integer(c.clone()), rat(x, scale))
                    })
                    .collect();
                let mut eps = EpsSeries { val: 0, s: exp_sum(&num_terms, order) };
                let xs: Vec<BigRat> = h.denom_weights.iter().map(|w| int(dir.dot(&image(w, b)))).collect();
                eps = eps.mul(&inv_den(&xs, order));
                // exact value at θ_j = t^{w_b,j}, t = s^2
                let s_theta: Vec<BigRat> = b.cotangent.iter().map(|w| s_of(w)).collect();
                let mut value = h.eval_s(&s_theta);
                for c in p.cells() {
                    let wi: Vec<i64> = image(&c.iter().map(|&x| x as i64).collect::<Vec<_>>(), b);
                    let uw: Vec<i64> = wi.iter().zip(&kb).map(|(a, k)| a - k).collect();
                    let vw: Vec<i64> = wi.iter().zip(&lb).map(|(a, l)| l - a).collect();
                    for (coef, w) in [(u, &uw), (v, &vw)] {
                        let lin = TruncSeries::exp_linear("eps", &int(dir.dot(w)), order).scale(coef);
                        let f = TruncSeries::one("eps", order).sub(&lin).unwrap();
                        eps = eps.mul(&EpsSeries { val: 0, s: f });
                        if let Some(val) = value.as_mut() {
                            *val *= BigRat::one() - coef * rat_pow(&s_of(w), 2);
                        }
                    }
                }
                out.push(Contribution { eps, value });
            }
            rows.push(out);
        }
        local.push(rows);
    }
    // distribute n points over the fixed points
    let mut total_eps: BTreeMap<i64, BigRat> = BTreeMap::new();
    let mut total_val = Some(BigRat::zero());
    let mut sizes = vec![0usize; points.len()];
    fn rec(
        b: usize,
        left: usize,
        sizes: &mut Vec<usize>,
        local: &[Vec<Vec<Contribution>>],
        acc: Option<(EpsSeries, Option<BigRat>)>,
        total_eps: &mut BTreeMap<i64, BigRat>,
        total_val: &mut Option<BigRat>,
    ) {
        if b == local.len() {
            if left == 0 {
                let (e, v) = acc.unwrap();
                for k in e.val..=0 {
                    *total_eps.entry(k).or_insert_with(BigRat::zero) += e.coeff(k);
                }
                match (total_val.as_mut(), v) {
                    (Some(t), Some(v)) => *t += v,
                    _ => *total_val = None,
                }
            }
            return;
        }
        let last = b + 1 == local.len();
        for k in 0..=left {
            if last && k != left {
                continue;
            }
            sizes[b] = k;
            for c in &local[b][k] {
                let next = match &acc {
                    None => (c.eps.clone(), c.value.clone()),
                    Some((e, v)) => (e.mul(&c.eps), v.as_ref().zip(c.value.as_ref()).map(|(a, b)| a * b)),
                };
                rec(b + 1, left - k, sizes, local, Some(next), total_eps, total_val);
            }
        }
    }
    rec(0, n, &mut sizes, &local, None, &mut total_eps, &mut total_val);
    for (&k, c) in &total_eps {
        if k < 0 && !c.is_zero() {
            return Err(LocError::Pole(-k));
        }
    }
    let limit = total_eps.get(&0).cloned().unwrap_or_else(BigRat::zero);
    Ok(ToricValue {
        n,
        u: crate::arith::fmt_rat(u),
        v: crate::arith::fmt_rat(v),
        equivariant_at: strs(s_point),
        equivariant: total_val.map(|x| crate::arith::fmt_rat(&x)).unwrap_or_else(|| "undefined".into()),
        integral: limit.is_integer(),
        limit: crate::arith::fmt_rat(&limit),
    })
}

/// `χ(L^[n])` as the negated `v`-linear coefficient of the `u = 0`
/// assembly, found by interpolating in `v` over `n + 1` nodes.
pub fn tautological_chi(
    points: &[FixedPointDatum],
    n: usize,
    dir: Option<&EpsDirection>,
    s_point: &[BigRat],
    provider: &mut HProvider,
) -> Result<BigRat, LocError> {
    let nodes: Vec<BigRat> = (0..=n as i64).map(int).collect();
    let mut vals = Vec::new();
    for v in &nodes {
        let t = toric_assemble(points, n, &BigRat::zero(), v, dir, s_point, provider)?;
        vals.push(crate::arith::parse_rat(&t.limit).expect("own output"));
    }
    Ok(-interpolate(&nodes, &vals).get(1).cloned().unwrap_or_else(BigRat::zero))
}

/// Coefficients of the interpolating polynomial through `(x_i, y_i)`.
pub fn interpolate(xs: &[BigRat], ys: &[BigRat]) -> Vec<BigRat> {
    let n = xs.len();
    let mut out = vec![BigRat::zero(); n];
    for i in 0..n {
        // basis polynomial for node i
        let mut basis = vec![BigRat::one()];
        let mut denom = BigRat::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut next = vec![BigRat::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xs[j];
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        for (k, c) in basis.iter().enumerate() {
            out[k] += c * &ys[i] / &denom;
        }
    }
    out
}

/// `Σ_i t_i^l (1 - ∏_{j≠i} t_j/t_i) / ∏_{j≠i} (1 - t_j/t_i)` over `n + 1`
/// variables, cleared to a Laurent polynomial. Each summand is the local
/// contribution of `{X_0 ⋯ X_n = 0}` at the coordinate point `p_i`, so the sum
/// is `χ` of the union of the coordinate hyperplanes of `P^n`.
pub fn coordinate_lines_chi(n: usize, l: i64) -> Result<LaurentPoly, LocError> {
    let m = n + 1;
    let names: Vec<String> = (0..m).map(|i| format!("t{i}")).collect();
    let rg = ring(&names);
    let t = |i: usize| MultiPoly::var(&rg, i);
    let shift = (-l).max(0) as u32;
    // vandermonde ∏_{a<b} (t_a - t_b)
    let mut vdm = MultiPoly::one(&rg);
    for a in 0..m {
        for b in a + 1..m {
            vdm = vdm.mul(&t(a).sub(&t(b)));
        }
    }
    let mut num = MultiPoly::zero(&rg);
    for i in 0..m {
        // t_i^l (t_i^n - ∏_{j≠i} t_j) / ∏_{j≠i} (t_i - t_j), times t^shift
        let mut e = vec![shift; m];
        e[i] = (l + shift as i64) as u32;
        let mono = MultiPoly::monomial(&rg, e, BigRat::one());
        let others = (0..m).filter(|&j| j != i).fold(MultiPoly::one(&rg), |acc, j| acc.mul(&t(j)));
        let top = t(i).pow(n as u32).sub(&others);
        let local = (0..m).filter(|&j| j != i).fold(MultiPoly::one(&rg), |acc, j| acc.mul(&t(i).sub(&t(j))));
        let cof = vdm.div_exact(&local).map_err(|_| LocError::NotPolynomial)?;
        num = num.add(&mono.mul(&top).mul(&cof));
    }
    let q = num.div_exact(&vdm).map_err(|_| LocError::NotPolynomial)?;
    let mut out = LaurentPoly::zero(m, 1);
    for (e, c) in q.terms() {
        if !c.is_integer() {
            return Err(LocError::NotPolynomial);
        }
        out.add_term(e.iter().map(|&x| x as i64 - shift as i64).collect(), c.to_integer());
    }
    Ok(out)
}

/// Dévissage of the same union: inclusion-exclusion over intersections of
/// `k` hyperplanes, each a `P^{n-k}` with `χ(O(l)) = C(l + n - k, n - k)`.
pub fn hyperplane_union_chi_oracle(n: usize, l: i64) -> BigInt {
    let binom_up = |top: i64, k: usize| -> BigInt {
        // C(top, k) as a polynomial in top
        let mut acc = BigRat::one();
        for i in 0..k as i64 {
            acc = acc * int(top - i) / int(i + 1);
        }
        acc.to_integer()
    };
    let mut total = BigInt::zero();
    for k in 1..=n {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let ways = binom_up(n as i64 + 1, k);
        total += BigInt::from(sign) * ways * binom_up(l + (n - k) as i64, n - k);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::groebner::DEFAULT_SPAIR_BUDGET;
    use proptest::prelude::*;

    fn s3() -> Vec<BigRat> {
        vec![rat(2, 3), rat(5, 7), rat(11, 4)]
    }

    #[test]
    fn low_coefficients() {
        let s = s3();
        let mut prov = HProvider::new(Backend::Smooth, 1000);
        let vals = local_values(3, 1, &s, &mut prov).unwrap().unwrap();
        let (u, v) = (rat(1, 3), rat(-2, 5));
        let lhs = wz_lhs(&vals, &s, &u, &v);
        assert_eq!(lhs.coeff(0), int(1));
        let den: BigRat = s.iter().map(|x| BigRat::one() - x * x).product();
        assert_eq!(lhs.coeff(1), (BigRat::one() - &u) * (BigRat::one() - &v) / den);
        assert_eq!(wz_rhs(1, &s, &u, &v, 1).unwrap().coeff(1), lhs.coeff(1));
        assert_eq!(wz_rhs(5, &s, &int(1), &v, 1).unwrap(), TruncSeries::one("Q", 5));
    }

    #[test]
    fn plane_is_smooth_through_eight() {
        let mut prov = HProvider::new(Backend::Smooth, 1000);
        let run = verify_wz(2, 8, 3, 17, &mut prov).unwrap();
        assert!(run.verdict);
        assert_eq!(run.sources.get("groebner"), None);
    }

    #[test]
    fn line_with_v_zero() {
        let mut prov = HProvider::new(Backend::Smooth, 1000);
        let s = vec![rat(3, 5)];
        let vals = local_values(1, 6, &s, &mut prov).unwrap().unwrap();
        let u = rat(2, 7);
        assert_eq!(wz_lhs(&vals, &s, &u, &BigRat::zero()), wz_rhs(6, &s, &u, &BigRat::zero(), 1).unwrap());
        assert_ne!(wz_lhs(&vals, &s, &u, &rat(1, 3)), wz_rhs(6, &s, &u, &rat(1, 3), 1).unwrap());
    }

    #[test]
    fn space_through_four_with_groebner() {
        let mut prov = HProvider::new(Backend::Groebner, DEFAULT_SPAIR_BUDGET);
        let run = verify_wz(3, 4, 3, 5, &mut prov).unwrap();
        assert!(run.verdict, "{:?}", run.reports[0]);
        assert_eq!(run.sources["groebner"], 1);
    }

    #[test]
    fn symmetric_form_is_symmetric() {
        let s = s3();
        let mut prov = HProvider::new(Backend::Registry, DEFAULT_SPAIR_BUDGET);
        let vals = local_values(3, 4, &s, &mut prov).unwrap().unwrap();
        let (u, v) = (rat(3, 4), rat(-5, 2));
        let (a, b) = wz_symmetric_variant(&vals, &s, &u, &v).unwrap();
        let (c, _) = wz_symmetric_variant(&vals, &s, &v, &u).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(wz_symmetric_variant(&vals, &s, &u, &BigRat::zero()).unwrap_err(), LocError::ZeroV);
    }

    #[test]
    fn coefficients_have_bidegree_at_most_n() {
        let s = s3();
        let mut prov = HProvider::new(Backend::Registry, DEFAULT_SPAIR_BUDGET);
        let vals = local_values(3, 4, &s, &mut prov).unwrap().unwrap();
        let v = rat(2, 9);
        let xs: Vec<BigRat> = (0..7).map(int).collect();
        let series: Vec<TruncSeries> = xs.iter().map(|u| wz_lhs(&vals, &s, u, &v)).collect();
        for n in 0..=4 {
            let ys: Vec<BigRat> = series.iter().map(|q| q.coeff(n)).collect();
            let c = interpolate(&xs, &ys);
            assert!(c[n + 1..].iter().all(|x| x.is_zero()), "Q^{n}");
        }
        // u = 0 matches the v-only specialization of the right side
        assert_eq!(wz_lhs(&vals, &s, &BigRat::zero(), &v), wz_rhs(4, &s, &BigRat::zero(), &v, 1).unwrap());
    }

    #[test]
    fn cycle_type_numbers() {
        assert_eq!(z_mu(&[2, 1, 1]), BigInt::from(4));
        for n in 1..8 {
            assert_eq!(z_mu(&[n]), BigInt::from(n));
        }
        assert_eq!(integer_partitions(6).len(), 11);
        // Σ 1/z_μ over partitions of n is 1
        for n in 1..8u32 {
            let total: BigRat = integer_partitions(n).iter().map(|m| BigRat::new(1.into(), z_mu(m))).sum();
            assert_eq!(total, int(1));
        }
    }

    #[test]
    fn p3_single_points() {
        let pts = p3_fixed_points(0, 2);
        let mut prov = HProvider::new(Backend::Registry, DEFAULT_SPAIR_BUDGET);
        let s = s3();
        let t = toric_assemble(&pts, 1, &BigRat::zero(), &BigRat::zero(), None, &s, &mut prov).unwrap();
        assert_eq!(t.limit, "1");
        assert_eq!(t.equivariant, "1");
        // -[v] of n = 1 is χ(O(2)) = 10
        assert_eq!(tautological_chi(&pts, 1, None, &s, &mut prov).unwrap(), int(10));
    }

    #[test]
    fn p3_structure_sheaf_low_n() {
        let pts = p3_fixed_points(0, 0);
        let mut prov = HProvider::new(Backend::Registry, DEFAULT_SPAIR_BUDGET);
        for n in 1..=3 {
            let t = toric_assemble(&pts, n, &BigRat::zero(), &BigRat::zero(), None, &s3(), &mut prov).unwrap();
            assert_eq!((t.limit.as_str(), t.integral), ("1", true), "n = {n}");
            assert_eq!(t.equivariant, "1", "n = {n}");
        }
    }

    #[test]
    fn hyperplane_union_examples() {
        for n in 1..=3 {
            for l in -2..=3 {
                let k = coordinate_lines_chi(n, l).unwrap();
                assert_eq!(k.value_at_one(), hyperplane_union_chi_oracle(n, l), "n={n} l={l}");
                let closed = hyperplane_union_chi_oracle(n, l);
                let b = |a: i64, k: i64| -> BigInt {
                    let mut acc = BigRat::one();
                    for i in 0..k {
                        acc = acc * int(a - i) / int(i + 1);
                    }
                    acc.to_integer()
                };
                assert_eq!(closed, b(l + n as i64, n as i64) - b(l - 1, n as i64));
            }
        }
        // triangle in P^2: arithmetic genus one
        assert!(coordinate_lines_chi(2, 0).unwrap().value_at_one().is_zero());
        // symmetric in the variables
        let k = coordinate_lines_chi(2, 2).unwrap();
        assert_eq!(k.permute(&[1, 2, 0]), k);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]

        #[test]
        fn exp_identity_random(ys in proptest::collection::vec((-20i64..20, 1i64..20), 6)) {
            let y: Vec<BigRat> = ys.iter().map(|(a, b)| rat(*a, *b)).collect();
            prop_assert!(exp_identity_check(6, &y));
        }
    }
}
