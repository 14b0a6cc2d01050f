//! Command-line surface: argument parsing, configuration, the result cache
//! and report rendering. Exit codes are 0 (pass), 1 (verification failed),
//! 2 (S-pair budget exceeded) and 3 (bad input).

pub mod cache;
pub mod config;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{fmt_rat, parse_rat, BigRat, EpsDirection};
use crate::groebner::{ideal_equal, initial_ideal, GbError};
use crate::haiman::{
    cotangent_weights, extra_dimension, haiman_equations, jacobian_ideal, pyramid_potential, registry, remap_by_names,
    simple_eliminate, HaimanPresentation,
};
use crate::hilbert::{
    chart_series, closed_form_for, closed_form_registry, grading_order, hilbert_series, kpoly_monomial, mutated,
    random_s, reciprocity_check, schur_K_G26, series_agree, ChartTier, HilbertError, HilbertSeries, SeriesJson,
};
use crate::locverify::{
    exp_identity_sides, p3_fixed_points, tautological_chi, toric_assemble, verify_wz, z_mu, Backend, FixedPointDatum,
    HProvider, LocError, Source, WzRun, TORIC_SCHEMA,
};
use crate::partitions::{enumerate_partitions, named, permutations, Partition, PartitionError};
use crate::poly::{ring, MonomialOrder, MultiPoly, PolyError};

use cache::Cache;
use config::Config;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

impl CliError {
    fn input(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, msg: msg.into() }
    }
}

impl From<GbError> for CliError {
    fn from(e: GbError) -> Self {
        let code = match e {
            GbError::BudgetExceeded(_) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        CliError { code, msg: e.to_string() }
    }
}

impl From<HilbertError> for CliError {
    fn from(e: HilbertError) -> Self {
        match e {
            HilbertError::Groebner(g) => g.into(),
            HilbertError::RetryCap(_) => CliError { code: EXIT_FAIL, msg: e.to_string() },
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<LocError> for CliError {
    fn from(e: LocError) -> Self {
        match e {
            LocError::Hilbert(h) => h.into(),
            LocError::Unsupported { .. } | LocError::BadData(_) | LocError::ZeroV => CliError::input(e.to_string()),
            _ => CliError { code: EXIT_FAIL, msg: e.to_string() },
        }
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::input(e.to_string())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "hilbloc", version, about = "Local equations, equivariant Hilbert series and localization checks for Hilbert schemes of points")]
pub struct Cli {
    /// JSON config with keys seed, spair_budget, trunc_default, cache_dir.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Cache directory (overrides HILBLOC_CACHE_DIR and the config file).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// S-pair budget for Gröbner computations.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the r-dimensional partitions of n with Borel flag and extra dimension.
    Partitions {
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// One row per class under permutation of the coordinates.
        #[arg(long)]
        classes: bool,
    },
    /// Dump the Haiman presentation of a partition.
    Haiman {
        /// Cell list JSON, chain notation "(1)<(3,2)", lambda_<tag> or pyr<n>.
        spec: String,
        /// Apply the simple elimination of linear coordinates.
        #[arg(long)]
        eliminate: bool,
        /// Append the cotangent weights at the fixed point.
        #[arg(long)]
        weights: bool,
        /// Print the potential instead (pyramids and lambda_1321).
        #[arg(long)]
        potential: bool,
    },
    /// Equivariant Hilbert series of a local ring or of an ideal from a file.
    Hilbert {
        /// Partition spec, or "plucker" for the cone over G(2,6).
        spec: Option<String>,
        /// JSON file {vars, gens, weights, order?}.
        #[arg(long, conflicts_with = "spec")]
        ideal: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        backend: String,
        /// Evaluate at θ_i = s_i^2 for the given rationals s_i.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        specialize: Option<Vec<String>>,
        /// Compare the closed form with the Gröbner route at random points.
        #[arg(long)]
        compare: bool,
    },
    /// Run one verification and emit a JSON report.
    Verify(VerifyArgs),
    /// Shorthand for `verify --wz`.
    VerifyWz(WzArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub check: Check,
    #[command(flatten)]
    pub wz: WzArgs,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Check {
    /// The localization generating identity through Q^trunc.
    #[arg(long)]
    pub wz: bool,
    /// Reciprocity of every closed form and of the colength-7 Jacobian series.
    #[arg(long)]
    pub reciprocity: bool,
    /// The exponential identity through Q^trunc.
    #[arg(long)]
    pub exp_identity: bool,
    /// Jacobian of the pyramid potential against the Haiman ideal.
    #[arg(long, value_name = "N")]
    pub pyramid: Option<u32>,
    /// Toric assembly from a fixed-point file, or the builtin "p3[:k,l]".
    #[arg(long, value_name = "FILE")]
    pub toric: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct WzArgs {
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    #[arg(long)]
    pub trunc: Option<usize>,
    /// auto, groebner, registry or smooth.
    #[arg(long, default_value = "auto")]
    pub backend: String,
    /// Number of random specializations.
    #[arg(long, default_value_t = 3)]
    pub points: usize,
}

/// Settings shared by every command after merging flags and config.
pub struct Ctx {
    pub seed: u64,
    pub budget: usize,
    pub trunc: usize,
    pub cache: Cache,
}

/// What a command produced: a JSON document, its text rendering, and
/// whether the check it ran passed.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub pass: bool,
}

/// Parses `args`, runs the command and writes to stdout / stderr.
/// Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let default_format = match cli.cmd {
        Command::Verify(_) | Command::VerifyWz(_) => Format::Json,
        _ => Format::Text,
    };
    let format = cli.format.unwrap_or(default_format);
    match run(&cli) {
        Ok(rep) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&rep.json).expect("serializable")),
                Format::Text => print!("{}", rep.text),
            }
            if rep.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.msg);
            e.code
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p).map_err(CliError::input)?,
        None => Config::default(),
    };
    let cache = if cli.no_cache { Cache::disabled() } else { Cache::new(cfg.resolve_cache_dir(cli.cache_dir.as_deref())) };
    let ctx = Ctx {
        seed: cli.seed.unwrap_or(cfg.seed),
        budget: cli.budget.unwrap_or(cfg.spair_budget),
        trunc: cfg.trunc_default,
        cache,
    };
    match &cli.cmd {
        Command::Partitions { r, n, classes } => cmd_partitions(*r, *n, *classes),
        Command::Haiman { spec, eliminate, weights, potential } => cmd_haiman(spec, *eliminate, *weights, *potential),
        Command::Hilbert { spec, ideal, backend, specialize, compare } => {
            cmd_hilbert(&ctx, spec.as_deref(), ideal.as_ref(), backend, specialize.as_deref(), *compare)
        }
        Command::Verify(v) => {
            let c = &v.check;
            if c.wz {
                cmd_wz(&ctx, &v.wz)
            } else if c.reciprocity {
                cmd_reciprocity(&ctx)
            } else if c.exp_identity {
                cmd_exp_identity(&ctx, v.wz.trunc.unwrap_or(ctx.trunc))
            } else if let Some(n) = c.pyramid {
                cmd_pyramid(&ctx, n)
            } else if let Some(t) = &c.toric {
                cmd_toric(&ctx, t, &v.wz.backend)
            } else {
                Err(CliError::input("no check selected"))
            }
        }
        Command::VerifyWz(w) => cmd_wz(&ctx, w),
    }
}

fn parse_backend(s: &str) -> Result<Backend, CliError> {
    Backend::parse(s).ok_or_else(|| CliError::input(format!("unknown backend {s:?} (auto, groebner, registry, smooth)")))
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

// ---------------------------------------------------------------- partitions

#[derive(Serialize)]
struct PartitionRow {
    size: usize,
    chain: String,
    cells: Vec<Vec<u32>>,
    borel: bool,
    /// Variable order witnessing the Borel property, most dominant first.
    borel_order: Option<Vec<usize>>,
    extra_dim: i64,
    /// smooth, borel (singular Borel) or non-borel (singular, not Borel).
    class: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    orbit: Option<usize>,
}

fn row(p: &Partition, orbit: Option<usize>) -> PartitionRow {
    let borel_order = p.is_borel();
    let extra_dim = extra_dimension(p);
    let class = match (extra_dim, borel_order.is_some()) {
        (0, _) => "smooth",
        (_, true) => "borel",
        (_, false) => "non-borel",
    };
    PartitionRow {
        size: p.size(),
        chain: p.chain_notation(),
        cells: p.cells().to_vec(),
        borel: borel_order.is_some(),
        borel_order,
        extra_dim,
        class,
        orbit,
    }
}

pub fn cmd_partitions(r: usize, n: usize, classes: bool) -> Result<Report, CliError> {
    if r == 0 {
        return Err(CliError::input("r must be positive"));
    }
    let all = enumerate_partitions(r, n);
    let rows: Vec<PartitionRow> = if classes {
        let mut orbits: BTreeMap<Partition, usize> = BTreeMap::new();
        for p in &all {
            *orbits.entry(p.canonicalize().0).or_default() += 1;
        }
        orbits.iter().map(|(p, &k)| row(p, Some(k))).collect()
    } else {
        all.iter().map(|p| row(p, None)).collect()
    };
    let mut text = String::new();
    let _ = writeln!(text, "{:>4}  {:<6}  {:>5}  {:<9}  partition", "|λ|", "borel", "extra", "class");
    for x in &rows {
        let orbit = x.orbit.map(|k| format!("  (orbit {k})")).unwrap_or_default();
        let _ = writeln!(
            text,
            "{:>4}  {:<6}  {:>5}  {:<9}  {}{orbit}",
            x.size,
            if x.borel { "yes" } else { "no" },
            x.extra_dim,
            x.class,
            x.chain
        );
    }
    let _ = writeln!(text, "{} rows", rows.len());
    let json = json!({
        "schema": "hilbloc.partitions",
        "version": crate::VERSION,
        "r": r,
        "n": n,
        "classes": classes,
        "rows": rows,
    });
    Ok(Report { json, text, pass: true })
}

// ------------------------------------------------------------------- haiman

fn presentation_json(p: &HaimanPresentation) -> Value {
    json!({
        "schema": "hilbloc.haiman_presentation",
        "version": crate::VERSION,
        "partition": p.partition.to_json(),
        "chain": p.partition.chain_notation(),
        "vars": p.vars.iter().map(|v| json!({"name": v.name(), "weight": v.weight()})).collect::<Vec<_>>(),
        "equations": p.equations.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "eliminated": p.eliminated.iter().map(|(v, e)| json!({"var": v.name(), "value": e.to_string()})).collect::<Vec<_>>(),
    })
}

pub fn cmd_haiman(spec: &str, eliminate: bool, weights: bool, potential: bool) -> Result<Report, CliError> {
    let p = Partition::parse_spec(spec)?;
    if potential {
        return potential_report(&p);
    }
    if p.size() == 0 {
        return Err(CliError::input("the empty partition has no Haiman chart"));
    }
    let raw = haiman_equations(&p);
    let pres = if eliminate { simple_eliminate(&raw) } else { raw };
    let mut json = presentation_json(&pres);
    let mut text = pres.dump();
    if weights {
        let (w, extra) = cotangent_weights(&p);
        json["cotangent_weights"] = to_value(&w);
        json["extra_dim"] = json!(extra);
        let _ = writeln!(text, "cotangent weights ({} = {}·{} + {extra}):", w.len(), p.dim(), p.size());
        for x in &w {
            let _ = writeln!(text, "  {x:?}");
        }
    }
    Ok(Report { json, text, pass: true })
}

fn potential_report(p: &Partition) -> Result<Report, CliError> {
    let (f, names): (MultiPoly, Vec<String>) = if named("1321").as_ref() == Some(p) {
        let f = registry::f1321();
        let names = f.ring().to_vec();
        (f, names)
    } else {
        let n = (1..=8).find(|&k| Partition::pyramid(3, k) == *p && k >= 2);
        let Some(n) = n else {
            return Err(CliError::input("potentials are known for pyramids pyr<n>, n >= 2, and lambda_1321"));
        };
        let (f, vars) = pyramid_potential(n);
        (f, vars.iter().map(|v| v.name()).collect())
    };
    let text = format!("{} variables, {} terms\n{}\n", names.len(), f.len(), f);
    let json = json!({
        "schema": "hilbloc.potential",
        "version": crate::VERSION,
        "chain": p.chain_notation(),
        "vars": names,
        "potential": f.to_string(),
    });
    Ok(Report { json, text, pass: true })
}

// ------------------------------------------------------------------ hilbert

fn series_from_value(v: Value) -> Option<HilbertSeries> {
    let j: SeriesJson = serde_json::from_value(v).ok()?;
    HilbertSeries::from_json(&j)
}

/// Cached `H` of the Haiman chart of a canonical partition by the Gröbner route.
fn groebner_chart(ctx: &Ctx, canon: &Partition) -> Result<HilbertSeries, CliError> {
    let input = json!({ "partition": canon.to_json(), "tier": ChartTier::Step0.name() });
    if let Some(h) = ctx.cache.get("chart_series", &input).and_then(series_from_value) {
        return Ok(h);
    }
    let (h, _) = chart_series(canon, ChartTier::Step0, ctx.budget)?;
    if let Err(e) = ctx.cache.put("chart_series", &input, &to_value(&h.to_json())) {
        eprintln!("warning: cache write failed: {e}");
    }
    Ok(h)
}

/// Cached `H(A_{λ_1321})` from the Jacobian of the colength-7 potential.
fn jacobian_1321(ctx: &Ctx) -> Result<HilbertSeries, CliError> {
    let input = json!({ "potential": "F_1321" });
    if let Some(h) = ctx.cache.get("jacobian_series", &input).and_then(series_from_value) {
        return Ok(h);
    }
    let h = crate::hilbert::series_1321(ctx.budget)?;
    if let Err(e) = ctx.cache.put("jacobian_series", &input, &to_value(&h.to_json())) {
        eprintln!("warning: cache write failed: {e}");
    }
    Ok(h)
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// `H(A_λ)` through the chosen backend, with the on-disk cache in front of
/// the expensive routes.
pub fn local_series(ctx: &Ctx, lambda: &Partition, backend: Backend) -> Result<(HilbertSeries, Source), CliError> {
    let (_, extra) = cotangent_weights(lambda);
    if lambda.size() == 0 || extra == 0 {
        return Ok(HProvider::new(Backend::Smooth, ctx.budget).series(lambda)?);
    }
    let groebner = || -> Result<(HilbertSeries, Source), CliError> {
        let (canon, perm) = lambda.canonicalize();
        Ok((groebner_chart(ctx, &canon)?.permute(&invert(&perm)), Source::Groebner))
    };
    let registry = || -> Result<Option<(HilbertSeries, Source)>, CliError> {
        if let Some((_, h)) = closed_form_for(lambda) {
            return Ok(Some((h, Source::Registry)));
        }
        let base = named("1321").expect("registered");
        if lambda.dim() == 3 && lambda.size() == base.size() {
            if let Some(perm) = permutations(3).into_iter().find(|q| base.permute(q) == *lambda) {
                return Ok(Some((jacobian_1321(ctx)?.permute(&perm), Source::Jacobian)));
            }
        }
        Ok(None)
    };
    let unsupported = |b: &'static str| CliError::input(format!("no {b} formula for singular partition {lambda}"));
    match backend {
        Backend::Smooth => Err(unsupported("smooth")),
        Backend::Groebner => groebner(),
        Backend::Registry => registry()?.ok_or_else(|| unsupported("registry")),
        Backend::Auto => match registry()? {
            Some(x) => Ok(x),
            None => groebner(),
        },
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct IdealFile {
    vars: Vec<String>,
    gens: Vec<String>,
    weights: Vec<Vec<i64>>,
    #[serde(default)]
    order: Option<String>,
}

fn parse_order(s: &str, weights: &[Vec<i64>]) -> Result<MonomialOrder, CliError> {
    match s {
        "lex" => Ok(MonomialOrder::Lex),
        "grevlex" => Ok(MonomialOrder::GrevLex),
        "grading" => grading_order(weights).ok_or_else(|| CliError::input("weights admit no positive grading")),
        _ => Err(CliError::input(format!("unknown order {s:?} (lex, grevlex, grading)"))),
    }
}

fn ideal_series(ctx: &Ctx, path: &PathBuf) -> Result<HilbertSeries, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let file: IdealFile = serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    if file.weights.len() != file.vars.len() {
        return Err(CliError::input("one weight per variable is required"));
    }
    let rg = ring(&file.vars);
    let gens: Vec<MultiPoly> = file.gens.iter().map(|g| MultiPoly::parse(&rg, g)).collect::<Result<_, _>>()?;
    let order = file.order.as_deref().map(|o| parse_order(o, &file.weights)).transpose()?;
    let input = json!({
        "vars": file.vars,
        "gens": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "weights": file.weights,
        "order": order.as_ref().map(|o| o.name()),
    });
    if let Some(h) = ctx.cache.get("hilbert_series", &input).and_then(series_from_value) {
        return Ok(h);
    }
    let h = if gens.is_empty() {
        let j = crate::groebner::MonomialIdeal::zero(file.vars.len());
        crate::hilbert::monomial_series(&j, &file.weights)
    } else {
        hilbert_series(&gens, &file.weights, order.as_ref(), ctx.budget)?.0
    };
    if let Err(e) = ctx.cache.put("hilbert_series", &input, &to_value(&h.to_json())) {
        eprintln!("warning: cache write failed: {e}");
    }
    Ok(h)
}

fn plucker_report(ctx: &Ctx) -> Result<Report, CliError> {
    let j = initial_ideal(&registry::plucker_ideal(), &MonomialOrder::GrevLex, ctx.budget)?;
    let via_groebner = kpoly_monomial(&j, &registry::plucker_weights());
    let via_schur = schur_K_G26();
    let equal = via_groebner == via_schur;
    let h = HilbertSeries { numerator: via_groebner.clone(), denom_weights: registry::plucker_weights() };
    let text = format!(
        "K via initial ideal: {} terms\nK via resolution characters: {} terms\nequal: {equal}\nH = {}\n",
        via_groebner.len(),
        via_schur.len(),
        h.pretty()
    );
    let json = json!({
        "schema": "hilbloc.plucker_check",
        "version": crate::VERSION,
        "equal": equal,
        "series": h.to_json(),
    });
    Ok(Report { json, text, pass: equal })
}

pub fn cmd_hilbert(
    ctx: &Ctx,
    spec: Option<&str>,
    ideal: Option<&PathBuf>,
    backend: &str,
    specialize: Option<&[String]>,
    compare: bool,
) -> Result<Report, CliError> {
    let backend = parse_backend(backend)?;
    if spec == Some("plucker") {
        return plucker_report(ctx);
    }
    let (h, source, lambda) = match (spec, ideal) {
        (_, Some(path)) => (ideal_series(ctx, path)?, None, None),
        (Some(s), None) => {
            let p = Partition::parse_spec(s)?;
            let (h, src) = local_series(ctx, &p, backend)?;
            (h, Some(src), Some(p))
        }
        (None, None) => return Err(CliError::input("give a partition spec, \"plucker\" or --ideal FILE")),
    };
    let mut json = json!({
        "schema": "hilbloc.hilbert_result",
        "version": crate::VERSION,
        "series": h.to_json(),
    });
    let mut text = format!("H = {}\n", h.pretty());
    if let Some(p) = &lambda {
        json["chain"] = json!(p.chain_notation());
        let _ = writeln!(text, "partition {p}");
    }
    if let Some(src) = source {
        json["source"] = to_value(&src);
        let _ = writeln!(text, "source {}", to_value(&src).as_str().unwrap_or("?"));
    }
    if let Some(vals) = specialize {
        let s: Vec<BigRat> = vals.iter().map(|v| parse_rat(v.trim())).collect::<Result<_, _>>().map_err(|e| CliError::input(e.to_string()))?;
        if s.len() != h.r() {
            return Err(CliError::input(format!("need {} values, got {}", h.r(), s.len())));
        }
        let value = h.eval_s(&s).ok_or_else(|| CliError::input("a denominator vanishes at this point"))?;
        json["specialization"] = json!({
            "s": s.iter().map(fmt_rat).collect::<Vec<_>>(),
            "theta": s.iter().map(|x| fmt_rat(&(x * x))).collect::<Vec<_>>(),
            "value": fmt_rat(&value),
        });
        let _ = writeln!(text, "value at θ = s^2, s = ({}): {}", s.iter().map(fmt_rat).collect::<Vec<_>>().join(", "), fmt_rat(&value));
    }
    let mut pass = true;
    if compare {
        let p = lambda.ok_or_else(|| CliError::input("--compare needs a partition"))?;
        let (a, _) = local_series(ctx, &p, Backend::Registry)?;
        let (b, _) = local_series(ctx, &p, Backend::Groebner)?;
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let agree = series_agree(&a, &b, 3, &mut rng)?;
        pass = agree;
        json["comparison"] = json!({ "registry_vs_groebner": agree, "points": 3, "seed": ctx.seed });
        let _ = writeln!(text, "registry vs groebner at 3 points: {}", if agree { "equal" } else { "DIFFER" });
    }
    Ok(Report { json, text, pass })
}

// ------------------------------------------------------------------- verify

fn wz_text(run: &WzRun) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "r = {}, through Q^{}, backend {}, seed {}", run.r, run.trunc, run.backend, run.seed);
    let _ = writeln!(
        t,
        "sources: {}",
        run.sources.iter().map(|(k, v)| format!("{k} {v}")).collect::<Vec<_>>().join(", ")
    );
    for (i, rep) in run.reports.iter().enumerate() {
        let _ = writeln!(t, "point {}: s = ({}), u = {}, v = {}", i + 1, rep.s.join(", "), rep.u, rep.v);
        for (k, (l, r)) in rep.lhs.iter().zip(&rep.rhs).enumerate() {
            let _ = writeln!(t, "  Q^{k:<2} {} {l}  |  {r}", if l == r { "ok " } else { "BAD" });
        }
        if let Some(sym) = rep.symmetric_verdict {
            let _ = writeln!(t, "  symmetric form: {}", if sym { "ok" } else { "BAD" });
        }
    }
    let _ = writeln!(t, "verdict: {}", if run.verdict { "PASS" } else { "FAIL" });
    t
}

pub fn cmd_wz(ctx: &Ctx, args: &WzArgs) -> Result<Report, CliError> {
    let backend = parse_backend(&args.backend)?;
    let trunc = args.trunc.unwrap_or(ctx.trunc);
    if args.r == 0 || args.points == 0 {
        return Err(CliError::input("r and points must be positive"));
    }
    let input = json!({ "r": args.r, "trunc": trunc, "backend": backend.name(), "points": args.points, "seed": ctx.seed });
    let run: WzRun = ctx.cache.memo("verify_wz", &input, || -> Result<WzRun, CliError> {
        // seed the provider with singular series from the disk cache
        let mut prov = HProvider::new(backend, ctx.budget);
        for k in 0..=trunc {
            for p in enumerate_partitions(args.r, k) {
                let (_, extra) = cotangent_weights(&p);
                if extra > 0 && backend != Backend::Smooth {
                    let (h, src) = local_series(ctx, &p, backend)?;
                    prov.insert(p, h, src);
                }
            }
        }
        Ok(verify_wz(args.r, trunc, args.points, ctx.seed, &mut prov)?)
    })?;
    Ok(Report { text: wz_text(&run), pass: run.verdict, json: to_value(&run) })
}

fn generic_report(check: &str, seed: u64, verdict: bool, details: Value) -> Value {
    json!({
        "schema": "hilbloc.verify_report",
        "version": crate::VERSION,
        "check": check,
        "seed": seed,
        "details": details,
        "verdict": verdict,
    })
}

fn rows_text(title: &str, rows: &[(String, bool)], verdict: bool) -> String {
    let mut t = format!("{title}\n");
    for (name, ok) in rows {
        let _ = writeln!(t, "  {:<40} {}", name, if *ok { "ok" } else { "FAIL" });
    }
    let _ = writeln!(t, "verdict: {}", if verdict { "PASS" } else { "FAIL" });
    t
}

pub fn cmd_reciprocity(ctx: &Ctx) -> Result<Report, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut rows: Vec<(String, bool)> = Vec::new();
    for cf in closed_form_registry() {
        let ok = reciprocity_check(&cf.series(), &cf.partition(), 3, &mut rng)?;
        let label = if cf.conditional { format!("{} (conditional)", cf.tag) } else { cf.tag.to_string() };
        rows.push((label, ok));
    }
    let lambda = named("1321").expect("registered");
    let h = jacobian_1321(ctx)?;
    rows.push(("1321 (Jacobian)".into(), reciprocity_check(&h, &lambda, 3, &mut rng)?));
    let control = reciprocity_check(&mutated(&h), &lambda, 3, &mut rng)?;
    let verdict = rows.iter().all(|r| r.1) && !control;
    let mut shown = rows.clone();
    shown.push(("mutated 1321 rejected (control)".into(), !control));
    let details = json!({
        "points": 3,
        "checks": rows.iter().map(|(k, v)| json!({"tag": k, "holds": v})).collect::<Vec<_>>(),
        "mutated_control_holds": control,
    });
    Ok(Report { json: generic_report("reciprocity", ctx.seed, verdict, details), text: rows_text("reciprocity", &shown, verdict), pass: verdict })
}

pub fn cmd_exp_identity(ctx: &Ctx, n: usize) -> Result<Report, CliError> {
    if n == 0 {
        return Err(CliError::input("trunc must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for i in 0..10 {
        let y: Vec<BigRat> =
            (0..n).map(|_| crate::arith::rat(rng.gen_range(-50..=50), rng.gen_range(1..=50))).collect();
        let (a, b) = exp_identity_sides(n, &y);
        rows.push((format!("random Y #{}", i + 1), a == b));
        samples.push(json!({
            "y": y.iter().map(fmt_rat).collect::<Vec<_>>(),
            "lhs": a.coeffs().iter().map(fmt_rat).collect::<Vec<_>>(),
            "rhs": b.coeffs().iter().map(fmt_rat).collect::<Vec<_>>(),
            "holds": a == b,
        }));
    }
    let z211 = z_mu(&[2, 1, 1]);
    rows.push((format!("z_(2,1,1) = {z211}"), z211 == 4.into()));
    let zn = (1..=n as u32).all(|k| z_mu(&[k]) == k.into());
    rows.push((format!("z_(k) = k for k <= {n}"), zn));
    let verdict = rows.iter().all(|r| r.1);
    let details = json!({ "trunc": n, "samples": samples, "z_211": z211.to_string(), "z_cycle_ok": zn });
    Ok(Report {
        json: generic_report("exp_identity", ctx.seed, verdict, details),
        text: rows_text(&format!("exponential identity through Q^{n}"), &rows, verdict),
        pass: verdict,
    })
}

pub fn cmd_pyramid(ctx: &Ctx, n: u32) -> Result<Report, CliError> {
    if n < 2 {
        return Err(CliError::input("pyramid height must be at least 2"));
    }
    let input = json!({ "height": n });
    let (equal, nvars): (bool, usize) = ctx.cache.memo("pyramid_check", &input, || -> Result<(bool, usize), CliError> {
        let lambda = Partition::pyramid(3, n);
        let step0 = simple_eliminate(&haiman_equations(&lambda));
        let (f, _) = pyramid_potential(n);
        let jac: Option<Vec<MultiPoly>> = jacobian_ideal(&f).iter().map(|g| remap_by_names(g, &step0.ring)).collect();
        let Some(jac) = jac else {
            return Ok((false, step0.vars.len()));
        };
        let order = grading_order(&step0.weights()).unwrap_or(MonomialOrder::GrevLex);
        Ok((ideal_equal(&jac, &step0.equations, &order, ctx.budget)?, step0.vars.len()))
    })?;
    let details = json!({ "height": n, "partition": Partition::pyramid(3, n).chain_notation(), "variables": nvars, "ideal_equal": equal });
    let rows = vec![(format!("Jac(F) = step-0 Haiman ideal, {nvars} variables"), equal)];
    Ok(Report {
        json: generic_report("pyramid", ctx.seed, equal, details),
        text: rows_text(&format!("pyramid of height {n}"), &rows, equal),
        pass: equal,
    })
}

/// Fixed-point data for `verify --toric`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToricData {
    #[serde(default)]
    pub schema: Option<String>,
    pub points: Vec<FixedPointDatum>,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    /// Rationals as strings; both default to 0.
    #[serde(default)]
    pub u: Option<String>,
    #[serde(default)]
    pub v: Option<String>,
    /// Report χ(L^[n]) instead of the (u, v) assembly.
    #[serde(default)]
    pub tautological: bool,
    #[serde(default)]
    pub direction: Option<Vec<i64>>,
    /// Expected limits for n = 1..n_max.
    #[serde(default)]
    pub expect: Option<Vec<String>>,
}

fn default_n_max() -> usize {
    4
}

fn builtin_toric(spec: &str) -> Result<Option<ToricData>, CliError> {
    let Some(rest) = spec.strip_prefix("p3") else { return Ok(None) };
    let (k, l) = match rest.strip_prefix(':') {
        None if rest.is_empty() => (0, 0),
        Some(kl) => {
            let parts: Vec<&str> = kl.split(',').collect();
            let [k, l] = parts.as_slice() else { return Err(CliError::input("use p3:k,l")) };
            let num = |s: &str| s.trim().parse::<i64>().map_err(|_| CliError::input(format!("bad degree {s:?}")));
            (num(k)?, num(l)?)
        }
        _ => return Ok(None),
    };
    let chi = |d: i64| -> String {
        // χ(P^3, O(d)) = C(d+3, 3)
        let c = (d + 1) * (d + 2) * (d + 3) / 6;
        c.to_string()
    };
    let tautological = l != 0;
    let expect = if tautological {
        Some(vec![chi(l); 4])
    } else if k == 0 {
        Some(vec!["1".to_string(); 4])
    } else {
        None
    };
    Ok(Some(ToricData {
        schema: Some("hilbloc.toric_data".into()),
        points: p3_fixed_points(k, l),
        n_max: 4,
        u: None,
        v: None,
        tautological,
        direction: None,
        expect,
    }))
}

pub fn cmd_toric(ctx: &Ctx, spec: &str, backend: &str) -> Result<Report, CliError> {
    let backend = parse_backend(backend)?;
    let data = match builtin_toric(spec)? {
        Some(d) => d,
        None => {
            let text = std::fs::read_to_string(spec).map_err(|e| CliError::input(format!("{spec}: {e}")))?;
            serde_json::from_str(&text).map_err(|e| CliError::input(format!("{spec}: {e}")))?
        }
    };
    let r = data.points.first().map(|p| p.cotangent.len()).ok_or_else(|| CliError::input("no fixed points"))?;
    for p in &data.points {
        p.validate(r)?;
    }
    let rat_or_zero = |s: &Option<String>| -> Result<BigRat, CliError> {
        s.as_deref().map(parse_rat).transpose().map(|x| x.unwrap_or_default()).map_err(|e| CliError::input(e.to_string()))
    };
    let (u, v) = (rat_or_zero(&data.u)?, rat_or_zero(&data.v)?);
    let dir = data.direction.clone().map(EpsDirection);
    let input = json!({ "data": to_value(&data), "backend": backend.name(), "seed": ctx.seed });
    let values: Vec<Value> = ctx.cache.memo("toric", &input, || -> Result<Vec<Value>, CliError> {
        let mut prov = HProvider::new(backend, ctx.budget);
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let s = random_s(&mut rng, r, 30);
        let mut out = Vec::new();
        for n in 1..=data.n_max {
            for k in 0..=n {
                for p in enumerate_partitions(r, k) {
                    if cotangent_weights(&p).1 > 0 && !prov.contains(&p) {
                        let (h, src) = local_series(ctx, &p, backend)?;
                        prov.insert(p, h, src);
                    }
                }
            }
            if data.tautological {
                let c = tautological_chi(&data.points, n, dir.as_ref(), &s, &mut prov)?;
                out.push(json!({ "n": n, "chi_tautological": fmt_rat(&c) }));
            } else {
                out.push(to_value(&toric_assemble(&data.points, n, &u, &v, dir.as_ref(), &s, &mut prov)?));
            }
        }
        Ok(out)
    })?;
    let key = if data.tautological { "chi_tautological" } else { "limit" };
    let got: Vec<String> = values.iter().map(|x| x[key].as_str().unwrap_or("").to_string()).collect();
    let integral = got.iter().all(|g| parse_rat(g).map(|q| q.is_integer()).unwrap_or(false));
    let matches = data.expect.as_ref().map(|e| e.iter().zip(&got).all(|(a, b)| a == b) && e.len() <= got.len());
    let verdict = integral && matches != Some(false);
    let mut rows: Vec<(String, bool)> = got
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let want = data.expect.as_ref().and_then(|e| e.get(i));
            let ok = parse_rat(g).map(|q| q.is_integer()).unwrap_or(false) && want.is_none_or(|w| w == g);
            (format!("n = {}: {key} = {g}", i + 1), ok)
        })
        .collect();
    if let Some(e) = &data.expect {
        rows.push((format!("expected {}", e.join(", ")), matches == Some(true)));
    }
    let json = json!({
        "schema": TORIC_SCHEMA,
        "version": crate::VERSION,
        "backend": backend.name(),
        "seed": ctx.seed,
        "u": fmt_rat(&u),
        "v": fmt_rat(&v),
        "tautological": data.tautological,
        "values": values,
        "expect": data.expect,
        "verdict": verdict,
    });
    Ok(Report { json, text: rows_text("toric assembly", &rows, verdict), pass: verdict })
}
