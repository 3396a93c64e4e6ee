//! Command-line front end.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::grassmann::C64;
use crate::json::to_canonical;
use crate::rmatrix::{Kind, RMatrixSpec};
use crate::sampling::Sampler;
use crate::solutions::{
    build_k, catalog, catalog_item, BuiltK, C4Mode, Family, FamilyParams, IiSlot, Side, Variant,
};
use crate::supermatrix::GradingProfile;
use crate::verify::{
    check_r, verify_family, Check, Environment, VerifyOptions, VerifyReport, DEFAULT_SEED,
};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "grk",
    version,
    about = "Graded R- and K-matrices with Grassmann-exact verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a family's K-matrix at one λ.
    Gen(GenArgs),
    /// Check the reflection algebras for a family.
    Verify(VerifyArgs),
    /// Check the Yang-Baxter equation and R-matrix properties.
    CheckR(CheckRArgs),
    /// Per-sector residuals of the reflection equation.
    Sectors(VerifyArgs),
    /// Small explicit matrices.
    Catalog(CatalogArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum FamilyTag {
    Trivial,
    DiagRat,
    DiagTrig,
    NdRat,
    NdTrig,
    FermRat,
    FermTrig,
    FermRatNondiag,
}

#[derive(Args, Debug, Default)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyTag>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    q1: Option<usize>,
    #[arg(long)]
    q2: Option<usize>,
    #[arg(long, value_parser = parse_variant)]
    variant: Option<Variant>,
    #[arg(long, value_parser = parse_side)]
    side: Option<Side>,
    /// L for λ families, Λ for γ families (1-based).
    #[arg(long, visible_aliases = ["L", "Lambda"])]
    bound: Option<usize>,
    /// ℓ or ξ.
    #[arg(long, visible_aliases = ["l", "xi"])]
    shift: Option<usize>,
    /// Comma-separated c₀,c₁,…; items may be named (c2=…) and complex (0.5-1.2i).
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, value_parser = ["c0", "c1"])]
    c4_mode: Option<String>,
    #[arg(long, value_parser = ["slot", "literal"])]
    slot: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_branch)]
    branch: Option<i8>,
    #[arg(long)]
    upper_right: bool,
    /// "auto" or a JSON file mapping generator labels to [re, im].
    #[arg(long, default_value = "auto")]
    grassmann: String,
    /// JSON file with the full parameter record; overrides the flags above.
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
    lambda: C64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(short, long)]
    o: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_pair, default_value = "0.37,0")]
    eta: C64,
    /// Also report each sector of the reflection equation.
    #[arg(long)]
    sectors: bool,
    /// Skip reduction modulo the constraint ideal.
    #[arg(long)]
    no_reduce: bool,
}

#[derive(Args, Debug)]
struct CheckRArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: Kind,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_pair, default_value = "0.37,0")]
    eta: C64,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[arg(long, conflicts_with_all = ["id", "check"])]
    list: bool,
    #[arg(long)]
    id: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
    lambda: Option<C64>,
    /// Compare entries with their constructors at three seeded λ.
    #[arg(long)]
    check: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_side(s: &str) -> Result<Side, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_branch(s: &str) -> Result<i8, String> {
    match s {
        "1" | "+1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        _ => Err(format!("branch must be +1 or -1, got {s}")),
    }
}

/// "RE,IM" or a single complex literal.
pub fn parse_pair(s: &str) -> Result<C64, String> {
    match s.split_once(',') {
        Some((a, b)) => {
            let re = a.trim().parse::<f64>().map_err(|e| format!("{a}: {e}"))?;
            let im = b.trim().parse::<f64>().map_err(|e| format!("{b}: {e}"))?;
            Ok(C64::new(re, im))
        }
        None => parse_complex(s),
    }
}

/// Complex literal: "1.5", "-2i", "0.3-1e-2i".
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("not a complex number: {s}");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t
            .parse::<f64>()
            .map(|re| C64::new(re, 0.0))
            .map_err(|_| bad());
    };
    // split at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |x: &str| match x {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => x.parse::<f64>().map_err(|_| bad()),
    };
    match split {
        Some(k) => Ok(C64::new(
            body[..k].parse::<f64>().map_err(|_| bad())?,
            imag(&body[k..])?,
        )),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

/// Parses --c into positional slots.
pub fn parse_c_list(s: &str) -> Result<Vec<Option<C64>>, String> {
    let mut out: Vec<Option<C64>> = Vec::new();
    for (pos, item) in s.split(',').enumerate() {
        let item = item.trim();
        let (idx, val) = match item.split_once('=') {
            Some((k, v)) => {
                let idx = k
                    .trim()
                    .strip_prefix('c')
                    .and_then(|d| d.parse::<usize>().ok())
                    .ok_or_else(|| format!("bad coefficient name {k}"))?;
                (idx, v)
            }
            None => (pos, item),
        };
        if out.len() <= idx {
            out.resize(idx + 1, None);
        }
        out[idx] = Some(parse_complex(val)?);
    }
    Ok(out)
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Params(msg.into())
}

impl FamilyArgs {
    fn params(&self) -> Result<FamilyParams, Error> {
        let mut params = match &self.params {
            Some(path) => serde_json::from_str::<FamilyParams>(&std::fs::read_to_string(path)?)?,
            None => self.params_from_flags()?,
        };
        if self.grassmann != "auto" {
            let text = std::fs::read_to_string(&self.grassmann)?;
            let table: BTreeMap<String, C64> = serde_json::from_str(&text)?;
            match &mut params.family {
                Family::FermRat { coeffs, .. }
                | Family::FermTrig { coeffs, .. }
                | Family::FermRatNondiag { coeffs, .. } => coeffs.extend(table),
                _ => {
                    return Err(usage(
                        "--grassmann given for a family without odd parameters",
                    ))
                }
            }
        }
        Ok(params)
    }

    fn params_from_flags(&self) -> Result<FamilyParams, Error> {
        let tag = self
            .family
            .ok_or_else(|| usage("--family or --params is required"))?;
        let m = self.m.ok_or_else(|| usage("--m is required"))?;
        let n = self.n.ok_or_else(|| usage("--n is required"))?;
        let cs = match &self.c {
            Some(s) => parse_c_list(s).map_err(usage)?,
            None => Vec::new(),
        };
        let c = |i: usize| -> Result<C64, Error> {
            cs.get(i)
                .copied()
                .flatten()
                .ok_or_else(|| usage(format!("--c needs c{i}")))
        };
        let need =
            |v: Option<usize>, name: &str| v.ok_or_else(|| usage(format!("--{name} is required")));
        let variant = || self.variant.ok_or_else(|| usage("--variant is required"));
        let side = || self.side.ok_or_else(|| usage("--side is required"));
        let shift = self.shift.unwrap_or(0);
        let family = match tag {
            FamilyTag::Trivial => Family::Trivial {
                c0: c(0).unwrap_or(C64::new(1.0, 0.0)),
            },
            FamilyTag::DiagRat => Family::DiagRat {
                q1: need(self.q1, "q1")?,
                q2: need(self.q2, "q2")?,
                c0: c(0)?,
            },
            FamilyTag::DiagTrig => Family::DiagTrig {
                q: need(self.q, "q")?,
                c0: c(0)?,
            },
            FamilyTag::NdRat => Family::NdRat {
                variant: variant()?,
                side: side()?,
                bound: need(self.bound, "bound")?,
                shift,
                c: [c(0)?, c(1)?, c(2)?, c(3)?, c(4)?],
                slot: match self.slot.as_deref() {
                    Some("literal") => IiSlot::Literal,
                    _ => IiSlot::Slot,
                },
            },
            FamilyTag::NdTrig => Family::NdTrig {
                variant: variant()?,
                side: side()?,
                bound: need(self.bound, "bound")?,
                shift,
                c: [c(0)?, c(1)?, c(2)?, c(3)?],
                c4_mode: match self.c4_mode.as_deref() {
                    Some("c1") => C4Mode::C1,
                    _ => C4Mode::C0,
                },
                branch: self.branch.unwrap_or(1),
            },
            FamilyTag::FermRat => Family::FermRat {
                q1: need(self.q1, "q1")?,
                q2: need(self.q2, "q2")?,
                c0: c(0)?,
                upper_right: self.upper_right,
                coeffs: BTreeMap::new(),
            },
            FamilyTag::FermTrig => Family::FermTrig {
                q: need(self.q, "q")?,
                c0: c(0)?,
                coeffs: BTreeMap::new(),
            },
            FamilyTag::FermRatNondiag => Family::FermRatNondiag {
                variant: variant()?,
                side: side()?,
                bound: need(self.bound, "bound")?,
                shift,
                c: [c(0)?, c(1)?, c(2)?, c(3)?, c(4)?],
                coeffs: BTreeMap::new(),
            },
        };
        Ok(FamilyParams::new(m, n, family))
    }
}

/// Document written by `gen` and `catalog --id`.
pub fn k_document(built: &BuiltK, l: C64) -> Result<Value, Error> {
    Ok(json!({
        "params": serde_json::to_value(&built.params)?,
        "lambda": [l.re, l.im],
        "generators": built.registry.labels(),
        "matrix": built.eval(l).to_json(),
    }))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Error> {
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn emit_report(out: &mut dyn Write, report: &VerifyReport, format: Format) -> Result<i32, Error> {
    match format {
        Format::Json => emit(out, &to_canonical(&report.to_json()))?,
        Format::Text => emit(out, &report.to_text())?,
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

fn configure_threads() {
    if let Some(n) = std::env::var("GRK_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // a pool may already exist when run() is called repeatedly in-process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

/// Runs the CLI on `argv` (including the program name), writing the report
/// to `out`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("grk: {e}");
            match e {
                Error::Singular(_) => EXIT_SINGULAR,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Error> {
    match cmd {
        Command::Gen(a) => {
            let params = a.family.params()?;
            let built = build_k(&params, a.seed)?;
            let text = to_canonical(&k_document(&built, a.lambda)?);
            match a.o {
                Some(path) => std::fs::write(path, text)?,
                None => emit(out, &text)?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let report = verify_family(&a.family.params()?, &options(&a, false))?;
            emit_report(out, &report, a.run.format)
        }
        Command::Sectors(a) => {
            let full = verify_family(&a.family.params()?, &options(&a, true))?;
            let checks: Vec<Check> = full
                .checks
                .into_iter()
                .filter(|c| c.id.starts_with("sector"))
                .collect();
            emit_report(
                out,
                &VerifyReport::new(checks, full.environment),
                a.run.format,
            )
        }
        Command::CheckR(a) => {
            let pr = GradingProfile::new(a.m, a.n)?;
            let spec = match a.kind {
                Kind::Rational => RMatrixSpec::rational(pr),
                Kind::Trigonometric => RMatrixSpec::new(a.kind, pr, a.eta)?,
            };
            let report = check_r(&spec, a.run.samples, a.run.seed, a.run.tol);
            emit_report(out, &report, a.run.format)
        }
        Command::Catalog(a) => run_catalog(a, out),
    }
}

fn options(a: &VerifyArgs, sectors: bool) -> VerifyOptions {
    VerifyOptions {
        samples: a.run.samples,
        seed: a.run.seed,
        tol: a.run.tol,
        eta: a.eta,
        sectors: sectors || a.sectors,
        reduce: !a.no_reduce,
    }
}

/// Tolerance on catalog coefficients.
pub const CATALOG_TOL: f64 = 1e-14;

fn run_catalog(a: CatalogArgs, out: &mut dyn Write) -> Result<i32, Error> {
    if a.list {
        let ids: Vec<Value> = catalog()
            .iter()
            .map(|it| Ok(json!({"id": it.id, "params": serde_json::to_value(&it.params)?})))
            .collect::<Result<_, Error>>()?;
        emit(out, &to_canonical(&Value::Array(ids)))?;
        return Ok(EXIT_OK);
    }
    let items = match &a.id {
        Some(id) => vec![catalog_item(id).ok_or_else(|| usage(format!("no catalog entry {id}")))?],
        None => catalog(),
    };
    if a.check || a.lambda.is_none() {
        if a.id.is_none() && !a.check {
            return Err(usage(
                "catalog needs --list, --check, or --id with --lambda",
            ));
        }
        let mut sampler = Sampler::new(a.seed);
        let ls: Vec<C64> = (0..3).map(|_| sampler.point()).collect();
        let mut checks = Vec::new();
        for it in &items {
            let mut worst = 0.0f64;
            for &l in &ls {
                worst = worst.max(it.mismatch(l)?);
            }
            checks.push(Check::new(
                format!("catalog.{}", it.id),
                None,
                ls.len(),
                worst,
                CATALOG_TOL,
            ));
        }
        let env = Environment {
            seed: a.seed,
            tol: CATALOG_TOL,
            params: json!({"entries": items.len()}),
        };
        return emit_report(out, &VerifyReport::new(checks, env), a.format);
    }
    let l = a.lambda.expect("checked above");
    let built = items[0].build()?;
    emit(out, &to_canonical(&k_document(&built, l)?))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1.3").unwrap(), C64::new(1.3, 0.0));
        assert_eq!(parse_complex("-2i").unwrap(), C64::new(0.0, -2.0));
        assert_eq!(parse_complex("0.5-1e-2i").unwrap(), C64::new(0.5, -0.01));
        assert_eq!(parse_complex("1e-3+i").unwrap(), C64::new(1e-3, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn named_and_positional_c() {
        let v = parse_c_list("c0=1.3").unwrap();
        assert_eq!(v, vec![Some(C64::new(1.3, 0.0))]);
        let v = parse_c_list("1,2i,c4=3").unwrap();
        assert_eq!(v[1], Some(C64::new(0.0, 2.0)));
        assert_eq!(v[3], None);
        assert_eq!(v[4], Some(C64::new(3.0, 0.0)));
    }
}
