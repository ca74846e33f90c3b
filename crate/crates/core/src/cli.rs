//! Batch command-line front end. Every kernel operation is reachable from
//! exactly one subcommand; results are canonical JSON on stdout.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::chars::{check_serre_compat, teichmuller, CharacterData, ConjugacyQuery};
use crate::error::Error;
use crate::formal_group::{
    eval_jet_log, formal_group_law, jet_log, valuation_bound_check, WeierstrassCurve,
};
use crate::gm::{psi_gm, psi_gm_on_series, GmPsiParams};
use crate::hensel::{eisenstein_root, hensel_lift_root};
use crate::jet::{default_delta_deg, JetSeries, PhiPoly};
use crate::padic::{ExtKind, PadicCtx, PadicNum};
use crate::qexp::{
    ap_point_count, bernoulli, curve_coefficients, eisenstein_is_one_mod_p, eisenstein_qexp,
    f_inverse_from, NewformData,
};
use crate::sharp::{assemble_sharp, SharpSpec};

pub const DEFAULT_PREC: u32 = 8;
pub const PREC_ENV: &str = "DELTA_PI_PREC";
pub const EXIT_OK: i32 = 0;
pub const EXIT_KERNEL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "deltapi", version, about = "p-adic delta-calculus toolkit")]
pub struct Cli {
    /// JSON run configuration supplying defaults for the flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the result to this file instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// delta_pi, C_pi and ring arithmetic on numbers, or delta of a series
    Delta(DeltaArgs),
    /// Frobenius on numbers, phi or P(phi) on a series, series arithmetic
    Phi(PhiArgs),
    /// The delta-character of G_m on a unit or a unit series
    PsiGm(PsiGmArgs),
    /// Formal group law and logarithm of a Weierstrass curve
    FormalLog(FormalLogArgs),
    /// Jet-logarithm L^n and its values on points of pi R
    JetLog(JetLogArgs),
    /// Check the valuation bound on pi^(|alpha|-1) / |alpha|
    ValBound(ValBoundArgs),
    /// Teichmüller lift of a unit mod p
    Teichmuller(TeichmullerArgs),
    /// Conjugate weights of kappa at p
    Conjugates(ConjugatesArgs),
    /// Compare a character of (Z/pZ)^x with Theta_p^(kappa-2)
    SerreCheck(SerreCheckArgs),
    /// Exact Bernoulli number B_k
    Bernoulli(BernoulliArgs),
    /// q-expansion of E_(p-1)
    Eisenstein(EisensteinArgs),
    /// sum a_n / n q^n for a newform
    FInverse(FInverseArgs),
    /// Traces of Frobenius of a curve by point counting
    Ap(ApArgs),
    /// Hensel lift of a simple root
    HenselRoot(HenselRootArgs),
    /// Assemble sum P_sigma(phi) (f^(-1))^sigma with its metadata
    Sharp(SharpArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Trivial,
    Ramified,
    Unramified,
}

impl From<KindArg> for ExtKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Trivial => ExtKind::Trivial,
            KindArg::Ramified => ExtKind::Ramified,
            KindArg::Unramified => ExtKind::Unramified,
        }
    }
}

/// The coefficient ring: Z_p by default, or the extension cut out by
/// `--min-poly` (coefficients c0,c1,... lowest degree first).
#[derive(Args, Debug, Clone, Default)]
pub struct CtxArgs {
    /// The prime p (at least 5)
    #[arg(long)]
    pub p: Option<u64>,
    /// Significant pi-adic digits (default from DELTA_PI_PREC, else 8)
    #[arg(long)]
    pub prec: Option<u32>,
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Defining polynomial as coefficients c0,c1,... lowest degree first
    #[arg(long, allow_hyphen_values = true)]
    pub min_poly: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct DeltaArgs {
    #[command(flatten)]
    pub ctx: CtxArgs,
    /// Element as an integer, a rational a/b, or coefficients [c0,c1,...] in t
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "series",
        conflicts_with = "series"
    )]
    pub x: Option<String>,
    /// Second operand: adds C_pi(x, y), x + y and x y to the output
    #[arg(long, allow_hyphen_values = true, requires = "x")]
    pub y: Option<String>,
    /// Series JSON (inline or a file path)
    #[arg(long)]
    pub series: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct PhiArgs {
    #[command(flatten)]
    pub ctx: CtxArgs,
    /// Element as an integer, a rational a/b, or coefficients [c0,c1,...] in t
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "series",
        conflicts_with = "series"
    )]
    pub x: Option<String>,
    /// Series JSON (inline or a file path)
    #[arg(long)]
    pub series: Option<String>,
    /// Apply sum a_i phi^i instead of phi; coefficients a0,a1,... lowest first
    #[arg(long, allow_hyphen_values = true)]
    pub phi_poly: Option<String>,
    /// Second series: adds the sum, product and agreement exponent
    #[arg(long, requires = "series")]
    pub with: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct PsiGmArgs {
    #[command(flatten)]
    pub ctx: CtxArgs,
    /// Element as an integer, a rational a/b, or coefficients [c0,c1,...] in t
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "series",
        conflicts_with = "series"
    )]
    pub x: Option<String>,
    /// Series JSON (inline or a file path)
    #[arg(long)]
    pub series: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct FormalLogArgs {
    #[command(flatten)]
    pub ctx: CtxArgs,
    /// Curve as JSON {a1,a2,a3,a4,a6}, a1,...,a6 list, or the label 11a1
    /// Curve as JSON {a1,a2,a3,a4,a6}, a1,...,a6 list, or the label 11a1
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    #[arg(long, default_value_t = 12)]
    pub t_prec: usize,
    /// Evaluate the logarithm at this point (needs --p)
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct JetLogArgs {
    #[command(flatten)]
    pub ctx: CtxArgs,
    /// Curve as JSON {a1,a2,a3,a4,a6}, a1,...,a6 list, or the label 11a1
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub t_prec: usize,
    /// Evaluate L^n at this point of pi R
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ValBoundArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub e: u32,
    #[arg(long, default_value_t = 625)]
    pub alpha_max: u64,
}

#[derive(Args, Debug, Clone)]
pub struct TeichmullerArgs {
    #[command(flatten)]
    pub ctx: CtxArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
}

#[derive(Args, Debug, Clone)]
pub struct ConjugatesArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: i64,
}

#[derive(Args, Debug, Clone)]
pub struct SerreCheckArgs {
    #[command(flatten)]
    pub ctx: CtxArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: i64,
    /// Character JSON {modulus, order, values} (inline or a file path)
    #[arg(
        long,
        required_unless_present = "theta_power",
        conflicts_with = "theta_power"
    )]
    pub character: Option<String>,
    /// Use Theta_p^k as the character
    #[arg(long, allow_hyphen_values = true)]
    pub theta_power: Option<i64>,
    /// Split a character mod N p and test its p-part
    #[arg(long)]
    pub level: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct BernoulliArgs {
    #[arg(long)]
    pub k: usize,
}

#[derive(Args, Debug, Clone)]
pub struct EisensteinArgs {
    #[command(flatten)]
    pub ctx: CtxArgs,
    #[arg(long, default_value_t = 20)]
    pub qprec: usize,
}

/// A newform from a JSON file, or from a curve by point counting.
#[derive(Args, Debug, Clone)]
pub struct NewformArgs {
    /// Newform JSON file with level, weight, p and coefficients a_1, a_2, ...
    #[arg(long, conflicts_with = "curve")]
    pub newform: Option<String>,
    /// Compute a_n of this curve by point counting instead
    #[arg(long, allow_hyphen_values = true, requires = "level")]
    pub curve: Option<String>,
    /// Conductor of the curve
    #[arg(long)]
    pub level: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct FInverseArgs {
    #[command(flatten)]
    pub ctx: CtxArgs,
    #[command(flatten)]
    pub nf: NewformArgs,
    #[arg(long, default_value_t = 20)]
    pub qprec: usize,
    #[arg(long)]
    pub delta_deg: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct ApArgs {
    /// Curve as JSON {a1,a2,a3,a4,a6}, a1,...,a6 list, or the label 11a1
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    #[arg(long, required_unless_present = "nmax", conflicts_with = "nmax")]
    pub ell: Option<u64>,
    /// List a_1, ..., a_nmax instead
    #[arg(long)]
    pub nmax: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct HenselRootArgs {
    #[command(flatten)]
    pub ctx: CtxArgs,
    /// Polynomial coefficients c0,c1,... lowest degree first
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "eisenstein",
        conflicts_with = "eisenstein",
        requires = "tau0"
    )]
    pub poly: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau0: Option<String>,
    /// Lift the (p-1)-st root of E_(p-1) with residue 1 instead
    #[arg(long)]
    pub eisenstein: bool,
    #[arg(long, default_value_t = 20)]
    pub qprec: usize,
}

#[derive(Args, Debug, Clone)]
pub struct SharpArgs {
    #[command(flatten)]
    pub ctx: CtxArgs,
    #[command(flatten)]
    pub nf: NewformArgs,
    /// `hecke` (phi^2 - a_p phi + p, divided by p), `hecke-raw`, or
    /// coefficients a0,a1,a2 lowest degree first
    #[arg(long, allow_hyphen_values = true, default_value = "hecke")]
    pub phi_poly: String,
    #[arg(long, default_value_t = 50)]
    pub qprec: usize,
    #[arg(long, default_value_t = 2)]
    pub delta_deg: u32,
    /// Jet order of the target space (1 or 2; default: degree of P)
    #[arg(long)]
    pub order: Option<usize>,
    /// The weight kappa, enabling the conjugate-weight metadata
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<i64>,
    /// A realized conjugate weight; must lie in the conjugate set
    #[arg(long, allow_hyphen_values = true, requires = "kappa")]
    pub kappa_prime: Option<i64>,
}

/// Defaults read from `--config`. Flags on the command line win; the
/// configuration wins over DELTA_PI_PREC.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub ctx: CtxConfig,
    pub q_prec: Option<usize>,
    pub delta_deg: Option<u32>,
    pub output: Option<PathBuf>,
    /// Subcommand flags by long name, for example {"kappa": 3}.
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CtxConfig {
    pub p: Option<u64>,
    pub min_poly: Option<Vec<i64>>,
    pub kind: Option<ExtKind>,
    #[serde(alias = "prec_M")]
    pub prec: Option<u32>,
}

impl RunConfig {
    /// The configuration as (long flag, value) pairs; `None` marks a
    /// switch without a value.
    fn flags(&self) -> Vec<(String, Option<String>)> {
        let mut out: Vec<(String, Option<String>)> = Vec::new();
        let mut push = |k: &str, v: String| out.push((k.to_string(), Some(v)));
        if let Some(p) = self.ctx.p {
            push("p", p.to_string());
        }
        if let Some(m) = &self.ctx.min_poly {
            push("min-poly", join(m));
        }
        if let Some(k) = self.ctx.kind {
            push(
                "kind",
                serde_json::to_value(k)
                    .unwrap()
                    .as_str()
                    .unwrap()
                    .to_string(),
            );
        }
        if let Some(prec) = self.ctx.prec {
            push("prec", prec.to_string());
        }
        if let Some(q) = self.q_prec {
            push("qprec", q.to_string());
        }
        if let Some(d) = self.delta_deg {
            push("delta-deg", d.to_string());
        }
        if let Some(o) = &self.output {
            push("output", o.display().to_string());
        }
        for (k, v) in &self.params {
            let key = k.replace('_', "-");
            match v {
                Value::Bool(true) => out.push((key, None)),
                Value::Bool(false) | Value::Null => {}
                Value::String(s) => out.push((key, Some(s.clone()))),
                Value::Array(a) => {
                    let items: Vec<String> = a.iter().map(scalar_text).collect();
                    out.push((key, Some(items.join(","))));
                }
                other => out.push((key, Some(scalar_text(other)))),
            }
        }
        out
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Where each module operation is exposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpEntry {
    pub module: &'static str,
    pub op: &'static str,
    pub subcommand: &'static str,
}

const fn op(module: &'static str, op: &'static str, subcommand: &'static str) -> OpEntry {
    OpEntry {
        module,
        op,
        subcommand,
    }
}

pub const OP_REGISTRY: &[OpEntry] = &[
    op("padic_core", "frobenius", "phi"),
    op("padic_core", "delta_pi", "delta"),
    op("padic_core", "c_pi", "delta"),
    op("padic_core", "arith", "delta"),
    op("jet_series", "phi_series", "phi"),
    op("jet_series", "delta_series", "delta"),
    op("jet_series", "apply_phi_poly", "phi"),
    op("jet_series", "series_arith", "phi"),
    op("gm_character", "psi_gm", "psi-gm"),
    op("gm_character", "psi_gm_on_series", "psi-gm"),
    op("formal_group", "formal_group_law", "formal-log"),
    op("formal_group", "jet_log", "jet-log"),
    op("formal_group", "eval_jet_log", "jet-log"),
    op("formal_group", "valuation_bound_check", "val-bound"),
    op("char_arith", "teichmuller", "teichmuller"),
    op("char_arith", "conjugates", "conjugates"),
    op("char_arith", "check_serre_compat", "serre-check"),
    op("qexp_tools", "bernoulli", "bernoulli"),
    op("qexp_tools", "eisenstein_qexp", "eisenstein"),
    op("qexp_tools", "f_inverse", "f-inverse"),
    op("qexp_tools", "ap_point_count", "ap"),
    op("qexp_tools", "hensel_lift_root", "hensel-root"),
    op("sharp_builder", "assemble_sharp", "sharp"),
    op("sharp_builder", "integrality_exponent", "sharp"),
    op("sharp_builder", "nonzero_check", "sharp"),
];

/// Names of all subcommands, in declaration order.
pub fn subcommand_names() -> Vec<String> {
    Cli::command()
        .get_subcommands()
        .map(|c| c.get_name().to_string())
        .collect()
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Kernel(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Kernel(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn kernel_error(e: &Error) -> Self {
        let body =
            json!({"error": {"code": e.code(), "module": e.module(), "message": e.to_string()}});
        Outcome {
            code: EXIT_KERNEL,
            stdout: render(&body),
            stderr: String::new(),
        }
    }

    fn usage(msg: String) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: msg,
        }
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Run one command line (program name first), reading DELTA_PI_PREC from
/// the environment.
pub fn dispatch<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let env_prec = std::env::var(PREC_ENV).ok();
    dispatch_with_env(args, env_prec.as_deref())
}

/// [`dispatch`] with an explicit value for DELTA_PI_PREC.
pub fn dispatch_with_env<I, T>(args: I, env_prec: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let argv = match apply_config(argv) {
        Ok(a) => a,
        Err(CliError::Usage(m)) => return Outcome::usage(m),
        Err(CliError::Kernel(e)) => return Outcome::kernel_error(&e),
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome::usage(text),
            };
        }
    };
    let env_prec = match env_prec.map(str::parse::<u32>) {
        None => None,
        Some(Ok(v)) => Some(v),
        Some(Err(_)) => return Outcome::usage(format!("{PREC_ENV} must be a positive integer")),
    };
    match run(&cli.command, env_prec) {
        Ok(v) => {
            let text = render(&v);
            match &cli.output {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => Outcome {
                        code: EXIT_OK,
                        stdout: String::new(),
                        stderr: String::new(),
                    },
                    Err(e) => Outcome::kernel_error(&Error::Io(format!("{}: {e}", path.display()))),
                },
                None => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
            }
        }
        Err(CliError::Usage(m)) => Outcome::usage(m),
        Err(CliError::Kernel(e)) => Outcome::kernel_error(&e),
    }
}

/// Splice the flags of a `--config` file into argv after the subcommand,
/// skipping those already given.
fn apply_config(mut argv: Vec<String>) -> CliResult<Vec<String>> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            path = argv.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    let config: RunConfig =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    let names = subcommand_names();
    let Some(pos) = argv.iter().position(|a| names.contains(a)) else {
        return Ok(argv);
    };
    let cmd = Cli::command();
    let sub = cmd.find_subcommand(&argv[pos]).expect("known subcommand");
    let accepted: Vec<&str> = sub.get_arguments().filter_map(|a| a.get_long()).collect();
    let given = |key: &str| {
        argv.iter()
            .any(|a| a == &format!("--{key}") || a.starts_with(&format!("--{key}=")))
    };
    let mut extra = Vec::new();
    for (key, value) in config.flags() {
        if key != "output" && !accepted.contains(&key.as_str()) {
            // context and precision defaults apply only where they make sense
            if config.params.contains_key(&key)
                || config.params.contains_key(&key.replace('-', "_"))
            {
                return Err(CliError::Usage(format!(
                    "config parameter `{key}` is not accepted by `{}`",
                    argv[pos]
                )));
            }
            continue;
        }
        if given(&key) {
            continue;
        }
        extra.push(format!("--{key}"));
        if let Some(v) = value {
            extra.push(v);
        }
    }
    argv.splice(pos + 1..pos + 1, extra);
    Ok(argv)
}

fn num_json(x: &PadicNum) -> Value {
    Value::String(x.to_string())
}

fn opt_num_json(x: Option<PadicNum>) -> Value {
    x.map_or(Value::Null, |x| num_json(&x))
}

/// JSON given inline or as a file path.
fn read_json(arg: &str) -> CliResult<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Io(format!("{arg}: {e}")))?
    };
    Ok(serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))?)
}

fn parse_i64_list(s: &str, what: &str) -> CliResult<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("--{what} expects comma-separated integers")))
}

impl CtxArgs {
    fn build(&self, env_prec: Option<u32>, fallback_p: Option<u64>) -> CliResult<Arc<PadicCtx>> {
        let p = self
            .p
            .or(fallback_p)
            .ok_or_else(|| CliError::Usage("--p is required".into()))?;
        let prec = self.prec.or(env_prec).unwrap_or(DEFAULT_PREC);
        let ctx = match (&self.min_poly, self.kind) {
            (None, None | Some(KindArg::Trivial)) => PadicCtx::zp(p, prec)?,
            (Some(_), None) => {
                return Err(CliError::Usage("--min-poly needs --kind".into()));
            }
            (None, Some(_)) => {
                return Err(CliError::Usage("--kind needs --min-poly".into()));
            }
            (Some(m), Some(kind)) => {
                PadicCtx::new(p, parse_i64_list(m, "min-poly")?, kind.into(), prec)?
            }
        };
        Ok(ctx)
    }
}

fn curve_arg(arg: &Option<String>) -> CliResult<WeierstrassCurve> {
    let Some(s) = arg else {
        return Ok(WeierstrassCurve::curve_11a1());
    };
    if s == "11a1" {
        return Ok(WeierstrassCurve::curve_11a1());
    }
    let looks_like_list =
        s.split(',').count() == 5 && s.split(',').all(|t| t.trim().parse::<i64>().is_ok());
    if looks_like_list {
        let a = parse_i64_list(s, "curve")?;
        return Ok(WeierstrassCurve::new([a[0], a[1], a[2], a[3], a[4]]));
    }
    let v = read_json(s)?;
    Ok(serde_json::from_value(v).map_err(|e| Error::InvalidCurve(e.to_string()))?)
}

fn newform_arg(args: &NewformArgs, p: Option<u64>, nmax: usize) -> CliResult<NewformData> {
    match (&args.newform, args.level) {
        (Some(path), _) => {
            let v = read_json(path)?;
            let nf: NewformData =
                serde_json::from_value(v).map_err(|e| Error::InvalidNewform(e.to_string()))?;
            nf.validate()?;
            Ok(nf)
        }
        (None, Some(level)) => {
            let p = p.ok_or_else(|| CliError::Usage("--p is required with --curve".into()))?;
            Ok(NewformData::from_curve(
                &curve_arg(&args.curve)?,
                level,
                p,
                nmax,
            )?)
        }
        (None, None) => Err(CliError::Usage(
            "give --newform FILE or --curve with --level".into(),
        )),
    }
}

fn coeff_list(ctx: &Arc<PadicCtx>, s: &str) -> CliResult<Vec<PadicNum>> {
    Ok(s.split(',')
        .map(|t| PadicNum::parse(ctx, t.trim()))
        .collect::<Result<_, _>>()?)
}

fn series_arg(ctx: &Arc<PadicCtx>, s: &str) -> CliResult<JetSeries> {
    Ok(JetSeries::from_json(ctx, &read_json(s)?)?)
}

fn run(cmd: &Command, env_prec: Option<u32>) -> CliResult<Value> {
    match cmd {
        Command::Delta(a) => {
            let ctx = a.ctx.build(env_prec, None)?;
            if let Some(s) = &a.series {
                let s = series_arg(&ctx, s)?;
                return Ok(json!({"ctx": ctx.descriptor(), "delta": s.delta()?.to_json()}));
            }
            let x = PadicNum::parse(&ctx, a.x.as_deref().expect("clap requires x"))?;
            let mut out = json!({
                "ctx": ctx.descriptor(),
                "x": num_json(&x),
                "valuation": x.valuation(),
                "delta": num_json(&x.delta_pi()?),
                "inverse": opt_num_json(x.inv().ok()),
            });
            if let Some(y) = &a.y {
                let y = PadicNum::parse(&ctx, y)?;
                out["y"] = num_json(&y);
                out["c_pi"] = num_json(&x.c_pi(&y)?);
                out["sum"] = num_json(&x.add(&y));
                out["product"] = num_json(&x.mul(&y));
            }
            Ok(out)
        }
        Command::Phi(a) => {
            let ctx = a.ctx.build(env_prec, None)?;
            let poly = a
                .phi_poly
                .as_deref()
                .map(|s| coeff_list(&ctx, s))
                .transpose()?
                .map(PhiPoly::new);
            if let Some(s) = &a.series {
                let s = series_arg(&ctx, s)?;
                let image = match &poly {
                    Some(p) => p.apply(&s)?,
                    None => s.phi()?,
                };
                let mut out = json!({"ctx": ctx.descriptor(), "phi": image.to_json()});
                if let Some(t) = &a.with {
                    let t = series_arg(&ctx, t)?;
                    out["sum"] = s.add(&t)?.to_json();
                    out["product"] = s.mul(&t)?.to_json();
                    out["agreement"] = json!(s.compare_mod_pi_power(&t)?);
                }
                return Ok(out);
            }
            let x = PadicNum::parse(&ctx, a.x.as_deref().expect("clap requires x"))?;
            let image = match &poly {
                Some(p) => p.apply_num(&x),
                None => x.frobenius(),
            };
            Ok(json!({"ctx": ctx.descriptor(), "x": num_json(&x), "phi": num_json(&image)}))
        }
        Command::PsiGm(a) => {
            let ctx = a.ctx.build(env_prec, None)?;
            let params = GmPsiParams::new(&ctx);
            let psi = match (&a.x, &a.series) {
                (Some(x), _) => num_json(&psi_gm(&PadicNum::parse(&ctx, x)?, &params)?),
                (None, Some(s)) => psi_gm_on_series(&series_arg(&ctx, s)?, &params)?.to_json(),
                (None, None) => unreachable!("clap requires x or series"),
            };
            Ok(json!({
                "ctx": ctx.descriptor(),
                "m": params.m(),
                "series_cutoff": params.series_cutoff(),
                "psi": psi,
            }))
        }
        Command::FormalLog(a) => {
            let curve = curve_arg(&a.curve)?;
            let fg = formal_group_law(&curve, a.t_prec)?;
            let law = fg.law();
            let mut terms = Vec::new();
            for i in 0..=law.degree() {
                for j in 0..=law.degree() - i {
                    let c = law.get(i, j);
                    if c != 0.into() {
                        terms.push(json!({"i": i, "j": j, "c": c.to_string()}));
                    }
                }
            }
            let log: Vec<String> = fg
                .log_coeffs()
                .iter()
                .skip(1)
                .map(|c| c.to_string())
                .collect();
            let mut out = json!({
                "curve": curve,
                "t_prec": fg.t_prec(),
                "law": terms,
                "log_coeffs": log,
            });
            if a.ctx.p.is_some() || a.x.is_some() {
                let ctx = a.ctx.build(env_prec, None)?;
                out["ctx"] = json!(ctx.descriptor());
                out["integrality_failures"] = json!(fg.integrality_failures(ctx.p()));
                if let Some(x) = &a.x {
                    out["x"] = num_json(&PadicNum::parse(&ctx, x)?);
                    out["log"] = num_json(&fg.eval_log(&PadicNum::parse(&ctx, x)?)?);
                }
            }
            Ok(out)
        }
        Command::JetLog(a) => {
            let ctx = a.ctx.build(env_prec, None)?;
            let fg = formal_group_law(&curve_arg(&a.curve)?, a.t_prec)?;
            let jl = jet_log(a.n, &fg, &ctx)?;
            let mut out = json!({
                "ctx": ctx.descriptor(),
                "order": jl.order,
                "nu": jl.nu,
                "series": jl.series.to_json(),
            });
            if let Some(x) = &a.x {
                let x = PadicNum::parse(&ctx, x)?;
                out["x"] = num_json(&x);
                out["value"] = num_json(&eval_jet_log(a.n, &fg, &x)?);
            }
            Ok(out)
        }
        Command::ValBound(a) => {
            if a.e == 0 {
                return Err(CliError::Usage("--e must be positive".into()));
            }
            Ok(json!(valuation_bound_check(a.alpha_max, a.p, a.e)))
        }
        Command::Teichmuller(a) => {
            let ctx = a.ctx.build(env_prec, None)?;
            let t = teichmuller(a.d, &ctx)?;
            Ok(json!({"ctx": ctx.descriptor(), "d": a.d, "p": ctx.p(), "value": num_json(&t)}))
        }
        Command::Conjugates(a) => {
            let q = ConjugacyQuery::new(a.p, a.kappa)?;
            Ok(json!({"kappa": a.kappa, "p": a.p, "conjugates": q.conjugates()?}))
        }
        Command::SerreCheck(a) => {
            let ctx = a.ctx.build(env_prec, None)?;
            let eps = match (&a.character, a.theta_power) {
                (Some(c), _) => serde_json::from_value::<CharacterData>(read_json(c)?)
                    .map_err(|e| Error::InvalidCharacter(e.to_string()))?,
                (None, Some(k)) => CharacterData::teichmuller_power(ctx.p(), k),
                (None, None) => unreachable!("clap requires a character"),
            };
            let eps_p = match a.level {
                Some(n) => eps.split(n, ctx.p())?.1,
                None => eps,
            };
            let ok = check_serre_compat(&eps_p, a.kappa, &ctx)?;
            Ok(json!({"kappa": a.kappa, "p": ctx.p(), "compatible": ok}))
        }
        Command::Bernoulli(a) => Ok(json!({"k": a.k, "value": bernoulli(a.k).to_string()})),
        Command::Eisenstein(a) => {
            let ctx = a.ctx.build(env_prec, None)?;
            let e = eisenstein_qexp(ctx.p(), a.qprec, &ctx)?;
            Ok(json!({
                "ctx": ctx.descriptor(),
                "weight": ctx.p() - 1,
                "one_mod_p": eisenstein_is_one_mod_p(ctx.p(), a.qprec)?,
                "series": e.to_json(),
            }))
        }
        Command::FInverse(a) => {
            let nf = newform_arg(&a.nf, a.ctx.p, a.qprec)?;
            let ctx = a.ctx.build(env_prec, Some(nf.p))?;
            let d = a.delta_deg.unwrap_or(default_delta_deg(0));
            let s = f_inverse_from(&nf.an, a.qprec, d, &ctx)?;
            Ok(json!({"ctx": ctx.descriptor(), "series": s.to_json()}))
        }
        Command::Ap(a) => {
            let curve = curve_arg(&a.curve)?;
            match (a.ell, a.nmax) {
                (Some(ell), _) => Ok(json!({"ell": ell, "a": ap_point_count(&curve, ell)?})),
                (None, Some(n)) => Ok(json!({"an": curve_coefficients(&curve, n)?})),
                (None, None) => unreachable!("clap requires ell or nmax"),
            }
        }
        Command::HenselRoot(a) => {
            let ctx = a.ctx.build(env_prec, None)?;
            if a.eisenstein {
                let z = eisenstein_root(&ctx, a.qprec)?;
                return Ok(json!({"ctx": ctx.descriptor(), "series": z.to_json()}));
            }
            let f = coeff_list(&ctx, a.poly.as_deref().expect("clap requires poly"))?;
            let tau0 = PadicNum::parse(&ctx, a.tau0.as_deref().expect("clap requires tau0"))?;
            let root = hensel_lift_root(&f, &tau0)?;
            Ok(json!({"ctx": ctx.descriptor(), "root": num_json(&root)}))
        }
        Command::Sharp(a) => {
            let mut nf = newform_arg(&a.nf, a.ctx.p, a.qprec)?;
            if a.kappa.is_some() {
                nf.kappa = a.kappa;
            }
            let ctx = a.ctx.build(env_prec, Some(nf.p))?;
            let poly = sharp_poly(&a.phi_poly, &nf, &ctx)?;
            let deg = poly.degree().unwrap_or(0);
            let order = a.order.unwrap_or(deg.max(1));
            let mut polys = vec![poly];
            polys.extend(nf.conjugates.iter().map(|_| PhiPoly::zero()));
            let spec = SharpSpec::new(nf, polys, a.kappa_prime, order)?;
            let out = assemble_sharp(&spec, a.qprec, a.delta_deg, &ctx)?;
            Ok(json!({
                "ctx": ctx.descriptor(),
                "phi_poly": spec.polys()[0].coeffs().iter().map(num_json).collect::<Vec<_>>(),
                "meta": out.meta,
                "series": out.series.to_json(),
            }))
        }
    }
}

fn sharp_poly(spec: &str, nf: &NewformData, ctx: &Arc<PadicCtx>) -> CliResult<PhiPoly> {
    let a_p = || -> CliResult<PadicNum> {
        let i = nf.p as usize - 1;
        let c = nf.an.get(i).ok_or(Error::InsufficientCoefficients {
            needed: i + 1,
            available: nf.an.len(),
        })?;
        Ok(c.to_padic(ctx)?)
    };
    match spec {
        "hecke" => Ok(PhiPoly::hecke_normalized(ctx, &a_p()?)),
        "hecke-raw" => Ok(PhiPoly::hecke(ctx, &a_p()?)),
        list => Ok(PhiPoly::new(coeff_list(ctx, list)?)),
    }
}
