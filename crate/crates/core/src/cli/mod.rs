//! Command-line frontend for the `lpoly` binary.

pub mod cache;
pub mod session;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::char_sums::{PolySpec, SumEngine, DEFAULT_MAX_ENUM};
use crate::cyclotomic::CycloJson;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::local::LocalContext;
use crate::polygon::{hodge, rat_str, NewtonPolygon};
use crate::strat::{
    gnp_power, gnp_twisted, gnp_twisted_with_m, hs_power, hs_twisted, OrbitDecomposition, TwistCombinatorics,
    DEFAULT_SIGMA_CAP,
};

use cache::Cache;
use session::{JobSpec, Selection, Session};
use verify::{Theorem, VerificationReport};

const ENCODING_HELP: &str = "Field elements of F_q, q = p^m, are written as integers \
sum_i c_i p^i with 0 <= c_i < p, where c_i is the coefficient of x^i in the \
representation modulo the lexicographically smallest monic irreducible of degree m. \
A polynomial x^e + a_{e-1} x^{e-1} + ... + a_1 x is given by --coeffs a_1,...,a_{e-1}.";

#[derive(Parser, Debug)]
#[command(name = "lpoly", version, about = "L-functions and Newton polygons of twisted exponential sums")]
#[command(after_help = ENCODING_HELP)]
pub struct Cli {
    /// Emit JSON (default for everything except sweep)
    #[arg(long, global = true)]
    pub json: bool,
    /// Emit CSV where a tabular form exists
    #[arg(long, global = true, conflicts_with = "json")]
    pub csv: bool,
    /// Result cache directory
    #[arg(long, global = true, env = "LPOLY_CACHE")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Working p-adic precision for valuations (default m*deg + 4)
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Largest field that may be enumerated
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ENUM)]
    pub max_enum: u64,
    /// Print the combinatorial tables of the run to stderr as JSON
    #[arg(long, global = true)]
    pub dump_tables: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lower bounds and predicted generic polygons
    #[command(subcommand)]
    Polygon(PolygonCmd),
    /// Exact L-function of one polynomial and its q-adic Newton polygon
    Lfunction(LfunctionArgs),
    /// Check a stratification statement over a family of polynomials
    Verify(VerifyArgs),
    /// One row per monic polynomial of degree e: slopes, Hasse and generic flags
    Sweep(SweepArgs),
    /// Gauss sum of chi^kappa over F_q and its q-adic valuation
    Gauss(GaussArgs),
    /// Orbits of multiplication by t on Z/dZ
    Orbits {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        t: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum PolygonCmd {
    HsTwisted {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        e: u64,
        /// residue of p mod d
        #[arg(long)]
        r: u64,
        #[arg(long)]
        kappa: u64,
    },
    GnpTwisted {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        e: u64,
        #[arg(long)]
        kappa: u64,
        /// build the sequences over s < m instead of one orbit period
        #[arg(long)]
        m: Option<u32>,
    },
    HsPower {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        e: u64,
        #[arg(long)]
        r: u64,
    },
    GnpPower {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        e: u64,
    },
    Hodge {
        #[arg(long)]
        de: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct JobArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long)]
    pub d: u64,
    #[arg(long)]
    pub e: u64,
    #[arg(long, default_value_t = 0)]
    pub kappa: u64,
}

impl JobArgs {
    fn job(&self) -> JobSpec {
        JobSpec { p: self.p, m: self.m, d: self.d, e: self.e, kappa: self.kappa }
    }
}

#[derive(Args, Debug)]
pub struct LfunctionArgs {
    #[command(flatten)]
    pub job: JobArgs,
    /// a_1,...,a_{e-1} as field-element encodings
    #[arg(long, value_delimiter = ',')]
    pub coeffs: Vec<u64>,
    /// L(P(x^d)) instead of L(P, chi^kappa)
    #[arg(long)]
    pub power: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub theorem: Theorem,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub e: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub kappa: u64,
    /// every monic polynomial of degree e (the default)
    #[arg(long, conflicts_with = "random")]
    pub all: bool,
    /// N random polynomials
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// number of random parameter draws (lemma22)
    #[arg(long, default_value_t = 200)]
    pub draws: usize,
    /// write the full report here
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// run the stratification checks with p < 2de
    #[arg(long)]
    pub allow_small: bool,
    /// field sizes for stickelberger
    #[arg(long, value_delimiter = ',')]
    pub fields: Vec<u64>,
    /// largest d for stickelberger
    #[arg(long, default_value_t = 12)]
    pub max_d: u64,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub job: JobArgs,
}

#[derive(Args, Debug)]
pub struct GaussArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long)]
    pub d: u64,
    #[arg(long)]
    pub kappa: u64,
}

fn default_cache_dir() -> Option<PathBuf> {
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("lpoly"))
}

/// Writes `text`; a closed reader (`| head`) is not an error.
fn put(out: &mut dyn Write, text: &str) -> Result<()> {
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::InternalInconsistency(e.to_string())),
        _ => Ok(()),
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    let s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    put(out, &(s + "\n"))
}

fn emit_polygon(cli: &Cli, out: &mut dyn Write, np: &NewtonPolygon) -> Result<()> {
    if cli.csv {
        put(out, &np.to_csv())
    } else {
        emit(out, &serde_json::to_value(np.to_json()).expect("polygon serializes"))
    }
}

fn dump(cli: &Cli, v: Value) {
    if cli.dump_tables {
        eprintln!("{}", serde_json::to_string(&v).expect("tables serialize"));
    }
}

fn run_polygon(cli: &Cli, cmd: &PolygonCmd, out: &mut dyn Write) -> Result<i32> {
    let np = match *cmd {
        PolygonCmd::HsTwisted { d, e, r, kappa } => hs_twisted(d, e, r, kappa)?,
        PolygonCmd::GnpTwisted { p, d, e, kappa, m } => {
            let t = match m {
                Some(m) => TwistCombinatorics::with_m(p, d, e, kappa, m)?,
                None => TwistCombinatorics::new(p, d, e, kappa)?,
            };
            dump(cli, t.to_json());
            match m {
                Some(m) => gnp_twisted_with_m(p, d, e, kappa, m)?,
                None => gnp_twisted(p, d, e, kappa)?,
            }
        }
        PolygonCmd::HsPower { d, e, r } => hs_power(d, e, r)?,
        PolygonCmd::GnpPower { p, d, e } => gnp_power(p, d, e)?,
        PolygonCmd::Hodge { de } => hodge(de)?,
    };
    emit_polygon(cli, out, &np)?;
    Ok(0)
}

fn run_lfunction(cli: &Cli, s: &Session, a: &LfunctionArgs, out: &mut dyn Write) -> Result<i32> {
    let job = a.job.job();
    job.validate()?;
    if !a.power && job.kappa == 0 {
        return Err(Error::BadParameters("twisted L-function needs --kappa >= 1 (or pass --power)".into()));
    }
    let base = job.base()?;
    let poly = PolySpec::from_encodings(&base, &a.coeffs)?;
    if poly.degree() != job.e {
        return Err(Error::BadParameters(format!("--coeffs gives degree {}, --e is {}", poly.degree(), job.e)));
    }
    let polys = [poly];
    let (l, ctx) = if a.power {
        (s.power_ls(&job, &polys)?.remove(0), s.power_context(&job)?)
    } else {
        (s.twisted_ls(&job, &polys)?.remove(0), s.twisted_context(&job)?)
    };
    let np = ctx.q_newton_polygon(&l, job.m)?;
    if cli.csv {
        emit_polygon(cli, out, &np)?;
        return Ok(0);
    }
    let v = json!({
        "p": job.p, "m": job.m, "d": job.d, "e": job.e, "kappa": job.kappa,
        "kind": if a.power { "power" } else { "twisted" },
        "poly": polys[0].encodings(),
        "degree": l.degree(),
        "coefficients": l.to_json(),
        "local_factor": ctx.factor(),
        "newton_polygon": np.to_json(),
    });
    emit(out, &v)?;
    Ok(0)
}

fn selection(a: &VerifyArgs) -> Selection {
    match a.random {
        Some(count) => Selection::Random { count, seed: a.seed },
        None => Selection::All,
    }
}

fn job_from(a: &VerifyArgs, kappa: u64) -> Result<JobSpec> {
    let need = |v: Option<u64>, name: &str| v.ok_or_else(|| Error::BadParameters(format!("--{name} is required")));
    Ok(JobSpec { p: need(a.p, "p")?, m: a.m, d: need(a.d, "d")?, e: need(a.e, "e")?, kappa })
}

fn run_verify(cli: &Cli, s: &Session, a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let sel = selection(a);
    let cap = DEFAULT_SIGMA_CAP;
    let report: VerificationReport = match a.theorem {
        Theorem::Prop31 => verify::prop31(s, &job_from(a, a.kappa)?, &sel)?,
        Theorem::Thm31 => {
            let job = job_from(a, a.kappa)?;
            dump(cli, TwistCombinatorics::new(job.p, job.d, job.e, job.kappa)?.to_json());
            verify::thm31(s, &job, &sel, a.allow_small, cap)?
        }
        Theorem::Prop41 => verify::prop41(s, &job_from(a, 0)?, &sel)?,
        Theorem::Prop42 => verify::prop42(s, &job_from(a, 0)?, &sel)?,
        Theorem::Thm41 => verify::thm41(s, &job_from(a, 0)?, &sel, a.allow_small, cap)?,
        Theorem::Stickelberger => {
            let fields = if a.fields.is_empty() { verify::STICKELBERGER_FIELDS.to_vec() } else { a.fields.clone() };
            verify::stickelberger(s, &fields, a.max_d)?
        }
        Theorem::Lemma22 => verify::lemma22(a.draws, a.seed, 97, 6, cap)?,
    };
    let full = serde_json::to_value(&report).expect("report serializes");
    if let Some(path) = &a.report {
        let text = serde_json::to_string_pretty(&full).expect("report serializes");
        std::fs::write(path, text + "\n")
            .map_err(|e| Error::BadParameters(format!("cannot write {}: {e}", path.display())))?;
    }
    let summary = json!({
        "theorem": report.theorem,
        "parameters": report.parameters,
        "informational": report.informational,
        "summary": report.summary,
    });
    if cli.json {
        emit(out, &full)?;
    } else {
        emit(out, &summary)?;
    }
    if report.informational && !report.all_passed() {
        eprintln!("note: outside the theorem's hypotheses (d < 3 or p < 2de); failures are informational");
        return Ok(0);
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn run_sweep(cli: &Cli, s: &Session, a: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let job = a.job.job();
    if job.kappa != 0 {
        dump(cli, TwistCombinatorics::new(job.p, job.d, job.e, job.kappa)?.to_json());
    }
    let rows = verify::sweep(s, &job, DEFAULT_SIGMA_CAP)?;
    if cli.json {
        emit(out, &serde_json::to_value(&rows).expect("rows serialize"))?;
    } else {
        put(out, &verify::sweep_csv(&rows))?;
    }
    Ok(0)
}

fn run_gauss(s: &Session, a: &GaussArgs, out: &mut dyn Write) -> Result<i32> {
    let field = FieldSpec::new(a.p, a.m as usize)?;
    let q = field.order();
    if a.d < 2 || (q - 1) % a.d != 0 || a.kappa == 0 || a.kappa >= a.d {
        return Err(Error::BadParameters(format!("need d | q - 1 = {} and 1 <= kappa < d", q - 1)));
    }
    let chi = crate::char_sums::MultiplicativeCharacter::new(&field, a.d)?;
    let g = s.engine.gauss_sum(&field, a.d, a.kappa)?;
    let ctx = LocalContext::for_character(&chi, s.precision_for(a.m, 1))?;
    let v = ctx.valuation(&g)?.ok_or_else(|| Error::InternalInconsistency("Gauss sum is zero".into()))?;
    let vq = v / crate::polygon::Rational::from_integer(a.m.into());
    let mu = OrbitDecomposition::new(a.d, a.p)?.mu(a.d - a.kappa).clone();
    emit(
        out,
        &json!({
            "p": a.p, "m": a.m, "d": a.d, "kappa": a.kappa,
            "generator": field.encode(chi.generator()),
            "gauss_sum": CycloJson::from(&g),
            "valuation_q": rat_str(&vq),
            "mu": rat_str(&mu),
        }),
    )?;
    Ok(0)
}

fn run_orbits(d: u64, t: u64, out: &mut dyn Write) -> Result<i32> {
    emit(out, &OrbitDecomposition::new(d, t)?.to_json())?;
    Ok(0)
}

fn session(cli: &Cli) -> Result<Session> {
    let cache = if cli.no_cache {
        None
    } else {
        match cli.cache_dir.clone().or_else(default_cache_dir) {
            Some(dir) => Some(Cache::open(&dir)?),
            None => None,
        }
    };
    Ok(Session { engine: SumEngine::new(cli.max_enum), cache, precision: cli.precision })
}

/// Runs a parsed command, writing the result to `out`; returns the exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    if let Some(n) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::Polygon(cmd) => run_polygon(cli, cmd, out),
        Command::Orbits { d, t } => run_orbits(*d, *t, out),
        Command::Lfunction(a) => run_lfunction(cli, &session(cli)?, a, out),
        Command::Verify(a) => run_verify(cli, &session(cli)?, a, out),
        Command::Sweep(a) => run_sweep(cli, &session(cli)?, a, out),
        Command::Gauss(a) => run_gauss(&session(cli)?, a, out),
    }
}

/// Entry point of the binary: parses `args`, runs, reports errors on stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::EnumerationBound { size, .. } = e {
                eprintln!("hint: pass --max-enum {size} (or larger) to allow this field");
            }
            e.exit_code()
        }
    }
}
