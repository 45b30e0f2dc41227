//! The `sjc` command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or parameter
//! error, 3 refused by a scale guard (rerun with --long).

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use crate::analysis::{
    c2_orbits, c3_orbits, c8_orbits, min_distance, sit_verify, Strategy, Verdict,
};
use crate::codes::{
    code_size_formula, enumerate_code, k_formula, scale_guard, BuildOptions, CodeParams, Family,
};
use crate::error::{Error, Result};
use crate::forms::{q_size, Eps};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SCALE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "sjc", version, about = "Codes from the Jordan-Steiner actions of Sp(2n,2)")]
struct Cli {
    /// Worker threads (default: SJC_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form parameters of a code.
    Params(CodeArgs),
    /// Enumerate a code and write it as JSON.
    Build {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow n = 5.
        #[arg(long)]
        long: bool,
        /// Build excluded parameter sets; the output is marked non-conforming.
        #[arg(long)]
        force: bool,
    },
    /// Exact minimum distance.
    Mindist {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_enum, default_value_t = StrategyArg::FixedFirst)]
        strategy: StrategyArg,
        #[arg(long)]
        long: bool,
    },
    /// Check strong incidence-transitivity for the first codeword.
    VerifySit {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        long: bool,
    },
    /// Orbit decompositions of Q^eps.
    Orbits {
        #[arg(long = "case", value_enum)]
        case: OrbitCase,
        #[arg(long)]
        n: Option<usize>,
        /// Number of blocks (c2).
        #[arg(long)]
        t: Option<usize>,
        /// Half-dimension over the extension field (c3).
        #[arg(long)]
        m: Option<usize>,
        /// Extension degree (c3).
        #[arg(long)]
        b: Option<u8>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_eps)]
        eps: Eps,
    },
    /// Build, measure and check every valid parameter set up to nmax.
    Table {
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        long: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct CodeArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_eps)]
    eps: Eps,
    /// Restriction type (nd codes); defaults to +.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_eps)]
    epsprime: Option<Eps>,
    /// Codimension of the singular part (ti codes); defaults to 0.
    #[arg(long)]
    delta: Option<u8>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    Nd,
    Ti,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StrategyArg {
    FixedFirst,
    Exhaustive,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OrbitCase {
    C2,
    C3,
    C8,
}

fn parse_eps(s: &str) -> std::result::Result<Eps, String> {
    s.parse::<Eps>().map_err(|e| e.to_string())
}

impl CodeArgs {
    fn params(&self) -> Result<CodeParams> {
        let p = match self.family {
            FamilyArg::Nd => {
                if self.delta.is_some() {
                    return Err(Error::param("--delta applies to ti codes only"));
                }
                CodeParams::nd(self.n, self.d, self.eps, self.epsprime.unwrap_or(Eps::Plus))
            }
            FamilyArg::Ti => {
                if self.epsprime.is_some() {
                    return Err(Error::param("--epsprime applies to nd codes only"));
                }
                CodeParams::ti(self.n, self.d, self.eps, self.delta.unwrap_or(0))
            }
        };
        p.check_shape()?;
        Ok(p)
    }
}

#[derive(Serialize)]
struct ParamsReport {
    params: CodeParams,
    valid: bool,
    q_size: usize,
    k: u64,
    code_size: String,
    self_complementary: bool,
}

#[derive(Serialize, Clone)]
struct TableRow {
    family: Family,
    n: usize,
    d: usize,
    eps: String,
    epsprime_or_delta: String,
    k: u64,
    code_size: usize,
    min_distance: u64,
    conjecture_expected: u64,
    agrees: bool,
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn threads_from_env() -> Option<usize> {
    std::env::var("SJC_THREADS").ok().and_then(|s| s.trim().parse().ok())
}

/// Runs the CLI with the given arguments (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let threads = cli.threads.or_else(threads_from_env).filter(|&t| t > 0);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return EXIT_USAGE;
        }
    };
    let mut obuf: Vec<u8> = Vec::new();
    let mut ebuf: Vec<u8> = Vec::new();
    let result = pool.install(|| dispatch(cli.command, &mut obuf, &mut ebuf));
    let _ = out.write_all(&obuf);
    let _ = err.write_all(&ebuf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::ScaleGuard { .. } => EXIT_SCALE,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn verdict_code(ok: bool, err: &mut dyn Write, what: &str) -> Result<i32> {
    if ok {
        Ok(EXIT_OK)
    } else {
        writeln!(err, "VERIFICATION FAILED: {what}")?;
        Ok(EXIT_FAILED)
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Params(args) => {
            let p = args.params()?;
            p.validate()?;
            let report = ParamsReport {
                params: p,
                valid: true,
                q_size: q_size(p.n, p.eps),
                k: k_formula(&p)?,
                code_size: code_size_formula(&p)?.to_string(),
                self_complementary: p.family == Family::Nd && 2 * p.d == p.n && p.eps == Eps::Minus,
            };
            emit_json(out, &report)?;
            Ok(EXIT_OK)
        }
        Command::Build { code, out: path, long, force } => {
            let p = code.params()?;
            let c = enumerate_code(&p, BuildOptions { long, force })?;
            if !c.conforming {
                writeln!(err, "warning: {p} is an excluded parameter set; output is non-conforming")?;
            }
            match path {
                Some(path) => {
                    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
                    serde_json::to_writer(&mut f, &c)?;
                    writeln!(f)?;
                    f.flush()?;
                }
                None => {
                    serde_json::to_writer(&mut *out, &c)?;
                    writeln!(out)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Mindist { code, strategy, long } => {
            let p = code.params()?;
            p.validate()?;
            scale_guard(&p, 4, long, "minimum distance")?;
            let c = enumerate_code(&p, BuildOptions { long, force: false })?;
            let s = match strategy {
                StrategyArg::FixedFirst => Strategy::FixedFirst,
                StrategyArg::Exhaustive => Strategy::Exhaustive,
            };
            let report = min_distance(&c, s)?;
            emit_json(out, &report)?;
            verdict_code(
                report.agrees,
                err,
                &format!(
                    "minimum distance {} differs from the closed form {}",
                    report.min_distance, report.conjecture_expected
                ),
            )
        }
        Command::VerifySit { code, long } => {
            let p = code.params()?;
            p.validate()?;
            scale_guard(&p, 3, long, "strong incidence-transitivity check")?;
            let c = enumerate_code(&p, BuildOptions { long, force: false })?;
            let report = sit_verify(&c, long)?;
            emit_json(out, &report)?;
            match report.status {
                Verdict::Pass => Ok(EXIT_OK),
                Verdict::Inconclusive => {
                    writeln!(err, "inconclusive: generator closure does not match the stabiliser order")?;
                    Ok(EXIT_FAILED)
                }
                Verdict::Fail => verdict_code(false, err, "strong incidence-transitivity check"),
            }
        }
        Command::Orbits { case, n, t, m, b, eps } => {
            let need = |x: Option<usize>, name: &str| {
                x.ok_or_else(|| Error::param(format!("--{name} is required for this case")))
            };
            let status = match case {
                OrbitCase::C2 => {
                    let r = c2_orbits(need(n, "n")?, need(t, "t")?, eps)?;
                    emit_json(out, &r)?;
                    r.status
                }
                OrbitCase::C3 => {
                    let b = b.ok_or_else(|| Error::param("--b is required for this case"))?;
                    let r = c3_orbits(need(m, "m")?, b, eps)?;
                    emit_json(out, &r)?;
                    r.status
                }
                OrbitCase::C8 => {
                    let r = c8_orbits(need(n, "n")?, eps)?;
                    emit_json(out, &r)?;
                    r.status
                }
            };
            match status {
                Verdict::Pass => Ok(EXIT_OK),
                Verdict::Inconclusive => {
                    writeln!(err, "inconclusive: generators did not merge every part into one orbit")?;
                    Ok(EXIT_FAILED)
                }
                Verdict::Fail => verdict_code(false, err, "orbit part sizes"),
            }
        }
        Command::Table { nmax, csv, long } => {
            if nmax < 2 {
                return Err(Error::param("--nmax must be at least 2"));
            }
            if nmax > crate::codes::MAX_N {
                return Err(Error::param(format!("--nmax must be at most {}", crate::codes::MAX_N)));
            }
            if nmax > 4 && !long {
                return Err(Error::ScaleGuard {
                    what: format!("table up to n={nmax}"),
                    estimate: "hours".into(),
                });
            }
            let mut rows = Vec::new();
            let mut all_ok = true;
            for p in CodeParams::all_valid(nmax) {
                let c = enumerate_code(&p, BuildOptions { long, force: false })?;
                let r = min_distance(&c, Strategy::FixedFirst)?;
                let size_ok = c.len().to_string() == code_size_formula(&p)?.to_string();
                let k_ok = c.words.iter().all(|w| w.popcount() == k_formula(&p).unwrap_or(0));
                all_ok &= r.agrees && size_ok && k_ok;
                if !(size_ok && k_ok) {
                    writeln!(err, "mismatch in code size or codeword size for {p}")?;
                }
                rows.push(TableRow {
                    family: p.family,
                    n: p.n,
                    d: p.d,
                    eps: p.eps.symbol().to_string(),
                    epsprime_or_delta: match p.family {
                        Family::Nd => p.epsprime.expect("nd").symbol().to_string(),
                        Family::Ti => p.delta.expect("ti").to_string(),
                    },
                    k: c.k(),
                    code_size: c.len(),
                    min_distance: r.min_distance,
                    conjecture_expected: r.conjecture_expected,
                    agrees: r.agrees,
                });
            }
            match csv {
                Some(path) => {
                    let mut w = csv::Writer::from_path(path)?;
                    for row in &rows {
                        w.serialize(row)?;
                    }
                    w.flush()?;
                }
                None => emit_json(out, &rows)?,
            }
            verdict_code(all_ok, err, "at least one table row disagrees with its closed form")
        }
    }
}
