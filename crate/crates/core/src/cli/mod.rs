//! `mhopf verify | double | report`.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure,
//! 2 on parse or usage errors.

pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::double::DoubleHandle;
use crate::error::{Error, Result};
use crate::mha::SuiteConfig;
use crate::pairing::PairingHandle;
use crate::report::Report;
use format::Loaded;

#[derive(Parser, Debug)]
#[command(name = "mhopf", version, about = "Verify multiplier Hopf algebras, pairings and quantum doubles")]
pub struct Cli {
    /// Window radius for lazy (infinite) bases.
    #[arg(long, global = true, env = "MHOPF_DEFAULT_WINDOW", default_value_t = 8)]
    pub window: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the suites that apply to the file: algebra and mha, plus the pairing suites for a pair.
    Verify {
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build the double of a pairing and export its structure constants.
    Double {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Everything `verify` runs, then the double suites; deterministic per seed.
    Report {
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Exit code for an error that stopped a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) | Error::Unavailable(_) | Error::NotAGroup(_) => 2,
        _ => 1,
    }
}

/// Runs one invocation, writing reports to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Verify { spec, seed } => verify(spec, cli.window, *seed, out, err),
        Command::Double { spec, out: path, format, seed } => {
            double(spec, path.as_deref(), *format, cli.window, *seed, out, err)
        }
        Command::Report { spec, seed } => report(spec, cli.window, *seed, out, err),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = match &e {
                Error::Parse { location, message } => writeln!(err, "parse error at {location}: {message}"),
                other => writeln!(err, "error: {other}"),
            };
            exit_code(&e)
        }
    }
}

/// The suites `verify` runs, in order.
pub fn suites(loaded: &Loaded, cfg: &SuiteConfig, err: &mut dyn Write) -> Vec<Report> {
    let timed = |name: &str, err: &mut dyn Write, f: &dyn Fn() -> Report| {
        let t = Instant::now();
        let r = f();
        let _ = writeln!(err, "{name}: {:.2?}", t.elapsed());
        r
    };
    match loaded {
        Loaded::Algebra(h) => vec![timed(h.name(), err, &|| h.verify(cfg))],
        Loaded::Pairing(p) => {
            let mut out = vec![
                timed(p.a().name(), err, &|| p.a().verify(cfg)),
                timed(p.b().name(), err, &|| p.b().verify(cfg)),
                timed("prepairing", err, &|| p.verify_prepairing(cfg)),
                timed("pairing", err, &|| p.verify_pairing(cfg)),
            ];
            let verified = out.iter().all(Report::all_passed);
            // properties rely on the R-map inverses, which need a verified pairing
            let q = if verified { p.assume_pairing() } else { p.clone() };
            out.push(timed("properties", err, &|| q.verify_properties(cfg)));
            out
        }
    }
}

fn load(spec: &Path) -> Result<Loaded> {
    format::load_path(spec)
}

fn header(out: &mut dyn Write, kind: &str, spec: &Path, loaded: &Loaded, cfg: &SuiteConfig) -> Result<()> {
    let file = spec.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    writeln!(out, "mhopf {kind}: {} ({file})", loaded.name())?;
    writeln!(out, "window {} seed {}", cfg.window, cfg.seed)?;
    Ok(())
}

fn print_all(out: &mut dyn Write, reports: &[Report]) -> Result<bool> {
    for r in reports {
        writeln!(out)?;
        write!(out, "{}", r.render())?;
    }
    let failed: usize = reports.iter().map(|r| r.failures().count()).sum();
    let total: usize = reports.iter().map(|r| r.checks.len()).sum();
    writeln!(out)?;
    writeln!(out, "{} {total} checks, {failed} failed", if failed == 0 { "PASS" } else { "FAIL" })?;
    Ok(failed == 0)
}

fn verify(spec: &Path, window: usize, seed: u64, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let loaded = match load(spec) {
        Err(Error::VerificationFailed { check, witness }) => {
            writeln!(out, "FAIL {check}")?;
            writeln!(out, "     witness: {witness}")?;
            return Ok(false);
        }
        other => other?,
    };
    let cfg = format::suite_config(window, seed);
    header(out, "verify", spec, &loaded, &cfg)?;
    let reports = suites(&loaded, &cfg, err);
    print_all(out, &reports)
}

fn pairing_of(loaded: Loaded) -> Result<PairingHandle> {
    match loaded {
        Loaded::Pairing(p) => Ok(p),
        Loaded::Algebra(h) => Err(Error::Unavailable(format!("{} is a single algebra; a double needs a pairing", h.name()))),
    }
}

fn double(
    spec: &Path,
    path: Option<&Path>,
    format: Format,
    window: usize,
    seed: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<bool> {
    let cfg = format::suite_config(window, seed);
    let p = pairing_of(load(spec)?)?;
    if !p.is_finite() {
        return Err(Error::Unavailable(format!("{} is lazy; its double has no finite constant table", p.name())));
    }
    let t = Instant::now();
    let p = p.certify(&cfg)?;
    let d = crate::double::build_double(&p, &cfg)?;
    writeln!(err, "built {} in {:.2?}", d.handle().name(), t.elapsed())?;
    let doc = format::mha_file(d.handle())?;
    let text = match format {
        Format::Json => format::to_json_text(&doc),
        Format::Csv => format::to_csv(&doc)?,
    };
    match path {
        Some(p) => {
            std::fs::write(p, text)?;
            writeln!(err, "wrote {} ({} basis elements) to {}", d.handle().name(), d.window(0).len(), p.display())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(true)
}

fn report(spec: &Path, window: usize, seed: u64, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let loaded = load(spec)?;
    let cfg = format::suite_config(window, seed);
    header(out, "report", spec, &loaded, &cfg)?;
    let mut reports = suites(&loaded, &cfg, err);
    if let Loaded::Pairing(p) = &loaded {
        if reports.iter().all(Report::all_passed) {
            let t = Instant::now();
            let d = DoubleHandle::new(&p.assume_pairing())?;
            reports.push(d.handle().verify(&cfg));
            reports.push(d.verify(&cfg));
            reports.push(d.opposite_double_iso(&cfg));
            writeln!(err, "double suites: {:.2?}", t.elapsed())?;
        } else {
            let mut r = Report::new("double suites");
            r.note("skipped: the pairing did not verify");
            reports.push(r);
        }
    }
    print_all(out, &reports)
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
