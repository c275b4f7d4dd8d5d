//! Command-line driver for `severi-core`.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use commands::{Cli, Command, Context};
use config::ConfigFile;
use error::{CliError, CliResult, EXIT_OK, EXIT_USAGE};
use report::Format;
use severi_core::genfun::Surface;

fn write_output(cli: &Cli, cfg: &ConfigFile, text: &str) -> CliResult<()> {
    match cli.output.clone().or(cfg.get("output")?) {
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(std::path::Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(&path).map_err(|e| CliError::Io(e.error))?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: &Cli) -> CliResult<i32> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let threads = cfg.pick_opt(cli.threads, "threads")?;
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        // fails only if a pool already exists, which happens when run in-process twice
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let format = cfg.pick(cli.format, "format", Format::Json)?;
    let cache_dir = cli.cache_dir.clone().or(cfg.get("cache_dir")?);
    let cache = cache_dir.as_deref().map(cache::DiskCache::open).transpose()?;
    let ctx = Context { config: cfg.clone(), format, cache };
    let outcome = match &cli.command {
        Command::P1xp1(a) => commands::class_command(&ctx, Surface::P1xP1, a),
        Command::Exp1(a) => commands::class_command(&ctx, Surface::ExP1, a),
        Command::Blowup(a) => commands::class_command(&ctx, Surface::Bl1P1xP1, a),
        Command::Hurwitz(a) => commands::degree_command(&ctx, Surface::HurwitzP1, a),
        Command::Elliptic(a) => commands::degree_command(&ctx, Surface::HurwitzElliptic, a),
        Command::P2(a) => commands::degree_command(&ctx, Surface::P2, a),
        Command::Rational(a) => commands::rational_command(&ctx, a),
        Command::Spectra(a) => commands::verify_command(&ctx, "spectra", a),
        Command::Verify(a) => commands::verify_command(&ctx, "verify", a),
        Command::CacheAudit(a) => commands::audit_command(&ctx, a),
    }?;
    write_output(cli, &cfg, &outcome.text)?;
    Ok(outcome.code)
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
