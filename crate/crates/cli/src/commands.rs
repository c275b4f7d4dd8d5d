use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::warn;
use serde::{Deserialize, Serialize};

use severi_core::exactalg::format_rational;
use severi_core::genfun::{
    extract_invariants, p2_pipeline, z_bl1_p1xp1, z_exp1, z_hurwitz_elliptic, z_hurwitz_p1, z_p1xp1, InvariantRow,
    Surface,
};
use severi_core::operators::{GradedOperator, MH, MS, NS};
use severi_core::rationality::solve_ra;
use severi_core::exactalg::MultiSeries;

use crate::cache::{operator_by_name, AuditRow, AuditStatus, DiskCache};
use crate::config::ConfigFile;
use crate::error::{CliError, CliResult, EXIT_INTEGRITY, EXIT_OK, EXIT_VERIFICATION};
use crate::report::{emit, emit_table, Format, Meta};
use crate::verify::{self, CheckRow};

#[derive(Debug, Parser)]
#[command(name = "severi", version, about = "Exact Fock-space computation of Severi degrees and Hurwitz numbers")]
pub struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory of the persistent block cache
    #[arg(long, global = true, env = "SEVERI_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// File of `key = value` defaults; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants N_{g,(d1,d2)} of P1 x P1
    P1xp1(ClassArgs),
    /// Hurwitz numbers of P1 with simple branching
    Hurwitz(DegreeArgs),
    /// Hurwitz numbers of an elliptic curve
    Elliptic(DegreeArgs),
    /// Invariants of E x P1
    Exp1(ClassArgs),
    /// Invariants of the one-point blow-up of P1 x P1
    Blowup(ClassArgs),
    /// Invariants of P2 through the blow-up route
    P2(DegreeArgs),
    /// The rational function R_a
    Rational(RationalArgs),
    /// Characteristic polynomial certificates
    Spectra(VerifyArgs),
    /// Run verification suites; exits 1 if any check fails
    Verify(VerifyArgs),
    /// Recompute cached blocks and compare them byte for byte
    CacheAudit(AuditArgs),
}

#[derive(Debug, Args)]
pub struct ClassArgs {
    #[arg(long)]
    pub d1: Option<u32>,
    #[arg(long)]
    pub d2: Option<u32>,
    /// Largest exceptional degree (blowup only)
    #[arg(long)]
    pub e: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    pub gmin: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    pub gmax: Option<i32>,
    /// Report connected invariants
    #[arg(long)]
    pub connected: bool,
    /// Requested t-order; raised if too small for the genus range
    #[arg(long)]
    pub t_order: Option<u32>,
}

#[derive(Debug, Args)]
pub struct DegreeArgs {
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub gmin: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    pub gmax: Option<i32>,
    #[arg(long)]
    pub connected: bool,
    /// Report disconnected invariants (p2 only; the default there is connected)
    #[arg(long)]
    pub disconnected: bool,
    #[arg(long)]
    pub t_order: Option<u32>,
}

#[derive(Debug, Args)]
pub struct RationalArgs {
    #[arg(long)]
    pub a: Option<u32>,
}

#[derive(Debug, Args, Default)]
pub struct VerifyArgs {
    #[arg(long)]
    pub prop1: bool,
    #[arg(long)]
    pub prop2: bool,
    #[arg(long)]
    pub commutator: bool,
    #[arg(long)]
    pub self_adjoint: bool,
    #[arg(long)]
    pub nilpotency: bool,
    #[arg(long)]
    pub purity: bool,
    #[arg(long)]
    pub rationality: bool,
    #[arg(long)]
    pub oracle: bool,
    /// Energy bound for prop1, commutator, self-adjointness and oracle checks
    #[arg(long)]
    pub smax: Option<u32>,
    #[arg(long)]
    pub nmax: Option<u32>,
    #[arg(long)]
    pub amax: Option<u32>,
    #[arg(long)]
    pub d2max: Option<u32>,
    #[arg(long)]
    pub nilmax: Option<u32>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Audit a single block of this operator (MS, NS, MH, MF, MF+)
    #[arg(long, requires = "s")]
    pub op: Option<String>,
    #[arg(long)]
    pub s: Option<u32>,
}

/// A rendered report and the exit code to leave with.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: EXIT_OK }
    }
}

pub struct Context {
    pub config: ConfigFile,
    pub format: Format,
    pub cache: Option<DiskCache>,
}

impl Context {
    fn warm(&self, op: &dyn GradedOperator, s_max: u32) -> CliResult<()> {
        if let Some(c) = &self.cache {
            c.warm(op, s_max)?;
        }
        Ok(())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Raises a requested t-order to the sufficient one, with a notice.
fn effective_t(requested: Option<u32>, needed: i32) -> u32 {
    let needed = needed.max(0) as u32;
    match requested {
        Some(t) if t < needed => {
            warn!("raising t-order from {t} to {needed}, the least order covering the requested genera");
            needed
        }
        Some(t) => t,
        None => needed,
    }
}

fn table_rows(z: &MultiSeries, surface: Surface, connected: bool, keep: impl Fn(&InvariantRow) -> bool) -> CliResult<Vec<InvariantRow>> {
    let z = if connected { severi_core::genfun::connected_series(z)? } else { z.clone() };
    Ok(extract_invariants(&z, surface, connected)?.rows.into_iter().filter(keep).collect())
}

fn genus_range(cfg: &ConfigFile, gmin: Option<i32>, gmax: Option<i32>, lo: i32, hi: i32) -> CliResult<(i32, i32)> {
    let gmin = cfg.pick(gmin, "gmin", lo)?;
    let gmax = cfg.pick(gmax, "gmax", hi)?;
    if gmin > gmax {
        return Err(usage(format!("--gmin {gmin} exceeds --gmax {gmax}")));
    }
    Ok((gmin, gmax))
}

pub fn class_command(ctx: &Context, surface: Surface, a: &ClassArgs) -> CliResult<Outcome> {
    let cfg = &ctx.config;
    let d1 = cfg.pick(a.d1, "d1", 1)?;
    let d2 = cfg.pick(a.d2, "d2", 1)?;
    let connected = cfg.switch(a.connected, "connected")?;
    let e = cfg.pick(a.e, "e", 0)?;
    if surface != Surface::Bl1P1xP1 && a.e.is_some() {
        return Err(usage("--e only applies to blowup"));
    }
    if d1 + d2 == 0 {
        return Err(usage("the class range is empty: give --d1 or --d2"));
    }
    if e < 0 {
        return Err(usage("--e must be nonnegative"));
    }
    let (d1i, d2i) = (d1 as i32, d2 as i32);
    let (lowest, default_hi) = match surface {
        Surface::ExP1 => (1 - 2 * d2i, 1),
        Surface::Bl1P1xP1 => (1 - 2 * d1i - 2 * d2i - e, 0),
        _ => (1 - 2 * d1i - 2 * d2i, 0),
    };
    let (gmin, gmax) = genus_range(cfg, a.gmin, a.gmax, if connected { 0 } else { lowest }, default_hi)?;
    let needed = match surface {
        Surface::ExP1 => gmax - 1 + 2 * d2i,
        Surface::Bl1P1xP1 => gmax - 1 + 2 * d1i + 2 * d2i + e,
        _ => gmax - 1 + 2 * d1i + 2 * d2i,
    };
    let t = effective_t(cfg.pick_opt(a.t_order, "t_order")?, needed);
    ctx.warm(&MS, d1)?;
    let z = match surface {
        Surface::ExP1 => z_exp1(d1, d2, t)?,
        Surface::Bl1P1xP1 => z_bl1_p1xp1(d1, d2, t, e)?,
        _ => z_p1xp1(d1, d2, t)?,
    };
    let rows = table_rows(&z, surface, connected, |r| {
        r.g >= gmin && r.g <= gmax && r.class[0] <= d1i && r.class[1] <= d2i && (r.class.len() < 3 || r.class[2] <= e)
    })?;
    let mut meta = Meta::new(match surface {
        Surface::ExP1 => "exp1",
        Surface::Bl1P1xP1 => "blowup",
        _ => "p1xp1",
    })
    .surface(surface)
    .param("d1", d1)
    .param("d2", d2)
    .param("gmin", gmin)
    .param("gmax", gmax)
    .param("connected", connected)
    .param("t_order", t);
    if surface == Surface::Bl1P1xP1 {
        meta = meta.param("e", e);
    }
    Ok(Outcome::ok(emit_table(&meta, &rows, ctx.format)?))
}

pub fn degree_command(ctx: &Context, surface: Surface, a: &DegreeArgs) -> CliResult<Outcome> {
    let cfg = &ctx.config;
    let d = cfg.pick(a.d, "d", if surface == Surface::P2 { 3 } else { 2 })?;
    if d == 0 {
        return Err(usage("--d must be positive"));
    }
    let di = d as i32;
    let requested_t = cfg.pick_opt(a.t_order, "t_order")?;
    let (meta, rows) = match surface {
        Surface::P2 => {
            if a.connected {
                return Err(usage("p2 reports connected invariants by default; use --disconnected to change that"));
            }
            let disconnected = cfg.switch(a.disconnected, "disconnected")?;
            let (gmin, gmax) = genus_range(cfg, a.gmin, a.gmax, if disconnected { 1 - 3 * di } else { 0 }, 0)?;
            if requested_t.is_some() {
                warn!("p2 chooses its own t-order; ignoring --t-order");
            }
            ctx.warm(&MS, d)?;
            let p = p2_pipeline(d, gmax)?;
            let rows: Vec<InvariantRow> = if disconnected {
                extract_invariants(&p.z_p2, Surface::P2, false)?.rows
            } else {
                p.connected.rows
            };
            let rows: Vec<InvariantRow> = rows.into_iter().filter(|r| r.g >= gmin && r.g <= gmax && r.class[0] <= di).collect();
            let meta = Meta::new("p2")
                .surface(surface)
                .param("d", d)
                .param("gmin", gmin)
                .param("gmax", gmax)
                .param("connected", !disconnected);
            (meta, rows)
        }
        _ => {
            if a.disconnected {
                return Err(usage("--disconnected only applies to p2"));
            }
            let connected = cfg.switch(a.connected, "connected")?;
            let elliptic = surface == Surface::HurwitzElliptic;
            let lowest = if elliptic { 1 } else { 1 - di };
            let (gmin, gmax) = genus_range(cfg, a.gmin, a.gmax, if connected { lowest.max(0) } else { lowest }, if elliptic { 1 } else { 0 })?;
            let needed = if elliptic { 2 * gmax - 2 } else { 2 * gmax - 2 + 2 * di };
            let t = effective_t(requested_t, needed);
            ctx.warm(&MH, d)?;
            let z = if elliptic { z_hurwitz_elliptic(d, t)? } else { z_hurwitz_p1(d, t)? };
            let rows = table_rows(&z, surface, connected, |r| r.g >= gmin && r.g <= gmax && r.class[0] <= di)?;
            let name = if elliptic { "elliptic" } else { "hurwitz" };
            let meta = Meta::new(name)
                .surface(surface)
                .param("d", d)
                .param("gmin", gmin)
                .param("gmax", gmax)
                .param("connected", connected)
                .param("t_order", t);
            (meta, rows)
        }
    };
    Ok(Outcome::ok(emit_table(&meta, &rows, ctx.format)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalTerm {
    pub part: String,
    pub u_degree: usize,
    pub q2_degree: usize,
    pub coefficient: String,
}

pub fn rational_command(ctx: &Context, a: &RationalArgs) -> CliResult<Outcome> {
    let a = ctx.config.pick(a.a, "a", 1)?;
    ctx.warm(&NS, a)?;
    let r = solve_ra(a)?;
    let mut rows = Vec::new();
    for (part, poly) in [("num", r.numerator()), ("den", r.denominator())] {
        for (u_degree, q2_degree, c) in poly.terms() {
            rows.push(RationalTerm { part: part.into(), u_degree, q2_degree, coefficient: format_rational(&c) });
        }
    }
    let meta = Meta::new("rational").param("a", a);
    Ok(Outcome::ok(emit(&meta, &rows, ctx.format)?))
}

pub fn verify_command(ctx: &Context, name: &str, a: &VerifyArgs) -> CliResult<Outcome> {
    let cfg = &ctx.config;
    let spectra_only = name == "spectra";
    let selected = [a.prop1, a.prop2, a.commutator, a.self_adjoint, a.nilpotency, a.purity, a.rationality, a.oracle];
    let all = !selected.iter().any(|&b| b);
    if spectra_only && (a.commutator || a.self_adjoint || a.purity || a.rationality || a.oracle) {
        return Err(usage("spectra accepts only --prop1, --prop2 and --nilpotency"));
    }
    let smax = cfg.pick_opt(a.smax, "smax")?;
    let nmax = cfg.pick(a.nmax, "nmax", 12)?;
    let amax = cfg.pick(a.amax, "amax", 3)?;
    let d2max = cfg.pick(a.d2max, "d2max", 3)?;
    let nilmax = cfg.pick(a.nilmax, "nilmax", 10)?;
    let mut meta = Meta::new(name);
    let mut rows: Vec<CheckRow> = Vec::new();
    let run_all = all && !spectra_only;
    if a.prop1 || all {
        let s = smax.unwrap_or(8);
        ctx.warm(&MS, s)?;
        meta = meta.param("prop1.smax", s);
        rows.extend(verify::prop1(s)?);
    }
    if a.prop2 || all {
        meta = meta.param("prop2.nmax", nmax);
        rows.extend(verify::prop2(nmax)?);
    }
    if a.nilpotency || all {
        ctx.warm(&MH, nilmax)?;
        meta = meta.param("nilpotency.smax", nilmax);
        rows.extend(verify::nilpotency(nilmax)?);
    }
    if a.commutator || run_all {
        let s = smax.unwrap_or(6);
        meta = meta.param("commutator.smax", s);
        rows.extend(verify::commutator(s)?);
    }
    if a.self_adjoint || run_all {
        let s = smax.unwrap_or(6);
        meta = meta.param("self_adjoint.smax", s);
        rows.extend(verify::self_adjoint(s)?);
    }
    if a.oracle || run_all {
        let s = smax.unwrap_or(5);
        meta = meta.param("oracle.smax", s);
        rows.extend(verify::oracle(s)?);
    }
    if a.purity || run_all {
        rows.extend(verify::purity()?);
    }
    if a.rationality || run_all {
        meta = meta.param("rationality.amax", amax).param("rationality.d2max", d2max);
        rows.extend(verify::rationality(amax, d2max)?);
    }
    let pass = rows.iter().all(|r| r.pass);
    meta.pass = Some(pass);
    let code = if pass { EXIT_OK } else { EXIT_VERIFICATION };
    Ok(Outcome { text: emit(&meta, &rows, ctx.format)?, code })
}

pub fn audit_command(ctx: &Context, a: &AuditArgs) -> CliResult<Outcome> {
    let cache = ctx
        .cache
        .as_ref()
        .ok_or_else(|| usage("cache-audit needs --cache-dir or SEVERI_CACHE_DIR"))?;
    let only = match (&a.op, a.s) {
        (Some(op), Some(s)) => {
            if operator_by_name(op).is_none() {
                return Err(usage(format!("unknown operator '{op}'")));
            }
            Some((op.as_str(), s))
        }
        _ => None,
    };
    let mut rows = cache.audit(only)?;
    rows.sort_by(|a, b| (&a.key, &a.file).cmp(&(&b.key, &b.file)));
    let bad: Vec<&AuditRow> = rows
        .iter()
        .filter(|r| matches!(r.status, AuditStatus::Mismatch | AuditStatus::Corrupt))
        .collect();
    for r in &bad {
        warn!("cache entry {} ({}) differs from recomputation", r.key, r.file);
    }
    let mut meta = Meta::new("cache-audit");
    meta.pass = Some(bad.is_empty());
    let code = if bad.is_empty() { EXIT_OK } else { EXIT_INTEGRITY };
    Ok(Outcome { text: emit(&meta, &rows, ctx.format)?, code })
}
