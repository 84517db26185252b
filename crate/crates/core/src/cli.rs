//! Command-line front end. Exit codes: 0 for a definitive answer, 2 when the
//! node budget ran out, 1 for usage and input errors (and rejected
//! certificates).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::extract::{bh_extract, fw_blocks, fw_verify, sources_for, ExtractOptions, PairColoring};
use crate::io::cache::{ThresholdCache, ThresholdCacheEntry, DEFAULT_CACHE_PATH};
use crate::io::cert::{
    embedded, Certificate, ColumnsRecord, ExtractStatus, ExtractionRecord, FwRecord, MinimalRecord, ParRecord,
    ThresholdRecord,
};
use crate::io::cnf::{encode, write_cnf};
use crate::io::verify_certificate;
use crate::search::{
    is_par_member, min_threshold, minimal_par_members, ParCertificate, SearchOptions, Strategy, ThresholdResult,
};
use crate::set::{Bound, ElemSet};
use crate::witnesses::{columns_condition, generate, ColumnsVariant, GeneratorFamily, GeneratorSource, LinearSystem};

const EXIT_OK: i32 = 0;
const EXIT_INPUT: i32 = 1;
const EXIT_BUDGET: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "parfilter", version, about = "Finite partition-regularity engine with checkable certificates")]
struct Cli {
    /// Node budget for searches.
    #[arg(long, global = true, value_name = "NODES")]
    budget: Option<u64>,
    /// Worker threads for Par_k searches.
    #[arg(long, global = true, default_value_t = 1, value_name = "W")]
    workers: usize,
    /// Make certificates independent of thread scheduling.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Print JSON (the certificate) instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    /// Threshold cache file.
    #[arg(long, global = true, value_name = "PATH", default_value = DEFAULT_CACHE_PATH)]
    cache: PathBuf,
    /// Neither read nor write the threshold cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Enumerate every coloring instead of backtracking.
    #[arg(long, global = true)]
    exhaustive: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Least N with [1..N] in Par_k of the source.
    Threshold {
        src: String,
        k: u32,
        /// Largest N to try.
        #[arg(long, value_name = "N")]
        n_max: Option<u64>,
    },
    /// Decide whether [1..n] is in Par_k.
    Check { src: String, k: u32, n: u64 },
    /// Look for a k-coloring of [1..n] with no monochromatic generator.
    Refute { src: String, k: u32, n: u64 },
    /// Decide the columns condition for a linear system (file or `[a b; c d]`).
    Columns {
        file: String,
        #[arg(long, default_value = "paper", value_parser = parse_variant)]
        variant: ColumnsVariant,
    },
    /// Minimal members of Par_k inside [1..n], up to a size.
    Minimal { src: String, k: u32, n: u64, max_size: usize },
    /// Monochromatic block extraction for a coloring of r-subsets.
    Extract {
        coloring_file: PathBuf,
        /// `ap`, `folkman[:distinct]`, or a fixed source descriptor.
        src: String,
        #[arg(required = true)]
        lengths: Vec<u32>,
        /// Skip the consecutive-split shortcut.
        #[arg(long)]
        no_fast_path: bool,
    },
    /// Build and check the first t Furstenberg–Weiss blocks.
    Fw { t: u32 },
    /// Write the DIMACS encoding of the refutation problem.
    ExportCnf { src: String, k: u32, n: u64, out: PathBuf },
    /// Recheck a certificate file.
    Verify { file: PathBuf },
}

fn parse_variant(s: &str) -> std::result::Result<ColumnsVariant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

struct Reply {
    text: String,
    code: i32,
}

impl Reply {
    fn ok(text: String) -> Self {
        Reply { text, code: EXIT_OK }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(reply) => {
            let _ = write!(out, "{}", reply.text);
            if !reply.text.ends_with('\n') {
                let _ = writeln!(out);
            }
            reply.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BudgetExhausted(_) => EXIT_BUDGET,
                _ => EXIT_INPUT,
            }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Reply> {
    match &cli.command {
        Command::Threshold { src, k, n_max } => threshold(cli, src, *k, *n_max),
        Command::Check { src, k, n } => par(cli, src, *k, *n, false),
        Command::Refute { src, k, n } => par(cli, src, *k, *n, true),
        Command::Columns { file, variant } => columns(cli, file, *variant),
        Command::Minimal { src, k, n, max_size } => minimal(cli, src, *k, *n, *max_size),
        Command::Extract { coloring_file, src, lengths, no_fast_path } => {
            extract(cli, coloring_file, src, lengths, !no_fast_path)
        }
        Command::Fw { t } => fw(cli, *t),
        Command::ExportCnf { src, k, n, out } => export(cli, src, *k, *n, out),
        Command::Verify { file } => verify(file),
    }
}

fn search_options(cli: &Cli) -> SearchOptions {
    SearchOptions {
        strategy: if cli.exhaustive { Strategy::Exhaustive } else { Strategy::Backtracking },
        budget: cli.budget,
        workers: cli.workers.max(1),
        deterministic: cli.deterministic,
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn colors_line(colors: &[u32]) -> String {
    colors.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn threshold(cli: &Cli, src: &str, k: u32, n_max: Option<u64>) -> Result<Reply> {
    let src = GeneratorSource::parse(src)?;
    let n_max = Bound::new(n_max.unwrap_or(Bound::MAX as u64))?;
    let opts = search_options(cli);
    let cache = (!cli.no_cache).then(|| ThresholdCache::new(&cli.cache));

    let cached = match &cache {
        Some(c) => c.lookup(&src.descriptor(), k)?.filter(|e| e.threshold <= n_max.n()),
        None => None,
    };
    let (result, from_cache) = match cached {
        Some(entry) => (confirm_cached(&src, k, &entry, &opts)?, true),
        None => (min_threshold(&src, k, n_max, &opts)?, false),
    };
    if let (Some(cache), Some(t), false) = (&cache, result.threshold, from_cache) {
        cache.append(&ThresholdCacheEntry {
            source: src.descriptor(),
            k,
            threshold: t,
            established_digest: result.established.as_ref().expect("resolved").family_digest.clone(),
            refutation_digest: result.refutation.as_ref().map(|c| c.family_digest.clone()),
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            nodes: result.budget_spent,
        })?;
    }

    let code = if result.budget_exhausted { EXIT_BUDGET } else { EXIT_OK };
    if cli.json {
        let cert = Certificate::Threshold(ThresholdRecord::new(&src, k, &result, from_cache));
        return Ok(Reply { text: cert.to_json(), code });
    }
    let mut text = String::new();
    match result.threshold {
        Some(t) => {
            let _ = writeln!(text, "threshold={t}");
            match &result.refutation {
                Some(r) => {
                    let c = r.refutation().expect("refuted");
                    let _ = writeln!(text, "refutation at {}: {}", t - 1, colors_line(&c.to_vec()));
                }
                None => text.push_str("no refutation (threshold 1)\n"),
            }
        }
        None => {
            let reason = if result.budget_exhausted { "budget exhausted" } else { "n_max reached" };
            let _ = match result.largest_refuted {
                Some(n) => writeln!(text, "unresolved ({reason}); largest refuted n={n}"),
                None => writeln!(text, "unresolved ({reason})"),
            };
        }
    }
    let _ = writeln!(text, "nodes={}{}", result.budget_spent, if from_cache { " (threshold from cache, both sides recomputed)" } else { "" });
    Ok(Reply { text, code })
}

/// Recomputes both sides of a cached threshold instead of rescanning.
fn confirm_cached(src: &GeneratorSource, k: u32, entry: &ThresholdCacheEntry, opts: &SearchOptions) -> Result<ThresholdResult> {
    let t = entry.threshold;
    let alarm = |what: &str| Error::Rejected(format!("cache entry {} says threshold {t}, but {what}", entry.key()));
    let mut spent = 0;
    let run = |n: u32, spent: &mut u64| -> Result<ParCertificate> {
        let family = generate(src, Bound::new(n as u64)?)?;
        let remaining = opts.budget.map(|b| b.saturating_sub(*spent));
        let cert = is_par_member(&family, k, &opts.with_budget(remaining))?;
        *spent += cert.nodes;
        Ok(cert)
    };
    let established = run(t, &mut spent)?;
    if !established.is_established() {
        return Err(alarm(&format!("[1..{t}] has a refuting coloring")));
    }
    if established.family_digest != entry.established_digest {
        return Err(alarm("the family digest at the threshold changed"));
    }
    let refutation = if t > 1 {
        let r = run(t - 1, &mut spent)?;
        if r.is_established() {
            return Err(alarm(&format!("[1..{}] is already a member", t - 1)));
        }
        Some(r)
    } else {
        None
    };
    Ok(ThresholdResult {
        threshold: Some(t),
        largest_refuted: refutation.as_ref().map(|c| c.bound.n()),
        established: Some(established),
        refutation,
        resolved: true,
        budget_exhausted: false,
        budget_spent: spent,
    })
}

fn par(cli: &Cli, src: &str, k: u32, n: u64, refute: bool) -> Result<Reply> {
    let src = GeneratorSource::parse(src)?;
    let family = generate(&src, Bound::new(n)?)?;
    let (record, code) = match is_par_member(&family, k, &search_options(cli)) {
        Ok(cert) => (ParRecord::new(&src, &cert), EXIT_OK),
        Err(Error::BudgetExhausted(stats)) => (ParRecord::budget(&src, &family, k, stats.nodes), EXIT_BUDGET),
        Err(e) => return Err(e),
    };
    if cli.json {
        return Ok(Reply { text: Certificate::Par(record).to_json(), code });
    }
    let head = match (&record.coloring, refute) {
        _ if code == EXIT_BUDGET => format!("budget exhausted after {} nodes; no verdict", record.nodes),
        (Some(c), false) => format!("not a member: [1..{n}] has a refuting {k}-coloring\ncoloring: {}", colors_line(c)),
        (Some(c), true) => format!("refuting coloring: {}", colors_line(c)),
        (None, false) => format!("member: every {k}-coloring of [1..{n}] has a monochromatic generator"),
        (None, true) => format!("no refuting coloring exists: [1..{n}] is in Par_{k}"),
    };
    Ok(Reply { text: format!("{head}\nnodes={}\n", record.nodes), code })
}

fn load_system(arg: &str) -> Result<LinearSystem> {
    if arg.trim_start().starts_with('[') {
        return LinearSystem::parse_inline(arg);
    }
    let path = Path::new(arg);
    LinearSystem::parse(&read_file(path)?).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse { line, msg: format!("{}: {msg}", path.display()) },
        other => other,
    })
}

fn columns(cli: &Cli, file: &str, variant: ColumnsVariant) -> Result<Reply> {
    let sys = load_system(file)?;
    let found = columns_condition::<BigInt>(&sys, variant)?;
    if cli.json {
        let cert = Certificate::Columns(ColumnsRecord::new(&sys, variant, found.as_ref()));
        return Ok(Reply::ok(cert.to_json()));
    }
    let mut text = String::new();
    match &found {
        Some(p) => {
            let _ = writeln!(text, "satisfied ({variant}): {p}");
            for w in &p.witnesses {
                let terms: Vec<String> =
                    w.basis.iter().zip(&w.coeffs).map(|(j, c)| format!("({c})*c{}", j + 1)).collect();
                let target = match w.target {
                    crate::witnesses::SpanTarget::Column(j) => format!("c{}", j + 1),
                    crate::witnesses::SpanTarget::PartSum(i) => format!("sum(P_{})", i + 1),
                };
                let _ = writeln!(text, "  {target} = {}", terms.join(" + "));
            }
        }
        None => {
            let _ = writeln!(text, "not satisfied ({variant})");
        }
    }
    Ok(Reply::ok(text))
}

fn minimal(cli: &Cli, src: &str, k: u32, n: u64, max_size: usize) -> Result<Reply> {
    let src = GeneratorSource::parse(src)?;
    let family = generate(&src, Bound::new(n)?)?;
    let members = minimal_par_members(&family, k, max_size, cli.budget)?;
    let lists: Vec<Vec<u32>> = members.generators().iter().map(ElemSet::to_vec).collect();
    if cli.json {
        let cert = Certificate::Minimal(MinimalRecord {
            source: src.descriptor(),
            family: family.digest(),
            k,
            n: n as u32,
            max_size,
            members: lists,
            generators: embedded(&src, family.bound()),
        });
        return Ok(Reply::ok(cert.to_json()));
    }
    let mut text = format!("{} minimal members of size <= {max_size}\n", members.len());
    for g in members.generators() {
        let _ = writeln!(text, "{g}");
    }
    Ok(Reply::ok(text))
}

fn extract(cli: &Cli, file: &Path, src: &str, lengths: &[u32], fast_path: bool) -> Result<Reply> {
    let c = PairColoring::parse(&read_file(file)?)?;
    let sources = sources_for(&GeneratorFamily::parse(src)?, lengths)?;
    let opts = ExtractOptions { budget: cli.budget, fast_path };
    let (status, x, nodes, fast) = match bh_extract(&c, &sources, &opts) {
        Ok(o) if o.extraction.is_some() => (ExtractStatus::Found, o.extraction, o.nodes, o.via_fast_path),
        Ok(o) => (ExtractStatus::Absent, None, o.nodes, false),
        Err(Error::BudgetExhausted(s)) => (ExtractStatus::Budget, None, s.nodes, false),
        Err(e) => return Err(e),
    };
    let code = if status == ExtractStatus::Budget { EXIT_BUDGET } else { EXIT_OK };
    if cli.json {
        let cert = Certificate::Extraction(ExtractionRecord::new(&c, &sources, status, x.as_ref(), nodes));
        return Ok(Reply { text: cert.to_json(), code });
    }
    let mut text = String::new();
    match &x {
        Some(x) => {
            for (i, b) in x.blocks.blocks().iter().enumerate() {
                let _ = writeln!(text, "F_{}={b}", i + 1);
            }
            let _ = writeln!(text, "color={}{}", x.color, if fast { " (consecutive split)" } else { "" });
        }
        None if code == EXIT_BUDGET => text.push_str("budget exhausted; no verdict\n"),
        None => {
            let _ = writeln!(text, "no extraction within [1..{}] (search exhausted)", c.bound());
        }
    }
    let _ = writeln!(text, "nodes={nodes}");
    Ok(Reply { text, code })
}

fn fw(cli: &Cli, t: u32) -> Result<Reply> {
    let blocks = fw_blocks(t)?;
    let verified = fw_verify(&blocks);
    if cli.json {
        let cert = Certificate::Fw(FwRecord { t, blocks: blocks.to_vecs(), verified });
        return Ok(Reply::ok(cert.to_json()));
    }
    let mut text = String::new();
    for (i, b) in blocks.blocks().iter().enumerate() {
        let _ = writeln!(text, "A_{}={b}", i + 1);
    }
    let _ = writeln!(text, "verified={verified}");
    Ok(Reply::ok(text))
}

fn export(cli: &Cli, src: &str, k: u32, n: u64, out: &Path) -> Result<Reply> {
    let src = GeneratorSource::parse(src)?;
    let family = generate(&src, Bound::new(n)?)?;
    write_cnf(&family, k, out)?;
    let cnf = encode(&family, k)?;
    if cli.json {
        let v = serde_json::json!({
            "out": out.display().to_string(),
            "vars": cnf.vars,
            "clauses": cnf.clauses.len(),
            "family": family.digest(),
        });
        return Ok(Reply::ok(serde_json::to_string_pretty(&v).expect("json")));
    }
    Ok(Reply::ok(format!(
        "wrote {}: {} variables, {} clauses\n",
        out.display(),
        cnf.vars,
        cnf.clauses.len()
    )))
}

fn verify(file: &Path) -> Result<Reply> {
    match verify_certificate(&read_file(file)?) {
        Ok(r) => Ok(Reply::ok(format!("accepted {} certificate: {}\n", r.kind, r.summary))),
        Err(e @ (Error::Rejected(_) | Error::Parse { .. })) => Ok(Reply { text: format!("rejected: {e}\n"), code: EXIT_INPUT }),
        Err(e) => Err(e),
    }
}

