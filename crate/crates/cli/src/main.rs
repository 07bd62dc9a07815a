//! `lie-proper`: nilpotent orbits, a-hyperbolic ranks and the properness
//! test for pairs of real Lie algebras.
//!
//! Exit codes: 0 admits / success, 1 does not admit, 2 undecided, 3 runtime
//! error, 64 usage error.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use lie_proper_core::embed::{
    build_pair, load_embedding_file, load_pair_database, parse_pair_database, validate_embedding, EmbeddingKind,
};
use lie_proper_core::nilporb::{enumerate_characteristics_with, ScanOptions};
use lie_proper_core::proper::{decide, verify_certificate, Certificate, Evidence, ProperOptions};
use lie_proper_core::realform::{ahyp_rank_split_computed, split_summands, table_row, Catalog};
use lie_proper_core::rootsys::{SimpleType, DEFAULT_ORBIT_CAP};
use lie_proper_core::Error;

use crate::report::{digest, RunReport};

const EXIT_ERROR: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "lie-proper", version, about = "Proper actions on homogeneous spaces of split real Lie groups")]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true, env = "LIE_PROPER_THREADS")]
    threads: Option<usize>,

    /// Real-form catalog to use instead of the bundled one.
    #[arg(long, global = true, value_name = "PATH")]
    catalog: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Search {
    /// Seed for the random elements of the orbit scan.
    #[arg(long, default_value_t = ScanOptions::default().seed)]
    seed: u64,

    /// Maximum number of Weyl-orbit points held in memory.
    #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
    cap: usize,
}

impl Search {
    fn options(self) -> ProperOptions {
        ProperOptions { cap: self.cap, scan: ScanOptions { seed: self.seed, ..ScanOptions::default() } }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the weighted Dynkin diagrams of the nonzero nilpotent orbits.
    Orbits {
        #[arg(long = "type", value_name = "TYPE")]
        ty: SimpleType,
        #[arg(long, default_value_t = ScanOptions::default().seed)]
        seed: u64,
    },
    /// Real rank and a-hyperbolic rank of a real form.
    Ahyp {
        #[arg(long)]
        name: String,
    },
    /// Decide one pair (g, h).
    Check(CheckArgs),
    /// Decide every pair in a database and write a JSON report.
    Classify {
        db: PathBuf,
        /// Write the JSON report here.
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: Search,
    },
    /// Load a pair database and print the validation of every embedding.
    ValidateDb { db: PathBuf },
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, required_unless_present = "verify_certificate")]
    g: Option<String>,

    /// Summands joined by `+`, e.g. "sl(2,R)+sl(3,R)".
    #[arg(long, required_unless_present = "verify_certificate")]
    h: Option<String>,

    /// `tensor`, `lambda2`, or `matrix-file <PATH>`.
    #[arg(long, num_args = 1..=2, value_names = ["KIND", "PATH"], required_unless_present = "verify_certificate")]
    embedding: Vec<String>,

    /// Write the orbit-test certificate here.
    #[arg(long, value_name = "PATH")]
    certificate: Option<PathBuf>,

    /// Replay a certificate instead of deciding a pair.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["g", "h", "embedding"])]
    verify_certificate: Option<PathBuf>,

    #[command(flatten)]
    search: Search,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let catalog = match &cli.catalog {
        Some(p) => Catalog::load(p)?,
        None => Catalog::bundled().clone(),
    };
    match cli.command {
        Command::Orbits { ty, seed } => {
            let opts = ScanOptions { seed, ..ScanOptions::default() };
            for c in enumerate_characteristics_with(ty, &opts)? {
                println!("{c}");
            }
            Ok(0)
        }
        Command::Ahyp { name } => {
            let d = catalog.lookup(&name)?;
            let source = if table_row(&d.name).is_some() { "table" } else { "= real rank" };
            println!(
                "{}\ttype {}\treal rank {}\ta-hyperbolic rank {} ({source})",
                d.name,
                d.simple_type(),
                d.real_rank,
                d.ahyp_rank
            );
            if d.is_split() {
                println!("computed from -w0 on the split Cartan: {}", ahyp_rank_split_computed(d.simple_type()));
            }
            Ok(0)
        }
        Command::Check(args) => check(&catalog, args),
        Command::Classify { db, out, search } => classify(&catalog, &db, out.as_deref(), search),
        Command::ValidateDb { db } => validate_db(&catalog, &db),
    }
}

fn check(catalog: &Catalog, args: CheckArgs) -> Result<u8, Error> {
    let opts = args.search.options();
    if let Some(path) = &args.verify_certificate {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let cert: Certificate = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        if !verify_certificate(&cert, &opts)? {
            return Err(Error::Consistency(format!("certificate {} does not replay", path.display())));
        }
        let what = match &cert.evidence {
            Evidence::Witness { characteristic, orbit_size } => {
                format!("witness {characteristic}, {orbit_size} orbit points outside the Cartan of h")
            }
            Evidence::Refuted { refutations } => format!("{} characteristics refuted", refutations.len()),
        };
        println!("{}: certificate replays ({what})", cert.pair);
        return Ok(if cert.admits { 0 } else { 1 });
    }

    let (g, h) = (args.g.unwrap_or_default(), args.h.unwrap_or_default());
    let summands = split_summands(&h);
    let (kind, matrix) = match args.embedding.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["tensor"] => (EmbeddingKind::Tensor, None),
        ["lambda2"] => (EmbeddingKind::Lambda2, None),
        ["matrix-file", path] => (EmbeddingKind::Matrix, Some(load_embedding_file(path)?.matrix)),
        ref other => {
            return Err(Error::Parse(format!("unknown embedding {other:?} (tensor, lambda2, matrix-file <PATH>)")))
        }
    };
    let pair = build_pair(catalog, &format!("{g} / {h}"), &g, &summands, kind, matrix, "command line")?;
    let verdict = decide(&pair, &opts)?;
    let detail = match &verdict.witness {
        Some(w) => format!(" (witness {w})"),
        None => String::new(),
    };
    println!("{}: {}, {}{detail}", verdict.id, verdict.triage, verdict.admits_nonabelian);
    if let Some(path) = &args.certificate {
        match &verdict.certificate {
            Some(cert) => write_json(path, cert)?,
            None => eprintln!("note: decided by rank triage, no orbit certificate written"),
        }
    }
    Ok(verdict.admits_nonabelian.exit_code() as u8)
}

fn classify(catalog: &Catalog, db: &Path, out: Option<&Path>, search: Search) -> Result<u8, Error> {
    let bytes = std::fs::read(db).map_err(|e| Error::Io(format!("{}: {e}", db.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Error::Parse(format!("{}: {e}", db.display())))?;
    let start = Instant::now();
    let entries = parse_pair_database(&text, catalog)?;
    let load_ms = start.elapsed().as_secs_f64() * 1e3;
    let start = Instant::now();
    let report = RunReport::build(digest(&bytes), search.options(), &entries);
    let report = report.with_timing(load_ms, start.elapsed().as_secs_f64() * 1e3);
    for v in &report.verdicts {
        println!("{:<10} {:<22} {:<4} {:<15} {}", v.g, v.h, v.triage, v.admits_nonabelian, v.id);
    }
    for e in &report.errors {
        eprintln!("{e}");
    }
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    Ok(0)
}

fn validate_db(catalog: &Catalog, db: &Path) -> Result<u8, Error> {
    let loaded = load_pair_database(db, catalog)?;
    for rec in &loaded.records {
        let r = validate_embedding(&rec.embedding)?;
        println!(
            "{}: {} in {} [{}] ok, {} roots of h found, {} module weights ({} zero)",
            rec.id,
            rec.h_label(),
            rec.g.name,
            rec.kind,
            r.h_roots,
            r.module_dimension(),
            r.zero_weights()
        );
    }
    for e in &loaded.errors {
        eprintln!("{e}");
    }
    println!("{} records loaded, {} rejected", loaded.records.len(), loaded.errors.len());
    Ok(if loaded.errors.is_empty() { 0 } else { EXIT_ERROR })
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
