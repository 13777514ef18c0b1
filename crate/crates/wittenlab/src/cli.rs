//! Argument parsing and the command runner.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use wittenlab_core::hodge::extract_hodge_table;
use wittenlab_core::hurwitz::{HurwitzKey, BRUTE_MAX_DEGREE};
use wittenlab_core::psi::CorrelatorKey;
use wittenlab_core::rational::{ratio, render};
use wittenlab_core::Partition;

use crate::cache::{hodge_key, hurwitz_key, psi_key, Kind, Population, Store};
use crate::compute::{hurwitz_value, Method};
use crate::error::{AppError, AppResult};
use crate::record::{Format, Provenance, Record, Writer};
use crate::suites::{self, Bounds, Suite};

#[derive(Debug, Parser)]
#[command(name = "wittenlab", version, about = "Intersection numbers, Hurwitz numbers and their checks")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Lines)]
    pub format: Format,
    /// Working precision for floating-point checks.
    #[arg(long, global = true)]
    pub precision_bits: Option<usize>,
    #[arg(long, global = true)]
    pub max_degree: Option<u32>,
    #[arg(long, global = true)]
    pub max_index: Option<usize>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Omit the timestamp comment at the top of the output.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Cache file consulted before computing.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One correlator `<tau_k1 ... tau_kn>_g`.
    Psi {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u32>,
    },
    /// One double Hurwitz number.
    Hurwitz {
        #[arg(long, value_parser = parse_partition)]
        nu: Partition,
        #[arg(long, value_parser = parse_partition)]
        mu: Partition,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        connected: bool,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Solve for the genus-one `lambda_1` integrals.
    ExtractHodge {
        #[arg(long, default_value_t = 4)]
        points: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        bounds: ExtraBounds,
    },
    /// Compute and write a cache file.
    ExportCache {
        path: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',')]
        kinds: Option<Vec<Kind>>,
        /// Write only the header.
        #[arg(long)]
        empty: bool,
    },
    /// Read a cache file and re-derive every record.
    ImportCache { path: PathBuf },
}

#[derive(Debug, Args)]
pub struct ExtraBounds {
    #[arg(long)]
    pub max_genus: Option<u32>,
    #[arg(long)]
    pub max_points: Option<usize>,
    #[arg(long)]
    pub max_r: Option<u32>,
    /// Largest exponent `k` in the asymptotic and quadrature checks.
    #[arg(long)]
    pub max_k: Option<u32>,
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    Partition::parse_csv(s).map_err(|e| e.to_string())
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => write!(out, "{e}"),
                _ => write!(err, "{e}"),
            };
            return e.exit_code();
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: thread pool: {e}");
            return 1;
        }
    };
    let mut writer = Writer::new(Vec::new(), cli.format);
    if !cli.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let _ = writer.comment(&format!("wittenlab {} unix={secs}", env!("CARGO_PKG_VERSION")));
    }
    let result = pool.install(|| execute(&cli, &mut writer));
    let code = match result {
        Ok(failures) => i32::from(failures > 0),
        Err(e) => {
            let _ = writer.emit(Record::new("failure", "error", e.to_string().replace(['\t', '\n'], " ")));
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    };
    match writer.finish() {
        Ok(buf) => {
            let _ = out.write_all(&buf);
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    }
    code
}

type Sink = Writer<Vec<u8>>;

fn io(e: std::io::Error) -> AppError {
    AppError::io("<output>", e)
}

fn load(cli: &Cli) -> AppResult<Store> {
    match &cli.cache {
        Some(p) => Store::read(p),
        None => Ok(Store::default()),
    }
}

/// Returns the number of failed checks.
fn execute(cli: &Cli, w: &mut Sink) -> AppResult<usize> {
    match &cli.command {
        Command::Psi { genus, exponents } => {
            let key = CorrelatorKey::new(*genus, exponents.clone());
            let mut store = load(cli)?;
            let (value, prov) = match store.psi.get(&key) {
                Some(v) => (v.clone(), Provenance::Cached),
                None => (store.psi.correlator(&key), Provenance::Computed),
            };
            w.emit(Record::new("psi", psi_key(&key), render(&value)).with_provenance(prov)).map_err(io)?;
            Ok(0)
        }
        Command::Hurwitz { nu, mu, r, connected, method } => {
            let key = HurwitzKey::new(nu.clone(), mu.clone(), *r, *connected)?;
            let store = load(cli)?;
            let (value, prov) = match store.hurwitz.get(&key) {
                Some(v) => (v.clone(), Provenance::Cached),
                None => (hurwitz_value(&key, *method)?, Provenance::Computed),
            };
            w.emit(Record::new("hurwitz", hurwitz_key(&key), render(&value)).with_provenance(prov)).map_err(io)?;
            Ok(0)
        }
        Command::ExtractHodge { points } => {
            let mut store = load(cli)?;
            let d_max = cli.max_degree.unwrap_or(BRUTE_MAX_DEGREE);
            let rep = extract_hodge_table(&mut store.psi, 1, *points, d_max, true)?;
            for (k, v) in rep.table.iter() {
                w.emit(Record::new("hodge", hodge_key(k), render(v))).map_err(io)?;
            }
            w.emit(Record::new(
                "info",
                "extract-hodge:system",
                format!("{} unknowns, {} equations, rank {}", rep.unknowns.len(), rep.equations, rep.rank),
            ))
            .map_err(io)?;
            let ok = rep.consistent() && rep.rank == rep.unknowns.len();
            let base = rep.table.get(&wittenlab_core::hodge::HodgeKey::new(1, vec![0], 1)).cloned();
            let ok = ok && base == Some(ratio(1, 24));
            w.emit(Record::new("check", "extract-hodge:consistent", if ok { "pass" } else { "fail" })).map_err(io)?;
            if !ok {
                w.emit(Record::new("failure", "extract-hodge:consistent", "surplus residual, rank deficit or wrong base value"))
                    .map_err(io)?;
            }
            Ok(usize::from(!ok))
        }
        Command::Verify { suite, bounds } => {
            let b = Bounds {
                max_genus: bounds.max_genus,
                max_points: bounds.max_points,
                max_degree: cli.max_degree,
                max_index: cli.max_index,
                max_r: bounds.max_r,
                max_k: bounds.max_k,
                precision_bits: cli.precision_bits,
            };
            let outcome = suites::run(*suite, &b)?;
            w.emit_all(outcome.records()).map_err(io)?;
            Ok(outcome.failures())
        }
        Command::ExportCache { path, kinds, empty } => {
            let mut store = load(cli)?;
            if !empty {
                let mut pop = Population::default();
                if let Some(k) = kinds {
                    pop.kinds = k.clone();
                }
                if let Some(d) = cli.max_degree {
                    pop.max_degree = d;
                }
                if let Some(k) = cli.max_index {
                    pop.max_index = k;
                }
                store.populate(&pop)?;
            }
            store.write(path)?;
            w.emit(Record::new("info", format!("export-cache:{}", display(path)), format!("{} records", store.len())))
                .map_err(io)?;
            Ok(0)
        }
        Command::ImportCache { path } => import(path, w),
    }
}

fn display(p: &Path) -> String {
    p.display().to_string().replace(['\t', '\n'], " ")
}

fn import(path: &Path, w: &mut Sink) -> AppResult<usize> {
    let store = match Store::read(path) {
        Ok(s) => s,
        Err(AppError::CacheLine { line, message, .. }) => {
            w.emit(Record::new("failure", format!("import-cache:{}:{line}", display(path)), message.replace('\t', " ")))
                .map_err(io)?;
            return Ok(1);
        }
        Err(e) => return Err(e),
    };
    w.emit_all(store.records(Provenance::Cached)).map_err(io)?;
    let bad = store.verify()?;
    for (kind, key, stored, fresh) in &bad {
        let fresh = fresh.as_ref().map_or_else(|| "not derivable".to_string(), render);
        w.emit(Record::new("failure", format!("{}:{key}", kind.as_str()), format!("stored {} recomputed {fresh}", render(stored))))
            .map_err(io)?;
    }
    let verdict = if bad.is_empty() { "pass" } else { "fail" };
    w.emit(Record::new(
        "summary",
        format!("import-cache:{}", display(path)),
        format!("{}/{} {verdict}", store.len() - bad.len(), store.len()),
    ))
    .map_err(io)?;
    Ok(bad.len())
}
