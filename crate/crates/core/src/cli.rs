//! Command-line front end: `extract`, `cluster`, `generate` and `validate`.
//!
//! Exit codes: 0 success or validation pass, 1 validation failure, 2 usage
//! error, 3 data error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::ChannelError;
use crate::generate::{CountModel, Generator, GeneratorConfig};
use crate::io::{read_ensemble, resolve_scenario, write_ensemble, CirFile, PasFile, PdpFile, Polarization};
use crate::kpm::{cluster_statistics, ClusterPartition, select_optimal_k, ClusterStats, KScore, McdParams, DEFAULT_RESTARTS};
use crate::lsp::{
    count_directional_multipaths, k_factor_pdp, pas_global_spreads, rms_delay_spread, xpr_per_bin,
    DEFAULT_DS_THRESHOLD_DB, DEFAULT_MULTIPATH_SNR_DB, DEFAULT_XPR_MIN_SNR_DB,
};
use crate::tcsl::{partition_delays, DEFAULT_VOID_NS};
use crate::types::{AngleDomain, LspRecord};
use crate::validate::{validate_ensemble, validate_statistics, Tolerances, ValidationReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VALIDATION_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mmwchan", version, about = "Millimeter-wave channel statistics and TCSL impulse-response generation")]
pub struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Kpm,
    Tcsl,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Large-scale parameters and multipath counts per location.
    Extract {
        /// Power delay profile files.
        #[arg(long, num_args = 1.., required = true)]
        pdp: Vec<PathBuf>,
        /// Power angular spectrum files.
        #[arg(long, num_args = 1..)]
        pas: Vec<PathBuf>,
        /// Output table; a JSON summary is written next to it.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DS_THRESHOLD_DB)]
        threshold_db: f64,
        #[arg(long, default_value_t = DEFAULT_MULTIPATH_SNR_DB)]
        snr_db: f64,
        #[arg(long, default_value_t = DEFAULT_XPR_MIN_SNR_DB)]
        xpr_min_snr_db: f64,
    },
    /// Partition the paths of an impulse-response file.
    Cluster {
        #[arg(long)]
        paths: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Kpm)]
        method: Method,
        /// Candidate cluster counts `a..b` (inclusive).
        #[arg(long, default_value = "2..10")]
        k_range: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        /// Delay weight of the multipath component distance.
        #[arg(long, default_value_t = 1.0)]
        zeta: f64,
        #[arg(long, default_value_t = DEFAULT_VOID_NS)]
        void_ns: f64,
        /// Output file (JSON); stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate an ensemble of impulse responses.
    Generate {
        /// `file:section`, or a section of the default scenario file.
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Drop paths this many dB below the strongest path.
        #[arg(long)]
        power_floor_db: Option<f64>,
        #[arg(long, value_enum, default_value_t = CountModelArg::RoundedGaussian)]
        count_model: CountModelArg,
    },
    /// Compare an ensemble's statistics with a scenario.
    Validate {
        #[arg(long)]
        ensemble: PathBuf,
        /// Defaults to the scenario recorded in the ensemble manifest.
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        tolerance_scale: f64,
        /// Machine-readable report; defaults to `validation.json` in the
        /// ensemble directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountModelArg {
    RoundedGaussian,
    Poisson,
}

enum Failure {
    Usage(String),
    Data(ChannelError),
    Validation,
}

impl From<ChannelError> for Failure {
    fn from(e: ChannelError) -> Self {
        Failure::Data(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the CLI with explicit arguments and output streams; returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if code == EXIT_PASS { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command, out)),
            Err(e) => Err(Failure::Usage(format!("cannot start {n} threads: {e}"))),
        },
        None => dispatch(cli.command, out),
    };
    match result {
        Ok(()) => EXIT_PASS,
        Err(Failure::Validation) => EXIT_VALIDATION_FAIL,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    }
}

fn dispatch(cmd: Command, out: &mut (dyn Write + Send)) -> Outcome {
    match cmd {
        Command::Extract { pdp, pas, out: path, threshold_db, snr_db, xpr_min_snr_db } => {
            extract(&pdp, &pas, &path, threshold_db, snr_db, xpr_min_snr_db, out)
        }
        Command::Cluster { paths, method, k_range, seed, restarts, zeta, void_ns, out: path } => {
            cluster(&paths, method, &k_range, seed, restarts, zeta, void_ns, path.as_deref(), out)
        }
        Command::Generate { scenario, count, seed, out: dir, power_floor_db, count_model } => {
            generate(&scenario, count, seed, &dir, power_floor_db, count_model, out)
        }
        Command::Validate { ensemble, scenario, tolerance_scale, out: path } => {
            validate(&ensemble, scenario.as_deref(), tolerance_scale, path.as_deref(), out)
        }
    }
}

fn options_hash(options: &impl Serialize) -> String {
    let json = serde_json::to_vec(options).expect("options serialize");
    hex::encode(&Sha256::digest(&json)[..8])
}

fn io_error(path: &Path, source: std::io::Error) -> Failure {
    Failure::Data(ChannelError::Io { path: path.display().to_string(), source })
}

fn write_text(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

/// One row of the `extract` table.
#[derive(Debug, Clone, Serialize)]
struct ExtractRow {
    record: LspRecord,
    frequency_ghz: f64,
    num_profiles: usize,
    mean_multipaths: f64,
    xpr_mean_db: Option<f64>,
    zsd_deg: Option<f64>,
}

#[derive(Serialize)]
struct ExtractSummary<'a> {
    version: &'static str,
    config_hash: String,
    seed: Option<u64>,
    locations: &'a [ExtractRow],
    mean_rms_ds_ns: Option<f64>,
    mean_multipaths: f64,
}

fn extract(
    pdps: &[PathBuf],
    pases: &[PathBuf],
    out_path: &Path,
    threshold_db: f64,
    snr_db: f64,
    xpr_min_snr_db: f64,
    out: &mut (dyn Write + Send),
) -> Outcome {
    let mut by_loc: BTreeMap<String, (Vec<PdpFile>, Vec<PasFile>)> = BTreeMap::new();
    for p in pdps {
        let f = PdpFile::read(p)?;
        by_loc.entry(f.location_id.clone()).or_default().0.push(f);
    }
    for p in pases {
        let f = PasFile::read(p)?;
        by_loc.entry(f.location_id.clone()).or_default().1.push(f);
    }
    let mut rows = Vec::new();
    for (loc, (pdp, pas)) in &by_loc {
        let Some(first) = pdp.first() else {
            return Err(Failure::Data(ChannelError::invalid(format!("location {loc} has angular spectra but no PDP"))));
        };
        if pdp.iter().any(|p| p.frequency_ghz != first.frequency_ghz) {
            return Err(Failure::Data(ChannelError::invalid(format!("location {loc} mixes carrier frequencies"))));
        }
        let vv = pdp.iter().find(|p| p.polarization == Polarization::Vv);
        let vh = pdp.iter().find(|p| p.polarization == Polarization::Vh);
        let main = vv.unwrap_or(first);
        let ds = rms_delay_spread(&main.pdp, threshold_db)?;
        let k = match k_factor_pdp(&main.pdp, threshold_db) {
            Ok(k) => Some(k),
            Err(ChannelError::SingularKFactor) => None,
            Err(e) => return Err(e.into()),
        };
        let counts: Vec<f64> = pdp.iter().map(|p| count_directional_multipaths(&p.pdp, snr_db) as f64).collect();
        let xpr_mean_db = match (vv, vh) {
            (Some(a), Some(b)) => {
                let x = xpr_per_bin(&a.pdp, &b.pdp, xpr_min_snr_db)?;
                (!x.is_empty()).then(|| x.iter().sum::<f64>() / x.len() as f64)
            }
            _ => None,
        };
        let spreads = |d: AngleDomain| -> crate::Result<Option<crate::lsp::GlobalSpreads>> {
            pas.iter().find(|p| p.domain == d).map(|p| pas_global_spreads(&p.pas, threshold_db)).transpose()
        };
        let (aoa, aod) = (spreads(AngleDomain::Aoa)?, spreads(AngleDomain::Aod)?);
        rows.push(ExtractRow {
            record: LspRecord {
                location_id: loc.clone(),
                tr_separation_m: None,
                asd_deg: aod.map(|s| s.azimuth_deg),
                asa_deg: aoa.map(|s| s.azimuth_deg),
                zsa_deg: aoa.map(|s| s.zenith_deg),
                rms_ds_ns: Some(ds),
                sf_db: None,
                k_factor_db: k,
            },
            frequency_ghz: first.frequency_ghz,
            num_profiles: pdp.len(),
            mean_multipaths: counts.iter().sum::<f64>() / counts.len() as f64,
            xpr_mean_db,
            zsd_deg: aod.map(|s| s.zenith_deg),
        });
    }
    let hash = options_hash(&(pdps, pases, threshold_db, snr_db, xpr_min_snr_db));
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| x.to_string());
    let mut table = String::new();
    let _ = writeln!(table, "# mmw-lsp v1");
    let _ = writeln!(table, "# version = {}", crate::VERSION);
    let _ = writeln!(table, "# config_hash = {hash}");
    let _ = writeln!(table, "# seed = -");
    let _ = writeln!(
        table,
        "location_id,frequency_ghz,rms_ds_ns,k_factor_db,asd_deg,zsd_deg,asa_deg,zsa_deg,xpr_mean_db,num_profiles,mean_multipaths"
    );
    for r in &rows {
        let _ = writeln!(
            table,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.record.location_id,
            r.frequency_ghz,
            opt(r.record.rms_ds_ns),
            opt(r.record.k_factor_db),
            opt(r.record.asd_deg),
            opt(r.zsd_deg),
            opt(r.record.asa_deg),
            opt(r.record.zsa_deg),
            opt(r.xpr_mean_db),
            r.num_profiles,
            r.mean_multipaths
        );
    }
    write_text(out_path, &table)?;
    let ds: Vec<f64> = rows.iter().filter_map(|r| r.record.rms_ds_ns).collect();
    let summary = ExtractSummary {
        version: crate::VERSION,
        config_hash: hash,
        seed: None,
        locations: &rows,
        mean_rms_ds_ns: (!ds.is_empty()).then(|| ds.iter().sum::<f64>() / ds.len() as f64),
        mean_multipaths: rows.iter().map(|r| r.mean_multipaths).sum::<f64>() / rows.len().max(1) as f64,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    write_text(&out_path.with_extension("json"), &json)?;
    let _ = write!(out, "{table}");
    Ok(())
}

#[derive(Serialize)]
struct ClusterReport {
    version: &'static str,
    config_hash: String,
    seed: u64,
    method: &'static str,
    num_paths: usize,
    num_clusters: usize,
    labels: Vec<usize>,
    pruned: Vec<bool>,
    scores: Vec<KScore>,
    stats: ClusterStats,
}

fn parse_k_range(s: &str) -> std::result::Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("--k-range expects 'a..b', got '{s}'"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a < 2 {
        return Err(Failure::Usage(
            "K=1 cannot be searched: the Calinski-Harabasz index is undefined at K=1 (its between-cluster term \
             divides by K-1); start the range at 2"
                .into(),
        ));
    }
    if b < a {
        return Err(Failure::Usage(format!("empty --k-range {s}")));
    }
    Ok((a, b))
}

#[allow(clippy::too_many_arguments)]
fn cluster(
    paths_file: &Path,
    method: Method,
    k_range: &str,
    seed: u64,
    restarts: usize,
    zeta: f64,
    void_ns: f64,
    out_path: Option<&Path>,
    out: &mut (dyn Write + Send),
) -> Outcome {
    if method == Method::Kpm {
        parse_k_range(k_range)?;
        if restarts == 0 {
            return Err(Failure::Usage("--restarts must be at least 1".into()));
        }
    }
    let file = CirFile::read(paths_file)?;
    let paths = file.cir.paths();
    let hash = options_hash(&(paths_file, method == Method::Kpm, k_range, restarts, zeta, void_ns));
    let (partition, scores) = match method {
        Method::Kpm => {
            let (a, b) = parse_k_range(k_range)?;
            let params = McdParams::from_paths(paths, zeta)?;
            let sel = select_optimal_k(paths, a..=b, &params, restarts, seed)?;
            (sel.partition, sel.scores)
        }
        Method::Tcsl => {
            let delays: Vec<f64> = paths.iter().map(|p| p.delay_ns).collect();
            let powers: Vec<f64> = paths.iter().map(|p| p.power_mw).collect();
            let mut labels = vec![0; paths.len()];
            for (c, tc) in partition_delays(&delays, &powers, void_ns)?.iter().enumerate() {
                for &m in &tc.members {
                    labels[m] = c;
                }
            }
            let params = McdParams::from_paths(paths, zeta)?;
            (ClusterPartition::from_labels(paths, labels, vec![false; paths.len()], &params), Vec::new())
        }
    };
    let stats = cluster_statistics(&partition, paths)?;
    let report = ClusterReport {
        version: crate::VERSION,
        config_hash: hash,
        seed,
        method: if method == Method::Kpm { "kpm" } else { "tcsl" },
        num_paths: paths.len(),
        num_clusters: partition.k(),
        labels: partition.assignments.clone(),
        pruned: partition.pruned.clone(),
        scores,
        stats,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    match out_path {
        Some(p) => {
            write_text(p, &json)?;
            let _ = writeln!(out, "{} clusters over {} paths ({})", report.num_clusters, report.num_paths, report.method);
        }
        None => {
            let _ = write!(out, "{json}");
        }
    }
    Ok(())
}

fn generate(
    scenario: &str,
    count: usize,
    seed: u64,
    dir: &Path,
    power_floor_db: Option<f64>,
    model: CountModelArg,
    out: &mut (dyn Write + Send),
) -> Outcome {
    if count == 0 {
        return Err(Failure::Usage("--count must be at least 1".into()));
    }
    let (name, params) = resolve_scenario(scenario).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut config = GeneratorConfig::new(name, params, seed);
    config.min_subpath_power_db = power_floor_db;
    config.count_model = match model {
        CountModelArg::RoundedGaussian => CountModel::RoundedGaussian,
        CountModelArg::Poisson => CountModel::Poisson,
    };
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let ensemble = Generator::new(config.clone())?.ensemble(count)?;
    let manifest = write_ensemble(dir, &config, &ensemble)?;
    let _ = writeln!(
        out,
        "wrote {} impulse responses for {} to {} (mmwchan {}, config {}, seed {})",
        manifest.count,
        manifest.scenario,
        dir.display(),
        manifest.version,
        manifest.config_hash,
        manifest.seed
    );
    Ok(())
}

fn validate(dir: &Path, scenario: Option<&str>, scale: f64, out_path: Option<&Path>, out: &mut (dyn Write + Send)) -> Outcome {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Failure::Usage("--tolerance-scale must be positive".into()));
    }
    let (manifest, ensemble) = read_ensemble(dir)?;
    let (name, params) = match scenario {
        Some(s) => resolve_scenario(s).map_err(|e| Failure::Usage(e.to_string()))?,
        None => (manifest.scenario.clone(), manifest.config.scenario.clone()),
    };
    let tol = Tolerances { multiplier: scale, ..Tolerances::default() };
    let info = manifest.info();
    let report: ValidationReport = if info.frequency_ghz == params.frequency_ghz {
        validate_ensemble(&ensemble, &info, &name, &params, &tol)?
    } else {
        let mut r = validate_statistics(&ensemble, &name, &params, &tol)?;
        r.seed = info.seed;
        r.config_hash = info.config_hash.clone();
        r.warnings.push(format!(
            "ensemble '{}' was generated at {} GHz but is compared with a {} GHz scenario",
            manifest.scenario, info.frequency_ghz, params.frequency_ghz
        ));
        r.pass = false;
        r
    };
    let path = out_path.map_or_else(|| dir.join("validation.json"), Path::to_path_buf);
    write_text(&path, &(report.to_json() + "\n"))?;
    let _ = write!(out, "{}", report.to_text());
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Validation)
    }
}
