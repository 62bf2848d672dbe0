//! Command-line front end. The `limitper` binary forwards to [`run`].

pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::chair::ChairWeights;
use crate::dyadic::{chair_module_enumerate, pd_module_enumerate, Complex, Interval};
use crate::numerics::{fixed_point_cube, NumericsError, WeightedComb};
use crate::peaks::{chair_peaks, empirical_peaks, pd_peaks};
use crate::period_doubling::PdWeights;
use crate::subst::{
    builtin, find_legal_seed, fixed_point_window, legal_power, parse_rules, Kind, Seed, SubstError,
    SubstitutionSystem,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest power searched when a rule file needs a legal seed.
const SEED_SEARCH_POWER: u32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Subst(#[from] SubstError),
    #[error("{path}: {source}")]
    RuleFile {
        path: PathBuf,
        #[source]
        source: SubstError,
    },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("verification failed: {0}")]
    VerifyFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) => EXIT_VERIFY_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "limitper", version, about = "Limit-periodic substitution patterns and their diffraction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the fixed-point window around the origin.
    Generate(CommonArgs),
    /// Write peaks.csv and diffraction.svg for a region of the Fourier module.
    Diffract(CommonArgs),
    /// Run the built-in check suite and write a report.
    Verify(CommonArgs),
    /// List the Fourier module points in a region.
    Module(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Pgm,
    Txt,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// `period-doubling`, `chair`, or a rule file path.
    #[arg(long, default_value = "period-doubling")]
    system: String,
    /// Comma-separated complex weights, one per label (`1`, `-i`, `0.5+0.5i`).
    #[arg(long, allow_hyphen_values = true)]
    weights: Option<String>,
    /// Comma-separated seed labels; 2D seeds list the top row first.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long, default_value_t = 3)]
    iterations: u32,
    /// Half-width N of the `[-N, N]^d` window used for empirical sums.
    #[arg(long)]
    window: Option<usize>,
    /// Largest denominator exponent in 1D.
    #[arg(long)]
    rmax: Option<u32>,
    /// Largest denominator exponent in 2D.
    #[arg(long)]
    smax: Option<u32>,
    /// `lo,hi` or `lo,hi,lo2,hi2`; brackets such as `[0,1)` set openness.
    #[arg(long, allow_hyphen_values = true)]
    region: Option<String>,
    /// Smallest intensity written to peak lists.
    #[arg(long, default_value_t = 1e-8)]
    floor: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Estimate amplitudes from a window instead of closed forms.
    #[arg(long)]
    empirical: bool,
    /// Reduced verification sizes.
    #[arg(long)]
    quick: bool,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Corrupts the verification weights table; negative control.
    #[arg(long, hide = true)]
    tamper: bool,
}

/// Which system a run talks about.
#[derive(Debug, Clone)]
pub enum SystemChoice {
    PeriodDoubling,
    Chair,
    RuleFile {
        path: PathBuf,
        system: SubstitutionSystem,
    },
}

impl SystemChoice {
    pub fn resolve(name: &str) -> Result<SystemChoice, CliError> {
        match name {
            "period-doubling" | "pd" => Ok(SystemChoice::PeriodDoubling),
            "chair" => Ok(SystemChoice::Chair),
            path => {
                let path = PathBuf::from(path);
                let text = fs::read_to_string(&path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                let system = parse_rules(&text).map_err(|source| CliError::RuleFile {
                    path: path.clone(),
                    source,
                })?;
                Ok(SystemChoice::RuleFile { path, system })
            }
        }
    }

    pub fn system(&self) -> SubstitutionSystem {
        match self {
            SystemChoice::PeriodDoubling => builtin::period_doubling(),
            SystemChoice::Chair => builtin::chair(),
            SystemChoice::RuleFile { system, .. } => system.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SystemChoice::PeriodDoubling => 1,
            SystemChoice::Chair => 2,
            SystemChoice::RuleFile { system, .. } => system.dim(),
        }
    }
}

/// Validated settings for one command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub system: SystemChoice,
    pub seed: Option<Seed>,
    pub weights: Vec<Complex>,
    pub iterations: u32,
    pub window: usize,
    pub cutoff: u32,
    pub region: Vec<Interval>,
    pub floor: f64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub empirical: bool,
    pub quick: bool,
    pub tamper: bool,
}

fn default_weights(system: &SystemChoice, n: usize) -> Vec<Complex> {
    match system {
        SystemChoice::Chair => ChairWeights::powers_of_i().alpha.to_vec(),
        _ => (0..n)
            .map(|i| if i == 0 { Complex::new(1.0, 0.0) } else { Complex::new(0.0, 0.0) })
            .collect(),
    }
}

impl RunConfig {
    fn from_args(args: CommonArgs) -> Result<RunConfig, CliError> {
        let system = SystemChoice::resolve(&args.system)?;
        let sub = system.system();
        let dim = system.dim();
        let n = sub.alphabet().len();
        let weights = match &args.weights {
            Some(text) => parse_weights(text)?,
            None => default_weights(&system, n),
        };
        if weights.len() != n {
            return Err(usage(format!(
                "{} weights given for an alphabet of {n} labels",
                weights.len()
            )));
        }
        let seed = args.seed.as_deref().map(|s| parse_seed(&sub, s)).transpose()?;
        if !(args.floor >= 0.0) {
            return Err(usage("--floor must be a non-negative number"));
        }
        let cutoff = match dim {
            1 => {
                if args.smax.is_some() {
                    return Err(usage("--smax applies to 2D systems; use --rmax"));
                }
                args.rmax.unwrap_or(8)
            }
            _ => {
                if args.rmax.is_some() {
                    return Err(usage("--rmax applies to 1D systems; use --smax"));
                }
                args.smax.unwrap_or(5)
            }
        };
        if cutoff > 30 {
            return Err(usage("module cutoff must be at most 30"));
        }
        let region = match &args.region {
            Some(text) => parse_region(text, dim)?,
            None if dim == 1 => vec![Interval::closed(0.0, 1.0).expect("valid interval")],
            None => vec![Interval::closed(-1.0, 1.0).expect("valid interval"); 2],
        };
        let window = args.window.unwrap_or(if dim == 1 { 1 << 20 } else { 1024 });
        Ok(RunConfig {
            system,
            seed,
            weights,
            iterations: args.iterations,
            window,
            cutoff,
            region,
            floor: args.floor,
            out: args.out,
            format: args.format,
            empirical: args.empirical,
            quick: args.quick,
            tamper: args.tamper,
        })
    }

    /// The seed and the power of the rule that fixes it.
    pub fn seed_and_power(&self) -> Result<(Seed, u32), CliError> {
        let sub = self.system.system();
        let seed = match (&self.seed, &self.system) {
            (Some(s), _) => s.clone(),
            (None, SystemChoice::PeriodDoubling) => builtin::period_doubling_seed(),
            (None, SystemChoice::Chair) => builtin::chair_seed(),
            (None, SystemChoice::RuleFile { .. }) => {
                return find_legal_seed(&sub, SEED_SEARCH_POWER)
                    .ok_or_else(|| usage("no legal seed found for this rule file"));
            }
        };
        let p = legal_power(&sub, &seed, SEED_SEARCH_POWER).ok_or(SubstError::IllegalSeed)?;
        Ok((seed, p))
    }
}

fn parse_weights(text: &str) -> Result<Vec<Complex>, CliError> {
    text.split(',')
        .map(|w| {
            let w = w.trim();
            Complex::from_str(w).map_err(|_| usage(format!("invalid complex weight `{w}`")))
        })
        .collect()
}

fn parse_seed(system: &SubstitutionSystem, text: &str) -> Result<Seed, CliError> {
    let names: Vec<&str> = text
        .split(|c: char| c == ',' || c == '|' || c == '/' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    let dim = system.dim();
    if names.len() != 1 << dim {
        return Err(usage(format!("a {dim}D seed needs {} labels", 1 << dim)));
    }
    let labels = names
        .iter()
        .map(|n| {
            system
                .label_of(n)
                .ok_or_else(|| usage(format!("unknown seed label `{n}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match dim {
        1 => Seed::word(labels[0], labels[1]),
        _ => Seed::block([labels[0], labels[1]], [labels[2], labels[3]]),
    })
}

fn parse_number(text: &str) -> Result<f64, CliError> {
    let bad = || usage(format!("invalid number `{text}`"));
    let value = match text.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            p / q
        }
        None => text.trim().parse().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Parses `lo,hi[,lo2,hi2]`. Each pair may be bracketed, as in `[0,1)`;
/// unbracketed pairs are closed.
pub fn parse_region(text: &str, dim: usize) -> Result<Vec<Interval>, CliError> {
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut intervals = Vec::new();
    let mut rest = text.as_str();
    while !rest.is_empty() {
        rest = rest.strip_prefix(',').unwrap_or(rest);
        let (lo_closed, body_start) = match rest.chars().next() {
            Some('[') => (true, 1),
            Some('(') => (false, 1),
            _ => (true, 0),
        };
        let body = &rest[body_start..];
        let (pair, hi_closed, consumed) = if body_start == 1 {
            let end = body
                .find([']', ')'])
                .ok_or_else(|| usage(format!("unterminated interval in `{text}`")))?;
            (&body[..end], body.as_bytes()[end] == b']', body_start + end + 1)
        } else {
            let mut commas = body.match_indices(',').map(|(i, _)| i);
            let _first = commas.next();
            let end = commas.next().unwrap_or(body.len());
            (&body[..end], true, end)
        };
        let (lo, hi) = pair
            .split_once(',')
            .ok_or_else(|| usage(format!("interval `{pair}` needs lo,hi")))?;
        let interval = Interval::new(parse_number(lo)?, parse_number(hi)?, lo_closed, hi_closed)
            .map_err(|e| usage(e.to_string()))?;
        intervals.push(interval);
        rest = &rest[consumed..];
    }
    if intervals.len() != dim {
        return Err(usage(format!(
            "--region needs {dim} interval(s) for a {dim}D system"
        )));
    }
    Ok(intervals)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, contents),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

pub fn cmd_generate(cfg: &RunConfig) -> Result<(), CliError> {
    let sub = cfg.system.system();
    let (seed, power) = cfg.seed_and_power()?;
    let window = fixed_point_window(&sub.power(power), &seed, cfg.iterations)?;
    match sub.kind() {
        Kind::Word => {
            if matches!(cfg.format, Some(f) if f != Format::Txt) {
                return Err(usage("1D patterns are written as txt"));
            }
            emit(cfg.out.as_deref(), &output::word_text(&sub, &window))
        }
        Kind::Block => {
            let grid = output::grid_text(&sub, &window);
            let image = output::pgm(&window, sub.alphabet().len());
            match (cfg.format, cfg.out.as_deref()) {
                (Some(Format::Txt), out) => emit(out, &grid),
                (Some(Format::Pgm), out) => emit(out, &image),
                (None, Some(path)) => {
                    write_file(path, &image)?;
                    write_file(&path.with_extension("txt"), &grid)
                }
                (None, None) => emit(None, &grid),
                _ => Err(usage("2D patterns are written as pgm or txt")),
            }
        }
    }
}

pub fn cmd_diffract(cfg: &RunConfig) -> Result<(), CliError> {
    let builtin = !matches!(cfg.system, SystemChoice::RuleFile { .. });
    if !builtin && !cfg.empirical {
        return Err(usage(
            "closed-form amplitudes exist only for the built-in systems; pass --empirical",
        ));
    }
    let sub = cfg.system.system();
    if cfg.empirical && !sub.factor().is_power_of_two() {
        return Err(usage(
            "empirical diffraction needs a power-of-two inflation factor",
        ));
    }
    let (csv, svg) = if cfg.system.dim() == 1 {
        let region = &cfg.region[0];
        let peaks = if cfg.empirical {
            let comb = empirical_comb(cfg)?;
            empirical_peaks(&comb, &pd_module_enumerate(cfg.cutoff, region), cfg.floor)?
        } else {
            let w = PdWeights::new(cfg.weights[0], cfg.weights[1]);
            pd_peaks(cfg.cutoff, region, &w, cfg.floor)
        };
        (output::peaks_csv_1d(&peaks), output::stem_svg(&peaks, region))
    } else {
        let (xs, ys) = (&cfg.region[0], &cfg.region[1]);
        let peaks = if cfg.empirical {
            let comb = empirical_comb(cfg)?;
            empirical_peaks(&comb, &chair_module_enumerate(cfg.cutoff, xs, ys), cfg.floor)?
        } else {
            let alpha: [Complex; 4] = cfg.weights[..4].try_into().expect("four weights");
            chair_peaks(cfg.cutoff, xs, ys, &ChairWeights::new(alpha), cfg.floor)
        };
        (output::peaks_csv_2d(&peaks), output::disc_svg(&peaks, xs, ys))
    };
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    match cfg.format {
        None => {
            write_file(&dir.join("peaks.csv"), &csv)?;
            write_file(&dir.join("diffraction.svg"), &svg)
        }
        Some(Format::Csv) => write_file(&dir.join("peaks.csv"), &csv),
        Some(Format::Svg) => write_file(&dir.join("diffraction.svg"), &svg),
        Some(_) => Err(usage("diffraction output is csv or svg")),
    }
}

fn empirical_comb(cfg: &RunConfig) -> Result<WeightedComb, CliError> {
    let (seed, power) = cfg.seed_and_power()?;
    let sub = cfg.system.system().power(power);
    let window = fixed_point_cube(&sub, &seed, cfg.window)?;
    Ok(WeightedComb::new(window, cfg.weights.clone())?)
}

pub fn cmd_module(cfg: &RunConfig) -> Result<(), CliError> {
    if matches!(cfg.format, Some(f) if f != Format::Csv) {
        return Err(usage("module listings are written as csv"));
    }
    let csv = if cfg.system.dim() == 1 {
        output::module_csv_1d(&pd_module_enumerate(cfg.cutoff, &cfg.region[0]))
    } else {
        output::module_csv_2d(&chair_module_enumerate(
            cfg.cutoff,
            &cfg.region[0],
            &cfg.region[1],
        ))
    };
    emit(cfg.out.as_deref(), &csv)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<(), CliError> {
    let opts = if cfg.quick {
        verify::SuiteOptions::quick()
    } else {
        verify::SuiteOptions::full()
    };
    let opts = verify::SuiteOptions {
        tamper: cfg.tamper,
        ..opts
    };
    let report = verify::run_suite(&opts);
    let text = report.render();
    if let Some(path) = &cfg.out {
        write_file(path, &text)?;
    }
    emit(None, &text)?;
    match report.first_failure() {
        Some(f) => Err(CliError::VerifyFailed(format!("{}: {}", f.name, f.detail))),
        None => Ok(()),
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let (command, args) = match cli.command {
        Command::Generate(a) => ("generate", a),
        Command::Diffract(a) => ("diffract", a),
        Command::Verify(a) => ("verify", a),
        Command::Module(a) => ("module", a),
    };
    let threads = args.threads;
    let cfg = RunConfig::from_args(args)?;
    let body = || match command {
        "generate" => cmd_generate(&cfg),
        "diffract" => cmd_diffract(&cfg),
        "verify" => cmd_verify(&cfg),
        _ => cmd_module(&cfg),
    };
    match threads {
        Some(0) => Err(usage("--threads must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| usage(e.to_string()))?
            .install(body),
        None => body(),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("limitper: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regions() {
        let r = parse_region("[0,1)", 1).unwrap();
        assert!(r[0].lo_closed && !r[0].hi_closed);
        let r = parse_region("-1,1,-1/2,1/2", 2).unwrap();
        assert_eq!((r[1].lo, r[1].hi), (-0.5, 0.5));
        assert!(r[1].hi_closed);
        let r = parse_region("[-1,1],(0,1]", 2).unwrap();
        assert!(!r[1].lo_closed);
        assert!(parse_region("0,1", 2).is_err());
        assert!(parse_region("1,0", 1).is_err());
        assert!(parse_region("[0,1", 1).is_err());
    }

    #[test]
    fn weights() {
        let w = parse_weights("1,-i, 0.5+0.25i,-2").unwrap();
        assert_eq!(w[1], Complex::new(0.0, -1.0));
        assert_eq!(w[2], Complex::new(0.5, 0.25));
        assert_eq!(w[3], Complex::new(-2.0, 0.0));
        assert!(parse_weights("1,x").is_err());
    }

    #[test]
    fn seeds() {
        let chair = builtin::chair();
        assert_eq!(parse_seed(&chair, "3,0,2,1").unwrap(), builtin::chair_seed());
        let pd = builtin::period_doubling();
        assert_eq!(parse_seed(&pd, "a|a").unwrap(), builtin::period_doubling_seed());
        assert!(parse_seed(&pd, "a,c").is_err());
        assert!(parse_seed(&pd, "a").is_err());
    }
}
