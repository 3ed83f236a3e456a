//! `curvlab` command line.
//!
//! Exit status: 0 on success, 2 for usage and parse errors, 3 when a
//! numerical precondition fails.

mod report;
mod space;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use curvlab::biquot::{esch_horizontal_flat_sampler, BazaikinParams, EschenburgParams};
use curvlab::census::{
    baz_census, esch_census, find_coincidences_external, read_census, write_census, CensusFilter, CensusFormat,
};
use curvlab::optimize::{linspace, min_sectional, optimize_family, pinching_of, Budget, MetricFamily};
use curvlab::par::Exec;
use curvlab::spaces::{GtFamily, W6DiagonalFamily};

use report::{Envelope, OutputFormat, Tolerance};
use space::{SpaceFamily, SpaceSpec, GRAMMAR};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] curvlab::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use curvlab::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                E::UnsupportedAlgebra { .. }
                | E::DimensionMismatch { .. }
                | E::UnknownSubalgebra(_)
                | E::InvalidParameter(_)
                | E::SumMismatch { .. }
                | E::NotCoprime { .. }
                | E::EmptyBudget
                | E::EmptyGrid
                | E::Parse { .. } => 2,
                E::Io(_) => 1,
                _ => 3,
            },
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "curvlab", version, about = "Curvature and biquotient computations", after_help = GRAMMAR)]
struct Cli {
    /// Worker threads for sampling and census loops.
    #[arg(long, global = true, env = "CURVLAB_THREADS")]
    threads: Option<usize>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sectional curvature extrema of a space.
    #[command(after_help = GRAMMAR)]
    Minsec(SpaceArgs),
    /// Pinching min/max of a space, optionally optimized over a metric family.
    #[command(after_help = GRAMMAR)]
    Pinch(PinchArgs),
    /// Eschenburg biquotients.
    #[command(subcommand)]
    Esch(EschCommand),
    /// Bazaikin biquotients.
    #[command(subcommand)]
    Baz(BazCommand),
    /// Group free census records sharing |r|.
    Coincide(CoincideArgs),
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget::new(self.samples, self.restarts, self.max_iter)
    }
}

#[derive(Args)]
struct SpaceArgs {
    /// Space specification, see below.
    #[arg(long)]
    space: String,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    /// Independent root-space scales on flag:su3/t2 (third scale pinned to 1).
    Diagonal,
    /// The one-parameter family g_t.
    Gt,
}

#[derive(Args)]
struct PinchArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Maximize pinching over a metric family instead of using the given metric.
    #[arg(long, value_enum)]
    optimize_family: Option<FamilyKind>,
    /// Grid points per free family parameter.
    #[arg(long, default_value_t = 8)]
    grid: usize,
    /// Samples per family evaluation during the search.
    #[arg(long, default_value_t = 20_000)]
    family_samples: usize,
    /// Descent restarts per family evaluation during the search.
    #[arg(long, default_value_t = 8)]
    family_restarts: usize,
    /// Coordinate refinement sweeps after the grid scan.
    #[arg(long, default_value_t = 2)]
    refine_rounds: usize,
    /// Objective evaluations per golden-section line search.
    #[arg(long, default_value_t = 10)]
    line_evals: usize,
}

fn parse_ints<const N: usize>(s: &str) -> Result<[i64; N], String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| format!("bad integer `{x}`")))
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|v: Vec<i64>| format!("expected {N} comma-separated integers, got {}", v.len()))
}

#[derive(Args)]
struct EschTuple {
    /// Left weights k1,k2,k3.
    #[arg(long, value_parser = parse_ints::<3>, allow_hyphen_values = true)]
    k: [i64; 3],
    /// Right weights l1,l2,l3 (same sum as k).
    #[arg(long, value_parser = parse_ints::<3>, allow_hyphen_values = true)]
    l: [i64; 3],
}

impl EschTuple {
    fn params(&self) -> CliResult<EschenburgParams> {
        Ok(EschenburgParams::new(self.k, self.l)?)
    }
}

#[derive(Args)]
struct CensusArgs {
    /// Entry bound.
    #[arg(long)]
    bound: i64,
    /// Output file.
    #[arg(long)]
    out: PathBuf,
    /// File format; defaults from the extension.
    #[arg(long = "file-format", value_enum)]
    file_format: Option<FileFormat>,
    #[arg(long)]
    free_only: bool,
    #[arg(long)]
    positive_only: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FileFormat {
    Csv,
    Jsonl,
}

impl CensusArgs {
    fn format(&self) -> CensusFormat {
        match self.file_format {
            Some(FileFormat::Csv) => CensusFormat::Csv,
            Some(FileFormat::Jsonl) => CensusFormat::Jsonl,
            None => CensusFormat::from_path(&self.out),
        }
    }

    fn filter(&self) -> CensusFilter {
        CensusFilter {
            free_only: self.free_only,
            positive_only: self.positive_only,
        }
    }
}

#[derive(Subcommand)]
enum EschCommand {
    /// Freeness, positivity and |H^4| of one tuple.
    Check(EschTuple),
    /// Search for horizontal flat planes by sampling.
    Sample {
        #[command(flatten)]
        tuple: EschTuple,
        #[arg(long, default_value_t = 0.7)]
        t: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Enumerate canonical tuples with entries bounded by --bound.
    Census {
        #[command(flatten)]
        args: CensusArgs,
        /// Keep tuples as enumerated instead of canonical representatives.
        #[arg(long)]
        raw: bool,
    },
}

#[derive(Subcommand)]
enum BazCommand {
    /// Freeness, positivity and |H^6| of one tuple.
    Check {
        /// q1,...,q5.
        #[arg(long, value_parser = parse_ints::<5>, allow_hyphen_values = true)]
        q: [i64; 5],
    },
    /// Enumerate canonical tuples with entries bounded by --bound.
    Census(CensusArgs),
}

#[derive(Args)]
struct CoincideArgs {
    /// Census files (CSV or JSONL by extension).
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Records held in memory per sorted run.
    #[arg(long, default_value_t = 1_000_000)]
    chunk: usize,
}

fn configure_threads(threads: Option<usize>) -> CliResult<()> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(CliError::Usage("--threads must be positive".into()));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(())
}

fn exec() -> Exec {
    Exec::Parallel
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads(cli.threads)?;
    let fmt = cli.format;
    match cli.command {
        Command::Minsec(a) => minsec(&a, fmt),
        Command::Pinch(a) => pinch(&a, fmt),
        Command::Esch(c) => esch(c, fmt),
        Command::Baz(c) => baz(c, fmt),
        Command::Coincide(a) => coincide(&a, fmt),
    }
}

fn minsec(a: &SpaceArgs, fmt: OutputFormat) -> CliResult<()> {
    let spec: SpaceSpec = a.space.parse()?;
    let ev = spec.resolve()?;
    let budget = a.budget.budget().with_exec(exec());
    let f = |x: &_, y: &_| ev.eval(x, y);
    let ext = min_sectional(&f, ev.dim(), &budget, a.budget.seed)?;
    let env = Envelope::numeric("minsec", &a.space, a.budget.seed, budget, Tolerance::default(), &ext);
    report::emit(fmt, &env, || report::extrema_text(&a.space, &ext))
}

fn family_for(spec: &SpaceSpec, kind: FamilyKind) -> CliResult<Box<dyn MetricFamily>> {
    match kind {
        FamilyKind::Diagonal => {
            if spec.family != SpaceFamily::Flag || !spec.params.is_empty() {
                return Err(CliError::Usage(
                    "--optimize-family diagonal needs --space flag:su3/t2".into(),
                ));
            }
            Ok(Box::new(W6DiagonalFamily::new([(0.1, 3.0), (0.1, 3.0), (1.0, 1.0)])?))
        }
        FamilyKind::Gt => {
            if !matches!(spec.family, SpaceFamily::Flag | SpaceFamily::AloffWallach(..)) || !spec.params.is_empty() {
                return Err(CliError::Usage(
                    "--optimize-family gt needs flag:su3/t2 or aw:p,q without keys".into(),
                ));
            }
            let hs = spec.homogeneous()?.expect("quotient family");
            Ok(Box::new(GtFamily {
                spec: hs,
                range: (0.05, 1.3),
            }))
        }
    }
}

fn family_grid(kind: FamilyKind, n: usize) -> Vec<Vec<f64>> {
    match kind {
        FamilyKind::Diagonal => {
            let axis = linspace(0.25, 2.0, n);
            axis.iter()
                .flat_map(|&a| axis.iter().map(move |&b| vec![a, b, 1.0]))
                .collect()
        }
        FamilyKind::Gt => linspace(0.1, 1.25, n).into_iter().map(|t| vec![t]).collect(),
    }
}

fn pinch(a: &PinchArgs, fmt: OutputFormat) -> CliResult<()> {
    let sa = &a.space;
    let spec: SpaceSpec = sa.space.parse()?;
    let budget = sa.budget.budget().with_exec(exec());
    let seed = sa.budget.seed;
    let (ext, family) = match a.optimize_family {
        None => {
            let ev = spec.resolve()?;
            let f = |x: &_, y: &_| ev.eval(x, y);
            (min_sectional(&f, ev.dim(), &budget, seed)?, None)
        }
        Some(kind) => {
            let fam = family_for(&spec, kind)?;
            let grid = family_grid(kind, a.grid);
            let inner = Budget::new(a.family_samples, a.family_restarts, sa.budget.max_iter).with_exec(exec());
            let opt = optimize_family(fam.as_ref(), &grid, &inner, seed, a.refine_rounds, a.line_evals)?;
            let f = fam.curvature(&opt.best_params)?;
            let ext = min_sectional(&f, fam.plane_dim(), &budget, seed)?;
            (ext, Some(opt))
        }
    };
    let delta = pinching_of(&ext)?;
    let result = report::PinchResult {
        pinching: delta,
        extrema: &ext,
        family: family.as_ref(),
    };
    let env = Envelope::numeric("pinch", &sa.space, seed, budget, Tolerance::default(), &result);
    report::emit(fmt, &env, || report::pinch_text(&sa.space, &result))
}

fn esch(c: EschCommand, fmt: OutputFormat) -> CliResult<()> {
    match c {
        EschCommand::Check(t) => {
            let p = t.params()?;
            let r = report::EschCheck::new(&p);
            report::emit(fmt, &Envelope::plain("esch check", &r), || r.text())
        }
        EschCommand::Sample {
            tuple,
            t,
            samples,
            seed,
        } => {
            let p = tuple.params()?;
            let rep = esch_horizontal_flat_sampler(&p, t, samples, seed, exec())?;
            let budget = Budget::new(samples, 0, 0);
            let space = format!("esch:{:?};{:?}", p.k, p.l);
            let env = Envelope::numeric("esch sample", &space, seed, budget, Tolerance::default(), &rep);
            report::emit(fmt, &env, || report::sample_text(&rep))
        }
        EschCommand::Census { args, raw } => {
            check_bound(args.bound)?;
            let stream = esch_census(args.bound, !raw, args.filter(), exec());
            let n = write_census(stream, &args.out, args.format())?;
            let r = report::CensusSummary::new("eschenburg", args.bound, n, &args.out);
            report::emit(fmt, &Envelope::plain("esch census", &r), || r.text())
        }
    }
}

fn check_bound(bound: i64) -> CliResult<()> {
    if bound < 0 {
        return Err(CliError::Usage(format!("--bound must be nonnegative, got {bound}")));
    }
    Ok(())
}

fn baz(c: BazCommand, fmt: OutputFormat) -> CliResult<()> {
    match c {
        BazCommand::Check { q } => {
            let r = report::BazCheck::new(&BazaikinParams { q });
            report::emit(fmt, &Envelope::plain("baz check", &r), || r.text())
        }
        BazCommand::Census(args) => {
            check_bound(args.bound)?;
            let stream = baz_census(args.bound, args.filter(), exec());
            let n = write_census(stream, &args.out, args.format())?;
            let r = report::CensusSummary::new("bazaikin", args.bound, n, &args.out);
            report::emit(fmt, &Envelope::plain("baz census", &r), || r.text())
        }
    }
}

fn coincide(a: &CoincideArgs, fmt: OutputFormat) -> CliResult<()> {
    let mut records = Vec::new();
    for path in &a.inputs {
        records.extend(read_census(path)?);
    }
    let mut groups = Vec::new();
    find_coincidences_external(records, a.chunk, |g| {
        groups.push(g);
        Ok(())
    })?;
    let r = report::Coincidences { groups };
    report::emit(fmt, &Envelope::plain("coincide", &r), || r.text())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(
            CliError::from(curvlab::Error::SumMismatch { k_sum: 1, l_sum: 2 }).exit_code(),
            2
        );
        assert_eq!(CliError::from(curvlab::Error::NonPositiveMax(0.0)).exit_code(), 3);
        assert_eq!(CliError::from(curvlab::Error::DegeneratePlane(0.0)).exit_code(), 3);
        assert_eq!(
            CliError::from(curvlab::Error::NotRightInvariant { defect: 1.0 }).exit_code(),
            3
        );
    }

    #[test]
    fn integer_lists() {
        assert_eq!(parse_ints::<3>("1, -2,3"), Ok([1, -2, 3]));
        assert!(parse_ints::<3>("1,2").is_err());
        assert!(parse_ints::<5>("1,2,3,4,x").is_err());
    }

    #[test]
    fn diagonal_grid_pins_third_scale() {
        let g = family_grid(FamilyKind::Diagonal, 4);
        assert_eq!(g.len(), 16);
        assert!(g.iter().all(|p| p[2] == 1.0));
    }
}
