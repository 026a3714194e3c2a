//! The `dihedral` command line.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use dihedral_core::angles::{Angle, AngleDistribution};
use dihedral_core::classifier::{
    classify_literal, classify_via_strata, classify_with_witness, compare_classes, is_documented_divergence,
    ClassifierError, ComparisonReport, MonodromyClass, Verdict,
};
use dihedral_core::crosscheck::{crosscheck, CrosscheckReport, Grid};
use dihedral_core::exact::{format_rational, parse_rational, Exact, ParseError, Rational};
use dihedral_core::strata::{
    abelian_residues_realizable, quad_residues_realizable, AbelianResidueConfig, AbelianStratum, QuadResidueConfig,
    QuadraticStratum, StrataVerdict,
};
use dihedral_core::surfaces::{
    enumerate_surfaces, search_witness, EnumerationBounds, JenkinsStrebelSurface, SearchBounds, SearchOutcome,
    SurfaceReport, ValidationError,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "dihedral", version, about = "Cone spherical metrics with dihedral monodromy")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
    /// Worker threads for searches (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    /// "3/2" means 3π/2.
    Pi,
    /// "3/2" means 3π: values are fractions of a full turn.
    #[value(name = "2pi", alias = "turns")]
    TwoPi,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide realizability of an angle distribution.
    Classify(ClassifyArgs),
    /// Query the residue predicates of a stratum directly.
    Residues(ResiduesArgs),
    /// Validate and analyze a surface file.
    SurfaceCheck { file: PathBuf },
    /// Search for a hemispherical surface realizing a distribution.
    Witness(WitnessArgs),
    /// Compare both decision paths and the witness search over a grid.
    Crosscheck(CrosscheckArgs),
    /// List surfaces up to isomorphism.
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Args)]
pub struct DistributionArgs {
    #[arg(long, default_value_t = 0)]
    pub genus: u32,
    /// Comma-separated angles, e.g. `3/2,3/4` or `1/2+x` with `--gen x`.
    #[arg(long, allow_hyphen_values = true)]
    pub angles: String,
    #[arg(long, value_enum, default_value_t = Units::TwoPi)]
    pub units: Units,
    /// Declare a symbolic generator (repeatable).
    #[arg(long = "gen")]
    pub generators: Vec<String>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = SearchBounds::default().max_segments)]
    pub max_segments: usize,
    #[arg(long, default_value_t = SearchBounds::default().max_denominator)]
    pub max_denominator: u64,
    #[arg(long, default_value_t = SearchBounds::default().max_regular)]
    pub max_regular: usize,
}

impl BoundsArgs {
    fn bounds(&self) -> SearchBounds {
        SearchBounds {
            max_segments: self.max_segments,
            max_denominator: self.max_denominator,
            max_regular: self.max_regular,
        }
    }
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub dist: DistributionArgs,
    /// `coaxial`, `strict` or `any`.
    #[arg(long, default_value = "any")]
    pub class: MonodromyClass,
    /// Also search for a hemispherical witness.
    #[arg(long)]
    pub witness: bool,
    #[command(flatten)]
    pub bounds: BoundsArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Quadratic,
    Abelian,
}

#[derive(Debug, Args)]
pub struct ResiduesArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 0)]
    pub genus: u32,
    /// Orders of the zeros (and simple poles, for quadratic strata).
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    pub orders: String,
    /// One residue per pole: quadratic residues, or signed Abelian residues.
    #[arg(long, allow_hyphen_values = true)]
    pub residues: String,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub dist: DistributionArgs,
    #[arg(long, default_value = "strict")]
    pub class: MonodromyClass,
    #[command(flatten)]
    pub bounds: BoundsArgs,
    /// Write the surface file here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CrosscheckArgs {
    /// Angle values, in the chosen units.
    #[arg(long, default_value = "1/2,3/4,1,5/4,3/2,2,5/2,3")]
    pub coefficients: String,
    #[arg(long, value_enum, default_value_t = Units::TwoPi)]
    pub units: Units,
    #[arg(long, default_value_t = 4)]
    pub max_angles: usize,
    #[arg(long, default_value = "0,1,2")]
    pub genera: String,
    #[arg(long, default_value = "coaxial,strict")]
    pub classes: String,
    /// Also run the witness search on genus-0 cases.
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub bounds: BoundsArgs,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long, default_value_t = 4)]
    pub max_segments: usize,
    /// Allowed segment lengths, in turns.
    #[arg(long, default_value = "1,2")]
    pub lengths: String,
    /// Allowed cylinder circumferences, in turns.
    #[arg(long)]
    pub circumferences: Option<String>,
    /// Print only the number of surfaces.
    #[arg(long)]
    pub count: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Inconsistency(_) => 3,
        }
    }
}

impl From<ClassifierError> for CliError {
    fn from(e: ClassifierError) -> Self {
        match e {
            ClassifierError::Inconsistency(m) => CliError::Inconsistency(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// One structured document per invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub command: String,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub distribution: AngleDistribution,
    pub class: MonodromyClass,
    /// The authoritative verdict.
    pub verdict: Verdict,
    pub literal: Verdict,
    pub reduction: Verdict,
    pub paths_agree: bool,
    pub documented_divergence: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResiduesReport {
    pub stratum: String,
    pub verdict: StrataVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SurfaceCheckReport {
    Valid {
        report: SurfaceReport,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        distribution: Option<AngleDistribution>,
    },
    Invalid {
        errors: Vec<ValidationError>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub distribution: AngleDistribution,
    pub class: MonodromyClass,
    pub outcome: SearchOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckSummary {
    pub summary: String,
    pub report: CrosscheckReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerateReport {
    pub count: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub surfaces: Vec<JenkinsStrebelSurface>,
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Splits a comma-separated list, reporting the column of a bad entry.
fn split_list<T>(
    text: &str,
    what: &str,
    mut parse: impl FnMut(&str) -> Result<T, ParseError>,
) -> Result<Vec<T>, CliError> {
    let mut out = Vec::new();
    if text.trim().is_empty() {
        return Ok(out);
    }
    let mut column = 0;
    for (i, item) in text.split(',').enumerate() {
        match parse(item) {
            Ok(v) => out.push(v),
            Err(e) => {
                return Err(CliError::Usage(format!(
                    "{what} {} at column {}: {}",
                    i + 1,
                    column + e.position + 1,
                    e.message
                )))
            }
        }
        column += item.len() + 1;
    }
    Ok(out)
}

fn unit_factor(units: Units) -> Rational {
    match units {
        Units::Pi => Rational::new(1, 2),
        Units::TwoPi => Rational::from_integer(1),
    }
}

pub fn parse_distribution(args: &DistributionArgs) -> Result<AngleDistribution, CliError> {
    let allowed: BTreeSet<String> = args.generators.iter().cloned().collect();
    let values = split_list(&args.angles, "angle", |s| Exact::parse(s, Some(&allowed)))?;
    if values.is_empty() {
        return Err(usage("at least one angle is required"));
    }
    let factor = unit_factor(args.units);
    let angles = values
        .into_iter()
        .map(|v| Angle::new(v.scale(factor)).map_err(usage))
        .collect::<Result<Vec<_>, _>>()?;
    AngleDistribution::new(args.genus, angles).map_err(usage)
}

fn rationals(text: &str, what: &str) -> Result<Vec<Rational>, CliError> {
    split_list(text, what, parse_rational)
}

fn integers(text: &str, what: &str) -> Result<Vec<i64>, CliError> {
    rationals(text, what)?
        .into_iter()
        .map(|r| {
            if r.is_integer() {
                Ok(r.to_integer() as i64)
            } else {
                Err(usage(format!("{what} must be integers, got {r}")))
            }
        })
        .collect()
}

fn emit<T: Serialize>(out: &mut dyn Write, command: &str, body: T) -> Result<(), CliError> {
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        body,
    };
    let text = serde_json::to_string_pretty(&envelope).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    match cli.command {
        Command::Classify(args) => run_classify(&args, cli.format, out),
        Command::Residues(args) => run_residues(&args, cli.format, out),
        Command::SurfaceCheck { file } => run_surface_check(&file, cli.format, out),
        Command::Witness(args) => run_witness(&args, cli.format, out),
        Command::Crosscheck(args) => run_crosscheck(&args, cli.format, out),
        Command::Enumerate(args) => run_enumerate(&args, cli.format, out),
    }
}

pub fn classify_report(
    dist: &AngleDistribution,
    class: MonodromyClass,
    witness: Option<&SearchBounds>,
) -> Result<ClassifyReport, CliError> {
    // the comparison laws are checked on every run
    let comparison: ComparisonReport = compare_classes(dist)?;
    let (verdict, search) = match witness {
        Some(bounds) if dist.is_rational() => classify_with_witness(dist, class, bounds)?,
        _ => (
            match class {
                MonodromyClass::Coaxial => comparison.coaxial,
                MonodromyClass::StrictDihedral => comparison.strict,
                MonodromyClass::DihedralAny => comparison.any,
            },
            None,
        ),
    };
    let literal = classify_literal(dist, class);
    let reduction = classify_via_strata(dist, class);
    let paths_agree = literal.realizable == reduction.realizable;
    let documented_divergence = is_documented_divergence(&literal, &reduction);
    if !paths_agree && !documented_divergence {
        return Err(CliError::Inconsistency(format!(
            "{dist}: literal path says {}, reduction says {}",
            literal.realizable, reduction.realizable
        )));
    }
    if let Some(SearchOutcome::Found(_)) = &search {
        if !verdict.realizable {
            return Err(CliError::Inconsistency(format!(
                "{dist}: witness found for a negative verdict"
            )));
        }
    }
    Ok(ClassifyReport {
        distribution: dist.clone(),
        class,
        verdict,
        literal,
        reduction,
        paths_agree,
        documented_divergence,
        search,
    })
}

fn run_classify(args: &ClassifyArgs, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let dist = parse_distribution(&args.dist)?;
    let bounds = args.bounds.bounds();
    let report = classify_report(&dist, args.class, args.witness.then_some(&bounds))?;
    if format == Format::Json {
        return emit(out, "classify", report);
    }
    writeln!(out, "{dist}")?;
    writeln!(out, "{}", report.verdict)?;
    writeln!(out, "literal path: {}", report.literal)?;
    writeln!(out, "strata reduction: {}", report.reduction)?;
    if report.paths_agree {
        writeln!(out, "paths agree")?;
    } else {
        writeln!(
            out,
            "paths diverge: the literal arithmetic bound and the strata reduction disagree (known ambiguity)"
        )?;
    }
    match &report.search {
        Some(SearchOutcome::Found(surface)) => writeln!(out, "witness: {surface}")?,
        Some(SearchOutcome::Exhausted {
            splits,
            gluings,
            bounds,
        }) => writeln!(
            out,
            "no witness within bounds (max {} segments, {} regular vertices; {splits} splits, {gluings} gluings tried)",
            bounds.max_segments, bounds.max_regular
        )?,
        None => {}
    }
    Ok(())
}

fn run_residues(args: &ResiduesArgs, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let residues = rationals(&args.residues, "residue")?;
    let orders = integers(&args.orders, "order")?;
    let (stratum, verdict) = match args.kind {
        Kind::Quadratic => {
            let stratum = QuadraticStratum::new(args.genus, orders, residues.len()).map_err(usage)?;
            let config = QuadResidueConfig::from_rationals(&residues).map_err(usage)?;
            let verdict = quad_residues_realizable(&stratum, &config).map_err(usage)?;
            (stratum.to_string(), verdict)
        }
        Kind::Abelian => {
            let zeros = orders
                .into_iter()
                .map(|o| u32::try_from(o).map_err(|_| usage(format!("zero order {o} is negative"))))
                .collect::<Result<Vec<_>, _>>()?;
            let stratum = AbelianStratum::new(args.genus, zeros, residues.len()).map_err(usage)?;
            let config = AbelianResidueConfig::from_signed(&residues).map_err(usage)?;
            let verdict = abelian_residues_realizable(&stratum, &config).map_err(usage)?;
            (stratum.to_string(), verdict)
        }
    };
    if format == Format::Json {
        return emit(out, "residues", ResiduesReport { stratum, verdict });
    }
    writeln!(out, "{stratum}: {verdict}")?;
    Ok(())
}

fn run_surface_check(file: &PathBuf, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let text = std::fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let surface = JenkinsStrebelSurface::from_json(&text).map_err(usage)?;
    let report = match surface.validate() {
        Err(errors) => SurfaceCheckReport::Invalid { errors },
        Ok(()) => SurfaceCheckReport::Valid {
            report: surface.analyze().map_err(usage)?,
            distribution: surface.to_distribution(true).map_err(usage)?,
        },
    };
    if format == Format::Json {
        return emit(out, "surface-check", report);
    }
    match report {
        SurfaceCheckReport::Invalid { errors } => {
            writeln!(out, "invalid surface:")?;
            for e in errors {
                writeln!(out, "  {e}")?;
            }
        }
        SurfaceCheckReport::Valid { report, distribution } => {
            writeln!(out, "valid surface")?;
            writeln!(out, "{report}")?;
            match distribution {
                Some(d) => writeln!(out, "angles (turns): {d}")?,
                None => writeln!(out, "no singularities (round sphere)")?,
            }
        }
    }
    Ok(())
}

fn run_witness(args: &WitnessArgs, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let dist = parse_distribution(&args.dist)?;
    let outcome = search_witness(&dist, args.class, &args.bounds.bounds()).map_err(usage)?;
    if let (Some(path), Some(surface)) = (&args.output, outcome.surface()) {
        std::fs::write(path, surface.to_json() + "\n")?;
    }
    if format == Format::Json {
        return emit(
            out,
            "witness",
            WitnessReport {
                distribution: dist,
                class: args.class,
                outcome,
            },
        );
    }
    match &outcome {
        SearchOutcome::Found(surface) if args.output.is_none() => writeln!(out, "{}", surface.to_json())?,
        SearchOutcome::Found(surface) => writeln!(out, "witness: {surface}")?,
        SearchOutcome::Exhausted {
            splits,
            gluings,
            bounds,
        } => writeln!(
            out,
            "no witness within bounds (max {} segments, {} regular vertices; {splits} splits, {gluings} gluings tried)",
            bounds.max_segments, bounds.max_regular
        )?,
    }
    Ok(())
}

fn run_crosscheck(args: &CrosscheckArgs, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let factor = unit_factor(args.units);
    let coefficients = rationals(&args.coefficients, "coefficient")?
        .into_iter()
        .map(|c| c * factor)
        .collect::<Vec<_>>();
    if coefficients.iter().any(|c| *c <= Rational::from_integer(0)) {
        return Err(usage("coefficients must be positive"));
    }
    let genera = integers(&args.genera, "genus")?
        .into_iter()
        .map(|g| u32::try_from(g).map_err(|_| usage("genus must be nonnegative")))
        .collect::<Result<Vec<_>, _>>()?;
    let classes = args
        .classes
        .split(',')
        .map(|c| c.trim().parse::<MonodromyClass>().map_err(usage))
        .collect::<Result<Vec<_>, _>>()?;
    let grid = Grid {
        coefficients,
        max_angles: args.max_angles,
        genera,
        classes,
        oracle: args.oracle.then(|| args.bounds.bounds()),
    };
    let report = crosscheck(&grid);
    let summary = report.summary();
    let clean = report.is_clean();
    let problem = report
        .undocumented()
        .chain(report.oracle_conflicts())
        .next()
        .map(|c| c.describe());
    if format == Format::Json {
        emit(out, "crosscheck", CrosscheckSummary { summary, report })?;
    } else {
        writeln!(out, "{summary}")?;
        write!(out, "{}", report.divergence_table())?;
    }
    match (clean, problem) {
        (false, Some(case)) => Err(CliError::Inconsistency(format!("crosscheck failed at {case}"))),
        _ => Ok(()),
    }
}

fn run_enumerate(args: &EnumerateArgs, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let bounds = EnumerationBounds {
        max_segments: args.max_segments,
        lengths: rationals(&args.lengths, "length")?,
        circumferences: args
            .circumferences
            .as_deref()
            .map(|c| rationals(c, "circumference"))
            .transpose()?,
    };
    let surfaces = enumerate_surfaces(&bounds).map_err(usage)?;
    let count = surfaces.len();
    if format == Format::Json {
        let surfaces = if args.count { Vec::new() } else { surfaces };
        return emit(out, "enumerate", EnumerateReport { count, surfaces });
    }
    if !args.count {
        for s in &surfaces {
            writeln!(out, "{s}")?;
        }
    }
    writeln!(out, "{count} surfaces")?;
    Ok(())
}

/// Formats turns for messages.
pub fn turns_text(turns: &[Rational]) -> String {
    turns.iter().map(format_rational).collect::<Vec<_>>().join(",")
}
