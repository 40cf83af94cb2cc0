//! Command-line front end. `run` returns the rendered output and exit code
//! instead of exiting, so it can be driven from tests.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::{builtin, LoadedExtension};
use crate::error::{AlgebraError, LoadError};
use crate::extension::{
    bound_certificates, check_quotient_bifinite, findim_estimate, global_dimension, verify_gldim_bound,
    ResolutionTable,
};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::module::{minimal_resolution_bounded, DEFAULT_MAX_SYZYGY_DIM};
use crate::presentation::{parse_presentation, Presentation};
use crate::quiver::BoundQuiverAlgebra;
use crate::report::{AlgebraSummary, ConfigEcho, GlobalDimensions, NamedResolution, ReportDocument, Verdict};
use crate::verify::{run_acceptance, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUILD: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "bifinite", version, about = "Homological invariants of algebra extensions B ⊆ A")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Ground field: a prime `p` or `q` for the rationals. Defaults to the
    /// field named in the file, else GF(1009).
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Largest homological degree computed before giving up.
    #[arg(long, global = true, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    pub cutoff: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of seeded probe modules.
    #[arg(long, global = true, default_value_t = 100)]
    pub probes: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Exit with status 4 when a result is cut off.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Adjoin the unit of A to the subalgebra generators.
    #[arg(long, global = true)]
    pub adjoin_unit: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Left,
    Right,
    Bimodule,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimensions, radical and vertices of A (and B when declared).
    Info { input: String },
    /// Projective dimensions of A/B and quotient bifiniteness.
    CheckExtension { input: String },
    /// Minimal resolution of A/B as a left, right or bimodule.
    Resolve {
        input: String,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Global dimensions, and the bound for B when a subalgebra is declared.
    Gldim { input: String },
    /// Certificates for the finitistic dimension bound on probe modules.
    Bound { input: String },
    /// Reproduce the built-in examples and run the property suites.
    VerifyPaper,
}

pub struct CliOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl CliOutput {
    fn error(code: i32, msg: String) -> Self {
        CliOutput { stdout: String::new(), stderr: msg, code }
    }
}

pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput::error(code, text)
            } else {
                CliOutput { stdout: text, stderr: String::new(), code }
            };
        }
    };
    let opts = cli.opts.clone();
    let doc = match execute(&cli) {
        Ok(doc) => doc,
        Err(e) => return failure(e),
    };
    let stdout = match opts.format {
        Format::Text => doc.to_text(),
        Format::Json => doc.to_json(),
    };
    let code = match doc.verdict {
        Verdict::Failed => EXIT_FAILED,
        Verdict::Inconclusive if opts.strict => EXIT_INCONCLUSIVE,
        _ => EXIT_OK,
    };
    CliOutput { stdout, stderr: String::new(), code }
}

enum CliError {
    Input(String),
    Load(LoadError),
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        CliError::Load(e)
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Load(e.into())
    }
}

fn failure(e: CliError) -> CliOutput {
    match e {
        CliError::Input(msg) => CliOutput::error(EXIT_PARSE, format!("error: {msg}\n")),
        CliError::Load(LoadError::Parse(p)) => CliOutput::error(EXIT_PARSE, format!("error: parse error at {p}\n")),
        CliError::Load(LoadError::Field(f)) => CliOutput::error(EXIT_PARSE, format!("error: {f}\n")),
        CliError::Load(LoadError::Build(b)) => {
            let msg = b.to_string();
            let named = if msg.starts_with(b.check_name()) { msg } else { format!("{}: {msg}", b.check_name()) };
            CliOutput::error(EXIT_BUILD, format!("error: build failed: {named}\n"))
        }
    }
}

fn read_input(input: &str) -> Result<String, CliError> {
    if let Some(name) = input.strip_prefix("builtin:") {
        return builtin(name).map(str::to_string).ok_or_else(|| CliError::Input(format!("no built-in presentation `{name}`")));
    }
    std::fs::read_to_string(input).map_err(|e| CliError::Input(format!("cannot read `{input}`: {e}")))
}

fn execute(cli: &Cli) -> Result<ReportDocument, CliError> {
    let opts = &cli.opts;
    let flag_field = opts.field.as_deref().map(FieldSpec::parse).transpose().map_err(LoadError::from)?;
    let cutoff = opts.cutoff as usize;
    if let Command::VerifyPaper = cli.command {
        let field = flag_field.unwrap_or(FieldSpec::PrimeField { characteristic: 1009 });
        let mut doc = ReportDocument::new("verify-paper", echo(opts, None, field, None));
        let cfg = VerifyConfig { field, cutoff, seed: opts.seed, probes: opts.probes, ..VerifyConfig::default() };
        doc.acceptance = run_acceptance(cfg)?;
        doc.settle();
        return Ok(doc);
    }
    let input = match &cli.command {
        Command::Info { input }
        | Command::CheckExtension { input }
        | Command::Resolve { input, .. }
        | Command::Gldim { input }
        | Command::Bound { input } => input.clone(),
        Command::VerifyPaper => unreachable!(),
    };
    let text = read_input(&input)?;
    let pres = parse_presentation(&text).map_err(LoadError::from)?;
    let field = flag_field.unwrap_or_else(|| pres.field_or_default());
    match field {
        FieldSpec::PrimeField { characteristic } => {
            let f = PrimeField::new(characteristic).map_err(LoadError::from)?;
            execute_with(&f, cli, &input, pres)
        }
        FieldSpec::Rationals => execute_with(&Rationals, cli, &input, pres),
    }
}

fn echo(opts: &Options, input: Option<&str>, field: FieldSpec, which: Option<Which>) -> ConfigEcho {
    ConfigEcho {
        input: input.map(str::to_string),
        field,
        cutoff: opts.cutoff as usize,
        seed: opts.seed,
        probes: opts.probes,
        adjoin_unit: opts.adjoin_unit,
        which: which.map(|w| format!("{w:?}").to_lowercase()),
    }
}

fn summaries<F: Field>(
    pres: &Presentation,
    alg: &BoundQuiverAlgebra<F>,
    ext: Option<&LoadedExtension<F>>,
) -> Result<Vec<AlgebraSummary>, AlgebraError> {
    let a = alg.algebra();
    let mut out = vec![AlgebraSummary {
        name: "A".into(),
        dim: a.dim(),
        radical_dim: a.radical()?.dim(),
        vertices: alg.quiver().vertices.clone(),
        monomial: Some(pres.is_monomial()),
        admissible: Some(true),
    }];
    if let Some(ext) = ext {
        let b = &ext.rings.embedding.small;
        out.push(AlgebraSummary {
            name: "B".into(),
            dim: b.dim(),
            radical_dim: b.radical()?.dim(),
            vertices: ext.rings.b.vertex_labels()?,
            monomial: None,
            admissible: None,
        });
    }
    Ok(out)
}

fn execute_with<F: Field>(f: &F, cli: &Cli, input: &str, pres: Presentation) -> Result<ReportDocument, CliError> {
    let opts = &cli.opts;
    let cutoff = opts.cutoff as usize;
    let alg = BoundQuiverAlgebra::build(f, &pres)?;
    let which = match cli.command {
        Command::Resolve { which, .. } => Some(which),
        _ => None,
    };
    let name = match &cli.command {
        Command::Info { .. } => "info",
        Command::CheckExtension { .. } => "check-extension",
        Command::Resolve { .. } => "resolve",
        Command::Gldim { .. } => "gldim",
        Command::Bound { .. } => "bound",
        Command::VerifyPaper => "verify-paper",
    };
    let mut doc = ReportDocument::new(name, echo(opts, Some(input), f.spec(), which));
    let needs_subalgebra = !matches!(cli.command, Command::Info { .. } | Command::Gldim { .. });
    let (alg, ext) = if pres.has_subalgebra() {
        let rings = crate::module::ExtensionRings::new(alg.subalgebra(&pres, opts.adjoin_unit)?);
        (None, Some(LoadedExtension { presentation: pres.clone(), algebra: alg, rings }))
    } else if needs_subalgebra {
        return Err(AlgebraError::Invalid("presentation declares no subalgebra generators".into()).into());
    } else {
        (Some(alg), None)
    };
    let alg_ref = ext.as_ref().map(|e| &e.algebra).or(alg.as_ref()).expect("one of the two is set");
    doc.algebras = summaries(&pres, alg_ref, ext.as_ref())?;
    match &cli.command {
        Command::Info { .. } | Command::VerifyPaper => {}
        Command::CheckExtension { .. } => {
            let ext = ext.as_ref().expect("checked above");
            doc.extension = Some(check_quotient_bifinite(&ext.rings, cutoff)?);
        }
        Command::Resolve { which, .. } => {
            let rings = &ext.as_ref().expect("checked above").rings;
            let q = rings.quotient_bimodule();
            let (label, module) = match which {
                Which::Left => ("A/B as a left B-module", q.left_part()),
                Which::Right => ("A/B as a right B-module", q.right_part()),
                Which::Bimodule => ("A/B as a B-bimodule", q),
            };
            let res = minimal_resolution_bounded(&module, cutoff, DEFAULT_MAX_SYZYGY_DIM)?;
            doc.resolutions.push(NamedResolution { module: label.into(), table: ResolutionTable::from_resolution(&res)? });
        }
        Command::Gldim { .. } => {
            doc.global_dimensions = Some(match &ext {
                Some(ext) => {
                    let rep = check_quotient_bifinite(&ext.rings, cutoff)?;
                    let cert = verify_gldim_bound(&ext.rings, rep.n_b, cutoff)?;
                    let gd = GlobalDimensions { a: cert.gldim_a, b: Some(cert.gldim_b) };
                    doc.gldim_certificate = Some(cert);
                    gd
                }
                None => {
                    let ring = crate::module::Ring::basic(std::sync::Arc::clone(alg_ref.algebra()));
                    GlobalDimensions { a: global_dimension(&ring, cutoff)?, b: None }
                }
            });
        }
        Command::Bound { .. } => {
            let ext = ext.as_ref().expect("checked above");
            let rep = check_quotient_bifinite(&ext.rings, cutoff)?;
            let fd = findim_estimate(&ext.rings.a, cutoff, opts.probes, opts.seed)?;
            doc.certificates = bound_certificates(&ext.rings, &rep, fd, opts.seed, opts.probes)?;
            doc.findim = Some(fd);
            doc.extension = Some(rep);
        }
    }
    doc.settle();
    Ok(doc)
}
