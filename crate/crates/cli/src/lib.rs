//! The `currkg` command line: materialize, validate, query, path, stats.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use currkg::materializer::{FieldMapping, IngestReport, Materializer};
use currkg::path::{NextModule, PathEngine};
use currkg::query::{evaluate_with, parse_query, AliasTable, NamedCq};
use currkg::rdf::{parse_turtle, rdf_type, serialize_turtle, Graph, Namespaces, Term};
use currkg::schema::SchemaCatalog;
use currkg::validator::run_all;

#[derive(Debug, Parser)]
#[command(name = "currkg", version, about = "Curriculum knowledge graph toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Turn CSV files into a canonical Turtle graph.
    Materialize(MaterializeArgs),
    /// Check a graph against the schema axioms.
    Validate(ValidateArgs),
    /// Run a query file or a bundled competency question.
    Query(QueryArgs),
    /// Show a persona's ordered learning path.
    Path(PathArgs),
    /// Triple, class and property counts.
    Stats(GraphArg),
}

#[derive(Debug, Args)]
pub struct MaterializeArgs {
    #[arg(long = "csv", required = true, num_args = 1..)]
    pub csv: Vec<PathBuf>,
    /// Mapping override file (`Header -> rule` lines).
    #[arg(long)]
    pub mapping: Option<PathBuf>,
    /// Write Turtle here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArg {
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Exit 0 even when violations are found.
    #[arg(long)]
    pub no_fail_on_violation: bool,
    /// Vocabulary override file (`Vocabulary: member, ...` lines).
    #[arg(long)]
    pub vocab: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct QueryArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long, group = "source")]
    pub file: Option<PathBuf>,
    #[arg(long, group = "source")]
    pub cq: Option<String>,
    /// Replace the bundled predicate alias table.
    #[arg(long, conflicts_with = "no_aliases")]
    pub aliases: Option<PathBuf>,
    /// Match predicates exactly as written.
    #[arg(long)]
    pub no_aliases: bool,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Persona IRI, prefixed name or label.
    #[arg(long)]
    pub persona: String,
    /// Print the module following the one with this title.
    #[arg(long)]
    pub after: Option<String>,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_FINDINGS: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

fn require_file(path: &Path) -> Result<()> {
    if !path.is_file() {
        bail!("file not found: {}", path.display());
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String> {
    require_file(path)?;
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn namespaces() -> Result<Namespaces> {
    Namespaces::from_env().context("invalid CURRKG_BASE")
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text = read_text(path)?;
    parse_turtle(&text).with_context(|| format!("{}", path.display()))
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
/// Returns the process exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Materialize(a) => materialize(a, out, err),
        Command::Validate(a) => validate(a, out),
        Command::Query(a) => query(a, out),
        Command::Path(a) => path(a, out, err),
        Command::Stats(a) => stats(a, out),
    }
}

fn materialize(a: MaterializeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    for p in a.csv.iter().chain(&a.mapping) {
        require_file(p)?;
    }
    let ns = namespaces()?;
    let catalog = SchemaCatalog::builtin(&ns);
    let mut mapping = FieldMapping::default_mapping();
    if let Some(p) = &a.mapping {
        mapping = mapping.apply_overrides(&read_text(p)?).with_context(|| format!("{}", p.display()))?;
    }
    let materializer = Materializer::new(&mapping, &catalog).context("mapping")?;
    let mut graph = Graph::with_namespaces(ns.prefix_map());
    let mut report = IngestReport::default();
    for p in &a.csv {
        let bytes = fs::read(p).with_context(|| format!("reading {}", p.display()))?;
        let r = materializer.materialize_bytes(&bytes, &mut graph).with_context(|| format!("{}", p.display()))?;
        report.merge(r);
    }
    let turtle = serialize_turtle(&graph);
    match &a.out {
        Some(path) => {
            fs::write(path, turtle).with_context(|| format!("writing {}", path.display()))?;
            write!(out, "{report}")?;
        }
        None => {
            out.write_all(turtle.as_bytes())?;
            write!(err, "{report}")?;
        }
    }
    Ok(EXIT_OK)
}

fn validate(a: ValidateArgs, out: &mut dyn Write) -> Result<u8> {
    require_file(&a.graph.graph)?;
    let ns = namespaces()?;
    let mut catalog = SchemaCatalog::builtin(&ns);
    if let Some(p) = &a.vocab {
        catalog = catalog.load_vocab_overrides(&read_text(p)?).with_context(|| format!("{}", p.display()))?;
    }
    let graph = load_graph(&a.graph.graph)?;
    let report = run_all(&graph, &catalog);
    out.write_all(report.to_tsv().as_bytes())?;
    Ok(if report.is_empty() || a.no_fail_on_violation { EXIT_OK } else { EXIT_FINDINGS })
}

fn query(a: QueryArgs, out: &mut dyn Write) -> Result<u8> {
    require_file(&a.graph.graph)?;
    let q = match (&a.file, &a.cq) {
        (Some(p), _) => {
            let text = read_text(p)?;
            parse_query(&text).with_context(|| format!("{}", p.display()))?
        }
        (None, Some(id)) => id.parse::<NamedCq>()?.query(),
        (None, None) => bail!("either --file or --cq is required"),
    };
    let aliases = if a.no_aliases {
        AliasTable::empty()
    } else if let Some(p) = &a.aliases {
        AliasTable::parse(&read_text(p)?).with_context(|| format!("{}", p.display()))?
    } else {
        AliasTable::builtin()
    };
    let graph = load_graph(&a.graph.graph)?;
    let table = evaluate_with(&q, &graph, &aliases)?;
    out.write_all(table.to_tsv().as_bytes())?;
    Ok(EXIT_OK)
}

fn path(a: PathArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    require_file(&a.graph.graph)?;
    let ns = namespaces()?;
    let graph = load_graph(&a.graph.graph)?;
    let engine = PathEngine::new(&graph, &ns);
    let persona = engine.find_persona(&a.persona)?;
    let Some(title) = &a.after else {
        let view = engine.resolve_persona(&persona)?;
        write!(out, "{view}")?;
        return Ok(EXIT_OK);
    };
    match engine.next_module_after(&persona, title)? {
        NextModule::Next { module, title } => {
            let iri = module.as_iri().map(|i| i.as_str().to_string()).unwrap_or_else(|| module.to_string());
            writeln!(out, "{iri}\t{}", title.unwrap_or_default())?;
            Ok(EXIT_OK)
        }
        NextModule::EndOfPath => {
            writeln!(out, "end of path")?;
            Ok(EXIT_OK)
        }
        NextModule::TitleNotFound => {
            writeln!(err, "module title {:?} not found on this path", title.trim())?;
            Ok(EXIT_FINDINGS)
        }
    }
}

fn stats(a: GraphArg, out: &mut dyn Write) -> Result<u8> {
    let graph = load_graph(&a.graph)?;
    let show = |t: &Term| match t {
        Term::Iri(i) => graph.namespaces().compact(i.as_str()).unwrap_or_else(|| t.to_string()),
        other => other.to_string(),
    };
    let type_term = Term::Iri(rdf_type());
    let mut classes: BTreeMap<String, usize> = BTreeMap::new();
    let mut properties: BTreeMap<String, usize> = BTreeMap::new();
    let mut subjects = std::collections::BTreeSet::new();
    for t in graph.iter() {
        subjects.insert(t.subject);
        *properties.entry(show(t.predicate)).or_default() += 1;
        if t.predicate == &type_term {
            *classes.entry(show(t.object)).or_default() += 1;
        }
    }
    writeln!(out, "triples\t{}", graph.len())?;
    writeln!(out, "subjects\t{}", subjects.len())?;
    writeln!(out, "classes\t{}", classes.len())?;
    writeln!(out, "properties\t{}", properties.len())?;
    writeln!(out, "# instances per class")?;
    for (c, n) in &classes {
        writeln!(out, "{c}\t{n}")?;
    }
    writeln!(out, "# triples per property")?;
    for (p, n) in &properties {
        writeln!(out, "{p}\t{n}")?;
    }
    Ok(EXIT_OK)
}

/// Writes `error: ...` with the full cause chain.
pub fn report_error(e: &anyhow::Error, err: &mut dyn Write) {
    let _ = writeln!(err, "error: {e:#}");
}

pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let (stdout, stderr) = (io::stdout(), io::stderr());
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    match run(cli, &mut out, &mut err) {
        Ok(code) => code,
        Err(e) => {
            report_error(&e, &mut err);
            EXIT_ERROR
        }
    }
}
