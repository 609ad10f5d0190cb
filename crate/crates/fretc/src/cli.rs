//! Command-line entry point.
//!
//! Exit codes: 0 success, SAT or refines; 1 UNSAT, counterexample or lint
//! errors; 2 usage error or unknown id; 3 parse or schema error; 4 budget
//! exceeded.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fretish_core::{
    builtin_corpus, classify_template, eval_template_direct, formalize_ft, formalize_pt,
    lint_project, parse_requirement, pretty_print, rename_variable, render_diagram, FretishAst,
    Project, RefinementError, RefinementVerdict, Severity, DEFAULT_BUDGET,
};

use crate::formats::{to_pretty_json, verdict_json, MappingFile, TraceFile};
use crate::parallel::check_refinement_parallel;
use crate::store::{self, StoreError};

pub const BUDGET_ENV: &str = "FRETC_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "fretc",
    version,
    about = "Check and transform FRETISH requirement projects"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the canonical text of a requirement, or its parse tree.
    Parse {
        /// File holding one requirement, or `-` for standard input.
        file: String,
        #[arg(long)]
        tree: bool,
    },
    /// Print the semantic template key of a requirement.
    Classify { project: PathBuf, id: String },
    /// Print a requirement's temporal formula in prefix form.
    Formalize {
        project: PathBuf,
        id: String,
        #[command(flatten)]
        form: Form,
    },
    /// Draw a requirement's timeline.
    Diagram {
        project: PathBuf,
        id: String,
        #[command(flatten)]
        style: Style,
    },
    /// Report findings against the glossary and requirement links.
    Lint { project: PathBuf },
    /// Evaluate a requirement on a trace file.
    CheckTrace {
        project: PathBuf,
        id: String,
        trace: PathBuf,
    },
    /// Check that a mapping's children refine its parent up to a bound.
    CheckRefinement {
        project: PathBuf,
        mapping: PathBuf,
        #[arg(long)]
        bound: usize,
        /// Enumeration budget; defaults to FRETC_BUDGET or 5000000.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Rename a variable across requirements, glossary and mappings.
    Rename {
        project: PathBuf,
        old: String,
        new: String,
        #[arg(long)]
        in_place: bool,
    },
    /// Built-in corpus operations.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Serve the HTTP API on the loopback interface.
    Serve {
        #[arg(long)]
        port: u16,
        #[arg(long, default_value = "corpus.json")]
        project: PathBuf,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Form {
    #[arg(long)]
    ft: bool,
    #[arg(long)]
    pt: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Style {
    #[arg(long)]
    ascii: bool,
    #[arg(long)]
    svg: bool,
}

#[derive(Debug, Subcommand)]
enum CorpusAction {
    /// Write the corpus project and its mapping files into a directory.
    Init { dir: PathBuf },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
    }
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::SchemaViolation { .. } => invalid(e.to_string()),
            StoreError::IoFailure { .. } => usage(e.to_string()),
        }
    }
}

impl From<RefinementError> for Failure {
    fn from(e: RefinementError) -> Self {
        match e {
            RefinementError::UnknownRequirement(_) | RefinementError::ZeroBound => {
                usage(e.to_string())
            }
            RefinementError::TooManyPredicates(_) => Failure {
                code: 4,
                message: e.to_string(),
            },
            _ => invalid(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn requirement_ast(project: &Project, id: &str) -> Result<FretishAst, Failure> {
    let r = project
        .requirement(id)
        .ok_or_else(|| usage(format!("unknown requirement `{id}`")))?;
    r.ast().map_err(|e| invalid(format!("{id}: {e}")))
}

fn budget(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{BUDGET_ENV}=`{v}` is not a count"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| usage(format!("cannot write output: {e}")))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Parse { file, tree } => {
            let text = if file == "-" {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| usage(format!("cannot read stdin: {e}")))?;
                s
            } else {
                store::read_text(Path::new(&file))?
            };
            let ast = parse_requirement(text.trim_end()).map_err(|e| invalid(e.to_string()))?;
            if tree {
                write_out(out, &to_pretty_json(&crate::tree::export_parse_tree(&ast)))?;
            } else {
                write_out(out, &format!("{}\n", pretty_print(&ast)))?;
            }
            Ok(0)
        }
        Command::Classify { project, id } => {
            let ast = requirement_ast(&store::load_project(&project)?, &id)?;
            let key = classify_template(&ast).map_err(|e| invalid(format!("{id}: {e}")))?;
            write_out(out, &format!("{key}\n"))?;
            Ok(0)
        }
        Command::Formalize { project, id, form } => {
            let ast = requirement_ast(&store::load_project(&project)?, &id)?;
            let f = if form.ft {
                formalize_ft(&ast)
            } else {
                formalize_pt(&ast)
            };
            let f = f.map_err(|e| invalid(format!("{id}: {e}")))?;
            write_out(out, &format!("{f}\n"))?;
            Ok(0)
        }
        Command::Diagram { project, id, style } => {
            let ast = requirement_ast(&store::load_project(&project)?, &id)?;
            let d = render_diagram(&ast).map_err(|e| invalid(format!("{id}: {e}")))?;
            let text = if style.ascii {
                crate::diagram::render_ascii(&d)
            } else {
                crate::diagram::render_svg(&d)
            };
            write_out(out, &text)?;
            Ok(0)
        }
        Command::Lint { project } => {
            let findings = lint_project(&store::load_project(&project)?);
            let errors = findings
                .iter()
                .filter(|f| f.severity == Severity::Error)
                .count();
            let mut text: String = findings.iter().map(|f| format!("{f}\n")).collect();
            text.push_str(&format!(
                "{errors} error(s), {} warning(s)\n",
                findings.len() - errors
            ));
            write_out(out, &text)?;
            Ok(u8::from(errors > 0))
        }
        Command::CheckTrace { project, id, trace } => {
            let ast = requirement_ast(&store::load_project(&project)?, &id)?;
            let file: TraceFile = store::from_json_text(&store::read_text(&trace)?)?;
            let t = file.into_trace().map_err(invalid)?;
            let holds =
                eval_template_direct(&ast, &t).map_err(|e| invalid(format!("{id}: {e}")))?;
            write_out(out, if holds { "SAT\n" } else { "UNSAT\n" })?;
            Ok(u8::from(!holds))
        }
        Command::CheckRefinement {
            project,
            mapping,
            bound,
            budget: flag,
        } => {
            let budget = budget(flag)?;
            let project = store::load_project(&project)?;
            let file: MappingFile = store::from_json_text(&store::read_text(&mapping)?)?;
            let mapping = file.into_mapping().map_err(|e| {
                invalid(format!("schema violation at `{}`: {}", e.pointer, e.reason))
            })?;
            let verdict = check_refinement_parallel(&project, &mapping, bound, budget)?;
            write_out(out, &to_pretty_json(&verdict_json(&verdict)))?;
            Ok(match verdict {
                RefinementVerdict::Refines { .. } => 0,
                RefinementVerdict::Counterexample(_) => 1,
                RefinementVerdict::Inconclusive(_) => 4,
            })
        }
        Command::Rename {
            project: path,
            old,
            new,
            in_place,
        } => {
            let project = store::load_project(&path)?;
            let renamed =
                rename_variable(&project, &old, &new).map_err(|e| usage(e.to_string()))?;
            if in_place {
                store::save_project(&renamed, &path)?;
                let changed = project
                    .requirements
                    .iter()
                    .zip(&renamed.requirements)
                    .filter(|(a, b)| a.fretish_text != b.fretish_text)
                    .count();
                write_out(
                    out,
                    &format!("renamed `{old}` to `{new}` in {changed} requirement(s)\n"),
                )?;
            } else {
                write_out(out, &store::project_to_string(&renamed))?;
            }
            Ok(0)
        }
        Command::Corpus {
            action: CorpusAction::Init { dir },
        } => {
            let corpus = builtin_corpus();
            let io = |source| StoreError::IoFailure {
                path: dir.join("mappings"),
                source,
            };
            std::fs::create_dir_all(dir.join("mappings")).map_err(io)?;
            let path = dir.join("corpus.json");
            store::save_project(&corpus, &path)?;
            let mut listing = format!("{}\n", path.display());
            for m in &corpus.mappings {
                let path = dir.join("mappings").join(format!("{}.json", m.parent_id));
                store::write_atomic(&path, &to_pretty_json(&MappingFile::from_mapping(m)))?;
                listing.push_str(&format!("{}\n", path.display()));
            }
            write_out(out, &listing)?;
            Ok(0)
        }
        Command::Serve { port, project } => {
            let loaded = store::load_project(&project)?;
            let state = crate::service::AppState::new(loaded, Some(project));
            let runtime = tokio::runtime::Runtime::new()
                .map_err(|e| usage(format!("cannot start runtime: {e}")))?;
            runtime
                .block_on(crate::service::serve(state, port))
                .map_err(|e| usage(format!("service stopped: {e}")))?;
            Ok(0)
        }
    }
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "fretc: {}", f.message);
            f.code
        }
    }
}
