//! FRETISH requirements: parsing, semantic templates, temporal formulas over
//! finite traces, lint, and bounded refinement checking.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod corpus;
pub mod decimal;
pub mod formula;
pub mod lint;
pub mod model;
pub mod parser;
pub mod refinement;
pub mod semantics;
pub mod trace;

pub use corpus::{builtin_corpus, ScenarioRecord};
pub use decimal::Decimal;
pub use formula::{Formula, Interval, TimeDirection};
pub use lint::{lint_project, rename_variable, LintCode, LintFinding, RenameError, Severity};
pub use model::{
    validate_project, BinOp, Expr, FretishAst, Glossary, Project, RequirementId, RequirementRecord,
    Timing, Value, ValueType, VarKind, VariableDecl, Violation,
};
pub use parser::{parse_expr, parse_requirement, pretty_print, print_expr, ParseError};
pub use refinement::{
    apply_mapping, check_refinement, AbstractionMapping, Definition, RefinementError,
    RefinementProblem, RefinementVerdict,
};
pub use semantics::{
    classify_template, formalize_ft, formalize_pt, render_diagram, DiagramModel, Obligation,
    TemplateKey, UnsupportedTemplate,
};
pub use trace::{
    enumerate_traces, eval_expr, eval_formula, eval_template_direct, EvalError, Trace,
    DEFAULT_BUDGET,
};
