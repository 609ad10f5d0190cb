//! Glossary-aware lint and rename refactoring.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{
    is_builtin, is_identifier, validate_project, BinOp, Expr, FretishAst, Glossary, Project,
    RequirementId, ValueType, VarKind, ViolationRule,
};
use crate::parser::pretty_print;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LintCode {
    UndeclaredVariable,
    TypeMismatch,
    UndeclaredMode,
    UnmappedAbstractSymbol,
    OverlappingModes,
    DanglingParent,
    DuplicateId,
}

impl LintCode {
    pub const ALL: [LintCode; 7] = [
        LintCode::UndeclaredVariable,
        LintCode::TypeMismatch,
        LintCode::UndeclaredMode,
        LintCode::UnmappedAbstractSymbol,
        LintCode::OverlappingModes,
        LintCode::DanglingParent,
        LintCode::DuplicateId,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LintCode::UndeclaredVariable => "undeclared-variable",
            LintCode::TypeMismatch => "type-mismatch",
            LintCode::UndeclaredMode => "undeclared-mode",
            LintCode::UnmappedAbstractSymbol => "unmapped-abstract-symbol",
            LintCode::OverlappingModes => "overlapping-modes",
            LintCode::DanglingParent => "dangling-parent",
            LintCode::DuplicateId => "duplicate-id",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }

    pub fn severity(self) -> Severity {
        match self {
            LintCode::UndeclaredVariable
            | LintCode::UnmappedAbstractSymbol
            | LintCode::OverlappingModes => Severity::Warning,
            LintCode::TypeMismatch
            | LintCode::UndeclaredMode
            | LintCode::DanglingParent
            | LintCode::DuplicateId => Severity::Error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LintFinding {
    pub severity: Severity,
    pub requirement_id: Option<RequirementId>,
    pub code: LintCode,
    pub message: String,
}

impl LintFinding {
    fn new(code: LintCode, requirement_id: Option<&RequirementId>, message: String) -> Self {
        LintFinding {
            severity: code.severity(),
            requirement_id: requirement_id.cloned(),
            code,
            message,
        }
    }
}

/// `error[type-mismatch] UC5_R_2: message`
impl fmt::Display for LintFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.severity.as_str(), self.code.as_str())?;
        if let Some(id) = &self.requirement_id {
            write!(f, " {id}")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ty {
    Bool,
    Num,
    Enum,
    /// `null` or an undeclared symbol.
    Any,
}

struct TypeCheck<'a> {
    glossary: &'a Glossary,
    problems: Vec<String>,
}

impl TypeCheck<'_> {
    fn declared(&self, name: &str) -> Ty {
        match self.glossary.get(name).map(|d| &d.value_type) {
            Some(ValueType::Boolean) => Ty::Bool,
            Some(ValueType::Integer | ValueType::Real) => Ty::Num,
            Some(ValueType::Enum(_)) => Ty::Enum,
            None => Ty::Any,
        }
    }

    fn expect(&mut self, e: &Expr, want: Ty, context: &Expr) {
        let got = self.infer(e);
        if got != Ty::Any && got != want {
            let what = match want {
                Ty::Bool => "a boolean",
                Ty::Num => "a number",
                _ => "a value",
            };
            self.problems
                .push(format!("`{e}` is used as {what} in `{context}`"));
        }
    }

    fn infer(&mut self, e: &Expr) -> Ty {
        match e {
            Expr::Bool(_) => Ty::Bool,
            Expr::Null => Ty::Any,
            Expr::Num(_) => Ty::Num,
            Expr::Var(v) => self.declared(v),
            Expr::Call(name, args) if is_builtin(name) => {
                for a in args {
                    self.expect(a, Ty::Num, e);
                }
                Ty::Num
            }
            // Arguments of observation terms are labels.
            Expr::Call(name, _) => self.declared(name),
            Expr::Neg(a) => {
                self.expect(a, Ty::Num, e);
                Ty::Num
            }
            Expr::Not(a) => {
                self.expect(a, Ty::Bool, e);
                Ty::Bool
            }
            Expr::Binary(op, l, r) if op.is_logical() => {
                self.expect(l, Ty::Bool, e);
                self.expect(r, Ty::Bool, e);
                Ty::Bool
            }
            Expr::Binary(op, l, r) if op.is_arithmetic() => {
                self.expect(l, Ty::Num, e);
                self.expect(r, Ty::Num, e);
                Ty::Num
            }
            Expr::Binary(BinOp::Eq | BinOp::Ne, l, r) => {
                let (lt, rt) = (self.infer(l), self.infer(r));
                if lt != Ty::Any && rt != Ty::Any && lt != rt {
                    self.problems
                        .push(format!("`{e}` compares values of different types"));
                }
                Ty::Bool
            }
            Expr::Binary(_, l, r) => {
                self.expect(l, Ty::Num, e);
                self.expect(r, Ty::Num, e);
                Ty::Bool
            }
        }
    }
}

fn lint_requirement(
    glossary: &Glossary,
    id: &RequirementId,
    ast: &FretishAst,
    out: &mut Vec<LintFinding>,
) {
    let mut undeclared = BTreeSet::new();
    for e in ast.exprs() {
        for name in e.identifiers() {
            if !is_builtin(&name) && !glossary.contains(&name) {
                undeclared.insert(name);
            }
        }
    }
    for name in undeclared {
        out.push(LintFinding::new(
            LintCode::UndeclaredVariable,
            Some(id),
            format!("`{name}` is not declared in the glossary"),
        ));
    }

    let mut tc = TypeCheck {
        glossary,
        problems: Vec::new(),
    };
    for e in ast.exprs() {
        tc.expect(e, Ty::Bool, e);
    }
    for p in tc.problems {
        out.push(LintFinding::new(LintCode::TypeMismatch, Some(id), p));
    }

    if let Some(mode) = &ast.scope_mode {
        if glossary.get(mode).map(|d| d.kind) != Some(VarKind::Mode) {
            out.push(LintFinding::new(
                LintCode::UndeclaredMode,
                Some(id),
                format!("scope `{mode}` is not declared as a mode"),
            ));
        }
        let others: BTreeSet<String> = ast
            .exprs()
            .flat_map(Expr::free_vars)
            .filter(|v| v != mode && glossary.get(v).map(|d| d.kind) == Some(VarKind::Mode))
            .collect();
        for other in others {
            out.push(LintFinding::new(
                LintCode::OverlappingModes,
                Some(id),
                format!("scoped to `{mode}` but also tests mode `{other}`"),
            ));
        }
    }
}

/// Findings for the whole project, in a deterministic order. Requirements
/// whose text does not parse are skipped.
pub fn lint_project(project: &Project) -> Vec<LintFinding> {
    let mut out = Vec::new();
    for v in validate_project(project) {
        let code = match v.rule {
            ViolationRule::DuplicateId => LintCode::DuplicateId,
            ViolationRule::DanglingParent
            | ViolationRule::SelfParent
            | ViolationRule::DuplicateParent
            | ViolationRule::DottedPrefix => LintCode::DanglingParent,
        };
        out.push(LintFinding::new(code, Some(&v.requirement), v.detail));
    }
    for decl in project.glossary.iter() {
        for p in decl.check() {
            out.push(LintFinding::new(
                LintCode::TypeMismatch,
                None,
                format!("declaration of `{}`: {p}", decl.name),
            ));
        }
    }
    for r in &project.requirements {
        if let Ok(ast) = r.ast() {
            lint_requirement(&project.glossary, &r.id, &ast, &mut out);
        }
    }

    // Parent symbols that no child mentions must be defined by some mapping.
    let parents: BTreeSet<&str> = project
        .mappings
        .iter()
        .map(|m| m.parent_id.as_str())
        .collect();
    for parent in parents {
        let Some(Ok(ast)) = project.requirement(parent).map(|r| r.ast()) else {
            continue;
        };
        let mappings: Vec<_> = project
            .mappings
            .iter()
            .filter(|m| m.parent_id.as_str() == parent)
            .collect();
        let mut mentioned = BTreeSet::new();
        for m in &mappings {
            for c in &m.child_ids {
                if let Some(Ok(child)) = project.requirement(c.as_str()).map(|r| r.ast()) {
                    mentioned.extend(child.columns());
                }
            }
        }
        for col in ast.columns() {
            let defined = mappings.iter().any(|m| m.definition(&col).is_some());
            if !defined && !mentioned.contains(&col) {
                let id = project.requirement(parent).map(|r| &r.id);
                out.push(LintFinding::new(
                    LintCode::UnmappedAbstractSymbol,
                    id,
                    format!("abstract symbol `{col}` has no definition in any mapping"),
                ));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenameError {
    #[error("`{0}` is already declared or used")]
    NameCollision(String),
    #[error("`{0}` is neither declared nor used")]
    UnknownName(String),
    #[error("`{0}` is not a valid identifier")]
    InvalidName(String),
}

/// Every identifier the project declares or uses.
pub fn project_identifiers(project: &Project) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = project.glossary.iter().map(|d| d.name.clone()).collect();
    for r in &project.requirements {
        if let Ok(ast) = r.ast() {
            out.extend(ast.scope_mode.iter().cloned());
            for e in ast.exprs() {
                out.extend(e.identifiers());
            }
        }
    }
    for m in &project.mappings {
        for d in &m.definitions {
            out.insert(d.abstract_name.clone());
            out.extend(d.concrete.identifiers());
        }
    }
    out
}

/// Renames `old` to `new` in every requirement, glossary entry and mapping
/// definition. Changed requirements get their text regenerated.
pub fn rename_variable(project: &Project, old: &str, new: &str) -> Result<Project, RenameError> {
    if !is_identifier(new) || is_builtin(new) {
        return Err(RenameError::InvalidName(new.to_owned()));
    }
    let names = project_identifiers(project);
    if !names.contains(old) {
        return Err(RenameError::UnknownName(old.to_owned()));
    }
    if names.contains(new) {
        return Err(RenameError::NameCollision(new.to_owned()));
    }

    let mut out = project.clone();
    for r in &mut out.requirements {
        let Ok(mut ast) = r.ast() else { continue };
        let mut changed = 0;
        if ast.scope_mode.as_deref() == Some(old) {
            ast.scope_mode = Some(new.to_owned());
            changed += 1;
        }
        for e in ast.exprs_mut() {
            changed += e.rename(old, new);
        }
        if changed > 0 {
            r.fretish_text = pretty_print(&ast);
        }
        r.ast = Some(ast);
    }
    if let Some(mut decl) = out.glossary.remove(old) {
        decl.name = new.to_owned();
        out.glossary.declare(decl);
    }
    for m in &mut out.mappings {
        for d in &mut m.definitions {
            if d.abstract_name == old {
                d.abstract_name = new.to_owned();
            }
            d.concrete.rename(old, new);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{RequirementRecord, VariableDecl};

    fn project(text: &str, glossary: Vec<VariableDecl>) -> Project {
        let mut p = Project::new("t");
        p.requirements
            .push(RequirementRecord::parsed("A", &[], text).unwrap());
        p.glossary = glossary.into_iter().collect();
        p
    }

    fn codes(p: &Project) -> Vec<LintCode> {
        lint_project(p).into_iter().map(|f| f.code).collect()
    }

    #[test]
    fn undeclared_symbol_is_a_warning() {
        let f = lint_project(&project("Controller shall always (foo)", Vec::new()));
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].code, LintCode::UndeclaredVariable);
        assert_eq!(f[0].severity, Severity::Warning);
    }

    #[test]
    fn boolean_operator_on_number_is_an_error() {
        let p = project(
            "Controller shall always (settlingTime & p)",
            alloc::vec![
                VariableDecl::new("settlingTime", VarKind::Output, ValueType::Real),
                VariableDecl::boolean("p", VarKind::Input),
            ],
        );
        let f = lint_project(&p);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].code, LintCode::TypeMismatch);
        assert_eq!(f[0].severity, Severity::Error);
    }

    #[test]
    fn scope_must_be_a_mode() {
        let p = project(
            "m when (p) Controller shall until (q) (r)",
            alloc::vec![
                VariableDecl::boolean("m", VarKind::Input),
                VariableDecl::boolean("p", VarKind::Input),
                VariableDecl::boolean("q", VarKind::Input),
                VariableDecl::boolean("r", VarKind::Input),
            ],
        );
        assert_eq!(codes(&p), [LintCode::UndeclaredMode]);
    }

    #[test]
    fn testing_another_mode_inside_a_scope_warns() {
        let p = project(
            "m when (other) Controller shall until (q) (r)",
            alloc::vec![
                VariableDecl::boolean("m", VarKind::Mode),
                VariableDecl::boolean("other", VarKind::Mode),
                VariableDecl::boolean("q", VarKind::Input),
                VariableDecl::boolean("r", VarKind::Input),
            ],
        );
        assert_eq!(codes(&p), [LintCode::OverlappingModes]);
    }

    #[test]
    fn rename_errors() {
        let p = project(
            "Controller shall always (a & b)",
            alloc::vec![VariableDecl::boolean("a", VarKind::Input)],
        );
        assert_eq!(
            rename_variable(&p, "zz", "q"),
            Err(RenameError::UnknownName("zz".into()))
        );
        assert_eq!(
            rename_variable(&p, "a", "b"),
            Err(RenameError::NameCollision("b".into()))
        );
        assert_eq!(
            rename_variable(&p, "a", "a"),
            Err(RenameError::NameCollision("a".into()))
        );
        assert_eq!(
            rename_variable(&p, "a", "1x"),
            Err(RenameError::InvalidName("1x".into()))
        );
    }

    #[test]
    fn rename_updates_text_and_glossary() {
        let p = project(
            "if (sensorValue(S) = null) Controller shall always (a)",
            alloc::vec![VariableDecl::boolean("a", VarKind::Input)],
        );
        let q = rename_variable(&p, "a", "alarm").unwrap();
        assert_eq!(
            q.requirements[0].fretish_text,
            "if (sensorValue(S) = null) Controller shall always (alarm)"
        );
        assert!(q.glossary.contains("alarm") && !q.glossary.contains("a"));
        let q = rename_variable(&p, "S", "primary").unwrap();
        assert!(q.requirements[0]
            .fretish_text
            .contains("sensorValue(primary)"));
    }
}
