//! Domain types shared across the toolkit: expressions, parsed requirements,
//! requirement records, the glossary and projects.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::corpus::ScenarioRecord;
use crate::decimal::Decimal;
use crate::refinement::AbstractionMapping;

/// Built-in functions that are evaluated rather than looked up as trace columns.
pub const BUILTIN_FUNCTIONS: [&str; 2] = ["diff", "abs"];

pub fn is_builtin(name: &str) -> bool {
    BUILTIN_FUNCTIONS.contains(&name)
}

/// Letters, digits and underscore, starting with a letter.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
    Implies,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "=",
            BinOp::Ne => "!=",
            BinOp::And => "&",
            BinOp::Or => "|",
            BinOp::Implies => "=>",
        }
    }

    /// Name used by the parse-tree export.
    pub fn kind(self) -> &'static str {
        match self {
            BinOp::Add => "add",
            BinOp::Sub => "sub",
            BinOp::Lt => "lt",
            BinOp::Le => "le",
            BinOp::Gt => "gt",
            BinOp::Ge => "ge",
            BinOp::Eq => "eq",
            BinOp::Ne => "ne",
            BinOp::And => "and",
            BinOp::Or => "or",
            BinOp::Implies => "implies",
        }
    }

    pub fn from_kind(kind: &str) -> Option<BinOp> {
        Some(match kind {
            "add" => BinOp::Add,
            "sub" => BinOp::Sub,
            "lt" => BinOp::Lt,
            "le" => BinOp::Le,
            "gt" => BinOp::Gt,
            "ge" => BinOp::Ge,
            "eq" => BinOp::Eq,
            "ne" => BinOp::Ne,
            "and" => BinOp::And,
            "or" => BinOp::Or,
            "implies" => BinOp::Implies,
            _ => return None,
        })
    }

    pub fn is_logical(self) -> bool {
        matches!(self, BinOp::And | BinOp::Or | BinOp::Implies)
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::Eq | BinOp::Ne
        )
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(self, BinOp::Add | BinOp::Sub)
    }
}

/// Condition and response expressions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Bool(bool),
    Null,
    Num(Decimal),
    Var(String),
    /// A function application. Apart from the built-ins `diff` and `abs`,
    /// a call is an observation named by its printed form.
    Call(String, Vec<Expr>),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_owned())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn and(lhs: Expr, rhs: Expr) -> Expr {
        Expr::binary(BinOp::And, lhs, rhs)
    }

    pub fn negation(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Call(_, args) => args.iter().for_each(|a| a.walk(f)),
            Expr::Neg(e) | Expr::Not(e) => e.walk(f),
            Expr::Binary(_, l, r) => {
                l.walk(f);
                r.walk(f);
            }
            Expr::Bool(_) | Expr::Null | Expr::Num(_) | Expr::Var(_) => {}
        }
    }

    /// Variables in evaluated positions (not arguments of observation terms).
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    fn collect_free_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Call(name, args) if is_builtin(name) => {
                args.iter().for_each(|a| a.collect_free_vars(out))
            }
            Expr::Call(..) | Expr::Bool(_) | Expr::Null | Expr::Num(_) => {}
            Expr::Neg(e) | Expr::Not(e) => e.collect_free_vars(out),
            Expr::Binary(_, l, r) => {
                l.collect_free_vars(out);
                r.collect_free_vars(out);
            }
        }
    }

    /// Names of every trace column this expression reads: plain variables
    /// and the printed form of each non-built-in call.
    pub fn columns(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_columns(&mut out);
        out
    }

    pub(crate) fn collect_columns(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Call(name, args) if is_builtin(name) => {
                args.iter().for_each(|a| a.collect_columns(out))
            }
            Expr::Call(..) => {
                out.insert(crate::parser::print_expr(self));
            }
            Expr::Bool(_) | Expr::Null | Expr::Num(_) => {}
            Expr::Neg(e) | Expr::Not(e) => e.collect_columns(out),
            Expr::Binary(_, l, r) => {
                l.collect_columns(out);
                r.collect_columns(out);
            }
        }
    }

    /// Every identifier occurring anywhere, including call names and arguments.
    pub fn identifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| match e {
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Call(name, _) => {
                out.insert(name.clone());
            }
            _ => {}
        });
        out
    }

    /// Replaces variables in evaluated positions.
    pub fn substitute(&self, subst: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        match self {
            Expr::Var(v) => subst(v).unwrap_or_else(|| self.clone()),
            Expr::Call(name, args) if is_builtin(name) => Expr::Call(
                name.clone(),
                args.iter().map(|a| a.substitute(subst)).collect(),
            ),
            Expr::Call(..) | Expr::Bool(_) | Expr::Null | Expr::Num(_) => self.clone(),
            Expr::Neg(e) => Expr::Neg(Box::new(e.substitute(subst))),
            Expr::Not(e) => Expr::Not(Box::new(e.substitute(subst))),
            Expr::Binary(op, l, r) => Expr::Binary(
                *op,
                Box::new(l.substitute(subst)),
                Box::new(r.substitute(subst)),
            ),
        }
    }

    /// Renames an identifier everywhere it occurs. Returns the number of
    /// occurrences renamed.
    pub fn rename(&mut self, old: &str, new: &str) -> usize {
        match self {
            Expr::Var(v) => rename_ident(v, old, new),
            Expr::Call(name, args) => {
                rename_ident(name, old, new)
                    + args.iter_mut().map(|a| a.rename(old, new)).sum::<usize>()
            }
            Expr::Neg(e) | Expr::Not(e) => e.rename(old, new),
            Expr::Binary(_, l, r) => l.rename(old, new) + r.rename(old, new),
            Expr::Bool(_) | Expr::Null | Expr::Num(_) => 0,
        }
    }
}

fn rename_ident(ident: &mut String, old: &str, new: &str) -> usize {
    if ident == old {
        *ident = new.to_owned();
        1
    } else {
        0
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_expr(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Timing {
    /// No timing clause given.
    Eventually,
    Always,
    Until(Expr),
}

/// A parsed requirement.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FretishAst {
    pub scope_mode: Option<String>,
    pub when_cond: Option<Expr>,
    pub if_cond: Option<Expr>,
    pub component: String,
    pub timing: Timing,
    pub response: Expr,
}

impl FretishAst {
    /// The effective trigger: `when` and `if` conjoined, absent parts dropped.
    pub fn trigger(&self) -> Option<Expr> {
        match (&self.when_cond, &self.if_cond) {
            (Some(w), Some(i)) => Some(Expr::and(w.clone(), i.clone())),
            (Some(c), None) | (None, Some(c)) => Some(c.clone()),
            (None, None) => None,
        }
    }

    pub fn stop(&self) -> Option<&Expr> {
        match &self.timing {
            Timing::Until(s) => Some(s),
            _ => None,
        }
    }

    pub fn exprs(&self) -> impl Iterator<Item = &Expr> {
        self.when_cond
            .iter()
            .chain(self.if_cond.iter())
            .chain(self.stop())
            .chain(core::iter::once(&self.response))
    }

    pub fn exprs_mut(&mut self) -> impl Iterator<Item = &mut Expr> {
        let stop = match &mut self.timing {
            Timing::Until(s) => Some(s),
            _ => None,
        };
        self.when_cond
            .iter_mut()
            .chain(self.if_cond.iter_mut())
            .chain(stop)
            .chain(core::iter::once(&mut self.response))
    }

    /// Columns read by the requirement, including its scope mode.
    pub fn columns(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        if let Some(m) = &self.scope_mode {
            out.insert(m.clone());
        }
        for e in self.exprs() {
            e.collect_columns(&mut out);
        }
        out
    }

    pub fn map_exprs(&self, f: impl Fn(&Expr) -> Expr) -> FretishAst {
        FretishAst {
            scope_mode: self.scope_mode.clone(),
            when_cond: self.when_cond.as_ref().map(&f),
            if_cond: self.if_cond.as_ref().map(&f),
            component: self.component.clone(),
            timing: match &self.timing {
                Timing::Until(s) => Timing::Until(f(s)),
                t => t.clone(),
            },
            response: f(&self.response),
        }
    }
}

/// `<usecase>_R_<n>` or `<usecase>_R_<n>.<m>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RequirementId(String);

impl RequirementId {
    pub fn new(id: impl Into<String>) -> Option<Self> {
        let id = id.into();
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            None
        } else {
            Some(RequirementId(id))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// For a dotted child id, the id before the last dot.
    pub fn dotted_prefix(&self) -> Option<&str> {
        self.0.rsplit_once('.').map(|(p, _)| p)
    }
}

impl fmt::Display for RequirementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl core::borrow::Borrow<str> for RequirementId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequirementRecord {
    pub id: RequirementId,
    pub parent_ids: Vec<RequirementId>,
    pub fretish_text: String,
    pub rationale: String,
    pub comments: String,
    pub ast: Option<FretishAst>,
}

impl RequirementRecord {
    /// Builds a record and parses its text.
    pub fn parsed(
        id: &str,
        parents: &[&str],
        text: &str,
    ) -> Result<Self, crate::parser::ParseError> {
        let ast = crate::parser::parse_requirement(text)?;
        Ok(RequirementRecord {
            id: RequirementId(id.to_owned()),
            parent_ids: parents
                .iter()
                .map(|p| RequirementId((*p).to_owned()))
                .collect(),
            fretish_text: text.to_owned(),
            rationale: String::new(),
            comments: String::new(),
            ast: Some(ast),
        })
    }

    /// The cached AST, or a fresh parse of the text.
    pub fn ast(&self) -> Result<FretishAst, crate::parser::ParseError> {
        match &self.ast {
            Some(a) => Ok(a.clone()),
            None => crate::parser::parse_requirement(&self.fretish_text),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Input,
    Output,
    Internal,
    Mode,
    Function,
    Constant,
}

impl VarKind {
    pub const ALL: [VarKind; 6] = [
        VarKind::Input,
        VarKind::Output,
        VarKind::Internal,
        VarKind::Mode,
        VarKind::Function,
        VarKind::Constant,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VarKind::Input => "input",
            VarKind::Output => "output",
            VarKind::Internal => "internal",
            VarKind::Mode => "mode",
            VarKind::Function => "function",
            VarKind::Constant => "constant",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ValueType {
    Boolean,
    Integer,
    Real,
    Enum(Vec<String>),
}

impl ValueType {
    pub fn is_numeric(&self) -> bool {
        matches!(self, ValueType::Integer | ValueType::Real)
    }

    /// Null is admitted by every type.
    pub fn admits(&self, v: &Value) -> bool {
        match (self, v) {
            (_, Value::Null) => true,
            (ValueType::Boolean, Value::Bool(_)) => true,
            (ValueType::Real, Value::Num(_)) => true,
            (ValueType::Integer, Value::Num(d)) => d.is_integral(),
            (ValueType::Enum(syms), Value::Enum(s)) => syms.contains(s),
            _ => false,
        }
    }
}

/// A value held by a trace column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Bool(bool),
    Num(Decimal),
    Enum(String),
    Null,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Num(d) => write!(f, "{d}"),
            Value::Enum(s) => f.write_str(s),
            Value::Null => f.write_str("null"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableDecl {
    pub name: String,
    pub kind: VarKind,
    pub value_type: ValueType,
    pub arity: usize,
    /// Finite domain used by bounded checking.
    pub domain: Option<Vec<Value>>,
    pub description: String,
}

impl VariableDecl {
    pub fn new(name: &str, kind: VarKind, value_type: ValueType) -> Self {
        VariableDecl {
            name: name.to_owned(),
            kind,
            value_type,
            arity: 0,
            domain: None,
            description: String::new(),
        }
    }

    pub fn boolean(name: &str, kind: VarKind) -> Self {
        Self::new(name, kind, ValueType::Boolean)
    }

    pub fn with_arity(mut self, arity: usize) -> Self {
        self.arity = arity;
        self
    }

    pub fn with_domain(mut self, domain: Vec<Value>) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn with_description(mut self, d: &str) -> Self {
        self.description = d.to_owned();
        self
    }

    /// The domain used for enumeration: the declared one, or the type's
    /// natural finite domain (booleans and enums).
    pub fn effective_domain(&self) -> Option<Vec<Value>> {
        if let Some(d) = &self.domain {
            return Some(d.clone());
        }
        match &self.value_type {
            ValueType::Boolean => Some(alloc::vec![Value::Bool(false), Value::Bool(true)]),
            ValueType::Enum(syms) => Some(syms.iter().cloned().map(Value::Enum).collect()),
            ValueType::Integer | ValueType::Real => None,
        }
    }

    /// Problems with this declaration's own invariants.
    pub fn check(&self) -> Vec<String> {
        let mut problems = Vec::new();
        if !is_identifier(&self.name) {
            problems.push(alloc::format!("`{}` is not an identifier", self.name));
        }
        if self.kind == VarKind::Mode && (self.value_type != ValueType::Boolean || self.arity != 0)
        {
            problems.push(String::from("mode variables must be boolean with arity 0"));
        }
        if self.kind == VarKind::Function && self.arity == 0 {
            problems.push(String::from("function entries need arity >= 1"));
        }
        if self.kind != VarKind::Function && self.arity != 0 {
            problems.push(String::from("only function entries take arguments"));
        }
        if let Some(domain) = &self.domain {
            if domain.is_empty() {
                problems.push(String::from("domain is empty"));
            }
            for v in domain {
                if !self.value_type.admits(v) {
                    problems.push(alloc::format!(
                        "domain value `{v}` does not belong to the type"
                    ));
                }
            }
        }
        problems
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Glossary {
    entries: BTreeMap<String, VariableDecl>,
}

impl Glossary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a declaration, returning the previous one with the same name.
    pub fn declare(&mut self, decl: VariableDecl) -> Option<VariableDecl> {
        self.entries.insert(decl.name.clone(), decl)
    }

    pub fn remove(&mut self, name: &str) -> Option<VariableDecl> {
        self.entries.remove(name)
    }

    pub fn get(&self, name: &str) -> Option<&VariableDecl> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &VariableDecl> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The declaration backing a trace column: the variable itself, or the
    /// function of an observation term such as `sensorValue(S)`.
    pub fn for_column(&self, column: &str) -> Option<&VariableDecl> {
        let name = column.split('(').next().unwrap_or(column);
        self.get(name)
    }
}

impl FromIterator<VariableDecl> for Glossary {
    fn from_iter<T: IntoIterator<Item = VariableDecl>>(iter: T) -> Self {
        let mut g = Glossary::new();
        for d in iter {
            g.declare(d);
        }
        g
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Project {
    pub name: String,
    pub requirements: Vec<RequirementRecord>,
    pub glossary: Glossary,
    pub mappings: Vec<AbstractionMapping>,
    pub scenarios: Vec<ScenarioRecord>,
}

impl Project {
    pub fn new(name: &str) -> Self {
        Project {
            name: name.to_owned(),
            ..Default::default()
        }
    }

    pub fn requirement(&self, id: &str) -> Option<&RequirementRecord> {
        self.requirements.iter().find(|r| r.id.as_str() == id)
    }

    pub fn requirement_mut(&mut self, id: &str) -> Option<&mut RequirementRecord> {
        self.requirements.iter_mut().find(|r| r.id.as_str() == id)
    }

    pub fn children_of<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a RequirementRecord> {
        self.requirements
            .iter()
            .filter(move |r| r.parent_ids.iter().any(|p| p.as_str() == id))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationRule {
    DuplicateId,
    DanglingParent,
    SelfParent,
    DuplicateParent,
    DottedPrefix,
}

impl ViolationRule {
    pub fn code(self) -> &'static str {
        match self {
            ViolationRule::DuplicateId => "duplicate-id",
            ViolationRule::DanglingParent => "dangling-parent",
            ViolationRule::SelfParent => "self-parent",
            ViolationRule::DuplicateParent => "duplicate-parent",
            ViolationRule::DottedPrefix => "dotted-prefix",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub requirement: RequirementId,
    pub rule: ViolationRule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}: {}",
            self.requirement,
            self.rule.code(),
            self.detail
        )
    }
}

/// Structural checks on a project. An empty result means every id is unique
/// and every parent link resolves.
pub fn validate_project(project: &Project) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for r in &project.requirements {
        if !seen.insert(r.id.as_str()) {
            out.push(Violation {
                requirement: r.id.clone(),
                rule: ViolationRule::DuplicateId,
                detail: alloc::format!("id `{}` is declared more than once", r.id),
            });
        }
    }
    for r in &project.requirements {
        let mut parents = BTreeSet::new();
        for p in &r.parent_ids {
            if p == &r.id {
                out.push(Violation {
                    requirement: r.id.clone(),
                    rule: ViolationRule::SelfParent,
                    detail: String::from("a requirement cannot be its own parent"),
                });
            } else if !seen.contains(p.as_str()) {
                out.push(Violation {
                    requirement: r.id.clone(),
                    rule: ViolationRule::DanglingParent,
                    detail: alloc::format!("parent `{p}` does not exist"),
                });
            }
            if !parents.insert(p.as_str()) {
                out.push(Violation {
                    requirement: r.id.clone(),
                    rule: ViolationRule::DuplicateParent,
                    detail: alloc::format!("parent `{p}` is listed twice"),
                });
            }
        }
        if let Some(prefix) = r.id.dotted_prefix() {
            if !r.parent_ids.is_empty() && !seen.contains(prefix) {
                out.push(Violation {
                    requirement: r.id.clone(),
                    rule: ViolationRule::DottedPrefix,
                    detail: alloc::format!("id prefix `{prefix}` names no requirement"),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: &str, parents: &[&str]) -> RequirementRecord {
        RequirementRecord::parsed(id, parents, "Controller shall always (p)").unwrap()
    }

    #[test]
    fn child_with_present_parent_is_valid() {
        let mut p = Project::new("t");
        p.requirements.push(record("UC5_R_1", &[]));
        p.requirements.push(record("UC5_R_1.1", &["UC5_R_1"]));
        assert!(validate_project(&p).is_empty());
    }

    #[test]
    fn empty_project_is_valid() {
        assert!(validate_project(&Project::new("empty")).is_empty());
    }

    #[test]
    fn dangling_parent_names_the_child() {
        let mut p = Project::new("t");
        p.requirements.push(record("A", &["Z"]));
        let v = validate_project(&p);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].requirement.as_str(), "A");
        assert_eq!(v[0].rule, ViolationRule::DanglingParent);
    }

    #[test]
    fn duplicates_and_self_links_are_reported() {
        let mut p = Project::new("t");
        p.requirements.push(record("A", &[]));
        p.requirements.push(record("A", &[]));
        p.requirements.push(record("B", &["A", "A", "B"]));
        let rules: Vec<_> = validate_project(&p).into_iter().map(|v| v.rule).collect();
        assert!(rules.contains(&ViolationRule::DuplicateId));
        assert!(rules.contains(&ViolationRule::DuplicateParent));
        assert!(rules.contains(&ViolationRule::SelfParent));
    }

    #[test]
    fn mode_and_function_declarations_are_checked() {
        let bad_mode = VariableDecl::new("m", VarKind::Mode, ValueType::Real);
        assert!(!bad_mode.check().is_empty());
        let bad_fn = VariableDecl::boolean("f", VarKind::Function);
        assert!(!bad_fn.check().is_empty());
        let bad_domain = VariableDecl::boolean("b", VarKind::Input)
            .with_domain(alloc::vec![Value::Num(Decimal::from_int(1))]);
        assert!(!bad_domain.check().is_empty());
        let ok = VariableDecl::new("x", VarKind::Input, ValueType::Integer)
            .with_domain(alloc::vec![Value::Num(Decimal::from_int(1)), Value::Null]);
        assert!(ok.check().is_empty());
    }

    #[test]
    fn column_lookup_resolves_observation_terms() {
        let g: Glossary =
            [VariableDecl::new("sensorValue", VarKind::Function, ValueType::Real).with_arity(1)]
                .into_iter()
                .collect();
        assert_eq!(g.for_column("sensorValue(S)").unwrap().name, "sensorValue");
        assert!(g.for_column("other").is_none());
    }
}
