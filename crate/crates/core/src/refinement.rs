//! Bounded refinement checking of a parent requirement against its children
//! under abstraction invariants.
//!
//! The search runs over a quotient of the state space. Each concrete state is
//! reduced to the vector of truth values of the slot predicates (mode,
//! trigger, stop, response) of every requirement involved; template verdicts
//! depend on nothing else. Each distinct vector is represented by its first
//! concrete state in lexicographic order, and signature sequences are visited
//! in lexicographic order of their representatives. The first violating
//! sequence is therefore the same trace that plain lexicographic enumeration
//! of concrete traces would report first.
//!
//! Budgets bound the work actually performed: the number of concrete states
//! and, per length, the cumulative number of signature sequences.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use crate::model::{Expr, FretishAst, Glossary, Project, RequirementId, Value};
use crate::parser::ParseError;
use crate::semantics::{classify_template, TemplateKey, UnsupportedTemplate};
use crate::trace::{
    eval_bool, eval_expr, eval_template_direct, state_count, template_holds, EvalError, Slot,
    Trace, TraceCount,
};

/// `abstract_name <=> concrete`, enforced at every state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub abstract_name: String,
    pub concrete: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractionMapping {
    pub parent_id: RequirementId,
    pub child_ids: Vec<RequirementId>,
    pub definitions: Vec<Definition>,
    /// Clauses added by the children with no abstract counterpart.
    pub superposition_note: String,
}

impl AbstractionMapping {
    /// Maps a requirement onto itself with no definitions.
    pub fn identity(id: &RequirementId) -> Self {
        AbstractionMapping {
            parent_id: id.clone(),
            child_ids: alloc::vec![id.clone()],
            definitions: Vec::new(),
            superposition_note: String::new(),
        }
    }

    pub fn definition(&self, abstract_name: &str) -> Option<&Expr> {
        self.definitions
            .iter()
            .find(|d| d.abstract_name == abstract_name)
            .map(|d| &d.concrete)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RefinementError {
    #[error("unknown requirement `{0}`")]
    UnknownRequirement(String),
    #[error("requirement `{0}` does not parse: {1}")]
    Parse(String, ParseError),
    #[error("requirement `{0}`: {1}")]
    Unsupported(String, UnsupportedTemplate),
    #[error("abstract name `{0}` does not occur in the parent")]
    UnknownAbstractName(String),
    #[error("abstract name `{0}` is defined twice")]
    DuplicateAbstractName(String),
    #[error("mapping lists no children")]
    NoChildren,
    #[error("bound must be positive")]
    ZeroBound,
    #[error("column `{0}` has no finite domain")]
    MissingDomain(String),
    #[error("{0} distinct slot predicates, at most 64 supported")]
    TooManyPredicates(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefinementVerdict {
    /// No counterexample among `traces` traces of length up to `bound`.
    Refines {
        bound: usize,
        traces: TraceCount,
    },
    Counterexample(Trace),
    Inconclusive(String),
}

impl RefinementVerdict {
    pub fn summary(&self) -> String {
        match self {
            RefinementVerdict::Refines { bound, traces } => format!(
                "refines: no counterexample up to bound {bound} over declared domains ({traces} traces)"
            ),
            RefinementVerdict::Counterexample(t) => {
                format!("counterexample of length {}: children hold, parent fails", t.len())
            }
            RefinementVerdict::Inconclusive(reason) => format!("inconclusive: {reason}"),
        }
    }
}

/// Replaces every abstract variable of the parent by its concrete definition.
pub fn apply_mapping(
    parent: &FretishAst,
    mapping: &AbstractionMapping,
) -> Result<FretishAst, RefinementError> {
    let mut seen = BTreeSet::new();
    let used = parent.columns();
    for d in &mapping.definitions {
        if !seen.insert(d.abstract_name.as_str()) {
            return Err(RefinementError::DuplicateAbstractName(
                d.abstract_name.clone(),
            ));
        }
        if !used.contains(&d.abstract_name) {
            return Err(RefinementError::UnknownAbstractName(
                d.abstract_name.clone(),
            ));
        }
    }
    Ok(substitute(parent, mapping))
}

fn substitute(ast: &FretishAst, mapping: &AbstractionMapping) -> FretishAst {
    if mapping.definitions.is_empty() {
        return ast.clone();
    }
    let lookup = |name: &str| mapping.definition(name).cloned();
    ast.map_exprs(|e| e.substitute(&lookup))
}

struct Checked {
    key: TemplateKey,
    /// Predicate index per slot, `None` when the template lacks the slot.
    slots: [Option<usize>; 4],
}

fn slot_index(slot: Slot) -> usize {
    match slot {
        Slot::Mode => 0,
        Slot::Trigger => 1,
        Slot::Stop => 2,
        Slot::Response => 3,
    }
}

/// A prepared refinement question, ready to be searched layer by layer.
pub struct RefinementProblem {
    parent: FretishAst,
    children: Vec<FretishAst>,
    mapping: AbstractionMapping,
    /// Concrete columns, sorted, with their domains.
    columns: Vec<(String, Vec<Value>)>,
    /// Index 0 is the mapped parent, then the substituted children.
    checked: Vec<Checked>,
    /// Representative concrete state of each signature, in first-occurrence order.
    representatives: Vec<Vec<Value>>,
    signatures: Vec<u64>,
    raw_states: TraceCount,
}

fn lookup_ast(project: &Project, id: &RequirementId) -> Result<FretishAst, RefinementError> {
    let rec = project
        .requirement(id.as_str())
        .ok_or_else(|| RefinementError::UnknownRequirement(id.as_str().into()))?;
    rec.ast()
        .map_err(|e| RefinementError::Parse(id.as_str().into(), e))
}

fn intern(preds: &mut Vec<Expr>, e: Expr) -> usize {
    match preds.iter().position(|p| *p == e) {
        Some(i) => i,
        None => {
            preds.push(e);
            preds.len() - 1
        }
    }
}

impl RefinementProblem {
    /// Resolves the requirements, substitutes definitions, and builds the
    /// signature quotient. Fails with `Ok(Err(reason))` when the concrete
    /// state space alone exceeds `budget`.
    pub fn prepare(
        project: &Project,
        mapping: &AbstractionMapping,
        budget: u64,
    ) -> Result<Result<Self, String>, RefinementError> {
        Self::prepare_with(
            &project.glossary,
            |id| lookup_ast(project, id),
            mapping,
            budget,
        )
    }

    fn prepare_with(
        glossary: &Glossary,
        lookup: impl Fn(&RequirementId) -> Result<FretishAst, RefinementError>,
        mapping: &AbstractionMapping,
        budget: u64,
    ) -> Result<Result<Self, String>, RefinementError> {
        if mapping.child_ids.is_empty() {
            return Err(RefinementError::NoChildren);
        }
        let parent = lookup(&mapping.parent_id)?;
        let mapped = apply_mapping(&parent, mapping)?;
        let mut children = Vec::new();
        let mut reqs = alloc::vec![(mapping.parent_id.as_str(), mapped)];
        for id in &mapping.child_ids {
            let child = lookup(id)?;
            reqs.push((id.as_str(), substitute(&child, mapping)));
            children.push(child);
        }

        let mut preds = Vec::new();
        let mut checked = Vec::new();
        let mut names = BTreeSet::new();
        for (id, ast) in &reqs {
            let key = classify_template(ast)
                .map_err(|e| RefinementError::Unsupported((*id).into(), e))?;
            names.extend(ast.columns());
            let mut slots = [None; 4];
            slots[0] = ast
                .scope_mode
                .as_deref()
                .map(|m| intern(&mut preds, Expr::var(m)));
            slots[1] = ast.trigger().map(|t| intern(&mut preds, t));
            slots[2] = ast.stop().map(|s| intern(&mut preds, s.clone()));
            slots[3] = Some(intern(&mut preds, ast.response.clone()));
            checked.push(Checked { key, slots });
        }
        if preds.len() > 64 {
            return Err(RefinementError::TooManyPredicates(preds.len()));
        }

        let mut columns = Vec::new();
        for name in names {
            let domain = glossary
                .for_column(&name)
                .and_then(|d| d.effective_domain())
                .filter(|d| !d.is_empty())
                .ok_or_else(|| RefinementError::MissingDomain(name.clone()))?;
            columns.push((name, domain));
        }
        let raw_states = state_count(columns.iter().map(|(_, d)| d.len()));
        if raw_states.exceeds(budget) {
            return Ok(Err(format!(
                "{raw_states} concrete states exceed the budget of {budget}; no length was searched"
            )));
        }

        let mut representatives = Vec::new();
        let mut signatures = Vec::new();
        let mut seen = BTreeSet::new();
        let mut digits = alloc::vec![0usize; columns.len()];
        loop {
            let state: BTreeMap<String, Value> = columns
                .iter()
                .zip(&digits)
                .map(|((n, d), &k)| (n.clone(), d[k].clone()))
                .collect();
            let mut sig = 0u64;
            for (i, p) in preds.iter().enumerate() {
                if eval_bool(p, &state)? {
                    sig |= 1 << i;
                }
            }
            if seen.insert(sig) {
                signatures.push(sig);
                representatives.push(state.into_values().collect());
            }
            // Odometer, last column fastest.
            let mut pos = digits.len();
            loop {
                if pos == 0 {
                    return Ok(Ok(RefinementProblem {
                        parent,
                        children,
                        mapping: mapping.clone(),
                        columns,
                        checked,
                        representatives,
                        signatures,
                        raw_states,
                    }));
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < columns[pos].1.len() {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    /// Number of distinct signatures.
    pub fn signature_count(&self) -> usize {
        self.signatures.len()
    }

    /// Signature sequences of length `len`, or `None` past `u128`.
    pub fn layer_size(&self, len: usize) -> Option<u128> {
        u32::try_from(len)
            .ok()
            .and_then(|l| (self.signatures.len() as u128).checked_pow(l))
    }

    fn holds(&self, req: &Checked, seq: &[usize]) -> bool {
        let r: Result<bool, core::convert::Infallible> =
            template_holds(req.key, seq.len(), |slot, i| {
                let p = req.slots[slot_index(slot)].expect("slot present for its template");
                Ok(self.signatures[seq[i]] & (1 << p) != 0)
            });
        match r {
            Ok(b) => b,
            Err(never) => match never {},
        }
    }

    fn violates(&self, seq: &[usize]) -> bool {
        self.checked[1..].iter().all(|c| self.holds(c, seq)) && !self.holds(&self.checked[0], seq)
    }

    /// Lexicographic index of the first violating sequence of length `len`
    /// whose first signature lies in `first`.
    pub fn search_layer(&self, len: usize, first: Range<usize>) -> Option<u128> {
        let s = self.signatures.len();
        let first = first.start.min(s)..first.end.min(s);
        if len == 0 || first.is_empty() {
            return None;
        }
        let mut seq = alloc::vec![0usize; len];
        seq[0] = first.start;
        loop {
            if self.violates(&seq) {
                return Some(
                    seq.iter()
                        .fold(0u128, |acc, &d| acc * s as u128 + d as u128),
                );
            }
            let mut pos = len;
            loop {
                if pos == 0 {
                    return None;
                }
                pos -= 1;
                seq[pos] += 1;
                let limit = if pos == 0 { first.end } else { s };
                if seq[pos] < limit {
                    break;
                }
                if pos == 0 {
                    return None;
                }
                seq[pos] = 0;
            }
        }
    }

    fn sequence(&self, len: usize, mut index: u128) -> Vec<usize> {
        let s = self.signatures.len() as u128;
        let mut seq = alloc::vec![0usize; len];
        for slot in seq.iter_mut().rev() {
            *slot = (index % s) as usize;
            index /= s;
        }
        seq
    }

    /// The concrete trace for a violating sequence, with every defined
    /// abstract name as a derived column. Re-verified against the original
    /// requirements before it is returned.
    ///
    /// # Panics
    /// If the trace does not satisfy every child and definition while
    /// violating the parent.
    pub fn counterexample(&self, len: usize, index: u128) -> Result<Trace, RefinementError> {
        let seq = self.sequence(len, index);
        let mut cols: BTreeMap<String, Vec<Value>> = BTreeMap::new();
        for (c, (name, _)) in self.columns.iter().enumerate() {
            cols.insert(
                name.clone(),
                seq.iter()
                    .map(|&k| self.representatives[k][c].clone())
                    .collect(),
            );
        }
        for d in &self.mapping.definitions {
            let mut values = Vec::with_capacity(len);
            for &k in &seq {
                let state: BTreeMap<String, Value> = self
                    .columns
                    .iter()
                    .enumerate()
                    .map(|(c, (n, _))| (n.clone(), self.representatives[k][c].clone()))
                    .collect();
                values.push(eval_expr(&d.concrete, &state)?);
            }
            cols.insert(d.abstract_name.clone(), values);
        }
        let trace = Trace::from_columns(cols).expect("columns share the sequence length");

        let children_hold = self
            .children
            .iter()
            .map(|c| eval_template_direct(c, &trace))
            .collect::<Result<Vec<bool>, _>>()?;
        let parent_holds = eval_template_direct(&self.parent, &trace)?;
        let definitions_hold = (0..trace.len()).all(|i| {
            self.mapping.definitions.iter().all(|d| {
                eval_expr(&d.concrete, &trace.state(i)).ok().as_ref()
                    == trace.value(i, &d.abstract_name)
            })
        });
        assert!(
            children_hold.iter().all(|b| *b) && definitions_hold && !parent_holds,
            "counterexample failed re-verification"
        );
        Ok(trace)
    }

    /// Total concrete traces of lengths `1..=bound`.
    pub fn raw_trace_count(&self, bound: usize) -> TraceCount {
        let TraceCount::Exact(s) = self.raw_states else {
            return TraceCount::Overflow;
        };
        (1..=bound)
            .try_fold(0u128, |acc, l| match TraceCount::power(s, l) {
                TraceCount::Exact(n) => acc.checked_add(n),
                TraceCount::Overflow => None,
            })
            .map_or(TraceCount::Overflow, TraceCount::Exact)
    }

    /// Runs the layers `1..=bound` with `search` answering each layer, the
    /// minimal violating index if any.
    pub fn run(
        &self,
        bound: usize,
        budget: u64,
        mut search: impl FnMut(&Self, usize) -> Option<u128>,
    ) -> Result<RefinementVerdict, RefinementError> {
        if bound == 0 {
            return Err(RefinementError::ZeroBound);
        }
        let mut work: u128 = 0;
        for len in 1..=bound {
            work = match self.layer_size(len).and_then(|n| work.checked_add(n)) {
                Some(w) if w <= budget as u128 => w,
                _ => {
                    return Ok(RefinementVerdict::Inconclusive(format!(
                        "searching length {len} over {} state signatures exceeds the budget of {budget}; \
                         no counterexample up to length {} over declared domains",
                        self.signatures.len(),
                        len - 1
                    )))
                }
            };
            if let Some(index) = search(self, len) {
                return Ok(RefinementVerdict::Counterexample(
                    self.counterexample(len, index)?,
                ));
            }
        }
        Ok(RefinementVerdict::Refines {
            bound,
            traces: self.raw_trace_count(bound),
        })
    }
}

/// Checks that the children of `mapping` refine its parent on every trace of
/// length up to `bound`.
pub fn check_refinement(
    project: &Project,
    mapping: &AbstractionMapping,
    bound: usize,
    budget: u64,
) -> Result<RefinementVerdict, RefinementError> {
    if bound == 0 {
        return Err(RefinementError::ZeroBound);
    }
    match RefinementProblem::prepare(project, mapping, budget)? {
        Ok(problem) => problem.run(bound, budget, |p, len| {
            p.search_layer(len, 0..p.signature_count())
        }),
        Err(reason) => Ok(RefinementVerdict::Inconclusive(reason)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{RequirementRecord, VarKind, VariableDecl};
    use crate::parser::parse_expr;
    use crate::trace::DEFAULT_BUDGET;

    fn project(reqs: &[(&str, &str)], bools: &[&str]) -> Project {
        let mut p = Project::new("t");
        for (id, text) in reqs {
            p.requirements
                .push(RequirementRecord::parsed(id, &[], text).unwrap());
        }
        for b in bools {
            p.glossary.declare(VariableDecl::boolean(b, VarKind::Input));
        }
        p
    }

    fn id(s: &str) -> RequirementId {
        RequirementId::new(s).unwrap()
    }

    fn mapping(parent: &str, children: &[&str]) -> AbstractionMapping {
        AbstractionMapping {
            parent_id: id(parent),
            child_ids: children.iter().map(|c| id(c)).collect(),
            definitions: Vec::new(),
            superposition_note: String::new(),
        }
    }

    #[test]
    fn reflexivity() {
        let p = project(&[("A", "Controller shall always (p)")], &["p"]);
        let v = check_refinement(
            &p,
            &AbstractionMapping::identity(&id("A")),
            4,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(
            v,
            RefinementVerdict::Refines {
                bound: 4,
                traces: TraceCount::Exact(2 + 4 + 8 + 16)
            }
        );
        assert!(v
            .summary()
            .contains("no counterexample up to bound 4 over declared domains"));
    }

    #[test]
    fn weaker_child_gives_first_counterexample() {
        let p = project(
            &[
                ("P", "Controller shall always (p & q)"),
                ("C", "Controller shall always (p)"),
            ],
            &["p", "q"],
        );
        let v = check_refinement(&p, &mapping("P", &["C"]), 3, DEFAULT_BUDGET).unwrap();
        // Lexicographically first length-1 trace with p true and q false.
        let expected = Trace::from_columns([
            ("p", alloc::vec![Value::Bool(true)]),
            ("q", alloc::vec![Value::Bool(false)]),
        ])
        .unwrap();
        assert_eq!(v, RefinementVerdict::Counterexample(expected));
    }

    #[test]
    fn definitions_become_derived_columns() {
        let p = project(
            &[
                ("P", "if (fault) Controller shall (alarm)"),
                ("C", "if (a | b) Controller shall (alarm)"),
            ],
            &["fault", "a", "b", "alarm"],
        );
        let mut m = mapping("P", &["C"]);
        m.definitions.push(Definition {
            abstract_name: "fault".into(),
            concrete: parse_expr("a | b").unwrap(),
        });
        let v = check_refinement(&p, &m, 3, DEFAULT_BUDGET).unwrap();
        assert!(matches!(v, RefinementVerdict::Refines { .. }));

        m.definitions[0].concrete = parse_expr("a | !b").unwrap();
        let RefinementVerdict::Counterexample(t) =
            check_refinement(&p, &m, 3, DEFAULT_BUDGET).unwrap()
        else {
            panic!("expected a counterexample");
        };
        assert_eq!(t.variables(), ["a", "alarm", "b", "fault"]);
        assert_eq!(t.value(0, "fault"), Some(&Value::Bool(true)));
    }

    #[test]
    fn mapping_errors() {
        let p = project(&[("P", "if (x) Controller shall (y)")], &["x", "y"]);
        let mut m = AbstractionMapping::identity(&id("P"));
        m.definitions.push(Definition {
            abstract_name: "zz".into(),
            concrete: Expr::Bool(true),
        });
        assert_eq!(
            check_refinement(&p, &m, 1, DEFAULT_BUDGET),
            Err(RefinementError::UnknownAbstractName("zz".into()))
        );
        let p = project(&[("P", "if (x) Controller shall (n > 1)")], &["x"]);
        assert_eq!(
            check_refinement(
                &p,
                &AbstractionMapping::identity(&id("P")),
                1,
                DEFAULT_BUDGET
            ),
            Err(RefinementError::MissingDomain("n".into()))
        );
    }

    #[test]
    fn budget_limits_searched_layers() {
        let p = project(&[("A", "if (p) Controller shall (q)")], &["p", "q"]);
        let v = check_refinement(&p, &AbstractionMapping::identity(&id("A")), 5, 100).unwrap();
        let RefinementVerdict::Inconclusive(reason) = v else {
            panic!("expected inconclusive")
        };
        assert!(
            reason.contains("no counterexample up to length 3"),
            "{reason}"
        );
    }

    #[test]
    fn apply_mapping_substitutes_only_defined_names() {
        let ast = crate::parser::parse_requirement("if (a & b) Controller shall (c)").unwrap();
        let mut m = mapping("P", &["C"]);
        assert_eq!(apply_mapping(&ast, &m).unwrap(), ast);
        m.definitions.push(Definition {
            abstract_name: "a".into(),
            concrete: parse_expr("x > 1").unwrap(),
        });
        let mapped = apply_mapping(&ast, &m).unwrap();
        assert_eq!(
            crate::parser::pretty_print(&mapped),
            "if (x > 1 & b) Controller shall (c)"
        );
    }
}
