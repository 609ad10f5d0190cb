//! Finite traces, expression and formula evaluation, the direct template
//! oracle and exhaustive trace enumeration.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Formula, Interval};
use crate::model::{BinOp, Expr, FretishAst, Value, VariableDecl};
use crate::parser::print_expr;
use crate::semantics::{
    classify_template, ScopeOption, TemplateKey, TimingOption, UnsupportedTemplate,
};

/// Enumeration budget used when none is configured.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("a trace needs at least one state")]
    Empty,
    #[error("variable `{0}` is listed twice")]
    DuplicateVariable(String),
    #[error("state {index} has {found} values, expected {expected}")]
    Ragged {
        index: usize,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("type mismatch in `{0}`")]
    TypeMismatch(String),
    #[error("arithmetic overflow in `{0}`")]
    Overflow(String),
    #[error(transparent)]
    Unsupported(#[from] UnsupportedTemplate),
}

/// A rectangular sequence of states. Columns are plain variables or
/// fully-applied observation terms such as `sensorValue(S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    variables: Vec<String>,
    index: BTreeMap<String, usize>,
    states: Vec<Vec<Value>>,
}

impl Trace {
    pub fn new(variables: Vec<String>, states: Vec<Vec<Value>>) -> Result<Self, TraceError> {
        if states.is_empty() {
            return Err(TraceError::Empty);
        }
        let mut index = BTreeMap::new();
        for (i, v) in variables.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(TraceError::DuplicateVariable(v.clone()));
            }
        }
        for (i, s) in states.iter().enumerate() {
            if s.len() != variables.len() {
                return Err(TraceError::Ragged {
                    index: i,
                    expected: variables.len(),
                    found: s.len(),
                });
            }
        }
        Ok(Trace {
            variables,
            index,
            states,
        })
    }

    /// Builds a trace from named columns of equal length.
    pub fn from_columns<S: Into<String>>(
        columns: impl IntoIterator<Item = (S, Vec<Value>)>,
    ) -> Result<Self, TraceError> {
        let mut names = Vec::new();
        let mut cols: Vec<Vec<Value>> = Vec::new();
        for (n, c) in columns {
            names.push(n.into());
            cols.push(c);
        }
        let len = cols.first().map_or(0, Vec::len);
        if let Some((i, c)) = cols.iter().enumerate().find(|(_, c)| c.len() != len) {
            return Err(TraceError::Ragged {
                index: i,
                expected: len,
                found: c.len(),
            });
        }
        let states = (0..len)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Trace::new(names, states)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// Always false; traces are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn states(&self) -> &[Vec<Value>] {
        &self.states
    }

    pub fn value(&self, i: usize, column: &str) -> Option<&Value> {
        self.states.get(i)?.get(*self.index.get(column)?)
    }

    pub fn state(&self, i: usize) -> State<'_> {
        State { trace: self, i }
    }

    /// The same trace with states in reverse order.
    pub fn reversed(&self) -> Trace {
        let mut t = self.clone();
        t.states.reverse();
        t
    }
}

/// Column lookup for expression evaluation.
pub trait Valuation {
    fn get(&self, column: &str) -> Option<&Value>;
}

/// One index of a trace.
#[derive(Debug, Clone, Copy)]
pub struct State<'a> {
    trace: &'a Trace,
    i: usize,
}

impl Valuation for State<'_> {
    fn get(&self, column: &str) -> Option<&Value> {
        self.trace.value(self.i, column)
    }
}

impl Valuation for BTreeMap<String, Value> {
    fn get(&self, column: &str) -> Option<&Value> {
        BTreeMap::get(self, column)
    }
}

fn mismatch(e: &Expr) -> EvalError {
    EvalError::TypeMismatch(print_expr(e))
}

fn overflow(e: &Expr) -> EvalError {
    EvalError::Overflow(print_expr(e))
}

/// Evaluates an expression in one state.
///
/// Arithmetic on `null` yields `null`; ordering comparisons involving `null`
/// are false; `null` in a boolean position is a type mismatch.
pub fn eval_expr(e: &Expr, state: &impl Valuation) -> Result<Value, EvalError> {
    Ok(match e {
        Expr::Bool(b) => Value::Bool(*b),
        Expr::Null => Value::Null,
        Expr::Num(n) => Value::Num(*n),
        Expr::Var(v) => state
            .get(v)
            .cloned()
            .ok_or_else(|| EvalError::UnboundSymbol(v.clone()))?,
        Expr::Call(name, args) if name == "diff" || name == "abs" => {
            let vals = args
                .iter()
                .map(|a| eval_expr(a, state))
                .collect::<Result<Vec<_>, _>>()?;
            match (name.as_str(), vals.as_slice()) {
                (_, [.., Value::Null]) | (_, [Value::Null, ..]) => Value::Null,
                ("diff", [Value::Num(a), Value::Num(b)]) => Value::Num(
                    a.checked_sub(*b)
                        .and_then(|d| d.checked_abs())
                        .ok_or_else(|| overflow(e))?,
                ),
                ("abs", [Value::Num(a)]) => Value::Num(a.checked_abs().ok_or_else(|| overflow(e))?),
                _ => return Err(mismatch(e)),
            }
        }
        Expr::Call(..) => {
            let column = print_expr(e);
            state
                .get(&column)
                .cloned()
                .ok_or(EvalError::UnboundSymbol(column))?
        }
        Expr::Neg(a) => match eval_expr(a, state)? {
            Value::Num(n) => Value::Num(n.checked_neg().ok_or_else(|| overflow(e))?),
            Value::Null => Value::Null,
            _ => return Err(mismatch(e)),
        },
        Expr::Not(a) => Value::Bool(!eval_bool(a, state)?),
        Expr::Binary(op, l, r) => {
            let lv = eval_expr(l, state)?;
            let rv = eval_expr(r, state)?;
            eval_binary(e, *op, lv, rv)?
        }
    })
}

fn eval_binary(e: &Expr, op: BinOp, l: Value, r: Value) -> Result<Value, EvalError> {
    use Value::{Bool, Null, Num};
    Ok(match op {
        BinOp::And | BinOp::Or | BinOp::Implies => match (l, r) {
            (Bool(a), Bool(b)) => Bool(match op {
                BinOp::And => a && b,
                BinOp::Or => a || b,
                _ => !a || b,
            }),
            _ => return Err(mismatch(e)),
        },
        BinOp::Add | BinOp::Sub => match (l, r) {
            (Num(a), Num(b)) => {
                let v = if op == BinOp::Add {
                    a.checked_add(b)
                } else {
                    a.checked_sub(b)
                };
                Num(v.ok_or_else(|| overflow(e))?)
            }
            (Null, Null | Num(_)) | (Num(_), Null) => Null,
            _ => return Err(mismatch(e)),
        },
        BinOp::Eq | BinOp::Ne => {
            let same_kind = matches!(
                (&l, &r),
                (Null, _)
                    | (_, Null)
                    | (Bool(_), Bool(_))
                    | (Num(_), Num(_))
                    | (Value::Enum(_), Value::Enum(_))
            );
            if !same_kind {
                return Err(mismatch(e));
            }
            Bool((l == r) == (op == BinOp::Eq))
        }
        BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => match (l, r) {
            (Num(a), Num(b)) => Bool(match op {
                BinOp::Lt => a < b,
                BinOp::Le => a <= b,
                BinOp::Gt => a > b,
                _ => a >= b,
            }),
            (Null, Null | Num(_)) | (Num(_), Null) => Bool(false),
            _ => return Err(mismatch(e)),
        },
    })
}

/// Evaluates an expression that must be boolean.
pub fn eval_bool(e: &Expr, state: &impl Valuation) -> Result<bool, EvalError> {
    match eval_expr(e, state)? {
        Value::Bool(b) => Ok(b),
        _ => Err(mismatch(e)),
    }
}

/// Evaluates `f` at index `i` of `t`.
///
/// # Panics
/// If `i` is not an index of `t`.
pub fn eval_formula(f: &Formula, t: &Trace, i: usize) -> Result<bool, EvalError> {
    assert!(i < t.len(), "index {i} outside trace of length {}", t.len());
    Ok(eval_formula_all(f, t)?[i])
}

/// Truth value of `f` at every index of `t`.
pub fn eval_formula_all(f: &Formula, t: &Trace) -> Result<Vec<bool>, EvalError> {
    let n = t.len();
    let all = |g: &Formula| eval_formula_all(g, t);
    let zip =
        |a: &Formula, b: &Formula, op: fn(bool, bool) -> bool| -> Result<Vec<bool>, EvalError> {
            Ok(all(a)?
                .into_iter()
                .zip(all(b)?)
                .map(|(x, y)| op(x, y))
                .collect())
        };
    let negated = |v: Vec<bool>| -> Vec<bool> { v.into_iter().map(|x| !x).collect() };
    let unit_step = |iv: &Option<Interval>| iv.is_none_or(|iv| iv.contains(1));
    Ok(match f {
        Formula::Const(b) => vec![*b; n],
        Formula::Atom(e) => (0..n)
            .map(|i| eval_bool(e, &t.state(i)))
            .collect::<Result<_, _>>()?,
        Formula::FirstPoint => (0..n).map(|i| i == 0).collect(),
        Formula::LastPoint => (0..n).map(|i| i + 1 == n).collect(),
        Formula::Not(a) => negated(all(a)?),
        Formula::And(a, b) => zip(a, b, |p, q| p && q)?,
        Formula::Or(a, b) => zip(a, b, |p, q| p || q)?,
        Formula::Implies(a, b) => zip(a, b, |p, q| !p || q)?,
        Formula::Next(a, iv) => {
            let v = all(a)?;
            (0..n)
                .map(|i| unit_step(iv) && i + 1 < n && v[i + 1])
                .collect()
        }
        Formula::Previous(a, iv) => {
            let v = all(a)?;
            (0..n).map(|i| unit_step(iv) && i > 0 && v[i - 1]).collect()
        }
        Formula::Until(a, b, iv) => until(&all(a)?, &all(b)?, *iv),
        Formula::Finally(a, iv) => until(&vec![true; n], &all(a)?, *iv),
        Formula::Globally(a, iv) => negated(until(&vec![true; n], &negated(all(a)?), *iv)),
        Formula::Since(a, b, iv) => since(&all(a)?, &all(b)?, *iv),
        Formula::Once(a, iv) => since(&vec![true; n], &all(a)?, *iv),
        Formula::Historically(a, iv) => negated(since(&vec![true; n], &negated(all(a)?), *iv)),
    })
}

fn until(a: &[bool], b: &[bool], iv: Option<Interval>) -> Vec<bool> {
    let n = a.len();
    match iv {
        None => {
            let mut out = vec![false; n];
            for i in (0..n).rev() {
                out[i] = b[i] || (a[i] && i + 1 < n && out[i + 1]);
            }
            out
        }
        Some(iv) => (0..n)
            .map(|i| {
                (i..n)
                    .take_while(|j| j - i <= iv.hi)
                    .any(|j| iv.contains(j - i) && b[j] && a[i..j].iter().all(|x| *x))
            })
            .collect(),
    }
}

fn since(a: &[bool], b: &[bool], iv: Option<Interval>) -> Vec<bool> {
    let n = a.len();
    match iv {
        None => {
            let mut out = vec![false; n];
            for i in 0..n {
                out[i] = b[i] || (a[i] && i > 0 && out[i - 1]);
            }
            out
        }
        Some(iv) => (0..n)
            .map(|i| {
                (0..=i)
                    .rev()
                    .take_while(|j| i - j <= iv.hi)
                    .any(|j| iv.contains(i - j) && b[j] && a[j + 1..=i].iter().all(|x| *x))
            })
            .collect(),
    }
}

/// The parts of a requirement the template semantics reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Mode,
    Trigger,
    Stop,
    Response,
}

/// Direct template semantics over a trace of `len` states, where `at`
/// answers the value of a slot at an index. Only slots used by `key` are
/// queried.
pub fn template_holds<E>(
    key: TemplateKey,
    len: usize,
    mut at: impl FnMut(Slot, usize) -> Result<bool, E>,
) -> Result<bool, E> {
    let mut column = |slot| {
        (0..len)
            .map(|i| at(slot, i))
            .collect::<Result<Vec<bool>, E>>()
    };
    let scoped = key.scope() == ScopeOption::In;
    let mode = if scoped {
        column(Slot::Mode)?
    } else {
        vec![true; len]
    };
    let trigger = match key.timing() {
        TimingOption::Always => vec![true; len],
        _ => column(Slot::Trigger)?,
    };
    let stop = match key.timing() {
        TimingOption::Until => column(Slot::Stop)?,
        _ => vec![false; len],
    };
    let response = column(Slot::Response)?;

    let mut start = 0;
    while start < len {
        if !mode[start] {
            start += 1;
            continue;
        }
        let end = (start..len).find(|&j| !mode[j]).unwrap_or(len);
        let ok = match key.timing() {
            TimingOption::Always => response[start..end].iter().all(|r| *r),
            timing => (start..end)
                .filter(|&i| trigger[i] && (i == start || !trigger[i - 1]))
                .all(|i| match timing {
                    TimingOption::Eventually => response[i..end].iter().any(|r| *r),
                    _ => (i..end).take_while(|&j| !stop[j]).all(|j| response[j]),
                }),
        };
        if !ok {
            return Ok(false);
        }
        start = end;
    }
    Ok(true)
}

/// The template verdict of `ast` on `t`, by interval and trigger scanning.
pub fn eval_template_direct(ast: &FretishAst, t: &Trace) -> Result<bool, EvalError> {
    let key = classify_template(ast)?;
    let mode = ast.scope_mode.as_deref().map(Expr::var);
    let trigger = ast.trigger();
    let stop = ast.stop();
    template_holds(key, t.len(), |slot, i| {
        let e = match slot {
            Slot::Mode => mode.as_ref(),
            Slot::Trigger => trigger.as_ref(),
            Slot::Stop => stop,
            Slot::Response => Some(&ast.response),
        };
        eval_bool(e.expect("slot present for its template"), &t.state(i))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerationError {
    #[error("enumeration needs {count} traces, over the budget of {budget}")]
    BudgetExceeded { count: TraceCount, budget: u64 },
    #[error("variable `{0}` has no finite domain")]
    MissingDomain(String),
    #[error("variable `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("trace length must be positive")]
    ZeroLength,
}

/// A trace count that may exceed `u128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TraceCount {
    Exact(u128),
    Overflow,
}

impl TraceCount {
    /// `base^exp`.
    pub fn power(base: u128, exp: usize) -> TraceCount {
        u32::try_from(exp)
            .ok()
            .and_then(|e| base.checked_pow(e))
            .map_or(TraceCount::Overflow, TraceCount::Exact)
    }

    pub fn exceeds(self, budget: u64) -> bool {
        match self {
            TraceCount::Exact(n) => n > budget as u128,
            TraceCount::Overflow => true,
        }
    }
}

impl fmt::Display for TraceCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceCount::Exact(n) => write!(f, "{n}"),
            TraceCount::Overflow => f.write_str("more than 2^128"),
        }
    }
}

/// Number of states (product of domain sizes) over `vars`.
pub fn state_count(sizes: impl IntoIterator<Item = usize>) -> TraceCount {
    sizes
        .into_iter()
        .try_fold(1u128, |acc, s| acc.checked_mul(s as u128))
        .map_or(TraceCount::Overflow, TraceCount::Exact)
}

/// Every trace of exactly `length` states over the variables' finite
/// domains, in lexicographic order of (state index, variable order, domain
/// order).
pub fn enumerate_traces(
    vars: &[VariableDecl],
    length: usize,
    budget: u64,
) -> Result<TraceEnumerator, EnumerationError> {
    if length == 0 {
        return Err(EnumerationError::ZeroLength);
    }
    let mut domains = Vec::with_capacity(vars.len());
    for v in vars {
        let d = v
            .effective_domain()
            .ok_or_else(|| EnumerationError::MissingDomain(v.name.clone()))?;
        if d.is_empty() {
            return Err(EnumerationError::EmptyDomain(v.name.clone()));
        }
        domains.push(d);
    }
    let count = match state_count(domains.iter().map(Vec::len)) {
        TraceCount::Exact(s) => TraceCount::power(s, length),
        TraceCount::Overflow => TraceCount::Overflow,
    };
    if count.exceeds(budget) {
        return Err(EnumerationError::BudgetExceeded { count, budget });
    }
    Ok(TraceEnumerator {
        names: vars.iter().map(|v| v.name.to_owned()).collect(),
        domains,
        digits: vec![0; length * vars.len()],
        length,
        done: false,
    })
}

/// Iterator returned by [`enumerate_traces`].
#[derive(Debug, Clone)]
pub struct TraceEnumerator {
    names: Vec<String>,
    domains: Vec<Vec<Value>>,
    /// Odometer, most significant digit first.
    digits: Vec<usize>,
    length: usize,
    done: bool,
}

impl Iterator for TraceEnumerator {
    type Item = Trace;

    fn next(&mut self) -> Option<Trace> {
        if self.done {
            return None;
        }
        let width = self.names.len();
        let states = (0..self.length)
            .map(|s| {
                (0..width)
                    .map(|v| self.domains[v][self.digits[s * width + v]].clone())
                    .collect()
            })
            .collect();
        let trace = Trace::new(self.names.clone(), states).expect("rectangular by construction");
        self.done = true;
        for pos in (0..self.digits.len()).rev() {
            let size = self.domains[pos % width.max(1)].len();
            self.digits[pos] += 1;
            if self.digits[pos] < size {
                self.done = false;
                break;
            }
            self.digits[pos] = 0;
        }
        Some(trace)
    }
}
