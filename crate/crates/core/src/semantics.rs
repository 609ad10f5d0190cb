//! Semantic templates: classification of parsed requirements, compilation to
//! future-time and past-time formulas, and the timeline diagram model.
//!
//! Template meaning, shared by the compilers here and by
//! [`crate::trace::eval_template_direct`]:
//!
//! * Scope intervals are the whole trace (no scope) or each maximal run of
//!   indices where the mode holds.
//! * A trigger point is an index of an interval where the trigger holds and
//!   either the index starts the interval or the trigger was false just before.
//! * `eventually`: the response holds at some later-or-equal index of the
//!   same interval.
//! * `until`: the response holds from the trigger point up to, excluding, the
//!   first index where the stop condition holds; without a stop it holds to
//!   the end of the interval.
//! * `always`: the response holds at every index of every interval.

use alloc::string::String;
use core::fmt;

use crate::formula::Formula;
use crate::model::{Expr, FretishAst, Timing};
use crate::parser::print_expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScopeOption {
    Null,
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionOption {
    Null,
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TimingOption {
    Eventually,
    Until,
    Always,
}

impl ScopeOption {
    pub fn as_str(self) -> &'static str {
        match self {
            ScopeOption::Null => "null",
            ScopeOption::In => "in",
        }
    }
}

impl ConditionOption {
    pub fn as_str(self) -> &'static str {
        match self {
            ConditionOption::Null => "null",
            ConditionOption::Regular => "regular",
        }
    }
}

impl TimingOption {
    pub fn as_str(self) -> &'static str {
        match self {
            TimingOption::Eventually => "eventually",
            TimingOption::Until => "until",
            TimingOption::Always => "always",
        }
    }
}

/// One of the supported (scope, condition, timing) combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemplateKey {
    scope: ScopeOption,
    condition: ConditionOption,
    timing: TimingOption,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unsupported template [{scope}, {condition}, {timing}]")]
pub struct UnsupportedTemplate {
    pub scope: &'static str,
    pub condition: &'static str,
    pub timing: &'static str,
}

impl TemplateKey {
    pub const NULL_REGULAR_EVENTUALLY: TemplateKey = TemplateKey {
        scope: ScopeOption::Null,
        condition: ConditionOption::Regular,
        timing: TimingOption::Eventually,
    };
    pub const NULL_REGULAR_UNTIL: TemplateKey = TemplateKey {
        scope: ScopeOption::Null,
        condition: ConditionOption::Regular,
        timing: TimingOption::Until,
    };
    pub const IN_REGULAR_UNTIL: TemplateKey = TemplateKey {
        scope: ScopeOption::In,
        condition: ConditionOption::Regular,
        timing: TimingOption::Until,
    };
    pub const NULL_NULL_ALWAYS: TemplateKey = TemplateKey {
        scope: ScopeOption::Null,
        condition: ConditionOption::Null,
        timing: TimingOption::Always,
    };

    pub const SUPPORTED: [TemplateKey; 4] = [
        Self::NULL_REGULAR_EVENTUALLY,
        Self::NULL_REGULAR_UNTIL,
        Self::IN_REGULAR_UNTIL,
        Self::NULL_NULL_ALWAYS,
    ];

    pub fn new(
        scope: ScopeOption,
        condition: ConditionOption,
        timing: TimingOption,
    ) -> Result<Self, UnsupportedTemplate> {
        let key = TemplateKey {
            scope,
            condition,
            timing,
        };
        if Self::SUPPORTED.contains(&key) {
            Ok(key)
        } else {
            Err(UnsupportedTemplate {
                scope: scope.as_str(),
                condition: condition.as_str(),
                timing: timing.as_str(),
            })
        }
    }

    pub fn scope(self) -> ScopeOption {
        self.scope
    }

    pub fn condition(self) -> ConditionOption {
        self.condition
    }

    pub fn timing(self) -> TimingOption {
        self.timing
    }
}

/// `in,regular,until`
impl fmt::Display for TemplateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{}",
            self.scope.as_str(),
            self.condition.as_str(),
            self.timing.as_str()
        )
    }
}

pub fn classify_template(ast: &FretishAst) -> Result<TemplateKey, UnsupportedTemplate> {
    let scope = if ast.scope_mode.is_some() {
        ScopeOption::In
    } else {
        ScopeOption::Null
    };
    let condition = if ast.when_cond.is_some() || ast.if_cond.is_some() {
        ConditionOption::Regular
    } else {
        ConditionOption::Null
    };
    let timing = match ast.timing {
        Timing::Eventually => TimingOption::Eventually,
        Timing::Always => TimingOption::Always,
        Timing::Until(_) => TimingOption::Until,
    };
    TemplateKey::new(scope, condition, timing)
}

fn atom(e: &Expr) -> Formula {
    Formula::atom(e.clone())
}

/// Trigger point of `c` over the whole trace: `c & (FTP | Y !c)`.
fn rise(c: &Expr) -> Formula {
    Formula::and(
        atom(c),
        Formula::or(
            Formula::FirstPoint,
            Formula::previous(Formula::negation(atom(c))),
        ),
    )
}

/// Trigger point of `c` inside runs of mode `m`.
fn rise_in_mode(m: &Expr, c: &Expr) -> Formula {
    Formula::and(
        atom(m),
        Formula::and(
            atom(c),
            Formula::or(
                Formula::FirstPoint,
                Formula::or(
                    Formula::previous(Formula::negation(atom(m))),
                    Formula::previous(Formula::negation(atom(c))),
                ),
            ),
        ),
    )
}

/// The pieces of a classified requirement.
struct Slots<'a> {
    key: TemplateKey,
    mode: Option<Expr>,
    trigger: Option<Expr>,
    stop: Option<&'a Expr>,
    response: &'a Expr,
}

fn slots(ast: &FretishAst) -> Result<Slots<'_>, UnsupportedTemplate> {
    Ok(Slots {
        key: classify_template(ast)?,
        mode: ast.scope_mode.as_deref().map(Expr::var),
        trigger: ast.trigger(),
        stop: ast.stop(),
        response: &ast.response,
    })
}

// Supported keys guarantee the slots each template reads are present.
fn present<T>(slot: Option<T>) -> T {
    slot.expect("slot guaranteed by template classification")
}

/// Future-time formula, to be evaluated at index 0.
pub fn formalize_ft(ast: &FretishAst) -> Result<Formula, UnsupportedTemplate> {
    let s = slots(ast)?;
    let r = atom(s.response);
    Ok(match s.key {
        TemplateKey::NULL_NULL_ALWAYS => Formula::globally(r),
        TemplateKey::NULL_REGULAR_EVENTUALLY => {
            let c = present(s.trigger);
            Formula::globally(Formula::implies(rise(&c), Formula::finally(r)))
        }
        TemplateKey::NULL_REGULAR_UNTIL => {
            let c = present(s.trigger);
            let stop = atom(present(s.stop));
            Formula::globally(Formula::implies(
                rise(&c),
                Formula::or(Formula::until(r.clone(), stop), Formula::globally(r)),
            ))
        }
        TemplateKey::IN_REGULAR_UNTIL => {
            let c = present(s.trigger);
            let m = present(s.mode);
            let release = Formula::or(atom(present(s.stop)), Formula::negation(atom(&m)));
            Formula::globally(Formula::implies(
                rise_in_mode(&m, &c),
                Formula::or(Formula::until(r.clone(), release), Formula::globally(r)),
            ))
        }
        _ => unreachable!("classification admits only supported keys"),
    })
}

/// Past-time formula, to be evaluated at the last index.
pub fn formalize_pt(ast: &FretishAst) -> Result<Formula, UnsupportedTemplate> {
    let s = slots(ast)?;
    let r = atom(s.response);
    Ok(match s.key {
        TemplateKey::NULL_NULL_ALWAYS => Formula::historically(r),
        TemplateKey::NULL_REGULAR_EVENTUALLY => {
            // No trigger point whose response is still outstanding at the end.
            let c = present(s.trigger);
            let not_r = Formula::negation(r);
            Formula::negation(Formula::since(not_r.clone(), Formula::and(rise(&c), not_r)))
        }
        TemplateKey::NULL_REGULAR_UNTIL => {
            let c = present(s.trigger);
            let not_s = Formula::negation(atom(present(s.stop)));
            let pending = Formula::since(not_s.clone(), Formula::and(rise(&c), not_s));
            Formula::historically(Formula::implies(pending, r))
        }
        TemplateKey::IN_REGULAR_UNTIL => {
            let c = present(s.trigger);
            let m = present(s.mode);
            let not_s = Formula::negation(atom(present(s.stop)));
            let pending = Formula::since(
                Formula::and(atom(&m), not_s.clone()),
                Formula::and(rise_in_mode(&m, &c), not_s),
            );
            Formula::historically(Formula::implies(pending, r))
        }
        _ => unreachable!("classification admits only supported keys"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Obligation {
    Eventual,
    ContinuousUntilStop,
    ContinuousAlways,
}

impl Obligation {
    pub fn as_str(self) -> &'static str {
        match self {
            Obligation::Eventual => "eventual",
            Obligation::ContinuousUntilStop => "continuous-until-stop",
            Obligation::ContinuousAlways => "continuous-always",
        }
    }
}

/// Labels of the timeline picture: mode (`M`), triggering condition (`TC`)
/// and stopping condition (`SC`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramModel {
    pub mode_label: Option<String>,
    pub trigger_label: String,
    pub stop_label: String,
    pub obligation: Obligation,
    pub response_label: String,
}

pub const NO_LABEL: &str = "none";

pub fn render_diagram(ast: &FretishAst) -> Result<DiagramModel, UnsupportedTemplate> {
    let key = classify_template(ast)?;
    let obligation = match key.timing() {
        TimingOption::Eventually => Obligation::Eventual,
        TimingOption::Until => Obligation::ContinuousUntilStop,
        TimingOption::Always => Obligation::ContinuousAlways,
    };
    Ok(DiagramModel {
        mode_label: ast.scope_mode.clone(),
        trigger_label: ast
            .trigger()
            .map_or_else(|| NO_LABEL.into(), |t| print_expr(&t)),
        stop_label: ast.stop().map_or_else(|| NO_LABEL.into(), print_expr),
        obligation,
        response_label: print_expr(&ast.response),
    })
}
