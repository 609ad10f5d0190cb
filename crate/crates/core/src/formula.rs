//! Temporal formulas over finite traces, with future and past operators.

use alloc::boxed::Box;
use core::fmt;

use crate::model::Expr;

/// Metric bound `[lo, hi]` in trace steps, relative to the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn contains(self, distance: usize) -> bool {
        self.lo <= distance && distance <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Atom(Expr),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// True only at index 0.
    FirstPoint,
    /// True only at the final index.
    LastPoint,
    Next(Box<Formula>, Option<Interval>),
    Until(Box<Formula>, Box<Formula>, Option<Interval>),
    Finally(Box<Formula>, Option<Interval>),
    Globally(Box<Formula>, Option<Interval>),
    Previous(Box<Formula>, Option<Interval>),
    Since(Box<Formula>, Box<Formula>, Option<Interval>),
    Once(Box<Formula>, Option<Interval>),
    Historically(Box<Formula>, Option<Interval>),
}

/// Which direction a formula is meant to be evaluated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimeDirection {
    /// Evaluated at index 0.
    Future,
    /// Evaluated at the last index.
    Past,
}

impl Formula {
    pub fn atom(e: Expr) -> Formula {
        Formula::Atom(e)
    }

    pub fn negation(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f), None)
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b), None)
    }

    pub fn finally(f: Formula) -> Formula {
        Formula::Finally(Box::new(f), None)
    }

    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f), None)
    }

    pub fn previous(f: Formula) -> Formula {
        Formula::Previous(Box::new(f), None)
    }

    pub fn since(a: Formula, b: Formula) -> Formula {
        Formula::Since(Box::new(a), Box::new(b), None)
    }

    pub fn once(f: Formula) -> Formula {
        Formula::Once(Box::new(f), None)
    }

    pub fn historically(f: Formula) -> Formula {
        Formula::Historically(Box::new(f), None)
    }

    fn any(&self, pred: &impl Fn(&Formula) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Formula::Const(_) | Formula::Atom(_) | Formula::FirstPoint | Formula::LastPoint => {
                false
            }
            Formula::Not(f)
            | Formula::Next(f, _)
            | Formula::Finally(f, _)
            | Formula::Globally(f, _)
            | Formula::Previous(f, _)
            | Formula::Once(f, _)
            | Formula::Historically(f, _) => f.any(pred),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b, _)
            | Formula::Since(a, b, _) => a.any(pred) || b.any(pred),
        }
    }

    pub fn has_future_ops(&self) -> bool {
        self.any(&|f| {
            matches!(
                f,
                Formula::Next(..)
                    | Formula::Until(..)
                    | Formula::Finally(..)
                    | Formula::Globally(..)
            )
        })
    }

    pub fn has_past_ops(&self) -> bool {
        self.any(&|f| {
            matches!(
                f,
                Formula::Previous(..)
                    | Formula::Since(..)
                    | Formula::Once(..)
                    | Formula::Historically(..)
            )
        })
    }

    /// Past operators other than `Previous` (which future-time formulas use
    /// for edge detection).
    pub fn has_non_edge_past_ops(&self) -> bool {
        self.any(&|f| {
            matches!(
                f,
                Formula::Since(..) | Formula::Once(..) | Formula::Historically(..)
            )
        })
    }

    pub fn has_intervals(&self) -> bool {
        self.any(&|f| {
            matches!(
                f,
                Formula::Next(_, Some(_))
                    | Formula::Until(_, _, Some(_))
                    | Formula::Finally(_, Some(_))
                    | Formula::Globally(_, Some(_))
                    | Formula::Previous(_, Some(_))
                    | Formula::Since(_, _, Some(_))
                    | Formula::Once(_, Some(_))
                    | Formula::Historically(_, Some(_))
            )
        })
    }

    /// Whether the formula respects the operator discipline of its direction.
    pub fn fits(&self, direction: TimeDirection) -> bool {
        match direction {
            TimeDirection::Future => !self.has_non_edge_past_ops(),
            TimeDirection::Past => !self.has_future_ops(),
        }
    }
}

fn write_op(
    f: &mut fmt::Formatter<'_>,
    op: &str,
    iv: &Option<Interval>,
    args: &[&Formula],
) -> fmt::Result {
    write!(f, "({op}")?;
    if let Some(iv) = iv {
        write!(f, "[{},{}]", iv.lo, iv.hi)?;
    }
    for a in args {
        write!(f, " {a}")?;
    }
    f.write_str(")")
}

/// Prefix text form, e.g. `(G (-> c (F r)))`. Atoms other than plain
/// variables are wrapped in braces.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(b) => write!(f, "{b}"),
            Formula::Atom(Expr::Var(v)) => f.write_str(v),
            Formula::Atom(e) => write!(f, "{{{e}}}"),
            Formula::FirstPoint => f.write_str("FTP"),
            Formula::LastPoint => f.write_str("LAST"),
            Formula::Not(a) => write_op(f, "!", &None, &[a]),
            Formula::And(a, b) => write_op(f, "&", &None, &[a, b]),
            Formula::Or(a, b) => write_op(f, "|", &None, &[a, b]),
            Formula::Implies(a, b) => write_op(f, "->", &None, &[a, b]),
            Formula::Next(a, iv) => write_op(f, "X", iv, &[a]),
            Formula::Until(a, b, iv) => write_op(f, "U", iv, &[a, b]),
            Formula::Finally(a, iv) => write_op(f, "F", iv, &[a]),
            Formula::Globally(a, iv) => write_op(f, "G", iv, &[a]),
            Formula::Previous(a, iv) => write_op(f, "Y", iv, &[a]),
            Formula::Since(a, b, iv) => write_op(f, "S", iv, &[a, b]),
            Formula::Once(a, iv) => write_op(f, "O", iv, &[a]),
            Formula::Historically(a, iv) => write_op(f, "H", iv, &[a]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn prefix_text_form() {
        let c = Formula::atom(Expr::var("c"));
        let r = Formula::atom(crate::parser::parse_expr("x > 1").unwrap());
        let f = Formula::globally(Formula::implies(c, Formula::finally(r)));
        assert_eq!(f.to_string(), "(G (-> c (F {x > 1})))");
        let g = Formula::Until(
            Box::new(Formula::Const(true)),
            Box::new(Formula::LastPoint),
            Some(Interval { lo: 0, hi: 3 }),
        );
        assert_eq!(g.to_string(), "(U[0,3] true LAST)");
    }

    #[test]
    fn direction_discipline() {
        let p = Formula::atom(Expr::var("p"));
        let edge = Formula::globally(Formula::previous(p.clone()));
        assert!(edge.fits(TimeDirection::Future));
        assert!(!edge.fits(TimeDirection::Past));
        let past = Formula::historically(Formula::once(p));
        assert!(past.fits(TimeDirection::Past));
        assert!(!past.fits(TimeDirection::Future));
    }
}
