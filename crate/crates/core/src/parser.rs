//! FRETISH requirement parser and canonical printer.
//!
//! ```text
//! requirement := [mode] [when expr] [if expr] component "shall"
//!                [ "until" expr | "always" ] ["satisfy"] expr
//! implies     := or ("=>" implies)?
//! or          := and ("|" and)*
//! and         := not ("&" not)*
//! not         := "!" not            -- only when `!` is not followed by an identifier or `(`
//!              | cmp
//! cmp         := sum (cmpop sum)?   -- non-associative
//! sum         := unary (("+" | "-") unary)*
//! unary       := "-" unary | "!" unary | primary
//! primary     := number | true | false | null | ident ["(" expr ("," expr)* ")"] | "(" implies ")"
//! ```
//!
//! A leading identifier is the scope mode when it is followed by `when`/`if`
//! or by a second identifier.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::decimal::Decimal;
use crate::model::{BinOp, Expr, FretishAst, Timing};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at offset {offset}: expected {expected}, found {found}")]
pub struct ParseError {
    /// Character index into the input.
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(Decimal),
    When,
    If,
    Shall,
    Until,
    Always,
    Satisfy,
    True,
    False,
    Null,
    LParen,
    RParen,
    Comma,
    Amp,
    Pipe,
    Bang,
    Arrow,
    Op(BinOp),
    Plus,
    Minus,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => f.write_str(s),
            Tok::Num(d) => write!(f, "{d}"),
            Tok::When => f.write_str("when"),
            Tok::If => f.write_str("if"),
            Tok::Shall => f.write_str("shall"),
            Tok::Until => f.write_str("until"),
            Tok::Always => f.write_str("always"),
            Tok::Satisfy => f.write_str("satisfy"),
            Tok::True => f.write_str("true"),
            Tok::False => f.write_str("false"),
            Tok::Null => f.write_str("null"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::Comma => f.write_str(","),
            Tok::Amp => f.write_str("&"),
            Tok::Pipe => f.write_str("|"),
            Tok::Bang => f.write_str("!"),
            Tok::Arrow => f.write_str("=>"),
            Tok::Op(op) => f.write_str(op.symbol()),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "when" => Tok::When,
        "if" => Tok::If,
        "shall" => Tok::Shall,
        "until" => Tok::Until,
        "always" => Tok::Always,
        "satisfy" => Tok::Satisfy,
        "true" => Tok::True,
        "false" => Tok::False,
        "null" => Tok::Null,
        _ => return None,
    })
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            toks.push((keyword(&word).unwrap_or(Tok::Ident(word)), start));
            continue;
        }
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let num = text.parse::<Decimal>().map_err(|_| ParseError {
                offset: start,
                expected: "number".to_owned(),
                found: text.clone(),
            })?;
            toks.push((Tok::Num(num), start));
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, width) = match (c, next) {
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            ('&', _) => (Tok::Amp, 1),
            ('|', _) => (Tok::Pipe, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('=', Some('>')) => (Tok::Arrow, 2),
            ('=', _) => (Tok::Op(BinOp::Eq), 1),
            ('!', Some('=')) => (Tok::Op(BinOp::Ne), 2),
            ('!', _) => (Tok::Bang, 1),
            ('<', Some('=')) => (Tok::Op(BinOp::Le), 2),
            ('<', _) => (Tok::Op(BinOp::Lt), 1),
            ('>', Some('=')) => (Tok::Op(BinOp::Ge), 2),
            ('>', _) => (Tok::Op(BinOp::Gt), 1),
            _ => {
                return Err(ParseError {
                    offset: start,
                    expected: "a token".to_owned(),
                    found: c.into(),
                })
            }
        };
        toks.push((tok, start));
        i += width;
    }
    toks.push((Tok::Eof, chars.len()));
    Ok(toks)
}

const MAX_DEPTH: usize = 200;

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(input: &str) -> PResult<Self> {
        Ok(Parser {
            toks: lex(input)?,
            pos: 0,
            depth: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let idx = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[idx].0
    }

    fn advance(&mut self) -> Tok {
        let tok = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &str) -> ParseError {
        let (tok, offset) = &self.toks[self.pos];
        ParseError {
            offset: *offset,
            expected: expected.to_owned(),
            found: format!("{tok}"),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn ident(&mut self, expected: &str) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn requirement(&mut self) -> PResult<FretishAst> {
        let mut scope_mode = None;
        match (self.peek(), self.peek_at(1)) {
            (Tok::Ident(_), Tok::When | Tok::If | Tok::Ident(_)) => {
                scope_mode = Some(self.ident("scope mode")?);
            }
            (Tok::Ident(_), _) => {}
            (Tok::When | Tok::If, _) => {}
            _ => return Err(self.error("component or scope")),
        }
        let when_cond = if *self.peek() == Tok::When {
            self.advance();
            Some(self.expr()?)
        } else {
            None
        };
        let if_cond = if *self.peek() == Tok::If {
            self.advance();
            Some(self.expr()?)
        } else {
            None
        };
        let component = self.ident("component")?;
        self.expect(Tok::Shall, "`shall`")?;
        let timing = match self.peek() {
            Tok::Until => {
                self.advance();
                Timing::Until(self.expr()?)
            }
            Tok::Always => {
                self.advance();
                Timing::Always
            }
            _ => Timing::Eventually,
        };
        if *self.peek() == Tok::Satisfy {
            self.advance();
        }
        let response = self.expr()?;
        if *self.peek() != Tok::Eof {
            return Err(self.error("end of requirement"));
        }
        Ok(FretishAst {
            scope_mode,
            when_cond,
            if_cond,
            component,
            timing,
            response,
        })
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.nested(Self::implies)
    }

    /// Bounds recursion so that pathological nesting is an error, not a
    /// stack overflow.
    fn nested(&mut self, f: fn(&mut Self) -> PResult<Expr>) -> PResult<Expr> {
        if self.depth >= MAX_DEPTH {
            return Err(self.error("shallower nesting"));
        }
        self.depth += 1;
        let result = f(self);
        self.depth -= 1;
        result
    }

    fn implies(&mut self) -> PResult<Expr> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.advance();
            let rhs = self.nested(Self::implies)?;
            return Ok(Expr::binary(BinOp::Implies, lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<Expr> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.advance();
            let rhs = self.and()?;
            lhs = Expr::binary(BinOp::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> PResult<Expr> {
        let mut lhs = self.not()?;
        while *self.peek() == Tok::Amp {
            self.advance();
            let rhs = self.not()?;
            lhs = Expr::binary(BinOp::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn not(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Bang && !matches!(self.peek_at(1), Tok::Ident(_) | Tok::LParen) {
            self.advance();
            return Ok(Expr::Not(Box::new(self.nested(Self::not)?)));
        }
        self.comparison()
    }

    fn comparison(&mut self) -> PResult<Expr> {
        let lhs = self.sum()?;
        if let Tok::Op(op) = *self.peek() {
            self.advance();
            let rhs = self.sum()?;
            if matches!(self.peek(), Tok::Op(_)) {
                return Err(self.error("end of comparison (comparisons do not chain)"));
            }
            return Ok(Expr::binary(op, lhs, rhs));
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        match self.peek() {
            Tok::Minus => {
                self.advance();
                Ok(Expr::Neg(Box::new(self.nested(Self::unary)?)))
            }
            Tok::Bang => {
                self.advance();
                Ok(Expr::Not(Box::new(self.nested(Self::unary)?)))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let expr = match self.peek().clone() {
            Tok::Num(d) => Expr::Num(d),
            Tok::True => Expr::Bool(true),
            Tok::False => Expr::Bool(false),
            Tok::Null => Expr::Null,
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(inner);
            }
            Tok::Ident(name) => {
                self.advance();
                if *self.peek() != Tok::LParen {
                    return Ok(Expr::Var(name));
                }
                self.advance();
                let mut args = Vec::new();
                loop {
                    args.push(self.expr()?);
                    match self.advance() {
                        Tok::Comma => continue,
                        Tok::RParen => break,
                        _ => {
                            self.pos -= 1;
                            return Err(self.error("`,` or `)`"));
                        }
                    }
                }
                return Ok(Expr::Call(name, args));
            }
            _ => return Err(self.error("expression")),
        };
        self.advance();
        Ok(expr)
    }
}

/// Parses one requirement.
pub fn parse_requirement(text: &str) -> Result<FretishAst, ParseError> {
    Parser::new(text)?.requirement()
}

/// Parses a standalone expression, e.g. the concrete side of an abstraction
/// mapping.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("end of expression"));
    }
    Ok(e)
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Binary(BinOp::Implies, ..) => 1,
        Expr::Binary(BinOp::Or, ..) => 2,
        Expr::Binary(BinOp::And, ..) => 3,
        Expr::Binary(op, ..) if op.is_comparison() => 5,
        Expr::Binary(..) => 6,
        _ => 7,
    }
}

fn write_expr(out: &mut String, e: &Expr, min_prec: u8) {
    if precedence(e) < min_prec {
        out.push('(');
        write_expr(out, e, 0);
        out.push(')');
        return;
    }
    match e {
        Expr::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Expr::Null => out.push_str("null"),
        Expr::Num(d) => out.push_str(&format!("{d}")),
        Expr::Var(v) => out.push_str(v),
        Expr::Call(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, a, 0);
            }
            out.push(')');
        }
        Expr::Not(inner) => {
            out.push('!');
            write_operand(out, inner, matches!(**inner, Expr::Var(_) | Expr::Call(..)));
        }
        Expr::Neg(inner) => {
            out.push('-');
            let bare = match &**inner {
                Expr::Var(_) | Expr::Call(..) => true,
                Expr::Num(d) => !d.is_negative(),
                _ => false,
            };
            write_operand(out, inner, bare);
        }
        Expr::Binary(op, lhs, rhs) => {
            let (l, r) = match op {
                BinOp::Implies => (2, 1),
                BinOp::Or => (2, 3),
                BinOp::And => (3, 4),
                op if op.is_comparison() => (6, 6),
                _ => (6, 7),
            };
            write_expr(out, lhs, l);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_expr(out, rhs, r);
        }
    }
}

fn write_operand(out: &mut String, e: &Expr, bare: bool) {
    if bare {
        write_expr(out, e, 0);
    } else {
        out.push('(');
        write_expr(out, e, 0);
        out.push(')');
    }
}

/// Prints an expression with minimal parentheses.
pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

/// Canonical FRETISH text for a requirement.
pub fn pretty_print(ast: &FretishAst) -> String {
    let mut out = String::new();
    if let Some(m) = &ast.scope_mode {
        out.push_str(m);
        out.push(' ');
    }
    if let Some(w) = &ast.when_cond {
        out.push_str("when (");
        write_expr(&mut out, w, 0);
        out.push_str(") ");
    }
    if let Some(c) = &ast.if_cond {
        out.push_str("if (");
        write_expr(&mut out, c, 0);
        out.push_str(") ");
    }
    out.push_str(&ast.component);
    out.push_str(" shall ");
    match &ast.timing {
        Timing::Eventually => {}
        Timing::Always => out.push_str("always "),
        Timing::Until(s) => {
            out.push_str("until (");
            write_expr(&mut out, s, 0);
            out.push_str(") ");
        }
    }
    out.push('(');
    write_expr(&mut out, &ast.response, 0);
    out.push(')');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn v(n: &str) -> Expr {
        Expr::var(n)
    }

    fn call(n: &str, args: Vec<Expr>) -> Expr {
        Expr::Call(n.into(), args)
    }

    const UC5_R_1: &str =
        "if ((sensorfaults) & (trackingPilotCommands)) Controller shall (controlObjectives)";
    const UC5_R_14_2: &str = "surgeStallPrevention when (diff(setNL, observedNL) < NLmax) if (!pilotInput => !surgeStallAvoidance) Controller shall until (diff(setNL, observedNL) > NLmin) (changeMode(nominal))";

    #[test]
    fn parses_parent_requirement() {
        let ast = parse_requirement(UC5_R_1).unwrap();
        assert_eq!(
            ast,
            FretishAst {
                scope_mode: None,
                when_cond: None,
                if_cond: Some(Expr::and(v("sensorfaults"), v("trackingPilotCommands"))),
                component: "Controller".into(),
                timing: Timing::Eventually,
                response: v("controlObjectives"),
            }
        );
    }

    #[test]
    fn parses_scoped_child_requirement() {
        let ast = parse_requirement(UC5_R_14_2).unwrap();
        let d = call("diff", vec![v("setNL"), v("observedNL")]);
        assert_eq!(ast.scope_mode.as_deref(), Some("surgeStallPrevention"));
        assert_eq!(
            ast.when_cond,
            Some(Expr::binary(BinOp::Lt, d.clone(), v("NLmax")))
        );
        assert_eq!(
            ast.if_cond,
            Some(Expr::binary(
                BinOp::Implies,
                Expr::negation(v("pilotInput")),
                Expr::negation(v("surgeStallAvoidance"))
            ))
        );
        assert_eq!(
            ast.timing,
            Timing::Until(Expr::binary(BinOp::Gt, d, v("NLmin")))
        );
        assert_eq!(ast.response, call("changeMode", vec![v("nominal")]));
    }

    #[test]
    fn parses_condition_less_always() {
        let ast = parse_requirement("Controller shall always (p)").unwrap();
        assert_eq!(ast.trigger(), None);
        assert_eq!(ast.scope_mode, None);
        assert_eq!(ast.timing, Timing::Always);
        assert_eq!(ast.response, v("p"));
    }

    #[test]
    fn degenerate_input_fails_at_start() {
        let err = parse_requirement("shall shall shall").unwrap_err();
        assert_eq!(err.offset, 0);
        assert_eq!(err.expected, "component or scope");
        assert_eq!(err.found, "shall");
    }

    #[test]
    fn mode_followed_by_component() {
        let ast = parse_requirement("nominal Controller shall (p)").unwrap();
        assert_eq!(ast.scope_mode.as_deref(), Some("nominal"));
        assert_eq!(ast.component, "Controller");
    }

    #[test]
    fn satisfy_keyword_is_optional() {
        let a = parse_requirement("if (c) Controller shall satisfy (r)").unwrap();
        let b = parse_requirement("if (c) Controller shall (r)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse_expr("a | b & c => d => e").unwrap();
        assert_eq!(print_expr(&e), "a | b & c => d => e");
        let Expr::Binary(BinOp::Implies, lhs, rhs) = &e else {
            panic!()
        };
        assert!(matches!(**lhs, Expr::Binary(BinOp::Or, ..)));
        assert!(matches!(**rhs, Expr::Binary(BinOp::Implies, ..)));
        assert_eq!(
            print_expr(&parse_expr("a - (b - c)").unwrap()),
            "a - (b - c)"
        );
        assert_eq!(print_expr(&parse_expr("(a - b) - c").unwrap()), "a - b - c");
        assert_eq!(
            print_expr(&parse_expr("(a | b) & c").unwrap()),
            "(a | b) & c"
        );
    }

    #[test]
    fn negation_of_identifier_binds_tight() {
        let e = parse_expr("!pilotInput => setThrust = V1").unwrap();
        assert_eq!(
            e,
            Expr::binary(
                BinOp::Implies,
                Expr::negation(v("pilotInput")),
                Expr::binary(BinOp::Eq, v("setThrust"), v("V1"))
            )
        );
        // Applied to something else, `!` sits above the comparisons.
        let e = parse_expr("!1 < 2").unwrap();
        assert!(
            matches!(e, Expr::Not(ref inner) if matches!(**inner, Expr::Binary(BinOp::Lt, ..)))
        );
        assert_eq!(print_expr(&e), "!(1 < 2)");
    }

    #[test]
    fn comparisons_do_not_chain() {
        let err = parse_expr("a < b < c").unwrap_err();
        assert_eq!(err.offset, 6);
    }

    #[test]
    fn calls_need_arguments() {
        assert!(parse_expr("f()").is_err());
        let e = parse_expr("outsideAirPressure (T1)").unwrap();
        assert_eq!(print_expr(&e), "outsideAirPressure(T1)");
    }

    #[test]
    fn error_offsets_count_characters() {
        let err = parse_expr("é + ").unwrap_err();
        assert_eq!(err.offset, 0);
        let err = parse_expr("x + ").unwrap_err();
        assert_eq!((err.offset, err.found.as_str()), (4, "end of input"));
    }

    #[test]
    fn pretty_prints_canonical_form() {
        let ast = parse_requirement(UC5_R_1).unwrap();
        assert_eq!(
            pretty_print(&ast),
            "if (sensorfaults & trackingPilotCommands) Controller shall (controlObjectives)"
        );
        let ast = parse_requirement("Controller shall always (p)").unwrap();
        assert_eq!(pretty_print(&ast), "Controller shall always (p)");
        let ast = parse_requirement(UC5_R_14_2).unwrap();
        assert_eq!(parse_requirement(&pretty_print(&ast)).unwrap(), ast);
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        let err = parse_requirement("Controller shall (p) q").unwrap_err();
        assert_eq!(err.offset, 21);
        assert!(parse_requirement("Controller shall").is_err());
        assert!(parse_requirement("").is_err());
    }
}
