//! Machine-readable parse trees. Every node is an object whose first key is
//! `kind`; reconstruction is the exact inverse of export.

use fretish_core::{BinOp, Decimal, Expr, FretishAst, Timing};
use serde_json::{json, Map, Value};

pub fn export_expr(e: &Expr) -> Value {
    match e {
        Expr::Bool(b) => json!({ "kind": "bool", "value": b }),
        Expr::Null => json!({ "kind": "null" }),
        Expr::Num(d) => json!({ "kind": "num", "value": d.to_string() }),
        Expr::Var(v) => json!({ "kind": "var", "name": v }),
        Expr::Call(name, args) => json!({
            "kind": "call",
            "name": name,
            "args": args.iter().map(export_expr).collect::<Vec<_>>(),
        }),
        Expr::Not(a) => json!({ "kind": "not", "arg": export_expr(a) }),
        Expr::Neg(a) => json!({ "kind": "neg", "arg": export_expr(a) }),
        Expr::Binary(op, l, r) => {
            json!({ "kind": op.kind(), "lhs": export_expr(l), "rhs": export_expr(r) })
        }
    }
}

pub fn export_parse_tree(ast: &FretishAst) -> Value {
    let timing = match &ast.timing {
        Timing::Eventually => json!({ "kind": "eventually" }),
        Timing::Always => json!({ "kind": "always" }),
        Timing::Until(s) => json!({ "kind": "until", "stop": export_expr(s) }),
    };
    json!({
        "kind": "requirement",
        "scope": ast.scope_mode,
        "when": ast.when_cond.as_ref().map(export_expr),
        "if": ast.if_cond.as_ref().map(export_expr),
        "component": ast.component,
        "timing": timing,
        "response": export_expr(&ast.response),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed parse tree at `{pointer}`: {reason}")]
pub struct TreeError {
    pub pointer: String,
    pub reason: String,
}

fn fail<T>(pointer: &str, reason: impl Into<String>) -> Result<T, TreeError> {
    Err(TreeError {
        pointer: pointer.to_owned(),
        reason: reason.into(),
    })
}

fn object<'a>(v: &'a Value, at: &str) -> Result<&'a Map<String, Value>, TreeError> {
    v.as_object()
        .map_or_else(|| fail(at, "expected an object"), Ok)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value, TreeError> {
    obj.get(key)
        .map_or_else(|| fail(at, format!("missing field `{key}`")), Ok)
}

fn string<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a str, TreeError> {
    field(obj, key, at)?
        .as_str()
        .map_or_else(|| fail(&format!("{at}/{key}"), "expected a string"), Ok)
}

fn child(obj: &Map<String, Value>, key: &str, at: &str) -> Result<Box<Expr>, TreeError> {
    Ok(Box::new(reconstruct_expr(
        field(obj, key, at)?,
        &format!("{at}/{key}"),
    )?))
}

fn optional(obj: &Map<String, Value>, key: &str, at: &str) -> Result<Option<Expr>, TreeError> {
    match field(obj, key, at)? {
        Value::Null => Ok(None),
        v => reconstruct_expr(v, &format!("{at}/{key}")).map(Some),
    }
}

pub fn reconstruct_expr(v: &Value, at: &str) -> Result<Expr, TreeError> {
    let obj = object(v, at)?;
    let kind = string(obj, "kind", at)?;
    Ok(match kind {
        "bool" => match field(obj, "value", at)? {
            Value::Bool(b) => Expr::Bool(*b),
            _ => return fail(&format!("{at}/value"), "expected a boolean"),
        },
        "null" => Expr::Null,
        "num" => {
            let text = string(obj, "value", at)?;
            match text.parse::<Decimal>() {
                Ok(d) if !d.is_negative() => Expr::Num(d),
                _ => {
                    return fail(
                        &format!("{at}/value"),
                        format!("`{text}` is not a non-negative decimal"),
                    )
                }
            }
        }
        "var" => Expr::Var(string(obj, "name", at)?.to_owned()),
        "call" => {
            let args = field(obj, "args", at)?
                .as_array()
                .map_or_else(|| fail(&format!("{at}/args"), "expected an array"), Ok)?;
            if args.is_empty() {
                return fail(&format!("{at}/args"), "a call takes at least one argument");
            }
            let args = args
                .iter()
                .enumerate()
                .map(|(i, a)| reconstruct_expr(a, &format!("{at}/args/{i}")))
                .collect::<Result<_, _>>()?;
            Expr::Call(string(obj, "name", at)?.to_owned(), args)
        }
        "not" => Expr::Not(child(obj, "arg", at)?),
        "neg" => Expr::Neg(child(obj, "arg", at)?),
        other => match BinOp::from_kind(other) {
            Some(op) => Expr::Binary(op, child(obj, "lhs", at)?, child(obj, "rhs", at)?),
            None => return fail(&format!("{at}/kind"), format!("unknown kind `{other}`")),
        },
    })
}

pub fn reconstruct(v: &Value) -> Result<FretishAst, TreeError> {
    let obj = object(v, "")?;
    if string(obj, "kind", "")? != "requirement" {
        return fail("/kind", "expected `requirement`");
    }
    let scope_mode = match field(obj, "scope", "")? {
        Value::Null => None,
        Value::String(s) => Some(s.clone()),
        _ => return fail("/scope", "expected a string or null"),
    };
    let timing_obj = object(field(obj, "timing", "")?, "/timing")?;
    let timing = match string(timing_obj, "kind", "/timing")? {
        "eventually" => Timing::Eventually,
        "always" => Timing::Always,
        "until" => Timing::Until(*child(timing_obj, "stop", "/timing")?),
        other => return fail("/timing/kind", format!("unknown timing `{other}`")),
    };
    Ok(FretishAst {
        scope_mode,
        when_cond: optional(obj, "when", "")?,
        if_cond: optional(obj, "if", "")?,
        component: string(obj, "component", "")?.to_owned(),
        timing,
        response: *child(obj, "response", "")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use fretish_core::{builtin_corpus, parse_requirement};

    #[test]
    fn minimal_requirement_shape() {
        let tree = export_parse_tree(&parse_requirement("Controller shall always (p)").unwrap());
        assert_eq!(
            serde_json::to_string(&tree).unwrap(),
            r#"{"kind":"requirement","scope":null,"when":null,"if":null,"component":"Controller","timing":{"kind":"always"},"response":{"kind":"var","name":"p"}}"#
        );
    }

    #[test]
    fn condition_subtree_is_a_conjunction() {
        let corpus = builtin_corpus();
        let tree = export_parse_tree(&corpus.requirement("UC5_R_1").unwrap().ast().unwrap());
        assert_eq!(tree["if"]["kind"], "and");
        assert_eq!(tree["if"]["lhs"]["kind"], "var");
        assert_eq!(tree["if"]["rhs"]["kind"], "var");
    }

    #[test]
    fn corpus_trees_reconstruct() {
        for r in builtin_corpus().requirements {
            let ast = r.ast().unwrap();
            assert_eq!(
                reconstruct(&export_parse_tree(&ast)).unwrap(),
                ast,
                "{}",
                r.id
            );
        }
    }

    #[test]
    fn malformed_tree_reports_pointer() {
        let mut tree = export_parse_tree(&parse_requirement("if (a & b) C shall (x)").unwrap());
        tree["if"]["rhs"] = json!({"kind": "xor"});
        assert_eq!(reconstruct(&tree).unwrap_err().pointer, "/if/rhs/kind");
    }
}
