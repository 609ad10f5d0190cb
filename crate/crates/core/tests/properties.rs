//! Property tests: canonical printing, parser totality, rename and lint
//! invariants, enumeration completeness.

use fretish_core::lint::project_identifiers;
use fretish_core::trace::{EnumerationError, TraceCount};
use fretish_core::{
    builtin_corpus, enumerate_traces, eval_template_direct, lint_project, parse_requirement,
    pretty_print, rename_variable, BinOp, Decimal, Expr, FretishAst, RenameError, Timing, Trace,
    Value, ValueType, VarKind, VariableDecl, DEFAULT_BUDGET,
};
use proptest::prelude::*;

const OPS: [BinOp; 11] = [
    BinOp::Implies,
    BinOp::Or,
    BinOp::And,
    BinOp::Add,
    BinOp::Sub,
    BinOp::Lt,
    BinOp::Le,
    BinOp::Gt,
    BinOp::Ge,
    BinOp::Eq,
    BinOp::Ne,
];

fn ident() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("p".to_owned()),
        Just("x".to_owned()),
        Just("speed".to_owned()),
        "[a-z][a-zA-Z0-9_]{0,6}".prop_filter("keyword", |s| {
            !matches!(
                s.as_str(),
                "when"
                    | "if"
                    | "shall"
                    | "until"
                    | "always"
                    | "satisfy"
                    | "true"
                    | "false"
                    | "null"
            )
        }),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        any::<bool>().prop_map(Expr::Bool),
        Just(Expr::Null),
        (0u32..1000, 0u32..3).prop_map(|(m, s)| {
            let text = format!("{}.{:0>3}", m / 10u32.pow(s), m % 10u32.pow(s));
            Expr::Num(text.parse::<Decimal>().unwrap())
        }),
        ident().prop_map(Expr::Var),
    ];
    leaf.prop_recursive(5, 48, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Not(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (ident(), prop::collection::vec(inner.clone(), 1..3))
                .prop_map(|(n, a)| Expr::Call(n, a)),
            (0..OPS.len(), inner.clone(), inner).prop_map(|(k, l, r)| Expr::Binary(
                OPS[k],
                Box::new(l),
                Box::new(r)
            )),
        ]
    })
}

fn requirement() -> impl Strategy<Value = FretishAst> {
    let timing = prop_oneof![
        Just(Timing::Eventually),
        Just(Timing::Always),
        expr().prop_map(Timing::Until),
    ];
    (
        prop::option::of(ident()),
        prop::option::of(expr()),
        prop::option::of(expr()),
        prop_oneof![Just("Controller".to_owned()), ident()],
        timing,
        expr(),
    )
        .prop_map(
            |(scope_mode, when_cond, if_cond, component, timing, response)| FretishAst {
                scope_mode,
                when_cond,
                if_cond,
                component,
                timing,
                response,
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    /// Every tree the grammar can produce survives printing and reparsing.
    #[test]
    fn print_parse_round_trip(ast in requirement()) {
        let text = pretty_print(&ast);
        let reparsed = parse_requirement(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(reparsed, ast);
    }

    #[test]
    fn parser_is_total_on_bytes(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let text = String::from_utf8_lossy(&bytes);
        if let Err(e) = parse_requirement(&text) {
            prop_assert!(e.offset <= text.chars().count() + 1);
        }
    }

    #[test]
    fn parser_is_total_on_token_soup(
        words in prop::collection::vec(
            prop::sample::select(vec![
                "when", "if", "shall", "until", "always", "satisfy", "(", ")", "&", "|", "!", "=>",
                "<", "<=", "=", "!=", "+", "-", ",", "p", "Controller", "1.5", "null", "true",
            ]),
            0..40,
        )
    ) {
        let text = words.join(" ");
        if let Err(e) = parse_requirement(&text) {
            prop_assert!(e.offset <= text.chars().count() + 1);
        }
    }

    /// Rename preserves every verdict when the column is renamed alongside.
    #[test]
    fn rename_preserves_verdicts(
        seed in prop::collection::vec(any::<bool>(), 1..6),
        flips in prop::collection::vec(any::<bool>(), 1..6),
    ) {
        let len = seed.len().min(flips.len());
        let corpus = builtin_corpus();
        let renamed = rename_variable(&corpus, "pilotInput", "pilotCommand").unwrap();
        for (before, after) in corpus.requirements.iter().zip(&renamed.requirements) {
            let b = before.ast().unwrap();
            if !b.columns().contains("pilotInput") {
                continue;
            }
            let a = after.ast().unwrap();
            let cols: Vec<String> = b.columns().into_iter().collect();
            let column = |i: usize| -> Vec<Value> {
                (0..len).map(|k| {
                    let decl = corpus.glossary.for_column(&cols[i]).unwrap();
                    let d = decl.effective_domain().unwrap();
                    let pick = (seed[k] as usize + 2 * flips[(k + i) % len] as usize + i) % d.len();
                    d[pick].clone()
                }).collect()
            };
            let t = Trace::from_columns(cols.iter().enumerate().map(|(i, c)| (c.clone(), column(i)))).unwrap();
            let u = Trace::from_columns(cols.iter().enumerate().map(|(i, c)| {
                (if c == "pilotInput" { "pilotCommand".to_owned() } else { c.clone() }, column(i))
            })).unwrap();
            prop_assert_eq!(eval_template_direct(&b, &t).unwrap(), eval_template_direct(&a, &u).unwrap());
        }
    }

    #[test]
    fn enumeration_is_complete(sizes in prop::collection::vec(1usize..4, 1..4), len in 1usize..4) {
        let vars: Vec<VariableDecl> = sizes.iter().enumerate().map(|(i, &n)| {
            let syms = (0..n).map(|k| format!("s{k}")).collect();
            VariableDecl::new(&format!("v{i}"), VarKind::Input, ValueType::Enum(syms))
        }).collect();
        let traces: Vec<Trace> = enumerate_traces(&vars, len, DEFAULT_BUDGET).unwrap().collect();
        let expected = sizes.iter().product::<usize>().pow(len as u32);
        prop_assert_eq!(traces.len(), expected);
        let mut sorted = traces.clone();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), expected);
    }
}

#[test]
fn enumeration_examples() {
    let b = |n: &str| VariableDecl::boolean(n, VarKind::Input);
    assert_eq!(
        enumerate_traces(&[b("p")], 2, DEFAULT_BUDGET)
            .unwrap()
            .count(),
        4
    );
    assert_eq!(
        enumerate_traces(&[b("p"), b("q")], 3, DEFAULT_BUDGET)
            .unwrap()
            .count(),
        64
    );
    let e = VariableDecl::new(
        "e",
        VarKind::Input,
        ValueType::Enum(vec!["a".into(), "b".into(), "c".into()]),
    );
    let order: Vec<Value> = enumerate_traces(std::slice::from_ref(&e), 1, DEFAULT_BUDGET)
        .unwrap()
        .map(|t| t.value(0, "e").unwrap().clone())
        .collect();
    assert_eq!(order, ["a", "b", "c"].map(|s| Value::Enum(s.into())));
    match enumerate_traces(&[b("p")], 30, DEFAULT_BUDGET) {
        Err(EnumerationError::BudgetExceeded { count, budget }) => {
            assert_eq!(count, TraceCount::Exact(1 << 30));
            assert_eq!(budget, DEFAULT_BUDGET);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn lint_never_mutates() {
    let corpus = builtin_corpus();
    let copy = corpus.clone();
    let _ = lint_project(&corpus);
    assert_eq!(corpus, copy);
}

#[test]
fn rename_thrust_constant_across_corpus() {
    let corpus = builtin_corpus();
    let renamed = rename_variable(&corpus, "V1", "initialThrust").unwrap();
    let mut touched = Vec::new();
    for (before, after) in corpus.requirements.iter().zip(&renamed.requirements) {
        let uses = before
            .ast()
            .unwrap()
            .exprs()
            .any(|e| e.identifiers().contains("V1"));
        assert_eq!(
            before.fretish_text != after.fretish_text,
            uses,
            "{}",
            before.id
        );
        let ast = after.ast().unwrap();
        assert_eq!(parse_requirement(&after.fretish_text).unwrap(), ast);
        assert!(!ast.exprs().any(|e| e.identifiers().contains("V1")));
        if uses {
            touched.push(before.id.as_str().to_owned());
        }
        assert_eq!(
            (&before.id, &before.rationale, &before.comments),
            (&after.id, &after.rationale, &after.comments)
        );
    }
    assert!(!touched.is_empty());
    assert!(touched.iter().all(|id| id.contains('.')));
    assert!(renamed.glossary.contains("initialThrust") && !renamed.glossary.contains("V1"));
    assert!(project_identifiers(&renamed).contains("initialThrust"));

    assert_eq!(
        rename_variable(&corpus, "noSuchName", "x2"),
        Err(RenameError::UnknownName("noSuchName".into()))
    );
    assert!(matches!(
        rename_variable(&corpus, "V1", "V2"),
        Err(RenameError::NameCollision(_))
    ));
}
