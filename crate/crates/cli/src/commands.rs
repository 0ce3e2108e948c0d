use std::sync::Arc;

use ait_core::complexity::{self, Limits, Sweep};
use ait_core::machine::{decode_machine, BudgetedOutcome};
use ait_core::mltest::{self, Sense1Test, Sense2Test};
use ait_core::omega;
use ait_core::prefixfree::{self, cover_measure, is_prefix_free, kraft_sum};
use ait_core::{BitString, Dyadic, Registry, Universal};
use serde_json::{json, Value};

use crate::report::{Report, RunConfig};
use crate::{CliError, Command, ComplexityCommand, MachineArg, MltestCommand, Pattern, SetInput};

type Outcome = Result<(Report, Option<String>), CliError>;

fn ok(report: Report) -> Outcome {
    Ok((report, None))
}

fn bits(b: &BitString) -> Value {
    json!(b.to_string())
}

fn dyadic(d: &Dyadic) -> Value {
    json!(d.to_string())
}

fn opt<T: Into<Value>>(v: Option<T>) -> Value {
    v.map_or(Value::Null, Into::into)
}

fn machine_name(which: Universal) -> &'static str {
    which.name()
}

fn limits(config: &RunConfig) -> Limits {
    Limits::new(config.budget, config.len_limit)
}

pub(crate) fn run(command: &Command, config: &RunConfig, reg: &Registry) -> Outcome {
    match command {
        Command::Enum { count, start } => enumerate(*start, *count),
        Command::Pfz(input) => pfz(input),
        Command::Kraft { lengths } => kraft(lengths),
        Command::Measure(input) => measure(input),
        Command::Run { machine, input } => run_machine(reg, *machine, input, config),
        Command::Complexity { command } => complexity_cmd(command, config, reg),
        Command::Omega { until_mass, psi } => {
            omega_cmd(reg, config, until_mass.as_ref(), psi.as_ref())
        }
        Command::Mltest { command } => mltest_cmd(command, config, reg),
    }
}

fn enumerate(start: u64, count: u64) -> Outcome {
    let mut r = Report::new("enum", &["index", "bits", "length"]);
    let end = start.saturating_add(count);
    for m in start..end {
        let b = BitString::from_index(m);
        r.row(vec![json!(m), bits(&b), json!(b.len())]);
    }
    ok(r)
}

fn read_set(input: &SetInput) -> Result<Vec<BitString>, CliError> {
    let mut out = input.strings.clone();
    if let Some(path) = &input.input {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.clone(),
            source,
        })?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let b = line
                .parse()
                .map_err(|e| CliError::Domain(format!("{}:{}: {e}", path.display(), i + 1)))?;
            out.push(b);
        }
    }
    Ok(out)
}

fn pfz(input: &SetInput) -> Outcome {
    let set = read_set(input)?;
    let t = prefixfree::prefix_freeize(&set);
    let mut r = Report::new("pfz", &["bits"]);
    r.note("input_size", set.len());
    r.note("output_size", t.len());
    r.note("cover_measure", dyadic(&cover_measure(&set)));
    r.note("output_measure", dyadic(&t.measure()));
    for b in t.iter() {
        r.row(vec![bits(b)]);
    }
    ok(r)
}

fn kraft(lengths: &[usize]) -> Outcome {
    let codes = ait_core::kraft_code(lengths.iter().copied())
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let mut r = Report::new("kraft", &["index", "length", "codeword"]);
    r.note("kraft_sum", dyadic(&kraft_sum(&codes)));
    for (i, (len, c)) in lengths.iter().zip(&codes).enumerate() {
        r.row(vec![json!(i), json!(len), bits(c)]);
    }
    ok(r)
}

fn measure(input: &SetInput) -> Outcome {
    let set = read_set(input)?;
    let cover = prefixfree::minimal_elements(&set);
    let mut r = Report::new("measure", &["minimal", "length"]);
    r.note("size", set.len());
    r.note("prefix_free", is_prefix_free(&set));
    r.note("kraft_sum", dyadic(&kraft_sum(&set)));
    let m = cover.measure();
    r.note("cover_measure", dyadic(&m));
    r.note("cover_measure_decimal", m.to_decimal());
    for b in cover.iter() {
        r.row(vec![bits(b), json!(b.len())]);
    }
    ok(r)
}

fn outcome_cells(o: &BudgetedOutcome) -> Vec<Value> {
    match o {
        BudgetedOutcome::Halted { output, steps } => {
            vec![json!("halted"), bits(output), json!(steps)]
        }
        BudgetedOutcome::Exhausted {
            divergent: true, ..
        } => {
            vec![json!("divergent"), Value::Null, Value::Null]
        }
        BudgetedOutcome::Exhausted { .. } => vec![json!("exhausted"), Value::Null, Value::Null],
    }
}

fn run_machine(reg: &Registry, m: MachineArg, input: &BitString, config: &RunConfig) -> Outcome {
    let (name, outcome) = match m {
        MachineArg::U => ("U".to_string(), reg.universal_run(input, config.budget)),
        MachineArg::V => (
            "V".to_string(),
            reg.prefix_universal_run(input, config.budget),
        ),
        MachineArg::Index(i) => (
            decode_machine(i).to_string(),
            reg.run_index(i, input, config.budget),
        ),
    };
    let mut r = Report::new("run", &["machine", "input", "status", "output", "steps"]);
    let mut row = vec![json!(name), bits(input)];
    row.extend(outcome_cells(&outcome));
    r.row(row);
    ok(r)
}

fn complexity_cmd(command: &ComplexityCommand, config: &RunConfig, reg: &Registry) -> Outcome {
    let limits = limits(config);
    match command {
        ComplexityCommand::Scan {
            machine,
            max_len,
            strings,
        } => {
            let sweep = Sweep::run(reg, *machine, limits);
            let targets: Vec<BitString> = if strings.is_empty() {
                BitString::all_up_to(*max_len).collect()
            } else {
                strings.clone()
            };
            let mut r = Report::new(
                format!("complexity scan {}", machine_name(*machine)),
                &["bits", "length", "bound", "witness", "steps", "exhaustive"],
            );
            r.note("programs_run", sweep.programs_run);
            r.note("halted", sweep.halted);
            r.note("divergent", sweep.divergent);
            for b in &targets {
                let row = match sweep.bound(b) {
                    Some(c) => vec![
                        bits(b),
                        json!(b.len()),
                        json!(c.value),
                        bits(&c.witness),
                        json!(c.steps),
                        json!(c.exhaustive),
                    ],
                    None => vec![
                        bits(b),
                        json!(b.len()),
                        Value::Null,
                        Value::Null,
                        Value::Null,
                        json!(false),
                    ],
                };
                r.row(row);
            }
            ok(r)
        }
        ComplexityCommand::Census { n } => {
            let mut r = Report::new("complexity census", &["n", "total", "incompressible"]);
            for len in 0..=*n {
                let count = complexity::census_incompressible(reg, len, limits);
                r.row(vec![json!(len), json!(1u64 << len), json!(count)]);
            }
            ok(r)
        }
        ComplexityCommand::Pad { pattern, k } => {
            let pattern = *pattern;
            let stream = move |n: usize| -> BitString {
                BitString::from_bits((0..n).map(|i| match pattern {
                    Pattern::Zeros => false,
                    Pattern::Ones => true,
                    Pattern::Alternating => i % 2 == 1,
                }))
            };
            let w = complexity::pad_witness(reg, stream, *k, limits)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            let mut r = Report::new(
                "complexity pad",
                &["n", "head_len", "tail_len", "k1", "bound", "witness_steps"],
            );
            r.note("k", *k);
            r.row(vec![
                json!(w.n),
                json!(w.head_len),
                json!(w.tail_len),
                json!(w.k1),
                json!(w.bound.value),
                json!(w.bound.steps),
            ]);
            ok(r)
        }
        ComplexityCommand::Horizon { k, m_max } => {
            let m = complexity::horizon_search_plain(reg, *k, *m_max, limits);
            let mut r = Report::new("complexity horizon", &["k", "m_max", "horizon"]);
            r.row(vec![json!(k), json!(m_max), opt(m)]);
            ok(r)
        }
        ComplexityCommand::Subadd { n_max } => {
            let rep = complexity::subadditivity_probe(reg, *n_max, limits);
            let mut r = Report::new(
                "complexity subadd",
                &[
                    "a",
                    "b",
                    "c_a",
                    "c_b",
                    "c_ab",
                    "k_a",
                    "k_b",
                    "k_ab",
                    "pair_witness",
                    "prefix_holds",
                ],
            );
            r.note("k_pair", rep.k_pair);
            r.note("max_plain_gap", opt(rep.max_plain_gap()));
            r.note("prefix_checked", rep.prefix_checked());
            let violations = rep.prefix_violations().len();
            r.note("prefix_violations", violations);
            for row in &rep.rows {
                r.row(vec![
                    bits(&row.a),
                    bits(&row.b),
                    opt(row.c_a),
                    opt(row.c_b),
                    opt(row.c_ab),
                    opt(row.k_a),
                    opt(row.k_b),
                    opt(row.k_ab),
                    json!(row.pair_witness_halted),
                    opt(row.prefix_holds(rep.k_pair)),
                ]);
            }
            let failure = (violations > 0).then(|| {
                format!(
                    "{violations} pairs violate K(a⋆b) ≤ K(a) + K(b) + {}",
                    rep.k_pair
                )
            });
            Ok((r, failure))
        }
        ComplexityCommand::Short { machine } => {
            let sweep = Sweep::run(reg, *machine, limits);
            let mut r = Report::new(
                format!("complexity short {}", machine_name(*machine)),
                &["program", "output"],
            );
            for p in sweep.short_programs() {
                let out = reg.run_universal(*machine, &p, config.budget);
                r.row(vec![bits(&p), opt(out.output().map(|o| o.to_string()))]);
            }
            ok(r)
        }
    }
}

fn omega_cmd(
    reg: &Registry,
    config: &RunConfig,
    until_mass: Option<&Dyadic>,
    psi: Option<&BitString>,
) -> Outcome {
    if let Some(target) = until_mass {
        let mut r = Report::new(
            "omega until-mass",
            &["target", "stage", "lower_bound", "decimal"],
        );
        return match omega::stage_reaching(reg, target, config.stage, config.len_limit) {
            Some((stage, mass)) => {
                r.row(vec![
                    dyadic(target),
                    json!(stage),
                    dyadic(&mass),
                    json!(mass.to_decimal()),
                ]);
                ok(r)
            }
            None => Err(CliError::Domain(format!(
                "lower bound does not exceed {target} by stage {}",
                config.stage
            ))),
        };
    }
    if let Some(a) = psi {
        let set =
            omega::psi_reconstruct(reg, a, config.stage, config.len_limit).ok_or_else(|| {
                CliError::Domain(format!(
                    "lower bound does not exceed the value of {a} by stage {}",
                    config.stage
                ))
            })?;
        let mut r = Report::new("omega psi", &["program", "length"]);
        r.note("prefix", a.to_string());
        r.note("threshold", dyadic(&a.value()));
        for p in set.iter() {
            r.row(vec![bits(p), json!(p.len())]);
        }
        return ok(r);
    }
    let est = omega::omega_lower_bound(reg, config.stage, config.len_limit);
    let mut r = Report::new("omega", &["program", "stage", "status", "output", "steps"]);
    r.note("lower_bound", dyadic(&est.lower_bound));
    r.note("decimal", est.lower_bound.to_decimal());
    r.note("halted", est.halted.len());
    for e in &est.events {
        let mut row = vec![bits(&e.program), json!(e.stage)];
        row.extend(outcome_cells(&e.outcome));
        r.row(row);
    }
    ok(r)
}

fn registered(name: &str) -> Sense1Test {
    mltest::test_by_name(name).expect("names are checked while parsing")
}

/// Every registered test in sense-2 form, in registration order.
fn battery() -> Vec<Sense2Test> {
    mltest::test_names()
        .iter()
        .map(|n| mltest::sense1_to_sense2(&registered(n)))
        .collect()
}

fn verdict_row(v: &mltest::LevelVerdict) -> Vec<Value> {
    vec![
        json!(v.m),
        json!(v.depth),
        opt(v.measure.as_ref().map(|m| m.to_string())),
        dyadic(&v.bound),
        json!(v.verdict.as_str()),
    ]
}

fn mltest_cmd(command: &MltestCommand, config: &RunConfig, reg: &Registry) -> Outcome {
    let depth = config.depth;
    match command {
        MltestCommand::Validate {
            test,
            levels,
            depth_cap,
        } => {
            let t = registered(test);
            let report = mltest::validate_sense1(&t, *levels, *depth_cap);
            let mut r = Report::new(
                format!("mltest validate {test}"),
                &["m", "depth", "measure", "bound", "verdict"],
            );
            for v in &report {
                r.row(verdict_row(v));
            }
            let bad: Vec<String> = report
                .iter()
                .filter(|v| v.verdict == mltest::Verdict::Violated)
                .map(|v| v.m.to_string())
                .collect();
            let failure = (!bad.is_empty()).then(|| {
                format!(
                    "{test} is not a test: measure exceeds 2^-m at m = {}",
                    bad.join(", ")
                )
            });
            Ok((r, failure))
        }
        MltestCommand::Convert { test, levels } => {
            let f = mltest::sense1_to_sense2(&registered(test));
            let report = mltest::validate_sense2(&f, *levels, depth);
            let mut r = Report::new(
                format!("mltest convert {test}"),
                &["n", "depth", "measure", "bound", "verdict", "minimal"],
            );
            for v in &report {
                let cover = f.cover(v.m, depth);
                let mut row = verdict_row(v);
                let members: Vec<String> = cover.iter().map(|b| b.to_string()).collect();
                row.push(json!(members.join(" ")));
                r.row(row);
            }
            ok(r)
        }
        MltestCommand::Universal { levels } => {
            let battery = battery();
            let mut r = Report::new(
                "mltest universal",
                &["n", "position", "test", "size", "measure", "bound"],
            );
            for n in 0..=*levels {
                let parts = mltest::universal_parts(&battery, n, depth);
                for p in &parts {
                    r.row(vec![
                        json!(n),
                        json!(p.position),
                        json!(p.name),
                        json!(p.members.len()),
                        dyadic(&cover_measure(&p.members)),
                        dyadic(&Dyadic::pow2_neg(p.position as u64 + n)),
                    ]);
                }
                let all = mltest::universal_test(&battery, n, depth);
                r.row(vec![
                    json!(n),
                    json!(0),
                    json!("universal"),
                    json!(all.len()),
                    dyadic(&cover_measure(&all)),
                    dyadic(&Dyadic::pow2_neg(n)),
                ]);
            }
            ok(r)
        }
        MltestCommand::Score {
            subject,
            omega_bits,
            levels,
        } => {
            let subject = match (subject, omega_bits) {
                (Some(s), _) => s.clone(),
                (None, Some(n)) => {
                    let est = omega::omega_lower_bound(reg, config.stage, config.len_limit);
                    BitString::bits_of(&est.lower_bound, *n)
                        .map_err(|e| CliError::Domain(e.to_string()))?
                }
                (None, None) => unreachable!("clap requires one of them"),
            };
            let sense1: Vec<Sense1Test> =
                mltest::test_names().iter().map(|n| registered(n)).collect();
            let mut sense2 = battery();
            sense2.push(mltest::universal_family(battery()));
            sense2.push(mltest::compression_family(
                Arc::new(Registry::new()),
                limits(config),
            ));
            let rep = mltest::score(
                reg,
                &subject,
                &sense1,
                &sense2,
                *levels,
                depth,
                limits(config),
            );
            let mut r = Report::new(
                "mltest score",
                &["test", "kind", "level", "depth", "capped"],
            );
            r.note("subject", subject.to_string());
            match rep.compression_deficiency {
                Some((d, n)) => {
                    r.note("compression_deficiency", d);
                    r.note("compression_deficiency_at", n);
                }
                None => r.note("compression_deficiency", Value::Null),
            }
            for l in &rep.levels {
                r.row(vec![
                    json!(l.test),
                    json!(l.kind),
                    json!(l.level),
                    opt(l.depth),
                    json!(l.capped),
                ]);
            }
            ok(r)
        }
        MltestCommand::Bridge { test, levels } => {
            let g = mltest::sense1_to_sense2(&registered(test));
            let dec = mltest::ml_to_kc_decoder(&g, *levels, depth)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            let kreg = dec
                .into_registry()
                .map_err(|e| CliError::Domain(e.to_string()))?;
            let c = kreg.constants().c_kraft;
            let mut r = Report::new(
                format!("mltest bridge {test}"),
                &["n", "target", "codeword", "bound", "v_bound"],
            );
            r.note("mass", dyadic(&dec.mass));
            r.note("coded_mass", dyadic(&dec.coded_mass()));
            r.note("c_kraft", c);
            r.note("decoder_registry", kreg.fingerprint());
            r.note("excluded", dec.excluded.len());
            for e in &dec.entries {
                r.row(vec![
                    json!(e.n),
                    bits(&e.target),
                    bits(&e.codeword),
                    json!(e.bound()),
                    json!(e.bound() as u64 + c),
                ]);
            }
            ok(r)
        }
    }
}
