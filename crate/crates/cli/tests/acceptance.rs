//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p ait-cli --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ait_core::complexity::{subadditivity_probe, Sweep};
use ait_core::mltest::{
    self, builtin_tests, level_sense1, level_set, ml_to_kc_decoder, negative_fixtures, normalize,
    sense1_to_sense2, universal_test, validate_sense1, Verdict,
};
use ait_core::omega::{halted_below, omega_trajectory, psi_reconstruct};
use ait_core::prefixfree::{minimal_elements, prefix_freeize};
use ait_core::{
    cover_measure, is_prefix_free, kraft_code, kraft_sum, BitString, Dyadic, KraftError, Limits,
    Registry, Universal,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
/// Name, body, and time limit in seconds.
type Criterion = (&'static str, fn() -> Check, Option<u64>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_set(rng: &mut ChaCha8Rng, max_depth: usize) -> Vec<BitString> {
    let size = rng.random_range(1..=24);
    (0..size)
        .map(|_| {
            let len = rng.random_range(0..=max_depth);
            BitString::from_bits((0..len).map(|_| rng.random_bool(0.5)))
        })
        .collect()
}

/// Marks the depth-`depth` leaves under each string and counts them.
fn leaf_oracle(set: &[BitString], depth: usize) -> Dyadic {
    let mut leaves = vec![false; 1 << depth];
    for b in set {
        let v = b.iter().fold(0usize, |acc, bit| 2 * acc + usize::from(bit));
        let shift = depth - b.len();
        leaves[v << shift..(v + 1) << shift].fill(true);
    }
    let hits = leaves.iter().filter(|&&x| x).count();
    Dyadic::new(hits.into(), depth as u64)
}

fn enumeration_law() -> Check {
    for m in 0u64..65536 {
        let b = BitString::from_index(m);
        // |b| ≤ log2(m + 1)  ⇔  2^|b| ≤ m + 1
        ensure(1u64 << b.len() <= m + 1, || {
            format!("|B_{m}| = {}", b.len())
        })?;
        ensure(b.index() == Some(m), || format!("round trip fails at {m}"))?;
    }
    Ok("65536 indices".into())
}

fn kraft_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..1000 {
        let antichain = minimal_elements(&random_set(&mut rng, 12));
        let sum = antichain.measure();
        ensure(
            kraft_sum(antichain.iter()) == sum && sum <= Dyadic::one(),
            || format!("case {i}: Kraft sum {sum}"),
        )?;
        let mut lengths: Vec<usize> = antichain.iter().map(BitString::len).collect();
        lengths.sort();
        let codes = kraft_code(lengths.clone()).map_err(|e| format!("case {i}: {e}"))?;
        ensure(is_prefix_free(&codes), || {
            format!("case {i}: code not prefix-free")
        })?;
        ensure(codes.iter().map(BitString::len).eq(lengths), || {
            format!("case {i}: lengths differ")
        })?;
        ensure(kraft_sum(&codes) == sum, || {
            format!("case {i}: code sum differs")
        })?;
    }
    match kraft_code([1, 1, 1]) {
        Err(KraftError::Overflow { index: 2, .. }) => {
            Ok("1000 antichains; [1,1,1] rejected at index 2".into())
        }
        other => Err(format!("[1,1,1] gave {other:?}")),
    }
}

fn prefix_freeization() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..1000 {
        let set = random_set(&mut rng, 12);
        let t = prefix_freeize(&set);
        ensure(is_prefix_free(t.iter()), || {
            format!("case {i}: not an antichain")
        })?;
        let before = cover_measure(&set);
        let oracle = leaf_oracle(&set, 12);
        let t_vec: Vec<BitString> = t.iter().cloned().collect();
        ensure(
            before == oracle && t.measure() == oracle && leaf_oracle(&t_vec, 12) == oracle,
            || format!("case {i}: {before} vs {} vs oracle {oracle}", t.measure()),
        )?;
    }
    Ok("1000 sets at depth 12".into())
}

fn v_antichain() -> Check {
    let reg = Registry::new();
    let halting: Vec<BitString> = BitString::all_up_to(10)
        .filter(|b| reg.prefix_universal_run(b, 100_000).is_halted())
        .collect();
    for (i, a) in halting.iter().enumerate() {
        for b in &halting[i + 1..] {
            ensure(!a.is_comparable(b), || format!("{a} and {b} both halt"))?;
        }
    }
    Ok(format!(
        "{} of 2047 inputs halt, pairwise incomparable",
        halting.len()
    ))
}

fn census() -> Check {
    let reg = Registry::new();
    let mut counts = Vec::new();
    for budget in [100, 10_000] {
        for n in 0..=8 {
            let c = ait_core::complexity::census_incompressible(&reg, n, Limits::new(budget, 12));
            ensure(c >= 1, || {
                format!("no incompressible string of length {n} at budget {budget}")
            })?;
            counts.push(c);
        }
    }
    Ok(format!("min count {}", counts.iter().min().unwrap()))
}

fn registry_constants() -> Check {
    let reg = Registry::new();
    let k = reg.constants();
    let plain = Sweep::run(
        &reg,
        Universal::Plain,
        Limits::new(100_000, 7 + k.m_id as usize),
    );
    for b in BitString::all_up_to(6) {
        let c = plain
            .value(&b)
            .ok_or_else(|| format!("no plain witness for {b}"))?;
        ensure(c <= b.len() + k.m_id as usize, || format!("C_t({b}) = {c}"))?;
    }
    let rep = subadditivity_probe(&reg, 4, Limits::new(1 << 40, 12));
    ensure(rep.prefix_checked() == rep.rows.len(), || {
        format!(
            "only {} of {} pairs have both K_t(a), K_t(b)",
            rep.prefix_checked(),
            rep.rows.len()
        )
    })?;
    let bad = rep.prefix_violations();
    ensure(bad.is_empty(), || {
        format!("{} violations, first {:?}", bad.len(), bad[0])
    })?;
    let consts: Vec<String> = k
        .as_pairs()
        .iter()
        .map(|(n, v)| format!("{n}={v}"))
        .collect();
    Ok(format!("{} pairs; {}", rep.rows.len(), consts.join(" ")))
}

fn omega_estimator() -> Check {
    const LEN: usize = 16;
    let reg = Registry::new();
    let stages: Vec<u64> = (0..=16).map(|k| 1u64 << k).collect();
    let traj = omega_trajectory(&reg, &stages, LEN);
    for w in traj.windows(2) {
        ensure(w[0].lower_bound <= w[1].lower_bound, || {
            format!("drop after stage {}", w[0].stage)
        })?;
    }
    for e in &traj {
        ensure(e.lower_bound <= Dyadic::one(), || {
            format!("stage {} above 1", e.stage)
        })?;
        ensure(is_prefix_free(e.halted.iter()), || {
            format!("stage {} not an antichain", e.stage)
        })?;
    }
    let last = traj.last().unwrap();
    ensure(last.lower_bound > Dyadic::zero(), || {
        "final bound is 0".into()
    })?;
    for e in &traj {
        for n in 0..=6 {
            let a = BitString::bits_of(&e.lower_bound, n).map_err(|x| x.to_string())?;
            let expected = halted_below(&reg, n, e.stage, LEN);
            match psi_reconstruct(&reg, &a, e.stage, LEN) {
                Some(got) => ensure(got == expected, || {
                    format!("ψ mismatch at stage {} n {n}", e.stage)
                })?,
                None => ensure(e.lower_bound.is_zero() && expected.is_empty(), || {
                    format!("ψ undefined at stage {} n {n}", e.stage)
                })?,
            }
        }
    }
    Ok(format!(
        "Ω ≥ {} = {} at stage 2^16",
        last.lower_bound,
        last.lower_bound.to_decimal()
    ))
}

fn ml_validity() -> Check {
    let exact = [
        (mltest::leading_zeros_test(), 10, 0),
        (mltest::even_position_ones_test(), 10, 0),
        (mltest::zeros_after_111_test(), 10, 3),
    ];
    for (t, m_max, shift) in exact {
        for v in validate_sense1(&t, m_max, 32) {
            let want = Dyadic::pow2_neg(v.m + shift);
            ensure(
                v.verdict == Verdict::Pass && v.measure.as_ref() == Some(&want),
                || format!("{} at m={}: {:?} {}", t.name(), v.m, v.measure, v.verdict),
            )?;
        }
    }
    let r = validate_sense1(&mltest::count101(), 3, mltest::DEFAULT_DEPTH_CAP);
    ensure(r[3].verdict == Verdict::Violated, || {
        format!("count101 at m=3: {}", r[3].verdict)
    })?;
    Ok(format!(
        "count101 measure at m=3 is {}",
        r[3].measure.as_ref().unwrap()
    ))
}

/// Level 0 is `{t > 0}`; with the whole space there the statement fails at
/// `m = 1` for every string of level 0.
fn sense_equivalence() -> Check {
    let d = 10;
    let mut checked = 0u64;
    for t in builtin_tests() {
        let f = sense1_to_sense2(&t);
        let mut covers = vec![level_set(&t, 1, d)];
        covers.extend((1..6).map(|n| f.cover(n, d)));
        for x in BitString::all_up_to(d) {
            let level = level_sense1(&t, &x);
            for m in 0..=6usize {
                let all = covers[..m].iter().all(|c| c.covers(&x));
                ensure((level >= m as u64) == all, || {
                    format!("{} {x} m={m}", t.name())
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (test, string, level) triples"))
}

fn universal_dominance() -> Check {
    let battery: Vec<_> = builtin_tests()
        .iter()
        .chain(&negative_fixtures())
        .map(sense1_to_sense2)
        .collect();
    for depth in 0..=12 {
        for n in 0..=5u64 {
            let u = universal_test(&battery, n, depth);
            let mass = cover_measure(&u);
            ensure(mass <= Dyadic::pow2_neg(n), || {
                format!("n={n} depth={depth}: {mass}")
            })?;
            let cover = minimal_elements(&u);
            for (j, f) in battery.iter().enumerate() {
                for b in normalize(f).cover(j as u64 + 1 + n, depth).iter() {
                    ensure(cover.covers(b), || {
                        format!("{} {b} missing at n={n}", f.name())
                    })?;
                }
            }
        }
    }
    Ok(format!("battery of {}", battery.len()))
}

fn bridges() -> Check {
    let reg = Registry::new();
    let limits = Limits::new(100_000, 16);
    for depth in 0..=10 {
        for k in 0..=4u64 {
            let w = mltest::compression_test(&reg, k, depth, limits);
            let mass = cover_measure(&w);
            ensure(mass <= Dyadic::pow2_neg(k), || {
                format!("k={k} depth={depth}: {mass}")
            })?;
        }
    }
    let g = sense1_to_sense2(&mltest::leading_zeros_test());
    let mut entries = 0;
    for (n_max, depth) in [(2, 8), (4, 10)] {
        let dec = ml_to_kc_decoder(&g, n_max, depth).map_err(|e| e.to_string())?;
        let table = dec.table();
        ensure(is_prefix_free(table.keys()), || {
            "decoder domain not prefix-free".into()
        })?;
        ensure(dec.coded_mass() <= Dyadic::one(), || {
            format!("coded mass {}", dec.coded_mass())
        })?;
        let kreg = dec.into_registry().map_err(|e| e.to_string())?;
        for e in &dec.entries {
            ensure(e.codeword.len() + e.n as usize == e.target.len(), || {
                format!("{e:?}")
            })?;
            let out = kreg.run_index(ait_core::Native::KraftTable.slot(), &e.codeword, 1000);
            ensure(out.output() == Some(&e.target), || {
                format!("{} does not decode", e.codeword)
            })?;
        }
        entries += dec.entries.len();
    }
    Ok(format!("{entries} decoder entries"))
}

fn reproducibility() -> Check {
    let commands: &[&[&str]] = &[
        &["enum", "--count", "65"],
        &["kraft", "--lengths", "1,2,3,3"],
        &["kraft", "--lengths", "1,1,1"],
        &["pfz", "0", "01", "1", "110"],
        &["measure", "0", "01", "110"],
        &["run", "--machine", "V", "0"],
        &["complexity", "scan", "--max-len", "5"],
        &["complexity", "census", "--n", "6", "--budget", "100"],
        &["complexity", "short", "--machine", "U", "--len-limit", "6"],
        &["complexity", "subadd", "--n-max", "2"],
        &["complexity", "horizon", "--m-max", "6"],
        &["omega", "--stage", "4096"],
        &["omega", "--stage", "4096", "--psi", "011"],
        &["mltest", "validate", "--test", "leading-zeros"],
        &["mltest", "validate", "--test", "count101", "--levels", "3"],
        &["mltest", "convert", "--test", "even-ones"],
        &["mltest", "universal", "--depth", "12"],
        &["mltest", "bridge", "--levels", "4"],
        &["mltest", "score", "--subject", "0000000000001"],
    ];
    for args in commands {
        for format in ["csv", "json"] {
            let mut argv = args.to_vec();
            argv.extend(["--format", format]);
            let first = ait_cli::execute(&argv);
            let second = ait_cli::execute(&argv);
            ensure(first == second, || format!("{argv:?} differs between runs"))?;
            ensure(!first.stdout.is_empty() || first.code != 0, || {
                format!("{argv:?} printed nothing")
            })?;
        }
    }
    Ok(format!("{} commands × 2 formats", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("enumeration law", enumeration_law, Some(1)),
        ("Kraft suite", kraft_suite, Some(5)),
        ("prefix-free-ization", prefix_freeization, Some(10)),
        ("V antichain", v_antichain, Some(60)),
        ("incompressibility census", census, Some(120)),
        ("registry constants", registry_constants, Some(300)),
        ("Ω estimator", omega_estimator, Some(120)),
        ("ML validity", ml_validity, Some(10)),
        ("sense equivalence", sense_equivalence, Some(60)),
        ("universal test", universal_dominance, Some(30)),
        ("equivalence bridges", bridges, Some(120)),
        ("reproducibility", reproducibility, None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let (ok, detail) = match (result, limit) {
            (Ok(d), Some(secs)) if took > Duration::from_secs(*secs) => {
                (false, format!("{d}; over the {secs} s limit"))
            }
            (Ok(d), _) => (true, d),
            (Err(e), _) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "[{}] {:>2}. {name} ({:.2} s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            took.as_secs_f64()
        );
    }
    if failed == 0 {
        println!("acceptance: all {} criteria pass", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria fail", criteria.len());
        ExitCode::FAILURE
    }
}
