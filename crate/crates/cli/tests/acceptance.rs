//! Acceptance gate: one PASS/FAIL line per criterion, with its time budget.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use opdyn::dynamics::{
    audit_hc_sequence, backward_map, construct_hc_approximant, find_hc_sequence, necessary_report,
    orbit_report, Approximant, HcSearch, Horizons, ObstructionStatus,
};
use opdyn::functions::{indicator, little_space_tail, ReciprocalGrowth, Value};
use opdyn::operators::{
    admissibility_lower_bounds, apply_power, check_bounded_little, norm_profile, LadderConfig, Rule,
};
use opdyn::random::{random_function, table_instance};
use opdyn::selftest;
use opdyn::{Growth, Rational, Space, SymbolMap, Vertex, VertexId, Weight};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Q = Rational;
type Check = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn q(p: i64, d: i64) -> Q {
    Q::new(p.into(), d.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn examples() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn run_cli(args: &[&str], config: &str) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_opdyn"))
        .args(args)
        .arg(examples().join(config))
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

/// Brute-force `max mu(v)/mu(phi(v))` over table indices with level `<= r`.
fn brute_ratio(points: &[(i64, i64)], weights: &[Q], image: &[usize], r: i64) -> Q {
    (0..points.len())
        .filter(|&i| points[i].0.abs() + points[i].1.abs() <= r)
        .map(|i| weights[i].clone() / weights[image[i]].clone())
        .max()
        .expect("origin present")
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut injective_cases = 0;
    for case in 0..200 {
        let inst = table_instance(&mut rng, 50, case % 2 == 0).map_err(|e| e.to_string())?;
        ensure(inst.points.len() <= 50, || {
            format!("case {case}: table too large")
        })?;
        let (profile, _) = norm_profile(&inst.symbol, &inst.weight, &inst.space, inst.radius)
            .map_err(|e| e.to_string())?;
        for (r, value) in profile.radii.iter().zip(&profile.ratio) {
            let brute = brute_ratio(&inst.points, &inst.weights, &inst.image, *r as i64);
            ensure(brute == *value, || {
                format!("case {case}: r_{r} = {value}, brute force {brute}")
            })?;
        }
        if inst.injective {
            injective_cases += 1;
            for r in 0..=inst.radius {
                let bounds = admissibility_lower_bounds(
                    &inst.symbol,
                    &inst.weight,
                    &inst.space,
                    r,
                    inst.radius,
                )
                .map_err(|e| e.to_string())?;
                let best = bounds
                    .iter()
                    .map(|b| {
                        b.value
                            .as_ref()
                            .map(|v| v.squared.clone())
                            .ok_or("unresolved bound")
                    })
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter()
                    .max()
                    .expect("nonempty ball");
                let brute = brute_ratio(&inst.points, &inst.weights, &inst.image, r as i64);
                ensure(best == brute.clone() * brute.clone(), || {
                    format!(
                        "case {case}: max ||C g_w||^2 = {best} at radius {r}, r_R^2 = {}",
                        brute.clone() * brute
                    )
                })?;
            }
        }
    }
    Ok(format!(
        "200 tables, {injective_cases} injective, exact equality at every radius"
    ))
}

/// Annulus maxima of `min{1/(|phi(v)| + 1), 3^m 2^-n}` for the grid projection.
fn grid_g_oracle(r: i64) -> Q {
    (0..=r)
        .map(|m| {
            let n = r - m;
            let mu =
                Q::from_integer(3.into()).pow(m as i32) / Q::from_integer(2.into()).pow(n as i32);
            let inv_g = q(1, m + 1);
            if mu < inv_g {
                mu
            } else {
                inv_g
            }
        })
        .max()
        .expect("nonempty annulus")
}

fn criterion_2() -> Check {
    let space = Space::Grid;
    let weight = Weight::<Q>::GeometricGrid;
    let symbol = SymbolMap::GridProjection;
    let tol = q(1, 20);
    let report = check_bounded_little(
        &symbol,
        &weight,
        &space,
        &Growth::Linear,
        &LadderConfig {
            r_max: 300,
            tol: tol.clone(),
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(report.norm_profile.ratio.iter().all(|r| r.is_one()), || {
        "norm profile is not identically 1".into()
    })?;
    ensure(report.norm_profile.ratio.len() == 301, || {
        "norm profile does not reach R = 300".into()
    })?;
    ensure(report.rule == Rule::GCondition, || {
        format!("rule {} instead of GCondition", report.rule)
    })?;
    ensure(report.little_space.is_holds(), || {
        format!("little space verdict {}", report.little_space)
    })?;
    let g = report.g_profile.as_ref().ok_or("no g-condition profile")?;
    ensure(g.annulus_sup.iter().all(|x| *x > Q::zero()), || {
        "g profile not strictly positive".into()
    })?;
    for (r, value) in g.annulus_sup.iter().enumerate() {
        let expected = grid_g_oracle(r as i64);
        ensure(*value == expected, || {
            format!("annulus {r}: {value}, oracle {expected}")
        })?;
    }
    let frozen = [
        (0, q(1, 1)),
        (1, q(1, 2)),
        (2, q(1, 2)),
        (3, q(1, 2)),
        (10, q(27, 128)),
        (50, q(1, 19)),
        (51, q(1, 20)),
        (52, q(1, 20)),
        (53, q(1, 20)),
        (100, q(1, 38)),
        (300, q(1, 115)),
    ];
    for (r, value) in frozen {
        ensure(g.annulus_sup[r] == value, || {
            format!("annulus {r}: {} != frozen {value}", g.annulus_sup[r])
        })?;
    }
    let witness = g.witnesses[1].as_ref().ok_or("no witness at radius 1")?;
    ensure(*witness.id() == VertexId::Pair(0, 1), || {
        format!("radius 1 witness {witness}")
    })?;
    let onset = g.onset_below(&tol);
    ensure(onset == Some(54), || format!("onset {onset:?}, oracle 54"))?;
    Ok("norm profile 1 on [0, 300], rule GCondition, profile > 0, crosses 1/20 at R = 54".into())
}

fn criterion_3() -> Check {
    let space = Space::Grid;
    let weight = Weight::<Q>::ConstantOne;
    let symbol = SymbolMap::GridProjection;
    let tol = q(1, 20);
    let r_max = 120;
    let report = check_bounded_little(
        &symbol,
        &weight,
        &space,
        &Growth::Linear,
        &LadderConfig {
            r_max,
            tol: tol.clone(),
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(report.rule == Rule::ConverseCounterexample, || {
        format!("rule {}", report.rule)
    })?;
    ensure(report.little_space.is_refuted(), || {
        format!("verdict {}", report.little_space)
    })?;
    let f = ReciprocalGrowth {
        growth: Growth::Linear,
    };
    let (source, _) =
        little_space_tail(&f, &weight, &space, r_max, &tol).map_err(|e| e.to_string())?;
    ensure(source.is_holds(), || {
        format!("f = 1/(|v|+1) fails the tail test: {source}")
    })?;
    let evidence = report.unboundedness.as_ref().ok_or("no witness attached")?;
    for (r, (sup, w)) in evidence
        .image_tail
        .annulus_sup
        .iter()
        .zip(&evidence.image_tail.witnesses)
        .enumerate()
    {
        ensure(sup.is_one(), || {
            format!("image annulus sup at {r} is {sup}")
        })?;
        let w = w.as_ref().ok_or("missing witness")?;
        ensure(*w.id() == VertexId::Pair(0, r as i64), || {
            format!("image witness at {r} is {w}")
        })?;
        // independent value of mu(v) |f(phi(v))| at (0, r)
        let v = space.pair(0, r as i64).map_err(|e| e.to_string())?;
        let at = opdyn::functions::Evaluable::value_at(
            &f,
            &symbol.apply(&space, &v).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        ensure(at == Value::new(q(1, 1), q(0, 1)), || {
            format!("C_phi f at {v} is {at}")
        })?;
    }
    Ok(format!(
        "not bounded; f in the little space, C_phi f = 1 along (0, n) for n <= {r_max}"
    ))
}

fn criterion_4() -> Check {
    let space = Space::Line;
    let weight = Weight::<Q>::ReciprocalLevel;
    let symbol = SymbolMap::Shift;
    let horizons = Horizons {
        r_max: 40,
        n_max: 2048,
        search_radius: 60,
        k: 10,
    };
    let obstructions =
        necessary_report(&symbol, &weight, &space, &horizons).map_err(|e| e.to_string())?;
    ensure(obstructions.len() == 4, || {
        "expected four obstructions".into()
    })?;
    for o in &obstructions {
        ensure(o.status() == ObstructionStatus::Clear, || {
            format!("{}: {}", o.kind, o.verdict)
        })?;
    }
    let HcSearch::Found(seq) =
        find_hc_sequence(&symbol, &weight, &space, 10, 2048, 60).map_err(|e| e.to_string())?
    else {
        return Err("sequence search did not succeed".into());
    };
    ensure(seq.entries.len() == 10, || "fewer than 10 terms".into())?;
    for e in &seq.entries {
        let k = e.k as i64;
        let n = e.n_k as i64;
        ensure(n <= 2 * k, || format!("n_{k} = {n} > 2k"))?;
        let fwd = (-k..=k)
            .map(|v| q(1, (v + n).abs() + 1))
            .max()
            .expect("nonempty");
        let bwd = (-k..=k)
            .map(|v| q(1, (v - n).abs() + 1))
            .max()
            .expect("nonempty");
        ensure(fwd == e.forward_max && bwd == e.backward_max, || {
            format!("audit mismatch at k = {k}")
        })?;
        ensure(fwd < q(1, k) && bwd < q(1, k), || {
            format!("bounds not below 1/{k}")
        })?;
    }
    ensure(
        audit_hc_sequence(&seq, &symbol, &weight, &space).map_err(|e| e.to_string())?,
        || "library audit failed".into(),
    )?;
    let (code, out) = run_cli(&["hc-check"], "line_shift_reciprocal.json");
    ensure(code == 0, || format!("hc-check exited {code}:\n{out}"))?;
    ensure(out.contains("hypercyclic: HoldsAtScale"), || {
        "verdict line missing".into()
    })?;
    let n: Vec<usize> = seq.entries.iter().map(|e| e.n_k).collect();
    Ok(format!("obstructions clear, n_k = {n:?}, hc-check exit 0"))
}

fn criterion_5() -> Check {
    let controls = [
        ("ray_identity.json", "periodic-point"),
        ("grid_projection.json", "non-injective"),
        ("ray_constant_shift.json", "norm-at-most-one"),
        ("ray_geometric_increasing.json", "norm-at-most-one"),
    ];
    for (config, name) in controls {
        let (code, out) = run_cli(&["hc-check"], config);
        ensure(code == 1, || format!("{config}: exit {code}"))?;
        ensure(
            out.contains(&format!("decisive obstruction: {name}")),
            || format!("{config}: wrong obstruction\n{out}"),
        )?;
    }
    Ok("identity, grid projection, unweighted ray, increasing weight: exit 1 with the named obstruction".into())
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for case in 0..100 {
        let inst = table_instance(&mut rng, 40, true).map_err(|e| e.to_string())?;
        let vertices: Vec<Vertex> = (0..inst.points.len()).map(|i| inst.vertex(i)).collect();
        let f = random_function(&mut rng, &vertices, 10);
        for n in 0..=10 {
            let s = backward_map(&inst.symbol, &inst.space, n, &f).map_err(|e| e.to_string())?;
            let (back, _) = apply_power(&inst.symbol, &inst.space, n, &s, inst.radius)
                .map_err(|e| e.to_string())?;
            ensure(back == f, || format!("case {case}: C^{n} S_{n} f != f"))?;
            // independent: (C^n S_n f)(i) = (S_n f)(phi^n(i)) by index arithmetic
            for (i, v) in vertices.iter().enumerate() {
                let mut j = i;
                for _ in 0..n {
                    j = inst.image[j];
                }
                ensure(s.get(&vertices[j]) == f.get(v), || {
                    format!("case {case}: index check fails at {v}, n = {n}")
                })?;
            }
        }
    }

    let space = Space::Line;
    let weight = Weight::<Q>::ReciprocalLevel;
    let symbol = SymbolMap::Shift;
    let at = |v: i64| space.int(v).expect("line vertex");
    let chi0 = indicator::<Q>([at(0)]);
    let targets = vec![
        chi0.clone(),
        chi0.scale(&Value::new(q(2, 1), q(0, 1))),
        indicator([at(1)]),
    ];
    let epsilon = q(1, 100);
    let Approximant::Found(report) =
        construct_hc_approximant(&symbol, &weight, &space, &targets, &epsilon, 4096, 8)
            .map_err(|e| e.to_string())?
    else {
        return Err("no approximant".into());
    };
    let exponents: Vec<usize> = report.visits.iter().map(|v| v.exponent).collect();
    ensure(exponents.windows(2).all(|w| w[0] < w[1]), || {
        "exponents not increasing".into()
    })?;
    for visit in &report.visits {
        // independent: (C^n f)(v) = f(v + n) on the line
        let n = visit.exponent as i64;
        let mut best = Q::zero();
        let mut points: Vec<i64> = report.vector.support().map(|v| as_int(v) - n).collect();
        points.extend(targets[visit.target].support().map(as_int));
        for v in points {
            let diff = report.vector.get(&at(v + n)) - targets[visit.target].get(&at(v));
            let mu = q(1, v.abs() + 1);
            let value = mu.clone() * mu * diff.norm_sqr();
            if value > best {
                best = value;
            }
        }
        ensure(best == visit.error.squared, || {
            format!(
                "target {}: recomputed error^2 {best} != {}",
                visit.target, visit.error.squared
            )
        })?;
        ensure(best < epsilon.clone() * epsilon.clone(), || {
            format!("target {}: error not below 1/100", visit.target)
        })?;
    }
    let n_max = *exponents.last().expect("three visits");
    let table = orbit_report(&symbol, &weight, &space, &report.vector, n_max, &targets, 8)
        .map_err(|e| e.to_string())?;
    for visit in &report.visits {
        let d = &table.rows[visit.exponent][visit.target];
        ensure(*d == visit.error && d.less_than(&epsilon), || {
            format!("orbit table disagrees at n = {}", visit.exponent)
        })?;
    }
    Ok(format!("100 injective tables, left inverse for n <= 10; exponents {exponents:?}, errors < 1/100, orbit table agrees"))
}

fn as_int(v: &Vertex) -> i64 {
    match v.id() {
        VertexId::Int(n) => *n,
        other => panic!("not a line vertex: {other}"),
    }
}

fn criterion_7() -> Check {
    let seed = 0x5eed_0007;
    let reports = [
        selftest::norm_oracle(seed, 200),
        selftest::sub_multiplicative(seed, 200),
        selftest::truncation_tail(seed, 1000),
        selftest::evaluation_bound(seed, 1000),
        selftest::adjoint_identity(seed, 1000),
        selftest::left_inverse(seed, 100),
        selftest::runaway_periodic(seed, 50),
        selftest::verdict_consistency(seed, 50),
        selftest::norm_axioms(seed, 300),
    ];
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.to_string())
        .collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    let total: usize = reports.iter().map(|r| r.cases).sum();
    Ok(format!("{} suites, {total} cases", reports.len()))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 norm formula oracle", 10, criterion_1),
        ("2 grid example", 30, criterion_2),
        ("3 converse witness", 5, criterion_3),
        ("4 hypercyclic line", 10, criterion_4),
        ("5 negative controls", 5, criterion_5),
        ("6 criterion identities", 20, criterion_6),
        ("7 invariant suites", 30, criterion_7),
    ];
    let mut failures = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        match (&result, in_time) {
            (Ok(detail), true) => println!(
                "PASS  criterion {name:<24} {:>7.2}s / {budget}s  {detail}",
                elapsed.as_secs_f64()
            ),
            (Ok(detail), false) => {
                failures += 1;
                println!(
                    "FAIL  criterion {name:<24} {:>7.2}s / {budget}s  over budget; {detail}",
                    elapsed.as_secs_f64()
                );
            }
            (Err(why), _) => {
                failures += 1;
                println!(
                    "FAIL  criterion {name:<24} {:>7.2}s / {budget}s  {why}",
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    if failures > 0 {
        println!("acceptance: {failures} of 7 criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all 7 criteria passed");
}
