use std::path::Path;

use opdyn::config::Instance;
use opdyn::dynamics::{
    construct_hc_approximant, find_hc_sequence, hypercyclicity_verdict, orbit_report, Approximant,
    HcSearch, HcSequence, OrbitVisitReport,
};
use opdyn::operators::{
    admissibility_lower_bounds, check_bounded_little, norm_profile, LadderConfig,
};
use opdyn::selftest;
use opdyn::{Error, FiniteFn, Scalar, TailProfile, Verdict};

use crate::csv_out::{fraction, norm_fraction, write};
use crate::{Common, EXIT_HOLDS, EXIT_INCONCLUSIVE, EXIT_REFUTED};

type Outcome = Result<u8, Error>;

fn exit_code<S>(verdict: &Verdict<S>) -> u8 {
    match verdict {
        Verdict::HoldsAtScale(_) => EXIT_HOLDS,
        Verdict::Refuted(_) => EXIT_REFUTED,
        Verdict::Inconclusive(_) => EXIT_INCONCLUSIVE,
    }
}

fn header<S: Scalar>(inst: &Instance<S>, common: &Common) {
    if !common.quiet {
        println!(
            "instance: space {}, weight {}, symbol {}",
            inst.space.kind_name(),
            inst.weight.kind_name(),
            inst.symbol.kind_name()
        );
    }
}

fn profile_rows<S: Scalar>(profile: &TailProfile<S>) -> Vec<Vec<String>> {
    profile
        .radii
        .iter()
        .zip(&profile.annulus_sup)
        .zip(&profile.witnesses)
        .map(|((r, x), w)| {
            let [n, d] = fraction(x);
            vec![
                r.to_string(),
                n,
                d,
                w.as_ref().map(|v| v.to_string()).unwrap_or_default(),
            ]
        })
        .collect()
}

const PROFILE_HEADER: [&str; 4] = ["radius", "value_num", "value_den", "witness"];

pub fn norm<S: Scalar>(inst: &Instance<S>, common: &Common, with_bounds: bool) -> Outcome {
    header(inst, common);
    let r_max = inst.horizons.r_max;
    let (profile, verdict) = norm_profile(&inst.symbol, &inst.weight, &inst.space, r_max)?;
    if !common.quiet {
        if let Some((r, w)) = profile.last() {
            println!("r_R at R = {r_max}: {r} (first attained at {w})");
        }
    }
    if with_bounds && !common.quiet {
        let radius = r_max.min(8);
        let bounds = admissibility_lower_bounds(
            &inst.symbol,
            &inst.weight,
            &inst.space,
            radius,
            inst.horizons.search_radius,
        )?;
        let resolved: Vec<_> = bounds
            .iter()
            .filter_map(|b| b.value.as_ref().map(|v| (b, v)))
            .collect();
        if let Some((b, v)) = resolved
            .iter()
            .max_by(|a, b| a.1.squared.partial_cmp(&b.1.squared).expect("ordered"))
        {
            println!(
                "largest test-function bound ||C_phi g_w|| over ball({radius}): {v} at w = {}",
                b.vertex
            );
        }
        let skipped = bounds.len() - resolved.len();
        if skipped > 0 {
            println!("{skipped} test functions could not be resolved within the search radius");
        }
    }
    println!("big space: {verdict}");
    if let Some(path) = &common.csv {
        let rows: Vec<Vec<String>> = profile
            .radii
            .iter()
            .zip(&profile.ratio)
            .zip(&profile.witness)
            .map(|((r, x), w)| {
                let [n, d] = fraction(x);
                vec![r.to_string(), n, d, w.to_string()]
            })
            .collect();
        write(path, &PROFILE_HEADER, &rows)?;
    }
    Ok(exit_code(&verdict))
}

pub fn bounded_little<S: Scalar>(inst: &Instance<S>, common: &Common) -> Outcome {
    header(inst, common);
    let report = check_bounded_little(
        &inst.symbol,
        &inst.weight,
        &inst.space,
        &inst.growth,
        &LadderConfig {
            r_max: inst.horizons.r_max,
            tol: inst.tol.clone(),
        },
    )?;
    if !common.quiet {
        println!("big space: {}", report.big_space);
        if let Some(set) = &report.exceptional_set {
            println!("vertices of ball(R/2) hit from beyond it: {}", set.len());
        }
        if let Some(g) = &report.g_profile {
            let onset = g.onset_below(&inst.tol);
            let positive = g.annulus_sup.iter().all(|x| *x > S::zero());
            println!(
                "g-condition profile: strictly positive {positive}, below tol from radius {}",
                onset.map(|r| r.to_string()).unwrap_or_else(|| "-".into())
            );
        }
        if let Some(e) = &report.unboundedness {
            println!(
                "witness: f passes the tail test, C_phi f stays >= {} from radius {} ({} sequence points)",
                e.floor,
                e.persists_from,
                e.sequence.len()
            );
        }
        for note in &report.notes {
            println!("note: {note}");
        }
    }
    println!("rule: {}", report.rule);
    println!("little space: {}", report.little_space);
    if let Some(path) = &common.csv {
        let profile = report
            .unboundedness
            .as_ref()
            .map(|e| &e.image_tail)
            .or(report.g_profile.as_ref())
            .or(report.weight_tail.as_ref());
        let rows = profile.map(profile_rows).unwrap_or_default();
        write(path, &PROFILE_HEADER, &rows)?;
    }
    Ok(exit_code(&report.little_space))
}

fn print_sequence<S: Scalar>(seq: &HcSequence<S>) {
    for e in &seq.entries {
        println!(
            "  k = {:>3}  n_k = {:>5}  forward max {}  backward max {}",
            e.k, e.n_k, e.forward_max, e.backward_max
        );
    }
}

fn sequence_rows<S: Scalar>(seq: &HcSequence<S>) -> Vec<Vec<String>> {
    seq.entries
        .iter()
        .map(|e| {
            let [fn_, fd] = fraction(&e.forward_max);
            let [bn, bd] = fraction(&e.backward_max);
            vec![e.k.to_string(), e.n_k.to_string(), fn_, fd, bn, bd]
        })
        .collect()
}

const SEQUENCE_HEADER: [&str; 6] = [
    "k",
    "n_k",
    "forward_num",
    "forward_den",
    "backward_num",
    "backward_den",
];

pub fn hc_check<S: Scalar>(inst: &Instance<S>, common: &Common) -> Outcome {
    header(inst, common);
    let report = hypercyclicity_verdict(
        &inst.symbol,
        &inst.weight,
        &inst.space,
        &inst.growth,
        &inst.horizons,
        &inst.tol,
    )?;
    if !common.quiet {
        println!(
            "little space boundedness: {} ({})",
            report.boundedness.little_space, report.boundedness.rule
        );
        for o in &report.obstructions {
            println!("obstruction {}: {} {}", o.kind, o.status(), o.verdict);
        }
        if let Some(search) = &report.sequence {
            println!("sequence:");
            print_sequence(search.sequence());
        }
        for note in &report.notes {
            println!("note: {note}");
        }
    }
    if let (Some(kind), false) = (report.decisive, common.quiet) {
        println!("decisive obstruction: {kind}");
    }
    println!("hypercyclic: {}", report.verdict);
    if let Some(path) = &common.csv {
        let rows: Vec<Vec<String>> = report
            .obstructions
            .iter()
            .map(|o| {
                vec![
                    o.kind.to_string(),
                    o.status().to_string(),
                    o.verdict.to_string(),
                ]
            })
            .collect();
        write(path, &["obstruction", "status", "detail"], &rows)?;
    }
    Ok(exit_code(&report.verdict))
}

pub fn hc_sequence<S: Scalar>(inst: &Instance<S>, common: &Common) -> Outcome {
    header(inst, common);
    let h = &inst.horizons;
    let search = find_hc_sequence(
        &inst.symbol,
        &inst.weight,
        &inst.space,
        h.k,
        h.n_max,
        h.search_radius,
    )?;
    if !common.quiet {
        print_sequence(search.sequence());
    }
    let code = match &search {
        HcSearch::Found(seq) => {
            println!("sequence: HoldsAtScale({} terms)", seq.entries.len());
            EXIT_HOLDS
        }
        HcSearch::Inconclusive { k, reason, .. } => {
            println!("sequence: Inconclusive(stopped at k = {k}: {reason})");
            EXIT_INCONCLUSIVE
        }
    };
    if let Some(path) = &common.csv {
        write(path, &SEQUENCE_HEADER, &sequence_rows(search.sequence()))?;
    }
    Ok(code)
}

fn approximant<S: Scalar>(inst: &Instance<S>) -> Result<Approximant<S>, Error> {
    if inst.targets.is_empty() {
        return Err(Error::Config(
            "this command needs a non-empty \"targets\" list".into(),
        ));
    }
    construct_hc_approximant(
        &inst.symbol,
        &inst.weight,
        &inst.space,
        &inst.targets,
        &inst.epsilon,
        inst.horizons.n_max,
        inst.horizons.search_radius,
    )
}

fn visit_rows<S: Scalar>(report: &OrbitVisitReport<S>) -> Vec<Vec<String>> {
    report
        .visits
        .iter()
        .map(|v| {
            let [n, d] = norm_fraction(&v.error);
            vec![v.exponent.to_string(), v.target.to_string(), n, d]
        })
        .collect()
}

const ORBIT_HEADER: [&str; 4] = ["n", "target_index", "error_num", "error_den"];

pub fn hc_vector<S: Scalar>(inst: &Instance<S>, common: &Common) -> Outcome {
    header(inst, common);
    match approximant(inst)? {
        Approximant::Found(report) => {
            if !common.quiet {
                println!("vector: {}", report.vector);
                for v in &report.visits {
                    println!(
                        "  target {} at n = {}: error {}",
                        v.target, v.exponent, v.error
                    );
                }
            }
            println!(
                "approximant: HoldsAtScale(all errors below {})",
                report.epsilon
            );
            if let Some(path) = &common.csv {
                write(path, &ORBIT_HEADER, &visit_rows(&report))?;
            }
            Ok(EXIT_HOLDS)
        }
        Approximant::Inconclusive { exponents, reason } => {
            println!("approximant: Inconclusive({reason}; exponents so far {exponents:?})");
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

pub fn orbit<S: Scalar>(inst: &Instance<S>, common: &Common) -> Outcome {
    header(inst, common);
    if inst.targets.is_empty() {
        return Err(Error::Config(
            "orbit needs a non-empty \"targets\" list".into(),
        ));
    }
    let (f, visits): (FiniteFn<S>, Vec<(usize, usize)>) = match &inst.function {
        Some(f) => (f.clone(), Vec::new()),
        None => match approximant(inst)? {
            Approximant::Found(r) => (
                r.vector.clone(),
                r.visits.iter().map(|v| (v.exponent, v.target)).collect(),
            ),
            Approximant::Inconclusive { reason, .. } => {
                println!("orbit: Inconclusive(no \"fn\" given and no approximant: {reason})");
                return Ok(EXIT_INCONCLUSIVE);
            }
        },
    };
    let n_max = visits
        .iter()
        .map(|(n, _)| *n)
        .max()
        .unwrap_or(inst.horizons.n_max);
    let table = orbit_report(
        &inst.symbol,
        &inst.weight,
        &inst.space,
        &f,
        n_max,
        &inst.targets,
        inst.horizons.search_radius,
    )?;
    let mut below = 0usize;
    for row in &table.rows {
        below += row.iter().filter(|d| d.less_than(&inst.epsilon)).count();
    }
    if !common.quiet {
        for &(n, j) in &visits {
            println!("  n = {n}, target {j}: distance {}", table.rows[n][j]);
        }
    }
    println!(
        "orbit: {} rows, {below} distances below {} (completeness {:?})",
        table.rows.len(),
        inst.epsilon,
        table.completeness
    );
    if let Some(path) = &common.csv {
        let rows: Vec<Vec<String>> = table
            .rows
            .iter()
            .enumerate()
            .flat_map(|(n, row)| {
                row.iter().enumerate().map(move |(j, d)| {
                    let [num, den] = norm_fraction(d);
                    vec![n.to_string(), j.to_string(), num, den]
                })
            })
            .collect();
        write(path, &ORBIT_HEADER, &rows)?;
    }
    Ok(EXIT_HOLDS)
}

pub fn selftest(seed: u64, csv: Option<&Path>, quiet: bool) -> Outcome {
    let reports = selftest::run_all(seed);
    let mut failed = 0;
    for r in &reports {
        if !r.passed() {
            failed += 1;
        }
        if !quiet || !r.passed() {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            match &r.failure {
                Some(why) => println!("{status} {} ({} cases): {why}", r.name, r.cases),
                None => println!("{status} {} ({} cases)", r.name, r.cases),
            }
        }
    }
    println!(
        "selftest: {} of {} suites passed",
        reports.len() - failed,
        reports.len()
    );
    if let Some(path) = csv {
        let rows: Vec<Vec<String>> = reports
            .iter()
            .map(|r| {
                vec![
                    r.name.to_string(),
                    r.cases.to_string(),
                    r.passed().to_string(),
                    r.failure.clone().unwrap_or_default(),
                ]
            })
            .collect();
        write(path, &["suite", "cases", "passed", "failure"], &rows)?;
    }
    Ok(if failed == 0 {
        EXIT_HOLDS
    } else {
        EXIT_REFUTED
    })
}
