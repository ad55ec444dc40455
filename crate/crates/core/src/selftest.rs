//! Seeded invariant suites over random table instances and the built-in
//! families. Each suite reports how many cases it ran and the first failure.

use std::fmt;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{backward_map, hypercyclicity_verdict, Horizons};
use crate::error::Result;
use crate::functions::{evaluation_bound_check, truncate, FiniteFn, Growth};
use crate::metric_space::Space;
use crate::operators::{
    adjoint_identity_check, admissibility_lower_bounds, apply, apply_power, norm_profile,
};
use crate::random::{random_function, table_instance, TableInstance};
use crate::symbols::{find_periodic_points, image_set, run_away_check, SymbolMap};
use crate::verdict::Verdict;
use crate::weights::Weight;

type Q = BigRational;

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failure: Option<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<24} {:>5} cases {:>8.3}s",
            self.name,
            self.cases,
            self.elapsed.as_secs_f64()
        )?;
        if let Some(why) = &self.failure {
            write!(f, "  {why}")?;
        }
        Ok(())
    }
}

fn suite(
    name: &'static str,
    body: impl FnOnce() -> Result<(usize, Option<String>)>,
) -> SuiteReport {
    let start = Instant::now();
    let (cases, failure) = match body() {
        Ok(r) => r,
        Err(e) => (0, Some(format!("error: {e}"))),
    };
    SuiteReport {
        name,
        cases,
        failure,
        elapsed: start.elapsed(),
    }
}

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// `r_R` against a brute-force scan, its monotonicity, and the test-function
/// lower bounds (equal to `r_R` for injective maps).
pub fn norm_oracle(seed: u64, cases: usize) -> SuiteReport {
    suite("norm-oracle", || {
        let mut rng = rng(seed, 1);
        for case in 0..cases {
            let inst = {
                let injective = rng.gen_bool(0.5);
                table_instance(&mut rng, 50, injective)
            }?;
            let (profile, _) = norm_profile(&inst.symbol, &inst.weight, &inst.space, inst.radius)?;
            for (r, value) in profile.radii.iter().zip(&profile.ratio) {
                let brute = (0..inst.points.len())
                    .filter(|&i| inst.level(i) <= *r as i64)
                    .map(|i| inst.weights[i].clone() / inst.weights[inst.image[i]].clone())
                    .max()
                    .expect("origin is in every ball");
                if brute != *value {
                    return Ok((
                        case,
                        Some(format!("case {case}: r_{r} = {value}, brute force {brute}")),
                    ));
                }
            }
            if profile.ratio.windows(2).any(|w| w[0] > w[1]) {
                return Ok((case, Some(format!("case {case}: r_R decreased"))));
            }
            let bounds = admissibility_lower_bounds(
                &inst.symbol,
                &inst.weight,
                &inst.space,
                inst.radius,
                inst.radius,
            )?;
            let r_last = profile.ratio.last().cloned().unwrap_or_else(Q::zero);
            let mut best = Q::zero();
            for b in &bounds {
                let Some(value) = &b.value else {
                    return Ok((
                        case,
                        Some(format!("case {case}: unresolved bound at {}", b.vertex)),
                    ));
                };
                if value.squared > r_last.clone() * r_last.clone()
                    || value.squared < b.ratio.clone() * b.ratio.clone()
                {
                    return Ok((
                        case,
                        Some(format!(
                            "case {case}: bound {value} at {} outside [{}, {r_last}]",
                            b.vertex, b.ratio
                        )),
                    ));
                }
                if value.squared > best {
                    best = value.squared.clone();
                }
            }
            if inst.injective && best != r_last.clone() * r_last {
                return Ok((
                    case,
                    Some(format!("case {case}: injective but max bound^2 = {best}")),
                ));
            }
        }
        Ok((cases, None))
    })
}

/// `||C_phi f|| <= r ||f||` with `r = sup mu(v)/mu(phi(v))` over the table.
pub fn sub_multiplicative(seed: u64, cases: usize) -> SuiteReport {
    suite("sub-multiplicative", || {
        let mut rng = rng(seed, 2);
        for case in 0..cases {
            let inst = {
                let injective = rng.gen_bool(0.5);
                table_instance(&mut rng, 30, injective)
            }?;
            let (profile, _) = norm_profile(&inst.symbol, &inst.weight, &inst.space, inst.radius)?;
            let r = profile.ratio.last().cloned().unwrap_or_else(Q::zero);
            let ball = inst.space.ball(inst.radius)?;
            let f = random_function(&mut rng, &ball, 6);
            let (image, _) = apply(&inst.symbol, &inst.space, &f, inst.radius)?;
            let lhs = image.norm(&inst.weight)?.squared;
            let rhs = r.clone() * r * f.norm(&inst.weight)?.squared;
            if lhs > rhs {
                return Ok((case, Some(format!("case {case}: ||Cf||^2 = {lhs} > {rhs}"))));
            }
        }
        Ok((cases, None))
    })
}

/// `||f - truncate(f, n)||` is the weighted maximum over `supp f` beyond `n`.
pub fn truncation_tail(seed: u64, cases: usize) -> SuiteReport {
    suite("truncation-tail", || {
        let mut rng = rng(seed, 3);
        for case in 0..cases {
            let inst = table_instance(&mut rng, 40, false)?;
            let ball = inst.space.ball(inst.radius)?;
            let f = random_function(&mut rng, &ball, 10);
            let n = rng.gen_range(0..=inst.radius + 1);
            let tail = (&f - &truncate(&f, n)).norm(&inst.weight)?.squared;
            let mut expected = Q::zero();
            for (v, x) in f.iter() {
                if *v.level().numer() >= n as i64 * *v.level().denom() {
                    let mu = inst.weight.eval(v)?;
                    let q = mu.clone() * mu * x.norm_sqr();
                    if q > expected {
                        expected = q;
                    }
                }
            }
            if tail != expected {
                return Ok((
                    case,
                    Some(format!("case {case}: tail^2 {tail} != {expected}")),
                ));
            }
        }
        Ok((cases, None))
    })
}

/// `|f(v)| <= ||f|| / mu(v)` for random `(f, v)`.
pub fn evaluation_bound(seed: u64, cases: usize) -> SuiteReport {
    suite("evaluation-bound", || {
        let mut rng = rng(seed, 4);
        let mut inst = table_instance(&mut rng, 40, false)?;
        for case in 0..cases {
            if case % 50 == 0 {
                inst = table_instance(&mut rng, 40, false)?;
            }
            let ball = inst.space.ball(inst.radius)?;
            let f = random_function(&mut rng, &ball, 8);
            let v = ball[rng.gen_range(0..ball.len())].clone();
            if !evaluation_bound_check(&f, &inst.weight, &v)? {
                return Ok((case, Some(format!("case {case}: bound fails at {v}"))));
            }
        }
        Ok((cases, None))
    })
}

/// `(C_phi f)(v) = f(phi(v))` for random `(phi, f, v)`.
pub fn adjoint_identity(seed: u64, cases: usize) -> SuiteReport {
    suite("adjoint-identity", || {
        let mut rng = rng(seed, 5);
        let mut inst = table_instance(&mut rng, 40, false)?;
        for case in 0..cases {
            if case % 50 == 0 {
                inst = {
                    let injective = rng.gen_bool(0.5);
                    table_instance(&mut rng, 40, injective)
                }?;
            }
            let ball = inst.space.ball(inst.radius)?;
            let f = random_function(&mut rng, &ball, 8);
            let v = ball[rng.gen_range(0..ball.len())].clone();
            if !adjoint_identity_check(&inst.symbol, &inst.space, &f, &v, inst.radius)? {
                return Ok((case, Some(format!("case {case}: identity fails at {v}"))));
            }
        }
        Ok((cases, None))
    })
}

/// `C_phi^n S_n f = f` exactly for injective tables and `n <= 10`.
pub fn left_inverse(seed: u64, cases: usize) -> SuiteReport {
    suite("left-inverse", || {
        let mut rng = rng(seed, 6);
        for case in 0..cases {
            let inst = table_instance(&mut rng, 40, true)?;
            let ball = inst.space.ball(inst.radius)?;
            let f = random_function(&mut rng, &ball, 8);
            for n in 0..=10 {
                let s = backward_map(&inst.symbol, &inst.space, n, &f)?;
                let (back, _) = apply_power(&inst.symbol, &inst.space, n, &s, inst.radius)?;
                if back != f {
                    return Ok((case, Some(format!("case {case}: C^{n} S_{n} f != f"))));
                }
            }
        }
        Ok((cases, None))
    })
}

/// A periodic point forces a run-away refutation on any set containing it;
/// images are nested; declared inverses undo iterates.
pub fn runaway_periodic(seed: u64, cases: usize) -> SuiteReport {
    suite("runaway-periodic", || {
        let mut rng = rng(seed, 7);
        for case in 0..cases {
            let inst: TableInstance = {
                let injective = rng.gen_bool(0.5);
                table_instance(&mut rng, 30, injective)
            }?;
            let (periodic, _) = find_periodic_points(&inst.symbol, &inst.space, inst.radius, 64)?;
            if let Verdict::Refuted(crate::verdict::Witness::PeriodicPoint { vertex, .. }) =
                &periodic
            {
                let set = vec![vertex.clone()];
                let (runaway, _) = run_away_check(&inst.symbol, &inst.space, &set, 64)?;
                if !runaway.is_refuted() {
                    return Ok((
                        case,
                        Some(format!(
                            "case {case}: periodic {vertex} but run-away not refuted"
                        )),
                    ));
                }
            } else {
                return Ok((
                    case,
                    Some(format!(
                        "case {case}: a self-map of a finite set must have a periodic point"
                    )),
                ));
            }
            let mut previous = None;
            for n in 1..=4 {
                let (level, _) = image_set(&inst.symbol, &inst.space, n, inst.radius, inst.radius)?;
                if let Some(prev) = &previous {
                    let prev: &Vec<_> = prev;
                    if level.iter().any(|v| !prev.contains(v)) {
                        return Ok((case, Some(format!("case {case}: image {n} not nested"))));
                    }
                }
                previous = Some(level);
            }
            if inst.injective && inst.symbol.has_declared_inverse(&inst.space) {
                for v in inst.space.ball(inst.radius)? {
                    let forward = inst.symbol.iterate(&inst.space, 5, &v)?;
                    if inst.symbol.inverse_iterate(&inst.space, 5, &forward)? != v {
                        return Ok((case, Some(format!("case {case}: inverse fails at {v}"))));
                    }
                }
            }
        }
        Ok((cases, None))
    })
}

/// Positive instances never fail a run-away check, and a periodic point
/// always yields a refuted verdict.
pub fn verdict_consistency(seed: u64, cases: usize) -> SuiteReport {
    suite("verdict-consistency", || {
        let mut rng = rng(seed, 8);
        let horizons = Horizons {
            r_max: 12,
            n_max: 100,
            search_radius: 14,
            k: 6,
        };
        let tol = Q::new(1.into(), 10.into());
        let line = Space::Line;
        let positive = hypercyclicity_verdict(
            &SymbolMap::Shift,
            &Weight::ReciprocalLevel,
            &line,
            &Growth::Linear,
            &horizons,
            &tol,
        )?;
        if !positive.verdict.is_holds() {
            return Ok((
                0,
                Some(format!(
                    "line instance not hypercyclic at scale: {}",
                    positive.verdict
                )),
            ));
        }
        for case in 0..cases {
            let a = rng.gen_range(-12..=12);
            let len = rng.gen_range(1..=5);
            let set: Vec<_> = (a..a + len).map(|i| line.int(i)).collect::<Result<_>>()?;
            let (v, _) = run_away_check(&SymbolMap::Shift, &line, &set, 200)?;
            if v.is_refuted() {
                return Ok((
                    case,
                    Some(format!("case {case}: run-away refuted on {a}..{}", a + len)),
                ));
            }
            let inst = {
                let injective = rng.gen_bool(0.5);
                table_instance(&mut rng, 20, injective)
            }?;
            let report = hypercyclicity_verdict(
                &inst.symbol,
                &inst.weight,
                &inst.space,
                &Growth::Linear,
                &Horizons {
                    r_max: inst.radius,
                    n_max: 64,
                    search_radius: inst.radius,
                    k: 2,
                },
                &tol,
            )?;
            if !report.verdict.is_refuted() {
                return Ok((
                    case,
                    Some(format!(
                        "case {case}: table instance not refuted: {}",
                        report.verdict
                    )),
                ));
            }
        }
        Ok((cases, None))
    })
}

/// Norm homogeneity and the triangle inequality on random pairs.
pub fn norm_axioms(seed: u64, cases: usize) -> SuiteReport {
    suite("norm-axioms", || {
        let mut rng = rng(seed, 9);
        for case in 0..cases {
            let inst = table_instance(&mut rng, 30, false)?;
            let ball = inst.space.ball(inst.radius)?;
            let f: FiniteFn<Q> = random_function(&mut rng, &ball, 6);
            let g = random_function(&mut rng, &ball, 6);
            let c = num_complex::Complex::new(
                Q::new(rng.gen_range(-5..=5).into(), 3.into()),
                Q::new(rng.gen_range(-5..=5).into(), 4.into()),
            );
            let lhs = f.scale(&c).norm(&inst.weight)?.squared;
            if lhs != c.norm_sqr() * f.norm(&inst.weight)?.squared {
                return Ok((case, Some(format!("case {case}: homogeneity fails"))));
            }
            let sum = (&f + &g).norm(&inst.weight)?;
            let (_, a) = f.norm(&inst.weight)?.enclosure();
            let (_, b) = g.norm(&inst.weight)?.enclosure();
            let bound = a + b;
            if bound.is_negative() || sum.squared > bound.clone() * bound {
                return Ok((
                    case,
                    Some(format!("case {case}: triangle inequality fails")),
                ));
            }
        }
        Ok((cases, None))
    })
}

/// Every suite at its default size.
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    vec![
        norm_oracle(seed, 200),
        sub_multiplicative(seed, 200),
        truncation_tail(seed, 500),
        evaluation_bound(seed, 1000),
        adjoint_identity(seed, 1000),
        left_inverse(seed, 100),
        runaway_periodic(seed, 50),
        verdict_consistency(seed, 50),
        norm_axioms(seed, 300),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for report in [
            norm_oracle(7, 10),
            sub_multiplicative(7, 10),
            truncation_tail(7, 20),
            evaluation_bound(7, 50),
            adjoint_identity(7, 50),
            left_inverse(7, 5),
            runaway_periodic(7, 5),
            verdict_consistency(7, 3),
            norm_axioms(7, 20),
        ] {
            assert!(report.passed(), "{report}");
            assert!(report.cases > 0);
        }
    }
}
