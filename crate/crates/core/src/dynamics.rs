//! Hypercyclicity of `C_phi` on the little space: obstructions, the
//! sequence characterization for injective symbols, backward maps and
//! constructive approximants of hypercyclic vectors.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::functions::{FiniteFn, Growth, NormValue};
use crate::metric_space::{Space, Vertex};
use crate::operators::{apply, apply_power, check_bounded_little, BoundednessReport, LadderConfig};
use crate::scalar::{Dist, Scalar};
use crate::symbols::{
    find_periodic_points, image_set, injectivity_check, t_infinity, Completeness, SymbolMap,
};
use crate::verdict::{Verdict, Witness};
use crate::weights::Weight;

/// Truncation horizons shared by the dynamics checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Horizons {
    /// Radius of the balls that are scanned exhaustively.
    pub r_max: u64,
    /// Longest orbit segment / largest exponent considered.
    pub n_max: usize,
    /// Radius searched for preimages when fibers are not known exactly.
    pub search_radius: u64,
    /// Number of sequence terms to certify.
    pub k: usize,
}

impl Default for Horizons {
    fn default() -> Self {
        Self {
            r_max: 40,
            n_max: 2048,
            search_radius: 60,
            k: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionKind {
    /// A periodic point of `phi`.
    PeriodicPoint,
    /// `phi` is not injective.
    NonInjective,
    /// `mu(v) <= mu(phi(v))` everywhere, so `||C_phi|| <= 1`.
    Contraction,
    /// `phi` is onto and `mu(phi(v)) <= mu(v)`, so `C_phi` never shrinks a norm.
    SurjectiveExpanding,
}

impl fmt::Display for ObstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObstructionKind::PeriodicPoint => "periodic-point",
            ObstructionKind::NonInjective => "non-injective",
            ObstructionKind::Contraction => "norm-at-most-one",
            ObstructionKind::SurjectiveExpanding => "surjective-nonincreasing-weight",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionStatus {
    Fired,
    Clear,
    Inconclusive,
}

impl fmt::Display for ObstructionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObstructionStatus::Fired => "Fired",
            ObstructionStatus::Clear => "Clear",
            ObstructionStatus::Inconclusive => "Inconclusive",
        })
    }
}

/// One necessary condition for hypercyclicity. The verdict is about
/// hypercyclicity: `Refuted` means the obstruction fired.
#[derive(Debug, Clone)]
pub struct Obstruction<S> {
    pub kind: ObstructionKind,
    pub verdict: Verdict<S>,
}

impl<S> Obstruction<S> {
    pub fn status(&self) -> ObstructionStatus {
        match self.verdict {
            Verdict::Refuted(_) => ObstructionStatus::Fired,
            Verdict::HoldsAtScale(_) => ObstructionStatus::Clear,
            Verdict::Inconclusive(_) => ObstructionStatus::Inconclusive,
        }
    }
}

fn lift<S>(verdict: Verdict<Dist>) -> Verdict<S> {
    match verdict {
        Verdict::HoldsAtScale(c) => Verdict::HoldsAtScale(c),
        Verdict::Inconclusive(r) => Verdict::Inconclusive(r),
        Verdict::Refuted(w) => match w.without_scalar() {
            Some(w) => Verdict::Refuted(w),
            None => Verdict::inconclusive(format!("unexpected witness {w}")),
        },
    }
}

/// Largest `mu(v)/mu(phi(v))` over `ball(R)` and its first maximiser.
fn max_ratio<S: Scalar>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
    radius: u64,
) -> Result<(S, Vertex)> {
    let mut best: Option<(S, Vertex)> = None;
    for v in space.ball(radius)? {
        let r = weight.eval(&v)? / weight.eval(&symbol.apply(space, &v)?)?;
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, v));
        }
    }
    best.ok_or_else(|| Error::InvalidSpace("empty ball".into()))
}

/// Smallest `mu(v)/mu(phi(v))` over `ball(R)` and its first minimiser.
fn min_ratio<S: Scalar>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
    radius: u64,
) -> Result<(S, Vertex)> {
    let mut best: Option<(S, Vertex)> = None;
    for v in space.ball(radius)? {
        let r = weight.eval(&v)? / weight.eval(&symbol.apply(space, &v)?)?;
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, v));
        }
    }
    best.ok_or_else(|| Error::InvalidSpace("empty ball".into()))
}

/// Runs the four obstructions and reports every one, fired or not.
pub fn necessary_report<S: Scalar>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
    horizons: &Horizons,
) -> Result<Vec<Obstruction<S>>> {
    let r = horizons.r_max;
    let mut out = Vec::with_capacity(4);

    let (periodic, _) = find_periodic_points(symbol, space, r, horizons.n_max.max(1))?;
    out.push(Obstruction {
        kind: ObstructionKind::PeriodicPoint,
        verdict: lift(periodic),
    });

    out.push(Obstruction {
        kind: ObstructionKind::NonInjective,
        verdict: lift(injectivity_check(symbol, space, r)?),
    });

    let (largest, at) = max_ratio(symbol, weight, space, r)?;
    out.push(Obstruction {
        kind: ObstructionKind::Contraction,
        verdict: if largest <= S::one() {
            Verdict::Refuted(Witness::NormBound {
                bound: largest,
                vertex: at,
            })
        } else {
            Verdict::holds(r, None, format!("mu(v)/mu(phi(v)) = {largest} > 1 at {at}"))
        },
    });

    let (images, completeness) = image_set(symbol, space, 1, r, horizons.search_radius.max(r))?;
    let ball_size = space.ball(r)?.len();
    let surjective = images.len() == ball_size;
    let (smallest, at) = min_ratio(symbol, weight, space, r)?;
    out.push(Obstruction {
        kind: ObstructionKind::SurjectiveExpanding,
        verdict: if !surjective {
            let missing = {
                let hit: HashSet<&Vertex> = images.iter().collect();
                space.ball(r)?.into_iter().find(|v| !hit.contains(v))
            };
            let how = match completeness {
                Completeness::Exact => "has no preimage",
                Completeness::WithinHorizon => "has no preimage within the search radius",
            };
            Verdict::holds(
                r,
                None,
                format!(
                    "{} {how}",
                    missing.map(|v| v.to_string()).unwrap_or_default()
                ),
            )
        } else if smallest >= S::one() {
            Verdict::Refuted(Witness::NormBound {
                bound: smallest,
                vertex: at,
            })
        } else {
            Verdict::holds(
                r,
                None,
                format!("mu(v)/mu(phi(v)) = {smallest} < 1 at {at}"),
            )
        },
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HcEntry<S> {
    pub k: usize,
    pub n_k: usize,
    /// `max_{v in I_k} mu(phi^{n_k}(v))`.
    pub forward_max: S,
    /// `max_{v in I_k ∩ T^∞} mu(phi^{-n_k}(v))`, zero when that set is empty.
    pub backward_max: S,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct HcSequence<S> {
    pub entries: Vec<HcEntry<S>>,
    /// `T^∞ ∩ ball(K)` used for the backward condition.
    pub t_infinity: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HcSearch<S> {
    Found(HcSequence<S>),
    /// The search stopped at term `k`; `partial` holds the terms before it.
    Inconclusive {
        partial: HcSequence<S>,
        k: usize,
        reason: String,
    },
}

impl<S> HcSearch<S> {
    pub fn sequence(&self) -> &HcSequence<S> {
        match self {
            HcSearch::Found(s) => s,
            HcSearch::Inconclusive { partial, .. } => partial,
        }
    }
}

fn forward_max<S: Scalar>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
    set: &[Vertex],
    n: usize,
) -> Result<S> {
    let mut best = S::zero();
    for v in set {
        best = S::max_of(best, weight.eval(&symbol.iterate(space, n, v)?)?);
    }
    Ok(best)
}

fn backward_max<S: Scalar>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
    set: &[Vertex],
    n: usize,
) -> Result<S> {
    let mut best = S::zero();
    for v in set {
        best = S::max_of(best, weight.eval(&symbol.inverse_iterate(space, n, v)?)?);
    }
    Ok(best)
}

/// Greedy search for `n_1 < n_2 < ...` with `mu(phi^{n_k}) < 1/k` on
/// `ball(k)` and `mu(phi^{-n_k}) < 1/k` on `ball(k) ∩ T^∞`.
///
/// Fails with [`Error::TheoremInapplicable`] when `phi` is seen to be
/// non-injective. A `T^∞` known only within the horizon makes the search
/// inconclusive instead of silently dropping the backward condition.
pub fn find_hc_sequence<S: Scalar>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
    k_max: usize,
    n_max: usize,
    search_radius: u64,
) -> Result<HcSearch<S>> {
    let k_radius = k_max as u64;
    let search_radius = search_radius.max(k_radius);
    if let Verdict::Refuted(w) = injectivity_check(symbol, space, search_radius)? {
        return Err(Error::TheoremInapplicable(format!(
            "the sequence characterization needs an injective symbol: {w}"
        )));
    }
    let (t_inf, completeness) = t_infinity(symbol, space, k_radius, k_max + 2, search_radius)?;
    let mut sequence = HcSequence {
        entries: Vec::new(),
        t_infinity: t_inf.clone(),
    };
    if completeness != Completeness::Exact && !t_inf.is_empty() {
        return Ok(HcSearch::Inconclusive {
            partial: sequence,
            k: 1,
            reason: format!(
                "T^∞ ∩ ball({k_radius}) is only known within the search radius ({} vertices)",
                t_inf.len()
            ),
        });
    }
    let mut previous = 0usize;
    for k in 1..=k_max {
        let ball = space.ball(k as u64)?;
        let k_level = Dist::from_integer(k as i64);
        let backward_set: Vec<Vertex> = t_inf
            .iter()
            .filter(|v| v.level() <= k_level)
            .cloned()
            .collect();
        let bound = S::from_ratio(1, k as i64);
        let mut chosen = None;
        let mut last = None;
        for n in (previous + 1)..=n_max {
            let fwd = forward_max(symbol, weight, space, &ball, n)?;
            if fwd >= bound {
                last = Some((n, fwd, None));
                continue;
            }
            let bwd = backward_max(symbol, weight, space, &backward_set, n)?;
            if bwd < bound {
                chosen = Some((n, fwd, bwd));
                break;
            }
            last = Some((n, fwd, Some(bwd)));
        }
        match chosen {
            Some((n_k, forward_max, backward_max)) => {
                sequence.entries.push(HcEntry {
                    k,
                    n_k,
                    forward_max,
                    backward_max,
                });
                previous = n_k;
            }
            None => {
                let reason = match last {
                    Some((n, fwd, None)) => format!("at n = {n}, forward max {fwd} >= 1/{k}"),
                    Some((n, _, Some(bwd))) => format!("at n = {n}, backward max {bwd} >= 1/{k}"),
                    None => format!("exponent horizon {n_max} exhausted before term {k}"),
                };
                return Ok(HcSearch::Inconclusive {
                    partial: sequence,
                    k,
                    reason: format!("no n in ({previous}, {n_max}] works for k = {k}; {reason}"),
                });
            }
        }
    }
    Ok(HcSearch::Found(sequence))
}

/// Recomputes every stored maximum by brute force over `I_k`.
pub fn audit_hc_sequence<S: Scalar>(
    sequence: &HcSequence<S>,
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
) -> Result<bool> {
    let mut previous = 0;
    for e in &sequence.entries {
        let ball = space.ball(e.k as u64)?;
        let in_ball: HashSet<&Vertex> = ball.iter().collect();
        let backward_set: Vec<Vertex> = sequence
            .t_infinity
            .iter()
            .filter(|v| in_ball.contains(v))
            .cloned()
            .collect();
        let bound = S::from_ratio(1, e.k as i64);
        let ok = e.n_k > previous
            && forward_max(symbol, weight, space, &ball, e.n_k)? == e.forward_max
            && backward_max(symbol, weight, space, &backward_set, e.n_k)? == e.backward_max
            && e.forward_max < bound
            && e.backward_max < bound;
        if !ok {
            return Ok(false);
        }
        previous = e.n_k;
    }
    Ok(true)
}

/// `S_n f`, the function with `(S_n f)(phi^n(w)) = f(w)`, so that
/// `C_phi^n S_n f = f` for injective `phi`.
pub fn backward_map<S: Scalar>(
    symbol: &SymbolMap,
    space: &Space,
    n: usize,
    f: &FiniteFn<S>,
) -> Result<FiniteFn<S>> {
    let mut placed: HashMap<Vertex, Vertex> = HashMap::new();
    let mut entries = Vec::with_capacity(f.len());
    for (w, x) in f.iter() {
        let target = symbol.iterate(space, n, w).map_err(|e| match e {
            e if e.is_horizon() => Error::UnresolvablePreimage {
                vertex: w.clone(),
                depth: n,
            },
            e => e,
        })?;
        if let Some(other) = placed.insert(target.clone(), w.clone()) {
            return Err(Error::TheoremInapplicable(format!(
                "phi^{n} sends both {other} and {w} to {target}"
            )));
        }
        entries.push((target, x.clone()));
    }
    Ok(FiniteFn::from_entries(entries))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Visit<S> {
    pub target: usize,
    pub exponent: usize,
    /// `||C_phi^{n_j} f - g_j||`, computed exactly.
    pub error: NormValue<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitVisitReport<S> {
    pub vector: FiniteFn<S>,
    pub visits: Vec<Visit<S>>,
    pub epsilon: S,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Approximant<S> {
    Found(OrbitVisitReport<S>),
    Inconclusive {
        exponents: Vec<usize>,
        reason: String,
    },
}

/// `f = sum_j S_{n_j} g_j` with `||C_phi^{n_j} f - g_j|| < eps` for every target.
///
/// `n_1 = 1`; each later exponent doubles its gap to the previous one until
/// every new cross term `||C_phi^{n_j - n_i} g_i||`, `||S_{n_j - n_i} g_j||`
/// is below `eps / (m - 1)`.
pub fn construct_hc_approximant<S: Scalar>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
    targets: &[FiniteFn<S>],
    epsilon: &S,
    n_max: usize,
    search_radius: u64,
) -> Result<Approximant<S>> {
    if *epsilon <= S::zero() {
        return Err(Error::Config("epsilon must be positive".into()));
    }
    if targets.is_empty() {
        return Err(Error::Config("at least one target is required".into()));
    }
    if let Verdict::Refuted(w) = injectivity_check(symbol, space, search_radius)? {
        return Err(Error::TheoremInapplicable(format!(
            "approximants need an injective symbol: {w}"
        )));
    }
    let m = targets.len();
    let share = if m > 1 {
        epsilon.clone() / S::from_int(m as i64 - 1)
    } else {
        epsilon.clone()
    };
    let mut exponents = vec![1usize];
    for j in 1..m {
        let last = exponents[j - 1];
        let mut gap = 1usize;
        loop {
            let n_j = last + gap;
            if n_j > n_max {
                return Ok(Approximant::Inconclusive {
                    reason: format!(
                        "target {j}: cross terms still at or above {share} when the exponent reaches the horizon {n_max}"
                    ),
                    exponents,
                });
            }
            let mut clear = true;
            for (i, &n_i) in exponents.iter().enumerate() {
                let d = n_j - n_i;
                let forward = apply_power(symbol, space, d, &targets[i], search_radius)?
                    .0
                    .norm(weight)?;
                let backward = backward_map(symbol, space, d, &targets[j])?.norm(weight)?;
                if !forward.less_than(&share) || !backward.less_than(&share) {
                    clear = false;
                    break;
                }
            }
            if clear {
                exponents.push(n_j);
                break;
            }
            gap *= 2;
        }
    }
    let mut vector = FiniteFn::zero();
    for (g, &n) in targets.iter().zip(&exponents) {
        vector = &vector + &backward_map(symbol, space, n, g)?;
    }
    let mut visits = Vec::with_capacity(m);
    for (j, (g, &n)) in targets.iter().zip(&exponents).enumerate() {
        let image = apply_power(symbol, space, n, &vector, search_radius)?.0;
        let error = (&image - g).norm(weight)?;
        if !error.less_than(epsilon) {
            return Ok(Approximant::Inconclusive {
                reason: format!("recomputed error {error} for target {j} is not below {epsilon}"),
                exponents,
            });
        }
        visits.push(Visit {
            target: j,
            exponent: n,
            error,
        });
    }
    Ok(Approximant::Found(OrbitVisitReport {
        vector,
        visits,
        epsilon: epsilon.clone(),
    }))
}

/// `||C_phi^n f - g_j||` for `n = 0..=n_max` and every target.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitTable<S> {
    pub rows: Vec<Vec<NormValue<S>>>,
    pub completeness: Completeness,
}

pub fn orbit_report<S: Scalar>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
    f: &FiniteFn<S>,
    n_max: usize,
    targets: &[FiniteFn<S>],
    search_radius: u64,
) -> Result<OrbitTable<S>> {
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut current = f.clone();
    let mut completeness = Completeness::Exact;
    for n in 0..=n_max {
        let mut row = Vec::with_capacity(targets.len());
        for g in targets {
            row.push((&current - g).norm(weight)?);
        }
        rows.push(row);
        if n == n_max {
            break;
        }
        current = if completeness == Completeness::Exact {
            let (next, c) = apply(symbol, space, &current, search_radius)?;
            completeness = c;
            next
        } else {
            apply_power(symbol, space, n + 1, f, search_radius)?.0
        };
    }
    Ok(OrbitTable { rows, completeness })
}

/// Everything behind a hypercyclicity verdict.
#[derive(Debug, Clone)]
pub struct HcReport<S> {
    pub verdict: Verdict<S>,
    /// The obstruction the verdict is taken from, when one fired.
    pub decisive: Option<ObstructionKind>,
    pub boundedness: BoundednessReport<S>,
    pub obstructions: Vec<Obstruction<S>>,
    pub sequence: Option<HcSearch<S>>,
    pub notes: Vec<String>,
}

/// Order in which fired obstructions are reported as the reason for a refutation.
pub const DECISIVE_ORDER: [ObstructionKind; 4] = [
    ObstructionKind::NonInjective,
    ObstructionKind::PeriodicPoint,
    ObstructionKind::Contraction,
    ObstructionKind::SurjectiveExpanding,
];

/// Informational: the big space is not separable, so nothing on it is hypercyclic.
pub const BIG_SPACE_NOTE: &str =
    "on the big space L_mu(T) no operator is hypercyclic (the space is not separable); verdicts refer to the little space";

/// Refuted when any obstruction fires, holds when `phi` is injective at scale
/// and the sequence search certifies `K` terms, inconclusive otherwise.
pub fn hypercyclicity_verdict<S: Scalar>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
    growth: &Growth<S>,
    horizons: &Horizons,
    tol: &S,
) -> Result<HcReport<S>> {
    let boundedness = check_bounded_little(
        symbol,
        weight,
        space,
        growth,
        &LadderConfig {
            r_max: horizons.r_max,
            tol: tol.clone(),
        },
    )?;
    let mut notes = vec![BIG_SPACE_NOTE.to_string()];
    if !boundedness.little_space.is_holds() {
        notes.push(format!(
            "boundedness on the little space not established ({}); obstructions reported anyway",
            boundedness.little_space
        ));
    }
    let obstructions = necessary_report(symbol, weight, space, horizons)?;
    let decisive = DECISIVE_ORDER.iter().find_map(|kind| {
        obstructions
            .iter()
            .find(|o| o.kind == *kind && o.status() == ObstructionStatus::Fired)
    });
    if let Some(fired) = decisive {
        return Ok(HcReport {
            verdict: fired.verdict.clone(),
            decisive: Some(fired.kind),
            boundedness,
            obstructions,
            sequence: None,
            notes,
        });
    }
    let injective = obstructions
        .iter()
        .any(|o| o.kind == ObstructionKind::NonInjective && o.status() == ObstructionStatus::Clear);
    let search = find_hc_sequence(
        symbol,
        weight,
        space,
        horizons.k,
        horizons.n_max,
        horizons.search_radius,
    )?;
    let verdict = match (&search, injective, boundedness.little_space.is_holds()) {
        (HcSearch::Found(seq), true, true) => Verdict::holds(
            horizons.k as u64,
            None,
            format!(
                "obstructions clear and {} sequence terms certified on ball({})",
                seq.entries.len(),
                horizons.k
            ),
        ),
        (HcSearch::Found(_), _, false) => {
            Verdict::inconclusive("sequence found but boundedness not established")
        }
        (HcSearch::Found(_), false, _) => Verdict::inconclusive("injectivity not established"),
        (HcSearch::Inconclusive { k, reason, .. }, _, _) => {
            Verdict::inconclusive(format!("sequence search stopped at k = {k}: {reason}"))
        }
    };
    Ok(HcReport {
        verdict,
        decisive: None,
        boundedness,
        obstructions,
        sequence: Some(search),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::indicator;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(p: i64, d: i64) -> Q {
        Q::new(p.into(), d.into())
    }

    fn small() -> Horizons {
        Horizons {
            r_max: 12,
            n_max: 100,
            search_radius: 16,
            k: 10,
        }
    }

    fn fired(report: &[Obstruction<Q>]) -> Vec<ObstructionKind> {
        report
            .iter()
            .filter(|o| o.status() == ObstructionStatus::Fired)
            .map(|o| o.kind)
            .collect()
    }

    #[test]
    fn identity_has_periodic_origin() {
        let g = Space::Grid;
        let r = necessary_report(
            &SymbolMap::Identity,
            &Weight::<Q>::GeometricGrid,
            &g,
            &small(),
        )
        .unwrap();
        assert_eq!(r[0].kind, ObstructionKind::PeriodicPoint);
        match &r[0].verdict {
            Verdict::Refuted(Witness::PeriodicPoint { vertex, period }) => {
                assert_eq!(*vertex, g.origin());
                assert_eq!(*period, 1);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn projection_collides_at_origin_column() {
        let g = Space::Grid;
        let r = necessary_report(
            &SymbolMap::GridProjection,
            &Weight::<Q>::GeometricGrid,
            &g,
            &small(),
        )
        .unwrap();
        match &r[1].verdict {
            Verdict::Refuted(Witness::Collision { first, second, .. }) => {
                assert_eq!(*first, g.pair(0, 0).unwrap());
                assert_eq!(*second, g.pair(0, 1).unwrap());
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn increasing_weight_gives_norm_at_most_one() {
        let mu = Weight::geometric_ray(q(2, 1)).unwrap();
        let r = necessary_report(&SymbolMap::Shift, &mu, &Space::Ray, &small()).unwrap();
        assert_eq!(fired(&r), vec![ObstructionKind::Contraction]);
        match &r[2].verdict {
            Verdict::Refuted(Witness::NormBound { bound, .. }) => assert_eq!(*bound, q(1, 2)),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn line_reciprocal_is_clear() {
        let r = necessary_report(
            &SymbolMap::Shift,
            &Weight::<Q>::ReciprocalLevel,
            &Space::Line,
            &small(),
        )
        .unwrap();
        assert!(
            r.iter().all(|o| o.status() == ObstructionStatus::Clear),
            "{r:?}"
        );
    }

    #[test]
    fn line_sequence_is_two_k() {
        let mu = Weight::<Q>::ReciprocalLevel;
        let l = Space::Line;
        let HcSearch::Found(seq) =
            find_hc_sequence(&SymbolMap::Shift, &mu, &l, 10, 100, 12).unwrap()
        else {
            panic!("search failed");
        };
        let n: Vec<usize> = seq.entries.iter().map(|e| e.n_k).collect();
        assert_eq!(n, (1..=10).map(|k| 2 * k).collect::<Vec<_>>());
        assert!(audit_hc_sequence(&seq, &SymbolMap::Shift, &mu, &l).unwrap());
        assert_eq!(seq.t_infinity.len(), 21);
    }

    #[test]
    fn ray_geometric_sequence() {
        let mu = Weight::geometric_ray(q(1, 2)).unwrap();
        let r = Space::Ray;
        let HcSearch::Found(seq) =
            find_hc_sequence(&SymbolMap::Shift, &mu, &r, 10, 100, 12).unwrap()
        else {
            panic!("search failed");
        };
        assert!(seq.t_infinity.is_empty());
        for e in &seq.entries {
            assert_eq!(e.forward_max, q(1, 2).pow_i(e.n_k as i64));
            assert!(e.forward_max < q(1, e.k as i64));
            assert_eq!(e.backward_max, q(0, 1));
        }
        assert!(audit_hc_sequence(&seq, &SymbolMap::Shift, &mu, &r).unwrap());
    }

    #[test]
    fn unweighted_ray_fails_at_first_term() {
        let out = find_hc_sequence(
            &SymbolMap::Shift,
            &Weight::<Q>::ConstantOne,
            &Space::Ray,
            10,
            50,
            12,
        )
        .unwrap();
        assert!(matches!(out, HcSearch::Inconclusive { k: 1, .. }));
    }

    #[test]
    fn non_injective_is_inapplicable() {
        let err = find_hc_sequence(
            &SymbolMap::GridProjection,
            &Weight::<Q>::GeometricGrid,
            &Space::Grid,
            3,
            10,
            4,
        );
        assert!(matches!(err, Err(Error::TheoremInapplicable(_))));
    }

    #[test]
    fn backward_map_examples() {
        let l = Space::Line;
        let chi0 = indicator::<Q>([l.int(0).unwrap()]);
        assert_eq!(
            backward_map(&SymbolMap::Shift, &l, 4, &chi0).unwrap(),
            indicator([l.int(4).unwrap()])
        );
        assert_eq!(backward_map(&SymbolMap::Shift, &l, 0, &chi0).unwrap(), chi0);
        let r = Space::Ray;
        let chi0 = indicator::<Q>([r.int(0).unwrap()]);
        let s2 = backward_map(&SymbolMap::Shift, &r, 2, &chi0).unwrap();
        assert_eq!(s2, indicator([r.int(2).unwrap()]));
        assert_eq!(
            apply_power(&SymbolMap::Shift, &r, 2, &s2, 4).unwrap().0,
            chi0
        );
    }

    #[test]
    fn approximant_two_targets() {
        let l = Space::Line;
        let mu = Weight::<Q>::ReciprocalLevel;
        let chi0 = indicator::<Q>([l.int(0).unwrap()]);
        let targets = vec![
            chi0.clone(),
            chi0.scale(&num_complex::Complex::new(q(2, 1), q(0, 1))),
        ];
        let Approximant::Found(rep) =
            construct_hc_approximant(&SymbolMap::Shift, &mu, &l, &targets, &q(1, 100), 4096, 8)
                .unwrap()
        else {
            panic!("no approximant");
        };
        assert_eq!(rep.visits.len(), 2);
        assert!(rep.visits.iter().all(|v| v.error.less_than(&q(1, 100))));
    }

    #[test]
    fn single_target_has_zero_error() {
        let l = Space::Line;
        let chi0 = indicator::<Q>([l.int(3).unwrap()]);
        let Approximant::Found(rep) = construct_hc_approximant(
            &SymbolMap::Shift,
            &Weight::ReciprocalLevel,
            &l,
            &[chi0],
            &q(1, 100),
            10,
            8,
        )
        .unwrap() else {
            panic!();
        };
        assert_eq!(rep.visits[0].error.squared, q(0, 1));
    }

    #[test]
    fn unweighted_ray_has_no_approximant() {
        let r = Space::Ray;
        let chi0 = indicator::<Q>([r.int(0).unwrap()]);
        let out = construct_hc_approximant(
            &SymbolMap::Shift,
            &Weight::ConstantOne,
            &r,
            &[chi0.clone(), chi0],
            &q(1, 100),
            200,
            8,
        )
        .unwrap();
        assert!(matches!(out, Approximant::Inconclusive { .. }));
    }

    #[test]
    fn orbit_report_trivial_rows() {
        let l = Space::Line;
        let mu = Weight::<Q>::ReciprocalLevel;
        let g = indicator::<Q>([l.int(1).unwrap()]);
        let t = orbit_report(
            &SymbolMap::Shift,
            &mu,
            &l,
            &FiniteFn::zero(),
            5,
            std::slice::from_ref(&g),
            8,
        )
        .unwrap();
        assert!(t.rows.iter().all(|row| row[0] == g.norm(&mu).unwrap()));
        let f = indicator::<Q>([l.int(2).unwrap()]);
        let t = orbit_report(&SymbolMap::Identity, &mu, &l, &f, 5, &[g], 8).unwrap();
        assert!(t.rows.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn verdicts_for_reference_instances() {
        let h = Horizons {
            r_max: 30,
            n_max: 200,
            search_radius: 32,
            k: 10,
        };
        let v = hypercyclicity_verdict(
            &SymbolMap::Shift,
            &Weight::<Q>::ReciprocalLevel,
            &Space::Line,
            &Growth::Linear,
            &h,
            &q(1, 20),
        )
        .unwrap();
        assert!(v.verdict.is_holds(), "{}", v.verdict);
        let v = hypercyclicity_verdict(
            &SymbolMap::Shift,
            &Weight::<Q>::ConstantOne,
            &Space::Ray,
            &Growth::Linear,
            &h,
            &q(1, 20),
        )
        .unwrap();
        assert!(matches!(
            v.verdict,
            Verdict::Refuted(Witness::NormBound { .. })
        ));
    }
}
