//! The composition operator `C_phi f = f ∘ phi`: application, the norm
//! profile on the big space and the boundedness ladder on the little space.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::functions::{
    indicator, little_space_tail, test_function, Composed, Evaluable, FiniteFn, Growth, NormValue,
    ReciprocalGrowth,
};
use crate::metric_space::{Space, Vertex};
use crate::scalar::{Dist, Scalar};
use crate::symbols::{Completeness, SymbolMap};
use crate::verdict::{Verdict, Witness};
use crate::weights::{weight_tail, TailProfile, Weight};

/// Number of consecutive radii over which an unchanged `r_R` counts as stable.
pub const STABILIZATION_WINDOW: u64 = 10;

/// `C_phi f`. Exact when every fiber over `supp f` is known, otherwise the
/// restriction of `f ∘ phi` to `ball(R)`.
pub fn apply<S: Scalar>(
    symbol: &SymbolMap,
    space: &Space,
    f: &FiniteFn<S>,
    radius: u64,
) -> Result<(FiniteFn<S>, Completeness)> {
    if let Some(image) = pull_back_exact(symbol, space, f)? {
        return Ok((image, Completeness::Exact));
    }
    let mut entries = Vec::new();
    for v in space.ball(radius)? {
        let x = f.get(&symbol.apply(space, &v)?);
        entries.push((v, x));
    }
    Ok((FiniteFn::from_entries(entries), Completeness::WithinHorizon))
}

fn pull_back_exact<S: Scalar>(
    symbol: &SymbolMap,
    space: &Space,
    f: &FiniteFn<S>,
) -> Result<Option<FiniteFn<S>>> {
    let mut entries = Vec::new();
    for (w, x) in f.iter() {
        match symbol.exact_fiber(space, w)? {
            Some(fiber) => entries.extend(fiber.into_iter().map(|u| (u, x.clone()))),
            None => return Ok(None),
        }
    }
    Ok(Some(FiniteFn::from_entries(entries)))
}

/// `C_phi^n f`.
pub fn apply_power<S: Scalar>(
    symbol: &SymbolMap,
    space: &Space,
    n: usize,
    f: &FiniteFn<S>,
    radius: u64,
) -> Result<(FiniteFn<S>, Completeness)> {
    let mut current = f.clone();
    for _ in 0..n {
        match pull_back_exact(symbol, space, &current)? {
            Some(next) => current = next,
            None => {
                let mut entries = Vec::new();
                for v in space.ball(radius)? {
                    let x = f.get(&symbol.iterate(space, n, &v)?);
                    entries.push((v, x));
                }
                return Ok((FiniteFn::from_entries(entries), Completeness::WithinHorizon));
            }
        }
    }
    Ok((current, Completeness::Exact))
}

/// Running maxima `r_R = max_{v in ball(R)} mu(v)/mu(phi(v))`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormProfile<S> {
    pub radii: Vec<u64>,
    pub ratio: Vec<S>,
    pub witness: Vec<Vertex>,
}

impl<S: Scalar> NormProfile<S> {
    pub fn last(&self) -> Option<(&S, &Vertex)> {
        self.ratio.last().zip(self.witness.last())
    }
}

/// Closed-form value of `sup mu(v)/mu(phi(v))` for the built-in pairings.
pub fn closed_form_norm<S: Scalar>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
) -> Option<S> {
    let one = S::one();
    match (symbol, weight, space) {
        (SymbolMap::Identity, _, _) => Some(one),
        (_, Weight::ConstantOne, _) => Some(one),
        (SymbolMap::GridProjection, Weight::GeometricGrid, Space::Grid) => Some(one),
        (SymbolMap::Shift, Weight::GeometricRay { ratio }, Space::Ray) => Some(one / ratio.clone()),
        (SymbolMap::Shift, Weight::GeometricRay { ratio }, Space::Line) => {
            Some(S::max_of(ratio.clone(), one / ratio.clone()))
        }
        (SymbolMap::Shift, Weight::ReciprocalLevel, Space::Ray | Space::Line) => {
            Some(S::from_int(2))
        }
        (SymbolMap::TreeTranslation, Weight::ReciprocalLevel, Space::Tree { .. }) => {
            Some(S::from_int(3))
        }
        _ => None,
    }
}

/// Exact norm profile on the big space.
///
/// Holds when `r_{R_max}` matches a closed-form certificate, or when `r_R`
/// has not moved during the last [`STABILIZATION_WINDOW`] radii. Never
/// refuted: a finite prefix cannot show the supremum is infinite.
pub fn norm_profile<S: Scalar>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
    r_max: u64,
) -> Result<(NormProfile<S>, Verdict<S>)> {
    let annuli = TailProfile::build(space, r_max, false, |v| {
        let image = symbol.apply(space, v)?;
        Ok(Some(weight.eval(v)? / weight.eval(&image)?))
    })?;
    let mut ratio: Vec<S> = Vec::with_capacity(annuli.radii.len());
    let mut witness: Vec<Vertex> = Vec::with_capacity(annuli.radii.len());
    for (sup, w) in annuli.annulus_sup.into_iter().zip(annuli.witnesses) {
        match (ratio.last().cloned(), w) {
            (Some(best), Some(w)) if sup > best => {
                ratio.push(sup);
                witness.push(w);
            }
            (Some(best), _) => {
                ratio.push(best);
                witness.push(witness.last().cloned().expect("witness for every radius"));
            }
            (None, Some(w)) => {
                ratio.push(sup);
                witness.push(w);
            }
            (None, None) => {
                return Err(Error::InvalidSpace(
                    "the distinguished point is missing".into(),
                ))
            }
        }
    }
    let profile = NormProfile {
        radii: annuli.radii,
        ratio,
        witness,
    };
    let (last, _) = profile.last().expect("profile covers radius 0");
    let last = last.clone();
    if let Some(closed) = closed_form_norm(symbol, weight, space) {
        if closed == last {
            return Ok((
                profile,
                Verdict::holds(
                    r_max,
                    Some(0),
                    format!("admissible, ||C_phi|| = {last} (closed form)"),
                ),
            ));
        }
    }
    let w = STABILIZATION_WINDOW;
    if r_max >= w {
        let start = (r_max - w) as usize;
        if profile.ratio[start] == last {
            let onset = profile
                .ratio
                .iter()
                .position(|r| *r == last)
                .map(|i| i as u64);
            return Ok((
                profile,
                Verdict::holds(
                    r_max,
                    onset,
                    format!("admissible at scale, ||C_phi|| >= {last}, stable over {w} radii"),
                ),
            ));
        }
        let first = profile.ratio[start].clone();
        Ok((
            profile,
            Verdict::inconclusive(format!(
                "r_R still growing: {first} at radius {} -> {last} at radius {r_max}",
                r_max - w
            )),
        ))
    } else {
        Ok((
            profile,
            Verdict::inconclusive(format!(
                "R_max = {r_max} is shorter than the stabilization window {w}; r_R = {last}"
            )),
        ))
    }
}

/// `||C_phi g_w||`, a certified lower bound for `||C_phi||`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound<S> {
    pub vertex: Vertex,
    /// `None` when the search horizon could not resolve the image.
    pub value: Option<NormValue<S>>,
    /// `mu(w)/mu(phi(w))`, which the value always dominates.
    pub ratio: S,
    pub completeness: Completeness,
}

pub fn admissibility_lower_bounds<S: Scalar>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
    radius: u64,
    search_radius: u64,
) -> Result<Vec<LowerBound<S>>> {
    let search_radius = search_radius.max(radius);
    let mut out = Vec::new();
    for w in space.ball(radius)? {
        let g = test_function(&w, symbol, weight, space)?;
        let ratio = weight.eval(&w)? / weight.eval(&symbol.apply(space, &w)?)?;
        match apply(symbol, space, &g, search_radius) {
            Ok((image, completeness)) => out.push(LowerBound {
                vertex: w,
                value: Some(image.norm(weight)?),
                ratio,
                completeness,
            }),
            Err(e) if e.is_horizon() => out.push(LowerBound {
                vertex: w,
                value: None,
                ratio,
                completeness: Completeness::WithinHorizon,
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Annulus maxima of `min{1/g(|phi(v)|), mu(v)}` with the limit-zero verdict.
pub fn g_condition_profile<S: Scalar>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    growth: &Growth<S>,
    space: &Space,
    r_max: u64,
    tol: &S,
) -> Result<(TailProfile<S>, Verdict<S>)> {
    let profile = TailProfile::build(space, r_max, false, |v| {
        let image = symbol.apply(space, v)?;
        let inv_g = S::one() / growth.eval(image.shell())?;
        Ok(Some(S::min_of(inv_g, weight.eval(v)?)))
    })?;
    let verdict = profile.limit_zero_verdict(tol);
    Ok((profile, verdict))
}

/// `(C_phi f)(v) = f(phi(v))`, i.e. `C_phi^* e_v = e_{phi(v)}`, checked on the
/// actual image function.
pub fn adjoint_identity_check<S: Scalar>(
    symbol: &SymbolMap,
    space: &Space,
    f: &FiniteFn<S>,
    v: &Vertex,
    radius: u64,
) -> Result<bool> {
    let (image, completeness) = apply(symbol, space, f, radius)?;
    if completeness == Completeness::WithinHorizon && v.level() > Dist::from_integer(radius as i64)
    {
        return Err(Error::horizon(format!("{v} lies outside ball({radius})")));
    }
    Ok(image.get(v) == f.get(&symbol.apply(space, v)?))
}

/// Which step of the boundedness ladder produced the little-space verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Admissibility could not be established, so nothing below applies.
    Admissibility,
    FiniteRange,
    MuToZero,
    FiniteFibers,
    FiniteExceptionalSet,
    GCondition,
    ConverseCounterexample,
    Undetermined,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Admissibility => "Admissibility",
            Rule::FiniteRange => "FiniteRange",
            Rule::MuToZero => "MuToZero",
            Rule::FiniteFibers => "FiniteFibers",
            Rule::FiniteExceptionalSet => "FiniteExceptionalSet",
            Rule::GCondition => "GCondition",
            Rule::ConverseCounterexample => "ConverseCounterexample",
            Rule::Undetermined => "Undetermined",
        })
    }
}

/// The function used to show `C_phi` leaves the little space.
#[derive(Debug, Clone)]
pub enum WitnessFn<S> {
    /// `chi_S` for the finite range `S`.
    Indicator(FiniteFn<S>),
    /// `v -> 1/g(|v|)`.
    ReciprocalGrowth(Growth<S>),
}

/// Verified evidence that `C_phi` does not map the little space into itself.
#[derive(Debug, Clone)]
pub struct Unboundedness<S> {
    pub function: WitnessFn<S>,
    /// Squared profile of `mu |f|`; verified to hold.
    pub source_tail: TailProfile<S>,
    /// Squared profile of `mu |C_phi f|`; verified to be refuted.
    pub image_tail: TailProfile<S>,
    /// First radius of the window on which the image tail stays above `tol`.
    pub persists_from: u64,
    /// `(v_n, mu(v_n) |f(phi(v_n))|)` along the refuting sequence.
    pub sequence: Vec<(Vertex, S)>,
    /// Lower bound the sequence values clear (`delta^2` for the converse rule).
    pub floor: S,
}

#[derive(Debug, Clone)]
pub struct BoundednessReport<S> {
    pub big_space: Verdict<S>,
    pub norm_profile: NormProfile<S>,
    /// Holds = bounded on the little space, Refuted = not bounded.
    pub little_space: Verdict<S>,
    pub rule: Rule,
    pub weight_tail: Option<TailProfile<S>>,
    pub g_profile: Option<TailProfile<S>>,
    pub exceptional_set: Option<Vec<Vertex>>,
    pub unboundedness: Option<Unboundedness<S>>,
    pub notes: Vec<String>,
}

/// Horizons for [`check_bounded_little`].
#[derive(Debug, Clone)]
pub struct LadderConfig<S> {
    pub r_max: u64,
    pub tol: S,
}

/// Vertices of `ball(R/2)` hit from the outer shell `R/2 < |v| <= R`.
fn far_hit_targets(symbol: &SymbolMap, space: &Space, r: u64) -> Result<BTreeSet<Vertex>> {
    let half = r / 2;
    let half_d = Dist::from_integer(half as i64);
    let mut hit = BTreeSet::new();
    for shell in (half + 1)..=r {
        for v in space.annulus(shell)? {
            let image = symbol.apply(space, &v)?;
            if image.level() <= half_d {
                hit.insert(image);
            }
        }
    }
    Ok(hit)
}

/// Decides boundedness of `C_phi` on the little space at truncation scale.
///
/// Rules are tried in order and the first that applies decides:
/// admissibility (necessary), declared finite range, `mu -> 0`, finite
/// fibers, a finite exceptional set with `mu -> 0` on its preimage, the
/// `g`-condition, and finally its converse under `mu = o(g)`.
pub fn check_bounded_little<S: Scalar>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
    growth: &Growth<S>,
    config: &LadderConfig<S>,
) -> Result<BoundednessReport<S>> {
    let r_max = config.r_max.max(1);
    let tol = &config.tol;
    let (norm_profile, big_space) = norm_profile(symbol, weight, space, r_max)?;
    let mut report = BoundednessReport {
        big_space,
        norm_profile,
        little_space: Verdict::inconclusive("not evaluated"),
        rule: Rule::Undetermined,
        weight_tail: None,
        g_profile: None,
        exceptional_set: None,
        unboundedness: None,
        notes: Vec::new(),
    };

    // (a) admissibility is necessary
    if !report.big_space.is_holds() {
        report.rule = Rule::Admissibility;
        report.little_space = Verdict::inconclusive(format!(
            "admissibility not established at scale: {}",
            report.big_space
        ));
        return Ok(report);
    }

    let (mu_tail, mu_profile) = weight_tail(weight, space, r_max, tol)?;
    report.weight_tail = Some(mu_profile.clone());

    // (b) declared finite range: bounded iff mu -> 0
    if symbol.declared_finite_range() == Some(true) {
        report.rule = Rule::FiniteRange;
        report.little_space = match &mu_tail {
            Verdict::HoldsAtScale(c) => Verdict::holds(r_max, c.onset, "finite range and mu -> 0"),
            Verdict::Refuted(Witness::PersistentBound { bound, .. }) => {
                let range: BTreeSet<Vertex> = space
                    .ball(r_max)?
                    .iter()
                    .map(|v| symbol.apply(space, v))
                    .collect::<Result<_>>()?;
                let chi = indicator::<S>(range);
                match verify_unboundedness(
                    symbol,
                    weight,
                    space,
                    &chi,
                    WitnessFn::Indicator(chi.clone()),
                    r_max,
                    tol,
                    bound.clone(),
                )? {
                    Some(evidence) => {
                        let v = refutation_of(&evidence);
                        report.unboundedness = Some(evidence);
                        v
                    }
                    None => Verdict::inconclusive("chi_S witness failed verification"),
                }
            }
            Verdict::Refuted(_) => unreachable!("weight tails only refute with a persistent bound"),
            Verdict::Inconclusive(reason) => Verdict::inconclusive(reason.clone()),
        };
        return Ok(report);
    }

    // (c) mu -> 0
    if let Verdict::HoldsAtScale(c) = &mu_tail {
        report.rule = Rule::MuToZero;
        report.little_space = Verdict::holds(r_max, c.onset, "admissible and mu -> 0");
        return Ok(report);
    }

    // (d) finite fibers: known exactly, or seen as |phi(v)| -> inf on the outer shell
    let mut exact_fibers = true;
    for w in space.ball(r_max)? {
        if symbol.exact_fiber(space, &w)?.is_none() {
            exact_fibers = false;
            break;
        }
    }
    if exact_fibers {
        report.rule = Rule::FiniteFibers;
        report.little_space = Verdict::holds(
            r_max,
            None,
            format!("every fiber over ball({r_max}) is finite and known"),
        );
        return Ok(report);
    }
    let far = far_hit_targets(symbol, space, r_max)?;
    if far.is_empty() {
        report.rule = Rule::FiniteFibers;
        report.little_space = Verdict::holds(
            r_max,
            None,
            format!(
                "no vertex of ball({}) is hit from the shell beyond it",
                r_max / 2
            ),
        );
        return Ok(report);
    }

    // (e) finite exceptional set with mu -> 0 on its preimage
    let far_half = far_hit_targets(symbol, space, r_max / 2)?;
    report.exceptional_set = Some(far.iter().cloned().collect());
    if r_max >= 4 && far == far_half {
        let restricted = TailProfile::build(space, r_max, false, |v| {
            if far.contains(&symbol.apply(space, v)?) {
                weight.eval(v).map(Some)
            } else {
                Ok(None)
            }
        })?;
        if let Verdict::HoldsAtScale(c) = restricted.limit_zero_verdict(tol) {
            report.rule = Rule::FiniteExceptionalSet;
            report.little_space = Verdict::holds(
                r_max,
                c.onset,
                format!(
                    "exceptional set of size {} is stable and mu -> 0 on its preimage",
                    far.len()
                ),
            );
            return Ok(report);
        }
        report
            .notes
            .push("exceptional set stable but mu does not vanish on its preimage at scale".into());
    } else {
        report.notes.push(format!(
            "exceptional set grows with the radius ({} -> {})",
            far_half.len(),
            far.len()
        ));
    }

    // (f) the g-condition
    let (g_profile, g_verdict) = g_condition_profile(symbol, weight, growth, space, r_max, tol)?;
    report.g_profile = Some(g_profile.clone());
    if let Verdict::HoldsAtScale(c) = &g_verdict {
        report.rule = Rule::GCondition;
        report.little_space = Verdict::holds(r_max, c.onset, "min{1/g(|phi(v)|), mu(v)} -> 0");
        return Ok(report);
    }

    // (g) converse under mu = o(g)
    let mu_over_g = TailProfile::build(space, r_max, false, |v| {
        Ok(Some(weight.eval(v)? / growth.eval(v.shell())?))
    })?;
    let little_o = mu_over_g.limit_zero_verdict(tol);
    if let (
        true,
        Verdict::Refuted(Witness::PersistentBound {
            bound: delta,
            vertices,
            ..
        }),
    ) = (little_o.is_holds(), &g_verdict)
    {
        let f = ReciprocalGrowth {
            growth: growth.clone(),
        };
        let floor = delta.clone() * delta.clone();
        if let Some(mut evidence) = verify_unboundedness(
            symbol,
            weight,
            space,
            &f,
            WitnessFn::ReciprocalGrowth(growth.clone()),
            r_max,
            tol,
            floor.clone(),
        )? {
            // the refuting sequence of the g-condition must clear delta^2
            let mut sequence = Vec::with_capacity(vertices.len());
            for v in vertices {
                let value = weight.eval(v)? / growth.eval(symbol.apply(space, v)?.shell())?;
                if value < floor {
                    report.rule = Rule::Undetermined;
                    report.little_space = Verdict::inconclusive(format!(
                        "sequence value {value} at {v} falls below delta^2 = {floor}"
                    ));
                    return Ok(report);
                }
                sequence.push((v.clone(), value));
            }
            evidence.sequence = sequence;
            report.rule = Rule::ConverseCounterexample;
            report.little_space = refutation_of(&evidence);
            report.unboundedness = Some(evidence);
            return Ok(report);
        }
        report.notes.push("1/g witness failed verification".into());
    } else if !little_o.is_holds() {
        report
            .notes
            .push(format!("mu = o(g) not established at scale: {little_o}"));
    }

    // (h) nothing applies: the general question is open
    report.rule = Rule::Undetermined;
    report.little_space = Verdict::inconclusive(format!(
        "no sufficient condition holds and the converse does not apply (g-condition: {g_verdict})"
    ));
    Ok(report)
}

fn refutation_of<S: Scalar>(evidence: &Unboundedness<S>) -> Verdict<S> {
    Verdict::Refuted(Witness::PersistentBound {
        bound: evidence.floor.clone(),
        squared: false,
        vertices: evidence.sequence.iter().map(|(v, _)| v.clone()).collect(),
    })
}

/// Checks that `f` lies in the little space at scale while `C_phi f` does not.
#[allow(clippy::too_many_arguments)]
fn verify_unboundedness<S: Scalar, F: Evaluable<S>>(
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
    f: &F,
    function: WitnessFn<S>,
    r_max: u64,
    tol: &S,
    floor: S,
) -> Result<Option<Unboundedness<S>>> {
    let (source_verdict, source_tail) = little_space_tail(f, weight, space, r_max, tol)?;
    let image = Composed {
        inner: f,
        symbol,
        space,
    };
    let (image_verdict, image_tail) = little_space_tail(&image, weight, space, r_max, tol)?;
    if !source_verdict.is_holds() {
        return Ok(None);
    }
    let Verdict::Refuted(Witness::PersistentBound { vertices, .. }) = image_verdict else {
        return Ok(None);
    };
    let mut sequence = Vec::with_capacity(vertices.len());
    for v in vertices {
        let value = weight.eval(&v)?
            * image
                .value_at(&v)?
                .norm_sqr()
                .exact_sqrt()
                .unwrap_or_else(S::zero);
        sequence.push((v, value));
    }
    Ok(Some(Unboundedness {
        function,
        source_tail,
        image_tail,
        persists_from: r_max.div_ceil(2),
        sequence,
        floor,
    }))
}
