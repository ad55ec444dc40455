//! Self-maps of a space: iteration, fibers, images, periodic points and the
//! run-away property.

use std::collections::{hash_map::Entry, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::metric_space::{Space, Vertex, VertexId};
use crate::scalar::Dist;
use crate::verdict::{Verdict, Witness};

/// Verdicts about the symbol alone carry no weight values.
pub type MapVerdict = Verdict<Dist>;

/// Whether a vertex set is the full answer or only what a horizon revealed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    Exact,
    WithinHorizon,
}

impl Completeness {
    pub fn and(self, other: Self) -> Self {
        if self == Completeness::Exact && other == Completeness::Exact {
            Completeness::Exact
        } else {
            Completeness::WithinHorizon
        }
    }
}

/// A map given by finitely many `v -> phi(v)` entries.
#[derive(Debug, Clone, Default)]
pub struct TableMap {
    forward: HashMap<VertexId, VertexId>,
    inverse: Option<HashMap<VertexId, VertexId>>,
    finite_range: Option<bool>,
}

impl TableMap {
    pub fn new(
        entries: impl IntoIterator<Item = (VertexId, VertexId)>,
        inverse: Option<Vec<(VertexId, VertexId)>>,
        finite_range: Option<bool>,
    ) -> Result<Self> {
        let mut forward = HashMap::new();
        for (v, w) in entries {
            if forward.insert(v.clone(), w).is_some() {
                return Err(Error::InvalidSymbol(format!("duplicate entry for {v}")));
            }
        }
        let inverse = match inverse {
            None => None,
            Some(pairs) => {
                let map: HashMap<VertexId, VertexId> = pairs.into_iter().collect();
                for (w, v) in &map {
                    if forward.get(v) != Some(w) {
                        return Err(Error::InvalidSymbol(format!(
                            "declared inverse sends {w} to {v}, but phi({v}) is not {w}"
                        )));
                    }
                }
                for (v, w) in &forward {
                    if map.get(w) != Some(v) {
                        return Err(Error::InvalidSymbol(format!(
                            "declared inverse does not undo phi({v}) = {w}"
                        )));
                    }
                }
                Some(map)
            }
        };
        Ok(Self {
            forward,
            inverse,
            finite_range,
        })
    }

    /// A table whose inverse is read off its own entries; fails unless the
    /// entries are a bijection of the listed vertices.
    pub fn bijection(entries: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let entries: Vec<_> = entries.into_iter().collect();
        let inverse = entries
            .iter()
            .map(|(v, w)| (w.clone(), v.clone()))
            .collect();
        Self::new(entries, Some(inverse), Some(false))
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }
}

/// The supported self-maps.
#[derive(Debug, Clone)]
pub enum SymbolMap {
    /// `v -> v + 1` on the ray or the line.
    Shift,
    /// Left multiplication by the word `[0, 1]` on a homogeneous tree: a
    /// translation of length 2 along the axis `... 0 1 0 1 ...`. It is an
    /// automorphism without periodic points.
    TreeTranslation,
    /// `(m, n) -> (m, 0)` on the grid.
    GridProjection,
    Identity,
    /// Every vertex goes to one target (finite range).
    Constant(VertexId),
    Table(TableMap),
}

const TRANSLATION: [u8; 2] = [0, 1];
const TRANSLATION_INV: [u8; 2] = [1, 0];

fn left_multiply(prefix: &[u8], word: &[u8]) -> Vec<u8> {
    let mut out = prefix.to_vec();
    for &a in word {
        if out.last() == Some(&a) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

impl SymbolMap {
    pub fn kind_name(&self) -> &'static str {
        match self {
            SymbolMap::Shift => "shift",
            SymbolMap::TreeTranslation => "tree_translation",
            SymbolMap::GridProjection => "grid_projection",
            SymbolMap::Identity => "identity",
            SymbolMap::Constant(_) => "constant",
            SymbolMap::Table(_) => "table",
        }
    }

    /// Checks the map makes sense on `space`.
    pub fn validate(&self, space: &Space) -> Result<()> {
        let ok = match (self, space) {
            (SymbolMap::Shift, Space::Ray | Space::Line) => true,
            (SymbolMap::TreeTranslation, Space::Tree { .. }) => true,
            (SymbolMap::GridProjection, Space::Grid) => true,
            (SymbolMap::Identity, _) => true,
            (SymbolMap::Constant(target), _) => space.vertex(target.clone()).is_ok(),
            (SymbolMap::Table(t), _) => {
                for (v, w) in &t.forward {
                    space.vertex(v.clone())?;
                    space.vertex(w.clone())?;
                }
                true
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSymbol(format!(
                "{} is not defined on a {} space",
                self.kind_name(),
                space.kind_name()
            )))
        }
    }

    pub fn apply(&self, space: &Space, v: &Vertex) -> Result<Vertex> {
        let id = match (self, v.id()) {
            (SymbolMap::Shift, VertexId::Int(n)) => VertexId::Int(n + 1),
            (SymbolMap::TreeTranslation, VertexId::Word(w)) => {
                VertexId::Word(left_multiply(&TRANSLATION, w))
            }
            (SymbolMap::GridProjection, VertexId::Pair(m, _)) => VertexId::Pair(*m, 0),
            (SymbolMap::Identity, _) => return Ok(v.clone()),
            (SymbolMap::Constant(target), _) => target.clone(),
            (SymbolMap::Table(t), id) => t
                .forward
                .get(id)
                .cloned()
                .ok_or_else(|| Error::horizon(format!("symbol table has no entry for {v}")))?,
            _ => {
                return Err(Error::InvalidSymbol(format!(
                    "{} cannot act on vertex {v}",
                    self.kind_name()
                )))
            }
        };
        space.vertex(id)
    }

    /// `phi^n(v)`.
    pub fn iterate(&self, space: &Space, n: usize, v: &Vertex) -> Result<Vertex> {
        if matches!(self, SymbolMap::Identity) {
            return Ok(v.clone());
        }
        let mut cur = v.clone();
        for _ in 0..n {
            cur = self.apply(space, &cur)?;
        }
        Ok(cur)
    }

    /// Whether the map is a declared bijection of the whole space.
    pub fn has_declared_inverse(&self, space: &Space) -> bool {
        match self {
            SymbolMap::Shift => matches!(space, Space::Line),
            SymbolMap::TreeTranslation | SymbolMap::Identity => true,
            SymbolMap::Table(t) => t.has_inverse(),
            _ => false,
        }
    }

    pub fn declared_finite_range(&self) -> Option<bool> {
        match self {
            SymbolMap::Constant(_) => Some(true),
            SymbolMap::Table(t) => t.finite_range,
            _ => Some(false),
        }
    }

    /// The complete fiber `phi^-1(w)` when the map kind determines it, sorted
    /// in ball order. `None` means the fiber can only be searched.
    pub fn exact_fiber(&self, space: &Space, w: &Vertex) -> Result<Option<Vec<Vertex>>> {
        let fiber = match (self, w.id()) {
            (SymbolMap::Shift, VertexId::Int(n)) => match space {
                Space::Ray if *n == 0 => vec![],
                _ => vec![space.int(n - 1)?],
            },
            (SymbolMap::TreeTranslation, VertexId::Word(word)) => {
                vec![space.vertex(VertexId::Word(left_multiply(&TRANSLATION_INV, word)))?]
            }
            (SymbolMap::GridProjection, VertexId::Pair(_, n)) if *n > 0 => vec![],
            (SymbolMap::GridProjection, _) => return Ok(None),
            (SymbolMap::Identity, _) => vec![w.clone()],
            (SymbolMap::Constant(target), id) if id != target => vec![],
            (SymbolMap::Constant(_), _) => return Ok(None),
            (SymbolMap::Table(t), id) => match &t.inverse {
                Some(inv) => match inv.get(id) {
                    Some(v) => vec![space.vertex(v.clone())?],
                    None => return Ok(None),
                },
                None => return Ok(None),
            },
            _ => {
                return Err(Error::InvalidSymbol(format!(
                    "{} cannot act on vertex {w}",
                    self.kind_name()
                )))
            }
        };
        Ok(Some(fiber))
    }

    /// The unique preimage of `w` for a declared bijection.
    pub fn inverse_apply(&self, space: &Space, w: &Vertex) -> Result<Option<Vertex>> {
        if !self.has_declared_inverse(space) {
            return Ok(None);
        }
        Ok(self
            .exact_fiber(space, w)?
            .and_then(|fiber| fiber.into_iter().next()))
    }

    /// `phi^-n(w)` for a declared bijection.
    pub fn inverse_iterate(&self, space: &Space, n: usize, w: &Vertex) -> Result<Vertex> {
        let mut cur = w.clone();
        for depth in 0..n {
            cur = self
                .inverse_apply(space, &cur)?
                .ok_or_else(|| Error::UnresolvablePreimage {
                    vertex: w.clone(),
                    depth: depth + 1,
                })?;
        }
        Ok(cur)
    }
}

/// `{u in ball(R) : phi(u) = v}`.
pub fn preimage(
    symbol: &SymbolMap,
    space: &Space,
    v: &Vertex,
    radius: u64,
) -> Result<(Vec<Vertex>, Completeness)> {
    let bound = Dist::from_integer(radius as i64);
    if let Some(fiber) = symbol.exact_fiber(space, v)? {
        let complete = fiber.iter().all(|u| u.level() <= bound);
        let inside = fiber.into_iter().filter(|u| u.level() <= bound).collect();
        let flag = if complete {
            Completeness::Exact
        } else {
            Completeness::WithinHorizon
        };
        return Ok((inside, flag));
    }
    let mut inside = Vec::new();
    for u in space.ball(radius)? {
        if symbol.apply(space, &u)? == *v {
            inside.push(u);
        }
    }
    Ok((inside, Completeness::WithinHorizon))
}

#[derive(Debug, Clone, PartialEq)]
pub enum OrbitEnd {
    EscapedBall(Dist),
    /// `steps[entry]` is the first vertex seen twice; it recurs after `period` steps.
    CycleDetected {
        entry: usize,
        period: usize,
    },
    HorizonReached,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRecord {
    pub start: Vertex,
    /// `(n, phi^n(start))`, starting with `(0, start)`.
    pub steps: Vec<(usize, Vertex)>,
    pub end: OrbitEnd,
}

impl OrbitRecord {
    pub fn max_level(&self) -> Dist {
        self.steps
            .iter()
            .map(|(_, v)| v.level())
            .max()
            .unwrap_or_else(|| self.start.level())
    }
}

/// Follows `start` for up to `n_steps` applications, stopping at the first
/// repeated vertex. Leaving a finite table ends the orbit at `HorizonReached`.
pub fn trace_orbit(
    symbol: &SymbolMap,
    space: &Space,
    start: &Vertex,
    n_steps: usize,
) -> Result<OrbitRecord> {
    let mut seen: HashMap<Vertex, usize> = HashMap::new();
    let mut steps = vec![(0, start.clone())];
    seen.insert(start.clone(), 0);
    let mut cur = start.clone();
    for n in 1..=n_steps {
        cur = match symbol.apply(space, &cur) {
            Ok(next) => next,
            Err(e) if e.is_horizon() => {
                return Ok(OrbitRecord {
                    start: start.clone(),
                    steps,
                    end: OrbitEnd::HorizonReached,
                })
            }
            Err(e) => return Err(e),
        };
        steps.push((n, cur.clone()));
        match seen.entry(cur.clone()) {
            Entry::Occupied(first) => {
                let entry = *first.get();
                return Ok(OrbitRecord {
                    start: start.clone(),
                    steps,
                    end: OrbitEnd::CycleDetected {
                        entry,
                        period: n - entry,
                    },
                });
            }
            Entry::Vacant(slot) => {
                slot.insert(n);
            }
        }
    }
    Ok(OrbitRecord {
        start: start.clone(),
        steps,
        end: OrbitEnd::HorizonReached,
    })
}

/// Searches orbits of `ball(R)` for periodic points within `n_steps` steps.
///
/// A periodic point refutes hypercyclicity outright. Otherwise every orbit
/// must climb past `R_escape = R + ceil(N/2) * delta`, where `delta` is the
/// largest one-step level increase observed; an orbit that neither repeats
/// nor escapes leaves the verdict inconclusive.
pub fn find_periodic_points(
    symbol: &SymbolMap,
    space: &Space,
    radius: u64,
    n_steps: usize,
) -> Result<(MapVerdict, Vec<OrbitRecord>)> {
    if n_steps == 0 {
        return Err(Error::Config("periodic-point search needs N >= 1".into()));
    }
    let mut records = Vec::new();
    for v in space.ball(radius)? {
        let record = trace_orbit(symbol, space, &v, n_steps)?;
        if let OrbitEnd::CycleDetected { entry, period } = record.end {
            let vertex = record.steps[entry].1.clone();
            records.push(record);
            return Ok((
                Verdict::Refuted(Witness::PeriodicPoint { vertex, period }),
                records,
            ));
        }
        records.push(record);
    }
    let delta = records
        .iter()
        .flat_map(|r| r.steps.windows(2).map(|w| w[1].1.level() - w[0].1.level()))
        .max()
        .unwrap_or_else(|| Dist::from_integer(0))
        .max(Dist::from_integer(1));
    let escape =
        Dist::from_integer(radius as i64) + Dist::from_integer(n_steps.div_ceil(2) as i64) * delta;
    let mut stuck = None;
    for record in &mut records {
        if record.max_level() > escape {
            record.end = OrbitEnd::EscapedBall(escape);
        } else if stuck.is_none() {
            stuck = Some(record.start.clone());
        }
    }
    let verdict = match stuck {
        Some(v) => Verdict::inconclusive(format!(
            "orbit of {v} neither repeats nor escapes radius {escape} within {n_steps} steps"
        )),
        None => Verdict::holds(
            n_steps as u64,
            None,
            format!("no periodic point in ball({radius}); all orbits escape radius {escape}"),
        ),
    };
    Ok((verdict, records))
}

/// Looks for `u != w` in `ball(R)` with `phi(u) = phi(w)`.
pub fn injectivity_check(symbol: &SymbolMap, space: &Space, radius: u64) -> Result<MapVerdict> {
    let mut first_preimage: HashMap<Vertex, Vertex> = HashMap::new();
    for v in space.ball(radius)? {
        let image = symbol.apply(space, &v)?;
        match first_preimage.entry(image.clone()) {
            Entry::Occupied(prev) => {
                return Ok(Verdict::Refuted(Witness::Collision {
                    first: prev.get().clone(),
                    second: v,
                    image,
                }))
            }
            Entry::Vacant(slot) => {
                slot.insert(v);
            }
        }
    }
    Ok(Verdict::holds(
        radius,
        None,
        format!("phi is injective on ball({radius})"),
    ))
}

/// Smallest `N <= N_max` with `phi^n(I) ∩ I = ∅` for every `n` in `[N, N_max]`.
///
/// Refuted when an orbit from `I` closes into a cycle meeting `I` (returns
/// then recur forever), or when a return happens at step `N_max` itself.
pub fn run_away_check(
    symbol: &SymbolMap,
    space: &Space,
    set: &[Vertex],
    n_max: usize,
) -> Result<(MapVerdict, Option<usize>)> {
    if n_max == 0 {
        return Err(Error::Config("run-away check needs N_max >= 1".into()));
    }
    let members: HashSet<&Vertex> = set.iter().collect();
    let mut last_return: Option<(usize, Vertex, Vertex)> = None;
    for v in set {
        let mut seen: HashMap<Vertex, usize> = HashMap::new();
        seen.insert(v.clone(), 0);
        let mut cycle: Option<(usize, usize)> = None;
        let mut cur = v.clone();
        let mut orbit = vec![v.clone()];
        for n in 1..=n_max {
            cur = symbol.apply(space, &cur)?;
            orbit.push(cur.clone());
            if members.contains(&cur) && last_return.as_ref().is_none_or(|(m, _, _)| n > *m) {
                last_return = Some((n, v.clone(), cur.clone()));
            }
            if cycle.is_none() {
                match seen.entry(cur.clone()) {
                    Entry::Occupied(first) => cycle = Some((*first.get(), n - *first.get())),
                    Entry::Vacant(slot) => {
                        slot.insert(n);
                    }
                }
            }
            if let Some((entry, period)) = cycle {
                let on_cycle = &orbit[entry..entry + period];
                if let Some(offset) = on_cycle.iter().position(|u| members.contains(u)) {
                    return Ok((
                        Verdict::Refuted(Witness::Return {
                            start: v.clone(),
                            step: entry + offset,
                            image: on_cycle[offset].clone(),
                            period: Some(period),
                        }),
                        None,
                    ));
                }
                break;
            }
        }
    }
    match last_return {
        Some((n, start, image)) if n == n_max => Ok((
            Verdict::Refuted(Witness::Return {
                start,
                step: n,
                image,
                period: None,
            }),
            None,
        )),
        other => {
            let first_free = other.map_or(1, |(n, _, _)| n + 1);
            Ok((
                Verdict::holds(
                    n_max as u64,
                    Some(first_free as u64),
                    format!("phi^n(I) misses I for n in [{first_free}, {n_max}]"),
                ),
                Some(first_free),
            ))
        }
    }
}

fn reaches_back(
    symbol: &SymbolMap,
    space: &Space,
    w: &Vertex,
    depth: usize,
) -> Result<Option<bool>> {
    if depth == 0 {
        return Ok(Some(true));
    }
    let Some(fiber) = symbol.exact_fiber(space, w)? else {
        return Ok(None);
    };
    let mut unknown = false;
    for u in &fiber {
        match reaches_back(symbol, space, u, depth - 1)? {
            Some(true) => return Ok(Some(true)),
            Some(false) => {}
            None => unknown = true,
        }
    }
    Ok(if unknown { None } else { Some(false) })
}

/// `T^n ∩ ball(R)`, searched over `ball(R')` unless fibers are known exactly.
pub fn image_set(
    symbol: &SymbolMap,
    space: &Space,
    n: usize,
    radius: u64,
    search_radius: u64,
) -> Result<(Vec<Vertex>, Completeness)> {
    if search_radius < radius {
        return Err(Error::Config(format!(
            "search radius {search_radius} must be at least the horizon {radius}"
        )));
    }
    let ball = space.ball(radius)?;
    let mut exact = Vec::new();
    let mut all_known = true;
    for w in &ball {
        match reaches_back(symbol, space, w, n)? {
            Some(true) => exact.push(w.clone()),
            Some(false) => {}
            None => {
                all_known = false;
                break;
            }
        }
    }
    if all_known {
        return Ok((exact, Completeness::Exact));
    }
    let bound = Dist::from_integer(radius as i64);
    let mut found: Vec<Vertex> = Vec::new();
    let mut seen = HashSet::new();
    for v in space.ball(search_radius)? {
        let u = symbol.iterate(space, n, &v)?;
        if u.level() <= bound && seen.insert(u.clone()) {
            found.push(u);
        }
    }
    found.sort();
    Ok((found, Completeness::WithinHorizon))
}

/// `T^∞ ∩ ball(R)` approximated by `T^1 ∩ ... ∩ T^N`.
pub fn t_infinity(
    symbol: &SymbolMap,
    space: &Space,
    radius: u64,
    depth: usize,
    search_radius: u64,
) -> Result<(Vec<Vertex>, Completeness)> {
    let mut current: Option<Vec<Vertex>> = None;
    let mut flag = Completeness::Exact;
    let mut previous_level: Option<Vec<Vertex>> = None;
    let mut stabilized = false;
    for n in 1..=depth.max(1) {
        let (level, c) = image_set(symbol, space, n, radius, search_radius)?;
        flag = flag.and(c);
        stabilized = previous_level.as_ref() == Some(&level);
        current = Some(match current {
            None => level.clone(),
            Some(acc) => {
                let keep: HashSet<&Vertex> = level.iter().collect();
                acc.into_iter().filter(|v| keep.contains(v)).collect()
            }
        });
        previous_level = Some(level);
    }
    let result = current.unwrap_or_default();
    let exact = flag == Completeness::Exact
        && (result.is_empty()
            || (symbol.has_declared_inverse(space) && (stabilized || depth <= 1)));
    let flag = if exact {
        Completeness::Exact
    } else {
        Completeness::WithinHorizon
    };
    Ok((result, flag))
}

/// `|phi(ball(R))|` for each radius, with a saturation note. Finite range is
/// only decided when the map declares it.
pub fn finite_range_check(
    symbol: &SymbolMap,
    space: &Space,
    radii: &[u64],
) -> Result<(MapVerdict, Vec<(u64, usize)>)> {
    let mut sizes = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut images = HashSet::new();
        for v in space.ball(r)? {
            images.insert(symbol.apply(space, &v)?);
        }
        sizes.push((r, images.len()));
    }
    let scale = radii.last().copied().unwrap_or(0);
    let verdict = match symbol.declared_finite_range() {
        Some(true) => Verdict::holds(scale, None, "finite range declared"),
        Some(false) => Verdict::inconclusive("range declared infinite"),
        None => {
            let saturated =
                sizes.len() >= 2 && sizes[sizes.len() - 1].1 == sizes[sizes.len() - 2].1;
            Verdict::inconclusive(if saturated {
                "image size saturated on the sampled radii (not a proof)"
            } else {
                "image size still growing"
            })
        }
    };
    Ok((verdict, sizes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(vs: &[Vertex]) -> Vec<VertexId> {
        vs.iter().map(|v| v.id().clone()).collect()
    }

    #[test]
    fn iterate_examples() {
        let r = Space::Ray;
        assert_eq!(
            SymbolMap::Shift.iterate(&r, 5, &r.int(2).unwrap()).unwrap(),
            r.int(7).unwrap()
        );
        let g = Space::Grid;
        assert_eq!(
            SymbolMap::GridProjection
                .iterate(&g, 3, &g.pair(4, 9).unwrap())
                .unwrap(),
            g.pair(4, 0).unwrap()
        );
        let v = g.pair(1, 1).unwrap();
        assert_eq!(SymbolMap::Identity.iterate(&g, 17, &v).unwrap(), v);
        assert_eq!(SymbolMap::Identity.iterate(&g, 0, &v).unwrap(), v);
    }

    #[test]
    fn tree_translation_is_invertible_and_moves_axis_by_two() {
        let t = Space::tree(2).unwrap();
        let phi = SymbolMap::TreeTranslation;
        let o = t.origin();
        assert_eq!(phi.apply(&t, &o).unwrap(), t.word(&[0, 1]).unwrap());
        let axis = t.word(&[1, 0, 1]).unwrap();
        assert_eq!(
            t.distance(&axis, &phi.apply(&t, &axis).unwrap()).unwrap(),
            Dist::from_integer(2)
        );
        for v in t.ball(4).unwrap() {
            let back = phi
                .inverse_apply(&t, &phi.apply(&t, &v).unwrap())
                .unwrap()
                .unwrap();
            assert_eq!(back, v);
            let step = phi.apply(&t, &v).unwrap();
            assert!(t.distance(&v, &step).unwrap() >= Dist::from_integer(2));
        }
    }

    #[test]
    fn preimage_examples() {
        let g = Space::Grid;
        let (fiber, flag) =
            preimage(&SymbolMap::GridProjection, &g, &g.pair(2, 0).unwrap(), 5).unwrap();
        assert_eq!(
            pairs(&fiber),
            (0..=3).map(|n| VertexId::Pair(2, n)).collect::<Vec<_>>()
        );
        assert_eq!(flag, Completeness::WithinHorizon);

        let r = Space::Ray;
        assert_eq!(
            preimage(&SymbolMap::Shift, &r, &r.origin(), 4).unwrap(),
            (vec![], Completeness::Exact)
        );

        let l = Space::Line;
        let (fiber, flag) = preimage(&SymbolMap::Shift, &l, &l.origin(), 4).unwrap();
        assert_eq!(fiber, vec![l.int(-1).unwrap()]);
        assert_eq!(flag, Completeness::Exact);
    }

    #[test]
    fn periodic_point_examples() {
        let g = Space::Grid;
        let (v, _) = find_periodic_points(&SymbolMap::Identity, &g, 3, 10).unwrap();
        assert_eq!(
            v,
            Verdict::Refuted(Witness::PeriodicPoint {
                vertex: g.origin(),
                period: 1
            })
        );

        let (v, _) = find_periodic_points(&SymbolMap::GridProjection, &g, 3, 10).unwrap();
        assert_eq!(
            v,
            Verdict::Refuted(Witness::PeriodicPoint {
                vertex: g.origin(),
                period: 1
            })
        );

        let (v, records) = find_periodic_points(&SymbolMap::Shift, &Space::Line, 10, 100).unwrap();
        assert!(v.is_holds(), "{v}");
        assert!(records
            .iter()
            .all(|r| matches!(r.end, OrbitEnd::EscapedBall(_))));

        let (v, _) =
            find_periodic_points(&SymbolMap::TreeTranslation, &Space::tree(2).unwrap(), 3, 40)
                .unwrap();
        assert!(v.is_holds(), "{v}");
    }

    #[test]
    fn periodic_search_on_table_cycle() {
        let ids: Vec<VertexId> = (0..4).map(VertexId::Int).collect();
        let m: Vec<Vec<Dist>> = (0..4i64)
            .map(|i| {
                (0..4i64)
                    .map(|j| Dist::from_integer((i - j).abs()))
                    .collect()
            })
            .collect();
        let space = Space::Table(crate::metric_space::TableSpace::new(ids, m, None).unwrap());
        // 0 -> 1 -> 2 -> 3 -> 2
        let map = TableMap::new(
            [(0, 1), (1, 2), (2, 3), (3, 2)].map(|(a, b)| (VertexId::Int(a), VertexId::Int(b))),
            None,
            None,
        )
        .unwrap();
        let phi = SymbolMap::Table(map);
        let (v, _) = find_periodic_points(&phi, &space, 0, 10).unwrap();
        assert_eq!(
            v,
            Verdict::Refuted(Witness::PeriodicPoint {
                vertex: space.int(2).unwrap(),
                period: 2
            })
        );
    }

    #[test]
    fn injectivity_examples() {
        let g = Space::Grid;
        let v = injectivity_check(&SymbolMap::GridProjection, &g, 2).unwrap();
        assert_eq!(
            v,
            Verdict::Refuted(Witness::Collision {
                first: g.origin(),
                second: g.pair(0, 1).unwrap(),
                image: g.origin()
            })
        );
        assert!(injectivity_check(&SymbolMap::Shift, &Space::Ray, 50)
            .unwrap()
            .is_holds());
        assert!(
            injectivity_check(&SymbolMap::TreeTranslation, &Space::tree(3).unwrap(), 4)
                .unwrap()
                .is_holds()
        );
    }

    #[test]
    fn run_away_examples() {
        let l = Space::Line;
        let (v, n) = run_away_check(&SymbolMap::Shift, &l, &l.ball(2).unwrap(), 50).unwrap();
        assert!(v.is_holds());
        assert_eq!(n, Some(5));

        let (v, _) = run_away_check(&SymbolMap::Identity, &l, &[l.origin()], 10).unwrap();
        assert!(v.is_refuted());

        let g = Space::Grid;
        let (v, _) = run_away_check(&SymbolMap::GridProjection, &g, &[g.origin()], 10).unwrap();
        assert!(v.is_refuted());
    }

    #[test]
    fn image_set_examples() {
        let r = Space::Ray;
        let (img, flag) = image_set(&SymbolMap::Shift, &r, 3, 5, 5).unwrap();
        assert_eq!(pairs(&img), (3..=5).map(VertexId::Int).collect::<Vec<_>>());
        assert_eq!(flag, Completeness::Exact);

        let l = Space::Line;
        let (img, flag) = image_set(&SymbolMap::Shift, &l, 7, 4, 4).unwrap();
        assert_eq!(img, l.ball(4).unwrap());
        assert_eq!(flag, Completeness::Exact);

        let g = Space::Grid;
        let (img, flag) = image_set(&SymbolMap::GridProjection, &g, 1, 3, 3).unwrap();
        assert_eq!(
            pairs(&img),
            (0..=3).map(|m| VertexId::Pair(m, 0)).collect::<Vec<_>>()
        );
        assert_eq!(flag, Completeness::WithinHorizon);
    }

    #[test]
    fn t_infinity_examples() {
        let r = Space::Ray;
        let (t, flag) = t_infinity(&SymbolMap::Shift, &r, 5, 10, 5).unwrap();
        assert!(t.is_empty());
        assert_eq!(flag, Completeness::Exact);

        let l = Space::Line;
        let (t, flag) = t_infinity(&SymbolMap::Shift, &l, 5, 10, 5).unwrap();
        assert_eq!(t, l.ball(5).unwrap());
        assert_eq!(flag, Completeness::Exact);

        let g = Space::Grid;
        let (t, _) = t_infinity(&SymbolMap::GridProjection, &g, 3, 4, 3).unwrap();
        assert_eq!(
            pairs(&t),
            (0..=3).map(|m| VertexId::Pair(m, 0)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn table_inverse_must_undo_forward() {
        let e = [(0, 1), (1, 0)].map(|(a, b)| (VertexId::Int(a), VertexId::Int(b)));
        assert!(TableMap::bijection(e.clone()).is_ok());
        let bad = vec![(VertexId::Int(1), VertexId::Int(1))];
        assert!(TableMap::new(e, Some(bad), None).is_err());
        let collide = [(0, 1), (1, 1)].map(|(a, b)| (VertexId::Int(a), VertexId::Int(b)));
        assert!(TableMap::bijection(collide).is_err());
    }

    #[test]
    fn finite_range_is_declared_not_inferred() {
        let g = Space::Grid;
        let (v, sizes) =
            finite_range_check(&SymbolMap::Constant(VertexId::Pair(1, 1)), &g, &[1, 2, 4]).unwrap();
        assert!(v.is_holds());
        assert!(sizes.iter().all(|&(_, n)| n == 1));
        let (v, sizes) = finite_range_check(&SymbolMap::GridProjection, &g, &[1, 2, 4]).unwrap();
        assert!(!v.is_holds());
        assert_eq!(sizes.last(), Some(&(4, 5)));
    }
}
