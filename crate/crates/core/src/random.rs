//! Seeded random instances over finite tables, for invariant suites.

use std::collections::HashSet;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::functions::FiniteFn;
use crate::metric_space::{Space, TableSpace, Vertex, VertexId};
use crate::scalar::{ceil_dist, Dist};
use crate::symbols::{SymbolMap, TableMap};
use crate::weights::Weight;
use num_complex::Complex;

/// A finite table space with a weight and a self-map of the table.
#[derive(Debug, Clone)]
pub struct TableInstance {
    pub space: Space,
    pub weight: Weight<BigRational>,
    pub symbol: SymbolMap,
    /// Vertex `i` of the table is `points[i]` in `Z^2` with the `l1` metric.
    pub points: Vec<(i64, i64)>,
    /// `phi(i) = image[i]` by table index.
    pub image: Vec<usize>,
    pub weights: Vec<BigRational>,
    pub injective: bool,
    /// Largest level in the table.
    pub radius: u64,
}

pub fn random_rational(rng: &mut impl Rng, max: i64) -> BigRational {
    BigRational::new(rng.gen_range(1..=max).into(), rng.gen_range(1..=max).into())
}

/// `max_vertices` distinct points of `[-4, 4]^2` (origin first) under the
/// `l1` metric, a random positive weight and a random self-map, which is a
/// permutation with declared inverse when `injective` is set.
pub fn table_instance(
    rng: &mut impl Rng,
    max_vertices: usize,
    injective: bool,
) -> Result<TableInstance> {
    let n = rng.gen_range(2..=max_vertices.clamp(2, 81));
    let mut pool: Vec<(i64, i64)> = (-4..=4)
        .flat_map(|x| (-4..=4).map(move |y| (x, y)))
        .filter(|p| *p != (0, 0))
        .collect();
    pool.shuffle(rng);
    let mut points = vec![(0, 0)];
    points.extend(pool.into_iter().take(n - 1));
    let ids: Vec<VertexId> = (0..n as i64).map(VertexId::Int).collect();
    let metric: Vec<Vec<Dist>> = points
        .iter()
        .map(|a| {
            points
                .iter()
                .map(|b| Dist::from_integer((a.0 - b.0).abs() + (a.1 - b.1).abs()))
                .collect()
        })
        .collect();
    let table = TableSpace::new(ids.clone(), metric, None)?;
    let radius = ceil_dist(table.radius()) as u64;
    let space = Space::Table(table);
    let weights: Vec<BigRational> = (0..n).map(|_| random_rational(rng, 20)).collect();
    let weight = Weight::table(ids.iter().cloned().zip(weights.iter().cloned()))?;
    let image: Vec<usize> = if injective {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        perm
    } else {
        (0..n).map(|_| rng.gen_range(0..n)).collect()
    };
    let entries: Vec<(VertexId, VertexId)> = image
        .iter()
        .enumerate()
        .map(|(i, &j)| (ids[i].clone(), ids[j].clone()))
        .collect();
    let map = if injective {
        TableMap::bijection(entries)?
    } else {
        TableMap::new(entries, None, None)?
    };
    let distinct: HashSet<usize> = image.iter().copied().collect();
    Ok(TableInstance {
        space,
        weight,
        symbol: SymbolMap::Table(map),
        points,
        injective: distinct.len() == n,
        image,
        weights,
        radius,
    })
}

impl TableInstance {
    pub fn vertex(&self, i: usize) -> Vertex {
        self.space.int(i as i64).expect("index inside the table")
    }

    pub fn level(&self, i: usize) -> i64 {
        self.points[i].0.abs() + self.points[i].1.abs()
    }
}

/// A function with up to `max_support` random complex rational values on `vertices`.
pub fn random_function(
    rng: &mut impl Rng,
    vertices: &[Vertex],
    max_support: usize,
) -> FiniteFn<BigRational> {
    let k = rng.gen_range(0..=max_support.min(vertices.len()));
    let chosen: Vec<Vertex> = vertices.choose_multiple(rng, k).cloned().collect();
    FiniteFn::from_entries(chosen.into_iter().map(|v| {
        let re = BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=9).into());
        let im = BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=9).into());
        (v, Complex::new(re, im))
    }))
}
