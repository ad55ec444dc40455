//! Pointed, locally finite metric spaces and their ball enumerators.
//!
//! Vertices inside any ball are ordered by `(level, id)`. All witnesses in the
//! crate are reported in this order so that every run is reproducible.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{dist, Dist};

/// Coordinates of a vertex, interpreted by the owning [`Space`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexId {
    Int(i64),
    Pair(i64, i64),
    /// Reduced word over the edge labels of a homogeneous tree.
    Word(Vec<u8>),
    Name(String),
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Int(n) => write!(f, "{n}"),
            VertexId::Pair(m, n) => write!(f, "({m},{n})"),
            VertexId::Word(w) => {
                write!(f, "[")?;
                for (i, a) in w.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, "]")
            }
            VertexId::Name(s) => write!(f, "{s}"),
        }
    }
}

impl VertexId {
    /// Generic JSON decoding used by table descriptions.
    pub fn from_json(value: &serde_json::Value) -> Option<Self> {
        use serde_json::Value;
        match value {
            Value::Number(n) => n.as_i64().map(VertexId::Int),
            Value::String(s) => Some(VertexId::Name(s.clone())),
            Value::Array(items) if items.len() == 2 => {
                Some(VertexId::Pair(items[0].as_i64()?, items[1].as_i64()?))
            }
            _ => None,
        }
    }
}

/// A vertex together with its cached level `|v| = dist(o, v)`.
///
/// Equality and hashing only look at the id; ordering is `(level, id)`.
#[derive(Debug, Clone)]
pub struct Vertex {
    id: VertexId,
    level: Dist,
}

impl Vertex {
    pub fn id(&self) -> &VertexId {
        &self.id
    }

    pub fn level(&self) -> Dist {
        self.level
    }

    /// `floor(|v|)`, the annulus index of the vertex.
    pub fn shell(&self) -> u64 {
        self.level.floor().to_integer() as u64
    }
}

impl PartialEq for Vertex {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Vertex {}

impl Hash for Vertex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl Ord for Vertex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level
            .cmp(&other.level)
            .then_with(|| self.id.cmp(&other.id))
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.id.fmt(f)
    }
}

/// Finite prefix of a metric space given by an explicit distance matrix.
#[derive(Debug, Clone)]
pub struct TableSpace {
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    dist: Vec<Vec<Dist>>,
    radius: Dist,
    integral: bool,
    sorted: Vec<Vertex>,
}

impl TableSpace {
    /// `ids[0]` is the distinguished point. `radius` declares that every
    /// vertex of level `<= radius` is listed; it defaults to the largest level.
    pub fn new(ids: Vec<VertexId>, dist: Vec<Vec<Dist>>, radius: Option<Dist>) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::InvalidSpace("table space has no vertices".into()));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSpace(format!(
                "metric must be a {n}x{n} matrix"
            )));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidSpace(format!("duplicate vertex {id}")));
            }
        }
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(Error::InvalidSpace(format!(
                    "dist({0},{0}) must be 0",
                    ids[i]
                )));
            }
            for j in 0..n {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::InvalidSpace(format!(
                        "metric not symmetric at ({}, {})",
                        ids[i], ids[j]
                    )));
                }
                if i != j && !dist[i][j].is_positive() {
                    return Err(Error::InvalidSpace(format!(
                        "distinct vertices {} and {} at distance {}",
                        ids[i], ids[j], dist[i][j]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > dist[i][j] + dist[j][k] {
                        return Err(Error::InvalidSpace(format!(
                            "triangle inequality fails for ({}, {}, {})",
                            ids[i], ids[j], ids[k]
                        )));
                    }
                }
            }
        }
        let max_level = dist[0].iter().copied().max().unwrap_or_else(Dist::zero);
        let radius = radius.unwrap_or(max_level);
        if radius.is_negative() {
            return Err(Error::InvalidSpace("declared radius is negative".into()));
        }
        let integral = dist[0].iter().all(|d| d.is_integer());
        let mut sorted: Vec<Vertex> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| Vertex {
                id: id.clone(),
                level: dist[0][i],
            })
            .collect();
        sorted.sort();
        Ok(Self {
            ids,
            index,
            dist,
            radius,
            integral,
            sorted,
        })
    }

    pub fn radius(&self) -> Dist {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    fn position(&self, id: &VertexId) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::horizon(format!("vertex {id} lies outside the declared table")))
    }
}

/// The supported families of pointed metric spaces.
#[derive(Debug, Clone)]
pub enum Space {
    /// `N_0` with `|n| = n`.
    Ray,
    /// `Z` with `|n| = |n|`.
    Line,
    /// Homogeneous tree of degree `q + 1`, vertices are reduced words over
    /// the labels `0..=q` (adjacent letters differ).
    Tree {
        q: u8,
    },
    /// `N_0 x N_0` with the l1 metric.
    Grid,
    Table(TableSpace),
}

impl Space {
    pub fn tree(q: u8) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidSpace("tree degree q + 1 needs q >= 1".into()));
        }
        Ok(Space::Tree { q })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Space::Ray => "ray",
            Space::Line => "line",
            Space::Tree { .. } => "tree",
            Space::Grid => "grid",
            Space::Table(_) => "table",
        }
    }

    pub fn origin(&self) -> Vertex {
        match self {
            Space::Ray | Space::Line => Vertex {
                id: VertexId::Int(0),
                level: Dist::zero(),
            },
            Space::Grid => Vertex {
                id: VertexId::Pair(0, 0),
                level: Dist::zero(),
            },
            Space::Tree { .. } => Vertex {
                id: VertexId::Word(Vec::new()),
                level: Dist::zero(),
            },
            Space::Table(t) => Vertex {
                id: t.ids[0].clone(),
                level: Dist::zero(),
            },
        }
    }

    /// Validates `id` and attaches its level.
    pub fn vertex(&self, id: VertexId) -> Result<Vertex> {
        let level = match (self, &id) {
            (Space::Ray, VertexId::Int(n)) if *n >= 0 => dist(*n),
            (Space::Line, VertexId::Int(n)) => dist(n.abs()),
            (Space::Grid, VertexId::Pair(m, n)) if *m >= 0 && *n >= 0 => dist(m + n),
            (Space::Tree { q }, VertexId::Word(w))
                if w.iter().all(|a| a <= q) && w.windows(2).all(|p| p[0] != p[1]) =>
            {
                dist(w.len() as i64)
            }
            (Space::Table(t), id) => t.dist[0][t.position(id)?],
            _ => {
                return Err(Error::UnknownVertex {
                    vertex: id.to_string(),
                })
            }
        };
        Ok(Vertex { id, level })
    }

    pub fn int(&self, n: i64) -> Result<Vertex> {
        self.vertex(VertexId::Int(n))
    }

    pub fn pair(&self, m: i64, n: i64) -> Result<Vertex> {
        self.vertex(VertexId::Pair(m, n))
    }

    pub fn word(&self, w: &[u8]) -> Result<Vertex> {
        self.vertex(VertexId::Word(w.to_vec()))
    }

    /// Decodes a vertex from its JSON form (integer, `[m, n]`, label array or name).
    pub fn vertex_from_json(&self, value: &serde_json::Value) -> Result<Vertex> {
        let bad = || {
            Error::Config(format!(
                "cannot read vertex {value} in a {} space",
                self.kind_name()
            ))
        };
        let id = match self {
            Space::Ray | Space::Line => VertexId::Int(value.as_i64().ok_or_else(bad)?),
            Space::Grid => match VertexId::from_json(value) {
                Some(id @ VertexId::Pair(..)) => id,
                _ => return Err(bad()),
            },
            Space::Tree { .. } => {
                let items = value.as_array().ok_or_else(bad)?;
                let word = items
                    .iter()
                    .map(|a| a.as_u64().and_then(|a| u8::try_from(a).ok()))
                    .collect::<Option<Vec<u8>>>()
                    .ok_or_else(bad)?;
                VertexId::Word(word)
            }
            Space::Table(_) => VertexId::from_json(value).ok_or_else(bad)?,
        };
        self.vertex(id)
    }

    pub fn distance(&self, u: &Vertex, v: &Vertex) -> Result<Dist> {
        match (self, &u.id, &v.id) {
            (Space::Ray | Space::Line, VertexId::Int(a), VertexId::Int(b)) => {
                Ok(dist((a - b).abs()))
            }
            (Space::Grid, VertexId::Pair(a, b), VertexId::Pair(c, d)) => {
                Ok(dist((a - c).abs() + (b - d).abs()))
            }
            (Space::Tree { .. }, VertexId::Word(a), VertexId::Word(b)) => {
                let common = a.iter().zip(b).take_while(|(x, y)| x == y).count();
                Ok(dist((a.len() + b.len() - 2 * common) as i64))
            }
            (Space::Table(t), a, b) => Ok(t.dist[t.position(a)?][t.position(b)?]),
            _ => Err(Error::UnknownVertex {
                vertex: format!("{u} or {v}"),
            }),
        }
    }

    /// Largest radius this description can answer for, `None` when unbounded.
    pub fn horizon(&self) -> Option<Dist> {
        match self {
            Space::Table(t) => Some(t.radius),
            _ => None,
        }
    }

    /// `{v : floor(|v|) = r}`, sorted in ball order.
    pub fn annulus(&self, r: u64) -> Result<Vec<Vertex>> {
        let ri = r as i64;
        let out = match self {
            Space::Ray => vec![Vertex {
                id: VertexId::Int(ri),
                level: dist(ri),
            }],
            Space::Line if r == 0 => vec![self.origin()],
            Space::Line => [-ri, ri]
                .into_iter()
                .map(|n| Vertex {
                    id: VertexId::Int(n),
                    level: dist(ri),
                })
                .collect(),
            Space::Grid => (0..=ri)
                .map(|m| Vertex {
                    id: VertexId::Pair(m, ri - m),
                    level: dist(ri),
                })
                .collect(),
            Space::Tree { q } => {
                let mut words = Vec::new();
                let mut current = Vec::with_capacity(r as usize);
                extend_words(*q, r as usize, &mut current, &mut words);
                words
                    .into_iter()
                    .map(|w| Vertex {
                        id: VertexId::Word(w),
                        level: dist(ri),
                    })
                    .collect()
            }
            Space::Table(t) => {
                let upper = dist(ri + 1);
                let covered = upper <= t.radius || (t.integral && dist(ri) <= t.radius);
                if !covered {
                    return Err(Error::horizon(format!(
                        "annulus {r} exceeds the declared table radius {}",
                        t.radius
                    )));
                }
                t.sorted
                    .iter()
                    .filter(|v| v.shell() == r)
                    .cloned()
                    .collect()
            }
        };
        Ok(out)
    }

    /// `{v : |v| <= radius}` in ball order.
    pub fn ball(&self, radius: u64) -> Result<Vec<Vertex>> {
        self.ball_rational(dist(radius as i64))
    }

    pub fn ball_rational(&self, radius: Dist) -> Result<Vec<Vertex>> {
        if radius.is_negative() {
            return Ok(Vec::new());
        }
        match self {
            Space::Table(t) => {
                if radius > t.radius {
                    return Err(Error::horizon(format!(
                        "ball of radius {radius} exceeds the declared table radius {}",
                        t.radius
                    )));
                }
                Ok(t.sorted
                    .iter()
                    .filter(|v| v.level <= radius)
                    .cloned()
                    .collect())
            }
            _ => {
                let top = radius.floor().to_integer() as u64;
                let mut out = Vec::new();
                for r in 0..=top {
                    out.extend(self.annulus(r)?);
                }
                Ok(out)
            }
        }
    }
}

fn extend_words(q: u8, len: usize, current: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if current.len() == len {
        out.push(current.clone());
        return;
    }
    for a in 0..=q {
        if current.last() == Some(&a) {
            continue;
        }
        current.push(a);
        extend_words(q, len, current, out);
        current.pop();
    }
}
