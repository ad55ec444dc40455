//! JSON instance descriptions.
//!
//! ```json
//! {
//!   "space":   {"kind": "grid"},
//!   "weight":  {"kind": "geometric_grid"},
//!   "symbol":  {"kind": "grid_projection"},
//!   "growth":  {"kind": "linear"},
//!   "horizons": {"rmax": 300, "nmax": 2048, "search_radius": 60, "k": 10},
//!   "tol": "1/20"
//! }
//! ```
//!
//! Rationals are written as `"p/q"` strings, integers or decimals.

use serde_json::{Map, Value as Json};

use crate::dynamics::Horizons;
use crate::error::{Error, Result};
use crate::functions::{FiniteFn, Growth};
use crate::metric_space::{Space, TableSpace, VertexId};
use crate::scalar::{dist_from_rational, rational_from_json, Scalar};
use crate::symbols::{SymbolMap, TableMap};
use crate::weights::Weight;
use num_complex::Complex;
use num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

/// A fully validated instance.
#[derive(Debug, Clone)]
pub struct Instance<S> {
    pub space: Space,
    pub weight: Weight<S>,
    pub symbol: SymbolMap,
    pub growth: Growth<S>,
    pub horizons: Horizons,
    pub tol: S,
    pub epsilon: S,
    pub targets: Vec<FiniteFn<S>>,
    pub function: Option<FiniteFn<S>>,
}

/// Parses JSON text; syntax errors carry line and column.
pub fn parse_json(text: &str) -> Result<Json> {
    serde_json::from_str(text).map_err(|e| {
        Error::Config(format!(
            "malformed JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

/// The `mode` field, defaulting to exact arithmetic.
pub fn mode_of(doc: &Json) -> Result<Mode> {
    match doc.get("mode").map(|m| m.as_str()) {
        None | Some(Some("exact")) => Ok(Mode::Exact),
        Some(Some("f64")) => Ok(Mode::Float),
        Some(other) => Err(Error::Config(format!(
            "unknown mode {other:?}; use \"exact\" or \"f64\""
        ))),
    }
}

fn object<'a>(doc: &'a Json, key: &str) -> Result<&'a Map<String, Json>> {
    doc.get(key)
        .ok_or_else(|| Error::Config(format!("missing section \"{key}\"")))?
        .as_object()
        .ok_or_else(|| Error::Config(format!("section \"{key}\" must be an object")))
}

fn kind<'a>(section: &'a Map<String, Json>, name: &str) -> Result<&'a str> {
    section
        .get("kind")
        .and_then(Json::as_str)
        .ok_or_else(|| Error::Config(format!("section \"{name}\" needs a string \"kind\"")))
}

fn rational(value: &Json, what: &str) -> Result<BigRational> {
    rational_from_json(value)
        .ok_or_else(|| Error::Config(format!("{what}: cannot read {value} as a rational")))
}

fn positive<S: Scalar>(value: &Json, what: &str) -> Result<S> {
    let r = rational(value, what)?;
    if r <= BigRational::from_integer(0.into()) {
        return Err(Error::Config(format!(
            "{what} must be positive, got {value}"
        )));
    }
    Ok(S::from_rational(&r))
}

fn horizon(section: Option<&Map<String, Json>>, key: &str, default: u64) -> Result<u64> {
    match section.and_then(|s| s.get(key)) {
        None => Ok(default),
        Some(v) => match v.as_u64() {
            Some(n) if n > 0 => Ok(n),
            _ => Err(Error::Config(format!(
                "horizon \"{key}\" must be a positive integer, got {v}"
            ))),
        },
    }
}

fn vertex_ids(values: &[Json], what: &str) -> Result<Vec<VertexId>> {
    values
        .iter()
        .map(|v| {
            VertexId::from_json(v)
                .ok_or_else(|| Error::Config(format!("{what}: cannot read vertex {v}")))
        })
        .collect()
}

fn pairs<'a>(value: Option<&'a Json>, what: &str) -> Result<Vec<(&'a Json, &'a Json)>> {
    let items = value
        .and_then(Json::as_array)
        .ok_or_else(|| Error::Config(format!("{what} needs an \"entries\" list")))?;
    items
        .iter()
        .map(|e| match e.as_array().map(Vec::as_slice) {
            Some([a, b]) => Ok((a, b)),
            _ => Err(Error::Config(format!("{what}: entry {e} must be a pair"))),
        })
        .collect()
}

pub fn parse_space(doc: &Json) -> Result<Space> {
    let s = object(doc, "space")?;
    match kind(s, "space")? {
        "ray" => Ok(Space::Ray),
        "line" => Ok(Space::Line),
        "grid" => Ok(Space::Grid),
        "tree" => {
            let q = s
                .get("q")
                .and_then(Json::as_u64)
                .and_then(|q| u8::try_from(q).ok())
                .ok_or_else(|| Error::Config("tree space needs an integer \"q\"".into()))?;
            Space::tree(q)
        }
        "table" => {
            let ids = vertex_ids(
                s.get("vertices")
                    .and_then(Json::as_array)
                    .ok_or_else(|| Error::Config("table space needs a \"vertices\" list".into()))?,
                "table space",
            )?;
            let rows = s
                .get("metric")
                .and_then(Json::as_array)
                .ok_or_else(|| Error::Config("table space needs a \"metric\" matrix".into()))?;
            let metric = rows
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::Config("metric rows must be lists".into()))?
                        .iter()
                        .map(|d| {
                            dist_from_rational(&rational(d, "metric entry")?).ok_or_else(|| {
                                Error::Config(format!("metric entry {d} is too large"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let radius = match s.get("radius") {
                None => None,
                Some(r) => Some(
                    dist_from_rational(&rational(r, "table radius")?)
                        .ok_or_else(|| Error::Config("table radius is too large".into()))?,
                ),
            };
            Ok(Space::Table(TableSpace::new(ids, metric, radius)?))
        }
        other => Err(Error::Config(format!("unknown space kind \"{other}\""))),
    }
}

pub fn parse_weight<S: Scalar>(doc: &Json, space: &Space) -> Result<Weight<S>> {
    let s = object(doc, "weight")?;
    let weight = match kind(s, "weight")? {
        "constant_one" => Weight::ConstantOne,
        "reciprocal_level" => Weight::ReciprocalLevel,
        "geometric_grid" => Weight::GeometricGrid,
        "geometric_ray" => Weight::geometric_ray(positive(
            s.get("ratio")
                .ok_or_else(|| Error::Config("geometric_ray weight needs \"ratio\"".into()))?,
            "weight ratio",
        )?)?,
        "table" => {
            let entries = pairs(s.get("entries"), "weight table")?
                .into_iter()
                .map(|(v, x)| {
                    let id = VertexId::from_json(v).ok_or_else(|| {
                        Error::Config(format!("weight table: cannot read vertex {v}"))
                    })?;
                    Ok((id, S::from_rational(&rational(x, "weight value")?)))
                })
                .collect::<Result<Vec<_>>>()?;
            Weight::table(entries)?
        }
        other => return Err(Error::Config(format!("unknown weight kind \"{other}\""))),
    };
    weight.validate(space)?;
    Ok(weight)
}

pub fn parse_symbol(doc: &Json, space: &Space) -> Result<SymbolMap> {
    let s = object(doc, "symbol")?;
    let symbol = match kind(s, "symbol")? {
        "shift" => SymbolMap::Shift,
        "tree_translation" => SymbolMap::TreeTranslation,
        "grid_projection" => SymbolMap::GridProjection,
        "identity" => SymbolMap::Identity,
        "constant" => {
            let v = s
                .get("vertex")
                .ok_or_else(|| Error::Config("constant symbol needs \"vertex\"".into()))?;
            SymbolMap::Constant(space.vertex_from_json(v)?.id().clone())
        }
        "table" => {
            let read =
                |list: Vec<(&Json, &Json)>, what: &str| -> Result<Vec<(VertexId, VertexId)>> {
                    list.into_iter()
                        .map(|(a, b)| {
                            let ids = vertex_ids(&[a.clone(), b.clone()], what)?;
                            Ok((ids[0].clone(), ids[1].clone()))
                        })
                        .collect()
                };
            let entries = read(pairs(s.get("entries"), "symbol table")?, "symbol table")?;
            let finite_range = match s.get("finite_range") {
                None => None,
                Some(Json::Bool(b)) => Some(*b),
                Some(v) => {
                    return Err(Error::Config(format!(
                        "finite_range must be a boolean, got {v}"
                    )))
                }
            };
            let map = match s.get("inverse") {
                None | Some(Json::Bool(false)) => TableMap::new(entries, None, finite_range)?,
                Some(Json::Bool(true)) => {
                    let inverse = entries
                        .iter()
                        .map(|(v, w)| (w.clone(), v.clone()))
                        .collect();
                    TableMap::new(entries, Some(inverse), finite_range)?
                }
                Some(list) => {
                    let inverse = read(pairs(Some(list), "symbol inverse")?, "symbol inverse")?;
                    TableMap::new(entries, Some(inverse), finite_range)?
                }
            };
            SymbolMap::Table(map)
        }
        other => return Err(Error::Config(format!("unknown symbol kind \"{other}\""))),
    };
    symbol.validate(space)?;
    Ok(symbol)
}

pub fn parse_growth<S: Scalar>(doc: &Json) -> Result<Growth<S>> {
    let Some(section) = doc.get("growth") else {
        return Ok(Growth::Linear);
    };
    let s = section
        .as_object()
        .ok_or_else(|| Error::Config("section \"growth\" must be an object".into()))?;
    match kind(s, "growth")? {
        "linear" => Ok(Growth::Linear),
        "exponential" => Ok(Growth::Exponential),
        "constant" => Growth::constant(positive(
            s.get("value")
                .ok_or_else(|| Error::Config("constant growth needs \"value\"".into()))?,
            "growth value",
        )?),
        "table" => {
            let values = s
                .get("values")
                .and_then(Json::as_array)
                .ok_or_else(|| Error::Config("table growth needs a \"values\" list".into()))?
                .iter()
                .map(|v| positive(v, "growth value"))
                .collect::<Result<Vec<S>>>()?;
            Growth::table(values)
        }
        other => Err(Error::Config(format!("unknown growth kind \"{other}\""))),
    }
}

/// `{"entries": [[vertex, value], ...]}` where a value is a rational or
/// `{"re": .., "im": ..}`.
pub fn parse_function<S: Scalar>(value: &Json, space: &Space) -> Result<FiniteFn<S>> {
    let entries = pairs(value.get("entries"), "function")?
        .into_iter()
        .map(|(v, x)| {
            let vertex = space.vertex_from_json(v)?;
            let z = match x {
                Json::Object(parts) => {
                    let part = |key: &str| match parts.get(key) {
                        None => Ok(S::zero()),
                        Some(p) => Ok(S::from_rational(&rational(p, "function value")?)),
                    };
                    Complex::new(part("re")?, part("im")?)
                }
                other => Complex::new(
                    S::from_rational(&rational(other, "function value")?),
                    S::zero(),
                ),
            };
            Ok((vertex, z))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FiniteFn::from_entries(entries))
}

pub fn parse_horizons(doc: &Json) -> Result<Horizons> {
    let section = match doc.get("horizons") {
        None => None,
        Some(Json::Object(m)) => Some(m),
        Some(_) => {
            return Err(Error::Config(
                "section \"horizons\" must be an object".into(),
            ))
        }
    };
    let d = Horizons::default();
    Ok(Horizons {
        r_max: horizon(section, "rmax", d.r_max)?,
        n_max: horizon(section, "nmax", d.n_max as u64)? as usize,
        search_radius: horizon(section, "search_radius", d.search_radius)?,
        k: horizon(section, "k", d.k as u64)? as usize,
    })
}

/// Reads and validates every section of `doc`.
pub fn parse_instance<S: Scalar>(doc: &Json) -> Result<Instance<S>> {
    if !doc.is_object() {
        return Err(Error::Config("configuration must be a JSON object".into()));
    }
    let space = parse_space(doc)?;
    let weight = parse_weight(doc, &space)?;
    let symbol = parse_symbol(doc, &space)?;
    let growth = parse_growth(doc)?;
    let horizons = parse_horizons(doc)?;
    let tol = match doc.get("tol") {
        None => S::from_ratio(1, 20),
        Some(t) => positive(t, "tol")?,
    };
    let epsilon = match doc.get("epsilon") {
        None => S::from_ratio(1, 100),
        Some(e) => positive(e, "epsilon")?,
    };
    let targets = match doc.get("targets") {
        None => Vec::new(),
        Some(Json::Array(list)) => list
            .iter()
            .map(|t| parse_function(t, &space))
            .collect::<Result<_>>()?,
        Some(_) => {
            return Err(Error::Config(
                "\"targets\" must be a list of functions".into(),
            ))
        }
    };
    let function = doc
        .get("fn")
        .map(|f| parse_function(f, &space))
        .transpose()?;
    Ok(Instance {
        space,
        weight,
        symbol,
        growth,
        horizons,
        tol,
        epsilon,
        targets,
        function,
    })
}
