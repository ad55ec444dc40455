//! Strictly positive weights on a space and annulus profiles of their tails.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric_space::{Space, Vertex, VertexId};
use crate::scalar::Scalar;
use crate::verdict::{Verdict, Witness};

#[derive(Debug, Clone)]
pub enum Weight<S> {
    ConstantOne,
    /// `mu(v) = 1 / (|v| + 1)`.
    ReciprocalLevel,
    /// `mu(m, n) = 3^m 2^-n` on the grid.
    GeometricGrid,
    /// `mu(v) = ratio^|v|` for integer levels.
    GeometricRay {
        ratio: S,
    },
    Table(HashMap<VertexId, S>),
}

impl<S: Scalar> Weight<S> {
    pub fn geometric_ray(ratio: S) -> Result<Self> {
        if ratio <= S::zero() {
            return Err(Error::InvalidWeight(format!(
                "geometric ratio must be positive, got {ratio}"
            )));
        }
        Ok(Weight::GeometricRay { ratio })
    }

    pub fn table(entries: impl IntoIterator<Item = (VertexId, S)>) -> Result<Self> {
        let mut map = HashMap::new();
        for (id, value) in entries {
            if value <= S::zero() {
                return Err(Error::InvalidWeight(format!(
                    "weight at {id} must be positive, got {value}"
                )));
            }
            if map.insert(id.clone(), value).is_some() {
                return Err(Error::InvalidWeight(format!("duplicate entry for {id}")));
            }
        }
        Ok(Weight::Table(map))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Weight::ConstantOne => "constant_one",
            Weight::ReciprocalLevel => "reciprocal_level",
            Weight::GeometricGrid => "geometric_grid",
            Weight::GeometricRay { .. } => "geometric_ray",
            Weight::Table(_) => "table",
        }
    }

    pub fn eval(&self, v: &Vertex) -> Result<S> {
        match self {
            Weight::ConstantOne => Ok(S::one()),
            Weight::ReciprocalLevel => Ok(S::one() / (S::from_dist(v.level()) + S::one())),
            Weight::GeometricGrid => match v.id() {
                VertexId::Pair(m, n) => Ok(S::from_int(3).pow_i(*m) * S::from_int(2).pow_i(-*n)),
                _ => Err(Error::InvalidWeight(format!(
                    "geometric_grid weight needs grid vertices, got {v}"
                ))),
            },
            Weight::GeometricRay { ratio } => {
                let level = v.level();
                if !level.is_integer() {
                    return Err(Error::InvalidWeight(format!(
                        "geometric_ray weight needs integer levels, |{v}| = {level}"
                    )));
                }
                Ok(ratio.pow_i(level.to_integer()))
            }
            Weight::Table(map) => map
                .get(v.id())
                .cloned()
                .ok_or_else(|| Error::horizon(format!("weight table has no entry for {v}"))),
        }
    }

    /// Checks the weight is defined (and positive) on the origin of `space`.
    pub fn validate(&self, space: &Space) -> Result<()> {
        if matches!(self, Weight::GeometricGrid) && !matches!(space, Space::Grid) {
            return Err(Error::InvalidWeight(
                "geometric_grid weight is only defined on the grid".into(),
            ));
        }
        let at_origin = self.eval(&space.origin())?;
        if at_origin <= S::zero() {
            return Err(Error::InvalidWeight("weight must be positive".into()));
        }
        Ok(())
    }
}

/// Maxima of a nonnegative quantity over the annuli `{R <= |v| < R + 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailProfile<S> {
    pub radii: Vec<u64>,
    /// Exact maximum per annulus; zero for annuli where nothing was profiled.
    pub annulus_sup: Vec<S>,
    /// First maximiser in ball order, `None` for empty annuli.
    pub witnesses: Vec<Option<Vertex>>,
    /// The profiled quantity is the square of the quantity of interest.
    pub squared: bool,
}

impl<S: Scalar> TailProfile<S> {
    /// Profiles `quantity` on annuli `0..=r_max`. Vertices mapped to `None`
    /// are left out (restricted profiles).
    pub fn build<F>(space: &Space, r_max: u64, squared: bool, quantity: F) -> Result<Self>
    where
        F: Fn(&Vertex) -> Result<Option<S>> + Sync,
    {
        let rows: Vec<(S, Option<Vertex>)> = (0..=r_max)
            .into_par_iter()
            .map(|r| {
                let mut best: Option<(S, Vertex)> = None;
                for v in space.annulus(r)? {
                    if let Some(q) = quantity(&v)? {
                        if best.as_ref().is_none_or(|(b, _)| q > *b) {
                            best = Some((q, v));
                        }
                    }
                }
                Ok(match best {
                    Some((q, v)) => (q, Some(v)),
                    None => (S::zero(), None),
                })
            })
            .collect::<Result<_>>()?;
        let (annulus_sup, witnesses) = rows.into_iter().unzip();
        Ok(Self {
            radii: (0..=r_max).collect(),
            annulus_sup,
            witnesses,
            squared,
        })
    }

    pub fn r_max(&self) -> u64 {
        self.radii.last().copied().unwrap_or(0)
    }

    /// First radius from which every annulus maximum stays below `threshold`.
    pub fn onset_below(&self, threshold: &S) -> Option<u64> {
        let mut onset = None;
        for (r, sup) in self.radii.iter().zip(&self.annulus_sup).rev() {
            if sup < threshold {
                onset = Some(*r);
            } else {
                break;
            }
        }
        onset
    }

    /// Truncation-scale verdict on "the quantity tends to zero".
    ///
    /// Holds when the annulus maxima drop below `tol` and stay there through
    /// the last radius. Refuted when every annulus in the tail window
    /// `[ceil(R_max / 2), R_max]` keeps a maximum strictly above `tol`; the
    /// smallest of those maxima is the persistent lower bound.
    pub fn limit_zero_verdict(&self, tol: &S) -> Verdict<S> {
        let threshold = if self.squared {
            tol.clone() * tol.clone()
        } else {
            tol.clone()
        };
        let r_max = self.r_max();
        if let Some(onset) = self.onset_below(&threshold) {
            return Verdict::holds(
                r_max,
                Some(onset),
                format!("annulus maxima below {tol} from radius {onset}"),
            );
        }
        let start = r_max.div_ceil(2) as usize;
        let window = &self.annulus_sup[start..];
        let bound = window
            .iter()
            .cloned()
            .reduce(S::min_of)
            .unwrap_or_else(S::zero);
        if bound > threshold {
            let vertices = self.witnesses[start..].iter().flatten().cloned().collect();
            return Verdict::Refuted(Witness::PersistentBound {
                bound,
                squared: self.squared,
                vertices,
            });
        }
        let last = self.annulus_sup.last().cloned().unwrap_or_else(S::zero);
        Verdict::inconclusive(format!(
            "annulus maximum at radius {r_max} is {last}, not yet below {tol}"
        ))
    }
}

/// Truncation-scale test of `mu(v) -> 0` as `|v| -> inf`.
pub fn weight_tail<S: Scalar>(
    weight: &Weight<S>,
    space: &Space,
    r_max: u64,
    tol: &S,
) -> Result<(Verdict<S>, TailProfile<S>)> {
    if r_max < 1 {
        return Err(Error::Config("weight_tail needs R_max >= 1".into()));
    }
    let profile = TailProfile::build(space, r_max, false, |v| weight.eval(v).map(Some))?;
    Ok((profile.limit_zero_verdict(tol), profile))
}
