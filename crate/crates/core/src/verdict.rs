//! Three-valued outcomes of checking asymptotic conditions on a finite prefix.

use std::fmt;

use crate::metric_space::Vertex;

/// Evidence that a condition holds up to the examined scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// Largest radius (or step count) that was examined.
    pub scale: u64,
    /// First radius from which the condition held without interruption.
    pub onset: Option<u64>,
    pub note: String,
}

/// Concrete counter-evidence attached to a refutation.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness<S> {
    /// The profiled quantity stayed at or above `bound` on every annulus of
    /// the tail window; `vertices` are the per-annulus maximisers. When
    /// `squared` is set the bound refers to the squared quantity.
    PersistentBound {
        bound: S,
        squared: bool,
        vertices: Vec<Vertex>,
    },
    PeriodicPoint {
        vertex: Vertex,
        period: usize,
    },
    Collision {
        first: Vertex,
        second: Vertex,
        image: Vertex,
    },
    /// `phi^step(start) = image` lies back in the tested set; `period` is set
    /// when the orbit was seen to close up.
    Return {
        start: Vertex,
        step: usize,
        image: Vertex,
        period: Option<usize>,
    },
    /// `mu(v)/mu(phi(v))` never exceeds `bound` on the scanned ball; the
    /// largest ratio is attained at `vertex`.
    NormBound {
        bound: S,
        vertex: Vertex,
    },
}

impl<S> Witness<S> {
    /// Re-types witnesses that carry no scalar; `None` for the others.
    pub fn without_scalar<T>(&self) -> Option<Witness<T>> {
        Some(match self {
            Witness::PeriodicPoint { vertex, period } => Witness::PeriodicPoint {
                vertex: vertex.clone(),
                period: *period,
            },
            Witness::Collision {
                first,
                second,
                image,
            } => Witness::Collision {
                first: first.clone(),
                second: second.clone(),
                image: image.clone(),
            },
            Witness::Return {
                start,
                step,
                image,
                period,
            } => Witness::Return {
                start: start.clone(),
                step: *step,
                image: image.clone(),
                period: *period,
            },
            Witness::PersistentBound { .. } | Witness::NormBound { .. } => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<S> {
    HoldsAtScale(Certificate),
    Refuted(Witness<S>),
    Inconclusive(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    HoldsAtScale,
    Refuted,
    Inconclusive,
}

impl<S> Verdict<S> {
    pub fn holds(scale: u64, onset: Option<u64>, note: impl Into<String>) -> Self {
        Verdict::HoldsAtScale(Certificate {
            scale,
            onset,
            note: note.into(),
        })
    }

    pub fn inconclusive(reason: impl Into<String>) -> Self {
        Verdict::Inconclusive(reason.into())
    }

    pub fn status(&self) -> Status {
        match self {
            Verdict::HoldsAtScale(_) => Status::HoldsAtScale,
            Verdict::Refuted(_) => Status::Refuted,
            Verdict::Inconclusive(_) => Status::Inconclusive,
        }
    }

    pub fn is_holds(&self) -> bool {
        matches!(self, Verdict::HoldsAtScale(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn witness(&self) -> Option<&Witness<S>> {
        match self {
            Verdict::Refuted(w) => Some(w),
            _ => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::HoldsAtScale(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::HoldsAtScale => "HoldsAtScale",
            Status::Refuted => "Refuted",
            Status::Inconclusive => "Inconclusive",
        })
    }
}

impl<S: fmt::Display> fmt::Display for Witness<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::PersistentBound {
                bound,
                squared,
                vertices,
            } => {
                let what = if *squared { "squared value" } else { "value" };
                write!(f, "{what} >= {bound} on every tail annulus")?;
                if let (Some(first), Some(last)) = (vertices.first(), vertices.last()) {
                    write!(f, " (maximisers {first} .. {last})")?;
                }
                Ok(())
            }
            Witness::PeriodicPoint { vertex, period } => {
                write!(f, "periodic point {vertex} with period {period}")
            }
            Witness::Collision {
                first,
                second,
                image,
            } => write!(f, "collision: {first} and {second} both map to {image}"),
            Witness::Return {
                start,
                step,
                image,
                period,
            } => {
                write!(f, "phi^{step}({start}) = {image} returns to the set")?;
                if let Some(p) = period {
                    write!(f, " (orbit closes with period {p})")?;
                }
                Ok(())
            }
            Witness::NormBound { bound, vertex } => {
                write!(f, "mu(v)/mu(phi(v)) <= {bound}, attained at {vertex}")
            }
        }
    }
}

impl<S: fmt::Display> fmt::Display for Verdict<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::HoldsAtScale(c) => {
                write!(f, "HoldsAtScale(scale {}", c.scale)?;
                if let Some(onset) = c.onset {
                    write!(f, ", from {onset}")?;
                }
                if !c.note.is_empty() {
                    write!(f, "; {}", c.note)?;
                }
                write!(f, ")")
            }
            Verdict::Refuted(w) => write!(f, "Refuted({w})"),
            Verdict::Inconclusive(reason) => write!(f, "Inconclusive({reason})"),
        }
    }
}
