//! Finite-support functions on a space, the weighted sup-norm, and tail
//! tests for membership in the little space.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::metric_space::{Space, Vertex};
use crate::scalar::Scalar;
use crate::symbols::SymbolMap;
use crate::verdict::Verdict;
use crate::weights::{TailProfile, Weight};

/// Complex function value with exact parts in the rational tower.
pub type Value<S> = Complex<S>;

/// A complex function on the space, nonzero on finitely many vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteFn<S> {
    values: BTreeMap<Vertex, Value<S>>,
}

impl<S: Scalar> Default for FiniteFn<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> FiniteFn<S> {
    pub fn zero() -> Self {
        Self {
            values: BTreeMap::new(),
        }
    }

    /// Builds a function from `(vertex, value)` pairs. Repeated vertices are
    /// summed and zero values are dropped.
    pub fn from_entries(entries: impl IntoIterator<Item = (Vertex, Value<S>)>) -> Self {
        let mut values: BTreeMap<Vertex, Value<S>> = BTreeMap::new();
        for (v, c) in entries {
            let slot = values.entry(v).or_insert_with(Value::zero);
            *slot = slot.clone() + c;
        }
        values.retain(|_, c| !c.is_zero());
        Self { values }
    }

    pub fn from_real(entries: impl IntoIterator<Item = (Vertex, S)>) -> Self {
        Self::from_entries(
            entries
                .into_iter()
                .map(|(v, x)| (v, Complex::new(x, S::zero()))),
        )
    }

    pub fn point(v: Vertex, value: Value<S>) -> Self {
        Self::from_entries([(v, value)])
    }

    pub fn get(&self, v: &Vertex) -> Value<S> {
        self.values.get(v).cloned().unwrap_or_else(Value::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &Vertex> {
        self.values.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vertex, &Value<S>)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest level in the support.
    pub fn support_radius(&self) -> Option<u64> {
        self.values
            .keys()
            .map(|v| v.level().ceil().to_integer() as u64)
            .max()
    }

    pub fn scale(&self, c: &Value<S>) -> Self {
        Self::from_entries(
            self.values
                .iter()
                .map(|(v, x)| (v.clone(), x.clone() * c.clone())),
        )
    }

    /// Restriction to the vertices accepted by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&Vertex) -> bool) -> Self {
        Self {
            values: self
                .values
                .iter()
                .filter(|(v, _)| keep(v))
                .map(|(v, x)| (v.clone(), x.clone()))
                .collect(),
        }
    }

    /// `||f||_mu = max mu(v)|f(v)|` over the support.
    pub fn norm(&self, weight: &Weight<S>) -> Result<NormValue<S>> {
        norm_mu(self, weight)
    }
}

impl<S: Scalar> Add for &FiniteFn<S> {
    type Output = FiniteFn<S>;

    fn add(self, rhs: Self) -> FiniteFn<S> {
        FiniteFn::from_entries(
            self.iter()
                .chain(rhs.iter())
                .map(|(v, x)| (v.clone(), x.clone())),
        )
    }
}

impl<S: Scalar> Neg for &FiniteFn<S> {
    type Output = FiniteFn<S>;

    fn neg(self) -> FiniteFn<S> {
        FiniteFn::from_entries(self.iter().map(|(v, x)| (v.clone(), -x.clone())))
    }
}

impl<S: Scalar> Sub for &FiniteFn<S> {
    type Output = FiniteFn<S>;

    fn sub(self, rhs: Self) -> FiniteFn<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> fmt::Display for FiniteFn<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (v, x)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if x.im.is_zero() {
                write!(f, "{}*chi_{v}", x.re)?;
            } else {
                write!(f, "({} + {}i)*chi_{v}", x.re, x.im)?;
            }
        }
        Ok(())
    }
}

/// A weighted sup-norm, stored through its exact square.
#[derive(Debug, Clone, PartialEq)]
pub struct NormValue<S> {
    /// `max mu(v)^2 |f(v)|^2`.
    pub squared: S,
    /// The norm itself when its square root is representable.
    pub exact: Option<S>,
    pub witness: Option<Vertex>,
}

impl<S: Scalar> NormValue<S> {
    fn from_squared(squared: S, witness: Option<Vertex>) -> Self {
        Self {
            exact: squared.exact_sqrt(),
            squared,
            witness,
        }
    }

    pub fn zero() -> Self {
        Self::from_squared(S::zero(), None)
    }

    /// Bracket of width below `1e-12` around the norm; a single point when exact.
    pub fn enclosure(&self) -> (S, S) {
        match &self.exact {
            Some(x) => (x.clone(), x.clone()),
            None => self.squared.sqrt_enclosure(),
        }
    }

    /// Exact value, or the upper end of the enclosure.
    pub fn value(&self) -> S {
        self.exact.clone().unwrap_or_else(|| self.enclosure().1)
    }

    /// `norm < bound`, decided on squares.
    pub fn less_than(&self, bound: &S) -> bool {
        *bound > S::zero() && self.squared < bound.clone() * bound.clone()
    }
}

impl<S: Scalar> fmt::Display for NormValue<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(x) => write!(f, "{x}"),
            None => {
                let (lo, hi) = self.enclosure();
                write!(f, "sqrt({}) in [{lo}, {hi}]", self.squared)
            }
        }
    }
}

pub fn norm_mu<S: Scalar>(f: &FiniteFn<S>, weight: &Weight<S>) -> Result<NormValue<S>> {
    let mut best: Option<(S, Vertex)> = None;
    for (v, x) in f.iter() {
        let w = weight.eval(v)?;
        let q = w.clone() * w * x.norm_sqr();
        if best.as_ref().is_none_or(|(b, _)| q > *b) {
            best = Some((q, v.clone()));
        }
    }
    Ok(match best {
        Some((q, v)) => NormValue::from_squared(q, Some(v)),
        None => NormValue::zero(),
    })
}

/// `|f(v)|^2 <= ||f||^2 / mu(v)^2`, checked exactly.
pub fn evaluation_bound_check<S: Scalar>(
    f: &FiniteFn<S>,
    weight: &Weight<S>,
    v: &Vertex,
) -> Result<bool> {
    let norm = norm_mu(f, weight)?;
    let w = weight.eval(v)?;
    Ok(f.get(v).norm_sqr() * w.clone() * w <= norm.squared)
}

/// The characteristic function of a finite vertex set.
pub fn indicator<S: Scalar>(set: impl IntoIterator<Item = Vertex>) -> FiniteFn<S> {
    let mut values = BTreeMap::new();
    for v in set {
        values.insert(v, Complex::new(S::one(), S::zero()));
    }
    FiniteFn { values }
}

/// `g_w = chi_{phi(w)} / mu(phi(w))`, a unit vector whose image under
/// `C_phi` has norm at least `mu(w)/mu(phi(w))`.
pub fn test_function<S: Scalar>(
    w: &Vertex,
    symbol: &SymbolMap,
    weight: &Weight<S>,
    space: &Space,
) -> Result<FiniteFn<S>> {
    let target = symbol.apply(space, w)?;
    let value = S::one() / weight.eval(&target)?;
    Ok(FiniteFn::point(target, Complex::new(value, S::zero())))
}

/// Restriction of `f` to `{ |v| < n }`.
pub fn truncate<S: Scalar>(f: &FiniteFn<S>, n: u64) -> FiniteFn<S> {
    let bound = crate::scalar::Dist::from_integer(n as i64);
    f.restrict(|v| v.level() < bound)
}

/// Something that can be evaluated pointwise on a space.
pub trait Evaluable<S: Scalar>: Sync {
    fn value_at(&self, v: &Vertex) -> Result<Value<S>>;

    /// Radius beyond which the function vanishes, if known.
    fn null_beyond(&self) -> Option<u64> {
        None
    }
}

impl<S: Scalar> Evaluable<S> for FiniteFn<S> {
    fn value_at(&self, v: &Vertex) -> Result<Value<S>> {
        Ok(self.get(v))
    }

    fn null_beyond(&self) -> Option<u64> {
        Some(self.support_radius().unwrap_or(0))
    }
}

/// Increasing positive function on the nonnegative integers.
#[derive(Debug, Clone, PartialEq)]
pub enum Growth<S> {
    Constant(S),
    /// `g(x) = x + 1`.
    Linear,
    /// `g(x) = 2^x`.
    Exponential,
    /// Values `g(0), g(1), ...`; undefined past the end.
    Table(Vec<S>),
}

impl<S: Scalar> Growth<S> {
    pub fn constant(c: S) -> Result<Self> {
        if c <= S::zero() {
            return Err(Error::InvalidGrowth(format!(
                "constant must be positive, got {c}"
            )));
        }
        Ok(Growth::Constant(c))
    }

    pub fn table(values: Vec<S>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidGrowth(
                "table growth needs at least one value".into(),
            ));
        }
        if values[0] <= S::zero() {
            return Err(Error::InvalidGrowth(
                "growth values must be positive".into(),
            ));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidGrowth(
                "growth values must be nondecreasing".into(),
            ));
        }
        Ok(Growth::Table(values))
    }

    pub fn eval(&self, x: u64) -> Result<S> {
        match self {
            Growth::Constant(c) => Ok(c.clone()),
            Growth::Linear => Ok(S::from_int(x as i64 + 1)),
            Growth::Exponential => Ok(S::from_int(2).pow_i(x as i64)),
            Growth::Table(values) => values
                .get(x as usize)
                .cloned()
                .ok_or_else(|| Error::horizon(format!("growth table has no value at {x}"))),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Growth::Constant(_))
    }
}

/// `f(v) = 1 / g(|v|)`, the test function of the converse boundedness argument.
#[derive(Debug, Clone)]
pub struct ReciprocalGrowth<S> {
    pub growth: Growth<S>,
}

impl<S: Scalar> Evaluable<S> for ReciprocalGrowth<S> {
    fn value_at(&self, v: &Vertex) -> Result<Value<S>> {
        let g = self.growth.eval(v.shell())?;
        Ok(Complex::new(S::one() / g, S::zero()))
    }
}

/// Constant function, a handy negative control.
#[derive(Debug, Clone)]
pub struct ConstantFn<S>(pub Value<S>);

impl<S: Scalar> Evaluable<S> for ConstantFn<S> {
    fn value_at(&self, _v: &Vertex) -> Result<Value<S>> {
        Ok(self.0.clone())
    }
}

/// Pointwise formula given by a closure.
pub struct FormulaFn<F>(pub F);

impl<S: Scalar, F> Evaluable<S> for FormulaFn<F>
where
    F: Fn(&Vertex) -> Result<Value<S>> + Sync,
{
    fn value_at(&self, v: &Vertex) -> Result<Value<S>> {
        (self.0)(v)
    }
}

/// `v -> f(phi(v))` for an arbitrary evaluable `f`.
pub struct Composed<'a, F> {
    pub inner: &'a F,
    pub symbol: &'a SymbolMap,
    pub space: &'a Space,
}

impl<S: Scalar, F: Evaluable<S>> Evaluable<S> for Composed<'_, F> {
    fn value_at(&self, v: &Vertex) -> Result<Value<S>> {
        self.inner.value_at(&self.symbol.apply(self.space, v)?)
    }
}

/// Truncation-scale test of `mu(v)|f(v)| -> 0`, i.e. membership in the
/// little space. The profile holds the squared quantity.
pub fn little_space_tail<S: Scalar, F: Evaluable<S> + ?Sized>(
    f: &F,
    weight: &Weight<S>,
    space: &Space,
    r_max: u64,
    tol: &S,
) -> Result<(Verdict<S>, TailProfile<S>)> {
    let r_eff = match f.null_beyond() {
        Some(r) => r_max.max(r + 1),
        None => r_max,
    };
    let profile = TailProfile::build(space, r_eff, true, |v| {
        let w = weight.eval(v)?;
        Ok(Some(w.clone() * w * f.value_at(v)?.norm_sqr()))
    })?;
    Ok((profile.limit_zero_verdict(tol), profile))
}
