//! Cocontinuous quantales: the value domains for generalized distances.
//!
//! Six instances are built in: the truth values `{0, ∞}` with join as
//! addition, the extended reals `[0, ∞]`, the unit interval with truncated
//! addition, the unit interval with the reversed order and Łukasiewicz
//! addition (errors), left-continuous distance distribution functions, and
//! user-supplied finite lattices with an addition table.
//!
//! Throughout, `0` is the bottom and the additive unit, `≤` is the quantale
//! order (reversed from the numeric/pointwise one for errors and
//! distributions), and `a ≫ b` reads "a is way above b": every codirected
//! family whose meet is `≤ b` contains an element `≤ a`.

mod ddf;
mod lattice;
pub mod laws;
pub mod refute;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use ddf::{Ddf, DdfError};
pub use lattice::{AddSpec, FiniteLattice, LatticeError, MAX_ELEMENTS};

/// Default comparison tolerance for real-valued instances.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Longest witness sequence the searching operations will walk.
const SEARCH_DEPTH: u32 = 64;

#[derive(Debug, Error, PartialEq)]
pub enum QuantaleError {
    #[error("value `{value}` does not belong to quantale `{quantale}`")]
    Mismatch { quantale: String, value: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cannot parse `{literal}` as a value of `{quantale}`: {reason}")]
    Parse {
        quantale: String,
        literal: String,
        reason: String,
    },
    #[error("unknown quantale `{0}` (expected truth, extreal, unit, errors, ddf or lattice:<path>)")]
    UnknownQuantale(String),
}

/// The instance a [`Quantale`] computes in.
#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    /// `{0, ∞}`, addition is join.
    Truth,
    /// `[0, ∞]` with ordinary addition.
    ExtReal,
    /// `[0, 1]` with truncated addition.
    Unit,
    /// `[0, 1]` with the opposite order and `max(a + b − 1, 0)`.
    Errors,
    /// Distance distribution functions under sup-convolution.
    Ddf,
    /// A finite lattice with an explicit addition table.
    Lattice(Arc<FiniteLattice>),
}

/// A quantale element. The payload is interpreted by the owning [`Quantale`].
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    /// `false` is `0`, `true` is `∞`.
    Truth(bool),
    ExtReal(f64),
    Unit(f64),
    /// Stored in numeric coordinates: `1` is the bottom, `0` the top.
    Errors(f64),
    Ddf(Ddf),
    /// Element id of the owning lattice.
    Lattice(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Quantale {
    kind: Kind,
    tol: f64,
}

impl Quantale {
    pub fn new(kind: Kind) -> Self {
        Quantale { kind, tol: DEFAULT_TOL }
    }

    pub fn truth() -> Self {
        Self::new(Kind::Truth)
    }

    pub fn ext_real() -> Self {
        Self::new(Kind::ExtReal)
    }

    pub fn unit() -> Self {
        Self::new(Kind::Unit)
    }

    pub fn errors() -> Self {
        Self::new(Kind::Errors)
    }

    pub fn ddf() -> Self {
        Self::new(Kind::Ddf)
    }

    pub fn lattice(l: FiniteLattice) -> Self {
        Self::new(Kind::Lattice(Arc::new(l)))
    }

    /// Resolves a built-in selector (`truth`, `extreal`, `unit`, `errors`,
    /// `ddf`). Lattice selectors need a file and are handled by the loaders.
    pub fn builtin(name: &str) -> Result<Self, QuantaleError> {
        match name {
            "truth" => Ok(Self::truth()),
            "extreal" => Ok(Self::ext_real()),
            "unit" => Ok(Self::unit()),
            "errors" => Ok(Self::errors()),
            "ddf" => Ok(Self::ddf()),
            other => Err(QuantaleError::UnknownQuantale(other.to_string())),
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            Kind::Truth => "truth".into(),
            Kind::ExtReal => "extreal".into(),
            Kind::Unit => "unit".into(),
            Kind::Errors => "errors".into(),
            Kind::Ddf => "ddf".into(),
            Kind::Lattice(l) => format!("lattice:{}", l.name()),
        }
    }

    pub fn finite_lattice(&self) -> Option<&FiniteLattice> {
        match &self.kind {
            Kind::Lattice(l) => Some(l),
            _ => None,
        }
    }

    /// Finite instances are checked exhaustively and compared exactly.
    pub fn is_finite(&self) -> bool {
        matches!(self.kind, Kind::Truth | Kind::Lattice(_))
    }

    /// All elements, for finite instances.
    pub fn elements(&self) -> Option<Vec<Value>> {
        match &self.kind {
            Kind::Truth => Some(vec![Value::Truth(false), Value::Truth(true)]),
            Kind::Lattice(l) => Some((0..l.len()).map(Value::Lattice).collect()),
            _ => None,
        }
    }

    pub fn zero(&self) -> Value {
        match &self.kind {
            Kind::Truth => Value::Truth(false),
            Kind::ExtReal => Value::ExtReal(0.0),
            Kind::Unit => Value::Unit(0.0),
            Kind::Errors => Value::Errors(1.0),
            Kind::Ddf => Value::Ddf(Ddf::eps0()),
            Kind::Lattice(l) => Value::Lattice(l.zero()),
        }
    }

    pub fn top(&self) -> Value {
        match &self.kind {
            Kind::Truth => Value::Truth(true),
            Kind::ExtReal => Value::ExtReal(f64::INFINITY),
            Kind::Unit => Value::Unit(1.0),
            Kind::Errors => Value::Errors(0.0),
            Kind::Ddf => Value::Ddf(Ddf::zero()),
            Kind::Lattice(l) => Value::Lattice(l.top()),
        }
    }

    fn mismatch(&self, v: &Value) -> QuantaleError {
        QuantaleError::Mismatch {
            quantale: self.name(),
            value: format!("{v:?}"),
        }
    }

    /// Checks that `v` is a carrier element of this instance.
    pub fn check(&self, v: &Value) -> Result<(), QuantaleError> {
        let ok = match (&self.kind, v) {
            (Kind::Truth, Value::Truth(_)) => true,
            (Kind::ExtReal, Value::ExtReal(x)) => *x >= 0.0,
            (Kind::Unit, Value::Unit(x)) | (Kind::Errors, Value::Errors(x)) => (0.0..=1.0).contains(x),
            (Kind::Ddf, Value::Ddf(_)) => true,
            (Kind::Lattice(l), Value::Lattice(i)) => *i < l.len(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(self.mismatch(v))
        }
    }

    /// Order `a ≤ b`. Real instances allow `tol` of slack.
    pub fn leq(&self, a: &Value, b: &Value) -> Result<bool, QuantaleError> {
        let tol = self.tol;
        Ok(match (&self.kind, a, b) {
            (Kind::Truth, Value::Truth(x), Value::Truth(y)) => !*x || *y,
            (Kind::ExtReal, Value::ExtReal(x), Value::ExtReal(y)) => {
                *y == f64::INFINITY || (*x != f64::INFINITY && *x <= *y + tol)
            }
            (Kind::Unit, Value::Unit(x), Value::Unit(y)) => *x <= *y + tol,
            (Kind::Errors, Value::Errors(x), Value::Errors(y)) => *x >= *y - tol,
            (Kind::Ddf, Value::Ddf(f), Value::Ddf(g)) => f.dominates(g, tol),
            (Kind::Lattice(l), Value::Lattice(x), Value::Lattice(y)) => l.leq(*x, *y),
            _ => return Err(self.pair_mismatch(a, b)),
        })
    }

    fn pair_mismatch(&self, a: &Value, b: &Value) -> QuantaleError {
        match self.check(a) {
            Err(e) => e,
            Ok(()) => self.mismatch(b),
        }
    }

    /// Equality in the order: `a ≤ b` and `b ≤ a`.
    pub fn eq(&self, a: &Value, b: &Value) -> Result<bool, QuantaleError> {
        Ok(self.leq(a, b)? && self.leq(b, a)?)
    }

    /// Closeness within `h`: absolute difference for reals, Lévy distance for
    /// distributions, exact equality for finite instances.
    pub fn within(&self, a: &Value, b: &Value, h: f64) -> Result<bool, QuantaleError> {
        Ok(match (&self.kind, a, b) {
            (Kind::ExtReal, Value::ExtReal(x), Value::ExtReal(y))
            | (Kind::Unit, Value::Unit(x), Value::Unit(y))
            | (Kind::Errors, Value::Errors(x), Value::Errors(y)) => {
                if x.is_infinite() || y.is_infinite() {
                    x == y
                } else {
                    (x - y).abs() <= h
                }
            }
            (Kind::Ddf, Value::Ddf(f), Value::Ddf(g)) => f.levy_within(g, h, self.tol),
            (Kind::Truth, Value::Truth(x), Value::Truth(y)) => x == y,
            (Kind::Lattice(_), Value::Lattice(x), Value::Lattice(y)) => x == y,
            _ => return Err(self.pair_mismatch(a, b)),
        })
    }

    pub fn meet2(&self, a: &Value, b: &Value) -> Result<Value, QuantaleError> {
        Ok(match (&self.kind, a, b) {
            (Kind::Truth, Value::Truth(x), Value::Truth(y)) => Value::Truth(*x && *y),
            (Kind::ExtReal, Value::ExtReal(x), Value::ExtReal(y)) => Value::ExtReal(x.min(*y)),
            (Kind::Unit, Value::Unit(x), Value::Unit(y)) => Value::Unit(x.min(*y)),
            (Kind::Errors, Value::Errors(x), Value::Errors(y)) => Value::Errors(x.max(*y)),
            (Kind::Ddf, Value::Ddf(f), Value::Ddf(g)) => Value::Ddf(f.pointwise_max(g)),
            (Kind::Lattice(l), Value::Lattice(x), Value::Lattice(y)) => Value::Lattice(l.meet(*x, *y)),
            _ => return Err(self.pair_mismatch(a, b)),
        })
    }

    pub fn join2(&self, a: &Value, b: &Value) -> Result<Value, QuantaleError> {
        Ok(match (&self.kind, a, b) {
            (Kind::Truth, Value::Truth(x), Value::Truth(y)) => Value::Truth(*x || *y),
            (Kind::ExtReal, Value::ExtReal(x), Value::ExtReal(y)) => Value::ExtReal(x.max(*y)),
            (Kind::Unit, Value::Unit(x), Value::Unit(y)) => Value::Unit(x.max(*y)),
            (Kind::Errors, Value::Errors(x), Value::Errors(y)) => Value::Errors(x.min(*y)),
            (Kind::Ddf, Value::Ddf(f), Value::Ddf(g)) => Value::Ddf(f.pointwise_min(g)),
            (Kind::Lattice(l), Value::Lattice(x), Value::Lattice(y)) => Value::Lattice(l.join(*x, *y)),
            _ => return Err(self.pair_mismatch(a, b)),
        })
    }

    /// Greatest lower bound of a finite set. The empty meet is the top.
    pub fn meet<'a>(&self, values: impl IntoIterator<Item = &'a Value>) -> Result<Value, QuantaleError> {
        values.into_iter().try_fold(self.top(), |acc, v| self.meet2(&acc, v))
    }

    /// Least upper bound of a finite set. The empty join is `0`.
    pub fn join<'a>(&self, values: impl IntoIterator<Item = &'a Value>) -> Result<Value, QuantaleError> {
        values.into_iter().try_fold(self.zero(), |acc, v| self.join2(&acc, v))
    }

    /// The monoid operation.
    pub fn add(&self, a: &Value, b: &Value) -> Result<Value, QuantaleError> {
        Ok(match (&self.kind, a, b) {
            (Kind::Truth, Value::Truth(x), Value::Truth(y)) => Value::Truth(*x || *y),
            (Kind::ExtReal, Value::ExtReal(x), Value::ExtReal(y)) => Value::ExtReal(x + y),
            (Kind::Unit, Value::Unit(x), Value::Unit(y)) => Value::Unit((x + y).min(1.0)),
            (Kind::Errors, Value::Errors(x), Value::Errors(y)) => Value::Errors((x + y - 1.0).max(0.0)),
            (Kind::Ddf, Value::Ddf(f), Value::Ddf(g)) => Value::Ddf(f.boxplus(g)),
            (Kind::Lattice(l), Value::Lattice(x), Value::Lattice(y)) => Value::Lattice(l.add(*x, *y)),
            _ => return Err(self.pair_mismatch(a, b)),
        })
    }

    /// `a ≫ b`, decided per instance. Real instances compare exactly, so
    /// `tol` never manufactures a margin.
    ///
    /// For distributions this is the shift-and-margin criterion of
    /// [`Ddf::way_above`], which is sufficient; [`refute::way_above_refute`]
    /// is its falsifier.
    pub fn way_above(&self, a: &Value, b: &Value) -> Result<bool, QuantaleError> {
        Ok(match (&self.kind, a, b) {
            (Kind::Truth, Value::Truth(x), Value::Truth(y)) => *x || !*y,
            (Kind::ExtReal, Value::ExtReal(x), Value::ExtReal(y)) => *x == f64::INFINITY || x > y,
            (Kind::Unit, Value::Unit(x), Value::Unit(y)) => *x == 1.0 || x > y,
            (Kind::Errors, Value::Errors(x), Value::Errors(y)) => *x == 0.0 || x < y,
            (Kind::Ddf, Value::Ddf(f), Value::Ddf(g)) => f.way_above(g),
            // Codirected families in a finite lattice contain their meet.
            (Kind::Lattice(l), Value::Lattice(x), Value::Lattice(y)) => l.leq(*y, *x),
            _ => return Err(self.pair_mismatch(a, b)),
        })
    }

    /// Truncated subtraction `q ∸ p = ⋀{r | p + r ≥ q}`.
    pub fn truncated_sub(&self, q: &Value, p: &Value) -> Result<Value, QuantaleError> {
        Ok(match (&self.kind, q, p) {
            (Kind::Truth, Value::Truth(x), Value::Truth(y)) => Value::Truth(*x && !*y),
            (Kind::ExtReal, Value::ExtReal(x), Value::ExtReal(y)) => Value::ExtReal(if *y == f64::INFINITY {
                0.0
            } else if *x == f64::INFINITY {
                f64::INFINITY
            } else {
                (x - y).max(0.0)
            }),
            (Kind::Unit, Value::Unit(x), Value::Unit(y)) => Value::Unit((x - y).max(0.0)),
            (Kind::Errors, Value::Errors(x), Value::Errors(y)) => Value::Errors((x - y + 1.0).min(1.0)),
            (Kind::Ddf, Value::Ddf(f), Value::Ddf(g)) => Value::Ddf(Ddf::truncated_sub(f, g)),
            (Kind::Lattice(l), Value::Lattice(x), Value::Lattice(y)) => Value::Lattice(l.truncated_sub(*x, *y)),
            _ => return Err(self.pair_mismatch(q, p)),
        })
    }

    /// The self-metric `d(x, y) = (y ∸ x) + (x ∸ y)` on the carrier.
    pub fn self_distance(&self, x: &Value, y: &Value) -> Result<Value, QuantaleError> {
        self.add(&self.truncated_sub(y, x)?, &self.truncated_sub(x, y)?)
    }

    /// The `n`-th term of the fixed approximation-from-above sequence:
    /// antitone, every term way above `0`, with meet `0`.
    pub fn safa(&self, n: u32) -> Value {
        let half_n = 0.5f64.powi(n as i32);
        match &self.kind {
            Kind::Truth => Value::Truth(false),
            Kind::ExtReal => Value::ExtReal(half_n),
            Kind::Unit => Value::Unit(half_n),
            Kind::Errors => Value::Errors(1.0 - half_n / 2.0),
            Kind::Ddf => Value::Ddf(Ddf::step(half_n, 1.0 - half_n).expect("valid witness step")),
            // In a finite lattice `≫` is `≥`, so 0 is way above itself.
            Kind::Lattice(l) => Value::Lattice(l.zero()),
        }
    }

    /// Some `δ ≫ 0` with `eps ≫ δ + δ`.
    pub fn halve(&self, eps: &Value) -> Result<Value, QuantaleError> {
        if !self.way_above(eps, &self.zero())? {
            return Err(QuantaleError::Precondition(format!(
                "{} is not way above 0",
                self.format_value(eps)
            )));
        }
        let delta = match (&self.kind, eps) {
            (Kind::ExtReal, Value::ExtReal(x)) => Value::ExtReal(if x.is_infinite() { 1.0 } else { x / 4.0 }),
            (Kind::Unit, Value::Unit(x)) => Value::Unit(x / 4.0),
            // A quarter of the way from eps to the bottom 1.
            (Kind::Errors, Value::Errors(x)) => Value::Errors((3.0 + x) / 4.0),
            (Kind::Truth | Kind::Lattice(_), _) => {
                if self.leq(&self.add(eps, eps)?, eps)? {
                    eps.clone()
                } else {
                    self.zero()
                }
            }
            (Kind::Ddf, Value::Ddf(f)) => {
                let found = (0..=SEARCH_DEPTH).find_map(|k| {
                    let Value::Ddf(u) = self.safa(k) else { unreachable!() };
                    f.way_above(&u.boxplus(&u)).then_some(u)
                });
                match found {
                    Some(u) => Value::Ddf(u),
                    None => {
                        return Err(QuantaleError::Precondition(format!(
                            "no witness within depth {SEARCH_DEPTH} halves {f}"
                        )))
                    }
                }
            }
            _ => return Err(self.mismatch(eps)),
        };
        Ok(delta)
    }

    /// Some `z` with `x ≫ z ≫ y`, found among `y + u_n`.
    pub fn interpolate(&self, x: &Value, y: &Value) -> Result<Option<Value>, QuantaleError> {
        if !self.way_above(x, y)? {
            return Ok(None);
        }
        for n in 0..=SEARCH_DEPTH {
            let z = self.add(y, &self.safa(n))?;
            if self.way_above(x, &z)? && self.way_above(&z, y)? {
                return Ok(Some(z));
            }
        }
        Ok(None)
    }

    /// Renders a value as a literal that [`Quantale::parse_value`] accepts.
    pub fn format_value(&self, v: &Value) -> String {
        match (&self.kind, v) {
            (_, Value::Truth(b)) => if *b { "inf" } else { "0" }.to_string(),
            (_, Value::ExtReal(x)) | (_, Value::Unit(x)) | (_, Value::Errors(x)) => fmt_real(*x),
            (_, Value::Ddf(f)) => f.to_string(),
            (Kind::Lattice(l), Value::Lattice(i)) if *i < l.len() => l.element_name(*i).to_string(),
            (_, Value::Lattice(i)) => format!("#{i}"),
        }
    }

    /// Parses a value literal: `0`/`inf` for truth values, decimals or `inf`
    /// for reals, `[t:v, t:v, …]` (or `eps0`) for distributions, element
    /// names for finite lattices.
    pub fn parse_value(&self, literal: &str) -> Result<Value, QuantaleError> {
        let lit = literal.trim();
        let fail = |reason: String| QuantaleError::Parse {
            quantale: self.name(),
            literal: literal.to_string(),
            reason,
        };
        let real = |s: &str| -> Result<f64, QuantaleError> {
            match s {
                "inf" | "∞" | "+inf" => Ok(f64::INFINITY),
                _ => s.parse::<f64>().map_err(|e| fail(e.to_string())),
            }
        };
        let v = match &self.kind {
            Kind::Truth => match lit {
                "0" | "false" => Value::Truth(false),
                "inf" | "∞" | "true" => Value::Truth(true),
                _ => return Err(fail("expected 0 or inf".into())),
            },
            Kind::ExtReal => Value::ExtReal(real(lit)?),
            Kind::Unit => Value::Unit(real(lit)?),
            Kind::Errors => Value::Errors(real(lit)?),
            Kind::Ddf => Value::Ddf(parse_ddf(lit).map_err(fail)?),
            Kind::Lattice(l) => Value::Lattice(l.id_of(lit).ok_or_else(|| fail("unknown element".into()))?),
        };
        self.check(&v).map_err(|_| fail("outside the carrier".into()))?;
        Ok(v)
    }
}

impl fmt::Display for Quantale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub(crate) fn fmt_real(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{x}")
    }
}

fn parse_ddf(lit: &str) -> Result<Ddf, String> {
    match lit {
        "eps0" | "ε₀" => return Ok(Ddf::eps0()),
        "zero" => return Ok(Ddf::zero()),
        _ => {}
    }
    let body = lit
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| "expected [t:v, …]".to_string())?;
    let mut steps = Vec::new();
    for part in body.split([',', ';']).map(str::trim).filter(|p| !p.is_empty()) {
        let (t, v) = part.split_once(':').ok_or_else(|| format!("step `{part}` lacks `:`"))?;
        let t: f64 = t.trim().parse().map_err(|e| format!("breakpoint `{t}`: {e}"))?;
        let v: f64 = v.trim().parse().map_err(|e| format!("value `{v}`: {e}"))?;
        steps.push((t, v));
    }
    Ddf::new(steps).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn er(x: f64) -> Value {
        Value::ExtReal(x)
    }

    #[test]
    fn ext_real_order_and_meet() {
        let q = Quantale::ext_real();
        assert!(q.leq(&er(2.0), &er(3.0)).unwrap());
        assert_eq!(q.meet(&[er(2.0), er(5.0), er(3.0)]).unwrap(), er(2.0));
        assert_eq!(q.meet(&[]).unwrap(), er(f64::INFINITY));
        assert_eq!(q.join(&[]).unwrap(), er(0.0));
    }

    #[test]
    fn errors_order_is_reversed() {
        let q = Quantale::errors();
        assert!(q.leq(&Value::Errors(0.9), &Value::Errors(0.3)).unwrap());
        assert_eq!(q.meet(&[Value::Errors(0.3), Value::Errors(0.7)]).unwrap(), Value::Errors(0.7));
        let sum = q.add(&Value::Errors(0.7), &Value::Errors(0.6)).unwrap();
        assert!(q.within(&sum, &Value::Errors(0.3), 1e-12).unwrap());
    }

    #[test]
    fn errors_meet_is_greatest_lower_bound_of_pair() {
        // Brute force over a grid: the meet is below both and above every
        // common lower bound.
        let q = Quantale::errors();
        let (a, b) = (Value::Errors(0.3), Value::Errors(0.7));
        let m = q.meet2(&a, &b).unwrap();
        for k in 0..=100 {
            let c = Value::Errors(k as f64 / 100.0);
            if q.leq(&c, &a).unwrap() && q.leq(&c, &b).unwrap() {
                assert!(q.leq(&c, &m).unwrap());
            }
        }
        assert!(q.leq(&m, &a).unwrap() && q.leq(&m, &b).unwrap());
    }

    #[test]
    fn unit_truncated_addition() {
        let q = Quantale::unit();
        assert_eq!(q.add(&Value::Unit(0.8), &Value::Unit(0.5)).unwrap(), Value::Unit(1.0));
    }

    #[test]
    fn ext_real_identity_and_infinity() {
        let q = Quantale::ext_real();
        assert_eq!(q.add(&er(7.5), &er(0.0)).unwrap(), er(7.5));
        assert_eq!(q.add(&er(f64::INFINITY), &er(1.0)).unwrap(), er(f64::INFINITY));
        assert_eq!(q.truncated_sub(&er(f64::INFINITY), &er(3.0)).unwrap(), er(f64::INFINITY));
        assert_eq!(q.truncated_sub(&er(3.0), &er(f64::INFINITY)).unwrap(), er(0.0));
        assert_eq!(q.truncated_sub(&er(f64::INFINITY), &er(f64::INFINITY)).unwrap(), er(0.0));
    }

    #[test]
    fn ext_real_way_above() {
        let q = Quantale::ext_real();
        assert!(q.way_above(&er(0.5), &er(0.2)).unwrap());
        assert!(!q.way_above(&er(0.2), &er(0.2)).unwrap());
        assert!(q.way_above(&er(f64::INFINITY), &er(f64::INFINITY)).unwrap());
        // Not way above 0 at 0 itself.
        assert!(!q.way_above(&er(0.0), &er(0.0)).unwrap());
    }

    #[test]
    fn truncated_sub_examples() {
        let q = Quantale::ext_real();
        assert_eq!(q.truncated_sub(&er(5.0), &er(3.0)).unwrap(), er(2.0));
        assert_eq!(q.truncated_sub(&er(3.0), &er(5.0)).unwrap(), er(0.0));
        let e = Quantale::errors();
        let r = e.truncated_sub(&Value::Errors(0.3), &Value::Errors(0.9)).unwrap();
        assert!(e.within(&r, &Value::Errors(0.4), 1e-12).unwrap());
    }

    #[test]
    fn ddf_bottom_is_below_everything() {
        let q = Quantale::ddf();
        let f = Value::Ddf(Ddf::new(vec![(0.5, 0.3), (2.0, 0.9)]).unwrap());
        assert!(q.leq(&q.zero(), &f).unwrap());
        assert!(q.leq(&f, &q.top()).unwrap());
    }

    #[test]
    fn halve_examples() {
        let q = Quantale::ext_real();
        let d = q.halve(&er(1.0)).unwrap();
        assert_eq!(d, er(0.25));
        assert!(q.way_above(&er(1.0), &er(0.5)).unwrap());
        assert_eq!(q.halve(&er(f64::INFINITY)).unwrap(), er(1.0));
        assert!(matches!(q.halve(&er(0.0)), Err(QuantaleError::Precondition(_))));
        let t = Quantale::truth();
        assert_eq!(t.halve(&Value::Truth(true)).unwrap(), Value::Truth(true));
    }

    #[test]
    fn halve_ddf_clears_both_conditions() {
        let q = Quantale::ddf();
        let eps = Value::Ddf(Ddf::new(vec![(0.25, 0.5), (1.0, 0.75)]).unwrap());
        let d = q.halve(&eps).unwrap();
        assert!(q.way_above(&d, &q.zero()).unwrap());
        assert!(q.way_above(&eps, &q.add(&d, &d).unwrap()).unwrap());
    }

    #[test]
    fn safa_examples() {
        let q = Quantale::ext_real();
        assert_eq!(q.safa(3), er(0.125));
        assert!(q.leq(&q.safa(4), &q.safa(3)).unwrap());
        assert!(q.way_above(&q.safa(3), &q.zero()).unwrap());
        let prefix: Vec<Value> = (0..=20).map(|n| q.safa(n)).collect();
        assert!(q.leq(&q.meet(&prefix).unwrap(), &er(1e-6)).unwrap());
        let e = Quantale::errors();
        assert_eq!(e.safa(0), Value::Errors(0.5));
        assert!(e.way_above(&e.safa(0), &e.zero()).unwrap());
    }

    #[test]
    fn literals_round_trip() {
        let q = Quantale::ddf();
        let v = q.parse_value("[0.5:0.25, 1:1]").unwrap();
        assert_eq!(q.format_value(&v), "[0.5:0.25, 1:1]");
        assert_eq!(q.parse_value("eps0").unwrap(), q.zero());
        assert_eq!(Quantale::ext_real().parse_value("inf").unwrap(), er(f64::INFINITY));
        assert!(Quantale::unit().parse_value("1.5").is_err());
        assert!(Quantale::truth().parse_value("1").is_err());
    }

    #[test]
    fn mismatched_instances_are_errors() {
        let q = Quantale::ext_real();
        assert!(matches!(q.leq(&er(1.0), &Value::Unit(0.5)), Err(QuantaleError::Mismatch { .. })));
    }
}
