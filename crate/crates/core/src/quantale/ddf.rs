//! Left-continuous step functions `[0, ∞) → [0, 1]`: the distance
//! distribution functions.
//!
//! A [`Ddf`] is stored as a list of `(breakpoint, value)` steps. The function
//! takes the value of the last step whose breakpoint lies *strictly* below
//! `t`, and `0` when there is no such step. This makes every representable
//! function monotone and left continuous, with `F(0) = 0`.
//!
//! The quantale order on these functions is the *opposite* of the pointwise
//! order, so the pointwise-largest function `ε₀` (1 on `(0, ∞)`) is the
//! bottom and the zero function is the top.
//!
//! Arithmetic on breakpoints is plain `f64`. It is exact when breakpoints and
//! values are dyadic rationals of moderate size, which is what the sampler
//! emits; all laws are then checked without rounding noise.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DdfError {
    #[error("breakpoint {0} is negative or not finite")]
    BadBreakpoint(f64),
    #[error("breakpoints must be strictly increasing ({0} then {1})")]
    Unsorted(f64, f64),
    #[error("value {0} lies outside [0, 1]")]
    BadValue(f64),
    #[error("values must be nondecreasing ({0} then {1})")]
    Decreasing(f64, f64),
}

/// A distance distribution function in canonical step form.
///
/// Canonical means: breakpoints strictly increasing, values strictly
/// increasing and positive. Two canonical representations denote the same
/// function exactly when they are equal.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Ddf {
    steps: Vec<(f64, f64)>,
}

impl Ddf {
    /// Builds a function from `(breakpoint, value)` steps, validating the
    /// monotonicity invariants and normalizing to canonical form.
    pub fn new(steps: Vec<(f64, f64)>) -> Result<Self, DdfError> {
        for &(t, v) in &steps {
            if !t.is_finite() || t < 0.0 {
                return Err(DdfError::BadBreakpoint(t));
            }
            if !(0.0..=1.0).contains(&v) {
                return Err(DdfError::BadValue(v));
            }
        }
        for w in steps.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(DdfError::Unsorted(w[0].0, w[1].0));
            }
            if w[0].1 > w[1].1 {
                return Err(DdfError::Decreasing(w[0].1, w[1].1));
            }
        }
        Ok(Self::canonical(steps))
    }

    /// Drops redundant steps from an already sorted, monotone list.
    fn canonical(steps: Vec<(f64, f64)>) -> Self {
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(steps.len());
        let mut last = 0.0;
        for (t, v) in steps {
            if v > last {
                out.push((t, v));
                last = v;
            }
        }
        Ddf { steps: out }
    }

    /// Builds the running maximum of arbitrary candidate steps. The value at
    /// `t` is the largest candidate value whose breakpoint is below `t`.
    fn from_candidates(mut cands: Vec<(f64, f64)>) -> Self {
        cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut out: Vec<(f64, f64)> = Vec::new();
        let mut best = 0.0;
        for (t, v) in cands {
            let v = v.min(1.0);
            if v <= best {
                continue;
            }
            best = v;
            match out.last_mut() {
                Some(last) if last.0 == t => last.1 = v,
                _ => out.push((t, v)),
            }
        }
        Ddf { steps: out }
    }

    /// The zero function: top of the quantale.
    pub fn zero() -> Self {
        Ddf { steps: Vec::new() }
    }

    /// `ε₀`, equal to 1 on `(0, ∞)`: bottom of the quantale.
    pub fn eps0() -> Self {
        Ddf {
            steps: vec![(0.0, 1.0)],
        }
    }

    /// Single jump to `value` just after `at`.
    pub fn step(at: f64, value: f64) -> Result<Self, DdfError> {
        Self::new(vec![(at, value)])
    }

    pub fn steps(&self) -> &[(f64, f64)] {
        &self.steps
    }

    pub fn is_zero(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.steps.iter().map(|s| s.0)
    }

    /// `F(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        let idx = self.steps.partition_point(|s| s.0 < t);
        if idx == 0 {
            0.0
        } else {
            self.steps[idx - 1].1
        }
    }

    /// `lim_{s↓t} F(s)`.
    pub fn right_limit(&self, t: f64) -> f64 {
        let idx = self.steps.partition_point(|s| s.0 <= t);
        if idx == 0 {
            0.0
        } else {
            self.steps[idx - 1].1
        }
    }

    /// Pointwise maximum: the quantale meet of two functions.
    pub fn pointwise_max(&self, other: &Ddf) -> Ddf {
        let cands = self.steps.iter().chain(&other.steps).copied().collect();
        Ddf::from_candidates(cands)
    }

    /// Pointwise minimum: the quantale join of two functions.
    pub fn pointwise_min(&self, other: &Ddf) -> Ddf {
        let probes = probe_points(self.breakpoints().chain(other.breakpoints()));
        rebuild(&probes, |t| self.eval(t).min(other.eval(t)))
    }

    /// The sup-convolution `(F ⊞ G)(x) = sup_{u+v≤x} (F(u) + G(v) − 1)`,
    /// clamped below at 0.
    ///
    /// For steps the supremum is attained on breakpoint pairs: the pair of
    /// steps `(a, f)`, `(b, g)` contributes `f + g − 1` for every `x > a + b`.
    /// The implicit step `(0, 0)` on each side accounts for `F(0) = 0`.
    pub fn boxplus(&self, other: &Ddf) -> Ddf {
        let lhs: Vec<(f64, f64)> = std::iter::once((0.0, 0.0)).chain(self.steps.iter().copied()).collect();
        let rhs: Vec<(f64, f64)> = std::iter::once((0.0, 0.0)).chain(other.steps.iter().copied()).collect();
        let mut cands = Vec::with_capacity(lhs.len() * rhs.len());
        for &(a, f) in &lhs {
            for &(b, g) in &rhs {
                let v = f + g - 1.0;
                if v > 0.0 {
                    cands.push((a + b, v));
                }
            }
        }
        Ddf::from_candidates(cands)
    }

    /// Truncated subtraction `q ∸ p`: the pointwise-largest left-continuous
    /// `r` with `p ⊞ r ≤ q` pointwise.
    ///
    /// The constraint unfolds to `r(v) ≤ q(u + v) − p(u) + 1` for all `u`,
    /// so `r` is the left-continuous regularization of
    /// `R(v) = min(1, min_i q⁺(a_i + v) − p_i + 1)` over the steps `(a_i, p_i)`
    /// of `p`, where `q⁺` is the right limit of `q`.
    pub fn truncated_sub(q: &Ddf, p: &Ddf) -> Ddf {
        let raw = |v: f64| -> f64 {
            p.steps
                .iter()
                .map(|&(a, pv)| q.right_limit(a + v) - pv + 1.0)
                .fold(1.0, f64::min)
        };
        let mut cuts: Vec<f64> = vec![0.0];
        for &(c, _) in &q.steps {
            for &(a, _) in &p.steps {
                let d = c - a;
                if d > 0.0 {
                    cuts.push(d);
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        // R is constant on [d_k, d_{k+1}), so its regularization takes the
        // value R(d_k) on (d_k, d_{k+1}].
        let steps = cuts.iter().map(|&d| (d, raw(d).clamp(0.0, 1.0))).collect();
        Ddf::from_candidates(steps)
    }

    /// Whether `self ≥ other − tol` pointwise, i.e. `self ≤ other` in the
    /// quantale order up to `tol`.
    pub fn dominates(&self, other: &Ddf, tol: f64) -> bool {
        probe_points(self.breakpoints().chain(other.breakpoints()))
            .into_iter()
            .all(|t| self.eval(t) >= other.eval(t) - tol)
    }

    /// Shift-and-margin criterion for `self ≫ other`: there are `δ, ε > 0`
    /// with `F(t) = 0` or `F(t) + ε ≤ G(t − δ)` for every `t`, where `G`
    /// vanishes on `(−∞, 0]`.
    ///
    /// The truth of the shifted comparison is constant for `δ` below the
    /// smallest positive gap between a breakpoint of `F` and one of `G`
    /// (or 0), so one representative shift decides it; finiteness of the
    /// value sets then supplies the margin `ε` from strictness.
    pub fn way_above(&self, other: &Ddf) -> bool {
        if self.is_zero() {
            return true;
        }
        let mut gap = f64::INFINITY;
        for c in self.breakpoints() {
            for c2 in std::iter::once(0.0).chain(other.breakpoints()) {
                let d = c - c2;
                if d > 0.0 && d < gap {
                    gap = d;
                }
            }
        }
        let shift = if gap.is_finite() { gap / 2.0 } else { 1.0 };
        let probes = probe_points(self.breakpoints().chain(other.breakpoints().map(|c| c + shift)));
        probes.into_iter().all(|t| {
            let f = self.eval(t);
            f == 0.0 || f < other.eval(t - shift)
        })
    }

    /// Lévy-style closeness: `G(t) ≤ F(t + h) + h` and `F(t) ≤ G(t + h) + h`
    /// for all `t`, up to `tol` on values.
    pub fn levy_within(&self, other: &Ddf, h: f64, tol: f64) -> bool {
        one_sided_levy(self, other, h, tol) && one_sided_levy(other, self, h, tol)
    }
}

/// `G(t) ≤ F(t + h) + h + tol` for all `t > 0`.
fn one_sided_levy(f: &Ddf, g: &Ddf, h: f64, tol: f64) -> bool {
    let probes = probe_points(g.breakpoints().chain(f.breakpoints().map(|c| c - h)).filter(|&c| c > 0.0));
    probes.into_iter().all(|t| g.eval(t) <= f.eval(t + h) + h + tol)
}

/// Sorted distinct critical points plus one sentinel beyond the last.
/// Step functions built from these breakpoints are constant on each
/// `(p_k, p_{k+1}]`, so evaluating at every returned point covers `(0, ∞)`.
fn probe_points(points: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut pts: Vec<f64> = points.filter(|p| *p > 0.0).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let sentinel = pts.last().map_or(1.0, |l| l + 1.0);
    pts.push(sentinel);
    pts
}

/// Rebuilds a step function from its values at [`probe_points`].
fn rebuild(probes: &[f64], f: impl Fn(f64) -> f64) -> Ddf {
    let mut steps = Vec::with_capacity(probes.len());
    let mut prev = 0.0;
    for &p in probes {
        steps.push((prev, f(p)));
        prev = p;
    }
    Ddf::canonical(steps)
}

impl fmt::Display for Ddf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (t, v)) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}:{v}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(steps: &[(f64, f64)]) -> Ddf {
        Ddf::new(steps.to_vec()).unwrap()
    }

    #[test]
    fn eval_is_left_continuous() {
        let f = d(&[(1.0, 0.5), (2.0, 1.0)]);
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.eval(1.0), 0.0);
        assert_eq!(f.eval(1.0 + 1e-12), 0.5);
        assert_eq!(f.eval(2.0), 0.5);
        assert_eq!(f.eval(2.5), 1.0);
        assert_eq!(f.right_limit(1.0), 0.5);
    }

    #[test]
    fn canonical_form_drops_flat_and_zero_steps() {
        let f = d(&[(0.0, 0.0), (1.0, 0.5), (2.0, 0.5), (3.0, 0.75)]);
        assert_eq!(f.steps(), &[(1.0, 0.5), (3.0, 0.75)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Ddf::new(vec![(1.0, 0.5), (1.0, 0.6)]), Err(DdfError::Unsorted(1.0, 1.0)));
        assert_eq!(Ddf::new(vec![(1.0, 0.5), (2.0, 0.4)]), Err(DdfError::Decreasing(0.5, 0.4)));
        assert_eq!(Ddf::new(vec![(-1.0, 0.5)]), Err(DdfError::BadBreakpoint(-1.0)));
        assert_eq!(Ddf::new(vec![(1.0, 1.5)]), Err(DdfError::BadValue(1.5)));
    }

    #[test]
    fn boxplus_identity_is_eps0() {
        let g = d(&[(0.5, 0.25), (1.5, 0.75)]);
        assert_eq!(Ddf::eps0().boxplus(&g), g);
        assert_eq!(g.boxplus(&Ddf::eps0()), g);
    }

    #[test]
    fn boxplus_of_unit_jumps_adds_positions() {
        let f = d(&[(1.0, 1.0)]);
        assert_eq!(f.boxplus(&f), d(&[(2.0, 1.0)]));
    }

    #[test]
    fn boxplus_with_zero_is_zero() {
        let g = d(&[(0.5, 0.25), (1.5, 0.75)]);
        assert!(Ddf::zero().boxplus(&g).is_zero());
    }

    #[test]
    fn truncated_sub_by_eps0_is_identity() {
        let q = d(&[(0.5, 0.25), (1.5, 0.75)]);
        assert_eq!(Ddf::truncated_sub(&q, &Ddf::eps0()), q);
        assert_eq!(Ddf::truncated_sub(&q, &Ddf::zero()), Ddf::eps0());
    }

    #[test]
    fn safa_style_step_is_way_above_eps0() {
        let u = d(&[(0.125, 0.875)]);
        assert!(u.way_above(&Ddf::eps0()));
        // A function positive right after 0 cannot clear any shift.
        assert!(!d(&[(0.0, 0.5)]).way_above(&Ddf::eps0()));
        // Reaching 1 leaves no margin below ε₀.
        assert!(!d(&[(1.0, 1.0)]).way_above(&Ddf::eps0()));
        assert!(Ddf::zero().way_above(&Ddf::zero()));
        assert!(!Ddf::eps0().way_above(&Ddf::eps0()));
    }

    #[test]
    fn levy_closeness_of_small_shift() {
        let f = d(&[(1.0, 0.5)]);
        let g = d(&[(1.0 + 2f64.powi(-30), 0.5 - 2f64.powi(-30))]);
        assert!(f.levy_within(&g, 2f64.powi(-30), 0.0));
        assert!(!f.levy_within(&g, 2f64.powi(-32), 0.0));
    }

    #[test]
    fn pointwise_min_and_max() {
        let f = d(&[(1.0, 0.5), (3.0, 1.0)]);
        let g = d(&[(2.0, 0.75)]);
        assert_eq!(f.pointwise_max(&g), d(&[(1.0, 0.5), (2.0, 0.75), (3.0, 1.0)]));
        assert_eq!(f.pointwise_min(&g), d(&[(2.0, 0.5), (3.0, 0.75)]));
    }
}
