//! Finite `V`-valued (pseudo)metric spaces.
//!
//! A [`VSpace`] is a named point set with a full distance matrix. Nothing
//! is enforced at construction beyond carrier membership; the axioms are
//! reported by [`check_axioms`], and partial spaces (nonzero self-distance)
//! share the same type.

use thiserror::Error;

use crate::quantale::{Kind, Quantale, QuantaleError, Value};
use crate::report::{Check, Report};

/// Default cap on the number of points a product may have.
pub const DEFAULT_PRODUCT_BOUND: usize = 4096;

/// Default prefix depth for sequence diagnostics.
pub const DEFAULT_DEPTH: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("distance matrix has {rows} rows for {points} points, or a row of the wrong length")]
    NotSquare { points: usize, rows: usize },
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("product would have {0} points, above the bound {1}")]
    TooLarge(usize, usize),
    #[error("quantale `{0}` required, found `{1}`")]
    WrongQuantale(String, String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VSpace {
    q: Quantale,
    names: Vec<String>,
    dist: Vec<Value>,
}

impl VSpace {
    pub fn new(q: Quantale, names: Vec<String>, rows: Vec<Vec<Value>>) -> Result<Self, SpaceError> {
        let n = names.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(SpaceError::NotSquare { points: n, rows: rows.len() });
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(SpaceError::DuplicatePoint(a.clone()));
            }
        }
        let dist: Vec<Value> = rows.into_iter().flatten().collect();
        for v in &dist {
            q.check(v)?;
        }
        Ok(VSpace { q, names, dist })
    }

    pub fn from_fn(
        q: Quantale,
        names: Vec<String>,
        mut d: impl FnMut(usize, usize) -> Result<Value, QuantaleError>,
    ) -> Result<Self, SpaceError> {
        let n = names.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| d(i, j)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(q, names, rows)
    }

    pub fn quantale(&self) -> &Quantale {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, SpaceError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| SpaceError::UnknownPoint(name.to_string()))
    }

    pub fn dist(&self, i: usize, j: usize) -> &Value {
        &self.dist[i * self.len() + j]
    }

    pub fn set_dist(&mut self, i: usize, j: usize, v: Value) -> Result<(), SpaceError> {
        self.q.check(&v)?;
        let n = self.len();
        self.dist[i * n + j] = v;
        Ok(())
    }

    /// The induced subspace on `points`, in the given order.
    pub fn subspace(&self, points: &[usize]) -> VSpace {
        let names = points.iter().map(|&i| self.names[i].clone()).collect();
        let dist = points
            .iter()
            .flat_map(|&i| points.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.dist(i, j).clone())
            .collect();
        VSpace { q: self.q.clone(), names, dist }
    }

    /// Renders `d(i, j)` for witnesses.
    pub fn show(&self, i: usize, j: usize) -> String {
        format!("d({},{})={}", self.names[i], self.names[j], self.q.format_value(self.dist(i, j)))
    }
}

/// Reflexivity, symmetry, subadditivity (each required for a pseudometric)
/// and separation (reported, not required).
pub fn check_axioms(space: &VSpace) -> Result<Report, QuantaleError> {
    let q = space.quantale();
    let n = space.len();
    let zero = q.zero();
    let mut report = Report::new("space axioms");
    report.info("quantale", q.name());
    report.info("points", n);

    let mut refl = Check::new("reflexivity");
    for i in 0..n {
        refl.record(q.eq(space.dist(i, i), &zero)?, || space.show(i, i));
    }
    report.push(refl);
    report.push(symmetry_check(space)?);
    report.push(subadditivity_check(space)?);

    let mut sep = Check::new("separation").informational();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sep.record(!q.eq(space.dist(i, j), &zero)?, || space.show(i, j));
            }
        }
    }
    report.push(sep);
    Ok(report)
}

pub(crate) fn symmetry_check(space: &VSpace) -> Result<Check, QuantaleError> {
    let q = space.quantale();
    let mut c = Check::new("symmetry");
    for i in 0..space.len() {
        for j in i + 1..space.len() {
            c.record(q.eq(space.dist(i, j), space.dist(j, i))?, || {
                format!("{} {}", space.show(i, j), space.show(j, i))
            });
        }
    }
    Ok(c)
}

pub(crate) fn subadditivity_check(space: &VSpace) -> Result<Check, QuantaleError> {
    let q = space.quantale();
    let n = space.len();
    let mut c = Check::new("subadditivity");
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let via = q.add(space.dist(x, z), space.dist(z, y))?;
                c.record(q.leq(space.dist(x, y), &via)?, || {
                    format!(
                        "({},{},{}) {} > {} + {}",
                        space.name(x),
                        space.name(y),
                        space.name(z),
                        space.show(x, y),
                        space.show(x, z),
                        space.show(z, y)
                    )
                });
            }
        }
    }
    Ok(c)
}

/// All `k`-tuples in lexicographic order.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// The join of componentwise distances between two tuples.
pub fn tuple_dist(space: &VSpace, a: &[usize], b: &[usize]) -> Result<Value, QuantaleError> {
    let q = space.quantale();
    a.iter()
        .zip(b)
        .try_fold(q.zero(), |acc, (&x, &y)| q.join2(&acc, space.dist(x, y)))
}

/// The space of `k`-tuples with the join of componentwise distances.
pub fn product_space(space: &VSpace, k: usize, bound: usize) -> Result<VSpace, SpaceError> {
    if k == 0 {
        return Err(SpaceError::Precondition("arity must be at least 1".into()));
    }
    let size = space
        .len()
        .checked_pow(k as u32)
        .filter(|&s| s <= bound)
        .ok_or(SpaceError::TooLarge(space.len().saturating_pow(k as u32), bound))?;
    let tups = tuples(space.len(), k);
    debug_assert_eq!(tups.len(), size);
    let names = tups
        .iter()
        .map(|t| {
            if k == 1 {
                space.name(t[0]).to_string()
            } else {
                let parts: Vec<&str> = t.iter().map(|&i| space.name(i)).collect();
                format!("({})", parts.join(","))
            }
        })
        .collect();
    VSpace::from_fn(space.quantale().clone(), names, |i, j| tuple_dist(space, &tups[i], &tups[j]))
}

/// The quantale's own metric `d(x, y) = (y ∸ x) + (x ∸ y)` on sample points.
/// Repeated samples are merged.
pub fn self_space(q: &Quantale, samples: &[Value]) -> Result<VSpace, SpaceError> {
    let mut pts: Vec<Value> = Vec::new();
    for v in samples {
        q.check(v)?;
        if !pts.contains(v) {
            pts.push(v.clone());
        }
    }
    let mut names: Vec<String> = Vec::new();
    for (i, v) in pts.iter().enumerate() {
        let base = q.format_value(v);
        names.push(if names.contains(&base) { format!("{base}#{i}") } else { base });
    }
    VSpace::from_fn(q.clone(), names, |i, j| q.self_distance(&pts[i], &pts[j]))
}

/// `B_ε(x) = {y | ε ≫ d(x, y)}`.
pub fn open_ball(space: &VSpace, center: usize, eps: &Value) -> Result<Vec<usize>, SpaceError> {
    let q = space.quantale();
    if !q.way_above(eps, &q.zero())? {
        return Err(SpaceError::Precondition(format!("{} is not way above 0", q.format_value(eps))));
    }
    let mut ball = Vec::new();
    for y in 0..space.len() {
        if q.way_above(eps, space.dist(center, y))? {
            ball.push(y);
        }
    }
    Ok(ball)
}

/// An eventually periodic sequence of point indices: the prefix, then the
/// cycle repeated forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSequence {
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

impl PointSequence {
    pub fn new(prefix: Vec<usize>, cycle: Vec<usize>) -> Result<Self, SpaceError> {
        if cycle.is_empty() {
            return Err(SpaceError::Precondition("sequence cycle must be nonempty".into()));
        }
        Ok(PointSequence { prefix, cycle })
    }

    pub fn constant(x: usize) -> Self {
        PointSequence { prefix: Vec::new(), cycle: vec![x] }
    }

    pub fn at(&self, n: usize) -> usize {
        match self.prefix.get(n) {
            Some(&x) => x,
            None => self.cycle[(n - self.prefix.len()) % self.cycle.len()],
        }
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    fn check_points(&self, space: &VSpace) -> Result<(), SpaceError> {
        match self.prefix.iter().chain(&self.cycle).find(|&&x| x >= space.len()) {
            Some(x) => Err(SpaceError::UnknownPoint(format!("#{x}"))),
            None => Ok(()),
        }
    }
}

/// Outcome of a sequence diagnostic at one threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsVerdict {
    pub eps: Value,
    /// Least index from which the condition holds, if found within depth.
    pub from: Option<usize>,
}

/// The default thresholds `u_0 … u_15`.
pub fn default_eps_list(q: &Quantale) -> Vec<Value> {
    (0..=15).map(|n| q.safa(n)).collect()
}

fn check_eps_list(q: &Quantale, eps: &[Value]) -> Result<(), SpaceError> {
    if eps.is_empty() {
        return Err(SpaceError::Precondition("threshold list is empty".into()));
    }
    for e in eps {
        if !q.way_above(e, &q.zero())? {
            return Err(SpaceError::Precondition(format!("{} is not way above 0", q.format_value(e))));
        }
    }
    Ok(())
}

/// Least `N` such that `ok(n)` holds for every `N ≤ n ≤ depth`, accepted
/// only when the window holds a full period of the sequence.
fn least_tail(depth: usize, period: usize, mut ok: impl FnMut(usize) -> Result<bool, QuantaleError>) -> Result<Option<usize>, QuantaleError> {
    let mut from = None;
    for n in (0..=depth).rev() {
        if !ok(n)? {
            break;
        }
        from = Some(n);
    }
    Ok(from.filter(|&n| depth + 1 - n >= period))
}

/// For each `ε`, the least `N ≤ depth` with `ε ≫ d(x_n, x_m)` for all
/// `N ≤ n, m ≤ depth`. Because the sequence is eventually periodic, the
/// verdict is exact once `depth` covers the prefix plus one period.
pub fn is_cauchy_prefix(space: &VSpace, seq: &PointSequence, depth: usize, eps: &[Value]) -> Result<Vec<EpsVerdict>, SpaceError> {
    let q = space.quantale();
    seq.check_points(space)?;
    check_eps_list(q, eps)?;
    eps.iter()
        .map(|e| {
            let from = least_tail(depth, seq.period(), |n| {
                for m in n..=depth {
                    if !q.way_above(e, space.dist(seq.at(n), seq.at(m)))? {
                        return Ok(false);
                    }
                }
                Ok(true)
            })?;
            Ok(EpsVerdict { eps: e.clone(), from })
        })
        .collect()
}

/// For each `ε`, the least `N ≤ depth` with `x_n ∈ B_ε(limit)` for all
/// `N ≤ n ≤ depth`.
pub fn converges_to(
    space: &VSpace,
    seq: &PointSequence,
    limit: usize,
    depth: usize,
    eps: &[Value],
) -> Result<Vec<EpsVerdict>, SpaceError> {
    let q = space.quantale();
    seq.check_points(space)?;
    if limit >= space.len() {
        return Err(SpaceError::UnknownPoint(format!("#{limit}")));
    }
    check_eps_list(q, eps)?;
    eps.iter()
        .map(|e| {
            let from = least_tail(depth, seq.period(), |n| q.way_above(e, space.dist(limit, seq.at(n))))?;
            Ok(EpsVerdict { eps: e.clone(), from })
        })
        .collect()
}

/// Finite completeness: pairs of distinct points that are closer than every
/// approximation witness `u_0 … u_depth`. A Cauchy sequence can alternate
/// between such a pair without converging in the separated sense, so the
/// space is declared complete only when the list is empty.
pub fn completeness_degenerate_pairs(space: &VSpace, depth: u32) -> Result<Vec<(usize, usize)>, QuantaleError> {
    let q = space.quantale();
    let mut out = Vec::new();
    for x in 0..space.len() {
        for y in x + 1..space.len() {
            let mut close = true;
            for n in 0..=depth {
                if !q.way_above(&q.safa(n), space.dist(x, y))? {
                    close = false;
                    break;
                }
            }
            if close {
                out.push((x, y));
            }
        }
    }
    Ok(out)
}

/// The relation `x ≤_d y ⇔ d(x, y) = 0` on a truth-valued space, with its
/// closure properties reported.
pub fn truth_space_to_relation(space: &VSpace) -> Result<(Vec<(usize, usize)>, Report), SpaceError> {
    let q = space.quantale();
    if !matches!(q.kind(), Kind::Truth) {
        return Err(SpaceError::WrongQuantale("truth".into(), q.name()));
    }
    let n = space.len();
    let mut rel = vec![false; n * n];
    let mut pairs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if *space.dist(x, y) == Value::Truth(false) {
                rel[x * n + y] = true;
                pairs.push((x, y));
            }
        }
    }
    let r = |x: usize, y: usize| rel[x * n + y];
    let mut report = Report::new("induced relation");
    let mut refl = Check::new("reflexive");
    let mut sym = Check::new("symmetric");
    let mut trans = Check::new("transitive");
    for x in 0..n {
        refl.record(r(x, x), || space.name(x).to_string());
        for y in 0..n {
            sym.record(!r(x, y) || r(y, x), || format!("{} {}", space.name(x), space.name(y)));
            for z in 0..n {
                trans.record(!(r(x, y) && r(y, z)) || r(x, z), || {
                    format!("{} {} {}", space.name(x), space.name(y), space.name(z))
                });
            }
        }
    }
    report.push(refl);
    report.push(sym);
    report.push(trans);
    Ok((pairs, report))
}
