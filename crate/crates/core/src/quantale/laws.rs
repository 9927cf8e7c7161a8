//! The quantale law suite: order, monoid, way-above, residuation and
//! approximation laws, checked exhaustively on finite instances and on
//! seeded samples elsewhere.

use rand::Rng;

use super::refute::{standard_families, way_above_refute};
use super::{Kind, Quantale, QuantaleError, Value};
use crate::report::{Check, Report};
use crate::sample::Sampler;

/// Finite instances are enumerated exhaustively up to this many tuples.
const EXHAUSTIVE_CAP: usize = 300_000;

/// Depth for the approximation-from-above premise.
const APPROX_DEPTH: u32 = 20;

/// Depth at which `u_n` is below the comparison tolerance.
const CLOSENESS_DEPTH: u32 = 30;

/// Terms of the approximation sequence checked individually. Beyond about
/// 50 the float payloads of the bounded instances round onto the bottom.
const SAFA_CHECK_DEPTH: u32 = 48;

type R<T> = Result<T, QuantaleError>;

enum Outcome {
    Vacuous,
    Pass,
    Fail(String),
}

use Outcome::{Fail, Pass, Vacuous};

/// How random tuples are nudged so that a law's premise holds often enough.
#[derive(Clone, Copy)]
enum Shape {
    Plain,
    /// `t[0] = t[1] + u_n`.
    WayAbove,
    /// `t[0] ≤ t[1] ≤ t[2]` by meets.
    Chain3,
    /// `x ≤ z ≪ y ≤ w` for `(x, z, y, w)`.
    Sandwich,
    /// `t[0] = t[2] + u_n`, `t[1] = t[2] + u_m`.
    TwoAbove,
    /// `t[0] = t[1] + u_0 + u_n`.
    FarAbove,
    /// `t[0] = t[0] + u_n` with `n ≥ 1`.
    AboveZero,
}

struct Law {
    name: &'static str,
    arity: usize,
    shape: Shape,
    informational: bool,
    run: fn(&Quantale, &[Value]) -> R<Outcome>,
}

fn law(name: &'static str, arity: usize, shape: Shape, run: fn(&Quantale, &[Value]) -> R<Outcome>) -> Law {
    Law { name, arity, shape, informational: false, run }
}

fn verdict(ok: bool, q: &Quantale, labels: &[&str], vals: &[&Value]) -> Outcome {
    if ok {
        Pass
    } else {
        let parts: Vec<String> = labels
            .iter()
            .zip(vals)
            .map(|(l, v)| format!("{l}={}", q.format_value(v)))
            .collect();
        Fail(parts.join(" "))
    }
}

fn laws_for(q: &Quantale) -> Vec<Law> {
    let mut laws = vec![
        law("order-reflexive", 1, Shape::Plain, |q, t| {
            Ok(verdict(q.leq(&t[0], &t[0])?, q, &["a"], &[&t[0]]))
        }),
        law("order-antisymmetric", 2, Shape::Plain, |q, t| {
            let (a, b) = (&t[0], &t[1]);
            if !(q.leq(a, b)? && q.leq(b, a)?) {
                return Ok(Vacuous);
            }
            Ok(verdict(q.within(a, b, q.tol())?, q, &["a", "b"], &[a, b]))
        }),
        law("order-transitive", 3, Shape::Chain3, |q, t| {
            let (a, b, c) = (&t[0], &t[1], &t[2]);
            if !(q.leq(a, b)? && q.leq(b, c)?) {
                return Ok(Vacuous);
            }
            Ok(verdict(q.leq(a, c)?, q, &["a", "b", "c"], &[a, b, c]))
        }),
        law("order-bounds", 1, Shape::Plain, |q, t| {
            let ok = q.leq(&q.zero(), &t[0])? && q.leq(&t[0], &q.top())?;
            Ok(verdict(ok, q, &["a"], &[&t[0]]))
        }),
        law("meet-greatest-lower-bound", 3, Shape::Plain, |q, t| {
            let (a, b, c) = (&t[0], &t[1], &t[2]);
            let m = q.meet2(a, b)?;
            let mut ok = q.leq(&m, a)? && q.leq(&m, b)?;
            if q.leq(c, a)? && q.leq(c, b)? {
                ok &= q.leq(c, &m)?;
            }
            Ok(verdict(ok, q, &["a", "b", "c"], &[a, b, c]))
        }),
        law("join-least-upper-bound", 3, Shape::Plain, |q, t| {
            let (a, b, c) = (&t[0], &t[1], &t[2]);
            let j = q.join2(a, b)?;
            let mut ok = q.leq(a, &j)? && q.leq(b, &j)?;
            if q.leq(a, c)? && q.leq(b, c)? {
                ok &= q.leq(&j, c)?;
            }
            Ok(verdict(ok, q, &["a", "b", "c"], &[a, b, c]))
        }),
        law("add-associative", 3, Shape::Plain, |q, t| {
            let (a, b, c) = (&t[0], &t[1], &t[2]);
            let l = q.add(&q.add(a, b)?, c)?;
            let r = q.add(a, &q.add(b, c)?)?;
            Ok(verdict(q.eq(&l, &r)?, q, &["a", "b", "c"], &[a, b, c]))
        }),
        law("add-commutative", 2, Shape::Plain, |q, t| {
            let (a, b) = (&t[0], &t[1]);
            Ok(verdict(q.eq(&q.add(a, b)?, &q.add(b, a)?)?, q, &["a", "b"], &[a, b]))
        }),
        law("add-identity", 1, Shape::Plain, |q, t| {
            let a = &t[0];
            let z = q.zero();
            let ok = q.eq(&q.add(a, &z)?, a)? && q.eq(&q.add(&z, a)?, a)?;
            Ok(verdict(ok, q, &["a"], &[a]))
        }),
        law("add-distributes-over-meets", 4, Shape::Plain, |q, t| {
            let a = &t[0];
            let s = &t[1..];
            let lhs = q.add(a, &q.meet(s)?)?;
            let sums = s.iter().map(|x| q.add(a, x)).collect::<R<Vec<_>>>()?;
            let mut ok = q.eq(&lhs, &q.meet(&sums)?)?;
            for pair in [&s[..1], &s[..2]] {
                let lhs = q.add(a, &q.meet(pair)?)?;
                let sums = pair.iter().map(|x| q.add(a, x)).collect::<R<Vec<_>>>()?;
                ok &= q.eq(&lhs, &q.meet(&sums)?)?;
            }
            // The empty meet: a + top = top.
            ok &= q.eq(&q.add(a, &q.top())?, &q.top())?;
            Ok(verdict(ok, q, &["a", "s1", "s2", "s3"], &[a, &s[0], &s[1], &s[2]]))
        }),
        law("way-above-implies-order", 2, Shape::WayAbove, |q, t| {
            let (x, y) = (&t[0], &t[1]);
            if !q.way_above(x, y)? {
                return Ok(Vacuous);
            }
            Ok(verdict(q.leq(y, x)?, q, &["x", "y"], &[x, y]))
        }),
        law("way-above-interpolates", 2, Shape::WayAbove, |q, t| {
            let (x, y) = (&t[0], &t[1]);
            if !q.way_above(x, y)? {
                return Ok(Vacuous);
            }
            let ok = match q.interpolate(x, y)? {
                Some(z) => q.way_above(x, &z)? && q.way_above(&z, y)?,
                None => false,
            };
            Ok(verdict(ok, q, &["x", "y"], &[x, y]))
        }),
        law("way-above-sandwich", 4, Shape::Sandwich, |q, t| {
            let (x, z, y, w) = (&t[0], &t[1], &t[2], &t[3]);
            if !(q.leq(x, z)? && q.way_above(y, z)? && q.leq(y, w)?) {
                return Ok(Vacuous);
            }
            Ok(verdict(q.way_above(w, x)?, q, &["x", "z", "y", "w"], &[x, z, y, w]))
        }),
        law("way-above-closed-under-meet", 3, Shape::TwoAbove, |q, t| {
            let (x, y, z) = (&t[0], &t[1], &t[2]);
            if !(q.way_above(x, z)? && q.way_above(y, z)?) {
                return Ok(Vacuous);
            }
            Ok(verdict(q.way_above(&q.meet2(x, y)?, z)?, q, &["x", "y", "z"], &[x, y, z]))
        }),
        law("residuation-adjunction", 3, Shape::Plain, |q, t| {
            let (qq, p, r) = (&t[0], &t[1], &t[2]);
            let lhs = q.leq(qq, &q.add(p, r)?)?;
            let rhs = q.leq(&q.truncated_sub(qq, p)?, r)?;
            Ok(verdict(lhs == rhs, q, &["q", "p", "r"], &[qq, p, r]))
        }),
        law("truncation-zero-iff-below", 2, Shape::Plain, |q, t| {
            let (qq, p) = (&t[0], &t[1]);
            let zero = q.eq(&q.truncated_sub(qq, p)?, &q.zero())?;
            Ok(verdict(zero == q.leq(qq, p)?, q, &["q", "p"], &[qq, p]))
        }),
        law("truncation-recovers", 2, Shape::Plain, |q, t| {
            let (qq, p) = (&t[0], &t[1]);
            let ok = q.leq(qq, &q.add(p, &q.truncated_sub(qq, p)?)?)?;
            Ok(verdict(ok, q, &["q", "p"], &[qq, p]))
        }),
        law("truncation-cancels", 2, Shape::Plain, |q, t| {
            let (qq, p) = (&t[0], &t[1]);
            let ok = q.leq(&q.truncated_sub(&q.add(p, qq)?, p)?, qq)?;
            Ok(verdict(ok, q, &["q", "p"], &[qq, p]))
        }),
        law("add-preserves-way-above", 3, Shape::WayAbove, |q, t| {
            let (x, y, z) = (&t[0], &t[1], &t[2]);
            if !q.way_above(x, y)? {
                return Ok(Vacuous);
            }
            let ok = q.way_above(&q.add(x, z)?, &q.add(y, z)?)?;
            Ok(verdict(ok, q, &["x", "y", "z"], &[x, y, z]))
        }),
        law("approximation-from-above", 2, Shape::FarAbove, |q, t| {
            let (x, y) = (&t[0], &t[1]);
            for n in 0..=APPROX_DEPTH {
                if !q.way_above(x, &q.add(y, &q.safa(n))?)? {
                    return Ok(Vacuous);
                }
            }
            Ok(verdict(q.way_above(x, y)?, q, &["x", "y"], &[x, y]))
        }),
        law("halving", 1, Shape::AboveZero, |q, t| {
            let e = &t[0];
            if !q.way_above(e, &q.zero())? {
                return Ok(Vacuous);
            }
            let d = q.halve(e)?;
            let ok = q.way_above(&d, &q.zero())? && q.way_above(e, &q.add(&d, &d)?)?;
            Ok(verdict(ok, q, &["eps", "delta"], &[e, &d]))
        }),
        law("closeness", 1, Shape::Plain, |q, t| {
            let y = &t[0];
            let ok = if let Some(all) = q.elements() {
                let mut terms = Vec::new();
                for e in &all {
                    if q.way_above(e, &q.zero())? {
                        terms.push(q.add(y, e)?);
                    }
                }
                q.meet(&terms)? == *y
            } else {
                let terms = (0..=CLOSENESS_DEPTH).map(|n| q.add(y, &q.safa(n))).collect::<R<Vec<_>>>()?;
                q.within(&q.meet(&terms)?, y, q.tol())?
            };
            Ok(verdict(ok, q, &["y"], &[y]))
        }),
        law("way-above-sound", 2, Shape::WayAbove, |q, t| {
            let (a, b) = (&t[0], &t[1]);
            if !q.way_above(a, b)? {
                return Ok(Vacuous);
            }
            let fams = standard_families(q, b)?;
            let hit = way_above_refute(q, a, b, &fams).map_err(|e| QuantaleError::Precondition(e.to_string()))?;
            Ok(match hit {
                None => Pass,
                Some(i) => Fail(format!(
                    "a={} b={} refuted-by={}",
                    q.format_value(a),
                    q.format_value(b),
                    fams[i].label(q)
                )),
            })
        }),
    ];
    if !matches!(q.kind(), Kind::Ddf) {
        laws.push(law("way-above-zero", 1, Shape::Plain, |q, t| {
            let x = &t[0];
            // On the infinite instances 0 itself is excluded.
            if !q.is_finite() && q.eq(x, &q.zero())? {
                return Ok(Vacuous);
            }
            Ok(verdict(q.way_above(x, &q.zero())?, q, &["x"], &[x]))
        }));
    }
    laws.push(Law {
        name: "way-above-exact",
        arity: 2,
        shape: Shape::WayAbove,
        // The distribution criterion is only claimed to be sufficient.
        informational: matches!(q.kind(), Kind::Ddf),
        run: |q, t| {
            let (a, b) = (&t[0], &t[1]);
            if q.way_above(a, b)? {
                return Ok(Vacuous);
            }
            let fams = standard_families(q, b)?;
            let hit = way_above_refute(q, a, b, &fams).map_err(|e| QuantaleError::Precondition(e.to_string()))?;
            Ok(verdict(hit.is_some(), q, &["a", "b"], &[a, b]))
        },
    });
    laws
}

/// Generates the tuples a law is checked on.
struct Tuples<'q> {
    q: &'q Quantale,
    sampler: Sampler<'q>,
    budget: usize,
}

impl Tuples<'_> {
    fn exhaustive(&self, arity: usize) -> Option<Vec<Vec<Value>>> {
        let els = self.q.elements()?;
        let total = els.len().checked_pow(arity as u32)?;
        if total > EXHAUSTIVE_CAP {
            return None;
        }
        let mut out = vec![Vec::new()];
        for _ in 0..arity {
            out = out
                .into_iter()
                .flat_map(|t| {
                    els.iter().map(move |e| {
                        let mut t = t.clone();
                        t.push(e.clone());
                        t
                    })
                })
                .collect();
        }
        Some(out)
    }

    fn sampled(&mut self, arity: usize, shape: Shape) -> R<Vec<Vec<Value>>> {
        let mut out = Vec::with_capacity(self.budget);
        // All boundary combinations first, up to a quarter of the budget.
        let boundary = self.sampler.boundary().to_vec();
        let mut idx = vec![0usize; arity];
        'outer: while out.len() < self.budget / 4 {
            out.push(idx.iter().map(|&i| boundary[i].clone()).collect());
            for k in (0..arity).rev() {
                idx[k] += 1;
                if idx[k] < boundary.len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
        while out.len() < self.budget {
            let t: Vec<Value> = (0..arity).map(|_| self.sampler.mixed()).collect();
            let t = if self.sampler.rng().gen_bool(0.5) { self.shape(t, shape)? } else { t };
            out.push(t);
        }
        Ok(out)
    }

    fn shape(&mut self, mut t: Vec<Value>, shape: Shape) -> R<Vec<Value>> {
        let q = self.q;
        let u = |s: &mut Self, lo: u32| q.safa(s.sampler.rng().gen_range(lo..=12));
        match shape {
            Shape::Plain => {}
            Shape::WayAbove => t[0] = q.add(&t[1], &u(self, 0))?,
            Shape::Chain3 => {
                t[1] = q.meet2(&t[1], &t[2])?;
                t[0] = q.meet2(&t[0], &t[1])?;
            }
            Shape::Sandwich => {
                t[2] = q.add(&t[1], &u(self, 0))?;
                t[0] = q.meet2(&t[0], &t[1])?;
                t[3] = q.join2(&t[3], &t[2])?;
            }
            Shape::TwoAbove => {
                t[0] = q.add(&t[2], &u(self, 0))?;
                t[1] = q.add(&t[2], &u(self, 0))?;
            }
            Shape::FarAbove => t[0] = q.add(&q.add(&t[1], &q.safa(0))?, &u(self, 1))?,
            Shape::AboveZero => t[0] = q.add(&t[0], &u(self, 1))?,
        }
        Ok(t)
    }
}

/// Runs the full law suite. Failures are report content, not errors.
pub fn check_quantale_laws(q: &Quantale, budget: usize, seed: u64) -> R<Report> {
    let mut report = Report::new(format!("quantale laws: {}", q.name()));
    report.info("quantale", q.name());
    report.info("tolerance", q.tol());
    let mut tuples = Tuples {
        q,
        sampler: Sampler::new(q, seed),
        budget: budget.max(1),
    };
    let exhaustive_mode = tuples.exhaustive(1).is_some();
    report.info("mode", if exhaustive_mode { "exhaustive" } else { "sampled" });
    if !exhaustive_mode {
        report.info("budget", budget);
        report.info("seed", seed);
    }
    for law in laws_for(q) {
        let cases = match tuples.exhaustive(law.arity) {
            Some(all) => all,
            None => tuples.sampled(law.arity, law.shape)?,
        };
        let mut check = Check::new(law.name);
        if law.informational {
            check = check.informational();
        }
        let mut vacuous = 0u64;
        for t in &cases {
            match (law.run)(q, t)? {
                Vacuous => vacuous += 1,
                Pass => check.pass(),
                Fail(w) => check.fail(w),
            }
        }
        if vacuous > 0 {
            let note = format!("premise held in {} of {} tuples", check.cases, check.cases + vacuous);
            check = check.with_note(note);
        }
        report.push(check);
    }
    report.push(safa_check(q)?);
    Ok(report)
}

fn safa_check(q: &Quantale) -> R<Check> {
    let mut c = Check::new("safa-sequence");
    for n in 0..SAFA_CHECK_DEPTH {
        let (a, b) = (q.safa(n), q.safa(n + 1));
        c.record(q.leq(&b, &a)?, || format!("not antitone at n={n}"));
        c.record(q.way_above(&a, &q.zero())?, || format!("u_{n} not way above 0"));
    }
    let prefix: Vec<Value> = (0..=CLOSENESS_DEPTH).map(|n| q.safa(n)).collect();
    let m = q.meet(&prefix)?;
    c.record(q.within(&m, &q.zero(), q.tol())?, || format!("prefix meet {} not within tolerance of 0", q.format_value(&m)));
    Ok(c)
}
