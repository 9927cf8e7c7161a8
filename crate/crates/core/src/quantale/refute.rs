//! Falsification oracle for the way-above relation.
//!
//! `a ≫ b` fails exactly when some codirected family with meet `≤ b` has no
//! member `≤ a`. Sampled families can only refute, never confirm.

use thiserror::Error;

use super::{Ddf, Kind, Quantale, QuantaleError, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// A finite set; its meet is computed.
    Finite(Vec<Value>),
    /// A descending chain given by a sampled prefix and its declared meet.
    Chain {
        label: String,
        terms: Vec<Value>,
        meet: Value,
    },
}

impl Family {
    pub fn label(&self, q: &Quantale) -> String {
        match self {
            Family::Finite(vs) => {
                let items: Vec<String> = vs.iter().map(|v| q.format_value(v)).collect();
                format!("{{{}}}", items.join(", "))
            }
            Family::Chain { label, .. } => label.clone(),
        }
    }

    fn members(&self) -> &[Value] {
        match self {
            Family::Finite(vs) => vs,
            Family::Chain { terms, .. } => terms,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RefuteError {
    #[error("family {0} is not codirected")]
    NotCodirected(usize),
    #[error("family {0} has a meet that is not below b")]
    MeetNotBelow(usize),
    #[error("family {0} is empty")]
    Empty(usize),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
}

/// Returns the index of the first family that has no member `≤ a`, after
/// validating every family against `b`.
pub fn way_above_refute(q: &Quantale, a: &Value, b: &Value, families: &[Family]) -> Result<Option<usize>, RefuteError> {
    for (i, fam) in families.iter().enumerate() {
        validate(q, b, i, fam)?;
    }
    // Membership is decided without tolerance: a margin below `tol` still
    // separates a chain term from `a`.
    let exact = q.clone().with_tol(0.0);
    for (i, fam) in families.iter().enumerate() {
        let mut hit = false;
        for m in fam.members() {
            if exact.leq(m, a)? {
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

fn validate(q: &Quantale, b: &Value, i: usize, fam: &Family) -> Result<(), RefuteError> {
    match fam {
        Family::Finite(vs) => {
            if vs.is_empty() {
                return Err(RefuteError::Empty(i));
            }
            for x in vs {
                for y in vs {
                    let mut lower = false;
                    for z in vs {
                        if q.leq(z, x)? && q.leq(z, y)? {
                            lower = true;
                            break;
                        }
                    }
                    if !lower {
                        return Err(RefuteError::NotCodirected(i));
                    }
                }
            }
            if !q.leq(&q.meet(vs)?, b)? {
                return Err(RefuteError::MeetNotBelow(i));
            }
        }
        Family::Chain { terms, meet, .. } => {
            if terms.is_empty() {
                return Err(RefuteError::Empty(i));
            }
            for w in terms.windows(2) {
                if !q.leq(&w[1], &w[0])? {
                    return Err(RefuteError::NotCodirected(i));
                }
            }
            for t in terms {
                if !q.leq(meet, t)? {
                    return Err(RefuteError::NotCodirected(i));
                }
            }
            if !q.leq(meet, b)? {
                return Err(RefuteError::MeetNotBelow(i));
            }
        }
    }
    Ok(())
}

/// Indices `1..=1000` followed by `2^10 … 2^60`.
fn reciprocal_schedule() -> impl Iterator<Item = f64> {
    (1..=1000u64).map(|n| n as f64).chain((10..=60).map(|k| 2f64.powi(k)))
}

/// Standard families with meet `b`: the approximation chain `b + u_n`, the
/// singleton `{b}`, and per-instance chains (`b + 1/n` on the reals, pure
/// shift and pure margin chains on distributions, every element below `b`
/// on finite instances).
pub fn standard_families(q: &Quantale, b: &Value) -> Result<Vec<Family>, QuantaleError> {
    q.check(b)?;
    let mut fams = vec![Family::Finite(vec![b.clone()])];
    // Terms that round to `b` itself are dropped; a chain that collapses
    // entirely is omitted.
    let push_chain = |fams: &mut Vec<Family>, label: &str, terms: Vec<Value>| {
        let terms: Vec<Value> = terms.into_iter().filter(|t| t != b).collect();
        if !terms.is_empty() {
            fams.push(Family::Chain {
                label: format!("{{{label}}} above {}", q.format_value(b)),
                terms,
                meet: b.clone(),
            });
        }
    };
    match (q.kind(), b) {
        (Kind::Truth | Kind::Lattice(_), _) => {
            for m in q.elements().expect("finite instance") {
                if q.leq(&m, b)? && &m != b {
                    fams.push(Family::Finite(vec![m]));
                }
            }
            return Ok(fams);
        }
        (Kind::ExtReal, Value::ExtReal(x)) => {
            push_chain(&mut fams, "b + 1/n", reciprocal_schedule().map(|n| Value::ExtReal(x + 1.0 / n)).collect());
        }
        (Kind::Unit, Value::Unit(x)) => {
            push_chain(&mut fams, "b + 1/n", reciprocal_schedule().map(|n| Value::Unit((x + 1.0 / n).min(1.0))).collect());
        }
        (Kind::Errors, Value::Errors(x)) => {
            push_chain(&mut fams, "b - 1/n", reciprocal_schedule().map(|n| Value::Errors((x - 1.0 / n).max(0.0))).collect());
        }
        (Kind::Ddf, Value::Ddf(f)) => {
            let shift = (1..=40)
                .map(|n| Value::Ddf(f.boxplus(&Ddf::step(0.5f64.powi(n), 1.0).expect("valid step"))))
                .collect();
            let margin = (1..=40)
                .map(|n| Value::Ddf(f.boxplus(&Ddf::step(0.0, 1.0 - 0.5f64.powi(n)).expect("valid step"))))
                .collect();
            push_chain(&mut fams, "shift b by 2^-n", shift);
            push_chain(&mut fams, "lower b by 2^-n", margin);
        }
        _ => return Err(QuantaleError::Mismatch { quantale: q.name(), value: format!("{b:?}") }),
    }
    let safa_chain = (0..=60).map(|n| q.add(b, &q.safa(n))).collect::<Result<Vec<_>, _>>()?;
    push_chain(&mut fams, "b + u_n", safa_chain);
    Ok(fams)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::FiniteLattice;

    fn er(x: f64) -> Value {
        Value::ExtReal(x)
    }

    #[test]
    fn equal_reals_are_refuted_by_reciprocal_chain() {
        let q = Quantale::ext_real();
        let fams = standard_families(&q, &er(0.2)).unwrap();
        let hit = way_above_refute(&q, &er(0.2), &er(0.2), &fams).unwrap().unwrap();
        assert!(fams[hit].label(&q).contains("1/n") || fams[hit].label(&q).contains("u_n"));
    }

    #[test]
    fn strictly_larger_real_is_not_refuted() {
        let q = Quantale::ext_real();
        let fams = standard_families(&q, &er(0.2)).unwrap();
        assert_eq!(way_above_refute(&q, &er(0.5), &er(0.2), &fams).unwrap(), None);
    }

    #[test]
    fn finite_lattice_has_no_counterexample_above() {
        let l = FiniteLattice::powerset(2);
        let q = Quantale::lattice(l);
        for a in q.elements().unwrap() {
            for b in q.elements().unwrap() {
                let fams = standard_families(&q, &b).unwrap();
                let refuted = way_above_refute(&q, &a, &b, &fams).unwrap().is_some();
                assert_eq!(refuted, !q.leq(&b, &a).unwrap());
            }
        }
    }

    #[test]
    fn bad_families_are_rejected() {
        let q = Quantale::ext_real();
        let rising = Family::Chain { label: "up".into(), terms: vec![er(1.0), er(2.0)], meet: er(1.0) };
        assert_eq!(way_above_refute(&q, &er(5.0), &er(1.0), &[rising]), Err(RefuteError::NotCodirected(0)));
        let high = Family::Finite(vec![er(3.0)]);
        assert_eq!(way_above_refute(&q, &er(5.0), &er(1.0), &[high]), Err(RefuteError::MeetNotBelow(0)));
    }

    #[test]
    fn ddf_equal_pair_is_refuted() {
        let q = Quantale::ddf();
        let f = Value::Ddf(Ddf::new(vec![(0.5, 0.25), (1.0, 0.75)]).unwrap());
        let fams = standard_families(&q, &f).unwrap();
        assert!(way_above_refute(&q, &f, &f, &fams).unwrap().is_some());
    }
}
