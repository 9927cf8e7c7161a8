//! Partial spaces and Ω-valued sets.
//!
//! A partial space is a [`VSpace`] whose self-distances need not be `0`.
//! Over a finite frame `V` (addition is the join), reading distances in the
//! order-dual `Ω = V^op` turns a partial space into a set with an Ω-valued
//! equality `E`, and subadditivity into transitivity of `E`.

use thiserror::Error;

use crate::quantale::{FiniteLattice, Quantale, QuantaleError, Value};
use crate::report::{Check, Report};
use crate::vmetric::{subadditivity_check, symmetry_check, SpaceError, VSpace};

/// The axiom set checked for partial spaces, stated in every report.
pub const PARTIAL_AXIOMS: &str = "symmetry, subadditivity, small self-distance d(x,x) <= d(x,y)";

#[derive(Debug, Error, PartialEq)]
pub enum OmegaError {
    #[error("quantale `{0}` is not a finite frame")]
    NotAFrame(String),
    #[error("equality matrix has {rows} rows for {points} points, or a row of the wrong length")]
    NotSquare { points: usize, rows: usize },
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("element id {0} is outside the frame")]
    OutOfRange(usize),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
}

/// Symmetry, subadditivity and small self-distance; reflexivity is not
/// required.
pub fn check_partial_axioms(space: &VSpace) -> Result<Report, QuantaleError> {
    let q = space.quantale();
    let mut report = Report::new("partial axioms");
    report.info("quantale", q.name());
    report.info("points", space.len());
    report.info("axioms", PARTIAL_AXIOMS);
    report.push(symmetry_check(space)?);
    report.push(subadditivity_check(space)?);
    let mut small = Check::new("small-self-distance");
    for x in 0..space.len() {
        for y in 0..space.len() {
            small.record(q.leq(space.dist(x, x), space.dist(x, y))?, || {
                format!("{} > {}", space.show(x, x), space.show(x, y))
            });
        }
    }
    report.push(small);
    Ok(report)
}

/// A set with an equality valued in a finite frame `Ω`, given in its own
/// order (meet is `∧`).
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaEqualitySet {
    frame: FiniteLattice,
    names: Vec<String>,
    e: Vec<usize>,
}

impl OmegaEqualitySet {
    pub fn new(frame: FiniteLattice, names: Vec<String>, rows: Vec<Vec<usize>>) -> Result<Self, OmegaError> {
        let n = names.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(OmegaError::NotSquare { points: n, rows: rows.len() });
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(OmegaError::DuplicatePoint(a.clone()));
            }
        }
        let e: Vec<usize> = rows.into_iter().flatten().collect();
        if let Some(&bad) = e.iter().find(|&&v| v >= frame.len()) {
            return Err(OmegaError::OutOfRange(bad));
        }
        Ok(OmegaEqualitySet { frame, names, e })
    }

    pub fn frame(&self) -> &FiniteLattice {
        &self.frame
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

    pub fn e(&self, x: usize, y: usize) -> usize {
        self.e[x * self.len() + y]
    }

    pub fn set_e(&mut self, x: usize, y: usize, v: usize) -> Result<(), OmegaError> {
        if v >= self.frame.len() {
            return Err(OmegaError::OutOfRange(v));
        }
        let n = self.len();
        self.e[x * n + y] = v;
        Ok(())
    }

    fn show(&self, x: usize, y: usize) -> String {
        format!("E({},{})={}", self.names[x], self.names[y], self.frame.element_name(self.e(x, y)))
    }
}

/// `E(x, y) = d(x, y)` read in `Ω = V^op`.
pub fn to_omega_set(space: &VSpace) -> Result<OmegaEqualitySet, OmegaError> {
    let q = space.quantale();
    let v = q.finite_lattice().filter(|l| l.is_frame()).ok_or_else(|| OmegaError::NotAFrame(q.name()))?;
    let n = space.len();
    let rows = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| match space.dist(x, y) {
                    Value::Lattice(id) => *id,
                    other => unreachable!("lattice space holds {other:?}"),
                })
                .collect()
        })
        .collect();
    OmegaEqualitySet::new(v.dual(), space.names().to_vec(), rows)
}

/// The inverse reading: a partial space over `V = Ω^op`.
pub fn from_omega_set(oset: &OmegaEqualitySet) -> Result<VSpace, OmegaError> {
    let q = Quantale::lattice(oset.frame.dual());
    Ok(VSpace::from_fn(q, oset.names.clone(), |x, y| Ok(Value::Lattice(oset.e(x, y))))?)
}

/// Symmetry and transitivity of `E`; separatedness
/// (`E(x,y) = E(x,x) ∧ E(y,y)` only for `x = y`) is informational.
pub fn check_omega_laws(oset: &OmegaEqualitySet) -> Report {
    let l = &oset.frame;
    let n = oset.len();
    let mut report = Report::new("omega-set laws");
    report.info("frame", l.name());
    report.info("points", n);
    let mut frame = Check::new("frame-distributive");
    frame.record(l.is_distributive(), || format!("{} is not distributive", l.name()));
    report.push(frame);

    let mut sym = Check::new("symmetry");
    let mut trans = Check::new("transitivity");
    let mut sep = Check::new("separated").informational();
    for x in 0..n {
        for y in 0..n {
            if x < y {
                sym.record(oset.e(x, y) == oset.e(y, x), || format!("{} {}", oset.show(x, y), oset.show(y, x)));
                let glued = oset.e(x, y) == l.meet(oset.e(x, x), oset.e(y, y));
                sep.record(!glued, || format!("{} {} {}", oset.show(x, y), oset.show(x, x), oset.show(y, y)));
            }
            for z in 0..n {
                let lhs = l.meet(oset.e(x, y), oset.e(y, z));
                trans.record(l.leq(lhs, oset.e(x, z)), || {
                    format!("{} and {} exceed {}", oset.show(x, y), oset.show(y, z), oset.show(x, z))
                });
            }
        }
    }
    report.push(sym);
    report.push(trans);
    report.push(sep);
    report
}

/// Random finite frames: the down-sets of a random poset on at most 4
/// points, as a closure system (at most 16 elements).
pub fn random_frame(rng: &mut impl rand::Rng) -> FiniteLattice {
    let k: u32 = rng.gen_range(1..=4);
    // below[i] is the set of points strictly below i; only j < i may be below i.
    let mut below = vec![0u32; k as usize];
    for i in 0..k as usize {
        for j in 0..i {
            if rng.gen_bool(0.35) {
                below[i] |= 1 << j | below[j];
            }
        }
    }
    let downsets: Vec<u32> = (0..1u32 << k)
        .filter(|&s| (0..k as usize).all(|i| s >> i & 1 == 0 || below[i] & !s == 0))
        .collect();
    FiniteLattice::closure_system(format!("downsets{k}"), &downsets, k).expect("down-sets form a lattice")
}

/// A random partial space on `points` points over the frame `v` that
/// satisfies the partial axioms: `d(x,x) = l(x)` and, off the diagonal,
/// `d(x,y) = l(x) ∨ l(y) ∨ h(x) ∨ h(y)` for random labels `l`, `h`.
pub fn random_partial_space(v: &FiniteLattice, points: usize, rng: &mut impl rand::Rng) -> VSpace {
    let l: Vec<usize> = (0..points).map(|_| rng.gen_range(0..v.len())).collect();
    let h: Vec<usize> = (0..points).map(|_| rng.gen_range(0..v.len())).collect();
    let q = Quantale::lattice(v.clone());
    let names = (0..points).map(|i| format!("x{i}")).collect();
    VSpace::from_fn(q, names, |x, y| {
        let d = if x == y { l[x] } else { v.join(v.join(l[x], l[y]), v.join(h[x], h[y])) };
        Ok(Value::Lattice(d))
    })
    .expect("random partial space")
}

/// A random matrix over `v`, symmetric on a coin flip, axioms not enforced.
pub fn random_matrix_space(v: &FiniteLattice, points: usize, rng: &mut impl rand::Rng) -> VSpace {
    let q = Quantale::lattice(v.clone());
    let names = (0..points).map(|i| format!("x{i}")).collect();
    let symmetric = rng.gen_bool(0.5);
    let cells: Vec<usize> = (0..points * points).map(|_| rng.gen_range(0..v.len())).collect();
    VSpace::from_fn(q, names, |x, y| {
        let (a, b) = if symmetric { (x.min(y), x.max(y)) } else { (x, y) };
        Ok(Value::Lattice(cells[a * points + b]))
    })
    .expect("random space")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn er(x: f64) -> Value {
        Value::ExtReal(x)
    }

    #[test]
    fn point_with_positive_self_distance_passes() {
        let s = VSpace::new(Quantale::ext_real(), vec!["x".into()], vec![vec![er(1.0)]]).unwrap();
        assert!(check_partial_axioms(&s).unwrap().passed());
    }

    #[test]
    fn large_self_distance_fails() {
        let s = VSpace::new(
            Quantale::ext_real(),
            vec!["x".into(), "y".into()],
            vec![vec![er(5.0), er(1.0)], vec![er(1.0), er(0.0)]],
        )
        .unwrap();
        let r = check_partial_axioms(&s).unwrap();
        assert!(!r.check("small-self-distance").unwrap().passed());
    }

    #[test]
    fn discrete_space_over_two_element_frame() {
        let v = FiniteLattice::truth();
        let q = Quantale::lattice(v.clone());
        let s = VSpace::from_fn(q, vec!["a".into(), "b".into()], |x, y| Ok(Value::Lattice(if x == y { v.zero() } else { v.top() })))
            .unwrap();
        let o = to_omega_set(&s).unwrap();
        // In Ω the quantale zero is the top: E is supported on the diagonal.
        assert_eq!(o.e(0, 0), o.frame().top());
        assert_eq!(o.e(0, 1), o.frame().zero());
        assert!(check_omega_laws(&o).passed());
        assert_eq!(from_omega_set(&o).unwrap(), s);
    }

    #[test]
    fn non_frame_rejected() {
        let s = VSpace::new(Quantale::ext_real(), vec!["x".into()], vec![vec![er(0.0)]]).unwrap();
        assert!(matches!(to_omega_set(&s), Err(OmegaError::NotAFrame(_))));
    }

    #[test]
    fn broken_symmetry_is_witnessed() {
        let v = FiniteLattice::chain(3);
        let q = Quantale::lattice(v.clone());
        let s = VSpace::from_fn(q, vec!["a".into(), "b".into()], |_, _| Ok(Value::Lattice(v.zero()))).unwrap();
        let mut o = to_omega_set(&s).unwrap();
        o.set_e(0, 1, 1).unwrap();
        let r = check_omega_laws(&o);
        assert!(!r.check("symmetry").unwrap().passed());
        assert!(!r.passed());
    }

    #[test]
    fn random_frames_are_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let f = random_frame(&mut rng);
            assert!(f.len() <= 16);
            assert!(f.is_frame());
        }
    }

    #[test]
    fn random_partial_spaces_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let f = random_frame(&mut rng);
            let s = random_partial_space(&f, 4, &mut rng);
            assert!(check_partial_axioms(&s).unwrap().passed());
        }
    }
}
