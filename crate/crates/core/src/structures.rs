//! `V`-metric structures over finitary signatures and their embeddings.

use thiserror::Error;

use crate::quantale::{QuantaleError, Value};
use crate::report::{Check, Report};
use crate::vmetric::{tuple_dist, tuples, VSpace};

#[derive(Debug, Error, PartialEq)]
pub enum StructureError {
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` has arity 0; use a constant")]
    ZeroArity(String),
    #[error("`{0}` is interpreted {1} times, the signature has {2}")]
    WrongCount(&'static str, usize, usize),
    #[error("table for `{name}` has {found} rows, expected {expected}")]
    Partial { name: String, found: usize, expected: usize },
    #[error("`{0}` points outside the space")]
    OutOfRange(String),
    #[error("structures have different signatures")]
    SignatureMismatch,
    #[error("structures are over different quantales (`{0}` and `{1}`)")]
    QuantaleMismatch(String, String),
    #[error("map has {0} entries for {1} source points")]
    MapLength(usize, usize),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub constants: Vec<String>,
    pub functions: Vec<(String, usize)>,
    pub relations: Vec<(String, usize)>,
}

impl Signature {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<(), StructureError> {
        let mut seen: Vec<&str> = Vec::new();
        let all = self
            .constants
            .iter()
            .map(|c| (c, 1))
            .chain(self.functions.iter().map(|(n, k)| (n, *k)))
            .chain(self.relations.iter().map(|(n, k)| (n, *k)));
        for (name, k) in all {
            if seen.contains(&name.as_str()) {
                return Err(StructureError::DuplicateSymbol(name.clone()));
            }
            if k == 0 {
                return Err(StructureError::ZeroArity(name.clone()));
            }
            seen.push(name);
        }
        Ok(())
    }
}

/// Position of a tuple in lexicographic order.
fn rank(n: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &x| acc * n + x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VStructure {
    space: VSpace,
    sig: Signature,
    constants: Vec<usize>,
    /// Per function symbol, values indexed by tuple rank.
    functions: Vec<Vec<usize>>,
    /// Per relation symbol, values indexed by tuple rank.
    relations: Vec<Vec<Value>>,
}

impl VStructure {
    /// Checks totality and ranges; nonexpansion is reported by
    /// [`check_structure`].
    pub fn new(
        space: VSpace,
        sig: Signature,
        constants: Vec<usize>,
        functions: Vec<Vec<usize>>,
        relations: Vec<Vec<Value>>,
    ) -> Result<Self, StructureError> {
        sig.validate()?;
        let n = space.len();
        if constants.len() != sig.constants.len() {
            return Err(StructureError::WrongCount("constants", constants.len(), sig.constants.len()));
        }
        if functions.len() != sig.functions.len() {
            return Err(StructureError::WrongCount("functions", functions.len(), sig.functions.len()));
        }
        if relations.len() != sig.relations.len() {
            return Err(StructureError::WrongCount("relations", relations.len(), sig.relations.len()));
        }
        for (name, &c) in sig.constants.iter().zip(&constants) {
            if c >= n {
                return Err(StructureError::OutOfRange(name.clone()));
            }
        }
        for ((name, k), table) in sig.functions.iter().zip(&functions) {
            let expected = n.pow(*k as u32);
            if table.len() != expected {
                return Err(StructureError::Partial { name: name.clone(), found: table.len(), expected });
            }
            if table.iter().any(|&p| p >= n) {
                return Err(StructureError::OutOfRange(name.clone()));
            }
        }
        for ((name, k), table) in sig.relations.iter().zip(&relations) {
            let expected = n.pow(*k as u32);
            if table.len() != expected {
                return Err(StructureError::Partial { name: name.clone(), found: table.len(), expected });
            }
            for v in table {
                space.quantale().check(v)?;
            }
        }
        Ok(VStructure { space, sig, constants, functions, relations })
    }

    /// A structure over the empty signature.
    pub fn bare(space: VSpace) -> Self {
        VStructure {
            space,
            sig: Signature::empty(),
            constants: Vec::new(),
            functions: Vec::new(),
            relations: Vec::new(),
        }
    }

    pub fn space(&self) -> &VSpace {
        &self.space
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn constant(&self, i: usize) -> usize {
        self.constants[i]
    }

    pub fn apply(&self, f: usize, args: &[usize]) -> usize {
        self.functions[f][rank(self.len(), args)]
    }

    pub fn relation(&self, r: usize, args: &[usize]) -> &Value {
        &self.relations[r][rank(self.len(), args)]
    }

    fn show_tuple(&self, t: &[usize]) -> String {
        let parts: Vec<&str> = t.iter().map(|&i| self.space.name(i)).collect();
        format!("({})", parts.join(","))
    }

    /// The induced substructure on `points` (which must contain the
    /// constants and be closed under the functions).
    pub fn restrict(&self, points: &[usize]) -> VStructure {
        let pos = |p: usize| points.iter().position(|&x| x == p).expect("closed subset");
        let m = points.len();
        let lift = |t: &[usize]| t.iter().map(|&i| points[i]).collect::<Vec<_>>();
        let functions = self
            .sig
            .functions
            .iter()
            .enumerate()
            .map(|(f, (_, k))| tuples(m, *k).iter().map(|t| pos(self.apply(f, &lift(t)))).collect())
            .collect();
        let relations = self
            .sig
            .relations
            .iter()
            .enumerate()
            .map(|(r, (_, k))| tuples(m, *k).iter().map(|t| self.relation(r, &lift(t)).clone()).collect())
            .collect();
        VStructure {
            space: self.space.subspace(points),
            sig: self.sig.clone(),
            constants: self.constants.iter().map(|&c| pos(c)).collect(),
            functions,
            relations,
        }
    }
}

/// Nonexpansion of every function and relation, exhaustively over tuple
/// pairs. Relations are measured in the quantale's self-metric.
pub fn check_structure(s: &VStructure) -> Result<Report, QuantaleError> {
    let space = s.space();
    let q = space.quantale();
    let n = s.len();
    let mut report = Report::new("structure");
    report.info("quantale", q.name());
    report.info("points", n);
    for (f, (name, k)) in s.sig.functions.iter().enumerate() {
        let mut c = Check::new(format!("nonexpanding:{name}"));
        let ts = tuples(n, *k);
        for a in &ts {
            for b in &ts {
                let (fa, fb) = (s.apply(f, a), s.apply(f, b));
                let bound = tuple_dist(space, a, b)?;
                c.record(q.leq(space.dist(fa, fb), &bound)?, || {
                    format!("{}{} {}{} {}", name, s.show_tuple(a), name, s.show_tuple(b), space.show(fa, fb))
                });
            }
        }
        report.push(c);
    }
    for (r, (name, k)) in s.sig.relations.iter().enumerate() {
        let mut c = Check::new(format!("nonexpanding:{name}"));
        let ts = tuples(n, *k);
        for a in &ts {
            for b in &ts {
                let (ra, rb) = (s.relation(r, a), s.relation(r, b));
                let gap = q.self_distance(ra, rb)?;
                let bound = tuple_dist(space, a, b)?;
                c.record(q.leq(&gap, &bound)?, || {
                    format!(
                        "{}{}={} {}{}={} bound={}",
                        name,
                        s.show_tuple(a),
                        q.format_value(ra),
                        name,
                        s.show_tuple(b),
                        q.format_value(rb),
                        q.format_value(&bound)
                    )
                });
            }
        }
        report.push(c);
    }
    if report.checks.is_empty() {
        let mut c = Check::new("interpretations");
        c.pass();
        report.push(c);
    }
    Ok(report)
}

/// `g ∘ f` for point maps.
pub fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    f.iter().map(|&x| g[x]).collect()
}

pub fn identity_map(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn check_compatible(src: &VStructure, tgt: &VStructure, map: &[usize]) -> Result<(), StructureError> {
    if src.sig != tgt.sig {
        return Err(StructureError::SignatureMismatch);
    }
    let (qs, qt) = (src.space.quantale(), tgt.space.quantale());
    if qs != qt {
        return Err(StructureError::QuantaleMismatch(qs.name(), qt.name()));
    }
    if map.len() != src.len() {
        return Err(StructureError::MapLength(map.len(), src.len()));
    }
    if map.iter().any(|&p| p >= tgt.len()) {
        return Err(StructureError::OutOfRange("map".into()));
    }
    Ok(())
}

/// Whether `map` is an embedding, without building a report. Used by the
/// search loops of the type engine.
pub fn is_embedding(src: &VStructure, tgt: &VStructure, map: &[usize]) -> Result<bool, StructureError> {
    Ok(check_embedding(src, tgt, map)?.passed())
}

/// Injectivity, isometry, and preservation of constants, functions and
/// relations, exhaustively.
pub fn check_embedding(src: &VStructure, tgt: &VStructure, map: &[usize]) -> Result<Report, StructureError> {
    check_compatible(src, tgt, map)?;
    let q = src.space.quantale();
    let n = src.len();
    let h = |t: &[usize]| t.iter().map(|&x| map[x]).collect::<Vec<_>>();
    let mut report = Report::new("embedding");

    let mut inj = Check::new("injective");
    let mut iso = Check::new("isometry");
    for x in 0..n {
        for y in 0..n {
            if x < y {
                inj.record(map[x] != map[y], || {
                    format!("{} {} -> {}", src.space.name(x), src.space.name(y), tgt.space.name(map[x]))
                });
            }
            iso.record(q.eq(tgt.space.dist(map[x], map[y]), src.space.dist(x, y))?, || {
                format!("{} vs {}", src.space.show(x, y), tgt.space.show(map[x], map[y]))
            });
        }
    }
    report.push(inj);
    report.push(iso);

    let mut consts = Check::new("constants");
    for (i, name) in src.sig.constants.iter().enumerate() {
        consts.record(map[src.constant(i)] == tgt.constant(i), || name.clone());
    }
    report.push(consts);

    let mut funcs = Check::new("functions");
    for (f, (name, k)) in src.sig.functions.iter().enumerate() {
        for t in tuples(n, *k) {
            funcs.record(map[src.apply(f, &t)] == tgt.apply(f, &h(&t)), || format!("{name}{}", src.show_tuple(&t)));
        }
    }
    report.push(funcs);

    let mut rels = Check::new("relations");
    for (r, (name, k)) in src.sig.relations.iter().enumerate() {
        for t in tuples(n, *k) {
            let (a, b) = (src.relation(r, &t), tgt.relation(r, &h(&t)));
            rels.record(q.eq(a, b)?, || {
                format!("{name}{}={} but image has {}", src.show_tuple(&t), q.format_value(a), q.format_value(b))
            });
        }
    }
    report.push(rels);
    Ok(report)
}

/// Every nonempty subset of at most `max_size` points that contains the
/// constants and is closed under the functions, with its inclusion map.
/// Subsets come in order of size, then lexicographically.
pub fn enumerate_substructures(s: &VStructure, max_size: usize) -> Vec<(VStructure, Vec<usize>)> {
    let n = s.len();
    assert!(n <= 24, "substructure enumeration is exponential in the point count");
    let mut subsets: Vec<Vec<usize>> = (1u32..1 << n)
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|pts| pts.len() <= max_size && closed(s, pts))
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    subsets.into_iter().map(|pts| (s.restrict(&pts), pts)).collect()
}

fn closed(s: &VStructure, pts: &[usize]) -> bool {
    if !s.constants.iter().all(|c| pts.contains(c)) {
        return false;
    }
    s.sig.functions.iter().enumerate().all(|(f, (_, k))| {
        tuples(pts.len(), *k).iter().all(|t| {
            let args: Vec<usize> = t.iter().map(|&i| pts[i]).collect();
            pts.contains(&s.apply(f, &args))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::Quantale;

    fn er(x: f64) -> Value {
        Value::ExtReal(x)
    }

    fn two_points(d: f64) -> VSpace {
        VSpace::new(
            Quantale::ext_real(),
            vec!["a".into(), "b".into()],
            vec![vec![er(0.0), er(d)], vec![er(d), er(0.0)]],
        )
        .unwrap()
    }

    fn unary(space: VSpace, table: Vec<usize>) -> VStructure {
        let sig = Signature { functions: vec![("f".into(), 1)], ..Default::default() };
        VStructure::new(space, sig, vec![], vec![table], vec![]).unwrap()
    }

    #[test]
    fn empty_signature_passes() {
        let s = VStructure::bare(two_points(1.0));
        assert!(check_structure(&s).unwrap().passed());
    }

    #[test]
    fn identity_function_passes() {
        assert!(check_structure(&unary(two_points(1.0), vec![0, 1])).unwrap().passed());
    }

    #[test]
    fn expanding_relation_is_caught() {
        let sig = Signature { relations: vec![("R".into(), 1)], ..Default::default() };
        let s = VStructure::new(two_points(1.0), sig, vec![], vec![], vec![vec![er(0.0), er(5.0)]]).unwrap();
        let r = check_structure(&s).unwrap();
        assert!(!r.check("nonexpanding:R").unwrap().passed());
    }

    #[test]
    fn partial_table_rejected() {
        let sig = Signature { functions: vec![("f".into(), 2)], ..Default::default() };
        let err = VStructure::new(two_points(1.0), sig, vec![], vec![vec![0, 1, 0]], vec![]).unwrap_err();
        assert_eq!(err, StructureError::Partial { name: "f".into(), found: 3, expected: 4 });
    }

    #[test]
    fn embeddings() {
        let s = VStructure::bare(two_points(2.0));
        assert!(is_embedding(&s, &s, &[0, 1]).unwrap());
        let t = VStructure::bare(two_points(1.0));
        let r = check_embedding(&s, &t, &[0, 1]).unwrap();
        assert!(!r.check("isometry").unwrap().passed());
        assert!(r.check("injective").unwrap().passed());
    }

    #[test]
    fn relation_value_must_be_preserved() {
        let sig = Signature { relations: vec![("R".into(), 1)], ..Default::default() };
        let s = VStructure::new(two_points(1.0), sig.clone(), vec![], vec![], vec![vec![er(0.0), er(1.0)]]).unwrap();
        let t = VStructure::new(two_points(1.0), sig, vec![], vec![], vec![vec![er(0.0), er(0.5)]]).unwrap();
        let r = check_embedding(&s, &t, &[0, 1]).unwrap();
        assert!(!r.check("relations").unwrap().passed());
    }

    #[test]
    fn swap_admits_no_singletons() {
        let s = unary(two_points(1.0), vec![1, 0]);
        let subs = enumerate_substructures(&s, 2);
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].1, vec![0, 1]);
    }

    #[test]
    fn singletons_of_bare_space() {
        let s = VStructure::bare(two_points(1.0));
        assert_eq!(enumerate_substructures(&s, 1).len(), 2);
    }

    #[test]
    fn constants_are_in_every_substructure() {
        let sig = Signature { constants: vec!["c".into()], ..Default::default() };
        let s = VStructure::new(two_points(1.0), sig, vec![1], vec![], vec![]).unwrap();
        for (sub, pts) in enumerate_substructures(&s, 2) {
            assert!(pts.contains(&1));
            assert!(check_structure(&sub).unwrap().passed());
        }
    }
}
