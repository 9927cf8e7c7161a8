//! Galois types over a finite catalog of structures.
//!
//! A [`ToyClass`] is a catalog of structures with designated embeddings,
//! closed under composition and containing identities. Over a base `M`, a
//! pointed extension is a pair `(f: M → N, a ∈ N)`; two are equivalent when
//! some co-cone `g₀: N₀ → N, g₁: N₁ → N` with `g₀ f₀ = g₁ f₁` identifies the
//! points. Types are the classes of that relation, and the distance between
//! two types is the meet, over representatives and co-cones in the catalog,
//! of the distance between the images of the points.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashSet};
use std::rc::Rc;

use thiserror::Error;

use crate::quantale::{Quantale, QuantaleError, Value};
use crate::report::{Check, Report};
use crate::structures::{check_embedding, compose, identity_map, StructureError, VStructure};
use crate::vmetric::VSpace;

/// Composition closure refuses to grow past this many morphisms.
pub const MAX_MORPHISMS: usize = 100_000;

#[derive(Debug, Error, PartialEq)]
pub enum GaloisError {
    #[error("class has no structures")]
    Empty,
    #[error("structure `{0}` differs from the first in quantale or signature")]
    MixedCatalog(String),
    #[error("unknown structure `{0}`")]
    UnknownStructure(String),
    #[error("morphism {index} ({source_name} -> {target}) is not an embedding: {reason}")]
    InvalidMorphism {
        index: usize,
        source_name: String,
        target: String,
        reason: String,
    },
    #[error("composition closure exceeds {MAX_MORPHISMS} morphisms")]
    TooManyMorphisms,
    #[error("amalgamation fails: {0}")]
    ApFails(String),
    #[error("types live over different bases")]
    BaseMismatch,
    #[error("morphism {0} does not end at the base of the type")]
    TargetMismatch(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Morphism {
    pub source: usize,
    pub target: usize,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ToyClass {
    names: Vec<String>,
    structures: Vec<VStructure>,
    morphisms: Vec<Morphism>,
    /// Morphism ids by (source, target).
    hom: BTreeMap<(usize, usize), Vec<usize>>,
    ls_bound: usize,
}

impl ToyClass {
    /// Validates every morphism, then adds identities and composites.
    pub fn new(
        names: Vec<String>,
        structures: Vec<VStructure>,
        morphisms: Vec<Morphism>,
        ls_bound: usize,
    ) -> Result<Self, GaloisError> {
        let first = structures.first().ok_or(GaloisError::Empty)?;
        for (name, s) in names.iter().zip(&structures) {
            if s.space().quantale() != first.space().quantale() || s.signature() != first.signature() {
                return Err(GaloisError::MixedCatalog(name.clone()));
            }
        }
        let n = structures.len();
        for (index, m) in morphisms.iter().enumerate() {
            if m.source >= n || m.target >= n {
                return Err(GaloisError::UnknownStructure(format!("#{}", m.source.max(m.target))));
            }
            let report = check_embedding(&structures[m.source], &structures[m.target], &m.map)?;
            let reason = report.failed().next().map(|bad| format!("{} ({})", bad.name, bad.witnesses.join("; ")));
            if let Some(reason) = reason {
                return Err(GaloisError::InvalidMorphism {
                    index,
                    source_name: names[m.source].clone(),
                    target: names[m.target].clone(),
                    reason,
                });
            }
        }
        let mut seen: HashSet<Morphism> = HashSet::new();
        let mut all: Vec<Morphism> = Vec::new();
        let ids = (0..n).map(|i| Morphism { source: i, target: i, map: identity_map(structures[i].len()) });
        for m in ids.chain(morphisms) {
            if seen.insert(m.clone()) {
                all.push(m);
            }
        }
        // Close under composition.
        let mut frontier = 0;
        while frontier < all.len() {
            let end = all.len();
            for i in 0..end {
                for j in 0..end {
                    if i < frontier && j < frontier {
                        continue;
                    }
                    let (f, g) = (&all[i], &all[j]);
                    if f.target == g.source {
                        let c = Morphism { source: f.source, target: g.target, map: compose(&f.map, &g.map) };
                        if seen.insert(c.clone()) {
                            all.push(c);
                            if all.len() > MAX_MORPHISMS {
                                return Err(GaloisError::TooManyMorphisms);
                            }
                        }
                    }
                }
            }
            frontier = end;
        }
        all.sort();
        let mut hom: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (id, m) in all.iter().enumerate() {
            hom.entry((m.source, m.target)).or_default().push(id);
        }
        Ok(ToyClass { names, structures, morphisms: all, hom, ls_bound })
    }

    /// The class whose morphisms are all embeddings between catalog members.
    pub fn with_all_embeddings(names: Vec<String>, structures: Vec<VStructure>, ls_bound: usize) -> Result<Self, GaloisError> {
        let mut morphisms = Vec::new();
        for (i, s) in structures.iter().enumerate() {
            for (j, t) in structures.iter().enumerate() {
                for map in injections(s.len(), t.len()) {
                    if check_embedding(s, t, &map)?.passed() {
                        morphisms.push(Morphism { source: i, target: j, map });
                    }
                }
            }
        }
        Self::new(names, structures, morphisms, ls_bound)
    }

    pub fn len(&self) -> usize {
        self.structures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structures.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize, GaloisError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| GaloisError::UnknownStructure(name.to_string()))
    }

    pub fn structure(&self, i: usize) -> &VStructure {
        &self.structures[i]
    }

    pub fn structures(&self) -> &[VStructure] {
        &self.structures
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, id: usize) -> &Morphism {
        &self.morphisms[id]
    }

    pub fn ls_bound(&self) -> usize {
        self.ls_bound
    }

    pub fn quantale(&self) -> &Quantale {
        self.structures[0].space().quantale()
    }

    pub fn hom(&self, source: usize, target: usize) -> &[usize] {
        self.hom.get(&(source, target)).map_or(&[], Vec::as_slice)
    }

    /// Morphism ids leaving `source`, ordered by id.
    pub fn from(&self, source: usize) -> Vec<usize> {
        (0..self.len()).flat_map(|t| self.hom(source, t).iter().copied()).collect()
    }

    fn find(&self, source: usize, target: usize, map: &[usize]) -> Option<usize> {
        self.hom(source, target).iter().copied().find(|&id| self.morphisms[id].map == map)
    }

    fn space(&self, i: usize) -> &VSpace {
        self.structures[i].space()
    }

    fn show_morphism(&self, id: usize) -> String {
        let m = &self.morphisms[id];
        let src = self.space(m.source);
        let tgt = self.space(m.target);
        let pairs: Vec<String> = m.map.iter().enumerate().map(|(x, &y)| format!("{}>{}", src.name(x), tgt.name(y))).collect();
        format!("{}->{}[{}]", self.names[m.source], self.names[m.target], pairs.join(","))
    }

    /// Co-cones `(N, g₀, g₁)` over the span `(f₀, f₁)`, optionally also
    /// requiring `g₀(a₀) = g₁(a₁)`.
    fn cocones<'a>(&'a self, f0: usize, f1: usize) -> impl Iterator<Item = (usize, usize, usize)> + 'a {
        let (m0, m1) = (&self.morphisms[f0], &self.morphisms[f1]);
        (0..self.len()).flat_map(move |n| {
            self.hom(m0.target, n).iter().flat_map(move |&g0| {
                self.hom(m1.target, n).iter().filter_map(move |&g1| {
                    let (h0, h1) = (&self.morphisms[g0].map, &self.morphisms[g1].map);
                    m0.map.iter().zip(&m1.map).all(|(&x, &y)| h0[x] == h1[y]).then_some((n, g0, g1))
                })
            })
        })
    }
}

/// All injective maps from `n` points into `m` points, in lexicographic order.
pub fn injections(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for y in 0..m {
            if !cur.contains(&y) {
                cur.push(y);
                go(n, m, cur, out);
                cur.pop();
            }
        }
    }
    go(n, m, &mut cur, &mut out);
    out
}

/// Amalgamation over every span `M → M₀, M → M₁` in the catalog.
pub fn check_ap(class: &ToyClass) -> Report {
    let mut report = Report::new("amalgamation");
    report.info("structures", class.len());
    report.info("morphisms", class.morphisms.len());
    report.info("search universe", "catalog");
    let mut c = Check::new("amalgamation");
    for m in 0..class.len() {
        let out = class.from(m);
        for (i, &f0) in out.iter().enumerate() {
            for &f1 in &out[i..] {
                let ok = class.cocones(f0, f1).next().is_some();
                c.record(ok, || format!("span {} / {}", class.show_morphism(f0), class.show_morphism(f1)));
            }
        }
    }
    report.push(c);
    report
}

/// A pointed extension `(f, a)`: morphism id and a point of its target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointedExtension {
    pub morphism: usize,
    pub point: usize,
}

/// A type over `base`, by index into that base's partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeRef {
    pub base: usize,
    pub id: usize,
}

/// A co-cone realizing a distance between two types.
#[derive(Clone, Debug, PartialEq)]
pub struct CoCone {
    pub left: PointedExtension,
    pub right: PointedExtension,
    pub apex: usize,
    pub g0: usize,
    pub g1: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeDistance {
    pub value: Value,
    /// A co-cone whose distance equals the meet, if one does.
    pub witness: Option<CoCone>,
    /// Whether any co-cone exists at all.
    pub cocones: usize,
}

/// The quotient of the pointed extensions over one base.
#[derive(Debug)]
pub struct TypesOver {
    pub base: usize,
    pub extensions: Vec<PointedExtension>,
    /// Type id of each extension.
    pub class_of: Vec<usize>,
    /// Members of each type; the first is the least and serves as
    /// representative.
    pub types: Vec<Vec<usize>>,
    related: Vec<bool>,
    distances: Vec<TypeDistance>,
}

impl TypesOver {
    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn related(&self, e0: usize, e1: usize) -> bool {
        self.related[e0 * self.extensions.len() + e1]
    }

    pub fn distance(&self, p: usize, q: usize) -> &TypeDistance {
        &self.distances[p * self.len() + q]
    }

    pub fn type_of(&self, e: PointedExtension) -> Option<TypeRef> {
        self.extensions.iter().position(|&x| x == e).map(|i| TypeRef { base: self.base, id: self.class_of[i] })
    }

    pub fn representative(&self, p: usize) -> PointedExtension {
        self.extensions[self.types[p][0]]
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Type computations over a class in which amalgamation has been verified.
/// Partitions are computed once per base and cached.
pub struct TypeEngine<'c> {
    class: &'c ToyClass,
    cache: RefCell<BTreeMap<usize, Rc<TypesOver>>>,
}

impl<'c> TypeEngine<'c> {
    /// Refuses classes without amalgamation, where the relation on pointed
    /// extensions may fail to be transitive.
    pub fn new(class: &'c ToyClass) -> Result<Self, GaloisError> {
        let ap = check_ap(class);
        if let Some(bad) = ap.failed().next() {
            return Err(GaloisError::ApFails(bad.witnesses.first().cloned().unwrap_or_default()));
        }
        Ok(TypeEngine { class, cache: RefCell::new(BTreeMap::new()) })
    }

    pub fn class(&self) -> &ToyClass {
        self.class
    }

    pub fn types_over(&self, base: usize) -> Result<Rc<TypesOver>, GaloisError> {
        if base >= self.class.len() {
            return Err(GaloisError::UnknownStructure(format!("#{base}")));
        }
        if let Some(t) = self.cache.borrow().get(&base) {
            return Ok(Rc::clone(t));
        }
        let t = Rc::new(self.compute_types(base)?);
        self.cache.borrow_mut().insert(base, Rc::clone(&t));
        Ok(t)
    }

    fn compute_types(&self, base: usize) -> Result<TypesOver, GaloisError> {
        let class = self.class;
        let q = class.quantale();
        let extensions: Vec<PointedExtension> = class
            .from(base)
            .into_iter()
            .flat_map(|f| (0..class.structure(class.morphism(f).target).len()).map(move |a| PointedExtension { morphism: f, point: a }))
            .collect();
        let e = extensions.len();
        let mut related = vec![false; e * e];
        let mut parent: Vec<usize> = (0..e).collect();
        for i in 0..e {
            for j in 0..e {
                let (x, y) = (extensions[i], extensions[j]);
                let hit = class.cocones(x.morphism, y.morphism).any(|(_, g0, g1)| {
                    class.morphism(g0).map[x.point] == class.morphism(g1).map[y.point]
                });
                related[i * e + j] = hit;
                if hit {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    // Keep the least member as root.
                    if ri != rj {
                        let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
                        parent[hi] = lo;
                    }
                }
            }
        }
        let mut roots: Vec<usize> = (0..e).map(|i| find(&mut parent, i)).collect();
        let mut order: Vec<usize> = roots.clone();
        order.sort_unstable();
        order.dedup();
        let class_of: Vec<usize> = roots.iter_mut().map(|r| order.binary_search(r).expect("root listed")).collect();
        let mut types = vec![Vec::new(); order.len()];
        for (i, &c) in class_of.iter().enumerate() {
            types[c].push(i);
        }

        let t = types.len();
        let mut distances = Vec::with_capacity(t * t);
        for p in 0..t {
            for r in 0..t {
                let mut best: Option<(Value, CoCone)> = None;
                let mut values: Vec<Value> = Vec::new();
                let mut count = 0;
                for &i in &types[p] {
                    for &j in &types[r] {
                        let (x, y) = (extensions[i], extensions[j]);
                        for (apex, g0, g1) in class.cocones(x.morphism, y.morphism) {
                            count += 1;
                            let a = class.morphism(g0).map[x.point];
                            let b = class.morphism(g1).map[y.point];
                            let d = class.space(apex).dist(a, b).clone();
                            let better = match &best {
                                None => true,
                                Some((v, _)) => q.leq(&d, v)? && !q.leq(v, &d)?,
                            };
                            if better {
                                best = Some((d.clone(), CoCone { left: x, right: y, apex, g0, g1 }));
                            }
                            values.push(d);
                        }
                    }
                }
                let value = q.meet(&values)?;
                let witness = best.filter(|(v, _)| q.eq(v, &value).unwrap_or(false)).map(|(_, c)| c);
                distances.push(TypeDistance { value, witness, cocones: count });
            }
        }
        Ok(TypesOver { base, extensions, class_of, types, related, distances })
    }

    pub fn type_distance(&self, p: TypeRef, q: TypeRef) -> Result<TypeDistance, GaloisError> {
        if p.base != q.base {
            return Err(GaloisError::BaseMismatch);
        }
        let t = self.types_over(p.base)?;
        if p.id >= t.len() || q.id >= t.len() {
            return Err(GaloisError::Precondition("type id out of range".into()));
        }
        Ok(t.distance(p.id, q.id).clone())
    }

    /// `p ↾ χ`: the type of `(f ∘ χ, a)` over the source of `χ`, for the
    /// representative `(f, a)` of `p`.
    pub fn restrict(&self, p: TypeRef, chi: usize) -> Result<TypeRef, GaloisError> {
        let class = self.class;
        let c = class.morphism(chi);
        if c.target != p.base {
            return Err(GaloisError::TargetMismatch(chi));
        }
        let t = self.types_over(p.base)?;
        let rep = t.representative(p.id);
        let f = class.morphism(rep.morphism);
        let composite = class
            .find(c.source, f.target, &compose(&c.map, &f.map))
            .expect("class is closed under composition");
        let over = self.types_over(c.source)?;
        Ok(over
            .type_of(PointedExtension { morphism: composite, point: rep.point })
            .expect("every pointed extension has a type"))
    }

    /// Labels a type by its representative.
    pub fn describe(&self, p: TypeRef) -> String {
        let t = self.types_over(p.base).expect("base already computed");
        let rep = t.representative(p.id);
        let f = self.class.morphism(rep.morphism);
        format!(
            "t{}@{}({}, {})",
            p.id,
            self.class.name(p.base),
            self.class.show_morphism(rep.morphism),
            self.class.space(f.target).name(rep.point)
        )
    }

    fn describe_cocone(&self, c: &CoCone) -> String {
        format!(
            "apex {} via {} and {}",
            self.class.name(c.apex),
            self.class.show_morphism(c.g0),
            self.class.show_morphism(c.g1)
        )
    }

    /// Reflexivity, symmetry and transitivity of the relation on pointed
    /// extensions over `base`, audited exhaustively.
    pub fn audit_equivalence(&self, base: usize) -> Result<Report, GaloisError> {
        let t = self.types_over(base)?;
        let e = t.extensions.len();
        let show = |i: usize| {
            let x = t.extensions[i];
            format!("({}, {})", self.class.show_morphism(x.morphism), x.point)
        };
        let mut report = Report::new(format!("equivalence over {}", self.class.name(base)));
        let mut refl = Check::new("reflexive");
        let mut sym = Check::new("symmetric");
        let mut trans = Check::new("transitive");
        for i in 0..e {
            refl.record(t.related(i, i), || show(i));
            for j in 0..e {
                sym.record(t.related(i, j) == t.related(j, i), || format!("{} {}", show(i), show(j)));
                if !t.related(i, j) {
                    continue;
                }
                for k in 0..e {
                    if t.related(j, k) {
                        trans.record(t.related(i, k), || format!("{} {} {}", show(i), show(j), show(k)));
                    }
                }
            }
        }
        report.push(refl);
        report.push(sym);
        report.push(trans);
        Ok(report)
    }

    /// The type distance over `base` is a pseudometric.
    pub fn check_type_pseudometric(&self, base: usize) -> Result<Report, GaloisError> {
        let q = self.class.quantale();
        let t = self.types_over(base)?;
        let n = t.len();
        let d = |p: usize, r: usize| &t.distance(p, r).value;
        let tref = |id| TypeRef { base, id };
        let mut report = Report::new(format!("type pseudometric over {}", self.class.name(base)));
        report.info("types", n);
        let mut refl = Check::new("reflexivity");
        let mut sym = Check::new("symmetry");
        let mut tri = Check::new("subadditivity");
        for p in 0..n {
            refl.record(q.eq(d(p, p), &q.zero())?, || self.describe(tref(p)));
            for r in 0..n {
                sym.record(q.eq(d(p, r), d(r, p))?, || format!("{} {}", self.describe(tref(p)), self.describe(tref(r))));
                for s in 0..n {
                    let via = q.add(d(p, s), d(s, r))?;
                    tri.record(q.leq(d(p, r), &via)?, || {
                        format!("t{p} t{r} via t{s}: {} > {}", q.format_value(d(p, r)), q.format_value(&via))
                    });
                }
            }
        }
        report.push(refl);
        report.push(sym);
        report.push(tri);
        Ok(report)
    }

    /// Every type distance over `base` is attained by a concrete co-cone.
    pub fn check_attainment(&self, base: usize) -> Result<Check, GaloisError> {
        let t = self.types_over(base)?;
        let mut c = Check::new(format!("attainment@{}", self.class.name(base)));
        for p in 0..t.len() {
            for r in 0..t.len() {
                let d = t.distance(p, r);
                if d.cocones == 0 {
                    continue;
                }
                c.record(d.witness.is_some(), || format!("t{p} t{r}"));
            }
        }
        Ok(c)
    }

    /// Restriction along every `χ` into `base` does not increase distances.
    pub fn check_contractive(&self, base: usize) -> Result<Check, GaloisError> {
        let q = self.class.quantale();
        let t = self.types_over(base)?;
        let mut c = Check::new(format!("restriction-contractive@{}", self.class.name(base)));
        for x in 0..self.class.len() {
            for &chi in self.class.hom(x, base) {
                for p in 0..t.len() {
                    for r in 0..t.len() {
                        let (pp, rr) = (TypeRef { base, id: p }, TypeRef { base, id: r });
                        let restricted = self.type_distance(self.restrict(pp, chi)?, self.restrict(rr, chi)?)?;
                        c.record(q.leq(&restricted.value, &t.distance(p, r).value)?, || {
                            format!("t{p} t{r} along {}", self.class.show_morphism(chi))
                        });
                    }
                }
            }
        }
        Ok(c)
    }

    /// Separation (distinct types are never at distance 0) and the finite
    /// continuity-of-types analogue: if a pointed extension is within every
    /// `u_n` (n ≤ depth) of realizations of `p` in common extensions, it
    /// realizes `p`.
    pub fn check_separation_and_ctp(&self, base: usize, depth: u32) -> Result<Report, GaloisError> {
        let class = self.class;
        let q = class.quantale();
        let t = self.types_over(base)?;
        let mut report = Report::new(format!("separation and continuity over {}", class.name(base)));
        report.info("types", t.len());
        report.info("depth", depth);
        let mut sep = Check::new("separation");
        for p in 0..t.len() {
            for r in p + 1..t.len() {
                let d = &t.distance(p, r).value;
                sep.record(!q.eq(d, &q.zero())?, || {
                    format!("{} {} at distance {}", self.describe(TypeRef { base, id: p }), self.describe(TypeRef { base, id: r }), q.format_value(d))
                });
            }
        }
        report.push(sep);

        let witnesses: Vec<Value> = (0..=depth).map(|n| q.safa(n)).collect();
        let mut ctp = Check::new("continuity-of-types");
        for (i, &x) in t.extensions.iter().enumerate() {
            for p in 0..t.len() {
                let mut close: Vec<Value> = Vec::new();
                for &j in &t.types[p] {
                    let y = t.extensions[j];
                    for (apex, g0, g1) in class.cocones(x.morphism, y.morphism) {
                        let a = class.morphism(g0).map[x.point];
                        let b = class.morphism(g1).map[y.point];
                        close.push(class.space(apex).dist(a, b).clone());
                    }
                }
                let mut premise = true;
                for u in &witnesses {
                    let mut any = false;
                    for d in &close {
                        if q.leq(d, u)? {
                            any = true;
                            break;
                        }
                    }
                    if !any {
                        premise = false;
                        break;
                    }
                }
                if premise {
                    ctp.record(t.class_of[i] == p, || {
                        format!(
                            "({}, {}) approximates {} without realizing it",
                            class.show_morphism(x.morphism),
                            x.point,
                            self.describe(TypeRef { base, id: p })
                        )
                    });
                }
            }
        }
        report.push(ctp);
        Ok(report)
    }

    /// For every base `M` and pair of types over it: if every restriction
    /// along `χ: X → M` with `|X| ≤ κ` has `δ ≫ d(p₀↾χ, p₁↾χ)`, then
    /// `ε ≫ d(p₀, p₁)`. Violations are the failures of the check.
    pub fn check_tameness(&self, kappa: usize, eps: &Value, delta: &Value) -> Result<Report, GaloisError> {
        let class = self.class;
        let q = class.quantale();
        for (label, v) in [("eps", eps), ("delta", delta)] {
            if !q.way_above(v, &q.zero())? {
                return Err(GaloisError::Precondition(format!("{label} = {} is not way above 0", q.format_value(v))));
            }
        }
        let strong = q.eq(eps, delta)?;
        let mut report = Report::new("tameness");
        report.info("kappa", kappa);
        report.info("eps", q.format_value(eps));
        report.info("delta", q.format_value(delta));
        report.info("mode", if strong { "strong" } else { "plain" });
        let mut c = Check::new("tameness");
        for base in 0..class.len() {
            let t = self.types_over(base)?;
            let chis: Vec<usize> = (0..class.len())
                .filter(|&x| class.structure(x).len() <= kappa)
                .flat_map(|x| class.hom(x, base).iter().copied())
                .collect();
            for p in 0..t.len() {
                for r in p + 1..t.len() {
                    let (pp, rr) = (TypeRef { base, id: p }, TypeRef { base, id: r });
                    let mut premise = true;
                    for &chi in &chis {
                        let d = self.type_distance(self.restrict(pp, chi)?, self.restrict(rr, chi)?)?;
                        if !q.way_above(delta, &d.value)? {
                            premise = false;
                            break;
                        }
                    }
                    if !premise {
                        continue;
                    }
                    let d = &t.distance(p, r).value;
                    c.record(q.way_above(eps, d)?, || {
                        format!(
                            "{} {} at distance {} with all {}-small restrictions close",
                            self.describe(pp),
                            self.describe(rr),
                            q.format_value(d),
                            kappa
                        )
                    });
                }
            }
        }
        report.push(c);
        report.info("tameness", match (report.passed(), strong) {
            (true, true) => "strongly tame",
            (true, false) => "tame",
            (false, _) => "not tame",
        });
        Ok(report)
    }

    /// Types over `base` with their distance table, as a report.
    pub fn types_report(&self, base: usize) -> Result<Report, GaloisError> {
        let q = self.class.quantale();
        let t = self.types_over(base)?;
        let mut report = Report::new(format!("types over {}", self.class.name(base)));
        report.info("extensions", t.extensions.len());
        report.info("types", t.len());
        for p in 0..t.len() {
            report.info(format!("type t{p}"), format!("{} ({} extensions)", self.describe(TypeRef { base, id: p }), t.types[p].len()));
        }
        for p in 0..t.len() {
            for r in 0..t.len() {
                let d = t.distance(p, r);
                let w = match &d.witness {
                    Some(c) => self.describe_cocone(c),
                    None if d.cocones == 0 => "no co-cone".to_string(),
                    None => "not attained".to_string(),
                };
                report.info(format!("d(t{p},t{r})"), format!("{} [{}]", q.format_value(&d.value), w));
            }
        }
        for c in self.audit_equivalence(base)?.checks {
            report.push(c);
        }
        Ok(report)
    }
}

/// Built-in toy classes.
pub mod builtin {
    use super::*;

    fn discrete_space(n: usize) -> VSpace {
        let q = Quantale::truth();
        let names = (0..n).map(|i| format!("p{i}")).collect();
        VSpace::from_fn(q, names, |i, j| Ok(Value::Truth(i != j))).expect("discrete space")
    }

    /// All discrete truth-valued spaces of `0..=max` points, one per size,
    /// with every injection.
    pub fn discrete_truth(max: usize) -> ToyClass {
        let names = (0..=max).map(|n| format!("D{n}")).collect();
        let structures = (0..=max).map(|n| VStructure::bare(discrete_space(n))).collect();
        ToyClass::with_all_embeddings(names, structures, 0).expect("discrete class is valid")
    }

    /// Subsets of the points `{0, 1, 2}` of the real line, with morphisms the
    /// restrictions of the identity and the reflection `x ↦ 2 − x`. Subsets
    /// listed in `omit` (as bitmasks over `{0, 1, 2}`) are left out.
    pub fn line(omit: &[u32]) -> ToyClass {
        let q = Quantale::ext_real();
        let masks: Vec<u32> = (0u32..8).filter(|m| !omit.contains(m)).collect();
        let subsets: Vec<Vec<usize>> = masks.iter().map(|m| (0..3).filter(|&i| m >> i & 1 == 1).collect()).collect();
        let names = subsets
            .iter()
            .map(|s| format!("L{}", s.iter().map(|i| i.to_string()).collect::<String>()))
            .collect();
        let structures = subsets
            .iter()
            .map(|s| {
                let names = s.iter().map(|i| format!("x{i}")).collect();
                let space = VSpace::from_fn(q.clone(), names, |a, b| Ok(Value::ExtReal((s[a] as f64 - s[b] as f64).abs())))
                    .expect("line subspace");
                VStructure::bare(space)
            })
            .collect();
        let mut morphisms = Vec::new();
        for (i, a) in subsets.iter().enumerate() {
            for (j, b) in subsets.iter().enumerate() {
                for sigma in [|x: usize| x, |x: usize| 2 - x] {
                    let map: Option<Vec<usize>> = a.iter().map(|&x| b.iter().position(|&y| y == sigma(x))).collect();
                    if let Some(map) = map {
                        morphisms.push(Morphism { source: i, target: j, map });
                    }
                }
            }
        }
        ToyClass::new(names, structures, morphisms, 0).expect("line class is valid")
    }

    /// A point, and a pseudometric pair of points at distance 0, with every
    /// embedding. Two distinct types end up at distance 0.
    pub fn glued_pair() -> ToyClass {
        let q = Quantale::ext_real();
        let spaces = [
            VSpace::new(q.clone(), vec![], vec![]).expect("empty"),
            VSpace::new(q.clone(), vec!["x".into()], vec![vec![Value::ExtReal(0.0)]]).expect("point"),
            VSpace::new(
                q,
                vec!["x".into(), "y".into()],
                vec![vec![Value::ExtReal(0.0), Value::ExtReal(0.0)], vec![Value::ExtReal(0.0), Value::ExtReal(0.0)]],
            )
            .expect("pair"),
        ];
        let names = vec!["G0".into(), "G1".into(), "G2".into()];
        ToyClass::with_all_embeddings(names, spaces.into_iter().map(VStructure::bare).collect(), 0).expect("glued class")
    }
}

#[cfg(test)]
mod tests {
    use super::builtin::*;
    use super::*;

    #[test]
    fn injections_count() {
        assert_eq!(injections(2, 3).len(), 6);
        assert_eq!(injections(0, 3), vec![Vec::<usize>::new()]);
        assert!(injections(3, 2).is_empty());
    }

    #[test]
    fn discrete_class_shape() {
        let c = discrete_truth(3);
        // 1 + 1·1… injections: sum over n ≤ m of m!/(m−n)!
        let expected: usize = (0..=3usize)
            .flat_map(|n| (0..=3usize).map(move |m| injections(n, m).len()))
            .sum();
        assert_eq!(c.morphisms().len(), expected);
        assert!(check_ap(&c).passed());
    }

    #[test]
    fn three_types_over_two_points() {
        let c = discrete_truth(3);
        let e = TypeEngine::new(&c).unwrap();
        assert_eq!(e.types_over(2).unwrap().len(), 3);
        assert_eq!(e.types_over(0).unwrap().len(), 1);
    }

    #[test]
    fn realized_point_matches_identity_extension() {
        let c = discrete_truth(3);
        let e = TypeEngine::new(&c).unwrap();
        let t = e.types_over(2).unwrap();
        let id = c.find(2, 2, &[0, 1]).unwrap();
        for f in c.from(2) {
            let m = c.morphism(f);
            for x in 0..2 {
                let a = t.type_of(PointedExtension { morphism: f, point: m.map[x] }).unwrap();
                let b = t.type_of(PointedExtension { morphism: id, point: x }).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn single_object_class() {
        let c = ToyClass::new(vec!["A".into()], vec![VStructure::bare(VSpace::new(Quantale::truth(), vec![], vec![]).unwrap())], vec![], 0).unwrap();
        assert!(check_ap(&c).passed());
        let e = TypeEngine::new(&c).unwrap();
        let r = e.check_tameness(0, &Value::Truth(true), &Value::Truth(true)).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn line_class_distances() {
        let c = line(&[]);
        let e = TypeEngine::new(&c).unwrap();
        let empty = c.index_of("L").unwrap();
        let t = e.types_over(empty).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.distance(0, 1).value, Value::ExtReal(1.0));
    }

    #[test]
    fn deleted_amalgam_breaks_ap() {
        let c = line(&[0b111]);
        let r = check_ap(&c);
        assert!(!r.passed());
        assert!(matches!(TypeEngine::new(&c), Err(GaloisError::ApFails(_))));
    }

    #[test]
    fn glued_types_are_not_separated() {
        let c = glued_pair();
        let e = TypeEngine::new(&c).unwrap();
        let r = e.check_separation_and_ctp(1, 20).unwrap();
        assert!(!r.check("separation").unwrap().passed());
    }

    #[test]
    fn non_embedding_rejected() {
        let c = discrete_truth(1);
        let s = c.structures().to_vec();
        let bad = Morphism { source: 1, target: 1, map: vec![0] };
        assert!(ToyClass::new(c.names().to_vec(), s.clone(), vec![bad], 0).is_ok());
        let q = Quantale::truth();
        let two = VStructure::bare(VSpace::from_fn(q, vec!["a".into(), "b".into()], |_, _| Ok(Value::Truth(false))).unwrap());
        let err = ToyClass::new(
            vec!["P".into(), "Q".into()],
            vec![two.clone(), two],
            vec![Morphism { source: 0, target: 1, map: vec![0, 0] }],
            0,
        )
        .unwrap_err();
        assert!(matches!(err, GaloisError::InvalidMorphism { .. }));
    }
}
