//! TOML file formats for lattices, spaces, structures, classes and Ω-sets.
//!
//! Paths inside a file are resolved relative to that file. Value literals
//! are strings in the syntax of [`Quantale::parse_value`]; plain TOML
//! numbers are accepted for the real-valued instances.
//!
//! ```toml
//! # lattice
//! elements = ["bot", "a", "top"]
//! leq = [["bot", "a"], ["a", "top"]]
//! add = "join"                 # or a full table [["a", "a", "a"], ...]
//! zero = "bot"
//! top = "top"
//!
//! # space
//! quantale = "extreal"         # or "lattice:frame.toml"
//! points = ["x", "y"]
//! dist = [["x", "y", "1.5"]]   # mirrored when one order is missing
//! self = [["x", "0.5"]]        # partial spaces; the diagonal defaults to 0
//!
//! # structure: a space plus
//! constants = [["c", "x"]]
//! functions = [{ name = "f", arity = 1, rows = [["x", "y"], ["y", "x"]] }]
//! relations = [{ name = "R", arity = 1, rows = [["x", "0"], ["y", "1"]] }]
//!
//! # class
//! quantale = "truth"
//! structures = [{ name = "A", file = "a.toml" }, { name = "B", points = ["p"] }]
//! morphisms = [{ source = "A", target = "B", map = [["x", "p"]] }]
//!
//! # omega-set
//! frame = "frame.toml"         # read in its own order
//! points = ["x", "y"]
//! e = [["x", "y", "a"]]        # mirrored when missing; the diagonal defaults to top
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::galois::{Morphism, ToyClass};
use crate::partial::OmegaEqualitySet;
use crate::quantale::{AddSpec, FiniteLattice, Quantale, Value};
use crate::structures::{Signature, VStructure};
use crate::vmetric::VSpace;

#[derive(Debug, PartialEq)]
pub struct LoadError {
    pub path: PathBuf,
    pub message: String,
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path.display(), self.message)
    }
}

impl std::error::Error for LoadError {}

fn err(path: &Path, message: impl fmt::Display) -> LoadError {
    LoadError { path: path.to_path_buf(), message: message.to_string() }
}

fn read_doc<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| err(path, e))?;
    toml::from_str(&text).map_err(|e| err(path, e))
}

fn relative(base: &Path, file: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new(".")).join(file)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Literal {
    Str(String),
    Int(i64),
    Float(f64),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Str(s) => f.write_str(s),
            Literal::Int(i) => write!(f, "{i}"),
            Literal::Float(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AddDoc {
    Named(String),
    Table(Vec<(String, String, String)>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeDoc {
    name: Option<String>,
    elements: Vec<String>,
    #[serde(default)]
    leq: Vec<(String, String)>,
    add: AddDoc,
    zero: String,
    top: String,
}

pub fn load_lattice(path: &Path) -> Result<FiniteLattice, LoadError> {
    let doc: LatticeDoc = read_doc(path)?;
    let add = match doc.add {
        AddDoc::Named(s) if s == "join" => AddSpec::Join,
        AddDoc::Named(s) => return Err(err(path, format!("add must be \"join\" or a table, found \"{s}\""))),
        AddDoc::Table(t) => AddSpec::Table(t),
    };
    let name = doc
        .name
        .unwrap_or_else(|| path.file_stem().map_or("lattice".into(), |s| s.to_string_lossy().into_owned()));
    FiniteLattice::new(name, doc.elements, &doc.leq, add, &doc.zero, &doc.top).map_err(|e| err(path, e))
}

/// Resolves `truth`, `extreal`, `unit`, `errors`, `ddf` or `lattice:<path>`,
/// with lattice paths relative to `base`.
pub fn resolve_quantale(selector: &str, base: &Path) -> Result<Quantale, LoadError> {
    match selector.strip_prefix("lattice:") {
        Some(file) => Ok(Quantale::lattice(load_lattice(&relative(base, file))?)),
        None => Quantale::builtin(selector).map_err(|e| err(base, e)),
    }
}

#[derive(Default, Deserialize)]
struct SpaceDoc {
    quantale: Option<String>,
    #[serde(default)]
    points: Vec<String>,
    #[serde(default)]
    dist: Vec<(String, String, Literal)>,
    #[serde(default, rename = "self")]
    self_dist: Vec<(String, Literal)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionDoc {
    name: String,
    arity: usize,
    #[serde(default)]
    rows: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationDoc {
    name: String,
    arity: usize,
    #[serde(default)]
    rows: Vec<Vec<Literal>>,
}

#[derive(Default, Deserialize)]
struct StructureDoc {
    #[serde(flatten)]
    space: SpaceDoc,
    #[serde(default)]
    constants: Vec<(String, String)>,
    #[serde(default)]
    functions: Vec<FunctionDoc>,
    #[serde(default)]
    relations: Vec<RelationDoc>,
}

fn point(space: &VSpace, path: &Path, name: &str) -> Result<usize, LoadError> {
    space.index_of(name).map_err(|e| err(path, e))
}

fn build_space(doc: SpaceDoc, q: Quantale, path: &Path) -> Result<VSpace, LoadError> {
    let n = doc.points.len();
    let names = doc.points;
    let index = |p: &str| names.iter().position(|x| x == p).ok_or_else(|| err(path, format!("unknown point `{p}`")));
    let mut cells: Vec<Option<Value>> = vec![None; n * n];
    let mut put = |i: usize, j: usize, lit: &Literal| -> Result<(), LoadError> {
        let v = q.parse_value(&lit.to_string()).map_err(|e| err(path, e))?;
        if cells[i * n + j].replace(v).is_some() {
            return Err(err(path, format!("distance ({}, {}) given twice", names[i], names[j])));
        }
        Ok(())
    };
    for (x, y, lit) in &doc.dist {
        put(index(x)?, index(y)?, lit)?;
    }
    for (x, lit) in &doc.self_dist {
        let i = index(x)?;
        put(i, i, lit)?;
    }
    let mut rows = vec![Vec::with_capacity(n); n];
    for i in 0..n {
        for j in 0..n {
            let v = match (&cells[i * n + j], &cells[j * n + i]) {
                (Some(v), _) | (None, Some(v)) => v.clone(),
                (None, None) if i == j => q.zero(),
                (None, None) => return Err(err(path, format!("missing distance ({}, {})", names[i], names[j]))),
            };
            rows[i].push(v);
        }
    }
    VSpace::new(q, names, rows).map_err(|e| err(path, e))
}

fn quantale_of(doc: &SpaceDoc, default: Option<&Quantale>, path: &Path, tol: Option<f64>) -> Result<Quantale, LoadError> {
    let q = match (&doc.quantale, default) {
        (Some(sel), _) => resolve_quantale(sel, path)?,
        (None, Some(q)) => q.clone(),
        (None, None) => return Err(err(path, "missing `quantale`")),
    };
    Ok(match tol {
        Some(t) => q.with_tol(t),
        None => q,
    })
}

/// Loads a space; axioms are not checked here.
pub fn load_space(path: &Path, tol: Option<f64>) -> Result<VSpace, LoadError> {
    let doc: SpaceDoc = read_doc(path)?;
    let q = quantale_of(&doc, None, path, tol)?;
    build_space(doc, q, path)
}

fn build_structure(doc: StructureDoc, q: Quantale, path: &Path) -> Result<VStructure, LoadError> {
    let space = build_space(doc.space, q, path)?;
    let n = space.len();
    let mut sig = Signature::empty();
    let mut constants = Vec::new();
    for (c, p) in &doc.constants {
        sig.constants.push(c.clone());
        constants.push(point(&space, path, p)?);
    }
    let mut functions = Vec::new();
    for f in &doc.functions {
        sig.functions.push((f.name.clone(), f.arity));
        let mut table: Vec<Option<usize>> = vec![None; n.pow(f.arity as u32)];
        for row in &f.rows {
            if row.len() != f.arity + 1 {
                return Err(err(path, format!("function `{}`: row {:?} needs {} entries", f.name, row, f.arity + 1)));
            }
            let mut r = 0;
            for a in &row[..f.arity] {
                r = r * n + point(&space, path, a)?;
            }
            table[r] = Some(point(&space, path, &row[f.arity])?);
        }
        let found = table.iter().filter(|x| x.is_some()).count();
        let total: Option<Vec<usize>> = table.into_iter().collect();
        functions.push(total.ok_or_else(|| {
            err(path, format!("function `{}` is not total: {} of {} rows", f.name, found, n.pow(f.arity as u32)))
        })?);
    }
    let mut relations = Vec::new();
    for rel in &doc.relations {
        sig.relations.push((rel.name.clone(), rel.arity));
        let mut table: Vec<Option<Value>> = vec![None; n.pow(rel.arity as u32)];
        for row in &rel.rows {
            if row.len() != rel.arity + 1 {
                return Err(err(path, format!("relation `{}`: row needs {} entries", rel.name, rel.arity + 1)));
            }
            let mut r = 0;
            for a in &row[..rel.arity] {
                r = r * n + point(&space, path, &a.to_string())?;
            }
            let v = space.quantale().parse_value(&row[rel.arity].to_string()).map_err(|e| err(path, e))?;
            table[r] = Some(v);
        }
        let found = table.iter().filter(|x| x.is_some()).count();
        let total: Option<Vec<Value>> = table.into_iter().collect();
        relations.push(total.ok_or_else(|| {
            err(path, format!("relation `{}` is not total: {} of {} rows", rel.name, found, n.pow(rel.arity as u32)))
        })?);
    }
    VStructure::new(space, sig, constants, functions, relations).map_err(|e| err(path, e))
}

/// Loads a structure; nonexpansion is left to the structure check.
pub fn load_structure(path: &Path, tol: Option<f64>) -> Result<VStructure, LoadError> {
    let doc: StructureDoc = read_doc(path)?;
    let q = quantale_of(&doc.space, None, path, tol)?;
    build_structure(doc, q, path)
}

#[derive(Deserialize)]
struct ClassEntry {
    name: String,
    file: Option<String>,
    #[serde(flatten)]
    inline: StructureDoc,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismDoc {
    source: String,
    target: String,
    #[serde(default)]
    map: Vec<(String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDoc {
    quantale: Option<String>,
    #[serde(default)]
    ls_bound: usize,
    structures: Vec<ClassEntry>,
    #[serde(default)]
    morphisms: Vec<MorphismDoc>,
}

/// Loads a class and fails fast on the first structure whose
/// interpretations are not nonexpanding.
pub fn load_class(path: &Path, tol: Option<f64>) -> Result<ToyClass, LoadError> {
    let doc: ClassDoc = read_doc(path)?;
    let default = doc
        .quantale
        .as_deref()
        .map(|s| resolve_quantale(s, path).map(|q| tol.map_or(q.clone(), |t| q.with_tol(t))))
        .transpose()?;
    let mut names = Vec::new();
    let mut structures = Vec::new();
    for entry in doc.structures {
        let (s, at) = match entry.file {
            Some(file) => {
                let p = relative(path, &file);
                let d: StructureDoc = read_doc(&p)?;
                let q = quantale_of(&d.space, default.as_ref(), &p, tol)?;
                (build_structure(d, q, &p)?, p)
            }
            None => {
                let q = quantale_of(&entry.inline.space, default.as_ref(), path, tol)?;
                (build_structure(entry.inline, q, path)?, path.to_path_buf())
            }
        };
        let report = crate::structures::check_structure(&s).map_err(|e| err(&at, e))?;
        if let Some(bad) = report.failed().next() {
            let w = bad.witnesses.first().cloned().unwrap_or_default();
            return Err(err(&at, format!("structure `{}`: {} fails ({w})", entry.name, bad.name)));
        }
        if names.contains(&entry.name) {
            return Err(err(path, format!("duplicate structure `{}`", entry.name)));
        }
        names.push(entry.name);
        structures.push(s);
    }
    let find = |n: &str| names.iter().position(|x| x == n).ok_or_else(|| err(path, format!("unknown structure `{n}`")));
    let mut morphisms = Vec::new();
    for m in &doc.morphisms {
        let (source, target) = (find(&m.source)?, find(&m.target)?);
        let (src, tgt) = (structures[source].space(), structures[target].space());
        let mut map: Vec<Option<usize>> = vec![None; src.len()];
        for (a, b) in &m.map {
            map[point(src, path, a)?] = Some(point(tgt, path, b)?);
        }
        let map: Option<Vec<usize>> = map.into_iter().collect();
        let map = map.ok_or_else(|| err(path, format!("morphism {} -> {} is not total", m.source, m.target)))?;
        morphisms.push(Morphism { source, target, map });
    }
    ToyClass::new(names, structures, morphisms, doc.ls_bound).map_err(|e| err(path, e))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OmegaDoc {
    frame: String,
    points: Vec<String>,
    #[serde(default)]
    e: Vec<(String, String, String)>,
}

/// Either an Ω-set file (with a `frame` key) or a partial space to be
/// dualized.
pub enum OmegaInput {
    Set(OmegaEqualitySet),
    Space(VSpace),
}

pub fn load_omega(path: &Path, tol: Option<f64>) -> Result<OmegaInput, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| err(path, e))?;
    let table: toml::Table = toml::from_str(&text).map_err(|e| err(path, e))?;
    if !table.contains_key("frame") {
        return load_space(path, tol).map(OmegaInput::Space);
    }
    let doc: OmegaDoc = toml::from_str(&text).map_err(|e| err(path, e))?;
    let frame = load_lattice(&relative(path, &doc.frame))?;
    let n = doc.points.len();
    let index = |p: &str| doc.points.iter().position(|x| x == p).ok_or_else(|| err(path, format!("unknown point `{p}`")));
    let mut cells: Vec<Option<usize>> = vec![None; n * n];
    for (x, y, v) in &doc.e {
        let id = frame.id_of(v).ok_or_else(|| err(path, format!("unknown frame element `{v}`")))?;
        cells[index(x)? * n + index(y)?] = Some(id);
    }
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| cells[i * n + j].or(cells[j * n + i]).unwrap_or(if i == j { frame.top() } else { frame.zero() }))
                .collect()
        })
        .collect();
    OmegaEqualitySet::new(frame, doc.points, rows).map(OmegaInput::Set).map_err(|e| err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    fn tmp(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("quantmet-format-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&d).unwrap();
        d
    }

    #[test]
    fn space_mirrors_and_defaults() {
        let d = tmp("space");
        let p = write(&d, "s.toml", "quantale = \"extreal\"\npoints = [\"a\", \"b\"]\ndist = [[\"a\", \"b\", 1.5]]\nself = [[\"b\", \"0.25\"]]\n");
        let s = load_space(&p, None).unwrap();
        assert_eq!(s.dist(1, 0), &Value::ExtReal(1.5));
        assert_eq!(s.dist(0, 0), &Value::ExtReal(0.0));
        assert_eq!(s.dist(1, 1), &Value::ExtReal(0.25));
    }

    #[test]
    fn missing_distance_is_reported() {
        let d = tmp("missing");
        let p = write(&d, "s.toml", "quantale = \"unit\"\npoints = [\"a\", \"b\"]\n");
        assert!(load_space(&p, None).unwrap_err().message.contains("missing distance"));
    }

    #[test]
    fn lattice_cycle_is_antisymmetry_error() {
        let d = tmp("cycle");
        let p = write(
            &d,
            "l.toml",
            "elements = [\"a\", \"b\", \"c\"]\nleq = [[\"a\", \"b\"], [\"b\", \"c\"], [\"c\", \"a\"]]\nadd = \"join\"\nzero = \"a\"\ntop = \"c\"\n",
        );
        assert!(load_lattice(&p).unwrap_err().message.contains("antisymmetry"));
    }

    #[test]
    fn missing_function_row_is_totality_error() {
        let d = tmp("total");
        let p = write(
            &d,
            "st.toml",
            "quantale = \"truth\"\npoints = [\"a\", \"b\"]\ndist = [[\"a\", \"b\", \"inf\"]]\nfunctions = [{ name = \"f\", arity = 1, rows = [[\"a\", \"b\"]] }]\n",
        );
        assert!(load_structure(&p, None).unwrap_err().message.contains("not total"));
    }

    #[test]
    fn toml_syntax_error_names_line() {
        let d = tmp("syntax");
        let p = write(&d, "s.toml", "quantale = \"truth\"\npoints = [\"a\"\n");
        let e = load_space(&p, None).unwrap_err();
        assert!(e.to_string().contains("line"), "{e}");
    }

    #[test]
    fn class_with_lattice_and_inline_structures() {
        let d = tmp("class");
        write(&d, "two.toml", "elements = [\"0\", \"1\"]\nleq = [[\"0\", \"1\"]]\nadd = \"join\"\nzero = \"0\"\ntop = \"1\"\n");
        let p = write(
            &d,
            "c.toml",
            "quantale = \"lattice:two.toml\"\nstructures = [{ name = \"P\", points = [\"x\"] }, { name = \"Q\", points = [\"x\", \"y\"], dist = [[\"x\", \"y\", \"1\"]] }]\nmorphisms = [{ source = \"P\", target = \"Q\", map = [[\"x\", \"y\"]] }]\n",
        );
        let c = load_class(&p, None).unwrap();
        assert_eq!(c.len(), 2);
        // identities plus the one given map
        assert_eq!(c.morphisms().len(), 3);
    }
}
