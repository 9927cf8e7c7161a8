//! User-supplied finite lattices with a monoid table.
//!
//! Construction checks that the order is a lattice with the declared bottom
//! and top. The addition table is only checked for totality and closure;
//! its algebraic laws are the business of the law suite, which reports
//! failures with witnesses instead of refusing to load.

use std::collections::HashMap;

use thiserror::Error;

/// Elements are capped so the cubic validation tables stay instant.
pub const MAX_ELEMENTS: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum LatticeError {
    #[error("lattice has no elements")]
    Empty,
    #[error("lattice has {0} elements, more than the supported {MAX_ELEMENTS}")]
    TooLarge(usize),
    #[error("duplicate element name `{0}`")]
    Duplicate(String),
    #[error("unknown element `{0}`")]
    Unknown(String),
    #[error("antisymmetry violated: `{0}` ≤ `{1}` and `{1}` ≤ `{0}`")]
    Antisymmetry(String, String),
    #[error("`{0}` and `{1}` have no greatest lower bound")]
    NoMeet(String, String),
    #[error("`{0}` and `{1}` have no least upper bound")]
    NoJoin(String, String),
    #[error("declared zero `{0}` is not the least element")]
    BadZero(String),
    #[error("declared top `{0}` is not the greatest element")]
    BadTop(String),
    #[error("addition table is missing the entry for (`{0}`, `{1}`)")]
    MissingAdd(String, String),
    #[error("addition table has conflicting entries for (`{0}`, `{1}`)")]
    ConflictingAdd(String, String),
}

/// How the monoid operation of a finite lattice is given.
#[derive(Clone, Debug)]
pub enum AddSpec {
    /// Lattice join in the quantale order (the frame case).
    Join,
    /// Explicit table of `(a, b, a + b)` triples over element names.
    Table(Vec<(String, String, String)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteLattice {
    name: String,
    elements: Vec<String>,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    add: Vec<usize>,
    zero: usize,
    top: usize,
}

impl FiniteLattice {
    /// Builds a lattice from generating order pairs. The reflexive-transitive
    /// closure of `leq_pairs` is taken before validation.
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        leq_pairs: &[(String, String)],
        add: AddSpec,
        zero: &str,
        top: &str,
    ) -> Result<Self, LatticeError> {
        let n = elements.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        if n > MAX_ELEMENTS {
            return Err(LatticeError::TooLarge(n));
        }
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(LatticeError::Duplicate(e.clone()));
            }
        }
        let id = |s: &str| index.get(s).copied().ok_or_else(|| LatticeError::Unknown(s.to_string()));
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in leq_pairs {
            leq[id(a)? * n + id(b)?] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let zero = id(zero)?;
        let top = id(top)?;
        let mut add_table = vec![usize::MAX; n * n];
        if let AddSpec::Table(rows) = &add {
            for (a, b, c) in rows {
                let (a, b, c) = (id(a)?, id(b)?, id(c)?);
                let slot = &mut add_table[a * n + b];
                if *slot != usize::MAX && *slot != c {
                    return Err(LatticeError::ConflictingAdd(elements[a].clone(), elements[b].clone()));
                }
                *slot = c;
            }
        }
        Self::from_order(name.into(), elements, leq, add_table, matches!(add, AddSpec::Join), zero, top)
    }

    /// Shared validation once the order matrix is closed.
    fn from_order(
        name: String,
        elements: Vec<String>,
        leq: Vec<bool>,
        mut add: Vec<usize>,
        add_is_join: bool,
        zero: usize,
        top: usize,
    ) -> Result<Self, LatticeError> {
        let n = elements.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(LatticeError::Antisymmetry(elements[i].clone(), elements[j].clone()));
                }
            }
        }
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&c| leq[c * n + a] && leq[c * n + b]).collect();
                let glb = lower.iter().copied().find(|&c| lower.iter().all(|&d| leq[d * n + c]));
                meet[a * n + b] = glb.ok_or_else(|| LatticeError::NoMeet(elements[a].clone(), elements[b].clone()))?;
                let upper: Vec<usize> = (0..n).filter(|&c| leq[a * n + c] && leq[b * n + c]).collect();
                let lub = upper.iter().copied().find(|&c| upper.iter().all(|&d| leq[c * n + d]));
                join[a * n + b] = lub.ok_or_else(|| LatticeError::NoJoin(elements[a].clone(), elements[b].clone()))?;
            }
        }
        if !(0..n).all(|x| leq[zero * n + x]) {
            return Err(LatticeError::BadZero(elements[zero].clone()));
        }
        if !(0..n).all(|x| leq[x * n + top]) {
            return Err(LatticeError::BadTop(elements[top].clone()));
        }
        if add_is_join {
            add.clone_from(&join);
        }
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] == usize::MAX {
                    return Err(LatticeError::MissingAdd(elements[a].clone(), elements[b].clone()));
                }
            }
        }
        Ok(FiniteLattice {
            name,
            elements,
            leq,
            meet,
            join,
            add,
            zero,
            top,
        })
    }

    /// The two-element frame `{0, ∞}` with join as addition.
    pub fn truth() -> Self {
        Self::chain(2).renamed("truth", &["0", "inf"])
    }

    /// The chain `0 < 1 < … < n−1` with join (max) as addition.
    pub fn chain(n: usize) -> Self {
        let elements = (0..n).map(|i| i.to_string()).collect();
        let leq = (0..n * n).map(|k| k / n <= k % n).collect();
        Self::from_order(format!("chain{n}"), elements, leq, Vec::new(), true, 0, n - 1)
            .expect("chains are lattices")
    }

    /// The Boolean algebra of subsets of a `k`-element set, ordered by
    /// inclusion with union as addition. Elements are named by bitmask.
    pub fn powerset(k: u32) -> Self {
        let sets: Vec<u32> = (0..1u32 << k).collect();
        Self::closure_system(format!("powerset{k}"), &sets, k).expect("powersets are lattices")
    }

    /// The lattice of a family of subsets of a `k`-element set (bitmasks),
    /// closed under intersection and completed with the full set. Ordered by
    /// inclusion; addition is the lattice join. Every finite lattice arises
    /// this way, which makes this the random-lattice generator.
    pub fn closure_system(name: impl Into<String>, family: &[u32], k: u32) -> Result<Self, LatticeError> {
        let full = if k >= 32 { u32::MAX } else { (1u32 << k) - 1 };
        let mut sets: Vec<u32> = family.iter().map(|s| s & full).collect();
        sets.push(full);
        sets.sort_unstable();
        sets.dedup();
        loop {
            let mut grown = false;
            let snapshot = sets.clone();
            for (i, &a) in snapshot.iter().enumerate() {
                for &b in &snapshot[i + 1..] {
                    let c = a & b;
                    if let Err(pos) = sets.binary_search(&c) {
                        sets.insert(pos, c);
                        grown = true;
                    }
                }
            }
            if !grown {
                break;
            }
        }
        if sets.len() > MAX_ELEMENTS {
            return Err(LatticeError::TooLarge(sets.len()));
        }
        // Sorted numerically, the first set is the intersection of all sets
        // and the last is `full`.
        let n = sets.len();
        let elements = sets.iter().map(|s| format!("s{s}")).collect();
        let leq = (0..n * n).map(|ij| sets[ij / n] & !sets[ij % n] == 0).collect();
        let zero = (0..n).find(|&i| sets.iter().all(|&s| sets[i] & !s == 0)).expect("least set exists");
        Self::from_order(name.into(), elements, leq, Vec::new(), true, zero, n - 1)
    }

    /// The order-dual lattice, whose addition is its own join (the meet of
    /// `self`). Element ids and names are shared with `self`, and taking the
    /// dual twice gives back `self`.
    pub fn dual(&self) -> Self {
        let n = self.len();
        let name = match self.name.strip_suffix("^op") {
            Some(base) => base.to_string(),
            None => format!("{}^op", self.name),
        };
        let leq = (0..n * n).map(|ij| self.leq[(ij % n) * n + ij / n]).collect();
        FiniteLattice {
            name,
            elements: self.elements.clone(),
            leq,
            meet: self.join.clone(),
            join: self.meet.clone(),
            add: self.meet.clone(),
            zero: self.top,
            top: self.zero,
        }
    }

    /// Replaces the addition table, keeping the order. Used to build
    /// deliberately broken quantales for negative tests.
    pub fn with_add_table(mut self, table: impl Fn(usize, usize) -> usize) -> Self {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                self.add[a * n + b] = table(a, b) % n;
            }
        }
        self
    }

    pub fn renamed(mut self, name: &str, elements: &[&str]) -> Self {
        assert_eq!(elements.len(), self.elements.len());
        self.name = name.to_string();
        self.elements = elements.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_name(&self, id: usize) -> &str {
        &self.elements[id]
    }

    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.len() + b]
    }

    /// `q ∸ p`, the meet of `{r | p + r ≥ q}` computed from the tables.
    pub fn truncated_sub(&self, q: usize, p: usize) -> usize {
        (0..self.len())
            .filter(|&r| self.leq(q, self.add(p, r)))
            .fold(self.top, |acc, r| self.meet(acc, r))
    }

    /// Whether meets distribute over joins (equivalently the converse).
    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c))))
        })
    }

    /// Whether this is a finite frame in the quantale orientation: the
    /// lattice is distributive and addition is the join.
    pub fn is_frame(&self) -> bool {
        self.add == self.join && self.is_distributive()
    }
}
