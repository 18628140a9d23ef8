//! Truncated graded Lie algebras given by sparse structure constants.
//!
//! A [`TruncatedAlgebra`] is the quotient of a graded (or filtered) Lie
//! algebra by the ideal of all components of degree above the truncation `N`.
//! Bracket results of degree above `N` are dropped, so the model is a genuine
//! finite-dimensional Lie algebra and every violation found in it is real.

mod checks;
mod series;
mod tower;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactla::{format_scalar, Scalar};

pub use checks::{JacobiViolation, ValidationReport, Violation};
pub use series::{AssociatedGraded, SeriesChain, Subspace};
pub use tower::Tower;

/// One basis vector: its identifier, grading degree and an optional display
/// name.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub index: u32,
    pub degree: u32,
    pub label: Option<String>,
}

impl BasisElement {
    pub fn new(index: u32, degree: u32) -> Self {
        Self {
            index,
            degree,
            label: None,
        }
    }

    pub fn labeled(index: u32, degree: u32, label: impl Into<String>) -> Self {
        Self {
            index,
            degree,
            label: Some(label.into()),
        }
    }

    pub fn name(&self) -> String {
        self.label.clone().unwrap_or_else(|| format!("b{}", self.index))
    }
}

/// One row of the structure table: `[left, right] = Σ c·target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub left: u32,
    pub right: u32,
    pub terms: Vec<(u32, Scalar)>,
}

/// Structure constants as presented: a list of entries with `left < right`.
///
/// The reverse brackets follow by antisymmetry. The list is kept exactly as
/// given so that [`TruncatedAlgebra::validate`] can report duplicates and
/// malformed rows from user input.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureTable {
    entries: Vec<TableEntry>,
}

impl StructureTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: Vec<TableEntry>) -> Self {
        Self { entries }
    }

    /// Adds `c·target` to `[left, right]`, normalizing the pair order. Intended
    /// for builders: merges into an existing entry instead of duplicating it.
    pub fn add_term(&mut self, left: u32, right: u32, target: u32, c: Scalar) {
        if c.is_zero() || left == right {
            return;
        }
        let (l, r, c) = if left < right {
            (left, right, c)
        } else {
            (right, left, -c)
        };
        let pos = match self
            .entries
            .binary_search_by(|e| (e.left, e.right).cmp(&(l, r)))
        {
            Ok(p) => p,
            Err(p) => {
                self.entries.insert(
                    p,
                    TableEntry {
                        left: l,
                        right: r,
                        terms: Vec::new(),
                    },
                );
                p
            }
        };
        let terms = &mut self.entries[pos].terms;
        match terms.binary_search_by_key(&target, |(k, _)| *k) {
            Ok(t) => {
                terms[t].1 += c;
                if terms[t].1.is_zero() {
                    terms.remove(t);
                }
            }
            Err(t) => terms.insert(t, (target, c)),
        }
        if terms.is_empty() {
            self.entries.remove(pos);
        }
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A sparse vector: basis index → nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(BTreeMap<u32, Scalar>);

impl Vector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(index: u32) -> Self {
        Self::from_terms([(index, Scalar::from_integer(1.into()))])
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, Scalar)>>(terms: I) -> Self {
        let mut v = Self::zero();
        for (i, c) in terms {
            v.add_term(i, &c);
        }
        v
    }

    pub fn add_term(&mut self, index: u32, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(index).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&index);
        }
    }

    pub fn coeff(&self, index: u32) -> Scalar {
        self.0.get(&index).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Scalar)> + '_ {
        self.0.iter().map(|(&i, c)| (i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self(self.0.iter().map(|(&i, v)| (i, v * c)).collect())
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        let mut out = self.clone();
        for (i, c) in rhs.terms() {
            out.add_term(i, c);
        }
        out
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        self + &(-rhs)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|(&i, c)| (i, -c)).collect())
    }
}

impl Mul<&Vector> for &Scalar {
    type Output = Vector;
    fn mul(self, rhs: &Vector) -> Vector {
        rhs.scale(self)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (n, (i, c)) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})·b{}", format_scalar(c), i)?;
        }
        Ok(())
    }
}

/// A finite-dimensional Lie algebra obtained by truncating a graded algebra
/// at degree `N`.
///
/// Besides the presented [`StructureTable`] the algebra keeps a dense
/// positional copy of the bracket (`position` = place in [`basis`], which is
/// sorted by index). The positional API is what the heavy kernels use.
///
/// [`basis`]: TruncatedAlgebra::basis
#[derive(Clone, Debug)]
pub struct TruncatedAlgebra {
    name: String,
    basis: Vec<BasisElement>,
    table: StructureTable,
    truncation: u32,
    period: u32,
    pos: HashMap<u32, usize>,
    dense: Vec<Vec<Vec<(usize, Scalar)>>>,
}

impl PartialEq for TruncatedAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.basis == other.basis
            && self.table == other.table
            && self.truncation == other.truncation
            && self.period == other.period
    }
}

impl Eq for TruncatedAlgebra {}

impl TruncatedAlgebra {
    /// Assembles an algebra. Fails on basis-level defects (duplicate indices,
    /// degrees above the truncation, table rows naming unknown elements);
    /// table-level defects are left for [`validate`](Self::validate).
    pub fn new(
        name: impl Into<String>,
        mut basis: Vec<BasisElement>,
        table: StructureTable,
        truncation: u32,
        period: u32,
    ) -> Result<Self> {
        if truncation == 0 {
            return Err(Error::InvalidTruncation("truncation must be positive".into()));
        }
        if period == 0 {
            return Err(Error::InvalidTruncation("period must be positive".into()));
        }
        basis.sort_by_key(|b| b.index);
        let mut pos = HashMap::with_capacity(basis.len());
        for (p, b) in basis.iter().enumerate() {
            if pos.insert(b.index, p).is_some() {
                return Err(Error::DuplicateIndex(b.index));
            }
            if b.degree > truncation {
                return Err(Error::DegreeAboveTruncation {
                    index: b.index,
                    degree: b.degree,
                    truncation,
                });
            }
        }
        let n = basis.len();
        let mut acc: Vec<Vec<BTreeMap<usize, Scalar>>> = vec![vec![BTreeMap::new(); n]; n];
        for e in table.entries() {
            let l = *pos.get(&e.left).ok_or(Error::UnknownIndex(e.left))?;
            let r = *pos.get(&e.right).ok_or(Error::UnknownIndex(e.right))?;
            if l == r {
                continue;
            }
            for (t, c) in &e.terms {
                // unknown targets are reported by `validate`
                let Some(&k) = pos.get(t) else { continue };
                let slot = acc[l][r].entry(k).or_insert_with(Scalar::zero);
                *slot += c;
                let slot = acc[r][l].entry(k).or_insert_with(Scalar::zero);
                *slot -= c;
            }
        }
        let dense = acc
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|m| m.into_iter().filter(|(_, c)| !c.is_zero()).collect())
                    .collect()
            })
            .collect();
        Ok(Self {
            name: name.into(),
            basis,
            table,
            truncation,
            period,
            pos,
            dense,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, index: u32) -> Option<usize> {
        self.pos.get(&index).copied()
    }

    pub fn element(&self, index: u32) -> Option<&BasisElement> {
        self.position(index).map(|p| &self.basis[p])
    }

    pub fn degree_of(&self, index: u32) -> Option<u32> {
        self.element(index).map(|b| b.degree)
    }

    /// Index of the basis element with the given label.
    pub fn index_of(&self, label: &str) -> Option<u32> {
        self.basis
            .iter()
            .find(|b| b.label.as_deref() == Some(label))
            .map(|b| b.index)
    }

    pub fn index_at(&self, position: usize) -> u32 {
        self.basis[position].index
    }

    pub fn degree_at(&self, position: usize) -> u32 {
        self.basis[position].degree
    }

    /// Bracket of two basis elements by position.
    pub fn bracket_at(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        &self.dense[a][b]
    }

    /// Positions of the basis elements of the given degree.
    pub fn positions_of_degree(&self, degree: u32) -> impl Iterator<Item = usize> + '_ {
        self.basis
            .iter()
            .enumerate()
            .filter(move |(_, b)| b.degree == degree)
            .map(|(p, _)| p)
    }

    /// True if some basis element has degree 0 (extension generators).
    pub fn has_degree_zero(&self) -> bool {
        self.basis.iter().any(|b| b.degree == 0)
    }

    pub fn to_dense(&self, v: &Vector) -> Result<Vec<Scalar>> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, c) in v.terms() {
            let p = self.position(i).ok_or(Error::UnknownIndex(i))?;
            out[p] = c.clone();
        }
        Ok(out)
    }

    pub fn from_dense(&self, v: &[Scalar]) -> Vector {
        Vector::from_terms(
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(p, c)| (self.index_at(p), c.clone())),
        )
    }

    /// Bilinear bracket of two vectors.
    pub fn bracket(&self, a: &Vector, b: &Vector) -> Result<Vector> {
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, ca) in a.terms() {
            let pa = self.position(i).ok_or(Error::UnknownIndex(i))?;
            for (j, cb) in b.terms() {
                let pb = self.position(j).ok_or(Error::UnknownIndex(j))?;
                for (k, c) in &self.dense[pa][pb] {
                    *out.entry(*k).or_insert_with(Scalar::zero) += ca * cb * c;
                }
            }
        }
        Ok(Vector::from_terms(
            out.into_iter().map(|(k, c)| (self.index_at(k), c)),
        ))
    }

    /// Bracket of two dense positional vectors.
    pub fn bracket_dense(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (pa, ca) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (pb, cb) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (k, c) in &self.dense[pa][pb] {
                    out[*k] += ca * cb * c;
                }
            }
        }
        out
    }

    /// The quotient by all components of degree above `n` (`n ≤ N`).
    pub fn quotient(&self, n: u32) -> Result<Self> {
        if n > self.truncation {
            return Err(Error::InvalidTruncation(format!(
                "cannot restrict truncation {} to the larger {n}",
                self.truncation
            )));
        }
        let keep = |i: u32| self.degree_of(i).is_some_and(|d| d <= n);
        let basis = self
            .basis
            .iter()
            .filter(|b| b.degree <= n)
            .cloned()
            .collect();
        let entries = self
            .table
            .entries()
            .iter()
            .filter(|e| keep(e.left) && keep(e.right))
            .filter_map(|e| {
                let terms: Vec<_> = e.terms.iter().filter(|(t, _)| keep(*t)).cloned().collect();
                (!terms.is_empty()).then_some(TableEntry {
                    left: e.left,
                    right: e.right,
                    terms,
                })
            })
            .collect();
        Self::new(
            self.name.clone(),
            basis,
            StructureTable::from_entries(entries),
            n,
            self.period,
        )
    }

    /// Same algebra with every basis index passed through `f` (which must be
    /// injective on the basis).
    pub fn reindexed(&self, f: impl Fn(u32) -> u32) -> Result<Self> {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElement {
                index: f(b.index),
                ..b.clone()
            })
            .collect();
        let mut table = StructureTable::new();
        for e in self.table.entries() {
            for (t, c) in &e.terms {
                table.add_term(f(e.left), f(e.right), f(*t), c.clone());
            }
        }
        Self::new(self.name.clone(), basis, table, self.truncation, self.period)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Human-readable name of a basis index.
    pub fn label(&self, index: u32) -> String {
        self.element(index)
            .map(BasisElement::name)
            .unwrap_or_else(|| format!("b{index}"))
    }

    /// Formats a vector with basis labels, e.g. `-3·f5 + e2`.
    pub fn format_vector(&self, v: &Vector) -> String {
        if v.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (i, c)) in v.terms().enumerate() {
            let neg = c < &Scalar::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (n, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if mag != Scalar::from_integer(1.into()) {
                out.push_str(&format_scalar(&mag));
                out.push('·');
            }
            out.push_str(&self.label(i));
        }
        out
    }
}
