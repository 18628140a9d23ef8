//! The adjoint Chevalley–Eilenberg complex in degrees 1 to 3, sliced by
//! weight: `Z²`, `B²`, `H²`, and `H¹` recomputed as `ker d¹ / Inner`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::{Tower, TruncatedAlgebra, Vector};
use crate::derivations::{self, require_graded, GradedOperator, H1Report};
use crate::error::{Error, Result};
use crate::exactla::{nullspace, rank, solve, RowSpace, Scalar, SparseMatrix};

/// An alternating 2-cochain, stored on index pairs `a < b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cochain2 {
    pub weight: i64,
    values: BTreeMap<(u32, u32), Vector>,
}

impl Cochain2 {
    pub fn zero(weight: i64) -> Self {
        Self {
            weight,
            values: BTreeMap::new(),
        }
    }

    /// Adds `v` to `φ(a, b)` (and so `−v` to `φ(b, a)`).
    pub fn add(&mut self, a: u32, b: u32, v: &Vector) {
        let (key, v) = match a.cmp(&b) {
            std::cmp::Ordering::Less => ((a, b), v.clone()),
            std::cmp::Ordering::Greater => ((b, a), -v),
            std::cmp::Ordering::Equal => return,
        };
        let slot = self.values.entry(key).or_default();
        *slot = &*slot + &v;
        if slot.is_zero() {
            self.values.remove(&key);
        }
    }

    pub fn value(&self, a: u32, b: u32) -> Vector {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self.values.get(&(a, b)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Greater => -&self.values.get(&(b, a)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Equal => Vector::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = ((u32, u32), &Vector)> + '_ {
        self.values.iter().map(|(&k, v)| (k, v))
    }

    pub fn describe(&self, l: &TruncatedAlgebra) -> Vec<String> {
        self.values
            .iter()
            .map(|((a, b), v)| format!("({}, {}) ↦ {}", l.label(*a), l.label(*b), l.format_vector(v)))
            .collect()
    }
}

impl fmt::Display for Cochain2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|((a, b), v)| format!("({a},{b})→{v}")).collect();
        write!(f, "[{}]", parts.join("; "))
    }
}

/// Coordinates of weight-`w` `p`-cochains, `p ∈ {1, 2}`: one unknown per
/// (increasing `p`-tuple of positions, target position) with the target in
/// the right degree. Tuples are restricted to degree sum at most `N`.
#[derive(Clone, Debug)]
pub struct CochainSlice {
    pub p: usize,
    /// `None` for the unsliced space of all cochains.
    pub weight: Option<i64>,
    pub vars: Vec<(Vec<usize>, usize)>,
    slots: HashMap<Vec<usize>, Vec<(usize, usize)>>,
}

impl CochainSlice {
    pub fn new(l: &TruncatedAlgebra, p: usize, weight: i64) -> Self {
        Self::build(l, p, Some(weight))
    }

    /// All cochains of degree `p`, every weight at once.
    pub fn unsliced(l: &TruncatedAlgebra, p: usize) -> Self {
        Self::build(l, p, None)
    }

    fn build(l: &TruncatedAlgebra, p: usize, weight: Option<i64>) -> Self {
        assert!(p == 1 || p == 2, "cochain degree must be 1 or 2");
        let n = l.dim();
        let top = i64::from(l.truncation());
        let tuples: Vec<Vec<usize>> = if p == 1 {
            (0..n).map(|a| vec![a]).collect()
        } else {
            (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| vec![a, b]))
                .filter(|t| i64::from(l.degree_at(t[0]) + l.degree_at(t[1])) <= top)
                .collect()
        };
        let mut vars = Vec::new();
        let mut slots: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
        for t in tuples {
            let d: i64 = t.iter().map(|&a| i64::from(l.degree_at(a))).sum();
            let entry = slots.entry(t.clone()).or_default();
            for target in 0..n {
                let ok = match weight {
                    Some(w) => i64::from(l.degree_at(target)) == d + w,
                    None => true,
                };
                if ok {
                    entry.push((target, vars.len()));
                    vars.push((t.clone(), target));
                }
            }
        }
        slots.retain(|_, v| !v.is_empty());
        Self { p, weight, vars, slots }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Unknowns of the value on a tuple given in any order, with the sign of
    /// the sorting permutation.
    fn slot(&self, tuple: &[usize]) -> Option<(i32, &[(usize, usize)])> {
        match tuple {
            [a] => self.slots.get(&vec![*a]).map(|v| (1, v.as_slice())),
            [a, b] if a < b => self.slots.get(&vec![*a, *b]).map(|v| (1, v.as_slice())),
            [a, b] if a > b => self.slots.get(&vec![*b, *a]).map(|v| (-1, v.as_slice())),
            _ => None,
        }
    }

    pub fn to_operator(&self, l: &TruncatedAlgebra, x: &[Scalar]) -> GradedOperator {
        let mut op = GradedOperator::zero();
        for ((t, target), c) in self.vars.iter().zip(x) {
            if !c.is_zero() {
                op.add_image(l.index_at(t[0]), &Vector::from_terms([(l.index_at(*target), c.clone())]));
            }
        }
        op
    }

    pub fn to_cochain(&self, l: &TruncatedAlgebra, x: &[Scalar]) -> Cochain2 {
        let mut phi = Cochain2::zero(self.weight.unwrap_or(0));
        for ((t, target), c) in self.vars.iter().zip(x) {
            if !c.is_zero() {
                phi.add(
                    l.index_at(t[0]),
                    l.index_at(t[1]),
                    &Vector::from_terms([(l.index_at(*target), c.clone())]),
                );
            }
        }
        phi
    }

    /// Dense coordinates of a 2-cochain; `None` if it has a value outside the
    /// slice.
    pub fn coords(&self, l: &TruncatedAlgebra, phi: &Cochain2) -> Option<Vec<Scalar>> {
        let mut x = vec![Scalar::zero(); self.len()];
        for ((a, b), v) in phi.values() {
            let (_, slot) = self.slot(&[l.position(a)?, l.position(b)?])?;
            for (k, c) in v.terms() {
                let t = l.position(k)?;
                let &(_, var) = slot.iter().find(|(tt, _)| *tt == t)?;
                x[var] = c.clone();
            }
        }
        Some(x)
    }
}

fn add_to(rows: &mut BTreeMap<usize, BTreeMap<usize, Scalar>>, row: usize, col: usize, c: Scalar) {
    *rows.entry(row).or_default().entry(col).or_insert_with(Scalar::zero) += c;
}

/// Positions `p` → pairs `(a, b)`, `a < b`, with `[a, b]` involving `p`.
fn bracket_sources(l: &TruncatedAlgebra) -> Vec<Vec<(usize, usize, Scalar)>> {
    let mut out = vec![Vec::new(); l.dim()];
    for a in 0..l.dim() {
        for b in a + 1..l.dim() {
            for (k, c) in l.bracket_at(a, b) {
                out[*k].push((a, b, c.clone()));
            }
        }
    }
    out
}

/// Matrix of `d¹: C¹_w → C²_w`, `ψ(a,b) = [da,b] + [a,db] − d[a,b]`, with
/// rows indexed by `c2` and columns by `c1`.
pub fn d1_matrix_between(l: &TruncatedAlgebra, c1: &CochainSlice, c2: &CochainSlice) -> SparseMatrix {
    let sources = bracket_sources(l);
    let mut m = SparseMatrix::new(c2.len(), c1.len());
    for (col, (src, t)) in c1.vars.iter().enumerate() {
        let p = src[0];
        let mut rows = BTreeMap::new();
        for o in 0..l.dim() {
            if o == p {
                continue;
            }
            // [d p, o] for the pair (p, o); [o, d p] for (o, p)
            let (pair, terms) = if p < o {
                ([p, o], l.bracket_at(*t, o))
            } else {
                ([o, p], l.bracket_at(o, *t))
            };
            let Some((_, slot)) = c2.slot(&pair) else { continue };
            for (k, c) in terms {
                if let Some(&(_, row)) = slot.iter().find(|(tt, _)| tt == k) {
                    add_to(&mut rows, row, col, c.clone());
                }
            }
        }
        for (a, b, c) in &sources[p] {
            if let Some((_, slot)) = c2.slot(&[*a, *b]) {
                if let Some(&(_, row)) = slot.iter().find(|(tt, _)| tt == t) {
                    add_to(&mut rows, row, col, -c.clone());
                }
            }
        }
        for (row, cols) in rows {
            for (col, c) in cols {
                m.add(row, col, &c);
            }
        }
    }
    m
}

/// `d¹` at weight `w`, with the slices it is written in.
pub fn d1_matrix(l: &TruncatedAlgebra, w: i64) -> (CochainSlice, CochainSlice, SparseMatrix) {
    let c1 = CochainSlice::new(l, 1, w);
    let c2 = CochainSlice::new(l, 2, w);
    let m = d1_matrix_between(l, &c1, &c2);
    (c1, c2, m)
}

/// `d¹ f` evaluated directly on every pair of degree sum at most `N`.
pub fn coboundary(l: &TruncatedAlgebra, f: &GradedOperator, weight: i64) -> Result<Cochain2> {
    let mut phi = Cochain2::zero(weight);
    let top = l.truncation();
    for (pa, a) in l.basis().iter().enumerate() {
        for b in &l.basis()[pa + 1..] {
            if a.degree + b.degree > top {
                continue;
            }
            let (va, vb) = (Vector::basis(a.index), Vector::basis(b.index));
            let psi = &(&l.bracket(&f.image(a.index), &vb)? + &l.bracket(&va, &f.image(b.index))?)
                - &f.apply(&l.bracket(&va, &vb)?);
            phi.add(a.index, b.index, &psi);
        }
    }
    Ok(phi)
}

/// Whether a tuple of total degree `degree_sum` is seen by weight-`w`
/// cochains of the truncation.
pub fn in_window(l: &TruncatedAlgebra, degree_sum: i64, w: i64) -> bool {
    let top = i64::from(l.truncation());
    degree_sum <= top && degree_sum + w <= top && degree_sum + w >= 0
}

/// The six-term expression `Z(a,b,c) = [a,φ(b,c)] − [b,φ(a,c)] + [c,φ(a,b)]
/// − φ([a,b],c) + φ([a,c],b) − φ([b,c],a)`.
pub fn d2_residual(l: &TruncatedAlgebra, phi: &Cochain2, triple: (u32, u32, u32)) -> Result<Vector> {
    let (a, b, c) = triple;
    let mut sum = 0i64;
    for i in [a, b, c] {
        sum += i64::from(l.degree_of(i).ok_or(Error::UnknownIndex(i))?);
    }
    if !in_window(l, sum, phi.weight) {
        return Err(Error::OutOfWindow {
            triple,
            weight: phi.weight,
        });
    }
    let e = Vector::basis;
    let br = |x: &Vector, y: &Vector| l.bracket(x, y);
    let phi_on = |x: &Vector, y: u32| -> Vector {
        let mut out = Vector::zero();
        for (k, ck) in x.terms() {
            out = &out + &phi.value(k, y).scale(ck);
        }
        out
    };
    let mut z = br(&e(a), &phi.value(b, c))?;
    z = &z - &br(&e(b), &phi.value(a, c))?;
    z = &z + &br(&e(c), &phi.value(a, b))?;
    z = &z - &phi_on(&br(&e(a), &e(b))?, c);
    z = &z + &phi_on(&br(&e(a), &e(c))?, b);
    z = &z - &phi_on(&br(&e(b), &e(c))?, a);
    Ok(z)
}

/// Stacked `Z(a,b,c) = 0` system over the unknowns of `c2`, one block per
/// in-window triple.
pub fn cocycle_system(l: &TruncatedAlgebra, c2: &CochainSlice) -> SparseMatrix {
    let n = l.dim();
    let w = c2.weight.unwrap_or(0);
    let blocks: Vec<Vec<BTreeMap<usize, Scalar>>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut out = Vec::new();
            for b in a + 1..n {
                for c in b + 1..n {
                    let sum = i64::from(l.degree_at(a) + l.degree_at(b) + l.degree_at(c));
                    let ok = match c2.weight {
                        Some(_) => in_window(l, sum, w),
                        None => sum <= i64::from(l.truncation()),
                    };
                    if ok {
                        out.extend(triple_rows(l, c2, a, b, c).into_values());
                    }
                }
            }
            out
        })
        .collect();
    let mut m = SparseMatrix::new(0, c2.len());
    for row in blocks.iter().flatten() {
        m.push_row(row.iter().map(|(v, c)| (*v, c)));
    }
    m
}

fn triple_rows(
    l: &TruncatedAlgebra,
    c2: &CochainSlice,
    a: usize,
    b: usize,
    c: usize,
) -> BTreeMap<usize, BTreeMap<usize, Scalar>> {
    let mut rows = BTreeMap::new();
    // ±[u, φ(v, w)]
    for (sign, u, pair) in [(1, a, [b, c]), (-1, b, [a, c]), (1, c, [a, b])] {
        if let Some((s, slot)) = c2.slot(&pair) {
            for &(t, var) in slot {
                for (k, coef) in l.bracket_at(u, t) {
                    add_to(&mut rows, *k, var, coef * Scalar::from_integer((sign * s).into()));
                }
            }
        }
    }
    // ∓φ([u, v], w)
    for (sign, (u, v), other) in [(-1, (a, b), c), (1, (a, c), b), (-1, (b, c), a)] {
        for (m, cm) in l.bracket_at(u, v) {
            if let Some((s, slot)) = c2.slot(&[*m, other]) {
                for &(t, var) in slot {
                    add_to(&mut rows, t, var, cm * Scalar::from_integer((sign * s).into()));
                }
            }
        }
    }
    for r in rows.values_mut() {
        r.retain(|_, x| !x.is_zero());
    }
    rows.retain(|_, r| !r.is_empty());
    rows
}

/// `Z²`, `B²` and representatives of `H²` at one weight of one truncation.
#[derive(Clone, Debug)]
pub struct H2Slice {
    pub weight: i64,
    pub cochains: usize,
    pub cocycles: Vec<Cochain2>,
    pub coboundary_dim: usize,
    /// Cocycles whose classes form a basis of `H²_w`.
    pub witnesses: Vec<Cochain2>,
}

impl H2Slice {
    pub fn z(&self) -> usize {
        self.cocycles.len()
    }

    pub fn h(&self) -> usize {
        self.witnesses.len()
    }
}

pub fn h2_at(l: &TruncatedAlgebra, w: i64) -> Result<H2Slice> {
    require_graded(l)?;
    let (c1, c2, d1) = d1_matrix(l, w);
    let z = cocycle_system(l, &c2);
    if !z.mul(&d1).is_zero() {
        return Err(Error::Inconsistent(format!("coboundaries of weight {w} are not cocycles")));
    }
    let kernel = nullspace(&z);
    let b = rank(&d1);
    let mut space = RowSpace::new(c2.len());
    for col in 0..c1.len() {
        space.insert(&d1.column(col));
    }
    let mut witnesses = Vec::new();
    for x in &kernel {
        if space.insert(x) {
            if solve(&d1, x).is_some() {
                return Err(Error::Inconsistent(format!(
                    "weight-{w} cocycle reported outside the coboundaries solves d¹f = φ"
                )));
            }
            witnesses.push(c2.to_cochain(l, x));
        }
    }
    if kernel.len() != b + witnesses.len() {
        return Err(Error::Inconsistent(format!("dim Z² − dim B² at weight {w} does not match the witnesses")));
    }
    Ok(H2Slice {
        weight: w,
        cochains: c2.len(),
        cocycles: kernel.iter().map(|x| c2.to_cochain(l, x)).collect(),
        coboundary_dim: b,
        witnesses,
    })
}

/// Weights at which the 2-cochain slice can be nonempty.
pub fn weights_2(l: &TruncatedAlgebra) -> Vec<i64> {
    let top = l.truncation();
    let degrees: Vec<i64> = l.basis().iter().map(|b| i64::from(b.degree)).collect();
    let (Some(&lo), Some(&hi)) = (degrees.iter().min(), degrees.iter().max()) else {
        return Vec::new();
    };
    let sums: Vec<i64> = (0..degrees.len())
        .flat_map(|a| (a + 1..degrees.len()).map(move |b| (a, b)))
        .map(|(a, b)| degrees[a] + degrees[b])
        .filter(|&s| s <= i64::from(top))
        .collect();
    let (Some(&smin), Some(&smax)) = (sums.iter().min(), sums.iter().max()) else {
        return Vec::new();
    };
    (lo - smax..=hi - smin).collect()
}

#[derive(Clone, Debug)]
pub struct H2Record {
    pub weight: i64,
    pub z_lo: usize,
    pub b_lo: usize,
    pub z_hi: usize,
    pub b_hi: usize,
    pub stable: bool,
    pub witnesses: Vec<Cochain2>,
}

impl H2Record {
    pub fn h_lo(&self) -> usize {
        self.z_lo - self.b_lo
    }

    pub fn h_hi(&self) -> usize {
        self.z_hi - self.b_hi
    }
}

#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub algebra: String,
    pub truncation: u32,
    pub margin: u32,
    pub cutoff: i64,
    pub records: Vec<H2Record>,
}

impl CohomologyReport {
    pub fn record(&self, w: i64) -> Option<&H2Record> {
        self.records.iter().find(|r| r.weight == w)
    }

    pub fn stable(&self) -> impl Iterator<Item = &H2Record> + '_ {
        self.records.iter().filter(|r| r.stable)
    }
}

/// `H²` by weight at both levels of a tower.
pub fn h2(t: &Tower) -> Result<CohomologyReport> {
    require_graded(t.lo())?;
    require_graded(t.hi())?;
    let cutoff = t.cutoff();
    let records = weights_2(t.lo())
        .into_par_iter()
        .map(|w| {
            let lo = h2_at(t.lo(), w)?;
            let hi = h2_at(t.hi(), w)?;
            Ok(H2Record {
                weight: w,
                z_lo: lo.z(),
                b_lo: lo.coboundary_dim,
                z_hi: hi.z(),
                b_hi: hi.coboundary_dim,
                stable: w <= cutoff && lo.h() == hi.h(),
                witnesses: lo.witnesses,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CohomologyReport {
        algebra: t.lo().name().to_owned(),
        truncation: t.truncation(),
        margin: t.margin(),
        cutoff,
        records,
    })
}

/// `dim ker d¹` at one weight.
pub fn cocycles_1(l: &TruncatedAlgebra, w: i64) -> usize {
    let (c1, _, d1) = d1_matrix(l, w);
    c1.len() - rank(&d1)
}

/// `H¹` from the complex, checked weight by weight against the derivation
/// engine.
pub fn h1_via_complex(t: &Tower) -> Result<H1Report> {
    let report = derivations::h1(t)?;
    report.records.par_iter().try_for_each(|r| {
        let lo = cocycles_1(t.lo(), r.weight);
        let hi = cocycles_1(t.hi(), r.weight);
        if lo != r.der_lo || hi != r.der_hi {
            return Err(Error::Inconsistent(format!(
                "weight {}: ker d¹ has dimensions {lo}/{hi}, derivations {}/{}",
                r.weight, r.der_lo, r.der_hi
            )));
        }
        Ok(())
    })?;
    Ok(report)
}

#[cfg(test)]
mod tests;
