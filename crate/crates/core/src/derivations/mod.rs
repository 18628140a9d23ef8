//! Derivations by weight, inner derivations, `H¹`, potential nilpotency and
//! the semidirect extension constructor.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{BasisElement, StructureTable, Subspace, Tower, TruncatedAlgebra, Vector};
use crate::error::{Error, Result};
use crate::exactla::{nullspace, RowSpace, Scalar, SparseMatrix};

mod operator;
pub(crate) mod slice;

pub use operator::GradedOperator;
use slice::{weight_range, OpSlice};

pub(crate) fn require_graded(l: &TruncatedAlgebra) -> Result<()> {
    let violations = l.grading_violations();
    if violations > 0 {
        return Err(Error::NotGraded {
            name: l.name().to_owned(),
            violations,
        });
    }
    Ok(())
}

/// Pairs `a < b` whose bracket and its image under a weight-`w` map both
/// stay within the truncation.
pub(crate) fn window_pairs(l: &TruncatedAlgebra, w: i64) -> impl Iterator<Item = (usize, usize)> + '_ {
    let n = i64::from(l.truncation());
    (0..l.dim()).flat_map(move |a| {
        (a + 1..l.dim()).filter_map(move |b| {
            let d = i64::from(l.degree_at(a)) + i64::from(l.degree_at(b));
            (d <= n && d + w <= n && d + w >= 0).then_some((a, b))
        })
    })
}

/// Rows of `D[a,b] − [Da,b] − [a,Db] = 0` over the unknowns of `s`.
fn leibniz_matrix(l: &TruncatedAlgebra, s: &OpSlice) -> SparseMatrix {
    let mut m = SparseMatrix::new(0, s.len());
    for (a, b) in window_pairs(l, s.weight) {
        let mut rows: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
        let mut put = |row: usize, var: usize, c: Scalar| {
            *rows.entry(row).or_default().entry(var).or_insert_with(Scalar::zero) += c;
        };
        for (k, c) in l.bracket_at(a, b) {
            for &(t, v) in s.of_source(*k) {
                put(t, v, c.clone());
            }
        }
        for &(t, v) in s.of_source(a) {
            for (k, c) in l.bracket_at(t, b) {
                put(*k, v, -c.clone());
            }
        }
        for &(t, v) in s.of_source(b) {
            for (k, c) in l.bracket_at(a, t) {
                put(*k, v, -c.clone());
            }
        }
        for row in rows.values() {
            m.push_row(row.iter().map(|(v, c)| (*v, c)));
        }
    }
    m
}

/// Basis of the weight-`w` derivations of a graded truncation, from the full
/// Leibniz system on all in-window pairs.
pub fn derivations_at(l: &TruncatedAlgebra, w: i64) -> Result<Vec<GradedOperator>> {
    require_graded(l)?;
    let s = OpSlice::new(l, w);
    if s.is_empty() {
        return Ok(Vec::new());
    }
    Ok(nullspace(&leibniz_matrix(l, &s))
        .iter()
        .map(|x| s.to_operator(l, x))
        .collect())
}

/// Weight-`w` derivations computed from the images of generators only.
///
/// Every non-generator must be a multiple of a bracket of an earlier element
/// with a generator; the images of the remaining elements are propagated
/// symbolically and the leftover Leibniz conditions are solved for the
/// generator images.
pub fn derivations_by_generators(l: &TruncatedAlgebra, w: i64) -> Result<Vec<GradedOperator>> {
    require_graded(l)?;
    if l.has_degree_zero() {
        return Err(Error::DegreeZeroPresent {
            name: l.name().to_owned(),
        });
    }
    let n = l.dim();
    let mut brackets = RowSpace::new(n);
    for a in 0..n {
        for b in a + 1..n {
            brackets.insert_sparse(l.bracket_at(a, b).iter().map(|(k, c)| (*k, c)));
        }
    }
    let one = Scalar::one();
    let gens: Vec<usize> = (0..n)
        .filter(|&p| !brackets.contains_sparse([(p, &one)]))
        .collect();
    let s = OpSlice::new(l, w);
    let unknowns: Vec<(usize, usize)> = gens
        .iter()
        .flat_map(|&g| s.of_source(g).iter().map(move |&(t, _)| (g, t)))
        .collect();

    // image of each position: target → (unknown → coefficient)
    type Symbolic = BTreeMap<usize, BTreeMap<usize, Scalar>>;
    let mut img: Vec<Option<Symbolic>> = vec![None; n];
    for (u, &(g, t)) in unknowns.iter().enumerate() {
        img[g].get_or_insert_with(BTreeMap::new).entry(t).or_default().insert(u, one.clone());
    }
    for &g in &gens {
        img[g].get_or_insert_with(BTreeMap::new);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&p| (l.degree_at(p), p));
    let mut done: Vec<bool> = (0..n).map(|p| gens.contains(&p)).collect();
    for &p in &order {
        if done[p] {
            continue;
        }
        let expr = (0..n).filter(|&j| done[j]).find_map(|j| {
            gens.iter().find_map(|&g| match l.bracket_at(j, g) {
                [(k, c)] if *k == p => Some((j, g, c.clone())),
                _ => None,
            })
        });
        let Some((j, g, c)) = expr else {
            return Err(Error::Inconsistent(format!(
                "{} is not a multiple of a bracket with a generator",
                l.label(l.index_at(p))
            )));
        };
        let mut out = Symbolic::new();
        let inv = c.recip();
        let mut acc = |src: &Symbolic, right: Option<usize>, left: Option<usize>| {
            for (t, coeffs) in src {
                let terms = match (left, right) {
                    (None, Some(r)) => l.bracket_at(*t, r),
                    (Some(lf), None) => l.bracket_at(lf, *t),
                    _ => unreachable!(),
                };
                for (m, bc) in terms {
                    let slot = out.entry(*m).or_default();
                    for (u, x) in coeffs {
                        *slot.entry(*u).or_insert_with(Scalar::zero) += bc * x * &inv;
                    }
                }
            }
        };
        acc(img[j].as_ref().expect("processed"), Some(g), None);
        acc(img[g].as_ref().expect("generator"), None, Some(j));
        for row in out.values_mut() {
            row.retain(|_, x| !x.is_zero());
        }
        out.retain(|_, row| !row.is_empty());
        img[p] = Some(out);
        done[p] = true;
    }
    let img: Vec<Symbolic> = img.into_iter().map(|i| i.expect("all processed")).collect();

    let mut m = SparseMatrix::new(0, unknowns.len());
    for (a, b) in window_pairs(l, w) {
        let mut rows: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
        let mut put = |row: usize, u: usize, c: Scalar| {
            *rows.entry(row).or_default().entry(u).or_insert_with(Scalar::zero) += c;
        };
        for (k, c) in l.bracket_at(a, b) {
            for (t, coeffs) in &img[*k] {
                for (u, x) in coeffs {
                    put(*t, *u, c * x);
                }
            }
        }
        for (t, coeffs) in &img[a] {
            for (k, c) in l.bracket_at(*t, b) {
                for (u, x) in coeffs {
                    put(*k, *u, -(c * x));
                }
            }
        }
        for (t, coeffs) in &img[b] {
            for (k, c) in l.bracket_at(a, *t) {
                for (u, x) in coeffs {
                    put(*k, *u, -(c * x));
                }
            }
        }
        for row in rows.values() {
            m.push_row(row.iter().map(|(u, c)| (*u, c)));
        }
    }
    Ok(nullspace(&m)
        .into_iter()
        .map(|x| {
            let entries = img.iter().enumerate().flat_map(|(p, sym)| {
                let x = &x;
                sym.iter().map(move |(t, coeffs)| {
                    let v = coeffs
                        .iter()
                        .fold(Scalar::zero(), |acc, (u, c)| acc + c * &x[*u]);
                    (p, *t, v)
                })
            });
            GradedOperator::from_entries_at(l, entries.collect::<Vec<_>>())
        })
        .collect())
}

/// Whether two families of weight-`w` operators span the same space.
pub fn same_span(l: &TruncatedAlgebra, w: i64, a: &[GradedOperator], b: &[GradedOperator]) -> bool {
    let s = OpSlice::new(l, w);
    match (s.span(l, a), s.span(l, b)) {
        (Some(x), Some(y)) => x.basis() == y.basis(),
        _ => false,
    }
}

/// Whether `op` lies in the span of `ops`, all of weight `w`.
pub fn in_span(l: &TruncatedAlgebra, w: i64, ops: &[GradedOperator], op: &GradedOperator) -> bool {
    let s = OpSlice::new(l, w);
    match (s.span(l, ops), s.coords(l, op)) {
        (Some(space), Some(c)) => space.contains_sparse(c.iter().map(|(v, x)| (*v, x))),
        _ => false,
    }
}

/// Echelon basis of the weight-`w` inner derivations `ad_b`, `deg b = w`.
pub fn inner_at(l: &TruncatedAlgebra, w: i64) -> Result<Vec<GradedOperator>> {
    require_graded(l)?;
    let s = OpSlice::new(l, w);
    let Ok(d) = u32::try_from(w) else {
        return Ok(Vec::new());
    };
    let ads = l
        .positions_of_degree(d)
        .map(|p| GradedOperator::ad(l, &Vector::basis(l.index_at(p))))
        .collect::<Result<Vec<_>>>()?;
    let space = s.span(l, &ads).ok_or_else(|| {
        Error::Inconsistent(format!("an inner derivation of degree {d} is not homogeneous"))
    })?;
    Ok(s.echelon_operators(l, &space))
}

/// Echelon basis of the span of all `ad_b`.
pub fn inner_space(l: &TruncatedAlgebra) -> Result<Vec<GradedOperator>> {
    let n = l.dim();
    let mut space = RowSpace::new(n * n);
    for b in l.basis() {
        let ad = GradedOperator::ad(l, &Vector::basis(b.index))?;
        let coords: Vec<(usize, Scalar)> = ad.entries_at(l).map(|(p, t, c)| (p * n + t, c.clone())).collect();
        space.insert_sparse(coords.iter().map(|(v, c)| (*v, c)));
    }
    Ok(space
        .basis()
        .into_iter()
        .map(|row| GradedOperator::from_entries_at(l, row.into_iter().map(|(v, c)| (v / n, v % n, c))))
        .collect())
}

/// Derivations of one weight at both levels of a tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightRecord {
    pub weight: i64,
    pub dim_lo: usize,
    pub dim_hi: usize,
    pub stable: bool,
    /// Basis at the lower level.
    pub basis: Vec<GradedOperator>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationReport {
    pub algebra: String,
    pub truncation: u32,
    pub margin: u32,
    pub cutoff: i64,
    pub records: Vec<WeightRecord>,
}

impl DerivationReport {
    pub fn record(&self, w: i64) -> Option<&WeightRecord> {
        self.records.iter().find(|r| r.weight == w)
    }

    pub fn stable(&self) -> impl Iterator<Item = &WeightRecord> + '_ {
        self.records.iter().filter(|r| r.stable)
    }
}

fn check_tower(t: &Tower) -> Result<()> {
    require_graded(t.lo())?;
    require_graded(t.hi())
}

/// Derivation spaces of every weight of the lower level, each computed at
/// both truncations.
pub fn derivation_space(t: &Tower) -> Result<DerivationReport> {
    check_tower(t)?;
    let cutoff = t.cutoff();
    let records = weight_range(t.lo())
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|w| {
            let basis = derivations_at(t.lo(), w)?;
            let dim_hi = derivations_at(t.hi(), w)?.len();
            Ok(WeightRecord {
                weight: w,
                dim_lo: basis.len(),
                dim_hi,
                stable: basis.len() == dim_hi && w <= cutoff,
                basis,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DerivationReport {
        algebra: t.lo().name().to_owned(),
        truncation: t.truncation(),
        margin: t.margin(),
        cutoff,
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Record {
    pub weight: i64,
    pub der_lo: usize,
    pub der_hi: usize,
    pub inner_lo: usize,
    pub inner_hi: usize,
    pub stable: bool,
    /// Derivations at the lower level whose classes span `Der_w / Inner_w`.
    pub witnesses: Vec<GradedOperator>,
}

impl H1Record {
    pub fn dim_lo(&self) -> usize {
        self.der_lo - self.inner_lo
    }

    pub fn dim_hi(&self) -> usize {
        self.der_hi - self.inner_hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Report {
    pub algebra: String,
    pub truncation: u32,
    pub margin: u32,
    pub cutoff: i64,
    pub records: Vec<H1Record>,
}

impl H1Report {
    pub fn record(&self, w: i64) -> Option<&H1Record> {
        self.records.iter().find(|r| r.weight == w)
    }

    pub fn stable(&self) -> impl Iterator<Item = &H1Record> + '_ {
        self.records.iter().filter(|r| r.stable)
    }
}

/// Basis elements of `ops` that are independent modulo `base`.
pub(crate) fn complement(
    l: &TruncatedAlgebra,
    w: i64,
    base: &[GradedOperator],
    ops: &[GradedOperator],
) -> Result<Vec<GradedOperator>> {
    let s = OpSlice::new(l, w);
    let mut space = s
        .span(l, base)
        .ok_or_else(|| Error::Inconsistent(format!("operator outside the weight-{w} slice")))?;
    let mut out = Vec::new();
    for op in ops {
        let c = s
            .coords(l, op)
            .ok_or_else(|| Error::Inconsistent(format!("operator outside the weight-{w} slice")))?;
        if space.insert_sparse(c.iter().map(|(v, x)| (*v, x))) {
            out.push(op.clone());
        }
    }
    Ok(out)
}

/// `H¹ = Der / Inner` by weight, at both levels.
pub fn h1(t: &Tower) -> Result<H1Report> {
    let der = derivation_space(t)?;
    let records = der
        .records
        .into_par_iter()
        .map(|r| {
            let inner_lo = inner_at(t.lo(), r.weight)?;
            let inner_hi = inner_at(t.hi(), r.weight)?.len();
            let witnesses = complement(t.lo(), r.weight, &inner_lo, &r.basis)?;
            if witnesses.len() + inner_lo.len() != r.dim_lo {
                return Err(Error::Inconsistent(format!(
                    "inner derivations of weight {} are not contained in the derivations",
                    r.weight
                )));
            }
            let inner_lo = inner_lo.len();
            Ok(H1Record {
                weight: r.weight,
                der_lo: r.dim_lo,
                der_hi: r.dim_hi,
                inner_lo,
                inner_hi,
                stable: r.stable && r.dim_lo - inner_lo == r.dim_hi - inner_hi,
                witnesses,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(H1Report {
        algebra: der.algebra,
        truncation: der.truncation,
        margin: der.margin,
        cutoff: der.cutoff,
        records,
    })
}

/// Outcome of iterating the image of an operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nilpotency {
    pub nilpotent: bool,
    /// Dimensions of `Im T^i`, starting from the whole space.
    pub image_dims: Vec<usize>,
    /// Basis of the eventual image; empty exactly when nilpotent.
    pub eventual_image: Vec<Vector>,
}

/// Decides `∩ Im T^i = 0` on a finite truncation by iterating images until
/// the dimension stops dropping.
pub fn is_potentially_nilpotent(l: &TruncatedAlgebra, op: &GradedOperator) -> Result<Nilpotency> {
    let mut current = Subspace::full(l);
    let mut dims = vec![current.dim()];
    loop {
        let images: Vec<Vector> = current.basis().iter().map(|v| op.apply(v)).collect();
        let next = Subspace::span(l, &images)?;
        if next.dim() == current.dim() {
            break;
        }
        dims.push(next.dim());
        current = next;
    }
    Ok(Nilpotency {
        nilpotent: current.is_zero(),
        image_dims: dims,
        eventual_image: current.basis().to_vec(),
    })
}

/// Dimension of the stable weight-0 derivations modulo nilpotent ones.
///
/// Requires every weight-0 derivation to act diagonally on the basis; the
/// count is then the rank of the eigenvalue patterns.
pub fn nil_independent_count(t: &Tower) -> Result<usize> {
    check_tower(t)?;
    let lo = derivations_at(t.lo(), 0)?;
    let hi = derivations_at(t.hi(), 0)?;
    if lo.len() != hi.len() || t.cutoff() < 0 {
        return Err(Error::UnstableWeightZero);
    }
    let l = t.lo();
    let mut patterns = RowSpace::new(l.dim());
    for d in &lo {
        let mut diag = Vec::new();
        for (p, q, c) in d.entries_at(l) {
            if p != q {
                return Err(Error::NonDiagonalWeightZero);
            }
            diag.push((p, c.clone()));
        }
        patterns.insert_sparse(diag.iter().map(|(p, c)| (*p, c)));
    }
    Ok(patterns.rank())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessReport {
    pub stable_center: Vec<Vector>,
    pub h1: H1Report,
    pub complete: bool,
}

impl CompletenessReport {
    pub fn stable_weights(&self) -> usize {
        self.h1.stable().count()
    }

    /// Stable weights with nonzero `H¹`.
    pub fn obstructions(&self) -> Vec<i64> {
        self.h1
            .stable()
            .filter(|r| r.dim_lo() > 0)
            .map(|r| r.weight)
            .collect()
    }
}

/// Trivial stable center and `H¹ = 0` on every stable weight.
pub fn completeness_check(t: &Tower) -> Result<CompletenessReport> {
    let stable_center = t.stable_center();
    let h1 = h1(t)?;
    let complete = stable_center.is_empty() && h1.stable().all(|r| r.dim_lo() == 0);
    Ok(CompletenessReport {
        stable_center,
        h1,
        complete,
    })
}

/// Degree-0 generators adjoined to a base algebra: `[e, g_s] = D_s(e)` and
/// `[g_s, g_t]` as given.
#[derive(Clone, Debug, Default)]
pub struct ExtensionSpec {
    pub generators: Vec<(String, GradedOperator)>,
    /// Keyed by generator positions; `(t, s)` may be given instead of
    /// `(s, t)`, or both if they are negatives of each other.
    pub brackets: BTreeMap<(usize, usize), Vector>,
}

impl ExtensionSpec {
    pub fn new(generators: Vec<(String, GradedOperator)>) -> Self {
        Self {
            generators,
            brackets: BTreeMap::new(),
        }
    }
}

/// Index assigned to the `s`-th adjoined generator.
pub fn generator_index(base: &TruncatedAlgebra, s: usize) -> u32 {
    let top = base.basis().iter().map(|b| b.index).max().unwrap_or(0);
    top + 1 + s as u32
}

/// Builds the extension of `base` by degree-0 generators acting through the
/// given derivations, then checks Jacobi.
pub fn build_extension(base: &TruncatedAlgebra, spec: &ExtensionSpec) -> Result<TruncatedAlgebra> {
    for (s, (_, d)) in spec.generators.iter().enumerate() {
        for (i, v) in d.images() {
            base.position(i).ok_or(Error::UnknownIndex(i))?;
            if let Some(k) = v.support().find(|k| base.position(*k).is_none()) {
                return Err(Error::UnknownIndex(k));
            }
        }
        if let Some(pair) = d.leibniz_failure(base)? {
            return Err(Error::NotADerivation { position: s, pair });
        }
    }
    let g = spec.generators.len();
    let mut q: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    for (&(s, t), v) in &spec.brackets {
        if s >= g || t >= g {
            return Err(Error::InvalidParameter(format!(
                "bracket ({s}, {t}) names a generator that does not exist"
            )));
        }
        if s == t {
            if !v.is_zero() {
                return Err(Error::NonAntisymmetricBracket(s, t));
            }
            continue;
        }
        let (key, val) = if s < t { ((s, t), v.clone()) } else { ((t, s), -v) };
        match q.get(&key) {
            Some(prev) if *prev != val => return Err(Error::NonAntisymmetricBracket(key.0, key.1)),
            _ => {
                q.insert(key, val);
            }
        }
    }
    let mut basis: Vec<BasisElement> = base.basis().to_vec();
    for (s, (label, _)) in spec.generators.iter().enumerate() {
        basis.push(BasisElement::labeled(generator_index(base, s), 0, label.clone()));
    }
    let mut table = StructureTable::from_entries(base.table().entries().to_vec());
    for (s, (_, d)) in spec.generators.iter().enumerate() {
        let gi = generator_index(base, s);
        for (i, v) in d.images() {
            for (k, c) in v.terms() {
                table.add_term(i, gi, k, c.clone());
            }
        }
    }
    for ((s, t), v) in &q {
        for (k, c) in v.terms() {
            table.add_term(generator_index(base, *s), generator_index(base, *t), k, c.clone());
        }
    }
    let labels: Vec<&str> = spec.generators.iter().map(|(n, _)| n.as_str()).collect();
    let name = format!("{}+{}", base.name(), labels.join(","));
    let l = TruncatedAlgebra::new(name, basis, table, base.truncation(), base.period())?;
    match l.jacobi_check().first() {
        Some(v) => Err(Error::JacobiFailure { triple: v.triple }),
        None => Ok(l),
    }
}

#[cfg(test)]
mod tests;
