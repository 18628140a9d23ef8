use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{BasisElement, StructureTable, TruncatedAlgebra, Vector};
use crate::error::{Error, Result};
use crate::exactla::{nullspace, RowSpace, Scalar, SparseMatrix};

/// An exact subspace of a truncated algebra, stored as the reduced echelon
/// basis over basis positions.
#[derive(Clone, Debug)]
pub struct Subspace {
    space: RowSpace,
    basis: Vec<Vector>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Subspace {
    fn from_space(l: &TruncatedAlgebra, space: RowSpace) -> Self {
        let basis = space
            .basis()
            .into_iter()
            .map(|row| Vector::from_terms(row.into_iter().map(|(p, c)| (l.index_at(p), c))))
            .collect();
        Self { space, basis }
    }

    /// The whole algebra.
    pub fn full(l: &TruncatedAlgebra) -> Self {
        let mut space = RowSpace::new(l.dim());
        for p in 0..l.dim() {
            space.insert_sparse([(p, &Scalar::one())]);
        }
        Self::from_space(l, space)
    }

    /// Span of the given vectors.
    pub fn span(l: &TruncatedAlgebra, vectors: &[Vector]) -> Result<Self> {
        let mut space = RowSpace::new(l.dim());
        for v in vectors {
            let entries = positional(l, v)?;
            space.insert_sparse(entries.iter().map(|(p, c)| (*p, c)));
        }
        Ok(Self::from_space(l, space))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Reduced echelon basis, each vector with leading coefficient 1.
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn contains(&self, l: &TruncatedAlgebra, v: &Vector) -> Result<bool> {
        let entries = positional(l, v)?;
        Ok(self.space.contains_sparse(entries.iter().map(|(p, c)| (*p, c))))
    }

    pub fn contains_subspace(&self, l: &TruncatedAlgebra, other: &Subspace) -> Result<bool> {
        for v in other.basis() {
            if !self.contains(l, v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Smallest degree of a basis element in the support of the subspace.
    pub fn min_degree(&self, l: &TruncatedAlgebra) -> Option<u32> {
        self.basis
            .iter()
            .flat_map(|v| v.support())
            .filter_map(|i| l.degree_of(i))
            .min()
    }
}

fn positional(l: &TruncatedAlgebra, v: &Vector) -> Result<Vec<(usize, Scalar)>> {
    v.terms()
        .map(|(i, c)| Ok((l.position(i).ok_or(Error::UnknownIndex(i))?, c.clone())))
        .collect()
}

/// A nested chain of subspaces, ending either at zero or at the first term
/// equal to its predecessor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesChain {
    pub terms: Vec<Subspace>,
}

impl SeriesChain {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }

    /// True when the chain stopped at a nonzero term equal to the previous one.
    pub fn stabilized_nonzero(&self) -> bool {
        match self.terms.as_slice() {
            [.., prev, last] => !last.is_zero() && last.dim() == prev.dim(),
            _ => false,
        }
    }

    pub fn reaches_zero(&self) -> bool {
        self.terms.last().is_some_and(Subspace::is_zero)
    }
}

impl TruncatedAlgebra {
    /// `[U, V]` for subspaces given by spanning vectors.
    fn bracket_span(&self, u: &[Vector], v: &[Vector]) -> Subspace {
        let dense_v: Vec<Vec<Scalar>> = v
            .iter()
            .map(|x| self.to_dense(x).expect("subspace vectors live in the basis"))
            .collect();
        let mut space = RowSpace::new(self.dim());
        for x in u {
            let dx = self.to_dense(x).expect("subspace vectors live in the basis");
            for dy in &dense_v {
                let z = self.bracket_dense(&dx, dy);
                space.insert_sparse(z.iter().enumerate().filter(|(_, c)| !c.is_zero()));
            }
        }
        Subspace::from_space(self, space)
    }

    fn basis_vectors(&self) -> Vec<Vector> {
        self.basis().iter().map(|b| Vector::basis(b.index)).collect()
    }

    /// `L¹ = L`, `L^{k+1} = [L^k, L]`.
    pub fn lower_central_series(&self) -> SeriesChain {
        let all = self.basis_vectors();
        self.chain(|term| self.bracket_span(term.basis(), &all))
    }

    /// `L^{[1]} = L`, `L^{[s+1]} = [L^{[s]}, L^{[s]}]`.
    pub fn derived_series(&self) -> SeriesChain {
        self.chain(|term| self.bracket_span(term.basis(), term.basis()))
    }

    fn chain(&self, next: impl Fn(&Subspace) -> Subspace) -> SeriesChain {
        let mut terms = vec![Subspace::full(self)];
        loop {
            let last = terms.last().expect("nonempty");
            if last.is_zero() {
                break;
            }
            let new = next(last);
            let stop = new.dim() == last.dim();
            terms.push(new);
            if stop {
                break;
            }
        }
        SeriesChain { terms }
    }

    /// `dim L^i/L^{i+1}` for every `i` such that `L^{i+1}` still contains the
    /// whole top-degree component, so the quotient is not cut by the truncation.
    pub fn grading_signature(&self) -> Result<Vec<usize>> {
        let lcs = self.lower_central_series();
        if !lcs.reaches_zero() {
            return Err(Error::NotProNilpotent {
                name: self.name().to_owned(),
                truncation: self.truncation(),
            });
        }
        let top: Vec<Vector> = self
            .positions_of_degree(self.truncation())
            .map(|p| Vector::basis(self.index_at(p)))
            .collect();
        let mut out = Vec::new();
        for pair in lcs.terms.windows(2) {
            let next = &pair[1];
            let intact = if top.is_empty() {
                !next.is_zero()
            } else {
                top.iter().all(|v| next.contains(self, v).unwrap_or(false))
            };
            if !intact {
                break;
            }
            out.push(pair[0].dim() - next.dim());
        }
        Ok(out)
    }

    /// Basis of the center among elements of degree at most `max_degree`.
    pub fn center_up_to(&self, max_degree: u32) -> Vec<Vector> {
        let cols: Vec<usize> = (0..self.dim())
            .filter(|&p| self.degree_at(p) <= max_degree)
            .collect();
        // rows: (other basis element b, target k) → Σ_v coeff·[v, b]_k
        let mut rows: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
        for (c, &p) in cols.iter().enumerate() {
            for b in 0..self.dim() {
                for (k, v) in self.bracket_at(p, b) {
                    rows.entry((b, *k)).or_default().push((c, v.clone()));
                }
            }
        }
        let mut m = SparseMatrix::new(0, cols.len());
        for entries in rows.values() {
            m.push_row(entries.iter().map(|(c, v)| (*c, v)));
        }
        nullspace(&m)
            .into_iter()
            .map(|v| {
                Vector::from_terms(
                    v.into_iter()
                        .enumerate()
                        .map(|(c, x)| (self.index_at(cols[c]), x)),
                )
            })
            .collect()
    }

    pub fn center(&self) -> Vec<Vector> {
        self.center_up_to(self.truncation())
    }

    /// Largest degree of a positive-degree element needed to generate the
    /// positive part, i.e. the top degree `d` with `L_d ⊄ [L₊, L₊]`.
    pub fn generator_degree(&self) -> u32 {
        let positive: Vec<usize> = (0..self.dim()).filter(|&p| self.degree_at(p) > 0).collect();
        let mut space = RowSpace::new(self.dim());
        for &a in &positive {
            for &b in &positive {
                if a < b {
                    space.insert_sparse(self.bracket_at(a, b).iter().map(|(k, c)| (*k, c)));
                }
            }
        }
        positive
            .iter()
            .filter(|&&p| !space.contains_sparse([(p, &Scalar::one())]))
            .map(|&p| self.degree_at(p))
            .max()
            .unwrap_or(0)
    }

    /// The associated graded algebra of the lower central filtration, written
    /// in the same basis, and whether its table coincides with this one.
    ///
    /// Requires a positively graded, pro-nilpotent truncation whose basis is
    /// adapted: every term `L^i` must be spanned by a suffix of the basis.
    pub fn associated_graded(&self) -> Result<AssociatedGraded> {
        if self.has_degree_zero() {
            return Err(Error::DegreeZeroPresent {
                name: self.name().to_owned(),
            });
        }
        let lcs = self.lower_central_series();
        if !lcs.reaches_zero() {
            return Err(Error::NotProNilpotent {
                name: self.name().to_owned(),
                truncation: self.truncation(),
            });
        }
        let n = self.dim();
        let mut grade = vec![0u32; n];
        for (i, term) in lcs.terms.iter().enumerate() {
            let start = n - term.dim();
            let adapted = term
                .basis()
                .iter()
                .zip(start..n)
                .all(|(v, p)| *v == Vector::basis(self.index_at(p)));
            if !adapted {
                return Err(Error::NotAdapted { term: i + 1 });
            }
            for g in grade.iter_mut().skip(start) {
                *g = i as u32 + 1;
            }
        }
        let mut table = StructureTable::new();
        for a in 0..n {
            for b in a + 1..n {
                for (k, c) in self.bracket_at(a, b) {
                    if grade[*k] == grade[a] + grade[b] {
                        table.add_term(self.index_at(a), self.index_at(b), self.index_at(*k), c.clone());
                    }
                }
            }
        }
        let basis: Vec<BasisElement> = self
            .basis()
            .iter()
            .zip(&grade)
            .map(|(b, &g)| BasisElement {
                degree: g,
                ..b.clone()
            })
            .collect();
        let top = grade.iter().copied().max().unwrap_or(1).max(1);
        let identical = table == canonical_table(self);
        let algebra = TruncatedAlgebra::new(
            format!("gr {}", self.name()),
            basis,
            table,
            top,
            self.period(),
        )?;
        Ok(AssociatedGraded {
            algebra,
            identical,
        })
    }
}

/// The table of `l` rebuilt through `add_term`, so that two presentations of
/// the same bracket compare equal.
fn canonical_table(l: &TruncatedAlgebra) -> StructureTable {
    let mut t = StructureTable::new();
    for a in 0..l.dim() {
        for b in a + 1..l.dim() {
            for (k, c) in l.bracket_at(a, b) {
                t.add_term(l.index_at(a), l.index_at(b), l.index_at(*k), c.clone());
            }
        }
    }
    t
}

#[derive(Clone, Debug)]
pub struct AssociatedGraded {
    pub algebra: TruncatedAlgebra,
    /// Whether the graded table equals the original one entry for entry.
    pub identical: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::int;

    fn abelian(n: u32) -> TruncatedAlgebra {
        let basis = (1..=n).map(|i| BasisElement::new(i, 1)).collect();
        TruncatedAlgebra::new("abelian", basis, StructureTable::new(), 1, 1).unwrap()
    }

    /// Filiform `[e1, e_i] = e_{i+1}` with `deg e_i = i` (and `deg e1 = 1`).
    fn filiform(n: u32) -> TruncatedAlgebra {
        let mut t = StructureTable::new();
        for i in 2..n {
            t.add_term(1, i, i + 1, int(1));
        }
        let mut basis = vec![BasisElement::new(1, 1)];
        basis.extend((2..=n).map(|i| BasisElement::new(i, i - 1)));
        TruncatedAlgebra::new("filiform", basis, t, n - 1, 1).unwrap()
    }

    #[test]
    fn abelian_series_vanish() {
        let l = abelian(3);
        assert_eq!(l.lower_central_series().dims(), vec![3, 0]);
        assert_eq!(l.derived_series().dims(), vec![3, 0]);
        assert_eq!(l.center().len(), 3);
    }

    #[test]
    fn filiform_signature_and_gr() {
        let l = filiform(6);
        assert_eq!(l.lower_central_series().dims(), vec![6, 4, 3, 2, 1, 0]);
        assert_eq!(l.grading_signature().unwrap(), vec![2, 1, 1, 1]);
        let gr = l.associated_graded().unwrap();
        assert!(gr.identical);
        assert_eq!(l.generator_degree(), 1);
        assert_eq!(l.center(), vec![Vector::basis(6)]);
    }

    #[test]
    fn series_terms_nest() {
        let l = filiform(7);
        let lcs = l.lower_central_series();
        for pair in lcs.terms.windows(2) {
            assert!(pair[0].contains_subspace(&l, &pair[1]).unwrap());
        }
    }

    #[test]
    fn non_adapted_basis_is_rejected() {
        // filiform with e2 and e3 swapped in index order: L² = span{e2} is not a suffix
        let l = filiform(4).reindexed(|i| match i {
            2 => 4,
            4 => 2,
            i => i,
        });
        let l = l.unwrap();
        assert!(matches!(l.associated_graded(), Err(Error::NotAdapted { .. })));
    }
}
