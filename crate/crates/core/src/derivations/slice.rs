use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::GradedOperator;
use crate::algebra::TruncatedAlgebra;
use crate::exactla::{RowSpace, Scalar};

/// Coordinates of weight-`w` linear maps: one unknown per `(source, target)`
/// position pair with `deg target = deg source + w`.
#[derive(Clone, Debug)]
pub(crate) struct OpSlice {
    pub weight: i64,
    pub vars: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    /// source position → unknowns `(target, var)`
    by_source: Vec<Vec<(usize, usize)>>,
}

/// Positions grouped by degree.
pub(crate) fn by_degree(l: &TruncatedAlgebra) -> BTreeMap<u32, Vec<usize>> {
    let mut out: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for p in 0..l.dim() {
        out.entry(l.degree_at(p)).or_default().push(p);
    }
    out
}

/// Every weight at which a nonzero homogeneous map exists.
pub(crate) fn weight_range(l: &TruncatedAlgebra) -> std::ops::RangeInclusive<i64> {
    let degrees = by_degree(l);
    let lo = degrees.keys().next().copied().map_or(0, i64::from);
    let hi = degrees.keys().last().copied().map_or(0, i64::from);
    (lo - hi)..=(hi - lo)
}

pub(crate) fn shifted(d: u32, w: i64) -> Option<u32> {
    u32::try_from(i64::from(d) + w).ok()
}

impl OpSlice {
    pub fn new(l: &TruncatedAlgebra, weight: i64) -> Self {
        let degrees = by_degree(l);
        let mut vars = Vec::new();
        let mut index = HashMap::new();
        let mut by_source = vec![Vec::new(); l.dim()];
        for (p, sources) in by_source.iter_mut().enumerate() {
            let Some(targets) = shifted(l.degree_at(p), weight).and_then(|d| degrees.get(&d)) else {
                continue;
            };
            for &t in targets {
                index.insert((p, t), vars.len());
                sources.push((t, vars.len()));
                vars.push((p, t));
            }
        }
        Self {
            weight,
            vars,
            index,
            by_source,
        }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn of_source(&self, p: usize) -> &[(usize, usize)] {
        &self.by_source[p]
    }

    pub fn to_operator(&self, l: &TruncatedAlgebra, x: &[Scalar]) -> GradedOperator {
        GradedOperator::from_entries_at(
            l,
            self.vars
                .iter()
                .zip(x)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&(p, t), c)| (p, t, c.clone())),
        )
    }

    /// Sparse coordinates, or `None` if the operator has a term outside the
    /// slice.
    pub fn coords(&self, l: &TruncatedAlgebra, op: &GradedOperator) -> Option<Vec<(usize, Scalar)>> {
        op.entries_at(l)
            .map(|(p, t, c)| self.index.get(&(p, t)).map(|&v| (v, c.clone())))
            .collect()
    }

    pub fn span(&self, l: &TruncatedAlgebra, ops: &[GradedOperator]) -> Option<RowSpace> {
        let mut space = RowSpace::new(self.len());
        for op in ops {
            let c = self.coords(l, op)?;
            space.insert_sparse(c.iter().map(|(v, x)| (*v, x)));
        }
        Some(space)
    }

    /// Operators of the reduced echelon basis of a row space over this slice.
    pub fn echelon_operators(&self, l: &TruncatedAlgebra, space: &RowSpace) -> Vec<GradedOperator> {
        space
            .basis()
            .into_iter()
            .map(|row| {
                GradedOperator::from_entries_at(
                    l,
                    row.into_iter().map(|(v, c)| (self.vars[v].0, self.vars[v].1, c)),
                )
            })
            .collect()
    }
}
