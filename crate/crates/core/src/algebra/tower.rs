use super::{TruncatedAlgebra, Vector};
use crate::error::{Error, Result};

/// The same algebra at two truncations, `N` and `N + margin`.
///
/// Every windowed computation runs on both levels; a weight is trusted only
/// when both agree and it sits at least `margin` plus the generator degree
/// below the top of the lower level.
#[derive(Clone, Debug)]
pub struct Tower {
    lo: TruncatedAlgebra,
    hi: TruncatedAlgebra,
    margin: u32,
}

impl Tower {
    /// Pairs two builds of one algebra, checking that `hi` restricts to `lo`.
    pub fn new(lo: TruncatedAlgebra, hi: TruncatedAlgebra, margin: u32) -> Result<Self> {
        if margin < lo.period() {
            return Err(Error::MarginTooSmall {
                margin,
                period: lo.period(),
            });
        }
        if hi.truncation() != lo.truncation() + margin {
            return Err(Error::IncoherentTower(format!(
                "upper truncation {} is not {} + {margin}",
                hi.truncation(),
                lo.truncation()
            )));
        }
        if hi.quotient(lo.truncation())? != lo {
            return Err(Error::IncoherentTower(format!(
                "{} at truncation {} does not restrict to the given truncation {}",
                hi.name(),
                hi.truncation(),
                lo.truncation()
            )));
        }
        Ok(Self { lo, hi, margin })
    }

    /// Builds the lower level by quotienting `hi` down by `margin` degrees.
    pub fn from_top(hi: TruncatedAlgebra, margin: u32) -> Result<Self> {
        if margin >= hi.truncation() {
            return Err(Error::InvalidTruncation(format!(
                "margin {margin} leaves nothing below truncation {}",
                hi.truncation()
            )));
        }
        let lo = hi.quotient(hi.truncation() - margin)?;
        Self::new(lo, hi, margin)
    }

    pub fn lo(&self) -> &TruncatedAlgebra {
        &self.lo
    }

    pub fn hi(&self) -> &TruncatedAlgebra {
        &self.hi
    }

    pub fn margin(&self) -> u32 {
        self.margin
    }

    pub fn truncation(&self) -> u32 {
        self.lo.truncation()
    }

    /// Largest weight that can be reported as stable: `N − margin − g`, with
    /// `g` the generator degree of the positive part.
    pub fn cutoff(&self) -> i64 {
        i64::from(self.lo.truncation())
            - i64::from(self.margin)
            - i64::from(self.lo.generator_degree())
    }

    /// Central elements of degree at most `N − margin` that are still central
    /// at truncation `N + margin`.
    pub fn stable_center(&self) -> Vec<Vector> {
        match self.lo.truncation().checked_sub(self.margin) {
            Some(max) => self.hi.center_up_to(max),
            None => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{BasisElement, StructureTable};
    use super::*;
    use crate::exactla::int;

    fn chain(n: u32) -> TruncatedAlgebra {
        let mut t = StructureTable::new();
        for i in 2..n {
            if i < n {
                t.add_term(1, i, i + 1, int(1));
            }
        }
        let basis = (1..=n).map(|i| BasisElement::new(i, i)).collect();
        TruncatedAlgebra::new("chain", basis, t, n, 1).unwrap()
    }

    #[test]
    fn quotient_top_is_central_but_unstable() {
        let t = Tower::from_top(chain(12), 2).unwrap();
        assert_eq!(t.lo().center(), vec![Vector::basis(10)]);
        assert!(t.stable_center().is_empty());
    }

    #[test]
    fn incoherent_levels_are_rejected() {
        let lo = chain(10);
        let mut hi = chain(12);
        hi = hi.with_name("other");
        assert!(matches!(Tower::new(lo, hi, 2), Err(Error::IncoherentTower(_))));
    }

    #[test]
    fn margin_below_period_is_rejected() {
        let hi = TruncatedAlgebra::new("p", vec![BasisElement::new(1, 1)], StructureTable::new(), 6, 3).unwrap();
        assert!(matches!(Tower::from_top(hi, 2), Err(Error::MarginTooSmall { .. })));
    }
}
