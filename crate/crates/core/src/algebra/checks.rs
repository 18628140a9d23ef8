use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use super::{TruncatedAlgebra, Vector};
use crate::exactla::Scalar;

/// One structural defect of a presented table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A target whose degree is not the sum of the operand degrees.
    Degree {
        left: u32,
        right: u32,
        target: u32,
        expected: u32,
        found: u32,
    },
    /// The same unordered pair appears in more than one entry.
    Duplicate { left: u32, right: u32 },
    /// An entry `[b, b]`.
    Diagonal { index: u32 },
    /// An entry with `left > right`.
    Unordered { left: u32, right: u32 },
    /// A target outside the basis (for example a degree above the truncation).
    OutOfRange { left: u32, right: u32, target: u32 },
    /// A target listed twice or with a zero coefficient.
    MalformedTerms { left: u32, right: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Degree {
                left,
                right,
                target,
                expected,
                found,
            } => write!(
                f,
                "[b{left}, b{right}] has target b{target} of degree {found}, expected {expected}"
            ),
            Violation::Duplicate { left, right } => {
                write!(f, "pair (b{left}, b{right}) is listed more than once")
            }
            Violation::Diagonal { index } => write!(f, "entry [b{index}, b{index}] is not allowed"),
            Violation::Unordered { left, right } => {
                write!(f, "entry (b{left}, b{right}) must be written with the smaller index first")
            }
            Violation::OutOfRange {
                left,
                right,
                target,
            } => write!(f, "[b{left}, b{right}] names b{target}, which is not in the basis"),
            Violation::MalformedTerms { left, right } => write!(
                f,
                "[b{left}, b{right}] repeats a target or carries a zero coefficient"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn degree_violations(&self) -> usize {
        self.violations
            .iter()
            .filter(|v| matches!(v, Violation::Degree { .. }))
            .count()
    }
}

/// A basis triple on which the Jacobi identity fails, with the nonzero value of
/// `[[a,b],c] + [[b,c],a] + [[c,a],b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    pub triple: (u32, u32, u32),
    pub residual: Vector,
}

impl TruncatedAlgebra {
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut seen = BTreeSet::new();
        for e in self.table().entries() {
            let (l, r) = (e.left, e.right);
            if l == r {
                violations.push(Violation::Diagonal { index: l });
                continue;
            }
            if l > r {
                violations.push(Violation::Unordered { left: l, right: r });
            }
            if !seen.insert((l.min(r), l.max(r))) {
                violations.push(Violation::Duplicate { left: l, right: r });
            }
            let mut targets = BTreeSet::new();
            if e.terms.iter().any(|(t, c)| c.is_zero() || !targets.insert(*t)) {
                violations.push(Violation::MalformedTerms { left: l, right: r });
            }
            let (Some(dl), Some(dr)) = (self.degree_of(l), self.degree_of(r)) else {
                continue;
            };
            for (t, _) in &e.terms {
                match self.degree_of(*t) {
                    None => violations.push(Violation::OutOfRange {
                        left: l,
                        right: r,
                        target: *t,
                    }),
                    Some(dt) if dt != dl + dr => violations.push(Violation::Degree {
                        left: l,
                        right: r,
                        target: *t,
                        expected: dl + dr,
                        found: dt,
                    }),
                    Some(_) => {}
                }
            }
        }
        ValidationReport { violations }
    }

    /// Number of degree-additivity violations; zero means the table is graded.
    pub fn grading_violations(&self) -> usize {
        self.validate().degree_violations()
    }

    pub fn is_graded(&self) -> bool {
        self.grading_violations() == 0
    }

    /// All basis triples `i < j < k` with degree sum at most `N` on which
    /// Jacobi fails.
    pub fn jacobi_check(&self) -> Vec<JacobiViolation> {
        let n = self.dim();
        let top = self.truncation();
        let mut found: Vec<JacobiViolation> = (0..n)
            .into_par_iter()
            .flat_map_iter(|a| {
                let mut out = Vec::new();
                for b in a + 1..n {
                    for c in b + 1..n {
                        let deg = self.degree_at(a) + self.degree_at(b) + self.degree_at(c);
                        if deg > top {
                            continue;
                        }
                        let r = self.jacobi_residual_at(a, b, c);
                        if !r.is_empty() {
                            out.push(JacobiViolation {
                                triple: (self.index_at(a), self.index_at(b), self.index_at(c)),
                                residual: Vector::from_terms(
                                    r.into_iter().map(|(k, v)| (self.index_at(k), v)),
                                ),
                            });
                        }
                    }
                }
                out
            })
            .collect();
        found.sort_by_key(|v| v.triple);
        found
    }

    fn jacobi_residual_at(&self, a: usize, b: usize, c: usize) -> BTreeMap<usize, Scalar> {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            for (k, ck) in self.bracket_at(x, y) {
                for (m, cm) in self.bracket_at(*k, z) {
                    *acc.entry(*m).or_insert_with(Scalar::zero) += ck * cm;
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::super::{BasisElement, StructureTable, TableEntry};
    use super::*;
    use crate::exactla::int;

    fn basis(n: u32) -> Vec<BasisElement> {
        (1..=n).map(|i| BasisElement::new(i, i)).collect()
    }

    #[test]
    fn empty_algebra_is_valid() {
        let l = TruncatedAlgebra::new("empty", vec![], StructureTable::new(), 1, 1).unwrap();
        assert!(l.validate().is_empty());
        assert!(l.jacobi_check().is_empty());
    }

    #[test]
    fn degree_violation_is_listed() {
        let mut t = StructureTable::new();
        t.add_term(1, 2, 2, int(1));
        let l = TruncatedAlgebra::new("bad", basis(3), t, 3, 1).unwrap();
        let report = l.validate();
        assert_eq!(
            report.violations,
            vec![Violation::Degree {
                left: 1,
                right: 2,
                target: 2,
                expected: 3,
                found: 2
            }]
        );
        assert!(!l.is_graded());
    }

    #[test]
    fn raw_defects_are_listed() {
        let t = StructureTable::from_entries(vec![
            TableEntry {
                left: 2,
                right: 1,
                terms: vec![(3, int(1))],
            },
            TableEntry {
                left: 1,
                right: 2,
                terms: vec![(3, int(1)), (9, int(1))],
            },
            TableEntry {
                left: 1,
                right: 1,
                terms: vec![(2, int(1))],
            },
        ]);
        let l = TruncatedAlgebra::new("raw", basis(3), t, 3, 1).unwrap();
        let v = l.validate().violations;
        assert!(v.contains(&Violation::Unordered { left: 2, right: 1 }));
        assert!(v.contains(&Violation::Duplicate { left: 1, right: 2 }));
        assert!(v.contains(&Violation::Diagonal { index: 1 }));
        assert!(v.contains(&Violation::OutOfRange {
            left: 1,
            right: 2,
            target: 9
        }));
    }

    #[test]
    fn jacobi_failure_is_found() {
        let mut t = StructureTable::new();
        t.add_term(1, 2, 3, int(1));
        t.add_term(1, 3, 4, int(1));
        t.add_term(2, 3, 5, int(1));
        t.add_term(2, 4, 6, int(1));
        let l = TruncatedAlgebra::new("j", basis(6), t, 6, 1).unwrap();
        let bad = l.jacobi_check();
        assert!(!bad.is_empty());
        assert_eq!(bad[0].triple, (1, 2, 3));
    }
}
