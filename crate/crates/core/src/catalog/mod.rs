//! Fixture algebras as explicit truncated structure tables.
//!
//! Every builder takes the truncation `N` and emits the full sparse table of
//! the quotient by degrees above `N`. Indices and degrees:
//!
//! | fixture | basis | index of `e_i` / `f_q` | degree |
//! |---|---|---|---|
//! | `n1`, `m2`, `witt_pos` | `e₁ … e_N` | `i` | `i` |
//! | `n2` | `f₁ … f_N` | `q` | `q` |
//! | `witt_nonneg` | `e₀ … e_N` | `i + 1` | `i` |
//! | `exampleL`, `Rn1`, `Rn2` | `x, y, e₁ …` | `x = 1`, `y = 2`, `e_i = i + 2` | `0, 0, i` |

mod closed_form;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::algebra::{BasisElement, StructureTable, TruncatedAlgebra};
use crate::error::{Error, Result};
use crate::exactla::{format_scalar, int, parse_scalar, Scalar};

pub use closed_form::{
    closed_form_derivation, closed_form_derivations, ClosedForm, Param, Reading,
};

/// Coefficients `[b_q, b_l] = table(q mod m, l mod m)·b_{q+l}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueRule {
    modulus: u32,
    table: Vec<Vec<Scalar>>,
}

impl ResidueRule {
    pub fn new(table: Vec<Vec<Scalar>>) -> Result<Self> {
        let m = table.len();
        if m == 0 || table.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidParameter(
                "residue table must be square and nonempty".into(),
            ));
        }
        Ok(Self {
            modulus: m as u32,
            table,
        })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn coefficient(&self, q: u32, l: u32) -> &Scalar {
        let m = self.modulus;
        &self.table[(q % m) as usize][(l % m) as usize]
    }

    /// Residue pairs `(r, s)` with `table(r, s) ≠ −table(s, r)`.
    pub fn antisymmetry_defects(&self) -> Vec<(u32, u32)> {
        let m = self.modulus;
        let mut out = Vec::new();
        for r in 0..m {
            for s in 0..m {
                if *self.coefficient(r, s) != -self.coefficient(s, r).clone() {
                    out.push((r, s));
                }
            }
        }
        out
    }

    /// The graded algebra `[b_q, b_l] = c·b_{q+l}` on `b₁ … b_N`, `deg b_q = q`.
    pub fn algebra(&self, name: &str, letter: char, n: u32) -> Result<TruncatedAlgebra> {
        let basis = (1..=n)
            .map(|q| BasisElement::labeled(q, q, format!("{letter}{q}")))
            .collect();
        let mut t = StructureTable::new();
        for q in 1..=n {
            for l in q + 1..=n {
                if q + l <= n {
                    t.add_term(q, l, q + l, self.coefficient(q, l).clone());
                }
            }
        }
        TruncatedAlgebra::new(name, basis, t, n, self.modulus)
    }
}

/// Structure constants of `n₂`: row `q mod 8`, column `l mod 8`.
pub const N2_TABLE: [[i64; 8]; 8] = [
    [0, 1, -2, -1, 0, 1, 2, -1],
    [-1, 0, 1, 1, -3, -2, 0, 1],
    [2, -1, 0, 0, 0, 1, -1, 0],
    [1, -1, 0, 0, 3, -1, 1, -2],
    [0, 3, 0, -3, 0, 3, 0, -3],
    [-1, 2, -1, 1, -3, 0, 0, 1],
    [-2, 0, 1, -1, 0, 0, 0, 1],
    [1, -1, 0, 2, 3, -1, -1, 0],
];

/// `c_{i,j}` of `n₁`: `1, 0, −1` as `i − j ≡ 1, 0, −1 (mod 3)`.
pub fn n1_rule() -> ResidueRule {
    let mut rows = vec![vec![Scalar::zero(); 3]; 3];
    for (r, row) in rows.iter_mut().enumerate() {
        for (s, c) in row.iter_mut().enumerate() {
            *c = match (3 + r - s) % 3 {
                1 => int(1),
                2 => int(-1),
                _ => int(0),
            };
        }
    }
    ResidueRule::new(rows).expect("square")
}

pub fn n2_rule() -> ResidueRule {
    let rows: Vec<&[i64]> = N2_TABLE.iter().map(|r| r.as_slice()).collect();
    ResidueRule::from_integers(&rows).expect("square")
}

/// Finitely supported parameters `k ↦ value` (unlisted entries are zero).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtensionParams {
    values: BTreeMap<u32, Scalar>,
}

impl ExtensionParams {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn with(mut self, k: u32, value: Scalar) -> Self {
        self.set(k, value);
        self
    }

    pub fn set(&mut self, k: u32, value: Scalar) {
        if value.is_zero() {
            self.values.remove(&k);
        } else {
            self.values.insert(k, value);
        }
    }

    pub fn get(&self, k: u32) -> Scalar {
        self.values.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Scalar)> + '_ {
        self.values.iter().map(|(&k, v)| (k, v))
    }

    /// Parses one `k=v` assignment with a canonical rational value.
    pub fn parse_assignment(text: &str) -> Result<(u32, Scalar)> {
        let (k, v) = text
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("{text:?} is not of the form k=v")))?;
        let k = k
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{k:?} is not a parameter index")))?;
        Ok((k, parse_scalar(v.trim())?))
    }
}

impl fmt::Display for ExtensionParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (k, v)) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}={}", format_scalar(v))?;
        }
        Ok(())
    }
}

/// The stable fixture identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fixture {
    N1,
    N2,
    M2,
    WittPos,
    WittNonneg,
    ExampleL,
    Rn1,
    Rn2,
}

impl Fixture {
    pub const ALL: [Fixture; 8] = [
        Fixture::N1,
        Fixture::N2,
        Fixture::M2,
        Fixture::WittPos,
        Fixture::WittNonneg,
        Fixture::ExampleL,
        Fixture::Rn1,
        Fixture::Rn2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::N1 => "n1",
            Fixture::N2 => "n2",
            Fixture::M2 => "m2",
            Fixture::WittPos => "witt_pos",
            Fixture::WittNonneg => "witt_nonneg",
            Fixture::ExampleL => "exampleL",
            Fixture::Rn1 => "Rn1",
            Fixture::Rn2 => "Rn2",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| Error::UnknownFixture(name.to_owned()))
    }

    pub fn description(self) -> &'static str {
        match self {
            Fixture::N1 => "positive part of the affine algebra A1(1), c_ij by i-j mod 3",
            Fixture::N2 => "positive part of the affine algebra A2(2), 8x8 residue table",
            Fixture::M2 => "[e1,ei]=e(i+1) for i>=2, [e2,ej]=e(j+2) for j>=3",
            Fixture::WittPos => "positive Witt algebra, [ei,ej]=(i-j)e(i+j)",
            Fixture::WittNonneg => "non-negative Witt algebra, includes e0 in degree 0",
            Fixture::ExampleL => "{x,y,e1,...}: [ei,e1]=e(i+1), x and y act diagonally",
            Fixture::Rn1 => "solvable extension of n1 by x, y (parameters alpha_k, k>=2)",
            Fixture::Rn2 => "solvable extension of n2 by x, y (parameters beta_k, k>=1)",
        }
    }

    pub fn period(self) -> u32 {
        match self {
            Fixture::N1 | Fixture::Rn1 => 3,
            Fixture::N2 | Fixture::Rn2 => 8,
            _ => 1,
        }
    }

    pub fn min_truncation(self) -> u32 {
        match self {
            Fixture::N2 | Fixture::Rn2 => 8,
            Fixture::WittNonneg => 1,
            _ => 3,
        }
    }

    /// Whether the fixture takes extension parameters (`alpha` for `Rn1`,
    /// `beta` for `Rn2`).
    pub fn takes_params(self) -> bool {
        matches!(self, Fixture::Rn1 | Fixture::Rn2)
    }

    pub fn build(self, n: u32) -> Result<TruncatedAlgebra> {
        self.build_with(&ExtensionParams::zero(), n)
    }

    pub fn build_with(self, params: &ExtensionParams, n: u32) -> Result<TruncatedAlgebra> {
        if n < self.min_truncation() {
            return Err(Error::TruncationTooSmall {
                fixture: self.name().to_owned(),
                min: self.min_truncation(),
                given: n,
            });
        }
        if !params.is_zero() && !self.takes_params() {
            return Err(Error::InvalidParameter(format!(
                "fixture {} takes no parameters",
                self.name()
            )));
        }
        match self {
            Fixture::N1 => build_n1(n),
            Fixture::N2 => build_n2(n),
            Fixture::M2 => build_m2(n),
            Fixture::WittPos => build_witt_positive(n),
            Fixture::WittNonneg => build_witt_nonneg(n),
            Fixture::ExampleL => build_example_l(n),
            Fixture::Rn1 => build_rn1(params, n),
            Fixture::Rn2 => build_rn2(params, n),
        }
    }
}

impl FromStr for Fixture {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_name(s)
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn build_n1(n: u32) -> Result<TruncatedAlgebra> {
    n1_rule().algebra("n1", 'e', n)
}

pub fn build_n2(n: u32) -> Result<TruncatedAlgebra> {
    n2_rule().algebra("n2", 'f', n)
}

fn e_basis(n: u32) -> Vec<BasisElement> {
    (1..=n)
        .map(|i| BasisElement::labeled(i, i, format!("e{i}")))
        .collect()
}

pub fn build_m2(n: u32) -> Result<TruncatedAlgebra> {
    let mut t = StructureTable::new();
    for i in 2..n {
        t.add_term(1, i, i + 1, int(1));
    }
    for j in 3..=n.saturating_sub(2) {
        t.add_term(2, j, j + 2, int(1));
    }
    TruncatedAlgebra::new("m2", e_basis(n), t, n, 1)
}

pub fn build_witt_positive(n: u32) -> Result<TruncatedAlgebra> {
    let mut t = StructureTable::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if i + j <= n {
                t.add_term(i, j, i + j, int(i64::from(i) - i64::from(j)));
            }
        }
    }
    TruncatedAlgebra::new("witt_pos", e_basis(n), t, n, 1)
}

/// `e_i` has index `i + 1`.
pub fn build_witt_nonneg(n: u32) -> Result<TruncatedAlgebra> {
    let basis = (0..=n)
        .map(|i| BasisElement::labeled(i + 1, i, format!("e{i}")))
        .collect();
    let mut t = StructureTable::new();
    for i in 0..=n {
        for j in i + 1..=n {
            if i + j <= n {
                t.add_term(i + 1, j + 1, i + j + 1, int(i64::from(i) - i64::from(j)));
            }
        }
    }
    TruncatedAlgebra::new("witt_nonneg", basis, t, n, 1)
}

pub(crate) const X: u32 = 1;
pub(crate) const Y: u32 = 2;

/// Index of `e_q` (or `f_q`) in the algebras with generators `x, y`.
pub(crate) fn ext_index(q: u32) -> u32 {
    q + 2
}

fn xy_basis(letter: char, n: u32) -> Vec<BasisElement> {
    let mut basis = vec![BasisElement::labeled(X, 0, "x"), BasisElement::labeled(Y, 0, "y")];
    basis.extend((1..=n).map(|q| BasisElement::labeled(ext_index(q), q, format!("{letter}{q}"))));
    basis
}

pub fn build_example_l(n: u32) -> Result<TruncatedAlgebra> {
    let e = ext_index;
    let mut t = StructureTable::new();
    for i in 2..n {
        t.add_term(e(i), e(1), e(i + 1), int(1));
    }
    t.add_term(X, e(1), e(1), int(1));
    for i in 2..=n {
        t.add_term(X, e(i), e(i), int(i64::from(i) - 1));
        t.add_term(Y, e(i), e(i), int(1));
    }
    TruncatedAlgebra::new("exampleL", xy_basis('e', n), t, n, 1)
}

/// Adds the brackets of a residue-rule algebra on `b₁ … b_N`, shifted to the
/// `x, y` indexing.
fn add_shifted(t: &mut StructureTable, rule: &ResidueRule, n: u32) {
    for q in 1..=n {
        for l in q + 1..=n {
            if q + l <= n {
                t.add_term(
                    ext_index(q),
                    ext_index(l),
                    ext_index(q + l),
                    rule.coefficient(q, l).clone(),
                );
            }
        }
    }
}

fn finish_extension(name: String, basis: Vec<BasisElement>, t: StructureTable, n: u32, period: u32) -> Result<TruncatedAlgebra> {
    let l = TruncatedAlgebra::new(name, basis, t, n, period)?;
    match l.jacobi_check().first() {
        Some(v) => Err(Error::JacobiFailure { triple: v.triple }),
        None => Ok(l),
    }
}

/// `R_{n₁}(α)`; parameters `α_k` with `k ≥ 2`. Nonzero parameters give a
/// filtered, not graded, table.
pub fn build_rn1(alpha: &ExtensionParams, n: u32) -> Result<TruncatedAlgebra> {
    if let Some((k, _)) = alpha.iter().find(|(k, _)| *k < 2) {
        return Err(Error::InvalidParameter(format!(
            "alpha_{k}: Rn1 parameters start at index 2"
        )));
    }
    let e = ext_index;
    let mut t = StructureTable::new();
    add_shifted(&mut t, &n1_rule(), n);
    let mut put = |src: u32, g: u32, q: u32, c: Scalar| {
        if q >= 1 && q <= n {
            t.add_term(e(src), g, e(q), c);
        }
    };
    for i in 1..=n.div_ceil(3) {
        let ii = int(i64::from(i));
        let (a, b, c) = (3 * i - 2, 3 * i - 1, 3 * i);
        if a <= n {
            put(a, X, a, ii.clone());
            put(a, Y, a, int(-1));
        }
        if b <= n {
            put(b, X, b, int(i64::from(i) - 1));
            put(b, Y, b, int(1));
        }
        if c <= n {
            put(c, X, c, ii.clone());
        }
        for (k, ak) in alpha.iter() {
            if a <= n {
                put(a, X, 3 * k + 3 * i - 5, ak * int(i64::from(i) - 1));
                put(a, Y, 3 * k + 3 * i - 5, ak.clone());
            }
            if b <= n {
                put(b, X, 3 * k + 3 * i - 4, ak * &ii);
                put(b, Y, 3 * k + 3 * i - 4, -ak.clone());
            }
            if c <= n {
                put(c, X, 3 * k + 3 * i - 3, ak * &ii);
            }
        }
    }
    for (k, ak) in alpha.iter() {
        if 3 * k <= n {
            t.add_term(X, Y, e(3 * k), ak * int(1 - i64::from(k)));
        }
    }
    let name = if alpha.is_zero() {
        "Rn1".to_owned()
    } else {
        format!("Rn1(alpha:{alpha})")
    };
    finish_extension(name, xy_basis('e', n), t, n, 3)
}

/// Eigenvalue of `ad` on `[f_{8i+r}, x]`, `r = 1 … 8`.
pub(crate) const RN2_X_WEIGHTS: [i64; 8] = [1, -2, -1, 0, 1, 2, -1, 0];

/// Eigenvalue of `[f_q, y]`.
pub(crate) fn rn2_y_weight(q: u32) -> i64 {
    let i = i64::from((q - 1) / 8);
    match (q - 1) % 8 + 1 {
        1 => 2 * i,
        2..=6 => 2 * i + 1,
        _ => 2 * i + 2,
    }
}

/// `R_{n₂}(β)`; parameters `β_k` with `k ≥ 1`.
pub fn build_rn2(beta: &ExtensionParams, n: u32) -> Result<TruncatedAlgebra> {
    if beta.iter().any(|(k, _)| k == 0) {
        return Err(Error::InvalidParameter(
            "beta_0: Rn2 parameters start at index 1".into(),
        ));
    }
    let e = ext_index;
    let mut t = StructureTable::new();
    add_shifted(&mut t, &n2_rule(), n);
    for q in 1..=n {
        let r = ((q - 1) % 8) as usize;
        t.add_term(e(q), X, e(q), int(RN2_X_WEIGHTS[r]));
        let w = int(rn2_y_weight(q));
        t.add_term(e(q), Y, e(q), w.clone());
        for (k, bk) in beta.iter() {
            if q + 8 * k <= n {
                t.add_term(e(q), Y, e(q + 8 * k), &w * bk);
            }
        }
    }
    let name = if beta.is_zero() {
        "Rn2".to_owned()
    } else {
        format!("Rn2(beta:{beta})")
    };
    finish_extension(name, xy_basis('f', n), t, n, 8)
}

/// Abelian algebra on `n` elements of degree 1, truncated at 2 so that
/// pairs of elements are in range.
pub fn abelian(n: u32) -> TruncatedAlgebra {
    let basis = (1..=n)
        .map(|i| BasisElement::labeled(i, 1, format!("a{i}")))
        .collect();
    TruncatedAlgebra::new("abelian", basis, StructureTable::new(), 2, 1).expect("valid basis")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vector;

    fn br(l: &TruncatedAlgebra, a: u32, b: u32) -> Vector {
        l.bracket(&Vector::basis(a), &Vector::basis(b)).unwrap()
    }

    fn c(v: i64, i: u32) -> Vector {
        Vector::basis(i).scale(&int(v))
    }

    #[test]
    fn n1_examples() {
        let l = build_n1(10).unwrap();
        assert_eq!(br(&l, 2, 1), Vector::basis(3));
        assert_eq!(br(&l, 4, 1), Vector::zero());
        assert_eq!(br(&l, 3, 1), c(-1, 4));
        assert_eq!(br(&l, 3, 2), Vector::basis(5));
        assert_eq!(br(&l, 5, 2), Vector::zero());
        assert_eq!(br(&l, 1, 1), Vector::zero());
    }

    #[test]
    fn n2_examples() {
        let l = build_n2(16).unwrap();
        assert_eq!(br(&l, 1, 4), c(-3, 5));
        assert_eq!(br(&l, 1, 2), Vector::basis(3));
        assert_eq!(br(&l, 2, 3), Vector::zero());
        assert_eq!(br(&l, 4, 5), c(3, 9));
    }

    #[test]
    fn n2_table_is_antisymmetric() {
        assert!(n2_rule().antisymmetry_defects().is_empty());
        assert!(n1_rule().antisymmetry_defects().is_empty());
    }

    #[test]
    fn small_fixture_examples() {
        let m2 = build_m2(8).unwrap();
        assert_eq!(br(&m2, 2, 3), Vector::basis(5));
        let w = build_witt_positive(6).unwrap();
        assert_eq!(br(&w, 1, 2), c(-1, 3));
        let w0 = build_witt_nonneg(6).unwrap();
        assert_eq!(br(&w0, 1, 2), c(-1, 2));
    }

    #[test]
    fn rn_examples() {
        let r1 = build_rn1(&ExtensionParams::zero(), 9).unwrap();
        let e = ext_index;
        assert_eq!(br(&r1, e(1), X), Vector::basis(e(1)));
        assert_eq!(br(&r1, e(2), X), Vector::zero());
        assert_eq!(br(&r1, e(2), Y), Vector::basis(e(2)));
        assert_eq!(br(&r1, e(1), Y), c(-1, e(1)));
        assert_eq!(br(&r1, e(3), X), Vector::basis(e(3)));
        assert_eq!(br(&r1, X, Y), Vector::zero());

        let r2 = build_rn2(&ExtensionParams::zero(), 16).unwrap();
        assert_eq!(br(&r2, e(1), X), Vector::basis(e(1)));
        assert_eq!(br(&r2, e(2), X), c(-2, e(2)));
        assert_eq!(br(&r2, e(4), X), Vector::zero());
        assert_eq!(br(&r2, e(1), Y), Vector::zero());
        assert_eq!(br(&r2, e(2), Y), Vector::basis(e(2)));
        assert_eq!(br(&r2, e(9), Y), c(2, e(9)));
    }

    #[test]
    fn fixtures_are_lie_and_graded() {
        for f in Fixture::ALL {
            let l = f.build(16).unwrap();
            assert!(l.validate().is_empty(), "{f}: {:?}", l.validate());
            assert!(l.jacobi_check().is_empty(), "{f}");
        }
    }

    #[test]
    fn truncation_is_coherent() {
        for f in Fixture::ALL {
            let big = f.build(20).unwrap();
            assert_eq!(big.quotient(14).unwrap(), f.build(14).unwrap(), "{f}");
        }
    }

    #[test]
    fn parameter_index_ranges() {
        let bad = ExtensionParams::zero().with(1, int(1));
        assert!(matches!(build_rn1(&bad, 9), Err(Error::InvalidParameter(_))));
        let bad = ExtensionParams::zero().with(0, int(1));
        assert!(matches!(build_rn2(&bad, 9), Err(Error::InvalidParameter(_))));
        assert!(matches!(
            Fixture::N1.build_with(&ExtensionParams::zero().with(2, int(1)), 9),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn assignments_parse() {
        assert_eq!(ExtensionParams::parse_assignment("3=-1/2").unwrap(), (3, Scalar::new((-1).into(), 2.into())));
        assert!(ExtensionParams::parse_assignment("3").is_err());
        assert!(ExtensionParams::parse_assignment("x=1").is_err());
        assert!(ExtensionParams::parse_assignment("3=2/4").is_err());
    }
}
