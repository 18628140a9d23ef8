//! Derivations written out in closed form, one operator per free parameter.
//!
//! Each family lists, for one parameter set to 1 (all others 0), the image of
//! every basis element. Sources are `b_{m·i + r}` for `i ≥ 0`; a term sends it
//! to `(a·i + b)·b_{m·i + m·k + off}`, where `k` is the block of the parameter.

use std::fmt;

use crate::algebra::{TruncatedAlgebra, Vector};
use crate::derivations::GradedOperator;
use crate::error::{Error, Result};
use crate::exactla::{int, Scalar};

use super::{ext_index, Fixture, X, Y};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClosedForm {
    N1,
    N2,
    Rn1Zero,
    Rn2Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    Alpha(u32),
    Beta(u32),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Alpha(j) => write!(f, "alpha_{j}"),
            Param::Beta(j) => write!(f, "beta_{j}"),
        }
    }
}

/// Two readings of the families whose usual statement has inconsistent indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reading {
    /// Indices repaired so that every term is weight-homogeneous.
    Corrected,
    /// Indices as usually stated. The `n2` families `α_{8k+1}` and `α_{8k+8}`
    /// then fail Leibniz.
    Literal,
}

#[derive(Clone, Copy)]
struct Term {
    r: u32,
    a: i64,
    b: i64,
    off: i64,
}

const fn t(r: u32, a: i64, b: i64, off: i64) -> Term {
    Term { r, a, b, off }
}

/// `(generator, coefficient, target q)`
type GeneratorTerm = (u32, Scalar, u32);

/// Images of one parameter: period `m`, block `k`, terms, and images of the
/// degree-0 generators.
struct Shape {
    m: u32,
    k: u32,
    terms: Vec<Term>,
    generators: Vec<GeneratorTerm>,
    weight: i64,
}

const N1_ALPHA: [Term; 3] = [t(1, 1, 1, -2), t(2, 1, 0, -1), t(3, 1, 1, 0)];
const N1_BETA: [Term; 3] = [t(1, 1, 0, -2), t(2, 1, 1, -1), t(3, 1, 1, 0)];
const N1_ALPHA3: [Term; 2] = [t(1, 0, 1, 0), t(3, 0, -1, 2)];
const N1_BETA3: [Term; 2] = [t(2, 0, 1, 0), t(3, 0, -1, 1)];
const RN1_ALPHA: [Term; 2] = [t(1, 0, 1, -2), t(2, 0, -1, -1)];

const N2_A1: [Term; 8] = [
    t(1, 4, 1, 1),
    t(2, 4, 0, 2),
    t(3, 4, 1, 3),
    t(4, 4, 2, 4),
    t(5, 4, 3, 5),
    t(6, 4, 4, 6),
    t(7, 4, 3, 7),
    t(8, 4, 4, 8),
];
const N2_B2: [Term; 8] = [
    t(1, 2, 0, 1),
    t(2, 2, 1, 2),
    t(3, 2, 1, 3),
    t(4, 2, 1, 4),
    t(5, 2, 1, 5),
    t(6, 2, 1, 6),
    t(7, 2, 2, 7),
    t(8, 2, 2, 8),
];
const N2_A3: [Term; 4] = [t(1, 0, 1, 3), t(5, 0, -1, 7), t(6, 0, 1, 8), t(8, 0, -2, 10)];
const N2_B3: [Term; 6] = [
    t(2, 0, 1, 3),
    t(3, 0, 1, 4),
    t(4, 0, -3, 5),
    t(5, 0, -2, 6),
    t(7, 0, 1, 8),
    t(8, 0, -1, 9),
];
const N2_A4: [Term; 6] = [
    t(1, 0, 1, 4),
    t(4, 0, -3, 7),
    t(5, 0, 1, 8),
    t(6, 0, -1, 9),
    t(7, 0, 2, 10),
    t(8, 0, -1, 11),
];
const N2_A5: [Term; 4] = [t(1, 0, 1, 5), t(3, 0, -1, 7), t(5, 0, 1, 9), t(7, 0, -1, 11)];
const N2_B7: [Term; 6] = [
    t(1, 0, -2, 6),
    t(2, 0, 1, 7),
    t(3, 0, -1, 8),
    t(4, 0, 3, 9),
    t(7, 0, -1, 12),
    t(8, 0, 1, 13),
];
const N2_B8: [Term; 4] = [t(2, 0, 1, 8), t(3, 0, -1, 9), t(7, 0, 1, 13), t(8, 0, -2, 14)];
const N2_A8: [Term; 6] = [
    t(1, 0, 1, 8),
    t(3, 0, -2, 10),
    t(4, 0, -3, 11),
    t(5, 0, 1, 12),
    t(6, 0, 1, 13),
    t(8, 0, -1, 15),
];
/// `α_{8k+1}`, `k ≥ 1`, in `R_{n₂}(0)`: the eigenvalues of `x`, shifted.
const RN2_A1: [Term; 6] = [
    t(1, 0, 1, 1),
    t(2, 0, -2, 2),
    t(3, 0, -1, 3),
    t(5, 0, 1, 5),
    t(6, 0, 2, 6),
    t(7, 0, -1, 7),
];

impl ClosedForm {
    pub const ALL: [ClosedForm; 4] = [
        ClosedForm::N1,
        ClosedForm::N2,
        ClosedForm::Rn1Zero,
        ClosedForm::Rn2Zero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClosedForm::N1 => "n1",
            ClosedForm::N2 => "n2",
            ClosedForm::Rn1Zero => "Rn1_0",
            ClosedForm::Rn2Zero => "Rn2_0",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| Error::UnknownFixture(name.to_owned()))
    }

    pub fn fixture(self) -> Fixture {
        match self {
            ClosedForm::N1 => Fixture::N1,
            ClosedForm::N2 => Fixture::N2,
            ClosedForm::Rn1Zero => Fixture::Rn1,
            ClosedForm::Rn2Zero => Fixture::Rn2,
        }
    }

    /// Weight of the operator attached to `p`, or `None` if `p` is not a
    /// parameter of this family.
    pub fn weight(self, p: Param) -> Option<i64> {
        self.shape(p, Reading::Corrected).ok().map(|s| s.weight)
    }

    /// All parameters of weight at most `max_weight`, by weight.
    pub fn parameters(self, max_weight: i64) -> Vec<Param> {
        let bound = u32::try_from(max_weight.max(0) + 16).unwrap_or(u32::MAX);
        let mut out: Vec<(i64, Param)> = (1..=bound)
            .flat_map(|j| [Param::Alpha(j), Param::Beta(j)])
            .filter_map(|p| self.weight(p).map(|w| (w, p)))
            .filter(|(w, _)| *w <= max_weight)
            .collect();
        out.sort();
        out.into_iter().map(|(_, p)| p).collect()
    }

    fn shape(self, p: Param, reading: Reading) -> Result<Shape> {
        let bad = || Error::InvalidParameter(format!("{p} is not a parameter of {}", self.name()));
        match self {
            ClosedForm::N1 | ClosedForm::Rn1Zero => {
                let rn = self == ClosedForm::Rn1Zero;
                let (terms, k, weight, gens): (&[Term], u32, i64, Vec<GeneratorTerm>) = match p {
                    Param::Alpha(j) if j % 3 == 1 => {
                        let k = j.div_ceil(3);
                        if rn && k >= 2 {
                            let kk = i64::from(k);
                            (&RN1_ALPHA, k, 3 * kk - 3, vec![(X, int(1 - kk), 3 * k - 3)])
                        } else {
                            (&N1_ALPHA, k, 3 * i64::from(k) - 3, vec![])
                        }
                    }
                    Param::Beta(j) if j % 3 == 2 => {
                        let k = j.div_ceil(3);
                        if rn && k >= 2 {
                            return Err(bad());
                        }
                        (&N1_BETA, k, 3 * i64::from(k) - 3, vec![])
                    }
                    Param::Alpha(j) if j % 3 == 0 && j > 0 => {
                        let k = j / 3;
                        let kk = i64::from(k);
                        let gens = if rn {
                            vec![(X, int(kk - 1), 3 * k - 1), (Y, int(1), 3 * k - 1)]
                        } else {
                            vec![]
                        };
                        (&N1_ALPHA3, k, 3 * kk - 1, gens)
                    }
                    Param::Beta(j) if j % 3 == 0 && j > 0 => {
                        let k = j / 3;
                        let kk = i64::from(k);
                        let gens = if rn {
                            vec![(X, int(-kk), 3 * k - 2), (Y, int(1), 3 * k - 2)]
                        } else {
                            vec![]
                        };
                        (&N1_BETA3, k, 3 * kk - 2, gens)
                    }
                    _ => return Err(bad()),
                };
                Ok(Shape {
                    m: 3,
                    k,
                    terms: terms.to_vec(),
                    generators: gens,
                    weight,
                })
            }
            ClosedForm::N2 | ClosedForm::Rn2Zero => {
                let rn = self == ClosedForm::Rn2Zero;
                let (kind, k) = match p {
                    Param::Alpha(j) if j % 8 == 0 && j > 0 => ('8', j / 8 - 1),
                    Param::Alpha(j) => (
                        match j % 8 {
                            1 => '1',
                            3 => '3',
                            4 => '4',
                            5 => '5',
                            _ => return Err(bad()),
                        },
                        j / 8,
                    ),
                    Param::Beta(j) if j % 8 == 0 && j > 0 => ('b', j / 8 - 1),
                    Param::Beta(j) => (
                        match j % 8 {
                            2 => '2',
                            3 => 'c',
                            7 => '7',
                            _ => return Err(bad()),
                        },
                        j / 8,
                    ),
                };
                let kk = i64::from(k);
                let odd = 2 * kk + 1;
                let f = |r: u32| 8 * k + r;
                let mut gens = Vec::new();
                let (terms, weight): (&[Term], i64) = match kind {
                    '1' if rn && k >= 1 => {
                        gens.push((Y, int(2 * kk), 8 * k));
                        (&RN2_A1, 8 * kk)
                    }
                    '1' => (&N2_A1, 8 * kk),
                    '2' if rn && k >= 1 => return Err(bad()),
                    '2' => (&N2_B2, 8 * kk),
                    'c' => {
                        gens.push((X, int(1), f(1)));
                        gens.push((Y, int(2 * kk), f(1)));
                        (&N2_B3, 8 * kk + 1)
                    }
                    '3' => {
                        gens.push((X, int(2), f(2)));
                        gens.push((Y, int(-odd), f(2)));
                        (&N2_A3, 8 * kk + 2)
                    }
                    '4' => {
                        gens.push((X, int(1), f(3)));
                        gens.push((Y, int(-odd), f(3)));
                        (&N2_A4, 8 * kk + 3)
                    }
                    '5' => {
                        gens.push((Y, Scalar::new(odd.into(), 3.into()), f(4)));
                        (&N2_A5, 8 * kk + 4)
                    }
                    '7' => {
                        gens.push((X, int(-1), f(5)));
                        gens.push((Y, int(-odd), f(5)));
                        (&N2_B7, 8 * kk + 5)
                    }
                    'b' => {
                        gens.push((X, int(2), f(6)));
                        // the usual statement names a parameter that does not exist here
                        if reading == Reading::Corrected {
                            gens.push((Y, int(odd), f(6)));
                        }
                        (&N2_B8, 8 * kk + 6)
                    }
                    '8' => {
                        gens.push((X, int(1), f(7)));
                        gens.push((Y, int(-(2 * kk + 2)), f(7)));
                        (&N2_A8, 8 * kk + 7)
                    }
                    _ => unreachable!(),
                };
                if !rn {
                    gens.clear();
                }
                Ok(Shape {
                    m: 8,
                    k,
                    terms: terms.to_vec(),
                    generators: gens,
                    weight,
                })
            }
        }
    }
}

/// The operator of parameter `p` on `l`, which must be the fixture of `form`
/// (at any truncation). Terms landing above the truncation are dropped.
pub fn closed_form_derivation(
    form: ClosedForm,
    p: Param,
    reading: Reading,
    l: &TruncatedAlgebra,
) -> Result<GradedOperator> {
    let shape = form.shape(p, reading)?;
    let literal_n2 = reading == Reading::Literal && form == ClosedForm::N2;
    let (alpha1, alpha8) = (
        matches!(p, Param::Alpha(j) if j % 8 == 1),
        matches!(p, Param::Alpha(j) if j % 8 == 0),
    );
    let index = |q: u32| match form {
        ClosedForm::N1 | ClosedForm::N2 => q,
        _ => ext_index(q),
    };
    let n = l.truncation();
    let (m, k) = (shape.m, shape.k);
    let mut op = GradedOperator::zero();
    let mut put = |src: u32, tgt: i64, c: Scalar| {
        if tgt >= 1 && tgt <= i64::from(n) && src <= n {
            let (s, d) = (index(src), index(tgt as u32));
            if l.position(s).is_some() && l.position(d).is_some() {
                op.add_image(s, &Vector::from_terms([(d, c)]));
            }
        }
    };
    for i in 0..=n / m {
        let ii = i64::from(i);
        for term in &shape.terms {
            let src = m * i + term.r;
            let c = int(term.a * ii + term.b);
            let mut tgt = i64::from(m * i + m * k) + term.off;
            if literal_n2 {
                match (term.r, alpha1, alpha8) {
                    // coefficient stated as α_{8i+8k+1}: nonzero only for i ≤ k
                    (1, true, _) => {
                        if i > k {
                            continue;
                        }
                        tgt = i64::from(8 * k + 1);
                    }
                    (8, true, _) => tgt = i64::from(8 * k + 8),
                    // term stated as α_{8i+8k+8}·f_{8k+8}
                    (1, _, true) if term.off == 8 => {
                        if i > k {
                            continue;
                        }
                        tgt = i64::from(8 * (k - i) + 8);
                    }
                    _ => {}
                }
            }
            put(src, tgt, c);
        }
    }
    for (g, c, q) in shape.generators {
        if q >= 1 && q <= n {
            op.add_image(g, &Vector::from_terms([(index(q), c)]));
        }
    }
    Ok(op)
}

/// All corrected closed-form operators on the fixture of `form` at truncation
/// `n`, one per parameter of weight below `n`.
pub fn closed_form_derivations(form: ClosedForm, n: u32) -> Result<Vec<(Param, GradedOperator)>> {
    let l = form.fixture().build(n)?;
    form.parameters(i64::from(n) - 1)
        .into_iter()
        .map(|p| Ok((p, closed_form_derivation(form, p, Reading::Corrected, &l)?)))
        .collect()
}
