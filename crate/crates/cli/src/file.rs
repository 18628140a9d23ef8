//! JSON interchange formats. Coefficients are always canonical rational
//! strings.

use std::collections::BTreeMap;
use std::fmt;

use gradlie::algebra::{BasisElement, StructureTable, TruncatedAlgebra, Vector, Violation};
use gradlie::derivations::{ExtensionSpec, GradedOperator};
use gradlie::exactla::{format_scalar, parse_scalar};
use serde::{Deserialize, Serialize};

/// A parse or validation failure, with the location it was found at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub location: String,
    pub message: String,
}

impl InputError {
    fn at(location: impl Into<String>, message: impl fmt::Display) -> Self {
        Self {
            location: location.into(),
            message: message.to_string(),
        }
    }

    fn json(source: &str, e: &serde_json::Error) -> Self {
        Self::at(format!("{source}:{}:{}", e.line(), e.column()), e)
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for InputError {}

pub type Term = (u32, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub index: u32,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub truncation: u32,
    pub period: u32,
    pub basis: Vec<BasisEntry>,
    pub brackets: Vec<(u32, u32, Vec<Term>)>,
}

fn emit_vector(v: &Vector) -> Vec<Term> {
    v.terms().map(|(k, c)| (k, format_scalar(c))).collect()
}

fn parse_terms(location: &str, terms: &[Term]) -> Result<Vector, InputError> {
    let mut v = Vector::zero();
    for (n, (k, c)) in terms.iter().enumerate() {
        let c = parse_scalar(c).map_err(|e| InputError::at(format!("{location}[{n}]"), e))?;
        v.add_term(*k, &c);
    }
    Ok(v)
}

impl AlgebraFile {
    pub fn from_algebra(l: &TruncatedAlgebra) -> Self {
        Self {
            name: l.name().to_owned(),
            truncation: l.truncation(),
            period: l.period(),
            basis: l
                .basis()
                .iter()
                .map(|b| BasisEntry {
                    index: b.index,
                    degree: b.degree,
                    label: b.label.clone(),
                })
                .collect(),
            brackets: l
                .table()
                .entries()
                .iter()
                .map(|e| {
                    (
                        e.left,
                        e.right,
                        e.terms.iter().map(|(k, c)| (*k, format_scalar(c))).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn parse(source: &str, text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| InputError::json(source, &e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    /// Builds the algebra; the table must be well formed, but need not be
    /// graded.
    pub fn to_algebra(&self, source: &str) -> Result<TruncatedAlgebra, InputError> {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElement {
                index: b.index,
                degree: b.degree,
                label: b.label.clone(),
            })
            .collect();
        let mut table = StructureTable::new();
        for (n, (i, j, terms)) in self.brackets.iter().enumerate() {
            let here = format!("{source}: brackets[{n}]");
            if i >= j {
                return Err(InputError::at(here, format!("pair ({i}, {j}) must have i < j")));
            }
            let v = parse_terms(&format!("{here}[2]"), terms)?;
            for (k, c) in v.terms() {
                table.add_term(*i, *j, k, c.clone());
            }
        }
        let l = TruncatedAlgebra::new(self.name.clone(), basis, table, self.truncation, self.period)
            .map_err(|e| InputError::at(source, e))?;
        let report = l.validate();
        if let Some(v) = report
            .violations
            .iter()
            .find(|v| !matches!(v, Violation::Degree { .. }))
        {
            return Err(InputError::at(source, format!("{v:?}")));
        }
        Ok(l)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub label: String,
    /// `[source index, image terms]`
    pub images: Vec<(u32, Vec<Term>)>,
}

/// Input of `extend`: derivations of the base, one per new generator, and
/// the brackets between generators (by generator position).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationsFile {
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub brackets: Vec<(usize, usize, Vec<Term>)>,
}

impl DerivationsFile {
    pub fn parse(source: &str, text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| InputError::json(source, &e))
    }

    pub fn from_spec(spec: &ExtensionSpec) -> Self {
        Self {
            generators: spec
                .generators
                .iter()
                .map(|(label, d)| GeneratorEntry {
                    label: label.clone(),
                    images: d.images().map(|(i, v)| (i, emit_vector(v))).collect(),
                })
                .collect(),
            brackets: spec
                .brackets
                .iter()
                .map(|(&(s, t), v)| (s, t, emit_vector(v)))
                .collect(),
        }
    }

    pub fn to_spec(&self, source: &str) -> Result<ExtensionSpec, InputError> {
        let mut generators = Vec::new();
        for (g, entry) in self.generators.iter().enumerate() {
            let mut d = GradedOperator::zero();
            for (n, (i, terms)) in entry.images.iter().enumerate() {
                let v = parse_terms(&format!("{source}: generators[{g}].images[{n}][1]"), terms)?;
                d.add_image(*i, &v);
            }
            generators.push((entry.label.clone(), d));
        }
        let mut brackets = BTreeMap::new();
        for (n, (s, t, terms)) in self.brackets.iter().enumerate() {
            let v = parse_terms(&format!("{source}: brackets[{n}][2]"), terms)?;
            if brackets.insert((*s, *t), v).is_some() {
                return Err(InputError::at(
                    format!("{source}: brackets[{n}]"),
                    format!("pair ({s}, {t}) given twice"),
                ));
            }
        }
        Ok(ExtensionSpec { generators, brackets })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}
