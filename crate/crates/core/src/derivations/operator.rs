use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{TruncatedAlgebra, Vector};
use crate::error::{Error, Result};
use crate::exactla::Scalar;

/// A sparse linear endomorphism, stored as the images of basis elements.
///
/// Basis elements without an entry map to zero. Images are kept exactly as
/// given; use [`GradedOperator::components`] to split by weight.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedOperator {
    images: BTreeMap<u32, Vector>,
}

impl GradedOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_images<I: IntoIterator<Item = (u32, Vector)>>(images: I) -> Self {
        let mut op = Self::zero();
        for (i, v) in images {
            op.add_image(i, &v);
        }
        op
    }

    /// Adds `v` to the image of basis element `index`.
    pub fn add_image(&mut self, index: u32, v: &Vector) {
        let slot = self.images.entry(index).or_default();
        *slot = &*slot + v;
        if slot.is_zero() {
            self.images.remove(&index);
        }
    }

    /// `ad_v = [v, ·]`.
    pub fn ad(l: &TruncatedAlgebra, v: &Vector) -> Result<Self> {
        let mut op = Self::zero();
        for b in l.basis() {
            op.add_image(b.index, &l.bracket(v, &Vector::basis(b.index))?);
        }
        Ok(op)
    }

    pub fn image(&self, index: u32) -> Vector {
        self.images.get(&index).cloned().unwrap_or_default()
    }

    pub fn images(&self) -> impl Iterator<Item = (u32, &Vector)> + '_ {
        self.images.iter().map(|(&i, v)| (i, v))
    }

    pub fn is_zero(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, c) in v.terms() {
            if let Some(img) = self.images.get(&i) {
                out = &out + &img.scale(c);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_images(self.images.iter().map(|(&i, v)| (i, v.scale(c))))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, v) in other.images() {
            out.add_image(i, v);
        }
        out
    }

    /// Drops image terms that are not basis elements of `l` (for example
    /// degrees above its truncation) and images of elements outside `l`.
    pub fn restricted_to(&self, l: &TruncatedAlgebra) -> Self {
        Self::from_images(self.images.iter().filter(|(i, _)| l.position(**i).is_some()).map(
            |(&i, v)| {
                (
                    i,
                    Vector::from_terms(
                        v.terms()
                            .filter(|(k, _)| l.position(*k).is_some())
                            .map(|(k, c)| (k, c.clone())),
                    ),
                )
            },
        ))
    }

    /// Splits into weight-homogeneous parts; the weight of a term `b ↦ c·t` is
    /// `deg t − deg b`.
    pub fn components(&self, l: &TruncatedAlgebra) -> Result<BTreeMap<i64, GradedOperator>> {
        let mut out: BTreeMap<i64, GradedOperator> = BTreeMap::new();
        for (i, v) in self.images() {
            let di = l.degree_of(i).ok_or(Error::UnknownIndex(i))?;
            for (k, c) in v.terms() {
                let dk = l.degree_of(k).ok_or(Error::UnknownIndex(k))?;
                let w = i64::from(dk) - i64::from(di);
                out.entry(w)
                    .or_default()
                    .add_image(i, &Vector::from_terms([(k, c.clone())]));
            }
        }
        Ok(out)
    }

    /// The weight, if the operator is nonzero and homogeneous.
    pub fn weight(&self, l: &TruncatedAlgebra) -> Result<Option<i64>> {
        let parts = self.components(l)?;
        Ok(match parts.len() {
            1 => parts.keys().next().copied(),
            _ => None,
        })
    }

    /// First basis pair `(a, b)` on which `D[a,b] = [Da,b] + [a,Db]` fails.
    pub fn leibniz_failure(&self, l: &TruncatedAlgebra) -> Result<Option<(u32, u32)>> {
        for (pa, ba) in l.basis().iter().enumerate() {
            let a = Vector::basis(ba.index);
            let da = self.image(ba.index);
            for bb in &l.basis()[pa + 1..] {
                let b = Vector::basis(bb.index);
                let lhs = self.apply(&l.bracket(&a, &b)?);
                let rhs = &l.bracket(&da, &b)? + &l.bracket(&a, &self.image(bb.index))?;
                if lhs != rhs {
                    return Ok(Some((ba.index, bb.index)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_derivation(&self, l: &TruncatedAlgebra) -> Result<bool> {
        Ok(self.leibniz_failure(l)?.is_none())
    }

    /// Coordinates over `(source position, target position)` pairs of `l`.
    pub(crate) fn entries_at<'a>(
        &'a self,
        l: &'a TruncatedAlgebra,
    ) -> impl Iterator<Item = (usize, usize, &'a Scalar)> + 'a {
        self.images.iter().flat_map(move |(&i, v)| {
            let p = l.position(i).expect("operator lives on the algebra");
            v.terms()
                .map(move |(k, c)| (p, l.position(k).expect("operator lives on the algebra"), c))
        })
    }

    pub(crate) fn from_entries_at(
        l: &TruncatedAlgebra,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Self {
        let mut op = Self::zero();
        for (p, t, c) in entries {
            if !c.is_zero() {
                op.add_image(l.index_at(p), &Vector::from_terms([(l.index_at(t), c)]));
            }
        }
        op
    }

    /// Human-readable images, one line per basis element.
    pub fn describe(&self, l: &TruncatedAlgebra) -> Vec<String> {
        self.images()
            .map(|(i, v)| format!("{} ↦ {}", l.label(i), l.format_vector(v)))
            .collect()
    }
}
