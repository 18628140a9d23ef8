use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Scalar;

/// Sparse row over the integers: sorted by column, no zero entries.
type IntRow = Vec<(usize, BigInt)>;

/// An incrementally built row space, kept in (non-reduced) echelon form with
/// primitive integer rows.
///
/// Rows are inserted one at a time; each insertion is reduced against the
/// existing pivots and either becomes a new pivot row or vanishes.
#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    cols: usize,
    pivots: BTreeMap<usize, IntRow>,
}

impl RowSpace {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Inserts a dense row; returns `true` if it enlarged the space.
    pub fn insert(&mut self, row: &[Scalar]) -> bool {
        assert_eq!(row.len(), self.cols, "row length does not match column count");
        self.insert_sparse(row.iter().enumerate().filter(|(_, v)| !v.is_zero()))
    }

    /// Inserts a sparse row given as `(column, value)` pairs (repeats summed).
    pub fn insert_sparse<'a, I>(&mut self, entries: I) -> bool
    where
        I: IntoIterator<Item = (usize, &'a Scalar)>,
    {
        let row = self.reduce(to_int_row(entries, self.cols));
        match row.first() {
            Some(&(lead, _)) => {
                self.pivots.insert(lead, row);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, row: &[Scalar]) -> bool {
        assert_eq!(row.len(), self.cols, "row length does not match column count");
        self.contains_sparse(row.iter().enumerate().filter(|(_, v)| !v.is_zero()))
    }

    pub fn contains_sparse<'a, I>(&self, entries: I) -> bool
    where
        I: IntoIterator<Item = (usize, &'a Scalar)>,
    {
        self.reduce(to_int_row(entries, self.cols)).is_empty()
    }

    /// Reduced row echelon basis, each row scaled so its pivot is 1, in pivot
    /// column order.
    pub fn basis(&self) -> Vec<Vec<(usize, Scalar)>> {
        self.reduced_rows()
            .into_values()
            .map(|row| {
                let lead = row[0].1.clone();
                row.into_iter()
                    .map(|(c, v)| (c, Scalar::new(v, lead.clone())))
                    .collect()
            })
            .collect()
    }

    fn reduce(&self, mut row: IntRow) -> IntRow {
        while let Some(&(lead, _)) = row.first() {
            match self.pivots.get(&lead) {
                Some(pivot) => row = eliminate(pivot, &row, lead),
                None => break,
            }
        }
        row
    }

    /// Fully reduced rows keyed by pivot column (integer form, pivot positive).
    fn reduced_rows(&self) -> BTreeMap<usize, IntRow> {
        let mut done: BTreeMap<usize, IntRow> = BTreeMap::new();
        for (&lead, row) in self.pivots.iter().rev() {
            let mut row = row.clone();
            loop {
                let hit = row
                    .iter()
                    .skip(1)
                    .map(|(c, _)| *c)
                    .find(|c| done.contains_key(c));
                match hit {
                    Some(c) => row = eliminate(&done[&c], &row, c),
                    None => break,
                }
            }
            debug_assert_eq!(row[0].0, lead);
            done.insert(lead, row);
        }
        done
    }

    pub(crate) fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let reduced = self.reduced_rows();
        // free column → [(pivot column, −entry / pivot)]
        let mut by_free: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (&lead, row) in &reduced {
            let pivot = &row[0].1;
            for (c, v) in row.iter().skip(1) {
                by_free
                    .entry(*c)
                    .or_default()
                    .push((lead, Scalar::new(-v.clone(), pivot.clone())));
            }
        }
        (0..self.cols)
            .filter(|c| !reduced.contains_key(c))
            .map(|free| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[free] = Scalar::one();
                for (lead, value) in by_free.remove(&free).unwrap_or_default() {
                    v[lead] = value;
                }
                normalize_leading(&mut v);
                v
            })
            .collect()
    }

    /// Solution of the augmented system whose right-hand side sits in column
    /// `rhs`; free variables are zero.
    pub(crate) fn particular_solution(&self, rhs: usize) -> Vec<Scalar> {
        let mut x = vec![Scalar::zero(); rhs];
        for (lead, row) in self.reduced_rows() {
            if let Some((_, v)) = row.iter().find(|(c, _)| *c == rhs) {
                x[lead] = Scalar::new(v.clone(), row[0].1.clone());
            }
        }
        x
    }
}

fn normalize_leading(v: &mut [Scalar]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        if !lead.is_one() {
            for x in v.iter_mut() {
                *x /= &lead;
            }
        }
    }
}

fn to_int_row<'a, I>(entries: I, cols: usize) -> IntRow
where
    I: IntoIterator<Item = (usize, &'a Scalar)>,
{
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (c, v) in entries {
        assert!(c < cols, "column {c} out of bounds ({cols})");
        let slot = acc.entry(c).or_insert_with(Scalar::zero);
        *slot += v;
    }
    acc.retain(|_, v| !v.is_zero());
    let lcm = acc
        .values()
        .fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let row = acc
        .into_iter()
        .map(|(c, v)| (c, v.numer() * (&lcm / v.denom())))
        .collect();
    primitive(row)
}

/// Divides by the content and makes the leading entry positive.
fn primitive(mut row: IntRow) -> IntRow {
    let Some(first) = row.first() else {
        return row;
    };
    let mut g = first.1.abs();
    for (_, v) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(v);
    }
    let flip = row[0].1.is_negative();
    if !g.is_one() || flip {
        let g = if flip { -g } else { g };
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    row
}

/// `a·row − b·pivot` with `a`, `b` the entries at `col`, made primitive.
fn eliminate(pivot: &IntRow, row: &IntRow, col: usize) -> IntRow {
    let a = &pivot.iter().find(|(c, _)| *c == col).expect("pivot entry").1;
    let b = &row.iter().find(|(c, _)| *c == col).expect("row entry").1;
    let g = a.gcd(b);
    let ca = a / &g;
    let cb = b / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_pivot = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        let (c, v) = if take_row {
            i += 1;
            (row[i - 1].0, &ca * &row[i - 1].1)
        } else if take_pivot {
            j += 1;
            (pivot[j - 1].0, -(&cb * &pivot[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (row[i - 1].0, &ca * &row[i - 1].1 - &cb * &pivot[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    primitive(out)
}
