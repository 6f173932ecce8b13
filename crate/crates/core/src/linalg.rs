//! Exact row-reduced echelon bases of polynomial subspaces.
//!
//! A subspace of a graded piece is stored as rows keyed by their pivot (the
//! leading monomial under the monomial order). Every row has leading
//! coefficient 1 and no row contains another row's pivot, so reduction is a
//! single pass over the pivots present in the input.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{Monomial, Poly, Rational};

/// Candidates are merged in chunks of this many rows so the dense
/// elimination matrices stay small.
const CHUNK: usize = 32;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EchelonSpace {
    rows: BTreeMap<Monomial, Poly>,
}

impl EchelonSpace {
    pub fn new() -> EchelonSpace {
        EchelonSpace::default()
    }

    /// Builds a space from rows that are already in reduced echelon form.
    /// Returns `None` if they are not.
    pub fn from_rref_rows(rows: Vec<Poly>) -> Option<EchelonSpace> {
        let mut map = BTreeMap::new();
        for r in rows {
            let (lead, c) = r.leading()?;
            if !c.is_one() {
                return None;
            }
            map.insert(lead.clone(), r.clone());
        }
        let space = EchelonSpace { rows: map };
        space.is_reduced().then_some(space)
    }

    fn is_reduced(&self) -> bool {
        self.rows.iter().all(|(pivot, row)| {
            row.monomials()
                .all(|m| m == pivot || !self.rows.contains_key(m))
        })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, m: &Monomial) -> bool {
        self.rows.contains_key(m)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Monomial> {
        self.rows.keys()
    }

    /// Rows in descending pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &Poly> {
        self.rows.values().rev()
    }

    /// Unique reduction of `f` against the rows.
    pub fn reduce(&self, f: &Poly) -> Poly {
        let mut out = f.clone();
        for (m, c) in f.terms() {
            if let Some(row) = self.rows.get(m) {
                out -= &row.scale(c);
            }
        }
        out
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.reduce(f).is_zero()
    }

    /// Adds the span of `candidates`. Returns the reduced residues that
    /// enlarged the space; they span a complement of the old space inside
    /// the new one.
    pub fn extend<I: IntoIterator<Item = Poly>>(&mut self, candidates: I) -> Vec<Poly> {
        let mut added = Vec::new();
        let mut chunk = Vec::with_capacity(CHUNK);
        for c in candidates {
            chunk.push(c);
            if chunk.len() == CHUNK {
                added.extend(self.merge_chunk(std::mem::take(&mut chunk)));
            }
        }
        if !chunk.is_empty() {
            added.extend(self.merge_chunk(chunk));
        }
        added
    }

    fn merge_chunk(&mut self, chunk: Vec<Poly>) -> Vec<Poly> {
        let residues: Vec<Poly> = chunk
            .iter()
            .map(|f| self.reduce(f))
            .filter(|r| !r.is_zero())
            .collect();
        if residues.is_empty() {
            return Vec::new();
        }
        let new_rows = rref(&residues);
        // clear the new pivots out of the old rows
        for row in self.rows.values_mut() {
            let mut r = row.clone();
            for (m, c) in row.terms() {
                if let Some(nr) = new_rows
                    .iter()
                    .find(|nr| nr.leading().map(|l| l.0) == Some(m))
                {
                    r -= &nr.scale(c);
                }
            }
            *row = r;
        }
        for nr in &new_rows {
            let lead = nr.leading().expect("rref rows are nonzero").0.clone();
            self.rows.insert(lead, nr.clone());
        }
        new_rows
    }
}

/// Reduced row echelon form of the span of `rows`, leading monomial first.
///
/// Rows are scaled to integers, reduced by fraction-free (Bareiss) forward
/// elimination, then back-substituted over the rationals.
pub fn rref(rows: &[Poly]) -> Vec<Poly> {
    let cols: Vec<Monomial> = rows
        .iter()
        .flat_map(|r| r.monomials().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .rev()
        .collect();
    let index: BTreeMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let lcm = r
                .terms()
                .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
            let mut v = vec![BigInt::zero(); cols.len()];
            for (m, c) in r.terms() {
                v[index[m]] = c.numer() * (&lcm / c.denom());
            }
            v
        })
        .collect();

    let pivots = bareiss(&mut mat);

    // back substitution to reduced form over Q
    let mut out: Vec<Vec<Rational>> = Vec::with_capacity(pivots.len());
    for (r, &pc) in pivots.iter().enumerate() {
        let lead = mat[r][pc].clone();
        out.push(
            mat[r]
                .iter()
                .map(|x| Rational::new(x.clone(), lead.clone()))
                .collect(),
        );
    }
    for i in (0..out.len()).rev() {
        let pc = pivots[i];
        for j in 0..i {
            let factor = out[j][pc].clone();
            if factor.is_zero() {
                continue;
            }
            let pivot_row = out[i].clone();
            for (x, y) in out[j].iter_mut().zip(pivot_row.iter()).skip(pc) {
                *x -= &factor * y;
            }
        }
    }
    out.into_iter()
        .map(|row| Poly::from_terms(cols.iter().cloned().zip(row)))
        .collect()
}

/// In-place fraction-free forward elimination. Returns the pivot column of
/// each nonzero row; rows are reordered so that the first `rank` rows are
/// the echelon rows.
fn bareiss(mat: &mut Vec<Vec<BigInt>>) -> Vec<usize> {
    let nrows = mat.len();
    let ncols = mat.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let pivot = mat[r][c].clone();
        let (top, bottom) = mat.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom {
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(pivot_row).skip(c) {
                *x = (&pivot * &*x - &factor * p) / &prev;
            }
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    mat.truncate(r);
    // keep entries small for the rational back substitution
    for row in mat.iter_mut() {
        let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for x in row.iter_mut() {
                *x = &*x / &g;
            }
        }
        if let Some(first) = row.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
        }
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    #[test]
    fn rref_of_dependent_rows() {
        // q2, q1^2, q2 + 2 q1^2 -> two rows
        let rows = vec![
            Poly::q(2),
            Poly::q(1).pow(2),
            Poly::q(2) + Poly::q(1).pow(2).scale(&int(2)),
        ];
        let r = rref(&rows);
        assert_eq!(r, vec![Poly::q(2), Poly::q(1).pow(2)]);
    }

    #[test]
    fn rref_back_substitutes() {
        let a = Poly::q(2) - Poly::q(1).pow(2).scale(&rat(1, 4));
        let b = Poly::p(2) * Poly::q(1).scale(&int(3)) + Poly::q(2);
        let r = rref(&[a.clone(), b.clone()]);
        assert_eq!(r.len(), 2);
        // leading row q2 - q1^2/4 has no p2*q1 term; p2*q1 row has no q2
        for row in &r {
            assert!(row.leading().unwrap().1.is_one());
        }
        let space = EchelonSpace::from_rref_rows(r).expect("reduced");
        assert!(space.contains(&a));
        assert!(space.contains(&b));
        assert!(!space.contains(&Poly::q(2)));
    }

    #[test]
    fn extend_reports_new_directions() {
        let mut s = EchelonSpace::new();
        let added = s.extend([Poly::q(2), Poly::q(2).scale(&int(5))]);
        assert_eq!(added.len(), 1);
        let added = s.extend([Poly::q(2) + Poly::p(2)]);
        assert_eq!(added, vec![Poly::p(2)]);
        assert_eq!(s.dim(), 2);
        assert!(s.extend([Poly::p(2) - Poly::q(2)]).is_empty());
    }

    #[test]
    fn reduce_is_linear_and_idempotent() {
        let mut s = EchelonSpace::new();
        s.extend([
            Poly::q(2) - Poly::q(1).pow(2).scale(&rat(1, 4)),
            Poly::p(2) - Poly::p(1) * Poly::q(1),
        ]);
        let f = Poly::q(2) + Poly::p(2).scale(&int(3));
        let nf = s.reduce(&f);
        assert_eq!(s.reduce(&nf), nf);
        assert_eq!(
            nf,
            Poly::q(1).pow(2).scale(&rat(1, 4)) + (Poly::p(1) * Poly::q(1)).scale(&int(3))
        );
    }
}
