//! Echelon forms, kernels and subspaces over an exact field (Q or Q(x)).

use std::collections::BTreeMap;

use crate::algebra::{Field, Q};
use crate::matrix::Matrix;
use crate::ratfield::{Poly, RatFunc};

/// Reduced row echelon form of `rows` (each of length `width`).
/// Returns the nonzero rows and their pivot columns.
pub fn rref<T: Field>(mut rows: Vec<Vec<T>>, width: usize) -> (Vec<Vec<T>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = T::one() / rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for j in col..width {
                let sub = f.clone() * rows[r][j].clone();
                rows[i][j] = rows[i][j].clone() - sub;
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank<T: Field>(rows: Vec<Vec<T>>, width: usize) -> usize {
    rref(rows, width).1.len()
}

/// Basis of `{v : A v = 0}` where `A` is given by rows of length `width`.
pub fn nullspace<T: Field>(rows: Vec<Vec<T>>, width: usize) -> Vec<Vec<T>> {
    let (red, pivots) = rref(rows, width);
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); width];
            v[f] = T::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// A subspace of `T^n` held as its reduced echelon basis, so equality of
/// subspaces is equality of representations.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T> {
    n: usize,
    basis: Vec<Vec<T>>,
}

impl<T: Field> Subspace<T> {
    pub fn span(n: usize, vectors: Vec<Vec<T>>) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == n));
        Subspace { n, basis: rref(vectors, n).0 }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self::span(n, Matrix::<T>::identity(n).to_rows())
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        Self::span(
            n,
            indices
                .iter()
                .map(|&i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
                .collect(),
        )
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn contains(&self, v: &[T]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rank(rows, self.n) == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Self::span(self.n, rows)
    }

    /// Intersection via the kernel of `[B1; -B2]^T`.
    pub fn intersect(&self, other: &Self) -> Self {
        let (k1, k2) = (self.dim(), other.dim());
        if k1 == 0 || k2 == 0 {
            return Self::zero(self.n);
        }
        // Unknowns (a, b); equations: sum a_i B1_i - sum b_j B2_j = 0.
        let eqs: Vec<Vec<T>> = (0..self.n)
            .map(|c| {
                self.basis
                    .iter()
                    .map(|v| v[c].clone())
                    .chain(other.basis.iter().map(|v| -v[c].clone()))
                    .collect()
            })
            .collect();
        let vectors = nullspace(eqs, k1 + k2)
            .into_iter()
            .map(|coef| {
                (0..self.n)
                    .map(|c| {
                        (0..k1).fold(T::zero(), |acc, i| acc + coef[i].clone() * self.basis[i][c].clone())
                    })
                    .collect()
            })
            .collect();
        Self::span(self.n, vectors)
    }

    /// Image under a square matrix.
    pub fn image(&self, m: &Matrix<T>) -> Self {
        Self::span(self.n, self.basis.iter().map(|v| m.mul_vec(v)).collect())
    }
}

/// Serialized as the list of basis vectors.
impl<T: serde::Serialize> serde::Serialize for Subspace<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

/// ℚ-linear relations among vectors of rational functions.
///
/// `columns[j]` is the j-th unknown's vector (all of equal length). Returns a
/// basis of `{c in Q^k : sum_j c_j columns[j] = 0}`.
pub fn rational_relations(columns: &[Vec<RatFunc>]) -> Vec<Vec<Q>> {
    let k = columns.len();
    let len = columns.first().map_or(0, Vec::len);
    let mut eqs: Vec<Vec<Q>> = Vec::new();
    for pos in 0..len {
        let fs: Vec<&RatFunc> = columns.iter().map(|c| &c[pos]).collect();
        if fs.iter().all(|f| num_traits::Zero::is_zero(*f)) {
            continue;
        }
        let common = RatFunc::lcm_den(&fs);
        let nums: Vec<Poly> = fs.iter().map(|f| f.numerator_over(&common)).collect();
        let deg = nums.iter().filter_map(Poly::degree).max().unwrap_or(0);
        for d in 0..=deg {
            eqs.push(nums.iter().map(|p| p.coeff(d)).collect());
        }
    }
    nullspace(eqs, k)
}

/// Solves `sum_j c_j columns[j] = target` over ℚ, if possible.
pub fn rational_coordinates(columns: &[Vec<RatFunc>], target: &[RatFunc]) -> Option<Vec<Q>> {
    let mut all = columns.to_vec();
    all.push(target.iter().map(|t| -t.clone()).collect());
    let k = columns.len();
    let rel = rational_relations(&all);
    // Reduced kernel basis: at most one vector has a nonzero last entry after
    // elimination, but scan them all to be safe.
    let (red, pivots) = rref(
        rel.iter()
            .map(|v| {
                let mut w = vec![v[k].clone()];
                w.extend(v[..k].iter().cloned());
                w
            })
            .collect(),
        k + 1,
    );
    let first = pivots.iter().position(|&p| p == 0)?;
    Some(red[first][1..].to_vec())
}

/// Groups identical keys of sparse coordinate maps into aligned columns.
pub(crate) fn align_columns<K: Ord + Clone>(maps: &[BTreeMap<K, RatFunc>]) -> Vec<Vec<RatFunc>> {
    let keys: std::collections::BTreeSet<K> = maps.iter().flat_map(|m| m.keys().cloned()).collect();
    maps.iter()
        .map(|m| keys.iter().map(|k| m.get(k).cloned().unwrap_or_else(num_traits::Zero::zero)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use num_traits::Zero;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&a| q(a)).collect()
    }

    #[test]
    fn nullspace_annihilates() {
        let rows = vec![v(&[1, 2, 3, 4]), v(&[2, 4, 6, 8]), v(&[0, 1, 1, 0])];
        let ns = nullspace(rows.clone(), 4);
        assert_eq!(ns.len(), 2);
        for n in &ns {
            for r in &rows {
                let dot = r.iter().zip(n).fold(Q::zero(), |a, (x, y)| a + x * y);
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::span(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, vec![v(&[0, 1, 1]), v(&[1, 0, 0])]);
        assert_eq!(a.intersect(&b), Subspace::coordinate(3, &[0]));
        assert_eq!(a.sum(&b), Subspace::full(3));
    }

    #[test]
    fn rational_coordinates_finds_combination() {
        let f: RatFunc = "1/x".parse().unwrap();
        let g: RatFunc = "x".parse().unwrap();
        let t: RatFunc = "(3*x^2-2)/(2*x)".parse().unwrap();
        let c = rational_coordinates(&[vec![f.clone()], vec![g.clone()]], &[t]).unwrap();
        assert_eq!(c, vec![Q::new((-1).into(), 1.into()), Q::new(3.into(), 2.into())]);
        assert!(rational_coordinates(&[vec![f]], &[g]).is_none());
    }
}
