//! Integer lattices: Hermite and Smith normal forms and integer kernels,
//! all with exact big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntVec = Vec<BigInt>;

/// Row-echelonizes `rows` in place over ℤ using only unimodular row
/// operations on the first `width` columns; the operations are applied to the
/// whole row, so trailing columns carry the transformation along.
/// Returns the number of nonzero (pivot) rows; those come first.
fn echelon_in_place(rows: &mut [IntVec], width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == rows.len() {
            break;
        }
        loop {
            // Smallest nonzero magnitude at or below r becomes the pivot.
            let Some(p) = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()))
            else {
                break;
            };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let f = rows[i][col].div_floor(&rows[r][col]);
                let pivot_row = rows[r].clone();
                for (a, b) in rows[i].iter_mut().zip(&pivot_row) {
                    *a -= &f * b;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (r..rows.len()).any(|i| !rows[i][col].is_zero()) {
            if rows[r][col].is_negative() {
                for a in rows[r].iter_mut() {
                    *a = -a.clone();
                }
            }
            pivots.push(col);
            r += 1;
        }
    }
    pivots
}

/// Canonical row-style Hermite normal form of the lattice spanned by `rows`:
/// positive pivots, entries above each pivot reduced into `[0, pivot)`,
/// zero rows dropped.
pub fn hermite_normal_form(rows: &[IntVec], width: usize) -> Vec<IntVec> {
    let mut m: Vec<IntVec> = rows.to_vec();
    let pivots = echelon_in_place(&mut m, width);
    m.truncate(pivots.len());
    for (r, &c) in pivots.iter().enumerate() {
        for i in 0..r {
            let f = m[i][c].div_floor(&m[r][c]);
            if !f.is_zero() {
                let pr = m[r].clone();
                for (a, b) in m[i].iter_mut().zip(&pr) {
                    *a -= &f * b;
                }
            }
        }
    }
    m
}

/// Basis of `{z in ℤ^cols : A z = 0}` for `A` given by `rows`.
pub fn integer_kernel(rows: &[IntVec], cols: usize) -> Vec<IntVec> {
    let height = rows.len();
    // Row i of the augmented system is (column i of A | e_i).
    let mut aug: Vec<IntVec> = (0..cols)
        .map(|i| {
            let mut v: IntVec = rows.iter().map(|r| r[i].clone()).collect();
            v.extend((0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let pivots = echelon_in_place(&mut aug, height);
    let basis: Vec<IntVec> = aug[pivots.len()..].iter().map(|v| v[height..].to_vec()).collect();
    hermite_normal_form(&basis, cols)
}

/// Nonzero diagonal entries of the Smith normal form of the matrix with the
/// given rows, each dividing the next.
pub fn smith_invariants(rows: &[IntVec], width: usize) -> Vec<BigInt> {
    let mut m: Vec<IntVec> = rows.to_vec();
    let h = m.len();
    let mut out = Vec::new();
    let mut t = 0;
    while t < h.min(width) {
        // Move the smallest nonzero entry of the trailing block to (t, t).
        let Some((pi, pj)) = (t..h)
            .flat_map(|i| (t..width).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by(|&(a, b), &(c, d)| m[a][b].abs().cmp(&m[c][d].abs()))
        else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let p = m[t][t].clone();
        let mut clean = true;
        for i in t + 1..h {
            let f = m[i][t].div_floor(&p);
            if !f.is_zero() {
                let pr = m[t].clone();
                for (a, b) in m[i].iter_mut().zip(&pr) {
                    *a -= &f * b;
                }
            }
            clean &= m[i][t].is_zero();
        }
        for j in t + 1..width {
            let f = m[t][j].div_floor(&p);
            if !f.is_zero() {
                for row in m.iter_mut() {
                    let v = row[t].clone();
                    row[j] -= &f * v;
                }
            }
            clean &= m[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // Divisibility: fold an offending row into the pivot row and retry.
        if let Some(i) = (t + 1..h).find(|&i| (t + 1..width).any(|j| !(&m[i][j] % &p).is_zero())) {
            let ri = m[i].clone();
            for (a, b) in m[t].iter_mut().zip(&ri) {
                *a += b;
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

/// Does the lattice spanned by the HNF `basis` contain `v`?
pub fn lattice_contains(basis: &[IntVec], v: &[BigInt]) -> bool {
    let mut rest: IntVec = v.to_vec();
    for row in basis {
        let Some(c) = row.iter().position(|a| !a.is_zero()) else { continue };
        let (f, r) = rest[c].div_rem(&row[c]);
        if !r.is_zero() {
            return false;
        }
        for (a, b) in rest.iter_mut().zip(row) {
            *a -= &f * b;
        }
    }
    rest.iter().all(Zero::is_zero)
}
