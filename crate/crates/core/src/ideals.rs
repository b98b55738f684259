//! Right ideals of `M_n(K)` through their column spaces, and δ-right ideals
//! of a differential matrix algebra through δ-stable subspaces of its column
//! module.
//!
//! A right ideal `I` is determined by `Φ(I)`, the span of all columns of all
//! its elements; conversely `Φ⁻¹(W) = {X : every column of X lies in W}`.
//! For `D = δ + inn_P`, `D(w e_jᵀ) = (δw - P w) e_jᵀ + w (e_jᵀ P)`, so `Φ⁻¹(W)`
//! is D-stable exactly when `δw - P w ∈ W` for all `w ∈ W`.

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::algebra::{Differential, Field};
use crate::dcsa::Dcsa;
use crate::error::{Error, Result};
use crate::hypersolve::{rational_solutions_param, solve_rank1, solve_triangular_2x2};
use crate::linalg::Subspace;
use crate::matrix::Matrix;
use crate::ratfield::RatFunc;

/// Largest diagonal size for which the stable-subspace search is offered.
pub const DIAGONAL_SEARCH_BOUND: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct RightIdeal<T> {
    columns: Subspace<T>,
}

impl<T: Field> RightIdeal<T> {
    /// `Φ⁻¹(W)`.
    pub fn phi_inverse(w: Subspace<T>) -> Self {
        RightIdeal { columns: w }
    }

    /// Right ideal generated by the given matrices.
    pub fn generated_by(n: usize, gens: &[Matrix<T>]) -> Self {
        let cols = gens.iter().flat_map(|g| (0..g.cols()).map(|j| g.column(j)).collect::<Vec<_>>()).collect();
        RightIdeal { columns: Subspace::span(n, cols) }
    }

    /// `Φ(I)`.
    pub fn phi(&self) -> &Subspace<T> {
        &self.columns
    }

    pub fn n(&self) -> usize {
        self.columns.ambient()
    }

    /// Dimension as a vector space over the coefficient field.
    pub fn linear_dim(&self) -> usize {
        self.n() * self.columns.dim()
    }

    /// `w e_jᵀ` for basis vectors w of `Φ(I)` and all j.
    pub fn matrix_basis(&self) -> Vec<Matrix<T>> {
        let n = self.n();
        self.columns
            .basis()
            .iter()
            .flat_map(|w| (0..n).map(move |j| Matrix::from_fn(n, n, |r, c| if c == j { w[r].clone() } else { T::zero() })))
            .collect()
    }

    pub fn contains(&self, x: &Matrix<T>) -> bool {
        (0..x.cols()).all(|j| self.columns.contains(&x.column(j)))
    }

    pub fn is_subideal_of(&self, other: &Self) -> bool {
        self.columns.is_subspace_of(&other.columns)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        RightIdeal { columns: self.columns.intersect(&other.columns) }
    }

    pub fn sum(&self, other: &Self) -> Self {
        RightIdeal { columns: self.columns.sum(&other.columns) }
    }

    /// `C·I·C⁻¹`, computed on a matrix basis.
    pub fn conjugate(&self, c: &Matrix<T>) -> Result<Self> {
        let ci = c.inverse().ok_or(Error::SingularMatrix)?;
        let conj: Vec<Matrix<T>> = self.matrix_basis().iter().map(|x| &(c * x) * &ci).collect();
        Ok(Self::generated_by(self.n(), &conj))
    }
}

impl<T: Field + Serialize> Serialize for RightIdeal<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix_basis().serialize(s)
    }
}

/// Flattens matrices row-major so subspaces of `M_n` can be compared directly.
pub fn flatten<T: Field>(m: &Matrix<T>) -> Vec<T> {
    m.entries().to_vec()
}

/// Is `δw - P w ∈ W` for every basis vector w?
pub fn is_delta_stable(p: &Matrix<RatFunc>, w: &Subspace<RatFunc>) -> bool {
    w.basis().iter().all(|v| {
        let pv = p.mul_vec(v);
        let r: Vec<RatFunc> = v.iter().zip(&pv).map(|(a, b)| a.derive() - b.clone()).collect();
        w.contains(&r)
    })
}

/// Does D map the ideal into itself? Decided in `M_n(F)` as a vector space:
/// every `D(X)` for X in a matrix basis must lie in the span of that basis.
pub fn ideal_is_d_stable(alg: &Dcsa, ideal: &RightIdeal<RatFunc>) -> bool {
    let basis = ideal.matrix_basis();
    let n = alg.n();
    let span = Subspace::span(n * n, basis.iter().map(flatten).collect());
    basis.iter().all(|x| span.contains(&flatten(&alg.apply_derivation(x))))
}

/// δ-stable subspaces of the column module, sorted by dimension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StableLattice {
    pub subspaces: Vec<Subspace<RatFunc>>,
    /// False when the module has infinitely many submodules; `subspaces`
    /// then lists a finite family that generates them.
    pub exhaustive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
}

fn sorted(mut v: Vec<Subspace<RatFunc>>) -> Vec<Subspace<RatFunc>> {
    v.sort_by_key(Subspace::dim);
    v
}

pub fn delta_stable_subspaces(p: &Matrix<RatFunc>) -> Result<StableLattice> {
    let n = p.rows();
    if p.is_diagonal() && n <= DIAGONAL_SEARCH_BOUND {
        let d = p.diagonal_entries();
        // Isomorphic rank-one summands make the lattice infinite.
        let mut repeated = false;
        for i in 0..n {
            for j in i + 1..n {
                if solve_rank1(&(d[i].clone() - d[j].clone()))?.is_rational() {
                    repeated = true;
                }
            }
        }
        let subspaces = sorted(subsets(n).map(|s| Subspace::coordinate(n, &s)).collect());
        return Ok(StableLattice {
            subspaces,
            exhaustive: !repeated,
            note: repeated.then(|| {
                "isomorphic rank-one summands: every subspace of each isotypic block is stable; \
                 only coordinate subspaces are listed"
                    .into()
            }),
        });
    }
    if n == 2 && p.is_upper_triangular() {
        let (p11, p12, p22) = (p.get(0, 0), p.get(0, 1), p.get(1, 1));
        let e1 = Subspace::coordinate(2, &[0]);
        let full = Subspace::full(2);
        // Lines span{(z, 1)} with z' = (p11 - p22) z + p12.
        let sols = rational_solutions_param(&(p11 - p22), std::slice::from_ref(p12))?;
        let particular = sols.iter().find(|s| !s.t[0].is_zero()).map(|s| s.y.scale(&s.t[0].recip()));
        let homogeneous = sols.iter().any(|s| s.t[0].is_zero() && !s.y.is_zero());
        let mut subspaces = vec![Subspace::zero(2), e1];
        if let Some(z) = &particular {
            subspaces.push(Subspace::span(2, vec![vec![z.clone(), RatFunc::one()]]));
        }
        subspaces.push(full);
        let exhaustive = !(particular.is_some() && homogeneous);
        return Ok(StableLattice {
            subspaces: sorted(subspaces),
            exhaustive,
            note: (!exhaustive).then(|| "a one-parameter family of stable lines through (z + c·u, 1); one member listed".into()),
        });
    }
    Err(Error::UnsupportedClass(format!(
        "stable-subspace search needs diagonal P with n <= {DIAGONAL_SEARCH_BOUND} or 2×2 upper-triangular P"
    )))
}

/// Verdict of the complete-reducibility test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductiveVerdict {
    pub reductive: bool,
    /// Minimal δ-right ideals whose direct sum is the whole algebra.
    pub decomposition: Vec<RightIdeal<RatFunc>>,
    /// A stable subspace with no stable complement.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Subspace<RatFunc>>,
}

pub fn reductive_criterion(alg: &Dcsa) -> Result<ReductiveVerdict> {
    let p = alg.p();
    let n = alg.n();
    if p.is_diagonal() {
        if n > DIAGONAL_SEARCH_BOUND {
            return Err(Error::UnsupportedClass(format!("diagonal P larger than {DIAGONAL_SEARCH_BOUND}")));
        }
        let decomposition = (0..n).map(|i| RightIdeal::phi_inverse(Subspace::coordinate(n, &[i]))).collect();
        return Ok(ReductiveVerdict { reductive: true, decomposition, witness: None });
    }
    if n == 2 && p.is_upper_triangular() {
        let sol = solve_triangular_2x2(p)?;
        let e1 = Subspace::coordinate(2, &[0]);
        return Ok(match sol.z {
            Some(z) => ReductiveVerdict {
                reductive: true,
                decomposition: vec![
                    RightIdeal::phi_inverse(e1),
                    RightIdeal::phi_inverse(Subspace::span(2, vec![vec![z, RatFunc::one()]])),
                ],
                witness: None,
            },
            None => ReductiveVerdict { reductive: false, decomposition: Vec::new(), witness: Some(e1) },
        });
    }
    Err(Error::UnsupportedClass("P must be diagonal or 2×2 upper triangular".into()))
}

/// Strictly increasing chain of right ideals.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct IdealChain {
    pub ideals: Vec<RightIdeal<RatFunc>>,
}

impl IdealChain {
    pub fn dims(&self) -> Vec<usize> {
        self.ideals.iter().map(RightIdeal::linear_dim).collect()
    }
}

/// A full flag `W₁ ⊂ … ⊂ Wₙ` (dim Wⱼ = j) drawn from `lattice`, if any.
pub fn flag_in_lattice(n: usize, lattice: &[Subspace<RatFunc>]) -> Option<Vec<Subspace<RatFunc>>> {
    fn extend(
        n: usize,
        lattice: &[Subspace<RatFunc>],
        chain: &mut Vec<Subspace<RatFunc>>,
    ) -> bool {
        let j = chain.len() + 1;
        if j > n {
            return true;
        }
        for w in lattice.iter().filter(|w| w.dim() == j) {
            if chain.last().is_none_or(|prev| prev.is_subspace_of(w)) {
                chain.push(w.clone());
                if extend(n, lattice, chain) {
                    return true;
                }
                chain.pop();
            }
        }
        false
    }
    let mut chain = Vec::new();
    extend(n, lattice, &mut chain).then_some(chain)
}

pub fn flag_criterion(alg: &Dcsa) -> Result<Option<IdealChain>> {
    let lattice = delta_stable_subspaces(alg.p())?;
    Ok(flag_in_lattice(alg.n(), &lattice.subspaces)
        .map(|ws| IdealChain { ideals: ws.into_iter().map(RightIdeal::phi_inverse).collect() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, Q};

    fn rf(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    fn alg(rows: &[&[&str]]) -> Dcsa {
        Dcsa::new(Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| rf(s)).collect()).collect()).unwrap())
            .unwrap()
    }

    fn qv(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&v| q(v)).collect()
    }

    #[test]
    fn phi_of_row_ideal() {
        let gens = [Matrix::<Q>::unit(2, 0, 0), Matrix::unit(2, 0, 1)];
        let i = RightIdeal::generated_by(2, &gens);
        assert_eq!(i.phi(), &Subspace::coordinate(2, &[0]));
        assert_eq!(RightIdeal::<Q>::phi_inverse(Subspace::full(3)).linear_dim(), 9);
    }

    #[test]
    fn conjugation_swaps_lines() {
        let i = RightIdeal::<Q>::phi_inverse(Subspace::coordinate(2, &[0]));
        let c = Matrix::from_rows(vec![qv(&[0, 1]), qv(&[1, 0])]).unwrap();
        assert_eq!(i.conjugate(&c).unwrap().phi(), &Subspace::coordinate(2, &[1]));
        assert_eq!(i.conjugate(&Matrix::identity(2)).unwrap(), i);
        let singular = Matrix::from_rows(vec![qv(&[1, 1]), qv(&[1, 1])]).unwrap();
        assert_eq!(i.conjugate(&singular), Err(Error::SingularMatrix));
    }

    #[test]
    fn diagonal_example_lattice() {
        let a = alg(&[&["1/(4*x)", "0"], &["0", "-1/(4*x)"]]);
        let l = delta_stable_subspaces(a.p()).unwrap();
        assert!(l.exhaustive);
        assert_eq!(l.subspaces.len(), 4);
        assert!(l.subspaces.iter().all(|w| is_delta_stable(a.p(), w)));
        let v = reductive_criterion(&a).unwrap();
        assert!(v.reductive);
        assert_eq!(v.decomposition.iter().map(RightIdeal::linear_dim).collect::<Vec<_>>(), vec![2, 2]);
        assert!(v.decomposition.iter().all(|i| ideal_is_d_stable(&a, i)));
    }

    #[test]
    fn nonsplit_triangular() {
        let a = alg(&[&["0", "1/x"], &["0", "0"]]);
        let l = delta_stable_subspaces(a.p()).unwrap();
        assert_eq!(l.subspaces.len(), 3);
        assert!(l.exhaustive);
        let v = reductive_criterion(&a).unwrap();
        assert!(!v.reductive);
        assert_eq!(v.witness, Some(Subspace::coordinate(2, &[0])));
        assert_eq!(flag_criterion(&a).unwrap().unwrap().dims(), vec![2, 4]);
        // A line that is not stable.
        assert!(!is_delta_stable(a.p(), &Subspace::coordinate(2, &[1])));
    }

    #[test]
    fn zero_connection_is_not_exhaustive() {
        let a = alg(&[&["0", "0"], &["0", "0"]]);
        let l = delta_stable_subspaces(a.p()).unwrap();
        assert!(!l.exhaustive && l.note.is_some());
        assert!(reductive_criterion(&a).unwrap().reductive);
    }

    #[test]
    fn irreducible_lattice_has_no_flag() {
        assert!(flag_in_lattice(2, &[Subspace::zero(2), Subspace::full(2)]).is_none());
    }

    #[test]
    fn outside_class_is_refused() {
        let a = alg(&[&["0", "1"], &["1", "0"]]);
        assert!(matches!(delta_stable_subspaces(a.p()), Err(Error::UnsupportedClass(_))));
        assert!(matches!(flag_criterion(&a), Err(Error::UnsupportedClass(_))));
    }
}
