//! Differential matrix algebras `(M_n(F), δ^c + inn_P)` with
//! `D(X) = δ(X) + X·P - P·X`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Differential, Q};
use crate::diffmod::{lift, tower_inverse, verify_solution, DiffModule, FundamentalReport};
use crate::error::{Error, Result};
use crate::hypersolve::{
    fundamental_over_tower, horizontal_over_tower, rational_part, solve_rank1, HyperClass, SplittingTower, TowerElem,
};
use crate::linalg::{align_columns, rank, rational_coordinates};
use crate::matrix::Matrix;
use crate::ratfield::RatFunc;

/// Largest matrix size `tensor_power` will build.
pub const TENSOR_POWER_BOUND: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DcsaRepr", into = "DcsaRepr")]
pub struct Dcsa {
    p: Matrix<RatFunc>,
}

#[derive(Serialize, Deserialize)]
struct DcsaRepr {
    n: usize,
    #[serde(rename = "P")]
    p: Matrix<RatFunc>,
}

impl TryFrom<DcsaRepr> for Dcsa {
    type Error = Error;
    fn try_from(r: DcsaRepr) -> Result<Self> {
        if r.p.rows() != r.n {
            return Err(Error::DimensionMismatch(format!("n = {} but P has {} rows", r.n, r.p.rows())));
        }
        Dcsa::new(r.p)
    }
}

impl From<Dcsa> for DcsaRepr {
    fn from(a: Dcsa) -> Self {
        DcsaRepr { n: a.n(), p: a.p }
    }
}

/// Outcome of `triviality_check`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrivialityReport {
    pub trivial: bool,
    /// Q-dimension of the horizontal matrices found over the tower.
    pub dimension: usize,
    pub expected: usize,
}

impl Dcsa {
    pub fn new(p: Matrix<RatFunc>) -> Result<Self> {
        if !p.is_square() || p.rows() == 0 {
            return Err(Error::DimensionMismatch("P must be a nonempty square matrix".into()));
        }
        Ok(Dcsa { p })
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }

    pub fn p(&self) -> &Matrix<RatFunc> {
        &self.p
    }

    /// `δ(X) + X·P - P·X`.
    pub fn apply_derivation<T: Differential + From<RatFunc>>(&self, x: &Matrix<T>) -> Matrix<T> {
        let p = self.p.map(|f| T::from(f.clone()));
        &(&x.derive() + &(x * &p)) - &(&p * x)
    }

    /// The `n²`-dimensional module on `E_11, E_12, …, E_nn` (row-major).
    pub fn associated_module(&self) -> DiffModule {
        let n = self.n();
        let action = Matrix::from_fn(n * n, n * n, |r, s| {
            let d = self.apply_derivation(&Matrix::<RatFunc>::unit(n, r / n, r % n));
            d.get(s / n, s % n).clone()
        });
        DiffModule::from_basis_action(&action).expect("square by construction")
    }

    /// The module of `δY = P·Y`.
    pub fn column_module(&self) -> DiffModule {
        DiffModule::new(self.p.clone()).expect("square by construction")
    }

    /// Diagonal P, or upper-triangular 2×2 P.
    pub fn check_restricted(&self) -> Result<()> {
        if self.p.is_diagonal() || (self.n() == 2 && self.p.is_upper_triangular()) {
            Ok(())
        } else {
            Err(Error::UnsupportedClass("P must be diagonal or 2×2 upper triangular".into()))
        }
    }

    /// Tower generated by solutions of the diagonal of the associated
    /// connection, i.e. by `h_k / h_l` for `h_k' = p_kk h_k`.
    pub fn splitting_tower(&self) -> Result<SplittingTower> {
        self.check_restricted()?;
        SplittingTower::generated_by(&self.associated_module().conn().diagonal_entries())
    }

    /// Q-basis of `{X : D(X) = 0}` with entries in the tower.
    pub fn horizontal(&self, tower: &SplittingTower) -> Result<Vec<Matrix<TowerElem>>> {
        self.check_restricted()?;
        let n = self.n();
        let sols = horizontal_over_tower(self.associated_module().conn(), tower)?;
        Ok(sols.into_iter().map(|v| Matrix::from_fn(n, n, |i, j| v[i * n + j].clone())).collect())
    }

    pub fn triviality_check(&self, tower: &SplittingTower) -> Result<TrivialityReport> {
        let dimension = self.horizontal(tower)?.len();
        let expected = self.n() * self.n();
        Ok(TrivialityReport { trivial: dimension == expected, dimension, expected })
    }

    pub fn constants_algebra(&self, tower: &SplittingTower) -> Result<ConstantsAlgebra> {
        Ok(ConstantsAlgebra { n: self.n(), tower: tower.clone(), basis: self.horizontal(tower)? })
    }

    /// `δZ = P·Z` and `det Z ≠ 0`; a pass means conjugation by Z carries
    /// `δ^c` to `δ^c + inn_P`.
    pub fn split_check(&self, z: &Matrix<TowerElem>) -> FundamentalReport {
        verify_solution(&self.p, z)
    }

    /// Searches for `Z = ξ_σ·W` with `δZ = P·Z`, W over the tower and `ξ_σ`
    /// a solution of some `y' = p_kk y`. Conjugation by such Z only sees
    /// ratios of entries, which lie in the tower.
    pub fn find_split_certificate(&self, tower: &SplittingTower) -> Result<Option<Matrix<TowerElem>>> {
        self.check_restricted()?;
        let mut classes = Vec::new();
        for f in self.p.diagonal_entries() {
            let c = solve_rank1(&f)?.class().clone();
            if !classes.contains(&c) {
                classes.push(c);
            }
        }
        for sigma in classes {
            let shift = Matrix::identity(self.n()).scale(&sigma.log_derivative());
            if let Some(w) = fundamental_over_tower(&(&self.p - &shift), tower)? {
                let xi = TowerElem::class_monomial(&sigma);
                return Ok(Some(w.map(|e| e.clone() * xi.clone())));
            }
        }
        Ok(None)
    }

    /// Searches for Z with `δZ = P·Z` and every entry in the tower itself,
    /// which exists iff P is gauge equivalent to 0 over the tower.
    pub fn gauge_to_zero_certificate(&self, tower: &SplittingTower) -> Result<Option<Matrix<TowerElem>>> {
        self.check_restricted()?;
        fundamental_over_tower(&self.p, tower)
    }

    /// `P_m = Σ I ⊗ … ⊗ P ⊗ … ⊗ I`.
    pub fn tensor_power(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::DimensionMismatch("tensor power must be at least 1".into()));
        }
        let n = self.n();
        let size = (0..m).try_fold(1usize, |acc, _| acc.checked_mul(n).filter(|&s| s <= TENSOR_POWER_BOUND));
        let Some(size) = size else {
            return Err(Error::SizeLimit {
                size: n.checked_pow(m as u32).unwrap_or(usize::MAX),
                bound: TENSOR_POWER_BOUND,
            });
        };
        let mut total = Matrix::zeros(size, size);
        for slot in 0..m {
            let mut term = Matrix::identity(1);
            for k in 0..m {
                term = term.kron(&if k == slot { self.p.clone() } else { Matrix::identity(n) });
            }
            total = &total + &term;
        }
        Dcsa::new(total)
    }
}

/// The constants `{X : D(X) = 0}` over a tower, as a Q-basis.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantsAlgebra {
    n: usize,
    tower: SplittingTower,
    basis: Vec<Matrix<TowerElem>>,
}

type Coordinates = BTreeMap<(usize, HyperClass), RatFunc>;

fn coordinates_of(x: &Matrix<TowerElem>) -> Coordinates {
    let mut out = BTreeMap::new();
    for (idx, e) in x.entries().iter().enumerate() {
        for (k, c) in e.terms() {
            out.insert((idx, k.clone()), c.clone());
        }
    }
    out
}

impl ConstantsAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix<TowerElem>] {
        &self.basis
    }

    pub fn tower(&self) -> &SplittingTower {
        &self.tower
    }

    /// Q-coordinates of X in the basis, if X is in the span.
    pub fn coordinates(&self, x: &Matrix<TowerElem>) -> Option<Vec<Q>> {
        let mut maps: Vec<Coordinates> = self.basis.iter().map(coordinates_of).collect();
        maps.push(coordinates_of(x));
        let mut cols = align_columns(&maps);
        let target = cols.pop().unwrap();
        rational_coordinates(&cols, &target)
    }

    /// `c[i][j]` with `B_i B_j = Σ_k c[i][j][k] B_k`; None if some product
    /// leaves the span.
    pub fn structure_constants(&self) -> Option<Vec<Vec<Vec<Q>>>> {
        self.basis
            .iter()
            .map(|a| self.basis.iter().map(|b| self.coordinates(&(a * b))).collect())
            .collect()
    }

    /// Rank over Q(x) of the basis (each element is a rational matrix times
    /// one class monomial). Equal to `dim` iff the constants stay linearly
    /// independent after extending scalars.
    pub fn rank_over_base(&self) -> usize {
        let rows: Vec<Vec<RatFunc>> = self.basis.iter().map(|m| rational_part(m.entries())).collect();
        rank(rows, self.n * self.n)
    }

    /// `Z·E_ij·Z⁻¹` for all i, j (row-major); each lies in the constants when
    /// Z passes `split_check`.
    pub fn matrix_units(&self, z: &Matrix<TowerElem>) -> Option<Vec<Matrix<TowerElem>>> {
        let zi = tower_inverse(z)?;
        let n = self.n;
        Some(
            (0..n * n)
                .map(|r| &(z * &lift(&Matrix::unit(n, r / n, r % n))) * &zi)
                .collect(),
        )
    }

    /// Do the units `Z·E_ij·Z⁻¹` lie in the span and multiply like `E_ij`?
    pub fn has_full_matrix_units(&self, z: &Matrix<TowerElem>) -> bool {
        let Some(units) = self.matrix_units(z) else { return false };
        let n = self.n;
        if units.iter().any(|u| self.coordinates(u).is_none()) {
            return false;
        }
        (0..n * n).all(|a| {
            (0..n * n).all(|b| {
                let prod = &units[a] * &units[b];
                let expected = if a % n == b / n { units[(a / n) * n + b % n].clone() } else { Matrix::zeros(n, n) };
                prod == expected
            })
        })
    }
}

/// Is `X` annihilated by D? Convenience for tests and reports.
pub fn is_horizontal(alg: &Dcsa, x: &Matrix<TowerElem>) -> bool {
    alg.apply_derivation(x).is_zero()
}

impl std::fmt::Display for Dcsa {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.p)
    }
}
