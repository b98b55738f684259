//! Differential modules over Q(x) given by connection matrices, with
//! `δY = A·Y` as the defining equation.
//!
//! Basis convention: `δ_M(e_i) = -Σ_j a_ji e_j`. [`DiffModule::from_basis_action`]
//! and [`DiffModule::basis_action`] are the only places that convert.
//!
//! Gauge transport: if `a = m⁻¹ b m - m⁻¹ δ(m)` and `K` is a fundamental
//! matrix for `b`, then `m⁻¹ K` is a fundamental matrix for `a`
//! (differentiate `m⁻¹ K` and substitute `δ(m⁻¹) = -m⁻¹ δ(m) m⁻¹`). The
//! product in the other order, `m K`, is in general not a solution.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypersolve::TowerElem;
use crate::matrix::Matrix;
use crate::ratfield::RatFunc;

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct DiffModule {
    conn: Matrix<RatFunc>,
}

impl DiffModule {
    pub fn new(conn: Matrix<RatFunc>) -> Result<Self> {
        if !conn.is_square() || conn.rows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "connection matrix must be square and nonempty, got {}×{}",
                conn.rows(),
                conn.cols()
            )));
        }
        Ok(DiffModule { conn })
    }

    /// Row i of `action` holds the coordinates of `δ_M(e_i)`.
    pub fn from_basis_action(action: &Matrix<RatFunc>) -> Result<Self> {
        Self::new(-&action.transpose())
    }

    pub fn basis_action(&self) -> Matrix<RatFunc> {
        -&self.conn.transpose()
    }

    pub fn dim(&self) -> usize {
        self.conn.rows()
    }

    pub fn conn(&self) -> &Matrix<RatFunc> {
        &self.conn
    }

    /// Connection `-Aᵀ`.
    pub fn dual(&self) -> Self {
        DiffModule { conn: -&self.conn.transpose() }
    }

    /// `A ⊗ I + I ⊗ B` on the basis `e_i ⊗ f_j`, ordered with `j` fastest.
    pub fn tensor(&self, other: &Self) -> Self {
        let i1 = Matrix::identity(self.dim());
        let i2 = Matrix::identity(other.dim());
        DiffModule { conn: &self.conn.kron(&i2) + &i1.kron(&other.conn) }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        DiffModule { conn: self.conn.block_diagonal(&other.conn) }
    }

    pub fn gauge(&self, m: &Matrix<RatFunc>) -> Result<Self> {
        Ok(DiffModule { conn: gauge_transform(&self.conn, m)? })
    }

    /// Checks `δZ = A·Z` entrywise and `det Z ≠ 0`.
    pub fn verify_fundamental(&self, z: &Matrix<TowerElem>) -> FundamentalReport {
        verify_solution(&self.conn, z)
    }
}

/// `m⁻¹ b m - m⁻¹ δ(m)`.
pub fn gauge_transform(b: &Matrix<RatFunc>, m: &Matrix<RatFunc>) -> Result<Matrix<RatFunc>> {
    if m.rows() != b.rows() || !m.is_square() {
        return Err(Error::DimensionMismatch("gauge matrix size differs from the connection".into()));
    }
    let mi = m.inverse().ok_or(Error::SingularGauge)?;
    Ok(&(&(&mi * b) * m) - &(&mi * &m.derive()))
}

/// Carries a fundamental matrix of `b` to one of `gauge_transform(b, m)`.
pub fn transport(k: &Matrix<TowerElem>, m: &Matrix<RatFunc>) -> Result<Matrix<TowerElem>> {
    let mi = m.inverse().ok_or(Error::SingularGauge)?;
    Ok(&lift(&mi) * k)
}

pub fn lift(m: &Matrix<RatFunc>) -> Matrix<TowerElem> {
    m.map(|f| TowerElem::from(f.clone()))
}

/// Inverse through the adjugate; needs a single-term determinant, which
/// holds whenever every column is a rational vector times one monomial.
pub fn tower_inverse(z: &Matrix<TowerElem>) -> Option<Matrix<TowerElem>> {
    let det_inv = z.determinant().inv()?;
    Some(z.adjugate().scale(&det_inv))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryResidual {
    pub row: usize,
    pub col: usize,
    pub residual: TowerElem,
}

/// Outcome of checking a candidate fundamental matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FundamentalReport {
    pub passed: bool,
    pub determinant: TowerElem,
    /// Entries where `δZ - A·Z` is nonzero.
    pub failures: Vec<EntryResidual>,
}

pub(crate) fn verify_solution(a: &Matrix<RatFunc>, z: &Matrix<TowerElem>) -> FundamentalReport {
    if z.rows() != a.rows() || z.cols() != a.rows() {
        return FundamentalReport { passed: false, determinant: TowerElem::zero(), failures: Vec::new() };
    }
    let residual = &z.derive() - &(&lift(a) * z);
    let mut failures = Vec::new();
    for i in 0..z.rows() {
        for j in 0..z.cols() {
            if !residual.get(i, j).is_zero() {
                failures.push(EntryResidual { row: i, col: j, residual: residual.get(i, j).clone() });
            }
        }
    }
    let determinant = z.determinant();
    FundamentalReport { passed: failures.is_empty() && !determinant.is_zero(), determinant, failures }
}

/// A verified fundamental matrix together with the module it solves.
#[derive(Clone, Debug, Serialize)]
pub struct FundamentalMatrix {
    module: DiffModule,
    entries: Matrix<TowerElem>,
}

impl FundamentalMatrix {
    pub fn new(module: DiffModule, entries: Matrix<TowerElem>) -> Result<Self> {
        let report = module.verify_fundamental(&entries);
        if !report.passed {
            return Err(Error::NotInClass("matrix does not satisfy δZ = A·Z with det Z ≠ 0".into()));
        }
        Ok(FundamentalMatrix { module, entries })
    }

    pub fn module(&self) -> &DiffModule {
        &self.module
    }

    pub fn entries(&self) -> &Matrix<TowerElem> {
        &self.entries
    }

    pub fn determinant(&self) -> TowerElem {
        self.entries.determinant()
    }

    /// Fundamental matrix of the gauge-transformed module.
    pub fn transport(&self, m: &Matrix<RatFunc>) -> Result<Self> {
        Self::new(self.module.gauge(m)?, transport(&self.entries, m)?)
    }

    /// `(Zᵀ)⁻¹` for the dual module.
    pub fn dual(&self) -> Option<Self> {
        let inv = tower_inverse(&self.entries.transpose())?;
        Self::new(self.module.dual(), inv).ok()
    }
}
