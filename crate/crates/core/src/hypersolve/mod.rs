//! Closed-form solutions in the hyperexponential class: rank-one equations,
//! diagonal systems and 2×2 upper-triangular systems, plus rational solutions
//! of inhomogeneous first-order equations.

mod hyperexp;
mod rational;
mod tower;

pub use hyperexp::{HyperClass, Hyperexp, TowerElem};
pub use rational::{
    fundamental_matrix, fundamental_over_tower, horizontal_over_tower, rational_horizontal, rational_part,
    rational_solution, rational_solutions_param, ParamSolution,
};
pub use tower::SplittingTower;

use num_traits::{One, Zero};

use crate::algebra::Q;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ratfield::{partial_fractions, Poly, RatFunc};

/// Antiderivative of a polynomial with zero constant term.
fn integrate_poly(p: &Poly) -> Poly {
    let mut coeffs = vec![Q::zero()];
    coeffs.extend(p.coeffs().iter().enumerate().map(|(k, c)| c / Q::from_integer((k as i64 + 1).into())));
    Poly::new(coeffs)
}

/// `h` with `δh/h = a`: `∏ (x - c)^{res_c(a)} * exp(R)` where `R` collects
/// the antiderivative of the non-logarithmic part of `a`.
pub fn solve_rank1(a: &RatFunc) -> Result<Hyperexp> {
    let pf = partial_fractions(a)?;
    let mut exp_part = RatFunc::from_poly(integrate_poly(&pf.polynomial));
    let mut exponents = Vec::new();
    for t in &pf.poles {
        if t.order == 1 {
            exponents.push((t.at.clone(), t.coeff.clone()));
        } else {
            let k = t.order as i64;
            let c = &t.coeff / Q::from_integer((1 - k).into());
            exp_part = exp_part + RatFunc::linear_power(&t.at, 1 - k).scale(&c);
        }
    }
    let (class, carry) = HyperClass::normalize(exponents, &exp_part);
    Hyperexp::new(carry, class)
}

/// Diagonal fundamental matrix and the tower its entries generate.
#[derive(Clone, Debug)]
pub struct DiagonalSolution {
    pub fundamental: Matrix<TowerElem>,
    pub tower: SplittingTower,
}

pub fn solve_diagonal(p: &Matrix<RatFunc>) -> Result<DiagonalSolution> {
    if !p.is_square() || !p.is_diagonal() {
        return Err(Error::UnsupportedClass("solve_diagonal needs a square diagonal matrix".into()));
    }
    let hs: Vec<Hyperexp> = p.diagonal_entries().iter().map(solve_rank1).collect::<Result<_>>()?;
    let entries: Vec<TowerElem> = hs.iter().cloned().map(TowerElem::from).collect();
    Ok(DiagonalSolution { fundamental: Matrix::diagonal(&entries), tower: SplittingTower::new(hs) })
}

/// Outcome of the 2×2 upper-triangular solver.
#[derive(Clone, Debug)]
pub struct TriangularSolution {
    /// Rational `z` with `z' = (p11 - p22) z + p12`, when one exists.
    pub z: Option<RatFunc>,
    pub h1: Hyperexp,
    pub h2: Hyperexp,
}

impl TriangularSolution {
    pub fn completely_reducible(&self) -> bool {
        self.z.is_some()
    }

    /// Unipotent gauge `[[1, z], [0, 1]]` taking P to `diag(p11, p22)`.
    pub fn gauge(&self) -> Option<Matrix<RatFunc>> {
        let z = self.z.clone()?;
        Some(Matrix::from_rows(vec![vec![RatFunc::one(), z], vec![RatFunc::zero(), RatFunc::one()]]).unwrap())
    }

    /// `[[h1, z h2], [0, h2]]`; without `z` no fundamental matrix exists in
    /// the hyperexponential class.
    pub fn fundamental(&self) -> Option<Matrix<TowerElem>> {
        let z = self.z.as_ref()?;
        let h2 = TowerElem::from(self.h2.clone());
        Some(
            Matrix::from_rows(vec![
                vec![self.h1.clone().into(), h2.scale(z)],
                vec![TowerElem::zero(), h2],
            ])
            .unwrap(),
        )
    }

    pub fn obstruction(&self) -> Option<String> {
        match self.z {
            Some(_) => None,
            None => Some("z' = (p11 - p22) z + p12 has no rational solution; span{e1} has no invariant complement".into()),
        }
    }
}

pub fn solve_triangular_2x2(p: &Matrix<RatFunc>) -> Result<TriangularSolution> {
    if p.rows() != 2 || p.cols() != 2 || !p.is_upper_triangular() {
        return Err(Error::UnsupportedClass("solve_triangular_2x2 needs an upper-triangular 2×2 matrix".into()));
    }
    let (p11, p12, p22) = (p.get(0, 0), p.get(0, 1), p.get(1, 1));
    let h1 = solve_rank1(p11)?;
    let h2 = solve_rank1(p22)?;
    let z = if p12.is_zero() { Some(RatFunc::zero()) } else { rational_solution(&(p11 - p22), p12)? };
    Ok(TriangularSolution { z, h1, h2 })
}
