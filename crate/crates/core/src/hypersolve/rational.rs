//! Rational solutions of first-order equations `y' = a y + b` and of
//! triangular linear systems, by pole-order bounds and undetermined
//! coefficients over Q.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::hyperexp::{HyperClass, TowerElem};
use super::solve_rank1;
use super::tower::SplittingTower;
use crate::algebra::{Differential, Q};
use crate::error::{Error, Result};
use crate::linalg::{rank, rational_relations};
use crate::matrix::Matrix;
use crate::ratfield::{partial_fractions, PartialFraction, Poly, RatFunc};

/// A solution `(y, t)` of `y' = a y + Σ tᵢ bᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSolution {
    pub y: RatFunc,
    pub t: Vec<Q>,
}

/// Degree at infinity of a nonzero rational function (`deg num - deg den`).
fn degree(f: &RatFunc) -> Option<i64> {
    f.degree()
}

/// Q-basis of all `(y, t)` with `y ∈ Q(x)`, `t ∈ Q^k` and
/// `y' = a y + Σ tᵢ bᵢ`.
pub fn rational_solutions_param(a: &RatFunc, bs: &[RatFunc]) -> Result<Vec<ParamSolution>> {
    let pa = partial_fractions(a)?;
    let pbs: Vec<PartialFraction> = bs.iter().map(partial_fractions).collect::<Result<_>>()?;

    let mut points: BTreeSet<Q> = pa.points().into_iter().collect();
    for pb in &pbs {
        points.extend(pb.points());
    }

    // Local bound on the pole order of y at each candidate point.
    let mut den = Poly::one();
    let mut total_nu: i64 = 0;
    for c in &points {
        let alpha = pa.order_at(c) as i64;
        let beta = pbs.iter().map(|pb| pb.order_at(c) as i64).max().unwrap_or(0);
        let nu = match alpha {
            0 => beta - 1,
            1 => {
                let rho = pa.residue(c);
                let forced = if rho.is_integer() && rho.is_negative() { (-rho).to_integer().to_i64().unwrap() } else { 0 };
                (beta - 1).max(forced)
            }
            _ => beta - alpha,
        }
        .max(0);
        if nu > 0 {
            den = &den * &Poly::linear(c).pow(nu as u32);
            total_nu += nu;
        }
    }

    // Bound on deg N - deg D from the behaviour at infinity.
    let db = bs.iter().filter(|b| !b.is_zero()).filter_map(degree).max();
    let da = degree(a);
    let rho_inf = if da == Some(-1) { a.leading_coefficient() } else { None };
    let mut mu: Option<i64> = None;
    let mut bump = |v: i64| mu = Some(mu.map_or(v, |m: i64| m.max(v)));
    match (da, db) {
        (Some(d), Some(b)) if d >= 0 => bump(b - d),
        (_, Some(b)) => bump(b + 1),
        _ => {}
    }
    match da {
        None => bump(0),
        Some(-1) => {
            let r = rho_inf.unwrap();
            if r.is_integer() {
                bump(r.to_integer().to_i64().unwrap());
            }
        }
        Some(d) if d <= -2 => bump(0),
        _ => {}
    }
    let deg_n = mu.map(|m| m + total_nu).filter(|&d| d >= 0);

    // Columns: N's coefficients then the t's; equation y' - a y - Σ t b = 0.
    let den_rf = RatFunc::from_poly(den.clone());
    let mut columns: Vec<Vec<RatFunc>> = Vec::new();
    let n_coeffs = deg_n.map_or(0, |d| d as usize + 1);
    for j in 0..n_coeffs {
        let basis = RatFunc::from_poly(Poly::monomial(Q::one(), j)) / &den_rf;
        columns.push(vec![basis.derive() - a * &basis]);
    }
    for b in bs {
        columns.push(vec![-b.clone()]);
    }
    let relations = rational_relations(&columns);
    Ok(relations
        .into_iter()
        .map(|v| {
            let num = Poly::new(v[..n_coeffs].to_vec());
            ParamSolution {
                y: RatFunc::from_poly(num) / &den_rf,
                t: v[n_coeffs..].to_vec(),
            }
        })
        .collect())
}

/// A rational `y` with `y' = a y + b`, if one exists. For `b = 0` a nonzero
/// solution is required.
pub fn rational_solution(a: &RatFunc, b: &RatFunc) -> Result<Option<RatFunc>> {
    if b.is_zero() {
        let sols = rational_solutions_param(a, &[])?;
        return Ok(sols.into_iter().map(|s| s.y).find(|y| !y.is_zero()));
    }
    let sols = rational_solutions_param(a, std::slice::from_ref(b))?;
    Ok(sols.into_iter().find(|s| !s.t[0].is_zero()).map(|s| s.y.scale(&s.t[0].recip())))
}

/// Order in which components of `Y' = A Y` can be solved one at a time:
/// component k after every l ≠ k with `A[k][l] ≠ 0`.
fn solve_order(a: &Matrix<RatFunc>) -> Result<Vec<usize>> {
    let n = a.rows();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&k| !done[k] && (0..n).all(|l| l == k || done[l] || a.get(k, l).is_zero()));
        match next {
            Some(k) => {
                done[k] = true;
                order.push(k);
            }
            None => {
                return Err(Error::UnsupportedClass(
                    "system is not triangular up to a permutation of coordinates".into(),
                ))
            }
        }
    }
    Ok(order)
}

/// Q-basis of rational vector solutions of `Y' = A Y`, for `A` triangular
/// up to a permutation of coordinates.
pub fn rational_horizontal(a: &Matrix<RatFunc>) -> Result<Vec<Vec<RatFunc>>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("connection matrix must be square".into()));
    }
    let n = a.rows();
    let order = solve_order(a)?;
    // Basis of the solution space restricted to the components solved so far.
    let mut basis: Vec<Vec<RatFunc>> = Vec::new();
    for &k in &order {
        let forcing: Vec<RatFunc> = basis
            .iter()
            .map(|v| (0..n).filter(|&l| l != k).fold(RatFunc::zero(), |acc, l| acc + a.get(k, l) * &v[l]))
            .collect();
        let sols = rational_solutions_param(a.get(k, k), &forcing)?;
        basis = sols
            .into_iter()
            .map(|s| {
                let mut v = vec![RatFunc::zero(); n];
                for (coef, old) in s.t.iter().zip(&basis) {
                    if coef.is_zero() {
                        continue;
                    }
                    for (dst, src) in v.iter_mut().zip(old) {
                        *dst = &*dst + &src.scale(coef);
                    }
                }
                v[k] = s.y;
                v
            })
            .collect();
    }
    Ok(basis)
}

/// Q-basis of solutions of `Y' = A Y` with entries in the tower, for `A`
/// triangular up to a permutation. Every solution is homogeneous: a rational
/// vector times a single class monomial.
pub fn horizontal_over_tower(a: &Matrix<RatFunc>, tower: &SplittingTower) -> Result<Vec<Vec<TowerElem>>> {
    solve_order(a)?;
    let mut classes: BTreeSet<HyperClass> = BTreeSet::new();
    for k in 0..a.rows() {
        let h = solve_rank1(a.get(k, k))?;
        if tower.contains_class(h.class())? {
            classes.insert(h.class().clone());
        }
    }
    let mut out = Vec::new();
    for class in classes {
        let shift = Matrix::identity(a.rows()).scale(&class.log_derivative());
        let monomial = TowerElem::class_monomial(&class);
        for v in rational_horizontal(&(a - &shift))? {
            out.push(v.into_iter().map(|f| monomial.scale(&f)).collect());
        }
    }
    Ok(out)
}

/// Coefficients of a vector whose entries are rational multiples of at most
/// one class each.
pub fn rational_part(v: &[TowerElem]) -> Vec<RatFunc> {
    v.iter()
        .map(|e| {
            debug_assert!(e.term_count() <= 1);
            e.terms().values().next().cloned().unwrap_or_else(RatFunc::zero)
        })
        .collect()
}

/// An invertible solution matrix of `Y' = A Y` with columns drawn from
/// [`horizontal_over_tower`], if enough independent columns exist.
pub fn fundamental_over_tower(a: &Matrix<RatFunc>, tower: &SplittingTower) -> Result<Option<Matrix<TowerElem>>> {
    let n = a.rows();
    let mut chosen: Vec<Vec<TowerElem>> = Vec::new();
    let mut parts: Vec<Vec<RatFunc>> = Vec::new();
    for v in horizontal_over_tower(a, tower)? {
        // Homogeneous columns are independent over the tower iff their
        // rational parts are independent over Q(x).
        let mut trial = parts.clone();
        trial.push(rational_part(&v));
        if rank(trial.clone(), n) > parts.len() {
            parts = trial;
            chosen.push(v);
        }
        if chosen.len() == n {
            return Ok(Some(Matrix::from_fn(n, n, |i, j| chosen[j][i].clone())));
        }
    }
    Ok(None)
}

/// Fundamental matrix over the tower generated by the diagonal of A.
pub fn fundamental_matrix(a: &Matrix<RatFunc>) -> Result<Option<(Matrix<TowerElem>, SplittingTower)>> {
    let tower = SplittingTower::generated_by(&a.diagonal_entries())?;
    Ok(fundamental_over_tower(a, &tower)?.map(|z| (z, tower)))
}
