//! Galois groups of exponential towers through their character lattices.
//!
//! For generators `ξᵢ` with `δξᵢ/ξᵢ = aᵢ`, the relation lattice
//! `L₀ = {m ∈ Z^m : ∏ ξᵢ^{mᵢ} ∈ Q(x)}` determines the (diagonalizable)
//! group: its character group is `Z^m / L₀`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::Q;
use crate::error::Result;
use crate::lattice::{hermite_normal_form, integer_kernel, smith_invariants, IntVec};
use crate::ratfield::{fmt_q, partial_fractions, PartialFraction, RatFunc};

fn lcm_of_denominators<'a>(qs: impl Iterator<Item = &'a Q>) -> BigInt {
    qs.fold(BigInt::one(), |l, v| l.lcm(v.denom()))
}

/// Clears denominators; `slack` gets `-lcm` (the integer unknown on the right).
fn scaled_row(coeffs: &[Q], slack: Option<usize>, width: usize) -> IntVec {
    let l = lcm_of_denominators(coeffs.iter());
    let mut row: IntVec = coeffs.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
    row.resize(width, BigInt::zero());
    if let Some(col) = slack {
        row[col] = -l;
    }
    row
}

/// Hermite basis of `L₀ ⊆ Z^m`: `m ∈ L₀` iff `Σ mᵢ aᵢ` has only simple poles
/// with integer residues and no polynomial part.
pub fn relation_lattice(a: &[RatFunc]) -> Result<Vec<IntVec>> {
    let m = a.len();
    let pfs: Vec<PartialFraction> = a.iter().map(partial_fractions).collect::<Result<_>>()?;

    // Non-logarithmic coordinates must cancel exactly.
    let mut non_log: BTreeMap<(u8, Q, u32), Vec<Q>> = BTreeMap::new();
    let mut residues: BTreeMap<Q, Vec<Q>> = BTreeMap::new();
    for (i, pf) in pfs.iter().enumerate() {
        for (d, c) in pf.polynomial.coeffs().iter().enumerate() {
            non_log.entry((0, Q::from_integer(d.into()), 0)).or_insert_with(|| vec![Q::zero(); m])[i] = c.clone();
        }
        for t in &pf.poles {
            if t.order == 1 {
                residues.entry(t.at.clone()).or_insert_with(|| vec![Q::zero(); m])[i] = t.coeff.clone();
            } else {
                non_log.entry((1, t.at.clone(), t.order)).or_insert_with(|| vec![Q::zero(); m])[i] = t.coeff.clone();
            }
        }
    }

    // Unknowns: m₁..m_m, then one integer βc per pole for Σ mᵢ res_c(aᵢ) = βc.
    let width = m + residues.len();
    let mut rows: Vec<IntVec> = non_log.values().map(|v| scaled_row(v, None, width)).collect();
    for (j, v) in residues.values().enumerate() {
        rows.push(scaled_row(v, Some(m + j), width));
    }
    if rows.is_empty() {
        rows.push(vec![BigInt::zero(); width]);
    }
    let kernel = integer_kernel(&rows, width);
    let projected: Vec<IntVec> = kernel.into_iter().map(|v| v[..m].to_vec()).collect();
    Ok(hermite_normal_form(&projected, m))
}

/// Is `Σ mᵢ aᵢ` the logarithmic derivative of a rational function? Decided
/// directly on the summed function.
pub fn is_log_derivative(f: &RatFunc) -> Result<bool> {
    let pf = partial_fractions(f)?;
    Ok(pf.polynomial.is_zero() && pf.poles.iter().all(|t| t.order == 1 && t.coeff.is_integer()))
}

/// Structure of the diagonalizable group with character group `Z^m / L₀`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisDescriptor {
    pub torus_rank: usize,
    /// Invariant factors ≥ 2 of the torsion part, each dividing the next.
    pub invariant_factors: Vec<u64>,
    /// Residue of each generator at each pole, as rational strings.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub residues: Vec<ResidueRow>,
    /// Whether each generator has a non-logarithmic (exponential) part.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub exp_parts: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueRow {
    pub at: String,
    pub residues: Vec<String>,
}

impl GaloisDescriptor {
    /// Order of the finite part (product of invariant factors).
    pub fn finite_order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }
}

pub fn classify(a: &[RatFunc]) -> Result<GaloisDescriptor> {
    let lattice = relation_lattice(a)?;
    let m = a.len();
    let factors = smith_invariants(&lattice, m);
    let invariant_factors = factors
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| d.abs().to_u64().expect("invariant factor fits in u64"))
        .collect();

    let pfs: Vec<PartialFraction> = a.iter().map(partial_fractions).collect::<Result<_>>()?;
    let points: BTreeSet<Q> = pfs.iter().flat_map(PartialFraction::points).collect();
    let residues = points
        .iter()
        .map(|c| ResidueRow { at: fmt_q(c), residues: pfs.iter().map(|pf| fmt_q(&pf.residue(c))).collect() })
        .collect();
    let exp_parts = pfs
        .iter()
        .map(|pf| !pf.polynomial.is_zero() || pf.poles.iter().any(|t| t.order > 1))
        .collect();
    Ok(GaloisDescriptor { torus_rank: m - lattice.len(), invariant_factors, residues, exp_parts })
}

/// Field-theoretic summary of an exponential tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDescription {
    pub transcendence_degree: usize,
    pub algebraic_degree: u64,
    pub exponential_extension: bool,
    pub group: GaloisDescriptor,
}

pub fn tower_description(a: &[RatFunc]) -> Result<TowerDescription> {
    let group = classify(a)?;
    // A torus of dimension d is matched by d algebraically independent
    // generators; the finite quotient is the algebraic part.
    Ok(TowerDescription {
        transcendence_degree: group.torus_rank,
        algebraic_degree: group.finite_order(),
        exponential_extension: true,
        group,
    })
}
