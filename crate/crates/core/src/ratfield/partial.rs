//! Partial-fraction decomposition over Q for denominators that split into
//! linear factors.

use num_traits::Zero;
use serde::Serialize;

use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::algebra::Q;
use crate::error::{Error, Result};

/// `coeff / (x - at)^order`
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoleTerm {
    #[serde(serialize_with = "ser_q")]
    pub at: Q,
    pub order: u32,
    #[serde(serialize_with = "ser_q")]
    pub coeff: Q,
}

fn ser_q<S: serde::Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&super::poly::fmt_q(v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFraction {
    pub polynomial: Poly,
    /// Sorted by pole location, then order; zero coefficients are omitted.
    pub poles: Vec<PoleTerm>,
}

impl PartialFraction {
    pub fn resum(&self) -> RatFunc {
        self.poles.iter().fold(RatFunc::from_poly(self.polynomial.clone()), |acc, t| {
            acc + RatFunc::linear_power(&t.at, -(t.order as i64)).scale(&t.coeff)
        })
    }

    /// Coefficient of `1/(x - at)`.
    pub fn residue(&self, at: &Q) -> Q {
        self.poles
            .iter()
            .find(|t| &t.at == at && t.order == 1)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(Q::zero)
    }

    /// Distinct pole locations.
    pub fn points(&self) -> Vec<Q> {
        let mut pts: Vec<Q> = self.poles.iter().map(|t| t.at.clone()).collect();
        pts.dedup();
        pts
    }

    /// Highest pole order at `at`, 0 if regular there.
    pub fn order_at(&self, at: &Q) -> u32 {
        self.poles.iter().filter(|t| &t.at == at).map(|t| t.order).max().unwrap_or(0)
    }
}

/// Distinct roots of a denominator with multiplicities; errors unless the
/// polynomial is a product of rational linear factors.
pub fn split_roots(den: &Poly) -> Result<Vec<(Q, usize)>> {
    let roots = den.rational_roots();
    let total: usize = roots.iter().map(|(_, m)| m).sum();
    if total != den.degree().unwrap_or(0) {
        return Err(Error::NonSplitDenominator(den.to_string()));
    }
    Ok(roots)
}

pub fn partial_fractions(f: &RatFunc) -> Result<PartialFraction> {
    let (polynomial, rem) = f.num().div_rem(f.den());
    let mut poles = Vec::new();
    for (at, mult) in split_roots(f.den())? {
        let cofactor = f.den().exact_div(&Poly::linear(&at).pow(mult as u32));
        // Laurent expansion of rem / den at `at`: shift to u = x - at and
        // divide power series up to u^(mult-1).
        let top = rem.taylor_shift(&at);
        let bot = cofactor.taylor_shift(&at);
        let b0 = bot.coeff(0);
        let mut series: Vec<Q> = Vec::with_capacity(mult);
        for j in 0..mult {
            let mut s = top.coeff(j);
            for i in 1..=j {
                s -= bot.coeff(i) * &series[j - i];
            }
            series.push(s / &b0);
        }
        for (j, c) in series.into_iter().enumerate() {
            if !c.is_zero() {
                poles.push(PoleTerm { at: at.clone(), order: (mult - j) as u32, coeff: c });
            }
        }
    }
    poles.sort_by(|a, b| (&a.at, a.order).cmp(&(&b.at, b.order)));
    Ok(PartialFraction { polynomial, poles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn rf(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    #[test]
    fn simple_poles() {
        let pf = partial_fractions(&rf("1/(x^2-x)")).unwrap();
        assert_eq!(
            pf.poles,
            vec![
                PoleTerm { at: q(0), order: 1, coeff: q(-1) },
                PoleTerm { at: q(1), order: 1, coeff: q(1) },
            ]
        );
        assert_eq!(pf.resum(), rf("1/(x^2-x)"));
    }

    #[test]
    fn repeated_pole() {
        let pf = partial_fractions(&rf("3/x + 1/x^2")).unwrap();
        assert_eq!(pf.order_at(&q(0)), 2);
        assert_eq!(pf.residue(&q(0)), q(3));
        assert_eq!(pf.poles.len(), 2);
        assert!(pf.polynomial.is_zero());
    }

    #[test]
    fn irreducible_quadratic_rejected() {
        assert!(matches!(partial_fractions(&rf("1/(x^2+1)")), Err(Error::NonSplitDenominator(_))));
    }

    #[test]
    fn polynomial_part_and_resum() {
        let f = rf("(x^5 + 2)/((x-1)^2*(x+1/2)^3)");
        let pf = partial_fractions(&f).unwrap();
        assert_eq!(pf.resum(), f);
        assert_eq!(pf.order_at(&q(1)), 2);
    }
}
