use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::{fmt_q, Poly};
use crate::algebra::{Differential, Q};
use crate::error::{Error, Result};

/// An element of Q(x) in lowest terms with a monic denominator.
///
/// Zero is `0/1`. Because the representation is canonical, derived equality
/// and ordering are equality and a total order on field elements.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let lc = den.leading().unwrap().recip();
        RatFunc { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(Q::from_integer(n.into()))
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    /// `(x - at)^power` for any integer power.
    pub fn linear_power(at: &Q, power: i64) -> Self {
        let lin = Poly::linear(at).pow(power.unsigned_abs() as u32);
        if power >= 0 {
            Self::from_poly(lin)
        } else {
            RatFunc { num: Poly::one(), den: lin }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn as_constant(&self) -> Option<Q> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::normalized(self.den.clone(), self.num.clone()))
        }
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Some(RatFunc { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// `deg(num) - deg(den)`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        Some(dn - self.den.degree().unwrap() as i64)
    }

    /// Ratio of leading coefficients (the coefficient of `x^degree` at infinity).
    pub fn leading_coefficient(&self) -> Option<Q> {
        Some(self.num.leading()?.clone())
    }

    /// Drops the constant term of the polynomial part, the normalization used
    /// for exponents `exp(R)` where R is fixed up to an additive constant.
    pub fn without_constant_term(&self) -> Self {
        let (quot, _) = self.num.div_rem(&self.den);
        let c = quot.coeff(0);
        if c.is_zero() {
            self.clone()
        } else {
            self - &Self::constant(c)
        }
    }

    pub fn lcm_den(fs: &[&RatFunc]) -> Poly {
        fs.iter().fold(Poly::one(), |acc, f| {
            let g = Poly::gcd(&acc, &f.den);
            (&acc * &f.den).exact_div(&g)
        })
    }

    /// Numerator after multiplying by `common`, which must be a multiple of
    /// the denominator.
    pub fn numerator_over(&self, common: &Poly) -> Poly {
        &self.num * &common.exact_div(&self.den)
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl Differential for RatFunc {
    fn derive(&self) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derive());
        }
        let top = &(&self.num.derive() * &self.den) - &(&self.num * &self.den.derive());
        Self::normalized(top, self.den.pow(2))
    }
}

impl From<Q> for RatFunc {
    fn from(c: Q) -> Self {
        Self::constant(c)
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on division by zero, like the primitive numeric types.
impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.inv().expect("division by zero in Q(x)")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// Is this polynomial a single factor when written out (`x`, `x^3`, `5`)?
fn is_atomic(p: &Poly) -> bool {
    p.term_count() == 1 && (p.is_constant() || p.leading().unwrap().is_one())
}

/// Canonical rendering: expanded numerator over the monic denominator, with
/// the rational content pulled out, e.g. `1/(4*x)` or `(x+1)/(x^2-2)`.
impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let (content, prim) = self.num.primitive_part();
        let prim = Poly::new(prim.into_iter().map(Q::from_integer).collect());
        let p: BigInt = content.numer().clone();
        let qd: BigInt = content.denom().clone();
        let top = if prim.is_one() {
            p.to_string()
        } else {
            let body = if prim.term_count() > 1 { format!("({prim})") } else { prim.to_string() };
            if p.is_one() {
                body
            } else if p == -BigInt::one() {
                format!("-{body}")
            } else {
                format!("{p}*{body}")
            }
        };
        let bottom = if qd.is_one() {
            if is_atomic(&self.den) {
                self.den.to_string()
            } else {
                format!("({})", self.den)
            }
        } else {
            let den = if self.den.term_count() > 1 { format!("({})", self.den) } else { self.den.to_string() };
            format!("({}*{})", fmt_q(&Q::from_integer(qd)), den)
        };
        write!(f, "{top}/{bottom}")
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl FromStr for RatFunc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse(s)
    }
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, q_frac};

    fn rf(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    #[test]
    fn power_rule_and_constants() {
        assert_eq!(rf("x^2").derive(), rf("2*x"));
        assert_eq!(RatFunc::constant(q_frac(7, 3)).derive(), RatFunc::zero());
    }

    #[test]
    fn quotient_rule_cross_checked() {
        // f = 1/(4x): differentiate directly, and via (f * 4x)' = 4 = f' * 4x + f * 4
        let f = rf("1/(4*x)");
        let g = rf("4*x");
        let d = f.derive();
        assert_eq!(d, rf("-1/(4*x^2)"));
        assert_eq!(&(&d * &g) + &(&f * &g.derive()), (&f * &g).derive());
    }

    #[test]
    fn normal_form() {
        let f = rf("(x^2-1)/(x-1)");
        assert_eq!(f, rf("x+1"));
        let g = rf("(2*x)/(4*x^2+4)");
        assert!(g.den().leading().unwrap().is_one());
        assert_eq!(g.num(), &Poly::new(vec![q(0), q_frac(1, 2)]));
    }

    #[test]
    fn render_examples() {
        assert_eq!(rf("1/(4*x)").to_string(), "1/(4*x)");
        assert_eq!(rf("-1/x").to_string(), "-1/x");
        assert_eq!(rf("(3*x+3)/(2*x-2)").to_string(), "3*(x+1)/(2*(x-1))");
        assert_eq!(rf("x/(x^2+1)").to_string(), "x/(x^2+1)");
        assert_eq!(rf("0").to_string(), "0");
    }

    #[test]
    fn without_constant_term() {
        assert_eq!(rf("x+3+1/x").without_constant_term(), rf("x+1/x"));
        assert_eq!(rf("(x+1)/x").without_constant_term(), rf("1/x"));
    }
}
