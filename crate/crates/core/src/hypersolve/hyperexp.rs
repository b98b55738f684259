//! Hyperexponential elements `c * f(x) * ∏ (x - cᵢ)^{rᵢ} * exp(R(x))` and the
//! exponential-tower ring they generate.
//!
//! The non-rational part `∏ (x - cᵢ)^{rᵢ} * exp(R)` is a [`HyperClass`]; two
//! hyperexponential elements are Q(x)-proportional exactly when their classes
//! agree. A [`TowerElem`] is a finite Q(x)-combination of distinct classes,
//! which is zero only when every coefficient is zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{Differential, Q};
use crate::error::{Error, Result};
use crate::ratfield::{fmt_q, Cursor, Poly, RatFunc};

/// Canonical non-rational part of a hyperexponential element.
///
/// Exponents are fractional parts in (0, 1) keyed by base point; integer
/// parts live in the rational coefficient. The exponential part has no
/// constant term (constants of integration are fixed to zero).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct HyperClass {
    exponents: BTreeMap<Q, Q>,
    exp_part: RatFunc,
}

impl HyperClass {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Normalizes arbitrary exponents; returns the class together with the
    /// rational factor `∏ (x - c)^⌊r⌋` split off.
    pub fn normalize(exponents: impl IntoIterator<Item = (Q, Q)>, exp_part: &RatFunc) -> (Self, RatFunc) {
        let mut acc: BTreeMap<Q, Q> = BTreeMap::new();
        for (c, r) in exponents {
            *acc.entry(c).or_insert_with(Q::zero) += r;
        }
        let mut carry = RatFunc::one();
        let mut out = BTreeMap::new();
        for (c, r) in acc {
            let whole = r.floor();
            let frac = &r - &whole;
            if !whole.is_zero() {
                let k: i64 = whole.to_integer().try_into().expect("exponent out of range");
                carry = carry * RatFunc::linear_power(&c, k);
            }
            if !frac.is_zero() {
                out.insert(c, frac);
            }
        }
        (HyperClass { exponents: out, exp_part: exp_part.without_constant_term() }, carry)
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty() && self.exp_part.is_zero()
    }

    pub fn exponents(&self) -> &BTreeMap<Q, Q> {
        &self.exponents
    }

    pub fn exp_part(&self) -> &RatFunc {
        &self.exp_part
    }

    /// Product of class monomials, with the rational carry.
    pub fn mul(&self, other: &Self) -> (Self, RatFunc) {
        let exps = self.exponents.iter().chain(&other.exponents).map(|(c, r)| (c.clone(), r.clone()));
        Self::normalize(exps, &(&self.exp_part + &other.exp_part))
    }

    pub fn inverse(&self) -> (Self, RatFunc) {
        let exps = self.exponents.iter().map(|(c, r)| (c.clone(), -r.clone()));
        Self::normalize(exps, &-&self.exp_part)
    }

    /// `δ(ξ)/ξ = Σ rᵢ/(x - cᵢ) + R'`.
    pub fn log_derivative(&self) -> RatFunc {
        self.exponents.iter().fold(self.exp_part.derive(), |acc, (c, r)| {
            acc + RatFunc::linear_power(c, -1).scale(r)
        })
    }
}

/// A nonzero hyperexponential element `coeff * ξ_class`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperexp {
    coeff: RatFunc,
    class: HyperClass,
}

impl Hyperexp {
    pub fn new(coeff: RatFunc, class: HyperClass) -> Result<Self> {
        if coeff.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Hyperexp { coeff, class })
    }

    /// `(x - at)^r` for any rational r.
    pub fn power_of_linear(at: &Q, r: &Q) -> Self {
        let (class, carry) = HyperClass::normalize([(at.clone(), r.clone())], &RatFunc::zero());
        Hyperexp { coeff: carry, class }
    }

    /// `exp(R)`; the constant term of R is dropped.
    pub fn exponential(r: &RatFunc) -> Self {
        let (class, carry) = HyperClass::normalize([], r);
        Hyperexp { coeff: carry, class }
    }

    pub fn rational(f: RatFunc) -> Result<Self> {
        Self::new(f, HyperClass::trivial())
    }

    pub fn coeff(&self) -> &RatFunc {
        &self.coeff
    }

    pub fn class(&self) -> &HyperClass {
        &self.class
    }

    /// Leading coefficient of the rational coefficient's numerator.
    pub fn scalar(&self) -> Q {
        self.coeff.leading_coefficient().unwrap()
    }

    /// The rational coefficient with the scalar divided out.
    pub fn cofactor(&self) -> RatFunc {
        self.coeff.scale(&self.scalar().recip())
    }

    /// Exponents with integer parts folded back in from the cofactor's
    /// rational linear factors; base points ascending.
    pub fn monomials(&self) -> Vec<(Q, Q)> {
        self.factored().2.into_iter().collect()
    }

    pub fn log_derivative(&self) -> RatFunc {
        self.coeff.derive() / &self.coeff + self.class.log_derivative()
    }

    pub fn is_rational(&self) -> bool {
        self.class.is_trivial()
    }

    pub fn inv(&self) -> Self {
        let (class, carry) = self.class.inverse();
        Hyperexp { coeff: carry / &self.coeff, class }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Hyperexp::rational(RatFunc::one()).unwrap(), |acc, _| acc.mul(&base))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (class, carry) = self.class.mul(&other.class);
        Hyperexp { coeff: carry * &self.coeff * &other.coeff, class }
    }

    /// Splits the coefficient into scalar, a rational part free of rational
    /// roots, and merged exponents at every base point.
    fn factored(&self) -> (Q, RatFunc, BTreeMap<Q, Q>) {
        let scalar = self.scalar();
        let mut exps: BTreeMap<Q, Q> = self.class.exponents.clone();
        let mut strip = |p: &Poly, sign: i64| -> Poly {
            let mut rest = p.monic();
            for (c, m) in p.rational_roots() {
                rest = rest.exact_div(&Poly::linear(&c).pow(m as u32));
                *exps.entry(c).or_insert_with(Q::zero) += Q::from_integer((sign * m as i64).into());
            }
            rest
        };
        let top = strip(self.coeff.num(), 1);
        let bottom = strip(self.coeff.den(), -1);
        exps.retain(|_, e| !e.is_zero());
        (scalar, RatFunc::new(top, bottom).unwrap(), exps)
    }
}

impl fmt::Display for Hyperexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.coeff);
        }
        let (scalar, rest, exps) = self.factored();
        let mut parts = Vec::new();
        if !scalar.abs().is_one() {
            parts.push(fmt_q(&scalar.abs()));
        }
        if !rest.is_one() {
            parts.push(format!("({rest})"));
        }
        for (c, e) in &exps {
            parts.push(format!("({})^({})", Poly::linear(c), fmt_q(e)));
        }
        if !self.class.exp_part.is_zero() {
            parts.push(format!("exp({})", self.class.exp_part));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        if scalar.is_negative() {
            f.write_str("-")?;
        }
        f.write_str(&parts.join("*"))
    }
}

impl fmt::Debug for Hyperexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hyperexp({self})")
    }
}

impl FromStr for Hyperexp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let e: TowerElem = s.parse()?;
        match e.as_hyperexp() {
            Some(h) => Ok(h),
            None => Err(Error::Syntax { offset: 0, message: "expected a single nonzero hyperexponential term".into() }),
        }
    }
}

/// Element of an exponential tower over Q(x): a finite sum of
/// hyperexponential terms with distinct classes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TowerElem {
    terms: BTreeMap<HyperClass, RatFunc>,
}

impl TowerElem {
    pub fn rational(f: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(HyperClass::trivial(), f);
        }
        TowerElem { terms }
    }

    /// The class monomial `ξ_κ` with coefficient 1.
    pub fn class_monomial(class: &HyperClass) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(class.clone(), RatFunc::one());
        TowerElem { terms }
    }

    pub fn terms(&self) -> &BTreeMap<HyperClass, RatFunc> {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn hyperexps(&self) -> impl Iterator<Item = Hyperexp> + '_ {
        self.terms.iter().map(|(k, c)| Hyperexp { coeff: c.clone(), class: k.clone() })
    }

    /// The single term, if this element is a nonzero hyperexponential.
    pub fn as_hyperexp(&self) -> Option<Hyperexp> {
        if self.terms.len() == 1 {
            self.hyperexps().next()
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => self.terms.get(&HyperClass::trivial()).cloned(),
            _ => None,
        }
    }

    /// Inverse of a single-term element; sums are not inverted.
    pub fn inv(&self) -> Option<Self> {
        self.as_hyperexp().map(|h| h.inv().into())
    }

    fn add_term(&mut self, class: HyperClass, coeff: RatFunc) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(class) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &coeff;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, f: &RatFunc) -> Self {
        if f.is_zero() {
            return Self::zero();
        }
        TowerElem { terms: self.terms.iter().map(|(k, c)| (k.clone(), c * f)).collect() }
    }
}

impl From<Hyperexp> for TowerElem {
    fn from(h: Hyperexp) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(h.class, h.coeff);
        TowerElem { terms }
    }
}

impl From<RatFunc> for TowerElem {
    fn from(f: RatFunc) -> Self {
        Self::rational(f)
    }
}

impl Zero for TowerElem {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for TowerElem {
    fn one() -> Self {
        Self::rational(RatFunc::one())
    }
}

impl Add for TowerElem {
    type Output = TowerElem;
    fn add(mut self, rhs: TowerElem) -> TowerElem {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
        self
    }
}

impl Neg for TowerElem {
    type Output = TowerElem;
    fn neg(self) -> TowerElem {
        TowerElem { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl Sub for TowerElem {
    type Output = TowerElem;
    fn sub(self, rhs: TowerElem) -> TowerElem {
        self + (-rhs)
    }
}

impl Mul for TowerElem {
    type Output = TowerElem;
    fn mul(self, rhs: TowerElem) -> TowerElem {
        let mut out = TowerElem::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                let (k, carry) = k1.mul(k2);
                out.add_term(k, carry * c1 * c2);
            }
        }
        out
    }
}

impl Differential for TowerElem {
    /// `δ(f ξ) = (f' + f · δξ/ξ) ξ`, classwise.
    fn derive(&self) -> Self {
        let mut out = TowerElem::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.derive() + c * &k.log_derivative());
        }
        out
    }
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, h) in self.hyperexps().enumerate() {
            let s = h.to_string();
            match (i, s.strip_prefix('-')) {
                (0, _) => f.write_str(&s)?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {s}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerElem({self})")
    }
}

impl FromStr for TowerElem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let v = tower_sum(&mut cur)?;
        cur.finish()?;
        Ok(v)
    }
}

impl Serialize for TowerElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TowerElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Hyperexp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Hyperexp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

// Tower expression grammar:
//   tsum    := ['-'] tprod (('+' | '-') tprod)*
//   tprod   := tfactor (('*' | '/') tfactor)*
//   tfactor := 'exp' '(' expr ')'
//            | '(' expr ')' ('^' ( '(' ['-'] literal ')' | ['-'] integer ))?
//            | literal | 'x' ('^' ['-'] integer)?
// where `expr` and `literal` are the rational-function grammar.

fn tower_sum(cur: &mut Cursor) -> Result<TowerElem> {
    let mut acc = if cur.eat(b'-') { -tower_prod(cur)? } else { tower_prod(cur)? };
    loop {
        if cur.eat(b'+') {
            acc = acc + tower_prod(cur)?;
        } else if cur.eat(b'-') {
            acc = acc - tower_prod(cur)?;
        } else {
            return Ok(acc);
        }
    }
}

fn tower_prod(cur: &mut Cursor) -> Result<TowerElem> {
    let mut acc = tower_factor(cur)?;
    loop {
        if cur.eat(b'*') {
            acc = acc * tower_factor(cur)?;
        } else if cur.eat(b'/') {
            let d = tower_factor(cur)?;
            acc = acc * d.inv().ok_or(Error::DivisionByZero)?;
        } else {
            return Ok(acc);
        }
    }
}

fn tower_factor(cur: &mut Cursor) -> Result<TowerElem> {
    if cur.eat_keyword("exp") {
        cur.expect(b'(')?;
        let r = cur.expr()?;
        let at = cur.offset();
        cur.expect(b')')?;
        if r.without_constant_term() != r {
            return Err(Error::Syntax {
                offset: at,
                message: "exp() of an expression with a nonzero constant term is not representable".into(),
            });
        }
        return Ok(Hyperexp::exponential(&r).into());
    }
    match cur.peek() {
        Some(b'(') => {
            cur.eat(b'(');
            let base = cur.expr()?;
            cur.expect(b')')?;
            if !cur.eat(b'^') {
                return Ok(base.into());
            }
            let at = cur.offset();
            let e = if cur.eat(b'(') {
                let e = cur.signed_literal()?;
                cur.expect(b')')?;
                e
            } else {
                Q::from_integer(cur.signed_integer()?)
            };
            power(base, &e, at)
        }
        Some(c) if c == b'x' || c.is_ascii_digit() => Ok(cur.factor()?.into()),
        Some(c) => cur.error(format!("unexpected '{}'", c as char)),
        None => cur.error("unexpected end of input"),
    }
}

fn power(base: RatFunc, e: &Q, offset: usize) -> Result<TowerElem> {
    if e.is_integer() {
        let k: i64 = match e.to_integer().try_into() {
            Ok(k) if i64::abs(k) <= 10_000 => k,
            _ => return Err(Error::Syntax { offset, message: "exponent too large".into() }),
        };
        return Ok(base.pow(k).ok_or(Error::DivisionByZero)?.into());
    }
    let p = base.num();
    if base.den().is_one() && p.degree() == Some(1) && p.leading().unwrap().is_one() {
        let at = -p.coeff(0);
        return Ok(Hyperexp::power_of_linear(&at, e).into());
    }
    Err(Error::Syntax { offset, message: "fractional powers need a monic linear base (x - c)".into() })
}
