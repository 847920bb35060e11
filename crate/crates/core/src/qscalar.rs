//! Truncated Laurent series in u = q^{1/(2L)} with exact rational coefficients.
//!
//! A value is `sum_e c_e u^e + O(u^order)`; `order == None` means the value
//! is known exactly. Every operation keeps only exponents below
//! `valuation + window`, and propagates the absolute precision soundly, so a
//! coefficient that is reported is always correct.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Lattice and truncation width shared by all values of one computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    /// L: exponents live in (1/(2L)) Z.
    pub lattice: u32,
    /// W: kept width above the valuation, in lattice units.
    pub window: u32,
}

impl Ring {
    pub fn new(lattice: u32, window: u32) -> Result<Self> {
        if lattice == 0 || window == 0 {
            return Err(Error::Config("lattice denominator and window must be positive".into()));
        }
        Ok(Ring { lattice, window })
    }

    pub fn with_window(self, window: u32) -> Self {
        Ring { window, ..self }
    }

    /// Lattice units in one power of q.
    pub fn unit(&self) -> i64 {
        2 * self.lattice as i64
    }

    /// Converts a rational q-exponent to lattice units.
    pub fn units(&self, e: &Rational) -> Result<i64> {
        let x = e * BigInt::from(self.unit());
        if !x.is_integer() {
            return Err(Error::OffLattice(format_rational(e), self.lattice));
        }
        x.to_integer()
            .to_i64()
            .ok_or_else(|| Error::OffLattice(format_rational(e), self.lattice))
    }

    /// Lattice units of the q-exponent n/d.
    pub fn units_of(&self, n: i64, d: i64) -> Result<i64> {
        self.units(&rat(n, d))
    }
}

/// Smallest L such that every exponent c * kappa / 2 with c in
/// {tau, 1/tau, tau/(1+tau), 1/(1+tau)} and kappa even lies in (1/(2L)) Z.
pub fn lattice_for_tau(tau: &Rational) -> Result<u32> {
    if tau.is_zero() || (tau + int(1)).is_zero() {
        return Err(Error::InvalidArgument("tau must avoid 0 and -1".into()));
    }
    let a = tau.numer().abs();
    let b = tau.denom().abs();
    let s = (tau.numer() + tau.denom()).abs();
    let l = a.lcm(&b).lcm(&s);
    let l = if l.is_even() { l / 2 } else { l };
    l.to_u32().ok_or_else(|| Error::Config("lattice too large".into()))
}

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("bad rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Outcome of comparing two truncated series on their common window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Agreement {
    /// Both values are exact and identical.
    Exact,
    /// Coefficients agree on `[lo, hi)`, nothing is known beyond.
    UpToWindow { lo: i64, hi: i64 },
    /// First exponent where the coefficients differ.
    Differ { exponent: i64 },
}

impl Agreement {
    pub fn is_equal(&self) -> bool {
        !matches!(self, Agreement::Differ { .. })
    }
}

#[derive(Clone, Debug)]
pub struct QScalar {
    ring: Ring,
    /// nonzero numerators, strictly increasing exponents, all below `order`
    terms: Vec<(i64, BigInt)>,
    /// positive common denominator, coprime to the content of `terms`
    den: BigInt,
    order: Option<i64>,
}

impl PartialEq for QScalar {
    fn eq(&self, other: &Self) -> bool {
        self.ring.lattice == other.ring.lattice
            && self.order == other.order
            && self.den == other.den
            && self.terms == other.terms
    }
}

impl Eq for QScalar {}

fn min_order(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl QScalar {
    pub fn zero(ring: Ring) -> Self {
        QScalar {
            ring,
            terms: Vec::new(),
            den: BigInt::one(),
            order: None,
        }
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, &int(1))
    }

    /// O(u^order), a zero known only below `order`.
    pub fn big_o(ring: Ring, order: i64) -> Self {
        QScalar {
            ring,
            terms: Vec::new(),
            den: BigInt::one(),
            order: Some(order),
        }
    }

    pub fn constant(ring: Ring, c: &Rational) -> Self {
        Self::monomial_units(ring, 0, c)
    }

    pub fn from_int(ring: Ring, c: i64) -> Self {
        Self::constant(ring, &int(c))
    }

    /// c u^e with `e` in lattice units.
    pub fn monomial_units(ring: Ring, e: i64, c: &Rational) -> Self {
        let mut v = QScalar::zero(ring);
        if !c.is_zero() {
            v.terms.push((e, c.numer().clone()));
            v.den = c.denom().clone();
        }
        v.normalize();
        v
    }

    /// q^e for a rational exponent on the lattice.
    pub fn q_monomial(ring: Ring, e: &Rational) -> Result<Self> {
        Ok(Self::monomial_units(ring, ring.units(e)?, &int(1)))
    }

    /// q^{n/d}.
    pub fn q_pow(ring: Ring, n: i64, d: i64) -> Result<Self> {
        Self::q_monomial(ring, &rat(n, d))
    }

    /// Builds a value from (exponent in lattice units, coefficient) pairs.
    pub fn from_terms(ring: Ring, terms: &[(i64, Rational)], order: Option<i64>) -> Self {
        let mut den = BigInt::one();
        for (_, c) in terms {
            den = den.lcm(c.denom());
        }
        let mut map = std::collections::BTreeMap::<i64, BigInt>::new();
        for (e, c) in terms {
            let n = c.numer() * (&den / c.denom());
            *map.entry(*e).or_insert_with(BigInt::zero) += n;
        }
        let mut v = QScalar {
            ring,
            terms: map.into_iter().collect(),
            den,
            order,
        };
        v.normalize();
        v
    }

    /// sum_{j >= 0} q^{e0 + j * step}, step > 0, truncated by the window.
    pub fn geometric_sum(ring: Ring, e0: &Rational, step: &Rational) -> Result<Self> {
        let s = ring.units(step)?;
        if s <= 0 {
            return Err(Error::InvalidArgument("geometric step must be positive".into()));
        }
        let e = ring.units(e0)?;
        let w = ring.window as i64;
        let terms: Vec<(i64, BigInt)> = (0..)
            .map(|j| e + j * s)
            .take_while(|&x| x < e + w)
            .map(|x| (x, BigInt::one()))
            .collect();
        Ok(QScalar {
            ring,
            terms,
            den: BigInt::one(),
            order: Some(e + w),
        })
    }

    fn normalize(&mut self) {
        let w = self.ring.window as i64;
        if let Some(o) = self.order {
            self.terms.retain(|(e, _)| *e < o);
        }
        self.terms.retain(|(_, c)| !c.is_zero());
        if let Some(&(v, _)) = self.terms.first() {
            let cap = v + w;
            let top = self.terms.last().unwrap().0;
            if self.order.map_or(top >= cap, |o| o > cap) {
                self.order = Some(cap);
                self.terms.retain(|(e, _)| *e < cap);
            }
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            for (_, c) in self.terms.iter_mut() {
                *c = -&*c;
            }
        }
        if self.terms.is_empty() {
            self.den = BigInt::one();
        } else if !self.den.is_one() {
            let mut g = self.den.clone();
            for (_, c) in &self.terms {
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
            if !g.is_one() {
                self.den = &self.den / &g;
                for (_, c) in self.terms.iter_mut() {
                    *c = &*c / &g;
                }
            }
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn lattice(&self) -> u32 {
        self.ring.lattice
    }

    /// Re-truncates with a different window. Precision is never increased.
    pub fn with_window(&self, window: u32) -> Self {
        let mut v = self.clone();
        v.ring.window = window;
        v.normalize();
        v
    }

    /// Absolute precision bound in lattice units; `None` when exact.
    pub fn order(&self) -> Option<i64> {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    /// Exponent of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    /// No nonzero coefficient is known (the value may still be truncated).
    pub fn has_no_terms(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.order.is_none()
    }

    /// Coefficient of u^e, or `None` when `e` is beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<Rational> {
        if self.order.is_some_and(|o| e >= o) {
            return None;
        }
        Some(match self.terms.binary_search_by(|t| t.0.cmp(&e)) {
            Ok(i) => BigRational::new(self.terms[i].1.clone(), self.den.clone()),
            Err(_) => Rational::zero(),
        })
    }

    /// Nonzero (exponent, coefficient) pairs.
    pub fn terms(&self) -> Vec<(i64, Rational)> {
        self.terms
            .iter()
            .map(|(e, c)| (*e, BigRational::new(c.clone(), self.den.clone())))
            .collect()
    }

    /// Value as an exact rational if it is an exact constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.order.is_some() {
            return None;
        }
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(0, c)] => Some(BigRational::new(c.clone(), self.den.clone())),
            _ => None,
        }
    }

    /// Lower bound of the exponent of any possibly nonzero term.
    fn val_bound(&self) -> Option<i64> {
        self.valuation().or(self.order)
    }

    fn check(&self, other: &Self) -> Result<Ring> {
        if self.ring.lattice != other.ring.lattice {
            return Err(Error::LatticeMismatch(self.ring.lattice, other.ring.lattice));
        }
        Ok(Ring {
            lattice: self.ring.lattice,
            window: self.ring.window.min(other.ring.window),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let ring = self.check(other)?;
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let order = min_order(self.order, other.order);
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let pick = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match pick {
                Ordering::Less => {
                    terms.push((a[i].0, &a[i].1 * &fa));
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push((b[j].0, &b[j].1 * &fb));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 * &fa + &b[j].1 * &fb;
                    if !c.is_zero() {
                        terms.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        let mut v = QScalar { ring, terms, den, order };
        v.normalize();
        Ok(v)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        QScalar {
            ring: self.ring,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            den: self.den.clone(),
            order: self.order,
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let ring = self.check(other)?;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(QScalar::zero(ring));
        }
        let va = self.val_bound().unwrap();
        let vb = other.val_bound().unwrap();
        let order = min_order(self.order.map(|o| o + vb), other.order.map(|o| o + va));
        if self.terms.is_empty() || other.terms.is_empty() {
            return Ok(QScalar {
                ring,
                terms: Vec::new(),
                den: BigInt::one(),
                order,
            });
        }
        let lo = va + vb;
        let cap = lo + ring.window as i64;
        let top = self.terms.last().unwrap().0 + other.terms.last().unwrap().0;
        let order = match order {
            Some(o) => Some(o.min(cap)),
            None if top >= cap => Some(cap),
            None => None,
        };
        let hi = order.unwrap_or(top + 1);
        if hi <= lo {
            return Ok(QScalar::big_o(ring, hi));
        }
        let mut acc = vec![BigInt::zero(); (hi - lo) as usize];
        for (ea, ca) in &self.terms {
            if ea + vb >= hi {
                break;
            }
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if e >= hi {
                    break;
                }
                acc[(e - lo) as usize] += ca * cb;
            }
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (lo + i as i64, c))
            .collect();
        let mut v = QScalar {
            ring,
            terms,
            den: &self.den * &other.den,
            order,
        };
        v.normalize();
        Ok(v)
    }

    /// Multiplies by an exact rational.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return QScalar::zero(self.ring);
        }
        let mut v = QScalar {
            ring: self.ring,
            terms: self.terms.iter().map(|(e, x)| (*e, x * c.numer())).collect(),
            den: &self.den * c.denom(),
            order: self.order,
        };
        v.normalize();
        v
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&int(c))
    }

    /// Multiplies by u^s (s in lattice units).
    pub fn shift(&self, s: i64) -> Self {
        QScalar {
            ring: self.ring,
            terms: self.terms.iter().map(|(e, c)| (e + s, c.clone())).collect(),
            den: self.den.clone(),
            order: self.order.map(|o| o + s),
        }
    }

    /// Multiplies by q^e.
    pub fn mul_q_pow(&self, e: &Rational) -> Result<Self> {
        Ok(self.shift(self.ring.units(e)?))
    }

    /// Multiplicative inverse; needs a known nonzero leading coefficient.
    pub fn invert(&self) -> Result<Self> {
        let Some(&(v, _)) = self.terms.first() else {
            return Err(Error::NotInvertible("no known nonzero coefficient".into()));
        };
        let w = self.ring.window as i64;
        if self.terms.len() == 1 && self.order.is_none() {
            let c = BigRational::new(self.terms[0].1.clone(), self.den.clone());
            return Ok(QScalar::monomial_units(self.ring, -v, &c.recip()));
        }
        let rp = self.order.map_or(w, |o| (o - v).min(w));
        let n = rp as usize;
        let mut a = vec![Rational::zero(); n];
        for (e, c) in &self.terms {
            let i = (e - v) as usize;
            if i < n {
                a[i] = BigRational::new(c.clone(), self.den.clone());
            }
        }
        let nz: Vec<usize> = (1..n).filter(|&i| !a[i].is_zero()).collect();
        let inv0 = a[0].recip();
        let mut b = vec![Rational::zero(); n];
        b[0] = inv0.clone();
        for k in 1..n {
            let mut s = Rational::zero();
            for &i in &nz {
                if i > k {
                    break;
                }
                if !b[k - i].is_zero() {
                    s += &a[i] * &b[k - i];
                }
            }
            b[k] = -(s * &inv0);
        }
        let terms: Vec<(i64, Rational)> = b
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 - v, c))
            .collect();
        Ok(QScalar::from_terms(self.ring, &terms, Some(rp - v)))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = QScalar::one(self.ring);
        for _ in 0..n {
            r = &r * self;
        }
        r
    }

    /// Drops everything at or above u^order.
    pub fn truncate(&self, order: i64) -> Self {
        let mut v = self.clone();
        v.order = min_order(v.order, Some(order));
        v.normalize();
        v
    }

    /// Compares coefficients on the common window.
    ///
    /// The window runs from the lowest exponent carrying a nonzero
    /// coefficient in either value (or from u^0 when neither has one) up to
    /// the smaller precision bound. A difference inside it is definite; an
    /// agreement narrower than `min_width` lattice units is inconclusive.
    pub fn agree_on_common_window(&self, other: &Self, min_width: i64) -> Result<Agreement> {
        self.check(other)?;
        let hi = min_order(self.order, other.order);
        let Some(hi) = hi else {
            return Ok(if self == other {
                Agreement::Exact
            } else {
                Agreement::Differ {
                    exponent: first_difference(self, other, i64::MAX).unwrap(),
                }
            });
        };
        if let Some(e) = first_difference(self, other, hi) {
            return Ok(Agreement::Differ { exponent: e });
        }
        let lo = match (self.valuation(), other.valuation()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => 0,
        }
        .min(hi);
        if hi - lo < min_width {
            return Err(Error::Inconclusive(format!(
                "common window [{lo}, {hi}) narrower than {min_width} lattice units"
            )));
        }
        Ok(Agreement::UpToWindow { lo, hi })
    }

    /// Equality as exact rationals with denominators cleared.
    fn scaled_terms(&self, den: &BigInt) -> impl Iterator<Item = (i64, BigInt)> + '_ {
        let f = den / &self.den;
        self.terms.iter().map(move |(e, c)| (*e, c * &f))
    }
}

fn first_difference(a: &QScalar, b: &QScalar, hi: i64) -> Option<i64> {
    let den = a.den.lcm(&b.den);
    let mut x = a.scaled_terms(&den).take_while(|t| t.0 < hi).peekable();
    let mut y = b.scaled_terms(&den).take_while(|t| t.0 < hi).peekable();
    loop {
        match (x.peek(), y.peek()) {
            (None, None) => return None,
            (Some(p), None) => return Some(p.0),
            (None, Some(p)) => return Some(p.0),
            (Some(p), Some(r)) => {
                if p.0 != r.0 {
                    return Some(p.0.min(r.0));
                }
                if p.1 != r.1 {
                    return Some(p.0);
                }
                x.next();
                y.next();
            }
        }
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $m:ident) => {
        impl $tr<&QScalar> for &QScalar {
            type Output = QScalar;
            fn $f(self, rhs: &QScalar) -> QScalar {
                self.$m(rhs).expect("lattice mismatch")
            }
        }
        impl $tr<QScalar> for QScalar {
            type Output = QScalar;
            fn $f(self, rhs: QScalar) -> QScalar {
                (&self).$m(&rhs).expect("lattice mismatch")
            }
        }
        impl $tr<&QScalar> for QScalar {
            type Output = QScalar;
            fn $f(self, rhs: &QScalar) -> QScalar {
                (&self).$m(rhs).expect("lattice mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        self.neg_ref()
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        self.neg_ref()
    }
}

fn format_exponent(e: i64, unit: i64) -> String {
    let r = rat(e, unit);
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = self.ring.unit();
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let cs = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("({}/{})", a.numer(), a.denom())
            };
            if e == 0 {
                write!(f, "{cs}")?;
            } else if a.is_one() {
                write!(f, "q^{}", format_exponent(e, unit))?;
            } else {
                write!(f, "{cs}*q^{}", format_exponent(e, unit))?;
            }
        }
        match self.order {
            Some(o) => {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "O(q^{})", format_exponent(o, unit))
            }
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}

impl Serialize for QScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let min_exp = self.valuation().or(self.order).unwrap_or(0);
        let end = match self.order {
            Some(o) => o,
            None => self.terms.last().map_or(min_exp, |t| t.0 + 1),
        };
        let coeffs: Vec<String> = (min_exp..end)
            .map(|e| format_rational(&self.coeff(e).unwrap()))
            .collect();
        let mut st = s.serialize_struct("QScalar", 4)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("exact", &self.order.is_none())?;
        st.serialize_field("lattice_denom", &self.ring.lattice)?;
        st.serialize_field("min_exp", &min_exp)?;
        st.end()
    }
}

#[derive(Deserialize)]
struct RawQScalar {
    lattice_denom: u32,
    min_exp: i64,
    coeffs: Vec<String>,
    #[serde(default)]
    exact: bool,
    #[serde(default)]
    window: Option<u32>,
}

impl<'de> Deserialize<'de> for QScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawQScalar::deserialize(d)?;
        let n = raw.coeffs.len() as i64;
        let window = raw.window.unwrap_or((n as u32).max(1)).max(n as u32).max(1);
        let ring = Ring::new(raw.lattice_denom, window).map_err(de::Error::custom)?;
        let mut terms = Vec::new();
        for (i, c) in raw.coeffs.iter().enumerate() {
            let r = parse_rational(c).map_err(de::Error::custom)?;
            terms.push((raw.min_exp + i as i64, r));
        }
        let order = if raw.exact { None } else { Some(raw.min_exp + n) };
        Ok(QScalar::from_terms(ring, &terms, order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r1() -> Ring {
        Ring::new(1, 40).unwrap()
    }

    #[test]
    fn geometric_inverse() {
        let ring = r1();
        let one = QScalar::one(ring);
        let q = QScalar::q_pow(ring, 1, 1).unwrap();
        let one_minus_q = &one - &q;
        let inv = one_minus_q.invert().unwrap();
        let g = QScalar::geometric_sum(ring, &int(0), &int(1)).unwrap();
        assert_eq!(inv.agree_on_common_window(&g, 20).unwrap(), Agreement::UpToWindow { lo: 0, hi: 40 });
        let prod = &one_minus_q * &inv;
        assert!(prod.agree_on_common_window(&one, 20).unwrap().is_equal());
    }

    #[test]
    fn half_integer_exponents() {
        let ring = r1();
        let x = QScalar::q_pow(ring, 1, 2).unwrap();
        assert_eq!(x.terms(), vec![(1, int(1))]);
        assert!(QScalar::q_pow(ring, 1, 3).is_err());
        let r3 = Ring::new(3, 40).unwrap();
        assert_eq!(QScalar::q_pow(r3, 1, 3).unwrap().terms(), vec![(2, int(1))]);
    }

    #[test]
    fn window_caveat_and_inconclusive() {
        let ring = r1();
        let a = QScalar::one(ring);
        let b = QScalar::from_terms(ring, &[(0, int(1)), (45, int(1))], None);
        assert_eq!(b.order(), Some(40));
        assert_eq!(a.agree_on_common_window(&b, 20).unwrap(), Agreement::UpToWindow { lo: 0, hi: 40 });
        let c = QScalar::from_terms(ring, &[(0, int(1))], Some(5));
        assert!(matches!(a.agree_on_common_window(&c, 20), Err(Error::Inconclusive(_))));
        let d = QScalar::from_terms(ring, &[(0, int(1)), (3, int(2))], Some(5));
        assert_eq!(a.agree_on_common_window(&d, 20).unwrap(), Agreement::Differ { exponent: 3 });
    }

    #[test]
    fn lattice_rule() {
        assert_eq!(lattice_for_tau(&int(1)).unwrap(), 1);
        assert_eq!(lattice_for_tau(&int(2)).unwrap(), 3);
        assert_eq!(lattice_for_tau(&rat(1, 2)).unwrap(), 3);
        assert_eq!(lattice_for_tau(&rat(1, 3)).unwrap(), 6);
        assert_eq!(lattice_for_tau(&rat(-1, 2)).unwrap(), 1);
        assert!(lattice_for_tau(&int(-1)).is_err());
        let a = QScalar::one(r1());
        let b = QScalar::one(Ring::new(2, 40).unwrap());
        assert!(matches!(a.try_add(&b), Err(Error::LatticeMismatch(1, 2))));
    }

    #[test]
    fn json_round_trip() {
        let ring = r1();
        let v = QScalar::from_terms(ring, &[(-1, rat(1, 2)), (3, int(-2))], Some(6));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(
            s,
            r#"{"coeffs":["1/2","0/1","0/1","0/1","-2/1","0/1","0/1"],"exact":false,"lattice_denom":1,"min_exp":-1}"#
        );
        let back: QScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(back.terms(), v.terms());
        assert_eq!(back.order(), v.order());
    }

    #[test]
    fn display() {
        let ring = r1();
        let v = QScalar::from_terms(ring, &[(1, int(1)), (3, int(-2))], Some(5));
        assert_eq!(v.to_string(), "q^1/2 - 2*q^3/2 + O(q^5/2)");
    }
}
