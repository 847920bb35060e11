use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::det::DetRing;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::qscalar::{int, Agreement, QScalar, Rational, Ring};

/// A family of graded variables x_1, x_2, ... with deg x_k = k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    T,
    P1,
    P2,
    P3,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::T => "t",
            Family::P1 => "p1",
            Family::P2 => "p2",
            Family::P3 => "p3",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One partition per family; the parts are the variable indices.
pub type Monomial = Vec<Partition>;

/// Polynomial in several graded families with QScalar coefficients,
/// truncated family by family at the given weighted degrees.
#[derive(Clone, Debug)]
pub struct SeriesPoly {
    ring: Ring,
    families: Vec<Family>,
    cutoffs: Vec<u32>,
    terms: BTreeMap<Monomial, QScalar>,
}

impl SeriesPoly {
    pub fn zero(ring: Ring, families: &[Family], cutoffs: &[u32]) -> Self {
        assert_eq!(families.len(), cutoffs.len());
        SeriesPoly {
            ring,
            families: families.to_vec(),
            cutoffs: cutoffs.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_like(&self) -> Self {
        SeriesPoly::zero(self.ring, &self.families, &self.cutoffs)
    }

    pub fn constant_like(&self, c: QScalar) -> Self {
        let mut p = self.zero_like();
        let m = p.empty_monomial();
        p.insert(m, c);
        p
    }

    pub fn one_like(&self) -> Self {
        self.constant_like(QScalar::one(self.ring))
    }

    pub fn one(ring: Ring, families: &[Family], cutoffs: &[u32]) -> Self {
        SeriesPoly::zero(ring, families, cutoffs).one_like()
    }

    pub fn empty_monomial(&self) -> Monomial {
        vec![Partition::empty(); self.families.len()]
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn cutoffs(&self) -> &[u32] {
        &self.cutoffs
    }

    pub fn family_index(&self, f: Family) -> Option<usize> {
        self.families.iter().position(|&g| g == f)
    }

    pub fn fits(&self, m: &Monomial) -> bool {
        m.iter().zip(&self.cutoffs).all(|(p, &c)| p.weight() <= c)
    }

    /// Adds `c` to the coefficient of `m`, silently dropping out-of-range monomials.
    pub fn insert(&mut self, m: Monomial, c: QScalar) {
        if !self.fits(&m) || c.is_exact_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                let s = &*x + &c;
                if s.is_exact_zero() {
                    self.terms.remove(&m);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// c * (variable k of family f).
    pub fn variable(&self, family: Family, k: u32, c: QScalar) -> Self {
        let mut p = self.zero_like();
        let i = self.family_index(family).expect("family present");
        let mut m = self.empty_monomial();
        m[i] = Partition::from_parts_unsorted(vec![k]);
        p.insert(m, c);
        p
    }

    pub fn monomial(&self, m: Monomial, c: QScalar) -> Self {
        let mut p = self.zero_like();
        p.insert(m, c);
        p
    }

    pub fn coeff(&self, m: &Monomial) -> QScalar {
        self.terms.get(m).cloned().unwrap_or_else(|| QScalar::zero(self.ring))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &QScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_weight(m: &Monomial) -> u32 {
        m.iter().map(|p| p.weight()).sum()
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!(self.families, other.families, "family mismatch");
    }

    /// Re-truncates to smaller (or equal) cutoffs.
    pub fn with_cutoffs(&self, cutoffs: &[u32]) -> Self {
        let mut p = SeriesPoly::zero(self.ring, &self.families, cutoffs);
        for (m, c) in &self.terms {
            p.insert(m.clone(), c.clone());
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.insert(m.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Self {
        let mut p = self.clone();
        for c in p.terms.values_mut() {
            *c = -&*c;
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        let mut p = self.zero_like();
        for (m, x) in &self.terms {
            p.insert(m.clone(), x * c);
        }
        p
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        let mut p = self.zero_like();
        for (m, x) in &self.terms {
            p.insert(m.clone(), x.scale(c));
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_shape(other);
        let mut p = self.zero_like();
        let a: Vec<(&Monomial, &QScalar, Vec<u32>)> = self
            .terms
            .iter()
            .map(|(m, c)| (m, c, m.iter().map(|x| x.weight()).collect()))
            .collect();
        let b: Vec<(&Monomial, &QScalar, Vec<u32>)> = other
            .terms
            .iter()
            .map(|(m, c)| (m, c, m.iter().map(|x| x.weight()).collect()))
            .collect();
        for (ma, ca, wa) in &a {
            for (mb, cb, wb) in &b {
                if wa.iter().zip(wb).zip(&self.cutoffs).any(|((x, y), c)| x + y > *c) {
                    continue;
                }
                let m: Monomial = ma.iter().zip(mb.iter()).map(|(x, y)| x.union(y)).collect();
                p.insert(m, *ca * *cb);
            }
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = self.one_like();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Partial derivative in variable k of family f.
    pub fn derivative(&self, family: Family, k: u32) -> Self {
        let i = self.family_index(family).expect("family present");
        let mut p = self.zero_like();
        for (m, c) in &self.terms {
            let mult = m[i].parts().iter().filter(|&&x| x == k).count() as i64;
            if mult == 0 {
                continue;
            }
            let mut parts = m[i].parts().to_vec();
            let pos = parts.iter().position(|&x| x == k).unwrap();
            parts.remove(pos);
            let mut nm = m.clone();
            nm[i] = Partition::from_parts_unsorted(parts);
            p.insert(nm, c.scale(&int(mult)));
        }
        p
    }

    /// Keeps only the terms of total weight `d`.
    pub fn graded_part(&self, d: u32) -> Self {
        let mut p = self.zero_like();
        for (m, c) in &self.terms {
            if Self::total_weight(m) == d {
                p.insert(m.clone(), c.clone());
            }
        }
        p
    }

    fn max_total(&self) -> u32 {
        self.cutoffs.iter().sum()
    }

    /// Euler operator: multiplies each monomial by its total weight.
    pub fn euler(&self) -> Self {
        let mut p = self.zero_like();
        for (m, c) in &self.terms {
            p.insert(m.clone(), c.scale(&int(Self::total_weight(m) as i64)));
        }
        p
    }

    fn constant_term(&self) -> QScalar {
        self.coeff(&self.empty_monomial())
    }

    /// exp of a series without constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_exact_zero() {
            return Err(Error::InvalidArgument("exp needs a vanishing constant term".into()));
        }
        // d Y_d = sum_j j X_j Y_{d-j}
        let top = self.max_total();
        let xs: Vec<SeriesPoly> = (0..=top).map(|d| self.graded_part(d).scale_rational(&int(d as i64))).collect();
        let mut ys: Vec<SeriesPoly> = vec![self.one_like()];
        for d in 1..=top as usize {
            let mut acc = self.zero_like();
            for j in 1..=d {
                if xs[j].is_empty() || ys[d - j].is_empty() {
                    continue;
                }
                acc = acc.add(&xs[j].mul(&ys[d - j]));
            }
            ys.push(acc.scale_rational(&Rational::new(1.into(), (d as i64).into())));
        }
        Ok(ys.iter().fold(self.zero_like(), |a, y| a.add(y)))
    }

    /// Multiplicative inverse of a series whose constant term is exactly 1.
    pub fn inverse_unipotent(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.as_constant() != Some(int(1)) {
            return Err(Error::InvalidArgument("series must have constant term 1".into()));
        }
        let top = self.max_total();
        let ts: Vec<SeriesPoly> = (0..=top).map(|d| self.graded_part(d)).collect();
        let mut gs: Vec<SeriesPoly> = vec![self.one_like()];
        for d in 1..=top as usize {
            let mut acc = self.zero_like();
            for j in 1..=d {
                if ts[j].is_empty() || gs[d - j].is_empty() {
                    continue;
                }
                acc = acc.sub(&ts[j].mul(&gs[d - j]));
            }
            gs.push(acc);
        }
        Ok(gs.iter().fold(self.zero_like(), |a, y| a.add(y)))
    }

    /// log of a series whose constant term is exactly 1, through
    /// E(log T) = E(T) / T with E the Euler operator.
    pub fn log(&self) -> Result<Self> {
        let inv = self.inverse_unipotent()?;
        let et = self.euler().mul(&inv);
        let mut p = self.zero_like();
        for (m, c) in &et.terms {
            let w = Self::total_weight(m);
            if w > 0 {
                p.insert(m.clone(), c.scale(&Rational::new(1.into(), (w as i64).into())));
            }
        }
        Ok(p)
    }

    /// Replaces every variable by a polynomial living in `target`.
    pub fn substitute(&self, target: &SeriesPoly, image: impl Fn(Family, u32) -> SeriesPoly) -> Self {
        let mut cache: BTreeMap<(usize, u32, usize), SeriesPoly> = BTreeMap::new();
        let mut out = target.zero_like();
        for (m, c) in &self.terms {
            let mut acc = target.constant_like(c.clone());
            for (i, part) in m.iter().enumerate() {
                for (k, &mult) in part.multiplicities().iter().enumerate() {
                    if mult == 0 {
                        continue;
                    }
                    let k = k as u32 + 1;
                    let key = (i, k, mult as usize);
                    let pw = cache
                        .entry(key)
                        .or_insert_with(|| image(self.families[i], k).pow(mult))
                        .clone();
                    acc = acc.mul(&pw);
                    if acc.is_empty() {
                        break;
                    }
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// First monomial where the two polynomials differ on the common window.
    ///
    /// `Ok(None)` means every coefficient agrees; an agreement window
    /// narrower than `min_width` anywhere makes the result inconclusive.
    pub fn first_mismatch(&self, other: &Self, min_width: i64) -> Result<Option<(Monomial, QScalar, QScalar)>> {
        self.same_shape(other);
        let mut keys: Vec<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut narrow = None;
        for m in keys {
            if !(self.fits(m) && other.fits(m)) {
                continue;
            }
            let a = self.coeff(m);
            let b = other.coeff(m);
            match a.agree_on_common_window(&b, min_width) {
                Ok(Agreement::Differ { .. }) => return Ok(Some((m.clone(), a, b))),
                Ok(_) => {}
                Err(e @ Error::Inconclusive(_)) => narrow = Some(e),
                Err(e) => return Err(e),
            }
        }
        match narrow {
            Some(e) => Err(e),
            None => Ok(None),
        }
    }
}

impl DetRing for SeriesPoly {
    fn zero_like(&self) -> Self {
        SeriesPoly::zero_like(self)
    }
    fn is_exact_zero(&self) -> bool {
        self.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        SeriesPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        SeriesPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        SeriesPoly::mul(self, other)
    }
}

fn exps_map(p: &Partition) -> BTreeMap<String, u32> {
    p.multiplicities()
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(k, &m)| ((k + 1).to_string(), m))
        .collect()
}

#[derive(Serialize)]
struct TermOne<'a> {
    coeff: &'a QScalar,
    exps: BTreeMap<String, u32>,
}

#[derive(Serialize)]
struct TermMany<'a> {
    coeff: &'a QScalar,
    exps: BTreeMap<String, BTreeMap<String, u32>>,
}

impl Serialize for SeriesPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.families.len() == 1 {
            let terms: Vec<TermOne> = self
                .terms
                .iter()
                .map(|(m, c)| TermOne { coeff: c, exps: exps_map(&m[0]) })
                .collect();
            let mut st = s.serialize_struct("SeriesPoly", 3)?;
            st.serialize_field("cutoff", &self.cutoffs[0])?;
            st.serialize_field("family", self.families[0].name())?;
            st.serialize_field("terms", &terms)?;
            st.end()
        } else {
            let terms: Vec<TermMany> = self
                .terms
                .iter()
                .map(|(m, c)| TermMany {
                    coeff: c,
                    exps: self
                        .families
                        .iter()
                        .zip(m)
                        .filter(|(_, p)| !p.is_empty())
                        .map(|(f, p)| (f.name().to_string(), exps_map(p)))
                        .collect(),
                })
                .collect();
            let cutoffs: BTreeMap<&str, u32> =
                self.families.iter().zip(&self.cutoffs).map(|(f, &c)| (f.name(), c)).collect();
            let mut st = s.serialize_struct("SeriesPoly", 2)?;
            st.serialize_field("cutoffs", &cutoffs)?;
            st.serialize_field("terms", &terms)?;
            st.end()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::new(1, 40).unwrap()
    }

    #[test]
    fn exp_log_round_trip() {
        let r = ring();
        let base = SeriesPoly::zero(r, &[Family::T, Family::P2], &[5, 2]);
        let q = QScalar::q_pow(r, 1, 2).unwrap();
        let x = base
            .variable(Family::T, 1, q.clone())
            .add(&base.variable(Family::T, 2, QScalar::from_int(r, 3)))
            .add(&base.variable(Family::P2, 1, QScalar::one(r)).mul(&base.variable(Family::T, 1, q)));
        let e = x.exp().unwrap();
        let l = e.log().unwrap();
        assert!(l.first_mismatch(&x, 20).unwrap().is_none());
        // exp(t1) up to t1^5/120
        let t1 = base.variable(Family::T, 1, QScalar::one(r));
        let e1 = t1.exp().unwrap();
        let m = vec![Partition::from_parts_unsorted(vec![1; 5]), Partition::empty()];
        assert_eq!(e1.coeff(&m).as_constant(), Some(Rational::new(1.into(), 120.into())));
    }

    #[test]
    fn derivative_and_substitution() {
        let r = ring();
        let base = SeriesPoly::zero(r, &[Family::T], &[6]);
        let t1 = base.variable(Family::T, 1, QScalar::one(r));
        let f = t1.pow(3);
        let d = f.derivative(Family::T, 1);
        assert!(d.first_mismatch(&t1.pow(2).scale_rational(&int(3)), 1).unwrap().is_none());
        let target = SeriesPoly::zero(r, &[Family::T], &[6]);
        let g = f.substitute(&target, |_, k| target.variable(Family::T, k, QScalar::from_int(r, 2)));
        assert!(g.first_mismatch(&f.scale_rational(&int(8)), 1).unwrap().is_none());
        let json = serde_json::to_string(&t1).unwrap();
        assert!(json.starts_with(r#"{"cutoff":6,"family":"t","terms":[{"coeff":"#));
    }
}
