//! Integer partitions, Maya diagrams, ribbons and symmetric group characters.

mod character;
mod maya;

pub use character::{character, character_variant, CharacterRule};
pub use maya::{add_ribbons, remove_ribbons, ribbons, MayaDiagram, Ribbon};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition stored as its weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl Partition {
    /// Validates and builds a partition. Trailing zeros are dropped.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?}")));
        }
        Ok(Partition(parts))
    }

    /// Builds a partition from arbitrary positive parts, sorting them.
    pub fn from_parts_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub(crate) fn from_sorted(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(!parts.contains(&0));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `i`-th part (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn conjugate(&self) -> Self {
        let first = self.part(0) as usize;
        let mut out = vec![0u32; first];
        for &p in &self.0 {
            for c in out.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition(out)
    }

    /// kappa(mu) = sum mu_i (mu_i - 2i + 1), twice the content sum.
    pub fn kappa(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let m = m as i64;
                m * (m - 2 * (i as i64 + 1) + 1)
            })
            .sum()
    }

    /// n(mu) = sum (i-1) mu_i.
    pub fn n(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &m)| i as u64 * m as u64)
            .sum()
    }

    /// Multiplicities m_i for i = 1..=largest part, indexed by i - 1.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m = vec![0u32; self.part(0) as usize];
        for &p in &self.0 {
            m[p as usize - 1] += 1;
        }
        m
    }

    /// z_mu = prod m_i! i^{m_i}.
    pub fn z(&self) -> u128 {
        let mut z: u128 = 1;
        for (i, &m) in self.multiplicities().iter().enumerate() {
            for j in 1..=m as u128 {
                z *= j * (i as u128 + 1);
            }
        }
        z
    }

    /// |Aut(mu)| = prod m_i!.
    pub fn aut_size(&self) -> u128 {
        let mut a: u128 = 1;
        for &m in &self.multiplicities() {
            for j in 1..=m as u128 {
                a *= j;
            }
        }
        a
    }

    /// Merge parts of both partitions.
    pub fn union(&self, other: &Partition) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Partition::from_parts_unsorted(v)
    }

    /// Multiply every part by `k`.
    pub fn scale(&self, k: u32) -> Self {
        Partition(self.0.iter().map(|&p| p * k).collect())
    }

    pub fn double(&self) -> Self {
        self.scale(2)
    }

    /// Young diagram containment `other ⊆ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Hook lengths of all boxes, row by row.
    pub fn hooks(&self) -> Vec<u32> {
        let c = self.conjugate();
        let mut h = Vec::with_capacity(self.weight() as usize);
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row as usize {
                h.push(row - j as u32 + c.0[j] - i as u32 - 1);
            }
        }
        h
    }

    /// Frobenius coordinates (a | b), a_i = mu_i - i, b_i = mu'_i - i (1-based i).
    pub fn frobenius(&self) -> (Vec<u32>, Vec<u32>) {
        let c = self.conjugate();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0.. {
            if self.part(i) as usize <= i {
                break;
            }
            a.push(self.0[i] - i as u32 - 1);
            b.push(c.0[i] - i as u32 - 1);
        }
        (a, b)
    }

    /// Inverse of [`Partition::frobenius`]; both vectors strictly decreasing.
    pub fn from_frobenius(a: &[u32], b: &[u32]) -> Result<Self> {
        let bad = || Error::InvalidPartition(format!("frobenius ({a:?} | {b:?})"));
        if a.len() != b.len()
            || a.windows(2).any(|w| w[0] <= w[1])
            || b.windows(2).any(|w| w[0] <= w[1])
        {
            return Err(bad());
        }
        let r = a.len();
        let mut rows: Vec<u32> = (0..r).map(|i| a[i] + i as u32 + 1).collect();
        // rows below the Durfee square come from the legs
        let len = if r == 0 { 0 } else { b[0] as usize + 1 };
        for i in r..len {
            let cnt = b.iter().enumerate().filter(|&(j, &bj)| bj as usize + j >= i).count();
            rows.push(cnt as u32);
        }
        let p = Partition::new(rows).map_err(|_| bad())?;
        if p.frobenius() != (a.to_vec(), b.to_vec()) {
            return Err(bad());
        }
        Ok(p)
    }

    pub fn maya(&self) -> MayaDiagram {
        MayaDiagram::from_partition(self)
    }
}

/// All partitions of `n`, in descending lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions of weight at most `n`, grouped by weight.
pub fn partitions_up_to(n: u32) -> Vec<Partition> {
    (0..=n).flat_map(partitions_of).collect()
}

/// All partitions contained in `outer` with weight `k` (descending lex).
pub fn subpartitions_of_weight(outer: &Partition, k: u32) -> Vec<Partition> {
    fn rec(outer: &Partition, i: usize, left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if i >= outer.len() {
            return;
        }
        let hi = max.min(outer.0[i]).min(left);
        for p in (1..=hi).rev() {
            cur.push(p);
            rec(outer, i + 1, left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(outer, 0, k, u32::MAX, &mut Vec::new(), &mut out);
    out
}

/// Partitions of weight `n` containing `inner`.
pub fn superpartitions_of_weight(inner: &Partition, n: u32) -> Vec<Partition> {
    if n < inner.weight() {
        return Vec::new();
    }
    partitions_of(n).into_iter().filter(|p| p.contains(inner)).collect()
}

/// Sort partitions into the canonical (descending lexicographic) order.
pub fn canonical_sort(v: &mut [Partition]) {
    v.sort_by(|a, b| b.cmp(a));
}

/// Shorthand used throughout tests.
pub fn p(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).expect("valid partition")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let c: Vec<usize> = (0..10).map(|n| partitions_of(n).len()).collect();
        assert_eq!(c, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
        assert_eq!(partitions_of(3), vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
    }

    #[test]
    fn validation() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(Partition::new(vec![2, 1, 0, 0]).unwrap(), p(&[2, 1]));
        let j: Partition = serde_json::from_str("[7,5,4,4,3,2]").unwrap();
        assert_eq!(serde_json::to_string(&j).unwrap(), "[7,5,4,4,3,2]");
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }

    #[test]
    fn kappa_and_friends() {
        assert_eq!(p(&[]).kappa(), 0);
        assert_eq!(p(&[1]).kappa(), 0);
        assert_eq!(p(&[2]).kappa(), 2);
        assert_eq!(p(&[1, 1]).kappa(), -2);
        assert_eq!(p(&[3, 1]).kappa(), 4);
        assert_eq!(p(&[4, 2, 1]).conjugate(), p(&[3, 2, 1, 1]));
        assert_eq!(p(&[2, 1, 1]).z(), 4);
        assert_eq!(p(&[1, 1, 1]).z(), 6);
        assert_eq!(p(&[2, 2, 1]).aut_size(), 2);
        assert_eq!(p(&[2, 1]).union(&p(&[3, 1])), p(&[3, 2, 1, 1]));
        assert_eq!(p(&[2, 1]).double(), p(&[4, 2]));
        assert_eq!(p(&[3, 1]).hooks(), vec![4, 2, 1, 1]);
    }

    #[test]
    fn frobenius_round_trip() {
        for n in 0..9 {
            for l in partitions_of(n) {
                let (a, b) = l.frobenius();
                assert_eq!(Partition::from_frobenius(&a, &b).unwrap(), l);
            }
        }
        assert_eq!(p(&[2]).frobenius(), (vec![1], vec![0]));
        assert_eq!(p(&[2, 2]).frobenius(), (vec![1, 0], vec![1, 0]));
    }

    #[test]
    fn containment_enumeration() {
        let outer = p(&[3, 2]);
        let subs = subpartitions_of_weight(&outer, 3);
        assert_eq!(subs, vec![p(&[3]), p(&[2, 1])]);
        assert_eq!(superpartitions_of_weight(&p(&[2]), 3), vec![p(&[3]), p(&[2, 1])]);
    }
}
