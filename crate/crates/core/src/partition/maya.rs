use serde::Serialize;

use super::Partition;
use crate::error::{Error, Result};

/// Maya diagram {mu_i - i : i >= 1} of a charge-zero partition.
///
/// Only the first `l(mu)` points are stored; every position below
/// `-l(mu)` is occupied and position `-l(mu)` itself is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MayaDiagram {
    points: Vec<i64>,
}

impl MayaDiagram {
    pub fn from_partition(mu: &Partition) -> Self {
        let points = mu
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &m)| m as i64 - i as i64 - 1)
            .collect();
        MayaDiagram { points }
    }

    /// Explicit points, strictly decreasing.
    pub fn points(&self) -> &[i64] {
        &self.points
    }

    pub fn is_occupied(&self, pos: i64) -> bool {
        pos < -(self.points.len() as i64) || self.points.binary_search_by(|p| pos.cmp(p)).is_ok()
    }

    /// Number of occupied positions strictly between `a` and `b`.
    pub fn count_between(&self, a: i64, b: i64) -> usize {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        (lo + 1..hi).filter(|&x| self.is_occupied(x)).count()
    }

    /// Moves the particle at `from` to the empty position `to`.
    pub fn moved(&self, from: i64, to: i64) -> Option<MayaDiagram> {
        if !self.is_occupied(from) || self.is_occupied(to) {
            return None;
        }
        let n = self.points.len() as i64;
        let lo = from.min(to).min(-n) - n - 2;
        let hi = self.points.first().copied().unwrap_or(-1).max(to).max(from);
        let occ = (lo..=hi)
            .rev()
            .filter(|&x| x != from && (x == to || self.is_occupied(x)));
        let mut parts = Vec::new();
        for (i, x) in (1i64..).zip(occ) {
            if x == -i {
                break;
            }
            parts.push((x + i) as u32);
        }
        let mu = Partition::from_sorted(parts);
        Some(MayaDiagram::from_partition(&mu))
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_sorted(
            self.points
                .iter()
                .enumerate()
                .map(|(i, &x)| (x + i as i64 + 1) as u32)
                .collect(),
        )
    }
}

/// One ribbon move between two partitions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ribbon {
    /// The partition reached by the move.
    pub partition: Partition,
    pub length: u32,
    pub height: u32,
    pub sign: i32,
}

fn moves(alpha: &Partition, k: u32, down: bool) -> Vec<Ribbon> {
    let maya = alpha.maya();
    let n = alpha.len() as i64;
    let k64 = k as i64;
    let mut out: Vec<Ribbon> = Vec::new();
    let top = maya.points.first().copied().unwrap_or(-1);
    for from in (-n - k64 - 1..=top).rev() {
        if !maya.is_occupied(from) {
            continue;
        }
        let to = if down { from - k64 } else { from + k64 };
        if let Some(m) = maya.moved(from, to) {
            let h = maya.count_between(from, to) as u32;
            out.push(Ribbon {
                partition: m.to_partition(),
                length: k,
                height: h,
                sign: if h % 2 == 0 { 1 } else { -1 },
            });
        }
    }
    out.sort_by(|a, b| b.partition.cmp(&a.partition));
    out
}

/// R^{(-)}_{k,alpha}: partitions obtained by removing a ribbon of length `k`.
pub fn remove_ribbons(alpha: &Partition, k: u32) -> Vec<Ribbon> {
    if k == 0 {
        return Vec::new();
    }
    moves(alpha, k, true)
}

/// R^{(+)}_{k,alpha}: partitions obtained by adding a ribbon of length `k`.
pub fn add_ribbons(alpha: &Partition, k: u32) -> Vec<Ribbon> {
    if k == 0 {
        return Vec::new();
    }
    moves(alpha, k, false)
}

/// R_{k,alpha}: removal for k >= 1, addition of a |k|-ribbon for k <= -1.
pub fn ribbons(alpha: &Partition, k: i64) -> Result<Vec<Ribbon>> {
    match k {
        0 => Err(Error::InvalidArgument("ribbon length must be nonzero".into())),
        k if k > 0 => Ok(remove_ribbons(alpha, k as u32)),
        k => Ok(add_ribbons(alpha, (-k) as u32)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{p, partitions_of};

    #[test]
    fn worked_example() {
        let alpha = p(&[7, 5, 4, 4, 3, 2]);
        let r = remove_ribbons(&alpha, 7);
        let hit = r.iter().find(|r| r.partition == p(&[7, 5, 3, 2, 1])).unwrap();
        assert_eq!(hit.height, 3);
        assert_eq!(hit.sign, -1);
    }

    #[test]
    fn hooks_from_empty() {
        for l in 1..7u32 {
            let r = add_ribbons(&Partition::empty(), l);
            assert_eq!(r.len(), l as usize);
            for x in r {
                // hook (j, 1^{l-j})
                let j = x.partition.part(0);
                assert_eq!(x.partition.weight(), l);
                assert_eq!(x.partition.len() as u32, l - j + 1);
                assert_eq!(x.sign, if (l - j) % 2 == 0 { 1 } else { -1 });
            }
        }
        assert!(remove_ribbons(&Partition::empty(), 2).is_empty());
    }

    #[test]
    fn maya_round_trip() {
        for n in 0..8 {
            for mu in partitions_of(n) {
                assert_eq!(mu.maya().to_partition(), mu);
            }
        }
        let m = p(&[1]).maya();
        assert!(m.is_occupied(0));
        assert!(!m.is_occupied(-1));
        assert!(m.is_occupied(-2));
    }

    #[test]
    fn add_remove_inverse() {
        for n in 0..7 {
            for a in partitions_of(n) {
                for k in 1..5 {
                    for r in add_ribbons(&a, k) {
                        let back = remove_ribbons(&r.partition, k);
                        let b = back.iter().find(|b| b.partition == a).unwrap();
                        assert_eq!(b.sign, r.sign);
                    }
                }
            }
        }
    }
}
