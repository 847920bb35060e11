use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::{remove_ribbons, Partition};
use crate::error::{Error, Result};

/// Which sign rule the Murnaghan-Nakayama recursion uses.
///
/// Everything except `Standard` is a deliberately broken variant used by
/// the negative-control suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CharacterRule {
    Standard,
    /// every ribbon counted with sign +1
    DropSign,
    /// every ribbon counted with the opposite sign
    FlipSign,
    /// ribbon sign read off its width (columns - 1) instead of its height
    OffByOne,
}

type Memo = HashMap<(CharacterRule, Partition, Partition), i64>;

fn memo() -> &'static Mutex<Memo> {
    static M: OnceLock<Mutex<Memo>> = OnceLock::new();
    M.get_or_init(|| Mutex::new(HashMap::new()))
}

/// chi_mu(nu) by the Murnaghan-Nakayama rule.
pub fn character(mu: &Partition, nu: &Partition) -> Result<i64> {
    character_variant(mu, nu, CharacterRule::Standard)
}

pub fn character_variant(mu: &Partition, nu: &Partition, rule: CharacterRule) -> Result<i64> {
    if mu.weight() != nu.weight() {
        return Err(Error::WeightMismatch {
            left: mu.weight(),
            right: nu.weight(),
        });
    }
    Ok(mn(mu, nu.parts(), rule))
}

fn mn(mu: &Partition, nu: &[u32], rule: CharacterRule) -> i64 {
    if nu.is_empty() {
        return 1;
    }
    let key = (rule, mu.clone(), Partition::from_sorted(nu.to_vec()));
    if let Some(&v) = memo().lock().unwrap().get(&key) {
        return v;
    }
    let k = nu[0];
    let rest = &nu[1..];
    let mut total = 0i64;
    for r in remove_ribbons(mu, k) {
        let s = match rule {
            CharacterRule::Standard => r.sign as i64,
            CharacterRule::DropSign => 1,
            CharacterRule::FlipSign => -(r.sign as i64),
            CharacterRule::OffByOne => {
                if (r.length - 1 - r.height) % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
        };
        total += s * mn(&r.partition, rest, rule);
    }
    memo().lock().unwrap().insert(key, total);
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{p, partitions_of};

    #[test]
    fn small_tables() {
        // S3: rows [3], [2,1], [1,1,1]; columns [1,1,1], [2,1], [3]
        let cols = [p(&[1, 1, 1]), p(&[2, 1]), p(&[3])];
        let want = [[1, 1, 1], [2, 0, -1], [1, -1, 1]];
        for (i, mu) in partitions_of(3).iter().enumerate() {
            for (j, nu) in cols.iter().enumerate() {
                assert_eq!(character(mu, nu).unwrap(), want[i][j]);
            }
        }
        assert_eq!(character(&p(&[2, 2]), &p(&[2, 2])).unwrap(), 2);
        assert_eq!(character(&p(&[3, 1]), &p(&[4])).unwrap(), -1);
        assert!(character(&p(&[2]), &p(&[1])).is_err());
    }

    #[test]
    fn column_orthogonality() {
        for n in 1..7 {
            let ps = partitions_of(n);
            for a in &ps {
                for b in &ps {
                    let s: i64 = ps
                        .iter()
                        .map(|l| character(l, a).unwrap() * character(l, b).unwrap())
                        .sum();
                    let want = if a == b { a.z() as i64 } else { 0 };
                    assert_eq!(s, want);
                }
            }
        }
    }
}
