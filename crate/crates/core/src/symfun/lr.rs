use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::partition::Partition;

type Memo = HashMap<(Partition, Partition, Partition), u64>;

fn memo() -> &'static Mutex<Memo> {
    static M: OnceLock<Mutex<Memo>> = OnceLock::new();
    M.get_or_init(|| Mutex::new(HashMap::new()))
}

/// c^lambda_{mu nu}: number of LR tableaux of shape lambda/mu and content nu.
///
/// Cells are filled in reading order (rows top to bottom, each row right to
/// left); the reading word has to stay a lattice word.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if lambda.weight() != mu.weight() + nu.weight() || !lambda.contains(mu) || !lambda.contains(nu) {
        return 0;
    }
    if nu.is_empty() || mu.is_empty() {
        return u64::from(if nu.is_empty() { lambda == mu } else { lambda == nu });
    }
    let key = (lambda.clone(), mu.clone(), nu.clone());
    if let Some(&v) = memo().lock().unwrap().get(&key) {
        return v;
    }
    let cells: Vec<(usize, usize)> = (0..lambda.len())
        .flat_map(|i| (mu.part(i) as usize..lambda.part(i) as usize).rev().map(move |j| (i, j)))
        .collect();
    let mut grid: Vec<Vec<u32>> = (0..lambda.len()).map(|i| vec![0; lambda.part(i) as usize]).collect();
    let mut count = vec![0u32; nu.len() + 1];
    let v = fill(0, &cells, mu, nu, &mut grid, &mut count);
    memo().lock().unwrap().insert(key, v);
    v
}

fn fill(
    idx: usize,
    cells: &[(usize, usize)],
    mu: &Partition,
    nu: &Partition,
    grid: &mut Vec<Vec<u32>>,
    count: &mut Vec<u32>,
) -> u64 {
    if idx == cells.len() {
        return 1;
    }
    let (i, j) = cells[idx];
    // weakly increasing rows: bounded by the already placed right neighbour
    let hi = if j + 1 < grid[i].len() { grid[i][j + 1] } else { nu.len() as u32 };
    // strictly increasing columns
    let lo = if i > 0 && j >= mu.part(i - 1) as usize { grid[i - 1][j] + 1 } else { 1 };
    let mut total = 0;
    for v in lo..=hi {
        let vi = v as usize;
        if count[vi] >= nu.part(vi - 1) {
            continue;
        }
        if vi > 1 && count[vi] + 1 > count[vi - 1] {
            continue;
        }
        count[vi] += 1;
        grid[i][j] = v;
        total += fill(idx + 1, cells, mu, nu, grid, count);
        count[vi] -= 1;
    }
    grid[i][j] = 0;
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::p;

    #[test]
    fn known_values() {
        assert_eq!(lr_coefficient(&p(&[2, 1]), &p(&[1]), &p(&[1, 1])), 1);
        assert_eq!(lr_coefficient(&p(&[2, 1]), &p(&[1]), &p(&[2])), 1);
        assert_eq!(lr_coefficient(&p(&[3, 2, 1]), &p(&[2, 1]), &p(&[2, 1])), 2);
        assert_eq!(lr_coefficient(&p(&[4, 2, 2, 1]), &p(&[2, 1]), &p(&[3, 2, 1])), 2);
        assert_eq!(lr_coefficient(&p(&[2, 2]), &p(&[1]), &p(&[2])), 0);
        assert_eq!(lr_coefficient(&p(&[2]), &p(&[]), &p(&[2])), 1);
    }
}
