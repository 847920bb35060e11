use crate::qscalar::QScalar;

/// Minimal ring interface for cofactor determinants.
pub trait DetRing: Clone {
    fn zero_like(&self) -> Self;
    fn is_exact_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl DetRing for QScalar {
    fn zero_like(&self) -> Self {
        QScalar::zero(self.ring())
    }
    fn is_exact_zero(&self) -> bool {
        QScalar::is_exact_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// Determinant of an n x n matrix by expansion over column subsets.
///
/// `entry(i, j)` returns `None` for a structural zero. `one` is the empty
/// determinant. Division free, so truncated series lose no precision beyond
/// what the products themselves lose.
pub fn det<T: DetRing>(n: usize, one: &T, entry: impl Fn(usize, usize) -> Option<T>) -> T {
    if n == 0 {
        return one.clone();
    }
    assert!(n <= 20, "determinant too large");
    let m: Vec<Vec<Option<T>>> = (0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
    // d[mask]: minor on the last popcount(mask) rows and the columns in mask
    let mut d: Vec<Option<T>> = vec![None; 1 << n];
    d[0] = Some(one.clone());
    for mask in 1usize..(1 << n) {
        let k = mask.count_ones() as usize;
        let row = n - k;
        let mut acc: Option<T> = None;
        let mut pos = 0;
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            let sub = mask & !(1 << j);
            if let (Some(a), Some(minor)) = (&m[row][j], &d[sub]) {
                let t = a.mul(minor);
                acc = Some(match acc {
                    None if pos % 2 == 0 => t,
                    None => t.zero_like().sub(&t),
                    Some(s) if pos % 2 == 0 => s.add(&t),
                    Some(s) => s.sub(&t),
                });
            }
            pos += 1;
        }
        d[mask] = acc;
    }
    d[(1 << n) - 1].take().unwrap_or_else(|| one.zero_like())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::{int, Ring};

    #[test]
    fn integer_determinants() {
        let ring = Ring::new(1, 40).unwrap();
        let c = |x: i64| QScalar::from_int(ring, x);
        let one = c(1);
        let a = [[2, 1, 0], [1, 3, 1], [0, 1, 4]];
        let d = det(3, &one, |i, j| Some(c(a[i][j])));
        assert_eq!(d.as_constant(), Some(int(18)));
        let b = [[0, 1], [1, 0]];
        let d = det(2, &one, |i, j| if b[i][j] == 0 { None } else { Some(c(1)) });
        assert_eq!(d.as_constant(), Some(int(-1)));
    }
}
