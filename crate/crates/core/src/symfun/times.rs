use num_bigint::BigInt;
use num_rational::BigRational;

use super::det::det;
use super::poly::{Family, SeriesPoly};
use crate::partition::{character, partitions_of, Partition};
use crate::qscalar::{int, QScalar, Rational, Ring};

fn t_base(ring: Ring, cutoff: u32) -> SeriesPoly {
    SeriesPoly::zero(ring, &[Family::T], &[cutoff])
}

fn recip(n: u128) -> Rational {
    BigRational::new(BigInt::from(1), BigInt::from(n))
}

/// h_m[t], defined by sum_m h_m z^m = exp(sum_k t_k z^k).
pub fn h_times(m: u32, ring: Ring, cutoff: u32) -> SeriesPoly {
    let mut p = t_base(ring, cutoff);
    for nu in partitions_of(m) {
        p.insert(vec![nu.clone()], QScalar::constant(ring, &recip(nu.aut_size())));
    }
    p
}

/// s_alpha[t] by the Jacobi-Trudi determinant in the h_m[t].
pub fn schur_in_times(alpha: &Partition, ring: Ring, cutoff: u32) -> SeriesPoly {
    let one = t_base(ring, cutoff).one_like();
    if alpha.weight() > cutoff {
        return one.zero_like();
    }
    let n = alpha.len();
    det(n, &one, |i, j| {
        let d = alpha.part(i) as i64 - i as i64 + j as i64;
        match d {
            d if d < 0 => None,
            0 => Some(one.clone()),
            d => Some(h_times(d as u32, ring, cutoff)),
        }
    })
}

/// p_nu written in the times, p_k = k t_k.
pub fn p_to_t(nu: &Partition) -> Rational {
    int(nu.parts().iter().map(|&k| k as i64).product())
}

/// s_alpha[t] through characters, s_alpha = sum_nu chi_alpha(nu) p_nu / z_nu.
pub fn schur_in_times_by_characters(alpha: &Partition, ring: Ring, cutoff: u32) -> SeriesPoly {
    let mut p = t_base(ring, cutoff);
    for nu in partitions_of(alpha.weight()) {
        let chi = character(alpha, &nu).expect("same weight");
        let c = int(chi) * p_to_t(&nu) * recip(nu.z());
        p.insert(vec![nu.clone()], QScalar::constant(ring, &c));
    }
    p
}

/// The monomial p_nu of one family inside the polynomial ring of `base`.
pub fn power_sum_monomial(base: &SeriesPoly, family: Family, nu: &Partition, c: QScalar) -> SeriesPoly {
    let i = base.family_index(family).expect("family present");
    let mut m = base.empty_monomial();
    m[i] = nu.clone();
    base.monomial(m, c)
}

/// s_alpha(p) as a polynomial in the power sums of `family`.
pub fn schur_in_p(alpha: &Partition, base: &SeriesPoly, family: Family) -> SeriesPoly {
    let ring = base.ring();
    let mut out = base.zero_like();
    for nu in partitions_of(alpha.weight()) {
        let chi = character(alpha, &nu).expect("same weight");
        if chi == 0 {
            continue;
        }
        let c = int(chi) * recip(nu.z());
        out = out.add(&power_sum_monomial(base, family, &nu, QScalar::constant(ring, &c)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_up_to;

    #[test]
    fn jacobi_trudi_matches_characters() {
        let ring = Ring::new(1, 10).unwrap();
        for a in partitions_up_to(6) {
            let x = schur_in_times(&a, ring, 6);
            let y = schur_in_times_by_characters(&a, ring, 6);
            assert!(x.first_mismatch(&y, 1).unwrap().is_none(), "{a}");
        }
    }
}
