//! Symmetric functions at the specializations x_i = q^{-nu_i + i - 1/2},
//! Littlewood-Richardson coefficients and polynomials in power sums.

mod det;
mod lr;
mod poly;
mod times;

pub use det::{det, DetRing};
pub use lr::lr_coefficient;
pub use poly::{Family, Monomial, SeriesPoly};
pub use times::{h_times, p_to_t, power_sum_monomial, schur_in_p, schur_in_times, schur_in_times_by_characters};

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::partition::Partition;
use crate::qscalar::{int, QScalar, Rational, Ring};

/// The alphabet q^{-nu-rho}. With `primed` set, skew Schur functions are
/// read through the transpose, as matrix elements of the primed vertex
/// operators require.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Specialization {
    pub prefix: Partition,
    pub primed: bool,
}

impl Specialization {
    /// q^{-rho}.
    pub fn rho() -> Self {
        Self::shifted(Partition::empty())
    }

    /// q^{-nu-rho}.
    pub fn shifted(nu: Partition) -> Self {
        Specialization { prefix: nu, primed: false }
    }

    pub fn primed(nu: Partition) -> Self {
        Specialization { prefix: nu, primed: true }
    }

    /// Exponent of x_i (1-based) in lattice units.
    fn variable_units(&self, ring: Ring, i: usize) -> i64 {
        let nu_i = self.prefix.part(i - 1) as i64;
        ring.lattice as i64 * (2 * (i as i64 - nu_i) - 1)
    }
}

type Key = (Ring, u32, Partition);

struct Caches {
    poch: Mutex<HashMap<(Ring, u32), QScalar>>,
    h: Mutex<HashMap<Key, QScalar>>,
    e: Mutex<HashMap<Key, QScalar>>,
    skew: Mutex<HashMap<(Ring, Partition, Partition, Partition), QScalar>>,
}

fn caches() -> &'static Caches {
    static C: OnceLock<Caches> = OnceLock::new();
    C.get_or_init(|| Caches {
        poch: Mutex::new(HashMap::new()),
        h: Mutex::new(HashMap::new()),
        e: Mutex::new(HashMap::new()),
        skew: Mutex::new(HashMap::new()),
    })
}

/// Drops every memoized specialization (all rings).
pub fn clear_caches() {
    let c = caches();
    c.poch.lock().unwrap().clear();
    c.h.lock().unwrap().clear();
    c.e.lock().unwrap().clear();
    c.skew.lock().unwrap().clear();
}

/// 1 / (q;q)_r.
pub fn inv_q_pochhammer(ring: Ring, r: u32) -> QScalar {
    if let Some(v) = caches().poch.lock().unwrap().get(&(ring, r)) {
        return v.clone();
    }
    let v = if r == 0 {
        QScalar::one(ring)
    } else {
        let g = QScalar::geometric_sum(ring, &int(0), &int(r as i64)).expect("integer step");
        &inv_q_pochhammer(ring, r - 1) * &g
    };
    caches().poch.lock().unwrap().insert((ring, r), v.clone());
    v
}

/// Complete (or elementary) symmetric polynomials of degree 0..=m in the
/// finitely many variables u^{a_i}, as exact Laurent polynomials.
fn prefix_polys(ring: Ring, exps: &[i64], m: u32, elementary: bool) -> Vec<QScalar> {
    let mut cur: Vec<QScalar> = (0..=m)
        .map(|j| if j == 0 { QScalar::one(ring) } else { QScalar::zero(ring) })
        .collect();
    for &a in exps {
        let mut next = cur.clone();
        for j in 1..=m as usize {
            if elementary {
                // e_j(X, x) = e_j(X) + x e_{j-1}(X)
                next[j] = &cur[j] + &cur[j - 1].shift(a);
            } else {
                // h_j(X, x) = h_j(X) + x h_{j-1}(X, x)
                next[j] = &cur[j] + &next[j - 1].shift(a);
            }
        }
        cur = next;
    }
    cur
}

fn spec_hm(m: u32, nu: &Partition, ring: Ring, elementary: bool) -> QScalar {
    let key = (ring, m, nu.clone());
    let cache = if elementary { &caches().e } else { &caches().h };
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return v.clone();
    }
    let l = nu.len();
    let sp = Specialization::shifted(nu.clone());
    let exps: Vec<i64> = (1..=l).map(|i| sp.variable_units(ring, i)).collect();
    let pre = prefix_polys(ring, &exps, m, elementary);
    // tail prod_{i > l} (1 -+ q^{i - 1/2} z)^{-+1} by Euler's identities
    let lat = ring.lattice as i64;
    let mut total = QScalar::zero(ring);
    for r in 0..=m {
        let ri = r as i64;
        let mut e = ri * lat * (2 * l as i64 + 1);
        if elementary {
            e += ri * (ri - 1) * lat;
        }
        let tail = inv_q_pochhammer(ring, r).shift(e);
        total = &total + &(&pre[(m - r) as usize] * &tail);
    }
    cache.lock().unwrap().insert(key, total.clone());
    total
}

/// h_m(q^{-nu-rho}).
pub fn h_spec(m: u32, nu: &Partition, ring: Ring) -> QScalar {
    spec_hm(m, nu, ring, false)
}

/// e_m(q^{-nu-rho}).
pub fn e_spec(m: u32, nu: &Partition, ring: Ring) -> QScalar {
    spec_hm(m, nu, ring, true)
}

/// s_{lambda/mu}(x) at the alphabet `spec`; transposed shapes when primed.
pub fn skew_schur_spec(lambda: &Partition, mu: &Partition, spec: &Specialization, ring: Ring) -> QScalar {
    if spec.primed {
        skew_unprimed(&lambda.conjugate(), &mu.conjugate(), &spec.prefix, ring)
    } else {
        skew_unprimed(lambda, mu, &spec.prefix, ring)
    }
}

pub fn schur_spec(lambda: &Partition, spec: &Specialization, ring: Ring) -> QScalar {
    skew_schur_spec(lambda, &Partition::empty(), spec, ring)
}

fn skew_unprimed(lambda: &Partition, mu: &Partition, nu: &Partition, ring: Ring) -> QScalar {
    if !lambda.contains(mu) {
        return QScalar::zero(ring);
    }
    let key = (ring, lambda.clone(), mu.clone(), nu.clone());
    if let Some(v) = caches().skew.lock().unwrap().get(&key) {
        return v.clone();
    }
    // Jacobi-Trudi in h, or its dual in e when that matrix is smaller
    let (a, b, elementary) = if lambda.part(0) as usize >= lambda.len() {
        (lambda.clone(), mu.clone(), false)
    } else {
        (lambda.conjugate(), mu.conjugate(), true)
    };
    let n = a.len();
    let one = QScalar::one(ring);
    let v = det(n, &one, |i, j| {
        let d = a.part(i) as i64 - b.part(j) as i64 - i as i64 + j as i64;
        match d {
            d if d < 0 => None,
            0 => Some(one.clone()),
            d => Some(spec_hm(d as u32, nu, ring, elementary)),
        }
    });
    caches().skew.lock().unwrap().insert(key, v.clone());
    v
}

/// s_lambda(q^{-rho}) from the hook-content formula
/// q^{n(lambda) + |lambda|/2} / prod (1 - q^h).
pub fn schur_principal_hook(lambda: &Partition, ring: Ring) -> QScalar {
    let e = Rational::from_integer((lambda.n() as i64).into()) + crate::qscalar::rat(lambda.weight() as i64, 2);
    let mut v = QScalar::q_monomial(ring, &e).expect("half-integer exponent");
    for h in lambda.hooks() {
        let g = QScalar::geometric_sum(ring, &int(0), &int(h as i64)).expect("integer step");
        v = &v * &g;
    }
    v
}

/// Helper for tests and oracles: true when the two values agree on a
/// window of at least `min_width` lattice units.
pub fn agree(a: &QScalar, b: &QScalar, min_width: i64) -> Result<bool> {
    Ok(a.agree_on_common_window(b, min_width)?.is_equal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{p, partitions_of};

    fn ring() -> Ring {
        Ring::new(1, 60).unwrap()
    }

    #[test]
    fn principal_matches_hook_formula() {
        let r = ring();
        for n in 0..7 {
            for l in partitions_of(n) {
                let a = schur_spec(&l, &Specialization::rho(), r);
                let b = schur_principal_hook(&l, r);
                assert!(agree(&a, &b, 30).unwrap(), "{l}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn first_values() {
        let r = ring();
        let s1 = schur_spec(&p(&[1]), &Specialization::rho(), r);
        let want = QScalar::geometric_sum(r, &crate::qscalar::rat(1, 2), &int(1)).unwrap();
        assert!(agree(&s1, &want, 30).unwrap());
        // h_1(q^{-(1)-rho}) = q^{-1/2} + q^{3/2}/(1-q)
        let h = h_spec(1, &p(&[1]), r);
        assert_eq!(h.coeff(-1), Some(int(1)));
        assert_eq!(h.coeff(1), Some(int(0)));
        assert_eq!(h.coeff(3), Some(int(1)));
        assert_eq!(h.coeff(5), Some(int(1)));
    }

    #[test]
    fn h_and_e_are_inverse_series() {
        // sum_k (-1)^k e_k h_{m-k} = 0 for m >= 1
        let r = ring();
        for nu in [p(&[]), p(&[2, 1]), p(&[3])] {
            for m in 1..5u32 {
                let mut s = QScalar::zero(r);
                for k in 0..=m {
                    let t = &e_spec(k, &nu, r) * &h_spec(m - k, &nu, r);
                    s = if k % 2 == 0 { &s + &t } else { &s - &t };
                }
                assert!(s.has_no_terms(), "{nu} {m}: {s}");
            }
        }
    }

    #[test]
    fn primed_is_transpose() {
        let r = ring();
        let nu = p(&[2]);
        let a = skew_schur_spec(&p(&[2, 1]), &p(&[1]), &Specialization::primed(nu.clone()), r);
        let b = skew_schur_spec(&p(&[2, 1]), &p(&[1]), &Specialization::shifted(nu), r);
        assert!(agree(&a, &b, 30).unwrap());
        assert!(skew_schur_spec(&p(&[1]), &p(&[2]), &Specialization::rho(), r).is_exact_zero());
    }
}
