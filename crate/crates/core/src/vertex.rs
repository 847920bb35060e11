//! The topological vertex C, the closed form of the Hodge coefficients
//! tildeC, and the identities relating the two.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::context::{Ctx, Mutation};
use crate::error::{Error, Result};
use crate::fock::{matrix_element, Op};
use crate::fock::checks::ctx_for_taus;
use crate::partition::{character_variant, partitions_of, partitions_up_to, CharacterRule, Partition};
use crate::qscalar::{format_rational, int, rat, QScalar, Rational};
use crate::report::{compare_with_widening, run_instances, CheckReport};
use crate::symfun::{lr_coefficient, schur_spec, skew_schur_spec, Specialization};

/// Three partitions attached to the legs of the vertex, in order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[Partition; 3]", into = "[Partition; 3]")]
pub struct Triple {
    pub mu1: Partition,
    pub mu2: Partition,
    pub mu3: Partition,
}

impl From<[Partition; 3]> for Triple {
    fn from([mu1, mu2, mu3]: [Partition; 3]) -> Self {
        Triple { mu1, mu2, mu3 }
    }
}

impl From<Triple> for [Partition; 3] {
    fn from(t: Triple) -> Self {
        [t.mu1, t.mu2, t.mu3]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.mu1, self.mu2, self.mu3)
    }
}

impl Triple {
    pub fn new(mu1: Partition, mu2: Partition, mu3: Partition) -> Self {
        Triple { mu1, mu2, mu3 }
    }

    pub fn empty() -> Self {
        Triple::new(Partition::empty(), Partition::empty(), Partition::empty())
    }

    pub fn weight(&self) -> u32 {
        self.mu1.weight() + self.mu2.weight() + self.mu3.weight()
    }

    pub fn kappa_sum(&self) -> i64 {
        self.mu1.kappa() + self.mu2.kappa() + self.mu3.kappa()
    }

    pub fn get(&self, a: usize) -> &Partition {
        match a % 3 {
            0 => &self.mu1,
            1 => &self.mu2,
            _ => &self.mu3,
        }
    }

    /// (mu2, mu3, mu1).
    pub fn rotate(&self) -> Self {
        Triple::new(self.mu2.clone(), self.mu3.clone(), self.mu1.clone())
    }
}

/// Every triple of total weight at most `n`, in canonical order.
pub fn triples_up_to(n: u32) -> Vec<Triple> {
    let all = partitions_up_to(n);
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            if a.weight() + b.weight() > n {
                continue;
            }
            for c in &all {
                if a.weight() + b.weight() + c.weight() <= n {
                    out.push(Triple::new(a.clone(), b.clone(), c.clone()));
                }
            }
        }
    }
    out
}

/// Every triple with |mu^(a)| <= `bound` for each leg.
pub fn triples_in_box(bound: u32) -> Vec<Triple> {
    let all = partitions_up_to(bound);
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            for c in &all {
                out.push(Triple::new(a.clone(), b.clone(), c.clone()));
            }
        }
    }
    out
}

/// C_mu(q) = q^{kappa(mu1)/2} s_{mu2^t}(q^{-rho})
///   sum_eta s_{mu1/eta}(q^{-mu2^t-rho}) s_{mu3^t/eta}(q^{-mu2-rho}).
pub fn vertex_c(t: &Triple, ctx: &Ctx) -> QScalar {
    let ring = ctx.ring;
    let m2t = t.mu2.conjugate();
    let m3t = t.mu3.conjugate();
    let a = Specialization::shifted(m2t.clone());
    let b = Specialization::shifted(t.mu2.clone());
    let mut sum = QScalar::zero(ring);
    for k in 0..=t.mu1.weight().min(m3t.weight()) {
        for eta in partitions_of(k) {
            if !t.mu1.contains(&eta) || !m3t.contains(&eta) {
                continue;
            }
            let x = skew_schur_spec(&t.mu1, &eta, &a, ring);
            let y = skew_schur_spec(&m3t, &eta, &b, ring);
            sum = &sum + &(&x * &y);
        }
    }
    let mut c = &schur_spec(&m2t, &Specialization::rho(), ring) * &sum;
    if !ctx.is(Mutation::DropFraming) {
        c = c.mul_q_pow(&rat(t.mu1.kappa(), 2)).expect("half-integer exponent");
    }
    c
}

/// The vertex read off the fermionic matrix element
/// q^{(1+tau)k1/2 - k2/(2 tau) + tau k3/(2(1+tau))} <mu1| G_{mu2^t}(tau) |mu3^t>.
///
/// `ctx` must carry a lattice fine enough for `tau`.
pub fn vertex_c_via_fock(t: &Triple, tau: &Rational, ctx: &Ctx) -> Result<QScalar> {
    let one = int(1);
    let g = Op::g_alpha(&t.mu2.conjugate(), tau, ctx.ring)?;
    let m = matrix_element(&g, &t.mu1, &t.mu3.conjugate(), ctx)?;
    let e = (&one + tau) * int(t.mu1.kappa()) / int(2) - int(t.mu2.kappa()) / (int(2) * tau)
        + tau * int(t.mu3.kappa()) / (int(2) * (&one + tau));
    m.mul_q_pow(&e)
}

/// sum over xi |- |eta1| of chi_{eta1}(xi) chi_{eta3}(2 xi) / z_xi.
pub fn quadratic_character_sum(eta1: &Partition, eta3: &Partition, rule: CharacterRule) -> Rational {
    let s = eta1.weight();
    if eta3.weight() != 2 * s {
        return int(0);
    }
    let mut total = int(0);
    for xi in partitions_of(s) {
        let a = character_variant(eta1, &xi, rule).expect("same weight");
        if a == 0 {
            continue;
        }
        let b = character_variant(eta3, &xi.double(), rule).expect("same weight");
        total += int(a * b) / Rational::from_integer((xi.z() as i64).into());
    }
    total
}

/// q^{kappa(nu+) + kappa(nu3)/4} s_{nu+}(q^{-rho}) s_{nu3}(q^{-nu+-rho}).
fn lllz_summand(nu_plus: &Partition, nu3: &Partition, ctx: &Ctx) -> QScalar {
    let ring = ctx.ring;
    let a = schur_spec(nu_plus, &Specialization::rho(), ring);
    let b = schur_spec(nu3, &Specialization::shifted(nu_plus.clone()), ring);
    (&a * &b)
        .mul_q_pow(&(int(nu_plus.kappa()) + rat(nu3.kappa(), 4)))
        .expect("quarter-integer exponent")
}

fn lllz_prefactor(t: &Triple) -> Rational {
    rat(t.mu1.kappa(), 2) - int(t.mu2.kappa()) - rat(t.mu3.kappa(), 4)
}

/// Partitions nu of weight |lambda| - |mu| with c^lambda_{mu nu} != 0.
fn lr_quotients(lambda: &Partition, mu: &Partition) -> Vec<(Partition, u64)> {
    if !lambda.contains(mu) {
        return Vec::new();
    }
    partitions_of(lambda.weight() - mu.weight())
        .into_iter()
        .filter(|nu| lambda.contains(nu))
        .filter_map(|nu| {
            let c = lr_coefficient(lambda, mu, &nu);
            (c != 0).then_some((nu, c))
        })
        .collect()
}

/// Partitions lambda of weight |mu| + |nu| with c^lambda_{mu nu} != 0.
fn lr_products(mu: &Partition, nu: &Partition) -> Vec<(Partition, u64)> {
    partitions_of(mu.weight() + nu.weight())
        .into_iter()
        .filter(|l| l.contains(mu) && l.contains(nu))
        .filter_map(|l| {
            let c = lr_coefficient(&l, mu, nu);
            (c != 0).then_some((l, c))
        })
        .collect()
}

/// The closed form of tildeC_mu as a sum over nu1, nu3, nu+, eta1, eta3,
/// pruned by the support of the Littlewood-Richardson numbers.
pub fn lllz_coefficient(t: &Triple, ctx: &Ctx) -> QScalar {
    let ring = ctx.ring;
    let rule = ctx.character_rule();
    let mut total = QScalar::zero(ring);
    let s_max = t.mu1.weight().min(t.mu3.weight() / 2);
    for s in 0..=s_max {
        for eta1 in partitions_of(s) {
            let eta1t = eta1.conjugate();
            let nu1s = lr_quotients(&t.mu1, &eta1t);
            if nu1s.is_empty() {
                continue;
            }
            for eta3 in partitions_of(2 * s) {
                let nu3ts = lr_quotients(&t.mu3, &eta3);
                if nu3ts.is_empty() {
                    continue;
                }
                let x = quadratic_character_sum(&eta1, &eta3, rule);
                if x == int(0) {
                    continue;
                }
                for (nu1, c1) in &nu1s {
                    for (nu_plus, c2) in lr_products(&nu1.conjugate(), &t.mu2) {
                        for (nu3t, c3) in &nu3ts {
                            let c = int((c1 * c2 * c3) as i64) * &x;
                            let v = lllz_summand(&nu_plus, &nu3t.conjugate(), ctx);
                            total = &total + &v.scale(&c);
                        }
                    }
                }
            }
        }
    }
    total.mul_q_pow(&lllz_prefactor(t)).expect("quarter-integer exponent")
}

/// tildeC_{(empty, nu+, nu3)} = q^{-kappa(nu3)/2} s_{nu+}(q^{-rho}) s_{nu3^t}(q^{-nu+-rho}).
pub fn two_partition_coefficient(nu_plus: &Partition, nu3: &Partition, ctx: &Ctx) -> QScalar {
    let ring = ctx.ring;
    let a = schur_spec(nu_plus, &Specialization::rho(), ring);
    let b = schur_spec(&nu3.conjugate(), &Specialization::shifted(nu_plus.clone()), ring);
    (&a * &b).mul_q_pow(&rat(-nu3.kappa(), 2)).expect("integer exponent")
}

/// q^{-sum kappa/2} C_mu, the right hand side of Theorem 1.
pub fn tilde_c_from_vertex(t: &Triple, ctx: &Ctx) -> QScalar {
    vertex_c(t, ctx).mul_q_pow(&rat(-t.kappa_sum(), 2)).expect("integer exponent")
}

fn ok_pair(a: QScalar, b: QScalar) -> Result<(QScalar, QScalar)> {
    Ok((a, b))
}

/// tildeC_mu = q^{-sum kappa/2} C_mu for every |mu| <= `weight_bound`.
pub fn verify_theorem1(weight_bound: u32, ctx: &Ctx) -> CheckReport {
    let mut r = CheckReport::new("theorem1").param("weight_bound", weight_bound);
    let ts = triples_up_to(weight_bound);
    run_instances(&mut r, &ts, |t| t.to_string(), |t| {
        compare_with_widening(ctx, |c| ok_pair(lllz_coefficient(t, c), tilde_c_from_vertex(t, c)))
    });
    r
}

/// Theorem 1 on every triple with each |mu^(a)| <= `bound`.
pub fn verify_theorem1_in_box(bound: u32, ctx: &Ctx) -> CheckReport {
    let mut r = CheckReport::new("theorem1_box").param("box_bound", bound);
    let ts = triples_in_box(bound);
    run_instances(&mut r, &ts, |t| t.to_string(), |t| {
        compare_with_widening(ctx, |c| ok_pair(lllz_coefficient(t, c), tilde_c_from_vertex(t, c)))
    });
    r
}

/// C_(mu1,mu2,mu3) = C_(mu2,mu3,mu1) for every |mu| <= `weight_bound`.
pub fn verify_cyclic(weight_bound: u32, ctx: &Ctx) -> CheckReport {
    let mut r = CheckReport::new("cyclic").param("weight_bound", weight_bound);
    let ts = triples_up_to(weight_bound);
    run_instances(&mut r, &ts, |t| t.to_string(), |t| {
        compare_with_widening(ctx, |c| ok_pair(vertex_c(t, c), vertex_c(&t.rotate(), c)))
    });
    r
}

/// Right hand side of the tau = 1 reduction for tildeC, with the
/// two-partition coefficients taken from the vertex.
pub fn reduction_rhs(t: &Triple, ctx: &Ctx) -> QScalar {
    let ring = ctx.ring;
    let rule = ctx.character_rule();
    let mut total = QScalar::zero(ring);
    for s in 0..=t.mu1.weight().min(t.mu3.weight() / 2) {
        for eta1 in partitions_of(s) {
            let nu1s = lr_quotients(&t.mu1, &eta1.conjugate());
            for eta3 in partitions_of(2 * s) {
                let nu3s = lr_quotients(&t.mu3, &eta3);
                let x = quadratic_character_sum(&eta1, &eta3, rule);
                if x == int(0) || nu1s.is_empty() || nu3s.is_empty() {
                    continue;
                }
                for (nu1, c1) in &nu1s {
                    for (nu_plus, c2) in lr_products(&nu1.conjugate(), &t.mu2) {
                        for (nu3, c3) in &nu3s {
                            let two = Triple::new(Partition::empty(), nu_plus.clone(), nu3.clone());
                            let e = int(nu_plus.kappa()) + rat(nu3.kappa(), 4);
                            let v = tilde_c_from_vertex(&two, ctx).mul_q_pow(&e).expect("lattice");
                            total = &total + &v.scale(&(int((c1 * c2 * c3) as i64) * &x));
                        }
                    }
                }
            }
        }
    }
    total
}

/// q^{-k1/2 + k2 + k3/4} tildeC_mu against the reduction sum.
pub fn verify_reduction_c(t: &Triple, ctx: &Ctx) -> CheckReport {
    let mut r = CheckReport::new("reduction_C").param("mu", t);
    r.record(
        t.to_string(),
        compare_with_widening(ctx, |c| {
            let lhs = lllz_coefficient(t, c).mul_q_pow(&-lllz_prefactor(t))?;
            ok_pair(lhs, reduction_rhs(t, c))
        }),
    );
    r
}

/// `verify_reduction_c` over every triple of total weight at most `weight_bound`.
pub fn verify_reduction_c_all(weight_bound: u32, ctx: &Ctx) -> CheckReport {
    let mut r = CheckReport::new("reduction_C").param("weight_bound", weight_bound);
    let ts = triples_up_to(weight_bound);
    run_instances(&mut r, &ts, |t| t.to_string(), |t| {
        compare_with_widening(ctx, |c| {
            let lhs = lllz_coefficient(t, c).mul_q_pow(&-lllz_prefactor(t))?;
            ok_pair(lhs, reduction_rhs(t, c))
        })
    });
    r
}

fn pairs_up_to(n: u32) -> Vec<(Partition, Partition)> {
    let all = partitions_up_to(n);
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            if a.weight() + b.weight() <= n {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// The closed form at mu1 = empty against the two-partition formula.
pub fn verify_two_partition_form(bound: u32, ctx: &Ctx) -> CheckReport {
    let mut r = CheckReport::new("two_partition_C").param("bound", bound);
    let ps = pairs_up_to(bound);
    run_instances(&mut r, &ps, |(a, b)| format!("nu+={a} nu3={b}"), |(a, b)| {
        let t = Triple::new(Partition::empty(), a.clone(), b.clone());
        compare_with_widening(ctx, |c| ok_pair(lllz_coefficient(&t, c), two_partition_coefficient(a, b, c)))
    });
    r
}

/// C_(nu+^t, 0, nu3) = C_(nu3, nu+^t, 0) = C_(0, nu3, nu+^t)
/// = q^{kappa(nu3)/2} s_{nu3}(q^{-nu+-rho}) s_{nu+}(q^{-rho}).
pub fn verify_two_legged_chain(bound: u32, ctx: &Ctx) -> CheckReport {
    let mut r = CheckReport::new("two_legged_chain").param("bound", bound);
    let ps = pairs_up_to(bound);
    let e = Partition::empty;
    let closed = |np: &Partition, n3: &Partition, c: &Ctx| {
        let ring = c.ring;
        let v = &schur_spec(n3, &Specialization::shifted(np.clone()), ring) * &schur_spec(np, &Specialization::rho(), ring);
        v.mul_q_pow(&rat(n3.kappa(), 2)).expect("integer exponent")
    };
    let mut inst = Vec::new();
    for (np, n3) in &ps {
        let npt = np.conjugate();
        let chain = [
            Triple::new(npt.clone(), e(), n3.clone()),
            Triple::new(n3.clone(), npt.clone(), e()),
            Triple::new(e(), n3.clone(), npt.clone()),
        ];
        for t in chain {
            inst.push((np.clone(), n3.clone(), t));
        }
    }
    run_instances(
        &mut r,
        &inst,
        |(np, n3, t)| format!("nu+={np} nu3={n3}: C{t}"),
        |(np, n3, t)| compare_with_widening(ctx, |c| ok_pair(vertex_c(t, c), closed(np, n3, c))),
    );
    r
}

/// s_a(q^{-rho}) s_b(q^{-a-rho}) = s_a(q^{-b-rho}) s_b(q^{-rho}).
pub fn verify_two_legged_identity(bound: u32, ctx: &Ctx) -> CheckReport {
    let mut r = CheckReport::new("two_legged_identity").param("bound", bound);
    let ps = pairs_up_to(bound);
    run_instances(&mut r, &ps, |(a, b)| format!("alpha={a} beta={b}"), |(a, b)| {
        compare_with_widening(ctx, |c| {
            let ring = c.ring;
            let rho = Specialization::rho();
            let l = &schur_spec(a, &rho, ring) * &schur_spec(b, &Specialization::shifted(a.clone()), ring);
            let rr = &schur_spec(a, &Specialization::shifted(b.clone()), ring) * &schur_spec(b, &rho, ring);
            ok_pair(l, rr)
        })
    });
    r
}

/// C_mu from the fermionic matrix element at each tau, against the
/// Schur-function definition.
pub fn verify_tau_independence(weight_bound: u32, taus: &[Rational], ctx: &Ctx) -> Result<CheckReport> {
    let c = ctx_for_taus(ctx, taus)?;
    let tau_names: Vec<String> = taus.iter().map(format_rational).collect();
    let mut r = CheckReport::new("tau_independence")
        .param("weight_bound", weight_bound)
        .param("taus", &tau_names);
    let mut inst = Vec::new();
    for t in triples_up_to(weight_bound) {
        for tau in taus {
            inst.push((t.clone(), tau.clone()));
        }
    }
    run_instances(
        &mut r,
        &inst,
        |(t, tau)| format!("{t} tau={}", format_rational(tau)),
        |(t, tau)| compare_with_widening(&c, |c| Ok((vertex_c_via_fock(t, tau, c)?, vertex_c(t, c)))),
    );
    Ok(r)
}

/// Parses `[[..],[..],[..]]`.
pub fn parse_triple(s: &str) -> Result<Triple> {
    serde_json::from_str::<Triple>(s).map_err(|e| Error::InvalidArgument(format!("triple {s:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::p;
    use crate::qscalar::Ring;
    use crate::symfun::agree;

    fn ctx() -> Ctx {
        Ctx::new(Ring::new(1, 40).unwrap())
    }

    fn t(a: &[u32], b: &[u32], c: &[u32]) -> Triple {
        Triple::new(p(a), p(b), p(c))
    }

    fn q_half_over_one_minus_q(ctx: &Ctx) -> QScalar {
        QScalar::geometric_sum(ctx.ring, &rat(1, 2), &int(1)).unwrap()
    }

    #[test]
    fn single_box_values() {
        let c = ctx();
        assert_eq!(vertex_c(&Triple::empty(), &c).as_constant(), Some(int(1)));
        assert_eq!(lllz_coefficient(&Triple::empty(), &c).as_constant(), Some(int(1)));
        let want = q_half_over_one_minus_q(&c);
        for tr in [t(&[1], &[], &[]), t(&[], &[1], &[]), t(&[], &[], &[1])] {
            assert!(agree(&vertex_c(&tr, &c), &want, 20).unwrap(), "{tr}");
            assert!(agree(&lllz_coefficient(&tr, &c), &want, 20).unwrap(), "{tr}");
        }
    }

    #[test]
    fn two_leg_examples() {
        let c = ctx();
        for (np, n3) in [(p(&[1]), p(&[2])), (p(&[2, 1]), p(&[1])), (p(&[2]), p(&[1, 1]))] {
            let two = Triple::new(Partition::empty(), np.clone(), n3.clone());
            let a = lllz_coefficient(&two, &c);
            assert!(agree(&a, &two_partition_coefficient(&np, &n3, &c), 20).unwrap());
        }
        let r = verify_two_legged_chain(3, &c);
        assert!(r.passed(), "{:?}", r.failures);
        let r = verify_two_legged_identity(4, &c);
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn theorem1_and_cyclic_small() {
        let c = ctx();
        let r = verify_theorem1(3, &c);
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.pairs_checked, triples_up_to(3).len());
        let r = verify_cyclic(3, &c);
        assert!(r.passed(), "{:?}", r.failures);
        for tr in [Triple::empty(), t(&[], &[1], &[1]), t(&[1], &[1], &[])] {
            assert!(verify_reduction_c(&tr, &c).passed(), "{tr}");
        }
    }

    #[test]
    fn dropped_framing_breaks_theorem1() {
        let c = ctx().with_mutation(Some(Mutation::DropFraming));
        assert!(!verify_theorem1(2, &c).passed());
    }

    #[test]
    fn fermionic_vertex() {
        let c = ctx();
        let r = verify_tau_independence(2, &[int(1), int(2), rat(1, 2)], &c).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn triple_json() {
        let tr = parse_triple("[[2],[1],[]]").unwrap();
        assert_eq!(tr, t(&[2], &[1], &[]));
        assert_eq!(serde_json::to_string(&tr).unwrap(), "[[2],[1],[]]");
        assert!(parse_triple("[[1,2],[],[]]").is_err());
        assert_eq!(triples_up_to(1).len(), 4);
    }
}
