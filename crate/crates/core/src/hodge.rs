//! Generating series of three-partition Hodge integrals in the power sums
//! p^(1), p^(2), p^(3), and the identities they satisfy.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use crate::context::{Ctx, Mutation};
use crate::error::{Error, Result};
use crate::fock::checks::ctx_for_taus;
use crate::fock::{matrix_element, Op};
use crate::partition::{partitions_of, partitions_up_to, Partition};
use crate::qscalar::{format_rational, int, rat, QScalar, Rational};
use crate::report::{CheckReport, Outcome, WIDENINGS, WIDEN_FACTOR};
use crate::symfun::{lr_coefficient, schur_in_p, Family, Monomial, SeriesPoly};
use crate::vertex::{lllz_coefficient, quadratic_character_sum, vertex_c, Triple};

pub const FAMILIES: [Family; 3] = [Family::P1, Family::P2, Family::P3];

/// Empty series in p^(1), p^(2), p^(3) with per-family weight cutoffs.
pub fn tri_base(ctx: &Ctx, cutoffs: [u32; 3]) -> SeriesPoly {
    SeriesPoly::zero(ctx.ring, &FAMILIES, &cutoffs)
}

/// w_{a+1}/w_a for w = (1, tau, -1-tau), a = 1, 2, 3.
pub fn framing_ratios(tau: &Rational, ctx: &Ctx) -> Result<[Rational; 3]> {
    let one = int(1);
    if tau.is_integer() && (*tau == int(0) || *tau == int(-1)) {
        return Err(Error::InvalidArgument("tau must avoid 0 and -1".into()));
    }
    let w3 = -(&one + tau);
    let w3_over_w2 = if ctx.is(Mutation::PerturbTau) {
        &w3 / (tau + &one)
    } else {
        &w3 / tau
    };
    Ok([tau.clone(), w3_over_w2, &one / &w3])
}

/// prod_a s_{mu^(a)}(p^(a)) inside `base`.
fn schur_product(base: &SeriesPoly, t: &Triple) -> SeriesPoly {
    let mut acc = base.one_like();
    for (a, f) in FAMILIES.iter().enumerate() {
        let i = base.family_index(*f).expect("family present");
        if t.get(a).weight() > base.cutoffs()[i] {
            return base.zero_like();
        }
        acc = acc.mul(&schur_in_p(t.get(a), base, *f));
    }
    acc
}

fn triples_for(cutoffs: [u32; 3]) -> Vec<Triple> {
    let mut out = Vec::new();
    for a in partitions_up_to(cutoffs[0]) {
        for b in partitions_up_to(cutoffs[1]) {
            for c in partitions_up_to(cutoffs[2]) {
                out.push(Triple::new(a.clone(), b.clone(), c.clone()));
            }
        }
    }
    out
}

fn sum_over_triples(
    ctx: &Ctx,
    cutoffs: [u32; 3],
    coeff: impl Fn(&Triple, &Ctx) -> Result<QScalar> + Sync,
) -> Result<SeriesPoly> {
    use rayon::prelude::*;
    let base = tri_base(ctx, cutoffs);
    let ts = triples_for(cutoffs);
    let parts: Vec<Result<SeriesPoly>> = ts
        .par_iter()
        .map(|t| Ok(schur_product(&base, t).scale(&coeff(t, ctx)?)))
        .collect();
    let mut out = base.zero_like();
    for p in parts {
        out = out.add(&p?);
    }
    Ok(out)
}

/// Context whose lattice carries the framing exponents at `tau`.
pub fn ctx_for_tau(ctx: &Ctx, tau: &Rational) -> Result<Ctx> {
    ctx_for_taus(ctx, std::slice::from_ref(tau))
}

/// exp G(p; tau) = sum_mu tildeC_mu q^{-(1/2) sum_a kappa(mu^(a)) w_{a+1}/w_a} prod_a s_{mu^(a)}(p^(a)).
pub fn expg_series(tau: &Rational, cutoffs: [u32; 3], ctx: &Ctx) -> Result<SeriesPoly> {
    let c = ctx_for_tau(ctx, tau)?;
    let r = framing_ratios(tau, &c)?;
    sum_over_triples(&c, cutoffs, |t, c| {
        let e = framing_exponent(t, &r, false);
        lllz_coefficient(t, c).mul_q_pow(&e)
    })
}

/// W(q; x, y, z; tau) = sum_mu C_mu q^{-(1/2) sum_a kappa(mu^(a))(1 + w_{a+1}/w_a)} s s s.
pub fn w_series(tau: &Rational, cutoffs: [u32; 3], ctx: &Ctx) -> Result<SeriesPoly> {
    let c = ctx_for_tau(ctx, tau)?;
    // the vertex side never sees the perturbed framing
    let r = framing_ratios(tau, &c.with_mutation(None))?;
    sum_over_triples(&c, cutoffs, |t, c| {
        let e = framing_exponent(t, &r, true);
        vertex_c(t, c).mul_q_pow(&e)
    })
}

fn framing_exponent(t: &Triple, r: &[Rational; 3], shifted: bool) -> Rational {
    let one = int(1);
    let mut e = int(0);
    for (a, ra) in r.iter().enumerate() {
        let f = if shifted { &one + ra } else { ra.clone() };
        e -= int(t.get(a).kappa()) * f / int(2);
    }
    e
}

/// exp(sum_m (-1)^{m+1}/m p1_m p3_{m(N+1)}).
pub fn anomaly_series(base: &SeriesPoly, n: u32) -> Result<SeriesPoly> {
    let ring = base.ring();
    let c1 = base.cutoffs()[base.family_index(Family::P1).expect("p1")];
    let c3 = base.cutoffs()[base.family_index(Family::P3).expect("p3")];
    let mut x = base.zero_like();
    let mut m = 1;
    while m <= c1 && m * (n + 1) <= c3 {
        let sign = if m % 2 == 1 { 1 } else { -1 };
        let term = base
            .variable(Family::P1, m, QScalar::constant(ring, &rat(sign, m as i64)))
            .mul(&base.variable(Family::P3, m * (n + 1), QScalar::one(ring)));
        x = x.add(&term);
        m += 1;
    }
    x.exp()
}

/// p+_k at tau = N: (-1)^{k+1} N p1_{k/N} + p2_k when N | k, else p2_k.
pub fn p_plus(base: &SeriesPoly, n: u32, k: u32, ctx: &Ctx) -> SeriesPoly {
    let ring = base.ring();
    let mut out = base.variable(Family::P2, k, QScalar::one(ring));
    if k % n == 0 {
        let odd = k % 2 == 1;
        let plus = odd != ctx.is(Mutation::WrongPPlus);
        let s = if plus { n as i64 } else { -(n as i64) };
        out = out.add(&base.variable(Family::P1, k / n, QScalar::from_int(ring, s)));
    }
    out
}

/// exp G(0, p+, p3; N) exp(sum_m (-1)^{m+1}/m p1_m p3_{m(N+1)}).
pub fn reduction_rhs(n: u32, cutoffs: [u32; 3], ctx: &Ctx) -> Result<SeriesPoly> {
    let tau = int(n as i64);
    let c = ctx_for_tau(ctx, &tau)?;
    let wide = cutoffs[1] + n * cutoffs[0];
    let source = expg_series(&tau, [0, wide, cutoffs[2]], &c)?;
    let target = tri_base(&c, cutoffs);
    let sub = source.substitute(&target, |f, k| match f {
        Family::P2 => p_plus(&target, n, k, &c),
        other => target.variable(other, k, QScalar::one(c.ring)),
    });
    Ok(sub.mul(&anomaly_series(&target, n)?))
}

fn monomial_label(families: &[Family], m: &Monomial) -> String {
    let parts: Vec<String> = families
        .iter()
        .zip(m)
        .filter(|(_, p)| !p.is_empty())
        .map(|(f, p)| format!("{f}{p}"))
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

/// Compares two series coefficient by coefficient. Coefficients whose
/// common window is too narrow are recomputed with a wider window.
pub fn compare_series(
    report: &mut CheckReport,
    ctx: &Ctx,
    label: &str,
    build: impl Fn(&Ctx) -> Result<(SeriesPoly, SeriesPoly)>,
) {
    let mut c = *ctx;
    let mut pending: Option<BTreeSet<Monomial>> = None;
    let mut last = String::new();
    let mut fams: Vec<Family> = FAMILIES.to_vec();
    for attempt in 0..=WIDENINGS {
        if attempt > 0 {
            c = c.with_window(c.ring.window * WIDEN_FACTOR);
        }
        let (a, b) = match build(&c) {
            Ok(x) => x,
            Err(e @ (Error::Inconclusive(_) | Error::CutoffExceeded(_))) => {
                last = e.to_string();
                continue;
            }
            Err(e) => {
                report.record(label.to_string(), Outcome::fail(e.to_string()));
                return;
            }
        };
        fams = a.families().to_vec();
        let keys: BTreeSet<Monomial> = match &pending {
            Some(p) => p.clone(),
            None => a.terms().chain(b.terms()).map(|(m, _)| m.clone()).filter(|m| a.fits(m) && b.fits(m)).collect(),
        };
        let mut next = BTreeSet::new();
        for m in keys {
            let (x, y) = (a.coeff(&m), b.coeff(&m));
            let name = format!("{label}{}", monomial_label(a.families(), &m));
            match x.agree_on_common_window(&y, c.min_width) {
                Ok(g) if g.is_equal() => report.record(name, Outcome::Pass),
                Ok(g) => report.record(
                    name,
                    Outcome::Fail {
                        lhs: Some(x.to_string()),
                        rhs: Some(y.to_string()),
                        detail: Some(format!("{g:?}")),
                    },
                ),
                Err(Error::Inconclusive(why)) => {
                    last = why;
                    next.insert(m);
                }
                Err(e) => report.record(name, Outcome::fail(e.to_string())),
            }
        }
        if next.is_empty() {
            return;
        }
        pending = Some(next);
    }
    match pending {
        Some(p) => {
            for m in p {
                let name = format!("{label}{}", monomial_label(&fams, &m));
                report.record(name, Outcome::Inconclusive(last.clone()));
            }
        }
        None => report.record(label.to_string(), Outcome::Inconclusive(last)),
    }
}

fn tau_param(tau: &Rational) -> String {
    format_rational(tau)
}

/// W(tau) = exp G(tau) termwise.
pub fn verify_generating_theorem1(tau: &Rational, cutoffs: [u32; 3], ctx: &Ctx) -> Result<CheckReport> {
    let c = ctx_for_tau(ctx, tau)?;
    let mut r = CheckReport::new("W=expG").param("tau", tau_param(tau)).param("cutoffs", cutoffs);
    compare_series(&mut r, &c, "", |c| Ok((w_series(tau, cutoffs, c)?, expg_series(tau, cutoffs, c)?)));
    Ok(r)
}

/// exp G(p1,p2,p3; N) = exp G(0,p+,p3; N) exp(sum (-1)^{m+1}/m p1_m p3_{m(N+1)}).
pub fn verify_reduction_taun(n: u32, cutoffs: [u32; 3], ctx: &Ctx) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let tau = int(n as i64);
    let c = ctx_for_tau(ctx, &tau)?;
    let mut r = CheckReport::new(format!("reduction_tau{n}")).param("N", n).param("cutoffs", cutoffs);
    compare_series(&mut r, &c, "", |c| Ok((expg_series(&tau, cutoffs, c)?, reduction_rhs(n, cutoffs, c)?)));
    Ok(r)
}

pub fn verify_reduction_tau1(cutoffs: [u32; 3], ctx: &Ctx) -> Result<CheckReport> {
    verify_reduction_taun(1, cutoffs, ctx)
}

/// exp(sum (-1)^{m+1}/m p_m(x) p_{2m}(z)) against its Schur expansion
/// sum s_{eta1^t}(x) s_{eta3}(z) sum_xi chi_{eta1}(xi) chi_{eta3}(2 xi)/z_xi.
pub fn verify_quadratic_expansion(cx: u32, cz: u32, ctx: &Ctx) -> Result<CheckReport> {
    let mut r = CheckReport::new("quadratic_expansion").param("cutoffs", [cx, cz]);
    compare_series(&mut r, ctx, "", |c| {
        let base = SeriesPoly::zero(c.ring, &[Family::P1, Family::P3], &[cx, cz]);
        let lhs = anomaly_series_two(&base)?;
        let mut rhs = base.zero_like();
        for s in 0..=cx.min(cz / 2) {
            for eta1 in partitions_of(s) {
                for eta3 in partitions_of(2 * s) {
                    let x = quadratic_character_sum(&eta1, &eta3, c.character_rule());
                    if x == int(0) {
                        continue;
                    }
                    let term = schur_in_p(&eta1.conjugate(), &base, Family::P1).mul(&schur_in_p(&eta3, &base, Family::P3));
                    rhs = rhs.add(&term.scale_rational(&x));
                }
            }
        }
        Ok((lhs, rhs))
    });
    Ok(r)
}

fn anomaly_series_two(base: &SeriesPoly) -> Result<SeriesPoly> {
    let ring = base.ring();
    let mut x = base.zero_like();
    let (cx, cz) = (base.cutoffs()[0], base.cutoffs()[1]);
    let mut m = 1;
    while m <= cx && 2 * m <= cz {
        let sign = if m % 2 == 1 { 1 } else { -1 };
        x = x.add(
            &base
                .variable(Family::P1, m, QScalar::constant(ring, &rat(sign, m as i64)))
                .mul(&base.variable(Family::P3, 2 * m, QScalar::one(ring))),
        );
        m += 1;
    }
    x.exp()
}

/// <0| Gamma_+(x) Gamma'_+(y) G_0(1) Gamma_-(z) |0> in the power sums,
/// one Fock matrix element per monomial.
pub fn fermionic_series(cutoffs: [u32; 3], ctx: &Ctx) -> Result<SeriesPoly> {
    use rayon::prelude::*;
    let base = tri_base(ctx, cutoffs);
    let g = Op::g_alpha(&Partition::empty(), &int(1), ctx.ring)?;
    let ts = triples_for(cutoffs);
    let vals: Vec<Result<(Monomial, QScalar)>> = ts
        .par_iter()
        .map(|t| {
            let mut ops: Vec<Op> = Vec::new();
            for &k in t.mu1.parts().iter().chain(t.mu2.parts()) {
                ops.push(Op::j(k as i64));
            }
            ops.push(g.clone());
            for &k in t.mu3.parts() {
                ops.push(Op::j(-(k as i64)));
            }
            let e = Partition::empty();
            let v = matrix_element(&Op::Product(ops), &e, &e, ctx)?;
            let sign = if (t.mu2.weight() as usize - t.mu2.len()) % 2 == 0 { 1 } else { -1 };
            let z = t.mu1.z() * t.mu2.z() * t.mu3.z();
            let c = Rational::new(sign.into(), (z as i64).into());
            Ok((vec![t.mu1.clone(), t.mu2.clone(), t.mu3.clone()], v.scale(&c)))
        })
        .collect();
    let mut out = base.zero_like();
    for v in vals {
        let (m, c) = v?;
        out.insert(m, c);
    }
    Ok(out)
}

/// s_{lambda/mu}(p) in the power sums of `family`.
fn skew_schur_in_p(lambda: &Partition, mu: &Partition, base: &SeriesPoly, family: Family) -> SeriesPoly {
    let mut out = base.zero_like();
    if !lambda.contains(mu) {
        return out;
    }
    for nu in partitions_of(lambda.weight() - mu.weight()) {
        let c = lr_coefficient(lambda, mu, &nu);
        if c != 0 {
            out = out.add(&schur_in_p(&nu, base, family).scale_rational(&int(c as i64)));
        }
    }
    out
}

/// sum s_{nu1}(x) s_{nu+/nu1^t}(y) s_{nu3^t}(z) q^{kappa(nu+)+kappa(nu3)/4}
/// s_{nu+}(q^{-rho}) s_{nu3}(q^{-nu+-rho}).
pub fn schur_expansion_series(cutoffs: [u32; 3], ctx: &Ctx) -> SeriesPoly {
    let base = tri_base(ctx, cutoffs);
    let mut out = base.zero_like();
    for nu1 in partitions_up_to(cutoffs[0]) {
        let x = schur_in_p(&nu1, &base, Family::P1);
        let nu1t = nu1.conjugate();
        for nu_plus in partitions_up_to(nu1.weight() + cutoffs[1]) {
            if !nu_plus.contains(&nu1t) {
                continue;
            }
            let y = skew_schur_in_p(&nu_plus, &nu1t, &base, Family::P2);
            if y.is_empty() {
                continue;
            }
            let xy = x.mul(&y);
            for nu3 in partitions_up_to(cutoffs[2]) {
                let z = schur_in_p(&nu3.conjugate(), &base, Family::P3);
                let w = two_leg_weight(&nu_plus, &nu3, ctx);
                out = out.add(&xy.mul(&z).scale(&w));
            }
        }
    }
    out
}

fn two_leg_weight(nu_plus: &Partition, nu3: &Partition, ctx: &Ctx) -> QScalar {
    use crate::symfun::{schur_spec, Specialization};
    let ring = ctx.ring;
    let a = schur_spec(nu_plus, &Specialization::rho(), ring);
    let b = schur_spec(nu3, &Specialization::shifted(nu_plus.clone()), ring);
    (&a * &b)
        .mul_q_pow(&(int(nu_plus.kappa()) + rat(nu3.kappa(), 4)))
        .expect("quarter-integer exponent")
}

/// The fermionic matrix element against its Schur-function expansion.
pub fn verify_schur_expansion_prop43(cutoffs: [u32; 3], d: u32, ctx: &Ctx) -> Result<CheckReport> {
    let c = Ctx {
        fock_cutoff: d.max(ctx.fock_cutoff),
        ..ctx_for_tau(ctx, &int(1))?
    };
    let mut r = CheckReport::new("schur_expansion").param("cutoffs", cutoffs).param("D", d);
    compare_series(&mut r, &c, "", |c| Ok((fermionic_series(cutoffs, c)?, schur_expansion_series(cutoffs, c))));
    Ok(r)
}

/// W(q; x, y, z; 1) = <0|Gamma_+(x) Gamma'_+(y) G_0(1) Gamma_-(z)|0> exp(sum (-1)^{m+1}/m p_m(x) p_{2m}(z)).
pub fn verify_fermionic_w(cutoffs: [u32; 3], d: u32, ctx: &Ctx) -> Result<CheckReport> {
    let c = Ctx {
        fock_cutoff: d.max(ctx.fock_cutoff),
        ..ctx_for_tau(ctx, &int(1))?
    };
    let mut r = CheckReport::new("fermionic_W").param("cutoffs", cutoffs).param("D", d);
    compare_series(&mut r, &c, "", |c| {
        let f = fermionic_series(cutoffs, c)?;
        let a = anomaly_series(&f, 1)?;
        Ok((w_series(&int(1), cutoffs, c)?, f.mul(&a)))
    });
    Ok(r)
}

/// The series as JSON with each monomial keyed by its partition triple.
pub fn tri_series_json(s: &SeriesPoly) -> Value {
    let mut terms = Map::new();
    for (m, c) in s.terms() {
        let key = serde_json::to_string(m).unwrap_or_default();
        terms.insert(key, serde_json::to_value(c).unwrap_or(Value::Null));
    }
    let cutoffs: Map<String, Value> = s
        .families()
        .iter()
        .zip(s.cutoffs())
        .map(|(f, c)| (f.name().to_string(), json!(c)))
        .collect();
    json!({ "cutoffs": cutoffs, "terms": terms })
}

/// Monomial p^(1)_{a} p^(2)_{b} p^(3)_{c}.
pub fn tri_monomial(a: &[u32], b: &[u32], c: &[u32]) -> Monomial {
    [a, b, c].iter().map(|x| Partition::from_parts_unsorted(x.to_vec())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::Ring;
    use crate::symfun::agree;

    fn ctx() -> Ctx {
        Ctx::new(Ring::new(1, 40).unwrap())
    }

    #[test]
    fn expg_low_terms() {
        let c = ctx();
        let e = expg_series(&int(1), [2, 2, 2], &c).unwrap();
        assert_eq!(e.coeff(&tri_monomial(&[], &[], &[])).as_constant(), Some(int(1)));
        let want = QScalar::geometric_sum(c.ring, &rat(1, 2), &int(1)).unwrap();
        assert!(agree(&e.coeff(&tri_monomial(&[], &[1], &[])), &want, 20).unwrap());
        let l = e.log().unwrap();
        assert!(l.coeff(&tri_monomial(&[], &[], &[])).is_exact_zero());
        let r = expg_series(&int(0), [1, 1, 1], &c);
        assert!(r.is_err());
    }

    #[test]
    fn anomaly_coefficient() {
        // coefficient of p1_1 p3_2 minus the p+ contribution is the anomaly +1
        let c = ctx();
        let full = expg_series(&int(1), [1, 0, 2], &c).unwrap();
        let two = expg_series(&int(1), [0, 1, 2], &c).unwrap();
        let a = full.coeff(&tri_monomial(&[1], &[], &[2]));
        let b = two.coeff(&tri_monomial(&[], &[1], &[2]));
        let d = &a - &b;
        assert!(agree(&d, &QScalar::one(c.ring), 20).unwrap(), "{d}");
    }

    #[test]
    fn reductions_small() {
        let c = ctx();
        let r = verify_reduction_tau1([2, 2, 2], &c).unwrap();
        assert!(r.passed(), "{:?}", &r.failures[..r.failures.len().min(3)]);
        let r = verify_reduction_taun(2, [1, 1, 3], &c).unwrap();
        assert!(r.passed(), "{:?}", &r.failures[..r.failures.len().min(3)]);
        let bad = c.with_mutation(Some(Mutation::WrongPPlus));
        assert!(!verify_reduction_tau1([2, 2, 2], &bad).unwrap().passed());
    }

    #[test]
    fn generating_functions_agree() {
        let c = ctx();
        for tau in [int(1), int(2)] {
            let r = verify_generating_theorem1(&tau, [2, 2, 2], &c).unwrap();
            assert!(r.passed(), "{:?}", &r.failures[..r.failures.len().min(3)]);
        }
        let bad = c.with_mutation(Some(Mutation::PerturbTau));
        assert!(!verify_generating_theorem1(&int(1), [1, 2, 1], &bad).unwrap().passed());
    }

    #[test]
    fn quadratic_and_fermionic() {
        let c = ctx();
        let r = verify_quadratic_expansion(2, 4, &c).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        let r = verify_schur_expansion_prop43([1, 1, 2], 8, &c).unwrap();
        assert!(r.passed(), "{:?}", &r.failures[..r.failures.len().min(3)]);
        let r = verify_fermionic_w([1, 1, 2], 8, &c).unwrap();
        assert!(r.passed(), "{:?}", &r.failures[..r.failures.len().min(3)]);
    }

    #[test]
    fn json_keys() {
        let c = ctx();
        let e = expg_series(&int(1), [1, 0, 0], &c).unwrap();
        let v = tri_series_json(&e);
        assert!(v["terms"].get("[[1],[],[]]").is_some());
        assert!(v["terms"].get("[[],[],[]]").is_some());
    }
}
