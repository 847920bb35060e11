//! The tau function T(N, p1, p2, t) at tau = N and its KP / generalized KdV
//! properties, checked on truncated series in t.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::hodge::{compare_series, ctx_for_tau, expg_series, reduction_rhs};
use crate::partition::{character, partitions_up_to, Partition};
use crate::qscalar::{int, QScalar, Rational};
use crate::report::CheckReport;
use crate::symfun::{det, Family, Monomial, SeriesPoly};

pub use crate::fock::checks::check_shifted_flow_form;

/// One coefficient of T deliberately shifted, for negative controls.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Perturbation {
    /// partition of t-indices of the monomial
    pub t_monomial: Partition,
    pub delta: i64,
}

/// Parameters of a truncated tau function.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauSpec {
    pub n: u32,
    /// weight cutoff of the formal p^(1) variables (0 sets p1 = 0)
    pub p1_cutoff: u32,
    /// weight cutoff of the formal p^(2) variables
    pub p2_cutoff: u32,
    /// weighted degree cutoff in t
    pub degree: u32,
    pub perturb: Option<Perturbation>,
}

impl TauSpec {
    pub fn new(n: u32, p1_cutoff: u32, p2_cutoff: u32, degree: u32) -> Self {
        TauSpec {
            n,
            p1_cutoff,
            p2_cutoff,
            degree,
            perturb: None,
        }
    }

    pub fn perturbed(mut self, t_monomial: Partition, delta: i64) -> Self {
        self.perturb = Some(Perturbation { t_monomial, delta });
        self
    }

    fn describe(&self) -> String {
        let mut s = format!("N={} p1<={} p2<={} D_t={}", self.n, self.p1_cutoff, self.p2_cutoff, self.degree);
        if let Some(p) = &self.perturb {
            s += &format!(" perturbed t{}{:+}", p.t_monomial, p.delta);
        }
        s
    }
}

/// T as a series in t, p1, p2.
#[derive(Clone, Debug, Serialize)]
pub struct TauSeries {
    pub spec: TauSpec,
    pub body: SeriesPoly,
}

pub const TAU_FAMILIES: [Family; 3] = [Family::T, Family::P1, Family::P2];

/// exp G(p1, p2, p3; N) with p3_k = k t_k.
pub fn build_tau(spec: &TauSpec, ctx: &Ctx) -> Result<TauSeries> {
    if spec.n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let tau = int(spec.n as i64);
    let c = ctx_for_tau(ctx, &tau)?;
    let g = expg_series(&tau, [spec.p1_cutoff, spec.p2_cutoff, spec.degree], &c)?;
    let mut body = in_times(&g);
    if let Some(p) = &spec.perturb {
        let m = vec![p.t_monomial.clone(), Partition::empty(), Partition::empty()];
        body.insert(m, QScalar::from_int(c.ring, p.delta));
    }
    Ok(TauSeries { spec: spec.clone(), body })
}

/// Rewrites a series in (p1, p2, p3) in the variables (t, p1, p2), p3_k = k t_k.
pub fn in_times(s: &SeriesPoly) -> SeriesPoly {
    let cut = s.cutoffs();
    let ring = s.ring();
    let target = SeriesPoly::zero(ring, &TAU_FAMILIES, &[cut[2], cut[0], cut[1]]);
    s.substitute(&target, |f, k| match f {
        Family::P3 => target.variable(Family::T, k, QScalar::from_int(ring, k as i64)),
        other => target.variable(other, k, QScalar::one(ring)),
    })
}

fn t_monomial(parts: &[u32]) -> Monomial {
    vec![Partition::from_parts_unsorted(parts.to_vec()), Partition::empty(), Partition::empty()]
}

impl TauSeries {
    /// Coefficient of t_{parts} at p1 = p2 = 0.
    pub fn coeff_t(&self, parts: &[u32]) -> QScalar {
        self.body.coeff(&t_monomial(parts))
    }

    /// d^2 log T / dt_k dt_j.
    pub fn log_second_derivative(&self, k: u32, j: u32) -> Result<SeriesPoly> {
        Ok(self.body.log()?.derivative(Family::T, k).derivative(Family::T, j))
    }

    /// Coefficients c_lambda of T = sum c_lambda s_lambda[t], |lambda| <= `size_bound`,
    /// each a polynomial in p1, p2.
    pub fn schur_coefficients(&self, size_bound: u32) -> BTreeMap<Partition, SeriesPoly> {
        let ring = self.body.ring();
        let cb = SeriesPoly::zero(ring, &[Family::P1, Family::P2], &[self.spec.p1_cutoff, self.spec.p2_cutoff]);
        let mut out: BTreeMap<Partition, SeriesPoly> =
            partitions_up_to(size_bound).into_iter().map(|l| (l, cb.zero_like())).collect();
        for (m, c) in self.body.terms() {
            let nu = &m[0];
            if nu.weight() > size_bound {
                continue;
            }
            // p_nu = prod (nu_i t_{nu_i}), so the p_nu coefficient is c / prod nu_i
            let prod: i64 = nu.parts().iter().map(|&k| k as i64).product();
            let a = c.scale(&(int(1) / int(prod)));
            let rest = vec![m[1].clone(), m[2].clone()];
            for lambda in partitions_up_to(size_bound).into_iter().filter(|l| l.weight() == nu.weight()) {
                let chi = character(&lambda, nu).expect("same weight");
                if chi != 0 {
                    out.get_mut(&lambda).unwrap().insert(rest.clone(), a.scale_int(chi));
                }
            }
        }
        out
    }
}

/// d^2 log T / dt_k dt_{m(N+1)} = 0 for 1 <= k <= k_max, 1 <= m <= m_max.
pub fn check_reduction_condition(spec: &TauSpec, k_max: u32, m_max: u32, ctx: &Ctx) -> Result<CheckReport> {
    let n1 = spec.n + 1;
    let mut pairs = Vec::new();
    let mut infeasible = Vec::new();
    for k in 1..=k_max {
        for m in 1..=m_max {
            if k + m * n1 <= spec.degree {
                pairs.push((k, m));
            } else {
                infeasible.push((k, m));
            }
        }
    }
    if !infeasible.is_empty() {
        let feasible: Vec<String> = (1..=spec.degree)
            .flat_map(|k| (1..=spec.degree).map(move |m| (k, m)))
            .filter(|(k, m)| k + m * n1 <= spec.degree)
            .map(|(k, m)| format!("({k},{m})"))
            .collect();
        return Err(Error::InvalidArgument(format!(
            "D_t = {} too small for (k,m) in {infeasible:?}; feasible: {}",
            spec.degree,
            feasible.join(" ")
        )));
    }
    let mut r = CheckReport::new("kp_reduction")
        .param("tau", &spec)
        .param("k_max", k_max)
        .param("m_max", m_max);
    for (k, m) in pairs {
        let label = format!("{} d2/dt{k}dt{}: ", spec.describe(), m * n1);
        compare_series(&mut r, ctx, &label, |c| {
            let d = build_tau(spec, c)?.log_second_derivative(k, m * n1)?;
            let z = d.zero_like();
            Ok((d, z))
        });
    }
    Ok(r)
}

/// T(p1, p2) = T(0, p+) exp(sum (-1)^{m+1}/m p1_m p3_{m(N+1)}) with p3_k = k t_k.
pub fn check_tau_factorization(spec: &TauSpec, ctx: &Ctx) -> Result<CheckReport> {
    let mut r = CheckReport::new("kp_factorization").param("tau", &spec);
    let label = format!("{}: ", spec.describe());
    compare_series(&mut r, ctx, &label, |c| {
        let lhs = build_tau(spec, c)?.body;
        let tc = ctx_for_tau(c, &int(spec.n as i64))?;
        let rhs = in_times(&reduction_rhs(spec.n, [spec.p1_cutoff, spec.p2_cutoff, spec.degree], &tc)?);
        Ok((lhs, rhs))
    });
    Ok(r)
}

/// Whether dT/dt_{m(N+1)} = 0 at the truncated order. Reported, not asserted.
pub fn check_strong_condition(spec: &TauSpec, m_max: u32, ctx: &Ctx) -> Result<CheckReport> {
    let mut r = CheckReport::new("kp_strong_condition").param("tau", &spec).param("m_max", m_max);
    for m in 1..=m_max {
        let j = m * (spec.n + 1);
        if j > spec.degree {
            break;
        }
        let label = format!("{} d/dt{j}: ", spec.describe());
        compare_series(&mut r, ctx, &label, |c| {
            let d = build_tau(spec, c)?.body.derivative(Family::T, j);
            let z = d.zero_like();
            Ok((d, z))
        });
    }
    Ok(r)
}

/// Frobenius hook (a | b) = (a + 1, 1^b).
fn hook(a: u32, b: u32) -> Partition {
    let mut parts = vec![a + 1];
    parts.extend(std::iter::repeat(1).take(b as usize));
    Partition::from_parts_unsorted(parts)
}

/// The Giambelli form of the Plucker relations,
/// c_0^{r-1} c_(a|b) = det c_(a_i|b_j), on every |lambda| <= `size_bound`
/// of Frobenius rank r >= 2, and the lowest Hirota equation
/// (D1^4 + 3 D2^2 - 4 D1 D3) T.T = 0 through t-degree D_t - 4.
pub fn check_plucker(spec: &TauSpec, size_bound: u32, ctx: &Ctx) -> Result<CheckReport> {
    if size_bound > spec.degree {
        return Err(Error::InvalidArgument(format!(
            "size bound {size_bound} exceeds D_t = {}",
            spec.degree
        )));
    }
    let mut r = CheckReport::new("kp_plucker").param("tau", &spec).param("size_bound", size_bound);
    let lambdas: Vec<Partition> = partitions_up_to(size_bound)
        .into_iter()
        .filter(|l| l.frobenius().0.len() >= 2)
        .collect();
    let label = format!("{} giambelli ", spec.describe());
    for lambda in &lambdas {
        let (a, b) = lambda.frobenius();
        let rank = a.len();
        compare_series(&mut r, ctx, &format!("{label}{lambda}: "), |c| {
            let cs = build_tau(spec, c)?.schur_coefficients(size_bound);
            let c0 = cs[&Partition::empty()].clone();
            let lhs = c0.pow(rank as u32 - 1).mul(&cs[lambda]);
            let one = c0.one_like();
            let rhs = det(rank, &one, |i, j| Some(cs[&hook(a[i], b[j])].clone()));
            Ok((lhs, rhs))
        });
    }
    if spec.degree >= 4 {
        let label = format!("{} hirota: ", spec.describe());
        compare_series(&mut r, ctx, &label, |c| {
            let h = hirota_kp(&build_tau(spec, c)?);
            let z = h.zero_like();
            Ok((h, z))
        });
    }
    Ok(r)
}

/// T T_1111 - 4 T_1 T_111 + 3 T_11^2 + 3 (T T_22 - T_2^2) - 4 (T T_13 - T_1 T_3),
/// truncated to the t-degrees where it is exact.
pub fn hirota_kp(t: &TauSeries) -> SeriesPoly {
    let b = &t.body;
    let d = |ks: &[u32]| ks.iter().fold(b.clone(), |acc, &k| acc.derivative(Family::T, k));
    let t1 = d(&[1]);
    let t2 = d(&[2]);
    let t3 = d(&[3]);
    let t11 = d(&[1, 1]);
    let t111 = d(&[1, 1, 1]);
    let t1111 = d(&[1, 1, 1, 1]);
    let t22 = d(&[2, 2]);
    let t13 = d(&[1, 3]);
    let three = Rational::from_integer(3.into());
    let four = Rational::from_integer(4.into());
    let h = b
        .mul(&t1111)
        .sub(&t1.mul(&t111).scale_rational(&four))
        .add(&t11.mul(&t11).scale_rational(&three))
        .add(&b.mul(&t22).sub(&t2.mul(&t2)).scale_rational(&three))
        .sub(&b.mul(&t13).sub(&t1.mul(&t3)).scale_rational(&four));
    let c = b.cutoffs();
    h.with_cutoffs(&[c[0] - 4, c[1], c[2]])
}

/// The perturbations used as negative controls for `spec`.
pub fn negative_controls(spec: &TauSpec) -> Vec<TauSpec> {
    let n1 = spec.n + 1;
    [vec![1, n1], vec![1, 1], vec![2, 1, 1], vec![2, 2]]
        .into_iter()
        .filter(|m| m.iter().sum::<u32>() <= spec.degree)
        .map(|m| spec.clone().perturbed(Partition::from_parts_unsorted(m), 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::{rat, Ring};
    use crate::symfun::agree;

    fn ctx() -> Ctx {
        Ctx::new(Ring::new(1, 40).unwrap())
    }

    #[test]
    fn low_coefficients() {
        let c = ctx();
        let t = build_tau(&TauSpec::new(1, 0, 0, 3), &c).unwrap();
        assert_eq!(t.coeff_t(&[]).as_constant(), Some(int(1)));
        let want = QScalar::geometric_sum(c.ring, &rat(1, 2), &int(1)).unwrap();
        assert!(agree(&t.coeff_t(&[1]), &want, 20).unwrap());
    }

    #[test]
    fn reduction_and_plucker_small() {
        let c = ctx();
        for n in [1, 2] {
            let spec = TauSpec::new(n, 0, 1, n + 3);
            let r = check_reduction_condition(&spec, 1, 1, &c).unwrap();
            assert!(r.passed(), "{:?}", &r.failures[..r.failures.len().min(3)]);
            let r = check_plucker(&spec, 4, &c).unwrap();
            assert!(r.passed(), "{:?}", &r.failures[..r.failures.len().min(3)]);
        }
        assert!(check_reduction_condition(&TauSpec::new(2, 0, 0, 3), 1, 1, &c).is_err());
        for n in [1, 2] {
            let spec = TauSpec::new(n, 1, 1, n + 2);
            assert!(check_tau_factorization(&spec, &c).unwrap().passed());
            let bad = spec.perturbed(Partition::from_parts_unsorted(vec![1]), 1);
            assert!(!check_tau_factorization(&bad, &c).unwrap().passed());
        }
    }

    #[test]
    fn perturbations_are_caught() {
        let c = ctx();
        let spec = TauSpec::new(1, 0, 0, 6);
        for bad in negative_controls(&spec) {
            assert!(!check_plucker(&bad, 6, &c).unwrap().passed(), "{}", bad.describe());
        }
        let bad = spec.clone().perturbed(Partition::from_parts_unsorted(vec![1, 2]), 1);
        assert!(!check_reduction_condition(&bad, 1, 1, &c).unwrap().passed());
    }

    #[test]
    fn vacuum_flow_is_a_tau_function() {
        // exp(t1) has c_lambda = 1/h(lambda) products and satisfies every relation
        let c = ctx();
        let base = SeriesPoly::zero(c.ring, &TAU_FAMILIES, &[6, 0, 0]);
        let body = base.variable(Family::T, 1, QScalar::one(c.ring)).exp().unwrap();
        let t = TauSeries {
            spec: TauSpec::new(1, 0, 0, 6),
            body,
        };
        let h = hirota_kp(&t);
        assert!(h.is_empty());
        let cs = t.schur_coefficients(4);
        let x = cs[&Partition::empty()].mul(&cs[&Partition::from_parts_unsorted(vec![2, 2])]);
        let y = cs[&Partition::from_parts_unsorted(vec![2, 1])]
            .mul(&cs[&Partition::from_parts_unsorted(vec![1])])
            .sub(&cs[&Partition::from_parts_unsorted(vec![2])].mul(&cs[&Partition::from_parts_unsorted(vec![1, 1])]));
        assert!(x.first_mismatch(&y, 1).unwrap().is_none());
    }
}
