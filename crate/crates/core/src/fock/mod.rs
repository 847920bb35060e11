//! Charge-zero fermionic Fock space with basis |lambda>, the operators
//! V^{(k)}_m, K, L_0, W_0, q^{gamma K} and the vertex operators, and
//! matrix elements of their products.

pub mod checks;
pub mod window;

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::context::{Ctx, Mutation};
use crate::error::{Error, Result};
use crate::partition::{partitions_of, subpartitions_of_weight, superpartitions_of_weight, Partition};
use crate::qscalar::{int, rat, QScalar, Rational, Ring};
use crate::symfun::{schur_spec, skew_schur_spec, Specialization};

/// Finite linear combination of basis states |lambda>, with every state
/// heavier than `cutoff` dropped (and the drop recorded).
#[derive(Clone, Debug)]
pub struct FockVector {
    ring: Ring,
    coeffs: BTreeMap<Partition, QScalar>,
    cutoff: u32,
    dropped: bool,
}

impl FockVector {
    pub fn zero(ring: Ring, cutoff: u32) -> Self {
        FockVector {
            ring,
            coeffs: BTreeMap::new(),
            cutoff,
            dropped: false,
        }
    }

    pub fn basis(lambda: &Partition, ring: Ring, cutoff: u32) -> Self {
        let mut v = FockVector::zero(ring, cutoff);
        v.insert(lambda.clone(), QScalar::one(ring));
        v
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// True when some state was discarded by the cutoff.
    pub fn dropped(&self) -> bool {
        self.dropped
    }

    pub fn insert(&mut self, lambda: Partition, c: QScalar) {
        if c.is_exact_zero() {
            return;
        }
        if lambda.weight() > self.cutoff {
            self.dropped = true;
            return;
        }
        match self.coeffs.get_mut(&lambda) {
            Some(x) => {
                let s = &*x + &c;
                if s.is_exact_zero() {
                    self.coeffs.remove(&lambda);
                } else {
                    *x = s;
                }
            }
            None => {
                self.coeffs.insert(lambda, c);
            }
        }
    }

    pub fn get(&self, lambda: &Partition) -> QScalar {
        self.coeffs.get(lambda).cloned().unwrap_or_else(|| QScalar::zero(self.ring))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &QScalar)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&mut self, other: &FockVector) {
        self.dropped |= other.dropped;
        for (l, c) in &other.coeffs {
            self.insert(l.clone(), c.clone());
        }
    }

    fn with_cutoff(mut self, cutoff: u32) -> Self {
        if cutoff < self.cutoff {
            let before = self.coeffs.len();
            self.coeffs.retain(|l, _| l.weight() <= cutoff);
            self.dropped |= before != self.coeffs.len();
        }
        self.cutoff = cutoff;
        self
    }
}

/// Operator expressions on the charge-zero sector.
#[derive(Clone, Debug)]
pub enum Op {
    Id,
    Scalar(QScalar),
    /// V^{(k)}_m; k = 0 is the current J_m
    V { k: i64, m: i64 },
    K,
    L0,
    W0,
    /// q^{gamma K}
    QPowK(Rational),
    /// q^{gamma J_0}, the identity on charge zero
    QPowJ0(Rational),
    /// Gamma_-(x); a primed specialization gives Gamma'_-
    GammaMinus(Specialization),
    /// Gamma_+(x); a primed specialization gives Gamma'_+
    GammaPlus(Specialization),
    /// written left to right, applied right to left
    Product(Vec<Op>),
    Sum(Vec<Op>),
}

impl Op {
    pub fn j(m: i64) -> Op {
        Op::V { k: 0, m }
    }

    pub fn v(k: i64, m: i64) -> Op {
        Op::V { k, m }
    }

    pub fn product(ops: Vec<Op>) -> Op {
        Op::Product(ops)
    }

    pub fn scaled(c: QScalar, op: Op) -> Op {
        Op::Product(vec![Op::Scalar(c), op])
    }

    /// L_alpha = s_alpha(q^{-rho}) Gamma_-(q^{-alpha-rho}) Gamma_+(q^{-alpha^t-rho}).
    pub fn l_alpha(alpha: &Partition, ring: Ring) -> Op {
        Op::Product(vec![
            Op::Scalar(schur_spec(alpha, &Specialization::rho(), ring)),
            Op::GammaMinus(Specialization::shifted(alpha.clone())),
            Op::GammaPlus(Specialization::shifted(alpha.conjugate())),
        ])
    }

    /// L'_alpha, the same with primed vertex operators.
    pub fn l_prime_alpha(alpha: &Partition, ring: Ring) -> Op {
        Op::Product(vec![
            Op::Scalar(schur_spec(alpha, &Specialization::rho(), ring)),
            Op::GammaMinus(Specialization::primed(alpha.clone())),
            Op::GammaPlus(Specialization::primed(alpha.conjugate())),
        ])
    }

    /// G_alpha(tau) = q^{-kappa/(2 tau)} s_alpha(q^{-rho}) q^{-tau K/2}
    /// Gamma_-(q^{-alpha-rho}) Gamma_+(q^{-alpha^t-rho}) q^{tau K/(2(1+tau))}.
    pub fn g_alpha(alpha: &Partition, tau: &Rational, ring: Ring) -> Result<Op> {
        let (pre, left, right) = g_factors(alpha, tau, ring)?;
        Ok(Op::Product(vec![
            Op::Scalar(pre),
            Op::QPowK(-left),
            Op::GammaMinus(Specialization::shifted(alpha.clone())),
            Op::GammaPlus(Specialization::shifted(alpha.conjugate())),
            Op::QPowK(right),
        ]))
    }

    /// G'_alpha(tau) = q^{-kappa/(2 tau)} q^{tau K/2} L'_alpha q^{-tau K/(2(1+tau))}.
    pub fn g_prime_alpha(alpha: &Partition, tau: &Rational, ring: Ring) -> Result<Op> {
        let (pre, left, right) = g_factors(alpha, tau, ring)?;
        Ok(Op::Product(vec![
            Op::Scalar(pre),
            Op::QPowK(left),
            Op::GammaMinus(Specialization::primed(alpha.clone())),
            Op::GammaPlus(Specialization::primed(alpha.conjugate())),
            Op::QPowK(-right),
        ]))
    }

    /// Hermitian adjoint (all coefficients are real series).
    pub fn adjoint(&self) -> Op {
        match self {
            Op::V { k, m } => Op::V { k: *k, m: -m },
            Op::GammaMinus(s) => Op::GammaPlus(s.clone()),
            Op::GammaPlus(s) => Op::GammaMinus(s.clone()),
            Op::Product(v) => Op::Product(v.iter().rev().map(Op::adjoint).collect()),
            Op::Sum(v) => Op::Sum(v.iter().map(Op::adjoint).collect()),
            other => other.clone(),
        }
    }

    /// Range of the weight change |out| - |in|; `None` is unbounded.
    fn weight_shift(&self) -> (Option<i64>, Option<i64>) {
        match self {
            Op::V { m, .. } => (Some(-m), Some(-m)),
            Op::GammaMinus(_) => (Some(0), None),
            Op::GammaPlus(_) => (None, Some(0)),
            Op::Product(v) => v.iter().fold((Some(0), Some(0)), |(lo, hi), f| {
                let (a, b) = f.weight_shift();
                (lo.zip(a).map(|(x, y)| x + y), hi.zip(b).map(|(x, y)| x + y))
            }),
            Op::Sum(v) => {
                let mut lo = Some(i64::MAX);
                let mut hi = Some(i64::MIN);
                for f in v {
                    let (a, b) = f.weight_shift();
                    lo = lo.zip(a).map(|(x, y)| x.min(y));
                    hi = hi.zip(b).map(|(x, y)| x.max(y));
                }
                if v.is_empty() {
                    (Some(0), Some(0))
                } else {
                    (lo, hi)
                }
            }
            _ => (Some(0), Some(0)),
        }
    }

    /// Expands into a sum of products of non-composite factors.
    fn expand(&self) -> Vec<Vec<Op>> {
        match self {
            Op::Sum(v) => v.iter().flat_map(Op::expand).collect(),
            Op::Product(v) => {
                let mut acc: Vec<Vec<Op>> = vec![Vec::new()];
                for f in v {
                    let e = f.expand();
                    let mut next = Vec::with_capacity(acc.len() * e.len());
                    for a in &acc {
                        for b in &e {
                            let mut x = a.clone();
                            x.extend(b.iter().cloned());
                            next.push(x);
                        }
                    }
                    acc = next;
                }
                acc
            }
            other => vec![vec![other.clone()]],
        }
    }
}

fn g_factors(alpha: &Partition, tau: &Rational, ring: Ring) -> Result<(QScalar, Rational, Rational)> {
    let one = int(1);
    if tau.is_zero() || (tau + &one).is_zero() {
        return Err(Error::InvalidArgument("tau must avoid 0 and -1".into()));
    }
    let e = -int(alpha.kappa()) / (int(2) * tau);
    let pre = schur_spec(alpha, &Specialization::rho(), ring).mul_q_pow(&e)?;
    let left = tau / int(2);
    let right = tau / (int(2) * (&one + tau));
    Ok((pre, left, right))
}

/// Eigenvalue of V^{(k)}_0 on |lambda>.
pub fn v0_eigenvalue(k: i64, lambda: &Partition, ring: Ring) -> Result<QScalar> {
    if k == 0 {
        return Ok(QScalar::zero(ring));
    }
    let maya = lambda.maya();
    let l = lambda.len() as i64;
    let top = maya.points().first().copied().unwrap_or(-1);
    let mut terms = Vec::new();
    for p in -l..=top {
        let occ = maya.is_occupied(p);
        // q^{k (p + 1/2)}
        let e = ring.lattice as i64 * k * (2 * p + 1);
        if p >= 0 && occ {
            terms.push((e, int(1)));
        } else if p < 0 && !occ {
            terms.push((e, int(-1)));
        }
    }
    let finite = QScalar::from_terms(ring, &terms, None);
    let kk = k.abs();
    let g = QScalar::geometric_sum(ring, &rat(kk, 2), &int(kk))?;
    // q^{k/2}/(1-q^k) expanded in positive powers of q
    let c = if k > 0 { g } else { -g };
    Ok(finite - c)
}

/// phi_k(mu) read off the conjugate (k >= 1) or the partition (k <= -1).
pub fn phi(k: i64, mu: &Partition, ring: Ring) -> Result<QScalar> {
    if k == 0 {
        return Err(Error::InvalidArgument("phi_0 is undefined".into()));
    }
    let (src, sign, kk) = if k > 0 { (mu.conjugate(), -1, k) } else { (mu.clone(), 1, -k) };
    // sum_{i>=1} q^{kk(-src_i + i - 1/2)}: finite part plus geometric tail
    let n = src.len() as i64;
    let mut terms = Vec::new();
    for i in 1..=n {
        let e = ring.lattice as i64 * kk * (2 * (i - src.part(i as usize - 1) as i64) - 1);
        terms.push((e, int(1)));
    }
    let head = QScalar::from_terms(ring, &terms, None);
    let tail = QScalar::geometric_sum(ring, &(int(kk) * (rat(2 * n + 1, 2))), &int(kk))?;
    Ok((head + tail).scale_int(sign))
}

fn apply_factor(op: &Op, v: &FockVector, ctx: &Ctx, cutoff: u32) -> Result<FockVector> {
    let ring = ctx.ring;
    let mut out = FockVector::zero(ring, cutoff);
    out.dropped = v.dropped;
    match op {
        Op::Id => {
            for (l, c) in v.iter() {
                out.insert(l.clone(), c.clone());
            }
        }
        Op::Scalar(s) => {
            for (l, c) in v.iter() {
                out.insert(l.clone(), c * s);
            }
        }
        Op::QPowJ0(_) => return Ok(v.clone().with_cutoff(cutoff)),
        Op::K | Op::L0 | Op::W0 | Op::QPowK(_) => {
            for (l, c) in v.iter() {
                let x = match op {
                    Op::K => c.scale_int(l.kappa()),
                    Op::L0 => c.scale_int(l.weight() as i64),
                    Op::W0 => c.scale_int(l.kappa() + l.weight() as i64),
                    Op::QPowK(g) => c.mul_q_pow(&(g * int(l.kappa())))?,
                    _ => unreachable!(),
                };
                out.insert(l.clone(), x);
            }
        }
        Op::V { k, m } => {
            for (l, c) in v.iter() {
                if *m == 0 {
                    out.insert(l.clone(), c * &v0_eigenvalue(*k, l, ring)?);
                    continue;
                }
                let maya = l.maya();
                let n = l.len() as i64;
                let top = maya.points().first().copied().unwrap_or(-1);
                for p in (-n - m.abs() - 1)..=top {
                    let Some(moved) = maya.moved(p, p - m) else { continue };
                    let h = maya.count_between(p, p - m);
                    // q^{-k(m+1)/2 + k(p+1)} = q^{k(2p + 1 - m)/2}
                    let e = ring.lattice as i64 * k * (2 * p + 1 - m);
                    let s = if h % 2 == 0 { 1 } else { -1 };
                    out.insert(moved.to_partition(), c.shift(e).scale_int(s));
                }
            }
        }
        Op::GammaMinus(spec) => {
            for (mu, c) in v.iter() {
                for w in mu.weight()..=cutoff {
                    for lam in superpartitions_of_weight(mu, w) {
                        let s = gamma_element(&lam, mu, spec, ctx);
                        out.insert(lam, c * &s);
                    }
                }
                // the sum continues beyond the cutoff
                out.dropped = true;
            }
        }
        Op::GammaPlus(spec) => {
            for (lam, c) in v.iter() {
                for w in 0..=lam.weight() {
                    for mu in subpartitions_of_weight(lam, w) {
                        let s = gamma_element(lam, &mu, spec, ctx);
                        out.insert(mu, c * &s);
                    }
                }
            }
        }
        Op::Product(fs) => {
            let mut cur = v.clone();
            for f in fs.iter().rev() {
                cur = apply_factor(f, &cur, ctx, cutoff)?;
            }
            return Ok(cur);
        }
        Op::Sum(ts) => {
            for t in ts {
                let r = apply_factor(t, v, ctx, cutoff)?;
                out.add(&r);
            }
        }
    }
    Ok(out)
}

/// <lambda| Gamma_-(x) |mu> = <mu| Gamma_+(x) |lambda> = s_{lambda/mu}(x),
/// transposed for primed alphabets.
fn gamma_element(lambda: &Partition, mu: &Partition, spec: &Specialization, ctx: &Ctx) -> QScalar {
    if spec.primed && ctx.is(Mutation::NoTranspose) {
        let s = Specialization::shifted(spec.prefix.clone());
        return skew_schur_spec(lambda, mu, &s, ctx.ring);
    }
    skew_schur_spec(lambda, mu, spec, ctx.ring)
}

/// Applies `op` to a ket with a uniform intermediate cutoff.
pub fn apply(op: &Op, v: &FockVector, ctx: &Ctx) -> Result<FockVector> {
    apply_factor(op, v, ctx, v.cutoff())
}

/// Applies `op` to a bra: returns the ket of `<v| op`.
pub fn apply_bra(op: &Op, v: &FockVector, ctx: &Ctx) -> Result<FockVector> {
    apply_factor(&op.adjoint(), v, ctx, v.cutoff())
}

/// The column <lambda| f_1 ... f_n |mu> over all |lambda| <= `bra_max`, for
/// one product of primitive factors, with intermediate weights bounded from
/// both ends. The flag is false when some bound was unavailable and the
/// result depends on the fallback cutoff.
fn product_column(
    factors: &[Op],
    mu: &Partition,
    bra_max: u32,
    ctx: &Ctx,
    fallback: u32,
) -> Result<(FockVector, bool)> {
    let n = factors.len();
    let shifts: Vec<(Option<i64>, Option<i64>)> = factors.iter().map(Op::weight_shift).collect();
    // state i sits to the right of factor i, i.e. after f_{i+1}..f_n act
    let mut fwd = vec![None; n + 1];
    fwd[n] = Some(mu.weight() as i64);
    for i in (0..n).rev() {
        fwd[i] = fwd[i + 1].zip(shifts[i].1).map(|(a, b)| a + b);
    }
    let mut back = vec![None; n + 1];
    back[0] = Some(bra_max as i64);
    for i in 0..n {
        back[i + 1] = back[i].zip(shifts[i].0).map(|(a, b)| a - b);
    }
    let mut exact = true;
    let mut cur = FockVector::basis(mu, ctx.ring, mu.weight().max(fallback));
    for i in (0..n).rev() {
        let bound = match (fwd[i], back[i]) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) | (None, Some(a)) => Some(a),
            (None, None) => None,
        };
        let cutoff = match bound {
            Some(b) if b < 0 => return Ok((FockVector::zero(ctx.ring, bra_max), true)),
            Some(b) => b as u32,
            None => {
                exact = false;
                fallback
            }
        };
        cur = apply_factor(&factors[i], &cur, ctx, cutoff)?;
        if cur.is_empty() {
            break;
        }
    }
    let mut out = FockVector::zero(ctx.ring, bra_max);
    for (l, c) in cur.iter() {
        if l.weight() <= bra_max {
            out.insert(l.clone(), c.clone());
        }
    }
    Ok((out, exact))
}

fn same_vectors(a: &FockVector, b: &FockVector, min_width: i64) -> bool {
    let keys: std::collections::BTreeSet<&Partition> = a.coeffs.keys().chain(b.coeffs.keys()).collect();
    keys.into_iter().all(|l| {
        a.get(l)
            .agree_on_common_window(&b.get(l), min_width)
            .map(|g| g.is_equal())
            .unwrap_or(false)
    })
}

/// The column of matrix elements <lambda| op |mu> for all |lambda| <= `bra_max`.
///
/// Products whose intermediate weights are bounded from the ket or the bra
/// side are evaluated exactly. Otherwise the intermediate cutoff is raised
/// until three consecutive cutoffs agree on the common window.
pub fn column(op: &Op, mu: &Partition, bra_max: u32, ctx: &Ctx) -> Result<FockVector> {
    let terms = op.expand();
    let base = bra_max.max(mu.weight());
    let eval = |fallback: u32| -> Result<(FockVector, bool)> {
        let mut total = FockVector::zero(ctx.ring, bra_max);
        let mut exact = true;
        for t in &terms {
            let (x, e) = product_column(t, mu, bra_max, ctx, fallback)?;
            exact &= e;
            total.add(&x);
        }
        total.dropped = !exact;
        Ok((total, exact))
    };
    let (first, exact) = eval(base)?;
    if exact {
        return Ok(first);
    }
    let mut prev = vec![first];
    for d in base + 1..=ctx.fock_cutoff.max(base + 2) {
        let (x, _) = eval(d)?;
        prev.push(x);
        let k = prev.len();
        if k >= 3
            && same_vectors(&prev[k - 1], &prev[k - 2], ctx.min_width)
            && same_vectors(&prev[k - 2], &prev[k - 3], ctx.min_width)
        {
            return Ok(prev.pop().unwrap());
        }
    }
    Err(Error::CutoffExceeded(format!(
        "op|{mu}> not stable up to intermediate weight {}",
        ctx.fock_cutoff
    )))
}

/// <lambda| op |mu>.
pub fn matrix_element(op: &Op, lambda: &Partition, mu: &Partition, ctx: &Ctx) -> Result<QScalar> {
    Ok(column(op, mu, lambda.weight(), ctx)?.get(lambda))
}

/// All partitions of weight at most `n`.
pub fn states_up_to(n: u32) -> Vec<Partition> {
    (0..=n).flat_map(partitions_of).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{p, remove_ribbons};
    use crate::qscalar::Ring;

    fn ctx() -> Ctx {
        Ctx::new(Ring::new(1, 40).unwrap())
    }

    #[test]
    fn currents_match_ribbons() {
        let c = ctx();
        for a in states_up_to(5) {
            for k in 1..4 {
                let v = apply(&Op::j(k), &FockVector::basis(&a, c.ring, 10), &c).unwrap();
                let want = remove_ribbons(&a, k as u32);
                assert_eq!(v.len(), want.len());
                for r in want {
                    assert_eq!(v.get(&r.partition).as_constant(), Some(int(r.sign as i64)));
                }
            }
        }
    }

    #[test]
    fn diagonal_operators() {
        let c = ctx();
        let l = p(&[3, 1]);
        let v = FockVector::basis(&l, c.ring, 10);
        assert_eq!(apply(&Op::K, &v, &c).unwrap().get(&l).as_constant(), Some(int(4)));
        assert_eq!(apply(&Op::W0, &v, &c).unwrap().get(&l).as_constant(), Some(int(8)));
        assert!(apply(&Op::QPowK(rat(1, 3)), &v, &c).is_err());
    }

    #[test]
    fn v0_eigenvalue_is_phi() {
        let c = ctx();
        for mu in states_up_to(5) {
            for k in [-3i64, -2, -1, 1, 2, 3] {
                let a = v0_eigenvalue(k, &mu, c.ring).unwrap();
                let b = phi(k, &mu, c.ring).unwrap();
                assert!(a.agree_on_common_window(&b, 20).unwrap().is_equal(), "{mu} {k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn vacuum_expectations() {
        let c = ctx();
        let e = Partition::empty();
        let g = Op::g_alpha(&e, &int(1), c.ring).unwrap();
        let x = matrix_element(&g, &e, &e, &c).unwrap();
        assert_eq!(x.as_constant(), Some(int(1)));
        // anti-normal order: sum_nu s_nu(q^{-rho})^2 = prod_{i,j} (1 - q^{i+j-1})^{-1}
        let op = Op::Product(vec![
            Op::GammaPlus(Specialization::rho()),
            Op::GammaMinus(Specialization::rho()),
        ]);
        let c2 = Ctx { fock_cutoff: 20, ..c }.with_window(24);
        let x = matrix_element(&op, &e, &e, &c2).unwrap();
        let mut want = QScalar::one(c2.ring);
        for n in 1..13i64 {
            // (1 - q^n)^{-n}
            let g = QScalar::geometric_sum(c2.ring, &int(0), &int(n)).unwrap();
            want = &want * &g.pow(n as u32);
        }
        assert!(x.agree_on_common_window(&want, 20).unwrap().is_equal(), "{x} vs {want}");
    }
}
