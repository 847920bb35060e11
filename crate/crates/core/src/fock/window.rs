//! Independent fermion oracle: explicit creation and annihilation operators
//! on a finite window of Maya positions.
//!
//! psi_n creates a particle at position -n-1 and psi*_n removes the one at
//! n-1. Basis states are ordered products with the highest position
//! leftmost, so moving an operator into place costs (-1)^{#occupied above}.

use std::collections::BTreeMap;

use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::fock::Op;
use crate::partition::Partition;
use crate::qscalar::{int, rat, QScalar};
use crate::symfun::Specialization;

/// Sites `lo..hi`; everything below `lo` is filled, everything from `hi` up empty.
#[derive(Clone, Copy, Debug)]
pub struct FermionWindow {
    lo: i64,
    hi: i64,
}

type State = u64;
type Vector = BTreeMap<State, QScalar>;

impl FermionWindow {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if !(lo < 0 && hi > 0 && hi - lo <= 63) {
            return Err(Error::InvalidArgument(format!("bad fermion window [{lo}, {hi})")));
        }
        Ok(FermionWindow { lo, hi })
    }

    /// Symmetric window wide enough for states of weight `w` and jumps of `m`.
    pub fn for_weights(w: u32, m: u32) -> Result<Self> {
        let r = (w + m + 2) as i64;
        FermionWindow::new(-r, r)
    }

    fn bit(&self, pos: i64) -> Option<u32> {
        if pos < self.lo || pos >= self.hi {
            None
        } else {
            Some((pos - self.lo) as u32)
        }
    }

    fn occupied(&self, s: State, pos: i64) -> bool {
        if pos < self.lo {
            return true;
        }
        self.bit(pos).is_some_and(|b| s & (1 << b) != 0)
    }

    fn above(&self, s: State, pos: i64) -> u32 {
        match self.bit(pos) {
            Some(b) => (s >> (b + 1)).count_ones(),
            None => 0,
        }
    }

    pub fn vacuum(&self) -> State {
        self.encode(&Partition::empty()).unwrap()
    }

    pub fn encode(&self, lambda: &Partition) -> Result<State> {
        let mut s: State = 0;
        let mut i = 1i64;
        loop {
            let pos = lambda.part(i as usize - 1) as i64 - i;
            if pos < self.lo {
                break;
            }
            let b = self
                .bit(pos)
                .ok_or_else(|| Error::WindowOverflow(format!("{lambda} does not fit")))?;
            s |= 1 << b;
            i += 1;
        }
        Ok(s)
    }

    pub fn decode(&self, s: State) -> Result<Partition> {
        let mut parts = Vec::new();
        let mut i = 1i64;
        for pos in (self.lo..self.hi).rev() {
            if !self.occupied(s, pos) {
                continue;
            }
            if pos == -i {
                break;
            }
            if pos + i < 0 {
                return Err(Error::WindowOverflow("state left the charge-zero sector".into()));
            }
            parts.push((pos + i) as u32);
            i += 1;
        }
        if parts.len() as i64 + 1 != i || (i > 1 && parts.len() as i64 >= -self.lo) {
            return Err(Error::WindowOverflow("state reaches the bottom of the window".into()));
        }
        Partition::new(parts)
    }

    /// psi*_n: removes the particle at n - 1.
    fn psi_star(&self, n: i64, s: State) -> Result<Option<(i64, State)>> {
        let pos = n - 1;
        if pos < self.lo {
            return Err(Error::WindowOverflow(format!("psi*_{n} acts below the window")));
        }
        if !self.occupied(s, pos) {
            return Ok(None);
        }
        let sign = if self.above(s, pos) % 2 == 0 { 1 } else { -1 };
        Ok(Some((sign, s & !(1 << self.bit(pos).unwrap()))))
    }

    /// psi_n: creates a particle at -n - 1.
    fn psi(&self, n: i64, s: State) -> Result<Option<(i64, State)>> {
        let pos = -n - 1;
        if pos >= self.hi {
            return Err(Error::WindowOverflow(format!("psi_{n} acts above the window")));
        }
        if self.occupied(s, pos) {
            return Ok(None);
        }
        let b = self
            .bit(pos)
            .ok_or_else(|| Error::WindowOverflow(format!("psi_{n} acts below the window")))?;
        let sign = if self.above(s, pos) % 2 == 0 { 1 } else { -1 };
        Ok(Some((sign, s | (1 << b))))
    }

    /// psi_a psi*_b on a basis state.
    fn pair(&self, a: i64, b: i64, s: State) -> Result<Option<(i64, State)>> {
        let Some((s1, t)) = self.psi_star(b, s)? else { return Ok(None) };
        let Some((s2, u)) = self.psi(a, t)? else { return Ok(None) };
        Ok(Some((s1 * s2, u)))
    }

    /// :psi_a psi*_b: on a basis state, as (coefficient, state) terms.
    fn normal_pair(&self, a: i64, b: i64, s: State) -> Result<Vec<(i64, State)>> {
        let mut out = Vec::new();
        if let Some(x) = self.pair(a, b, s)? {
            out.push(x);
        }
        if a == -b {
            let vac = self.vacuum();
            if let Some((sg, v)) = self.pair(a, b, vac)? {
                if v == vac {
                    out.push((-sg, s));
                }
            }
        }
        Ok(out)
    }

    /// Indices n whose pair psi_{m-n} psi*_n can act inside the window.
    fn pair_range(&self, m: i64) -> std::ops::Range<i64> {
        // psi*_n touches n - 1, psi_{m-n} touches n - m - 1
        let lo = (self.lo + 1).max(self.lo + 1 + m);
        let hi = (self.hi + 1).min(self.hi + 1 + m);
        lo..hi
    }
}

fn add_to(v: &mut Vector, s: State, c: QScalar) {
    match v.get_mut(&s) {
        Some(x) => *x = &*x + &c,
        None => {
            v.insert(s, c);
        }
    }
}

fn weight_of(w: &FermionWindow, s: State) -> Result<u32> {
    Ok(w.decode(s)?.weight())
}

/// p_k of the alphabet x_i = q^{-nu_i + i - 1/2}.
fn power_sum(spec: &Specialization, k: i64, ctx: &Ctx) -> Result<QScalar> {
    let ring = ctx.ring;
    let nu = &spec.prefix;
    let n = nu.len() as i64;
    let mut terms = Vec::new();
    for i in 1..=n {
        let e = rat(k * (2 * (i - nu.part(i as usize - 1) as i64) - 1), 2);
        terms.push((ring.units(&e)?, int(1)));
    }
    let head = QScalar::from_terms(ring, &terms, None);
    let tail = QScalar::geometric_sum(ring, &rat(k * (2 * n + 1), 2), &int(k))?;
    Ok(head + tail)
}

fn apply_op(w: &FermionWindow, op: &Op, v: &Vector, ctx: &Ctx, max_weight: u32) -> Result<Vector> {
    let ring = ctx.ring;
    let mut out = Vector::new();
    match op {
        Op::Id | Op::QPowJ0(_) => return Ok(v.clone()),
        Op::Scalar(c) => {
            for (s, x) in v {
                add_to(&mut out, *s, x * c);
            }
        }
        Op::K | Op::L0 | Op::W0 | Op::QPowK(_) => {
            for (s, x) in v {
                // sum_n f(n) :psi_{-n} psi*_n:
                let mut kappa = rat(0, 1);
                let mut energy = rat(0, 1);
                let mut w0 = rat(0, 1);
                for n in w.pair_range(0) {
                    for (c, t) in w.normal_pair(-n, n, *s)? {
                        debug_assert_eq!(t, *s);
                        let nn = int(n);
                        let half = rat(1, 2);
                        kappa += int(c) * (&nn - &half) * (&nn - &half);
                        energy += int(c) * (&nn - &half);
                        w0 += int(c) * &nn * &nn;
                    }
                }
                let y = match op {
                    Op::K => x.scale(&kappa),
                    Op::L0 => x.scale(&energy),
                    Op::W0 => x.scale(&w0),
                    Op::QPowK(g) => x.mul_q_pow(&(g * kappa))?,
                    _ => unreachable!(),
                };
                add_to(&mut out, *s, y);
            }
        }
        Op::V { k, m } => {
            let (k, m) = (*k, *m);
            for (s, x) in v {
                for n in w.pair_range(m) {
                    for (c, t) in w.normal_pair(m - n, n, *s)? {
                        // q^{-k(m+1)/2 + k n}
                        let e = rat(-k * (m + 1) + 2 * k * n, 2);
                        add_to(&mut out, t, x.mul_q_pow(&e)?.scale_int(c));
                    }
                }
                if m == 0 && k != 0 {
                    // - q^{k/2} / (1 - q^k), expanded in positive powers of q
                    let kk = k.abs();
                    let g = QScalar::geometric_sum(ring, &rat(kk, 2), &int(kk))?;
                    let c = if k > 0 { -g } else { g };
                    add_to(&mut out, *s, x * &c);
                }
            }
        }
        Op::GammaMinus(spec) | Op::GammaPlus(spec) => {
            let raise = matches!(op, Op::GammaMinus(_));
            let mut gens = Vec::new();
            for kk in 1..=max_weight.max(1) as i64 {
                let mut c = power_sum(spec, kk, ctx)?.scale(&rat(1, kk));
                if spec.primed && kk % 2 == 0 {
                    c = -c;
                }
                gens.push((if raise { -kk } else { kk }, c));
            }
            // exp(A) v = sum_j A^j v / j!, A changes the weight strictly
            let mut term = v.clone();
            out = v.clone();
            for j in 1.. {
                let mut next = Vector::new();
                for (s, x) in &term {
                    for (mm, c) in &gens {
                        let y = apply_op(w, &Op::j(*mm), &BTreeMap::from([(*s, x.clone())]), ctx, max_weight)?;
                        for (t, z) in y {
                            if weight_of(w, t)? <= max_weight {
                                add_to(&mut next, t, &z * c);
                            }
                        }
                    }
                }
                if next.is_empty() {
                    break;
                }
                term = next.into_iter().map(|(s, x)| (s, x.scale(&rat(1, j)))).collect();
                for (s, x) in &term {
                    add_to(&mut out, *s, x.clone());
                }
            }
        }
        Op::Product(fs) => {
            let mut cur = v.clone();
            for f in fs.iter().rev() {
                cur = apply_op(w, f, &cur, ctx, max_weight)?;
            }
            return Ok(cur);
        }
        Op::Sum(ts) => {
            for t in ts {
                for (s, x) in apply_op(w, t, v, ctx, max_weight)? {
                    add_to(&mut out, s, x);
                }
            }
        }
    }
    Ok(out)
}

/// <lambda| op |mu> computed with explicit fermions on `window`, dropping
/// intermediate states heavier than `max_weight`.
pub fn fermion_window_oracle(
    lambda: &Partition,
    mu: &Partition,
    op: &Op,
    window: &FermionWindow,
    max_weight: u32,
    ctx: &Ctx,
) -> Result<QScalar> {
    let start = window.encode(mu)?;
    let target = window.encode(lambda)?;
    let v = BTreeMap::from([(start, QScalar::one(ctx.ring))]);
    let r = apply_op(window, op, &v, ctx, max_weight)?;
    Ok(r.get(&target).cloned().unwrap_or_else(|| QScalar::zero(ctx.ring)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{matrix_element, states_up_to};
    use crate::partition::p;
    use crate::qscalar::Ring;

    fn ctx() -> Ctx {
        Ctx::new(Ring::new(1, 40).unwrap())
    }

    #[test]
    fn encoding_round_trip() {
        let w = FermionWindow::for_weights(6, 2).unwrap();
        for l in states_up_to(6) {
            assert_eq!(w.decode(w.encode(&l).unwrap()).unwrap(), l);
        }
    }

    #[test]
    fn diagonal_charges() {
        let c = ctx();
        let w = FermionWindow::for_weights(5, 0).unwrap();
        for l in states_up_to(5) {
            let k = fermion_window_oracle(&l, &l, &Op::K, &w, 5, &c).unwrap();
            assert_eq!(k.as_constant(), Some(int(l.kappa())));
            let e = fermion_window_oracle(&l, &l, &Op::L0, &w, 5, &c).unwrap();
            assert_eq!(e.as_constant(), Some(int(l.weight() as i64)));
        }
    }

    #[test]
    fn agrees_with_engine_on_v() {
        let c = ctx();
        let w = FermionWindow::for_weights(4, 2).unwrap();
        let states = states_up_to(4);
        for k in -2..=2 {
            for m in -2..=2 {
                let op = Op::v(k, m);
                for a in &states {
                    for b in &states {
                        let x = fermion_window_oracle(a, b, &op, &w, 6, &c).unwrap();
                        let y = matrix_element(&op, a, b, &c).unwrap();
                        assert!(x.agree_on_common_window(&y, 20).unwrap().is_equal(), "{k} {m} {a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_via_exponentials() {
        let c = ctx();
        let w = FermionWindow::for_weights(4, 4).unwrap();
        for spec in [Specialization::rho(), Specialization::shifted(p(&[2, 1])), Specialization::primed(p(&[1]))] {
            for a in states_up_to(3) {
                for b in states_up_to(3) {
                    let op = Op::GammaMinus(spec.clone());
                    let x = fermion_window_oracle(&a, &b, &op, &w, 3, &c).unwrap();
                    let y = matrix_element(&op, &a, &b, &c).unwrap();
                    assert!(x.agree_on_common_window(&y, 20).unwrap().is_equal(), "{a} {b} {x} vs {y}");
                }
            }
        }
    }
}
