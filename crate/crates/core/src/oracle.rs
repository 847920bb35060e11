//! Brute-force oracles. Each one recomputes an engine quantity by a route
//! that avoids the engine routine under test: Frobenius' formula instead of
//! Murnaghan-Nakayama, monomial extraction instead of the LR rule, direct
//! products instead of the Euler tail, explicit fermions instead of the
//! bosonic Fock action, and SSYT enumeration instead of Jacobi-Trudi.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::context::{Ctx, Mutation};
use crate::error::{Error, Result};
use crate::fock::window::{fermion_window_oracle, FermionWindow};
use crate::fock::{column, states_up_to, Op};
use crate::partition::{character_variant, Partition};
use crate::qscalar::{int, QScalar, Rational};
use crate::report::{CheckReport, Outcome, Status, WIDENINGS, WIDEN_FACTOR};
use crate::symfun::{h_spec, lr_coefficient, Specialization};
use crate::vertex::{lllz_coefficient, triples_up_to, Triple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    Characters,
    Lr,
    EulerTail,
    FockWindow,
    Lllz,
}

impl Scope {
    pub const ALL: [Scope; 5] = [Scope::Characters, Scope::Lr, Scope::EulerTail, Scope::FockWindow, Scope::Lllz];

    pub fn name(self) -> &'static str {
        match self {
            Scope::Characters => "characters",
            Scope::Lr => "lr",
            Scope::EulerTail => "euler-tail",
            Scope::FockWindow => "fock-window",
            Scope::Lllz => "lllz",
        }
    }

    fn letter(self) -> &'static str {
        match self {
            Scope::Characters => "a",
            Scope::Lr => "b",
            Scope::EulerTail => "c",
            Scope::FockWindow => "d",
            Scope::Lllz => "e",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scope::ALL
            .into_iter()
            .find(|x| x.name() == s || x.letter() == s)
            .ok_or_else(|| Error::Config(format!("unknown oracle scope {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleBounds {
    pub character_degree: u32,
    pub lr_weight: u32,
    pub tail_m: u32,
    pub fock_weight: u32,
    pub lllz_weight: u32,
}

impl OracleBounds {
    pub fn full() -> Self {
        OracleBounds {
            character_degree: 6,
            lr_weight: 8,
            tail_m: 10,
            fock_weight: 5,
            lllz_weight: 3,
        }
    }

    pub fn quick() -> Self {
        OracleBounds {
            character_degree: 4,
            lr_weight: 6,
            tail_m: 6,
            fock_weight: 3,
            lllz_weight: 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub target: String,
    pub instance: String,
    pub oracle: String,
    pub engine: String,
    pub verdict: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

fn exact_item(target: &str, instance: String, oracle: i64, engine: i64) -> OracleReport {
    OracleReport {
        target: target.to_string(),
        instance,
        oracle: oracle.to_string(),
        engine: engine.to_string(),
        verdict: if oracle == engine { Status::Pass } else { Status::Fail },
        detail: None,
    }
}

/// Engine and oracle values as q-series, widening while the window is too narrow.
fn series_item(target: &str, instance: String, ctx: &Ctx, sides: impl Fn(&Ctx) -> Result<(QScalar, QScalar)>) -> OracleReport {
    let mut c = *ctx;
    let mut item = OracleReport {
        target: target.to_string(),
        instance,
        oracle: String::new(),
        engine: String::new(),
        verdict: Status::Inconclusive,
        detail: None,
    };
    for attempt in 0..=WIDENINGS {
        if attempt > 0 {
            c = c.with_window(c.ring.window * WIDEN_FACTOR);
        }
        let (engine, oracle) = match sides(&c) {
            Ok(x) => x,
            Err(e @ (Error::Inconclusive(_) | Error::CutoffExceeded(_))) => {
                item.detail = Some(e.to_string());
                continue;
            }
            Err(e) => {
                item.verdict = Status::Fail;
                item.detail = Some(e.to_string());
                return item;
            }
        };
        item.engine = engine.to_string();
        item.oracle = oracle.to_string();
        match engine.agree_on_common_window(&oracle, c.min_width) {
            Ok(a) => {
                item.verdict = if a.is_equal() { Status::Pass } else { Status::Fail };
                item.detail = (!a.is_equal()).then(|| format!("{a:?}"));
                return item;
            }
            Err(e) => item.detail = Some(e.to_string()),
        }
    }
    item
}

/// One `CheckReport` per target.
pub fn summarize(items: &[OracleReport]) -> Vec<CheckReport> {
    let mut by: BTreeMap<&str, CheckReport> = BTreeMap::new();
    for it in items {
        let r = by
            .entry(it.target.as_str())
            .or_insert_with(|| CheckReport::new(format!("oracle_{}", it.target)));
        let o = match it.verdict {
            Status::Pass => Outcome::Pass,
            Status::Fail => Outcome::Fail {
                lhs: Some(it.engine.clone()),
                rhs: Some(it.oracle.clone()),
                detail: it.detail.clone(),
            },
            Status::Inconclusive => Outcome::Inconclusive(it.detail.clone().unwrap_or_default()),
        };
        r.record(it.instance.clone(), o);
    }
    by.into_values().collect()
}

pub fn run_oracles(scopes: &[Scope], bounds: &OracleBounds, ctx: &Ctx) -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    for s in scopes {
        out.extend(match s {
            Scope::Characters => oracle_characters(bounds.character_degree, ctx),
            Scope::Lr => oracle_lr(bounds.lr_weight),
            Scope::EulerTail => oracle_euler_tail(bounds.tail_m, ctx),
            Scope::FockWindow => oracle_fock(bounds.fock_weight, ctx)?,
            Scope::Lllz => oracle_lllz(bounds.lllz_weight, ctx),
        });
    }
    Ok(out)
}

// ---- partitions, kept local so the oracles do not lean on the engine's enumerators

fn parts_of(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

fn to_partition(v: &[u32]) -> Partition {
    Partition::from_parts_unsorted(v.to_vec())
}

// ---- (a) Frobenius' formula

/// Permutations of 0..n with their signs.
fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        // insert n-1 at position i: it passes n-1-i larger-index entries
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            let sign = if (p.len() - i) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// Number of ways to put the parts of `nu` into bins with contents `beta`.
fn distributions(nu: &[u32], beta: &mut [i64]) -> i64 {
    let Some((&k, rest)) = nu.split_first() else {
        return beta.iter().all(|&b| b == 0) as i64;
    };
    let mut total = 0;
    for i in 0..beta.len() {
        if beta[i] >= k as i64 {
            beta[i] -= k as i64;
            total += distributions(rest, beta);
            beta[i] += k as i64;
        }
    }
    total
}

/// chi^lambda(nu) as the coefficient of x^{lambda + delta} in a_delta p_nu.
pub fn frobenius_character(lambda: &[u32], nu: &[u32]) -> i64 {
    let n = lambda.len().max(1);
    let l: Vec<i64> = (0..n)
        .map(|i| lambda.get(i).copied().unwrap_or(0) as i64 + (n - 1 - i) as i64)
        .collect();
    let mut total = 0;
    for (sigma, sign) in permutations(n) {
        // a_delta = sum_sigma sgn(sigma) prod x_i^{n-1-sigma(i)}
        let mut beta: Vec<i64> = (0..n).map(|i| l[i] - (n - 1 - sigma[i]) as i64).collect();
        if beta.iter().any(|&b| b < 0) {
            continue;
        }
        total += sign * distributions(nu, &mut beta);
    }
    total
}

fn oracle_characters(d: u32, ctx: &Ctx) -> Vec<OracleReport> {
    let rule = ctx.character_rule();
    let mut jobs = Vec::new();
    for n in 0..=d {
        for l in parts_of(n) {
            for nu in parts_of(n) {
                jobs.push((l.clone(), nu));
            }
        }
    }
    jobs.par_iter()
        .map(|(l, nu)| {
            let engine = character_variant(&to_partition(l), &to_partition(nu), rule).expect("same weight");
            let inst = format!("chi{}({})", to_partition(l), to_partition(nu));
            exact_item("characters", inst, frobenius_character(l, nu), engine)
        })
        .collect()
}

// ---- (b) Littlewood-Richardson from monomial coefficients

/// Semistandard tableaux of shape `shape` and content `content` (a composition),
/// counted by peeling horizontal strips.
pub fn kostka(shape: &[u32], content: &[u32], memo: &mut HashMap<(Vec<u32>, Vec<u32>), u64>) -> u64 {
    let shape: Vec<u32> = shape.iter().copied().filter(|&x| x > 0).collect();
    let Some((&last, head)) = content.split_last() else {
        return shape.is_empty() as u64;
    };
    let key = (shape.clone(), content.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0;
    let mut inner = vec![0u32; shape.len()];
    strips(&shape, 0, last, &mut inner, &mut |mu| total += kostka(mu, head, memo));
    memo.insert(key, total);
    total
}

/// All mu with shape / mu a horizontal strip of size `k`.
fn strips(shape: &[u32], i: usize, k: u32, mu: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if i == shape.len() {
        if k == 0 {
            f(mu);
        }
        return;
    }
    let lo = shape.get(i + 1).copied().unwrap_or(0);
    for m in lo..=shape[i] {
        let take = shape[i] - m;
        if take > k {
            continue;
        }
        mu[i] = m;
        strips(shape, i + 1, k - take, mu, f);
    }
}

/// Compositions alpha <= kappa entrywise with |alpha| = k.
fn sub_compositions(kappa: &[u32], k: u32) -> Vec<Vec<u32>> {
    fn go(kappa: &[u32], i: usize, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == kappa.len() {
            if k == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for a in 0..=kappa[i].min(k) {
            cur.push(a);
            go(kappa, i + 1, k - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(kappa, 0, k, &mut Vec::new(), &mut out);
    out
}

/// s_mu s_nu = sum_lambda c_lambda s_lambda, read off the coefficients of
/// x^kappa (kappa a partition) in the product of monomial expansions.
pub fn lr_by_monomials(mu: &[u32], nu: &[u32]) -> BTreeMap<Vec<u32>, i64> {
    let a: u32 = mu.iter().sum();
    let b: u32 = nu.iter().sum();
    let mut memo = HashMap::new();
    let mut coeff_of = |kappa: &[u32]| -> i64 {
        sub_compositions(kappa, a)
            .iter()
            .map(|alpha| {
                let beta: Vec<u32> = kappa.iter().zip(alpha).map(|(k, x)| k - x).collect();
                (kostka(mu, alpha, &mut memo) * kostka(nu, &beta, &mut memo)) as i64
            })
            .sum()
    };
    // lexicographically decreasing; s_lambda has leading monomial x^lambda
    let shapes = parts_of(a + b);
    let mut out: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    let mut kmemo = HashMap::new();
    for kappa in &shapes {
        let mut c = coeff_of(kappa);
        for (lam, cl) in &out {
            c -= cl * kostka(lam, kappa, &mut kmemo) as i64;
        }
        if c != 0 {
            out.insert(kappa.clone(), c);
        }
    }
    out
}

fn oracle_lr(max_weight: u32) -> Vec<OracleReport> {
    let mut jobs = Vec::new();
    for a in 0..=max_weight {
        for b in 0..=max_weight - a {
            for mu in parts_of(a) {
                for nu in parts_of(b) {
                    jobs.push((mu.clone(), nu));
                }
            }
        }
    }
    jobs.par_iter()
        .flat_map_iter(|(mu, nu)| {
            let table = lr_by_monomials(mu, nu);
            let (pm, pn) = (to_partition(mu), to_partition(nu));
            parts_of(mu.iter().sum::<u32>() + nu.iter().sum::<u32>())
                .into_iter()
                .map(move |l| {
                    let engine = lr_coefficient(&to_partition(&l), &pm, &pn) as i64;
                    let inst = format!("c^{}_{{{},{}}}", to_partition(&l), pm, pn);
                    exact_item("lr", inst, table.get(&l).copied().unwrap_or(0), engine)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

// ---- q-series in quarter powers of q, truncated below an absolute order

type Quarter = BTreeMap<i64, BigInt>;

/// Exponent of x_i = q^{-nu_i + i - 1/2} in quarter units.
fn x_weight(prefix: &[u32], i: usize) -> i64 {
    4 * i as i64 - 2 - 4 * prefix.get(i - 1).copied().unwrap_or(0) as i64
}

fn quarter_mul(a: &Quarter, b: &Quarter, order: i64) -> Quarter {
    let mut out = Quarter::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            if ea + eb < order {
                *out.entry(ea + eb).or_default() += ca * cb;
            }
        }
    }
    out
}

fn quarter_to_qscalar(s: impl IntoIterator<Item = (i64, Rational)>, order: i64, ctx: &Ctx) -> Result<QScalar> {
    let l = ctx.ring.lattice as i64;
    let mut terms = Vec::new();
    for (e, c) in s {
        if c == int(0) {
            continue;
        }
        if (e * l) % 2 != 0 {
            return Err(Error::OffLattice(format!("q^({e}/4)"), ctx.ring.lattice));
        }
        terms.push((e * l / 2, c));
    }
    // round the precision bound down onto the lattice
    let ord = (order * l).div_euclid(2);
    Ok(QScalar::from_terms(ctx.ring, &terms, Some(ord)))
}

/// Quarter-unit bound covering an engine value up to its precision.
fn target_order(engine: &QScalar, ctx: &Ctx) -> i64 {
    let l = ctx.ring.lattice as i64;
    let units = engine
        .order()
        .unwrap_or_else(|| engine.valuation().unwrap_or(0) + ctx.ring.window as i64);
    // quarter units = units * 4 / (2L), rounded up
    (2 * units + l - 1).div_euclid(l)
}

// ---- (c) h_m(q^{-nu-rho}) as a truncated product

/// Coefficient of z^m in prod_i 1 / (1 - z x_i), below q^{order/4}.
pub fn h_direct(m: u32, prefix: &[u32], order: i64) -> Quarter {
    let m = m as usize;
    let mut dp: Vec<Quarter> = vec![Quarter::new(); m + 1];
    dp[0].insert(0, BigInt::from(1));
    if m == 0 {
        return dp.swap_remove(0);
    }
    let w1 = x_weight(prefix, 1);
    for i in 1.. {
        let w = x_weight(prefix, i);
        // any monomial using x_i weighs at least w + (m-1) w1
        if w + (m as i64 - 1) * w1.min(w) >= order {
            break;
        }
        let mut next = dp.clone();
        for j in 1..=m {
            for t in 1..=j {
                let shift = t as i64 * w;
                for (e, c) in &dp[j - t] {
                    if e + shift < order {
                        *next[j].entry(e + shift).or_default() += c;
                    }
                }
            }
        }
        dp = next;
    }
    dp.swap_remove(m)
}

fn oracle_euler_tail(max_m: u32, ctx: &Ctx) -> Vec<OracleReport> {
    let mut jobs = Vec::new();
    for m in 0..=max_m {
        for w in 0..=3 {
            for nu in parts_of(w) {
                jobs.push((m, nu));
            }
        }
    }
    jobs.par_iter()
        .map(|(m, nu)| {
            let inst = format!("h{}(q^(-{}-rho))", m, to_partition(nu));
            series_item("euler-tail", inst, ctx, |c| {
                let engine = h_spec(*m, &to_partition(nu), c.ring);
                let ord = target_order(&engine, c);
                let h = h_direct(*m, nu, ord).into_iter().map(|(e, k)| (e, Rational::from_integer(k)));
                let oracle = quarter_to_qscalar(h, ord, c)?;
                Ok((engine, oracle))
            })
        })
        .collect()
}

// ---- (d) bosonic Fock action against explicit fermions

fn fock_ops() -> Vec<(String, Op)> {
    let mut ops = Vec::new();
    for m in [-3, -2, -1, 1, 2, 3] {
        ops.push((format!("J{m}"), Op::j(m)));
    }
    for k in [-1, 1, 2] {
        for m in -2..=2 {
            ops.push((format!("V({k})_{m}"), Op::v(k, m)));
        }
    }
    ops.push(("K".into(), Op::K));
    for nu in [Partition::empty(), to_partition(&[1])] {
        for primed in [false, true] {
            let spec = Specialization {
                prefix: nu.clone(),
                primed,
            };
            let tag = format!("{}({}){}", "", nu, if primed { "'" } else { "" });
            ops.push((format!("Gamma-{tag}"), Op::GammaMinus(spec.clone())));
            ops.push((format!("Gamma+{tag}"), Op::GammaPlus(spec)));
        }
    }
    ops
}

fn oracle_fock(max_weight: u32, ctx: &Ctx) -> Result<Vec<OracleReport>> {
    let states = states_up_to(max_weight);
    let window = FermionWindow::for_weights(max_weight, max_weight)?;
    let mut jobs = Vec::new();
    for (name, op) in fock_ops() {
        for mu in &states {
            jobs.push((name.clone(), op.clone(), mu.clone()));
        }
    }
    let out: Vec<Vec<OracleReport>> = jobs
        .par_iter()
        .map(|(name, op, mu)| {
            let col = Mutex::new(None::<(u32, crate::fock::FockVector)>);
            states
                .iter()
                .map(|lambda| {
                    let inst = format!("<{lambda}|{name}|{mu}>");
                    series_item("fock-window", inst, ctx, |c| {
                        let mut cached = col.lock().unwrap();
                        if cached.as_ref().map(|x| x.0) != Some(c.ring.window) {
                            *cached = Some((c.ring.window, column(op, mu, max_weight, c)?));
                        }
                        let engine = cached.as_ref().unwrap().1.get(lambda);
                        let oracle = fermion_window_oracle(lambda, mu, op, &window, max_weight, c)?;
                        Ok((engine, oracle))
                    })
                })
                .collect()
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

// ---- (e) LLLZ re-summed without pruning

/// Sum over SSYT of `shape` of prod x_{T(b)}, x_i = q^{-prefix_i + i - 1/2},
/// keeping exponents below q^{order/4}.
pub fn schur_by_tableaux(shape: &[u32], prefix: &[u32], order: i64) -> Quarter {
    let boxes: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
        .collect();
    // smallest possible weight of the boxes from position j on
    let mut rest = vec![0i64; boxes.len() + 1];
    for j in (0..boxes.len()).rev() {
        rest[j] = rest[j + 1] + x_weight(prefix, boxes[j].0 + 1);
    }
    let mut grid: Vec<Vec<usize>> = shape.iter().map(|&l| vec![0; l as usize]).collect();
    let mut out = Quarter::new();
    fn go(
        j: usize,
        acc: i64,
        boxes: &[(usize, usize)],
        rest: &[i64],
        grid: &mut Vec<Vec<usize>>,
        prefix: &[u32],
        order: i64,
        out: &mut Quarter,
    ) {
        if j == boxes.len() {
            *out.entry(acc).or_default() += 1;
            return;
        }
        let (r, c) = boxes[j];
        let mut lo = r + 1;
        if c > 0 {
            lo = lo.max(grid[r][c - 1]);
        }
        if r > 0 {
            lo = lo.max(grid[r - 1][c] + 1);
        }
        for v in lo.. {
            let w = acc + x_weight(prefix, v);
            if w + rest[j + 1] >= order {
                break;
            }
            grid[r][c] = v;
            go(j + 1, w, boxes, rest, grid, prefix, order, out);
        }
    }
    go(0, 0, &boxes, &rest, &mut grid, prefix, order, &mut out);
    out
}

/// Weight of the lowest tableau, row r filled with r.
fn lowest_tableau(shape: &[u32], prefix: &[u32]) -> i64 {
    shape.iter().enumerate().map(|(r, &l)| l as i64 * x_weight(prefix, r + 1)).sum()
}

fn z_of(xi: &[u32]) -> i64 {
    let mut z = 1i64;
    let mut i = 0;
    while i < xi.len() {
        let mut j = i;
        while j < xi.len() && xi[j] == xi[i] {
            j += 1;
        }
        let m = (j - i) as i64;
        z *= (xi[i] as i64).pow(m as u32) * (1..=m).product::<i64>();
        i = j;
    }
    z
}

fn conj(v: &[u32]) -> Vec<u32> {
    to_partition(v).conjugate().parts().to_vec()
}

fn kappa(v: &[u32]) -> i64 {
    to_partition(v).kappa()
}

struct LrCache(HashMap<(Vec<u32>, Vec<u32>), BTreeMap<Vec<u32>, i64>>);

impl LrCache {
    fn get(&mut self, lambda: &[u32], mu: &[u32], nu: &[u32]) -> i64 {
        let key = (mu.to_vec(), nu.to_vec());
        let t = self.0.entry(key).or_insert_with(|| lr_by_monomials(mu, nu));
        t.get(lambda).copied().unwrap_or(0)
    }
}

/// tildeC_mu summed over every eta1, eta3, nu1, nu3, nu+ of the right sizes,
/// in quarter units, below q^{order/4}.
pub fn lllz_unpruned(t: &Triple, order: i64) -> BTreeMap<i64, Rational> {
    let (m1, m2, m3) = (t.mu1.parts().to_vec(), t.mu2.parts().to_vec(), t.mu3.parts().to_vec());
    let (w1, w2, w3) = (t.mu1.weight(), t.mu2.weight(), t.mu3.weight());
    let pref = 2 * kappa(&m1) - 4 * kappa(&m2) - kappa(&m3);
    let mut lr = LrCache(HashMap::new());
    let mut total: BTreeMap<i64, Rational> = BTreeMap::new();
    for s in 0..=w1 {
        for eta1 in parts_of(s) {
            for r in 0..=w3 {
                for eta3 in parts_of(r) {
                    let x = if r == 2 * s {
                        parts_of(s)
                            .iter()
                            .map(|xi| {
                                let xi2: Vec<u32> = xi.iter().map(|k| 2 * k).collect();
                                int(frobenius_character(&eta1, xi) * frobenius_character(&eta3, &xi2))
                                    / int(z_of(xi))
                            })
                            .sum()
                    } else {
                        int(0)
                    };
                    for nu1 in parts_of(w1 - s) {
                        let c1 = lr.get(&m1, &conj(&eta1), &nu1);
                        for nu3 in parts_of(w3 - r) {
                            let c3 = lr.get(&m3, &eta3, &conj(&nu3));
                            for nup in parts_of(w1 - s + w2) {
                                let c2 = lr.get(&nup, &conj(&nu1), &m2);
                                let c = int(c1 * c2 * c3) * &x;
                                if c == int(0) {
                                    continue;
                                }
                                let shift = pref + 4 * kappa(&nup) + kappa(&nu3);
                                let (va, vb) = (lowest_tableau(&nup, &[]), lowest_tableau(&nu3, &nup));
                                let a = schur_by_tableaux(&nup, &[], order - shift - vb);
                                let b = schur_by_tableaux(&nu3, &nup, order - shift - va);
                                for (e, k) in quarter_mul(&a, &b, order - shift) {
                                    *total.entry(e + shift).or_insert_with(|| int(0)) +=
                                        Rational::from_integer(k) * &c;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    total
}

fn oracle_lllz(max_weight: u32, ctx: &Ctx) -> Vec<OracleReport> {
    let l = ctx.ring.lattice;
    // quarter powers of q need an even lattice
    let c0 = if l % 2 == 0 { *ctx } else { ctx.with_lattice(2 * l) };
    let ts = triples_up_to(max_weight);
    ts.par_iter()
        .map(|t| {
            series_item("lllz", t.to_string(), &c0, |c| {
                let engine = lllz_coefficient(t, c);
                let ord = target_order(&engine, c);
                let oracle = quarter_to_qscalar(lllz_unpruned(t, ord), ord, c)?;
                Ok((engine, oracle))
            })
        })
        .collect()
}

// ---- negative controls

#[derive(Clone, Debug, Serialize)]
pub struct MutationControl {
    pub mutation: Option<Mutation>,
    /// suites that did not pass
    pub failed: Vec<String>,
    /// a mutant is caught when some suite fails; the clean run must pass everything
    pub ok: bool,
}

type Suite = (&'static str, fn(&Ctx) -> Result<Status>);

fn control_suites() -> Vec<Suite> {
    use crate::fock::checks::{check_factorization, shift_suite};
    use crate::hodge::{verify_generating_theorem1, verify_reduction_tau1};
    use crate::report::combined_status;
    use crate::vertex::{verify_cyclic, verify_theorem1};
    vec![
        ("theorem1", |c| Ok(verify_theorem1(3, c).status)),
        ("cyclic", |c| Ok(verify_cyclic(3, c).status)),
        ("shift", |c| Ok(combined_status(&shift_suite(1, 1, 2, c)?))),
        ("factorization", |c| Ok(check_factorization(1, true, 2, 2, c)?.status)),
        ("W=expG", |c| Ok(verify_generating_theorem1(&int(1), [2, 2, 2], c)?.status)),
        ("reduction_tau1", |c| Ok(verify_reduction_tau1([2, 2, 2], c)?.status)),
        ("oracle_characters", |c| {
            Ok(combined_status(&summarize(&oracle_characters(4, c))))
        }),
        ("oracle_lllz", |c| Ok(combined_status(&summarize(&oracle_lllz(2, c))))),
    ]
}

/// Runs a small battery of suites clean and under every mutation.
pub fn mutation_controls(ctx: &Ctx) -> Result<Vec<MutationControl>> {
    let mut runs: Vec<Option<Mutation>> = vec![None];
    runs.extend(Mutation::ALL.into_iter().map(Some));
    let suites = control_suites();
    runs.into_iter()
        .map(|m| {
            let c = ctx.with_mutation(m);
            let mut failed = Vec::new();
            for (name, f) in &suites {
                if f(&c)? != Status::Pass {
                    failed.push(name.to_string());
                }
            }
            let ok = if m.is_none() { failed.is_empty() } else { !failed.is_empty() };
            Ok(MutationControl { mutation: m, failed, ok })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::Ring;

    fn ctx() -> Ctx {
        Ctx::new(Ring::new(1, 40).unwrap())
    }

    #[test]
    fn frobenius_small() {
        assert_eq!(frobenius_character(&[2, 1], &[1, 1, 1]), 2);
        assert_eq!(frobenius_character(&[2, 1], &[3]), -1);
        assert_eq!(frobenius_character(&[1, 1], &[2]), -1);
        assert_eq!(frobenius_character(&[], &[]), 1);
    }

    #[test]
    fn monomial_lr() {
        let t = lr_by_monomials(&[2, 1], &[2, 1]);
        assert_eq!(t.get(&vec![3, 2, 1]), Some(&2));
        assert_eq!(t.get(&vec![4, 2]), Some(&1));
        assert_eq!(t.values().sum::<i64>(), 8);
    }

    #[test]
    fn tableaux_and_products_agree() {
        for m in 0..5 {
            for nu in [vec![], vec![1], vec![2, 1]] {
                assert_eq!(h_direct(m, &nu, 60), schur_by_tableaux(&[m], &nu, 60), "{m} {nu:?}");
            }
        }
    }

    #[test]
    fn quick_scopes_pass() {
        let c = ctx();
        let items = run_oracles(&Scope::ALL, &OracleBounds::quick(), &c).unwrap();
        for r in summarize(&items) {
            assert!(r.passed(), "{}", r.summary());
        }
    }

    #[test]
    fn scope_names() {
        assert_eq!("d".parse::<Scope>().unwrap(), Scope::FockWindow);
        assert_eq!("lllz".parse::<Scope>().unwrap(), Scope::Lllz);
        assert!("x".parse::<Scope>().is_err());
    }
}
