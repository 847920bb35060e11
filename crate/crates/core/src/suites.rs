//! Named verification suites with their default scopes.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::fock::checks::{check_factorization, check_transpose_relation, shift_suite};
use crate::hodge::{
    verify_fermionic_w, verify_generating_theorem1, verify_quadratic_expansion, verify_reduction_tau1,
    verify_reduction_taun, verify_schur_expansion_prop43,
};
use crate::kp::{
    check_plucker, check_reduction_condition, check_shifted_flow_form, check_strong_condition,
    check_tau_factorization, negative_controls, TauSpec,
};
use crate::oracle::{mutation_controls, run_oracles, summarize, MutationControl, OracleBounds, Scope};
use crate::partition::partitions_of;
use crate::qscalar::{int, Rational};
use crate::report::{combined_status, CheckReport, Outcome, Status};
use crate::vertex::{
    verify_cyclic, verify_reduction_c_all, verify_theorem1, verify_theorem1_in_box, verify_two_legged_chain, verify_two_partition_form,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorem1,
    Cyclic,
    Shift,
    Factorization,
    Reductions,
    Kp,
    Oracles,
    All,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Theorem1,
        Suite::Cyclic,
        Suite::Shift,
        Suite::Factorization,
        Suite::Reductions,
        Suite::Kp,
        Suite::Oracles,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Cyclic => "cyclic",
            Suite::Shift => "shift",
            Suite::Factorization => "factorization",
            Suite::Reductions => "reductions",
            Suite::Kp => "kp",
            Suite::Oracles => "oracles",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

/// Overrides of the per-suite default scopes.
#[derive(Clone, Debug, Default)]
pub struct SuiteBounds {
    pub weight: Option<u32>,
    pub degree: Option<u32>,
    pub ns: Option<Vec<u32>>,
    pub taus: Option<Vec<Rational>>,
    /// oracle bounds at full size
    pub full: bool,
}

impl SuiteBounds {
    fn weight_or(&self, d: u32) -> u32 {
        self.weight.unwrap_or(d)
    }

    fn degree_or(&self, d: u32) -> u32 {
        self.degree.unwrap_or(d)
    }

    fn ns_or(&self, d: &[u32]) -> Vec<u32> {
        self.ns.clone().unwrap_or_else(|| d.to_vec())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteRun {
    pub suite: Suite,
    pub status: Status,
    pub reports: Vec<CheckReport>,
    /// reported but not part of the status
    pub informational: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation_controls: Option<Vec<MutationControl>>,
}

impl SuiteRun {
    fn new(suite: Suite) -> Self {
        SuiteRun {
            suite,
            status: Status::Pass,
            reports: Vec::new(),
            informational: Vec::new(),
            mutation_controls: None,
        }
    }

    fn finish(mut self) -> Self {
        self.status = combined_status(&self.reports);
        self
    }
}

pub fn run_suite(suite: Suite, b: &SuiteBounds, ctx: &Ctx) -> Result<SuiteRun> {
    let mut run = SuiteRun::new(suite);
    let r = &mut run.reports;
    match suite {
        Suite::Theorem1 => {
            let w = b.weight_or(4);
            r.push(verify_theorem1(w, ctx));
            r.push(verify_theorem1_in_box(w, ctx));
            let c = w.min(3);
            for tau in b.taus.clone().unwrap_or_else(|| vec![int(1)]) {
                r.push(verify_generating_theorem1(&tau, [c, c, c], ctx)?);
            }
        }
        Suite::Cyclic => {
            let w = b.weight_or(5);
            r.push(verify_cyclic(w, ctx));
            r.push(verify_two_legged_chain(w.min(4), ctx));
        }
        Suite::Shift => {
            r.extend(shift_suite(2, b.weight_or(3), b.degree_or(4), ctx)?);
        }
        Suite::Factorization => {
            let t = b.degree_or(3);
            for n in b.ns_or(&[1, 2, 3]) {
                for primed in [false, true] {
                    r.push(check_factorization(n, primed, t, 3, ctx)?);
                }
                for alpha in (0..=2).flat_map(partitions_of) {
                    r.push(check_transpose_relation(&alpha, &int(n as i64), 2, ctx)?);
                }
            }
        }
        Suite::Reductions => {
            let w = b.weight_or(3);
            r.push(verify_reduction_tau1([w, w, w], ctx)?);
            for n in b.ns_or(&[2]) {
                if n > 1 {
                    r.push(verify_reduction_taun(n, [w, w, w], ctx)?);
                }
            }
            r.push(verify_reduction_c_all(w + 1, ctx));
            r.push(verify_two_partition_form(w + 2, ctx));
            let d = b.degree_or(6);
            r.push(verify_quadratic_expansion(d / 3, d - d / 3, ctx)?);
            r.push(verify_schur_expansion_prop43([2, 2, 2], 10, ctx)?);
            r.push(verify_fermionic_w([2, 2, 2], 10, ctx)?);
        }
        Suite::Kp => {
            let d = b.degree_or(6);
            for n in b.ns_or(&[1, 2]) {
                let spec = TauSpec::new(n, 0, 2, d);
                r.push(check_reduction_condition(&spec, 2, 1, ctx)?);
                r.push(check_plucker(&spec, d, ctx)?);
                r.push(negative_control_report(&spec, d, ctx)?);
                for m in 1..=2 {
                    r.push(check_shifted_flow_form(n, m, 4, ctx)?);
                }
                r.push(check_tau_factorization(&TauSpec::new(n, 1, 1, d.min(n + 3)), ctx)?);
                run.informational.push(check_strong_condition(&spec, 1, ctx)?);
            }
        }
        Suite::Oracles => {
            let bounds = if b.full { OracleBounds::full() } else { OracleBounds::quick() };
            r.extend(summarize(&run_oracles(&Scope::ALL, &bounds, ctx)?));
            let mc = mutation_controls(ctx)?;
            let mut rep = CheckReport::new("mutation_controls");
            for m in &mc {
                let name = m.mutation.map_or("none".to_string(), |x| x.to_string());
                rep.record(
                    name,
                    Outcome::from_bool(m.ok, || format!("failing suites: {:?}", m.failed)),
                );
            }
            r.push(rep);
            run.mutation_controls = Some(mc);
        }
        Suite::All => {
            for s in Suite::ALL.into_iter().filter(|&s| s != Suite::All) {
                let sub = run_suite(s, b, ctx)?;
                run.reports.extend(sub.reports);
                run.informational.extend(sub.informational);
                if sub.mutation_controls.is_some() {
                    run.mutation_controls = sub.mutation_controls;
                }
            }
        }
    }
    Ok(run.finish())
}

/// The Plucker/Hirota certificate must fail on every perturbed T.
pub fn negative_control_report(spec: &TauSpec, size_bound: u32, ctx: &Ctx) -> Result<CheckReport> {
    let mut rep = CheckReport::new("kp_plucker_negative_controls").param("tau", spec);
    for bad in negative_controls(spec) {
        let st = check_plucker(&bad, size_bound, ctx)?.status;
        let p = bad.perturb.as_ref().expect("perturbed");
        rep.record(
            format!("t{}{:+}", p.t_monomial, p.delta),
            Outcome::from_bool(st == Status::Fail, || format!("certificate status {st}")),
        );
    }
    Ok(rep)
}
