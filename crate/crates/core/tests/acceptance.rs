//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use topvertex::context::Ctx;
use topvertex::fock::checks::{check_factorization, shift_suite};
use topvertex::hodge::{verify_quadratic_expansion, verify_reduction_tau1, verify_reduction_taun};
use topvertex::oracle::{mutation_controls, run_oracles, summarize, OracleBounds, Scope};
use topvertex::qscalar::Ring;
use topvertex::report::{combined_status, CheckReport, Status};
use topvertex::suites::{run_suite, Suite, SuiteBounds};
use topvertex::vertex::{verify_cyclic, verify_theorem1, verify_theorem1_in_box};

/// Comparison tolerances: u = q^{1/2}, 40 lattice units kept, at least 20 compared.
const LATTICE: u32 = 1;
const WINDOW: u32 = 40;
const MIN_WIDTH: i64 = 20;

const MINUTE: u64 = 60;

fn ctx() -> Ctx {
    let mut c = Ctx::new(Ring::new(LATTICE, WINDOW).unwrap());
    c.min_width = MIN_WIDTH;
    c
}

struct Criterion {
    id: u32,
    what: &'static str,
    limit: Duration,
    run: fn(&Ctx) -> Result<(Vec<CheckReport>, String), String>,
}

fn reports(rs: Vec<CheckReport>) -> Result<(Vec<CheckReport>, String), String> {
    let n: usize = rs.iter().map(|r| r.pairs_checked).sum();
    Ok((rs, format!("{n} instances")))
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            what: "Theorem 1, tildeC = q^{-sum kappa/2} C, |mu| <= 4 and every leg <= 4",
            limit: Duration::from_secs(5 * MINUTE),
            run: |c| reports(vec![verify_theorem1(4, c), verify_theorem1_in_box(4, c)]),
        },
        Criterion {
            id: 2,
            what: "cyclic symmetry of C, |mu| <= 5",
            limit: Duration::from_secs(2 * MINUTE),
            run: |c| reports(vec![verify_cyclic(5, c)]),
        },
        Criterion {
            id: 3,
            what: "generalized shift symmetries, |k|,|m| <= 2, |alpha| <= 3, states <= 4",
            limit: Duration::from_secs(5 * MINUTE),
            run: |c| reports(shift_suite(2, 3, 4, c).map_err(|e| e.to_string())?),
        },
        Criterion {
            id: 4,
            what: "factorization at tau = 1, 1/2, 1/3, t-degree <= 3, states <= 3",
            limit: Duration::from_secs(10 * MINUTE),
            run: |c| {
                let mut rs = Vec::new();
                for n in [1, 2, 3] {
                    for primed in [false, true] {
                        rs.push(check_factorization(n, primed, 3, 3, c).map_err(|e| e.to_string())?);
                    }
                }
                reports(rs)
            },
        },
        Criterion {
            id: 5,
            what: "reduction formulas at tau = 1 and tau = 2, per-family weight <= 3",
            limit: Duration::from_secs(5 * MINUTE),
            run: |c| {
                let a = verify_reduction_tau1([3, 3, 3], c).map_err(|e| e.to_string())?;
                let b = verify_reduction_taun(2, [3, 3, 3], c).map_err(|e| e.to_string())?;
                reports(vec![a, b])
            },
        },
        Criterion {
            id: 6,
            what: "quadratic-exponential Schur expansion, total degree <= 6",
            limit: Duration::from_secs(MINUTE),
            run: |c| reports(vec![verify_quadratic_expansion(2, 4, c).map_err(|e| e.to_string())?]),
        },
        Criterion {
            id: 7,
            what: "KP reduction, N in {1,2}, k <= 2, m = 1, D_t = 6, formal p2 <= 2, Plucker certificate",
            limit: Duration::from_secs(10 * MINUTE),
            run: |c| {
                let b = SuiteBounds {
                    degree: Some(6),
                    ns: Some(vec![1, 2]),
                    ..Default::default()
                };
                let run = run_suite(Suite::Kp, &b, c).map_err(|e| e.to_string())?;
                let strong: Vec<String> =
                    run.informational.iter().map(|r| format!("{}", r.status)).collect();
                let (rs, n) = reports(run.reports)?;
                Ok((rs, format!("{n}; strong condition dT/dt = 0 (not asserted): {}", strong.join("/"))))
            },
        },
        Criterion {
            id: 8,
            what: "oracle suite at full bounds",
            limit: Duration::from_secs(15 * MINUTE),
            run: |c| {
                let items = run_oracles(&Scope::ALL, &OracleBounds::full(), c).map_err(|e| e.to_string())?;
                reports(summarize(&items))
            },
        },
        Criterion {
            id: 9,
            what: "negative controls: every mutation fails some suite, clean run passes",
            limit: Duration::from_secs(5 * MINUTE),
            run: |c| {
                let mc = mutation_controls(c).map_err(|e| e.to_string())?;
                let mut r = CheckReport::new("mutation_controls");
                let mut caught = Vec::new();
                for m in &mc {
                    let name = m.mutation.map_or("none".to_string(), |x| x.to_string());
                    if m.mutation.is_some() {
                        caught.push(format!("{name}:{}", m.failed.len()));
                    }
                    let o = topvertex::report::Outcome::from_bool(m.ok, || format!("{:?}", m.failed));
                    r.record(name, o);
                }
                Ok((vec![r], format!("failing suites per mutant {}", caught.join(" "))))
            },
        },
    ]
}

fn main() -> ExitCode {
    let c = ctx();
    let mut all_pass = true;
    for cr in criteria() {
        let t0 = Instant::now();
        let res = (cr.run)(&c);
        let dt = t0.elapsed();
        let (status, note) = match res {
            Ok((rs, note)) => (combined_status(&rs), (note, rs)),
            Err(e) => (Status::Fail, (format!("error: {e}"), Vec::new())),
        };
        let in_time = dt <= cr.limit;
        let pass = status == Status::Pass && in_time;
        all_pass &= pass;
        println!(
            "criterion {} [{}] {} ({}; {:.2}s, limit {}s)",
            cr.id,
            if pass { "PASS" } else { "FAIL" },
            cr.what,
            note.0,
            dt.as_secs_f64(),
            cr.limit.as_secs()
        );
        if !pass {
            for r in note.1.iter().filter(|r| r.status != Status::Pass) {
                println!("    {}", r.summary());
                for f in r.failures.iter().take(3) {
                    println!("      {} {:?}", f.instance, f.detail);
                }
            }
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
