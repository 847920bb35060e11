use serde::Deserialize;

use topvertex::context::Ctx;
use topvertex::kp::{
    build_tau, check_plucker, check_reduction_condition, check_shifted_flow_form, check_tau_factorization,
    negative_controls, TauSpec,
};
use topvertex::partition::Partition;
use topvertex::qscalar::{parse_rational, QScalar, Ring};

fn ctx() -> Ctx {
    Ctx::new(Ring::new(1, 40).unwrap())
}

#[derive(Deserialize)]
struct Golden {
    #[serde(rename = "N")]
    n: u32,
    max_weight: u32,
    table: Vec<Entry>,
}

#[derive(Deserialize)]
struct Entry {
    lambda: Vec<u32>,
    terms: Vec<(String, String)>,
    order: String,
}

#[test]
fn schur_table_matches_hook_formula() {
    let g: Golden = serde_json::from_str(include_str!("golden/tau_schur_n1.json")).unwrap();
    let c = ctx();
    let t = build_tau(&TauSpec::new(g.n, 0, 0, g.max_weight), &c).unwrap();
    let cs = t.schur_coefficients(g.max_weight);
    assert_eq!(cs.len(), g.table.len());
    for e in &g.table {
        let lambda = Partition::new(e.lambda.clone()).unwrap();
        let terms: Vec<_> = e
            .terms
            .iter()
            .map(|(x, k)| (c.ring.units(&parse_rational(x).unwrap()).unwrap(), parse_rational(k).unwrap()))
            .collect();
        let order = c.ring.units(&parse_rational(&e.order).unwrap()).unwrap();
        let want = QScalar::from_terms(c.ring, &terms, Some(order));
        let got = cs[&lambda].coeff(&cs[&lambda].empty_monomial());
        let a = got.agree_on_common_window(&want, c.min_width).unwrap();
        assert!(a.is_equal(), "c_{lambda}: {got} vs {want}");
    }
}

#[test]
fn reduction_condition_examples() {
    let c = ctx();
    for n in [1, 2] {
        let spec = TauSpec::new(n, 0, 2, 6);
        let r = check_reduction_condition(&spec, 1, 1, &c).unwrap();
        assert!(r.passed(), "{}", r.summary());
    }
    let err = check_reduction_condition(&TauSpec::new(1, 0, 0, 4), 2, 2, &c).unwrap_err();
    assert!(err.to_string().contains("feasible"));
}

#[test]
fn plucker_controls() {
    let c = ctx();
    let spec = TauSpec::new(2, 0, 1, 6);
    assert!(check_plucker(&spec, 6, &c).unwrap().passed());
    for bad in negative_controls(&spec) {
        assert!(!check_plucker(&bad, 6, &c).unwrap().passed());
        assert!(!check_tau_factorization(&bad, &c).unwrap().passed());
    }
}

#[test]
fn shifted_flow_form_examples() {
    let c = ctx();
    for (n, m) in [(1, 1), (2, 1), (1, 2)] {
        let r = check_shifted_flow_form(n, m, 3, &c).unwrap();
        assert!(r.passed(), "{}", r.summary());
    }
}

#[test]
fn factorization_with_formal_p1() {
    let c = ctx();
    for n in [1, 2] {
        let r = check_tau_factorization(&TauSpec::new(n, 2, 1, n + 3), &c).unwrap();
        assert!(r.passed(), "{}", r.summary());
    }
}
