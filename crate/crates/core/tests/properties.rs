use proptest::prelude::*;

use topvertex::context::Ctx;
use topvertex::fock::checks::check_commutator;
use topvertex::fock::{matrix_element, Op};
use topvertex::hodge::expg_series;
use topvertex::partition::{add_ribbons, character, partitions_of, remove_ribbons, MayaDiagram, Partition};
use topvertex::qscalar::{int, rat, Agreement, QScalar, Ring};
use topvertex::symfun::{lr_coefficient, schur_spec, skew_schur_spec, Specialization};
use topvertex::vertex::verify_two_legged_identity;

fn ring() -> Ring {
    Ring::new(1, 40).unwrap()
}

fn ctx() -> Ctx {
    Ctx::new(ring())
}

fn partition(max: u32) -> impl Strategy<Value = Partition> {
    (0..=max).prop_flat_map(|n| {
        let ps = partitions_of(n);
        (0..ps.len()).prop_map(move |i| ps[i].clone())
    })
}

fn partition_of(n: u32) -> impl Strategy<Value = Partition> {
    let ps = partitions_of(n);
    (0..ps.len()).prop_map(move |i| ps[i].clone())
}

/// A truncated series with a handful of small terms.
fn series() -> impl Strategy<Value = QScalar> {
    (
        prop::collection::vec((-8i64..12, -5i64..6, 1i64..4), 1..6),
        prop::option::of(12i64..30),
    )
        .prop_map(|(ts, order)| {
            let terms: Vec<_> = ts.into_iter().map(|(e, n, d)| (e, rat(n, d))).collect();
            QScalar::from_terms(ring(), &terms, order)
        })
}

fn unit_series() -> impl Strategy<Value = QScalar> {
    (series(), -6i64..6, 1i64..5).prop_map(|(s, e, c)| {
        // force a nonzero lowest term
        let low = s.valuation().map_or(e, |v| v.min(e) - 1);
        &s + &QScalar::from_terms(ring(), &[(low, int(c))], None)
    })
}

fn no_difference(a: &QScalar, b: &QScalar) -> bool {
    !matches!(a.agree_on_common_window(b, 0), Ok(Agreement::Differ { .. }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ribbon_duality(alpha in partition(6), k in 1u32..=6) {
        for r in add_ribbons(&alpha, k) {
            let back = remove_ribbons(&r.partition, k);
            let m = back.iter().find(|x| x.partition == alpha);
            prop_assert!(m.is_some());
            prop_assert_eq!(m.unwrap().sign, r.sign);
        }
        for r in remove_ribbons(&alpha, k) {
            prop_assert!(add_ribbons(&r.partition, k).iter().any(|x| x.partition == alpha));
        }
    }

    #[test]
    fn character_orthogonality((mu, lambda) in (0u32..=6).prop_flat_map(|d| (partition_of(d), partition_of(d)))) {
        let d = mu.weight();
        let mut s = int(0);
        for nu in partitions_of(d) {
            let x = character(&mu, &nu).unwrap() * character(&lambda, &nu).unwrap();
            s += int(x) / int(nu.z() as i64);
        }
        prop_assert_eq!(s, int((mu == lambda) as i64));
    }

    #[test]
    fn maya_round_trip(mu in partition(12)) {
        prop_assert_eq!(MayaDiagram::from_partition(&mu).to_partition(), mu);
    }

    #[test]
    fn ring_axioms(a in series(), b in series(), c in series()) {
        prop_assert!(no_difference(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
        prop_assert!(no_difference(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c))));
        prop_assert!(no_difference(&(&a + &b), &(&b + &a)));
        prop_assert!(no_difference(&(&a * &b), &(&b * &a)));
    }

    #[test]
    fn truncation_monotone(lambda in partition(4), nu in partition(3)) {
        let spec = Specialization::shifted(nu);
        let narrow = schur_spec(&lambda, &spec, ring());
        let wide = schur_spec(&lambda, &spec, ring().with_window(80));
        prop_assert!(no_difference(&narrow, &wide));
    }

    #[test]
    fn transpose_twist(mu in partition(6)) {
        let r = ring();
        let lhs = schur_spec(&mu.conjugate(), &Specialization::rho(), r);
        let rhs = schur_spec(&mu, &Specialization::rho(), r).mul_q_pow(&rat(mu.kappa(), 2)).unwrap();
        prop_assert!(lhs.agree_on_common_window(&rhs, 20).unwrap().is_equal());
    }

    #[test]
    fn lr_symmetry(mu in partition(4), nu in partition(4)) {
        for eta in partitions_of(mu.weight() + nu.weight()) {
            prop_assert_eq!(lr_coefficient(&eta, &mu, &nu), lr_coefficient(&eta, &nu, &mu));
        }
    }

    #[test]
    fn skew_jacobi_trudi_is_lr_expansion(mu in partition(6), k in 0u32..=3, pre in partition(2)) {
        let r = ring();
        let spec = Specialization::shifted(pre);
        for nu in partitions_of(k.min(mu.weight())).into_iter().filter(|n| mu.contains(n)) {
            let lhs = skew_schur_spec(&mu, &nu, &spec, r);
            let mut rhs = QScalar::zero(r);
            for eta in partitions_of(mu.weight() - nu.weight()) {
                let c = lr_coefficient(&mu, &nu, &eta);
                if c != 0 {
                    rhs = &rhs + &schur_spec(&eta, &spec, r).scale_int(c as i64);
                }
            }
            prop_assert!(lhs.agree_on_common_window(&rhs, 20).unwrap().is_equal(), "{} / {}", mu, nu);
        }
    }

    #[test]
    fn gamma_adjointness(lambda in partition(4), mu in partition(4), pre in partition(1), primed: bool) {
        let c = ctx();
        let spec = Specialization { prefix: pre, primed };
        let a = matrix_element(&Op::GammaPlus(spec.clone()), &lambda, &mu, &c).unwrap();
        let b = matrix_element(&Op::GammaMinus(spec), &mu, &lambda, &c).unwrap();
        prop_assert!(a.agree_on_common_window(&b, 0).unwrap().is_equal());
    }

    #[test]
    fn two_leg_operator_is_self_adjoint(alpha in partition(4), beta in partition(4)) {
        let c = ctx();
        let op = Op::Product(vec![Op::GammaMinus(Specialization::rho()), Op::GammaPlus(Specialization::rho())]);
        let a = matrix_element(&op, &alpha, &beta, &c).unwrap();
        let b = matrix_element(&op, &beta, &alpha, &c).unwrap();
        prop_assert!(a.agree_on_common_window(&b, 20).unwrap().is_equal());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_is_two_sided(a in unit_series()) {
        let inv = a.invert().unwrap();
        let one = QScalar::one(ring());
        prop_assert!(no_difference(&(&a * &inv), &one));
        prop_assert!(no_difference(&(&inv * &a), &one));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quantum_torus_commutator(k in -2i64..=2, l in -2i64..=2, m in -2i64..=2, n in -2i64..=2) {
        let r = check_commutator(k, m, l, n, 4, &ctx()).unwrap();
        prop_assert!(r.passed(), "{}", r.summary());
    }
}

#[test]
fn two_legged_identity_up_to_six() {
    let r = verify_two_legged_identity(6, &ctx());
    assert!(r.passed(), "{}", r.summary());
}

#[test]
fn log_of_exp_g_has_no_constant_term() {
    for tau in [int(1), int(2)] {
        let c = ctx().with_lattice(3);
        let s = expg_series(&tau, [2, 2, 2], &c).unwrap();
        let g = s.log().unwrap();
        assert!(g.coeff(&g.empty_monomial()).is_exact_zero());
        // exp(log) returns the series
        assert!(g.exp().unwrap().first_mismatch(&s, 0).unwrap().is_none());
    }
}
