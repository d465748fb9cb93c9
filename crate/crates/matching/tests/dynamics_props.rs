use matching_entropy::dynamics::*;
use matching_entropy::exact::{rat, FieldElement, Rational};
use matching_entropy::spectral::{build_partition, transition_matrices, zero_one, PartitionSource};
use proptest::prelude::*;

fn s2() -> SlopeSpec {
    SlopeSpec::integer(2)
}

fn finite_rational(e: &Endpoint) -> Option<Rational> {
    e.finite().and_then(|x| x.as_rational().cloned())
}

fn r_count(code: &[Branch]) -> usize {
    code.iter().filter(|b| **b == Branch::R).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificates_hold_across_their_interval(q in 3i64..400, t in 0.0f64..1.0) {
        let p = ((2 * q) as f64 / 3.0 * t).floor() as i64 + 1;
        let gamma = FieldElement::Rational(rat(p, q));
        let Ok(cert) = detect_matching(&s2(), &gamma, DEFAULT_BUDGET) else { return Ok(()) };
        let (Some(lo), Some(hi)) = (finite_rational(&cert.lo), finite_rational(&cert.hi)) else { return Ok(()) };
        for k in 1..=10 {
            let g = &lo + (&hi - &lo) * rat(k, 11);
            let other = detect_matching(&s2(), &FieldElement::Rational(g.clone()), DEFAULT_BUDGET).unwrap();
            prop_assert_eq!((other.kappa_minus, other.kappa_plus, other.delta), (cert.kappa_minus, cert.kappa_plus, cert.delta));
            prop_assert_eq!(other.lower.branch_code(), cert.lower.branch_code());
            prop_assert_eq!(other.upper.branch_code(), cert.upper.branch_code());
        }
    }

    #[test]
    fn matching_needs_equal_r_counts(q in 3i64..400, t in 0.0f64..1.0) {
        let p = ((2 * q) as f64 / 3.0 * t).floor() as i64 + 1;
        let gamma = FieldElement::Rational(rat(p, q));
        let Ok(cert) = detect_matching(&s2(), &gamma, DEFAULT_BUDGET) else { return Ok(()) };
        let lower = cert.lower.branch_code();
        let upper = cert.upper.branch_code();
        prop_assert_eq!(r_count(&lower[..cert.kappa_minus]), r_count(&upper[..cert.kappa_plus]));
        prop_assert_eq!(cert.delta, cert.kappa_plus as i64 - cert.kappa_minus as i64);
        prop_assert_eq!(cert.neutral, cert.delta == 0);
    }

    #[test]
    fn derivative_is_signed_power_of_slope(q in 3i64..200, p in 1i64..200, n in 1usize..40) {
        prop_assume!(p < q);
        let gamma = FieldElement::Rational(rat(p, q));
        let slope = s2();
        let mut x = SidedPoint::new(gamma.clone(), Side::Above);
        let mut deriv = FieldElement::one();
        let mut rs = 0u32;
        for _ in 0..n {
            let step = q_step(&slope, &gamma, &x);
            deriv = &deriv * &step.factor(&slope);
            rs += (step.branch == Branch::R) as u32;
            x = step.point;
        }
        let expect = &FieldElement::from_int(if rs % 2 == 0 { 1 } else { -1 }) * &FieldElement::from_int(2).pow(rs);
        prop_assert_eq!(deriv, expect);
    }

    #[test]
    fn matching_iff_not_in_bifurcation_set(q in 2i64..3000, t in 0.0f64..1.0) {
        let p = ((2 * q) as f64 / 3.0 * t).ceil().max(1.0) as i64;
        let gamma = rat(p, q);
        prop_assume!(gamma < rat(2, 3));
        // small gamma needs long orbits before matching
        let matched = detect_matching(&s2(), &FieldElement::Rational(gamma.clone()), 10_000);
        let member = bifurcation_member(2, &gamma).unwrap();
        match member {
            Membership::Member => prop_assert!(matched.is_err(), "{} matched but is in E", gamma),
            Membership::NonMember(_) => prop_assert!(matched.is_ok(), "{} did not match: {:?}", gamma, matched),
        }
    }
}

#[test]
fn right_endpoints_are_markov_parameters() {
    let slope = s2();
    for (p, q) in [(1, 2), (1, 4), (7, 32), (3, 16), (1, 8), (5, 16), (3, 8)] {
        let cert = detect_matching(&slope, &FieldElement::Rational(rat(p, q)), DEFAULT_BUDGET).unwrap();
        let hi = finite_rational(&cert.hi).unwrap();
        assert_eq!(bifurcation_member(2, &hi).unwrap(), Membership::Member, "hi = {hi}");
        let g = FieldElement::Rational(hi);
        let part = build_partition(&slope, &g, PartitionSource::Markov { budget: DEFAULT_BUDGET }).unwrap();
        let td = transition_matrices(&slope, &g, &part).unwrap();
        // 0-1 rows: every breakpoint image is a breakpoint
        zero_one(&td.pi).unwrap();
    }
}

#[test]
fn half_lines_for_slope_three() {
    let s3 = SlopeSpec::integer(3);
    let below = detect_matching(&s3, &FieldElement::ratio(-1, 2), DEFAULT_BUDGET).unwrap();
    assert_eq!(below.delta, 8);
    assert_eq!(below.lo, Endpoint::NegInfinity);
    let above = detect_matching(&s3, &FieldElement::ratio(9, 10), DEFAULT_BUDGET).unwrap();
    assert_eq!(above.delta, -4);
    assert_eq!(above.hi, Endpoint::PosInfinity);
}

proptest! {
    #[test]
    fn conjugacy_intertwines_q_and_g(gp in -40i64..80, xp in -200i64..200) {
        let slope = s2();
        let gamma = FieldElement::ratio(gp, 60);
        let x = FieldElement::ratio(xp, 70);
        let (beta, h) = conjugate_to_g(&gamma, &slope);
        let lhs = h.eval(&q_map(&slope, &gamma, &x));
        let rhs = g_beta_step(&slope, &beta, &h.eval(&x));
        prop_assert_eq!(lhs, rhs);
    }
}
