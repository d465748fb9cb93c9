use matching_entropy::exact::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-500i64..500, 1i64..200).prop_map(|(n, d)| rat(n, d))
}

fn surd(d: u64) -> impl Strategy<Value = FieldElement> {
    (small_rat(), small_rat()).prop_map(move |(a, b)| FieldElement::quadratic(a, b, d))
}

fn int_or_frac() -> impl Strategy<Value = Rational> {
    prop_oneof![(-10_000i64..10_000).prop_map(int), small_rat()]
}

proptest! {
    #[test]
    fn field_arithmetic_matches_ratio(a in int_or_frac(), b in int_or_frac()) {
        let (x, y) = (FieldElement::Rational(a.clone()), FieldElement::Rational(b.clone()));
        for (got, want) in [(&x + &y, &a + &b), (&x - &y, &a - &b), (&y - &x, &b - &a), (&x * &y, &a * &b)] {
            prop_assert_eq!(got.as_rational().unwrap().denom(), want.denom());
            prop_assert_eq!(got, FieldElement::Rational(want));
        }
    }

    #[test]
    fn rationals_round_trip(r in small_rat()) {
        let text = r.to_string();
        prop_assert_eq!(parse_rational(&text).unwrap(), r.clone());
        prop_assert_eq!(parse_field_element(&text).unwrap(), FieldElement::Rational(r));
    }

    #[test]
    fn surds_round_trip(x in surd(5)) {
        let back = parse_field_element(&x.to_string()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn sign_agrees_with_floats(x in surd(5), y in surd(5)) {
        let diff = &x - &y;
        let f = x.to_f64() - y.to_f64();
        if f.abs() > 1e-9 {
            prop_assert_eq!(fe_sign(&diff), if f > 0.0 { 1 } else { -1 });
            prop_assert_eq!(x.cmp(&y), f.partial_cmp(&0.0).unwrap());
        }
    }

    #[test]
    fn affine_solutions_are_exact(
        a in surd(5), b in surd(5), c in surd(5), e in surd(5),
    ) {
        let p = AffineForm::new(a, b);
        let q = AffineForm::new(c, e);
        match affine_solve(&p, &q) {
            AffineSolution::Unique(g) => prop_assert_eq!(p.eval(&g), q.eval(&g)),
            AffineSolution::Identical => prop_assert_eq!(p, q),
            AffineSolution::NoSolution => prop_assert_eq!(&p.c1, &q.c1),
        }
    }

    #[test]
    fn canonical_forms_are_stable(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = rat(n, d);
        let again = Rational::new(r.numer().clone(), r.denom().clone());
        prop_assert_eq!(&again, &r);
        let g = num_integer::Integer::gcd(r.numer(), r.denom());
        prop_assert_eq!(g, BigInt::from(1));
        prop_assert!(r.denom() >= &BigInt::from(1));
    }

    #[test]
    fn simplest_rational_lies_between(a in small_rat(), w in 1i64..100, k in 1i64..1000) {
        let b = &a + rat(w, k);
        let m = simplest_between(&a, Some(&b));
        prop_assert!(a < m && m < b);
        // nothing with a smaller denominator fits
        let q = m.denom().clone();
        let mut d = BigInt::from(1);
        while d < q {
            let lo = (&a * Rational::from_integer(d.clone())).floor().to_integer() + 1;
            prop_assert!(Rational::new(lo, d.clone()) >= b);
            d += 1;
        }
    }
}

#[test]
fn mixed_fields_are_rejected() {
    let x = FieldElement::quadratic(int(0), int(1), 5);
    let y = FieldElement::quadratic(int(0), int(1), 2);
    assert_eq!(fe_arith(&x, &y, ArithOp::Add), Err(ExactError::FieldMismatch(5, 2)));
}
