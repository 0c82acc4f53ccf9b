use proptest::prelude::*;
use qeuler::numerics::rational::{format_rational, frac, int, parse_rational, pow, q_int, Rational};
use qeuler::numerics::{reduce, Exponent, QContext};
use qeuler::qeuler::{euler_number, euler_poly, euler_poly_moments};
use qeuler::{characters::DirichletCharacter, lfun};

fn q_strategy() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=6)
        .prop_map(|(a, b)| frac(a, b))
        .prop_filter("q must avoid 0 and +-1", |q| *q != int(0) && *q != int(1) && *q != int(-1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shift_relation(n in 0u64..7, x in 0u64..5, q in q_strategy()) {
        let lhs = euler_poly(n, x + 1, &q).unwrap() + euler_poly(n, x, &q).unwrap();
        prop_assert_eq!(lhs, int(2) * pow(&q_int(x, &q), n as i64));
    }

    #[test]
    fn moments_match(n in 0u64..7, x in 0u64..5, q in q_strategy()) {
        prop_assert_eq!(euler_poly(n, x, &q).unwrap(), euler_poly_moments(n, x, &q).unwrap());
    }

    #[test]
    fn value_at_zero_is_the_number(n in 0u64..8, q in q_strategy()) {
        prop_assert_eq!(euler_poly(n, 0, &q).unwrap(), euler_number(n, &q).unwrap());
    }

    #[test]
    fn rational_text_round_trip(a in -1000i64..1000, b in 1i64..1000) {
        let r = frac(a, b);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn reduction_is_multiplicative(a in 1i64..500, b in 1i64..500, c in 1i64..500, d in 1i64..500) {
        let (x, y) = (frac(a, b), frac(c, d));
        for p in [3u64, 5, 7] {
            let lhs = reduce(&(&x * &y), p, 10);
            let rhs = &reduce(&x, p, 10) * &reduce(&y, p, 10);
            prop_assert!(lhs.agreement(&rhs) >= lhs.abs_precision().min(rhs.abs_precision()));
        }
    }

    #[test]
    fn truncation_does_not_overstate_agreement(n in 1u32..8, a in 1i64..200, b in 1i64..200) {
        let x = reduce(&frac(a, 3 * b + 1), 3, 12);
        let y = x.truncate(n as i64);
        prop_assert!(x.agreement(&y) >= n as i64);
        prop_assert!(x.agreement(&y) <= y.abs_precision());
    }

    #[test]
    fn l_values_agree_with_closed_form(n in 1u64..4, t in 0i64..2, p in prop::sample::select(vec![3u64, 5])) {
        prop_assume!((n as i64 - t).rem_euclid(p as i64 - 1) == 0);
        let ctx = QContext::canonical(p, 6).unwrap();
        let chi = DirichletCharacter::teichmuller_power(p, t).unwrap();
        let l = lfun::l_pq(&Exponent::from(-(n as i64)), &chi, &ctx, p).unwrap();
        let want = lfun::l_pq_neg_closed_form(n, &chi, &ctx).unwrap();
        prop_assert!(l.value.agreement(&want) >= lfun::interpolation_precision(n, p, 6));
    }
}
