//! Values frozen from an independent route: the recurrence
//! `sum_{l<=m} C(m,l) q^l E_l + E_m = 2 [m = 0]`, which follows from the
//! alternating sum `2 sum_x (-1)^x [x]_q^m` and `[x+1]_q = 1 + q [x]_q`,
//! evaluated in exact arithmetic outside this crate.

use qeuler::lfun::{self, PartialZetaParams};
use qeuler::numerics::rational::{frac, int, parse_rational};
use qeuler::numerics::{reduce, teichmuller, Exponent, QContext};
use qeuler::qeuler::{euler_number, euler_poly};

fn table(q: &str, values: &[&str]) {
    let q = parse_rational(q).unwrap();
    for (m, want) in values.iter().enumerate() {
        assert_eq!(euler_number(m as u64, &q).unwrap(), parse_rational(want).unwrap(), "m={m} q={q}");
    }
}

#[test]
fn euler_numbers_from_recurrence() {
    table("2", &["1", "-1/3", "1/15", "1/45", "-29/765", "47/1683", "-1379/109395"]);
    table("1/2", &["1", "-2/3", "-4/15", "8/45", "464/765", "1504/1683", "88256/109395"]);
    table("-2/3", &["1", "-3", "-45/13", "-837/247", "-75735/23959", "-14752287/5055349", "-834519105/308376289"]);
    table("4", &["1", "-1/5", "3/85", "-1/221", "-33/283985", "22583/58216925", "-2793861/14030278925"]);
}

#[test]
fn euler_polynomials_from_recurrence() {
    let want = ["1", "5/3", "31/15", "91/45", "1501/765"];
    for (n, w) in want.iter().enumerate() {
        assert_eq!(euler_poly(n as u64, 2, &int(2)).unwrap(), parse_rational(w).unwrap());
    }
    let want = ["1", "5/3", "83/30", "823/180", "46013/6120"];
    for (n, w) in want.iter().enumerate() {
        assert_eq!(euler_poly(n as u64, 3, &frac(1, 2)).unwrap(), parse_rational(w).unwrap());
    }
}

#[test]
fn partial_zeta_example() {
    let prm = PartialZetaParams::new(1, 3).unwrap();
    assert_eq!(lfun::partial_zeta_neg(1, prm, &int(2)).unwrap(), frac(5, 18));
}

#[test]
fn interpolation_at_negative_integers() {
    let ctx = QContext::canonical(5, 8).unwrap();
    for a in 1..5u64 {
        let prm = PartialZetaParams::new(a, 5).unwrap();
        for n in 0..=3u64 {
            let h = lfun::h_pq(&Exponent::from(-(n as i64)), prm, &ctx).unwrap();
            let w = teichmuller(&a.into(), 5, ctx.working()).unwrap().pow(-(n as i64)).unwrap();
            let exact = reduce(&lfun::partial_zeta_neg(n, prm, ctx.q()).unwrap(), 5, ctx.working());
            assert!(h.value.agreement(&(&w * &exact)) >= lfun::interpolation_precision(n, 5, 8), "a={a} n={n}");
        }
    }
}
