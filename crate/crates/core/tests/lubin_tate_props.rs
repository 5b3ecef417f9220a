use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use padic_rank_one::lubin_tate::{bracket, group_law, LubinTateData, MvSeries};
use padic_rank_one::rational::qpoly;

const N: u32 = 10;

fn p_integral(p: u32) -> impl Strategy<Value = BigRational> {
    (-30i64..30, 1i64..8).prop_map(move |(a, b)| {
        let mut b = b;
        while b % p as i64 == 0 {
            b += 1;
        }
        BigRational::new(BigInt::from(a), BigInt::from(b))
    })
}

fn law(p: u32, cyclotomic: bool) -> LubinTateData {
    if cyclotomic {
        LubinTateData::cyclotomic(p)
    } else {
        LubinTateData::simple(p)
    }
}

fn case() -> impl Strategy<Value = (u32, bool, BigRational, BigRational)> {
    (prop_oneof![Just(2u32), Just(3)], any::<bool>()).prop_flat_map(|(p, c)| (Just(p), Just(c), p_integral(p), p_integral(p)))
}

fn trunc(f: &[BigRational]) -> Vec<BigRational> {
    let mut f = f.to_vec();
    f.resize(N as usize + 1, BigRational::from(BigInt::from(0)));
    qpoly::trim(f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bracket_is_additive((p, c, a, b) in case()) {
        let lt = law(p, c);
        let g = group_law(&lt, N).unwrap();
        let ba = bracket(&a, &lt, &lt, N).unwrap();
        let bb = bracket(&b, &lt, &lt, N).unwrap();
        let sum = bracket(&(&a + &b), &lt, &lt, N).unwrap();
        let lhs = g.g.substitute(&[MvSeries::univariate(1, N, 0, &ba), MvSeries::univariate(1, N, 0, &bb)]);
        prop_assert!(lhs.sub(&MvSeries::univariate(1, N, 0, &sum)).is_zero());
    }

    #[test]
    fn bracket_is_multiplicative((p, c, a, b) in case()) {
        let lt = law(p, c);
        let ba = bracket(&a, &lt, &lt, N).unwrap();
        let bb = bracket(&b, &lt, &lt, N).unwrap();
        let prod = bracket(&(&a * &b), &lt, &lt, N).unwrap();
        prop_assert_eq!(trunc(&qpoly::compose(&ba, &bb)), trunc(&prod));
    }

    #[test]
    fn bracket_intertwines_series((p, _c, a, _b) in case()) {
        let (lt, lt2) = (LubinTateData::simple(p), LubinTateData::cyclotomic(p));
        let ba = bracket(&a, &lt, &lt2, N).unwrap();
        let lhs = trunc(&qpoly::compose(&ba, &lt.coeffs));
        let rhs = trunc(&qpoly::compose(&lt2.coeffs, &ba));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(ba.get(1), Some(&a));
    }
}

#[test]
fn group_law_invariants() {
    for p in [2u32, 3, 5] {
        for c in [false, true] {
            let g = group_law(&law(p, c), N).unwrap();
            g.check_invariants().unwrap();
            let (x, y) = (MvSeries::var(2, N, 0), MvSeries::var(2, N, 1));
            let swapped = g.g.substitute(&[y.clone(), x.clone()]);
            assert!(swapped.sub(&g.g).is_zero());
            let zero = MvSeries::zero(2, N);
            assert!(g.g.substitute(&[x.clone(), zero]).sub(&x).is_zero());
        }
    }
}
