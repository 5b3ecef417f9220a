use num_rational::BigRational;
use proptest::prelude::*;

use padic_rank_one::lubin_tate::LubinTateData;
use padic_rank_one::padic_core::{make_tower, ExtElement, PrecisionBudget, Ring, Valuation, Q};
use padic_rank_one::rational::{rat, vp_rat};

fn ring(p: u32, s: u32) -> Ring {
    make_tower(&LubinTateData::simple(p), s, PrecisionBudget::new(p, 20, 6).unwrap()).unwrap()
}

fn element(ring: &Ring, cs: &[i64]) -> ExtElement {
    let cs: Vec<BigRational> = cs.iter().take(ring.e()).map(|&c| rat(c)).collect();
    ExtElement::from_coeffs(ring, &cs)
}

fn case() -> impl Strategy<Value = (u32, u32, Vec<i64>, Vec<i64>)> {
    (prop_oneof![Just(2u32), Just(3)], 0..=1u32).prop_flat_map(|(p, s)| {
        let e = (p.pow(s) * (p - 1)) as usize;
        (Just(p), Just(s), prop::collection::vec(-10_000i64..10_000, e), prop::collection::vec(-10_000i64..10_000, e))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuation_is_basis_minimum((p, s, a, _b) in case()) {
        let r = ring(p, s);
        let x = element(&r, &a);
        let e = r.e() as i64;
        let expect = a
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| Q::from(vp_rat(&rat(*c), p).unwrap()) + Q::new(i as i64, e))
            .min();
        match expect {
            Some(v) => prop_assert_eq!(x.valuation(), Valuation::Finite(v)),
            None => prop_assert!(x.valuation().is_zero()),
        }
    }

    #[test]
    fn valuation_additive((p, s, a, b) in case()) {
        let r = ring(p, s);
        let (x, y) = (element(&r, &a), element(&r, &b));
        prop_assume!(!x.is_zero() && !y.is_zero());
        let (vx, vy) = (x.valuation().finite().unwrap(), y.valuation().finite().unwrap());
        prop_assert_eq!(x.mul(&y).valuation(), Valuation::Finite(vx + vy));
        prop_assert!(vx.denom() % r.e() as i64 == 0 || (r.e() as i64) % vx.denom() == 0);
    }

    #[test]
    fn valuation_ultrametric((p, s, a, b) in case()) {
        let r = ring(p, s);
        let (x, y) = (element(&r, &a), element(&r, &b));
        let sum = x.add(&y);
        let (vx, vy) = (x.valuation(), y.valuation());
        prop_assert!(sum.valuation().lower_bound() >= vx.min(vy).lower_bound());
        if let (Valuation::Finite(u), Valuation::Finite(w)) = (vx, vy) {
            if u != w {
                prop_assert_eq!(sum.valuation(), Valuation::Finite(u.min(w)));
            }
        }
    }

    #[test]
    fn inverse_of_units((p, s, a, _b) in case()) {
        let r = ring(p, s);
        let x = element(&r, &a);
        prop_assume!(x.valuation() == Valuation::Finite(Q::from(0)));
        let y = x.inv().unwrap();
        prop_assert!(x.mul(&y).eq_to_prec(&ExtElement::one(&r)));
    }
}

#[test]
fn generator_has_valuation_one_over_e() {
    for p in [2u32, 3, 5] {
        for s in 0..=1 {
            let r = ring(p, s);
            let x = ExtElement::gen(&r);
            assert_eq!(x.valuation(), Valuation::Finite(Q::new(1, r.e() as i64)));
        }
    }
}
