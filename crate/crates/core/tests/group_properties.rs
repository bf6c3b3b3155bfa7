use autratio_core::aut::{aut_order, f_elementary_two, f_exact};
use autratio_core::primes::factorize;
use autratio_core::{parse_group, AbelianGroup};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_group() -> impl Strategy<Value = AbelianGroup> {
    prop::collection::vec(
        (prop::sample::select(vec![2u64, 3, 5, 7, 11]), prop::collection::vec(1u32..4, 0..4)),
        0..4,
    )
    .prop_map(|parts| AbelianGroup::from_parts(parts).unwrap())
}

/// Splits each invariant factor back into prime powers and rebuilds the group.
fn regroup_from_invariant_factors(ds: &[BigUint]) -> AbelianGroup {
    let parts = ds.iter().flat_map(|d| {
        let d: u64 = d.try_into().unwrap();
        factorize(d).into_iter().map(|(p, k)| (p, vec![k]))
    });
    AbelianGroup::from_parts(parts).unwrap()
}

#[test]
fn invariant_factors_crt_example() {
    let g = parse_group("C2 x C4 x C9").unwrap();
    let ds = g.invariant_factors();
    assert_eq!(ds, vec![BigUint::from(2u32), BigUint::from(36u32)]);
    assert_eq!(regroup_from_invariant_factors(&ds), g);
}

proptest! {
    #[test]
    fn format_parse_roundtrip(g in small_group()) {
        prop_assert_eq!(parse_group(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn order_is_multiplicative(a in small_group(), b in small_group()) {
        prop_assert_eq!(a.direct_product(&b).order(), a.order() * b.order());
    }

    #[test]
    fn invariant_factor_chain(g in small_group()) {
        let ds = g.invariant_factors();
        for w in ds.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        let prod: BigUint = ds.iter().fold(BigUint::one(), |a, b| a * b);
        prop_assert_eq!(prod, g.order());
        prop_assert_eq!(regroup_from_invariant_factors(&ds), g);
    }

    #[test]
    fn f_is_multiplicative_on_coprime_orders(a in small_group(), b in small_group()) {
        // drop from b every prime that a uses
        let b = AbelianGroup::from_parts(
            b.factors().iter()
                .filter(|(p, _)| a.partition(**p).is_none())
                .map(|(p, e)| (*p, e.clone())),
        ).unwrap();
        prop_assert_eq!(f_exact(&a.direct_product(&b)), &f_exact(&a) * &f_exact(&b));
    }
}

#[test]
fn f_of_elementary_two_groups_grows_without_bound() {
    let mut prev = f_exact(&AbelianGroup::trivial());
    for n in 1..=20u32 {
        let g = AbelianGroup::elementary(2, n).unwrap();
        // closed form |GL_n(2)| = ∏_{k<n} (2^n − 2^k)
        let two_n = BigUint::one() << n;
        let gl: BigUint = (0..n).map(|k| &two_n - (BigUint::one() << k)).product();
        assert_eq!(aut_order(&g), gl);
        let f = f_exact(&g);
        assert_eq!(f, f_elementary_two(n));
        if n >= 2 {
            assert!(f > prev, "n = {n}");
        }
        prev = f;
    }
    assert!(prev.to_f64() > 1e100);
}
