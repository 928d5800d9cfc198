use std::collections::HashSet;

use num_bigint::BigUint;
use proptest::prelude::*;

use gfstream::{make_field, select_field_size, FieldCtx, SeededRng};

fn ctx_and_seed() -> impl Strategy<Value = (FieldCtx, u64)> {
    prop_oneof![1usize..=20, 60usize..=70, Just(128usize), Just(200usize)]
        .prop_map(|k| make_field(k).unwrap())
        .prop_flat_map(|ctx| (Just(ctx), any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((ctx, seed) in ctx_and_seed()) {
        let mut rng = SeededRng::new(seed);
        let a = ctx.random_elem(&mut rng);
        let b = ctx.random_elem(&mut rng);
        let c = ctx.random_elem(&mut rng);
        prop_assert_eq!(ctx.mul(&a, &b), ctx.mul(&b, &a));
        prop_assert_eq!(ctx.mul(&ctx.mul(&a, &b), &c), ctx.mul(&a, &ctx.mul(&b, &c)));
        prop_assert_eq!(ctx.mul(&a, &ctx.add(&b, &c)), ctx.add(&ctx.mul(&a, &b), &ctx.mul(&a, &c)));
        prop_assert_eq!(ctx.mul(&a, &ctx.one()), a.clone());
        prop_assert!(ctx.add(&a, &a).is_zero());
        prop_assert_eq!(ctx.square(&a), ctx.mul(&a, &a));
        if !a.is_zero() {
            let inv = ctx.inv(&a).unwrap();
            prop_assert!(ctx.mul(&a, &inv).is_one());
        }
    }

    #[test]
    fn word_and_limb_paths_agree((ctx, seed) in ctx_and_seed()) {
        let mut rng = SeededRng::new(seed);
        let a = ctx.random_elem(&mut rng);
        let b = ctx.random_elem(&mut rng);
        prop_assert_eq!(ctx.mul(&a, &b), ctx.mul_wide(&a, &b));
    }

    #[test]
    fn frobenius_has_order_k((ctx, seed) in ctx_and_seed()) {
        let a = ctx.random_elem(&mut SeededRng::new(seed));
        let mut x = a.clone();
        for _ in 0..ctx.k() {
            x = ctx.square(&x);
        }
        prop_assert_eq!(x, a);
    }

    #[test]
    fn segments_round_trip((ctx, seed) in ctx_and_seed()) {
        let a = ctx.random_elem(&mut SeededRng::new(seed));
        let seg = ctx.segment_of(&a);
        prop_assert_eq!(seg.len(), ctx.k());
        prop_assert_eq!(ctx.elem_from_segment(&seg).unwrap(), a);
    }

    #[test]
    fn sizing_rule(n in 1u64..1 << 20, f in 1u64..1 << 20) {
        let k = select_field_size(n, f).unwrap();
        let target = 8u128 * f as u128 * n as u128;
        prop_assert!(1u128 << k > target);
        prop_assert!(1u128 << (k - 1) <= target);
    }
}

#[test]
fn lagrange_for_small_fields() {
    for k in 1..=12 {
        let ctx = make_field(k).unwrap();
        let q = BigUint::from(1u64 << k);
        for a in ctx.enumerate().unwrap() {
            assert_eq!(ctx.pow(&a, &q), a, "k={k}");
        }
    }
}

#[test]
fn enumeration_is_a_bijection() {
    for k in 1..=10 {
        let ctx = make_field(k).unwrap();
        let all: Vec<_> = ctx.enumerate().unwrap().collect();
        assert_eq!(all.len(), 1 << k);
        let distinct: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), 1 << k);
        let a = all[3 % all.len()].clone();
        if !a.is_zero() {
            let image: HashSet<_> = all.iter().map(|b| ctx.mul(&a, b)).collect();
            assert_eq!(image.len(), 1 << k);
        }
    }
}

#[test]
fn multiplicative_group_is_cyclic_of_order_q_minus_1() {
    for k in 2..=8 {
        let ctx = make_field(k).unwrap();
        let order = (1u64 << k) - 1;
        let has_generator = ctx.enumerate().unwrap().filter(|a| !a.is_zero()).any(|a| {
            let mut x = a.clone();
            let mut steps = 1;
            while !x.is_one() {
                x = ctx.mul(&x, &a);
                steps += 1;
            }
            steps == order
        });
        assert!(has_generator, "k={k}");
    }
}

#[test]
fn sizing_examples() {
    assert_eq!(select_field_size(4, 4).unwrap(), 8);
    assert_eq!(select_field_size(8, 1).unwrap(), 7);
    assert_eq!(select_field_size(1024, 1024).unwrap(), 24);
    assert_eq!(select_field_size(16, 16).unwrap(), 12);
    assert!(select_field_size(0, 4).is_err());
    assert!(select_field_size(u64::MAX, u64::MAX).is_err());
}
