use std::sync::Arc;

use hall_core::lf::{
    check_base_change, pullback, pushforward, random_square, tensor, FiniteSupportFn, LFType, LfComponent, ProperMapData,
};
use num::{BigInt, BigRational, One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_fn<R: Rng>(rng: &mut R, base: &Arc<LFType>) -> FiniteSupportFn {
    let mut values = Vec::new();
    for c in 0..base.len() {
        if rng.gen_bool(0.7) {
            values.push((c, q(rng.gen_range(-9..=9), rng.gen_range(1..=6))));
        }
    }
    FiniteSupportFn::from_values(base.clone(), values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn base_change_holds_on_random_squares(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let square = random_square(&mut rng, 5, 8);
        square.validate().unwrap();
        let report = check_base_change(&square).unwrap();
        prop_assert!(report.equal, "deviation {}", report.max_deviation);
        prop_assert_eq!(report.functions_checked, square.f.source.len());
    }

    #[test]
    fn pushforward_is_linear(seed in any::<u64>(), a in -5i64..5, b in -5i64..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_square(&mut rng, 5, 8).f;
        let (alpha, beta) = (random_fn(&mut rng, &f.source), random_fn(&mut rng, &f.source));
        let (a, b) = (q(a, 1), q(b, 1));
        let lhs = pushforward(&f, &alpha.scale(&a).add(&beta.scale(&b)).unwrap()).unwrap();
        let rhs = pushforward(&f, &alpha).unwrap().scale(&a).add(&pushforward(&f, &beta).unwrap().scale(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_is_multiplicative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_square(&mut rng, 5, 8).f;
        let (a, b) = (random_fn(&mut rng, &f.target), random_fn(&mut rng, &f.target));
        let prod = FiniteSupportFn::from_values(
            f.target.clone(),
            (0..f.target.len()).map(|c| (c, a.get(c) * b.get(c))),
        ).unwrap();
        let left = pullback(&f, &prod).unwrap();
        let (pa, pb) = (pullback(&f, &a).unwrap(), pullback(&f, &b).unwrap());
        for c in 0..f.source.len() {
            prop_assert_eq!(left.get(c), pa.get(c) * pb.get(c));
        }
    }

    #[test]
    fn projection_formula(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_square(&mut rng, 5, 8).f;
        let alpha = random_fn(&mut rng, &f.source);
        let beta = random_fn(&mut rng, &f.target);
        let pulled = pullback(&f, &beta).unwrap();
        let twisted = FiniteSupportFn::from_values(
            f.source.clone(),
            (0..f.source.len()).map(|c| (c, alpha.get(c) * pulled.get(c))),
        ).unwrap();
        let left = pushforward(&f, &twisted).unwrap();
        let pushed = pushforward(&f, &alpha).unwrap();
        for c in 0..f.target.len() {
            prop_assert_eq!(left.get(c), pushed.get(c) * beta.get(c));
        }
    }

    #[test]
    fn json_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_square(&mut rng, 5, 8).f;
        let alpha = random_fn(&mut rng, &f.source);
        prop_assert_eq!(ProperMapData::from_json(&f.to_json().to_string()).unwrap(), f);
        prop_assert_eq!(FiniteSupportFn::from_json(&alpha.to_json().to_string()).unwrap(), alpha);
    }
}

#[test]
fn identity_pushforward_is_identity() {
    let x = Arc::new(LFType::from_pi1(&[1, 2, 6]));
    let alpha = FiniteSupportFn::from_values(x.clone(), [(0, q(3, 4)), (2, q(-1, 1))]).unwrap();
    assert_eq!(pushforward(&ProperMapData::identity(x), &alpha).unwrap(), alpha);
}

#[test]
fn integral_of_one_is_homotopy_cardinality() {
    let x = Arc::new(LFType::new(vec![
        LfComponent::with_orders(vec![2]),
        LfComponent::with_orders(vec![3, 4]),
        LfComponent::point(),
    ]));
    let total = pushforward(&ProperMapData::to_point(x.clone()), &FiniteSupportFn::constant_one(x.clone())).unwrap();
    assert_eq!(total.get(0), x.homotopy_cardinality());
    assert_eq!(x.homotopy_cardinality(), q(1, 2) + q(4, 3) + BigRational::one());
}

#[test]
fn tensor_multiplies_values() {
    let x = Arc::new(LFType::from_pi1(&[1, 2]));
    let y = Arc::new(LFType::from_pi1(&[3]));
    let f = FiniteSupportFn::from_values(x, [(0, q(2, 1)), (1, q(1, 3))]).unwrap();
    let g = FiniteSupportFn::from_values(y.clone(), [(0, q(5, 1))]).unwrap();
    let t = tensor(&f, &g);
    assert_eq!(t.get(0), q(10, 1));
    assert_eq!(t.get(y.len()), q(5, 3));
    assert!(tensor(&f, &FiniteSupportFn::zero(y)).support().all(|(_, v)| v.is_zero()));
}
