use proptest::prelude::*;

use tprqa::algebra::rng::{stream_rng, unit_vector};
use tprqa::algebra::{bind, chain, cosine, Banks, BinderKind, CleanupPolicy, EntityRegistry, Matrix, VectorMode};
use tprqa::relation::{Compass, Side};

fn registry(seed: u64, n: usize, mode: VectorMode) -> EntityRegistry {
    let mut r = EntityRegistry::new(64, mode, stream_rng(seed, 0));
    for i in 0..n {
        r.intern(&format!("e{i}")).unwrap();
    }
    r
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bind_probe_round_trip(seed in any::<u64>(), a in 0usize..16, c in 0usize..16) {
        let r = registry(seed, 16, VectorMode::Exact);
        let (va, vc) = (&r.iter().nth(a).unwrap().values, &r.iter().nth(c).unwrap().values);
        let p = bind(va, vc).unwrap().probe(va).unwrap();
        prop_assert!(cosine(&p.role, vc) >= 1.0 - 1e-9);
        prop_assert!((p.score - 1.0).abs() < 1e-9);
        let back = bind(va, vc).unwrap().probe_container(vc).unwrap();
        prop_assert!(cosine(&back.role, va) >= 1.0 - 1e-9);
    }

    #[test]
    fn unrelated_probe_is_silent(seed in any::<u64>()) {
        let r = registry(seed, 3, VectorMode::Exact);
        let v: Vec<_> = r.iter().map(|e| e.values.clone()).collect();
        let p = bind(&v[0], &v[1]).unwrap().probe(&v[2]).unwrap();
        prop_assert!(p.score < 1e-9);
    }

    #[test]
    fn chain_is_transitive(seed in any::<u64>()) {
        let r = registry(seed, 3, VectorMode::Exact);
        let v: Vec<_> = r.iter().map(|e| e.values.clone()).collect();
        let composed = chain(&bind(&v[0], &v[1]).unwrap(), &bind(&v[1], &v[2]).unwrap()).unwrap();
        let direct = bind(&v[0], &v[2]).unwrap();
        prop_assert!(max_abs(&(composed.matrix() - direct.matrix())) <= 1e-9);
    }

    #[test]
    fn opposite_directions_cancel(seed in any::<u64>(), vseed in any::<u64>()) {
        let banks = Banks::with_default_rank(32, seed).unwrap();
        let d = &banks.directions;
        let x = unit_vector(&mut stream_rng(vseed, 1), 32);
        for (a, b) in [(Compass::North, Compass::South), (Compass::East, Compass::West)] {
            let there_and_back = d.matrix(b) * (d.matrix(a) * &x);
            prop_assert!((there_and_back - &x).norm() <= 1e-12);
            prop_assert!((d.matrix(a).transpose() - d.matrix(b)).norm() <= 1e-12);
        }
    }

    #[test]
    fn projectors_are_idempotent(seed in any::<u64>(), vseed in any::<u64>()) {
        let banks = Banks::with_default_rank(32, seed).unwrap();
        let x = unit_vector(&mut stream_rng(vseed, 2), 32);
        for side in Side::ALL {
            let p = banks.positions.projector(side);
            let once = p * &x;
            prop_assert!((p * &once - &once).norm() <= 1e-9);
            prop_assert!((p - Matrix::identity(32, 32)).norm() > 0.1);
        }
    }

    #[test]
    fn pair_unbind_recovers_both_halves(seed in any::<u64>(), i in 0usize..32, j in 0usize..32) {
        let r = registry(seed, 32, VectorMode::Exact);
        let banks = Banks::with_default_rank(64, seed).unwrap();
        let (vi, vj) = (&r.iter().nth(i).unwrap().values, &r.iter().nth(j).unwrap().values);
        for kind in [BinderKind::Temporal, BinderKind::Owner, BinderKind::Conj] {
            let b = banks.binder(kind);
            let packed = b.bind(vi, vj).unwrap();
            let u = b.unbind(&packed, &r, &CleanupPolicy::default()).unwrap();
            prop_assert_eq!((u.next.0, u.prev.0), (i, j));
            let (first, second) = b.split(&packed).unwrap();
            // Each pinv half keeps the other half as cross-talk.
            let half = std::f64::consts::FRAC_1_SQRT_2;
            prop_assert!((cosine(&first, vi) - half).abs() < 0.25 && (cosine(&second, vj) - half).abs() < 0.25);
        }
    }

    #[test]
    fn exact_registry_is_orthonormal(seed in any::<u64>(), n in 1usize..40) {
        let r = registry(seed, n, VectorMode::Exact);
        let v: Vec<_> = r.iter().map(|e| e.values.clone()).collect();
        for (a, x) in v.iter().enumerate() {
            for (b, y) in v.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                prop_assert!((x.dot(y) - want).abs() < 1e-9);
            }
        }
    }
}
