use proptest::prelude::*;
use qsplit_core::mathilb::weighted_dual;
use qsplit_core::numeric::Tolerance;
use qsplit_core::qsystem::{check_qsystem, qsystem_from_dual, DualPair};
use qsplit_core::random;
use qsplit_core::splitting::{check_split, column_dim_multiset, split_projection, split_qsystem_seeded};
use qsplit_core::GradedOneCell;
use rand::Rng;

fn full_support_cell(seed: u64, max_src: usize, max_tgt: usize, max_sector: usize) -> GradedOneCell {
    let mut rng = random::seeded(seed);
    let src = rng.random_range(1..=max_src);
    let tgt = rng.random_range(1..=max_tgt);
    let x = random::one_cell(&mut rng, src, tgt, max_sector, true);
    random::shuffled(&mut rng, &x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn round_trip_recovers_blocks(seed in any::<u64>()) {
        let x = full_support_cell(seed, 3, 3, 2);
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        let s = split_qsystem_seeded(&q, Tolerance::default(), seed ^ 0x5eed).unwrap();
        prop_assert_eq!(s.k, x.src());
        prop_assert_eq!(column_dim_multiset(&s.pair.x), column_dim_multiset(&x));
        let report = check_split(&q, &s, Tolerance::default()).unwrap();
        prop_assert!(report.max_residual() <= 1e-8, "{:?}", report);
    }

    #[test]
    fn weighted_duals_split_too(seed in any::<u64>()) {
        let x = full_support_cell(seed, 2, 3, 2);
        let mut rng = random::seeded(seed.wrapping_add(1));
        let mut w: Vec<f64> = (0..x.dim()).map(|_| rng.random_range(0.3..1.0)).collect();
        for col in 0..x.src() {
            let norm: f64 = (0..x.dim()).filter(|&p| x.col(p) == col).map(|p| w[p] * w[p]).sum::<f64>().sqrt();
            for p in 0..x.dim() {
                if x.col(p) == col {
                    w[p] /= norm;
                }
            }
        }
        let pair = DualPair::from_dual(x.clone(), weighted_dual(&x, &w).unwrap());
        let q = qsystem_from_dual(&pair).unwrap();
        prop_assert!(check_qsystem(&q, Tolerance::default()).unwrap().passed());
        let s = split_qsystem_seeded(&q, Tolerance::default(), seed).unwrap();
        prop_assert_eq!(s.k, x.src());
        prop_assert!(check_split(&q, &s, Tolerance::default()).unwrap().max_residual() <= 1e-8);
    }

    #[test]
    fn projection_split_contracts(seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let x = random::one_cell(&mut rng, 3, 3, 3, false);
        let (p, ranks) = random::projection(&mut rng, &x);
        let (y, u) = split_projection(&x, &p, Tolerance::default()).unwrap();
        for ((row, col), k) in ranks {
            prop_assert_eq!(y.sector(row, col).len(), k);
        }
        prop_assert!(u.isometry_residual() <= 1e-9);
        let uu = u.mat() * u.mat().adjoint();
        prop_assert!(qsplit_core::numeric::residual(&uu, p.mat()) <= 1e-9);
    }
}
