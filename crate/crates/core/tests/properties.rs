use hodisc::discrepancy::{
    character_table, sum_of_digits, warnock_l2, warnock_l2_squared_exact, warnock_scan,
};
use hodisc::genmat::{interlaced_sobol, sobol_matrices, truncate};
use hodisc::gf2::{stack_transposed, BitMatrix, BitVector};
use hodisc::netverify::{
    box_counts, character_sum, compositions, dual_enumerate, dual_min_weight, smallest_t,
    DUAL_BUDGET_EXP, VERIFY_BUDGET,
};
use hodisc::pointgen::{
    corollary_pointset, digital_shift, net_points, DyadicPoint, PointGenerator, RationalPointSet,
};
use hodisc::poly::{is_primitive, laurent_expand, primitive_polys, Gf2Poly};
use hodisc::walsh::{mu, r_coeff, wal, WalshIndex};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn bitvec(len: usize) -> impl Strategy<Value = BitVector> {
    proptest::collection::vec(any::<bool>(), len).prop_map(|b| BitVector::from_bits(&b))
}

fn matrix() -> impl Strategy<Value = BitMatrix> {
    (1usize..=64, 1usize..=64).prop_flat_map(|(r, c)| {
        proptest::collection::vec(bitvec(c), r)
            .prop_map(move |rows| BitMatrix::from_rows(c, &rows).unwrap())
    })
}

fn dyadic_points(s: usize, max_n: usize) -> impl Strategy<Value = Vec<DyadicPoint>> {
    (1u32..=20).prop_flat_map(move |p| {
        proptest::collection::vec(proptest::collection::vec(0..1u128 << p, s), 1..=max_n).prop_map(
            move |v| {
                v.iter()
                    .map(|c| DyadicPoint::from_numerators(p, c).unwrap())
                    .collect()
            },
        )
    })
}

proptest! {
    #[test]
    fn kernel_vectors_are_annihilated(m in matrix()) {
        let basis = m.kernel_basis();
        prop_assert_eq!(m.rank() + basis.len(), m.cols());
        for v in &basis {
            prop_assert!(m.matvec(v).unwrap().is_zero());
        }
    }

    #[test]
    fn matvec_is_linear((m, a, b) in matrix().prop_flat_map(|m| {
        let c = m.cols();
        (Just(m), bitvec(c), bitvec(c))
    })) {
        let lhs = m.matvec(&a.xor(&b)).unwrap();
        let rhs = m.matvec(&a).unwrap().xor(&m.matvec(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn laurent_multiply_back(mask in 2u64..1 << 8, i in 1u32..4, z in 0usize..8, len in 1usize..60) {
        let p = Gf2Poly::from_mask(mask);
        let e = p.degree().unwrap();
        prop_assume!(z < e);
        let a = laurent_expand(&p, i, z, len).unwrap();
        let q = p.pow(i);
        let d = q.degree().unwrap();
        let n = e - z - 1;
        prop_assume!(len >= d - n);
        // T = sum_l a_l x^(len - l), so T q / x^len is the truncated product
        let mut t = Gf2Poly::zero();
        for l in 1..=len {
            if a.get(l - 1) {
                t = t.add(&Gf2Poly::monomial(len - l));
            }
        }
        let prod = t.mul(&q);
        let top = prod.degree().unwrap_or(0);
        for k in d..=top.max(d) {
            prop_assert_eq!(prod.coeff(k), k == n + len, "degree {}", k as i64 - len as i64);
        }
    }

    #[test]
    fn wal_is_multiplicative_under_shift(k in 0u64..1 << 16, x in 0u128..1 << 20, y in 0u128..1 << 20) {
        let px = DyadicPoint::from_numerators(20, &[x]).unwrap();
        let py = DyadicPoint::from_numerators(20, &[y]).unwrap();
        let sum = digital_shift(&px, &py).unwrap();
        prop_assert_eq!(wal(k, &sum, 0), wal(k, &px, 0) * wal(k, &py, 0));
    }

    #[test]
    fn r_symmetric_and_bounded(k in 0u64..1 << 20, l in 0u64..1 << 20) {
        let r = r_coeff(k, l);
        prop_assert_eq!(r, r_coeff(l, k));
        prop_assert!(r.to_f64().abs() <= 2f64.powi(-((mu(k) + mu(l)) as i32)));
    }

    #[test]
    fn warnock_is_permutation_invariant(pts in dyadic_points(2, 40), seed in any::<u64>()) {
        let mut shuffled = pts.clone();
        let n = shuffled.len();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        let a = warnock_l2(&pts).unwrap();
        let b = warnock_l2(&shuffled).unwrap();
        prop_assert!((a - b).abs() <= 1e-14, "{} vs {}", a, b);
    }

    #[test]
    fn exact_and_float_agree(pts in dyadic_points(3, 256)) {
        let set = RationalPointSet::from_dyadic(&pts).unwrap();
        let exact = warnock_l2_squared_exact(&set).unwrap().to_f64().unwrap().sqrt();
        let float = warnock_l2(&pts).unwrap();
        prop_assert!((exact - float).abs() <= 1e-12, "{} vs {}", exact, float);
    }

    #[test]
    fn scan_prefixes_match_one_shot(pts in dyadic_points(2, 80), cut in 2usize..80) {
        prop_assume!(pts.len() >= 2);
        let cut = cut.min(pts.len());
        let report = warnock_scan(pts.clone(), pts.len()).unwrap();
        let row = report.row(cut as u64).unwrap();
        prop_assert!((row.l2 - warnock_l2(&pts[..cut]).unwrap()).abs() <= 1e-13);
    }

    #[test]
    fn shift_preserves_cardinality_and_range(m in 1usize..6, sigma in proptest::collection::vec(0u128..1 << 40, 2)) {
        let g = sobol_matrices(2, m, m).unwrap();
        let pts = net_points(&g).unwrap();
        let shift = DyadicPoint::from_numerators(40, &sigma).unwrap();
        let mut shifted: Vec<Vec<u128>> = pts
            .iter()
            .map(|p| {
                let q = digital_shift(p, &shift).unwrap();
                (0..2).map(|j| q.numerator(j).unwrap()).collect()
            })
            .collect();
        prop_assert!(shifted.iter().flatten().all(|&v| v < 1 << 40));
        shifted.sort();
        shifted.dedup();
        prop_assert_eq!(shifted.len(), 1 << m);
    }

    #[test]
    fn corollary_returns_exactly_n(s in 1usize..=3, n in 2u64..300) {
        let set = corollary_pointset(s, n).unwrap();
        prop_assert_eq!(set.len() as u64, n);
        let exact = set.exact();
        for i in 0..exact.len() {
            for j in 0..s {
                prop_assert!(exact.numerator(i, j) < exact.denominator(j));
            }
        }
        prop_assert!(set.points.iter().all(|p| (0..s).all(|j| p.to_f64(j) < 1.0)));
    }
}

#[test]
fn stack_transposed_is_sum_of_products() {
    let a = BitMatrix::from_literal(&[&[1, 0], &[1, 1], &[0, 1]]);
    let b = BitMatrix::from_literal(&[&[0, 1], &[1, 0]]);
    let st = stack_transposed(&[a.clone(), b.clone()]).unwrap();
    for ka in 0..8u64 {
        for kb in 0..4u64 {
            let va = BitVector::from_u64(ka, 3);
            let vb = BitVector::from_u64(kb, 2);
            let direct = a
                .transpose()
                .matvec(&va)
                .unwrap()
                .xor(&b.transpose().matvec(&vb).unwrap());
            assert_eq!(st.matvec(&va.concat(&vb)).unwrap(), direct);
        }
    }
}

#[test]
fn primitive_list_is_stable() {
    let a = primitive_polys(40).unwrap();
    let b = primitive_polys(40).unwrap();
    assert_eq!(a, b);
    for p in a.iter().filter(|p| p.degree().unwrap() >= 2) {
        assert!(is_primitive(p).unwrap(), "{p}");
    }
}

#[test]
fn sum_of_digits_bound() {
    for n in 1..=1_000_000u64 {
        assert!(sum_of_digits(n) as f64 <= 1.0 + (n as f64).log2() + 1e-9);
    }
}

#[test]
fn matrices_are_deterministic() {
    let a = interlaced_sobol(3, 3, 7).unwrap();
    let b = interlaced_sobol(3, 3, 7).unwrap();
    assert_eq!(a.matrices(), b.matrices());
}

#[test]
fn sequence_prefix_equals_truncated_net() {
    let g = interlaced_sobol(2, 3, 8).unwrap();
    let seq = PointGenerator::new(&g);
    for m in 1..=8 {
        let net = net_points(&truncate(&g, m).unwrap()).unwrap();
        for (n, p) in net.iter().enumerate() {
            assert_eq!(seq.point(n as u64).unwrap().to_f64_vec(), p.to_f64_vec());
        }
    }
}

#[test]
fn character_dichotomy_exhaustive() {
    // s = 2, alpha = 2, m = 2: all k with components below 2^4
    let g = interlaced_sobol(2, 2, 2).unwrap();
    let pts = net_points(&g).unwrap();
    let dual = dual_enumerate(&g, None, DUAL_BUDGET_EXP).unwrap();
    for k1 in 0..16 {
        for k2 in 0..16 {
            let k = WalshIndex(vec![k1, k2]);
            let c = character_sum(&pts, &k).unwrap();
            assert!(c == 0 || c == 4);
            assert_eq!(c == 4, dual.contains(&k), "{k}");
        }
    }
    assert_eq!(dual.iter().count(), 1 << dual.dimension());
}

#[test]
fn series_vanishes_off_the_dual() {
    let g = sobol_matrices(2, 3, 3).unwrap();
    let pts = net_points(&g).unwrap();
    let dual = dual_enumerate(&g, Some(5), DUAL_BUDGET_EXP).unwrap();
    let table = character_table(&pts, 5);
    for k1 in 0..32u64 {
        for k2 in 0..32u64 {
            let w = table[(k1 * 32 + k2) as usize];
            let k = WalshIndex(vec![k1, k2]);
            assert_eq!(w != 0, dual.contains(&k), "{k}");
        }
    }
}

#[test]
fn fairness_matches_independence() {
    for (s, alpha, m) in [(2usize, 1u32, 5usize), (1, 2, 4), (2, 2, 3), (1, 3, 3)] {
        let g = interlaced_sobol(s, alpha, m).unwrap();
        let t = smallest_t(&g, alpha, g.t_bound(), VERIFY_BUDGET)
            .unwrap()
            .certified
            .unwrap();
        let t1 = hodisc::genmat::t_reduced(t, alpha, 1).unwrap();
        let pts = net_points(&g).unwrap();
        for total in 0..=(m as u32).saturating_sub(t1) {
            for d in compositions(total, s) {
                let counts = box_counts(&pts, &d).unwrap();
                let fair = 1u64 << (m as u32 - total);
                assert!(
                    counts.iter().all(|&c| c == fair),
                    "s={s} alpha={alpha} d={d:?}"
                );
            }
        }
    }
}

#[test]
fn dual_weights_exceed_quality_bound() {
    for m in 1..=4usize {
        let g = interlaced_sobol(2, 2, m).unwrap();
        let dual = dual_enumerate(&g, None, DUAL_BUDGET_EXP).unwrap();
        let w2 = dual_min_weight(&dual, 2).unwrap();
        assert!(
            w2 > 2 * m as u32 - g.t_bound().min(2 * m as u32),
            "m={m} w={w2}"
        );
        let t1 = smallest_t(&g, 1, g.t_bound(), VERIFY_BUDGET)
            .unwrap()
            .certified
            .unwrap();
        let w1 = dual_min_weight(&dual, 1).unwrap();
        assert!(w1 as i64 > m as i64 - t1 as i64, "m={m} w1={w1} t1={t1}");
    }
    let g = sobol_matrices(2, 4, 4).unwrap();
    let dual = dual_enumerate(&g, None, DUAL_BUDGET_EXP).unwrap();
    assert!(dual_min_weight(&dual, 1).unwrap() >= 5);
}
