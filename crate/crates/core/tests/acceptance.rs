//! Acceptance checks. Runs without the libtest harness so every criterion
//! prints its PASS/FAIL line.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hodisc::discrepancy::{
    exact_1d_squared, quadrature_oracle_l2, walsh_series_l2, warnock_l2, warnock_l2_rational,
    warnock_scan, SERIES_BUDGET,
};
use hodisc::genmat::{interlace_matrices, interlaced_sobol, sobol_matrices, t_reduced, truncate};
use hodisc::gf2::BitMatrix;
use hodisc::netverify::{
    character_sum, dual_enumerate, dual_min_weight, smallest_t, unfair_elementary_box,
    verify_order_alpha, Verdict, DUAL_BUDGET_EXP, VERIFY_BUDGET,
};
use hodisc::pointgen::{
    corollary_pointset, interlace_point, net_points, sequence_points, DyadicPoint, PointGenerator,
    RationalPointSet,
};
use hodisc::walsh::{coeff_to_rational128, mu, r_coeff, r_coeff_oracle, WalshIndex};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Debug>(err: E) -> String {
    format!("{err:?}")
}

fn construction_exactness() -> Check {
    for m in 1..=32 {
        let g = sobol_matrices(2, m, m).map_err(e)?;
        ensure(*g.matrix(0) == BitMatrix::identity(m), || {
            format!("C1 not identity at m={m}")
        })?;
    }
    let g = sobol_matrices(2, 3, 3).map_err(e)?;
    let pts = net_points(&g).map_err(e)?;
    let first: Vec<u128> = pts.iter().map(|p| p.numerator(0).unwrap()).collect();
    ensure(first == [0, 4, 2, 6, 1, 5, 3, 7], || {
        format!("first coordinates {first:?}/8")
    })?;
    Ok("C1 = I for m <= 32; van der Corput m=3 exact".into())
}

fn interlacing_equivalence() -> Check {
    let mut cases = 0;
    for s in 1..=2usize {
        for alpha in [2u32, 3, 5] {
            for m in 1..=8usize {
                let base = sobol_matrices(alpha as usize * s, m, m).map_err(e)?;
                let inter = interlace_matrices(&base, alpha).map_err(e)?;
                let gb = PointGenerator::new(&base);
                let gi = PointGenerator::new(&inter);
                for n in 0..1u64 << m {
                    let lhs = interlace_point(&gb.point(n).map_err(e)?, alpha).map_err(e)?;
                    let rhs = gi.point(n).map_err(e)?;
                    ensure(lhs == rhs, || format!("s={s} alpha={alpha} m={m} n={n}"))?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} points bit-exact"))
}

fn net_certification() -> Check {
    for m in 1..=8u32 {
        let g = sobol_matrices(2, m as usize, m as usize).map_err(e)?;
        let v = verify_order_alpha(&g, 1, 0, VERIFY_BUDGET).map_err(e)?;
        ensure(v.is_certified(), || format!("s=2 m={m}: {v:?}"))?;
        let pts = net_points(&g).map_err(e)?;
        let bad = unfair_elementary_box(&pts, m, 0).map_err(e)?;
        ensure(bad.is_none(), || format!("s=2 m={m}: unfair box {bad:?}"))?;
    }
    let mut worst = 0;
    for m in 1..=6usize {
        let g = interlaced_sobol(1, 2, m).map_err(e)?;
        ensure(g.t_bound() == 1, || format!("formula t {}", g.t_bound()))?;
        let r = smallest_t(&g, 2, g.t_bound(), VERIFY_BUDGET).map_err(e)?;
        let t = r.certified.ok_or(format!("order 2 m={m}: not certified"))?;
        ensure(t <= 1, || format!("order 2 m={m}: t={t}"))?;
        worst = worst.max(t);
    }
    Ok(format!(
        "(0,m,2) for m <= 8; order 2 certified at t <= {worst}"
    ))
}

fn walsh_table() -> Check {
    for k in 0..16u64 {
        for l in 0..16u64 {
            let oracle = r_coeff_oracle(k, l, 6).map_err(e)?;
            let table = coeff_to_rational128(r_coeff(k, l));
            ensure(oracle == table, || {
                format!("r({k},{l}): table {table} oracle {oracle}")
            })?;
        }
    }
    for k in 0..256u64 {
        for l in 0..256u64 {
            let r = r_coeff(k, l);
            ensure(r == r_coeff(l, k), || format!("asymmetric at ({k},{l})"))?;
            let bound = 2f64.powi(-((mu(k) + mu(l)) as i32));
            ensure(r.to_f64().abs() <= bound, || {
                format!("bound fails at ({k},{l})")
            })?;
        }
    }
    Ok("table = oracle for k,l < 16; symmetric and bounded for k,l < 256".into())
}

fn discrepancy_exactness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=64usize);
        let p = rng.gen_range(1..=24u32);
        let pts: Vec<DyadicPoint> = (0..n)
            .map(|_| DyadicPoint::from_numerators(p, &[rng.gen_range(0..1u128 << p)]).unwrap())
            .collect();
        let set = RationalPointSet::from_dyadic(&pts).map_err(e)?;
        let oracle = exact_1d_squared(&set).to_f64().unwrap().sqrt();
        let d = (warnock_l2(&pts).map_err(e)? - oracle).abs();
        worst = worst.max(d);
    }
    ensure(worst <= 1e-12, || format!("1-d deviation {worst:e}"))?;

    let g = sobol_matrices(2, 4, 4).map_err(e)?;
    let pts = net_points(&g).map_err(e)?;
    let set = RationalPointSet::from_dyadic(&pts).map_err(e)?;
    let grid = quadrature_oracle_l2(&set, 11).map_err(e)?;
    let w = warnock_l2(&pts).map_err(e)?;
    let gd = (grid - w).abs();
    ensure(gd <= 5.0 / 2048.0, || format!("2-d grid deviation {gd:e}"))?;

    let origin = [DyadicPoint::from_numerators(1, &[0]).unwrap()];
    let half = [DyadicPoint::from_numerators(1, &[1]).unwrap()];
    let d0 = (warnock_l2(&origin).map_err(e)? - 1.0 / 3f64.sqrt()).abs();
    let d1 = (warnock_l2(&half).map_err(e)? - 1.0 / 12f64.sqrt()).abs();
    ensure(d0 <= 1e-14 && d1 <= 1e-14, || {
        format!("single points {d0:e} {d1:e}")
    })?;
    Ok(format!("1-d max dev {worst:.1e}; 2-d grid dev {gd:.2e}"))
}

fn series_consistency() -> Check {
    let g = sobol_matrices(1, 3, 3).map_err(e)?;
    let pts = net_points(&g).map_err(e)?;
    let target = warnock_l2(&pts).map_err(e)?.powi(2);
    let errs: Vec<f64> = (4..=8)
        .map(|k| walsh_series_l2(&pts, k, SERIES_BUDGET).map(|v| (v - target).abs()))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let factors: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    ensure(factors.iter().all(|&f| f >= 1.7), || {
        format!("errors {errs:?}, factors {factors:?}")
    })?;
    Ok(format!("error factors per K step {factors:.3?}"))
}

fn character_dual() -> Check {
    let (s, alpha, m) = (2usize, 2u32, 3usize);
    let g = interlaced_sobol(s, alpha, m).map_err(e)?;
    let pts = net_points(&g).map_err(e)?;
    let dual = dual_enumerate(&g, None, DUAL_BUDGET_EXP).map_err(e)?;
    let full = 1i64 << m;
    let mut members = 0;
    for k in dual.iter() {
        let c = character_sum(&pts, &k).map_err(e)?;
        ensure(c == full, || format!("dual element {k} has sum {c}"))?;
        members += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let range = 1u64 << (alpha as usize * m);
    let mut sampled = 0;
    while sampled < 10_000 {
        let k = WalshIndex((0..s).map(|_| rng.gen_range(0..range)).collect());
        if dual.contains(&k) {
            continue;
        }
        let c = character_sum(&pts, &k).map_err(e)?;
        ensure(c == 0, || format!("non-dual {k} has sum {c}"))?;
        sampled += 1;
    }
    // quality parameter for order 1, certified directly
    let t1_formula = t_reduced(g.t_bound(), alpha, 1).map_err(e)?;
    let t1 = smallest_t(&g, 1, t1_formula, VERIFY_BUDGET)
        .map_err(e)?
        .certified
        .ok_or("order 1 not certified")?;
    let w = dual_min_weight(&dual, 1).ok_or("empty dual")?;
    ensure(w as usize > m - t1 as usize, || {
        format!("min weight {w} vs m - t = {}", m - t1 as usize)
    })?;
    Ok(format!(
        "{members} dual elements sum to 2^m; 10000 non-dual sum to 0; min weight {w} > {}",
        m - t1 as usize
    ))
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn theorem_scaling() -> Check {
    let n_max = 4096;
    let pts = sequence_points(2, 5, n_max as u64).map_err(e)?;
    let report = warnock_scan(pts, n_max).map_err(e)?;
    let ratios: Vec<f64> = (4..=12u32)
        .map(|m| {
            let row = report.row(1 << m).unwrap();
            row.l2 * (1u64 << m) as f64 / (m as f64).sqrt()
        })
        .collect();
    let rmax = ratios.iter().cloned().fold(0.0, f64::max);
    ensure(rmax <= 4.0 * ratios[0], || format!("ratio_m {ratios:?}"))?;

    let pmax = report
        .rows
        .iter()
        .map(|r| r.ratio_proinov)
        .fold(0.0, f64::max);
    let mut mid: Vec<f64> = report
        .rows
        .iter()
        .filter(|r| (64..=128).contains(&r.n))
        .map(|r| r.ratio_proinov)
        .collect();
    let med = median(&mut mid);
    ensure(pmax <= 4.0 * med, || {
        format!("proinov max {pmax} vs median {med}")
    })?;
    Ok(format!(
        "max ratio_m / ratio_4 = {:.3}; max proinov / median = {:.3}",
        rmax / ratios[0],
        pmax / med
    ))
}

fn corollary_construction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut summary = Vec::new();
    for s in 1..=2usize {
        let mut ratios = Vec::new();
        for _ in 0..20 {
            let n = rng.gen_range(3..=2000u64);
            let set = corollary_pointset(s, n).map_err(e)?;
            ensure(set.len() as u64 == n, || {
                format!("s={s} N={n}: {} points", set.len())
            })?;
            let exact = set.exact();
            for i in 0..exact.len() {
                for j in 0..s {
                    ensure(exact.numerator(i, j) < exact.denominator(j), || {
                        format!("s={s} N={n}: point {i} outside [0,1)")
                    })?;
                }
            }
            let l2 = warnock_l2_rational(exact).map_err(e)?;
            let nf = n as f64;
            ratios.push(l2 * nf / nf.ln().powf((s as f64 - 1.0) / 2.0));
        }
        let med = median(&mut ratios.clone());
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        ensure(hi <= 4.0 * med && lo >= med / 4.0, || {
            format!("s={s}: ratios in [{lo}, {hi}], median {med}")
        })?;
        summary.push(format!(
            "s={s} ratio range [{:.2}, {:.2}] x median",
            lo / med,
            hi / med
        ));
    }
    Ok(summary.join("; "))
}

fn order_reduction() -> Check {
    let mut checked = 0;
    let mut instances = Vec::new();
    for m in 1..=8usize {
        instances.push((sobol_matrices(2, m, m).map_err(e)?, 1u32));
    }
    for m in 1..=6usize {
        instances.push((interlaced_sobol(1, 2, m).map_err(e)?, 2));
    }
    // higher orders, beyond the instances above
    for m in 1..=4usize {
        instances.push((interlaced_sobol(1, 3, m).map_err(e)?, 3));
        instances.push((interlaced_sobol(2, 2, m).map_err(e)?, 2));
    }
    for m in 1..=3usize {
        instances.push((interlaced_sobol(1, 5, m).map_err(e)?, 5));
    }
    for (g, alpha) in &instances {
        let t = smallest_t(g, *alpha, g.t_bound(), VERIFY_BUDGET)
            .map_err(e)?
            .certified
            .ok_or("instance not certified")?;
        for ap in 1..*alpha {
            let tr = t_reduced(t, *alpha, ap).map_err(e)?;
            let gt = truncate(g, g.width()).map_err(e)?;
            let v = verify_order_alpha(&gt, ap, tr, VERIFY_BUDGET).map_err(e)?;
            ensure(v == Verdict::Certified, || {
                format!("alpha={alpha} t={t} -> alpha'={ap} t'={tr}: {v:?}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} reductions certified"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "construction exactness",
            Duration::from_secs(1),
            construction_exactness,
        ),
        (
            "interlacing equivalence",
            Duration::from_secs(10),
            interlacing_equivalence,
        ),
        (
            "net certification",
            Duration::from_secs(60),
            net_certification,
        ),
        (
            "Walsh coefficient table",
            Duration::from_secs(30),
            walsh_table,
        ),
        (
            "discrepancy exactness",
            Duration::from_secs(60),
            discrepancy_exactness,
        ),
        (
            "series consistency",
            Duration::from_secs(60),
            series_consistency,
        ),
        (
            "character/dual consistency",
            Duration::from_secs(60),
            character_dual,
        ),
        (
            "scaling of the sequence",
            Duration::from_secs(600),
            theorem_scaling,
        ),
        (
            "finite-N construction",
            Duration::from_secs(300),
            corollary_construction,
        ),
        ("order reduction", Duration::from_secs(60), order_reduction),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; over time limit {limit:?}")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<28} {} ({:.2?}) {}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            took,
            detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
