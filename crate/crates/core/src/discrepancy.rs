//! L2 discrepancy of point sets.
//!
//! The main evaluator is Warnock's closed form
//!
//! ```text
//! L2^2 = 3^-s - (2/N) sum_n prod_j (1 - x_nj^2)/2
//!             + (1/N^2) sum_{n,m} prod_j (1 - max(x_nj, x_mj))
//! ```
//!
//! in binary64 with Neumaier summation, or in exact rational arithmetic.
//! Because `1 - max(x, y) = min(1 - x, 1 - y)`, the float path only needs
//! the complements `1 - x`, which are formed exactly in fixed point and
//! rounded once; rounding is monotone, so the pairwise kernel is the
//! correctly rounded value of the exact kernel factor.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::pointgen::{DyadicPoint, RationalPointSet};
use crate::walsh::{self, KernelCoeff};

/// Largest point count accepted by the exact rational path.
pub const EXACT_MAX_POINTS: usize = 1024;

/// Compensated (Kahan-Babuska / Neumaier) accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn merge(&mut self, other: &Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Arithmetic {
    #[default]
    Float,
    Exact,
}

/// Row-major table of complements `1 - x_nj`.
struct Complements {
    s: usize,
    u: Vec<f64>,
}

impl Complements {
    fn from_dyadic(points: &[DyadicPoint]) -> Result<Self> {
        let s = check_points(points)?;
        let u = points
            .iter()
            .flat_map(|p| (0..s).map(move |j| p.complement_f64(j)))
            .collect();
        Ok(Complements { s, u })
    }

    fn from_rational(points: &RationalPointSet) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("empty point set".into()));
        }
        let s = points.dim();
        let u = (0..points.len())
            .flat_map(|n| (0..s).map(move |j| points.complement_f64(n, j)))
            .collect();
        Ok(Complements { s, u })
    }

    fn len(&self) -> usize {
        self.u.len() / self.s
    }

    fn row(&self, n: usize) -> &[f64] {
        &self.u[n * self.s..(n + 1) * self.s]
    }
}

fn check_points(points: &[DyadicPoint]) -> Result<usize> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidInput("empty point set".into()))?;
    let s = first.dim();
    if s == 0 || points.iter().any(|p| p.dim() != s) {
        return Err(Error::DimensionMismatch(
            "points must share a positive dimension".into(),
        ));
    }
    Ok(s)
}

// (1 - x^2)/2 = u (2 - u) / 2 with u = 1 - x
fn single_term(u: &[f64]) -> f64 {
    u.iter().map(|&v| v * (2.0 - v) * 0.5).product()
}

fn pair_term(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x.min(y)).product()
}

/// Running Warnock accumulators over a growing prefix.
struct WarnockAccumulator {
    s: usize,
    singles: Neumaier,
    pairs: Neumaier,
    n: usize,
}

impl WarnockAccumulator {
    fn new(s: usize) -> Self {
        WarnockAccumulator {
            s,
            singles: Neumaier::default(),
            pairs: Neumaier::default(),
            n: 0,
        }
    }

    /// Adds point `n` of `c`, which must be the next unseen one.
    fn push(&mut self, c: &Complements) {
        let n = self.n;
        let row = c.row(n);
        self.singles.add(single_term(row));
        let mut cross = Neumaier::default();
        for m in 0..n {
            cross.add(pair_term(row, c.row(m)));
        }
        self.pairs.add(2.0 * cross.value());
        self.pairs.add(row.iter().product());
        self.n += 1;
    }

    fn squared(&self) -> f64 {
        let nf = self.n as f64;
        let mut total = Neumaier::default();
        total.add(3f64.powi(-(self.s as i32)));
        total.add(-2.0 * self.singles.value() / nf);
        total.add(self.pairs.value() / (nf * nf));
        total.value()
    }
}

fn l2_from_complements(c: &Complements) -> f64 {
    let mut acc = WarnockAccumulator::new(c.s);
    for _ in 0..c.len() {
        acc.push(c);
    }
    acc.squared().max(0.0).sqrt()
}

/// L2 discrepancy by Warnock's formula in binary64.
pub fn warnock_l2(points: &[DyadicPoint]) -> Result<f64> {
    Ok(l2_from_complements(&Complements::from_dyadic(points)?))
}

/// L2 discrepancy of exact rational points, float path.
pub fn warnock_l2_rational(points: &RationalPointSet) -> Result<f64> {
    Ok(l2_from_complements(&Complements::from_rational(points)?))
}

/// Exact squared L2 discrepancy.
///
/// With per-coordinate denominators `D_j` and numerators `a_nj` this is
/// `3^-s - (2/N) S_1 / prod(2 D_j^2) + S_2 / (N^2 prod D_j)` where
/// `S_1 = sum_n prod_j (D_j^2 - a_nj^2)` and
/// `S_2 = sum_{n,m} prod_j (D_j - max(a_nj, a_mj))` are integers.
pub fn warnock_l2_squared_exact(points: &RationalPointSet) -> Result<BigRational> {
    let rows = warnock_exact_prefixes(points, points.len())?;
    Ok(rows.into_iter().last().expect("nonempty"))
}

/// Exact squared discrepancies of the prefixes of size `1..=upto`.
pub fn warnock_exact_prefixes(points: &RationalPointSet, upto: usize) -> Result<Vec<BigRational>> {
    if points.is_empty() || upto == 0 {
        return Err(Error::InvalidInput("empty point set".into()));
    }
    if upto > EXACT_MAX_POINTS || upto > points.len() {
        return Err(Error::InvalidInput(format!(
            "exact arithmetic supports at most {EXACT_MAX_POINTS} points (and no more than given)"
        )));
    }
    let s = points.dim();
    let dens: Vec<BigInt> = (0..s)
        .map(|j| BigInt::from(points.denominator(j).clone()))
        .collect();
    let nums: Vec<Vec<BigInt>> = (0..upto)
        .map(|n| {
            (0..s)
                .map(|j| BigInt::from(points.numerator(n, j).clone()))
                .collect()
        })
        .collect();
    let single_den: BigInt = dens.iter().map(|d| BigInt::from(2) * d * d).product();
    let pair_den: BigInt = dens.iter().product();
    let third = BigRational::new(BigInt::one(), BigInt::from(3).pow(s as u32));

    let mut s1 = BigInt::zero();
    let mut s2 = BigInt::zero();
    let mut out = Vec::with_capacity(upto);
    for n in 0..upto {
        let row = &nums[n];
        s1 += row
            .iter()
            .zip(&dens)
            .map(|(a, d)| d * d - a * a)
            .product::<BigInt>();
        let mut cross = BigInt::zero();
        for other in &nums[..n] {
            cross += row
                .iter()
                .zip(other)
                .zip(&dens)
                .map(|((a, b), d)| d - a.max(b))
                .product::<BigInt>();
        }
        s2 += cross * 2;
        s2 += row
            .iter()
            .zip(&dens)
            .map(|(a, d)| d - a)
            .product::<BigInt>();

        let nn = BigInt::from(n + 1);
        let v = third.clone() - BigRational::new(BigInt::from(2) * &s1, &nn * &single_den)
            + BigRational::new(s2.clone(), &nn * &nn * &pair_den);
        out.push(v);
    }
    Ok(out)
}

fn sqrt_rational(v: &BigRational) -> f64 {
    v.to_f64().expect("finite").max(0.0).sqrt()
}

/// L2 discrepancy in the requested arithmetic.
pub fn l2_discrepancy(points: &[DyadicPoint], arith: Arithmetic) -> Result<f64> {
    match arith {
        Arithmetic::Float => warnock_l2(points),
        Arithmetic::Exact => Ok(sqrt_rational(&warnock_l2_squared_exact(
            &RationalPointSet::from_dyadic(points)?,
        )?)),
    }
}

/// L2 discrepancy of rational points in the requested arithmetic.
pub fn l2_discrepancy_rational(points: &RationalPointSet, arith: Arithmetic) -> Result<f64> {
    match arith {
        Arithmetic::Float => warnock_l2_rational(points),
        Arithmetic::Exact => Ok(sqrt_rational(&warnock_l2_squared_exact(points)?)),
    }
}

/// Number of ones in the binary expansion of `n`.
pub fn sum_of_digits(n: u64) -> u32 {
    n.count_ones()
}

/// One row of a prefix scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub n: u64,
    pub l2: f64,
    pub s_of_n: u32,
    /// `L2 N / (ln N)^((s-1)/2)`
    pub ratio_roth: f64,
    /// `L2 N / ((ln N)^((s-1)/2) sqrt(S(N)))`
    pub ratio_proinov: f64,
}

impl ScanRow {
    pub fn new(n: u64, s: usize, l2: f64) -> Self {
        let log_factor = (n as f64).ln().powf((s as f64 - 1.0) / 2.0);
        let s_of_n = sum_of_digits(n);
        let ratio_roth = l2 * n as f64 / log_factor;
        ScanRow {
            n,
            l2,
            s_of_n,
            ratio_roth,
            ratio_proinov: ratio_roth / (s_of_n as f64).sqrt(),
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.n, self.l2, self.s_of_n, self.ratio_roth, self.ratio_proinov
        )
    }

    pub fn parse_csv(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.trim().split(',').collect();
        let bad = || Error::Parse(format!("bad report row {line:?}"));
        if f.len() != 5 {
            return Err(bad());
        }
        Ok(ScanRow {
            n: f[0].parse().map_err(|_| bad())?,
            l2: f[1].parse().map_err(|_| bad())?,
            s_of_n: f[2].parse().map_err(|_| bad())?,
            ratio_roth: f[3].parse().map_err(|_| bad())?,
            ratio_proinov: f[4].parse().map_err(|_| bad())?,
        })
    }
}

/// Prefix discrepancies `N = 2..=n_max` of a point stream.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancyReport {
    pub s: usize,
    pub rows: Vec<ScanRow>,
}

impl DiscrepancyReport {
    pub const CSV_HEADER: &'static str = "N,l2,S,ratio_roth,ratio_proinov";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.to_csv());
            out.push('\n');
        }
        out
    }

    pub fn row(&self, n: u64) -> Option<&ScanRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// Discrepancy of every prefix of `seq` of length `2..=n_max`, in
/// `O(n_max^2 s)` total work.
pub fn warnock_scan<I>(seq: I, n_max: usize) -> Result<DiscrepancyReport>
where
    I: IntoIterator<Item = DyadicPoint>,
{
    if n_max < 2 {
        return Err(Error::InvalidInput("n_max must be >= 2".into()));
    }
    let points: Vec<DyadicPoint> = seq.into_iter().take(n_max).collect();
    if points.len() < n_max {
        return Err(Error::InvalidInput(format!(
            "stream ended after {} points, {n_max} requested",
            points.len()
        )));
    }
    let c = Complements::from_dyadic(&points)?;
    let mut acc = WarnockAccumulator::new(c.s);
    let mut rows = Vec::with_capacity(n_max - 1);
    for n in 1..=n_max {
        acc.push(&c);
        if n >= 2 {
            rows.push(ScanRow::new(n as u64, c.s, acc.squared().max(0.0).sqrt()));
        }
    }
    Ok(DiscrepancyReport { s: c.s, rows })
}

/// Exact-arithmetic variant of [`warnock_scan`], limited to
/// [`EXACT_MAX_POINTS`].
pub fn warnock_scan_exact(points: &[DyadicPoint], n_max: usize) -> Result<DiscrepancyReport> {
    if n_max < 2 || n_max > points.len() {
        return Err(Error::InvalidInput(format!(
            "need 2 <= n_max <= {}",
            points.len()
        )));
    }
    let set = RationalPointSet::from_dyadic(&points[..n_max])?;
    let sq = warnock_exact_prefixes(&set, n_max)?;
    let rows = sq
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, v)| ScanRow::new(i as u64 + 1, set.dim(), sqrt_rational(v)))
        .collect();
    Ok(DiscrepancyReport { s: set.dim(), rows })
}

/// Default cap on the number of `(k, l)` products in the Walsh series.
pub const SERIES_BUDGET: u128 = 1 << 28;

/// Squared L2 discrepancy from the Walsh series
/// `sum_{k,l != 0} r(k,l) W(k) W(l)`, `W(k) = (1/N) sum_n wal_k(x_n)`,
/// truncated to components below `2^bits`.
///
/// Only the nonzero `r(k_j, l_j)` factors are enumerated, so the work is
/// (number of nonzero one-dimensional pairs)^s rather than `4^(s bits)`.
pub fn walsh_series_l2(points: &[DyadicPoint], bits: u32, budget: u128) -> Result<f64> {
    let s = check_points(points)?;
    if s > 2 {
        return Err(Error::InvalidInput(format!(
            "Walsh series supports s <= 2, got {s}"
        )));
    }
    if bits == 0 || bits > 8 {
        return Err(Error::InvalidInput(format!(
            "truncation bits {bits} outside 1..=8"
        )));
    }
    let pairs = walsh::nonzero_pairs(bits);
    let estimate = (pairs.len() as u128).pow(s as u32);
    if estimate > budget {
        return Err(Error::BudgetExceeded {
            what: "walsh series",
            estimate,
            budget,
        });
    }
    let sums = character_table(points, bits);
    let n = points.len() as f64;
    let stride = 1usize << bits;
    let mut total = Neumaier::default();
    match s {
        1 => {
            for &(k, l, r) in &pairs {
                if k != 0 && l != 0 {
                    total.add(r.to_f64() * sums[k as usize] as f64 * sums[l as usize] as f64);
                }
            }
        }
        _ => {
            let vals: Vec<(usize, usize, f64)> = pairs
                .iter()
                .map(|&(k, l, r): &(u64, u64, KernelCoeff)| (k as usize, l as usize, r.to_f64()))
                .collect();
            for &(k1, l1, r1) in &vals {
                for &(k2, l2, r2) in &vals {
                    if (k1 == 0 && k2 == 0) || (l1 == 0 && l2 == 0) {
                        continue;
                    }
                    let wk = sums[k1 * stride + k2] as f64;
                    let wl = sums[l1 * stride + l2] as f64;
                    if wk != 0.0 && wl != 0.0 {
                        total.add(r1 * r2 * wk * wl);
                    }
                }
            }
        }
    }
    Ok(total.value() / (n * n))
}

/// `sum_n wal_k(x_n)` for every multi-index with components below
/// `2^bits`, by a Walsh-Hadamard transform of the digit histogram.
/// Index layout is row-major: `k_1 * 2^bits + k_2` for `s = 2`.
pub fn character_table(points: &[DyadicPoint], bits: u32) -> Vec<i64> {
    let s = points.first().map_or(1, |p| p.dim());
    let total_bits = bits as usize * s;
    let mut hist = vec![0i64; 1 << total_bits];
    for p in points {
        let mut idx = 0usize;
        for j in 0..s {
            idx = (idx << bits) | p.leading_digits(j, bits) as usize;
        }
        hist[idx] += 1;
    }
    // sum_d h(d) (-1)^{popcount(k & d)}
    let mut h = 1;
    while h < hist.len() {
        for i in (0..hist.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (hist[j], hist[j + h]);
                hist[j] = a + b;
                hist[j + h] = a - b;
            }
        }
        h *= 2;
    }
    hist
}

/// Independent evaluation of the L2 discrepancy for `s <= 2`.
///
/// * `s = 1`: exact integration of the piecewise quadratic `Delta(t)^2`
///   between sorted points; `grid` is ignored.
/// * `s = 2`: midpoint rule on a `2^grid x 2^grid` grid. `Delta^2` is
///   smooth away from the `2N` lines through the points, so the error is
///   dominated by the cells those lines cross, `O(N 2^-grid)` for `L2^2`.
pub fn quadrature_oracle_l2(points: &RationalPointSet, grid: u32) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidInput("empty point set".into()));
    }
    match points.dim() {
        1 => Ok(exact_1d_squared(points)
            .to_f64()
            .expect("finite")
            .max(0.0)
            .sqrt()),
        2 => {
            if grid == 0 || grid > 13 {
                return Err(Error::InvalidInput(format!(
                    "grid exponent {grid} outside 1..=13"
                )));
            }
            Ok(midpoint_2d_squared(points, grid).max(0.0).sqrt())
        }
        s => Err(Error::InvalidInput(format!(
            "quadrature oracle supports s <= 2, got {s}"
        ))),
    }
}

/// Exact `int_0^1 (A(t)/N - t)^2 dt` for one-dimensional points.
pub fn exact_1d_squared(points: &RationalPointSet) -> BigRational {
    let mut xs: Vec<BigRational> = (0..points.len()).map(|n| points.value(n, 0)).collect();
    xs.sort();
    let n = BigRational::from_integer(BigInt::from(xs.len()));
    let three = BigRational::from_integer(BigInt::from(3));
    let cube = |v: BigRational| &v * &v * &v;
    let mut total = BigRational::zero();
    let mut lo = BigRational::zero();
    for (count, x) in xs
        .iter()
        .chain(std::iter::once(&BigRational::one()))
        .enumerate()
    {
        let c = BigRational::from_integer(BigInt::from(count)) / &n;
        // int_lo^x (t - c)^2 dt
        total += (cube(x - &c) - cube(&lo - &c)) / &three;
        lo = x.clone();
    }
    total
}

fn midpoint_2d_squared(points: &RationalPointSet, grid: u32) -> f64 {
    let g = 1usize << grid;
    // a point counts at midpoint index i iff floor(x 2^(grid+1)) <= 2i
    let bin = |n: usize, j: usize| -> usize {
        let f: BigUint = (points.numerator(n, j) << (grid + 1)) / points.denominator(j);
        let f = f.to_usize().expect("small");
        f.div_ceil(2)
    };
    let mut counts = vec![0u32; g * g];
    for n in 0..points.len() {
        let (bx, by) = (bin(n, 0), bin(n, 1));
        if bx < g && by < g {
            counts[bx * g + by] += 1;
        }
    }
    // 2-d prefix sums
    for i in 0..g {
        for j in 0..g {
            let mut v = counts[i * g + j];
            if i > 0 {
                v += counts[(i - 1) * g + j];
            }
            if j > 0 {
                v += counts[i * g + j - 1];
            }
            if i > 0 && j > 0 {
                v -= counts[(i - 1) * g + j - 1];
            }
            counts[i * g + j] = v;
        }
    }
    let nf = points.len() as f64;
    let h = 1.0 / g as f64;
    let mut total = Neumaier::default();
    for i in 0..g {
        let t1 = (i as f64 + 0.5) * h;
        let mut row = Neumaier::default();
        for j in 0..g {
            let t2 = (j as f64 + 0.5) * h;
            let d = counts[i * g + j] as f64 / nf - t1 * t2;
            row.add(d * d);
        }
        total.merge(&row);
    }
    total.value() * h * h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts1(p: u32, nums: &[u128]) -> Vec<DyadicPoint> {
        nums.iter()
            .map(|&n| DyadicPoint::from_numerators(p, &[n]).unwrap())
            .collect()
    }

    #[test]
    fn single_points() {
        let origin = pts1(3, &[0]);
        assert!((warnock_l2(&origin).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let half = pts1(1, &[1]);
        assert!((warnock_l2(&half).unwrap() - 1.0 / 12f64.sqrt()).abs() < 1e-15);
        let exact =
            warnock_l2_squared_exact(&RationalPointSet::from_dyadic(&half).unwrap()).unwrap();
        assert_eq!(exact, BigRational::new(BigInt::one(), BigInt::from(12)));
    }

    #[test]
    fn empty_is_rejected() {
        assert!(warnock_l2(&[]).is_err());
    }

    #[test]
    fn vdc_matches_1d_exact() {
        let p = pts1(2, &[0, 2, 1, 3]);
        let set = RationalPointSet::from_dyadic(&p).unwrap();
        let oracle = quadrature_oracle_l2(&set, 0).unwrap();
        assert!((warnock_l2(&p).unwrap() - oracle).abs() < 1e-12);
        assert_eq!(
            warnock_l2_squared_exact(&set).unwrap(),
            exact_1d_squared(&set)
        );
    }

    #[test]
    fn scan_two_points() {
        let p = pts1(1, &[0, 1]);
        let r = warnock_scan(p.clone(), 2).unwrap();
        assert_eq!(r.rows.len(), 1);
        let set = RationalPointSet::from_dyadic(&p).unwrap();
        let direct = exact_1d_squared(&set).to_f64().unwrap().sqrt();
        assert!((r.rows[0].l2 - direct).abs() < 1e-15);
        assert!(warnock_scan(p, 3).is_err());
    }

    #[test]
    fn neumaier_beats_naive() {
        let mut acc = Neumaier::default();
        let mut naive = 0.0;
        for v in [1.0, 1e100, 1.0, -1e100] {
            acc.add(v);
            naive += v;
        }
        assert_eq!(acc.value(), 2.0);
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn sum_of_digits_examples() {
        assert_eq!(sum_of_digits(6), 2);
        assert_eq!(sum_of_digits(1 << 20), 1);
        assert_eq!(sum_of_digits(1), 1);
    }

    #[test]
    fn series_single_point() {
        let p = pts1(1, &[0]);
        let v = walsh_series_l2(&p, 6, SERIES_BUDGET).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 0.05, "{v}");
    }

    #[test]
    fn series_rejects_out_of_range() {
        let p = pts1(1, &[0]);
        assert!(walsh_series_l2(&p, 9, SERIES_BUDGET).is_err());
        let q: Vec<DyadicPoint> = (0..2)
            .map(|_| DyadicPoint::from_numerators(1, &[0, 0, 0]).unwrap())
            .collect();
        assert!(walsh_series_l2(&q, 3, SERIES_BUDGET).is_err());
        let r: Vec<DyadicPoint> = (0..2)
            .map(|_| DyadicPoint::from_numerators(1, &[0, 0]).unwrap())
            .collect();
        assert!(matches!(
            walsh_series_l2(&r, 8, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn character_table_counts() {
        let p = pts1(2, &[0, 2, 1, 3]);
        let t = character_table(&p, 3);
        assert_eq!(t[0], 4);
        assert_eq!(t[1], 0);
        assert_eq!(t[4], 4);
    }

    #[test]
    fn report_csv_round_trip() {
        let p = pts1(2, &[0, 2, 1, 3]);
        let r = warnock_scan(p, 4).unwrap();
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(DiscrepancyReport::CSV_HEADER));
        let back: Vec<ScanRow> = lines.map(|l| ScanRow::parse_csv(l).unwrap()).collect();
        assert_eq!(back, r.rows);
    }

    #[test]
    fn quadrature_2d_origin_in_unit_range() {
        let p = vec![DyadicPoint::from_numerators(1, &[0, 0]).unwrap()];
        let set = RationalPointSet::from_dyadic(&p).unwrap();
        let v = quadrature_oracle_l2(&set, 8).unwrap();
        assert!(v > 0.0 && v < 1.0);
        assert!((v - warnock_l2(&p).unwrap()).abs() < 5.0 / 256.0);
    }
}
