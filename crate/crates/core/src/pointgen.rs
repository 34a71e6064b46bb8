//! Exact point generation for digital nets and sequences.
//!
//! Coordinates are dyadic rationals `num * 2^-p` with one precision `p`
//! shared by all coordinates of a point. Digits are stored MSB-first in
//! left-aligned 128-bit limbs: digit `d` (1-based) of a coordinate lives in
//! limb `(d - 1) / 128` at bit `127 - (d - 1) % 128`. For `p <= 128` every
//! coordinate is a single limb, which is the path all the arithmetic is
//! tuned for; larger precisions use more limbs per coordinate.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::genmat::{interlaced_sobol, sobol_matrices, GeneratingMatrixSet};
use crate::gf2::BitVector;

const LIMB: u32 = 128;

fn limbs_for(precision: u32) -> usize {
    (precision.max(1)).div_ceil(LIMB) as usize
}

/// A point of `[0,1)^s` with dyadic coordinates of common precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicPoint {
    precision: u32,
    per: usize,
    limbs: Vec<u128>,
}

impl DyadicPoint {
    pub fn zero(s: usize, precision: u32) -> Self {
        let per = limbs_for(precision);
        DyadicPoint {
            precision,
            per,
            limbs: vec![0; s * per],
        }
    }

    /// Coordinates `nums[j] * 2^-precision`, `precision <= 128`.
    pub fn from_numerators(precision: u32, nums: &[u128]) -> Result<Self> {
        if precision > LIMB {
            return Err(Error::InvalidInput(format!(
                "precision {precision} above 128; use from_big_numerators"
            )));
        }
        let mut p = Self::zero(nums.len(), precision);
        for (j, &n) in nums.iter().enumerate() {
            if precision < LIMB && n >> precision != 0 {
                return Err(Error::InvalidInput(format!(
                    "numerator {n} does not fit in {precision} bits"
                )));
            }
            p.limbs[j] = if precision == 0 {
                0
            } else {
                n << (LIMB - precision)
            };
        }
        Ok(p)
    }

    /// Coordinates `nums[j] * 2^-precision` for any precision.
    pub fn from_big_numerators(precision: u32, nums: &[BigUint]) -> Result<Self> {
        let mut p = Self::zero(nums.len(), precision);
        let total = p.per as u64 * LIMB as u64;
        for (j, n) in nums.iter().enumerate() {
            if n.bits() > precision as u64 {
                return Err(Error::InvalidInput(format!(
                    "numerator does not fit in {precision} bits"
                )));
            }
            let aligned: BigUint = n << (total - precision as u64);
            let digits = aligned.to_u64_digits(); // little-endian
            for k in 0..p.per {
                // limb k (MSB-first) is u64 words 2(per-1-k) and 2(per-1-k)+1
                let lo_idx = 2 * (p.per - 1 - k);
                let lo = *digits.get(lo_idx).unwrap_or(&0) as u128;
                let hi = *digits.get(lo_idx + 1).unwrap_or(&0) as u128;
                p.limbs[j * p.per + k] = (hi << 64) | lo;
            }
        }
        Ok(p)
    }

    /// Coordinates given as digit vectors: entry `i` of `coords[j]` is digit `i + 1`.
    pub fn from_digit_vectors(coords: &[BitVector]) -> Result<Self> {
        let precision = coords.first().map_or(0, |c| c.len()) as u32;
        if coords.iter().any(|c| c.len() as u32 != precision) {
            return Err(Error::DimensionMismatch(
                "digit vectors must share one length".into(),
            ));
        }
        let mut p = Self::zero(coords.len(), precision);
        for (j, c) in coords.iter().enumerate() {
            for i in c.iter_ones() {
                p.set_digit(j, i as u32 + 1, true);
            }
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.limbs.len() / self.per
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    fn coord(&self, j: usize) -> &[u128] {
        &self.limbs[j * self.per..(j + 1) * self.per]
    }

    /// Digit `d` (1-based) of coordinate `j`; zero beyond the precision.
    pub fn digit(&self, j: usize, d: u32) -> bool {
        assert!(d >= 1, "digits are 1-based");
        if d > self.precision {
            return false;
        }
        let limb = self.coord(j)[((d - 1) / LIMB) as usize];
        (limb >> (LIMB - 1 - (d - 1) % LIMB)) & 1 == 1
    }

    fn set_digit(&mut self, j: usize, d: u32, value: bool) {
        assert!(d >= 1 && d <= self.precision);
        let idx = j * self.per + ((d - 1) / LIMB) as usize;
        let mask = 1u128 << (LIMB - 1 - (d - 1) % LIMB);
        if value {
            self.limbs[idx] |= mask;
        } else {
            self.limbs[idx] &= !mask;
        }
    }

    /// The first `k <= 64` digits packed so that digit `i + 1` is bit `i`.
    pub fn leading_digits(&self, j: usize, k: u32) -> u64 {
        assert!(k <= 64);
        let top = self.coord(j)[0];
        let rev = (top >> 64) as u64;
        let rev = rev.reverse_bits();
        if k == 64 {
            rev
        } else {
            rev & ((1u64 << k) - 1)
        }
    }

    /// Numerator over `2^precision` on the single-limb path.
    pub fn numerator(&self, j: usize) -> Option<u128> {
        if self.precision > LIMB {
            return None;
        }
        if self.precision == 0 {
            return Some(0);
        }
        Some(self.coord(j)[0] >> (LIMB - self.precision))
    }

    pub fn numerator_big(&self, j: usize) -> BigUint {
        let mut acc = BigUint::zero();
        for &limb in self.coord(j) {
            acc = (acc << LIMB) + BigUint::from(limb);
        }
        acc >> (self.per as u64 * LIMB as u64 - self.precision as u64)
    }

    pub fn to_rational(&self, j: usize) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerator_big(j)),
            BigInt::one() << self.precision,
        )
    }

    pub fn to_f64(&self, j: usize) -> f64 {
        limbs_to_f64(self.coord(j))
    }

    /// `1 - x_j` computed exactly in fixed point, then rounded.
    pub fn complement_f64(&self, j: usize) -> f64 {
        let c = self.coord(j);
        if c.iter().all(|&l| l == 0) {
            return 1.0;
        }
        // two's complement of the left-aligned integer
        let mut out = vec![0u128; c.len()];
        let mut carry = true;
        for k in (0..c.len()).rev() {
            let (v, overflow) = (!c[k]).overflowing_add(carry as u128);
            out[k] = v;
            carry = overflow;
        }
        limbs_to_f64(&out)
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self.to_f64(j)).collect()
    }

    /// Same values at a higher precision (exact zero padding).
    pub fn with_precision(&self, precision: u32) -> DyadicPoint {
        assert!(
            precision >= self.precision,
            "cannot lower precision exactly"
        );
        let mut out = DyadicPoint::zero(self.dim(), precision);
        for j in 0..self.dim() {
            out.limbs[j * out.per..j * out.per + self.per].copy_from_slice(self.coord(j));
        }
        out
    }

    pub fn format_coord(&self, j: usize, format: PointFormat) -> String {
        let num = self.numerator_big(j);
        if num.is_zero() {
            return "0".into();
        }
        // drop trailing zero digits
        let tz = num.trailing_zeros().unwrap_or(0) as u32;
        let digits = self.precision - tz;
        let num = num >> tz;
        match format {
            PointFormat::Dec => {
                // num / 2^digits = num 5^digits / 10^digits
                let scaled = num * BigUint::from(5u32).pow(digits);
                let s = scaled.to_str_radix(10);
                format!("0.{}{}", "0".repeat(digits as usize - s.len()), s)
            }
            PointFormat::Bin => {
                let s = num.to_str_radix(2);
                format!("0.{}{}", "0".repeat(digits as usize - s.len()), s)
            }
            PointFormat::HexFrac => {
                let pad = (4 - digits % 4) % 4;
                let nibbles = (digits + pad) / 4;
                let s = (num << pad).to_str_radix(16);
                format!("0x0.{}{}", "0".repeat(nibbles as usize - s.len()), s)
            }
        }
    }

    pub fn format(&self, format: PointFormat) -> String {
        (0..self.dim())
            .map(|j| self.format_coord(j, format))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn limbs_to_f64(limbs: &[u128]) -> f64 {
    let mut v = 0.0;
    let mut scale = 1.0f64;
    for &l in limbs.iter().take(2) {
        scale *= 2f64.powi(-(LIMB as i32));
        v += l as f64 * scale;
    }
    v
}

impl fmt::Debug for DyadicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DyadicPoint(p={}; {})",
            self.precision,
            self.format(PointFormat::Bin)
        )
    }
}

/// Output formats for coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointFormat {
    /// Exact decimal expansion.
    Dec,
    /// `0x0.` followed by hexadecimal digits.
    HexFrac,
    /// `0.` followed by binary digits.
    Bin,
}

impl FromStr for PointFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dec" => Ok(PointFormat::Dec),
            "hexfrac" => Ok(PointFormat::HexFrac),
            "bin" => Ok(PointFormat::Bin),
            other => Err(Error::Parse(format!("unknown point format {other:?}"))),
        }
    }
}

/// Parses one coordinate written in `format` into an exact rational.
pub fn parse_coordinate(text: &str, format: PointFormat) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad {format:?} coordinate {text:?}"));
    let t = text.trim();
    if t == "0" {
        return Ok(BigRational::zero());
    }
    let (frac, radix) = match format {
        PointFormat::Dec => (t.strip_prefix("0.").ok_or_else(bad)?, 10u32),
        PointFormat::Bin => (t.strip_prefix("0.").ok_or_else(bad)?, 2),
        PointFormat::HexFrac => (t.strip_prefix("0x0.").ok_or_else(bad)?, 16),
    };
    if frac.is_empty() {
        return Err(bad());
    }
    let num = BigUint::parse_bytes(frac.as_bytes(), radix).ok_or_else(bad)?;
    let den = BigUint::from(radix).pow(frac.len() as u32);
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Parses a hex digit string (optionally `0x0.`-prefixed) into a dyadic
/// coordinate with four binary digits per hex digit.
pub fn parse_hex_digits(text: &str) -> Result<(u32, BigUint)> {
    let t = text.trim();
    let t = t.strip_prefix("0x0.").unwrap_or(t);
    if t.is_empty() {
        return Err(Error::Parse("empty hex digit string".into()));
    }
    let num = BigUint::parse_bytes(t.as_bytes(), 16)
        .ok_or_else(|| Error::Parse(format!("bad hex digits {text:?}")))?;
    Ok((4 * t.len() as u32, num))
}

/// Builds a shift point from one hex digit string per coordinate.
pub fn parse_shift(spec: &str) -> Result<DyadicPoint> {
    let parts = spec
        .split(',')
        .map(parse_hex_digits)
        .collect::<Result<Vec<_>>>()?;
    let precision = parts.iter().map(|(p, _)| *p).max().unwrap_or(0);
    let nums: Vec<BigUint> = parts
        .into_iter()
        .map(|(p, n)| n << (precision - p))
        .collect();
    DyadicPoint::from_big_numerators(precision, &nums)
}

/// Column-cached point generator for one matrix set.
pub struct PointGenerator {
    s: usize,
    width: usize,
    precision: u32,
    per: usize,
    // columns[(j * width + l) * per ..] holds column l of C_j as digits
    columns: Vec<u128>,
}

impl PointGenerator {
    pub fn new(g: &GeneratingMatrixSet) -> Self {
        let precision = g.depth() as u32;
        let per = limbs_for(precision);
        let (s, width) = (g.s(), g.width());
        let mut columns = vec![0u128; s * width * per];
        for (j, c) in g.matrices().iter().enumerate() {
            for k in 0..c.rows() {
                let mask = 1u128 << (LIMB - 1 - k as u32 % LIMB);
                let limb = k / LIMB as usize;
                for l in c.row(k).iter_ones() {
                    columns[(j * width + l) * per + limb] |= mask;
                }
            }
        }
        PointGenerator {
            s,
            width,
            precision,
            per,
            columns,
        }
    }

    /// Largest index count this generator supports, `2^width` (saturating).
    pub fn capacity(&self) -> u128 {
        if self.width >= 128 {
            u128::MAX
        } else {
            1u128 << self.width
        }
    }

    /// The point with index `n`, digits `C_j n` for each coordinate.
    pub fn point(&self, n: u64) -> Result<DyadicPoint> {
        if (n as u128) >= self.capacity() {
            return Err(Error::InvalidInput(format!(
                "index {n} needs more than {} columns",
                self.width
            )));
        }
        let mut p = DyadicPoint::zero(self.s, self.precision);
        let mut bits = n;
        while bits != 0 {
            let l = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            for j in 0..self.s {
                let src = (j * self.width + l) * self.per;
                for k in 0..self.per {
                    p.limbs[j * self.per + k] ^= self.columns[src + k];
                }
            }
        }
        Ok(p)
    }

    /// Points with indices `0..count`.
    pub fn points(&self, count: u64) -> Result<Vec<DyadicPoint>> {
        (0..count).map(|n| self.point(n)).collect()
    }
}

/// The `n`th point generated by `g`.
pub fn nth_point(g: &GeneratingMatrixSet, n: u64) -> Result<DyadicPoint> {
    PointGenerator::new(g).point(n)
}

/// All `2^width` points of the net generated by `g`.
pub fn net_points(g: &GeneratingMatrixSet) -> Result<Vec<DyadicPoint>> {
    if g.width() > 40 {
        return Err(Error::InvalidInput(format!(
            "refusing to enumerate 2^{} points",
            g.width()
        )));
    }
    PointGenerator::new(g).points(1u64 << g.width())
}

/// Digit interlacing of blocks of `alpha` consecutive coordinates: digit
/// `r + (a - 1) alpha` of output coordinate `b` is digit `a` of input
/// coordinate `(b - 1) alpha + r`.
pub fn interlace_point(x: &DyadicPoint, alpha: u32) -> Result<DyadicPoint> {
    let a = alpha as usize;
    if alpha == 0 || !x.dim().is_multiple_of(a) {
        return Err(Error::InvalidInput(format!(
            "dimension {} not divisible by alpha = {alpha}",
            x.dim()
        )));
    }
    if alpha == 1 {
        return Ok(x.clone());
    }
    let d = x.dim() / a;
    let mut out = DyadicPoint::zero(d, alpha * x.precision);
    for b in 0..d {
        for r in 0..a {
            let src = b * a + r;
            for digit in 1..=x.precision {
                if x.digit(src, digit) {
                    out.set_digit(b, r as u32 + 1 + (digit - 1) * alpha, true);
                }
            }
        }
    }
    Ok(out)
}

/// Digitwise XOR `x (+) sigma` at the larger of the two precisions.
pub fn digital_shift(x: &DyadicPoint, sigma: &DyadicPoint) -> Result<DyadicPoint> {
    if x.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, shift has {}",
            x.dim(),
            sigma.dim()
        )));
    }
    let p = x.precision.max(sigma.precision);
    let mut out = x.with_precision(p);
    let sig = sigma.with_precision(p);
    for (a, b) in out.limbs.iter_mut().zip(&sig.limbs) {
        *a ^= b;
    }
    Ok(out)
}

/// Exact rational coordinates with one denominator per coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPointSet {
    dim: usize,
    denominators: Vec<BigUint>,
    // point-major
    numerators: Vec<BigUint>,
}

impl RationalPointSet {
    pub fn new(denominators: Vec<BigUint>, points: Vec<Vec<BigUint>>) -> Result<Self> {
        let dim = denominators.len();
        if dim == 0 || denominators.iter().any(|d| d.is_zero()) {
            return Err(Error::InvalidInput("need nonzero denominators".into()));
        }
        let mut numerators = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "point with {} coordinates in a {dim}-dimensional set",
                    p.len()
                )));
            }
            for (j, n) in p.into_iter().enumerate() {
                if n >= denominators[j] {
                    return Err(Error::InvalidInput("coordinate outside [0,1)".into()));
                }
                numerators.push(n);
            }
        }
        Ok(RationalPointSet {
            dim,
            denominators,
            numerators,
        })
    }

    pub fn from_dyadic(points: &[DyadicPoint]) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidInput("empty point set".into()))?;
        let (dim, p) = (first.dim(), first.precision());
        if points.iter().any(|x| x.dim() != dim) {
            return Err(Error::DimensionMismatch("mixed dimensions".into()));
        }
        let p = points.iter().map(|x| x.precision()).max().unwrap_or(p);
        let den = BigUint::one() << p;
        let pts = points
            .iter()
            .map(|x| {
                (0..dim)
                    .map(|j| x.numerator_big(j) << (p - x.precision()))
                    .collect()
            })
            .collect();
        Self::new(vec![den; dim], pts)
    }

    /// From arbitrary rationals in `[0,1)`, using the per-coordinate lcm of
    /// denominators.
    pub fn from_rationals(points: &[Vec<BigRational>]) -> Result<Self> {
        let dim = points
            .first()
            .map(|p| p.len())
            .ok_or_else(|| Error::InvalidInput("empty point set".into()))?;
        let mut dens = vec![BigInt::one(); dim];
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch("mixed dimensions".into()));
            }
            for (j, v) in p.iter().enumerate() {
                dens[j] = dens[j].lcm(v.denom());
            }
        }
        let pts = points
            .iter()
            .map(|p| {
                p.iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let n = v.numer() * (&dens[j] / v.denom());
                        n.to_biguint()
                            .ok_or_else(|| Error::InvalidInput("negative coordinate".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            dens.into_iter()
                .map(|d| d.to_biguint().expect("positive"))
                .collect(),
            pts,
        )
    }

    pub fn len(&self) -> usize {
        self.numerators.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn denominator(&self, j: usize) -> &BigUint {
        &self.denominators[j]
    }

    pub fn numerator(&self, n: usize, j: usize) -> &BigUint {
        &self.numerators[n * self.dim + j]
    }

    pub fn value(&self, n: usize, j: usize) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerator(n, j).clone()),
            BigInt::from(self.denominators[j].clone()),
        )
    }

    pub fn complement_f64(&self, n: usize, j: usize) -> f64 {
        let den = &self.denominators[j];
        BigRational::new(
            BigInt::from(den - self.numerator(n, j)),
            BigInt::from(den.clone()),
        )
        .to_f64()
        .expect("finite")
    }

    /// Keeps the first `count` points.
    pub fn prefix(&self, count: usize) -> RationalPointSet {
        RationalPointSet {
            dim: self.dim,
            denominators: self.denominators.clone(),
            numerators: self.numerators[..count.min(self.len()) * self.dim].to_vec(),
        }
    }
}

/// Output of [`corollary_pointset`].
#[derive(Clone, Debug)]
pub struct CorollaryPointSet {
    /// `m` with `2^(m-1) < N <= 2^m`.
    pub m: u32,
    /// Stored points; the rescaled first coordinate is rounded toward zero.
    pub points: Vec<DyadicPoint>,
    exact: RationalPointSet,
}

impl CorollaryPointSet {
    /// The same points with the first coordinate kept as an exact rational
    /// with denominator `N 2^(2m)`.
    pub fn exact(&self) -> &RationalPointSet {
        &self.exact
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Exactly `n` points in `[0,1)^s` from the propagation rule applied to an
/// order 3 net.
///
/// Takes the first `2^m` points of the `3s - 1` dimensional Sobol'
/// sequence, prepends `i 2^-m` to point `i`, interlaces with factor 3,
/// keeps the points whose first coordinate lies below `n / 2^m` and
/// stretches that coordinate by `2^m / n`.
pub fn corollary_pointset(s: usize, n: u64) -> Result<CorollaryPointSet> {
    if s == 0 {
        return Err(Error::InvalidInput("s must be >= 1".into()));
    }
    if n < 2 {
        return Err(Error::InvalidInput("N must be >= 2".into()));
    }
    let m = 64 - (n - 1).leading_zeros();
    if m > 40 {
        return Err(Error::InvalidInput(format!("N = {n} too large")));
    }
    let mu = m as usize;
    let sobol = sobol_matrices(3 * s - 1, mu, mu)?;
    let gen = PointGenerator::new(&sobol);
    let inner = 3 * m; // precision after interlacing
    let stored = inner.max(LIMB);
    let den_first = BigUint::from(n) << (2 * m);
    let den_inner = BigUint::one() << inner;

    let mut points = Vec::new();
    let mut exact = Vec::new();
    for i in 0..1u64 << m {
        let x = gen.point(i)?;
        let mut nums = Vec::with_capacity(3 * s);
        nums.push(BigUint::from(i));
        nums.extend((0..3 * s - 1).map(|j| x.numerator_big(j)));
        let y = DyadicPoint::from_big_numerators(m, &nums)?;
        let z = interlace_point(&y, 3)?;
        let a = z.numerator_big(0);
        if a >= den_first {
            continue;
        }
        // floor(a 2^stored / (N 2^2m))
        let scaled = (&a << stored) / &den_first;
        let mut coords = vec![scaled];
        coords.extend((1..s).map(|j| z.numerator_big(j) << (stored - inner)));
        points.push(DyadicPoint::from_big_numerators(stored, &coords)?);

        let mut ex = vec![a];
        ex.extend((1..s).map(|j| z.numerator_big(j)));
        exact.push(ex);
    }
    if points.len() as u64 != n {
        return Err(Error::InvalidInput(format!(
            "internal: propagation kept {} points instead of {n}",
            points.len()
        )));
    }
    let mut dens = vec![den_first];
    dens.extend(std::iter::repeat_n(den_inner, s - 1));
    let exact = RationalPointSet::new(dens, exact)?;
    Ok(CorollaryPointSet { m, points, exact })
}

/// First `count` points of the order `alpha` interlaced Sobol' sequence in
/// dimension `s`.
pub fn sequence_points(s: usize, alpha: u32, count: u64) -> Result<Vec<DyadicPoint>> {
    let width = (64 - count.saturating_sub(1).leading_zeros()).max(1) as usize;
    let g = interlaced_sobol(s, alpha, width)?;
    PointGenerator::new(&g).points(count)
}
