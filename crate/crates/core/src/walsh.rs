//! Walsh functions in base 2 and the Walsh coefficients `r(k, l)` of the
//! kernel `1 - max(x, y)` that appears in the squared L2 discrepancy.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::pointgen::DyadicPoint;

/// `mu(0) = 0`, otherwise the position of the highest set bit, counted from 1.
pub fn mu(k: u64) -> u32 {
    64 - k.leading_zeros()
}

/// Sum of the positions of the `order` highest set bits of `k`.
pub fn mu_order(k: u64, order: u32) -> u32 {
    let mut k = k;
    let mut total = 0;
    for _ in 0..order {
        if k == 0 {
            break;
        }
        let a = mu(k);
        total += a;
        k &= !(1u64 << (a - 1));
    }
    total
}

/// `wal_k` evaluated on packed digits: digit `i + 1` of `x` at bit `i`.
pub fn wal_digits(k: u64, digits: u64) -> i32 {
    if (k & digits).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `wal_k(x_j)` for coordinate `j` of `x`.
pub fn wal(k: u64, x: &DyadicPoint, j: usize) -> i32 {
    wal_digits(k, x.leading_digits(j, mu(k)))
}

/// A multi-index `(k_1, ..., k_s)` of Walsh frequencies.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct WalshIndex(pub Vec<u64>);

impl WalshIndex {
    pub fn zero(s: usize) -> Self {
        WalshIndex(vec![0; s])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    /// `mu(k) = mu(k_1) + ... + mu(k_s)`.
    pub fn mu(&self) -> u32 {
        self.0.iter().map(|&k| mu(k)).sum()
    }

    /// Order `alpha` weight: per coordinate the `alpha` highest positions.
    pub fn mu_order(&self, alpha: u32) -> u32 {
        self.0.iter().map(|&k| mu_order(k, alpha)).sum()
    }

    /// Digit vector `(kappa_0, ..., kappa_{len-1})` of component `j`.
    pub fn digit_vector(&self, j: usize, len: usize) -> BitVector {
        BitVector::from_u64(self.0[j], len)
    }
}

impl fmt::Display for WalshIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `wal_k(x) = prod_j wal_{k_j}(x_j)`.
pub fn wal_vec(k: &WalshIndex, x: &DyadicPoint) -> Result<i32> {
    if k.dim() != x.dim() {
        return Err(Error::DimensionMismatch(format!(
            "index has {} components, point has {}",
            k.dim(),
            x.dim()
        )));
    }
    Ok(k.0
        .iter()
        .enumerate()
        .map(|(j, &kj)| wal(kj, x, j))
        .product())
}

/// A kernel coefficient `sign / (3^three * 2^exp)`; every `r(k, l)` has this form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KernelCoeff {
    pub sign: i8,
    pub three: bool,
    pub exp: u32,
}

impl KernelCoeff {
    pub const ZERO: KernelCoeff = KernelCoeff {
        sign: 0,
        three: false,
        exp: 0,
    };

    fn new(sign: i8, three: bool, exp: u32) -> Self {
        KernelCoeff { sign, three, exp }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let v = 2f64.powi(-(self.exp as i32));
        let v = if self.three { v / 3.0 } else { v };
        self.sign as f64 * v
    }

    pub fn to_ratio(&self) -> BigRational {
        if self.sign == 0 {
            return BigRational::zero();
        }
        let mut den = BigInt::one() << self.exp;
        if self.three {
            den *= 3;
        }
        BigRational::new(BigInt::from(self.sign), den)
    }

    /// Reduced `(numerator, denominator)` as decimal strings.
    pub fn fraction_strings(&self) -> (String, String) {
        let r = self.to_ratio();
        (r.numer().to_string(), r.denom().to_string())
    }
}

fn bit_positions(k: u64) -> Vec<u32> {
    // descending, 1-based
    (1..=64u32)
        .rev()
        .filter(|&a| (k >> (a - 1)) & 1 == 1)
        .collect()
}

/// The Walsh coefficient `r(k, l)` of `1 - max(x, y)`, symmetric in its
/// arguments.
///
/// With `k >= l`, `k = 2^(a_1 - 1) + ... + 2^(a_v - 1)` and
/// `l = 2^(b_1 - 1) + ... + 2^(b_w - 1)` (positions descending):
///
/// | case | value |
/// |---|---|
/// | `k = l = 0` | `1/3` |
/// | `v = 1, l = 0` | `2^-(a_1 + 2)` |
/// | `v = 2, l = 0` | `-2^-(a_1 + a_2 + 2)` |
/// | `v = w + 2 > 2`, `a_3.. = b_1..` | `-2^-(a_1 + a_2 + 2)` |
/// | `k = l > 0` | `1 / (3 * 4^a_1)` |
/// | `v = w`, `a_1 != b_1`, `a_2.. = b_2..` | `2^-(a_1 + b_1 + 2)` |
/// | otherwise | `0` |
pub fn r_coeff(k: u64, l: u64) -> KernelCoeff {
    let (k, l) = if k >= l { (k, l) } else { (l, k) };
    if k == 0 {
        return KernelCoeff::new(1, true, 0);
    }
    let a = bit_positions(k);
    let b = bit_positions(l);
    let (v, w) = (a.len(), b.len());
    if l == 0 {
        return match v {
            1 => KernelCoeff::new(1, false, a[0] + 2),
            2 => KernelCoeff::new(-1, false, a[0] + a[1] + 2),
            _ => KernelCoeff::ZERO,
        };
    }
    if v == w + 2 && a[2..] == b[..] {
        return KernelCoeff::new(-1, false, a[0] + a[1] + 2);
    }
    if k == l {
        return KernelCoeff::new(1, true, 2 * a[0]);
    }
    if v == w && a[0] != b[0] && a[1..] == b[1..] {
        return KernelCoeff::new(1, false, a[0] + b[0] + 2);
    }
    KernelCoeff::ZERO
}

/// Exact rational type used by the oracle.
pub type Rational128 = Ratio<i128>;

const ORACLE_MAX_GRID: u32 = 20;

fn check_grid(k: u64, l: u64, grid: u32) -> Result<()> {
    let need = mu(k).max(mu(l)) + 2;
    if grid < need {
        return Err(Error::InvalidInput(format!(
            "grid exponent {grid} below required {need}"
        )));
    }
    if grid > ORACLE_MAX_GRID {
        return Err(Error::InvalidInput(format!(
            "grid exponent {grid} above {ORACLE_MAX_GRID}"
        )));
    }
    Ok(())
}

// wal_k on the dyadic cell [i 2^-g, (i+1) 2^-g): digit d of the cell is bit g-d of i
fn cell_sign(k: u64, i: u64, grid: u32) -> i128 {
    let digits = i.reverse_bits() >> (64 - grid);
    wal_digits(k, digits) as i128
}

/// Independent evaluation of `r(k, l)` by exact integration over the
/// `2^grid x 2^grid` dyadic cells, on each of which the Walsh functions are
/// constant and the kernel is a polynomial.
///
/// The kernel is split as `1 - max(x,y) = (1-x)(1-y) + (min(x,y) - xy)`:
/// the first piece has separable coefficients `L(k) L(l)` with
/// `L(k) = int (1-x) wal_k(x) dx`; the second is integrated cell by cell.
/// See `docs/walsh_oracle.md` for the per-cell formulas.
pub fn r_coeff_oracle(k: u64, l: u64, grid: u32) -> Result<Rational128> {
    check_grid(k, l, grid)?;
    let n = 1u64 << grid;
    let g = n as i128;
    let sk: Vec<i128> = (0..n).map(|i| cell_sign(k, i, grid)).collect();
    let sl: Vec<i128> = (0..n).map(|i| cell_sign(l, i, grid)).collect();

    // int_cell (1 - x) dx = (2g - 2i - 1) / (2 g^2)
    let lin = |s: &[i128]| -> i128 {
        s.iter()
            .enumerate()
            .map(|(i, &sg)| sg * (2 * g - 2 * i as i128 - 1))
            .sum()
    };
    let product = Rational128::new(lin(&sk) * lin(&sl), 4 * g.pow(4));

    // min(x,y) - xy over cell (i,j), scaled by 12 g^4
    let mut bridge: i128 = 0;
    for i in 0..n as i128 {
        for j in 0..n as i128 {
            let sign = sk[i as usize] * sl[j as usize];
            if sign == 0 {
                continue;
            }
            let lo = i.min(j);
            let min_part = if i == j {
                4 * (3 * i + 1) * g
            } else {
                6 * (2 * lo + 1) * g
            };
            let xy_part = 3 * (2 * i + 1) * (2 * j + 1);
            bridge += sign * (min_part - xy_part);
        }
    }
    Ok(product + Rational128::new(bridge, 12 * g.pow(4)))
}

/// `int (1 - x^2)/2 wal_k(x) dx` by exact cell integration: the one-point
/// marginal of the kernel, which must equal `r(k, 0)`.
pub fn r_coeff_marginal_oracle(k: u64, grid: u32) -> Result<Rational128> {
    check_grid(k, 0, grid)?;
    let n = 1u64 << grid;
    let g = n as i128;
    // int_cell (1 - x^2)/2 dx = (3 g^2 - (3i^2 + 3i + 1)) / (6 g^3)
    let total: i128 = (0..n)
        .map(|i| {
            let i2 = i as i128;
            cell_sign(k, i, grid) * (3 * g * g - (3 * i2 * i2 + 3 * i2 + 1))
        })
        .sum();
    Ok(Rational128::new(total, 6 * g.pow(3)))
}

/// Converts a [`KernelCoeff`] into the oracle's rational type.
pub fn coeff_to_rational128(c: KernelCoeff) -> Rational128 {
    if c.sign == 0 {
        return Rational128::zero();
    }
    let den = (1i128 << c.exp) * if c.three { 3 } else { 1 };
    Rational128::new(c.sign as i128, den)
}

/// All `(k, l, r(k, l))` with `k, l < 2^bits` and `r(k, l) != 0`.
pub fn nonzero_pairs(bits: u32) -> Vec<(u64, u64, KernelCoeff)> {
    let n = 1u64 << bits;
    let mut out = Vec::new();
    for k in 0..n {
        for l in 0..n {
            let r = r_coeff(k, l);
            if !r.is_zero() {
                out.push((k, l, r));
            }
        }
    }
    out
}
