//! Polynomials over F2.
//!
//! Coefficients are a little-endian bitmask (bit `d` is the coefficient of
//! `x^d`) spread over as many 64-bit words as the degree needs, so powers
//! `p^i` of large degree stay exact.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    // no trailing zero words; empty means the zero polynomial
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_mask(1)
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_mask(0b10)
    }

    pub fn monomial(d: usize) -> Self {
        let mut words = vec![0u64; d / 64 + 1];
        words[d / 64] = 1 << (d % 64);
        Gf2Poly { words }
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut p = Gf2Poly { words: vec![mask] };
        p.normalize();
        p
    }

    /// The coefficient bitmask, if the degree is below 64.
    pub fn mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn coeff(&self, d: usize) -> bool {
        self.words
            .get(d / 64)
            .is_some_and(|w| (w >> (d % 64)) & 1 == 1)
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    /// Carry-less product.
    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || other.is_zero() {
            return Gf2Poly::zero();
        }
        let mut out = vec![0u64; self.words.len() + other.words.len()];
        for (i, &a) in self.words.iter().enumerate() {
            let mut a = a;
            while a != 0 {
                let b = a.trailing_zeros() as usize;
                a &= a - 1;
                // add other << (64 i + b)
                for (j, &w) in other.words.iter().enumerate() {
                    out[i + j] ^= w << b;
                    if b != 0 {
                        out[i + j + 1] ^= w >> (64 - b);
                    }
                }
            }
        }
        let mut p = Gf2Poly { words: out };
        p.normalize();
        p
    }

    pub fn pow(&self, e: u32) -> Gf2Poly {
        let mut acc = Gf2Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let n = self.words.len().max(other.words.len());
        let words = (0..n)
            .map(|i| self.words.get(i).unwrap_or(&0) ^ other.words.get(i).unwrap_or(&0))
            .collect();
        let mut p = Gf2Poly { words };
        p.normalize();
        p
    }

    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0x0".into();
        }
        let mut s = String::from("0x");
        let mut first = true;
        for w in self.words.iter().rev() {
            if first {
                s.push_str(&format!("{w:x}"));
                first = false;
            } else {
                s.push_str(&format!("{w:016x}"));
            }
        }
        s
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(deg) = self.degree() else {
            return f.write_str("0");
        };
        let mut first = true;
        for d in (0..=deg).rev().filter(|&d| self.coeff(d)) {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match d {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl FromStr for Gf2Poly {
    type Err = Error;

    /// Accepts `x^3+x+1` style sums of monomials or a `0x` hex bitmask.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            let mut p = Gf2Poly::zero();
            for (i, ch) in hex.chars().rev().enumerate() {
                let nib = ch
                    .to_digit(16)
                    .ok_or_else(|| Error::Parse(format!("bad hex digit {ch:?} in {s:?}")))?;
                for b in 0..4 {
                    if (nib >> b) & 1 == 1 {
                        p = p.add(&Gf2Poly::monomial(4 * i + b));
                    }
                }
            }
            return Ok(p);
        }
        if s == "0" {
            return Ok(Gf2Poly::zero());
        }
        let mut p = Gf2Poly::zero();
        for term in s.split('+').map(str::trim) {
            let d = match term {
                "1" => 0,
                "x" => 1,
                t => t
                    .strip_prefix("x^")
                    .and_then(|e| e.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad term {t:?} in {s:?}")))?,
            };
            // repeated terms cancel, as they should over F2
            p = p.add(&Gf2Poly::monomial(d));
        }
        Ok(p)
    }
}

// Arithmetic in F2[x]/(p) for deg p <= 32, on plain bitmasks.
fn mulmod(a: u64, b: u64, p: u64, deg: u32) -> u64 {
    let mut prod: u64 = 0;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            prod ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a >> deg) & 1 == 1 {
            a ^= p;
        }
    }
    prod
}

fn powmod_x(e: u64, p: u64, deg: u32) -> u64 {
    let mut acc = 1u64;
    let mut base = if deg == 1 { 0b10 ^ p } else { 0b10 };
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p, deg);
        }
        base = mulmod(base, base, p, deg);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

const MAX_TEST_DEGREE: usize = 32;

fn checked_mask(p: &Gf2Poly) -> Result<(u64, u32)> {
    match p.degree() {
        None | Some(0) => Err(Error::InvalidInput(format!(
            "{p} is zero or constant; primitivity needs degree >= 1"
        ))),
        Some(d) if d > MAX_TEST_DEGREE => Err(Error::InvalidInput(format!(
            "degree {d} above the supported maximum {MAX_TEST_DEGREE}"
        ))),
        Some(d) => Ok((p.mask().expect("degree <= 32"), d as u32)),
    }
}

/// Irreducibility over F2 by Rabin's test.
pub fn is_irreducible(p: &Gf2Poly) -> Result<bool> {
    let (mask, deg) = checked_mask(p)?;
    if deg == 1 {
        return Ok(true);
    }
    if mask & 1 == 0 {
        return Ok(false);
    }
    // x^(2^k) mod p by repeated squaring
    let frob = |k: u32| {
        let mut y = 0b10u64;
        for _ in 0..k {
            y = mulmod(y, y, mask, deg);
        }
        y
    };
    if frob(deg) != 0b10 {
        return Ok(false);
    }
    for q in prime_factors(deg as u64) {
        let h = frob(deg / q as u32) ^ 0b10;
        if gcd_mask(h, mask) != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn gcd_mask(mut a: u64, mut b: u64) -> u64 {
    let deg = |v: u64| 63 - v.leading_zeros() as i32;
    while a != 0 {
        while b != 0 && deg(b) >= deg(a) {
            b ^= a << (deg(b) - deg(a));
        }
        std::mem::swap(&mut a, &mut b);
    }
    b
}

/// Whether `p` is primitive: irreducible, with `x` of multiplicative order
/// `2^deg - 1` modulo `p`.
///
/// Both degree one polynomials `x` and `x + 1` are accepted. For `x + 1`
/// the order condition is vacuous; `x` is admitted because the generating
/// matrix construction uses it as its first polynomial.
pub fn is_primitive(p: &Gf2Poly) -> Result<bool> {
    let (mask, deg) = checked_mask(p)?;
    if deg == 1 {
        return Ok(true);
    }
    if !is_irreducible(p)? {
        return Ok(false);
    }
    let order = (1u64 << deg) - 1;
    if powmod_x(order, mask, deg) != 1 {
        return Ok(false);
    }
    Ok(prime_factors(order)
        .into_iter()
        .all(|q| powmod_x(order / q, mask, deg) != 1))
}

/// All primitive polynomials of exactly degree `deg` with nonzero constant
/// term, ascending by bitmask.
pub fn primitive_polys_of_degree(deg: usize) -> Result<Vec<Gf2Poly>> {
    if deg == 0 || deg > MAX_TEST_DEGREE {
        return Err(Error::InvalidInput(format!(
            "degree {deg} outside 1..={MAX_TEST_DEGREE}"
        )));
    }
    if deg <= MEMO_DEGREE {
        return Ok(memo_table()[deg].get_or_init(|| scan_degree(deg)).clone());
    }
    Ok(scan_degree(deg))
}

const MEMO_DEGREE: usize = 16;

fn memo_table() -> &'static [OnceLock<Vec<Gf2Poly>>; MEMO_DEGREE + 1] {
    static TABLE: OnceLock<[OnceLock<Vec<Gf2Poly>>; MEMO_DEGREE + 1]> = OnceLock::new();
    TABLE.get_or_init(|| std::array::from_fn(|_| OnceLock::new()))
}

fn scan_degree(deg: usize) -> Vec<Gf2Poly> {
    let lo = 1u64 << deg;
    (lo..lo << 1)
        .filter(|m| m & 1 == 1)
        .map(Gf2Poly::from_mask)
        .filter(|p| is_primitive(p).expect("degree checked"))
        .collect()
}

/// The polynomial list `p_1, ..., p_count` used by the generating matrices:
/// `p_1 = x`, followed by primitive polynomials sorted by degree, ties
/// broken by ascending bitmask.
pub fn primitive_polys(count: usize) -> Result<Vec<Gf2Poly>> {
    if count == 0 {
        return Err(Error::InvalidInput("need at least one polynomial".into()));
    }
    let mut out = vec![Gf2Poly::x()];
    let mut deg = 1;
    while out.len() < count {
        let batch = primitive_polys_of_degree(deg)?;
        out.extend(batch.into_iter().take(count - out.len()));
        deg += 1;
    }
    Ok(out)
}

/// Coefficients `a_1, ..., a_len` of the expansion
/// `x^(e - z - 1) / p(x)^i = sum_l a_l x^(-l)` in F2((1/x)), `e = deg p`.
///
/// Computed from the identity `p^i * A = x^(e-z-1)`: comparing the
/// coefficient of `x^(D - l)` (with `D = i e`) gives
/// `a_l = [l = D - e + z + 1] + sum_{r=1}^{D} q_{D-r} a_{l-r}`.
pub fn laurent_expand(p: &Gf2Poly, i: u32, z: usize, len: usize) -> Result<BitVector> {
    let e = p
        .degree()
        .filter(|&e| e >= 1)
        .ok_or_else(|| Error::InvalidInput(format!("{p} must have degree >= 1")))?;
    if i == 0 {
        return Err(Error::InvalidInput("power i must be >= 1".into()));
    }
    if z >= e {
        return Err(Error::InvalidInput(format!(
            "shift z = {z} must be below deg p = {e}"
        )));
    }
    laurent_of_power(&p.pow(i), e - z - 1, len)
}

/// Expansion of `x^num_deg / q(x)` for `num_deg < deg q`.
pub(crate) fn laurent_of_power(q: &Gf2Poly, num_deg: usize, len: usize) -> Result<BitVector> {
    let d = q
        .degree()
        .ok_or_else(|| Error::InvalidInput("division by the zero polynomial".into()))?;
    if num_deg >= d {
        return Err(Error::InvalidInput(format!(
            "numerator degree {num_deg} not below denominator degree {d}"
        )));
    }
    // taps r with q_{D-r} = 1, 1 <= r <= D
    let taps: Vec<usize> = (1..=d).filter(|&r| q.coeff(d - r)).collect();
    let lead = d - num_deg;
    let mut a = BitVector::zeros(len + 1); // index 0 unused, a_0 = 0
    for l in 1..=len {
        let mut bit = l == lead;
        for &r in taps.iter().take_while(|&&r| r < l) {
            bit ^= a.get(l - r);
        }
        a.set(l, bit);
    }
    Ok(a.slice(1, len))
}
