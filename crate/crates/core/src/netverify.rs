//! Structural certification of digital nets: the order-`alpha`
//! independence condition, box equidistribution, the dual net and the
//! character property.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::genmat::GeneratingMatrixSet;
use crate::gf2::{stack_transposed, Basis64, BitVector};
use crate::pointgen::DyadicPoint;
use crate::walsh::{self, WalshIndex};

/// Default cap on search nodes for [`verify_order_alpha`].
pub const VERIFY_BUDGET: u64 = 50_000_000;

/// Default cap on the dual dimension for [`dual_enumerate`].
pub const DUAL_BUDGET_EXP: u32 = 24;

/// A dependent selection of generating-matrix rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// `(coordinate, 1-based row index)` pairs in selection order.
    pub rows: Vec<(usize, usize)>,
    pub weight: usize,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "weight {}:", self.weight)?;
        for (j, i) in &self.rows {
            write!(f, " c[{}][{}]", j + 1, i)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Violated(Witness),
    /// The search budget ran out first.
    Unverified {
        nodes: u64,
    },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }
}

struct Search {
    rows: Vec<Vec<u64>>,
    alpha: usize,
    limit: usize,
    basis: Basis64,
    chosen: Vec<(usize, usize)>,
    nodes: u64,
    budget: u64,
}

enum Stop {
    // failing row and the selection weight
    Dependent((usize, usize), usize),
    Budget,
}

impl Search {
    fn push(&mut self, j: usize, i: usize) -> Option<usize> {
        let p = self.basis.insert_pivot(self.rows[j][i - 1])?;
        self.chosen.push((j, i));
        Some(p)
    }

    fn pop(&mut self, pivot: usize) {
        self.basis.remove(pivot);
        self.chosen.pop();
    }

    fn tick(&mut self) -> std::result::Result<(), Stop> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(Stop::Budget)
        } else {
            Ok(())
        }
    }

    // Coordinate `j`, `count` rows already picked for it, next index
    // strictly below `below`, `weight` spent so far.
    fn coord(
        &mut self,
        j: usize,
        count: usize,
        below: usize,
        weight: usize,
    ) -> std::result::Result<(), Stop> {
        self.tick()?;
        // stop choosing in this coordinate
        if j + 1 < self.rows.len() {
            let depth = self.rows[j + 1].len() + 1;
            self.coord(j + 1, 0, depth, weight)?;
        }
        if count == self.alpha {
            return Ok(());
        }
        let max_i = (below - 1).min(self.limit - weight);
        for i in (1..=max_i).rev() {
            let pivot = self.push(j, i).ok_or(Stop::Dependent((j, i), weight + i))?;
            if count + 1 == self.alpha {
                // rows below the alpha-th choice cost nothing
                let mut tail = Vec::new();
                for r in (1..i).rev() {
                    match self.push(j, r) {
                        Some(p) => tail.push(p),
                        None => return Err(Stop::Dependent((j, r), weight + i)),
                    }
                }
                self.coord(j, count + 1, i, weight + i)?;
                for p in tail.into_iter().rev() {
                    self.pop(p);
                }
            } else {
                self.coord(j, count + 1, i, weight + i)?;
            }
            self.pop(pivot);
        }
        Ok(())
    }
}

/// Checks the order-`alpha` independence condition with quality `t` for
/// the `depth x width` matrices of `g` (`m = width <= 64`).
///
/// Every admissible selection is a decreasing run of row indices per
/// coordinate whose weight (sum over coordinates of the `alpha` largest
/// indices) is at most `alpha m - t`. Only maximal selections need to be
/// tested: once `alpha` rows of a coordinate are chosen, every lower row
/// is free and is added at once.
pub fn verify_order_alpha(
    g: &GeneratingMatrixSet,
    alpha: u32,
    t: u32,
    budget: u64,
) -> Result<Verdict> {
    let m = g.width();
    if m > 64 {
        return Err(Error::InvalidInput(format!("width {m} exceeds 64")));
    }
    if alpha == 0 {
        return Err(Error::InvalidInput("alpha must be >= 1".into()));
    }
    let am = alpha as usize * m;
    if g.depth() < am {
        return Err(Error::InvalidInput(format!(
            "depth {} is below alpha m = {am}",
            g.depth()
        )));
    }
    if t as usize > am {
        return Err(Error::InvalidInput(format!(
            "t = {t} exceeds alpha m = {am}"
        )));
    }
    let rows: Vec<Vec<u64>> = g
        .matrices()
        .iter()
        .map(|c| {
            (0..c.rows())
                .map(|r| c.row_words(r).first().copied().unwrap_or(0))
                .collect()
        })
        .collect();
    let mut search = Search {
        rows,
        alpha: alpha as usize,
        limit: am - t as usize,
        basis: Basis64::new(),
        chosen: Vec::new(),
        nodes: 0,
        budget,
    };
    let depth = g.depth() + 1;
    match search.coord(0, 0, depth, 0) {
        Ok(()) => Ok(Verdict::Certified),
        Err(Stop::Budget) => Ok(Verdict::Unverified {
            nodes: search.nodes,
        }),
        Err(Stop::Dependent(row, weight)) => {
            let mut rows = search.chosen;
            rows.push(row);
            Ok(Verdict::Violated(Witness { rows, weight }))
        }
    }
}

/// Result of [`smallest_t`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSearch {
    /// Bound from the construction.
    pub formula: u32,
    /// Smallest certified `t`, if any candidate certified within budget.
    pub certified: Option<u32>,
    /// Set when a smaller candidate could not be decided within budget.
    pub undecided_below: bool,
}

/// Smallest `t` for which `g` certifies, starting at `formula` (capped at
/// `alpha m`). Walks down while candidates certify, or up if the
/// formula bound itself fails.
pub fn smallest_t(
    g: &GeneratingMatrixSet,
    alpha: u32,
    formula: u32,
    budget: u64,
) -> Result<TSearch> {
    let am = alpha * g.width() as u32;
    let start = formula.min(am);
    let mut out = TSearch {
        formula,
        certified: None,
        undecided_below: false,
    };
    match verify_order_alpha(g, alpha, start, budget)? {
        Verdict::Certified => {
            out.certified = Some(start);
            let mut t = start;
            while t > 0 {
                match verify_order_alpha(g, alpha, t - 1, budget)? {
                    Verdict::Certified => t -= 1,
                    Verdict::Violated(_) => break,
                    Verdict::Unverified { .. } => {
                        out.undecided_below = true;
                        break;
                    }
                }
            }
            out.certified = Some(t);
        }
        Verdict::Violated(_) | Verdict::Unverified { .. } => {
            for t in start + 1..=am {
                if verify_order_alpha(g, alpha, t, budget)?.is_certified() {
                    out.certified = Some(t);
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Point counts of every elementary box with side lengths `2^-d_j`,
/// indexed by the concatenated leading digits (coordinate 1 most
/// significant).
pub fn box_counts(points: &[DyadicPoint], d: &[u32]) -> Result<Vec<u64>> {
    let total: u32 = d.iter().sum();
    if total > 30 || d.iter().any(|&x| x > 64) {
        return Err(Error::InvalidInput(format!(
            "box exponent total {total} too large"
        )));
    }
    let mut hist = vec![0u64; 1 << total];
    for p in points {
        if p.dim() != d.len() {
            return Err(Error::DimensionMismatch(format!(
                "point dimension {} vs {} exponents",
                p.dim(),
                d.len()
            )));
        }
        let mut idx = 0usize;
        for (j, &dj) in d.iter().enumerate() {
            let digits = p.leading_digits(j, dj);
            // box index a_j has digit 1 as its most significant bit
            let a = if dj == 0 {
                0
            } else {
                digits.reverse_bits() >> (64 - dj)
            };
            idx = (idx << dj) | a as usize;
        }
        hist[idx] += 1;
    }
    Ok(hist)
}

/// All `d` in `N_0^s` with `d_1 + ... + d_s = total`.
pub fn compositions(total: u32, s: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, s: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if s == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(left - v, s - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if s > 0 {
        rec(total, s, &mut Vec::new(), &mut out);
    }
    out
}

/// First elementary box (exponents, box index, count) of total exponent
/// `m - t` whose count differs from `2^t`, if any.
pub fn unfair_elementary_box(
    points: &[DyadicPoint],
    m: u32,
    t: u32,
) -> Result<Option<(Vec<u32>, usize, u64)>> {
    let s = points.first().map_or(0, |p| p.dim());
    let fair = 1u64 << t;
    for d in compositions(m - t, s) {
        let counts = box_counts(points, &d)?;
        if let Some((i, &c)) = counts.iter().enumerate().find(|(_, &c)| c != fair) {
            return Ok(Some((d, i, c)));
        }
    }
    Ok(None)
}

/// One-dimensional union of intervals fixed by prescribing digits:
/// `x` lies in the set iff digit `a_i` of `x` equals `kappa_i` for every
/// positive `a_i`. Non-positive positions carry no restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JAlphaBox {
    a: Vec<i64>,
    kappa: Vec<bool>,
}

impl JAlphaBox {
    pub fn full() -> Self {
        JAlphaBox {
            a: Vec::new(),
            kappa: Vec::new(),
        }
    }

    pub fn new(a: Vec<i64>, kappa: Vec<bool>) -> Result<Self> {
        if a.len() != kappa.len() {
            return Err(Error::InvalidInput("a and kappa lengths differ".into()));
        }
        if a.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidInput(format!(
                "positions {a:?} must be strictly decreasing"
            )));
        }
        let nu = a.len() as i64;
        if a.last().is_some_and(|&last| last < 1 - nu) {
            return Err(Error::InvalidInput(format!(
                "positions {a:?} fall below {}",
                1 - nu
            )));
        }
        Ok(JAlphaBox { a, kappa })
    }

    /// Parses `alpha`-style argument lists `a_1,...,a_nu,k_1,...,k_nu`.
    pub fn from_args(args: &[i64]) -> Result<Self> {
        if !args.len().is_multiple_of(2) {
            return Err(Error::InvalidInput("odd argument count".into()));
        }
        let nu = args.len() / 2;
        let kappa = args[nu..]
            .iter()
            .map(|&k| match k {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(Error::InvalidInput(format!(
                    "digit value {k} not in {{0,1}}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        JAlphaBox::new(args[..nu].to_vec(), kappa)
    }

    pub fn nu(&self) -> usize {
        self.a.len()
    }

    fn constraints(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.a
            .iter()
            .zip(&self.kappa)
            .filter(|(&a, _)| a >= 1)
            .map(|(&a, &k)| (a as u32, k))
    }

    pub fn contains(&self, x: &DyadicPoint, j: usize) -> bool {
        self.constraints().all(|(a, k)| x.digit(j, a) == k)
    }

    /// `-log2` of the volume: the number of restricted digits.
    pub fn volume_exponent(&self) -> u32 {
        self.constraints().count() as u32
    }

    /// Sum of the `alpha` largest positive positions.
    pub fn weight(&self, alpha: u32) -> u64 {
        self.a
            .iter()
            .take(alpha as usize)
            .map(|&a| a.max(0) as u64)
            .sum()
    }
}

/// Points in a product of [`JAlphaBox`]es.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JCount {
    pub count: u64,
    /// `-log2` of the volume.
    pub volume_exponent: u32,
}

impl JCount {
    pub fn volume(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << self.volume_exponent)
    }

    /// `count = 2^m vol`.
    pub fn is_fair(&self, m: u32) -> bool {
        m >= self.volume_exponent && self.count == 1u64 << (m - self.volume_exponent)
    }
}

pub fn j_alpha_count(points: &[DyadicPoint], boxes: &[JAlphaBox]) -> Result<JCount> {
    let mut count = 0;
    for p in points {
        if p.dim() != boxes.len() {
            return Err(Error::DimensionMismatch(format!(
                "point dimension {} vs {} boxes",
                p.dim(),
                boxes.len()
            )));
        }
        if boxes.iter().enumerate().all(|(j, b)| b.contains(p, j)) {
            count += 1;
        }
    }
    Ok(JCount {
        count,
        volume_exponent: boxes.iter().map(JAlphaBox::volume_exponent).sum(),
    })
}

/// Every product box with strictly decreasing positive positions,
/// `nu_j <= alpha + 1` per coordinate, weight at most `alpha m - t`, and
/// all digit prescriptions.
pub fn admissible_boxes(s: usize, alpha: u32, m: u32, t: u32) -> Vec<Vec<JAlphaBox>> {
    let limit = (alpha * m).saturating_sub(t) as u64;
    let max_nu = alpha as usize + 1;

    // position runs for one coordinate with their weights
    fn runs(
        cur: &mut Vec<i64>,
        below: i64,
        max_nu: usize,
        alpha: usize,
        limit: u64,
        out: &mut Vec<(Vec<i64>, u64)>,
    ) {
        let w: u64 = cur.iter().take(alpha).map(|&a| a as u64).sum();
        out.push((cur.clone(), w));
        if cur.len() == max_nu {
            return;
        }
        for a in (1..below).rev() {
            let add = if cur.len() < alpha { a as u64 } else { 0 };
            if w + add > limit {
                continue;
            }
            cur.push(a);
            runs(cur, a, max_nu, alpha, limit, out);
            cur.pop();
        }
    }
    let mut per = Vec::new();
    runs(
        &mut Vec::new(),
        limit as i64 + 1,
        max_nu,
        alpha as usize,
        limit,
        &mut per,
    );

    let mut out = Vec::new();
    let mut cur: Vec<(usize, u64)> = Vec::new();
    fn product(
        per: &[(Vec<i64>, u64)],
        s: usize,
        limit: u64,
        cur: &mut Vec<(usize, u64)>,
        spent: u64,
        out: &mut Vec<Vec<JAlphaBox>>,
    ) {
        if cur.len() == s {
            let nus: Vec<usize> = cur.iter().map(|&(i, _)| per[i].0.len()).collect();
            let bits: usize = nus.iter().sum();
            for mask in 0u64..1 << bits {
                let mut shift = 0;
                let boxes = cur
                    .iter()
                    .zip(&nus)
                    .map(|(&(i, _), &nu)| {
                        let kappa = (0..nu).map(|r| (mask >> (shift + r)) & 1 == 1).collect();
                        shift += nu;
                        JAlphaBox::new(per[i].0.clone(), kappa).expect("valid run")
                    })
                    .collect();
                out.push(boxes);
            }
            return;
        }
        for (i, (_, w)) in per.iter().enumerate() {
            if spent + w <= limit {
                cur.push((i, *w));
                product(per, s, limit, cur, spent + w, out);
                cur.pop();
            }
        }
    }
    product(&per, s, limit, &mut cur, 0, &mut out);
    out
}

/// Kernel of the stacked transposed generating matrices, viewed as the
/// Walsh frequencies on which the net's character sums do not cancel.
#[derive(Clone, Debug)]
pub struct DualNet {
    s: usize,
    m: usize,
    digits: usize,
    rank: usize,
    basis: Vec<BitVector>,
    // C_j^T columns as words, for membership tests
    rows: Vec<Vec<u64>>,
}

/// Dual net of `g` restricted to frequencies with `digits` binary digits
/// per coordinate (default: the matrix depth). Digits beyond the depth
/// are unconstrained.
pub fn dual_enumerate(
    g: &GeneratingMatrixSet,
    digits: Option<usize>,
    budget_exp: u32,
) -> Result<DualNet> {
    let digits = digits.unwrap_or(g.depth());
    if digits > 64 || g.width() > 64 {
        return Err(Error::InvalidInput(format!(
            "digit range {digits} and width {} must be <= 64",
            g.width()
        )));
    }
    let mats: Vec<_> = g
        .matrices()
        .iter()
        .map(|c| {
            if c.rows() >= digits {
                c.submatrix(digits, c.cols())
            } else {
                Ok(c.pad_rows(digits))
            }
        })
        .collect::<Result<_>>()?;
    let stacked = stack_transposed(&mats)?;
    let rank = stacked.rank();
    let dim = g.s() * digits - rank;
    if dim as u32 > budget_exp {
        return Err(Error::BudgetExceeded {
            what: "dual enumeration",
            estimate: 1u128 << dim.min(127),
            budget: 1u128 << budget_exp,
        });
    }
    let basis = stacked.kernel_basis();
    let rows = mats
        .iter()
        .map(|c| (0..c.rows()).map(|r| c.row_words(r)[0]).collect())
        .collect();
    Ok(DualNet {
        s: g.s(),
        m: g.width(),
        digits,
        rank,
        basis,
        rows,
    })
}

impl DualNet {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    /// `log2` of the number of elements, zero included.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    fn to_index(&self, v: &BitVector) -> WalshIndex {
        WalshIndex(
            (0..self.s)
                .map(|j| {
                    v.slice(j * self.digits, self.digits)
                        .to_u64()
                        .expect("<= 64 digits")
                })
                .collect(),
        )
    }

    /// All elements, zero first, in Gray-code order.
    pub fn iter(&self) -> impl Iterator<Item = WalshIndex> + '_ {
        let total = 1u64 << self.basis.len();
        let mut cur = BitVector::zeros(self.s * self.digits);
        (0..total).map(move |g| {
            if g > 0 {
                cur.xor_assign(&self.basis[g.trailing_zeros() as usize]);
            }
            self.to_index(&cur)
        })
    }

    pub fn iter_nonzero(&self) -> impl Iterator<Item = WalshIndex> + '_ {
        self.iter().skip(1)
    }

    /// `sum_j C_j^T k_j = 0` for `k` with components below `2^digits`.
    pub fn contains(&self, k: &WalshIndex) -> bool {
        if k.dim() != self.s {
            return false;
        }
        let mut acc = 0u64;
        for (j, &kj) in k.0.iter().enumerate() {
            if self.digits < 64 && kj >> self.digits != 0 {
                return false;
            }
            let mut bits = kj;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                acc ^= self.rows[j][i];
                bits &= bits - 1;
            }
        }
        acc == 0
    }
}

/// Minimum order-`order` weight over the nonzero dual elements; `None` if
/// there are none.
pub fn dual_min_weight(dual: &DualNet, order: u32) -> Option<u32> {
    dual.iter_nonzero().map(|k| k.mu_order(order)).min()
}

/// `sum_n wal_k(x_n)`.
pub fn character_sum(points: &[DyadicPoint], k: &WalshIndex) -> Result<i64> {
    points
        .iter()
        .map(|p| walsh::wal_vec(k, p).map(i64::from))
        .sum()
}
