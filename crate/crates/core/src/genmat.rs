//! Generating matrices of Sobol'-type digital sequences and their
//! interlaced higher order versions.
//!
//! Sequences are handled by building matrices with enough rows and columns
//! for the largest net needed and truncating on demand; construction is
//! deterministic, so rebuilding at a larger size extends the same matrices.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::poly::{laurent_expand, primitive_polys, Gf2Poly};

/// A set of `s` generating matrices sharing one shape `depth x width`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingMatrixSet {
    depth: usize,
    width: usize,
    matrices: Vec<BitMatrix>,
    alpha: u32,
    t_bound: u32,
}

/// Metadata written next to exported matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSetMeta {
    pub s: usize,
    pub alpha: u32,
    pub t_bound: u32,
    pub depth: usize,
    pub width: usize,
}

impl GeneratingMatrixSet {
    /// Wraps arbitrary matrices. `t_bound` is taken on trust.
    pub fn from_matrices(matrices: Vec<BitMatrix>, alpha: u32, t_bound: u32) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::InvalidInput("need at least one matrix".into()));
        };
        let (depth, width) = (first.rows(), first.cols());
        if matrices
            .iter()
            .any(|m| m.rows() != depth || m.cols() != width)
        {
            return Err(Error::DimensionMismatch(
                "generating matrices must share one shape".into(),
            ));
        }
        if alpha == 0 {
            return Err(Error::InvalidInput("alpha must be >= 1".into()));
        }
        Ok(GeneratingMatrixSet {
            depth,
            width,
            matrices,
            alpha,
            t_bound,
        })
    }

    pub fn s(&self) -> usize {
        self.matrices.len()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// The formula value of the quality parameter, not a certified one.
    pub fn t_bound(&self) -> u32 {
        self.t_bound
    }

    pub fn matrices(&self) -> &[BitMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, j: usize) -> &BitMatrix {
        &self.matrices[j]
    }

    pub fn meta(&self) -> MatrixSetMeta {
        MatrixSetMeta {
            s: self.s(),
            alpha: self.alpha,
            t_bound: self.t_bound,
            depth: self.depth,
            width: self.width,
        }
    }

    /// Writes `matrix_<j>.txt` (1-based) per coordinate plus `meta.json`.
    pub fn export(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (j, m) in self.matrices.iter().enumerate() {
            std::fs::write(dir.join(format!("matrix_{}.txt", j + 1)), m.to_text())?;
        }
        let meta = serde_json::to_string_pretty(&self.meta())
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        std::fs::write(dir.join("meta.json"), meta + "\n")?;
        Ok(())
    }

    /// Reads back a directory written by [`GeneratingMatrixSet::export`].
    pub fn import(dir: &Path) -> Result<Self> {
        let meta: MatrixSetMeta =
            serde_json::from_str(&std::fs::read_to_string(dir.join("meta.json"))?)
                .map_err(|e| Error::Parse(format!("meta.json: {e}")))?;
        let matrices = (1..=meta.s)
            .map(|j| {
                let text = std::fs::read_to_string(dir.join(format!("matrix_{j}.txt")))?;
                BitMatrix::parse_text(&text)
            })
            .collect::<Result<Vec<_>>>()?;
        let set = Self::from_matrices(matrices, meta.alpha, meta.t_bound)?;
        if set.depth != meta.depth || set.width != meta.width {
            return Err(Error::Parse(
                "meta.json shape disagrees with matrices".into(),
            ));
        }
        Ok(set)
    }
}

/// Sobol' matrices via Tezuka's description: for row `k` write
/// `k - 1 = (i - 1) e_j + z` with `0 <= z < e_j`, then row `k` of `C_j`
/// holds the Laurent coefficients of `x^(e_j - z - 1) / p_j(x)^i`.
pub fn sobol_matrices(s: usize, depth: usize, width: usize) -> Result<GeneratingMatrixSet> {
    if s == 0 || depth == 0 || width == 0 {
        return Err(Error::InvalidInput(
            "s, depth and width must all be >= 1".into(),
        ));
    }
    let polys = primitive_polys(s)?;
    let matrices = polys
        .iter()
        .map(|p| sobol_matrix(p, depth, width))
        .collect::<Result<Vec<_>>>()?;
    let t_bound = polys
        .iter()
        .map(|p| p.degree().expect("nonzero") as u32 - 1)
        .sum();
    GeneratingMatrixSet::from_matrices(matrices, 1, t_bound)
}

fn sobol_matrix(p: &Gf2Poly, depth: usize, width: usize) -> Result<BitMatrix> {
    let e = p.degree().expect("primitive polynomials are nonzero");
    let mut m = BitMatrix::zeros(depth, width);
    for k in 1..=depth {
        let i = ((k - 1) / e + 1) as u32;
        let z = (k - 1) % e;
        let row = laurent_expand(p, i, z, width)?;
        for l in row.iter_ones() {
            m.set(k - 1, l, true);
        }
    }
    // the leading term of row k is x^-k, so the matrix is upper triangular
    for k in 1..=depth {
        assert!(
            m.row(k - 1).iter_ones().all(|l| l + 1 >= k),
            "row {k} of the matrix for {p} has an entry left of the diagonal"
        );
    }
    Ok(m)
}

/// Interlaces `alpha` consecutive matrices into one: row `u alpha + v` of
/// `E_j` is row `u + 1` of `C_{(j-1) alpha + v}`.
///
/// Only order one inputs are accepted; there is no quality bound to carry
/// through for interlacing an already interlaced set.
pub fn interlace_matrices(src: &GeneratingMatrixSet, alpha: u32) -> Result<GeneratingMatrixSet> {
    if alpha == 0 {
        return Err(Error::InvalidInput("alpha must be >= 1".into()));
    }
    if src.alpha != 1 {
        return Err(Error::InvalidInput(format!(
            "source is already of order {}; nested interlacing is not supported",
            src.alpha
        )));
    }
    let a = alpha as usize;
    if !src.s().is_multiple_of(a) {
        return Err(Error::InvalidInput(format!(
            "dimension {} not divisible by alpha = {alpha}",
            src.s()
        )));
    }
    if src.depth < src.width {
        return Err(Error::InvalidInput(format!(
            "source depth {} below width {}",
            src.depth, src.width
        )));
    }
    let d = src.s() / a;
    let depth = a * src.width;
    let matrices = (0..d)
        .map(|j| {
            let mut e = BitMatrix::zeros(depth, src.width);
            for u in 0..src.width {
                for v in 0..a {
                    let c = &src.matrices[j * a + v];
                    for l in c.row(u).iter_ones() {
                        e.set(u * a + v, l, true);
                    }
                }
            }
            e
        })
        .collect();
    let t_bound = alpha * src.t_bound + d as u32 * alpha * (alpha - 1) / 2;
    GeneratingMatrixSet::from_matrices(matrices, alpha, t_bound)
}

/// The upper-left `alpha m x m` blocks (`alpha` of the set).
pub fn truncate(src: &GeneratingMatrixSet, m: usize) -> Result<GeneratingMatrixSet> {
    let rows = src.alpha as usize * m;
    if m == 0 || rows > src.depth || m > src.width {
        return Err(Error::InvalidInput(format!(
            "cannot truncate a {}x{} set to {rows}x{m}",
            src.depth, src.width
        )));
    }
    let matrices = src
        .matrices
        .iter()
        .map(|c| c.submatrix(rows, m))
        .collect::<Result<Vec<_>>>()?;
    GeneratingMatrixSet::from_matrices(matrices, src.alpha, src.t_bound)
}

/// Order `alpha` matrices of dimension `s` and width `width`, built by
/// interlacing an `alpha s` dimensional Sobol' set of size `width x width`.
pub fn interlaced_sobol(s: usize, alpha: u32, width: usize) -> Result<GeneratingMatrixSet> {
    if alpha == 0 {
        return Err(Error::InvalidInput("alpha must be >= 1".into()));
    }
    let base = sobol_matrices(alpha as usize * s, width, width)?;
    if alpha == 1 {
        return Ok(base);
    }
    interlace_matrices(&base, alpha)
}

/// Quality parameter after lowering the order from `alpha` to
/// `alpha_prime`: `ceil(t alpha' / alpha)`.
pub fn t_reduced(t: u32, alpha: u32, alpha_prime: u32) -> Result<u32> {
    if alpha_prime == 0 || alpha_prime > alpha {
        return Err(Error::InvalidInput(format!(
            "alpha' = {alpha_prime} must lie in 1..={alpha}"
        )));
    }
    Ok((t * alpha_prime).div_ceil(alpha))
}
