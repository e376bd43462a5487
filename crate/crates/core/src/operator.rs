//! Hermitian block operators built from the block Fourier coefficients.
//!
//! The finite-horizon operator has block entries
//! `Q_N(p,q)_{kn} = sum_{s=0}^{min(N-p, N-q)} a_{k,s+p} * conj(a_{n,s+q})`,
//! which factors as `Q_N = A_N A_N*` with the block-Hankel array
//! `A_N(p, s) = a_{p+s}` (zero once `p+s` passes the last retained block).
//! Flat indexing is block-major: row `(p, k)` lives at `p*K + (k-1)`.

use num_complex::Complex64;

use crate::blocking::FourierBlockCoefficients;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::parallel::par_map_indexed;

/// Parallelize dense matvec rows only above this dimension.
const MIN_PAR_DIM: usize = 64;

/// Block-Hankel factor: enough state to apply `Q = A A*` without forming it.
#[derive(Debug, Clone)]
struct Factor {
    /// Block columns `a_j`, each of length `freq_count`, for `j < used_blocks`.
    blocks: Vec<Vec<Complex64>>,
    freq_count: usize,
    horizon: usize,
}

#[derive(Debug, Clone)]
enum Repr {
    Explicit(CMatrix),
    Factored(Factor),
}

/// Hermitian positive-semidefinite operator on `horizon * freq_count`
/// complex coordinates, in explicit or factored (A-side) form.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    freq_count: usize,
    horizon: usize,
    repr: Repr,
}

impl BlockOperator {
    /// Wrap an explicit Hermitian matrix of dimension `horizon * freq_count`.
    pub fn from_explicit_matrix(
        matrix: CMatrix,
        horizon: usize,
        freq_count: usize,
    ) -> Result<Self> {
        if matrix.rows() != matrix.cols() || matrix.rows() != horizon * freq_count {
            return Err(Error::DimensionMismatch(format!(
                "expected a square matrix of dimension {}, got {}x{}",
                horizon * freq_count,
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self {
            freq_count,
            horizon,
            repr: Repr::Explicit(matrix),
        })
    }

    /// Number of block rows (`N + 1` for the horizon-`N` operator).
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Retained frequencies per block.
    pub fn freq_count(&self) -> usize {
        self.freq_count
    }

    /// Total dimension `horizon * freq_count`.
    pub fn dim(&self) -> usize {
        self.horizon * self.freq_count
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.repr, Repr::Explicit(_))
    }

    /// The explicit matrix, if this operator holds one.
    pub fn matrix(&self) -> Option<&CMatrix> {
        match &self.repr {
            Repr::Explicit(m) => Some(m),
            Repr::Factored(_) => None,
        }
    }

    /// Materialize the explicit matrix regardless of representation.
    pub fn to_matrix(&self) -> CMatrix {
        match &self.repr {
            Repr::Explicit(m) => m.clone(),
            Repr::Factored(f) => assemble_matrix(&f.blocks, f.freq_count, f.horizon),
        }
    }

    /// Apply the operator. Factored form computes `A (A* v)`; explicit form a
    /// dense product. Reduction order is fixed, so results are reproducible.
    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matvec: operator dimension {}, vector length {}",
                self.dim(),
                v.len()
            )));
        }
        match &self.repr {
            Repr::Explicit(m) => {
                if self.dim() >= MIN_PAR_DIM {
                    Ok(par_map_indexed(self.dim(), |i| {
                        m.row(i)
                            .iter()
                            .zip(v)
                            .fold(Complex64::new(0.0, 0.0), |acc, (a, x)| acc + a * x)
                    }))
                } else {
                    m.matvec(v)
                }
            }
            Repr::Factored(f) => Ok(factored_matvec(f, v)),
        }
    }

    /// Rayleigh numerator `(Qv, v)`; real up to rounding for Hermitian `Q`.
    pub fn quadratic_form(&self, v: &[Complex64]) -> Result<f64> {
        let w = self.matvec(v)?;
        Ok(crate::linalg::inner(&w, v).re)
    }

    /// Frobenius norm (materializes factored operators).
    pub fn frobenius_norm(&self) -> f64 {
        self.to_matrix().frobenius_norm()
    }

    /// Dump the explicit entries as CSV rows `row,col,re,im`.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> Result<()> {
        let m = self.to_matrix();
        writeln!(out, "row,col,re,im")?;
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let z = m[(i, j)];
                writeln!(out, "{},{},{},{}", i, j, fmt_f64(z.re), fmt_f64(z.im))?;
            }
        }
        Ok(())
    }
}

/// 17-significant-digit float formatting shared by every CSV/JSON emitter.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn factored_matvec(f: &Factor, v: &[Complex64]) -> Vec<Complex64> {
    let k = f.freq_count;
    let used = f.blocks.len();
    // w_s = sum_p conj(a_{p+s})^T v_p, for s = 0 .. used-1
    let w: Vec<Complex64> = (0..used)
        .map(|s| {
            let mut acc = Complex64::new(0.0, 0.0);
            for p in 0..f.horizon.min(used - s) {
                let col = &f.blocks[p + s];
                let vp = &v[p * k..(p + 1) * k];
                for (a, x) in col.iter().zip(vp) {
                    acc += a.conj() * x;
                }
            }
            acc
        })
        .collect();
    // u_p = sum_s a_{p+s} w_s
    let mut out = vec![Complex64::new(0.0, 0.0); f.horizon * k];
    for p in 0..f.horizon {
        let dst = &mut out[p * k..(p + 1) * k];
        for (s, ws) in w.iter().enumerate().take(used.saturating_sub(p)) {
            let col = &f.blocks[p + s];
            for (d, a) in dst.iter_mut().zip(col) {
                *d += a * ws;
            }
        }
    }
    out
}

/// Collect the block columns `a_j` for `j < used_blocks`.
fn collect_blocks(c: &FourierBlockCoefficients, used_blocks: usize) -> Vec<Vec<Complex64>> {
    (0..used_blocks).map(|j| c.block_vector(j)).collect()
}

fn assemble_matrix(blocks: &[Vec<Complex64>], freq_count: usize, horizon: usize) -> CMatrix {
    let k = freq_count;
    let dim = horizon * k;
    let used = blocks.len();
    debug_assert!(used >= horizon);
    // rows are independent; entry (p,k0),(q,n0) = sum_s a_{k0,p+s} conj(a_{n0,q+s})
    let rows: Vec<Vec<Complex64>> = par_map_indexed(dim, |row| {
        let p = row / k;
        let k0 = row % k;
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for q in 0..horizon {
            let s_max = used - 1 - p.max(q);
            for n0 in 0..k {
                let mut acc = Complex64::new(0.0, 0.0);
                for s in 0..=s_max {
                    acc += blocks[s + p][k0] * blocks[s + q][n0].conj();
                }
                out[q * k + n0] = acc;
            }
        }
        out
    });
    CMatrix::from_rows(&rows)
}

/// Assemble the horizon-`N` operator explicitly.
///
/// Requires coefficients through block `N` (`N + 1 <= J`).
pub fn assemble_qn(c: &FourierBlockCoefficients, n: usize) -> Result<BlockOperator> {
    check_horizon(c, n)?;
    let blocks = collect_blocks(c, n + 1);
    let m = assemble_matrix(&blocks, c.freq_count(), n + 1);
    Ok(BlockOperator {
        freq_count: c.freq_count(),
        horizon: n + 1,
        repr: Repr::Explicit(m),
    })
}

/// Assemble the horizon-`N` operator in factored (matrix-free) form.
pub fn assemble_qn_factored(c: &FourierBlockCoefficients, n: usize) -> Result<BlockOperator> {
    check_horizon(c, n)?;
    Ok(BlockOperator {
        freq_count: c.freq_count(),
        horizon: n + 1,
        repr: Repr::Factored(Factor {
            blocks: collect_blocks(c, n + 1),
            freq_count: c.freq_count(),
            horizon: n + 1,
        }),
    })
}

/// Truncation of the infinite-horizon operator: all retained coefficient
/// blocks feed the inner sum, and the matrix covers blocks `0..=p_max`.
pub fn assemble_q_truncated(c: &FourierBlockCoefficients, p_max: usize) -> Result<BlockOperator> {
    check_horizon(c, p_max)?;
    let blocks = collect_blocks(c, c.block_count());
    let m = assemble_matrix(&blocks, c.freq_count(), p_max + 1);
    Ok(BlockOperator {
        freq_count: c.freq_count(),
        horizon: p_max + 1,
        repr: Repr::Explicit(m),
    })
}

/// Factored form of [`assemble_q_truncated`].
pub fn assemble_q_truncated_factored(
    c: &FourierBlockCoefficients,
    p_max: usize,
) -> Result<BlockOperator> {
    check_horizon(c, p_max)?;
    Ok(BlockOperator {
        freq_count: c.freq_count(),
        horizon: p_max + 1,
        repr: Repr::Factored(Factor {
            blocks: collect_blocks(c, c.block_count()),
            freq_count: c.freq_count(),
            horizon: p_max + 1,
        }),
    })
}

fn check_horizon(c: &FourierBlockCoefficients, n: usize) -> Result<()> {
    if n + 1 > c.block_count() {
        return Err(Error::InvalidArgument(format!(
            "horizon N = {n} needs {} coefficient blocks, only {} retained",
            n + 1,
            c.block_count()
        )));
    }
    Ok(())
}

/// The mirrored operator `D_N` with entries
/// `D_N(p,q)_{kn} = sum_{s=0}^{min(p,q)} a_{k,N-p+s} * conj(a_{n,N-q+s})`.
///
/// Satisfies `D_N(N-p, N-q) = Q_N(p, q)` entrywise, so its spectrum equals
/// that of `Q_N`.
#[derive(Debug, Clone)]
pub struct MirrorMatrix {
    freq_count: usize,
    horizon: usize,
    matrix: CMatrix,
}

impl MirrorMatrix {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn freq_count(&self) -> usize {
        self.freq_count
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Entry of block `(p, q)` at frequency pair `(k0, n0)` (0-based).
    pub fn block_entry(&self, p: usize, q: usize, k0: usize, n0: usize) -> Complex64 {
        self.matrix[(p * self.freq_count + k0, q * self.freq_count + n0)]
    }
}

/// Assemble `D_N` from its defining sum (not via the mirror identity).
pub fn assemble_dn(c: &FourierBlockCoefficients, n: usize) -> Result<MirrorMatrix> {
    check_horizon(c, n)?;
    let k = c.freq_count();
    let dim = (n + 1) * k;
    let blocks = collect_blocks(c, n + 1);
    let rows: Vec<Vec<Complex64>> = par_map_indexed(dim, |row| {
        let p = row / k;
        let k0 = row % k;
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for q in 0..=n {
            for n0 in 0..k {
                let mut acc = Complex64::new(0.0, 0.0);
                for s in 0..=p.min(q) {
                    acc += blocks[n - p + s][k0] * blocks[n - q + s][n0].conj();
                }
                out[q * k + n0] = acc;
            }
        }
        out
    });
    Ok(MirrorMatrix {
        freq_count: k,
        horizon: n + 1,
        matrix: CMatrix::from_rows(&rows),
    })
}
