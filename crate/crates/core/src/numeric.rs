//! Dense complex linear algebra shared by every other module.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;

/// Absolute residual bound and eigenvalue clustering gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
    pub gap_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { atol: 1e-9, gap_tol: 1e-6 }
    }
}

impl Tolerance {
    pub fn new(atol: f64, gap_tol: f64) -> Result<Self> {
        if !(atol > 0.0) || !(gap_tol > 0.0) {
            return Err(Error::InvalidTolerance(format!(
                "atol ({atol}) and gap_tol ({gap_tol}) must be positive"
            )));
        }
        if gap_tol < atol {
            return Err(Error::InvalidTolerance(format!(
                "gap_tol ({gap_tol}) must not be smaller than atol ({atol})"
            )));
        }
        Ok(Tolerance { atol, gap_tol })
    }

    /// Bound used for outputs of constructions (ten times `atol`).
    pub fn loose(&self) -> f64 {
        10.0 * self.atol
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(rows, cols)
}

/// Kronecker product; entry `(ia*rb + ib, ja*cb + jb)` is `A[ia,ja] * B[ib,jb]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Block-diagonal matrix with the blocks in the given order.
pub fn dsum(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), b.shape()).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

/// Frobenius norm.
pub fn frob(a: &ComplexMatrix) -> f64 {
    a.norm()
}

/// Frobenius norm of `a - b`; infinite when the shapes differ.
pub fn residual(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    (a - b).norm()
}

pub fn is_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn require_square(a: &ComplexMatrix, what: &str) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{what} must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

/// Eigen-decomposition of the hermitian part of `h`, eigenvalues ascending.
pub fn hermitian_eigen(h: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let sym = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Residuals `(‖P − P†‖, ‖P² − P‖)`.
pub fn projection_residuals(p: &ComplexMatrix) -> (f64, f64) {
    if p.nrows() != p.ncols() {
        return (f64::INFINITY, f64::INFINITY);
    }
    (residual(p, &p.adjoint()), residual(&(p * p), p))
}

/// Isometry `V` with `V V† = P`; columns are eigenvectors of `P` with eigenvalue above 1/2.
pub fn range_isometry(p: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    require_square(p, "projection")?;
    let (herm, idem) = projection_residuals(p);
    if !(herm <= tol.atol && idem <= tol.atol) {
        return Err(Error::NotAProjection { herm, idem });
    }
    let (values, vectors) = hermitian_eigen(p);
    let keep: Vec<usize> = (0..values.len()).filter(|&k| values[k] > 0.5).collect();
    let mut v = zeros(p.nrows(), keep.len());
    for (col, &k) in keep.iter().enumerate() {
        v.set_column(col, &vectors.column(k));
    }
    Ok(v)
}

/// Eigenvalue clusters (gap at least `gap_tol`) with their spectral projections.
pub fn spectral_projections(h: &ComplexMatrix, tol: Tolerance) -> Result<Vec<(f64, ComplexMatrix)>> {
    require_square(h, "hermitian matrix")?;
    let herm = residual(h, &h.adjoint());
    if !(herm <= tol.atol) {
        return Err(Error::NotHermitian(herm));
    }
    let (values, vectors) = hermitian_eigen(h);
    let mut out = Vec::new();
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[end - 1] < tol.gap_tol {
            end += 1;
        }
        let block = vectors.columns(start, end - start);
        let mean = values[start..end].iter().sum::<f64>() / (end - start) as f64;
        out.push((mean, block * block.adjoint()));
        start = end;
    }
    Ok(out)
}

/// Orthonormal basis (columns) of the numerical null space of `m`, computed from
/// the eigenvectors of `m† m` whose eigenvalues are below `gap_tol · max(1, λ_max)`.
pub fn null_space(m: &ComplexMatrix, tol: Tolerance) -> ComplexMatrix {
    let gram = m.adjoint() * m;
    let (values, vectors) = hermitian_eigen(&gram);
    let scale = values.last().copied().unwrap_or(0.0).max(1.0);
    let keep: Vec<usize> = (0..values.len()).filter(|&k| values[k] <= tol.gap_tol * scale).collect();
    let mut out = zeros(m.ncols(), keep.len());
    for (col, &k) in keep.iter().enumerate() {
        out.set_column(col, &vectors.column(k));
    }
    out
}

/// Hilbert–Schmidt orthonormal basis of `{T : T g = g T for all generators g}`.
pub fn commutant_basis(generators: &[ComplexMatrix], size: usize, tol: Tolerance) -> Result<Vec<ComplexMatrix>> {
    for g in generators {
        if g.nrows() != size || g.ncols() != size {
            return Err(Error::DimensionMismatch(format!(
                "generator of shape {}x{} in a commutant of size {size}",
                g.nrows(),
                g.ncols()
            )));
        }
    }
    let n2 = size * size;
    // vec(T) is column-major: T[r, c] sits at c*size + r.
    let mut stacked = zeros(generators.len() * n2, n2);
    for (k, g) in generators.iter().enumerate() {
        for c in 0..size {
            for r in 0..size {
                let unknown = c * size + r;
                // (T g)[r, j] = Σ_c T[r, c] g[c, j]
                for j in 0..size {
                    stacked[(k * n2 + j * size + r, unknown)] += g[(c, j)];
                }
                // (g T)[i, c] = Σ_r g[i, r] T[r, c]
                for i in 0..size {
                    stacked[(k * n2 + c * size + i, unknown)] -= g[(i, r)];
                }
            }
        }
    }
    let kernel = if generators.is_empty() { identity(n2) } else { null_space(&stacked, tol) };
    Ok(kernel
        .column_iter()
        .map(|v| ComplexMatrix::from_column_slice(size, size, v.as_slice()))
        .collect())
}
