//! Splitting projections on 1-cells and splitting Q-systems into dual pairs.
//!
//! A Q-system `Q: b → b` is a finite-dimensional C*-algebra `A ≅ ⊕_t M_{N_t}`
//! under `m`. Splitting it produces a new 0-cell with one index per simple
//! block, a 1-cell `X` whose `(j, t)` sector is the row-`j` part of a minimal
//! left ideal of block `t`, and a unitary algebra isomorphism `γ: X ⊠ X̄ → Q`.
//!
//! The dual used on `X` is weighted: `ev(x̄ ⊗ x) = β_x`. For Q-systems of the
//! form `Y ⊠ Ȳ` with the balanced dual every weight in block `t` is
//! `N_t^{-1/2}`; other Q-systems get the weights that make `γ` unitary.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::mathilb::{compatible_pairs, hcomp1, weighted_dual, BlockTwoCell, GradedOneCell};
use crate::numeric::{self, c, hermitian_eigen, range_isometry, ComplexMatrix, Tolerance, C64};
use crate::qsystem::{check_dual_pair, check_qsystem, check_qsystem_iso, qsystem_from_dual, DualPair, QSystemData};
use crate::random;
use crate::report::Report;

const ATTEMPTS: usize = 5;

/// Output of [`split_qsystem`].
#[derive(Debug, Clone, PartialEq)]
pub struct SplitResult {
    /// Number of indices of the new 0-cell (simple blocks of `Q`).
    pub k: usize,
    /// `X: k → b` with its dual.
    pub pair: DualPair,
    /// `γ: X ⊠ X̄ → Q`.
    pub gamma: BlockTwoCell,
}

impl SplitResult {
    /// Column dimensions of `X` per block, sorted ascending.
    pub fn block_dims(&self) -> Vec<usize> {
        let mut dims = vec![0usize; self.k];
        for &(_, t) in self.pair.x.grading() {
            dims[t] += 1;
        }
        dims.sort_unstable();
        dims
    }
}

/// Contracts of a splitting: dual-pair identities and `γ` a unitary algebra isomorphism.
pub fn check_split(q: &QSystemData, s: &SplitResult, tol: Tolerance) -> Result<Report> {
    let mut r = Report::new();
    r.absorb("dual", check_dual_pair(&s.pair, tol)?);
    r.absorb("γ", check_qsystem_iso(&s.gamma, &qsystem_from_dual(&s.pair)?, q, tol)?);
    Ok(r)
}

/// Isometry `u: Y → X` with `u u† = p`, computed sector by sector.
pub fn split_projection(x: &GradedOneCell, p: &BlockTwoCell, tol: Tolerance) -> Result<(GradedOneCell, BlockTwoCell)> {
    if p.source() != x || p.target() != x {
        return Err(Error::CellMismatch("projection must be an endomorphism of the given 1-cell".into()));
    }
    let (herm, idem) = p.projection_residuals();
    if !(herm <= tol.atol && idem <= tol.atol) {
        return Err(Error::NotAProjection { herm, idem });
    }
    let mut grading = Vec::new();
    let mut columns: Vec<(Vec<usize>, ComplexMatrix)> = Vec::new();
    for ((row, col), idx) in x.sectors() {
        let v = range_isometry(&p.sector_block(&idx), tol)?;
        grading.extend(core::iter::repeat((row, col)).take(v.ncols()));
        columns.push((idx, v));
    }
    let y = GradedOneCell::new(x.src(), x.tgt(), grading)?;
    let mut u = numeric::zeros(x.dim(), y.dim());
    let mut offset = 0;
    for (idx, v) in columns {
        for b in 0..v.ncols() {
            for (a, &pa) in idx.iter().enumerate() {
                u[(pa, offset + b)] = v[(a, b)];
            }
        }
        offset += v.ncols();
    }
    Ok((y.clone(), BlockTwoCell::new(y, x.clone(), u)?))
}

/// Left and right multiplication operators `L_p = m(e_p ⊠ −)`, `R_p = m(− ⊠ e_p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularRep {
    pub left_ops: Vec<ComplexMatrix>,
    pub right_ops: Vec<ComplexMatrix>,
}

fn require_valid(q: &QSystemData, tol: Tolerance) -> Result<()> {
    let report = check_qsystem(q, tol)?;
    if let Some(bad) = report.failures().next() {
        return Err(Error::InvalidQSystem(format!("{} has residual {:.3e}", bad.name, bad.residual)));
    }
    Ok(())
}

/// Index of the pair `(p, q)` in `Q ⊠ Q`, when compatible.
fn pair_index(q: &GradedOneCell) -> Vec<Vec<Option<usize>>> {
    let mut idx = vec![vec![None; q.dim()]; q.dim()];
    for (k, (a, b)) in compatible_pairs(q, q).into_iter().enumerate() {
        idx[a][b] = Some(k);
    }
    idx
}

pub fn regular_reps(q: &QSystemData, tol: Tolerance) -> Result<RegularRep> {
    require_valid(q, tol)?;
    Ok(regular_reps_unchecked(q))
}

fn regular_reps_unchecked(q: &QSystemData) -> RegularRep {
    let n = q.q.dim();
    let idx = pair_index(&q.q);
    let m = q.m.mat();
    let mut left_ops = vec![numeric::zeros(n, n); n];
    let mut right_ops = vec![numeric::zeros(n, n); n];
    for a in 0..n {
        for b in 0..n {
            if let Some(k) = idx[a][b] {
                for r in 0..n {
                    let z = m[(r, k)];
                    left_ops[a][(r, b)] = z;
                    right_ops[b][(r, a)] = z;
                }
            }
        }
    }
    RegularRep { left_ops, right_ops }
}

/// Basis (as coefficient vectors over `Q`'s basis) of the center of the algebra.
fn center_basis(q: &QSystemData, tol: Tolerance) -> Vec<Vec<C64>> {
    let n = q.q.dim();
    let idx = pair_index(&q.q);
    let m = q.m.mat();
    // Central elements commute with the unit components, so they live on diagonal sectors.
    let diag: Vec<usize> = (0..n).filter(|&p| q.q.row(p) == q.q.col(p)).collect();
    let d = diag.len();
    let mut gram = numeric::zeros(d, d);
    let mut block = numeric::zeros(n, d);
    for b in 0..n {
        block.fill(c(0.0, 0.0));
        for (col, &a) in diag.iter().enumerate() {
            if let Some(k) = idx[a][b] {
                for r in 0..n {
                    block[(r, col)] += m[(r, k)];
                }
            }
            if let Some(k) = idx[b][a] {
                for r in 0..n {
                    block[(r, col)] -= m[(r, k)];
                }
            }
        }
        gram += block.adjoint() * &block;
    }
    let (values, vectors) = hermitian_eigen(&gram);
    let scale = values.last().copied().unwrap_or(0.0).max(1.0);
    (0..d)
        .filter(|&k| values[k] <= tol.gap_tol * scale)
        .map(|k| {
            let mut xi = vec![c(0.0, 0.0); n];
            for (col, &a) in diag.iter().enumerate() {
                xi[a] = vectors[(col, k)];
            }
            xi
        })
        .collect()
}

fn combine(ops: &[ComplexMatrix], coeffs: &[C64], n: usize) -> ComplexMatrix {
    let mut out = numeric::zeros(n, n);
    for (op, &z) in ops.iter().zip(coeffs) {
        if z != c(0.0, 0.0) {
            out += op * z;
        }
    }
    out
}

fn rank(p: &ComplexMatrix) -> usize {
    libm::round((0..p.nrows()).map(|k| p[(k, k)].re).sum::<f64>()) as usize
}

/// Minimal central projections `z_t` as operators on the underlying space of `Q`.
pub fn central_decomposition<R: Rng + ?Sized>(q: &QSystemData, tol: Tolerance, rng: &mut R) -> Result<Vec<ComplexMatrix>> {
    let reps = regular_reps(q, tol)?;
    central_projections(q, &reps, tol, rng)
}

fn central_projections<R: Rng + ?Sized>(
    q: &QSystemData,
    reps: &RegularRep,
    tol: Tolerance,
    rng: &mut R,
) -> Result<Vec<ComplexMatrix>> {
    let n = q.q.dim();
    let center = center_basis(q, tol);
    for _ in 0..ATTEMPTS {
        let mut coeffs = vec![c(0.0, 0.0); n];
        for xi in &center {
            let a = random::complex(rng);
            for (acc, &z) in coeffs.iter_mut().zip(xi) {
                *acc += a * z;
            }
        }
        let l = combine(&reps.left_ops, &coeffs, n);
        let h = (&l + l.adjoint()) * c(0.5, 0.0);
        let projections = numeric::spectral_projections(&h, tol)?;
        if projections.len() == center.len() {
            return Ok(projections.into_iter().map(|(_, p)| p).collect());
        }
    }
    Err(Error::DegenerateRandomElement(ATTEMPTS))
}

/// Projection onto the range of a right multiplication by a minimal projection of block `z`.
fn minimal_right_projection<R: Rng + ?Sized>(
    q: &QSystemData,
    reps: &RegularRep,
    z: &ComplexMatrix,
    tol: Tolerance,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    let n = q.q.dim();
    let block_rank = rank(z);
    let side = libm::round(libm::sqrt(block_rank as f64)) as usize;
    if side * side != block_rank {
        return Err(Error::InvalidQSystem(format!("central block of dimension {block_rank} is not a full matrix algebra")));
    }
    let col_proj = |i: usize| {
        ComplexMatrix::from_fn(n, n, |a, b| if a == b && q.q.col(a) == i { c(1.0, 0.0) } else { c(0.0, 0.0) })
    };
    let i = (0..q.base())
        .find(|&i| numeric::frob(&(z * col_proj(i))) > 0.5)
        .ok_or_else(|| Error::InvalidQSystem("central projection vanishes".into()))?;
    let pi = col_proj(i) * z;
    let sector: Vec<usize> = (0..n).filter(|&p| q.q.grading()[p] == (i, i)).collect();
    for _ in 0..ATTEMPTS {
        let coeffs: Vec<C64> = (0..n).map(|p| if sector.contains(&p) { random::complex(rng) } else { c(0.0, 0.0) }).collect();
        let b = combine(&reps.right_ops, &coeffs, n);
        let h = z * (&b + b.adjoint()) * z;
        let norm = numeric::frob(&h);
        if !(norm > 0.0) {
            continue;
        }
        let k = &pi + h * c(0.25 / norm, 0.0);
        let clusters = numeric::spectral_projections(&((&k + k.adjoint()) * c(0.5, 0.0)), tol)?;
        if let Some((_, p)) = clusters.into_iter().find(|(v, _)| *v > 0.5) {
            if rank(&p) == side {
                return Ok(p);
            }
        }
    }
    Err(Error::DegenerateRandomElement(ATTEMPTS))
}

struct Block {
    /// Columns: orthonormal basis `v_x` of the minimal left ideal, grouped by row index.
    basis: ComplexMatrix,
    rows: Vec<usize>,
    first: usize,
}

/// `Φ_t(a)_{xy} = ⟨v_x, L_a v_y⟩`, stacked over blocks as rows of a square matrix.
fn coordinate_map(reps: &RegularRep, blocks: &[Block], n: usize) -> ComplexMatrix {
    let mut phi = numeric::zeros(n, n);
    for (a, la) in reps.left_ops.iter().enumerate() {
        let mut offset = 0;
        for blk in blocks {
            let s = blk.basis.ncols();
            let local = blk.basis.adjoint() * (la * &blk.basis);
            for x in 0..s {
                for y in 0..s {
                    phi[(offset + x * s + y, a)] = local[(x, y)];
                }
            }
            offset += s * s;
        }
    }
    phi
}

/// Split `q` as `X ⊠ X̄` with a unitary algebra isomorphism.
pub fn split_qsystem<R: Rng + ?Sized>(q: &QSystemData, tol: Tolerance, rng: &mut R) -> Result<SplitResult> {
    let reps = regular_reps(q, tol)?;
    let n = q.q.dim();
    let centrals = central_projections(q, &reps, tol, rng)?;
    let mut blocks = Vec::new();
    for z in &centrals {
        let p = minimal_right_projection(q, &reps, z, tol, rng)?;
        let first = (0..n).find(|&a| z[(a, a)].re > 1e-3).unwrap_or(n);
        let mut basis_cols: Vec<ComplexMatrix> = Vec::new();
        let mut rows = Vec::new();
        for j in 0..q.base() {
            let sel: Vec<usize> = (0..n).filter(|&a| q.q.row(a) == j).collect();
            let sub = ComplexMatrix::from_fn(sel.len(), sel.len(), |a, b| p[(sel[a], sel[b])]);
            let w = range_isometry(&sub, Tolerance { atol: tol.gap_tol, ..tol })?;
            let mut full = numeric::zeros(n, w.ncols());
            for (a, &s) in sel.iter().enumerate() {
                for b in 0..w.ncols() {
                    full[(s, b)] = w[(a, b)];
                }
            }
            rows.extend(core::iter::repeat(j).take(w.ncols()));
            basis_cols.push(full);
        }
        let total: usize = basis_cols.iter().map(|m| m.ncols()).sum();
        let mut basis = numeric::zeros(n, total);
        let mut off = 0;
        for m in basis_cols {
            basis.columns_mut(off, m.ncols()).copy_from(&m);
            off += m.ncols();
        }
        blocks.push(Block { basis, rows, first });
    }
    blocks.sort_by_key(|b| (b.basis.ncols(), b.first));
    let dims: usize = blocks.iter().map(|b| b.basis.ncols() * b.basis.ncols()).sum();
    if dims != n {
        return Err(Error::NormalizationFailure(format!("blocks cover dimension {dims} of {n}")));
    }

    // Rotate each row sector of each block so that the induced inner product is diagonal.
    let inverse = |blocks: &[Block]| {
        coordinate_map(&reps, blocks, n)
            .try_inverse()
            .ok_or_else(|| Error::NormalizationFailure("block coordinates are singular".into()))
    };
    let phi_inv = inverse(&blocks)?;
    let mut offset = 0;
    for blk in blocks.iter_mut() {
        let s = blk.basis.ncols();
        let gram = inner_products(&phi_inv, offset, s);
        let mut start = 0;
        while start < s {
            let row = blk.rows[start];
            let end = (start..s).find(|&k| blk.rows[k] != row).unwrap_or(s);
            // The inner product is Tr(ρ a†b) with ρ = Gᵀ.
            let sub = gram.view((start, start), (end - start, end - start)).transpose();
            let (_, u) = hermitian_eigen(&sub);
            let rotated = blk.basis.columns(start, end - start) * &u;
            blk.basis.columns_mut(start, end - start).copy_from(&rotated);
            start = end;
        }
        offset += s * s;
    }
    let phi_inv = inverse(&blocks)?;

    // Assemble X graded (row j, block t), sorted by (j, t).
    let mut entries: Vec<(usize, usize, usize, f64)> = Vec::new(); // (row, block, position in block, β)
    let mut offset = 0;
    let mut offsets = Vec::new();
    for (t, blk) in blocks.iter().enumerate() {
        let s = blk.basis.ncols();
        let gram = inner_products(&phi_inv, offset, s);
        for x in 0..s {
            let rho = gram[(x, x)].re;
            if !(rho > 0.0) {
                return Err(Error::NormalizationFailure(format!("non-positive weight {rho:.3e} in block {}", t + 1)));
            }
            entries.push((blk.rows[x], t, x, 1.0 / libm::sqrt(rho)));
        }
        offsets.push(offset);
        offset += s * s;
    }
    entries.sort_by_key(|e| (e.0, e.1, e.2));
    let k = blocks.len();
    let x = GradedOneCell::new(k, q.base(), entries.iter().map(|e| (e.0, e.1)).collect())?;
    let weights: Vec<f64> = entries.iter().map(|e| e.3).collect();
    let pair = DualPair::from_dual(x.clone(), weighted_dual(&x, &weights)?);

    let source = hcomp1(&pair.x, &pair.xbar)?;
    let mut gamma = numeric::zeros(n, source.dim());
    for (col, (a, b)) in compatible_pairs(&pair.x, &pair.xbar).into_iter().enumerate() {
        let (_, t, xa, _) = entries[a];
        let (_, _, yb, beta) = entries[b];
        let s = blocks[t].basis.ncols();
        let coord = offsets[t] + xa * s + yb;
        for r in 0..n {
            gamma[(r, col)] = phi_inv[(r, coord)] * beta;
        }
    }
    let gamma = BlockTwoCell::new(source, q.q.clone(), gamma)?;
    let result = SplitResult { k, pair, gamma };
    let report = check_split(q, &result, tol)?;
    if let Some(bad) = report.failures().next() {
        return Err(Error::NormalizationFailure(format!("{} has residual {:.3e}", bad.name, bad.residual)));
    }
    Ok(result)
}

/// `G[y, y'] = avg_x ⟨Φ⁻¹E_{xy}, Φ⁻¹E_{xy'}⟩` for one block, read off the columns of `Φ⁻¹`.
fn inner_products(phi_inv: &ComplexMatrix, offset: usize, s: usize) -> ComplexMatrix {
    let mut g = numeric::zeros(s, s);
    for x in 0..s {
        for y in 0..s {
            for yp in 0..s {
                let a = phi_inv.column(offset + x * s + y);
                let b = phi_inv.column(offset + x * s + yp);
                g[(y, yp)] += a.dotc(&b);
            }
        }
    }
    g * c(1.0 / s as f64, 0.0)
}

/// Sorted multiset of sector dimensions per source index of `x`, for comparisons up to relabeling.
pub fn column_dim_multiset(x: &GradedOneCell) -> Vec<usize> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &(_, col) in x.grading() {
        *counts.entry(col).or_insert(0) += 1;
    }
    let mut v: Vec<usize> = (0..x.src()).map(|c| counts.get(&c).copied().unwrap_or(0)).collect();
    v.sort_unstable();
    v
}

/// Seeded convenience wrapper around [`split_qsystem`].
pub fn split_qsystem_seeded(q: &QSystemData, tol: Tolerance, seed: u64) -> Result<SplitResult> {
    split_qsystem(q, tol, &mut random::seeded(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathilb::{dsum_cells, id1, id2, vcomp};
    use crate::qsystem::trivial_qsystem;

    fn cell(src: usize, tgt: usize, g: &[(usize, usize)]) -> GradedOneCell {
        GradedOneCell::new(src, tgt, g.to_vec()).unwrap()
    }

    #[test]
    fn split_identity_projection_and_zero() {
        let x = cell(2, 2, &[(0, 0), (1, 1), (0, 0), (1, 0)]);
        let (y, u) = split_projection(&x, &id2(&x), Tolerance::default()).unwrap();
        assert_eq!(y.sector_dims(), x.sector_dims());
        assert!(u.unitarity_residual() < 1e-12);
        let zero = BlockTwoCell::new(x.clone(), x.clone(), numeric::zeros(4, 4)).unwrap();
        let (y, _) = split_projection(&x, &zero, Tolerance::default()).unwrap();
        assert_eq!(y.dim(), 0);
    }

    #[test]
    fn trivial_qsystem_splits_into_points() {
        for n in 1..4 {
            let s = split_qsystem_seeded(&trivial_qsystem(n), Tolerance::default(), 1).unwrap();
            assert_eq!(s.k, n);
            assert_eq!(s.pair.x.dim(), n);
            assert!(s.gamma.unitarity_residual() < 1e-9);
        }
    }

    #[test]
    fn matrix_algebra_is_simple() {
        let x = cell(1, 1, &[(0, 0), (0, 0)]);
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        let z = central_decomposition(&q, Tolerance::default(), &mut random::seeded(2)).unwrap();
        assert_eq!(z.len(), 1);
        let s = split_qsystem_seeded(&q, Tolerance::default(), 5).unwrap();
        assert_eq!((s.k, s.pair.x.dim()), (1, 2));
        let reps = regular_reps(&q, Tolerance::default()).unwrap();
        let span = numeric::null_space(
            &ComplexMatrix::from_fn(16, 4, |r, a| reps.left_ops[a][(r % 4, r / 4)]),
            Tolerance::default(),
        );
        assert_eq!(span.ncols(), 0, "left ops are linearly independent");
    }

    #[test]
    fn direct_sum_has_two_blocks() {
        let a = cell(1, 1, &[(0, 0), (0, 0)]);
        let b = cell(1, 1, &[(0, 0)]);
        let x = dsum_cells(&a, &b);
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        let s = split_qsystem_seeded(&q, Tolerance::default(), 9).unwrap();
        assert_eq!(s.k, 2);
        assert_eq!(s.block_dims(), vec![1, 2]);
    }

    #[test]
    fn central_projections_commute_with_both_actions() {
        let x = cell(3, 2, &[(0, 0), (1, 0), (1, 1), (0, 2), (1, 2)]);
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        let reps = regular_reps(&q, Tolerance::default()).unwrap();
        let zs = central_decomposition(&q, Tolerance::default(), &mut random::seeded(4)).unwrap();
        assert_eq!(zs.len(), 3);
        for z in &zs {
            for op in reps.left_ops.iter().chain(&reps.right_ops) {
                assert!(numeric::residual(&(z * op), &(op * z)) < 1e-9);
            }
        }
    }

    #[test]
    fn gamma_sends_coev_to_unit() {
        let x = cell(2, 2, &[(0, 0), (0, 1), (1, 1), (1, 1)]);
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        let s = split_qsystem_seeded(&q, Tolerance::default(), 3).unwrap();
        assert!(vcomp(&s.gamma, &s.pair.coev).unwrap().distance(&q.i) < 1e-9);
        assert_eq!(s.pair.x.src(), 2);
        assert_eq!(column_dim_multiset(&s.pair.x), column_dim_multiset(&x));
        let _ = id1(1);
    }
}
