//! The C*-2-category of graded matrices.
//!
//! A 0-cell is a positive integer `n` (indices `0..n`). A 1-cell `X: a → b` is an
//! ordered basis whose vectors are graded by `(row, col)` with `row < b` and
//! `col < a`. A 2-cell is a complex matrix between two parallel 1-cells that
//! only connects basis vectors of equal grading.
//!
//! `hcomp1(Y, X)` enumerates compatible pairs `(p, q)` lexicographically, which
//! makes `⊠` strictly associative. The right unitor `X ⊠ 1 → X` is then the
//! identity matrix, while the left unitor `1 ⊠ X → X` is a permutation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numeric::{self, c, ComplexMatrix, C64};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedOneCell {
    src: usize,
    tgt: usize,
    grading: Vec<(usize, usize)>,
}

impl GradedOneCell {
    /// `grading[k] = (row, col)` of the k-th basis vector (0-based).
    pub fn new(src: usize, tgt: usize, grading: Vec<(usize, usize)>) -> Result<Self> {
        if src == 0 || tgt == 0 {
            return Err(Error::CellMismatch(format!("0-cells must be positive, got {src} -> {tgt}")));
        }
        if let Some(&(r, c)) = grading.iter().find(|&&(r, c)| r >= tgt || c >= src) {
            return Err(Error::CellMismatch(format!(
                "grading ({}, {}) out of range for a 1-cell {src} -> {tgt}",
                r + 1,
                c + 1
            )));
        }
        Ok(GradedOneCell { src, tgt, grading })
    }

    pub fn src(&self) -> usize {
        self.src
    }

    pub fn tgt(&self) -> usize {
        self.tgt
    }

    pub fn grading(&self) -> &[(usize, usize)] {
        &self.grading
    }

    pub fn dim(&self) -> usize {
        self.grading.len()
    }

    pub fn row(&self, p: usize) -> usize {
        self.grading[p].0
    }

    pub fn col(&self, p: usize) -> usize {
        self.grading[p].1
    }

    pub fn is_endo(&self) -> bool {
        self.src == self.tgt
    }

    /// Basis positions graded `(row, col)`.
    pub fn sector(&self, row: usize, col: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&p| self.grading[p] == (row, col)).collect()
    }

    /// Basis positions of every nonempty sector, in grading order.
    pub fn sectors(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut out: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (p, &g) in self.grading.iter().enumerate() {
            out.entry(g).or_default().push(p);
        }
        out
    }

    /// Dimension of every nonempty sector.
    pub fn sector_dims(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for &g in &self.grading {
            *out.entry(g).or_insert(0) += 1;
        }
        out
    }

    /// Same basis order, grading pairs transposed; a 1-cell `tgt → src`.
    pub fn transpose(&self) -> Self {
        GradedOneCell {
            src: self.tgt,
            tgt: self.src,
            grading: self.grading.iter().map(|&(r, c)| (c, r)).collect(),
        }
    }

    /// The same 1-cell with its basis sorted by grading (stable).
    pub fn sorted(&self) -> Self {
        let mut grading = self.grading.clone();
        grading.sort();
        GradedOneCell { src: self.src, tgt: self.tgt, grading }
    }

    pub fn same_endpoints(&self, other: &Self) -> bool {
        self.src == other.src && self.tgt == other.tgt
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockTwoCell {
    source: GradedOneCell,
    target: GradedOneCell,
    mat: ComplexMatrix,
}

impl BlockTwoCell {
    /// Checks parallelism and shape. Sector support is measured by
    /// [`BlockTwoCell::support_residual`] rather than enforced.
    pub fn new(source: GradedOneCell, target: GradedOneCell, mat: ComplexMatrix) -> Result<Self> {
        if !source.same_endpoints(&target) {
            return Err(Error::CellMismatch(format!(
                "2-cell between non-parallel 1-cells ({} -> {}) and ({} -> {})",
                source.src, source.tgt, target.src, target.tgt
            )));
        }
        if mat.shape() != (target.dim(), source.dim()) {
            return Err(Error::CellMismatch(format!(
                "matrix shape {}x{} does not match target dim {} and source dim {}",
                mat.nrows(),
                mat.ncols(),
                target.dim(),
                source.dim()
            )));
        }
        Ok(BlockTwoCell { source, target, mat })
    }

    pub fn source(&self) -> &GradedOneCell {
        &self.source
    }

    pub fn target(&self) -> &GradedOneCell {
        &self.target
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> ComplexMatrix {
        self.mat
    }

    /// Frobenius norm of the entries connecting different gradings.
    pub fn support_residual(&self) -> f64 {
        let mut acc = 0.0;
        for q in 0..self.source.dim() {
            for p in 0..self.target.dim() {
                if self.target.grading[p] != self.source.grading[q] {
                    acc += self.mat[(p, q)].norm_sqr();
                }
            }
        }
        libm::sqrt(acc)
    }

    /// `(‖p − p†‖, ‖p² − p‖)` for an endomorphism. Computed sector by sector
    /// when the matrix vanishes off the sectors, which is then exact.
    pub fn projection_residuals(&self) -> (f64, f64) {
        if self.source != self.target {
            return (f64::INFINITY, f64::INFINITY);
        }
        if self.support_residual() != 0.0 {
            return numeric::projection_residuals(&self.mat);
        }
        let (mut herm, mut idem) = (0.0, 0.0);
        for idx in self.source.sectors().values() {
            let (h, i) = numeric::projection_residuals(&self.sector_block(idx));
            herm += h * h;
            idem += i * i;
        }
        (libm::sqrt(herm), libm::sqrt(idem))
    }

    /// The square block on the basis positions `idx`.
    pub fn sector_block(&self, idx: &[usize]) -> ComplexMatrix {
        ComplexMatrix::from_fn(idx.len(), idx.len(), |a, b| self.mat[(idx[a], idx[b])])
    }

    pub fn scale(&self, z: C64) -> Self {
        BlockTwoCell { source: self.source.clone(), target: self.target.clone(), mat: &self.mat * z }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::CellMismatch("sum of 2-cells with different boundaries".into()));
        }
        Ok(BlockTwoCell { source: self.source.clone(), target: self.target.clone(), mat: &self.mat + &other.mat })
    }

    /// Residual to `other`; infinite when the boundaries differ.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.source != other.source || self.target != other.target {
            return f64::INFINITY;
        }
        numeric::residual(&self.mat, &other.mat)
    }

    /// Residual of `self` being an isometry: ‖f†f − id‖.
    pub fn isometry_residual(&self) -> f64 {
        numeric::residual(&(self.mat.adjoint() * &self.mat), &numeric::identity(self.source.dim()))
    }

    /// `max(‖f†f − id‖, ‖ff† − id‖)`.
    pub fn unitarity_residual(&self) -> f64 {
        let co = numeric::residual(&(&self.mat * self.mat.adjoint()), &numeric::identity(self.target.dim()));
        self.isometry_residual().max(co)
    }
}

pub fn id1(n: usize) -> GradedOneCell {
    GradedOneCell { src: n, tgt: n, grading: (0..n).map(|k| (k, k)).collect() }
}

pub fn id2(x: &GradedOneCell) -> BlockTwoCell {
    BlockTwoCell { source: x.clone(), target: x.clone(), mat: numeric::identity(x.dim()) }
}

pub fn zero2(source: &GradedOneCell, target: &GradedOneCell) -> Result<BlockTwoCell> {
    BlockTwoCell::new(source.clone(), target.clone(), numeric::zeros(target.dim(), source.dim()))
}

/// All pairs `(p, q)` with `Y.col(p) = X.row(q)`, in lexicographic order.
pub fn compatible_pairs(y: &GradedOneCell, x: &GradedOneCell) -> Vec<(usize, usize)> {
    let mut by_row: Vec<Vec<usize>> = vec![Vec::new(); x.tgt];
    for q in 0..x.dim() {
        by_row[x.row(q)].push(q);
    }
    let mut out = Vec::new();
    for p in 0..y.dim() {
        for &q in &by_row[y.col(p)] {
            out.push((p, q));
        }
    }
    out
}

fn require_composable(y: &GradedOneCell, x: &GradedOneCell) -> Result<()> {
    if x.tgt != y.src {
        return Err(Error::CellMismatch(format!(
            "cannot compose Y: {} -> {} after X: {} -> {}",
            y.src, y.tgt, x.src, x.tgt
        )));
    }
    Ok(())
}

/// `Y ⊠ X` for `X: a → b`, `Y: b → c`.
pub fn hcomp1(y: &GradedOneCell, x: &GradedOneCell) -> Result<GradedOneCell> {
    require_composable(y, x)?;
    let grading = compatible_pairs(y, x).into_iter().map(|(p, q)| (y.row(p), x.col(q))).collect();
    Ok(GradedOneCell { src: x.src, tgt: y.tgt, grading })
}

/// `Y_1 ⊠ … ⊠ Y_n`; the empty word is not allowed here.
pub fn hcomp1_all(word: &[GradedOneCell]) -> Result<GradedOneCell> {
    let (last, rest) = word
        .split_last()
        .ok_or_else(|| Error::CellMismatch("empty composite without a base 0-cell".into()))?;
    let mut acc = last.clone();
    for y in rest.iter().rev() {
        acc = hcomp1(y, &acc)?;
    }
    Ok(acc)
}

/// `g ⊠ f` for `g: Y → Y'` and `f: X → X'`.
pub fn hcomp2(g: &BlockTwoCell, f: &BlockTwoCell) -> Result<BlockTwoCell> {
    require_composable(&g.source, &f.source)?;
    require_composable(&g.target, &f.target)?;
    let source = hcomp1(&g.source, &f.source)?;
    let target = hcomp1(&g.target, &f.target)?;
    let tpairs = compatible_pairs(&g.target, &f.target);
    let mut index = vec![usize::MAX; g.target.dim() * f.target.dim()];
    for (k, &(p, q)) in tpairs.iter().enumerate() {
        index[p * f.target.dim() + q] = k;
    }
    let nz_g = nonzero_rows(&g.mat);
    let nz_f = nonzero_rows(&f.mat);
    let mut mat = numeric::zeros(target.dim(), source.dim());
    for (s, (p, q)) in compatible_pairs(&g.source, &f.source).into_iter().enumerate() {
        for &pp in &nz_g[p] {
            for &qq in &nz_f[q] {
                let t = index[pp * f.target.dim() + qq];
                if t != usize::MAX {
                    mat[(t, s)] += g.mat[(pp, p)] * f.mat[(qq, q)];
                }
            }
        }
    }
    Ok(BlockTwoCell { source, target, mat })
}

/// Per column, the rows holding a nonzero entry.
pub(crate) fn nonzero_rows(m: &ComplexMatrix) -> Vec<Vec<usize>> {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).filter(|&i| m[(i, j)] != C64::new(0.0, 0.0)).collect())
        .collect()
}

/// `g ∘ f` (apply `f` first).
pub fn vcomp(g: &BlockTwoCell, f: &BlockTwoCell) -> Result<BlockTwoCell> {
    if f.target != g.source {
        return Err(Error::CellMismatch(format!(
            "vertical composite: target of f (dim {}) differs from source of g (dim {})",
            f.target.dim(),
            g.source.dim()
        )));
    }
    Ok(BlockTwoCell { source: f.source.clone(), target: g.target.clone(), mat: &g.mat * &f.mat })
}

/// Composite `fs[0] ∘ fs[1] ∘ …`.
pub fn vcomp_all(fs: &[&BlockTwoCell]) -> Result<BlockTwoCell> {
    let (last, rest) = fs.split_last().ok_or_else(|| Error::CellMismatch("empty vertical composite".into()))?;
    let mut acc = (*last).clone();
    for g in rest.iter().rev() {
        acc = vcomp(g, &acc)?;
    }
    Ok(acc)
}

pub fn dagger2(f: &BlockTwoCell) -> BlockTwoCell {
    BlockTwoCell { source: f.target.clone(), target: f.source.clone(), mat: f.mat.adjoint() }
}

/// `λ_X : 1_tgt ⊠ X → X`.
pub fn unitor_left(x: &GradedOneCell) -> BlockTwoCell {
    let source = hcomp1(&id1(x.tgt), x).expect("unit is composable");
    let mut mat = numeric::zeros(x.dim(), source.dim());
    for (s, (_, q)) in compatible_pairs(&id1(x.tgt), x).into_iter().enumerate() {
        mat[(q, s)] = c(1.0, 0.0);
    }
    BlockTwoCell { source, target: x.clone(), mat }
}

/// `ρ_X : X ⊠ 1_src → X`; the identity matrix under lexicographic pairing.
pub fn unitor_right(x: &GradedOneCell) -> BlockTwoCell {
    let source = hcomp1(x, &id1(x.src)).expect("unit is composable");
    BlockTwoCell { source, target: x.clone(), mat: numeric::identity(x.dim()) }
}

/// `X ⊕ Y : a + a' → b + b'`, indices of `Y` shifted past those of `X`.
pub fn dsum_cells(x: &GradedOneCell, y: &GradedOneCell) -> GradedOneCell {
    let mut grading = x.grading.clone();
    grading.extend(y.grading.iter().map(|&(r, c)| (r + x.tgt, c + x.src)));
    GradedOneCell { src: x.src + y.src, tgt: x.tgt + y.tgt, grading }
}

/// A dual `(X̄, ev, coev)` of `X: a → b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dual {
    pub xbar: GradedOneCell,
    /// `ev : X̄ ⊠ X → 1_a`
    pub ev: BlockTwoCell,
    /// `coev : 1_b → X ⊠ X̄`
    pub coev: BlockTwoCell,
}

/// Dual with per-column balancing weight `w_i = (#basis vectors with col i)^{-1/2}`.
pub fn standard_dual(x: &GradedOneCell) -> Result<Dual> {
    let mut counts = vec![0usize; x.src];
    for &(_, col) in &x.grading {
        counts[col] += 1;
    }
    if let Some(i) = counts.iter().position(|&n| n == 0) {
        return Err(Error::EmptyColumn(i));
    }
    let weights: Vec<f64> = (0..x.dim()).map(|p| 1.0 / libm::sqrt(counts[x.col(p)] as f64)).collect();
    weighted_dual(x, &weights)
}

/// Dual with `ev(x̄_p ⊗ x_q) = δ_pq β_p` and `coev(e_j) = Σ_{row(q)=j} β_q⁻¹ x_q ⊗ x̄_q`.
///
/// The zig-zag identities hold for any positive weights; `ev ev† = id` holds
/// exactly when `Σ_{col(p)=i} β_p² = 1` for every source index `i`.
pub fn weighted_dual(x: &GradedOneCell, weights: &[f64]) -> Result<Dual> {
    if weights.len() != x.dim() || weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
        return Err(Error::DimensionMismatch(format!(
            "need {} positive weights, got {}",
            x.dim(),
            weights.len()
        )));
    }
    let xbar = x.transpose();
    let unit_src = id1(x.src);
    let unit_tgt = id1(x.tgt);
    let ev_source = hcomp1(&xbar, x)?;
    let mut ev = numeric::zeros(x.src, ev_source.dim());
    for (s, (p, q)) in compatible_pairs(&xbar, x).into_iter().enumerate() {
        if p == q {
            ev[(x.col(p), s)] = c(weights[p], 0.0);
        }
    }
    let coev_target = hcomp1(x, &xbar)?;
    let mut coev = numeric::zeros(coev_target.dim(), x.tgt);
    for (t, (q, p)) in compatible_pairs(x, &xbar).into_iter().enumerate() {
        if p == q {
            coev[(t, x.row(q))] = c(1.0 / weights[q], 0.0);
        }
    }
    Ok(Dual {
        ev: BlockTwoCell::new(ev_source, unit_src, ev)?,
        coev: BlockTwoCell::new(unit_tgt, coev_target, coev)?,
        xbar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::residual;

    fn cell(src: usize, tgt: usize, g: &[(usize, usize)]) -> GradedOneCell {
        GradedOneCell::new(src, tgt, g.to_vec()).unwrap()
    }

    #[test]
    fn identity_one_cells() {
        assert_eq!(id1(1).grading(), &[(0, 0)]);
        assert_eq!(id1(3).grading(), &[(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn hcomp1_hand_example() {
        // Y: 2 -> 1 graded [(1,1),(1,2)], X: 1 -> 2 graded [(1,1),(2,1)] (1-based)
        let y = cell(2, 1, &[(0, 0), (0, 1)]);
        let x = cell(1, 2, &[(0, 0), (1, 0)]);
        let yx = hcomp1(&y, &x).unwrap();
        assert_eq!(yx.grading(), &[(0, 0), (0, 0)]);
        assert_eq!(yx.src(), 1);
        assert_eq!(yx.tgt(), 1);
        assert!(matches!(hcomp1(&x, &x), Err(Error::CellMismatch(_))));
    }

    #[test]
    fn hcomp1_over_single_indices_is_kronecker_sized() {
        let y = cell(1, 1, &[(0, 0); 2]);
        let x = cell(1, 1, &[(0, 0); 3]);
        assert_eq!(hcomp1(&y, &x).unwrap().dim(), 6);
    }

    #[test]
    fn hcomp2_matches_kron_on_single_indices() {
        let y = cell(1, 1, &[(0, 0); 2]);
        let x = cell(1, 1, &[(0, 0); 3]);
        let a = ComplexMatrix::from_fn(2, 2, |i, j| c(i as f64 + 1.0, j as f64));
        let b = ComplexMatrix::from_fn(3, 3, |i, j| c(j as f64 - i as f64, 1.0));
        let g = BlockTwoCell::new(y.clone(), y, a.clone()).unwrap();
        let f = BlockTwoCell::new(x.clone(), x, b.clone()).unwrap();
        assert_eq!(hcomp2(&g, &f).unwrap().mat(), &numeric::kron(&a, &b));
    }

    #[test]
    fn unitors_of_identity_coincide() {
        let l = unitor_left(&id1(3));
        let r = unitor_right(&id1(3));
        assert_eq!(l.mat(), r.mat());
        assert_eq!(unitor_left(&cell(1, 1, &[(0, 0); 2])).mat(), &numeric::identity(2));
    }

    #[test]
    fn left_unitor_sorts_by_row() {
        let x = cell(1, 2, &[(1, 0), (0, 0)]);
        let l = unitor_left(&x);
        // 1 ⊠ X enumerates (u=0, q=1), (u=1, q=0)
        assert_eq!(l.mat()[(1, 0)], c(1.0, 0.0));
        assert_eq!(l.mat()[(0, 1)], c(1.0, 0.0));
    }

    #[test]
    fn standard_dual_of_identity() {
        let d = standard_dual(&id1(2)).unwrap();
        assert_eq!(d.xbar, id1(2));
        assert!(residual(d.ev.mat(), &numeric::identity(2)) < 1e-15);
        assert!(residual(d.coev.mat(), &numeric::identity(2)) < 1e-15);
    }

    #[test]
    fn standard_dual_weights_for_column_counts_two_and_three() {
        let x = cell(2, 1, &[(0, 0), (0, 0), (0, 1), (0, 1), (0, 1)]);
        let d = standard_dual(&x).unwrap();
        let eev = d.ev.mat() * d.ev.mat().adjoint();
        assert!(residual(&eev, &numeric::identity(2)) < 1e-14);
        let pairs = compatible_pairs(&d.xbar, &x);
        for (s, (p, q)) in pairs.into_iter().enumerate() {
            let expected = if p != q {
                0.0
            } else if p < 2 {
                1.0 / libm::sqrt(2.0)
            } else {
                1.0 / libm::sqrt(3.0)
            };
            let col = if p < 2 { 0 } else { 1 };
            assert!((d.ev.mat()[(col, s)].re - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn standard_dual_requires_full_support() {
        let x = cell(2, 1, &[(0, 0)]);
        assert_eq!(standard_dual(&x), Err(Error::EmptyColumn(1)));
    }

    #[test]
    fn two_cell_shape_checks() {
        let x = cell(1, 1, &[(0, 0)]);
        assert!(BlockTwoCell::new(x.clone(), x.clone(), numeric::zeros(2, 1)).is_err());
        assert!(BlockTwoCell::new(x.clone(), id1(2), numeric::zeros(2, 1)).is_err());
        assert!(GradedOneCell::new(1, 1, vec![(1, 0)]).is_err());
    }

    #[test]
    fn sectorwise_projection_residuals_match_dense() {
        let mut rng = crate::random::seeded(12);
        let x = crate::random::one_cell(&mut rng, 3, 2, 3, false);
        let (p, _) = crate::random::projection(&mut rng, &x);
        let noisy = p.add(&crate::random::two_cell(&mut rng, &x, &x).scale(c(1e-3, 0.0))).unwrap();
        let dense = numeric::projection_residuals(noisy.mat());
        let blocks = noisy.projection_residuals();
        assert!((dense.0 - blocks.0).abs() < 1e-14 && (dense.1 - blocks.1).abs() < 1e-14);
        // Off-sector entries fall back to the dense computation.
        let mut m = p.mat().clone();
        let (a, b) = (0..x.dim()).flat_map(|a| (0..x.dim()).map(move |b| (a, b))).find(|&(a, b)| x.grading()[a] != x.grading()[b]).unwrap();
        m[(a, b)] = c(0.5, 0.0);
        let off = BlockTwoCell::new(x.clone(), x.clone(), m.clone()).unwrap();
        assert_eq!(off.projection_residuals(), numeric::projection_residuals(&m));
    }
}
