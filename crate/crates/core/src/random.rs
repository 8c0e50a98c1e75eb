//! Seeded random instances: matrices, graded 1-cells and 2-cells.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mathilb::{BlockTwoCell, GradedOneCell};
use crate::numeric::{self, c, ComplexMatrix, C64};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real and imaginary parts uniform in `[-1, 1)`.
pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex(rng))
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = matrix(rng, n, n);
    (&a + a.adjoint()) * c(0.5, 0.0)
}

/// Unitary from the QR factorization of a random matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    if n == 0 {
        return numeric::zeros(0, 0);
    }
    let qr = matrix(rng, n, n).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        let scaled = u.column(k) * phase;
        u.set_column(k, &scaled);
    }
    u
}

/// First `k` columns of a random `n × n` unitary.
pub fn isometry<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> ComplexMatrix {
    unitary(rng, n).columns(0, k).into_owned()
}

/// A 1-cell `src → tgt` with sector dimensions drawn from `0..=max_sector`.
/// With `full_support`, every source index carries at least one basis vector.
pub fn one_cell<R: Rng + ?Sized>(
    rng: &mut R,
    src: usize,
    tgt: usize,
    max_sector: usize,
    full_support: bool,
) -> GradedOneCell {
    let mut dims: Vec<usize> = (0..src * tgt).map(|_| rng.random_range(0..=max_sector)).collect();
    if full_support {
        for col in 0..src {
            if (0..tgt).all(|row| dims[row * src + col] == 0) {
                let row = rng.random_range(0..tgt);
                dims[row * src + col] = rng.random_range(1..=max_sector.max(1));
            }
        }
    }
    let mut grading = Vec::new();
    for row in 0..tgt {
        for col in 0..src {
            for _ in 0..dims[row * src + col] {
                grading.push((row, col));
            }
        }
    }
    GradedOneCell::new(src, tgt, grading).expect("indices in range")
}

/// The same grading multiset with the basis order shuffled.
pub fn shuffled<R: Rng + ?Sized>(rng: &mut R, x: &GradedOneCell) -> GradedOneCell {
    let mut grading = x.grading().to_vec();
    grading.shuffle(rng);
    GradedOneCell::new(x.src(), x.tgt(), grading).expect("indices in range")
}

/// Random entries on every pair of basis vectors with equal grading.
pub fn two_cell<R: Rng + ?Sized>(rng: &mut R, source: &GradedOneCell, target: &GradedOneCell) -> BlockTwoCell {
    let mat = ComplexMatrix::from_fn(target.dim(), source.dim(), |p, q| {
        if target.grading()[p] == source.grading()[q] {
            complex(rng)
        } else {
            c(0.0, 0.0)
        }
    });
    BlockTwoCell::new(source.clone(), target.clone(), mat).expect("parallel cells")
}

/// A random sector-wise unitary on `x`.
pub fn unitary_two_cell<R: Rng + ?Sized>(rng: &mut R, x: &GradedOneCell) -> BlockTwoCell {
    let mut mat = numeric::zeros(x.dim(), x.dim());
    for &(row, col) in x.sector_dims().keys() {
        let idx = x.sector(row, col);
        let u = unitary(rng, idx.len());
        for (a, &p) in idx.iter().enumerate() {
            for (b, &q) in idx.iter().enumerate() {
                mat[(p, q)] = u[(a, b)];
            }
        }
    }
    BlockTwoCell::new(x.clone(), x.clone(), mat).expect("square")
}

/// A hermitian idempotent on `x` with a random rank in every sector; returns the ranks too.
pub fn projection<R: Rng + ?Sized>(rng: &mut R, x: &GradedOneCell) -> (BlockTwoCell, Vec<((usize, usize), usize)>) {
    let mut mat = numeric::zeros(x.dim(), x.dim());
    let mut ranks = Vec::new();
    for (&(row, col), &n) in x.sector_dims().iter() {
        let k = rng.random_range(0..=n);
        let w = isometry(rng, n, k);
        let p = &w * w.adjoint();
        let idx = x.sector(row, col);
        for (a, &pa) in idx.iter().enumerate() {
            for (b, &pb) in idx.iter().enumerate() {
                mat[(pa, pb)] = p[(a, b)];
            }
        }
        ranks.push(((row, col), k));
    }
    (BlockTwoCell::new(x.clone(), x.clone(), mat).expect("square"), ranks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::residual;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = seeded(7);
        for n in 0..6 {
            let u = unitary(&mut rng, n);
            assert!(residual(&(u.adjoint() * &u), &numeric::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn full_support_cells() {
        let mut rng = seeded(3);
        for _ in 0..50 {
            let x = one_cell(&mut rng, 3, 2, 2, true);
            for col in 0..3 {
                assert!(x.grading().iter().any(|&(_, c)| c == col));
            }
        }
    }

    #[test]
    fn projections_have_requested_ranks() {
        let mut rng = seeded(11);
        let x = one_cell(&mut rng, 2, 2, 3, true);
        let (p, ranks) = projection(&mut rng, &x);
        let (h, i) = numeric::projection_residuals(p.mat());
        assert!(h < 1e-12 && i < 1e-12);
        let trace: f64 = (0..x.dim()).map(|k| p.mat()[(k, k)].re).sum();
        let total: usize = ranks.iter().map(|r| r.1).sum();
        assert!((trace - total as f64).abs() < 1e-10);
        assert_eq!(p.support_residual(), 0.0);
    }
}
