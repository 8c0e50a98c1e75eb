//! Q-systems, bimodules and intertwiners over graded matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::mathilb::{
    compatible_pairs, dagger2, hcomp1, hcomp2, id1, id2, standard_dual, unitor_left, unitor_right, vcomp, BlockTwoCell, Dual,
    GradedOneCell,
};
use crate::numeric::{self, ComplexMatrix, Tolerance, C64};
use crate::report::Report;
use crate::splitting::split_projection;

/// A 1-cell `Q: b → b` with multiplication `m: Q⊠Q → Q` and unit `i: 1_b → Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct QSystemData {
    pub q: GradedOneCell,
    pub m: BlockTwoCell,
    pub i: BlockTwoCell,
}

impl QSystemData {
    /// Checks shapes only; axioms are measured by [`check_qsystem`].
    pub fn new(q: GradedOneCell, m: BlockTwoCell, i: BlockTwoCell) -> Result<Self> {
        if !q.is_endo() {
            return Err(Error::CellMismatch(format!("Q-system on a non-endo 1-cell {} -> {}", q.src(), q.tgt())));
        }
        if m.source() != &hcomp1(&q, &q)? || m.target() != &q {
            return Err(Error::CellMismatch("multiplication must map Q⊠Q to Q".into()));
        }
        if i.source() != &id1(q.src()) || i.target() != &q {
            return Err(Error::CellMismatch("unit must map 1 to Q".into()));
        }
        Ok(QSystemData { q, m, i })
    }

    /// Number of indices of the underlying 0-cell.
    pub fn base(&self) -> usize {
        self.q.src()
    }
}

/// A 1-cell `X` with a unitarily separable dual.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPair {
    pub x: GradedOneCell,
    pub xbar: GradedOneCell,
    /// `ev : X̄ ⊠ X → 1_src`
    pub ev: BlockTwoCell,
    /// `coev : 1_tgt → X ⊠ X̄`
    pub coev: BlockTwoCell,
}

impl DualPair {
    pub fn from_dual(x: GradedOneCell, d: Dual) -> Self {
        DualPair { x, xbar: d.xbar, ev: d.ev, coev: d.coev }
    }

    pub fn standard(x: &GradedOneCell) -> Result<Self> {
        Ok(DualPair::from_dual(x.clone(), standard_dual(x)?))
    }
}

/// Zig-zag identities and `ev ev† = id`.
pub fn check_dual_pair(d: &DualPair, tol: Tolerance) -> Result<Report> {
    let mut r = Report::new();
    let mut z1 = Diagram::on(core::slice::from_ref(&d.x))?;
    z1.apply(0, 0, &d.coev, &[d.x.clone(), d.xbar.clone()])?;
    z1.apply(1, 2, &d.ev, &[])?;
    r.push("zig-zag X", "(1⊠ev)(coev⊠1) = 1_X", z1.finish()?.distance(&id2(&d.x)), tol.loose());
    let mut z2 = Diagram::on(core::slice::from_ref(&d.xbar))?;
    z2.apply(1, 0, &d.coev, &[d.x.clone(), d.xbar.clone()])?;
    z2.apply(0, 2, &d.ev, &[])?;
    r.push("zig-zag X̄", "(ev⊠1)(1⊠coev) = 1_X̄", z2.finish()?.distance(&id2(&d.xbar)), tol.loose());
    let eev = vcomp(&d.ev, &dagger2(&d.ev))?;
    r.push("unitary separability", "ev ev† = 1", eev.distance(&id2(&id1(d.x.src()))), tol.loose());
    Ok(r)
}

/// `Q = id1(n)` with unitor multiplication and identity unit.
pub fn trivial_qsystem(n: usize) -> QSystemData {
    let q = id1(n);
    QSystemData { m: unitor_left(&q), i: id2(&q), q }
}

/// `X ⊠ X̄` with `m = 1 ⊠ ev ⊠ 1` and `i = coev`.
pub fn qsystem_from_dual(d: &DualPair) -> Result<QSystemData> {
    let mut m = Diagram::on(&[d.x.clone(), d.xbar.clone(), d.x.clone(), d.xbar.clone()])?;
    m.apply(1, 2, &d.ev, &[])?;
    let m = m.finish()?;
    QSystemData::new(hcomp1(&d.x, &d.xbar)?, m, d.coev.clone())
}

/// `(ev_Q, coev_Q) = (i† m, m† i)`.
pub fn canonical_pairing(q: &QSystemData) -> Result<(BlockTwoCell, BlockTwoCell)> {
    Ok((vcomp(&dagger2(&q.i), &q.m)?, vcomp(&dagger2(&q.m), &q.i)?))
}

/// Sparse view of a multiplication `m: Q⊠Q → Q`, used to contract basis
/// vectors instead of forming whiskered matrices on `Q⊠Q⊠Q`.
pub(crate) struct ProductTable {
    n: usize,
    pair: Vec<Vec<Option<usize>>>,
    pairs: Vec<(usize, usize)>,
    /// Nonzero entries of each column of `m`, indexed by pair.
    cols: Vec<Vec<(usize, C64)>>,
    /// Nonzero entries of each row of `m`: `(pair, value)`.
    rows: Vec<Vec<(usize, C64)>>,
}

type SparseVec = Vec<(usize, C64)>;

fn column(m: &ComplexMatrix, j: usize) -> SparseVec {
    (0..m.nrows()).filter(|&r| m[(r, j)] != C64::new(0.0, 0.0)).map(|r| (r, m[(r, j)])).collect()
}

fn dist_sq(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum()
}

impl ProductTable {
    pub(crate) fn new(q: &GradedOneCell, m: &BlockTwoCell) -> Self {
        let n = q.dim();
        let pairs = compatible_pairs(q, q);
        let mut pair = vec![vec![None; n]; n];
        for (k, &(a, b)) in pairs.iter().enumerate() {
            pair[a][b] = Some(k);
        }
        let mat = m.mat();
        let cols: Vec<SparseVec> = (0..pairs.len()).map(|k| column(mat, k)).collect();
        let mut rows = vec![Vec::new(); n];
        for (k, col) in cols.iter().enumerate() {
            for &(r, z) in col {
                rows[r].push((k, z));
            }
        }
        ProductTable { n, pair, pairs, cols, rows }
    }

    /// `out += m(u ⊗ v)`.
    fn mul_into(&self, u: &[(usize, C64)], v: &[(usize, C64)], out: &mut [C64]) {
        for &(a, x) in u {
            for &(b, y) in v {
                if let Some(k) = self.pair[a][b] {
                    let xy = x * y;
                    for &(r, z) in &self.cols[k] {
                        out[r] += xy * z;
                    }
                }
            }
        }
    }

    /// `out += m(u ⊗ v)` into a sparse accumulator.
    fn mul_acc(&self, u: &[(usize, C64)], v: &[(usize, C64)], out: &mut SparseAcc) {
        for &(a, x) in u {
            for &(b, y) in v {
                if let Some(k) = self.pair[a][b] {
                    let xy = x * y;
                    for &(r, z) in &self.cols[k] {
                        out.add(r, xy * z);
                    }
                }
            }
        }
    }

    fn mul(&self, u: &[(usize, C64)], v: &[(usize, C64)]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.n];
        self.mul_into(u, v, &mut out);
        out
    }
}

/// Dense accumulator that remembers which entries were written.
struct SparseAcc {
    vals: Vec<C64>,
    touched: Vec<usize>,
    seen: Vec<bool>,
}

impl SparseAcc {
    fn new(n: usize) -> Self {
        SparseAcc { vals: vec![C64::new(0.0, 0.0); n], touched: Vec::new(), seen: vec![false; n] }
    }

    fn add(&mut self, k: usize, z: C64) {
        if !self.seen[k] {
            self.seen[k] = true;
            self.touched.push(k);
        }
        self.vals[k] += z;
    }

    /// `‖self - other‖²` over the union of written entries.
    fn dist_sq(&self, other: &SparseAcc) -> f64 {
        let mine: f64 = self.touched.iter().map(|&k| (self.vals[k] - other.vals[k]).norm_sqr()).sum();
        let theirs: f64 = other.touched.iter().filter(|&&k| !self.seen[k]).map(|&k| other.vals[k].norm_sqr()).sum();
        mine + theirs
    }

    fn clear(&mut self) {
        for &k in &self.touched {
            self.vals[k] = C64::new(0.0, 0.0);
            self.seen[k] = false;
        }
        self.touched.clear();
    }
}

fn unit(k: usize) -> [(usize, C64); 1] {
    [(k, C64::new(1.0, 0.0))]
}

/// Residuals of associativity, unitality, Frobenius and separability.
pub fn check_qsystem(q: &QSystemData, tol: Tolerance) -> Result<Report> {
    QSystemData::new(q.q.clone(), q.m.clone(), q.i.clone())?;
    let t = ProductTable::new(&q.q, &q.m);
    let n = t.n;
    let qq = &q.q;
    let zero = C64::new(0.0, 0.0);
    let mut r = Report::new();

    let mut by_row: Vec<Vec<usize>> = vec![Vec::new(); qq.tgt()];
    for c in 0..n {
        by_row[qq.row(c)].push(c);
    }
    let mut acc = 0.0;
    let (mut lhs, mut rhs) = (SparseAcc::new(n), SparseAcc::new(n));
    for (k, &(a, b)) in t.pairs.iter().enumerate() {
        for &c in &by_row[qq.col(b)] {
            t.mul_acc(&t.cols[k], &unit(c), &mut lhs);
            if let Some(j) = t.pair[b][c] {
                t.mul_acc(&unit(a), &t.cols[j], &mut rhs);
            }
            acc += lhs.dist_sq(&rhs);
            lhs.clear();
            rhs.clear();
        }
    }
    r.push("Q1 associativity", "m(m⊠1) = m(1⊠m)", libm::sqrt(acc), tol.atol);

    let units: Vec<SparseVec> = (0..q.base()).map(|j| column(q.i.mat(), j)).collect();
    let (mut left, mut right) = (0.0, 0.0);
    for a in 0..n {
        let mut e = vec![zero; n];
        e[a] = C64::new(1.0, 0.0);
        left += dist_sq(&t.mul(&units[qq.row(a)], &unit(a)), &e);
        right += dist_sq(&t.mul(&unit(a), &units[qq.col(a)]), &e);
    }
    r.push("Q2 left unitality", "m(i⊠1) = λ", libm::sqrt(left), tol.atol);
    r.push("Q2 right unitality", "m(1⊠i) = ρ", libm::sqrt(right), tol.atol);

    let np = t.pairs.len();
    let (mut fl, mut fr) = (0.0, 0.0);
    let mut mm = SparseAcc::new(np);
    let mut lhs = SparseAcc::new(np);
    let mut rhs = SparseAcc::new(np);
    for (k, &(a, b)) in t.pairs.iter().enumerate() {
        for &(s, y) in &t.cols[k] {
            for &(k2, z) in &t.rows[s] {
                mm.add(k2, y * z.conj());
            }
        }
        // (1⊠m)(m†⊠1): split a, multiply its right factor with b
        for &(k1, z) in &t.rows[a] {
            let (u, v) = t.pairs[k1];
            if let Some(j) = t.pair[v][b] {
                for &(w, y) in &t.cols[j] {
                    if let Some(out) = t.pair[u][w] {
                        lhs.add(out, z.conj() * y);
                    }
                }
            }
        }
        // (m⊠1)(1⊠m†): split b, multiply a with its left factor
        for &(k1, z) in &t.rows[b] {
            let (v, w) = t.pairs[k1];
            if let Some(j) = t.pair[a][v] {
                for &(u, y) in &t.cols[j] {
                    if let Some(out) = t.pair[u][w] {
                        rhs.add(out, z.conj() * y);
                    }
                }
            }
        }
        fl += lhs.dist_sq(&mm);
        fr += rhs.dist_sq(&mm);
        mm.clear();
        lhs.clear();
        rhs.clear();
    }
    r.push("Q3 Frobenius left", "(1⊠m)(m†⊠1) = m†m", libm::sqrt(fl), tol.atol);
    r.push("Q3 Frobenius right", "(m⊠1)(1⊠m†) = m†m", libm::sqrt(fr), tol.atol);

    let mut mmd = numeric::zeros(n, n);
    for (rr, row) in t.rows.iter().enumerate() {
        for &(k, z) in row {
            for &(s, y) in &t.cols[k] {
                mmd[(rr, s)] += z * y.conj();
            }
        }
    }
    r.push("Q4 separability", "m m† = 1", numeric::residual(&mmd, &numeric::identity(n)), tol.atol);

    // i†i is not constrained by the axioms; record its size.
    let ii = vcomp(&dagger2(&q.i), &q.i)?;
    r.note("i†i norm", numeric::frob(ii.mat()));
    Ok(r)
}

/// A `Q`-`P` bimodule `X` with `λ: Q⊠X → X` and `ρ: X⊠P → X`.
#[derive(Debug, Clone, PartialEq)]
pub struct BimoduleData {
    pub left: QSystemData,
    pub right: QSystemData,
    pub x: GradedOneCell,
    pub lambda: BlockTwoCell,
    pub rho: BlockTwoCell,
}

impl BimoduleData {
    pub fn new(
        left: QSystemData,
        right: QSystemData,
        x: GradedOneCell,
        lambda: BlockTwoCell,
        rho: BlockTwoCell,
    ) -> Result<Self> {
        if lambda.source() != &hcomp1(&left.q, &x)? || lambda.target() != &x {
            return Err(Error::CellMismatch("left action must map Q⊠X to X".into()));
        }
        if rho.source() != &hcomp1(&x, &right.q)? || rho.target() != &x {
            return Err(Error::CellMismatch("right action must map X⊠P to X".into()));
        }
        Ok(BimoduleData { left, right, x, lambda, rho })
    }

    /// `Q` acting on itself by multiplication from both sides.
    pub fn regular(q: &QSystemData) -> Self {
        BimoduleData { left: q.clone(), right: q.clone(), x: q.q.clone(), lambda: q.m.clone(), rho: q.m.clone() }
    }

    /// `X` over trivial Q-systems with unitor actions.
    pub fn trivial(x: &GradedOneCell) -> Self {
        BimoduleData {
            left: trivial_qsystem(x.tgt()),
            right: trivial_qsystem(x.src()),
            x: x.clone(),
            lambda: unitor_left(x),
            rho: unitor_right(x),
        }
    }
}

/// Residuals of the bimodule axioms: three associativity equations, two
/// unitality equations, the two Frobenius conditions and separability.
pub fn check_bimodule(b: &BimoduleData, tol: Tolerance) -> Result<Report> {
    let x1 = id2(&b.x);
    let q1 = id2(&b.left.q);
    let p1 = id2(&b.right.q);
    let (l, rh) = (&b.lambda, &b.rho);
    let (ld, rd) = (dagger2(l), dagger2(rh));
    let mut r = Report::new();

    let a = vcomp(l, &hcomp2(&q1, l)?)?.distance(&vcomp(l, &hcomp2(&b.left.m, &x1)?)?);
    r.push("B1 left associativity", "λ(1⊠λ) = λ(m⊠1)", a, tol.atol);
    let a = vcomp(rh, &hcomp2(rh, &p1)?)?.distance(&vcomp(rh, &hcomp2(&x1, &b.right.m)?)?);
    r.push("B1 right associativity", "ρ(ρ⊠1) = ρ(1⊠m)", a, tol.atol);
    let a = vcomp(l, &hcomp2(&q1, rh)?)?.distance(&vcomp(rh, &hcomp2(l, &p1)?)?);
    r.push("B1 commuting actions", "λ(1⊠ρ) = ρ(λ⊠1)", a, tol.atol);

    let u = vcomp(l, &hcomp2(&b.left.i, &x1)?)?.distance(&unitor_left(&b.x));
    r.push("B2 left unitality", "λ(i⊠1) = λ_X", u, tol.atol);
    let u = vcomp(rh, &hcomp2(&x1, &b.right.i)?)?.distance(&unitor_right(&b.x));
    r.push("B2 right unitality", "ρ(1⊠i) = ρ_X", u, tol.atol);

    let ll = vcomp(&ld, l)?;
    let f1 = vcomp(&hcomp2(&b.left.m, &x1)?, &hcomp2(&q1, &ld)?)?.distance(&ll);
    let f2 = vcomp(&hcomp2(&q1, l)?, &hcomp2(&dagger2(&b.left.m), &x1)?)?.distance(&ll);
    r.push("B3 left Frobenius", "(m⊠1)(1⊠λ†) = λ†λ = (1⊠λ)(m†⊠1)", f1.max(f2), tol.atol);
    let rr = vcomp(&rd, rh)?;
    let f1 = vcomp(&hcomp2(&x1, &b.right.m)?, &hcomp2(&rd, &p1)?)?.distance(&rr);
    let f2 = vcomp(&hcomp2(rh, &p1)?, &hcomp2(&x1, &dagger2(&b.right.m))?)?.distance(&rr);
    r.push("B3 right Frobenius", "(1⊠m)(ρ†⊠1) = ρ†ρ = (ρ⊠1)(1⊠m†)", f1.max(f2), tol.atol);

    let s = vcomp(l, &ld)?.distance(&x1).max(vcomp(rh, &rd)?.distance(&x1));
    r.push("B4 separability", "λλ† = 1 = ρρ†", s, tol.atol);
    Ok(r)
}

/// Residuals of `f λ_X = λ_Y (1⊠f)` and `f ρ_X = ρ_Y (f⊠1)`.
pub fn check_intertwiner(f: &BlockTwoCell, src: &BimoduleData, dst: &BimoduleData, tol: Tolerance) -> Result<Report> {
    if f.source() != &src.x || f.target() != &dst.x {
        return Err(Error::CellMismatch("intertwiner must map the source bimodule to the target".into()));
    }
    let mut r = Report::new();
    let lhs = vcomp(f, &src.lambda)?;
    let rhs = vcomp(&dst.lambda, &hcomp2(&id2(&src.left.q), f)?)?;
    r.push("left intertwining", "f λ = λ (1⊠f)", lhs.distance(&rhs), tol.atol);
    let lhs = vcomp(f, &src.rho)?;
    let rhs = vcomp(&dst.rho, &hcomp2(f, &id2(&src.right.q))?)?;
    r.push("right intertwining", "f ρ = ρ (f⊠1)", lhs.distance(&rhs), tol.atol);
    Ok(r)
}

/// The separability idempotent `(ρ_X ⊠ λ_Y)(1 ⊠ m†i ⊠ 1)` on `X ⊠ Y`.
pub fn separability_idempotent(xb: &BimoduleData, yb: &BimoduleData) -> Result<BlockTwoCell> {
    if xb.right != yb.left {
        return Err(Error::CellMismatch("relative tensor needs a common Q-system in the middle".into()));
    }
    let p = &xb.right;
    let copair = vcomp(&dagger2(&p.m), &p.i)?;
    let mut d = Diagram::on(&[xb.x.clone(), yb.x.clone()])?;
    d.apply(1, 0, &copair, &[p.q.clone(), p.q.clone()])?;
    d.apply(0, 2, &xb.rho, core::slice::from_ref(&xb.x))?;
    d.apply(1, 2, &yb.lambda, core::slice::from_ref(&yb.x))?;
    d.finish()
}

/// `X ⊠_P Y` together with the coisometry `r: X ⊠ Y → Z`, `r†r = p`, `r r† = 1`.
pub fn relative_tensor(xb: &BimoduleData, yb: &BimoduleData, tol: Tolerance) -> Result<(GradedOneCell, BlockTwoCell)> {
    let p = separability_idempotent(xb, yb)?;
    let (z, u) = split_projection(p.source(), &p, tol)?;
    Ok((z, dagger2(&u)))
}

/// Residuals of `g` being a unitary algebra isomorphism `a.Q → b.Q`.
pub fn check_qsystem_iso(g: &BlockTwoCell, a: &QSystemData, b: &QSystemData, tol: Tolerance) -> Result<Report> {
    if g.source() != &a.q || g.target() != &b.q {
        return Err(Error::CellMismatch("isomorphism must map the first Q-system to the second".into()));
    }
    let mut r = Report::new();
    r.push("unitary", "γ†γ = 1 = γγ†", g.unitarity_residual(), tol.loose());
    let ta = ProductTable::new(&a.q, &a.m);
    let tb = ProductTable::new(&b.q, &b.m);
    let images: Vec<SparseVec> = (0..a.q.dim()).map(|u| column(g.mat(), u)).collect();
    let mut acc = 0.0;
    for (k, &(u, v)) in ta.pairs.iter().enumerate() {
        let mut lhs = vec![C64::new(0.0, 0.0); tb.n];
        for &(s, z) in &ta.cols[k] {
            for &(t, y) in &images[s] {
                lhs[t] += y * z;
            }
        }
        acc += dist_sq(&lhs, &tb.mul(&images[u], &images[v]));
    }
    r.push("multiplicative", "γ m = m (γ⊠γ)", libm::sqrt(acc), tol.loose());
    r.push("unital", "γ i = i", vcomp(g, &a.i)?.distance(&b.i), tol.loose());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{c, residual};

    fn cell(src: usize, tgt: usize, g: &[(usize, usize)]) -> GradedOneCell {
        GradedOneCell::new(src, tgt, g.to_vec()).unwrap()
    }

    #[test]
    fn trivial_qsystem_is_exact() {
        for n in 1..4 {
            let q = trivial_qsystem(n);
            let r = check_qsystem(&q, Tolerance::default()).unwrap();
            assert_eq!(r.max_residual(), 0.0);
        }
        let q = trivial_qsystem(1);
        assert_eq!(q.m.mat(), &numeric::identity(1));
        assert_eq!(q.i.mat(), &numeric::identity(1));
    }

    #[test]
    fn dual_of_unit_gives_trivial_qsystem() {
        let q = qsystem_from_dual(&DualPair::standard(&id1(3)).unwrap()).unwrap();
        let t = trivial_qsystem(3);
        assert!(q.m.distance(&t.m) < 1e-15 && q.i.distance(&t.i) < 1e-15);
    }

    #[test]
    fn matrix_algebra_qsystem() {
        let x = cell(1, 1, &[(0, 0), (0, 0)]);
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        assert_eq!(q.q.dim(), 4);
        let mm = q.m.mat() * q.m.mat().adjoint();
        assert!(residual(&mm, &numeric::identity(4)) < 1e-14);
        // m = 2^{-1/2} times matrix-unit multiplication E_ab E_cd = δ_bc E_ad
        let s = 1.0 / libm::sqrt(2.0);
        assert!((q.m.mat()[(0, 0)].re - s).abs() < 1e-15);
        assert!(check_qsystem(&q, Tolerance::default()).unwrap().passed());
        let (ev, coev) = canonical_pairing(&q).unwrap();
        let scalar = vcomp(&ev, &coev).unwrap();
        // i†m m†i = i†i = ‖Σ_q √2 x_q⊗x̄_q‖² = 4
        assert!(residual(scalar.mat(), &(numeric::identity(1) * c(4.0, 0.0))) < 1e-14);
    }

    #[test]
    fn perturbed_multiplication_fails() {
        let x = cell(2, 3, &[(0, 0), (1, 0), (2, 1), (0, 1)]);
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        assert!(check_qsystem(&q, Tolerance::default()).unwrap().passed());
        let mut bad = q.clone();
        let mut m = bad.m.mat().clone();
        m[(0, 0)] += c(1e-3, 0.0);
        bad.m = BlockTwoCell::new(bad.m.source().clone(), bad.m.target().clone(), m).unwrap();
        assert!(!check_qsystem(&bad, Tolerance::default()).unwrap().passed());
    }

    #[test]
    fn regular_and_trivial_bimodules() {
        let x = cell(2, 2, &[(0, 0), (1, 0), (1, 1)]);
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        assert!(check_bimodule(&BimoduleData::regular(&q), Tolerance::default()).unwrap().passed());
        let y = cell(2, 3, &[(0, 0), (2, 1)]);
        let r = check_bimodule(&BimoduleData::trivial(&y), Tolerance::default()).unwrap();
        assert_eq!(r.max_residual(), 0.0);
    }

    #[test]
    fn intertwiners() {
        let y = cell(2, 3, &[(0, 0), (2, 1), (2, 1)]);
        let b = BimoduleData::trivial(&y);
        let r = check_intertwiner(&id2(&y), &b, &b, Tolerance::default()).unwrap();
        assert_eq!(r.max_residual(), 0.0);
        let x = cell(1, 1, &[(0, 0), (0, 0)]);
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        let reg = BimoduleData::regular(&q);
        // right multiplication by a fixed element commutes with the left action only
        let mut mat = numeric::zeros(4, 4);
        for k in 0..4 {
            mat[(k, (k + 1) % 4)] = c(1.0, 0.0);
        }
        let f = BlockTwoCell::new(q.q.clone(), q.q.clone(), mat).unwrap();
        assert!(!check_intertwiner(&f, &reg, &reg, Tolerance::default()).unwrap().passed());
    }

    #[test]
    fn relative_tensor_over_itself() {
        let x = cell(1, 2, &[(0, 0), (1, 0), (1, 0)]);
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        let reg = BimoduleData::regular(&q);
        let (z, r) = relative_tensor(&reg, &reg, Tolerance::default()).unwrap();
        assert_eq!(z.dim(), q.q.dim());
        let rr = vcomp(&r, &dagger2(&r)).unwrap();
        assert!(rr.distance(&id2(&z)) < 1e-9);
    }

    #[test]
    fn relative_tensor_over_trivial_is_plain_composite() {
        let x = cell(2, 3, &[(0, 0), (2, 1)]);
        let y = cell(1, 2, &[(0, 0), (1, 0), (1, 0)]);
        let (xb, yb) = (BimoduleData::trivial(&x), BimoduleData::trivial(&y));
        let p = separability_idempotent(&xb, &yb).unwrap();
        assert!(p.distance(&id2(&hcomp1(&x, &y).unwrap())) < 1e-15);
        let (z, _) = relative_tensor(&xb, &yb, Tolerance::default()).unwrap();
        assert_eq!(z.sector_dims(), hcomp1(&x, &y).unwrap().sector_dims());
    }
}
