//! *-2-functors from a presented 2-category into graded matrices.

use alloc::format;
use alloc::vec::Vec;

use super::presentation::{Expr, Path, PresentedTwoCat};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::mathilb::{dagger2, hcomp1, hcomp1_all, id1, id2, unitor_left, vcomp, BlockTwoCell, GradedOneCell};
use crate::numeric::Tolerance;
use crate::report::Report;

/// A *-2-functor, evaluated on paths of generators.
pub trait TwoFunctor {
    /// Number of indices of the image 0-cell.
    fn zero_cell(&self, a: usize) -> usize;
    fn one_cell(&self, path: &Path) -> Result<GradedOneCell>;
    /// Image of a generator 2-cell.
    fn two_cell(&self, f: usize) -> Result<BlockTwoCell>;
    /// `F²_{P,Q}: F(P) ⊠ F(Q) → F(P ⊠ Q)`.
    fn tensorator(&self, p: &Path, q: &Path) -> Result<BlockTwoCell>;
    /// `F¹_a: 1_{F(a)} → F(1_a)`.
    fn unit(&self, a: usize) -> Result<BlockTwoCell>;
}

/// Generator images, extended freely: `F(X ⊠ Y) = F(X) ⊠ F(Y)` with identity
/// tensorators, `F(1_a) = 1_{F(a)}` and `F¹ = id`. Only `F²_{1,X}` is nontrivial:
/// it is the left unitor, since `1 ⊠ F(X)` reorders the basis of `F(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctorData {
    pub on0: Vec<usize>,
    pub on1: Vec<GradedOneCell>,
    pub on2: Vec<BlockTwoCell>,
    ends: Vec<(usize, usize)>,
}

impl FunctorData {
    pub fn new(c: &PresentedTwoCat, on0: Vec<usize>, on1: Vec<GradedOneCell>, on2: Vec<BlockTwoCell>) -> Result<Self> {
        c.validate()?;
        if on0.len() != c.zero_cells.len() || on1.len() != c.gen_one_cells.len() || on2.len() != c.gen_two_cells.len() {
            return Err(Error::CellMismatch("functor data does not cover every generator".into()));
        }
        if on0.contains(&0) {
            return Err(Error::CellMismatch("0-cell images must be positive".into()));
        }
        for (g, x) in c.gen_one_cells.iter().zip(&on1) {
            if x.src() != on0[g.src] || x.tgt() != on0[g.tgt] {
                return Err(Error::CellMismatch(format!("image of {} has the wrong endpoints", g.label)));
            }
        }
        let ends = c.gen_one_cells.iter().map(|g| (g.src, g.tgt)).collect();
        let f = FunctorData { on0, on1, on2, ends };
        for (g, img) in c.gen_two_cells.iter().zip(&f.on2) {
            if img.source() != &f.one_cell(&g.source)? || img.target() != &f.one_cell(&g.target)? {
                return Err(Error::CellMismatch(format!("image of 2-cell {} is not between the path images", g.label)));
            }
        }
        Ok(f)
    }

    fn check(&self, path: &Path) -> Result<()> {
        let mut at = path.tgt;
        for &x in &path.gens {
            match self.ends.get(x) {
                Some(&(s, t)) if t == at => at = s,
                _ => return Err(Error::IllTypedPath(format!("generator {} does not fit the path", x + 1))),
            }
        }
        if at != path.src || path.src >= self.on0.len() || path.tgt >= self.on0.len() {
            return Err(Error::IllTypedPath("path endpoints do not match its generators".into()));
        }
        Ok(())
    }
}

impl TwoFunctor for FunctorData {
    fn zero_cell(&self, a: usize) -> usize {
        self.on0[a]
    }

    fn one_cell(&self, path: &Path) -> Result<GradedOneCell> {
        one_cell_image(self, path)
    }

    fn two_cell(&self, f: usize) -> Result<BlockTwoCell> {
        self.on2.get(f).cloned().ok_or_else(|| Error::CellMismatch(format!("no 2-cell generator {}", f + 1)))
    }

    fn tensorator(&self, p: &Path, q: &Path) -> Result<BlockTwoCell> {
        p.concat(q)?;
        let fq = self.one_cell(q)?;
        if p.is_empty() {
            Ok(unitor_left(&fq))
        } else {
            let fp = self.one_cell(p)?;
            Ok(id2(&hcomp1(&fp, &fq)?))
        }
    }

    fn unit(&self, a: usize) -> Result<BlockTwoCell> {
        Ok(id2(&id1(self.on0[a])))
    }
}

/// Free extension of a [`FunctorData`] along a path; the unit path maps to `id1`.
pub fn one_cell_image(f: &FunctorData, path: &Path) -> Result<GradedOneCell> {
    f.check(path)?;
    if path.is_empty() {
        return Ok(id1(f.on0[path.src]));
    }
    let word: Vec<GradedOneCell> = path.gens.iter().map(|&x| f.on1[x].clone()).collect();
    hcomp1_all(&word)
}

/// Image of a formal expression, conjugating horizontal composites by tensorators.
pub fn eval_expr(c: &PresentedTwoCat, f: &dyn TwoFunctor, e: &Expr) -> Result<BlockTwoCell> {
    match e {
        Expr::Gen(k) => f.two_cell(*k),
        Expr::Id(p) => Ok(id2(&f.one_cell(p)?)),
        Expr::Comp(g, h) => vcomp(&eval_expr(c, f, g)?, &eval_expr(c, f, h)?),
        Expr::Dagger(g) => Ok(dagger2(&eval_expr(c, f, g)?)),
        Expr::Tensor(g, h) => {
            let (gs, gt) = g.boundary(c)?;
            let (hs, ht) = h.boundary(c)?;
            let (fg, fh) = (eval_expr(c, f, g)?, eval_expr(c, f, h)?);
            let mut d = Diagram::on(&[f.one_cell(&gs.concat(&hs)?)?])?;
            let (fgs, fhs) = (f.one_cell(&gs)?, f.one_cell(&hs)?);
            d.apply(0, 1, &dagger2(&f.tensorator(&gs, &hs)?), &[fgs, fhs])?;
            d.apply(0, 1, &fg, &[f.one_cell(&gt)?])?;
            d.apply(1, 1, &fh, &[f.one_cell(&ht)?])?;
            d.apply(0, 2, &f.tensorator(&gt, &ht)?, &[f.one_cell(&gt.concat(&ht)?)?])?;
            d.finish()
        }
    }
}

/// `F²_{P,Q} · (F¹ ⊠ id)` or `F²_{P,Q} · (id ⊠ F¹)` compared with the unitor,
/// as a 2-cell `F(X) → F(X)` after the implicit unit insertion.
fn unit_composite(f: &dyn TwoFunctor, p: &Path, left: bool) -> Result<BlockTwoCell> {
    let fx = f.one_cell(p)?;
    let mut d = Diagram::on(core::slice::from_ref(&fx))?;
    if left {
        let one = Path::empty(p.tgt);
        d.apply(0, 0, &f.unit(p.tgt)?, &[f.one_cell(&one)?])?;
        d.apply(0, 2, &f.tensorator(&one, p)?, &[fx])?;
    } else {
        let one = Path::empty(p.src);
        d.apply(1, 0, &f.unit(p.src)?, &[f.one_cell(&one)?])?;
        d.apply(0, 2, &f.tensorator(p, &one)?, &[fx])?;
    }
    d.finish()
}

/// `F²_{PQ,R}(F²_{P,Q} ⊠ id)` and `F²_{P,QR}(id ⊠ F²_{Q,R})` as 2-cells out of `F(P)⊠F(Q)⊠F(R)`.
pub(crate) fn associator_sides(f: &dyn TwoFunctor, p: &Path, q: &Path, r: &Path) -> Result<(BlockTwoCell, BlockTwoCell)> {
    let pq = p.concat(q)?;
    let qr = q.concat(r)?;
    let pqr = pq.concat(r)?;
    let word = [f.one_cell(p)?, f.one_cell(q)?, f.one_cell(r)?];
    let mut l = Diagram::on(&word)?;
    l.apply(0, 2, &f.tensorator(p, q)?, &[f.one_cell(&pq)?])?;
    l.apply(0, 2, &f.tensorator(&pq, r)?, &[f.one_cell(&pqr)?])?;
    let mut rd = Diagram::on(&word)?;
    rd.apply(1, 2, &f.tensorator(q, r)?, &[f.one_cell(&qr)?])?;
    rd.apply(0, 2, &f.tensorator(p, &qr)?, &[f.one_cell(&pqr)?])?;
    Ok((l.finish()?, rd.finish()?))
}

/// Residuals of the *-2-functor axioms on generators, composable generator
/// pairs and triples, and the relations of the presentation.
pub fn check_functor(c: &PresentedTwoCat, f: &dyn TwoFunctor, tol: Tolerance) -> Result<Report> {
    c.validate()?;
    let mut r = Report::new();
    for (k, g) in c.gen_one_cells.iter().enumerate() {
        let img = f.one_cell(&c.generator_path(k))?;
        if img.src() != f.zero_cell(g.src) || img.tgt() != f.zero_cell(g.tgt) {
            return Err(Error::CellMismatch(format!("image of {} has the wrong endpoints", g.label)));
        }
    }
    for (k, g) in c.gen_two_cells.iter().enumerate() {
        let img = f.two_cell(k)?;
        if img.source() != &f.one_cell(&g.source)? || img.target() != &f.one_cell(&g.target)? {
            return Err(Error::CellMismatch(format!("image of 2-cell {} is not between the path images", g.label)));
        }
    }
    for a in 0..c.zero_cells.len() {
        let u = f.unit(a)?;
        r.push(format!("F¹ unitary {}", c.zero_cells[a]), "F¹_a unitary", u.unitarity_residual(), tol.atol);
    }
    for (x, y) in c.composable_pairs() {
        let (px, py) = (c.generator_path(x), c.generator_path(y));
        let t = f.tensorator(&px, &py)?;
        let name = c.path_label(&px.concat(&py)?);
        r.push(format!("F² unitary {name}"), "F²_{X,Y} unitary", t.unitarity_residual(), tol.atol);
    }
    for (x, y, z) in c.composable_triples() {
        let (px, py, pz) = (c.generator_path(x), c.generator_path(y), c.generator_path(z));
        let (lhs, rhs) = associator_sides(f, &px, &py, &pz)?;
        let name = c.path_label(&px.concat(&py)?.concat(&pz)?);
        r.push(format!("associativity {name}"), "F²_{XY,Z}(F²_{X,Y}⊠1) = F²_{X,YZ}(1⊠F²_{Y,Z})", lhs.distance(&rhs), tol.atol);
    }
    for k in 0..c.gen_one_cells.len() {
        let p = c.generator_path(k);
        let id = id2(&f.one_cell(&p)?);
        let label = &c.gen_one_cells[k].label;
        r.push(format!("right unit {label}"), "F(ρ) F²_{X,1}(1⊠F¹) = ρ", unit_composite(f, &p, false)?.distance(&id), tol.atol);
        r.push(format!("left unit {label}"), "F(λ) F²_{1,X}(F¹⊠1) = λ", unit_composite(f, &p, true)?.distance(&id), tol.atol);
    }
    for (k, (lhs, rhs)) in c.relations.iter().enumerate() {
        let d = eval_expr(c, f, lhs)?.distance(&eval_expr(c, f, rhs)?);
        r.push(format!("relation {}", k + 1), "F(lhs) = F(rhs)", d, tol.atol);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::super::presentation::{OneCellGen, TwoCellGen};
    use super::*;
    use crate::numeric::c as cx;
    use crate::random;
    use alloc::vec;

    fn loop_cat() -> PresentedTwoCat {
        PresentedTwoCat {
            zero_cells: vec!["a".into(), "b".into()],
            gen_one_cells: vec![
                OneCellGen { label: "X".into(), src: 0, tgt: 1 },
                OneCellGen { label: "Y".into(), src: 1, tgt: 0 },
                OneCellGen { label: "Z".into(), src: 0, tgt: 0 },
            ],
            gen_two_cells: Vec::new(),
            relations: Vec::new(),
        }
    }

    fn random_functor(c: &PresentedTwoCat, seed: u64) -> FunctorData {
        let mut rng = random::seeded(seed);
        let on0 = vec![2, 3];
        let on1 = c.gen_one_cells.iter().map(|g| random::one_cell(&mut rng, on0[g.src], on0[g.tgt], 2, false)).collect();
        FunctorData::new(c, on0, on1, Vec::new()).unwrap()
    }

    #[test]
    fn constant_unit_functor_passes_exactly() {
        let c = loop_cat();
        let f = FunctorData::new(&c, vec![1, 1], vec![id1(1); 3], Vec::new()).unwrap();
        let r = check_functor(&c, &f, Tolerance::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.max_residual(), 0.0);
    }

    #[test]
    fn free_extension_passes() {
        let c = loop_cat();
        let f = random_functor(&c, 5);
        let r = check_functor(&c, &f, Tolerance::default()).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn path_images() {
        let c = loop_cat();
        let f = random_functor(&c, 9);
        assert_eq!(f.one_cell(&Path::empty(1)).unwrap(), id1(3));
        assert_eq!(f.one_cell(&c.generator_path(0)).unwrap(), f.on1[0]);
        let xy = f.one_cell(&c.path(&[0, 1]).unwrap()).unwrap();
        let dims = f.on1[0].sector_dims();
        let dims_y = f.on1[1].sector_dims();
        for ((i, k), n) in xy.sector_dims() {
            let expect: usize = (0..2).map(|j| dims.get(&(i, j)).copied().unwrap_or(0) * dims_y.get(&(j, k)).copied().unwrap_or(0)).sum();
            assert_eq!(n, expect);
        }
        assert!(matches!(f.one_cell(&Path { src: 0, tgt: 0, gens: vec![0] }), Err(Error::IllTypedPath(_))));
    }

    struct CorruptUnit(FunctorData);

    impl TwoFunctor for CorruptUnit {
        fn zero_cell(&self, a: usize) -> usize {
            self.0.zero_cell(a)
        }
        fn one_cell(&self, p: &Path) -> Result<GradedOneCell> {
            self.0.one_cell(p)
        }
        fn two_cell(&self, f: usize) -> Result<BlockTwoCell> {
            self.0.two_cell(f)
        }
        fn tensorator(&self, p: &Path, q: &Path) -> Result<BlockTwoCell> {
            self.0.tensorator(p, q)
        }
        fn unit(&self, a: usize) -> Result<BlockTwoCell> {
            Ok(self.0.unit(a)?.scale(cx(0.0, 1.0)))
        }
    }

    #[test]
    fn corrupted_unit_fails_unit_axioms() {
        let c = loop_cat();
        let f = CorruptUnit(random_functor(&c, 2));
        let r = check_functor(&c, &f, Tolerance::default()).unwrap();
        assert!(r.get("left unit X").unwrap().residual > 0.1);
        assert!(r.get("right unit Z").unwrap().residual > 0.1);
        assert!(r.get("F¹ unitary a").unwrap().passed());
    }

    #[test]
    fn relations_are_checked_on_images() {
        let mut c = loop_cat();
        let z = c.generator_path(2);
        c.gen_two_cells.push(TwoCellGen { label: "f".into(), source: z.clone(), target: z.clone() });
        c.relations.push((Expr::comp(Expr::dagger(Expr::Gen(0)), Expr::Gen(0)), Expr::Id(z.clone())));
        let base = random_functor(&loop_cat(), 4);
        let fz = base.on1[2].clone();
        let mut rng = random::seeded(1);
        let unitary = random::unitary_two_cell(&mut rng, &fz);
        let good = FunctorData::new(&c, base.on0.clone(), base.on1.clone(), vec![unitary]).unwrap();
        assert!(check_functor(&c, &good, Tolerance::default()).unwrap().passed());
        let generic = random::two_cell(&mut rng, &fz, &fz);
        let bad = FunctorData::new(&c, base.on0.clone(), base.on1.clone(), vec![generic]).unwrap();
        assert!(!check_functor(&c, &bad, Tolerance::default()).unwrap().get("relation 1").unwrap().passed());
    }

    #[test]
    fn tensor_expressions_match_hcomp_on_free_functors() {
        let mut c = loop_cat();
        let z = c.generator_path(2);
        c.gen_two_cells.push(TwoCellGen { label: "f".into(), source: z.clone(), target: z.clone() });
        let base = random_functor(&loop_cat(), 8);
        let mut rng = random::seeded(3);
        let fz = base.on1[2].clone();
        let img = random::two_cell(&mut rng, &fz, &fz);
        let f = FunctorData::new(&c, base.on0.clone(), base.on1.clone(), vec![img.clone()]).unwrap();
        let e = Expr::tensor(Expr::Gen(0), Expr::Gen(0));
        let direct = crate::mathilb::hcomp2(&img, &img).unwrap();
        assert!(eval_expr(&c, &f, &e).unwrap().distance(&direct) < 1e-12);
    }
}
