//! Splitting a Q-system `ψ` on a functor `F`: the functor `G`, and the
//! transformations `φ: F ⇒ G` and `φ̄: G ⇒ F` with `ψ ≅ φ̄ ⊗ φ`.
//!
//! At every 0-cell the Q-system `ψ_a` splits as `X_a ⊠ X̄_a` through
//! `G(a) = k_a`. Below, `x_a = X̄_a: F(a) → G(a)` and `x̄_a = X_a: G(a) → F(a)`,
//! so `ev_a: x_a ⊠ x̄_a → 1` and `coev_a: 1 → x̄_a ⊠ x_a`. For a path `P: a → b`,
//! `G(P)` is the range of a projection on `x_b ⊠ F(P) ⊠ x̄_a` built from `ψ_P`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::RefCell;

use super::endf::{check_endf_qsystem, EndFQSystem};
use super::functor::TwoFunctor;
use super::presentation::{Path, PresentedTwoCat};
use super::transformation::TransformationData;
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::mathilb::{dagger2, id1, id2, BlockTwoCell, GradedOneCell};
use crate::numeric::Tolerance;
use crate::qsystem::QSystemData;
use crate::splitting::{split_projection, split_qsystem_seeded, SplitResult};

#[derive(Debug)]
struct PathData {
    image: GradedOneCell,
    /// `p_P` on `x_b ⊠ F(P) ⊠ x̄_a`.
    projection: BlockTwoCell,
    /// Isometry `G(P) → x_b ⊠ F(P) ⊠ x̄_a` onto the range of `p_P`.
    iso: BlockTwoCell,
}

/// The split functor `G`, evaluated lazily on paths.
pub struct GConstruction<'a> {
    c: &'a PresentedTwoCat,
    f: &'a dyn TwoFunctor,
    q: &'a EndFQSystem,
    tol: Tolerance,
    splits: Vec<SplitResult>,
    qs: Vec<QSystemData>,
    cache: RefCell<BTreeMap<Path, Rc<PathData>>>,
}

impl core::fmt::Debug for GConstruction<'_> {
    fn fmt(&self, fm: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        fm.debug_struct("GConstruction").field("splits", &self.splits).finish_non_exhaustive()
    }
}

/// Split `q` on `f`, seeding the split at 0-cell `a` with `seed + a`.
/// Fails with [`Error::InvalidQSystem`] if `q` does not pass its axioms at `tol.loose()`.
pub fn construct_g<'a>(
    c: &'a PresentedTwoCat,
    f: &'a dyn TwoFunctor,
    q: &'a EndFQSystem,
    tol: Tolerance,
    seed: u64,
) -> Result<GConstruction<'a>> {
    c.validate()?;
    let r = check_endf_qsystem(c, q, f, tol)?.with_threshold(tol.loose());
    if let Some(bad) = r.failures().next() {
        return Err(Error::InvalidQSystem(format!("{} has residual {:.3e}", bad.name, bad.residual)));
    }
    let qs = (0..c.zero_cells.len()).map(|a| q.at(a)).collect::<Result<Vec<_>>>()?;
    let splits = qs
        .iter()
        .enumerate()
        .map(|(a, qa)| split_qsystem_seeded(qa, tol, seed.wrapping_add(a as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GConstruction { c, f, q, tol, splits, qs, cache: RefCell::new(BTreeMap::new()) })
}

impl<'a> GConstruction<'a> {
    pub fn presentation(&self) -> &'a PresentedTwoCat {
        self.c
    }

    pub fn source_functor(&self) -> &'a dyn TwoFunctor {
        self.f
    }

    pub fn qsystem(&self) -> &'a EndFQSystem {
        self.q
    }

    pub fn split(&self, a: usize) -> &SplitResult {
        &self.splits[a]
    }

    pub fn splits(&self) -> &[SplitResult] {
        &self.splits
    }

    /// The Q-system `(ψ_a, m_a, i_a)` at `a`.
    pub fn qsystem_at(&self, a: usize) -> &QSystemData {
        &self.qs[a]
    }

    /// `x_a: F(a) → G(a)`.
    pub fn x(&self, a: usize) -> &GradedOneCell {
        &self.splits[a].pair.xbar
    }

    /// `x̄_a: G(a) → F(a)`.
    pub fn xbar(&self, a: usize) -> &GradedOneCell {
        &self.splits[a].pair.x
    }

    fn ev(&self, a: usize) -> &BlockTwoCell {
        &self.splits[a].pair.ev
    }

    fn coev(&self, a: usize) -> &BlockTwoCell {
        &self.splits[a].pair.coev
    }

    fn gamma(&self, a: usize) -> &BlockTwoCell {
        &self.splits[a].gamma
    }

    fn psi(&self, a: usize) -> &GradedOneCell {
        &self.q.psi.comp0[a]
    }

    /// `ψ_P` for any path.
    pub fn psi_component(&self, p: &Path) -> Result<BlockTwoCell> {
        self.q.psi.component(self.c, self.f, self.f, p)
    }

    /// The word `x_b, F(P), x̄_a`.
    pub fn sandwich(&self, p: &Path) -> Result<[GradedOneCell; 3]> {
        Ok([self.x(p.tgt).clone(), self.f.one_cell(p)?, self.xbar(p.src).clone()])
    }

    fn data(&self, p: &Path) -> Result<Rc<PathData>> {
        if let Some(d) = self.cache.borrow().get(p) {
            return Ok(d.clone());
        }
        self.c.check_path(p)?;
        let (a, b) = (p.src, p.tgt);
        let mut d = Diagram::on(&self.sandwich(p)?)?;
        d.apply(3, 0, &dagger2(self.ev(a)), &[self.x(a).clone(), self.xbar(a).clone()])?;
        d.apply(2, 2, self.gamma(a), &[self.psi(a).clone()])?;
        d.apply(1, 2, &dagger2(&self.psi_component(p)?), &[self.psi(b).clone(), self.f.one_cell(p)?])?;
        d.apply(1, 1, &dagger2(self.gamma(b)), &[self.xbar(b).clone(), self.x(b).clone()])?;
        d.apply(0, 2, self.ev(b), &[])?;
        let projection = d.finish()?;
        let (image, iso) = if p.is_empty() {
            let mut u = Diagram::new(Vec::new(), self.splits[a].k)?;
            u.apply(0, 0, &dagger2(self.ev(a)), &[self.x(a).clone(), self.xbar(a).clone()])?;
            u.apply(1, 0, &self.f.unit(a)?, &[self.f.one_cell(p)?])?;
            (id1(self.splits[a].k), u.finish()?)
        } else {
            let loose = Tolerance { atol: self.tol.loose(), ..self.tol };
            split_projection(projection.source(), &projection, loose)?
        };
        let data = Rc::new(PathData { image, projection, iso });
        self.cache.borrow_mut().insert(p.clone(), data.clone());
        Ok(data)
    }

    /// `p_P`.
    pub fn projection(&self, p: &Path) -> Result<BlockTwoCell> {
        Ok(self.data(p)?.projection.clone())
    }

    /// `u_P: G(P) → x_b ⊠ F(P) ⊠ x̄_a`.
    pub fn iso(&self, p: &Path) -> Result<BlockTwoCell> {
        Ok(self.data(p)?.iso.clone())
    }

    /// `φ_P = u_P† (1 ⊠ coev_a): x_b ⊠ F(P) → G(P) ⊠ x_a`.
    pub fn phi_component(&self, p: &Path) -> Result<BlockTwoCell> {
        let a = p.src;
        let mut d = Diagram::on(&[self.x(p.tgt).clone(), self.f.one_cell(p)?])?;
        d.apply(2, 0, self.coev(a), &[self.xbar(a).clone(), self.x(a).clone()])?;
        d.apply(0, 3, &dagger2(&self.iso(p)?), &[self.one_cell(p)?])?;
        d.finish()
    }

    /// `φ̄_P = (coev_b† ⊠ 1)(1 ⊠ u_P): x̄_b ⊠ G(P) → F(P) ⊠ x̄_a`.
    pub fn phibar_component(&self, p: &Path) -> Result<BlockTwoCell> {
        let b = p.tgt;
        let mut d = Diagram::on(&[self.xbar(b).clone(), self.one_cell(p)?])?;
        d.apply(1, 1, &self.iso(p)?, &self.sandwich(p)?)?;
        d.apply(0, 2, &dagger2(self.coev(b)), &[])?;
        d.finish()
    }

    #[cfg(test)]
    pub(crate) fn corrupt_gamma_for_tests(&mut self, a: usize) {
        self.splits[a].gamma = self.splits[a].gamma.scale(crate::numeric::c(-1.0, 0.0));
        self.cache.borrow_mut().clear();
    }

    /// Paths whose components are stored explicitly: generators, composable
    /// generator pairs, and units.
    fn stored_paths(&self) -> Vec<Path> {
        let c = self.c;
        let mut out: Vec<Path> = (0..c.gen_one_cells.len()).map(|k| c.generator_path(k)).collect();
        for (x, y) in c.composable_pairs() {
            out.push(c.path(&[x, y]).expect("composable"));
        }
        out.extend((0..c.zero_cells.len()).map(Path::empty));
        out
    }

    /// `φ: F ⇒ G`.
    pub fn construct_phi(&self) -> Result<TransformationData> {
        let comp0 = (0..self.c.zero_cells.len()).map(|a| self.x(a).clone()).collect();
        let comp1 =
            self.stored_paths().into_iter().map(|p| Ok((p.clone(), self.phi_component(&p)?))).collect::<Result<_>>()?;
        Ok(TransformationData { comp0, comp1 })
    }

    /// `φ̄: G ⇒ F`.
    pub fn construct_phibar(&self) -> Result<TransformationData> {
        let comp0 = (0..self.c.zero_cells.len()).map(|a| self.xbar(a).clone()).collect();
        let comp1 = self
            .stored_paths()
            .into_iter()
            .map(|p| Ok((p.clone(), self.phibar_component(&p)?)))
            .collect::<Result<_>>()?;
        Ok(TransformationData { comp0, comp1 })
    }
}

impl TwoFunctor for GConstruction<'_> {
    fn zero_cell(&self, a: usize) -> usize {
        self.splits[a].k
    }

    fn one_cell(&self, p: &Path) -> Result<GradedOneCell> {
        Ok(self.data(p)?.image.clone())
    }

    /// `G(f) = u_Q† (1 ⊠ F(f) ⊠ 1) u_P`.
    fn two_cell(&self, k: usize) -> Result<BlockTwoCell> {
        let gen = self
            .c
            .gen_two_cells
            .get(k)
            .ok_or_else(|| Error::CellMismatch(format!("no 2-cell generator {}", k + 1)))?;
        let (p, q) = (&gen.source, &gen.target);
        let mut d = Diagram::on(&[self.one_cell(p)?])?;
        d.apply(0, 1, &self.iso(p)?, &self.sandwich(p)?)?;
        d.apply(1, 1, &self.f.two_cell(k)?, &[self.f.one_cell(q)?])?;
        d.apply(0, 3, &dagger2(&self.iso(q)?), &[self.one_cell(q)?])?;
        d.finish()
    }

    /// `G²_{P,Q} = u_{PQ}† (1 ⊠ F²_{P,Q} ⊠ 1)(1 ⊠ coev_a† ⊠ 1)(u_P ⊠ u_Q)`.
    fn tensorator(&self, p: &Path, q: &Path) -> Result<BlockTwoCell> {
        let pq = p.concat(q)?;
        let a = p.src;
        let mut d = Diagram::on(&[self.one_cell(p)?, self.one_cell(q)?])?;
        d.apply(1, 1, &self.iso(q)?, &self.sandwich(q)?)?;
        d.apply(0, 1, &self.iso(p)?, &self.sandwich(p)?)?;
        d.apply(2, 2, &dagger2(self.coev(a)), &[])?;
        d.apply(1, 2, &self.f.tensorator(p, q)?, &[self.f.one_cell(&pq)?])?;
        d.apply(0, 3, &dagger2(&self.iso(&pq)?), &[self.one_cell(&pq)?])?;
        d.finish()
    }

    fn unit(&self, a: usize) -> Result<BlockTwoCell> {
        Ok(id2(&id1(self.splits[a].k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcat::endf::constant_functor_scenario;
    use crate::funcat::functor::check_functor;
    use crate::funcat::presentation::OneCellGen;
    use crate::qsystem::{qsystem_from_dual, DualPair};
    use alloc::vec;

    fn cat() -> PresentedTwoCat {
        PresentedTwoCat {
            zero_cells: vec!["a".into(), "b".into()],
            gen_one_cells: vec![
                OneCellGen { label: "X".into(), src: 0, tgt: 1 },
                OneCellGen { label: "Y".into(), src: 1, tgt: 0 },
            ],
            ..Default::default()
        }
    }

    #[test]
    fn constant_scenario_gives_constant_g() {
        let c = cat();
        let x = GradedOneCell::new(2, 2, vec![(0, 0), (0, 0), (1, 1)]).unwrap();
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        let tol = Tolerance::default();
        let (f, e) = constant_functor_scenario(&c, &q, tol).unwrap();
        let g = construct_g(&c, &f, &e, tol, 7).unwrap();
        assert_eq!(g.zero_cell(0), 2);
        assert_eq!(g.zero_cell(0), g.zero_cell(1));
        let gx = g.one_cell(&c.generator_path(0)).unwrap();
        assert_eq!(gx.dim(), 2);
        let r = check_functor(&c, &g, tol).unwrap().with_threshold(tol.loose());
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn invalid_qsystem_is_rejected() {
        let c = cat();
        let x = GradedOneCell::new(1, 1, vec![(0, 0), (0, 0)]).unwrap();
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        let tol = Tolerance::default();
        let (f, mut e) = constant_functor_scenario(&c, &q, tol).unwrap();
        e.m.comp[1] = e.m.comp[1].scale(crate::numeric::c(1.5, 0.0));
        assert!(matches!(construct_g(&c, &f, &e, tol, 0), Err(Error::InvalidQSystem(_))));
    }

    fn random_f(c: &PresentedTwoCat, seed: u64) -> crate::funcat::functor::FunctorData {
        let mut rng = crate::random::seeded(seed);
        let on0 = vec![2, 3];
        let on1 = c
            .gen_one_cells
            .iter()
            .map(|g| crate::random::one_cell(&mut rng, on0[g.src], on0[g.tgt], 2, true))
            .collect();
        crate::funcat::functor::FunctorData::new(c, on0, on1, Vec::new()).unwrap()
    }

    #[test]
    fn trivial_qsystem_reproduces_f() {
        let c = cat();
        let f = random_f(&c, 1);
        let q = crate::funcat::endf::trivial_endf_qsystem(&c, &f).unwrap();
        let tol = Tolerance::default();
        let g = construct_g(&c, &f, &q, tol, 0).unwrap();
        for a in 0..2 {
            assert_eq!(g.zero_cell(a), f.zero_cell(a));
            assert_eq!(crate::splitting::column_dim_multiset(g.x(a)), vec![1; f.zero_cell(a)]);
        }
        for k in 0..2 {
            let p = c.generator_path(k);
            let proj = g.projection(&p).unwrap();
            assert!(proj.distance(&id2(proj.source())) < 1e-12);
            let mut gx = g.one_cell(&p).unwrap().sector_dims().into_values().collect::<Vec<_>>();
            let mut fx = f.one_cell(&p).unwrap().sector_dims().into_values().collect::<Vec<_>>();
            gx.sort_unstable();
            fx.sort_unstable();
            assert_eq!(gx, fx);
        }
        // φ is a relabeling: every component is a unitary between cells of the same size.
        let phi = g.construct_phi().unwrap();
        for x in &phi.comp0 {
            assert_eq!(x.src(), x.tgt());
            assert_eq!(x.dim(), x.src());
        }
        for sq in phi.comp1.values() {
            assert!(sq.unitarity_residual() < 1e-12);
        }
    }

    #[test]
    fn matrix_algebra_constant_scenario_has_one_index() {
        let c = cat();
        let x = GradedOneCell::new(1, 1, vec![(0, 0), (0, 0)]).unwrap();
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        let tol = Tolerance::default();
        let (f, e) = constant_functor_scenario(&c, &q, tol).unwrap();
        let g = construct_g(&c, &f, &e, tol, 3).unwrap();
        assert_eq!((g.zero_cell(0), g.zero_cell(1)), (1, 1));
        assert_eq!(g.split(0).block_dims(), vec![2]);
    }
}
