//! *-2-transformations and *-2-modifications, their compositions, and
//! splitting of projection modifications.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::functor::TwoFunctor;
use super::presentation::{Path, PresentedTwoCat};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::mathilb::{dagger2, hcomp1, hcomp2, id1, id2, unitor_left, vcomp, BlockTwoCell, GradedOneCell};
use crate::numeric::{self, Tolerance};
use crate::qsystem::DualPair;
use crate::report::Report;
use crate::splitting::split_projection;

/// A transformation `φ: F ⇒ G`: 1-cells `φ_a: F(a) → G(a)` and unitary squares
/// `φ_P: φ_b ⊠ F(P) → G(P) ⊠ φ_a`.
///
/// Components are stored for every generator and optionally for longer or
/// empty paths; missing path components are derived by stacking generator
/// squares and conjugating with the tensorators of `F` and `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformationData {
    pub comp0: Vec<GradedOneCell>,
    pub comp1: BTreeMap<Path, BlockTwoCell>,
}

impl TransformationData {
    /// Build from generator components, listed in generator order.
    pub fn new(c: &PresentedTwoCat, comp0: Vec<GradedOneCell>, gens: Vec<BlockTwoCell>) -> Result<Self> {
        if comp0.len() != c.zero_cells.len() || gens.len() != c.gen_one_cells.len() {
            return Err(Error::CellMismatch("transformation data does not cover every generator".into()));
        }
        let comp1 = gens.into_iter().enumerate().map(|(k, f)| (c.generator_path(k), f)).collect();
        Ok(TransformationData { comp0, comp1 })
    }

    /// `φ_P` for any path, between `φ_b ⊠ F(P)` and `G(P) ⊠ φ_a`.
    pub fn component(&self, c: &PresentedTwoCat, f: &dyn TwoFunctor, g: &dyn TwoFunctor, p: &Path) -> Result<BlockTwoCell> {
        if let Some(x) = self.comp1.get(p) {
            return Ok(x.clone());
        }
        c.check_path(p)?;
        let (pa, pb) = (&self.comp0[p.src], &self.comp0[p.tgt]);
        let mut d = Diagram::on(&[pb.clone(), f.one_cell(p)?])?;
        match p.split_first(c) {
            None => {
                // (G¹ ⊠ 1) λ† (1 ⊠ F¹†)
                d.apply(1, 1, &dagger2(&f.unit(p.src)?), &[])?;
                d.apply(0, 0, &g.unit(p.src)?, &[g.one_cell(p)?])?;
            }
            Some((x, rest)) => {
                if rest.is_empty() {
                    return Err(Error::CellMismatch(format!("no component for generator {}", c.path_label(p))));
                }
                let mid = &self.comp0[x.src];
                d.apply(1, 1, &dagger2(&f.tensorator(&x, &rest)?), &[f.one_cell(&x)?, f.one_cell(&rest)?])?;
                d.apply(0, 2, &self.component(c, f, g, &x)?, &[g.one_cell(&x)?, mid.clone()])?;
                d.apply(1, 2, &self.component(c, f, g, &rest)?, &[g.one_cell(&rest)?, pa.clone()])?;
                d.apply(0, 2, &g.tensorator(&x, &rest)?, &[g.one_cell(p)?])?;
            }
        }
        d.finish()
    }
}

/// A modification `η: φ ⇛ ψ` with components `η_a: φ_a → ψ_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModificationData {
    pub comp: Vec<BlockTwoCell>,
}

/// `1_F`: unit components and left unitors `1 ⊠ F(X) → F(X) ⊠ 1`.
pub fn identity_transformation(c: &PresentedTwoCat, f: &dyn TwoFunctor) -> Result<TransformationData> {
    let comp0 = (0..c.zero_cells.len()).map(|a| id1(f.zero_cell(a))).collect();
    let gens = (0..c.gen_one_cells.len())
        .map(|k| Ok(unitor_left(&f.one_cell(&c.generator_path(k))?)))
        .collect::<Result<Vec<_>>>()?;
    TransformationData::new(c, comp0, gens)
}

/// Expected boundaries of `φ_P`.
fn square_boundary(
    phi: &TransformationData,
    f: &dyn TwoFunctor,
    g: &dyn TwoFunctor,
    p: &Path,
) -> Result<(GradedOneCell, GradedOneCell)> {
    Ok((hcomp1(&phi.comp0[p.tgt], &f.one_cell(p)?)?, hcomp1(&g.one_cell(p)?, &phi.comp0[p.src])?))
}

/// `(G²_{P,Q} ⊠ 1)(1 ⊠ φ_Q)(φ_P ⊠ 1)` and `φ_{PQ}(1 ⊠ F²_{P,Q})` out of `φ_b ⊠ F(P) ⊠ F(Q)`.
pub(crate) fn composite_square_sides(
    c: &PresentedTwoCat,
    phi: &TransformationData,
    f: &dyn TwoFunctor,
    g: &dyn TwoFunctor,
    p: &Path,
    q: &Path,
) -> Result<(BlockTwoCell, BlockTwoCell)> {
    let pq = p.concat(q)?;
    let word = [phi.comp0[p.tgt].clone(), f.one_cell(p)?, f.one_cell(q)?];
    let mut l = Diagram::on(&word)?;
    l.apply(0, 2, &phi.component(c, f, g, p)?, &[g.one_cell(p)?, phi.comp0[p.src].clone()])?;
    l.apply(1, 2, &phi.component(c, f, g, q)?, &[g.one_cell(q)?, phi.comp0[q.src].clone()])?;
    l.apply(0, 2, &g.tensorator(p, q)?, &[g.one_cell(&pq)?])?;
    let mut r = Diagram::on(&word)?;
    r.apply(1, 2, &f.tensorator(p, q)?, &[f.one_cell(&pq)?])?;
    r.apply(0, 2, &phi.component(c, f, g, &pq)?, &[g.one_cell(&pq)?, phi.comp0[q.src].clone()])?;
    Ok((l.finish()?, r.finish()?))
}

/// Residuals of the *-2-transformation axioms: unitarity of every stored square,
/// compatibility with tensorators on composable generator pairs and stored
/// longer paths, naturality for generator 2-cells, and the unit condition.
pub fn check_transformation(
    c: &PresentedTwoCat,
    phi: &TransformationData,
    f: &dyn TwoFunctor,
    g: &dyn TwoFunctor,
    tol: Tolerance,
) -> Result<Report> {
    if phi.comp0.len() != c.zero_cells.len() {
        return Err(Error::CellMismatch("transformation has the wrong number of 0-cell components".into()));
    }
    for (a, x) in phi.comp0.iter().enumerate() {
        if x.src() != f.zero_cell(a) || x.tgt() != g.zero_cell(a) {
            return Err(Error::CellMismatch(format!("component at {} has the wrong endpoints", c.zero_cells[a])));
        }
    }
    let mut r = Report::new();
    for (p, sq) in &phi.comp1 {
        let (s, t) = square_boundary(phi, f, g, p)?;
        if sq.source() != &s || sq.target() != &t {
            return Err(Error::CellMismatch(format!("square for {} has the wrong boundary", c.path_label(p))));
        }
        r.push(format!("unitary {}", c.path_label(p)), "φ_X unitary", sq.unitarity_residual(), tol.atol);
    }
    let mut pairs: Vec<(Path, Path)> =
        c.composable_pairs().into_iter().map(|(x, y)| (c.generator_path(x), c.generator_path(y))).collect();
    for p in phi.comp1.keys() {
        if p.len() >= 3 {
            pairs.push(p.split_first(c).expect("nonempty"));
        }
    }
    for (p, q) in &pairs {
        let (lhs, rhs) = composite_square_sides(c, phi, f, g, p, q)?;
        r.push(
            format!("composite {}", c.path_label(&p.concat(q)?)),
            "(G²⊠1)(1⊠φ_Y)(φ_X⊠1) = φ_{XY}(1⊠F²)",
            lhs.distance(&rhs),
            tol.atol,
        );
    }
    for (k, gen) in c.gen_two_cells.iter().enumerate() {
        let (p, q) = (&gen.source, &gen.target);
        let (pa, pb) = (&phi.comp0[p.src], &phi.comp0[p.tgt]);
        let mut l = Diagram::on(&[pb.clone(), f.one_cell(p)?])?;
        l.apply(0, 2, &phi.component(c, f, g, p)?, &[g.one_cell(p)?, pa.clone()])?;
        l.apply(0, 1, &g.two_cell(k)?, &[g.one_cell(q)?])?;
        let mut rd = Diagram::on(&[pb.clone(), f.one_cell(p)?])?;
        rd.apply(1, 1, &f.two_cell(k)?, &[f.one_cell(q)?])?;
        rd.apply(0, 2, &phi.component(c, f, g, q)?, &[g.one_cell(q)?, pa.clone()])?;
        r.push(
            format!("naturality {}", gen.label),
            "(G(f)⊠1)φ_X = φ_Y(1⊠F(f))",
            l.finish()?.distance(&rd.finish()?),
            tol.atol,
        );
    }
    for a in 0..c.zero_cells.len() {
        let one = Path::empty(a);
        let pa = &phi.comp0[a];
        let mut l = Diagram::on(core::slice::from_ref(pa))?;
        l.apply(1, 0, &f.unit(a)?, &[f.one_cell(&one)?])?;
        l.apply(0, 2, &phi.component(c, f, g, &one)?, &[g.one_cell(&one)?, pa.clone()])?;
        let mut rd = Diagram::on(core::slice::from_ref(pa))?;
        rd.apply(0, 0, &g.unit(a)?, &[g.one_cell(&one)?])?;
        r.push(
            format!("unit {}", c.zero_cells[a]),
            "φ_{1_a}(1⊠F¹) = (G¹⊠1)λ†",
            l.finish()?.distance(&rd.finish()?),
            tol.atol,
        );
    }
    Ok(r)
}

/// Residuals of `ψ_X(η_b ⊠ 1) = (1 ⊠ η_a)φ_X` for every generator `X`, for `η: φ ⇛ ψ`.
pub fn check_modification(
    c: &PresentedTwoCat,
    eta: &ModificationData,
    phi: &TransformationData,
    psi: &TransformationData,
    f: &dyn TwoFunctor,
    g: &dyn TwoFunctor,
    tol: Tolerance,
) -> Result<Report> {
    if eta.comp.len() != c.zero_cells.len() {
        return Err(Error::CellMismatch("modification has the wrong number of components".into()));
    }
    for (a, e) in eta.comp.iter().enumerate() {
        if e.source() != &phi.comp0[a] || e.target() != &psi.comp0[a] {
            return Err(Error::CellMismatch(format!("modification component at {} has the wrong boundary", c.zero_cells[a])));
        }
    }
    let mut r = Report::new();
    for k in 0..c.gen_one_cells.len() {
        let p = c.generator_path(k);
        let fx = f.one_cell(&p)?;
        let gx = g.one_cell(&p)?;
        let mut l = Diagram::on(&[phi.comp0[p.tgt].clone(), fx.clone()])?;
        l.apply1(0, &eta.comp[p.tgt])?;
        l.apply(0, 2, &psi.component(c, f, g, &p)?, &[gx.clone(), psi.comp0[p.src].clone()])?;
        let mut rd = Diagram::on(&[phi.comp0[p.tgt].clone(), fx])?;
        rd.apply(0, 2, &phi.component(c, f, g, &p)?, &[gx, phi.comp0[p.src].clone()])?;
        rd.apply1(1, &eta.comp[p.src])?;
        r.push(
            format!("square {}", c.gen_one_cells[k].label),
            "ψ_X(η_b⊠1) = (1⊠η_a)φ_X",
            l.finish()?.distance(&rd.finish()?),
            tol.atol,
        );
    }
    let sup = eta.comp.iter().map(|e| numeric::frob(e.mat())).fold(0.0, f64::max);
    r.note("sup_a ‖η_a‖ (Frobenius)", sup);
    Ok(r)
}

/// `φ ⊗ ψ: H ⇒ F` for `φ: G ⇒ F` and `ψ: H ⇒ G`, with squares `(φ_X ⊠ 1)(1 ⊠ ψ_X)`.
pub fn tensor_transformations(
    c: &PresentedTwoCat,
    phi: &TransformationData,
    psi: &TransformationData,
    h: &dyn TwoFunctor,
    g: &dyn TwoFunctor,
    f: &dyn TwoFunctor,
) -> Result<TransformationData> {
    let comp0 = phi.comp0.iter().zip(&psi.comp0).map(|(x, y)| hcomp1(x, y)).collect::<Result<Vec<_>>>()?;
    let mut gens = Vec::new();
    for k in 0..c.gen_one_cells.len() {
        let p = c.generator_path(k);
        let mut d = Diagram::on(&[phi.comp0[p.tgt].clone(), psi.comp0[p.tgt].clone(), h.one_cell(&p)?])?;
        d.apply(1, 2, &psi.component(c, h, g, &p)?, &[g.one_cell(&p)?, psi.comp0[p.src].clone()])?;
        d.apply(0, 2, &phi.component(c, g, f, &p)?, &[f.one_cell(&p)?, phi.comp0[p.src].clone()])?;
        gens.push(d.finish()?);
    }
    TransformationData::new(c, comp0, gens)
}

/// `(n ⊗ t)_a = n_a ⊠ t_a`.
pub fn tensor_modifications(n: &ModificationData, t: &ModificationData) -> Result<ModificationData> {
    if n.comp.len() != t.comp.len() {
        return Err(Error::CellMismatch("modifications over different 0-cells".into()));
    }
    Ok(ModificationData { comp: n.comp.iter().zip(&t.comp).map(|(a, b)| hcomp2(a, b)).collect::<Result<_>>()? })
}

/// `(n' ∘ n)_a = n'_a · n_a`.
pub fn vcomp_modifications(n2: &ModificationData, n1: &ModificationData) -> Result<ModificationData> {
    if n1.comp.len() != n2.comp.len() {
        return Err(Error::CellMismatch("modifications over different 0-cells".into()));
    }
    Ok(ModificationData { comp: n2.comp.iter().zip(&n1.comp).map(|(a, b)| vcomp(a, b)).collect::<Result<_>>()? })
}

/// Split a projection modification `p: φ ⇛ φ`: returns `x` with components
/// `x_a = range(p_a)` and squares `x_X = (1 ⊠ ι_a†) φ_X (ι_b ⊠ 1)`, and the
/// isometric modification `ι: x ⇛ φ` with `ι ι† = p`.
pub fn split_modification_projection(
    c: &PresentedTwoCat,
    phi: &TransformationData,
    p: &ModificationData,
    f: &dyn TwoFunctor,
    g: &dyn TwoFunctor,
    tol: Tolerance,
) -> Result<(TransformationData, ModificationData)> {
    if p.comp.len() != c.zero_cells.len() {
        return Err(Error::CellMismatch("projection has the wrong number of components".into()));
    }
    let mut comp0 = Vec::new();
    let mut iso = Vec::new();
    for (a, pa) in p.comp.iter().enumerate() {
        let (x, u) = split_projection(&phi.comp0[a], pa, tol)?;
        comp0.push(x);
        iso.push(u);
    }
    let mut gens = Vec::new();
    for k in 0..c.gen_one_cells.len() {
        let path = c.generator_path(k);
        let (a, b) = (path.src, path.tgt);
        let mut d = Diagram::on(&[comp0[b].clone(), f.one_cell(&path)?])?;
        d.apply1(0, &iso[b])?;
        d.apply(0, 2, &phi.component(c, f, g, &path)?, &[g.one_cell(&path)?, phi.comp0[a].clone()])?;
        d.apply1(1, &dagger2(&iso[a]))?;
        gens.push(d.finish()?);
    }
    Ok((TransformationData::new(c, comp0, gens)?, ModificationData { comp: iso }))
}

/// The mate `φ̄: G ⇒ F` of `φ: F ⇒ G` under the given duals, where `duals[a].x = φ̄_a`
/// and `duals[a].xbar = φ_a`: `φ̄_X = (coev_b† ⊠ 1)(1 ⊠ φ_X† ⊠ 1)(1 ⊠ ev_a†)`.
pub fn mate_transformation(
    c: &PresentedTwoCat,
    phi: &TransformationData,
    duals: &[DualPair],
    f: &dyn TwoFunctor,
    g: &dyn TwoFunctor,
) -> Result<TransformationData> {
    if duals.len() != c.zero_cells.len() || duals.iter().zip(&phi.comp0).any(|(d, x)| &d.xbar != x) {
        return Err(Error::CellMismatch("duals must have the components of φ as their conjugates".into()));
    }
    let comp0: Vec<GradedOneCell> = duals.iter().map(|d| d.x.clone()).collect();
    let mut gens = Vec::new();
    for k in 0..c.gen_one_cells.len() {
        let path = c.generator_path(k);
        let (da, db) = (&duals[path.src], &duals[path.tgt]);
        let mut d = Diagram::on(&[db.x.clone(), g.one_cell(&path)?])?;
        d.apply(2, 0, &dagger2(&da.ev), &[da.xbar.clone(), da.x.clone()])?;
        d.apply(1, 2, &dagger2(&phi.component(c, f, g, &path)?), &[db.xbar.clone(), f.one_cell(&path)?])?;
        d.apply(0, 2, &dagger2(&db.coev), &[])?;
        gens.push(d.finish()?);
    }
    TransformationData::new(c, comp0, gens)
}

/// The identity modification on `φ`.
pub fn identity_modification(phi: &TransformationData) -> ModificationData {
    ModificationData { comp: phi.comp0.iter().map(id2).collect() }
}

#[cfg(test)]
mod tests {
    use super::super::endf::{check_endf_qsystem, qsystem_from_dualizable_transformation};
    use super::super::scenario::{random_dualizable, ScenarioSize};
    use super::*;
    use crate::mathilb::zero2;
    use crate::numeric::c as cx;
    use crate::random;

    fn scenario(seed: u64) -> super::super::scenario::DualizableScenario {
        random_dualizable(&mut random::seeded(seed), ScenarioSize::default()).unwrap()
    }

    /// A scenario from `seed` onwards whose `φ` has more than one copy and more than one index.
    fn rich_scenario(seed: u64) -> super::super::scenario::DualizableScenario {
        (seed..)
            .map(scenario)
            .find(|s| s.copies.iter().sum::<usize>() > 1 && s.f.on0.iter().sum::<usize>() > 1)
            .unwrap()
    }

    #[test]
    fn identity_transformation_passes() {
        let s = scenario(1);
        let one = identity_transformation(&s.c, &s.f).unwrap();
        let r = check_transformation(&s.c, &one, &s.f, &s.f, Tolerance::default()).unwrap();
        assert_eq!(r.max_residual(), 0.0);
    }

    #[test]
    fn tensor_with_identity_is_conjugate_by_unitors() {
        let s = scenario(2);
        let one = identity_transformation(&s.c, &s.g).unwrap();
        let t = tensor_transformations(&s.c, &one, &s.phi, &s.f, &s.g, &s.g).unwrap();
        for k in 0..s.c.gen_one_cells.len() {
            let p = s.c.generator_path(k);
            let (a, b) = (p.src, p.tgt);
            // Both sides start at 1 ⊠ φ_b ⊠ F(X) and end at G(X) ⊠ φ_a.
            let mut lhs = Diagram::on(&[id1(s.g.zero_cell(b)), s.phi.comp0[b].clone(), s.f.one_cell(&p).unwrap()]).unwrap();
            lhs.apply(0, 3, &t.comp1[&p], &[s.g.one_cell(&p).unwrap(), id1(s.g.zero_cell(a)), s.phi.comp0[a].clone()]).unwrap();
            lhs.apply(1, 1, &id2(&id1(s.g.zero_cell(a))), &[]).unwrap();
            let lhs = lhs.finish().unwrap();
            let mut rhs = Diagram::on(&[id1(s.g.zero_cell(b)), s.phi.comp0[b].clone(), s.f.one_cell(&p).unwrap()]).unwrap();
            rhs.apply(0, 1, &id2(&id1(s.g.zero_cell(b))), &[]).unwrap();
            rhs.apply(0, 2, &s.phi.comp1[&p], &[s.g.one_cell(&p).unwrap(), s.phi.comp0[a].clone()]).unwrap();
            assert!(lhs.distance(&rhs.finish().unwrap()) < 1e-13);
        }
    }

    #[test]
    fn tensor_of_valid_transformations_is_valid() {
        for seed in 0..4 {
            let s = scenario(10 + seed);
            let t = tensor_transformations(&s.c, &s.phi, &s.phibar, &s.g, &s.f, &s.g).unwrap();
            let r = check_transformation(&s.c, &t, &s.g, &s.g, Tolerance::default()).unwrap();
            assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn unit_of_synthesized_qsystem_is_a_modification_and_random_ones_are_not() {
        let s = rich_scenario(5);
        let q = qsystem_from_dualizable_transformation(&s.c, &s.phi, &s.phibar, &s.f, &s.g).unwrap();
        assert!(check_endf_qsystem(&s.c, &q, &s.f, Tolerance::default()).unwrap().passed());
        let one = identity_transformation(&s.c, &s.f).unwrap();
        let r = check_modification(&s.c, &q.i, &one, &q.psi, &s.f, &s.f, Tolerance::default()).unwrap();
        assert!(r.passed());
        let mut rng = random::seeded(0);
        let eta = ModificationData {
            comp: q.i.comp.iter().map(|i| random::two_cell(&mut rng, i.source(), i.target())).collect(),
        };
        let r = check_modification(&s.c, &eta, &one, &q.psi, &s.f, &s.f, Tolerance::default()).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn interchange_of_tensor_and_vcomp() {
        let mut rng = random::seeded(6);
        let s = scenario(6);
        let rand_mod = |rng: &mut crate::random::SeededRng, x: &TransformationData| ModificationData {
            comp: x.comp0.iter().map(|c| random::two_cell(rng, c, c)).collect(),
        };
        let (n1, n2) = (rand_mod(&mut rng, &s.phi), rand_mod(&mut rng, &s.phi));
        let (t1, t2) = (rand_mod(&mut rng, &s.phibar), rand_mod(&mut rng, &s.phibar));
        let lhs = vcomp_modifications(&tensor_modifications(&t2, &n2).unwrap(), &tensor_modifications(&t1, &n1).unwrap()).unwrap();
        let rhs =
            tensor_modifications(&vcomp_modifications(&t2, &t1).unwrap(), &vcomp_modifications(&n2, &n1).unwrap()).unwrap();
        for (a, b) in lhs.comp.iter().zip(&rhs.comp) {
            assert!(a.distance(b) < 1e-12);
        }
    }

    #[test]
    fn splitting_the_identity_projection_recovers_phi() {
        let s = scenario(7);
        let tol = Tolerance::default();
        let (x, iota) = split_modification_projection(&s.c, &s.phi, &identity_modification(&s.phi), &s.f, &s.g, tol).unwrap();
        for a in 0..s.c.zero_cells.len() {
            assert_eq!(x.comp0[a].sector_dims(), s.phi.comp0[a].sector_dims());
            assert!(iota.comp[a].unitarity_residual() < 1e-12);
        }
        assert!(check_modification(&s.c, &iota, &x, &s.phi, &s.f, &s.g, tol).unwrap().passed());
    }

    #[test]
    fn splitting_the_zero_projection_gives_zero_cells() {
        let s = scenario(8);
        let zero = ModificationData { comp: s.phi.comp0.iter().map(|x| zero2(x, x).unwrap()).collect() };
        let (x, _) = split_modification_projection(&s.c, &s.phi, &zero, &s.f, &s.g, Tolerance::default()).unwrap();
        assert!(x.comp0.iter().all(|c| c.dim() == 0));
        assert!(check_transformation(&s.c, &x, &s.f, &s.g, Tolerance::default()).unwrap().passed());
    }

    #[test]
    fn projection_from_a_known_subtransformation_recovers_it() {
        // φ ⊕ φ on F ⇒ G ⊕ G restricted along an isometric modification into the sum.
        let s = scenario(9);
        let tol = Tolerance::default();
        let p = &s.projection;
        let (x, iota) = split_modification_projection(&s.c, &s.phi, p, &s.f, &s.g, tol).unwrap();
        // Re-splitting ι ι† gives the same ranks and an isomorphic transformation.
        let again = ModificationData {
            comp: iota.comp.iter().map(|u| vcomp(u, &dagger2(u)).unwrap()).collect(),
        };
        let (y, kappa) = split_modification_projection(&s.c, &s.phi, &again, &s.f, &s.g, tol).unwrap();
        for a in 0..s.c.zero_cells.len() {
            assert_eq!(x.comp0[a].sector_dims(), y.comp0[a].sector_dims());
            let w = vcomp(&dagger2(&kappa.comp[a]), &iota.comp[a]).unwrap();
            assert!(w.unitarity_residual() < 1e-10);
            let expect: usize = s.ranks.iter().sum::<usize>() * s.f.zero_cell(a);
            assert_eq!(x.comp0[a].dim(), expect);
        }
        let w = ModificationData {
            comp: (0..s.c.zero_cells.len()).map(|a| vcomp(&dagger2(&kappa.comp[a]), &iota.comp[a]).unwrap()).collect(),
        };
        assert!(check_modification(&s.c, &w, &x, &y, &s.f, &s.g, tol).unwrap().passed());
    }

    #[test]
    fn non_projections_are_rejected() {
        let s = scenario(11);
        let bad = ModificationData { comp: s.phi.comp0.iter().map(|x| id2(x).scale(cx(2.0, 0.0))).collect() };
        assert!(matches!(
            split_modification_projection(&s.c, &s.phi, &bad, &s.f, &s.g, Tolerance::default()),
            Err(Error::NotAProjection { .. })
        ));
    }

    #[test]
    fn mate_requires_matching_conjugates() {
        let s = rich_scenario(12);
        let mut pairs = s.pairs.clone();
        pairs[0] = DualPair::standard(&id1(s.phi.comp0[0].tgt())).unwrap();
        assert!(matches!(mate_transformation(&s.c, &s.phi, &pairs, &s.f, &s.g), Err(Error::CellMismatch(_))));
        let m = mate_transformation(&s.c, &s.phi, &s.pairs, &s.f, &s.g).unwrap();
        assert_eq!(m, s.phibar);
    }
}
