//! Numerical verification that a split Q-system on `F` is recovered from `φ̄ ⊗ φ`.

use alloc::format;
use alloc::vec::Vec;

use super::construction::GConstruction;
use super::endf::{check_endf_qsystem, qsystem_from_dual_transformations};
use super::functor::{associator_sides, check_functor, TwoFunctor};
use super::presentation::Path;
use super::transformation::{
    check_modification, check_transformation, identity_transformation, mate_transformation, tensor_transformations,
    ModificationData,
};
use crate::diagram::Diagram;
use crate::error::Result;
use crate::mathilb::{dagger2, vcomp, BlockTwoCell, GradedOneCell};
use crate::numeric::Tolerance;
use crate::qsystem::{check_dual_pair, check_qsystem_iso};
use crate::report::Report;

/// Per-0-cell words and cells of a split, with `x = X̄` and `xb = X`.
struct Local<'g> {
    x: &'g GradedOneCell,
    xb: &'g GradedOneCell,
    psi: &'g GradedOneCell,
    ev: &'g BlockTwoCell,
    coev: &'g BlockTwoCell,
    gamma: &'g BlockTwoCell,
    m: &'g BlockTwoCell,
    i: &'g BlockTwoCell,
}

fn local<'g>(g: &'g GConstruction<'_>, a: usize) -> Local<'g> {
    let s = g.split(a);
    let q = g.qsystem_at(a);
    Local {
        x: &s.pair.xbar,
        xb: &s.pair.x,
        psi: &q.q,
        ev: &s.pair.ev,
        coev: &s.pair.coev,
        gamma: &s.gamma,
        m: &q.m,
        i: &q.i,
    }
}

/// Identities of the splitting at one 0-cell: `γ†` written through `m` and the
/// duality, `i†γ = coev†`, `m†γ`, absorption of `ψ` into `x̄ ⊠ x` on either side,
/// and compatibility of `γ` with multiplication and unit.
fn check_local(l: &Local<'_>, r: &mut Report, name: &str, th: f64) -> Result<()> {
    let gd = dagger2(l.gamma);
    let (x, xb, psi) = (l.x.clone(), l.xb.clone(), l.psi.clone());
    let cup = [xb.clone(), x.clone()];
    let cap = [x.clone(), xb.clone()];
    let evd = dagger2(l.ev);

    let mut d = Diagram::on(core::slice::from_ref(&psi))?;
    d.apply(1, 0, l.coev, &cup)?;
    d.apply(2, 0, &evd, &cap)?;
    d.apply(1, 2, l.gamma, core::slice::from_ref(&psi))?;
    d.apply(0, 2, l.m, core::slice::from_ref(&psi))?;
    d.apply(0, 1, &dagger2(l.i), &[])?;
    r.push(format!("γ† from the left {name}"), "γ† = (i†m ⊠ 1)(1 ⊠ γ ⊠ 1)(1 ⊠ ev† ⊠ 1)(1 ⊠ coev)", d.finish()?.distance(&gd), th);

    let mut d = Diagram::on(core::slice::from_ref(&psi))?;
    d.apply(0, 0, l.coev, &cup)?;
    d.apply(1, 0, &evd, &cap)?;
    d.apply(2, 2, l.gamma, core::slice::from_ref(&psi))?;
    d.apply(2, 2, l.m, core::slice::from_ref(&psi))?;
    d.apply(2, 1, &dagger2(l.i), &[])?;
    r.push(format!("γ† from the right {name}"), "γ† = (1 ⊠ i†m)(1 ⊠ γ ⊠ 1)(1 ⊠ ev† ⊠ 1)(coev ⊠ 1)", d.finish()?.distance(&gd), th);

    r.push(format!("counit {name}"), "i†γ = coev†", vcomp(&dagger2(l.i), l.gamma)?.distance(&dagger2(l.coev)), th);

    let mut d = Diagram::on(&cup)?;
    d.apply(1, 0, &evd, &cap)?;
    d.apply(0, 2, l.gamma, core::slice::from_ref(&psi))?;
    d.apply(1, 2, l.gamma, core::slice::from_ref(&psi))?;
    r.push(format!("comultiplication {name}"), "m†γ = (γ ⊠ γ)(1 ⊠ ev† ⊠ 1)", vcomp(&dagger2(l.m), l.gamma)?.distance(&d.finish()?), th);

    let word = [xb.clone(), x.clone(), psi.clone()];
    let mut lhs = Diagram::on(&word)?;
    lhs.apply(2, 1, &gd, &cup)?;
    lhs.apply(1, 2, l.ev, &[])?;
    lhs.apply(0, 2, l.gamma, core::slice::from_ref(&psi))?;
    let mut rhs = Diagram::on(&word)?;
    rhs.apply(0, 2, l.gamma, core::slice::from_ref(&psi))?;
    rhs.apply(0, 2, l.m, core::slice::from_ref(&psi))?;
    r.push(format!("right absorption {name}"), "γ(1 ⊠ ev ⊠ 1)(1 ⊠ γ†) = m(γ ⊠ 1)", lhs.finish()?.distance(&rhs.finish()?), th);

    let word = [psi.clone(), xb.clone(), x.clone()];
    let mut lhs = Diagram::on(&word)?;
    lhs.apply(0, 1, &gd, &cup)?;
    lhs.apply(1, 2, l.ev, &[])?;
    lhs.apply(0, 2, l.gamma, core::slice::from_ref(&psi))?;
    let mut rhs = Diagram::on(&word)?;
    rhs.apply(1, 2, l.gamma, core::slice::from_ref(&psi))?;
    rhs.apply(0, 2, l.m, core::slice::from_ref(&psi))?;
    r.push(format!("left absorption {name}"), "γ(1 ⊠ ev ⊠ 1)(γ† ⊠ 1) = m(1 ⊠ γ)", lhs.finish()?.distance(&rhs.finish()?), th);

    let word = [xb.clone(), x.clone(), xb.clone(), x.clone()];
    let mut lhs = Diagram::on(&word)?;
    lhs.apply(1, 2, l.ev, &[])?;
    lhs.apply(0, 2, l.gamma, core::slice::from_ref(&psi))?;
    let mut rhs = Diagram::on(&word)?;
    rhs.apply(2, 2, l.gamma, core::slice::from_ref(&psi))?;
    rhs.apply(0, 2, l.gamma, core::slice::from_ref(&psi))?;
    rhs.apply(0, 2, l.m, core::slice::from_ref(&psi))?;
    r.push(format!("multiplicative {name}"), "γ(1 ⊠ ev ⊠ 1) = m(γ ⊠ γ)", lhs.finish()?.distance(&rhs.finish()?), th);
    r.push(format!("unital {name}"), "γ coev = i", vcomp(l.gamma, l.coev)?.distance(l.i), th);
    Ok(())
}

/// `p_P` and `u_P`: projection and isometry residuals.
fn check_projection(g: &GConstruction<'_>, p: &Path, r: &mut Report, th: f64) -> Result<()> {
    let c = g.presentation();
    let name = c.path_label(p);
    let proj = g.projection(p)?;
    let (herm, idem) = proj.projection_residuals();
    r.push(format!("projection hermitian {name}"), "p = p†", herm, th);
    r.push(format!("projection idempotent {name}"), "p² = p", idem, th);
    let u = g.iso(p)?;
    r.push(format!("isometry {name}"), "u†u = 1", u.isometry_residual(), th);
    r.push(format!("range {name}"), "uu† = p", vcomp(&u, &dagger2(&u))?.distance(&proj), th);
    Ok(())
}

/// `(1 ⊠ coev_a† ⊠ 1)(u_X ⊠ u_Y)` equals the same map with `ψ_X`, `ψ_Y`
/// crossed sequentially and joined by `m_a`.
fn check_pair_projection(g: &GConstruction<'_>, p: &Path, q: &Path, r: &mut Report, th: f64) -> Result<()> {
    let c = g.presentation();
    let f = g.source_functor();
    let (a, b, cc) = (p.src, p.tgt, q.src);
    let (la, lb, lc) = (local(g, a), local(g, b), local(g, cc));
    let (fp, fq) = (f.one_cell(p)?, f.one_cell(q)?);
    let mut d = Diagram::on(&[g.one_cell(p)?, g.one_cell(q)?])?;
    d.apply(1, 1, &g.iso(q)?, &g.sandwich(q)?)?;
    d.apply(0, 1, &g.iso(p)?, &g.sandwich(p)?)?;
    let mut lhs = d.clone();
    lhs.apply(2, 2, &dagger2(la.coev), &[])?;
    let mut rhs = d;
    rhs.apply(6, 0, &dagger2(lc.ev), &[lc.x.clone(), lc.xb.clone()])?;
    rhs.apply(5, 2, lc.gamma, core::slice::from_ref(lc.psi))?;
    rhs.apply(4, 2, &dagger2(&g.psi_component(q)?), &[la.psi.clone(), fq.clone()])?;
    rhs.apply(2, 2, la.gamma, core::slice::from_ref(la.psi))?;
    rhs.apply(2, 2, la.m, core::slice::from_ref(la.psi))?;
    rhs.apply(1, 2, &dagger2(&g.psi_component(p)?), &[lb.psi.clone(), fp.clone()])?;
    rhs.apply(1, 1, &dagger2(lb.gamma), &[lb.xb.clone(), lb.x.clone()])?;
    rhs.apply(0, 2, lb.ev, &[])?;
    let name = c.path_label(&p.concat(q)?);
    r.push(format!("joined projections {name}"), "(1 ⊠ coev† ⊠ 1)(u_X ⊠ u_Y) through m", lhs.finish()?.distance(&rhs.finish()?), th);
    Ok(())
}

/// `p_{XY}(1 ⊠ F² ⊠ 1)` against crossing `ψ_Y` then `ψ_X` before `F²`.
fn check_sequential(g: &GConstruction<'_>, p: &Path, q: &Path, r: &mut Report, th: f64) -> Result<()> {
    let c = g.presentation();
    let f = g.source_functor();
    let pq = p.concat(q)?;
    let (la, lb, lc) = (local(g, p.src), local(g, p.tgt), local(g, q.src));
    let (fp, fq, fpq) = (f.one_cell(p)?, f.one_cell(q)?, f.one_cell(&pq)?);
    let word = [lb.x.clone(), fp.clone(), fq.clone(), lc.xb.clone()];
    let sandwich = [lb.x.clone(), fpq.clone(), lc.xb.clone()];
    let mut lhs = Diagram::on(&word)?;
    lhs.apply(1, 2, &f.tensorator(p, q)?, core::slice::from_ref(&fpq))?;
    lhs.apply(0, 3, &g.projection(&pq)?, &sandwich)?;
    let mut rhs = Diagram::on(&word)?;
    rhs.apply(4, 0, &dagger2(lc.ev), &[lc.x.clone(), lc.xb.clone()])?;
    rhs.apply(3, 2, lc.gamma, core::slice::from_ref(lc.psi))?;
    rhs.apply(2, 2, &dagger2(&g.psi_component(q)?), &[la.psi.clone(), fq.clone()])?;
    rhs.apply(1, 2, &dagger2(&g.psi_component(p)?), &[lb.psi.clone(), fp.clone()])?;
    rhs.apply(1, 1, &dagger2(lb.gamma), &[lb.xb.clone(), lb.x.clone()])?;
    rhs.apply(0, 2, lb.ev, &[])?;
    rhs.apply(1, 2, &f.tensorator(p, q)?, &[fpq])?;
    r.push(format!("sequential projection {}", c.path_label(&pq)), "p_{XY}(1 ⊠ F² ⊠ 1) = (1 ⊠ F² ⊠ 1)(p_X and p_Y crossed in turn)", lhs.finish()?.distance(&rhs.finish()?), th);
    Ok(())
}

/// Run every check of the splitting construction; all thresholds are `tol.loose()`.
///
/// Groups: local splitting identities, projections and isometries, joined and
/// sequential projections, naturality of projections, tensorator unitarity and
/// associativity, the functor axioms for `G`, the transformation axioms for
/// `φ` and `φ̄` and their mate relation, the duality modifications, `γ` as a
/// modification, and the Q-system rebuilt from `φ̄ ⊗ φ`.
pub fn verify_main_theorem(g: &GConstruction<'_>, tol: Tolerance) -> Result<Report> {
    let c = g.presentation();
    let f = g.source_functor();
    let q = g.qsystem();
    let n0 = c.zero_cells.len();
    let gens: Vec<Path> = (0..c.gen_one_cells.len()).map(|k| c.generator_path(k)).collect();
    let pairs: Vec<(Path, Path)> = c.composable_pairs().into_iter().map(|(x, y)| (gens[x].clone(), gens[y].clone())).collect();
    let th = tol.loose();
    let mut r = Report::new();

    for a in 0..n0 {
        check_local(&local(g, a), &mut r, &c.zero_cells[a], th)?;
    }

    for p in &gens {
        check_projection(g, p, &mut r, th)?;
    }
    for (p, q2) in &pairs {
        check_projection(g, &p.concat(q2)?, &mut r, th)?;
    }
    for a in 0..n0 {
        check_projection(g, &Path::empty(a), &mut r, th)?;
    }

    for (p, q2) in &pairs {
        check_pair_projection(g, p, q2, &mut r, th)?;
        check_sequential(g, p, q2, &mut r, th)?;
    }
    for (k, gen) in c.gen_two_cells.iter().enumerate() {
        let (p, q2) = (&gen.source, &gen.target);
        let fk = f.two_cell(k)?;
        let mut lhs = Diagram::on(&g.sandwich(p)?)?;
        lhs.apply(1, 1, &fk, &[f.one_cell(q2)?])?;
        lhs.apply(0, 3, &g.projection(q2)?, &g.sandwich(q2)?)?;
        let mut rhs = Diagram::on(&g.sandwich(p)?)?;
        rhs.apply(0, 3, &g.projection(p)?, &g.sandwich(p)?)?;
        rhs.apply(1, 1, &fk, &[f.one_cell(q2)?])?;
        r.push(format!("natural projection {}", gen.label), "p_Y(1 ⊠ F(f) ⊠ 1) = (1 ⊠ F(f) ⊠ 1)p_X", lhs.finish()?.distance(&rhs.finish()?), th);
    }

    let mut g2 = pairs.clone();
    for p in &gens {
        g2.push((Path::empty(p.tgt), p.clone()));
        g2.push((p.clone(), Path::empty(p.src)));
    }
    for a in 0..n0 {
        g2.push((Path::empty(a), Path::empty(a)));
    }
    for (p, q2) in &g2 {
        let t = g.tensorator(p, q2)?;
        r.push(
            format!("G² unitary {}, {}", c.path_label(p), c.path_label(q2)),
            "G²_{P,Q} unitary",
            t.unitarity_residual(),
            th,
        );
    }
    for (x, y, z) in c.composable_triples() {
        let (lhs, rhs) = associator_sides(g, &gens[x], &gens[y], &gens[z])?;
        let name = c.path_label(&gens[x].concat(&gens[y])?.concat(&gens[z])?);
        r.push(format!("G² associative {name}"), "G²_{XY,Z}(G²_{X,Y} ⊠ 1) = G²_{X,YZ}(1 ⊠ G²_{Y,Z})", lhs.distance(&rhs), th);
    }
    r.absorb("G", check_functor(c, g, tol)?);

    let phi = g.construct_phi()?;
    let phibar = g.construct_phibar()?;
    r.absorb("φ", check_transformation(c, &phi, f, g, tol)?);
    r.absorb("φ̄", check_transformation(c, &phibar, g, f, tol)?);
    let mut duals = Vec::new();
    for a in 0..n0 {
        duals.push(g.split(a).pair.clone());
        r.absorb(&format!("dual {}", c.zero_cells[a]), check_dual_pair(&g.split(a).pair, tol)?);
    }
    let mate = mate_transformation(c, &phi, &duals, f, g)?;
    for p in &gens {
        let d = mate.component(c, g, f, p)?.distance(&phibar.component(c, g, f, p)?);
        r.push(format!("mate {}", c.path_label(p)), "φ̄_X = (coev† ⊠ 1)(1 ⊠ φ_X† ⊠ 1)(1 ⊠ ev†)", d, th);
    }

    let psi_fg = tensor_transformations(c, &phibar, &phi, f, g, f)?;
    let psi_gf = tensor_transformations(c, &phi, &phibar, g, f, g)?;
    let coev = ModificationData { comp: duals.iter().map(|d| d.coev.clone()).collect() };
    let evd = ModificationData { comp: duals.iter().map(|d| dagger2(&d.ev)).collect() };
    r.absorb("coev", check_modification(c, &coev, &identity_transformation(c, f)?, &psi_fg, f, f, tol)?);
    r.absorb("ev†", check_modification(c, &evd, &identity_transformation(c, g)?, &psi_gf, g, g, tol)?);
    let gamma = ModificationData { comp: g.splits().iter().map(|s| s.gamma.clone()).collect() };
    r.absorb("γ", check_modification(c, &gamma, &psi_fg, &q.psi, f, f, tol)?);

    let rebuilt = qsystem_from_dual_transformations(c, &phi, &phibar, &duals, f, g)?;
    r.absorb("φ̄⊗φ", check_endf_qsystem(c, &rebuilt, f, tol)?);
    for a in 0..n0 {
        r.absorb(
            &format!("γ iso {}", c.zero_cells[a]),
            check_qsystem_iso(&gamma.comp[a], &rebuilt.at(a)?, g.qsystem_at(a), tol)?,
        );
    }
    Ok(r.with_threshold(tol.loose()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcat::construction::construct_g;
    use crate::funcat::endf::{constant_functor_scenario, trivial_endf_qsystem};
    use crate::funcat::functor::FunctorData;
    use crate::funcat::presentation::{OneCellGen, PresentedTwoCat, TwoCellGen};
    use crate::mathilb::GradedOneCell;
    use crate::qsystem::{qsystem_from_dual, DualPair};
    use crate::random;
    use alloc::vec;

    fn cat() -> PresentedTwoCat {
        let gens = vec![
            OneCellGen { label: "X".into(), src: 0, tgt: 1 },
            OneCellGen { label: "Y".into(), src: 1, tgt: 0 },
            OneCellGen { label: "Z".into(), src: 0, tgt: 1 },
        ];
        let path = |k: usize| Path { src: gens[k].src, tgt: gens[k].tgt, gens: vec![k] };
        let two = vec![TwoCellGen { label: "f".into(), source: path(0), target: path(2) }];
        PresentedTwoCat { zero_cells: vec!["a".into(), "b".into()], gen_two_cells: two, gen_one_cells: gens, relations: Vec::new() }
    }

    #[test]
    fn trivial_qsystem_passes_at_atol() {
        let c = cat();
        let mut rng = random::seeded(2);
        let on1: Vec<GradedOneCell> = c.gen_one_cells.iter().map(|g| random::one_cell(&mut rng, [2, 2][g.src], 2, 2, true)).collect();
        let z = on1[2].clone();
        let on1 = vec![z.clone(), on1[1].clone(), z.clone()];
        let f = FunctorData::new(&c, vec![2, 2], on1, vec![random::two_cell(&mut rng, &z, &z)]).unwrap();
        let q = trivial_endf_qsystem(&c, &f).unwrap();
        let tol = Tolerance::default();
        let g = construct_g(&c, &f, &q, tol, 0).unwrap();
        let r = verify_main_theorem(&g, tol).unwrap();
        assert!(r.max_residual() <= tol.atol, "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn matrix_algebra_constant_scenario_passes() {
        let c = cat();
        let x = GradedOneCell::new(1, 1, vec![(0, 0), (0, 0)]).unwrap();
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        let tol = Tolerance::default();
        let (f, e) = constant_functor_scenario(&c, &q, tol).unwrap();
        let g = construct_g(&c, &f, &e, tol, 1).unwrap();
        let r = verify_main_theorem(&g, tol).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.checks.iter().any(|c| c.name == "natural projection f"));
    }

    #[test]
    fn a_wrong_split_is_detected() {
        let c = cat();
        let x = GradedOneCell::new(2, 1, vec![(0, 0), (0, 1), (0, 1)]).unwrap();
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        let tol = Tolerance::default();
        let (f, e) = constant_functor_scenario(&c, &q, tol).unwrap();
        let mut g = construct_g(&c, &f, &e, tol, 1).unwrap();
        g.corrupt_gamma_for_tests(0);
        // With γ negated, p_X is no longer idempotent and G cannot be formed.
        assert!(matches!(verify_main_theorem(&g, tol), Err(crate::error::Error::NotAProjection { .. })));
    }
}
