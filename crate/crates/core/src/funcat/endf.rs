//! Q-systems in the endomorphism category of a *-2-functor.

use alloc::format;
use alloc::vec::Vec;

use super::functor::{FunctorData, TwoFunctor};
use super::presentation::PresentedTwoCat;
use super::transformation::{
    check_modification, check_transformation, identity_transformation, tensor_transformations, ModificationData,
    TransformationData,
};
use crate::error::{Error, Result};
use crate::mathilb::{dagger2, id1, id2, unitor_left};
use crate::numeric::Tolerance;
use crate::qsystem::{check_qsystem, qsystem_from_dual, trivial_qsystem, DualPair, QSystemData};
use crate::report::Report;

/// A Q-system `(ψ, m, i)` on `F`: a transformation `ψ: F ⇒ F` with modifications
/// `m: ψ ⊗ ψ ⇛ ψ` and `i: 1_F ⇛ ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct EndFQSystem {
    pub psi: TransformationData,
    pub m: ModificationData,
    pub i: ModificationData,
}

impl EndFQSystem {
    /// The Q-system on `F(a)` carried by the component at `a`.
    pub fn at(&self, a: usize) -> Result<QSystemData> {
        QSystemData::new(self.psi.comp0[a].clone(), self.m.comp[a].clone(), self.i.comp[a].clone())
    }
}

/// Transformation axioms for `ψ`, Q-system axioms at every 0-cell, and the
/// modification squares of `m` and `i`.
pub fn check_endf_qsystem(c: &PresentedTwoCat, q: &EndFQSystem, f: &dyn TwoFunctor, tol: Tolerance) -> Result<Report> {
    let mut r = Report::new();
    r.absorb("ψ", check_transformation(c, &q.psi, f, f, tol)?);
    for a in 0..c.zero_cells.len() {
        r.absorb(&format!("Q at {}", c.zero_cells[a]), check_qsystem(&q.at(a)?, tol)?.with_threshold(tol.atol));
    }
    let psi2 = tensor_transformations(c, &q.psi, &q.psi, f, f, f)?;
    r.absorb("m", check_modification(c, &q.m, &psi2, &q.psi, f, f, tol)?);
    let unit = identity_transformation(c, f)?;
    r.absorb("i", check_modification(c, &q.i, &unit, &q.psi, f, f, tol)?);
    Ok(r)
}

/// `ψ = φ̄ ⊗ φ` with `m_a = 1 ⊠ ev_a ⊠ 1` and `i_a = coev_a`, for `φ: F ⇒ G`,
/// `φ̄: G ⇒ F` and duals with `duals[a].x = φ̄_a`, `duals[a].xbar = φ_a`.
pub fn qsystem_from_dual_transformations(
    c: &PresentedTwoCat,
    phi: &TransformationData,
    phibar: &TransformationData,
    duals: &[DualPair],
    f: &dyn TwoFunctor,
    g: &dyn TwoFunctor,
) -> Result<EndFQSystem> {
    if duals.len() != c.zero_cells.len() {
        return Err(Error::CellMismatch("need one dual pair per 0-cell".into()));
    }
    for (a, d) in duals.iter().enumerate() {
        if d.x != phibar.comp0[a] || d.xbar != phi.comp0[a] {
            return Err(Error::CellMismatch(format!("dual pair at {} does not match the components", c.zero_cells[a])));
        }
    }
    let psi = tensor_transformations(c, phibar, phi, f, g, f)?;
    let qs = duals.iter().map(qsystem_from_dual).collect::<Result<Vec<_>>>()?;
    let m = ModificationData { comp: qs.iter().map(|q| q.m.clone()).collect() };
    let i = ModificationData { comp: qs.into_iter().map(|q| q.i).collect() };
    Ok(EndFQSystem { psi, m, i })
}

/// [`qsystem_from_dual_transformations`] with the standard duals of the
/// components of `φ̄`, whose conjugates must be the components of `φ`.
pub fn qsystem_from_dualizable_transformation(
    c: &PresentedTwoCat,
    phi: &TransformationData,
    phibar: &TransformationData,
    f: &dyn TwoFunctor,
    g: &dyn TwoFunctor,
) -> Result<EndFQSystem> {
    let duals = phibar.comp0.iter().map(DualPair::standard).collect::<Result<Vec<_>>>()?;
    qsystem_from_dual_transformations(c, phi, phibar, &duals, f, g)
}

/// `ψ = 1_F` with unit multiplication and unit.
pub fn trivial_endf_qsystem(c: &PresentedTwoCat, f: &dyn TwoFunctor) -> Result<EndFQSystem> {
    let psi = identity_transformation(c, f)?;
    let qs: Vec<QSystemData> = (0..c.zero_cells.len()).map(|a| trivial_qsystem(f.zero_cell(a))).collect();
    let m = ModificationData { comp: qs.iter().map(|q| q.m.clone()).collect() };
    let i = ModificationData { comp: qs.into_iter().map(|q| q.i).collect() };
    Ok(EndFQSystem { psi, m, i })
}

/// The functor constant at `Q`'s 0-cell (every 1-cell and 2-cell maps to a unit)
/// with the Q-system `ψ_a = Q`, `ψ_X = λ_Q†`.
pub fn constant_functor_scenario(c: &PresentedTwoCat, q: &QSystemData, tol: Tolerance) -> Result<(FunctorData, EndFQSystem)> {
    let r = check_qsystem(q, tol)?;
    if let Some(bad) = r.failures().next() {
        return Err(Error::InvalidQSystem(format!("{} has residual {:.3e}", bad.name, bad.residual)));
    }
    let n = q.base();
    let one = id1(n);
    let f = FunctorData::new(
        c,
        alloc::vec![n; c.zero_cells.len()],
        alloc::vec![one.clone(); c.gen_one_cells.len()],
        alloc::vec![id2(&one); c.gen_two_cells.len()],
    )?;
    let square = dagger2(&unitor_left(&q.q));
    let psi = TransformationData::new(
        c,
        alloc::vec![q.q.clone(); c.zero_cells.len()],
        alloc::vec![square; c.gen_one_cells.len()],
    )?;
    let m = ModificationData { comp: alloc::vec![q.m.clone(); c.zero_cells.len()] };
    let i = ModificationData { comp: alloc::vec![q.i.clone(); c.zero_cells.len()] };
    Ok((f, EndFQSystem { psi, m, i }))
}
