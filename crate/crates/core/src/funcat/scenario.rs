//! Random presentations, functors and dualizable transformations with known splittings.
//!
//! The generated transformation `φ: F ⇒ G` has `G(a) = F(a) × T` for a finite
//! set `T`, and `φ_a` embeds index `i` into every `(i, t)` with `k_t` copies.
//! Its squares act by unitaries on the copy index only, so `φ̄ ⊗ φ` is a
//! Q-system whose splitting recovers `G(a)` up to relabeling.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::functor::FunctorData;
use super::presentation::{OneCellGen, PresentedTwoCat, TwoCellGen};
use super::transformation::{mate_transformation, ModificationData, TransformationData};
use crate::error::{Error, Result};
use crate::mathilb::{compatible_pairs, hcomp1, BlockTwoCell, GradedOneCell};
use crate::numeric::{self, dsum, ComplexMatrix};
use crate::qsystem::DualPair;
use crate::random;

/// Size bounds for [`random_dualizable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScenarioSize {
    pub max_zero_cells: usize,
    pub max_one_cells: usize,
    pub max_two_cells: usize,
    /// Largest `F(a)`.
    pub max_index: usize,
    /// Largest sector of `F(X)`.
    pub max_sector: usize,
    /// Largest `|T|`.
    pub max_types: usize,
    /// Largest copy count `k_t`.
    pub max_copies: usize,
}

impl Default for ScenarioSize {
    fn default() -> Self {
        ScenarioSize {
            max_zero_cells: 3,
            max_one_cells: 3,
            max_two_cells: 2,
            max_index: 2,
            max_sector: 2,
            max_types: 2,
            max_copies: 2,
        }
    }
}

/// A dualizable transformation with its mate, the duals relating them, and a
/// projection modification `p: φ ⇛ φ` that splits `φ` into a subtransformation.
#[derive(Debug, Clone)]
pub struct DualizableScenario {
    pub c: PresentedTwoCat,
    pub f: FunctorData,
    pub g: FunctorData,
    pub phi: TransformationData,
    pub phibar: TransformationData,
    /// `pairs[a].x = φ̄_a`, `pairs[a].xbar = φ_a`.
    pub pairs: Vec<DualPair>,
    pub projection: ModificationData,
    /// Copy counts `k_t`.
    pub copies: Vec<usize>,
    /// Rank of the projection on the copies of each `t`.
    pub ranks: Vec<usize>,
}

/// A presentation with 2-cell generators only between parallel generators.
pub fn random_presentation<R: Rng + ?Sized>(rng: &mut R, size: ScenarioSize) -> PresentedTwoCat {
    let n0 = rng.random_range(1..=size.max_zero_cells.max(1));
    let n1 = rng.random_range(1..=size.max_one_cells.max(1));
    let zero_cells = (0..n0).map(|a| format!("a{}", a + 1)).collect();
    let gen_one_cells: Vec<OneCellGen> = (0..n1)
        .map(|k| OneCellGen { label: format!("X{}", k + 1), src: rng.random_range(0..n0), tgt: rng.random_range(0..n0) })
        .collect();
    let mut parallel = Vec::new();
    for x in 0..n1 {
        for y in 0..n1 {
            if gen_one_cells[x].src == gen_one_cells[y].src && gen_one_cells[x].tgt == gen_one_cells[y].tgt {
                parallel.push((x, y));
            }
        }
    }
    let n2 = rng.random_range(0..=size.max_two_cells);
    let mut gen_two_cells = Vec::new();
    for k in 0..n2 {
        let (x, y) = parallel[rng.random_range(0..parallel.len())];
        gen_two_cells.push(TwoCellGen {
            label: format!("f{}", k + 1),
            source: path_of(&gen_one_cells, x),
            target: path_of(&gen_one_cells, y),
        });
    }
    PresentedTwoCat { zero_cells, gen_one_cells, gen_two_cells, relations: Vec::new() }
}

fn path_of(gens: &[OneCellGen], x: usize) -> super::presentation::Path {
    super::presentation::Path { src: gens[x].src, tgt: gens[x].tgt, gens: vec![x] }
}

/// Components of the 2-cell graph on 1-cell generators.
fn components(c: &PresentedTwoCat) -> Vec<usize> {
    let mut root: Vec<usize> = (0..c.gen_one_cells.len()).collect();
    fn find(root: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while root[r] != r {
            r = root[r];
        }
        root[x] = r;
        r
    }
    for g in &c.gen_two_cells {
        let (x, y) = (find(&mut root, g.source.gens[0]), find(&mut root, g.target.gens[0]));
        root[x.max(y)] = x.min(y);
    }
    (0..root.len()).map(|x| find(&mut root, x)).collect()
}

/// A random scenario; see the module documentation for its shape.
pub fn random_dualizable<R: Rng + ?Sized>(rng: &mut R, size: ScenarioSize) -> Result<DualizableScenario> {
    let c = random_presentation(rng, size);
    random_dualizable_on(rng, c, size)
}

/// A random scenario on a given presentation; its 2-cell generators must relate
/// single parallel generators.
pub fn random_dualizable_on<R: Rng + ?Sized>(rng: &mut R, c: PresentedTwoCat, size: ScenarioSize) -> Result<DualizableScenario> {
    c.validate()?;
    if c.gen_two_cells.iter().any(|g| g.source.len() != 1 || g.target.len() != 1) {
        return Err(Error::InvalidPresentation("2-cell generators must relate single 1-cell generators".into()));
    }
    let on0: Vec<usize> = c.zero_cells.iter().map(|_| rng.random_range(1..=size.max_index.max(1))).collect();
    let on1: Vec<GradedOneCell> = c
        .gen_one_cells
        .iter()
        .map(|g| random::one_cell(rng, on0[g.src], on0[g.tgt], size.max_sector, true))
        .collect();
    let on2: Vec<BlockTwoCell> = c
        .gen_two_cells
        .iter()
        .map(|g| random::two_cell(rng, &on1[g.source.gens[0]], &on1[g.target.gens[0]]))
        .collect();
    let f = FunctorData::new(&c, on0.clone(), on1.clone(), on2.clone())?;

    let s = rng.random_range(1..=size.max_types.max(1));
    let copies: Vec<usize> = (0..s).map(|_| rng.random_range(1..=size.max_copies.max(1))).collect();
    let ranks: Vec<usize> = copies.iter().map(|&k| rng.random_range(0..=k)).collect();
    let frames: Vec<ComplexMatrix> = copies.iter().map(|&k| random::unitary(rng, k)).collect();

    // φ_a with basis labels (i, t, copy).
    let mut labels: Vec<BTreeMap<(usize, usize, usize), usize>> = Vec::new();
    let mut comp0 = Vec::new();
    for &n in &on0 {
        let mut grading = Vec::new();
        let mut pos = BTreeMap::new();
        for i in 0..n {
            for (t, &k) in copies.iter().enumerate() {
                for cp in 0..k {
                    pos.insert((i, t, cp), grading.len());
                    grading.push((i * s + t, i));
                }
            }
        }
        comp0.push(GradedOneCell::new(n, n * s, grading)?);
        labels.push(pos);
    }

    // G(X) = F(X) ⊗ T with basis q·s + t.
    let g_on1: Vec<GradedOneCell> = on1
        .iter()
        .map(|x| {
            let grading = x.grading().iter().flat_map(|&(j, i)| (0..s).map(move |t| (j * s + t, i * s + t))).collect();
            GradedOneCell::new(x.src() * s, x.tgt() * s, grading)
        })
        .collect::<Result<_>>()?;
    let g_on2: Vec<BlockTwoCell> = on2
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let gen = &c.gen_two_cells[k];
            let mat = numeric::kron(m.mat(), &numeric::identity(s));
            BlockTwoCell::new(g_on1[gen.source.gens[0]].clone(), g_on1[gen.target.gens[0]].clone(), mat)
        })
        .collect::<Result<_>>()?;
    let g = FunctorData::new(&c, on0.iter().map(|n| n * s).collect(), g_on1.clone(), g_on2)?;

    // One unitary on the copies per (component, t, sector of F(X)), commuting with the projection.
    let comps = components(&c);
    let mut unitaries: BTreeMap<(usize, usize, usize, usize), ComplexMatrix> = BTreeMap::new();
    let mut gens = Vec::new();
    for (x, gen) in c.gen_one_cells.iter().enumerate() {
        let (a, b) = (gen.src, gen.tgt);
        let fx = &on1[x];
        let source = hcomp1(&comp0[b], fx)?;
        let target = hcomp1(&g_on1[x], &comp0[a])?;
        let src_idx: BTreeMap<(usize, usize), usize> =
            compatible_pairs(&comp0[b], fx).into_iter().enumerate().map(|(k, p)| (p, k)).collect();
        let tgt_idx: BTreeMap<(usize, usize), usize> =
            compatible_pairs(&g_on1[x], &comp0[a]).into_iter().enumerate().map(|(k, p)| (p, k)).collect();
        let mut mat = numeric::zeros(target.dim(), source.dim());
        for (q, &(j, i)) in fx.grading().iter().enumerate() {
            for (t, &k) in copies.iter().enumerate() {
                let u = unitaries.entry((comps[x], t, j, i)).or_insert_with(|| {
                    let r = ranks[t];
                    let inner = dsum(&[random::unitary(rng, r), random::unitary(rng, k - r)]);
                    &frames[t] * inner * frames[t].adjoint()
                });
                for cp in 0..k {
                    let col = src_idx[&(labels[b][&(j, t, cp)], q)];
                    for cq in 0..k {
                        let row = tgt_idx[&(q * s + t, labels[a][&(i, t, cq)])];
                        mat[(row, col)] = u[(cq, cp)];
                    }
                }
            }
        }
        gens.push(BlockTwoCell::new(source, target, mat)?);
    }
    let phi = TransformationData::new(&c, comp0.clone(), gens)?;

    let mut proj = Vec::new();
    for (a, x) in comp0.iter().enumerate() {
        let mut mat = numeric::zeros(x.dim(), x.dim());
        for (&(i, t, cp), &row) in &labels[a] {
            let r = ranks[t];
            let pt = frames[t].columns(0, r) * frames[t].columns(0, r).adjoint();
            for cq in 0..copies[t] {
                mat[(row, labels[a][&(i, t, cq)])] = pt[(cp, cq)];
            }
        }
        proj.push(BlockTwoCell::new(x.clone(), x.clone(), mat)?);
    }

    let pairs = comp0.iter().map(|x| DualPair::standard(&x.transpose())).collect::<Result<Vec<_>>>()?;
    let phibar = mate_transformation(&c, &phi, &pairs, &f, &g)?;
    Ok(DualizableScenario { c, f, g, phi, phibar, pairs, projection: ModificationData { comp: proj }, copies, ranks })
}
