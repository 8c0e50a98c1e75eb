//! The JSON scenario format: 1-based indices, complex numbers as `[re, im]`.

use std::collections::BTreeMap;

use qsplit_core::funcat::{EndFQSystem, Expr, FunctorData, ModificationData, OneCellGen, Path, PresentedTwoCat, TransformationData, TwoCellGen};
use qsplit_core::qsystem::QSystemData;
use qsplit_core::splitting::SplitResult;
use qsplit_core::{BlockTwoCell, ComplexMatrix, GradedOneCell, Tolerance, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneCellDto {
    pub src: usize,
    pub tgt: usize,
    pub grading: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoCellDto {
    pub source: OneCellDto,
    pub target: OneCellDto,
    pub mat: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolDto {
    pub atol: f64,
    pub gap_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QSystemDto {
    pub q: OneCellDto,
    pub m: TwoCellDto,
    pub i: TwoCellDto,
}

/// A path of generator labels, leftmost applied last; `at` names the 0-cell of an empty path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathDto {
    pub gens: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneCellGenDto {
    pub label: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoCellGenDto {
    pub label: String,
    pub source: PathDto,
    pub target: PathDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExprDto {
    Gen(String),
    Id(PathDto),
    Comp(Box<ExprDto>, Box<ExprDto>),
    Tensor(Box<ExprDto>, Box<ExprDto>),
    Dagger(Box<ExprDto>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDto {
    pub zero_cells: Vec<String>,
    pub one_cells: Vec<OneCellGenDto>,
    #[serde(default)]
    pub two_cells: Vec<TwoCellGenDto>,
    #[serde(default)]
    pub relations: Vec<[ExprDto; 2]>,
}

/// Images listed in presentation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDto {
    pub on0: Vec<usize>,
    pub on1: Vec<OneCellDto>,
    #[serde(default)]
    pub on2: Vec<TwoCellDto>,
}

/// Components per 0-cell and per 1-cell generator, in presentation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformationDto {
    pub comp0: Vec<OneCellDto>,
    pub comp1: Vec<TwoCellDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndFQSystemDto {
    pub psi: TransformationDto,
    pub m: Vec<TwoCellDto>,
    pub i: Vec<TwoCellDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDto {
    pub presentation: PresentationDto,
    pub functor: FunctorDto,
    pub qsystem: EndFQSystemDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitDto {
    pub k: usize,
    pub block_dims: Vec<usize>,
    pub x: OneCellDto,
    pub xbar: OneCellDto,
    pub ev: TwoCellDto,
    pub coev: TwoCellDto,
    pub gamma: TwoCellDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Body {
    Qsystem(QSystemDto),
    Scenario(ScenarioDto),
    Split(SplitDto),
}

/// A complete file: `{"schema": 1, "kind": ..., ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDto {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<TolDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub body: Body,
}

impl FileDto {
    pub fn new(body: Body) -> Self {
        FileDto { schema: SCHEMA, tol: None, seed: None, body }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let f: FileDto = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if f.schema != SCHEMA {
            return Err(CliError::Parse(format!("unsupported schema {} (expected {SCHEMA})", f.schema)));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn tolerance(&self) -> Option<Tolerance> {
        self.tol.map(|t| Tolerance { atol: t.atol, gap_tol: t.gap_tol })
    }
}

fn shape(msg: impl Into<String>) -> CliError {
    CliError::Shape(msg.into())
}

/// Subtract one from a 1-based index, rejecting 0.
fn zero_based(k: usize, what: &str) -> Result<usize, CliError> {
    k.checked_sub(1).ok_or_else(|| shape(format!("{what} indices are 1-based; found 0")))
}

impl OneCellDto {
    pub fn from_cell(x: &GradedOneCell) -> Self {
        OneCellDto { src: x.src(), tgt: x.tgt(), grading: x.grading().iter().map(|&(r, c)| [r + 1, c + 1]).collect() }
    }

    pub fn to_cell(&self) -> Result<GradedOneCell, CliError> {
        let grading = self
            .grading
            .iter()
            .map(|&[r, c]| Ok((zero_based(r, "grading")?, zero_based(c, "grading")?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(GradedOneCell::new(self.src, self.tgt, grading)?)
    }
}

impl TwoCellDto {
    pub fn from_cell(f: &BlockTwoCell) -> Self {
        let m = f.mat();
        let mat = (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect();
        TwoCellDto { source: OneCellDto::from_cell(f.source()), target: OneCellDto::from_cell(f.target()), mat }
    }

    pub fn to_cell(&self) -> Result<BlockTwoCell, CliError> {
        let source = self.source.to_cell()?;
        let target = self.target.to_cell()?;
        let (rows, cols) = (target.dim(), source.dim());
        if self.mat.len() != rows || self.mat.iter().any(|r| r.len() != cols) {
            return Err(shape(format!("matrix must be {rows} x {cols} to map the source to the target")));
        }
        if self.mat.iter().flatten().flatten().any(|v| !v.is_finite()) {
            return Err(CliError::Parse("matrix entries must be finite".into()));
        }
        let m = ComplexMatrix::from_fn(rows, cols, |r, c| {
            let [re, im] = self.mat[r][c];
            C64::new(re, im)
        });
        Ok(BlockTwoCell::new(source, target, m)?)
    }
}

impl QSystemDto {
    pub fn from_qsystem(q: &QSystemData) -> Self {
        QSystemDto { q: OneCellDto::from_cell(&q.q), m: TwoCellDto::from_cell(&q.m), i: TwoCellDto::from_cell(&q.i) }
    }

    pub fn to_qsystem(&self) -> Result<QSystemData, CliError> {
        Ok(QSystemData::new(self.q.to_cell()?, self.m.to_cell()?, self.i.to_cell()?)?)
    }
}

impl SplitDto {
    pub fn from_split(s: &SplitResult) -> Self {
        SplitDto {
            k: s.k,
            block_dims: s.block_dims(),
            x: OneCellDto::from_cell(&s.pair.x),
            xbar: OneCellDto::from_cell(&s.pair.xbar),
            ev: TwoCellDto::from_cell(&s.pair.ev),
            coev: TwoCellDto::from_cell(&s.pair.coev),
            gamma: TwoCellDto::from_cell(&s.gamma),
        }
    }
}

/// Label lookup tables for a presentation.
struct Labels {
    zero: BTreeMap<String, usize>,
    one: BTreeMap<String, usize>,
    two: BTreeMap<String, usize>,
}

fn index_labels<'a>(labels: impl Iterator<Item = &'a String>, what: &str) -> Result<BTreeMap<String, usize>, CliError> {
    let mut out = BTreeMap::new();
    for (k, l) in labels.enumerate() {
        if out.insert(l.clone(), k).is_some() {
            return Err(shape(format!("duplicate {what} label {l:?}")));
        }
    }
    Ok(out)
}

impl Labels {
    fn lookup(map: &BTreeMap<String, usize>, l: &str, what: &str) -> Result<usize, CliError> {
        map.get(l).copied().ok_or_else(|| shape(format!("unknown {what} {l:?}")))
    }

    fn path(&self, c: &PresentedTwoCat, p: &PathDto) -> Result<Path, CliError> {
        if p.gens.is_empty() {
            let at = p.at.as_deref().ok_or_else(|| shape("an empty path needs its 0-cell in \"at\""))?;
            return Ok(Path::empty(Self::lookup(&self.zero, at, "0-cell")?));
        }
        let gens = p.gens.iter().map(|l| Self::lookup(&self.one, l, "1-cell generator")).collect::<Result<Vec<_>, _>>()?;
        let path = c.path(&gens)?;
        if let Some(at) = &p.at {
            if Self::lookup(&self.zero, at, "0-cell")? != path.src {
                return Err(shape(format!("path {:?} does not start at {at:?}", p.gens)));
            }
        }
        Ok(path)
    }

    fn expr(&self, c: &PresentedTwoCat, e: &ExprDto) -> Result<Expr, CliError> {
        Ok(match e {
            ExprDto::Gen(l) => Expr::Gen(Self::lookup(&self.two, l, "2-cell generator")?),
            ExprDto::Id(p) => Expr::Id(self.path(c, p)?),
            ExprDto::Comp(g, f) => Expr::comp(self.expr(c, g)?, self.expr(c, f)?),
            ExprDto::Tensor(g, f) => Expr::tensor(self.expr(c, g)?, self.expr(c, f)?),
            ExprDto::Dagger(g) => Expr::dagger(self.expr(c, g)?),
        })
    }
}

fn path_dto(c: &PresentedTwoCat, p: &Path) -> PathDto {
    PathDto {
        gens: p.gens.iter().map(|&x| c.gen_one_cells[x].label.clone()).collect(),
        at: p.is_empty().then(|| c.zero_cells[p.src].clone()),
    }
}

fn expr_dto(c: &PresentedTwoCat, e: &Expr) -> ExprDto {
    match e {
        Expr::Gen(k) => ExprDto::Gen(c.gen_two_cells[*k].label.clone()),
        Expr::Id(p) => ExprDto::Id(path_dto(c, p)),
        Expr::Comp(g, f) => ExprDto::Comp(Box::new(expr_dto(c, g)), Box::new(expr_dto(c, f))),
        Expr::Tensor(g, f) => ExprDto::Tensor(Box::new(expr_dto(c, g)), Box::new(expr_dto(c, f))),
        Expr::Dagger(g) => ExprDto::Dagger(Box::new(expr_dto(c, g))),
    }
}

impl PresentationDto {
    pub fn from_presentation(c: &PresentedTwoCat) -> Self {
        PresentationDto {
            zero_cells: c.zero_cells.clone(),
            one_cells: c
                .gen_one_cells
                .iter()
                .map(|g| OneCellGenDto {
                    label: g.label.clone(),
                    src: c.zero_cells[g.src].clone(),
                    tgt: c.zero_cells[g.tgt].clone(),
                })
                .collect(),
            two_cells: c
                .gen_two_cells
                .iter()
                .map(|g| TwoCellGenDto { label: g.label.clone(), source: path_dto(c, &g.source), target: path_dto(c, &g.target) })
                .collect(),
            relations: c.relations.iter().map(|(l, r)| [expr_dto(c, l), expr_dto(c, r)]).collect(),
        }
    }

    pub fn to_presentation(&self) -> Result<PresentedTwoCat, CliError> {
        let zero = index_labels(self.zero_cells.iter(), "0-cell")?;
        let one = index_labels(self.one_cells.iter().map(|g| &g.label), "1-cell generator")?;
        let two = index_labels(self.two_cells.iter().map(|g| &g.label), "2-cell generator")?;
        let labels = Labels { zero, one, two };
        let mut c = PresentedTwoCat { zero_cells: self.zero_cells.clone(), ..Default::default() };
        for g in &self.one_cells {
            c.gen_one_cells.push(OneCellGen {
                label: g.label.clone(),
                src: Labels::lookup(&labels.zero, &g.src, "0-cell")?,
                tgt: Labels::lookup(&labels.zero, &g.tgt, "0-cell")?,
            });
        }
        for g in &self.two_cells {
            let (source, target) = (labels.path(&c, &g.source)?, labels.path(&c, &g.target)?);
            c.gen_two_cells.push(TwoCellGen { label: g.label.clone(), source, target });
        }
        for [l, r] in &self.relations {
            let pair = (labels.expr(&c, l)?, labels.expr(&c, r)?);
            c.relations.push(pair);
        }
        c.validate()?;
        Ok(c)
    }
}

fn cells(v: &[OneCellDto]) -> Result<Vec<GradedOneCell>, CliError> {
    v.iter().map(OneCellDto::to_cell).collect()
}

fn two_cells(v: &[TwoCellDto]) -> Result<Vec<BlockTwoCell>, CliError> {
    v.iter().map(TwoCellDto::to_cell).collect()
}

impl FunctorDto {
    pub fn from_functor(f: &FunctorData) -> Self {
        FunctorDto {
            on0: f.on0.clone(),
            on1: f.on1.iter().map(OneCellDto::from_cell).collect(),
            on2: f.on2.iter().map(TwoCellDto::from_cell).collect(),
        }
    }

    pub fn to_functor(&self, c: &PresentedTwoCat) -> Result<FunctorData, CliError> {
        Ok(FunctorData::new(c, self.on0.clone(), cells(&self.on1)?, two_cells(&self.on2)?)?)
    }
}

impl TransformationDto {
    /// Generator components only; stored composite components are not written.
    pub fn from_transformation(c: &PresentedTwoCat, t: &TransformationData) -> Self {
        TransformationDto {
            comp0: t.comp0.iter().map(OneCellDto::from_cell).collect(),
            comp1: (0..c.gen_one_cells.len()).map(|k| TwoCellDto::from_cell(&t.comp1[&c.generator_path(k)])).collect(),
        }
    }

    pub fn to_transformation(&self, c: &PresentedTwoCat) -> Result<TransformationData, CliError> {
        Ok(TransformationData::new(c, cells(&self.comp0)?, two_cells(&self.comp1)?)?)
    }
}

impl ScenarioDto {
    pub fn from_parts(c: &PresentedTwoCat, f: &FunctorData, q: &EndFQSystem) -> Self {
        ScenarioDto {
            presentation: PresentationDto::from_presentation(c),
            functor: FunctorDto::from_functor(f),
            qsystem: EndFQSystemDto {
                psi: TransformationDto::from_transformation(c, &q.psi),
                m: q.m.comp.iter().map(TwoCellDto::from_cell).collect(),
                i: q.i.comp.iter().map(TwoCellDto::from_cell).collect(),
            },
        }
    }

    pub fn to_parts(&self) -> Result<(PresentedTwoCat, FunctorData, EndFQSystem), CliError> {
        let c = self.presentation.to_presentation()?;
        let f = self.functor.to_functor(&c)?;
        let n0 = c.zero_cells.len();
        if self.qsystem.m.len() != n0 || self.qsystem.i.len() != n0 {
            return Err(shape("m and i need one component per 0-cell"));
        }
        let q = EndFQSystem {
            psi: self.qsystem.psi.to_transformation(&c)?,
            m: ModificationData { comp: two_cells(&self.qsystem.m)? },
            i: ModificationData { comp: two_cells(&self.qsystem.i)? },
        };
        Ok((c, f, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsplit_core::qsystem::{qsystem_from_dual, DualPair};

    #[test]
    fn one_cells_round_trip_with_one_based_indices() {
        let x = GradedOneCell::new(2, 3, vec![(0, 1), (2, 0)]).unwrap();
        let d = OneCellDto::from_cell(&x);
        assert_eq!(d.grading, vec![[1, 2], [3, 1]]);
        assert_eq!(d.to_cell().unwrap(), x);
        let bad = OneCellDto { src: 1, tgt: 1, grading: vec![[0, 1]] };
        assert!(matches!(bad.to_cell(), Err(CliError::Shape(_))));
    }

    #[test]
    fn qsystem_files_round_trip() {
        let x = GradedOneCell::new(1, 2, vec![(0, 0), (1, 0)]).unwrap();
        let q = qsystem_from_dual(&DualPair::standard(&x).unwrap()).unwrap();
        let file = FileDto::new(Body::Qsystem(QSystemDto::from_qsystem(&q)));
        let text = file.to_json();
        let back = FileDto::parse(&text).unwrap();
        assert_eq!(back, file);
        let Body::Qsystem(dto) = back.body else { panic!("wrong kind") };
        assert_eq!(dto.to_qsystem().unwrap(), q);
    }

    #[test]
    fn wrong_schema_and_garbage_are_parse_errors() {
        assert!(matches!(FileDto::parse("{"), Err(CliError::Parse(_))));
        let text = r#"{"schema": 2, "kind": "qsystem"}"#;
        assert!(matches!(FileDto::parse(text), Err(CliError::Parse(_))));
    }

    #[test]
    fn matrix_shape_is_checked() {
        let x = GradedOneCell::new(1, 1, vec![(0, 0)]).unwrap();
        let d = TwoCellDto { source: OneCellDto::from_cell(&x), target: OneCellDto::from_cell(&x), mat: vec![] };
        assert!(matches!(d.to_cell(), Err(CliError::Shape(_))));
    }
}
