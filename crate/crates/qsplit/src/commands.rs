//! The subcommands, as functions from input text to a report or a file.

use qsplit_core::funcat::{
    check_endf_qsystem, check_functor, constant_functor_scenario, construct_g, qsystem_from_dual_transformations,
    random_dualizable, random_presentation, verify_main_theorem, ScenarioSize, TwoFunctor,
};
use qsplit_core::qsystem::{check_qsystem, qsystem_from_dual, DualPair, QSystemData};
use qsplit_core::splitting::{check_split, split_qsystem_seeded};
use qsplit_core::{random, Report, Tolerance};
use serde_json::Value;

use crate::error::CliError;
use crate::format::{Body, FileDto, QSystemDto, ScenarioDto, SplitDto};
use crate::report::Outcome;

/// Largest accepted `--size`.
pub const MAX_SIZE: usize = 4;
/// Bound on the dimension of generated Q-systems.
pub const MAX_QSYSTEM_DIM: usize = 64;
/// Bound on the dimension of the Q-system behind a generated constant scenario.
pub const MAX_CONSTANT_DIM: usize = 16;

/// Flags shared by the reading subcommands; they override values stored in the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub gap_tol: Option<f64>,
    pub seed: Option<u64>,
}

impl Overrides {
    fn tolerance(&self, file: &FileDto) -> Result<Tolerance, CliError> {
        let base = file.tolerance().unwrap_or_default();
        Ok(Tolerance::new(self.tol.unwrap_or(base.atol), self.gap_tol.unwrap_or(base.gap_tol))?)
    }

    fn seed(&self, file: &FileDto) -> u64 {
        self.seed.or(file.seed).unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Qsystem,
    Scenario,
    Constant,
}

fn wrong_kind(expected: &str) -> CliError {
    CliError::Parse(format!("expected a file of kind \"{expected}\""))
}

/// Q-system axioms for a `qsystem` file; functor and End(F) Q-system axioms for a `scenario` file.
pub fn check_qsystem_file(text: &str, o: Overrides) -> Result<Outcome, CliError> {
    let file = FileDto::parse(text)?;
    let tol = o.tolerance(&file)?;
    match &file.body {
        Body::Qsystem(dto) => {
            let q = dto.to_qsystem()?;
            Ok(Outcome::new("check-qsystem", check_qsystem(&q, tol)?.with_threshold(tol.atol)).info("dim", q.q.dim()))
        }
        Body::Scenario(dto) => {
            let (c, f, q) = dto.to_parts()?;
            let mut r = Report::new();
            r.absorb("F", check_functor(&c, &f, tol)?);
            r.absorb("", check_endf_qsystem(&c, &q, &f, tol)?);
            Ok(Outcome::new("check-qsystem", r).info("zero_cells", c.zero_cells.len()))
        }
        Body::Split(_) => Err(wrong_kind("qsystem")),
    }
}

/// Splits the Q-system of a `qsystem` file. The split is only returned when the input passes its axioms.
pub fn split_qsystem_file(text: &str, o: Overrides) -> Result<(Outcome, Option<FileDto>), CliError> {
    let file = FileDto::parse(text)?;
    let tol = o.tolerance(&file)?;
    let Body::Qsystem(dto) = &file.body else { return Err(wrong_kind("qsystem")) };
    let q = dto.to_qsystem()?;
    let mut r = Report::new();
    r.absorb("input", check_qsystem(&q, tol)?.with_threshold(tol.atol));
    if !r.passed() {
        return Ok((Outcome::new("split-qsystem", r), None));
    }
    let s = split_qsystem_seeded(&q, tol, o.seed(&file))?;
    r.absorb("", check_split(&q, &s, tol)?.with_threshold(tol.loose()));
    let out = Outcome::new("split-qsystem", r).info("k", s.k).info("block_dims", s.block_dims());
    let mut split = FileDto::new(Body::Split(SplitDto::from_split(&s)));
    split.seed = Some(o.seed(&file));
    Ok((out, Some(split)))
}

/// Builds the splitting `(G, φ, φ̄, γ)` of a scenario's End(F) Q-system and checks it.
pub fn verify_fun_file(text: &str, o: Overrides) -> Result<Outcome, CliError> {
    let file = FileDto::parse(text)?;
    let tol = o.tolerance(&file)?;
    let Body::Scenario(dto) = &file.body else { return Err(wrong_kind("scenario")) };
    let (c, f, q) = dto.to_parts()?;
    let mut r = Report::new();
    r.absorb("input F", check_functor(&c, &f, tol)?);
    r.absorb("input", check_endf_qsystem(&c, &q, &f, tol)?);
    if !r.passed() {
        return Ok(Outcome::new("verify-fun", r));
    }
    let g = construct_g(&c, &f, &q, tol, o.seed(&file))?;
    r.absorb("", verify_main_theorem(&g, tol)?);
    let dims: Vec<usize> = (0..c.zero_cells.len()).map(|a| g.zero_cell(a)).collect();
    Ok(Outcome::new("verify-fun", r).info("G_dims", dims))
}

fn check_size(size: usize) -> Result<(), CliError> {
    if size == 0 || size > MAX_SIZE {
        return Err(CliError::Parse(format!("--size must be between 1 and {MAX_SIZE}")));
    }
    Ok(())
}

/// `X ⊠ X̄` for a random full-support `X` with index sets and sectors bounded by `size`,
/// redrawn until its dimension is at most `max_dim`.
fn random_qsystem(rng: &mut random::SeededRng, size: usize, max_dim: usize) -> Result<QSystemData, CliError> {
    loop {
        let src = rand_range(rng, size);
        let tgt = rand_range(rng, size);
        let x = random::one_cell(rng, src, tgt, size, true);
        let q = qsystem_from_dual(&DualPair::standard(&x)?)?;
        if q.q.dim() <= max_dim {
            return Ok(q);
        }
    }
}

fn rand_range(rng: &mut random::SeededRng, n: usize) -> usize {
    use rand::Rng;
    rng.random_range(1..=n)
}

fn scenario_size(size: usize) -> ScenarioSize {
    ScenarioSize {
        max_zero_cells: size.min(3),
        max_one_cells: size,
        max_two_cells: size - 1,
        max_index: size.min(2),
        max_sector: size,
        max_types: size.min(2),
        max_copies: size.min(2),
    }
}

/// A random input file of the requested kind; each passes its checker.
pub fn generate(kind: GenKind, size: usize, seed: u64) -> Result<FileDto, CliError> {
    check_size(size)?;
    let mut rng = random::seeded(seed);
    let body = match kind {
        GenKind::Qsystem => Body::Qsystem(QSystemDto::from_qsystem(&random_qsystem(&mut rng, size, MAX_QSYSTEM_DIM)?)),
        GenKind::Scenario => {
            let s = random_dualizable(&mut rng, scenario_size(size))?;
            let q = qsystem_from_dual_transformations(&s.c, &s.phi, &s.phibar, &s.pairs, &s.f, &s.g)?;
            Body::Scenario(ScenarioDto::from_parts(&s.c, &s.f, &q))
        }
        GenKind::Constant => {
            let c = random_presentation(&mut rng, scenario_size(size));
            let q = random_qsystem(&mut rng, size, MAX_CONSTANT_DIM)?;
            let (f, e) = constant_functor_scenario(&c, &q, Tolerance::default())?;
            Body::Scenario(ScenarioDto::from_parts(&c, &f, &e))
        }
    };
    let mut file = FileDto::new(body);
    file.seed = Some(seed);
    Ok(file)
}

/// A `scenario` file for the functor constant at `q` on the given presentation.
pub fn constant_scenario_file(c: &qsplit_core::funcat::PresentedTwoCat, q: &QSystemData) -> Result<FileDto, CliError> {
    let (f, e) = constant_functor_scenario(c, q, Tolerance::default())?;
    Ok(FileDto::new(Body::Scenario(ScenarioDto::from_parts(c, &f, &e))))
}

/// Summary facts of a file, for `gen` output.
pub fn describe(file: &FileDto) -> Value {
    match &file.body {
        Body::Qsystem(q) => serde_json::json!({"kind": "qsystem", "dim": q.q.grading.len()}),
        Body::Scenario(s) => serde_json::json!({
            "kind": "scenario",
            "zero_cells": s.presentation.zero_cells.len(),
            "one_cells": s.presentation.one_cells.len(),
            "two_cells": s.presentation.two_cells.len(),
        }),
        Body::Split(s) => serde_json::json!({"kind": "split", "k": s.k}),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_files_pass_their_checkers() {
        for seed in 0..3 {
            let q = generate(GenKind::Qsystem, 2, seed).unwrap().to_json();
            assert!(check_qsystem_file(&q, Overrides::default()).unwrap().passed());
            let s = generate(GenKind::Scenario, 2, seed).unwrap().to_json();
            assert!(check_qsystem_file(&s, Overrides::default()).unwrap().passed());
            let k = generate(GenKind::Constant, 2, seed).unwrap().to_json();
            assert!(verify_fun_file(&k, Overrides::default()).unwrap().passed());
        }
    }

    #[test]
    fn size_is_bounded() {
        assert!(matches!(generate(GenKind::Qsystem, 0, 1), Err(CliError::Parse(_))));
        assert!(matches!(generate(GenKind::Qsystem, MAX_SIZE + 1, 1), Err(CliError::Parse(_))));
    }

    #[test]
    fn file_values_are_overridden_by_flags() {
        let mut f = generate(GenKind::Qsystem, 1, 3).unwrap();
        f.tol = Some(crate::format::TolDto { atol: 1e-6, gap_tol: 1e-3 });
        f.seed = Some(9);
        let o = Overrides { tol: Some(1e-8), gap_tol: None, seed: None };
        assert_eq!(o.tolerance(&f).unwrap(), Tolerance { atol: 1e-8, gap_tol: 1e-3 });
        assert_eq!(o.seed(&f), 9);
        let bad = Overrides { tol: Some(-1.0), ..Default::default() };
        assert!(matches!(bad.tolerance(&f), Err(CliError::Parse(_))));
    }
}
