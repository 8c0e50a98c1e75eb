//! Finitely presented 2-categories, *-2-functors into graded matrices,
//! transformations between them, and Q-systems in the functor 2-category.

pub mod construction;
pub mod endf;
pub mod functor;
pub mod presentation;
pub mod scenario;
pub mod theorem;
pub mod transformation;

pub use construction::{construct_g, GConstruction};
pub use endf::{
    check_endf_qsystem, constant_functor_scenario, qsystem_from_dual_transformations, qsystem_from_dualizable_transformation,
    trivial_endf_qsystem, EndFQSystem,
};
pub use functor::{check_functor, FunctorData, TwoFunctor};
pub use scenario::{random_dualizable, random_dualizable_on, random_presentation, DualizableScenario, ScenarioSize};
pub use theorem::verify_main_theorem;
pub use presentation::{Expr, OneCellGen, Path, PresentedTwoCat, TwoCellGen};
pub use transformation::{
    check_modification, check_transformation, identity_modification, identity_transformation, mate_transformation,
    split_modification_projection, tensor_modifications, tensor_transformations, vcomp_modifications,
    ModificationData, TransformationData,
};
