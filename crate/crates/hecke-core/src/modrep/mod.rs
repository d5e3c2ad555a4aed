//! Finite-dimensional modules over explicitly presented algebras, and the
//! projectivity machinery built on them.

pub mod genalg;
pub mod permmod;
pub mod sigma;
pub mod splitting;

pub use genalg::{AlgebraByGenerators, AlgebraHandle, GenPoly, ModuleRep};
pub use permmod::{example_checks, permutation_module, trivial_hom_spaces};
pub use splitting::{
    hom_space_dense, hom_space_to_algebra, module_word_tables, splitting_projectivity_oracle,
};
pub use sigma::{
    annihilator_projectivity_test, build_sigma, default_sigma_scalars, embedded_sigma,
    jordan_type_of_action, sigma_jordan_type, sigma_poly, SigmaData,
};
