//! Exact computations in Iwahori-Hecke algebras of symmetric groups at a
//! primitive l-th root of unity, over Q(zeta_l) or a finite field GF(p^k).
//!
//! The centrepiece is the explicit basic algebra of the principal block of
//! H_q(l): orthogonal idempotents built from signed and unsigned Young
//! symmetrizers, arrows between neighbouring vertices realized by concrete
//! double-coset representatives, and the Brauer-line relations they satisfy.
//! On top of that sit module-theoretic tools: permutation modules, tensor
//! powers of the block algebra, and two independent projectivity tests.

pub mod error;
pub mod field;
pub mod perm;
pub mod cosets;
pub mod linalg;
pub mod algebra;
pub mod block;
pub mod modrep;
pub mod report;
pub mod suites;

pub use error::{Error, Result};
pub use field::{Field, FieldKind, FieldSpec, Scalar};
pub use perm::Permutation;
pub use cosets::{Composition, Interval, MarginMatrix, SplitComposition};
pub use algebra::{HeckeAlgebra, HeckeElement};
pub use block::{BlockConstruction, QuiverPresentation};
pub use modrep::{AlgebraByGenerators, AlgebraHandle, GenPoly, ModuleRep};
pub use report::{Check, CheckStatus, RunReport};
