//! Braid group actions on homotopy categories of projective modules over the
//! Brauer star algebra `N^n_n` and the zigzag (Brauer line) algebra, checked
//! by exact linear algebra.
//!
//! Everything is generic over [`scalar::Field`]; the aliases below fix the
//! field to the rationals.

pub mod algebra;
pub mod bimodule;
pub mod braid;
pub mod complex;
pub mod homotopy;
pub mod linalg;
pub mod minimize;
pub mod scalar;
pub mod suite;
pub mod twist;

pub use algebra::{Algebra, AlgebraKind, AlgebraSpec, NamedMorphism, Vertex};
pub use bimodule::{verify_inverse_bimodule, BimoduleComplexCheck};
pub use braid::{oracle_compare, BraidOracle, BraidWord, GroupId, OracleStatus, OracleVerdict};
pub use complex::{ChainMap, ProjComplex};
pub use homotopy::{homotopy_equivalent, EquivalenceStatus};
pub use minimize::minimize;
pub use scalar::{Field, Fp, Rational, F32003};
pub use suite::{run_suite, SuiteName, SuiteOptions, SuiteReport};
pub use twist::{FunctorWord, TwistEngine, TwistLetter};

pub type RationalComplex = ProjComplex<Rational>;
pub type RationalChainMap = ChainMap<Rational>;
pub type RationalEngine = TwistEngine<Rational>;
pub type RationalOracle = BraidOracle<Rational>;
