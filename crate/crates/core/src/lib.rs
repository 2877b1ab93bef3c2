//! Jacobi diagram algebra with IHX rewriting and derived brackets, a
//! torsion-decorated weight system for rational homology spheres, and the
//! free Lie algebra computations behind the W-factor constant.

pub mod diagram;
pub mod error;
pub mod freelie;
pub mod homology;
pub mod invariance;
pub mod json;
pub mod operators;
pub mod rewrite;
pub mod weights;

pub use diagram::{canonicalize, Canonical, DiagramSum, JacobiGraph};
pub use error::{LmoError, Result};
pub use freelie::{NcPoly, TangentialDeriv};
pub use homology::{LinkingMatrix, TorsionData};
pub use rewrite::{normal_form, RewriteTrace};
pub use weights::{ComplexValue, DecoratedOperator, ExactComplex};
