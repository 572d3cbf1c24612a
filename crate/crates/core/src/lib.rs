//! Crossed-module extensions of `ℝⁿ`, the equivariant Brauer group of `𝕋ⁿ`,
//! T-duality decisions, and a discrete non-associative Fell bundle.

pub mod error;
pub mod exterior;
pub mod rational;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod twogroup;
pub mod cohomology;
pub mod brauer;
pub mod ring;
pub mod fellbundle;
pub mod selftest;

pub use brauer::{BrauerClass, Decision, FamilyOverBase, FiberAction, TDualityReport};
pub use cohomology::{Cocycle2, Mode, ObstructionFunction, Phase, PhaseMatrix, Tricharacter};
pub use error::{Error, Result};
pub use exterior::{DualVector, MultiVector};
pub use fellbundle::{FellBundle, FellSection, Grid, GridTricharacter, Kernel};
pub use report::{CheckReport, LawReport};
pub use ring::{CoefficientRing, ExactRing, FloatRing};
pub use scalar::Rational;
pub use twogroup::{GBigon, H1Element, H2Element};
