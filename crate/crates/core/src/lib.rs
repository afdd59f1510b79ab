//! Exact first descent machinery for elliptic curves with full rational
//! p-torsion over `K = Q(zeta_p)`, `p = 3, 5`.
//!
//! The crate provides, over exact cyclotomic arithmetic:
//!
//! * the plane Hesse cubic family and the quintic normal-curve family in
//!   `P^4`, with their torsion translation matrices ([`hesse`], [`quintic`],
//!   [`matrix`]),
//! * the rational functions realizing the descent map to
//!   `K*/K*^p x K*/K*^p` and p-th power class bookkeeping ([`descent`],
//!   [`embed`]),
//! * Kummer algebras `K[alpha]/(alpha^p - a)`, norm-equation search, and the
//!   torsor models (cubic and quintic) attached to a descent class
//!   ([`kummer`], [`torsor`]),
//! * local branch expansions used to certify vanishing orders ([`series`]).
//!
//! Everything is exact: no floating point value ever decides a mathematical
//! claim. Floating approximations appear only as seeds and magnitude
//! heuristics inside [`embed`], and every conclusion drawn there is verified
//! by exact re-computation.

pub mod cyclo;
pub mod descent;
pub mod embed;
pub mod error;
pub mod forms;
pub mod hesse;
pub mod kummer;
pub mod matrix;
pub mod point;
pub mod quintic;
pub mod rational;
pub mod series;
mod smallint;
pub mod torsor;

pub use cyclo::{CycloElement, Prime};
pub use descent::{DescentFunctions, DescentImage, PthPowerClass};
pub use error::{Error, Result};
pub use forms::Form;
pub use hesse::HesseCurve;
pub use kummer::{KummerAlgebra, KummerElement};
pub use matrix::{Matrix, TorsionMatrix};
pub use point::ProjectivePoint;
pub use quintic::QuinticCurve;
pub use rational::Rational;
pub use series::{BranchSeries, Series};
pub use torsor::{CubicTorsor, QuinticTorsor, TorsorCheck, TorsorReport};
