//! Expert votes for statistical decision problems.
//!
//! Exact-capable computations are generic over [`Scalar`] (f32, f64 and
//! `BigRational`); special-function computations are generic over [`Real`].
//! The aliases below pin the common instantiations.
pub mod error;
pub mod numerics;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{parse_rational, parse_real, Real, Scalar};
pub mod bolshev;
pub mod compatible;
pub mod ghost;
pub mod harness;
pub mod model_file;
pub mod simple_choice;
pub mod stable;

use num::rational::BigRational;

/// Exact rational probabilities.
pub type Rational = BigRational;

/// Two-density model with exact rational masses.
pub type ExactTwoDensityModel = simple_choice::TwoDensityModel<BigRational>;
/// Two-density model with f64 masses.
pub type FloatTwoDensityModel = simple_choice::TwoDensityModel<f64>;
/// Discrete stable family with exact rational masses.
pub type ExactFamilyModel = stable::DiscreteFamilyModel<BigRational>;
/// Discrete stable family with f64 masses.
pub type FloatFamilyModel = stable::DiscreteFamilyModel<f64>;
/// Continuous or count family with f64 constants.
pub type Family = compatible::FamilyDescriptor<f64>;
/// Parameter distribution with f64 atoms and laws.
pub type Distribution = compatible::ParamDistribution<f64>;
