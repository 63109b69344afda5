//! Exact p-adic computations for overconvergent Eichler–Shimura theory at desk scale.

pub mod analytic;
pub mod complex;
pub mod distributions;
pub mod eichler_shimura;
pub mod fredholm;
pub mod intlinalg;
pub mod error;
pub mod iwasawa;
pub mod monoid;
pub mod padic;
pub mod ring;
pub mod sample;
pub mod suites;
pub mod tensor;
pub mod weights;

pub use error::{Error, Result};
pub use iwasawa::{IwasawaElement, IwasawaRing};
pub use padic::{PadicContext, PadicElement};
pub use ring::{Residue, Ring, RingParams};
pub use monoid::MonoidMatrix;
pub use weights::{integer_weight, Weight, WeightKind};
pub use analytic::AmiceFunction;
pub use distributions::{Distribution, FiniteDistribution, WeightKPolynomial};
pub use eichler_shimura::PeriodPoint;
