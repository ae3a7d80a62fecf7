pub mod cli;
pub mod error;
pub mod fgl;
pub mod genus;
pub mod lazard;
pub mod normal_form;
pub mod poly;
pub mod report;
pub mod series;
pub mod series2;

pub use error::{AlgebraError, LatticeError};
pub use poly::{Monomial, Poly, Rational, VarTable};
pub use series::Series1;
pub use series2::Series2;
