pub mod error;
pub mod linalg;
pub mod pbw;
pub mod report;
pub mod root_data;
pub mod scalar;
pub mod singular;
pub mod superalgebra;
pub mod verma;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default coefficient field: arbitrary-precision rationals.
pub type Q = num_rational::BigRational;

pub type Weight = root_data::Weight<Q>;
pub type Algebra = root_data::AlgebraData<Q>;
pub type Table = superalgebra::BracketTable<Q>;
pub type Order = pbw::PbwOrder<Q>;
pub type Uea = pbw::UeaElement<Q>;
pub type Module = verma::VermaModule<Q>;
