pub mod bounds;
pub mod consts;
pub mod derivatives;
pub mod error;
pub mod extremal;
pub mod figure;
pub mod gaussian;
pub mod optimize;
pub mod oracle;
pub mod pairwise;
pub mod point;
pub mod quadrature;
pub mod summation;
pub mod verify;

pub use error::{Error, Result};
pub use gaussian::{Evaluation, Method};
pub use num_complex::Complex64;
pub use point::HalfPlanePoint;
