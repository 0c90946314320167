//! Local cohomology, Ext modules and Stanley filtrations of monomial
//! quotients, computed degree by degree over a prime field.

pub mod betti;
pub mod cech;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod ext;
pub mod linalg;
pub mod monomial;
pub mod stanley;
pub mod taylor;

pub use error::{Error, Result};
pub use linalg::PrimeField;
pub use monomial::{Face, MonomialIdeal, Multidegree};
