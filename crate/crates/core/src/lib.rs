//! Fitting ideals, blow-up charts and quotient presentations for graded
//! unipotent actions on affine cones.

pub mod cone;
pub mod driver;
pub mod error;
pub mod fitting;
pub mod generators;
pub mod io;
pub mod membership;
pub mod modification;
pub mod quotient;

pub use cone::{ConeInstance, GradedAlgebra, LndAction, SliceData, VerifyReport};
pub use error::{CoreError, Result};
pub use fitting::{compute_index, fitting_report, FittingReport, IndexE, IndexPair};
pub use modification::{modify, Chart, CentreData, ModKind};
