//! Riemann boundary value problems for monogenic functions in the Clifford
//! algebra `R₀,₂`, reduced to pairs of complex problems on a closed contour.

pub mod boundary;
pub mod cauchy;
pub mod clifford;
pub mod contour;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod rbvp;
pub mod scalar;
pub mod sectional;
mod spectral;
pub mod verify;

pub use boundary::BoundaryFunction;
pub use cauchy::{CauchyIntegral, Plemelj};
pub use clifford::{CliffordElement, EvenElement, HatPair};
pub use contour::{Contour, PointLocation, Region, Winding};
pub use error::{Error, Result};
pub use expr::Expr;
pub use rbvp::{
    CliffordRbvp, CliffordSolution, ConformalMaps, FamilyKind, HatData, Regime, SolveOptions,
    UpsilonPair,
};
pub use scalar::{ScalarRbvp, ScalarSolution, Status};
pub use sectional::{SectionalFunction, Side};
